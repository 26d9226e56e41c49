//! Canonical subgeometries `Σ_π` of `PG(t-1, q^t)`, the maps `φ_π` and
//! `Φ_h`, projections from a center to an axis, the set
//! `𝕃 = {⟨(λ, λ^q)⟩}` and equivalence testing of point sets on a line.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{theta, Elem, FieldCtx};
use crate::linalg::Matrix;
use crate::projgeom::{moore_det_nonzero, ProjPoint, ProjSubspace, SemilinearMap};

/// Largest `q^t` accepted by [`projectively_equivalent_on_line`].
pub const MAX_LINE_EQUIV_ORDER: u32 = 128;

/// A permutation of `{0, …, t-1}` given by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let t = images.len();
        let mut seen = vec![false; t];
        for &i in &images {
            if i >= t || seen[i] {
                return Err(Error::InvalidPermutation(t));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(t: usize) -> Perm {
        Perm((0..t).collect())
    }

    pub fn random<R: Rng + ?Sized>(t: usize, rng: &mut R) -> Perm {
        let mut v: Vec<usize> = (0..t).collect();
        v.shuffle(rng);
        Perm(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `π(1) - π(0) mod t`.
    pub fn mu(&self) -> usize {
        let t = self.len();
        if t < 2 {
            return 0;
        }
        (self.0[1] + t - self.0[0]) % t
    }

    /// `ω(i) = π(i) - π(0) mod t`.
    pub fn normalized(&self) -> Perm {
        let t = self.len();
        let shift = self.0.first().copied().unwrap_or(0);
        Perm(self.0.iter().map(|&i| (i + t - shift) % t).collect())
    }
}

impl std::fmt::Display for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn normalize_perm(pi: &Perm) -> Perm {
    pi.normalized()
}

/// A subgeometry of `PG(n-1, q^t)` given by an `F_q`-basis `v_1, …, v_n` of
/// its underlying subspace.
#[derive(Clone, Debug)]
pub struct Subgeometry {
    n: usize,
    basis: Vec<Vec<Elem>>,
    points: Vec<ProjPoint>,
}

impl Subgeometry {
    /// Builds the point set `{⟨Σ c_i v_i⟩ : c ∈ F_q^n \ 0}`; the vectors must
    /// span `F_{q^t}^n`.
    pub fn from_basis(f: &FieldCtx, basis: Vec<Vec<Elem>>) -> Result<Subgeometry> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::Precondition("a subgeometry needs at least one basis vector".into()));
        }
        if let Some(v) = basis.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        if Matrix::from_rows(n, &basis).det(f).is_zero() {
            return Err(Error::Precondition("basis does not span the ambient space over F_{q^t}".into()));
        }
        let base = f.base_elements();
        let mut points = Vec::new();
        let mut digits = vec![0usize; n];
        while crate::projgeom::advance(&mut digits, base.len()) {
            // one representative per F_q-line: leading coefficient one
            if digits.iter().find(|&&d| d != 0).map(|&d| base[d]) != Some(Elem::ONE) {
                continue;
            }
            let mut v = vec![Elem::ZERO; n];
            for (&d, b) in digits.iter().zip(&basis) {
                let ci = base[d];
                if ci.is_zero() {
                    continue;
                }
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(ci, y));
                }
            }
            points.push(ProjPoint::normalize(f, &v)?);
        }
        let count = points.len();
        points.sort();
        points.dedup();
        if points.len() != count {
            return Err(Error::Consistency("distinct F_q-combinations gave the same point".into()));
        }
        Ok(Subgeometry { n, basis, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// `dim_{F_q} V = n`, full `F_{q^t}`-span, and `θ_{n-1}(q)` points.
    pub fn is_canonical(&self, f: &FieldCtx) -> bool {
        self.basis.len() == self.n
            && Matrix::from_rows(self.n, &self.basis).rank(f) == self.n
            && self.points.len() as u64 == theta(self.n as i64 - 1, f.q() as u64)
    }

    pub fn meets(&self, f: &FieldCtx, s: &ProjSubspace) -> bool {
        self.points.iter().any(|p| s.contains(f, p))
    }

    pub fn same_points(&self, other: &Subgeometry) -> bool {
        self.points == other.points
    }
}

fn phi_vector(f: &FieldCtx, pi: &Perm, x: Elem) -> Vec<Elem> {
    let e = f.e() as i64;
    pi.images().iter().map(|&k| f.frobenius(x, k as i64 * e)).collect()
}

fn check_perm(f: &FieldCtx, pi: &Perm) -> Result<()> {
    if pi.len() != f.t() as usize {
        return Err(Error::DimensionMismatch { expected: f.t() as usize, got: pi.len() });
    }
    Ok(())
}

/// `Σ_π = {⟨(α^{q^{π(0)}}, …, α^{q^{π(t-1)}})⟩ : α ≠ 0}` with
/// `V = {φ'_π(α)}` spanned by `φ'_π(g^j)`, `j < t`.
pub fn sigma_pi(f: &FieldCtx, pi: &Perm) -> Result<Subgeometry> {
    check_perm(f, pi)?;
    let t = pi.len();
    let powers: Vec<Elem> = (0..t as i64).map(|j| f.exp(j)).collect();
    let basis: Vec<Vec<Elem>> = powers.iter().map(|&a| phi_vector(f, pi, a)).collect();
    // the rows are a column permutation of the Moore matrix
    let moore = moore_det_nonzero(f, &powers)?;
    let direct = !Matrix::from_rows(t, &basis).det(f).is_zero();
    if moore != direct || !moore {
        return Err(Error::Consistency("Moore criterion and determinant disagree for S_π".into()));
    }
    Subgeometry::from_basis(f, basis)
}

pub fn phi_pi(f: &FieldCtx, pi: &Perm, x: Elem) -> Result<ProjPoint> {
    check_perm(f, pi)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    ProjPoint::normalize(f, &phi_vector(f, pi, x))
}

/// `Φ_h`: raise every coordinate to the power `p^h`.
pub fn capital_phi(f: &FieldCtx, h: i64, p: &ProjPoint) -> ProjPoint {
    let v: Vec<Elem> = p.coords().iter().map(|&x| f.frobenius(x, h)).collect();
    ProjPoint::normalize(f, &v).expect("Frobenius keeps nonzero vectors nonzero")
}

fn unit_rows(n: usize, range: std::ops::Range<usize>) -> Vec<Vec<Elem>> {
    range
        .map(|i| {
            let mut v = vec![Elem::ZERO; n];
            v[i] = Elem::ONE;
            v
        })
        .collect()
}

/// The `(t-3)`-space `X_1 = X_2 = 0` of `PG(t-1, q^t)`.
pub fn standard_center(f: &FieldCtx, n: usize) -> ProjSubspace {
    ProjSubspace::from_vectors(f, n, &unit_rows(n, 2..n))
}

/// The line `X_3 = … = X_t = 0` of `PG(t-1, q^t)`.
pub fn standard_axis(f: &FieldCtx, n: usize) -> ProjSubspace {
    ProjSubspace::from_vectors(f, n, &unit_rows(n, 0..2.min(n)))
}

/// Splits vectors along `F^n = R ⊕ Z`, `R` the axis and `Z` the center.
#[derive(Clone, Debug)]
pub struct Projector {
    center: ProjSubspace,
    axis: ProjSubspace,
    inv: Matrix,
}

impl Projector {
    pub fn new(f: &FieldCtx, center: &ProjSubspace, axis: &ProjSubspace) -> Result<Projector> {
        let n = axis.ambient();
        if center.ambient() != n {
            return Err(Error::DimensionMismatch { expected: n, got: center.ambient() });
        }
        if !center.meet(f, axis)?.is_empty() {
            return Err(Error::CenterMeetsAxis);
        }
        if center.rank() + axis.rank() != n {
            return Err(Error::CenterAxisNotSpanning);
        }
        let m = axis.basis().vstack(center.basis());
        let inv = m.inverse(f)?;
        Ok(Projector { center: center.clone(), axis: axis.clone(), inv })
    }

    pub fn center(&self) -> &ProjSubspace {
        &self.center
    }

    pub fn axis(&self) -> &ProjSubspace {
        &self.axis
    }

    /// Coordinates of `v` along the axis basis; the component in `R`.
    pub fn axis_coords(&self, f: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        let r = self.axis.rank();
        (0..r)
            .map(|j| v.iter().enumerate().fold(Elem::ZERO, |acc, (i, &x)| f.add(acc, f.mul(x, self.inv[(i, j)]))))
            .collect()
    }

    /// The component of `v` in `R`, as a vector of the ambient space.
    pub fn axis_component(&self, f: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        let c = self.axis_coords(f, v);
        let mut out = vec![Elem::ZERO; v.len()];
        for (row, &ci) in self.axis.basis().row_vecs().zip(&c) {
            for (o, &x) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(ci, x));
            }
        }
        out
    }

    /// `⟨Γ, P⟩ ∩ Λ`.
    pub fn project_point(&self, f: &FieldCtx, p: &ProjPoint) -> Result<ProjPoint> {
        let n = self.axis.ambient();
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() });
        }
        let a = self.axis_component(f, p.coords());
        if a.iter().all(|x| x.is_zero()) {
            return Err(Error::PointInCenter);
        }
        let rest: Vec<Elem> = p.coords().iter().zip(&a).map(|(&x, &y)| f.sub(x, y)).collect();
        if !self.axis.contains_vector(f, &a) || !self.center.contains_vector(f, &rest) {
            return Err(Error::DegenerateProjection);
        }
        ProjPoint::normalize(f, &a)
    }

    /// The projection of `p`, written in the axis coordinates `PG(r-1, q^t)`.
    pub fn project_to_axis(&self, f: &FieldCtx, p: &ProjPoint) -> Result<ProjPoint> {
        self.project_point(f, p)?;
        ProjPoint::normalize(f, &self.axis_coords(f, p.coords()))
    }
}

/// `{⟨Γ, P⟩ ∩ Λ : P ∈ pts}`, sorted and deduplicated.
pub fn project(f: &FieldCtx, center: &ProjSubspace, axis: &ProjSubspace, pts: &[ProjPoint]) -> Result<Vec<ProjPoint>> {
    let pr = Projector::new(f, center, axis)?;
    let mut out: Vec<ProjPoint> = pts.iter().map(|p| pr.project_point(f, p)).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Like [`project`], with the result written in the axis coordinates.
pub fn project_to_axis(f: &FieldCtx, center: &ProjSubspace, axis: &ProjSubspace, pts: &[ProjPoint]) -> Result<Vec<ProjPoint>> {
    let pr = Projector::new(f, center, axis)?;
    let mut out: Vec<ProjPoint> = pts.iter().map(|p| pr.project_to_axis(f, p)).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// `𝕃 = {⟨(λ, λ^q)⟩ : λ ≠ 0}` in `PG(1, q^t)`.
pub fn pseudoregulus_l(f: &FieldCtx) -> Result<Vec<ProjPoint>> {
    if f.t() < 2 {
        return Err(Error::Precondition("𝕃 needs t >= 2".into()));
    }
    let e = f.e() as i64;
    let mut out: Vec<ProjPoint> =
        f.nonzero_elements().map(|l| ProjPoint::normalize(f, &[l, f.frobenius(l, e)])).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineEquivalence {
    /// `PGL(2, q^t)` only
    Projective,
    /// `PΓL(2, q^t)`
    Semilinear,
}

/// Searches `PGL(2, q^t)` (optionally composed with field automorphisms,
/// identity automorphism first) for a map taking `l1` onto `l2`. The first
/// column runs through `(1, c)` for increasing `c` and then `(0, 1)`, the
/// second column through all `(b, d)` in lexicographic order, so the witness
/// is deterministic and the identity wins when `l1 = l2`.
pub fn projectively_equivalent_on_line(
    f: &FieldCtx,
    l1: &[ProjPoint],
    l2: &[ProjPoint],
    mode: LineEquivalence,
) -> Result<Option<SemilinearMap>> {
    let order = f.order();
    if order > MAX_LINE_EQUIV_ORDER {
        return Err(Error::BudgetExceeded { needed: order as u128, budget: MAX_LINE_EQUIV_ORDER as u128 });
    }
    if let Some(p) = l1.iter().chain(l2).find(|p| p.len() != 2) {
        return Err(Error::DimensionMismatch { expected: 2, got: p.len() });
    }
    let target: HashSet<&ProjPoint> = l2.iter().collect();
    let source: HashSet<&ProjPoint> = l1.iter().collect();
    if source.len() != target.len() {
        return Ok(None);
    }
    let els: Vec<Elem> = f.elements().collect();
    let mut columns: Vec<(Elem, Elem)> = els.iter().map(|&c| (Elem::ONE, c)).collect();
    columns.push((Elem::ZERO, Elem::ONE));
    let autos = match mode {
        LineEquivalence::Projective => 1,
        LineEquivalence::Semilinear => f.degree() as i64,
    };
    for h in 0..autos {
        let twisted: Vec<[Elem; 2]> =
            source.iter().map(|p| [f.frobenius(p.coords()[0], h), f.frobenius(p.coords()[1], h)]).collect();
        for &(a, c) in &columns {
            for &b in &els {
                for &d in &els {
                    if f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
                        continue;
                    }
                    let hits = twisted.iter().all(|v| {
                        let img = [f.add(f.mul(a, v[0]), f.mul(b, v[1])), f.add(f.mul(c, v[0]), f.mul(d, v[1]))];
                        ProjPoint::normalize(f, &img).map(|q| target.contains(&q)).unwrap_or(false)
                    });
                    if hits {
                        let m = Matrix::from_rows(2, &[[a, b], [c, d]]);
                        return SemilinearMap::new(f, m, h).map(Some);
                    }
                }
            }
        }
    }
    Ok(None)
}
