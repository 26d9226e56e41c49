//! Projective spaces `PG(n-1, F)` over the full field or over its subfield
//! `F_q`: canonical points, RREF subspaces, point enumeration, hyperplane and
//! line systems, semilinear maps and the Moore-matrix independence test.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{theta, Elem, FieldCtx};
use crate::linalg::Matrix;

/// Default cap on the number of items produced by a single enumeration.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// A point `⟨v⟩`, stored with its first nonzero coordinate equal to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Box<[Elem]>);

impl ProjPoint {
    pub fn normalize(f: &FieldCtx, v: &[Elem]) -> Result<ProjPoint> {
        let lead = v.iter().copied().find(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
        if lead == Elem::ONE {
            return Ok(ProjPoint(v.into()));
        }
        let inv = f.inv(lead);
        Ok(ProjPoint(v.iter().map(|&x| f.mul(x, inv)).collect()))
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Which field the homogeneous coordinates range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scalars {
    /// `F_{q^t}`
    Full,
    /// the subfield `F_q`
    Base,
}

/// An `RREF` row basis of a vector subspace of `F^n`; the projective
/// subspace of dimension `rank - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjSubspace {
    basis: Matrix,
}

impl ProjSubspace {
    pub fn from_vectors<R: AsRef<[Elem]>>(f: &FieldCtx, n: usize, vectors: &[R]) -> ProjSubspace {
        let mut basis = Matrix::from_rows(n, vectors);
        basis.rref(f);
        ProjSubspace { basis }
    }

    pub fn empty(n: usize) -> ProjSubspace {
        ProjSubspace { basis: Matrix::zeros(0, n) }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Projective dimension; `-1` for the empty subspace.
    pub fn dim(&self) -> isize {
        self.rank() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.rank() == 0
    }

    pub fn contains_vector(&self, f: &FieldCtx, v: &[Elem]) -> bool {
        let mut m = self.basis.clone();
        m.push_row(v);
        m.rank(f) == self.rank()
    }

    pub fn contains(&self, f: &FieldCtx, p: &ProjPoint) -> bool {
        self.contains_vector(f, p.coords())
    }

    pub fn join(&self, f: &FieldCtx, other: &ProjSubspace) -> Result<ProjSubspace> {
        check_same(self.ambient(), other.ambient())?;
        let mut m = self.basis.vstack(&other.basis);
        m.rref(f);
        Ok(ProjSubspace { basis: m })
    }

    /// `{x : a·x = 0 for all a in self}`.
    pub fn annihilator(&self, f: &FieldCtx) -> ProjSubspace {
        if self.is_empty() {
            return ProjSubspace { basis: Matrix::identity(self.ambient()) };
        }
        ProjSubspace { basis: self.basis.nullspace(f) }
    }

    pub fn meet(&self, f: &FieldCtx, other: &ProjSubspace) -> Result<ProjSubspace> {
        check_same(self.ambient(), other.ambient())?;
        let ann = self.annihilator(f).join(f, &other.annihilator(f))?;
        Ok(ann.annihilator(f))
    }

    /// All points, with coefficients drawn from `scalars`. Sorted.
    pub fn points(&self, f: &FieldCtx, scalars: &[Elem]) -> Vec<ProjPoint> {
        let mut out = Vec::new();
        let k = self.rank();
        let n = self.ambient();
        for lead in 0..k {
            // coefficient one on row `lead`, zero before, free after
            let free = k - lead - 1;
            let mut digits = vec![0usize; free];
            loop {
                let mut v = self.basis.row(lead).to_vec();
                for (d, &c) in digits.iter().enumerate() {
                    let coeff = scalars[c];
                    if coeff.is_zero() {
                        continue;
                    }
                    let row = self.basis.row(lead + 1 + d);
                    for j in 0..n {
                        v[j] = f.add(v[j], f.mul(coeff, row[j]));
                    }
                }
                out.push(ProjPoint(v.into()));
                if !advance(&mut digits, scalars.len()) {
                    break;
                }
            }
        }
        out.sort();
        out
    }
}

fn check_same(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, got: b });
    }
    Ok(())
}

/// Odometer increment; returns false on wraparound.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// `PG(n-1, F)` with `F` the full field or its subfield.
#[derive(Clone, Debug)]
pub struct ProjSpace {
    field: Arc<FieldCtx>,
    n: usize,
    scalars: Scalars,
}

impl ProjSpace {
    pub fn new(field: Arc<FieldCtx>, n: usize, scalars: Scalars) -> ProjSpace {
        assert!(n >= 1, "PG(n-1, F) needs n >= 1");
        ProjSpace { field, n, scalars }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    /// Vector dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scalars(&self) -> Scalars {
        self.scalars
    }

    pub fn scalar_order(&self) -> u64 {
        match self.scalars {
            Scalars::Full => self.field.order() as u64,
            Scalars::Base => self.field.q() as u64,
        }
    }

    pub fn scalar_values(&self) -> Vec<Elem> {
        match self.scalars {
            Scalars::Full => self.field.elements().collect(),
            Scalars::Base => self.field.base_elements().to_vec(),
        }
    }

    pub fn num_points(&self) -> u64 {
        theta(self.n as i64 - 1, self.scalar_order())
    }

    pub fn point(&self, v: &[Elem]) -> Result<ProjPoint> {
        check_same(self.n, v.len())?;
        ProjPoint::normalize(&self.field, v)
    }

    pub fn full(&self) -> ProjSubspace {
        ProjSubspace { basis: Matrix::identity(self.n) }
    }

    pub fn span<R: AsRef<[Elem]>>(&self, vectors: &[R]) -> Result<ProjSubspace> {
        for v in vectors {
            check_same(self.n, v.as_ref().len())?;
        }
        Ok(ProjSubspace::from_vectors(&self.field, self.n, vectors))
    }

    pub fn span_points(&self, points: &[ProjPoint]) -> Result<ProjSubspace> {
        let rows: Vec<&[Elem]> = points.iter().map(|p| p.coords()).collect();
        self.span(&rows)
    }

    pub fn points_of(&self, s: &ProjSubspace) -> Vec<ProjPoint> {
        s.points(&self.field, &self.scalar_values())
    }

    fn check_budget(&self, needed: u64, budget: u64) -> Result<()> {
        if needed > budget {
            return Err(Error::BudgetExceeded { needed: needed as u128, budget: budget as u128 });
        }
        Ok(())
    }

    /// Every point, in lexicographic order of normalized coordinates.
    pub fn enumerate_points(&self, budget: u64) -> Result<Vec<ProjPoint>> {
        self.check_budget(self.num_points(), budget)?;
        Ok(self.points_of(&self.full()))
    }

    /// Every hyperplane, ordered by its normalized normal vector.
    pub fn hyperplanes(&self, budget: u64) -> Result<Vec<ProjSubspace>> {
        let normals = self.enumerate_points(budget)?;
        Ok(normals
            .iter()
            .map(|a| ProjSubspace { basis: Matrix::from_rows(self.n, &[a.coords()]).nullspace(&self.field) })
            .collect())
    }

    /// Every subspace of vector dimension `k`.
    pub fn subspaces(&self, k: usize, budget: u64) -> Result<Vec<ProjSubspace>> {
        let count = gaussian_binomial(self.n as u64, k as u64, self.scalar_order());
        self.check_budget(count.min(u64::MAX as u128) as u64, budget)?;
        let mut out = Vec::new();
        self.for_each_subspace(k, |_| true, |s| out.push(s.clone()));
        Ok(out)
    }

    /// Walks the vector subspaces of dimension `k` in RREF, row by row.
    /// `keep` sees the partial RREF after each new row and may prune the
    /// branch by returning false.
    pub fn for_each_subspace(
        &self,
        k: usize,
        mut keep: impl FnMut(&Matrix) -> bool,
        mut visit: impl FnMut(&ProjSubspace),
    ) {
        let n = self.n;
        if k > n {
            return;
        }
        let scalars = self.scalar_values();
        let mut pivots: Vec<usize> = (0..k).collect();
        loop {
            let mut partial = Matrix::zeros(0, n);
            self.fill_rows(&pivots, 0, &scalars, &mut partial, &mut keep, &mut visit);
            if !next_combination(&mut pivots, n) {
                break;
            }
        }
    }

    fn fill_rows(
        &self,
        pivots: &[usize],
        i: usize,
        scalars: &[Elem],
        partial: &mut Matrix,
        keep: &mut impl FnMut(&Matrix) -> bool,
        visit: &mut impl FnMut(&ProjSubspace),
    ) {
        let n = self.n;
        if i == pivots.len() {
            visit(&ProjSubspace { basis: partial.clone() });
            return;
        }
        let c = pivots[i];
        let free: Vec<usize> = (c + 1..n).filter(|j| !pivots.contains(j)).collect();
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut row = vec![Elem::ZERO; n];
            row[c] = Elem::ONE;
            for (d, &j) in digits.iter().zip(&free) {
                row[j] = scalars[*d];
            }
            partial.push_row(&row);
            if keep(partial) {
                self.fill_rows(pivots, i + 1, scalars, partial, keep, visit);
            }
            pop_row(partial);
            if !advance(&mut digits, scalars.len()) {
                break;
            }
        }
    }
}

fn pop_row(m: &mut Matrix) {
    let rows: Vec<Vec<Elem>> = m.row_vecs().take(m.rows() - 1).map(|r| r.to_vec()).collect();
    *m = Matrix::from_rows(m.cols(), &rows);
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(q.pow((n - i) as u32) - 1);
        den = den.saturating_mul(q.pow((i + 1) as u32) - 1);
    }
    num / den
}

/// Points with a fixed numbering.
#[derive(Clone, Debug)]
pub struct PointIndex {
    points: Vec<ProjPoint>,
    index: HashMap<ProjPoint, usize>,
}

impl PointIndex {
    pub fn new(points: Vec<ProjPoint>) -> PointIndex {
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PointIndex { points, index }
    }

    pub fn get(&self, p: &ProjPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn point(&self, i: usize) -> &ProjPoint {
        &self.points[i]
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A total map on the points of an indexed space, stored extensionally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    table: Vec<usize>,
}

impl PointMap {
    pub fn from_table(table: Vec<usize>) -> PointMap {
        PointMap { table }
    }

    pub fn from_fn(index: &PointIndex, mut g: impl FnMut(&ProjPoint) -> ProjPoint) -> Result<PointMap> {
        let table = index
            .points()
            .iter()
            .map(|p| {
                let img = g(p);
                index
                    .get(&img)
                    .ok_or_else(|| Error::Precondition(format!("image {:?} is not a point of the space", img.coords())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointMap { table })
    }

    pub fn identity(len: usize) -> PointMap {
        PointMap { table: (0..len).collect() }
    }

    pub fn image(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        for &j in &self.table {
            if j >= seen.len() || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        true
    }
}

/// A family of point sets (hyperplanes or lines) over an indexed space,
/// used to decide whether a point map is a collineation.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    index: PointIndex,
    blocks: Vec<Vec<usize>>,
    lookup: HashSet<Vec<usize>>,
}

impl BlockSystem {
    fn from_subspaces(space: &ProjSpace, index: PointIndex, subspaces: &[ProjSubspace]) -> BlockSystem {
        let blocks: Vec<Vec<usize>> = subspaces
            .iter()
            .map(|s| {
                let mut b: Vec<usize> = space
                    .points_of(s)
                    .iter()
                    .map(|p| index.get(p).expect("subspace point is a point of the space"))
                    .collect();
                b.sort_unstable();
                b
            })
            .collect();
        let lookup = blocks.iter().cloned().collect();
        BlockSystem { index, blocks, lookup }
    }

    pub fn hyperplanes(space: &ProjSpace, budget: u64) -> Result<BlockSystem> {
        let index = PointIndex::new(space.enumerate_points(budget)?);
        let hs = space.hyperplanes(budget)?;
        Ok(Self::from_subspaces(space, index, &hs))
    }

    pub fn lines(space: &ProjSpace, budget: u64) -> Result<BlockSystem> {
        let index = PointIndex::new(space.enumerate_points(budget)?);
        let ls = space.subspaces(2, budget)?;
        Ok(Self::from_subspaces(space, index, &ls))
    }

    pub fn index(&self) -> &PointIndex {
        &self.index
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_block(&self, points: &[usize]) -> bool {
        let mut b = points.to_vec();
        b.sort_unstable();
        self.lookup.contains(&b)
    }

    /// True iff every block is mapped onto a block. A map that is not
    /// injective on points is an error, not `false`.
    pub fn is_collineation(&self, map: &PointMap) -> Result<bool> {
        if map.table().len() != self.index.len() {
            return Err(Error::DimensionMismatch { expected: self.index.len(), got: map.table().len() });
        }
        if !map.is_injective() {
            return Err(Error::NotInjective);
        }
        let mut img = Vec::new();
        for b in &self.blocks {
            img.clear();
            img.extend(b.iter().map(|&i| map.image(i)));
            img.sort_unstable();
            if !self.lookup.contains(&img) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Hyperplane-preservation test on the points of `space`.
pub fn is_collineation(space: &ProjSpace, map: &PointMap, budget: u64) -> Result<bool> {
    BlockSystem::hyperplanes(space, budget)?.is_collineation(map)
}

/// `x ↦ M · x^{p^h}` on `F^n`, with `M` invertible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    matrix: Matrix,
    frob: u32,
}

impl SemilinearMap {
    pub fn new(f: &FieldCtx, matrix: Matrix, h: i64) -> Result<SemilinearMap> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), got: matrix.cols() });
        }
        if matrix.det(f).is_zero() {
            return Err(Error::Singular);
        }
        Ok(SemilinearMap { matrix, frob: h.rem_euclid(f.degree() as i64) as u32 })
    }

    pub(crate) fn new_unchecked(matrix: Matrix, frob: u32) -> SemilinearMap {
        SemilinearMap { matrix, frob }
    }

    pub fn identity(n: usize) -> SemilinearMap {
        SemilinearMap { matrix: Matrix::identity(n), frob: 0 }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Automorphism exponent `h` of `x ↦ x^{p^h}`.
    pub fn frob(&self) -> u32 {
        self.frob
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply_vec(&self, f: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        let h = self.frob as i64;
        let twisted: Vec<Elem> = v.iter().map(|&x| f.frobenius(x, h)).collect();
        self.matrix.apply(f, &twisted)
    }

    pub fn apply(&self, f: &FieldCtx, p: &ProjPoint) -> Result<ProjPoint> {
        if p.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: p.len() });
        }
        ProjPoint::normalize(f, &self.apply_vec(f, p.coords()))
    }

    pub fn apply_subspace(&self, f: &FieldCtx, s: &ProjSubspace) -> ProjSubspace {
        let rows: Vec<Vec<Elem>> = s.basis().row_vecs().map(|r| self.apply_vec(f, r)).collect();
        ProjSubspace::from_vectors(f, self.n(), &rows)
    }

    /// The map `x ↦ other(self(x))`.
    pub fn then(&self, f: &FieldCtx, other: &SemilinearMap) -> SemilinearMap {
        let h2 = other.frob as i64;
        let twisted = self.matrix.map_entries(|x| f.frobenius(x, h2));
        SemilinearMap {
            matrix: other.matrix.mul(f, &twisted),
            frob: ((self.frob + other.frob) % f.degree()),
        }
    }

    pub fn inverse(&self, f: &FieldCtx) -> Result<SemilinearMap> {
        let inv = self.matrix.inverse(f)?;
        let h = -(self.frob as i64);
        Ok(SemilinearMap {
            matrix: inv.map_entries(|x| f.frobenius(x, h)),
            frob: h.rem_euclid(f.degree() as i64) as u32,
        })
    }

    pub fn point_map(&self, f: &FieldCtx, index: &PointIndex) -> Result<PointMap> {
        let mut err = None;
        let map = PointMap::from_fn(index, |p| match self.apply(f, p) {
            Ok(img) => img,
            Err(e) => {
                err = Some(e);
                p.clone()
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(map),
        }
    }
}

/// Moore matrix test: the rows `(α_j^{q^0}, …, α_j^{q^{t-1}})` have nonzero
/// determinant iff the `α_j` are `F_q`-independent.
pub fn moore_det_nonzero(f: &FieldCtx, elems: &[Elem]) -> Result<bool> {
    let t = f.t() as usize;
    if elems.len() != t {
        return Err(Error::DimensionMismatch { expected: t, got: elems.len() });
    }
    let e = f.e() as i64;
    let rows: Vec<Vec<Elem>> = elems
        .iter()
        .map(|&a| (0..t as i64).map(|i| f.frobenius(a, i * e)).collect())
        .collect();
    Ok(!Matrix::from_rows(t, &rows).det(f).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32, e: u32, t: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, e, t).unwrap())
    }

    #[test]
    fn normalize_rule() {
        let f = field(3, 1, 2);
        let c = f.generator();
        let d = f.exp(5);
        let p = ProjPoint::normalize(&f, &[Elem::ZERO, c, d]).unwrap();
        assert_eq!(p.coords(), &[Elem::ZERO, Elem::ONE, f.div(d, c)]);
        assert_eq!(ProjPoint::normalize(&f, &[Elem::ZERO; 3]), Err(Error::ZeroVector));
        for lambda in f.nonzero_elements() {
            let v: Vec<Elem> = [Elem::ONE, c, d].iter().map(|&x| f.mul(lambda, x)).collect();
            assert_eq!(ProjPoint::normalize(&f, &v).unwrap(), ProjPoint::normalize(&f, &[Elem::ONE, c, d]).unwrap());
        }
    }

    #[test]
    fn distinct_normalized_vectors_count_theta() {
        for &(p, e, t, n) in &[(2u32, 1u32, 3u32, 3usize), (3, 1, 2, 3), (2, 1, 2, 4), (5, 1, 1, 3)] {
            let f = field(p, e, t);
            let space = ProjSpace::new(f.clone(), n, Scalars::Full);
            let mut seen = HashSet::new();
            let els: Vec<Elem> = f.elements().collect();
            let mut digits = vec![0usize; n];
            while advance(&mut digits, els.len()) {
                let v: Vec<Elem> = digits.iter().map(|&d| els[d]).collect();
                seen.insert(space.point(&v).unwrap());
            }
            assert_eq!(seen.len() as u64, space.num_points());
        }
    }

    #[test]
    fn point_counts() {
        let f2 = field(2, 1, 1);
        assert_eq!(ProjSpace::new(f2.clone(), 2, Scalars::Full).enumerate_points(DEFAULT_BUDGET).unwrap().len(), 3);
        let s = ProjSpace::new(f2.clone(), 5, Scalars::Full);
        assert_eq!(s.enumerate_points(DEFAULT_BUDGET).unwrap().len(), 31);
        assert_eq!(s.hyperplanes(DEFAULT_BUDGET).unwrap().len(), 31);
        let f3 = field(3, 1, 1);
        let s = ProjSpace::new(f3, 3, Scalars::Full);
        let hs = s.hyperplanes(DEFAULT_BUDGET).unwrap();
        assert_eq!(s.enumerate_points(DEFAULT_BUDGET).unwrap().len(), 13);
        assert_eq!(hs.len(), 13);
        assert!(hs.iter().all(|h| s.points_of(h).len() == 4));
        assert!(matches!(s.enumerate_points(5), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn enumeration_is_sorted_and_matches_theta() {
        for &(p, n) in &[(2u32, 2usize), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (3, 4), (3, 5), (5, 3)] {
            let f = field(p, 1, 1);
            let s = ProjSpace::new(f, n, Scalars::Full);
            let pts = s.enumerate_points(DEFAULT_BUDGET).unwrap();
            assert_eq!(pts.len() as u64, theta(n as i64 - 1, p as u64));
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
        }
        // Base scalars of F_16 ⊃ F_4: PG(2,4)
        let f = field(2, 2, 2);
        let s = ProjSpace::new(f, 3, Scalars::Base);
        assert_eq!(s.enumerate_points(DEFAULT_BUDGET).unwrap().len(), 21);
    }

    #[test]
    fn meet_and_span() {
        let f = field(2, 1, 5);
        let space = ProjSpace::new(f.clone(), 5, Scalars::Full);
        let e = |i: usize| {
            let mut v = vec![Elem::ZERO; 5];
            v[i] = Elem::ONE;
            v
        };
        let gamma = space.span(&[e(2), e(3), e(4)]).unwrap();
        let lambda = space.span(&[e(0), e(1)]).unwrap();
        assert_eq!(gamma.join(&f, &lambda).unwrap(), space.full());
        assert!(gamma.meet(&f, &lambda).unwrap().is_empty());
        assert_eq!(gamma.meet(&f, &gamma).unwrap(), gamma);
        let other = ProjSpace::new(f.clone(), 4, Scalars::Full).full();
        assert!(matches!(gamma.meet(&f, &other), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dimension_formula_random() {
        use rand::{Rng, SeedableRng};
        let f = field(2, 1, 5);
        let space = ProjSpace::new(f.clone(), 5, Scalars::Full);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let vecs: Vec<Vec<Elem>> = (0..5)
                .map(|_| (0..5).map(|_| Elem::from_index(rng.gen_range(0..32))).collect())
                .collect();
            let a = space.span(&vecs[..2]).unwrap();
            let b = space.span(&vecs[2..]).unwrap();
            let join = a.join(&f, &b).unwrap();
            let meet = a.meet(&f, &b).unwrap();
            assert_eq!(join.rank(), Matrix::from_rows(5, &vecs).rank(&f));
            assert_eq!(join.rank() + meet.rank(), a.rank() + b.rank());
        }
    }

    #[test]
    fn canonical_form_uniqueness() {
        // two subspaces of PG(3,q) with the same point set have identical RREF
        for &p in &[2u32, 3] {
            let f = field(p, 1, 1);
            let space = ProjSpace::new(f.clone(), 4, Scalars::Full);
            for k in 1..=3 {
                let subs = space.subspaces(k, DEFAULT_BUDGET).unwrap();
                assert_eq!(subs.len() as u128, gaussian_binomial(4, k as u64, p as u64));
                let mut by_points: HashMap<Vec<ProjPoint>, ProjSubspace> = HashMap::new();
                for s in &subs {
                    let pts = space.points_of(s);
                    // a different spanning set of the same points gives the same RREF
                    let respan = space.span_points(&pts).unwrap();
                    assert_eq!(&respan, s);
                    assert!(by_points.insert(pts, s.clone()).is_none());
                }
            }
        }
    }

    #[test]
    fn collineation_checks() {
        let f = field(2, 1, 3);
        let space = ProjSpace::new(f.clone(), 3, Scalars::Full);
        let sys = BlockSystem::hyperplanes(&space, DEFAULT_BUDGET).unwrap();
        assert!(sys.is_collineation(&PointMap::identity(sys.index().len())).unwrap());
        let frob = SemilinearMap::new(&f, Matrix::identity(3), 1).unwrap();
        assert!(sys.is_collineation(&frob.point_map(&f, sys.index()).unwrap()).unwrap());
        let mut collapse = PointMap::identity(sys.index().len()).table().to_vec();
        collapse[0] = collapse[1];
        assert_eq!(sys.is_collineation(&PointMap::from_table(collapse)), Err(Error::NotInjective));
    }

    #[test]
    fn hyperplane_and_line_criteria_agree_on_planes() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for &p in &[2u32, 3] {
            let f = field(p, 1, 1);
            let space = ProjSpace::new(f, 3, Scalars::Full);
            let hyp = BlockSystem::hyperplanes(&space, DEFAULT_BUDGET).unwrap();
            let lines = BlockSystem::lines(&space, DEFAULT_BUDGET).unwrap();
            assert_eq!(hyp.index().points(), lines.index().points());
            for _ in 0..200 {
                let mut table: Vec<usize> = (0..hyp.index().len()).collect();
                table.shuffle(&mut rng);
                let m = PointMap::from_table(table);
                assert_eq!(hyp.is_collineation(&m).unwrap(), lines.is_collineation(&m).unwrap());
            }
        }
    }

    #[test]
    fn semilinear_group_laws() {
        let f = field(2, 1, 3);
        let space = ProjSpace::new(f.clone(), 3, Scalars::Full);
        let pts = space.enumerate_points(DEFAULT_BUDGET).unwrap();
        let g = f.generator();
        let m = Matrix::from_rows(3, &[vec![g, Elem::ONE, Elem::ZERO], vec![Elem::ZERO, Elem::ONE, g], vec![Elem::ONE, Elem::ZERO, Elem::ZERO]]);
        let a = SemilinearMap::new(&f, m, 2).unwrap();
        let inv = a.inverse(&f).unwrap();
        let id = a.then(&f, &inv);
        let scalar = SemilinearMap::new(&f, Matrix::identity(3).map_entries(|x| f.mul(x, g)), 0).unwrap();
        for p in &pts {
            assert_eq!(&id.apply(&f, p).unwrap(), p);
            assert_eq!(&SemilinearMap::identity(3).apply(&f, p).unwrap(), p);
            assert_eq!(&scalar.apply(&f, p).unwrap(), p);
            let composed = a.then(&f, &scalar).apply(&f, p).unwrap();
            assert_eq!(composed, scalar.apply(&f, &a.apply(&f, p).unwrap()).unwrap());
        }
        assert_eq!(SemilinearMap::new(&f, Matrix::zeros(3, 3), 0), Err(Error::Singular));
    }

    #[test]
    fn moore_determinant_matches_rank() {
        let f = field(2, 1, 3);
        let els: Vec<Elem> = f.elements().collect();
        let mut independent = 0;
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    let coeffs: Vec<Vec<Elem>> = [a, b, c]
                        .iter()
                        .map(|&x| f.coefficients(x).iter().map(|&d| f.from_int(d as i64)).collect())
                        .collect();
                    let rank = Matrix::from_rows(3, &coeffs).rank(&f);
                    let moore = moore_det_nonzero(&f, &[a, b, c]).unwrap();
                    assert_eq!(moore, rank == 3);
                    independent += moore as usize;
                }
            }
        }
        assert_eq!(independent, 7 * 6 * 4);
        assert!(!moore_det_nonzero(&f, &[Elem::ZERO, Elem::ONE, f.generator()]).unwrap());
        assert!(moore_det_nonzero(&f, &[Elem::ONE]).is_err());
    }
}
