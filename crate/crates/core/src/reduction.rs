//! Field reduction `PG(r-1, q^t) → PG(rt-1, q)`, the Desarguesian spread,
//! and `F_q`-linear sets `B(S)`.
//!
//! Coordinates are bridged with the power basis `1, g, …, g^{t-1}` of
//! `F_{q^t}` over `F_q` in each of the `r` blocks, so block `i` of a vector
//! of `F_q^{rt}` holds the coordinates of the `i`-th entry of the
//! corresponding vector of `F_{q^t}^r`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{theta, Elem, FieldCtx};
use crate::projgeom::{ProjPoint, ProjSpace, ProjSubspace, Scalars};

const MAX_COORD_TABLE: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct ReductionCtx {
    field: Arc<FieldCtx>,
    r: usize,
    t: usize,
    coords: Vec<Elem>,
    powers: Vec<Elem>,
}

impl ReductionCtx {
    pub fn new(field: Arc<FieldCtx>, r: usize) -> Result<ReductionCtx> {
        if r == 0 {
            return Err(Error::InvalidParameters("field reduction needs r >= 1".into()));
        }
        let t = field.t() as usize;
        let order = field.order() as u64;
        if order * t as u64 > MAX_COORD_TABLE {
            return Err(Error::BudgetExceeded { needed: (order * t as u64) as u128, budget: MAX_COORD_TABLE as u128 });
        }
        let powers: Vec<Elem> = (0..t as i64).map(|i| field.exp(i)).collect();
        let base = field.base_elements().to_vec();
        let mut coords = vec![Elem::ZERO; order as usize * t];
        let mut filled = vec![false; order as usize];
        let mut digits = vec![0usize; t];
        loop {
            let c: Vec<Elem> = digits.iter().map(|&d| base[d]).collect();
            let x = c
                .iter()
                .zip(&powers)
                .fold(Elem::ZERO, |acc, (&ci, &gi)| field.add(acc, field.mul(ci, gi)));
            let slot = x.index() as usize;
            if filled[slot] {
                return Err(Error::Consistency("power basis is not F_q-independent".into()));
            }
            filled[slot] = true;
            coords[slot * t..(slot + 1) * t].copy_from_slice(&c);
            if !crate::projgeom::advance(&mut digits, base.len()) {
                break;
            }
        }
        Ok(ReductionCtx { field, r, t, coords, powers })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// `PG(r-1, q^t)`
    pub fn line_space(&self) -> ProjSpace {
        ProjSpace::new(self.field.clone(), self.r, Scalars::Full)
    }

    /// `PG(rt-1, q)`
    pub fn base_space(&self) -> ProjSpace {
        ProjSpace::new(self.field.clone(), self.r * self.t, Scalars::Base)
    }

    /// Coordinates of `x` in the basis `1, g, …, g^{t-1}`.
    pub fn element_coords(&self, x: Elem) -> &[Elem] {
        let i = x.index() as usize;
        &self.coords[i * self.t..(i + 1) * self.t]
    }

    pub fn element_from_coords(&self, c: &[Elem]) -> Elem {
        c.iter()
            .zip(&self.powers)
            .fold(Elem::ZERO, |acc, (&ci, &gi)| self.field.add(acc, self.field.mul(ci, gi)))
    }

    pub fn to_base(&self, v: &[Elem]) -> Vec<Elem> {
        debug_assert_eq!(v.len(), self.r);
        let mut out = Vec::with_capacity(self.r * self.t);
        for &x in v {
            out.extend_from_slice(self.element_coords(x));
        }
        out
    }

    pub fn from_base(&self, w: &[Elem]) -> Vec<Elem> {
        debug_assert_eq!(w.len(), self.r * self.t);
        w.chunks(self.t).map(|c| self.element_from_coords(c)).collect()
    }

    /// The point `⟨x⟩_{q^t}` of `PG(r-1, q^t)` containing the `F_q`-vector `w`.
    pub fn spread_point_of(&self, w: &[Elem]) -> Result<ProjPoint> {
        ProjPoint::normalize(&self.field, &self.from_base(w))
    }

    /// `F_{r,t,q}(P)`: the `(t-1)`-space `{⟨λ v⟩_q}` of `PG(rt-1, q)`.
    pub fn field_reduce_point(&self, p: &ProjPoint) -> ProjSubspace {
        let rows: Vec<Vec<Elem>> = self
            .powers
            .iter()
            .map(|&g| {
                let v: Vec<Elem> = p.coords().iter().map(|&x| self.field.mul(g, x)).collect();
                self.to_base(&v)
            })
            .collect();
        ProjSubspace::from_vectors(&self.field, self.r * self.t, &rows)
    }

    pub fn desarguesian_spread(&self, budget: u64) -> Result<Vec<ProjSubspace>> {
        let pts = self.line_space().enumerate_points(budget)?;
        Ok(pts.iter().map(|p| self.field_reduce_point(p)).collect())
    }

    /// `B(S)`, computed from the points of `S`.
    pub fn linear_set(&self, s: &ProjSubspace) -> Result<LinearSet> {
        let n = self.r * self.t;
        if s.ambient() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.ambient() });
        }
        let mut points: Vec<ProjPoint> = self
            .base_space()
            .points_of(s)
            .iter()
            .map(|w| self.spread_point_of(w.coords()))
            .collect::<Result<_>>()?;
        points.sort();
        points.dedup();
        Ok(LinearSet { r: self.r, points, witness: s.clone() })
    }

    /// Lifts `F_q`-spanning vectors of `F_{q^t}^r` to a subspace of `PG(rt-1, q)`.
    pub fn lift<R: AsRef<[Elem]>>(&self, vectors: &[R]) -> ProjSubspace {
        let rows: Vec<Vec<Elem>> = vectors.iter().map(|v| self.to_base(v.as_ref())).collect();
        ProjSubspace::from_vectors(&self.field, self.r * self.t, &rows)
    }

    /// The basis of `F_q^{rt}`-subspace `S` read back as vectors of `F_{q^t}^r`.
    pub fn unlift(&self, s: &ProjSubspace) -> Vec<Vec<Elem>> {
        s.basis().row_vecs().map(|w| self.from_base(w)).collect()
    }

    /// `dim_{F_q}(W ∩ F(P))`.
    pub fn weight(&self, w: &ProjSubspace, p: &ProjPoint) -> Result<usize> {
        Ok(w.meet(&self.field, &self.field_reduce_point(p))?.rank())
    }

    /// Weight of every point of `B(W)`, from the number of points of `W`
    /// falling in each spread element.
    pub fn weights(&self, w: &ProjSubspace) -> Result<BTreeMap<ProjPoint, usize>> {
        let mut counts: BTreeMap<ProjPoint, u64> = BTreeMap::new();
        for x in self.base_space().points_of(w) {
            *counts.entry(self.spread_point_of(x.coords())?).or_default() += 1;
        }
        let q = self.q();
        counts
            .into_iter()
            .map(|(p, c)| {
                let wt = (1..=w.rank())
                    .find(|&k| theta(k as i64 - 1, q) == c)
                    .ok_or_else(|| Error::Consistency(format!("{c} points in one spread element")))?;
                Ok((p, wt))
            })
            .collect()
    }

    /// Splits a rank-3 linear set of `PG(1, q^3)` into point, club or
    /// scattered.
    pub fn classify_rank_t_on_line(&self, l: &LinearSet) -> Result<LinearSetKind> {
        if self.r != 2 || self.t != 3 || l.rank() != 3 {
            return Err(Error::Precondition(format!(
                "classification needs r = 2, t = 3, rank 3; got r = {}, t = {}, rank {}",
                self.r,
                self.t,
                l.rank()
            )));
        }
        let q = self.q() as usize;
        let size = l.len();
        if size == 1 {
            return Ok(LinearSetKind::Point);
        }
        if size == q * q + q + 1 {
            return Ok(LinearSetKind::Scattered);
        }
        if size != q * q + 1 {
            return Err(Error::InconsistentWitness(format!("rank-3 set of size {size}")));
        }
        let mut heads = Vec::new();
        for p in l.points() {
            if self.weight(l.witness(), p)? == 2 {
                heads.push(p.clone());
            }
        }
        match heads.len() {
            1 => Ok(LinearSetKind::Club { head: heads.pop().unwrap() }),
            k => Err(Error::InconsistentWitness(format!("{k} points of weight two"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSetKind {
    Point,
    Club { head: ProjPoint },
    Scattered,
}

/// A point set of `PG(r-1, q^t)` together with an `F_q`-subspace `W` of
/// `PG(rt-1, q)` such that the set is `B(W)`. Equality only looks at the
/// points.
#[derive(Clone, Debug)]
pub struct LinearSet {
    r: usize,
    points: Vec<ProjPoint>,
    witness: ProjSubspace,
}

impl PartialEq for LinearSet {
    fn eq(&self, other: &LinearSet) -> bool {
        self.r == other.r && self.points == other.points
    }
}

impl Eq for LinearSet {}

impl LinearSet {
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn witness(&self) -> &ProjSubspace {
        &self.witness
    }

    pub fn rank(&self) -> usize {
        self.witness.rank()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn is_scattered(&self, q: u64) -> bool {
        self.len() as u64 == theta(self.rank() as i64 - 1, q)
    }
}
