//! Cyclic difference sets in `Z_v`, the classical Singer sets of
//! `PG(t-1, q)`, multipliers, and the power maps `⟨x⟩_q ↦ ⟨x^m⟩_q` on
//! `PG(t-1, q) = PG_q(F_{q^t})`, including `Θ_s`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{gcd, theta, Elem, FieldCtx};
use crate::projgeom::{BlockSystem, PointIndex, PointMap, ProjPoint, ProjSpace, DEFAULT_BUDGET};
use crate::reduction::ReductionCtx;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceSet {
    v: u64,
    elems: Vec<u64>,
    lambda: Option<u64>,
}

impl DifferenceSet {
    /// Reduces the given integers modulo `v`; duplicates collapse.
    pub fn new(v: u64, elems: impl IntoIterator<Item = i64>) -> Result<DifferenceSet> {
        if v == 0 {
            return Err(Error::Precondition("Z_0 has no residues".into()));
        }
        let set: BTreeSet<u64> = elems.into_iter().map(|x| x.rem_euclid(v as i64) as u64).collect();
        Ok(DifferenceSet { v, elems: set.into_iter().collect(), lambda: None })
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn k(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    /// `λ`, once [`DifferenceSet::verify`] has succeeded.
    pub fn lambda(&self) -> Option<u64> {
        self.lambda
    }

    pub fn contains(&self, i: u64) -> bool {
        self.elems.binary_search(&(i % self.v)).is_ok()
    }

    /// How often each residue occurs as `d_1 - d_2`, `d_1 ≠ d_2`.
    pub fn difference_counts(&self) -> Vec<u64> {
        let v = self.v;
        let mut counts = vec![0u64; v as usize];
        for &a in &self.elems {
            for &b in &self.elems {
                if a != b {
                    counts[((a + v - b) % v) as usize] += 1;
                }
            }
        }
        counts
    }

    pub fn is_difference_set(&self, lambda: u64) -> bool {
        self.difference_counts().iter().skip(1).all(|&c| c == lambda)
    }

    /// Records `λ` if every nonzero residue occurs exactly `λ` times.
    pub fn verify(&mut self, lambda: u64) -> bool {
        let ok = self.is_difference_set(lambda);
        if ok {
            self.lambda = Some(lambda);
        }
        ok
    }

    /// `D + j`
    pub fn translate(&self, j: i64) -> DifferenceSet {
        let v = self.v as i64;
        let mut out = DifferenceSet::new(self.v, self.elems.iter().map(|&d| d as i64 + j.rem_euclid(v))).unwrap();
        out.lambda = self.lambda;
        out
    }

    /// `jD`; smaller than `D` when two elements differ by a multiple of
    /// `v / gcd(j, v)`.
    pub fn dilate(&self, j: i64) -> DifferenceSet {
        let v = self.v as i128;
        let j = (j as i128).rem_euclid(v);
        DifferenceSet::new(self.v, self.elems.iter().map(|&d| ((d as i128 * j) % v) as i64)).unwrap()
    }

    /// Some `g` with `other = self + g`.
    pub fn translate_to(&self, other: &DifferenceSet) -> Option<u64> {
        if self.v != other.v || self.k() != other.k() {
            return None;
        }
        let v = self.v;
        let first = *self.elems.first()?;
        other
            .elems
            .iter()
            .map(|&d| (d + v - first) % v)
            .find(|&g| self.elems.iter().all(|&x| other.contains((x + g) % v)))
    }

    /// Every `m` in `1..v` coprime to `v` with `mD` a translate of `D`.
    pub fn multipliers(&self) -> Vec<u64> {
        (1..self.v.max(2))
            .filter(|&m| gcd(m, self.v) == 1)
            .filter(|&m| self.dilate(m as i64).translate_to(self).is_some())
            .collect()
    }
}

/// `{p^h mod v : h ≥ 0}`, over one full period.
pub fn p_power_residues(p: u64, v: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut x = 1 % v;
    while out.insert(x) {
        x = (x as u128 * p as u128 % v as u128) as u64;
    }
    out
}

/// `PG(t-1, q)` realised as `PG_q(F_{q^t})`, with `⟨α^i⟩_q ↔ i mod θ_{t-1}`
/// for the field generator `α`.
#[derive(Clone, Debug)]
pub struct FieldModel {
    red: ReductionCtx,
    space: ProjSpace,
    blocks: BlockSystem,
    v: u64,
}

impl FieldModel {
    pub fn new(field: Arc<FieldCtx>) -> Result<FieldModel> {
        Self::with_budget(field, DEFAULT_BUDGET)
    }

    pub fn with_budget(field: Arc<FieldCtx>, budget: u64) -> Result<FieldModel> {
        let red = ReductionCtx::new(field, 1)?;
        let space = red.base_space();
        let blocks = BlockSystem::hyperplanes(&space, budget)?;
        let v = red.field().theta_top();
        Ok(FieldModel { red, space, blocks, v })
    }

    pub fn field(&self) -> &FieldCtx {
        self.red.field()
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn index(&self) -> &PointIndex {
        self.blocks.index()
    }

    pub fn hyperplane_system(&self) -> &BlockSystem {
        &self.blocks
    }

    /// `θ_{t-1}`, the number of points.
    pub fn v(&self) -> u64 {
        self.v
    }

    /// `⟨x⟩_q`
    pub fn point_of(&self, x: Elem) -> Result<ProjPoint> {
        ProjPoint::normalize(self.field(), self.red.element_coords(x))
    }

    /// A representative of the point in `F_{q^t}`.
    pub fn element_of(&self, p: &ProjPoint) -> Elem {
        self.red.element_from_coords(p.coords())
    }

    /// `⟨α^i⟩_q`
    pub fn point_at(&self, i: i64) -> ProjPoint {
        self.point_of(self.field().exp(i)).expect("powers of the generator are nonzero")
    }

    /// The exponent `i mod θ_{t-1}` with `p = ⟨α^i⟩_q`.
    pub fn exponent_of(&self, p: &ProjPoint) -> Result<u64> {
        Ok(self.field().dlog(self.element_of(p))? as u64 % self.v)
    }

    /// The point map `⟨x⟩_q ↦ ⟨x^m⟩_q`; `m` may be negative.
    pub fn power_map(&self, m: i64) -> Result<PointMap> {
        let f = self.field();
        PointMap::from_fn(self.index(), |p| {
            let x = f.pow_signed(self.element_of(p), m).expect("points have nonzero representatives");
            self.point_of(x).expect("powers of nonzero elements are nonzero")
        })
    }
}

/// `D = {i : 0 ≤ i < θ_{t-1}, tr(α^i) = 0}`, verified as a
/// `(θ_{t-1}, θ_{t-2}, θ_{t-3})` difference set.
pub fn singer_set(f: &FieldCtx) -> Result<DifferenceSet> {
    let t = f.t() as i64;
    if t < 3 {
        return Err(Error::Precondition(format!("Singer difference sets need t >= 3, got t = {t}")));
    }
    let q = f.q() as u64;
    let v = theta(t - 1, q);
    let mut d = DifferenceSet::new(v, (0..v as i64).filter(|&i| f.trace(f.exp(i)).is_zero()))?;
    if d.k() as u64 != theta(t - 2, q) || !d.verify(theta(t - 3, q)) {
        return Err(Error::Consistency("trace-zero exponents do not form a Singer difference set".into()));
    }
    Ok(d)
}

/// `H_{D+j} = {⟨α^i⟩_q : i ∈ D + j}`, sorted.
pub fn hyperplane_from_set(model: &FieldModel, d: &DifferenceSet, j: i64) -> Vec<ProjPoint> {
    let mut pts: Vec<ProjPoint> = d.translate(j).elems().iter().map(|&i| model.point_at(i as i64)).collect();
    pts.sort();
    pts
}

/// True iff the `θ_{t-1}` translates of `d` give pairwise distinct point
/// sets that are exactly the hyperplanes of the space.
pub fn translates_are_hyperplanes(model: &FieldModel, d: &DifferenceSet) -> Result<bool> {
    let index = model.index();
    let from_set: BTreeSet<Vec<usize>> = (0..d.v() as i64)
        .map(|j| {
            let mut b: Vec<usize> = hyperplane_from_set(model, d, j).iter().map(|p| index.get(p).unwrap()).collect();
            b.sort_unstable();
            b
        })
        .collect();
    let hyperplanes: BTreeSet<Vec<usize>> = model.hyperplane_system().blocks().iter().cloned().collect();
    Ok(from_set.len() as u64 == d.v() && from_set == hyperplanes)
}

/// `Θ_s(⟨x⟩_q) = ⟨x^{θ_s}⟩_q`, for any `s ≥ -1`.
pub fn theta_map(model: &FieldModel, s: i64, p: &ProjPoint) -> Result<ProjPoint> {
    if s < -1 {
        return Err(Error::Precondition(format!("θ_s is defined for s >= -1, got {s}")));
    }
    let f = model.field();
    let exp = theta(s, f.q() as u64);
    model.point_of(f.pow(model.element_of(p), exp))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerMapVerdict {
    Collineation,
    NotCollineation,
    /// two points collapse, so the map is not even a bijection of points
    NotBijection,
}

/// Both answers to "is `⟨x⟩_q ↦ ⟨x^m⟩_q` a collineation?".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerMapCheck {
    pub m: i64,
    /// the hyperplane-image test on the induced point map
    pub hyperplane_test: PowerMapVerdict,
    /// `m mod θ_{t-1} ∈ {p^h mod θ_{t-1}}`
    pub p_power: bool,
}

impl PowerMapCheck {
    pub fn is_collineation(&self) -> bool {
        self.hyperplane_test == PowerMapVerdict::Collineation
    }
}

/// Decides both ways and fails with [`Error::Consistency`] if they disagree.
/// A non-injective map counts as "not a collineation" for the comparison.
pub fn power_map_is_collineation(model: &FieldModel, m: i64) -> Result<PowerMapCheck> {
    if model.field().t() < 3 {
        return Err(Error::Precondition("power-map criterion needs t >= 3".into()));
    }
    let map = model.power_map(m)?;
    let hyperplane_test = match model.hyperplane_system().is_collineation(&map) {
        Ok(true) => PowerMapVerdict::Collineation,
        Ok(false) => PowerMapVerdict::NotCollineation,
        Err(Error::NotInjective) => PowerMapVerdict::NotBijection,
        Err(e) => return Err(e),
    };
    let v = model.v();
    let p_power = p_power_residues(model.field().p() as u64, v).contains(&(m.rem_euclid(v as i64) as u64));
    if p_power != (hyperplane_test == PowerMapVerdict::Collineation) {
        return Err(Error::Consistency(format!(
            "power map x^{m}: hyperplane test says {hyperplane_test:?}, p-power test says {p_power}"
        )));
    }
    Ok(PowerMapCheck { m, hyperplane_test, p_power })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepEntry {
    pub s: i64,
    pub theta_s: u64,
    pub check: PowerMapCheck,
    /// no `h` with `p^h ≡ θ_s (mod θ_{t-1})`
    pub no_p_power: bool,
}

impl SweepEntry {
    pub fn passed(&self) -> bool {
        !self.check.is_collineation() && !self.check.p_power && self.no_p_power
    }
}

/// Runs both criteria on `Θ_s` for every `0 < s < t`.
pub fn theta_not_collineation_sweep(model: &FieldModel) -> Result<Vec<SweepEntry>> {
    let f = model.field();
    let t = f.t() as i64;
    let q = f.q() as u64;
    let v = model.v();
    let residues = p_power_residues(f.p() as u64, v);
    (1..t)
        .map(|s| {
            let theta_s = theta(s, q);
            let check = power_map_is_collineation(model, theta_s as i64)?;
            Ok(SweepEntry { s, theta_s, check, no_p_power: !residues.contains(&(theta_s % v)) })
        })
        .collect()
}

/// Checks `⟨x^{-θ_s}⟩_q = Θ_{t-s-2}(⟨x^{q^{s+1}}⟩_q)` for every `x ≠ 0`.
pub fn negative_power_decomposition(model: &FieldModel, s: i64) -> Result<bool> {
    let f = model.field();
    let t = f.t() as i64;
    if !(0..t).contains(&s) {
        return Err(Error::Precondition(format!("need 0 <= s < t, got s = {s}")));
    }
    let q = f.q() as u64;
    let theta_s = theta(s, q) as i64;
    let e = f.e() as i64;
    for x in f.nonzero_elements() {
        let lhs = model.point_of(f.pow_signed(x, -theta_s).unwrap())?;
        let rhs = theta_map(model, t - s - 2, &model.point_of(f.frobenius(x, (s + 1) * e))?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model(p: u32, e: u32, t: u32) -> FieldModel {
        FieldModel::new(Arc::new(FieldCtx::new(p, e, t).unwrap())).unwrap()
    }

    #[test]
    fn verify_examples() {
        assert!(DifferenceSet::new(5, [0]).unwrap().is_difference_set(0));
        assert!(!DifferenceSet::new(7, [0, 1, 2]).unwrap().is_difference_set(1));
        assert!(DifferenceSet::new(7, [0, 1, 3]).unwrap().is_difference_set(1));
    }

    #[test]
    fn singer_small() {
        let m = model(2, 1, 3);
        let d = singer_set(m.field()).unwrap();
        assert_eq!((d.v(), d.k(), d.lambda()), (7, 3, Some(1)));
        for &i in d.elems() {
            assert!(m.field().trace(m.field().exp(i as i64)).is_zero());
        }
        let d = singer_set(model(2, 1, 5).field()).unwrap();
        assert_eq!((d.v(), d.k(), d.lambda()), (31, 15, Some(7)));
        assert!(matches!(singer_set(&FieldCtx::new(2, 1, 2).unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn translate_and_dilate() {
        let d = singer_set(model(2, 1, 3).field()).unwrap();
        assert_eq!(d.translate(0), d);
        assert!(d.translate(5).is_difference_set(1));
        assert!(d.dilate(2).translate_to(&d).is_some());
        assert!(d.dilate(3).is_difference_set(1));
        // 0 and 3 collapse under multiplication by 3 in Z_9
        let s = DifferenceSet::new(9, [0, 1, 3, 4]).unwrap();
        assert!(s.dilate(3).k() < s.k());
    }

    #[test]
    fn multipliers_are_p_powers() {
        assert_eq!(singer_set(model(2, 1, 3).field()).unwrap().multipliers(), vec![1, 2, 4]);
        assert_eq!(singer_set(model(3, 1, 3).field()).unwrap().multipliers(), vec![1, 3, 9]);
        let m = model(2, 2, 3);
        let d = singer_set(m.field()).unwrap();
        let expect: Vec<u64> = p_power_residues(2, 21).into_iter().collect();
        assert_eq!(d.multipliers(), expect);
    }

    #[test]
    fn translates_enumerate_hyperplanes() {
        for &(p, t) in &[(2u32, 3u32), (2, 5), (3, 3)] {
            let m = model(p, 1, t);
            let d = singer_set(m.field()).unwrap();
            assert!(translates_are_hyperplanes(&m, &d).unwrap());
        }
    }

    #[test]
    fn theta_map_basics() {
        let m = model(2, 1, 3);
        let one = m.point_of(Elem::ONE).unwrap();
        for p in m.index().points() {
            assert_eq!(&theta_map(&m, 0, p).unwrap(), p);
            assert_eq!(theta_map(&m, 2, p).unwrap(), one);
        }
        // Θ_s = Θ_d exactly when s ≡ d (mod t)
        let t = 3;
        for s in -1..=2 * t {
            for d in -1..=2 * t {
                let same = m.index().points().iter().all(|p| theta_map(&m, s, p).unwrap() == theta_map(&m, d, p).unwrap());
                assert_eq!(same, (s - d).rem_euclid(t) == 0, "s = {s}, d = {d}");
            }
        }
    }

    #[test]
    fn power_map_examples() {
        let m = model(2, 1, 3);
        assert!(power_map_is_collineation(&m, 1).unwrap().is_collineation());
        assert!(power_map_is_collineation(&m, 2).unwrap().is_collineation());
        let c = power_map_is_collineation(&m, 3).unwrap();
        assert!(!c.is_collineation() && !c.p_power);
        // x ↦ x^7 collapses everything to ⟨1⟩
        assert_eq!(power_map_is_collineation(&m, 7).unwrap().hyperplane_test, PowerMapVerdict::NotBijection);
    }

    #[test]
    fn power_map_methods_agree_over_range() {
        for &(p, e, t) in &[(2u32, 1u32, 3u32), (3, 1, 3), (2, 1, 4), (2, 2, 3)] {
            let m = model(p, e, t);
            for k in 1..=m.v() as i64 {
                power_map_is_collineation(&m, k).unwrap();
            }
        }
    }

    #[test]
    fn sweep_small() {
        for &(p, t) in &[(2u32, 3u32), (2, 5)] {
            let m = model(p, 1, t);
            let sweep = theta_not_collineation_sweep(&m).unwrap();
            assert_eq!(sweep.len(), t as usize - 1);
            assert!(sweep.iter().all(SweepEntry::passed));
        }
    }

    #[test]
    fn negative_decomposition() {
        for &(p, t) in &[(2u32, 3u32), (2, 5)] {
            let m = model(p, 1, t);
            for s in 0..t as i64 {
                assert!(negative_power_decomposition(&m, s).unwrap());
            }
        }
        let m = model(2, 1, 3);
        assert!(negative_power_decomposition(&m, 3).is_err());
    }

    proptest! {
        #[test]
        fn theta_map_ignores_representative(s in -1i64..8, k in 0i64..26, c in 1u32..3) {
            let m = model(3, 1, 3);
            let f = m.field();
            let x = f.exp(k);
            let c = Elem::from_index(c);
            let a = theta_map(&m, s, &m.point_of(x).unwrap()).unwrap();
            let b = m.point_of(f.pow(f.mul(c, x), theta(s, 3))).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn translates_stay_difference_sets(j in -50i64..50) {
            let d = singer_set(model(3, 1, 3).field()).unwrap();
            prop_assert!(d.translate(j).is_difference_set(1));
        }
    }
}
