//! The spread stabilizer `ΓL(2, q^t)` acting on `PG(2t-1, q)`, orbits of
//! witnesses of a linear set (condition (A)), lifting witnesses to
//! subgeometries, and the non-equivalent projection example built from
//! `Σ_id` and `Σ_π`.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::{Rng, SeedableRng};

use crate::diffsets::{power_map_is_collineation, FieldModel, PowerMapCheck, PowerMapVerdict};
use crate::error::{Error, Result};
use crate::gf::{gcd, theta, Elem, FieldCtx};
use crate::linalg::Matrix;
use crate::projgeom::{gaussian_binomial, PointMap, ProjPoint, ProjSubspace, SemilinearMap};
use crate::reduction::{LinearSet, ReductionCtx};
use crate::subgeom::{
    project_to_axis, pseudoregulus_l, sigma_pi, standard_axis, standard_center, Perm, Subgeometry,
};

/// Cap on the number of candidate `(matrix, automorphism)` pairs walked by
/// the exhaustive group enumeration.
pub const GROUP_BUDGET: u128 = 1 << 27;

fn need_line(red: &ReductionCtx) -> Result<()> {
    if red.r() != 2 {
        return Err(Error::Precondition(format!("spread stabilizer work needs r = 2, got r = {}", red.r())));
    }
    Ok(())
}

/// `|ΓL(2, q^t)|`, optionally divided by the `q - 1` scalars of `F_q^*`
/// that act trivially on `F_q`-subspaces.
pub fn spread_stabilizer_order(f: &FieldCtx, modulo_base_scalars: bool) -> u128 {
    let big = f.order() as u128;
    let gl = (big * big - 1) * (big * big - big);
    let order = gl * f.degree() as u128;
    if modulo_base_scalars {
        order / (f.q() as u128 - 1)
    } else {
        order
    }
}

/// Streams every `(M, h)` with `M ∈ GL(2, q^t)` and `0 ≤ h < e·t`,
/// automorphism outermost. With `modulo_base_scalars`, only the matrix
/// whose first nonzero entry has discrete log below `θ_{t-1}` is kept from
/// each `F_q^*`-class.
pub fn for_each_spread_stabilizer(
    red: &ReductionCtx,
    modulo_base_scalars: bool,
    budget: u128,
    mut visit: impl FnMut(&SemilinearMap) -> ControlFlow<()>,
) -> Result<()> {
    need_line(red)?;
    let f = red.field();
    let big = f.order() as u128;
    let needed = big.pow(4) * f.degree() as u128;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let els: Vec<Elem> = f.elements().collect();
    let top = f.theta_top() as u32;
    for h in 0..f.degree() as i64 {
        let mut digits = [0usize; 4];
        loop {
            let m = [els[digits[0]], els[digits[1]], els[digits[2]], els[digits[3]]];
            let det = f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]));
            let lead_ok = !modulo_base_scalars
                || m.iter().find(|x| !x.is_zero()).map(|&x| f.dlog(x).unwrap() < top).unwrap_or(false);
            if !det.is_zero() && lead_ok {
                let g = SemilinearMap::new(f, Matrix::from_rows(2, &[[m[0], m[1]], [m[2], m[3]]]), h)?;
                if visit(&g).is_break() {
                    return Ok(());
                }
            }
            if !crate::projgeom::advance(&mut digits, els.len()) {
                break;
            }
        }
    }
    Ok(())
}

pub fn spread_stabilizer_maps(red: &ReductionCtx, budget: u128) -> Result<Vec<SemilinearMap>> {
    let mut out = Vec::new();
    for_each_spread_stabilizer(red, false, budget, |g| {
        out.push(g.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// The `F_q`-semilinear action of `g` on `F_q^{rt}`.
pub fn apply_to_base_vector(red: &ReductionCtx, g: &SemilinearMap, w: &[Elem]) -> Vec<Elem> {
    red.to_base(&g.apply_vec(red.field(), &red.from_base(w)))
}

pub fn apply_to_base_subspace(red: &ReductionCtx, g: &SemilinearMap, u: &ProjSubspace) -> ProjSubspace {
    let rows: Vec<Vec<Elem>> = u.basis().row_vecs().map(|w| apply_to_base_vector(red, g, w)).collect();
    ProjSubspace::from_vectors(red.field(), red.r() * red.t(), &rows)
}

pub fn permutes_spread(red: &ReductionCtx, g: &SemilinearMap, spread: &[ProjSubspace]) -> bool {
    let mut sorted = spread.to_vec();
    sorted.sort();
    spread.iter().all(|s| sorted.binary_search(&apply_to_base_subspace(red, g, s)).is_ok())
}

fn normalized_map(f: &FieldCtx, m: Matrix, h: i64) -> Result<SemilinearMap> {
    let lead = *m.entries().iter().find(|x| !x.is_zero()).ok_or(Error::Singular)?;
    let inv = f.inv(lead);
    SemilinearMap::new(f, m.map_entries(|x| f.mul(inv, x)), h)
}

/// `[a·P0 | b·P1]` with `a·P0 + b·P1 = P2`.
fn frame(f: &FieldCtx, p: [&[Elem]; 3]) -> Result<Matrix> {
    let basis = Matrix::from_rows(2, &[[p[0][0], p[1][0]], [p[0][1], p[1][1]]]);
    let ab = basis.inverse(f)?.apply(f, p[2]);
    if ab.iter().any(|x| x.is_zero()) {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_rows(2, &[[f.mul(ab[0], p[0][0]), f.mul(ab[1], p[1][0])], [f.mul(ab[0], p[0][1]), f.mul(ab[1], p[1][1])]]))
}

/// Every element of `PΓL(2, q^t)` mapping the point set `l` onto itself,
/// as semilinear maps with leading matrix entry one.
pub fn line_set_stabilizer(f: &FieldCtx, l: &[ProjPoint]) -> Result<Vec<SemilinearMap>> {
    if let Some(p) = l.iter().find(|p| p.len() != 2) {
        return Err(Error::DimensionMismatch { expected: 2, got: p.len() });
    }
    let mut set = l.to_vec();
    set.sort();
    set.dedup();
    let maps_set = |g: &SemilinearMap| set.iter().all(|p| g.apply(f, p).map(|q| set.binary_search(&q).is_ok()).unwrap_or(false));
    let mut out = Vec::new();
    if set.len() < 3 {
        let els: Vec<Elem> = f.elements().collect();
        for h in 0..f.degree() as i64 {
            let mut digits = [0usize; 4];
            while crate::projgeom::advance(&mut digits, els.len()) {
                let m = [els[digits[0]], els[digits[1]], els[digits[2]], els[digits[3]]];
                if m.iter().find(|x| !x.is_zero()) != Some(&Elem::ONE) {
                    continue;
                }
                if f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2])).is_zero() {
                    continue;
                }
                let g = SemilinearMap::new(f, Matrix::from_rows(2, &[[m[0], m[1]], [m[2], m[3]]]), h)?;
                if maps_set(&g) {
                    out.push(g);
                }
            }
        }
        return Ok(out);
    }
    let src = [&set[0], &set[1], &set[2]];
    for h in 0..f.degree() as i64 {
        let tw: Vec<Vec<Elem>> = src.iter().map(|p| p.coords().iter().map(|&x| f.frobenius(x, h)).collect()).collect();
        let src_inv = frame(f, [&tw[0], &tw[1], &tw[2]])?.inverse(f)?;
        for (i, a) in set.iter().enumerate() {
            for (j, b) in set.iter().enumerate() {
                if j == i {
                    continue;
                }
                for (k, c) in set.iter().enumerate() {
                    if k == i || k == j {
                        continue;
                    }
                    let dst = frame(f, [a.coords(), b.coords(), c.coords()])?;
                    let g = normalized_map(f, dst.mul(f, &src_inv), h)?;
                    if maps_set(&g) {
                        out.push(g);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All `(λ M, h)` with `λ = g^k`, `k < θ_{t-1}`: one representative per
/// `F_q^*`-class above each given map.
pub fn lift_to_semilinear_group(f: &FieldCtx, maps: &[SemilinearMap]) -> Vec<SemilinearMap> {
    let top = f.theta_top() as i64;
    let mut out = Vec::with_capacity(maps.len() * top as usize);
    for g in maps {
        for k in 0..top {
            let lambda = f.exp(k);
            let m = g.matrix().map_entries(|x| f.mul(lambda, x));
            out.push(SemilinearMap::new_unchecked(m, g.frob()));
        }
    }
    out
}

/// Every subspace `U` of vector dimension `n` of `PG(rt-1, q)` with
/// `B(U) = L`, walking RREF bases and pruning as soon as a point of the
/// partial span leaves `L`.
pub fn linear_set_witnesses(red: &ReductionCtx, l: &LinearSet, n: usize, budget: u64) -> Result<Vec<ProjSubspace>> {
    let space = red.base_space();
    let count = gaussian_binomial((red.r() * red.t()) as u64, n as u64, red.q());
    if count > budget as u128 {
        return Err(Error::BudgetExceeded { needed: count, budget: budget as u128 });
    }
    let f = red.field();
    let base = f.base_elements().to_vec();
    let inside = |rows: &Matrix| -> bool {
        // only combinations involving the newest row are new
        let k = rows.rows();
        let last = rows.row(k - 1);
        let mut digits = vec![0usize; k - 1];
        loop {
            let mut v = last.to_vec();
            for (d, &c) in digits.iter().enumerate() {
                let coeff = base[c];
                if !coeff.is_zero() {
                    v = crate::linalg::axpy(f, &v, coeff, rows.row(d));
                }
            }
            match red.spread_point_of(&v) {
                Ok(p) if l.contains(&p) => {}
                _ => return false,
            }
            if !crate::projgeom::advance(&mut digits, base.len()) {
                return true;
            }
        }
    };
    let mut out = Vec::new();
    let mut err = None;
    space.for_each_subspace(n, inside, |u| match red.linear_set(u) {
        Ok(b) if b == *l => out.push(u.clone()),
        Ok(_) => {}
        Err(e) => err = Some(e),
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitRoute {
    /// lifts of the setwise stabilizer of `L` in `PΓL(2, q^t)`
    SetStabilizer,
    /// every element of `ΓL(2, q^t)` modulo `F_q^*`
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct ConditionA {
    pub witnesses: Vec<ProjSubspace>,
    /// a partition of `0..witnesses.len()`, each orbit sorted, orbits
    /// ordered by their smallest member
    pub orbits: Vec<Vec<usize>>,
    /// group elements applied to the witnesses
    pub group_elements: u128,
    pub route: OrbitRoute,
}

impl ConditionA {
    pub fn holds(&self) -> bool {
        self.orbits.len() == 1
    }

    /// Two witnesses in different orbits.
    pub fn counterwitness(&self) -> Option<(&ProjSubspace, &ProjSubspace)> {
        if self.orbits.len() < 2 {
            return None;
        }
        Some((&self.witnesses[self.orbits[0][0]], &self.witnesses[self.orbits[1][0]]))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    fn classes(mut self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort();
        out
    }
}

/// Orbits of the spread stabilizer on witnesses of `l`.
pub fn witness_orbits(
    red: &ReductionCtx,
    l: &LinearSet,
    witnesses: &[ProjSubspace],
    route: OrbitRoute,
    budget: u128,
) -> Result<(Vec<Vec<usize>>, u128)> {
    need_line(red)?;
    let f = red.field();
    let lookup: HashMap<&ProjSubspace, usize> = witnesses.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut uf = UnionFind::new(witnesses.len());
    let mut used = 0u128;
    let apply = |g: &SemilinearMap, uf: &mut UnionFind| -> Result<()> {
        for (i, w) in witnesses.iter().enumerate() {
            let img = apply_to_base_subspace(red, g, w);
            let j = *lookup
                .get(&img)
                .ok_or_else(|| Error::Consistency("a stabilizer of L moved a witness off L".into()))?;
            uf.union(i, j);
        }
        Ok(())
    };
    match route {
        OrbitRoute::SetStabilizer => {
            let maps = lift_to_semilinear_group(f, &line_set_stabilizer(f, l.points())?);
            for g in &maps {
                apply(g, &mut uf)?;
            }
            used = maps.len() as u128;
        }
        OrbitRoute::Exhaustive => {
            let mut err = None;
            for_each_spread_stabilizer(red, true, budget, |g| {
                // elements moving L cannot map a witness of L to one
                let fixes = l.points().iter().all(|p| g.apply(f, p).map(|q| l.contains(&q)).unwrap_or(false));
                if fixes {
                    used += 1;
                    if let Err(e) = apply(g, &mut uf) {
                        err = Some(e);
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            })?;
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok((uf.classes(), used))
}

pub fn condition_a_check(
    red: &ReductionCtx,
    l: &LinearSet,
    n: usize,
    route: OrbitRoute,
    budget: u64,
) -> Result<ConditionA> {
    need_line(red)?;
    let witnesses = linear_set_witnesses(red, l, n, budget)?;
    let (orbits, group_elements) = witness_orbits(red, l, &witnesses, route, GROUP_BUDGET)?;
    Ok(ConditionA { witnesses, orbits, group_elements, route })
}

/// Some element of the spread stabilizer carrying `u` to `u2`, both
/// witnesses of `l`.
pub fn find_witness_map(red: &ReductionCtx, l: &LinearSet, u: &ProjSubspace, u2: &ProjSubspace) -> Result<Option<SemilinearMap>> {
    need_line(red)?;
    let f = red.field();
    let maps = lift_to_semilinear_group(f, &line_set_stabilizer(f, l.points())?);
    Ok(maps.into_iter().find(|g| apply_to_base_subspace(red, g, u) == *u2))
}

/// `{(λ, λ^{q^k})}` as a subspace of `PG(2t-1, q)`.
pub fn pseudoregulus_witness(red: &ReductionCtx, k: i64) -> ProjSubspace {
    let f = red.field();
    let e = f.e() as i64;
    let vecs: Vec<Vec<Elem>> = (0..red.t() as i64).map(|i| vec![f.exp(i), f.frobenius(f.exp(i), k * e)]).collect();
    red.lift(&vecs)
}

/// A subgeometry of `PG(n-1, q^t)` built from an `F_q`-basis of `W ⊆ R`,
/// with the center, axis, and projection checks it passed.
#[derive(Clone, Debug)]
pub struct Lift {
    pub sigma: Subgeometry,
    pub center: ProjSubspace,
    pub axis: ProjSubspace,
    /// `p_{Γ,Λ}(Σ)` in axis coordinates
    pub projection: Vec<ProjPoint>,
}

/// `V = ⟨w_1, …, w_r, w_{r+1} + z_1, …, w_n + z_{n-r}⟩_q` in `F_{q^t}^n`
/// with `R = ⟨e_1..e_r⟩` and `Z = ⟨e_{r+1}..e_n⟩`. Fails unless `Σ` is
/// canonical, misses `Γ`, and projects onto `B(U)`.
pub fn lift_to_subgeometry(red: &ReductionCtx, u: &ProjSubspace) -> Result<Lift> {
    let f = red.field();
    let r = red.r();
    let mut w = red.unlift(u);
    let n = w.len();
    if n < r {
        return Err(Error::Precondition(format!("rank {n} is below r = {r}")));
    }
    // move r F_{q^t}-independent vectors to the front, keeping the order otherwise
    let mut front = Vec::new();
    let mut acc = Matrix::zeros(0, r);
    for (i, v) in w.iter().enumerate() {
        if front.len() == r {
            break;
        }
        let mut trial = acc.clone();
        trial.push_row(v);
        if trial.rank(f) > acc.rank(f) {
            acc = trial;
            front.push(i);
        }
    }
    if front.len() < r {
        return Err(Error::Precondition("B(U) does not span PG(r-1, q^t)".into()));
    }
    let mut ordered: Vec<Vec<Elem>> = front.iter().map(|&i| w[i].clone()).collect();
    ordered.extend(w.drain(..).enumerate().filter(|(i, _)| !front.contains(i)).map(|(_, v)| v));

    let basis: Vec<Vec<Elem>> = ordered
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut x = vec![Elem::ZERO; n];
            x[..r].copy_from_slice(v);
            if i >= r {
                x[i] = Elem::ONE;
            }
            x
        })
        .collect();
    if Matrix::from_rows(n, &basis).rank(f) != n {
        return Err(Error::Consistency("lifted vectors are F_{q^t}-dependent".into()));
    }
    let sigma = Subgeometry::from_basis(f, basis)?;
    let center = lifted_center(f, r, n);
    let axis = lifted_axis(f, r, n);
    if !sigma.is_canonical(f) {
        return Err(Error::Consistency("lift is not a canonical subgeometry".into()));
    }
    if sigma.meets(f, &center) {
        return Err(Error::Consistency("lift meets the center".into()));
    }
    let projection = project_to_axis(f, &center, &axis, sigma.points())?;
    let b = red.linear_set(u)?;
    if projection != b.points() {
        return Err(Error::Consistency("projection of the lift differs from B(U)".into()));
    }
    Ok(Lift { sigma, center, axis, projection })
}

fn lifted_center(f: &FieldCtx, r: usize, n: usize) -> ProjSubspace {
    let rows: Vec<Vec<Elem>> = (r..n)
        .map(|i| {
            let mut v = vec![Elem::ZERO; n];
            v[i] = Elem::ONE;
            v
        })
        .collect();
    ProjSubspace::from_vectors(f, n, &rows)
}

fn lifted_axis(f: &FieldCtx, r: usize, n: usize) -> ProjSubspace {
    let rows: Vec<Vec<Elem>> = (0..r)
        .map(|i| {
            let mut v = vec![Elem::ZERO; n];
            v[i] = Elem::ONE;
            v
        })
        .collect();
    ProjSubspace::from_vectors(f, n, &rows)
}

/// Point map `⟨x⟩_q ↦ ⟨ρ·x^m⟩_q`.
pub fn scaled_power_map(model: &FieldModel, m: i64, rho: Elem) -> Result<PointMap> {
    let f = model.field();
    PointMap::from_fn(model.index(), |p| {
        let x = f.pow_signed(model.element_of(p), m).unwrap();
        model.point_of(f.mul(rho, x)).unwrap()
    })
}

fn map_verdict(model: &FieldModel, map: &PointMap) -> Result<PowerMapVerdict> {
    match model.hyperplane_system().is_collineation(map) {
        Ok(true) => Ok(PowerMapVerdict::Collineation),
        Ok(false) => Ok(PowerMapVerdict::NotCollineation),
        Err(Error::NotInjective) => Ok(PowerMapVerdict::NotBijection),
        Err(e) => Err(e),
    }
}

/// The two maps a projectivity with `Γ^φ = Γ` and `Σ_id^φ = Σ_π` would
/// induce on `PG(t-1, q)`.
#[derive(Clone, Debug)]
pub struct Candidates {
    pub omega: Perm,
    pub mu: usize,
    /// `⟨x⟩ ↦ ⟨x^{θ_{μ-1}}⟩`
    pub diagonal: PowerMapCheck,
    /// `⟨x⟩ ↦ ⟨x^{-θ_{μ-1}}⟩`
    pub antidiagonal: PowerMapCheck,
    /// a nonzero `ρ` never changes either verdict (checked for random `ρ`)
    pub rho_absorbed: bool,
    pub rho_samples: Vec<Elem>,
}

impl Candidates {
    /// Neither candidate is a collineation, so no such projectivity exists.
    pub fn obstruction(&self) -> bool {
        !self.diagonal.is_collineation() && !self.antidiagonal.is_collineation()
    }
}

pub const RHO_SAMPLES: usize = 5;

pub fn counterexample_candidates(model: &FieldModel, pi: &Perm, seed: u64) -> Result<Candidates> {
    let f = model.field();
    let t = f.t() as usize;
    if t < 3 || pi.len() != t {
        return Err(Error::Precondition(format!("need t >= 3 and a permutation of 0..{t}")));
    }
    let omega = pi.normalized();
    let mu = omega.mu();
    if gcd(mu as u64, t as u64) != 1 {
        return Err(Error::Precondition(format!("gcd(π(1) - π(0), t) = gcd({mu}, {t}) is not 1")));
    }
    let m = theta(mu as i64 - 1, f.q() as u64) as i64;
    let diagonal = power_map_is_collineation(model, m)?;
    let antidiagonal = power_map_is_collineation(model, -m)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let order = f.order();
    let rho_samples: Vec<Elem> = (0..RHO_SAMPLES).map(|_| Elem::from_index(rng.gen_range(1..order))).collect();
    let mut rho_absorbed = true;
    for &rho in &rho_samples {
        let shift = map_verdict(model, &scaled_power_map(model, 1, rho)?)?;
        let d = map_verdict(model, &scaled_power_map(model, m, f.inv(rho))?)?;
        let a = map_verdict(model, &scaled_power_map(model, -m, rho)?)?;
        rho_absorbed &= shift == PowerMapVerdict::Collineation
            && d == diagonal.hyperplane_test
            && a == antidiagonal.hyperplane_test;
    }
    Ok(Candidates { omega, mu, diagonal, antidiagonal, rho_absorbed, rho_samples })
}

/// The parts of the two-subgeometry example in `PG(t-1, q^t)`.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub pi: Perm,
    /// `Σ_id ≠ Σ_π` as point sets
    pub distinct: bool,
    /// both canonical and disjoint from `Γ: X_1 = X_2 = 0`
    pub canonical_and_avoid_center: bool,
    /// both project onto `𝕃` from `Γ` to `Λ: X_3 = … = 0`
    pub projections_are_l: bool,
    pub l_size: usize,
    pub candidates: Candidates,
    /// `|𝕃| > θ_{t-2}`, so `𝕃` has no witness of smaller rank
    pub rank_bound_by_size: bool,
}

impl Counterexample {
    pub fn passed(&self) -> bool {
        self.distinct
            && self.canonical_and_avoid_center
            && self.projections_are_l
            && self.candidates.obstruction()
            && self.candidates.rho_absorbed
            && self.rank_bound_by_size
    }
}

/// Checks `Σ_id`, `Σ_π` over `F_{q^t}` with `t = 5` or `t > 6`. When
/// `π(1) - π(0) ≡ ±1` the run completes and the candidate step reports a
/// collineation.
pub fn verify_counterexample(field: Arc<FieldCtx>, pi: &Perm, seed: u64) -> Result<Counterexample> {
    let f = &*field;
    let t = f.t() as usize;
    if !(t == 5 || t > 6) {
        return Err(Error::Precondition(format!("the example needs t = 5 or t > 6, got t = {t}")));
    }
    let model = FieldModel::new(field.clone())?;
    let candidates = counterexample_candidates(&model, pi, seed)?;
    let id = sigma_pi(f, &Perm::identity(t))?;
    let other = sigma_pi(f, pi)?;
    let center = standard_center(f, t);
    let axis = standard_axis(f, t);
    let l = pseudoregulus_l(f)?;
    let p1 = project_to_axis(f, &center, &axis, id.points())?;
    let p2 = project_to_axis(f, &center, &axis, other.points())?;
    let q = f.q() as u64;
    Ok(Counterexample {
        pi: pi.clone(),
        distinct: !id.same_points(&other),
        canonical_and_avoid_center: [&id, &other].iter().all(|s| s.is_canonical(f) && !s.meets(f, &center)),
        projections_are_l: p1 == l && p2 == l,
        l_size: l.len(),
        candidates,
        rank_bound_by_size: l.len() as u64 > theta(t as i64 - 2, q),
    })
}

/// Two lifts over a common center from witnesses `u`, `u2` of one linear
/// set, together with whether the witnesses lie in different orbits.
#[derive(Clone, Debug)]
pub struct LiftedPair {
    pub first: Lift,
    pub second: Lift,
    pub linear_set: LinearSet,
    /// no spread-stabilizer element maps `u` to `u2`
    pub witnesses_inequivalent: bool,
    pub same_center_and_axis: bool,
    pub projections_equal: bool,
}

pub fn lift_witness_pair(red: &ReductionCtx, u: &ProjSubspace, u2: &ProjSubspace) -> Result<LiftedPair> {
    need_line(red)?;
    let l = red.linear_set(u)?;
    if red.linear_set(u2)? != l || u.rank() != u2.rank() {
        return Err(Error::Precondition("witnesses must have the same rank and the same linear set".into()));
    }
    let witnesses_inequivalent = find_witness_map(red, &l, u, u2)?.is_none();
    let first = lift_to_subgeometry(red, u)?;
    let second = lift_to_subgeometry(red, u2)?;
    let same_center_and_axis = first.center == second.center && first.axis == second.axis;
    let projections_equal = first.projection == second.projection && first.projection == l.points();
    Ok(LiftedPair { first, second, linear_set: l, witnesses_inequivalent, same_center_and_axis, projections_equal })
}

/// Searches for `β` with `Γ^β = Γ` and `Σ_1^β = Σ_2`, where `β` agrees on
/// the axis with a lifted stabilizer element of `B(U)` and has the block
/// form `[[A, 0], [u, d]]`.
pub fn extend_to_ambient(red: &ReductionCtx, first: &Lift, second: &Lift, l: &LinearSet) -> Result<Option<SemilinearMap>> {
    need_line(red)?;
    let f = red.field();
    let n = first.sigma.n();
    if n != 3 {
        return Err(Error::Precondition(format!("ambient extension search is for n = 3, got {n}")));
    }
    let els: Vec<Elem> = f.elements().collect();
    for g in lift_to_semilinear_group(f, &line_set_stabilizer(f, l.points())?) {
        let a = g.matrix();
        for &u0 in &els {
            for &u1 in &els {
                for &d in els.iter().filter(|d| !d.is_zero()) {
                    let m = Matrix::from_rows(
                        3,
                        &[[a[(0, 0)], a[(0, 1)], Elem::ZERO], [a[(1, 0)], a[(1, 1)], Elem::ZERO], [u0, u1, d]],
                    );
                    let beta = SemilinearMap::new(f, m, g.frob() as i64)?;
                    let hits = first
                        .sigma
                        .points()
                        .iter()
                        .all(|p| beta.apply(f, p).map(|q| second.sigma.contains(&q)).unwrap_or(false));
                    if hits && beta.apply_subspace(f, &first.center) == second.center {
                        return Ok(Some(beta));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Maps a random invertible `F_q`-matrix of size `2t` to `PG(2t-1, q)` and
/// reports whether it permutes the spread elements.
pub fn random_linear_map_preserves_spread<R: Rng>(red: &ReductionCtx, spread: &[ProjSubspace], rng: &mut R) -> bool {
    let f = red.field();
    let n = red.r() * red.t();
    let base = f.base_elements();
    let m = loop {
        let rows: Vec<Vec<Elem>> = (0..n).map(|_| (0..n).map(|_| base[rng.gen_range(0..base.len())]).collect()).collect();
        let m = Matrix::from_rows(n, &rows);
        if !m.det(f).is_zero() {
            break m;
        }
    };
    let mut sorted = spread.to_vec();
    sorted.sort();
    spread.iter().all(|s| {
        let rows: Vec<Vec<Elem>> = s.basis().row_vecs().map(|w| m.apply(f, w)).collect();
        sorted.binary_search(&ProjSubspace::from_vectors(f, n, &rows)).is_ok()
    })
}
