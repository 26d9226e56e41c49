use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use linset_core::diffsets::{
    negative_power_decomposition, singer_set, theta_not_collineation_sweep, translates_are_hyperplanes, FieldModel,
};
use linset_core::equiv::{
    condition_a_check, counterexample_candidates, pseudoregulus_witness, lift_witness_pair, verify_counterexample,
    witness_orbits, OrbitRoute, GROUP_BUDGET,
};
use linset_core::projgeom::{gaussian_binomial, DEFAULT_BUDGET};
use linset_core::scenario::{admissible_perms, field_axioms, moore_matches_rank};
use linset_core::subgeom::{capital_phi, project_to_axis, sigma_pi, standard_axis, standard_center};
use linset_core::{theta, Elem, FieldCtx, LinearSet, Perm, ProjPoint, ProjSpace, ProjSubspace, ReductionCtx, Scalars};

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(q: u32, t: u32) -> Arc<FieldCtx> {
    let (p, e) = linset_core::gf::prime_power(q as u64).unwrap();
    Arc::new(FieldCtx::new(p, e, t).unwrap())
}

const GRID: [(u32, u32); 9] = [(2, 3), (2, 4), (2, 5), (2, 7), (3, 3), (3, 4), (3, 5), (4, 3), (5, 3)];

fn p_powers_mod(p: u64, v: u64) -> Vec<u64> {
    let mut seen = BTreeSet::new();
    let mut x = 1 % v;
    while seen.insert(x) {
        x = x * p % v;
    }
    seen.into_iter().collect()
}

/// `{⟨(λ, λ^q)⟩ : λ ≠ 0}` built straight from the field.
fn pseudoregulus_points(f: &FieldCtx) -> Vec<ProjPoint> {
    let e = f.e() as i64;
    let set: BTreeSet<ProjPoint> =
        f.nonzero_elements().map(|x| ProjPoint::normalize(f, &[x, f.frobenius(x, e)]).unwrap()).collect();
    set.into_iter().collect()
}

fn singer_suite() -> Outcome {
    for (q, t) in GRID {
        let f = field(q, t);
        let model = FieldModel::new(f.clone()).map_err(|e| e.to_string())?;
        let mut d = singer_set(&f).map_err(|e| e.to_string())?;
        let (v, k, l) = (theta(t as i64 - 1, q as u64), theta(t as i64 - 2, q as u64), theta(t as i64 - 3, q as u64));
        ensure(d.v() == v && d.k() as u64 == k && d.verify(l), || format!("({q},{t}): not a ({v},{k},{l}) set"))?;
        ensure(translates_are_hyperplanes(&model, &d).unwrap(), || format!("({q},{t}): translates"))?;
        let want = p_powers_mod(f.p() as u64, v);
        ensure(d.multipliers() == want, || format!("({q},{t}): multipliers {:?} vs {want:?}", d.multipliers()))?;
    }
    Ok(())
}

fn theta_suite() -> Outcome {
    for (q, t) in GRID {
        let model = FieldModel::new(field(q, t)).map_err(|e| e.to_string())?;
        let sweep = theta_not_collineation_sweep(&model).map_err(|e| e.to_string())?;
        ensure(sweep.len() == t as usize - 1, || format!("({q},{t}): {} entries", sweep.len()))?;
        for s in &sweep {
            ensure(s.passed(), || format!("({q},{t}) s={}: {:?}", s.s, s.check))?;
        }
    }
    Ok(())
}

fn negative_suite() -> Outcome {
    for (q, t) in [(2, 3), (2, 5), (3, 3), (3, 5)] {
        let model = FieldModel::new(field(q, t)).map_err(|e| e.to_string())?;
        for s in 0..t as i64 {
            ensure(negative_power_decomposition(&model, s).unwrap(), || format!("({q},{t}) s={s}"))?;
        }
    }
    Ok(())
}

fn projection_suite() -> Outcome {
    for (q, size) in [(2u32, 31usize), (3, 121)] {
        let f = field(q, 5);
        let l = pseudoregulus_points(&f);
        ensure(l.len() == size, || format!("|𝕃| = {} for q = {q}", l.len()))?;
        let (center, axis) = (standard_center(&f, 5), standard_axis(&f, 5));
        let perms = admissible_perms(5);
        ensure(perms.len() == 24, || "permutation count".into())?;
        for pi in perms {
            let s = sigma_pi(&f, &pi).map_err(|e| e.to_string())?;
            let proj = project_to_axis(&f, &center, &axis, s.points()).map_err(|e| e.to_string())?;
            ensure(proj == l, || format!("q = {q}, π = {pi}"))?;
        }
    }
    Ok(())
}

fn perm_with_mu(t: usize, mu: usize) -> Perm {
    let mut images = vec![0, mu];
    images.extend((1..t).filter(|&i| i != mu));
    Perm::new(images).unwrap()
}

fn counterexample_suite() -> Outcome {
    for (q, t, mu) in [(2, 5, 2), (2, 5, 3), (3, 5, 2), (2, 7, 2), (2, 7, 3)] {
        let c = verify_counterexample(field(q, t), &perm_with_mu(t as usize, mu), 7).map_err(|e| e.to_string())?;
        ensure(c.passed(), || format!("({q},{t},{mu}): {c:?}"))?;
    }
    for (q, t) in [(2u32, 5usize), (3, 5), (2, 7)] {
        let model = FieldModel::new(field(q, t as u32)).map_err(|e| e.to_string())?;
        let one = counterexample_candidates(&model, &perm_with_mu(t, 1), 7).map_err(|e| e.to_string())?;
        ensure(one.diagonal.is_collineation(), || format!("({q},{t}) μ = 1: diagonal is not a collineation"))?;
        let last = counterexample_candidates(&model, &perm_with_mu(t, t - 1), 7).map_err(|e| e.to_string())?;
        ensure(last.antidiagonal.is_collineation(), || format!("({q},{t}) μ = t-1: antidiagonal is not a collineation"))?;
    }
    Ok(())
}

fn condition_a_suite() -> Outcome {
    for q in [2u32, 3, 4] {
        let red = ReductionCtx::new(field(q, 3), 2).unwrap();
        let f = red.field();
        let point = ProjPoint::normalize(f, &[Elem::ONE, Elem::ZERO]).unwrap();
        let lp = red.linear_set(&red.field_reduce_point(&point)).unwrap();
        let a = condition_a_check(&red, &lp, 3, OrbitRoute::SetStabilizer, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(a.witnesses.len() == 1, || format!("q = {q}: point has {} witnesses", a.witnesses.len()))?;

        let g = f.generator();
        let club = red.lift(&[vec![Elem::ONE, Elem::ZERO], vec![g, Elem::ZERO], vec![Elem::ZERO, Elem::ONE]]);
        let sets: [(&str, LinearSet); 2] =
            [("club", red.linear_set(&club).unwrap()), ("scattered", red.linear_set(&pseudoregulus_witness(&red, 1)).unwrap())];
        for (name, l) in &sets {
            let a = condition_a_check(&red, l, 3, OrbitRoute::SetStabilizer, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            ensure(a.witnesses.len() > 1 && a.holds(), || {
                format!("q = {q} {name}: {} orbits on {} witnesses", a.orbits.len(), a.witnesses.len())
            })?;
            if q <= 3 {
                let (orbits, _) =
                    witness_orbits(&red, l, &a.witnesses, OrbitRoute::Exhaustive, GROUP_BUDGET).map_err(|e| e.to_string())?;
                ensure(orbits == a.orbits, || format!("q = {q} {name}: exhaustive route disagrees"))?;
            }
        }
    }
    Ok(())
}

fn generale_suite() -> Outcome {
    let red = ReductionCtx::new(field(2, 5), 2).unwrap();
    let f = red.field();
    let l = pseudoregulus_points(f);
    let (u, u2) = (pseudoregulus_witness(&red, 1), pseudoregulus_witness(&red, 2));
    let g = lift_witness_pair(&red, &u, &u2).map_err(|e| e.to_string())?;
    for lift in [&g.first, &g.second] {
        ensure(lift.sigma.is_canonical(f), || "not canonical".into())?;
        ensure(!lift.sigma.meets(f, &lift.center), || "meets Γ".into())?;
        ensure(lift.projection == l, || "projection is not 𝕃".into())?;
        ensure(lift.sigma.points().len() as u64 == theta(4, 2), || "wrong subgeometry size".into())?;
    }
    ensure(g.witnesses_inequivalent, || "witnesses are equivalent".into())?;
    Ok(())
}

fn structural_suite() -> Outcome {
    for p in [2u32, 3, 5, 7] {
        for e in 1..=6u32 {
            for t in 1..=6u32 {
                if (p as u64).checked_pow(e * t).map_or(true, |n| n > 64) {
                    continue;
                }
                let f = FieldCtx::new(p, e, t).unwrap();
                let n = f.order() as u64;
                field_axioms(&f, n.pow(3), 0).map_err(|(d, _)| format!("F_{p}^({e}·{t}): {d}"))?;
            }
        }
    }
    for (r, t, q) in [(2usize, 3u32, 2u32), (2, 3, 3), (2, 5, 2)] {
        let red = ReductionCtx::new(field(q, t), r).unwrap();
        let spread = red.desarguesian_spread(DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let pts = red.base_space().enumerate_points(DEFAULT_BUDGET).unwrap();
        let f = red.field();
        let mut covered = 0usize;
        let mut all = BTreeSet::new();
        for s in &spread {
            for p in s.points(f, f.base_elements()) {
                covered += 1;
                all.insert(p);
            }
        }
        ensure(covered == pts.len() && all.len() == pts.len(), || format!("({r},{t},{q}): not a partition"))?;
        ensure(spread.len() as u64 == theta(r as i64 - 1, (q as u64).pow(t)), || format!("({r},{t},{q}): count"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [2u32, 3] {
        let f = field(q, 1);
        let space = ProjSpace::new(f.clone(), 4, Scalars::Full);
        for k in 1..=3usize {
            let subs = space.subspaces(k, DEFAULT_BUDGET).unwrap();
            ensure(subs.len() as u128 == gaussian_binomial(4, k as u64, q as u64), || format!("PG(3,{q}) k={k} count"))?;
            let distinct: BTreeSet<&ProjSubspace> = subs.iter().collect();
            ensure(distinct.len() == subs.len(), || format!("PG(3,{q}) k={k}: repeated canonical form"))?;
            for s in &subs {
                let pts = space.points_of(s);
                for _ in 0..3 {
                    let mut rows: Vec<Vec<Elem>> = Vec::new();
                    while ProjSubspace::from_vectors(&f, 4, &rows).rank() < k {
                        let p = &pts[rand::Rng::gen_range(&mut rng, 0..pts.len())];
                        rows.push(p.coords().to_vec());
                    }
                    ensure(ProjSubspace::from_vectors(&f, 4, &rows) == *s, || format!("PG(3,{q}): canonical form differs"))?;
                }
            }
        }
    }
    let f = field(2, 3);
    match moore_matches_rank(&f, 1 << 12, 0).map_err(|e| e.to_string())? {
        Ok(d) if d.starts_with("all") => {}
        Ok(d) => return Err(format!("Moore check was not exhaustive: {d}")),
        Err((d, _)) => return Err(d),
    }
    Ok(())
}

fn phi_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (q, t) in [(2u32, 3usize), (2, 5), (3, 3)] {
        let f = field(q, t as u32);
        for _ in 0..10 {
            let pi = Perm::random(t, &mut rng);
            let s = sigma_pi(&f, &pi).map_err(|e| e.to_string())?;
            let start: BTreeSet<&ProjPoint> = s.points().iter().collect();
            for h in 0..f.degree() as i64 {
                let img: BTreeSet<ProjPoint> = s.points().iter().map(|p| capital_phi(&f, h, p)).collect();
                ensure(img.iter().collect::<BTreeSet<_>>() == start, || format!("({q},{t}) π = {pi}: Φ_{h} moves Σ_π"))?;
            }
            let w = sigma_pi(&f, &pi.normalized()).map_err(|e| e.to_string())?;
            ensure(s.same_points(&w), || format!("({q},{t}) π = {pi}: normalizing changes the points"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 singer difference sets", singer_suite),
        ("2 Θ_s non-collineation", theta_suite),
        ("3 negative power decomposition", negative_suite),
        ("4 projection onto 𝕃", projection_suite),
        ("5 counterexample package", counterexample_suite),
        ("6 condition (A) brute force", condition_a_suite),
        ("7 lifting witnesses", generale_suite),
        ("8 structural suites", structural_suite),
        ("9 Φ_h and normalized permutations", phi_suite),
    ];
    let mut failed = 0;
    for (name, body) in criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("PASS {name} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({secs:.1}s): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
