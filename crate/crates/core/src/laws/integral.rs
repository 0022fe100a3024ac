//! Integration: representation round trips, change of variables, step
//! approximation, linearity and Fubini.

use rand::Rng;

use super::{small_grid, Config, Counterexample, LawResult};
use crate::enumerate::{
    grid_functions, grid_valuations, posets_up_to_iso, random_lsc, random_space, random_valuation,
};
use crate::error::Result;
use crate::ext::{rat, ExtRat, Rational};
use crate::integral::{
    check_fubini, in_subbasic, integrate, integrate_simple, ss_recover, step_approx,
    valuation_from_functional, LscFun,
};
use crate::space::{product_space, ContinuousMap, FinSpace};
use crate::valuation::SimpleValuation;

const SUITE: &str = "integral";

fn test_values() -> Vec<ExtRat> {
    vec![
        ExtRat::zero(),
        ExtRat::from_ratio(1, 2),
        ExtRat::one(),
        ExtRat::Inf,
    ]
}

fn spaces(max_size: usize) -> Vec<FinSpace> {
    (1..=max_size.min(3)).flat_map(posets_up_to_iso).collect()
}

fn val_case(description: &str, s: &FinSpace, nu: &SimpleValuation) -> Counterexample {
    Counterexample::new(description)
        .space("s.poset", s)
        .valuation("nu.val", nu)
}

/// `ν ↦ (h ↦ ∫ h dν) ↦ ν`, and for functionals `h ↦ Σ c_x h(x)` given as
/// closures, `φ ↦ ν ↦ (h ↦ ∫ h dν)` against every test function. Exhaustive
/// over posets with at most three points (up to isomorphism) and the
/// coefficients `p/q` in `[0, 1]` with `q ≤ 4`.
pub fn riesz(max_size: usize) -> Result<Vec<LawResult>> {
    let mut from_val = LawResult::new(SUITE, "riesz-valuation-round-trip");
    let mut from_fun = LawResult::new(SUITE, "riesz-functional-round-trip");
    let grid = small_grid();
    for s in spaces(max_size) {
        let hs = grid_functions(&s, &test_values());
        for nu in grid_valuations(&s, &grid) {
            let (table, check) =
                valuation_from_functional(|h| integrate(h, &nu).expect("same space"), &s);
            let ok = check.is_ok() && table.decompose().map(|v| v == nu).unwrap_or(false);
            from_val.check(ok, || val_case("ν → φ → ν is not the identity", &s, &nu));

            let c: Vec<Rational> = nu.coeffs().to_vec();
            let phi = |h: &LscFun| -> ExtRat { s.points().map(|x| h.at(x).scale(&c[x])).sum() };
            let (table, check) = valuation_from_functional(phi, &s);
            let back = check.ok().and_then(|_| table.decompose().ok());
            let ok = match &back {
                Some(v) => hs
                    .iter()
                    .all(|h| integrate(h, v).expect("same space") == phi(h)),
                None => false,
            };
            from_fun.check(ok, || {
                val_case(
                    "φ → ν → φ is not the identity (coefficients in nu.val)",
                    &s,
                    &nu,
                )
            });
        }
    }
    Ok(vec![from_val, from_fun])
}

/// `∫ h d(f_*ν) = ∫ (h ∘ f) dν` for every monotone `f` between posets with at
/// most three points (up to isomorphism), every grid valuation and every
/// test function.
pub fn change_of_variables(max_size: usize) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "change-of-variables");
    let grid = small_grid();
    let ss = spaces(max_size);
    let hs: Vec<Vec<LscFun>> = ss
        .iter()
        .map(|s| grid_functions(s, &test_values()))
        .collect();
    for x in &ss {
        let vals = grid_valuations(x, &grid);
        for (y, hy) in ss.iter().zip(&hs) {
            for f in ContinuousMap::enumerate(x, y) {
                let pulled: Vec<LscFun> =
                    hy.iter().map(|h| h.precompose(&f)).collect::<Result<_>>()?;
                for nu in &vals {
                    let pushed = nu.pushforward(&f)?;
                    for (h, hf) in hy.iter().zip(&pulled) {
                        let ok = integrate(h, &pushed)? == integrate(hf, nu)?;
                        law.check(ok, || {
                            val_case("change of variables fails", x, nu)
                                .space("y.poset", y)
                                .function("h.fun", h)
                                .file("f.map", f.to_map_text())
                        });
                    }
                }
            }
        }
    }
    Ok(law)
}

fn dyadic_lsc<R: Rng>(rng: &mut R, s: &FinSpace) -> LscFun {
    let raw: Vec<ExtRat> = s
        .points()
        .map(|_| ExtRat::Fin(rat(rng.gen_range(0..=24), 8)))
        .collect();
    LscFun::from_fn(s, |x| {
        s.down(x)
            .iter()
            .map(|y| raw[y].clone())
            .max()
            .expect("nonempty")
    })
    .expect("monotone")
}

/// Step approximations stay below `h`, increase with `N`, and reach dyadic
/// `h` bounded by 3 from `N = 3` on.
pub fn step_approximation(max_size: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "step-approximation");
    let mut rng = cfg.rng(20);
    for _ in 0..trials {
        let s = random_space(&mut rng, max_size);
        let h = random_lsc(&mut rng, &s, 4, 0.2);
        let nu = random_valuation(&mut rng, &s, 4);
        let mut ok = true;
        let mut prev = LscFun::constant(&s, ExtRat::zero());
        let mut prev_int = ExtRat::zero();
        for n in 1..=6 {
            let a = step_approx(&h, n);
            let below = s
                .points()
                .all(|x| a.at(x) <= h.at(x) && prev.at(x) <= a.at(x));
            let int = integrate(&a, &nu)?;
            ok &= below && prev_int <= int && int <= integrate(&h, &nu)?;
            prev = a;
            prev_int = int;
        }
        let d = dyadic_lsc(&mut rng, &s);
        ok &= (3..=6).all(|n| step_approx(&d, n) == d);
        law.check(ok, || {
            val_case("step approximation misbehaves", &s, &nu)
                .function("h.fun", &h)
                .function("d.fun", &d)
        });
    }
    Ok(law)
}

/// Linearity in both arguments, the simple-valuation formula, recovery of
/// `h` from `ν ↦ ∫ h dν`, and the subbasic open sets.
pub fn integral_algebra(max_size: usize, trials: usize, cfg: &Config) -> Result<Vec<LawResult>> {
    let mut lin_fun = LawResult::new(SUITE, "linear-in-function");
    let mut lin_val = LawResult::new(SUITE, "linear-in-valuation");
    let mut simple = LawResult::new(SUITE, "simple-valuation-formula");
    let mut recover = LawResult::new(SUITE, "function-recovery");
    let mut subbasic = LawResult::new(SUITE, "subbasic-membership");
    let mut rng = cfg.rng(21);
    for _ in 0..trials {
        let s = random_space(&mut rng, max_size);
        let h = random_lsc(&mut rng, &s, 4, 0.15);
        let k = random_lsc(&mut rng, &s, 4, 0.15);
        let mu = random_valuation(&mut rng, &s, 4);
        let nu = random_valuation(&mut rng, &s, 4);
        let r = rat(rng.gen_range(0..=8), rng.gen_range(1..=4));
        let t = rat(rng.gen_range(0..=8), rng.gen_range(1..=4));
        let case = || {
            val_case("integration law fails", &s, &nu)
                .valuation("mu.val", &mu)
                .function("h.fun", &h)
                .function("k.fun", &k)
                .command("pvk integrate --space s.poset --valuation nu.val --function h.fun")
        };

        let lhs = integrate(&h.combine(&r, &k, &t)?, &nu)?;
        lin_fun.check(
            lhs == integrate(&h, &nu)?.scale(&r) + integrate(&k, &nu)?.scale(&t),
            case,
        );

        let mut mix = mu.scale(&r)?;
        mix = mix.add(&nu.scale(&t)?)?;
        let lhs = integrate(&h, &mix)?;
        lin_val.check(
            lhs == integrate(&h, &mu)?.scale(&r) + integrate(&h, &nu)?.scale(&t),
            case,
        );

        simple.check(integrate(&h, &nu)? == integrate_simple(&h, &nu)?, case);

        let back = ss_recover(|v| integrate(&h, v).expect("same space"), &s)?;
        recover.check(back == h, case);

        let thr = rat(rng.gen_range(0..=12), rng.gen_range(1..=4));
        let by_def = integrate(&h, &nu)? > ExtRat::Fin(thr.clone());
        subbasic.check(in_subbasic(&nu, &h, &thr)? == by_def, case);
    }
    Ok(vec![lin_fun, lin_val, simple, recover, subbasic])
}

/// Both iterated integrals equal the product integral, on products of
/// random posets with at most `max_factor` points each.
pub fn fubini(max_factor: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "fubini");
    let mut rng = cfg.rng(22);
    for _ in 0..trials {
        let x = random_space(&mut rng, max_factor);
        let y = random_space(&mut rng, max_factor);
        let xy = product_space(&x, &y);
        let f = random_lsc(&mut rng, &xy, 4, 0.15);
        let mu = random_valuation(&mut rng, &x, 4);
        let nu = random_valuation(&mut rng, &y, 4);
        let r = check_fubini(&f, &mu, &nu).map(|rep| rep.agrees());
        law.check_result(r, || {
            Counterexample::new("iterated and product integrals differ")
                .space("x.poset", &x)
                .space("y.poset", &y)
                .function("f.fun", &f)
                .valuation("mu.val", &mu)
                .valuation("nu.val", &nu)
        });
    }
    Ok(law)
}

pub fn run(cfg: &Config) -> Result<Vec<LawResult>> {
    let mut out = riesz(cfg.max_size)?;
    out.push(change_of_variables(cfg.max_size)?);
    out.push(step_approximation(cfg.max_size + 1, cfg.trials, cfg)?);
    out.extend(integral_algebra(cfg.max_size + 1, cfg.trials, cfg)?);
    out.push(fubini(cfg.max_size, cfg.trials, cfg)?);
    Ok(out)
}
