//! Monad laws, disintegration and agreement of the two extension routes.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{half_grid, Config, Counterexample, LawResult};
use crate::enumerate::{
    for_each_monotone_kernel, grid_valuations, labeled_posets_up_to, monotone_kernels,
    random_kernel, random_lsc, random_poset, random_space, random_sparse_valuation,
    random_valuation,
};
use crate::error::Result;
use crate::monad::{
    check_disintegration, composition_holds, extension_unit_holds, multiply, multiply_via_extend,
    unit_extension_holds, Kernel, MetaValuation,
};
use crate::space::FinSpace;
use crate::valuation::SimpleValuation;

const SUITE: &str = "monad";

fn single(name: &str, s: &FinSpace, mu: &SimpleValuation) -> Counterexample {
    Counterexample::new(format!("{name} fails"))
        .space("x.poset", s)
        .valuation("mu.val", mu)
        .command("pvk bind --source x.poset --valuation mu.val --check")
}

fn kernel_case(f: &Kernel) -> Counterexample {
    let mu = SimpleValuation::zero(f.source());
    Counterexample::new("f†(δ_x) differs from f(x)")
        .space("x.poset", f.source())
        .space("y.poset", f.target())
        .kernel("f.ker", f)
        .valuation("mu.val", &mu)
        .command(
            "pvk bind --source x.poset --target y.poset --kernel f.ker --valuation mu.val --check",
        )
}

/// A composition case as replayable files.
pub fn composition_case(f: &Kernel, g: &Kernel, mu: &SimpleValuation) -> Counterexample {
    Counterexample::new("g†(f†(μ)) differs from (g†∘f)†(μ)")
        .space("x.poset", f.source())
        .space("y.poset", f.target())
        .space("z.poset", g.target())
        .kernel("f.ker", f)
        .kernel("g.ker", g)
        .valuation("mu.val", mu)
        .command(
            "pvk bind --source x.poset --target y.poset --kernel f.ker --valuation mu.val \
             --then g.ker --then-target z.poset --check",
        )
}

/// The three monad-law results.
pub struct ManesResults {
    pub unit_extension: LawResult,
    pub extension_unit: LawResult,
    pub composition: LawResult,
}

impl Default for ManesResults {
    fn default() -> Self {
        Self::new()
    }
}

impl ManesResults {
    pub fn new() -> Self {
        ManesResults {
            unit_extension: LawResult::new(SUITE, "unit-extension"),
            extension_unit: LawResult::new(SUITE, "extension-unit"),
            composition: LawResult::new(SUITE, "composition"),
        }
    }

    pub fn into_vec(self) -> Vec<LawResult> {
        vec![self.unit_extension, self.extension_unit, self.composition]
    }
}

/// Exhaustive part of the monad-law sweep over all labeled posets with at
/// most `max_size` points and the coefficient grid `{0, 1/2, 1}`.
///
/// Laws (i) and (ii) see every valuation and every monotone kernel. Law (iii)
/// sees every triple `(f, g, μ)` when all three spaces have at most two
/// points; beyond that every kernel `f` is paired with one seeded random
/// `g` and grid valuation `μ`.
pub fn manes_exhaustive(max_size: usize, cfg: &Config, out: &mut ManesResults) -> Result<()> {
    let grid = half_grid();
    let spaces = labeled_posets_up_to(max_size);
    let vals: Vec<Vec<SimpleValuation>> =
        spaces.iter().map(|s| grid_valuations(s, &grid)).collect();
    let mut rng = cfg.rng(0);

    for (s, vs) in spaces.iter().zip(&vals) {
        for mu in vs {
            out.unit_extension
                .check_result(unit_extension_holds(mu), || single("η†(μ) = μ", s, mu));
        }
    }

    for (xi, x) in spaces.iter().enumerate() {
        for (yi, y) in spaces.iter().enumerate() {
            for_each_monotone_kernel(x, &vals[yi], |g| {
                let f =
                    Kernel::new_unchecked(x, y, g.iter().map(|&i| vals[yi][i].clone()).collect());
                out.extension_unit
                    .check_result(extension_unit_holds(&f), || kernel_case(&f));
                if x.len().max(y.len()) > 2 {
                    // One random partner per kernel that the full sweep misses.
                    let zi = rng.gen_range(0..spaces.len());
                    let gk = random_kernel(&mut rng, y, &spaces[zi], 2);
                    let mu = vals[xi].choose(&mut rng).expect("grid is nonempty").clone();
                    out.composition
                        .check_result(composition_holds(&f, &gk, &mu), || {
                            composition_case(&f, &gk, &mu)
                        });
                }
            });
        }
    }

    let small: Vec<usize> = (0..spaces.len())
        .filter(|&i| spaces[i].len() <= 2)
        .collect();
    let kernels = |a: usize, b: usize| monotone_kernels(&spaces[a], &spaces[b], &vals[b]);
    for &xi in &small {
        for &yi in &small {
            let fs = kernels(xi, yi);
            // f†(μ) for every f and μ, reused across all g.
            let pushed: Vec<Vec<SimpleValuation>> = fs
                .iter()
                .map(|f| {
                    vals[xi]
                        .iter()
                        .map(|mu| f.extend(mu))
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?;
            for &zi in &small {
                let gs = kernels(yi, zi);
                for (f, fmu) in fs.iter().zip(&pushed) {
                    for g in &gs {
                        let gf = f.then(g)?;
                        for (mu, fm) in vals[xi].iter().zip(fmu) {
                            let ok = g.extend(fm)? == gf.extend(mu)?;
                            out.composition.check(ok, || composition_case(f, g, mu));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `trials` random cases on spaces with `size` points, kernel weights and
/// valuation coefficients with denominators at most `den`.
pub fn manes_random(
    size: usize,
    trials: usize,
    den: i64,
    cfg: &Config,
    out: &mut ManesResults,
) -> Result<()> {
    let mut rng = cfg.rng(1);
    for _ in 0..trials {
        let x = random_poset(&mut rng, size, 0.4);
        let y = random_poset(&mut rng, size, 0.4);
        let z = random_poset(&mut rng, size, 0.4);
        let f = random_kernel(&mut rng, &x, &y, den);
        let g = random_kernel(&mut rng, &y, &z, den);
        let mu = random_valuation(&mut rng, &x, den);
        out.unit_extension
            .check_result(unit_extension_holds(&mu), || single("η†(μ) = μ", &x, &mu));
        out.extension_unit
            .check_result(extension_unit_holds(&f), || kernel_case(&f));
        out.composition
            .check_result(composition_holds(&f, &g, &mu), || {
                composition_case(&f, &g, &mu)
            });
    }
    Ok(())
}

/// `∫ h d(f†μ) = ∫ (x ↦ ∫ h df(x)) dμ` on random cases over spaces with at
/// most `max_size` points.
pub fn disintegration(max_size: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "disintegration");
    let mut rng = cfg.rng(2);
    for _ in 0..trials {
        let x = random_space(&mut rng, max_size);
        let y = random_space(&mut rng, max_size);
        let f = random_kernel(&mut rng, &x, &y, 4);
        let mu = random_valuation(&mut rng, &x, 4);
        let h = random_lsc(&mut rng, &y, 4, 0.15);
        let r = check_disintegration(&h, &f, &mu).map(|d| d.holds());
        law.check_result(r, || {
            Counterexample::new("disintegration sides differ")
                .space("x.poset", &x)
                .space("y.poset", &y)
                .kernel("f.ker", &f)
                .valuation("mu.val", &mu)
                .function("h.fun", &h)
        });
    }
    Ok(law)
}

/// Multiplication computed directly and as the extension of the identity.
pub fn multiplication_routes(max_size: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "multiplication-routes");
    let mut rng = cfg.rng(3);
    for _ in 0..trials {
        let x = random_space(&mut rng, max_size);
        let k = rng.gen_range(0..=3);
        let terms = (0..k)
            .map(|_| {
                let r = crate::enumerate::random_rational(&mut rng, 2, 4);
                (r, random_sparse_valuation(&mut rng, &x, 3, 4))
            })
            .collect();
        let w = MetaValuation::new(&x, terms)?;
        let r = multiply_via_extend(&w).map(|m| m == multiply(&w));
        law.check_result(r, || {
            Counterexample::new(format!("m(ϖ) routes differ for {w:?}")).space("x.poset", &x)
        });
    }
    Ok(law)
}

/// `f†` as a linear combination and through integrals of the kernel.
pub fn extension_routes(max_size: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "extension-routes");
    let mut rng = cfg.rng(4);
    for _ in 0..trials {
        let x = random_space(&mut rng, max_size);
        let y = random_space(&mut rng, max_size);
        let f = random_kernel(&mut rng, &x, &y, 4);
        let mu = random_valuation(&mut rng, &x, 4);
        let r = f
            .extend_by_integral(&mu)
            .and_then(|a| Ok(a == f.extend(&mu)?));
        law.check_result(r, || {
            Counterexample::new("extension routes differ")
                .space("x.poset", &x)
                .space("y.poset", &y)
                .kernel("f.ker", &f)
                .valuation("mu.val", &mu)
                .command("pvk bind --source x.poset --target y.poset --kernel f.ker --valuation mu.val --check")
        });
    }
    Ok(law)
}

pub fn run(cfg: &Config) -> Result<Vec<LawResult>> {
    let mut manes = ManesResults::new();
    manes_exhaustive(cfg.max_size, cfg, &mut manes)?;
    manes_random(cfg.max_size + 1, cfg.trials, 8, cfg, &mut manes)?;
    let mut out = manes.into_vec();
    out.push(disintegration(cfg.max_size + 1, cfg.trials, cfg)?);
    out.push(multiplication_routes(cfg.max_size + 1, cfg.trials, cfg)?);
    out.push(extension_routes(cfg.max_size + 1, cfg.trials, cfg)?);
    Ok(out)
}
