//! Barycentres and the algebra laws for lattice cones and function spaces.

use rand::Rng;

use super::{Config, Counterexample, LawResult};
use crate::algebra::{
    barycentre_search_with, check_algebra_laws, funspace_barycentre, funspace_barycentre_failure,
    induced_cone, is_weakly_hausdorff, join_is_monotone, lattice_barycentre, morphism_iff_linear,
    standard_lattice_barycentre, AlgebraMap, LinearExtension,
};
use crate::cone::{axiom_scalars, dual_cone, ExtRatCone, LatticeCone, LatticeMap};
use crate::enumerate::{
    grid_valuations, lattices_up_to, posets_up_to_iso, random_lsc, random_rational, random_space,
    random_sparse_valuation, random_valuation,
};
use crate::error::Result;
use crate::ext::rat;
use crate::integral::integrate;
use crate::monad::MetaValuation;
use crate::valuation::{Measure, SimpleValuation};

const SUITE: &str = "algebra";

fn cones(max_size: usize) -> Vec<LatticeCone> {
    lattices_up_to(max_size)
        .into_iter()
        .map(LatticeCone::new)
        .collect()
}

fn bary_case(description: &str, c: &LatticeCone, nu: &SimpleValuation) -> Counterexample {
    Counterexample::new(description)
        .space("l.poset", c.space())
        .valuation("nu.val", nu)
        .command("pvk barycentre --lattice l.poset --valuation nu.val")
}

/// For every lattice with at most `max_size` elements and `per_lattice`
/// seeded valuations: the barycentres found by searching the dual cone are
/// exactly `{⋁ supp ν}`, which is also the standard barycentre.
pub fn coherence(max_size: usize, per_lattice: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "barycentre-coherence");
    let mut rng = cfg.rng(30);
    for c in cones(max_size) {
        let dual = dual_cone(&c);
        for _ in 0..per_lattice {
            let nu = random_valuation(&mut rng, c.space(), 4);
            let found = barycentre_search_with(&nu, &c, &dual)?;
            let b = lattice_barycentre(&nu, &c)?;
            let ok = found == vec![b] && standard_lattice_barycentre(&nu, &c)? == b;
            law.check(ok, || {
                bary_case(
                    "barycentre search, ⋁ supp and standard barycentre disagree",
                    &c,
                    &nu,
                )
            });
        }
    }
    Ok(law)
}

/// A meta-valuation with at most three outer terms, inner valuations with
/// at most three atoms, all denominators at most four.
pub fn random_meta<R: Rng>(rng: &mut R, c: &LatticeCone) -> Result<MetaValuation> {
    let k = rng.gen_range(0..=3);
    let terms = (0..k)
        .map(|_| {
            (
                random_rational(rng, 2, 4),
                random_sparse_valuation(rng, c.space(), 3, 4),
            )
        })
        .collect();
    MetaValuation::new(c.space(), terms)
}

/// `β∘η = id`, `β∘m = β∘V(β)`, and the induced operations.
pub fn algebra_laws(max_size: usize, trials: usize, cfg: &Config) -> Result<Vec<LawResult>> {
    let mut unit = LawResult::new(SUITE, "algebra-unit");
    let mut mult = LawResult::new(SUITE, "algebra-multiplication");
    let mut induced = LawResult::new(SUITE, "induced-cone");
    let mut tauto = LawResult::new(SUITE, "weakly-hausdorff-and-join-monotone");
    let mut rng = cfg.rng(31);
    for c in cones(max_size) {
        let beta = AlgebraMap::beta(&c);
        let metas = (0..trials)
            .map(|_| random_meta(&mut rng, &c))
            .collect::<Result<Vec<_>>>()?;
        let rep = check_algebra_laws(&beta, &metas)?;
        unit.absorb(rep.unit.passed, rep.unit.failed, || {
            Counterexample::new(format!("β(δ_x) ≠ x at {:?}", rep.unit.first_failure)).space("l.poset", c.space())
        });
        mult.absorb(rep.multiplication.passed, rep.multiplication.failed, || {
            Counterexample::new(format!("β∘m ≠ β∘V(β) at {:?}", rep.multiplication.first_failure))
                .space("l.poset", c.space())
        });
        let ind = induced_cone(&beta, &axiom_scalars())?;
        induced.check(ind.mismatch.is_none(), || {
            Counterexample::new(ind.mismatch.clone().unwrap_or_default())
                .space("l.poset", c.space())
        });
        tauto.check(
            is_weakly_hausdorff(c.lattice()) && join_is_monotone(c.lattice()),
            || Counterexample::new("↑x∩↑y not open or ∨ not monotone").space("l.poset", c.space()),
        );
    }
    Ok(vec![unit, mult, induced, tauto])
}

/// Linearity and the morphism square agree for every monotone map between
/// lattice cones with at most `max_size` elements.
pub fn morphisms(max_size: usize) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "morphism-iff-linear");
    let cs = cones(max_size);
    let grid = [rat(0, 1), rat(1, 4), rat(1, 1)];
    for c in &cs {
        let samples = grid_valuations(c.space(), &grid);
        for d in &cs {
            for f in LatticeMap::enumerate_monotone(c, d) {
                let v = morphism_iff_linear(&f, &samples)?;
                law.check(v.agree(), || {
                    Counterexample::new(format!(
                        "map {:?}: linear = {}, morphism = {}",
                        f.graph, v.linear, v.morphism
                    ))
                    .space("c.poset", c.space())
                    .space("d.poset", d.space())
                });
            }
        }
    }
    Ok(law)
}

/// The pointwise barycentre of `Σ Rⱼ δ_{fⱼ}` satisfies the barycentre
/// equation against `f ↦ ∫ f dμ` for every `μ` with coefficients `p/q`
/// in `[0, 1]`, `q ≤ 4`, on posets with at most `max_size` points.
pub fn funspace(max_size: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "funspace-barycentre");
    let mut rng = cfg.rng(32);
    let grid = [
        rat(0, 1),
        rat(1, 4),
        rat(1, 3),
        rat(1, 2),
        rat(2, 3),
        rat(3, 4),
        rat(1, 1),
    ];
    for s in (1..=max_size.min(3)).flat_map(posets_up_to_iso) {
        let mus = grid_valuations(&s, &grid);
        for _ in 0..trials {
            let k = rng.gen_range(1..=3);
            let terms: Vec<_> = (0..k)
                .map(|_| {
                    (
                        random_rational(&mut rng, 2, 4),
                        random_lsc(&mut rng, &s, 4, 0.15),
                    )
                })
                .collect();
            let b = funspace_barycentre(&terms, &s)?;
            let bad = funspace_barycentre_failure(&terms, &b, &mus)?;
            law.check(bad.is_none(), || {
                let mut cx = Counterexample::new("barycentre equation fails").space("s.poset", &s);
                if let Some(mu) = bad {
                    cx = cx.valuation("mu.val", mu);
                }
                for (j, (r, f)) in terms.iter().enumerate() {
                    cx = cx
                        .function(&format!("f{j}.fun"), f)
                        .file(&format!("r{j}.txt"), format!("{r}\n"));
                }
                cx
            });
        }
    }
    Ok(law)
}

/// `β(ν) ∈ C∖↓x₀` iff `ν(C∖↓x₀) > 0`.
pub fn half_spaces(max_size: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "beta-half-space");
    let mut rng = cfg.rng(33);
    for c in cones(max_size) {
        let s = c.space();
        for _ in 0..trials {
            let nu = random_valuation(&mut rng, s, 4);
            let b = lattice_barycentre(&nu, &c)?;
            for x0 in c.elements() {
                let u = s.all().difference(s.down(x0));
                let ok = u.contains(b) == !nu.measure(u).is_zero();
                law.check(ok, || {
                    bary_case("β(ν) ∈ U disagrees with ν(U) > 0", &c, &nu)
                });
            }
        }
    }
    Ok(law)
}

/// Linear extensions restrict to the map, agree with the barycentre map for
/// the identity, and agree with integration for maps into `[0, ∞]`.
pub fn linear_extensions(max_size: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "linear-extension");
    let mut rng = cfg.rng(34);
    for c in cones(max_size) {
        let id = LinearExtension::new(c.space(), &c, c.elements().collect())?;
        let ok = id.restricts_to_map()?;
        law.check(ok, || {
            Counterexample::new("identity extension misses a Dirac").space("l.poset", c.space())
        });
        for _ in 0..trials.min(20) {
            let nu = random_valuation(&mut rng, c.space(), 4);
            let ok = id.apply(&nu)? == lattice_barycentre(&nu, &c)?;
            law.check(ok, || {
                bary_case("identity extension is not the barycentre map", &c, &nu)
            });
        }
    }
    for _ in 0..trials {
        let s = random_space(&mut rng, max_size);
        let h = random_lsc(&mut rng, &s, 4, 0.15);
        let nu = random_valuation(&mut rng, &s, 4);
        let ext = LinearExtension::new(&s, &ExtRatCone, h.values().to_vec())?;
        let ok = ext.restricts_to_map()? && ext.apply(&nu)? == integrate(&h, &nu)?;
        law.check(ok, || {
            Counterexample::new("extension into [0,∞] differs from the integral")
                .space("s.poset", &s)
                .function("h.fun", &h)
                .valuation("nu.val", &nu)
        });
    }
    Ok(law)
}

pub fn run(cfg: &Config) -> Result<Vec<LawResult>> {
    let n = cfg.max_size + 1;
    let mut out = vec![coherence((n + 1).min(6), cfg.trials, cfg)?];
    out.extend(algebra_laws(n, cfg.trials, cfg)?);
    out.push(morphisms(n)?);
    out.push(funspace(cfg.max_size, cfg.trials.min(50), cfg)?);
    out.push(half_spaces(n, cfg.trials.min(50), cfg)?);
    out.push(linear_extensions(n, cfg.trials, cfg)?);
    Ok(out)
}
