//! Cone axioms, the convexity taxonomy, dual cones and separation.

use super::{Config, Counterexample, LawResult};
use crate::cone::{
    axiom_scalars, check_retract_wlc, classify_convexity, cone_axiom_failure, convex_sets,
    convex_t0_check, dual_cone, dual_is_opposite, is_convex, is_directed, keimel_separate,
    open_convex_sets, ExtRatCone, FunSpaceCone, LatticeCone, LatticeMap,
};
use crate::enumerate::{grid_functions, lattices_up_to, posets_up_to_iso};
use crate::error::Result;
use crate::ext::ExtRat;
use crate::space::PointSet;

const SUITE: &str = "cone";

fn cones(max_size: usize) -> Vec<LatticeCone> {
    lattices_up_to(max_size)
        .into_iter()
        .map(LatticeCone::new)
        .collect()
}

fn lattice_case(description: impl Into<String>, c: &LatticeCone) -> Counterexample {
    Counterexample::new(description).space("l.poset", c.space())
}

/// The cone axioms on every lattice cone up to `max_size` elements, on a
/// sample of extended rationals and on all grid functions over small spaces.
pub fn axioms(max_size: usize) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "cone-axioms");
    let scalars = axiom_scalars();
    for c in cones(max_size) {
        let elems: Vec<usize> = c.elements().collect();
        let fail = cone_axiom_failure(&c, &elems, &scalars);
        law.check(fail.is_none(), || {
            lattice_case(fail.clone().unwrap_or_default(), &c)
        });
    }
    let ext = [
        ExtRat::zero(),
        ExtRat::from_ratio(1, 3),
        ExtRat::one(),
        ExtRat::from(5),
        ExtRat::Inf,
    ];
    let fail = cone_axiom_failure(&ExtRatCone, &ext, &scalars);
    law.check(fail.is_none(), || {
        Counterexample::new(fail.clone().unwrap_or_default())
    });
    for s in (1..=2).flat_map(posets_up_to_iso) {
        let cone = FunSpaceCone::new(&s);
        let funs = grid_functions(
            &s,
            &[
                ExtRat::zero(),
                ExtRat::from_ratio(1, 2),
                ExtRat::one(),
                ExtRat::Inf,
            ],
        );
        let fail = cone_axiom_failure(&cone, &funs, &scalars);
        law.check(fail.is_none(), || {
            Counterexample::new(fail.clone().unwrap_or_default()).space("s.poset", &s)
        });
    }
    Ok(law)
}

/// Convex sets are directed, and the taxonomy respects
/// locally linear ⇒ locally convex ⇒ weakly locally convex.
pub fn taxonomy(max_size: usize) -> Result<Vec<LawResult>> {
    let mut directed = LawResult::new(SUITE, "convex-implies-directed");
    let mut chain = LawResult::new(SUITE, "convexity-implications");
    for c in cones(max_size) {
        for a in (1u64..(1 << c.len())).map(PointSet) {
            let ok = !is_convex(a, &c) || is_directed(a, c.lattice());
            directed.check(ok, || {
                lattice_case(
                    format!("{{{}}} convex but not directed", c.space().format_set(a)),
                    &c,
                )
            });
        }
        let f = classify_convexity(&c);
        let ok = (!f.locally_linear || f.locally_convex)
            && (!f.locally_convex || f.weakly_locally_convex);
        chain.check(ok, || lattice_case(format!("inconsistent flags {f:?}"), &c));
    }
    Ok(vec![directed, chain])
}

/// `|dual(L)| = |L|` and `x₀ ↦ ∞·χ_{L∖↓x₀}` is an order isomorphism onto
/// the dual with the reversed order.
pub fn duals(max_size: usize) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "dual-cone");
    for c in cones(max_size) {
        let d = dual_cone(&c);
        let ok = d.len() == c.len() && dual_is_opposite(&c, &d);
        law.check(ok, || {
            lattice_case("dual cone is not L^op", &c).command("pvk dual --lattice l.poset")
        });
    }
    Ok(law)
}

/// A validated separating functional for every disjoint pair of a nonempty
/// convex set and an open convex set.
pub fn separation(max_size: usize) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "keimel-separation");
    for c in cones(max_size) {
        let opens = open_convex_sets(&c);
        for a in convex_sets(&c) {
            for &u in &opens {
                if !a.intersection(u).is_empty() {
                    continue;
                }
                let one = ExtRat::one();
                let r = keimel_separate(a, u, &c).map(|sep| {
                    sep.canonical
                        && a.iter().all(|x| sep.functional.apply(x) <= &one)
                        && u.iter().all(|y| sep.functional.apply(y) > &one)
                });
                law.check_result(r, || {
                    let s = c.space();
                    lattice_case(
                        format!(
                            "no valid witness for A = {{{}}}, U = {{{}}}",
                            s.format_set(a),
                            s.format_set(u)
                        ),
                        &c,
                    )
                    .command(format!(
                        "pvk separate --lattice l.poset --convex '{}' --open '{}'",
                        s.format_set(a),
                        s.format_set(u)
                    ))
                });
            }
        }
    }
    Ok(law)
}

/// Distinct elements are told apart by the dual.
pub fn convex_t0(max_size: usize) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "convex-t0");
    for c in cones(max_size) {
        let (ok, fam) = convex_t0_check(&c);
        let n = c.len();
        law.check(ok && fam.len() == n * (n - 1) / 2, || {
            lattice_case("points not separated", &c)
        });
    }
    Ok(law)
}

/// Retracts of weakly locally convex cones along linear retractions are
/// weakly locally convex.
pub fn retracts(max_size: usize) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "retract-wlc");
    let cs = cones(max_size);
    for c in &cs {
        for d in &cs {
            let rs: Vec<LatticeMap> = LatticeMap::enumerate_monotone(c, d)
                .into_iter()
                .filter(|r| r.is_linear())
                .collect();
            if rs.is_empty() {
                continue;
            }
            for s in LatticeMap::enumerate_monotone(d, c) {
                for r in &rs {
                    if d.elements().all(|y| r.apply(s.apply(y)) == y) {
                        law.check_result(check_retract_wlc(r, &s), || {
                            Counterexample::new(format!(
                                "retraction {:?} with section {:?}",
                                r.graph, s.graph
                            ))
                            .space("c.poset", c.space())
                            .space("d.poset", d.space())
                        });
                    }
                }
            }
        }
    }
    Ok(law)
}

pub fn run(cfg: &Config) -> Result<Vec<LawResult>> {
    let n = cfg.max_size + 1;
    let mut out = vec![axioms(n)?];
    out.extend(taxonomy(n)?);
    out.push(duals((n + 1).min(6))?);
    out.push(separation(n)?);
    out.push(convex_t0(n)?);
    out.push(retracts(n)?);
    Ok(out)
}
