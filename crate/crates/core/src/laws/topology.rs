//! Opens of finite spaces, the two topologies on the open-set lattice,
//! products and lattice recognition.

use super::{Config, Counterexample, LawResult};
use crate::enumerate::{labeled_posets_up_to, posets_up_to_iso};
use crate::error::Result;
use crate::space::{check_lattice, product_space, topologies_on_opens, FinSpace, PointSet};

const SUITE: &str = "topology";

fn brute_opens(s: &FinSpace) -> Vec<PointSet> {
    let mut v: Vec<PointSet> = (0u64..(1 << s.len()))
        .map(PointSet)
        .filter(|&u| u.iter().all(|x| s.up(x).is_subset(u)))
        .collect();
    v.sort_by_key(|u| (u.len(), u.0));
    v
}

/// Opens are exactly the up-sets, and the point topology on the opens
/// equals their Scott topology, for every labeled poset up to `max_size`.
pub fn opens_and_topologies(max_size: usize) -> Result<Vec<LawResult>> {
    let mut opens = LawResult::new(SUITE, "opens-are-up-sets");
    let mut collapse = LawResult::new(SUITE, "point-equals-scott");
    for s in labeled_posets_up_to(max_size) {
        let case = || {
            Counterexample::new("topology mismatch")
                .space("s.poset", &s)
                .command("pvk opens --space s.poset")
        };
        opens.check(s.open_sets() == brute_opens(&s).as_slice(), case);
        let r = topologies_on_opens(&s).map(|(point, scott)| point == scott);
        collapse.check_result(r, case);
    }
    Ok(vec![opens, collapse])
}

/// Opens of a product are the up-sets of the componentwise order.
pub fn products(max_factor: usize) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "product-order");
    let spaces: Vec<FinSpace> = (1..=max_factor).flat_map(posets_up_to_iso).collect();
    for x in &spaces {
        for y in &spaces {
            let p = product_space(x, y);
            let m = y.len();
            let ok = p.points().all(|a| {
                p.points()
                    .all(|b| p.le(a, b) == (x.le(a / m, b / m) && y.le(a % m, b % m)))
            });
            law.check(ok, || {
                Counterexample::new("product order is not componentwise")
                    .space("x.poset", x)
                    .space("y.poset", y)
            });
        }
    }
    Ok(law)
}

/// `check_lattice` accepts exactly the posets where all binary joins and
/// meets exist (found by brute force) and that are nonempty.
pub fn lattice_recognition(max_size: usize) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "lattice-recognition");
    for s in (1..=max_size).flat_map(posets_up_to_iso) {
        let least = |set: PointSet| set.iter().find(|&z| set.iter().all(|w| s.le(z, w)));
        let greatest = |set: PointSet| set.iter().find(|&z| set.iter().all(|w| s.le(w, z)));
        let brute = s.points().all(|a| {
            s.points().all(|b| {
                least(s.up(a).intersection(s.up(b))).is_some()
                    && greatest(s.down(a).intersection(s.down(b))).is_some()
            })
        });
        law.check(check_lattice(&s).is_ok() == brute, || {
            Counterexample::new("lattice check disagrees with brute force").space("s.poset", &s)
        });
    }
    Ok(law)
}

pub fn run(cfg: &Config) -> Result<Vec<LawResult>> {
    let n = cfg.max_size + 1;
    let mut out = opens_and_topologies(n.min(5))?;
    out.push(products(n.min(3))?);
    out.push(lattice_recognition(n.min(5))?);
    Ok(out)
}
