//! Valuation tables, the validator, pushforward and the stochastic order.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{validate_table, Config, Counterexample, LawResult};
use crate::enumerate::{labeled_posets_up_to, random_space, random_valuation};
use crate::error::Result;
use crate::ext::{rat, ExtRat};
use crate::space::{ContinuousMap, FinSpace, PointSet};
use crate::valuation::ValuationTable;

const SUITE: &str = "valuation";

fn table_case(description: &str, t: &ValuationTable) -> Counterexample {
    Counterexample::new(description)
        .space("s.poset", t.space())
        .table("t.vtab", t)
        .command("pvk decompose --space s.poset --table t.vtab")
}

/// `decompose(to_table(ν)) = ν` for `trials` seeded valuations on every
/// labeled poset with at most `max_size` points.
pub fn decompose_round_trip(max_size: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "decompose-round-trip");
    let mut rng = cfg.rng(10);
    for s in labeled_posets_up_to(max_size) {
        for _ in 0..trials {
            let nu = random_valuation(&mut rng, &s, 8);
            let t = nu.to_table();
            let r = t.decompose().map(|back| back == nu);
            law.check_result(r, || table_case("decompose does not invert to_table", &t));
        }
    }
    Ok(law)
}

/// `V ↦ [U ⊆ V]` for an open `U` with at least two minimal points: strict
/// and monotone but not modular.
fn non_modular_bump(s: &FinSpace, u: PointSet) -> Option<impl Fn(PointSet) -> ExtRat> {
    let minimal = u
        .iter()
        .filter(|&x| s.down(x).intersection(u) == PointSet::singleton(x))
        .count();
    (minimal >= 2).then_some(move |v: PointSet| {
        if u.is_subset(v) {
            ExtRat::one()
        } else {
            ExtRat::zero()
        }
    })
}

/// The validator accepts every induced table and rejects induced tables
/// with a non-modular bump added.
pub fn validator(max_size: usize, trials: usize, cfg: &Config) -> Result<Vec<LawResult>> {
    let mut accepts = LawResult::new(SUITE, "validator-accepts-induced");
    let mut rejects = LawResult::new(SUITE, "validator-rejects-non-modular");
    let mut rng = cfg.rng(11);
    for _ in 0..trials {
        let s = random_space(&mut rng, max_size);
        let nu = random_valuation(&mut rng, &s, 4);
        let t = nu.to_table();
        accepts.check(validate_table(&t, cfg.fault).is_ok(), || {
            table_case("validator rejects an induced table", &t)
        });
        let candidates: Vec<PointSet> = s
            .open_sets()
            .iter()
            .copied()
            .filter(|&u| non_modular_bump(&s, u).is_some())
            .collect();
        if let Some(&u) = candidates.choose(&mut rng) {
            let bump = non_modular_bump(&s, u).expect("filtered");
            let bad = ValuationTable::from_fn(&s, |v| t.value(v).expect("open") + &bump(v));
            rejects.check(validate_table(&bad, cfg.fault).is_err(), || {
                Counterexample::new(format!(
                    "validator accepts a non-modular table (bump at {{{}}})",
                    s.format_set(u)
                ))
                .space("s.poset", &s)
                .table("t.vtab", &bad)
                .command("pvk validate --space s.poset --table t.vtab")
            });
        }
    }
    Ok(vec![accepts, rejects])
}

/// The pushforward by coefficients agrees with the preimage formula.
pub fn pushforward(max_size: usize, trials: usize, cfg: &Config) -> Result<LawResult> {
    let mut law = LawResult::new(SUITE, "pushforward-formulas");
    let mut rng = cfg.rng(12);
    for _ in 0..trials {
        let x = random_space(&mut rng, max_size);
        let y = random_space(&mut rng, max_size);
        let maps = ContinuousMap::enumerate(&x, &y);
        let f = maps.choose(&mut rng).expect("constant maps exist");
        let nu = random_valuation(&mut rng, &x, 8);
        let r = nu
            .pushforward_table(f)
            .and_then(|t| Ok(t.decompose()? == nu.pushforward(f)?));
        law.check_result(r, || {
            Counterexample::new("pushforward formulas differ")
                .space("x.poset", &x)
                .space("y.poset", &y)
                .file("f.map", f.to_map_text())
                .valuation("nu.val", &nu)
                .command("pvk pushforward --source x.poset --target y.poset --map f.map --valuation nu.val")
        });
    }
    Ok(law)
}

/// Addition, scaling, the stochastic order and support, on random cases.
pub fn algebraic(max_size: usize, trials: usize, cfg: &Config) -> Result<Vec<LawResult>> {
    let mut linear = LawResult::new(SUITE, "eval-linear");
    let mut order = LawResult::new(SUITE, "stochastic-order");
    let mut supp = LawResult::new(SUITE, "support");
    let mut rng = cfg.rng(13);
    for _ in 0..trials {
        let s = random_space(&mut rng, max_size);
        let mu = random_valuation(&mut rng, &s, 6);
        let nu = random_valuation(&mut rng, &s, 6);
        let r = rat(rng.gen_range(0..=12), rng.gen_range(1..=6));
        let sum = mu.add(&nu)?;
        let scaled = mu.scale(&r)?;
        let ok = s.open_sets().iter().all(|&u| {
            let (m, n) = (mu.eval(u).expect("open"), nu.eval(u).expect("open"));
            sum.eval(u).expect("open") == &m + &n && scaled.eval(u).expect("open") == m.scale(&r)
        });
        let case = || {
            Counterexample::new("eval does not commute with add/scale")
                .space("s.poset", &s)
                .valuation("mu.val", &mu)
                .valuation("nu.val", &nu)
        };
        linear.check(ok, case);
        let le = mu.stochastic_le(&nu)?;
        let ge = nu.stochastic_le(&mu)?;
        let ok = mu.stochastic_le(&sum)?
            && (!(le && ge) || mu == nu)
            && (le == mu.stochastic_witness(&nu).is_none());
        order.check(ok, case);
        let ok = mu.support() == s.down_closure(mu.carrier());
        supp.check(ok, case);
    }
    Ok(vec![linear, order, supp])
}

pub fn run(cfg: &Config) -> Result<Vec<LawResult>> {
    let mut out = vec![decompose_round_trip(cfg.max_size, cfg.trials.min(50), cfg)?];
    out.extend(validator(cfg.max_size + 1, cfg.trials, cfg)?);
    out.push(pushforward(cfg.max_size + 1, cfg.trials, cfg)?);
    out.extend(algebraic(cfg.max_size + 1, cfg.trials, cfg)?);
    Ok(out)
}
