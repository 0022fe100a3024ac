//! Acceptance sweeps. Every check is exact; each prints one PASS/FAIL line.
//! Run with `cargo test --release --test acceptance -- --nocapture` to see
//! the lines.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use pvk_core::laws::{algebra, cone, integral, lang, monad, topology, valuation, Config, Counterexample, LawResult};
use pvk_core::Result;

struct Outcome {
    name: &'static str,
    ok: bool,
}

fn criterion(
    name: &'static str,
    limit: Option<u64>,
    run: impl FnOnce() -> Result<Vec<LawResult>>,
) -> Outcome {
    let start = Instant::now();
    let results = run();
    let took = start.elapsed();
    let in_time = limit.map_or(true, |s| took < Duration::from_secs(s));
    let (ok, detail) = match &results {
        Ok(rs) => {
            let cases: u64 = rs.iter().map(|r| r.passed + r.failed).sum();
            let failed: u64 = rs.iter().map(|r| r.failed).sum();
            let first = rs.iter().find_map(|r| r.counterexample.as_ref().map(|c| format!("; {}: {}", r.law, c.description)));
            (failed == 0 && cases > 0 && in_time, format!("{cases} cases, {failed} failed{}", first.unwrap_or_default()))
        }
        Err(e) => (false, format!("error: {e}")),
    };
    let limit_text = limit.map(|s| format!(" (limit {s}s)")).unwrap_or_default();
    println!(
        "[{}] {name}: {detail}, {:.1}s{limit_text}",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64()
    );
    Outcome { name, ok }
}

fn golden() -> Result<Vec<LawResult>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut law = LawResult::new("lang", "golden-programs");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("golden directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "pk"))
        .collect();
    paths.sort();
    for p in &paths {
        let src = std::fs::read_to_string(p).expect("program");
        let want = std::fs::read_to_string(p.with_extension("out")).expect("expected output");
        let got = pvk_core::lang::parse(&src)
            .and_then(|prog| pvk_core::lang::evaluate(&prog))
            .map(|v| pvk_core::lang::render(&v));
        law.check(got.as_ref() == Ok(&want), || {
            Counterexample::new(format!("{}: got {got:?}", p.display()))
        });
    }
    assert!(paths.len() >= 10, "only {} golden programs", paths.len());
    Ok(vec![law])
}

#[test]
fn acceptance() {
    let cfg = Config {
        max_size: 3,
        trials: 1000,
        seed: 0,
        fault: None,
    };
    let outcomes = vec![
        criterion("manes-laws", Some(120), || {
            let mut out = monad::ManesResults::new();
            monad::manes_exhaustive(3, &cfg, &mut out)?;
            monad::manes_random(4, 1000, 8, &cfg, &mut out)?;
            Ok(out.into_vec())
        }),
        criterion("disintegration", Some(30), || Ok(vec![monad::disintegration(4, 1000, &cfg)?])),
        criterion("riesz-and-change-of-variables", None, || {
            let mut out = integral::riesz(3)?;
            out.push(integral::change_of_variables(3)?);
            Ok(out)
        }),
        criterion("decompose-round-trip", None, || Ok(vec![valuation::decompose_round_trip(4, 500, &cfg)?])),
        criterion("barycentre-coherence", Some(60), || Ok(vec![algebra::coherence(5, 200, &cfg)?])),
        criterion("dual-cone", None, || Ok(vec![cone::duals(5)?])),
        criterion("keimel-separation", None, || Ok(vec![cone::separation(4)?])),
        criterion("algebra-laws", None, || algebra::algebra_laws(4, 200, &cfg)),
        criterion("morphism-iff-linear", None, || Ok(vec![algebra::morphisms(4)?])),
        criterion("point-equals-scott", None, || topology::opens_and_topologies(4)),
        criterion("fubini", None, || Ok(vec![integral::fubini(3, 500, &cfg)?])),
        criterion("funspace-barycentre", None, || Ok(vec![algebra::funspace(3, 100, &cfg)?])),
        criterion("kernel-language", None, || {
            let mut out = golden()?;
            out.extend(lang::schemas(4, 100, &cfg)?);
            out.push(lang::malformed());
            Ok(out)
        }),
    ];
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.ok).map(|o| o.name).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed: {failed:?}");
}
