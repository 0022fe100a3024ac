//! Law suites: exhaustive sweeps over small spaces plus seeded random cases.
//!
//! Every suite is deterministic given its [`Config`]. Each law draws from
//! its own ChaCha8 stream (the seed selects the key, the law index selects
//! the stream), so adding a law never shifts the cases of another.

pub mod algebra;
pub mod cone;
pub mod integral;
pub mod lang;
pub mod monad;
pub mod topology;
pub mod valuation;

use rand_chacha::ChaCha8Rng;

use crate::enumerate::seeded_rng;
use crate::error::{Error, Result};
use crate::ext::{rat, Rational};
use crate::integral::LscFun;
use crate::monad::Kernel;
use crate::space::FinSpace;
use crate::valuation::{SimpleValuation, ValuationTable, Violation};

pub const SUITES: [&str; 7] = [
    "valuation",
    "monad",
    "integral",
    "cone",
    "algebra",
    "topology",
    "lang",
];

/// A deliberately broken component, for checking that the suites notice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// The table validator stops checking modularity.
    Modularity,
}

impl std::str::FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modularity" => Ok(Fault::Modularity),
            _ => Err(Error::Precondition(format!("unknown fault '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest space (or lattice) size swept exhaustively.
    pub max_size: usize,
    /// Number of seeded random cases per randomized law.
    pub trials: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_size: 3,
            trials: 200,
            seed: 0,
            fault: None,
        }
    }
}

impl Config {
    /// The generator for the law with the given index.
    pub fn rng(&self, law: u64) -> ChaCha8Rng {
        let mut rng = seeded_rng(self.seed);
        rng.set_stream(law);
        rng
    }
}

/// A failing case, as files in the formats the CLI reads and the command
/// that replays it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub description: String,
    pub files: Vec<(String, String)>,
    pub command: Option<String>,
}

impl Counterexample {
    pub fn new(description: impl Into<String>) -> Self {
        Counterexample {
            description: description.into(),
            files: Vec::new(),
            command: None,
        }
    }

    pub fn file(mut self, name: &str, content: String) -> Self {
        self.files.push((name.to_string(), content));
        self
    }

    pub fn space(self, name: &str, s: &FinSpace) -> Self {
        self.file(name, s.to_poset_text())
    }

    pub fn valuation(self, name: &str, v: &SimpleValuation) -> Self {
        self.file(name, v.to_val_text())
    }

    pub fn kernel(self, name: &str, k: &Kernel) -> Self {
        self.file(name, k.to_ker_text())
    }

    pub fn function(self, name: &str, h: &LscFun) -> Self {
        self.file(name, h.to_fun_text())
    }

    pub fn table(self, name: &str, t: &ValuationTable) -> Self {
        self.file(name, t.to_vtab_text())
    }

    pub fn command(mut self, cmd: impl Into<String>) -> Self {
        self.command = Some(cmd.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawResult {
    pub suite: &'static str,
    pub law: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub counterexample: Option<Counterexample>,
}

impl LawResult {
    pub fn new(suite: &'static str, law: &'static str) -> Self {
        LawResult {
            suite,
            law,
            passed: 0,
            failed: 0,
            counterexample: None,
        }
    }

    pub fn check(&mut self, ok: bool, cx: impl FnOnce() -> Counterexample) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(cx());
            }
        }
    }

    /// Records an error raised by the code under test as a failure.
    pub fn check_result(&mut self, r: Result<bool>, cx: impl FnOnce() -> Counterexample) {
        match r {
            Ok(ok) => self.check(ok, cx),
            Err(e) => self.check(false, || {
                let mut c = cx();
                c.description = format!("{}: {e}", c.description);
                c
            }),
        }
    }

    /// Adds counts tallied elsewhere; `cx` runs only for a first failure.
    pub fn absorb(&mut self, passed: u64, failed: u64, cx: impl FnOnce() -> Counterexample) {
        self.passed += passed;
        self.failed += failed;
        if failed > 0 && self.counterexample.is_none() {
            self.counterexample = Some(cx());
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Runs one suite by name.
pub fn run_suite(name: &str, cfg: &Config) -> Result<Vec<LawResult>> {
    match name {
        "valuation" => valuation::run(cfg),
        "monad" => monad::run(cfg),
        "integral" => integral::run(cfg),
        "cone" => cone::run(cfg),
        "algebra" => algebra::run(cfg),
        "topology" => topology::run(cfg),
        "lang" => lang::run(cfg),
        _ => Err(Error::Precondition(format!("unknown suite '{name}'"))),
    }
}

/// The table validator, possibly with an injected fault.
pub fn validate_table(
    t: &ValuationTable,
    fault: Option<Fault>,
) -> std::result::Result<(), Violation> {
    match (t.validate(), fault) {
        (Err(Violation::Modularity { .. }), Some(Fault::Modularity)) => Ok(()),
        (r, _) => r,
    }
}

/// Every `p/q` in `[0, 1]` with `q ≤ 4`.
pub fn small_grid() -> Vec<Rational> {
    let mut v: Vec<Rational> = (1..=4).flat_map(|q| (0..=q).map(move |p| rat(p, q))).collect();
    v.sort();
    v.dedup();
    v
}

/// Coefficient grid `{0, 1/2, 1}`.
pub fn half_grid() -> Vec<Rational> {
    vec![rat(0, 1), rat(1, 2), rat(1, 1)]
}
