use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pvk_core::algebra::lattice_barycentre;
use pvk_core::cone::{dual_cone, keimel_separate, LatticeCone};
use pvk_core::enumerate::PRNG_NAME;
use pvk_core::lang;
use pvk_core::laws::{self, Config, Fault, LawResult, SUITES};
use pvk_core::monad::composition_holds;
use pvk_core::{
    check_lattice, integrate, load_space, ContinuousMap, Error, FinSpace, Kernel, LscFun, SimpleValuation,
    ValuationTable,
};

#[derive(Parser)]
#[command(name = "pvk", version, about = "Exact valuations, integrals and barycentres on finite spaces")]
struct Cli {
    /// Deliberately break a component, to see the law suites catch it.
    #[arg(long, global = true, value_name = "FAULT", value_parser = ["modularity"])]
    inject_fault: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the open sets (up-sets) of a space.
    Opens {
        #[arg(long)]
        space: PathBuf,
    },
    /// Choquet integral of a function against a valuation.
    Integrate {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        valuation: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Turn a table of values on opens into a simple valuation.
    Decompose {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        table: PathBuf,
    },
    /// Check strictness, monotonicity and modularity of a table.
    Validate {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        table: PathBuf,
    },
    /// Image of a valuation under a monotone map.
    Pushforward {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        valuation: PathBuf,
    },
    /// Kleisli extension of a kernel applied to a valuation.
    Bind(BindArgs),
    /// Barycentre of a valuation on a finite lattice cone.
    Barycentre {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        valuation: PathBuf,
    },
    /// The lower semicontinuous linear functionals on a lattice cone.
    Dual {
        #[arg(long)]
        lattice: PathBuf,
    },
    /// A functional with Λ ≤ 1 on a convex set and Λ > 1 on a disjoint open convex set.
    Separate {
        #[arg(long)]
        lattice: PathBuf,
        /// Comma-separated point names.
        #[arg(long)]
        convex: String,
        /// Comma-separated point names.
        #[arg(long)]
        open: String,
    },
    /// Evaluate a kernel program.
    Eval {
        program: PathBuf,
        /// Also decide whether this second program has the same denotation.
        #[arg(long)]
        equiv: Option<PathBuf>,
    },
    /// Run law suites.
    Check(CheckArgs),
}

#[derive(Args)]
struct BindArgs {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    /// Kernel file; the unit kernel when omitted (source and target must agree).
    #[arg(long)]
    kernel: Option<PathBuf>,
    #[arg(long)]
    valuation: PathBuf,
    /// A second kernel, from the target to `--then-target`.
    #[arg(long, requires = "then_target")]
    then: Option<PathBuf>,
    #[arg(long, requires = "then")]
    then_target: Option<PathBuf>,
    /// Cross-check both extension formulas and, with `--then`, associativity.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value = "all", value_parser = suite_names())]
    suite: String,
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, env = "PVK_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write counterexample files under this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn suite_names() -> Vec<&'static str> {
    let mut v = vec!["all"];
    v.extend(SUITES);
    v
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        located(None, e)
    }
}

fn located(path: Option<&Path>, e: Error) -> Failure {
    let message = match (path, &e) {
        (Some(p), Error::Parse { .. }) => format!("{}:{e}", p.display()),
        (Some(p), _) => format!("{}: {e}", p.display()),
        (None, _) => e.to_string(),
    };
    Failure {
        code: if e.is_input_error() { 2 } else { 1 },
        message,
    }
}

type Out = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, f: impl FnOnce(&str) -> pvk_core::Result<T>) -> Result<T, Failure> {
    let text = read(path)?;
    f(&text).map_err(|e| located(Some(path), e))
}

fn space(path: &Path) -> Result<FinSpace, Failure> {
    load(path, load_space)
}

fn lattice_cone(path: &Path) -> Result<LatticeCone, Failure> {
    let s = space(path)?;
    let l = check_lattice(&s).map_err(|e| located(Some(path), e))?;
    Ok(LatticeCone::new(l))
}

fn valuation(s: &FinSpace, path: &Path) -> Result<SimpleValuation, Failure> {
    load(path, |t| SimpleValuation::parse(s, t))
}

fn table(s: &FinSpace, path: &Path) -> Result<ValuationTable, Failure> {
    load(path, |t| ValuationTable::parse(s, t))
}

fn fault(cli: &Cli) -> Option<Fault> {
    cli.inject_fault.as_deref().map(|f| f.parse().expect("restricted by clap"))
}

fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Opens { space: p } => {
            let s = space(p)?;
            Ok(s.open_sets().iter().map(|&u| format!("{{{}}}\n", s.format_set(u))).collect())
        }
        Command::Integrate {
            space: p,
            valuation: v,
            function: h,
        } => {
            let s = space(p)?;
            let nu = valuation(&s, v)?;
            let h = load(h, |t| LscFun::parse(&s, t))?;
            Ok(format!("{}\n", integrate(&h, &nu)?))
        }
        Command::Decompose { space: p, table: t } => {
            let s = space(p)?;
            let t = table(&s, t)?;
            Ok(lang::render(&t.decompose()?))
        }
        Command::Validate { space: p, table: t } => {
            let s = space(p)?;
            let t = table(&s, t)?;
            match laws::validate_table(&t, fault(cli)) {
                Ok(()) => Ok("valid\n".into()),
                Err(v) => Err(Failure::domain(v.describe(&s))),
            }
        }
        Command::Pushforward {
            source,
            target,
            map,
            valuation: v,
        } => {
            let x = space(source)?;
            let y = space(target)?;
            let f = load(map, |t| ContinuousMap::load(&x, &y, t))?;
            let nu = valuation(&x, v)?;
            let image = nu.pushforward(&f)?;
            if nu.pushforward_table(&f)?.decompose()? != image {
                return Err(Failure::domain("pushforward formulas disagree"));
            }
            Ok(lang::render(&image))
        }
        Command::Bind(b) => bind(b),
        Command::Barycentre {
            lattice,
            valuation: v,
        } => {
            let c = lattice_cone(lattice)?;
            let nu = valuation(c.space(), v)?;
            let b = lattice_barycentre(&nu, &c)?;
            Ok(format!("{}\n", c.space().name(b)))
        }
        Command::Dual { lattice } => {
            let c = lattice_cone(lattice)?;
            let s = c.space();
            let mut out = String::new();
            for (x0, f) in dual_cone(&c).iter().enumerate() {
                let vals: Vec<String> = s.points().map(|x| format!("{}={}", s.name(x), f.apply(x))).collect();
                writeln!(out, "{}: {}", s.name(x0), vals.join(" ")).expect("string");
            }
            Ok(out)
        }
        Command::Separate { lattice, convex, open } => {
            let c = lattice_cone(lattice)?;
            let s = c.space();
            let a = s.parse_set(convex)?;
            let u = s.parse_set(open)?;
            let sep = keimel_separate(a, u, &c)?;
            let mut out = format!("x0 = {}\n", s.name(sep.x0));
            for x in s.points() {
                writeln!(out, "{} -> {}", s.name(x), sep.functional.apply(x)).expect("string");
            }
            Ok(out)
        }
        Command::Eval { program, equiv } => {
            let p = load(program, lang::parse)?;
            let v = lang::evaluate(&p).map_err(|e| located(Some(program), e))?;
            match equiv {
                None => Ok(lang::render(&v)),
                Some(q) => {
                    let q = load(q, lang::parse)?;
                    if lang::check_program_equiv(&p, &q)? {
                        Ok("equivalent\n".into())
                    } else {
                        Err(Failure::domain("not equivalent"))
                    }
                }
            }
        }
        Command::Check(c) => check(c, fault(cli)),
    }
}

fn bind(b: &BindArgs) -> Out {
    let x = space(&b.source)?;
    let y = space(&b.target)?;
    let f = match &b.kernel {
        Some(k) => load(k, |t| Kernel::parse(&x, &y, t))?,
        None if x == y => Kernel::unit(&x),
        None => return Err(Failure::usage("--kernel is required when source and target differ")),
    };
    let mu = valuation(&x, &b.valuation)?;
    let mut image = if b.check { f.extend_checked(&mu)? } else { f.extend(&mu)? };
    if let (Some(g), Some(z)) = (&b.then, &b.then_target) {
        let z = space(z)?;
        let g = load(g, |t| Kernel::parse(&y, &z, t))?;
        if b.check && !composition_holds(&f, &g, &mu)? {
            return Err(Failure::domain("g†(f†(μ)) differs from (g† ∘ f)†(μ)"));
        }
        image = if b.check { g.extend_checked(&image)? } else { g.extend(&image)? };
    }
    Ok(lang::render(&image))
}

fn replay_command(cmd: &str, fault: Option<Fault>) -> String {
    match (fault, cmd.strip_prefix("pvk ")) {
        (Some(Fault::Modularity), Some(rest)) => format!("pvk --inject-fault modularity {rest}"),
        _ => cmd.to_string(),
    }
}

fn check(args: &CheckArgs, fault: Option<Fault>) -> Out {
    if args.max_size == 0 {
        return Err(Failure::usage("--max-size must be at least 1"));
    }
    let cfg = Config {
        max_size: args.max_size,
        trials: args.trials,
        seed: args.seed,
        fault,
    };
    let suites: Vec<&str> = if args.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut results: Vec<LawResult> = Vec::new();
    for s in &suites {
        results.extend(laws::run_suite(s, &cfg)?);
    }
    if let Some(dir) = &args.out {
        write_counterexamples(dir, &results)?;
    }
    let failed = results.iter().filter(|r| !r.ok()).count();
    let fault_name = fault.map(|_| "modularity");
    let mut out = String::new();
    match args.format {
        Format::Text => {
            writeln!(
                out,
                "pvk check suite={} max-size={} trials={} seed={} prng={PRNG_NAME}{}",
                args.suite,
                args.max_size,
                args.trials,
                args.seed,
                fault_name.map(|f| format!(" fault={f}")).unwrap_or_default()
            )
            .expect("string");
            for r in &results {
                let tag = if r.ok() { "PASS" } else { "FAIL" };
                writeln!(out, "{tag} {}/{} passed={} failed={}", r.suite, r.law, r.passed, r.failed).expect("string");
                if let Some(cx) = &r.counterexample {
                    writeln!(out, "  counterexample: {}", cx.description).expect("string");
                    if let Some(cmd) = &cx.command {
                        writeln!(out, "  replay: {}", replay_command(cmd, fault)).expect("string");
                    }
                    for (name, content) in &cx.files {
                        writeln!(out, "  --- {name}").expect("string");
                        for line in content.lines() {
                            writeln!(out, "  {line}").expect("string");
                        }
                    }
                }
            }
            writeln!(out, "summary: {} laws, {} failed", results.len(), failed).expect("string");
        }
        Format::Json => {
            let header = json!({
                "record": "header", "suite": args.suite, "max_size": args.max_size,
                "trials": args.trials, "seed": args.seed, "prng": PRNG_NAME, "fault": fault_name,
            });
            writeln!(out, "{header}").expect("string");
            for r in &results {
                let cx = r.counterexample.as_ref().map(|cx| {
                    json!({
                        "description": cx.description,
                        "command": cx.command.as_deref().map(|c| replay_command(c, fault)),
                        "files": cx.files.iter().map(|(n, c)| json!({"name": n, "content": c})).collect::<Vec<_>>(),
                    })
                });
                let rec = json!({
                    "record": "law", "suite": r.suite, "law": r.law, "passed": r.passed,
                    "failed": r.failed, "ok": r.ok(), "counterexample": cx,
                });
                writeln!(out, "{rec}").expect("string");
            }
            let summary = json!({"record": "summary", "laws": results.len(), "failed": failed});
            writeln!(out, "{summary}").expect("string");
        }
    }
    if failed > 0 {
        print!("{out}");
        return Err(Failure::domain(format!("{failed} law(s) failed")));
    }
    Ok(out)
}

fn write_counterexamples(dir: &Path, results: &[LawResult]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::usage(format!("{}: {e}", dir.display()));
    for r in results {
        if let Some(cx) = &r.counterexample {
            let d = dir.join(format!("{}-{}", r.suite, r.law));
            std::fs::create_dir_all(&d).map_err(io)?;
            for (name, content) in &cx.files {
                std::fs::write(d.join(name), content).map_err(io)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
