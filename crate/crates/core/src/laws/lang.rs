//! Kernel programs: the monad laws as program equivalences, printing and
//! parsing, agreement with the monad, and positioned parse errors.

use rand::Rng;

use super::{Config, Counterexample, LawResult};
use crate::enumerate::{random_rational, random_space};
use crate::error::{Error, Result};
use crate::lang::{check_program_equiv, evaluate, parse, substitute, Atom, Expr, Program};
use crate::monad::Kernel;
use crate::space::FinSpace;

const SUITE: &str = "lang";

/// A random well-scoped expression over `s`. Binders are named `v0, v1, ...`
/// by depth of scope, so they never capture `x` or `y`.
pub fn random_expr<R: Rng>(rng: &mut R, s: &FinSpace, vars: &mut Vec<String>, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        let atom = if !vars.is_empty() && rng.gen_bool(0.6) {
            Atom::Var(vars[rng.gen_range(0..vars.len())].clone())
        } else {
            Atom::Point(rng.gen_range(0..s.len()))
        };
        return Expr::Dirac(atom);
    }
    match rng.gen_range(0..4) {
        0 => {
            let k = rng.gen_range(1..=3);
            Expr::Mix(
                (0..k)
                    .map(|_| (random_rational(rng, 3, 4), random_expr(rng, s, vars, depth - 1)))
                    .collect(),
            )
        }
        1 => {
            let v = format!("v{}", vars.len());
            let e1 = random_expr(rng, s, vars, depth - 1);
            vars.push(v.clone());
            let e2 = random_expr(rng, s, vars, depth - 1);
            vars.pop();
            Expr::Bind(v, Box::new(e1), Box::new(e2))
        }
        2 => Expr::Scale(random_rational(rng, 3, 2), Box::new(random_expr(rng, s, vars, depth - 1))),
        _ => Expr::Add(
            Box::new(random_expr(rng, s, vars, depth - 1)),
            Box::new(random_expr(rng, s, vars, depth - 1)),
        ),
    }
}

fn expr_with<R: Rng>(rng: &mut R, s: &FinSpace, free: &[&str]) -> Expr {
    let mut vars: Vec<String> = free.iter().map(|v| v.to_string()).collect();
    random_expr(rng, s, &mut vars, 3)
}

fn bind(v: &str, e1: Expr, e2: Expr) -> Expr {
    Expr::Bind(v.into(), Box::new(e1), Box::new(e2))
}

fn pair_case(description: &str, p: &Program, q: &Program) -> Counterexample {
    Counterexample::new(description)
        .file("p.pk", p.to_source())
        .file("q.pk", q.to_source())
        .command("pvk eval p.pk --equiv q.pk")
}

/// Parses the printed form back, so every instance also goes through text.
fn reparsed(p: &Program) -> Result<Program> {
    parse(&p.to_source())
}

fn equiv_through_text(p: &Program, q: &Program) -> Result<bool> {
    check_program_equiv(&reparsed(p)?, &reparsed(q)?)
}

/// Left unit, right unit and associativity as program equivalences, each
/// on `trials` seeded instances.
pub fn schemas(max_size: usize, trials: usize, cfg: &Config) -> Result<Vec<LawResult>> {
    let mut left = LawResult::new(SUITE, "left-unit");
    let mut right = LawResult::new(SUITE, "right-unit");
    let mut assoc = LawResult::new(SUITE, "associativity");
    let mut rng = cfg.rng(40);
    for _ in 0..trials {
        let s = random_space(&mut rng, max_size);
        let prog = |e: Expr| Program {
            space: s.clone(),
            body: e,
        };

        let a = rng.gen_range(0..s.len());
        let e = expr_with(&mut rng, &s, &["x"]);
        let p = prog(bind("x", Expr::Dirac(Atom::Point(a)), e.clone()));
        let q = prog(substitute(&e, "x", a));
        left.check_result(equiv_through_text(&p, &q), || pair_case("bind x <- dirac a; e differs from e[x:=a]", &p, &q));

        let e = expr_with(&mut rng, &s, &[]);
        let p = prog(bind("x", e.clone(), Expr::Dirac(Atom::Var("x".into()))));
        let q = prog(e);
        right.check_result(equiv_through_text(&p, &q), || pair_case("bind x <- e; dirac x differs from e", &p, &q));

        let e1 = expr_with(&mut rng, &s, &[]);
        let e2 = expr_with(&mut rng, &s, &["x"]);
        let e3 = expr_with(&mut rng, &s, &["y"]);
        let p = prog(bind("y", bind("x", e1.clone(), e2.clone()), e3.clone()));
        let q = prog(bind("x", e1, bind("y", e2, e3)));
        assoc.check_result(equiv_through_text(&p, &q), || pair_case("bind is not associative", &p, &q));
    }
    Ok(vec![left, right, assoc])
}

/// Printing then parsing is the identity, and `bind x <- e1; e2` denotes
/// the Kleisli extension of the (monotone) kernel `x ↦ ⟦e2⟧` at `⟦e1⟧`.
pub fn semantics(max_size: usize, trials: usize, cfg: &Config) -> Result<Vec<LawResult>> {
    let mut round = LawResult::new(SUITE, "print-parse-round-trip");
    let mut ext = LawResult::new(SUITE, "bind-matches-extend");
    let mut rng = cfg.rng(41);
    for _ in 0..trials {
        let s = random_space(&mut rng, max_size);
        let e1 = expr_with(&mut rng, &s, &[]);
        let e2 = expr_with(&mut rng, &s, &["x"]);
        let p = Program {
            space: s.clone(),
            body: bind("x", e1.clone(), e2.clone()),
        };
        let case = || Counterexample::new("program").file("p.pk", p.to_source()).command("pvk eval p.pk");
        round.check_result(reparsed(&p).map(|back| back == p), case);

        let r = (|| {
            let graph = s
                .points()
                .map(|x| evaluate(&p.with_body(substitute(&e2, "x", x))))
                .collect::<Result<Vec<_>>>()?;
            let k = Kernel::new(&s, &s, graph)?;
            Ok(k.extend(&evaluate(&p.with_body(e1.clone()))?)? == evaluate(&p)?)
        })();
        ext.check_result(r, case);
    }
    Ok(vec![round, ext])
}

/// Malformed programs with the position and message each must produce.
pub fn malformed_cases() -> Vec<(&'static str, usize, usize, &'static str)> {
    vec![
        ("space D {a b} dirac c", 1, 21, "unknown point 'c'"),
        ("space D {a b}\nbind x <- dirac a; dirac y", 2, 26, "unknown point 'y'"),
        ("space D {a b}\nadd (bind x <- dirac a; dirac x) dirac x", 2, 40, "unbound variable 'x'"),
        ("space D {a b}\nmix 1/2: dirac a, -1/2: dirac b", 2, 19, "negative weight"),
        ("space D {a b}\nmix 1/2 dirac a", 2, 9, "expected ':'"),
        ("space D {a b}\nscale 1/0 dirac a", 2, 7, "not a number"),
        ("space D {a a} dirac a", 1, 12, "duplicate point 'a'"),
        ("space D {a b}\nle a b\nle b a\ndirac a", 3, 1, "not T0"),
        ("space D {a b}\nbind dirac <- dirac a; dirac a", 2, 6, "keyword 'dirac'"),
        ("space D {a b}\ndirac a dirac b", 2, 9, "unexpected"),
        ("space D {a b}\n(mix 1: dirac a", 2, 16, "expected ')'"),
        ("space D {a b}\nbind x <- dirac a dirac x", 2, 19, "expected ';'"),
        ("D {a b} dirac a", 1, 1, "expected 'space'"),
        ("space D {} dirac a", 1, 10, "point"),
        ("space D {a b}\ndirac a $", 2, 9, "unexpected character '$'"),
    ]
}

fn matches_case(r: &Result<Program>, line: usize, col: usize, needle: &str) -> bool {
    match r {
        Err(Error::Parse { line: l, col: c, msg }) => *l == line && *c == col && msg.contains(needle),
        _ => false,
    }
}

pub fn malformed() -> LawResult {
    let mut law = LawResult::new(SUITE, "malformed-positioned");
    for (src, line, col, needle) in malformed_cases() {
        let r = parse(src);
        law.check(matches_case(&r, line, col, needle), || {
            Counterexample::new(format!("expected {line}:{col} '{needle}', got {r:?}"))
                .file("bad.pk", format!("{src}\n"))
                .command("pvk eval bad.pk")
        });
    }
    law
}

pub fn run(cfg: &Config) -> Result<Vec<LawResult>> {
    let n = cfg.max_size + 1;
    let mut out = schemas(n, cfg.trials, cfg)?;
    out.extend(semantics(n, cfg.trials, cfg)?);
    out.push(malformed());
    Ok(out)
}
