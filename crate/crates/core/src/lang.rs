//! A small kernel language over a declared finite space.
//!
//! ```text
//! program  := "space" IDENT "{" IDENT+ "}" ("le" IDENT IDENT)* expr
//! expr     := "dirac" atom
//!           | "mix" weighted ("," weighted)*
//!           | "bind" IDENT "<-" expr ";" expr
//!           | "scale" RATIONAL expr
//!           | "add" expr expr
//!           | "(" expr ")"
//! weighted := RATIONAL ":" expr
//! ```
//!
//! A program denotes a simple valuation: `dirac` is the unit, `bind` the
//! Kleisli extension, and `mix`, `scale`, `add` are linear combinations.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ext::{fmt_rational, parse_rational, Rational};
use crate::monad::{first_non_monotone, Kernel};
use crate::space::FinSpace;
use crate::valuation::SimpleValuation;

const KEYWORDS: [&str; 7] = ["space", "le", "dirac", "mix", "bind", "scale", "add"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (_, c) = chars[i];
            let col = i + 1;
            let push = |out: &mut Vec<Token>, tok| {
                out.push(Token {
                    tok,
                    line: li + 1,
                    col,
                })
            };
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                push(
                    &mut out,
                    Tok::Word(chars[start..i].iter().map(|p| p.1).collect()),
                );
            } else if c == '<' && chars.get(i + 1).map(|p| p.1) == Some('-') {
                push(&mut out, Tok::Sym("<-"));
                i += 2;
            } else {
                let sym = match c {
                    '{' => "{",
                    '}' => "}",
                    '(' => "(",
                    ')' => ")",
                    ';' => ";",
                    ',' => ",",
                    ':' => ":",
                    '/' => "/",
                    '-' => "-",
                    _ => {
                        return Err(Error::Parse {
                            line: li + 1,
                            col,
                            msg: format!("unexpected character '{c}'"),
                        })
                    }
                };
                push(&mut out, Tok::Sym(sym));
                i += 1;
            }
        }
    }
    let (line, col) = text
        .lines()
        .enumerate()
        .last()
        .map(|(i, l)| (i + 1, l.chars().count() + 1))
        .unwrap_or((1, 1));
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// A point literal or a variable, resolved at parse time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Point(usize),
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Dirac(Atom),
    Mix(Vec<(Rational, Expr)>),
    Bind(String, Box<Expr>, Box<Expr>),
    Scale(Rational, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub space: FinSpace,
    pub body: Expr,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    space: Option<FinSpace>,
    scope: Vec<String>,
    binders: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn describe(t: &Token) -> String {
        match &t.tok {
            Tok::Word(w) => format!("'{w}'"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect_sym(&mut self, s: &'static str) -> Result<Token> {
        let t = self.next();
        if t.tok == Tok::Sym(s) {
            Ok(t)
        } else {
            self.err(&t, format!("expected '{s}', found {}", Self::describe(&t)))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        self.peek().tok == Tok::Word(kw.into())
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) if KEYWORDS.contains(&w.as_str()) => {
                self.err(&t, format!("expected {what}, found keyword '{w}'"))
            }
            Tok::Word(w) => Ok((w.clone(), t.clone())),
            _ => self.err(&t, format!("expected {what}, found {}", Self::describe(&t))),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let t = self.next();
        let neg = t.tok == Tok::Sym("-");
        let num_tok = if neg { self.next() } else { t.clone() };
        let Tok::Word(num) = &num_tok.tok else {
            return self.err(
                &t,
                format!("expected a weight, found {}", Self::describe(&t)),
            );
        };
        let mut text = num.clone();
        if self.peek().tok == Tok::Sym("/") {
            self.next();
            let d = self.next();
            let Tok::Word(den) = &d.tok else {
                return self.err(
                    &d,
                    format!("expected a denominator, found {}", Self::describe(&d)),
                );
            };
            text = format!("{text}/{den}");
        }
        if neg {
            return self.err(&t, format!("negative weight '-{text}'"));
        }
        parse_rational(&text).or_else(|e| self.err(&t, e.to_string()))
    }

    fn header(&mut self) -> Result<()> {
        let t = self.next();
        if t.tok != Tok::Word("space".into()) {
            return self.err(
                &t,
                format!("expected 'space', found {}", Self::describe(&t)),
            );
        }
        let (name, _) = self.ident("a space name")?;
        self.expect_sym("{")?;
        let mut names: Vec<String> = Vec::new();
        while self.peek().tok != Tok::Sym("}") {
            let (p, pt) = self.ident("a point name")?;
            if names.contains(&p) {
                return self.err(&pt, format!("duplicate point '{p}'"));
            }
            names.push(p);
        }
        let close = self.expect_sym("}")?;
        if names.is_empty() {
            return self.err(&close, "a space needs at least one point");
        }
        let mut gens = Vec::new();
        let mut space =
            FinSpace::new(Some(name.clone()), names.clone(), &gens).or_else(|e| self.err(&close, e.to_string()))?;
        while self.is_keyword("le") {
            let le = self.next();
            let mut pair = [0usize; 2];
            for slot in &mut pair {
                let (p, pt) = self.ident("a point name")?;
                match names.iter().position(|n| *n == p) {
                    Some(i) => *slot = i,
                    None => return self.err(&pt, format!("unknown point '{p}'")),
                }
            }
            gens.push((pair[0], pair[1]));
            // Rebuilt per line so an order cycle is reported where it closes.
            space = FinSpace::new(Some(name.clone()), names.clone(), &gens).or_else(|e| self.err(&le, e.to_string()))?;
        }
        self.space = Some(space);
        Ok(())
    }

    fn atom(&mut self) -> Result<Atom> {
        let (name, t) = self.ident("a point or variable")?;
        if self.scope.iter().rev().any(|v| *v == name) {
            return Ok(Atom::Var(name));
        }
        let space = self.space.as_ref().expect("header parsed");
        if let Ok(i) = space.index(&name) {
            return Ok(Atom::Point(i));
        }
        if self.binders.contains(&name) {
            self.err(&t, format!("unbound variable '{name}'"))
        } else {
            self.err(&t, format!("unknown point '{name}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Word(w) if w == "dirac" => {
                self.next();
                Ok(Expr::Dirac(self.atom()?))
            }
            Tok::Word(w) if w == "mix" => {
                self.next();
                let mut items = Vec::new();
                loop {
                    let r = self.rational()?;
                    self.expect_sym(":")?;
                    items.push((r, self.expr()?));
                    if self.peek().tok == Tok::Sym(",") {
                        self.next();
                    } else {
                        break;
                    }
                }
                Ok(Expr::Mix(items))
            }
            Tok::Word(w) if w == "bind" => {
                self.next();
                let (var, _) = self.ident("a variable")?;
                self.expect_sym("<-")?;
                let e1 = self.expr()?;
                self.expect_sym(";")?;
                self.scope.push(var.clone());
                let e2 = self.expr();
                self.scope.pop();
                Ok(Expr::Bind(var, Box::new(e1), Box::new(e2?)))
            }
            Tok::Word(w) if w == "scale" => {
                self.next();
                let r = self.rational()?;
                Ok(Expr::Scale(r, Box::new(self.expr()?)))
            }
            Tok::Word(w) if w == "add" => {
                self.next();
                let a = self.expr()?;
                let b = self.expr()?;
                Ok(Expr::Add(Box::new(a), Box::new(b)))
            }
            Tok::Sym("(") => {
                self.next();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => self.err(
                &t,
                format!("expected an expression, found {}", Self::describe(&t)),
            ),
        }
    }
}

/// Parses a program, resolving every name against the declared points and
/// the enclosing binders.
pub fn parse(text: &str) -> Result<Program> {
    let toks = lex(text)?;
    let binders = toks
        .windows(2)
        .filter(|w| w[0].tok == Tok::Word("bind".into()))
        .filter_map(|w| match &w[1].tok {
            Tok::Word(v) => Some(v.clone()),
            _ => None,
        })
        .collect();
    let mut p = Parser {
        toks,
        pos: 0,
        space: None,
        scope: Vec::new(),
        binders,
    };
    p.header()?;
    let body = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return p.err(
            &t,
            format!("unexpected {} after the program", Parser::describe(&t)),
        );
    }
    Ok(Program {
        space: p.space.expect("header parsed"),
        body,
    })
}

/// `f†(μ)` for the kernel with the given graph, rejecting a graph that is
/// not monotone for the stochastic order.
pub fn bind_graph(
    space: &FinSpace,
    mu: &SimpleValuation,
    graph: Vec<SimpleValuation>,
) -> Result<SimpleValuation> {
    if let Some((x, y)) = first_non_monotone(space, &graph) {
        return Err(Error::NonContinuousKernel {
            lo: space.name(x).into(),
            hi: space.name(y).into(),
        });
    }
    Kernel::new_unchecked(space, space, graph).extend(mu)
}

fn eval(space: &FinSpace, e: &Expr, env: &mut Vec<(String, usize)>) -> Result<SimpleValuation> {
    match e {
        Expr::Dirac(Atom::Point(x)) => SimpleValuation::dirac(space, *x),
        Expr::Dirac(Atom::Var(v)) => {
            let x = env
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|p| p.1)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            SimpleValuation::dirac(space, x)
        }
        Expr::Mix(items) => {
            let mut out = SimpleValuation::zero(space);
            for (r, sub) in items {
                out.add_scaled(r, &eval(space, sub, env)?);
            }
            Ok(out)
        }
        Expr::Scale(r, sub) => eval(space, sub, env)?.scale(r),
        Expr::Add(a, b) => eval(space, a, env)?.add(&eval(space, b, env)?),
        Expr::Bind(v, e1, e2) => {
            let mu = eval(space, e1, env)?;
            let mut graph = Vec::with_capacity(space.len());
            for x in space.points() {
                env.push((v.clone(), x));
                let r = eval(space, e2, env);
                env.pop();
                graph.push(r?);
            }
            bind_graph(space, &mu, graph)
        }
    }
}

/// The denotation of a program.
pub fn evaluate(p: &Program) -> Result<SimpleValuation> {
    eval(&p.space, &p.body, &mut Vec::new())
}

/// Exact equality of denotations.
pub fn check_program_equiv(p: &Program, q: &Program) -> Result<bool> {
    if p.space != q.space {
        return Err(Error::SpaceMismatch(
            "programs declare different spaces".into(),
        ));
    }
    Ok(evaluate(p)? == evaluate(q)?)
}

/// `e[v := x]`, respecting shadowing.
pub fn substitute(e: &Expr, v: &str, x: usize) -> Expr {
    match e {
        Expr::Dirac(Atom::Var(w)) if w == v => Expr::Dirac(Atom::Point(x)),
        Expr::Dirac(a) => Expr::Dirac(a.clone()),
        Expr::Mix(items) => Expr::Mix(
            items
                .iter()
                .map(|(r, s)| (r.clone(), substitute(s, v, x)))
                .collect(),
        ),
        Expr::Scale(r, s) => Expr::Scale(r.clone(), Box::new(substitute(s, v, x))),
        Expr::Add(a, b) => Expr::Add(Box::new(substitute(a, v, x)), Box::new(substitute(b, v, x))),
        Expr::Bind(w, e1, e2) => {
            let e2 = if w == v {
                (**e2).clone()
            } else {
                substitute(e2, v, x)
            };
            Expr::Bind(w.clone(), Box::new(substitute(e1, v, x)), Box::new(e2))
        }
    }
}

struct Shown<'a> {
    space: &'a FinSpace,
    e: &'a Expr,
    nested: bool,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |e| Shown {
            space: self.space,
            e,
            nested: true,
        };
        match self.e {
            Expr::Dirac(Atom::Point(x)) => write!(f, "dirac {}", self.space.name(*x)),
            Expr::Dirac(Atom::Var(v)) => write!(f, "dirac {v}"),
            Expr::Mix(items) => {
                // A nested mix would swallow the separators of its parent.
                if self.nested {
                    write!(f, "(")?;
                }
                write!(f, "mix ")?;
                for (i, (r, s)) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}: {}", fmt_rational(r), sub(s))?;
                }
                if self.nested {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Expr::Scale(r, s) => write!(f, "scale {} {}", fmt_rational(r), sub(s)),
            Expr::Add(a, b) => write!(f, "add {} {}", sub(a), sub(b)),
            Expr::Bind(v, e1, e2) => write!(f, "bind {v} <- {}; {}", sub(e1), sub(e2)),
        }
    }
}

impl Program {
    /// Source text that parses back to this program.
    pub fn to_source(&self) -> String {
        let s = &self.space;
        let mut out = format!("space {} {{", s.label().unwrap_or("X"));
        for n in s.names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push_str(" }\n");
        for (x, y) in s.covers() {
            out.push_str(&format!("le {} {}\n", s.name(x), s.name(y)));
        }
        out.push_str(
            &Shown {
                space: s,
                e: &self.body,
                nested: false,
            }
            .to_string(),
        );
        out.push('\n');
        out
    }

    pub fn with_body(&self, body: Expr) -> Program {
        Program {
            space: self.space.clone(),
            body,
        }
    }
}

/// Output format: `<rational> @ <point>` lines sorted by point name.
pub fn render(v: &SimpleValuation) -> String {
    v.to_val_text()
}
