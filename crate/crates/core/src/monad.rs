//! The simple-valuation monad in Kleisli form.
//!
//! A [`Kernel`] `X → V(Y)` is a monotone assignment of simple valuations on
//! `Y` to the points of `X`. Its extension `f†` sends `μ` to the valuation
//! `U ↦ ∫ f(x)(U) dμ`, which for simple `μ = Σ rᵢ δ_{xᵢ}` is `Σ rᵢ f(xᵢ)`.
//! Both formulas are implemented; [`Kernel::extend_checked`] runs them side by
//! side.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ext::{fmt_rational, parse_rational, ExtRat, Rational};
use crate::integral::{integrate, LscFun};
use crate::space::{ContinuousMap, FinSpace};
use crate::valuation::{SimpleValuation, ValuationTable};

/// `η_X(x) = δ_x`.
pub fn unit(space: &FinSpace, x: usize) -> Result<SimpleValuation> {
    SimpleValuation::dirac(space, x)
}

/// A continuous map `X → V(Y)`: monotone for the stochastic order.
#[derive(Clone, PartialEq, Eq)]
pub struct Kernel {
    source: FinSpace,
    target: FinSpace,
    graph: Vec<SimpleValuation>,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for x in self.source.points() {
            m.entry(&self.source.name(x), &self.graph[x].to_string());
        }
        m.finish()
    }
}

impl Kernel {
    /// Validates totality, target spaces and monotonicity.
    pub fn new(source: &FinSpace, target: &FinSpace, graph: Vec<SimpleValuation>) -> Result<Self> {
        if graph.len() != source.len() {
            return Err(Error::Incomplete(format!(
                "kernel defines {} of {} source points",
                graph.len(),
                source.len()
            )));
        }
        if graph.iter().any(|v| v.space() != target) {
            return Err(Error::SpaceMismatch(
                "kernel value is not on the target space".into(),
            ));
        }
        if let Some((x, y)) = first_non_monotone(source, &graph) {
            return Err(Error::NonMonotone {
                what: "kernel".into(),
                lo: source.name(x).into(),
                hi: source.name(y).into(),
            });
        }
        Ok(Kernel {
            source: source.clone(),
            target: target.clone(),
            graph,
        })
    }

    /// Skips the monotonicity check; callers guarantee it.
    pub(crate) fn new_unchecked(
        source: &FinSpace,
        target: &FinSpace,
        graph: Vec<SimpleValuation>,
    ) -> Self {
        Kernel {
            source: source.clone(),
            target: target.clone(),
            graph,
        }
    }

    /// `η_X`.
    pub fn unit(space: &FinSpace) -> Self {
        let graph = space
            .points()
            .map(|x| unit(space, x).expect("point of space"))
            .collect();
        Kernel::new_unchecked(space, space, graph)
    }

    /// `η_Y ∘ f`.
    pub fn from_map(f: &ContinuousMap) -> Self {
        let graph = f
            .source()
            .points()
            .map(|x| unit(f.target(), f.apply(x)).expect("point of target"))
            .collect();
        Kernel::new_unchecked(f.source(), f.target(), graph)
    }

    pub fn zero(source: &FinSpace, target: &FinSpace) -> Self {
        Kernel::new_unchecked(
            source,
            target,
            vec![SimpleValuation::zero(target); source.len()],
        )
    }

    pub fn source(&self) -> &FinSpace {
        &self.source
    }

    pub fn target(&self) -> &FinSpace {
        &self.target
    }

    pub fn apply(&self, x: usize) -> &SimpleValuation {
        &self.graph[x]
    }

    pub fn graph(&self) -> &[SimpleValuation] {
        &self.graph
    }

    fn check_source(&self, mu: &SimpleValuation) -> Result<()> {
        if mu.space() == &self.source {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(
                "valuation is not on the kernel's source".into(),
            ))
        }
    }

    /// `f†(μ) = Σ rᵢ f(xᵢ)`.
    pub fn extend(&self, mu: &SimpleValuation) -> Result<SimpleValuation> {
        self.check_source(mu)?;
        let mut out = SimpleValuation::zero(&self.target);
        for (x, r) in mu.terms() {
            out.add_scaled(r, &self.graph[x]);
        }
        Ok(out)
    }

    /// `f†(μ)(U) = ∫ f(x)(U) dμ`, evaluated open by open and decomposed.
    pub fn extend_by_integral(&self, mu: &SimpleValuation) -> Result<SimpleValuation> {
        self.check_source(mu)?;
        let mut values = Vec::with_capacity(self.target.open_sets().len());
        for &u in self.target.open_sets() {
            let slice = LscFun::new(
                &self.source,
                self.graph.iter().map(|v| ExtRat::Fin(v.mass(u))).collect(),
            )?;
            values.push(integrate(&slice, mu)?);
        }
        ValuationTable::from_values(&self.target, values)?.decompose()
    }

    /// Runs both extension formulas and insists they agree.
    pub fn extend_checked(&self, mu: &SimpleValuation) -> Result<SimpleValuation> {
        let fast = self.extend(mu)?;
        let slow = self.extend_by_integral(mu)?;
        if fast != slow {
            return Err(Error::Precondition(format!(
                "extension formulas disagree: {fast} vs {slow}"
            )));
        }
        Ok(fast)
    }

    /// `g† ∘ self`, the Kleisli composite `X → V(Z)`.
    pub fn then(&self, g: &Kernel) -> Result<Kernel> {
        if self.target != g.source {
            return Err(Error::SpaceMismatch("composed kernels do not meet".into()));
        }
        let graph = self
            .graph
            .iter()
            .map(|v| g.extend(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Kernel::new_unchecked(&self.source, &g.target, graph))
    }

    /// Reads `point <x> => <rational> @ <y> [, <rational> @ <y>]*` lines.
    /// An empty right-hand side is the zero valuation.
    pub fn parse(source: &FinSpace, target: &FinSpace, text: &str) -> Result<Kernel> {
        let mut graph: Vec<Option<SimpleValuation>> = vec![None; source.len()];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let perr = |col: usize, msg: String| Error::Parse {
                line: i + 1,
                col,
                msg,
            };
            let lead = line.len() - line.trim_start().len();
            let body = line.trim_start();
            let Some(rest) = body.strip_prefix("point") else {
                return Err(perr(lead + 1, "expected 'point <x> => ...'".into()));
            };
            let arrow = rest
                .find("=>")
                .ok_or_else(|| perr(lead + 1, "expected '=>'".into()))?;
            let x_name = rest[..arrow].trim();
            let x = source.index(x_name).map_err(|e| {
                perr(
                    lead + 6 + (rest.len() - rest.trim_start().len()),
                    e.to_string(),
                )
            })?;
            if graph[x].is_some() {
                return Err(perr(lead + 1, format!("point '{x_name}' defined twice")));
            }
            let mut col = lead + 5 + arrow + 3;
            let mut terms = Vec::new();
            let rhs = &rest[arrow + 2..];
            if !rhs.trim().is_empty() {
                for part in rhs.split(',') {
                    let pcol = col + part.len() - part.trim_start().len();
                    col += part.len() + 1;
                    let (r, y) = part
                        .split_once('@')
                        .ok_or_else(|| perr(pcol, "expected '<rational> @ <point>'".into()))?;
                    let r = parse_rational(r).map_err(|e| perr(pcol, e.to_string()))?;
                    let y = target
                        .index(y.trim())
                        .map_err(|e| perr(pcol, e.to_string()))?;
                    terms.push((r, y));
                }
            }
            graph[x] = Some(SimpleValuation::from_terms(target, terms)?);
        }
        let graph = crate::space::collect_total(source, graph)?;
        Kernel::new(source, target, graph)
    }

    pub fn to_ker_text(&self) -> String {
        let mut out = String::new();
        for x in self.source.points() {
            let terms: Vec<String> = self.graph[x]
                .terms()
                .map(|(y, r)| format!("{} @ {}", fmt_rational(r), self.target.name(y)))
                .collect();
            out.push_str(&format!(
                "point {} => {}\n",
                self.source.name(x),
                terms.join(", ")
            ));
        }
        out
    }
}

/// First strict pair `x < y` with `graph[x]` not stochastically below `graph[y]`.
pub(crate) fn first_non_monotone(
    source: &FinSpace,
    graph: &[SimpleValuation],
) -> Option<(usize, usize)> {
    source
        .strict_pairs()
        .find(|&(x, y)| graph[x].stochastic_witness(&graph[y]).is_some())
}

/// `V(f) = (η ∘ f)†`.
pub fn functor_map(f: &ContinuousMap, mu: &SimpleValuation) -> Result<SimpleValuation> {
    Kernel::from_map(f).extend(mu)
}

/// An element `Σ Rⱼ δ_{νⱼ}` of `V(V(X))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaValuation {
    space: FinSpace,
    terms: Vec<(Rational, SimpleValuation)>,
}

impl MetaValuation {
    /// Drops zero coefficients and merges repeated inner valuations.
    pub fn new(space: &FinSpace, terms: Vec<(Rational, SimpleValuation)>) -> Result<Self> {
        let mut merged: Vec<(Rational, SimpleValuation)> = Vec::new();
        for (r, v) in terms {
            if v.space() != space {
                return Err(Error::SpaceMismatch(
                    "inner valuations live on different spaces".into(),
                ));
            }
            if r.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(_, w)| *w == v) {
                Some((acc, _)) => *acc += r,
                None => merged.push((r, v)),
            }
        }
        Ok(MetaValuation {
            space: space.clone(),
            terms: merged,
        })
    }

    /// `δ_ν`.
    pub fn dirac(nu: &SimpleValuation) -> Self {
        MetaValuation {
            space: nu.space().clone(),
            terms: vec![(Rational::from_integer(1.into()), nu.clone())],
        }
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn terms(&self) -> &[(Rational, SimpleValuation)] {
        &self.terms
    }

    /// The distinct inner valuations as a finite space under the stochastic
    /// order, this meta-valuation as a simple valuation on it, and the
    /// inclusion kernel back into `V(X)`.
    pub fn as_simple(&self) -> Result<(FinSpace, SimpleValuation, Kernel)> {
        let k = self.terms.len();
        let mut gens = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j && self.terms[i].1.stochastic_le(&self.terms[j].1)? {
                    gens.push((i, j));
                }
            }
        }
        let names = (0..k).map(|i| format!("nu{i}")).collect();
        let carrier = FinSpace::new(None, names, &gens)?;
        let outer = SimpleValuation::from_terms(
            &carrier,
            self.terms
                .iter()
                .enumerate()
                .map(|(i, (r, _))| (r.clone(), i)),
        )?;
        let inclusion = Kernel::new(
            &carrier,
            &self.space,
            self.terms.iter().map(|(_, v)| v.clone()).collect(),
        )?;
        Ok((carrier, outer, inclusion))
    }
}

/// `m(ϖ) = Σ Rⱼ νⱼ`.
pub fn multiply(w: &MetaValuation) -> SimpleValuation {
    let mut out = SimpleValuation::zero(&w.space);
    for (r, v) in &w.terms {
        out.add_scaled(r, v);
    }
    out
}

/// `m = id†`, computed by extending the inclusion kernel of the finitely many
/// inner valuations.
pub fn multiply_via_extend(w: &MetaValuation) -> Result<SimpleValuation> {
    let (_, outer, inclusion) = w.as_simple()?;
    inclusion.extend(&outer)
}

/// Both sides of the disintegration formula
/// `∫ h d(f†μ) = ∫ (x ↦ ∫ h df(x)) dμ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disintegration {
    pub lhs: ExtRat,
    pub rhs: ExtRat,
    /// Whether `x ↦ ∫ h df(x)` came out monotone.
    pub inner_monotone: bool,
}

impl Disintegration {
    pub fn holds(&self) -> bool {
        self.inner_monotone && self.lhs == self.rhs
    }
}

pub fn check_disintegration(
    h: &LscFun,
    f: &Kernel,
    mu: &SimpleValuation,
) -> Result<Disintegration> {
    let lhs = integrate(h, &f.extend(mu)?)?;
    let inner: Vec<ExtRat> = f
        .graph
        .iter()
        .map(|v| integrate(h, v))
        .collect::<Result<_>>()?;
    let (rhs, inner_monotone) = match LscFun::new(&f.source, inner.clone()) {
        Ok(g) => (integrate(&g, mu)?, true),
        Err(_) => (mu.terms().map(|(x, r)| inner[x].scale(r)).sum(), false),
    };
    Ok(Disintegration {
        lhs,
        rhs,
        inner_monotone,
    })
}

/// Which monad law a counterexample breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ManesLaw {
    /// `η† = id`
    UnitExtension,
    /// `f† ∘ η = f`
    ExtensionUnit,
    /// `g† ∘ f† = (g† ∘ f)†`
    Composition,
}

impl fmt::Display for ManesLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ManesLaw::UnitExtension => "unit-extension",
            ManesLaw::ExtensionUnit => "extension-unit",
            ManesLaw::Composition => "composition",
        })
    }
}

/// `η_X† (μ) = μ`.
pub fn unit_extension_holds(mu: &SimpleValuation) -> Result<bool> {
    Ok(Kernel::unit(mu.space()).extend(mu)? == *mu)
}

/// `f†(δ_x) = f(x)` for every `x`.
pub fn extension_unit_holds(f: &Kernel) -> Result<bool> {
    for x in f.source.points() {
        if f.extend(&unit(&f.source, x)?)? != f.graph[x] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `g†(f†(μ)) = (g† ∘ f)†(μ)`.
pub fn composition_holds(f: &Kernel, g: &Kernel, mu: &SimpleValuation) -> Result<bool> {
    Ok(g.extend(&f.extend(mu)?)? == f.then(g)?.extend(mu)?)
}

/// Pass/fail tally for one law with the first failing case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawTally<C> {
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<C>,
}

impl<C> Default for LawTally<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C> LawTally<C> {
    pub fn new() -> Self {
        LawTally {
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    pub fn record(&mut self, ok: bool, case: impl FnOnce() -> C) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(case());
            }
        }
    }
}

/// A single monad-law case: kernels `f: X → V(Y)`, `g: Y → V(Z)` and `μ` on `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManesCase {
    pub f: Kernel,
    pub g: Kernel,
    pub mu: SimpleValuation,
}

#[derive(Clone, Debug, Default)]
pub struct ManesReport {
    pub unit_extension: LawTally<ManesCase>,
    pub extension_unit: LawTally<ManesCase>,
    pub composition: LawTally<ManesCase>,
}

impl ManesReport {
    pub fn failures(&self) -> u64 {
        self.unit_extension.failed + self.extension_unit.failed + self.composition.failed
    }
}

/// Verifies all three laws on every supplied case.
pub fn check_manes_laws<I: IntoIterator<Item = ManesCase>>(cases: I) -> Result<ManesReport> {
    let mut report = ManesReport::default();
    for case in cases {
        let ok = unit_extension_holds(&case.mu)?;
        report.unit_extension.record(ok, || case.clone());
        let ok = extension_unit_holds(&case.f)?;
        report.extension_unit.record(ok, || case.clone());
        let ok = composition_holds(&case.f, &case.g, &case.mu)?;
        report.composition.record(ok, || case.clone());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::rat;
    use crate::integral::integrate_simple;
    use crate::space::load_space;

    fn s2() -> FinSpace {
        load_space("point bot; point top; le bot top").unwrap()
    }

    fn d2() -> FinSpace {
        FinSpace::discrete(&["a", "b"]).unwrap()
    }

    fn val(s: &FinSpace, terms: &[(i64, i64, &str)]) -> SimpleValuation {
        SimpleValuation::from_terms(
            s,
            terms
                .iter()
                .map(|&(n, d, p)| (rat(n, d), s.index(p).unwrap())),
        )
        .unwrap()
    }

    /// f(bot) = ½δ_b, f(top) = ½δ_a + ½δ_b.
    fn running_kernel() -> Kernel {
        Kernel::parse(
            &s2(),
            &d2(),
            "point bot => 1/2 @ b\npoint top => 1/2 @ a, 1/2 @ b\n",
        )
        .unwrap()
    }

    #[test]
    fn running_extension() {
        let f = running_kernel();
        let mu = val(&s2(), &[(1, 2, "bot"), (1, 2, "top")]);
        let expected = val(&d2(), &[(1, 4, "a"), (1, 2, "b")]);
        // oracle: ∫ f(x)(U) dμ on each of the four opens of D2
        for &u in d2().open_sets() {
            let slice = LscFun::new(
                &s2(),
                f.graph().iter().map(|v| v.eval(u).unwrap()).collect(),
            )
            .unwrap();
            assert_eq!(
                integrate_simple(&slice, &mu).unwrap(),
                expected.eval(u).unwrap()
            );
        }
        assert_eq!(f.extend(&mu).unwrap(), expected);
        assert_eq!(f.extend_by_integral(&mu).unwrap(), expected);
        assert_eq!(f.extend_checked(&mu).unwrap(), expected);
        for x in s2().points() {
            assert_eq!(&f.extend(&unit(&s2(), x).unwrap()).unwrap(), f.apply(x));
        }
        assert_eq!(Kernel::unit(&s2()).extend(&mu).unwrap(), mu);
    }

    #[test]
    fn kernel_validation() {
        let s = s2();
        let d = d2();
        let bad = Kernel::parse(&s, &d, "point bot => 1 @ a\npoint top => 1/2 @ a\n");
        assert!(matches!(bad, Err(Error::NonMonotone { .. })), "{bad:?}");
        assert!(matches!(
            Kernel::parse(&s, &d, "point bot => 1 @ a\n"),
            Err(Error::Incomplete(_))
        ));
        assert!(matches!(
            Kernel::parse(&s, &d, "point bot => 1 @ c\npoint top =>\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        let f = running_kernel();
        assert_eq!(Kernel::parse(&s, &d, &f.to_ker_text()).unwrap(), f);
        assert!(f.extend(&SimpleValuation::zero(&d)).is_err());
        let z = Kernel::parse(&s, &d, "point bot =>\npoint top =>\n").unwrap();
        assert_eq!(z, Kernel::zero(&s, &d));
    }

    #[test]
    fn multiplication() {
        let s = s2();
        let mu = val(&s, &[(1, 3, "bot"), (2, 3, "top")]);
        assert_eq!(multiply(&MetaValuation::dirac(&mu)), mu);
        let d = d2();
        let da = SimpleValuation::dirac_named(&d, "a").unwrap();
        let db = SimpleValuation::dirac_named(&d, "b").unwrap();
        let w = MetaValuation::new(&d, vec![(rat(1, 2), da), (rat(1, 2), db)]).unwrap();
        assert_eq!(multiply(&w), val(&d, &[(1, 2, "a"), (1, 2, "b")]));
        assert_eq!(multiply_via_extend(&w).unwrap(), multiply(&w));
        let empty = MetaValuation::new(&d, vec![]).unwrap();
        assert!(multiply(&empty).is_zero());
        assert_eq!(multiply_via_extend(&empty).unwrap(), multiply(&empty));
        assert!(MetaValuation::new(&d, vec![(rat(1, 1), mu)]).is_err());
    }

    #[test]
    fn functor_action_matches_pushforward() {
        let d = d2();
        let s = s2();
        let nu = val(&d, &[(1, 3, "a"), (1, 2, "b")]);
        let maps = [
            ContinuousMap::new(d.clone(), s.clone(), vec![1, 0]).unwrap(),
            ContinuousMap::identity(&d),
            ContinuousMap::constant(&d, &s, 0),
        ];
        for f in &maps {
            assert_eq!(functor_map(f, &nu).unwrap(), nu.pushforward(f).unwrap());
        }
        let g = ContinuousMap::constant(&s, &d, 1);
        let gf = maps[0].then(&g).unwrap();
        assert_eq!(
            functor_map(&gf, &nu).unwrap(),
            functor_map(&g, &functor_map(&maps[0], &nu).unwrap()).unwrap()
        );
    }

    #[test]
    fn disintegration_examples() {
        let f = running_kernel();
        let mu = val(&s2(), &[(1, 2, "bot"), (1, 2, "top")]);
        let h = LscFun::new(&d2(), vec![ExtRat::from(2), ExtRat::from(1)]).unwrap();
        let r = check_disintegration(&h, &f, &mu).unwrap();
        // f†μ = ¼δ_a + ½δ_b, so ∫h = ½ + ½ = 1
        assert_eq!(r.lhs, ExtRat::from(1));
        assert!(r.holds(), "{r:?}");
        let u = Kernel::unit(&s2());
        let hs = LscFun::new(&s2(), vec![ExtRat::from(1), ExtRat::Inf]).unwrap();
        let r = check_disintegration(&hs, &u, &mu).unwrap();
        assert!(r.holds());
        assert_eq!(r.lhs, integrate(&hs, &mu).unwrap());
        let dx = unit(&s2(), 1).unwrap();
        let r = check_disintegration(&h, &f, &dx).unwrap();
        assert_eq!(r.lhs, integrate(&h, f.apply(1)).unwrap());
        assert!(r.holds());
    }

    #[test]
    fn laws_on_small_cases() {
        let s = s2();
        let d = d2();
        let f = running_kernel();
        let g = Kernel::parse(
            &d,
            &s,
            "point a => 1 @ top\npoint b => 1/2 @ bot, 1/3 @ top\n",
        )
        .unwrap();
        let mu = val(&s, &[(1, 2, "bot"), (1, 4, "top")]);
        let report = check_manes_laws([
            ManesCase {
                f: f.clone(),
                g: g.clone(),
                mu: mu.clone(),
            },
            ManesCase {
                f: Kernel::zero(&s, &d),
                g: Kernel::zero(&d, &s),
                mu,
            },
        ])
        .unwrap();
        assert_eq!(report.failures(), 0);
        assert_eq!(report.composition.passed, 2);
    }
}
