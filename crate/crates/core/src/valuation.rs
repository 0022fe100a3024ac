//! Valuations on finite spaces.
//!
//! A [`SimpleValuation`] is a finite combination `Σ rᵢ δ_{xᵢ}` with finite
//! nonnegative coefficients, stored densely by point index. A
//! [`ValuationTable`] assigns an extended rational to every open set and may
//! carry infinite mass. On a finite space every valid finite table is simple,
//! which [`ValuationTable::decompose`] recovers by inversion over principal
//! filters.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ext::{fmt_rational, parse_rational, ExtRat, Rational};
use crate::space::{product_space, ContinuousMap, FinSpace, PointSet};

/// Anything that assigns a mass to the open sets of a space.
pub trait Measure {
    fn space(&self) -> &FinSpace;

    /// Mass of an open set. Callers guarantee `u` is open.
    fn measure(&self, u: PointSet) -> ExtRat;
}

/// `Σ rᵢ δ_{xᵢ}` over a finite space. Equality is structural: the dense
/// coefficient vector is the canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleValuation {
    space: FinSpace,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for SimpleValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleValuation[{self}]")
    }
}

impl fmt::Display for SimpleValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(x, r)| format!("{}·δ_{}", fmt_rational(r), self.space.name(x)))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl SimpleValuation {
    pub fn zero(space: &FinSpace) -> Self {
        SimpleValuation {
            space: space.clone(),
            coeffs: vec![Rational::zero(); space.len()],
        }
    }

    /// The Dirac mass at point index `x`.
    pub fn dirac(space: &FinSpace, x: usize) -> Result<Self> {
        if x >= space.len() {
            return Err(Error::UnknownPoint(format!("#{x}")));
        }
        let mut v = Self::zero(space);
        v.coeffs[x] = Rational::from_integer(1.into());
        Ok(v)
    }

    pub fn dirac_named(space: &FinSpace, name: &str) -> Result<Self> {
        Self::dirac(space, space.index(name)?)
    }

    /// Sums the given terms; repeated points are merged.
    pub fn from_terms<I>(space: &FinSpace, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, usize)>,
    {
        let mut v = Self::zero(space);
        for (r, x) in terms {
            if x >= space.len() {
                return Err(Error::UnknownPoint(format!("#{x}")));
            }
            if r.is_negative() {
                return Err(Error::NegativeNumber(fmt_rational(&r)));
            }
            v.coeffs[x] += r;
        }
        Ok(v)
    }

    /// Builds from a dense coefficient vector.
    pub fn from_coeffs(space: &FinSpace, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != space.len() {
            return Err(Error::SpaceMismatch(format!(
                "{} coefficients for {} points",
                coeffs.len(),
                space.len()
            )));
        }
        if let Some(r) = coeffs.iter().find(|r| r.is_negative()) {
            return Err(Error::NegativeNumber(fmt_rational(r)));
        }
        Ok(SimpleValuation {
            space: space.clone(),
            coeffs,
        })
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn coeff(&self, x: usize) -> &Rational {
        &self.coeffs[x]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Nonzero terms in point-index order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, r)| !r.is_zero())
    }

    /// Points carrying positive mass.
    pub fn carrier(&self) -> PointSet {
        self.terms().map(|(x, _)| x).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn total_mass(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// Mass of a set, without an openness check.
    pub fn mass(&self, u: PointSet) -> Rational {
        u.iter().map(|x| &self.coeffs[x]).sum()
    }

    /// `ν(U)`: the sum of coefficients of points inside the open set `U`.
    pub fn eval(&self, u: PointSet) -> Result<ExtRat> {
        self.space.check_open(u)?;
        Ok(ExtRat::Fin(self.mass(u)))
    }

    fn same_space(&self, other: &SimpleValuation) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(
                "valuations live on different spaces".into(),
            ))
        }
    }

    pub fn add(&self, other: &SimpleValuation) -> Result<SimpleValuation> {
        self.same_space(other)?;
        Ok(SimpleValuation {
            space: self.space.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// In-place `self += r · other`; spaces must already agree.
    pub(crate) fn add_scaled(&mut self, r: &Rational, other: &SimpleValuation) {
        debug_assert!(self.space == other.space);
        if r.is_zero() {
            return;
        }
        let one = r.is_one();
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if b.is_zero() {
                continue;
            }
            // Skipping the multiplication matters in the exhaustive sweeps.
            match (a.is_zero(), one) {
                (true, true) => a.clone_from(b),
                (true, false) => *a = r * b,
                (false, true) => *a += b,
                (false, false) => *a += r * b,
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> Result<SimpleValuation> {
        if r.is_negative() {
            return Err(Error::NegativeNumber(fmt_rational(r)));
        }
        Ok(SimpleValuation {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        })
    }

    /// The stochastic order: `μ(U) <= ν(U)` on every open `U`.
    pub fn stochastic_le(&self, other: &SimpleValuation) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.stochastic_witness(other).is_none())
    }

    /// An open set on which `self` exceeds `other`, if any.
    pub fn stochastic_witness(&self, other: &SimpleValuation) -> Option<PointSet> {
        self.space
            .open_sets()
            .iter()
            .copied()
            .find(|&u| self.mass(u) > other.mass(u))
    }

    /// `Σ aᵢ δ_{f(xᵢ)}`.
    pub fn pushforward(&self, f: &ContinuousMap) -> Result<SimpleValuation> {
        if f.source() != &self.space {
            return Err(Error::SpaceMismatch(
                "valuation is not on the map's source".into(),
            ));
        }
        let mut out = SimpleValuation::zero(f.target());
        for (x, r) in self.terms() {
            out.coeffs[f.apply(x)] += r;
        }
        Ok(out)
    }

    /// The preimage form of the pushforward: `V ↦ ν(f⁻¹(V))`.
    pub fn pushforward_table(&self, f: &ContinuousMap) -> Result<ValuationTable> {
        if f.source() != &self.space {
            return Err(Error::SpaceMismatch(
                "valuation is not on the map's source".into(),
            ));
        }
        Ok(ValuationTable::from_fn(f.target(), |v| {
            ExtRat::Fin(self.mass(f.preimage(v)))
        }))
    }

    /// Complement of the largest null open set. For a simple valuation this
    /// is the down-closure of the carrier.
    pub fn support(&self) -> PointSet {
        support(self)
    }

    /// `Σᵢⱼ rᵢ sⱼ δ_{(xᵢ,yⱼ)}` on the product space.
    pub fn product(&self, other: &SimpleValuation) -> SimpleValuation {
        let prod = product_space(&self.space, &other.space);
        let m = other.space.len();
        let mut out = SimpleValuation::zero(&prod);
        for (x, r) in self.terms() {
            for (y, s) in other.terms() {
                out.coeffs[x * m + y] = r * s;
            }
        }
        out
    }

    pub fn to_table(&self) -> ValuationTable {
        ValuationTable::from_fn(&self.space, |u| ExtRat::Fin(self.mass(u)))
    }

    /// Reads lines `<rational> @ <point>`. Repeated points add up.
    pub fn parse(space: &FinSpace, text: &str) -> Result<SimpleValuation> {
        let mut terms = Vec::new();
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
            let Some(at) = line.find('@') else {
                return Err(perr(1, "expected '<rational> @ <point>'".into()));
            };
            let lhs = line[..at].trim();
            let rhs = line[at + 1..].trim();
            let lcol = line.len() - line.trim_start().len() + 1;
            let rcol = at + 2 + (line[at + 1..].len() - line[at + 1..].trim_start().len());
            if lhs == "inf" || lhs == "∞" {
                return Err(perr(
                    lcol,
                    "infinite coefficients are not allowed in a simple valuation".into(),
                ));
            }
            let r = parse_rational(lhs).map_err(|e| perr(lcol, e.to_string()))?;
            let x = space.index(rhs).map_err(|e| perr(rcol, e.to_string()))?;
            terms.push((r, x));
        }
        SimpleValuation::from_terms(space, terms)
    }

    /// Lines `<rational> @ <point>` sorted by point name.
    pub fn to_val_text(&self) -> String {
        let mut lines: Vec<(&str, String)> = self
            .terms()
            .map(|(x, r)| {
                (
                    self.space.name(x),
                    format!("{} @ {}\n", fmt_rational(r), self.space.name(x)),
                )
            })
            .collect();
        lines.sort();
        lines.into_iter().map(|(_, l)| l).collect()
    }
}

impl Measure for SimpleValuation {
    fn space(&self) -> &FinSpace {
        &self.space
    }

    fn measure(&self, u: PointSet) -> ExtRat {
        ExtRat::Fin(self.mass(u))
    }
}

/// Complement of the union of all null opens.
pub fn support<M: Measure + ?Sized>(m: &M) -> PointSet {
    let s = m.space();
    let null = s
        .open_sets()
        .iter()
        .filter(|&&u| m.measure(u).is_zero())
        .fold(PointSet::EMPTY, |acc, &u| acc.union(u));
    s.all().difference(null)
}

/// Projections `X × Y → X` and `X × Y → Y` for the product built by
/// [`product_space`].
pub fn projections(x: &FinSpace, y: &FinSpace) -> (ContinuousMap, ContinuousMap) {
    let prod = product_space(x, y);
    let m = y.len();
    let px = ContinuousMap::new(
        prod.clone(),
        x.clone(),
        prod.points().map(|p| p / m).collect(),
    )
    .expect("projection is monotone");
    let py = ContinuousMap::new(
        prod.clone(),
        y.clone(),
        prod.points().map(|p| p % m).collect(),
    )
    .expect("projection is monotone");
    (px, py)
}

/// Which valuation axiom a table breaks, with witness opens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Strictness { value: ExtRat },
    Monotonicity { smaller: PointSet, larger: PointSet },
    Modularity { left: PointSet, right: PointSet },
}

impl Violation {
    pub fn describe(&self, s: &FinSpace) -> String {
        match self {
            Violation::Strictness { value } => {
                format!("strictness violation: value({{}}) = {value}")
            }
            Violation::Monotonicity { smaller, larger } => format!(
                "monotonicity violation at ({{{}}},{{{}}})",
                s.format_set(*smaller),
                s.format_set(*larger)
            ),
            Violation::Modularity { left, right } => format!(
                "modularity violation at ({{{}}},{{{}}})",
                s.format_set(*left),
                s.format_set(*right)
            ),
        }
    }
}

/// A total assignment of extended rationals to the open sets of a space,
/// indexed like [`FinSpace::open_sets`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationTable {
    space: FinSpace,
    values: Vec<ExtRat>,
}

impl ValuationTable {
    pub fn from_fn(space: &FinSpace, f: impl Fn(PointSet) -> ExtRat) -> Self {
        ValuationTable {
            space: space.clone(),
            values: space.open_sets().iter().map(|&u| f(u)).collect(),
        }
    }

    /// Values listed in the order of `space.open_sets()`.
    pub fn from_values(space: &FinSpace, values: Vec<ExtRat>) -> Result<Self> {
        if values.len() != space.open_sets().len() {
            return Err(Error::Incomplete(format!(
                "{} values for {} open sets",
                values.len(),
                space.open_sets().len()
            )));
        }
        Ok(ValuationTable {
            space: space.clone(),
            values,
        })
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.values
    }

    pub fn value(&self, u: PointSet) -> Result<&ExtRat> {
        let i = self
            .space
            .open_position(u)
            .ok_or_else(|| Error::NotOpen(self.space.format_set(u)))?;
        Ok(&self.values[i])
    }

    /// Checks strictness, then monotonicity, then modularity, over all
    /// pairs of opens. Scott-continuity holds vacuously on a finite space.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let opens = self.space.open_sets();
        let empty = opens.iter().position(|u| u.is_empty()).expect("∅ is open");
        if !self.values[empty].is_zero() {
            return Err(Violation::Strictness {
                value: self.values[empty].clone(),
            });
        }
        for (i, &u) in opens.iter().enumerate() {
            for (j, &v) in opens.iter().enumerate() {
                if i != j && u.is_subset(v) && self.values[i] > self.values[j] {
                    return Err(Violation::Monotonicity {
                        smaller: u,
                        larger: v,
                    });
                }
            }
        }
        for (i, &u) in opens.iter().enumerate() {
            for (j, &v) in opens.iter().enumerate().skip(i + 1) {
                let lhs = &self.values[i] + &self.values[j];
                let union = self.value(u.union(v)).expect("union of opens is open");
                let inter = self
                    .value(u.intersection(v))
                    .expect("intersection of opens is open");
                if lhs != union + inter {
                    return Err(Violation::Modularity { left: u, right: v });
                }
            }
        }
        Ok(())
    }

    pub fn validate_report(&self) -> Result<()> {
        self.validate()
            .map_err(|v| Error::InvalidTable(v.describe(&self.space)))
    }

    /// Recovers `Σ c_x δ_x` from a valid finite table by solving
    /// `value(↑x) = Σ_{y ≥ x} c_y` from the top down, then re-evaluates the
    /// result on every open set. A negative coefficient or a mismatch is
    /// reported as non-representable.
    pub fn decompose(&self) -> Result<SimpleValuation> {
        self.validate_report()?;
        let s = &self.space;
        if let Some(i) = self.values.iter().position(ExtRat::is_infinite) {
            return Err(Error::InfiniteTable(s.format_set(s.open_sets()[i])));
        }
        let mut order: Vec<usize> = s.points().collect();
        order.sort_by_key(|&x| s.up(x).len());
        let mut coeffs = vec![Rational::zero(); s.len()];
        for x in order {
            let filter_value = self
                .value(s.up(x))?
                .finite()
                .expect("checked finite")
                .clone();
            let above: Rational = s.up(x).iter().filter(|&y| y != x).map(|y| &coeffs[y]).sum();
            let c = filter_value - above;
            if c.is_negative() {
                return Err(Error::NonRepresentable(format!(
                    "coefficient {} at point {}",
                    fmt_rational(&c),
                    s.name(x)
                )));
            }
            coeffs[x] = c;
        }
        let v = SimpleValuation::from_coeffs(s, coeffs)?;
        for (&u, val) in s.open_sets().iter().zip(&self.values) {
            if &ExtRat::Fin(v.mass(u)) != val {
                return Err(Error::NonRepresentable(format!(
                    "recovered valuation disagrees on {{{}}}",
                    s.format_set(u)
                )));
            }
        }
        Ok(v)
    }

    /// Reads lines `{p1,p2,...} = <rational|inf>`; every open set must be
    /// listed exactly once.
    pub fn parse(space: &FinSpace, text: &str) -> Result<ValuationTable> {
        let mut values: Vec<Option<ExtRat>> = vec![None; space.open_sets().len()];
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
            let open = line
                .find('{')
                .ok_or_else(|| perr(1, "expected '{'".into()))?;
            let close = line
                .find('}')
                .ok_or_else(|| perr(line.len().max(1), "expected '}'".into()))?;
            if close < open {
                return Err(perr(close + 1, "unbalanced braces".into()));
            }
            let set = space
                .parse_set(&line[open + 1..close])
                .map_err(|e| perr(open + 2, e.to_string()))?;
            let rest = &line[close + 1..];
            let eq = rest
                .find('=')
                .ok_or_else(|| perr(close + 2, "expected '='".into()))?;
            let val_text = rest[eq + 1..].trim();
            let vcol = close + eq + 3;
            let val: ExtRat = val_text
                .parse()
                .map_err(|e: Error| perr(vcol, e.to_string()))?;
            let pos = space.open_position(set).ok_or_else(|| {
                perr(
                    open + 1,
                    format!("{{{}}} is not an up-set", space.format_set(set)),
                )
            })?;
            if values[pos].is_some() {
                return Err(perr(
                    open + 1,
                    format!("{{{}}} listed twice", space.format_set(set)),
                ));
            }
            values[pos] = Some(val);
        }
        let missing: Vec<String> = values
            .iter()
            .zip(space.open_sets())
            .filter(|(v, _)| v.is_none())
            .map(|(_, &u)| format!("{{{}}}", space.format_set(u)))
            .collect();
        if !missing.is_empty() {
            return Err(Error::Incomplete(format!(
                "no value for open(s) {}",
                missing.join(" ")
            )));
        }
        ValuationTable::from_values(space, values.into_iter().flatten().collect())
    }

    pub fn to_vtab_text(&self) -> String {
        self.space
            .open_sets()
            .iter()
            .zip(&self.values)
            .map(|(&u, v)| format!("{{{}}} = {}\n", self.space.format_set(u), v))
            .collect()
    }
}

impl Measure for ValuationTable {
    fn space(&self) -> &FinSpace {
        &self.space
    }

    fn measure(&self, u: PointSet) -> ExtRat {
        self.value(u)
            .cloned()
            .unwrap_or_else(|_| panic!("measure of a non-open set"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::rat;
    use crate::space::load_space;

    fn s2() -> FinSpace {
        load_space("point bot; point top; le bot top").unwrap()
    }

    fn d2() -> FinSpace {
        FinSpace::discrete(&["a", "b"]).unwrap()
    }

    fn diamond() -> FinSpace {
        load_space("point 0; point a; point b; point 1; le 0 a; le 0 b; le a 1; le b 1").unwrap()
    }

    fn q(n: i64, d: i64) -> ExtRat {
        ExtRat::from_ratio(n, d)
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

    #[test]
    fn dirac_masses() {
        let s = s2();
        let top = SimpleValuation::dirac_named(&s, "top").unwrap();
        let bot = SimpleValuation::dirac_named(&s, "bot").unwrap();
        let u = s.parse_set("top").unwrap();
        assert_eq!(top.eval(u).unwrap(), ExtRat::one());
        assert_eq!(bot.eval(u).unwrap(), ExtRat::zero());
        let d = d2();
        let a = SimpleValuation::dirac_named(&d, "a").unwrap();
        assert_eq!(a.eval(d.all()).unwrap(), ExtRat::one());
        assert!(SimpleValuation::dirac_named(&d, "c").is_err());
    }

    #[test]
    fn evaluation() {
        let d = d2();
        let v = val(&d, &[(1, 3, "a"), (1, 2, "b")]);
        assert_eq!(v.eval(d.parse_set("a").unwrap()).unwrap(), q(1, 3));
        assert_eq!(v.eval(PointSet::EMPTY).unwrap(), ExtRat::zero());
        let s = s2();
        let w = val(&s, &[(1, 2, "bot"), (1, 2, "top")]);
        assert_eq!(w.eval(s.parse_set("top").unwrap()).unwrap(), q(1, 2));
        assert!(matches!(
            w.eval(s.parse_set("bot").unwrap()),
            Err(Error::NotOpen(_))
        ));
    }

    #[test]
    fn table_validation() {
        let d = d2();
        let v = val(&d, &[(1, 3, "a"), (1, 2, "b")]);
        assert_eq!(v.to_table().validate(), Ok(()));
        // opens of D2 in order: {}, {a}, {b}, {a,b}
        let bad =
            ValuationTable::from_values(&d, vec![q(0, 1), q(1, 1), q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(
            bad.validate(),
            Err(Violation::Modularity {
                left: d.parse_set("a").unwrap(),
                right: d.parse_set("b").unwrap()
            })
        );
        assert_eq!(
            bad.validate_report().unwrap_err().to_string(),
            "invalid valuation table: modularity violation at ({a},{b})"
        );
        let strict =
            ValuationTable::from_values(&d, vec![q(1, 1), q(1, 1), q(1, 1), q(1, 1)]).unwrap();
        assert!(matches!(
            strict.validate(),
            Err(Violation::Strictness { .. })
        ));
        let mono =
            ValuationTable::from_values(&d, vec![q(0, 1), q(2, 1), q(0, 1), q(1, 1)]).unwrap();
        assert!(matches!(
            mono.validate(),
            Err(Violation::Monotonicity { .. })
        ));
    }

    #[test]
    fn decomposition() {
        let d = d2();
        let t = ValuationTable::from_values(&d, vec![q(0, 1), q(1, 3), q(1, 2), q(5, 6)]).unwrap();
        let v = t.decompose().unwrap();
        assert_eq!(v, val(&d, &[(1, 3, "a"), (1, 2, "b")]));
        for &u in d.open_sets() {
            assert_eq!(&v.eval(u).unwrap(), t.value(u).unwrap());
        }
        let s = s2();
        // opens: {}, {top}, {bot,top}
        let t = ValuationTable::from_values(&s, vec![q(0, 1), q(1, 2), q(1, 1)]).unwrap();
        assert_eq!(
            t.decompose().unwrap(),
            val(&s, &[(1, 2, "top"), (1, 2, "bot")])
        );
        for x in s.points() {
            let dx = SimpleValuation::dirac(&s, x).unwrap();
            assert_eq!(dx.to_table().decompose().unwrap(), dx);
        }
        let inf = ValuationTable::from_values(&s, vec![q(0, 1), ExtRat::Inf, ExtRat::Inf]).unwrap();
        assert!(matches!(inf.decompose(), Err(Error::InfiniteTable(_))));
    }

    #[test]
    fn stochastic_order() {
        let s = s2();
        let lo = val(&s, &[(1, 2, "bot")]);
        let hi = val(&s, &[(1, 2, "top")]);
        assert!(lo.stochastic_le(&hi).unwrap());
        assert!(!hi.stochastic_le(&lo).unwrap());
        let top = SimpleValuation::dirac_named(&s, "top").unwrap();
        let bot = SimpleValuation::dirac_named(&s, "bot").unwrap();
        assert!(!top.stochastic_le(&bot).unwrap());
        assert_eq!(
            top.stochastic_witness(&bot),
            Some(s.parse_set("top").unwrap())
        );
        assert!(lo.stochastic_le(&lo).unwrap());
        assert!(lo.stochastic_le(&SimpleValuation::zero(&d2())).is_err());
    }

    #[test]
    fn linear_combinations() {
        let d = d2();
        let a = val(&d, &[(1, 3, "a")]);
        let b = val(&d, &[(1, 2, "b")]);
        assert_eq!(a.add(&b).unwrap(), val(&d, &[(1, 3, "a"), (1, 2, "b")]));
        assert!(a.scale(&rat(0, 1)).unwrap().is_zero());
        let s = s2();
        assert_eq!(
            val(&s, &[(1, 2, "top")]).scale(&rat(2, 1)).unwrap(),
            SimpleValuation::dirac_named(&s, "top").unwrap()
        );
        assert!(a.scale(&rat(-1, 1)).is_err());
    }

    #[test]
    fn pushforwards() {
        let d = d2();
        let s = s2();
        let f = ContinuousMap::new(d.clone(), s.clone(), vec![1, 0]).unwrap();
        let nu = val(&d, &[(1, 3, "a"), (1, 2, "b")]);
        let pushed = nu.pushforward(&f).unwrap();
        assert_eq!(pushed, val(&s, &[(1, 3, "top"), (1, 2, "bot")]));
        assert_eq!(pushed.to_table(), nu.pushforward_table(&f).unwrap());
        assert_eq!(nu.pushforward(&ContinuousMap::identity(&d)).unwrap(), nu);
        let c = ContinuousMap::constant(&d, &s, 1);
        let expected = ValuationTable::from_fn(&s, |v| {
            ExtRat::Fin(
                d.open_sets()
                    .iter()
                    .find(|&&u| u == c.preimage(v))
                    .map(|&u| nu.mass(u))
                    .unwrap(),
            )
        });
        assert_eq!(nu.pushforward(&c).unwrap().to_table(), expected);
        assert_eq!(nu.pushforward(&c).unwrap(), val(&s, &[(5, 6, "top")]));
    }

    #[test]
    fn supports() {
        let m = diamond();
        let v = val(&m, &[(1, 2, "a"), (1, 4, "b")]);
        // oracle: enumerate opens, take the largest null one
        let largest_null = m
            .open_sets()
            .iter()
            .filter(|&&u| v.mass(u).is_zero())
            .max_by_key(|u| u.len())
            .copied()
            .unwrap();
        assert_eq!(largest_null, m.parse_set("1").unwrap());
        assert_eq!(v.support(), m.parse_set("0,a,b").unwrap());
        assert_eq!(v.support(), m.down_closure(v.carrier()));
        assert!(SimpleValuation::zero(&m).support().is_empty());
        let s = s2();
        let top = SimpleValuation::dirac_named(&s, "top").unwrap();
        assert_eq!(top.support(), s.all());
        assert_eq!(support(&top.to_table()), s.all());
    }

    #[test]
    fn products() {
        let s = s2();
        let d = FinSpace::discrete(&["a"]).unwrap();
        let mu = val(&s, &[(1, 2, "bot"), (1, 2, "top")]);
        let nu = val(&d, &[(1, 3, "a")]);
        let p = mu.product(&nu);
        let ps = p.space().clone();
        assert_eq!(
            p,
            SimpleValuation::from_terms(
                &ps,
                [
                    (rat(1, 6), ps.index("(bot,a)").unwrap()),
                    (rat(1, 6), ps.index("(top,a)").unwrap())
                ]
            )
            .unwrap()
        );
        let (px, py) = projections(&s, &d);
        assert_eq!(
            p.pushforward(&px).unwrap(),
            mu.scale(&nu.total_mass()).unwrap()
        );
        assert_eq!(
            p.pushforward(&py).unwrap(),
            nu.scale(&mu.total_mass()).unwrap()
        );
        let dx = SimpleValuation::dirac_named(&s, "top").unwrap();
        let dy = SimpleValuation::dirac_named(&d, "a").unwrap();
        assert_eq!(
            dx.product(&dy),
            SimpleValuation::dirac_named(&ps, "(top,a)").unwrap()
        );
        assert!(SimpleValuation::zero(&s).product(&nu).is_zero());
    }

    #[test]
    fn file_formats() {
        let d = d2();
        let v = SimpleValuation::parse(&d, "# nu\n1/2 @ b\n1/3 @ a\n1/6 @ a\n").unwrap();
        assert_eq!(v, val(&d, &[(1, 2, "a"), (1, 2, "b")]));
        assert_eq!(v.to_val_text(), "1/2 @ a\n1/2 @ b\n");
        assert!(matches!(
            SimpleValuation::parse(&d, "inf @ a"),
            Err(Error::Parse {
                line: 1,
                col: 1,
                ..
            })
        ));
        assert!(matches!(
            SimpleValuation::parse(&d, "1 @ c"),
            Err(Error::Parse {
                line: 1,
                col: 5,
                ..
            })
        ));
        let t = ValuationTable::parse(&d, "{} = 0\n{a} = 1/3\n{b} = inf\n{a,b} = inf\n").unwrap();
        assert_eq!(t.value(d.parse_set("b").unwrap()).unwrap(), &ExtRat::Inf);
        assert_eq!(ValuationTable::parse(&d, &t.to_vtab_text()).unwrap(), t);
        assert!(matches!(
            ValuationTable::parse(&d, "{} = 0\n"),
            Err(Error::Incomplete(_))
        ));
        let s = s2();
        assert!(matches!(
            ValuationTable::parse(&s, "{bot} = 0"),
            Err(Error::Parse { .. })
        ));
    }
}
