//! Choquet integration of lower semicontinuous functions.
//!
//! On a finite space a lower semicontinuous map into the extended rationals is
//! just a monotone one, and `r ↦ ν(h⁻¹(r, ∞])` is a step function, so the
//! layer-cake integral is a finite sum.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ext::{ExtRat, Rational};
use crate::space::{arrow_lines, collect_total, product_space, ContinuousMap, FinSpace, PointSet};
use crate::valuation::{Measure, SimpleValuation, ValuationTable, Violation};

/// A monotone function from a finite space into the extended rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LscFun {
    space: FinSpace,
    values: Vec<ExtRat>,
}

impl LscFun {
    pub fn new(space: &FinSpace, values: Vec<ExtRat>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::SpaceMismatch(format!(
                "{} values for {} points",
                values.len(),
                space.len()
            )));
        }
        for (x, y) in space.strict_pairs() {
            if values[x] > values[y] {
                return Err(Error::NonMonotone {
                    what: "function".into(),
                    lo: space.name(x).into(),
                    hi: space.name(y).into(),
                });
            }
        }
        Ok(LscFun {
            space: space.clone(),
            values,
        })
    }

    pub fn from_fn(space: &FinSpace, f: impl Fn(usize) -> ExtRat) -> Result<Self> {
        Self::new(space, space.points().map(f).collect())
    }

    /// The characteristic function of an open set.
    pub fn chi(space: &FinSpace, u: PointSet) -> Result<Self> {
        space.check_open(u)?;
        Ok(LscFun {
            space: space.clone(),
            values: space
                .points()
                .map(|x| {
                    if u.contains(x) {
                        ExtRat::one()
                    } else {
                        ExtRat::zero()
                    }
                })
                .collect(),
        })
    }

    pub fn constant(space: &FinSpace, c: ExtRat) -> Self {
        LscFun {
            space: space.clone(),
            values: vec![c; space.len()],
        }
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn at(&self, x: usize) -> &ExtRat {
        &self.values[x]
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.values
    }

    /// `{x : h(x) >= v}`, open because `h` is monotone.
    pub fn at_least(&self, v: &ExtRat) -> PointSet {
        self.space
            .points()
            .filter(|&x| &self.values[x] >= v)
            .collect()
    }

    /// `r·h + s·k`.
    pub fn combine(&self, r: &Rational, other: &LscFun, s: &Rational) -> Result<LscFun> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(
                "functions live on different spaces".into(),
            ));
        }
        Ok(LscFun {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.scale(r) + b.scale(s))
                .collect(),
        })
    }

    /// `self ∘ f`.
    pub fn precompose(&self, f: &ContinuousMap) -> Result<LscFun> {
        if f.target() != &self.space {
            return Err(Error::SpaceMismatch(
                "function is not on the map's target".into(),
            ));
        }
        Ok(LscFun {
            space: f.source().clone(),
            values: f
                .source()
                .points()
                .map(|x| self.values[f.apply(x)].clone())
                .collect(),
        })
    }

    /// Reads lines `<point> -> <rational|inf>` and checks monotonicity.
    pub fn parse(space: &FinSpace, text: &str) -> Result<LscFun> {
        let mut vals = vec![None; space.len()];
        for (line, lhs, rhs, col) in arrow_lines(text)? {
            let x = space.index(lhs).map_err(|e| Error::Parse {
                line,
                col: 1,
                msg: e.to_string(),
            })?;
            let v: ExtRat = rhs.parse().map_err(|e: Error| Error::Parse {
                line,
                col,
                msg: e.to_string(),
            })?;
            vals[x] = Some(v);
        }
        LscFun::new(space, collect_total(space, vals)?)
    }

    pub fn to_fun_text(&self) -> String {
        self.space
            .points()
            .map(|x| format!("{} -> {}\n", self.space.name(x), self.values[x]))
            .collect()
    }
}

fn same_space(h: &LscFun, s: &FinSpace) -> Result<()> {
    if &h.space == s {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(
            "function and valuation live on different spaces".into(),
        ))
    }
}

/// Layer-cake integral `∫₀^∞ ν(h⁻¹(r, ∞]) dr` over the distinct finite values
/// `0 = v₀ < v₁ < … < v_k` of `h`, plus an infinite contribution when
/// `{h = ∞}` has positive mass.
pub fn integrate<M: Measure + ?Sized>(h: &LscFun, nu: &M) -> Result<ExtRat> {
    same_space(h, nu.space())?;
    let mut levels: Vec<&Rational> = h.values.iter().filter_map(ExtRat::finite).collect();
    levels.sort();
    levels.dedup();
    let mut total = ExtRat::zero();
    let mut prev = Rational::zero();
    for v in levels {
        if v.is_zero() {
            continue;
        }
        let width = v - &prev;
        let layer = nu.measure(h.at_least(&ExtRat::Fin(v.clone())));
        total += &layer.scale(&width);
        prev = v.clone();
    }
    let top = h.at_least(&ExtRat::Inf);
    if !nu.measure(top).is_zero() {
        total = ExtRat::Inf;
    }
    Ok(total)
}

/// `Σ rᵢ h(xᵢ)` for a simple valuation.
pub fn integrate_simple(h: &LscFun, nu: &SimpleValuation) -> Result<ExtRat> {
    same_space(h, nu.space())?;
    Ok(nu.terms().map(|(x, r)| h.values[x].scale(r)).sum())
}

/// The `N`-th dyadic step approximation `min(⌊h·2^N⌋/2^N, N)`, which equals
/// `2^{-N} Σ_{k=1}^{N·2^N} χ_{h ≥ k/2^N}`.
pub fn step_approx(h: &LscFun, n: u32) -> LscFun {
    let scale = Rational::from_integer(BigInt::one() << n);
    let cap = Rational::from_integer(BigInt::from(n));
    let values = h
        .values
        .iter()
        .map(|v| match v {
            ExtRat::Inf => ExtRat::Fin(cap.clone()),
            ExtRat::Fin(r) => {
                let floor = (r * &scale).floor() / &scale;
                ExtRat::Fin(floor.min(cap.clone()))
            }
        })
        .collect();
    LscFun {
        space: h.space.clone(),
        values,
    }
}

/// The table `U ↦ φ(χ_U)` together with the outcome of validating it.
pub fn valuation_from_functional<F>(
    phi: F,
    s: &FinSpace,
) -> (ValuationTable, std::result::Result<(), Violation>)
where
    F: Fn(&LscFun) -> ExtRat,
{
    let table = ValuationTable::from_fn(s, |u| {
        phi(&LscFun::chi(s, u).expect("opens come from the space"))
    });
    let check = table.validate();
    (table, check)
}

/// First witness `(h, k, r, s)` among the samples with
/// `φ(r·h + s·k) ≠ r·φ(h) + s·φ(k)`.
pub fn linearity_witness<F>(
    phi: F,
    samples: &[LscFun],
    scalars: &[Rational],
) -> Option<(usize, usize, Rational, Rational)>
where
    F: Fn(&LscFun) -> ExtRat,
{
    for (i, h) in samples.iter().enumerate() {
        for (j, k) in samples.iter().enumerate() {
            for r in scalars {
                for s in scalars {
                    let combo = h.combine(r, k, s).ok()?;
                    if phi(&combo) != phi(h).scale(r) + phi(k).scale(s) {
                        return Some((i, j, r.clone(), s.clone()));
                    }
                }
            }
        }
    }
    None
}

/// Recovers `h(x) = Λ(δ_x)` from a functional on simple valuations.
pub fn ss_recover<F>(lambda: F, s: &FinSpace) -> Result<LscFun>
where
    F: Fn(&SimpleValuation) -> ExtRat,
{
    let values = s
        .points()
        .map(|x| lambda(&SimpleValuation::dirac(s, x).expect("point of s")))
        .collect();
    LscFun::new(s, values)
}

/// Membership of `ν` in the subbasic weak-topology set `[h > r]`.
pub fn in_subbasic<M: Measure + ?Sized>(nu: &M, h: &LscFun, r: &Rational) -> Result<bool> {
    Ok(integrate(h, nu)? > ExtRat::Fin(r.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FubiniReport {
    /// `∫_x ∫_y f dν dμ`
    pub inner_y_first: ExtRat,
    /// `∫ f d(μ × ν)`
    pub product: ExtRat,
    /// `∫_y ∫_x f dμ dν`
    pub inner_x_first: ExtRat,
}

impl FubiniReport {
    pub fn agrees(&self) -> bool {
        self.inner_y_first == self.product && self.product == self.inner_x_first
    }
}

/// Computes the two iterated integrals and the product integral of a
/// monotone `f` on `X × Y`. The partial integrals must themselves be
/// monotone; a failure there is returned as an error.
pub fn check_fubini(
    f: &LscFun,
    mu: &SimpleValuation,
    nu: &SimpleValuation,
) -> Result<FubiniReport> {
    let (x, y) = (mu.space(), nu.space());
    let prod = product_space(x, y);
    same_space(f, &prod)?;
    let m = y.len();
    let section_x =
        |a: usize| LscFun::new(y, (0..m).map(|b| f.values[a * m + b].clone()).collect());
    let section_y =
        |b: usize| LscFun::new(x, x.points().map(|a| f.values[a * m + b].clone()).collect());
    let outer_x = x
        .points()
        .map(|a| integrate(&section_x(a)?, nu))
        .collect::<Result<Vec<_>>>()?;
    let outer_y = y
        .points()
        .map(|b| integrate(&section_y(b)?, mu))
        .collect::<Result<Vec<_>>>()?;
    Ok(FubiniReport {
        inner_y_first: integrate(&LscFun::new(x, outer_x)?, mu)?,
        product: integrate(f, &mu.product(nu))?,
        inner_x_first: integrate(&LscFun::new(y, outer_y)?, nu)?,
    })
}
