//! Barycentres and algebras of the valuation monad.

use crate::cone::{convex_t0_check, dual_cone, Cone, LatticeCone, LatticeMap, LinearFunctional};
use crate::error::{Error, Result};
use crate::ext::{rat, ExtRat, Rational};
use crate::integral::{integrate, LscFun};
use crate::monad::{multiply, LawTally, MetaValuation};
use crate::space::{ContinuousMap, FinLattice, FinSpace, PointSet};
use crate::valuation::{Measure, SimpleValuation};

fn same_space(nu: &SimpleValuation, cone: &LatticeCone) -> Result<()> {
    if nu.space() != cone.space() {
        return Err(Error::SpaceMismatch(
            "valuation does not live on the cone carrier".into(),
        ));
    }
    Ok(())
}

/// All `b` with `Λ(b) = ∫ Λ dν` for every `Λ` in `dual`.
pub fn barycentre_search_with(
    nu: &SimpleValuation,
    cone: &LatticeCone,
    dual: &[LinearFunctional],
) -> Result<Vec<usize>> {
    same_space(nu, cone)?;
    let l = cone.lattice();
    let integrals = dual
        .iter()
        .map(|f| integrate(&f.as_function(l)?, nu))
        .collect::<Result<Vec<ExtRat>>>()?;
    Ok(cone
        .elements()
        .filter(|&b| dual.iter().zip(&integrals).all(|(f, i)| f.apply(b) == i))
        .collect())
}

/// Barycentres of `ν` against the full dual cone.
pub fn barycentre_search(nu: &SimpleValuation, cone: &LatticeCone) -> Result<Vec<usize>> {
    barycentre_search_with(nu, cone, &dual_cone(cone))
}

/// `⋁ supp ν`.
pub fn lattice_barycentre(nu: &SimpleValuation, cone: &LatticeCone) -> Result<usize> {
    same_space(nu, cone)?;
    Ok(cone.lattice().join_all(nu.support()))
}

/// `Σ rᵢ·xᵢ` computed with the cone operations.
pub fn standard_barycentre<C: Cone>(cone: &C, terms: &[(Rational, C::Elem)]) -> C::Elem {
    cone.combination(terms.iter().map(|(r, x)| (r, x)))
}

/// The standard barycentre of a simple valuation on a lattice cone carrier.
pub fn standard_lattice_barycentre(nu: &SimpleValuation, cone: &LatticeCone) -> Result<usize> {
    same_space(nu, cone)?;
    let terms: Vec<(Rational, usize)> = nu.terms().map(|(x, r)| (r.clone(), x)).collect();
    Ok(standard_barycentre(cone, &terms))
}

/// `x ↦ Σ Rⱼ fⱼ(x)` for `ν = Σ Rⱼ δ_{fⱼ}`.
pub fn funspace_barycentre(terms: &[(Rational, LscFun)], space: &FinSpace) -> Result<LscFun> {
    if terms.iter().any(|(_, f)| f.space() != space) {
        return Err(Error::SpaceMismatch(
            "functions live on different spaces".into(),
        ));
    }
    LscFun::from_fn(space, |x| terms.iter().map(|(r, f)| f.at(x).scale(r)).sum())
}

/// The barycentre equation `∫ b dμ = Σ Rⱼ ∫ fⱼ dμ` for each functional
/// `f ↦ ∫ f dμ`; returns the first `μ` where it fails.
pub fn funspace_barycentre_failure<'a>(
    terms: &[(Rational, LscFun)],
    b: &LscFun,
    mus: &'a [SimpleValuation],
) -> Result<Option<&'a SimpleValuation>> {
    for mu in mus {
        let lhs = integrate(b, mu)?;
        let mut rhs = ExtRat::zero();
        for (r, f) in terms {
            rhs += &integrate(f, mu)?.scale(r);
        }
        if lhs != rhs {
            return Ok(Some(mu));
        }
    }
    Ok(None)
}

/// A structure map `α: V(C) → C` on a lattice cone.
pub struct AlgebraMap<'a> {
    cone: LatticeCone,
    alpha: Box<dyn Fn(&SimpleValuation) -> usize + 'a>,
}

impl<'a> AlgebraMap<'a> {
    pub fn new(cone: &LatticeCone, alpha: impl Fn(&SimpleValuation) -> usize + 'a) -> Self {
        AlgebraMap {
            cone: cone.clone(),
            alpha: Box::new(alpha),
        }
    }

    /// `β(ν) = ⋁ supp ν`.
    pub fn beta(cone: &LatticeCone) -> AlgebraMap<'static> {
        let l = cone.lattice().clone();
        AlgebraMap {
            cone: cone.clone(),
            alpha: Box::new(move |nu| l.join_all(nu.support())),
        }
    }

    pub fn cone(&self) -> &LatticeCone {
        &self.cone
    }

    pub fn apply(&self, nu: &SimpleValuation) -> usize {
        (self.alpha)(nu)
    }

    /// `V(α)(ϖ) = Σ Rⱼ δ_{α(νⱼ)}`.
    pub fn push_meta(&self, w: &MetaValuation) -> Result<SimpleValuation> {
        SimpleValuation::from_terms(
            self.cone.space(),
            w.terms().iter().map(|(r, v)| (r.clone(), self.apply(v))),
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct AlgebraReport {
    /// `α(δ_x) = x`, one entry per carrier point.
    pub unit: LawTally<usize>,
    /// `α(m(ϖ)) = α(V(α)(ϖ))`.
    pub multiplication: LawTally<MetaValuation>,
}

impl AlgebraReport {
    pub fn failures(&self) -> u64 {
        self.unit.failed + self.multiplication.failed
    }
}

pub fn check_algebra_laws(alpha: &AlgebraMap, metas: &[MetaValuation]) -> Result<AlgebraReport> {
    let mut report = AlgebraReport::default();
    let s = alpha.cone().space();
    for x in s.points() {
        let ok = alpha.apply(&SimpleValuation::dirac(s, x)?) == x;
        report.unit.record(ok, || x);
    }
    for w in metas {
        if w.space() != s {
            return Err(Error::SpaceMismatch(
                "meta-valuation is not over the cone carrier".into(),
            ));
        }
        let ok = alpha.apply(&multiply(w)) == alpha.apply(&alpha.push_meta(w)?);
        report.multiplication.record(ok, || w.clone());
    }
    Ok(report)
}

/// The cone operations recovered from a structure map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedCone {
    /// `add[x][y] = α(δ_x + δ_y)`.
    pub add: Vec<Vec<usize>>,
    /// `(r, [α(r·δ_x) for x])`.
    pub scale: Vec<(Rational, Vec<usize>)>,
    pub zero: usize,
    /// First disagreement with the original cone, if any.
    pub mismatch: Option<String>,
}

pub fn induced_cone(alpha: &AlgebraMap, scalars: &[Rational]) -> Result<InducedCone> {
    let cone = alpha.cone();
    let s = cone.space();
    let one = rat(1, 1);
    let mut mismatch = None;
    let mut add = Vec::with_capacity(cone.len());
    for x in cone.elements() {
        let mut row = Vec::with_capacity(cone.len());
        for y in cone.elements() {
            let v = SimpleValuation::from_terms(s, [(one.clone(), x), (one.clone(), y)])?;
            let z = alpha.apply(&v);
            if z != cone.add(&x, &y) && mismatch.is_none() {
                mismatch = Some(format!(
                    "{} + {}: induced {}, cone {}",
                    s.name(x),
                    s.name(y),
                    s.name(z),
                    s.name(cone.add(&x, &y))
                ));
            }
            row.push(z);
        }
        add.push(row);
    }
    let mut scale = Vec::with_capacity(scalars.len());
    for r in scalars {
        let mut row = Vec::with_capacity(cone.len());
        for x in cone.elements() {
            let z = alpha.apply(&SimpleValuation::from_terms(s, [(r.clone(), x)])?);
            if z != cone.scale(r, &x) && mismatch.is_none() {
                mismatch = Some(format!(
                    "{r}·{}: induced {}, cone {}",
                    s.name(x),
                    s.name(z),
                    s.name(cone.scale(r, &x))
                ));
            }
            row.push(z);
        }
        scale.push((r.clone(), row));
    }
    let zero = alpha.apply(&SimpleValuation::zero(s));
    if zero != cone.zero() && mismatch.is_none() {
        mismatch = Some(format!(
            "zero: induced {}, cone {}",
            s.name(zero),
            s.name(cone.zero())
        ));
    }
    Ok(InducedCone {
        add,
        scale,
        zero,
        mismatch,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismVerdict {
    pub linear: bool,
    pub morphism: bool,
    /// A valuation on which `f∘β ≠ β∘V(f)`.
    pub square_failure: Option<SimpleValuation>,
}

impl MorphismVerdict {
    pub fn agree(&self) -> bool {
        self.linear == self.morphism
    }
}

/// Compares linearity of `f` with the morphism square `f∘β = β∘V(f)` on the
/// given valuations over the source carrier.
pub fn morphism_iff_linear(f: &LatticeMap, samples: &[SimpleValuation]) -> Result<MorphismVerdict> {
    if !f.is_monotone() {
        return Err(Error::NonMonotone {
            what: "map".into(),
            lo: String::new(),
            hi: String::new(),
        });
    }
    let (ok, _) = convex_t0_check(&f.target);
    assert!(ok, "finite lattice cones are convex-T0");
    let map = ContinuousMap::new(
        f.source.space().clone(),
        f.target.space().clone(),
        f.graph.clone(),
    )?;
    let mut square_failure = None;
    for nu in samples {
        let lhs = f.apply(lattice_barycentre(nu, &f.source)?);
        let rhs = lattice_barycentre(&nu.pushforward(&map)?, &f.target)?;
        if lhs != rhs {
            square_failure = Some(nu.clone());
            break;
        }
    }
    Ok(MorphismVerdict {
        linear: f.is_linear(),
        morphism: square_failure.is_none(),
        square_failure,
    })
}

/// The linear extension `Σ rᵢ δ_{xᵢ} ↦ Σ rᵢ·f(xᵢ)` of a monotone map from
/// a finite space into a cone.
#[derive(Clone, Debug)]
pub struct LinearExtension<C: Cone> {
    space: FinSpace,
    cone: C,
    graph: Vec<C::Elem>,
}

impl<C: Cone + Clone> LinearExtension<C> {
    pub fn new(space: &FinSpace, cone: &C, graph: Vec<C::Elem>) -> Result<Self> {
        if graph.len() != space.len() {
            return Err(Error::Incomplete(
                "map graph does not cover the space".into(),
            ));
        }
        if let Some((x, y)) = space
            .strict_pairs()
            .find(|&(x, y)| !cone.le(&graph[x], &graph[y]))
        {
            return Err(Error::NonMonotone {
                what: "map".into(),
                lo: space.name(x).into(),
                hi: space.name(y).into(),
            });
        }
        Ok(LinearExtension {
            space: space.clone(),
            cone: cone.clone(),
            graph,
        })
    }

    pub fn apply(&self, nu: &SimpleValuation) -> Result<C::Elem> {
        if nu.space() != &self.space {
            return Err(Error::SpaceMismatch(
                "valuation is not on the domain".into(),
            ));
        }
        let terms: Vec<(Rational, C::Elem)> = nu
            .terms()
            .map(|(x, r)| (r.clone(), self.graph[x].clone()))
            .collect();
        Ok(standard_barycentre(&self.cone, &terms))
    }

    /// `f̄(δ_x) = f(x)` for every point.
    pub fn restricts_to_map(&self) -> Result<bool> {
        for x in self.space.points() {
            if self.apply(&SimpleValuation::dirac(&self.space, x)?)? != self.graph[x] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// First sample on which two maps on valuations differ.
pub fn first_disagreement<'a, E: PartialEq>(
    samples: &'a [SimpleValuation],
    f: impl Fn(&SimpleValuation) -> Result<E>,
    g: impl Fn(&SimpleValuation) -> Result<E>,
) -> Result<Option<&'a SimpleValuation>> {
    for nu in samples {
        if f(nu)? != g(nu)? {
            return Ok(Some(nu));
        }
    }
    Ok(None)
}

/// For `U = C∖↓x₀`: whether `β(ν) ∈ U`, checked against `ν(U) > 0`.
pub fn beta_halfspace_equiv(nu: &SimpleValuation, u: PointSet, cone: &LatticeCone) -> Result<bool> {
    same_space(nu, cone)?;
    let s = cone.space();
    if !cone
        .elements()
        .any(|x0| s.all().difference(s.down(x0)) == u)
    {
        return Err(Error::Precondition(format!(
            "{{{}}} is not the complement of a principal down-set",
            s.format_set(u)
        )));
    }
    let inside = u.contains(lattice_barycentre(nu, cone)?);
    let charged = !nu.measure(u).is_zero();
    assert_eq!(inside, charged, "β(ν) ∈ U disagrees with ν(U) > 0");
    Ok(inside)
}

/// `↑x ∩ ↑y` is open for all `x, y`.
pub fn is_weakly_hausdorff(l: &FinLattice) -> bool {
    let s = l.space();
    s.points()
        .all(|x| s.points().all(|y| s.is_open(s.up(x).intersection(s.up(y)))))
}

/// `x ≤ x'` and `y ≤ y'` imply `x ∨ y ≤ x' ∨ y'`.
pub fn join_is_monotone(l: &FinLattice) -> bool {
    let s = l.space();
    s.points().all(|x| {
        s.points().all(|y| {
            s.up(x)
                .iter()
                .all(|x2| s.up(y).iter().all(|y2| l.le(l.join(x, y), l.join(x2, y2))))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ExtRatCone;
    use crate::space::{check_lattice, load_space};

    fn diamond() -> LatticeCone {
        let s = load_space("point 0; point a; point b; point 1; le 0 a; le 0 b; le a 1; le b 1")
            .unwrap();
        LatticeCone::new(check_lattice(&s).unwrap())
    }

    fn val(c: &LatticeCone, text: &str) -> SimpleValuation {
        SimpleValuation::parse(c.space(), text).unwrap()
    }

    #[test]
    fn lattice_barycentres() {
        let m = diamond();
        let nu = val(&m, "1/2 @ a\n1/4 @ b");
        assert_eq!(barycentre_search(&nu, &m).unwrap(), vec![3]);
        assert_eq!(lattice_barycentre(&nu, &m).unwrap(), 3);
        assert_eq!(standard_lattice_barycentre(&nu, &m).unwrap(), 3);
        for x in m.elements() {
            let d = SimpleValuation::dirac(m.space(), x).unwrap();
            assert_eq!(barycentre_search(&d, &m).unwrap(), vec![x]);
        }
        let zero = SimpleValuation::zero(m.space());
        assert_eq!(barycentre_search(&zero, &m).unwrap(), vec![0]);
        assert_eq!(lattice_barycentre(&val(&m, "1/3 @ 0"), &m).unwrap(), 0);
    }

    #[test]
    fn extended_real_barycentres() {
        let terms = vec![(rat(1, 2), ExtRat::from(2)), (rat(1, 4), ExtRat::from(4))];
        assert_eq!(standard_barycentre(&ExtRatCone, &terms), ExtRat::from(2));
        assert_eq!(
            standard_barycentre(&ExtRatCone, &[(rat(1, 1), ExtRat::Inf)]),
            ExtRat::Inf
        );
    }

    #[test]
    fn function_space_barycentre() {
        let s = load_space("point bot; point top; le bot top").unwrap();
        let cu = LscFun::chi(&s, s.parse_set("top").unwrap()).unwrap();
        let cv = LscFun::chi(&s, s.all()).unwrap();
        let terms = vec![(rat(1, 2), cu.clone()), (rat(1, 2), cv)];
        let b = funspace_barycentre(&terms, &s).unwrap();
        assert_eq!(b.values(), &[ExtRat::from_ratio(1, 2), ExtRat::one()]);
        assert_eq!(
            funspace_barycentre(&[(rat(1, 1), cu.clone())], &s).unwrap(),
            cu
        );
        let mus = crate::enumerate::grid_valuations(&s, &[rat(0, 1), rat(1, 4), rat(1, 1)]);
        assert_eq!(funspace_barycentre_failure(&terms, &b, &mus).unwrap(), None);
        assert!(funspace_barycentre_failure(&terms, &cu, &mus)
            .unwrap()
            .is_some());
    }

    #[test]
    fn algebra_laws_for_beta() {
        let m = diamond();
        let beta = AlgebraMap::beta(&m);
        let da = SimpleValuation::dirac(m.space(), 1).unwrap();
        let db = SimpleValuation::dirac(m.space(), 2).unwrap();
        let w =
            MetaValuation::new(m.space(), vec![(rat(1, 2), da.clone()), (rat(1, 2), db)]).unwrap();
        let nu = val(&m, "1/2 @ a\n1/4 @ b");
        let report = check_algebra_laws(&beta, &[w.clone(), MetaValuation::dirac(&nu)]).unwrap();
        assert_eq!(report.failures(), 0);
        assert_eq!(beta.apply(&multiply(&w)), 3);
        // a structure map ignoring its argument breaks the unit law
        let bad = AlgebraMap::new(&m, |_| 3);
        assert_eq!(check_algebra_laws(&bad, &[]).unwrap().unit.failed, 3);
    }

    #[test]
    fn induced_operations() {
        let m = diamond();
        let ind = induced_cone(&AlgebraMap::beta(&m), &[rat(0, 1), rat(1, 2), rat(2, 1)]).unwrap();
        assert_eq!(ind.mismatch, None);
        assert_eq!(ind.add[1][2], 3);
        assert_eq!(ind.scale[1].1[1], 1);
        assert_eq!(ind.zero, 0);
        let bad = AlgebraMap::new(&m, |nu: &SimpleValuation| if nu.is_zero() { 3 } else { 0 });
        assert!(induced_cone(&bad, &[rat(1, 2)]).unwrap().mismatch.is_some());
    }

    #[test]
    fn morphisms_are_linear_maps() {
        let m = diamond();
        let c2 = LatticeCone::new(check_lattice(&FinSpace::chain(&["lo", "hi"]).unwrap()).unwrap());
        let samples =
            crate::enumerate::grid_valuations(m.space(), &[rat(0, 1), rat(1, 4), rat(1, 1)]);
        let f = LatticeMap::new(&m, &c2, vec![0, 1, 0, 1]).unwrap();
        let v = morphism_iff_linear(&f, &samples).unwrap();
        assert!(v.linear && v.morphism);
        let top = LatticeMap::new(&m, &c2, vec![1, 1, 1, 1]).unwrap();
        let v = morphism_iff_linear(&top, &samples).unwrap();
        assert!(!v.linear && !v.morphism);
        let v = morphism_iff_linear(&LatticeMap::identity(&m), &samples).unwrap();
        assert!(v.linear && v.morphism && v.agree());
    }

    #[test]
    fn linear_extensions() {
        let m = diamond();
        let ext = LinearExtension::new(m.space(), &m, m.elements().collect()).unwrap();
        assert!(ext.restricts_to_map().unwrap());
        let samples =
            crate::enumerate::grid_valuations(m.space(), &[rat(0, 1), rat(1, 2), rat(1, 1)]);
        let diff = first_disagreement(
            &samples,
            |nu| ext.apply(nu),
            |nu| standard_lattice_barycentre(nu, &m),
        )
        .unwrap();
        assert_eq!(diff, None);
        let bot = LinearExtension::new(m.space(), &m, vec![0; 4]).unwrap();
        assert!(samples.iter().all(|nu| bot.apply(nu).unwrap() == 0));

        let s = load_space("point bot; point top; le bot top").unwrap();
        let f =
            LinearExtension::new(&s, &ExtRatCone, vec![ExtRat::from(1), ExtRat::from(3)]).unwrap();
        let nu = SimpleValuation::parse(&s, "1/2 @ bot\n1/2 @ top").unwrap();
        assert_eq!(f.apply(&nu).unwrap(), ExtRat::from(2));
        assert!(
            LinearExtension::new(&s, &ExtRatCone, vec![ExtRat::from(3), ExtRat::from(1)]).is_err()
        );
    }

    #[test]
    fn half_space_membership() {
        let m = diamond();
        let u = m.space().parse_set("b,1").unwrap();
        assert!(!beta_halfspace_equiv(&val(&m, "1/2 @ a"), u, &m).unwrap());
        assert!(beta_halfspace_equiv(&val(&m, "1/2 @ a\n1/4 @ b"), u, &m).unwrap());
        assert!(!beta_halfspace_equiv(&SimpleValuation::zero(m.space()), u, &m).unwrap());
        let not_principal = m.space().parse_set("1").unwrap();
        assert!(beta_halfspace_equiv(&val(&m, "1 @ a"), not_principal, &m).is_err());
    }

    #[test]
    fn finite_lattice_tautologies() {
        let m = diamond();
        assert!(is_weakly_hausdorff(m.lattice()));
        assert!(join_is_monotone(m.lattice()));
    }
}
