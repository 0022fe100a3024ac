//! Cones over finite data.
//!
//! Three cones are provided: the lattice cone of a finite lattice (addition
//! is join, `r·x = x` for `r > 0`, zero is bottom), the extended rationals,
//! and the cone of lower semicontinuous functions on a finite space. Only the
//! lattice cone has a finite carrier; the convexity taxonomy, the dual cone
//! and separation are decided for it by enumeration.

use std::fmt::Debug;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ext::{rat, ExtRat, Rational};
use crate::integral::LscFun;
use crate::space::{up_sets, FinLattice, FinSpace, PointSet};

/// A cone: a commutative monoid with an action of the nonnegative rationals,
/// and an order used as its specialization order.
pub trait Cone {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn scale(&self, r: &Rational, x: &Self::Elem) -> Self::Elem;
    fn le(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// `Σ rᵢ·xᵢ`.
    fn combination<'a, I>(&self, terms: I) -> Self::Elem
    where
        I: IntoIterator<Item = (&'a Rational, &'a Self::Elem)>,
        Self::Elem: 'a,
    {
        terms
            .into_iter()
            .fold(self.zero(), |acc, (r, x)| self.add(&acc, &self.scale(r, x)))
    }
}

/// `x + y = x ∨ y`, `r·x = x` for `r > 0`, `0·x = ⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCone {
    lattice: FinLattice,
}

impl LatticeCone {
    pub fn new(lattice: FinLattice) -> Self {
        LatticeCone { lattice }
    }

    pub fn lattice(&self) -> &FinLattice {
        &self.lattice
    }

    pub fn space(&self) -> &FinSpace {
        self.lattice.space()
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }
}

impl Cone for LatticeCone {
    type Elem = usize;

    fn zero(&self) -> usize {
        self.lattice.bottom()
    }

    fn add(&self, x: &usize, y: &usize) -> usize {
        self.lattice.join(*x, *y)
    }

    fn scale(&self, r: &Rational, x: &usize) -> usize {
        if r.is_zero() {
            self.lattice.bottom()
        } else {
            *x
        }
    }

    fn le(&self, x: &usize, y: &usize) -> bool {
        self.lattice.le(*x, *y)
    }
}

/// The extended nonnegative rationals with their usual order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtRatCone;

impl Cone for ExtRatCone {
    type Elem = ExtRat;

    fn zero(&self) -> ExtRat {
        ExtRat::zero()
    }

    fn add(&self, x: &ExtRat, y: &ExtRat) -> ExtRat {
        x + y
    }

    fn scale(&self, r: &Rational, x: &ExtRat) -> ExtRat {
        x.scale(r)
    }

    fn le(&self, x: &ExtRat, y: &ExtRat) -> bool {
        x <= y
    }
}

/// Lower semicontinuous functions on a finite space, pointwise. The carrier
/// is infinite, so only element-level operations are offered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunSpaceCone {
    space: FinSpace,
}

impl FunSpaceCone {
    pub fn new(space: &FinSpace) -> Self {
        FunSpaceCone {
            space: space.clone(),
        }
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }
}

impl Cone for FunSpaceCone {
    type Elem = LscFun;

    fn zero(&self) -> LscFun {
        LscFun::constant(&self.space, ExtRat::zero())
    }

    fn add(&self, x: &LscFun, y: &LscFun) -> LscFun {
        let one = rat(1, 1);
        x.combine(&one, y, &one).expect("same space")
    }

    fn scale(&self, r: &Rational, x: &LscFun) -> LscFun {
        x.combine(r, &self.zero(), &rat(0, 1)).expect("same space")
    }

    fn le(&self, x: &LscFun, y: &LscFun) -> bool {
        x.values().iter().zip(y.values()).all(|(a, b)| a <= b)
    }
}

/// The scalar grid used for exhaustive axiom checks.
pub fn axiom_scalars() -> Vec<Rational> {
    vec![rat(0, 1), rat(1, 4), rat(1, 2), rat(1, 1), rat(2, 1)]
}

/// Checks every cone axiom on all elements and scalars given; returns a
/// description of the first failure.
pub fn cone_axiom_failure<C: Cone>(
    cone: &C,
    elems: &[C::Elem],
    scalars: &[Rational],
) -> Option<String> {
    let one = rat(1, 1);
    let zero = rat(0, 1);
    for x in elems {
        if cone.scale(&one, x) != *x {
            return Some(format!("1·x ≠ x for {x:?}"));
        }
        if cone.scale(&zero, x) != cone.zero() {
            return Some(format!("0·x ≠ 0 for {x:?}"));
        }
        if cone.add(x, &cone.zero()) != *x {
            return Some(format!("x + 0 ≠ x for {x:?}"));
        }
        for y in elems {
            if cone.add(x, y) != cone.add(y, x) {
                return Some(format!("x + y ≠ y + x for {x:?}, {y:?}"));
            }
            for z in elems {
                if cone.add(&cone.add(x, y), z) != cone.add(x, &cone.add(y, z)) {
                    return Some(format!("addition not associative at {x:?}, {y:?}, {z:?}"));
                }
            }
            for r in scalars {
                if cone.scale(r, &cone.add(x, y)) != cone.add(&cone.scale(r, x), &cone.scale(r, y))
                {
                    return Some(format!("r·(x+y) ≠ r·x + r·y at r={r}, {x:?}, {y:?}"));
                }
            }
        }
        for r in scalars {
            if cone.scale(r, &cone.zero()) != cone.zero() {
                return Some(format!("r·0 ≠ 0 at r={r}"));
            }
            for s in scalars {
                if cone.scale(&(r + s), x) != cone.add(&cone.scale(r, x), &cone.scale(s, x)) {
                    return Some(format!("(r+s)·x ≠ r·x + s·x at r={r}, s={s}, {x:?}"));
                }
                if cone.scale(&(r * s), x) != cone.scale(r, &cone.scale(s, x)) {
                    return Some(format!("(rs)·x ≠ r·(s·x) at r={r}, s={s}, {x:?}"));
                }
            }
        }
    }
    None
}

/// Mixture weights tested for convexity. All interior mixtures coincide in a
/// lattice cone; the extra weights matter for the other cones.
pub fn mixture_weights() -> Vec<Rational> {
    vec![rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)]
}

/// Whether `r·a + (1-r)·b` stays in the set for all sample members and all
/// mixture weights.
pub fn convex_on_samples<C: Cone>(
    cone: &C,
    members: &[C::Elem],
    contains: impl Fn(&C::Elem) -> bool,
) -> bool {
    let one = rat(1, 1);
    let weights = mixture_weights();
    members.iter().all(|a| {
        members.iter().all(|b| {
            weights.iter().all(|r| {
                let mix = cone.add(&cone.scale(r, a), &cone.scale(&(&one - r), b));
                contains(&mix)
            })
        })
    })
}

/// Convexity of a subset of a lattice cone, tested at weights `0, 1/2, 1`.
pub fn is_convex(a: PointSet, cone: &LatticeCone) -> bool {
    let one = rat(1, 1);
    let weights = [rat(0, 1), rat(1, 2), rat(1, 1)];
    let convex = a.iter().all(|x| {
        a.iter().all(|y| {
            weights.iter().all(|r| {
                let mix = cone.add(&cone.scale(r, &x), &cone.scale(&(&one - r), &y));
                a.contains(mix)
            })
        })
    });
    // A nonempty convex set is closed under binary joins, hence directed.
    debug_assert!(!convex || a.is_empty() || is_directed(a, cone.lattice()));
    convex
}

/// Every pair of members has an upper bound inside the set.
pub fn is_directed(a: PointSet, l: &FinLattice) -> bool {
    !a.is_empty()
        && a.iter()
            .all(|x| a.iter().all(|y| a.iter().any(|z| l.le(x, z) && l.le(y, z))))
}

/// Both the set and its complement are convex.
pub fn is_half_space(a: PointSet, cone: &LatticeCone) -> bool {
    is_convex(a, cone) && is_convex(cone.space().all().difference(a), cone)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvexityFlags {
    pub weakly_locally_convex: bool,
    pub locally_convex: bool,
    pub locally_linear: bool,
}

/// Decides the three convexity properties of a lattice cone with its
/// Alexandrov topology by enumeration.
pub fn classify_convexity(cone: &LatticeCone) -> ConvexityFlags {
    let s = cone.space();
    let opens = s.open_sets();
    let all = s.all();

    // Every open neighbourhood U of x contains a convex N with x in the
    // interior of N. The interior of N contains x iff ↑x ⊆ N.
    let weakly_locally_convex = s.points().all(|x| {
        opens.iter().filter(|u| u.contains(x)).all(|&u| {
            let free = u.difference(s.up(x));
            subsets(free).any(|extra| is_convex(s.up(x).union(extra), cone))
        })
    });

    let locally_convex = s.points().all(|x| {
        opens.iter().filter(|u| u.contains(x)).all(|&u| {
            opens
                .iter()
                .any(|&v| v.contains(x) && v.is_subset(u) && is_convex(v, cone))
        })
    });

    // Topology generated by the open half-spaces, compared with all opens.
    let half_spaces: Vec<PointSet> = opens
        .iter()
        .copied()
        .filter(|&h| is_half_space(h, cone))
        .collect();
    let mut basis: Vec<PointSet> = vec![all];
    for &h in &half_spaces {
        let more: Vec<PointSet> = basis.iter().map(|&b| b.intersection(h)).collect();
        for m in more {
            if !basis.contains(&m) {
                basis.push(m);
            }
        }
    }
    let mut generated: Vec<PointSet> = vec![PointSet::EMPTY];
    for &b in &basis {
        let more: Vec<PointSet> = generated.iter().map(|&g| g.union(b)).collect();
        for m in more {
            if !generated.contains(&m) {
                generated.push(m);
            }
        }
    }
    let locally_linear = opens.iter().all(|u| generated.contains(u));

    let flags = ConvexityFlags {
        weakly_locally_convex,
        locally_convex,
        locally_linear,
    };
    assert!(
        (!locally_linear || locally_convex) && (!locally_convex || weakly_locally_convex),
        "convexity implications violated: {flags:?}"
    );
    flags
}

fn subsets(s: PointSet) -> impl Iterator<Item = PointSet> {
    // Standard submask enumeration, including the empty set.
    let full = s.0;
    let mut sub = full;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & full;
        }
        Some(PointSet(cur))
    })
}

/// A map from a lattice cone into the extended rationals, given by its graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFunctional {
    values: Vec<ExtRat>,
}

impl LinearFunctional {
    pub fn new(values: Vec<ExtRat>) -> Self {
        LinearFunctional { values }
    }

    /// `∞·χ_{L∖↓x₀}`.
    pub fn principal(l: &FinLattice, x0: usize) -> Self {
        let below = l.space().down(x0);
        LinearFunctional {
            values: l
                .space()
                .points()
                .map(|x| {
                    if below.contains(x) {
                        ExtRat::zero()
                    } else {
                        ExtRat::Inf
                    }
                })
                .collect(),
        }
    }

    pub fn apply(&self, x: usize) -> &ExtRat {
        &self.values[x]
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.values
    }

    pub fn as_function(&self, l: &FinLattice) -> Result<LscFun> {
        LscFun::new(l.space(), self.values.clone())
    }

    pub fn is_monotone(&self, l: &FinLattice) -> bool {
        l.space()
            .strict_pairs()
            .all(|(x, y)| self.values[x] <= self.values[y])
    }

    pub fn is_linear(&self, cone: &LatticeCone, scalars: &[Rational]) -> bool {
        cone.elements().all(|x| {
            cone.elements().all(|y| {
                scalars.iter().all(|r| {
                    scalars.iter().all(|s| {
                        let lhs = &self.values[cone.add(&cone.scale(r, &x), &cone.scale(s, &y))];
                        *lhs == self.values[x].scale(r) + self.values[y].scale(s)
                    })
                })
            })
        })
    }

    /// Pointwise order.
    pub fn le(&self, other: &LinearFunctional) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

fn linearity_scalars() -> Vec<Rational> {
    vec![rat(0, 1), rat(1, 2), rat(1, 1), rat(2, 1)]
}

/// All monotone linear maps `L → [0, ∞]` whose values lie in `grid`.
pub fn dual_cone_over_grid(cone: &LatticeCone, grid: &[ExtRat]) -> Vec<LinearFunctional> {
    let n = cone.len();
    let scalars = linearity_scalars();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let cand = LinearFunctional::new(idx.iter().map(|&i| grid[i].clone()).collect());
        if cand.is_monotone(cone.lattice()) && cand.is_linear(cone, &scalars) {
            out.push(cand);
        }
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < grid.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    out
}

/// The lower semicontinuous linear maps `L → [0, ∞]`, indexed by `x₀`:
/// entry `x₀` is `∞·χ_{L∖↓x₀}`. Found by filtering all `{0, ∞}`-valued
/// candidates; for lattices of at most six elements an independent search
/// over the grid `{0, 1/2, 1, ∞}` must find the same set.
pub fn dual_cone(cone: &LatticeCone) -> Vec<LinearFunctional> {
    let l = cone.lattice();
    let found = dual_cone_over_grid(cone, &[ExtRat::zero(), ExtRat::Inf]);
    let mut by_x0: Vec<Option<LinearFunctional>> = vec![None; cone.len()];
    for f in found {
        let zeros: PointSet = cone.elements().filter(|&x| f.apply(x).is_zero()).collect();
        let x0 = l.join_all(zeros);
        assert!(
            zeros.contains(x0) && zeros == l.space().down(x0),
            "dual element {f:?} is not of the form ∞·χ_(L∖↓x0)"
        );
        assert_eq!(f, LinearFunctional::principal(l, x0));
        by_x0[x0] = Some(f);
    }
    let dual: Vec<LinearFunctional> = by_x0
        .into_iter()
        .enumerate()
        .map(|(x0, f)| f.unwrap_or_else(|| panic!("no dual element for x0 = {x0}")))
        .collect();
    if cone.len() <= 6 {
        let grid = [
            ExtRat::zero(),
            ExtRat::from_ratio(1, 2),
            ExtRat::one(),
            ExtRat::Inf,
        ];
        let mut wide = dual_cone_over_grid(cone, &grid);
        let mut ours = dual.clone();
        wide.sort_by(|a, b| a.values.cmp(&b.values));
        ours.sort_by(|a, b| a.values.cmp(&b.values));
        assert_eq!(wide, ours, "grid search disagrees with the {{0,∞}} search");
    }
    dual
}

/// `x₀ ↦ Λ_{x₀}` is a bijection onto the dual and reverses the order.
pub fn dual_is_opposite(cone: &LatticeCone, dual: &[LinearFunctional]) -> bool {
    let l = cone.lattice();
    if dual.len() != cone.len() {
        return false;
    }
    let distinct = dual
        .iter()
        .enumerate()
        .all(|(i, a)| dual.iter().skip(i + 1).all(|b| a != b));
    distinct
        && cone.elements().all(|x| {
            dual[x] == LinearFunctional::principal(l, x)
                && cone.elements().all(|y| l.le(x, y) == dual[y].le(&dual[x]))
        })
}

/// A separating functional `Λ` with `Λ(x) ≤ 1 < Λ(y)` on `A × U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub x0: usize,
    pub functional: LinearFunctional,
    /// False when the canonical choice `x₀ = max A` failed and a search was needed.
    pub canonical: bool,
}

fn separates(f: &LinearFunctional, a: PointSet, u: PointSet) -> bool {
    let one = ExtRat::one();
    a.iter().all(|x| f.apply(x) <= &one) && u.iter().all(|y| f.apply(y) > &one)
}

/// Separates a nonempty convex `A` from a disjoint open convex `U`.
pub fn keimel_separate(a: PointSet, u: PointSet, cone: &LatticeCone) -> Result<Separation> {
    let s = cone.space();
    let l = cone.lattice();
    if a.is_empty() {
        return Err(Error::Precondition("A is empty".into()));
    }
    let overlap = a.intersection(u);
    if !overlap.is_empty() {
        return Err(Error::Precondition(format!(
            "A and U share {{{}}}",
            s.format_set(overlap)
        )));
    }
    if !is_convex(a, cone) {
        return Err(Error::Precondition(format!(
            "A = {{{}}} is not convex",
            s.format_set(a)
        )));
    }
    if !s.is_open(u) {
        return Err(Error::Precondition(format!(
            "U = {{{}}} is not open",
            s.format_set(u)
        )));
    }
    if !is_convex(u, cone) {
        return Err(Error::Precondition(format!(
            "U = {{{}}} is not convex",
            s.format_set(u)
        )));
    }
    let x0 = l.join_all(a);
    let f = LinearFunctional::principal(l, x0);
    if a.contains(x0) && separates(&f, a, u) {
        return Ok(Separation {
            x0,
            functional: f,
            canonical: true,
        });
    }
    cone.elements()
        .map(|x0| (x0, LinearFunctional::principal(l, x0)))
        .find(|(_, f)| separates(f, a, u))
        .map(|(x0, functional)| Separation {
            x0,
            functional,
            canonical: false,
        })
        .ok_or_else(|| Error::Precondition("no separating functional exists".into()))
}

/// For every pair of distinct elements, a dual element telling them apart,
/// as `(a, b, x₀)`.
pub fn convex_t0_check(cone: &LatticeCone) -> (bool, Vec<(usize, usize, usize)>) {
    let l = cone.lattice();
    let mut family = Vec::new();
    let mut ok = true;
    for a in cone.elements() {
        for b in cone.elements().skip(a + 1) {
            let found = [a, b].into_iter().chain(cone.elements()).find(|&x0| {
                let f = LinearFunctional::principal(l, x0);
                f.apply(a) != f.apply(b)
            });
            match found {
                Some(x0) => family.push((a, b, x0)),
                None => ok = false,
            }
        }
    }
    (ok, family)
}

/// A map between two lattice cones, given by its graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub source: LatticeCone,
    pub target: LatticeCone,
    pub graph: Vec<usize>,
}

impl LatticeMap {
    pub fn new(source: &LatticeCone, target: &LatticeCone, graph: Vec<usize>) -> Result<Self> {
        if graph.len() != source.len() || graph.iter().any(|&y| y >= target.len()) {
            return Err(Error::Incomplete(
                "map graph does not match the cones".into(),
            ));
        }
        Ok(LatticeMap {
            source: source.clone(),
            target: target.clone(),
            graph,
        })
    }

    pub fn identity(c: &LatticeCone) -> Self {
        LatticeMap {
            source: c.clone(),
            target: c.clone(),
            graph: c.elements().collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.graph[x]
    }

    pub fn is_monotone(&self) -> bool {
        self.source
            .space()
            .strict_pairs()
            .all(|(x, y)| self.target.le(&self.graph[x], &self.graph[y]))
    }

    /// `f(r·x + s·y) = r·f(x) + s·f(y)` over the weights `0, 1/2, 1, 2`.
    pub fn is_linear(&self) -> bool {
        let (c, d) = (&self.source, &self.target);
        let scalars = linearity_scalars();
        c.elements().all(|x| {
            c.elements().all(|y| {
                scalars.iter().all(|r| {
                    scalars.iter().all(|s| {
                        let lhs = self.graph[c.add(&c.scale(r, &x), &c.scale(s, &y))];
                        let rhs = d.add(&d.scale(r, &self.graph[x]), &d.scale(s, &self.graph[y]));
                        lhs == rhs
                    })
                })
            })
        })
    }

    /// Every monotone map between two lattice cones.
    pub fn enumerate_monotone(source: &LatticeCone, target: &LatticeCone) -> Vec<LatticeMap> {
        crate::space::ContinuousMap::enumerate(source.space(), target.space())
            .into_iter()
            .map(|m| LatticeMap {
                source: source.clone(),
                target: target.clone(),
                graph: m.graph().to_vec(),
            })
            .collect()
    }
}

/// Verifies that the retract `D` of a weakly locally convex `C` along a
/// linear retraction `r` with section `s` is weakly locally convex.
pub fn check_retract_wlc(r: &LatticeMap, s: &LatticeMap) -> Result<bool> {
    if r.source != s.target || r.target != s.source {
        return Err(Error::SpaceMismatch(
            "retraction and section do not match".into(),
        ));
    }
    if !r.is_monotone() || !s.is_monotone() {
        return Err(Error::Precondition(
            "retraction and section must be monotone".into(),
        ));
    }
    if !r.is_linear() {
        return Err(Error::NotLinear("the retraction is not linear".into()));
    }
    if let Some(y) = r.target.elements().find(|&y| r.apply(s.apply(y)) != y) {
        return Err(Error::Precondition(format!(
            "r∘s is not the identity at {}",
            r.target.space().name(y)
        )));
    }
    if !classify_convexity(&r.source).weakly_locally_convex {
        return Err(Error::Precondition(
            "source cone is not weakly locally convex".into(),
        ));
    }
    Ok(classify_convexity(&r.target).weakly_locally_convex)
}

/// Open sets of the lattice cone that are themselves convex.
pub fn open_convex_sets(cone: &LatticeCone) -> Vec<PointSet> {
    cone.space()
        .open_sets()
        .iter()
        .copied()
        .filter(|&u| is_convex(u, cone))
        .collect()
}

/// Nonempty convex subsets of the carrier.
pub fn convex_sets(cone: &LatticeCone) -> Vec<PointSet> {
    let n = cone.len();
    (1u64..(1u64 << n))
        .map(PointSet)
        .filter(|&a| is_convex(a, cone))
        .collect()
}

/// Up-sets of the lattice order; re-exported for callers that enumerate
/// convex neighbourhoods.
pub fn lattice_opens(cone: &LatticeCone) -> Vec<PointSet> {
    up_sets(cone.len(), |x| cone.space().up(x))
}
