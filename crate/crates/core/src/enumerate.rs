//! Finite enumeration and seeded random generation of spaces, valuations,
//! functions and kernels.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with a
//! 64-bit seed via `SeedableRng::seed_from_u64`, so every sweep is
//! reproducible from its seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ext::{rat, ExtRat, Rational};
use crate::integral::LscFun;
use crate::monad::Kernel;
use crate::space::{check_lattice, FinLattice, FinSpace, PointSet};
use crate::valuation::SimpleValuation;

/// Name of the generator used for all seeded sampling.
pub const PRNG_NAME: &str = "ChaCha8";

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every partial order on `n` labeled points `p0, ..., p(n-1)`.
pub fn labeled_posets(n: usize) -> Vec<FinSpace> {
    order_matrices(n)
        .into_iter()
        .map(|up| FinSpace::anonymous(n, &pairs_of(&up)).expect("valid order"))
        .collect()
}

/// One representative per isomorphism class of posets on `n` points.
pub fn posets_up_to_iso(n: usize) -> Vec<FinSpace> {
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for up in order_matrices(n) {
        let canon = perms.iter().map(|p| relabel_key(&up, p)).min().unwrap_or(0);
        if seen.insert(canon) {
            out.push(FinSpace::anonymous(n, &pairs_of(&up)).expect("valid order"));
        }
    }
    out
}

/// One representative per isomorphism class of lattices with `n` elements.
pub fn lattices_up_to_iso(n: usize) -> Vec<FinLattice> {
    if n == 0 {
        return Vec::new();
    }
    posets_up_to_iso(n)
        .into_iter()
        .filter_map(|s| check_lattice(&s).ok())
        .collect()
}

/// All lattices with between 1 and `max` elements, up to isomorphism.
pub fn lattices_up_to(max: usize) -> Vec<FinLattice> {
    (1..=max).flat_map(lattices_up_to_iso).collect()
}

/// All labeled posets with between 1 and `max` points.
pub fn labeled_posets_up_to(max: usize) -> Vec<FinSpace> {
    (1..=max).flat_map(labeled_posets).collect()
}

fn pairs_of(up: &[u64]) -> Vec<(usize, usize)> {
    let mut gens = Vec::new();
    for (x, row) in up.iter().enumerate() {
        for y in PointSet(*row).iter() {
            if x != y {
                gens.push((x, y));
            }
        }
    }
    gens
}

// Each unordered pair is incomparable, below or above; keep the transitive
// choices. Rows hold up-sets as bitmasks.
fn order_matrices(n: usize) -> Vec<Vec<u64>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    let total = 3usize.pow(pairs.len() as u32);
    for code in 0..total {
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        let mut c = code;
        for &(i, j) in &pairs {
            match c % 3 {
                1 => up[i] |= 1 << j,
                2 => up[j] |= 1 << i,
                _ => {}
            }
            c /= 3;
        }
        let transitive = (0..n).all(|x| PointSet(up[x]).iter().all(|y| up[y] & !up[x] == 0));
        if transitive {
            out.push(up);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn go(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, out);
            p.swap(k, i);
        }
    }
    go(0, &mut p, &mut out);
    out
}

fn relabel_key(up: &[u64], perm: &[usize]) -> u64 {
    let n = up.len();
    let mut key = 0u64;
    for x in 0..n {
        for y in PointSet(up[x]).iter() {
            key |= 1 << (perm[x] * n + perm[y]);
        }
    }
    key
}

/// All simple valuations whose coefficients are drawn from `coeffs`.
pub fn grid_valuations(space: &FinSpace, coeffs: &[Rational]) -> Vec<SimpleValuation> {
    let n = space.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let c = idx.iter().map(|&i| coeffs[i].clone()).collect();
        out.push(SimpleValuation::from_coeffs(space, c).expect("nonnegative grid"));
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < coeffs.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            return out;
        }
    }
}

/// All monotone functions with values in `values`, which must be
/// strictly increasing.
pub fn grid_functions(space: &FinSpace, values: &[ExtRat]) -> Vec<LscFun> {
    debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
    let names: Vec<String> = (0..values.len()).map(|i| format!("v{i}")).collect();
    let chain = FinSpace::chain(&names).expect("distinct names");
    crate::space::ContinuousMap::enumerate(space, &chain)
        .into_iter()
        .map(|m| {
            LscFun::new(
                space,
                m.graph().iter().map(|&i| values[i].clone()).collect(),
            )
            .expect("monotone")
        })
        .collect()
}

/// Calls `visit` with the graph (as indices into `values`) of every
/// stochastically monotone kernel `source → target` taking values in `values`.
pub fn for_each_monotone_kernel(
    source: &FinSpace,
    values: &[SimpleValuation],
    mut visit: impl FnMut(&[usize]),
) {
    let m = values.len();
    let le: Vec<Vec<bool>> = values
        .iter()
        .map(|a| {
            values
                .iter()
                .map(|b| a.stochastic_le(b).expect("same space"))
                .collect()
        })
        .collect();
    // Points below x are decided before x.
    let mut order: Vec<usize> = source.points().collect();
    order.sort_by_key(|&x| source.down(x).len());
    let mut graph = vec![usize::MAX; source.len()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        order: &[usize],
        source: &FinSpace,
        m: usize,
        le: &[Vec<bool>],
        graph: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if k == order.len() {
            visit(graph);
            return;
        }
        let x = order[k];
        for v in 0..m {
            let ok = order[..k].iter().all(|&y| {
                (!source.le(y, x) || le[graph[y]][v]) && (!source.le(x, y) || le[v][graph[y]])
            });
            if ok {
                graph[x] = v;
                go(k + 1, order, source, m, le, graph, visit);
            }
        }
        graph[x] = usize::MAX;
    }
    go(0, &order, source, m, &le, &mut graph, &mut visit);
}

/// Every stochastically monotone kernel with values in `values`.
pub fn monotone_kernels(
    source: &FinSpace,
    target: &FinSpace,
    values: &[SimpleValuation],
) -> Vec<Kernel> {
    let mut out = Vec::new();
    for_each_monotone_kernel(source, values, |g| {
        let graph = g.iter().map(|&i| values[i].clone()).collect();
        out.push(Kernel::new(source, target, graph).expect("monotone by construction"));
    });
    out
}

/// A uniformly chosen rational `p/q` with `1 <= q <= max_den` and
/// `0 <= p <= max_num·q`.
pub fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(0..=max_num * q);
    rat(p, q)
}

/// A simple valuation with each point carrying mass with probability
/// one half, coefficients from `random_rational(rng, 2, max_den)`.
pub fn random_valuation<R: Rng>(rng: &mut R, space: &FinSpace, max_den: i64) -> SimpleValuation {
    let coeffs = space
        .points()
        .map(|_| {
            if rng.gen_bool(0.5) {
                random_rational(rng, 2, max_den)
            } else {
                rat(0, 1)
            }
        })
        .collect();
    SimpleValuation::from_coeffs(space, coeffs).expect("nonnegative")
}

/// A simple valuation on at most `max_support` points.
pub fn random_sparse_valuation<R: Rng>(
    rng: &mut R,
    space: &FinSpace,
    max_support: usize,
    max_den: i64,
) -> SimpleValuation {
    let mut pts: Vec<usize> = space.points().collect();
    pts.shuffle(rng);
    let k = rng.gen_range(0..=max_support.min(pts.len()));
    let terms: Vec<(Rational, usize)> = pts[..k]
        .iter()
        .map(|&x| (random_rational(rng, 2, max_den), x))
        .collect();
    SimpleValuation::from_terms(space, terms).expect("nonnegative")
}

/// A value in `[0, ∞]` that is infinite with probability `p_inf`.
pub fn random_ext<R: Rng>(rng: &mut R, max_den: i64, p_inf: f64) -> ExtRat {
    if rng.gen_bool(p_inf) {
        ExtRat::Inf
    } else {
        ExtRat::Fin(random_rational(rng, 3, max_den))
    }
}

/// A monotone function: the maximum of random values over each down-set.
pub fn random_lsc<R: Rng>(rng: &mut R, space: &FinSpace, max_den: i64, p_inf: f64) -> LscFun {
    let raw: Vec<ExtRat> = space
        .points()
        .map(|_| random_ext(rng, max_den, p_inf))
        .collect();
    LscFun::from_fn(space, |x| {
        space
            .down(x)
            .iter()
            .map(|y| raw[y].clone())
            .max()
            .expect("x is below itself")
    })
    .expect("monotone by construction")
}

/// A multiple of `1/den` in `[0, max_num]`.
pub fn random_multiple<R: Rng>(rng: &mut R, max_num: i64, den: i64) -> Rational {
    rat(rng.gen_range(0..=max_num * den), den)
}

/// A monotone kernel: `f(x) = Σ_{y ≤ x} ρ_y` where each `ρ_y` has at most
/// two atoms with weights that are multiples of `1/den`. All coefficients of
/// the result are then multiples of `1/den` too.
pub fn random_kernel<R: Rng>(
    rng: &mut R,
    source: &FinSpace,
    target: &FinSpace,
    den: i64,
) -> Kernel {
    let raw: Vec<SimpleValuation> = source
        .points()
        .map(|_| {
            let mut pts: Vec<usize> = target.points().collect();
            pts.shuffle(rng);
            let k = rng.gen_range(0..=2.min(pts.len()));
            let terms: Vec<(Rational, usize)> = pts[..k]
                .iter()
                .map(|&y| (random_multiple(rng, 1, den), y))
                .collect();
            SimpleValuation::from_terms(target, terms).expect("nonnegative")
        })
        .collect();
    let graph = source
        .points()
        .map(|x| {
            let mut acc = SimpleValuation::zero(target);
            for y in source.down(x).iter() {
                acc.add_scaled(&rat(1, 1), &raw[y]);
            }
            acc
        })
        .collect();
    Kernel::new_unchecked(source, target, graph)
}

/// A random poset on `n` points: each pair `i < j` is related with
/// probability `density`, then closed transitively.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> FinSpace {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                gens.push((i, j));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let gens: Vec<(usize, usize)> = gens.into_iter().map(|(i, j)| (perm[i], perm[j])).collect();
    FinSpace::anonymous(n, &gens).expect("acyclic by construction")
}

/// A random poset with between 1 and `max_size` points.
pub fn random_space<R: Rng>(rng: &mut R, max_size: usize) -> FinSpace {
    let n = rng.gen_range(1..=max_size);
    random_poset(rng, n, 0.4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        // Labeled posets: 1, 1, 3, 19, 219, 4231.
        let labeled: Vec<usize> = (0..=5).map(|n| labeled_posets(n).len()).collect();
        assert_eq!(labeled, vec![1, 1, 3, 19, 219, 4231]);
        // Unlabeled posets: 1, 1, 2, 5, 16, 63.
        let iso: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(iso, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn lattice_counts() {
        // Unlabeled lattices: 1, 1, 1, 2, 5, 15.
        let counts: Vec<usize> = (1..=6).map(|n| lattices_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 15]);
    }

    #[test]
    fn kernel_enumeration_matches_filter() {
        let grid = [rat(0, 1), rat(1, 2), rat(1, 1)];
        for s in labeled_posets_up_to(2) {
            for t in labeled_posets_up_to(2) {
                let vals = grid_valuations(&t, &grid);
                let found = monotone_kernels(&s, &t, &vals).len();
                // Filter all |vals|^|s| graphs directly.
                let mut brute = 0;
                let total = vals.len().pow(s.len() as u32);
                for code in 0..total {
                    let mut c = code;
                    let g: Vec<SimpleValuation> = s
                        .points()
                        .map(|_| {
                            let v = vals[c % vals.len()].clone();
                            c /= vals.len();
                            v
                        })
                        .collect();
                    if Kernel::new(&s, &t, g).is_ok() {
                        brute += 1;
                    }
                }
                assert_eq!(found, brute);
            }
        }
    }

    #[test]
    fn random_generators_are_deterministic_and_valid() {
        let mut a = seeded_rng(7);
        let mut b = seeded_rng(7);
        for _ in 0..50 {
            let s = random_poset(&mut a, 4, 0.4);
            let t = random_poset(&mut b, 4, 0.4);
            assert_eq!(s, t);
            let h = random_lsc(&mut a, &s, 4, 0.2);
            assert_eq!(h, random_lsc(&mut b, &t, 4, 0.2));
            let k = random_kernel(&mut a, &s, &s, 8);
            assert_eq!(k.graph(), random_kernel(&mut b, &t, &t, 8).graph());
        }
    }
}
