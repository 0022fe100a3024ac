use proptest::prelude::*;

use pvk_core::algebra::{barycentre_search, lattice_barycentre, standard_lattice_barycentre};
use pvk_core::cone::LatticeCone;
use pvk_core::enumerate::{lattices_up_to, random_kernel, random_lsc, seeded_rng};
use pvk_core::integral::step_approx;
use pvk_core::lang::{self, Program};
use pvk_core::laws::lang::random_expr;
use pvk_core::monad::{composition_holds, extension_unit_holds, unit_extension_holds, Kernel};
use pvk_core::{integrate, rat, ContinuousMap, ExtRat, FinSpace, LscFun, Rational, SimpleValuation};

/// A poset on `0..n` generated by the chosen pairs `i < j`.
fn space() -> impl Strategy<Value = FinSpace> {
    (1usize..=4).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let k = pairs.len();
        proptest::collection::vec(any::<bool>(), k).prop_map(move |keep| {
            let gens: Vec<(usize, usize)> =
                pairs.iter().zip(&keep).filter(|(_, &b)| b).map(|(&p, _)| p).collect();
            FinSpace::anonymous(n, &gens).expect("acyclic")
        })
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (0i64..=8, 1i64..=8).prop_map(|(p, q)| rat(p, q))
}

fn valuation_on(s: &FinSpace) -> impl Strategy<Value = SimpleValuation> {
    let s = s.clone();
    proptest::collection::vec(rational(), s.len())
        .prop_map(move |c| SimpleValuation::from_coeffs(&s, c).expect("nonnegative"))
}

fn space_and_valuation() -> impl Strategy<Value = (FinSpace, SimpleValuation)> {
    space().prop_flat_map(|s| {
        let v = valuation_on(&s);
        (Just(s), v)
    })
}

fn ext_rational() -> impl Strategy<Value = ExtRat> {
    prop_oneof![9 => rational().prop_map(ExtRat::Fin), 1 => Just(ExtRat::Inf)]
}

/// A monotone function: the pointwise max over down-sets of raw values.
fn function_on(s: &FinSpace) -> impl Strategy<Value = LscFun> {
    let s = s.clone();
    proptest::collection::vec(ext_rational(), s.len()).prop_map(move |raw| {
        LscFun::from_fn(&s, |x| s.down(x).iter().map(|y| raw[y].clone()).max().expect("nonempty"))
            .expect("monotone")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn table_round_trip((s, nu) in space_and_valuation()) {
        let t = nu.to_table();
        prop_assert!(t.validate().is_ok());
        prop_assert_eq!(t.decompose().unwrap(), nu);
        prop_assert_eq!(s.open_sets().len(), t.values().len());
    }

    #[test]
    fn integral_of_indicator_is_measure((s, nu) in space_and_valuation()) {
        for &u in s.open_sets() {
            let chi = LscFun::chi(&s, u).unwrap();
            prop_assert_eq!(integrate(&chi, &nu).unwrap(), nu.eval(u).unwrap());
        }
    }

    #[test]
    fn integral_is_additive_in_valuation(
        (s, mu, nu, h) in space().prop_flat_map(|s| {
            let (a, b, f) = (valuation_on(&s), valuation_on(&s), function_on(&s));
            (Just(s), a, b, f)
        })
    ) {
        let _ = s;
        let lhs = integrate(&h, &mu.add(&nu).unwrap()).unwrap();
        prop_assert_eq!(lhs, integrate(&h, &mu).unwrap() + integrate(&h, &nu).unwrap());
    }

    #[test]
    fn integral_is_monotone_in_function(
        (s, nu, h, k) in space().prop_flat_map(|s| {
            let (v, f, g) = (valuation_on(&s), function_on(&s), function_on(&s));
            (Just(s), v, f, g)
        })
    ) {
        let pointwise_max = LscFun::from_fn(&s, |x| h.at(x).clone().max(k.at(x).clone())).unwrap();
        prop_assert!(integrate(&h, &nu).unwrap() <= integrate(&pointwise_max, &nu).unwrap());
    }

    #[test]
    fn step_approximations_stay_below(
        (s, h) in space().prop_flat_map(|s| { let f = function_on(&s); (Just(s), f) }),
        n in 1u32..6,
    ) {
        let a = step_approx(&h, n);
        prop_assert!(s.points().all(|x| a.at(x) <= h.at(x)));
    }

    #[test]
    fn stochastic_order_is_additive((s, mu, nu) in space().prop_flat_map(|s| {
        let (a, b) = (valuation_on(&s), valuation_on(&s));
        (Just(s), a, b)
    })) {
        let _ = s;
        prop_assert!(mu.stochastic_le(&mu.add(&nu).unwrap()).unwrap());
    }

    #[test]
    fn monad_laws_on_random_kernels(seed in any::<u64>(), den in 1i64..=8) {
        let mut rng = seeded_rng(seed);
        let x = pvk_core::enumerate::random_space(&mut rng, 4);
        let y = pvk_core::enumerate::random_space(&mut rng, 4);
        let z = pvk_core::enumerate::random_space(&mut rng, 4);
        let f = random_kernel(&mut rng, &x, &y, den);
        let g = random_kernel(&mut rng, &y, &z, den);
        let mu = pvk_core::enumerate::random_valuation(&mut rng, &x, den);
        prop_assert!(Kernel::new(&x, &y, f.graph().to_vec()).is_ok());
        prop_assert!(unit_extension_holds(&mu).unwrap());
        prop_assert!(extension_unit_holds(&f).unwrap());
        prop_assert!(composition_holds(&f, &g, &mu).unwrap());
        prop_assert_eq!(f.extend(&mu).unwrap(), f.extend_by_integral(&mu).unwrap());
    }

    #[test]
    fn pushforward_is_functorial(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        use rand::seq::SliceRandom;
        let x = pvk_core::enumerate::random_space(&mut rng, 3);
        let y = pvk_core::enumerate::random_space(&mut rng, 3);
        let z = pvk_core::enumerate::random_space(&mut rng, 3);
        let f = ContinuousMap::enumerate(&x, &y).choose(&mut rng).unwrap().clone();
        let g = ContinuousMap::enumerate(&y, &z).choose(&mut rng).unwrap().clone();
        let nu = pvk_core::enumerate::random_valuation(&mut rng, &x, 6);
        let two_steps = nu.pushforward(&f).unwrap().pushforward(&g).unwrap();
        prop_assert_eq!(nu.pushforward(&f.then(&g).unwrap()).unwrap(), two_steps);
        prop_assert_eq!(nu.pushforward(&f).unwrap().total_mass(), nu.total_mass());
    }

    #[test]
    fn change_of_variables_on_random_functions(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        use rand::seq::SliceRandom;
        let x = pvk_core::enumerate::random_space(&mut rng, 4);
        let y = pvk_core::enumerate::random_space(&mut rng, 4);
        let f = ContinuousMap::enumerate(&x, &y).choose(&mut rng).unwrap().clone();
        let h = random_lsc(&mut rng, &y, 6, 0.2);
        let nu = pvk_core::enumerate::random_valuation(&mut rng, &x, 6);
        let lhs = integrate(&h, &nu.pushforward(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, integrate(&h.precompose(&f).unwrap(), &nu).unwrap());
    }

    #[test]
    fn lattice_barycentre_is_join_of_support(idx in 0usize..10, seed in any::<u64>()) {
        let lattices = lattices_up_to(5);
        let c = LatticeCone::new(lattices[idx % lattices.len()].clone());
        let mut rng = seeded_rng(seed);
        let nu = pvk_core::enumerate::random_valuation(&mut rng, c.space(), 4);
        let b = lattice_barycentre(&nu, &c).unwrap();
        prop_assert_eq!(b, c.lattice().join_all(nu.support()));
        prop_assert_eq!(barycentre_search(&nu, &c).unwrap(), vec![b]);
        prop_assert_eq!(standard_lattice_barycentre(&nu, &c).unwrap(), b);
    }

    #[test]
    fn programs_print_and_parse_back(seed in any::<u64>(), depth in 0usize..5) {
        let mut rng = seeded_rng(seed);
        let s = pvk_core::enumerate::random_space(&mut rng, 4);
        let body = random_expr(&mut rng, &s, &mut Vec::new(), depth);
        let p = Program { space: s, body };
        let back = lang::parse(&p.to_source()).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(lang::evaluate(&back).unwrap(), lang::evaluate(&p).unwrap());
    }
}
