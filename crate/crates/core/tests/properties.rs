use mbqc_core::pattern::{compose_par, compose_seq, standardize_dependent_measurements};
use mbqc_core::random::{random_circuit, random_pattern, random_scheme_pattern};
use mbqc_core::schemes::{
    builtin_scheme, builtin_schemes, scheme_channel, scheme_to_fanout_circuit, scheme_to_pattern,
    SchemePattern,
};
use mbqc_core::simulate::{channels_equal, circuit_channel, pattern_channel};
use mbqc_core::transpile::bounds::*;
use mbqc_core::transpile::{
    circuit_to_pattern, pattern_to_fanout_circuit, pattern_to_strict_circuit,
};
use mbqc_core::{Gate, Pattern};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pattern(seed: u64, n: usize, len: usize) -> Pattern {
    random_pattern(&mut ChaCha8Rng::seed_from_u64(seed), n, len)
}

fn same(a: &mbqc_core::simulate::Channel, b: &mbqc_core::simulate::Channel) -> bool {
    channels_equal(a, b, 1e-9).unwrap().equal
}

fn log2_ceil(x: usize) -> usize {
    (x as f64).log2().ceil() as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parallel_composition_adds_size_and_takes_max_depth(a in any::<u64>(), b in any::<u64>()) {
        let (t1, t2) = (pattern(a, 4, 12), pattern(b, 3, 10));
        let t = compose_par(&t1, &t2);
        prop_assert!(t.is_well_formed());
        prop_assert_eq!(t.size(), t1.size() + t2.size());
        prop_assert_eq!(t.depth(), t1.depth().max(t2.depth()));
    }

    #[test]
    fn sequential_composition_adds_size_and_at_most_adds_depth(a in any::<u64>(), b in any::<u64>()) {
        let t1 = pattern(a, 4, 12);
        let mut t2 = pattern(b, 4, 12);
        t2.inputs = t2.register.iter().copied().take(t1.outputs.len()).collect();
        let t = compose_seq(&t1, &t2).unwrap();
        prop_assert!(t.is_well_formed());
        prop_assert_eq!(t.size(), t1.size() + t2.size());
        prop_assert!(t.depth() <= t1.depth() + t2.depth());
        prop_assert!(t.depth() >= t1.depth().max(t2.depth()));
    }

    #[test]
    fn standardization_bounds(a in any::<u64>()) {
        let t = pattern(a, 5, 16);
        let s = standardize_dependent_measurements(&t).unwrap();
        prop_assert!(s.is_well_formed());
        prop_assert!(!s.has_dependent_measurements());
        prop_assert!(s.size() <= 3 * t.size());
        prop_assert!(s.depth() <= 2 * t.depth().max(1));
    }

    #[test]
    fn layering_partitions_the_commands(a in any::<u64>()) {
        let t = pattern(a, 5, 16);
        let l = t.layers().unwrap();
        let mut all: Vec<usize> = l.layers.iter().flatten().copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..t.commands.len()).collect::<Vec<_>>());
        prop_assert!(t.depth() <= t.size());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn standardization_keeps_the_channel(a in any::<u64>()) {
        let t = pattern(a, 3, 10);
        let s = standardize_dependent_measurements(&t).unwrap();
        prop_assert!(same(&pattern_channel(&t).unwrap(), &pattern_channel(&s).unwrap()));
    }

    #[test]
    fn one_way_scheme_reading_matches_the_pattern(a in any::<u64>()) {
        let t = standardize_dependent_measurements(&pattern(a, 3, 10)).unwrap();
        let s = builtin_scheme("oneway").unwrap();
        let p = SchemePattern::from_one_way(&t);
        p.validate(&s).unwrap();
        let want = pattern_channel(&t).unwrap();
        prop_assert!(same(&scheme_channel(&p, &s).unwrap(), &want));
        let (c, _) = scheme_to_fanout_circuit(&p, &s).unwrap();
        let (c2, _) = pattern_to_fanout_circuit(&t).unwrap();
        prop_assert!(same(&circuit_channel(&c, Default::default()).unwrap(), &want));
        prop_assert!(same(&circuit_channel(&c2, Default::default()).unwrap(), &want));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn circuit_translation_bounds(a in any::<u64>(), n in 1usize..=3, d in 1usize..=5) {
        let c = random_circuit(&mut ChaCha8Rng::seed_from_u64(a), n, d);
        let (t, _) = circuit_to_pattern(&c).unwrap();
        prop_assert!(t.depth() <= C1 * c.depth().max(1));
        prop_assert!(t.size() <= C2 * c.size().max(1));
    }

    #[test]
    fn pattern_translation_bounds(a in any::<u64>()) {
        let t = standardize_dependent_measurements(&pattern(a, 4, 12)).unwrap();
        let (f, _) = pattern_to_fanout_circuit(&t).unwrap();
        let (st, _) = pattern_to_strict_circuit(&t).unwrap();
        let dt = t.depth().max(1);
        prop_assert!(f.depth() <= C3 * dt);
        prop_assert!(f.size() <= C4 * t.size().max(1).pow(2));
        prop_assert!(st.depth() <= C5 * dt * log2_ceil(t.size() + 2));
        let strict = st.gates.iter().all(|g| !matches!(g, Gate::FanOut { .. }));
        prop_assert!(strict);
    }

    #[test]
    fn scheme_translation_bounds(a in any::<u64>(), k in 0usize..4) {
        let s = &builtin_schemes()[k];
        let p = random_scheme_pattern(&mut ChaCha8Rng::seed_from_u64(a), s, 4, 10);
        prop_assume!(p.depth() <= 8);
        let dp = p.depth().max(1);
        let (c, _) = scheme_to_fanout_circuit(&p, s).unwrap();
        let (t, _) = scheme_to_pattern(&p, s).unwrap();
        prop_assert!(c.depth() <= C6 * dp, "{} > {}·{}", c.depth(), C6, dp);
        prop_assert!(t.depth() <= C7 * dp, "{} > {}·{}", t.depth(), C7, dp);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn scheme_compilation_keeps_the_direct_channel(a in any::<u64>(), k in 0usize..4) {
        let s = &builtin_schemes()[k];
        let p = random_scheme_pattern(&mut ChaCha8Rng::seed_from_u64(a), s, 3, 6);
        let want = scheme_channel(&p, s).unwrap();
        let (c, _) = scheme_to_fanout_circuit(&p, s).unwrap();
        prop_assert!(same(&circuit_channel(&c, Default::default()).unwrap(), &want), "{}", s.name);
    }
}
