//! Property tests for serialization round trips and ordering invariants.

use proptest::prelude::*;

use qsl_core::circuit::{Circuit, Connectivity, TwoQubit};
use qsl_core::porter_thomas::{apply_ordering, Ordering, SubsetMask};
use qsl_core::{ExplicitDistribution, Prng, SampleSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_json_round_trip(
        n in 2usize..8,
        depth in 1usize..6,
        seed in any::<u64>(),
        theta in -3.2f64..3.2,
        phi in -3.2f64..3.2,
        use_cz in any::<bool>(),
    ) {
        let two_qubit = if use_cz { TwoQubit::Cz } else { TwoQubit::FSim { theta, phi } };
        let c = Circuit::random(n, depth, &Connectivity::Chain, two_qubit, seed).unwrap();
        let back = Circuit::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(c, back);
    }

    #[test]
    fn sample_text_round_trip(n in 1usize..16, seed in any::<u64>(), count in 1usize..200) {
        let mut rng = Prng::new(seed);
        let values: Vec<u64> = (0..count).map(|_| rng.next_below(1 << n)).collect();
        let s = SampleSet::new(n, values, "prop", None).unwrap();
        let mut buf = Vec::new();
        s.write_text(&mut buf).unwrap();
        let back = SampleSet::read_text(buf.as_slice(), "prop").unwrap();
        prop_assert_eq!(back.values(), s.values());
        prop_assert_eq!(back.n(), n);
    }

    #[test]
    fn orderings_permute_probability_values(
        n in 1usize..8,
        seed in any::<u64>(),
        mask_seed in any::<u64>(),
        perm_seed in any::<u64>(),
    ) {
        let mut rng = Prng::new(seed);
        let d = qsl_core::porter_thomas::porter_thomas_probs(n, &mut rng).unwrap();
        let mut mask_rng = Prng::new(mask_seed);
        let m = mask_rng.next_below(n as u64 + 1) as usize;
        let mask = SubsetMask::random(n, m, &mut mask_rng).unwrap();
        for ordering in [
            Ordering::Integer,
            Ordering::SubsetParity(mask),
            Ordering::RandomPermutation { seed: perm_seed },
        ] {
            let o = apply_ordering(&d, &ordering).unwrap();
            let mut a: Vec<f64> = d.probs().to_vec();
            let mut b: Vec<f64> = o.probs().to_vec();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn integer_order_even_parity_dominates_odd(
        n in 2usize..8,
        seed in any::<u64>(),
        mask_bits in 1usize..4,
    ) {
        let mut rng = Prng::new(seed);
        let d = qsl_core::porter_thomas::porter_thomas_probs(n, &mut rng).unwrap();
        let mask = SubsetMask::random(n, mask_bits.min(n), &mut rng).unwrap();
        let o = apply_ordering(&d, &Ordering::SubsetParity(mask)).unwrap();
        let min_even = (0..1u64 << n)
            .filter(|&k| mask.parity(k) == 0)
            .map(|k| o.prob(k))
            .fold(f64::INFINITY, f64::min);
        let max_odd = (0..1u64 << n)
            .filter(|&k| mask.parity(k) == 1)
            .map(|k| o.prob(k))
            .fold(0.0, f64::max);
        prop_assert!(min_even >= max_odd);
    }

    #[test]
    fn qsld_binary_round_trip(n in 1usize..10, seed in any::<u64>()) {
        let mut rng = Prng::new(seed);
        let d = qsl_core::porter_thomas::porter_thomas_probs(n, &mut rng).unwrap();
        let mut buf = Vec::new();
        d.write_qsld(&mut buf).unwrap();
        let back = ExplicitDistribution::read_qsld(buf.as_slice()).unwrap();
        prop_assert_eq!(d, back);
    }
}
