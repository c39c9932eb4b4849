//! The classical Porter-Thomas distribution family.
//!
//! `porter_thomas_probs` draws the probability profile of a Haar-random
//! state: 2^n i.i.d. unit-rate exponential weights, normalized to sum 1. The
//! fraction of entries with probability in [p, p+dp] then follows
//! p·2^{2n}·e^{-2^n·p}·dp. Orderings assign that fixed multiset of
//! probabilities to bitstrings in three ways: by integer value (descending),
//! by subset parity over a mask (even-parity strings first), or by a seeded
//! random permutation.

use crate::dist::{check_explicit_width, ExplicitDistribution};
use crate::error::{Error, Result};
use crate::rng::Prng;
use crate::samples::SampleSet;

/// An n-bit parity mask; m is its Hamming weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetMask {
    y: u64,
    n: usize,
}

impl SubsetMask {
    pub fn new(y: u64, n: usize) -> Result<Self> {
        crate::bits::check_width(n)?;
        if y >> n != 0 {
            return Err(Error::Parse(format!("mask {y:#b} does not fit in {n} bits")));
        }
        Ok(SubsetMask { y, n })
    }

    /// Uniformly random mask with exactly m set bits.
    pub fn random(n: usize, m: usize, rng: &mut Prng) -> Result<Self> {
        crate::bits::check_width(n)?;
        if m > n {
            return Err(Error::Parse(format!("mask weight {m} exceeds {n} bits")));
        }
        // Fisher-Yates prefix over qubit positions
        let mut positions: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.next_below(i as u64 + 1) as usize;
            positions.swap(i, j);
        }
        let y = positions[..m].iter().fold(0u64, |acc, &q| acc | (1 << q));
        Ok(SubsetMask { y, n })
    }

    pub fn mask(&self) -> u64 {
        self.y
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of set bits, m.
    pub fn weight(&self) -> usize {
        self.y.count_ones() as usize
    }

    /// mod(k·y, 2).
    pub fn parity(&self, k: u64) -> u8 {
        ((k & self.y).count_ones() & 1) as u8
    }
}

/// How probabilities are assigned to bitstrings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ordering {
    /// Largest probability on bitstring 0; probability decreases as the
    /// integer value of the bitstring increases.
    Integer,
    /// Integer order, reordered so even-subset-parity strings take the
    /// largest probabilities, preserving relative order within each parity
    /// class.
    SubsetParity(SubsetMask),
    /// A uniformly random bijection drawn from the seed.
    RandomPermutation { seed: u64 },
}

impl Ordering {
    pub fn tag(&self) -> String {
        match self {
            Ordering::Integer => "integer".into(),
            Ordering::SubsetParity(m) => format!("parity_m{}_y{:#x}", m.weight(), m.mask()),
            Ordering::RandomPermutation { seed } => format!("permuted_p{seed}"),
        }
    }
}

/// Porter-Thomas probability profile: normalized i.i.d. Exp(1) weights.
pub fn porter_thomas_probs(n: usize, rng: &mut Prng) -> Result<ExplicitDistribution> {
    check_explicit_width(n)?;
    let weights: Vec<f64> = (0..1usize << n).map(|_| rng.next_exp()).collect();
    ExplicitDistribution::from_weights(n, weights)
}

/// Reassigns the probability multiset of `dist` to bitstrings according to
/// `ordering`. The multiset of values is preserved exactly.
pub fn apply_ordering(
    dist: &ExplicitDistribution,
    ordering: &Ordering,
) -> Result<ExplicitDistribution> {
    let n = dist.n();
    let len = dist.len();
    match ordering {
        Ordering::Integer => {
            let mut sorted = dist.probs().to_vec();
            sorted.sort_unstable_by(|a, b| b.total_cmp(a));
            ExplicitDistribution::new(n, sorted)
        }
        Ordering::SubsetParity(mask) => {
            if mask.n() != n {
                return Err(Error::WidthMismatch { left: mask.n(), right: n });
            }
            let mut sorted = dist.probs().to_vec();
            sorted.sort_unstable_by(|a, b| b.total_cmp(a));
            // stable partition of integer order by parity: evens keep their
            // relative order and take the largest probabilities
            let mut out = vec![0.0; len];
            let mut rank = 0usize;
            for wanted in [0u8, 1u8] {
                for k in 0..len as u64 {
                    if mask.parity(k) == wanted {
                        out[k as usize] = sorted[rank];
                        rank += 1;
                    }
                }
            }
            ExplicitDistribution::new(n, out)
        }
        Ordering::RandomPermutation { seed } => {
            let mut rng = Prng::new(*seed);
            let mut perm: Vec<usize> = (0..len).collect();
            for i in (1..len).rev() {
                let j = rng.next_below(i as u64 + 1) as usize;
                perm.swap(i, j);
            }
            let mut out = vec![0.0; len];
            for (k, &p) in perm.iter().zip(dist.probs()) {
                out[*k] = p;
            }
            ExplicitDistribution::new(n, out)
        }
    }
}

/// Generates a full dataset: Porter-Thomas profile, ordering, then samples.
/// All seeds derive from `seed` and are recorded in the sample metadata.
pub fn make_dataset(
    n: usize,
    ordering: &Ordering,
    sample_count: usize,
    seed: u64,
) -> Result<(ExplicitDistribution, SampleSet)> {
    if sample_count == 0 {
        return Err(Error::EmptyRequest);
    }
    let pt_seed = Prng::derive_seed(seed, 0);
    let sample_seed = Prng::derive_seed(seed, 1);
    let mut rng = Prng::new(pt_seed);
    let raw = porter_thomas_probs(n, &mut rng)?;
    let dist = apply_ordering(&raw, ordering)?;
    let tag = format!("pt_{}_n{}_s{}", ordering.tag(), n, seed);
    let samples = dist.sample_seeded(sample_count, sample_seed, &tag)?;
    Ok((dist, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;

    #[test]
    fn two_entries_sum_to_one() {
        let mut rng = Prng::new(0);
        let d = porter_thomas_probs(1, &mut rng).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.probs().iter().all(|&p| p > 0.0 && p < 1.0));
    }

    #[test]
    fn entropy_near_reference() {
        let mut worst: f64 = 0.0;
        for seed in 0..20 {
            let mut rng = Prng::new(seed);
            let d = porter_thomas_probs(12, &mut rng).unwrap();
            let gap = (metrics::entropy(&d) - metrics::pt_reference_entropy(12)).abs();
            worst = worst.max(gap);
        }
        assert!(worst < 0.05, "worst entropy gap {worst}");
    }

    #[test]
    fn exponential_tail_law() {
        // fraction of entries with p > t/2^n is about e^{-t}
        let mut rng = Prng::new(5);
        let d = porter_thomas_probs(12, &mut rng).unwrap();
        let dim = d.len() as f64;
        for t in [1.0f64, 2.0, 3.0] {
            let frac = d.probs().iter().filter(|&&p| p > t / dim).count() as f64 / dim;
            assert!((frac - (-t).exp()).abs() < 0.01, "t={t}: frac {frac}");
        }
    }

    #[test]
    fn integer_order_is_monotone_nonincreasing() {
        let mut rng = Prng::new(1);
        let d = porter_thomas_probs(8, &mut rng).unwrap();
        let ord = apply_ordering(&d, &Ordering::Integer).unwrap();
        for w in ord.probs().windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn subset_parity_example_n2() {
        // probs (0.4, 0.3, 0.2, 0.1) already sorted; mask selects qubit 0.
        // evens {00, 10} take 0.4 and 0.3 in order, odds {01, 11} the rest.
        let d = ExplicitDistribution::new(2, vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let mask = SubsetMask::new(0b01, 2).unwrap();
        let ord = apply_ordering(&d, &Ordering::SubsetParity(mask)).unwrap();
        assert_eq!(ord.probs(), &[0.4, 0.2, 0.3, 0.1]);
    }

    #[test]
    fn zero_mask_equals_integer_order() {
        let mut rng = Prng::new(2);
        let d = porter_thomas_probs(6, &mut rng).unwrap();
        let a = apply_ordering(&d, &Ordering::Integer).unwrap();
        let mask = SubsetMask::new(0, 6).unwrap();
        let b = apply_ordering(&d, &Ordering::SubsetParity(mask)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_mask_even_parity_dominates() {
        let mut rng = Prng::new(3);
        let d = porter_thomas_probs(6, &mut rng).unwrap();
        let mask = SubsetMask::new((1 << 6) - 1, 6).unwrap();
        let ord = apply_ordering(&d, &Ordering::SubsetParity(mask)).unwrap();
        let min_even = (0..64u64)
            .filter(|&k| mask.parity(k) == 0)
            .map(|k| ord.prob(k))
            .fold(f64::INFINITY, f64::min);
        let max_odd = (0..64u64)
            .filter(|&k| mask.parity(k) == 1)
            .map(|k| ord.prob(k))
            .fold(0.0, f64::max);
        assert!(min_even >= max_odd);
    }

    #[test]
    fn orderings_preserve_probability_multiset_and_entropy() {
        let mut rng = Prng::new(4);
        let d = porter_thomas_probs(8, &mut rng).unwrap();
        let h = metrics::entropy(&d);
        let mask = SubsetMask::random(8, 3, &mut rng).unwrap();
        for ordering in [
            Ordering::Integer,
            Ordering::SubsetParity(mask),
            Ordering::RandomPermutation { seed: 11 },
        ] {
            let o = apply_ordering(&d, &ordering).unwrap();
            let mut a = d.probs().to_vec();
            let mut b = o.probs().to_vec();
            a.sort_unstable_by(f64::total_cmp);
            b.sort_unstable_by(f64::total_cmp);
            assert_eq!(a, b, "{ordering:?}");
            assert_eq!(metrics::entropy(&o), h, "{ordering:?}");
        }
    }

    #[test]
    fn permutation_round_trip_restores_distribution() {
        let mut rng = Prng::new(6);
        let d = porter_thomas_probs(7, &mut rng).unwrap();
        let fwd = apply_ordering(&d, &Ordering::RandomPermutation { seed: 9 }).unwrap();
        // rebuild the same permutation and invert it
        let len = d.len();
        let mut prng = Prng::new(9);
        let mut perm: Vec<usize> = (0..len).collect();
        for i in (1..len).rev() {
            let j = prng.next_below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        let mut back = vec![0.0; len];
        for (k, &dst) in perm.iter().enumerate() {
            back[k] = fwd.prob(dst as u64);
        }
        assert_eq!(back, d.probs());
    }

    #[test]
    fn dataset_records_seed_and_errors_on_zero_count() {
        let (dist, samples) = make_dataset(6, &Ordering::Integer, 1000, 42).unwrap();
        assert_eq!(dist.n(), 6);
        assert_eq!(samples.len(), 1000);
        assert!(samples.source_tag().contains("integer"));
        assert!(samples.seed().is_some());
        assert!(matches!(make_dataset(6, &Ordering::Integer, 0, 42), Err(Error::EmptyRequest)));
    }

    #[test]
    fn mask_weight_validation() {
        assert!(SubsetMask::new(0b100, 2).is_err());
        let mut rng = Prng::new(7);
        assert!(SubsetMask::random(12, 28, &mut rng).is_err());
        let m = SubsetMask::random(12, 5, &mut rng).unwrap();
        assert_eq!(m.weight(), 5);
    }
}
