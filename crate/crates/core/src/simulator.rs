//! Schrödinger full state-vector simulation.
//!
//! The simulator holds all 2^n amplitudes and applies one gate per pass, in
//! place. A single-qubit gate on qubit q mixes every amplitude pair
//! (l, l + 2^q) with bit q of l clear. A two-qubit gate on q1 < q2 gathers
//! `(v[l], v[l+2^q1], v[l+2^q2], v[l+2^q1+2^q2])`, applies the 4x4 matrix and
//! scatters back; element k of the gathered vector has bit q1 = k&1 and
//! bit q2 = (k>>1)&1.
//!
//! Gate passes may be partitioned across rayon workers; every amplitude is
//! written exactly once per gate from inputs read before any write, so the
//! result is bit-identical for every worker count.

use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::dist::ExplicitDistribution;
use crate::error::{Error, Result};
use crate::gates::{GateMatrix, Mat2, Mat4};
use crate::Complex;

/// Uniform-admixture experimental noise: with fidelity f the observed
/// distribution is f·P + (1-f)·Uniform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    fidelity: f64,
}

impl NoiseModel {
    pub fn new(fidelity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fidelity) || !fidelity.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "noise fidelity {fidelity} outside [0, 1]"
            )));
        }
        Ok(NoiseModel { fidelity })
    }

    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }
}

pub fn apply_noise(dist: &ExplicitDistribution, noise: &NoiseModel) -> ExplicitDistribution {
    dist.mix_with_uniform(noise.fidelity)
        .expect("fidelity validated at construction")
}

/// Simulation limits. The default cap of 1 GiB admits up to 26 qubits
/// (16 bytes per amplitude).
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub mem_cap_gib: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { mem_cap_gib: 1.0 }
    }
}

impl SimOptions {
    fn check(&self, n: usize) -> Result<()> {
        crate::bits::check_width(n)?;
        let needed_gib = (1u64 << n) as f64 * 16.0 / (1u64 << 30) as f64;
        if needed_gib > self.mem_cap_gib {
            return Err(Error::ResourceCap { n, needed_gib, cap_gib: self.mem_cap_gib });
        }
        Ok(())
    }
}

/// 2^n complex amplitudes, stored flat (interleaved re/im in memory).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex>,
}

/// Serial cutoff: blocks at least this large are processed by one worker.
const PAR_BLOCK: usize = 1 << 14;

impl StateVector {
    /// |0...0⟩ under the default memory cap.
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::zero_state_with(n, &SimOptions::default())
    }

    pub fn zero_state_with(n: usize, opts: &SimOptions) -> Result<Self> {
        opts.check(n)?;
        let mut amps = vec![Complex::ZERO; 1 << n];
        amps[0] = Complex::ONE;
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        crate::dist::compensated_sum(self.amps.iter().map(|a| a.norm_sqr()))
    }

    /// Applies a 2x2 unitary to qubit q.
    pub fn apply_single(&mut self, q: usize, m: &Mat2) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitIndex { index: q, n: self.n });
        }
        let stride = 1usize << q;
        let [[m00, m01], [m10, m11]] = *m;
        let kernel = |block: &mut [Complex]| {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = m00 * x + m01 * y;
                *b = m10 * x + m11 * y;
            }
        };
        if self.amps.len() <= PAR_BLOCK {
            self.amps.chunks_exact_mut(2 * stride).for_each(kernel);
        } else {
            self.amps.par_chunks_exact_mut(2 * stride).for_each(kernel);
        }
        Ok(())
    }

    /// Applies a 4x4 unitary to qubits q1 < q2 via the stride-2^q1/2^q2
    /// gather/scatter loop.
    pub fn apply_two(&mut self, q1: usize, q2: usize, m: &Mat4) -> Result<()> {
        if q1 >= self.n {
            return Err(Error::QubitIndex { index: q1, n: self.n });
        }
        if q2 >= self.n {
            return Err(Error::QubitIndex { index: q2, n: self.n });
        }
        if q1 >= q2 {
            return Err(Error::InvalidGate(format!(
                "two-qubit target order requires q1 < q2, got ({q1}, {q2})"
            )));
        }
        let s1 = 1usize << q1;
        let s2 = 1usize << q2;
        let m = *m;
        let kernel = move |block: &mut [Complex]| {
            // iterate values for q1 < q < q2, then q < q1
            for j in (0..s2).step_by(2 * s1) {
                for k in 0..s1 {
                    let l = j + k;
                    let v0 = [block[l], block[l + s1], block[l + s2], block[l + s1 + s2]];
                    let mut v1 = [Complex::ZERO; 4];
                    for (row, out) in m.iter().zip(v1.iter_mut()) {
                        *out = row[0] * v0[0] + row[1] * v0[1] + row[2] * v0[2] + row[3] * v0[3];
                    }
                    block[l] = v1[0];
                    block[l + s1] = v1[1];
                    block[l + s2] = v1[2];
                    block[l + s1 + s2] = v1[3];
                }
            }
        };
        // iterate over all values of qubits q > q2 in parallel blocks
        if self.amps.len() <= PAR_BLOCK {
            self.amps.chunks_exact_mut(2 * s2).for_each(kernel);
        } else {
            self.amps.par_chunks_exact_mut(2 * s2).for_each(kernel);
        }
        Ok(())
    }

    /// Applies a whole circuit: cycles in order, the single-qubit layer (in
    /// qubit order) before the two-qubit layer within each cycle.
    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.n != self.n {
            return Err(Error::WidthMismatch { left: c.n, right: self.n });
        }
        c.validate()?;
        let pair_matrix = c
            .two_qubit
            .to_gate()
            .two_qubit_matrix()
            .expect("two-qubit kind has a 4x4 matrix");
        for cycle in &c.cycles {
            for (q, g) in cycle.singles.iter().enumerate() {
                let m = g.to_gate().single_matrix().expect("single kind has a 2x2 matrix");
                self.apply_single(q, &m)?;
            }
            for &(i, j) in &cycle.pairs {
                self.apply_two(i, j, &pair_matrix)?;
            }
        }
        Ok(())
    }

    /// Applies an arbitrary gate to explicit targets (tests, DBM checks).
    pub fn apply_gate(&mut self, gate: &crate::gates::Gate, targets: &[usize]) -> Result<()> {
        match (gate.matrix(), targets) {
            (GateMatrix::Single(m), &[q]) => self.apply_single(q, &m),
            (GateMatrix::Two(m), &[q1, q2]) => self.apply_two(q1, q2, &m),
            _ => Err(Error::InvalidGate(format!(
                "gate {gate:?} does not take {} targets",
                targets.len()
            ))),
        }
    }

    /// Measurement distribution |amp|^2, renormalized against accumulated
    /// rounding (the raw norm is checked to be within 1e-9 of 1 first).
    pub fn probabilities(&self) -> Result<ExplicitDistribution> {
        crate::dist::check_explicit_width(self.n)?;
        let norm = self.norm_sq();
        if (norm - 1.0).abs() > crate::dist::NORM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "state norm² drifted to {norm}"
            )));
        }
        ExplicitDistribution::from_weights(self.n, self.amps.iter().map(|a| a.norm_sqr()).collect())
    }
}

/// Runs a circuit from |0...0⟩.
pub fn simulate(c: &Circuit, opts: &SimOptions) -> Result<StateVector> {
    let mut state = StateVector::zero_state_with(c.n, opts)?;
    state.apply_circuit(c)?;
    Ok(state)
}

/// P(j) = |⟨j|U|0^n⟩|² as an explicit distribution.
pub fn output_distribution(c: &Circuit, opts: &SimOptions) -> Result<ExplicitDistribution> {
    simulate(c, opts)?.probabilities()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Connectivity, TwoQubit};
    use crate::gates::{hadamard, Gate};

    fn assert_close(a: Complex, b: Complex, tol: f64) {
        assert!((a - b).norm() < tol, "{a} vs {b}");
    }

    #[test]
    fn sqrt_x_on_zero() {
        let mut s = StateVector::zero_state(1).unwrap();
        s.apply_single(0, &Gate::SqrtX.single_matrix().unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(s.amps()[0], Complex::new(h, 0.0), 1e-15);
        assert_close(s.amps()[1], Complex::new(0.0, -h), 1e-15);
    }

    #[test]
    fn identity_leaves_state_bit_for_bit() {
        let mut s = StateVector::zero_state(3).unwrap();
        s.apply_single(1, &Gate::SqrtW.single_matrix().unwrap()).unwrap();
        let before = s.clone();
        let eye = [[Complex::ONE, Complex::ZERO], [Complex::ZERO, Complex::ONE]];
        s.apply_single(2, &eye).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn sqrt_x_twice_is_x_up_to_phase() {
        let mut s = StateVector::zero_state(1).unwrap();
        let m = Gate::SqrtX.single_matrix().unwrap();
        s.apply_single(0, &m).unwrap();
        s.apply_single(0, &m).unwrap();
        // explicit 2x2 product oracle: √X·√X = [[0, -i], [-i, 0]]
        assert_close(s.amps()[0], Complex::ZERO, 1e-15);
        assert_close(s.amps()[1], Complex::new(0.0, -1.0), 1e-15);
    }

    #[test]
    fn cz_flips_sign_of_11_only() {
        let mut s = StateVector::zero_state(2).unwrap();
        let h = hadamard();
        s.apply_single(0, &h).unwrap();
        s.apply_single(1, &h).unwrap();
        s.apply_two(0, 1, &Gate::Cz.two_qubit_matrix().unwrap()).unwrap();
        for idx in 0..4 {
            let sign = if idx == 3 { -0.5 } else { 0.5 };
            assert_close(s.amps()[idx], Complex::new(sign, 0.0), 1e-15);
        }
    }

    #[test]
    fn fsim_half_turn_swaps_01_to_10() {
        // basis vector |01⟩ means qubit 0 = 1: index 1
        let mut s = StateVector::zero_state(2).unwrap();
        s.apply_single(0, &[[Complex::ZERO, Complex::ONE], [Complex::ONE, Complex::ZERO]])
            .unwrap(); // X on qubit 0
        let m = Gate::FSim { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 }
            .two_qubit_matrix()
            .unwrap();
        s.apply_two(0, 1, &m).unwrap();
        // 4x4 matrix applied to e_1 gives -i·e_2
        assert_close(s.amps()[1], Complex::ZERO, 1e-15);
        assert_close(s.amps()[2], Complex::new(0.0, -1.0), 1e-15);
    }

    #[test]
    fn empty_circuit_is_point_mass_on_zero() {
        let c = Circuit::empty(3, TwoQubit::Cz).unwrap();
        let d = output_distribution(&c, &SimOptions::default()).unwrap();
        assert_eq!(d.prob(0), 1.0);
    }

    #[test]
    fn norm_preserved_across_cycles() {
        let c = Circuit::random(
            8,
            10,
            &Connectivity::Chain,
            TwoQubit::FSim { theta: 1.1, phi: 0.4 },
            5,
        )
        .unwrap();
        let s = simulate(&c, &SimOptions::default()).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn invalid_targets_error() {
        let mut s = StateVector::zero_state(2).unwrap();
        let eye2 = [[Complex::ONE, Complex::ZERO], [Complex::ZERO, Complex::ONE]];
        assert!(s.apply_single(2, &eye2).is_err());
        let cz = Gate::Cz.two_qubit_matrix().unwrap();
        assert!(s.apply_two(1, 1, &cz).is_err());
        assert!(s.apply_two(1, 0, &cz).is_err());
        assert!(s.apply_two(0, 5, &cz).is_err());
    }

    #[test]
    fn memory_cap_guards() {
        let tight = SimOptions { mem_cap_gib: 1.0 / 1024.0 }; // 1 MiB -> max n = 16
        assert!(StateVector::zero_state_with(16, &tight).is_ok());
        assert!(matches!(
            StateVector::zero_state_with(17, &tight),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn noise_mixture_endpoints_and_affinity() {
        let c = Circuit::random(4, 4, &Connectivity::Chain, TwoQubit::Cz, 3).unwrap();
        let d = output_distribution(&c, &SimOptions::default()).unwrap();
        let ident = apply_noise(&d, &NoiseModel::new(1.0).unwrap());
        assert_eq!(ident, d);
        let flat = apply_noise(&d, &NoiseModel::new(0.0).unwrap());
        for p in flat.probs() {
            assert!((p - 1.0 / 16.0).abs() < 1e-15);
        }
        let half = apply_noise(&d, &NoiseModel::new(0.5).unwrap());
        for i in 0..16 {
            let expect = 0.5 * d.prob(i) + 0.5 / 16.0;
            assert!((half.prob(i) - expect).abs() < 1e-15);
        }
    }
}
