//! Simulator-equivalence checks.
//!
//! A network built as init + gates is compared against the state-vector
//! simulator on the same gate sequence. The spin-domain initialization
//! carries the uniform superposition, so its oracle prepends one Hadamard
//! per qubit; the bit-domain initialization carries |0...0⟩ and compares
//! directly. Checks report total variation between normalized probability
//! profiles and the worst amplitude error (scale included), and pass at
//! total variation ≤ 1e-6.

use crate::bits::BasisIndex;
use crate::error::Result;
use crate::gates::{hadamard, Gate};
use crate::metrics::total_variation;
use crate::simulator::StateVector;

use super::{DbmConfig, DbmNetwork, PhysicalDomain};

/// Pass tolerance on total variation.
pub const CHECK_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct GateCheck {
    pub label: String,
    pub domain: PhysicalDomain,
    pub total_variation: f64,
    pub max_amplitude_error: f64,
    pub passed: bool,
    pub notes: Vec<String>,
}

impl GateCheck {
    pub fn csv_header() -> &'static str {
        "label,domain,total_variation,max_amplitude_error,passed,notes"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.label,
            match self.domain {
                PhysicalDomain::Bit => "bit",
                PhysicalDomain::Spin => "spin",
            },
            self.total_variation,
            self.max_amplitude_error,
            self.passed,
            self.notes.join("; ")
        )
    }
}

fn apply_gate_to_network(
    net: &mut DbmNetwork,
    gate: &Gate,
    targets: &[usize],
    config: &DbmConfig,
) -> Result<()> {
    match (gate, targets) {
        (Gate::SqrtX, &[q]) => net.apply_single(q, std::f64::consts::FRAC_PI_2, 0.0, config.mediator),
        (Gate::SqrtY, &[q]) => {
            net.apply_single(q, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, config.mediator)
        }
        (Gate::SqrtW, &[q]) => {
            net.apply_single(q, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_4, config.mediator)
        }
        (Gate::U1 { theta, phi }, &[q]) => net.apply_single(q, *theta, *phi, config.mediator),
        (Gate::Cz, &[i, j]) => net.apply_cz_gate(i, j),
        (Gate::FSim { theta, phi }, &[i, j]) => net.apply_fsim_gate(i, j, *theta, *phi, config),
        _ => Err(crate::error::Error::InvalidGate(format!(
            "gate {gate:?} with {} targets",
            targets.len()
        ))),
    }
}

/// Oracle state for the same gate list: |0...0⟩, with one Hadamard per qubit
/// first when the network is spin-initialized.
fn oracle_state(n: usize, gates: &[(Gate, Vec<usize>)], domain: PhysicalDomain) -> Result<StateVector> {
    let mut state = StateVector::zero_state(n)?;
    if domain == PhysicalDomain::Spin {
        let h = hadamard();
        for q in 0..n {
            state.apply_single(q, &h)?;
        }
    }
    for (gate, targets) in gates {
        state.apply_gate(gate, targets)?;
    }
    Ok(state)
}

/// Builds init + gate sequence on `n` qubits and compares against the
/// simulator oracle.
pub fn check_two_gate_circuit(
    n: usize,
    gates: &[(Gate, Vec<usize>)],
    config: &DbmConfig,
) -> Result<GateCheck> {
    let mut net = DbmNetwork::new(n, config.domain)?;
    for (gate, targets) in gates {
        apply_gate_to_network(&mut net, gate, targets, config)?;
    }
    let state = oracle_state(n, gates, config.domain)?;

    let dbm_probs = net.probabilities()?;
    let sim_probs = state.probabilities()?;
    let tv = total_variation(&dbm_probs, &sim_probs)?;

    let mut max_amp = 0.0f64;
    for (idx, &amp) in state.amps().iter().enumerate() {
        let got = net.amplitude(BasisIndex::new(idx as u64, n)?)?;
        max_amp = max_amp.max((got - amp).norm());
    }

    let label = gates
        .iter()
        .map(|(g, t)| format!("{g:?}@{t:?}"))
        .collect::<Vec<_>>()
        .join(" ; ");
    Ok(GateCheck {
        label,
        domain: config.domain,
        total_variation: tv,
        max_amplitude_error: max_amp,
        passed: tv <= CHECK_TOLERANCE,
        notes: net.notes().to_vec(),
    })
}

/// Single gate after initialization.
pub fn check_gate(n: usize, gate: Gate, targets: &[usize], config: &DbmConfig) -> Result<GateCheck> {
    check_two_gate_circuit(n, &[(gate, targets.to_vec())], config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Connectivity, TwoQubit};
    use crate::dbm::{build, size_recurrence, FsimStep3, MediatorForm};
    use crate::Complex;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    fn configs() -> Vec<DbmConfig> {
        vec![
            DbmConfig::default(),
            DbmConfig { domain: PhysicalDomain::Bit, ..Default::default() },
            DbmConfig { mediator: MediatorForm::Integrated, ..Default::default() },
            DbmConfig {
                domain: PhysicalDomain::Bit,
                mediator: MediatorForm::Integrated,
                ..Default::default()
            },
        ]
    }

    #[test]
    fn init_spin_is_uniform() {
        let net = DbmNetwork::new(2, PhysicalDomain::Spin).unwrap();
        assert_eq!(net.hidden_count(), 2);
        let probs = net.probabilities().unwrap();
        for idx in 0..4 {
            assert!((probs.prob(idx) - 0.25).abs() < 1e-12);
        }
        // equal amplitudes, not just equal probabilities
        let a0 = net.amplitude(BasisIndex::new(0, 2).unwrap()).unwrap();
        let a3 = net.amplitude(BasisIndex::new(3, 2).unwrap()).unwrap();
        assert!((a0 - a3).norm() < 1e-12);
        assert!((a0.norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn init_bit_is_zero_state() {
        let net = DbmNetwork::new(2, PhysicalDomain::Bit).unwrap();
        let a0 = net.amplitude(BasisIndex::new(0, 2).unwrap()).unwrap();
        assert!((a0 - Complex::ONE).norm() < 1e-12);
        for idx in 1..4 {
            let a = net.amplitude(BasisIndex::new(idx, 2).unwrap()).unwrap();
            assert!(a.norm() < 1e-12);
        }
    }

    #[test]
    fn factorized_amplitude_matches_naive_sum() {
        for config in configs() {
            let mut net = DbmNetwork::new(2, config.domain).unwrap();
            net.apply_single(0, FRAC_PI_2, FRAC_PI_4, config.mediator).unwrap();
            net.apply_cz_gate(0, 1).unwrap();
            net.apply_single(1, FRAC_PI_2, FRAC_PI_2, config.mediator).unwrap();
            for idx in 0..4 {
                let z = BasisIndex::new(idx, 2).unwrap();
                let a = net.amplitude(z).unwrap();
                let b = net.amplitude_naive(z).unwrap();
                assert!((a - b).norm() < 1e-9, "{config:?} idx {idx}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn bit_init_plus_sqrt_x_gives_one_minus_i_profile() {
        // amplitudes proportional to (1, -i) exactly, like √X|0⟩
        let config = DbmConfig { domain: PhysicalDomain::Bit, ..Default::default() };
        let mut net = DbmNetwork::new(1, PhysicalDomain::Bit).unwrap();
        net.apply_single(0, FRAC_PI_2, 0.0, config.mediator).unwrap();
        let a0 = net.amplitude(BasisIndex::new(0, 1).unwrap()).unwrap();
        let a1 = net.amplitude(BasisIndex::new(1, 1).unwrap()).unwrap();
        let ratio = a1 / a0;
        assert!((ratio - Complex::new(0.0, -1.0)).norm() < 1e-10, "ratio {ratio}");
    }

    #[test]
    fn single_gates_match_oracle_in_both_domains() {
        for config in configs() {
            for gate in [Gate::SqrtX, Gate::SqrtY, Gate::SqrtW] {
                for n in 1..=2 {
                    for q in 0..n {
                        let r = check_gate(n, gate, &[q], &config).unwrap();
                        assert!(
                            r.passed && r.max_amplitude_error < 1e-9,
                            "{gate:?} q={q} n={n} {config:?}: {r:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cz_after_mixing_matches_oracle() {
        for config in configs() {
            let gates =
                vec![(Gate::SqrtW, vec![0]), (Gate::SqrtY, vec![1]), (Gate::Cz, vec![0, 1])];
            let r = check_two_gate_circuit(2, &gates, &config).unwrap();
            assert!(r.passed && r.max_amplitude_error < 1e-9, "{config:?}: {r:?}");
        }
    }

    #[test]
    fn zz_rotation_adds_exact_phase_factor() {
        for domain in [PhysicalDomain::Spin, PhysicalDomain::Bit] {
            let psi = 0.37;
            let mut net = DbmNetwork::new(2, domain).unwrap();
            let before: Vec<Complex> = (0..4)
                .map(|i| net.amplitude(BasisIndex::new(i, 2).unwrap()).unwrap())
                .collect();
            net.apply_zz(0, 1, psi).unwrap();
            for idx in 0..4u64 {
                let b0 = (idx & 1) as u8;
                let b1 = ((idx >> 1) & 1) as u8;
                let v = domain.value(b0) * domain.value(b1);
                let expect = before[idx as usize] * (Complex::new(0.0, -psi * v)).exp();
                let got = net.amplitude(BasisIndex::new(idx, 2).unwrap()).unwrap();
                assert!((got - expect).norm() < 1e-12, "{domain:?} idx {idx}");
            }
        }
    }

    #[test]
    fn zz_sign_flip_conjugates_the_phase() {
        let mut plus = DbmNetwork::new(2, PhysicalDomain::Spin).unwrap();
        let mut minus = DbmNetwork::new(2, PhysicalDomain::Spin).unwrap();
        plus.apply_zz(0, 1, 0.81).unwrap();
        minus.apply_zz(0, 1, -0.81).unwrap();
        for idx in 0..4u64 {
            let z = BasisIndex::new(idx, 2).unwrap();
            let p = plus.amplitude(z).unwrap();
            let m = minus.amplitude(z).unwrap();
            assert!((p - m.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn zz_zero_angle_is_constant_factor_unit() {
        let mut net = DbmNetwork::new(2, PhysicalDomain::Spin).unwrap();
        let before = net.probabilities().unwrap();
        let hidden_before = net.hidden_count();
        net.apply_zz(0, 1, 0.0).unwrap();
        assert_eq!(net.hidden_count(), hidden_before + 1);
        let after = net.probabilities().unwrap();
        assert!(total_variation(&before, &after).unwrap() < 1e-12);
    }

    #[test]
    fn fsim_generic_angle_five_step_matches_oracle() {
        for config in configs() {
            let gates = vec![
                (Gate::SqrtX, vec![0]),
                (Gate::SqrtW, vec![1]),
                (Gate::FSim { theta: std::f64::consts::PI / 3.0, phi: FRAC_PI_6 }, vec![0, 1]),
            ];
            let r = check_two_gate_circuit(2, &gates, &config).unwrap();
            assert!(r.passed && r.max_amplitude_error < 1e-9, "{config:?}: {r:?}");
        }
    }

    #[test]
    fn fsim_half_turn_swap_route_matches_oracle() {
        for config in configs() {
            let gates = vec![
                (Gate::SqrtY, vec![0]),
                (Gate::SqrtX, vec![1]),
                (Gate::FSim { theta: FRAC_PI_2, phi: FRAC_PI_6 }, vec![0, 1]),
            ];
            let r = check_two_gate_circuit(2, &gates, &config).unwrap();
            assert!(r.passed && r.max_amplitude_error < 1e-9, "{config:?}: {r:?}");
            assert!(r.notes.iter().any(|n| n.contains("swap route")));
        }
    }

    #[test]
    fn fsim_half_turn_five_step_reports_discrepancy() {
        // with the swap route disabled, the recipe is structurally
        // degenerate at θ = π/2: the mismatch must be reported, not hidden
        let config = DbmConfig { swap_route: false, ..Default::default() };
        let r = check_gate(2, Gate::FSim { theta: FRAC_PI_2, phi: FRAC_PI_6 }, &[0, 1], &config)
            .unwrap();
        assert!(!r.passed, "degenerate recipe unexpectedly matched: {r:?}");
        assert!(r.notes.iter().any(|n| n.contains("degenerate")), "{r:?}");
    }

    #[test]
    fn fsim_verbatim_step3_reports_discrepancy_at_generic_angle() {
        let config = DbmConfig { step3: FsimStep3::Verbatim, ..Default::default() };
        let r = check_gate(
            2,
            Gate::FSim { theta: std::f64::consts::PI / 3.0, phi: 0.0 },
            &[0, 1],
            &config,
        )
        .unwrap();
        assert!(!r.passed, "verbatim branch unexpectedly matched: {r:?}");
    }

    #[test]
    fn fsim_identity_angles_leave_distribution_unchanged() {
        let mut net = DbmNetwork::new(2, PhysicalDomain::Spin).unwrap();
        let config = DbmConfig::default();
        net.apply_single(0, FRAC_PI_2, 0.0, config.mediator).unwrap();
        let before = net.probabilities().unwrap();
        // θ = 0 has a divergent mediator weight: detected, not silently wrong
        let err = net.apply_fsim(0, 1, 0.0, 0.0, &config).unwrap_err();
        assert!(err.to_string().contains("divergent"));
        let after = net.probabilities().unwrap();
        assert!(total_variation(&before, &after).unwrap() < 1e-12);
    }

    #[test]
    fn fsim_size_delta_is_one_deep_three_hidden() {
        let mut net = DbmNetwork::new(2, PhysicalDomain::Spin).unwrap();
        let config = DbmConfig::default();
        let (h0, d0) = (net.hidden_count(), net.deep_count());
        net.apply_fsim(0, 1, std::f64::consts::PI / 5.0, 0.1, &config).unwrap();
        assert_eq!(net.deep_count(), d0 + 1);
        assert_eq!(net.hidden_count(), h0 + 3);
    }

    #[test]
    fn repeated_gates_on_same_qubit_stay_exact() {
        for config in configs() {
            let gates = vec![
                (Gate::SqrtX, vec![0]),
                (Gate::SqrtY, vec![0]),
                (Gate::SqrtW, vec![0]),
            ];
            let r = check_two_gate_circuit(1, &gates, &config).unwrap();
            assert!(r.passed && r.max_amplitude_error < 1e-9, "{config:?}: {r:?}");
        }
    }

    #[test]
    fn single_qubit_phase_dependence_sits_on_biases() {
        // networks for φ = 0 and φ = π/2 share the same edge weights; the
        // gate phase lands in the physical and deep biases
        let mut a = DbmNetwork::new(1, PhysicalDomain::Spin).unwrap();
        let mut b = DbmNetwork::new(1, PhysicalDomain::Spin).unwrap();
        a.apply_single(0, FRAC_PI_2, 0.0, MediatorForm::Explicit).unwrap();
        b.apply_single(0, FRAC_PI_2, FRAC_PI_2, MediatorForm::Explicit).unwrap();
        assert_eq!(a.edges_ph().len(), b.edges_ph().len());
        for (ea, eb) in a.edges_ph().iter().zip(b.edges_ph()) {
            assert!((ea.w - eb.w).norm() < 1e-12);
        }
        for (ea, eb) in a.edges_hd().iter().zip(b.edges_hd()) {
            assert!((ea.w - eb.w).norm() < 1e-12);
        }
        let domega = b.omega_arr()[0] - a.omega_arr()[0];
        let ddeep = b.deep_bias_arr()[0] - a.deep_bias_arr()[0];
        assert!((domega - Complex::new(0.0, -FRAC_PI_4)).norm() < 1e-12, "{domega}");
        assert!((ddeep - Complex::new(0.0, FRAC_PI_4)).norm() < 1e-12, "{ddeep}");
    }

    #[test]
    fn build_matches_oracle_on_small_circuits() {
        for config in configs() {
            for seed in 0..4 {
                for two_qubit in
                    [TwoQubit::Cz, TwoQubit::FSim { theta: FRAC_PI_2, phi: FRAC_PI_6 }]
                {
                    let c =
                        Circuit::random(2, 2, &Connectivity::Chain, two_qubit, seed).unwrap();
                    let out = build(&c, &config).unwrap();
                    let mut state = StateVector::zero_state(2).unwrap();
                    if config.domain == PhysicalDomain::Spin {
                        let h = hadamard();
                        state.apply_single(0, &h).unwrap();
                        state.apply_single(1, &h).unwrap();
                    }
                    state.apply_circuit(&c).unwrap();
                    let tv = total_variation(
                        &out.network.probabilities().unwrap(),
                        &state.probabilities().unwrap(),
                    )
                    .unwrap();
                    assert!(tv < 1e-9, "seed {seed} {two_qubit:?} {config:?}: tv {tv}");
                }
            }
        }
    }

    #[test]
    fn build_report_counts_match_direct_recount() {
        let c = Circuit::random(
            2,
            1,
            &Connectivity::Chain,
            TwoQubit::FSim { theta: FRAC_PI_2, phi: FRAC_PI_6 },
            3,
        )
        .unwrap();
        let out = build(&c, &DbmConfig::default()).unwrap();
        let last = out.report.final_counts();
        assert_eq!(last.hidden, out.network.hidden_count());
        assert_eq!(last.deep, out.network.deep_count());
        assert_eq!(last.edges, out.network.edge_count());
        // constructed counts differ from the stated counting rules; the
        // comparison output keeps both visible
        let rule = size_recurrence(2, 1);
        let csv = super::super::report::comparison_csv(&rule, &out.report);
        assert!(csv.lines().count() == 3);
    }

    #[test]
    fn monotone_growth_of_units_and_edges() {
        let c = Circuit::random(
            3,
            3,
            &Connectivity::Chain,
            TwoQubit::FSim { theta: 0.9, phi: 0.3 },
            1,
        )
        .unwrap();
        let out = build(&c, &DbmConfig::default()).unwrap();
        for w in out.report.rows.windows(2) {
            assert!(w[1].hidden >= w[0].hidden);
            assert!(w[1].deep >= w[0].deep);
            assert!(w[1].edges >= w[0].edges);
        }
    }

    #[test]
    fn infeasible_latent_count_is_rejected() {
        let c = Circuit::random(
            4,
            4,
            &Connectivity::Chain,
            TwoQubit::FSim { theta: 0.9, phi: 0.3 },
            1,
        )
        .unwrap();
        let out = build(&c, &DbmConfig::default()).unwrap();
        assert!(out.network.hidden_count() + out.network.deep_count() > super::super::LATENT_BOUND);
        let err = out.network.amplitude(BasisIndex::new(0, 4).unwrap()).unwrap_err();
        assert!(matches!(err, crate::error::Error::DbmInfeasible { .. }));
    }

    #[test]
    fn network_json_export_contains_layers() {
        let mut net = DbmNetwork::new(2, PhysicalDomain::Spin).unwrap();
        net.apply_single(0, FRAC_PI_2, 0.0, MediatorForm::Explicit).unwrap();
        let text = net.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["n_physical"], 2);
        assert_eq!(v["domain"], "spin");
        assert!(!v["edges_hd"].as_array().unwrap().is_empty());
    }
}
