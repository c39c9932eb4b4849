//! Random circuits in the interlaced-cycle structure, and their JSON format.
//!
//! A circuit on n qubits is a sequence of cycles; each cycle is one layer of
//! single-qubit gates (one per qubit, drawn uniformly from {√X, √Y, √W}) and
//! one layer of two-qubit gates on disjoint pairs chosen by the connectivity
//! pattern for that cycle index.

use serde::{Deserialize, Serialize};

use crate::bits::check_width;
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::rng::Prng;

/// Single-qubit gate drawn in the random layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingleGate {
    SqrtX,
    SqrtY,
    SqrtW,
}

impl SingleGate {
    pub fn to_gate(self) -> Gate {
        match self {
            SingleGate::SqrtX => Gate::SqrtX,
            SingleGate::SqrtY => Gate::SqrtY,
            SingleGate::SqrtW => Gate::SqrtW,
        }
    }
}

/// The circuit-wide two-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwoQubit {
    Cz,
    FSim { theta: f64, phi: f64 },
}

impl TwoQubit {
    pub fn to_gate(self) -> Gate {
        match self {
            TwoQubit::Cz => Gate::Cz,
            TwoQubit::FSim { theta, phi } => Gate::FSim { theta, phi },
        }
    }
}

/// Default fSim angles used when none are given: θ = π/2, φ = π/6.
pub const DEFAULT_FSIM_THETA: f64 = std::f64::consts::FRAC_PI_2;
pub const DEFAULT_FSIM_PHI: f64 = std::f64::consts::FRAC_PI_6;

/// Which qubit pairs the two-qubit layer touches, per cycle index.
///
/// The pattern schedule is explicit data: a chain alternates even/odd
/// offsets (period 2), a grid walks the four coupler phases A, B, C, D
/// (horizontal even column, horizontal odd column, vertical even row,
/// vertical odd row; period 4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Connectivity {
    Chain,
    Grid { rows: usize, cols: usize },
    /// Explicit per-phase pair lists; cycle t uses phase t mod len.
    Explicit(Vec<Vec<(usize, usize)>>),
}

impl Connectivity {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Connectivity::Chain => {
                if n < 2 {
                    return Err(Error::InvalidCircuit(
                        "chain connectivity needs at least 2 qubits".into(),
                    ));
                }
            }
            Connectivity::Grid { rows, cols } => {
                if rows * cols != n {
                    return Err(Error::InvalidCircuit(format!(
                        "grid {rows}x{cols} does not match {n} qubits"
                    )));
                }
                if *rows < 1 || *cols < 1 || rows * cols < 2 {
                    return Err(Error::InvalidCircuit("grid too small".into()));
                }
            }
            Connectivity::Explicit(phases) => {
                if phases.is_empty() || phases.iter().all(|p| p.is_empty()) {
                    return Err(Error::InvalidCircuit("empty connectivity".into()));
                }
                for phase in phases {
                    let mut seen = vec![false; n];
                    for &(i, j) in phase {
                        if i >= j || j >= n {
                            return Err(Error::InvalidCircuit(format!(
                                "pair ({i}, {j}) invalid for {n} qubits"
                            )));
                        }
                        if seen[i] || seen[j] {
                            return Err(Error::InvalidCircuit(format!(
                                "qubit reused within one phase: ({i}, {j})"
                            )));
                        }
                        seen[i] = true;
                        seen[j] = true;
                    }
                }
            }
        }
        Ok(())
    }

    /// Pairs for a given cycle index; pairs are disjoint and i < j.
    pub fn pairs_for_cycle(&self, n: usize, cycle: usize) -> Vec<(usize, usize)> {
        match self {
            Connectivity::Chain => {
                let off = cycle % 2;
                (off..n.saturating_sub(1)).step_by(2).map(|i| (i, i + 1)).collect()
            }
            Connectivity::Grid { rows, cols } => {
                let (rows, cols) = (*rows, *cols);
                let q = |r: usize, c: usize| r * cols + c;
                let mut out = Vec::new();
                match cycle % 4 {
                    phase @ (0 | 1) => {
                        for r in 0..rows {
                            for c in (phase..cols.saturating_sub(1)).step_by(2) {
                                out.push((q(r, c), q(r, c + 1)));
                            }
                        }
                    }
                    phase => {
                        for r in ((phase - 2)..rows.saturating_sub(1)).step_by(2) {
                            for c in 0..cols {
                                out.push((q(r, c), q(r + 1, c)));
                            }
                        }
                    }
                }
                out
            }
            Connectivity::Explicit(phases) => phases[cycle % phases.len()].clone(),
        }
    }

    /// Parses "chain" or "grid:RxC".
    pub fn parse(text: &str) -> Result<Self> {
        if text == "chain" {
            return Ok(Connectivity::Chain);
        }
        if let Some(dims) = text.strip_prefix("grid:") {
            let (r, c) = dims
                .split_once('x')
                .ok_or_else(|| Error::Parse(format!("bad grid spec {text:?}, want grid:RxC")))?;
            let rows = r.parse().map_err(|e| Error::Parse(format!("bad grid rows: {e}")))?;
            let cols = c.parse().map_err(|e| Error::Parse(format!("bad grid cols: {e}")))?;
            return Ok(Connectivity::Grid { rows, cols });
        }
        Err(Error::Parse(format!("unknown connectivity {text:?}")))
    }
}

/// One cycle: a single-qubit layer (applied first) then a two-qubit layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub singles: Vec<SingleGate>,
    pub pairs: Vec<(usize, usize)>,
}

/// A full random circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub seed: u64,
    pub two_qubit: TwoQubit,
    pub cycles: Vec<Cycle>,
}

impl Circuit {
    /// Draws a random circuit: per cycle, one single-qubit gate per qubit
    /// chosen i.i.d. uniformly from {√X, √Y, √W}, then the connectivity's
    /// pairs for that cycle index. Deterministic given the seed.
    pub fn random(
        n: usize,
        depth: usize,
        connectivity: &Connectivity,
        two_qubit: TwoQubit,
        seed: u64,
    ) -> Result<Self> {
        Self::random_with(n, depth, connectivity, two_qubit, seed, false)
    }

    /// As [`Circuit::random`]; with `no_consecutive_repeat` set, each qubit's
    /// gate is drawn from the two choices differing from its previous cycle.
    pub fn random_with(
        n: usize,
        depth: usize,
        connectivity: &Connectivity,
        two_qubit: TwoQubit,
        seed: u64,
        no_consecutive_repeat: bool,
    ) -> Result<Self> {
        check_width(n)?;
        if n < 2 {
            return Err(Error::InvalidCircuit("need at least 2 qubits for pair layers".into()));
        }
        if depth == 0 {
            return Err(Error::InvalidCircuit("depth must be at least 1".into()));
        }
        connectivity.validate(n)?;
        const SET: [SingleGate; 3] = [SingleGate::SqrtX, SingleGate::SqrtY, SingleGate::SqrtW];
        let mut rng = Prng::new(seed);
        let mut cycles: Vec<Cycle> = Vec::with_capacity(depth);
        for cycle in 0..depth {
            let singles = (0..n)
                .map(|q| {
                    let previous = cycle.checked_sub(1).map(|t| cycles[t].singles[q]);
                    match previous {
                        Some(prev) if no_consecutive_repeat => {
                            let others: Vec<SingleGate> =
                                SET.iter().copied().filter(|g| *g != prev).collect();
                            others[rng.next_below(2) as usize]
                        }
                        _ => SET[rng.next_below(3) as usize],
                    }
                })
                .collect();
            let pairs = connectivity.pairs_for_cycle(n, cycle);
            cycles.push(Cycle { singles, pairs });
        }
        let c = Circuit { n, seed, two_qubit, cycles };
        c.validate()?;
        Ok(c)
    }

    /// A depth-0 circuit (identity); useful as a pipeline smoke input.
    pub fn empty(n: usize, two_qubit: TwoQubit) -> Result<Self> {
        check_width(n)?;
        Ok(Circuit { n, seed: 0, two_qubit, cycles: Vec::new() })
    }

    pub fn depth(&self) -> usize {
        self.cycles.len()
    }

    pub fn single_gate_count(&self) -> usize {
        self.cycles.iter().map(|c| c.singles.len()).sum()
    }

    pub fn pair_gate_count(&self) -> usize {
        self.cycles.iter().map(|c| c.pairs.len()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        check_width(self.n)?;
        if let TwoQubit::FSim { theta, phi } = self.two_qubit {
            if !theta.is_finite() || !phi.is_finite() {
                return Err(Error::InvalidGate(format!("fsim angles ({theta}, {phi})")));
            }
        }
        for (t, cycle) in self.cycles.iter().enumerate() {
            if cycle.singles.len() != self.n {
                return Err(Error::InvalidCircuit(format!(
                    "cycle {t}: {} single gates for {} qubits",
                    cycle.singles.len(),
                    self.n
                )));
            }
            let mut seen = vec![false; self.n];
            for &(i, j) in &cycle.pairs {
                if i >= j {
                    return Err(Error::InvalidCircuit(format!(
                        "cycle {t}: pair ({i}, {j}) must have i < j"
                    )));
                }
                if j >= self.n {
                    return Err(Error::InvalidCircuit(format!(
                        "cycle {t}: pair ({i}, {j}) out of range"
                    )));
                }
                if seen[i] || seen[j] {
                    return Err(Error::InvalidCircuit(format!(
                        "cycle {t}: qubit touched by two pairs: ({i}, {j})"
                    )));
                }
                seen[i] = true;
                seen[j] = true;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = CircuitFile {
            version: 1,
            n_qubits: self.n,
            seed: self.seed,
            two_qubit: match self.two_qubit {
                TwoQubit::Cz => TwoQubitFile { kind: "cz".into(), theta: 0.0, phi: 0.0 },
                TwoQubit::FSim { theta, phi } => {
                    TwoQubitFile { kind: "fsim".into(), theta, phi }
                }
            },
            cycles: self
                .cycles
                .iter()
                .map(|c| CycleFile { singles: c.singles.clone(), pairs: c.pairs.clone() })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("circuit serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CircuitFile = serde_json::from_str(text)?;
        if file.version != 1 {
            return Err(Error::Parse(format!("unsupported circuit version {}", file.version)));
        }
        let two_qubit = match file.two_qubit.kind.as_str() {
            "cz" => TwoQubit::Cz,
            "fsim" => TwoQubit::FSim { theta: file.two_qubit.theta, phi: file.two_qubit.phi },
            other => return Err(Error::Parse(format!("unknown two-qubit kind {other:?}"))),
        };
        let circuit = Circuit {
            n: file.n_qubits,
            seed: file.seed,
            two_qubit,
            cycles: file
                .cycles
                .into_iter()
                .map(|c| Cycle { singles: c.singles, pairs: c.pairs })
                .collect(),
        };
        circuit.validate()?;
        Ok(circuit)
    }

    pub fn write_file(&self, path: &std::path::Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }

    pub fn read_file(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

// On-disk schema. Angles serialize as shortest round-trip decimals, which is
// lossless for f64.
#[derive(Serialize, Deserialize)]
struct CircuitFile {
    version: u32,
    n_qubits: usize,
    seed: u64,
    two_qubit: TwoQubitFile,
    cycles: Vec<CycleFile>,
}

#[derive(Serialize, Deserialize)]
struct TwoQubitFile {
    kind: String,
    theta: f64,
    phi: f64,
}

#[derive(Serialize, Deserialize)]
struct CycleFile {
    singles: Vec<SingleGate>,
    pairs: Vec<(usize, usize)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_pairs_alternate() {
        let c = Circuit::random(4, 2, &Connectivity::Chain, TwoQubit::Cz, 1).unwrap();
        assert_eq!(c.cycles[0].pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(c.cycles[1].pairs, vec![(1, 2)]);
    }

    #[test]
    fn same_seed_same_circuit() {
        let a = Circuit::random(6, 5, &Connectivity::Chain, TwoQubit::Cz, 42).unwrap();
        let b = Circuit::random(6, 5, &Connectivity::Chain, TwoQubit::Cz, 42).unwrap();
        assert_eq!(a, b);
        let c = Circuit::random(6, 5, &Connectivity::Chain, TwoQubit::Cz, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn grid_phases_cover_all_couplers() {
        let g = Connectivity::Grid { rows: 3, cols: 4 };
        g.validate(12).unwrap();
        let mut all: Vec<(usize, usize)> = (0..4).flat_map(|t| g.pairs_for_cycle(12, t)).collect();
        all.sort_unstable();
        all.dedup();
        // 3 rows x 3 horizontal + 2 x 4 vertical couplers
        assert_eq!(all.len(), 9 + 8);
        for t in 0..4 {
            let pairs = g.pairs_for_cycle(12, t);
            let mut seen = [false; 12];
            for (i, j) in pairs {
                assert!(!seen[i] && !seen[j]);
                seen[i] = true;
                seen[j] = true;
            }
        }
    }

    #[test]
    fn pairs_disjoint_in_every_generated_cycle() {
        for seed in 0..20 {
            let c = Circuit::random(
                12,
                8,
                &Connectivity::Grid { rows: 3, cols: 4 },
                TwoQubit::FSim { theta: DEFAULT_FSIM_THETA, phi: DEFAULT_FSIM_PHI },
                seed,
            )
            .unwrap();
            c.validate().unwrap();
        }
    }

    #[test]
    fn no_consecutive_repeat_flag() {
        let c = Circuit::random_with(6, 10, &Connectivity::Chain, TwoQubit::Cz, 5, true).unwrap();
        for w in c.cycles.windows(2) {
            for q in 0..6 {
                assert_ne!(w[0].singles[q], w[1].singles[q], "qubit {q} repeated");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let c = Circuit::random(
            5,
            3,
            &Connectivity::Chain,
            TwoQubit::FSim { theta: 0.123456789012345, phi: -1.5 },
            7,
        )
        .unwrap();
        let text = c.to_json();
        let back = Circuit::from_json(&text).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn parse_rejects_unknown_gate_and_bad_pairs() {
        let c = Circuit::random(3, 1, &Connectivity::Chain, TwoQubit::Cz, 0).unwrap();
        let good = c.to_json();

        let bad_gate = good.replace("sqrt_x", "sqrt_q");
        let err = Circuit::from_json(&bad_gate).unwrap_err();
        assert!(err.to_string().contains("sqrt_q"), "{err}");

        let bad_pair = good.replace("[\n          0,\n          1\n        ]", "[\n          1,\n          1\n        ]");
        assert!(bad_pair.contains("1,\n          1"), "fixture must rewrite the pair");
        let err = Circuit::from_json(&bad_pair).unwrap_err();
        assert!(err.to_string().contains("i < j"), "{err}");
    }

    #[test]
    fn single_qubit_circuit_rejected() {
        let err = Circuit::random(1, 1, &Connectivity::Chain, TwoQubit::Cz, 0).unwrap_err();
        assert!(matches!(err, Error::QubitCount { .. } | Error::InvalidCircuit(_)));
    }

    #[test]
    fn connectivity_parse() {
        assert_eq!(Connectivity::parse("chain").unwrap(), Connectivity::Chain);
        assert_eq!(
            Connectivity::parse("grid:3x4").unwrap(),
            Connectivity::Grid { rows: 3, cols: 4 }
        );
        assert!(Connectivity::parse("ring").is_err());
    }
}
