//! Exact deep-Boltzmann-machine representation of circuit amplitudes.
//!
//! The network has three layers: physical units (the measured bits), hidden
//! units and deep units. Hidden and deep units take values in {-1, +1};
//! connections exist only between adjacent layers (physical-hidden,
//! hidden-deep) plus optional direct physical-deep couplings. The amplitude
//! of basis state z is
//!
//! ```text
//! Ψ(z) = scale · Σ_{h,d} exp( Σ ω·v + Σ v·W·h + Σ b·h + Σ h·W'·d
//!                              + Σ b'·d + Σ v·W''·d )
//! ```
//!
//! where v are the physical values under the chosen domain convention:
//! bits {0, 1} or spins {+1, -1} with basis 0 ↔ +1. The network is grown
//! gate by gate (see [`apply_single`](DbmNetwork::apply_single),
//! [`apply_zz`](DbmNetwork::apply_zz), [`apply_fsim`](DbmNetwork::apply_fsim)
//! and [`build`]); `scale` absorbs the constant factors each update
//! introduces, so Ψ tracks the true circuit amplitude exactly, not just up
//! to normalization.
//!
//! Initialization follows the identity-coupling rule W_lj = δ_lj. Under
//! the spin convention that network carries the uniform superposition, i.e.
//! the state after one Hadamard per qubit; equivalence checks against the
//! simulator therefore prepend H^n on the simulator side. The bit-domain
//! variant scales the identity couplings by iπ/2, which pins the all-zeros
//! state instead and aligns with the simulator directly. Both conventions
//! are exercised by the oracle tests; spin is the default.

mod build;
mod check;
mod report;

pub use build::{build, BuildOutcome};
pub use check::{check_gate, check_two_gate_circuit, GateCheck};
pub use report::{comparison_csv, size_recurrence, DbmSizeReport, SizeRow};

use crate::bits::BasisIndex;
use crate::error::{Error, Result};
use crate::Complex;

/// Value convention for the physical layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhysicalDomain {
    /// v = bit ∈ {0, 1}.
    Bit,
    /// v = 1 - 2·bit ∈ {+1, -1}; basis 0 maps to +1.
    Spin,
}

impl PhysicalDomain {
    #[inline]
    pub(crate) fn value(&self, bit: u8) -> f64 {
        match self {
            PhysicalDomain::Bit => bit as f64,
            PhysicalDomain::Spin => 1.0 - 2.0 * bit as f64,
        }
    }
}

/// Which right-hand side the fSim mixing-mediator weight uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsimStep3 {
    /// arcosh(1/tan 2θ)/2 as printed in the construction recipe.
    Verbatim,
    /// arcosh(i/tan 2θ)/2, the branch that reproduces the unitary; selected
    /// as default by the simulator-equivalence oracle.
    Corrected,
}

/// How the single-qubit update couples the new physical value to its deep
/// unit: through an explicit mediating hidden unit, or integrated out into
/// a direct physical-deep weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MediatorForm {
    Explicit,
    Integrated,
}

/// Construction switches. Defaults: spin domain, corrected step-3 branch,
/// explicit mediators, exact swap route for the θ = π/2 coupler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DbmConfig {
    pub domain: PhysicalDomain,
    pub step3: FsimStep3,
    pub mediator: MediatorForm,
    pub swap_route: bool,
}

impl Default for DbmConfig {
    fn default() -> Self {
        DbmConfig {
            domain: PhysicalDomain::Spin,
            step3: FsimStep3::Corrected,
            mediator: MediatorForm::Explicit,
            swap_route: true,
        }
    }
}

/// A weighted edge between two units, identified by layer-local indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub w: Complex,
}

/// Brute-force evaluation bound on hidden + deep unit count.
pub const LATENT_BOUND: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct DbmNetwork {
    domain: PhysicalDomain,
    n: usize,
    omega: Vec<Complex>,
    hidden_bias: Vec<Complex>,
    deep_bias: Vec<Complex>,
    /// (physical, hidden, W)
    edges_ph: Vec<Edge>,
    /// (hidden, deep, W')
    edges_hd: Vec<Edge>,
    /// (physical, deep, W'')
    edges_pd: Vec<Edge>,
    scale: Complex,
    notes: Vec<String>,
}

impl DbmNetwork {
    /// Identity-coupled starting network: one hidden unit per physical unit.
    /// Spin domain uses W_ll = 1 (the uniform superposition); bit domain
    /// uses W_ll = iπ/2 (the all-zeros state).
    pub fn new(n: usize, domain: PhysicalDomain) -> Result<Self> {
        if n == 0 || n > crate::MAX_QUBITS {
            return Err(Error::QubitCount { n, max: crate::MAX_QUBITS });
        }
        let (w, scale) = match domain {
            PhysicalDomain::Spin => {
                // raw Ψ = (2·cosh 1)^n uniformly; the uniform state has
                // amplitude 2^{-n/2}
                let raw = (2.0 * 1.0f64.cosh()).powi(n as i32);
                (Complex::ONE, Complex::new(2.0f64.powi(-(n as i32)).sqrt() / raw, 0.0))
            }
            PhysicalDomain::Bit => {
                // raw Ψ(0) = 2^n and Ψ(z≠0) = 0; |0...0⟩ has amplitude 1
                let w = Complex::new(0.0, std::f64::consts::FRAC_PI_2);
                (w, Complex::new(2.0f64.powi(-(n as i32)), 0.0))
            }
        };
        let edges_ph = (0..n).map(|l| Edge { a: l, b: l, w }).collect();
        Ok(DbmNetwork {
            domain,
            n,
            omega: vec![Complex::ZERO; n],
            hidden_bias: vec![Complex::ZERO; n],
            deep_bias: Vec::new(),
            edges_ph,
            edges_hd: Vec::new(),
            edges_pd: Vec::new(),
            scale,
            notes: Vec::new(),
        })
    }

    pub fn domain(&self) -> PhysicalDomain {
        self.domain
    }

    pub fn n_physical(&self) -> usize {
        self.n
    }

    pub fn hidden_count(&self) -> usize {
        self.hidden_bias.len()
    }

    pub fn deep_count(&self) -> usize {
        self.deep_bias.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges_ph.len() + self.edges_hd.len() + self.edges_pd.len()
    }

    pub fn global_scale(&self) -> Complex {
        self.scale
    }

    /// Construction warnings (degenerate parameter domains, route changes).
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn edges_ph(&self) -> &[Edge] {
        &self.edges_ph
    }

    pub fn edges_hd(&self) -> &[Edge] {
        &self.edges_hd
    }

    pub fn edges_pd(&self) -> &[Edge] {
        &self.edges_pd
    }

    pub fn omega_arr(&self) -> &[Complex] {
        &self.omega
    }

    pub fn hidden_bias_arr(&self) -> &[Complex] {
        &self.hidden_bias
    }

    pub fn deep_bias_arr(&self) -> &[Complex] {
        &self.deep_bias
    }

    pub(crate) fn push_note(&mut self, note: String) {
        self.notes.push(note);
    }

    fn check_feasible(&self) -> Result<()> {
        let latent = self.hidden_count() + self.deep_count();
        if latent > LATENT_BOUND {
            return Err(Error::DbmInfeasible { latent, bound: LATENT_BOUND });
        }
        for e in self.edges_ph.iter().chain(&self.edges_hd).chain(&self.edges_pd) {
            if !e.w.is_finite() {
                return Err(Error::Dbm(format!("non-finite weight {} on edge ({}, {})", e.w, e.a, e.b)));
            }
        }
        let all_finite = self
            .omega
            .iter()
            .chain(&self.hidden_bias)
            .chain(&self.deep_bias)
            .all(|c| c.is_finite());
        if !all_finite || !self.scale.is_finite() {
            return Err(Error::Dbm("non-finite bias or scale".into()));
        }
        Ok(())
    }

    /// Exact amplitude: the latent sum over all 2^(H+D) configurations,
    /// evaluated with the hidden layer factorized per deep configuration
    /// (identical sum, fewer operations). Rejects networks over the
    /// brute-force bound or with non-finite weights.
    pub fn amplitude(&self, z: BasisIndex) -> Result<Complex> {
        if z.width() != self.n {
            return Err(Error::WidthMismatch { left: z.width(), right: self.n });
        }
        self.check_feasible()?;
        let values: Vec<f64> =
            (0..self.n).map(|q| self.domain.value(z.bit(q).expect("in range"))).collect();

        // physical-only contributions
        let mut phys = Complex::ZERO;
        for (l, &v) in values.iter().enumerate() {
            phys += self.omega[l] * v;
        }

        // base hidden activations from the physical layer
        let mut theta0 = self.hidden_bias.clone();
        for e in &self.edges_ph {
            theta0[e.b] += e.w * values[e.a];
        }
        // base deep activations from the physical layer
        let mut phi0 = self.deep_bias.clone();
        for e in &self.edges_pd {
            phi0[e.b] += e.w * values[e.a];
        }

        let d_count = self.deep_count();
        let mut total = Complex::ZERO;
        let mut theta = vec![Complex::ZERO; theta0.len()];
        for config in 0u64..(1 << d_count) {
            let d_val = |k: usize| if (config >> k) & 1 == 1 { -1.0 } else { 1.0 };
            theta.copy_from_slice(&theta0);
            for e in &self.edges_hd {
                theta[e.a] += e.w * d_val(e.b);
            }
            let mut deep_energy = Complex::ZERO;
            for (k, &phi) in phi0.iter().enumerate() {
                deep_energy += phi * d_val(k);
            }
            let mut term = deep_energy.exp();
            for t in &theta {
                term *= 2.0 * t.cosh();
            }
            total += term;
        }
        Ok(self.scale * phys.exp() * total)
    }

    /// Fully naive latent sum, kept as an independent cross-check of the
    /// factorized evaluator.
    pub fn amplitude_naive(&self, z: BasisIndex) -> Result<Complex> {
        if z.width() != self.n {
            return Err(Error::WidthMismatch { left: z.width(), right: self.n });
        }
        self.check_feasible()?;
        let values: Vec<f64> =
            (0..self.n).map(|q| self.domain.value(z.bit(q).expect("in range"))).collect();
        let h_count = self.hidden_count();
        let d_count = self.deep_count();
        let mut total = Complex::ZERO;
        for config in 0u64..(1 << (h_count + d_count)) {
            let h_val = |j: usize| if (config >> j) & 1 == 1 { -1.0 } else { 1.0 };
            let d_val = |k: usize| if (config >> (h_count + k)) & 1 == 1 { -1.0 } else { 1.0 };
            let mut energy = Complex::ZERO;
            for (l, &v) in values.iter().enumerate() {
                energy += self.omega[l] * v;
            }
            for (j, b) in self.hidden_bias.iter().enumerate() {
                energy += b * h_val(j);
            }
            for (k, b) in self.deep_bias.iter().enumerate() {
                energy += b * d_val(k);
            }
            for e in &self.edges_ph {
                energy += e.w * values[e.a] * h_val(e.b);
            }
            for e in &self.edges_hd {
                energy += e.w * h_val(e.a) * d_val(e.b);
            }
            for e in &self.edges_pd {
                energy += e.w * values[e.a] * d_val(e.b);
            }
            total += energy.exp();
        }
        Ok(self.scale * total)
    }

    /// Normalized |Ψ|² over all 2^n basis states.
    pub fn probabilities(&self) -> Result<crate::ExplicitDistribution> {
        crate::dist::check_explicit_width(self.n)?;
        let mut weights = Vec::with_capacity(1 << self.n);
        for v in 0..(1u64 << self.n) {
            let amp = self.amplitude(BasisIndex::new(v, self.n)?)?;
            weights.push(amp.norm_sqr());
        }
        crate::ExplicitDistribution::from_weights(self.n, weights)
    }

    /// Structured JSON export for inspection: unit lists plus edge lists
    /// with re/im weight pairs.
    pub fn to_json(&self) -> String {
        fn c(v: Complex) -> serde_json::Value {
            serde_json::json!([v.re, v.im])
        }
        fn edges(list: &[Edge]) -> serde_json::Value {
            serde_json::Value::Array(
                list.iter().map(|e| serde_json::json!([e.a, e.b, e.w.re, e.w.im])).collect(),
            )
        }
        let value = serde_json::json!({
            "domain": match self.domain { PhysicalDomain::Bit => "bit", PhysicalDomain::Spin => "spin" },
            "n_physical": self.n,
            "global_scale": c(self.scale),
            "physical_bias": self.omega.iter().map(|&v| c(v)).collect::<Vec<_>>(),
            "hidden_bias": self.hidden_bias.iter().map(|&v| c(v)).collect::<Vec<_>>(),
            "deep_bias": self.deep_bias.iter().map(|&v| c(v)).collect::<Vec<_>>(),
            "edges_ph": edges(&self.edges_ph),
            "edges_hd": edges(&self.edges_hd),
            "edges_pd": edges(&self.edges_pd),
            "notes": self.notes,
        });
        serde_json::to_string_pretty(&value).expect("dbm serialization cannot fail")
    }

    // ---- construction primitives shared by build.rs ----

    pub(crate) fn add_hidden(&mut self, bias: Complex) -> usize {
        self.hidden_bias.push(bias);
        self.hidden_bias.len() - 1
    }

    pub(crate) fn add_deep(&mut self, bias: Complex) -> usize {
        self.deep_bias.push(bias);
        self.deep_bias.len() - 1
    }

    pub(crate) fn add_ph(&mut self, physical: usize, hidden: usize, w: Complex) {
        self.edges_ph.push(Edge { a: physical, b: hidden, w });
    }

    pub(crate) fn add_hd(&mut self, hidden: usize, deep: usize, w: Complex) {
        self.edges_hd.push(Edge { a: hidden, b: deep, w });
    }

    pub(crate) fn add_pd(&mut self, physical: usize, deep: usize, w: Complex) {
        self.edges_pd.push(Edge { a: physical, b: deep, w });
    }

    pub(crate) fn omega_mut(&mut self) -> &mut [Complex] {
        &mut self.omega
    }

    pub(crate) fn hidden_bias_mut(&mut self) -> &mut [Complex] {
        &mut self.hidden_bias
    }

    pub(crate) fn deep_bias_mut(&mut self) -> &mut [Complex] {
        &mut self.deep_bias
    }

    pub(crate) fn edges_ph_mut(&mut self) -> &mut Vec<Edge> {
        &mut self.edges_ph
    }

    pub(crate) fn edges_pd_mut(&mut self) -> &mut Vec<Edge> {
        &mut self.edges_pd
    }

    pub(crate) fn scale_mul(&mut self, factor: Complex) {
        self.scale *= factor;
    }

    pub(crate) fn set_domain(&mut self, domain: PhysicalDomain) {
        self.domain = domain;
    }
}
