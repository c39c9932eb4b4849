//! Gate-by-gate network updates.
//!
//! Every update multiplies the represented amplitude function by the exact
//! action of one gate. Diagonal gates become bias shifts plus one hidden
//! unit carrying the pair coupling. A generic single-qubit gate hands the
//! old value of the target over to a new deep unit (its couplings move from
//! the physical unit to the deep unit, ΔW = -W), writes the gate's matrix
//! elements as exp(g + u·z + w·d + K·z·d), and realizes the K term either
//! through a new mediating hidden unit or as a direct physical-deep weight.
//! The fSim mixer follows the five-step recipe: a deep unit carrying the
//! coupling differences W_l - W_m, symmetrized physical couplings, a
//! mixing mediator on (l, deep), an asymmetric pair unit on (l, m), and the
//! ±iπ/6 selector unit that pins the deep unit in the equal-bits sector.
//!
//! All arcosh/log branches are principal; each update also multiplies
//! `scale` by the constant its construction introduces, keeping Ψ equal to
//! the true amplitude rather than proportional to it.

use crate::circuit::{Circuit, TwoQubit};
use crate::error::{Error, Result};
use crate::gates::Mat2;
use crate::Complex;

use super::report::{DbmSizeReport, SizeRow};
use super::{DbmConfig, DbmNetwork, Edge, FsimStep3, MediatorForm, PhysicalDomain};

const I: Complex = Complex::new(0.0, 1.0);

fn ln_c(v: Complex) -> Result<Complex> {
    if v == Complex::ZERO || !v.is_finite() {
        return Err(Error::Dbm(format!("cannot take log of factor {v}")));
    }
    Ok(v.ln())
}

fn acosh_c(v: Complex) -> Complex {
    v.acosh()
}

impl DbmNetwork {
    fn check_physical(&self, l: usize) -> Result<()> {
        if l >= self.n_physical() {
            return Err(Error::QubitIndex { index: l, n: self.n_physical() });
        }
        Ok(())
    }

    /// Multiplies the amplitude by f0 when bit l = 0 and f1 when bit l = 1.
    pub fn apply_diag1(&mut self, l: usize, f0: Complex, f1: Complex) -> Result<()> {
        self.check_physical(l)?;
        let (l0, l1) = (ln_c(f0)?, ln_c(f1)?);
        match self.domain() {
            PhysicalDomain::Bit => {
                self.omega_mut()[l] += l1 - l0;
                self.scale_mul(l0.exp());
            }
            PhysicalDomain::Spin => {
                self.omega_mut()[l] += (l0 - l1) / 2.0;
                self.scale_mul(((l0 + l1) / 2.0).exp());
            }
        }
        Ok(())
    }

    /// Multiplies the amplitude by f_{bit_i, bit_j}; all four factors must be
    /// nonzero. Adds one hidden unit carrying the pair coupling.
    pub fn apply_diag2(
        &mut self,
        i: usize,
        j: usize,
        f00: Complex,
        f01: Complex,
        f10: Complex,
        f11: Complex,
    ) -> Result<()> {
        self.check_physical(i)?;
        self.check_physical(j)?;
        if i == j {
            return Err(Error::QubitIndex { index: i, n: self.n_physical() });
        }
        let (l00, l01, l10, l11) = (ln_c(f00)?, ln_c(f01)?, ln_c(f10)?, ln_c(f11)?);
        match self.domain() {
            PhysicalDomain::Bit => {
                let g = l00;
                let ui = l10 - l00;
                let uj = l01 - l00;
                let k = l11 - l10 - l01 + l00;
                self.omega_mut()[i] += ui;
                self.omega_mut()[j] += uj;
                self.scale_mul(g.exp());
                self.couple_bit_bit(i, j, k)?;
            }
            PhysicalDomain::Spin => {
                let g = (l00 + l01 + l10 + l11) / 4.0;
                let ui = (l00 + l01 - l10 - l11) / 4.0;
                let uj = (l00 - l01 + l10 - l11) / 4.0;
                let k = (l00 - l01 - l10 + l11) / 4.0;
                self.omega_mut()[i] += ui;
                self.omega_mut()[j] += uj;
                self.scale_mul(g.exp());
                self.couple_spin_spin_physical(i, j, k);
            }
        }
        Ok(())
    }

    /// New hidden unit realizing exp(K·v_i·v_j) for two spin-valued
    /// physicals: legs arcosh(e^{2K})/2 on both.
    fn couple_spin_spin_physical(&mut self, i: usize, j: usize, k: Complex) {
        let a = acosh_c((2.0 * k).exp()) / 2.0;
        let h = self.add_hidden(Complex::ZERO);
        self.add_ph(i, h, a);
        self.add_ph(j, h, a);
        self.scale_mul(0.5 * (-k).exp());
    }

    /// New hidden unit realizing exp(K·z_i·z_j) for bit-valued physicals:
    /// legs arcosh((2 - e^K)^{-1/2}) on both, bias compensation on each.
    fn couple_bit_bit(&mut self, i: usize, j: usize, k: Complex) -> Result<()> {
        let ek = k.exp();
        if (ek - 2.0).norm() < 1e-9 {
            return Err(Error::Dbm(format!("pair coupling degenerate: e^K = {ek}")));
        }
        let cosh_a = 1.0 / (2.0 - ek).sqrt();
        let a = acosh_c(cosh_a);
        let beta = cosh_a.ln();
        let h = self.add_hidden(Complex::ZERO);
        self.add_ph(i, h, a);
        self.add_ph(j, h, a);
        self.omega_mut()[i] -= beta;
        self.omega_mut()[j] -= beta;
        self.scale_mul(Complex::new(0.5, 0.0));
        Ok(())
    }

    /// Realizes exp(K·v_l·d) between physical l and deep unit `d` with a
    /// mediating hidden unit. In the bit domain the symmetric-leg mediator
    /// degenerates when e^{2K} ≈ -1; the coupling is then split into two
    /// units carrying K/2 each.
    fn couple_physical_deep(&mut self, l: usize, d: usize, k: Complex) {
        match self.domain() {
            PhysicalDomain::Spin => {
                let a = acosh_c((2.0 * k).exp()) / 2.0;
                let h = self.add_hidden(Complex::ZERO);
                self.add_ph(l, h, a);
                self.add_hd(h, d, a);
                self.scale_mul(0.5 * (-k).exp());
            }
            PhysicalDomain::Bit => {
                if ((2.0 * k).exp() + 1.0).norm() < 0.5 {
                    self.couple_physical_deep(l, d, k / 2.0);
                    self.couple_physical_deep(l, d, k / 2.0);
                    return;
                }
                let a = acosh_c((2.0 * k).exp()) / 2.0;
                let cosh_a = a.cosh();
                let beta = k - cosh_a.ln();
                let h = self.add_hidden(Complex::ZERO);
                self.add_ph(l, h, a);
                self.add_hd(h, d, a);
                self.omega_mut()[l] -= beta;
                self.scale_mul(0.5 / cosh_a);
            }
        }
    }

    /// Converts every direct physical-deep weight on l into an equivalent
    /// mediated hidden unit, so later updates only meet physical-hidden
    /// couplings on l.
    fn materialize_pd_edges(&mut self, l: usize) {
        let edges: Vec<Edge> =
            self.edges_pd().iter().filter(|e| e.a == l).copied().collect();
        self.edges_pd_mut().retain(|e| e.a != l);
        for e in edges {
            self.couple_physical_deep(l, e.b, e.w);
        }
    }

    /// Applies an arbitrary 2x2 unitary to physical unit l.
    pub fn apply_single_matrix(&mut self, l: usize, m: &Mat2, form: MediatorForm) -> Result<()> {
        self.check_physical(l)?;
        let [[u00, u01], [u10, u11]] = *m;
        let mag =
            u00.norm().max(u01.norm()).max(u10.norm()).max(u11.norm());
        if mag == 0.0 {
            return Err(Error::InvalidGate("zero matrix".into()));
        }
        let tiny = 1e-14 * mag;
        let (d00, d01, d10, d11) =
            (u00.norm() > tiny, u01.norm() > tiny, u10.norm() > tiny, u11.norm() > tiny);
        match (d00, d01, d10, d11) {
            (true, false, false, true) => self.apply_diag1(l, u00, u11),
            (false, true, true, false) => {
                self.flip_physical(l);
                self.apply_diag1(l, u01, u10)
            }
            (true, true, true, true) => self.apply_single_generic(l, m, form),
            _ => Err(Error::InvalidGate(
                "single-qubit matrix with isolated zero entries is not representable".into(),
            )),
        }
    }

    /// Amplitude-function relabeling z_l -> NOT z_l.
    fn flip_physical(&mut self, l: usize) {
        match self.domain() {
            PhysicalDomain::Spin => {
                for idx in 0..self.edges_ph().len() {
                    if self.edges_ph()[idx].a == l {
                        self.edges_ph_mut()[idx].w = -self.edges_ph()[idx].w;
                    }
                }
                for idx in 0..self.edges_pd().len() {
                    if self.edges_pd()[idx].a == l {
                        self.edges_pd_mut()[idx].w = -self.edges_pd()[idx].w;
                    }
                }
                self.omega_mut()[l] = -self.omega_mut()[l];
            }
            PhysicalDomain::Bit => {
                for idx in 0..self.edges_ph().len() {
                    let e = self.edges_ph()[idx];
                    if e.a == l {
                        self.hidden_bias_mut()[e.b] += e.w;
                        self.edges_ph_mut()[idx].w = -e.w;
                    }
                }
                for idx in 0..self.edges_pd().len() {
                    let e = self.edges_pd()[idx];
                    if e.a == l {
                        self.deep_bias_mut()[e.b] += e.w;
                        self.edges_pd_mut()[idx].w = -e.w;
                    }
                }
                let w = self.omega_mut()[l];
                self.scale_mul(w.exp());
                self.omega_mut()[l] = -w;
            }
        }
    }

    /// Generic single-qubit update: the old value of l moves onto a new
    /// deep unit (ΔW = -W on every coupling), and the gate's matrix element
    /// table exp(g + u·z + w·d + K·z·d) supplies the new physical bias, the
    /// deep bias and the z-d coupling.
    fn apply_single_generic(&mut self, l: usize, m: &Mat2, form: MediatorForm) -> Result<()> {
        let [[u00, u01], [u10, u11]] = *m;
        self.materialize_pd_edges(l);

        let d = self.add_deep(Complex::ZERO);
        let moved: Vec<Edge> = self.edges_ph().iter().filter(|e| e.a == l).copied().collect();
        self.edges_ph_mut().retain(|e| e.a != l);

        let (l00, l01, l10, l11) = (ln_c(u00)?, ln_c(u01)?, ln_c(u10)?, ln_c(u11)?);
        match self.domain() {
            PhysicalDomain::Spin => {
                // old spin value ≡ deep value
                for e in &moved {
                    self.add_hd(e.b, d, e.w);
                }
                let old_omega = self.omega_mut()[l];
                let g = (l00 + l01 + l10 + l11) / 4.0;
                let u = (l00 + l01 - l10 - l11) / 4.0;
                let w = (l00 - l01 + l10 - l11) / 4.0;
                let k = (l00 - l01 - l10 + l11) / 4.0;
                self.deep_bias_mut()[d] = old_omega + w;
                self.omega_mut()[l] = u;
                self.scale_mul(g.exp());
                match form {
                    MediatorForm::Integrated => self.add_pd(l, d, k),
                    MediatorForm::Explicit => self.couple_physical_deep(l, d, k),
                }
            }
            PhysicalDomain::Bit => {
                // old bit value ≡ (1 + deep)/2
                for e in &moved {
                    self.add_hd(e.b, d, e.w / 2.0);
                    self.hidden_bias_mut()[e.b] += e.w / 2.0;
                }
                let old_omega = self.omega_mut()[l];
                self.scale_mul((old_omega / 2.0).exp());
                let g = (l00 + l01) / 2.0;
                let w = (l01 - l00) / 2.0;
                let u = (l10 + l11) / 2.0 - g;
                let k = (l11 - l10) / 2.0 - w;
                self.deep_bias_mut()[d] = old_omega / 2.0 + w;
                self.omega_mut()[l] = u;
                self.scale_mul(g.exp());
                match form {
                    MediatorForm::Integrated => self.add_pd(l, d, k),
                    MediatorForm::Explicit => self.couple_physical_deep(l, d, k),
                }
            }
        }
        Ok(())
    }

    /// Half-rotation family u1(θ, φ) applied to qubit q.
    pub fn apply_single(&mut self, q: usize, theta: f64, phi: f64, form: MediatorForm) -> Result<()> {
        self.apply_single_matrix(q, &crate::gates::u1_matrix(theta, phi), form)
    }

    /// Multiplies the amplitude by exp(-iψ·v_i·v_j) in the network's value
    /// convention (bits or spins).
    pub fn apply_zz(&mut self, i: usize, j: usize, psi: f64) -> Result<()> {
        let f = |bi: u8, bj: u8| {
            let v = self.domain().value(bi) * self.domain().value(bj);
            (-I * psi * v).exp()
        };
        self.apply_diag2(i, j, f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    /// The CZ gate: sign flip on |11⟩.
    pub fn apply_cz_gate(&mut self, i: usize, j: usize) -> Result<()> {
        self.apply_diag2(i, j, Complex::ONE, Complex::ONE, Complex::ONE, -Complex::ONE)
    }

    /// The five-step coupler update for exp(-iθ(XX+YY) - iφZZ) on (l, m).
    ///
    /// Step 3's mediator weight is arcosh(arg)/2 with arg = 1/tan(2θ)
    /// (verbatim branch) or i/tan(2θ) (corrected branch). At 2θ = π/2 the
    /// mediator's cosh vanishes and the construction erases the equal-bits
    /// sector; this is detected and recorded, not patched — callers that
    /// need that angle exactly use the swap route instead.
    pub fn apply_fsim(
        &mut self,
        l: usize,
        m: usize,
        theta: f64,
        phi: f64,
        config: &DbmConfig,
    ) -> Result<()> {
        self.check_physical(l)?;
        self.check_physical(m)?;
        if l == m {
            return Err(Error::QubitIndex { index: l, n: self.n_physical() });
        }
        match self.domain() {
            PhysicalDomain::Spin => self.apply_fsim_spin(l, m, theta, phi, config.step3),
            PhysicalDomain::Bit => {
                self.convert_bit_to_spin();
                let r = self.apply_fsim_spin(l, m, theta, phi, config.step3);
                self.convert_spin_to_bit();
                r
            }
        }
    }

    fn apply_fsim_spin(
        &mut self,
        l: usize,
        m: usize,
        theta: f64,
        phi: f64,
        step3: FsimStep3,
    ) -> Result<()> {
        let mixing = 2.0 * theta;
        let sin_m = mixing.sin();
        if sin_m.abs() < 1e-12 {
            return Err(Error::InvalidGate(format!(
                "coupler mixing angle 2θ = {mixing} has a divergent mediator weight"
            )));
        }
        let cot = Complex::new(mixing.cos() / sin_m, 0.0);
        let arg3 = match step3 {
            FsimStep3::Verbatim => cot,
            FsimStep3::Corrected => I * cot,
        };
        if arg3.norm() < 1e-9 {
            self.push_note(format!(
                "fsim mediator degenerate at 2θ = {mixing}: cosh(2·A3) = {arg3} erases the equal-bits sector"
            ));
        }
        let a3 = acosh_c(arg3) / 2.0;
        let a4 = acosh_c(Complex::from_polar(1.0, 2.0 * phi) * mixing.cos()) / 2.0;
        let a5 = I * std::f64::consts::FRAC_PI_6;

        self.materialize_pd_edges(l);
        self.materialize_pd_edges(m);

        // step 1 & 2: deep unit takes the coupling differences, physical
        // couplings symmetrize onto W_m, biases follow the same pattern
        let d = {
            let old_l = self.omega_mut()[l];
            let old_m = self.omega_mut()[m];
            let d = self.add_deep(old_l - old_m);
            self.omega_mut()[l] = old_m;
            d
        };
        let mut w_l: std::collections::BTreeMap<usize, Complex> = Default::default();
        let mut w_m: std::collections::BTreeMap<usize, Complex> = Default::default();
        for e in self.edges_ph() {
            if e.a == l {
                *w_l.entry(e.b).or_insert(Complex::ZERO) += e.w;
            } else if e.a == m {
                *w_m.entry(e.b).or_insert(Complex::ZERO) += e.w;
            }
        }
        self.edges_ph_mut().retain(|e| e.a != l && e.a != m);
        let hiddens: std::collections::BTreeSet<usize> =
            w_l.keys().chain(w_m.keys()).copied().collect();
        for j in hiddens {
            let wl = w_l.get(&j).copied().unwrap_or(Complex::ZERO);
            let wm = w_m.get(&j).copied().unwrap_or(Complex::ZERO);
            if wm != Complex::ZERO {
                self.add_ph(l, j, wm);
                self.add_ph(m, j, wm);
            }
            if wl - wm != Complex::ZERO {
                self.add_hd(j, d, wl - wm);
            }
        }

        // step 3: mixing mediator between l and the deep unit
        let h3 = self.add_hidden(Complex::ZERO);
        self.add_ph(l, h3, a3);
        self.add_hd(h3, d, a3);

        // step 4: asymmetric pair unit carrying cos(2θ)e^{2iφ}
        let h4 = self.add_hidden(Complex::ZERO);
        self.add_ph(l, h4, a4);
        self.add_ph(m, h4, -a4);

        // step 5: ±iπ/6 selector pinning d in the equal-bits sector
        let h5 = self.add_hidden(Complex::ZERO);
        self.add_ph(l, h5, a5);
        self.add_ph(m, h5, a5);
        self.add_hd(h5, d, -a5);

        // constant factor: equal-bits sector gains 4·√3·cosh(2·A3)·e^{iφ}
        let lambda = 4.0 * 3.0f64.sqrt() * (2.0 * a3).cosh() * Complex::from_polar(1.0, phi);
        if lambda.norm() < 1e-300 {
            return Err(Error::Dbm("fsim normalization collapsed to zero".into()));
        }
        self.scale_mul(lambda.inv());
        Ok(())
    }

    /// Standard-convention coupler: identity on |00⟩, the θ mixer on
    /// span{|01⟩, |10⟩}, e^{-iφ} on |11⟩. Uses the five-step route with
    /// mixer angle θ/2 and ZZ angle φ/4 plus single-qubit phase
    /// compensation; at θ = π/2, where the five-step mediator is
    /// structurally degenerate, an exact swap route is taken instead when
    /// enabled.
    pub fn apply_fsim_gate(
        &mut self,
        l: usize,
        m: usize,
        theta: f64,
        phi: f64,
        config: &DbmConfig,
    ) -> Result<()> {
        if theta.cos().abs() < 1e-12 && config.swap_route {
            self.push_note(format!(
                "fsim(θ={theta:.6}) handled by exact swap route (five-step mediator degenerate)"
            ));
            return self.apply_swap_route(l, m, phi);
        }
        self.apply_fsim(l, m, theta / 2.0, phi / 4.0, config)?;
        // exp(-iφ·z_l·z_m) = e^{-iφ/4}·e^{iφ(s_l+s_m)/4}·e^{-iφ/4·s_l·s_m};
        // the ZZ part already rode along as the five-step φ, leaving the
        // single-spin phases and the constant
        let f0 = Complex::from_polar(1.0, phi / 4.0);
        let f1 = Complex::from_polar(1.0, -phi / 4.0);
        self.apply_diag1(l, f0, f1)?;
        self.apply_diag1(m, f0, f1)?;
        self.scale_mul(Complex::from_polar(1.0, -phi / 4.0));
        Ok(())
    }

    /// Exact route for the θ = π/2 coupler: fSim(π/2, φ) = diag(1, -i, -i,
    /// e^{-iφ}) ∘ SWAP; swapping two physical units exchanges their
    /// couplings.
    fn apply_swap_route(&mut self, l: usize, m: usize, phi: f64) -> Result<()> {
        self.check_physical(l)?;
        self.check_physical(m)?;
        for idx in 0..self.edges_ph().len() {
            let a = self.edges_ph()[idx].a;
            if a == l {
                self.edges_ph_mut()[idx].a = m;
            } else if a == m {
                self.edges_ph_mut()[idx].a = l;
            }
        }
        for idx in 0..self.edges_pd().len() {
            let a = self.edges_pd()[idx].a;
            if a == l {
                self.edges_pd_mut()[idx].a = m;
            } else if a == m {
                self.edges_pd_mut()[idx].a = l;
            }
        }
        self.omega_mut().swap(l, m);
        let mi = -I;
        self.apply_diag2(l, m, Complex::ONE, mi, mi, Complex::from_polar(1.0, -phi))
    }

    fn convert_bit_to_spin(&mut self) {
        debug_assert_eq!(self.domain(), PhysicalDomain::Bit);
        for idx in 0..self.edges_ph().len() {
            let e = self.edges_ph()[idx];
            self.hidden_bias_mut()[e.b] += e.w / 2.0;
            self.edges_ph_mut()[idx].w = -e.w / 2.0;
        }
        for idx in 0..self.edges_pd().len() {
            let e = self.edges_pd()[idx];
            self.deep_bias_mut()[e.b] += e.w / 2.0;
            self.edges_pd_mut()[idx].w = -e.w / 2.0;
        }
        let half_sum: Complex = self.omega_mut().iter().sum::<Complex>() / 2.0;
        self.scale_mul(half_sum.exp());
        for w in self.omega_mut() {
            *w = -*w / 2.0;
        }
        self.set_domain(PhysicalDomain::Spin);
    }

    fn convert_spin_to_bit(&mut self) {
        debug_assert_eq!(self.domain(), PhysicalDomain::Spin);
        for idx in 0..self.edges_ph().len() {
            let e = self.edges_ph()[idx];
            self.hidden_bias_mut()[e.b] += e.w;
            self.edges_ph_mut()[idx].w = -2.0 * e.w;
        }
        for idx in 0..self.edges_pd().len() {
            let e = self.edges_pd()[idx];
            self.deep_bias_mut()[e.b] += e.w;
            self.edges_pd_mut()[idx].w = -2.0 * e.w;
        }
        let sum: Complex = self.omega_mut().iter().sum();
        self.scale_mul(sum.exp());
        for w in self.omega_mut() {
            *w = -2.0 * *w;
        }
        self.set_domain(PhysicalDomain::Bit);
    }
}

/// A constructed network together with its per-cycle size history.
pub struct BuildOutcome {
    pub network: DbmNetwork,
    pub report: DbmSizeReport,
}

/// Builds the network for a whole circuit, one gate at a time, recording
/// unit and edge counts after every cycle.
pub fn build(circuit: &Circuit, config: &DbmConfig) -> Result<BuildOutcome> {
    circuit.validate()?;
    let mut net = DbmNetwork::new(circuit.n, config.domain)?;
    let mut rows = vec![SizeRow {
        cycle: 0,
        hidden: net.hidden_count(),
        deep: net.deep_count(),
        edges: net.edge_count(),
    }];
    for (t, cycle) in circuit.cycles.iter().enumerate() {
        for (q, g) in cycle.singles.iter().enumerate() {
            let phi = match g {
                crate::circuit::SingleGate::SqrtX => 0.0,
                crate::circuit::SingleGate::SqrtY => std::f64::consts::FRAC_PI_2,
                crate::circuit::SingleGate::SqrtW => std::f64::consts::FRAC_PI_4,
            };
            net.apply_single(q, std::f64::consts::FRAC_PI_2, phi, config.mediator)?;
        }
        for &(i, j) in &cycle.pairs {
            match circuit.two_qubit {
                TwoQubit::Cz => net.apply_cz_gate(i, j)?,
                TwoQubit::FSim { theta, phi } => net.apply_fsim_gate(i, j, theta, phi, config)?,
            }
        }
        rows.push(SizeRow {
            cycle: t + 1,
            hidden: net.hidden_count(),
            deep: net.deep_count(),
            edges: net.edge_count(),
        });
    }
    Ok(BuildOutcome { network: net, report: DbmSizeReport { rows } })
}
