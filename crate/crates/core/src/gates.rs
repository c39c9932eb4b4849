//! Gate set and unitary matrices.
//!
//! Single-qubit gates come from the set {√X, √Y, √W}, all of which are the
//! half-rotation u1(π/2, φ) with φ = 0, π/2, π/4 respectively, where
//! u1(θ, φ) = exp(-i(θ/2)(cosφ·σx + sinφ·σy)). The two-qubit gates are CZ and
//! fSim(θ, φ): identity on |00⟩, the block [[cosθ, -i·sinθ], [-i·sinθ, cosθ]]
//! on span{|01⟩, |10⟩}, and the phase e^{-iφ} on |11⟩.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use crate::Complex;

pub type Mat2 = [[Complex; 2]; 2];
pub type Mat4 = [[Complex; 4]; 4];

/// Any gate the simulator and the DBM builder understand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    SqrtX,
    SqrtY,
    SqrtW,
    U1 { theta: f64, phi: f64 },
    Cz,
    FSim { theta: f64, phi: f64 },
}

/// A gate matrix, 2x2 for single-qubit kinds and 4x4 for two-qubit kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateMatrix {
    Single(Mat2),
    Two(Mat4),
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::SqrtX | Gate::SqrtY | Gate::SqrtW | Gate::U1 { .. } => 1,
            Gate::Cz | Gate::FSim { .. } => 2,
        }
    }

    pub fn matrix(&self) -> GateMatrix {
        match *self {
            Gate::SqrtX => GateMatrix::Single(u1_matrix(FRAC_PI_2, 0.0)),
            Gate::SqrtY => GateMatrix::Single(u1_matrix(FRAC_PI_2, FRAC_PI_2)),
            Gate::SqrtW => GateMatrix::Single(u1_matrix(FRAC_PI_2, FRAC_PI_4)),
            Gate::U1 { theta, phi } => GateMatrix::Single(u1_matrix(theta, phi)),
            Gate::Cz => GateMatrix::Two(cz_matrix()),
            Gate::FSim { theta, phi } => GateMatrix::Two(fsim_matrix(theta, phi)),
        }
    }

    pub fn single_matrix(&self) -> Option<Mat2> {
        match self.matrix() {
            GateMatrix::Single(m) => Some(m),
            GateMatrix::Two(_) => None,
        }
    }

    pub fn two_qubit_matrix(&self) -> Option<Mat4> {
        match self.matrix() {
            GateMatrix::Two(m) => Some(m),
            GateMatrix::Single(_) => None,
        }
    }
}

/// u1(θ, φ) = exp(-i(θ/2)(cosφ·σx + sinφ·σy))
///          = [[cos(θ/2), -i·e^{-iφ}·sin(θ/2)], [-i·e^{iφ}·sin(θ/2), cos(θ/2)]].
pub fn u1_matrix(theta: f64, phi: f64) -> Mat2 {
    let c = Complex::new((theta / 2.0).cos(), 0.0);
    let s = (theta / 2.0).sin();
    let mi = Complex::new(0.0, -1.0);
    [
        [c, mi * Complex::from_polar(s, -phi)],
        [mi * Complex::from_polar(s, phi), c],
    ]
}

pub fn cz_matrix() -> Mat4 {
    let mut m = [[Complex::ZERO; 4]; 4];
    m[0][0] = Complex::ONE;
    m[1][1] = Complex::ONE;
    m[2][2] = Complex::ONE;
    m[3][3] = -Complex::ONE;
    m
}

pub fn fsim_matrix(theta: f64, phi: f64) -> Mat4 {
    let mut m = [[Complex::ZERO; 4]; 4];
    m[0][0] = Complex::ONE;
    m[1][1] = Complex::new(theta.cos(), 0.0);
    m[2][2] = Complex::new(theta.cos(), 0.0);
    m[1][2] = Complex::new(0.0, -theta.sin());
    m[2][1] = Complex::new(0.0, -theta.sin());
    m[3][3] = Complex::from_polar(1.0, -phi);
    m
}

/// Hadamard; not part of the random gate set, used to prepare the uniform
/// superposition in equivalence tests.
pub fn hadamard() -> Mat2 {
    let h = Complex::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}
