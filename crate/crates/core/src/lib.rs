//! Exact symbolic computation for the super Heisenberg-Virasoro Lie conformal
//! superalgebra and its formal distribution Lie superalgebra of Ramond type.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`] and [`poly`]: exact rationals and sparse polynomials.
//! - [`conformal`]: λ-bracket calculus, axiom checks, and the classification
//!   of rank-one odd extensions of the Heisenberg-Virasoro conformal algebra.
//! - [`superalgebra`]: brackets of the Ramond and Neveu-Schwarz algebras, the
//!   mode algebra of a conformal algebra, the Neveu-Schwarz embedding and the
//!   finite quotients of the subalgebras `S_{α,β}`.
//! - [`order`]: index vectors, weights and the orders on PBW monomials.
//! - [`induced`]: PBW straightening in induced modules, base modules (finite
//!   tables, Verma, Whittaker) and the simplicity probe.
//! - [`registry`]: name-keyed registries of interchangeable strategies.

pub mod conformal;
pub mod induced;
pub mod linalg;
pub mod order;
pub mod poly;
pub mod registry;
pub mod scalar;
pub mod superalgebra;

use serde::{Deserialize, Serialize};

pub use scalar::Scalar;

/// The ℤ₂-grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Parity {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        Parity::from_bit(self.bit() + 1)
    }

    pub fn sum(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }

    /// `(-1)^{|a||b|}`.
    pub fn swap_sign(a: Parity, b: Parity) -> Scalar {
        if a.is_odd() && b.is_odd() {
            -Scalar::one()
        } else {
            Scalar::one()
        }
    }
}
