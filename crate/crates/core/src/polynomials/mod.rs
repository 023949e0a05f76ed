//! Univariate polynomials, homogeneous forms, Taylor expansions, blow-ups
//! and resultants.

mod bivariate;
mod form;
mod point;
mod resultant;
mod uni;

pub use bivariate::{taylor_at, BiPoly, BinaryForm};
pub use form::{form_divides, monomials, sextic_monomials, ternary_index, Form, QuinaryQuadric, TernaryForm, VarNames};
pub use point::ProjPoint;
pub use resultant::{bareiss_det, resultant, PolyOverPoly};
pub use uni::{PolyRing, UniPoly};

pub use form::lcm;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("division by the zero form")]
    ZeroDivisor,
    #[error("both resultant inputs are constant in the eliminated variable")]
    ConstantInputs,
    #[error("blow-up with m = {m} but the vanishing order is {order}")]
    BlowupOrder { order: u32, m: u32 },
}
