//! Crate-wide error type.

use crate::boxbasis::{Basis, Label};
use crate::qstate::BoxId;

/// Errors returned by state construction, measurement, and rule derivation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Tensor product would exceed the three-box capacity.
    #[error("capacity exceeded: product state would span {0} boxes (max 3)")]
    Capacity(usize),

    /// Operands live in different basis frames; change basis first.
    #[error("basis frame mismatch: {0}")]
    FrameMismatch(String),

    /// State vector shape or content is invalid.
    #[error("invalid amplitudes: {0}")]
    InvalidAmplitudes(String),

    /// Norm too small to renormalize.
    #[error("degenerate state: norm {norm:.3e} below {min:.3e}")]
    DegenerateState { norm: f64, min: f64 },

    /// Phase factor does not have unit modulus.
    #[error("invalid phase factor: modulus {0} differs from 1")]
    InvalidPhase(f64),

    /// Box index outside the state.
    #[error("box {id} out of range for a {n_boxes}-box state")]
    BoxOutOfRange { id: BoxId, n_boxes: usize },

    /// Operation is defined for single-box states only.
    #[error("single-box operation applied to a {0}-box state")]
    SingleBoxOnly(usize),

    /// Outcome label does not belong to the measured basis.
    #[error("label {label} does not belong to the {basis} basis")]
    LabelNotInBasis { label: Label, basis: Basis },

    /// Conditioning on an outcome of probability zero.
    #[error("impossible outcome: {0}")]
    ImpossibleOutcome(String),

    /// Requested prediction target was already measured.
    #[error("target box {0} already appears in the measurement records")]
    TargetMeasured(BoxId),

    /// A joint outcome does not determine the remaining box.
    #[error("no deterministic rule: {0}")]
    NoRule(String),

    /// The rule table differs across box pairings.
    #[error("rule differs across box pairings: {0}")]
    AsymmetricRule(String),

    /// Unrecognized figure tag.
    #[error("unknown figure tag {0:?} (expected fig2, fig9 or fig10)")]
    UnknownFigure(String),

    /// Sampling resolution below the supported minimum.
    #[error("resolution {0} too small (minimum 16)")]
    ResolutionTooSmall(usize),

    /// Geometry parameter out of range.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
