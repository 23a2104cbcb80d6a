//! Complex state vectors over one to three boxes.
//!
//! A [`BoxState`] stores `2^n` amplitudes over the product labels of `n`
//! boxes, together with one [`Basis`] frame per box. The first box is the
//! most significant index: for three boxes in the position frame the
//! amplitude order is `LLL, LLR, LRL, LRR, RLL, RLR, RRL, RRR`.
//!
//! Everything here is a pure function on immutable values; states can be
//! moved freely between threads.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::boxbasis::{mat_apply, Basis, Label, Mat2};
use crate::error::{Error, Result};

/// Tolerance for amplitude and normalization comparisons.
///
/// The coefficients that appear here (`1/sqrt(2)`, `1/2`, `i/2`) are
/// reproduced to machine precision; 1e-12 absorbs rounding from a handful
/// of arithmetic steps while staying twelve orders of magnitude away from
/// genuine zeros.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-12;

/// Identifies one of the (up to three) boxes. Box A is the most significant
/// position in amplitude indexing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BoxId {
    A,
    B,
    C,
}

impl BoxId {
    pub const ALL: [BoxId; 3] = [BoxId::A, BoxId::B, BoxId::C];

    pub fn index(self) -> usize {
        match self {
            BoxId::A => 0,
            BoxId::B => 1,
            BoxId::C => 2,
        }
    }

    pub fn from_index(index: usize) -> Option<BoxId> {
        BoxId::ALL.get(index).copied()
    }
}

impl fmt::Display for BoxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoxId::A => "A",
            BoxId::B => "B",
            BoxId::C => "C",
        })
    }
}

impl FromStr for BoxId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(BoxId::A),
            "B" | "b" => Ok(BoxId::B),
            "C" | "c" => Ok(BoxId::C),
            other => Err(format!("unknown box {other:?} (expected A, B or C)")),
        }
    }
}

/// Normalized-or-raw complex vector over the product labels of up to three
/// boxes.
///
/// `new` checks shape and finiteness only; every named constructor in this
/// crate (`beta_state`, `two_box_correlated`, `ghz_state`, `tensor`, ...)
/// returns a unit-norm state. Use [`BoxState::normalize`] to rescale raw
/// amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxState {
    frames: Vec<Basis>,
    amplitudes: Vec<Complex64>,
}

impl BoxState {
    /// Builds a state from per-box frames and `2^n` amplitudes.
    pub fn new(frames: Vec<Basis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = frames.len();
        if !(1..=3).contains(&n) {
            return Err(Error::Capacity(n));
        }
        if amplitudes.len() != 1 << n {
            return Err(Error::InvalidAmplitudes(format!(
                "expected {} amplitudes for {} boxes, got {}",
                1 << n,
                n,
                amplitudes.len()
            )));
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidAmplitudes(
                "amplitudes must be finite".to_string(),
            ));
        }
        Ok(BoxState { frames, amplitudes })
    }

    /// Product basis vector `|l_1 ... l_n>`; each frame is taken from the
    /// label's own basis.
    pub fn basis_state(labels: &[Label]) -> Result<Self> {
        let frames: Vec<Basis> = labels.iter().map(|l| l.basis()).collect();
        let n = frames.len();
        if !(1..=3).contains(&n) {
            return Err(Error::Capacity(n));
        }
        let mut amplitudes = vec![Complex64::ZERO; 1 << n];
        let index = labels
            .iter()
            .fold(0usize, |acc, label| (acc << 1) | label.index());
        amplitudes[index] = Complex64::ONE;
        BoxState::new(frames, amplitudes)
    }

    pub fn n_boxes(&self) -> usize {
        self.frames.len()
    }

    pub fn frames(&self) -> &[Basis] {
        &self.frames
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Flat index of a full product label, validating each label against the
    /// stored frame of its box.
    pub fn index_of(&self, labels: &[Label]) -> Result<usize> {
        if labels.len() != self.n_boxes() {
            return Err(Error::InvalidAmplitudes(format!(
                "{} labels supplied for a {}-box state",
                labels.len(),
                self.n_boxes()
            )));
        }
        let mut index = 0usize;
        for (label, &frame) in labels.iter().zip(&self.frames) {
            if label.basis() != frame {
                return Err(Error::LabelNotInBasis {
                    label: *label,
                    basis: frame,
                });
            }
            index = (index << 1) | label.index();
        }
        Ok(index)
    }

    /// Labels of the flat index `index` under the stored frames.
    pub fn labels_of(&self, index: usize) -> Vec<Label> {
        let n = self.n_boxes();
        (0..n)
            .map(|k| self.frames[k].label((index >> (n - 1 - k)) & 1))
            .collect()
    }

    /// Amplitude at a full product label.
    pub fn amplitude(&self, labels: &[Label]) -> Result<Complex64> {
        Ok(self.amplitudes[self.index_of(labels)?])
    }

    /// Euclidean norm, `sqrt(sum |a_i|^2)`.
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= AMPLITUDE_TOLERANCE
    }

    /// Rescales to unit norm, preserving direction.
    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm <= AMPLITUDE_TOLERANCE {
            return Err(Error::DegenerateState {
                norm,
                min: AMPLITUDE_TOLERANCE,
            });
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        BoxState::new(
            self.frames.clone(),
            self.amplitudes.iter().map(|a| a * inv).collect(),
        )
    }

    /// Applies a 2x2 matrix to one box slot and records its new frame.
    pub(crate) fn transform_box(&self, box_index: usize, m: &Mat2, new_frame: Basis) -> Self {
        let n = self.n_boxes();
        debug_assert!(box_index < n);
        let mask = 1usize << (n - 1 - box_index);
        let mut amplitudes = self.amplitudes.clone();
        for i in 0..amplitudes.len() {
            if i & mask == 0 {
                let j = i | mask;
                let v = mat_apply(m, [self.amplitudes[i], self.amplitudes[j]]);
                amplitudes[i] = v[0];
                amplitudes[j] = v[1];
            }
        }
        let mut frames = self.frames.clone();
        frames[box_index] = new_frame;
        BoxState { frames, amplitudes }
    }

    /// Rotates every box into the position frame (the canonical frame of
    /// record for multi-box states).
    pub fn to_position_frame(&self) -> Self {
        let mut state = self.clone();
        for k in 0..self.n_boxes() {
            let frame = state.frames[k];
            if frame != Basis::Position {
                state = state.transform_box(k, &frame.basis_to_position(), Basis::Position);
            }
        }
        state
    }

    /// Amplitude-wise comparison in matching frames.
    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        self.frames == other.frames
            && self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .all(|(a, b)| (a - b).norm() <= tolerance)
    }
}

/// Tensor product; the left operand supplies the most significant indices.
pub fn tensor(a: &BoxState, b: &BoxState) -> Result<BoxState> {
    let n = a.n_boxes() + b.n_boxes();
    if n > 3 {
        return Err(Error::Capacity(n));
    }
    let mut frames = a.frames.clone();
    frames.extend_from_slice(&b.frames);
    let mut amplitudes = Vec::with_capacity(1 << n);
    for &ai in &a.amplitudes {
        for &bj in &b.amplitudes {
            amplitudes.push(ai * bj);
        }
    }
    BoxState::new(frames, amplitudes)
}

/// Inner product, conjugate-linear in the first argument. Both states must
/// share box count and frames; change basis first otherwise.
pub fn inner(a: &BoxState, b: &BoxState) -> Result<Complex64> {
    if a.frames != b.frames {
        return Err(Error::FrameMismatch(format!(
            "left {:?} vs right {:?}",
            a.frames, b.frames
        )));
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Linear combination of same-frame states, rescaled to unit norm.
pub fn superpose(terms: &[(Complex64, &BoxState)]) -> Result<BoxState> {
    let (_, first) = terms
        .first()
        .ok_or_else(|| Error::InvalidAmplitudes("empty superposition".to_string()))?;
    let mut amplitudes = vec![Complex64::ZERO; first.amplitudes.len()];
    for (coefficient, state) in terms {
        if state.frames != first.frames {
            return Err(Error::FrameMismatch(format!(
                "superposition mixes frames {:?} and {:?}",
                first.frames, state.frames
            )));
        }
        for (acc, &a) in amplitudes.iter_mut().zip(&state.amplitudes) {
            *acc += coefficient * a;
        }
    }
    BoxState::new(first.frames.clone(), amplitudes)?.normalize()
}
