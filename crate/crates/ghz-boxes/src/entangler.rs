//! Entangled-state constructors and multi-box product-basis expansion.
//!
//! States built here are stored in the all-position frame (the frame of
//! record); [`expand_in`] converts outward into any per-box frame choice and
//! reports which product labels survive after cancellation.

use num_complex::Complex64;

use crate::boxbasis::{basis_vectors, beta_state, mat_apply, Basis, Label, PhaseFactor};
use crate::error::{Error, Result};
use crate::qstate::{superpose, tensor, BoxState, AMPLITUDE_TOLERANCE};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// One surviving product term of an expansion: a full label per box and its
/// complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub labels: Vec<Label>,
    pub coefficient: Complex64,
}

impl ProductTerm {
    pub fn new(labels: Vec<Label>, coefficient: Complex64) -> Self {
        ProductTerm {
            labels,
            coefficient,
        }
    }
}

/// Result of expanding a state into per-box frames.
#[derive(Debug, Clone)]
pub struct Expansion {
    /// Target frame per box.
    pub frames: Vec<Basis>,
    /// Surviving terms, sorted by product-label index.
    pub terms: Vec<ProductTerm>,
    /// Number of nonzero products formed while multiplying out, before
    /// like labels are combined.
    pub raw_products: usize,
    /// Labels whose combined coefficient fell below the cancellation
    /// threshold (out of `2^n`).
    pub cancelled_labels: usize,
}

impl Expansion {
    /// Coefficient of a full product label, if it survived.
    pub fn coefficient_of(&self, labels: &[Label]) -> Option<Complex64> {
        self.terms
            .iter()
            .find(|t| t.labels == labels)
            .map(|t| t.coefficient)
    }

    /// Sums the surviving terms back into a position-frame state. Used to
    /// check that an expansion reproduces what it expanded.
    pub fn reconstruct(&self) -> Result<BoxState> {
        let n = self.frames.len();
        let mut amplitudes = vec![Complex64::ZERO; 1 << n];
        for term in &self.terms {
            let vectors: Vec<[Complex64; 2]> = term
                .labels
                .iter()
                .map(|label| {
                    let u = label.basis().basis_to_position();
                    [u[0][label.index()], u[1][label.index()]]
                })
                .collect();
            for (index, slot) in amplitudes.iter_mut().enumerate() {
                let mut product = term.coefficient;
                for (k, v) in vectors.iter().enumerate() {
                    product *= v[(index >> (n - 1 - k)) & 1];
                }
                *slot += product;
            }
        }
        BoxState::new(vec![Basis::Position; n], amplitudes)
    }
}

/// Two boxes whose particles share the same chamber:
/// `(1/sqrt(2)) (|LL> + |RR>)`. The two-term sum only normalizes with the
/// `1/sqrt(2)` coefficient, which is what collapse semantics require.
pub fn two_box_correlated() -> BoxState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    BoxState::new(
        vec![Basis::Position; 2],
        vec![h, Complex64::ZERO, Complex64::ZERO, h],
    )
    .expect("static amplitudes")
}

/// The three-box entangled state
/// `(1/sqrt(2)) (|+i,+i,+i> - |-i,-i,-i>)`, converted to the position frame.
///
/// Its position-frame amplitudes are `i/2` on `LLR`, `LRL`, `RLL` and `-i/2`
/// on `RRR`, with the other four labels cancelled.
pub fn ghz_state() -> BoxState {
    let plus = beta_state(PhaseFactor::I);
    let minus = beta_state(PhaseFactor::MINUS_I);
    let triple = |b: &BoxState| tensor(&tensor(b, b).expect("2 boxes"), b).expect("3 boxes");
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    superpose(&[(h, &triple(&plus)), (-h, &triple(&minus))]).expect("orthogonal unit terms")
}

/// The defining two-term form of [`ghz_state`] in the all-phase frame.
/// Expanding from this form reproduces the multiplied-out raw-product counts
/// of the position and bonding expansions (16 products collapsing to 4).
pub fn ghz_phase_terms() -> Vec<ProductTerm> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    vec![
        ProductTerm::new(vec![Label::PlusI; 3], h),
        ProductTerm::new(vec![Label::MinusI; 3], -h),
    ]
}

/// Expands a sum of product terms into `targets`, combining like labels and
/// dropping coefficients with modulus at most `tolerance`.
pub fn expand_terms(terms: &[ProductTerm], targets: &[Basis], tolerance: f64) -> Result<Expansion> {
    let n = targets.len();
    if !(1..=3).contains(&n) {
        return Err(Error::Capacity(n));
    }
    let mut accumulated = vec![Complex64::ZERO; 1 << n];
    let mut raw_products = 0usize;
    for term in terms {
        if term.labels.len() != n {
            return Err(Error::InvalidAmplitudes(format!(
                "term has {} labels, expected {}",
                term.labels.len(),
                n
            )));
        }
        // Per-box column of U_target^dagger U_source, i.e. the source basis
        // vector rewritten in the target frame.
        let mut vectors = Vec::with_capacity(n);
        let mut nonzero_products = 1usize;
        for (label, &target) in term.labels.iter().zip(targets) {
            let source = label.basis();
            let v = if source == target {
                let mut e = [Complex64::ZERO; 2];
                e[label.index()] = Complex64::ONE;
                e
            } else {
                let u = source.basis_to_position();
                let column = [u[0][label.index()], u[1][label.index()]];
                mat_apply(&target.position_to_basis(), column)
            };
            nonzero_products *= v.iter().filter(|entry| entry.norm() > 1e-14).count();
            vectors.push(v);
        }
        raw_products += nonzero_products;
        for (index, slot) in accumulated.iter_mut().enumerate() {
            let mut product = term.coefficient;
            for (k, v) in vectors.iter().enumerate() {
                product *= v[(index >> (n - 1 - k)) & 1];
            }
            *slot += product;
        }
    }
    let mut surviving = Vec::new();
    for (index, &coefficient) in accumulated.iter().enumerate() {
        if coefficient.norm() > tolerance {
            let labels = (0..n)
                .map(|k| targets[k].label((index >> (n - 1 - k)) & 1))
                .collect();
            surviving.push(ProductTerm::new(labels, coefficient));
        }
    }
    let cancelled_labels = (1 << n) - surviving.len();
    Ok(Expansion {
        frames: targets.to_vec(),
        terms: surviving,
        raw_products,
        cancelled_labels,
    })
}

/// Expands a state into one frame per box, using the default cancellation
/// threshold.
pub fn expand_in(state: &BoxState, targets: &[Basis]) -> Result<Expansion> {
    expand_in_with_tolerance(state, targets, AMPLITUDE_TOLERANCE)
}

/// [`expand_in`] with an explicit cancellation threshold.
pub fn expand_in_with_tolerance(
    state: &BoxState,
    targets: &[Basis],
    tolerance: f64,
) -> Result<Expansion> {
    if targets.len() != state.n_boxes() {
        return Err(Error::FrameMismatch(format!(
            "{} target frames for a {}-box state",
            targets.len(),
            state.n_boxes()
        )));
    }
    let canonical = state.to_position_frame();
    let mut source_terms = Vec::new();
    for (index, &amplitude) in canonical.amplitudes().iter().enumerate() {
        if amplitude.norm() > tolerance {
            source_terms.push(ProductTerm::new(canonical.labels_of(index), amplitude));
        }
    }
    expand_terms(&source_terms, targets, tolerance)
}

/// Expands the three-box entangled state from its defining two-term phase
/// form. This is the expansion the command line reports: raw-product counts
/// match multiplying out the defining form by hand.
pub fn ghz_expansion(targets: &[Basis; 3], tolerance: f64) -> Expansion {
    expand_terms(&ghz_phase_terms(), targets, tolerance).expect("static three-box terms")
}

/// Convenience constructor for the four paper-facing single-box states.
pub fn single_box(basis: Basis, index: usize) -> BoxState {
    let (first, second) = basis_vectors(basis);
    if index == 0 {
        first
    } else {
        second
    }
}
