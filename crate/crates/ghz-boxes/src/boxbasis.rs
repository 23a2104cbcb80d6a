//! The three single-box bases and their change-of-basis tables.
//!
//! A box holds one particle spread over two chambers. Three orthonormal
//! frames describe it:
//!
//! * **Position** `{L, R}` — which chamber hosts the particle;
//! * **Bonding** `{+1, -1}` — the in-phase and out-of-phase superpositions
//!   of `L` and `R` (the sigma and sigma-star states of the molecular
//!   realization);
//! * **Phase** `{+i, -i}` — the superpositions with relative phase `±i`,
//!   used to write the three-box entangled state.
//!
//! Basis vectors keep their conventional written form: the first
//! coefficient is real and positive, and no global-phase canonicalization
//! is applied, so amplitudes can be compared literally.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::BoxState;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// 2x2 complex matrix, row-major. Used for single-box frame changes.
pub(crate) type Mat2 = [[Complex64; 2]; 2];

pub(crate) fn adjoint(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub(crate) fn mat_apply(m: &Mat2, v: [Complex64; 2]) -> [Complex64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

/// One of the three measurement/expansion frames of a single box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Position,
    Bonding,
    Phase,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Position, Basis::Bonding, Basis::Phase];

    /// The two outcome labels of this basis, in fixed order.
    pub fn labels(self) -> [Label; 2] {
        match self {
            Basis::Position => [Label::L, Label::R],
            Basis::Bonding => [Label::Plus, Label::Minus],
            Basis::Phase => [Label::PlusI, Label::MinusI],
        }
    }

    /// Label at position `index` (0 or 1).
    pub fn label(self, index: usize) -> Label {
        self.labels()[index]
    }

    /// Matrix whose columns are this basis's vectors written in position
    /// coordinates. Unitary by construction; `Position` gives the identity.
    pub(crate) fn basis_to_position(self) -> Mat2 {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let ih = Complex64::new(0.0, FRAC_1_SQRT_2);
        match self {
            Basis::Position => [
                [Complex64::ONE, Complex64::ZERO],
                [Complex64::ZERO, Complex64::ONE],
            ],
            Basis::Bonding => [[h, h], [h, -h]],
            Basis::Phase => [[h, h], [ih, -ih]],
        }
    }

    /// Inverse of [`Basis::basis_to_position`]: takes position coordinates
    /// to coefficients in this basis.
    pub(crate) fn position_to_basis(self) -> Mat2 {
        adjoint(&self.basis_to_position())
    }

    /// Spin-axis correspondence of the two-chamber system: position plays
    /// the role of z-spin, phase of y-spin, bonding of x-spin.
    pub fn spin_axis(self) -> SpinAxis {
        match self {
            Basis::Position => SpinAxis::Z,
            Basis::Phase => SpinAxis::Y,
            Basis::Bonding => SpinAxis::X,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Basis::Position => "position",
            Basis::Bonding => "bonding",
            Basis::Phase => "phase",
        };
        f.write_str(name)
    }
}

impl FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "position" => Ok(Basis::Position),
            "bonding" => Ok(Basis::Bonding),
            "phase" => Ok(Basis::Phase),
            other => Err(format!(
                "unknown basis {other:?} (expected position, bonding or phase)"
            )),
        }
    }
}

/// Spin axis associated with a basis by the two-level correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

impl fmt::Display for SpinAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinAxis::X => "x",
            SpinAxis::Y => "y",
            SpinAxis::Z => "z",
        })
    }
}

/// Outcome label. Each label belongs to exactly one [`Basis`].
///
/// The declaration order fixes the deterministic sort order used everywhere:
/// within a basis the first label sorts before the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// Left chamber (position).
    L,
    /// Right chamber (position).
    R,
    /// In-phase superposition `+1` (bonding).
    Plus,
    /// Out-of-phase superposition `-1` (antibonding).
    Minus,
    /// Relative phase `+i`.
    PlusI,
    /// Relative phase `-i`.
    MinusI,
}

impl Label {
    /// The basis this label belongs to.
    pub fn basis(self) -> Basis {
        match self {
            Label::L | Label::R => Basis::Position,
            Label::Plus | Label::Minus => Basis::Bonding,
            Label::PlusI | Label::MinusI => Basis::Phase,
        }
    }

    /// 0 for the first label of its basis, 1 for the second.
    pub fn index(self) -> usize {
        match self {
            Label::L | Label::Plus | Label::PlusI => 0,
            Label::R | Label::Minus | Label::MinusI => 1,
        }
    }

    /// The other label of the same basis.
    pub fn flipped(self) -> Label {
        self.basis().label(1 - self.index())
    }

    /// Sign encoding used by the parity certificate: the first label of a
    /// basis maps to +1, the second to -1 (so `L -> +1`, `R -> -1`).
    pub fn sign(self) -> i32 {
        if self.index() == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::L => "L",
            Label::R => "R",
            Label::Plus => "+1",
            Label::Minus => "-1",
            Label::PlusI => "+i",
            Label::MinusI => "-i",
        })
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "L" | "l" => Ok(Label::L),
            "R" | "r" => Ok(Label::R),
            "+1" => Ok(Label::Plus),
            "-1" => Ok(Label::Minus),
            "+i" => Ok(Label::PlusI),
            "-i" => Ok(Label::MinusI),
            other => Err(format!("unknown outcome label {other:?}")),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Unit-modulus relative phase between the two chambers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFactor(Complex64);

impl PhaseFactor {
    pub const ONE: PhaseFactor = PhaseFactor(Complex64 { re: 1.0, im: 0.0 });
    pub const MINUS_ONE: PhaseFactor = PhaseFactor(Complex64 { re: -1.0, im: 0.0 });
    pub const I: PhaseFactor = PhaseFactor(Complex64 { re: 0.0, im: 1.0 });
    pub const MINUS_I: PhaseFactor = PhaseFactor(Complex64 { re: 0.0, im: -1.0 });

    /// Wraps a complex number, requiring `|value| = 1` within 1e-12.
    pub fn new(value: Complex64) -> Result<Self> {
        let modulus = value.norm();
        if (modulus - 1.0).abs() > crate::qstate::AMPLITUDE_TOLERANCE {
            return Err(Error::InvalidPhase(modulus));
        }
        Ok(PhaseFactor(value))
    }

    /// `e^{i angle}`.
    pub fn from_angle(angle: f64) -> Self {
        PhaseFactor(Complex64::from_polar(1.0, angle))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// The single-box superposition `(1/sqrt(2)) (|L> + beta |R>)`, returned in
/// the position frame.
pub fn beta_state(beta: PhaseFactor) -> BoxState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    BoxState::new(vec![Basis::Position], vec![h, beta.value() * h]).expect("two finite amplitudes")
}

/// The two orthonormal vectors of `basis`, expressed over `(L, R)`.
pub fn basis_vectors(basis: Basis) -> (BoxState, BoxState) {
    let u = basis.basis_to_position();
    let column = |j: usize| {
        BoxState::new(vec![Basis::Position], vec![u[0][j], u[1][j]])
            .expect("unitary columns are finite")
    };
    (column(0), column(1))
}

/// Re-expresses a single-box state in `target` coordinates.
///
/// Multi-box expansion lives in [`crate::entangler::expand_in`]; this
/// operation keeps the 2x2 tables small and independently checkable.
pub fn change_basis(state: &BoxState, target: Basis) -> Result<BoxState> {
    if state.n_boxes() != 1 {
        return Err(Error::SingleBoxOnly(state.n_boxes()));
    }
    let source = state.frames()[0];
    // coefficients in target = U_target^dagger * U_source * coefficients
    let m = mat_mul(&target.position_to_basis(), &source.basis_to_position());
    let v = mat_apply(&m, [state.amplitudes()[0], state.amplitudes()[1]]);
    BoxState::new(vec![target], vec![v[0], v[1]])
}

/// Spin-axis label associated with a basis (position -> z, phase -> y,
/// bonding -> x).
pub fn spin_map(basis: Basis) -> SpinAxis {
    basis.spin_axis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{inner, AMPLITUDE_TOLERANCE};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_c_eq(a: Complex64, b: Complex64) {
        assert!(
            (a - b).norm() < AMPLITUDE_TOLERANCE,
            "expected {b}, got {a}"
        );
    }

    #[test]
    fn beta_state_coefficients() {
        // beta = i, 1, -1 give the three named single-box superpositions.
        let h = FRAC_1_SQRT_2;
        let plus_i = beta_state(PhaseFactor::I);
        assert_c_eq(plus_i.amplitudes()[0], c(h, 0.0));
        assert_c_eq(plus_i.amplitudes()[1], c(0.0, h));

        let plus_one = beta_state(PhaseFactor::ONE);
        assert_c_eq(plus_one.amplitudes()[1], c(h, 0.0));

        let minus_one = beta_state(PhaseFactor::MINUS_ONE);
        assert_c_eq(minus_one.amplitudes()[1], c(-h, 0.0));
    }

    #[test]
    fn non_unit_phase_rejected() {
        assert!(matches!(
            PhaseFactor::new(c(0.5, 0.0)),
            Err(Error::InvalidPhase(_))
        ));
        assert!(PhaseFactor::new(c(0.0, -1.0)).is_ok());
    }

    #[test]
    fn basis_vector_tables() {
        let h = FRAC_1_SQRT_2;
        let (l, r) = basis_vectors(Basis::Position);
        assert_c_eq(l.amplitudes()[0], Complex64::ONE);
        assert_c_eq(r.amplitudes()[1], Complex64::ONE);

        let (bond, anti) = basis_vectors(Basis::Bonding);
        assert_c_eq(bond.amplitudes()[0], c(h, 0.0));
        assert_c_eq(bond.amplitudes()[1], c(h, 0.0));
        assert_c_eq(anti.amplitudes()[1], c(-h, 0.0));

        let (pi, mi) = basis_vectors(Basis::Phase);
        assert_c_eq(pi.amplitudes()[1], c(0.0, h));
        assert_c_eq(mi.amplitudes()[1], c(0.0, -h));
    }

    #[test]
    fn bases_are_orthonormal() {
        for basis in Basis::ALL {
            let (first, second) = basis_vectors(basis);
            assert_abs_diff_eq!(inner(&first, &second).unwrap().norm(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(inner(&first, &first).unwrap().re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(inner(&second, &second).unwrap().re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn change_basis_phase_to_bonding_coefficients() {
        // The +i state re-expressed over the bonding pair carries
        // coefficients ((1+i)/2, -i(1+i)/2) = ((1+i)/2, (1-i)/2).
        let plus_i = beta_state(PhaseFactor::I);
        let in_bonding = change_basis(&plus_i, Basis::Bonding).unwrap();
        assert_c_eq(in_bonding.amplitudes()[0], c(0.5, 0.5));
        assert_c_eq(in_bonding.amplitudes()[1], c(0.5, -0.5));

        let minus_i = beta_state(PhaseFactor::MINUS_I);
        let in_bonding = change_basis(&minus_i, Basis::Bonding).unwrap();
        assert_c_eq(in_bonding.amplitudes()[0], c(0.5, -0.5));
        assert_c_eq(in_bonding.amplitudes()[1], c(0.5, 0.5));
    }

    #[test]
    fn change_basis_identity_on_same_frame() {
        let (l, _) = basis_vectors(Basis::Position);
        let same = change_basis(&l, Basis::Position).unwrap();
        assert!(same.approx_eq(&l, AMPLITUDE_TOLERANCE));
    }

    #[test]
    fn change_basis_round_trip() {
        let state = beta_state(PhaseFactor::from_angle(0.7));
        for target in Basis::ALL {
            let there = change_basis(&state, target).unwrap();
            let back = change_basis(&there, Basis::Position).unwrap();
            assert!(back.approx_eq(&state, AMPLITUDE_TOLERANCE));
        }
    }

    #[test]
    fn change_basis_rejects_multi_box() {
        let pair = crate::entangler::two_box_correlated();
        assert!(matches!(
            change_basis(&pair, Basis::Bonding),
            Err(Error::SingleBoxOnly(2))
        ));
    }

    #[test]
    fn composed_frame_changes_are_identity() {
        // Position -> Phase -> Bonding -> Position composes to the identity.
        let m1 = mat_mul(
            &Basis::Phase.position_to_basis(),
            &Basis::Position.basis_to_position(),
        );
        let m2 = mat_mul(
            &Basis::Bonding.position_to_basis(),
            &Basis::Phase.basis_to_position(),
        );
        let m3 = mat_mul(
            &Basis::Position.position_to_basis(),
            &Basis::Bonding.basis_to_position(),
        );
        let total = mat_mul(&m3, &mat_mul(&m2, &m1));
        for (i, row) in total.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                let expected = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                assert_c_eq(entry, expected);
            }
        }
    }

    #[test]
    fn all_transfer_matrices_unitary() {
        for basis in Basis::ALL {
            let u = basis.basis_to_position();
            let product = mat_mul(&adjoint(&u), &u);
            for (i, row) in product.iter().enumerate() {
                for (j, &entry) in row.iter().enumerate() {
                    let expected = if i == j {
                        Complex64::ONE
                    } else {
                        Complex64::ZERO
                    };
                    assert_c_eq(entry, expected);
                }
            }
        }
    }

    #[test]
    fn phase_over_bonding_coefficients_recover_phase_over_position() {
        // Expanding the bonding-frame coefficients of the +i/-i states back
        // through the bonding vectors must land on the original position
        // amplitudes.
        for beta in [PhaseFactor::I, PhaseFactor::MINUS_I] {
            let original = beta_state(beta);
            let coeffs = change_basis(&original, Basis::Bonding).unwrap();
            let (bond, anti) = basis_vectors(Basis::Bonding);
            let rebuilt = crate::qstate::superpose(&[
                (coeffs.amplitudes()[0], &bond),
                (coeffs.amplitudes()[1], &anti),
            ])
            .unwrap();
            assert!(rebuilt.approx_eq(&original, AMPLITUDE_TOLERANCE));
        }
    }

    #[test]
    fn spin_correspondence() {
        assert_eq!(spin_map(Basis::Position), SpinAxis::Z);
        assert_eq!(spin_map(Basis::Phase), SpinAxis::Y);
        assert_eq!(spin_map(Basis::Bonding), SpinAxis::X);
    }

    #[test]
    fn label_round_trips_and_signs() {
        for basis in Basis::ALL {
            for label in basis.labels() {
                assert_eq!(label.basis(), basis);
                assert_eq!(label.flipped().flipped(), label);
                assert_eq!(label.to_string().parse::<Label>().unwrap(), label);
            }
        }
        assert_eq!(Label::L.sign(), 1);
        assert_eq!(Label::R.sign(), -1);
        assert_eq!(Label::Minus.sign(), -1);
    }

    #[test]
    fn basis_parse_errors() {
        assert!("positron".parse::<Basis>().is_err());
        assert_eq!("Phase".parse::<Basis>().unwrap(), Basis::Phase);
    }
}
