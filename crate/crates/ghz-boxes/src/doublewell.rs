//! Numerical waveforms for the physical realizations of a two-chambered box:
//! a particle in two infinite square wells, and the two separated 1s orbitals
//! of a singly ionized hydrogen molecule.
//!
//! Natural units throughout: the Bohr radius is 1 for orbitals, and well
//! coordinates are in arbitrary length units (width 1 by default). Energies
//! are out of scope; only wave shapes and overlaps are computed.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::boxbasis::PhaseFactor;
use crate::error::{Error, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;
const PI: f64 = std::f64::consts::PI;

/// Two infinitely deep square wells of equal width separated by a gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellGeometry {
    pub well_width: f64,
    pub gap: f64,
    pub left_edge: f64,
    pub quantum_number: u32,
}

impl WellGeometry {
    pub fn new(well_width: f64, gap: f64, left_edge: f64, quantum_number: u32) -> Result<Self> {
        if well_width <= 0.0 || !well_width.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "well width must be positive, got {well_width}"
            )));
        }
        if gap < 0.0 || !gap.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "gap must be non-negative, got {gap}"
            )));
        }
        if quantum_number == 0 {
            return Err(Error::InvalidGeometry(
                "quantum number must be at least 1".to_string(),
            ));
        }
        Ok(WellGeometry {
            well_width,
            gap,
            left_edge,
            quantum_number,
        })
    }

    /// Left wall of the chosen well.
    fn wall(&self, side: Side) -> f64 {
        match side {
            Side::L => self.left_edge,
            Side::R => self.left_edge + self.well_width + self.gap,
        }
    }

    /// Rightmost wall of the right well.
    pub fn right_edge(&self) -> f64 {
        self.left_edge + 2.0 * self.well_width + self.gap
    }

    /// Midpoint of the gap between the wells.
    pub fn midpoint(&self) -> f64 {
        self.left_edge + self.well_width + self.gap / 2.0
    }
}

impl Default for WellGeometry {
    fn default() -> Self {
        WellGeometry {
            well_width: 1.0,
            gap: 1.0,
            left_edge: 0.0,
            quantum_number: 1,
        }
    }
}

/// Which well a component wave lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    L,
    R,
}

/// One sampled point of a (generally complex) wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveSample {
    pub x: f64,
    pub psi_re: f64,
    pub psi_im: f64,
}

impl WaveSample {
    pub fn psi(&self) -> Complex64 {
        Complex64::new(self.psi_re, self.psi_im)
    }

    pub fn density(&self) -> f64 {
        self.psi_re * self.psi_re + self.psi_im * self.psi_im
    }
}

/// Normalized eigenfunction of one well: `sqrt(2/w) sin(n pi (x-x0)/w)`
/// inside the chosen well, zero everywhere else (infinite walls).
pub fn square_well_wave(geometry: &WellGeometry, side: Side, x: f64) -> f64 {
    let x0 = geometry.wall(side);
    let w = geometry.well_width;
    if x < x0 || x > x0 + w {
        return 0.0;
    }
    let n = geometry.quantum_number as f64;
    (2.0 / w).sqrt() * (n * PI * (x - x0) / w).sin()
}

/// Samples of `(1/sqrt(2)) (psi_L + beta psi_R)` on the given grid.
pub fn superposition_samples(
    geometry: &WellGeometry,
    beta: PhaseFactor,
    grid: &[f64],
) -> Vec<WaveSample> {
    grid.iter()
        .map(|&x| {
            let left = square_well_wave(geometry, Side::L, x);
            let right = square_well_wave(geometry, Side::R, x);
            let psi = Complex64::new(FRAC_1_SQRT_2 * left, 0.0)
                + beta.value() * Complex64::new(FRAC_1_SQRT_2 * right, 0.0);
            WaveSample {
                x,
                psi_re: psi.re,
                psi_im: psi.im,
            }
        })
        .collect()
}

/// Hydrogen 1s orbital centered at `center`, in units with Bohr radius 1:
/// `(1/sqrt(pi)) e^{-r}`.
pub fn h2plus_orbital(center: [f64; 3], point: [f64; 3]) -> f64 {
    let r = ((point[0] - center[0]).powi(2)
        + (point[1] - center[1]).powi(2)
        + (point[2] - center[2]).powi(2))
    .sqrt();
    (1.0 / PI.sqrt()) * (-r).exp()
}

/// Two 1s orbitals whose centers sit `separation` apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitalGeometry {
    /// Internuclear distance, in units of `bohr_radius`.
    pub separation: f64,
    pub bohr_radius: f64,
}

impl OrbitalGeometry {
    pub fn new(separation: f64, bohr_radius: f64) -> Result<Self> {
        if separation <= 0.0 || !separation.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "separation must be positive, got {separation}"
            )));
        }
        if bohr_radius <= 0.0 || !bohr_radius.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "Bohr radius must be positive, got {bohr_radius}"
            )));
        }
        Ok(OrbitalGeometry {
            separation,
            bohr_radius,
        })
    }

    /// The separation at which the orbitals have stopped overlapping for
    /// the purposes of the box model.
    pub fn scaled_separation(&self) -> f64 {
        self.separation / self.bohr_radius
    }
}

impl Default for OrbitalGeometry {
    fn default() -> Self {
        OrbitalGeometry {
            separation: 10.0,
            bohr_radius: 1.0,
        }
    }
}

/// Overlap below which the two chambers count as disjoint. Surfaced as a
/// named constant because the cutoff is a modeling decision, not physics.
pub const OVERLAP_THRESHOLD: f64 = 0.01;

/// Numerical overlap integral of the two 1s orbitals.
///
/// Works in prolate spheroidal coordinates `u = (r1+r2)/d`,
/// `v = (r1-r2)/d`, where the volume element is
/// `(d^3/8)(u^2 - v^2) du dv dphi` and the integrand depends only on `u`.
/// Both directions are integrated with composite Simpson; the closed-form
/// value lives only in the test suite.
pub fn orbital_overlap(geometry: &OrbitalGeometry) -> f64 {
    let rho = geometry.scaled_separation();
    // e^{-rho u} has decayed below 1e-26 relative once rho (u - 1) > 60.
    let u_max = 1.0 + 60.0 / rho;
    let u_intervals = 8192usize;
    let v_intervals = 16usize;
    let du = (u_max - 1.0) / u_intervals as f64;
    let dv = 2.0 / v_intervals as f64;

    let simpson_weight = |i: usize, n: usize| -> f64 {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };

    let mut integral = 0.0;
    for i in 0..=u_intervals {
        let u = 1.0 + i as f64 * du;
        let radial = (-rho * u).exp();
        let mut inner = 0.0;
        for j in 0..=v_intervals {
            let v = -1.0 + j as f64 * dv;
            inner += simpson_weight(j, v_intervals) * (u * u - v * v);
        }
        inner *= dv / 3.0;
        integral += simpson_weight(i, u_intervals) * radial * inner;
    }
    integral *= du / 3.0;

    // (1/pi) * 2 pi * (rho^3 / 8) * integral
    rho.powi(3) / 4.0 * integral
}

/// Figure tags accepted by the data emitter. The string forms are the
/// interface: `fig2`, `fig9`, `fig10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Figure {
    /// The two component waves in their disjoint wells (`fig2`).
    DisjointWells,
    /// The symmetric and antisymmetric well superpositions (`fig9`).
    WellSuperpositions,
    /// Bonding and antibonding molecular states on a plane (`fig10`).
    BondingOrbitals,
}

impl Figure {
    pub const ALL: [Figure; 3] = [
        Figure::DisjointWells,
        Figure::WellSuperpositions,
        Figure::BondingOrbitals,
    ];
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::DisjointWells => "fig2",
            Figure::WellSuperpositions => "fig9",
            Figure::BondingOrbitals => "fig10",
        })
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig2" => Ok(Figure::DisjointWells),
            "fig9" => Ok(Figure::WellSuperpositions),
            "fig10" => Ok(Figure::BondingOrbitals),
            other => Err(Error::UnknownFigure(other.to_string())),
        }
    }
}

/// One sampled row: one or three coordinates plus the complex amplitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub coords: Vec<f64>,
    pub psi_re: f64,
    pub psi_im: f64,
}

impl SampleRow {
    pub fn density(&self) -> f64 {
        self.psi_re * self.psi_re + self.psi_im * self.psi_im
    }
}

/// One named curve or surface of a figure.
#[derive(Debug, Clone, Serialize)]
pub struct Dataset {
    pub name: String,
    /// Coordinate column names: `["x"]` or `["x", "y", "z"]`.
    pub coordinates: Vec<&'static str>,
    pub rows: Vec<SampleRow>,
}

/// Deterministic tabular samples for one figure.
#[derive(Debug, Clone, Serialize)]
pub struct FigureData {
    pub figure: Figure,
    pub datasets: Vec<Dataset>,
    /// Orbital overlap at the geometry used, for orbital figures.
    pub overlap: Option<f64>,
}

fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    let step = (end - start) / (points - 1) as f64;
    (0..points).map(|i| start + i as f64 * step).collect()
}

/// Symmetric grid over `[-half, half]` that always contains 0 exactly.
fn symmetric_grid(half: f64, points: usize) -> Vec<f64> {
    let points = if points.is_multiple_of(2) {
        points + 1
    } else {
        points
    };
    let half_count = (points - 1) / 2;
    let step = half / half_count as f64;
    (-(half_count as isize)..=half_count as isize)
        .map(|i| i as f64 * step)
        .collect()
}

fn well_grid(geometry: &WellGeometry, resolution: usize) -> Vec<f64> {
    let margin = 0.25 * geometry.well_width;
    linspace(
        geometry.left_edge - margin,
        geometry.right_edge() + margin,
        resolution,
    )
}

fn well_dataset(name: &str, grid: &[f64], samples: Vec<WaveSample>) -> Dataset {
    Dataset {
        name: name.to_string(),
        coordinates: vec!["x"],
        rows: grid
            .iter()
            .zip(samples)
            .map(|(&x, s)| SampleRow {
                coords: vec![x],
                psi_re: s.psi_re,
                psi_im: s.psi_im,
            })
            .collect(),
    }
}

/// Columnar samples for the requested figure at the default geometries.
/// Deterministic for fixed inputs; `resolution` must be at least 16.
pub fn emit_figure_data(figure: Figure, resolution: usize) -> Result<FigureData> {
    if resolution < 16 {
        return Err(Error::ResolutionTooSmall(resolution));
    }
    match figure {
        Figure::DisjointWells => {
            let geometry = WellGeometry::default();
            let grid = well_grid(&geometry, resolution);
            let component = |side: Side, name: &str| Dataset {
                name: name.to_string(),
                coordinates: vec!["x"],
                rows: grid
                    .iter()
                    .map(|&x| SampleRow {
                        coords: vec![x],
                        psi_re: square_well_wave(&geometry, side, x),
                        psi_im: 0.0,
                    })
                    .collect(),
            };
            Ok(FigureData {
                figure,
                datasets: vec![
                    component(Side::L, "psi_left"),
                    component(Side::R, "psi_right"),
                ],
                overlap: None,
            })
        }
        Figure::WellSuperpositions => {
            let geometry = WellGeometry::default();
            let grid = well_grid(&geometry, resolution);
            let plus = superposition_samples(&geometry, PhaseFactor::ONE, &grid);
            let minus = superposition_samples(&geometry, PhaseFactor::MINUS_ONE, &grid);
            Ok(FigureData {
                figure,
                datasets: vec![
                    well_dataset("psi_plus1", &grid, plus),
                    well_dataset("psi_minus1", &grid, minus),
                ],
                overlap: None,
            })
        }
        Figure::BondingOrbitals => {
            let geometry = OrbitalGeometry::default();
            let d = geometry.scaled_separation();
            let left = [-d / 2.0, 0.0, 0.0];
            let right = [d / 2.0, 0.0, 0.0];
            // Plane slice z = 0; the x grid contains the midplane x = 0
            // exactly so destructive interference is visible as exact zeros.
            let xs = symmetric_grid(d / 2.0 + 6.0, resolution);
            let ys = linspace(-6.0, 6.0, resolution);
            let combination = |sign: f64, name: &str| Dataset {
                name: name.to_string(),
                coordinates: vec!["x", "y", "z"],
                rows: ys
                    .iter()
                    .flat_map(|&y| {
                        let xs = &xs;
                        xs.iter().map(move |&x| {
                            let point = [x, y, 0.0];
                            let psi = FRAC_1_SQRT_2
                                * (h2plus_orbital(left, point)
                                    + sign * h2plus_orbital(right, point));
                            SampleRow {
                                coords: vec![x, y, 0.0],
                                psi_re: psi,
                                psi_im: 0.0,
                            }
                        })
                    })
                    .collect(),
            };
            Ok(FigureData {
                figure,
                datasets: vec![
                    combination(1.0, "bonding"),
                    combination(-1.0, "antibonding"),
                ],
                overlap: Some(orbital_overlap(&geometry)),
            })
        }
    }
}

/// Writes one dataset as CSV: header row, then
/// `x[,y,z],psi_re,psi_im,density` per sample. Decimal points only, no
/// locale formatting.
pub fn write_csv<W: Write>(dataset: &Dataset, writer: &mut W) -> std::io::Result<()> {
    writeln!(
        writer,
        "{},psi_re,psi_im,density",
        dataset.coordinates.join(",")
    )?;
    for row in &dataset.rows {
        for coord in &row.coords {
            write!(writer, "{coord},")?;
        }
        writeln!(writer, "{},{},{}", row.psi_re, row.psi_im, row.density())?;
    }
    Ok(())
}
