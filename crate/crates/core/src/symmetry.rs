//! Momentum-inversion (UV/IR) symmetries: p ↦ 1/(λ|a₀a₁|p) in 3D and
//! p ↦ 1/(𝒂₀𝒂₁p) in 2D, the tabulated action on (φ, θ) and on the out-state
//! density matrix, and numerical verification passes over momentum grids.

use std::f64::consts::PI;

use serde::Serialize;

use crate::ere::{Table, TwoChannelModel};
use crate::error::{invalid, Result, ScatterError};
use crate::spin::{
    build_s_operator, entanglement_power_closed, out_density_matrix, project_between, project_total_spin,
    DensityMatrix4, ProductState, SpinSector,
};
use crate::torus::{angle_distance, check_grid};

/// p ↦ 1/(λ|a₀a₁|p).
pub fn inverted_momentum(p: f64, lambda: f64, a0: f64, a1: f64) -> Result<f64> {
    if p == 0.0 {
        return Err(ScatterError::ThresholdToInfinity);
    }
    if !(p > 0.0) {
        return Err(invalid("p", format!("momentum must be positive, got {p}")));
    }
    if !(lambda > 0.0) {
        return Err(invalid("lambda", format!("must be positive, got {lambda}")));
    }
    if a0 == 0.0 || a1 == 0.0 {
        return Err(invalid("a", "scattering lengths must be non-zero"));
    }
    Ok(1.0 / (lambda * (a0 * a1).abs() * p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleSource {
    Phi,
    Theta,
}

/// new angle = sign · source + offset
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleMap {
    pub source: AngleSource,
    pub sign: f64,
    pub offset: f64,
}

impl AngleMap {
    const fn new(source: AngleSource, sign: f64, offset: f64) -> Self {
        Self { source, sign, offset }
    }

    pub fn apply(&self, phi: f64, theta: f64) -> f64 {
        let x = match self.source {
            AngleSource::Phi => phi,
            AngleSource::Theta => theta,
        };
        self.sign * x + self.offset
    }
}

/// Image of the out-state density matrix under the inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoClass {
    /// ρ ↦ ρ
    Rho,
    /// ρ ↦ ρ̄
    RhoBar,
    /// ρ ↦ ρ₋ + ρ̄₊: singlet block from ρ, triplet block from ρ̄
    SingletRhoTripletBar,
    /// ρ ↦ ρ₊ + ρ̄₋: triplet block from ρ, singlet block from ρ̄
    TripletRhoSingletBar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryMap {
    pub phi_map: AngleMap,
    pub theta_map: AngleMap,
    pub rho_class: RhoClass,
}

impl SymmetryMap {
    pub fn apply(&self, phi: f64, theta: f64) -> (f64, f64) {
        (self.phi_map.apply(phi, theta), self.theta_map.apply(phi, theta))
    }

    pub fn swaps_channels(&self) -> bool {
        self.phi_map.source == AngleSource::Theta
    }

    /// +1 if φ − θ is preserved mod 2π, −1 if it is negated, 0 otherwise.
    pub fn phase_difference_sign(&self) -> i8 {
        let probe = |phi: f64, theta: f64| {
            let (a, b) = self.apply(phi, theta);
            a - b
        };
        let (d1, d2) = (probe(0.3, -1.1), probe(-0.9, 0.4));
        let (x1, x2) = (0.3 - -1.1, -0.9 - 0.4);
        if angle_distance(d1, x1) < 1e-12 && angle_distance(d2, x2) < 1e-12 {
            1
        } else if angle_distance(d1, -x1) < 1e-12 && angle_distance(d2, -x2) < 1e-12 {
            -1
        } else {
            0
        }
    }
}

use AngleSource::{Phi, Theta};

/// The tabulated (φ ↦, θ ↦, ρ ↦) triple for a table row.
pub fn expected_map(table: Table, row: usize) -> Result<SymmetryMap> {
    if row == 0 || row > table.rows() {
        return Err(ScatterError::InvalidRow { table: table.name(), row });
    }
    let m = |pm: AngleMap, tm: AngleMap, rho_class| SymmetryMap { phi_map: pm, theta_map: tm, rho_class };
    Ok(match table {
        Table::T1 => match row {
            1 => m(AngleMap::new(Theta, 1.0, -PI), AngleMap::new(Phi, 1.0, PI), RhoClass::RhoBar),
            2 => m(AngleMap::new(Theta, 1.0, PI), AngleMap::new(Phi, 1.0, -PI), RhoClass::RhoBar),
            3 => m(AngleMap::new(Theta, -1.0, PI), AngleMap::new(Phi, -1.0, PI), RhoClass::Rho),
            _ => m(AngleMap::new(Theta, -1.0, -PI), AngleMap::new(Phi, -1.0, -PI), RhoClass::Rho),
        },
        // Table 3 carries the same maps as Table 2
        Table::T2 | Table::T3 => match row {
            1 => m(AngleMap::new(Phi, 1.0, 0.0), AngleMap::new(Theta, 1.0, 0.0), RhoClass::Rho),
            2 => m(AngleMap::new(Phi, 1.0, 0.0), AngleMap::new(Theta, -1.0, 0.0), RhoClass::SingletRhoTripletBar),
            3 => m(AngleMap::new(Phi, -1.0, 0.0), AngleMap::new(Theta, 1.0, 0.0), RhoClass::TripletRhoSingletBar),
            4 => m(AngleMap::new(Phi, -1.0, 0.0), AngleMap::new(Theta, -1.0, 0.0), RhoClass::RhoBar),
            5 => m(AngleMap::new(Theta, 1.0, 0.0), AngleMap::new(Phi, 1.0, 0.0), RhoClass::RhoBar),
            _ => m(AngleMap::new(Theta, -1.0, 0.0), AngleMap::new(Phi, -1.0, 0.0), RhoClass::Rho),
        },
        Table::TwoD => m(AngleMap::new(Theta, -1.0, 0.0), AngleMap::new(Phi, -1.0, 0.0), RhoClass::Rho),
    })
}

/// One named check inside a verification pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub table: Table,
    pub row: usize,
    pub relation: String,
    pub max_dev: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Cross-block (singlet–triplet) behavior of a mixed-class row, recorded as
/// data: max deviation of P_s ρ(p′) P_t from the same block of ρ(p) and ρ̄(p).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossBlockRecord {
    pub max_dev_vs_rho: f64,
    pub max_dev_vs_rho_bar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    #[serde(flatten)]
    pub report: SymmetryReport,
    pub rho_class: RhoClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_block: Option<CrossBlockRecord>,
}

struct Pairing {
    table: Table,
    row: usize,
    map: SymmetryMap,
    scale: f64,
}

fn pairing(model: &TwoChannelModel, p_grid: &[f64]) -> Result<Pairing> {
    let family = model.family.ok_or(ScatterError::MissingFamily)?;
    let table = family.table;
    match (table, model.dimension()) {
        (Table::TwoD, 3) => return Err(ScatterError::WrongDimension { expected: 2, found: 3 }),
        (Table::T1 | Table::T2 | Table::T3, 2) => return Err(ScatterError::WrongDimension { expected: 3, found: 2 }),
        _ => {}
    }
    check_grid(p_grid)?;
    Ok(Pairing { table, row: family.row, map: expected_map(table, family.row)?, scale: model.inversion_scale()? })
}

fn mirror(scale: f64, p: f64) -> f64 {
    1.0 / (scale * p)
}

/// Check (φ, θ)(p′) against the tabulated image of (φ, θ)(p) mod 2π.
pub fn verify_phase_map(model: &TwoChannelModel, p_grid: &[f64], tol: f64) -> Result<SymmetryReport> {
    let pr = pairing(model, p_grid)?;
    let mut max_dev: f64 = 0.0;
    for &p in p_grid {
        let here = model.phase_shifts(p)?;
        let there = model.phase_shifts(mirror(pr.scale, p))?;
        let (phi_img, theta_img) = pr.map.apply(here.phi, here.theta);
        max_dev = max_dev.max(angle_distance(there.phi, phi_img)).max(angle_distance(there.theta, theta_img));
    }
    Ok(SymmetryReport {
        table: pr.table,
        row: pr.row,
        relation: "phase_map".into(),
        max_dev,
        tol,
        pass: max_dev <= tol,
    })
}

fn rho_pair(phi: f64, theta: f64, input: &ProductState) -> Result<(DensityMatrix4, DensityMatrix4)> {
    let s = build_s_operator(phi, theta);
    Ok((out_density_matrix(&s, input, false)?, out_density_matrix(&s, input, true)?))
}

/// Compare ρ(p′) with the tabulated image of ρ(p) for every in-state.
///
/// Mixed rows are compared block-wise on the diagonal blocks only; the
/// singlet–triplet block is reported in `cross_block`.
pub fn verify_density_map(
    model: &TwoChannelModel,
    in_states: &[ProductState],
    p_grid: &[f64],
    tol: f64,
) -> Result<DensityReport> {
    let pr = pairing(model, p_grid)?;
    if in_states.is_empty() {
        return Err(invalid("in_states", "need at least one product state"));
    }
    let mixed = matches!(pr.map.rho_class, RhoClass::SingletRhoTripletBar | RhoClass::TripletRhoSingletBar);
    let mut max_dev: f64 = 0.0;
    let mut cross = CrossBlockRecord { max_dev_vs_rho: 0.0, max_dev_vs_rho_bar: 0.0 };
    for &p in p_grid {
        let here = model.phase_shifts(p)?;
        let there = model.phase_shifts(mirror(pr.scale, p))?;
        for input in in_states {
            let (rho, rho_bar) = rho_pair(here.phi, here.theta, input)?;
            let (image, _) = rho_pair(there.phi, there.theta, input)?;
            let dev = match pr.map.rho_class {
                RhoClass::Rho => image.max_abs_diff(&rho),
                RhoClass::RhoBar => image.max_abs_diff(&rho_bar),
                RhoClass::SingletRhoTripletBar | RhoClass::TripletRhoSingletBar => {
                    let (singlet_src, triplet_src) = if pr.map.rho_class == RhoClass::SingletRhoTripletBar {
                        (&rho, &rho_bar)
                    } else {
                        (&rho_bar, &rho)
                    };
                    let ds = project_total_spin(&image, SpinSector::Singlet)
                        .max_abs_diff(&project_total_spin(singlet_src, SpinSector::Singlet));
                    let dt = project_total_spin(&image, SpinSector::Triplet)
                        .max_abs_diff(&project_total_spin(triplet_src, SpinSector::Triplet));
                    let st = |r: &DensityMatrix4| project_between(r, SpinSector::Singlet, SpinSector::Triplet);
                    cross.max_dev_vs_rho = cross.max_dev_vs_rho.max(st(&image).max_abs_diff(&st(&rho)));
                    cross.max_dev_vs_rho_bar = cross.max_dev_vs_rho_bar.max(st(&image).max_abs_diff(&st(&rho_bar)));
                    ds.max(dt)
                }
            };
            max_dev = max_dev.max(dev);
        }
    }
    Ok(DensityReport {
        report: SymmetryReport {
            table: pr.table,
            row: pr.row,
            relation: "density_map".into(),
            max_dev,
            tol,
            pass: max_dev <= tol,
        },
        rho_class: pr.map.rho_class,
        cross_block: mixed.then_some(cross),
    })
}

/// ℰ(p′) = ℰ(p) across the grid.
pub fn verify_ep_invariance(model: &TwoChannelModel, p_grid: &[f64], tol: f64) -> Result<SymmetryReport> {
    let pr = pairing(model, p_grid)?;
    let mut max_dev: f64 = 0.0;
    for &p in p_grid {
        let here = model.phase_shifts(p)?;
        let there = model.phase_shifts(mirror(pr.scale, p))?;
        let dev =
            (entanglement_power_closed(here.phi, here.theta) - entanglement_power_closed(there.phi, there.theta)).abs();
        max_dev = max_dev.max(dev);
    }
    Ok(SymmetryReport {
        table: pr.table,
        row: pr.row,
        relation: "ep_invariance".into(),
        max_dev,
        tol,
        pass: max_dev <= tol,
    })
}

/// Max deviation of (φ − θ)(p′) from ±(φ − θ)(p), with the sign taken from
/// the row's density-matrix class (+ for ρ, − for ρ̄).
pub fn verify_phase_difference(model: &TwoChannelModel, p_grid: &[f64], tol: f64) -> Result<SymmetryReport> {
    let pr = pairing(model, p_grid)?;
    let sign = match pr.map.rho_class {
        RhoClass::Rho => 1.0,
        RhoClass::RhoBar => -1.0,
        _ => return Err(ScatterError::Unsupported("mixed density classes fix no phase-difference relation".into())),
    };
    let mut max_dev: f64 = 0.0;
    for &p in p_grid {
        let here = model.phase_shifts(p)?;
        let there = model.phase_shifts(mirror(pr.scale, p))?;
        max_dev = max_dev.max(angle_distance(there.phi - there.theta, sign * (here.phi - here.theta)));
    }
    Ok(SymmetryReport {
        table: pr.table,
        row: pr.row,
        relation: "phase_difference".into(),
        max_dev,
        tol,
        pass: max_dev <= tol,
    })
}
