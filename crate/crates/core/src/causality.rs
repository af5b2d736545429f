//! Wigner causality bounds and audits of zero-range trajectories: tangent
//! vector inequalities and the quadrant exit rule.

use std::f64::consts::PI;

use serde::Serialize;

use crate::ere::TwoChannelModel;
use crate::error::{invalid, Result, ScatterError};
use crate::torus::{check_grid, Trajectory};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Lower bound on dδ/dp for an interaction of range R:
/// −R + sin(2δ + 2pR)/(2p).
pub fn wigner_derivative_bound(p: f64, delta: f64, range: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(invalid("p", format!("must be positive (use threshold_range_bound_3d at p = 0), got {p}")));
    }
    check_range(range)?;
    Ok(-range + (2.0 * delta + 2.0 * p * range).sin() / (2.0 * p))
}

/// Classical limit of the Wigner bound: dδ/dp ≥ −R.
pub fn semiclassical_derivative_bound(range: f64) -> Result<f64> {
    check_range(range)?;
    Ok(-range)
}

fn check_range(range: f64) -> Result<()> {
    if !(range >= 0.0) || !range.is_finite() {
        return Err(invalid("R", format!("range must be finite and non-negative, got {range}")));
    }
    Ok(())
}

/// Largest effective range allowed at threshold: 2[R − R²/a + R³/(3a²)].
pub fn threshold_range_bound_3d(range: f64, a: f64) -> Result<f64> {
    check_range(range)?;
    if a == 0.0 || !a.is_finite() {
        return Err(invalid("a", format!("scattering length must be finite and non-zero, got {a}")));
    }
    Ok(2.0 * (range - range * range / a + range.powi(3) / (3.0 * a * a)))
}

/// Largest effective area allowed in 2D:
/// (R²/π){[ln(R/(2𝒂)) + γ − ½]² + ¼}.
pub fn effective_area_bound_2d(range: f64, a2: f64) -> Result<f64> {
    check_range(range)?;
    if !(a2 > 0.0) || !a2.is_finite() {
        return Err(invalid("a2", format!("2D scattering length must be positive, got {a2}")));
    }
    if range == 0.0 {
        return Ok(0.0);
    }
    let l = (range / (2.0 * a2)).ln() + EULER_GAMMA - 0.5;
    Ok(range * range / PI * (l * l + 0.25))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Singlet,
    Triplet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentViolation {
    pub p: f64,
    pub channel: Channel,
    /// (sin(angle)/p − derivative) / max(1, |sin(angle)/p|), > 0 when violated
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentAudit {
    pub checked: usize,
    pub violations: Vec<TangentViolation>,
}

impl TangentAudit {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check φ' ≥ sin φ/p and θ' ≥ sin θ/p at every grid point. An inequality
/// counts as violated when the shortfall exceeds tol · max(1, |sin/p|).
pub fn tangent_vector_audit(model: &TwoChannelModel, p_grid: &[f64], tol: f64) -> Result<TangentAudit> {
    model.channels_3d()?;
    check_grid(p_grid)?;
    if !(tol >= 0.0) {
        return Err(invalid("tol", "must be non-negative"));
    }
    let mut violations = Vec::new();
    for &p in p_grid {
        let [s, t] = model.jets(p)?;
        for (jet, channel) in [(s, Channel::Singlet), (t, Channel::Triplet)] {
            if jet.flag.is_some() {
                continue;
            }
            let bound = jet.value.sin() / p;
            let excess = (bound - jet.d1) / bound.abs().max(1.0);
            if excess > tol {
                violations.push(TangentViolation { p, channel, excess });
            }
        }
    }
    Ok(TangentAudit { checked: p_grid.len(), violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    Upper,
    Right,
    Lower,
    Left,
}

impl Edge {
    pub fn allowed(&self) -> bool {
        matches!(self, Edge::Upper | Edge::Right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    /// momentum of the sample after the crossing
    pub p: f64,
    pub edge: Edge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExitAudit {
    pub crossings: Vec<Crossing>,
    pub forbidden: usize,
}

impl ExitAudit {
    pub fn pass(&self) -> bool {
        self.forbidden == 0
    }
}

/// Largest phase change between adjacent samples the exit audit accepts.
pub const EXIT_AUDIT_MAX_JUMP: f64 = PI / 4.0;

/// Locate crossings of the lines φ, θ ∈ πℤ and label the exit edge: φ
/// increasing through a boundary leaves through the right edge, θ
/// increasing through the upper edge.
pub fn quadrant_exit_audit(trajectory: &Trajectory) -> Result<ExitAudit> {
    let mut crossings = Vec::new();
    for w in trajectory.samples.windows(2) {
        let (a, b) = (w[0].unwrapped, w[1].unwrapped);
        let jump = (b.0 - a.0).abs().max((b.1 - a.1).abs());
        if jump >= EXIT_AUDIT_MAX_JUMP {
            return Err(ScatterError::GridTooCoarse { p: w[1].p, jump, limit: EXIT_AUDIT_MAX_JUMP });
        }
        for (x0, x1, up, down) in [(a.0, b.0, Edge::Right, Edge::Left), (a.1, b.1, Edge::Upper, Edge::Lower)] {
            let (k0, k1) = ((x0 / PI).floor(), (x1 / PI).floor());
            if k1 > k0 {
                crossings.push(Crossing { p: w[1].p, edge: up });
            } else if k1 < k0 {
                crossings.push(Crossing { p: w[1].p, edge: down });
            }
        }
    }
    let forbidden = crossings.iter().filter(|c| !c.edge.allowed()).count();
    Ok(ExitAudit { crossings, forbidden })
}
