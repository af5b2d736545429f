//! Geometric potentials on the flat torus, the lapse and inaffinity of the
//! momentum parameterization, and trajectory-equation residuals.
//!
//! With ds² = ½(dφ² + dθ²) the inverse metric is 2·1, so the trajectory
//! equations in the momentum parameter read
//!
//! ```text
//! φ'' − κ φ' + N² ∂_φ V = 0,    θ'' − κ θ' + N² ∂_θ V = 0,    κ = N'/N.
//! ```
//!
//! Every potential here depends on ψ = φ + εθ only; the lapse is built from
//! the complementary combination χ = φ − εθ.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use serde::Serialize;

use crate::ere::{PhaseJet, Table, TwoChannelModel};
use crate::error::{invalid, Result, ScatterError};
use crate::torus::{check_grid, Trajectory};

/// Points where |cos(sψ + χ)| falls below this are excluded from residuals.
pub const POTENTIAL_SINGULARITY_TOL: f64 = 1e-6;
/// Points where |N| falls below this are excluded from residuals.
pub const LAPSE_SINGULARITY_TOL: f64 = 1e-10;

/// V(φ, θ) = A · tan²(s(φ + εθ) + χ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricPotential {
    pub amplitude: f64,
    pub epsilon: f64,
    pub scale: f64,
    pub phase: f64,
    pub c1: f64,
}

impl GeometricPotential {
    pub fn argument(&self, phi: f64, theta: f64) -> f64 {
        self.scale * (phi + self.epsilon * theta) + self.phase
    }

    pub fn value(&self, phi: f64, theta: f64) -> f64 {
        let t = self.argument(phi, theta).tan();
        self.amplitude * t * t
    }

    /// dV/dψ with ψ = φ + εθ.
    pub fn d_psi(&self, phi: f64, theta: f64) -> f64 {
        let w = self.argument(phi, theta);
        let c = w.cos();
        2.0 * self.amplitude * self.scale * w.sin() / (c * c * c)
    }

    /// (∂_φ V, ∂_θ V)
    pub fn gradient(&self, phi: f64, theta: f64) -> (f64, f64) {
        let d = self.d_psi(phi, theta);
        (d, self.epsilon * d)
    }

    pub fn is_singular(&self, phi: f64, theta: f64) -> bool {
        self.argument(phi, theta).cos().abs() < POTENTIAL_SINGULARITY_TOL
    }
}

fn check_c1(c1: f64) -> Result<()> {
    if c1 == 0.0 || !c1.is_finite() {
        return Err(invalid("c1", format!("must be finite and non-zero, got {c1}")));
    }
    Ok(())
}

/// ε = −1 for same-sign scattering lengths, +1 otherwise.
pub fn epsilon_for(a0: f64, a1: f64) -> f64 {
    if a0 * a1 > 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Potential of the 3D scattering-length trajectories.
pub fn potential_3d(a0: f64, a1: f64, c1: f64) -> Result<GeometricPotential> {
    if a0 == 0.0 || a1 == 0.0 || !a0.is_finite() || !a1.is_finite() {
        return Err(invalid(
            "a",
            "scattering lengths must be finite and non-zero; no potential at the trivial fixed point",
        ));
    }
    check_c1(c1)?;
    let s = a0.abs() + a1.abs();
    Ok(GeometricPotential {
        amplitude: (a0 * a1).abs() / (s * s * c1 * c1),
        epsilon: epsilon_for(a0, a1),
        scale: 0.5,
        phase: 0.0,
        c1,
    })
}

fn lam14_rows(model: &TwoChannelModel) -> Result<(f64, f64)> {
    let family = model.family.ok_or(ScatterError::MissingFamily)?;
    if !matches!(family.table, Table::T2 | Table::T3) || !matches!(family.row, 5 | 6) {
        return Err(ScatterError::Unsupported(format!(
            "the rescaled potential covers rows 5 and 6 of T2/T3, got {} row {}",
            family.table, family.row
        )));
    }
    if family.lambda != 0.25 {
        return Err(ScatterError::Unsupported(format!(
            "closed-form potential only at lambda = 1/4, got {}",
            family.lambda
        )));
    }
    let (a0, a1) = model
        .lengths()
        .filter(|_| model.dimension() == 3)
        .ok_or(ScatterError::WrongDimension { expected: 3, found: model.dimension() })?;
    let ok = match family.row {
        5 => a0 * a1 < 0.0,
        _ => a0 * a1 > 0.0,
    };
    if !ok {
        return Err(ScatterError::Unsupported(format!(
            "row {} at lambda = 1/4 has a rescaled potential only for {} scattering lengths",
            family.row,
            if family.row == 5 { "opposite-sign" } else { "same-sign" }
        )));
    }
    Ok((a0, a1))
}

/// Half-amplitude, quarter-argument potential of the λ = 1/4 rows.
pub fn potential_lam14(model: &TwoChannelModel, c1: f64) -> Result<GeometricPotential> {
    let (a0, a1) = lam14_rows(model)?;
    let base = potential_3d(a0, a1, c1)?;
    Ok(GeometricPotential { amplitude: 0.5 * base.amplitude, scale: 0.25, ..base })
}

/// Potential of the 2D scattering-length trajectories.
pub fn potential_2d(a2_0: f64, a2_1: f64, c1: f64) -> Result<GeometricPotential> {
    if !(a2_0 > 0.0 && a2_1 > 0.0) {
        return Err(invalid("a2", "2D scattering lengths must be positive"));
    }
    if a2_0 == a2_1 {
        return Err(ScatterError::Unsupported(
            "equal 2D scattering lengths give a geodesic; no potential is needed".into(),
        ));
    }
    check_c1(c1)?;
    let l = (a2_0 / a2_1).ln();
    Ok(GeometricPotential {
        amplitude: -std::f64::consts::PI.powi(2) / (4.0 * l * l * c1 * c1),
        epsilon: 1.0,
        scale: 0.5,
        phase: FRAC_PI_2,
        c1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LapseForm {
    /// N = (c₁/p)(sin φ − ε sin θ)
    Sine,
    /// N = factor · c₁ · (φ' − ε θ')
    PhaseDifference { factor: f64 },
    /// N = c₁
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lapse {
    pub c1: f64,
    pub epsilon: f64,
    pub form: LapseForm,
}

impl Lapse {
    pub fn sine(c1: f64, epsilon: f64) -> Self {
        Self { c1, epsilon, form: LapseForm::Sine }
    }

    /// (N, N') at momentum p from the channel jets.
    pub fn jet(&self, p: f64, jets: &[PhaseJet; 2]) -> (f64, f64) {
        let [s, t] = jets;
        let e = self.epsilon;
        match self.form {
            LapseForm::Sine => {
                let g = s.value.sin() - e * t.value.sin();
                let dg = s.value.cos() * s.d1 - e * t.value.cos() * t.d1;
                (self.c1 * g / p, self.c1 * (dg / p - g / (p * p)))
            }
            LapseForm::PhaseDifference { factor } => {
                let k = factor * self.c1;
                (k * (s.d1 - e * t.d1), k * (s.d2 - e * t.d2))
            }
            LapseForm::Affine => (self.c1, 0.0),
        }
    }

    pub fn value(&self, model: &TwoChannelModel, p: f64) -> Result<f64> {
        check_momentum(p)?;
        Ok(self.jet(p, &model.jets(p)?).0)
    }
}

fn check_momentum(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid("p", format!("momentum must be positive and finite, got {p}")));
    }
    Ok(())
}

fn model_epsilon(model: &TwoChannelModel) -> Result<f64> {
    let (a0, a1) = model.lengths().ok_or_else(|| invalid("a", "lapse needs finite scattering lengths"))?;
    Ok(epsilon_for(a0, a1))
}

/// N(p) = (c₁/p)(sin φ − ε sin θ) along a 3D model's trajectory.
pub fn lapse_3d(model: &TwoChannelModel, p: f64, c1: f64) -> Result<f64> {
    model.channels_3d()?;
    Lapse::sine(c1, model_epsilon(model)?).value(model, p)
}

/// κ = N'/N, analytic.
pub fn inaffinity(model: &TwoChannelModel, lapse: &Lapse, p: f64) -> Result<f64> {
    check_momentum(p)?;
    let (n, dn) = lapse.jet(p, &model.jets(p)?);
    if n.abs() < LAPSE_SINGULARITY_TOL {
        return Err(ScatterError::Singular { p, what: "lapse vanishes; inaffinity undefined" });
    }
    Ok(dn / n)
}

/// The (potential, lapse) pair solving the trajectory equations of a
/// model, where a closed form exists.
///
/// 3D zero-range models take the scattering-length potential with the sine
/// lapse. T2/T3 rows 5 and 6 at λ = 1/4 take the rescaled potential with
/// N = √2·c₁·(φ' − εθ'). 2D scattering-length models take the 2D potential
/// with N = c₁(φ' − θ').
pub fn solvable_system(model: &TwoChannelModel, c1: f64) -> Result<(GeometricPotential, Lapse)> {
    match model.dimension() {
        3 => {
            let (s, t) = model.channels_3d()?;
            let (a0, a1) =
                model.lengths().ok_or_else(|| invalid("a", "geometric potential needs finite scattering lengths"))?;
            if s.r == 0.0 && t.r == 0.0 {
                let v = potential_3d(a0, a1, c1)?;
                Ok((v, Lapse::sine(c1, v.epsilon)))
            } else {
                let v = potential_lam14(model, c1)?;
                Ok((v, Lapse { c1, epsilon: v.epsilon, form: LapseForm::PhaseDifference { factor: SQRT_2 } }))
            }
        }
        _ => {
            let (s, t) = model.channels_2d()?;
            if s.sigma2 != 0.0 || t.sigma2 != 0.0 {
                return Err(ScatterError::Unsupported("no closed-form 2D potential with effective-area terms".into()));
            }
            let v = potential_2d(s.a2, t.a2, c1)?;
            Ok((v, Lapse { c1, epsilon: v.epsilon, form: LapseForm::PhaseDifference { factor: 1.0 } }))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualRow {
    pub p: f64,
    pub phi: f64,
    pub theta: f64,
    pub res_phi: f64,
    pub res_theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    Potential,
    Lapse,
    Phase,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    pub excluded: Vec<(f64, Exclusion)>,
    pub max_norm: f64,
}

/// Residuals of both trajectory equations along the model's curve.
///
/// Grid points at potential or lapse singularities, or where the phase is
/// flagged, are left out and listed in `excluded`.
pub fn eom_residual(
    model: &TwoChannelModel,
    potential: &GeometricPotential,
    lapse: &Lapse,
    p_grid: &[f64],
) -> Result<ResidualReport> {
    check_grid(p_grid)?;
    let mut rows = Vec::with_capacity(p_grid.len());
    let mut excluded = Vec::new();
    let mut max_norm: f64 = 0.0;
    for &p in p_grid {
        let jets = model.jets(p)?;
        let [s, t] = &jets;
        if s.flag.is_some() || t.flag.is_some() {
            excluded.push((p, Exclusion::Phase));
            continue;
        }
        if potential.is_singular(s.value, t.value) {
            excluded.push((p, Exclusion::Potential));
            continue;
        }
        let (n, dn) = lapse.jet(p, &jets);
        if n.abs() < LAPSE_SINGULARITY_TOL {
            excluded.push((p, Exclusion::Lapse));
            continue;
        }
        let kappa = dn / n;
        let (gp, gt) = potential.gradient(s.value, t.value);
        let res_phi = s.d2 - kappa * s.d1 + n * n * gp;
        let res_theta = t.d2 - kappa * t.d1 + n * n * gt;
        max_norm = max_norm.max(res_phi.abs()).max(res_theta.abs());
        rows.push(ResidualRow { p, phi: s.value, theta: t.value, res_phi, res_theta });
    }
    Ok(ResidualReport { rows, excluded, max_norm })
}

/// Outcome of the 2D overdetermination test.
///
/// With κ and M = N²·A unknown, the difference of the two equations fixes
/// κ = χ''/χ'; either equation then fixes M. The system is consistent with
/// some lapse iff κ = M'/(2M), i.e. M/χ'² is constant along the curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverdeterminationReport {
    pub samples: usize,
    pub excluded: Vec<f64>,
    /// mean of M/χ'²
    pub ratio: f64,
    /// max |M/χ'² − mean| / |mean|
    pub relative_spread: f64,
    /// amplitude implied by N = c₁χ', i.e. ratio/c₁²
    pub implied_amplitude: f64,
    /// the closed-form amplitude of potential_2d
    pub closed_form_amplitude: f64,
}

pub fn overdetermination_2d(model: &TwoChannelModel, c1: f64, p_grid: &[f64]) -> Result<OverdeterminationReport> {
    let (s, t) = model.channels_2d()?;
    check_c1(c1)?;
    check_grid(p_grid)?;
    let v = potential_2d(s.a2, t.a2, c1)?;
    // tan² shape only; M absorbs the amplitude
    let shape = GeometricPotential { amplitude: 1.0, ..v };
    let mut ratios = Vec::with_capacity(p_grid.len());
    let mut excluded = Vec::new();
    for &p in p_grid {
        let [js, jt] = model.jets(p)?;
        let dchi = js.d1 - jt.d1;
        let fpsi = shape.d_psi(js.value, jt.value);
        if js.flag.is_some() || shape.is_singular(js.value, jt.value) || dchi.abs() < LAPSE_SINGULARITY_TOL {
            excluded.push(p);
            continue;
        }
        let kappa = (js.d2 - jt.d2) / dchi;
        let m_phi = -(js.d2 - kappa * js.d1) / fpsi;
        let m_theta = -(jt.d2 - kappa * jt.d1) / fpsi;
        // both equations give the same M by construction of κ; average them
        ratios.push(0.5 * (m_phi + m_theta) / (dchi * dchi));
    }
    if ratios.is_empty() {
        return Err(ScatterError::BadGrid("every grid point is singular".into()));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let relative_spread = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean.abs();
    Ok(OverdeterminationReport {
        samples: ratios.len(),
        excluded,
        ratio: mean,
        relative_spread,
        implied_amplitude: mean / (c1 * c1),
        closed_form_amplitude: v.amplitude,
    })
}

/// Relabel p ↦ Ωp, keeping every (φ, θ) sample.
pub fn galilean_rescale(trajectory: &Trajectory, omega: f64) -> Result<Trajectory> {
    if !(omega >= 1.0) || !omega.is_finite() {
        return Err(invalid("omega", format!("must be finite and >= 1, got {omega}")));
    }
    Ok(trajectory.relabeled(omega))
}

/// Inaffinity of the relabeled parameterization q = Ωp:
/// κ_Ω(q) = κ(q/Ω)/Ω.
pub fn rescaled_inaffinity(model: &TwoChannelModel, lapse: &Lapse, omega: f64, q: f64) -> Result<f64> {
    if !(omega >= 1.0) || !omega.is_finite() {
        return Err(invalid("omega", format!("must be finite and >= 1, got {omega}")));
    }
    Ok(inaffinity(model, lapse, q / omega)? / omega)
}
