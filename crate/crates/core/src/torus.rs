//! Flat-torus geometry of the phase pair (φ, θ): the ℝ⁴ embedding, its
//! induced metric, trajectory sampling and quadrant bookkeeping.
//!
//! Quadrants are named with φ on the horizontal axis and θ on the vertical
//! axis of the square [−π, π)²; bottom-left means both phases in (−π, 0).

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ere::TwoChannelModel;
use crate::error::{Result, ScatterError};

/// Wrap an angle into [−π, π).
pub fn wrap_angle(x: f64) -> f64 {
    let mut w = x - TAU * ((x + PI) / TAU).floor();
    if w >= PI {
        w -= TAU;
    }
    if w < -PI {
        w += TAU;
    }
    w
}

/// Distance between two angles on the circle, in [0, π].
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub phi: f64,
    pub theta: f64,
}

impl TorusPoint {
    /// Canonical representative in [−π, π)².
    pub fn new(phi: f64, theta: f64) -> Self {
        Self { phi: wrap_angle(phi), theta: wrap_angle(theta) }
    }

    /// Geodesic distance in the (φ, θ) chart, ignoring the ½ metric factor.
    pub fn chart_distance(&self, other: &TorusPoint) -> f64 {
        angle_distance(self.phi, other.phi).hypot(angle_distance(self.theta, other.theta))
    }
}

/// Point of the torus embedded in ℝ⁴ through Ŝ = (x + iy)1̂ + (z + iw)P̂₁₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Embedding4 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl Embedding4 {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w).sqrt()
    }
}

pub fn embed_r4(point: TorusPoint) -> Embedding4 {
    let (sp, cp) = point.phi.sin_cos();
    let (st, ct) = point.theta.sin_cos();
    Embedding4 { x: 0.5 * (cp + ct), y: 0.5 * (sp + st), z: 0.5 * (-cp + ct), w: 0.5 * (-sp + st) }
}

/// Ratio of the ℝ⁴ squared separation to ½(Δφ² + Δθ²) for nearby points.
pub fn line_element_check(a: TorusPoint, b: TorusPoint) -> Result<f64> {
    let dphi = wrap_angle(b.phi - a.phi);
    let dtheta = wrap_angle(b.theta - a.theta);
    if dphi == 0.0 && dtheta == 0.0 {
        return Err(ScatterError::ZeroSeparation);
    }
    if dphi.abs() > 1e-3 || dtheta.abs() > 1e-3 {
        return Err(crate::error::invalid("separation", "points must be within 1e-3 in each coordinate"));
    }
    let ea = embed_r4(a);
    let eb = embed_r4(b);
    let d2 = (eb.x - ea.x).powi(2) + (eb.y - ea.y).powi(2) + (eb.z - ea.z).powi(2) + (eb.w - ea.w).powi(2);
    Ok(d2 / (0.5 * (dphi * dphi + dtheta * dtheta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrant {
    TopRight,
    TopLeft,
    BottomLeft,
    BottomRight,
    Boundary,
}

impl Quadrant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quadrant::TopRight => "top_right",
            Quadrant::TopLeft => "top_left",
            Quadrant::BottomLeft => "bottom_left",
            Quadrant::BottomRight => "bottom_right",
            Quadrant::Boundary => "boundary",
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn half(x: f64) -> Option<bool> {
    let w = wrap_angle(x);
    if w == 0.0 || w == -PI {
        None
    } else {
        Some(w > 0.0)
    }
}

pub fn quadrant(point: TorusPoint) -> Quadrant {
    match (half(point.phi), half(point.theta)) {
        (Some(true), Some(true)) => Quadrant::TopRight,
        (Some(false), Some(true)) => Quadrant::TopLeft,
        (Some(false), Some(false)) => Quadrant::BottomLeft,
        (Some(true), Some(false)) => Quadrant::BottomRight,
        _ => Quadrant::Boundary,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub p: f64,
    pub point: TorusPoint,
    /// continuous (φ, θ)
    pub unwrapped: (f64, f64),
    pub quadrant: Quadrant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = TorusPoint> + '_ {
        self.samples.iter().map(|s| s.point)
    }

    /// Relabel p → Ω p, keeping every torus point.
    pub fn relabeled(&self, omega: f64) -> Trajectory {
        Trajectory { samples: self.samples.iter().map(|s| TrajectorySample { p: s.p * omega, ..*s }).collect() }
    }
}

pub(crate) fn check_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.is_empty() {
        return Err(ScatterError::BadGrid("empty grid".into()));
    }
    if p_grid.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
        return Err(ScatterError::BadGrid("momenta must be positive and finite".into()));
    }
    if p_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(ScatterError::BadGrid("momenta must be strictly increasing".into()));
    }
    Ok(())
}

/// Sample the model's trajectory on a sorted positive momentum grid.
pub fn sample_trajectory(model: &TwoChannelModel, p_grid: &[f64]) -> Result<Trajectory> {
    check_grid(p_grid)?;
    let mut samples: Vec<TrajectorySample> = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let ps = model.phase_shifts(p)?;
        if let Some(prev) = samples.last() {
            let jump = (ps.phi - prev.unwrapped.0).abs().max((ps.theta - prev.unwrapped.1).abs());
            if jump >= PI {
                return Err(ScatterError::GridTooCoarse { p, jump, limit: PI });
            }
        }
        let point = ps.point();
        samples.push(TrajectorySample { p, point, unwrapped: (ps.phi, ps.theta), quadrant: quadrant(point) });
    }
    Ok(Trajectory { samples })
}

/// (dφ/dp, dθ/dp) from the closed-form phases.
pub fn tangent(model: &TwoChannelModel, p: f64) -> Result<(f64, f64)> {
    if !(p > 0.0) {
        return Err(crate::error::invalid("p", format!("tangent requires p > 0, got {p}")));
    }
    let [s, t] = model.jets(p)?;
    if s.flag.is_some() || t.flag.is_some() {
        return Err(ScatterError::Singular { p, what: "phase at a flagged singular momentum" });
    }
    Ok((s.d1, t.d1))
}

/// `count` logarithmically spaced momenta in [min, max].
pub fn log_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    grid_checks(min, max, count)?;
    let (lo, hi) = (min.ln(), max.ln());
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|k| match k {
            0 => min,
            k if k == count - 1 => max,
            k => (lo + (hi - lo) * k as f64 / n).exp(),
        })
        .collect())
}

pub fn linear_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    grid_checks(min, max, count)?;
    let n = (count - 1) as f64;
    Ok((0..count).map(|k| if k == count - 1 { max } else { min + (max - min) * k as f64 / n }).collect())
}

/// Log grid symmetric about the inversion fixed point 1/√scale, spanning
/// `decades` on each side, so p ↦ 1/(scale p) maps the grid onto itself.
pub fn inversion_paired_grid(scale: f64, decades: f64, count: usize) -> Result<Vec<f64>> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(crate::error::invalid("scale", "must be positive"));
    }
    let center = 1.0 / scale.sqrt();
    let span = decades * std::f64::consts::LN_10;
    grid_checks(1.0, 2.0, count)?;
    let n = (count - 1) as f64;
    Ok((0..count).map(|k| center * (-span + 2.0 * span * k as f64 / n).exp()).collect())
}

fn grid_checks(min: f64, max: f64, count: usize) -> Result<()> {
    if count < 2 {
        return Err(ScatterError::BadGrid(format!("count must be at least 2, got {count}")));
    }
    if !(min > 0.0 && max > min && max.is_finite()) {
        return Err(ScatterError::BadGrid(format!("need 0 < min < max, got [{min}, {max}]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_angle(PI), -PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert!((wrap_angle(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn embedding_fixed_points() {
        let e = embed_r4(TorusPoint::new(0.0, 0.0));
        assert_eq!((e.x, e.y, e.z, e.w), (1.0, 0.0, 0.0, 0.0));
        let e = embed_r4(TorusPoint::new(PI, PI));
        assert!((e.x + 1.0).abs() < 1e-15 && e.y.abs() < 1e-15 && e.z.abs() < 1e-15 && e.w.abs() < 1e-15);
        let e = embed_r4(TorusPoint::new(PI, 0.0));
        assert!(e.x.abs() < 1e-15 && e.y.abs() < 1e-15 && (e.z - 1.0).abs() < 1e-15 && e.w.abs() < 1e-15);
    }

    #[test]
    fn line_element_ratio_near_one() {
        let base = TorusPoint::new(0.83, -2.1);
        for (dp, dt) in [(1e-4, 0.0), (0.0, 1e-4), (1e-4, 1e-4)] {
            let r = line_element_check(base, TorusPoint::new(base.phi + dp, base.theta + dt)).unwrap();
            assert!((r - 1.0).abs() < 1e-6, "{r}");
        }
    }

    #[test]
    fn line_element_rejects_bad_separations() {
        let a = TorusPoint::new(0.1, 0.2);
        assert_eq!(line_element_check(a, a), Err(ScatterError::ZeroSeparation));
        assert!(line_element_check(a, TorusPoint::new(0.2, 0.2)).is_err());
    }

    #[test]
    fn quadrant_labels() {
        assert_eq!(quadrant(TorusPoint::new(-FRAC_PI_2, -FRAC_PI_2)), Quadrant::BottomLeft);
        assert_eq!(quadrant(TorusPoint::new(FRAC_PI_2, FRAC_PI_2)), Quadrant::TopRight);
        assert_eq!(quadrant(TorusPoint::new(FRAC_PI_2, -FRAC_PI_2)), Quadrant::BottomRight);
        assert_eq!(quadrant(TorusPoint::new(-FRAC_PI_2, FRAC_PI_2)), Quadrant::TopLeft);
        assert_eq!(quadrant(TorusPoint::new(0.0, 1.0)), Quadrant::Boundary);
        assert_eq!(quadrant(TorusPoint::new(1.0, PI)), Quadrant::Boundary);
    }

    #[test]
    fn purple_curve_stays_bottom_left() {
        let m = TwoChannelModel::scattering_length_3d(1.0, 5.0);
        let traj = sample_trajectory(&m, &log_grid(1e-4, 1e4, 400).unwrap()).unwrap();
        assert!(traj.samples.iter().all(|s| s.quadrant == Quadrant::BottomLeft));
        let first = traj.samples.first().unwrap().point;
        let last = traj.samples.last().unwrap().unwrapped;
        assert!(first.chart_distance(&TorusPoint::new(0.0, 0.0)) < 1e-2);
        assert!((last.0 + PI).abs() < 1e-3 && (last.1 + PI).abs() < 1e-3);
    }

    #[test]
    fn equal_lengths_lie_on_diagonal() {
        let m = TwoChannelModel::scattering_length_3d(-2.0, -2.0);
        let traj = sample_trajectory(&m, &log_grid(1e-2, 1e2, 50).unwrap()).unwrap();
        assert!(traj.samples.iter().all(|s| s.point.phi == s.point.theta));
    }

    #[test]
    fn coarse_grid_rejected() {
        // a = 1, r = 2 sweeps −2π quickly around p = 1
        let m = TwoChannelModel::three_d(crate::ere::Channel3D::new(1.0, 2.0), crate::ere::Channel3D::new(1.0, 2.0));
        let err = sample_trajectory(&m, &[0.01, 100.0]).unwrap_err();
        assert!(matches!(err, ScatterError::GridTooCoarse { .. }));
        assert!(sample_trajectory(&m, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn tangent_values() {
        let m = TwoChannelModel::scattering_length_3d(1.0, 3.0);
        let (d0, _) = tangent(&m, 0.5).unwrap();
        assert!((d0 + 2.0 / 1.25).abs() < 1e-15);
        let u = TwoChannelModel::three_d(
            crate::ere::Channel3D::new(crate::ere::ScatteringLength::Unitarity, 0.0),
            crate::ere::Channel3D::new(1.0, 0.0),
        );
        assert_eq!(tangent(&u, 2.0).unwrap().0, 0.0);
        assert!(tangent(&m, 0.0).is_err());
        let m2 = TwoChannelModel::scattering_length_2d(1.0, 1.0).unwrap();
        assert!((tangent(&m2, 1.0).unwrap().0 + 4.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn paired_grid_maps_onto_itself() {
        let g = inversion_paired_grid(5.0, 3.0, 101).unwrap();
        for (k, &p) in g.iter().enumerate() {
            let q = 1.0 / (5.0 * p);
            assert!((q - g[g.len() - 1 - k]).abs() <= 1e-12 * q);
        }
    }

    #[test]
    fn grids() {
        let g = log_grid(1e-3, 1e3, 7).unwrap();
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[6], 1e3);
        assert!((g[3] - 1.0).abs() < 1e-12);
        assert_eq!(linear_grid(1.0, 2.0, 2).unwrap(), vec![1.0, 2.0]);
        assert!(log_grid(1.0, 2.0, 1).is_err());
        assert!(log_grid(0.0, 2.0, 3).is_err());
    }
}
