//! Affine-parameter integration of ẍ = −∂V on the flat torus with an
//! adaptive Dormand–Prince 5(4) pair, and comparison against closed-form
//! trajectories.

use serde::Serialize;

use crate::ere::TwoChannelModel;
use crate::error::{invalid, Result, ScatterError};
use crate::geometry::{GeometricPotential, Lapse};

/// (φ, θ, dφ/dτ, dθ/dτ)
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineState {
    pub phi: f64,
    pub theta: f64,
    pub dphi: f64,
    pub dtheta: f64,
}

impl AffineState {
    fn to_array(self) -> [f64; 4] {
        [self.phi, self.theta, self.dphi, self.dtheta]
    }

    fn from_array(y: [f64; 4]) -> Self {
        Self { phi: y[0], theta: y[1], dphi: y[2], dtheta: y[3] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-13, initial_step: 1e-3, max_steps: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineSample {
    pub tau: f64,
    pub state: AffineState,
    /// ½(φ̇² + θ̇²) + V
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineCurve {
    pub samples: Vec<AffineSample>,
    /// Set when integration stopped before the requested end.
    pub truncated: Option<String>,
}

impl AffineCurve {
    /// max |E(τ) − E(τ₀)|
    pub fn energy_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else { return 0.0 };
        self.samples.iter().map(|s| (s.energy - first.energy).abs()).fold(0.0, f64::max)
    }
}

fn energy(v: &GeometricPotential, y: &[f64; 4]) -> f64 {
    0.5 * (y[2] * y[2] + y[3] * y[3]) + v.value(y[0], y[1])
}

fn rhs(v: &GeometricPotential, y: &[f64; 4]) -> [f64; 4] {
    let (gp, gt) = v.gradient(y[0], y[1]);
    [y[2], y[3], -gp, -gt]
}

// autonomous system: the c_i nodes are not needed
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b*
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &[f64; 4], h: f64, terms: &[(f64, &[f64; 4])]) -> [f64; 4] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..4 {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One Dormand–Prince step: (y_next, error estimate, k7 = f(y_next)).
fn dopri_step(v: &GeometricPotential, y: &[f64; 4], k1: &[f64; 4], h: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
    let k2 = rhs(v, &axpy(y, h, &[(A21, k1)]));
    let k3 = rhs(v, &axpy(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = rhs(v, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(v, &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = rhs(v, &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let next = axpy(y, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = rhs(v, &next);
    let mut err = [0.0; 4];
    for i in 0..4 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (next, err, k7)
}

/// Integrate ẍᵃ = −∂ₐV (N = 1) from τ = 0 to `tau_end`.
///
/// Every accepted step is recorded. If the step size collapses or the state
/// reaches a potential singularity the curve is returned truncated.
pub fn integrate_affine(
    potential: &GeometricPotential,
    init: AffineState,
    tau_end: f64,
    control: StepControl,
) -> Result<AffineCurve> {
    if potential.is_singular(init.phi, init.theta) {
        return Err(ScatterError::Singular { p: f64::NAN, what: "initial point on a potential singularity" });
    }
    if !tau_end.is_finite() || tau_end == 0.0 {
        return Err(invalid("tau_end", format!("must be finite and non-zero, got {tau_end}")));
    }
    if !(control.rtol > 0.0 && control.atol > 0.0 && control.initial_step > 0.0) {
        return Err(invalid("control", "tolerances and initial step must be positive"));
    }
    let dir = tau_end.signum();
    let mut y = init.to_array();
    let mut tau = 0.0;
    let mut h = control.initial_step.min(tau_end.abs()) * dir;
    let mut k1 = rhs(potential, &y);
    let mut samples = vec![AffineSample { tau, state: init, energy: energy(potential, &y) }];
    let mut truncated = None;
    let mut steps = 0;
    while (tau_end - tau) * dir > 0.0 {
        if steps == control.max_steps {
            truncated = Some(format!("step budget exhausted at tau = {tau}"));
            break;
        }
        steps += 1;
        if (tau + h - tau_end) * dir > 0.0 {
            h = tau_end - tau;
        }
        let (next, err, k7) = dopri_step(potential, &y, &k1, h);
        let mut norm: f64 = 0.0;
        for i in 0..4 {
            let sc = control.atol + control.rtol * y[i].abs().max(next[i].abs());
            norm = norm.max((err[i] / sc).abs());
        }
        if !norm.is_finite() {
            norm = f64::INFINITY;
        }
        if norm <= 1.0 {
            tau += h;
            y = next;
            k1 = k7;
            samples.push(AffineSample { tau, state: AffineState::from_array(y), energy: energy(potential, &y) });
            if potential.is_singular(y[0], y[1]) {
                truncated = Some(format!("reached a potential singularity at tau = {tau}"));
                break;
            }
        }
        let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-14 * tau.abs().max(1.0) {
            truncated = Some(format!("step size underflow at tau = {tau}"));
            break;
        }
    }
    Ok(AffineCurve { samples, truncated })
}

fn chi(model: &TwoChannelModel, epsilon: f64, p: f64) -> Result<f64> {
    let s = model.phase_shifts(p)?;
    Ok(s.phi - epsilon * s.theta)
}

fn phase_difference_scale(lapse: &Lapse, model: &TwoChannelModel, p: f64) -> Result<f64> {
    // every closed-form lapse here is k·χ'(p); recover k at p
    let [s, t] = model.jets(p)?;
    let dchi = s.d1 - lapse.epsilon * t.d1;
    let n = lapse.value(model, p)?;
    if dchi == 0.0 {
        return Err(ScatterError::Singular { p, what: "lapse is not proportional to the phase difference here" });
    }
    Ok(n / dchi)
}

/// Affine initial data at momentum p₀ on the closed-form curve:
/// position (φ, θ)(p₀), velocity (φ', θ')/N.
pub fn initial_state_on_curve(model: &TwoChannelModel, lapse: &Lapse, p0: f64) -> Result<AffineState> {
    let [s, t] = model.jets(p0)?;
    let n = lapse.value(model, p0)?;
    if n == 0.0 {
        return Err(ScatterError::Singular { p: p0, what: "lapse vanishes at the initial momentum" });
    }
    Ok(AffineState { phi: s.value, theta: t.value, dphi: s.d1 / n, dtheta: t.d1 / n })
}

/// Total affine length of the closed-form curve, |k| · |χ(∞) − χ(0)|, for
/// lapses proportional to χ'.
pub fn affine_length(model: &TwoChannelModel, lapse: &Lapse, p_ref: f64) -> Result<f64> {
    let k = phase_difference_scale(lapse, model, p_ref)?;
    let lo = chi(model, lapse.epsilon, 1e-12 * p_ref)?;
    let hi = chi(model, lapse.epsilon, 1e12 * p_ref)?;
    Ok((k * (hi - lo)).abs())
}

/// Momentum p with k(χ(p) − χ(p₀)) = τ, by bisection in ln p.
fn momentum_at(model: &TwoChannelModel, epsilon: f64, k: f64, p0: f64, chi0: f64, tau: f64) -> Result<f64> {
    let target = chi0 + tau / k;
    let f = |p: f64| chi(model, epsilon, p).map(|c| c - target);
    let f0 = f(p0)?;
    if f0 == 0.0 {
        return Ok(p0);
    }
    let (mut lo, mut hi) = (p0.ln(), p0.ln());
    let mut step = 0.5;
    let (flo, _) = loop {
        lo -= step;
        hi += step;
        step *= 2.0;
        let (a, b) = (f(lo.exp())?, f(hi.exp())?);
        if a.signum() != f0.signum() {
            hi = p0.ln();
            break (a, b);
        }
        if b.signum() != f0.signum() {
            lo = p0.ln();
            break (f0, b);
        }
        if step > 200.0 {
            return Err(ScatterError::Integration {
                tau,
                reason: "affine parameter beyond the closed-form curve".into(),
            });
        }
    };
    let mut flo = flo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid.exp())?;
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Max distance between each integrated sample and the closed-form point at
/// the same affine parameter. Both curves cover the same parameter range,
/// so this bounds their Hausdorff distance.
pub fn closed_form_distance(model: &TwoChannelModel, lapse: &Lapse, p0: f64, curve: &AffineCurve) -> Result<f64> {
    let k = phase_difference_scale(lapse, model, p0)?;
    let chi0 = chi(model, lapse.epsilon, p0)?;
    let mut worst: f64 = 0.0;
    for s in &curve.samples {
        let p = momentum_at(model, lapse.epsilon, k, p0, chi0, s.tau)?;
        let exact = model.phase_shifts(p)?;
        let d = (s.state.phi - exact.phi).hypot(s.state.theta - exact.theta);
        worst = worst.max(d);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::solvable_system;

    fn flat() -> GeometricPotential {
        GeometricPotential { amplitude: 0.0, epsilon: 1.0, scale: 0.5, phase: 0.0, c1: 1.0 }
    }

    #[test]
    fn free_motion_is_straight() {
        let init = AffineState { phi: 0.1, theta: -0.2, dphi: 0.3, dtheta: 0.7 };
        let c = integrate_affine(&flat(), init, 5.0, StepControl::default()).unwrap();
        assert!(c.truncated.is_none());
        let last = c.samples.last().unwrap();
        assert!((last.tau - 5.0).abs() < 1e-14);
        assert!((last.state.phi - 1.6).abs() < 1e-12 && (last.state.theta - 3.3).abs() < 1e-12);
    }

    #[test]
    fn harmonic_oscillator_order() {
        // V = A tan²(ψ/2) ≈ A ψ²/4 near 0; compare with a small oscillation
        let v = GeometricPotential { amplitude: 1e-2, epsilon: 1.0, scale: 0.5, phase: 0.0, c1: 1.0 };
        let init = AffineState { phi: 1e-4, theta: 0.0, dphi: 0.0, dtheta: 0.0 };
        let c = integrate_affine(&v, init, 10.0, StepControl::default()).unwrap();
        assert!(c.energy_drift() < 1e-15);
        // ψ̈ = −2·∂ψV ≈ −A ψ, φ − θ conserved velocity 0
        let w = 1e-1f64;
        let last = c.samples.last().unwrap().state;
        let psi = last.phi + last.theta;
        assert!((psi - 1e-4 * (w * 10.0).cos()).abs() < 1e-8);
    }

    #[test]
    fn closed_form_overlay_3d() {
        let m = TwoChannelModel::scattering_length_3d(1.0, 5.0);
        let (v, lapse) = solvable_system(&m, 1.0).unwrap();
        let p0 = 1.0 / 5f64.sqrt();
        let init = initial_state_on_curve(&m, &lapse, p0).unwrap();
        let span = 0.25 * affine_length(&m, &lapse, p0).unwrap();
        assert!((span - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        for tau_end in [span, -span] {
            let c = integrate_affine(&v, init, tau_end, StepControl::default()).unwrap();
            assert!(c.truncated.is_none());
            assert!(c.energy_drift() < 1e-8, "{}", c.energy_drift());
            let d = closed_form_distance(&m, &lapse, p0, &c).unwrap();
            assert!(d < 1e-5, "{d}");
        }
    }

    #[test]
    fn singular_start_rejected() {
        let v = GeometricPotential { amplitude: 1.0, epsilon: 1.0, scale: 0.5, phase: 0.0, c1: 1.0 };
        let init = AffineState { phi: std::f64::consts::PI, theta: 0.0, dphi: 0.0, dtheta: 0.0 };
        assert!(integrate_affine(&v, init, 1.0, StepControl::default()).is_err());
    }
}
