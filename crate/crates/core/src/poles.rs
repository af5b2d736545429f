//! S-matrix poles of the effective-range element in the complex momentum
//! plane: closed forms for the symmetric families and a direct quadratic
//! solve from (a, r).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};

/// |Re p| below this fraction of |p| counts as on the imaginary axis.
pub const AXIS_TOL: f64 = 1e-10;
/// Relative separation below which two roots are one double pole.
pub const COINCIDENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole {
    pub re: f64,
    pub im: f64,
    pub mult: u8,
}

impl Pole {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleCase {
    ResonancePair,
    DoubleVirtual,
    TwoVirtual,
    /// r = 0: one pole at p = i/a, outside the causal-family discussion
    SinglePole,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleSet {
    pub poles: Vec<Pole>,
    pub case: PoleCase,
}

impl PoleSet {
    /// Roots with multiplicity expanded.
    pub fn roots(&self) -> Vec<Complex64> {
        self.poles.iter().flat_map(|p| std::iter::repeat_n(p.value(), p.mult as usize)).collect()
    }

    /// Largest matched distance |Δp|/max(1, |p|) between two multisets, or
    /// infinity if their sizes differ.
    pub fn distance(&self, other: &PoleSet) -> f64 {
        let (a, b) = (self.roots(), other.roots());
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        let d = |x: Complex64, y: Complex64| (x - y).norm() / x.norm().max(y.norm()).max(1.0);
        match a.len() {
            1 => d(a[0], b[0]),
            2 => d(a[0], b[0]).max(d(a[1], b[1])).min(d(a[0], b[1]).max(d(a[1], b[0]))),
            _ => 0.0,
        }
    }
}

fn on_axis(p: Complex64) -> bool {
    p.re.abs() < AXIS_TOL * p.norm()
}

fn classify(roots: &[Complex64]) -> PoleSet {
    let pole = |p: Complex64, mult| Pole { re: p.re, im: p.im, mult };
    match *roots {
        [p] => PoleSet { poles: vec![pole(p, 1)], case: PoleCase::SinglePole },
        [p, q] => {
            let scale = p.norm().max(q.norm());
            if (p - q).norm() <= COINCIDENCE_TOL * scale {
                let m = 0.5 * (p + q);
                let m = if on_axis(m) { Complex64::new(0.0, m.im) } else { m };
                let case = if on_axis(m) && m.im < 0.0 { PoleCase::DoubleVirtual } else { PoleCase::Other };
                return PoleSet { poles: vec![pole(m, 2)], case };
            }
            let mut ordered = [p, q];
            ordered.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
            let case = if on_axis(p) && on_axis(q) && p.im < 0.0 && q.im < 0.0 {
                ordered.sort_by(|x, y| y.im.total_cmp(&x.im));
                PoleCase::TwoVirtual
            } else if !on_axis(p)
                && (p.re + q.re).abs() <= COINCIDENCE_TOL * scale
                && (p.im - q.im).abs() <= COINCIDENCE_TOL * scale
                && p.im < 0.0
            {
                PoleCase::ResonancePair
            } else {
                PoleCase::Other
            };
            PoleSet { poles: ordered.iter().map(|&z| pole(z, 1)).collect(), case }
        }
        _ => PoleSet { poles: Vec::new(), case: PoleCase::Other },
    }
}

fn check_a(a: f64) -> Result<()> {
    if a == 0.0 || !a.is_finite() {
        return Err(invalid("a", format!("scattering length must be finite and non-zero, got {a}")));
    }
    Ok(())
}

/// Poles of the causal symmetric family with r = −2|a|λ, from the closed
/// forms in each λ regime.
pub fn poles_closed_form(a: f64, lambda: f64) -> Result<PoleSet> {
    check_a(a)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("must be positive, got {lambda}")));
    }
    let den = 2.0 * a.abs() * lambda;
    let disc = 4.0 * lambda - 1.0;
    let roots = if disc > 0.0 {
        let (pr, pi) = (disc.sqrt() / den, 1.0 / den);
        vec![Complex64::new(-pr, -pi), Complex64::new(pr, -pi)]
    } else if disc == 0.0 {
        vec![Complex64::new(0.0, -1.0 / den); 2]
    } else {
        let s = (-disc).sqrt();
        vec![Complex64::new(0.0, -(1.0 + s) / den), Complex64::new(0.0, -(1.0 - s) / den)]
    };
    Ok(classify(&roots))
}

/// Poles of S = (1/a − ½rp² − ip)/(1/a − ½rp² + ip): zeros of
/// p² − (2i/r)p − 2/(ar). For r = 0 the single pole is p = i/a.
pub fn poles_numeric(a: f64, r: f64) -> Result<PoleSet> {
    check_a(a)?;
    if !r.is_finite() {
        return Err(invalid("r", format!("effective range must be finite, got {r}")));
    }
    if r == 0.0 {
        return Ok(classify(&[Complex64::new(0.0, 1.0 / a)]));
    }
    let b = Complex64::new(0.0, -2.0 / r);
    let c = Complex64::new(-2.0 / (a * r), 0.0);
    let disc = Complex64::new(4.0 / (r * r) * (2.0 * r / a - 1.0), 0.0);
    let sq = disc.sqrt();
    // pick the sign that avoids cancellation, then use Vieta for the other root
    let s = if (b.conj() * sq).re >= 0.0 { b + sq } else { b - sq };
    let roots = if s.norm() == 0.0 {
        vec![-0.5 * b, -0.5 * b]
    } else {
        let q = -0.5 * s;
        vec![q, c / q]
    };
    Ok(classify(&roots))
}

/// True iff every pole has Im p < 0.
pub fn verify_lower_half(set: &PoleSet) -> bool {
    !set.poles.is_empty() && set.poles.iter().all(|p| p.im < 0.0)
}

/// Relative distance of the poles at λ from the λ = 1/4 double pole
/// −2i/|a|, the collision point of the two regimes.
pub fn collision_gap(a: f64, lambda: f64) -> Result<f64> {
    let set = poles_closed_form(a, lambda)?;
    let target = Complex64::new(0.0, -2.0 / a.abs());
    Ok(set.roots().iter().map(|&p| (p - target).norm()).fold(0.0, f64::max) / target.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleParameter {
    Lambda,
    R,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleReport {
    pub a: f64,
    pub parameter: PoleParameter,
    pub lambda_or_r: f64,
    pub case: PoleCase,
    pub poles: Vec<Pole>,
    pub lower_half: bool,
}

impl PoleReport {
    pub fn new(a: f64, parameter: PoleParameter, value: f64, set: PoleSet) -> Self {
        let lower_half = verify_lower_half(&set);
        Self { a, parameter, lambda_or_r: value, case: set.case, poles: set.poles, lower_half }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let s = poles_closed_form(1.0, 0.25).unwrap();
        assert_eq!(s.case, PoleCase::DoubleVirtual);
        assert_eq!(s.poles, vec![Pole { re: 0.0, im: -2.0, mult: 2 }]);
        let s = poles_closed_form(-1.0, 0.5).unwrap();
        assert_eq!(s.case, PoleCase::ResonancePair);
        assert_eq!(s.roots(), vec![Complex64::new(-1.0, -1.0), Complex64::new(1.0, -1.0)]);
        let s = poles_closed_form(1.0, 0.125).unwrap();
        assert_eq!(s.case, PoleCase::TwoVirtual);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = s.roots();
        assert!((r[0].im + 4.0 * (1.0 - h)).abs() < 1e-14);
        assert!((r[1].im + 4.0 * (1.0 + h)).abs() < 1e-14);
        assert!(poles_closed_form(1.0, 0.0).is_err());
        assert!(poles_closed_form(1.0, -1.0).is_err());
    }

    #[test]
    fn numeric_matches_general_formula() {
        for (a, r) in [(1.0, 3.0), (-2.0, -0.7), (0.4, -5.0), (3.0, 0.2)] {
            let set = poles_numeric(a, r).unwrap();
            let d = Complex64::new(2.0 * r / a - 1.0, 0.0).sqrt();
            let i = Complex64::i();
            let expect = PoleSet {
                poles: vec![
                    Pole { re: ((i + d) / r).re, im: ((i + d) / r).im, mult: 1 },
                    Pole { re: ((i - d) / r).re, im: ((i - d) / r).im, mult: 1 },
                ],
                case: PoleCase::Other,
            };
            assert!(set.distance(&expect) < 1e-12, "a={a} r={r}");
        }
    }

    #[test]
    fn numeric_matches_family() {
        for lambda in [0.125, 0.25, 0.5, 1.0, 10.0] {
            for mag in [0.1, 1.0, 10.0] {
                let a = -mag;
                let numeric = poles_numeric(a, 2.0 * a * lambda).unwrap();
                let closed = poles_closed_form(a, lambda).unwrap();
                assert!(numeric.distance(&closed) < 1e-12, "lambda={lambda} a={a}");
                assert_eq!(numeric.case, closed.case);
                assert!(verify_lower_half(&numeric));
            }
        }
    }

    #[test]
    fn zero_range_single_pole() {
        let s = poles_numeric(1.0, 0.0).unwrap();
        assert_eq!(s.case, PoleCase::SinglePole);
        assert_eq!(s.roots(), vec![Complex64::new(0.0, 1.0)]);
        assert!(!verify_lower_half(&s));
    }

    #[test]
    fn upper_half_fails() {
        let mut s = poles_closed_form(1.0, 10.0).unwrap();
        assert!(verify_lower_half(&s));
        s.poles.push(Pole { re: 0.0, im: 0.5, mult: 1 });
        assert!(!verify_lower_half(&s));
    }

    #[test]
    fn collision_continuity() {
        for mag in [0.1, 1.0, 10.0] {
            assert!(collision_gap(mag, 0.25 + 1e-6).unwrap() < 1e-2);
            assert!(collision_gap(mag, 0.25 - 1e-6).unwrap() < 1e-2);
            assert_eq!(collision_gap(mag, 0.25).unwrap(), 0.0);
        }
    }

    #[test]
    fn report_json_shape() {
        let r = PoleReport::new(-1.0, PoleParameter::Lambda, 0.25, poles_closed_form(-1.0, 0.25).unwrap());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["case"], "double_virtual");
        assert_eq!(v["poles"][0]["im"], -2.0);
        assert_eq!(v["poles"][0]["mult"], 2);
        assert_eq!(v["lower_half"], true);
    }
}
