//! Effective-range models for the singlet and triplet s-wave channels in
//! three and two spatial dimensions, and the momentum-inversion symmetric
//! model families.
//!
//! Units are ħ = M = 1: lengths in an arbitrary unit L, momenta in 1/L.
//! Phases are returned on a continuous branch in p (unwrapped); use
//! [`PhaseShifts::point`] for the canonical torus representative.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, ScatterError};
use crate::spin::SpinSector;
use crate::torus::TorusPoint;

/// Scattering length of a 3D channel. Unitarity (|a| = ∞) is kept symbolic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScatteringLength {
    Finite(f64),
    Unitarity,
}

impl ScatteringLength {
    /// 1/a, with 0 at unitarity and ±∞ for a = 0.
    pub fn inverse(&self) -> f64 {
        match *self {
            ScatteringLength::Finite(a) => 1.0 / a,
            ScatteringLength::Unitarity => 0.0,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ScatteringLength::Finite(a) => Some(a),
            ScatteringLength::Unitarity => None,
        }
    }
}

impl From<f64> for ScatteringLength {
    fn from(a: f64) -> Self {
        if a.is_infinite() {
            ScatteringLength::Unitarity
        } else {
            ScatteringLength::Finite(a)
        }
    }
}

impl Serialize for ScatteringLength {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            ScatteringLength::Finite(a) => s.serialize_f64(a),
            ScatteringLength::Unitarity => s.serialize_str("unitarity"),
        }
    }
}

impl<'de> Deserialize<'de> for ScatteringLength {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(a) => Ok(ScatteringLength::Finite(a)),
            Raw::Tag(t) if t == "unitarity" => Ok(ScatteringLength::Unitarity),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!("expected a number or \"unitarity\", got {t:?}"))),
        }
    }
}

/// Why a phase evaluation sits at a special point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseFlag {
    /// zero of 1 − ½ a r p²: a(p) diverges, phase passes through ∓π
    RangePole,
    /// p = 0 in two dimensions: logarithmic threshold singularity
    Threshold,
}

/// Phase, first and second momentum derivatives of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub flag: Option<PhaseFlag>,
}

/// Three-dimensional s-wave channel: p cot δ = −1/a + ½ r p².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel3D {
    pub a: ScatteringLength,
    pub r: f64,
}

impl Channel3D {
    pub fn new(a: impl Into<ScatteringLength>, r: f64) -> Self {
        Self { a: a.into(), r }
    }

    /// u(p) = 1/a − ½ r p² = −p cot δ
    fn u(&self, p: f64) -> f64 {
        self.a.inverse() - 0.5 * self.r * p * p
    }

    /// Momentum-dependent scattering length a(p) = a / (1 − ½ a r p²).
    pub fn running_length(&self, p: f64) -> f64 {
        1.0 / self.u(p)
    }

    /// φ = 2δ on the branch continuous in p with value 0 at threshold
    /// (−π at unitarity).
    pub fn jet(&self, p: f64) -> Result<PhaseJet> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(invalid("p", format!("momentum must be finite and non-negative, got {p}")));
        }
        let inv_a = self.a.inverse();
        if inv_a.is_infinite() {
            // a = 0: trivial fixed point at every momentum
            return Ok(PhaseJet { value: 0.0, d1: 0.0, d2: 0.0, flag: None });
        }
        let r = self.r;
        let u = self.u(p);
        let offset = if inv_a < 0.0 { TAU } else { 0.0 };
        let value = if p == 0.0 {
            match self.a {
                ScatteringLength::Unitarity => -PI,
                ScatteringLength::Finite(_) => 0.0,
            }
        } else {
            -2.0 * p.atan2(u) + offset
        };
        let den = u * u + p * p;
        if den == 0.0 {
            return Err(ScatterError::Singular { p, what: "phase derivative undefined at unitary threshold" });
        }
        let num = u + r * p * p;
        let d_num = r * p;
        let d_den = 2.0 * u * (-r * p) + 2.0 * p;
        let d1 = -2.0 * num / den;
        let d2 = -2.0 * (d_num * den - num * d_den) / (den * den);
        let scale = inv_a.abs() + 0.5 * (r * p * p).abs();
        let flag = (r != 0.0 && p > 0.0 && u.abs() <= f64::EPSILON * scale).then_some(PhaseFlag::RangePole);
        Ok(PhaseJet { value, d1, d2, flag })
    }

    /// S = e^{2iδ} = (1 − i a(p) p)/(1 + i a(p) p).
    pub fn s_element(&self, p: f64) -> Result<Complex64> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(invalid("p", format!("momentum must be finite and non-negative, got {p}")));
        }
        let inv_a = self.a.inverse();
        if inv_a.is_infinite() {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let u = self.u(p);
        if u == 0.0 && p == 0.0 {
            return Ok(Complex64::new(-1.0, 0.0));
        }
        // (u − ip)/(u + ip) with u = 1/a(p); a(p) = ∞ gives −1
        let z = Complex64::new(u, -p) / Complex64::new(u, p);
        Ok(z / z.norm())
    }
}

/// Two-dimensional s-wave channel: cot δ = (1/π) log(𝒂² p²) + σ₂ p².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel2D {
    pub a2: f64,
    #[serde(default)]
    pub sigma2: f64,
}

impl Channel2D {
    pub fn new(a2: f64, sigma2: f64) -> Result<Self> {
        if !(a2 > 0.0) || !a2.is_finite() {
            return Err(invalid("a2", format!("2D scattering length must be positive and finite, got {a2}")));
        }
        Ok(Self { a2, sigma2 })
    }

    pub fn scattering_length(a2: f64) -> Result<Self> {
        Self::new(a2, 0.0)
    }

    /// φ = 2 arccot(cot δ) with arccot ∈ (0, π): runs from 2π at threshold
    /// down to 0 as p → ∞, continuously.
    pub fn jet(&self, p: f64) -> Result<PhaseJet> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(invalid("p", format!("momentum must be finite and non-negative, got {p}")));
        }
        if p == 0.0 {
            return Ok(PhaseJet { value: TAU, d1: f64::NAN, d2: f64::NAN, flag: Some(PhaseFlag::Threshold) });
        }
        let x = 2.0 * (self.a2 * p).ln() / PI + self.sigma2 * p * p;
        let dx = 2.0 / (PI * p) + 2.0 * self.sigma2 * p;
        let ddx = -2.0 / (PI * p * p) + 2.0 * self.sigma2;
        let q = 1.0 + x * x;
        let value = 2.0 * (FRAC_PI_2 - x.atan());
        let d1 = -2.0 * dx / q;
        let d2 = -2.0 * (ddx * q - 2.0 * x * dx * dx) / (q * q);
        Ok(PhaseJet { value, d1, d2, flag: None })
    }

    pub fn s_element(&self, p: f64) -> Result<Complex64> {
        let jet = self.jet(p)?;
        Ok(Complex64::from_polar(1.0, jet.value))
    }
}

/// Symmetric model tables: T1 (scattering-length approximation), T2 (range
/// corrections η = λ|a₀a₁|), T3 (causal range corrections), and the
/// two-dimensional inversion family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Table {
    T1,
    T2,
    T3,
    #[serde(rename = "2d")]
    TwoD,
}

impl Table {
    pub fn rows(&self) -> usize {
        match self {
            Table::T1 => 4,
            Table::T2 | Table::T3 => 6,
            Table::TwoD => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Table::T1 => "T1",
            Table::T2 => "T2",
            Table::T3 => "T3",
            Table::TwoD => "2d",
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Symmetry-family tag carried by a model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub table: Table,
    pub row: usize,
    /// inversion parameter; 1 for T1 and the 2D family
    #[serde(default = "one")]
    pub lambda: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channels {
    Three { singlet: Channel3D, triplet: Channel3D },
    Two { singlet: Channel2D, triplet: Channel2D },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoChannelModel {
    pub channels: Channels,
    pub family: Option<Family>,
}

/// (φ, θ) = (2δ₀, 2δ₁) on the continuous branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShifts {
    pub phi: f64,
    pub theta: f64,
    pub flags: [Option<PhaseFlag>; 2],
}

impl PhaseShifts {
    pub fn point(&self) -> TorusPoint {
        TorusPoint::new(self.phi, self.theta)
    }

    pub fn is_flagged(&self) -> bool {
        self.flags.iter().any(Option::is_some)
    }
}

impl TwoChannelModel {
    pub fn three_d(singlet: Channel3D, triplet: Channel3D) -> Self {
        Self { channels: Channels::Three { singlet, triplet }, family: None }
    }

    pub fn two_d(singlet: Channel2D, triplet: Channel2D) -> Self {
        Self { channels: Channels::Two { singlet, triplet }, family: None }
    }

    /// Zero-range 3D model in the scattering-length approximation.
    pub fn scattering_length_3d(a0: f64, a1: f64) -> Self {
        Self::three_d(Channel3D::new(a0, 0.0), Channel3D::new(a1, 0.0))
    }

    pub fn scattering_length_2d(a0: f64, a1: f64) -> Result<Self> {
        Ok(Self::two_d(Channel2D::scattering_length(a0)?, Channel2D::scattering_length(a1)?))
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub fn dimension(&self) -> u8 {
        match self.channels {
            Channels::Three { .. } => 3,
            Channels::Two { .. } => 2,
        }
    }

    pub fn channels_3d(&self) -> Result<(Channel3D, Channel3D)> {
        match self.channels {
            Channels::Three { singlet, triplet } => Ok((singlet, triplet)),
            Channels::Two { .. } => Err(ScatterError::WrongDimension { expected: 3, found: 2 }),
        }
    }

    pub fn channels_2d(&self) -> Result<(Channel2D, Channel2D)> {
        match self.channels {
            Channels::Two { singlet, triplet } => Ok((singlet, triplet)),
            Channels::Three { .. } => Err(ScatterError::WrongDimension { expected: 2, found: 3 }),
        }
    }

    /// Finite scattering lengths (a₀, a₁) or 2D lengths (𝒂₀, 𝒂₁).
    pub fn lengths(&self) -> Option<(f64, f64)> {
        match self.channels {
            Channels::Three { singlet, triplet } => Some((singlet.a.finite()?, triplet.a.finite()?)),
            Channels::Two { singlet, triplet } => Some((singlet.a2, triplet.a2)),
        }
    }

    /// Phase jets for (singlet, triplet).
    pub fn jets(&self, p: f64) -> Result<[PhaseJet; 2]> {
        match self.channels {
            Channels::Three { singlet, triplet } => Ok([singlet.jet(p)?, triplet.jet(p)?]),
            Channels::Two { singlet, triplet } => Ok([singlet.jet(p)?, triplet.jet(p)?]),
        }
    }

    pub fn phase_shifts(&self, p: f64) -> Result<PhaseShifts> {
        let [s, t] = self.jets(p)?;
        Ok(PhaseShifts { phi: s.value, theta: t.value, flags: [s.flag, t.flag] })
    }

    pub fn s_element(&self, channel: SpinSector, p: f64) -> Result<Complex64> {
        match (self.channels, channel) {
            (Channels::Three { singlet, .. }, SpinSector::Singlet) => singlet.s_element(p),
            (Channels::Three { triplet, .. }, SpinSector::Triplet) => triplet.s_element(p),
            (Channels::Two { singlet, .. }, SpinSector::Singlet) => singlet.s_element(p),
            (Channels::Two { triplet, .. }, SpinSector::Triplet) => triplet.s_element(p),
        }
    }

    /// Scale of the momentum inversion p ↦ 1/(scale · p) attached to the
    /// model's family: λ|a₀a₁| in 3D, 𝒂₀𝒂₁ in 2D.
    pub fn inversion_scale(&self) -> Result<f64> {
        let family = self.family.ok_or(ScatterError::MissingFamily)?;
        let (a0, a1) =
            self.lengths().ok_or_else(|| invalid("a", "momentum inversion needs finite scattering lengths"))?;
        let lambda = match family.table {
            Table::T1 | Table::TwoD => 1.0,
            Table::T2 | Table::T3 => family.lambda,
        };
        Ok(lambda * (a0 * a1).abs())
    }
}

/// φ, θ for a 3D model at momentum p.
pub fn phase_shifts_3d(model: &TwoChannelModel, p: f64) -> Result<PhaseShifts> {
    model.channels_3d()?;
    model.phase_shifts(p)
}

/// φ, θ for a 2D model at momentum p.
pub fn phase_shifts_2d(model: &TwoChannelModel, p: f64) -> Result<PhaseShifts> {
    model.channels_2d()?;
    model.phase_shifts(p)
}

/// Build a member of one of the symmetric 3D model families.
///
/// T1 rows have zero ranges and fixed scattering-length signs. T2 rows set
/// ranges ∓2η/a with η = λ|a₀a₁| for any signs. T3 rows use the ∓2aλ form
/// and reject sign choices that would make a range positive.
pub fn make_symmetric_model(table: Table, row: usize, a0: f64, a1: f64, lambda: f64) -> Result<TwoChannelModel> {
    if row == 0 || row > table.rows() {
        return Err(ScatterError::InvalidRow { table: table.name(), row });
    }
    if !(a0.is_finite() && a1.is_finite()) || a0 == 0.0 || a1 == 0.0 {
        return Err(invalid("a", "scattering lengths must be finite and non-zero"));
    }
    let (r0, r1, lambda) = match table {
        Table::T1 => {
            let (cond, ok) = match row {
                1 => ("(a0>0, a1<0)", a0 > 0.0 && a1 < 0.0),
                2 => ("(a0<0, a1>0)", a0 < 0.0 && a1 > 0.0),
                3 => ("(a0<0, a1<0)", a0 < 0.0 && a1 < 0.0),
                _ => ("(a0>0, a1>0)", a0 > 0.0 && a1 > 0.0),
            };
            if !ok {
                return Err(ScatterError::SignConstraint { table: "T1", row, condition: cond });
            }
            (0.0, 0.0, 1.0)
        }
        Table::T2 => {
            check_lambda(lambda)?;
            let eta = lambda * (a0 * a1).abs();
            let (r0, r1) = match row {
                1 => (-2.0 * eta / a0, -2.0 * eta / a1),
                2 => (-2.0 * eta / a0, 2.0 * eta / a1),
                3 => (2.0 * eta / a0, -2.0 * eta / a1),
                4 => (2.0 * eta / a0, 2.0 * eta / a1),
                5 => (-2.0 * eta / a1, -2.0 * eta / a0),
                _ => (2.0 * eta / a1, 2.0 * eta / a0),
            };
            (r0, r1, lambda)
        }
        Table::T3 => {
            check_lambda(lambda)?;
            // (r0, condition on r0), (r1, condition on r1)
            let ((r0, c0, ok0), (r1, c1, ok1)) = match row {
                1 => ((-2.0 * a1 * lambda, "(a1>0)", a1 > 0.0), (-2.0 * a0 * lambda, "(a0>0)", a0 > 0.0)),
                2 => ((2.0 * a1 * lambda, "(a1<0)", a1 < 0.0), (-2.0 * a0 * lambda, "(a0>0)", a0 > 0.0)),
                3 => ((-2.0 * a1 * lambda, "(a1>0)", a1 > 0.0), (2.0 * a0 * lambda, "(a0<0)", a0 < 0.0)),
                4 => ((2.0 * a1 * lambda, "(a1<0)", a1 < 0.0), (2.0 * a0 * lambda, "(a0<0)", a0 < 0.0)),
                5 => ((-2.0 * a0 * lambda, "(a0>0)", a0 > 0.0), (-2.0 * a1 * lambda, "(a1>0)", a1 > 0.0)),
                _ => ((2.0 * a0 * lambda, "(a0<0)", a0 < 0.0), (2.0 * a1 * lambda, "(a1<0)", a1 < 0.0)),
            };
            if !ok0 {
                return Err(ScatterError::SignConstraint { table: "T3", row, condition: c0 });
            }
            if !ok1 {
                return Err(ScatterError::SignConstraint { table: "T3", row, condition: c1 });
            }
            (r0, r1, lambda)
        }
        Table::TwoD => {
            return Err(ScatterError::Unsupported("the 2d family is built with make_symmetric_model_2d".into()))
        }
    };
    Ok(TwoChannelModel::three_d(Channel3D::new(a0, r0), Channel3D::new(a1, r1)).with_family(Family {
        table,
        row,
        lambda,
    }))
}

/// 2D scattering-length model tagged with the 2D inversion family.
pub fn make_symmetric_model_2d(a0: f64, a1: f64) -> Result<TwoChannelModel> {
    Ok(TwoChannelModel::scattering_length_2d(a0, a1)?.with_family(Family { table: Table::TwoD, row: 1, lambda: 1.0 }))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(invalid("lambda", format!("must be positive and finite, got {lambda}")))
    }
}
