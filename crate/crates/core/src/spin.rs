//! Two-spin Hilbert space: the s-wave S-operator, out-state density
//! matrices, total-spin projectors and entanglement power.
//!
//! Basis order is fixed as |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ and the singlet is
//! (|↑↓⟩ − |↓↑⟩)/√2.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, ScatterError};

/// Unitarity tolerance used by [`out_density_matrix`].
pub const UNITARITY_TOL: f64 = 1e-10;

/// Normalization tolerance for product-state factors.
pub const NORM_TOL: f64 = 1e-12;

/// Ratio between the Haar-averaged linear entropy of the reduced out-state
/// and the closed-form entanglement power. The raw average over independent
/// Haar factors already reaches 1/6 at |θ − φ| = π/2, so no rescaling is
/// needed; the constant is kept explicit so the convention is visible.
pub const EP_CONVENTION_FACTOR: f64 = 1.0;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

fn pauli() -> [Matrix2<Complex64>; 3] {
    [Matrix2::new(C0, C1, C1, C0), Matrix2::new(C0, -CI, CI, C0), Matrix2::new(C1, C0, C0, -C1)]
}

/// A 4×4 complex operator on the two-spin space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexOperator4(pub Matrix4<Complex64>);

impl ComplexOperator4 {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn zero() -> Self {
        Self(Matrix4::zeros())
    }

    /// σ̂·σ̂ = Σ_α σ^α ⊗ σ^α.
    pub fn sigma_dot_sigma() -> Self {
        let m = pauli().iter().map(|s| s.kronecker(s)).fold(Matrix4::zeros(), |acc, k| acc + k);
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn conjugate(&self) -> Self {
        Self(self.0.conjugate())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn apply(&self, v: &Vector4<Complex64>) -> Vector4<Complex64> {
        self.0 * v
    }

    /// max_ij |(UU†)_ij − δ_ij|
    pub fn unitarity_deviation(&self) -> f64 {
        max_abs(&(self.0 * self.0.adjoint() - Matrix4::identity()))
    }

    /// max_ij |H_ij − conj(H_ji)|
    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs(&(self.0 - self.0.adjoint()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(self.0 - other.0))
    }
}

impl std::ops::Mul for ComplexOperator4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl std::ops::Add for ComplexOperator4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

pub(crate) fn max_abs(m: &Matrix4<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// SWAP operator ½(1̂ + σ̂·σ̂).
pub fn build_swap() -> ComplexOperator4 {
    let half = Complex64::new(0.5, 0.0);
    ComplexOperator4((Matrix4::identity() + ComplexOperator4::sigma_dot_sigma().0) * half)
}

/// Ŝ(φ, θ) = ½(e^{iθ} + e^{iφ})1̂ + ½(e^{iθ} − e^{iφ})P̂₁₂ with φ = 2δ₀, θ = 2δ₁.
pub fn build_s_operator(phi: f64, theta: f64) -> ComplexOperator4 {
    let es = Complex64::from_polar(1.0, phi);
    let et = Complex64::from_polar(1.0, theta);
    let swap = build_swap().0;
    ComplexOperator4(Matrix4::identity() * ((et + es) * 0.5) + swap * ((et - es) * 0.5))
}

/// Unentangled two-spin state |a⟩ ⊗ |b⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductState {
    spin_a: Vector2<Complex64>,
    spin_b: Vector2<Complex64>,
}

impl ProductState {
    pub fn new(spin_a: Vector2<Complex64>, spin_b: Vector2<Complex64>) -> Result<Self> {
        for v in [&spin_a, &spin_b] {
            let norm = v.norm();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(ScatterError::NotNormalized { norm });
            }
        }
        Ok(Self { spin_a, spin_b })
    }

    pub fn up() -> Vector2<Complex64> {
        Vector2::new(C1, C0)
    }

    pub fn down() -> Vector2<Complex64> {
        Vector2::new(C0, C1)
    }

    /// |↑⟩ ⊗ |↓⟩
    pub fn up_down() -> Self {
        Self { spin_a: Self::up(), spin_b: Self::down() }
    }

    /// Each factor drawn Haar-uniformly on the Bloch sphere from a pair of
    /// normalized complex Gaussians.
    pub fn haar<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self { spin_a: haar_spinor(rng), spin_b: haar_spinor(rng) }
    }

    pub fn spin_a(&self) -> &Vector2<Complex64> {
        &self.spin_a
    }

    pub fn spin_b(&self) -> &Vector2<Complex64> {
        &self.spin_b
    }

    pub fn ket(&self) -> Vector4<Complex64> {
        let a = &self.spin_a;
        let b = &self.spin_b;
        Vector4::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    }
}

fn haar_spinor<R: Rng + ?Sized>(rng: &mut R) -> Vector2<Complex64> {
    loop {
        let v = Vector2::new(
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
        );
        let n = v.norm();
        if n > 1e-300 {
            return v.unscale(n);
        }
    }
}

/// Density matrix on the two-spin space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(pub Matrix4<Complex64>);

impl DensityMatrix4 {
    pub fn from_ket(v: &Vector4<Complex64>) -> Self {
        Self(v * v.adjoint())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs(&(self.0 - self.0.adjoint()))
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h).eigenvalues.min()
    }

    /// ‖ρ² − ρ‖_max
    pub fn purity_deviation(&self) -> f64 {
        max_abs(&(self.0 * self.0 - self.0))
    }

    /// Partial trace over the second spin.
    pub fn reduced_a(&self) -> Matrix2<Complex64> {
        let m = &self.0;
        let mut r = Matrix2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                r[(i, j)] = m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)];
            }
        }
        r
    }

    /// 1 − Tr(ρ_A²)
    pub fn linear_entropy(&self) -> f64 {
        let ra = self.reduced_a();
        1.0 - (ra * ra).trace().re
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(self.0 - other.0))
    }
}

/// ρ = Ŝ|in⟩⟨in|Ŝ†, or with `conjugated` ρ̄ = Ŝ*|in⟩⟨in|Ŝᵀ.
pub fn out_density_matrix(s: &ComplexOperator4, input: &ProductState, conjugated: bool) -> Result<DensityMatrix4> {
    let deviation = s.unitarity_deviation();
    if deviation > UNITARITY_TOL {
        return Err(ScatterError::NotUnitary { deviation });
    }
    let op = if conjugated { s.conjugate() } else { *s };
    Ok(DensityMatrix4::from_ket(&op.apply(&input.ket())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinSector {
    /// total spin 0
    Singlet,
    /// total spin 1
    Triplet,
}

/// P_s = (1 − P̂₁₂)/2, P_t = (1 + P̂₁₂)/2.
pub fn spin_projector(sector: SpinSector) -> ComplexOperator4 {
    let swap = build_swap().0;
    let sign = match sector {
        SpinSector::Singlet => -1.0,
        SpinSector::Triplet => 1.0,
    };
    ComplexOperator4((Matrix4::identity() + swap * Complex64::new(sign, 0.0)) * Complex64::new(0.5, 0.0))
}

/// P ρ P for the requested total-spin sector (not renormalized).
pub fn project_total_spin(rho: &DensityMatrix4, sector: SpinSector) -> ComplexOperator4 {
    let p = spin_projector(sector).0;
    ComplexOperator4(p * rho.0 * p)
}

/// P_a ρ P_b between two sectors.
pub fn project_between(rho: &DensityMatrix4, left: SpinSector, right: SpinSector) -> ComplexOperator4 {
    ComplexOperator4(spin_projector(left).0 * rho.0 * spin_projector(right).0)
}

/// Closed-form entanglement power (1/6) sin²(θ − φ).
pub fn entanglement_power_closed(phi: f64, theta: f64) -> f64 {
    (theta - phi).sin().powi(2) / 6.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Monte-Carlo entanglement power: the mean linear entropy of the reduced
/// out-state over Haar-random product in-states. Deterministic in `seed`.
pub fn entanglement_power_mc(phi: f64, theta: f64, n_samples: usize, seed: u64) -> Result<McEstimate> {
    if n_samples == 0 {
        return Err(crate::error::invalid("n_samples", "must be at least 1"));
    }
    let s = build_s_operator(phi, theta);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 0..n_samples {
        let input = ProductState::haar(&mut rng);
        let rho = DensityMatrix4::from_ket(&s.apply(&input.ket()));
        let x = EP_CONVENTION_FACTOR * rho.linear_entropy();
        let d = x - mean;
        mean += d / (k + 1) as f64;
        m2 += d * (x - mean);
    }
    let std_error = if n_samples > 1 { (m2 / (n_samples - 1) as f64 / n_samples as f64).sqrt() } else { 0.0 };
    Ok(McEstimate { mean, std_error, samples: n_samples })
}
