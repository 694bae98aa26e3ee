//! The truncated one-particle space H over the Cauchy circle.
//!
//! Conventions, fixed crate-wide:
//!
//! * grid: N = 2K+1 uniform points ψ_j = 2πj/N; modes |k| ≤ K;
//! * L²(S¹, r dψ) orthonormal basis e_k(ψ) = e^{ikψ}/√(2πr);
//! * spectral weights ω̃(k) from
//!   ω̃(k) = r⁻¹ (k+s⁺) Γ((k+s⁺)/2)/Γ((k−s⁺)/2) · Γ((k+1−s⁺)/2)/Γ((k+1+s⁺)/2),
//!   evaluated for k ≥ 0 through log-gamma differences and mirrored to
//!   k < 0;
//! * inner product ⟨h, g⟩_H = Σ_k conj(ĥ_k) ĝ_k / (2 ω̃(k)), i.e.
//!   ⟨h, (2ω)⁻¹ g⟩ in L²;
//! * position-space kernel c_ν P_{s⁺}(−cos θ);
//! * Cauchy data (a, c) = (Re h, ω⁻¹ Im h) as real grid functions, packed
//!   through the unitary discrete Fourier transform.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::PanelRule;
use crate::specfun::{self, ModelParams};

/// ω̃(k) for a single k. Mirrors to |k| so evenness is exact; the raw
/// complex result must be real to 1e-10 relative or the call fails.
pub fn omega_coeff(params: &ModelParams, k: i64) -> Result<f64> {
    let k = k.unsigned_abs() as f64;
    let s = params.s_plus;
    let two = Complex64::new(2.0, 0.0);
    let kc = Complex64::new(k, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // log-gamma differences keep k ~ 10^3 far from overflow
    let lg = specfun::ln_gamma((kc + s) / two)? - specfun::ln_gamma((kc - s) / two)?
        + specfun::ln_gamma((kc + one - s) / two)?
        - specfun::ln_gamma((kc + one + s) / two)?;
    let value = (kc + s) * lg.exp() / params.radius;
    if value.im.abs() > 1e-10 * value.norm() {
        return Err(Error::NonReal {
            re: value.re,
            im: value.im,
        });
    }
    Ok(value.re)
}

/// The diagonal of the operator ω on the truncated space, w[k] = ω̃(k).
#[derive(Debug, Clone)]
pub struct SpectralWeights {
    pub params: ModelParams,
    pub k_max: usize,
    w: Vec<f64>,
}

impl SpectralWeights {
    /// Builds the table from the two gamma-seeded values ω̃(0), ω̃(1) and
    /// the exact two-term recursion
    ///
    ///   ω̃(k) = ω̃(k−2) · [(k−½)² + ν²] / [(k−³⁄₂)² + ν²],
    ///
    /// which follows from Γ(z+1) = zΓ(z) applied to all four gamma
    /// factors; both numerator and denominator are real since
    /// ν² = ζ² − ¼ for either series. The recursion keeps the relative
    /// error flat in k (direct log-gamma differences lose ~k² in the
    /// commutator identities downstream).
    pub fn new(params: ModelParams, k_max: usize) -> Result<Self> {
        let nu2 = params.zeta * params.zeta - 0.25;
        let mut one_sided = vec![0.0; k_max + 1];
        for k in 0..=k_max.min(1) {
            let v = omega_coeff(&params, k as i64)?;
            if v <= 0.0 {
                return Err(Error::Domain(format!("omega({k}) = {v} is not positive")));
            }
            one_sided[k] = v;
        }
        for k in 2..=k_max {
            let kf = k as f64;
            let ratio = ((kf - 0.5) * (kf - 0.5) + nu2) / ((kf - 1.5) * (kf - 1.5) + nu2);
            one_sided[k] = one_sided[k - 2] * ratio;
        }
        let mut w = vec![0.0; 2 * k_max + 1];
        for (k, &v) in one_sided.iter().enumerate() {
            w[k_max + k] = v;
            w[k_max - k] = v;
        }
        Ok(SpectralWeights { params, k_max, w })
    }

    /// Arbitrary weight profile; used as a negative control against the
    /// true ω̃ in the representation suite.
    pub fn from_profile(params: ModelParams, k_max: usize, profile: impl Fn(i64) -> f64) -> Self {
        let mut w = vec![0.0; 2 * k_max + 1];
        for k in 0..=k_max as i64 {
            let v = profile(k);
            w[(k_max as i64 + k) as usize] = v;
            w[(k_max as i64 - k) as usize] = v;
        }
        SpectralWeights { params, k_max, w }
    }

    #[inline]
    pub fn omega(&self, k: i64) -> f64 {
        self.w[(self.k_max as i64 + k) as usize]
    }

    /// Number of grid points N = 2K+1.
    #[inline]
    pub fn n_grid(&self) -> usize {
        2 * self.k_max + 1
    }

    pub fn radius(&self) -> f64 {
        self.params.radius
    }

    /// (k, ω̃(k)) table over the full mode range, for CSV dumps.
    pub fn table(&self) -> Vec<(i64, f64)> {
        (-(self.k_max as i64)..=self.k_max as i64)
            .map(|k| (k, self.omega(k)))
            .collect()
    }
}

/// An element of the truncated H as Fourier coefficients ĥ_k, |k| ≤ K,
/// in the basis e_k = e^{ikψ}/√(2πr).
#[derive(Debug, Clone, PartialEq)]
pub struct FourierVector {
    pub k_max: usize,
    coeff: Vec<Complex64>,
}

impl FourierVector {
    pub fn zero(k_max: usize) -> Self {
        FourierVector {
            k_max,
            coeff: vec![Complex64::new(0.0, 0.0); 2 * k_max + 1],
        }
    }

    /// The basis vector e_k.
    pub fn basis(k_max: usize, k: i64) -> Self {
        let mut v = Self::zero(k_max);
        v.set(k, Complex64::new(1.0, 0.0));
        v
    }

    pub fn from_coeffs(k_max: usize, coeff: Vec<Complex64>) -> Result<Self> {
        if coeff.len() != 2 * k_max + 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                2 * k_max + 1,
                coeff.len()
            )));
        }
        Ok(FourierVector { k_max, coeff })
    }

    #[inline]
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeff[(self.k_max as i64 + k) as usize]
    }

    #[inline]
    pub fn set(&mut self, k: i64, v: Complex64) {
        self.coeff[(self.k_max as i64 + k) as usize] = v;
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeff
    }

    pub fn scale(&self, c: Complex64) -> Self {
        FourierVector {
            k_max: self.k_max,
            coeff: self.coeff.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k_max, other.k_max);
        FourierVector {
            k_max: self.k_max,
            coeff: self
                .coeff
                .iter()
                .zip(&other.coeff)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Coordinates in the H-orthonormal basis f_k = √(2 ω̃(k)) e_k,
    /// x_k = ĥ_k / √(2 ω̃(k)).
    pub fn h_onb_coords(&self, w: &SpectralWeights) -> Vec<Complex64> {
        assert_eq!(self.k_max, w.k_max);
        let k_max = self.k_max as i64;
        (-k_max..=k_max)
            .map(|k| self.coeff(k) / (2.0 * w.omega(k)).sqrt())
            .collect()
    }

    pub fn from_h_onb_coords(w: &SpectralWeights, x: &[Complex64]) -> Self {
        let k_max = w.k_max;
        assert_eq!(x.len(), 2 * k_max + 1);
        let coeff = x
            .iter()
            .enumerate()
            .map(|(i, xi)| xi * (2.0 * w.omega(i as i64 - k_max as i64)).sqrt())
            .collect();
        FourierVector { k_max, coeff }
    }
}

/// Initial data of a solution: a = Re h and c = ω⁻¹ Im h on the N-point
/// grid.
#[derive(Debug, Clone)]
pub struct CauchyData {
    pub k_max: usize,
    pub a: Vec<f64>,
    pub c: Vec<f64>,
}

impl CauchyData {
    pub fn zero(k_max: usize) -> Self {
        let n = 2 * k_max + 1;
        CauchyData {
            k_max,
            a: vec![0.0; n],
            c: vec![0.0; n],
        }
    }
}

/// Grid angles ψ_j = 2πj/N.
pub fn grid_angles(k_max: usize) -> Vec<f64> {
    let n = 2 * k_max + 1;
    (0..n)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n as f64)
        .collect()
}

/// Forward transform: grid values → coefficients ĝ_k = (√(2πr)/N) Σ_j g_j e^{−ikψ_j}.
pub fn dft_grid_to_coeff(radius: f64, grid: &[Complex64]) -> Vec<Complex64> {
    let n = grid.len();
    let k_max = (n - 1) / 2;
    let scale = (2.0 * std::f64::consts::PI * radius).sqrt() / n as f64;
    let mut out = Vec::with_capacity(n);
    for k in -(k_max as i64)..=k_max as i64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, g) in grid.iter().enumerate() {
            let m = (k * j as i64).rem_euclid(n as i64);
            let ang = -2.0 * std::f64::consts::PI * m as f64 / n as f64;
            acc += g * Complex64::new(ang.cos(), ang.sin());
        }
        out.push(scale * acc);
    }
    out
}

/// Inverse transform: coefficients → grid values g_j = (1/√(2πr)) Σ_k ĝ_k e^{ikψ_j}.
pub fn dft_coeff_to_grid(radius: f64, coeff: &[Complex64]) -> Vec<Complex64> {
    let n = coeff.len();
    let k_max = (n - 1) / 2;
    let scale = 1.0 / (2.0 * std::f64::consts::PI * radius).sqrt();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in coeff.iter().enumerate() {
            let k = i as i64 - k_max as i64;
            let m = (k * j as i64).rem_euclid(n as i64);
            let ang = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
            acc += c * Complex64::new(ang.cos(), ang.sin());
        }
        out.push(scale * acc);
    }
    out
}

/// ⟨h, g⟩_H = Σ_k conj(ĥ_k) ĝ_k / (2 ω̃(k)).
pub fn inner_product(
    w: &SpectralWeights,
    h: &FourierVector,
    g: &FourierVector,
) -> Result<Complex64> {
    if h.k_max != w.k_max || g.k_max != w.k_max {
        return Err(Error::DimensionMismatch(format!(
            "inner_product: K = {}, {}, {}",
            w.k_max, h.k_max, g.k_max
        )));
    }
    let k_max = w.k_max as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -k_max..=k_max {
        acc += h.coeff(k).conj() * g.coeff(k) / (2.0 * w.omega(k));
    }
    Ok(acc)
}

/// Squared H-norm.
pub fn norm_sq(w: &SpectralWeights, h: &FourierVector) -> f64 {
    inner_product(w, h, h).expect("matching K").re
}

/// The two-point kernel c_ν P_{s⁺}(−cos θ) at separation θ ≢ 0 mod 2π.
pub fn kernel_eval(params: &ModelParams, theta: f64) -> Result<f64> {
    // u = (1 - cos θ)/2 = sin²(θ/2) keeps full precision at small θ
    let u = (0.5 * theta).sin().powi(2);
    if u == 0.0 {
        return Err(Error::Domain(format!(
            "kernel_eval: coincidence point, theta = {theta} ≡ 0 mod 2π"
        )));
    }
    let p = specfun::legendre_p_from_u(params.s_plus, u)?;
    let v = params.c_nu * p;
    if v.im.abs() > 1e-10 * v.norm().max(1e-300) {
        return Err(Error::NonReal { re: v.re, im: v.im });
    }
    Ok(v.re)
}

/// Cross-check between the kernel and the spectral weights:
/// q_k = ∫₀^{2π} c_ν P_{s⁺}(−cos θ) e^{−ikθ} dθ must satisfy
/// q_k · 2ω̃(k) = κ with one k-independent constant κ, calibrated at k = 0.
#[derive(Debug, Clone)]
pub struct KernelFourierReport {
    pub kappa: f64,
    pub max_rel_dev: f64,
    /// (k, relative deviation of q_k·2ω̃(k) from κ); evenness in k is
    /// exact by construction, so k runs over 0..=K.
    pub deviations: Vec<(i64, f64)>,
}

pub fn kernel_fourier_check(params: &ModelParams, k_max: usize) -> Result<KernelFourierReport> {
    if k_max < 8 {
        return Err(Error::Domain(format!(
            "kernel_fourier_check needs K >= 8, got {k_max}"
        )));
    }
    let w = SpectralWeights::new(*params, k_max)?;
    let rule = PanelRule::circle_kernel_rule(k_max);
    let kernel_vals: Result<Vec<f64>> = rule
        .nodes
        .iter()
        .map(|&t| kernel_eval(params, t))
        .collect();
    let kernel_vals = kernel_vals.map_err(|e| Error::Quadrature(e.to_string()))?;

    // fold: ∫₀^{2π} K(θ) e^{−ikθ} dθ = ∫₀^{π} K(θ) 2cos(kθ) dθ
    let q = |k: i64| -> f64 {
        let vals: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&kernel_vals)
            .map(|(&t, &kv)| kv * 2.0 * (k as f64 * t).cos())
            .collect();
        rule.integrate(&vals)
    };

    let kappa = q(0) * 2.0 * w.omega(0);
    if !kappa.is_finite() || kappa == 0.0 {
        return Err(Error::Quadrature(format!("calibration failed: κ = {kappa}")));
    }
    let mut deviations = Vec::with_capacity(k_max + 1);
    let mut max_rel_dev: f64 = 0.0;
    for k in 0..=k_max as i64 {
        let dev = if k == 0 {
            0.0
        } else {
            (q(k) * 2.0 * w.omega(k) - kappa).abs() / kappa.abs()
        };
        max_rel_dev = max_rel_dev.max(dev);
        deviations.push((k, dev));
    }
    Ok(KernelFourierReport {
        kappa,
        max_rel_dev,
        deviations,
    })
}

/// Σ_k ω̃(k) |f_k|² — the squared ℍ^{1/2} norm (the norm symbol in the
/// source material denotes this square; kept squared here).
pub fn sobolev_half_norm(w: &SpectralWeights, f: &FourierVector) -> f64 {
    assert_eq!(w.k_max, f.k_max);
    let k_max = w.k_max as i64;
    (-k_max..=k_max)
        .map(|k| w.omega(k) * f.coeff(k).norm_sqr())
        .sum()
}

/// h = a + i ω c in coefficient space.
pub fn pack_cauchy(w: &SpectralWeights, data: &CauchyData) -> Result<FourierVector> {
    if data.k_max != w.k_max {
        return Err(Error::DimensionMismatch(format!(
            "pack_cauchy: K = {} vs {}",
            w.k_max, data.k_max
        )));
    }
    let r = w.radius();
    let to_c = |g: &[f64]| -> Vec<Complex64> { g.iter().map(|&v| Complex64::new(v, 0.0)).collect() };
    let a_hat = dft_grid_to_coeff(r, &to_c(&data.a));
    let c_hat = dft_grid_to_coeff(r, &to_c(&data.c));
    let k_max = w.k_max as i64;
    let coeff = a_hat
        .iter()
        .zip(&c_hat)
        .enumerate()
        .map(|(i, (a, c))| a + Complex64::i() * w.omega(i as i64 - k_max) * c)
        .collect();
    Ok(FourierVector {
        k_max: w.k_max,
        coeff,
    })
}

/// Inverse of `pack_cauchy`: a = Re h, c = ω⁻¹ Im h on the grid.
pub fn unpack_cauchy(w: &SpectralWeights, h: &FourierVector) -> Result<CauchyData> {
    if h.k_max != w.k_max {
        return Err(Error::DimensionMismatch(format!(
            "unpack_cauchy: K = {} vs {}",
            w.k_max, h.k_max
        )));
    }
    let k_max = w.k_max as i64;
    let n = w.n_grid();
    let mut a_hat = vec![Complex64::new(0.0, 0.0); n];
    let mut c_hat = vec![Complex64::new(0.0, 0.0); n];
    for k in -k_max..=k_max {
        let idx = (k + k_max) as usize;
        let plus = h.coeff(k);
        let minus_conj = h.coeff(-k).conj();
        a_hat[idx] = 0.5 * (plus + minus_conj);
        let m = (plus - minus_conj) / (2.0 * Complex64::i());
        c_hat[idx] = m / w.omega(k);
    }
    let r = w.radius();
    let a_grid = dft_coeff_to_grid(r, &a_hat);
    let c_grid = dft_coeff_to_grid(r, &c_hat);
    Ok(CauchyData {
        k_max: w.k_max,
        a: a_grid.iter().map(|z| z.re).collect(),
        c: c_grid.iter().map(|z| z.re).collect(),
    })
}

/// Multiplication by χ as an operator on ℍ^{1/2}: measured norm against
/// the triangle-inequality bound.
#[derive(Debug, Clone)]
pub struct MultiplierReport {
    /// Largest singular value of diag(√ω̃) · (convolution by χ) · diag(1/√ω̃).
    pub measured_norm: f64,
    /// √((1+ab)‖χ‖²_{L²} + (ab/ω̃(0))‖χ‖²_{ℍ½}) with
    /// a = max (ω̃(k)−ω̃(0))/k and b = max k/ω̃(k) over the truncation range.
    pub bound: f64,
    /// Decay proxy |χ_k| ≲ C (1+|k|)^−4 held on the upper half of the range.
    pub smooth_ok: bool,
    /// r ω̃(K) ≥ 0.9 K held at the truncation edge.
    pub tail_ok: bool,
}

pub fn multiplier_norm_and_bound(
    w: &SpectralWeights,
    chi: &FourierVector,
) -> Result<MultiplierReport> {
    if chi.k_max > w.k_max {
        return Err(Error::DimensionMismatch(format!(
            "multiplier modes {} exceed weight range {}",
            chi.k_max, w.k_max
        )));
    }
    let big_k = w.k_max as i64;
    let chi_k = chi.k_max as i64;
    let n = w.n_grid();
    let r = w.radius();
    let lambda = 1.0 / (2.0 * std::f64::consts::PI * r).sqrt();

    // convolution matrix (χ·h)_j = λ Σ_k χ̂_{j−k} ĥ_k, conjugated by diag(√ω̃)
    let mut a_mat = nalgebra::DMatrix::<Complex64>::zeros(n, n);
    for j in -big_k..=big_k {
        for k in -big_k..=big_k {
            let d = j - k;
            if d.abs() <= chi_k {
                let v = lambda * chi.coeff(d) * (w.omega(j) / w.omega(k)).sqrt();
                a_mat[((j + big_k) as usize, (k + big_k) as usize)] = v;
            }
        }
    }
    let svd = a_mat.svd(false, false);
    let measured_norm = svd.singular_values.max();

    let mut a_const: f64 = 0.0;
    let mut b_const: f64 = 0.0;
    for k in 1..=big_k {
        a_const = a_const.max((w.omega(k) - w.omega(0)) / k as f64);
        b_const = b_const.max(k as f64 / w.omega(k));
    }
    let tail_ok = r * w.omega(big_k) >= 0.9 * big_k as f64;

    let mut l2 = 0.0;
    let mut h_half = 0.0;
    let mut cal: f64 = 0.0;
    let mut smooth_ok = true;
    for k in -chi_k..=chi_k {
        let m = chi.coeff(k).norm_sqr();
        l2 += m;
        h_half += w.omega(k) * m;
        let decay = (1.0 + k.unsigned_abs() as f64).powi(4);
        if k.abs() <= chi_k / 2 {
            cal = cal.max(m.sqrt() * decay);
        }
    }
    for k in -chi_k..=chi_k {
        if k.abs() > chi_k / 2 {
            let decay = (1.0 + k.unsigned_abs() as f64).powi(4);
            if chi.coeff(k).norm() * decay > cal * 1.000001 + 1e-300 {
                smooth_ok = false;
            }
        }
    }
    let ab = a_const * b_const;
    let bound = ((1.0 + ab) * l2 + ab / w.omega(0) * h_half).sqrt();
    Ok(MultiplierReport {
        measured_norm,
        bound,
        smooth_ok,
        tail_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::make_params;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn params(zeta: f64, r: f64) -> ModelParams {
        make_params(zeta, r).unwrap()
    }

    #[test]
    fn omega_frozen_reference_values() {
        // 40-digit oracle evaluations of the gamma-ratio formula
        let p = params(0.5, 1.0);
        assert_relative_eq!(
            omega_coeff(&p, 0).unwrap(),
            0.228_473_290_522_231_812_7,
            max_relative = 1e-12
        );
        let p = params(1.0, 1.0);
        for (k, expect) in [
            (1, 1.352_333_027_682_891_158),
            (2, 2.218_388_472_801_146_878),
            (7, 7.070_386_325_875_562_457),
            (64, 64.007_811_070_360_624_37),
            (512, 512.000_976_559_706_058_9),
        ] {
            assert_relative_eq!(omega_coeff(&p, k).unwrap(), expect, max_relative = 1e-12);
        }
        assert_relative_eq!(
            omega_coeff(&params(0.3, 2.0), 5).unwrap(),
            2.504_412_598_327_090_318,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            omega_coeff(&params(5.0, 0.5), 3).unwrap(),
            11.599_382_897_976_667_58,
            max_relative = 1e-12
        );
    }

    #[test]
    fn omega_evenness_is_exact() {
        let p = params(1.7, 0.8);
        let w = SpectralWeights::new(p, 32).unwrap();
        for k in 0..=32i64 {
            assert_eq!(w.omega(k).to_bits(), w.omega(-k).to_bits());
        }
    }

    #[test]
    fn omega_recursion_table_matches_direct_formula() {
        for zeta in [0.1, 0.49, 1.0, 3.0] {
            let p = params(zeta, 1.3);
            let w = SpectralWeights::new(p, 96).unwrap();
            for k in [2i64, 5, 17, 50, 96] {
                let direct = omega_coeff(&p, k).unwrap();
                assert_relative_eq!(w.omega(k), direct, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn omega_positive_monotone_and_asymptotic() {
        for zeta in [0.1, 0.3, 0.49, 0.5, 0.51, 1.0, 2.0, 5.0] {
            let p = params(zeta, 1.0);
            let w = SpectralWeights::new(p, 128).unwrap();
            let mut prev = 0.0;
            for k in 0..=128i64 {
                let v = w.omega(k);
                assert!(v > 0.0, "omega({k}) <= 0 at zeta = {zeta}");
                assert!(v >= prev, "omega not monotone at k = {k}, zeta = {zeta}");
                prev = v;
            }
            assert!(
                (w.omega(128) / 128.0 - 1.0).abs() < 0.05,
                "asymptote off at zeta = {zeta}"
            );
        }
    }

    #[test]
    fn omega_asymptote_at_512_within_one_percent() {
        let w = SpectralWeights::new(params(1.0, 1.0), 512).unwrap();
        assert!((w.omega(512) / 512.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn inner_product_basis_norm() {
        let w = SpectralWeights::new(params(1.0, 1.0), 8).unwrap();
        let e0 = FourierVector::basis(8, 0);
        let n = inner_product(&w, &e0, &e0).unwrap();
        assert_relative_eq!(n.re, 1.0 / (2.0 * w.omega(0)), max_relative = 1e-14);
        assert!(n.im.abs() < 1e-16);
    }

    #[test]
    fn inner_product_positivity_gram() {
        let w = SpectralWeights::new(params(0.7, 1.3), 12).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let vecs: Vec<FourierVector> = (0..6)
            .map(|_| {
                let coeff = (0..w.n_grid())
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                FourierVector::from_coeffs(12, coeff).unwrap()
            })
            .collect();
        let mut gram = nalgebra::DMatrix::<Complex64>::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                gram[(i, j)] = inner_product(&w, &vecs[i], &vecs[j]).unwrap();
            }
        }
        let eig = gram.symmetric_eigen();
        for ev in eig.eigenvalues.iter() {
            assert!(ev + 1e-12 >= 0.0, "Gram eigenvalue {ev} negative");
        }
    }

    #[test]
    fn kernel_at_pi_equals_cnu() {
        for zeta in [0.3, 1.0, 2.5] {
            let p = params(zeta, 1.0);
            assert_relative_eq!(
                kernel_eval(&p, std::f64::consts::PI).unwrap(),
                p.c_nu,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn kernel_even_and_frozen_value() {
        let p = params(1.0, 1.0);
        let l = kernel_eval(&p, 0.9).unwrap();
        let r = kernel_eval(&p, -0.9).unwrap();
        assert_relative_eq!(l, r, max_relative = 1e-14);
        // 40-digit oracle at theta = pi/2
        assert_relative_eq!(
            kernel_eval(&p, std::f64::consts::FRAC_PI_2).unwrap(),
            0.118_773_798_140_631_298_5,
            max_relative = 1e-12
        );
        assert!(matches!(kernel_eval(&p, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn kernel_fourier_check_small() {
        let report = kernel_fourier_check(&params(1.0, 1.0), 16).unwrap();
        assert_eq!(report.deviations[0].1, 0.0);
        assert!(
            report.max_rel_dev <= 1e-8,
            "max deviation {} too large",
            report.max_rel_dev
        );
        // κ is measured, never asserted; but it must scale as 1/r since the
        // kernel values are r-free while ω̃ carries 1/r
        let report_r2 = kernel_fourier_check(&params(1.0, 2.0), 16).unwrap();
        assert_relative_eq!(report_r2.kappa, report.kappa / 2.0, max_relative = 1e-9);
    }

    #[test]
    fn kernel_fourier_kappa_zeta_independent() {
        let k1 = kernel_fourier_check(&params(0.3, 1.0), 8).unwrap().kappa;
        let k2 = kernel_fourier_check(&params(0.7, 1.0), 8).unwrap().kappa;
        let k3 = kernel_fourier_check(&params(1.5, 1.0), 8).unwrap().kappa;
        assert_relative_eq!(k1, k2, max_relative = 1e-8);
        assert_relative_eq!(k2, k3, max_relative = 1e-8);
    }

    #[test]
    fn sobolev_norm_basics() {
        let w = SpectralWeights::new(params(1.0, 1.0), 6).unwrap();
        assert_eq!(sobolev_half_norm(&w, &FourierVector::zero(6)), 0.0);
        let e0 = FourierVector::basis(6, 0);
        assert_relative_eq!(sobolev_half_norm(&w, &e0), w.omega(0), max_relative = 1e-15);
    }

    #[test]
    fn sobolev_relates_to_h_norm_of_omega_f() {
        // ⟨ωf, ωf⟩_H = ½ Σ ω̃(k) |f_k|²
        let w = SpectralWeights::new(params(0.8, 1.2), 10).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut f = FourierVector::zero(10);
        for k in -10..=10i64 {
            f.set(
                k,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        let mut omega_f = f.clone();
        for k in -10..=10i64 {
            omega_f.set(k, f.coeff(k) * w.omega(k));
        }
        let lhs = inner_product(&w, &omega_f, &omega_f).unwrap().re;
        assert_relative_eq!(lhs, 0.5 * sobolev_half_norm(&w, &f), max_relative = 1e-13);
    }

    #[test]
    fn cauchy_roundtrip_identity() {
        let w = SpectralWeights::new(params(1.0, 1.0), 16).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = w.n_grid();
        let data = CauchyData {
            k_max: 16,
            a: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            c: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        };
        let h = pack_cauchy(&w, &data).unwrap();
        let back = unpack_cauchy(&w, &h).unwrap();
        for j in 0..n {
            assert_relative_eq!(back.a[j], data.a[j], epsilon = 1e-12);
            assert_relative_eq!(back.c[j], data.c[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn cauchy_zero_and_reality() {
        let w = SpectralWeights::new(params(1.0, 1.0), 8).unwrap();
        let h = pack_cauchy(&w, &CauchyData::zero(8)).unwrap();
        assert!(h.coeffs().iter().all(|z| z.norm() == 0.0));

        // real bump, c = 0: ĥ_{-k} = conj(ĥ_k)
        let angles = grid_angles(8);
        let data = CauchyData {
            k_max: 8,
            a: angles.iter().map(|&t| (t.cos() * 2.0).exp()).collect(),
            c: vec![0.0; 17],
        };
        let h = pack_cauchy(&w, &data).unwrap();
        for k in 0..=8i64 {
            assert!((h.coeff(-k) - h.coeff(k).conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn parseval_grid_vs_coefficients() {
        // ⟨h, g⟩_H via coefficients equals the grid-space L² evaluation of
        // ⟨h, (2ω)⁻¹ g⟩ (trapezoid is exact for band-limited products)
        let w = SpectralWeights::new(params(1.0, 1.0), 12).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let n = w.n_grid();
        let rand_data = |rng: &mut rand_chacha::ChaCha8Rng| CauchyData {
            k_max: 12,
            a: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            c: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        };
        let h = pack_cauchy(&w, &rand_data(&mut rng)).unwrap();
        let g = pack_cauchy(&w, &rand_data(&mut rng)).unwrap();
        let via_coeff = inner_product(&w, &h, &g).unwrap();

        let r = w.radius();
        let h_grid = dft_coeff_to_grid(r, h.coeffs());
        let mut g_over = g.clone();
        for k in -12..=12i64 {
            g_over.set(k, g.coeff(k) / (2.0 * w.omega(k)));
        }
        let g_grid = dft_coeff_to_grid(r, g_over.coeffs());
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += h_grid[j].conj() * g_grid[j];
        }
        acc *= 2.0 * std::f64::consts::PI * r / n as f64;
        assert!((via_coeff - acc).norm() <= 1e-12 * via_coeff.norm());
    }

    #[test]
    fn multiplier_constant_is_identity() {
        let w = SpectralWeights::new(params(1.0, 1.0), 24).unwrap();
        // χ ≡ 1 has the single coefficient χ̂_0 = √(2πr)
        let mut chi = FourierVector::zero(4);
        chi.set(0, Complex64::new((2.0 * std::f64::consts::PI).sqrt(), 0.0));
        let rep = multiplier_norm_and_bound(&w, &chi).unwrap();
        assert_relative_eq!(rep.measured_norm, 1.0, max_relative = 1e-12);
        assert!(rep.measured_norm <= rep.bound);
    }

    #[test]
    fn multiplier_cos_bounded() {
        let w = SpectralWeights::new(params(1.0, 1.0), 24).unwrap();
        let half = (2.0 * std::f64::consts::PI).sqrt() / 2.0;
        let mut chi = FourierVector::zero(4);
        chi.set(1, Complex64::new(half, 0.0));
        chi.set(-1, Complex64::new(half, 0.0));
        let rep = multiplier_norm_and_bound(&w, &chi).unwrap();
        assert!(rep.measured_norm <= rep.bound);
        assert!(rep.measured_norm > 0.5);

        // homogeneity: both sides double
        let rep2 = multiplier_norm_and_bound(&w, &chi.scale(Complex64::new(2.0, 0.0))).unwrap();
        assert_relative_eq!(
            rep2.measured_norm,
            2.0 * rep.measured_norm,
            max_relative = 1e-12
        );
        assert_relative_eq!(rep2.bound, 2.0 * rep.bound, max_relative = 1e-12);
    }
}
