//! Complex special functions and model-parameter derivation.
//!
//! Everything downstream rests on three primitives:
//!
//! * `ln_gamma` / `gamma` — Lanczos approximation (g = 607/128, 15 terms)
//!   with reflection for Re z < 1/2,
//! * `legendre_p` — the Legendre function P_s(x) of complex degree s,
//!   evaluated through the Gauss series ₂F₁(−s, s+1; 1; (1−x)/2) away from
//!   the logarithmic point x = −1 and through the (a)ₙ(b)ₙ–digamma
//!   expansion of ₂F₁ at unit argument close to it,
//! * `ModelParams` — ζ, r and the derived ν, s±, c_ν with
//!   s± = −1/2 ∓ iν and c_ν = 1/(2 cos(iνπ)).

use num_complex::Complex64;

use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_502_4;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// Lanczos g = 607/128. The coefficient set is Godfrey's 15-term table,
/// accurate to ~15 digits over the half-plane Re z >= 1/2.
const LANCZOS_G: f64 = 4.742_187_5;
const LANCZOS_C: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    3.399_464_998_481_188_869_9e-5,
    4.652_362_892_704_857_566_5e-5,
    -9.837_447_530_487_956_467_7e-5,
    1.580_887_032_249_124_888_4e-4,
    -2.102_644_417_241_048_831_9e-4,
    2.174_396_181_152_126_432e-4,
    -1.643_181_065_367_638_902_2e-4,
    8.441_822_398_385_274_329_3e-5,
    -2.619_083_840_158_140_867e-5,
    3.689_918_265_953_162_270_4e-6,
];

fn near_nonpositive_integer(z: Complex64) -> bool {
    if z.re > 0.5 {
        return false;
    }
    let n = z.re.round();
    n <= 0.0 && (z.re - n).abs() <= 1e-14 && z.im.abs() <= 1e-14
}

/// log(sin(pi z)), stable for large |Im z|.
///
/// The imaginary part is only defined up to multiples of 2*pi; callers
/// exponentiate, so the ambiguity cancels.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw}) with |e^{2iw}| <= 1 for Im w >= 0
        let iw = Complex64::i() * (std::f64::consts::PI * z);
        let ln_half_i = Complex64::new(-std::f64::consts::LN_2, std::f64::consts::FRAC_PI_2);
        -iw + (Complex64::new(1.0, 0.0) - (2.0 * iw).exp()).ln() + ln_half_i
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

/// ln Γ(z) for complex z away from the poles at 0, −1, −2, …
///
/// For Re z < 1/2 the reflection formula is used; its imaginary part may
/// then differ from the principal branch by a multiple of 2πi, which is
/// harmless under exponentiation (the only way it is consumed here).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if near_nonpositive_integer(z) {
        return Err(Error::GammaPole { z });
    }
    if z.re < 0.5 {
        // ln Γ(z) = ln π − ln sin(πz) − ln Γ(1−z)
        let pi_ln = Complex64::new(std::f64::consts::PI.ln(), 0.0);
        return Ok(pi_ln - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z)?);
    }
    let zm1 = z - Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(LANCZOS_C[0], 0.0);
    for (k, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        s += c / (zm1 + Complex64::new(k as f64, 0.0));
    }
    let t = zm1 + Complex64::new(LANCZOS_G + 0.5, 0.0);
    Ok((zm1 + Complex64::new(0.5, 0.0)) * t.ln() - t + (SQRT_2PI * s).ln())
}

/// Γ(z) = exp(ln Γ(z)). Overflows to infinity past |z| ≈ 171 on the real
/// axis; use `ln_gamma` differences for ratios.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// Digamma ψ(z) by upward recurrence into the asymptotic region |z| >= 15.
///
/// Coefficients are B_{2n}/(2n); the tail after z^{-14} is below 1e-17
/// at the switch radius.
pub fn digamma(mut z: Complex64) -> Complex64 {
    const PSI_ASY: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut acc = Complex64::new(0.0, 0.0);
    if z.re < 0.0 {
        // ψ(z) = ψ(1−z) − π cot(πz)
        let pz = std::f64::consts::PI * z;
        acc -= std::f64::consts::PI * pz.cos() / pz.sin();
        z = Complex64::new(1.0, 0.0) - z;
    }
    while z.norm() < 15.0 {
        acc -= 1.0 / z;
        z += Complex64::new(1.0, 0.0);
    }
    let inv2 = 1.0 / (z * z);
    let mut term = inv2;
    let mut sum = Complex64::new(0.0, 0.0);
    for &c in &PSI_ASY {
        sum += c * term;
        term *= inv2;
    }
    acc + z.ln() - 0.5 / z - sum
}

const SERIES_CAP: usize = 1_000_000;

/// Legendre function P_s(x) for complex degree s and x in (−1, 1].
///
/// P_s(x) = ₂F₁(−s, s+1; 1; (1−x)/2). The series argument z = (1−x)/2 is
/// summed directly for z <= 1/2 and through the logarithmic connection
/// expansion in 1−z otherwise, so the integrable log divergence at
/// x → −1 is resolved rather than truncated. Both sums run under an
/// explicit tail bound with a hard cap of 10⁶ terms.
pub fn legendre_p(s: Complex64, x: f64) -> Result<Complex64> {
    if !(x > -1.0 && x <= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "legendre_p needs x in (-1, 1], got {x}"
        )));
    }
    legendre_p_from_u(s, 0.5 * (1.0 + x))
}

/// P_s through the parameter u = (1+x)/2 ∈ (0, 1].
///
/// Callers sitting on the circle should form u = sin²(θ/2) themselves:
/// near the coincidence point −cos θ loses all precision while u does not.
pub fn legendre_p_from_u(s: Complex64, u: f64) -> Result<Complex64> {
    if !(u > 0.0 && u <= 1.0) || !u.is_finite() {
        return Err(Error::Domain(format!(
            "legendre_p_from_u needs u in (0, 1], got {u}"
        )));
    }
    // (a)_n (b)_n with a = -s, b = s+1 recurse through n(n+1) + sigma,
    // sigma = -s(s+1); for the model degrees sigma = zeta^2 is real.
    let sigma = -s * (s + Complex64::new(1.0, 0.0));
    if u >= 0.5 {
        // 1 - u is exact here (Sterbenz), and equals the series argument (1-x)/2
        series_2f1_direct(sigma, 1.0 - u)
    } else {
        series_2f1_log_branch(s, sigma, u)
    }
}

fn series_2f1_direct(sigma: Complex64, z: f64) -> Result<Complex64> {
    if z == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let min_n = sigma.norm().ceil() as usize + 2;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        term *= (Complex64::new(nf * (nf + 1.0), 0.0) + sigma) * z / ((nf + 1.0) * (nf + 1.0));
        sum += term;
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        // geometric tail once the Pochhammer ratio has dropped below 1
        if n >= min_n && term.norm() * z / (1.0 - z) <= 1e-16 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        max_terms: SERIES_CAP,
        arg_abs: z,
    })
}

/// ₂F₁(a, b; a+b; z) near z = 1 (c − a − b = 0, the logarithmic case):
///
///   F = (Γ(a+b)/(Γ(a)Γ(b))) Σₙ ((a)ₙ(b)ₙ/(n!)²) (1−z)ⁿ
///         · [2ψ(n+1) − ψ(a+n) − ψ(b+n) − ln(1−z)]
///
/// with a = −s, b = s+1, Γ(a+b) = 1 and 1/(Γ(−s)Γ(s+1)) = −sin(πs)/π.
fn series_2f1_log_branch(s: Complex64, sigma: Complex64, u: f64) -> Result<Complex64> {
    let a = -s;
    let b = s + Complex64::new(1.0, 0.0);
    if near_nonpositive_integer(a) || near_nonpositive_integer(b) {
        // polynomial degree: the direct series terminates instead
        return series_2f1_direct(sigma, 1.0 - u);
    }
    let prefactor = -(std::f64::consts::PI * s).sin() / std::f64::consts::PI;
    let ln_u = u.ln();
    let mut psi_n = Complex64::new(-EULER_GAMMA, 0.0); // psi(1)
    let mut psi_a = digamma(a);
    let mut psi_b = digamma(b);
    let mut coeff = Complex64::new(1.0, 0.0); // (a)_n (b)_n u^n / (n!)^2
    let mut sum = Complex64::new(0.0, 0.0);
    let min_n = sigma.norm().ceil() as usize + 2;
    let mut quiet = 0usize;
    for n in 0..SERIES_CAP {
        let bracket = 2.0 * psi_n - psi_a - psi_b - Complex64::new(ln_u, 0.0);
        let term = coeff * bracket;
        sum += term;
        if n >= min_n && term.norm() * u / (1.0 - u) <= 1e-16 * sum.norm() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(prefactor * sum);
            }
        } else {
            quiet = 0;
        }
        let nf = n as f64;
        coeff *= (Complex64::new(nf * (nf + 1.0), 0.0) + sigma) * u / ((nf + 1.0) * (nf + 1.0));
        let an = a + Complex64::new(nf, 0.0);
        let bn = b + Complex64::new(nf, 0.0);
        psi_n += 1.0 / (nf + 1.0);
        psi_a += 1.0 / an;
        psi_b += 1.0 / bn;
    }
    Err(Error::NonConvergence {
        max_terms: SERIES_CAP,
        arg_abs: u,
    })
}

/// Principal (ζ >= 1/2, ν real) or complementary (0 < ζ < 1/2,
/// ν purely imaginary with |ν| < 1/2) series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    Principal,
    Complementary,
}

/// Physical constants ζ, r and the derived quantities of the model.
#[derive(Debug, Clone, Copy)]
pub struct ModelParams {
    /// Casimir eigenvalue ζ > 0.
    pub zeta: f64,
    /// de Sitter radius r > 0.
    pub radius: f64,
    /// ν = √(ζ² − 1/4) for ζ >= 1/2, i√(1/4 − ζ²) otherwise.
    pub nu: Complex64,
    /// s⁺ = −1/2 − iν.
    pub s_plus: Complex64,
    /// s⁻ = −1/2 + iν, stored as −1 − s⁺ so the sum rule is exact.
    pub s_minus: Complex64,
    /// c_ν = 1/(2 cos(iνπ)), real and positive for both series.
    pub c_nu: f64,
    pub series: Series,
}

impl ModelParams {
    /// Derives ν, s±, c_ν from ζ and r.
    pub fn new(zeta: f64, radius: f64) -> Result<Self> {
        if !(zeta > 0.0) || !zeta.is_finite() {
            return Err(Error::Domain(format!("zeta must be > 0, got {zeta}")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!("radius must be > 0, got {radius}")));
        }
        let (nu, series) = if zeta >= 0.5 {
            (
                Complex64::new((zeta * zeta - 0.25).sqrt(), 0.0),
                Series::Principal,
            )
        } else {
            (
                Complex64::new(0.0, (0.25 - zeta * zeta).sqrt()),
                Series::Complementary,
            )
        };
        let s_plus = Complex64::new(-0.5, 0.0) - Complex64::i() * nu;
        let s_minus = Complex64::new(-1.0, 0.0) - s_plus;
        let c = 1.0 / (2.0 * (Complex64::i() * nu * std::f64::consts::PI).cos());
        if c.im.abs() > 1e-13 * c.norm() || c.re <= 0.0 {
            return Err(Error::NonReal {
                re: c.re,
                im: c.im,
            });
        }
        Ok(ModelParams {
            zeta,
            radius,
            nu,
            s_plus,
            s_minus,
            c_nu: c.re,
            series,
        })
    }
}

/// Alias matching the operation vocabulary used by callers.
pub fn make_params(zeta: f64, radius: f64) -> Result<ModelParams> {
    ModelParams::new(zeta, radius)
}
