//! Truncated bosonic Fock layer over the mode-cutoff one-particle space.
//!
//! Occupation basis: multi-indices n = (n_{−M}, …, n_M) with total
//! Σ n_k ≤ N_max, ordered by (total, lexicographic); index 0 is the
//! vacuum Ω₀. Creation and annihilation act on the H-orthonormal modes
//! f_k, so [a(h), a*(g)] = ⟨h, g⟩_H on the safe block, and
//! φ(h) = a(h) + a*(h) with a anti-linear in h.
//!
//! Second quantization: Γ(A)|n⟩ = ∏_k (Σ_j A_{jk} a*_j)^{n_k} Ω₀ / √(n!),
//! dΓ(B) = Σ_{jk} B_{jk} a*_j a_k.
//!
//! Normal ordering: :φ(h)ⁿ: = Σ_j C(n,j) a*(h)^j a(h)^{n−j}, with the
//! Hermite recursion :φⁿ: = φ·:φ^{n−1}: − (n−1)‖h‖²·:φ^{n−2}: and the
//! closed Hermite sum over full powers of φ as independent routes.
//!
//! Interacting generator: V = Σ_q (2π/N_q) r cos ψ_q :P(φ(h_q)): with
//! h_q the mode-truncated delta at node ψ_q packed as a real Cauchy
//! datum, and L = dΓ(ℓ₁|_M) + V.
//!
//! All operator identities hold exactly only on the block with total
//! occupation ≤ N_max − deg; comparisons go through `block_defect`.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oneparticle::{FourierVector, SpectralWeights};

const FOCK_DIM_GUARD: usize = 200_000;
/// Dense matrices get expensive past this; the desk-scale suites stay
/// well below it.
const FOCK_DENSE_GUARD: usize = 8_000;

/// Mode and occupation cutoffs with the enumerated basis.
#[derive(Debug)]
pub struct FockConfig {
    /// Mode cutoff M: one-particle modes |k| ≤ M.
    pub m_modes: usize,
    /// Total occupation cutoff.
    pub n_max: usize,
    /// Occupation vectors, (2M+1) entries each, ordered (total, lex).
    pub states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl FockConfig {
    pub fn new(m_modes: usize, n_max: usize) -> Result<Arc<Self>> {
        let d = 2 * m_modes + 1;
        // dim = C(n_max + d, d), counted rather than assumed
        let mut states: Vec<Vec<u8>> = Vec::new();
        let mut current = vec![0u8; d];
        for total in 0..=n_max {
            enumerate_with_total(&mut states, &mut current, 0, total as u8);
        }
        let dim = states.len();
        if dim > FOCK_DIM_GUARD {
            return Err(Error::FockDimension(dim, FOCK_DIM_GUARD));
        }
        if dim > FOCK_DENSE_GUARD {
            return Err(Error::FockDimension(dim, FOCK_DENSE_GUARD));
        }
        let mut index = HashMap::with_capacity(dim);
        for (i, s) in states.iter().enumerate() {
            index.insert(s.clone(), i);
        }
        Ok(Arc::new(FockConfig {
            m_modes,
            n_max,
            states,
            index,
        }))
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_modes(&self) -> usize {
        2 * self.m_modes + 1
    }

    pub fn index_of(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn total(&self, idx: usize) -> usize {
        self.states[idx].iter().map(|&n| n as usize).sum()
    }

    /// Σ_k k·n_k, the total angular momentum of the state.
    pub fn momentum(&self, idx: usize) -> i64 {
        let m = self.m_modes as i64;
        self.states[idx]
            .iter()
            .enumerate()
            .map(|(i, &n)| (i as i64 - m) * n as i64)
            .sum()
    }

    /// Indices of states with total occupation ≤ n_max − margin.
    pub fn safe_indices(&self, margin: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.total(i) + margin <= self.n_max)
            .collect()
    }
}

fn enumerate_with_total(out: &mut Vec<Vec<u8>>, current: &mut Vec<u8>, pos: usize, left: u8) {
    if pos + 1 == current.len() {
        current[pos] = left;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for v in 0..=left {
        current[pos] = v;
        enumerate_with_total(out, current, pos + 1, left - v);
        current[pos] = 0;
    }
}

/// A dense operator on the truncated Fock space.
#[derive(Debug, Clone)]
pub struct FockOperator {
    pub config: Arc<FockConfig>,
    pub matrix: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn zeros(config: &Arc<FockConfig>) -> Self {
        FockOperator {
            config: Arc::clone(config),
            matrix: DMatrix::zeros(config.dim(), config.dim()),
        }
    }

    pub fn identity(config: &Arc<FockConfig>) -> Self {
        FockOperator {
            config: Arc::clone(config),
            matrix: DMatrix::identity(config.dim(), config.dim()),
        }
    }

    pub fn adjoint(&self) -> Self {
        FockOperator {
            config: Arc::clone(&self.config),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        FockOperator {
            config: Arc::clone(&self.config),
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        FockOperator {
            config: Arc::clone(&self.config),
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        FockOperator {
            config: Arc::clone(&self.config),
            matrix: &self.matrix * c,
        }
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.matrix.nrows() {
            for k in 0..=j {
                worst = worst.max((self.matrix[(j, k)] - self.matrix[(k, j)].conj()).norm());
            }
        }
        worst
    }
}

/// Max entrywise difference over the block of rows and columns with
/// total occupation ≤ n_max − margin.
pub fn block_defect(a: &FockOperator, b: &FockOperator, margin: usize) -> f64 {
    let idx = a.config.safe_indices(margin);
    let mut worst: f64 = 0.0;
    for &row in &idx {
        for &col in &idx {
            worst = worst.max((a.matrix[(row, col)] - b.matrix[(row, col)]).norm());
        }
    }
    worst
}

/// Mode coordinates of h in the H-orthonormal basis restricted to
/// |k| ≤ M; fails if h carries weight above the cutoff.
pub fn mode_coords(
    cfg: &FockConfig,
    w: &SpectralWeights,
    h: &FourierVector,
) -> Result<Vec<Complex64>> {
    if cfg.m_modes > w.k_max || h.k_max != w.k_max {
        return Err(Error::DimensionMismatch(format!(
            "mode_coords: M = {}, K = {}, h.K = {}",
            cfg.m_modes, w.k_max, h.k_max
        )));
    }
    let x = h.h_onb_coords(w);
    let k_max = w.k_max as i64;
    let m = cfg.m_modes as i64;
    let total: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let mut tail = 0.0;
    for (i, xi) in x.iter().enumerate() {
        if (i as i64 - k_max).abs() > m {
            tail += xi.norm_sqr();
        }
    }
    if tail > 1e-24 * total.max(1e-300) {
        return Err(Error::Cutoff(format!(
            "h carries relative weight {:.3e} above mode cutoff {}",
            tail / total,
            cfg.m_modes
        )));
    }
    Ok((-m..=m)
        .map(|k| x[(k + k_max) as usize])
        .collect())
}

/// ⟨f, g⟩_H restricted to the cutoff modes.
pub fn mode_inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// The annihilator of the single mode with storage index `mode`.
fn annihilator(config: &Arc<FockConfig>, mode: usize) -> DMatrix<Complex64> {
    let dim = config.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, occ) in config.states.iter().enumerate() {
        if occ[mode] == 0 {
            continue;
        }
        let mut lower = occ.clone();
        lower[mode] -= 1;
        let row = config.index_of(&lower).expect("lower state enumerated");
        m[(row, col)] = Complex64::new((occ[mode] as f64).sqrt(), 0.0);
    }
    m
}

/// a(h) = Σ_k conj(x_k) a_k (anti-linear in h).
pub fn annihilation_operator(
    config: &Arc<FockConfig>,
    coords: &[Complex64],
) -> FockOperator {
    let dim = config.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (mode, x) in coords.iter().enumerate() {
        if x.norm() == 0.0 {
            continue;
        }
        let a = annihilator(config, mode);
        m += a * x.conj();
    }
    FockOperator {
        config: Arc::clone(config),
        matrix: m,
    }
}

/// φ(h) = a(h) + a*(h).
pub fn field_operator(
    config: &Arc<FockConfig>,
    w: &SpectralWeights,
    h: &FourierVector,
) -> Result<FockOperator> {
    let coords = mode_coords(config, w, h)?;
    Ok(field_from_coords(config, &coords))
}

pub fn field_from_coords(config: &Arc<FockConfig>, coords: &[Complex64]) -> FockOperator {
    let a = annihilation_operator(config, coords);
    let adj = a.adjoint();
    a.add(&adj)
}

/// Truncated coherent vector Γ(f) = ⊕ f^{⊗n}/√(n!):,
/// ⟨n|Γ(f)⟩ = ∏_k x_k^{n_k}/√(n_k!).
pub fn coherent_vector(config: &Arc<FockConfig>, coords: &[Complex64]) -> DVector<Complex64> {
    let dim = config.dim();
    let mut v = DVector::<Complex64>::zeros(dim);
    for (i, occ) in config.states.iter().enumerate() {
        let mut c = Complex64::new(1.0, 0.0);
        for (mode, &n) in occ.iter().enumerate() {
            for p in 0..n {
                c *= coords[mode] / ((p as f64 + 1.0).sqrt());
            }
        }
        v[i] = c;
    }
    v
}

#[derive(Debug, Clone)]
pub struct CoherentCheck {
    /// |⟨Γ(f), Γ(g)⟩ − Σ_{n ≤ N_max} ⟨f,g⟩ⁿ/n!|
    pub deviation: f64,
    /// ‖f‖ or ‖g‖ exceeded 1 (slow tail).
    pub norm_warning: bool,
}

pub fn coherent_overlap_check(
    config: &Arc<FockConfig>,
    w: &SpectralWeights,
    f: &FourierVector,
    g: &FourierVector,
) -> Result<CoherentCheck> {
    let xf = mode_coords(config, w, f)?;
    let xg = mode_coords(config, w, g)?;
    let norm_warning = mode_inner(&xf, &xf).re.sqrt() > 1.0 || mode_inner(&xg, &xg).re.sqrt() > 1.0;
    let gf = coherent_vector(config, &xf);
    let gg = coherent_vector(config, &xg);
    let overlap: Complex64 = gf.iter().zip(gg.iter()).map(|(a, b)| a.conj() * b).sum();
    let ip = mode_inner(&xf, &xg);
    let mut expect = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..=config.n_max {
        if n > 0 {
            term *= ip / n as f64;
        }
        expect += term;
    }
    Ok(CoherentCheck {
        deviation: (overlap - expect).norm(),
        norm_warning,
    })
}

/// Multiplicative second quantization Γ(A), sector-wise A^{⊗n}:
/// Γ(A)|n⟩ = ∏_k (Σ_j A_{jk} a*_j)^{n_k} Ω₀ / √(∏ n_k!).
pub fn second_quantize(config: &Arc<FockConfig>, a_modes: &DMatrix<Complex64>) -> Result<FockOperator> {
    let d = config.n_modes();
    if a_modes.nrows() != d || a_modes.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "second_quantize: modes {}x{}, expected {d}x{d}",
            a_modes.nrows(),
            a_modes.ncols()
        )));
    }
    let dim = config.dim();
    // transformed creators C_k v = Σ_j A_{jk} a*_j v, applied in place
    let apply_creator = |k: usize, v: &DVector<Complex64>| -> DVector<Complex64> {
        let mut out = DVector::<Complex64>::zeros(dim);
        for (col, occ) in config.states.iter().enumerate() {
            if v[col].norm() == 0.0 {
                continue;
            }
            for j in 0..d {
                let a_jk = a_modes[(j, k)];
                if a_jk.norm() == 0.0 {
                    continue;
                }
                let mut raised = occ.clone();
                raised[j] += 1;
                if let Some(row) = config.index_of(&raised) {
                    out[row] += a_jk * ((occ[j] as f64 + 1.0).sqrt()) * v[col];
                }
            }
        }
        out
    };
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, occ) in config.states.iter().enumerate() {
        let mut v = DVector::<Complex64>::zeros(dim);
        v[0] = Complex64::new(1.0, 0.0); // vacuum
        let mut norm = 1.0;
        for (k, &nk) in occ.iter().enumerate() {
            for p in 0..nk {
                v = apply_creator(k, &v);
                norm *= (p as f64 + 1.0).sqrt();
            }
        }
        for row in 0..dim {
            m[(row, col)] = v[row] / norm;
        }
    }
    Ok(FockOperator {
        config: Arc::clone(config),
        matrix: m,
    })
}

/// Additive second quantization dΓ(B) = Σ_{jk} B_{jk} a*_j a_k.
pub fn dgamma(config: &Arc<FockConfig>, b_modes: &DMatrix<Complex64>) -> Result<FockOperator> {
    let d = config.n_modes();
    if b_modes.nrows() != d || b_modes.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "dgamma: modes {}x{}, expected {d}x{d}",
            b_modes.nrows(),
            b_modes.ncols()
        )));
    }
    let dim = config.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, occ) in config.states.iter().enumerate() {
        for k in 0..d {
            if occ[k] == 0 {
                continue;
            }
            let root_k = (occ[k] as f64).sqrt();
            let mut lowered = occ.clone();
            lowered[k] -= 1;
            for j in 0..d {
                let b_jk = b_modes[(j, k)];
                if b_jk.norm() == 0.0 {
                    continue;
                }
                let mut raised = lowered.clone();
                raised[j] += 1;
                if let Some(row) = config.index_of(&raised) {
                    m[(row, col)] += b_jk * root_k * ((lowered[j] as f64 + 1.0).sqrt());
                }
            }
        }
    }
    Ok(FockOperator {
        config: Arc::clone(config),
        matrix: m,
    })
}

/// :φ(h)ⁿ: = Σ_j C(n,j) a*(h)^j a(h)^{n−j} (all creators left).
pub fn normal_ordered_power(
    config: &Arc<FockConfig>,
    w: &SpectralWeights,
    h: &FourierVector,
    n: usize,
) -> Result<FockOperator> {
    let coords = mode_coords(config, w, h)?;
    normal_ordered_power_from_coords(config, &coords, n)
}

pub fn normal_ordered_power_from_coords(
    config: &Arc<FockConfig>,
    coords: &[Complex64],
    n: usize,
) -> Result<FockOperator> {
    if n > 8 {
        return Err(Error::DegreeCap(n));
    }
    let a = annihilation_operator(config, coords);
    let astar = a.adjoint();
    let dim = config.dim();
    // powers a^p, (a*)^p for p ≤ n
    let mut a_pow = vec![DMatrix::<Complex64>::identity(dim, dim)];
    let mut astar_pow = vec![DMatrix::<Complex64>::identity(dim, dim)];
    for p in 1..=n {
        a_pow.push(&a_pow[p - 1] * &a.matrix);
        astar_pow.push(&astar_pow[p - 1] * &astar.matrix);
    }
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..=n {
        let binom = binomial(n, j);
        m += (&astar_pow[j] * &a_pow[n - j]) * Complex64::new(binom, 0.0);
    }
    Ok(FockOperator {
        config: Arc::clone(config),
        matrix: m,
    })
}

/// Independent route: the Hermite recursion
/// :φⁿ: = φ·:φ^{n−1}: − (n−1)‖h‖²·:φ^{n−2}:.
pub fn normal_ordered_power_recursive(
    config: &Arc<FockConfig>,
    coords: &[Complex64],
    n: usize,
) -> Result<FockOperator> {
    if n > 8 {
        return Err(Error::DegreeCap(n));
    }
    let phi = field_from_coords(config, coords);
    let var = mode_inner(coords, coords).re;
    let mut prev = FockOperator::identity(config); // n = 0
    if n == 0 {
        return Ok(prev);
    }
    let mut current = phi.clone(); // n = 1
    for m in 2..=n {
        let next = phi
            .mul(&current)
            .add(&prev.scale(Complex64::new(-((m - 1) as f64) * var, 0.0)));
        prev = current;
        current = next;
    }
    Ok(current)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut v = 1.0;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// A real polynomial 𝒫, bounded below: even degree with positive leading
/// coefficient (constants allowed).
#[derive(Debug, Clone)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let mut trimmed = coeffs;
        while trimmed.len() > 1 && trimmed.last() == Some(&0.0) {
            trimmed.pop();
        }
        if trimmed.is_empty() {
            trimmed.push(0.0);
        }
        let degree = trimmed.len() - 1;
        if degree > 0 && (degree % 2 == 1 || trimmed[degree] <= 0.0) {
            return Err(Error::UnboundedPolynomial);
        }
        if degree > 8 {
            return Err(Error::DegreeCap(degree));
        }
        Ok(Polynomial { coeffs: trimmed })
    }

    /// x⁴ with unit coupling.
    pub fn quartic() -> Self {
        Polynomial {
            coeffs: vec![0.0, 0.0, 0.0, 0.0, 1.0],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Default quadrature node count: enough for exactness on the degree
/// d·M + 1 trigonometric integrand, never below the grid 2M+1.
pub fn default_quadrature_nodes(m_modes: usize, degree: usize) -> usize {
    (degree * m_modes + 2).max(2 * m_modes + 1)
}

/// Mode coordinates of the truncated delta at angle ψ, packed as a real
/// Cauchy datum (pure field component): x_k = e^{−ikψ}/√(2πr·2ω̃(k)).
fn delta_coords(w: &SpectralWeights, m_modes: usize, psi: f64) -> Vec<Complex64> {
    let r = w.radius();
    let m = m_modes as i64;
    (-m..=m)
        .map(|k| {
            let scale = 1.0 / (2.0 * std::f64::consts::PI * r * 2.0 * w.omega(k)).sqrt();
            Complex64::from_polar(scale, -(k as f64) * psi)
        })
        .collect()
}

/// V with the rotated weight cos(ψ − α):
/// Σ_q (2π/N_q) r cos(ψ_q − α) :𝒫(φ(h_q)):.
pub fn interaction_generator_shifted(
    config: &Arc<FockConfig>,
    w: &SpectralWeights,
    poly: &Polynomial,
    n_quad: Option<usize>,
    alpha: f64,
) -> Result<FockOperator> {
    let n_q = n_quad.unwrap_or_else(|| default_quadrature_nodes(config.m_modes, poly.degree()));
    let r = w.radius();
    let mut v = FockOperator::zeros(config);
    for q in 0..n_q {
        let psi = 2.0 * std::f64::consts::PI * q as f64 / n_q as f64;
        let weight = 2.0 * std::f64::consts::PI / n_q as f64 * r * (psi - alpha).cos();
        if weight == 0.0 {
            continue;
        }
        let coords = delta_coords(w, config.m_modes, psi);
        for (deg, &c) in poly.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let term = normal_ordered_power_from_coords(config, &coords, deg)?;
            v = v.add(&term.scale(Complex64::new(weight * c, 0.0)));
        }
    }
    let asym = v.max_asymmetry();
    if asym > 1e-12 * v.matrix.norm().max(1e-300) {
        return Err(Error::NonReal { re: 0.0, im: asym });
    }
    Ok(v)
}

/// The interaction V = Σ_q (2π/N_q) r cos ψ_q :𝒫(φ(h_q)):.
pub fn interaction_generator(
    config: &Arc<FockConfig>,
    w: &SpectralWeights,
    poly: &Polynomial,
    n_quad: Option<usize>,
) -> Result<FockOperator> {
    interaction_generator_shifted(config, w, poly, n_quad, 0.0)
}

/// ℓ₁ restricted to the cutoff modes.
pub fn l1_modes(w: &SpectralWeights, m_modes: usize) -> DMatrix<Complex64> {
    let d = 2 * m_modes + 1;
    let m = m_modes as i64;
    let r = w.radius();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for k in -m..m {
        let c = 0.5 * r * (w.omega(k) * w.omega(k + 1)).sqrt();
        out[((k + 1 + m) as usize, (k + m) as usize)] = Complex64::new(c, 0.0);
        out[((k + m) as usize, (k + 1 + m) as usize)] = Complex64::new(c, 0.0);
    }
    out
}

/// L = L₀ + V = dΓ(ℓ₁|_M) + V.
pub fn full_generator(
    config: &Arc<FockConfig>,
    w: &SpectralWeights,
    poly: &Polynomial,
    n_quad: Option<usize>,
) -> Result<FockOperator> {
    let l0 = dgamma(config, &l1_modes(w, config.m_modes))?;
    let v = interaction_generator(config, w, poly, n_quad)?;
    Ok(l0.add(&v))
}

/// Γ(u(R₀(α))) for grid-commensurate α: diagonal with phases
/// e^{−iα Σ k n_k}.
pub fn rotation_gamma(config: &Arc<FockConfig>, alpha: f64) -> FockOperator {
    let dim = config.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        let p = config.momentum(i) as f64;
        m[(i, i)] = Complex64::from_polar(1.0, -alpha * p);
    }
    FockOperator {
        config: Arc::clone(config),
        matrix: m,
    }
}

/// Defect of discrete rotation covariance,
/// Γ(u(R₀(α))) V Γ(u(R₀(α)))⁻¹ = V_{cos(·−α)}, for α = 2πm/N_q.
pub fn rotation_covariance_defect(
    config: &Arc<FockConfig>,
    w: &SpectralWeights,
    poly: &Polynomial,
    n_quad: Option<usize>,
    steps: usize,
) -> Result<f64> {
    let n_q = n_quad.unwrap_or_else(|| default_quadrature_nodes(config.m_modes, poly.degree()));
    let alpha = 2.0 * std::f64::consts::PI * steps as f64 / n_q as f64;
    let v = interaction_generator(config, w, poly, Some(n_q))?;
    let shifted = interaction_generator_shifted(config, w, poly, Some(n_q), alpha)?;
    let u = rotation_gamma(config, alpha);
    let conjugated = u.mul(&v).mul(&u.adjoint());
    let mut worst: f64 = 0.0;
    for j in 0..config.dim() {
        for k in 0..config.dim() {
            worst = worst.max((conjugated.matrix[(j, k)] - shifted.matrix[(j, k)]).norm());
        }
    }
    Ok(worst)
}

/// Wick/Hermite closed form over full powers of φ (independent of the
/// binomial ordering route):
/// :φⁿ: = Σ_m (−1)^m n!/(m!(n−2m)! 2^m) ‖h‖^{2m} φ^{n−2m}.
pub fn normal_ordered_power_wick(
    config: &Arc<FockConfig>,
    coords: &[Complex64],
    n: usize,
) -> Result<FockOperator> {
    if n > 8 {
        return Err(Error::DegreeCap(n));
    }
    let phi = field_from_coords(config, coords);
    let dim = config.dim();
    let var = mode_inner(coords, coords).re;
    let mut phi_pow = vec![DMatrix::<Complex64>::identity(dim, dim)];
    for p in 1..=n {
        phi_pow.push(&phi_pow[p - 1] * &phi.matrix);
    }
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let factorial = |k: usize| -> f64 { (1..=k).map(|v| v as f64).product::<f64>().max(1.0) };
    for pairings in 0..=(n / 2) {
        let coeff = (-1.0f64).powi(pairings as i32) * factorial(n)
            / (factorial(pairings) * factorial(n - 2 * pairings) * 2.0f64.powi(pairings as i32))
            * var.powi(pairings as i32);
        m += &phi_pow[n - 2 * pairings] * Complex64::new(coeff, 0.0);
    }
    Ok(FockOperator {
        config: Arc::clone(config),
        matrix: m,
    })
}

/// The Wick-route interaction, for cross-checking `interaction_generator`
/// on the occupation-safe block.
pub fn interaction_generator_wick(
    config: &Arc<FockConfig>,
    w: &SpectralWeights,
    poly: &Polynomial,
    n_quad: Option<usize>,
) -> Result<FockOperator> {
    let n_q = n_quad.unwrap_or_else(|| default_quadrature_nodes(config.m_modes, poly.degree()));
    let r = w.radius();
    let mut v = FockOperator::zeros(config);
    for q in 0..n_q {
        let psi = 2.0 * std::f64::consts::PI * q as f64 / n_q as f64;
        let weight = 2.0 * std::f64::consts::PI / n_q as f64 * r * psi.cos();
        if weight == 0.0 {
            continue;
        }
        let coords = delta_coords(w, config.m_modes, psi);
        for (deg, &c) in poly.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let term = normal_ordered_power_wick(config, &coords, deg)?;
            v = v.add(&term.scale(Complex64::new(weight * c, 0.0)));
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oneparticle::inner_product;
    use crate::specfun::make_params;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn weights(k: usize) -> SpectralWeights {
        SpectralWeights::new(make_params(1.0, 1.0).unwrap(), k).unwrap()
    }

    fn truncated_vector(k_max: usize, m_modes: usize, seed: u64) -> FourierVector {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut h = FourierVector::zero(k_max);
        for k in -(m_modes as i64)..=m_modes as i64 {
            h.set(
                k,
                Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)),
            );
        }
        h
    }

    #[test]
    fn dimension_formula() {
        // dim = C(n_max + d, d)
        let cfg = FockConfig::new(2, 4).unwrap();
        assert_eq!(cfg.dim(), 126);
        let cfg = FockConfig::new(1, 6).unwrap();
        assert_eq!(cfg.dim(), 84);
        assert_eq!(cfg.states[0], vec![0, 0, 0]);
        // ordered by total
        for i in 1..cfg.dim() {
            assert!(cfg.total(i) >= cfg.total(i - 1));
        }
    }

    #[test]
    fn ccr_on_safe_block() {
        let w = weights(6);
        let cfg = FockConfig::new(2, 5).unwrap();
        let h = truncated_vector(6, 2, 1);
        let g = truncated_vector(6, 2, 2);
        let ph = field_operator(&cfg, &w, &h).unwrap();
        let pg = field_operator(&cfg, &w, &g).unwrap();
        let comm = ph.mul(&pg).matrix.clone() - pg.mul(&ph).matrix.clone();
        let ip = inner_product(&w, &h, &g).unwrap();
        let expected = Complex64::new(0.0, 2.0 * ip.im);
        let idx = cfg.safe_indices(2);
        let mut worst: f64 = 0.0;
        for &row in &idx {
            for &col in &idx {
                let want = if row == col { expected } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((comm[(row, col)] - want).norm());
            }
        }
        assert!(worst <= 1e-12, "CCR defect {worst}");
    }

    #[test]
    fn vacuum_two_point_equals_inner_product() {
        let w = weights(6);
        let cfg = FockConfig::new(2, 4).unwrap();
        let h = truncated_vector(6, 2, 3);
        let g = truncated_vector(6, 2, 4);
        let ph = field_operator(&cfg, &w, &h).unwrap();
        let pg = field_operator(&cfg, &w, &g).unwrap();
        let prod = ph.mul(&pg);
        let got = prod.matrix[(0, 0)];
        let want = inner_product(&w, &h, &g).unwrap();
        assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0));

        // φ(h)Ω has a one-particle component only
        let col = ph.matrix.column(0);
        for (i, v) in col.iter().enumerate() {
            if cfg.total(i) != 1 {
                assert!(v.norm() == 0.0);
            }
        }
    }

    #[test]
    fn field_rejects_modes_above_cutoff() {
        let w = weights(6);
        let cfg = FockConfig::new(2, 4).unwrap();
        let mut h = truncated_vector(6, 2, 5);
        h.set(4, Complex64::new(0.5, 0.0));
        assert!(matches!(
            field_operator(&cfg, &w, &h),
            Err(Error::Cutoff(_))
        ));
    }

    #[test]
    fn coherent_overlap_matches_exponential_sum() {
        let w = weights(4);
        let cfg = FockConfig::new(1, 12).unwrap();
        let zero = FourierVector::zero(4);
        let check = coherent_overlap_check(&cfg, &w, &zero, &zero).unwrap();
        assert_eq!(check.deviation, 0.0);
        assert!(!check.norm_warning);

        let f = truncated_vector(4, 1, 6);
        let g = truncated_vector(4, 1, 7);
        let check = coherent_overlap_check(&cfg, &w, &f, &g).unwrap();
        assert!(check.deviation <= 1e-12, "deviation {}", check.deviation);

        // ⟨Γ(f), Γ(f)⟩ is the partial sum of e^{‖f‖²}
        let xf = mode_coords(&cfg, &w, &f).unwrap();
        let gf = coherent_vector(&cfg, &xf);
        let self_overlap: Complex64 = gf.iter().map(|a| a.conj() * a).sum();
        let nf2 = mode_inner(&xf, &xf).re;
        let mut partial = 0.0;
        let mut term = 1.0;
        for n in 0..=cfg.n_max {
            if n > 0 {
                term *= nf2 / n as f64;
            }
            partial += term;
        }
        assert_relative_eq!(self_overlap.re, partial, max_relative = 1e-13);
    }

    #[test]
    fn second_quantization_basics() {
        let w = weights(4);
        let cfg = FockConfig::new(1, 5).unwrap();
        let d = cfg.n_modes();
        let id = DMatrix::<Complex64>::identity(d, d);
        let gamma_id = second_quantize(&cfg, &id).unwrap();
        let defect = (&gamma_id.matrix - DMatrix::<Complex64>::identity(cfg.dim(), cfg.dim()))
            .map(|z| z.norm())
            .max();
        assert!(defect <= 1e-13);

        // unitary A gives unitary Γ(A) on the truncated space
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let raw = DMatrix::<Complex64>::from_fn(d, d, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let qr = raw.qr();
        let u = qr.q();
        let gamma_u = second_quantize(&cfg, &u).unwrap();
        let should_be_id = gamma_u.adjoint().mul(&gamma_u);
        let defect = (&should_be_id.matrix
            - DMatrix::<Complex64>::identity(cfg.dim(), cfg.dim()))
        .map(|z| z.norm())
        .max();
        assert!(defect <= 1e-12, "Γ(U) not unitary: {defect}");
    }

    #[test]
    fn second_quantization_on_coherent_vectors() {
        // Γ(A)Γ(h) = Γ(Ah) within the truncated tail tolerance
        let w = weights(4);
        let cfg = FockConfig::new(1, 12).unwrap();
        let d = cfg.n_modes();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let a = DMatrix::<Complex64>::from_fn(d, d, |_, _| {
            Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
        });
        let h = truncated_vector(4, 1, 10);
        let xh = mode_coords(&cfg, &w, &h).unwrap();
        let norm_h = mode_inner(&xh, &xh).re.sqrt();
        assert!(norm_h <= 1.0);
        let gamma_a = second_quantize(&cfg, &a).unwrap();
        let lhs = &gamma_a.matrix * coherent_vector(&cfg, &xh);
        let ax: Vec<Complex64> = (0..d)
            .map(|j| (0..d).map(|k| a[(j, k)] * xh[k]).sum())
            .collect();
        let rhs = coherent_vector(&cfg, &ax);
        let diff = (&lhs - &rhs).map(|z| z.norm()).max();
        assert!(diff <= 1e-10, "coherent deviation {diff}");
    }

    #[test]
    fn normal_ordering_small_cases() {
        let w = weights(4);
        let cfg = FockConfig::new(1, 6).unwrap();
        let h = truncated_vector(4, 1, 11);
        let coords = mode_coords(&cfg, &w, &h).unwrap();
        let n0 = normal_ordered_power_from_coords(&cfg, &coords, 0).unwrap();
        assert!(
            (&n0.matrix - DMatrix::<Complex64>::identity(cfg.dim(), cfg.dim()))
                .map(|z| z.norm())
                .max()
                == 0.0
        );
        let n1 = normal_ordered_power_from_coords(&cfg, &coords, 1).unwrap();
        let phi = field_from_coords(&cfg, &coords);
        assert!((&n1.matrix - &phi.matrix).map(|z| z.norm()).max() <= 1e-15);

        // vacuum expectation vanishes for n >= 1
        for n in 1..=6 {
            let op = normal_ordered_power_from_coords(&cfg, &coords, n).unwrap();
            assert!(op.matrix[(0, 0)].norm() <= 1e-12, "⟨:φ^{n}:⟩ != 0");
        }
        assert!(matches!(
            normal_ordered_power_from_coords(&cfg, &coords, 9),
            Err(Error::DegreeCap(9))
        ));
    }

    #[test]
    fn normal_ordering_three_routes_agree() {
        let w = weights(4);
        let cfg = FockConfig::new(1, 8).unwrap();
        let h = truncated_vector(4, 1, 12);
        let coords = mode_coords(&cfg, &w, &h).unwrap();
        for n in 2..=6 {
            let binom = normal_ordered_power_from_coords(&cfg, &coords, n).unwrap();
            let recur = normal_ordered_power_recursive(&cfg, &coords, n).unwrap();
            let wick = normal_ordered_power_wick(&cfg, &coords, n).unwrap();
            let d1 = block_defect(&binom, &recur, n);
            let d2 = block_defect(&binom, &wick, n);
            assert!(d1 <= 1e-12, "recursion route defect {d1} at n = {n}");
            assert!(d2 <= 1e-12, "wick route defect {d2} at n = {n}");
        }
    }

    #[test]
    fn polynomial_bounded_below_validation() {
        assert!(Polynomial::new(vec![1.0]).is_ok());
        assert!(Polynomial::new(vec![0.0, 0.0, 1.0]).is_ok());
        assert!(matches!(
            Polynomial::new(vec![0.0, 1.0]),
            Err(Error::UnboundedPolynomial)
        ));
        assert!(matches!(
            Polynomial::new(vec![0.0, 0.0, 0.0, 0.0, -1.0]),
            Err(Error::UnboundedPolynomial)
        ));
    }

    #[test]
    fn constant_polynomial_gives_zero_interaction() {
        let w = weights(4);
        let cfg = FockConfig::new(1, 4).unwrap();
        let v = interaction_generator(&cfg, &w, &Polynomial::new(vec![3.0]).unwrap(), None)
            .unwrap();
        // Σ cos ψ_q over a uniform grid vanishes
        let max = v.matrix.map(|z| z.norm()).max();
        assert!(max <= 1e-13, "constant interaction {max}");
    }

    #[test]
    fn quadratic_interaction_vacuum_expectation_vanishes() {
        let w = weights(4);
        let cfg = FockConfig::new(1, 4).unwrap();
        let v = interaction_generator(
            &cfg,
            &w,
            &Polynomial::new(vec![0.0, 0.0, 1.0]).unwrap(),
            None,
        )
        .unwrap();
        assert!(v.matrix[(0, 0)].norm() <= 1e-12);
        assert!(v.max_asymmetry() <= 1e-12 * v.matrix.norm());
    }

    #[test]
    fn quartic_interaction_matches_wick_oracle() {
        let w = weights(4);
        let cfg = FockConfig::new(2, 4).unwrap();
        let poly = Polynomial::quartic();
        let v = interaction_generator(&cfg, &w, &poly, None).unwrap();
        let oracle = interaction_generator_wick(&cfg, &w, &poly, None).unwrap();
        let defect = block_defect(&v, &oracle, 4);
        assert!(defect <= 1e-12, "wick oracle defect {defect}");
    }

    #[test]
    fn quadrature_node_doubling_agrees() {
        let w = weights(4);
        let cfg = FockConfig::new(2, 4).unwrap();
        let poly = Polynomial::quartic();
        let n_q = default_quadrature_nodes(2, 4);
        let v1 = interaction_generator(&cfg, &w, &poly, Some(n_q)).unwrap();
        let v2 = interaction_generator(&cfg, &w, &poly, Some(2 * n_q)).unwrap();
        let defect = block_defect(&v1, &v2, 4);
        assert!(defect <= 1e-10, "node doubling defect {defect}");
    }

    #[test]
    fn rotation_covariance_at_grid_step() {
        let w = weights(4);
        let cfg = FockConfig::new(2, 4).unwrap();
        let poly = Polynomial::quartic();
        let defect = rotation_covariance_defect(&cfg, &w, &poly, None, 1).unwrap();
        assert!(defect <= 1e-12, "rotation covariance defect {defect}");
    }

    #[test]
    fn half_turn_flips_interaction_sign() {
        // cos(ψ − π) = −cos ψ: the conjugated V equals −V when N_q is even
        // so that π is grid-commensurate; with exact quadrature it holds
        // for any node count
        let w = weights(4);
        let cfg = FockConfig::new(1, 4).unwrap();
        let poly = Polynomial::quartic();
        let n_q = 8usize;
        let v = interaction_generator(&cfg, &w, &poly, Some(n_q)).unwrap();
        let u = rotation_gamma(&cfg, std::f64::consts::PI);
        let conj = u.mul(&v).mul(&u.adjoint());
        let defect = (&conj.matrix + &v.matrix).map(|z| z.norm()).max();
        assert!(defect <= 1e-12, "half-turn defect {defect}");
    }

    #[test]
    fn free_generator_limit() {
        let w = weights(4);
        let cfg = FockConfig::new(1, 4).unwrap();
        let zero = Polynomial::new(vec![0.0]).unwrap();
        let l = full_generator(&cfg, &w, &zero, None).unwrap();
        let l0 = dgamma(&cfg, &l1_modes(&w, 1)).unwrap();
        assert!((&l.matrix - &l0.matrix).map(|z| z.norm()).max() == 0.0);
    }

    #[test]
    fn full_generator_is_hermitian() {
        let w = weights(4);
        let cfg = FockConfig::new(2, 6).unwrap();
        let l = full_generator(&cfg, &w, &Polynomial::quartic(), None).unwrap();
        assert!(
            l.max_asymmetry() <= 1e-12 * l.matrix.norm(),
            "asymmetry {}",
            l.max_asymmetry()
        );
    }
}
