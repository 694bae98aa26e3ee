//! Modular localization on the truncated one-particle space.
//!
//! Real subspaces are carried as orthonormal column bases of the
//! realified H-orthonormal coordinates, v = [Re x; Im x] ∈ ℝ^{2N}:
//! Re⟨h, g⟩_H is the Euclidean dot product there, multiplication by i is
//! Jc = [[0, −I], [I, 0]] and the symplectic form Im⟨h, g⟩ is
//! σ(u, v) = uᵀ Jσ v with Jσ = [[0, I], [−I, 0]] = Jcᵀ.
//!
//! Interval subspaces use the grid-mask realization of
//! {h : supp Re h ⊂ I, supp ω⁻¹ Im h ⊂ I}: the span of the Cauchy-data
//! lines pack(δ_j, 0), pack(0, δ_j) over interior grid nodes of the
//! snapped open arc. Disjoint node sets then make microcausality and
//! additivity exact at grid level, via
//! Im⟨h, g⟩ = (πr/N) [Σ_j a_j d_j − Σ_j c_j b_j].
//!
//! The Tomita residual tests u(Θ) u(Λ₁(iπr)) h = h in the window
//! |eigenvalue| ≤ Λ̄ of the boost generator: with ℓ₁ v_i = λ_i v_i,
//! Θ v = D conj(v) (D = diag((−1)^k)) maps the eigenvector at λ to one at
//! −λ, so the window components of s h − h are
//! σ_i e^{πrλ_i} conj(c_{pair(i)}) − c_i — no exponentially large vector
//! is ever formed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{boost, dod_interval, Interval};
use crate::oneparticle::{
    grid_angles, inner_product, pack_cauchy, unpack_cauchy, CauchyData, FourierVector,
    SpectralWeights,
};
use crate::representation::boost_eigen;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Realified coordinates [Re x; Im x] of h in the H-orthonormal basis.
pub fn realify(w: &SpectralWeights, h: &FourierVector) -> DVector<f64> {
    let x = h.h_onb_coords(w);
    let n = x.len();
    let mut v = DVector::<f64>::zeros(2 * n);
    for (i, xi) in x.iter().enumerate() {
        v[i] = xi.re;
        v[n + i] = xi.im;
    }
    v
}

pub fn unrealify(w: &SpectralWeights, v: &DVector<f64>) -> FourierVector {
    let n = v.len() / 2;
    let x: Vec<Complex64> = (0..n).map(|i| Complex64::new(v[i], v[n + i])).collect();
    FourierVector::from_h_onb_coords(w, &x)
}

/// Jc: multiplication by i in realified coordinates.
pub fn complex_structure(k_max: usize) -> DMatrix<f64> {
    let n = 2 * k_max + 1;
    let mut j = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

/// Jσ: the symplectic form σ(u, v) = Im⟨u, v⟩_H = uᵀ Jσ v.
pub fn symplectic_form(k_max: usize) -> DMatrix<f64> {
    complex_structure(k_max).transpose()
}

/// A real-linear subspace of the truncated H, orthonormal columns in the
/// realified coordinates.
#[derive(Debug, Clone)]
pub struct RealSubspace {
    pub k_max: usize,
    pub basis: DMatrix<f64>,
}

impl RealSubspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthonormalizes a spanning set (SVD, rank cut at 1e-10 σ_max).
    pub fn from_spanning(k_max: usize, columns: &[DVector<f64>]) -> RealSubspace {
        let rows = 2 * (2 * k_max + 1);
        if columns.is_empty() {
            return RealSubspace {
                k_max,
                basis: DMatrix::zeros(rows, 0),
            };
        }
        let mut m = DMatrix::<f64>::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            m.set_column(c, col);
        }
        let svd = m.svd(true, false);
        let u = svd.u.as_ref().expect("u requested");
        let smax = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > 1e-10 * smax)
            .count();
        RealSubspace {
            k_max,
            basis: u.columns(0, rank).into_owned(),
        }
    }

    /// The whole realified space.
    pub fn full(k_max: usize) -> RealSubspace {
        RealSubspace {
            k_max,
            basis: DMatrix::identity(2 * (2 * k_max + 1), 2 * (2 * k_max + 1)),
        }
    }

    /// The real-axis subspace {coordinates real}.
    pub fn real_axis(k_max: usize) -> RealSubspace {
        let n = 2 * k_max + 1;
        let mut basis = DMatrix::<f64>::zeros(2 * n, n);
        for i in 0..n {
            basis[(i, i)] = 1.0;
        }
        RealSubspace { k_max, basis }
    }
}

/// A grid-snapped interval subspace together with the snap bookkeeping.
#[derive(Debug, Clone)]
pub struct IntervalSubspace {
    pub space: RealSubspace,
    /// The interval actually realized (endpoints on grid nodes).
    pub snapped: Interval,
    /// Largest angular distance moved by an endpoint during snapping.
    pub snap_distance: f64,
    /// Interior grid node indices (the open arc excludes its endpoints).
    pub nodes: Vec<usize>,
    /// The two endpoint nodes (empty for the full circle).
    pub boundary_nodes: Vec<usize>,
}

/// Index bookkeeping of a snapped arc: endpoint indices and interior
/// nodes, all exact integer arithmetic mod N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnappedArc {
    pub n: usize,
    /// None means the full circle.
    pub ends: Option<(usize, usize)>,
}

impl SnappedArc {
    pub fn from_interval(n: usize, interval: &Interval) -> (Self, f64) {
        if interval.is_full() {
            return (SnappedArc { n, ends: None }, 0.0);
        }
        let step = TAU / n as f64;
        let snap = |angle: f64| -> (usize, f64) {
            let idx = (angle / step).round();
            let snapped = idx * step;
            let dist = (angle - snapped).abs();
            ((idx as i64).rem_euclid(n as i64) as usize, dist)
        };
        let (lo, d1) = snap(interval.lo());
        let (hi, d2) = snap(interval.hi());
        (SnappedArc { n, ends: Some((lo, hi)) }, d1.max(d2))
    }

    pub fn interior_nodes(&self) -> Vec<usize> {
        match self.ends {
            None => (0..self.n).collect(),
            Some((lo, hi)) => {
                let span = (hi as i64 - lo as i64).rem_euclid(self.n as i64) as usize;
                (1..span).map(|k| (lo + k) % self.n).collect()
            }
        }
    }

    pub fn boundary_nodes(&self) -> Vec<usize> {
        match self.ends {
            None => vec![],
            Some((lo, hi)) => {
                if lo == hi {
                    vec![lo]
                } else {
                    vec![lo, hi]
                }
            }
        }
    }

    /// Interior of the complement: endpoints swap roles.
    pub fn complement(&self) -> Option<SnappedArc> {
        self.ends.map(|(lo, hi)| SnappedArc {
            n: self.n,
            ends: Some((hi, lo)),
        })
    }

    pub fn shifted(&self, m: usize) -> SnappedArc {
        SnappedArc {
            n: self.n,
            ends: self
                .ends
                .map(|(lo, hi)| ((lo + m) % self.n, (hi + m) % self.n)),
        }
    }

    /// Open-arc containment (endpoints may coincide).
    pub fn contained_in(&self, other: &SnappedArc) -> bool {
        match (self.ends, other.ends) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some((a, b)), Some((c, d))) => {
                let n = self.n as i64;
                let span_other = (d as i64 - c as i64).rem_euclid(n);
                let offset = (a as i64 - c as i64).rem_euclid(n);
                let span_self = (b as i64 - a as i64).rem_euclid(n);
                offset + span_self <= span_other
            }
        }
    }

    /// Do the two open arcs intersect as subsets of the circle?
    pub fn intersects(&self, other: &SnappedArc) -> bool {
        match (self.ends, other.ends) {
            (None, _) | (_, None) => true,
            (Some((a, b)), Some(_)) => {
                // disjoint iff other fits in the closed complement [b, a]
                let closed_complement = SnappedArc {
                    n: self.n,
                    ends: Some((b, a)),
                };
                !other.contained_in(&closed_complement)
            }
        }
    }

    pub fn to_interval(&self) -> Interval {
        match self.ends {
            None => Interval::full(),
            Some((lo, hi)) => {
                let step = TAU / self.n as f64;
                Interval::new(lo as f64 * step, hi as f64 * step)
                    .expect("snapped arc is a proper interval")
            }
        }
    }
}

fn cauchy_line(w: &SpectralWeights, node: usize, momentum: bool) -> DVector<f64> {
    let mut data = CauchyData::zero(w.k_max);
    if momentum {
        data.c[node] = 1.0;
    } else {
        data.a[node] = 1.0;
    }
    let h = pack_cauchy(w, &data).expect("matching K");
    realify(w, &h)
}

/// The span of {pack(δ_j, 0), pack(0, δ_j) : j interior node of I}.
pub fn subspace_for_interval(w: &SpectralWeights, interval: &Interval) -> Result<IntervalSubspace> {
    let n = w.n_grid();
    let (arc, snap_distance) = SnappedArc::from_interval(n, interval);
    let nodes = arc.interior_nodes();
    if nodes.is_empty() {
        return Err(Error::EmptyInterval);
    }
    let mut columns = Vec::with_capacity(2 * nodes.len());
    for &j in &nodes {
        columns.push(cauchy_line(w, j, false));
        columns.push(cauchy_line(w, j, true));
    }
    let space = RealSubspace::from_spanning(w.k_max, &columns);
    if space.dim() != 2 * nodes.len() {
        return Err(Error::Domain(format!(
            "interval subspace rank {} != 2·{} nodes",
            space.dim(),
            nodes.len()
        )));
    }
    Ok(IntervalSubspace {
        space,
        snapped: arc.to_interval(),
        snap_distance,
        nodes,
        boundary_nodes: arc.boundary_nodes(),
    })
}

/// {v : σ(v, s) = 0 ∀s ∈ S}: the orthogonal complement of Jσ·S,
/// dimension 2N − dim S.
pub fn symplectic_complement(s: &RealSubspace) -> RealSubspace {
    let dim = s.ambient_dim();
    let j = symplectic_form(s.k_max);
    let js = &j * &s.basis;
    // projector onto the orthogonal complement of span(JS)
    let p = DMatrix::<f64>::identity(dim, dim) - &js * js.transpose();
    let eig = p.symmetric_eigen();
    let mut cols = Vec::new();
    for (i, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev > 0.5 {
            cols.push(eig.eigenvectors.column(i).into_owned());
        }
    }
    RealSubspace::from_spanning(s.k_max, &cols)
}

/// max over unit u ∈ A of dist(u, B): the sine of the largest principal
/// angle of A against B. Zero iff A ⊆ B.
pub fn containment_gap(a: &RealSubspace, b: &RealSubspace) -> f64 {
    if a.dim() == 0 {
        return 0.0;
    }
    let proj = &b.basis * (b.basis.transpose() * &a.basis);
    let resid = &a.basis - proj;
    resid.svd(false, false).singular_values.max()
}

/// Orthonormal basis of A + B.
pub fn union_span(a: &RealSubspace, b: &RealSubspace) -> RealSubspace {
    let mut cols = Vec::with_capacity(a.dim() + b.dim());
    for i in 0..a.dim() {
        cols.push(a.basis.column(i).into_owned());
    }
    for i in 0..b.dim() {
        cols.push(b.basis.column(i).into_owned());
    }
    RealSubspace::from_spanning(a.k_max, &cols)
}

/// (dim(S ∩ iS), codim(S + iS)) via principal angles and rank.
///
/// The intersection counts principal angles below 1e-8. The angles
/// between H_I and iH_I collapse exponentially with K (the modular
/// pairing), so past a precision-dependent onset the count saturates:
/// use `principal_angle_gaps` to see the raw spectrum.
pub fn standardness_check(s: &RealSubspace) -> (usize, usize) {
    let jc = complex_structure(s.k_max);
    let is_basis = &jc * &s.basis;
    let overlap = s.basis.transpose() * &is_basis;
    let svd = overlap.svd(false, false);
    // 1−σ below a few ulps is indistinguishable from angle zero
    let intersection = svd
        .singular_values
        .iter()
        .filter(|&&c| 1.0 - c <= 4e-16 || c.clamp(-1.0, 1.0).acos() < 1e-8)
        .count();
    let union = union_span(
        s,
        &RealSubspace {
            k_max: s.k_max,
            basis: is_basis,
        },
    );
    let codim = s.ambient_dim() - union.dim();
    (intersection, codim)
}

/// 1 − cos of the principal angles between S and iS, ascending: the
/// raw data behind `standardness_check`.
pub fn principal_angle_gaps(s: &RealSubspace) -> Vec<f64> {
    let jc = complex_structure(s.k_max);
    let overlap = s.basis.transpose() * (&jc * &s.basis);
    let svd = overlap.svd(false, false);
    let mut gaps: Vec<f64> = svd.singular_values.iter().map(|c| 1.0 - c).collect();
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    gaps
}

/// |Im ⟨h₁, h₂⟩_H| for h_i localized in disjoint grid-aligned arcs.
pub fn microcausality_value(
    w: &SpectralWeights,
    i1: &Interval,
    h1: &FourierVector,
    i2: &Interval,
    h2: &FourierVector,
) -> Result<f64> {
    let n = w.n_grid();
    let (a1, _) = SnappedArc::from_interval(n, i1);
    let (a2, _) = SnappedArc::from_interval(n, i2);
    if a1.intersects(&a2) {
        return Err(Error::Overlap(format!(
            "arcs {:?} and {:?} intersect",
            a1.ends, a2.ends
        )));
    }
    Ok(inner_product(w, h1, h2)?.im.abs())
}

/// Two-sided additivity gap: the span of interval subspaces over all grid
/// rotations keeping `small` inside `within`, against the subspace of
/// `target`.
pub fn additivity_gap(
    w: &SpectralWeights,
    small: &Interval,
    within: &Interval,
    target: &Interval,
) -> Result<f64> {
    let n = w.n_grid();
    let (small_arc, _) = SnappedArc::from_interval(n, small);
    let (within_arc, _) = SnappedArc::from_interval(n, within);
    if small_arc.interior_nodes().is_empty() {
        return Err(Error::EmptyInterval);
    }
    let mut node_set = std::collections::BTreeSet::new();
    let mut any = false;
    for m in 0..n {
        let shifted = small_arc.shifted(m);
        if shifted.contained_in(&within_arc) {
            any = true;
            for j in shifted.interior_nodes() {
                node_set.insert(j);
            }
        }
    }
    if !any {
        return Err(Error::EmptyInterval);
    }
    let mut cols = Vec::with_capacity(2 * node_set.len());
    for &j in &node_set {
        cols.push(cauchy_line(w, j, false));
        cols.push(cauchy_line(w, j, true));
    }
    let union = RealSubspace::from_spanning(w.k_max, &cols);
    let target_space = subspace_for_interval(w, target)?.space;
    Ok(containment_gap(&union, &target_space).max(containment_gap(&target_space, &union)))
}

/// Wedge duality bookkeeping for a grid arc I: the symplectic complement
/// of H_I equals H_{int(Iᶜ)} plus the Cauchy lines of the shared boundary
/// nodes (2 real dimensions per node), exactly at finite truncation.
#[derive(Debug, Clone)]
pub struct WedgeDualityReport {
    /// gap(H_{int(Iᶜ)} ⊆ H_I′)
    pub gap_complement_arc_in_symplectic: f64,
    /// gap(H_I′ ⊆ H_{int(Iᶜ)} ⊕ boundary lines)
    pub gap_symplectic_in_extended: f64,
    /// dim H_I′ − dim H_{int(Iᶜ)}, asserted equal to 2·#boundary nodes
    pub extra_dims: usize,
    pub boundary_nodes: usize,
}

pub fn wedge_duality_report(w: &SpectralWeights, interval: &Interval) -> Result<WedgeDualityReport> {
    let sub = subspace_for_interval(w, interval)?;
    let n = w.n_grid();
    let (arc, _) = SnappedArc::from_interval(n, interval);
    let co_arc = arc.complement().ok_or(Error::EmptyInterval)?;
    let co = subspace_for_interval(w, &co_arc.to_interval())?;
    let complement = symplectic_complement(&sub.space);

    let mut boundary_cols = Vec::new();
    for &b in &sub.boundary_nodes {
        boundary_cols.push(cauchy_line(w, b, false));
        boundary_cols.push(cauchy_line(w, b, true));
    }
    let boundary = RealSubspace::from_spanning(w.k_max, &boundary_cols);
    let extended = union_span(&co.space, &boundary);

    let extra = complement.dim() - co.space.dim();
    Ok(WedgeDualityReport {
        gap_complement_arc_in_symplectic: containment_gap(&co.space, &complement),
        gap_symplectic_in_extended: containment_gap(&complement, &extended),
        extra_dims: extra,
        boundary_nodes: sub.boundary_nodes.len(),
    })
}

/// Fraction of the squared Cauchy-data grid norm of h outside the arc.
pub fn grid_mass_outside(
    w: &SpectralWeights,
    h: &FourierVector,
    interval: &Interval,
) -> Result<f64> {
    let data = unpack_cauchy(w, h)?;
    let angles = grid_angles(w.k_max);
    let mut inside = 0.0;
    let mut outside = 0.0;
    for (j, &psi) in angles.iter().enumerate() {
        let m = data.a[j] * data.a[j] + data.c[j] * data.c[j];
        if interval.contains(psi) {
            inside += m;
        } else {
            outside += m;
        }
    }
    let total = inside + outside;
    if total == 0.0 {
        return Err(Error::Domain("zero vector".into()));
    }
    Ok(outside / total)
}

/// Finite speed of light: evolve h ∈ H_I by the wedge boost for time t,
/// compute I_t = Γ(Λ₁(t) I) ∩ S¹, return the grid mass outside I_t.
pub fn fsl_leakage(
    w: &SpectralWeights,
    interval: &Interval,
    h: &FourierVector,
    t: f64,
) -> Result<f64> {
    if t.abs() > 1.0 {
        return Err(Error::Domain(format!("fsl_leakage needs |t| <= 1, got {t}")));
    }
    let n = w.n_grid();
    let (arc, _) = SnappedArc::from_interval(n, interval);
    let snapped = arc.to_interval();
    let membership = grid_mass_outside(w, h, &snapped)?;
    if membership > 1e-10 {
        return Err(Error::Domain(format!(
            "h is not localized in the interval: outside mass {membership:.3e}"
        )));
    }
    let h_t = crate::representation::boost_apply(w, Complex64::new(t, 0.0), h)?;
    let i_t = dod_interval(&boost(t, 0.0), &snapped, 4096)?;
    grid_mass_outside(w, &h_t, &i_t)
}

/// Weak-form Tomita residual: the relative size, in the spectral window
/// |λ| ≤ Λ̄ of ℓ₁, of u(Θ) e^{−πr ℓ₁} h − h.
pub fn tomita_residual(w: &SpectralWeights, h: &FourierVector, window: f64) -> Result<f64> {
    let r = w.radius();
    if !(window > 0.0) {
        return Err(Error::Domain(format!("window must be > 0, got {window}")));
    }
    let amplification = (std::f64::consts::PI * r * window).exp();
    if amplification > 1e12 {
        return Err(Error::WindowTooLarge(amplification));
    }
    let eig = boost_eigen(w);
    let n = eig.eigenvalues.len();
    let k_max = w.k_max as i64;

    // expansion coefficients of h in the eigenbasis
    let x = h.h_onb_coords(w);
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += eig.q[(j, i)] * x[j];
        }
        c[i] = acc;
    }
    let total: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return Err(Error::Domain("zero vector".into()));
    }

    // pairing i ↔ n−1−i realizes λ ↔ −λ (sorted symmetric spectrum) and
    // σ_i = ⟨v_i, D v_{pair}⟩ = ±1 up to rounding
    let spectral_radius = eig.spectral_radius();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let lam = eig.eigenvalues[i];
        if lam.abs() > window {
            continue;
        }
        let pair = n - 1 - i;
        if (eig.eigenvalues[pair] + lam).abs() > 1e-8 * spectral_radius.max(1.0) {
            return Err(Error::Domain(format!(
                "spectrum not symmetric: λ = {lam} pairs with {}",
                eig.eigenvalues[pair]
            )));
        }
        let mut sigma = 0.0;
        for j in 0..n {
            let mode = j as i64 - k_max;
            let sign = if mode.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            sigma += eig.q[(j, i)] * sign * eig.q[(j, pair)];
        }
        if (sigma.abs() - 1.0).abs() > 1e-6 {
            return Err(Error::Domain(format!(
                "reflection does not map eigenvector pair cleanly: σ = {sigma}"
            )));
        }
        let s_component =
            sigma * (std::f64::consts::PI * r * lam).exp() * c[pair].conj();
        num += (s_component - c[i]).norm_sqr();
        den += c[i].norm_sqr();
    }
    if den == 0.0 {
        return Err(Error::Domain("window contains none of the vector".into()));
    }
    Ok((num / den).sqrt())
}

/// Bump profiles for localized test data.
#[derive(Debug, Clone, Copy)]
pub enum BumpProfile {
    /// exp(−1/(1−u²)), algebraic-exponential Fourier decay.
    Smooth,
    /// exp(−(6u)²/2) masked at |u| ≥ 1 (boundary value ~1.5e-8 of peak).
    Gaussian,
    /// Gaussian with width σ = √(half_width/K): mask-edge and spectral
    /// tail balance at e^{−half·K/2}, the best a masked window can do at
    /// cutoff K. The modular suite needs this decay because the Tomita
    /// identity amplifies the λ < 0 components by e^{πr|λ|}.
    SpectralGaussian,
}

/// Cauchy data supported strictly inside the interval: the bump is
/// evaluated on the central `shrink` fraction of the arc.
pub fn bump_data(
    w: &SpectralWeights,
    interval: &Interval,
    profile: BumpProfile,
    fill_a: bool,
    fill_c: bool,
    shrink: f64,
) -> CauchyData {
    let angles = grid_angles(w.k_max);
    let mut data = CauchyData::zero(w.k_max);
    let center = (interval.lo() + 0.5 * interval.length()).rem_euclid(TAU);
    let half = 0.5 * interval.length() * shrink;
    let spectral_rate = 0.5 * half * w.k_max as f64; // (half/σ)²/2 at σ = √(half/K)
    for (j, &psi) in angles.iter().enumerate() {
        let mut d = (psi - center).rem_euclid(TAU);
        if d > std::f64::consts::PI {
            d -= TAU;
        }
        let u = d / half;
        if u.abs() >= 1.0 {
            continue;
        }
        let v = match profile {
            BumpProfile::Smooth => (-1.0 / (1.0 - u * u)).exp(),
            BumpProfile::Gaussian => (-18.0 * u * u).exp(),
            BumpProfile::SpectralGaussian => (-spectral_rate * u * u).exp(),
        };
        if fill_a {
            data.a[j] = v;
        }
        if fill_c {
            data.c[j] = 0.7 * v;
        }
    }
    data
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::make_params;

    fn weights(zeta: f64, r: f64, k: usize) -> SpectralWeights {
        SpectralWeights::new(make_params(zeta, r).unwrap(), k).unwrap()
    }

    fn iplus() -> Interval {
        Interval::half_circle_plus()
    }

    #[test]
    fn full_circle_spans_everything() {
        let w = weights(1.0, 1.0, 6);
        let sub = subspace_for_interval(&w, &Interval::full()).unwrap();
        assert_eq!(sub.space.dim(), 2 * w.n_grid());
        assert!(sub.boundary_nodes.is_empty());
    }

    #[test]
    fn half_circle_dimension_count() {
        // odd K: the open snapped half circle holds exactly K interior nodes
        let w = weights(1.0, 1.0, 9);
        let sub = subspace_for_interval(&w, &iplus()).unwrap();
        assert_eq!(sub.nodes.len(), 9);
        assert_eq!(sub.space.dim(), 18);
        assert_eq!(sub.boundary_nodes.len(), 2);
        assert!(sub.snap_distance <= TAU / (2.0 * w.n_grid() as f64));
    }

    #[test]
    fn rotation_covariance_at_grid_angles() {
        let w = weights(1.0, 1.0, 8);
        let n = w.n_grid();
        let alpha = TAU * 3.0 / n as f64;
        let i = Interval::new(0.2, 1.3).unwrap();
        let sub = subspace_for_interval(&w, &i).unwrap();
        let rotated_sub = subspace_for_interval(&w, &i.rotated(alpha)).unwrap();
        // rotate the original basis vectors and compare spans
        let cols: Vec<DVector<f64>> = (0..sub.space.dim())
            .map(|c| {
                let v = sub.space.basis.column(c).into_owned();
                let h = unrealify(&w, &v);
                realify(&w, &crate::representation::rotation_apply(&h, alpha))
            })
            .collect();
        let image = RealSubspace::from_spanning(w.k_max, &cols);
        let gap = containment_gap(&image, &rotated_sub.space)
            .max(containment_gap(&rotated_sub.space, &image));
        assert!(gap <= 1e-12, "covariance gap {gap}");
    }

    #[test]
    fn isotony_of_interval_subspaces() {
        let w = weights(1.0, 1.0, 10);
        let inner = Interval::new(0.5, 1.2).unwrap();
        let outer = Interval::new(0.3, 1.8).unwrap();
        let si = subspace_for_interval(&w, &inner).unwrap();
        let so = subspace_for_interval(&w, &outer).unwrap();
        assert!(containment_gap(&si.space, &so.space) <= 1e-12);
    }

    #[test]
    fn symplectic_complement_basics() {
        let w = weights(1.0, 1.0, 5);
        let full = RealSubspace::full(5);
        assert_eq!(symplectic_complement(&full).dim(), 0);

        let sub = subspace_for_interval(&w, &Interval::new(0.1, 2.0).unwrap()).unwrap();
        let comp = symplectic_complement(&sub.space);
        assert_eq!(comp.dim(), 2 * w.n_grid() - sub.space.dim());
        let back = symplectic_complement(&comp);
        let gap = containment_gap(&back, &sub.space).max(containment_gap(&sub.space, &back));
        assert!(gap <= 1e-10, "double complement gap {gap}");
    }

    #[test]
    fn containment_gap_basics() {
        let w = weights(1.0, 1.0, 4);
        let sub = subspace_for_interval(&w, &Interval::new(0.3, 2.1).unwrap()).unwrap();
        assert!(containment_gap(&sub.space, &sub.space) <= 1e-13);
        assert!(containment_gap(&sub.space, &RealSubspace::full(4)) <= 1e-13);

        // orthogonal real lines: gap 1
        let n = w.n_grid();
        let mut e_re = DVector::<f64>::zeros(2 * n);
        e_re[0] = 1.0;
        let mut e_im = DVector::<f64>::zeros(2 * n);
        e_im[n] = 1.0;
        let a = RealSubspace::from_spanning(4, &[e_re]);
        let b = RealSubspace::from_spanning(4, &[e_im]);
        assert!((containment_gap(&a, &b) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn wedge_duality_with_boundary_bookkeeping() {
        let w = weights(1.0, 1.0, 12);
        let report = wedge_duality_report(&w, &iplus()).unwrap();
        assert!(report.gap_complement_arc_in_symplectic <= 1e-10);
        assert!(report.gap_symplectic_in_extended <= 1e-10);
        assert_eq!(report.boundary_nodes, 2);
        assert_eq!(report.extra_dims, 4);
    }

    #[test]
    fn microcausality_exact_for_disjoint_arcs() {
        let w = weights(1.0, 1.0, 16);
        let i1 = Interval::new(0.2, 1.2).unwrap();
        let i2 = Interval::new(2.0, 3.0).unwrap();
        let b1 = bump_data(&w, &i1, BumpProfile::Smooth, true, true, 0.9);
        let b2 = bump_data(&w, &i2, BumpProfile::Smooth, true, true, 0.9);
        let h1 = pack_cauchy(&w, &b1).unwrap();
        let h2 = pack_cauchy(&w, &b2).unwrap();
        let v = microcausality_value(&w, &i1, &h1, &i2, &h2).unwrap();
        assert!(v <= 1e-12, "microcausality value {v}");

        // i·ω·bump in the second slot stays exact
        let b2m = bump_data(&w, &i2, BumpProfile::Smooth, false, true, 0.9);
        let h2m = pack_cauchy(&w, &b2m).unwrap();
        let v = microcausality_value(&w, &i1, &h1, &i2, &h2m).unwrap();
        assert!(v <= 1e-12);

        // overlapping arcs are rejected
        let i3 = Interval::new(1.0, 2.5).unwrap();
        assert!(matches!(
            microcausality_value(&w, &i1, &h1, &i3, &h2),
            Err(Error::Overlap(_))
        ));
    }

    #[test]
    fn additivity_covers_and_negative_control() {
        let w = weights(1.0, 1.0, 16);
        let n = w.n_grid();
        let step = TAU / n as f64;

        // the half circle against itself
        let gap = additivity_gap(&w, &iplus(), &iplus(), &iplus()).unwrap();
        assert!(gap <= 1e-12, "self additivity gap {gap}");

        // a 4-step window slid inside the half circle covers it
        let small = Interval::new(0.0, 4.0 * step).unwrap();
        let gap = additivity_gap(&w, &small, &iplus(), &iplus()).unwrap();
        assert!(gap <= 1e-12, "window additivity gap {gap}");

        // restricting the slide to half of I₊ leaves a real gap
        let lo = iplus().lo();
        let restricted = Interval::new(lo, lo + 0.5 * std::f64::consts::PI).unwrap();
        let gap = additivity_gap(&w, &small, &restricted, &iplus()).unwrap();
        assert!(gap > 0.5, "negative control gap {gap}");
    }

    #[test]
    fn standardness_of_interval_subspaces() {
        let w = weights(1.0, 1.0, 10);
        let n = w.n_grid();

        let sub = subspace_for_interval(&w, &Interval::new(0.4, 2.2).unwrap()).unwrap();
        let (inter, codim) = standardness_check(&sub.space);
        assert_eq!(inter, 0);
        assert!(codim > 0);

        let (inter, codim) = standardness_check(&RealSubspace::full(10));
        assert_eq!(inter, 2 * n);
        assert_eq!(codim, 0);

        let (inter, codim) = standardness_check(&RealSubspace::real_axis(10));
        assert_eq!(inter, 0);
        assert_eq!(codim, 0);
    }

    #[test]
    fn fsl_zero_time_zero_leakage() {
        let w = weights(1.0, 1.0, 24);
        let data = bump_data(&w, &iplus(), BumpProfile::Gaussian, true, false, 0.8);
        let h = pack_cauchy(&w, &data).unwrap();
        let leak = fsl_leakage(&w, &iplus(), &h, 0.0).unwrap();
        assert!(leak <= 1e-14, "leakage {leak} at t = 0");
    }

    #[test]
    fn fsl_rejects_delocalized_input() {
        let w = weights(1.0, 1.0, 16);
        let mut data = CauchyData::zero(16);
        for v in data.a.iter_mut() {
            *v = 1.0;
        }
        let h = pack_cauchy(&w, &data).unwrap();
        assert!(fsl_leakage(&w, &iplus(), &h, 0.1).is_err());
    }

    #[test]
    fn tomita_rejects_zero_and_big_window() {
        let w = weights(1.0, 1.0, 16);
        let zero = FourierVector::zero(16);
        assert!(tomita_residual(&w, &zero, 4.0).is_err());
        let data = bump_data(&w, &iplus(), BumpProfile::Smooth, true, false, 0.9);
        let h = pack_cauchy(&w, &data).unwrap();
        assert!(matches!(
            tomita_residual(&w, &h, 50.0),
            Err(Error::WindowTooLarge(_))
        ));
    }

    #[test]
    fn theta_maps_wedge_data_to_opposite_wedge() {
        // u(Θ) h has Cauchy data supported in π − I; the reflection lands
        // between grid nodes (N odd), so the defect is the spectral tail
        // of the bump and shrinks with K
        let iminus = iplus().rotated(std::f64::consts::PI);
        let leak_at = |k: usize| {
            let w = weights(1.0, 1.0, k);
            let data = bump_data(&w, &iplus(), BumpProfile::Smooth, true, true, 0.8);
            let h = pack_cauchy(&w, &data).unwrap();
            let th = crate::representation::theta_apply(&h);
            grid_mass_outside(&w, &th, &iminus).unwrap()
        };
        let l20 = leak_at(20);
        let l40 = leak_at(40);
        assert!(l20 <= 1e-4, "theta image leaks {l20}");
        assert!(l40 < 0.1 * l20, "no spectral improvement: {l20} -> {l40}");
    }
}
