//! Exact causal geometry of the two-dimensional de Sitter hyperboloid
//! x₀² − x₁² − x₂² = −r² in ambient Minkowski space with form diag(+,−,−).
//!
//! Group elements are the rotations R₀(α) about the x₀ axis, the boosts
//! Λ₁(t) keeping the x₁ axis fixed, and the rotated boosts
//! Λ^{(α)}(t) = R₀(α) Λ₁(t) R₀(−α). The Cauchy surface is the circle
//! x₀ = 0 parametrized as x(ψ) = (0, r sin ψ, r cos ψ); the wedge
//! W₁ = {x₂ > |x₀|} has base I₊ = {cos ψ > 0}.
//!
//! Causal relation between points on the same hyperboloid uses the
//! ambient criterion ⟨x, y⟩ ≤ −r²; the wedge-invariance identity
//! Γ(Λ₁(t) I₊) ∩ S¹ = I₊ serves as its cross-check.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Relative slack for causal comparisons; well below every geometric
/// scale probed (endpoint refinement stops at 1e-10).
const CAUSAL_SLACK: f64 = 1e-9;

/// ⟨x, y⟩ in the ambient form diag(+,−,−).
pub fn minkowski_dot(x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
    x[0] * y[0] - x[1] * y[1] - x[2] * y[2]
}

/// An element of SO₀(1,2) as its ambient 3×3 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub matrix: Matrix3<f64>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement {
            matrix: Matrix3::identity(),
        }
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: self.matrix * other.matrix,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        // Lorentz inverse: g⁻¹ = η gᵀ η
        let eta = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0));
        GroupElement {
            matrix: eta * self.matrix.transpose() * eta,
        }
    }

    pub fn apply(&self, x: &DSPoint) -> DSPoint {
        DSPoint {
            x: self.matrix * x.x,
            radius: x.radius,
        }
    }

    /// Defect from the Lorentz conditions: form preservation, det 1,
    /// orthochronicity.
    pub fn lorentz_defect(&self) -> f64 {
        let eta = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0));
        let g = &self.matrix;
        let form = (g.transpose() * eta * g - eta).abs().max();
        let det = (g.determinant() - 1.0).abs();
        let ortho = if g[(0, 0)] > 0.0 { 0.0 } else { 1.0 };
        form.max(det).max(ortho)
    }
}

/// R₀(α): rotation of the Cauchy circle.
pub fn rotation(alpha: f64) -> GroupElement {
    let (s, c) = alpha.sin_cos();
    GroupElement {
        matrix: Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
    }
}

/// Λ^{(α)}(t) = R₀(α) Λ₁(t) R₀(−α); α = 0 is the boost keeping x₁ fixed.
pub fn boost(t: f64, alpha: f64) -> GroupElement {
    let (sh, ch) = (t.sinh(), t.cosh());
    let l1 = GroupElement {
        matrix: Matrix3::new(ch, 0.0, sh, 0.0, 1.0, 0.0, sh, 0.0, ch),
    };
    if alpha == 0.0 {
        l1
    } else {
        rotation(alpha).compose(&l1).compose(&rotation(-alpha))
    }
}

/// A point of the hyperboloid.
#[derive(Debug, Clone, PartialEq)]
pub struct DSPoint {
    pub x: Vector3<f64>,
    pub radius: f64,
}

impl DSPoint {
    /// Cauchy-surface point x(ψ) = (0, r sin ψ, r cos ψ).
    pub fn on_circle(radius: f64, psi: f64) -> Self {
        DSPoint {
            x: Vector3::new(0.0, radius * psi.sin(), radius * psi.cos()),
            radius,
        }
    }

    /// |⟨x,x⟩ + r²| / r², the hyperboloid constraint defect.
    pub fn constraint_defect(&self) -> f64 {
        (minkowski_dot(&self.x, &self.x) + self.radius * self.radius).abs()
            / (self.radius * self.radius)
    }
}

/// x and y causally connectible: ⟨x, y⟩ ≤ −r² (ambient criterion).
pub fn causally_related(x: &DSPoint, y: &DSPoint) -> Result<bool> {
    if (x.radius - y.radius).abs() > 1e-10 * x.radius.max(y.radius) {
        return Err(Error::MismatchedRadius(x.radius, y.radius));
    }
    let r2 = x.radius * y.radius;
    Ok(minkowski_dot(&x.x, &y.x) <= -r2 * (1.0 - CAUSAL_SLACK))
}

/// An open arc {ψ : lo < ψ < lo + length} of the circle, stored with the
/// canonical representative lo ∈ [0, 2π) and length ∈ (0, 2π].
/// Length exactly 2π denotes the full circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    length: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let length = (hi - lo).rem_euclid(TAU);
        if length == 0.0 {
            return Err(Error::Domain(format!(
                "interval ({lo}, {hi}) has zero or full-multiple length; use Interval::full()"
            )));
        }
        Ok(Interval {
            lo: lo.rem_euclid(TAU),
            length,
        })
    }

    pub fn full() -> Self {
        Interval { lo: 0.0, length: TAU }
    }

    /// The open half-circle I₊ = {cos ψ > 0} = (−π/2, π/2).
    pub fn half_circle_plus() -> Self {
        Interval {
            lo: 1.5 * std::f64::consts::PI,
            length: std::f64::consts::PI,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        (self.lo + self.length).rem_euclid(TAU)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_full(&self) -> bool {
        self.length == TAU
    }

    pub fn contains(&self, psi: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let d = (psi - self.lo).rem_euclid(TAU);
        0.0 < d && d < self.length
    }

    /// Interior of the complement arc.
    pub fn complement(&self) -> Result<Interval> {
        if self.is_full() {
            return Err(Error::Domain("full circle has empty complement".into()));
        }
        Ok(Interval {
            lo: self.hi(),
            length: TAU - self.length,
        })
    }

    pub fn rotated(&self, alpha: f64) -> Interval {
        Interval {
            lo: (self.lo + alpha).rem_euclid(TAU),
            length: self.length,
        }
    }

    /// ψ values of n uniform interior samples.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (self.lo + self.length * (i as f64 + 0.5) / n as f64).rem_euclid(TAU))
            .collect()
    }
}

/// Γ(g·I) ∩ S¹: the causal shadow on the Cauchy circle of the transported
/// arc. ψ is scanned on an n_grid circle grid and the two arc endpoints
/// are refined by bisection; the supremum of the causal margin over the
/// source arc is exact, since −⟨g·x(φ), y(ψ)⟩ is a degree-1 trigonometric
/// polynomial in φ (pointwise sampling of gI would miss spacelike
/// tangencies such as g = identity, where the cones meet S¹ in single
/// points).
pub fn dod_interval(g: &GroupElement, interval: &Interval, n_grid: usize) -> Result<Interval> {
    if n_grid < 64 {
        return Err(Error::Domain(format!(
            "dod_interval needs n_grid >= 64, got {n_grid}"
        )));
    }
    // shadow angles are radius-independent; the margin works at r = 1
    let col1 = g.matrix.column(1).into_owned();
    let col2 = g.matrix.column(2).into_owned();

    // margin(ψ) >= 0 iff some point of the closed arc g·x(Ī) is causally
    // related to x(ψ): sup over φ of A sin φ + B cos φ minus the threshold
    let margin = |psi: f64| -> f64 {
        let y = Vector3::new(0.0, psi.sin(), psi.cos());
        let a = -minkowski_dot(&col1, &y);
        let b = -minkowski_dot(&col2, &y);
        let phi_star = a.atan2(b);
        let sup = if interval.is_full() || interval.contains(phi_star) {
            (a * a + b * b).sqrt()
        } else {
            let at = |phi: f64| a * phi.sin() + b * phi.cos();
            at(interval.lo()).max(at(interval.hi()))
        };
        sup - (1.0 - 1e-12)
    };

    let flags: Vec<bool> = (0..n_grid)
        .map(|j| margin(TAU * j as f64 / n_grid as f64) >= 0.0)
        .collect();
    let inside = flags.iter().filter(|&&f| f).count();
    if inside == 0 {
        return Err(Error::DisconnectedResult);
    }
    if inside == n_grid {
        return Ok(Interval::full());
    }
    // the true set must be one cyclic run
    let transitions = (0..n_grid)
        .filter(|&j| flags[j] != flags[(j + 1) % n_grid])
        .count();
    if transitions != 2 {
        return Err(Error::DisconnectedResult);
    }
    let rise = (0..n_grid)
        .find(|&j| !flags[j] && flags[(j + 1) % n_grid])
        .expect("two transitions exist");
    let fall = (0..n_grid)
        .find(|&j| flags[j] && !flags[(j + 1) % n_grid])
        .expect("two transitions exist");

    // refine each boundary inside its bracketing grid cell
    let step = TAU / n_grid as f64;
    let refine = |out_idx: usize, in_idx: usize| -> f64 {
        let mut a = TAU * out_idx as f64 / n_grid as f64; // margin < 0
        let mut b = TAU * in_idx as f64 / n_grid as f64; // margin >= 0
        if (b - a).abs() > 1.5 * step {
            // wrapped cell
            b = a + step;
        }
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if margin(mid) >= 0.0 {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    };
    let lo = refine(rise, rise + 1);
    let hi = refine(fall + 1, fall); // outer point is fall+1, inner is fall
    Interval::new(lo, hi)
}

/// Region kinds with base on the Cauchy circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Wedge,
    DoubleCone,
}

/// A wedge g·W₁ or a double cone / its causal complement with base arc on
/// S¹, mapped by `generator`.
#[derive(Debug, Clone)]
pub struct Region {
    pub kind: RegionKind,
    pub generator: GroupElement,
    /// Base arc on S¹ for regions whose base lies there (always present
    /// for double cones; for wedges it is the base of the reference W₁
    /// image, length π).
    pub base_interval: Option<Interval>,
    pub radius: f64,
}

impl Region {
    /// The reference wedge W₁ = {x₂ > |x₀|}.
    pub fn wedge_w1(radius: f64) -> Self {
        Region {
            kind: RegionKind::Wedge,
            generator: GroupElement::identity(),
            base_interval: Some(Interval::half_circle_plus()),
            radius,
        }
    }

    /// The rotated wedge W(α) = R₀(α) W₁.
    pub fn wedge(alpha: f64, radius: f64) -> Self {
        Region {
            kind: RegionKind::Wedge,
            generator: rotation(alpha),
            base_interval: Some(Interval::half_circle_plus().rotated(alpha)),
            radius,
        }
    }

    /// Double cone O_I = I″ over an arc; arcs longer than π arise only as
    /// causal complements and are handled through the spacelike test.
    pub fn double_cone(interval: Interval, radius: f64) -> Result<Self> {
        if interval.is_full() {
            return Err(Error::Domain("double cone over the full circle".into()));
        }
        Ok(Region {
            kind: RegionKind::DoubleCone,
            generator: GroupElement::identity(),
            base_interval: Some(interval),
            radius,
        })
    }

    pub fn transformed(&self, g: &GroupElement) -> Region {
        Region {
            kind: self.kind,
            generator: g.compose(&self.generator),
            base_interval: self.base_interval,
            radius: self.radius,
        }
    }
}

fn in_wedge_w1(y: &Vector3<f64>) -> bool {
    y[2] > y[0].abs()
}

/// Is x spacelike from every point of the closed arc Ī?  The extremum of
/// ⟨x, y(φ)⟩ = x₀·0 − r(x₁ sin φ + x₂ cos φ) over φ ∈ Ī is taken either at
/// the unconstrained optimum or at an endpoint.
fn spacelike_from_closed_arc(x: &Vector3<f64>, interval: &Interval, radius: f64) -> bool {
    // causal relation to y(φ) iff A sin φ + B cos φ >= r (A = x₁, B = x₂,
    // after dividing by -r); maximize over the closed arc
    let a = x[1];
    let b = x[2];
    let r = radius * (1.0 - CAUSAL_SLACK);
    let amp = (a * a + b * b).sqrt();
    let phi_star = a.atan2(b);
    let mut best = f64::NEG_INFINITY;
    if interval.contains(phi_star) || interval.is_full() {
        best = amp;
    } else {
        for phi in [interval.lo(), interval.hi()] {
            best = best.max(a * phi.sin() + b * phi.cos());
        }
    }
    best < r
}

/// Membership test by pull-back with the generator.
pub fn region_contains(region: &Region, x: &DSPoint) -> Result<bool> {
    if (x.radius - region.radius).abs() > 1e-10 * x.radius.max(region.radius) {
        return Err(Error::MismatchedRadius(x.radius, region.radius));
    }
    let y = region.generator.inverse().apply(x);
    match region.kind {
        RegionKind::Wedge => Ok(in_wedge_w1(&y.x)),
        RegionKind::DoubleCone => {
            let interval = region
                .base_interval
                .ok_or_else(|| Error::Domain("double cone without base interval".into()))?;
            if interval.length() <= std::f64::consts::PI {
                // O_I = W(hi − π/2) ∩ W(lo + π/2)
                let w_a = Region::wedge(interval.hi() - std::f64::consts::FRAC_PI_2, region.radius);
                let w_b = Region::wedge(interval.lo() + std::f64::consts::FRAC_PI_2, region.radius);
                Ok(region_contains(&w_a, &y)? && region_contains(&w_b, &y)?)
            } else {
                // long arcs are complements: x ∈ O_J iff x is spacelike
                // from the closed complementary arc
                let co = interval.complement()?;
                Ok(spacelike_from_closed_arc(&y.x, &co, region.radius))
            }
        }
    }
}

/// The causal complement: for a wedge the R₀(π)-rotated wedge conjugated
/// by the generator; for a double cone the region over the interior of
/// the complement arc.
pub fn spacelike_complement(region: &Region) -> Result<Region> {
    match region.kind {
        RegionKind::Wedge => {
            let rotated = Region {
                kind: RegionKind::Wedge,
                generator: region.generator.compose(&rotation(std::f64::consts::PI)),
                base_interval: region
                    .base_interval
                    .map(|i| i.rotated(std::f64::consts::PI)),
                radius: region.radius,
            };
            Ok(rotated)
        }
        RegionKind::DoubleCone => {
            let interval = region
                .base_interval
                .ok_or_else(|| Error::Domain("double cone without base interval".into()))?;
            Ok(Region {
                kind: RegionKind::DoubleCone,
                generator: region.generator.clone(),
                base_interval: Some(interval.complement()?),
                radius: region.radius,
            })
        }
    }
}
