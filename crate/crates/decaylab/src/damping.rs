//! Damping profiles on the torus `[-π, π)²`: support geometry, evaluation,
//! boundary distances, derivative-bound verification, and the level-set
//! measure function.

use crate::error::{Error, Result};
use crate::expr::{GrowthExpr, Orientation};
use crate::rate::numeric_envelope_inverse;

pub const TWO_PI: f64 = std::f64::consts::TAU;
pub const PI: f64 = std::f64::consts::PI;

/// Wraps a coordinate into `[-π, π)`.
pub fn wrap(x: f64) -> f64 {
    let mut y = (x + PI).rem_euclid(TWO_PI) - PI;
    if y >= PI {
        y -= TWO_PI;
    }
    y
}

/// Shape of the support of the damping, lengths in torus coordinates.
#[derive(Clone, Debug)]
pub enum SupportGeometry {
    /// `W = 0` on the strip `|x| <= sigma`, positive outside.
    Strip { sigma: f64 },
    /// `W = 0` only on the geodesic `x = 0`.
    ThinLine,
    /// `W = 0` on the cross `|x| <= sigma1 or |y| <= sigma2`; the support is
    /// the rectangle around the antipode.
    Rectangle { sigma1: f64, sigma2: f64 },
    /// `W > 0` inside the disk.
    Disk { center: (f64, f64), radius: f64 },
    /// `W > 0` inside the Lamé curve `|x/a|^n + |y/b|^m < 1`.
    SuperEllipse { a: f64, b: f64, n: f64, m: f64 },
}

impl SupportGeometry {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            SupportGeometry::Strip { sigma } => (0.0..PI).contains(sigma) && *sigma > 0.0,
            SupportGeometry::ThinLine => true,
            SupportGeometry::Rectangle { sigma1, sigma2 } => {
                *sigma1 > 0.0 && *sigma1 < PI && *sigma2 > 0.0 && *sigma2 < PI
            }
            SupportGeometry::Disk { radius, .. } => *radius > 0.0 && *radius < PI,
            SupportGeometry::SuperEllipse { a, b, n, m } => {
                *a > 0.0 && *a < PI && *b > 0.0 && *b < PI && *n >= *m && *m >= 2.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("bad geometry {self:?}")))
        }
    }

    /// Positive inside the support, negative outside; continuous along any
    /// line on the torus. Not a distance, just a margin for root finding.
    pub fn inside_margin(&self, p: (f64, f64)) -> f64 {
        let (x, y) = (wrap(p.0), wrap(p.1));
        match self {
            SupportGeometry::Strip { sigma } => x.abs() - sigma,
            SupportGeometry::ThinLine => x.abs(),
            SupportGeometry::Rectangle { sigma1, sigma2 } => {
                (x.abs() - sigma1).min(y.abs() - sigma2)
            }
            SupportGeometry::Disk { center, radius } => {
                let dx = wrap(x - center.0);
                let dy = wrap(y - center.1);
                radius - (dx * dx + dy * dy).sqrt()
            }
            SupportGeometry::SuperEllipse { a, b, n, m } => {
                1.0 - (x / a).abs().powf(*n) - (y / b).abs().powf(*m)
            }
        }
    }

    /// Largest distance from an interior point to the support boundary.
    pub fn max_interior_distance(&self) -> f64 {
        match self {
            SupportGeometry::Strip { sigma } => PI - sigma,
            SupportGeometry::ThinLine => PI,
            SupportGeometry::Rectangle { sigma1, sigma2 } => (PI - sigma1).min(PI - sigma2),
            SupportGeometry::Disk { radius, .. } => *radius,
            SupportGeometry::SuperEllipse { a, b, .. } => a.min(*b),
        }
    }

    /// Euclidean distance to the support boundary `Σ(W)` for points inside
    /// the support (0 outside). Closed-form except for the super-ellipse,
    /// which minimizes over the boundary parametrization with multistart
    /// plus golden-section refinement.
    pub fn dist_to_boundary(&self, p: (f64, f64)) -> f64 {
        let (x, y) = (wrap(p.0), wrap(p.1));
        match self {
            SupportGeometry::Strip { sigma } => (x.abs() - sigma).max(0.0),
            SupportGeometry::ThinLine => x.abs(),
            SupportGeometry::Rectangle { sigma1, sigma2 } => {
                (x.abs() - sigma1).max(0.0).min((y.abs() - sigma2).max(0.0))
            }
            SupportGeometry::Disk { center, radius } => {
                let dx = wrap(x - center.0);
                let dy = wrap(y - center.1);
                (radius - (dx * dx + dy * dy).sqrt()).max(0.0)
            }
            SupportGeometry::SuperEllipse { a, b, n, m } => {
                if self.inside_margin((x, y)) <= 0.0 {
                    return 0.0;
                }
                superellipse_distance(*a, *b, *n, *m, (x.abs(), y.abs()))
            }
        }
    }
}

/// Boundary point of the first-quadrant arc of the Lamé curve.
pub fn superellipse_point(a: f64, b: f64, n: f64, m: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (a * c.abs().powf(2.0 / n), b * s.abs().powf(2.0 / m))
}

/// Distance from a first-quadrant interior point to the Lamé curve.
/// Multistart coarse scan over the boundary parameter followed by
/// golden-section refinement of the best local minima.
pub fn superellipse_distance(a: f64, b: f64, n: f64, m: f64, p: (f64, f64)) -> f64 {
    let d2 = |theta: f64| -> f64 {
        let (bx, by) = superellipse_point(a, b, n, m, theta);
        let (dx, dy) = (p.0 - bx, p.1 - by);
        dx * dx + dy * dy
    };
    const SEEDS: usize = 32;
    let half_pi = PI / 2.0;
    let vals: Vec<f64> = (0..=SEEDS)
        .map(|i| d2(half_pi * i as f64 / SEEDS as f64))
        .collect();
    // local minima of the coarse scan (including endpoints) seed refinement
    let mut cands: Vec<usize> = Vec::new();
    for i in 0..=SEEDS {
        let left = if i == 0 { f64::INFINITY } else { vals[i - 1] };
        let right = if i == SEEDS { f64::INFINITY } else { vals[i + 1] };
        if vals[i] <= left && vals[i] <= right {
            cands.push(i);
        }
    }
    let mut best = f64::INFINITY;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for i in cands {
        let mut lo = half_pi * (i.saturating_sub(1)) as f64 / SEEDS as f64;
        let mut hi = half_pi * ((i + 1).min(SEEDS)) as f64 / SEEDS as f64;
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let (mut f1, mut f2) = (d2(x1), d2(x2));
        for _ in 0..60 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = d2(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = d2(x2);
            }
        }
        best = best.min(f1.min(f2));
    }
    best.sqrt()
}

/// Evaluable damping: support geometry plus growth in the boundary
/// coordinate. For rectangles the damping is the product of an x-factor and
/// a y-factor.
#[derive(Clone, Debug)]
pub struct DampingProfile {
    geometry: SupportGeometry,
    growth: GrowthExpr,
    growth_y: Option<GrowthExpr>,
    /// C^∞ saturation scale for the boundary coordinate (flattens the
    /// profile away from Σ(W) so the torus cell stays smooth); `None`
    /// falls back to a hard cap.
    smoothing: Option<f64>,
    /// plain cap on the boundary coordinate, keeps log factors defined
    arg_cap: f64,
    /// threshold below which derivative bounds are asserted
    eps1: f64,
}

fn growth_cap(geometry: &SupportGeometry, growth: &GrowthExpr) -> f64 {
    let mut cap = 0.45 * geometry.max_interior_distance();
    if !growth.log_pow().is_zero() || growth.nested().is_some() {
        cap = cap.min(0.4);
    }
    cap
}

/// `C^∞` monotone saturation: identity below `r/2`, constant `3r/4`
/// beyond `r`.
fn smooth_sat(d: f64, r: f64) -> f64 {
    if d <= r / 2.0 {
        return d;
    }
    if d >= r {
        return 0.75 * r;
    }
    // s(d) = d − ∫_{r/2}^{d} step((v − r/2)/(r/2)) dv with the standard
    // exp-bump smooth step
    let nodes = 64;
    let hseg = (d - r / 2.0) / nodes as f64;
    let mut acc = 0.0;
    for i in 0..nodes {
        let v = r / 2.0 + (i as f64 + 0.5) * hseg;
        acc += smooth_step((v - r / 2.0) / (r / 2.0));
    }
    d - acc * hseg
}

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let bump = |u: f64| (-1.0 / u).exp();
        bump(t) / (bump(t) + bump(1.0 - t))
    }
}

impl DampingProfile {
    pub fn new(geometry: SupportGeometry, growth: GrowthExpr) -> Result<Self> {
        Self::with_options(geometry, growth, None, None, None)
    }

    /// Rectangle profile `W = g_x(X)·g_y(Y)`.
    pub fn rectangle(
        sigma1: f64,
        sigma2: f64,
        growth_x: GrowthExpr,
        growth_y: GrowthExpr,
    ) -> Result<Self> {
        let geometry = SupportGeometry::Rectangle { sigma1, sigma2 };
        geometry.validate()?;
        if growth_x.orientation() != Orientation::SmallArg
            || growth_y.orientation() != Orientation::SmallArg
        {
            return Err(Error::OrientationMismatch);
        }
        let arg_cap = growth_cap(&geometry, &growth_x).min(growth_cap(&geometry, &growth_y));
        let mut profile = DampingProfile {
            geometry,
            growth: growth_x,
            growth_y: Some(growth_y),
            smoothing: None,
            arg_cap,
            eps1: 0.0,
        };
        profile.eps1 = profile.default_eps1();
        Ok(profile)
    }

    pub fn with_options(
        geometry: SupportGeometry,
        growth: GrowthExpr,
        smoothing: Option<f64>,
        eps1: Option<f64>,
        arg_cap: Option<f64>,
    ) -> Result<Self> {
        geometry.validate()?;
        if growth.orientation() != Orientation::SmallArg {
            return Err(Error::OrientationMismatch);
        }
        let cap = arg_cap.unwrap_or_else(|| growth_cap(&geometry, &growth));
        let smoothing = smoothing.map(|r| r.min(cap).max(1e-6));
        let mut profile = DampingProfile {
            geometry,
            growth,
            growth_y: None,
            smoothing,
            arg_cap: cap,
            eps1: 0.0,
        };
        profile.eps1 = eps1.unwrap_or_else(|| profile.default_eps1());
        Ok(profile)
    }

    /// Default derivative-bound threshold: the damping value at distance
    /// 0.1 into the support.
    fn default_eps1(&self) -> f64 {
        self.growth_value(0.1f64.min(self.arg_cap))
    }

    pub fn geometry(&self) -> &SupportGeometry {
        &self.geometry
    }
    pub fn growth(&self) -> &GrowthExpr {
        &self.growth
    }
    pub fn eps1(&self) -> f64 {
        self.eps1
    }
    pub fn set_eps1(&mut self, eps1: f64) {
        self.eps1 = eps1;
    }

    pub fn is_y_invariant(&self) -> bool {
        matches!(
            self.geometry,
            SupportGeometry::Strip { .. } | SupportGeometry::ThinLine
        )
    }

    fn saturate(&self, d: f64) -> f64 {
        match self.smoothing {
            Some(r) => smooth_sat(d, r),
            None => d.min(self.arg_cap),
        }
    }

    fn growth_value(&self, d: f64) -> f64 {
        eval_growth_factor(&self.growth, self.saturate(d))
    }

    /// `W` at a torus point. Zero outside the support; inside, the growth
    /// expression evaluated at the (saturated) boundary coordinate.
    pub fn eval(&self, p: (f64, f64)) -> f64 {
        match &self.geometry {
            SupportGeometry::Rectangle { sigma1, sigma2 } => {
                let gx = (wrap(p.0).abs() - sigma1).max(0.0);
                let gy = (wrap(p.1).abs() - sigma2).max(0.0);
                if gx <= 0.0 || gy <= 0.0 {
                    return 0.0;
                }
                eval_growth_factor(&self.growth, self.saturate(gx))
                    * eval_growth_factor(
                        self.growth_y.as_ref().unwrap_or(&self.growth),
                        self.saturate(gy),
                    )
            }
            _ => {
                let d = self.geometry.dist_to_boundary(p);
                if d <= 0.0 {
                    0.0
                } else {
                    self.growth_value(d)
                }
            }
        }
    }

    /// Trace along `y = 0` (for y-invariant profiles this is the full data).
    pub fn eval_1d(&self, x: f64) -> f64 {
        self.eval((x, 0.0))
    }

    /// Maximum of the (saturated) profile.
    pub fn max_value(&self) -> f64 {
        match &self.geometry {
            SupportGeometry::Rectangle { .. } => {
                let d = self.geometry.max_interior_distance();
                eval_growth_factor(&self.growth, self.saturate(d))
                    * eval_growth_factor(
                        self.growth_y.as_ref().unwrap_or(&self.growth),
                        self.saturate(d),
                    )
            }
            _ => self.growth_value(self.geometry.max_interior_distance()),
        }
    }
}

fn eval_growth_factor(growth: &GrowthExpr, d: f64) -> f64 {
    if growth.is_constant() {
        return growth.coeff().to_f64();
    }
    if d <= 0.0 {
        return 0.0;
    }
    growth.eval(d).unwrap_or(0.0)
}

/// Report of [`verify_dbc`].
#[derive(Clone, Debug)]
pub struct DbcReport {
    /// smallest constant with `|∇W| ≤ C_q · W / q(W)` on the grid
    pub c_q: f64,
    /// same for the second-derivative bound, when `p` was supplied
    pub c_p: Option<f64>,
    pub max_violation_point: (f64, f64),
    pub grid_n: usize,
    /// number of grid points with `0 < W ≤ ε₁`
    pub eligible: usize,
}

/// Measures the derivative-bound constants `sup |∇W|·q(W)/W` (and
/// `sup |∇²W|·p(W)/W`) over grid points with `0 < W ≤ ε₁`, using centered
/// finite differences at step `2π/grid_n`. Infinite values are reported as
/// such; stability of `c_q` under grid refinement certifies the bound.
pub fn verify_dbc(
    profile: &DampingProfile,
    q: &GrowthExpr,
    p: Option<&GrowthExpr>,
    grid_n: usize,
) -> Result<DbcReport> {
    if grid_n < 256 {
        return Err(Error::InvalidParameter(
            "grid_n must be at least 256".into(),
        ));
    }
    let h = TWO_PI / grid_n as f64;
    let eval_q = |w: f64| q.eval(w).unwrap_or(f64::INFINITY);
    let eval_p = |w: f64| -> f64 {
        p.map(|p| p.eval(w).unwrap_or(f64::INFINITY))
            .unwrap_or(f64::NAN)
    };
    let mut c_q = 0.0f64;
    let mut c_p = 0.0f64;
    let mut worst = (0.0, 0.0);
    let mut eligible = 0usize;

    let mut consider = |pt: (f64, f64), w: f64, grad: f64, hess: f64| {
        if w <= 0.0 || w > profile.eps1 {
            return;
        }
        eligible += 1;
        let rq = grad * eval_q(w) / w;
        if rq > c_q {
            c_q = rq;
            worst = pt;
        }
        if p.is_some() {
            let rp = hess * eval_p(w) / w;
            if rp > c_p {
                c_p = rp;
            }
        }
    };

    if profile.is_y_invariant() {
        for i in 0..grid_n {
            let x = -PI + i as f64 * h;
            let w = profile.eval_1d(x);
            let (wl, wr) = (profile.eval_1d(x - h), profile.eval_1d(x + h));
            let grad = ((wr - wl) / (2.0 * h)).abs();
            let hess = ((wr - 2.0 * w + wl) / (h * h)).abs();
            consider((x, 0.0), w, grad, hess);
        }
    } else {
        for i in 0..grid_n {
            let x = -PI + i as f64 * h;
            for j in 0..grid_n {
                let y = -PI + j as f64 * h;
                let w = profile.eval((x, y));
                if w <= 0.0 || w > profile.eps1 {
                    continue;
                }
                let wxp = profile.eval((x + h, y));
                let wxm = profile.eval((x - h, y));
                let wyp = profile.eval((x, y + h));
                let wym = profile.eval((x, y - h));
                let gx = (wxp - wxm) / (2.0 * h);
                let gy = (wyp - wym) / (2.0 * h);
                let grad = (gx * gx + gy * gy).sqrt();
                let hxx = (wxp - 2.0 * w + wxm) / (h * h);
                let hyy = (wyp - 2.0 * w + wym) / (h * h);
                let wpp = profile.eval((x + h, y + h));
                let wpm = profile.eval((x + h, y - h));
                let wmp = profile.eval((x - h, y + h));
                let wmm = profile.eval((x - h, y - h));
                let hxy = (wpp - wpm - wmp + wmm) / (4.0 * h * h);
                let hess = (hxx * hxx + hyy * hyy + 2.0 * hxy * hxy).sqrt();
                consider((x, y), w, grad, hess);
            }
        }
    }
    Ok(DbcReport {
        c_q,
        c_p: p.map(|_| c_p),
        max_violation_point: worst,
        grid_n,
        eligible,
    })
}

/// The measure `ϝ(ζ) = μ({x ∈ S¹ : 0 < V(x) ≤ ζ})` for y-invariant
/// profiles: twice the level-set coordinate, found by bisection of the
/// (monotone) growth away from the support boundary.
pub fn digamma(profile: &DampingProfile, zeta: f64) -> Result<f64> {
    if !profile.is_y_invariant() {
        return Err(Error::InvalidParameter(
            "digamma requires a y-invariant profile".into(),
        ));
    }
    if zeta <= 0.0 {
        return Ok(0.0);
    }
    let d_max = profile.geometry.max_interior_distance();
    let support_measure = 2.0 * d_max;
    if zeta >= profile.max_value() {
        return Ok(support_measure.min(TWO_PI));
    }
    // the growth is increasing in the boundary coordinate up to saturation;
    // the level-set edge is the inverse of the growth at ζ
    let f = |d: f64| profile.growth_value(d);
    let lo = 1e-13;
    if f(lo) >= zeta {
        return Ok(0.0);
    }
    let d_star = numeric_envelope_inverse(f, zeta, (lo, d_max))?;
    Ok((2.0 * d_star).min(TWO_PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use approx::assert_relative_eq;

    fn power_growth(beta: i64) -> GrowthExpr {
        GrowthExpr::small(Scalar::one(), Scalar::from_int(beta), Scalar::zero()).unwrap()
    }

    fn exp_growth(c: i64, alpha: i64) -> GrowthExpr {
        GrowthExpr::small_exp(
            Scalar::one(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::from_int(c),
            Scalar::from_int(alpha),
        )
        .unwrap()
    }

    #[test]
    fn strip_evaluation() {
        let p =
            DampingProfile::new(SupportGeometry::Strip { sigma: 1.0 }, power_growth(2)).unwrap();
        assert_relative_eq!(p.eval((1.5, 0.3)), 0.25, max_relative = 1e-14);
        assert_eq!(p.eval((0.5, 2.0)), 0.0);
        // y-invariance
        for y in [-3.0, 0.0, 1.7] {
            assert_eq!(p.eval((1.5, y)), p.eval((1.5, 0.0)));
        }
    }

    #[test]
    fn disk_evaluation() {
        let p = DampingProfile::new(
            SupportGeometry::Disk {
                center: (0.0, 0.0),
                radius: 1.0,
            },
            power_growth(2),
        )
        .unwrap();
        assert_relative_eq!(p.eval((0.9, 0.0)), 0.01, max_relative = 1e-12);
        assert_eq!(p.eval((1.2, 0.0)), 0.0);
    }

    #[test]
    fn disk_distance_closed_form() {
        let g = SupportGeometry::Disk {
            center: (0.0, 0.0),
            radius: 1.0,
        };
        assert_relative_eq!(g.dist_to_boundary((0.7, 0.0)), 0.3, max_relative = 1e-14);
        assert_eq!(g.dist_to_boundary((1.5, 0.0)), 0.0);
    }

    #[test]
    fn superellipse_reduces_to_circle() {
        let g = SupportGeometry::SuperEllipse {
            a: 1.0,
            b: 1.0,
            n: 2.0,
            m: 2.0,
        };
        let d = g.dist_to_boundary((0.7, 0.0));
        assert_relative_eq!(d, 0.3, max_relative = 1e-9);
        let d = g.dist_to_boundary((0.3, 0.4));
        assert_relative_eq!(d, 0.5, max_relative = 1e-9);
    }

    #[test]
    fn superellipse_distance_near_flat_point() {
        // boundary crosses (1, 0); distance from (0.9, 0) comparable to 0.1
        let g = SupportGeometry::SuperEllipse {
            a: 1.0,
            b: 1.0,
            n: 4.0,
            m: 4.0,
        };
        let d = g.dist_to_boundary((0.9, 0.0));
        assert!((d - 0.1).abs() < 1e-6, "d = {d}");
    }

    #[test]
    fn superellipse_distance_matches_dense_sampling() {
        let (a, b, n, m) = (1.2, 0.8, 4.0, 2.5);
        let g = SupportGeometry::SuperEllipse { a, b, n, m };
        let dense = |p: (f64, f64)| -> f64 {
            let mut best = f64::INFINITY;
            let nn = 400_000;
            for i in 0..=nn {
                let th = PI / 2.0 * i as f64 / nn as f64;
                let (bx, by) = superellipse_point(a, b, n, m, th);
                let d2 = (p.0 - bx).powi(2) + (p.1 - by).powi(2);
                best = best.min(d2);
            }
            best.sqrt()
        };
        let mut rng = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut tested = 0;
        while tested < 200 {
            let p = (next() * a, next() * b);
            if g.inside_margin(p) <= 1e-3 {
                continue;
            }
            tested += 1;
            let fast = g.dist_to_boundary(p);
            let slow = dense(p);
            assert!(
                (fast - slow).abs() <= 1e-6 * slow.max(1e-9) + 1e-9,
                "p={p:?} fast={fast} slow={slow}"
            );
        }
    }

    #[test]
    fn rectangle_product_structure() {
        let p = DampingProfile::rectangle(1.0, 1.5, power_growth(1), power_growth(2)).unwrap();
        // X = 0.5, Y = 0.5 at (1.5, 2.0)
        assert_relative_eq!(p.eval((1.5, 2.0)), 0.5 * 0.25, max_relative = 1e-12);
        assert_eq!(p.eval((0.5, 2.0)), 0.0);
        assert_eq!(p.eval((1.5, 1.0)), 0.0);
    }

    #[test]
    fn verify_dbc_power_profile() {
        // W = d^β with q = z^{1/β}: C_q ≈ β
        let p =
            DampingProfile::new(SupportGeometry::Strip { sigma: 1.0 }, power_growth(2)).unwrap();
        let q = GrowthExpr::small(Scalar::one(), Scalar::ratio(1, 2), Scalar::zero()).unwrap();
        let rep = verify_dbc(&p, &q, None, 1024).unwrap();
        assert!(rep.eligible > 0);
        assert!((rep.c_q - 2.0).abs() < 0.2, "c_q = {}", rep.c_q);
        // stability under refinement
        let rep2 = verify_dbc(&p, &q, None, 4096).unwrap();
        let ratio = rep.c_q / rep2.c_q;
        assert!((0.5..2.0).contains(&ratio));
    }

    #[test]
    fn verify_dbc_exponential_profile() {
        // W = exp(-d^{-1}), q = ln(1/z)^{-2}: C_q finite
        let p =
            DampingProfile::new(SupportGeometry::Strip { sigma: 1.0 }, exp_growth(1, 1)).unwrap();
        let q = GrowthExpr::small(Scalar::one(), Scalar::zero(), Scalar::from_int(-2)).unwrap();
        let rep = verify_dbc(&p, &q, None, 1024).unwrap();
        assert!(rep.c_q.is_finite());
        assert!(rep.c_q < 10.0, "c_q = {}", rep.c_q);
        let rep2 = verify_dbc(&p, &q, None, 4096).unwrap();
        assert!((rep.c_q / rep2.c_q - 1.0).abs() < 0.5);
    }

    #[test]
    fn verify_dbc_detects_wrong_q() {
        // W = d^2 with too-strong q = z^{1/3}: sup grows under refinement
        let p =
            DampingProfile::new(SupportGeometry::Strip { sigma: 1.0 }, power_growth(2)).unwrap();
        let q = GrowthExpr::small(Scalar::one(), Scalar::ratio(1, 3), Scalar::zero()).unwrap();
        let c1 = verify_dbc(&p, &q, None, 256).unwrap().c_q;
        let c2 = verify_dbc(&p, &q, None, 1024).unwrap().c_q;
        let c3 = verify_dbc(&p, &q, None, 4096).unwrap().c_q;
        assert!(c2 > 1.3 * c1, "{c1} {c2} {c3}");
        assert!(c3 > 1.3 * c2, "{c1} {c2} {c3}");
    }

    #[test]
    fn digamma_examples() {
        // V = (|x|-σ)₊², ζ = 0.01 → two intervals of length 0.1
        let p =
            DampingProfile::new(SupportGeometry::Strip { sigma: 1.0 }, power_growth(2)).unwrap();
        assert_relative_eq!(digamma(&p, 0.01).unwrap(), 0.2, max_relative = 1e-9);
        // V = exp(-1/d), ζ = e^{-10} → d* = 0.1 each side
        let p =
            DampingProfile::new(SupportGeometry::Strip { sigma: 1.0 }, exp_growth(1, 1)).unwrap();
        assert_relative_eq!(
            digamma(&p, (-10.0f64).exp()).unwrap(),
            0.2,
            max_relative = 1e-9
        );
        // ζ above the max: full support measure
        let p =
            DampingProfile::new(SupportGeometry::Strip { sigma: 1.0 }, power_growth(2)).unwrap();
        let full = digamma(&p, 1e9).unwrap();
        assert_relative_eq!(full, 2.0 * (PI - 1.0), max_relative = 1e-12);
    }

    #[test]
    fn digamma_monotone_and_bounded() {
        let p =
            DampingProfile::new(SupportGeometry::Strip { sigma: 2.0 }, power_growth(3)).unwrap();
        let mut prev = 0.0;
        for k in (-12..0).map(|e| 10f64.powi(e)) {
            let v = digamma(&p, k).unwrap();
            assert!(v >= prev - 1e-12);
            assert!(v <= TWO_PI);
            prev = v;
        }
    }

    #[test]
    fn smoothing_flattens_far_side() {
        let g = GrowthExpr::small(Scalar::one(), Scalar::ratio(3, 2), Scalar::zero()).unwrap();
        let p = DampingProfile::with_options(
            SupportGeometry::Strip { sigma: 1.0 },
            g,
            Some(0.5),
            None,
            None,
        )
        .unwrap();
        // constant beyond the saturation scale, untouched near the boundary
        assert_relative_eq!(p.eval((1.1, 0.0)), 0.1f64.powf(1.5), max_relative = 1e-12);
        let far1 = p.eval((2.2, 0.0));
        let far2 = p.eval((3.0, 0.0));
        assert_relative_eq!(far1, far2, max_relative = 1e-12);
    }

    #[test]
    fn wrap_is_periodic() {
        assert_relative_eq!(wrap(3.0 * PI), -PI, max_relative = 1e-12);
        assert!(wrap(PI) < PI);
        assert_relative_eq!(wrap(-PI), -PI, max_relative = 1e-12);
    }
}
