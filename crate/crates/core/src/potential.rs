//! The measures `μ_r`, logarithmic potentials, weighted energies and the
//! balayage identities.
//!
//! `μ_r` is the pullback of `dθ/2π` under `φ(z) = z e^{1−z}` restricted to
//! `Γ_r`. For `r > 0` the map `θ ↦ z(θ)` is analytic in a strip of
//! half-width `r`, so equal weights on a uniform `θ` grid converge like
//! `e^{−rM}`. At `r = 0` the curve has a corner at `z = 1` where `z(θ)`
//! behaves like `|θ|^{1/2}`; there the nodes are graded towards `θ = 0`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::roots::DiscreteMeasure;
use crate::scalar::{cabs, lit, Real};
use crate::szego::{self, locate, phi_map, trace_level_curve, LevelCurve, RegionTag, Tracer};

/// A level `r ∈ [0, ∞]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Level<T> {
    Finite(T),
    /// `Γ_∞ = {0}` and `μ_∞ = δ₀`.
    Infinite,
}

impl<T: Real> Level<T> {
    pub fn finite(r: T) -> Result<Self> {
        if !r.is_finite() || r < T::zero() {
            return Err(Error::InvalidParameter(
                "level r must be finite and non-negative".into(),
            ));
        }
        Ok(Level::Finite(r))
    }
}

/// Placement of the `θ` nodes used to discretize `μ_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeLaw {
    /// `θ_j = 2πj/M`, weights `1/M`.
    Uniform,
    /// Sigmoidal grading of order 8 towards `θ = 0`, weights `g'(s_j)/M`.
    Graded,
}

impl NodeLaw {
    /// Uniform nodes once `e^{−rM}` is below the working epsilon.
    pub fn auto<T: Real>(r: &T, nodes: usize) -> NodeLaw {
        let bits = T::epsilon().ln().abs();
        let decay = r.clone() * T::from_usize(nodes).unwrap();
        if decay >= bits {
            NodeLaw::Uniform
        } else {
            NodeLaw::Graded
        }
    }
}

const GRADING_ORDER: i32 = 8;

/// Sigmoidal map `g: [0, 2π] → [0, 2π]` with `g^{(j)}(0) = 0` for `j < 8`,
/// and its derivative.
fn grading<T: Real>(s: &T) -> (T, T) {
    let pi = T::pi();
    let two_pi = pi.clone() + pi.clone();
    let p = lit::<T>(GRADING_ORDER as f64);
    let inv_p = T::one() / p.clone();
    let half = lit::<T>(0.5);
    let three = lit::<T>(3.0);
    let v = |s: &T| -> T {
        let t = (s.clone() - pi.clone()) / pi.clone();
        (inv_p.clone() - half.clone()) * (-t.clone()).powi(3) + inv_p.clone() * t + half.clone()
    };
    let dv = |s: &T| -> T {
        let t = (s.clone() - pi.clone()) / pi.clone();
        (-(inv_p.clone() - half.clone()) * three.clone() * t.clone() * t + inv_p.clone()) / pi.clone()
    };
    let mirror = two_pi.clone() - s.clone();
    let (va, vb) = (v(s), v(&mirror));
    let a = va.powi(GRADING_ORDER);
    let b = vb.powi(GRADING_ORDER);
    let denom = a.clone() + b.clone();
    let g = two_pi.clone() * a.clone() / denom.clone();
    let da = p.clone() * va.powi(GRADING_ORDER - 1) * dv(s);
    let db = -(p * vb.powi(GRADING_ORDER - 1) * dv(&mirror));
    let dg = two_pi * (da * b - a * db) / (denom.clone() * denom);
    (g, dg)
}

/// Traces `Γ_r` at the nodes of `law` and returns the curve together with
/// the quadrature weights of `dθ/2π`.
pub fn curve_with_weights<T: Real>(r: &T, nodes: usize, law: NodeLaw) -> Result<(LevelCurve<T>, Vec<T>)> {
    if nodes < 16 || !nodes.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "node count must be even and at least 16".into(),
        ));
    }
    let m = T::from_usize(nodes).unwrap();
    match law {
        NodeLaw::Uniform => {
            let curve = trace_level_curve(r, nodes)?;
            let w = T::one() / m;
            Ok((curve, vec![w; nodes]))
        }
        NodeLaw::Graded => {
            let tracer = Tracer::new(r)?;
            let pi = T::pi();
            let two_pi = pi.clone() + pi.clone();
            let half = nodes / 2;
            let mut thetas = Vec::with_capacity(half + 1);
            let mut dg = Vec::with_capacity(nodes);
            for j in 0..=half {
                if j == 0 {
                    thetas.push(T::zero());
                    dg.push(T::zero());
                } else if j == half {
                    thetas.push(pi.clone());
                    dg.push(grading(&pi).1);
                } else {
                    let s = two_pi.clone() * T::from_usize(j).unwrap() / m.clone();
                    let (g, d) = grading(&s);
                    thetas.push(g);
                    dg.push(d);
                }
            }
            for j in (half + 1)..nodes {
                dg.push(dg[nodes - j].clone());
            }
            let upper = tracer.trace(&thetas)?;
            let curve = szego::assemble(r, thetas, upper, nodes);
            let total = dg.iter().cloned().fold(T::zero(), |a, b| a + b);
            let weights = dg.into_iter().map(|d| d / total.clone()).collect();
            Ok((curve, weights))
        }
    }
}

/// Discretizes `μ_r` with `M` nodes, choosing the node law automatically.
pub fn discretize_mu_r<T: Real>(level: &Level<T>, nodes: usize) -> Result<DiscreteMeasure<T>> {
    match level {
        Level::Infinite => Ok(delta_zero()),
        Level::Finite(r) => discretize_mu_r_with(r, nodes, NodeLaw::auto(r, nodes)),
    }
}

pub fn discretize_mu_r_with<T: Real>(r: &T, nodes: usize, law: NodeLaw) -> Result<DiscreteMeasure<T>> {
    let (curve, weights) = curve_with_weights(r, nodes, law)?;
    let points = curve.samples.into_iter().map(|s| s.z).collect();
    DiscreteMeasure::new(points, weights, format!("mu_r r={} M={nodes} {law:?}", r.to_f64()))
}

fn delta_zero<T: Real>() -> DiscreteMeasure<T> {
    DiscreteMeasure::atom(Complex::new(T::zero(), T::zero()), "mu_inf")
}

/// Density of `μ_r` with respect to `dθ` at each sample,
/// `(1/2π) Re[w_j / φ(z_j)]` with `w_j = e^{−r} e^{iθ_j}`.
pub fn pullback_density<T: Real>(curve: &LevelCurve<T>) -> Vec<T> {
    let two_pi = T::pi() + T::pi();
    let radius = (-curve.r.clone()).exp();
    curve
        .samples
        .iter()
        .map(|s| {
            let w = Complex::new(radius.clone() * s.theta.cos(), radius.clone() * s.theta.sin());
            (w / phi_map(&s.z)).re / two_pi.clone()
        })
        .collect()
}

/// Support points closer than this make the potential singular.
pub const SINGULAR_DISTANCE: f64 = 1e-30;

/// `V^σ(z) = −Σ w_i ln|z − x_i|`.
pub fn log_potential<T: Real>(mu: &DiscreteMeasure<T>, z: &Complex<T>) -> Result<T> {
    let floor = lit::<T>(SINGULAR_DISTANCE);
    let mut acc = T::zero();
    for (x, w) in mu.points.iter().zip(&mu.weights) {
        let d = cabs(&(z.clone() - x.clone()));
        if d <= floor {
            return Err(Error::SingularEvaluation {
                re: z.re.to_f64(),
                im: z.im.to_f64(),
            });
        }
        acc = acc - w.clone() * d.ln();
    }
    Ok(acc)
}

/// External fields `Q = −ln ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExternalField {
    /// `½(ln|z| + Re z)`.
    HalfLogPlusRe,
    /// `Q ≡ 0`, `ω ≡ 1`.
    Zero,
}

impl ExternalField {
    pub fn value<T: Real>(&self, z: &Complex<T>) -> T {
        match self {
            ExternalField::HalfLogPlusRe => (cabs(z).ln() + z.re.clone()) * lit::<T>(0.5),
            ExternalField::Zero => T::zero(),
        }
    }

    /// `ln ω(z)`; `+∞` at the origin for the logarithmic field.
    pub fn log_weight<T: Real>(&self, z: &Complex<T>) -> T {
        -self.value(z)
    }

    pub fn weight<T: Real>(&self, z: &Complex<T>) -> T {
        self.log_weight(z).exp()
    }
}

pub fn ext_field<T: Real>(z: &Complex<T>) -> T {
    ExternalField::HalfLogPlusRe.value(z)
}

#[derive(Clone, Debug)]
pub struct Energy<T> {
    /// Discrete `I_ω` with the diagonal excluded.
    pub energy: T,
    /// `F̂ = I − Σ w_i Q(x_i)`.
    pub robin: T,
}

pub fn weighted_energy<T: Real>(mu: &DiscreteMeasure<T>, field: ExternalField) -> Result<Energy<T>> {
    if mu.support().len() < 2 {
        return Err(Error::InvalidParameter(
            "energy needs at least two distinct points".into(),
        ));
    }
    let mut pair = T::zero();
    for i in 0..mu.len() {
        let mut row = T::zero();
        for j in 0..mu.len() {
            if i == j {
                continue;
            }
            let d = cabs(&(mu.points[i].clone() - mu.points[j].clone()));
            if d.is_zero() {
                continue;
            }
            row = row + mu.weights[j].clone() * d.ln();
        }
        pair = pair - mu.weights[i].clone() * row;
    }
    let mut field_mean = T::zero();
    for (x, w) in mu.points.iter().zip(&mu.weights) {
        field_mean = field_mean + w.clone() * field.value(x);
    }
    let energy = pair + field_mean.clone() + field_mean.clone();
    Ok(Energy {
        robin: energy.clone() - field_mean,
        energy,
    })
}

#[derive(Clone, Debug)]
pub struct BalayageCheck<T> {
    pub point: Complex<T>,
    pub identity: &'static str,
    pub lhs: T,
    pub rhs: T,
    pub abs_error: T,
    pub tolerance: f64,
}

impl<T: Real> BalayageCheck<T> {
    fn new(point: Complex<T>, identity: &'static str, lhs: T, rhs: T, tolerance: f64) -> Self {
        let abs_error = (lhs.clone() - rhs.clone()).abs();
        BalayageCheck {
            point,
            identity,
            lhs,
            rhs,
            abs_error,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.abs_error.to_f64() <= self.tolerance
    }
}

#[derive(Clone, Debug)]
pub struct BalayageReport<T> {
    pub r: T,
    pub nodes: usize,
    pub checks: Vec<BalayageCheck<T>>,
}

impl<T: Real> BalayageReport<T> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(BalayageCheck::passed)
    }
}

pub const ORIGIN_TOLERANCE: f64 = 1e-10;
pub const OFF_CURVE_TOLERANCE: f64 = 1e-8;
/// Number of node spacings between an offset point and the curve.
const OFFSET_SPACINGS: f64 = 3.0;

/// Checks the balayage identities of `μ_r` at the given points:
/// `V + Re z = r+1` inside, `V + ln|z| = 0` outside, `V(0) = r+1`, and
/// `V + Q = (r+1)/2` on the curve, the last one reached from interior
/// offsets through the harmonic extension `V = r+1 − Re z` on `Ḡ_r`.
pub fn verify_balayage<T: Real>(
    r: &T,
    nodes: usize,
    interior: &[Complex<T>],
    exterior: &[Complex<T>],
) -> Result<BalayageReport<T>> {
    let (curve, weights) = curve_with_weights(r, nodes, NodeLaw::auto(r, nodes))?;
    for (pts, want, name) in [
        (interior, RegionTag::Interior, "interior"),
        (exterior, RegionTag::Exterior, "exterior"),
    ] {
        for z in pts {
            if locate(z, &curve) != want {
                return Err(Error::InvalidTestPoint {
                    re: z.re.to_f64(),
                    im: z.im.to_f64(),
                    expected: name,
                });
            }
        }
    }
    let mu = DiscreteMeasure::new(curve.samples.iter().map(|s| s.z.clone()).collect(), weights, "mu_r")?;
    let rp1 = r.clone() + T::one();
    let mut checks = Vec::new();
    let origin = Complex::new(T::zero(), T::zero());
    checks.push(BalayageCheck::new(
        origin.clone(),
        "potential at origin",
        log_potential(&mu, &origin)?,
        rp1.clone(),
        ORIGIN_TOLERANCE,
    ));
    for z in interior {
        let lhs = log_potential(&mu, z)? + z.re.clone();
        checks.push(BalayageCheck::new(
            z.clone(),
            "interior V + Re z",
            lhs,
            rp1.clone(),
            OFF_CURVE_TOLERANCE,
        ));
    }
    for z in exterior {
        let lhs = log_potential(&mu, z)? + cabs(z).ln();
        checks.push(BalayageCheck::new(
            z.clone(),
            "exterior V + ln|z|",
            lhs,
            T::zero(),
            OFF_CURVE_TOLERANCE,
        ));
    }
    let half_rp1 = rp1 * lit::<T>(0.5);
    for (zc, zin) in near_curve_offsets(&curve, nodes)? {
        let v_in = log_potential(&mu, &zin)?;
        let v_curve = v_in + zin.re.clone() - zc.re.clone();
        let lhs = v_curve + ext_field(&zc);
        checks.push(BalayageCheck::new(
            zc,
            "curve V + Q",
            lhs,
            half_rp1.clone(),
            OFF_CURVE_TOLERANCE,
        ));
    }
    Ok(BalayageReport {
        r: r.clone(),
        nodes,
        checks,
    })
}

/// Points on the curve at `θ ∈ {π/2, π, 3π/2}` paired with interior points
/// along the inward normal, at least three uniform node spacings away.
fn near_curve_offsets<T: Real>(curve: &LevelCurve<T>, nodes: usize) -> Result<Vec<(Complex<T>, Complex<T>)>> {
    let tracer = Tracer::new(&curve.r)?;
    let pi = T::pi();
    let half_pi = pi.clone() * lit::<T>(0.5);
    let upper = tracer.trace(&[half_pi.clone(), pi.clone()])?;
    let on_curve = vec![upper[0].clone(), upper[1].clone(), upper[0].conj()];
    let length = perimeter(curve);
    let spacing = length / T::from_usize(nodes).unwrap();
    let mut out = Vec::new();
    for zc in on_curve {
        let one = Complex::new(T::one(), T::zero());
        // tangent i z / (1 − z); interior lies to its left
        let tangent = Complex::new(T::zero(), T::one()) * zc.clone() / (one - zc.clone());
        let normal = Complex::new(T::zero(), T::one()) * tangent.clone() / cabs(&tangent);
        let mut d = spacing.clone() * lit::<T>(OFFSET_SPACINGS);
        let reach = cabs(&zc) * lit::<T>(0.5);
        if d > reach {
            d = reach;
        }
        let zin = zc.clone() + normal * d;
        if locate(&zin, curve) != RegionTag::Interior {
            return Err(Error::InvalidTestPoint {
                re: zin.re.to_f64(),
                im: zin.im.to_f64(),
                expected: "interior",
            });
        }
        out.push((zc, zin));
    }
    Ok(out)
}

fn perimeter<T: Real>(curve: &LevelCurve<T>) -> T {
    let n = curve.samples.len();
    (0..n)
        .map(|j| cabs(&(curve.samples[(j + 1) % n].z.clone() - curve.samples[j].z.clone())))
        .fold(T::zero(), |a, b| a + b)
}

/// Interior and exterior test points.
pub type TestPoints<T> = (Vec<Complex<T>>, Vec<Complex<T>>);

/// Default test points for the balayage identities at level `r`: scaled
/// copies of four curve points and the four exterior points `2, 3, −2, 1.5i`.
pub fn default_test_points<T: Real>(r: &T) -> Result<TestPoints<T>> {
    let tracer = Tracer::new(r)?;
    let pi = T::pi();
    let upper = tracer.trace(&[T::zero(), pi.clone() * lit::<T>(0.5), pi])?;
    let scale = lit::<T>(0.3);
    let mut interior: Vec<Complex<T>> = upper.iter().map(|z| z.clone() * scale.clone()).collect();
    interior.push(upper[1].conj() * scale);
    let exterior = [(2.0, 0.0), (3.0, 0.0), (-2.0, 0.0), (0.0, 1.5)]
        .iter()
        .map(|&(a, b)| Complex::new(lit::<T>(a), lit::<T>(b)))
        .collect();
    Ok((interior, exterior))
}

/// Grid nodes per Leja point used when the caller does not choose.
pub const DEFAULT_LEJA_GRID_FACTOR: usize = 32;

/// Greedy weighted Leja points on a grid of `Γ_r`.
#[derive(Clone, Debug)]
pub struct LejaResult<T> {
    pub measure: DiscreteMeasure<T>,
    /// Grid angles `θ` of the selected points, in selection order.
    pub thetas: Vec<T>,
    /// `t̂_N = max_grid ω^N Π|z − z_j|`.
    pub sup_norm: T,
    /// `−ln(t̂_N) / N`.
    pub robin_estimate: T,
}

/// Picks `z_0 = argmax ω`, then `z_k = argmax ω(z)^k Π_{j<k}|z − z_j|` over
/// `grid_nodes` samples of `Γ_r`, working with logarithms throughout.
/// Ties go to the lowest grid index.
pub fn weighted_leja<T: Real>(r: &T, count: usize, grid_nodes: usize) -> Result<LejaResult<T>> {
    if count == 0 {
        return Err(Error::InvalidParameter("at least one Leja point is required".into()));
    }
    if grid_nodes < 8 * count {
        return Err(Error::InvalidParameter("the grid needs at least 8N nodes".into()));
    }
    let curve = trace_level_curve(r, grid_nodes)?;
    let field = ExternalField::HalfLogPlusRe;
    let log_w: Vec<T> = curve.points().map(|z| field.log_weight(z)).collect();
    let mut log_prod = vec![T::zero(); grid_nodes];
    let mut taken = vec![false; grid_nodes];
    let mut chosen = Vec::with_capacity(count);
    let mut thetas = Vec::with_capacity(count);
    let best = |k: usize, log_prod: &[T], taken: &[bool]| -> (usize, T) {
        let exponent = T::from_usize(k.max(1)).unwrap();
        let mut arg = usize::MAX;
        let mut top = T::zero();
        for j in 0..grid_nodes {
            if taken[j] {
                continue;
            }
            let s = exponent.clone() * log_w[j].clone() + log_prod[j].clone();
            if arg == usize::MAX || s > top {
                arg = j;
                top = s;
            }
        }
        (arg, top)
    };
    for k in 0..count {
        let (j, _) = best(k, &log_prod, &taken);
        taken[j] = true;
        let zj = curve.samples[j].z.clone();
        for (i, s) in curve.samples.iter().enumerate() {
            if !taken[i] {
                log_prod[i] = log_prod[i].clone() + cabs(&(s.z.clone() - zj.clone())).ln();
            }
        }
        chosen.push(zj);
        thetas.push(curve.samples[j].theta.clone());
    }
    let (_, log_t) = best(count, &log_prod, &taken);
    let n = T::from_usize(count).unwrap();
    let w = T::one() / n.clone();
    let measure = DiscreteMeasure::new(chosen, vec![w; count], format!("leja r={} N={count}", r.to_f64()))?;
    Ok(LejaResult {
        measure,
        thetas,
        sup_norm: log_t.exp(),
        robin_estimate: -log_t / n,
    })
}

/// Kolmogorov–Smirnov distance between angles in `[0, 2π)` and the uniform
/// law.
pub fn ks_uniform_angles<T: Real>(angles: &[T]) -> T {
    if angles.is_empty() {
        return T::zero();
    }
    let two_pi = T::pi() + T::pi();
    let mut u: Vec<T> = angles.iter().map(|a| a.clone() / two_pi.clone()).collect();
    u.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = T::from_usize(u.len()).unwrap();
    let mut d = T::zero();
    for (i, x) in u.iter().enumerate() {
        let lo = T::from_usize(i).unwrap() / n.clone();
        let hi = T::from_usize(i + 1).unwrap() / n.clone();
        d = d.max_of(hi - x.clone()).max_of(x.clone() - lo);
    }
    d
}
