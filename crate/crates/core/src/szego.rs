//! The map `φ(z) = z e^{1−z}`, its level curves
//! `Γ_r = {|φ(z)| = e^{−r}, |z| ≤ 1}` and point classification.
//!
//! Curves are traced in the angle `θ` of `φ(z) = e^{−r} e^{iθ}`. The
//! equation is solved in logarithmic form,
//! `ln z + 1 − z = −r + iθ  (mod 2πi)`, using a series for `ln(1+u) − u`
//! near `z = 1` where `φ'` vanishes and the direct form cancels.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cabs, cln, csqrt, lit, log1p_minus_id, Real};

/// `z e^{1−z}`.
pub fn phi_map<T: Real>(z: &Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    z.clone() * crate::scalar::cexp(&(one - z.clone()))
}

/// `ln z + 1 − z`, principal branch, accurate both near `z = 1` and near 0.
pub fn log_phi<T: Real>(z: &Complex<T>) -> Complex<T> {
    let u = z.clone() - Complex::new(T::one(), T::zero());
    if cabs(&u) <= lit::<T>(0.25) {
        log1p_minus_id(&u)
    } else {
        cln(z) - u
    }
}

/// `−ln|φ(z)|`, the level of `z`.
pub fn level_of<T: Real>(z: &Complex<T>) -> T {
    -(cabs(z).ln() + T::one() - z.re.clone())
}

#[derive(Clone, Debug)]
pub struct CurveSample<T> {
    pub theta: T,
    pub z: Complex<T>,
}

/// Sampled trace of `Γ_r`, ordered by `θ ∈ [0, 2π)`, counterclockwise.
#[derive(Clone, Debug)]
pub struct LevelCurve<T> {
    pub r: T,
    pub samples: Vec<CurveSample<T>>,
    pub closed: bool,
    /// Defining-equation tolerance used for on-curve classification.
    pub tolerance: T,
}

impl<T: Real> LevelCurve<T> {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &Complex<T>> {
        self.samples.iter().map(|s| &s.z)
    }

    /// Largest `|z|` over the samples.
    pub fn max_modulus(&self) -> T {
        self.points().map(cabs).fold(T::zero(), |a, b| a.max_of(b))
    }

    /// Smallest distance from `z` to a sample.
    pub fn distance_to(&self, z: &Complex<T>) -> T {
        self.points()
            .map(|p| cabs(&(p.clone() - z.clone())))
            .fold(lit::<T>(f64::MAX), |a, b| a.min_of(b))
    }

    /// `max_j | |φ(z_j)| − e^{−r} |`.
    pub fn max_defining_residual(&self) -> T {
        let target = (-self.r.clone()).exp();
        self.points()
            .map(|z| (cabs(&phi_map(z)) - target.clone()).abs())
            .fold(T::zero(), |a, b| a.max_of(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionTag {
    /// In `G_r`, the interior of `Γ_r`.
    Interior,
    OnCurve,
    Exterior,
}

/// Crossings of `Γ_r` with the real axis: `x0 ∈ (0, 1]` and `x_neg < 0`.
pub fn real_crossings<T: Real>(r: &T) -> Result<(T, T)> {
    if *r < T::zero() || !r.is_finite() {
        return Err(Error::InvalidParameter(
            "level r must be finite and non-negative".into(),
        ));
    }
    let one = T::one();
    // ln x + 1 − x + r, increasing on (0, 1]
    let positive = |x: &T| -> T { log_phi(&Complex::new(x.clone(), T::zero())).re + r.clone() };
    let x0 = if r.is_zero() {
        one.clone()
    } else {
        let lo = (-(one.clone() + r.clone())).exp();
        bisect(positive, lo, one.clone())
    };
    // ln a + 1 + a + r for a = −x > 0, increasing
    let negative = |a: &T| -> T { a.ln() + T::one() + a.clone() + r.clone() };
    let hi = (-(one.clone() + r.clone())).exp();
    let lo = hi.clone() * (-one).exp();
    let a = bisect(negative, lo, hi);
    Ok((x0, -a))
}

/// Root of an increasing function on `[lo, hi]`, to full relative precision.
fn bisect<T: Real>(f: impl Fn(&T) -> T, mut lo: T, mut hi: T) -> T {
    let half = lit::<T>(0.5);
    let eps = T::epsilon();
    for _ in 0..(4 * lo.precision_bits().max(T::one().precision_bits()) + 64) {
        let mid = (lo.clone() + hi.clone()) * half.clone();
        if mid == lo || mid == hi || hi.clone() - lo.clone() <= eps.clone() * hi.abs() {
            return mid;
        }
        if f(&mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * half
}

/// Solves `φ(z) = e^{−r+iθ}` on the `G_r` side for increasing angles in
/// `[0, π]` by continuation from the positive real crossing.
pub(crate) struct Tracer<T> {
    r: T,
    x0: T,
    x_neg: T,
}

const MAX_NEWTON: usize = 80;
const MAX_HALVINGS: usize = 40;
/// Disk-membership slack for rejecting the wrong branch.
const DISK_SLACK: f64 = 1e-8;
/// Below this `|−r + iθ|` the corner series seeds Newton.
const LOCAL_MODEL_RADIUS: f64 = 0.05;

impl<T: Real> Tracer<T> {
    pub(crate) fn new(r: &T) -> Result<Self> {
        let (x0, x_neg) = real_crossings(r)?;
        Ok(Tracer {
            r: r.clone(),
            x0,
            x_neg,
        })
    }

    fn target(&self, theta: &T) -> Complex<T> {
        Complex::new(-self.r.clone(), theta.clone())
    }

    /// `ln z + 1 − z − target`, imaginary part reduced to `(−π, π]`.
    fn residual(&self, z: &Complex<T>, target: &Complex<T>) -> Complex<T> {
        let mut g = log_phi(z) - target.clone();
        let pi = T::pi();
        let two_pi = pi.clone() + pi.clone();
        let k = ((g.im.clone() + pi) / two_pi.clone()).floor();
        if !k.is_zero() {
            g.im = g.im - k * two_pi;
        }
        g
    }

    /// Seed from `ln(1+u) − u ≈ −u²/2 + u³/3` near the corner.
    fn local_seed(&self, target: &Complex<T>) -> Complex<T> {
        let two = lit::<T>(2.0);
        let minus_two_c = -(target.clone() * two.clone());
        let u0 = -csqrt(&minus_two_c);
        let cubic = u0.clone() * u0.clone() * u0 * lit::<T>(2.0 / 3.0);
        let u1 = -csqrt(&(minus_two_c + cubic));
        Complex::new(T::one(), T::zero()) + u1
    }

    fn newton(&self, seed: Complex<T>, target: &Complex<T>) -> Option<Complex<T>> {
        let eps = T::epsilon();
        let tol = eps.clone() * lit::<T>(64.0);
        let one = Complex::new(T::one(), T::zero());
        let mut z = seed;
        for _ in 0..MAX_NEWTON {
            let g = self.residual(&z, target);
            let denom = one.clone() - z.clone();
            if denom.re.is_zero() && denom.im.is_zero() {
                return None;
            }
            let step = g * z.clone() / denom;
            z = z - step.clone();
            if !z.re.is_finite() || !z.im.is_finite() {
                return None;
            }
            let size = cabs(&step);
            if size <= tol.clone() * cabs(&z).max_of(eps.clone()) {
                return Some(z);
            }
        }
        // accept a solution that stalled at the roundoff floor
        let g = self.residual(&z, target);
        (cabs(&g) <= eps.sqrt() * eps.clone().sqrt().sqrt()).then_some(z)
    }

    fn accept(&self, z: &Complex<T>) -> bool {
        cabs(z) <= T::one() + lit::<T>(DISK_SLACK)
    }

    /// Solves at each angle of `thetas`, which must increase within `[0, π]`.
    pub(crate) fn trace(&self, thetas: &[T]) -> Result<Vec<Complex<T>>> {
        let mut out = Vec::with_capacity(thetas.len());
        let mut prev_theta = T::zero();
        let mut prev_z = Complex::new(self.x0.clone(), T::zero());
        let pi = T::pi();
        for theta in thetas {
            if theta.is_zero() {
                out.push(Complex::new(self.x0.clone(), T::zero()));
                continue;
            }
            if *theta == pi {
                out.push(Complex::new(self.x_neg.clone(), T::zero()));
                prev_theta = theta.clone();
                prev_z = Complex::new(self.x_neg.clone(), T::zero());
                continue;
            }
            let z = self.advance(&prev_theta, &prev_z, theta)?;
            prev_theta = theta.clone();
            prev_z = z.clone();
            out.push(z);
        }
        Ok(out)
    }

    /// Continuation from `(from, z_from)` to `to`, halving the step on failure.
    fn advance(&self, from: &T, z_from: &Complex<T>, to: &T) -> Result<Complex<T>> {
        let mut cur_theta = from.clone();
        let mut cur_z = z_from.clone();
        let mut step = to.clone() - from.clone();
        let mut halvings = 0;
        let half = lit::<T>(0.5);
        while cur_theta < *to {
            let mut next = cur_theta.clone() + step.clone();
            if next > *to {
                next = to.clone();
            }
            match self.solve_near(&cur_theta, &cur_z, &next) {
                Some(z) => {
                    cur_theta = next;
                    cur_z = z;
                }
                None => {
                    halvings += 1;
                    if halvings > MAX_HALVINGS {
                        return Err(Error::Trace(format!(
                            "continuation stalled near theta = {} for r = {}",
                            cur_theta.to_f64(),
                            self.r.to_f64()
                        )));
                    }
                    step = step * half.clone();
                }
            }
        }
        Ok(cur_z)
    }

    fn solve_near(&self, theta: &T, z: &Complex<T>, next: &T) -> Option<Complex<T>> {
        let target = self.target(next);
        if cabs(&target) < lit::<T>(LOCAL_MODEL_RADIUS) {
            if let Some(sol) = self.newton(self.local_seed(&target), &target) {
                if self.accept(&sol) && sol.im >= T::zero() {
                    return Some(sol);
                }
            }
        }
        // Euler predictor along dz/dθ = i z / (1 − z)
        let one = Complex::new(T::one(), T::zero());
        let denom = one - z.clone();
        let seed = if cabs(&denom) > T::epsilon().sqrt() {
            let dz = Complex::new(T::zero(), next.clone() - theta.clone()) * z.clone() / denom;
            z.clone() + dz
        } else {
            self.local_seed(&target)
        };
        let sol = self.newton(seed, &target)?;
        // stay within the disk and on the upper half, and do not jump
        // across the curve
        let jump = cabs(&(sol.clone() - z.clone()));
        let bound = lit::<T>(0.5) * (cabs(z) + lit::<T>(1e-300));
        (self.accept(&sol) && sol.im >= -T::epsilon() && jump <= bound.max_of(lit::<T>(0.25))).then_some(sol)
    }
}

/// Traces `Γ_r` at `θ_j = 2πj/M`, `j = 0..M`.
///
/// The upper half is computed by continuation; the lower half is its
/// mirror image, which solves the same equation exactly.
pub fn trace_level_curve<T: Real>(r: &T, nodes: usize) -> Result<LevelCurve<T>> {
    if nodes < 16 || !nodes.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "node count must be even and at least 16".into(),
        ));
    }
    let tracer = Tracer::new(r)?;
    let two_pi = T::pi() + T::pi();
    let m = T::from_usize(nodes).unwrap();
    let half = nodes / 2;
    let thetas: Vec<T> = (0..=half)
        .map(|j| {
            if j == half {
                T::pi()
            } else {
                two_pi.clone() * T::from_usize(j).unwrap() / m.clone()
            }
        })
        .collect();
    let upper = tracer.trace(&thetas)?;
    Ok(assemble(r, thetas, upper, nodes))
}

/// Builds the full curve from the upper half `θ ∈ [0, π]`.
pub(crate) fn assemble<T: Real>(r: &T, thetas: Vec<T>, upper: Vec<Complex<T>>, nodes: usize) -> LevelCurve<T> {
    let two_pi = T::pi() + T::pi();
    let half = nodes / 2;
    let mut samples: Vec<CurveSample<T>> = thetas
        .into_iter()
        .zip(upper)
        .map(|(theta, z)| CurveSample { theta, z })
        .collect();
    for j in (half + 1)..nodes {
        let mirror = &samples[nodes - j];
        let s = CurveSample {
            theta: two_pi.clone() - mirror.theta.clone(),
            z: mirror.z.conj(),
        };
        samples.push(s);
    }
    LevelCurve {
        r: r.clone(),
        samples,
        closed: true,
        tolerance: T::epsilon().sqrt(),
    }
}

/// Winding number of the closed polyline through the samples about `z`.
pub fn winding_number<T: Real>(curve: &LevelCurve<T>, z: &Complex<T>) -> i64 {
    let n = curve.samples.len();
    let mut total = T::zero();
    for j in 0..n {
        let a = curve.samples[j].z.clone() - z.clone();
        let b = curve.samples[(j + 1) % n].z.clone() - z.clone();
        // arg(b / a) without dividing
        let cross = a.re.clone() * b.im.clone() - a.im.clone() * b.re.clone();
        let dot = a.re.clone() * b.re.clone() + a.im.clone() * b.im.clone();
        total = total + cross.atan2(&dot);
    }
    let two_pi = T::pi() + T::pi();
    (total / two_pi).to_f64().round() as i64
}

/// Classifies `z` as inside, on or outside the traced curve.
pub fn locate<T: Real>(z: &Complex<T>, curve: &LevelCurve<T>) -> RegionTag {
    let tol = curve.tolerance.clone();
    let residual = (cabs(&phi_map(z)) - (-curve.r.clone()).exp()).abs();
    if residual <= tol && cabs(z) <= T::one() + tol {
        return RegionTag::OnCurve;
    }
    if winding_number(curve, z) == 1 {
        RegionTag::Interior
    } else {
        RegionTag::Exterior
    }
}
