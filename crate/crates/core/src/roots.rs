//! All zeros of the monic contracted polynomial, by Aberth–Ehrlich iteration.

use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::laguerre::{monic_rescaled, CoeffList, LaguerreSpec};
use crate::scalar::{cabs, carg, lit, with_precision, Ap, Precision, Real};

/// Sweep cap for the simultaneous iteration.
pub const MAX_SWEEPS: usize = 200;

/// Phase offset of the starting circles, in radians.
const START_PHASE: f64 = 0.7;

/// Zeros of one polynomial, with multiplicity.
#[derive(Clone, Debug)]
pub struct ZeroSet<T> {
    pub zeros: Vec<Complex<T>>,
    /// `|p(ζ) / p'(ζ)|` at each zero (zero for deflated origin roots).
    pub residuals: Vec<T>,
    pub origin_multiplicity: usize,
    pub spec: Option<LaguerreSpec<T>>,
    pub sweeps: usize,
}

impl<T: Real> ZeroSet<T> {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn max_residual(&self) -> T {
        self.residuals.iter().cloned().fold(T::zero(), |a, b| a.max_of(b))
    }

    pub fn sum(&self) -> Complex<T> {
        self.zeros
            .iter()
            .cloned()
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    pub fn product(&self) -> Complex<T> {
        self.zeros
            .iter()
            .cloned()
            .fold(Complex::new(T::one(), T::zero()), |a, b| a * b)
    }
}

/// Weighted point masses.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure<T> {
    pub points: Vec<Complex<T>>,
    pub weights: Vec<T>,
    pub label: String,
}

impl<T: Real> DiscreteMeasure<T> {
    /// Builds a normalized measure; weights must be non-negative and sum to
    /// one within `2^-32`.
    pub fn new(points: Vec<Complex<T>>, weights: Vec<T>, label: impl Into<String>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidParameter("points and weights differ in length".into()));
        }
        if weights.iter().any(|w| *w < T::zero()) {
            return Err(Error::InvalidParameter("negative weight".into()));
        }
        let m = DiscreteMeasure {
            points,
            weights,
            label: label.into(),
        };
        if (m.total_mass() - T::one()).abs() > lit::<T>(2f64.powi(-32)) {
            return Err(Error::InvalidParameter("weights do not sum to one".into()));
        }
        Ok(m)
    }

    /// Unit mass at one point.
    pub fn atom(point: Complex<T>, label: impl Into<String>) -> Self {
        DiscreteMeasure {
            points: vec![point],
            weights: vec![T::one()],
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// `∫ z^k dσ`.
    pub fn moment(&self, k: u32) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (p, w) in self.points.iter().zip(&self.weights) {
            let mut zk = Complex::new(T::one(), T::zero());
            for _ in 0..k {
                zk = zk * p.clone();
            }
            acc = acc + zk * w.clone();
        }
        acc
    }

    /// Distinct support points, compared exactly.
    pub fn support(&self) -> Vec<Complex<T>> {
        let mut out: Vec<Complex<T>> = Vec::new();
        for p in &self.points {
            if !out.iter().any(|q| q == p) {
                out.push(p.clone());
            }
        }
        out
    }
}

/// `2^{-p/2}` at the working precision.
pub fn default_tolerance<T: Real>() -> T {
    T::epsilon().sqrt()
}

/// Horner evaluation of `p` and `p'` together.
fn eval_with_derivative<T: Real>(coeffs: &[T], z: &Complex<T>) -> (Complex<T>, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    let mut p = zero.clone();
    let mut dp = zero;
    for c in coeffs.iter().rev() {
        dp = dp * z.clone() + p.clone();
        p = p * z.clone() + Complex::new(c.clone(), T::zero());
    }
    (p, dp)
}

fn newton_ratio<T: Real>(p: &Complex<T>, dp: &Complex<T>) -> Option<Complex<T>> {
    if dp.re.is_zero() && dp.im.is_zero() {
        None
    } else {
        Some(p.clone() / dp.clone())
    }
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(k, ln|a_k|)`.
fn initial_guesses<T: Real>(coeffs: &[T]) -> Vec<Complex<T>> {
    let d = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.abs().ln().to_f64()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (k1, v1) = hull[hull.len() - 2];
            let (k2, v2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly above the chord
            let cross = (k2 as f64 - k1 as f64) * (p.1 - v1) - (v2 - v1) * (p.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut guesses = Vec::with_capacity(d);
    for (seg, w) in hull.windows(2).enumerate() {
        let (ka, va) = w[0];
        let (kb, vb) = w[1];
        let m = kb - ka;
        let log_radius = (va - vb) / m as f64;
        let radius = lit::<T>(log_radius).exp();
        for j in 0..m {
            let angle = two_pi * j as f64 / m as f64 + two_pi * seg as f64 / d as f64 + START_PHASE;
            let (s, c) = angle.sin_cos();
            guesses.push(Complex::new(radius.clone() * lit::<T>(c), radius.clone() * lit::<T>(s)));
        }
    }
    guesses
}

/// All zeros of a monic polynomial.
///
/// Exact zero trailing coefficients are deflated as roots at the origin
/// before iterating. A root is accepted once both its Aberth correction and
/// its Newton residual `|p/p'|` are below `tol`.
pub fn find_roots<T: Real>(poly: &CoeffList<T>, tol: &T) -> Result<ZeroSet<T>> {
    if !poly.is_monic() {
        return Err(Error::InvalidParameter("root finder expects a monic polynomial".into()));
    }
    if *tol <= T::zero() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let all = poly.coeffs();
    let origin = all.iter().take_while(|c| c.is_zero()).count();
    let reduced = &all[origin..];
    let d = reduced.len() - 1;

    let mut zeros: Vec<Complex<T>> = Vec::with_capacity(all.len() - 1);
    let mut residuals: Vec<T> = Vec::with_capacity(all.len() - 1);
    for _ in 0..origin {
        zeros.push(Complex::new(T::zero(), T::zero()));
        residuals.push(T::zero());
    }
    if d == 0 {
        return Ok(ZeroSet {
            zeros,
            residuals,
            origin_multiplicity: origin,
            spec: None,
            sweeps: 0,
        });
    }

    let mut z = initial_guesses(reduced);
    let mut done = vec![false; d];
    let mut sweeps = 0;
    let one = Complex::new(T::one(), T::zero());
    while sweeps < MAX_SWEEPS && done.iter().any(|c| !c) {
        sweeps += 1;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(reduced, &z[i]);
            if p.re.is_zero() && p.im.is_zero() {
                done[i] = true;
                continue;
            }
            let Some(newton) = newton_ratio(&p, &dp) else {
                // stationary point: nudge off it
                z[i] = z[i].clone() * lit::<T>(1.0 + 1e-3) + Complex::new(tol.clone(), tol.clone());
                continue;
            };
            let mut repulsion = Complex::new(T::zero(), T::zero());
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i].clone() - zj.clone();
                    if !(diff.re.is_zero() && diff.im.is_zero()) {
                        repulsion = repulsion + one.clone() / diff;
                    }
                }
            }
            let denom = one.clone() - newton.clone() * repulsion;
            let step = if denom.re.is_zero() && denom.im.is_zero() {
                newton.clone()
            } else {
                newton.clone() / denom
            };
            z[i] = z[i].clone() - step.clone();
            if cabs(&step) <= *tol && cabs(&newton) <= *tol {
                done[i] = true;
            }
        }
    }

    let mut worst = T::zero();
    let mut reduced_residuals = Vec::with_capacity(d);
    for zi in z.iter_mut() {
        let (p, dp) = eval_with_derivative(reduced, zi);
        let mut res = match newton_ratio(&p, &dp) {
            Some(r) => cabs(&r),
            None if p.re.is_zero() && p.im.is_zero() => T::zero(),
            None => lit::<T>(f64::MAX),
        };
        // one Newton polish step, kept only if it helps
        if let Some(step) = newton_ratio(&p, &dp) {
            let cand = zi.clone() - step;
            let (pc, dpc) = eval_with_derivative(reduced, &cand);
            if let Some(r) = newton_ratio(&pc, &dpc) {
                if cabs(&r) < res {
                    res = cabs(&r);
                    *zi = cand;
                }
            }
        }
        worst = worst.max_of(res.clone());
        reduced_residuals.push(res);
    }
    if worst > *tol {
        return Err(Error::NonConvergence {
            sweeps,
            max_residual: worst.to_f64(),
            best: z.iter().map(|c| Complex64::new(c.re.to_f64(), c.im.to_f64())).collect(),
        });
    }

    let mut order: Vec<usize> = (0..d).collect();
    let keys: Vec<(f64, f64)> = z.iter().map(|c| (carg(c).to_f64(), cabs(c).to_f64())).collect();
    order.sort_by(|&a, &b| keys[a].partial_cmp(&keys[b]).unwrap_or(std::cmp::Ordering::Equal));
    for i in order {
        zeros.push(z[i].clone());
        residuals.push(reduced_residuals[i].clone());
    }
    Ok(ZeroSet {
        zeros,
        residuals,
        origin_multiplicity: origin,
        spec: None,
        sweeps,
    })
}

/// [`find_roots`] with the working precision set to `precision_bits`.
pub fn find_roots_ap(poly: &CoeffList<Ap>, precision_bits: u32, tol: &Ap) -> Result<ZeroSet<Ap>> {
    let prec = Precision::new(precision_bits)?;
    with_precision(prec, || {
        let lifted = CoeffList::new(poly.coeffs().iter().map(|c| c.at(prec)).collect())?;
        find_roots(&lifted, tol)
    })
}

/// Zeros of `L_n^(α)(n z)` at the current working precision.
pub fn contracted_zeros_in<T: Real>(n: usize, alpha: &T) -> Result<ZeroSet<T>> {
    let spec = LaguerreSpec::contracted(n, alpha.clone())?;
    let poly = monic_rescaled(&spec)?;
    let mut zs = find_roots(&poly, &default_tolerance::<T>())?;
    zs.spec = Some(spec);
    Ok(zs)
}

/// Zeros of `L_n^(α)(n z)` in `precision_bits` (raised to the precision of
/// `alpha` if that is larger).
pub fn contracted_zeros(n: usize, alpha: &Ap, precision_bits: u32) -> Result<ZeroSet<Ap>> {
    let prec = Precision::new(precision_bits.max(alpha.precision_bits()))?;
    with_precision(prec, || contracted_zeros_in(n, &alpha.at(prec)))
}

/// Normalized counting measure `(1/n) Σ δ_ζ`.
pub fn counting_measure<T: Real>(zs: &ZeroSet<T>) -> DiscreteMeasure<T> {
    let n = zs.zeros.len();
    let w = T::one() / T::from_usize(n).unwrap();
    let label = match &zs.spec {
        Some(s) => format!(
            "zeros of L_{}^({})({}z)",
            s.n,
            s.alpha.to_decimal(12),
            s.scale.to_decimal(6)
        ),
        None => format!("zeros of a degree-{n} polynomial"),
    };
    DiscreteMeasure {
        points: zs.zeros.clone(),
        weights: vec![w; n],
        label,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Complex<f64>, b: &Complex<f64>, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn quadratic_example() {
        let poly = CoeffList::new(vec![0.5, 1.0, 1.0]).unwrap();
        let zs = find_roots(&poly, &1e-10).unwrap();
        assert_eq!(zs.len(), 2);
        let a = Complex::new(-0.5, 0.5);
        let b = a.conj();
        assert!(zs.zeros.iter().any(|z| close(z, &a, 1e-14)));
        assert!(zs.zeros.iter().any(|z| close(z, &b, 1e-14)));
        assert_eq!(zs.origin_multiplicity, 0);
    }

    #[test]
    fn triple_origin_root_is_deflated() {
        let spec = LaguerreSpec::contracted(3, -3.0).unwrap();
        let poly = monic_rescaled(&spec).unwrap();
        let zs = find_roots(&poly, &1e-12).unwrap();
        assert_eq!(zs.origin_multiplicity, 3);
        assert!(zs.zeros.iter().all(|z| z.norm() == 0.0));
        assert_eq!(zs.sweeps, 0);
    }

    #[test]
    fn linear_example() {
        let zs = contracted_zeros_in(1, &-1.5f64).unwrap();
        assert_eq!(zs.zeros, vec![Complex::new(-0.5, 0.0)]);
    }

    #[test]
    fn contracted_quadratic() {
        let zs = contracted_zeros_in(2, &-3.0f64).unwrap();
        let a = Complex::new(-0.5, 0.5);
        assert!(zs.zeros.iter().any(|z| close(z, &a, 1e-14)));
        assert!(zs.zeros.iter().any(|z| close(z, &a.conj(), 1e-14)));
    }

    #[test]
    fn rejects_non_monic_input_and_bad_tolerance() {
        let poly = CoeffList::new(vec![1.0, 2.0]).unwrap();
        assert!(find_roots(&poly, &1e-10).is_err());
        let poly = CoeffList::new(vec![1.0, 1.0]).unwrap();
        assert!(find_roots(&poly, &0.0).is_err());
    }

    #[test]
    fn reports_non_convergence_when_precision_is_insufficient() {
        // a tolerance far below double-precision roundoff is unreachable
        let mut coeffs = vec![0.0; 41];
        coeffs[0] = -1e-3;
        coeffs[40] = 1.0;
        coeffs[39] = 40.0 * 1e-2;
        let poly = CoeffList::new(coeffs).unwrap();
        match find_roots(&poly, &1e-30) {
            Err(Error::NonConvergence { best, sweeps, .. }) => {
                assert_eq!(best.len(), 40);
                assert_eq!(sweeps, MAX_SWEEPS);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn counting_measure_is_normalized() {
        let zs = contracted_zeros_in(3, &-3.0f64).unwrap();
        let mu = counting_measure(&zs);
        assert_eq!(mu.support().len(), 1);
        assert_eq!(mu.total_mass(), 1.0);
        let zs = contracted_zeros_in(2, &-3.0f64).unwrap();
        let mu = counting_measure(&zs);
        assert_eq!(mu.weights, vec![0.5, 0.5]);
    }

    #[test]
    fn measure_rejects_bad_weights() {
        let p = vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)];
        assert!(DiscreteMeasure::new(p.clone(), vec![0.5, 0.6], "x").is_err());
        assert!(DiscreteMeasure::new(p.clone(), vec![1.5, -0.5], "x").is_err());
        assert!(DiscreteMeasure::new(p, vec![0.25, 0.75], "x").is_ok());
    }
}
