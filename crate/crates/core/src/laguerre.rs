//! Laguerre polynomials `L_n^(α)` for arbitrary real `α`.
//!
//! Evaluation goes through the three-term recurrence; the explicit
//! coefficient form is only built for root finding and for exact checks.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, panel};
use crate::scalar::{lit, with_precision, Ap, Precision, Real, Scalar};

/// One rescaled polynomial `z ↦ L_n^(α)(scale · z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreSpec<T> {
    pub n: usize,
    pub alpha: T,
    pub scale: T,
}

impl<T: Scalar + PartialOrd> LaguerreSpec<T> {
    pub fn new(n: usize, alpha: T, scale: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("degree must be at least 1".into()));
        }
        if scale <= T::zero() {
            return Err(Error::InvalidParameter("scale must be positive".into()));
        }
        Ok(LaguerreSpec { n, alpha, scale })
    }

    /// `L_n^(α)(z)` itself.
    pub fn unscaled(n: usize, alpha: T) -> Result<Self> {
        Self::new(n, alpha, T::one())
    }

    /// The contracted polynomial `L_n^(α)(n z)`.
    pub fn contracted(n: usize, alpha: T) -> Result<Self> {
        let scale = T::from_usize(n).expect("degree fits the scalar");
        Self::new(n, alpha, scale)
    }
}

impl LaguerreSpec<Ap> {
    /// Rounds `alpha` and `scale` to `prec`.
    pub fn at(&self, prec: Precision) -> Self {
        LaguerreSpec {
            n: self.n,
            alpha: self.alpha.at(prec),
            scale: self.scale.at(prec),
        }
    }
}

/// Ascending coefficients of a degree-`n` polynomial with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffList<T> {
    coeffs: Vec<T>,
    monic: bool,
}

impl<T: Scalar> CoeffList<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidParameter("polynomial must have degree at least 1".into()));
        }
        let lead = coeffs.last().unwrap();
        if lead.is_zero() {
            return Err(Error::InvalidParameter("leading coefficient vanishes".into()));
        }
        let monic = lead.is_one();
        Ok(CoeffList { coeffs, monic })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.monic
    }

    pub fn leading(&self) -> &T {
        self.coeffs.last().unwrap()
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, z: &Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + Complex::new(c.clone(), T::zero());
        }
        acc
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }
}

/// `binom(n + α, m)` as the product `Π_{j=1}^{m} (α + n − m + j) / j`.
fn generalized_binomial<T: Scalar>(n: usize, alpha: &T, m: usize) -> T {
    let base = alpha.clone() + T::from_usize(n - m).unwrap();
    let mut acc = T::one();
    for j in 1..=m {
        let jt = T::from_usize(j).unwrap();
        acc = acc * (base.clone() + jt.clone()) / jt;
    }
    acc
}

fn factorial<T: Scalar>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * T::from_usize(j).unwrap())
}

/// Coefficients of `L_n^(α)(scale · z)`:
/// `c_k = binom(n+α, n−k) (−scale)^k / k!`.
pub fn coefficients<T: Scalar>(spec: &LaguerreSpec<T>) -> CoeffList<T> {
    let n = spec.n;
    let mut coeffs = Vec::with_capacity(n + 1);
    let minus_scale = -spec.scale.clone();
    let mut power_over_fact = T::one();
    for k in 0..=n {
        if k > 0 {
            power_over_fact = power_over_fact * minus_scale.clone() / T::from_usize(k).unwrap();
        }
        coeffs.push(generalized_binomial(n, &spec.alpha, n - k) * power_over_fact.clone());
    }
    CoeffList { coeffs, monic: false }
}

/// [`coefficients`] at an explicit precision (at least 64 bits).
pub fn coefficients_ap(spec: &LaguerreSpec<Ap>, precision_bits: u32) -> Result<CoeffList<Ap>> {
    let prec = Precision::new(precision_bits)?;
    Ok(with_precision(prec, || coefficients(&spec.at(prec))))
}

/// `(−1)^n n^n / n!`, the leading coefficient of `L_n^(α)(n z)`.
pub fn contracted_leading_coefficient<T: Scalar>(n: usize) -> T {
    let nt = T::from_usize(n).unwrap();
    let mut acc = T::one();
    for j in 1..=n {
        acc = acc * nt.clone() / T::from_usize(j).unwrap();
    }
    if n % 2 == 1 {
        -acc
    } else {
        acc
    }
}

/// `L_n^(α)(w)` by the three-term recurrence; `n = 0` gives 1.
pub fn laguerre_value<T: Scalar>(n: usize, alpha: &T, w: &Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    if n == 0 {
        return one;
    }
    let a = Complex::new(alpha.clone(), T::zero());
    let mut prev = one.clone();
    let mut cur = one + a.clone() - w.clone();
    for k in 1..n {
        let kt = T::from_usize(k).unwrap();
        let two_k_plus_one = Complex::new(kt.clone() + kt.clone() + T::one(), T::zero());
        let next = ((two_k_plus_one + a.clone() - w.clone()) * cur.clone()
            - (Complex::new(kt.clone(), T::zero()) + a.clone()) * prev)
            / (kt + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n^(α)(scale · z)`.
pub fn evaluate<T: Scalar>(spec: &LaguerreSpec<T>, z: &Complex<T>) -> Complex<T> {
    let w = z.clone() * spec.scale.clone();
    laguerre_value(spec.n, &spec.alpha, &w)
}

/// `L_n^(α)(0) = binom(n+α, n) = Π_{k=1}^{n} (α+k)/k`.
pub fn evaluate_at_zero<T: Scalar>(spec: &LaguerreSpec<T>) -> T {
    generalized_binomial(spec.n, &spec.alpha, spec.n)
}

/// Monic `p_n(z) = L_n^(α)(n z) / l_n` with `l_n = (−1)^n n^n / n!`.
pub fn monic_rescaled<T: Scalar>(spec: &LaguerreSpec<T>) -> Result<CoeffList<T>> {
    let n = T::from_usize(spec.n).unwrap();
    if spec.scale != n {
        return Err(Error::InvalidParameter(
            "monic rescaling requires the contraction scale to equal the degree".into(),
        ));
    }
    let lead = contracted_leading_coefficient::<T>(spec.n);
    let mut coeffs: Vec<T> = coefficients(spec)
        .coeffs
        .into_iter()
        .map(|c| c / lead.clone())
        .collect();
    *coeffs.last_mut().unwrap() = T::one();
    Ok(CoeffList { coeffs, monic: true })
}

/// Position of `α` relative to the integer set `S_n = {−n, …, −1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamDecomposition<T> {
    /// `dist(α, S_n) = |α + h_n|`.
    pub dist: T,
    /// Index of the nearest element `−h_n` of `S_n`.
    pub h_n: usize,
    /// `min(⌊−α⌋, n)`.
    pub k_n: i64,
    /// `α = −k_n − δ_n`.
    pub delta_n: T,
    /// `−ln(dist) / n`.
    pub r_eff: T,
}

/// Decomposes `α` against `S_n`. Midpoint ties go to the smaller `h_n`.
pub fn param_decomposition<T: Real>(n: usize, alpha: &T) -> Result<ParamDecomposition<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let neg = -alpha.clone();
    // smallest h with |α + h| minimal: ceil(−α − 1/2), clamped to 1..=n
    let shifted = neg.clone() - lit::<T>(0.5);
    let mut h = shifted.floor();
    if h != shifted {
        h = h + T::one();
    }
    let h_n = h.to_i64().clamp(1, n as i64) as usize;
    let dist = (alpha.clone() + T::from_usize(h_n).unwrap()).abs();
    if dist.is_zero() {
        return Err(Error::DegenerateParameter {
            n,
            alpha: alpha.to_decimal(20),
        });
    }
    let k_n = neg.floor().to_i64().min(n as i64);
    let delta_n = neg - T::from_i64(k_n).unwrap();
    let r_eff = -dist.ln() / T::from_usize(n).unwrap();
    Ok(ParamDecomposition {
        dist,
        h_n,
        k_n,
        delta_n,
        r_eff,
    })
}

/// `|L_n^(−k)(z) − (−z)^k (n−k)!/n! · L_{n−k}^(k)(z)|`, the defect of the
/// degenerate-parameter identity.
pub fn degenerate_identity_residual<T: Real>(n: usize, k: usize, z: &Complex<T>) -> T {
    assert!(1 <= k && k <= n, "identity needs 1 <= k <= n");
    let kt = T::from_usize(k).unwrap();
    let lhs = laguerre_value(n, &(-kt.clone()), z);
    let mut mz_pow = Complex::new(T::one(), T::zero());
    for _ in 0..k {
        mz_pow = mz_pow * (-z.clone());
    }
    let ratio = factorial::<T>(n - k) / factorial::<T>(n);
    let rhs = mz_pow * ratio * laguerre_value(n - k, &kt, z);
    crate::scalar::cabs(&(lhs - rhs))
}

/// `L_n^(−n−1)(z) = (−1)^n Σ_{k≤n} z^k/k!`, checked coefficient by
/// coefficient. Exact when `T` is a rational type.
pub fn partial_sum_identity_holds<T: Scalar>(n: usize) -> bool {
    let alpha = -T::from_usize(n + 1).unwrap();
    let spec = LaguerreSpec {
        n,
        alpha,
        scale: T::one(),
    };
    let sign = if n.is_multiple_of(2) { T::one() } else { -T::one() };
    coefficients(&spec)
        .coeffs
        .iter()
        .enumerate()
        .all(|(k, c)| *c == sign.clone() / factorial::<T>(k))
}

/// Both sides of `e^{−x} L_n^(α)(x) = Γ(β−α)^{−1} ∫_x^∞ (t−x)^{β−α−1} e^{−t} L_n^(β)(t) dt`.
#[derive(Clone, Debug)]
pub struct AskeyCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub abs_error: T,
    /// Bound on the truncated part of the integral, already divided by `Γ(β−α)`.
    pub tail_bound: T,
}

/// Gauss–Legendre points per panel used when the caller does not choose.
pub const DEFAULT_QUAD_NODES: usize = 20;

/// Panels halving toward the singular endpoint of the near-field piece.
const ASKEY_GRADED_PANELS: usize = 48;

/// Checks the integral representation along the real half-line from `x`.
///
/// On `[x, x+1]` the substitution `u = (t−x)^{β−α}` removes the endpoint
/// singularity; `[x+1, x+40+4n]` uses unit-width panels and the rest is
/// bounded through `|L_n^(β)(t)| ≤ Σ|c_k| t^n`.
pub fn askey_check<T: Real>(n: usize, alpha: &T, beta: &T, x: &T, quad_nodes: usize) -> Result<AskeyCheck<T>> {
    if beta <= alpha {
        return Err(Error::InvalidParameter("askey_check needs beta > alpha".into()));
    }
    if *x < T::zero() {
        return Err(Error::InvalidParameter("askey_check needs x >= 0".into()));
    }
    if quad_nodes == 0 {
        return Err(Error::InvalidParameter("quadrature needs at least one node".into()));
    }
    let nu = beta.clone() - alpha.clone();
    let inv_nu = T::one() / nu.clone();
    let rule = gauss_legendre::<T>(quad_nodes);
    let zero = T::zero();
    let real = |v: Complex<T>| v.re;
    let integrand = |t: &T| -> T {
        let w = Complex::new(t.clone(), T::zero());
        (-t.clone()).exp() * real(laguerre_value(n, beta, &w))
    };

    let lhs = (-x.clone()).exp() * real(laguerre_value(n, alpha, &Complex::new(x.clone(), zero.clone())));

    // near field: (1/ν) ∫_0^1 f(x + u^{1/ν}) du
    let near_f = |u: &T| -> T {
        if u.is_zero() {
            return integrand(x);
        }
        integrand(&(x.clone() + u.powf(&inv_nu)))
    };
    let mut near = T::zero();
    let half = lit::<T>(0.5);
    let mut hi = T::one();
    for _ in 0..ASKEY_GRADED_PANELS {
        let lo = hi.clone() * half.clone();
        near = near + panel(&rule, &lo, &hi, &near_f);
        hi = lo;
    }
    near = near + panel(&rule, &zero, &hi, &near_f);
    near = near * inv_nu;

    // far field on unit panels
    let cutoff = 40 + 4 * n;
    let nu_minus_one = nu.clone() - T::one();
    let far_f = |t: &T| -> T { (t.clone() - x.clone()).powf(&nu_minus_one) * integrand(t) };
    let mut far = T::zero();
    for j in 1..cutoff {
        let a = x.clone() + T::from_usize(j).unwrap();
        let b = a.clone() + T::one();
        far = far + panel(&rule, &a, &b, &far_f);
    }

    let gamma = nu.gamma();
    let rhs = (near + far) / gamma.clone();

    let end = x.clone() + T::from_usize(cutoff).unwrap();
    let coeff_sum = coefficients(&LaguerreSpec {
        n,
        alpha: beta.clone(),
        scale: T::one(),
    })
    .coeffs
    .iter()
    .fold(T::zero(), |acc, c| acc + c.abs());
    let extra = if nu_minus_one > T::zero() {
        nu_minus_one.clone()
    } else {
        T::zero()
    };
    let m = T::from_usize(n).unwrap() + extra;
    let tail_bound = if end > m {
        coeff_sum * end.powf(&m) * (-end.clone()).exp() / (T::one() - m / end) / gamma.abs()
    } else {
        lit::<T>(f64::MAX)
    };

    let abs_error = (lhs.clone() - rhs.clone()).abs();
    Ok(AskeyCheck {
        lhs,
        rhs,
        abs_error,
        tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::FromPrimitive;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn rational_spec(n: usize, alpha: BigRational) -> LaguerreSpec<BigRational> {
        LaguerreSpec::unscaled(n, alpha).unwrap()
    }

    #[test]
    fn partial_sum_case_n2() {
        let c = coefficients(&rational_spec(2, q(-3, 1)));
        assert_eq!(c.coeffs(), &[q(1, 1), q(1, 1), q(1, 2)]);
    }

    #[test]
    fn multiple_zero_case_n3() {
        let c = coefficients(&rational_spec(3, q(-3, 1)));
        assert_eq!(c.coeffs(), &[q(0, 1), q(0, 1), q(0, 1), q(-1, 6)]);
    }

    #[test]
    fn degree_one_expansion() {
        let alpha = q(7, 3);
        let c = coefficients(&rational_spec(1, alpha.clone()));
        assert_eq!(c.coeffs(), &[q(1, 1) + alpha, q(-1, 1)]);
    }

    #[test]
    fn evaluate_examples() {
        let z = |x: f64| Complex::new(x, 0.0);
        let s = LaguerreSpec::unscaled(1, 2.5).unwrap();
        assert_eq!(evaluate(&s, &z(1.0)).re, 2.5);
        let s = LaguerreSpec::unscaled(2, -3.0).unwrap();
        assert_eq!(evaluate(&s, &z(2.0)).re, 5.0);
        let s = LaguerreSpec::unscaled(3, -3.0).unwrap();
        assert_eq!(evaluate(&s, &z(6.0)).re, -36.0);
    }

    #[test]
    fn value_at_origin_examples() {
        assert_eq!(evaluate_at_zero(&rational_spec(2, q(-3, 1))), q(1, 1));
        assert_eq!(evaluate_at_zero(&rational_spec(3, q(-3, 1))), q(0, 1));
        assert_eq!(evaluate_at_zero(&rational_spec(1, q(-3, 2))), q(-1, 2));
    }

    #[test]
    fn monic_rescaled_examples() {
        let alpha = q(-5, 2);
        let p = monic_rescaled(&LaguerreSpec::contracted(1, alpha.clone()).unwrap()).unwrap();
        assert_eq!(p.coeffs(), &[-(q(1, 1) + alpha), q(1, 1)]);
        let p = monic_rescaled(&LaguerreSpec::contracted(2, q(-3, 1)).unwrap()).unwrap();
        assert_eq!(p.coeffs(), &[q(1, 2), q(1, 1), q(1, 1)]);
        assert!(p.is_monic());
        let p = monic_rescaled(&LaguerreSpec::contracted(3, q(-3, 1)).unwrap()).unwrap();
        assert_eq!(p.coeffs(), &[q(0, 1), q(0, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn monic_rescaled_rejects_other_scales() {
        let s = LaguerreSpec::new(3, q(-3, 1), q(2, 1)).unwrap();
        assert!(matches!(monic_rescaled(&s), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn spec_rejects_bad_degree_and_scale() {
        assert!(LaguerreSpec::new(0, 1.0, 1.0).is_err());
        assert!(LaguerreSpec::new(2, 1.0, 0.0).is_err());
        assert!(LaguerreSpec::new(2, 1.0, -1.0).is_err());
    }

    #[test]
    fn coefficient_precision_floor() {
        let s = LaguerreSpec::unscaled(3, Ap::with_prec(-1.5, Precision::default())).unwrap();
        assert!(matches!(coefficients_ap(&s, 32), Err(Error::Config(_))));
        let c = coefficients_ap(&s, 256).unwrap();
        assert_eq!(c.coeffs()[0].precision_bits(), 256);
    }

    #[test]
    fn decomposition_n60_generic() {
        let d = param_decomposition(60, &-60.1).unwrap();
        assert!((d.dist - 0.1).abs() < 1e-12);
        assert_eq!(d.h_n, 60);
        assert_eq!(d.k_n, 60);
        assert!((d.delta_n - 0.1).abs() < 1e-12);
        assert!((d.r_eff - 10f64.ln() / 60.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_n60_near_integer() {
        let p = Precision::new(256).unwrap();
        let alpha = Ap::parse("-59.99999", p).unwrap();
        let d = with_precision(p, || param_decomposition(60, &alpha).unwrap());
        let expected = with_precision(p, || Ap::from_i64(10).unwrap().ln() / Ap::from_i64(12).unwrap());
        assert!((d.r_eff - expected).abs() < Ap::with_prec(1e-60, p));
        assert_eq!(d.h_n, 60);
        assert_eq!(d.k_n, 59);
    }

    #[test]
    fn decomposition_midpoint_tie_prefers_smaller_index() {
        let d = param_decomposition(60, &-30.5).unwrap();
        assert_eq!(d.h_n, 30);
        assert_eq!(d.k_n, 30);
        assert_eq!(d.dist, 0.5);
        assert_eq!(d.delta_n, 0.5);
    }

    #[test]
    fn decomposition_rejects_degenerate_parameters() {
        for k in 1..=5 {
            assert!(matches!(
                param_decomposition(5, &-(k as f64)),
                Err(Error::DegenerateParameter { .. })
            ));
        }
        assert!(param_decomposition(5, &-6.0).is_ok());
    }

    #[test]
    fn askey_examples() {
        let c = askey_check(1, &-0.5, &0.0, &0.0, 20).unwrap();
        assert!((c.lhs - 0.5).abs() < 1e-15);
        assert!(c.abs_error < 1e-9, "{c:?}");

        let c = askey_check(0, &-1.2, &0.7, &1.3, 20).unwrap();
        assert!((c.lhs - (-1.3f64).exp()).abs() < 1e-15);
        assert!(c.abs_error < 1e-9, "{c:?}");

        // independent route: direct evaluation of the left side via the
        // explicit coefficients of L_4^(-4.3)
        let direct = coefficients(&LaguerreSpec::unscaled(4, -4.3).unwrap())
            .eval(&Complex::new(0.5, 0.0))
            .re
            * (-0.5f64).exp();
        let c = askey_check(4, &-4.3, &-4.0, &0.5, 20).unwrap();
        assert!((c.lhs - direct).abs() < 1e-14);
        assert!(c.abs_error < 1e-6, "{c:?}");
        assert!(c.tail_bound < 1e-10);
    }

    #[test]
    fn askey_rejects_bad_parameters() {
        assert!(askey_check(2, &0.0, &0.0, &0.0, 10).is_err());
        assert!(askey_check(2, &0.0, &1.0, &-1.0, 10).is_err());
    }
}
