//! Gauss–Legendre rules at the working precision.

use crate::scalar::{lit, Real};

/// Nodes and weights of the `q`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(q: usize) -> (Vec<T>, Vec<T>) {
    assert!(q >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![T::zero(); q];
    let mut weights = vec![T::zero(); q];
    let tol = T::epsilon() * lit::<T>(16.0);
    let qf = q as f64;
    for i in 0..q.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root.
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (qf + 0.5)).cos();
        let mut x: T = lit(guess);
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(q, &x);
            dp = d;
            let dx = p / dp.clone();
            x = x - dx.clone();
            if dx.abs() <= tol {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(q, &x);
        if d != T::zero() {
            dp = d;
        }
        let w = lit::<T>(2.0) / ((T::one() - x.clone() * x.clone()) * dp.clone() * dp);
        nodes[i] = x.clone();
        nodes[q - 1 - i] = -x;
        weights[i] = w.clone();
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(q: usize, x: &T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x.clone();
    for k in 1..q {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((lit::<T>(2.0) * kf.clone() + T::one()) * x.clone() * p1.clone() - kf.clone() * p0) / (kf + T::one());
        p0 = p1;
        p1 = p2;
    }
    let qf = T::from_usize(q).unwrap();
    let d = qf * (x.clone() * p1.clone() - p0) / (x.clone() * x.clone() - T::one());
    (p1, d)
}

/// Integrates `f` over `[a, b]` with one `q`-point panel.
pub fn panel<T: Real>(rule: &(Vec<T>, Vec<T>), a: &T, b: &T, mut f: impl FnMut(&T) -> T) -> T {
    let half = (b.clone() - a.clone()) * lit::<T>(0.5);
    let mid = (b.clone() + a.clone()) * lit::<T>(0.5);
    let mut acc = T::zero();
    for (x, w) in rule.0.iter().zip(&rule.1) {
        let t = mid.clone() + half.clone() * x.clone();
        acc = acc + w.clone() * f(&t);
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{with_precision, Ap, Precision};
    use num_traits::{One, Zero};

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = gauss_legendre::<f64>(10);
        // degree 19 is the exactness limit of a 10-point rule
        let v = panel(&rule, &0.0, &1.0, |x| x.powi(19));
        assert!((v - 1.0 / 20.0).abs() < 1e-15);
        let s: f64 = rule.1.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn multiprecision_rule_is_accurate() {
        with_precision(Precision::new(200).unwrap(), || {
            let rule = gauss_legendre::<Ap>(24);
            let v = panel(&rule, &Ap::zero(), &Ap::one(), |x| x.exp());
            let exact = Ap::one().exp() - Ap::one();
            assert!((v - exact).abs() < Ap::with_prec(1e-50, Precision::new(200).unwrap()));
        });
    }
}
