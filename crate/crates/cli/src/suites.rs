//! Verification suites behind `szego verify`.

use anyhow::Result;
use num_complex::Complex;
use szego_core::laguerre::{
    askey_check, coefficients, degenerate_identity_residual, evaluate, partial_sum_identity_holds, DEFAULT_QUAD_NODES,
};
use szego_core::potential::{
    curve_with_weights, default_test_points, discretize_mu_r_with, pullback_density, verify_balayage, weighted_energy,
    weighted_leja, ExternalField, NodeLaw, DEFAULT_LEJA_GRID_FACTOR,
};
use szego_core::scalar::{cabs, lit};
use szego_core::{trace_level_curve, Ap, DiscreteMeasure, LaguerreSpec, Level, Precision, Rational, Real};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {:.3e} (tolerance {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tolerance
        )
    }
}

pub const MASS_TOLERANCE: f64 = 1e-12;
pub const MOMENT_TOLERANCE: f64 = 1e-10;
/// Nodes used for the discrete energy.
pub const ENERGY_NODES: usize = 512;
/// Diagonal-free energy bias at 512 nodes, from the 128/256/512 study.
pub const ENERGY_TOLERANCE: f64 = 0.02;
pub const LEJA_POINTS: usize = 128;
pub const LEJA_RELATIVE_TOLERANCE: f64 = 0.05;
/// Interior test points closer than this to the curve are skipped.
pub const INTERIOR_CLEARANCE: f64 = 0.05;

pub fn measure_identities(level: &Level<Ap>, nodes: usize) -> Result<Vec<Check>> {
    let r = match level {
        Level::Infinite => {
            let mu = DiscreteMeasure::atom(Complex::new(lit::<Ap>(0.0), lit::<Ap>(0.0)), "mu_inf");
            return Ok(vec![Check::at_most(
                "total mass",
                (mu.total_mass().to_f64() - 1.0).abs(),
                MASS_TOLERANCE,
            )]);
        }
        Level::Finite(r) => r,
    };
    let (curve, weights) = curve_with_weights(r, nodes, NodeLaw::auto(r, nodes))?;
    let density = pullback_density(&curve);
    let mu = DiscreteMeasure::new(curve.samples.iter().map(|s| s.z.clone()).collect(), weights, "mu_r")?;
    let mut out = vec![Check::at_most(
        "total mass",
        (mu.total_mass() - lit::<Ap>(1.0)).abs().to_f64(),
        MASS_TOLERANCE,
    )];
    let min_density = density
        .iter()
        .cloned()
        .fold(lit::<Ap>(f64::MAX), |a, b| a.min_of(b))
        .to_f64();
    out.push(Check {
        name: "minimum pullback density".into(),
        value: min_density,
        tolerance: 0.0,
        pass: min_density >= 0.0,
    });
    for k in 0..=6u32 {
        let target = if k == 0 { lit::<Ap>(1.0) } else { lit::<Ap>(0.0) };
        let gap = cabs(&(mu.moment(k) - Complex::new(target, lit::<Ap>(0.0)))).to_f64();
        out.push(Check::at_most(format!("moment {k}"), gap, MOMENT_TOLERANCE));
    }
    Ok(out)
}

pub fn balayage(r: &Ap, nodes: usize) -> Result<Vec<Check>> {
    let (interior, exterior) = default_test_points(r)?;
    let curve = trace_level_curve(r, nodes)?;
    let clearance = lit::<Ap>(INTERIOR_CLEARANCE);
    let interior: Vec<_> = interior
        .into_iter()
        .filter(|z| curve.distance_to(z) >= clearance)
        .collect();
    let rep = verify_balayage(r, nodes, &interior, &exterior)?;
    Ok(rep
        .checks
        .iter()
        .map(|c| {
            Check::at_most(
                format!(
                    "{} at ({:.4}, {:.4})",
                    c.identity,
                    c.point.re.to_f64(),
                    c.point.im.to_f64()
                ),
                c.abs_error.to_f64(),
                c.tolerance,
            )
        })
        .collect())
}

pub fn robin(r: &Ap) -> Result<Vec<Check>> {
    let target = (r.to_f64() + 1.0) / 2.0;
    let mu = discretize_mu_r_with(r, ENERGY_NODES, NodeLaw::Uniform)?;
    let e = weighted_energy(&mu, ExternalField::HalfLogPlusRe)?;
    let leja = weighted_leja(r, LEJA_POINTS, DEFAULT_LEJA_GRID_FACTOR * LEJA_POINTS)?;
    let rel = (leja.robin_estimate.to_f64() - target).abs() / target;
    Ok(vec![
        Check::at_most(
            format!("energy Robin functional vs {target}"),
            (e.robin.to_f64() - target).abs(),
            ENERGY_TOLERANCE,
        ),
        Check::at_most(
            format!("Leja Robin estimate vs {target} (relative)"),
            rel,
            LEJA_RELATIVE_TOLERANCE,
        ),
    ])
}

/// Deterministic low-discrepancy sequence in `[0, 1)`.
fn golden(j: usize) -> f64 {
    (j as f64 * 0.618_033_988_749_894_9).fract()
}

pub fn laguerre_identities() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let p256 = Precision::new(256)?;
    let worst = szego_core::with_precision(p256, || {
        let pts = [(0.7, 0.2), (-1.3, 2.1), (2.5, -0.4), (0.0, 3.0)];
        let mut worst = 0.0f64;
        for (a, b) in pts {
            let z = Complex::new(Ap::with_prec(a, p256), Ap::with_prec(b, p256));
            for n in 1..=10 {
                for k in 1..=n {
                    worst = worst.max(degenerate_identity_residual(n, k, &z).to_f64());
                }
            }
        }
        worst
    });
    out.push(Check::at_most("degenerate identity, 1 <= k <= n <= 10", worst, 1e-20));
    let exact = (1..=20).all(partial_sum_identity_holds::<Rational>);
    out.push(Check {
        name: "partial-sum coefficients, n <= 20 (exact)".into(),
        value: if exact { 0.0 } else { 1.0 },
        tolerance: 0.0,
        pass: exact,
    });
    out.push(Check::at_most(
        "recurrence vs coefficients (relative to term size)",
        recurrence_oracle_gap(),
        2f64.powi(-64),
    ));
    for (n, a, b, x) in [(1, -0.5, 0.0, 0.0), (0, -1.2, 0.7, 1.3), (4, -4.3, -4.0, 0.5)] {
        let c = askey_check(n, &a, &b, &x, DEFAULT_QUAD_NODES)?;
        out.push(Check::at_most(
            format!("Askey representation n={n} alpha={a} beta={b} x={x}"),
            c.abs_error,
            1e-6,
        ));
    }
    Ok(out)
}

/// Largest `|recurrence − Horner| / Σ|c_k||z|^k` over `n ≤ 12`, 50 values of
/// `α ∈ [−15, 5]` and 20 points with `|z| ≤ 3`, at 128 bits.
pub fn recurrence_oracle_gap() -> f64 {
    let p = Precision::default();
    szego_core::with_precision(p, || {
        let mut worst = 0.0f64;
        for n in 1..=12 {
            for i in 0..50 {
                let alpha = Ap::with_prec(-15.0 + 20.0 * golden(i + 1), p);
                let spec = LaguerreSpec::unscaled(n, alpha).expect("degree is positive");
                let coeffs = coefficients(&spec);
                for j in 0..20 {
                    let rho = 3.0 * golden(1000 + j);
                    let t = std::f64::consts::TAU * golden(2000 + 7 * j);
                    let z = Complex::new(Ap::with_prec(rho * t.cos(), p), Ap::with_prec(rho * t.sin(), p));
                    let diff = cabs(&(evaluate(&spec, &z) - coeffs.eval(&z)));
                    let modz = cabs(&z);
                    let mut size = lit::<Ap>(0.0);
                    let mut pow = lit::<Ap>(1.0);
                    for c in coeffs.coeffs() {
                        size += c.abs() * pow.clone();
                        pow *= modz.clone();
                    }
                    worst = worst.max((diff / size).to_f64());
                }
            }
        }
        worst
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_suite_passes() {
        for c in laguerre_identities().unwrap() {
            assert!(c.pass, "{}", c.line());
        }
    }

    #[test]
    fn check_lines() {
        let c = Check::at_most("x", 1e-3, 1e-2);
        assert!(c.line().starts_with("PASS x: 1.000e-3"));
        assert!(!Check::at_most("y", 1.0, 0.5).pass);
    }
}
