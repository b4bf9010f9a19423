//! Parameter schedules `α_n` and finite-`n` diagnostics of the contracted
//! zeros against `Γ_r` and `μ_r`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::laguerre::{evaluate, evaluate_at_zero, param_decomposition, LaguerreSpec};
use crate::potential::ks_uniform_angles;
use crate::roots::{contracted_zeros_in, ZeroSet};
use crate::scalar::{cabs, carg, lit, with_precision, Ap, Precision, Real};
use crate::szego::{level_of, phi_map, trace_level_curve};

#[derive(Clone, Debug, PartialEq)]
pub enum ScheduleKind<T> {
    /// `α_n = −n − c`, `c ∈ (0, ½]`.
    Generic { c: T },
    /// `α_n = −n + e^{−rn}`.
    Exponential { r: T },
    /// `α_n = −n + e^{−n²}`.
    Superexponential,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSchedule<T> {
    pub kind: ScheduleKind<T>,
}

pub fn make_schedule<T: Real>(kind: ScheduleKind<T>) -> Result<AlphaSchedule<T>> {
    match &kind {
        ScheduleKind::Generic { c } => {
            if !(*c > T::zero() && *c <= lit::<T>(0.5)) {
                return Err(Error::InvalidSchedule(format!(
                    "generic offset c = {c} is outside (0, 1/2]"
                )));
            }
        }
        ScheduleKind::Exponential { r } => {
            if !r.is_finite() || *r < T::zero() {
                return Err(Error::InvalidSchedule(format!(
                    "exponential rate r = {r} must be non-negative"
                )));
            }
        }
        ScheduleKind::Superexponential => {}
    }
    Ok(AlphaSchedule { kind })
}

impl<T: Real> AlphaSchedule<T> {
    /// `α_n` at the working precision.
    pub fn alpha(&self, n: usize) -> Result<T> {
        if n == 0 {
            return Err(Error::InvalidSchedule("degree must be at least 1".into()));
        }
        let nf = T::from_usize(n).unwrap();
        match &self.kind {
            ScheduleKind::Generic { c } => Ok(-nf - c.clone()),
            ScheduleKind::Exponential { r } => {
                let offset = (-(r.clone() * nf.clone())).exp();
                if offset >= lit::<T>(0.5) {
                    return Err(Error::InvalidSchedule(format!(
                        "e^(-rn) = {} is not below 1/2 at n = {n}",
                        offset.to_f64()
                    )));
                }
                Ok(-nf + offset)
            }
            ScheduleKind::Superexponential => Ok(-nf.clone() + (-(nf.clone() * nf)).exp()),
        }
    }

    /// Bits needed to represent `α_n` with its distance to `S_n` intact.
    pub fn required_bits(&self, n: usize) -> u32 {
        let log2e = std::f64::consts::LOG2_E;
        let nf = n as f64;
        let offset_bits = match &self.kind {
            ScheduleKind::Generic { .. } => 0.0,
            ScheduleKind::Exponential { r } => r.to_f64() * nf * log2e,
            ScheduleKind::Superexponential => nf * nf * log2e,
        };
        let base = Precision::for_degree(n).bits() as f64;
        (base + offset_bits + nf.log2().ceil()).ceil() as u32
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ScheduleKind::Generic { c } => format!("generic({})", c.to_f64()),
            ScheduleKind::Exponential { r } => format!("exponential({})", r.to_f64()),
            ScheduleKind::Superexponential => "superexponential".to_string(),
        }
    }
}

/// Finite-`n` comparison of the contracted zeros with `Γ_{r_eff}` and
/// `μ_{r_eff}`.
#[derive(Clone, Debug)]
pub struct ConvergenceReport<T> {
    pub n: usize,
    pub alpha: T,
    pub r_eff: T,
    /// `max_i | −ln|φ(ζ_i)| − r_eff |`.
    pub level_deviation: T,
    /// KS distance of `arg φ(ζ_i)` from the uniform law on `[0, 2π)`.
    pub ks_theta: T,
    /// `| (1/n) Σ ζ_i^k − δ_{k0} |` for `k = 0..=4`.
    pub moment_gaps: Vec<T>,
    pub supnorm_gap: T,
    pub origin_gap: T,
    pub zeros: ZeroSet<T>,
}

impl<T: Real> ConvergenceReport<T> {
    /// Median over the zeros of `−ln|φ(ζ)|`.
    pub fn median_level(&self) -> T {
        let mut levels: Vec<T> = self.zeros.zeros.iter().map(level_of).collect();
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let m = levels.len();
        if m % 2 == 1 {
            levels[m / 2].clone()
        } else {
            (levels[m / 2 - 1].clone() + levels[m / 2].clone()) * lit::<T>(0.5)
        }
    }
}

pub const MOMENT_ORDERS: usize = 5;

/// Builds the report at the working precision.
pub fn zero_distribution_report<T: Real>(n: usize, alpha: &T, curve_nodes: usize) -> Result<ConvergenceReport<T>> {
    let dec = param_decomposition(n, alpha)?;
    let zeros = contracted_zeros_in(n, alpha)?;
    let r_eff = dec.r_eff.clone();
    let level_deviation = zeros
        .zeros
        .iter()
        .map(|z| (level_of(z) - r_eff.clone()).abs())
        .fold(T::zero(), |a, b| a.max_of(b));
    let two_pi = T::pi() + T::pi();
    let angles: Vec<T> = zeros
        .zeros
        .iter()
        .map(|z| {
            let a = carg(&phi_map(z));
            if a < T::zero() {
                a + two_pi.clone()
            } else {
                a
            }
        })
        .collect();
    let ks_theta = ks_uniform_angles(&angles);
    let moment_gaps = moment_gaps(&zeros);
    let supnorm = supnorm_extremality(n, alpha, &r_eff, curve_nodes)?;
    let supnorm_gap = supnorm - (-r_eff.clone()).exp();
    let origin_gap = origin_extremality(n, alpha)?;
    Ok(ConvergenceReport {
        n,
        alpha: alpha.clone(),
        r_eff,
        level_deviation,
        ks_theta,
        moment_gaps,
        supnorm_gap,
        origin_gap,
        zeros,
    })
}

/// The report computed at `precision_bits`, raised if needed to carry
/// `alpha` at its own precision.
pub fn zero_distribution_report_ap(
    n: usize,
    alpha: &Ap,
    curve_nodes: usize,
    precision_bits: u32,
) -> Result<ConvergenceReport<Ap>> {
    let prec = Precision::new(precision_bits.max(alpha.precision_bits()))?;
    with_precision(prec, || zero_distribution_report(n, &alpha.at(prec), curve_nodes))
}

fn moment_gaps<T: Real>(zeros: &ZeroSet<T>) -> Vec<T> {
    let nf = T::from_usize(zeros.len()).unwrap();
    (0..MOMENT_ORDERS)
        .map(|k| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for z in &zeros.zeros {
                let mut zk = Complex::new(T::one(), T::zero());
                for _ in 0..k {
                    zk = zk * z.clone();
                }
                acc = acc + zk;
            }
            let mean = acc / nf.clone();
            let target = if k == 0 { T::one() } else { T::zero() };
            cabs(&(mean - Complex::new(target, T::zero())))
        })
        .collect()
}

/// `max e^{−Re z} |L_n^{(α)}(nz)|^{1/n}` over `M` samples of `Γ_r`, leaving
/// out the sample at `x₀` and its two neighbours.
pub fn supnorm_extremality<T: Real>(n: usize, alpha: &T, r: &T, nodes: usize) -> Result<T> {
    param_decomposition(n, alpha)?;
    let curve = trace_level_curve(r, nodes)?;
    let spec = LaguerreSpec::contracted(n, alpha.clone())?;
    let nf = T::from_usize(n).unwrap();
    let mut best: Option<T> = None;
    for (j, s) in curve.samples.iter().enumerate() {
        if j == 0 || j == 1 || j == nodes - 1 {
            continue;
        }
        let v = nth_root_modulus(&evaluate(&spec, &s.z), &nf) * (-s.z.re.clone()).exp();
        best = Some(match best {
            Some(b) => b.max_of(v),
            None => v,
        });
    }
    Ok(best.unwrap_or_else(T::zero))
}

/// `e^{−Re z} |L_n^{(α)}(nz)|^{1/n}` at a single point.
pub fn scaled_modulus_at<T: Real>(n: usize, alpha: &T, z: &Complex<T>) -> Result<T> {
    let spec = LaguerreSpec::contracted(n, alpha.clone())?;
    let nf = T::from_usize(n).unwrap();
    Ok(nth_root_modulus(&evaluate(&spec, z), &nf) * (-z.re.clone()).exp())
}

fn nth_root_modulus<T: Real>(v: &Complex<T>, n: &T) -> T {
    let m = cabs(v);
    if m.is_zero() {
        return T::zero();
    }
    (m.ln() / n.clone()).exp()
}

/// `| |L_n^{(α)}(0)|^{1/n} − e^{−r_eff} |`.
pub fn origin_extremality<T: Real>(n: usize, alpha: &T) -> Result<T> {
    let dec = param_decomposition(n, alpha)?;
    let spec = LaguerreSpec::unscaled(n, alpha.clone())?;
    let nf = T::from_usize(n).unwrap();
    let at_zero = Complex::new(evaluate_at_zero(&spec), T::zero());
    Ok((nth_root_modulus(&at_zero, &nf) - (-dec.r_eff).exp()).abs())
}
