//! Slow, independent reference computations used to validate the fast paths.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::config::LinkConfig;
use crate::error::{Error, Result};
use crate::geometry::{
    build_channel_matrix, dft_sandwich, mode_channel_gain, mode_channel_gain_leading, DistanceModel,
};
use crate::jamming::{draw_noise_block, draw_targeted_jamming_block, RandomStream};
use crate::sensing::{detection_probabilities, sense_modes};
use crate::special::bessel_j;

/// `J_l(x) = sum_k (-1)^k (x/2)^(2k+l) / (k! (k+l)!)` in exact rational
/// arithmetic; `x` is taken as its exact binary value.
pub fn bessel_j_series(order: i64, x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 100.0 {
        return Err(Error::Domain(format!("series oracle needs |x| <= 100, got {x}")));
    }
    let l = order.unsigned_abs();
    let half = BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("x = {x}")))? / BigInt::from(2);
    let half_sq = &half * &half;
    // First term (x/2)^l / l!.
    let mut term = BigRational::one();
    for i in 1..=l {
        term = term * &half / BigInt::from(i);
    }
    let mut sum = BigRational::zero();
    let tiny = BigRational::new(BigInt::one(), BigInt::from(10).pow(40));
    let mut k: u64 = 0;
    loop {
        sum += &term;
        k += 1;
        term = -term * &half_sq / BigInt::from(k * (k + l));
        // Past the peak the terms shrink monotonically.
        if (k as f64) > x * x / 4.0 && term.abs() < tiny {
            break;
        }
    }
    let value = sum
        .to_f64()
        .ok_or_else(|| Error::Numeric("series did not convert".into()))?;
    Ok(if order < 0 && l % 2 == 1 { -value } else { value })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl OracleCheck {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        OracleCheck {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Largest `|fast - series|` over the orders and arguments.
pub fn bessel_max_error(orders: impl Iterator<Item = i64> + Clone, args: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in args {
        for l in orders.clone() {
            worst = worst.max((bessel_j(l, x)? - bessel_j_series(l, x)?).abs());
        }
    }
    Ok(worst)
}

/// Largest `|J_{l-1} + J_{l+1} - (2l/x) J_l|`.
pub fn bessel_recurrence_error(orders: impl Iterator<Item = i64> + Clone, args: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in args.iter().filter(|x| **x != 0.0) {
        for l in orders.clone() {
            let lhs = bessel_j(l - 1, x)? + bessel_j(l + 1, x)?;
            worst = worst.max((lhs - 2.0 * l as f64 / x * bessel_j(l, x)?).abs());
        }
    }
    Ok(worst)
}

/// `|DFT sandwich| / |closed form|` for every mode. Constant (`sqrt(N)`)
/// when the closed form is right.
pub fn gain_ratios(config: &LinkConfig, leading_only: bool) -> Result<Vec<f64>> {
    let h = build_channel_matrix(config, DistanceModel::Approximate);
    config
        .mode_range()
        .iter()
        .map(|l| {
            let closed = if leading_only {
                mode_channel_gain_leading(config, l)?
            } else {
                mode_channel_gain(config, l)?
            };
            Ok(dft_sandwich(&h, l).norm() / closed.norm())
        })
        .collect()
}

/// `max_l |ratio_l / ratio_0 - 1|`.
pub fn ratio_spread(ratios: &[f64]) -> f64 {
    let first = ratios[0];
    ratios.iter().map(|r| (r / first - 1.0).abs()).fold(0.0, f64::max)
}

/// Worst entrywise relative modulus and absolute phase gap (radians)
/// between the exact- and approximate-distance matrices.
pub fn distance_model_gap(config: &LinkConfig) -> (f64, f64) {
    let exact = build_channel_matrix(config, DistanceModel::Exact);
    let approx = build_channel_matrix(config, DistanceModel::Approximate);
    let mut modulus: f64 = 0.0;
    let mut phase: f64 = 0.0;
    for (e, a) in exact.entries().iter().zip(approx.entries()) {
        modulus = modulus.max((e.norm() / a.norm() - 1.0).abs());
        phase = phase.max((e / a).arg().abs());
    }
    (modulus, phase)
}

/// Monte Carlo sensing frequencies next to the analytic gamma-CDF values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorComparison {
    pub p_j_empirical: f64,
    pub p_u_empirical: f64,
    pub p_j: f64,
    pub p_u: f64,
    pub trials: usize,
}

impl DetectorComparison {
    /// Gaps in units of the binomial standard error at the analytic value.
    pub fn z_scores(&self) -> (f64, f64) {
        let n = self.trials as f64;
        let z = |emp: f64, p: f64| {
            let se = (p * (1.0 - p) / n).sqrt();
            let gap = (emp - p).abs();
            if gap == 0.0 {
                0.0
            } else if se == 0.0 {
                f64::INFINITY
            } else {
                gap / se
            }
        };
        (z(self.p_j_empirical, self.p_j), z(self.p_u_empirical, self.p_u))
    }
}

/// One 16-element array per trial: mode 2 jammed with per-element power
/// `jam_per_element` (mode variance `16 x` that), every element with
/// noise `noise_variance`. Counts mode 2 flagged jammed and mode -3 left unjammed.
pub fn detector_monte_carlo(
    k: usize,
    jam_per_element: f64,
    noise_variance: f64,
    energy_threshold: f64,
    trials: usize,
    seed: u64,
) -> Result<DetectorComparison> {
    let n = 16;
    let (mut hit_j, mut hit_u) = (0usize, 0usize);
    for t in 0..trials as u64 {
        let s = RandomStream::new(seed, t);
        let mut block = draw_targeted_jamming_block(&mut s.substream(1), n, k, jam_per_element, &[2], 1.0)?;
        block.accumulate(&draw_noise_block(&mut s.substream(2), n, k, noise_variance, 1.0)?)?;
        let p = sense_modes(&block, energy_threshold)?;
        hit_j += usize::from(p.is_jammed(2));
        hit_u += usize::from(!p.is_jammed(-3));
    }
    let k32 = k as u32;
    let jammed = detection_probabilities(energy_threshold, k32, n as f64 * jam_per_element + noise_variance)?;
    let quiet = detection_probabilities(energy_threshold, k32, noise_variance)?;
    Ok(DetectorComparison {
        p_j_empirical: hit_j as f64 / trials as f64,
        p_u_empirical: hit_u as f64 / trials as f64,
        p_j: jammed.p_jammed,
        p_u: quiet.p_unjammed,
        trials,
    })
}

/// The `--oracle` suite.
pub fn run_oracle_suite(seed: u64) -> Result<Vec<OracleCheck>> {
    let mut out = Vec::new();
    let args = [0.0, 0.5, 1.0, 2.4048, 4.548, 10.0, 20.0];
    let err = bessel_max_error(-8..=8, &args)?;
    out.push(OracleCheck::new(
        "bessel vs exact series",
        err <= 1e-8,
        format!("max abs error {err:.3e}"),
    ));
    let rec = bessel_recurrence_error(-8..=8, &args)?;
    out.push(OracleCheck::new(
        "bessel recurrence",
        rec <= 1e-8,
        format!("max residual {rec:.3e}"),
    ));
    for n in [8, 16] {
        let cfg = LinkConfig::default().with_elements(n);
        let spread = ratio_spread(&gain_ratios(&cfg, false)?);
        out.push(OracleCheck::new(
            format!("mode gain vs DFT sandwich, N={n}"),
            spread <= 1e-9,
            format!("ratio spread {spread:.3e}"),
        ));
    }
    let (modulus, phase) = distance_model_gap(&LinkConfig::default());
    out.push(OracleCheck::new(
        "exact vs approximate distance",
        modulus <= 0.01 && phase <= 0.01,
        format!("modulus {modulus:.3e}, phase {phase:.3e} rad"),
    ));
    for k in [4, 16, 64] {
        let c = detector_monte_carlo(k, 0.1, 1e-10, 0.5, 10_000, seed)?;
        let (zj, zu) = c.z_scores();
        out.push(OracleCheck::new(
            format!("sensing Monte Carlo, K={k}"),
            zj <= 3.0 && zu <= 3.0,
            format!(
                "P_j {:.4} vs {:.4}, P_u {:.4} vs {:.4}",
                c.p_j_empirical, c.p_j, c.p_u_empirical, c.p_u
            ),
        ));
    }
    Ok(out)
}
