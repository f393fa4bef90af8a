//! Per-mode SNR, power allocation and system spectrum efficiency.

use crate::error::{Error, Result};
use crate::sensing::{DetectionStats, ModePartition};

/// Which side of the sensed partition a mode is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Jammed,
    Unjammed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSnr {
    pub mode: i64,
    pub snr_linear: f64,
    pub branch: Branch,
}

/// Proposed scheme backscatters on jammed modes; the baseline leaves them idle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Proposed,
    Baseline,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Proposed => "proposed",
            Scheme::Baseline => "baseline",
        }
    }

    pub fn parse(s: &str) -> Option<Scheme> {
        match s {
            "proposed" => Some(Scheme::Proposed),
            "baseline" => Some(Scheme::Baseline),
            _ => None,
        }
    }
}

/// Power terms of one mode as seen after receive decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTerms {
    /// `|g_l|^2`, the end-to-end power gain of the mode.
    pub gain_sq: f64,
    /// `E[|s_l|^2]`: allocated power, or `E[a_b^2] sigma_T^2` for a reflected mode.
    pub signal_power: f64,
    /// Expected noise plus jamming power in `y_l`.
    pub interference: f64,
}

/// `P_j P_c` on jammed modes, `P_u` on unjammed ones.
pub fn detection_weight(branch: Branch, stats: &DetectionStats, p_c: f64) -> f64 {
    match branch {
        Branch::Jammed => stats.p_jammed * p_c,
        Branch::Unjammed => stats.p_unjammed,
    }
}

/// `gamma_l = w_l |g_l|^2 E[|s_l|^2] / E[|noise + jamming|^2]`.
pub fn mode_snr(mode: i64, branch: Branch, weight: f64, terms: &ModeTerms) -> Result<ModeSnr> {
    if !(weight >= 0.0) {
        return Err(Error::InvalidInput(format!("mode {mode}: detection weight {weight}")));
    }
    if !(terms.gain_sq >= 0.0 && terms.signal_power >= 0.0) {
        return Err(Error::InvalidInput(format!("mode {mode}: negative power term")));
    }
    if !(terms.interference > 0.0) {
        return Err(Error::Numeric(format!(
            "mode {mode}: interference power {} is not positive",
            terms.interference
        )));
    }
    let snr_linear = weight * terms.gain_sq * terms.signal_power / terms.interference;
    if !snr_linear.is_finite() {
        return Err(Error::Numeric(format!("mode {mode}: SNR {snr_linear}")));
    }
    Ok(ModeSnr {
        mode,
        snr_linear,
        branch,
    })
}

/// Equal split of `total_power` over the sensed-unjammed modes; jammed modes
/// get no transmit power. Returned in canonical mode order.
pub fn allocate_power(total_power: f64, partition: &ModePartition) -> Result<Vec<f64>> {
    if !(total_power >= 0.0) || !total_power.is_finite() {
        return Err(Error::config(
            "transmit_power_total",
            format!("must be non-negative, got {total_power}"),
        ));
    }
    let share = if partition.unjammed().is_empty() {
        0.0
    } else {
        total_power / partition.unjammed().len() as f64
    };
    Ok(partition
        .range()
        .iter()
        .map(|l| if partition.is_jammed(l) { 0.0 } else { share })
        .collect())
}

/// `C = sum_l log2(1 + gamma_l)`.
pub fn spectral_efficiency(mode_snrs: &[ModeSnr]) -> Result<f64> {
    let mut c = 0.0;
    for m in mode_snrs {
        if !(m.snr_linear >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "mode {}: negative SNR {}",
                m.mode, m.snr_linear
            )));
        }
        c += m.snr_linear.ln_1p() / std::f64::consts::LN_2;
    }
    Ok(c)
}

/// SE of one scheme: the baseline drops every jammed-branch term.
pub fn scheme_efficiency(mode_snrs: &[ModeSnr], scheme: Scheme) -> Result<f64> {
    match scheme {
        Scheme::Proposed => spectral_efficiency(mode_snrs),
        Scheme::Baseline => {
            let kept: Vec<ModeSnr> = mode_snrs
                .iter()
                .copied()
                .filter(|m| m.branch == Branch::Unjammed)
                .collect();
            spectral_efficiency(&kept)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{LinkConfig, ModeRange};
    use crate::geometry::{build_channel_matrix, dft_sandwich, DistanceModel};
    use crate::sensing::StatsSource;

    fn snr(mode: i64, g: f64) -> ModeSnr {
        ModeSnr {
            mode,
            snr_linear: g,
            branch: Branch::Unjammed,
        }
    }

    fn partition(n: usize, jammed: &[i64]) -> ModePartition {
        let range = ModeRange::for_elements(n);
        let e = range
            .iter()
            .map(|l| if jammed.contains(&l) { 1.0 } else { 0.0 })
            .collect();
        ModePartition::from_energies(range, e, 0.5).unwrap()
    }

    #[test]
    fn se_values() {
        assert_eq!(spectral_efficiency(&[snr(0, 0.0), snr(1, 0.0)]).unwrap(), 0.0);
        assert!((spectral_efficiency(&[snr(0, 1.0)]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spectral_efficiency(&[snr(0, 3.0), snr(1, 3.0)]).unwrap() - 4.0).abs() < 1e-15);
        assert!(matches!(
            spectral_efficiency(&[snr(0, -0.1)]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn allocation() {
        let p = allocate_power(1.0, &partition(16, &[])).unwrap();
        assert!(p.iter().all(|&x| (x - 1.0 / 16.0).abs() < 1e-16));
        let all: Vec<i64> = ModeRange::for_elements(16).iter().collect();
        assert!(allocate_power(1.0, &partition(16, &all))
            .unwrap()
            .iter()
            .all(|&x| x == 0.0));
        let part = partition(16, &[-2, 0, 3, 8]);
        let p = allocate_power(1.0, &part).unwrap();
        assert_eq!(p.iter().filter(|&&x| x == 0.0).count(), 4);
        assert!(p.iter().filter(|&&x| x > 0.0).all(|&x| (x - 1.0 / 12.0).abs() < 1e-16));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weights_and_limits() {
        let stats = DetectionStats {
            p_jammed: 0.9,
            p_unjammed: 0.0,
            source: StatsSource::Analytic,
        };
        let terms = ModeTerms {
            gain_sq: 1.0,
            signal_power: 1.0,
            interference: 1.0,
        };
        let w = detection_weight(Branch::Unjammed, &stats, 1.0);
        assert_eq!(mode_snr(0, Branch::Unjammed, w, &terms).unwrap().snr_linear, 0.0);
        assert!((detection_weight(Branch::Jammed, &stats, 0.5) - 0.45).abs() < 1e-16);
        let loud = ModeTerms {
            interference: 1e300,
            ..terms
        };
        assert!(mode_snr(0, Branch::Jammed, 1.0, &loud).unwrap().snr_linear < 1e-299);
    }

    #[test]
    fn baseline_drops_jammed_terms() {
        let mut v = vec![snr(0, 3.0), snr(1, 1.0)];
        v[1].branch = Branch::Jammed;
        assert!((scheme_efficiency(&v, Scheme::Proposed).unwrap() - 3.0).abs() < 1e-15);
        assert!((scheme_efficiency(&v, Scheme::Baseline).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unjammed_snr_against_matrix_gain() {
        // 10 dB against the mean received per-mode power, all 16 modes unjammed.
        let cfg = LinkConfig::default();
        let h = build_channel_matrix(&cfg, DistanceModel::Approximate);
        let m = cfg.n_rx as f64;
        // End-to-end gain is the sandwich with one more 1/sqrt(M).
        let g2: Vec<f64> = cfg
            .mode_range()
            .iter()
            .map(|l| dft_sandwich(&h, l).norm_sqr() / m)
            .collect();
        let p = 1.0 / 16.0;
        let s_ref = g2.iter().sum::<f64>() / 16.0 * p;
        let sigma2 = s_ref / (m * 10.0);
        let l = 3;
        let i = cfg.mode_range().index_of(l).unwrap();
        let got = mode_snr(
            l,
            Branch::Unjammed,
            1.0,
            &ModeTerms {
                gain_sq: g2[i],
                signal_power: p,
                interference: m * sigma2,
            },
        )
        .unwrap();
        let want = 10.0 * g2[i] / (g2.iter().sum::<f64>() / 16.0);
        assert!((got.snr_linear / want - 1.0).abs() < 1e-12);
    }
}
