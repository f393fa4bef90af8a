//! Transmit-side identification of jammed OAM modes by energy detection.

use crate::config::ModeRange;
use crate::error::{Error, Result};
use crate::special::{gamma_cdf, gamma_quantile};
use crate::transceiver::{decompose_modes, mean_energy, Domain, Normalization, SampleBlock};

/// Detected jammed / unjammed split of the mode range.
#[derive(Debug, Clone, PartialEq)]
pub struct ModePartition {
    range: ModeRange,
    jammed: Vec<i64>,
    unjammed: Vec<i64>,
    energies: Vec<f64>,
}

impl ModePartition {
    /// Partition by `E_l >= threshold`. `energies` is in canonical mode order.
    pub fn from_energies(range: ModeRange, energies: Vec<f64>, threshold: f64) -> Result<Self> {
        if energies.len() != range.len() {
            return Err(Error::Shape(format!(
                "{} energies for {} modes",
                energies.len(),
                range.len()
            )));
        }
        let (jammed, unjammed) = range
            .iter()
            .partition(|&l| energies[(l - range.lo()) as usize] >= threshold);
        Ok(ModePartition {
            range,
            jammed,
            unjammed,
            energies,
        })
    }

    pub fn range(&self) -> ModeRange {
        self.range
    }

    pub fn jammed(&self) -> &[i64] {
        &self.jammed
    }

    pub fn unjammed(&self) -> &[i64] {
        &self.unjammed
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, l: i64) -> Option<f64> {
        self.range.index_of(l).map(|i| self.energies[i])
    }

    pub fn is_jammed(&self, l: i64) -> bool {
        self.jammed.contains(&l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsSource {
    Analytic,
    Empirical,
}

/// Probabilities of classifying a mode correctly as jammed or unjammed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionStats {
    pub p_jammed: f64,
    pub p_unjammed: f64,
    pub source: StatsSource,
}

impl DetectionStats {
    /// Frequencies from Monte Carlo counts.
    pub fn empirical(jammed_hits: u64, jammed_trials: u64, unjammed_hits: u64, unjammed_trials: u64) -> Self {
        let ratio = |a: u64, b: u64| if b == 0 { f64::NAN } else { a as f64 / b as f64 };
        DetectionStats {
            p_jammed: ratio(jammed_hits, jammed_trials),
            p_unjammed: ratio(unjammed_hits, unjammed_trials),
            source: StatsSource::Empirical,
        }
    }
}

/// Decomposes the received jamming with the unitary DFT, takes the mean
/// energy `E_l` of each mode over the `K` samples and flags `E_l >= E_th`.
pub fn sense_modes(jam_block: &SampleBlock, energy_threshold: f64) -> Result<ModePartition> {
    if jam_block.domain() != Domain::Element {
        return Err(Error::Shape("sensing needs an element-domain block".into()));
    }
    if jam_block.samples() == 0 || jam_block.rows() == 0 {
        return Err(Error::InvalidInput("empty sensing block".into()));
    }
    let modes = decompose_modes(jam_block, Normalization::Unitary)?;
    let energies = (0..modes.rows()).map(|r| mean_energy(modes.row(r))).collect();
    ModePartition::from_energies(ModeRange::for_elements(jam_block.rows()), energies, energy_threshold)
}

/// `P_j = 1 - F(E_th; K, sigma^2/K)` and `P_u = F(E_th; K, sigma^2/K)` where
/// `F` is the gamma CDF of the mode energy of `CN(0, sigma^2)` samples.
pub fn detection_probabilities(energy_threshold: f64, k: u32, mode_variance: f64) -> Result<DetectionStats> {
    let p_u = gamma_cdf(energy_threshold, k, mode_variance / k as f64)?;
    Ok(DetectionStats {
        p_jammed: 1.0 - p_u,
        p_unjammed: p_u,
        source: StatsSource::Analytic,
    })
}

/// Energy threshold at which a noise-only mode of variance `noise_variance`
/// is classified unjammed with probability `target_p_u`.
pub fn quantile_threshold(target_p_u: f64, k: u32, noise_variance: f64) -> Result<f64> {
    gamma_quantile(target_p_u, k, noise_variance / k as f64)
}
