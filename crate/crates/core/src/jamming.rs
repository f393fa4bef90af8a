//! Seeded generators for jamming, receiver noise and payload.
//!
//! Every Monte Carlo trial owns a [`RandomStream`] identified by
//! `(seed, stream_id)`. Streams are ChaCha8 keyed by the seed with the
//! trial as the ChaCha stream number, so trials are independent and
//! reproducible without sharing state. A stream can be split into
//! purpose-specific substreams so that, for example, the noise drawn
//! in a trial does not shift when the number of jammed modes changes.

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::ModeRange;
use crate::error::{Error, Result};
use crate::transceiver::{multiplex_modes, Domain, SampleBlock};

/// Variance used in place of zero for noise so downstream statistics stay finite.
pub const NOISE_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RandomStream::with_offset(seed, stream_id, 0)
    }

    fn with_offset(seed: u64, stream_id: u64, purpose: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        // 2^48 words per purpose.
        rng.set_word_pos(u128::from(purpose) << 48);
        RandomStream { seed, stream_id, rng }
    }

    /// Independent substream of the same trial, addressed by `purpose`
    /// (non-zero; purpose 0 is the stream itself).
    pub fn substream(&self, purpose: u64) -> Self {
        RandomStream::with_offset(self.seed, self.stream_id, purpose)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Circularly-symmetric complex Gaussian with the given variance.
    pub fn complex_gaussian(&mut self, variance: f64) -> Complex64 {
        let s = (variance / 2.0).sqrt();
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

fn gaussian_block(
    stream: &mut RandomStream,
    rows: usize,
    k: usize,
    variance: f64,
    sample_interval: f64,
    domain: Domain,
) -> SampleBlock {
    let mut block = SampleBlock::zeros(rows, k, sample_interval, domain);
    for r in 0..rows {
        for z in block.row_mut(r) {
            *z = stream.complex_gaussian(variance);
        }
    }
    block
}

fn check_shape(n_elements: usize, k: usize) -> Result<()> {
    if n_elements == 0 || k == 0 {
        return Err(Error::InvalidInput(format!(
            "block needs at least one element and one sample, got {n_elements}x{k}"
        )));
    }
    Ok(())
}

/// I.i.d. `CN(0, variance)` jamming on each of `n_elements` elements.
pub fn draw_jamming_block(
    stream: &mut RandomStream,
    n_elements: usize,
    k: usize,
    variance: f64,
    sample_interval: f64,
) -> Result<SampleBlock> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::config(
            "jamming variance",
            format!("must be positive, got {variance}"),
        ));
    }
    check_shape(n_elements, k)?;
    Ok(gaussian_block(
        stream,
        n_elements,
        k,
        variance,
        sample_interval,
        Domain::Element,
    ))
}

/// Co-mode jamming confined to `jammed` modes.
///
/// Each jammed mode arrives at every element with power `per_element_variance`
/// and the mode's phase ramp, i.e. the mode-domain signal is
/// `CN(0, N * per_element_variance)` before unitary multiplexing. Gaussians
/// are drawn for every mode and masked, so the draws of a mode do not depend
/// on which other modes are jammed.
pub fn draw_targeted_jamming_block(
    stream: &mut RandomStream,
    n_elements: usize,
    k: usize,
    per_element_variance: f64,
    jammed: &[i64],
    sample_interval: f64,
) -> Result<SampleBlock> {
    if !(per_element_variance > 0.0) || !per_element_variance.is_finite() {
        return Err(Error::config(
            "jamming variance",
            format!("must be positive, got {per_element_variance}"),
        ));
    }
    check_shape(n_elements, k)?;
    let range = ModeRange::for_elements(n_elements);
    for &l in jammed {
        range.check(l)?;
    }
    let mut modes = gaussian_block(stream, range.len(), k, 1.0, sample_interval, Domain::Mode);
    let amplitude = (n_elements as f64 * per_element_variance).sqrt();
    for l in range.iter() {
        let scale = if jammed.contains(&l) { amplitude } else { 0.0 };
        for z in modes.mode_row_mut(l)? {
            *z *= scale;
        }
    }
    multiplex_modes(&modes, n_elements)
}

/// Receiver noise; `variance` below [`NOISE_FLOOR`] is raised to it.
pub fn draw_noise_block(
    stream: &mut RandomStream,
    n_elements: usize,
    k: usize,
    variance: f64,
    sample_interval: f64,
) -> Result<SampleBlock> {
    if variance.is_nan() || variance < 0.0 {
        return Err(Error::config(
            "noise variance",
            format!("must be non-negative, got {variance}"),
        ));
    }
    check_shape(n_elements, k)?;
    Ok(gaussian_block(
        stream,
        n_elements,
        k,
        variance.max(NOISE_FLOOR),
        sample_interval,
        Domain::Element,
    ))
}

/// Noise variance giving `snr_db` against `signal_power`.
pub fn noise_variance_for_snr(signal_power: f64, snr_db: f64) -> f64 {
    (signal_power / 10f64.powf(snr_db / 10.0)).max(NOISE_FLOOR)
}

/// I.i.d. symbols drawn from `priors` by inverse CDF.
pub fn draw_payload_symbols(stream: &mut RandomStream, count: usize, priors: &[f64]) -> Result<Vec<usize>> {
    if count == 0 {
        return Err(Error::InvalidInput("payload needs at least one symbol".into()));
    }
    if priors.is_empty() || priors.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::InvalidInput("priors must be non-negative".into()));
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("priors sum to {total}")));
    }
    let last = priors.iter().rposition(|p| *p > 0.0).unwrap_or(0);
    Ok((0..count)
        .map(|_| {
            let u = stream.uniform();
            let mut acc = 0.0;
            for (b, p) in priors.iter().enumerate() {
                acc += p;
                if u < acc && *p > 0.0 {
                    return b;
                }
            }
            last
        })
        .collect())
}

/// Equiprobable payload bits.
pub fn draw_payload_bits(stream: &mut RandomStream, count: usize) -> Result<Vec<u8>> {
    Ok(draw_payload_symbols(stream, count, &[0.5, 0.5])?
        .into_iter()
        .map(|b| b as u8)
        .collect())
}

/// Uniformly random ordering of the modes of `range` (Fisher-Yates).
pub fn shuffled_modes(stream: &mut RandomStream, range: ModeRange) -> Vec<i64> {
    let mut modes: Vec<i64> = range.iter().collect();
    for i in (1..modes.len()).rev() {
        let j = stream.rng().random_range(0..=i);
        modes.swap(i, j);
    }
    modes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transceiver::{decompose_modes, sample_block_energy, Normalization};

    #[test]
    fn same_stream_same_block() {
        let a = draw_jamming_block(&mut RandomStream::new(7, 3), 4, 32, 0.1, 1.0).unwrap();
        let b = draw_jamming_block(&mut RandomStream::new(7, 3), 4, 32, 0.1, 1.0).unwrap();
        assert_eq!(a, b);
        let c = draw_jamming_block(&mut RandomStream::new(7, 4), 4, 32, 0.1, 1.0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn substreams_are_distinct_and_reproducible() {
        let base = RandomStream::new(1, 2);
        let mut a = base.substream(5);
        let mut b = base.substream(5);
        let mut c = base.substream(6);
        let (x, y, z) = (a.uniform(), b.uniform(), c.uniform());
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn jamming_variance_matches_reference_power() {
        let block = draw_jamming_block(&mut RandomStream::new(11, 0), 1, 10_000, 0.1, 1.0).unwrap();
        let e = sample_block_energy(&block, 0).unwrap();
        assert!((e - 0.1).abs() < 0.005, "empirical variance {e}");
        let mean: Complex64 = block.row(0).iter().sum::<Complex64>() / 10_000.0;
        let bound = 3.0 * (0.1f64 / 10_000.0).sqrt();
        assert!(mean.re.abs() < bound && mean.im.abs() < bound, "mean {mean}");
    }

    #[test]
    fn invalid_variances() {
        let mut s = RandomStream::new(0, 0);
        assert!(draw_jamming_block(&mut s, 2, 2, 0.0, 1.0).is_err());
        assert!(draw_noise_block(&mut s, 2, 2, -1.0, 1.0).is_err());
        let quiet = draw_noise_block(&mut s, 2, 8, 0.0, 1.0).unwrap();
        assert!(quiet.total_energy() > 0.0 && quiet.total_energy() < 1e-27);
    }

    #[test]
    fn noise_from_snr() {
        assert!((noise_variance_for_snr(2.0, 10.0) - 0.2).abs() < 1e-15);
        assert_eq!(noise_variance_for_snr(0.0, 10.0), NOISE_FLOOR);
        let block = draw_noise_block(&mut RandomStream::new(5, 1), 1, 10_000, 0.2, 1.0).unwrap();
        assert!((sample_block_energy(&block, 0).unwrap() / 0.2 - 1.0).abs() < 0.05);
    }

    #[test]
    fn bits() {
        let bits = draw_payload_bits(&mut RandomStream::new(3, 9), 10_000).unwrap();
        let ones = bits.iter().filter(|&&b| b == 1).count() as f64 / 1e4;
        assert!((0.48..=0.52).contains(&ones), "{ones}");
        let zeros = draw_payload_symbols(&mut RandomStream::new(3, 9), 500, &[1.0, 0.0]).unwrap();
        assert!(zeros.iter().all(|&b| b == 0));
        assert_eq!(
            draw_payload_bits(&mut RandomStream::new(3, 9), 64).unwrap(),
            draw_payload_bits(&mut RandomStream::new(3, 9), 64).unwrap()
        );
        assert!(draw_payload_bits(&mut RandomStream::new(3, 9), 0).is_err());
    }

    #[test]
    fn targeted_jamming_stays_on_its_modes() {
        let block = draw_targeted_jamming_block(&mut RandomStream::new(2, 2), 16, 4000, 0.1, &[2, -5], 1.0).unwrap();
        let modes = decompose_modes(&block, Normalization::Unitary).unwrap();
        for l in ModeRange::for_elements(16).iter() {
            let e = crate::transceiver::mean_energy(modes.mode_row(l).unwrap());
            if l == 2 || l == -5 {
                assert!((e / 1.6 - 1.0).abs() < 0.1, "mode {l}: {e}");
            } else {
                assert!(e < 1e-25, "mode {l}: {e}");
            }
        }
        // Per-element power is 0.1 W per jammed mode.
        let per_element = block.total_energy() / (16.0 * 4000.0);
        assert!((per_element / 0.2 - 1.0).abs() < 0.05);
        assert!(draw_targeted_jamming_block(&mut RandomStream::new(2, 2), 16, 4, 0.1, &[9], 1.0).is_err());
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let range = ModeRange::for_elements(16);
        let mut order = shuffled_modes(&mut RandomStream::new(8, 8), range);
        order.sort();
        assert_eq!(order, range.iter().collect::<Vec<_>>());
    }
}
