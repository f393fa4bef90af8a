//! Monte Carlo sweeps over SNR, jammed-mode count and array size.
//!
//! One trial is the whole link: jam some modes, sense them at the
//! transmitter, split the power, send a frame (preamble plus payload) with
//! the jammed modes backscattered, decompose at the receiver, calibrate and
//! decide, then score SNR and SE. Both schemes are scored from the same
//! trial. Trial `t` of every grid point uses random stream `t`, and the
//! jammed set is the first `l_j` entries of a per-trial random mode order,
//! so neighbouring grid points are compared on common random numbers.

use rayon::prelude::*;

use crate::backscatter::{
    calibrate_threshold, correct_detection_prob, decide_bit, symbol_energies, MeanEstimator, Preamble, VarianceModel,
};
use crate::config::{LinkConfig, ModeRange};
use crate::error::{Error, Result};
use crate::geometry::{build_channel_matrix, effective_mode_gain, ChannelMatrix, DistanceModel};
use crate::jamming::{
    draw_jamming_block, draw_noise_block, draw_payload_symbols, draw_targeted_jamming_block, shuffled_modes,
    RandomStream,
};
use crate::metrics::{mode_snr, scheme_efficiency, Branch, ModeTerms, Scheme};
use crate::sensing::{detection_probabilities, quantile_threshold, sense_modes};
use crate::transceiver::{decompose_mode, transmit_modes, Domain, Normalization, SampleBlock};

/// What the swept SNR is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrReference {
    /// Mean received per-mode signal power (equal split over all modes)
    /// over the noise power in a decomposed mode, `M sigma_m^2`.
    #[default]
    Received,
    /// Per-mode transmit power `P / L` over the element noise `sigma_m^2`.
    Transmit,
}

/// How the jammer's power lands on the transmit array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TxJammingModel {
    /// Each jammed mode carries `sigma_jn^2` per element, `N sigma_jn^2` per mode.
    #[default]
    Coherent,
    /// Each jammed mode carries `sigma_jn^2` in the mode domain.
    PerMode,
}

/// Direct-path jamming at the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RxJammingModel {
    /// Same modes as at the transmitter, `sigma_jm^2` per element.
    #[default]
    CoMode,
    /// I.i.d. `sigma_jm^2` on every receive element.
    Iid,
}

/// How the transmit-side sensing threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ThresholdRule {
    /// `E_th` from the configuration.
    #[default]
    Fixed,
    /// Threshold at which a noise-only mode is classified unjammed with this probability.
    Quantile(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxes {
    pub snr_db: Vec<f64>,
    pub n_jammed: Vec<usize>,
    pub n_elements: Vec<usize>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        SweepAxes {
            snr_db: (0..9).map(|i| -10.0 + 5.0 * i as f64).collect(),
            n_jammed: vec![4],
            n_elements: vec![16],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub trials: usize,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
    pub snr_reference: SnrReference,
    pub tx_jamming: TxJammingModel,
    pub rx_jamming: RxJammingModel,
    /// Payload symbols per jammed mode and trial, after the preamble.
    pub payload_symbols: usize,
    pub estimator: MeanEstimator,
    pub variance_model: VarianceModel,
    pub threshold_rule: ThresholdRule,
    pub distance_model: DistanceModel,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            trials: 1000,
            seed: 0,
            schemes: vec![Scheme::Proposed, Scheme::Baseline],
            snr_reference: SnrReference::default(),
            tx_jamming: TxJammingModel::default(),
            rx_jamming: RxJammingModel::default(),
            payload_symbols: 16,
            estimator: MeanEstimator::default(),
            variance_model: VarianceModel::default(),
            threshold_rule: ThresholdRule::default(),
            distance_model: DistanceModel::default(),
        }
    }
}

/// Averages of one scheme at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub n_elements: usize,
    pub n_jammed: usize,
    pub se_bits: f64,
    /// Standard error of `se_bits` over the trials.
    pub se_std_error: f64,
    pub p_j: f64,
    pub p_u: f64,
    /// Mean analytic correct-decision probability on backscattered modes (NaN if none).
    pub p_c: f64,
    /// Empirical payload bit error rate on backscattered modes (NaN if none).
    pub ber: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Everything a trial needs that does not change between trials.
#[derive(Debug, Clone)]
pub struct PointSetup {
    config: LinkConfig,
    channel: ChannelMatrix,
    gain_sq: Vec<f64>,
    noise_variance: f64,
    energy_threshold: f64,
    tx_mode_jam_variance: f64,
    settings: SweepSettings,
    preamble: Preamble,
}

/// Per-trial sums, folded into a [`SweepResult`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrialOutcome {
    pub se_proposed: f64,
    pub se_baseline: f64,
    pub p_c_sum: f64,
    pub backscatter_modes: usize,
    pub bit_errors: u64,
    pub bits: u64,
}

impl TrialOutcome {
    pub fn se(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Proposed => self.se_proposed,
            Scheme::Baseline => self.se_baseline,
        }
    }
}

const SENSE_JAM: u64 = 1;
const SENSE_NOISE: u64 = 2;
const FRAME_JAM: u64 = 3;
const FRAME_TX_NOISE: u64 = 4;
const PAYLOAD: u64 = 5;
const DATA: u64 = 6;
const RX_JAM: u64 = 7;
const RX_NOISE: u64 = 8;
const ORDER: u64 = 9;

impl PointSetup {
    pub fn new(base: &LinkConfig, n_elements: usize, snr_db: f64, settings: &SweepSettings) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::config("snr_db", format!("must be finite, got {snr_db}")));
        }
        let config = base.with_elements(n_elements);
        config.validate()?;
        if settings.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if config.pga.levels() != 2 {
            return Err(Error::config("pga", "energy detection needs exactly two levels"));
        }
        let channel = build_channel_matrix(&config, settings.distance_model);
        let range = config.mode_range();
        let gain_sq: Vec<f64> = range
            .iter()
            .map(|l| effective_mode_gain(&channel, l).norm_sqr())
            .collect();
        let per_mode_power = config.transmit_power_total / range.len() as f64;
        let rho = 10f64.powf(snr_db / 10.0);
        let noise_variance = match settings.snr_reference {
            SnrReference::Received => {
                let mean_gain = gain_sq.iter().sum::<f64>() / gain_sq.len() as f64;
                mean_gain * per_mode_power / (config.n_rx as f64 * rho)
            }
            SnrReference::Transmit => per_mode_power / rho,
        };
        if !(noise_variance > 0.0) || !noise_variance.is_finite() {
            return Err(Error::Numeric(format!(
                "noise variance {noise_variance} at {snr_db} dB"
            )));
        }
        let k = config.samples_per_symbol as u32;
        let energy_threshold = match settings.threshold_rule {
            ThresholdRule::Fixed => config.energy_threshold_tx,
            ThresholdRule::Quantile(p) => quantile_threshold(p, k, noise_variance)?,
        };
        let tx_mode_jam_variance = match settings.tx_jamming {
            TxJammingModel::Coherent => config.n_tx as f64 * config.jam_variance_tx,
            TxJammingModel::PerMode => config.jam_variance_tx,
        };
        let preamble = Preamble::alternating(config.preamble_length)?;
        Ok(PointSetup {
            config,
            channel,
            gain_sq,
            noise_variance,
            energy_threshold,
            tx_mode_jam_variance,
            settings: settings.clone(),
            preamble,
        })
    }

    pub fn config(&self) -> &LinkConfig {
        &self.config
    }

    /// Receiver element noise `sigma_m^2` implied by the SNR.
    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn energy_threshold(&self) -> f64 {
        self.energy_threshold
    }

    pub fn gain_sq(&self, l: i64) -> Result<f64> {
        Ok(self.gain_sq[self.config.mode_range().check(l)?])
    }

    /// Analytic sensing probabilities at the jammed-mode and the noise-only variance.
    pub fn detection(&self) -> Result<(f64, f64)> {
        let k = self.config.samples_per_symbol as u32;
        let jammed = detection_probabilities(
            self.energy_threshold,
            k,
            self.tx_mode_jam_variance + self.noise_variance,
        )?;
        let quiet = detection_probabilities(self.energy_threshold, k, self.noise_variance)?;
        Ok((jammed.p_jammed, quiet.p_unjammed))
    }

    fn tx_mode_variance(&self, truly_jammed: bool) -> f64 {
        let jam = if truly_jammed { self.tx_mode_jam_variance } else { 0.0 };
        jam + self.noise_variance
    }

    /// `E[|noise + jamming|^2]` in `y_l` after the unnormalized receive DFT.
    fn interference(&self, truly_jammed: bool) -> f64 {
        let m = self.config.n_rx as f64;
        let jam = match self.settings.rx_jamming {
            RxJammingModel::CoMode if truly_jammed => m * m * self.config.jam_variance_rx,
            RxJammingModel::CoMode => 0.0,
            RxJammingModel::Iid => m * self.config.jam_variance_rx,
        };
        m * self.noise_variance + jam
    }

    fn per_element_jam(&self) -> f64 {
        match self.settings.tx_jamming {
            TxJammingModel::Coherent => self.config.jam_variance_tx,
            TxJammingModel::PerMode => self.config.jam_variance_tx / self.config.n_tx as f64,
        }
    }

    /// The jammed set of trial `trial` for `n_jammed` jammed modes.
    pub fn jammed_modes(&self, n_jammed: usize, trial: u64) -> Result<Vec<i64>> {
        let range = self.config.mode_range();
        if n_jammed > range.len() {
            return Err(Error::config(
                "n_jammed",
                format!("{n_jammed} exceeds the {} available modes", range.len()),
            ));
        }
        let stream = RandomStream::new(self.settings.seed, trial);
        let mut order = shuffled_modes(&mut stream.substream(ORDER), range);
        order.truncate(n_jammed);
        Ok(order)
    }

    /// One end-to-end trial.
    pub fn run_trial(&self, n_jammed: usize, trial: u64) -> Result<TrialOutcome> {
        let c = &self.config;
        let range = c.mode_range();
        let (n, k, ts) = (c.n_tx, c.samples_per_symbol, c.sample_interval);
        let jammed = self.jammed_modes(n_jammed, trial)?;
        let stream = RandomStream::new(self.settings.seed, trial);
        let per_element = self.per_element_jam();

        let mut sensed = draw_targeted_jamming_block(&mut stream.substream(SENSE_JAM), n, k, per_element, &jammed, ts)?;
        sensed.accumulate(&draw_noise_block(
            &mut stream.substream(SENSE_NOISE),
            n,
            k,
            self.noise_variance,
            ts,
        )?)?;
        let partition = sense_modes(&sensed, self.energy_threshold)?;
        let share = if partition.unjammed().is_empty() {
            0.0
        } else {
            c.transmit_power_total / partition.unjammed().len() as f64
        };

        let mut outcome = TrialOutcome::default();
        let mut p_c = vec![0.0; range.len()];
        if !partition.jammed().is_empty() {
            self.run_frame(
                &stream,
                &jammed,
                partition.jammed(),
                partition.unjammed(),
                share,
                &mut p_c,
                &mut outcome,
            )?;
        }

        let k32 = k as u32;
        let mut snrs = Vec::with_capacity(range.len());
        for (i, l) in range.iter().enumerate() {
            let truly = jammed.contains(&l);
            let sensing = detection_probabilities(self.energy_threshold, k32, self.tx_mode_variance(truly))?;
            let interference = self.interference(truly);
            let snr = if partition.is_jammed(l) {
                let terms = ModeTerms {
                    gain_sq: self.gain_sq[i],
                    signal_power: c.pga.mean_square_gain() * self.tx_mode_variance(truly),
                    interference,
                };
                mode_snr(l, Branch::Jammed, sensing.p_jammed * p_c[i], &terms)?
            } else {
                let terms = ModeTerms {
                    gain_sq: self.gain_sq[i],
                    signal_power: share,
                    interference,
                };
                mode_snr(l, Branch::Unjammed, sensing.p_unjammed, &terms)?
            };
            snrs.push(snr);
        }
        outcome.se_proposed = scheme_efficiency(&snrs, Scheme::Proposed)?;
        outcome.se_baseline = scheme_efficiency(&snrs, Scheme::Baseline)?;
        if !outcome.se_proposed.is_finite() || !outcome.se_baseline.is_finite() {
            return Err(Error::Numeric(format!("non-finite SE in trial {trial}")));
        }
        Ok(outcome)
    }

    /// Sends preamble and payload over every sensed-jammed mode and data on
    /// the unjammed ones, fills `p_c` (canonical order) and the bit counts.
    #[allow(clippy::too_many_arguments)]
    fn run_frame(
        &self,
        stream: &RandomStream,
        truly_jammed: &[i64],
        backscatter: &[i64],
        unjammed: &[i64],
        share: f64,
        p_c: &mut [f64],
        outcome: &mut TrialOutcome,
    ) -> Result<()> {
        let c = &self.config;
        let range = c.mode_range();
        let (n, m, k, ts) = (c.n_tx, c.n_rx, c.samples_per_symbol, c.sample_interval);
        let symbols = self.preamble.len() + self.settings.payload_symbols;
        let len = symbols * k;

        let mut at_tx = draw_targeted_jamming_block(
            &mut stream.substream(FRAME_JAM),
            n,
            len,
            self.per_element_jam(),
            truly_jammed,
            ts,
        )?;
        at_tx.accumulate(&draw_noise_block(
            &mut stream.substream(FRAME_TX_NOISE),
            n,
            len,
            self.noise_variance,
            ts,
        )?)?;

        let mut payload_stream = stream.substream(PAYLOAD);
        let mut data_stream = stream.substream(DATA);
        let mut modes = SampleBlock::zeros(range.len(), len, ts, Domain::Mode);
        let mut sent: Vec<(i64, Vec<u8>)> = Vec::with_capacity(backscatter.len());
        for &l in backscatter {
            let mut bits: Vec<u8> = self.preamble.bits().to_vec();
            if self.settings.payload_symbols > 0 {
                let payload = draw_payload_symbols(&mut payload_stream, self.settings.payload_symbols, c.pga.priors())?;
                bits.extend(payload.iter().map(|&b| b as u8));
            }
            let jam_l = decompose_mode(&at_tx, l, Normalization::Unitary)?;
            let row = modes.mode_row_mut(l)?;
            for (s, (dst, src)) in row.chunks_mut(k).zip(jam_l.chunks(k)).enumerate() {
                let a = c.pga.gain(bits[s] as usize);
                for (d, z) in dst.iter_mut().zip(src) {
                    *d = z * a;
                }
            }
            sent.push((l, bits));
        }
        for &l in unjammed {
            for z in modes.mode_row_mut(l)? {
                *z = data_stream.complex_gaussian(share);
            }
        }

        let mut y = transmit_modes(&self.channel, &modes)?;
        let rx_jam = match self.settings.rx_jamming {
            RxJammingModel::CoMode => draw_targeted_jamming_block(
                &mut stream.substream(RX_JAM),
                m,
                len,
                c.jam_variance_rx,
                truly_jammed,
                ts,
            )?,
            RxJammingModel::Iid => draw_jamming_block(&mut stream.substream(RX_JAM), m, len, c.jam_variance_rx, ts)?,
        };
        y.accumulate(&rx_jam)?;
        y.accumulate(&draw_noise_block(
            &mut stream.substream(RX_NOISE),
            m,
            len,
            self.noise_variance,
            ts,
        )?)?;

        let k32 = k as u32;
        let fallback = most_probable(c.pga.priors());
        for (l, bits) in sent {
            let i = range.check(l)?;
            let energies = symbol_energies(&decompose_mode(&y, l, Normalization::Unnormalized)?, k);
            let (preamble_q, payload_q) = energies.split_at(self.preamble.len());
            let decisions: Vec<u8>;
            match calibrate_threshold(preamble_q, &self.preamble, k32, self.settings.estimator) {
                Ok(threshold) => {
                    let variances = self.hypothesis_variances(i, truly_jammed.contains(&l));
                    let priors = c.pga.priors();
                    p_c[i] = priors[0] * correct_detection_prob(threshold.q_th, k32, variances[0], 0)?
                        + priors[1] * correct_detection_prob(threshold.q_th, k32, variances[1], 1)?;
                    decisions = payload_q.iter().map(|&q| decide_bit(q, &threshold)).collect();
                }
                Err(Error::Calibration(_)) => {
                    p_c[i] = c.pga.priors()[fallback as usize];
                    decisions = vec![fallback; payload_q.len()];
                }
                Err(e) => return Err(e),
            }
            outcome.p_c_sum += p_c[i];
            outcome.backscatter_modes += 1;
            let truth = &bits[self.preamble.len()..];
            outcome.bit_errors += truth.iter().zip(&decisions).filter(|(a, b)| a != b).count() as u64;
            outcome.bits += truth.len() as u64;
        }
        Ok(())
    }

    fn hypothesis_variances(&self, index: usize, truly_jammed: bool) -> Vec<f64> {
        match self.settings.variance_model {
            VarianceModel::Full => crate::backscatter::hypothesis_variances(
                self.gain_sq[index],
                &self.config.pga,
                self.tx_mode_variance(truly_jammed),
                self.interference(truly_jammed),
            ),
            VarianceModel::Literal => {
                vec![self.noise_variance + self.config.jam_variance_rx; 2]
            }
        }
    }
}

fn most_probable(priors: &[f64]) -> u8 {
    let mut best = 0;
    for (i, p) in priors.iter().enumerate() {
        if *p > priors[best] {
            best = i;
        }
    }
    best as u8
}

/// Runs `trials` trials of one grid point and folds them per scheme.
pub fn run_point(setup: &PointSetup, n_jammed: usize, snr_db: f64) -> Result<Vec<SweepResult>> {
    let settings = &setup.settings;
    let outcomes = (0..settings.trials as u64)
        .into_par_iter()
        .map(|t| setup.run_trial(n_jammed, t))
        .collect::<Result<Vec<_>>>()?;
    let (p_j, p_u) = setup.detection()?;
    let trials = outcomes.len() as f64;
    let modes: usize = outcomes.iter().map(|o| o.backscatter_modes).sum();
    let bits: u64 = outcomes.iter().map(|o| o.bits).sum();
    let p_c = if modes == 0 {
        f64::NAN
    } else {
        outcomes.iter().map(|o| o.p_c_sum).sum::<f64>() / modes as f64
    };
    let ber = if bits == 0 {
        f64::NAN
    } else {
        outcomes.iter().map(|o| o.bit_errors).sum::<u64>() as f64 / bits as f64
    };
    settings
        .schemes
        .iter()
        .map(|&scheme| {
            let mean = outcomes.iter().map(|o| o.se(scheme)).sum::<f64>() / trials;
            let var = if outcomes.len() > 1 {
                outcomes.iter().map(|o| (o.se(scheme) - mean).powi(2)).sum::<f64>() / (trials - 1.0)
            } else {
                0.0
            };
            if !mean.is_finite() {
                return Err(Error::Numeric(format!(
                    "mean SE {mean} at {snr_db} dB, l_j = {n_jammed}"
                )));
            }
            let backscatters = scheme == Scheme::Proposed;
            Ok(SweepResult {
                scheme,
                snr_db,
                n_elements: setup.config.n_tx,
                n_jammed,
                se_bits: mean,
                se_std_error: (var / trials).sqrt(),
                p_j,
                p_u,
                p_c: if backscatters { p_c } else { f64::NAN },
                ber: if backscatters { ber } else { f64::NAN },
                trials: outcomes.len(),
                seed: settings.seed,
            })
        })
        .collect()
}

pub fn validate_axes(axes: &SweepAxes) -> Result<()> {
    if axes.snr_db.is_empty() {
        return Err(Error::config("snr_db", "needs at least one value"));
    }
    if axes.n_jammed.is_empty() {
        return Err(Error::config("n_jammed", "needs at least one value"));
    }
    if axes.n_elements.is_empty() {
        return Err(Error::config("n_elements", "needs at least one value"));
    }
    for &n in &axes.n_elements {
        if n == 0 {
            return Err(Error::config("n_elements", "must be at least 1"));
        }
        let modes = ModeRange::for_elements(n).len();
        if let Some(&j) = axes.n_jammed.iter().find(|&&j| j > modes) {
            return Err(Error::config(
                "n_jammed",
                format!("{j} exceeds the {modes} modes of a {n}-element array"),
            ));
        }
    }
    Ok(())
}

/// Full grid, ordered by array size, then jammed count, then SNR, then scheme.
pub fn run_sweep(config: &LinkConfig, axes: &SweepAxes, settings: &SweepSettings) -> Result<Vec<SweepResult>> {
    validate_axes(axes)?;
    if settings.schemes.is_empty() {
        return Err(Error::config("schemes", "needs at least one scheme"));
    }
    let mut out = Vec::new();
    for &n in &axes.n_elements {
        for &n_jammed in &axes.n_jammed {
            for &snr in &axes.snr_db {
                let setup = PointSetup::new(config, n, snr, settings)?;
                out.extend(run_point(&setup, n_jammed, snr)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(trials: usize) -> SweepSettings {
        SweepSettings {
            trials,
            seed: 42,
            ..SweepSettings::default()
        }
    }

    #[test]
    fn determinism() {
        let axes = SweepAxes {
            snr_db: vec![0.0, 10.0],
            n_jammed: vec![2],
            n_elements: vec![8],
        };
        let cfg = LinkConfig::default();
        let a = run_sweep(&cfg, &axes, &quick(1)).unwrap();
        let b = run_sweep(&cfg, &axes, &quick(1)).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn nested_jammed_sets() {
        let setup = PointSetup::new(&LinkConfig::default(), 16, 10.0, &quick(1)).unwrap();
        let big = setup.jammed_modes(8, 5).unwrap();
        let small = setup.jammed_modes(3, 5).unwrap();
        assert_eq!(&big[..3], &small[..]);
        assert!(setup.jammed_modes(17, 0).is_err());
    }

    #[test]
    fn received_snr_sets_noise() {
        let cfg = LinkConfig::default();
        let s = PointSetup::new(&cfg, 16, 10.0, &quick(1)).unwrap();
        let mean_gain: f64 = cfg.mode_range().iter().map(|l| s.gain_sq(l).unwrap()).sum::<f64>() / 16.0;
        let signal = mean_gain * cfg.transmit_power_total / 16.0;
        assert!((signal / (16.0 * s.noise_variance()) - 10.0).abs() < 1e-9);
        let t = PointSetup::new(
            &cfg,
            16,
            10.0,
            &SweepSettings {
                snr_reference: SnrReference::Transmit,
                ..quick(1)
            },
        )
        .unwrap();
        assert!((t.noise_variance() - 1.0 / 160.0).abs() < 1e-15);
    }

    #[test]
    fn clean_trial_senses_the_jammed_set() {
        let setup = PointSetup::new(&LinkConfig::default(), 16, 20.0, &quick(1)).unwrap();
        for t in 0..20 {
            let o = setup.run_trial(4, t).unwrap();
            assert_eq!(o.backscatter_modes, 4, "trial {t}");
            assert!(o.se_proposed >= o.se_baseline);
            assert!(o.se_baseline > 0.0);
        }
        let o = setup.run_trial(0, 0).unwrap();
        assert_eq!(o.backscatter_modes, 0);
        assert_eq!(o.se_proposed, o.se_baseline);
    }

    #[test]
    fn baseline_rows_have_no_backscatter_statistics() {
        let axes = SweepAxes {
            snr_db: vec![10.0],
            n_jammed: vec![4],
            n_elements: vec![16],
        };
        let r = run_sweep(&LinkConfig::default(), &axes, &quick(4)).unwrap();
        assert_eq!(r[0].scheme, Scheme::Proposed);
        assert!(r[0].p_c.is_finite() && r[0].ber.is_finite());
        assert!(r[1].p_c.is_nan() && r[1].ber.is_nan());
    }

    #[test]
    fn all_modes_jammed_leaves_baseline_empty() {
        let setup = PointSetup::new(&LinkConfig::default(), 8, 10.0, &quick(1)).unwrap();
        let mut seen = 0;
        for t in 0..20 {
            let o = setup.run_trial(8, t).unwrap();
            // A jammed mode can fall under E_th and still carry data.
            if o.backscatter_modes == 8 {
                assert_eq!(o.se_baseline, 0.0);
                seen += 1;
            } else {
                assert!(o.se_baseline > 0.0);
            }
        }
        assert!(seen > 10);
    }

    #[test]
    fn axis_validation() {
        let bad = SweepAxes {
            n_jammed: vec![9],
            n_elements: vec![8],
            ..SweepAxes::default()
        };
        assert!(matches!(validate_axes(&bad), Err(Error::InvalidConfig { .. })));
        assert!(validate_axes(&SweepAxes::default()).is_ok());
    }
}
