//! Jammed-mode link: the transmitter re-modulates the jamming it receives
//! with a programmable gain amplifier, and the receiver decides each bit by
//! comparing the mean energy of the symbol against a preamble-calibrated
//! threshold.

use num::complex::Complex64;

use crate::config::{LinkConfig, PgaAlphabet};
use crate::error::{Error, Result};
use crate::geometry::{build_channel_matrix, effective_mode_gain, ChannelMatrix, DistanceModel};
use crate::jamming::{draw_jamming_block, draw_noise_block, draw_targeted_jamming_block, RandomStream};
use crate::special::chi_square_cdf;
use crate::transceiver::{decompose_mode, mean_energy, transmit_modes, Domain, Normalization, SampleBlock};

/// Known on-off preamble `S = [s_1 .. s_I]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preamble {
    bits: Vec<u8>,
}

impl Preamble {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidPreamble("bits must be 0 or 1".into()));
        }
        if !bits.contains(&0) || !bits.contains(&1) {
            return Err(Error::InvalidPreamble("both symbols must occur".into()));
        }
        Ok(Preamble { bits })
    }

    /// `0101...` of the given length.
    pub fn alternating(len: usize) -> Result<Self> {
        Preamble::new((0..len).map(|i| (i % 2) as u8).collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Zero-based positions carrying `bit` (the index set `G_bit`).
    pub fn positions(&self, bit: u8) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i] == bit).collect()
    }

    /// `(p_0, p_1) = (|G_0| / I, |G_1| / I)`.
    pub fn priors(&self) -> (f64, f64) {
        let ones = self.bits.iter().filter(|&&b| b == 1).count() as f64;
        let i = self.bits.len() as f64;
        ((i - ones) / i, ones / i)
    }
}

/// How the per-symbol mean powers are estimated from the preamble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeanEstimator {
    /// Average over the symbols of each class.
    #[default]
    PerClass,
    /// Sum over the class divided by the full preamble length `I`.
    Literal,
}

/// Calibrated decision threshold and the class means it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyThreshold {
    pub q_th: f64,
    pub q0_hat: f64,
    pub q1_hat: f64,
}

/// `Q_ED(Q0, Q1) = (1/K) Q0 Q1 / (Q1 - Q0) * ln((p0/p1) (Q1/Q0)^K)`, the
/// crossing of `p0 Gamma(K, Q0/K)` and `p1 Gamma(K, Q1/K)` densities.
pub fn energy_threshold(q0: f64, q1: f64, p0: f64, p1: f64, k: u32) -> Result<f64> {
    if !(q0 > 0.0) {
        return Err(Error::Calibration(format!("class-0 mean power {q0} is not positive")));
    }
    if !(q1 > q0) {
        return Err(Error::Calibration(format!(
            "class-1 mean power {q1} does not exceed class-0 mean power {q0}"
        )));
    }
    if !(p0 > 0.0 && p1 > 0.0) {
        return Err(Error::InvalidInput("symbol priors must be positive".into()));
    }
    let k = k as f64;
    let log_term = (p0 / p1).ln() + k * (q1.ln() - q0.ln());
    Ok(q0 * q1 / (q1 - q0) * log_term / k)
}

/// Estimates `Q0`, `Q1` from the preamble symbol energies and maps them to the threshold.
pub fn calibrate_threshold(
    preamble_energies: &[f64],
    preamble: &Preamble,
    k: u32,
    estimator: MeanEstimator,
) -> Result<EnergyThreshold> {
    if preamble_energies.len() != preamble.len() {
        return Err(Error::Shape(format!(
            "{} energies for a {}-symbol preamble",
            preamble_energies.len(),
            preamble.len()
        )));
    }
    let class_mean = |bit: u8| {
        let pos = preamble.positions(bit);
        let sum: f64 = pos.iter().map(|&i| preamble_energies[i]).sum();
        match estimator {
            MeanEstimator::PerClass => sum / pos.len() as f64,
            MeanEstimator::Literal => sum / preamble.len() as f64,
        }
    };
    let (q0_hat, q1_hat) = (class_mean(0), class_mean(1));
    let (p0, p1) = preamble.priors();
    let q_th = energy_threshold(q0_hat, q1_hat, p0, p1, k)?;
    Ok(EnergyThreshold { q_th, q0_hat, q1_hat })
}

/// `1` when `Q >= Q_th`.
pub fn decide_bit(q: f64, threshold: &EnergyThreshold) -> u8 {
    u8::from(q >= threshold.q_th)
}

/// Scales row `l` of a mode-domain block by `a_{bit}` over each `K`-sample symbol.
pub fn pga_modulate(
    jam_modes: &SampleBlock,
    bits: &[u8],
    alphabet: &PgaAlphabet,
    l: i64,
    samples_per_symbol: usize,
) -> Result<SampleBlock> {
    if bits.len() * samples_per_symbol != jam_modes.samples() {
        return Err(Error::Shape(format!(
            "{} symbols of {samples_per_symbol} samples do not fill a {}-sample block",
            bits.len(),
            jam_modes.samples()
        )));
    }
    if let Some(b) = bits.iter().find(|&&b| b as usize >= alphabet.levels()) {
        return Err(Error::InvalidInput(format!("symbol {b} outside the PGA alphabet")));
    }
    let mut out = jam_modes.clone();
    let row = out.mode_row_mut(l)?;
    for (symbol, chunk) in row.chunks_mut(samples_per_symbol.max(1)).enumerate() {
        let a = alphabet.gain(bits[symbol] as usize);
        for z in chunk {
            *z *= a;
        }
    }
    Ok(out)
}

/// Mean energy of symbol `i` (zero-based) of mode `l` at the receiver.
pub fn receiver_mode_energy(y_modes: &SampleBlock, l: i64, symbol: usize, samples_per_symbol: usize) -> Result<f64> {
    let row = y_modes.mode_row(l)?;
    symbol_energy(row, symbol, samples_per_symbol)
}

fn symbol_energy(row: &[Complex64], symbol: usize, k: usize) -> Result<f64> {
    let start = symbol * k;
    if k == 0 || start + k > row.len() {
        return Err(Error::Index(format!(
            "symbol {symbol} of {k} samples in a {}-sample row",
            row.len()
        )));
    }
    Ok(mean_energy(&row[start..start + k]))
}

/// Per-symbol mean energies of one received mode row.
pub fn symbol_energies(row: &[Complex64], samples_per_symbol: usize) -> Vec<f64> {
    row.chunks_exact(samples_per_symbol).map(mean_energy).collect()
}

/// Probability the energy detector decides `true_bit` correctly when the
/// received mode samples are `CN(0, sigma2_k)`: `2K Q / sigma2_k` is
/// chi-square with `2K` degrees of freedom.
pub fn correct_detection_prob(q_th: f64, k: u32, sigma2_k: f64, true_bit: u8) -> Result<f64> {
    if !(sigma2_k > 0.0) {
        return Err(Error::Domain(format!("statistic variance {sigma2_k} must be positive")));
    }
    let normalized = (2.0 * k as f64 * q_th / sigma2_k).max(0.0);
    let below = if normalized.is_infinite() {
        1.0
    } else {
        chi_square_cdf(normalized, 2 * k)?
    };
    Ok(if true_bit == 1 { 1.0 - below } else { below })
}

/// Which variance the analytic detector uses for `y_l[k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceModel {
    /// Bit-dependent: reflected signal power plus noise and jamming.
    #[default]
    Full,
    /// `sigma_m^2 + sigma_jm^2` for both bits (no signal term, no array factor).
    Literal,
}

/// `sigma_k^2(b) = |g_l|^2 a_b^2 sigma_T^2 + D_l` for every PGA level.
pub fn hypothesis_variances(
    gain_sq: f64,
    alphabet: &PgaAlphabet,
    tx_mode_variance: f64,
    interference: f64,
) -> Vec<f64> {
    alphabet
        .gains()
        .iter()
        .map(|a| gain_sq * a * a * tx_mode_variance + interference)
        .collect()
}

/// Prior-weighted probability of a correct binary decision.
pub fn mean_correct_detection(q_th: f64, k: u32, variances: &[f64], priors: &[f64]) -> Result<f64> {
    if variances.len() != 2 || priors.len() != 2 {
        return Err(Error::InvalidInput(
            "energy detection decides between two levels".into(),
        ));
    }
    Ok(priors[0] * correct_detection_prob(q_th, k, variances[0], 0)?
        + priors[1] * correct_detection_prob(q_th, k, variances[1], 1)?)
}

/// Everything one backscatter symbol passes through.
#[derive(Debug, Clone, Copy)]
pub struct SymbolInputs<'a> {
    /// Jamming received at the transmit elements over the symbol.
    pub tx_jamming: &'a SampleBlock,
    /// Direct-path jamming at the receive elements.
    pub rx_jamming: &'a SampleBlock,
    pub noise: &'a SampleBlock,
    pub channel: &'a ChannelMatrix,
    pub mode: i64,
    pub alphabet: &'a PgaAlphabet,
}

/// Mean received energy `Q` of mode `l` when the transmitter reflects its
/// received jamming on that mode with gain `a_bit`.
pub fn backscatter_energy(inputs: &SymbolInputs<'_>, bit: u8) -> Result<f64> {
    let k = inputs.tx_jamming.samples();
    let n = inputs.channel.n_tx();
    if inputs.tx_jamming.rows() != n {
        return Err(Error::Shape("transmit jamming must cover the transmit elements".into()));
    }
    let jam_mode = decompose_mode(inputs.tx_jamming, inputs.mode, Normalization::Unitary)?;
    let mut reflected = SampleBlock::zeros(n, k, inputs.tx_jamming.sample_interval(), Domain::Mode);
    reflected.mode_row_mut(inputs.mode)?.copy_from_slice(&jam_mode);
    let reflected = pga_modulate(&reflected, &[bit], inputs.alphabet, inputs.mode, k)?;
    let mut y = transmit_modes(inputs.channel, &reflected)?;
    y.accumulate(inputs.rx_jamming)?;
    y.accumulate(inputs.noise)?;
    let y_l = decompose_mode(&y, inputs.mode, Normalization::Unnormalized)?;
    Ok(mean_energy(&y_l))
}

/// One symbol end to end: reflect, propagate, add direct jamming and
/// noise, decompose at the receiver, measure `Q` and decide.
pub fn run_backscatter_symbol(inputs: &SymbolInputs<'_>, bit: u8, threshold: &EnergyThreshold) -> Result<(u8, f64)> {
    let q = backscatter_energy(inputs, bit)?;
    Ok((decide_bit(q, threshold), q))
}

/// Jamming seen by the transmit UCA on a single backscatter link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TxJamming {
    /// I.i.d. per element; every mode carries `sigma_jn^2`.
    Iid,
    /// Only the link mode is jammed, coherently across elements (`N sigma_jn^2`).
    Targeted,
}

/// A single jammed mode between two UCAs with i.i.d. receive-side jamming
/// and noise, for link-level backscatter experiments.
#[derive(Debug, Clone)]
pub struct BackscatterLink {
    config: LinkConfig,
    channel: ChannelMatrix,
    mode: i64,
    tx_jamming: TxJamming,
    gain_sq: f64,
}

impl BackscatterLink {
    pub fn new(config: LinkConfig, mode: i64, tx_jamming: TxJamming) -> Result<Self> {
        config.validate()?;
        config.mode_range().check(mode)?;
        let channel = build_channel_matrix(&config, DistanceModel::Approximate);
        let gain_sq = effective_mode_gain(&channel, mode).norm_sqr();
        Ok(BackscatterLink {
            config,
            channel,
            mode,
            tx_jamming,
            gain_sq,
        })
    }

    pub fn config(&self) -> &LinkConfig {
        &self.config
    }

    pub fn mode(&self) -> i64 {
        self.mode
    }

    /// `|g_l|^2` of the mode through the matrix chain.
    pub fn gain_sq(&self) -> f64 {
        self.gain_sq
    }

    /// Variance of the decomposed transmit-side jamming `T_l`.
    pub fn tx_mode_variance(&self) -> f64 {
        match self.tx_jamming {
            TxJamming::Iid => self.config.jam_variance_tx,
            TxJamming::Targeted => self.config.n_tx as f64 * self.config.jam_variance_tx,
        }
    }

    /// `M (sigma_m^2 + sigma_jm^2)`: noise plus jamming in `y_l` after the unnormalized DFT.
    pub fn interference(&self) -> f64 {
        self.config.n_rx as f64 * (self.config.noise_variance_rx + self.config.jam_variance_rx)
    }

    pub fn hypothesis_variances(&self, model: VarianceModel) -> Vec<f64> {
        match model {
            VarianceModel::Full => hypothesis_variances(
                self.gain_sq,
                &self.config.pga,
                self.tx_mode_variance(),
                self.interference(),
            ),
            VarianceModel::Literal => {
                vec![self.config.noise_variance_rx + self.config.jam_variance_rx; self.config.pga.levels()]
            }
        }
    }

    /// Fresh transmit jamming, receive jamming and noise for one symbol.
    pub fn draw_inputs(&self, stream: &mut RandomStream) -> Result<(SampleBlock, SampleBlock, SampleBlock)> {
        let c = &self.config;
        let k = c.samples_per_symbol;
        let tx = match self.tx_jamming {
            TxJamming::Iid => draw_jamming_block(stream, c.n_tx, k, c.jam_variance_tx, c.sample_interval)?,
            TxJamming::Targeted => {
                draw_targeted_jamming_block(stream, c.n_tx, k, c.jam_variance_tx, &[self.mode], c.sample_interval)?
            }
        };
        let rx = draw_jamming_block(stream, c.n_rx, k, c.jam_variance_rx, c.sample_interval)?;
        let noise = draw_noise_block(stream, c.n_rx, k, c.noise_variance_rx, c.sample_interval)?;
        Ok((tx, rx, noise))
    }

    /// Received energy of one freshly drawn symbol carrying `bit`.
    pub fn energy(&self, stream: &mut RandomStream, bit: u8) -> Result<f64> {
        let (tx, rx, noise) = self.draw_inputs(stream)?;
        backscatter_energy(&self.inputs(&tx, &rx, &noise), bit)
    }

    /// Received energy with no reflection at all: direct jamming and noise only.
    pub fn interference_energy(&self, stream: &mut RandomStream) -> Result<f64> {
        let (_, rx, mut noise) = self.draw_inputs(stream)?;
        noise.accumulate(&rx)?;
        let y_l = decompose_mode(&noise, self.mode, Normalization::Unnormalized)?;
        Ok(mean_energy(&y_l))
    }

    /// Sends the preamble over the link and calibrates the threshold.
    pub fn calibrate(
        &self,
        stream: &mut RandomStream,
        preamble: &Preamble,
        estimator: MeanEstimator,
    ) -> Result<EnergyThreshold> {
        let energies = preamble
            .bits()
            .iter()
            .map(|&b| self.energy(stream, b))
            .collect::<Result<Vec<_>>>()?;
        calibrate_threshold(&energies, preamble, self.config.samples_per_symbol as u32, estimator)
    }

    pub fn run_symbol(&self, stream: &mut RandomStream, bit: u8, threshold: &EnergyThreshold) -> Result<(u8, f64)> {
        let (tx, rx, noise) = self.draw_inputs(stream)?;
        run_backscatter_symbol(&self.inputs(&tx, &rx, &noise), bit, threshold)
    }

    /// Analytic error probability averaged over the alphabet priors.
    pub fn analytic_error(&self, threshold: &EnergyThreshold, model: VarianceModel) -> Result<f64> {
        let p_c = mean_correct_detection(
            threshold.q_th,
            self.config.samples_per_symbol as u32,
            &self.hypothesis_variances(model),
            self.config.pga.priors(),
        )?;
        Ok(1.0 - p_c)
    }

    fn inputs<'a>(&'a self, tx: &'a SampleBlock, rx: &'a SampleBlock, noise: &'a SampleBlock) -> SymbolInputs<'a> {
        SymbolInputs {
            tx_jamming: tx,
            rx_jamming: rx,
            noise,
            channel: &self.channel,
            mode: self.mode,
            alphabet: &self.config.pga,
        }
    }
}
