//! Physical and protocol parameters of a link.

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Carrier frequency of the reference setup, in hertz.
pub const DEFAULT_CARRIER_HZ: f64 = 5.8e9;

/// Range of OAM mode indices a UCA with `n` elements can launch:
/// `floor((2 - n) / 2) ..= floor(n / 2)`.
///
/// Blocks in the mode domain store rows in ascending `l` over this range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeRange {
    lo: i64,
    hi: i64,
}

impl ModeRange {
    pub fn for_elements(n: usize) -> Self {
        let n = n as i64;
        ModeRange {
            lo: (2 - n).div_euclid(2),
            hi: n.div_euclid(2),
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, l: i64) -> bool {
        (self.lo..=self.hi).contains(&l)
    }

    /// Row of mode `l` in the canonical layout.
    pub fn index_of(&self, l: i64) -> Option<usize> {
        self.contains(l).then(|| (l - self.lo) as usize)
    }

    pub fn mode_at(&self, index: usize) -> i64 {
        self.lo + index as i64
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + Clone {
        self.lo..=self.hi
    }

    pub(crate) fn check(&self, l: i64) -> Result<usize> {
        self.index_of(l)
            .ok_or_else(|| Error::Domain(format!("mode {l} outside range {}..={}", self.lo, self.hi)))
    }
}

/// Amplification alphabet of the programmable gain amplifier.
#[derive(Debug, Clone, PartialEq)]
pub struct PgaAlphabet {
    gains: Vec<f64>,
    priors: Vec<f64>,
}

impl PgaAlphabet {
    pub fn new(gains: Vec<f64>, priors: Vec<f64>) -> Result<Self> {
        let alphabet = PgaAlphabet::new_relaxed(gains, priors)?;
        if alphabet.gains.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("pga.gains", "must be strictly increasing"));
        }
        Ok(alphabet)
    }

    /// Like [`PgaAlphabet::new`] but accepts repeated levels, e.g. `(1, 1)`,
    /// for experiments where the hypotheses are indistinguishable.
    pub fn new_relaxed(gains: Vec<f64>, priors: Vec<f64>) -> Result<Self> {
        if gains.len() < 2 {
            return Err(Error::config("pga.gains", "needs at least two levels"));
        }
        if gains.len() != priors.len() {
            return Err(Error::config(
                "pga.priors",
                format!("has {} entries, gains has {}", priors.len(), gains.len()),
            ));
        }
        if gains.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(Error::config("pga.gains", "must be finite and non-negative"));
        }
        if gains.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::config("pga.gains", "must be non-decreasing"));
        }
        if priors.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(Error::config("pga.priors", "must be positive"));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::config("pga.priors", format!("sum to {total}, not 1")));
        }
        Ok(PgaAlphabet { gains, priors })
    }

    /// Binary alphabet with equiprobable symbols.
    pub fn binary(a0: f64, a1: f64) -> Result<Self> {
        PgaAlphabet::new(vec![a0, a1], vec![0.5, 0.5])
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn levels(&self) -> usize {
        self.gains.len()
    }

    pub fn gain(&self, symbol: usize) -> f64 {
        self.gains[symbol]
    }

    /// `E[a^2] = sum_b p_b a_b^2`.
    pub fn mean_square_gain(&self) -> f64 {
        self.gains.iter().zip(&self.priors).map(|(a, p)| p * a * a).sum()
    }
}

impl Default for PgaAlphabet {
    fn default() -> Self {
        PgaAlphabet {
            gains: vec![0.5, 2.0],
            priors: vec![0.5, 0.5],
        }
    }
}

/// All physical and protocol parameters of one Tx/Rx UCA pair.
///
/// Powers and variances are in watts, lengths in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    /// Transmit elements `N`.
    pub n_tx: usize,
    /// Receive elements `M`.
    pub n_rx: usize,
    pub r_tx: f64,
    pub r_rx: f64,
    pub axial_distance: f64,
    pub wavelength: f64,
    /// Lumped channel constant.
    pub beta: f64,
    /// Per-element receiver noise variance.
    pub noise_variance_rx: f64,
    /// Per-element jamming power received at the transmit UCA.
    pub jam_variance_tx: f64,
    /// Per-element jamming power received at the receive UCA.
    pub jam_variance_rx: f64,
    /// Energy threshold of the transmit-side mode detector.
    pub energy_threshold_tx: f64,
    pub pga: PgaAlphabet,
    /// Samples per symbol / sensing window, `K`.
    pub samples_per_symbol: usize,
    /// Preamble length `I`, in symbols.
    pub preamble_length: usize,
    pub transmit_power_total: f64,
    /// Sampling interval `T_s`, seconds. Carried on blocks only.
    pub sample_interval: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig {
            n_tx: 16,
            n_rx: 16,
            r_tx: 0.75,
            r_rx: 0.75,
            axial_distance: 15.0,
            wavelength: SPEED_OF_LIGHT / DEFAULT_CARRIER_HZ,
            beta: 1.0,
            noise_variance_rx: 1e-10,
            jam_variance_tx: 0.1,
            jam_variance_rx: 0.1,
            energy_threshold_tx: 0.5,
            pga: PgaAlphabet::default(),
            samples_per_symbol: 16,
            preamble_length: 16,
            transmit_power_total: 1.0,
            sample_interval: 1e-6,
        }
    }
}

impl LinkConfig {
    /// Same geometry with `M = N = n`.
    pub fn with_elements(&self, n: usize) -> Self {
        LinkConfig {
            n_tx: n,
            n_rx: n,
            ..self.clone()
        }
    }

    pub fn mode_range(&self) -> ModeRange {
        ModeRange::for_elements(self.n_tx)
    }

    /// `sqrt(d^2 + r^2 + R^2)`.
    pub fn center_distance(&self) -> f64 {
        (self.axial_distance.powi(2) + self.r_tx.powi(2) + self.r_rx.powi(2)).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_tx == 0 {
            return Err(Error::config("n_tx", "must be at least 1"));
        }
        if self.n_rx == 0 {
            return Err(Error::config("n_rx", "must be at least 1"));
        }
        let positive = [
            ("r_tx", self.r_tx),
            ("r_rx", self.r_rx),
            ("axial_distance", self.axial_distance),
            ("wavelength", self.wavelength),
            ("beta", self.beta),
            ("noise_variance_rx", self.noise_variance_rx),
            ("jam_variance_tx", self.jam_variance_tx),
            ("jam_variance_rx", self.jam_variance_rx),
            ("energy_threshold_tx", self.energy_threshold_tx),
            ("transmit_power_total", self.transmit_power_total),
            ("sample_interval", self.sample_interval),
        ];
        for (field, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(field, format!("must be positive, got {value}")));
            }
        }
        if self.samples_per_symbol == 0 {
            return Err(Error::config("samples_per_symbol", "must be at least 1"));
        }
        if self.preamble_length < 2 {
            return Err(Error::config(
                "preamble_length",
                "must be at least 2 so both symbols appear",
            ));
        }
        // Scenario input is held to strictly increasing gains when parsed;
        // a relaxed alphabet built in code is accepted here.
        PgaAlphabet::new_relaxed(self.pga.gains.clone(), self.pga.priors.clone())?;
        Ok(())
    }
}
