//! UCA geometry and the line-of-sight channel between two coaxial arrays.
//!
//! Element indices are zero-based: transmit element `n` sits at azimuth
//! `2 pi n / N`, receive element `m` at `2 pi m / M`.

use std::f64::consts::PI;

use num::complex::Complex64;

use crate::config::LinkConfig;
use crate::error::{Error, Result};
use crate::special::{bessel_j, BESSEL_MAX_ORDER};

/// How the element-to-element distance is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceModel {
    /// `sqrt(d^2 + r^2 + R^2 - 2 r R cos(phi_n - psi_m))`.
    Exact,
    /// First-order expansion around `sqrt(d^2 + r^2 + R^2)`. The amplitude
    /// uses the axial distance, which makes the matrix circulant for `M = N`.
    #[default]
    Approximate,
}

/// `M x N` matrix of complex gains `h_mn`, stored row-major by receive element.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    n_rx: usize,
    n_tx: usize,
    entries: Vec<Complex64>,
    model: DistanceModel,
}

impl ChannelMatrix {
    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn model(&self) -> DistanceModel {
        self.model
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[m * self.n_tx + n]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

/// `j^l = e^{j pi l / 2}` for any integer `l`.
pub fn j_pow(l: i64) -> Complex64 {
    match l.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Azimuths `2 pi i / count` of the elements of a UCA.
pub fn element_azimuths(count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::config("element count", "must be at least 1"));
    }
    Ok((0..count).map(|i| 2.0 * PI * i as f64 / count as f64).collect())
}

fn azimuth(i: usize, count: usize) -> f64 {
    2.0 * PI * i as f64 / count as f64
}

fn check_pair(config: &LinkConfig, n: usize, m: usize) -> Result<()> {
    if n >= config.n_tx {
        return Err(Error::Index(format!("transmit element {n} of {}", config.n_tx)));
    }
    if m >= config.n_rx {
        return Err(Error::Index(format!("receive element {m} of {}", config.n_rx)));
    }
    Ok(())
}

fn pair_cosine(config: &LinkConfig, n: usize, m: usize) -> f64 {
    (azimuth(n, config.n_tx) - azimuth(m, config.n_rx)).cos()
}

/// Distance between transmit element `n` and receive element `m`.
pub fn pairwise_distance(config: &LinkConfig, n: usize, m: usize, model: DistanceModel) -> Result<f64> {
    check_pair(config, n, m)?;
    let cos = pair_cosine(config, n, m);
    let rr = config.r_tx * config.r_rx;
    let d2 = config.axial_distance.powi(2) + config.r_tx.powi(2) + config.r_rx.powi(2);
    Ok(match model {
        DistanceModel::Exact => (d2 - 2.0 * rr * cos).sqrt(),
        DistanceModel::Approximate => {
            let center = d2.sqrt();
            center - rr * cos / center
        }
    })
}

/// `2 pi r R / (lambda sqrt(d^2 + r^2 + R^2))`, the argument of the mode-gain Bessel factor.
pub fn bessel_argument(config: &LinkConfig) -> f64 {
    2.0 * PI * config.r_tx * config.r_rx / (config.wavelength * config.center_distance())
}

/// Common prefactor `beta lambda e^{-j 2 pi D / lambda} / (4 pi d)`.
fn path_factor(config: &LinkConfig) -> Complex64 {
    let amplitude = config.beta * config.wavelength / (4.0 * PI * config.axial_distance);
    let phase = -2.0 * PI * config.center_distance() / config.wavelength;
    Complex64::from_polar(amplitude, phase)
}

/// Element gain `h_mn` under the approximate distance.
pub fn element_channel_gain(config: &LinkConfig, n: usize, m: usize) -> Result<Complex64> {
    check_pair(config, n, m)?;
    Ok(approximate_gain(config, n, m))
}

fn approximate_gain(config: &LinkConfig, n: usize, m: usize) -> Complex64 {
    let alpha = bessel_argument(config);
    path_factor(config) * Complex64::from_polar(1.0, alpha * pair_cosine(config, n, m))
}

fn exact_gain(config: &LinkConfig, n: usize, m: usize) -> Complex64 {
    let rr = config.r_tx * config.r_rx;
    let d2 = config.axial_distance.powi(2) + config.r_tx.powi(2) + config.r_rx.powi(2);
    let dist = (d2 - 2.0 * rr * pair_cosine(config, n, m)).sqrt();
    let amplitude = config.beta * config.wavelength / (4.0 * PI * dist);
    Complex64::from_polar(amplitude, -2.0 * PI * dist / config.wavelength)
}

pub fn build_channel_matrix(config: &LinkConfig, model: DistanceModel) -> ChannelMatrix {
    let entries = (0..config.n_rx)
        .flat_map(|m| {
            (0..config.n_tx).map(move |n| match model {
                DistanceModel::Exact => exact_gain(config, n, m),
                DistanceModel::Approximate => approximate_gain(config, n, m),
            })
        })
        .collect();
    ChannelMatrix {
        n_rx: config.n_rx,
        n_tx: config.n_tx,
        entries,
        model,
    }
}

/// Closed-form channel gain of OAM mode `l` from the transmit to the receive UCA:
///
/// `h_l = beta lambda sqrt(N) e^{-j 2 pi D / lambda} / (4 pi d j^l) * S_l(alpha)`
///
/// where `S_l = sum_t j^{tN} J_{l + tN}(alpha)`. The `t = 0` term alone is
/// the continuous-aperture Bessel gain ([`mode_channel_gain_leading`]); the
/// other terms are the aliases a discrete `N`-element array picks up, and
/// with them `h_l` is exact for the approximate-distance matrix. Orders are
/// summed up to `|l + tN| <= 60`, accurate while `alpha` stays well below that.
pub fn mode_channel_gain(config: &LinkConfig, l: i64) -> Result<Complex64> {
    config.mode_range().check(l)?;
    let alpha = bessel_argument(config);
    let n = config.n_tx as i64;
    let mut alias_sum = Complex64::new(0.0, 0.0);
    let t_max = (BESSEL_MAX_ORDER + l.abs()) / n + 1;
    for t in -t_max..=t_max {
        let order = l + t * n;
        if order.abs() > BESSEL_MAX_ORDER {
            continue;
        }
        alias_sum += j_pow(t * n) * bessel_j(order, alpha)?;
    }
    Ok(mode_prefactor(config, l) * alias_sum)
}

/// Continuous-aperture mode gain: only the `J_l(alpha)` term of [`mode_channel_gain`].
pub fn mode_channel_gain_leading(config: &LinkConfig, l: i64) -> Result<Complex64> {
    config.mode_range().check(l)?;
    Ok(mode_prefactor(config, l) * bessel_j(l, bessel_argument(config))?)
}

fn mode_prefactor(config: &LinkConfig, l: i64) -> Complex64 {
    path_factor(config) * (config.n_tx as f64).sqrt() / j_pow(l)
}

/// `sum_m sum_n e^{-j 2 pi m l_rx / M} h_mn e^{j 2 pi n l_tx / N}`.
pub fn mode_coupling(channel: &ChannelMatrix, l_rx: i64, l_tx: i64) -> Complex64 {
    let (m_count, n_count) = (channel.n_rx as i64, channel.n_tx as i64);
    let tx_phase: Vec<Complex64> = (0..n_count)
        .map(|n| {
            let r = (n * l_tx).rem_euclid(n_count) as f64;
            Complex64::from_polar(1.0, 2.0 * PI * r / n_count as f64)
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..m_count {
        let r = (m * l_rx).rem_euclid(m_count) as f64;
        let rx_phase = Complex64::from_polar(1.0, -2.0 * PI * r / m_count as f64);
        let row: Complex64 = (0..n_count as usize)
            .map(|n| channel.get(m as usize, n) * tx_phase[n])
            .sum();
        acc += rx_phase * row;
    }
    acc
}

/// `(1/sqrt N) * (receive DFT row l) * H * (transmit IDFT column l)`.
pub fn dft_sandwich(channel: &ChannelMatrix, l: i64) -> Complex64 {
    mode_coupling(channel, l, l) / (channel.n_tx as f64).sqrt()
}

/// Gain seen by mode `l` through the full chain: unitary multiplexing over
/// `N` elements, the `1/sqrt M` receive scaling and the unnormalized receive
/// DFT. A unit-power `s_l` arrives with power `|g_l|^2`.
pub fn effective_mode_gain(channel: &ChannelMatrix, l: i64) -> Complex64 {
    mode_coupling(channel, l, l) / ((channel.n_rx * channel.n_tx) as f64).sqrt()
}
