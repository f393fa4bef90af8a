//! OAM mode multiplexing and decomposition across UCA elements.
//!
//! A [`SampleBlock`] holds `K`-sample complex baseband rows, one per array
//! element or one per OAM mode. Mode-domain rows follow the canonical layout
//! of [`ModeRange`]: ascending `l` from `floor((2 - N) / 2)` to `floor(N / 2)`.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::Zero;

use crate::config::ModeRange;
use crate::error::{Error, Result};
use crate::geometry::ChannelMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Element,
    Mode,
}

/// DFT scaling used when decomposing element signals into modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `1/sqrt(N)`, unitary. Used for transmit-side sensing.
    Unitary,
    /// Plain sum over elements. Used at the receive UCA.
    Unnormalized,
}

/// Rows of complex samples with a common sampling interval.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBlock {
    rows: usize,
    samples: usize,
    data: Vec<Complex64>,
    sample_interval: f64,
    domain: Domain,
}

impl SampleBlock {
    pub fn zeros(rows: usize, samples: usize, sample_interval: f64, domain: Domain) -> Self {
        SampleBlock {
            rows,
            samples,
            data: vec![Complex64::zero(); rows * samples],
            sample_interval,
            domain,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>, sample_interval: f64, domain: Domain) -> Result<Self> {
        let samples = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != samples) {
            return Err(Error::Shape("rows have different lengths".into()));
        }
        let n = rows.len();
        Ok(SampleBlock {
            rows: n,
            samples,
            data: rows.into_iter().flatten().collect(),
            sample_interval,
            domain,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Samples per row.
    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn sample_interval(&self) -> f64 {
        self.sample_interval
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.samples..(i + 1) * self.samples]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.samples..(i + 1) * self.samples]
    }

    /// Row of mode `l`; the block must be in the mode domain.
    pub fn mode_row(&self, l: i64) -> Result<&[Complex64]> {
        let idx = self.mode_index(l)?;
        Ok(self.row(idx))
    }

    pub fn mode_row_mut(&mut self, l: i64) -> Result<&mut [Complex64]> {
        let idx = self.mode_index(l)?;
        Ok(self.row_mut(idx))
    }

    fn mode_index(&self, l: i64) -> Result<usize> {
        if self.domain != Domain::Mode {
            return Err(Error::Shape("expected a mode-domain block".into()));
        }
        ModeRange::for_elements(self.rows).check(l)
    }

    /// Total energy `sum |x|^2` over all rows and samples.
    pub fn total_energy(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Adds `other` sample-wise.
    pub fn accumulate(&mut self, other: &SampleBlock) -> Result<()> {
        if other.rows != self.rows || other.samples != self.samples {
            return Err(Error::Shape(format!(
                "cannot add {}x{} block to {}x{}",
                other.rows, other.samples, self.rows, self.samples
            )));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: f64) {
        for z in &mut self.data {
            *z *= factor;
        }
    }
}

/// `e^{j 2 pi (n l mod N) / N}`; reducing the exponent first keeps the phase exact.
fn twiddle(n: usize, l: i64, size: usize) -> Complex64 {
    let r = (n as i64 * l).rem_euclid(size as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r / size as f64)
}

/// `e^{j 2 pi r / size}` for `r = 0..size`, indexed by the reduced phase.
struct Roots(Vec<Complex64>);

impl Roots {
    fn new(size: usize) -> Self {
        Roots((0..size).map(|r| twiddle(r, 1, size)).collect())
    }

    fn at(&self, n: usize, l: i64) -> Complex64 {
        let size = self.0.len() as i64;
        self.0[(n as i64 * l).rem_euclid(size) as usize]
    }
}

/// `out[r] = sum_c weights[r][c] * input[c]` applied to every sample column.
fn mix_rows(weights: &[Complex64], out_rows: usize, input: &SampleBlock, out: &mut SampleBlock) {
    let cols = input.rows;
    // Masked jamming leaves most mode rows empty.
    let live: Vec<bool> = (0..cols)
        .map(|c| input.row(c).iter().any(|z| *z != Complex64::zero()))
        .collect();
    for r in 0..out_rows {
        let dst = &mut out.data[r * input.samples..(r + 1) * input.samples];
        for c in 0..cols {
            let w = weights[r * cols + c];
            if !live[c] || w == Complex64::zero() {
                continue;
            }
            for (d, s) in dst.iter_mut().zip(input.row(c)) {
                *d += w * s;
            }
        }
    }
}

/// Superposes the mode-domain signals onto `n_elements` transmit elements:
/// `x_n[k] = (1/sqrt N) sum_l s_l[k] e^{j 2 pi (n-1) l / N}`.
pub fn multiplex_modes(per_mode: &SampleBlock, n_elements: usize) -> Result<SampleBlock> {
    if per_mode.domain != Domain::Mode {
        return Err(Error::Shape("multiplexing needs a mode-domain block".into()));
    }
    let range = ModeRange::for_elements(n_elements);
    if per_mode.rows != range.len() || n_elements == 0 {
        return Err(Error::Shape(format!(
            "{} mode rows do not cover the {} modes of a {n_elements}-element array",
            per_mode.rows,
            range.len()
        )));
    }
    let scale = 1.0 / (n_elements as f64).sqrt();
    let roots = Roots::new(n_elements);
    let weights: Vec<Complex64> = (0..n_elements)
        .flat_map(|n| range.iter().map(|l| roots.at(n, l) * scale).collect::<Vec<_>>())
        .collect();
    let mut out = SampleBlock::zeros(n_elements, per_mode.samples, per_mode.sample_interval, Domain::Element);
    mix_rows(&weights, n_elements, per_mode, &mut out);
    Ok(out)
}

fn decomposition_scale(elements: usize, norm: Normalization) -> f64 {
    match norm {
        Normalization::Unitary => 1.0 / (elements as f64).sqrt(),
        Normalization::Unnormalized => 1.0,
    }
}

/// DFT across elements into the modes of an array of the same size.
pub fn decompose_modes(elements: &SampleBlock, norm: Normalization) -> Result<SampleBlock> {
    if elements.domain != Domain::Element {
        return Err(Error::Shape("decomposition needs an element-domain block".into()));
    }
    let n = elements.rows;
    if n == 0 {
        return Err(Error::InvalidInput("block has no elements".into()));
    }
    let range = ModeRange::for_elements(n);
    let scale = decomposition_scale(n, norm);
    let roots = Roots::new(n);
    let weights: Vec<Complex64> = range
        .iter()
        .flat_map(|l| (0..n).map(|e| roots.at(e, -l) * scale).collect::<Vec<_>>())
        .collect();
    let mut out = SampleBlock::zeros(range.len(), elements.samples, elements.sample_interval, Domain::Mode);
    mix_rows(&weights, range.len(), elements, &mut out);
    Ok(out)
}

/// Single mode `l` of the element-domain block, for any integer `l`.
pub fn decompose_mode(elements: &SampleBlock, l: i64, norm: Normalization) -> Result<Vec<Complex64>> {
    if elements.domain != Domain::Element {
        return Err(Error::Shape("decomposition needs an element-domain block".into()));
    }
    let n = elements.rows;
    if n == 0 {
        return Err(Error::InvalidInput("block has no elements".into()));
    }
    let scale = decomposition_scale(n, norm);
    let mut out = vec![Complex64::zero(); elements.samples];
    for e in 0..n {
        let w = twiddle(e, -l, n) * scale;
        for (d, s) in out.iter_mut().zip(elements.row(e)) {
            *d += w * s;
        }
    }
    Ok(out)
}

/// Mean energy `(1/K) sum_k |x[row, k]|^2` of one row.
pub fn sample_block_energy(block: &SampleBlock, row: usize) -> Result<f64> {
    if block.samples == 0 {
        return Err(Error::InvalidInput("block has no samples".into()));
    }
    if row >= block.rows {
        return Err(Error::Index(format!("row {row} of a {}-row block", block.rows)));
    }
    Ok(mean_energy(block.row(row)))
}

/// Mean of `|x|^2` over a slice; zero for an empty slice.
pub fn mean_energy(samples: &[Complex64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / samples.len() as f64
}

/// Free-space propagation of the transmit element signals to the receive
/// elements, without impairments: `y_m = (1/sqrt M) sum_n h_mn x_n`.
pub fn propagate(channel: &ChannelMatrix, tx: &SampleBlock) -> Result<SampleBlock> {
    if tx.domain != Domain::Element || tx.rows != channel.n_tx() {
        return Err(Error::Shape(format!(
            "channel expects {} transmit elements, block has {} rows",
            channel.n_tx(),
            tx.rows
        )));
    }
    let m = channel.n_rx();
    let scale = 1.0 / (m as f64).sqrt();
    let weights: Vec<Complex64> = channel.entries().iter().map(|h| h * scale).collect();
    let mut out = SampleBlock::zeros(m, tx.samples, tx.sample_interval, Domain::Element);
    mix_rows(&weights, m, tx, &mut out);
    Ok(out)
}

/// `propagate(channel, multiplex_modes(per_mode, N))` as a single pass,
/// with the mode-to-receive-element matrix formed up front.
pub fn transmit_modes(channel: &ChannelMatrix, per_mode: &SampleBlock) -> Result<SampleBlock> {
    let n = channel.n_tx();
    let range = ModeRange::for_elements(n);
    if per_mode.domain != Domain::Mode || per_mode.rows != range.len() {
        return Err(Error::Shape(format!(
            "{} mode rows do not cover the {} modes of a {n}-element array",
            per_mode.rows,
            range.len()
        )));
    }
    let m = channel.n_rx();
    let scale = 1.0 / ((m * n) as f64).sqrt();
    let modes: Vec<i64> = range.iter().collect();
    let roots = Roots::new(n);
    let mut weights = vec![Complex64::zero(); m * modes.len()];
    for r in 0..m {
        for (c, &l) in modes.iter().enumerate() {
            weights[r * modes.len() + c] =
                (0..n).map(|e| channel.get(r, e) * roots.at(e, l)).sum::<Complex64>() * scale;
        }
    }
    let mut out = SampleBlock::zeros(m, per_mode.samples, per_mode.sample_interval, Domain::Element);
    mix_rows(&weights, m, per_mode, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single_mode_block(n: usize, l: i64) -> SampleBlock {
        let mut b = SampleBlock::zeros(n, 3, 1.0, Domain::Mode);
        b.mode_row_mut(l).unwrap().fill(c(1.0, 0.0));
        b
    }

    #[test]
    fn mode_zero_is_uniform_feed() {
        let x = multiplex_modes(&single_mode_block(4, 0), 4).unwrap();
        for n in 0..4 {
            for z in x.row(n) {
                assert!((z - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn mode_one_has_quarter_turn_phase_steps() {
        let x = multiplex_modes(&single_mode_block(4, 1), 4).unwrap();
        for n in 0..4 {
            let z = x.row(n)[0];
            assert!((z.norm() - 0.5).abs() < 1e-15);
            let want = Complex64::from_polar(0.5, PI / 2.0 * n as f64);
            assert!((z - want).norm() < 1e-15, "element {n}: {z}");
        }
    }

    #[test]
    fn constant_elements_land_in_mode_zero() {
        let cst = c(0.3, -1.2);
        let x = SampleBlock::from_rows(vec![vec![cst; 5]; 8], 1.0, Domain::Element).unwrap();
        let t = decompose_modes(&x, Normalization::Unitary).unwrap();
        for l in ModeRange::for_elements(8).iter() {
            let want = if l == 0 { cst * 8f64.sqrt() } else { Complex64::zero() };
            for z in t.mode_row(l).unwrap() {
                assert!((z - want).norm() < 1e-14, "mode {l}");
            }
        }
        let y0 = decompose_mode(&x, 0, Normalization::Unnormalized).unwrap();
        assert!((y0[0] - cst * 8.0).norm() < 1e-14);
    }

    #[test]
    fn energy_of_rows() {
        let b = SampleBlock::zeros(2, 4, 1.0, Domain::Element);
        assert_eq!(sample_block_energy(&b, 1).unwrap(), 0.0);
        let b = SampleBlock::from_rows(vec![vec![Complex64::from_polar(1.5, 0.7); 9]], 1.0, Domain::Element).unwrap();
        assert!((sample_block_energy(&b, 0).unwrap() - 2.25).abs() < 1e-14);
        assert!(matches!(sample_block_energy(&b, 1), Err(Error::Index(_))));
        let empty = SampleBlock::zeros(1, 0, 1.0, Domain::Element);
        assert!(matches!(sample_block_energy(&empty, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn fused_transmit_matches_two_steps() {
        use crate::config::LinkConfig;
        use crate::geometry::{build_channel_matrix, DistanceModel};
        let cfg = LinkConfig::default().with_elements(8);
        let h = build_channel_matrix(&cfg, DistanceModel::Exact);
        let mut s = SampleBlock::zeros(8, 4, 1.0, Domain::Mode);
        for (i, z) in s.data.iter_mut().enumerate() {
            *z = Complex64::from_polar(1.0 + i as f64 * 0.1, i as f64 * 0.7);
        }
        let fused = transmit_modes(&h, &s).unwrap();
        let stepwise = propagate(&h, &multiplex_modes(&s, 8).unwrap()).unwrap();
        let scale = stepwise.total_energy().sqrt();
        for r in 0..8 {
            for (a, b) in fused.row(r).iter().zip(stepwise.row(r)) {
                assert!((a - b).norm() < 1e-14 * scale);
            }
        }
    }

    #[test]
    fn shape_errors() {
        let b = SampleBlock::zeros(5, 2, 1.0, Domain::Mode);
        assert!(matches!(multiplex_modes(&b, 4), Err(Error::Shape(_))));
        let e = SampleBlock::zeros(4, 2, 1.0, Domain::Element);
        assert!(matches!(multiplex_modes(&e, 4), Err(Error::Shape(_))));
        assert!(matches!(
            decompose_modes(&b, Normalization::Unitary),
            Err(Error::Shape(_))
        ));
        assert!(SampleBlock::from_rows(vec![vec![c(0.0, 0.0); 2], vec![]], 1.0, Domain::Mode).is_err());
    }
}
