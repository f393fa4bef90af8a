//! Scenario files: TOML with `[link]`, `[jamming]`, `[detection]`, `[pga]`
//! and `[sweep]` tables. Every key is optional and unknown keys are errors.
//!
//! ```toml
//! [link]
//! n_elements = 16          # or n_tx / n_rx
//! radius_tx = 0.75
//! radius_rx = 0.75
//! axial_distance = 15.0
//! carrier_hz = 5.8e9       # or wavelength
//! beta = 1.0
//! transmit_power_total = 1.0
//! sample_interval = 1e-6
//! noise_variance_rx = 1e-10  # replaced by the SNR axis during sweeps
//! distance_model = "approximate"  # or "exact"
//!
//! [jamming]
//! variance_tx = 0.1
//! variance_rx = 0.1
//! tx_model = "coherent"    # or "per_mode"
//! rx_model = "co_mode"     # or "iid"
//!
//! [detection]
//! energy_threshold = 0.5
//! samples_per_symbol = 16
//! preamble_length = 16
//! threshold_rule = "fixed" # or "quantile" with quantile_p_u
//! estimator = "per_class"  # or "literal"
//! variance_model = "full"  # or "literal"
//!
//! [pga]
//! a0 = 0.5
//! a1 = 2.0
//! p1 = 0.5
//!
//! [sweep]
//! snr_db = [-10, -5, 0, 5, 10, 15, 20, 25, 30]
//! n_jammed = [4]
//! n_elements = [16]
//! schemes = ["proposed", "baseline"]
//! snr_reference = "received"  # or "transmit"
//! trials = 1000
//! payload_symbols = 16
//! seed = 0
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::backscatter::{MeanEstimator, VarianceModel};
use crate::config::{LinkConfig, PgaAlphabet, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::geometry::DistanceModel;
use crate::metrics::Scheme;
use crate::sweep::{
    validate_axes, RxJammingModel, SnrReference, SweepAxes, SweepSettings, ThresholdRule, TxJammingModel,
};

/// Environment variable holding the fallback seed.
pub const SEED_ENV: &str = "OAM_SIM_SEED";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    #[serde(default)]
    link: LinkSection,
    #[serde(default)]
    jamming: JammingSection,
    #[serde(default)]
    detection: DetectionSection,
    #[serde(default)]
    pga: PgaSection,
    #[serde(default)]
    sweep: SweepSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkSection {
    n_elements: Option<usize>,
    n_tx: Option<usize>,
    n_rx: Option<usize>,
    radius_tx: Option<f64>,
    radius_rx: Option<f64>,
    axial_distance: Option<f64>,
    carrier_hz: Option<f64>,
    wavelength: Option<f64>,
    beta: Option<f64>,
    transmit_power_total: Option<f64>,
    sample_interval: Option<f64>,
    noise_variance_rx: Option<f64>,
    distance_model: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct JammingSection {
    variance_tx: Option<f64>,
    variance_rx: Option<f64>,
    tx_model: Option<String>,
    rx_model: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DetectionSection {
    energy_threshold: Option<f64>,
    samples_per_symbol: Option<usize>,
    preamble_length: Option<usize>,
    threshold_rule: Option<String>,
    quantile_p_u: Option<f64>,
    estimator: Option<String>,
    variance_model: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PgaSection {
    a0: Option<f64>,
    a1: Option<f64>,
    p1: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    snr_db: Option<Vec<f64>>,
    n_jammed: Option<Vec<usize>>,
    n_elements: Option<Vec<usize>>,
    schemes: Option<Vec<String>>,
    snr_reference: Option<String>,
    trials: Option<usize>,
    payload_symbols: Option<usize>,
    seed: Option<u64>,
}

/// A parsed and validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: LinkConfig,
    pub axes: SweepAxes,
    /// `settings.seed` is the resolved default; see [`Scenario::seed`].
    pub settings: SweepSettings,
    /// Seed written in the file, if any.
    pub seed: Option<u64>,
}

impl Default for Scenario {
    fn default() -> Self {
        parse_scenario_str("").expect("empty scenario is valid")
    }
}

fn choice<T: Copy>(field: &str, value: Option<&String>, options: &[(&str, T)], default: T) -> Result<T> {
    let Some(v) = value else { return Ok(default) };
    options
        .iter()
        .find(|(name, _)| name == v)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
            Error::config(field, format!("must be one of {names:?}, got {v:?}"))
        })
}

pub fn parse_scenario_str(text: &str) -> Result<Scenario> {
    let file: File = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut config = LinkConfig::default();
    let l = &file.link;

    if let Some(n) = l.n_elements {
        config.n_tx = n;
        config.n_rx = n;
    }
    config.n_tx = l.n_tx.unwrap_or(config.n_tx);
    config.n_rx = l.n_rx.unwrap_or(config.n_rx);
    config.r_tx = l.radius_tx.unwrap_or(config.r_tx);
    config.r_rx = l.radius_rx.unwrap_or(config.r_rx);
    config.axial_distance = l.axial_distance.unwrap_or(config.axial_distance);
    match (l.carrier_hz, l.wavelength) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "link.wavelength",
                "give either carrier_hz or wavelength, not both",
            ));
        }
        (Some(f), None) => {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::config("link.carrier_hz", format!("must be positive, got {f}")));
            }
            config.wavelength = SPEED_OF_LIGHT / f;
        }
        (None, Some(w)) => config.wavelength = w,
        (None, None) => {}
    }
    config.beta = l.beta.unwrap_or(config.beta);
    config.transmit_power_total = l.transmit_power_total.unwrap_or(config.transmit_power_total);
    config.sample_interval = l.sample_interval.unwrap_or(config.sample_interval);
    config.noise_variance_rx = l.noise_variance_rx.unwrap_or(config.noise_variance_rx);

    let j = &file.jamming;
    config.jam_variance_tx = j.variance_tx.unwrap_or(config.jam_variance_tx);
    config.jam_variance_rx = j.variance_rx.unwrap_or(config.jam_variance_rx);

    let d = &file.detection;
    config.energy_threshold_tx = d.energy_threshold.unwrap_or(config.energy_threshold_tx);
    config.samples_per_symbol = d.samples_per_symbol.unwrap_or(config.samples_per_symbol);
    config.preamble_length = d.preamble_length.unwrap_or(config.preamble_length);

    let p = &file.pga;
    let a0 = p.a0.unwrap_or(config.pga.gain(0));
    let a1 = p.a1.unwrap_or(config.pga.gain(1));
    let p1 = p.p1.unwrap_or(config.pga.priors()[1]);
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(Error::config("pga.p1", format!("must lie in (0, 1), got {p1}")));
    }
    config.pga = PgaAlphabet::new(vec![a0, a1], vec![1.0 - p1, p1]).map_err(|e| match e {
        Error::InvalidConfig { reason, .. } => Error::config("pga.a1", reason),
        other => other,
    })?;

    config.validate()?;
    if config.n_tx != config.n_rx {
        return Err(Error::config("link.n_rx", "must equal n_tx"));
    }

    let s = &file.sweep;
    let defaults = SweepAxes::default();
    let axes = SweepAxes {
        snr_db: s.snr_db.clone().unwrap_or(defaults.snr_db),
        n_jammed: s.n_jammed.clone().unwrap_or(defaults.n_jammed),
        n_elements: s.n_elements.clone().unwrap_or_else(|| vec![config.n_tx]),
    };
    validate_axes(&axes)?;
    if let Some(x) = axes.snr_db.iter().find(|x| !x.is_finite()) {
        return Err(Error::config("sweep.snr_db", format!("must be finite, got {x}")));
    }

    let mut settings = SweepSettings::default();
    if let Some(names) = &s.schemes {
        if names.is_empty() {
            return Err(Error::config("sweep.schemes", "needs at least one scheme"));
        }
        settings.schemes = names
            .iter()
            .map(|n| Scheme::parse(n).ok_or_else(|| Error::config("sweep.schemes", format!("unknown scheme {n:?}"))))
            .collect::<Result<_>>()?;
    }
    settings.snr_reference = choice(
        "sweep.snr_reference",
        s.snr_reference.as_ref(),
        &[
            ("received", SnrReference::Received),
            ("transmit", SnrReference::Transmit),
        ],
        settings.snr_reference,
    )?;
    if let Some(t) = s.trials {
        if t == 0 {
            return Err(Error::config("sweep.trials", "must be at least 1"));
        }
        settings.trials = t;
    }
    settings.payload_symbols = s.payload_symbols.unwrap_or(settings.payload_symbols);
    settings.distance_model = choice(
        "link.distance_model",
        l.distance_model.as_ref(),
        &[
            ("approximate", DistanceModel::Approximate),
            ("exact", DistanceModel::Exact),
        ],
        settings.distance_model,
    )?;
    settings.tx_jamming = choice(
        "jamming.tx_model",
        j.tx_model.as_ref(),
        &[
            ("coherent", TxJammingModel::Coherent),
            ("per_mode", TxJammingModel::PerMode),
        ],
        settings.tx_jamming,
    )?;
    settings.rx_jamming = choice(
        "jamming.rx_model",
        j.rx_model.as_ref(),
        &[("co_mode", RxJammingModel::CoMode), ("iid", RxJammingModel::Iid)],
        settings.rx_jamming,
    )?;
    settings.estimator = choice(
        "detection.estimator",
        d.estimator.as_ref(),
        &[
            ("per_class", MeanEstimator::PerClass),
            ("literal", MeanEstimator::Literal),
        ],
        settings.estimator,
    )?;
    settings.variance_model = choice(
        "detection.variance_model",
        d.variance_model.as_ref(),
        &[("full", VarianceModel::Full), ("literal", VarianceModel::Literal)],
        settings.variance_model,
    )?;
    let quantile = choice(
        "detection.threshold_rule",
        d.threshold_rule.as_ref(),
        &[("fixed", false), ("quantile", true)],
        false,
    )?;
    settings.threshold_rule = match (quantile, d.quantile_p_u) {
        (true, Some(p)) if p > 0.0 && p < 1.0 => ThresholdRule::Quantile(p),
        (true, Some(p)) => {
            return Err(Error::config(
                "detection.quantile_p_u",
                format!("must lie in (0, 1), got {p}"),
            ));
        }
        (true, None) => return Err(Error::config("detection.quantile_p_u", "required by the quantile rule")),
        (false, Some(_)) => {
            return Err(Error::config(
                "detection.quantile_p_u",
                "only used with threshold_rule = \"quantile\"",
            ));
        }
        (false, None) => ThresholdRule::Fixed,
    };
    settings.seed = s.seed.unwrap_or(0);

    Ok(Scenario {
        config,
        axes,
        settings,
        seed: s.seed,
    })
}

pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_scenario_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Seed precedence: command line, then scenario file, then the environment, then 0.
pub fn resolve_seed(cli: Option<u64>, scenario: Option<u64>, env: Option<&str>) -> Result<u64> {
    if let Some(s) = cli.or(scenario) {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::config(SEED_ENV, format!("must be an unsigned integer, got {v:?}"))),
        None => Ok(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_reference_setup() {
        let s = parse_scenario_str("").unwrap();
        assert_eq!(s.config, LinkConfig::default());
        assert_eq!(s.axes, SweepAxes::default());
        assert_eq!(s.settings, SweepSettings::default());
        assert_eq!(s.seed, None);
        let c = &s.config;
        assert_eq!(
            (c.r_tx, c.r_rx, c.axial_distance, c.energy_threshold_tx),
            (0.75, 0.75, 15.0, 0.5)
        );
        assert_eq!(c.pga.gains(), &[0.5, 2.0]);
        assert_eq!((c.jam_variance_tx, c.jam_variance_rx), (0.1, 0.1));
        assert!((SPEED_OF_LIGHT / c.wavelength - 5.8e9).abs() < 1.0);
    }

    #[test]
    fn named_validation_errors() {
        match parse_scenario_str("[link]\nn_tx = 0\n") {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "n_tx"),
            other => panic!("{other:?}"),
        }
        match parse_scenario_str("[pga]\na1 = 0.25\n") {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "pga.a1"),
            other => panic!("{other:?}"),
        }
        match parse_scenario_str("[link]\nn_rx = 8\n") {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "link.n_rx"),
            other => panic!("{other:?}"),
        }
        match parse_scenario_str("[sweep]\nschemes = [\"other\"]\n") {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "sweep.schemes"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_scenario_str("[sweep]\nn_jammed = [17]\n"),
            Err(Error::InvalidConfig { .. })
        ));
    }

    #[test]
    fn unknown_keys_and_syntax_errors_carry_location() {
        let e = parse_scenario_str("[link]\nradius = 1.0\n").unwrap_err();
        let msg = e.to_string();
        assert!(matches!(e, Error::Parse(_)));
        assert!(msg.contains("radius") && msg.contains("line 2"), "{msg}");
        let e = parse_scenario_str("[detection]\nenergy_threshold = \n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(matches!(parse_scenario_str("[extra]\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn overrides_merge_with_defaults() {
        let s = parse_scenario_str("[pga]\na1 = 4.0\n").unwrap();
        let want = LinkConfig {
            pga: PgaAlphabet::binary(0.5, 4.0).unwrap(),
            ..LinkConfig::default()
        };
        assert_eq!(s.config, want);
        let s = parse_scenario_str(
            "[link]\nn_elements = 8\ncarrier_hz = 2.4e9\n[sweep]\nsnr_db = [0, 10]\nseed = 9\n\
             [detection]\nthreshold_rule = \"quantile\"\nquantile_p_u = 0.99\n",
        )
        .unwrap();
        assert_eq!((s.config.n_tx, s.axes.n_elements.clone()), (8, vec![8]));
        assert_eq!(s.axes.snr_db, vec![0.0, 10.0]);
        assert_eq!(s.seed, Some(9));
        assert_eq!(s.settings.threshold_rule, ThresholdRule::Quantile(0.99));
        assert!((s.config.wavelength - SPEED_OF_LIGHT / 2.4e9).abs() < 1e-15);
    }

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(1), Some(2), Some("3")).unwrap(), 1);
        assert_eq!(resolve_seed(None, Some(2), Some("3")).unwrap(), 2);
        assert_eq!(resolve_seed(None, None, Some(" 3 ")).unwrap(), 3);
        assert_eq!(resolve_seed(None, None, None).unwrap(), 0);
        assert!(resolve_seed(None, None, Some("x")).is_err());
    }
}
