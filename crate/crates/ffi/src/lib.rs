//! C ABI over the `oam-antijam` simulator.
//!
//! Every entry point returns an [`OamStatus`]; on failure a description is
//! kept per thread and can be read with [`oam_last_error`]. Objects are
//! opaque handles owned by the caller and released with the matching
//! `*_free` function. Panics never cross the boundary.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use oam_antijam::backscatter::{calibrate_threshold, MeanEstimator, Preamble};
use oam_antijam::geometry::mode_channel_gain;
use oam_antijam::metrics::Scheme;
use oam_antijam::report::{to_csv_string, write_csv};
use oam_antijam::scenario::{parse_scenario_str, Scenario};
use oam_antijam::sensing::detection_probabilities;
use oam_antijam::special::{bessel_j, chi_square_cdf, gamma_cdf};
use oam_antijam::sweep::{run_sweep, SweepResult};
use oam_antijam::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OamStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    InvalidInput = 3,
    Domain = 4,
    Index = 5,
    Shape = 6,
    Calibration = 7,
    Numeric = 8,
    Parse = 9,
    Io = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OamScheme {
    Proposed = 0,
    Baseline = 1,
}

/// One row of a sweep, mirroring the CSV columns plus the SE standard error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OamSweepRow {
    pub scheme: OamScheme,
    pub snr_db: f64,
    pub n_elements: u32,
    pub n_jammed: u32,
    pub se_bits_per_hz: f64,
    pub se_std_error: f64,
    pub p_j: f64,
    pub p_u: f64,
    pub p_c: f64,
    pub ber: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Scenario handle: link configuration, sweep axes and settings.
pub struct OamConfig {
    scenario: Scenario,
}

/// Sweep results handle.
pub struct OamSweep {
    rows: Vec<SweepResult>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OamStatus {
    match e {
        Error::InvalidConfig { .. } => OamStatus::InvalidConfig,
        Error::Index(_) => OamStatus::Index,
        Error::Domain(_) => OamStatus::Domain,
        Error::Shape(_) => OamStatus::Shape,
        Error::InvalidInput(_) | Error::InvalidPreamble(_) => OamStatus::InvalidInput,
        Error::Calibration(_) => OamStatus::Calibration,
        Error::Numeric(_) => OamStatus::Numeric,
        Error::Parse(_) => OamStatus::Parse,
        Error::Io(_) => OamStatus::Io,
    }
}

enum Fail {
    Null,
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, mapping errors and panics to a status and the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OamStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OamStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            OamStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            OamStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null)
}

unsafe fn in_ref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oam_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Reference configuration (empty scenario).
#[no_mangle]
pub unsafe extern "C" fn oam_config_default(out: *mut *mut OamConfig) -> OamStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = Box::into_raw(Box::new(OamConfig {
            scenario: Scenario::default(),
        }));
        Ok(())
    })
}

/// Parses a scenario from NUL-terminated TOML text.
#[no_mangle]
pub unsafe extern "C" fn oam_config_from_toml(text: *const c_char, out: *mut *mut OamConfig) -> OamStatus {
    guard(|| {
        let out = out_ref(out)?;
        if text.is_null() {
            return Err(Fail::Null);
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Error::Parse("scenario text is not UTF-8".into()))?;
        let mut scenario = parse_scenario_str(text)?;
        scenario.settings.seed = scenario.seed.unwrap_or(0);
        *out = Box::into_raw(Box::new(OamConfig { scenario }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn oam_config_free(config: *mut OamConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

#[no_mangle]
pub unsafe extern "C" fn oam_config_set_seed(config: *mut OamConfig, seed: u64) -> OamStatus {
    guard(|| {
        out_ref(config)?.scenario.settings.seed = seed;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn oam_config_set_trials(config: *mut OamConfig, trials: u64) -> OamStatus {
    guard(|| {
        let c = out_ref(config)?;
        if trials == 0 {
            return Err(Error::InvalidConfig {
                field: "trials".into(),
                reason: "must be at least 1".into(),
            }
            .into());
        }
        c.scenario.settings.trials =
            usize::try_from(trials).map_err(|_| Error::InvalidInput(format!("{trials} trials")))?;
        Ok(())
    })
}

/// Closed-form channel gain of mode `l` for the configured link.
#[no_mangle]
pub unsafe extern "C" fn oam_mode_channel_gain(
    config: *const OamConfig,
    l: i64,
    re: *mut f64,
    im: *mut f64,
) -> OamStatus {
    guard(|| {
        let c = in_ref(config)?;
        let (re, im) = (out_ref(re)?, out_ref(im)?);
        let g = mode_channel_gain(&c.scenario.config, l)?;
        *re = g.re;
        *im = g.im;
        Ok(())
    })
}

/// Runs the configured sweep. Blocks until every grid point is done.
#[no_mangle]
pub unsafe extern "C" fn oam_run_sweep(config: *const OamConfig, out: *mut *mut OamSweep) -> OamStatus {
    guard(|| {
        let c = in_ref(config)?;
        let out = out_ref(out)?;
        let s = &c.scenario;
        let rows = run_sweep(&s.config, &s.axes, &s.settings)?;
        *out = Box::into_raw(Box::new(OamSweep { rows }));
        Ok(())
    })
}

/// Number of rows; 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn oam_sweep_len(sweep: *const OamSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.rows.len())
}

#[no_mangle]
pub unsafe extern "C" fn oam_sweep_get(sweep: *const OamSweep, index: usize, out: *mut OamSweepRow) -> OamStatus {
    guard(|| {
        let s = in_ref(sweep)?;
        let out = out_ref(out)?;
        let r = s
            .rows
            .get(index)
            .ok_or_else(|| Error::Index(format!("row {index} of {}", s.rows.len())))?;
        *out = OamSweepRow {
            scheme: match r.scheme {
                Scheme::Proposed => OamScheme::Proposed,
                Scheme::Baseline => OamScheme::Baseline,
            },
            snr_db: r.snr_db,
            n_elements: r.n_elements as u32,
            n_jammed: r.n_jammed as u32,
            se_bits_per_hz: r.se_bits,
            se_std_error: r.se_std_error,
            p_j: r.p_j,
            p_u: r.p_u,
            p_c: r.p_c,
            ber: r.ber,
            trials: r.trials as u64,
            seed: r.seed,
        };
        Ok(())
    })
}

/// CSV text of the sweep; release with [`oam_string_free`].
#[no_mangle]
pub unsafe extern "C" fn oam_sweep_to_csv(sweep: *const OamSweep, out: *mut *mut c_char) -> OamStatus {
    guard(|| {
        let s = in_ref(sweep)?;
        let out = out_ref(out)?;
        let text = CString::new(to_csv_string(&s.rows)).map_err(|e| Error::Numeric(e.to_string()))?;
        *out = text.into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn oam_sweep_write_csv(sweep: *const OamSweep, path: *const c_char) -> OamStatus {
    guard(|| {
        let s = in_ref(sweep)?;
        if path.is_null() {
            return Err(Fail::Null);
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Error::Io("path is not UTF-8".into()))?;
        let file = std::fs::File::create(Path::new(path)).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        Ok(write_csv(std::io::BufWriter::new(file), &s.rows)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn oam_sweep_free(sweep: *mut OamSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

#[no_mangle]
pub unsafe extern "C" fn oam_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn oam_bessel_j(order: i64, x: f64, out: *mut f64) -> OamStatus {
    guard(|| {
        *out_ref(out)? = bessel_j(order, x)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn oam_gamma_cdf(x: f64, shape: u32, scale: f64, out: *mut f64) -> OamStatus {
    guard(|| {
        *out_ref(out)? = gamma_cdf(x, shape, scale)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn oam_chi_square_cdf(x: f64, dof: u32, out: *mut f64) -> OamStatus {
    guard(|| {
        *out_ref(out)? = chi_square_cdf(x, dof)?;
        Ok(())
    })
}

/// Analytic probabilities that a mode with per-sample variance `variance`
/// is flagged jammed / unjammed at threshold `energy_threshold` over `k` samples.
#[no_mangle]
pub unsafe extern "C" fn oam_detection_probabilities(
    energy_threshold: f64,
    k: u32,
    variance: f64,
    p_jammed: *mut f64,
    p_unjammed: *mut f64,
) -> OamStatus {
    guard(|| {
        let (pj, pu) = (out_ref(p_jammed)?, out_ref(p_unjammed)?);
        let s = detection_probabilities(energy_threshold, k, variance)?;
        *pj = s.p_jammed;
        *pu = s.p_unjammed;
        Ok(())
    })
}

/// Energy threshold from `len` preamble symbol energies and their known bits
/// (per-class mean estimates).
#[no_mangle]
pub unsafe extern "C" fn oam_calibrate_threshold(
    energies: *const f64,
    bits: *const u8,
    len: usize,
    k: u32,
    q_th: *mut f64,
) -> OamStatus {
    guard(|| {
        let q_th = out_ref(q_th)?;
        if energies.is_null() || bits.is_null() {
            return Err(Fail::Null);
        }
        let energies = std::slice::from_raw_parts(energies, len);
        let bits = std::slice::from_raw_parts(bits, len);
        let preamble = Preamble::new(bits.to_vec())?;
        *q_th = calibrate_threshold(energies, &preamble, k, MeanEstimator::PerClass)?.q_th;
        Ok(())
    })
}
