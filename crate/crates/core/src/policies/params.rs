//! Batching parameters of the lower-envelope policy.
//!
//! All logarithms are natural. Given load `rho` and size `n`, with
//! `f = max(n, 1 / (1 - rho))`:
//!
//! ```text
//! b = ceil(c_b (1 - rho)^-2   ln f)      batch (arrival period) length
//! d = ceil(c_d (1 - rho)^-4/3 ln f)      delay before service starts
//! s = ceil(rho b + sqrt(c_s b ln f))     end of normal clearing
//! ```
//!
//! A service period of length `b` splits into a lower-envelope phase
//! (`b - d` slots), a normal clearing phase (`d + s - b`) and a backlog
//! clearing phase (`b - s`); each must be at least one slot long.

use std::fmt;
use std::str::FromStr;

use crate::error::ParamError;
use crate::policies::subintervals::{subintervals_adaptive, subintervals_theoretical};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Constant conditions and subinterval lengths exactly as analyzed;
    /// only attainable for `rho` extremely close to one.
    #[default]
    Theoretical,
    /// Subintervals shrink by the envelope-size recursion, so moderate `b`
    /// and `d` still yield a usable schedule.
    Adaptive,
}

impl FromStr for Mode {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "theoretical" => Ok(Mode::Theoretical),
            "adaptive" => Ok(Mode::Adaptive),
            other => Err(ParamError::OutOfRange(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Theoretical => "theoretical",
            Mode::Adaptive => "adaptive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyConstants {
    pub c_b: f64,
    pub c_d: f64,
    pub c_s: f64,
    /// Slack in the adaptive subinterval recursion.
    pub c_f: f64,
    pub mode: Mode,
}

impl PolicyConstants {
    /// Smallest integer constants satisfying every theoretical condition.
    pub const fn theoretical() -> Self {
        Self {
            c_b: 32.0,
            c_d: 181.0,
            c_s: 30.0,
            c_f: 304.0,
            mode: Mode::Theoretical,
        }
    }

    /// Default adaptive constants.
    pub const fn adaptive() -> Self {
        Self {
            c_b: 4.0,
            c_d: 1.0,
            c_s: 1.0,
            c_f: 304.0,
            mode: Mode::Adaptive,
        }
    }

    /// Adaptive constants for desk-scale experiments (`n` around 16, `rho`
    /// around 0.85). The geometric shrink covers only about
    /// `rho d / (1 - rho)` slots, so `d` has to be a sizable fraction of `b`
    /// at moderate load; at `n = 16, rho = 0.85` this gives `b = 1479`,
    /// `d = 696`, `s = 1415` and subintervals `[696, 551, 232]`.
    pub const fn desk() -> Self {
        Self {
            c_b: 12.0,
            c_d: 20.0,
            c_s: 6.0,
            c_f: 1.0,
            mode: Mode::Adaptive,
        }
    }

    pub fn preset(mode: Mode) -> Self {
        match mode {
            Mode::Theoretical => Self::theoretical(),
            Mode::Adaptive => Self::adaptive(),
        }
    }

    /// `c_r = c_b - sqrt(c_s c_b)`.
    pub fn c_r(&self) -> f64 {
        self.c_b - (self.c_s * self.c_b).sqrt()
    }

    /// Checks the constant conditions for the configured mode.
    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [("c_b", self.c_b), ("c_d", self.c_d), ("c_s", self.c_s)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ParamError::OutOfRange(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.c_f.is_finite() && self.c_f >= 0.0) {
            return Err(ParamError::OutOfRange(format!(
                "c_f = {} must be non-negative",
                self.c_f
            )));
        }
        if self.c_r() < 1.0 {
            return Err(RegimeViolation::Constant("c_b - sqrt(c_s c_b) >= 1").into());
        }
        if self.mode == Mode::Theoretical {
            if self.c_d.powf(1.5) < 76.0 * self.c_b {
                return Err(RegimeViolation::Constant("c_d^(3/2) >= 76 c_b").into());
            }
            if self.c_d < self.c_b {
                return Err(RegimeViolation::Constant("c_d >= c_b").into());
            }
            if self.c_s < 30.0 {
                return Err(RegimeViolation::Constant("c_s >= 30").into());
            }
        }
        Ok(())
    }

    /// Parses a constants file of `key = value` lines (`c_b`, `c_d`, `c_s`,
    /// `c_f`, `mode`). Blank lines and `#` comments are ignored.
    ///
    /// Unset keys take the preset of the effective mode, which is
    /// `mode_override`, else the file's `mode`, else theoretical.
    pub fn parse(text: &str, mode_override: Option<Mode>) -> Result<Self, ParamError> {
        let mut pairs = Vec::new();
        let mut file_mode = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ParamError::ConstantsFile { line: idx + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "mode" => file_mode = Some(value.parse::<Mode>().map_err(|e| err(e.to_string()))?),
                "c_b" | "c_d" | "c_s" | "c_f" => {
                    let v: f64 = value.parse().map_err(|_| err(format!("`{value}` is not a number")))?;
                    pairs.push((key.to_string(), v));
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let mode = mode_override.or(file_mode).unwrap_or_default();
        let mut c = Self::preset(mode);
        for (key, v) in pairs {
            match key.as_str() {
                "c_b" => c.c_b = v,
                "c_d" => c.c_d = v,
                "c_s" => c.c_s = v,
                _ => c.c_f = v,
            }
        }
        Ok(c)
    }

    pub fn to_text(&self) -> String {
        format!(
            "mode = {}\nc_b = {}\nc_d = {}\nc_s = {}\nc_f = {}\n",
            self.mode, self.c_b, self.c_d, self.c_s, self.c_f
        )
    }
}

impl Default for PolicyConstants {
    fn default() -> Self {
        Self::theoretical()
    }
}

/// The condition that put a parameter choice outside the valid regime.
#[derive(Debug, Clone, PartialEq)]
pub enum RegimeViolation {
    Constant(&'static str),
    SwitchTooSmall { n: usize },
    LoadTooLow { rho: f64 },
    GapTooWide { inv_gap_pow: f64, required: f64 },
    EnvelopePhaseEmpty { b: u64, d: u64 },
    BacklogPhaseEmpty { b: u64, s: u64 },
    NormalPhaseEmpty { b: u64, d: u64, s: u64 },
    Subintervals(String),
}

impl fmt::Display for RegimeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeViolation::Constant(c) => write!(f, "constant condition {c} fails"),
            RegimeViolation::SwitchTooSmall { n } => write!(f, "n = {n} < 4"),
            RegimeViolation::LoadTooLow { rho } => write!(f, "rho = {rho} < 1/2"),
            RegimeViolation::GapTooWide { inv_gap_pow, required } => {
                write!(f, "(1 - rho)^(-2/3) = {inv_gap_pow:.4} < {required:.4}")
            }
            RegimeViolation::EnvelopePhaseEmpty { b, d } => {
                write!(f, "lower-envelope phase b - d = {b} - {d} < 1")
            }
            RegimeViolation::BacklogPhaseEmpty { b, s } => {
                write!(f, "backlog phase b - s = {b} - {s} < 1")
            }
            RegimeViolation::NormalPhaseEmpty { b, d, s } => {
                write!(f, "normal clearing phase d + s - b = {d} + {s} - {b} < 1")
            }
            RegimeViolation::Subintervals(msg) => write!(f, "subintervals: {msg}"),
        }
    }
}

impl From<RegimeViolation> for ParamError {
    fn from(v: RegimeViolation) -> Self {
        ParamError::InvalidRegime(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyParams {
    pub n: usize,
    pub rho: f64,
    pub mode: Mode,
    pub f: f64,
    pub log_f: f64,
    pub b: u64,
    pub d: u64,
    pub s: u64,
    pub ell: usize,
    /// Subinterval lengths `I_0 ..= I_ell`; `I_0 = d` and the sum is `b`.
    pub intervals: Vec<u64>,
    pub c_r: f64,
    pub c_o: f64,
}

impl PolicyParams {
    pub fn envelope_phase_len(&self) -> u64 {
        self.b - self.d
    }

    pub fn normal_phase_len(&self) -> u64 {
        self.d + self.s - self.b
    }

    pub fn backlog_phase_len(&self) -> u64 {
        self.b - self.s
    }
}

/// `max(n, 1 / (1 - rho))`.
pub fn scale_f(n: usize, rho: f64) -> f64 {
    (n as f64).max(1.0 / (1.0 - rho))
}

fn check_inputs(n: usize, rho: f64) -> Result<(), ParamError> {
    if n < 2 {
        return Err(ParamError::OutOfRange(format!("n = {n} must be at least 2")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(ParamError::OutOfRange(format!("rho = {rho} must lie in (0, 1)")));
    }
    Ok(())
}

/// Batch length `b` alone, without any validity checks beyond the inputs.
pub fn batch_length(n: usize, rho: f64, constants: &PolicyConstants) -> Result<u64, ParamError> {
    check_inputs(n, rho)?;
    let log_f = scale_f(n, rho).ln();
    Ok((constants.c_b * (1.0 - rho).powi(-2) * log_f).ceil() as u64)
}

/// Checks the size and load conditions of the theoretical regime:
/// `n >= 4`, `rho >= 1/2`, and
/// `(1 - rho)^(-2/3) >= max(38 / sqrt(c_d), sqrt(c_d) / 38, c_d)`.
pub fn theoretical_regime(n: usize, rho: f64, c_d: f64) -> Result<(), RegimeViolation> {
    if n < 4 {
        return Err(RegimeViolation::SwitchTooSmall { n });
    }
    if rho < 0.5 {
        return Err(RegimeViolation::LoadTooLow { rho });
    }
    let lhs = (1.0 - rho).powf(-2.0 / 3.0);
    let root = c_d.sqrt();
    let required = (38.0 / root).max(root / 38.0).max(c_d);
    if lhs < required {
        return Err(RegimeViolation::GapTooWide {
            inv_gap_pow: lhs,
            required,
        });
    }
    Ok(())
}

/// Derives the batching parameters, or reports which validity condition fails.
pub fn derive_params(n: usize, rho: f64, constants: &PolicyConstants) -> Result<PolicyParams, ParamError> {
    check_inputs(n, rho)?;
    constants.validate()?;
    if constants.mode == Mode::Theoretical {
        theoretical_regime(n, rho, constants.c_d)?;
    }
    let f = scale_f(n, rho);
    let log_f = f.ln();
    let gap = 1.0 - rho;
    let b = (constants.c_b * gap.powi(-2) * log_f).ceil() as u64;
    let d = (constants.c_d * gap.powf(-4.0 / 3.0) * log_f).ceil() as u64;
    let s = (rho * b as f64 + (constants.c_s * b as f64 * log_f).sqrt()).ceil() as u64;
    if b <= d {
        return Err(RegimeViolation::EnvelopePhaseEmpty { b, d }.into());
    }
    if b <= s {
        return Err(RegimeViolation::BacklogPhaseEmpty { b, s }.into());
    }
    if d + s <= b {
        return Err(RegimeViolation::NormalPhaseEmpty { b, d, s }.into());
    }
    let (ell, intervals) = match constants.mode {
        Mode::Theoretical => {
            subintervals_theoretical(b, d, log_f).map_err(|e| RegimeViolation::Subintervals(e.to_string()))?
        }
        Mode::Adaptive => subintervals_adaptive(b, d, rho, f, constants.c_f)?,
    };
    let c_r = constants.c_r();
    Ok(PolicyParams {
        n,
        rho,
        mode: constants.mode,
        f,
        log_f,
        b,
        d,
        s,
        ell,
        intervals,
        c_r,
        c_o: constants.c_d - c_r,
    })
}
