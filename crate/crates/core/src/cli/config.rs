use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use crate::classical::OrbitLabel;
use crate::{Error, Result};

/// The experiments exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    PhasePortrait,
    Bifurcation,
    Catalog,
    Husimi,
    Survival,
    Heatmap,
    Criteria,
    FindOrbits,
}

impl Subcommand {
    pub const ALL: [Subcommand; 8] = [
        Subcommand::PhasePortrait,
        Subcommand::Bifurcation,
        Subcommand::Catalog,
        Subcommand::Husimi,
        Subcommand::Survival,
        Subcommand::Heatmap,
        Subcommand::Criteria,
        Subcommand::FindOrbits,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Subcommand::PhasePortrait => "phase-portrait",
            Subcommand::Bifurcation => "bifurcation",
            Subcommand::Catalog => "catalog",
            Subcommand::Husimi => "husimi",
            Subcommand::Survival => "survival",
            Subcommand::Heatmap => "heatmap",
            Subcommand::Criteria => "criteria",
            Subcommand::FindOrbits => "find-orbits",
        }
    }

    /// Builds Floquet operators (and so needs `(2j+1)²` storage).
    pub fn is_quantum(self) -> bool {
        matches!(self, Subcommand::Husimi | Subcommand::Survival | Subcommand::Heatmap)
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| Error::Format(format!("unknown subcommand {s:?}")))
    }
}

/// `start:end:count`, inclusive of both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl RangeSpec {
    pub fn values(&self) -> Vec<f64> {
        crate::correspondence::linspace(self.start, self.end, self.count)
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.count)
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Format(format!("{what}: cannot parse {s:?} as a number")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Format(format!("{what}: cannot parse {s:?} as a nonnegative integer")))
}

/// A single value or a `start:end:count` range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ValueSpec {
    Single(f64),
    Range(RangeSpec),
}

impl ValueSpec {
    pub fn parse(s: &str, what: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(ValueSpec::Single(parse_f64(v, what)?)),
            [a, b, n] => Ok(ValueSpec::Range(RangeSpec {
                start: parse_f64(a, what)?,
                end: parse_f64(b, what)?,
                count: parse_usize(n, what)?,
            })),
            _ => Err(Error::Format(format!("{what}: expected a value or start:end:count, got {s:?}"))),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            ValueSpec::Single(v) => vec![*v],
            ValueSpec::Range(r) => r.values(),
        }
    }
}

impl fmt::Display for ValueSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueSpec::Single(v) => write!(f, "{v}"),
            ValueSpec::Range(r) => write!(f, "{r}"),
        }
    }
}

/// Spin values: `j`, `a:b` (unit steps) or `a:b:count` (evenly spaced,
/// each rounded to the nearest multiple of ½).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpinSpec {
    Single(f64),
    Steps { start: f64, end: f64 },
    Range(RangeSpec),
}

impl SpinSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(SpinSpec::Single(parse_f64(v, "j")?)),
            [a, b] => Ok(SpinSpec::Steps { start: parse_f64(a, "j")?, end: parse_f64(b, "j")? }),
            [a, b, n] => Ok(SpinSpec::Range(RangeSpec {
                start: parse_f64(a, "j")?,
                end: parse_f64(b, "j")?,
                count: parse_usize(n, "j")?,
            })),
            _ => Err(Error::Format(format!("j: expected j, a:b or a:b:count, got {s:?}"))),
        }
    }

    /// Requested values before validation (may include invalid spins).
    pub fn raw_values(&self) -> Vec<f64> {
        match *self {
            SpinSpec::Single(v) => vec![v],
            SpinSpec::Steps { start, end } => {
                let mut out = Vec::new();
                let mut v = start;
                while v <= end + 1e-9 {
                    out.push(v);
                    v += 1.0;
                }
                out
            }
            SpinSpec::Range(r) => {
                let mut out: Vec<f64> = r.values().iter().map(|v| (2.0 * v).round() / 2.0).collect();
                out.dedup();
                out
            }
        }
    }
}

impl fmt::Display for SpinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinSpec::Single(v) => write!(f, "{v}"),
            SpinSpec::Steps { start, end } => write!(f, "{start}:{end}"),
            SpinSpec::Range(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Binary,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Binary => "binary",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "binary" | "bin" => Ok(OutputFormat::Binary),
            other => Err(Error::Format(format!("unknown output format {other:?}"))),
        }
    }
}

/// Every parameter of one run. Serializes to a flat `key = value` file whose
/// text round-trips exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Subcommand,
    pub kappa: Option<ValueSpec>,
    pub j: Option<SpinSpec>,
    pub p: Option<f64>,
    pub tau: Option<f64>,
    pub l: Option<usize>,
    pub kicks: Option<usize>,
    pub n_init: Option<usize>,
    pub orbit: Option<OrbitLabel>,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
    pub period: Option<usize>,
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
    /// Husimi start point `(θ, φ)` overriding the orbit point.
    pub start: Option<(f64, f64)>,
    pub average: Option<bool>,
    pub per_kick: Option<bool>,
    pub integer_j: Option<bool>,
    pub format: Option<OutputFormat>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Subcommand) -> Self {
        Self {
            command,
            kappa: None,
            j: None,
            p: None,
            tau: None,
            l: None,
            kicks: None,
            n_init: None,
            orbit: None,
            threshold: None,
            seed: None,
            period: None,
            n_theta: None,
            n_phi: None,
            start: None,
            average: None,
            per_kick: None,
            integer_j: None,
            format: None,
            out_dir: None,
        }
    }

    /// Fills unset keys with the subcommand's defaults. Keys a subcommand
    /// must be given explicitly stay unset.
    pub fn with_defaults(mut self) -> Self {
        use Subcommand::*;
        let c = self.command;
        self.p.get_or_insert(FRAC_PI_2);
        self.tau.get_or_insert(1.0);
        self.out_dir.get_or_insert_with(|| PathBuf::from("out"));
        let default_kappa = match c {
            PhasePortrait => Some(ValueSpec::Single(3.0)),
            Bifurcation => Some(ValueSpec::Range(RangeSpec { start: 0.0, end: 6.5, count: 1301 })),
            Catalog | FindOrbits | Criteria => Some(ValueSpec::Single(2.5)),
            Husimi | Survival => Some(ValueSpec::Single(1.5)),
            Heatmap => None,
        };
        if self.kappa.is_none() {
            self.kappa = default_kappa;
        }
        match c {
            PhasePortrait => {
                self.n_init.get_or_insert(1360);
                self.kicks.get_or_insert(150);
                self.seed.get_or_insert(0);
            }
            Husimi => {
                self.j.get_or_insert(SpinSpec::Single(20.0));
                if self.start.is_none() {
                    self.orbit.get_or_insert(OrbitLabel::P4);
                }
                self.kicks.get_or_insert(8);
                self.average.get_or_insert(false);
                self.format.get_or_insert(OutputFormat::Csv);
            }
            Survival => {
                self.j.get_or_insert(SpinSpec::Single(10.0));
                self.orbit.get_or_insert(OrbitLabel::FP1);
                self.l.get_or_insert(50);
                self.per_kick.get_or_insert(false);
            }
            Heatmap => {
                self.j.get_or_insert(SpinSpec::Steps { start: 1.0, end: 50.0 });
                self.l.get_or_insert(50);
                self.integer_j.get_or_insert(true);
                if let Some(o) = self.orbit {
                    self.threshold.get_or_insert(if o == OrbitLabel::P4 { 1e-8 } else { 1e-10 });
                }
            }
            Criteria => {
                self.j.get_or_insert(SpinSpec::Steps { start: 1.0, end: 50.0 });
                if let Some(o) = self.orbit {
                    self.threshold.get_or_insert(if o == OrbitLabel::P4 { 1e-8 } else { 1e-10 });
                }
            }
            FindOrbits => {
                self.period.get_or_insert(1);
                self.n_theta.get_or_insert(40);
                self.n_phi.get_or_insert(40);
            }
            Bifurcation | Catalog => {}
        }
        self
    }

    /// Canonical `key = value` text, keys in fixed order, unset keys omitted.
    pub fn to_config_string(&self) -> String {
        let mut s = String::from("# kicktop run configuration\n");
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("command", self.command.to_string());
        if let Some(v) = self.kappa {
            put("kappa", v.to_string());
        }
        if let Some(v) = self.j {
            put("j", v.to_string());
        }
        if let Some(v) = self.p {
            put("p", v.to_string());
        }
        if let Some(v) = self.tau {
            put("tau", v.to_string());
        }
        if let Some(v) = self.l {
            put("L", v.to_string());
        }
        if let Some(v) = self.kicks {
            put("kicks", v.to_string());
        }
        if let Some(v) = self.n_init {
            put("n-init", v.to_string());
        }
        if let Some(v) = self.orbit {
            put("orbit", v.to_string());
        }
        if let Some(v) = self.threshold {
            put("threshold", v.to_string());
        }
        if let Some(v) = self.seed {
            put("seed", v.to_string());
        }
        if let Some(v) = self.period {
            put("period", v.to_string());
        }
        if let Some(v) = self.n_theta {
            put("n-theta", v.to_string());
        }
        if let Some(v) = self.n_phi {
            put("n-phi", v.to_string());
        }
        if let Some((t, p)) = self.start {
            put("start", format!("{t},{p}"));
        }
        if let Some(v) = self.average {
            put("average", v.to_string());
        }
        if let Some(v) = self.per_kick {
            put("per-kick", v.to_string());
        }
        if let Some(v) = self.integer_j {
            put("integer-j", v.to_string());
        }
        if let Some(v) = self.format {
            put("format", v.as_str().to_string());
        }
        if let Some(v) = &self.out_dir {
            put("out-dir", v.display().to_string());
        }
        s
    }

    /// Parses the `key = value` format (`#` comments and blank lines ignored).
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut cfg: Option<RunConfig> = None;
        let mut pending: Vec<(String, String)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if pending.iter().any(|(seen, _)| *seen == k) || (k == "command" && cfg.is_some()) {
                return Err(Error::Format(format!("line {}: duplicate key {k:?}", n + 1)));
            }
            if k == "command" {
                cfg = Some(RunConfig::new(v.parse()?));
            } else {
                pending.push((k, v));
            }
        }
        let mut cfg = cfg.ok_or_else(|| Error::Format("config has no command key".into()))?;
        for (k, v) in pending {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let b = |v: &str| -> Result<bool> {
            v.parse::<bool>().map_err(|_| Error::Format(format!("{key}: expected true or false, got {v:?}")))
        };
        match key {
            "kappa" => self.kappa = Some(ValueSpec::parse(value, "kappa")?),
            "j" => self.j = Some(SpinSpec::parse(value)?),
            "p" => self.p = Some(parse_f64(value, key)?),
            "tau" => self.tau = Some(parse_f64(value, key)?),
            "L" => self.l = Some(parse_usize(value, key)?),
            "kicks" => self.kicks = Some(parse_usize(value, key)?),
            "n-init" => self.n_init = Some(parse_usize(value, key)?),
            "orbit" => self.orbit = Some(value.parse()?),
            "threshold" => self.threshold = Some(parse_f64(value, key)?),
            "seed" => {
                self.seed = Some(value.trim().parse().map_err(|_| Error::Format(format!("seed: bad value {value:?}")))?)
            }
            "period" => self.period = Some(parse_usize(value, key)?),
            "n-theta" => self.n_theta = Some(parse_usize(value, key)?),
            "n-phi" => self.n_phi = Some(parse_usize(value, key)?),
            "start" => {
                let (t, p) = value
                    .split_once(',')
                    .ok_or_else(|| Error::Format(format!("start: expected theta,phi, got {value:?}")))?;
                self.start = Some((parse_f64(t, key)?, parse_f64(p, key)?));
            }
            "average" => self.average = Some(b(value)?),
            "per-kick" => self.per_kick = Some(b(value)?),
            "integer-j" => self.integer_j = Some(b(value)?),
            "format" => self.format = Some(value.parse()?),
            "out-dir" => self.out_dir = Some(PathBuf::from(value)),
            other => return Err(Error::Format(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Overwrites every key set in `other` (command excluded).
    pub fn merge(&mut self, other: &RunConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f.clone(); } )* };
        }
        take!(kappa, j, p, tau, l, kicks, n_init, orbit, threshold, seed, period, n_theta, n_phi, start, average, per_kick, integer_j, format, out_dir);
    }

    pub fn kappa_values(&self) -> Vec<f64> {
        self.kappa.map(|k| k.values()).unwrap_or_default()
    }

    pub fn j_values(&self) -> Vec<f64> {
        self.j.map(|j| j.raw_values()).unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Info,
    Warning,
    Error,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

fn threshold_text(t: f64) -> String {
    if (t - SQRT_2 * PI).abs() < 1e-12 {
        "√2π".into()
    } else {
        format!("{t}")
    }
}

/// Range checks, existence warnings and a memory estimate. Never fails;
/// [`Severity::Error`] entries make `run` refuse the config.
pub fn validate_config(cfg: &RunConfig) -> Vec<Diagnostic> {
    use Subcommand::*;
    let mut out = Vec::new();
    let mut push = |severity, message: String| out.push(Diagnostic { severity, message });
    let c = cfg.command;

    match cfg.kappa {
        None => push(Severity::Error, format!("{c} needs --kappa")),
        Some(ValueSpec::Range(r)) if r.count == 0 => push(Severity::Error, "kappa range has zero points".into()),
        Some(ValueSpec::Range(r)) if r.count > 1 && !(r.end > r.start) => {
            push(Severity::Error, format!("kappa range end {} must exceed start {}", r.end, r.start))
        }
        _ => {}
    }
    let kappas = cfg.kappa_values();
    if kappas.iter().any(|k| !k.is_finite() || *k < 0.0) {
        push(Severity::Error, "kappa must be finite and nonnegative".into());
    }
    if matches!(c, Bifurcation) && !matches!(cfg.kappa, Some(ValueSpec::Range(_)) | None) {
        push(Severity::Error, "bifurcation needs a kappa range start:end:count".into());
    }
    if matches!(c, PhasePortrait | Catalog | FindOrbits | Husimi) && kappas.len() > 1 {
        push(Severity::Error, format!("{c} takes a single kappa"));
    }

    if let Some(p) = cfg.p {
        if !p.is_finite() {
            push(Severity::Error, "p must be finite".into());
        } else if (p - FRAC_PI_2).abs() > 4.0 * f64::EPSILON && !(c == Husimi && cfg.start.is_some()) {
            push(Severity::Error, format!("{c} uses the classical map, which requires p = π/2 (got {p})"));
        }
    }
    if let Some(tau) = cfg.tau {
        if !(tau > 0.0 && tau.is_finite()) {
            push(Severity::Error, format!("tau must be positive, got {tau}"));
        }
    }

    let needs_j = matches!(c, Husimi | Survival | Heatmap | Criteria);
    if needs_j {
        let js = cfg.j_values();
        if js.is_empty() {
            push(Severity::Error, format!("{c} needs --j"));
        }
        for j in &js {
            if !(j.is_finite() && *j >= 0.0 && (2.0 * j).fract() == 0.0) {
                push(Severity::Error, format!("j = {j} is not a nonnegative half-integer"));
            }
        }
        if c == Heatmap && cfg.integer_j == Some(true) {
            if let Some(j) = js.iter().find(|j| j.fract() != 0.0 && (2.0 * *j).fract() == 0.0) {
                push(Severity::Warning, format!("half-integer j = {j} on an integer j grid"));
            }
        }
        if c.is_quantum() {
            if let Some(jmax) = js.iter().copied().filter(|j| j.is_finite()).reduce(f64::max) {
                let n = (2.0 * jmax + 1.0).round();
                let entries = n * n;
                push(
                    Severity::Info,
                    format!(
                        "memory estimate: ({n})² = {entries} complex entries ({:.0} MB dense complex, {:.0} MB as the real rotation factor)",
                        entries * 16.0 / 1e6,
                        entries * 8.0 / 1e6
                    ),
                );
            }
        }
    }

    if cfg.l == Some(0) {
        push(Severity::Error, "L must be at least 1".into());
    }
    if matches!(c, Bifurcation | Heatmap | Criteria) && cfg.orbit.is_none() {
        push(Severity::Error, format!("{c} needs --orbit"));
    }
    if let Some(o) = cfg.orbit {
        if o == OrbitLabel::Numeric && c != FindOrbits {
            push(Severity::Error, "NUMERIC is not a catalog orbit".into());
        }
        if let Some((t, strict)) = o.existence_threshold() {
            let below = kappas.iter().any(|&k| if strict { k <= t } else { k < t });
            if below && c != Bifurcation {
                let edge = if strict { "at or below" } else { "below" };
                push(Severity::Warning, format!("orbit does not exist {edge} {}", threshold_text(t)));
            }
        }
    }
    if let Some(t) = cfg.threshold {
        if !(t > 0.0 && t < 1.0) {
            push(Severity::Error, format!("threshold must lie in (0, 1), got {t}"));
        }
    }
    if cfg.period == Some(0) {
        push(Severity::Error, "period must be at least 1".into());
    }
    if cfg.n_theta == Some(0) || cfg.n_phi == Some(0) {
        push(Severity::Error, "grid sizes must be positive".into());
    }
    if c == PhasePortrait && (cfg.n_init == Some(0) || cfg.kicks == Some(0)) {
        push(Severity::Error, "phase portrait needs at least one trajectory and one kick".into());
    }
    if c == Husimi && cfg.average == Some(true) && cfg.kicks == Some(0) {
        push(Severity::Error, "a time average needs at least one kick".into());
    }
    out
}
