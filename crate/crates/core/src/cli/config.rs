//! Flat `key = value` experiment configuration.
//!
//! Grammar: one `key = value` pair per line, `#` starts a comment, blank lines
//! are ignored, keys are dotted paths and may appear at most once. Lists are
//! comma separated; harmonic coefficients are written `(l,m,c), (l,m,c)`.
//! Every key is optional and falls back to the default scenario.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::{HarmonicTerm, Point, RadialFunction, ShellRegion, StarShape};
use crate::incident::ShellPulse;
use crate::synthesis::{hex_digest, SweepOptions};

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    Sphere { radius: f64 },
    Harmonics { base: f64, coeffs: Vec<HarmonicTerm> },
}

impl ShapeSpec {
    pub fn bumpy() -> Self {
        match StarShape::bumpy().radial() {
            RadialFunction::Harmonics { base, terms } => ShapeSpec::Harmonics {
                base: *base,
                coeffs: terms.clone(),
            },
            RadialFunction::Constant(_) => unreachable!("the bumpy shape is not a sphere"),
        }
    }

    pub fn build(&self, center: Point) -> Result<StarShape> {
        let radial = match self {
            ShapeSpec::Sphere { radius } => RadialFunction::Constant(*radius),
            ShapeSpec::Harmonics { base, coeffs } => RadialFunction::Harmonics {
                base: *base,
                terms: coeffs.clone(),
            },
        };
        StarShape::new(center, radial)
    }
}

/// Which obstacle the scaling checks use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChecksShape {
    Bumpy,
    Sphere,
    Scenario,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub shape: ShapeSpec,
    pub shape_center: Point,
    pub r0: f64,
    pub outer: f64,
    pub k_reg: u32,
    pub amplitude: f64,
    pub epsilons: Vec<f64>,
    pub r_ff: f64,
    pub outer_ff: f64,
    pub shell_n_r: usize,
    pub shell_n_ang: usize,
    pub omega_max: f64,
    pub n_omega: usize,
    pub panel_order: usize,
    pub t_max: f64,
    pub n_t: usize,
    pub t0: f64,
    pub n_theta: usize,
    pub n_phi: usize,
    pub capacitance_levels: Vec<usize>,
    pub oracle_epsilon: f64,
    pub oracle_radius: f64,
    pub oracle_levels: Vec<usize>,
    pub checks_shape: ChecksShape,
    pub checks_omega: f64,
    pub checks_pulse_center: Point,
    pub dilation_epsilons: Vec<f64>,
    pub output_dir: PathBuf,
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            shape: ShapeSpec::Sphere { radius: 1.0 },
            shape_center: [0.0; 3],
            r0: 2.0,
            outer: 3.0,
            k_reg: 7,
            amplitude: 1.0,
            epsilons: vec![0.02, 0.04, 0.08, 0.16],
            r_ff: 2.0,
            outer_ff: 3.0,
            shell_n_r: 6,
            shell_n_ang: 4,
            omega_max: 40.0,
            n_omega: 400,
            panel_order: 8,
            t_max: 10.0,
            n_t: 201,
            t0: 5.5,
            n_theta: 20,
            n_phi: 40,
            capacitance_levels: vec![8, 12, 16, 20, 24],
            oracle_epsilon: 0.1,
            oracle_radius: 2.5,
            oracle_levels: vec![8, 12, 16, 20],
            checks_shape: ChecksShape::Bumpy,
            checks_omega: 1.0,
            checks_pulse_center: [0.3, 0.0, 0.0],
            dilation_epsilons: vec![0.1, 0.25],
            output_dir: PathBuf::from("out"),
            workers: 1,
        }
    }
}

const KEYS: &[&str] = &[
    "shape",
    "shape.radius",
    "shape.base",
    "shape.coeffs",
    "shape.center",
    "pulse.r0",
    "pulse.R0",
    "pulse.kreg",
    "pulse.amplitude",
    "eps",
    "shell.r_ff",
    "shell.R_ff",
    "shell.n_r",
    "shell.n_ang",
    "freq.omega_max",
    "freq.n_omega",
    "freq.order",
    "time.t_max",
    "time.n_t",
    "time.t0",
    "bem.n_theta",
    "bem.n_phi",
    "capacitance.levels",
    "oracle.epsilon",
    "oracle.radius",
    "oracle.levels",
    "checks.shape",
    "checks.omega",
    "checks.pulse_center",
    "checks.dilation_eps",
    "output.dir",
    "workers",
];

fn key_error(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("key `{key}`: {msg}"))
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| key_error(key, format!("cannot parse `{}`", v.trim())))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

fn parse_point(key: &str, v: &str) -> Result<Point> {
    let xs: Vec<f64> = parse_list(key, v)?;
    if xs.len() != 3 {
        return Err(key_error(key, "expected three comma-separated numbers"));
    }
    Ok([xs[0], xs[1], xs[2]])
}

fn parse_coeffs(key: &str, v: &str) -> Result<Vec<HarmonicTerm>> {
    let mut out = Vec::new();
    let mut rest = v.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| key_error(key, format!("expected `(l,m,c)` at `{rest}`")))?;
        let close = open.find(')').ok_or_else(|| key_error(key, "unterminated `(`"))?;
        let parts: Vec<&str> = open[..close].split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(key_error(
                key,
                format!("expected `(l,m,c)`, found `({})`", &open[..close]),
            ));
        }
        out.push(HarmonicTerm::new(
            parse_num(key, parts[0])?,
            parse_num(key, parts[1])?,
            parse_num(key, parts[2])?,
        ));
        rest = open[close + 1..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

fn join<T: std::fmt::Debug>(xs: &[T]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

fn point_text(p: &Point) -> String {
    join(p)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen: Vec<String> = Vec::new();
        let mut shape_kind: Option<String> = None;
        let mut radius: Option<f64> = None;
        let mut base: Option<f64> = None;
        let mut coeffs: Option<Vec<HarmonicTerm>> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            if !KEYS.contains(&key) {
                return Err(key_error(key, format!("unknown key on line {}", lineno + 1)));
            }
            if seen.iter().any(|k| k == key) {
                return Err(key_error(key, "given more than once"));
            }
            seen.push(key.to_string());
            match key {
                "shape" => shape_kind = Some(value.to_string()),
                "shape.radius" => radius = Some(parse_num(key, value)?),
                "shape.base" => base = Some(parse_num(key, value)?),
                "shape.coeffs" => coeffs = Some(parse_coeffs(key, value)?),
                "shape.center" => cfg.shape_center = parse_point(key, value)?,
                "pulse.r0" => cfg.r0 = parse_num(key, value)?,
                "pulse.R0" => cfg.outer = parse_num(key, value)?,
                "pulse.kreg" => cfg.k_reg = parse_num(key, value)?,
                "pulse.amplitude" => cfg.amplitude = parse_num(key, value)?,
                "eps" => cfg.epsilons = parse_list(key, value)?,
                "shell.r_ff" => cfg.r_ff = parse_num(key, value)?,
                "shell.R_ff" => cfg.outer_ff = parse_num(key, value)?,
                "shell.n_r" => cfg.shell_n_r = parse_num(key, value)?,
                "shell.n_ang" => cfg.shell_n_ang = parse_num(key, value)?,
                "freq.omega_max" => cfg.omega_max = parse_num(key, value)?,
                "freq.n_omega" => cfg.n_omega = parse_num(key, value)?,
                "freq.order" => cfg.panel_order = parse_num(key, value)?,
                "time.t_max" => cfg.t_max = parse_num(key, value)?,
                "time.n_t" => cfg.n_t = parse_num(key, value)?,
                "time.t0" => cfg.t0 = parse_num(key, value)?,
                "bem.n_theta" => cfg.n_theta = parse_num(key, value)?,
                "bem.n_phi" => cfg.n_phi = parse_num(key, value)?,
                "capacitance.levels" => cfg.capacitance_levels = parse_list(key, value)?,
                "oracle.epsilon" => cfg.oracle_epsilon = parse_num(key, value)?,
                "oracle.radius" => cfg.oracle_radius = parse_num(key, value)?,
                "oracle.levels" => cfg.oracle_levels = parse_list(key, value)?,
                "checks.shape" => {
                    cfg.checks_shape = match value {
                        "bumpy" => ChecksShape::Bumpy,
                        "sphere" => ChecksShape::Sphere,
                        "scenario" => ChecksShape::Scenario,
                        other => {
                            return Err(key_error(
                                key,
                                format!("expected bumpy|sphere|scenario, found `{other}`"),
                            ))
                        }
                    }
                }
                "checks.omega" => cfg.checks_omega = parse_num(key, value)?,
                "checks.pulse_center" => cfg.checks_pulse_center = parse_point(key, value)?,
                "checks.dilation_eps" => cfg.dilation_epsilons = parse_list(key, value)?,
                "output.dir" => cfg.output_dir = PathBuf::from(value),
                "workers" => cfg.workers = parse_num(key, value)?,
                _ => unreachable!("key list and match arms agree"),
            }
        }
        cfg.shape = match shape_kind.as_deref().unwrap_or("sphere") {
            "sphere" => {
                if base.is_some() || coeffs.is_some() {
                    return Err(key_error(
                        "shape",
                        "`shape.base`/`shape.coeffs` need `shape = harmonics`",
                    ));
                }
                ShapeSpec::Sphere {
                    radius: radius.unwrap_or(1.0),
                }
            }
            "harmonics" => {
                if radius.is_some() {
                    return Err(key_error("shape.radius", "only valid with `shape = sphere`"));
                }
                ShapeSpec::Harmonics {
                    base: base.ok_or_else(|| key_error("shape.base", "required with `shape = harmonics`"))?,
                    coeffs: coeffs.unwrap_or_default(),
                }
            }
            other => {
                return Err(key_error(
                    "shape",
                    format!("expected sphere|harmonics, found `{other}`"),
                ))
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::from(e).context(format!("reading {}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 1.0 && self.outer > self.r0) {
            return Err(key_error(
                "pulse.R0",
                format!("need R0 > r0 > 1, got r0 = {}, R0 = {}", self.r0, self.outer),
            ));
        }
        if !(self.r_ff > 1.0 && self.outer_ff > self.r_ff) {
            return Err(key_error(
                "shell.R_ff",
                format!(
                    "need R_ff > r_ff > 1, got r_ff = {}, R_ff = {}",
                    self.r_ff, self.outer_ff
                ),
            ));
        }
        if self.epsilons.is_empty() {
            return Err(key_error("eps", "the list is empty"));
        }
        let limit = self.r0.min(self.r_ff) / 4.0;
        for &e in self
            .epsilons
            .iter()
            .chain(&self.dilation_epsilons)
            .chain([&self.oracle_epsilon])
        {
            if !(e > 0.0 && e < limit) {
                return Err(key_error(
                    "eps",
                    format!("scale {e} must lie in (0, min(r0, r_ff)/4 = {limit})"),
                ));
            }
        }
        let counts = [
            ("shell.n_r", self.shell_n_r),
            ("shell.n_ang", self.shell_n_ang),
            ("freq.n_omega", self.n_omega),
            ("freq.order", self.panel_order),
            ("time.n_t", self.n_t),
            ("bem.n_theta", self.n_theta),
            ("bem.n_phi", self.n_phi),
            ("workers", self.workers),
        ];
        for (key, n) in counts {
            if n == 0 {
                return Err(key_error(key, "must be positive"));
            }
        }
        if !self.n_omega.is_multiple_of(self.panel_order) {
            return Err(key_error(
                "freq.n_omega",
                format!("must be a multiple of freq.order = {}", self.panel_order),
            ));
        }
        if self.n_theta < 4
            || self.n_phi < 4
            || self
                .capacitance_levels
                .iter()
                .chain(&self.oracle_levels)
                .any(|&n| n < 4)
        {
            return Err(key_error("bem.n_theta", "angular resolutions must be at least 4"));
        }
        if self.capacitance_levels.is_empty() || self.oracle_levels.is_empty() {
            return Err(key_error("capacitance.levels", "refinement lists must not be empty"));
        }
        if !(self.omega_max > 0.0 && self.t_max > 0.0 && self.t0 >= 0.0 && self.t0 <= self.t_max) {
            return Err(key_error(
                "time.t0",
                "need omega_max > 0, t_max > 0 and 0 <= t0 <= t_max",
            ));
        }
        if !(self.oracle_radius > 1.0) {
            return Err(key_error("oracle.radius", "must exceed 1"));
        }
        if !self.amplitude.is_finite() {
            return Err(key_error("pulse.amplitude", "must be finite"));
        }
        self.scenario_shape()?;
        Ok(())
    }

    /// Canonical text; parsing it yields an equal configuration.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        let mut e = Vec::new();
        match &self.shape {
            ShapeSpec::Sphere { radius } => {
                e.push(("shape", "sphere".into()));
                e.push(("shape.radius", format!("{radius:?}")));
            }
            ShapeSpec::Harmonics { base, coeffs } => {
                e.push(("shape", "harmonics".into()));
                e.push(("shape.base", format!("{base:?}")));
                let c = coeffs
                    .iter()
                    .map(|t| format!("({},{},{:?})", t.degree, t.order, t.coeff))
                    .collect::<Vec<_>>()
                    .join(", ");
                e.push(("shape.coeffs", c));
            }
        }
        e.push(("shape.center", point_text(&self.shape_center)));
        e.push(("pulse.r0", format!("{:?}", self.r0)));
        e.push(("pulse.R0", format!("{:?}", self.outer)));
        e.push(("pulse.kreg", self.k_reg.to_string()));
        e.push(("pulse.amplitude", format!("{:?}", self.amplitude)));
        e.push(("eps", join(&self.epsilons)));
        e.push(("shell.r_ff", format!("{:?}", self.r_ff)));
        e.push(("shell.R_ff", format!("{:?}", self.outer_ff)));
        e.push(("shell.n_r", self.shell_n_r.to_string()));
        e.push(("shell.n_ang", self.shell_n_ang.to_string()));
        e.push(("freq.omega_max", format!("{:?}", self.omega_max)));
        e.push(("freq.n_omega", self.n_omega.to_string()));
        e.push(("freq.order", self.panel_order.to_string()));
        e.push(("time.t_max", format!("{:?}", self.t_max)));
        e.push(("time.n_t", self.n_t.to_string()));
        e.push(("time.t0", format!("{:?}", self.t0)));
        e.push(("bem.n_theta", self.n_theta.to_string()));
        e.push(("bem.n_phi", self.n_phi.to_string()));
        e.push(("capacitance.levels", join(&self.capacitance_levels)));
        e.push(("oracle.epsilon", format!("{:?}", self.oracle_epsilon)));
        e.push(("oracle.radius", format!("{:?}", self.oracle_radius)));
        e.push(("oracle.levels", join(&self.oracle_levels)));
        let cs = match self.checks_shape {
            ChecksShape::Bumpy => "bumpy",
            ChecksShape::Sphere => "sphere",
            ChecksShape::Scenario => "scenario",
        };
        e.push(("checks.shape", cs.into()));
        e.push(("checks.omega", format!("{:?}", self.checks_omega)));
        e.push(("checks.pulse_center", point_text(&self.checks_pulse_center)));
        e.push(("checks.dilation_eps", join(&self.dilation_epsilons)));
        e.push(("output.dir", self.output_dir.display().to_string()));
        e.push(("workers", self.workers.to_string()));
        e
    }

    /// SHA-256 of the canonical text without the output directory and worker
    /// count, which do not affect results.
    pub fn hash(&self) -> String {
        let text: String = self
            .entries()
            .into_iter()
            .filter(|(k, _)| *k != "output.dir" && *k != "workers")
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        hex_digest(text.as_bytes())
    }

    pub fn scenario_shape(&self) -> Result<StarShape> {
        self.shape.build(self.shape_center)
    }

    pub fn checks_shape(&self) -> Result<StarShape> {
        match self.checks_shape {
            ChecksShape::Bumpy => Ok(StarShape::bumpy()),
            ChecksShape::Sphere => Ok(StarShape::unit_sphere()),
            ChecksShape::Scenario => self.scenario_shape(),
        }
    }

    pub fn pulse(&self) -> Result<ShellPulse> {
        ShellPulse::new(self.r0, self.outer, self.k_reg, self.amplitude)
    }

    pub fn shell(&self) -> Result<ShellRegion> {
        ShellRegion::new(self.r_ff, self.outer_ff)
    }

    pub fn resolution(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    /// `t* = R₀ + R_ff`.
    pub fn t_star(&self) -> f64 {
        self.outer + self.outer_ff
    }

    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            omega_max: self.omega_max,
            n_omega: self.n_omega,
            order: self.panel_order,
            workers: self.workers,
            ..SweepOptions::default()
        }
    }
}
