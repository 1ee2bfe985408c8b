//! Frequency sweeps on the imaginary axis and their inversion to the time domain.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::asymptotic::{point_scatterer_time, PointScattererModel};
use crate::bem::ScatteringSolver;
use crate::error::{Error, Result};
use crate::geometry::{Point, StarShape};
use crate::incident::ShellPulse;
use crate::quadrature::gauss_legendre;

pub const DEFAULT_OMEGA_MAX: f64 = 40.0;
pub const DEFAULT_N_OMEGA: usize = 400;
pub const DEFAULT_PANEL_ORDER: usize = 8;
pub const DEFAULT_CONDITION_LIMIT: f64 = 1e6;
/// Panels with `ω·|t|` above this use oscillatory weights.
pub const FILON_SWITCH: f64 = 20.0;
/// Panels whose phase change `(b − a)|t|` exceeds this also use them.
const PANEL_PHASE_LIMIT: f64 = 2.0;
const TAIL_TOLERANCE: f64 = 1e-6;

/// Obstacle, scale, data and discretisation of one scattering run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub shape: StarShape,
    pub epsilon: f64,
    pub pulse: ShellPulse,
    pub resolution: (usize, usize),
}

impl Scenario {
    pub fn new(shape: StarShape, epsilon: f64, pulse: ShellPulse, resolution: (usize, usize)) -> Self {
        Self {
            shape,
            epsilon,
            pulse,
            resolution,
        }
    }

    /// Hex SHA-256 of the scenario description.
    pub fn hash(&self) -> String {
        let text = format!(
            "{:?}|eps={:?}|pulse={:?}|grid={}x{}",
            self.shape, self.epsilon, self.pulse, self.resolution.0, self.resolution.1
        );
        hex_digest(text.as_bytes())
    }

    pub fn solver(&self) -> Result<ScatteringSolver> {
        ScatteringSolver::new(&self.shape, self.epsilon, self.resolution.0, self.resolution.1)
    }
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Composite Gauss–Legendre rule on `[0, Ω_max]` preceded by a zero-weight
/// node at `ω = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omega_max: f64,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl FrequencyGrid {
    /// `n_omega` quadrature nodes in panels of `order`.
    pub fn new(omega_max: f64, n_omega: usize, order: usize) -> Result<Self> {
        if !(omega_max > 0.0) || !omega_max.is_finite() {
            return Err(Error::Config(format!("omega_max must be positive, got {omega_max}")));
        }
        if order == 0 || n_omega == 0 || !n_omega.is_multiple_of(order) {
            return Err(Error::Config(format!(
                "n_omega = {n_omega} must be a positive multiple of the panel order {order}"
            )));
        }
        let panels = n_omega / order;
        let rule = gauss_legendre(order);
        let h = omega_max / panels as f64;
        let mut nodes = vec![0.0];
        let mut weights = vec![0.0];
        for p in 0..panels {
            let a = h * p as f64;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(a + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Ok(Self {
            omega_max,
            order,
            nodes,
            weights,
        })
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panels(&self) -> usize {
        (self.nodes.len() - 1) / self.order
    }

    /// All nodes, starting with `ω = 0`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn panel_bounds(&self, p: usize) -> (f64, f64) {
        let h = self.omega_max / self.panels() as f64;
        (h * p as f64, h * (p + 1) as f64)
    }

    fn panel_nodes(&self, p: usize) -> &[f64] {
        &self.nodes[1 + p * self.order..1 + (p + 1) * self.order]
    }

    /// Weights `W_j(t)` with `∫₀^{Ω} e^{iωt} f(ω) dω ≈ Σ_j W_j(t) f(ω_j)`.
    pub fn fourier_weights(&self, t: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for p in 0..self.panels() {
            let (a, b) = self.panel_bounds(p);
            let base = 1 + p * self.order;
            if b * t.abs() <= FILON_SWITCH && (b - a) * t.abs() <= PANEL_PHASE_LIMIT {
                for j in base..base + self.order {
                    out[j] = self.weights[j] * Complex64::new(0.0, self.nodes[j] * t).exp();
                }
            } else {
                let w = filon_panel_weights(self.panel_nodes(p), a, b, t);
                out[base..base + self.order].copy_from_slice(&w);
            }
        }
        out
    }
}

/// `∫_a^b ℓ_j(ω) e^{iωt} dω` for the Lagrange basis on `nodes`, by an
/// oversampled Gauss–Legendre rule.
fn filon_panel_weights(nodes: &[f64], a: f64, b: f64, t: f64) -> Vec<Complex64> {
    let n = 16 + ((b - a) * t.abs()).ceil() as usize;
    let rule = gauss_legendre(n);
    let mut out = vec![Complex64::new(0.0, 0.0); nodes.len()];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let om = 0.5 * (a + b) + 0.5 * (b - a) * x;
        let e = Complex64::new(0.0, om * t).exp() * (0.5 * (b - a) * w);
        for (j, o) in out.iter_mut().enumerate() {
            let mut l = 1.0;
            for (m, &node) in nodes.iter().enumerate() {
                if m != j {
                    l *= (om - node) / (nodes[j] - node);
                }
            }
            *o += e * l;
        }
    }
    out
}

/// `û_sc(iω_j, x_k)` over a frequency grid and a set of observation points.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    grid: FrequencyGrid,
    points: Vec<Point>,
    /// Row-major in the frequency index.
    values: Vec<Complex64>,
    conditions: Vec<f64>,
    scenario_hash: String,
    resolution: (usize, usize),
}

impl FrequencyTable {
    pub fn new(
        grid: FrequencyGrid,
        points: Vec<Point>,
        values: Vec<Complex64>,
        conditions: Vec<f64>,
        scenario_hash: String,
        resolution: (usize, usize),
    ) -> Result<Self> {
        let expected = grid.len() * points.len();
        if values.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: values.len(),
            });
        }
        if conditions.len() != grid.len() {
            return Err(Error::Dimension {
                expected: grid.len(),
                found: conditions.len(),
            });
        }
        Ok(Self {
            grid,
            points,
            values,
            conditions,
            scenario_hash,
            resolution,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn omegas(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn conditions(&self) -> &[f64] {
        &self.conditions
    }

    pub fn scenario_hash(&self) -> &str {
        &self.scenario_hash
    }

    pub fn resolution(&self) -> (usize, usize) {
        self.resolution
    }

    pub fn value(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.points.len() + k]
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        let n = self.points.len();
        &self.values[j * n..(j + 1) * n]
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.grid.len()).map(|j| self.value(j, k)).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// The table of `s û(s)`, whose inverse transform is `∂_t u`.
    pub fn time_derivative(&self) -> Self {
        let mut out = self.clone();
        let n = self.points.len();
        for (j, &om) in self.grid.nodes().iter().enumerate() {
            for v in &mut out.values[j * n..(j + 1) * n] {
                *v *= Complex64::new(0.0, om);
            }
        }
        out
    }

    /// `max_k |Im û(0, x_k)|`.
    pub fn zero_frequency_imag(&self) -> f64 {
        self.row(0).iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Largest `|û|` over the last tenth of the band relative to the overall largest.
    pub fn tail_ratio(&self) -> f64 {
        let cut = 0.9 * self.grid.omega_max();
        let mut tail: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for (j, &om) in self.grid.nodes().iter().enumerate() {
            for v in self.row(j) {
                peak = peak.max(v.norm());
                if om >= cut {
                    tail = tail.max(v.norm());
                }
            }
        }
        if peak == 0.0 {
            0.0
        } else {
            tail / peak
        }
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(
            w,
            "# scenario_hash={} omega_max={:?} n_omega={} order={} resolution={}x{}",
            self.scenario_hash,
            self.grid.omega_max(),
            self.grid.len() - 1,
            self.grid.order(),
            self.resolution.0,
            self.resolution.1
        )?;
        writeln!(w, "# points={}", format_points(&self.points))?;
        writeln!(w, "omega,point_index,re,im")?;
        for (j, &om) in self.grid.nodes().iter().enumerate() {
            for (k, v) in self.row(j).iter().enumerate() {
                writeln!(w, "{om:?},{k},{:?},{:?}", v.re, v.im)?;
            }
        }
        Ok(())
    }

    /// Read a table written by [`FrequencyTable::write_csv`]; condition
    /// estimates are not persisted and read back as NaN.
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = next_line(&mut lines)?;
        let fields = header_fields(&header)?;
        let get = |key: &str| -> Result<&str> {
            fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Config(format!("frequency table header lacks `{key}`")))
        };
        let hash = get("scenario_hash")?.to_string();
        let omega_max: f64 = parse_field(get("omega_max")?, "omega_max")?;
        let n_omega: usize = parse_field(get("n_omega")?, "n_omega")?;
        let order: usize = parse_field(get("order")?, "order")?;
        let resolution = parse_resolution(get("resolution")?)?;
        let points_line = next_line(&mut lines)?;
        let points = parse_points(
            points_line
                .strip_prefix("# points=")
                .ok_or_else(|| Error::Config("frequency table lacks the point list".into()))?,
        )?;
        let columns = next_line(&mut lines)?;
        if columns.trim() != "omega,point_index,re,im" {
            return Err(Error::Config(format!("unexpected frequency table columns `{columns}`")));
        }
        let grid = FrequencyGrid::new(omega_max, n_omega, order)?;
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len() * points.len()];
        let mut seen = 0;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 4 {
                return Err(Error::Config(format!("malformed frequency table row `{line}`")));
            }
            let k: usize = parse_field(parts[1], "point_index")?;
            let j = seen / points.len().max(1);
            if k >= points.len() || j >= grid.len() {
                return Err(Error::Config(format!("frequency table row `{line}` out of range")));
            }
            values[j * points.len() + k] = Complex64::new(parse_field(parts[2], "re")?, parse_field(parts[3], "im")?);
            seen += 1;
        }
        if seen != values.len() {
            return Err(Error::Dimension {
                expected: values.len(),
                found: seen,
            });
        }
        let n = grid.len();
        Self::new(grid, points, values, vec![f64::NAN; n], hash, resolution)
    }
}

fn next_line(lines: &mut std::io::Lines<impl BufRead>) -> Result<String> {
    lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::Config("unexpected end of table".into()))
}

fn header_fields(line: &str) -> Result<Vec<(String, String)>> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Config(format!("missing header line, found `{line}`")))?;
    Ok(body
        .split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

fn parse_field<T: std::str::FromStr>(text: &str, name: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {name} from `{text}`")))
}

fn parse_resolution(text: &str) -> Result<(usize, usize)> {
    let (a, b) = text
        .split_once('x')
        .ok_or_else(|| Error::Config(format!("bad resolution `{text}`")))?;
    Ok((parse_field(a, "n_theta")?, parse_field(b, "n_phi")?))
}

fn format_points(points: &[Point]) -> String {
    points
        .iter()
        .map(|p| format!("{:?}:{:?}:{:?}", p[0], p[1], p[2]))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_points(text: &str) -> Result<Vec<Point>> {
    text.split(';')
        .filter(|s| !s.is_empty())
        .map(|p| {
            let c: Vec<&str> = p.split(':').collect();
            if c.len() != 3 {
                return Err(Error::Config(format!("bad point `{p}`")));
            }
            Ok([
                parse_field(c[0], "x")?,
                parse_field(c[1], "y")?,
                parse_field(c[2], "z")?,
            ])
        })
        .collect()
}

/// Sweep parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub omega_max: f64,
    pub n_omega: usize,
    pub order: usize,
    pub workers: usize,
    pub condition_limit: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            omega_max: DEFAULT_OMEGA_MAX,
            n_omega: DEFAULT_N_OMEGA,
            order: DEFAULT_PANEL_ORDER,
            workers: 1,
            condition_limit: DEFAULT_CONDITION_LIMIT,
        }
    }
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))
}

/// One scattered-field solve per frequency node, in node order.
pub fn frequency_sweep(scenario: &Scenario, points: &[Point], options: &SweepOptions) -> Result<FrequencyTable> {
    let grid = FrequencyGrid::new(options.omega_max, options.n_omega, options.order)?;
    let solver = scenario.solver()?;
    let pool = thread_pool(options.workers)?;
    let nodes = grid.nodes().to_vec();
    let rows: Vec<(Vec<Complex64>, f64)> = pool.install(|| {
        (0..nodes.len())
            .into_par_iter()
            .map(|j| solve_node(&solver, &scenario.pulse, points, &nodes, j, options.condition_limit))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut values = Vec::with_capacity(nodes.len() * points.len());
    let mut conditions = Vec::with_capacity(nodes.len());
    for (row, cond) in rows {
        values.extend(row);
        conditions.push(cond);
    }
    let table = FrequencyTable::new(
        grid,
        points.to_vec(),
        values,
        conditions,
        scenario.hash(),
        scenario.resolution,
    )?;
    log::debug!(
        "sweep eps={} : max condition {:.3e}, tail ratio {:.3e}",
        scenario.epsilon,
        table.conditions().iter().cloned().fold(0.0, f64::max),
        table.tail_ratio()
    );
    Ok(table)
}

/// Solve at node `j`; on an ill-conditioned system, fall back to solves up to
/// half a step to either side.
fn solve_node(
    solver: &ScatteringSolver,
    pulse: &ShellPulse,
    points: &[Point],
    nodes: &[f64],
    j: usize,
    limit: f64,
) -> Result<(Vec<Complex64>, f64)> {
    let om = nodes[j];
    let attempt = |w: f64| solver.scattered_frequency(pulse, Complex64::new(0.0, w), points);
    match attempt(om) {
        Ok((v, cond)) if cond <= limit => return Ok((v, cond)),
        Ok((_, cond)) => log::warn!("condition estimate {cond:.3e} at omega = {om}; nudging"),
        Err(Error::NearResonance { condition, .. }) => {
            log::warn!("near-resonant solve at omega = {om} (condition {condition:.3e}); nudging")
        }
        Err(e) => return Err(e.context(format!("frequency omega = {om}"))),
    }
    let gap = nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &w)| (w - om).abs())
        .fold(f64::INFINITY, f64::min);
    let delta = 0.5 * if gap.is_finite() { gap } else { om.abs().max(1e-3) };
    nudge(solver, pulse, points, om, delta, limit)
}

/// Richardson combination of the symmetric averages at `±δ/2` and `±δ`.
fn nudge(
    solver: &ScatteringSolver,
    pulse: &ShellPulse,
    points: &[Point],
    om: f64,
    delta: f64,
    limit: f64,
) -> Result<(Vec<Complex64>, f64)> {
    let mut worst: f64 = 0.0;
    let mut averages = Vec::with_capacity(2);
    for d in [0.5 * delta, delta] {
        let mut sum = vec![Complex64::new(0.0, 0.0); points.len()];
        for w in [om - d, om + d] {
            let (v, cond) = solver
                .scattered_frequency(pulse, Complex64::new(0.0, w), points)
                .map_err(|e| e.context(format!("frequency omega = {om} (nudged to {w})")))?;
            if cond > limit {
                return Err(Error::Config(format!(
                    "frequency omega = {om}: condition estimate {cond:.3e} above {limit:.1e} after nudging"
                )));
            }
            worst = worst.max(cond);
            sum.iter_mut().zip(&v).for_each(|(a, b)| *a += 0.5 * b);
        }
        averages.push(sum);
    }
    let combined = averages[0]
        .iter()
        .zip(&averages[1])
        .map(|(near, far)| (4.0 * near - far) / 3.0)
        .collect();
    Ok((combined, worst))
}

/// Real samples `u(t_i, x_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    points: Vec<Point>,
    /// Row-major in the time index.
    values: Vec<f64>,
    imag_residue: f64,
    scenario_hash: String,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, points: Vec<Point>, values: Vec<f64>, scenario_hash: String) -> Result<Self> {
        let expected = times.len() * points.len();
        if values.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: values.len(),
            });
        }
        Ok(Self {
            times,
            points,
            values,
            imag_residue: 0.0,
            scenario_hash,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn value(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.points.len() + k]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.points.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.times.len()).map(|i| self.value(i, k)).collect()
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest imaginary part left by the two-sided synthesis.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    pub fn scenario_hash(&self) -> &str {
        &self.scenario_hash
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# scenario_hash={}", self.scenario_hash)?;
        writeln!(w, "t,point_index,value")?;
        for (i, &t) in self.times.iter().enumerate() {
            for (k, v) in self.row(i).iter().enumerate() {
                writeln!(w, "{t:?},{k},{v:?}")?;
            }
        }
        Ok(())
    }
}

/// `u(t, x_k) = (1/2π) ∫_{−Ω}^{Ω} e^{iωt} û(iω, x_k) dω`, with the negative
/// half supplied by `û(−iω) = conj û(iω)`.
pub fn inverse_transform(table: &FrequencyTable, times: &[f64]) -> TimeSeries {
    let tail = table.tail_ratio();
    if tail > TAIL_TOLERANCE {
        log::warn!("spectrum at the band edge is {tail:.2e} of its peak; synthesis may be band-limited");
    }
    let weights: Vec<Vec<Complex64>> = times.par_iter().map(|&t| table.grid().fourier_weights(t)).collect();
    let n_pts = table.points().len();
    let columns: Vec<Vec<(f64, f64)>> = (0..n_pts)
        .into_par_iter()
        .map(|k| {
            let col = table.column(k);
            weights
                .iter()
                .map(|w| {
                    let half: Complex64 = w.iter().zip(&col).map(|(a, b)| a * b).sum();
                    let full = (half + half.conj()) / (2.0 * PI);
                    (full.re, full.im.abs())
                })
                .collect()
        })
        .collect();
    let mut values = vec![0.0; times.len() * n_pts];
    let mut residue: f64 = 0.0;
    for (k, col) in columns.iter().enumerate() {
        for (i, &(re, im)) in col.iter().enumerate() {
            values[i * n_pts + k] = re;
            residue = residue.max(im);
        }
    }
    let mut series = TimeSeries::new(
        times.to_vec(),
        table.points().to_vec(),
        values,
        table.scenario_hash().into(),
    )
    .expect("dimensions follow from the table");
    assert!(
        residue <= 1e-8 * series.peak().max(f64::MIN_POSITIVE),
        "synthesised signal has imaginary residue {residue:e}"
    );
    series.imag_residue = residue;
    series
}

/// `e(t, x) = u_app(t, x) − u_sc(t, x)`, with the model evaluated exactly in time.
pub fn synthesize_error(table: &FrequencyTable, model: &PointScattererModel, times: &[f64]) -> Result<TimeSeries> {
    let usc = inverse_transform(table, times);
    let n = table.points().len();
    let mut values = Vec::with_capacity(times.len() * n);
    for (i, &t) in times.iter().enumerate() {
        for (k, x) in table.points().iter().enumerate() {
            values.push(point_scatterer_time(model, t, x)? - usc.value(i, k));
        }
    }
    TimeSeries::new(
        times.to_vec(),
        table.points().to_vec(),
        values,
        table.scenario_hash().into(),
    )
}

/// `n` equispaced times on `[0, t_max]`.
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect(),
    }
}
