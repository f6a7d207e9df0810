//! Parameter sweeps over detector configurations and their CSV/JSON output.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{null_propagation_time, GeodesicBranch, SpacetimeParams};
use crate::modecache::{self, GridSpec, ModeTable, CODE_VERSION};
use crate::radial::SolverOptions;
use crate::response::{evaluate, proper_width, ConvergenceControls, DetectorSpec, Diagnostics, PairResponse};
use crate::states::FieldState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Gamma,
    Delay,
    Radius,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Gamma => "gamma",
            SweepVariable::Delay => "delay",
            SweepVariable::Radius => "radius",
        }
    }
}

/// Frequency grid used when a sweep has to build its own mode table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_step: f64,
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        Self { omega_min: 1e-3, omega_max: 10.0, omega_step: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Inclusive [start, end] of the swept variable.
    pub range: [f64; 2],
    pub points: usize,
    /// Detector A; the delay sweep moves B's center relative to A's.
    pub a: DetectorSpec,
    pub b: DetectorSpec,
    /// Angular separation, ignored by the gamma sweep.
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Radius sweep only: proper-time width, giving T(r) = width / sqrt(f(r)).
    #[serde(default)]
    pub proper_width: Option<f64>,
    #[serde(default = "default_states")]
    pub states: Vec<FieldState>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Also write a JSON mirror next to the CSV.
    #[serde(default)]
    pub json: bool,
    #[serde(default)]
    pub controls: ConvergenceControls,
    /// Mode table to load; built and saved here when the file does not exist.
    #[serde(default)]
    pub table: Option<PathBuf>,
    #[serde(default)]
    pub grid: FrequencyGrid,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub workers: usize,
}

fn default_gamma() -> f64 {
    PI
}

fn default_states() -> Vec<FieldState> {
    vec![FieldState::Boulware]
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::Domain("sweep needs at least one point".into()));
        }
        if self.states.is_empty() {
            return Err(Error::Domain("sweep needs at least one field state".into()));
        }
        let [lo, hi] = self.range;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Domain("sweep range must be finite".into()));
        }
        match self.variable {
            SweepVariable::Gamma => {
                if !(lo > 0.0 && hi > 0.0 && lo <= PI && hi <= PI) {
                    return Err(Error::Domain(format!("gamma range {lo}..{hi} outside (0, pi]")));
                }
            }
            SweepVariable::Radius => {
                if !(lo > 2.0 && hi > 2.0) {
                    return Err(Error::Domain(format!("radius range {lo}..{hi} must lie outside r = 2M")));
                }
                if let Some(w) = self.proper_width {
                    if !(w > 0.0) {
                        return Err(Error::Domain("proper width must be positive".into()));
                    }
                }
            }
            SweepVariable::Delay => {}
        }
        if self.variable != SweepVariable::Gamma && !(0.0..=PI).contains(&self.gamma) {
            return Err(Error::Domain(format!("gamma = {} outside [0, pi]", self.gamma)));
        }
        Ok(())
    }

    /// Values of the swept variable in output order.
    pub fn values(&self) -> Vec<f64> {
        let [lo, hi] = self.range;
        if self.points == 1 {
            return vec![lo];
        }
        let n = self.points - 1;
        (0..=n).map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 }).collect()
    }

    /// Radii the mode table must contain.
    pub fn required_radii(&self) -> Vec<f64> {
        let mut r = match self.variable {
            SweepVariable::Radius => self.values(),
            _ => vec![self.a.r, self.b.r],
        };
        r.sort_by(f64::total_cmp);
        r.dedup();
        r
    }

    pub fn table_grid(&self) -> GridSpec {
        GridSpec {
            lmax: self.controls.l_cut,
            omega_min: self.grid.omega_min,
            omega_max: self.grid.omega_max,
            omega_step: self.grid.omega_step,
            radii: self.required_radii(),
        }
    }

    /// Detector pair at one value of the swept variable.
    pub fn pair_at(&self, x: f64, state: FieldState) -> Result<crate::response::DetectorPairSpec> {
        let (mut a, mut b, mut gamma) = (self.a, self.b, self.gamma);
        match self.variable {
            SweepVariable::Gamma => gamma = x,
            SweepVariable::Delay => b.center = a.center + x,
            SweepVariable::Radius => {
                a.r = x;
                b.r = x;
                if let Some(w) = self.proper_width {
                    a.width = proper_width(x, w)?;
                    b.width = proper_width(x, w)?;
                }
            }
        }
        Ok(crate::response::DetectorPairSpec { a, b, gamma, state })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub variable: String,
    pub x: f64,
    pub state: String,
    pub gamma: f64,
    pub delay: f64,
    pub r_a: f64,
    pub r_b: f64,
    pub width_a: f64,
    pub width_b: f64,
    pub m_abs: f64,
    pub m_re: f64,
    pub m_im: f64,
    pub m_plus_abs: f64,
    pub m_minus_abs: f64,
    pub l_aa: f64,
    pub l_bb: f64,
    pub l_ab_abs: f64,
    pub negativity: f64,
    pub entangled: bool,
    pub last_l_relative: f64,
    pub last_omega_relative: f64,
    pub sliver_relative: f64,
    pub tail_warning: bool,
}

impl SweepRow {
    fn new(variable: SweepVariable, x: f64, pair: &crate::response::DetectorPairSpec, res: &PairResponse) -> Self {
        let d: Diagnostics = res.diagnostics;
        Self {
            variable: variable.name().into(),
            x,
            state: pair.state.short_name().into(),
            gamma: pair.gamma,
            delay: pair.b.center - pair.a.center,
            r_a: pair.a.r,
            r_b: pair.b.r,
            width_a: pair.a.width,
            width_b: pair.b.width,
            m_abs: res.m.norm(),
            m_re: res.m.re,
            m_im: res.m.im,
            m_plus_abs: res.m_plus.norm(),
            m_minus_abs: res.m_minus.norm(),
            l_aa: res.l_aa,
            l_bb: res.l_bb,
            l_ab_abs: res.l_ab.norm(),
            negativity: res.negativity,
            entangled: res.negativity > 0.0,
            last_l_relative: d.last_l_relative,
            last_omega_relative: d.last_omega_relative,
            sliver_relative: d.sliver_relative,
            tail_warning: d.tail_warning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Rows of one state in sweep order.
    pub fn state_rows(&self, state: FieldState) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.state == state.short_name()).collect()
    }
}

/// Evaluates every (point, state) of the sweep. Rows come out point-major in
/// the order of `SweepSpec::values` and `SweepSpec::states`.
pub fn run_sweep(spec: &SweepSpec, table: &ModeTable) -> Result<SweepResult> {
    spec.validate()?;
    let jobs: Vec<(f64, FieldState)> = spec.values().into_iter().flat_map(|x| spec.states.iter().map(move |&s| (x, s))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(x, state)| {
            let pair = spec.pair_at(x, state)?;
            let res = evaluate(&pair, table, &spec.controls)?;
            Ok(SweepRow::new(spec.variable, x, &pair, &res))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { variable: spec.variable, rows })
}

fn expect_variable(spec: &SweepSpec, v: SweepVariable) -> Result<()> {
    if spec.variable != v {
        return Err(Error::Domain(format!("expected a {} sweep, got {}", v.name(), spec.variable.name())));
    }
    Ok(())
}

pub fn run_gamma_sweep(spec: &SweepSpec, table: &ModeTable) -> Result<SweepResult> {
    expect_variable(spec, SweepVariable::Gamma)?;
    run_sweep(spec, table)
}

pub fn run_radius_sweep(spec: &SweepSpec, table: &ModeTable) -> Result<SweepResult> {
    expect_variable(spec, SweepVariable::Radius)?;
    run_sweep(spec, table)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub index: usize,
    /// Position refined by a parabola through the three neighbouring samples.
    pub x: f64,
    pub value: f64,
}

/// Interior local maxima of `ys` sampled at `xs`, strongest first.
pub fn find_peaks(xs: &[f64], ys: &[f64]) -> Vec<Peak> {
    let mut peaks = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        if ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] {
            let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
            let denom = y0 - 2.0 * y1 + y2;
            let shift = if denom < 0.0 { 0.5 * (y0 - y2) / denom } else { 0.0 };
            let h = 0.5 * (xs[i + 1] - xs[i - 1]);
            peaks.push(Peak { index: i, x: xs[i] + shift * h, value: y1 });
        }
    }
    peaks.sort_by(|a, b| b.value.total_cmp(&a.value));
    peaks
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaySweepResult {
    pub sweep: SweepResult,
    /// Maxima of |M| per state (short name), strongest first.
    pub peaks: Vec<(String, Vec<Peak>)>,
}

pub fn run_delay_sweep(spec: &SweepSpec, table: &ModeTable) -> Result<DelaySweepResult> {
    expect_variable(spec, SweepVariable::Delay)?;
    let sweep = run_sweep(spec, table)?;
    let peaks = spec
        .states
        .iter()
        .map(|&s| {
            let rows = sweep.state_rows(s);
            let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r.m_abs).collect();
            (s.short_name().to_string(), find_peaks(&xs, &ys))
        })
        .collect();
    Ok(DelaySweepResult { sweep, peaks })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicRow {
    pub branch: GeodesicBranch,
    pub r_a: f64,
    pub r_b: f64,
    pub gamma: f64,
    pub dt: f64,
}

/// Null propagation times between detectors at equal radii for every branch.
pub fn run_geodesic_curve(params: &SpacetimeParams, radii: &[f64], gamma: f64, branches: &[GeodesicBranch]) -> Result<Vec<GeodesicRow>> {
    let jobs: Vec<(GeodesicBranch, f64)> = branches.iter().flat_map(|&b| radii.iter().map(move |&r| (b, r))).collect();
    jobs.par_iter()
        .map(|&(branch, r)| {
            let dt = null_propagation_time(params, r, r, gamma, branch)?;
            Ok(GeodesicRow { branch, r_a: r, r_b: r, gamma, dt })
        })
        .collect()
}

/// Evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

// ---------------------------------------------------------------------------
// Tables and output.

/// Loads the sweep's table or builds (and saves) one covering its radii.
pub fn obtain_table(spec: &SweepSpec) -> Result<ModeTable> {
    let grid = spec.table_grid();
    if let Some(path) = &spec.table {
        if path.exists() {
            let table = ModeTable::load(path)?;
            for r in &grid.radii {
                table.grid.radius_index(*r).map_err(|e| Error::Coverage(e.to_string()))?;
            }
            return Ok(table);
        }
        return modecache::load_or_build(&grid, &spec.solver, path, spec.workers);
    }
    modecache::build(&grid, &spec.solver, spec.workers)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub code_version: String,
    pub table_checksum: String,
    pub controls: ConvergenceControls,
}

impl RunHeader {
    pub fn new(table: &ModeTable, controls: &ConvergenceControls) -> Self {
        Self { code_version: CODE_VERSION.into(), table_checksum: table.checksum(), controls: *controls }
    }
}

fn header_block(header: &RunHeader, extra: &[(&str, String)]) -> Result<String> {
    let mut s = String::new();
    s += &format!("# code_version: {}\n", header.code_version);
    s += &format!("# table_checksum: {}\n", header.table_checksum);
    s += &format!("# controls: {}\n", serde_json::to_string(&header.controls)?);
    for (k, v) in extra {
        s += &format!("# {k}: {v}\n");
    }
    Ok(s)
}

/// CSV text with a `#` comment header followed by one line per row.
pub fn csv_string<T: Serialize>(comments: &str, rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    let mut out = comments.to_string();
    out += std::str::from_utf8(&body).map_err(|e| Error::Format(e.to_string()))?;
    Ok(out)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Path of the effective-configuration echo written beside `out`.
pub fn config_echo_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

/// Writes the sweep CSV, the effective-config echo and, if requested, the JSON mirror.
pub fn write_sweep(out: &Path, spec: &SweepSpec, header: &RunHeader, result: &SweepResult, peaks: Option<&[(String, Vec<Peak>)]>) -> Result<()> {
    let mut extra = vec![("variable", result.variable.name().to_string())];
    if let Some(p) = peaks {
        extra.push(("peaks", serde_json::to_string(p)?));
    }
    let text = csv_string(&header_block(header, &extra)?, &result.rows)?;
    write_atomic(out, text.as_bytes())?;
    write_atomic(&config_echo_path(out), serde_json::to_string_pretty(spec)?.as_bytes())?;
    if spec.json {
        let mirror = serde_json::json!({ "header": header, "peaks": peaks, "rows": result.rows });
        write_atomic(&out.with_extension("json"), serde_json::to_string_pretty(&mirror)?.as_bytes())?;
    }
    Ok(())
}

/// Geodesic curve as CSV with columns branch, r_A/M, r_B/M, gamma, dt/M.
pub fn geodesic_csv(rows: &[GeodesicRow]) -> String {
    let mut s = format!("# code_version: {CODE_VERSION}\nbranch,r_A/M,r_B/M,gamma,dt/M\n");
    for r in rows {
        s += &format!("{},{},{},{},{}\n", r.branch.name(), r.r_a, r.r_b, r.gamma, r.dt);
    }
    s
}

pub fn write_geodesic(out: &Path, rows: &[GeodesicRow]) -> Result<()> {
    write_atomic(out, geodesic_csv(rows).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peaks_are_refined_and_sorted() {
        let xs = linspace(0.0, 10.0, 101);
        let ys: Vec<f64> = xs.iter().map(|x| (-(x - 3.03f64).powi(2)).exp() + 0.5 * (-(x - 7.0f64).powi(2)).exp()).collect();
        let p = find_peaks(&xs, &ys);
        assert_eq!(p.len(), 2);
        assert!((p[0].x - 3.03).abs() < 5e-3);
        assert!((p[1].x - 7.0).abs() < 5e-3);
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(0.1, 0.7, 7);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 0.7);
    }
}
