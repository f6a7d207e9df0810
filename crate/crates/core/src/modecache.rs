//! Tables of rescaled modes on a fixed (l, ω, r) grid, with a checksummed
//! binary file format and resumable parallel builds.
//!
//! File layout (little-endian throughout):
//!
//! ```text
//! magic        8 bytes  "HVMODES\0"
//! version      4 x u16  major, minor, patch, 0
//! code version 32 bytes utf-8, zero padded
//! lmax, n_r    2 x u32
//! n_omega      u64
//! grid         3 x f64  omega_min, omega_step, omega_max
//! solver       3 x f64  step_tol, series_tol, jaffe_max_cancellation
//! radii        n_r x f64
//! records      (lmax + 1) * n_omega records, l-major
//! checksum     32 bytes SHA-256 of everything above
//! ```
//!
//! A record holds I, ρ_in, ρ_up (complex mantissas), their log scale and the
//! Wronskian spread, then R̄_in and R̄_up at every radius.

use std::fs::{self, File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::radial::{solve_mode, ModeIndex, ModeKind, ScatteringCoeffs, SolverOptions};

type C = Complex64;

pub const MAGIC: [u8; 8] = *b"HVMODES\0";
pub const FORMAT_VERSION: (u16, u16, u16) = (1, 0, 0);
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
const CHUNK: usize = 256;
/// Flux and Wronskian tolerance enforced at build time and by the audit.
pub const AUDIT_TOL: f64 = 1e-8;

fn version_string(v: (u16, u16, u16)) -> String {
    format!("{}.{}.{}", v.0, v.1, v.2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lmax: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_step: f64,
    pub radii: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { lmax: 100, omega_min: 1e-3, omega_max: 10.0, omega_step: 1e-3, radii: Vec::new() }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(self.omega_min) || !ok(self.omega_step) || !(self.omega_max >= self.omega_min) {
            return Err(Error::Domain(format!(
                "invalid frequency grid [{}, {}] step {}",
                self.omega_min, self.omega_max, self.omega_step
            )));
        }
        if let Some(r) = self.radii.iter().find(|r| !(r.is_finite() && **r > 2.0)) {
            return Err(Error::Domain(format!("radius {r} is not outside the horizon")));
        }
        Ok(())
    }

    pub fn n_omega(&self) -> usize {
        ((self.omega_max - self.omega_min) / self.omega_step + 1e-9).floor() as usize + 1
    }

    pub fn omega(&self, k: usize) -> f64 {
        self.omega_min + k as f64 * self.omega_step
    }

    /// Index of a grid frequency; |ω| must match to 1e-12 ω_step.
    pub fn omega_index(&self, omega: f64) -> Result<usize> {
        let w = omega.abs();
        let x = (w - self.omega_min) / self.omega_step;
        let k = x.round();
        if !(k >= 0.0 && (k as usize) < self.n_omega()) || (w - self.omega(k as usize)).abs() > 1e-12 * self.omega_step {
            return Err(Error::OffGrid(format!("omega = {omega} is not a grid frequency")));
        }
        Ok(k as usize)
    }

    pub fn radius_index(&self, r: f64) -> Result<usize> {
        self.radii
            .iter()
            .position(|&x| (x - r).abs() <= 1e-12 * x)
            .ok_or_else(|| Error::OffGrid(format!("radius {r} is not in the table")))
    }
}

/// Coefficients and Wronskian spread for one (l, ω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRecord {
    pub coeffs: ScatteringCoeffs,
    pub wronskian_spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    pub grid: GridSpec,
    pub solver: SolverOptions,
    pub code_version: String,
    records: Vec<ModeRecord>,
    // [in, up] per (l, k, radius).
    values: Vec<[C; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    pub checked: usize,
    pub max_flux_error: f64,
    pub max_wronskian_spread: f64,
    pub max_value_deviation: f64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.max_flux_error <= AUDIT_TOL && self.max_wronskian_spread <= AUDIT_TOL && self.max_value_deviation <= AUDIT_TOL
    }
}

/// Build progress: chunks are blocks of up to 256 frequencies at one l.
#[derive(Debug, Clone, Copy)]
pub struct Progress {
    pub modes_done: usize,
    pub modes_total: usize,
}

#[derive(Default)]
pub struct BuildControl<'a> {
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    /// Partial file to resume from and append to.
    pub checkpoint: Option<PathBuf>,
    pub progress: Option<&'a (dyn Fn(Progress) + Sync)>,
}

impl ModeTable {
    pub fn n_records(&self) -> usize {
        self.records.len()
    }

    pub fn n_entries(&self) -> usize {
        self.values.len()
    }

    fn slot(&self, l: usize, k: usize) -> Result<usize> {
        if l > self.grid.lmax {
            return Err(Error::Coverage(format!("l = {l} above table lmax {}", self.grid.lmax)));
        }
        let idx = l * self.grid.n_omega() + k;
        if idx >= self.records.len() {
            return Err(Error::Coverage("table has no mode records".into()));
        }
        Ok(idx)
    }

    /// Record at grid index k (positive frequency).
    pub fn record_at(&self, l: usize, k: usize) -> Result<&ModeRecord> {
        Ok(&self.records[self.slot(l, k)?])
    }

    /// R̄ at grid indices, positive frequency.
    #[inline]
    pub fn value_at(&self, kind: ModeKind, l: usize, k: usize, ri: usize) -> C {
        let n_r = self.grid.radii.len();
        let v = &self.values[(l * self.grid.n_omega() + k) * n_r + ri];
        match kind {
            ModeKind::In => v[0],
            ModeKind::Up => v[1],
        }
    }

    /// Stored R̄ at an exact grid point; negative ω via R̄(-ω) = conj R̄(ω).
    pub fn lookup(&self, kind: ModeKind, l: usize, omega: f64, r: f64) -> Result<C> {
        let k = self.grid.omega_index(omega)?;
        let ri = self.grid.radius_index(r)?;
        self.slot(l, k)?;
        let v = self.value_at(kind, l, k, ri);
        Ok(if omega < 0.0 { v.conj() } else { v })
    }

    /// Coefficients at an exact grid frequency; negative ω conjugated.
    pub fn lookup_coeffs(&self, l: usize, omega: f64) -> Result<ScatteringCoeffs> {
        let k = self.grid.omega_index(omega)?;
        let c = self.records[self.slot(l, k)?].coeffs;
        Ok(if omega < 0.0 {
            ScatteringCoeffs {
                incidence: c.incidence.conj(),
                rho_in: c.rho_in.conj(),
                rho_up: c.rho_up.conj(),
                log_scale: c.log_scale,
            }
        } else {
            c
        })
    }

    /// Hex SHA-256 of the serialized table (the value stored in the file).
    pub fn checksum(&self) -> String {
        let bytes = self.to_bytes();
        hex(&bytes[bytes.len() - 32..])
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = header_bytes(&self.grid, &self.solver, &self.code_version);
        let n_r = self.grid.radii.len();
        for (i, rec) in self.records.iter().enumerate() {
            write_record(&mut out, rec, &self.values[i * n_r..(i + 1) * n_r]);
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { b: bytes, pos: 0 };
        let (grid, solver, code_version) = read_header(&mut cur)?;
        if bytes.len() < cur.pos + 32 {
            return Err(Error::Checksum("file truncated before checksum".into()));
        }
        let body = &bytes[..bytes.len() - 32];
        if Sha256::digest(body).as_slice() != &bytes[bytes.len() - 32..] {
            return Err(Error::Checksum("payload checksum does not match".into()));
        }
        let n_r = grid.radii.len();
        let n_rec = if n_r == 0 { 0 } else { (grid.lmax + 1) * grid.n_omega() };
        let need = cur.pos + n_rec * record_len(n_r) + 32;
        if bytes.len() != need {
            return Err(Error::Format(format!("expected {need} bytes, found {}", bytes.len())));
        }
        let mut records = Vec::with_capacity(n_rec);
        let mut values = Vec::with_capacity(n_rec * n_r);
        for _ in 0..n_rec {
            let (rec, vals) = read_record(&mut cur, n_r)?;
            records.push(rec);
            values.extend(vals);
        }
        Ok(Self { grid, solver, code_version, records, values })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_bytes())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Reads a table and runs the 1% audit before returning it.
    pub fn load(path: &Path) -> Result<Self> {
        let t = Self::load_unaudited(path)?;
        t.audit(0.01)?;
        Ok(t)
    }

    pub fn load_unaudited(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }

    /// Re-solves a stratified sample of `fraction` of the (l, ω) records and
    /// checks the Wronskian, both flux identities and the stored values.
    pub fn audit(&self, fraction: f64) -> Result<AuditReport> {
        let rep = self.audit_report(fraction)?;
        if !rep.passed() {
            return Err(Error::Audit(format!(
                "flux {:e}, Wronskian spread {:e}, value deviation {:e} over {} records",
                rep.max_flux_error, rep.max_wronskian_spread, rep.max_value_deviation, rep.checked
            )));
        }
        Ok(rep)
    }

    /// Audit measurements without the pass/fail decision.
    pub fn audit_report(&self, fraction: f64) -> Result<AuditReport> {
        let n = self.records.len();
        let mut rep = AuditReport { checked: 0, max_flux_error: 0.0, max_wronskian_spread: 0.0, max_value_deviation: 0.0 };
        if n == 0 {
            return Ok(rep);
        }
        let m = ((n as f64 * fraction).ceil() as usize).clamp(1, n);
        let n_om = self.grid.n_omega();
        let picks: Vec<usize> = (0..m).map(|j| (j * n + n / (2 * m)) / m).collect();
        let results: Vec<Result<(f64, f64, f64)>> = picks
            .par_iter()
            .map(|&i| {
                let (l, k) = (i / n_om, i % n_om);
                let mode = ModeIndex::new(l, self.grid.omega(k));
                let fresh = solve_mode(mode, &self.grid.radii, &self.solver)?;
                let rec = &self.records[i];
                let flux = rec.coeffs.flux_in_error().max(rec.coeffs.flux_up_error());
                let n_r = self.grid.radii.len();
                let mut dev: f64 = 0.0;
                for ri in 0..n_r {
                    let stored = self.values[i * n_r + ri];
                    for (a, b) in [(stored[0], fresh.rbar_in[ri]), (stored[1], fresh.rbar_up[ri])] {
                        let scale = b.norm().max(1e-300);
                        dev = dev.max((a - b).norm() / scale);
                    }
                }
                Ok((flux, fresh.wronskian_spread.max(rec.wronskian_spread), dev))
            })
            .collect();
        for r in results {
            let (flux, spread, dev) = r?;
            rep.checked += 1;
            rep.max_flux_error = rep.max_flux_error.max(flux);
            rep.max_wronskian_spread = rep.max_wronskian_spread.max(spread);
            rep.max_value_deviation = rep.max_value_deviation.max(dev);
        }
        Ok(rep)
    }
}

/// Builds a complete table in memory.
pub fn build(grid: &GridSpec, solver: &SolverOptions, workers: usize) -> Result<ModeTable> {
    build_with(grid, solver, &BuildControl { workers, ..Default::default() })
}

/// Builds a table, optionally resuming from and appending to a checkpoint file.
/// The result is bit-identical regardless of worker count or interruptions.
pub fn build_with(grid: &GridSpec, solver: &SolverOptions, ctl: &BuildControl) -> Result<ModeTable> {
    grid.validate()?;
    let n_r = grid.radii.len();
    let n_om = grid.n_omega();
    let n_rec = if n_r == 0 { 0 } else { (grid.lmax + 1) * n_om };
    let chunks_per_l = n_om.div_ceil(CHUNK);
    let n_chunks = if n_r == 0 { 0 } else { (grid.lmax + 1) * chunks_per_l };
    let header = header_bytes(grid, solver, CODE_VERSION);

    let mut done: Vec<Option<Vec<u8>>> = vec![None; n_chunks];
    let mut ckpt = match &ctl.checkpoint {
        Some(p) => Some(open_checkpoint(p, &header, &mut done, n_r)?),
        None => None,
    };

    let pool = if ctl.workers > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(ctl.workers)
                .build()
                .map_err(|e| Error::Format(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let chunk_range = |c: usize| {
        let l = c / chunks_per_l;
        let k0 = (c % chunks_per_l) * CHUNK;
        (l, k0, CHUNK.min(n_om - k0))
    };
    let mut modes_done: usize = done.iter().enumerate().filter(|(_, d)| d.is_some()).map(|(c, _)| chunk_range(c).2).sum();
    for c in 0..n_chunks {
        if done[c].is_some() {
            continue;
        }
        let (l, k0, len) = chunk_range(c);
        let solve_chunk = || -> Result<Vec<u8>> {
            let sols: Vec<Result<(ModeRecord, Vec<[C; 2]>)>> = (k0..k0 + len)
                .into_par_iter()
                .map(|k| {
                    let mode = ModeIndex::new(l, grid.omega(k));
                    let s = solve_mode(mode, &grid.radii, solver)?;
                    let rec = ModeRecord { coeffs: s.coeffs, wronskian_spread: s.wronskian_spread };
                    let flux = rec.coeffs.flux_in_error().max(rec.coeffs.flux_up_error());
                    if !(flux <= AUDIT_TOL && rec.wronskian_spread <= AUDIT_TOL) {
                        return Err(Error::Mode {
                            l,
                            omega: mode.omega,
                            source: Box::new(Error::IllConditioned(format!(
                                "flux error {flux:e}, Wronskian spread {:e}",
                                rec.wronskian_spread
                            ))),
                        });
                    }
                    Ok((rec, s.rbar_in.into_iter().zip(s.rbar_up).map(|(a, b)| [a, b]).collect()))
                })
                .collect();
            let mut buf = Vec::with_capacity(len * record_len(n_r));
            for s in sols {
                let (rec, vals) = s?;
                write_record(&mut buf, &rec, &vals);
            }
            Ok(buf)
        };
        let buf = match &pool {
            Some(p) => p.install(solve_chunk)?,
            None => solve_chunk()?,
        };
        if let Some(f) = ckpt.as_mut() {
            append_chunk(f, c, &buf)?;
        }
        done[c] = Some(buf);
        modes_done += len;
        if let Some(cb) = ctl.progress {
            cb(Progress { modes_done, modes_total: n_rec });
        }
        log::debug!("mode table: {modes_done}/{n_rec}");
    }

    let mut bytes = header;
    for d in done {
        bytes.extend_from_slice(&d.expect("all chunks solved"));
    }
    let digest = Sha256::digest(&bytes);
    bytes.extend_from_slice(&digest);
    ModeTable::from_bytes(&bytes)
}

/// Builds into `out`, checkpointing to `out.partial` and removing it when done.
pub fn build_to_file(grid: &GridSpec, solver: &SolverOptions, out: &Path, workers: usize, resume: bool, progress: Option<&(dyn Fn(Progress) + Sync)>) -> Result<ModeTable> {
    let partial = partial_path(out);
    if !resume && partial.exists() {
        fs::remove_file(&partial)?;
    }
    let ctl = BuildControl { workers, checkpoint: Some(partial.clone()), progress };
    let t = build_with(grid, solver, &ctl)?;
    t.save(out)?;
    fs::remove_file(&partial)?;
    Ok(t)
}

/// Loads `path` if it holds a table for exactly this grid and solver,
/// otherwise builds one there (resuming any checkpoint).
pub fn load_or_build(grid: &GridSpec, solver: &SolverOptions, path: &Path, workers: usize) -> Result<ModeTable> {
    if path.exists() {
        if let Ok(t) = ModeTable::load_unaudited(path) {
            if t.grid == *grid && t.solver == *solver {
                t.audit(0.01)?;
                return Ok(t);
            }
        }
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    build_to_file(grid, solver, path, workers, true, None)
}

pub fn partial_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".partial");
    PathBuf::from(s)
}

// ---------------------------------------------------------------------------
// Checkpoint chunks: u64 chunk id, u64 payload length, payload, SHA-256 of payload.

fn open_checkpoint(path: &Path, header: &[u8], done: &mut [Option<Vec<u8>>], n_r: usize) -> Result<File> {
    if !path.exists() {
        let mut f = File::create(path)?;
        f.write_all(header)?;
        f.sync_all()?;
        return Ok(f);
    }
    let mut f = OpenOptions::new().read(true).write(true).open(path)?;
    let mut bytes = Vec::new();
    f.read_to_end(&mut bytes)?;
    if bytes.len() < header.len() || bytes[..header.len()] != *header {
        return Err(Error::Format(format!(
            "checkpoint {} was written for a different grid or build",
            path.display()
        )));
    }
    let mut pos = header.len();
    let mut recovered = 0;
    while pos + 16 <= bytes.len() {
        let id = u64::from_le_bytes(bytes[pos..pos + 8].try_into().unwrap()) as usize;
        let len = u64::from_le_bytes(bytes[pos + 8..pos + 16].try_into().unwrap()) as usize;
        let end = pos + 16 + len + 32;
        if end > bytes.len() || id >= done.len() || len % record_len(n_r) != 0 {
            break;
        }
        let payload = &bytes[pos + 16..pos + 16 + len];
        if Sha256::digest(payload).as_slice() != &bytes[end - 32..end] {
            break;
        }
        done[id] = Some(payload.to_vec());
        recovered += 1;
        pos = end;
    }
    if recovered > 0 {
        log::info!("resuming mode table build: {recovered} chunks recovered from {}", path.display());
    }
    // Drop any torn trailing chunk before appending.
    f.set_len(pos as u64)?;
    f.seek(SeekFrom::Start(pos as u64))?;
    Ok(f)
}

fn append_chunk(f: &mut File, id: usize, payload: &[u8]) -> Result<()> {
    let mut buf = Vec::with_capacity(payload.len() + 48);
    buf.extend_from_slice(&(id as u64).to_le_bytes());
    buf.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    buf.extend_from_slice(payload);
    buf.extend_from_slice(&Sha256::digest(payload));
    f.write_all(&buf)?;
    f.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Serialization helpers.

fn record_len(n_r: usize) -> usize {
    8 * (8 + 4 * n_r)
}

fn put(out: &mut Vec<u8>, x: f64) {
    out.extend_from_slice(&x.to_le_bytes());
}

fn put_c(out: &mut Vec<u8>, z: C) {
    put(out, z.re);
    put(out, z.im);
}

fn header_bytes(grid: &GridSpec, solver: &SolverOptions, code_version: &str) -> Vec<u8> {
    let mut out = Vec::with_capacity(128 + 8 * grid.radii.len());
    out.extend_from_slice(&MAGIC);
    for v in [FORMAT_VERSION.0, FORMAT_VERSION.1, FORMAT_VERSION.2, 0] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let mut cv = [0u8; 32];
    let src = code_version.as_bytes();
    let n = src.len().min(32);
    cv[..n].copy_from_slice(&src[..n]);
    out.extend_from_slice(&cv);
    out.extend_from_slice(&(grid.lmax as u32).to_le_bytes());
    out.extend_from_slice(&(grid.radii.len() as u32).to_le_bytes());
    out.extend_from_slice(&(grid.n_omega() as u64).to_le_bytes());
    for x in [grid.omega_min, grid.omega_step, grid.omega_max, solver.step_tol, solver.series_tol, solver.jaffe_max_cancellation] {
        put(&mut out, x);
    }
    for &r in &grid.radii {
        put(&mut out, r);
    }
    out
}

fn write_record(out: &mut Vec<u8>, rec: &ModeRecord, vals: &[[C; 2]]) {
    put_c(out, rec.coeffs.incidence);
    put_c(out, rec.coeffs.rho_in);
    put_c(out, rec.coeffs.rho_up);
    put(out, rec.coeffs.log_scale);
    put(out, rec.wronskian_spread);
    for v in vals {
        put_c(out, v[0]);
        put_c(out, v[1]);
    }
}

struct Cursor<'a> {
    b: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.pos + n > self.b.len() {
            return Err(Error::Checksum("file truncated".into()));
        }
        let s = &self.b[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn c(&mut self) -> Result<C> {
        Ok(C::new(self.f64()?, self.f64()?))
    }
}

fn read_header(cur: &mut Cursor) -> Result<(GridSpec, SolverOptions, String)> {
    if cur.b.len() < 8 || cur.b[..8] != MAGIC {
        return Err(Error::Format("not a mode table (bad magic)".into()));
    }
    cur.take(8)?;
    let v = (cur.u16()?, cur.u16()?, cur.u16()?);
    cur.u16()?;
    if v != FORMAT_VERSION {
        return Err(Error::VersionMismatch { found: version_string(v), expected: version_string(FORMAT_VERSION) });
    }
    let cv = cur.take(32)?;
    let end = cv.iter().position(|&b| b == 0).unwrap_or(32);
    let code_version = String::from_utf8_lossy(&cv[..end]).into_owned();
    let lmax = cur.u32()? as usize;
    let n_r = cur.u32()? as usize;
    let n_om = cur.u64()? as usize;
    let (omega_min, omega_step, omega_max) = (cur.f64()?, cur.f64()?, cur.f64()?);
    let solver = SolverOptions { step_tol: cur.f64()?, series_tol: cur.f64()?, jaffe_max_cancellation: cur.f64()? };
    let mut radii = Vec::with_capacity(n_r.min(1 << 16));
    for _ in 0..n_r {
        radii.push(cur.f64()?);
    }
    let grid = GridSpec { lmax, omega_min, omega_max, omega_step, radii };
    if grid.validate().is_err() || grid.n_omega() != n_om {
        return Err(Error::Format("inconsistent grid header".into()));
    }
    Ok((grid, solver, code_version))
}

fn read_record(cur: &mut Cursor, n_r: usize) -> Result<(ModeRecord, Vec<[C; 2]>)> {
    let coeffs = ScatteringCoeffs { incidence: cur.c()?, rho_in: cur.c()?, rho_up: cur.c()?, log_scale: cur.f64()? };
    let wronskian_spread = cur.f64()?;
    let mut vals = Vec::with_capacity(n_r);
    for _ in 0..n_r {
        vals.push([cur.c()?, cur.c()?]);
    }
    Ok((ModeRecord { coeffs, wronskian_spread }, vals))
}

fn hex(b: &[u8]) -> String {
    b.iter().map(|x| format!("{x:02x}")).collect()
}
