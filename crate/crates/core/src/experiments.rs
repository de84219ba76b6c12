//! Experiment driver behind the `zs-nft` binary: continuous-spectrum error
//! sweeps, invariant conservation, discrete-spectrum errors, raw spectra
//! and fast/conventional runtime comparisons.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fastlayer::{fast_scatter, MobiusMap, Targets};
use crate::metrics::{relative_error, relative_error_re, rmse, rmse_re};
use crate::propagator::{
    bidirectional_b, linspace, phase_coefficient, scatter, scatter_grid, PotentialGrid, Prepared,
    ScatteringData, DEFAULT_RESIDUAL_THRESHOLD,
};
use crate::schemes::SchemeKind;
use crate::signals::{generate, SignalSpec};

/// First line of every CSV written by the driver.
pub const CSV_VERSION: &str = "# zs-nft v1";

/// Grid size of the fine discrete-spectrum oracle.
pub const DEFAULT_ORACLE_M: usize = 1 << 18;

/// A scheme together with the evaluation path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeChoice {
    pub kind: SchemeKind,
    pub fast: bool,
}

impl SchemeChoice {
    pub fn conventional(kind: SchemeKind) -> Self {
        Self { kind, fast: false }
    }

    pub fn fast(kind: SchemeKind) -> Self {
        Self { kind, fast: true }
    }
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.fast {
            write!(f, "F{}", self.kind)
        } else {
            write!(f, "{}", self.kind)
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(kind) = s.parse::<SchemeKind>() {
            return Ok(Self::conventional(kind));
        }
        match s.strip_prefix('F').or_else(|| s.strip_prefix('f')) {
            Some(rest) => Ok(Self::fast(rest.parse()?)),
            None => Err(Error::InvalidParameter(format!("unknown scheme '{s}'"))),
        }
    }
}

impl Serialize for SchemeChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SchemeChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReferenceSpec {
    /// Grid size of the self-converged reference.
    pub m_ref: usize,
    pub scheme: SchemeChoice,
    /// Precomputed spectrum (`xi,re_a,im_a,re_b,im_b`) used instead.
    pub file: Option<PathBuf>,
}

impl Default for ReferenceSpec {
    fn default() -> Self {
        Self { m_ref: 1 << 16, scheme: SchemeChoice::conventional(SchemeKind::Es6), file: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub signal: SignalSpec,
    pub schemes: Vec<SchemeChoice>,
    pub m_list: Vec<usize>,
    pub xi_min: f64,
    pub xi_max: f64,
    /// Spectral points; defaults to the largest `M` of the sweep.
    pub n_xi: Option<usize>,
    /// Möbius parameter for every fast scheme; per-scheme defaults otherwise.
    pub h: Option<f64>,
    pub reference: ReferenceSpec,
    pub eigenvalues: Vec<[f64; 2]>,
    pub oracle_m: usize,
    pub residual_threshold: f64,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            signal: SignalSpec::default(),
            schemes: SchemeKind::ALL.iter().map(|&k| SchemeChoice::conventional(k)).collect(),
            m_list: vec![1 << 10, 1 << 11, 1 << 12, 1 << 13],
            xi_min: -20.0,
            xi_max: 20.0,
            n_xi: None,
            h: None,
            reference: ReferenceSpec::default(),
            eigenvalues: Vec::new(),
            oracle_m: DEFAULT_ORACLE_M,
            residual_threshold: DEFAULT_RESIDUAL_THRESHOLD,
            output: None,
            threads: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_list.is_empty() {
            return Err(Error::InvalidParameter("M list is empty".into()));
        }
        if self.m_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("M list must be strictly ascending".into()));
        }
        if self.reference.file.is_none() && self.reference.m_ref <= *self.m_list.last().unwrap() {
            return Err(Error::InvalidParameter(format!(
                "reference M = {} must exceed the largest M in the sweep",
                self.reference.m_ref
            )));
        }
        if !(self.xi_min < self.xi_max) {
            return Err(Error::InvalidParameter("xi-min must be below xi-max".into()));
        }
        if self.n_points() < 2 {
            return Err(Error::InvalidParameter("need at least two spectral points".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidParameter("no schemes selected".into()));
        }
        Ok(())
    }

    pub fn n_points(&self) -> usize {
        self.n_xi.unwrap_or_else(|| self.m_list.last().copied().unwrap_or(0))
    }

    pub fn xi(&self) -> Vec<f64> {
        linspace(self.xi_min, self.xi_max, self.n_points())
    }

    pub fn signal_at(&self, m: usize) -> SignalSpec {
        SignalSpec { m, ..self.signal.clone() }
    }

    pub fn mobius(&self, kind: SchemeKind) -> Result<MobiusMap> {
        match self.h {
            Some(h) => MobiusMap::new(h),
            None => MobiusMap::default_for(kind).ok_or(Error::UnsupportedFastScheme(kind.name())),
        }
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }
}

/// Continuous spectrum of one scheme on a given grid.
pub fn spectrum(
    grid: &PotentialGrid,
    choice: SchemeChoice,
    xi: &[f64],
    cfg: &ExperimentConfig,
) -> Result<ScatteringData> {
    if choice.fast {
        fast_scatter(grid, choice.kind, &cfg.mobius(choice.kind)?, &Targets::Points(xi.to_vec()))
    } else {
        scatter_grid(&Prepared::new(grid, choice.kind)?, xi)
    }
}

/// Reference spectrum: a file, or the self-converged scheme at `M_ref`.
pub fn reference(cfg: &ExperimentConfig) -> Result<ScatteringData> {
    let xi = cfg.xi();
    if let Some(path) = &cfg.reference.file {
        return load_reference(path, &xi, cfg.signal.sigma);
    }
    let grid = generate(&cfg.signal_at(cfg.reference.m_ref))
        .map_err(|e| Error::Reference(format!("signal generation: {e}")))?;
    let data = spectrum(&grid, cfg.reference.scheme, &xi, cfg)
        .map_err(|e| Error::Reference(e.to_string()))?;
    if data.a.iter().chain(&data.b).any(|v| !v.is_finite()) {
        return Err(Error::Reference("non-finite reference values".into()));
    }
    Ok(data)
}

fn load_reference(path: &Path, xi: &[f64], sigma: f64) -> Result<ScatteringData> {
    let perr = |message: String| Error::Reference(format!("{}: {message}", path.display()));
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| perr(format!("missing column {name}")))
    };
    let idx = [col("xi")?, col("re_a")?, col("im_a")?, col("re_b")?, col("im_b")?];
    let status = headers.iter().position(|h| h == "status");
    let (mut xs, mut a, mut b) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        if status.and_then(|i| rec.get(i)).is_some_and(|st| st != "ok") {
            return Err(perr(format!("reference row at xi = {} is not usable", &rec[idx[0]])));
        }
        let v: Vec<f64> = idx
            .iter()
            .map(|&i| rec.get(i).unwrap_or("").parse::<f64>().map_err(|e| perr(e.to_string())))
            .collect::<Result<_>>()?;
        xs.push(v[0]);
        a.push(Complex64::new(v[1], v[2]));
        b.push(Complex64::new(v[3], v[4]));
    }
    if xs.len() != xi.len() || xs.iter().zip(xi).any(|(p, q)| (p - q).abs() > 1e-9 * q.abs().max(1.0)) {
        return Err(perr("spectral grid does not match the configured window".into()));
    }
    Ok(ScatteringData::from_ab(xs, a, b, sigma))
}

fn seconds(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// One `(scheme, M)` result of the continuous-spectrum sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuousRow {
    pub scheme: SchemeChoice,
    pub m: usize,
    pub rmse_a: Option<f64>,
    pub rmse_b: Option<f64>,
    pub rmse_r: Option<f64>,
    pub rmse_h: Option<f64>,
    pub err_ec: Option<f64>,
    pub wall_time_s: Option<f64>,
    pub status: String,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Timed spectrum plus the raw data, or the error text for a status column.
fn timed_run(
    cfg: &ExperimentConfig,
    choice: SchemeChoice,
    m: usize,
    xi: &[f64],
) -> std::result::Result<(ScatteringData, f64), String> {
    let grid = generate(&cfg.signal_at(m)).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let data = spectrum(&grid, choice, xi, cfg).map_err(|e| e.to_string())?;
    Ok((data, seconds(start)))
}

/// RMSE of `a`, `b`, `r`, `H` and the `E_c` error per scheme and `M`.
pub fn run_continuous(cfg: &ExperimentConfig) -> Result<Vec<ContinuousRow>> {
    cfg.validate()?;
    let reference = reference(cfg)?;
    let xi = reference.xi.clone();
    let ones = vec![1.0; xi.len()];
    let mut rows = Vec::new();
    for &scheme in &cfg.schemes {
        for &m in &cfg.m_list {
            let row = match timed_run(cfg, scheme, m, &xi) {
                Ok((d, t)) => {
                    let vals = [
                        rmse(&d.a, &reference.a),
                        rmse(&d.b, &reference.b),
                        rmse(&d.r, &reference.r),
                        rmse_re(&d.h, &ones),
                        relative_error_re(d.e_c, reference.e_c),
                    ];
                    let status = if vals.iter().all(|v| v.is_finite()) { "ok" } else { "nonfinite" };
                    ContinuousRow {
                        scheme,
                        m,
                        rmse_a: finite(vals[0]),
                        rmse_b: finite(vals[1]),
                        rmse_r: finite(vals[2]),
                        rmse_h: finite(vals[3]),
                        err_ec: finite(vals[4]),
                        wall_time_s: Some(t),
                        status: status.into(),
                    }
                }
                Err(e) => ContinuousRow {
                    scheme,
                    m,
                    rmse_a: None,
                    rmse_b: None,
                    rmse_r: None,
                    rmse_h: None,
                    err_ec: None,
                    wall_time_s: None,
                    status: format!("error: {e}"),
                },
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantRow {
    pub scheme: SchemeChoice,
    pub m: usize,
    pub rmse_h: Option<f64>,
    pub max_err_h: Option<f64>,
    /// `ξ` where the invariant error peaks.
    pub xi_max_err: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub scheme: SchemeChoice,
    pub m: usize,
    pub xi: f64,
    pub err_h: f64,
}

/// Quadratic-invariant errors; needs no reference since `H ≡ 1`.
pub fn run_invariant(cfg: &ExperimentConfig) -> Result<(Vec<InvariantRow>, Vec<ProfileRow>)> {
    let mut check = cfg.clone();
    check.reference.file = Some(PathBuf::new());
    check.validate()?;
    let xi = cfg.xi();
    let mut rows = Vec::new();
    let mut profile = Vec::new();
    for &scheme in &cfg.schemes {
        for &m in &cfg.m_list {
            match timed_run(cfg, scheme, m, &xi) {
                Ok((d, _)) => {
                    let errs: Vec<f64> = d.h.iter().map(|&h| relative_error_re(h, 1.0)).collect();
                    let peak = crate::metrics::argmax(&errs);
                    let ok = errs.iter().all(|e| e.is_finite());
                    rows.push(InvariantRow {
                        scheme,
                        m,
                        rmse_h: finite(rmse_re(&d.h, &vec![1.0; d.h.len()])),
                        max_err_h: peak.map(|i| errs[i]).and_then(finite),
                        xi_max_err: peak.map(|i| d.xi[i]),
                        status: if ok { "ok" } else { "nonfinite" }.into(),
                    });
                    profile.extend(d.xi.iter().zip(&errs).filter(|(_, e)| e.is_finite()).map(
                        |(&xi, &err_h)| ProfileRow { scheme, m, xi, err_h },
                    ));
                }
                Err(e) => rows.push(InvariantRow {
                    scheme,
                    m,
                    rmse_h: None,
                    max_err_h: None,
                    xi_max_err: None,
                    status: format!("error: {e}"),
                }),
            }
        }
    }
    Ok((rows, profile))
}

/// Fine-grid values at a discrete eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleValues {
    pub zeta: Complex64,
    pub a: Complex64,
    pub a_prime: Complex64,
    pub b: Complex64,
    pub r: Complex64,
}

/// BO2 at `M` and `M/2` combined by Richardson extrapolation; `a'` from
/// a fourth-order central difference of the extrapolated `a`.
pub fn fine_grid_oracle(signal: &SignalSpec, zeta: Complex64, m: usize) -> Result<OracleValues> {
    let fine = Prepared::new(&generate(&SignalSpec { m, ..signal.clone() })?, SchemeKind::Bo2)?;
    let coarse = Prepared::new(&generate(&SignalSpec { m: m / 2, ..signal.clone() })?, SchemeKind::Bo2)?;
    let rich = |f: Complex64, c: Complex64| (f * 4.0 - c) / 3.0;
    let a_at = |z: Complex64| -> Result<Complex64> {
        Ok(rich(scatter(&fine, z, false)?.a, scatter(&coarse, z, false)?.a))
    };
    let delta = 1e-3;
    let d = Complex64::new(delta, 0.0);
    let a_prime = (a_at(zeta - d * 2.0)? - a_at(zeta - d)? * 8.0 + a_at(zeta + d)? * 8.0
        - a_at(zeta + d * 2.0)?)
        / (12.0 * delta);
    let bf = bidirectional_b(&fine, zeta, f64::INFINITY)?.b;
    let bc = bidirectional_b(&coarse, zeta, f64::INFINITY)?.b;
    let b = rich(bf, bc);
    Ok(OracleValues { zeta, a: a_at(zeta)?, a_prime, b, r: b / a_prime })
}

/// Newton iteration on the oracle `a(ζ)` starting from `guess`.
pub fn refine_eigenvalue(signal: &SignalSpec, guess: Complex64, m: usize) -> Result<Complex64> {
    let mut zeta = guess;
    for _ in 0..20 {
        let o = fine_grid_oracle(signal, zeta, m)?;
        let step = o.a / o.a_prime;
        zeta -= step;
        if step.norm() < 1e-13 * zeta.norm().max(1.0) {
            break;
        }
    }
    Ok(zeta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteRow {
    pub scheme: SchemeChoice,
    pub m: usize,
    pub zeta: Complex64,
    pub err_a: Option<f64>,
    pub err_b: Option<f64>,
    pub err_aprime: Option<f64>,
    pub err_r: Option<f64>,
    pub residual: Option<f64>,
    pub status: String,
}

/// Errors of `a`, `b`, `a'`, `r` at each supplied eigenvalue against the
/// fine-grid oracle.
pub fn run_discrete(cfg: &ExperimentConfig) -> Result<Vec<DiscreteRow>> {
    let mut check = cfg.clone();
    check.reference.file = Some(PathBuf::new());
    check.validate()?;
    let zetas = cfg.eigenvalues();
    if zetas.is_empty() {
        return Err(Error::InvalidParameter("no eigenvalues supplied".into()));
    }
    let oracles: Vec<OracleValues> = zetas
        .iter()
        .map(|&z| fine_grid_oracle(&cfg.signal, z, cfg.oracle_m))
        .collect::<Result<_>>()
        .map_err(|e| Error::Reference(e.to_string()))?;
    let mut rows = Vec::new();
    for &scheme in &cfg.schemes {
        for &m in &cfg.m_list {
            let prep = match scheme.fast {
                true => Err(Error::UnsupportedFastScheme("discrete spectrum needs a conventional scheme")),
                false => generate(&cfg.signal_at(m)).and_then(|g| Prepared::new(&g, scheme.kind)),
            };
            for o in &oracles {
                let res = prep
                    .as_ref()
                    .map_err(|e| e.to_string())
                    .and_then(|p| phase_coefficient(p, o.zeta, cfg.residual_threshold).map_err(|e| e.to_string()));
                rows.push(match res {
                    Ok(pc) => DiscreteRow {
                        scheme,
                        m,
                        zeta: o.zeta,
                        err_a: finite(relative_error(pc.a, o.a)),
                        err_b: finite(relative_error(pc.b, o.b)),
                        err_aprime: finite(relative_error(pc.a_prime, o.a_prime)),
                        err_r: finite(relative_error(pc.r, o.r)),
                        residual: finite(pc.residual),
                        status: if pc.ill_conditioned {
                            format!("warning: matching residual {:e}", pc.residual)
                        } else {
                            "ok".into()
                        },
                    },
                    Err(e) => DiscreteRow {
                        scheme,
                        m,
                        zeta: o.zeta,
                        err_a: None,
                        err_b: None,
                        err_aprime: None,
                        err_r: None,
                        residual: None,
                        status: format!("error: {e}"),
                    },
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverRow {
    pub scheme: SchemeKind,
    pub m: usize,
    pub n_points: usize,
    pub conventional_s: Option<f64>,
    pub fast_s: Option<f64>,
    pub status: String,
}

/// Wall time of conventional and fast evaluation with `N ≈ M` points in
/// the window; the fast path uses one circle FFT per sequence.
pub fn run_crossover(cfg: &ExperimentConfig) -> Result<Vec<CrossoverRow>> {
    let mut rows = Vec::new();
    for &choice in &cfg.schemes {
        let kind = choice.kind;
        for &m in &cfg.m_list {
            let grid = generate(&cfg.signal_at(m))?;
            let outcome = (|| -> Result<(usize, f64, f64)> {
                let map = cfg.mobius(kind)?;
                let start = Instant::now();
                let targets = Targets::window(cfg.xi_min, cfg.xi_max, m, grid.tau(), &map);
                let fast = fast_scatter(&grid, kind, &map, &targets)?;
                let fast_s = seconds(start);
                let start = Instant::now();
                scatter_grid(&Prepared::new(&grid, kind)?, &fast.xi)?;
                Ok((fast.len(), seconds(start), fast_s))
            })();
            rows.push(match outcome {
                Ok((n, conv, fast)) => CrossoverRow {
                    scheme: kind,
                    m,
                    n_points: n,
                    conventional_s: Some(conv),
                    fast_s: Some(fast),
                    status: "ok".into(),
                },
                Err(e) => CrossoverRow {
                    scheme: kind,
                    m,
                    n_points: 0,
                    conventional_s: None,
                    fast_s: None,
                    status: format!("error: {e}"),
                },
            });
        }
    }
    Ok(rows)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn begin_csv<W: Write>(out: &mut W, experiment: &str, header: &[&str]) -> Result<()> {
    writeln!(out, "{CSV_VERSION} {experiment}")?;
    writeln!(out, "{}", header.join(","))?;
    Ok(())
}

fn write_rows<W: Write>(out: W, rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_continuous<W: Write>(mut out: W, rows: &[ContinuousRow]) -> Result<()> {
    begin_csv(
        &mut out,
        "continuous",
        &["scheme", "M", "RMSE_a", "RMSE_b", "RMSE_r", "RMSE_H", "err_Ec", "wall_time_s", "status"],
    )?;
    write_rows(
        out,
        rows.iter().map(|r| {
            vec![
                r.scheme.to_string(),
                r.m.to_string(),
                opt(r.rmse_a),
                opt(r.rmse_b),
                opt(r.rmse_r),
                opt(r.rmse_h),
                opt(r.err_ec),
                opt(r.wall_time_s),
                r.status.clone(),
            ]
        }),
    )
}

pub fn write_invariant<W: Write>(mut out: W, rows: &[InvariantRow]) -> Result<()> {
    begin_csv(&mut out, "invariant", &["scheme", "M", "RMSE_H", "max_err_H", "xi_max_err", "status"])?;
    write_rows(
        out,
        rows.iter().map(|r| {
            vec![
                r.scheme.to_string(),
                r.m.to_string(),
                opt(r.rmse_h),
                opt(r.max_err_h),
                opt(r.xi_max_err),
                r.status.clone(),
            ]
        }),
    )
}

pub fn write_profile<W: Write>(mut out: W, rows: &[ProfileRow]) -> Result<()> {
    begin_csv(&mut out, "invariant-profile", &["scheme", "M", "xi", "err_H"])?;
    write_rows(
        out,
        rows.iter().map(|r| vec![r.scheme.to_string(), r.m.to_string(), r.xi.to_string(), r.err_h.to_string()]),
    )
}

pub fn write_discrete<W: Write>(mut out: W, rows: &[DiscreteRow]) -> Result<()> {
    begin_csv(
        &mut out,
        "discrete",
        &["scheme", "M", "re_zeta", "im_zeta", "err_a", "err_b", "err_aprime", "err_r", "residual", "status"],
    )?;
    write_rows(
        out,
        rows.iter().map(|r| {
            vec![
                r.scheme.to_string(),
                r.m.to_string(),
                r.zeta.re.to_string(),
                r.zeta.im.to_string(),
                opt(r.err_a),
                opt(r.err_b),
                opt(r.err_aprime),
                opt(r.err_r),
                opt(r.residual),
                r.status.clone(),
            ]
        }),
    )
}

pub fn write_spectrum<W: Write>(mut out: W, d: &ScatteringData) -> Result<()> {
    begin_csv(&mut out, "spectrum", &["xi", "re_a", "im_a", "re_b", "im_b", "re_r", "im_r", "H", "status"])?;
    writeln!(out, "# E_c = {}", d.e_c)?;
    write_rows(
        out,
        (0..d.len()).map(|k| {
            let vals = [d.a[k].re, d.a[k].im, d.b[k].re, d.b[k].im, d.r[k].re, d.r[k].im, d.h[k]];
            let mut row = vec![d.xi[k].to_string()];
            if vals.iter().all(|v| v.is_finite()) {
                row.extend(vals.iter().map(|v| v.to_string()));
                row.push("ok".into());
            } else {
                row.extend(std::iter::repeat(String::new()).take(vals.len()));
                row.push("nonfinite".into());
            }
            row
        }),
    )
}

pub fn write_crossover<W: Write>(mut out: W, rows: &[CrossoverRow]) -> Result<()> {
    begin_csv(&mut out, "crossover", &["scheme", "M", "N", "conventional_s", "fast_s", "status"])?;
    write_rows(
        out,
        rows.iter().map(|r| {
            vec![
                r.scheme.to_string(),
                r.m.to_string(),
                r.n_points.to_string(),
                opt(r.conventional_s),
                opt(r.fast_s),
                r.status.clone(),
            ]
        }),
    )
}

/// Eigenvalue list from CSV lines `re,im` (`#` comments, optional header).
pub fn load_eigenvalues(path: &Path) -> Result<Vec<[f64; 2]>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("re") {
            continue;
        }
        let parts: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                message: format!("line {}: {e}", i + 1),
            })
        };
        match parts.as_slice() {
            [re, im] => out.push([parse(re)?, parse(im)?]),
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    message: format!("line {}: expected 're,im'", i + 1),
                })
            }
        }
    }
    Ok(out)
}
