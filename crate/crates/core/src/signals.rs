//! Built-in test potentials and CSV ingestion of sampled potentials.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagator::PotentialGrid;
use crate::stencil::MIN_SAMPLES;

/// Boundary samples above this magnitude trigger a truncation warning.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

/// Largest accepted relative deviation of a time step from the mean step.
pub const MAX_JITTER: f64 = 1e-9;

/// Smallest `M` accepted by [`generate`].
pub const MIN_INTERVALS: usize = 8;

pub const CSV_HEADER: [&str; 3] = ["t", "re_q", "im_q"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalKind {
    ChirpedSech,
    Sech,
    Rectangle,
    File,
}

impl std::str::FromStr for SignalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "chirped_sech" | "chirp" => Ok(SignalKind::ChirpedSech),
            "sech" => Ok(SignalKind::Sech),
            "rectangle" | "rect" => Ok(SignalKind::Rectangle),
            "file" => Ok(SignalKind::File),
            _ => Err(Error::InvalidParameter(format!("unknown signal '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SignalSpec {
    pub kind: SignalKind,
    /// Amplitude `A`.
    #[serde(rename = "A")]
    pub amplitude: f64,
    /// Chirp `C`.
    #[serde(rename = "C")]
    pub chirp: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub sigma: f64,
    pub path: Option<PathBuf>,
}

impl Default for SignalSpec {
    fn default() -> Self {
        Self {
            kind: SignalKind::ChirpedSech,
            amplitude: 5.2,
            chirp: 4.0,
            l: 32.0,
            m: 4096,
            sigma: 1.0,
            path: None,
        }
    }
}

/// `ln sech t`, accurate for any `|t|`.
pub fn ln_sech(t: f64) -> f64 {
    let a = t.abs();
    std::f64::consts::LN_2 - a - (-2.0 * a).exp().ln_1p()
}

/// `A · sech(t)^{1+iC}`.
pub fn chirped_sech(t: f64, amplitude: f64, chirp: f64) -> Complex64 {
    let s = ln_sech(t);
    Complex64::from_polar(amplitude * s.exp(), chirp * s)
}

/// Nodes `t_n = L(2n − M)/M`, symmetric under `n ↔ M − n`.
pub fn nodes(l: f64, m: usize) -> Vec<f64> {
    (0..=m).map(|n| l * (2.0 * n as f64 - m as f64) / m as f64).collect()
}

/// Samples a built-in signal, or loads the file named by `spec.path`.
pub fn generate(spec: &SignalSpec) -> Result<PotentialGrid> {
    if spec.kind == SignalKind::File {
        let path = spec
            .path
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("file signal needs a path".into()))?;
        return load_file(path, spec.sigma);
    }
    if spec.m < MIN_INTERVALS {
        return Err(Error::InvalidParameter(format!("M must be at least {MIN_INTERVALS}, got {}", spec.m)));
    }
    if !(spec.l > 0.0) {
        return Err(Error::InvalidParameter(format!("L must be positive, got {}", spec.l)));
    }
    let (a, c) = (spec.amplitude, spec.chirp);
    let q: Vec<Complex64> = nodes(spec.l, spec.m)
        .into_iter()
        .map(|t| match spec.kind {
            SignalKind::ChirpedSech => chirped_sech(t, a, c),
            SignalKind::Sech => Complex64::new(a * ln_sech(t).exp(), 0.0),
            SignalKind::Rectangle => Complex64::new(if t.abs() <= 1.0 { a } else { 0.0 }, 0.0),
            SignalKind::File => unreachable!(),
        })
        .collect();
    let grid = PotentialGrid::symmetric(q, spec.l, spec.sigma)?;
    check_boundary(&grid);
    Ok(grid)
}

/// Largest `|q|` at the two ends; warns above [`BOUNDARY_TOLERANCE`].
pub fn check_boundary(grid: &PotentialGrid) -> f64 {
    let q = grid.samples();
    let edge = q[0].norm().max(q[q.len() - 1].norm());
    if edge > BOUNDARY_TOLERANCE {
        log::warn!("potential does not decay at the boundary: |q| = {edge:e}");
    }
    edge
}

/// Writes `t,re_q,im_q` rows with round-trip float formatting.
pub fn save_csv(grid: &PotentialGrid, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(CSV_HEADER)?;
    for (n, q) in grid.samples().iter().enumerate() {
        w.write_record([grid.t(n).to_string(), q.re.to_string(), q.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a uniformly sampled potential from CSV (`t,re_q,im_q`, `#` comments).
pub fn load_file(path: &Path, sigma: f64) -> Result<PotentialGrid> {
    let parse_err = |message: String| Error::Parse { path: path.to_path_buf(), message };
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(parse_err(format!("expected header t,re_q,im_q, found {:?}", headers)));
    }
    let mut t = Vec::new();
    let mut q = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 3 {
            return Err(parse_err(format!("row {}: expected 3 fields, found {}", row + 1, rec.len())));
        }
        let num = |k: usize| {
            rec[k].parse::<f64>().map_err(|e| parse_err(format!("row {}: {e}", row + 1)))
        };
        t.push(num(0)?);
        q.push(Complex64::new(num(1)?, num(2)?));
    }
    if q.len() < MIN_SAMPLES {
        return Err(Error::InputSize { needed: MIN_SAMPLES, got: q.len() });
    }
    let tau = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if !(tau > 0.0) {
        return Err(parse_err("time column must increase".into()));
    }
    for row in 1..t.len() {
        let jitter = ((t[row] - t[row - 1]) - tau).abs() / tau;
        if !(jitter <= MAX_JITTER) {
            return Err(Error::NonUniformGrid { row, jitter });
        }
    }
    let grid = PotentialGrid::with_step(q, t[0], tau, sigma)?;
    check_boundary(&grid);
    Ok(grid)
}

/// Writes a grid to any writer in the CSV format (used by the CLI).
pub fn write_csv<W: Write>(grid: &PotentialGrid, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (n, q) in grid.samples().iter().enumerate() {
        w.write_record([grid.t(n).to_string(), q.re.to_string(), q.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(kind: SignalKind, a: f64, c: f64, l: f64, m: usize) -> SignalSpec {
        SignalSpec { kind, amplitude: a, chirp: c, l, m, sigma: 1.0, path: None }
    }

    #[test]
    fn chirped_sech_peak() {
        let g = generate(&SignalSpec::default()).unwrap();
        let mid = g.m() / 2;
        assert_eq!(g.t(mid), 0.0);
        assert_eq!(g.samples()[mid], Complex64::new(5.2, 0.0));
        assert!(check_boundary(&g) < 2e-13);
    }

    #[test]
    fn ln_sech_is_stable() {
        assert_eq!(ln_sech(0.0), 0.0);
        assert!((ln_sech(1.0) - (1.0 / 1f64.cosh()).ln()).abs() < 1e-15);
        assert!((ln_sech(800.0) - (std::f64::consts::LN_2 - 800.0)).abs() < 1e-12);
        assert!(chirped_sech(800.0, 1.0, 4.0).norm() == 0.0);
    }

    #[test]
    fn sech_and_rectangle() {
        let g = generate(&spec(SignalKind::Sech, 1.0, 0.0, 10.0, 20)).unwrap();
        assert_eq!(g.samples()[10], Complex64::new(1.0, 0.0));
        assert_eq!(g.samples()[0], g.samples()[20]);
        let r = generate(&spec(SignalKind::Rectangle, 1.0, 0.0, 4.0, 16)).unwrap();
        let vals: Vec<f64> = r.samples().iter().map(|q| q.re).collect();
        // nodes −4, −3.5, …, 4: |t| ≤ 1 holds for indices 6..=10
        for (n, v) in vals.iter().enumerate() {
            assert_eq!(*v, if (6..=10).contains(&n) { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate(&spec(SignalKind::Sech, 1.0, 0.0, 10.0, 4)).is_err());
        assert!(generate(&spec(SignalKind::Sech, 1.0, 0.0, -1.0, 16)).is_err());
        assert!(generate(&spec(SignalKind::File, 1.0, 0.0, 1.0, 16)).is_err());
    }

    #[test]
    fn csv_round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.csv");
        let g = generate(&spec(SignalKind::ChirpedSech, 5.2, 4.0, 32.0, 512)).unwrap();
        save_csv(&g, &path).unwrap();
        let back = load_file(&path, 1.0).unwrap();
        assert_eq!(back.samples(), g.samples());
        assert_eq!(back.t_first(), g.t_first());
        assert!((back.tau() - g.tau()).abs() < 1e-15);
        let mut f = SignalSpec::default();
        f.kind = SignalKind::File;
        f.path = Some(path);
        assert_eq!(generate(&f).unwrap().samples(), g.samples());
    }

    #[test]
    fn rejects_jitter_and_short_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "t,re_q,im_q\n0,0,0\n1,0,0\n2.01,0,0\n3,0,0\n4,0,0\n5,0,0\n").unwrap();
        assert!(matches!(load_file(&path, 1.0), Err(Error::NonUniformGrid { row: 2, .. })));
        std::fs::write(&path, "t,re_q,im_q\n0,1,0\n1,0,0\n2,0,0\n").unwrap();
        assert!(matches!(load_file(&path, 1.0), Err(Error::InputSize { needed: 5, got: 3 })));
        std::fs::write(&path, "time,q\n0,1\n").unwrap();
        assert!(matches!(load_file(&path, 1.0), Err(Error::Parse { .. })));
        std::fs::write(&path, "# comment\nt,re_q,im_q\n0,0,0\n1,x,0\n").unwrap();
        assert!(matches!(load_file(&path, 1.0), Err(Error::Parse { .. })));
    }

    #[test]
    fn generation_is_deterministic() {
        let s = SignalSpec::default();
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
    }

    proptest! {
        #[test]
        fn chirped_sech_modulus_is_symmetric(
            a in 0.1..10.0f64, c in -8.0..8.0f64, l in 1.0..40.0f64, half in 4usize..200,
        ) {
            let g = generate(&spec(SignalKind::ChirpedSech, a, c, l, 2 * half)).unwrap();
            let q = g.samples();
            let m = q.len() - 1;
            for n in 0..=m {
                prop_assert_eq!(q[n].norm(), q[m - n].norm());
            }
        }
    }
}
