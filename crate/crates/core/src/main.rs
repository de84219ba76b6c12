use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zsnft::experiments::{
    load_eigenvalues, run_continuous, run_crossover, run_discrete, run_invariant, spectrum,
    write_continuous, write_crossover, write_discrete, write_invariant, write_profile, write_spectrum,
    ExperimentConfig, SchemeChoice,
};
use zsnft::signals::{generate, SignalKind};
use zsnft::{Error, Result};

#[derive(Parser)]
#[command(name = "zs-nft", version, about = "Direct nonlinear Fourier transform of the Zakharov-Shabat system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// RMSE of a, b, r, H and the E_c error against a reference.
    Continuous(Common),
    /// Quadratic-invariant error per scheme, with a per-xi profile.
    Invariant(Common),
    /// Errors of a, b, a', r at supplied eigenvalues against a fine-grid oracle.
    Discrete(Common),
    /// Raw a, b, r, H on the xi grid for the first scheme and M.
    /// The output can serve as a --reference file.
    Spectrum(Common),
    /// Wall time of conventional and fast evaluation with N close to M.
    Crossover(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// chirped-sech, sech, rectangle or file.
    #[arg(long)]
    signal: Option<SignalKind>,
    /// Signal file (t,re_q,im_q) for --signal file.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long = "A")]
    amplitude: Option<f64>,
    #[arg(long = "C")]
    chirp: Option<f64>,
    #[arg(long = "L")]
    l: Option<f64>,
    /// Comma-separated list of grid sizes.
    #[arg(long = "M", value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// +1 (focusing) or -1 (defocusing).
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    /// Comma-separated scheme names; an F prefix selects the fast path.
    #[arg(long, value_delimiter = ',')]
    scheme: Option<Vec<SchemeChoice>>,
    /// Evaluate every listed scheme through its fast polynomial form.
    #[arg(long)]
    fast: bool,
    /// Möbius parameter of the fast layer.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xi_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xi_max: Option<f64>,
    #[arg(long)]
    n_xi: Option<usize>,
    /// Grid size of the self-converged reference.
    #[arg(long)]
    m_ref: Option<usize>,
    /// Precomputed reference spectrum (as written by `spectrum`).
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Eigenvalue list, one `re,im` per line.
    #[arg(long)]
    eigenvalues: Option<PathBuf>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_json_file(p)?,
            None => ExperimentConfig::default(),
        };
        let s = &mut cfg.signal;
        if let Some(v) = self.signal {
            s.kind = v;
        }
        if let Some(v) = &self.file {
            s.kind = SignalKind::File;
            s.path = Some(v.clone());
        }
        macro_rules! set {
            ($($src:ident => $dst:expr),* $(,)?) => {$(if let Some(v) = self.$src.clone() { $dst = v; })*};
        }
        set!(amplitude => s.amplitude, chirp => s.chirp, l => s.l, sigma => s.sigma);
        set!(m => cfg.m_list, scheme => cfg.schemes, xi_min => cfg.xi_min, xi_max => cfg.xi_max);
        set!(m_ref => cfg.reference.m_ref);
        if self.n_xi.is_some() {
            cfg.n_xi = self.n_xi;
        }
        if self.h.is_some() {
            cfg.h = self.h;
        }
        if self.reference.is_some() {
            cfg.reference.file = self.reference.clone();
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        if let Some(p) = &self.eigenvalues {
            cfg.eigenvalues = load_eigenvalues(p)?;
        }
        if self.fast {
            for s in &mut cfg.schemes {
                s.fast = true;
            }
        }
        Ok(cfg)
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// `out.csv` → `out_profile.csv`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}_{suffix}.csv"))
}

fn run(cli: Cli) -> Result<()> {
    let (Command::Continuous(c)
    | Command::Invariant(c)
    | Command::Discrete(c)
    | Command::Spectrum(c)
    | Command::Crossover(c)) = &cli.command;
    let cfg = c.config()?;
    if let Some(n) = cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool: {e}");
        }
    }
    let out_path = cfg.output.as_deref();
    match &cli.command {
        Command::Continuous(_) => write_continuous(output(out_path)?, &run_continuous(&cfg)?),
        Command::Invariant(_) => {
            let (rows, profile) = run_invariant(&cfg)?;
            write_invariant(output(out_path)?, &rows)?;
            match out_path {
                Some(p) => write_profile(output(Some(&sibling(p, "profile")))?, &profile),
                None => write_profile(output(None)?, &profile),
            }
        }
        Command::Discrete(_) => write_discrete(output(out_path)?, &run_discrete(&cfg)?),
        Command::Spectrum(_) => {
            let (Some(&m), Some(&scheme)) = (cfg.m_list.first(), cfg.schemes.first()) else {
                return Err(Error::InvalidParameter("spectrum needs one M and one scheme".into()));
            };
            let data = spectrum(&generate(&cfg.signal_at(m))?, scheme, &cfg.xi(), &cfg)?;
            write_spectrum(output(out_path)?, &data)
        }
        Command::Crossover(_) => write_crossover(output(out_path)?, &run_crossover(&cfg)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zs-nft: {e}");
            ExitCode::FAILURE
        }
    }
}
