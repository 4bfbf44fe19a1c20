//! Command-line driver. Each command reads an [`ExperimentConfig`], applies
//! flag overrides, writes its outputs to the output directory and maps the
//! verdict to an exit code.

use crate::axioms::{
    invariance_check, metric_equivalence, rp_gaussian_check, rp_kernel_check,
    rp_monte_carlo_check, with_reflections, Functional,
};
use crate::config::{BallSource, ExperimentConfig};
use crate::continuity::{ball_grid, entropy_integral, geometric_schedule, EntropyReport};
use crate::error::{Error, Result};
use crate::gaussian::{marginal_consistency, sample};
use crate::geometry::{Ball, EuclideanMotion};
use crate::io::{fmt_f64, to_json, write_balls_csv, write_batch_bin, write_batch_csv, write_kernel_csv, BatchSidecar};
use crate::kernels::{eval_kernel, kernel_matrix, KernelSpec};
use crate::rng::{stream_rng, RandomBalls};
use crate::transform::{apply_transform, Transform};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Default output directory when neither `--out` nor the config sets one.
pub const OUT_ENV: &str = "BALLFIELD_OUT";

#[derive(Debug, Parser)]
#[command(name = "ballfield", version, about = "Ball-indexed Gaussian random fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML experiment configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory (overrides the config and $BALLFIELD_OUT).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads; outputs do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Kernel: w, white, free_field.
    #[arg(long, global = true)]
    pub kernel: Option<String>,

    /// Free-field mass.
    #[arg(long, global = true)]
    pub mass: Option<f64>,

    /// Ball configuration CSV.
    #[arg(long, global = true)]
    pub balls: Option<PathBuf>,

    #[arg(long, global = true)]
    pub n_samples: Option<usize>,

    #[arg(long, global = true)]
    pub bootstrap: Option<usize>,

    /// Transform: identity, tanh, cube, power:<p>, clip:<bound>.
    #[arg(long, global = true)]
    pub transform: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Kernel matrix over a ball configuration.
    Kernel,
    /// Gaussian (optionally transformed) samples.
    Sample,
    /// Reflection positivity at kernel level and in Gaussian closed form.
    Rp,
    /// Reflection positivity from Monte Carlo samples.
    RpMc,
    /// Euclidean invariance of the kernel under random motions.
    Invariance,
    /// Small-radius convergence table.
    Converge,
    /// Covering numbers and the entropy integral under grid refinement.
    Entropy,
    /// Range of the ratio of two pseudo-metrics.
    Equivalence,
    /// Marginal consistency of a subset.
    Consistency,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Sample => "sample",
            Command::Rp => "rp",
            Command::RpMc => "rp-mc",
            Command::Invariance => "invariance",
            Command::Converge => "converge",
            Command::Entropy => "entropy",
            Command::Equivalence => "equivalence",
            Command::Consistency => "consistency",
        }
    }
}

fn parse_kernel(name: &str, mass: Option<f64>) -> Result<KernelSpec> {
    match name {
        "w" => Ok(KernelSpec::W),
        "white" => Ok(KernelSpec::White),
        "free_field" | "free-field" => Ok(KernelSpec::FreeField { mass: mass.unwrap_or(1.0) }),
        other => Err(Error::domain(format!("unknown kernel {other:?} (expected w, white, free_field)"))),
    }
}

fn parse_transform(s: &str) -> Result<Transform> {
    let bad = || Error::domain(format!("unknown transform {s:?}"));
    match s.split_once(':') {
        None => match s {
            "identity" => Ok(Transform::Identity),
            "tanh" => Ok(Transform::Tanh),
            "cube" => Ok(Transform::Power { p: 3 }),
            _ => Err(bad()),
        },
        Some(("power", p)) => Ok(Transform::Power { p: p.parse().map_err(|_| bad())? }),
        Some(("clip", b)) => Ok(Transform::Clip { bound: b.parse().map_err(|_| bad())? }),
        _ => Err(bad()),
    }
}

/// Config file (if any) with command-line flags applied on top.
pub fn effective_config(cli: &Cli) -> Result<(ExperimentConfig, PathBuf)> {
    let (mut cfg, base) = match &cli.config {
        Some(p) => (
            ExperimentConfig::load(p)?,
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
        ),
        None => (ExperimentConfig::default(), PathBuf::from(".")),
    };
    cfg.command = Some(cli.command.name().to_string());
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(k) = &cli.kernel {
        cfg.kernel = Some(parse_kernel(k, cli.mass)?);
    } else if let (Some(m), Some(KernelSpec::FreeField { mass })) = (cli.mass, cfg.kernel.as_mut()) {
        *mass = m;
    }
    if let Some(p) = &cli.balls {
        let p = std::path::absolute(p)?;
        cfg.balls = Some(BallSource::Csv { path: p });
    }
    if let Some(n) = cli.n_samples {
        cfg.samples.n_samples = n;
    }
    if let Some(b) = cli.bootstrap {
        cfg.samples.bootstrap = b;
    }
    if let Some(t) = &cli.transform {
        cfg.transform = Some(parse_transform(t)?);
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = Some(o.clone());
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    Ok((cfg, base))
}

/// Verdict of one command run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

struct Writer {
    dir: PathBuf,
    hash: String,
    files: Vec<PathBuf>,
}

impl Writer {
    fn create(&mut self, name: &str) -> Result<BufWriter<fs::File>> {
        let p = self.dir.join(name);
        self.files.push(p.clone());
        Ok(BufWriter::new(fs::File::create(p)?))
    }

    fn trailer(&self) -> Vec<String> {
        vec![format!("config_hash={}", self.hash), format!("version={}", crate::VERSION)]
    }

    fn json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<()> {
        let mut v = serde_json::to_value(body)?;
        if let Some(obj) = v.as_object_mut() {
            obj.insert("config_hash".into(), json!(self.hash));
            obj.insert("version".into(), json!(crate::VERSION));
        }
        let mut w = self.create(name)?;
        w.write_all(to_json(&v)?.as_bytes())?;
        w.flush()?;
        Ok(())
    }
}

fn load_balls(cfg: &ExperimentConfig, base: &Path) -> Result<Vec<Ball>> {
    let balls = match &cfg.balls {
        Some(src) => src.load(base)?,
        None => Vec::new(),
    };
    if balls.is_empty() {
        return Err(Error::domain("the ball configuration is empty"));
    }
    let d = balls[0].dim();
    if let Some(i) = balls.iter().position(|b| b.dim() != d) {
        return Err(Error::precondition(format!("ball {i} has dimension {} (expected {d})", balls[i].dim()), Some(i)));
    }
    Ok(balls)
}

fn default_functionals(m: usize) -> Vec<Functional> {
    (0..m).map(|k| Functional::single(k, 1.0)).collect()
}

/// Output directory: flag or config value, else `$BALLFIELD_OUT`, else
/// `ballfield-out`.
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("ballfield-out"))
}

/// Run `cmd` with a fully resolved configuration.
pub fn run_command(cmd: Command, cfg: &ExperimentConfig, base: &Path) -> Result<Outcome> {
    let dir = output_dir(cfg);
    fs::create_dir_all(&dir)?;
    let mut w = Writer {
        dir,
        hash: cfg.hash(),
        files: Vec::new(),
    };
    let q = &cfg.quadrature;
    let spec = cfg.kernel();
    spec.validate()?;
    let (pass, summary) = match cmd {
        Command::Kernel => {
            let balls = load_balls(cfg, base)?;
            let m = kernel_matrix(&spec, &balls, q)?;
            let mut f = w.create("kernel.csv")?;
            write_kernel_csv(&mut f, &m, spec.name(), &spec.params(), &w.trailer())?;
            f.flush()?;
            w.json(
                "kernel.json",
                &json!({
                    "kernel": spec,
                    "n": m.order(),
                    "d": m.dim(),
                    "quadrature": q,
                    "max_error_estimate": m.max_error_estimate,
                }),
            )?;
            (true, format!("kernel {spec}: {}x{} matrix", m.order(), m.order()))
        }
        Command::Sample => {
            let balls = load_balls(cfg, base)?;
            if cfg.samples.n_samples == 0 {
                return Err(Error::domain("n_samples must be at least 1"));
            }
            let mut batch = sample(&spec, &balls, cfg.samples.n_samples, cfg.seed, q)?;
            if let Some(t) = &cfg.transform {
                batch = apply_transform(t, &batch)?;
            }
            let mut f = w.create("samples.bin")?;
            write_batch_bin(&mut f, &batch)?;
            f.flush()?;
            w.json("samples.json", &BatchSidecar::new(&batch, &w.hash))?;
            if cfg.samples.csv {
                let mut f = w.create("samples.csv")?;
                write_batch_csv(&mut f, &batch)?;
                f.flush()?;
            }
            let mut f = w.create("balls.csv")?;
            write_balls_csv(&mut f, &balls)?;
            f.flush()?;
            (true, format!("{} samples at {} balls", batch.n_samples, batch.order()))
        }
        Command::Rp => {
            let balls = load_balls(cfg, base)?;
            let functionals = cfg.functionals.clone().unwrap_or_else(|| default_functionals(balls.len()));
            let kernel = rp_kernel_check(&spec, &balls, q)?;
            let gauss = rp_gaussian_check(&spec, &balls, &functionals, q)?;
            let pass = kernel.pass && gauss.pass;
            w.json("rp.json", &json!({ "kernel_theta": kernel, "gaussian_closed_form": gauss, "pass": pass }))?;
            (
                pass,
                format!(
                    "kernel_theta min eig {:.3e} (tol {:.1e}); gaussian min eig {:.3e} (tol {:.1e})",
                    kernel.min_eigenvalue, kernel.tolerance, gauss.min_eigenvalue, gauss.tolerance
                ),
            )
        }
        Command::RpMc => {
            let balls = load_balls(cfg, base)?;
            crate::axioms::check_positive_time(&balls)?;
            let functionals = cfg.functionals.clone().unwrap_or_else(|| default_functionals(balls.len()));
            let both = with_reflections(&balls);
            let mut batch = sample(&spec, &both, cfg.samples.n_samples, cfg.seed, q)?;
            if let Some(t) = &cfg.transform {
                batch = apply_transform(t, &batch)?;
            }
            let report = rp_monte_carlo_check(&batch, &functionals, cfg.samples.bootstrap, cfg.seed)?;
            w.json(
                "rp_mc.json",
                &json!({ "report": report, "transforms": batch.transforms, "n_samples": batch.n_samples }),
            )?;
            (
                report.pass,
                format!(
                    "monte carlo min eig {:.3e}, stderr {:.3e}",
                    report.min_eigenvalue,
                    report.stderr.unwrap_or(0.0)
                ),
            )
        }
        Command::Invariance => {
            let balls = load_balls(cfg, base)?;
            let d = balls[0].dim();
            let mut rng = stream_rng(cfg.motions.seed, 0);
            let motions: Vec<EuclideanMotion> = (0..cfg.motions.count)
                .map(|_| EuclideanMotion::random(d, cfg.motions.scale, &mut rng))
                .collect();
            let report = invariance_check(&spec, &motions, &balls, q)?;
            let tolerance = match spec {
                KernelSpec::W | KernelSpec::White => 1e-12,
                _ => 1e-6,
            };
            let pass = report.max_deviation <= tolerance;
            w.json("invariance.json", &json!({ "report": report, "tolerance": tolerance, "pass": pass }))?;
            (pass, format!("max deviation {:.3e} (tol {tolerance:.0e})", report.max_deviation))
        }
        Command::Converge => {
            let c = &cfg.converge;
            if c.x.is_empty() || c.x.len() != c.y.len() {
                return Err(Error::domain("converge needs x and y of equal nonzero dimension"));
            }
            if c.x == c.y {
                return Err(Error::domain("converge needs x != y"));
            }
            if c.radii.is_empty() || c.radii.iter().any(|&r| !(r > 0.0)) || c.radii.windows(2).any(|p| !(p[0] > p[1])) {
                return Err(Error::domain("radius schedule must be positive and strictly decreasing"));
            }
            let d = c.x.len();
            let delta = crate::geometry::distance(&c.x, &c.y);
            let limit = converge_limit(&spec, d, delta);
            let mut f = w.create("converge.csv")?;
            writeln!(f, "r,kernel,limit,abs_error")?;
            let mut last_err = None;
            for &r in &c.radii {
                let k = eval_kernel(&spec, &Ball::new(c.x.clone(), r)?, &Ball::new(c.y.clone(), r)?, q)?;
                match limit {
                    Some(l) => {
                        let e = (k - l).abs();
                        last_err = Some(e);
                        writeln!(f, "{},{},{},{}", fmt_f64(r), fmt_f64(k), fmt_f64(l), fmt_f64(e))?;
                    }
                    None => writeln!(f, "{},{},,", fmt_f64(r), fmt_f64(k))?,
                }
            }
            for t in w.trailer() {
                writeln!(f, "# {t}")?;
            }
            f.flush()?;
            let summary = match (limit, last_err) {
                (Some(l), Some(e)) => format!("final error {e:.3e} against limit {l:.6e}"),
                _ => "no closed-form limit for this kernel and dimension".to_string(),
            };
            (true, summary)
        }
        Command::Entropy => {
            let e = &cfg.entropy;
            let schedule = geometric_schedule(e.eps_max, e.eps_min, e.eps_points)?;
            let mut levels: Vec<EntropyReport> = Vec::new();
            if let Some(src) = &cfg.balls {
                let grid = src.load(base)?;
                let mut r = entropy_integral(&spec, &grid, &schedule, q)?;
                r.region = "configured balls".into();
                levels.push(r);
            } else {
                for &per_axis in &e.per_axis {
                    let (h, grid) = ball_grid(&e.lo, &e.hi, per_axis, &e.radii)?;
                    let mut r = entropy_integral(&spec, &grid, &schedule, q)?;
                    r.region = format!("centers in box {:?}..{:?}, radii {:?}", e.lo, e.hi, e.radii);
                    r.grid_resolution = Some(h);
                    levels.push(r);
                }
            }
            let changes: Vec<f64> = levels
                .windows(2)
                .map(|p| (p[1].j_estimate - p[0].j_estimate) / p[0].j_estimate)
                .collect();
            let pass = levels.iter().all(|l| l.monotone && l.j_estimate.is_finite());
            w.json("entropy.json", &json!({ "levels": levels, "relative_changes": changes, "pass": pass }))?;
            let js: Vec<String> = levels.iter().map(|l| format!("{:.4}", l.j_estimate)).collect();
            (pass, format!("J estimates [{}]", js.join(", ")))
        }
        Command::Equivalence => {
            let e = &cfg.equivalence;
            let pts = RandomBalls::cube(e.dim, 2 * e.pairs, e.lo, e.hi, e.radius_min, e.radius_max, e.seed).generate()?;
            let pairs: Vec<(Ball, Ball)> = pts.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
            let report = metric_equivalence(&spec, &e.reference, &pairs, q)?;
            let pass = report.min_ratio > 0.0 && report.max_ratio.is_finite();
            w.json(
                "equivalence.json",
                &json!({ "kernel": spec, "reference": e.reference, "report": report, "pass": pass }),
            )?;
            (pass, format!("ratio in [{:.4}, {:.4}]", report.min_ratio, report.max_ratio))
        }
        Command::Consistency => {
            let balls = load_balls(cfg, base)?;
            let subset = cfg.subset.clone().unwrap_or_else(|| (0..balls.len().div_ceil(2)).collect());
            let report = marginal_consistency(&spec, &balls, &subset, cfg.samples.n_samples, cfg.seed, q)?;
            w.json("consistency.json", &report)?;
            (
                report.pass,
                format!(
                    "exact submatrix: {}, worst deviation {:.3} of 5σ",
                    report.exact_match, report.max_normalized_deviation
                ),
            )
        }
    };
    Ok(Outcome {
        pass,
        summary,
        files: w.files,
    })
}

/// Closed-form off-diagonal limit of `K(x, r, y, r)` as `r → 0`, when known.
pub fn converge_limit(spec: &KernelSpec, d: usize, delta: f64) -> Option<f64> {
    match *spec {
        KernelSpec::W | KernelSpec::White => Some(0.0),
        KernelSpec::FreeField { mass } if d == 3 => Some((-mass * delta).exp() / (4.0 * PI * delta)),
        KernelSpec::Spectral(m) if d == 3 && m.exponent == 1.0 => {
            Some(m.weight * (-m.mass * delta).exp() / (4.0 * PI * delta))
        }
        _ => None,
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical { .. } | Error::Factorization { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// Parse arguments, run, print a summary line and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let result = effective_config(&cli).and_then(|(cfg, base)| {
        let threads = cfg.threads.unwrap_or(0);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
        pool.install(|| run_command(cli.command, &cfg, &base))
    });
    match result {
        Ok(outcome) => {
            let verdict = if outcome.pass { "pass" } else { "FAIL" };
            println!("{}: {verdict}: {}", cli.command.name(), outcome.summary);
            if outcome.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("{}: error: {e}", cli.command.name());
            exit_code(&e)
        }
    }
}
