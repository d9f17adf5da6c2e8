use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use polyharm::GridSpec;

use crate::commands::{self, load_spec, Outcome};
use crate::config::Config;
use crate::error::{exit, CliError, CliResult};
use crate::render::{RenderSpec, Which};

#[derive(Debug, Parser)]
#[command(
    name = "polyharm",
    version,
    about = "Analyse polyharmonic planar mappings given as power series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Map specification (JSON).
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
    /// Sampling grid as radial×angular counts, e.g. 64x256.
    #[arg(long, value_name = "RxA")]
    pub grid: Option<String>,
    /// Comma-separated radii.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub radii: Option<String>,
    /// Directory for the certificate and any rendered files.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Print the certificate as JSON instead of a summary line.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    /// Concentric circles to image.
    #[arg(long)]
    pub circles: Option<usize>,
    /// Radial lines to image.
    #[arg(long)]
    pub rays: Option<usize>,
    /// Samples per curve.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate f at a point of the closed disk.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Point such as 0.5, 0.25i or 0.3-0.1i.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Write SVG and CSV images of a polar grid.
    Render {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        render: RenderArgs,
        /// Functions to draw (default: all).
        #[arg(long, value_enum, value_delimiter = ',')]
        which: Vec<Which>,
    },
    /// Univalence via the harmonic slice maps.
    SliceTest {
        #[command(flatten)]
        common: Common,
    },
    /// Jump criterion at a boundary point (biharmonic specs).
    Boundary {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        theta0: Option<f64>,
    },
    /// Divergence of the continuity integral along the curve near e^{iθ₀}.
    GammaIntegral {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        theta0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<f64>,
        /// Comma-separated cutoffs δ.
        #[arg(long, value_name = "LIST")]
        cutoffs: Option<String>,
    },
    /// Certify f = H + |z|² conj(G) built from a harmonic F = H + conj(G).
    CertifyCtc {
        #[command(flatten)]
        common: Common,
        /// Also render F, f and the dilatation into --out.
        #[arg(long)]
        render: bool,
        #[command(flatten)]
        render_args: RenderArgs,
    },
}

pub fn parse_list(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Parse(format!("{what}: '{x}': {e}")))
        })
        .collect()
}

pub fn parse_grid(s: &str, max_radius: f64) -> CliResult<GridSpec> {
    let parsed = s.split_once(['x', 'X']).and_then(|(r, a)| {
        Some((
            r.trim().parse::<usize>().ok()?,
            a.trim().parse::<usize>().ok()?,
        ))
    });
    let (r, a) = parsed.ok_or_else(|| CliError::Parse(format!("grid: expected RxA, got '{s}'")))?;
    Ok(GridSpec::new(r, a, max_radius)?)
}

pub fn parse_point(s: &str) -> CliResult<Complex64> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|_| CliError::Parse(format!("z: cannot read '{s}' as a complex number")))
}

impl Common {
    fn grid(&self, cfg: &Config) -> CliResult<GridSpec> {
        match &self.grid {
            Some(g) => parse_grid(g, cfg.grid.max_radius),
            None => Ok(GridSpec::new(
                cfg.grid.radial,
                cfg.grid.angular,
                cfg.grid.max_radius,
            )?),
        }
    }

    fn radii(&self, fallback: &[f64]) -> CliResult<Vec<f64>> {
        match &self.radii {
            Some(r) => parse_list(r, "radii"),
            None => Ok(fallback.to_vec()),
        }
    }
}

impl RenderArgs {
    fn spec(&self, cfg: &Config) -> RenderSpec {
        RenderSpec {
            circles: self.circles.unwrap_or(cfg.render.circles),
            rays: self.rays.unwrap_or(cfg.render.rays),
            samples_per_curve: self.samples.unwrap_or(cfg.curve_samples),
            max_radius: cfg.render.max_radius,
            width: cfg.render.width,
            height: cfg.render.height,
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Eval { common, .. }
        | Command::Render { common, .. }
        | Command::SliceTest { common }
        | Command::Boundary { common, .. }
        | Command::GammaIntegral { common, .. }
        | Command::CertifyCtc { common, .. } => common,
    }
}

pub fn execute(cmd: &Command, cfg: &Config) -> CliResult<Outcome> {
    let common = common(cmd);
    let input = load_spec(&common.spec)?;
    match cmd {
        Command::Eval { z, .. } => commands::eval(&input, parse_point(z)?),
        Command::Render { render, which, .. } => {
            let which = if which.is_empty() {
                Which::ALL.to_vec()
            } else {
                which.clone()
            };
            let out = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
            commands::render(&input, &render.spec(cfg), &which, &out)
        }
        Command::SliceTest { .. } => {
            commands::slice_test(&input, &common.grid(cfg)?, &common.radii(&cfg.radii)?)
        }
        Command::Boundary { theta0, .. } => {
            let radii = match &common.radii {
                Some(r) => Some(parse_list(r, "radii")?),
                None if !cfg.boundary_radii.is_empty() => Some(cfg.boundary_radii.clone()),
                None => None,
            };
            commands::boundary(&input, theta0.unwrap_or(cfg.theta0), radii.as_deref())
        }
        Command::GammaIntegral {
            theta0, m, cutoffs, ..
        } => {
            let cutoffs = match cutoffs {
                Some(c) => parse_list(c, "cutoffs")?,
                None => cfg.cutoffs.clone(),
            };
            commands::gamma_integral(
                &input,
                theta0.unwrap_or(cfg.theta0),
                m.unwrap_or(cfg.m),
                &cutoffs,
            )
        }
        Command::CertifyCtc {
            render,
            render_args,
            ..
        } => {
            let spec = render_args.spec(cfg);
            let out = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let render = render.then_some((&spec, out.as_path()));
            commands::certify(
                &input,
                &common.grid(cfg)?,
                &common.radii(&cfg.radii)?,
                render,
            )
        }
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::PARSE
            } else {
                exit::PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let result = Config::from_env().and_then(|cfg| {
        let outcome = execute(&cli.command, &cfg)?;
        let json = outcome.certificate.to_json();
        if let Some(dir) = &common(&cli.command).out {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            let path = dir.join(format!("{}.json", outcome.certificate.command));
            std::fs::write(&path, &json).map_err(|e| CliError::io(path, e))?;
        }
        Ok((outcome, json))
    });
    match result {
        Ok((outcome, json)) => {
            let _ = if common(&cli.command).json {
                write!(stdout, "{json}")
            } else {
                writeln!(stdout, "{}", outcome.summary)
            };
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "polyharm: {e}");
            e.exit_code()
        }
    }
}
