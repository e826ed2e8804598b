use std::f64::consts::FRAC_PI_4;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsl::{exit, exit_code, run_sweep_parallel, write_sweep_csv, ComputeRecord};
use qsl_core::dephasing::DephasingSpec;
use qsl_core::qslt::{relativistic_qslt, unified_qslt, ActiveBound, EvolutionWindow, QsltProblem};
use qsl_core::relativity::{chi_mc_oracle, BoostedPacketSpec};
use qsl_core::sweep::{linspace, preset, Curve, Preset, SweepSpec, SweepVariable, SUPER_OHMIC_N};
use qsl_core::{Error, Tolerance};

#[derive(Parser)]
#[command(
    name = "qsl",
    version,
    about = "Quantum speed limit of a boosted spin-1/2 packet under dephasing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single parameter point.
    Compute(ComputeArgs),
    /// Tabulate the speed limit along one variable, or reproduce a preset.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Physics {
    /// Bath coupling strength.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Bath cutoff frequency.
    #[arg(long = "omega-c", default_value_t = 1.0)]
    omega_c: f64,
    /// Rapidity magnitude; `inf` for the infinite boost.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Mean momentum over mass.
    #[arg(long = "K", default_value_t = 1.0)]
    k: f64,
    /// Packet width over mass.
    #[arg(long = "W", default_value_t = 4.0)]
    w: f64,
    /// Spin polar angle in radians (default pi/4).
    #[arg(long, conflicts_with = "theta_deg")]
    theta: Option<f64>,
    /// Spin polar angle in degrees.
    #[arg(long = "theta-deg")]
    theta_deg: Option<f64>,
    /// Window start; `inf` for the stationary limit.
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    #[arg(long = "delta-tau", default_value_t = 1.0)]
    delta_tau: f64,
}

impl Physics {
    fn theta(&self) -> f64 {
        match (self.theta, self.theta_deg) {
            (Some(t), _) => t,
            (None, Some(d)) => d.to_radians(),
            (None, None) => FRAC_PI_4,
        }
    }

    fn packet(&self) -> Result<BoostedPacketSpec, Error> {
        BoostedPacketSpec::new(self.theta(), self.k, self.w, self.alpha)
    }
}

#[derive(Args)]
struct Tol {
    #[arg(long = "tol-rel", default_value_t = Tolerance::default().rel)]
    tol_rel: f64,
    #[arg(long = "tol-abs", default_value_t = Tolerance::default().abs)]
    tol_abs: f64,
}

impl Tol {
    fn get(&self) -> Result<Tolerance, Error> {
        Tolerance::new(self.tol_rel, self.tol_abs)
    }
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ComputeArgs {
    /// Bath ohmicity n.
    #[arg(long, default_value_t = 1.0)]
    ohmicity: f64,
    #[command(flatten)]
    physics: Physics,
    #[command(flatten)]
    tol: Tol,
    /// Also estimate chi by Monte-Carlo with this many samples.
    #[arg(long = "mc-samples")]
    mc_samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    /// Figure preset: fig1, fig2a, fig2b, fig3a or fig3b.
    #[arg(long, conflicts_with_all = ["var", "from", "to", "points"], required_unless_present = "var")]
    preset: Option<String>,
    /// Swept variable: tau, alpha or width.
    #[arg(long, requires_all = ["from", "to", "points"])]
    var: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Ohmicity of the second bath column.
    #[arg(long = "super-ohmicity", default_value_t = SUPER_OHMIC_N)]
    super_ohmicity: f64,
    #[command(flatten)]
    physics: Physics,
    #[command(flatten)]
    tol: Tol,
    /// Worker threads; 0 picks one per core. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Core(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn compute(args: &ComputeArgs) -> Result<i32, Failure> {
    let tol = args.tol.get()?;
    let bath = DephasingSpec::new(args.physics.eta, args.physics.omega_c, args.ohmicity)?;
    let packet = args.physics.packet()?;
    let window = EvolutionWindow::new(args.physics.tau, args.physics.delta_tau)?;
    let problem = QsltProblem::from_packet(bath, &packet, window, tol)?;

    let (qslt, bound) = if window.is_finite() {
        let bound = unified_qslt(&problem, tol)?.active_bound;
        (relativistic_qslt(&problem, tol)?, bound)
    } else {
        (problem.markovian(tol)?, ActiveBound::Ml)
    };
    let chi_mc = match args.mc_samples {
        Some(n) => {
            let r = chi_mc_oracle(&packet, n, args.seed)?;
            Some((r.value, r.error_estimate))
        }
        None => None,
    };
    let record = ComputeRecord {
        chi: problem.chi,
        p_tau: problem.p_tau(tol)?,
        p_t: problem.p_end(tol)?,
        qslt,
        active_bound: bound.as_str(),
        tol,
        chi_mc,
    };
    let text = match args.format {
        Format::Csv => record.to_csv(),
        Format::Json => record.to_json(),
    };
    let mut w = sink(&args.out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(exit::OK)
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec, Failure> {
    let tol = args.tol.get()?;
    if let Some(tag) = &args.preset {
        let tag = Preset::parse(tag).ok_or_else(|| Failure::Usage(format!("unknown preset `{tag}`")))?;
        let mut spec = preset(tag);
        spec.tol = tol;
        return Ok(spec);
    }
    let var = args.var.as_deref().expect("clap enforces --var or --preset");
    let variable = SweepVariable::parse(var)?;
    let (from, to, points) = (args.from.unwrap(), args.to.unwrap(), args.points.unwrap());
    if points == 0 || !from.is_finite() || !to.is_finite() {
        return Err(Failure::Usage(
            "grid needs finite --from/--to and --points >= 1".into(),
        ));
    }
    let p = &args.physics;
    let ohmic = DephasingSpec::ohmic(p.eta, p.omega_c)?;
    let super_ohmic = DephasingSpec::new(p.eta, p.omega_c, args.super_ohmicity)?;
    let curve = Curve {
        packet: p.packet()?,
        window: EvolutionWindow::new(p.tau, p.delta_tau)?,
    };
    let spec = SweepSpec {
        variable,
        grid: linspace(from, to, points),
        ohmic,
        super_ohmic,
        curves: vec![curve],
        tol,
        preset: None,
    };
    spec.validate()?;
    Ok(spec)
}

fn sweep(args: &SweepArgs) -> Result<i32, Failure> {
    let spec = sweep_spec(args)?;
    let table = run_sweep_parallel(&spec, args.threads)?;
    let mut w = sink(&args.out)?;
    write_sweep_csv(&table, &mut w)?;
    w.flush()?;
    let failed = table.rows.iter().filter(|r| r.flags.error).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {} rows failed", table.rows.len());
    }
    Ok(if failed == table.rows.len() {
        exit::CONVERGENCE
    } else {
        exit::OK
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Sweep(a) => sweep(a),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            exit::INVALID_INPUT
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            1
        }
    };
    ExitCode::from(code as u8)
}
