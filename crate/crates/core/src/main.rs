use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use omc_repeater::bellprep::{self, PrepParams};
use omc_repeater::dynamics;
use omc_repeater::effham::{self, EffectiveHamiltonian};
use omc_repeater::fock::FockSpace;
use omc_repeater::oracle;
use omc_repeater::params::derived_frequencies;
use omc_repeater::runner::output::{self, format_number};
use omc_repeater::runner::{run_scenario, ConfigError, ScenarioConfig};

#[derive(Parser)]
#[command(name = "omc-repeater", version, about = "Entanglement swapping between ions in optomechanical cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its dataset.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Output CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every value of `sweep_field`, one CSV per value.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// File name stem (defaults to the config file stem).
        #[arg(long)]
        stem: Option<String>,
    },
    /// Print S(t), its derivation from the full commutators, and the term inventory.
    Effham {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Truncations `d_a,d_b,d_c`.
        #[arg(long, default_value = "3,3,2")]
        dims: String,
    },
    /// Compare the effective dynamics against the full truncated model.
    OracleCompare {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value = "3,3,2")]
        dims: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Concurrence during Bell-pair preparation in an ordinary cavity.
    PrepBell {
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Horizon (defaults to twice the preparation time).
        #[arg(long = "t_max")]
        t_max: Option<f64>,
        #[arg(long = "n_steps", default_value_t = 200)]
        n_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "g2")]
    g2: Option<String>,
    #[arg(long = "g3")]
    g3: Option<String>,
    #[arg(long = "E_P")]
    e_p: Option<String>,
    #[arg(long = "G")]
    g_om: Option<String>,
    #[arg(long = "omega_c")]
    omega_c: Option<String>,
    #[arg(long = "omega_M")]
    omega_m: Option<String>,
    #[arg(long = "nu")]
    nu: Option<String>,
    #[arg(long = "omega_0")]
    omega_0: Option<String>,
    #[arg(long = "omega_P")]
    omega_p: Option<String>,
    #[arg(long = "t_max")]
    t_max: Option<String>,
    #[arg(long = "n_steps")]
    n_steps: Option<String>,
    #[arg(long = "outcome_i")]
    outcome_i: Option<String>,
    #[arg(long = "outcome_j")]
    outcome_j: Option<String>,
    #[arg(long = "bell")]
    bell: Option<String>,
    #[arg(long = "sweep_field")]
    sweep_field: Option<String>,
    #[arg(long = "sweep_values")]
    sweep_values: Option<String>,
}

impl ScenarioArgs {
    fn overrides(&self) -> Vec<(String, String)> {
        [
            ("g2", &self.g2),
            ("g3", &self.g3),
            ("E_P", &self.e_p),
            ("G", &self.g_om),
            ("omega_c", &self.omega_c),
            ("omega_M", &self.omega_m),
            ("nu", &self.nu),
            ("omega_0", &self.omega_0),
            ("omega_P", &self.omega_p),
            ("t_max", &self.t_max),
            ("n_steps", &self.n_steps),
            ("outcome_i", &self.outcome_i),
            ("outcome_j", &self.outcome_j),
            ("bell", &self.bell),
            ("sweep_field", &self.sweep_field),
            ("sweep_values", &self.sweep_values),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
        .collect()
    }

    fn load(&self) -> Result<ScenarioConfig, Failure> {
        Ok(ScenarioConfig::load(self.config.as_deref(), &self.overrides())?)
    }
}

enum Failure {
    Config(ConfigError),
    Numerical(omc_repeater::Error),
    Io(io::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<omc_repeater::Error> for Failure {
    fn from(e: omc_repeater::Error) -> Self {
        Failure::Numerical(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn config_error(field: &str, message: &str) -> Failure {
    Failure::Config(ConfigError { field: field.into(), message: message.into() })
}

fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_dims(s: &str) -> Result<FockSpace, Failure> {
    let d: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| config_error("dims", &format!("`{s}` is not d_a,d_b,d_c"))))
        .collect::<Result<_, _>>()?;
    if d.len() != 3 {
        return Err(config_error("dims", &format!("`{s}` is not d_a,d_b,d_c")));
    }
    FockSpace::new(d[0], d[1], d[2]).map_err(|e| config_error("dims", &e.to_string()))
}

fn simulate(args: &ScenarioArgs, out: Option<&Path>) -> Result<(), Failure> {
    let cfg = args.load()?;
    if cfg.sweep.is_some() {
        return Err(config_error("sweep_field", "sweeps run with the `sweep` subcommand"));
    }
    let ds = run_scenario(&cfg)?.remove(0);
    let mut w = sink(out)?;
    output::write_csv(&mut w, &ds.rows)?;
    w.flush()?;
    output::write_summary(io::stderr().lock(), &ds.summary())?;
    Ok(())
}

fn sweep(args: &ScenarioArgs, out_dir: &Path, stem: Option<&str>) -> Result<(), Failure> {
    let cfg = args.load()?;
    let Some(sw) = cfg.sweep.clone() else {
        return Err(config_error("sweep_field", "required by the `sweep` subcommand"));
    };
    let stem = stem
        .map(str::to_string)
        .or_else(|| args.config.as_ref().and_then(|p| p.file_stem()).map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "scenario".into());
    std::fs::create_dir_all(out_dir)?;
    for ds in run_scenario(&cfg)? {
        let value = ds.sweep_value.expect("sweep point");
        let path = output::sweep_file_name(out_dir, &stem, &sw.field, value);
        let mut w = BufWriter::new(File::create(&path)?);
        output::write_csv(&mut w, &ds.rows)?;
        w.flush()?;
        let mut err = io::stderr().lock();
        writeln!(err, "{}", path.display())?;
        output::write_summary(&mut err, &ds.summary())?;
    }
    Ok(())
}

fn print_matrix<W: Write>(w: &mut W, m: &ndarray::Array2<num_complex::Complex64>) -> io::Result<()> {
    for row in m.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|z| {
                let sign = if z.im < 0.0 { '-' } else { '+' };
                format!("{:>24}", format!("{}{}{}i", format_number(z.re), sign, format_number(z.im.abs())))
            })
            .collect();
        writeln!(w, "{}", cells.join(" "))?;
    }
    Ok(())
}

fn print_effham(args: &ScenarioArgs, t: f64, dims: &str) -> Result<(), Failure> {
    let cfg = args.load()?;
    let space = parse_dims(dims)?;
    let p = cfg.params;
    let freqs = derived_frequencies(&p)?;
    let s = dynamics::s_matrix(&p, t)?;
    let h = EffectiveHamiltonian::new(&effham::harmonic_terms(&p, &space)?, &freqs)?;
    let block = effham::vacuum_block(&h.at(t))?;

    let mut w = io::stdout().lock();
    writeln!(w, "detunings ω1..ω4: {}", freqs.omega.map(format_number).join(", "))?;
    writeln!(w, "\nS(t) at t = {} (rows Φ1..Φ4 = G2E3, E2G3, E2E3, G2G3):", format_number(t))?;
    print_matrix(&mut w, &s)?;
    writeln!(w, "\nvacuum block of the commutator sum on {:?}:", space.dims())?;
    print_matrix(&mut w, &block)?;
    let diff = omc_repeater::linalg::max_abs_diff(&s.view(), &block.view());
    writeln!(w, "max |S − block| = {}", format_number(diff))?;
    writeln!(w, "dropped scalar offset −E_P²/ω44 = {}", format_number(h.scalar_offset))?;
    writeln!(w, "\n{:<18} {:<18} {:>14} {:>14} {:>14} {:>14}", "m", "n", "1/ω_mn", "ω_m−ω_n", "‖[h_m†,h_n]‖", "vacuum max")?;
    for r in effham::inventory(&h) {
        writeln!(
            w,
            "{:<18} {:<18} {:>14} {:>14} {:>14} {:>14}",
            r.m.label(),
            r.n.label(),
            format_number(r.weight),
            format_number(r.beat),
            format_number(r.norm),
            format_number(r.vacuum_max)
        )?;
    }
    Ok(())
}

fn oracle_compare(args: &ScenarioArgs, dims: &str, out: Option<&Path>) -> Result<(), Failure> {
    let cfg = args.load()?;
    let space = parse_dims(dims)?;
    let report = oracle::compare_to_effective(&cfg.params, &space, &cfg.grid())?;
    let mut w = sink(out)?;
    output::write_table(&mut w, &["t", "deviation", "leakage"], report.samples.iter().map(|s| vec![s.t, s.deviation, s.leakage]))?;
    w.flush()?;
    Ok(())
}

fn prep_bell(g: f64, delta: f64, t_max: Option<f64>, n_steps: usize, out: Option<&Path>) -> Result<(), Failure> {
    if !(g.is_finite() && g > 0.0) {
        return Err(config_error("g", "must be positive"));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(config_error("delta", "must be positive"));
    }
    if n_steps < 2 {
        return Err(config_error("n_steps", "must be at least 2"));
    }
    let p = PrepParams::new(g, delta);
    let t_max = t_max.unwrap_or(2.0 * bellprep::prep_time(&p));
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(config_error("t_max", "must be positive"));
    }
    let mut w = sink(out)?;
    output::write_table(&mut w, &["t", "C"], bellprep::prep_trajectory(&p, t_max, n_steps).into_iter().map(|(t, c)| vec![t, c]))?;
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { scenario, out } => simulate(scenario, out.as_deref()),
        Command::Sweep { scenario, out_dir, stem } => sweep(scenario, out_dir, stem.as_deref()),
        Command::Effham { scenario, t, dims } => print_effham(scenario, *t, dims),
        Command::OracleCompare { scenario, dims, out } => oracle_compare(scenario, dims, out.as_deref()),
        Command::PrepBell { g, delta, t_max, n_steps, out } => prep_bell(*g, *delta, *t_max, *n_steps, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(1)
        }
    }
}
