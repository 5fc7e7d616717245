use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use feq_core::cases::list_cases;
use feq_core::characters::{character_group, find_character};
use feq_core::feq::Mode;
use feq_core::modular::{
    delta_coefficients, eisenstein4_coefficients, eta_product_11, theta_coefficients, twist_coefficients,
};
use feq_core::c64;
use feqtool::report::print_summary;
use feqtool::{exit_code, run, CliError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "feqtool", version, about = "Verify Mellin-transform functional equations numerically")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the case registry.
    List,
    /// Verify cases and write reports.
    Run(RunArgs),
    /// Print q-expansion coefficients as CSV.
    Coeffs {
        #[arg(value_enum)]
        form: Form,
        /// Largest index n.
        #[arg(long, default_value_t = 50)]
        n: usize,
    },
    /// Print every Dirichlet character of a modulus as JSON.
    Characters {
        #[arg(long)]
        modulus: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Delta,
    E4,
    Theta,
    Eta11,
    Twist,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Comma-separated case ids; default all.
    #[arg(long, value_delimiter = ',')]
    cases: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the default tolerance of every route.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    no_timestamp: bool,
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: feq_core::Error| e.to_string())
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(c) = self.cases {
            cfg.cases = c.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        }
        if let Some(o) = self.out {
            cfg.out = o;
        }
        if self.tol.is_some() {
            cfg.tol = self.tol;
        }
        if self.mode.is_some() {
            cfg.mode = self.mode;
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        cfg.no_timestamp |= self.no_timestamp;
        Ok(cfg)
    }
}

fn cmd_list() -> Result<i32, CliError> {
    let rows = list_cases()?;
    let mut out = std::io::stdout().lock();
    let io = |e| CliError::Io { path: "stdout".into(), message: format!("{e}") };
    writeln!(out, "{:<14} {:<12} {:>5} {:<11} anchor", "id", "kind", "k", "mode").map_err(io)?;
    for r in rows {
        writeln!(out, "{:<14} {:<12} {:>5} {:<11} {}", r.id, r.kind.name(), r.k, r.mode.name(), r.anchor).map_err(io)?;
    }
    Ok(0)
}

fn cmd_run(args: RunArgs) -> Result<i32, CliError> {
    let cfg = args.into_config()?;
    let outcome = run(&cfg)?;
    let mut out = std::io::stdout().lock();
    print_summary(&mut out, &outcome.rows).map_err(|e| CliError::io(std::path::Path::new("stdout"), e))?;
    let worst = outcome.worst();
    writeln!(out, "{} cases, worst verdict {}, reports in {}", outcome.reports.len(), worst.name(), cfg.out.display())
        .map_err(|e| CliError::io(std::path::Path::new("stdout"), e))?;
    Ok(exit_code(worst))
}

fn cmd_coeffs(form: Form, n: usize) -> Result<i32, CliError> {
    let series = match form {
        Form::Delta => delta_coefficients(n)?,
        Form::E4 => eisenstein4_coefficients(n)?,
        Form::Theta => theta_coefficients(n)?,
        Form::Eta11 => eta_product_11(n)?,
        Form::Twist => {
            let psi = find_character(5, &[(2, c64(-1.0, 0.0))])?;
            twist_coefficients(&delta_coefficients(n)?, &psi)
        }
    };
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    let path = std::path::Path::new("stdout");
    w.write_record(["n", "re", "im"]).map_err(|e| CliError::csv(path, e))?;
    for (k, re, im) in series.rows() {
        w.serialize((k, re, im)).map_err(|e| CliError::csv(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(0)
}

fn cmd_characters(modulus: u64) -> Result<i32, CliError> {
    let group = character_group(modulus)?;
    let reprs: Vec<_> = group.iter().map(|c| c.to_repr()).collect();
    let text = serde_json::to_string_pretty(&reprs).map_err(|e| CliError::Engine(e.to_string()))?;
    println!("{text}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::List => cmd_list(),
        Command::Run(args) => cmd_run(args),
        Command::Coeffs { form, n } => cmd_coeffs(form, n),
        Command::Characters { modulus } => cmd_characters(modulus),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("feqtool: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
