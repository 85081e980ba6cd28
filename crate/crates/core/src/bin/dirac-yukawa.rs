use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dirac_yukawa::commands::{self, is_input_error};
use dirac_yukawa::config::{load_model, Model, ModelConfig};
use dirac_yukawa::lattice_dirac::io::{dump_operator, spectrum_csv};
use dirac_yukawa::report::Report;
use dirac_yukawa::{models, Error, Result};

#[derive(Parser)]
#[command(name = "dirac-yukawa", version, about = "Fermion masses from Higgs vacua and lattice Dirac-Yukawa operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the model: Clifford identities, representations, equivariance.
    Check(Common),
    /// Minimize the Higgs potential; isotropy and Goldstone split.
    Break(Common),
    /// Mass matrix, eigenbundles and the lemma clauses.
    Masses(Common),
    /// Lattice operators, spectra, potential, curvature and gauge checks.
    Lattice {
        #[command(flatten)]
        common: Common,
        /// Write operator dumps (JSON) into this directory.
        #[arg(long)]
        dump_operators: Option<PathBuf>,
    },
    /// Everything; exit code 0 iff every check passes.
    VerifyAll(Common),
    /// Write a built-in model as TOML.
    ExportModel {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Model file, or the name of a built-in model (e.g. ew-reference).
    #[arg(long)]
    model: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Multiply every tolerance by this factor.
    #[arg(long)]
    tol_scale: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn resolve(spec: &str) -> Result<ModelConfig> {
    let path = Path::new(spec);
    if path.exists() {
        return load_model(path);
    }
    models::registry(spec).ok_or_else(|| Error::Config {
        location: spec.to_string(),
        message: format!("no such file or built-in model (built-ins: {})", models::names().join(", ")),
    })
}

fn build(common: &Common) -> Result<Model> {
    let mut model = resolve(&common.model)?.build()?;
    if let Some(f) = common.tol_scale {
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::InvalidArgument(format!("--tol-scale must be positive, got {f}")));
        }
        model.tol = model.tol.scaled(f);
    }
    Ok(model)
}

fn checks_csv(report: &Report) -> String {
    let mut out = String::from("name,value,tolerance,relation,pass\n");
    for c in &report.checks {
        let rel = match c.relation {
            dirac_yukawa::report::Relation::Le => "le",
            dirac_yukawa::report::Relation::Ge => "ge",
        };
        out.push_str(&format!("{},{:.16e},{:.16e},{rel},{}\n", c.name, c.value, c.tolerance, c.pass));
    }
    out
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn finish(report: &Report, common: &Common) -> Result<ExitCode> {
    let text = match common.format {
        Format::Json => report.to_json()?,
        Format::Csv => match report.spectra.get("dirac_squared") {
            Some(s) => spectrum_csv(s),
            None => checks_csv(report),
        },
    };
    emit(&text, common.out.as_deref())?;
    for c in report.failed_checks() {
        eprintln!("FAIL {}: {:.3e} (tolerance {:.1e})", c.name, c.value, c.tolerance);
    }
    for e in &report.errors {
        eprintln!("FAIL {e}");
    }
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn dump(model: &Model, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let setup = commands::lattice_setup(model)?;
    std::fs::write(dir.join("vacuum_dirac.json"), dump_operator(&setup.dirac)?)?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check(c) => finish(&commands::cmd_check(&build(&c)?)?, &c),
        Command::Break(c) => finish(&commands::cmd_break(&build(&c)?)?, &c),
        Command::Masses(c) => finish(&commands::cmd_masses(&build(&c)?)?, &c),
        Command::Lattice { common, dump_operators } => {
            let model = build(&common)?;
            let report = commands::cmd_lattice(&model)?;
            if let Some(dir) = dump_operators {
                dump(&model, &dir)?;
            }
            finish(&report, &common)
        }
        Command::VerifyAll(c) => finish(&commands::cmd_verify_all(&build(&c)?)?, &c),
        Command::ExportModel { name, out } => {
            let cfg = models::registry(&name).ok_or_else(|| Error::Config {
                location: name.clone(),
                message: format!("unknown built-in model (built-ins: {})", models::names().join(", ")),
            })?;
            emit(&cfg.to_toml()?, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if is_input_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
