//! Command-line front end for `mixmult`.

pub mod commands;
pub mod input;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use mixmult_core::field::CoefficientField;
use mixmult_core::harness::{FuzzConfig, ReportError};
use mixmult_core::Error;

use commands::{execute, CommandKind, CommandOutput, Settings, Status};
use input::{parse_input, ProblemSpec, TypeSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNVERIFIED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mixmult", version, about = "Mixed multiplicities and joint reductions of monomial ideals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Problem file, or '-' for standard input.
    pub input: Option<PathBuf>,
    /// Type vector k1,..,ks;k0+1 (or k1,..,ks for verify-rees).
    #[arg(long = "type", value_name = "TYPE", allow_hyphen_values = false)]
    pub mixed_type: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// One JSON record per line.
    #[arg(long)]
    pub json: bool,
    /// Rerun over the rationals and require the same results.
    #[arg(long)]
    pub field_check: bool,
    /// Width of the exponent window for the large-n checks.
    #[arg(long)]
    pub window: Option<u32>,
    /// Starting offset N for interpolation and the window.
    #[arg(long)]
    pub offset: Option<u32>,
    /// Include wall-clock timings in reports.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Mixed multiplicities from the Bhattacharya polynomial.
    MixedMult(Common),
    /// Hilbert-Samuel multiplicity of one ideal on A/H.
    Multiplicity {
        #[command(flatten)]
        common: Common,
        /// Ideal to measure (default J).
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Draw a superficial sequence and report all conditions.
    Superficial(Common),
    /// Draw a sequence and check the joint-reduction identity.
    JointReduction(Common),
    /// Compare the mixed multiplicity with the multiplicity of a joint reduction.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Certify only the superficial sequence and the parameter property.
        #[arg(long)]
        superficial_only: bool,
    },
    /// The m-primary case: every ideal in declaration order, plain tally type.
    VerifyRees(Common),
    /// Seeded random campaign of main-identity checks.
    Fuzz {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50)]
        trials: u32,
        /// Largest number of variables (2 or 3).
        #[arg(long, default_value_t = 3)]
        vars: usize,
        /// Largest generator degree.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Largest number of I-ideals.
        #[arg(long, default_value_t = 2)]
        max_s: usize,
        /// Keep H = 0.
        #[arg(long)]
        no_module: bool,
    },
    /// Run the command named by the input's `command` line.
    Run(Common),
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Core(Error),
    Message(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn report(&self) -> ReportError {
        match self {
            Failure::Core(e) => ReportError::from(e),
            Failure::Message(kind, message) => ReportError { kind: kind.clone(), message: message.clone() },
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// `read` loads the input path (`-` is passed through for stdin).
pub fn run<I, T>(args: I, read: impl Fn(&PathBuf) -> std::io::Result<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let (common, json_mode) = {
        let c = common(&cli.command);
        (c.clone(), c.json)
    };
    match dispatch(&cli.command, &common, read) {
        Ok(outputs) => render(outputs, json_mode),
        Err(f) => {
            let e = f.report();
            let stderr = format!("error[{}]: {}\n", e.kind, e.message);
            let stdout = if json_mode {
                format!("{}\n", json!({ "error": { "kind": e.kind, "message": e.message } }))
            } else {
                String::new()
            };
            Outcome { code: EXIT_ERROR, stdout, stderr }
        }
    }
}

fn common(c: &Command) -> &Common {
    match c {
        Command::MixedMult(c)
        | Command::Superficial(c)
        | Command::JointReduction(c)
        | Command::VerifyRees(c)
        | Command::Run(c) => c,
        Command::Multiplicity { common, .. } | Command::Verify { common, .. } | Command::Fuzz { common, .. } => common,
    }
}

fn load(common: &Common, read: &impl Fn(&PathBuf) -> std::io::Result<String>) -> Result<ProblemSpec, Failure> {
    let path = common
        .input
        .as_ref()
        .ok_or_else(|| Failure::Message("Usage".into(), "an input file is required".into()))?;
    let text = read(path).map_err(|e| Failure::Message("Io".into(), format!("{}: {e}", path.display())))?;
    parse_input(&text).map_err(|e| Failure::Message("ParseError".into(), e.to_string()))
}

fn dispatch(
    command: &Command,
    common: &Common,
    read: impl Fn(&PathBuf) -> std::io::Result<String>,
) -> Result<Vec<(CommandOutput, Option<CommandOutput>)>, Failure> {
    let spec = match (command, &common.input) {
        (Command::Fuzz { .. }, None) => None,
        _ => Some(load(common, &read)?),
    };
    let kind = match command {
        Command::MixedMult(_) => CommandKind::MixedMult,
        Command::Multiplicity { .. } => CommandKind::Multiplicity,
        Command::Superficial(_) => CommandKind::Superficial,
        Command::JointReduction(_) => CommandKind::JointReduction,
        Command::Verify { .. } => CommandKind::Verify,
        Command::VerifyRees(_) => CommandKind::VerifyRees,
        Command::Fuzz { .. } => CommandKind::Fuzz,
        Command::Run(_) => {
            let name = spec.as_ref().and_then(|s| s.command.clone()).ok_or_else(|| {
                Failure::Message("Usage".into(), "the input has no 'command' line".into())
            })?;
            CommandKind::from_name(&name)
                .ok_or_else(|| Failure::Message("Usage".into(), format!("unknown command '{name}'")))?
        }
    };
    let settings = settings(command, common, spec.as_ref())?;
    let empty = ProblemSpec {
        field: CoefficientField::Prime { p: mixmult_core::field::DEFAULT_PRIME },
        vars: vec!["x".into()],
        ideals: Vec::new(),
        module_name: "H".into(),
        module: Vec::new(),
        command: None,
        mixed_type: None,
        seed: None,
        window: None,
        offset: None,
    };
    let spec = spec.unwrap_or(empty);
    let primary = execute(kind, &spec, &settings, spec.field)?;
    let check = if common.field_check && spec.field != CoefficientField::Rationals {
        let again = execute(kind, &spec, &settings, CoefficientField::Rationals)?;
        if again.key != primary.key {
            return Err(Failure::Core(Error::FieldArtifact(format!(
                "results over {} ({}) differ from results over Q ({})",
                spec.field,
                primary.key,
                again.key
            ))));
        }
        Some(again)
    } else {
        None
    };
    Ok(vec![(primary, check)])
}

fn settings(command: &Command, common: &Common, spec: Option<&ProblemSpec>) -> Result<Settings, Failure> {
    let defaults = Settings::default();
    let mut s = Settings {
        mixed_type: match &common.mixed_type {
            Some(t) => Some(t.parse::<TypeSpec>()?),
            None => spec.and_then(|p| p.mixed_type.clone()),
        },
        seed: common.seed.or(spec.and_then(|p| p.seed)).unwrap_or(0),
        window: common.window.or(spec.and_then(|p| p.window)).unwrap_or(defaults.window),
        offset: common.offset.or(spec.and_then(|p| p.offset)),
        timings: common.timings,
        ..defaults
    };
    match command {
        Command::Multiplicity { ideal, .. } => s.ideal = ideal.clone(),
        Command::Verify { superficial_only, .. } => s.superficial_only = *superficial_only,
        Command::Fuzz { trials, vars, degree, max_s, no_module, .. } => {
            s.fuzz = FuzzConfig { trials: *trials, max_vars: *vars, max_degree: *degree, max_s: *max_s, module: !no_module };
        }
        _ => {}
    }
    Ok(s)
}

fn render(outputs: Vec<(CommandOutput, Option<CommandOutput>)>, json_mode: bool) -> Outcome {
    let mut stdout = String::new();
    let mut stderr = String::new();
    let mut code = EXIT_OK;
    for (out, check) in outputs {
        if json_mode {
            for r in &out.records {
                stdout.push_str(&r.to_string());
                stdout.push('\n');
            }
            if check.is_some() {
                stdout.push_str(&json!({ "command": "field-check", "agreed": true, "compared": out.key }).to_string());
                stdout.push('\n');
            }
        } else {
            stdout.push_str(&out.human);
            if check.is_some() {
                stdout.push_str("field check: results over Q agree\n");
            }
        }
        match &out.status {
            Status::Success => {}
            Status::Unverified => code = code.max(EXIT_UNVERIFIED),
            Status::Failed(e) => {
                stderr.push_str(&format!("error[{}]: {}\n", e.kind, e.message));
                code = EXIT_ERROR;
            }
        }
    }
    Outcome { code, stdout, stderr }
}
