use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use superrad_cli::{config, list_presets, preset, render, run_with_threads, CliError, Format, Scenario};

#[derive(Parser)]
#[command(name = "superrad", version, about = "Collective emission sweeps with and without the rotating-wave approximation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for the sweep.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a built-in scenario.
    Preset {
        name: String,
        #[command(flatten)]
        output: OutputArgs,
        /// Print the preset's scenario file instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// List the built-in scenarios.
    ListPresets,
}

fn execute(scenario: &Scenario, args: &OutputArgs) -> Result<(), CliError> {
    let out = run_with_threads(scenario, args.threads)?;
    emit(&render(scenario, &out, args.format), args.out.as_ref())
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config: path, output } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            execute(&config::parse(&text)?, &output)
        }
        Command::Preset {
            name,
            output,
            print_config,
        } => {
            let scenario = preset(&name).ok_or_else(|| {
                CliError::Config(format!("unknown preset `{name}` (see `superrad list-presets`)"))
            })?;
            if print_config {
                let mut text = config::to_json(&scenario);
                text.push('\n');
                emit(&text, output.out.as_ref())
            } else {
                execute(&scenario, &output)
            }
        }
        Command::ListPresets => {
            let width = list_presets().iter().map(|(n, _)| n.len()).max().unwrap_or(0);
            for (name, desc) in list_presets() {
                println!("{name:width$}  {desc}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("superrad: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
