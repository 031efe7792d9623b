use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hardy_products::campaign::{cmd_norm, cmd_split, cmd_validate, CampaignConfig, CliResult};

#[derive(Parser)]
#[command(name = "lab", about = "Norms, atom validation and product-split campaigns on sampled grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one norm and write norm_report.json.
    Norm {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a split campaign and write split_rows.csv and split_summary.json.
    Split {
        #[arg(long)]
        config: PathBuf,
    },
    /// Validate the atoms of a decomposition file and write validate_report.json.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Norm { config } => {
            let out = cmd_norm(&CampaignConfig::load(config)?)?;
            println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
        }
        Command::Split { config } => {
            let out = cmd_split(&CampaignConfig::load(config)?)?;
            println!("{}", serde_json::to_string_pretty(&out.summary).expect("report serializes"));
        }
        Command::Validate { config } => {
            let out = cmd_validate(&CampaignConfig::load(config)?)?;
            print!("{}", out.table());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
