use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use labstate::labstate::fmt_sig;
use labstate::network::{self, BombKind, EvSetting, Scenario, Sweeps};
use labstate::scenario::parse_scenario;
use labstate::{bits, verify, Error, Rat};

#[derive(Parser)]
#[command(
    name = "labstate",
    version,
    about = "Exact labstate simulator for optical networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in scenario (ev-dud, ev-active, hardy).
    Run {
        scenario: String,
        /// Stop after this many stages.
        #[arg(long)]
        stage: Option<usize>,
        /// Print decimals (12 significant digits) instead of exact values.
        #[arg(long)]
        float: bool,
    },
    /// Check the computed results against the expected exact values.
    Verify { block: Block },
    /// Print the product table of the four basic bit operators.
    Table,
    /// Outcome probabilities of the bomb tester for a mixed batch.
    Ev {
        /// Fraction of active bombs in the batch.
        #[arg(long = "omega-a", default_value = "1")]
        omega_a: Rat,
    },
    /// Fraction of a bomb stockpile certified after repeated sweeps.
    Stockpile {
        #[arg(long, conflicts_with = "limit")]
        sweeps: Option<u32>,
        #[arg(long)]
        limit: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Block {
    Ev,
    Hardy,
    Bitops,
    Flows,
    All,
}

type Failure = Box<dyn std::error::Error>;

fn load(name: &str) -> Result<Scenario, Failure> {
    match name {
        "ev-dud" => Ok(network::ev_scenario(BombKind::Dud)),
        "ev-active" => Ok(network::ev_scenario(BombKind::Active)),
        "hardy" => Ok(network::hardy_scenario()),
        path => {
            let text = std::fs::read_to_string(PathBuf::from(path))
                .map_err(|e| format!("cannot read {path}: {e}"))?;
            Ok(parse_scenario(&text)?)
        }
    }
}

fn show(p: &Rat, float: bool) -> String {
    if float {
        fmt_sig(p.to_f64())
    } else {
        p.to_string()
    }
}

fn cmd_run(name: &str, stage: Option<usize>, float: bool) -> Result<(), Failure> {
    let sc = load(name)?;
    sc.validate()?;
    let run = sc.run(stage)?;
    for (i, state) in run.states.iter().enumerate() {
        let label = if i == 0 {
            "init".to_string()
        } else {
            sc.stages[i - 1].0.clone()
        };
        let body = if float {
            state.render_float()
        } else {
            state.to_string()
        };
        println!("{label}: {body}");
    }
    for (name, p) in &run.probabilities {
        println!("P({name}) = {}", show(p, float));
    }
    Ok(())
}

fn cmd_verify(block: Block) -> Result<bool, Error> {
    let names: Vec<&str> = match block {
        Block::Ev => vec!["ev"],
        Block::Hardy => vec!["hardy"],
        Block::Bitops => vec!["bitops"],
        Block::Flows => vec!["flows"],
        Block::All => verify::BLOCKS.to_vec(),
    };
    let mut ok = true;
    for name in names {
        let report = verify::run_block(name)?;
        println!("{report}");
        if let Some(fail) = report.first_failure() {
            eprintln!(
                "first failure: {}: {} ({})",
                report.block, fail.name, fail.detail
            );
            ok = false;
        }
    }
    Ok(ok)
}

fn dispatch(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Run {
            scenario,
            stage,
            float,
        } => cmd_run(&scenario, stage, float).map(|_| true),
        Command::Verify { block } => Ok(cmd_verify(block)?),
        Command::Table => {
            print!("{}", bits::render_product_table(&bits::BASIC_FOUR));
            Ok(true)
        }
        Command::Ev { omega_a } => {
            let r = network::run_ev(&EvSetting::Mixture(omega_a))?;
            println!("P(Explode) = {}", r.explode);
            println!("P(D6) = {}", r.d6);
            println!("P(D7) = {}", r.d7);
            Ok(true)
        }
        Command::Stockpile { sweeps, limit } => {
            let s = match (sweeps, limit) {
                (_, true) => Sweeps::Limit,
                (Some(n), false) => Sweeps::Count(n),
                (None, false) => Sweeps::Count(1),
            };
            println!("{}", network::stockpile_yield(s)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
