//! `t3lab`: exact matchings, links, and independence-complex connectivity
//! for tripartite 3-multihypergraphs.

mod commands;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{ConstructArgs, Ctx};
use t3lab_core::{Budget, Error};

#[derive(Parser)]
#[command(
    name = "t3lab",
    about = "Matching, cover, and connectivity analysis for tripartite 3-multihypergraphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matching/cover numbers, structure counts, and every applicable
    /// bound check for a t3g instance.
    Analyze {
        path: PathBuf,
        /// Degree parameter; defaults to the maximum degree.
        #[arg(long)]
        r: Option<usize>,
    },
    /// eta of the full line graph of a bmg instance, with Betti numbers.
    Eta {
        path: PathBuf,
        /// Coefficients: q (rationals), f2 (binary field), or z (integers).
        #[arg(long, default_value = "q")]
        coeff: String,
        /// Homology cap; values at or above come back as ">=cap".
        #[arg(long)]
        cap: Option<usize>,
    },
    /// One named bound check. Names: thm1.2 thm1.3 thm2.2 thm3.1 cor3.8
    /// thm4.1 thm4.2 lem4.2 lem4.3 lem4.5 lem4.6 (thm3.1/cor3.8 read bmg
    /// files, the rest t3g).
    Verify {
        name: String,
        path: PathBuf,
        #[arg(long)]
        r: Option<usize>,
        /// Claimed C4-component bound for cor3.8 (defaults to the count).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Emit a named instance as canonical t3g. Families: fano scaled-fano
    /// extremal thm53-even thm53-odd parallel-triple random-regular, or
    /// --spec-json for anything (mixtures included).
    Construct {
        family: String,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Full gadget spec as JSON; overrides the positional family.
        #[arg(long)]
        spec_json: Option<String>,
        /// Run the family's validation bundle and fail on any violation.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan random regular instances for small matchings or simple-instance
    /// counterexample candidates.
    Search {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        iters: u64,
        /// min-nu or akz-counterexample.
        #[arg(long, default_value = "min-nu")]
        target: String,
        /// Where to write the best instance found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Input(_) => 2,
        Error::Resource(_) | Error::EtaUnresolved { .. } => 3,
        Error::NoTypedPair { .. } | Error::Dichotomy(_) => 1,
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    let budget = match std::env::var("T3LAB_BUDGET") {
        Ok(spec) => Budget::default()
            .parse_overrides(&spec)
            .map_err(|e| Error::Input(format!("bad T3LAB_BUDGET: {e}")))?,
        Err(_) => Budget::default(),
    };
    let ctx = Ctx { budget };
    match cli.command {
        Command::Analyze { path, r } => commands::analyze(&ctx, &read(&path)?, r),
        Command::Eta { path, coeff, cap } => {
            commands::eta_cmd(&ctx, &read(&path)?, &coeff, cap)
        }
        Command::Verify { name, path, r, k } => {
            commands::verify(&ctx, &name, &read(&path)?, r, k)
        }
        Command::Construct { family, r, n, s, seed, spec_json, check, out } => {
            let args = ConstructArgs { family, r, n, s, seed, spec_json, check };
            let (text, code) = commands::construct(&ctx, &args)?;
            write_out(&out, &text)?;
            Ok(code)
        }
        Command::Search { r, n, seed, iters, target, out } => {
            let result = commands::search(&ctx, r, n, seed, iters, &target)?;
            println!("{}", result.json);
            if let Some(instance) = &result.best_instance {
                if let Some(path) = &out {
                    write_out(&Some(path.clone()), instance)?;
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
