//! Command-line front end.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{parse_building, parse_instance};
use crate::run::{self, ResultDocument, Status};
use crate::selftest::selftest;

#[derive(Parser, Debug)]
#[command(
    name = "linheight",
    version,
    about = "Local intersection numbers of linear cycles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the local intersection number of an instance file ("-" for stdin).
    Intersect {
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
        /// Include wall-clock timing in the result.
        #[arg(long)]
        timing: bool,
    },
    /// Queries on the Bruhat-Tits building.
    Building {
        #[arg(value_enum)]
        query: BuildingQuery,
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check both places on randomly generated instances.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Ambient dimensions to cycle through.
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4])]
        sizes: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildingQuery {
    HalfGeodesic,
    Distance,
    ReductionEqual,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct OutputArgs {
    /// Print compact JSON.
    #[arg(long, conflicts_with = "pretty")]
    pub json: bool,
    /// Print indented JSON.
    #[arg(long)]
    pub pretty: bool,
}

impl OutputArgs {
    fn render<T: Serialize>(&self, value: &T) -> Option<String> {
        if self.pretty {
            serde_json::to_string_pretty(value).ok()
        } else if self.json {
            serde_json::to_string(value).ok()
        } else {
            None
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(e.to_string()))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn summarize(doc: &ResultDocument) -> String {
    let mut lines = Vec::new();
    match doc {
        ResultDocument::Finite(r) => {
            lines.push(format!(
                "place: finite (p = {}), n = {}, dim A = {}",
                r.prime, r.n, r.p
            ));
            lines.push(format!("algebraic: {}", fmt_opt(r.values.algebraic)));
            lines.push(format!("geometric: {}", fmt_opt(r.values.geometric)));
            if let Some(d) = r.distor {
                lines.push(format!("distor: {d}"));
            }
            if let Some(s) = &r.shortcut {
                lines.push(format!("degenerate: {s}"));
            }
            lines.extend(r.diagnostics.iter().map(|d| format!("note: {d}")));
            lines.push(format!("value: {}", fmt_opt(r.value)));
        }
        ResultDocument::Archimedean(r) => {
            lines.push(format!("place: archimedean, n = {}, dim A = {}", r.n, r.p));
            lines.push(format!("closed form: {}", fmt_opt(r.values.closed_form)));
            lines.push(format!("geometric: {}", fmt_opt(r.values.geometric)));
            if r.p == 1 {
                lines.push(format!("Green function: {}", fmt_opt(r.values.levine)));
            }
            if let Some(s) = &r.shortcut {
                lines.push(format!("degenerate: {s}"));
            }
            lines.extend(r.diagnostics.iter().map(|d| format!("note: {d}")));
            lines.push(format!("value: {}", fmt_opt(r.value)));
        }
    }
    lines.join("\n")
}

fn report_error(e: &Error, output: &OutputArgs) -> i32 {
    let body = serde_json::json!({ "status": Status::Schema, "error": e.to_string() });
    match output.render(&body) {
        Some(s) => println!("{s}"),
        None => eprintln!("error: {e}"),
    }
    Status::Schema.exit_code()
}

fn intersect(file: &PathBuf, output: &OutputArgs, timing: bool) -> i32 {
    let doc = match read_input(file).and_then(|t| parse_instance(&t)) {
        Ok(d) => d,
        Err(e) => return report_error(&e, output),
    };
    match run::intersect(&doc, timing) {
        Ok(result) => {
            match output.render(&result) {
                Some(s) => println!("{s}"),
                None => println!("{}", summarize(&result)),
            }
            result.status().exit_code()
        }
        Err(e) => report_error(&e, output),
    }
}

fn building(query: BuildingQuery, file: &PathBuf, output: &OutputArgs) -> i32 {
    let result = read_input(file)
        .and_then(|t| parse_building(&t))
        .and_then(|doc| match query {
            BuildingQuery::HalfGeodesic => run::building_half_geodesic(&doc),
            BuildingQuery::Distance => run::building_distance(&doc),
            BuildingQuery::ReductionEqual => run::building_reduction_equal(&doc),
        });
    match result {
        Ok(value) => {
            let text = output
                .render(&value)
                .unwrap_or_else(|| serde_json::to_string_pretty(&value).expect("serializable"));
            println!("{text}");
            0
        }
        Err(e) => report_error(&e, output),
    }
}

/// Runs the parsed command and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    match cli.command {
        Command::Intersect {
            file,
            output,
            timing,
        } => intersect(&file, &output, timing),
        Command::Building {
            query,
            file,
            output,
        } => building(query, &file, &output),
        Command::Selftest {
            seed,
            count,
            sizes,
            output,
        } => {
            let summary = selftest(seed, count, &sizes);
            match output.render(&summary) {
                Some(s) => println!("{s}"),
                None => print!("{}", summary.table()),
            }
            if summary.all_passed() {
                0
            } else {
                3
            }
        }
    }
}
