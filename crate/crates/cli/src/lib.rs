//! Command-line surface: exact optima, error tables, enumeration, counting,
//! tree export, oracle verification, Lloyd search and figure emission.
//!
//! Exit codes: 0 on success, 1 on a computation error (reported on stderr as
//! `error[<name>]: <message>`), 2 on a usage error.

pub mod figure;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use carpetq_core::engine::{
    count_table, enumerate_level, greedy_sequence, set_distortion, tree_edges, OptimalSet,
    TiePolicy, DEFAULT_ENUM_CAP,
};
use carpetq_core::nodes::{node_centroid, node_error, Node};
use carpetq_core::oracle::{
    discretized_optimum, lloyd_search, verify_centroid_condition, verify_distortion_identity,
};
use carpetq_core::rational::{format_decimal6, format_exact, to_f64};
use carpetq_core::{Error, ExactPoint};

use figure::RenderConfig;

#[derive(Parser)]
#[command(
    name = "carpetq",
    about = "Exact optimal quantizers for a weighted Sierpinski-carpet measure",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the deterministic optimal set of a given size with exact values
    Optimal {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Tabulate the exact quantization error for sizes 1..=N
    Errors {
        #[arg(long = "n-max", value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
    },
    /// Enumerate every optimal set of a given size
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        count_only: bool,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        max_sets: usize,
    },
    /// Count the optimal sets for each size in a range
    Table {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        from: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        to: u32,
    },
    /// List the transition edges between consecutive size layers
    Tree {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        from: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        to: u32,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        max_sets: usize,
    },
    /// Run both exact oracle checks on the deterministic set of size N
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=10))]
        level: u32,
    },
    /// Floating-point Lloyd search against the exact discretized optimum
    Lloyd {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=10))]
        level: u32,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        restarts: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write an SVG of the carpet with the optimal points of size N
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(0..=6))]
        depth: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 600, value_parser = clap::value_parser!(u32).range(64..))]
        viewport: u32,
        #[arg(long, default_value_t = 4.0)]
        radius: f64,
    },
}

/// Parses `argv` and runs the named subcommand, returning the process exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {}", e.name(), e);
            1
        }
    }
}

fn greedy_stage(n: u32) -> Result<OptimalSet, Error> {
    Ok(greedy_sequence(n, TiePolicy::CanonicalLeast)?
        .pop()
        .expect("sequence is non-empty"))
}

fn node_to_json(node: &Node) -> serde_json::Value {
    let c = node_centroid(node);
    json!({
        "kind": node.kind().as_str(),
        "word": node.word().as_string(),
        "centroid": { "x": format_exact(&c.x), "y": format_exact(&c.y) },
        "error": format_exact(&node_error(node)),
    })
}

fn set_to_json(set: &OptimalSet) -> serde_json::Value {
    let v = set_distortion(set);
    json!({
        "nodes": set.nodes().iter().map(node_to_json).collect::<Vec<_>>(),
        "distortion": { "exact": format_exact(&v), "decimal": to_f64(&v) },
    })
}

fn dispatch(command: Command) -> Result<i32, Error> {
    match command {
        Command::Optimal { n, format } => {
            let set = greedy_stage(n)?;
            match format {
                Format::Json => {
                    let mut value = set_to_json(&set);
                    value["n"] = json!(n);
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&value).expect("valid json")
                    );
                }
                Format::Csv => {
                    println!("kind,word,centroid_x,centroid_y,error");
                    for node in set.nodes() {
                        let c = node_centroid(node);
                        println!(
                            "{},{},{},{},{}",
                            node.kind().as_str(),
                            node.word().as_string(),
                            format_exact(&c.x),
                            format_exact(&c.y),
                            format_exact(&node_error(node)),
                        );
                    }
                    let v = set_distortion(&set);
                    println!("V,{},{}", format_exact(&v), to_f64(&v));
                }
            }
            Ok(0)
        }
        Command::Errors { n_max } => {
            println!("n\texact\tdecimal");
            for set in greedy_sequence(n_max, TiePolicy::CanonicalLeast)? {
                let v = set_distortion(&set);
                println!(
                    "{}\t{}\t{}",
                    set.len(),
                    format_exact(&v),
                    format_decimal6(&v)
                );
            }
            Ok(0)
        }
        Command::Enumerate {
            n,
            count_only,
            max_sets,
        } => {
            let sets = enumerate_level(n, max_sets)?;
            if count_only {
                println!("{}", sets.len());
            } else {
                let value = json!({
                    "n": n,
                    "count": sets.len(),
                    "sets": sets.iter().map(set_to_json).collect::<Vec<_>>(),
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("valid json")
                );
            }
            Ok(0)
        }
        Command::Table { from, to } => {
            if to < from {
                eprintln!("error: --to must be at least --from");
                return Ok(2);
            }
            let table = count_table(from, to)?;
            for (n, count) in &table.entries {
                println!("{n}\t{count}");
            }
            Ok(0)
        }
        Command::Tree { from, to, max_sets } => {
            if to <= from {
                eprintln!("error: --to must exceed --from");
                return Ok(2);
            }
            for edge in tree_edges(from, to, max_sets)? {
                println!(
                    "{}:{} -> {}:{}",
                    edge.level,
                    edge.parent,
                    edge.level + 1,
                    edge.child
                );
            }
            Ok(0)
        }
        Command::Verify { n, level } => {
            let set = greedy_stage(n)?;
            let centroid_ok = verify_centroid_condition(&set, level)?;
            let distortion_ok = verify_distortion_identity(&set, level)?;
            println!(
                "centroid-condition: {}",
                if centroid_ok { "PASS" } else { "FAIL" }
            );
            println!(
                "distortion-identity: {}",
                if distortion_ok { "PASS" } else { "FAIL" }
            );
            Ok(if centroid_ok && distortion_ok { 0 } else { 1 })
        }
        Command::Lloyd {
            n,
            level,
            restarts,
            seed,
        } => {
            let set = greedy_stage(n)?;
            let best = lloyd_search(n as usize, level, restarts, seed)?;
            let exact = discretized_optimum(&set, level);
            println!("best-distortion: {best}");
            println!(
                "discretized-optimum: {} ({})",
                format_exact(&exact),
                to_f64(&exact)
            );
            Ok(0)
        }
        Command::Figure {
            n,
            depth,
            out,
            viewport,
            radius,
        } => {
            let set = greedy_stage(n)?;
            let points: Vec<ExactPoint> = set.nodes().iter().map(node_centroid).collect();
            let cfg = RenderConfig {
                depth,
                viewport,
                radius,
            };
            let svg = figure::render_svg(&points, &cfg)?;
            std::fs::write(&out, svg).map_err(|e| {
                Error::InvalidArgument(format!("cannot write {}: {e}", out.display()))
            })?;
            Ok(0)
        }
    }
}
