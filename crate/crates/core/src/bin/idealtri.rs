use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use idealtri::builders::{build_x101, build_x103};
use idealtri::geom::{max_volume_with, VolumeOptions, VolumeResult, VolumeStatus};
use idealtri::homology::first_homology;
use idealtri::io::{load, serialize};
use idealtri::iso::{are_isomorphic, canonical_signature, decode};
use idealtri::moves::{apply, MoveDescriptor, MoveKind};
use idealtri::search::{bfs_connect, dedupe_census, CensusEntry, ConnectOutcome, PachnerPath, SearchBudget};
use idealtri::skeleton::{skeleton, validate};
use idealtri::Triangulation;

/// Ideal triangulations: building, validating, moves, signatures,
/// homology, volume and move-path search.
///
/// Wherever a FILE is expected, `-` reads standard input and `sig:<SIG>`
/// decodes a signature.
#[derive(Parser)]
#[command(name = "idealtri", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Census {
    X101,
    X103,
}

#[derive(Clone, Copy, ValueEnum)]
enum MoveType {
    #[value(name = "23")]
    TwoThree,
    #[value(name = "32")]
    ThreeTwo,
    #[value(name = "44")]
    FourFour,
}

#[derive(clap::Args)]
struct BudgetArgs {
    /// Tetrahedra allowed above the larger input.
    #[arg(long, default_value_t = 1)]
    max_extra: usize,
    #[arg(long, default_value_t = 2)]
    max_depth: usize,
    #[arg(long, default_value_t = 100_000)]
    max_nodes: usize,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_extra_tets: self.max_extra,
            max_depth: self.max_depth,
            max_nodes: self.max_nodes,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write one of the built-in census triangulations.
    Build {
        #[arg(value_enum)]
        which: Census,
        /// Diagonal of the 4-4 move producing x103.
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        choice: u8,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Check that a table is a census-style ideal triangulation.
    Validate { file: String },
    /// Print combinatorial and homological invariants.
    Invariants { file: String },
    /// Print the canonical signature.
    Isosig { file: String },
    /// Decide whether two tables are isomorphic.
    Iso { a: String, b: String },
    /// Apply one move.
    Move {
        file: String,
        #[arg(long = "type", value_enum)]
        kind: MoveType,
        /// Face index for 2-3, edge index for 3-2 and 4-4.
        #[arg(long)]
        loc: usize,
        #[arg(long, default_value_t = 0)]
        choice: u8,
        /// Locate the move on the canonical relabelling, as `connect` does.
        #[arg(long)]
        canonical: bool,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Maximize volume over angle structures.
    Volume {
        file: String,
        /// Stop when the projected gradient is shorter than this.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
    },
    /// Search for a 2-3/3-2 move path between two triangulations.
    Connect {
        a: String,
        b: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Group triangulations joined by move paths.
    Dedupe {
        #[arg(required = true)]
        files: Vec<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn read(arg: &str) -> Result<Triangulation> {
    Ok(load(arg)?)
}

fn read_valid(arg: &str) -> Result<Triangulation> {
    let tri = read(arg)?;
    let report = validate(&tri);
    if !report.census_valid() {
        bail!("{arg}: not a valid triangulation: {}", report.problems().join("; "));
    }
    Ok(tri)
}

fn write_out(output: Option<&str>, text: &str) -> Result<()> {
    match output {
        Some(path) if path != "-" => fs::write(path, text).with_context(|| format!("writing {path}")),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn move_code(m: &MoveDescriptor) -> String {
    match m.kind {
        MoveKind::FourFour => format!("{} {} {}", m.kind.code(), m.loc, m.choice),
        _ => format!("{} {}", m.kind.code(), m.loc),
    }
}

fn print_path(path: &PachnerPath, indent: &str) {
    println!("{indent}start: {}", path.start);
    for (i, m) in path.moves.iter().enumerate() {
        println!("{indent}move {}: {} ({m})", i + 1, move_code(m));
    }
    println!("{indent}end: {}", path.end);
}

fn print_volume(r: &VolumeResult) {
    println!("volume: {:.10}", r.volume);
    println!("status: {}", r.status.as_str());
    println!("iterations: {}", r.iterations);
    println!("equation residual: {:.3e}", r.residuals.equations);
    println!("projected gradient: {:.3e}", r.residuals.projected_gradient);
    for &(t, k) in &r.near_zero {
        println!("near-zero angle: tet {t} pair {k}");
    }
    if r.via_double_cover {
        println!("via double cover: yes");
        if let Some(d) = &r.direct {
            println!("direct volume: {:.10} ({})", d.volume, d.status.as_str());
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Build { which, choice, output } => {
            let tri = match which {
                Census::X101 => build_x101(),
                Census::X103 => build_x103(choice)?,
            };
            write_out(output.as_deref(), &serialize(&tri))?;
            Ok(0)
        }
        Command::Validate { file } => {
            let tri = read(&file)?;
            let report = validate(&tri);
            if report.census_valid() {
                println!("valid");
                Ok(0)
            } else {
                println!("invalid");
                for p in report.problems() {
                    println!("{p}");
                }
                Ok(1)
            }
        }
        Command::Invariants { file } => {
            let tri = read_valid(&file)?;
            let skel = skeleton(&tri)?;
            let report = validate(&tri);
            let degrees: Vec<String> = skel.degrees().iter().map(ToString::to_string).collect();
            let links: Vec<&str> = report.links.iter().map(|l| l.kind()).collect();
            println!("tets: {}", tri.size());
            println!("edges: {}", skel.edges.len());
            println!("edge degrees: {}", degrees.join(" "));
            println!("cusps: {}", skel.vertices.len());
            println!("cusp links: {}", links.join(" "));
            println!("orientable: {}", if tri.is_orientable() { "yes" } else { "no" });
            println!("H1: {}", first_homology(&tri)?);
            Ok(0)
        }
        Command::Isosig { file } => {
            println!("{}", canonical_signature(&read(&file)?)?);
            Ok(0)
        }
        Command::Iso { a, b } => {
            let (ta, tb) = (read(&a)?, read(&b)?);
            canonical_signature(&ta).with_context(|| a.clone())?;
            canonical_signature(&tb).with_context(|| b.clone())?;
            if are_isomorphic(&ta, &tb).is_some() {
                println!("isomorphic");
                Ok(0)
            } else {
                println!("not isomorphic: the gluing tables differ as triangulations");
                Ok(1)
            }
        }
        Command::Move {
            file,
            kind,
            loc,
            choice,
            canonical,
            output,
        } => {
            let mut tri = read(&file)?;
            if canonical {
                tri = decode(canonical_signature(&tri)?.as_str())?;
            }
            let m = match kind {
                MoveType::TwoThree => MoveDescriptor::two_three(loc),
                MoveType::ThreeTwo => MoveDescriptor::three_two(loc),
                MoveType::FourFour => MoveDescriptor::four_four(loc, choice),
            };
            let out = apply(&tri, &m).with_context(|| format!("{m}"))?;
            write_out(output.as_deref(), &serialize(&out))?;
            Ok(0)
        }
        Command::Volume { file, tol, max_iter } => {
            let tri = read_valid(&file)?;
            let opts = VolumeOptions {
                grad_tol: tol,
                max_iter,
                ..VolumeOptions::default()
            };
            let r = max_volume_with(&tri, &opts)?;
            print_volume(&r);
            Ok(match r.status {
                VolumeStatus::InteriorMax | VolumeStatus::BoundaryMax => 0,
                VolumeStatus::Infeasible | VolumeStatus::NotConverged => 1,
            })
        }
        Command::Connect { a, b, budget } => {
            let (ta, tb) = (read_valid(&a)?, read_valid(&b)?);
            match bfs_connect(&ta, &tb, &budget.budget())? {
                ConnectOutcome::Connected(path) => {
                    println!("connected in {} moves", path.len());
                    print_path(&path, "");
                    Ok(0)
                }
                ConnectOutcome::Distinct(d) => {
                    println!("distinct manifolds: {d}");
                    Ok(1)
                }
                ConnectOutcome::NotFoundWithinBudget { visited } => {
                    println!(
                        "unknown: no path within budget ({visited} states visited); the manifolds may still coincide"
                    );
                    Ok(1)
                }
            }
        }
        Command::Dedupe { files, budget } => {
            let mut entries = Vec::with_capacity(files.len());
            for f in &files {
                entries.push(CensusEntry {
                    name: f.clone(),
                    tri: read_valid(f)?,
                });
            }
            let report = dedupe_census(&entries, &budget.budget())?;
            for (i, g) in report.groups.iter().enumerate() {
                println!("group {}: {}", i + 1, g.members.join(" "));
                for w in &g.witnesses {
                    let moves: Vec<String> = w.path.moves.iter().map(move_code).collect();
                    println!("  {} -> {}: [{}]", w.from, w.to, moves.join(", "));
                }
            }
            if report.duplicates().next().is_some() {
                Ok(0)
            } else {
                println!("no duplicates found within budget");
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
