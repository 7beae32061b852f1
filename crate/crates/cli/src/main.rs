//! Batch front end for the hyperkub engine.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 domain negative
//! (incompatible invariants, unreachable target, oracle mismatch).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hyperkub::census::{census_classes, count_components_literal, count_states_census};
use hyperkub::classify::{class_of, dependent_group, ClassId};
use hyperkub::invariants::{invariant_vector, reachable};
use hyperkub::oracle::{
    full_state_bfs, pose_group_bfs, position_partition, verify_completeness_small, DEFAULT_MEM_CAP,
};
use hyperkub::puzzle::{seeded_moves, state_from_json, state_to_json, Geometry, MoveSeq, PuzzleParams, State};
use hyperkub::solver::solve;
use hyperkub::{Error, Exec};

#[derive(Parser)]
#[command(name = "hyperkub", version, about = "n-dimensional Rubik's cube engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Size {
    /// Dimension (3 to 8).
    #[arg(short = 'n')]
    n: usize,
    /// Edge length (2 to 255).
    #[arg(short = 'k')]
    k: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write the solved state.
    New {
        #[command(flatten)]
        size: Size,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply seeded random moves to a state.
    Scramble {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Number of moves (default 20·n·k).
        #[arg(long = "moves")]
        len: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply a move sequence given in move notation.
    Apply {
        input: PathBuf,
        #[arg(long, conflicts_with = "moves_file", required_unless_present = "moves_file")]
        moves: Option<String>,
        #[arg(long)]
        moves_file: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the invariant vector as JSON.
    Invariants { input: PathBuf },
    /// Decide whether B can be reached from A by moves.
    Reachable { a: PathBuf, b: PathBuf },
    /// Print a move sequence turning SOURCE into TARGET (default: solved).
    Solve {
        source: PathBuf,
        target: Option<PathBuf>,
        /// Also write the per-stage breakdown as JSON.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Count the states reachable from solved.
    Count {
        #[command(flatten)]
        size: Size,
        /// Only the printed closed forms.
        #[arg(long)]
        literal: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the cubie classes.
    Classes {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force checks.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Quick end-to-end check of the engine.
    Selftest,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Transport orbits of all external positions against the classification.
    Positions {
        #[command(flatten)]
        size: Size,
    },
    /// Facet permutations of one class against its rotation group.
    Poses {
        #[command(flatten)]
        size: Size,
        /// Class, e.g. "(2,[1])".
        #[arg(long)]
        class: ClassId,
    },
    /// Full state search of the (3,2) cube.
    Pocket {
        #[command(flatten)]
        search: Search,
    },
    /// Compare reachability with the full search on random pairs.
    Verify {
        #[command(flatten)]
        search: Search,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Search {
    #[arg(long)]
    sequential: bool,
    /// Memory cap in bytes.
    #[arg(long, default_value_t = DEFAULT_MEM_CAP)]
    mem_cap: u64,
}

impl Search {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

/// A negative answer; printed output stands, exit code 2.
struct Negative;

type Outcome = anyhow::Result<Result<(), Negative>>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Negative)) => ExitCode::from(2),
        Err(e) => {
            if let Some(Error::IncompatibleInvariants(diffs)) = e.downcast_ref::<Error>() {
                eprintln!("incompatible invariants: {}", diffs.join(", "));
                return ExitCode::from(2);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn params(size: &Size) -> anyhow::Result<PuzzleParams> {
    Ok(PuzzleParams::new(size.n, size.k)?)
}

fn read_state(path: &Path) -> anyhow::Result<State> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    state_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(command: Command) -> Outcome {
    match command {
        Command::New { size, output } => {
            emit(&state_to_json(&State::solved(params(&size)?)?), output.as_deref())?;
        }
        Command::Scramble { input, output, len, seed } => {
            let s = read_state(&input)?;
            let p = s.params();
            let seq = seeded_moves(p, len.unwrap_or(20 * p.n * p.k), seed);
            emit(&state_to_json(&s.apply_sequence(&seq)?), output.as_deref())?;
        }
        Command::Apply { input, moves, moves_file, output } => {
            let s = read_state(&input)?;
            let text = match (moves, moves_file) {
                (Some(t), _) => t,
                (None, Some(path)) => {
                    fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?
                }
                (None, None) => bail!("no moves given"),
            };
            let seq = MoveSeq::parse(s.params(), &text)?;
            emit(&state_to_json(&s.apply_sequence(&seq)?), output.as_deref())?;
        }
        Command::Invariants { input } => {
            println!("{}", pretty(&invariant_vector(&read_state(&input)?)?.to_json()));
        }
        Command::Reachable { a, b } => {
            let (a, b) = (read_state(&a)?, read_state(&b)?);
            if reachable(&a, &b)? {
                println!("true");
            } else {
                println!("false");
                let diffs = invariant_vector(&a)?.differences(&invariant_vector(&b)?);
                if !diffs.is_empty() {
                    eprintln!("differing invariants: {}", diffs.join(", "));
                }
                return Ok(Err(Negative));
            }
        }
        Command::Solve { source, target, plan } => {
            let src = read_state(&source)?;
            let dst = match target {
                Some(path) => read_state(&path)?,
                None => State::solved(src.params())?,
            };
            let result = solve(&src, &dst)?;
            println!("{}", result.moves().simplified().to_notation());
            if let Some(path) = plan {
                let stages: Vec<Value> = result
                    .stages
                    .iter()
                    .map(|(stage, seq)| json!({ "stage": stage.to_string(), "length": seq.len(), "moves": seq.to_notation() }))
                    .collect();
                emit(&pretty(&json!({ "length": result.len(), "stages": stages })), Some(&path))?;
            }
        }
        Command::Count { size, literal, json } => {
            let mut reports = Vec::new();
            if !literal {
                reports.push(("census", count_states_census(size.n, size.k)?));
            }
            reports.push(("literal", count_components_literal(size.n, size.k)?));
            if json {
                let map: serde_json::Map<String, Value> =
                    reports.iter().map(|(name, r)| (name.to_string(), r.to_json())).collect();
                println!("{}", pretty(&Value::Object(map)));
            } else {
                for (name, r) in &reports {
                    println!("[{name}]\n{}", r.to_table().trim_end());
                }
            }
        }
        Command::Classes { size, json } => {
            let rows = census_classes(size.n, size.k)?;
            if json {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        json!({
                            "class": r.id.to_string(),
                            "size": r.size.to_string(),
                            "group": r.group.to_string(),
                            "cluster_count": r.cluster_count.to_string(),
                            "cluster_size": r.cluster_size.to_string(),
                            "special_split": r.special_split,
                        })
                    })
                    .collect();
                println!("{}", pretty(&Value::Array(rows)));
            } else {
                println!("{:<24} {:>12} {:>5} {:>10} {:>10}", "class", "size", "group", "clusters", "cl.size");
                for r in rows {
                    println!(
                        "{:<24} {:>12} {:>5} {:>10} {:>10}",
                        r.id.to_string(),
                        r.size,
                        r.group.to_string(),
                        r.cluster_count,
                        r.cluster_size
                    );
                }
            }
        }
        Command::Oracle { command } => return oracle(command),
        Command::Selftest => return selftest(),
    }
    Ok(Ok(()))
}

fn oracle(command: OracleCommand) -> Outcome {
    match command {
        OracleCommand::Positions { size } => {
            let p = params(&size)?;
            let geom = Geometry::shared(p)?;
            let mut ok = true;
            for orbit in position_partition(p)? {
                let id = class_of(p, &orbit[0])?;
                let class_size = geom.class_by_id(&id).map_or(0, |ci| geom.class(ci).members.len());
                let same =
                    orbit.iter().all(|x| class_of(p, x).map(|c| c == id).unwrap_or(false)) && class_size == orbit.len();
                ok &= same;
                println!("{} {} {}", id, orbit.len(), if same { "ok" } else { "MISMATCH" });
            }
            if !ok {
                return Ok(Err(Negative));
            }
        }
        OracleCommand::Poses { size, class } => {
            let p = params(&size)?;
            let report = pose_group_bfs(p, &class)?;
            let group = dependent_group(p, &class);
            let mut got = report.perms();
            got.sort();
            let mut want = group.elements();
            want.sort();
            let same = got == want;
            let perms: Vec<String> = got.iter().map(|g| g.to_string()).collect();
            println!(
                "{}",
                pretty(&json!({
                    "class": class.to_string(),
                    "group": group.to_string(),
                    "order": report.order(),
                    "perms": perms,
                    "visited": report.visited,
                    "matches": same,
                }))
            );
            if !same {
                return Ok(Err(Negative));
            }
        }
        OracleCommand::Pocket { search } => {
            let r = full_state_bfs(search.exec(), search.mem_cap)?;
            println!("{}", pretty(&json!({ "orbit_sizes": r.orbit_sizes, "depths": r.depths, "total": r.total })));
        }
        OracleCommand::Verify { search, samples, seed } => {
            let r = full_state_bfs(search.exec(), search.mem_cap)?;
            let v = verify_completeness_small(&r, samples, seed)?;
            println!(
                "{}",
                pretty(&json!({
                    "samples": v.samples,
                    "same_orbit": v.same_orbit,
                    "agreements": v.agreements,
                    "mismatches": v.mismatches,
                }))
            );
            if !v.mismatches.is_empty() {
                return Ok(Err(Negative));
            }
        }
    }
    Ok(Ok(()))
}

fn selftest() -> Outcome {
    let mut ok = true;
    let mut check = |name: &str, pass: anyhow::Result<bool>| {
        let pass = pass.unwrap_or_else(|e| {
            eprintln!("{name}: {e:#}");
            false
        });
        ok &= pass;
        println!("{} {name}", if pass { "PASS" } else { "FAIL" });
    };
    check("count S(3,3) = 360", (|| Ok(count_states_census(3, 3)?.s.to_string() == "360"))());
    for (n, k) in [(3, 2), (3, 3), (3, 4), (4, 3)] {
        check(
            &format!("solve round trip ({n},{k})"),
            (|| {
                let p = PuzzleParams::new(n, k)?;
                let solved = State::solved(p)?;
                let scrambled = solved.apply_sequence(&seeded_moves(p, 20 * n * k, 0))?;
                let plan = solve(&scrambled, &solved)?;
                Ok(scrambled.apply_sequence(&plan.moves())?.colored_equal(&solved)?)
            })(),
        );
    }
    check(
        "classification matches orbits (3,6)",
        (|| {
            let p = PuzzleParams::new(3, 6)?;
            let mut same = true;
            for orbit in position_partition(p)? {
                let id = class_of(p, &orbit[0])?;
                same &= orbit.iter().all(|x| class_of(p, x).map(|c| c == id).unwrap_or(false));
            }
            Ok(same)
        })(),
    );
    Ok(if ok { Ok(()) } else { Err(Negative) })
}
