use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use fusionkit::report::{parse_manifest, run_catalog, run_file, Caps, RunOptions, Task};
use fusionkit::translink::ObjectChoice;

#[derive(Parser)]
#[command(name = "fusionkit", version, about = "Fusion systems, linking systems and localities of permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objects {
    Centric,
    Subcentric,
    AllNonidentity,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(clap::Args)]
struct Common {
    /// Object set for the linking system and the group locality.
    #[arg(long, value_enum, default_value = "centric")]
    objects: Objects,
    /// Cap overrides as `name=value` pairs: group, aut, nodes, brute.
    #[arg(long, value_delimiter = ',')]
    caps: Vec<String>,
    /// Brute-force cross-checks.
    #[arg(long, value_enum, default_value = "on")]
    oracle: Switch,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Runs tasks on one group file.
    Run {
        group_file: PathBuf,
        #[arg(long)]
        prime: u32,
        #[command(flatten)]
        common: Common,
        /// classify, linking, locality, roundtrip, lim1, out0, kappa or all.
        #[arg(default_value = "all")]
        tasks: Vec<String>,
    },
    /// Runs every row of a manifest of `group-file prime` lines.
    Catalog {
        manifest: PathBuf,
        /// Restrict to the tasks of one main result.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        theorem: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_caps(items: &[String]) -> anyhow::Result<Caps> {
    let mut caps = Caps::default();
    for item in items {
        let (k, v) = item.split_once('=').with_context(|| format!("cap {item:?} is not name=value"))?;
        match k {
            "group" => caps.group = v.parse()?,
            "aut" => caps.aut = v.parse()?,
            "nodes" => caps.search_nodes = v.parse()?,
            "brute" => caps.brute = v.parse()?,
            _ => bail!("unknown cap {k:?}"),
        }
    }
    Ok(caps)
}

fn options(prime: u32, common: &Common, tasks: BTreeSet<Task>) -> anyhow::Result<RunOptions> {
    Ok(RunOptions {
        prime,
        objects: match common.objects {
            Objects::Centric => ObjectChoice::Centric,
            Objects::Subcentric => ObjectChoice::Subcentric,
            Objects::AllNonidentity => ObjectChoice::AllNonidentity,
        },
        tasks,
        caps: parse_caps(&common.caps)?,
        oracle: matches!(common.oracle, Switch::On),
        timing: common.timing,
    })
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let block = serde_json::json!({ "error": { "kind": "Usage", "message": format!("{e:#}") } });
            println!("{}", serde_json::to_string_pretty(&block).unwrap());
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<bool> {
    match Cli::parse().command {
        Command::Run { group_file, prime, common, tasks } => {
            let mut set = BTreeSet::new();
            for t in &tasks {
                set.extend(Task::parse(t).with_context(|| format!("unknown task {t:?}"))?);
            }
            let opts = options(prime, &common, set)?;
            let label = group_file.display().to_string();
            let report = run_file(&group_file, &label, &opts);
            emit(&report.to_json(), common.out.as_deref())?;
            Ok(report.pass)
        }
        Command::Catalog { manifest, theorem, common } => {
            let text = std::fs::read_to_string(&manifest).with_context(|| format!("reading {}", manifest.display()))?;
            let entries = parse_manifest(&text)?;
            let tasks = match theorem {
                Some(n) => Task::for_theorem(n).unwrap().into_iter().collect(),
                None => Task::ALL.into_iter().collect(),
            };
            let opts = options(0, &common, tasks)?;
            let base = manifest.parent().unwrap_or(Path::new("."));
            let report = run_catalog(base, &entries, &opts, theorem);
            eprint!("{}", report.table());
            emit(&report.to_json(), common.out.as_deref())?;
            Ok(report.pass)
        }
    }
}
