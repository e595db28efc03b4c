use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use active_time_core::generators::{gap_instance, gap_ratio_bound};
use active_time_core::hardness::{
    config_fits, pack_greedy, parse_psc, parse_set_cover, psc_to_active_time, setcover_to_psc,
    Configuration,
};
use active_time_core::instance::{parse_instance, Instance, LaminarTree};
use active_time_core::lp::{fmt_rational, int, LpError};
use active_time_core::oracle::{optimal_active_time, OracleError};
use active_time_core::pipeline::{solve_instance, PipelineError, PipelineOutcome};
use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "active-time",
    version,
    about = "Laminar active-time scheduling toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance, check laminarity and print its window tree
    Validate { file: PathBuf },
    /// Run LP, push-down, rounding and the flow check
    Solve { file: PathBuf },
    /// Brute-force optimum and the lexicographically first witness
    Oracle {
        file: PathBuf,
        /// Largest slot count to try (defaults to the horizon)
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Integrality-gap instance with its LP value and optimum
    Gap {
        #[arg(long)]
        g: u32,
    },
    /// Apply a hardness transform and print the downstream instance
    Reduce {
        #[command(subcommand)]
        source: ReduceSource,
    },
    /// Decide whether jobs fit a configuration of idle machine slots
    CheckConfig {
        /// Idle slots per machine, non-increasing
        #[arg(long, value_delimiter = ',', required = true)]
        e: Vec<u32>,
        /// Job lengths, non-increasing
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        l: Vec<u32>,
    },
    /// Solve every instance in a directory and print a tab-separated table
    Report { dir: PathBuf },
}

#[derive(Subcommand)]
enum ReduceSource {
    /// Set cover file to a prefix sum cover instance
    Setcover { file: PathBuf },
    /// Prefix sum cover file to an active-time instance
    Psc { file: PathBuf },
}

/// Bad input (exit 1) or a broken internal invariant (exit 2).
enum Failure {
    Invalid(anyhow::Error),
    Invariant(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Invariant(_) => 2,
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.into())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Invalid)
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read(path)?;
    parse_instance(&text)
        .with_context(|| path.display().to_string())
        .map_err(Failure::Invalid)
}

fn run_pipeline(inst: &Instance) -> Result<PipelineOutcome, Failure> {
    solve_instance(inst).map_err(|e| match e {
        PipelineError::Lp(LpError::InfeasibleSubinstance { .. }) => Failure::Invalid(e.into()),
        other => Failure::Invariant(other.into()),
    })
}

fn validate(file: &Path) -> Result<String, Failure> {
    let inst = load_instance(file)?;
    let tree = LaminarTree::build(&inst);
    let mut out = format!(
        "ok: {} jobs, g={}, T={}, {} nodes{}\n",
        inst.num_jobs(),
        inst.capacity(),
        inst.horizon(),
        tree.len(),
        if tree.has_synthetic_root() {
            " (synthetic root)"
        } else {
            ""
        }
    );
    out.push_str(&tree.summary());
    Ok(out)
}

fn solve(file: &Path) -> Result<String, Failure> {
    let inst = load_instance(file)?;
    let out = run_pipeline(&inst)?;
    let mut s = String::new();
    let _ = writeln!(s, "lp\t{}", fmt_rational(out.lp_value()));
    let _ = writeln!(s, "open\t{}", out.total_open());
    let _ = writeln!(s, "ratio\t{}", fmt_rational(&out.ratio));
    let opening: Vec<String> = out.opening.x_tilde().iter().map(u32::to_string).collect();
    let _ = writeln!(s, "opening\t{}", opening.join(","));
    s.push_str(&out.schedule.render(&inst));
    Ok(s)
}

fn oracle(file: &Path, budget: Option<usize>) -> Result<String, Failure> {
    let inst = load_instance(file)?;
    let res = optimal_active_time(&inst, budget.unwrap_or(inst.horizon() as usize))?;
    let slots: Vec<String> = res.witness.iter().map(u32::to_string).collect();
    Ok(format!("opt\t{}\nwitness\t{}\n", res.opt, slots.join(",")))
}

fn gap(g: u32) -> Result<String, Failure> {
    let inst = gap_instance(g)?;
    let out = run_pipeline(&inst)?;
    let opt = optimal_active_time(&inst, inst.horizon() as usize)?.opt;
    let ratio = int(opt as i64) / out.lp_value();
    let mut s = inst.to_string();
    let _ = writeln!(s, "# lp\t{}", fmt_rational(out.lp_value()));
    let _ = writeln!(s, "# opt\t{opt}");
    let _ = writeln!(s, "# ratio\t{}", fmt_rational(&ratio));
    let _ = writeln!(s, "# bound\t{}", fmt_rational(&gap_ratio_bound(g)));
    Ok(s)
}

fn reduce(source: &ReduceSource) -> Result<String, Failure> {
    match source {
        ReduceSource::Setcover { file } => {
            let sc = parse_set_cover(&read(file)?)?;
            Ok(setcover_to_psc(&sc)?.to_string())
        }
        ReduceSource::Psc { file } => {
            let psc = parse_psc(&read(file)?)?;
            let red = psc_to_active_time(&psc)?;
            let special: Vec<String> = red.special_slots.iter().map(u32::to_string).collect();
            let mut s = format!(
                "# special {}\n# baseline {}\n# threshold {}\n",
                special.join(","),
                red.baseline,
                red.threshold(psc.k())
            );
            s.push_str(&red.instance.to_string());
            Ok(s)
        }
    }
}

fn check_config(e: Vec<u32>, l: Vec<u32>) -> Result<String, Failure> {
    let cfg = Configuration::new(e, l)?;
    if !config_fits(&cfg)? {
        return Ok("infeasible\n".to_string());
    }
    let packing = pack_greedy(&cfg, &cfg.canonical_layout()).ok_or_else(|| {
        Failure::Invariant(anyhow!("greedy packing failed on a fitting configuration"))
    })?;
    let mut s = String::from("feasible\n");
    for (job, cells) in packing.iter().enumerate() {
        let cells: Vec<String> = cells
            .iter()
            .map(|(m, t)| format!("m{}@{}", m + 1, t))
            .collect();
        let _ = writeln!(s, "job {}: {}", job + 1, cells.join(" "));
    }
    Ok(s)
}

fn report(dir: &Path) -> Result<String, Failure> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read {}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let mut s = String::from("file\tjobs\tT\tg\tlp\talg\talg/lp\topt\talg/opt\tstatus\n");
    let mut worst: Option<Failure> = None;
    for path in files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let row = load_instance(&path).and_then(|inst| {
            let out = run_pipeline(&inst)?;
            let opt = match optimal_active_time(&inst, inst.horizon() as usize) {
                Ok(res) => Some(res.opt),
                Err(OracleError::TooLarge { .. }) => None,
                Err(e) => return Err(Failure::Invariant(e.into())),
            };
            let (opt_col, alg_opt) = match opt {
                Some(o) => (
                    o.to_string(),
                    fmt_rational(&(int(out.total_open() as i64) / int(o as i64))),
                ),
                None => ("-".to_string(), "-".to_string()),
            };
            Ok(format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                inst.num_jobs(),
                inst.horizon(),
                inst.capacity(),
                fmt_rational(out.lp_value()),
                out.total_open(),
                fmt_rational(&out.ratio),
                opt_col,
                alg_opt
            ))
        });
        match row {
            Ok(cols) => {
                let _ = writeln!(s, "{name}\t{cols}\tok");
            }
            Err(f) => {
                let msg = match &f {
                    Failure::Invalid(e) | Failure::Invariant(e) => format!("{e:#}"),
                };
                let _ = writeln!(
                    s,
                    "{name}\t-\t-\t-\t-\t-\t-\t-\t-\terror: {}",
                    msg.replace('\n', " ")
                );
                if worst.as_ref().is_none_or(|w| f.code() > w.code()) {
                    worst = Some(f);
                }
            }
        }
    }
    match worst {
        None => Ok(s),
        Some(f) => {
            print!("{s}");
            Err(f)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Solve { file } => solve(&file),
        Command::Oracle { file, budget } => oracle(&file, budget),
        Command::Gap { g } => gap(g),
        Command::Reduce { source } => reduce(&source),
        Command::CheckConfig { e, l } => check_config(e, l),
        Command::Report { dir } => report(&dir),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (Failure::Invalid(e) | Failure::Invariant(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}
