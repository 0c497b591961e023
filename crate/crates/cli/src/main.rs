use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use wingtail_cli::{run, CliError, Grid, ScenarioConfig, SideArg, Task};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TaskArg {
    #[value(name = "critical_moments")]
    CriticalMoments,
    Mgf,
    Tail,
    Wing,
    Compare,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::CriticalMoments => Task::CriticalMoments,
            TaskArg::Mgf => Task::Mgf,
            TaskArg::Tail => Task::Tail,
            TaskArg::Wing => Task::Wing,
            TaskArg::Compare => Task::Compare,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideFlag {
    Right,
    Left,
}

/// Extreme-strike asymptotics from moment explosion, with numerical references.
#[derive(Debug, Parser)]
#[command(name = "wingtail", version)]
struct Args {
    /// Task to run; overrides the `task` field of the configuration.
    task: TaskArg,
    /// JSON scenario configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; overrides `output`. Standard output when neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    side: Option<SideFlag>,
    /// Maturity; overrides `t`.
    #[arg(long)]
    t: Option<f64>,
    /// Grid as `start:stop:step`; overrides `grid`.
    #[arg(long)]
    grid: Option<String>,
}

fn parse_grid(s: &str) -> Result<Grid, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::config("--grid", format!("expected start:stop:step, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
    Ok(Grid { start: num(parts[0])?, stop: num(parts[1])?, step: num(parts[2])? })
}

fn execute(args: Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::config("--config", format!("{}: {e}", args.config.display())))?;
    let mut cfg = ScenarioConfig::from_json(&text)?;
    cfg.task = args.task.into();
    if let Some(side) = args.side {
        cfg.side = match side {
            SideFlag::Right => SideArg::Right,
            SideFlag::Left => SideArg::Left,
        };
    }
    if let Some(t) = args.t {
        cfg.t = t;
    }
    if let Some(g) = &args.grid {
        cfg.grid = Some(parse_grid(g)?);
    }
    let model = cfg.validate()?;
    let csv = run(&cfg, &model)?;
    match args.out.or_else(|| cfg.output.as_ref().map(PathBuf::from)) {
        Some(path) => std::fs::write(&path, csv)
            .map_err(|e| CliError::config("output", format!("{}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
