use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stablehom::cli::{
    error_json, run, CapsOverride, CatKind, CliError, Command, CompareTarget, Expr, FieldSpec, Functors, GroupArg, JobSpec, Rect, ResultCache,
    VerifyTarget, CONFIG_ENV, EXIT_ERROR, EXIT_OK,
};

#[derive(Parser)]
#[command(name = "stablehom", version, about = "Functor homology over finite categories and twisted homology of finite classical groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Field F_q: q, p^d or p,d (alias --q).
    #[arg(long, global = true, visible_alias = "q")]
    field: Option<String>,
    /// Dimension or cardinality cap of the category.
    #[arg(long, global = true)]
    dmax: Option<usize>,
    /// Increasing caps for cap-convergence runs, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    caps: Option<Vec<usize>>,
    /// Rank bound of group-side scans.
    #[arg(long = "n-max", global = true)]
    n_max: Option<usize>,
    /// Highest homological degree.
    #[arg(long, global = true)]
    maxdeg: Option<usize>,
    /// Largest group enumerated element by element.
    #[arg(long = "group-order", global = true)]
    group_order: Option<u64>,
    /// Morphism cap of any category built.
    #[arg(long = "morphism-cap", global = true)]
    morphism_cap: Option<usize>,
    /// Largest bar-complex term in group homology.
    #[arg(long = "cell-cap", global = true)]
    cell_cap: Option<usize>,
    /// TOML file of cap defaults; falls back to $STABLEHOM_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a CSV table here, for commands that produce one.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Ignore $STABLEHOM_CACHE_DIR.
    #[arg(long = "no-cache", global = true)]
    no_cache: bool,
    /// Print the job as TOML and exit without running it.
    #[arg(long = "print-job", global = true)]
    print_job: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or validate a category.
    Cat {
        #[arg(value_parser = ["build", "check"])]
        action: String,
        #[arg(long)]
        cat: CatKind,
    },
    /// Tor over a truncated category.
    Tor {
        #[arg(long, default_value = "all")]
        cat: CatKind,
        #[arg(long)]
        contra: String,
        #[arg(long)]
        co: String,
        /// Cross-check the last cap against the bar complex.
        #[arg(long)]
        oracle: bool,
    },
    /// Homology of one finite group with twisted coefficients.
    GroupHomology {
        #[arg(long)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
        /// Coefficient functor, trivial if omitted.
        #[arg(long)]
        module: Option<String>,
    },
    /// H_degree(G(n); F(A^n)) for n up to --n-max, with a plateau flag.
    StableScan {
        #[arg(long)]
        group: GroupArg,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Structural checks: psi, morita, pirashvili, axioms, exponential.
    Verify {
        target: VerifyTarget,
        #[arg(long)]
        cat: Option<CatKind>,
    },
    /// Group side against functor side: main0, lowdeg, suslin, djament, betley, gl.
    Compare {
        target: CompareTarget,
        #[arg(long)]
        group: Option<GroupArg>,
        /// Covariant functor F.
        #[arg(long)]
        expr: Option<String>,
        /// Contravariant functor (suslin).
        #[arg(long)]
        contra: Option<String>,
        /// Named module: nonzero|zero (djament), const|reduced (betley).
        #[arg(long)]
        module: Option<String>,
    },
    /// Closed-form stable dimension tables.
    Predict {
        #[arg(long)]
        series: String,
        #[arg(long, default_value = "0..10x0..4")]
        rect: String,
    },
    /// Run a TOML job file.
    Run { job: PathBuf },
}

fn expr(text: &str) -> Result<Expr, CliError> {
    text.parse()
}

fn functors(contra: Option<&str>, co: Option<&str>) -> Result<Functors, CliError> {
    Ok(Functors { contra: contra.map(expr).transpose()?, co: co.map(expr).transpose()? })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn config(common: &Common) -> Result<CapsOverride, CliError> {
    let path = common.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    path.map(|p| CapsOverride::from_toml(&read(&p)?)).transpose().map(Option::unwrap_or_default)
}

fn job_from_args(cli: Cli) -> Result<JobSpec, CliError> {
    let c = &cli.common;
    if let Cmd::Run { job } = &cli.command {
        let mut spec = JobSpec::from_toml(&read(job)?)?;
        spec.output = c.out.clone().or(spec.output);
        spec.csv = c.csv.clone().or(spec.csv);
        return Ok(spec);
    }
    let flags = CapsOverride {
        dmax: c.dmax,
        caps: c.caps.clone(),
        n_max: c.n_max,
        max_degree: c.maxdeg,
        group_order: c.group_order,
        morphism_cap: c.morphism_cap,
        cell_cap: c.cell_cap,
    };
    let caps = flags.or(config(c)?).resolve();
    let field: FieldSpec = c.field.as_deref().ok_or_else(|| CliError::Job("--field is required".into()))?.parse()?;
    let (command, functors) = match cli.command {
        Cmd::Cat { action, cat } => (if action == "build" { Command::CatBuild { cat } } else { Command::CatCheck { cat } }, Functors::default()),
        Cmd::Tor { cat, contra, co, oracle } => (Command::Tor { cat, oracle }, functors(Some(&contra), Some(&co))?),
        Cmd::GroupHomology { group, n, module } => (Command::GroupHomology { group, n }, functors(None, module.as_deref())?),
        Cmd::StableScan { group, expr, degree } => (Command::StableScan { group, degree }, functors(None, Some(&expr))?),
        Cmd::Verify { target, cat } => (Command::Verify { target, cat }, Functors::default()),
        Cmd::Compare { target, group, expr, contra, module } => (Command::Compare { target, group, module }, functors(contra.as_deref(), expr.as_deref())?),
        Cmd::Predict { series, rect } => (Command::Predict { series, rect: rect.parse::<Rect>()? }, Functors::default()),
        Cmd::Run { .. } => unreachable!("handled above"),
    };
    Ok(JobSpec { command, field, caps, functors, output: c.out.clone(), csv: c.csv.clone() })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn fail(e: &CliError) -> ExitCode {
    print!("{}", error_json(None, e));
    ExitCode::from(EXIT_ERROR as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::from(EXIT_OK as u8);
        }
        Err(e) => return fail(&CliError::Job(e.render().to_string().trim().to_string())),
    };
    let (no_cache, print_job) = (cli.common.no_cache, cli.common.print_job);
    let job = match job_from_args(cli) {
        Ok(j) => j,
        Err(e) => return fail(&e),
    };
    if print_job {
        print!("{}", job.to_toml());
        return ExitCode::from(EXIT_OK as u8);
    }
    let cache = if no_cache { Ok(None) } else { ResultCache::from_env() };
    let cache = match cache {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let outcome = run(&job, cache.as_ref());
    if outcome.cache_hit {
        eprintln!("stablehom: cache hit");
    }
    let written = match &job.output {
        Some(p) => write(p, &outcome.json),
        None => {
            print!("{}", outcome.json);
            Ok(())
        }
    };
    let written = written.and_then(|_| match (&job.csv, &outcome.csv) {
        (Some(p), Some(csv)) => write(p, csv),
        _ => Ok(()),
    });
    if let Err(e) = written {
        return fail(&e);
    }
    ExitCode::from(outcome.exit_code as u8)
}
