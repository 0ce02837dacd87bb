//! Command-line surface: bound / construct / verify / plan / distribute /
//! schedule / simulate / table / curve.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use atac::bounds::{lower_bound, lower_bound_bruteforce_with_table, Frac};
use atac::catalog::{curve_points, table_rows};
use atac::designs::{
    self, construct_affine_plane, construct_hermitian_unital, construct_projective_plane,
    construct_steiner_triple_system, Design, DesignCheck,
};
use atac::distribution::{
    distribution_from_design, frac_str, manifest, plan, report, Distribution, PlanOutcome,
};
use atac::scheduler::{
    imbalance, make_placement, make_schedule, make_schedule_general, placement_from_csv,
    placement_to_csv, rebuild_load, schedule_from_csv, schedule_to_csv, SchedulerError,
};
use atac::simulator::{simulate, Failure, SimConfig};

#[derive(Parser)]
#[command(name = "atac", version, about = "All-to-all comparison distribution planner")]
struct Cli {
    /// Output rendering; values are identical across formats
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Lower bound on the per-machine storage fraction for M machines
    Bound {
        #[arg(long)]
        machines: u64,
        /// Use the exhaustive max-over-b enumeration instead of the closed form
        #[arg(long)]
        brute_force: bool,
    },
    /// Construct a design and write it as a design file
    Construct {
        #[arg(long = "type", value_enum)]
        kind: DesignKind,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a design file and report its parameters
    Verify {
        #[arg(long)]
        design: PathBuf,
    },
    /// Best known distribution for M machines, or the bound if none is known
    Plan {
        #[arg(long)]
        machines: u64,
    },
    /// Emit placement CSV and distribution manifest JSON for a design
    Distribute {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        items: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Emit the comparison schedule CSV and report its imbalance
    Schedule {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        items: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute a schedule, optionally failing one machine
    Simulate {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        placement: PathBuf,
        /// MACHINE[:COMPLETED_TASKS], e.g. --fail 2:0
        #[arg(long)]
        fail: Option<String>,
        /// Time units per comparison task, as NUM or NUM/DEN
        #[arg(long, default_value = "1")]
        task_cost: String,
        /// Time units per remote item fetch, as NUM or NUM/DEN
        #[arg(long, default_value = "0")]
        fetch_cost: String,
    },
    /// Optimal plane distributions for orders up to N
    Table {
        #[arg(long)]
        max_order: u64,
    },
    /// CSV of the bound curve plus constructible design and heuristic points
    Curve {
        #[arg(long)]
        max_machines: u64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum DesignKind {
    Pg,
    Ag,
    Sts,
    Unital,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Bound { machines, brute_force } => cmd_bound(machines, brute_force, cli.format),
        Command::Construct { kind, order, out } => cmd_construct(kind, order, out.as_deref()),
        Command::Verify { design } => cmd_verify(&design, cli.format),
        Command::Plan { machines } => cmd_plan(machines, cli.format),
        Command::Distribute { design, items, out_dir } => cmd_distribute(&design, items, &out_dir),
        Command::Schedule { design, items, out } => cmd_schedule(&design, items, out.as_deref()),
        Command::Simulate { schedule, placement, fail, task_cost, fetch_cost } => {
            cmd_simulate(&schedule, &placement, fail.as_deref(), &task_cost, &fetch_cost)
        }
        Command::Table { max_order } => cmd_table(max_order, cli.format),
        Command::Curve { max_machines } => cmd_curve(max_machines),
    }
}

fn cmd_bound(machines: u64, brute_force: bool, format: Format) -> Result<(), String> {
    if machines < 1 {
        // mirror clap's usage-error exit code for an out-of-domain value
        eprintln!("error: --machines must be at least 1");
        std::process::exit(2);
    }
    let rep = if brute_force {
        lower_bound_bruteforce_with_table(machines)
    } else {
        lower_bound(machines)
    };
    match format {
        Format::Json => {
            let json = serde_json::json!({
                "machines": rep.m,
                "floor_sqrt_m": rep.floor_sqrt_m,
                "bound": frac_str(rep.bound),
                "argmax_b": rep.argmax_b,
            });
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        Format::Csv => {
            println!("machines,floor_sqrt_m,bound,argmax_b");
            println!("{},{},{},{}", rep.m, rep.floor_sqrt_m, frac_str(rep.bound), rep.argmax_b);
        }
        Format::Human => {
            println!("machines:       {}", rep.m);
            println!("floor(sqrt(m)): {}", rep.floor_sqrt_m);
            println!("lower bound:    {}", frac_str(rep.bound));
            println!("argmax b:       {}", rep.argmax_b);
            if let Some(f) = &rep.f_values {
                if f.len() <= 64 {
                    let cells: Vec<String> = f
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| format!("f({})={}", i + 1, frac_str(v)))
                        .collect();
                    println!("f table:        {}", cells.join(" "));
                }
            }
        }
    }
    Ok(())
}

fn build_design(kind: DesignKind, order: u64) -> Result<Design, String> {
    let d = match kind {
        DesignKind::Pg => construct_projective_plane(order),
        DesignKind::Ag => construct_affine_plane(order),
        DesignKind::Sts => construct_steiner_triple_system(order),
        DesignKind::Unital => construct_hermitian_unital(order),
    };
    d.map_err(|e| e.to_string())
}

fn cmd_construct(kind: DesignKind, order: u64, out: Option<&Path>) -> Result<(), String> {
    let d = build_design(kind, order)?;
    let text = designs::render_design(&d);
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| e.to_string())?;
            println!("wrote {} ({} points, {} blocks)", path.display(), d.v, d.blocks.len());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_verify(path: &Path, format: Format) -> Result<(), String> {
    let d = designs::load_design(path).map_err(|e| e.to_string())?;
    let check = designs::verify_design(&d).map_err(|e| e.to_string())?;
    match check {
        DesignCheck::Bibd(p) => match format {
            Format::Json => {
                let json = serde_json::json!({
                    "bibd": true, "v": p.v, "m": p.m, "k": p.k, "r": p.r, "lambda": p.lambda,
                });
                println!("{}", serde_json::to_string_pretty(&json).unwrap());
            }
            _ => println!("2-({},{},{}), m={}, r={}", p.v, p.k, p.lambda, p.m, p.r),
        },
        DesignCheck::PairCovering(rep) => {
            if rep.covers_all_pairs {
                println!("not a BIBD, but a valid pair covering");
            } else {
                println!("not a BIBD; {} uncovered pairs", rep.uncovered.len());
                for (x, y) in rep.uncovered.iter().take(10) {
                    println!("  uncovered pair ({x},{y})");
                }
            }
            let hist: Vec<String> = rep
                .multiplicity_histogram
                .iter()
                .map(|(mult, count)| format!("{mult}x:{count}"))
                .collect();
            println!("pair multiplicity histogram: {}", hist.join(" "));
            if !rep.covers_all_pairs {
                return Err("design is not a pair covering".into());
            }
        }
    }
    Ok(())
}

fn cmd_plan(machines: u64, format: Format) -> Result<(), String> {
    if machines < 1 {
        eprintln!("error: --machines must be at least 1");
        std::process::exit(2);
    }
    match plan(machines) {
        PlanOutcome::Constructed { distribution, report } => {
            let man = manifest(&distribution, &report);
            match format {
                Format::Json | Format::Csv => {
                    println!("{}", serde_json::to_string_pretty(&man).unwrap())
                }
                Format::Human => {
                    println!("source:   {}", man.source_label);
                    println!("machines: {}", man.machines);
                    println!("groups:   {}", man.groups);
                    println!("limit:    {}", man.limit);
                    println!("bound:    {}", man.bound);
                    println!("optimal:  {}", man.optimal);
                }
            }
        }
        PlanOutcome::BoundOnly { bound, note } => match format {
            Format::Json | Format::Csv => {
                let json = serde_json::json!({
                    "machines": machines,
                    "bound": frac_str(bound),
                    "note": note,
                });
                println!("{}", serde_json::to_string_pretty(&json).unwrap());
            }
            Format::Human => {
                println!("machines: {machines}");
                println!("bound:    {}", frac_str(bound));
                println!("note:     {note}");
            }
        },
    }
    Ok(())
}

fn load_distribution(path: &Path) -> Result<(Design, Distribution), String> {
    let d = designs::load_design(path).map_err(|e| e.to_string())?;
    let dist = distribution_from_design(&d).map_err(|e| e.to_string())?;
    Ok((d, dist))
}

fn cmd_distribute(design: &Path, items: u64, out_dir: &Path) -> Result<(), String> {
    let (_, dist) = load_distribution(design)?;
    let rep = report(&dist);
    let placement = make_placement(&dist, items);
    let stem = design.file_stem().and_then(|s| s.to_str()).unwrap_or("design");
    let placement_path = out_dir.join(format!("{stem}.placement.csv"));
    let manifest_path = out_dir.join(format!("{stem}.manifest.json"));
    std::fs::write(&placement_path, placement_to_csv(&placement, &dist))
        .map_err(|e| e.to_string())?;
    let man = manifest(&dist, &rep);
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&man).unwrap())
        .map_err(|e| e.to_string())?;
    println!("wrote {}", placement_path.display());
    println!("wrote {}", manifest_path.display());
    println!("limit {} bound {} optimal {}", man.limit, man.bound, man.optimal);
    Ok(())
}

fn cmd_schedule(design: &Path, items: u64, out: Option<&Path>) -> Result<(), String> {
    let (_, dist) = load_distribution(design)?;
    let placement = make_placement(&dist, items);
    let schedule = match make_schedule(&dist, &placement) {
        Ok(s) => s,
        Err(SchedulerError::NotLambdaOne) => {
            make_schedule_general(&dist, &placement).map_err(|e| e.to_string())?
        }
        Err(e) => return Err(e.to_string()),
    };
    let csv = schedule_to_csv(&schedule);
    match out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    let max = schedule.load.iter().max().copied().unwrap_or(0);
    let min = schedule.load.iter().min().copied().unwrap_or(0);
    eprintln!(
        "tasks {} load min {} max {} imbalance {}",
        schedule.load.iter().sum::<u64>(),
        min,
        max,
        imbalance(&schedule)
    );
    Ok(())
}

fn parse_frac(s: &str) -> Result<Frac, String> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: u64 = n.trim().parse().map_err(|_| format!("invalid fraction '{s}'"))?;
            let d: u64 = d.trim().parse().map_err(|_| format!("invalid fraction '{s}'"))?;
            if d == 0 {
                return Err(format!("invalid fraction '{s}': zero denominator"));
            }
            Ok(Frac::new(n, d))
        }
        None => {
            let n: u64 = s.trim().parse().map_err(|_| format!("invalid fraction '{s}'"))?;
            Ok(Frac::from(n))
        }
    }
}

fn cmd_simulate(
    schedule_path: &Path,
    placement_path: &Path,
    fail: Option<&str>,
    task_cost: &str,
    fetch_cost: &str,
) -> Result<(), String> {
    let placement_text = std::fs::read_to_string(placement_path).map_err(|e| e.to_string())?;
    let (placement, hosts) = placement_from_csv(&placement_text).map_err(|e| e.to_string())?;
    let machines = hosts.iter().flatten().max().map(|&m| m + 1).unwrap_or(0);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); machines];
    for (g, hs) in hosts.iter().enumerate() {
        for &m in hs {
            rows[m].push(g);
        }
    }
    for row in &mut rows {
        row.sort_unstable();
    }
    let dist = Distribution {
        machines,
        groups: hosts.len(),
        rows,
        s: placement
            .group_sizes
            .iter()
            .map(|&sz| Frac::new(sz, placement.n_items.max(1)))
            .collect(),
        source_label: format!("file:{}", placement_path.display()),
        lambda: None,
    };
    let schedule_text = std::fs::read_to_string(schedule_path).map_err(|e| e.to_string())?;
    let mut schedule = schedule_from_csv(&schedule_text, machines).map_err(|e| e.to_string())?;
    rebuild_load(&mut schedule, &placement);
    let failure = match fail {
        Some(spec) => {
            let (m, t) = match spec.split_once(':') {
                Some((m, t)) => (
                    m.parse().map_err(|_| format!("invalid --fail '{spec}'"))?,
                    t.parse().map_err(|_| format!("invalid --fail '{spec}'"))?,
                ),
                None => (spec.parse().map_err(|_| format!("invalid --fail '{spec}'"))?, 0),
            };
            Some(Failure { machine: m, after_tasks: t })
        }
        None => None,
    };
    let config = SimConfig {
        task_cost: parse_frac(task_cost)?,
        remote_fetch_cost: parse_frac(fetch_cost)?,
        failure,
    };
    let rep = simulate(&dist, &placement, &schedule, &config).map_err(|e| e.to_string())?;
    println!("{}", serde_json::to_string_pretty(&rep.to_json()).unwrap());
    if !rep.completed {
        return Err(format!("{} comparison pairs were orphaned", rep.orphaned_pairs.len()));
    }
    Ok(())
}

fn cmd_table(max_order: u64, format: Format) -> Result<(), String> {
    let rows = table_rows(max_order);
    let render = |f: Option<Frac>, missing: &str| match f {
        Some(f) => frac_str(f),
        None => missing.to_string(),
    };
    match format {
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "n": r.n,
                        "prime_power": r.factorization,
                        "existence": r.existence,
                        "m": r.m,
                        "projective_limit": r.projective.map(frac_str),
                        "affine_limit": r.affine.map(frac_str),
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&items).unwrap());
        }
        Format::Csv => {
            println!("n,prime_power,existence,m,projective_limit,affine_limit");
            for r in rows {
                println!(
                    "{},{},{},{},{},{}",
                    r.n,
                    r.factorization,
                    r.existence,
                    r.m,
                    render(r.projective, ""),
                    render(r.affine, "")
                );
            }
        }
        Format::Human => {
            println!(
                "{:>3} {:>6} {:>8} {:>6} {:>12} {:>8}",
                "n", "p^r", "exists", "m", "projective", "affine"
            );
            for r in rows {
                let missing = if r.existence == "no" { "x" } else { "?" };
                println!(
                    "{:>3} {:>6} {:>8} {:>6} {:>12} {:>8}",
                    r.n,
                    r.factorization,
                    match r.existence {
                        "yes" => "yes",
                        "no" => "x",
                        _ => "?",
                    },
                    r.m,
                    render(r.projective, missing),
                    render(r.affine, missing)
                );
            }
        }
    }
    Ok(())
}

fn cmd_curve(max_machines: u64) -> Result<(), String> {
    if max_machines < 1 {
        eprintln!("error: --max-machines must be at least 1");
        std::process::exit(2);
    }
    println!("kind,machines,limit,label");
    for p in curve_points(max_machines) {
        println!("{},{},{},{}", p.kind, p.machines, frac_str(p.limit), p.label);
    }
    Ok(())
}
