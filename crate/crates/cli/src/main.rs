//! Command-line front end: run a division procedure on an instance file,
//! verify fairness properties of a stored division, sweep all input
//! orders, replay the built-in demonstration instances, or generate a
//! seeded instance.
//!
//! Exit codes: 0 success (and, for `verify`, all properties pass);
//! 1 a requested property fails or a demo assertion breaks;
//! 2 malformed input or unknown names; 3 unsupported player count;
//! 4 an enumeration cap was hit.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use fairdiv::error::Error;
use fairdiv::instance::{fixtures, generate, Instance};
use fairdiv::io;
use fairdiv::protocols::{sym_prop_traced, Algorithm, Division};
use fairdiv::rational::{format_rational, rat};
use fairdiv::verify::{self, Property, DEFAULT_SYMMETRY_GUARD};

#[derive(Parser)]
#[command(name = "fairdiv", about = "Exact cake-cutting protocols and verifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a division procedure on an instance file.
    Divide(DivideArgs),
    /// Check fairness properties of a stored division.
    Verify(VerifyArgs),
    /// Run a procedure on every input order and compare per-player values.
    Sweep(SweepArgs),
    /// Replay a built-in demonstration instance and assert its numbers.
    Demo(DemoArgs),
    /// Generate a seeded random instance.
    Gen(GenArgs),
}

#[derive(Args)]
struct DivideArgs {
    /// Algorithm: cut-and-choose, last-diminisher, even-paz,
    /// selfridge-conway, kuhn, aristoprop, symprop, sym-envy-free.
    #[arg(short, long)]
    algorithm: String,
    /// Instance file (JSON).
    #[arg(short, long)]
    input: PathBuf,
    /// Where to write the division (JSON); defaults to stdout only.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file (JSON).
    #[arg(short, long)]
    input: PathBuf,
    /// Division file (JSON) produced by `divide`.
    #[arg(short, long)]
    division: PathBuf,
    /// Comma-separated properties: proportional, envy-free, equitable,
    /// aristotelian, query-bound.
    #[arg(short, long)]
    properties: String,
    /// Where to write the report (JSON).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(short, long)]
    algorithm: String,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Largest player count for which the factorial sweep may run.
    #[arg(long, default_value_t = DEFAULT_SYMMETRY_GUARD)]
    guard: usize,
}

#[derive(Args)]
struct DemoArgs {
    /// One of: even-paz-not-aristotelian, last-diminisher-not-aristotelian,
    /// symprop-all-lebesgue-S-count, symprop-concentrated-S-count.
    name: String,
    /// Player count for the all-uniform allocation-count demo.
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(Args)]
struct GenArgs {
    /// Number of players (for random instances; also sizes the parametric
    /// fixtures).
    #[arg(short, long)]
    n: Option<usize>,
    /// Density segments per player.
    #[arg(short = 'k', long, default_value_t = 3)]
    segments: usize,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    /// Make the first D players structurally identical.
    #[arg(short, long, default_value_t = 0)]
    duplicates: usize,
    /// Emit a built-in instance instead: even-paz-not-aristotelian,
    /// last-diminisher-not-aristotelian, all-lebesgue, or
    /// lebesgue-concentrated.
    #[arg(short, long)]
    fixture: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    // die quietly when output is piped into a closed reader
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Divide(args) => cmd_divide(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Demo(args) => cmd_demo(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Schema(_) | Error::Domain(_) | Error::MalformedPartition(_) => 2,
        Error::Capability { .. } => 3,
        Error::ResourceCap(_) => 4,
        _ => 1,
    }
}

fn read_instance(path: &PathBuf) -> Result<Instance, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
    io::instance_from_json(&text)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    if let Some(path) = path {
        fs::write(path, text)
            .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn print_division(instance: &Instance, division: &Division) {
    println!("algorithm: {}", division.algorithm);
    for ((name, piece), value) in instance
        .names()
        .iter()
        .zip(&division.pieces)
        .zip(&division.values)
    {
        let intervals = piece
            .intervals()
            .iter()
            .map(|iv| format!("[{}, {})", iv.lo(), iv.hi()))
            .collect::<Vec<_>>()
            .join(" u ");
        let shown = if intervals.is_empty() {
            "(empty)".to_string()
        } else {
            intervals
        };
        println!("  {name}: value {}  piece {shown}", format_rational(value));
    }
    println!(
        "ledger: {} evals, {} cuts",
        division.ledger.eval_count(),
        division.ledger.cut_count()
    );
}

fn cmd_divide(args: DivideArgs) -> Result<ExitCode, Error> {
    let algorithm = Algorithm::from_str(&args.algorithm)?;
    let instance = read_instance(&args.input)?;
    let division = algorithm.run(instance.valuations()).map_err(|e| match e {
        Error::ResourceCap(detail) => {
            Error::ResourceCap(format!("{detail} (instance {})", args.input.display()))
        }
        other => other,
    })?;
    print_division(&instance, &division);
    write_output(
        &args.output,
        &io::division_to_json(&division, instance.names()),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let instance = read_instance(&args.input)?;
    let text = fs::read_to_string(&args.division)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", args.division.display())))?;
    let loaded = io::division_from_json(&text)?;
    if loaded.order != instance.names() {
        return Err(Error::Schema(
            "division and instance disagree on the player list".into(),
        ));
    }
    let properties: Vec<Property> = args
        .properties
        .split(',')
        .map(|s| Property::from_str(s.trim()))
        .collect::<Result<_, _>>()?;
    let report = verify::report_for_pieces(
        &loaded.algorithm,
        &loaded.pieces,
        instance.valuations(),
        loaded.eval_count,
        loaded.cut_count,
        &properties,
    )?;
    for check in &report.checks {
        let verdict = if check.pass { "pass" } else { "fail" };
        match &check.witness {
            Some(w) => println!(
                "{}: {verdict} (players {} / {}: {} vs {})",
                check.property.name(),
                instance.names()[w.player_a],
                instance.names()[w.player_b],
                format_rational(&w.value_a),
                format_rational(&w.value_b),
            ),
            None => match &check.detail {
                Some(d) => println!("{}: {verdict} ({d})", check.property.name()),
                None => println!("{}: {verdict}", check.property.name()),
            },
        }
    }
    write_output(&args.output, &io::report_to_json(&report, instance.names()))?;
    if report.all_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let algorithm = Algorithm::from_str(&args.algorithm)?;
    let instance = read_instance(&args.input)?;
    let check = verify::check_symmetric(algorithm, instance.valuations(), args.guard)?;
    println!("symmetric: {}", check.pass);
    for (perm, values) in &check.orders {
        let order = perm
            .iter()
            .map(|&p| instance.names()[p].clone())
            .collect::<Vec<_>>()
            .join(",");
        let row = instance
            .names()
            .iter()
            .zip(values)
            .map(|(name, v)| format!("{name}={}", format_rational(v)))
            .collect::<Vec<_>>()
            .join(" ");
        println!("  [{order}] {row}");
    }
    if let Some(w) = &check.witness {
        println!(
            "witness: player {} gets {} under the identity order but {} under a permuted order",
            instance.names()[w.player],
            format_rational(&w.baseline),
            format_rational(&w.observed)
        );
    }
    write_output(&args.output, &io::sweep_to_json(&check, instance.names()))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_demo(args: DemoArgs) -> Result<ExitCode, Error> {
    let ok = match args.name.as_str() {
        "even-paz-not-aristotelian" => demo_even_paz()?,
        "last-diminisher-not-aristotelian" => demo_last_diminisher()?,
        "symprop-all-lebesgue-S-count" => demo_symprop_uniform(args.n)?,
        "symprop-concentrated-S-count" => demo_symprop_concentrated()?,
        other => return Err(Error::Schema(format!("unknown demo {other:?}"))),
    };
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn assert_line(label: &str, ok: bool) -> bool {
    println!("  assert {label}: {}", if ok { "ok" } else { "FAILED" });
    ok
}

fn demo_even_paz() -> Result<bool, Error> {
    println!("halving protocol on four players, two of them identical uniforms");
    let instance = fixtures::even_paz_non_aristotelian();
    let division = Algorithm::EvenPaz.run(instance.valuations())?;
    print_division(&instance, &division);
    let mut ok = true;
    ok &= assert_line("p1 value == 1/4", division.values[0] == rat(1, 4));
    ok &= assert_line("p4 value == 49/100", division.values[3] == rat(49, 100));
    ok &= assert_line(
        "p1 and p4 share one measure",
        instance.valuations()[0] == instance.valuations()[3],
    );
    ok &= assert_line(
        "49/100 > 1/4, so equals were treated unequally",
        division.values[3] > division.values[0],
    );
    Ok(ok)
}

fn demo_last_diminisher() -> Result<bool, Error> {
    println!("last-diminisher rounds on three players, two of them identical uniforms");
    let instance = fixtures::last_diminisher_non_aristotelian();
    let division = Algorithm::LastDiminisher.run(instance.valuations())?;
    print_division(&instance, &division);
    let mut ok = true;
    ok &= assert_line("p1 value == 1/3", division.values[0] == rat(1, 3));
    ok &= assert_line("p2 value == 1/2", division.values[1] == rat(1, 2));
    ok &= assert_line(
        "p1 and p2 share one measure",
        instance.valuations()[0] == instance.valuations()[1],
    );
    ok &= assert_line(
        "1/2 > 1/3, so equals were treated unequally",
        division.values[1] > division.values[0],
    );
    Ok(ok)
}

fn demo_symprop_uniform(n: usize) -> Result<bool, Error> {
    println!("symmetric protocol on {n} identical uniform players");
    let instance = fixtures::all_lebesgue(n);
    let (division, trace) = sym_prop_traced(instance.valuations())?;
    print_division(&instance, &division);
    let factorial: usize = (1..=n).product();
    let round = &trace[0];
    println!(
        "first round: {} maximal allocations over boundary {}",
        round.allocation_count,
        round
            .boundary
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(", ")
    );
    let mut ok = true;
    ok &= assert_line(
        &format!("|S| == {n}! == {factorial}"),
        round.allocation_count == factorial,
    );
    ok &= assert_line(
        &format!("every value == 1/{n}"),
        division.values.iter().all(|v| *v == rat(1, n as i64)),
    );
    Ok(ok)
}

fn demo_symprop_concentrated() -> Result<bool, Error> {
    println!("symmetric protocol on two uniform players and three concentrated on [4/5, 1]");
    let instance = fixtures::lebesgue_with_concentrated(2);
    let (division, trace) = sym_prop_traced(instance.valuations())?;
    print_division(&instance, &division);
    let round = &trace[0];
    println!(
        "first round: {} maximal allocations, {} distinct matched-piece subsets",
        round.allocation_count, round.piece_subset_count
    );
    let mut ok = true;
    ok &= assert_line(
        "6 == C(4, 2) matched-piece subsets in round one",
        round.piece_subset_count == 6,
    );
    ok &= assert_line(
        "uniform players receive exactly 1/5 in round one",
        division.values[0] == rat(1, 5) && division.values[1] == rat(1, 5),
    );
    Ok(ok)
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, Error> {
    let instance = match args.fixture.as_deref() {
        Some("even-paz-not-aristotelian") => fixtures::even_paz_non_aristotelian(),
        Some("last-diminisher-not-aristotelian") => fixtures::last_diminisher_non_aristotelian(),
        Some("all-lebesgue") => fixtures::all_lebesgue(args.n.unwrap_or(3)),
        Some("lebesgue-concentrated") => fixtures::lebesgue_with_concentrated(args.n.unwrap_or(2)),
        Some(other) => return Err(Error::Schema(format!("unknown fixture {other:?}"))),
        None => {
            let n = args
                .n
                .ok_or_else(|| Error::Schema("either --n or --fixture is required".into()))?;
            generate(n, args.segments, args.seed, args.duplicates)?
        }
    };
    let json = io::instance_to_json(&instance);
    match &args.output {
        Some(_) => write_output(&args.output, &json)?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}
