use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gordian::goeritz::{dump_matrices, linking_diagonal, smith_normal_form};
use gordian::laurent::certificate_search;
use gordian::numtheory::pair_passes_det_condition;
use gordian::obstruct::VerdictCounts;
use gordian::*;
use serde_json::json;

#[derive(Parser)]
#[command(name = "gordian", version, about = "Knot determinants and unknotting-number-one obstructions from DT codes")]
struct Cli {
    /// Emit JSON lines instead of a human-readable table
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Knot determinant of a DT code
    Det {
        dtcode: String,
        /// Print the combinatorial map and Goeritz matrix
        #[arg(long)]
        dump: bool,
    },
    /// Determinants of every single-sign-flip neighbor
    Neighbors { dtcode: String },
    /// Test whether the knot can have unknotting number one
    #[command(name = "obstruct-u1")]
    ObstructU1 {
        dtcode: String,
        #[arg(long, value_enum, default_value_t = EngineArg::Both)]
        engine: EngineArg,
        /// Name used in the output
        #[arg(long)]
        name: Option<String>,
    },
    /// Screen a knot table for Alexander-polynomial neighbors of the unknot
    CanScreen {
        #[arg(long)]
        table: PathBuf,
    },
    /// Run obstruction engines over a knot table
    Survey {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_enum, default_value_t = SurveyEngine::All)]
        engine: SurveyEngine,
        /// Skip knots already known to have unknotting number one
        #[arg(long)]
        only_unknown: bool,
    },
    /// Search for a certificate that `target` is an Alexander neighbor of `delta`
    Certificate {
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 4)]
        deg: usize,
        #[arg(long, default_value_t = 3)]
        coeff: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Det,
    Lickorish,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SurveyEngine {
    Det,
    Lickorish,
    Can,
    All,
}

impl EngineArg {
    fn engines(self) -> Vec<Engine> {
        match self {
            EngineArg::Det => vec![Engine::DetCondition],
            EngineArg::Lickorish => vec![Engine::Lickorish],
            EngineArg::Both => vec![Engine::DetCondition, Engine::Lickorish],
        }
    }
}

impl SurveyEngine {
    fn engines(self) -> Vec<Engine> {
        match self {
            SurveyEngine::Det => vec![Engine::DetCondition],
            SurveyEngine::Lickorish => vec![Engine::Lickorish],
            SurveyEngine::Can => vec![Engine::CanScreen],
            SurveyEngine::All => vec![Engine::DetCondition, Engine::Lickorish, Engine::CanScreen],
        }
    }
}

fn describe(e: &Evidence) -> String {
    match e {
        Evidence::NeighborDeterminant { det, position, neighbor_det } => {
            format!("det {det}; flipping entry {position} gives det {neighbor_det}")
        }
        Evidence::NeighborsPass { det, neighbor_dets } => format!("det {det}; neighbor dets {neighbor_dets:?} all pass"),
        Evidence::NonCyclicHomology { torsion } => format!("H1 of double cover is non-cyclic {torsion:?}"),
        Evidence::LinkingEntry { det, index, numerator } => {
            format!("linking entry {index} = {numerator}/{det} has no 2t^2 = ±{numerator} (mod {det})")
        }
        Evidence::LinkingPasses { det, numerators } => format!("linking numerators {numerators:?} over {det} pass"),
        Evidence::TrivialDeterminant => "det 1".into(),
        Evidence::Can { flags, determinant, forbidden_residue, breadth2_n, kawauchi_witness_prime } => {
            let show = |f: Option<bool>| match f {
                Some(true) => "yes",
                Some(false) => "no",
                None => "?",
            };
            let mut s = format!("a={} b={} c={}", show(flags.a), show(flags.b), show(flags.c));
            if let Some(d) = determinant {
                s.push_str(&format!("; det {d}"));
            }
            if let Some(r) = forbidden_residue {
                s.push_str(&format!("; ±{r} non-residue"));
            }
            if let Some(n) = breadth2_n {
                s.push_str(&format!("; breadth-2 n = {n}"));
            }
            if let Some(p) = kawauchi_witness_prime {
                s.push_str(&format!("; witness prime {p}"));
            }
            s
        }
        Evidence::Error { message } => message.clone(),
    }
}

fn print_report(r: &ObstructionReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string(r).expect("report serializes"));
    } else {
        println!("{:<14} {:<13} {:<15} {}", r.name, r.engine.name(), r.verdict.name(), describe(&r.evidence));
    }
}

fn print_counts(counts: &VerdictCounts) -> String {
    format!(
        "obstructed {}, not_obstructed {}, inapplicable {}, inconclusive {}",
        counts.obstructed, counts.not_obstructed, counts.inapplicable, counts.inconclusive
    )
}

fn load(path: &Path) -> Result<Vec<KnotRecord>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let outcome = ingest_table(file).with_context(|| format!("cannot read {}", path.display()))?;
    for e in &outcome.errors {
        eprintln!("warning: {}: {e}", path.display());
    }
    Ok(outcome.records)
}

fn parse_code(text: &str) -> Result<DtCode> {
    parse_dt(text).with_context(|| format!("invalid DT code {text:?}"))
}

fn run(cli: Cli) -> Result<()> {
    let json = cli.json;
    match cli.command {
        Command::Det { dtcode, dump } => {
            let dt = parse_code(&dtcode)?;
            let diag = realize(&dt)?;
            let det = knot_determinant(&diag);
            if json {
                println!("{}", json!({ "dt": serialize_dt(&dt), "determinant": det }));
            } else {
                println!("{det}");
            }
            if dump {
                let g = goeritz_matrix(&diag, &checkerboard(&diag));
                eprint!("{}{}", diag.dump(), dump_matrices(&g));
                if let Ok(h) = smith_normal_form(&g.g) {
                    eprintln!("torsion {:?}", h.torsion);
                }
                if let Ok(ld) = linking_diagonal(&g) {
                    eprintln!("linking numerators {:?} over {}", ld.numerators, ld.det);
                }
            }
        }
        Command::Neighbors { dtcode } => {
            let dt = parse_code(&dtcode)?;
            let diag = realize(&dt)?;
            let det = knot_determinant(&diag);
            if !json {
                println!("det {det}");
            }
            for (i, code) in flip_neighbors(&dt) {
                let ndet = knot_determinant(&shadow_with_flip(&diag, i)?);
                let passes = pair_passes_det_condition(det, ndet).ok();
                if json {
                    let line = json!({
                        "position": i, "dt": serialize_dt(&code), "determinant": ndet, "pair_passes": passes,
                    });
                    println!("{line}");
                } else {
                    let p = match passes {
                        Some(true) => "passes",
                        Some(false) => "FAILS",
                        None => "n/a",
                    };
                    println!("{i:>3}  {:<40} {ndet:>6}  {p}", serialize_dt(&code));
                }
            }
        }
        Command::ObstructU1 { dtcode, engine, name } => {
            let dt = parse_code(&dtcode)?;
            let name = name.unwrap_or_else(|| serialize_dt(&dt));
            let record = KnotRecord::new(name, dt);
            let survey = run_survey(&[record], &engine.engines(), &SurveyOptions::default());
            survey.reports().for_each(|r| print_report(r, json));
        }
        Command::CanScreen { table } => {
            let records = load(&table)?;
            let survey = run_survey(&records, &[Engine::CanScreen], &SurveyOptions::default());
            survey.reports().for_each(|r| print_report(r, json));
            if !json {
                let c = survey.criterion_counts;
                println!(
                    "screened {}: a {}, b {}, c {}, union {}",
                    c.screened, c.a, c.b, c.c, c.union
                );
            }
        }
        Command::Survey { table, engine, only_unknown } => {
            let records = load(&table)?;
            let survey = run_survey(&records, &engine.engines(), &SurveyOptions { only_unknown });
            survey.reports().for_each(|r| print_report(r, json));
            if !json {
                println!("knots surveyed: {}", survey.knots.len());
                for (e, counts) in &survey.engine_counts {
                    println!("{:<13} {}", e.name(), print_counts(counts));
                }
            }
        }
        Command::Certificate { delta, target, deg, coeff } => {
            let d: LaurentPoly = delta.parse().with_context(|| format!("invalid polynomial {delta:?}"))?;
            let t: LaurentPoly = target.parse().with_context(|| format!("invalid polynomial {target:?}"))?;
            let found = certificate_search(&d, &t, deg, coeff)?;
            match (found, json) {
                (Some(c), true) => println!(
                    "{}",
                    json!({ "found": true, "r": c.r.to_string(), "m": c.m.to_string(), "sign": c.sign })
                ),
                (None, true) => println!("{}", json!({ "found": false, "deg": deg, "coeff": coeff })),
                (Some(c), false) => println!("r = {}\nm = {}\nsign = {}", c.r, c.m, c.sign),
                (None, false) => println!("no certificate with deg <= {deg}, |coeff| <= {coeff} (inconclusive)"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
