//! Command-line front end: dataset ingestion, belief-function algebra,
//! labeling-process simulation, and replication reports.
//!
//! Machine output goes to stdout as JSON under `--json`; diagnostics always
//! go to stderr. Identical invocations produce byte-identical output.

use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use evlab::combine::CombinationResult;
use evlab::population::{
    apply_general_process, GeneralProcessReport, Labeling, LabelingProcessSpec, Population,
    SimulationMode,
};
use evlab::replication::{self, ReplicationRecord, Verdict};
use evlab::{
    bpa_from_gamma, build_gamma, condition, dempster_combine, DatasetTable, Error, Frame,
    MassFunction, Rat, Subset,
};

const EXIT_TOTAL_CONFLICT: u8 = 3;

#[derive(Parser)]
#[command(name = "evlab", version, about = "Exact Dempster-Shafer evidence toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON on stdout instead of the human table.
    #[arg(long, global = true)]
    json: bool,
    /// Fractional digits for decimal renderings (display only).
    #[arg(long, global = true, default_value_t = 4)]
    precision: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build the empirical mass function of a target attribute from a CSV
    /// dataset and print its m/Bel/Pl table.
    Bpa {
        /// CSV file: header row of attribute names, string cells.
        #[arg(long)]
        input: PathBuf,
        /// Observable attribute used for prediction.
        #[arg(long)]
        observable: String,
        /// Target attribute whose values form the frame.
        #[arg(long)]
        target: String,
    },
    /// Combine two mass-function JSON files with Dempster's rule.
    Combine {
        file1: PathBuf,
        file2: PathBuf,
    },
    /// Condition a mass-function JSON file on a subset.
    Condition {
        file: PathBuf,
        /// Comma-separated element names of the conditioning set.
        #[arg(long)]
        on: String,
    },
    /// Evaluate a randomized labeling process against its Dempster
    /// prediction.
    Simulate {
        /// Population JSON file.
        #[arg(long)]
        population: PathBuf,
        /// Process JSON file (labels with selection probabilities).
        #[arg(long)]
        process: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-run the worked-example replications.
    Replicate {
        /// One of: table1, conditioning, killer, implication, roughset, all.
        name: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Mc,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::TotalConflict(_) => ExitCode::from(EXIT_TOTAL_CONFLICT),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Bpa {
            input,
            observable,
            target,
        } => cmd_bpa(cli, input, observable, target),
        Command::Combine { file1, file2 } => cmd_combine(cli, file1, file2),
        Command::Condition { file, on } => cmd_condition(cli, file, on),
        Command::Simulate {
            population,
            process,
            mode,
            trials,
            seed,
        } => cmd_simulate(cli, population, process, *mode, *trials, *seed),
        Command::Replicate { name } => cmd_replicate(cli, name),
    }
}

fn open(path: &PathBuf) -> Result<File, Error> {
    File::open(path).map_err(|e| Error::Csv(format!("{}: {e}", path.display())))
}

fn load_mass(path: &PathBuf) -> Result<MassFunction, Error> {
    let file = open(path)?;
    let json = serde_json::from_reader(file)
        .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
    MassFunction::from_json(&json)
}

fn parse_subset(frame: &Frame, spec: &str) -> Result<Subset, Error> {
    frame.subset_of_names(spec.split(',').map(str::trim).filter(|s| !s.is_empty()))
}

fn print_mass_table(cli: &Cli, m: &MassFunction) -> Result<(), Error> {
    let frame = m.frame();
    println!("{:<24} {:>12} {:>12} {:>12}", "set", "m", "Bel", "Pl");
    let rows: Vec<Subset> = if frame.len() <= 6 {
        frame.all_subsets().filter(|s| !s.is_empty()).collect()
    } else {
        m.focals().map(|(s, _)| s).collect()
    };
    for s in rows {
        let mass = m.mass(&s)?;
        let bel = m.belief(&s)?;
        let pl = m.plausibility(&s)?;
        println!(
            "{:<24} {:>12} {:>12} {:>12}   ({} / {} / {})",
            s.to_string(),
            mass.to_decimal(cli.precision),
            bel.to_decimal(cli.precision),
            pl.to_decimal(cli.precision),
            mass,
            bel,
            pl
        );
    }
    Ok(())
}

fn cmd_bpa(
    cli: &Cli,
    input: &PathBuf,
    observable: &str,
    target: &str,
) -> Result<ExitCode, Error> {
    let data = DatasetTable::from_csv(open(input)?)?;
    let g = build_gamma(&data, observable, target)?;
    let m = bpa_from_gamma(&g)?;
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&m.to_json()).unwrap());
    } else {
        print_mass_table(cli, &m)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_combination(cli: &Cli, r: &CombinationResult) -> Result<(), Error> {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&r.to_json()).unwrap());
        return Ok(());
    }
    print_mass_table(cli, &r.combined)?;
    println!(
        "conflict = {} ({})   c = {} ({})",
        r.conflict_mass,
        r.conflict_mass.to_decimal(cli.precision),
        r.normalization_constant,
        r.normalization_constant.to_decimal(cli.precision)
    );
    Ok(())
}

fn cmd_combine(cli: &Cli, file1: &PathBuf, file2: &PathBuf) -> Result<ExitCode, Error> {
    let m1 = load_mass(file1)?;
    let m2 = load_mass(file2)?;
    let r = dempster_combine(&m1, &m2)?;
    print_combination(cli, &r)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_condition(cli: &Cli, file: &PathBuf, on: &str) -> Result<ExitCode, Error> {
    let m = load_mass(file)?;
    let c = parse_subset(m.frame(), on)?;
    let r = condition(&m, &c)?;
    print_combination(cli, &r)?;
    Ok(ExitCode::SUCCESS)
}

fn bel_vector_json(frame: &Frame, bel: &[Rat], precision: usize) -> serde_json::Value {
    json!(frame
        .all_subsets()
        .map(|s| {
            let v = &bel[s.bits() as usize];
            json!({
                "set": s.elements().cloned().collect::<Vec<_>>(),
                "bel": v,
                "decimal": v.to_decimal(precision),
            })
        })
        .collect::<Vec<_>>())
}

fn cmd_simulate(
    cli: &Cli,
    population: &PathBuf,
    process: &PathBuf,
    mode: Mode,
    trials: u64,
    seed: u64,
) -> Result<ExitCode, Error> {
    let pop = Population::from_json(
        &serde_json::from_reader(open(population)?)
            .map_err(|e| Error::Csv(format!("{}: {e}", population.display())))?,
    )?;
    let proc = LabelingProcessSpec::from_json(
        &serde_json::from_reader(open(process)?)
            .map_err(|e| Error::Csv(format!("{}: {e}", process.display())))?,
        pop.frame(),
    )?;
    let l = Labeling::unlabeled(&pop);
    let sim_mode = match mode {
        Mode::Exact => SimulationMode::ExactExpectation,
        Mode::Mc => SimulationMode::MonteCarlo { trials, seed },
    };
    let report = apply_general_process(&pop, &l, &proc, sim_mode)?;
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&simulate_json(cli, &pop, &report)).unwrap()
        );
    } else {
        print_simulation(cli, &pop, &report);
    }
    Ok(ExitCode::SUCCESS)
}

fn simulate_json(cli: &Cli, pop: &Population, r: &GeneralProcessReport) -> serde_json::Value {
    let frame = pop.frame();
    let mut out = json!({
        "dempster": {
            "conflict": r.dempster.conflict_mass,
            "c": r.dempster.normalization_constant,
            "bel": bel_vector_json(frame, &r.dempster_bel, cli.precision),
        },
        "distributional_limit": {
            "bel": bel_vector_json(frame, &r.limit_bel, cli.precision),
            "matches_dempster": r.limit_matches_dempster,
        },
    });
    if let Some(exact) = &r.exact {
        out["exact_expectation"] = json!({
            "expected_bel": bel_vector_json(frame, &exact.expected_bel, cli.precision),
            "empty_probability": exact.empty_probability,
            "deviations": exact.deviations.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        });
    }
    if let Some(mc) = &r.monte_carlo {
        out["monte_carlo"] = json!({
            "trials": mc.trials,
            "seed": mc.seed,
            "empty_outcomes": mc.empty_outcomes,
            "mean_bel": bel_vector_json(frame, &mc.mean_bel, cli.precision),
            "std_err": mc.std_err,
        });
    }
    out
}

fn print_simulation(cli: &Cli, pop: &Population, r: &GeneralProcessReport) {
    let frame = pop.frame();
    let p = cli.precision;
    println!(
        "dempster prediction: conflict = {}, c = {}",
        r.dempster.conflict_mass, r.dempster.normalization_constant
    );
    println!(
        "distributional limit matches dempster: {}",
        r.limit_matches_dempster
    );
    println!("{:<24} {:>12} {:>12} {:>12}", "set", "dempster", "limit", "observed");
    for s in frame.all_subsets().filter(|s| !s.is_empty()) {
        let i = s.bits() as usize;
        let observed = if let Some(exact) = &r.exact {
            exact.expected_bel[i].to_decimal(p)
        } else if let Some(mc) = &r.monte_carlo {
            mc.mean_bel[i].to_decimal(p)
        } else {
            "-".to_string()
        };
        println!(
            "{:<24} {:>12} {:>12} {:>12}",
            s.to_string(),
            r.dempster_bel[i].to_decimal(p),
            r.limit_bel[i].to_decimal(p),
            observed
        );
    }
    if let Some(exact) = &r.exact {
        println!(
            "empty-population probability: {} ({})",
            exact.empty_probability,
            exact.empty_probability.to_decimal(p)
        );
        let max_dev = exact.deviations.iter().max();
        if let Some(d) = max_dev {
            println!("max |expected − dempster| = {} ({})", d, d.to_decimal(p));
        }
    }
    if let Some(mc) = &r.monte_carlo {
        println!(
            "monte carlo: {} trials, seed {}, {} empty outcomes",
            mc.trials, mc.seed, mc.empty_outcomes
        );
    }
}

fn records_for(name: &str) -> Result<Vec<ReplicationRecord>, Error> {
    match name {
        "table1" => Ok(vec![replication::replicate_table1()?]),
        "conditioning" => Ok(vec![replication::replicate_conditioning()?]),
        "killer" => Ok(vec![replication::replicate_killer()?]),
        "implication" => Ok(vec![replication::replicate_implication()?]),
        "roughset" => Ok(vec![
            replication::rough_set_compare(&replication::rough_set_default_params())?.record,
        ]),
        "all" => replication::replicate_all(),
        other => Err(Error::InvalidParams(format!(
            "unknown replication {other}; expected table1, conditioning, killer, implication, roughset or all"
        ))),
    }
}

fn cmd_replicate(cli: &Cli, name: &str) -> Result<ExitCode, Error> {
    let records = records_for(name)?;
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&records).unwrap());
    } else {
        for rec in &records {
            let verdict = match rec.verdict {
                Verdict::Match => "match",
                Verdict::Mismatch => "MISMATCH",
                Verdict::PaperValueAmbiguous => "ambiguous (see notes)",
            };
            let passed = rec.checks.iter().filter(|c| c.ok).count();
            println!("{:<14} {}/{} checks, verdict: {verdict}", rec.name, passed, rec.checks.len());
            for c in rec.checks.iter().filter(|c| !c.ok) {
                println!("  FAIL {}: computed {} ({})", c.label, c.computed, c.computed_decimal);
            }
            for n in &rec.notes {
                println!("  note: {n}");
            }
        }
    }
    if records.iter().any(|r| r.is_failure()) {
        Ok(ExitCode::FAILURE)
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
