//! Command-line front end: build Varchenko matrices, reduce them to block
//! diagonal form, check determinant identities, and sweep the exhaustive
//! small-diagram corpus.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use varchenko::arrangement::{
    enumerate_regions, intersection_poset, parse_wiring_diagram, topes_from_file, Tope,
    WiringDiagram,
};
use varchenko::error::{ParseError, ReductionError};
use varchenko::oracle::{
    bareiss_symbolic_determinant, brute_determinant, enumerate_diagrams, naive_regions,
    seeded_assignment,
};
use varchenko::reduction::{eliminate, good_numbering, verify_block_form};
use num_rational::BigRational;
use num_traits::One;
use varchenko::varchenko::{
    determinant_formula_factors, leftover_determinant, leftover_matrix,
    varchenko_determinant_formula, varchenko_matrix, WeightAssignment,
};
use varchenko::{Int, Poly};
use varchenko::poly::VariableId;

const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_NO_NUMBERING: u8 = 5;

#[derive(Parser)]
#[command(
    name = "varchenko",
    about = "Varchenko matrices of pseudoline arrangements: construction, block diagonal forms, determinant identities"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Grid,
    Entries,
}

#[derive(Args)]
struct SeedArg {
    /// Seed for the rational evaluation points.
    #[arg(long, default_value_t = 7, env = "VARCHENKO_SEED")]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the Varchenko matrix of a wiring diagram or tope file.
    Matrix {
        input: PathBuf,
        /// Force tope-file interpretation.
        #[arg(long, conflicts_with = "wiring")]
        topes: bool,
        /// Force wiring-diagram interpretation.
        #[arg(long)]
        wiring: bool,
        #[arg(long, value_enum, default_value = "grid")]
        format: Format,
    },
    /// Reduce a wiring diagram's Varchenko matrix to block diagonal form.
    Reduce {
        input: PathBuf,
        /// Run the five-part verification and print the report.
        #[arg(long)]
        verify: bool,
        /// Write the verification report to this file instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Compare det(V) with the closed-form determinant formula.
    Det {
        input: PathBuf,
        /// Compare fully symbolically instead of at evaluation points.
        #[arg(long)]
        symbolic: bool,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Reduce and verify every diagram of the exhaustive n-wire corpus.
    Corpus {
        n: usize,
        /// Include degenerate (size ≥ 3) events.
        #[arg(long)]
        degenerate: bool,
        /// Worker threads for the sweep (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Print the leftover matrix L^n and its determinant.
    Leftover { n: usize },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure {
            code,
            msg: msg.into(),
        }
    }
}

fn parse_code(e: &ParseError) -> u8 {
    match e {
        ParseError::Syntax { .. } => EXIT_PARSE,
        ParseError::InvalidEvent { .. } | ParseError::InvalidTope { .. } => EXIT_VALIDATION,
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_wiring(path: &PathBuf) -> Result<WiringDiagram, Failure> {
    let text = read_input(path)?;
    parse_wiring_diagram(&text).map_err(|e| Failure::new(parse_code(&e), e.to_string()))
}

fn looks_like_wiring(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .map(|l| l.starts_with("wires"))
        .unwrap_or(false)
}

fn reduction_code(e: &ReductionError) -> u8 {
    match e {
        ReductionError::NumberingNotFound => EXIT_NO_NUMBERING,
        _ => EXIT_VERIFY,
    }
}

fn cmd_matrix(input: PathBuf, topes: bool, wiring: bool, format: Format) -> Result<(), Failure> {
    let text = read_input(&input)?;
    let tope_list: Vec<Tope> = if wiring || (!topes && looks_like_wiring(&text)) {
        let w =
            parse_wiring_diagram(&text).map_err(|e| Failure::new(parse_code(&e), e.to_string()))?;
        enumerate_regions(&w)
            .regions
            .into_iter()
            .map(|r| r.tope)
            .collect()
    } else {
        topes_from_file(&text).map_err(|e| Failure::new(parse_code(&e), e.to_string()))?
    };
    let n = tope_list[0].len();
    let vm = varchenko_matrix::<Int>(&tope_list, &WeightAssignment::standard(n))
        .map_err(|e| Failure::new(EXIT_VALIDATION, e.to_string()))?;
    match format {
        Format::Grid => print!("{}", vm.matrix.render_grid()),
        Format::Entries => print!("{}", vm.matrix.render_entries()),
    }
    Ok(())
}

fn cmd_reduce(
    input: PathBuf,
    verify: bool,
    report: Option<PathBuf>,
    seed: u64,
) -> Result<(), Failure> {
    let w = load_wiring(&input)?;
    let geom = enumerate_regions(&w);
    let poset = intersection_poset(&w);
    let weights = WeightAssignment::standard(w.n);
    let topes: Vec<Tope> = geom.regions.iter().map(|r| r.tope.clone()).collect();
    let vm = varchenko_matrix::<Int>(&topes, &weights)
        .map_err(|e| Failure::new(EXIT_VALIDATION, e.to_string()))?;
    let numbering = good_numbering(&geom, &poset)
        .map_err(|e| Failure::new(reduction_code(&e), e.to_string()))?;
    let bdf = eliminate(&geom, &poset, &weights, &vm, &numbering)
        .map_err(|e| Failure::new(reduction_code(&e), e.to_string()))?;
    print!("{}", bdf.render());
    if verify {
        let rep = verify_block_form(&bdf, &poset, &weights, seed);
        match report {
            Some(path) => std::fs::write(&path, rep.to_string())
                .map_err(|e| Failure::new(EXIT_VERIFY, format!("{}: {e}", path.display())))?,
            None => print!("{rep}"),
        }
        if !rep.all_passed() {
            return Err(Failure::new(EXIT_VERIFY, "verification failed"));
        }
    }
    Ok(())
}

fn cmd_det(input: PathBuf, symbolic: bool, seed: u64) -> Result<(), Failure> {
    let w = load_wiring(&input)?;
    let geom = enumerate_regions(&w);
    let poset = intersection_poset(&w);
    let weights = WeightAssignment::standard(w.n);
    let topes: Vec<Tope> = geom.regions.iter().map(|r| r.tope.clone()).collect();
    let vm = varchenko_matrix::<Int>(&topes, &weights)
        .map_err(|e| Failure::new(EXIT_VALIDATION, e.to_string()))?;
    if symbolic {
        let formula = varchenko_determinant_formula::<Int>(&poset, &weights);
        let det: Poly = bareiss_symbolic_determinant(&vm.matrix);
        println!("formula {formula}");
        println!("det     {det}");
        if det != formula {
            return Err(Failure::new(EXIT_VERIFY, "symbolic determinant mismatch"));
        }
    } else {
        let factors = determinant_formula_factors::<Int>(&poset, &weights);
        for i in 0..3u64 {
            let a = seeded_assignment(w.n, seed.wrapping_add(i));
            let brute = brute_determinant(&vm.matrix, &a);
            let value = factors.iter().fold(BigRational::one(), |acc, (f, e)| {
                let v = f.evaluate(&a).expect("full assignment");
                acc * num_traits::pow(v, *e as usize)
            });
            println!("assignment {i}: formula {value} det {brute}");
            if brute != value {
                return Err(Failure::new(EXIT_VERIFY, "determinant mismatch"));
            }
        }
    }
    Ok(())
}

fn check_diagram(w: &WiringDiagram, seed: u64) -> Result<String, String> {
    let geom = enumerate_regions(w);
    let expected = 1 + w.n + w.events.iter().map(|e| e.size - 1).sum::<usize>();
    if geom.num_regions() != expected {
        return Err(format!(
            "region count {} != {expected}",
            geom.num_regions()
        ));
    }
    let sweep: BTreeSet<Tope> = geom.regions.iter().map(|r| r.tope.clone()).collect();
    if naive_regions(w) != sweep {
        return Err("naive region oracle disagrees with the sweep".into());
    }
    let poset = intersection_poset(w);
    let weights = WeightAssignment::standard(w.n);
    let topes: Vec<Tope> = geom.regions.iter().map(|r| r.tope.clone()).collect();
    let vm = varchenko_matrix::<Int>(&topes, &weights).map_err(|e| e.to_string())?;
    let numbering = good_numbering(&geom, &poset).map_err(|e| e.to_string())?;
    let bdf = eliminate(&geom, &poset, &weights, &vm, &numbering).map_err(|e| e.to_string())?;
    let report = verify_block_form(&bdf, &poset, &weights, seed);
    if !report.all_passed() {
        return Err(format!("verification failed:\n{report}"));
    }
    let degenerate = w.events.iter().filter(|e| e.size >= 3).count();
    Ok(format!(
        "{} regions, {} degenerate points: ok",
        geom.num_regions(),
        degenerate
    ))
}

fn cmd_corpus(n: usize, degenerate: bool, jobs: Option<usize>, seed: u64) -> Result<(), Failure> {
    if n > 6 {
        return Err(Failure::new(EXIT_VALIDATION, "corpus is capped at 6 wires"));
    }
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::new(EXIT_VALIDATION, e.to_string()))?;
    }
    let max_events = n * (n - 1) / 2;
    let diagrams = enumerate_diagrams(n, max_events, degenerate);
    use rayon::prelude::*;
    let results: Vec<(String, Result<String, String>)> = diagrams
        .par_iter()
        .map(|w| {
            let desc: Vec<String> = w
                .events
                .iter()
                .map(|e| format!("({},{})", e.bottom, e.size))
                .collect();
            let desc = if desc.is_empty() {
                "no events".to_string()
            } else {
                desc.join(" ")
            };
            (desc, check_diagram(w, seed))
        })
        .collect();
    let mut failures = 0usize;
    for (desc, res) in &results {
        match res {
            Ok(summary) => println!("{desc}: {summary}"),
            Err(msg) => {
                println!("{desc}: FAIL {msg}");
                failures += 1;
            }
        }
    }
    println!(
        "corpus n={n}: {} diagrams, {} failures",
        results.len(),
        failures
    );
    if failures > 0 {
        return Err(Failure::new(EXIT_VERIFY, "corpus failures"));
    }
    Ok(())
}

fn cmd_leftover(n: usize) -> Result<(), Failure> {
    if n < 3 {
        return Err(Failure::new(
            EXIT_VALIDATION,
            "leftover matrices need multiplicity at least 3",
        ));
    }
    let vars: Vec<VariableId> = (1..=n as u32).map(VariableId).collect();
    let l = leftover_matrix::<Int>(n, &vars);
    print!("{}", l.matrix.render_grid());
    println!("det {}", leftover_determinant::<Int>(n, &vars));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Matrix {
            input,
            topes,
            wiring,
            format,
        } => cmd_matrix(input, topes, wiring, format),
        Cmd::Reduce {
            input,
            verify,
            report,
            seed,
        } => cmd_reduce(input, verify, report, seed.seed),
        Cmd::Det {
            input,
            symbolic,
            seed,
        } => cmd_det(input, symbolic, seed.seed),
        Cmd::Corpus {
            n,
            degenerate,
            jobs,
            seed,
        } => cmd_corpus(n, degenerate, jobs, seed.seed),
        Cmd::Leftover { n } => cmd_leftover(n),
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pager or `head` closes the pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
