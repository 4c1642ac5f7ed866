//! The `jm` command line: JSON lines on stdout, a human summary on stderr.

use std::ffi::OsString;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::ecurve::{curve_from_t, parse_generators};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_int, BigInt, FactorLimits};
use crate::pipeline::{
    brute_force, enumerate_t, involution, parse_corpus, roundtrip, search_curve_method,
    search_quartic_method, sieve_t, t_orbit, verify_solution, CorpusRecord, SieveConfig, Solution, Stage, TValue,
    Verdict, SHIPPED,
};
use crate::quadform::QuadricOrder;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "jm", version, about = "Search and verify solutions of a^4+b^4+c^4+d^4=(a+b+c+d)^4")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "JM_THREADS")]
    pub threads: Option<usize>,
    /// Largest composite (decimal digits) the factorizer will attempt.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(10..=400))]
    pub factor_digits: Option<u32>,
    /// Append JSON lines to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate t = m/n with m+n <= N and run the sieve stages.
    Sieve {
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
        max_sum: u64,
        /// Comma-separated stages: conjecture, quadric, conic, quartic.
        #[arg(long, default_value = "conjecture,quadric,conic,quartic")]
        order: String,
        /// Drop the conjecture stage.
        #[arg(long)]
        no_conjecture: bool,
        /// Use the s-quadric as the conic.
        #[arg(long)]
        reversed: bool,
    },
    /// Search for solutions at a single t.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Verify a corpus file (default: the shipped corpus).
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Print the six t-values of a solution.
    Orbit(SolutionArg),
    /// Push a solution through every stage of the forward and back maps.
    Roundtrip(SolutionArg),
    /// Exhaustive search with entries bounded by B.
    Brute {
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..=1000))]
        bound: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum SearchCommand {
    /// Points of bounded height on the quartic in the conic slope.
    Quartic {
        #[arg(long)]
        t: String,
        #[arg(long)]
        height: u64,
        #[arg(long)]
        reversed: bool,
    },
    /// Combinations of curve points pulled back to the quartic.
    Curve {
        #[arg(long)]
        t: String,
        /// `u[,v];u[,v];...`; a bare u takes the nonnegative root for v.
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
}

#[derive(Args, Debug)]
pub struct SolutionArg {
    /// `a,b,c,d`
    #[arg(long, allow_hyphen_values = true)]
    pub solution: String,
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    if let Some(d) = cli.factor_digits {
        FactorLimits { max_digits: d as usize, ..FactorLimits::current() }.install();
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return EXIT_USAGE;
        }
    };
    let mut file;
    let sink: &mut dyn Write = match &cli.output {
        Some(path) => match OpenOptions::new().create(true).append(true).open(path) {
            Ok(f) => {
                file = f;
                &mut file
            }
            Err(e) => {
                let _ = writeln!(err, "error: cannot open {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => out,
    };
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let result = pool.install(|| dispatch(&cli.command, &mut obuf, &mut ebuf));
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ebuf, "error: {e}");
            exit_code(&e)
        }
    };
    if let Err(e) = sink.write_all(&obuf).and_then(|_| sink.flush()) {
        let _ = writeln!(ebuf, "error: cannot write output: {e}");
    }
    let _ = err.write_all(&ebuf);
    code
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::FactorizationTooHard { .. } => EXIT_RESOURCE,
        Error::NotASolution(_) | Error::CorpusVerification { .. } => EXIT_VERIFY,
        Error::Io(_) | Error::Internal(_) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Sieve { max_sum, order, no_conjecture, reversed } => {
            let mut stages = SieveConfig::parse_stages(order)?;
            if *no_conjecture {
                stages.retain(|s| *s != Stage::Conjecture);
            }
            let config = SieveConfig { stages, quadric_order: quadric_order(*reversed) };
            cmd_sieve(*max_sum, &config, out, err)
        }
        Command::Search(SearchCommand::Quartic { t, height, reversed }) => {
            let t: TValue = t.parse()?;
            let r = search_quartic_method(&t, *height, quadric_order(*reversed))?;
            if let Some(why) = &r.sieve.undecided {
                writeln!(err, "t = {t}: undecided ({why})")?;
                return Ok(EXIT_RESOURCE);
            }
            if let Some(stage) = r.sieve.failed_stage {
                writeln!(err, "t = {t}: rejected at the {stage} stage")?;
            }
            let source = format!("search-quartic H={height}");
            for s in &r.solutions {
                writeln!(out, "{}", solution_line(&t, s, &source))?;
            }
            writeln!(err, "t = {t}: {} quartic points, {} solutions", r.points, r.solutions.len())?;
            Ok(EXIT_OK)
        }
        Command::Search(SearchCommand::Curve { t, gens, bound }) => {
            let t: TValue = t.parse()?;
            let curve = curve_from_t(&t.to_rational())?;
            let gens = parse_generators(gens, &curve)?;
            let hits = search_curve_method(&t, &gens, *bound)?;
            let mut seen = std::collections::BTreeSet::new();
            for h in &hits {
                if seen.insert(h.solution.clone()) {
                    let tors = if h.torsion { "+T" } else { "" };
                    let source = format!("search-curve n={:?}{tors}", h.coeffs).replace(' ', "");
                    writeln!(out, "{}", solution_line(&t, &h.solution, &source))?;
                }
            }
            writeln!(err, "t = {t}: {} combination hits, {} solutions", hits.len(), seen.len())?;
            Ok(EXIT_OK)
        }
        Command::Verify { input } => {
            let (text, name) = match input {
                Some(p) => (std::fs::read_to_string(p)?, p.display().to_string()),
                None => (SHIPPED.to_string(), "shipped corpus".to_string()),
            };
            cmd_verify(&text, &name, out, err)
        }
        Command::Orbit(arg) => {
            let quad = parse_solution(&arg.solution)?;
            let [a, b, c, d] = &quad;
            if verify_solution(a, b, c, d) != Verdict::Valid {
                writeln!(err, "({}) is not a solution", arg.solution)?;
                return Ok(EXIT_VERIFY);
            }
            let orbit = t_orbit(&quad)?;
            let pairs: Vec<[String; 2]> = orbit
                .iter()
                .filter_map(|t| {
                    let u = involution(t).ok()?;
                    (t < &u).then(|| [format_rational(t), format_rational(&u)])
                })
                .collect();
            let line = json!({
                "solution": quad.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "orbit": orbit.iter().map(format_rational).collect::<Vec<_>>(),
                "pairs": pairs,
            });
            writeln!(out, "{line}")?;
            let shown: Vec<String> = orbit.iter().map(format_rational).collect();
            writeln!(err, "orbit: {}", shown.join(", "))?;
            Ok(EXIT_OK)
        }
        Command::Roundtrip(arg) => {
            let quad = parse_solution(&arg.solution)?;
            let report = roundtrip(&quad)?;
            for step in &report.steps {
                writeln!(out, "{}", serde_json::to_string(step).expect("serializable"))?;
                let label = step.permutation.join(",");
                match (&step.error, step.verified()) {
                    (Some(e), _) => writeln!(err, "({label}): {e}")?,
                    (None, true) => writeln!(err, "({label}) t = {}: verified", step.t.as_deref().unwrap_or("?"))?,
                    (None, false) => writeln!(err, "({label}): a stage check failed")?,
                }
            }
            let ok = report.all_orbit_values_verified();
            writeln!(err, "{} of {} orbit values verified", report.verified_ts().len(), report.orbit.len())?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Brute { bound } => {
            let found = brute_force(*bound);
            let mut nontrivial = 0;
            for q in &found {
                let b = q.map(BigInt::from);
                let verdict = verify_solution(&b[0], &b[1], &b[2], &b[3]);
                if verdict == Verdict::Valid {
                    nontrivial += 1;
                }
                let kind = format!("{verdict:?}").to_lowercase();
                writeln!(out, "{}", json!({"a": q[0].to_string(), "b": q[1].to_string(), "c": q[2].to_string(), "d": q[3].to_string(), "kind": kind}))?;
            }
            if nontrivial == 0 {
                writeln!(err, "bound {bound}: {} quadruples, all trivial", found.len())?;
            } else {
                writeln!(err, "bound {bound}: {} quadruples, {nontrivial} nontrivial", found.len())?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn quadric_order(reversed: bool) -> QuadricOrder {
    if reversed {
        QuadricOrder::Reversed
    } else {
        QuadricOrder::Forward
    }
}

fn cmd_sieve(max_sum: u64, config: &SieveConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let ts: Vec<TValue> = enumerate_t(max_sum).collect();
    use rayon::prelude::*;
    let reports = ts.par_iter().map(|t| sieve_t(t, config)).collect::<Result<Vec<_>>>()?;
    let mut survivors = Vec::new();
    let mut undecided = Vec::new();
    for r in &reports {
        writeln!(out, "{}", serde_json::to_string(r).expect("serializable"))?;
        if r.survives() {
            survivors.push(r.t.to_string());
        }
        if r.undecided.is_some() {
            undecided.push(r.t.to_string());
        }
    }
    writeln!(err, "{} candidates, {} survivors: {}", reports.len(), survivors.len(), survivors.join(", "))?;
    if !undecided.is_empty() {
        writeln!(err, "undecided (factorization limit): {}", undecided.join(", "))?;
        return Ok(EXIT_RESOURCE);
    }
    Ok(EXIT_OK)
}

fn cmd_verify(text: &str, name: &str, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut failures = 0usize;
    let mut total = 0usize;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        total += 1;
        let lineno = i + 1;
        match parse_corpus(line) {
            Ok(recs) => {
                let r: &CorpusRecord = &recs[0];
                writeln!(out, "{}", json!({"line": lineno, "t": r.t.to_string(), "source": r.source, "valid": true}))?;
            }
            Err(Error::CorpusVerification { source_tag, reason, .. }) => {
                failures += 1;
                writeln!(out, "{}", json!({"line": lineno, "source": source_tag, "valid": false, "reason": reason}))?;
                writeln!(err, "{name}:{lineno} ({source_tag}): {reason}")?;
            }
            Err(Error::Parse { message, .. }) => return Err(Error::Parse { line: lineno, message }),
            Err(e) => return Err(e),
        }
    }
    if failures == 0 {
        writeln!(err, "{name}: all {total} records verify")?;
        Ok(EXIT_OK)
    } else {
        writeln!(err, "{name}: {failures} of {total} records failed")?;
        Ok(EXIT_VERIFY)
    }
}

fn parse_solution(s: &str) -> Result<[BigInt; 4]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::InvalidInput(format!("expected a,b,c,d, got `{s}`")));
    }
    let mut v = Vec::with_capacity(4);
    for p in parts {
        v.push(parse_int(p.trim())?);
    }
    Ok(v.try_into().expect("four entries"))
}

fn solution_line(t: &TValue, s: &Solution, source: &str) -> String {
    CorpusRecord { t: t.clone(), quad: s.entries().clone(), source: source.to_string() }.to_line()
}
