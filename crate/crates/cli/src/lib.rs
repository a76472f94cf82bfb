//! Command-line front end. [`run`] returns the process exit code: 0 for a found or stable
//! result, 1 for a decided NO or an unstable matching, 2 for any error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hrq_core::enumsolver::{
    solve_count_open, solve_fpt_subsets, solve_fpt_subsets_ties, CountMode,
};
use hrq_core::gadgets::{
    four_vertex_demo, gen_clique, gen_counterexample, gen_mcis, gen_mcis_unchecked, gen_sat,
    gen_smti, two_color_demo, CnfFormula, ColoredGraph, Graph, Smti,
};
use hrq_core::ilp::{
    build_haqlu_model, build_hrqlut_model, export_lp, solve_haqlu_ilp, solve_hrqlut_xp, Guess,
    DEFAULT_NODE_BUDGET,
};
use hrq_core::io::{
    parse_instance, parse_matching, serialize_instance, serialize_matching, serialize_matchings,
    serialize_report,
};
use hrq_core::openset::{
    solve_fixed_open_hrqlu, solve_fixed_open_strict_noupper, solve_fixed_open_ties_noupper, OpenSet,
};
use hrq_core::oracle::{enumerate_stable, first_stable, DEFAULT_CAP};
use hrq_core::q2::solve_q2;
use hrq_core::{check_stability, Error, Exec, Instance, Matching, Result};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "hrq",
    about = "Stable matchings with lower quotas and closable hospitals"
)]
struct Cli {
    /// Run every solver loop on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a matching and print its stability report.
    Check {
        instance: PathBuf,
        matching: PathBuf,
    },
    /// Decide whether a stable matching exists and print one.
    Solve(SolveArgs),
    /// Print every stable matching.
    Enumerate {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Write a generated instance.
    Generate {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Write an ILP model in LP format.
    ExportLp {
        instance: PathBuf,
        /// Guess for the ties model, e.g. `h1:r3!,h2:r1`: open hospitals with their worst
        /// resident, `!` marking a full hospital. Without it the indifferent-hospital model is
        /// written.
        #[arg(long)]
        guess: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Comma-separated ids of the hospitals that must be exactly the open ones.
    #[arg(long, conflicts_with_all = ["count_open", "count_closed"])]
    open: Option<String>,
    /// Require exactly this many open hospitals.
    #[arg(long, conflicts_with = "count_closed")]
    count_open: Option<usize>,
    /// Require exactly this many closed hospitals.
    #[arg(long)]
    count_closed: Option<usize>,
    /// Write the quota-two solver's event log to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Q2,
    Fpt,
    Brute,
    Ilp,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// The three-hospital cycle without a stable matching.
    Counterexample,
    /// From a 3-CNF formula, given literally or drawn at random.
    Sat {
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Clauses as `1,2,-3;-1,2,3;...`.
        #[arg(long)]
        clauses: Option<String>,
        /// Accept clauses of one to three literals.
        #[arg(long)]
        relaxed: bool,
    },
    /// From a random regular colored graph, or the two-color demo.
    Mcis {
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long, default_value_t = 3)]
        per_color: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        demo: bool,
    },
    /// From a graph given as `1-2,2-3,...` on vertices `1..=n`, or the four-vertex demo.
    Clique {
        #[arg(long, default_value_t = 0)]
        vertices: usize,
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        demo: bool,
    },
    /// From a random marriage instance with ties.
    Smti {
        #[arg(long, default_value_t = 2)]
        men: usize,
        #[arg(long, default_value_t = 2)]
        women: usize,
        #[arg(long, default_value_t = 0.7)]
        density: f64,
        #[arg(long, default_value_t = 0.3)]
        ties: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Outcome {
    Found(String),
    No(String),
}

const NO_DOC: &str = "{\n  \"verdict\": \"no stable matching\"\n}\n";

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match execute(cli.command, exec) {
        Ok(Outcome::Found(text)) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Ok(Outcome::No(text)) => {
            let _ = out.write_all(text.as_bytes());
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::RejectedInput(format!("cannot read {}: {e}", path.display())))
}

fn write_to(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::RejectedInput(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?)
}

/// Writes `text` to `output` if given, otherwise returns it for stdout.
fn emit(text: String, output: Option<PathBuf>) -> Result<Outcome> {
    match output {
        Some(p) => {
            write_to(&p, &text)?;
            Ok(Outcome::Found(String::new()))
        }
        None => Ok(Outcome::Found(text)),
    }
}

fn execute(cmd: Command, exec: Exec) -> Result<Outcome> {
    match cmd {
        Command::Check { instance, matching } => {
            let inst = load(&instance)?;
            let m = parse_matching(&inst, &read(&matching)?)?;
            let report = check_stability(&inst, &m)?;
            let text = serialize_report(&inst, &report);
            Ok(if report.stable {
                Outcome::Found(text)
            } else {
                Outcome::No(text)
            })
        }
        Command::Solve(args) => solve(args, exec),
        Command::Enumerate { instance, cap } => {
            let inst = load(&instance)?;
            let all = enumerate_stable(&inst, cap)?;
            let text = serialize_matchings(&inst, &all);
            Ok(if all.is_empty() {
                Outcome::No(text)
            } else {
                Outcome::Found(text)
            })
        }
        Command::Generate { kind, output } => emit(serialize_instance(&generate(kind)?), output),
        Command::ExportLp {
            instance,
            guess,
            output,
        } => {
            let inst = load(&instance)?;
            let model = match guess {
                None => build_haqlu_model(&inst)?,
                Some(text) => build_hrqlut_model(&inst, &parse_guess(&inst, &text)?)?,
            };
            emit(export_lp(&model), output)
        }
    }
}

fn verdict(inst: &Instance, m: Option<Matching>) -> Outcome {
    match m {
        Some(m) => Outcome::Found(serialize_matching(inst, &m)),
        None => Outcome::No(NO_DOC.to_string()),
    }
}

fn solve(args: SolveArgs, exec: Exec) -> Result<Outcome> {
    let inst = load(&args.instance)?;
    if let Some(ids) = &args.open {
        let names: Vec<&str> = ids
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let open = OpenSet::by_names(&inst, &names)?;
        return Ok(verdict(&inst, solve_open(&inst, &open)?));
    }
    if let Some(k) = args.count_open {
        return Ok(verdict(
            &inst,
            solve_count_open(&inst, k, CountMode::Open, exec)?,
        ));
    }
    if let Some(k) = args.count_closed {
        return Ok(verdict(
            &inst,
            solve_count_open(&inst, k, CountMode::Closed, exec)?,
        ));
    }
    let wants_trace = args.trace.is_some();
    let method = match args.method {
        Method::Auto if wants_trace => Method::Q2,
        other => other,
    };
    if wants_trace && method != Method::Q2 {
        return Err(Error::WrongVariant("--trace needs the q2 method".into()));
    }
    if method == Method::Q2 {
        let outcome = solve_q2(&inst, wants_trace)?;
        if let (Some(path), Some(lines)) = (&args.trace, &outcome.trace) {
            let mut text = lines.join("\n");
            text.push('\n');
            write_to(path, &text)?;
        }
        return Ok(verdict(&inst, outcome.matching));
    }
    let m = match method {
        Method::Auto => solve_auto(&inst, exec)?,
        Method::Fpt => fpt(&inst, exec)?,
        Method::Brute => first_stable(&inst),
        Method::Ilp => ilp(&inst, exec)?,
        Method::Q2 => unreachable!("handled above"),
    };
    Ok(verdict(&inst, m))
}

fn solve_open(inst: &Instance, open: &OpenSet) -> Result<Option<Matching>> {
    match (inst.has_resident_ties(), inst.all_unbounded()) {
        (false, true) => solve_fixed_open_strict_noupper(inst, open),
        (true, true) => solve_fixed_open_ties_noupper(inst, open),
        _ => solve_fixed_open_hrqlu(inst, open),
    }
}

fn fpt(inst: &Instance, exec: Exec) -> Result<Option<Matching>> {
    if inst.has_resident_ties() || inst.has_hospital_ties() || inst.any_indifferent() {
        solve_fpt_subsets_ties(inst, exec)
    } else {
        solve_fpt_subsets(inst, exec)
    }
}

fn ilp(inst: &Instance, exec: Exec) -> Result<Option<Matching>> {
    if inst.m() > 0 && (0..inst.m()).all(|h| inst.hospital_prefs(h).is_indifferent()) {
        solve_haqlu_ilp(inst, DEFAULT_NODE_BUDGET)
    } else {
        solve_hrqlut_xp(inst, exec, DEFAULT_NODE_BUDGET)
    }
}

/// Errors that mean "try the next solver".
fn inapplicable(e: &Error) -> bool {
    matches!(
        e,
        Error::WrongVariant(_)
            | Error::NotApplicable(_)
            | Error::EnumerationOverflow(_)
            | Error::SolverBudget(_)
    )
}

fn solve_auto(inst: &Instance, exec: Exec) -> Result<Option<Matching>> {
    type Solver = fn(&Instance, Exec) -> Result<Option<Matching>>;
    let mut chain: Vec<Solver> = Vec::new();
    if inst.is_strict() && inst.max_lower() <= 2 {
        chain.push(|i, _| solve_q2(i, false).map(|o| o.matching));
    }
    if inst.is_strict() {
        chain.push(solve_fpt_subsets);
    } else {
        chain.push(solve_fpt_subsets_ties);
        if inst.m() <= 6 {
            chain.push(ilp);
        }
    }
    for solver in chain {
        match solver(inst, exec) {
            Err(e) if inapplicable(&e) => continue,
            other => return other,
        }
    }
    Ok(first_stable(inst))
}

/// `h1:r3!,h2:r1`: open hospitals with their worst resident, `!` for full ones.
fn parse_guess(inst: &Instance, text: &str) -> Result<Guess> {
    let bad = |part: &str| Error::RejectedInput(format!("bad guess entry {part:?}"));
    let mut open = Vec::new();
    let mut full = Vec::new();
    let mut worst = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (body, is_full) = match part.strip_suffix('!') {
            Some(b) => (b, true),
            None => (part, false),
        };
        let (h, r) = body.split_once(':').ok_or_else(|| bad(part))?;
        let h = inst.hospital_index(h.trim()).ok_or_else(|| bad(part))?;
        let r = inst.resident_index(r.trim()).ok_or_else(|| bad(part))?;
        open.push(h);
        worst.insert(h, r);
        if is_full {
            full.push(h);
        }
    }
    Ok(Guess {
        open: OpenSet::new(inst.m(), &open)?,
        worst,
        full: OpenSet::new(inst.m(), &full)?,
    })
}

fn parse_clauses(text: &str) -> Result<Vec<Vec<i32>>> {
    text.split(';')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(|c| {
            c.split(',')
                .map(|l| {
                    l.trim()
                        .parse::<i32>()
                        .map_err(|_| Error::RejectedInput(format!("bad literal {l:?}")))
                })
                .collect()
        })
        .collect()
}

fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(|e| {
            let bad = || Error::RejectedInput(format!("bad edge {e:?}"));
            let (a, b) = e.split_once('-').ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a == 0 || b == 0 {
                return Err(bad());
            }
            Ok((a - 1, b - 1))
        })
        .collect()
}

fn generate(kind: GenKind) -> Result<Instance> {
    Ok(match kind {
        GenKind::Counterexample => gen_counterexample(),
        GenKind::Sat {
            vars,
            seed,
            clauses,
            relaxed,
        } => {
            let f = match clauses {
                None => CnfFormula::random(seed, vars)?,
                Some(text) if relaxed => CnfFormula::relaxed(vars, parse_clauses(&text)?)?,
                Some(text) => CnfFormula::new(vars, parse_clauses(&text)?)?,
            };
            gen_sat(&f)?.instance
        }
        GenKind::Mcis {
            colors,
            per_color,
            degree,
            seed,
            demo,
        } => {
            if demo {
                gen_mcis_unchecked(&two_color_demo())?.instance
            } else {
                let g = ColoredGraph::random_regular(seed, colors, per_color, degree).ok_or_else(
                    || Error::RejectedInput("no regular graph found for these parameters".into()),
                )?;
                gen_mcis(&g)?.instance
            }
        }
        GenKind::Clique {
            vertices,
            edges,
            k,
            demo,
        } => {
            let (g, k) = if demo {
                four_vertex_demo()
            } else {
                (Graph::new(vertices, parse_edges(&edges)?)?, k)
            };
            gen_clique(&g, k)?.instance
        }
        GenKind::Smti {
            men,
            women,
            density,
            ties,
            seed,
        } => {
            if !(0.0..=1.0).contains(&density) || !(0.0..=1.0).contains(&ties) {
                return Err(Error::RejectedInput(
                    "probabilities must lie in [0, 1]".into(),
                ));
            }
            gen_smti(&Smti::random(seed, men, women, density, ties))?.instance
        }
    })
}
