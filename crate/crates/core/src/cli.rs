//! Command-line surface. [`run`] maps arguments and standard input to a
//! report and an exit status: 0 when the verdict holds, 1 when it fails,
//! 2 for usage and parse errors.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::{Field, ProbabilityVector};
use crate::construct::{construct, FamilyKind};
use crate::error::{Error, Result};
use crate::io;
use crate::saturation::{certify_full_system, saturate_with, default_tracked, SaturationOptions};
use crate::search::{
    explore_weak_subspace_conjecture, random_valid_system, search_max, Ground, Objective, RandomSpec, SearchProblem,
};
use crate::system::{embed, System};
use crate::verify::{self, check_cardinality_lemmas, Condition, ConditionKind};
use crate::weight::{self, evaluate_inequality, Flavor, FunctionalKind};

#[derive(Parser, Debug)]
#[command(name = "bollobas", version, about = "Verify, weigh, saturate and certify Bollobás-type systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// System document path; standard input when omitted or `-`.
    #[arg(long, short)]
    input: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a condition and report the first violation.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "skew")]
        kind: Condition,
        /// Also require monotone sizes (pairs).
        #[arg(long)]
        monotone: bool,
        /// Also check the cardinality lemmas that apply.
        #[arg(long)]
        lemmas: bool,
    },
    /// Evaluate a weight against the bound its theorem licenses.
    Weight {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        functional: String,
        /// Probability vector for tuza, e.g. `1/2,1/4,1/4`.
        #[arg(long)]
        p: Option<ProbabilityVector>,
        /// Report the value only, without checking a license.
        #[arg(long)]
        raw: bool,
    },
    /// Fill up until every tuple is full.
    Saturate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        flavor: Flavor,
        /// Emit the step-by-step trace.
        #[arg(long)]
        trace: bool,
        /// Re-verify the condition after every step.
        #[arg(long)]
        reverify: bool,
    },
    /// Certify a full system by counting its type classes.
    Certify {
        #[command(flatten)]
        input: Input,
        /// tuza, yue or partitioned-yue; chosen from the system's shape when omitted.
        #[arg(long)]
        functional: Option<String>,
        #[arg(long)]
        p: Option<ProbabilityVector>,
        /// Saturate with this flavor first.
        #[arg(long)]
        saturate: Option<Flavor>,
    },
    /// Exhaustive search on a small ground.
    Search {
        #[arg(long, default_value = "max-m")]
        objective: String,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// set or subspace
        #[arg(long, default_value = "set")]
        domain: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "skew")]
        condition: Condition,
        #[arg(long, default_value = "gf(2)")]
        field: Field,
        #[arg(long)]
        functional: Option<String>,
        #[arg(long)]
        p: Option<ProbabilityVector>,
        /// Keep only tuples with these coordinate sizes, e.g. `1,1`.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        prune: bool,
        #[arg(long)]
        allow_large: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a tight family.
    Construct {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',')]
        params: Vec<usize>,
        /// Partition blocks, e.g. `1,2;3,4`.
        #[arg(long)]
        blocks: Option<String>,
        /// Emit the coordinate embedding.
        #[arg(long)]
        embed: bool,
    },
    /// Map a set system to coordinate subspaces over the rationals.
    Embed {
        #[command(flatten)]
        input: Input,
    },
    /// Seeded random system satisfying a condition.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "skew")]
        condition: Condition,
        #[arg(long, default_value = "set")]
        domain: String,
        #[arg(long, default_value = "rational")]
        field: Field,
        #[arg(long)]
        blocks: Option<String>,
    },
}

fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|b| {
            b.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad block element {t:?}"))))
                .collect()
        })
        .collect()
}

fn read_input(input: &Input, stdin: &mut dyn FnMut() -> String) -> Result<System> {
    match input.input.as_deref() {
        None | Some("-") => io::parse_system(&stdin()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            io::parse_system(&text)
        }
    }
}

fn functional(name: &str, p: Option<ProbabilityVector>) -> Result<FunctionalKind> {
    if p.is_some() || !name.contains(':') {
        FunctionalKind::from_name(name, p)
    } else {
        name.parse()
    }
}

fn ground(domain: &str, n: usize, field: Field) -> Result<Ground> {
    match domain {
        "set" => Ok(Ground::Set { n }),
        "subspace" => Ok(Ground::Subspace { n, field }),
        other => Err(Error::Parse(format!("unknown domain {other:?} (expected set or subspace)"))),
    }
}

fn default_certify_functional(system: &System) -> Result<FunctionalKind> {
    if system.arity() == 2 {
        if system.as_tuples().context_sizes().is_some() {
            Ok(FunctionalKind::PartitionedYue)
        } else {
            Ok(FunctionalKind::Yue)
        }
    } else {
        Ok(FunctionalKind::Tuza(ProbabilityVector::uniform(system.arity())?))
    }
}

/// Errors that mean "the claim fails" rather than "the request is malformed".
fn is_verdict_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotLicensed(_)
            | Error::NotCompatible(_)
            | Error::ClassBoundViolated { .. }
            | Error::InvariantBroken(_)
            | Error::DuplicateTuple { .. }
    )
}

enum Output {
    Report(Value),
    Document(Value),
}

impl Output {
    fn text(&self) -> String {
        match self {
            Output::Report(v) => serde_json::to_string_pretty(v).expect("reports are plain JSON") + "\n",
            Output::Document(v) => io::document_text(v),
        }
    }
}

fn execute(command: Command, stdin: &mut dyn FnMut() -> String) -> Result<(Output, bool)> {
    let (report, ok) = match command {
        Command::Verify {
            input,
            kind,
            monotone,
            lemmas,
        } => {
            let system = read_input(&input, stdin)?;
            let mut ck = ConditionKind::for_system(&system, kind);
            if monotone {
                ck = ck.monotone();
            }
            let report = verify::verify(&system, ck)?;
            let mut out = json!({ "verification": io::verification_json(&report) });
            let mut ok = report.verdict;
            if lemmas && report.verdict {
                match check_cardinality_lemmas(&system) {
                    Ok(certs) => {
                        ok &= certs.iter().all(|c| c.holds || c.field_caveat);
                        out["lemmas"] = certs.iter().map(io::certificate_json).collect();
                    }
                    Err(Error::NoApplicableBound) => out["lemmas"] = json!([]),
                    Err(e) => return Err(e),
                }
            }
            (Output::Report(out), ok)
        }
        Command::Weight {
            input,
            functional: name,
            p,
            raw,
        } => {
            let system = read_input(&input, stdin)?;
            let kind = functional(&name, p)?;
            if raw {
                let value = weight::omega(&system, &kind)?;
                (Output::Report(json!({ "functional": kind.to_string(), "value": crate::arith::format_rational(&value) })), true)
            } else {
                let verdict = evaluate_inequality(&system, &kind)?;
                (Output::Report(io::inequality_json(&verdict)), verdict.holds)
            }
        }
        Command::Saturate {
            input,
            flavor,
            trace,
            reverify,
        } => {
            let system = read_input(&input, stdin)?;
            let tracked = default_tracked(&system, flavor);
            let t = saturate_with(&system, flavor, &tracked, SaturationOptions { reverify })?;
            let ok = t.omega_constant() && t.phi_increments_exact() && t.within_bound();
            (Output::Report(io::trace_json(&t, trace)), ok)
        }
        Command::Certify {
            input,
            functional: name,
            p,
            saturate,
        } => {
            let mut system = read_input(&input, stdin)?;
            let mut out = json!({});
            if let Some(flavor) = saturate {
                let t = saturate_with(
                    &system,
                    flavor,
                    &default_tracked(&system, flavor),
                    SaturationOptions::default(),
                )?;
                out["saturation"] = io::trace_json(&t, false);
                system = t.final_system;
            }
            let kind = match name {
                Some(n) => functional(&n, p)?,
                None => default_certify_functional(&system)?,
            };
            let cert = certify_full_system(&system, &kind)?;
            out["certificate"] = io::full_certificate_json(&cert);
            (Output::Report(out), cert.holds)
        }
        Command::Search {
            objective,
            budget,
            domain,
            n,
            d,
            condition,
            field,
            functional: name,
            p,
            sizes,
            prune,
            allow_large,
            seed,
        } => {
            let ground = ground(&domain, n, field)?;
            let kind = name.map(|n| functional(&n, p.clone())).transpose()?;
            let echo = json!({ "objective": objective, "budget": budget, "seed": seed });
            if objective == "counterexample" && domain == "subspace" && condition == Condition::Weak {
                let p = match kind {
                    Some(FunctionalKind::Tuza(p)) => p,
                    None => p.map_or_else(|| ProbabilityVector::uniform(d), Ok)?,
                    Some(other) => {
                        return Err(Error::Parse(format!(
                            "the weak subspace explorer uses tuza, not {}",
                            other.name()
                        )))
                    }
                };
                let finding = explore_weak_subspace_conjecture(n, d, &p, field, budget, seed)?;
                let mut out = io::finding_json(&finding);
                out["request"] = echo;
                // A finding is not a verdict; the run itself succeeded.
                (Output::Report(out), true)
            } else {
                let objective = match objective.as_str() {
                    "max-m" => Objective::MaxM,
                    "max-weight" => Objective::MaxWeight(
                        kind.ok_or_else(|| Error::Parse("max-weight needs --functional".into()))?,
                    ),
                    "counterexample" => Objective::Counterexample(
                        kind.ok_or_else(|| Error::Parse("counterexample needs --functional".into()))?,
                    ),
                    other => return Err(Error::Parse(format!("unknown objective {other:?}"))),
                };
                let mut problem = SearchProblem::new(ground, d, condition, objective);
                problem.node_budget = budget;
                problem.sizes = sizes;
                problem.prune = prune;
                problem.allow_large = allow_large;
                let result = search_max(&problem)?;
                let mut out = io::search_json(&result);
                out["request"] = echo;
                (Output::Report(out), true)
            }
        }
        Command::Construct {
            family,
            params,
            blocks,
            embed: embedded,
        } => {
            let blocks = blocks.as_deref().map(parse_blocks).transpose()?;
            let mut kind = FamilyKind::from_parts(&family, &params, blocks)?;
            if embedded {
                kind = FamilyKind::Embedded(Box::new(kind));
            }
            (Output::Document(io::system_to_value(&construct(&kind)?)), true)
        }
        Command::Embed { input } => match read_input(&input, stdin)? {
            System::Set(s) => (Output::Document(io::system_to_value(&System::Subspace(embed(&s)))), true),
            System::Subspace(_) => return Err(Error::Parse("embed expects a set system".into())),
        },
        Command::Random {
            seed,
            m,
            n,
            d,
            condition,
            domain,
            field,
            blocks,
        } => {
            let spec = RandomSpec {
                ground: ground(&domain, n, field)?,
                d,
                condition,
                m,
                blocks: blocks.as_deref().map(parse_blocks).transpose()?,
            };
            let system = random_valid_system(&spec, seed)?;
            (Output::Document(io::system_to_value(&system)), true)
        }
    };
    Ok((report, ok))
}

/// Runs the CLI on `args` (including the program name) with `stdin` as the
/// default input. Returns the output text and the exit status.
pub fn run<I, T>(args: I, stdin: &str) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut || stdin.to_string())
}

/// As [`run`], reading the default input only if a command needs it.
pub fn run_with<I, T>(args: I, stdin: &mut dyn FnMut() -> String) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (e.to_string(), code);
        }
    };
    match execute(cli.command, stdin) {
        Ok((output, ok)) => (output.text(), if ok { 0 } else { 1 }),
        Err(e) if is_verdict_error(&e) => (
            serde_json::to_string_pretty(&json!({ "holds": false, "error": e.to_string() })).expect("plain JSON") + "\n",
            1,
        ),
        Err(e) => (format!("error: {e}\n"), 2),
    }
}
