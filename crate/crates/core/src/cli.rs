//! Command-line front end. [`run`] is pure: it takes the argument vector and
//! returns exit code and output streams, which keeps it testable in-process.

use std::ffi::OsString;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, ErrorKind, Result};
use crate::expr;
use crate::filters::UltraFragment;
use crate::hyper::{compare, frechet_compare};
use crate::limits::{self, display_set};
use crate::models;
use crate::natset::NatSet;
use crate::rational::{self, Rational};
use crate::starsets::{self, RealSetDesc};

#[derive(Parser, Debug)]
#[command(
    name = "starline",
    version,
    about = "Exact hyperreal sequences, filters and limits"
)]
struct Cli {
    /// Ultrafilter fragment as `m:r,...` (default: residue 0 everywhere)
    #[arg(long, global = true, default_value = "")]
    fragment: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Report sequence indices with the first term at 1 (`--one-based false` starts at 0)
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    one_based: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetOp {
    Union,
    Intersect,
    Difference,
    Complement,
    Subset,
    Equal,
    Cofinite,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Limit of a sequence, agreed on by all three engines
    Limit {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Standard part under the fragment
    StdPart {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Infinitesimal / finite / infinitely large / standard
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Order of two sequences under the fragment and under the Fréchet filter
    Compare {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Least index from which |a_n - L| < eps
    WitnessNu {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long = "L", allow_hyphen_values = true)]
        limit: String,
        #[arg(long)]
        eps: String,
    },
    /// The index set {n : |a_n - L| < eps}
    SEpsilon {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long = "L", allow_hyphen_values = true)]
        limit: String,
        #[arg(long)]
        eps: String,
    },
    /// Squeeze proof trace for lower <= x <= upper
    Squeeze {
        #[arg(allow_hyphen_values = true)]
        lower: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        upper: String,
        #[arg(long = "L", allow_hyphen_values = true)]
        limit: String,
        #[arg(long)]
        eps: String,
    },
    /// Membership of a sequence in the extension of a real set, e.g. "(0,2] {3}"
    StarMember {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        set: String,
    },
    /// Evaluate the extension of a sequence at a hypernatural index
    Compose {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(allow_hyphen_values = true)]
        omega: String,
    },
    /// Boolean algebra on eventually periodic index sets
    SetOp {
        #[arg(value_enum)]
        op: SetOp,
        #[arg(required = true)]
        sets: Vec<String>,
    },
    /// Exhaustive filter / ultrafilter / measure checks on {0..k-1}
    ModelCheck {
        #[arg(long)]
        k: usize,
    },
    /// Two-valued measure of an index set under the fragment
    Measure { set: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok((value, text)) => CliOutput {
            code: 0,
            stdout: match cli.format {
                Format::Json => format!("{value}\n"),
                Format::Text => format!("{text}\n"),
            },
            stderr: String::new(),
        },
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Domain => 2,
                ErrorKind::Internal => 3,
            };
            match cli.format {
                Format::Json => CliOutput {
                    code,
                    stdout: format!("{}\n", error_json(&e, cli.one_based)),
                    stderr: String::new(),
                },
                Format::Text => CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: format!("error[{}]: {e}\n", e.name()),
                },
            }
        }
    }
}

fn error_json(e: &Error, one_based: bool) -> Value {
    let mut obj = json!({
        "name": e.name(),
        "kind": match e.kind() {
            ErrorKind::Usage => "usage",
            ErrorKind::Domain => "domain",
            ErrorKind::Internal => "internal",
        },
        "message": e.to_string(),
    });
    if let Some(span) = e.span() {
        obj["span"] = json!({ "start": span.start, "end": span.end });
    }
    match e {
        Error::NoWitness(c) => obj["counterexample"] = c.to_json(one_based),
        Error::NotHypernatural(reason) => obj["reason"] = json!(reason),
        Error::DomainTooSmall { threshold } => obj["threshold"] = json!(threshold),
        _ => {}
    }
    json!({ "error": obj })
}

fn rat(text: &str, what: &str) -> Result<Rational> {
    rational::parse(text)
        .ok_or_else(|| Error::InvalidArgument(format!("{what} `{text}` is not a rational p/q")))
}

fn positive(text: &str) -> Result<Rational> {
    let e = rat(text, "eps")?;
    if e <= Rational::from_integer(0.into()) {
        return Err(Error::InvalidArgument(format!(
            "eps `{text}` must be positive"
        )));
    }
    Ok(e)
}

fn natset(text: &str) -> Result<NatSet> {
    text.parse()
}

/// Index reported to the user for the internal index `n`.
fn shown_index(n: u64, one_based: bool) -> u64 {
    if one_based {
        n
    } else {
        n.saturating_sub(1)
    }
}

fn execute(cli: &Cli) -> Result<(Value, String)> {
    let frag: UltraFragment = cli.fragment.parse()?;
    let ob = cli.one_based;
    let germ = |s: &str| expr::parse_germ(s);
    Ok(match &cli.command {
        Command::Limit { expr } => {
            let v = limits::limit(&germ(expr)?)?;
            let text = match v.limit() {
                Some(l) => format!("converges to {}", rational::format(l)),
                None => {
                    let lines: Vec<String> = v
                        .counterexamples()
                        .iter()
                        .map(|c| format!("  {c}"))
                        .collect();
                    format!("diverges\n{}", lines.join("\n"))
                }
            };
            (v.to_json(ob), text)
        }
        Command::StdPart { expr } => {
            let st = germ(expr)?.standard_part(&frag)?;
            let s = rational::format(&st);
            (json!({ "standard_part": s }), s)
        }
        Command::Classify { expr } => {
            let c = germ(expr)?.classify(&frag);
            let label = if c.standard {
                "standard"
            } else if c.infinitesimal {
                "infinitesimal"
            } else if c.finite {
                "finite"
            } else {
                "infinitely large"
            };
            (
                serde_json::to_value(&c).expect("classification serializes"),
                label.to_string(),
            )
        }
        Command::Compare { x, y } => {
            let (x, y) = (germ(x)?, germ(y)?);
            let ord = match compare(&x, &y, &frag) {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            };
            let fr = frechet_compare(&x, &y);
            (
                json!({ "order": ord, "frechet": fr, "fragment": frag.to_string() }),
                format!("{ord} (Fréchet: {fr:?})"),
            )
        }
        Command::WitnessNu { expr, limit, eps } => {
            let nu = limits::witness_nu(&germ(expr)?, &rat(limit, "L")?, &positive(eps)?)?;
            let nu = shown_index(nu, ob);
            (json!({ "nu": nu }), nu.to_string())
        }
        Command::SEpsilon { expr, limit, eps } => {
            let s = limits::s_epsilon(&germ(expr)?, &rat(limit, "L")?, &positive(eps)?)?;
            let shown = display_set(&s, ob);
            let witness = s.frechet_witness().map(|n| shown_index(n, ob));
            (
                json!({ "set": shown, "cofinite": s.is_cofinite(), "witness": witness }),
                shown,
            )
        }
        Command::Squeeze {
            lower,
            x,
            upper,
            limit,
            eps,
        } => {
            let trace = limits::squeeze_check(
                &germ(lower)?,
                &germ(upper)?,
                &germ(x)?,
                &rat(limit, "L")?,
                &positive(eps)?,
            )?;
            let replayed = trace.replay()?;
            if replayed != trace {
                return Err(Error::Internal("squeeze trace does not replay".into()));
            }
            (trace.to_json(ob), trace.to_string().trim_end().to_string())
        }
        Command::StarMember { expr, set } => {
            let a: RealSetDesc = set.parse()?;
            let member = starsets::star_member(&germ(expr)?, &a, &frag);
            (
                json!({ "member": member, "set": a.to_string() }),
                member.to_string(),
            )
        }
        Command::Compose { expr, omega } => {
            let w = starsets::as_hypernatural(&germ(omega)?, &frag)?;
            let value = starsets::compose(&germ(expr)?, &w)?;
            let c = value.classify(&frag);
            let st = value
                .standard_part(&frag)
                .ok()
                .map(|r| rational::format(&r));
            (
                json!({ "germ": value.to_string(), "classification": c, "standard_part": st }),
                value.to_string(),
            )
        }
        Command::SetOp { op, sets } => set_op(*op, sets)?,
        Command::ModelCheck { k } => {
            let r = models::model_check(*k)?;
            let v = r.to_json();
            let text = format!(
                "k={}: {} filters, {} ultrafilters, {}",
                r.k,
                r.filters,
                r.ultrafilters,
                if r.passed() {
                    "all checks pass"
                } else {
                    "CHECK FAILED"
                }
            );
            if !r.passed() {
                return Err(Error::Internal(format!("model check failed: {v}")));
            }
            (v, text)
        }
        Command::Measure { set } => {
            let s = natset(set)?;
            let mu = frag.measure().of(&s);
            (
                json!({ "measure": mu, "fragment": frag.to_string() }),
                mu.to_string(),
            )
        }
    })
}

fn set_op(op: SetOp, texts: &[String]) -> Result<(Value, String)> {
    let sets = texts
        .iter()
        .map(|t| natset(t))
        .collect::<Result<Vec<_>>>()?;
    let arity = |n: usize| {
        if sets.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "{op:?} takes {n} set(s), got {}",
                sets.len()
            )))
        }
    };
    let set_result = |s: NatSet| {
        let w = s.frechet_witness();
        (
            json!({ "set": s.to_string(), "cofinite": s.is_cofinite(), "witness": w }),
            s.to_string(),
        )
    };
    let bool_result = |b: bool| (json!({ "holds": b }), b.to_string());
    Ok(match op {
        SetOp::Union => set_result(sets.iter().fold(NatSet::empty(), |a, s| a.union(s))),
        SetOp::Intersect => set_result(sets.iter().fold(NatSet::all(), |a, s| a.intersect(s))),
        SetOp::Difference => {
            arity(2)?;
            set_result(sets[0].difference(&sets[1]))
        }
        SetOp::Complement => {
            arity(1)?;
            set_result(sets[0].complement())
        }
        SetOp::Subset => {
            arity(2)?;
            bool_result(sets[0].is_subset(&sets[1]))
        }
        SetOp::Equal => {
            arity(2)?;
            bool_result(sets[0] == sets[1])
        }
        SetOp::Cofinite => {
            arity(1)?;
            set_result(sets[0].clone())
        }
    })
}
