//! Command-line front end.
//!
//! Exit codes: 0 definable or holds, 1 not definable or violated,
//! 2 usage error, 3 input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};

use crate::definability::{
    deciders, enumerate_definables, enumerators, synthesize, witness_pair, Certificate,
    DefinableEnumeration, Violation,
};
use crate::error::Error;
use crate::formula::{parse_formula, Formula, Sign};
use crate::seqspace::{
    boolean_valuation, build_counterexample_map, check_almost_preserves, extend_map, parse_binding,
    AlmostPreservation, RelationSpec, Sequence, SequenceMap,
};
use crate::structure::{parse_structure, Structure};
use crate::symmetry::{automorphisms, orbits, type_partition, Depth, Partition};
use crate::tuples::format_tuple;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "defcheck",
    version,
    about = "First-order definability checks on finite structures"
)]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Fail instead of warning when a soft size limit is exceeded.
    #[arg(long, global = true)]
    strict_limits: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the target is definable.
    Check {
        structure: PathBuf,
        #[arg(long, default_value = "orbit-union")]
        method: String,
    },
    /// Build a defining formula from an enumeration of definable relations.
    Synthesize {
        structure: PathBuf,
        #[arg(long, default_value = "orbit-atoms")]
        mode: String,
    },
    /// Orbits of the automorphism group on tuples.
    Orbits {
        structure: PathBuf,
        #[arg(long)]
        arity: usize,
    },
    /// List all automorphisms of the Σ-reduct.
    Aut { structure: PathBuf },
    /// Type partition of tuples by quantifier rank.
    Types {
        structure: PathBuf,
        #[arg(long)]
        arity: usize,
        #[arg(long, conflicts_with = "stable")]
        depth: Option<usize>,
        #[arg(long)]
        stable: bool,
    },
    /// Least pair agreeing on the first M enumerated relations but not on the target.
    Witness {
        structure: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "orbit-atoms")]
        mode: String,
    },
    /// Sequence map that almost preserves every enumerated relation but not the target.
    Counterexample {
        structure: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value = "orbit-atoms")]
        mode: String,
    },
    /// Extend a sequence map to one more point.
    Extend {
        structure: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long = "new")]
        new: String,
        #[arg(long, default_value = "orbit-atoms")]
        mode: String,
    },
    /// Exception sets of a sequence map on one relation.
    #[command(group(ArgGroup::new("rel").required(true).args(["relation", "formula"])))]
    Verify {
        structure: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        relation: Option<String>,
        #[arg(long)]
        formula: Option<String>,
        #[arg(long)]
        budget: usize,
    },
    /// Index set on which a formula holds under a sequence binding.
    Bvalue {
        structure: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        seqs: PathBuf,
        /// Sequence length; taken from the bindings when omitted.
        #[arg(long)]
        length: Option<usize>,
    },
}

enum Failure {
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    code: i32,
    text: String,
    json: Value,
}

struct Ctx {
    strict: bool,
    warnings: Vec<String>,
}

impl Ctx {
    fn load(&mut self, path: &Path) -> Result<Structure, Failure> {
        let text = read(path)?;
        parse_structure(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn limits(&mut self, s: &Structure, arity: usize) -> Result<(), Failure> {
        let warnings = s.limit_warnings(arity);
        if self.strict && !warnings.is_empty() {
            return Err(Error::LimitExceeded(warnings.join("; ")).into());
        }
        self.warnings.extend(warnings);
        Ok(())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn check_mode(mode: &str) -> Result<(), Failure> {
    let reg = enumerators();
    match reg.get(mode) {
        Some(_) => Ok(()),
        None => Err(Failure::Usage(format!(
            "unknown mode `{mode}` (available: {})",
            reg.names().join(", ")
        ))),
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut ctx = Ctx {
        strict: cli.strict_limits,
        warnings: Vec::new(),
    };
    let result = dispatch(&cli.command, &mut ctx);
    for w in &ctx.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match result {
        Ok(outcome) => {
            let body = if cli.json {
                let mut s =
                    serde_json::to_string_pretty(&outcome.json).expect("json values serialize");
                s.push('\n');
                s
            } else {
                outcome.text
            };
            let _ = out.write_all(body.as_bytes());
            outcome.code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    match cmd {
        Command::Check { structure, method } => {
            let reg = deciders();
            let decider = reg.get(method).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown method `{method}` (available: {})",
                    reg.names().join(", ")
                ))
            })?;
            let s = ctx.load(structure)?;
            ctx.limits(&s, s.target_arity())?;
            let decision = decider.decide(&s)?;
            let certificate = match decision.certificate {
                Some(c) => c,
                None => {
                    let e = enumerate_definables(&s, s.target_arity(), "by-rank")?;
                    Certificate::DefiningFormula {
                        formula: synthesize(&s, &e)?.formula,
                    }
                }
            };
            let mut text = verdict_line(decision.definable);
            writeln!(text, "method: {}", decider.name()).unwrap();
            render_certificate(&mut text, &certificate);
            Ok(Outcome {
                code: code_for(decision.definable),
                text,
                json: json!({
                    "verdict": verdict_word(decision.definable),
                    "method": decider.name(),
                    "certificate": certificate,
                }),
            })
        }
        Command::Synthesize { structure, mode } => {
            check_mode(mode)?;
            let s = ctx.load(structure)?;
            ctx.limits(&s, s.target_arity())?;
            let e = enumerate_definables(&s, s.target_arity(), mode)?;
            match synthesize(&s, &e) {
                Ok(syn) => {
                    let mut text = verdict_line(true);
                    writeln!(text, "mode: {}", e.mode).unwrap();
                    writeln!(text, "level: {}", syn.level).unwrap();
                    writeln!(text, "patterns:").unwrap();
                    for p in &syn.patterns {
                        writeln!(text, "  {}", signs(p)).unwrap();
                    }
                    writeln!(text, "formula: {}", syn.formula).unwrap();
                    let certificate = Certificate::DefiningFormula {
                        formula: syn.formula.clone(),
                    };
                    Ok(Outcome {
                        code: EXIT_OK,
                        text,
                        json: json!({
                            "verdict": verdict_word(true),
                            "mode": e.mode,
                            "level": syn.level,
                            "patterns": syn.patterns.iter().map(|p| signs(p)).collect::<Vec<_>>(),
                            "certificate": certificate,
                        }),
                    })
                }
                Err(Error::NotDefinable(v)) => Ok(not_definable(*v)),
                Err(e) => Err(e.into()),
            }
        }
        Command::Orbits { structure, arity } => {
            let s = ctx.load(structure)?;
            ctx.limits(&s, *arity)?;
            let p = orbits(&s, *arity)?;
            let mut text = format!("orbits of arity {arity}: {}\n", p.len());
            render_classes(&mut text, &p);
            Ok(Outcome {
                code: EXIT_OK,
                text,
                json: json!({ "arity": arity, "classes": p.classes() }),
            })
        }
        Command::Aut { structure } => {
            let s = ctx.load(structure)?;
            ctx.limits(&s, 1)?;
            let group = automorphisms(&s);
            let mut text = format!("automorphisms: {}\n", group.len());
            for p in &group {
                let image: Vec<String> = p.image().iter().map(|x| x.to_string()).collect();
                writeln!(text, "  {}  {}", image.join(" "), p).unwrap();
            }
            Ok(Outcome {
                code: EXIT_OK,
                text,
                json: json!({ "count": group.len(), "automorphisms": group }),
            })
        }
        Command::Types {
            structure,
            arity,
            depth,
            ..
        } => {
            let s = ctx.load(structure)?;
            ctx.limits(&s, *arity)?;
            let depth = depth.map_or(Depth::Stable, Depth::Fixed);
            let tp = type_partition(&s, *arity, depth)?;
            let mut text = format!(
                "types of arity {arity} at depth {} (stable from depth {}): {}\n",
                tp.depth,
                tp.stable_depth,
                tp.partition.len()
            );
            render_classes(&mut text, &tp.partition);
            Ok(Outcome {
                code: EXIT_OK,
                text,
                json: json!({
                    "arity": arity,
                    "depth": tp.depth,
                    "stable_depth": tp.stable_depth,
                    "classes": tp.partition.classes(),
                }),
            })
        }
        Command::Witness { structure, m, mode } => {
            check_mode(mode)?;
            let s = ctx.load(structure)?;
            ctx.limits(&s, s.target_arity())?;
            let e = enumerate_definables(&s, s.target_arity(), mode)?;
            let pair = witness_pair(&s, *m, &e)?;
            let level = (*m).min(e.len());
            let mut text = format!("mode: {}\nlevel: {level} of {}\n", e.mode, e.len());
            match &pair {
                Some((a, b)) => writeln!(text, "pair: {} {}", format_tuple(a), format_tuple(b)),
                None => writeln!(text, "pair: none"),
            }
            .unwrap();
            Ok(Outcome {
                code: if pair.is_some() {
                    EXIT_NEGATIVE
                } else {
                    EXIT_OK
                },
                text,
                json: json!({
                    "verdict": if pair.is_some() { "found" } else { "absent" },
                    "mode": e.mode,
                    "level": level,
                    "items": e.len(),
                    "pair": pair,
                }),
            })
        }
        Command::Counterexample {
            structure,
            length,
            mode,
        } => {
            check_mode(mode)?;
            if *length == 0 {
                return Err(Failure::Usage("--length must be positive".into()));
            }
            let s = ctx.load(structure)?;
            ctx.limits(&s, s.target_arity())?;
            let e = enumerate_definables(&s, s.target_arity(), mode)?;
            let c = match build_counterexample_map(&s, &e, *length) {
                Ok(c) => c,
                Err(Error::Definable(formula)) => return Ok(definable(*formula)),
                Err(err) => return Err(err.into()),
            };
            let target = check_almost_preserves(
                &s,
                &c.map,
                &RelationSpec::Named(s.target_name().into()),
                0,
            )?;
            let items = item_reports(&s, &c.map, &e)?;
            let mut text = verdict_line(false);
            writeln!(text, "mode: {}\nlength: {length}\nmap:", e.mode).unwrap();
            for (f, g) in c.map.entries() {
                writeln!(text, "  {f} -> {g}").unwrap();
            }
            writeln!(text, "witnesses:").unwrap();
            for (i, ((a, b), level)) in c.witnesses.iter().zip(&c.levels).enumerate() {
                writeln!(
                    text,
                    "  {i}: level {level} {} {}",
                    format_tuple(a),
                    format_tuple(b)
                )
                .unwrap();
            }
            writeln!(text, "exceptions:").unwrap();
            writeln!(text, "  {}: {}", s.target_name(), target.report.union).unwrap();
            for (i, (item, report)) in e.items.iter().zip(&items).enumerate() {
                writeln!(
                    text,
                    "  P{} {}: {}",
                    i + 1,
                    item.formula,
                    report.report.union
                )
                .unwrap();
            }
            Ok(Outcome {
                code: EXIT_NEGATIVE,
                text,
                json: json!({
                    "verdict": verdict_word(false),
                    "mode": e.mode,
                    "length": length,
                    "certificate": {
                        "map": c.map.entries(),
                        "witnesses": c.witnesses,
                        "levels": c.levels,
                    },
                    "exceptions": {
                        "target": target.report,
                        "items": items.iter().map(|r| &r.report).collect::<Vec<_>>(),
                    },
                }),
            })
        }
        Command::Extend {
            structure,
            map,
            new,
            mode,
        } => {
            check_mode(mode)?;
            let s = ctx.load(structure)?;
            let mut m: SequenceMap = read(map)?
                .parse()
                .map_err(|e: Error| Failure::Input(format!("{}: {e}", map.display())))?;
            let a: Sequence = new
                .parse()
                .map_err(|e: Error| Failure::Usage(e.to_string()))?;
            ctx.limits(&s, m.len() + 1)?;
            let e = enumerate_definables(&s, m.len() + 1, mode)?;
            let ext = extend_map(&s, &m, &a, &e)?;
            if !ext.existing {
                m.insert(a.clone(), ext.image.clone())?;
            }
            let mut text = format!("mode: {}\nimage: {}\n", e.mode, ext.image);
            if ext.existing {
                writeln!(text, "existing: true").unwrap();
            }
            if let Some(trace) = &ext.trace {
                writeln!(text, "n0: {}", trace.n0).unwrap();
                let failures: Vec<String> = trace
                    .transfer_failures
                    .iter()
                    .map(|k| k.to_string())
                    .collect();
                writeln!(text, "transfer failures: {{{}}}", failures.join(",")).unwrap();
                writeln!(text, "trace:").unwrap();
                for st in &trace.steps {
                    writeln!(
                        text,
                        "  {}: level {} signs {} realized {} value {}",
                        st.index,
                        st.level,
                        if st.signs.is_empty() {
                            ".".to_string()
                        } else {
                            signs(&st.signs)
                        },
                        st.realized,
                        st.value
                    )
                    .unwrap();
                }
            }
            writeln!(text, "map:").unwrap();
            for (f, g) in m.entries() {
                writeln!(text, "  {f} -> {g}").unwrap();
            }
            Ok(Outcome {
                code: EXIT_OK,
                text,
                json: json!({
                    "mode": e.mode,
                    "image": ext.image,
                    "existing": ext.existing,
                    "trace": ext.trace,
                    "map": m.entries(),
                }),
            })
        }
        Command::Verify {
            structure,
            map,
            relation,
            formula,
            budget,
        } => {
            let s = ctx.load(structure)?;
            let m: SequenceMap = read(map)?
                .parse()
                .map_err(|e: Error| Failure::Input(format!("{}: {e}", map.display())))?;
            let spec = match (relation, formula) {
                (Some(name), _) => RelationSpec::Named(name.clone()),
                (None, Some(text)) => RelationSpec::Formula(formula_arg(&s, text)?),
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let (_, table) = spec.resolve(&s)?;
            ctx.limits(&s, table.arity())?;
            let v = check_almost_preserves(&s, &m, &spec, *budget)?;
            Ok(verify_outcome(&v))
        }
        Command::Bvalue {
            structure,
            formula,
            seqs,
            length,
        } => {
            let s = ctx.load(structure)?;
            let f = formula_arg(&s, formula)?;
            let binding = parse_binding(&read(seqs)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", seqs.display())))?;
            let k = match (length, binding.values().next()) {
                (Some(k), _) => *k,
                (None, Some(seq)) => seq.len(),
                (None, None) => {
                    return Err(Failure::Usage("no sequences bound; pass --length".into()))
                }
            };
            let value = boolean_valuation(&s, &f, &binding, k)?;
            Ok(Outcome {
                code: EXIT_OK,
                text: format!("formula: {f}\nlength: {k}\nvalue: {value}\n"),
                json: json!({ "formula": f, "length": k, "value": value }),
            })
        }
    }
}

fn formula_arg(s: &Structure, text: &str) -> Result<Formula, Failure> {
    parse_formula(text, &s.full_signature()).map_err(|e| Failure::Usage(e.to_string()))
}

fn item_reports(
    s: &Structure,
    map: &SequenceMap,
    e: &DefinableEnumeration,
) -> Result<Vec<AlmostPreservation>, Failure> {
    e.items
        .iter()
        .map(|item| {
            let spec = RelationSpec::Table {
                label: item.formula.to_string(),
                table: item.table.clone(),
            };
            check_almost_preserves(s, map, &spec, 0).map_err(Failure::from)
        })
        .collect()
}

fn verify_outcome(v: &AlmostPreservation) -> Outcome {
    let r = &v.report;
    let mut text = format!(
        "{}\nrelation: {} (arity {})\nbudget: {}\nmax exceptions: {}\nunion: {}\nselections:\n",
        if v.holds { "HOLDS" } else { "VIOLATED" },
        r.relation,
        r.arity,
        v.budget,
        r.max,
        r.union
    );
    for sel in &r.selections {
        let idx: Vec<String> = sel.selection.iter().map(|j| j.to_string()).collect();
        writeln!(text, "  [{}]: {}", idx.join(","), sel.exceptions).unwrap();
    }
    Outcome {
        code: code_for(v.holds),
        text,
        json: json!({
            "verdict": if v.holds { "holds" } else { "violated" },
            "budget": v.budget,
            "exceptions": r,
        }),
    }
}

fn code_for(positive: bool) -> i32 {
    if positive {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn verdict_word(definable: bool) -> &'static str {
    if definable {
        "definable"
    } else {
        "not-definable"
    }
}

fn verdict_line(definable: bool) -> String {
    if definable {
        "DEFINABLE\n".into()
    } else {
        "NOT DEFINABLE\n".into()
    }
}

fn definable(formula: Formula) -> Outcome {
    let certificate = Certificate::DefiningFormula { formula };
    let mut text = verdict_line(true);
    render_certificate(&mut text, &certificate);
    Outcome {
        code: EXIT_OK,
        text,
        json: json!({ "verdict": verdict_word(true), "certificate": certificate }),
    }
}

fn not_definable(v: Violation) -> Outcome {
    let certificate = Certificate::Violation(v);
    let mut text = verdict_line(false);
    render_certificate(&mut text, &certificate);
    Outcome {
        code: EXIT_NEGATIVE,
        text,
        json: json!({ "verdict": verdict_word(false), "certificate": certificate }),
    }
}

fn render_certificate(text: &mut String, c: &Certificate) {
    match c {
        Certificate::DefiningFormula { formula } => writeln!(text, "formula: {formula}").unwrap(),
        Certificate::Violation(v) => {
            let image: Vec<String> = v
                .permutation
                .image()
                .iter()
                .map(|x| x.to_string())
                .collect();
            writeln!(text, "permutation: {}  {}", image.join(" "), v.permutation).unwrap();
            writeln!(text, "pair: {} {}", format_tuple(&v.a), format_tuple(&v.b)).unwrap();
        }
    }
}

fn render_classes(text: &mut String, p: &Partition) {
    for (i, class) in p.classes().iter().enumerate() {
        let members: Vec<String> = class.iter().map(|t| format_tuple(t)).collect();
        writeln!(text, "  {i}: {}", members.join(" ")).unwrap();
    }
}

fn signs(p: &[Sign]) -> String {
    p.iter()
        .map(|s| if s.holds() { '+' } else { '-' })
        .collect()
}
