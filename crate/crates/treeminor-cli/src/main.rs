//! Command-line front end for the tree-embedding laboratory.
//!
//! Trees, presentations, and sequences on the command line use the text
//! notation of `treeminor::dsl`; run `treeminor help` for the command list.
//! Output is plain text by default; `--format json` prints a report object
//! `{command, inputs, verdict, certificate?, elapsed_ms}` instead, and
//! `--out FILE` writes that report to a file in either mode.
//!
//! Exit codes: `0` success or an affirmative verdict, `1` a negative
//! verdict (including failed selftest criteria), `2` an undecided verdict,
//! `64` command-line usage errors, `65` input that does not parse or does
//! not satisfy an operation's preconditions, `70` an exceeded resource
//! bound, `74` output file write failure.
//!
//! Resource bounds and their environment overrides:
//! `TREEMINOR_ENUM_CAP` is the largest node count `enumerate` and `classes`
//! accept (default 10); `TREEMINOR_TRUNCATE_CAP` is the node budget when
//! `truncate` or `dot` materializes a window of an infinite tree
//! (default 10000).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use treeminor::acceptance;
use treeminor::dot::emit_dot;
use treeminor::dsl::{self, Expr};
use treeminor::family::{family_generate, NatSeqSpec};
use treeminor::finite::{FiniteTree, DEFAULT_ENUM_BOUND};
use treeminor::embed::rooted_minor;
use treeminor::seq::{equiv_star, leq_star_outcome, GreedyFailure, LeqStarOutcome};
use treeminor::spined::{
    spined_minor_certified, t_star, CombSize, GenSeq, Mode, SpinedTree,
    DEFAULT_TRUNCATE_NODE_CAP,
};
use treeminor::{Error, Result, Verdict};

#[derive(Parser)]
#[command(name = "treeminor", version, about = "Embedding order on finite and infinite trees")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Does A embed into B (some subdivision of A as a subgraph of B)?
    ///
    /// Both arguments are trees or presentations; two sequence expressions
    /// are instead compared in the sequence-domination order.
    Minor { a: String, b: String },

    /// Print the order of a tree (how far the canonical hierarchy reaches
    /// into it).
    Order { t: String },

    /// Do A and B embed into each other?
    Equiv { a: String, b: String },

    /// Print the order and maximal-ray count of an infinite tree.
    Classify { t: String },

    /// List one tree per isomorphism class with exactly the given node
    /// count.
    Enumerate {
        #[arg(long)]
        nodes: usize,
    },

    /// Group all trees of at most the given node count into classes of
    /// mutually embeddable trees and print the cover relation between
    /// classes.
    Classes {
        #[arg(long)]
        max_nodes: usize,
    },

    /// Extract the subtree spanned by the rays that trace combs of the
    /// given width (a number >= 3, or `w` for unbounded).
    Tstar {
        #[arg(long)]
        alpha: CombSize,
        t: String,
    },

    /// Generate pairwise equivalent but pairwise non-isomorphic edge-length
    /// variants of a fully decorated periodic presentation.
    Family {
        #[arg(long)]
        size: usize,
        base: String,
    },

    /// Materialize a finite window of a presentation: the first `--spine`
    /// spine steps, decorations cut to `--depth`.
    Truncate {
        #[arg(long)]
        spine: usize,
        #[arg(long)]
        depth: usize,
        t: String,
    },

    /// Emit DOT for a finite tree; an infinite tree is first truncated to
    /// the given window.
    Dot {
        t: String,
        #[arg(long, default_value_t = 6)]
        spine: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },

    /// Run the acceptance criteria and report pass/fail per item.
    Selftest {
        /// Comma-separated criterion ids; all when omitted.
        #[arg(long, value_delimiter = ',',
              value_parser = clap::builder::RangedU64ValueParser::<usize>::new()
                  .range(1..=acceptance::CRITERION_COUNT as u64))]
        only: Vec<usize>,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Minor { .. } => "minor",
            Cmd::Order { .. } => "order",
            Cmd::Equiv { .. } => "equiv",
            Cmd::Classify { .. } => "classify",
            Cmd::Enumerate { .. } => "enumerate",
            Cmd::Classes { .. } => "classes",
            Cmd::Tstar { .. } => "tstar",
            Cmd::Family { .. } => "family",
            Cmd::Truncate { .. } => "truncate",
            Cmd::Dot { .. } => "dot",
            Cmd::Selftest { .. } => "selftest",
        }
    }

    fn inputs(&self) -> Vec<String> {
        match self {
            Cmd::Minor { a, b } | Cmd::Equiv { a, b } => vec![a.clone(), b.clone()],
            Cmd::Order { t } | Cmd::Classify { t } => vec![t.clone()],
            Cmd::Enumerate { nodes } => vec![nodes.to_string()],
            Cmd::Classes { max_nodes } => vec![max_nodes.to_string()],
            Cmd::Tstar { alpha, t } => vec![alpha.to_string(), t.clone()],
            Cmd::Family { size, base } => vec![size.to_string(), base.clone()],
            Cmd::Truncate { spine, depth, t } => {
                vec![spine.to_string(), depth.to_string(), t.clone()]
            }
            Cmd::Dot { t, spine, depth } => {
                vec![t.clone(), spine.to_string(), depth.to_string()]
            }
            Cmd::Selftest { only } => only.iter().map(ToString::to_string).collect(),
        }
    }
}

/// What a command produced, before it is wrapped in a [`Report`].
struct Output {
    verdict: Value,
    certificate: Option<String>,
    text: String,
    code: u8,
}

impl Output {
    fn plain(text: String) -> Output {
        Output { verdict: json!(text), certificate: None, text, code: 0 }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs: Vec<String>,
    verdict: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<String>,
    elapsed_ms: u64,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let started = Instant::now();
    let out = match run(&cli.cmd) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(match e {
                Error::ResourceLimit { .. } => 70,
                Error::Parse { .. } | Error::InvalidArgument(_) | Error::Unsupported(_) => 65,
            });
        }
    };
    let report = Report {
        command: cli.cmd.name(),
        inputs: cli.cmd.inputs(),
        verdict: out.verdict,
        certificate: out.certificate,
        elapsed_ms: u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX),
    };
    let body = serde_json::to_string_pretty(&report).expect("report serializes");
    match cli.format {
        Format::Text => {
            if !out.text.is_empty() {
                println!("{}", out.text);
            }
        }
        Format::Json => println!("{body}"),
    }
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, body + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            std::process::exit(74);
        }
    }
    std::process::exit(i32::from(out.code));
}

fn run(cmd: &Cmd) -> Result<Output> {
    match cmd {
        Cmd::Minor { a, b } => compare(a, b, false),
        Cmd::Equiv { a, b } => compare(a, b, true),
        Cmd::Order { t } => {
            let x = dsl::parse(t)?.to_spined()?;
            Ok(Output::plain(x.order().to_string()))
        }
        Cmd::Classify { t } => {
            let x = dsl::parse(t)?.to_spined()?;
            let (order, rays) = x.classify()?;
            Ok(Output {
                verdict: json!({ "order": order.to_string(), "rays": rays }),
                certificate: None,
                text: format!("order: {order}\nmaximal rays: {rays}"),
                code: 0,
            })
        }
        Cmd::Enumerate { nodes } => {
            let trees = FiniteTree::enumerate_rooted_trees_bounded(*nodes, enum_cap()?)?;
            let lines: Vec<String> = trees.iter().map(ToString::to_string).collect();
            Ok(Output {
                verdict: json!({ "count": lines.len(), "trees": lines }),
                certificate: None,
                text: lines.join("\n"),
                code: 0,
            })
        }
        Cmd::Classes { max_nodes } => classes(*max_nodes),
        Cmd::Tstar { alpha, t } => {
            let x = dsl::parse(t)?.to_spined()?;
            match t_star(&x, *alpha)? {
                Some(s) => Ok(Output::plain(render(&s))),
                None => Ok(Output {
                    verdict: Value::Null,
                    certificate: None,
                    text: "no surviving ray".into(),
                    code: 1,
                }),
            }
        }
        Cmd::Family { size, base } => {
            let b = dsl::parse(base)?.to_spined()?;
            let members = family_generate(&b, *size)?;
            let lines: Vec<String> = members.iter().map(render).collect();
            Ok(Output {
                verdict: json!({ "count": lines.len(), "members": lines }),
                certificate: None,
                text: lines.join("\n"),
                code: 0,
            })
        }
        Cmd::Truncate { spine, depth, t } => {
            let x = dsl::parse(t)?.to_spined()?;
            let window = x.truncate_capped(*spine, *depth, truncate_cap()?)?;
            Ok(Output::plain(window.to_string()))
        }
        Cmd::Dot { t, spine, depth } => {
            let e = dsl::parse(t)?;
            let fin = match e.to_finite() {
                Ok(f) => f,
                Err(_) => e.to_spined()?.truncate_capped(*spine, *depth, truncate_cap()?)?,
            };
            Ok(Output::plain(emit_dot(&fin)))
        }
        Cmd::Selftest { only } => selftest(only),
    }
}

/// `minor` and `equiv` share parsing and the verdict-to-exit-code mapping;
/// sequence expressions are routed to the sequence order.
fn compare(a: &str, b: &str, both_ways: bool) -> Result<Output> {
    let ea = dsl::parse(a)?;
    let eb = dsl::parse(b)?;
    let seq = |e: &Expr| matches!(e, Expr::Seq { .. });
    if seq(&ea) || seq(&eb) {
        let f = ea.to_epseq()?;
        let g = eb.to_epseq()?;
        if both_ways {
            return Ok(verdict_output(Verdict::from_bool(equiv_star(&f, &g)), None));
        }
        let (v, cert) = match leq_star_outcome(&f, &g) {
            LeqStarOutcome::Holds { witness } => (
                Verdict::True,
                format!("greedy host picks {:?}; the cycle pattern repeats", witness.ks),
            ),
            LeqStarOutcome::Fails {
                certificate: GreedyFailure::CycleClassStuck { f_cycle_index },
            } => (
                Verdict::False,
                format!("cycle entry {f_cycle_index} embeds into no host cycle entry"),
            ),
            LeqStarOutcome::Fails {
                certificate: GreedyFailure::PrefixStuck { f_index, ks },
            } => (
                Verdict::False,
                format!("greedy scan stalls at entry {f_index} after picks {ks:?}"),
            ),
        };
        return Ok(verdict_output(v, Some(cert)));
    }

    let x = ea.to_spined()?;
    let y = eb.to_spined()?;
    let (forward, fc) = spined_minor_certified(&x, &y)?;
    if !both_ways || forward == Verdict::False {
        let cert = fc.map(|c| c.to_string());
        return Ok(verdict_output(forward, cert));
    }
    let (backward, bc) = spined_minor_certified(&y, &x)?;
    let cert = match (fc, bc) {
        (Some(f), Some(b)) => Some(format!("forward: {f}; backward: {b}")),
        (Some(f), None) => Some(format!("forward: {f}")),
        (None, Some(b)) => Some(format!("backward: {b}")),
        (None, None) => None,
    };
    Ok(verdict_output(forward.and(backward), cert))
}

fn verdict_output(v: Verdict, certificate: Option<String>) -> Output {
    let text = match &certificate {
        Some(c) => format!("{v}\ncertificate: {c}"),
        None => v.to_string(),
    };
    Output {
        verdict: json!(v.to_string()),
        certificate,
        text,
        code: match v {
            Verdict::True => 0,
            Verdict::False => 1,
            Verdict::Unknown => 2,
        },
    }
}

fn classes(max_nodes: usize) -> Result<Output> {
    let cap = enum_cap()?;
    let mut trees: Vec<FiniteTree> = Vec::new();
    for k in 1..=max_nodes {
        trees.extend(FiniteTree::enumerate_rooted_trees_bounded(k, cap)?);
    }
    if trees.is_empty() {
        return Err(Error::invalid("class listing needs max-nodes >= 1"));
    }
    let n = trees.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            leq[i][j] = rooted_minor(&trees[i], &trees[j]);
        }
    }

    // group by mutual embeddability; the first member represents its class
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match groups.iter_mut().find(|g| leq[g[0]][i] && leq[i][g[0]]) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let k = groups.len();
    let below = |a: usize, b: usize| leq[groups[a][0]][groups[b][0]] && !leq[groups[b][0]][groups[a][0]];
    let mut hasse: Vec<(usize, usize)> = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if below(a, b) && !(0..k).any(|m| below(a, m) && below(m, b)) {
                hasse.push((a, b));
            }
        }
    }

    let mut lines: Vec<String> = Vec::new();
    let mut class_lists: Vec<Vec<String>> = Vec::new();
    for (idx, g) in groups.iter().enumerate() {
        let members: Vec<String> = g.iter().map(|&i| trees[i].to_string()).collect();
        lines.push(format!("class {idx}: {}", members.join(" ")));
        class_lists.push(members);
    }
    for &(a, b) in &hasse {
        lines.push(format!("cover: {a} < {b}"));
    }
    Ok(Output {
        verdict: json!({ "classes": class_lists, "hasse": hasse }),
        certificate: None,
        text: lines.join("\n"),
        code: 0,
    })
}

fn selftest(only: &[usize]) -> Result<Output> {
    let ids: Vec<usize> = if only.is_empty() {
        (1..=acceptance::CRITERION_COUNT).collect()
    } else {
        only.to_vec()
    };
    let reports: Vec<_> = ids.iter().map(|&i| acceptance::run(i)).collect();
    let passed = reports.iter().filter(|r| r.pass).count();
    let mut lines: Vec<String> = reports
        .iter()
        .map(|r| {
            let status = if r.pass { "ok  " } else { "FAIL" };
            format!("{status} {:>2} {}: {}", r.id, r.name, r.detail)
        })
        .collect();
    lines.push(format!("{passed}/{} criteria passed", reports.len()));
    let items: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail }))
        .collect();
    Ok(Output {
        verdict: json!(items),
        certificate: None,
        text: lines.join("\n"),
        code: if passed == reports.len() { 0 } else { 1 },
    })
}

/// The canonical notation for a presentation, rebuilt from its structure.
fn render(t: &SpinedTree) -> String {
    expr_of(t).to_string()
}

fn expr_of(t: &SpinedTree) -> Expr {
    match t {
        SpinedTree::Fin(f) => Expr::Fin(f.clone()),
        SpinedTree::SOrd(a) => Expr::SOrd(a.clone()),
        SpinedTree::Spine { mode, gen, lengths } => {
            let base = match gen {
                GenSeq::Periodic { prefix, cycle } => {
                    let conv = |slots: &[Option<SpinedTree>]| -> Vec<Option<Expr>> {
                        slots.iter().map(|s| s.as_ref().map(expr_of)).collect()
                    };
                    Expr::Spine { mode: *mode, prefix: conv(prefix), cycle: conv(cycle) }
                }
                GenSeq::OrdinalRamp(l) => Expr::SOrd(l.clone()),
                GenSeq::VRamp => {
                    Expr::Comb { size: CombSize::Omega, hairy: *mode == Mode::Attach }
                }
            };
            if *lengths == NatSeqSpec::ones() {
                base
            } else {
                Expr::Sf { base: Box::new(base), lengths: lengths.clone() }
            }
        }
    }
}

fn env_cap(name: &str, default: usize) -> Result<usize> {
    match std::env::var(name) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("{name} must be a number, got {s:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(default),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(Error::invalid(format!("{name} is not valid UTF-8")))
        }
    }
}

fn enum_cap() -> Result<usize> {
    env_cap("TREEMINOR_ENUM_CAP", DEFAULT_ENUM_BOUND)
}

fn truncate_cap() -> Result<usize> {
    env_cap("TREEMINOR_TRUNCATE_CAP", DEFAULT_TRUNCATE_NODE_CAP)
}
