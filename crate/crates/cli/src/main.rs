mod report;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use occlogic::formula::parse_lines;
use occlogic::{parse_formula, Base, Caps, Relation, Session};
use serde::Serialize;

use report::{
    AnalyzeReport, CompareReport, CompareRow, DualityCheckReport, DualitySummary, EntailReport,
    RelationView, Violation, Witness,
};

/// Occurrence-level inconsistency analysis and non-explosive inference.
#[derive(Parser)]
#[command(name = "occlogic", version)]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,

    /// Report wall-clock time (changes the output on every run).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    /// Maximum variables in a two-valued model enumeration.
    #[arg(long, global = true, env = "OCCLOGIC_BOOL_CAP")]
    bool_cap: Option<usize>,

    /// Maximum variables in a three-valued LP_m scan.
    #[arg(long, global = true, env = "OCCLOGIC_LPM_CAP")]
    lpm_cap: Option<usize>,

    /// Maximum occurrences in a relation-lattice enumeration.
    #[arg(long, global = true, env = "OCCLOGIC_OCC_CAP")]
    occ_cap: Option<usize>,

    /// Maximum relations visited by an exhaustive sweep.
    #[arg(long, global = true, env = "OCCLOGIC_RELATION_CAP")]
    relation_cap: Option<u64>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            bool_vars: self.bool_cap.unwrap_or(d.bool_vars),
            lpm_vars: self.lpm_cap.unwrap_or(d.lpm_vars),
            occurrences: self.occ_cap.unwrap_or(d.occurrences),
            relations: self.relation_cap.unwrap_or(d.relations),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Occurrence table, MIRs, MCRs, BMCRs, O-MISes, MISes and C-MCRs.
    Analyze {
        file: PathBuf,
        /// Add raw counts.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide one query under one inference relation.
    Entail {
        file: PathBuf,
        #[arg(short, long)]
        query: String,
        #[arg(short, long, default_value = "classical")]
        relation: Relation,
        #[arg(long)]
        json: bool,
    },
    /// Check the hitting-set duality between MIRs and MCRs.
    DualityCheck {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Verdicts of every relation on a file of queries, with inclusion checks.
    Compare {
        file: PathBuf,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Exit statuses: 0 yes or pass, 1 no or fail, 2 bad input, 3 cap exceeded.
const NO: u8 = 1;
const INPUT: u8 = 2;
const CAP: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            let cap = e.chain().any(|c| {
                c.downcast_ref::<occlogic::Error>()
                    .is_some_and(occlogic::Error::is_cap_exceeded)
            });
            ExitCode::from(if cap { CAP } else { INPUT })
        }
    }
}

/// The error chain without links that only repeat their cause.
fn describe(e: &anyhow::Error) -> String {
    let mut parts: Vec<String> = Vec::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if parts.last().is_some_and(|last| last.ends_with(&msg)) {
            continue;
        }
        parts.push(msg);
    }
    parts.join(": ")
}

fn load(path: &Path) -> Result<Base> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Base::parse(&text).with_context(|| format!("in {}", path.display()))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn out(text: &str) -> Result<()> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn emit<T: Serialize>(report: &T) -> Result<()> {
    out(&(serde_json::to_string_pretty(report)? + "\n"))
}

fn status(ok: bool) -> u8 {
    if ok {
        0
    } else {
        NO
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let caps = cli.caps.caps();
    let start = Instant::now();
    let elapsed = || cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    match &cli.command {
        Command::Analyze { file, stats, json } => {
            let base = load(file)?;
            let session = Session::new(&base, caps);
            let mut report = AnalyzeReport::build(&session, *stats)?;
            report.timing_ms = elapsed();
            if *json {
                emit(&report)?;
            } else {
                out(&render_analyze(&report))?;
            }
            Ok(0)
        }
        Command::Entail {
            file,
            query,
            relation,
            json,
        } => {
            let base = load(file)?;
            let q = parse_formula(query)
                .map_err(occlogic::Error::from)
                .context("in query")?;
            let session = Session::new(&base, caps);
            let answer = session.entails(*relation, &q)?;
            let report = EntailReport {
                schema: report::ENTAIL_SCHEMA,
                query: q.to_string(),
                relation: relation.to_string(),
                holds: answer.holds(),
                witness: Witness::new(&base, &q, &answer),
                timing_ms: elapsed(),
            };
            if *json {
                emit(&report)?;
            } else {
                out(&render_entail(&report))?;
            }
            Ok(status(report.holds))
        }
        Command::DualityCheck { file, json } => {
            let base = load(file)?;
            let session = Session::new(&base, caps);
            let d = session.duality()?;
            let report = DualityCheckReport {
                schema: report::DUALITY_SCHEMA,
                mirs: d.mir_count,
                mcrs: d.mcr_count,
                duality: DualitySummary::new(&base, &d),
                timing_ms: elapsed(),
            };
            if *json {
                emit(&report)?;
            } else {
                let mut text = format!("MIRs: {}\nMCRs: {}\n", report.mirs, report.mcrs);
                write_duality(&mut text, &report.duality);
                out(&text)?;
            }
            Ok(status(report.duality.passed))
        }
        Command::Compare {
            file,
            queries,
            json,
        } => {
            let base = load(file)?;
            let text = std::fs::read_to_string(queries)
                .with_context(|| format!("cannot read {}", queries.display()))?;
            let qs = parse_lines(&text)
                .map_err(occlogic::Error::from)
                .with_context(|| format!("in {}", queries.display()))?;
            let session = Session::new(&base, caps);
            let consistent = session.is_consistent();
            let mut rows = Vec::new();
            let mut bad = Vec::new();
            for q in &qs {
                let mut verdicts = BTreeMap::new();
                for r in Relation::ALL {
                    verdicts.insert(r, session.entails(r, q)?.holds());
                }
                for rule in report::violations(&verdicts, consistent) {
                    bad.push(Violation {
                        query: q.to_string(),
                        rule,
                    });
                }
                rows.push(CompareRow {
                    query: q.to_string(),
                    verdicts: verdicts.iter().map(|(r, &v)| (r.to_string(), v)).collect(),
                });
            }
            let report = CompareReport {
                schema: report::COMPARE_SCHEMA,
                relations: Relation::ALL.iter().map(|r| r.to_string()).collect(),
                rows,
                violations: bad,
                timing_ms: elapsed(),
            };
            if *json {
                emit(&report)?;
            } else {
                out(&render_compare(&report))?;
            }
            Ok(status(report.violations.is_empty()))
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn blocks(v: &RelationView) -> String {
    if v.blocks.is_empty() {
        return "(all singletons)".to_string();
    }
    v.blocks
        .iter()
        .map(|b| format!("{{{}}}", b.join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn pn(v: &RelationView) -> String {
    let ps: Vec<String> = v.pn.iter().map(|[a, b]| format!("({a}, {b})")).collect();
    format!("{{{}}}", ps.join(", "))
}

fn write_relations(out: &mut String, title: &str, rs: &[RelationView]) {
    let _ = writeln!(out, "{title} ({}):", rs.len());
    for r in rs {
        let _ = writeln!(out, "  {}  pn={}", blocks(r), pn(r));
    }
}

fn write_duality(out: &mut String, d: &DualitySummary) {
    let _ = writeln!(
        out,
        "duality: {} ({} relations checked)",
        if d.passed { "pass" } else { "fail" },
        d.relations_checked
    );
    let _ = writeln!(
        out,
        "  every MCR is H-maximal: {}",
        yes_no(d.mcrs_are_h_maximal)
    );
    let _ = writeln!(
        out,
        "  every H-maximal relation is an MCR: {}",
        yes_no(d.h_maximal_are_mcrs)
    );
    let _ = writeln!(
        out,
        "  every MIR is H-minimal: {}",
        yes_no(d.mirs_are_h_minimal)
    );
    let _ = writeln!(
        out,
        "  every H-minimal relation is a MIR: {}",
        yes_no(d.h_minimal_are_mirs)
    );
    for c in &d.counterexamples {
        let hs = c
            .hitting_set
            .as_ref()
            .map(|h| {
                h.iter()
                    .map(|[a, b]| format!("({a}, {b})"))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .unwrap_or_default();
        let what = if c.enumerated {
            "not dual"
        } else {
            "dual but not enumerated"
        };
        let _ = writeln!(
            out,
            "  counterexample ({}, {what}): {}  H={{{hs}}}",
            c.side,
            blocks(&c.relation)
        );
    }
}

fn render_analyze(r: &AnalyzeReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "formulas:");
    for (i, f) in r.formulas.iter().enumerate() {
        let _ = writeln!(out, "  f{i}: {f}");
    }
    let _ = writeln!(out, "occurrences:");
    for o in &r.occurrences {
        let _ = writeln!(out, "  {}  {}", o.id, o.label);
    }
    let _ = writeln!(out, "consistent: {}", yes_no(r.consistent));
    write_relations(&mut out, "MIRs", &r.mirs);
    write_relations(&mut out, "MCRs", &r.mcrs);
    write_relations(&mut out, "BMCRs", &r.bmcrs);
    let sets = |xs: &[Vec<usize>]| -> Vec<String> {
        xs.iter()
            .map(|s| {
                format!(
                    "{{{}}}",
                    s.iter()
                        .map(|i| format!("f{i}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .collect()
    };
    let _ = writeln!(
        out,
        "O-MISes ({}): {}",
        r.omises.len(),
        sets(&r.omises).join(" ")
    );
    let _ = writeln!(
        out,
        "MISes ({}): {}",
        r.mises.len(),
        sets(&r.mises).join(" ")
    );
    let _ = writeln!(out, "C-MCRs ({}):", r.cmcrs.len());
    for c in &r.cmcrs {
        let ps: Vec<String> = c.iter().map(|[a, b]| format!("({a}, {b})")).collect();
        let _ = writeln!(out, "  {{{}}}", ps.join(", "));
    }
    write_duality(&mut out, &r.duality);
    if let Some(s) = &r.stats {
        let _ = writeln!(
            out,
            "stats: formulas={} variables={} occurrences={} mirs={} mcrs={} bmcrs={} omises={} mises={}",
            s.formulas, s.variables, s.occurrences, s.mirs, s.mcrs, s.bmcrs, s.omises, s.mises
        );
    }
    if let Some(t) = r.timing_ms {
        let _ = writeln!(out, "time: {t:.3} ms");
    }
    out
}

fn valuation(v: &BTreeMap<String, bool>) -> String {
    let xs: Vec<String> = v
        .iter()
        .map(|(k, b)| format!("{k}={}", u8::from(*b)))
        .collect();
    format!("{{{}}}", xs.join(", "))
}

fn render_entail(r: &EntailReport) -> String {
    let mut out = format!("{}\n", yes_no(r.holds));
    match &r.witness {
        Witness::CounterModel { valuation: v } => {
            let _ = writeln!(out, "counter-model: {}", valuation(v));
        }
        Witness::Renaming { relations } => {
            for w in relations {
                let _ = writeln!(out, "relation: {}", blocks(&w.relation));
                let _ = writeln!(out, "  renamed base: {}", w.renamed_base.join(", "));
                match &w.substitution {
                    Some(s) => {
                        let xs: Vec<String> = s.iter().map(|(k, v)| format!("{k}->{v}")).collect();
                        let label = if r.holds { "entailed" } else { "not entailed" };
                        let _ = writeln!(out, "  {label}: [{}]", xs.join(", "));
                    }
                    None => {
                        let _ = writeln!(out, "  no adaptation is entailed");
                    }
                }
            }
        }
        Witness::OModel {
            o_model,
            valuation: v,
        } => {
            let xs: Vec<String> = o_model
                .iter()
                .map(|(k, b)| format!("{k}={}", u8::from(*b)))
                .collect();
            let _ = writeln!(out, "o-model: {{{}}}", xs.join(", "));
            match v {
                Some(v) => {
                    let _ = writeln!(out, "compatible counter-valuation: {}", valuation(v));
                }
                None => {
                    let _ = writeln!(out, "no compatible valuation satisfies the query");
                }
            }
        }
        Witness::LpmCounterModel { interpretation } => {
            let xs: Vec<String> = interpretation
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let _ = writeln!(out, "minimal LP_m counter-model: {{{}}}", xs.join(", "));
        }
        Witness::None => {}
    }
    if let Some(t) = r.timing_ms {
        let _ = writeln!(out, "time: {t:.3} ms");
    }
    out
}

fn render_compare(r: &CompareReport) -> String {
    let width = r
        .rows
        .iter()
        .map(|row| row.query.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!("{:width$}", "query");
    for name in &r.relations {
        let _ = write!(out, " {name:>9}");
    }
    out.push('\n');
    for row in &r.rows {
        let _ = write!(out, "{:width$}", row.query);
        for name in &r.relations {
            let _ = write!(out, " {:>9}", yes_no(row.verdicts[name]));
        }
        out.push('\n');
    }
    for v in &r.violations {
        let _ = writeln!(out, "error: {}: violates {}", v.query, v.rule);
    }
    if let Some(t) = r.timing_ms {
        let _ = writeln!(out, "time: {t:.3} ms");
    }
    out
}
