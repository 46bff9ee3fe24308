use std::error::Error as StdError;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use doubling_core::classify::{doubling, find_witness, Constants, DoublingData, WitnessSearch};
use doubling_core::cyclic::parse_elements;
use doubling_core::fourier::{bias_detect, phi_scan, BiasParams, BiasWitness, PhiScanReport};
use doubling_core::harness::{
    extremal_scan, extremal_table, lemma_suite, sweep_theorem, LemmaConfig, Suite, SweepReport, SCHEMA_VERSION,
};
use doubling_core::rectify::{interval_rectify, is_rectifiable, IntervalMap, RectifyVerdict};
use doubling_core::{CyclicSet, Error};

use crate::output::Rendered;
use crate::{BiasArgs, Cli, Command, ConstantArgs, SetArgs};

type CliResult<T> = Result<T, Box<dyn StdError>>;

/// Moduli above this are refused by the commands that scan every residue.
const SCAN_LIMIT: u64 = 1 << 24;

fn usage(msg: impl Into<String>) -> Box<dyn StdError> {
    Box::new(Error::InvalidParameter(msg.into()))
}

fn resolve_set(args: &SetArgs) -> CliResult<CyclicSet> {
    let text = match (&args.literal, &args.set) {
        (Some(_), Some(_)) => return Err(usage("give the set either positionally or with --set, not both")),
        (Some(t), None) | (None, Some(t)) => t.as_str(),
        (None, None) => return Err(usage("missing set literal")),
    };
    let set: CyclicSet = match (args.group, text.contains(':')) {
        (Some(n), false) => parse_elements(n, text, 0)?,
        (_, true) => text.parse()?,
        (None, false) => return Err(usage("elements without a modulus: use `<n>:<elements>` or --group")),
    };
    if let Some(n) = args.group {
        if n != set.modulus() {
            return Err(usage(format!("--group {n} disagrees with the literal modulus {}", set.modulus())));
        }
    }
    if set.is_empty() {
        return Err(Box::new(Error::EmptySet));
    }
    if set.modulus() > SCAN_LIMIT {
        return Err(Box::new(Error::ModulusOverBound { modulus: set.modulus(), bound: SCAN_LIMIT }));
    }
    Ok(set)
}

fn constants(args: &ConstantArgs) -> CliResult<Constants> {
    Ok(Constants::from_overrides(args.c, args.c0)?)
}

fn bias_params(args: &BiasArgs) -> CliResult<BiasParams> {
    let p = BiasParams { min_index: args.min_index, coeff: args.coeff, coverage: args.coverage };
    p.validate()?;
    Ok(p)
}

fn elapsed_ms(cli: &Cli, start: Instant) -> Option<u64> {
    (!cli.no_timing).then(|| start.elapsed().as_millis() as u64)
}

/// A sub-report that may be skipped when its input is outside the supported range.
#[derive(Serialize)]
#[serde(untagged)]
enum Section<T> {
    Done(T),
    Skipped { skipped: String },
}

impl<T> Section<T> {
    fn from(r: doubling_core::Result<T>) -> Section<T> {
        match r {
            Ok(v) => Section::Done(v),
            Err(e) => Section::Skipped { skipped: e.to_string() },
        }
    }

    fn summary(&self, f: impl Fn(&T) -> String) -> String {
        match self {
            Section::Done(v) => f(v),
            Section::Skipped { skipped } => format!("skipped ({skipped})"),
        }
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    schema_version: u32,
    command: &'static str,
    set: CyclicSet,
    doubling: DoublingData,
    vsds: bool,
    stabilizer_order: u64,
    witness_search: WitnessSearch,
    rectify: Section<RectifyVerdict>,
    interval_rectify: Section<Option<IntervalMap>>,
    bias: Section<Option<BiasWitness>>,
}

fn analyze(set: &SetArgs, mode: crate::ModeArg, c: &ConstantArgs, b: &BiasArgs) -> CliResult<(Rendered, u8)> {
    let a = resolve_set(set)?;
    let constants = constants(c)?;
    let params = bias_params(b)?;
    let d = doubling(&a)?;
    let search = find_witness(&a, &constants, mode.into())?;
    let report = AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        command: "analyze",
        vsds: 2 * d.doubled < 3 * d.size,
        stabilizer_order: a.stabilizer().order(),
        doubling: d,
        rectify: Section::from(is_rectifiable(&a)),
        interval_rectify: Section::from(interval_rectify(&a)),
        bias: Section::from(bias_detect(&a, &params)),
        witness_search: search,
        set: a,
    };
    let s = &report.witness_search;
    let rectify = report.rectify.summary(|v| v.rectifiable.to_string());
    let bias = report.bias.summary(|w| {
        w.as_ref().map_or("none".into(), |w| format!("index {} progression length {}", w.index, w.progression.length))
    });
    let rows = vec![
        vec!["set".into(), report.set.to_string()],
        vec!["size".into(), d.size.to_string()],
        vec!["doubled".into(), d.doubled.to_string()],
        vec!["ratio".into(), d.ratio.to_string()],
        vec!["delta".into(), d.delta.to_string()],
        vec!["vsds".into(), report.vsds.to_string()],
        vec!["hypothesis_holds".into(), s.hypothesis_holds.to_string()],
        vec!["witnesses".into(), s.witnesses.iter().map(|w| w.variant()).collect::<Vec<_>>().join(" ")],
        vec!["best".into(), s.best_variant().into()],
        vec!["rectifiable".into(), rectify],
        vec!["bias".into(), bias],
    ];
    let mut text = String::new();
    for r in &rows {
        writeln!(text, "{:<17} {}", r[0], r[1])?;
    }
    Ok((Rendered::new(&report)?.table(&["key", "value"], rows).text(text), 0))
}

const REPORT_HEADER: [&str; 14] = [
    "kind",
    "suite",
    "mode",
    "n_max",
    "trials",
    "seed",
    "examined",
    "covered",
    "hypothesis",
    "vacuous",
    "pass",
    "violation",
    "nontrivial",
    "hypothesis_minimum_met",
];

fn report_row(r: &SweepReport) -> Vec<String> {
    let c = &r.config;
    let k = &r.counts;
    vec![
        c.kind.to_string(),
        c.suite.unwrap_or("").to_string(),
        c.mode.map_or(String::new(), |m| m.to_string()),
        c.n_max.to_string(),
        c.trials.to_string(),
        c.seed.to_string(),
        k.examined.to_string(),
        k.covered.to_string(),
        k.hypothesis.to_string(),
        k.vacuous.to_string(),
        k.pass.to_string(),
        k.violation.to_string(),
        k.nontrivial.to_string(),
        r.hypothesis_minimum_met.to_string(),
    ]
}

fn report_text(r: &SweepReport, out: &mut String) -> std::fmt::Result {
    let c = &r.config;
    let k = &r.counts;
    let name =
        c.suite.map_or_else(|| format!("sweep ({})", c.mode.map_or(String::new(), |m| m.to_string())), str::to_string);
    let status = if r.is_clean() { "ok" } else { "FAILED" };
    writeln!(
        out,
        "{name}: {status}  examined={} hypothesis={} vacuous={} violations={} (minimum hits {} {})",
        k.examined,
        k.hypothesis,
        k.vacuous,
        k.violation,
        c.min_hypothesis_hits,
        if r.hypothesis_minimum_met { "met" } else { "NOT met" }
    )?;
    for (variant, count) in &k.by_variant {
        writeln!(out, "  {variant}: {count}")?;
    }
    for v in r.violations.iter().take(20) {
        writeln!(out, "  violation {}: {}", v.instance, v.detail)?;
    }
    if r.violations.len() > 20 {
        writeln!(out, "  ... {} more", r.violations.len() - 20)?;
    }
    Ok(())
}

fn sweep(cli: &Cli, n_max: u64, mode: crate::ModeArg, c: &ConstantArgs) -> CliResult<(Rendered, u8)> {
    let constants = constants(c)?;
    let start = Instant::now();
    let mut report = sweep_theorem(n_max, mode.into(), &constants)?;
    report.runtime_ms = elapsed_ms(cli, start);
    let mut text = String::new();
    report_text(&report, &mut text)?;
    if let Some(note) = report.note {
        writeln!(text, "note: {note}")?;
    }
    let code = if report.is_clean() { 0 } else { 1 };
    Ok((Rendered::new(&report)?.table(&REPORT_HEADER, vec![report_row(&report)]).text(text), code))
}

#[derive(Serialize)]
struct SuiteBatch<'a> {
    schema_version: u32,
    command: &'static str,
    reports: &'a [SweepReport],
}

fn lemmas(cli: &Cli, suite: &str, config: LemmaConfig) -> CliResult<(Rendered, u8)> {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let mut reports = Vec::new();
    for s in suites {
        let start = Instant::now();
        let mut r = lemma_suite(s, &config)?;
        r.runtime_ms = elapsed_ms(cli, start);
        reports.push(r);
    }
    let code = if reports.iter().all(SweepReport::is_clean) { 0 } else { 1 };
    let mut text = String::new();
    for r in &reports {
        report_text(r, &mut text)?;
    }
    let rows = reports.iter().map(report_row).collect();
    let rendered = if reports.len() == 1 {
        Rendered::new(&reports[0])?
    } else {
        Rendered::new(&SuiteBatch { schema_version: SCHEMA_VERSION, command: "lemmas", reports: &reports })?
    };
    Ok((rendered.table(&REPORT_HEADER, rows).text(text), code))
}

fn parse_eps(s: &str) -> CliResult<(u64, u64)> {
    let bad = || usage(format!("eps must look like `num/den` with positive parts, got `{s}`"));
    let (a, b) = s.split_once('/').ok_or_else(bad)?;
    let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a == 0 || b == 0 {
        return Err(bad());
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct PhiReport {
    schema_version: u32,
    command: &'static str,
    #[serde(flatten)]
    scan: PhiScanReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<u64>,
}

fn phi(cli: &Cli, from: u64, to: u64, eps: &str) -> CliResult<(Rendered, u8)> {
    let eps = parse_eps(eps)?;
    if from >= to {
        return Err(usage(format!("empty range: need from < to, got {from} and {to}")));
    }
    let want_rows = cli.format == crate::Format::Csv;
    let mut rows = Vec::new();
    let start = Instant::now();
    let scan = phi_scan(from, to, eps, |r| {
        if want_rows {
            rows.push(vec![r.n.to_string(), r.phi_num.to_string(), r.phi_den.to_string(), r.ok.to_string()]);
        }
    });
    let report =
        PhiReport { schema_version: SCHEMA_VERSION, command: "phi-scan", scan, runtime_ms: elapsed_ms(cli, start) };
    let s = &report.scan;
    let mut text = format!(
        "phi-scan {} < n <= {}, eps = {}/{}: checked {} values, {} violations\n",
        s.lo,
        s.hi,
        s.eps_num,
        s.eps_den,
        s.checked,
        s.violations.len()
    );
    if let Some(m) = &s.max_row {
        writeln!(text, "largest: Phi({}) = {}/{}", m.n, m.phi_num, m.phi_den)?;
    }
    let code = if s.violations.is_empty() { 0 } else { 1 };
    Ok((Rendered::new(&report)?.table(&["n", "phi_num", "phi_den", "ok"], rows).text(text), code))
}

#[derive(Serialize)]
struct BiasReport {
    schema_version: u32,
    command: &'static str,
    set: CyclicSet,
    params: BiasParams,
    witness: Option<BiasWitness>,
}

fn bias(set: &SetArgs, b: &BiasArgs) -> CliResult<(Rendered, u8)> {
    let a = resolve_set(set)?;
    let params = bias_params(b)?;
    let witness = bias_detect(&a, &params)?;
    let (row, text) = match &witness {
        Some(w) => {
            let p = &w.progression;
            (
                vec![
                    w.subgroup.order().to_string(),
                    w.index.to_string(),
                    w.character.to_string(),
                    p.start.to_string(),
                    p.diff.to_string(),
                    p.length.to_string(),
                    w.coverage.to_string(),
                ],
                format!(
                    "character {} (ratio {:.6}): |H|={} index={} P=(start {}, diff {}, length {}) coverage={:.6}\n",
                    w.character,
                    w.coefficient_ratio,
                    w.subgroup.order(),
                    w.index,
                    p.start,
                    p.diff,
                    p.length,
                    w.coverage
                ),
            )
        }
        None => (vec![String::new(); 7], "no witness\n".to_string()),
    };
    let report = BiasReport { schema_version: SCHEMA_VERSION, command: "bias", set: a, params, witness };
    let header = ["subgroup_order", "index", "character", "start", "diff", "length", "coverage"];
    Ok((Rendered::new(&report)?.table(&header, vec![row]).text(text), 0))
}

#[derive(Serialize)]
struct RectifyReport {
    schema_version: u32,
    command: &'static str,
    set: CyclicSet,
    verdict: RectifyVerdict,
    interval: Option<IntervalMap>,
}

fn rectify(set: &SetArgs) -> CliResult<(Rendered, u8)> {
    let a = resolve_set(set)?;
    let verdict = is_rectifiable(&a)?;
    let interval = interval_rectify(&a)?;
    let model = verdict
        .integer_model
        .as_ref()
        .map_or(String::new(), |m| m.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
    let obstruction = verdict.obstruction.as_ref().map_or(String::new(), |o| format!("{:?} vs {:?}", o.left, o.right));
    let interval_text = interval.map_or(String::new(), |m| format!("unit {} shift {}", m.unit, m.shift));
    let row =
        vec![a.to_string(), verdict.rectifiable.to_string(), model.clone(), obstruction.clone(), interval_text.clone()];
    let text = format!(
        "{a}: rectifiable={}\n  model: {model}\n  obstruction: {obstruction}\n  interval: {interval_text}\n",
        verdict.rectifiable
    );
    let report = RectifyReport { schema_version: SCHEMA_VERSION, command: "rectify", set: a, verdict, interval };
    Ok((
        Rendered::new(&report)?
            .table(&["set", "rectifiable", "model", "obstruction", "interval"], vec![row])
            .text(text),
        0,
    ))
}

#[derive(Serialize)]
struct ExtremalReport {
    schema_version: u32,
    command: &'static str,
    rows: Vec<doubling_core::harness::ExtremalRow>,
}

fn extremal(n: u64, size: Option<usize>) -> CliResult<(Rendered, u8)> {
    let rows = match size {
        Some(k) => vec![extremal_scan(n, k)?],
        None => extremal_table(n)?,
    };
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.k.to_string(),
                r.min_doubled.to_string(),
                r.example.to_string(),
                r.classes.to_string(),
            ]
        })
        .collect();
    let mut text = String::new();
    for r in &rows {
        writeln!(
            text,
            "n={} k={}: min |2A| = {} attained by {} ({} classes)",
            r.n, r.k, r.min_doubled, r.example, r.classes
        )?;
    }
    let report = ExtremalReport { schema_version: SCHEMA_VERSION, command: "extremal", rows };
    Ok((Rendered::new(&report)?.table(&["n", "k", "min_doubled", "example", "classes"], table).text(text), 0))
}

/// Runs the selected command, writes its output and returns the exit code.
pub fn run(cli: &Cli) -> CliResult<u8> {
    let (rendered, code) = match &cli.command {
        Command::Analyze { set, mode, constants, bias: b } => analyze(set, *mode, constants, b)?,
        Command::Sweep { n_max, mode, constants } => sweep(cli, *n_max, *mode, constants)?,
        Command::Lemmas { suite, n_max, trials, seed } => {
            lemmas(cli, suite, LemmaConfig { n_max: *n_max, trials: *trials, seed: *seed })?
        }
        Command::PhiScan { from, to, eps } => phi(cli, *from, *to, eps)?,
        Command::Bias { set, bias: b } => bias(set, b)?,
        Command::Rectify { set } => rectify(set)?,
        Command::Extremal { group, size } => extremal(*group, *size)?,
    };
    rendered.emit(cli)?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(literal: Option<&str>, set: Option<&str>, group: Option<u64>) -> SetArgs {
        SetArgs { literal: literal.map(String::from), set: set.map(String::from), group }
    }

    #[test]
    fn set_sources() {
        let a = resolve_set(&args(Some("7:0,1,3"), None, None)).unwrap();
        assert_eq!(a, resolve_set(&args(None, Some("0,1,3"), Some(7))).unwrap());
        assert_eq!(a, resolve_set(&args(None, Some("7:0,1,3"), Some(7))).unwrap());
        assert!(resolve_set(&args(Some("7:0"), Some("7:0"), None)).is_err());
        assert!(resolve_set(&args(None, None, Some(7))).is_err());
        assert!(resolve_set(&args(None, Some("0,1"), None)).is_err());
        assert!(resolve_set(&args(Some("7:0,1"), None, Some(8))).is_err());
        assert!(resolve_set(&args(Some("7:"), None, None)).is_err());
        assert!(resolve_set(&args(Some("33554432:0,1"), None, None)).is_err());
    }

    #[test]
    fn eps_parsing() {
        assert_eq!(parse_eps("4/2025").unwrap(), (4, 2025));
        assert_eq!(parse_eps(" 1 / 3 ").unwrap(), (1, 3));
        for bad in ["4", "0/5", "5/0", "a/b", "-1/2"] {
            assert!(parse_eps(bad).is_err(), "{bad}");
        }
    }
}
