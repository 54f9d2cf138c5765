//! JSON, CSV and plain-table renderings of plans, repairs and sweeps.
//! Every JSON document carries `"schema": 1`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::field::{Elem, SubElem, Tower};
use crate::linalg::{trace_kernel, BBasis};
use crate::repair::{
    canonical_gamma_pair, choose_delta, choose_delta_for, choose_gamma_two, Bandwidth, Branch,
    Recipe, RepairPlan, Slot,
};
use crate::rs::{repair_threshold, Codeword, Message, RsCode};
use crate::simnet::{OracleReport, PatternStatus, SweepReport, Transcript};

pub const SCHEMA: u32 = 1;

/// Bits in one subsymbol of B = GF(p^s).
pub fn bits_per_subsymbol(field: &Tower) -> f64 {
    field.s() as f64 * (field.p() as f64).log2()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
pub struct FieldInfo {
    pub schema: u32,
    pub field: String,
    pub p: u32,
    pub s: u32,
    pub t: u32,
    pub base_order: u32,
    pub order: u32,
    pub base_modulus: String,
    pub ext_modulus: String,
    pub trace_kernel_size: usize,
    pub repair_threshold: u64,
    pub bits_per_subsymbol: f64,
    pub delta: String,
    /// delta = 2 for the char-3, t = 2 three-erasure scheme
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_char3: Option<String>,
    pub gamma: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_pair: Option<[String; 2]>,
}

pub fn field_info(field: &Tower) -> Result<FieldInfo> {
    let t = field.t();
    let pair_branch = if t >= 3 {
        Branch::ThreeL1General
    } else if field.p() == 3 {
        Branch::ThreeL1T2Char3
    } else {
        Branch::ThreeL1T2CharNot3
    };
    let delta_char3 = if pair_branch == Branch::ThreeL1T2Char3 {
        Some(field.format(choose_delta_for(field, pair_branch)?))
    } else {
        None
    };
    let kernel = trace_kernel(field);
    Ok(FieldInfo {
        schema: SCHEMA,
        field: field.spec(),
        p: field.p(),
        s: field.s(),
        t,
        base_order: field.base_order(),
        order: field.order(),
        base_modulus: field.base_modulus_string(),
        ext_modulus: field.ext_modulus_string(),
        trace_kernel_size: (field.base_order() as usize).pow(kernel.dim() as u32),
        repair_threshold: repair_threshold(field),
        bits_per_subsymbol: bits_per_subsymbol(field),
        delta: field.format(choose_delta(field)),
        delta_char3,
        gamma: field.format(choose_gamma_two(field)),
        gamma_pair: canonical_gamma_pair(field, pair_branch)
            .map(|(a, b)| [field.format(a), field.format(b)]),
    })
}

pub fn field_info_table(info: &FieldInfo) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "field              {}", info.field);
    let _ = writeln!(s, "p, s, t            {}, {}, {}", info.p, info.s, info.t);
    let _ = writeln!(s, "|B|, |F|           {}, {}", info.base_order, info.order);
    let _ = writeln!(s, "base modulus       {}", info.base_modulus);
    let _ = writeln!(s, "extension modulus  {}", info.ext_modulus);
    let _ = writeln!(s, "|K|                {}", info.trace_kernel_size);
    let _ = writeln!(s, "n-k needed         >= {}", info.repair_threshold);
    let _ = writeln!(s, "delta              {}", info.delta);
    if let Some(d) = &info.delta_char3 {
        let _ = writeln!(s, "delta (char 3)     {d}");
    }
    let _ = writeln!(s, "gamma              {}", info.gamma);
    if let Some([g1, g2]) = &info.gamma_pair {
        let _ = writeln!(s, "gamma1, gamma2     {g1}, {g2}");
    }
    s
}

#[derive(Debug, Serialize)]
pub struct Term {
    pub slot: String,
    pub coeff: String,
}

#[derive(Debug, Serialize)]
pub struct ExchangeDto {
    pub round: usize,
    pub sender: usize,
    pub receiver: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Serialize)]
pub struct NamedValues {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct HelperInstructions {
    pub node: usize,
    /// mu per helper, in `helpers` order: the helper sends Tr(mu f(alpha))
    pub mu: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct RecoveryDto {
    pub node: usize,
    pub basis: Vec<String>,
    pub lambda: String,
    pub ready_after: usize,
    pub traces: Vec<Vec<Term>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BandwidthDto {
    pub phase1: usize,
    pub phase2: usize,
    pub rounds: usize,
}

impl From<Bandwidth> for BandwidthDto {
    fn from(b: Bandwidth) -> Self {
        BandwidthDto {
            phase1: b.phase1,
            phase2: b.phase2,
            rounds: b.rounds,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlanReport {
    pub schema: u32,
    pub field: String,
    pub n: usize,
    pub k: usize,
    pub erased: Vec<usize>,
    pub branch: &'static str,
    pub l: Option<usize>,
    pub delta: Option<String>,
    pub gammas: Vec<String>,
    pub check_scalars: Vec<String>,
    pub bases: Vec<Vec<String>>,
    pub coefficients: Vec<NamedValues>,
    pub helpers: Vec<usize>,
    pub helper_instructions: Vec<HelperInstructions>,
    pub schedule: Vec<ExchangeDto>,
    pub recovery: Vec<RecoveryDto>,
    pub bandwidth: BandwidthDto,
}

fn elems(field: &Tower, xs: &[Elem]) -> Vec<String> {
    xs.iter().map(|&x| field.format(x)).collect()
}

fn subs(field: &Tower, xs: &[SubElem]) -> Vec<String> {
    xs.iter().map(|&x| field.format_sub(x)).collect()
}

fn basis(field: &Tower, b: &BBasis) -> Vec<String> {
    elems(field, b.elements())
}

fn slot_name(plan: &RepairPlan, slot: Slot) -> String {
    match slot {
        Slot::Obtained(j) => format!("obtained[{j}]"),
        Slot::Received { round, from } => {
            format!("received[round {round}, from {}]", plan.erased[from])
        }
    }
}

fn terms(field: &Tower, plan: &RepairPlan, r: &Recipe) -> Vec<Term> {
    r.terms()
        .iter()
        .map(|&(slot, c)| Term {
            slot: slot_name(plan, slot),
            coeff: field.format_sub(c),
        })
        .collect()
}

pub fn plan_report(code: &RsCode, plan: &RepairPlan) -> PlanReport {
    let field = code.field();
    PlanReport {
        schema: SCHEMA,
        field: field.spec(),
        n: code.n(),
        k: code.k(),
        erased: plan.erased.clone(),
        branch: plan.branch.branch.tag(),
        l: plan.branch.l,
        delta: plan.delta.map(|d| field.format(d)),
        gammas: elems(field, &plan.gammas),
        check_scalars: elems(field, &plan.check_scalars),
        bases: plan.bases.iter().map(|b| basis(field, b)).collect(),
        coefficients: plan
            .coefficients
            .iter()
            .map(|c| NamedValues {
                name: c.name.clone(),
                values: subs(field, &c.values),
            })
            .collect(),
        helpers: plan.helpers.clone(),
        helper_instructions: plan
            .erased
            .iter()
            .zip(&plan.instructions)
            .map(|(&node, mu)| HelperInstructions {
                node,
                mu: elems(field, mu),
            })
            .collect(),
        schedule: plan
            .schedule
            .iter()
            .map(|e| ExchangeDto {
                round: e.round,
                sender: plan.erased[e.from],
                receiver: plan.erased[e.to],
                terms: terms(field, plan, &e.recipe),
            })
            .collect(),
        recovery: plan
            .erased
            .iter()
            .zip(&plan.recovery)
            .map(|(&node, rec)| RecoveryDto {
                node,
                basis: basis(field, &rec.basis),
                lambda: field.format(rec.lambda),
                ready_after: rec.ready_after,
                traces: rec.traces.iter().map(|r| terms(field, plan, r)).collect(),
            })
            .collect(),
        bandwidth: plan.bandwidth().into(),
    }
}

fn recipe_text(r: &[Term]) -> String {
    if r.is_empty() {
        return "0".into();
    }
    r.iter()
        .map(|t| format!("{}*{}", t.coeff, t.slot))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn plan_table(report: &PlanReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "field {}  n={} k={}  erased {:?}",
        report.field, report.n, report.k, report.erased
    );
    let _ = write!(s, "branch {}", report.branch);
    if let Some(l) = report.l {
        let _ = write!(s, " (l={l})");
    }
    let _ = writeln!(s);
    if let Some(d) = &report.delta {
        let _ = writeln!(s, "delta {d}");
    }
    if !report.gammas.is_empty() {
        let _ = writeln!(s, "gammas {}", report.gammas.join(", "));
    }
    for (node, b) in report.erased.iter().zip(&report.bases) {
        let _ = writeln!(s, "check basis for node {node}: {}", b.join(", "));
    }
    for c in &report.coefficients {
        let _ = writeln!(s, "{} = [{}]", c.name, c.values.join(", "));
    }
    for e in &report.schedule {
        let _ = writeln!(
            s,
            "round {}: {} -> {}: {}",
            e.round,
            e.sender,
            e.receiver,
            recipe_text(&e.terms)
        );
    }
    for r in &report.recovery {
        let _ = writeln!(
            s,
            "node {} recovers after round {} with basis {}",
            r.node,
            r.ready_after,
            r.basis.join(", ")
        );
        for (j, tr) in r.traces.iter().enumerate() {
            let _ = writeln!(s, "  trace {j} = {}", recipe_text(tr));
        }
    }
    let b = report.bandwidth;
    let _ = writeln!(
        s,
        "bandwidth phase1={} phase2={} rounds={}",
        b.phase1, b.phase2, b.rounds
    );
    s
}

#[derive(Debug, Serialize)]
pub struct MessageDto {
    pub phase: u8,
    pub round: usize,
    pub sender: usize,
    pub receiver: usize,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct LedgerDto {
    pub phase1: usize,
    pub phase2: usize,
    pub rounds: usize,
    pub total: usize,
    /// common per-link volume, when uniform
    pub beta1: Option<usize>,
    pub beta2: Option<usize>,
    pub bits_per_subsymbol: f64,
    pub total_bits: f64,
}

#[derive(Debug, Serialize)]
pub struct SymbolDto {
    pub index: usize,
    pub recovered: Option<String>,
    pub expected: String,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct RepairReport {
    pub schema: u32,
    pub field: String,
    pub n: usize,
    pub k: usize,
    pub erased: Vec<usize>,
    pub branch: &'static str,
    pub message: Vec<String>,
    pub codeword: Vec<String>,
    pub ledger: LedgerDto,
    pub messages: Vec<MessageDto>,
    pub recovered: Vec<SymbolDto>,
    pub naive_per_node: usize,
    pub naive_total: usize,
    pub ok: bool,
}

pub fn repair_report(
    code: &RsCode,
    plan: &RepairPlan,
    message: &Message,
    codeword: &Codeword,
    transcript: &Transcript,
    oracle: &OracleReport,
) -> RepairReport {
    let field = code.field();
    let ledger = &transcript.ledger;
    let bits = bits_per_subsymbol(field);
    RepairReport {
        schema: SCHEMA,
        field: field.spec(),
        n: code.n(),
        k: code.k(),
        erased: plan.erased.clone(),
        branch: plan.branch.branch.tag(),
        message: elems(field, &message.0),
        codeword: elems(field, &codeword.0),
        ledger: LedgerDto {
            phase1: ledger.phase_total(1),
            phase2: ledger.phase_total(2),
            rounds: ledger.rounds(),
            total: ledger.total(),
            beta1: ledger.per_link(1),
            beta2: ledger.per_link(2),
            bits_per_subsymbol: bits,
            total_bits: bits * ledger.total() as f64,
        },
        messages: transcript
            .messages
            .iter()
            .map(|m| MessageDto {
                phase: m.phase,
                round: m.round,
                sender: m.sender,
                receiver: m.receiver,
                value: field.format_sub(m.value),
            })
            .collect(),
        recovered: oracle
            .checks
            .iter()
            .map(|c| SymbolDto {
                index: c.index,
                recovered: c.recovered.map(|v| field.format(v)),
                expected: field.format(c.expected),
                ok: c.ok(),
            })
            .collect(),
        naive_per_node: oracle.naive_per_node,
        naive_total: oracle.naive_total(),
        ok: oracle.all_ok(),
    }
}

pub fn repair_table(r: &RepairReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "field {}  n={} k={}  erased {:?}  branch {}",
        r.field, r.n, r.k, r.erased, r.branch
    );
    for sym in &r.recovered {
        let _ = writeln!(
            s,
            "node {}: recovered {} expected {} {}",
            sym.index,
            sym.recovered.as_deref().unwrap_or("-"),
            sym.expected,
            if sym.ok { "ok" } else { "MISMATCH" }
        );
    }
    let l = &r.ledger;
    let _ = writeln!(
        s,
        "phase1={} phase2={} rounds={} total={} subsymbols ({} bits)",
        l.phase1, l.phase2, l.rounds, l.total, l.total_bits
    );
    let _ = writeln!(
        s,
        "naive repair: {} subsymbols per node, {} total",
        r.naive_per_node, r.naive_total
    );
    let _ = writeln!(s, "{}", if r.ok { "ok" } else { "FAILED" });
    s
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub pattern: Vec<usize>,
    pub branch: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    pub phase1_subsymbols: Option<usize>,
    pub phase2_subsymbols: Option<usize>,
    pub rounds: Option<usize>,
    pub runs: usize,
    pub verified: usize,
    /// None for unsupported patterns
    pub ok: Option<bool>,
    pub naive_subsymbols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub schema: u32,
    pub field: String,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub messages: usize,
    pub patterns: usize,
    pub repaired: usize,
    pub unsupported: usize,
    pub failures: usize,
    pub branch_counts: std::collections::BTreeMap<&'static str, usize>,
    pub ok: bool,
    pub rows: Vec<SweepRow>,
}

pub fn sweep_summary(code: &RsCode, report: &SweepReport) -> SweepSummary {
    let naive = report.naive_per_node * report.r;
    let rows = report
        .outcomes
        .iter()
        .map(|o| {
            let mut row = SweepRow {
                pattern: o.erased.clone(),
                branch: String::new(),
                l: None,
                phase1_subsymbols: None,
                phase2_subsymbols: None,
                rounds: None,
                runs: 0,
                verified: 0,
                ok: None,
                naive_subsymbols: naive,
                error: None,
            };
            match &o.status {
                PatternStatus::Repaired {
                    branch,
                    bandwidth,
                    runs,
                    verified,
                } => {
                    row.branch = branch.branch.tag().into();
                    row.l = branch.l;
                    row.phase1_subsymbols = Some(bandwidth.phase1);
                    row.phase2_subsymbols = Some(bandwidth.phase2);
                    row.rounds = Some(bandwidth.rounds);
                    row.runs = *runs;
                    row.verified = *verified;
                    row.ok = Some(runs == verified);
                }
                PatternStatus::Unsupported { l, .. } => {
                    row.branch = "unsupported".into();
                    row.l = Some(*l);
                }
                PatternStatus::Failed(e) => {
                    row.branch = "failed".into();
                    row.ok = Some(false);
                    row.error = Some(e.to_string());
                }
            }
            row
        })
        .collect();
    SweepSummary {
        schema: SCHEMA,
        field: code.field().spec(),
        n: code.n(),
        k: code.k(),
        r: report.r,
        messages: report.messages,
        patterns: report.outcomes.len(),
        repaired: report.repaired(),
        unsupported: report.unsupported(),
        failures: report.failures(),
        branch_counts: report.branch_counts(),
        ok: report.all_verified(),
        rows,
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// One CSV row per pattern. `ok` is "n/a" for unsupported patterns.
pub fn sweep_csv(summary: &SweepSummary) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "pattern",
        "branch",
        "phase1_subsymbols",
        "phase2_subsymbols",
        "rounds",
        "ok",
        "naive_subsymbols",
    ])
    .expect("in-memory write");
    for row in &summary.rows {
        let pattern = row
            .pattern
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        let ok = row.ok.map_or_else(|| "n/a".to_string(), |b| b.to_string());
        w.write_record([
            pattern,
            row.branch.clone(),
            opt(row.phase1_subsymbols),
            opt(row.phase2_subsymbols),
            opt(row.rounds),
            ok,
            row.naive_subsymbols.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

/// The single-row CSV of one repair, same columns as a sweep.
pub fn repair_csv(report: &RepairReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "pattern",
        "branch",
        "phase1_subsymbols",
        "phase2_subsymbols",
        "rounds",
        "ok",
        "naive_subsymbols",
    ])
    .expect("in-memory write");
    let pattern = report
        .erased
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    w.write_record([
        pattern,
        report.branch.to_string(),
        report.ledger.phase1.to_string(),
        report.ledger.phase2.to_string(),
        report.ledger.rounds.to_string(),
        report.ok.to_string(),
        report.naive_total.to_string(),
    ])
    .expect("in-memory write");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

pub fn sweep_table(summary: &SweepSummary) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "field {}  n={} k={}  r={}  {} messages per pattern",
        summary.field, summary.n, summary.k, summary.r, summary.messages
    );
    let _ = writeln!(s, "{} patterns", summary.patterns);
    for (branch, count) in &summary.branch_counts {
        let _ = writeln!(s, "  {branch:<22} {count}");
    }
    let mut bw: Vec<(&str, usize, usize, usize)> = summary
        .rows
        .iter()
        .filter_map(|r| {
            Some((
                r.branch.as_str(),
                r.phase1_subsymbols?,
                r.phase2_subsymbols?,
                r.rounds?,
            ))
        })
        .collect();
    bw.sort_unstable();
    bw.dedup();
    for (branch, p1, p2, rounds) in bw {
        let _ = writeln!(s, "  {branch}: phase1={p1} phase2={p2} rounds={rounds}");
    }
    let _ = writeln!(
        s,
        "{}/{} repaired, {} unsupported, {} failed",
        summary.repaired,
        summary.patterns - summary.unsupported,
        summary.unsupported,
        summary.failures
    );
    for row in summary.rows.iter().filter(|r| r.ok == Some(false)) {
        let _ = writeln!(
            s,
            "  FAILED {:?}: {}",
            row.pattern,
            row.error.as_deref().unwrap_or("oracle mismatch")
        );
    }
    s
}
