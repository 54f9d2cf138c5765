//! Executes repair plans on simulated nodes with synchronous rounds.
//!
//! Each round runs as a barrier: every message of the round is computed from
//! the state held before the round, then all of them are delivered at once.

use std::collections::BTreeMap;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, SubElem};
use crate::linalg::recover_from_traces;
use crate::repair::{self, Bandwidth, FailurePattern, Recovery, RepairPlan, SchemeBranch, Slot};
use crate::rs::{eval_poly, Codeword, Message, RsCode};

/// Largest message count `MessageSource::Exhaustive` will enumerate.
pub const MAX_EXHAUSTIVE_MESSAGES: u64 = 1 << 16;

/// One subsymbol on the wire. Phase 1 messages use round 0; sender and
/// receiver are code positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentMessage {
    pub phase: u8,
    pub round: usize,
    pub sender: usize,
    pub receiver: usize,
    pub value: SubElem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LedgerEntry {
    pub phase: u8,
    pub round: usize,
    pub sender: usize,
    pub receiver: usize,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BandwidthLedger {
    pub entries: Vec<LedgerEntry>,
}

impl BandwidthLedger {
    fn record(&mut self, m: &SentMessage) {
        self.entries.push(LedgerEntry {
            phase: m.phase,
            round: m.round,
            sender: m.sender,
            receiver: m.receiver,
            count: 1,
        });
    }

    pub fn phase_total(&self, phase: u8) -> usize {
        self.entries
            .iter()
            .filter(|e| e.phase == phase)
            .map(|e| e.count)
            .sum()
    }

    pub fn rounds(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.phase == 2)
            .map(|e| e.round)
            .max()
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.count).sum()
    }

    pub fn bandwidth(&self) -> Bandwidth {
        Bandwidth {
            phase1: self.phase_total(1),
            phase2: self.phase_total(2),
            rounds: self.rounds(),
        }
    }

    /// The common volume on every used link of a phase (per round in
    /// Phase 2), or None if links carry different amounts.
    pub fn per_link(&self, phase: u8) -> Option<usize> {
        let mut links: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        for e in self.entries.iter().filter(|e| e.phase == phase) {
            *links.entry((e.round, e.sender, e.receiver)).or_default() += e.count;
        }
        let mut volumes = links.values();
        let first = *volumes.next()?;
        volumes.all(|&v| v == first).then_some(first)
    }
}

/// A storage node during repair. Replacement nodes start erased.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub index: usize,
    stored: Option<Elem>,
    pub inbox: Vec<SentMessage>,
    /// Obtained and received subsymbols by slot.
    pub derived: BTreeMap<Slot, SubElem>,
}

impl NodeState {
    fn erased(index: usize) -> NodeState {
        NodeState {
            index,
            stored: None,
            inbox: Vec::new(),
            derived: BTreeMap::new(),
        }
    }

    pub fn stored(&self) -> Option<Elem> {
        self.stored
    }

    fn restore(&mut self, value: Elem) -> Result<()> {
        if self.stored.is_some() {
            return Err(Error::Internal(format!(
                "node {} restored twice",
                self.index
            )));
        }
        self.stored = Some(value);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub erased: Vec<usize>,
    pub ledger: BandwidthLedger,
    pub messages: Vec<SentMessage>,
    pub recovered: BTreeMap<usize, Elem>,
}

impl Transcript {
    /// Recomputes the recovered symbols from the recorded message values.
    pub fn replay(&self, code: &RsCode, plan: &RepairPlan) -> Result<BTreeMap<usize, Elem>> {
        let (mut nodes, pos) = phase1_nodes(code, plan, |i, h| {
            self.messages
                .iter()
                .find(|m| m.phase == 1 && m.sender == h && m.receiver == plan.erased[i])
                .map(|m| m.value)
                .ok_or_else(|| {
                    Error::Dataflow(format!(
                        "no recorded download from {h} to {}",
                        plan.erased[i]
                    ))
                })
        })?;
        for m in self.messages.iter().filter(|m| m.phase == 2) {
            let to = pos(m.receiver)?;
            let slot = Slot::Received {
                round: m.round,
                from: pos(m.sender)?,
            };
            nodes[to].derived.insert(slot, m.value);
        }
        let mut out = BTreeMap::new();
        for (node, rec) in nodes.iter().zip(&plan.recovery) {
            out.insert(node.index, recover(code, rec, &node.derived, usize::MAX)?);
        }
        Ok(out)
    }
}

type Lookup = Box<dyn Fn(usize) -> Result<usize>>;

fn phase1_nodes(
    code: &RsCode,
    plan: &RepairPlan,
    mut download: impl FnMut(usize, usize) -> Result<SubElem>,
) -> Result<(Vec<NodeState>, Lookup)> {
    let field = code.field();
    let mut nodes = Vec::with_capacity(plan.erased.len());
    for (i, &pos) in plan.erased.iter().enumerate() {
        let mut node = NodeState::erased(pos);
        let mut values = Vec::with_capacity(plan.helpers.len());
        for &h in &plan.helpers {
            let value = download(i, h)?;
            node.inbox.push(SentMessage {
                phase: 1,
                round: 0,
                sender: h,
                receiver: pos,
                value,
            });
            values.push(value);
        }
        for (j, w) in plan.phase1_weights[i].iter().enumerate() {
            let v = field.b_sum(w.iter().zip(&values).map(|(&c, &x)| field.b_mul(c, x)));
            node.derived.insert(Slot::Obtained(j), v);
        }
        nodes.push(node);
    }
    let erased = plan.erased.clone();
    let pos: Lookup = Box::new(move |p| {
        erased
            .iter()
            .position(|&e| e == p)
            .ok_or_else(|| Error::Dataflow(format!("position {p} is not a replacement node")))
    });
    Ok((nodes, pos))
}

/// Evaluates the recovery recipe using only slots from rounds <= `upto`.
fn recover(
    code: &RsCode,
    rec: &Recovery,
    slots: &BTreeMap<Slot, SubElem>,
    upto: usize,
) -> Result<Elem> {
    let field = code.field();
    let lookup = |s: Slot| {
        (s.round() <= upto)
            .then(|| slots.get(&s).copied())
            .flatten()
    };
    let traces = rec
        .traces
        .iter()
        .map(|r| r.eval(field, lookup))
        .collect::<Result<Vec<_>>>()?;
    let scaled = recover_from_traces(field, &rec.basis, &traces)?;
    field.div(scaled, rec.lambda)
}

fn check_codeword(code: &RsCode, codeword: &Codeword) -> Result<()> {
    if codeword.0.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            got: codeword.0.len(),
        });
    }
    let positions: Vec<usize> = (0..code.k()).collect();
    let msg = code.lagrange_decode(&positions, &codeword.0[..code.k()])?;
    if code.encode(&msg)? != *codeword {
        return Err(Error::NotACodeword);
    }
    Ok(())
}

/// Runs Phase 1 and every Phase-2 round of `plan` on `codeword`, then
/// checks every recovered symbol against the interpolation oracle.
pub fn run_repair(code: &RsCode, codeword: &Codeword, plan: &RepairPlan) -> Result<Transcript> {
    check_codeword(code, codeword)?;
    plan.validate(code)?;
    let field = code.field();
    let mut ledger = BandwidthLedger::default();
    let mut messages = Vec::new();

    // helpers answer from their own symbol only
    let (mut nodes, _) = phase1_nodes(code, plan, |i, h| {
        let hi = plan
            .helpers
            .iter()
            .position(|&x| x == h)
            .expect("helper listed");
        Ok(field.trace(field.mul(plan.instructions[i][hi], codeword.0[h])))
    })?;
    for node in &nodes {
        for m in &node.inbox {
            ledger.record(m);
            messages.push(*m);
        }
    }

    let finish = |nodes: &mut [NodeState], done: usize| -> Result<()> {
        for (node, rec) in nodes.iter_mut().zip(&plan.recovery) {
            if rec.ready_after == done {
                let v = recover(code, rec, &node.derived, done)?;
                node.restore(v)?;
            }
        }
        Ok(())
    };
    finish(&mut nodes, 0)?;

    for round in 1..=plan.rounds() {
        let mut outgoing = Vec::new();
        for ex in plan.messages_in_round(round) {
            let sender = &nodes[ex.from];
            let lookup = |s: Slot| {
                (s.round() < round)
                    .then(|| sender.derived.get(&s).copied())
                    .flatten()
            };
            let value = ex.recipe.eval(field, lookup).map_err(|e| {
                Error::Dataflow(format!(
                    "round {round}, {} -> {}: {e}",
                    plan.erased[ex.from], plan.erased[ex.to]
                ))
            })?;
            outgoing.push((ex.to, ex.from, value));
        }
        for (to, from, value) in outgoing {
            let m = SentMessage {
                phase: 2,
                round,
                sender: plan.erased[from],
                receiver: plan.erased[to],
                value,
            };
            ledger.record(&m);
            messages.push(m);
            nodes[to].inbox.push(m);
            nodes[to]
                .derived
                .insert(Slot::Received { round, from }, value);
        }
        finish(&mut nodes, round)?;
    }

    let mut recovered = BTreeMap::new();
    for node in &nodes {
        let v = node
            .stored()
            .ok_or_else(|| Error::Internal(format!("node {} never recovered", node.index)))?;
        recovered.insert(node.index, v);
    }
    if ledger.bandwidth() != plan.bandwidth() {
        return Err(Error::Internal(
            "executed bandwidth differs from the plan".into(),
        ));
    }
    let transcript = Transcript {
        erased: plan.erased.clone(),
        ledger,
        messages,
        recovered,
    };
    if let Some(bad) = verify_against_oracle(code, codeword, &transcript)?.first_mismatch() {
        return Err(Error::OracleMismatch { index: bad });
    }
    Ok(transcript)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolCheck {
    pub index: usize,
    pub recovered: Option<Elem>,
    pub expected: Elem,
}

impl SymbolCheck {
    pub fn ok(&self) -> bool {
        self.recovered == Some(self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub checks: Vec<SymbolCheck>,
    /// k * t subsymbols: what one node downloads under naive repair.
    pub naive_per_node: usize,
    pub scheme_total: usize,
}

impl OracleReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(SymbolCheck::ok)
    }

    pub fn first_mismatch(&self) -> Option<usize> {
        self.checks.iter().find(|c| !c.ok()).map(|c| c.index)
    }

    pub fn naive_total(&self) -> usize {
        self.naive_per_node * self.checks.len()
    }
}

/// The erased symbols as the naive repair would rebuild them: interpolate
/// through the first k surviving positions.
pub fn oracle_symbols(code: &RsCode, codeword: &Codeword, erased: &[usize]) -> Result<Vec<Elem>> {
    let survivors: Vec<usize> = (0..code.n())
        .filter(|i| !erased.contains(i))
        .take(code.k())
        .collect();
    let values: Vec<Elem> = survivors.iter().map(|&i| codeword.0[i]).collect();
    let msg = code.lagrange_decode(&survivors, &values)?;
    Ok(erased
        .iter()
        .map(|&e| eval_poly(code.field(), &msg.0, code.point(e)))
        .collect())
}

pub fn verify_against_oracle(
    code: &RsCode,
    codeword: &Codeword,
    transcript: &Transcript,
) -> Result<OracleReport> {
    let expected = oracle_symbols(code, codeword, &transcript.erased)?;
    let checks = transcript
        .erased
        .iter()
        .zip(expected)
        .map(|(&index, expected)| SymbolCheck {
            index,
            recovered: transcript.recovered.get(&index).copied(),
            expected,
        })
        .collect();
    Ok(OracleReport {
        checks,
        naive_per_node: code.k() * code.field().t() as usize,
        scheme_total: transcript.ledger.total(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MessageSource {
    Explicit(Vec<Message>),
    Seeded { seed: u64, count: usize },
    Exhaustive,
}

impl MessageSource {
    pub fn messages(&self, code: &RsCode) -> Result<Vec<Message>> {
        match self {
            MessageSource::Explicit(m) => {
                if let Some(bad) = m.iter().find(|m| m.0.len() != code.k()) {
                    return Err(Error::LengthMismatch {
                        expected: code.k(),
                        got: bad.0.len(),
                    });
                }
                Ok(m.clone())
            }
            MessageSource::Seeded { seed, count } => Ok(seeded_messages(code, *seed, *count)),
            MessageSource::Exhaustive => exhaustive_messages(code),
        }
    }
}

/// `count` messages drawn uniformly from ChaCha8 seeded with `seed`.
pub fn seeded_messages(code: &RsCode, seed: u64, count: usize) -> Vec<Message> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = code.field().order();
    (0..count)
        .map(|_| {
            Message(
                (0..code.k())
                    .map(|_| {
                        code.field()
                            .elem(rng.gen_range(0..q) as usize)
                            .expect("index below order")
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Every message, in lexicographic order of coefficient indices.
pub fn exhaustive_messages(code: &RsCode) -> Result<Vec<Message>> {
    let q = code.field().order() as u128;
    let count = q.checked_pow(code.k() as u32).unwrap_or(u128::MAX);
    if count > MAX_EXHAUSTIVE_MESSAGES as u128 {
        return Err(Error::TooManyMessages {
            count,
            cap: MAX_EXHAUSTIVE_MESSAGES,
        });
    }
    Ok((0..count)
        .map(|mut idx| {
            let mut coeffs = vec![Elem::ZERO; code.k()];
            for c in coeffs.iter_mut().rev() {
                *c = code
                    .field()
                    .elem((idx % q) as usize)
                    .expect("index below order");
                idx /= q;
            }
            Message(coeffs)
        })
        .collect())
}

/// Size-r subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..r).rev().find(|&i| idx[i] < n - r + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternStatus {
    Repaired {
        branch: SchemeBranch,
        bandwidth: Bandwidth,
        runs: usize,
        verified: usize,
    },
    Unsupported {
        l: usize,
        t: usize,
    },
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternOutcome {
    pub erased: Vec<usize>,
    pub status: PatternStatus,
}

impl PatternOutcome {
    /// False only for failures; unsupported patterns are not failures.
    pub fn ok(&self) -> bool {
        match &self.status {
            PatternStatus::Repaired { runs, verified, .. } => runs == verified,
            PatternStatus::Unsupported { .. } => true,
            PatternStatus::Failed(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub r: usize,
    pub messages: usize,
    pub naive_per_node: usize,
    pub outcomes: Vec<PatternOutcome>,
}

impl SweepReport {
    pub fn branch_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for o in &self.outcomes {
            let key = match &o.status {
                PatternStatus::Repaired { branch, .. } => branch.branch.tag(),
                PatternStatus::Unsupported { .. } => "unsupported",
                PatternStatus::Failed(_) => "failed",
            };
            *out.entry(key).or_default() += 1;
        }
        out
    }

    pub fn repaired(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.status, PatternStatus::Repaired { .. }) && o.ok())
            .count()
    }

    pub fn unsupported(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.status, PatternStatus::Unsupported { .. }))
            .count()
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.ok()).count()
    }

    pub fn all_verified(&self) -> bool {
        self.failures() == 0
    }
}

fn run_pattern(code: &RsCode, erased: Vec<usize>, codewords: &[Codeword]) -> PatternOutcome {
    let status = (|| -> Result<PatternStatus> {
        let pattern = FailurePattern::new(code, &erased)?;
        let plan = repair::plan(code, &pattern)?;
        let mut verified = 0;
        for cw in codewords {
            match run_repair(code, cw, &plan) {
                Ok(_) => verified += 1,
                Err(Error::OracleMismatch { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(PatternStatus::Repaired {
            branch: plan.branch,
            bandwidth: plan.bandwidth(),
            runs: codewords.len(),
            verified,
        })
    })();
    let status = match status {
        Ok(s) => s,
        Err(Error::Unsupported { l, t }) => PatternStatus::Unsupported { l, t },
        Err(e) => PatternStatus::Failed(e),
    };
    PatternOutcome { erased, status }
}

/// Classifies, plans, runs and verifies every size-r erasure pattern.
/// Patterns are processed on all available cores; the report is ordered
/// lexicographically by pattern regardless.
pub fn sweep(code: &RsCode, r: usize, source: &MessageSource) -> Result<SweepReport> {
    if !(1..=3).contains(&r) {
        return Err(Error::InvalidPattern(format!(
            "erasure count must be 1, 2 or 3, got {r}"
        )));
    }
    code.require_feasible()?;
    let codewords = source
        .messages(code)?
        .iter()
        .map(|m| code.encode(m))
        .collect::<Result<Vec<_>>>()?;
    let patterns = combinations(code.n(), r);
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(patterns.len().max(1));
    let chunk = patterns.len().div_ceil(workers).max(1);
    let outcomes = thread::scope(|s| {
        let handles: Vec<_> = patterns
            .chunks(chunk)
            .map(|part| {
                let codewords = &codewords;
                s.spawn(move || {
                    part.iter()
                        .map(|p| run_pattern(code, p.clone(), codewords))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    Ok(SweepReport {
        r,
        messages: codewords.len(),
        naive_per_node: code.k() * code.field().t() as usize,
        outcomes,
    })
}
