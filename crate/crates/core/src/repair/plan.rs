//! Repair plans: what every helper sends, what replacement nodes exchange
//! in each round, and how each replacement node assembles its t traces.
//!
//! Replacement node `i` (position in the sorted erased list) owns a set of
//! subsymbol slots. `Obtained(j)` is the j-th Phase-1 combination of helper
//! downloads, i.e. the left side of its j-th check equation. `Received`
//! holds a Phase-2 message. Every exchange and every recovery trace is a
//! B-linear recipe over the slots its node holds.
//!
//! All schemes work on the scaled unknowns c_i = lambda_i f(alpha_i) and
//! divide by lambda_i at the very end.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Elem, SubElem, Tower};
use crate::linalg::{BBasis, Coordinates};
use crate::rs::{trace_quotient_eval, RsCode};

use super::SchemeBranch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Obtained(usize),
    Received { round: usize, from: usize },
}

impl Slot {
    /// Round after which the slot is available (Phase 1 counts as round 0).
    pub fn round(self) -> usize {
        match self {
            Slot::Obtained(_) => 0,
            Slot::Received { round, .. } => round,
        }
    }
}

/// A B-linear combination of slots, sorted by slot, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Recipe(Vec<(Slot, SubElem)>);

impl Recipe {
    pub fn slot(slot: Slot) -> Recipe {
        Recipe(vec![(slot, SubElem::ONE)])
    }

    pub fn from_terms(field: &Tower, terms: impl IntoIterator<Item = (Slot, SubElem)>) -> Recipe {
        let mut acc: BTreeMap<Slot, SubElem> = BTreeMap::new();
        for (s, c) in terms {
            let e = acc.entry(s).or_insert(SubElem::ZERO);
            *e = field.b_add(*e, c);
        }
        Recipe(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Sum of coeffs[i] * Obtained(i).
    pub fn obtained_combination(field: &Tower, coeffs: &[SubElem]) -> Recipe {
        Self::from_terms(
            field,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (Slot::Obtained(i), c)),
        )
    }

    /// self + c * other
    pub fn plus(&self, field: &Tower, c: SubElem, other: &Recipe) -> Recipe {
        let scaled = other.0.iter().map(|&(s, x)| (s, field.b_mul(c, x)));
        Self::from_terms(field, self.0.iter().copied().chain(scaled))
    }

    /// Sum of coeffs[i] * recipes[i].
    pub fn combination(field: &Tower, coeffs: &[SubElem], recipes: &[Recipe]) -> Recipe {
        coeffs
            .iter()
            .zip(recipes)
            .fold(Recipe::default(), |acc, (&c, r)| acc.plus(field, c, r))
    }

    pub fn terms(&self) -> &[(Slot, SubElem)] {
        &self.0
    }

    /// Latest round any referenced slot comes from.
    pub fn max_round(&self) -> usize {
        self.0.iter().map(|(s, _)| s.round()).max().unwrap_or(0)
    }

    pub fn eval(&self, field: &Tower, lookup: impl Fn(Slot) -> Option<SubElem>) -> Result<SubElem> {
        let mut acc = SubElem::ZERO;
        for &(s, c) in &self.0 {
            let v =
                lookup(s).ok_or_else(|| Error::Dataflow(format!("slot {s:?} is not available")))?;
            acc = field.b_add(acc, field.b_mul(c, v));
        }
        Ok(acc)
    }
}

/// One Phase-2 subsymbol sent from one replacement node to another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exchange {
    pub round: usize,
    pub from: usize,
    pub to: usize,
    pub recipe: Recipe,
}

/// How a replacement node assembles t traces Tr(basis_j * c) and recovers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovery {
    pub basis: BBasis,
    pub traces: Vec<Recipe>,
    pub ready_after: usize,
    /// Multiplier to divide out after recovering the scaled symbol.
    pub lambda: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedCoords {
    pub name: String,
    pub values: Coordinates,
}

impl NamedCoords {
    pub fn new(name: impl Into<String>, values: Coordinates) -> Self {
        NamedCoords {
            name: name.into(),
            values,
        }
    }
}

/// Static bandwidth of a plan, in subsymbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bandwidth {
    pub phase1: usize,
    pub phase2: usize,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairPlan {
    pub branch: SchemeBranch,
    /// Erased code positions, ascending; replacement node i repairs erased[i].
    pub erased: Vec<usize>,
    /// Surviving code positions, ascending.
    pub helpers: Vec<usize>,
    pub delta: Option<Elem>,
    pub gammas: Vec<Elem>,
    /// Scalar multiplying node i's check polynomials (1, gamma, gamma1, ..).
    pub check_scalars: Vec<Elem>,
    /// Node i's check-polynomial basis (U', V', W').
    pub bases: Vec<BBasis>,
    pub coefficients: Vec<NamedCoords>,
    /// instructions[i][h]: helper h sends Tr(mu * f(alpha_h)) to node i.
    pub instructions: Vec<Vec<Elem>>,
    /// weights[i][j][h]: coefficient of helper h's download in Obtained(j).
    pub phase1_weights: Vec<Vec<Vec<SubElem>>>,
    pub schedule: Vec<Exchange>,
    pub recovery: Vec<Recovery>,
}

/// Symbolic value sum_e Tr(theta_e * c_e) over the erased unknowns.
type Form = Vec<Elem>;

fn form_add_scaled(field: &Tower, acc: &mut Form, c: SubElem, f: &Form) {
    for (a, &x) in acc.iter_mut().zip(f) {
        *a = field.add(*a, field.scale(c, x));
    }
}

impl RepairPlan {
    pub fn bandwidth(&self) -> Bandwidth {
        Bandwidth {
            phase1: self.erased.len() * self.helpers.len(),
            phase2: self.schedule.len(),
            rounds: self.rounds(),
        }
    }

    pub fn rounds(&self) -> usize {
        self.schedule.iter().map(|e| e.round).max().unwrap_or(0)
    }

    pub fn messages_in_round(&self, round: usize) -> impl Iterator<Item = &Exchange> {
        self.schedule.iter().filter(move |e| e.round == round)
    }

    /// Checks the plan against the code before anything is executed:
    /// helper instructions and Phase-1 weights match the bases, no message
    /// uses data from its own or a later round, and every recovery recipe
    /// provably yields t traces of its own unknown against a rank-t basis.
    pub fn validate(&self, code: &RsCode) -> Result<()> {
        let field = code.field();
        let r = self.erased.len();
        let t = field.t() as usize;
        let bad = |m: String| Err(Error::InvalidPlan(m));

        if self.check_scalars.len() != r || self.bases.len() != r || self.recovery.len() != r {
            return bad("per-node vectors do not match the erasure count".into());
        }
        let mut expected_helpers: Vec<usize> =
            (0..code.n()).filter(|i| !self.erased.contains(i)).collect();
        expected_helpers.sort_unstable();
        if self.helpers != expected_helpers {
            return bad("helper set must be every surviving node".into());
        }
        let (instructions, weights) =
            phase1_tables(code, &self.erased, &self.check_scalars, &self.bases)?;
        if instructions != self.instructions || weights != self.phase1_weights {
            return bad("Phase-1 instructions do not match the check polynomials".into());
        }

        // forms of every slot, filled round by round
        let mut forms: Vec<BTreeMap<Slot, Form>> =
            obtained_forms(code, &self.erased, &self.check_scalars, &self.bases)
                .into_iter()
                .map(|per_node| {
                    per_node
                        .into_iter()
                        .enumerate()
                        .map(|(j, f)| (Slot::Obtained(j), f))
                        .collect()
                })
                .collect();

        let form_of = |forms: &[BTreeMap<Slot, Form>],
                       node: usize,
                       recipe: &Recipe,
                       before: usize|
         -> Result<Form> {
            let mut acc = vec![Elem::ZERO; r];
            for &(slot, c) in recipe.terms() {
                if slot.round() >= before {
                    return Err(Error::Dataflow(format!(
                        "node {node} uses {slot:?} before round {before} has completed"
                    )));
                }
                let f = forms[node]
                    .get(&slot)
                    .ok_or_else(|| Error::Dataflow(format!("node {node} never holds {slot:?}")))?;
                form_add_scaled(field, &mut acc, c, f);
            }
            Ok(acc)
        };

        for round in 1..=self.rounds() {
            let mut delivered = Vec::new();
            for ex in self.messages_in_round(round) {
                if ex.from >= r || ex.to >= r || ex.from == ex.to {
                    return bad(format!(
                        "bad endpoints in round {round}: {} -> {}",
                        ex.from, ex.to
                    ));
                }
                let f = form_of(&forms, ex.from, &ex.recipe, round)?;
                delivered.push((
                    ex.to,
                    Slot::Received {
                        round,
                        from: ex.from,
                    },
                    f,
                ));
            }
            for (to, slot, f) in delivered {
                if forms[to].insert(slot, f).is_some() {
                    return bad(format!("duplicate message {slot:?} to node {to}"));
                }
            }
        }

        for (i, rec) in self.recovery.iter().enumerate() {
            if !rec.basis.is_full(field) || rec.traces.len() != t {
                return bad(format!("node {i} recovery basis must have rank {t}"));
            }
            if rec.lambda != code.lambda(self.erased[i]) {
                return bad(format!("node {i} divides by the wrong multiplier"));
            }
            let ready = rec.traces.iter().map(Recipe::max_round).max().unwrap_or(0);
            if ready != rec.ready_after {
                return bad(format!(
                    "node {i} ready_after is {} but recipes need round {ready}",
                    rec.ready_after
                ));
            }
            for (j, recipe) in rec.traces.iter().enumerate() {
                let f = form_of(&forms, i, recipe, ready + 1)?;
                for (e, &theta) in f.iter().enumerate() {
                    let want = if e == i {
                        rec.basis.elements()[j]
                    } else {
                        Elem::ZERO
                    };
                    if theta != want {
                        return bad(format!(
                            "node {i} trace {j} does not isolate its own unknown (component {e})"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Per erased node, per helper, the B-coefficients of each basis trace.
type Phase1Weights = Vec<Vec<Vec<SubElem>>>;

/// Helper instructions and Phase-1 weights implied by the check polynomials
/// p(x) = nu_i Tr(z_j (x - alpha_i)) / (x - alpha_i).
pub(crate) fn phase1_tables(
    code: &RsCode,
    erased: &[usize],
    scalars: &[Elem],
    bases: &[BBasis],
) -> Result<(Vec<Vec<Elem>>, Phase1Weights)> {
    let field = code.field();
    let helpers: Vec<usize> = (0..code.n()).filter(|i| !erased.contains(i)).collect();
    let mut instructions = Vec::with_capacity(erased.len());
    let mut weights = Vec::with_capacity(erased.len());
    for ((&node, &nu), basis) in erased.iter().zip(scalars).zip(bases) {
        let center = code.point(node);
        let mut instr = Vec::with_capacity(helpers.len());
        for &h in &helpers {
            let d = field.sub(code.point(h), center);
            instr.push(field.div(field.mul(nu, code.lambda(h)), d)?);
        }
        let w = basis
            .elements()
            .iter()
            .map(|&z| {
                helpers
                    .iter()
                    .map(|&h| {
                        let d = field.sub(code.point(h), center);
                        field.b_neg(field.trace(field.mul(z, d)))
                    })
                    .collect()
            })
            .collect();
        instructions.push(instr);
        weights.push(w);
    }
    Ok((instructions, weights))
}

/// Obtained(j) at node i equals sum_e Tr(nu_i p_j(alpha_e) c_e) over the
/// erased positions e.
fn obtained_forms(
    code: &RsCode,
    erased: &[usize],
    scalars: &[Elem],
    bases: &[BBasis],
) -> Vec<Vec<Form>> {
    let field = code.field();
    erased
        .iter()
        .zip(scalars)
        .zip(bases)
        .map(|((&node, &nu), basis)| {
            basis
                .elements()
                .iter()
                .map(|&z| {
                    erased
                        .iter()
                        .map(|&e| {
                            field.mul(
                                nu,
                                trace_quotient_eval(field, z, code.point(node), code.point(e)),
                            )
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Assembles and validates a plan from its branch-specific parts.
pub(crate) struct PlanParts {
    pub branch: SchemeBranch,
    pub erased: Vec<usize>,
    pub delta: Option<Elem>,
    pub gammas: Vec<Elem>,
    pub check_scalars: Vec<Elem>,
    pub bases: Vec<BBasis>,
    pub coefficients: Vec<NamedCoords>,
    pub schedule: Vec<Exchange>,
    /// (basis, trace recipes) per node
    pub recovery: Vec<(BBasis, Vec<Recipe>)>,
}

impl PlanParts {
    pub fn build(self, code: &RsCode) -> Result<RepairPlan> {
        let (instructions, phase1_weights) =
            phase1_tables(code, &self.erased, &self.check_scalars, &self.bases)?;
        let helpers = (0..code.n()).filter(|i| !self.erased.contains(i)).collect();
        let recovery = self
            .recovery
            .into_iter()
            .zip(&self.erased)
            .map(|((basis, traces), &node)| Recovery {
                ready_after: traces.iter().map(Recipe::max_round).max().unwrap_or(0),
                basis,
                traces,
                lambda: code.lambda(node),
            })
            .collect();
        let mut schedule = self.schedule;
        schedule.sort_by_key(|e| (e.round, e.from, e.to));
        let plan = RepairPlan {
            branch: self.branch,
            erased: self.erased,
            helpers,
            delta: self.delta,
            gammas: self.gammas,
            check_scalars: self.check_scalars,
            bases: self.bases,
            coefficients: self.coefficients,
            instructions,
            phase1_weights,
            schedule,
            recovery,
        };
        plan.validate(code)?;
        Ok(plan)
    }
}
