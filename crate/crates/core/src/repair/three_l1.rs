use crate::error::{Error, Result};
use crate::field::{Elem, SubElem, Tower};
use crate::linalg::{coords_in_basis, solve_over_b, triple_kernel, BBasis};
use crate::rs::RsCode;

use super::gamma::others;
use super::plan::{Exchange, NamedCoords, PlanParts, Recipe, Slot};
use super::{
    choose_delta_for, expect_branch, solve_gamma_system, Branch, FailurePattern,
    GammaSystemSolution, RepairPlan,
};

/// The enumeration-first (gamma1, gamma2) of a three-l1 branch, before
/// any fallback search.
pub fn canonical_gamma_pair(field: &Tower, branch: Branch) -> Option<(Elem, Elem)> {
    let in_k = |x: Elem| !x.is_zero() && field.trace(x).is_zero();
    match branch {
        Branch::ThreeL1General => {
            let g1 = field.nonzero_elements().find(|&x| in_k(x))?;
            let inv1 = field.inv(g1).ok()?;
            let g2 = field
                .nonzero_elements()
                .find(|&x| in_k(x) && field.trace(field.mul(inv1, x)).is_zero())?;
            Some((g1, g2))
        }
        Branch::ThreeL1T2CharNot3 => {
            let g = field.nonzero_elements().find(|&x| in_k(x))?;
            Some((g, g))
        }
        _ => Some((Elem::ONE, Elem::ONE)),
    }
}

fn pick_gammas(field: &Tower, branch: Branch) -> Result<(Elem, Elem, GammaSystemSolution)> {
    if let Some((g1, g2)) = canonical_gamma_pair(field, branch) {
        if let Ok(sol) = solve_gamma_system(field, g1, g2) {
            return Ok((g1, g2, sol));
        }
    }
    let kernel: Vec<Elem> = field
        .nonzero_elements()
        .filter(|&x| field.trace(x).is_zero())
        .collect();
    for &g1 in &kernel {
        for &g2 in &kernel {
            if let Ok(sol) = solve_gamma_system(field, g1, g2) {
                return Ok((g1, g2, sol));
            }
        }
    }
    Err(Error::GammaSystem(
        "no (gamma1, gamma2) in K* x K* admits a solution for all three nodes".into(),
    ))
}

/// Three erasures with dim K_{1,2,3} = t-1, repaired in one round in which
/// every replacement node sends one subsymbol to each of the other two.
pub fn plan_three_l1(code: &RsCode, pattern: &FailurePattern) -> Result<RepairPlan> {
    let branch = expect_branch(
        code,
        pattern,
        &[
            Branch::ThreeL1General,
            Branch::ThreeL1T2CharNot3,
            Branch::ThreeL1T2Char3,
        ],
    )?;
    let field = code.field();
    let t = field.t() as usize;
    let e = pattern.erased();
    let pts = [code.point(e[0]), code.point(e[1]), code.point(e[2])];
    let inv_d12 = field.inv(field.sub(pts[0], pts[1]))?;

    // here K_{1,2,3} = K_{1,2} = K_{2,3} = K_{1,3}; U, V, W share one basis
    let k123 = triple_kernel(field, pts[0], pts[1], pts[2])?;
    let z = k123.basis().elements().to_vec();
    let delta = choose_delta_for(field, branch.branch)?;
    let last_vec = field.mul(delta, inv_d12);
    let mut full = z.clone();
    full.push(last_vec);
    let full = BBasis::new(field, full)?;

    let pure =
        |n: usize| -> Vec<Recipe> { (0..n).map(|j| Recipe::slot(Slot::Obtained(j))).collect() };
    let mixed = Slot::Obtained(t - 1);

    if branch.branch == Branch::ThreeL1T2Char3 {
        // exchange the mixed terms directly; together they are M * (Tr(c_i/(a1-a2)))_i
        let m: Vec<Vec<SubElem>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        field
                            .to_base(field.from_int(if i == j { 2 } else { 1 }))
                            .unwrap()
                    })
                    .collect()
            })
            .collect();
        let m_inv = invert3(field, &m)?;
        let mut schedule = Vec::new();
        for from in 0..3 {
            let (a, b) = others(from);
            for to in [a, b] {
                schedule.push(Exchange {
                    round: 1,
                    from,
                    to,
                    recipe: Recipe::slot(mixed),
                });
            }
        }
        let recovery = (0..3)
            .map(|node| {
                let terms = (0..3).map(|src| {
                    let slot = if src == node {
                        mixed
                    } else {
                        Slot::Received {
                            round: 1,
                            from: src,
                        }
                    };
                    (slot, m_inv[node][src])
                });
                let mut traces = pure(t - 1);
                traces.push(Recipe::from_terms(field, terms));
                let mut basis = z.clone();
                basis.push(inv_d12);
                Ok((BBasis::new(field, basis)?, traces))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut coefficients: Vec<NamedCoords> = m
            .iter()
            .enumerate()
            .map(|(i, row)| NamedCoords::new(format!("mixed_matrix_row{}", i + 1), row.clone()))
            .collect();
        coefficients.extend(m_inv.iter().enumerate().map(|(i, row)| {
            NamedCoords::new(format!("mixed_matrix_inverse_row{}", i + 1), row.clone())
        }));
        return PlanParts {
            branch,
            erased: e.to_vec(),
            delta: Some(delta),
            gammas: vec![Elem::ONE, Elem::ONE],
            check_scalars: vec![Elem::ONE; 3],
            bases: vec![full.clone(), full.clone(), full],
            coefficients,
            schedule,
            recovery,
        }
        .build(code);
    }

    let (g1, g2, sol) = pick_gammas(field, branch.branch)?;
    let nu = [Elem::ONE, g1, g2];
    let z_basis = k123.basis();

    let mut schedule = Vec::new();
    let mut recovery = Vec::new();
    let mut coefficients = Vec::new();
    for node in 0..3 {
        let (j, k) = others(node);
        let (x, y) = sol.pairs[node];
        // node j's combination cancels c_j in node's mixed term, node k's cancels c_k
        let target = field.mul(nu[node], inv_d12);
        let rest_j = field.sub(
            field.sub(target, field.scale(y, field.mul(nu[k], inv_d12))),
            field.scale(x, field.mul(nu[j], last_vec)),
        );
        let rest_k = field.sub(
            field.sub(target, field.scale(x, field.mul(nu[j], inv_d12))),
            field.scale(y, field.mul(nu[k], last_vec)),
        );
        let mut a = coords_in_basis(field, field.div(rest_j, nu[j])?, z_basis)?;
        a.push(x);
        let mut b = coords_in_basis(field, field.div(rest_k, nu[k])?, z_basis)?;
        b.push(y);
        schedule.push(Exchange {
            round: 1,
            from: j,
            to: node,
            recipe: Recipe::obtained_combination(field, &a),
        });
        schedule.push(Exchange {
            round: 1,
            from: k,
            to: node,
            recipe: Recipe::obtained_combination(field, &b),
        });

        let minus_one = field.b_neg(SubElem::ONE);
        let last = Recipe::slot(mixed)
            .plus(
                field,
                minus_one,
                &Recipe::slot(Slot::Received { round: 1, from: j }),
            )
            .plus(
                field,
                minus_one,
                &Recipe::slot(Slot::Received { round: 1, from: k }),
            );
        let mut traces = pure(t - 1);
        traces.push(last);
        let mut basis: Vec<Elem> = z.iter().map(|&zi| field.mul(nu[node], zi)).collect();
        let residual = field.sub(
            field.sub(field.mul(nu[node], delta), field.scale(x, nu[j])),
            field.scale(y, nu[k]),
        );
        basis.push(field.mul(residual, inv_d12));
        recovery.push((BBasis::new(field, basis)?, traces));
        coefficients.push(NamedCoords::new(
            format!("node{}_from_node{}", node + 1, j + 1),
            a,
        ));
        coefficients.push(NamedCoords::new(
            format!("node{}_from_node{}", node + 1, k + 1),
            b,
        ));
    }

    PlanParts {
        branch,
        erased: e.to_vec(),
        delta: Some(delta),
        gammas: vec![g1, g2],
        check_scalars: nu.to_vec(),
        bases: vec![full.clone(), full.clone(), full],
        coefficients,
        schedule,
        recovery,
    }
    .build(code)
}

/// Inverse of a 3x3 matrix over B, column by column.
fn invert3(field: &Tower, m: &[Vec<SubElem>]) -> Result<Vec<Vec<SubElem>>> {
    let mut cols = Vec::with_capacity(3);
    for c in 0..3 {
        let mut unit = vec![SubElem::ZERO; 3];
        unit[c] = SubElem::ONE;
        let col = solve_over_b(field, m, &unit)?
            .ok_or_else(|| Error::Internal("mixed-term matrix is singular".into()))?;
        cols.push(col);
    }
    Ok((0..3)
        .map(|r| (0..3).map(|c| cols[c][r]).collect())
        .collect())
}
