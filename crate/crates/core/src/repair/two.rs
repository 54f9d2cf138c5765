use crate::error::Result;
use crate::field::Elem;
use crate::linalg::{coords_in_basis, pair_kernel, BBasis};
use crate::rs::RsCode;

use super::plan::{Exchange, NamedCoords, PlanParts, Recipe, Slot};
use super::{choose_delta, choose_gamma_two, expect_branch, Branch, FailurePattern, RepairPlan};

/// Two erasures in one exchange round.
///
/// Both nodes use the basis U' = (basis of K_{1,2}, delta/(a1-a2)); node 2's
/// check polynomials carry an extra factor gamma in K. Node 1 forwards
/// Tr(gamma c1/(a1-a2)), a combination of its pure traces, and node 2 sends
/// its obtained terms combined with the coordinates of 1/(a1-a2) in gamma*U'.
pub fn plan_two(code: &RsCode, pattern: &FailurePattern) -> Result<RepairPlan> {
    let branch = expect_branch(code, pattern, &[Branch::Two])?;
    let field = code.field();
    let t = field.t() as usize;
    let e = pattern.erased();
    let d12 = field.sub(code.point(e[0]), code.point(e[1]));
    let inv_d12 = field.inv(d12)?;

    let k12 = pair_kernel(field, code.point(e[0]), code.point(e[1]))?;
    let delta = choose_delta(field);
    let gamma = choose_gamma_two(field);

    let mut u = k12.basis().elements().to_vec();
    u.push(field.mul(delta, inv_d12));
    let u_full = BBasis::new(field, u.clone())?;
    let gamma_u = u_full.scaled(field, gamma)?;

    // 1/(a1-a2) = sum a_i gamma u_i
    let a = coords_in_basis(field, inv_d12, &gamma_u)?;
    // gamma/(a1-a2) lies in K_{1,2}
    let send1 = coords_in_basis(field, field.mul(gamma, inv_d12), k12.basis())?;
    let a_t = a[t - 1];

    let schedule = vec![
        Exchange {
            round: 1,
            from: 0,
            to: 1,
            recipe: Recipe::obtained_combination(field, &send1),
        },
        Exchange {
            round: 1,
            from: 1,
            to: 0,
            recipe: Recipe::obtained_combination(field, &a),
        },
    ];

    let pure =
        |n: usize| -> Vec<Recipe> { (0..n).map(|j| Recipe::slot(Slot::Obtained(j))).collect() };
    let minus_one = field.b_neg(crate::field::SubElem::ONE);
    let last = |from: usize| {
        Recipe::slot(Slot::Obtained(t - 1)).plus(
            field,
            minus_one,
            &Recipe::slot(Slot::Received { round: 1, from }),
        )
    };

    // node 1 ends with Tr((delta - a_t gamma)/(a1-a2) c1) as its t-th trace
    let mut basis1 = u[..t - 1].to_vec();
    basis1.push(field.mul(field.sub(delta, field.scale(a_t, gamma)), inv_d12));
    let basis1 = BBasis::new(field, basis1)?;
    let mut traces1 = pure(t - 1);
    traces1.push(last(1));
    let mut traces2 = pure(t - 1);
    traces2.push(last(0));

    PlanParts {
        branch,
        erased: e.to_vec(),
        delta: Some(delta),
        gammas: vec![gamma],
        check_scalars: vec![Elem::ONE, gamma],
        bases: vec![u_full.clone(), u_full],
        coefficients: vec![
            NamedCoords::new("a", a),
            NamedCoords::new("node1_send", send1),
        ],
        schedule,
        recovery: vec![(basis1, traces1), (gamma_u, traces2)],
    }
    .build(code)
}
