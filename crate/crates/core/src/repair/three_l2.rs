use crate::error::{Error, Result};
use crate::field::{Elem, SubElem, Tower};
use crate::linalg::{coords_in_basis, extend_basis, pair_kernel, triple_kernel, BBasis, BSubspace};
use crate::rs::RsCode;

use super::plan::{Exchange, NamedCoords, PlanParts, Recipe, Slot};
use super::{expect_branch, Branch, FailurePattern, RepairPlan};

/// The vector completing `z` inside `kernel`, scaled so Tr(v * d) = 1.
fn normalized_extension(field: &Tower, z: &BBasis, kernel: &BSubspace, d: Elem) -> Result<Elem> {
    let ext = extend_basis(field, z, z.rank() + 1, Some(kernel))?;
    let v = *ext.elements().last().expect("extension adds one vector");
    let tr = field.trace(field.mul(v, d));
    Ok(field.scale(field.b_inv(tr)?, v))
}

/// Three erasures with dim K_{1,2,3} = t-2, t > 3, repaired in three rounds.
///
/// Round 1: nodes 2 and 3 let node 1 cancel their interference, so node 1
/// recovers. Round 2: node 1 cancels its own interference at nodes 2 and 3.
/// Round 3: nodes 2 and 3 clear each other's remaining term.
pub fn plan_three_l2(code: &RsCode, pattern: &FailurePattern) -> Result<RepairPlan> {
    let branch = expect_branch(code, pattern, &[Branch::ThreeL2])?;
    let field = code.field();
    let t = field.t() as usize;
    let e = pattern.erased();
    let (a1, a2, a3) = (code.point(e[0]), code.point(e[1]), code.point(e[2]));
    let d12 = field.sub(a1, a2);
    let d23 = field.sub(a2, a3);
    let d31 = field.sub(a3, a1);

    let k123 = triple_kernel(field, a1, a2, a3)?;
    let z = k123.basis().clone();
    let u_ = normalized_extension(field, &z, &pair_kernel(field, a1, a2)?, d23)?;
    let v_ = normalized_extension(field, &z, &pair_kernel(field, a2, a3)?, d31)?;
    let w_ = normalized_extension(field, &z, &pair_kernel(field, a1, a3)?, d12)?;
    let with = |extra: [Elem; 2]| -> Result<BBasis> {
        let mut v = z.elements().to_vec();
        v.extend(extra);
        BBasis::new(field, v)
    };
    let u_full = with([u_, w_])?;
    let v_full = with([v_, u_])?;
    let w_full = with([w_, v_])?;

    let gamma2 = field
        .nonzero_elements()
        .find(|&g| {
            field
                .inv(field.mul(g, d31))
                .is_ok_and(|x| k123.contains(field, x))
        })
        .ok_or_else(|| Error::Internal("no gamma2 with 1/(gamma2 (a3-a1)) in K_{1,2,3}".into()))?;
    let gd12 = field.mul(gamma2, d12);
    let kappa = field
        .nonzero_elements()
        .find(|&k| {
            field.trace(k).is_zero() && field.div(k, gd12).is_ok_and(|x| k123.contains(field, x))
        })
        .ok_or_else(|| {
            Error::Internal("no kappa in K with kappa/(gamma2 (a1-a2)) in K_{1,2,3}".into())
        })?;
    let gamma1 = field.div(gamma2, kappa)?;
    let nu = [Elem::ONE, gamma1, gamma2];

    let tm2 = t - 2;
    let tm1 = t - 1;
    let o = Slot::Obtained;
    let r = |round, from| Slot::Received { round, from };
    let one = SubElem::ONE;
    let minus_one = field.b_neg(one);
    let pure: Vec<Recipe> = (0..tm2).map(|j| Recipe::slot(o(j))).collect();

    // round 1: Tr(c2/(a1-a2)) from node 2, Tr(c3/(a3-a1)) from node 3
    let c1_from2 = coords_in_basis(field, field.inv(field.mul(gamma1, d12))?, &z)?;
    let c1_from3 = coords_in_basis(field, field.inv(field.mul(gamma2, d31))?, &z)?;
    let mut schedule = vec![
        Exchange {
            round: 1,
            from: 1,
            to: 0,
            recipe: Recipe::obtained_combination(field, &c1_from2),
        },
        Exchange {
            round: 1,
            from: 2,
            to: 0,
            recipe: Recipe::obtained_combination(field, &c1_from3),
        },
    ];
    let mut rec0 = pure.clone();
    rec0.push(Recipe::slot(o(tm2)).plus(field, one, &Recipe::slot(r(1, 2))));
    rec0.push(Recipe::slot(o(tm1)).plus(field, minus_one, &Recipe::slot(r(1, 1))));

    // round 2: node 1 sends Tr(gamma1 c1/(a1-a2)) and Tr(gamma2 c1/(a3-a1))
    let to2 = coords_in_basis(field, field.div(gamma1, d12)?, &u_full)?;
    let to3 = coords_in_basis(field, field.div(gamma2, d31)?, &u_full)?;
    schedule.push(Exchange {
        round: 2,
        from: 0,
        to: 1,
        recipe: Recipe::combination(field, &to2, &rec0),
    });
    schedule.push(Exchange {
        round: 2,
        from: 0,
        to: 2,
        recipe: Recipe::combination(field, &to3, &rec0),
    });
    let mut p1 = pure.clone();
    p1.push(Recipe::slot(o(tm2)).plus(field, one, &Recipe::slot(r(2, 0))));
    let p2v = Recipe::slot(o(tm1)).plus(field, minus_one, &Recipe::slot(r(2, 0)));

    // round 3: Tr(gamma2 c2/(a2-a3)) to node 3, Tr(gamma1 c3/(a2-a3)) to node 2
    let mut zv = z.elements().to_vec();
    zv.push(v_);
    let p1_basis = BBasis::new(field, zv)?.scaled(field, gamma1)?;
    let c3_from2 = coords_in_basis(field, field.div(gamma2, d23)?, &p1_basis)?;
    let send_2to3 = Recipe::combination(field, &c3_from2, &p1);
    let gamma2_w = w_full.scaled(field, gamma2)?;
    let c2_from3 = coords_in_basis(field, field.div(gamma1, d23)?, &gamma2_w)?;
    let mut node3_parts: Vec<Recipe> = (0..=tm2).map(|j| Recipe::slot(o(j))).collect();
    node3_parts.push(p2v.clone());
    let send_3to2 = Recipe::combination(field, &c2_from3, &node3_parts);
    schedule.push(Exchange {
        round: 3,
        from: 1,
        to: 2,
        recipe: send_2to3.clone(),
    });
    schedule.push(Exchange {
        round: 3,
        from: 2,
        to: 1,
        recipe: send_3to2,
    });

    // node 2 also removes the part of node 3's message that echoes its own
    let mut rec1 = p1;
    rec1.push(
        Recipe::slot(o(tm1))
            .plus(field, minus_one, &Recipe::slot(r(3, 2)))
            .plus(field, field.b_neg(c2_from3[tm2]), &send_2to3),
    );
    let mut rec2 = pure;
    rec2.push(Recipe::slot(o(tm2)).plus(field, one, &Recipe::slot(r(3, 1))));
    rec2.push(p2v);

    let recovery = vec![
        (u_full.clone(), rec0),
        (v_full.scaled(field, gamma1)?, rec1),
        (gamma2_w, rec2),
    ];

    PlanParts {
        branch,
        erased: e.to_vec(),
        delta: None,
        gammas: vec![gamma1, gamma2],
        check_scalars: nu.to_vec(),
        bases: vec![u_full, v_full, w_full],
        coefficients: vec![
            NamedCoords::new("node1_from_node2", c1_from2),
            NamedCoords::new("node1_from_node3", c1_from3),
            NamedCoords::new("node1_to_node2", to2),
            NamedCoords::new("node1_to_node3", to3),
            NamedCoords::new("node2_to_node3", c3_from2),
            NamedCoords::new("node3_to_node2", c2_from3),
        ],
        schedule,
        recovery,
    }
    .build(code)
}
