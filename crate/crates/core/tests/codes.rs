use std::sync::Arc;

use coop_repair::rs::{
    eval_poly, interpolate, repair_threshold, trace_quotient_eval, Message, RsCode,
};
use coop_repair::simnet::{combinations, seeded_messages};
use coop_repair::{Elem, Tower};

fn tower(p: u32, s: u32, t: u32) -> Arc<Tower> {
    Arc::new(Tower::new(p, s, t).unwrap())
}

/// Degree of the interpolant of x -> Tr(u (x - c)) / (x - c) over all of F.
fn trace_quotient_degree(f: &Tower, u: Elem, c: Elem) -> Option<usize> {
    let xs: Vec<Elem> = f.elements().collect();
    let ys: Vec<Elem> = xs
        .iter()
        .map(|&x| trace_quotient_eval(f, u, c, x))
        .collect();
    let coeffs = interpolate(f, &xs, &ys).unwrap();
    coeffs.iter().rposition(|x| !x.is_zero())
}

#[test]
fn trace_quotient_has_degree_b_pow_t_minus_1_minus_1() {
    for f in [
        tower(2, 1, 4),
        tower(3, 1, 2),
        tower(2, 2, 2),
        tower(2, 1, 3),
        tower(5, 1, 2),
    ] {
        let want = repair_threshold(&f) as usize - 1;
        for u in f.nonzero_elements().step_by(3) {
            for c in f.elements().step_by(5) {
                assert_eq!(trace_quotient_degree(&f, u, c), Some(want), "{}", f.spec());
            }
        }
    }
}

#[test]
fn interpolation_inverts_evaluation() {
    let f = tower(2, 1, 4);
    let code = RsCode::with_prefix(f.clone(), 16, 8).unwrap();
    for msg in seeded_messages(&code, 21, 20) {
        let cw = code.encode(&msg).unwrap();
        for pos in [
            vec![0, 1, 2, 3, 4, 5, 6, 7],
            vec![15, 3, 9, 1, 12, 6, 10, 8],
        ] {
            let vals: Vec<Elem> = pos.iter().map(|&p| cw.0[p]).collect();
            assert_eq!(code.lagrange_decode(&pos, &vals).unwrap(), msg);
        }
    }
}

#[test]
fn multipliers_match_product_formula() {
    let f = tower(3, 1, 2);
    let points: Vec<Elem> = [8, 2, 5, 7, 1]
        .iter()
        .map(|&i| f.elem(i).unwrap())
        .collect();
    let code = RsCode::new(f.clone(), points.clone(), 2).unwrap();
    for (i, &a) in points.iter().enumerate() {
        let mut prod = Elem::ONE;
        for &b in points.iter().filter(|&&b| b != a) {
            prod = f.mul(prod, f.sub(a, b));
        }
        assert_eq!(f.mul(prod, code.lambda(i)), Elem::ONE);
    }
}

#[test]
fn dual_orthogonality_fails_for_too_high_degree() {
    // g = prod_{j<n-1}(x - a_j) has degree n-1 >= n-k; paired with f = 1
    // only one term survives, so the sum is nonzero
    let f = tower(2, 1, 3);
    let code = RsCode::with_prefix(f.clone(), 8, 4).unwrap();
    let mut g = vec![Elem::ONE];
    for &a in &code.points()[..7] {
        let mut next = vec![Elem::ZERO; g.len() + 1];
        for (i, &c) in g.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], c);
            next[i] = f.sub(next[i], f.mul(c, a));
        }
        g = next;
    }
    let sum = code
        .points()
        .iter()
        .zip(code.lambdas())
        .fold(Elem::ZERO, |acc, (&a, &l)| {
            f.add(acc, f.mul(l, eval_poly(&f, &g, a)))
        });
    assert!(!sum.is_zero());
    assert!(code
        .check_orthogonality(&Message(vec![Elem::ONE]), &g)
        .is_err());
}

#[test]
fn every_k_subset_decodes_small_code() {
    let f = tower(2, 1, 3);
    let code = RsCode::with_prefix(f.clone(), 8, 3).unwrap();
    let msg = seeded_messages(&code, 4, 1).remove(0);
    let cw = code.encode(&msg).unwrap();
    for pos in combinations(8, 3) {
        let vals: Vec<Elem> = pos.iter().map(|&p| cw.0[p]).collect();
        assert_eq!(code.lagrange_decode(&pos, &vals).unwrap(), msg);
    }
}
