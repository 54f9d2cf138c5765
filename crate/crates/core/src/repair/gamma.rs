use crate::error::{Error, Result};
use crate::field::{Elem, SubElem, Tower};

/// The two other replacement nodes, ascending.
pub(crate) fn others(node: usize) -> (usize, usize) {
    match node {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// One node's linear conditions on (x, y) in B^2: x is the coefficient
/// applied to the mixed term of the first other node, y to the second.
///
/// With check scalars nu = (1, gamma1, gamma2), node m and others (j, k):
///
/// ```text
///   x + Tr(nu_k/nu_j) y           = Tr(nu_m/nu_j)
///   Tr(nu_j/nu_k) x + y           = Tr(nu_m/nu_k)
///   Tr(nu_j/nu_m) x + Tr(nu_k/nu_m) y != 1
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaSystem {
    pub matrix: [[SubElem; 2]; 2],
    pub rhs: [SubElem; 2],
    pub inequality: [SubElem; 2],
}

impl GammaSystem {
    pub fn for_node(field: &Tower, gamma1: Elem, gamma2: Elem, node: usize) -> Result<GammaSystem> {
        if gamma1.is_zero() || gamma2.is_zero() {
            return Err(Error::GammaSystem(
                "gamma1 and gamma2 must be nonzero".into(),
            ));
        }
        if node > 2 {
            return Err(Error::GammaSystem(format!(
                "no node {node} in a three-erasure pattern"
            )));
        }
        let nu = [Elem::ONE, gamma1, gamma2];
        let (j, k) = others(node);
        let tr_ratio =
            |a: usize, b: usize| -> Result<SubElem> { Ok(field.trace(field.div(nu[a], nu[b])?)) };
        Ok(GammaSystem {
            matrix: [
                [SubElem::ONE, tr_ratio(k, j)?],
                [tr_ratio(j, k)?, SubElem::ONE],
            ],
            rhs: [tr_ratio(node, j)?, tr_ratio(node, k)?],
            inequality: [tr_ratio(j, node)?, tr_ratio(k, node)?],
        })
    }

    pub fn is_solution(&self, field: &Tower, x: SubElem, y: SubElem) -> bool {
        let row = |r: [SubElem; 2]| field.b_add(field.b_mul(r[0], x), field.b_mul(r[1], y));
        row(self.matrix[0]) == self.rhs[0]
            && row(self.matrix[1]) == self.rhs[1]
            && row(self.inequality) != SubElem::ONE
    }

    /// First admissible (x, y) in canonical (x, y) order. The first row
    /// fixes x given y, so scanning y covers every solution.
    pub fn solve(&self, field: &Tower) -> Option<(SubElem, SubElem)> {
        field
            .base_elements()
            .map(|y| {
                (
                    field.b_sub(self.rhs[0], field.b_mul(self.matrix[0][1], y)),
                    y,
                )
            })
            .filter(|&(x, y)| self.is_solution(field, x, y))
            .min()
    }
}

/// Admissible (x_i, y_i) for each of the three replacement nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaSystemSolution {
    pub pairs: [(SubElem, SubElem); 3],
}

pub fn solve_gamma_system(
    field: &Tower,
    gamma1: Elem,
    gamma2: Elem,
) -> Result<GammaSystemSolution> {
    let mut pairs = [(SubElem::ZERO, SubElem::ZERO); 3];
    for (node, pair) in pairs.iter_mut().enumerate() {
        *pair = GammaSystem::for_node(field, gamma1, gamma2, node)?
            .solve(field)
            .ok_or_else(|| {
                Error::GammaSystem(format!(
                    "node {} has no solution for gamma1 = {}, gamma2 = {}",
                    node + 1,
                    field.format(gamma1),
                    field.format(gamma2)
                ))
            })?;
    }
    Ok(GammaSystemSolution { pairs })
}
