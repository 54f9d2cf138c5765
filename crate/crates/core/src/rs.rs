//! Reed-Solomon codes over F with their generalized-RS dual multipliers.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Tower};

/// Polynomial coefficients, constant term first, length exactly k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message(pub Vec<Elem>);

/// Evaluations f(a_1), .., f(a_n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword(pub Vec<Elem>);

/// An [n, k] RS code with evaluation set A.
#[derive(Debug, Clone)]
pub struct RsCode {
    field: Arc<Tower>,
    points: Vec<Elem>,
    k: usize,
    lambdas: Vec<Elem>,
    feasible: bool,
}

impl RsCode {
    pub fn new(field: Arc<Tower>, points: Vec<Elem>, k: usize) -> Result<RsCode> {
        let n = points.len();
        if k == 0 || k >= n {
            return Err(Error::BadCodeDimensions { n, k });
        }
        if points.iter().collect::<HashSet<_>>().len() != n {
            return Err(Error::DuplicatePoints);
        }
        let lambdas = points
            .iter()
            .map(|&a| {
                let prod =
                    field.product(points.iter().filter(|&&b| b != a).map(|&b| field.sub(a, b)));
                field.inv(prod)
            })
            .collect::<Result<Vec<_>>>()?;
        let feasible = (n - k) as u64 >= repair_threshold(&field);
        Ok(RsCode {
            field,
            points,
            k,
            lambdas,
            feasible,
        })
    }

    /// Code whose evaluation set is the first `n` elements in enumeration order.
    pub fn with_prefix(field: Arc<Tower>, n: usize, k: usize) -> Result<RsCode> {
        let points: Vec<Elem> = field.elements().take(n).collect();
        if points.len() != n {
            return Err(Error::BadCodeDimensions { n, k });
        }
        Self::new(field, points, k)
    }

    pub fn field(&self) -> &Tower {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Tower> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Elem {
        self.points[i]
    }

    pub fn lambdas(&self) -> &[Elem] {
        &self.lambdas
    }

    pub fn lambda(&self, i: usize) -> Elem {
        self.lambdas[i]
    }

    /// n - k >= |B|^(t-1), required by every trace repair scheme.
    pub fn is_repair_feasible(&self) -> bool {
        self.feasible
    }

    pub fn require_feasible(&self) -> Result<()> {
        if self.feasible {
            Ok(())
        } else {
            Err(Error::Infeasible {
                required: repair_threshold(&self.field),
                have: self.n() - self.k,
            })
        }
    }

    pub fn encode(&self, msg: &Message) -> Result<Codeword> {
        if msg.0.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: msg.0.len(),
            });
        }
        Ok(Codeword(
            self.points
                .iter()
                .map(|&a| eval_poly(&self.field, &msg.0, a))
                .collect(),
        ))
    }

    /// The unique message of degree < k through the given k positions.
    pub fn lagrange_decode(&self, positions: &[usize], values: &[Elem]) -> Result<Message> {
        if positions.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: positions.len(),
            });
        }
        if values.len() != positions.len() {
            return Err(Error::LengthMismatch {
                expected: positions.len(),
                got: values.len(),
            });
        }
        if positions.iter().any(|&p| p >= self.n())
            || positions.iter().collect::<HashSet<_>>().len() != positions.len()
        {
            return Err(Error::BadPositions);
        }
        let xs: Vec<Elem> = positions.iter().map(|&p| self.points[p]).collect();
        Ok(Message(interpolate(&self.field, &xs, values)?))
    }

    /// Sum over A of lambda_a g(a) f(a); zero for every f of degree < k and
    /// g of degree < n - k.
    pub fn check_orthogonality(&self, f: &Message, g: &[Elem]) -> Result<(bool, Elem)> {
        if f.0.len() > self.k {
            return Err(Error::DegreeTooHigh(format!(
                "message has {} coefficients, code dimension is {}",
                f.0.len(),
                self.k
            )));
        }
        if g.len() > self.n() - self.k {
            return Err(Error::DegreeTooHigh(format!(
                "check polynomial has {} coefficients, at most n-k = {} allowed",
                g.len(),
                self.n() - self.k
            )));
        }
        let fld = &self.field;
        let sum =
            fld.sum(self.points.iter().zip(&self.lambdas).map(|(&a, &l)| {
                fld.mul(l, fld.mul(eval_poly(fld, g, a), eval_poly(fld, &f.0, a)))
            }));
        Ok((sum.is_zero(), sum))
    }
}

/// |B|^(t-1).
pub fn repair_threshold(field: &Tower) -> u64 {
    (field.base_order() as u64).pow(field.t() - 1)
}

/// Horner evaluation, coefficients constant term first.
pub fn eval_poly(field: &Tower, coeffs: &[Elem], x: Elem) -> Elem {
    coeffs
        .iter()
        .rev()
        .fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

/// Coefficients of the unique polynomial of degree < xs.len() through the
/// points, by expanding the Lagrange basis.
pub fn interpolate(field: &Tower, xs: &[Elem], ys: &[Elem]) -> Result<Vec<Elem>> {
    let m = xs.len();
    // full product prod (x - x_j)
    let mut full = vec![Elem::ONE];
    for &xj in xs {
        full = mul_linear(field, &full, xj);
    }
    let mut out = vec![Elem::ZERO; m];
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let basis = div_linear(field, &full, xi);
        let denom = field.product(
            xs.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| field.sub(xi, xj)),
        );
        let scale = field.div(yi, denom)?;
        for (o, &c) in out.iter_mut().zip(&basis) {
            *o = field.add(*o, field.mul(scale, c));
        }
    }
    Ok(out)
}

// p(x) * (x - r)
fn mul_linear(field: &Tower, p: &[Elem], r: Elem) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] = field.add(out[i + 1], c);
        out[i] = field.sub(out[i], field.mul(c, r));
    }
    out
}

// p(x) / (x - r), assuming r is a root
fn div_linear(field: &Tower, p: &[Elem], r: Elem) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; p.len() - 1];
    let mut carry = Elem::ZERO;
    for i in (1..p.len()).rev() {
        carry = field.add(p[i], field.mul(carry, r));
        out[i - 1] = carry;
    }
    out
}

/// Tr(u (x - c)) / (x - c) lifted to F; equals u at x = c.
pub fn trace_quotient_eval(field: &Tower, u: Elem, center: Elem, x: Elem) -> Elem {
    if x == center {
        return u;
    }
    let d = field.sub(x, center);
    let tr = field.embed(field.trace(field.mul(u, d)));
    field.div(tr, d).expect("x differs from center")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32, s: u32, t: u32) -> Arc<Tower> {
        Arc::new(Tower::new(p, s, t).unwrap())
    }

    #[test]
    fn full_gf4_multipliers_are_one() {
        let f = field(2, 1, 2);
        for k in 1..4 {
            let code = RsCode::with_prefix(f.clone(), 4, k).unwrap();
            assert!(code.lambdas().iter().all(|&l| l == Elem::ONE));
        }
    }

    #[test]
    fn constructor_errors() {
        let f = field(2, 1, 4);
        let one = Elem::ONE;
        assert_eq!(
            RsCode::new(f.clone(), vec![one, one, Elem::ZERO], 1).unwrap_err(),
            Error::DuplicatePoints
        );
        assert!(matches!(
            RsCode::with_prefix(f.clone(), 4, 4),
            Err(Error::BadCodeDimensions { .. })
        ));
        assert!(RsCode::with_prefix(f, 17, 4).is_err());
    }

    #[test]
    fn feasibility_flag_boundaries() {
        // |B|^(t-1) = 8 for GF(16)/GF(2)
        let f = field(2, 1, 4);
        assert!(RsCode::with_prefix(f.clone(), 16, 8)
            .unwrap()
            .is_repair_feasible());
        assert!(!RsCode::with_prefix(f, 16, 9).unwrap().is_repair_feasible());
        // t = 2, |B| = 4: n - k = 1 < 4
        let g = field(2, 2, 2);
        assert!(!RsCode::with_prefix(g, 16, 15).unwrap().is_repair_feasible());
    }

    #[test]
    fn encode_simple_messages() {
        let f = field(2, 1, 4);
        let code = RsCode::with_prefix(f.clone(), 16, 8).unwrap();
        let mut m = vec![Elem::ZERO; 8];
        assert!(code
            .encode(&Message(m.clone()))
            .unwrap()
            .0
            .iter()
            .all(|x| x.is_zero()));
        m[0] = Elem::ONE;
        assert!(code
            .encode(&Message(m.clone()))
            .unwrap()
            .0
            .iter()
            .all(|&x| x == Elem::ONE));
        m[0] = Elem::ZERO;
        m[1] = Elem::ONE;
        assert_eq!(code.encode(&Message(m)).unwrap().0, code.points());
        assert!(code.encode(&Message(vec![Elem::ONE])).is_err());
    }

    #[test]
    fn decode_constant_and_errors() {
        let f = field(3, 1, 2);
        let code = RsCode::with_prefix(f.clone(), 9, 3).unwrap();
        let c = f.elem(5).unwrap();
        let m = code.lagrange_decode(&[0, 4, 8], &[c, c, c]).unwrap();
        assert_eq!(m.0, vec![c, Elem::ZERO, Elem::ZERO]);
        assert_eq!(
            code.lagrange_decode(&[0, 0, 1], &[c, c, c]),
            Err(Error::BadPositions)
        );
    }

    #[test]
    fn trace_quotient_values() {
        let f = field(2, 1, 4);
        let u = f.elem(7).unwrap();
        let c = f.elem(3).unwrap();
        assert_eq!(trace_quotient_eval(&f, u, c, c), u);
        for x in f.elements() {
            assert!(trace_quotient_eval(&f, Elem::ZERO, c, x).is_zero());
        }
    }

    #[test]
    fn orthogonality_degree_checks() {
        let f = field(2, 1, 4);
        let code = RsCode::with_prefix(f, 16, 8).unwrap();
        let zero_msg = Message(vec![Elem::ZERO; 8]);
        assert_eq!(
            code.check_orthogonality(&zero_msg, &[Elem::ONE]).unwrap(),
            (true, Elem::ZERO)
        );
        assert!(code
            .check_orthogonality(&zero_msg, &[Elem::ONE; 9])
            .is_err());
    }
}
