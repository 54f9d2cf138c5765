//! Exact arithmetic in a tower GF(p) <= B = GF(p^s) <= F = GF(p^(s*t)).
//!
//! Elements of F are stored by their canonical index: the coordinates
//! (c_0, .., c_{t-1}) of the element over B in the power basis of the
//! extension modulus, each c_i itself a base-p digit vector over GF(p),
//! read as one base-p integer with the constant term least significant.
//! With this encoding B is exactly the set of indices below |B|, so the
//! subfield test and the embedding B -> F are free.
//!
//! Moduli are canonical: the lexicographically smallest monic irreducible
//! polynomial of the required degree, so two towers with the same
//! (p, s, t) are identical element by element.

mod poly;
mod spec;

use std::fmt;

use crate::error::{Error, Result};
use poly::{CoeffField, PrimeField, QuotientField};

pub use spec::parse_field_spec;

/// Default limit on |F| for anything that enumerates the field.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 20;

/// An element of the extension field F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

/// An element of the subfield B (a subsymbol).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubElem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Position of the element in the canonical enumeration.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl SubElem {
    pub const ZERO: SubElem = SubElem(0);
    pub const ONE: SubElem = SubElem(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl From<SubElem> for Elem {
    fn from(b: SubElem) -> Elem {
        Elem(b.0)
    }
}

/// The field pair B <= F with [F:B] = t, plus lookup tables.
///
/// Immutable after construction.
pub struct Tower {
    p: u32,
    s: u32,
    t: u32,
    base_modulus: Vec<u32>,
    ext_modulus: Vec<u32>,
    base_order: u32,
    order: u32,
    // exp has length 2(q-1) so products never need a modular reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tower")
            .field("spec", &self.spec())
            .field("base_modulus", &self.base_modulus)
            .field("ext_modulus", &self.ext_modulus)
            .finish()
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_with<C: CoeffField>(f: &C, mut base: u32, mut e: u64) -> u32 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = f.mul(acc, base);
        }
        base = f.mul(base, base);
        e >>= 1;
    }
    acc
}

impl Tower {
    /// Builds GF(p^(s*t)) over GF(p^s) with the default size cap.
    pub fn new(p: u32, s: u32, t: u32) -> Result<Tower> {
        Self::with_cap(p, s, t, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(p: u32, s: u32, t: u32, cap: u64) -> Result<Tower> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::ZeroBaseDegree);
        }
        if t < 2 {
            return Err(Error::DegreeTooSmall(t));
        }
        let size = (p as u64)
            .checked_pow(s * t)
            .filter(|&q| q <= cap && q <= u32::MAX as u64)
            .ok_or(Error::FieldTooLarge {
                size: (p as u64).saturating_pow(s * t),
                cap,
            })?;

        let prime = PrimeField { p };
        let base_modulus = poly::first_irreducible(&prime, s as usize);
        let base = QuotientField {
            coeffs: &prime,
            modulus: &base_modulus,
        };
        let ext_modulus = poly::first_irreducible(&base, t as usize);
        let ext = QuotientField {
            coeffs: &base,
            modulus: &ext_modulus,
        };

        let q = size as u32;
        let group = size - 1;
        let factors = prime_factors(group);
        let generator = (2..q)
            .find(|&g| factors.iter().all(|&r| pow_with(&ext, g, group / r) != 1))
            .ok_or_else(|| Error::Internal("multiplicative group has no generator".into()))?;

        let mut exp = Vec::with_capacity(2 * group as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..group as u32 {
            exp.push(x);
            log[x as usize] = i;
            x = ext.mul(x, generator);
        }
        if x != 1 {
            return Err(Error::Internal("generator order mismatch".into()));
        }
        exp.extend_from_within(..);

        let mut tower = Tower {
            p,
            s,
            t,
            base_modulus,
            ext_modulus,
            base_order: p.pow(s),
            order: q,
            exp,
            log,
            trace: Vec::new(),
        };
        tower.trace = tower.build_trace_table()?;
        Ok(tower)
    }

    fn build_trace_table(&self) -> Result<Vec<u32>> {
        let qb = self.base_order as u64;
        let mut table = Vec::with_capacity(self.order as usize);
        for x in self.elements() {
            let mut acc = Elem::ZERO;
            let mut power = 1u64;
            for _ in 0..self.t {
                acc = self.add(acc, self.pow(x, power));
                power *= qb;
            }
            if acc.0 >= self.base_order {
                return Err(Error::Internal(format!(
                    "trace of element {} left the subfield",
                    x.0
                )));
            }
            table.push(acc.0);
        }
        Ok(table)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Relative degree [F:B].
    pub fn t(&self) -> u32 {
        self.t
    }

    /// |F|.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// |B|.
    pub fn base_order(&self) -> u32 {
        self.base_order
    }

    /// Monic modulus of B over GF(p), constant term first.
    pub fn base_modulus(&self) -> &[u32] {
        &self.base_modulus
    }

    /// Monic modulus of F over B, constant term first, as B indices.
    pub fn ext_modulus(&self) -> Vec<SubElem> {
        self.ext_modulus.iter().map(|&c| SubElem(c)).collect()
    }

    pub fn elem(&self, index: usize) -> Option<Elem> {
        (index < self.order as usize).then_some(Elem(index as u32))
    }

    pub fn sub_elem(&self, index: usize) -> Option<SubElem> {
        (index < self.base_order as usize).then_some(SubElem(index as u32))
    }

    /// All of F in canonical order: index 0 is zero, index 1 is one.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        (1..self.order).map(Elem)
    }

    /// All of B in canonical order.
    pub fn base_elements(&self) -> impl Iterator<Item = SubElem> {
        (0..self.base_order).map(SubElem)
    }

    /// The element of the prime field with residue `n mod p`.
    pub fn from_int(&self, n: u64) -> Elem {
        Elem((n % self.p as u64) as u32)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let p = self.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let group = self.order - 1;
        Ok(Elem(
            self.exp[((group - self.log[a.0 as usize]) % group) as usize],
        ))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let group = (self.order - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % group)) % group;
        Elem(self.exp[l as usize])
    }

    /// Frobenius relative to B: x -> x^|B|.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.base_order as u64)
    }

    /// Tr_{F/B}(x) = x + x^|B| + .. + x^(|B|^(t-1)).
    pub fn trace(&self, a: Elem) -> SubElem {
        SubElem(self.trace[a.0 as usize])
    }

    /// Product computed by polynomial arithmetic, bypassing the log tables.
    pub fn mul_reference(&self, a: Elem, b: Elem) -> Elem {
        let prime = PrimeField { p: self.p };
        let base = QuotientField {
            coeffs: &prime,
            modulus: &self.base_modulus,
        };
        let ext = QuotientField {
            coeffs: &base,
            modulus: &self.ext_modulus,
        };
        Elem(ext.mul(a.0, b.0))
    }

    pub fn is_in_base(&self, a: Elem) -> bool {
        a.0 < self.base_order
    }

    pub fn to_base(&self, a: Elem) -> Option<SubElem> {
        self.is_in_base(a).then_some(SubElem(a.0))
    }

    pub fn embed(&self, b: SubElem) -> Elem {
        Elem(b.0)
    }

    pub fn b_add(&self, a: SubElem, b: SubElem) -> SubElem {
        SubElem(self.add(a.into(), b.into()).0)
    }

    pub fn b_sub(&self, a: SubElem, b: SubElem) -> SubElem {
        SubElem(self.sub(a.into(), b.into()).0)
    }

    pub fn b_neg(&self, a: SubElem) -> SubElem {
        SubElem(self.neg(a.into()).0)
    }

    pub fn b_mul(&self, a: SubElem, b: SubElem) -> SubElem {
        SubElem(self.mul(a.into(), b.into()).0)
    }

    pub fn b_inv(&self, a: SubElem) -> Result<SubElem> {
        Ok(SubElem(self.inv(a.into())?.0))
    }

    /// c * x for c in B.
    pub fn scale(&self, c: SubElem, x: Elem) -> Elem {
        self.mul(c.into(), x)
    }

    /// Coordinates of `a` over B in the power basis (1, x, .., x^(t-1)).
    pub fn coords(&self, a: Elem) -> Vec<SubElem> {
        let qb = self.base_order;
        let mut v = a.0;
        (0..self.t)
            .map(|_| {
                let c = v % qb;
                v /= qb;
                SubElem(c)
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[SubElem]) -> Result<Elem> {
        if coords.len() != self.t as usize {
            return Err(Error::LengthMismatch {
                expected: self.t as usize,
                got: coords.len(),
            });
        }
        let qb = self.base_order;
        Ok(Elem(coords.iter().rev().fold(0, |acc, c| acc * qb + c.0)))
    }

    /// The power basis element x^i of F over B.
    pub fn power_basis(&self, i: u32) -> Elem {
        Elem(self.base_order.pow(i))
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ONE, |acc, x| self.mul(acc, x))
    }

    pub fn b_sum<I: IntoIterator<Item = SubElem>>(&self, it: I) -> SubElem {
        it.into_iter()
            .fold(SubElem::ZERO, |acc, x| self.b_add(acc, x))
    }

    /// Canonical spec string, e.g. "gf(2^4)/gf(2)".
    pub fn spec(&self) -> String {
        let base = if self.s == 1 {
            format!("gf({})", self.p)
        } else {
            format!("gf({}^{})", self.p, self.s)
        };
        format!("gf({}^{})/{}", self.p, self.s * self.t, base)
    }

    fn digit_string(&self, mut v: u32, digits: u32) -> String {
        let mut ds: Vec<u32> = (0..digits)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect();
        ds.reverse();
        if self.p <= 36 {
            ds.iter()
                .map(|&d| char::from_digit(d, 36).unwrap())
                .collect()
        } else {
            ds.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    fn parse_digits(&self, s: &str, digits: u32) -> Option<u32> {
        let ds: Vec<u32> = if self.p <= 36 {
            s.chars().map(|c| c.to_digit(36)).collect::<Option<_>>()?
        } else {
            s.split('.')
                .map(|d| d.parse().ok())
                .collect::<Option<_>>()?
        };
        if ds.len() != digits as usize || ds.iter().any(|&d| d >= self.p) {
            return None;
        }
        Some(ds.iter().fold(0, |acc, &d| acc * self.p + d))
    }

    /// Base-p digit string, most significant coordinate first.
    pub fn format(&self, a: Elem) -> String {
        self.digit_string(a.0, self.s * self.t)
    }

    pub fn format_sub(&self, b: SubElem) -> String {
        self.digit_string(b.0, self.s)
    }

    pub fn parse(&self, s: &str) -> Result<Elem> {
        self.parse_digits(s.trim(), self.s * self.t)
            .map(Elem)
            .ok_or_else(|| Error::InvalidElement(s.to_string()))
    }

    pub fn parse_sub(&self, s: &str) -> Result<SubElem> {
        self.parse_digits(s.trim(), self.s)
            .map(SubElem)
            .ok_or_else(|| Error::InvalidElement(s.to_string()))
    }

    fn poly_string(coeffs: &[u32], fmt_coeff: impl Fn(u32) -> String) -> String {
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let term = match (c, i) {
                (1, 0) => "1".to_string(),
                (1, _) => var,
                (_, 0) => fmt_coeff(c),
                _ => format!("{}{}", fmt_coeff(c), var),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }

    /// Human-readable base modulus, e.g. "x^2 + x + 1".
    pub fn base_modulus_string(&self) -> String {
        Self::poly_string(&self.base_modulus, |c| c.to_string())
    }

    /// Human-readable extension modulus; non-prime-field coefficients are
    /// written as bracketed digit strings.
    pub fn ext_modulus_string(&self) -> String {
        Self::poly_string(&self.ext_modulus, |c| {
            if self.s == 1 {
                c.to_string()
            } else {
                format!("[{}]", self.format_sub(SubElem(c)))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Tower::new(4, 1, 2).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Tower::new(2, 1, 1).unwrap_err(), Error::DegreeTooSmall(1));
        assert_eq!(Tower::new(2, 0, 2).unwrap_err(), Error::ZeroBaseDegree);
        assert!(matches!(
            Tower::new(2, 1, 21),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(
            Tower::with_cap(2, 1, 4, 8),
            Err(Error::FieldTooLarge { size: 16, cap: 8 })
        ));
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(
            Tower::new(2, 1, 2).unwrap().ext_modulus_string(),
            "x^2 + x + 1"
        );
        assert_eq!(Tower::new(3, 1, 2).unwrap().ext_modulus_string(), "x^2 + 1");
        assert_eq!(
            Tower::new(2, 1, 4).unwrap().ext_modulus_string(),
            "x^4 + x + 1"
        );
        assert_eq!(Tower::new(5, 1, 2).unwrap().ext_modulus_string(), "x^2 + 2");
        let gf64 = Tower::new(2, 2, 3).unwrap();
        assert_eq!(gf64.base_modulus_string(), "x^2 + x + 1");
        assert_eq!(gf64.ext_modulus()[3], SubElem::ONE);
    }

    #[test]
    fn gf4_arithmetic() {
        let f = Tower::new(2, 1, 2).unwrap();
        let w = f.elem(2).unwrap();
        assert_eq!(f.mul(w, w), f.elem(3).unwrap());
        assert_eq!(f.inv(Elem::ZERO), Err(Error::ZeroInverse));
        assert_eq!(f.trace(w), SubElem::ONE);
    }

    #[test]
    fn gf9_trace_of_two_is_one() {
        let f = Tower::new(3, 1, 2).unwrap();
        assert_eq!(f.trace(f.from_int(2)), SubElem::ONE);
        assert_eq!(f.trace(Elem::ZERO), SubElem::ZERO);
        // index 3 is the adjoined root x
        assert_eq!(f.elem(3), Some(f.power_basis(1)));
    }

    #[test]
    fn element_strings_round_trip() {
        let f = Tower::new(2, 2, 3).unwrap();
        for x in f.elements() {
            let s = f.format(x);
            assert_eq!(s.len(), 6);
            assert_eq!(f.parse(&s).unwrap(), x);
        }
        assert_eq!(f.format(f.elem(5).unwrap()), "000101");
        assert!(f.parse("0002").is_err());
        let g = Tower::new(3, 1, 2).unwrap();
        assert_eq!(g.format(g.elem(5).unwrap()), "12");
        assert_eq!(g.format_sub(SubElem(2)), "2");
    }

    #[test]
    fn coordinates_round_trip() {
        let f = Tower::new(5, 1, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.from_coords(&f.coords(x)).unwrap(), x);
        }
    }
}
