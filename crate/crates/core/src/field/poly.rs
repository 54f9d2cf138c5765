//! Schoolbook polynomial arithmetic used while building a tower.
//!
//! Only construction-time code lives here: modulus search, irreducibility
//! testing and the reference multiplication that seeds the log tables.
//! Polynomials are coefficient vectors, constant term first; coefficients
//! are canonical element indices of the coefficient field.

/// A small coefficient field addressed by canonical index.
pub(crate) trait CoeffField {
    fn order(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
}

/// GF(p) with residues as indices.
pub(crate) struct PrimeField {
    pub p: u32,
}

impl CoeffField for PrimeField {
    fn order(&self) -> u32 {
        self.p
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }
    fn neg(&self, a: u32) -> u32 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
}

/// GF(p)[x] / (modulus): element index is the base-p integer of its
/// coefficient vector, constant term least significant.
pub(crate) struct QuotientField<'a, C: CoeffField> {
    pub coeffs: &'a C,
    pub modulus: &'a [u32],
}

impl<C: CoeffField> QuotientField<'_, C> {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn unpack(&self, mut a: u32) -> Vec<u32> {
        let q = self.coeffs.order();
        (0..self.degree())
            .map(|_| {
                let d = a % q;
                a /= q;
                d
            })
            .collect()
    }

    pub fn pack(&self, digits: &[u32]) -> u32 {
        let q = self.coeffs.order();
        digits.iter().rev().fold(0, |acc, &d| acc * q + d)
    }
}

impl<C: CoeffField> CoeffField for QuotientField<'_, C> {
    fn order(&self) -> u32 {
        self.coeffs.order().pow(self.degree() as u32)
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (self.unpack(a), self.unpack(b));
        let sum: Vec<u32> = a
            .iter()
            .zip(&b)
            .map(|(&x, &y)| self.coeffs.add(x, y))
            .collect();
        self.pack(&sum)
    }
    fn neg(&self, a: u32) -> u32 {
        let a: Vec<u32> = self
            .unpack(a)
            .into_iter()
            .map(|x| self.coeffs.neg(x))
            .collect();
        self.pack(&a)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        let prod = mul(self.coeffs, &self.unpack(a), &self.unpack(b));
        let mut r = rem_monic(self.coeffs, &prod, self.modulus);
        r.resize(self.degree(), 0);
        self.pack(&r)
    }
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn mul<C: CoeffField>(f: &C, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a monic polynomial `m`.
pub(crate) fn rem_monic<C: CoeffField>(f: &C, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = trim(a.to_vec());
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(lead, c));
        }
        r = trim(r);
    }
    r
}

/// The `idx`-th monic polynomial of degree `deg`, with (c_{deg-1}, .., c_0)
/// read as a base-q integer.
pub(crate) fn monic_from_index(q: u32, deg: usize, mut idx: u64) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        coeffs.push((idx % q as u64) as u32);
        idx /= q as u64;
    }
    coeffs.push(1);
    coeffs
}

/// Exhaustive factor test: no monic divisor of degree 1..=deg/2.
pub(crate) fn is_irreducible<C: CoeffField>(f: &C, m: &[u32]) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    let q = f.order() as u64;
    for d in 1..=deg / 2 {
        for idx in 0..q.pow(d as u32) {
            let divisor = monic_from_index(f.order(), d, idx);
            if rem_monic(f, m, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `deg`,
/// comparing (c_{deg-1}, .., c_0) under the canonical element order.
pub(crate) fn first_irreducible<C: CoeffField>(f: &C, deg: usize) -> Vec<u32> {
    let q = f.order() as u64;
    (0..q.pow(deg as u32))
        .map(|idx| monic_from_index(f.order(), deg, idx))
        .find(|m| is_irreducible(f, m))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_irreducibles_match_known_tables() {
        let f2 = PrimeField { p: 2 };
        assert_eq!(first_irreducible(&f2, 2), vec![1, 1, 1]);
        assert_eq!(first_irreducible(&f2, 3), vec![1, 1, 0, 1]);
        assert_eq!(first_irreducible(&f2, 4), vec![1, 1, 0, 0, 1]);
        assert!(!is_irreducible(&f2, &[1, 0, 1]));
    }

    #[test]
    fn quotient_field_multiplies_mod_modulus() {
        let f2 = PrimeField { p: 2 };
        let m = [1, 1, 1];
        let gf4 = QuotientField {
            coeffs: &f2,
            modulus: &m,
        };
        // w * w = w + 1
        assert_eq!(gf4.mul(2, 2), 3);
        assert_eq!(gf4.mul(3, 2), 1);
        assert_eq!(gf4.order(), 4);
    }

    #[test]
    fn remainder_by_monic() {
        let f3 = PrimeField { p: 3 };
        // (x^2 + 1) mod (x + 1) = 2
        assert_eq!(rem_monic(&f3, &[1, 0, 1], &[1, 1]), vec![2]);
    }
}
