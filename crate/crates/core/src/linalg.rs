//! B-linear algebra inside F.
//!
//! F is a t-dimensional vector space over B; an element is identified with
//! its coordinate vector in the power basis. Every subspace built here has
//! a canonical basis obtained by a greedy scan of F in enumeration order,
//! so bases (and everything derived from them) are reproducible.

use crate::error::{Error, Result};
use crate::field::{Elem, SubElem, Tower};

/// Coordinates of an element in some ordered basis.
pub type Coordinates = Vec<SubElem>;

/// Incremental row-echelon form over B, used for rank tests.
pub(crate) struct Echelon<'a> {
    field: &'a Tower,
    // (pivot column, row scaled so the pivot is one)
    rows: Vec<(usize, Vec<SubElem>)>,
}

impl<'a> Echelon<'a> {
    pub fn new(field: &'a Tower) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: Vec<SubElem>) -> Vec<SubElem> {
        let f = self.field;
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if !c.is_zero() {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.b_sub(*x, f.b_mul(c, r));
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent of the rows so far.
    pub fn insert(&mut self, v: Vec<SubElem>) -> bool {
        let f = self.field;
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = f.b_inv(v[pivot]).expect("pivot is nonzero");
        let row = v.into_iter().map(|x| f.b_mul(inv, x)).collect();
        self.rows.push((pivot, row));
        true
    }
}

/// Reduced row-echelon form with first-nonzero pivoting. Returns the pivot
/// column of each nonzero row.
fn rref(field: &Tower, m: &mut [Vec<SubElem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(found) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, found);
        let inv = field.b_inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = field.b_mul(inv, *x);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c];
                for j in 0..m[i].len() {
                    let v = field.b_mul(factor, m[r][j]);
                    m[i][j] = field.b_sub(m[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

fn check_rect(a: &[Vec<SubElem>]) -> Result<usize> {
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != cols) {
        return Err(Error::DimensionMismatch("ragged matrix".into()));
    }
    Ok(cols)
}

/// Solves `a x = b` over B. `Ok(None)` means the system is inconsistent;
/// free variables are set to zero.
pub fn solve_over_b(
    field: &Tower,
    a: &[Vec<SubElem>],
    b: &[SubElem],
) -> Result<Option<Vec<SubElem>>> {
    let cols = check_rect(a)?;
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but {} right-hand sides",
            a.len(),
            b.len()
        )));
    }
    let mut m: Vec<Vec<SubElem>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let pivots = rref(field, &mut m, cols);
    if m[pivots.len()..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![SubElem::ZERO; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols];
    }
    Ok(Some(x))
}

/// Basis of {x : a x = 0}, one vector per free column in increasing order.
pub fn null_space(field: &Tower, a: &[Vec<SubElem>]) -> Result<Vec<Vec<SubElem>>> {
    let cols = check_rect(a)?;
    let mut m = a.to_vec();
    let pivots = rref(field, &mut m, cols);
    let free = (0..cols).filter(|c| !pivots.contains(c));
    Ok(free
        .map(|fc| {
            let mut v = vec![SubElem::ZERO; cols];
            v[fc] = SubElem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.b_neg(m[r][fc]);
            }
            v
        })
        .collect())
}

/// Rank over B of a set of field elements.
pub fn rank_of(field: &Tower, elements: &[Elem]) -> usize {
    let mut ech = Echelon::new(field);
    for &x in elements {
        ech.insert(field.coords(x));
    }
    ech.rank()
}

/// An ordered, B-linearly independent list of elements of F.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BBasis {
    elements: Vec<Elem>,
}

impl BBasis {
    pub fn new(field: &Tower, elements: Vec<Elem>) -> Result<BBasis> {
        if rank_of(field, &elements) != elements.len() {
            return Err(Error::DependentBasis);
        }
        Ok(BBasis { elements })
    }

    pub fn empty() -> BBasis {
        BBasis {
            elements: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Elem> {
        self.elements
    }

    pub fn is_full(&self, field: &Tower) -> bool {
        self.rank() == field.t() as usize
    }

    /// Every element scaled by the same nonzero factor.
    pub fn scaled(&self, field: &Tower, factor: Elem) -> Result<BBasis> {
        if factor.is_zero() {
            return Err(Error::DependentBasis);
        }
        Ok(BBasis {
            elements: self
                .elements
                .iter()
                .map(|&e| field.mul(factor, e))
                .collect(),
        })
    }
}

/// Unique coordinates of `x` in `basis`.
pub fn coords_in_basis(field: &Tower, x: Elem, basis: &BBasis) -> Result<Coordinates> {
    let t = field.t() as usize;
    let columns: Vec<Vec<SubElem>> = basis.elements.iter().map(|&b| field.coords(b)).collect();
    let a: Vec<Vec<SubElem>> = (0..t)
        .map(|i| columns.iter().map(|col| col[i]).collect())
        .collect();
    if basis.rank() == 0 {
        return if x.is_zero() {
            Ok(Vec::new())
        } else {
            Err(Error::NotInSpan)
        };
    }
    solve_over_b(field, &a, &field.coords(x))?.ok_or(Error::NotInSpan)
}

/// Sum of `coords[i] * basis[i]`.
pub fn combine(field: &Tower, coords: &[SubElem], basis: &[Elem]) -> Elem {
    field.sum(coords.iter().zip(basis).map(|(&c, &b)| field.scale(c, b)))
}

/// A B-subspace of F, carried by a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSubspace {
    basis: BBasis,
}

impl BSubspace {
    pub fn from_basis(basis: BBasis) -> BSubspace {
        BSubspace { basis }
    }

    pub fn zero() -> BSubspace {
        BSubspace {
            basis: BBasis::empty(),
        }
    }

    /// Span of arbitrary generators, keeping the first independent ones.
    pub fn span(field: &Tower, generators: &[Elem]) -> BSubspace {
        let mut ech = Echelon::new(field);
        let elements = generators
            .iter()
            .copied()
            .filter(|&g| ech.insert(field.coords(g)))
            .collect();
        BSubspace {
            basis: BBasis { elements },
        }
    }

    /// Greedy scan of F in enumeration order, keeping every element that
    /// satisfies `member` and raises the rank; stops once `dim` is reached.
    /// `member` must describe a subspace.
    pub fn scan(field: &Tower, dim: Option<usize>, member: impl Fn(Elem) -> bool) -> BSubspace {
        let mut ech = Echelon::new(field);
        let mut elements = Vec::new();
        for x in field.nonzero_elements() {
            if dim == Some(elements.len()) {
                break;
            }
            if member(x) && ech.insert(field.coords(x)) {
                elements.push(x);
            }
        }
        BSubspace {
            basis: BBasis { elements },
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn basis(&self) -> &BBasis {
        &self.basis
    }

    pub fn contains(&self, field: &Tower, x: Elem) -> bool {
        coords_in_basis(field, x, &self.basis).is_ok()
    }

    /// Every element of the subspace, by brute-force enumeration of all
    /// coordinate vectors.
    pub fn elements(&self, field: &Tower) -> Vec<Elem> {
        let q = field.base_order() as u64;
        let d = self.dim() as u32;
        (0..q.pow(d))
            .map(|mut idx| {
                let coords: Vec<SubElem> = (0..d)
                    .map(|_| {
                        let c = field.sub_elem((idx % q) as usize).unwrap();
                        idx /= q;
                        c
                    })
                    .collect();
                combine(field, &coords, self.basis.elements())
            })
            .collect()
    }
}

/// Dimension of {x : Tr(m x) = 0 for every m in `functionals`}.
pub fn annihilator_dim(field: &Tower, functionals: &[Elem]) -> usize {
    let t = field.t();
    let mut ech = Echelon::new(field);
    for &m in functionals {
        let row = (0..t)
            .map(|i| field.trace(field.mul(m, field.power_basis(i))))
            .collect();
        ech.insert(row);
    }
    t as usize - ech.rank()
}

/// K = Ker(Tr), dimension t-1.
pub fn trace_kernel(field: &Tower) -> BSubspace {
    let dim = field.t() as usize - 1;
    BSubspace::scan(field, Some(dim), |x| field.trace(x).is_zero())
}

/// K_{a,b} = {x : Tr((a-b)x) = 0} = K/(a-b).
pub fn pair_kernel(field: &Tower, alpha: Elem, beta: Elem) -> Result<BSubspace> {
    if alpha == beta {
        return Err(Error::EqualPoints);
    }
    let d = field.sub(alpha, beta);
    let dim = field.t() as usize - 1;
    Ok(BSubspace::scan(field, Some(dim), |x| {
        field.trace(field.mul(d, x)).is_zero()
    }))
}

fn distinct3(a1: Elem, a2: Elem, a3: Elem) -> Result<()> {
    if a1 == a2 || a2 == a3 || a1 == a3 {
        return Err(Error::EqualPoints);
    }
    Ok(())
}

/// dim_B K_{1,2,3}, computed as the corank of two trace functionals.
pub fn triple_kernel_dim(field: &Tower, a1: Elem, a2: Elem, a3: Elem) -> Result<usize> {
    distinct3(a1, a2, a3)?;
    Ok(annihilator_dim(
        field,
        &[field.sub(a1, a2), field.sub(a2, a3)],
    ))
}

/// K_{1,2,3} = {x : Tr(a1 x) = Tr(a2 x) = Tr(a3 x)} = K_{1,2} ∩ K_{2,3}.
pub fn triple_kernel(field: &Tower, a1: Elem, a2: Elem, a3: Elem) -> Result<BSubspace> {
    let dim = triple_kernel_dim(field, a1, a2, a3)?;
    let t = field.t() as usize;
    if dim + 2 < t || dim + 1 > t {
        return Err(Error::Internal(format!(
            "dim K123 = {dim} outside [t-2, t-1] for t = {t}"
        )));
    }
    let (d12, d23) = (field.sub(a1, a2), field.sub(a2, a3));
    Ok(BSubspace::scan(field, Some(dim), |x| {
        field.trace(field.mul(d12, x)).is_zero() && field.trace(field.mul(d23, x)).is_zero()
    }))
}

/// S1 ∩ S2 via the null space of [S1 | -S2].
pub fn intersect(field: &Tower, s1: &BSubspace, s2: &BSubspace) -> BSubspace {
    let t = field.t() as usize;
    let cols: Vec<Vec<SubElem>> = s1
        .basis
        .elements
        .iter()
        .map(|&b| field.coords(b))
        .chain(
            s2.basis
                .elements
                .iter()
                .map(|&b| field.coords(field.neg(b))),
        )
        .collect();
    if cols.is_empty() {
        return BSubspace::zero();
    }
    let a: Vec<Vec<SubElem>> = (0..t)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let d1 = s1.dim();
    let generators: Vec<Elem> = null_space(field, &a)
        .expect("matrix is rectangular")
        .iter()
        .map(|v| combine(field, &v[..d1], s1.basis.elements()))
        .collect();
    BSubspace::span(field, &generators)
}

/// Extends `inner` to `target_dim` by appending, in enumeration order, the
/// first candidates (inside `constraint` when given) that raise the rank.
pub fn extend_basis(
    field: &Tower,
    inner: &BBasis,
    target_dim: usize,
    constraint: Option<&BSubspace>,
) -> Result<BBasis> {
    let t = field.t() as usize;
    let limit = constraint.map_or(t, BSubspace::dim);
    let impossible = Error::ImpossibleExtension {
        rank: inner.rank(),
        target: target_dim,
    };
    if target_dim > limit || inner.rank() > target_dim {
        return Err(impossible);
    }
    if let Some(c) = constraint {
        if inner.elements.iter().any(|&x| !c.contains(field, x)) {
            return Err(impossible);
        }
    }
    let mut ech = Echelon::new(field);
    for &x in &inner.elements {
        ech.insert(field.coords(x));
    }
    let mut elements = inner.elements.clone();
    for x in field.nonzero_elements() {
        if elements.len() == target_dim {
            break;
        }
        if constraint.is_some_and(|c| !c.contains(field, x)) {
            continue;
        }
        if ech.insert(field.coords(x)) {
            elements.push(x);
        }
    }
    if elements.len() != target_dim {
        return Err(impossible);
    }
    Ok(BBasis { elements })
}

/// The unique {d_j} with Tr(b_i d_j) = [i = j].
pub fn dual_basis(field: &Tower, basis: &BBasis) -> Result<BBasis> {
    let t = field.t();
    if basis.rank() != t as usize {
        return Err(Error::DimensionMismatch(format!(
            "dual basis needs rank {t}, got {}",
            basis.rank()
        )));
    }
    let gram: Vec<Vec<SubElem>> = basis
        .elements
        .iter()
        .map(|&b| {
            (0..t)
                .map(|k| field.trace(field.mul(b, field.power_basis(k))))
                .collect()
        })
        .collect();
    let mut dual = Vec::with_capacity(t as usize);
    for j in 0..t as usize {
        let mut unit = vec![SubElem::ZERO; t as usize];
        unit[j] = SubElem::ONE;
        let c = solve_over_b(field, &gram, &unit)?
            .ok_or_else(|| Error::Internal("singular trace Gram matrix".into()))?;
        dual.push(field.from_coords(&c)?);
    }
    Ok(BBasis { elements: dual })
}

/// Recovers g from traces[i] = Tr(basis[i] * g).
pub fn recover_from_traces(field: &Tower, basis: &BBasis, traces: &[SubElem]) -> Result<Elem> {
    if traces.len() != basis.rank() {
        return Err(Error::LengthMismatch {
            expected: basis.rank(),
            got: traces.len(),
        });
    }
    let dual = dual_basis(field, basis)?;
    Ok(combine(field, traces, dual.elements()))
}

/// Whether sigma * K = K as sets (K = Ker Tr). Since sigma * K has |K|
/// elements when sigma != 0, containment of the scaled basis suffices.
pub fn scaling_fixes_kernel(field: &Tower, sigma: Elem) -> bool {
    !sigma.is_zero()
        && trace_kernel(field)
            .basis()
            .elements()
            .iter()
            .all(|&z| field.trace(field.mul(sigma, z)).is_zero())
}
