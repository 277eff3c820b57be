//! Points and linear subspaces of `P^N(F_q)`.
//!
//! Points are normalized so the first nonzero coordinate is 1. They are
//! enumerated by the position of that leading 1, then lexicographically in
//! the remaining coordinates under the field's element order, which gives
//! every point a stable index (see [`point_index`]).
//!
//! Subspaces are stored by their reduced row-echelon basis, which is unique
//! per subspace and doubles as a hash key.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, Field, FieldError};
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("points coincide")]
    Coincident,
    #[error("ambient dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("expected a subspace of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("cannot parse point {0:?}")]
    BadPoint(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `|P^N(F_q)| = q^N + ... + q + 1`.
pub fn proj_count(n: u32, q: u64) -> BigUint {
    (0..=n).map(|i| BigUint::from(q).pow(i)).sum()
}

/// [`proj_count`] for sizes that fit a machine word.
pub fn proj_count_u64(n: u32, q: u64) -> u64 {
    (0..=n).map(|i| q.pow(i)).sum()
}

/// Number of `k`-dimensional subspaces of an `n`-dimensional vector space
/// over `F_q`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    let mut num = one.clone();
    let mut den = one.clone();
    for i in 0..k {
        num *= q.pow(n - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    num / den
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.0.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl ProjPoint {
    /// Normalizes a nonzero vector.
    pub fn new(field: &Field, mut coords: Vec<Elem>) -> Result<ProjPoint, ProjError> {
        let lead = coords.iter().position(|c| !c.is_zero()).ok_or(ProjError::ZeroVector)?;
        if coords[lead] != Elem::ONE {
            let inv = field.inv(coords[lead])?;
            for c in coords[lead..].iter_mut() {
                *c = field.mul(*c, inv);
            }
        }
        Ok(ProjPoint { coords })
    }

    /// The coordinate point `e_i` of `P^n`.
    pub fn unit(n: usize, i: usize) -> ProjPoint {
        let mut coords = vec![Elem::ZERO; n + 1];
        coords[i] = Elem::ONE;
        ProjPoint { coords }
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// `(c0:c1:...:cN)` with field literals.
    pub fn format(&self, field: &Field) -> String {
        let parts: Vec<String> = self.coords.iter().map(|&c| field.format(c)).collect();
        format!("({})", parts.join(":"))
    }

    pub fn parse(field: &Field, s: &str) -> Result<ProjPoint, ProjError> {
        let bad = || ProjError::BadPoint(s.to_string());
        let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let coords = inner.split(':').map(|c| field.parse_elem(c).map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
        if coords.len() < 2 {
            return Err(bad());
        }
        ProjPoint::new(field, coords)
    }
}

/// Position of a normalized point in the enumeration order of `P^N(F_q)`.
pub fn point_index(q: u32, coords: &[Elem]) -> usize {
    let n = coords.len() - 1;
    let lead = coords.iter().position(|c| !c.is_zero()).expect("nonzero point");
    debug_assert_eq!(coords[lead], Elem::ONE);
    let q = q as usize;
    let offset: usize = (0..lead).map(|l| q.pow((n - l) as u32)).sum();
    offset + coords[lead + 1..].iter().fold(0usize, |acc, c| acc * q + c.0 as usize)
}

/// Restartable iterator over `P^N(F_q)` in canonical order.
#[derive(Clone, Debug)]
pub struct PointIter {
    q: u32,
    n: usize,
    lead: usize,
    idx: u64,
}

impl Iterator for PointIter {
    type Item = ProjPoint;

    fn next(&mut self) -> Option<ProjPoint> {
        while self.lead <= self.n {
            let tail = self.n - self.lead;
            let block = (self.q as u64).pow(tail as u32);
            if self.idx < block {
                let mut coords = vec![Elem::ZERO; self.n + 1];
                coords[self.lead] = Elem::ONE;
                let mut x = self.idx;
                for j in (self.lead + 1..=self.n).rev() {
                    coords[j] = Elem((x % self.q as u64) as u32);
                    x /= self.q as u64;
                }
                self.idx += 1;
                return Some(ProjPoint { coords });
            }
            self.lead += 1;
            self.idx = 0;
        }
        None
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let q = self.q as u64;
        let mut left = 0u64;
        for l in self.lead..=self.n {
            left += q.pow((self.n - l) as u32);
        }
        left -= self.idx.min(left);
        (left as usize, Some(left as usize))
    }
}

impl ExactSizeIterator for PointIter {}

/// All points of `P^n(F_q)`.
pub fn points(field: &Field, n: usize) -> PointIter {
    PointIter { q: field.order(), n, lead: 0, idx: 0 }
}

/// A projective subspace given by its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearSubspace {
    ambient: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for LinearSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearSubspace(dim {} in P^{}: {:?})", self.dim(), self.ambient, self.rows)
    }
}

impl LinearSubspace {
    /// The span of the given vectors. Fails if they are all zero.
    pub fn span(field: &Field, ambient: usize, rows: Vec<Vec<Elem>>) -> Result<LinearSubspace, ProjError> {
        if let Some(r) = rows.iter().find(|r| r.len() != ambient + 1) {
            return Err(ProjError::DimensionMismatch(ambient, r.len().saturating_sub(1)));
        }
        let (rows, pivots) = linalg::rref(field, rows);
        if rows.is_empty() {
            return Err(ProjError::ZeroVector);
        }
        Ok(LinearSubspace { ambient, rows, pivots })
    }

    pub fn span_points(field: &Field, pts: &[ProjPoint]) -> Result<LinearSubspace, ProjError> {
        let ambient = pts.first().ok_or(ProjError::ZeroVector)?.ambient_dim();
        LinearSubspace::span(field, ambient, pts.iter().map(|p| p.coords.clone()).collect())
    }

    /// The whole space `P^n`.
    pub fn whole(n: usize) -> LinearSubspace {
        LinearSubspace { ambient: n, rows: linalg::identity(n + 1), pivots: (0..=n).collect() }
    }

    /// The hyperplane `{ a . x = 0 }`.
    pub fn hyperplane(field: &Field, a: &[Elem]) -> Result<LinearSubspace, ProjError> {
        let n = a.len() - 1;
        let basis = linalg::kernel(field, &[a.to_vec()], n + 1);
        LinearSubspace::span(field, n, basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// True if the vector lies in the row space.
    pub fn contains_vector(&self, field: &Field, v: &[Elem]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = field.sub(*x, field.mul(c, r));
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, field: &Field, p: &ProjPoint) -> bool {
        p.ambient_dim() == self.ambient && self.contains_vector(field, &p.coords)
    }

    pub fn contains_subspace(&self, field: &Field, other: &LinearSubspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(field, r))
    }

    /// Rational points of the subspace, in the order induced by `P^k`.
    pub fn points(&self, field: &Field) -> Vec<ProjPoint> {
        points(field, self.dim())
            .map(|c| {
                let mut v = vec![Elem::ZERO; self.ambient + 1];
                for (&ci, row) in c.coords().iter().zip(&self.rows) {
                    if ci.is_zero() {
                        continue;
                    }
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = field.add(*x, field.mul(ci, r));
                    }
                }
                // the echelon form makes this already normalized
                ProjPoint { coords: v }
            })
            .collect()
    }

    /// Every subspace of one dimension higher that contains `self`.
    pub fn superspaces(&self, field: &Field) -> Vec<LinearSubspace> {
        let free: Vec<usize> = (0..=self.ambient).filter(|c| !self.pivots.contains(c)).collect();
        if free.is_empty() {
            return Vec::new();
        }
        points(field, free.len() - 1)
            .map(|c| {
                let mut v = vec![Elem::ZERO; self.ambient + 1];
                for (&ci, &col) in c.coords().iter().zip(&free) {
                    v[col] = ci;
                }
                let mut rows = self.rows.clone();
                rows.push(v);
                LinearSubspace::span(field, self.ambient, rows).expect("nonzero rows")
            })
            .collect()
    }
}

/// The line through two distinct points.
pub fn line_through(field: &Field, p: &ProjPoint, q: &ProjPoint) -> Result<LinearSubspace, ProjError> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(ProjError::DimensionMismatch(p.ambient_dim(), q.ambient_dim()));
    }
    if p == q {
        return Err(ProjError::Coincident);
    }
    LinearSubspace::span(field, p.ambient_dim(), vec![p.coords.clone(), q.coords.clone()])
}

/// Every `k`-dimensional subspace of `P^n(F_q)` exactly once, enumerated
/// over echelon shapes.
pub fn subspaces_of_dim(field: &Field, n: usize, k: usize) -> Vec<LinearSubspace> {
    assert!(k <= n, "subspace dimension exceeds ambient");
    let mut out = Vec::new();
    let q = field.order() as u64;
    for pivots in combinations(n + 1, k + 1) {
        // free slots: (row, col) with col > pivot[row] and col not a pivot
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (p + 1..=n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        for mut idx in 0..q.pow(slots.len() as u32) {
            let mut rows = vec![vec![Elem::ZERO; n + 1]; k + 1];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = Elem::ONE;
            }
            for &(r, c) in slots.iter().rev() {
                rows[r][c] = Elem((idx % q) as u32);
                idx /= q;
            }
            out.push(LinearSubspace { ambient: n, rows, pivots: pivots.clone() });
        }
    }
    out
}

/// All planes through a line (`proj_count(N - 2, q)` of them).
pub fn planes_containing(field: &Field, line: &LinearSubspace) -> Result<Vec<LinearSubspace>, ProjError> {
    if line.dim() != 1 {
        return Err(ProjError::WrongDimension { expected: 1, got: line.dim() });
    }
    Ok(line.superspaces(field))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
