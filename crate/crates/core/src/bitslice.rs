//! Bitsliced evaluation of polynomials with coefficients in `F_2` over all
//! points of `P^N(F_{2^m})`.
//!
//! Every point gets one bit position. For each monomial the table stores
//! its value at every point as `m` bit planes (bit `b` of the value's
//! encoding), so the value vector of `sum_i m_i` is the XOR of the masks of
//! the monomials present, and a point is a zero when all planes are clear.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::field::{Elem, Field};
use crate::monomial::Monomial;
use crate::poly::MultiPoly;
use crate::projgeom::{self, ProjPoint};

/// Tables above this many points are not built.
pub const MAX_POINTS: usize = 1 << 20;

/// Monomial value masks for one `(N, m, degrees)` combination. Layout of a
/// mask: word `w`, plane `b` at index `w * planes + b`.
pub struct BitTable {
    field: Field,
    nvars: usize,
    npoints: usize,
    words: usize,
    planes: usize,
    index: HashMap<Monomial, usize>,
    masks: Vec<u64>,
    valid: Vec<u64>,
}

type Key = (usize, u32, Vec<u32>);

fn cache() -> &'static Mutex<HashMap<Key, Arc<BitTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<BitTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl BitTable {
    /// Shared table over `F_{2^m}` for all monomials of the given degrees
    /// in `nvars` variables. `None` if the point set is too large.
    pub fn get(nvars: usize, m: u32, degrees: &[u32]) -> Option<Arc<BitTable>> {
        let mut degs = degrees.to_vec();
        degs.sort_unstable();
        degs.dedup();
        let key = (nvars, m, degs.clone());
        if let Some(t) = cache().lock().unwrap().get(&key) {
            return Some(t.clone());
        }
        let t = Arc::new(BitTable::build(nvars, m, &degs)?);
        cache().lock().unwrap().insert(key, t.clone());
        Some(t)
    }

    fn build(nvars: usize, m: u32, degrees: &[u32]) -> Option<BitTable> {
        let field = Field::new(2, m).ok()?;
        let npoints = projgeom::proj_count_u64(nvars as u32 - 1, field.order() as u64) as usize;
        if npoints > MAX_POINTS {
            return None;
        }
        let words = npoints.div_ceil(64);
        let planes = m as usize;
        let pts: Vec<ProjPoint> = projgeom::points(&field, nvars - 1).collect();
        let monos: Vec<Monomial> = degrees.iter().flat_map(|&d| Monomial::all_of_degree(nvars, d)).collect();
        let stride = words * planes;
        let mut masks = vec![0u64; monos.len() * stride];
        // powers[k][i][e] = coordinate i of point k raised to e
        let maxdeg = degrees.iter().copied().max().unwrap_or(0) as usize;
        for (k, p) in pts.iter().enumerate() {
            let pows: Vec<Vec<Elem>> = p
                .coords()
                .iter()
                .map(|&c| {
                    let mut v = vec![Elem::ONE];
                    for _ in 0..maxdeg {
                        v.push(field.mul(*v.last().unwrap(), c));
                    }
                    v
                })
                .collect();
            for (mi, mono) in monos.iter().enumerate() {
                let mut val = Elem::ONE;
                for (i, pw) in pows.iter().enumerate() {
                    val = field.mul(val, pw[mono.exponent(i) as usize]);
                }
                for b in 0..planes {
                    if val.0 >> b & 1 == 1 {
                        masks[mi * stride + (k / 64) * planes + b] |= 1 << (k % 64);
                    }
                }
            }
        }
        let mut valid = vec![u64::MAX; words];
        if !npoints.is_multiple_of(64) {
            valid[words - 1] = (1u64 << (npoints % 64)) - 1;
        }
        let index = monos.into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        Some(BitTable { field, nvars, npoints, words, planes, index, masks, valid })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn npoints(&self) -> usize {
        self.npoints
    }
    pub fn words(&self) -> usize {
        self.words
    }
    pub fn planes(&self) -> usize {
        self.planes
    }
    /// Length of one value vector.
    pub fn stride(&self) -> usize {
        self.words * self.planes
    }
    /// Bits of the last word that correspond to actual points.
    pub fn valid(&self) -> &[u64] {
        &self.valid
    }

    pub fn mask(&self, m: Monomial) -> Option<&[u64]> {
        let s = self.stride();
        self.index.get(&m).map(|&i| &self.masks[i * s..(i + 1) * s])
    }

    /// Value vector of a sum of monomials (each with coefficient 1).
    pub fn values<'a>(&self, monos: impl IntoIterator<Item = &'a Monomial>) -> Option<Vec<u64>> {
        let mut out = vec![0u64; self.stride()];
        for m in monos {
            xor_into(&mut out, self.mask(*m)?);
        }
        Some(out)
    }

    /// Value vector of a polynomial with all coefficients 1, or `None` if
    /// it has other coefficients or monomials outside the table.
    pub fn poly_values(&self, f: &MultiPoly) -> Option<Vec<u64>> {
        if f.nvars() != self.nvars || f.field().characteristic() != 2 || f.terms().iter().any(|t| t.1 != Elem::ONE) {
            return None;
        }
        self.values(f.terms().iter().map(|t| &t.0))
    }

    /// Number of points where the value vector vanishes.
    pub fn count_zeros(&self, v: &[u64]) -> u64 {
        (0..self.words).map(|w| (!self.or_planes(v, w) & self.valid[w]).count_ones() as u64).sum()
    }

    /// Bitmask of zeros in word `w`.
    #[inline]
    pub fn zero_bits(&self, v: &[u64], w: usize) -> u64 {
        !self.or_planes(v, w) & self.valid[w]
    }

    #[inline]
    fn or_planes(&self, v: &[u64], w: usize) -> u64 {
        v[w * self.planes..(w + 1) * self.planes].iter().fold(0, |a, &x| a | x)
    }

    /// Point at bit position `k`, in canonical enumeration order.
    pub fn point(&self, k: usize) -> ProjPoint {
        projgeom::points(&self.field, self.nvars - 1).nth(k).expect("index in range")
    }
}

#[inline]
pub fn xor_into(acc: &mut [u64], m: &[u64]) {
    for (a, b) in acc.iter_mut().zip(m) {
        *a ^= *b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let t = BitTable::get(3, 1, &[2]).unwrap();
        assert_eq!((t.npoints(), t.words(), t.planes()), (7, 1, 1));
        // x0*x1 vanishes on the 5 points with x0 = 0 or x1 = 0
        let v = t.values(&[Monomial::from_exponents(&[1, 1, 0])]).unwrap();
        assert_eq!(t.count_zeros(&v), 5);
        let t4 = BitTable::get(3, 2, &[2]).unwrap();
        assert_eq!((t4.npoints(), t4.planes()), (21, 2));
        let v = t4.values(&[Monomial::from_exponents(&[2, 0, 0]), Monomial::from_exponents(&[1, 1, 0])]).unwrap();
        // x0(x0 + x1) is two lines: 5 + 5 - 1 points
        assert_eq!(t4.count_zeros(&v), 9);
    }

    #[test]
    fn tables_are_shared() {
        let a = BitTable::get(4, 1, &[3, 2]).unwrap();
        let b = BitTable::get(4, 1, &[2, 3]).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
