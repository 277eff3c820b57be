//! Packed monomials in at most [`MAX_VARS`] variables.
//!
//! Exponent `i` lives in byte `i` of a `u128`, the total degree in the top
//! byte, so multiplication and division are integer addition and
//! subtraction. Exponents and degrees must stay below 128.

use std::cmp::Ordering;
use std::fmt;

pub const MAX_VARS: usize = 10;

const EXP_MASK: u128 = (1u128 << (8 * MAX_VARS)) - 1;
const HIGH_BITS: u128 = 0x8080_8080_8080_8080_8080u128;
const DEG_SHIFT: u32 = 120;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut packed = 0u128;
        let mut deg = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e < 128, "exponent {e} too large");
            packed |= (e as u128) << (8 * i);
            deg += e;
        }
        assert!(deg < 128, "degree {deg} too large");
        Monomial(packed | ((deg as u128) << DEG_SHIFT))
    }

    pub fn var(i: usize) -> Monomial {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Monomial {
        assert!(i < MAX_VARS && e < 128);
        Monomial(((e as u128) << (8 * i)) | ((e as u128) << DEG_SHIFT))
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    /// Index of the highest variable with a nonzero exponent, plus one.
    pub fn support_len(self) -> usize {
        let e = self.0 & EXP_MASK;
        if e == 0 {
            0
        } else {
            (128 - e.leading_zeros() as usize).div_ceil(8)
        }
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Monomial) -> Monomial {
        let m = Monomial(self.0 + other.0);
        debug_assert!(m.degree() < 128);
        m
    }

    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        let a = self.0 & EXP_MASK;
        let b = other.0 & EXP_MASK;
        ((b | HIGH_BITS) - a) & HIGH_BITS == HIGH_BITS
    }

    /// `other / self`; requires `self.divides(other)`.
    #[inline]
    pub fn quotient_of(self, other: Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(other.0 - self.0)
    }

    pub fn lcm(self, other: Monomial) -> Monomial {
        let mut exps = [0u32; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exponent(i).max(other.exponent(i));
        }
        Monomial::from_exponents(&exps)
    }

    pub fn is_coprime(self, other: Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exponent(i) == 0 || other.exponent(i) == 0)
    }

    /// `Some(i)` if this is `x_i^e` with `e >= 1`.
    pub fn pure_power_var(self) -> Option<usize> {
        let mut found = None;
        for i in 0..MAX_VARS {
            if self.exponent(i) > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Removes variable `i`, shifting higher variables down. Its exponent is
    /// returned alongside.
    pub fn remove_var(self, i: usize) -> (Monomial, u32) {
        let mut exps: Vec<u32> = (0..MAX_VARS).map(|j| self.exponent(j)).collect();
        let e = exps.remove(i);
        (Monomial::from_exponents(&exps), e)
    }

    /// Inserts a new variable at position `i` with exponent `e`.
    pub fn insert_var(self, i: usize, e: u32) -> Monomial {
        let mut exps: Vec<u32> = (0..MAX_VARS - 1).map(|j| self.exponent(j)).collect();
        exps.insert(i, e);
        Monomial::from_exponents(&exps)
    }

    /// All monomials of degree `d` in `nvars` variables, in descending
    /// graded reverse-lexicographic order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(i: usize, nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur.push(left);
                out.push(Monomial::from_exponents(cur));
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e);
                rec(i + 1, nvars, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::ONE);
            }
            return out;
        }
        rec(0, nvars, d, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }
}

/// Graded reverse-lexicographic order.
impl Ord for Monomial {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| (other.0 & EXP_MASK).cmp(&(self.0 & EXP_MASK)))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for i in 0..MAX_VARS {
            let e = self.exponent(i);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_examples() {
        // degree first
        assert!(m(&[0, 0, 2]) > m(&[1, 0, 0]));
        // x0 > x1 > x2 in degree 1
        assert!(m(&[1, 0, 0]) > m(&[0, 1, 0]));
        assert!(m(&[0, 1, 0]) > m(&[0, 0, 1]));
        // grevlex: x1^2 > x0*x2 (smaller exponent of last variable wins)
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
        assert!(m(&[1, 1, 0]) > m(&[0, 2, 0]));
    }

    #[test]
    fn divisibility_and_arithmetic() {
        let a = m(&[1, 2, 0]);
        let b = m(&[2, 2, 1]);
        assert!(a.divides(b));
        assert!(!b.divides(a));
        assert_eq!(a.quotient_of(b), m(&[1, 0, 1]));
        assert_eq!(a.mul(m(&[1, 0, 1])), b);
        assert_eq!(a.lcm(m(&[0, 3, 1])), m(&[1, 3, 1]));
        assert!(m(&[1, 0]).is_coprime(m(&[0, 4])));
        assert_eq!(m(&[0, 0, 5]).pure_power_var(), Some(2));
        assert_eq!(m(&[1, 0, 5]).pure_power_var(), None);
        assert_eq!(b.degree(), 5);
        assert_eq!(b.to_string(), "x0^2*x1^2*x2");
        assert_eq!(b.remove_var(0), (m(&[2, 1]), 2));
        assert_eq!(m(&[2, 1]).insert_var(0, 2), b);
        assert_eq!(b.support_len(), 3);
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(Monomial::all_of_degree(5, 3).len(), 35);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(0, 0), vec![Monomial::ONE]);
    }
}
