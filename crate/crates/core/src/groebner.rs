//! Buchberger's algorithm for homogeneous ideals under grevlex, and the
//! projective emptiness test built on it.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::field::{Elem, Field};
use crate::monomial::Monomial;
use crate::poly::MultiPoly;

pub const DEFAULT_DEGREE_CAP: u32 = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("ideal has no nonzero generators")]
    NoGenerators,
    #[error("generator is not homogeneous")]
    NotHomogeneous,
    #[error("generators disagree on field or variable count")]
    Mismatch,
    #[error("S-pair of degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { cap: u32, degree: u32 },
}

type Terms = Vec<(Monomial, Elem)>;

/// Homogeneous generators over a common field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    field: Field,
    nvars: usize,
    gens: Vec<MultiPoly>,
}

impl Ideal {
    /// Zero generators are dropped; at least one must remain.
    pub fn new(gens: impl IntoIterator<Item = MultiPoly>) -> Result<Ideal, GroebnerError> {
        let gens: Vec<MultiPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let first = gens.first().ok_or(GroebnerError::NoGenerators)?;
        let (field, nvars) = (first.field().clone(), first.nvars());
        for g in &gens {
            if g.nvars() != nvars || *g.field() != field {
                return Err(GroebnerError::Mismatch);
            }
            if !g.is_homogeneous() {
                return Err(GroebnerError::NotHomogeneous);
            }
        }
        Ok(Ideal { field, nvars, gens })
    }

    /// `(F, dF/dx0, ..., dF/dxN)`, whose projective emptiness is
    /// nonsingularity of `V(F)`.
    pub fn jacobian(f: &MultiPoly) -> Result<Ideal, GroebnerError> {
        Ideal::new(std::iter::once(f.clone()).chain(f.gradient()))
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

/// A reduced Gröbner basis, sorted by descending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ideal: Ideal,
    basis: Vec<MultiPoly>,
}

impl GroebnerBasis {
    pub fn polys(&self) -> &[MultiPoly] {
        &self.basis
    }
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|g| g.terms()[0].0).collect()
    }

    /// True iff every variable has a pure power among the leading monomials.
    pub fn is_projectively_empty(&self) -> bool {
        pure_powers_cover(&self.leading_monomials(), self.ideal.nvars)
    }
}

fn pure_powers_cover(lts: &[Monomial], nvars: usize) -> bool {
    let mut seen = 0u32;
    for m in lts {
        if let Some(i) = m.pure_power_var() {
            seen |= 1 << i;
        }
    }
    seen.count_ones() as usize == nvars
}

struct Engine<'a> {
    field: &'a Field,
    basis: Vec<Terms>,
}

impl Engine<'_> {
    fn lm(&self, i: usize) -> Monomial {
        self.basis[i][0].0
    }

    /// `a - c * m * b`, both sorted descending.
    fn sub_scaled(&self, a: &[(Monomial, Elem)], c: Elem, m: Monomial, b: &[(Monomial, Elem)]) -> Terms {
        let f = self.field;
        let nc = f.neg(c);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let bm = (j < b.len()).then(|| b[j].0.mul(m));
            match (i < a.len(), bm) {
                (true, Some(bm)) if a[i].0 == bm => {
                    let v = f.add(a[i].1, f.mul(nc, b[j].1));
                    if !v.is_zero() {
                        out.push((bm, v));
                    }
                    i += 1;
                    j += 1;
                }
                (true, Some(bm)) if a[i].0 < bm => {
                    out.push((bm, f.mul(nc, b[j].1)));
                    j += 1;
                }
                (true, _) => {
                    out.push(a[i]);
                    i += 1;
                }
                (false, Some(bm)) => {
                    out.push((bm, f.mul(nc, b[j].1)));
                    j += 1;
                }
                (false, None) => unreachable!(),
            }
        }
        out
    }

    /// Full reduction of `p` by the basis elements whose index is not in
    /// `skip`. Basis elements are monic.
    fn reduce(&self, mut p: Terms, skip: Option<usize>) -> Terms {
        let mut done: Terms = Vec::new();
        while !p.is_empty() {
            let (m, c) = p[0];
            let hit =
                self.basis.iter().enumerate().find(|(k, g)| Some(*k) != skip && !g.is_empty() && g[0].0.divides(m));
            match hit {
                Some((_, g)) => {
                    let q = g[0].0.quotient_of(m);
                    p = self.sub_scaled(&p[1..], c, q, &g[1..]);
                }
                None => {
                    done.push((m, c));
                    p.remove(0);
                }
            }
        }
        done
    }

    fn monic(&self, mut p: Terms) -> Terms {
        if let Some(&(_, c)) = p.first() {
            if c != Elem::ONE {
                let inv = self.field.inv(c).expect("nonzero");
                for t in p.iter_mut() {
                    t.1 = self.field.mul(t.1, inv);
                }
            }
        }
        p
    }

    fn spoly(&self, i: usize, j: usize) -> Terms {
        let (gi, gj) = (&self.basis[i], &self.basis[j]);
        let l = gi[0].0.lcm(gj[0].0);
        let ui = gi[0].0.quotient_of(l);
        let uj = gj[0].0.quotient_of(l);
        let a: Terms = gi[1..].iter().map(|&(m, c)| (m.mul(ui), c)).collect();
        self.sub_scaled(&a, Elem::ONE, uj, &gj[1..])
    }
}

/// Runs Buchberger's algorithm. With `stop_when_empty`, returns as soon as
/// the leading monomials already certify projective emptiness; the result
/// is then a partial basis.
fn run(ideal: &Ideal, degree_cap: u32, stop_when_empty: bool) -> Result<Vec<Terms>, GroebnerError> {
    let mut eng = Engine { field: &ideal.field, basis: Vec::new() };
    // pending pairs ordered by (lcm degree, lcm, i, j)
    let mut queue: BTreeSet<(u32, std::cmp::Reverse<Monomial>, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let mut inputs: Vec<Terms> = ideal.gens.iter().map(|g| g.terms().to_vec()).collect();
    inputs.sort_by(|a, b| a[0].0.degree().cmp(&b[0].0.degree()).then(b[0].0.cmp(&a[0].0)));
    let mut inputs = inputs.into_iter().peekable();

    loop {
        // feed generators whose degree is not above the next pair's degree
        let next_pair_deg = queue.iter().next().map(|p| p.0);
        let take_input = match (inputs.peek(), next_pair_deg) {
            (Some(g), Some(d)) => g[0].0.degree() <= d,
            (Some(_), None) => true,
            (None, _) => false,
        };
        let candidate = if take_input {
            inputs.next().unwrap()
        } else if let Some(&pair) = queue.iter().next() {
            queue.remove(&pair);
            let (deg, _, i, j) = pair;
            pending.remove(&(i, j));
            if deg > degree_cap {
                return Err(GroebnerError::DegreeCap { cap: degree_cap, degree: deg });
            }
            let l = pair.1 .0;
            let chain = (0..eng.basis.len()).any(|k| {
                k != i
                    && k != j
                    && eng.lm(k).divides(l)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            eng.spoly(i, j)
        } else {
            break;
        };
        let r = eng.reduce(candidate, None);
        if r.is_empty() {
            continue;
        }
        let r = eng.monic(r);
        let new = eng.basis.len();
        let lm = r[0].0;
        eng.basis.push(r);
        for k in 0..new {
            let lk = eng.lm(k);
            if lk.is_coprime(lm) {
                continue;
            }
            let l = lk.lcm(lm);
            queue.insert((l.degree(), std::cmp::Reverse(l), k, new));
            pending.insert((k, new));
        }
        if stop_when_empty {
            let lts: Vec<Monomial> = eng.basis.iter().map(|g| g[0].0).collect();
            if pure_powers_cover(&lts, ideal.nvars) {
                return Ok(eng.basis);
            }
        }
    }
    Ok(eng.basis)
}

fn interreduce(field: &Field, basis: Vec<Terms>) -> Vec<Terms> {
    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Terms> = Vec::new();
    let mut sorted = basis;
    sorted.sort_by(|a, b| a[0].0.cmp(&b[0].0));
    for g in sorted {
        if !keep.iter().any(|k| k[0].0.divides(g[0].0)) {
            keep.push(g);
        }
    }
    let mut eng = Engine { field, basis: keep };
    for i in 0..eng.basis.len() {
        let g = std::mem::take(&mut eng.basis[i]);
        let lead = g[0];
        let tail = eng.reduce(g[1..].to_vec(), Some(i));
        let mut full = vec![lead];
        full.extend(tail);
        eng.basis[i] = full;
    }
    eng.basis.sort_by(|a, b| b[0].0.cmp(&a[0].0));
    eng.basis
}

/// Reduced Gröbner basis of `ideal`. Fails rather than truncating when an
/// S-pair above `degree_cap` would be needed.
pub fn buchberger(ideal: &Ideal, degree_cap: u32) -> Result<GroebnerBasis, GroebnerError> {
    let raw = run(ideal, degree_cap, false)?;
    let basis = interreduce(&ideal.field, raw)
        .into_iter()
        .map(|t| MultiPoly::from_sorted(&ideal.field, ideal.nvars, t))
        .collect();
    Ok(GroebnerBasis { ideal: ideal.clone(), basis })
}

/// Remainder of `f` on division by the basis; zero iff `f` is in the ideal.
pub fn normal_form(f: &MultiPoly, gb: &GroebnerBasis) -> MultiPoly {
    assert!(f.nvars() == gb.ideal.nvars && *f.field() == gb.ideal.field, "field or arity mismatch");
    let eng = Engine { field: &gb.ideal.field, basis: gb.basis.iter().map(|g| g.terms().to_vec()).collect() };
    MultiPoly::from_sorted(f.field(), f.nvars(), eng.reduce(f.terms().to_vec(), None))
}

/// True iff the generators have no common zero in projective space over
/// the algebraic closure.
pub fn is_projectively_empty(ideal: &Ideal) -> Result<bool, GroebnerError> {
    is_projectively_empty_capped(ideal, DEFAULT_DEGREE_CAP)
}

pub fn is_projectively_empty_capped(ideal: &Ideal, degree_cap: u32) -> Result<bool, GroebnerError> {
    // a partial basis certifies emptiness; non-emptiness needs the full one
    let basis = run(ideal, degree_cap, true)?;
    let lts: Vec<Monomial> = basis.iter().map(|g| g[0].0).collect();
    Ok(pure_powers_cover(&lts, ideal.nvars))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(f: &Field, n: usize, gens: &[&str]) -> Ideal {
        Ideal::new(gens.iter().map(|s| MultiPoly::parse(f, s, Some(n)).unwrap())).unwrap()
    }

    #[test]
    fn small_bases() {
        let f2 = Field::prime(2).unwrap();
        let gb = buchberger(&ideal(&f2, 3, &["x0", "x1"]), 30).unwrap();
        assert_eq!(gb.polys().iter().map(|g| g.to_string()).collect::<Vec<_>>(), ["x0", "x1"]);
        let gb = buchberger(&ideal(&f2, 2, &["x0*x1"]), 30).unwrap();
        assert_eq!(gb.polys().len(), 1);
        // hand computation: S(x0^2, x0x1+x1^2) = x0x1^2 -> x1^3
        let gb = buchberger(&ideal(&f2, 2, &["x0^2", "x0*x1 + x1^2"]), 30).unwrap();
        let shown: Vec<String> = gb.polys().iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, ["x1^3", "x0^2", "x0*x1 + x1^2"]);
        assert!(gb.is_projectively_empty());
    }

    #[test]
    fn normal_forms() {
        let f2 = Field::prime(2).unwrap();
        let gb = buchberger(&ideal(&f2, 3, &["x0", "x1"]), 30).unwrap();
        assert!(normal_form(&MultiPoly::var(&f2, 3, 0), &gb).is_zero());
        assert_eq!(normal_form(&MultiPoly::var(&f2, 3, 2), &gb), MultiPoly::var(&f2, 3, 2));
    }

    #[test]
    fn emptiness() {
        let f2 = Field::prime(2).unwrap();
        assert!(is_projectively_empty(&ideal(&f2, 3, &["x0", "x1", "x2"])).unwrap());
        assert!(!is_projectively_empty(&ideal(&f2, 3, &["x0", "x1"])).unwrap());
        let fermat = MultiPoly::parse(&f2, "x0^3+x1^3+x2^3+x3^3+x4^3", None).unwrap();
        assert!(is_projectively_empty(&Ideal::jacobian(&fermat).unwrap()).unwrap());
        let q = MultiPoly::parse(&f2, "x0*x1", Some(4)).unwrap();
        assert!(!is_projectively_empty(&Ideal::jacobian(&q).unwrap()).unwrap());
    }

    #[test]
    fn cap_is_reported() {
        let f3 = Field::prime(3).unwrap();
        let i = ideal(&f3, 3, &["x0^2 + x1*x2", "x1^2 + x0*x2", "x2^2 + 2*x0*x1"]);
        assert!(matches!(buchberger(&i, 2), Err(GroebnerError::DegreeCap { .. })));
        assert!(buchberger(&i, 30).is_ok());
    }

    #[test]
    fn rejects_bad_ideals() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(Ideal::new(Vec::new()), Err(GroebnerError::NoGenerators));
        let inhom = MultiPoly::parse(&f2, "x0^2 + x1", None).unwrap();
        assert_eq!(Ideal::new([inhom]), Err(GroebnerError::NotHomogeneous));
    }
}
