#![allow(dead_code)]

use fqhyper::{Elem, Field, Monomial, MultiPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn elem(f: &Field, r: &mut Rng8) -> Elem {
    Elem(r.gen_range(0..f.order()))
}

pub fn nonzero(f: &Field, r: &mut Rng8) -> Elem {
    Elem(r.gen_range(1..f.order()))
}

/// Random form of degree `d`; each monomial is present with probability
/// `density` and gets a uniformly random nonzero coefficient.
pub fn form(f: &Field, nvars: usize, d: u32, density: f64, r: &mut Rng8) -> MultiPoly {
    let mut terms: Vec<(Monomial, Elem)> = Vec::new();
    for m in Monomial::all_of_degree(nvars, d) {
        if r.gen_bool(density) {
            terms.push((m, nonzero(f, r)));
        }
    }
    MultiPoly::from_terms(f, nvars, terms)
}

/// Random nonzero form of degree `d`.
pub fn nonzero_form(f: &Field, nvars: usize, d: u32, density: f64, r: &mut Rng8) -> MultiPoly {
    loop {
        let g = form(f, nvars, d, density, r);
        if !g.is_zero() {
            return g;
        }
    }
}

pub fn vector(f: &Field, n: usize, r: &mut Rng8) -> Vec<Elem> {
    (0..n).map(|_| elem(f, r)).collect()
}

pub fn invertible(f: &Field, n: usize, r: &mut Rng8) -> Vec<Vec<Elem>> {
    loop {
        let m: Vec<Vec<Elem>> = (0..n).map(|_| vector(f, n, r)).collect();
        if fqhyper::linalg::rank(f, &m) == n {
            return m;
        }
    }
}

/// Canonical representatives of the points of `P^n(ext)` as raw vectors.
pub fn points(f: &Field, n: usize) -> Vec<Vec<Elem>> {
    fqhyper::projgeom::points(f, n).map(|p| p.coords().to_vec()).collect()
}

/// Independent singular-point oracle: evaluates `F` and every partial at
/// every point of `P^N(F_{q^m})`.
pub fn has_singular_point(f: &MultiPoly, m: u32) -> bool {
    let ext = f.field().extension(m).unwrap();
    let grad = f.gradient();
    points(&ext, f.nvars() - 1).iter().any(|p| {
        f.evaluate_in(&ext, p).unwrap().is_zero() && grad.iter().all(|g| g.evaluate_in(&ext, p).unwrap().is_zero())
    })
}

/// Independent point-count oracle.
pub fn count_points(f: &MultiPoly, m: u32) -> u64 {
    let ext = f.field().extension(m).unwrap();
    points(&ext, f.nvars() - 1).iter().filter(|p| f.evaluate_in(&ext, p).unwrap().is_zero()).count() as u64
}
