//! Point-count bounds for hypersurfaces and the assembled verdict for one
//! hypersurface. All arithmetic is in unbounded integers.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::geometry::{GeometryError, Hypersurface};
use crate::projgeom::proj_count;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("theta is defined for odd n >= 3, got n = {0}")]
    EvenOrSmallN(u32),
    #[error("k = {k} outside 0..={max}")]
    KOutOfRange { k: i64, max: u32 },
    #[error("degree must be at least 2")]
    DegreeTooLow,
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("contradiction with a proven bound: {reason}")]
    Contradiction { report: Box<BoundReport>, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// An exact count that serializes as a JSON number when it fits in 64
/// bits and as a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigCount(pub BigUint);

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(&self.0) {
            Ok(v) => s.serialize_u64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl std::fmt::Display for BigCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

fn check_q(q: u64) -> Result<(), BoundsError> {
    crate::field::prime_power(q).map(|_| ()).ok_or(BoundsError::NotPrimePower(q))
}

fn pow(q: u64, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// `(d-1) q^((n+1)/2) N(P^((n-1)/2)) + N(P^((n-1)/2))` for odd `n >= 3`.
pub fn theta(n: u32, d: u32, q: u64) -> Result<BigUint, BoundsError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(BoundsError::EvenOrSmallN(n));
    }
    if d < 2 {
        return Err(BoundsError::DegreeTooLow);
    }
    check_q(q)?;
    let h = (n - 1) / 2;
    let base = proj_count(h, q);
    Ok(BigUint::from(d - 1) * pow(q, h + 1) * &base + base)
}

/// `(d-1) q^k N(P^(n-k)) + N(P^k)` for `0 <= k <= n-1`.
pub fn k_bound(n: u32, d: u32, q: u64, k: i64) -> Result<BigUint, BoundsError> {
    if k < 0 || k > n as i64 - 1 {
        return Err(BoundsError::KOutOfRange { k, max: n.saturating_sub(1) });
    }
    if d < 2 {
        return Err(BoundsError::DegreeTooLow);
    }
    check_q(q)?;
    let k = k as u32;
    Ok(BigUint::from(d - 1) * pow(q, k) * proj_count(n - k, q) + proj_count(k, q))
}

/// The bound with `k = n - 1`.
pub fn elementary_bound(n: u32, d: u32, q: u64) -> Result<BigUint, BoundsError> {
    k_bound(n, d, q, n as i64 - 1)
}

/// Plane curve bounds without linear components: `(d-1)q + 1`, and
/// `(d-1)q + 2` as the single exception at `(d, q) = (4, 4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveBound {
    pub generic: u64,
    pub exceptional: Option<u64>,
}

pub fn curve_bound(d: u32, q: u64) -> Result<CurveBound, BoundsError> {
    if d < 2 {
        return Err(BoundsError::DegreeTooLow);
    }
    check_q(q)?;
    let generic = (d as u64 - 1) * q + 1;
    Ok(CurveBound { generic, exceptional: ((d, q) == (4, 4)).then_some(generic + 1) })
}

/// `(d-1) q^(2k+1) + N(P^(k-1))`, the bound on rational lines through a
/// point of `X^(2k+3)` (`N(P^-1) = 0`).
pub fn line_locus_bound(d: u32, q: u64, k: u32) -> BigUint {
    let tail = if k == 0 { BigUint::from(0u32) } else { proj_count(k - 1, q) };
    BigUint::from(d - 1) * pow(q, 2 * k + 1) + tail
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: String,
    pub base_count: u64,
    pub base_nonsingular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub d: u32,
    pub q: u64,
    pub point_count: u64,
    pub nonsingular: bool,
    pub thas_invariant: i32,
    pub theta: Option<BigCount>,
    /// The k-bound at `max(k_X, 0)`; absent when `X` contains a hyperplane.
    pub k_bound: Option<BigCount>,
    pub elementary_bound: BigCount,
    pub within_theta: Option<bool>,
    pub theta_equality: Option<bool>,
    pub within_k_bound: Option<bool>,
    /// Base count a witnessing cone point must have in the equality case.
    pub required_base_count: Option<BigCount>,
    pub witness: Option<Witness>,
}

/// Assembles counts, invariants and bounds for `X`. In the equality case
/// `N = theta` it looks for a cone point whose base is nonsingular with the
/// extremal count; for nonsingular `X` where the structure theorems apply,
/// a missing witness is reported as a contradiction.
pub fn report(x: &Hypersurface) -> Result<BoundReport, BoundsError> {
    let n = x.dim() as u32;
    let d = x.degree();
    let q = x.q();
    let point_count = x.point_count(1);
    let nonsingular = x.is_nonsingular()?;
    let thas_invariant = x.thas_invariant();
    let theta_v = theta(n, d, q).ok();
    let k_eff = thas_invariant.max(0) as i64;
    let kb = k_bound(n, d, q, k_eff).ok();
    let elementary = elementary_bound(n, d, q)?;
    let nb = BigUint::from(point_count);
    let within_theta = theta_v.as_ref().map(|t| nb <= *t);
    let theta_equality = theta_v.as_ref().map(|t| nb == *t);
    let within_k_bound = kb.as_ref().map(|b| nb <= *b);

    let required = if theta_equality == Some(true) {
        if n == 3 {
            Some(BigUint::from(curve_bound(d, q)?.generic))
        } else {
            theta(n - 2, d, q).ok()
        }
    } else {
        None
    };
    let mut witness = None;
    if let Some(req) = &required {
        for r in x.cone_points() {
            let Some(count) = r.cone_base_count() else { continue };
            if BigUint::from(count) == *req {
                let ok = r.cone_base_nonsingular()?;
                if ok || witness.is_none() {
                    witness =
                        Some(Witness { point: r.point.format(x.field()), base_count: count, base_nonsingular: ok });
                }
                if ok {
                    break;
                }
            }
        }
    }
    let rep = BoundReport {
        n,
        d,
        q,
        point_count,
        nonsingular,
        thas_invariant,
        theta: theta_v.map(BigCount),
        k_bound: kb.map(BigCount),
        elementary_bound: BigCount(elementary),
        within_theta,
        theta_equality,
        within_k_bound,
        required_base_count: required.map(BigCount),
        witness,
    };
    let theorem_applies = n == 3 || (n >= 5 && d as u64 <= q);
    if nonsingular && theorem_applies {
        if rep.within_theta == Some(false) {
            return Err(BoundsError::Contradiction {
                reason: "nonsingular X exceeds theta".into(),
                report: Box::new(rep),
            });
        }
        if rep.theta_equality == Some(true) && !rep.witness.as_ref().is_some_and(|w| w.base_nonsingular) {
            return Err(BoundsError::Contradiction {
                reason: "no cone point with a nonsingular base of the extremal count".into(),
                report: Box::new(rep),
            });
        }
    }
    if rep.within_k_bound == Some(false) {
        return Err(BoundsError::Contradiction {
            reason: "point count exceeds the k-bound".into(),
            report: Box::new(rep),
        });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(3, 3, 2).unwrap(), big(27));
        assert_eq!(theta(3, 4, 4).unwrap(), big(245));
        assert_eq!(theta(3, 2, 2).unwrap(), big(15));
        assert_eq!(theta(3, 3, 4).unwrap(), big(165));
        assert!(theta(4, 3, 2).is_err());
        assert!(theta(1, 3, 2).is_err());
        assert!(theta(3, 3, 6).is_err());
        // unbounded arithmetic
        assert!(theta(41, 5, 4096).unwrap() > big(u64::MAX));
    }

    #[test]
    fn k_bounds() {
        assert_eq!(k_bound(3, 3, 2, 1).unwrap(), big(31));
        assert_eq!(k_bound(3, 3, 2, 0).unwrap(), big(2 * 15 + 1));
        assert_eq!(k_bound(3, 4, 3, 1).unwrap(), big(3 * 3 * 13 + 4));
        assert!(k_bound(3, 3, 2, 3).is_err());
        assert!(k_bound(3, 3, 2, -1).is_err());
        assert_eq!(elementary_bound(3, 3, 2).unwrap(), big(2 * 4 * 3 + 7));
    }

    #[test]
    fn curves() {
        assert_eq!(curve_bound(3, 2).unwrap(), CurveBound { generic: 5, exceptional: None });
        assert_eq!(curve_bound(4, 4).unwrap(), CurveBound { generic: 13, exceptional: Some(14) });
        assert_eq!(curve_bound(2, 7).unwrap().generic, 8);
    }

    #[test]
    fn line_locus_bounds() {
        assert_eq!(line_locus_bound(2, 2, 1), big(8 + 1));
        assert_eq!(line_locus_bound(3, 2, 2), big(2 * 32 + 3));
    }

    #[test]
    fn big_counts_serialize() {
        assert_eq!(serde_json::to_string(&BigCount(big(27))).unwrap(), "27");
        let huge = BigCount(BigUint::from(u64::MAX) * 10u32);
        assert_eq!(serde_json::to_string(&huge).unwrap(), "\"184467440737095516150\"");
    }

    #[test]
    fn parabolic_quadric_report() {
        let f2 = Field::prime(2).unwrap();
        let x = Hypersurface::parse(&f2, "x0^2 + x1*x2 + x3*x4", None).unwrap();
        let r = report(&x).unwrap();
        assert_eq!(r.point_count, 15);
        assert_eq!(r.theta_equality, Some(true));
        assert_eq!(r.thas_invariant, 1);
        assert_eq!(r.witness.unwrap().base_count, 3);
    }
}
