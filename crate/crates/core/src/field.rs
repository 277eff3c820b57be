//! Finite fields `F_{p^r}` and towers `F_{q^m}` over them.
//!
//! A [`Field`] is an immutable, cheaply clonable context. Elements are
//! [`Elem`] values: the canonical integer packing `c_0 + c_1 b + ... +
//! c_{r-1} b^{r-1}` of the reduced coefficient vector over the base field of
//! order `b`. Two elements are equal exactly when their coefficient vectors
//! are equal, and the numeric order of the packing is the lexicographic order
//! on coefficient vectors (highest coefficient most significant), so
//! enumeration is simply `0..q`.
//!
//! Base-field elements embed into a tower as constant polynomials, which
//! under this packing is the identity on integers: an `Elem` of `F_q` is the
//! same `Elem` in every `F_{q^m}` built with [`Field::extension`].
//!
//! Arithmetic is served from log/antilog tables built at construction from
//! the coefficient-vector reference implementation (`*_reference` methods);
//! the tests cross-check the two.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field order {0} exceeds the supported maximum 2^20")]
    TooLarge(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("modulus must be monic of degree {expected} (got {got} coefficients)")]
    BadModulus { expected: u32, got: usize },
    #[error("modulus coefficient {0} is not a base-field element")]
    BadCoefficient(u32),
    #[error("modulus is reducible over the base field")]
    Reducible,
    #[error("elements belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field {0:?}; expected `p`, `q` or `p^r`")]
    BadFieldSyntax(String),
    #[error("cannot parse field element {0:?}")]
    BadLiteral(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// A field element in canonical packed form. Meaningful only together with
/// the [`Field`] it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Plain description of a field: characteristic, degree over the base,
/// the monic modulus (low coefficient first, as base-field encodings) and
/// the base description for towers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub characteristic: u32,
    pub degree: u32,
    pub modulus: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<FieldSpec>>,
}

struct Inner {
    spec: FieldSpec,
    p: u32,
    order: u32,
    base: Option<Field>,
    base_order: u32,
    /// `exp[i] = g^i` for `i in 0..2(q-1)`, so products need no reduction.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    neg: Vec<u32>,
    /// Full addition table for small odd-characteristic extensions.
    add: Option<Vec<u32>>,
}

/// A finite field context. Clones share the same tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())?;
        if self.0.base.is_some() {
            write!(f, "[modulus {:?}]", self.0.spec.modulus)?;
        }
        Ok(())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.base {
            None => write!(f, "{}", self.0.p),
            Some(b) if b.is_prime_field() => write!(f, "{}^{}", self.0.p, self.0.spec.degree),
            Some(b) => write!(f, "({b})^{}", self.0.spec.degree),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^r`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut r) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p as u32, r))
}

fn field_cache() -> &'static Mutex<HashMap<(FieldSpec, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(FieldSpec, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if p as u64 > MAX_ORDER {
            return Err(FieldError::TooLarge(p as u64));
        }
        let spec = FieldSpec { characteristic: p, degree: 1, modulus: vec![0, 1], base: None };
        Ok(Field(Arc::new(Self::build_inner(spec, p, p, None))))
    }

    /// `F_{p^r}` with the lexicographically smallest monic irreducible modulus.
    pub fn new(p: u32, r: u32) -> Result<Field, FieldError> {
        Field::prime(p)?.extension(r)
    }

    /// `F_q` for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Field, FieldError> {
        let (p, r) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Field::new(p, r)
    }

    /// Builds a field from an explicit description, verifying that the
    /// modulus is monic and irreducible over its base.
    pub fn from_spec(spec: &FieldSpec) -> Result<Field, FieldError> {
        let base = match &spec.base {
            None => Field::prime(spec.characteristic)?,
            Some(b) => Field::from_spec(b)?,
        };
        if spec.degree == 1 && spec.modulus.len() == 2 && spec.modulus[1] == 1 {
            return Ok(base);
        }
        if base.characteristic() != spec.characteristic {
            return Err(FieldError::SpecMismatch);
        }
        if spec.degree == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let m = spec.degree as usize;
        if spec.modulus.len() != m + 1 || spec.modulus[m] != 1 {
            return Err(FieldError::BadModulus { expected: spec.degree, got: spec.modulus.len() });
        }
        if let Some(&c) = spec.modulus.iter().find(|&&c| c >= base.order()) {
            return Err(FieldError::BadCoefficient(c));
        }
        let modulus: Vec<Elem> = spec.modulus.iter().map(|&c| Elem(c)).collect();
        if !upoly::is_irreducible(&base, &modulus) {
            return Err(FieldError::Reducible);
        }
        Field::over(&base, modulus)
    }

    fn over(base: &Field, modulus: Vec<Elem>) -> Result<Field, FieldError> {
        let m = (modulus.len() - 1) as u32;
        let order = (base.order() as u64).pow(m);
        if order > MAX_ORDER {
            return Err(FieldError::TooLarge(order));
        }
        let spec = FieldSpec {
            characteristic: base.characteristic(),
            degree: m,
            modulus: modulus.iter().map(|e| e.0).collect(),
            base: (!base.is_prime_field()).then(|| Box::new(base.spec().clone())),
        };
        let p = base.characteristic();
        Ok(Field(Arc::new(Self::build_inner(spec, p, order as u32, Some(base.clone())))))
    }

    /// The degree-`m` extension `F_q[y]/(h)` with `h` the lexicographically
    /// smallest monic irreducible of degree `m` over `self`. `m = 1` returns
    /// `self`. Results are cached, so repeated calls share tables.
    pub fn extension(&self, m: u32) -> Result<Field, FieldError> {
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let order = (self.order() as u64).checked_pow(m).unwrap_or(u64::MAX);
        if order > MAX_ORDER {
            return Err(FieldError::TooLarge(order));
        }
        let key = (self.spec().clone(), m);
        if let Some(f) = field_cache().lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let modulus = upoly::smallest_irreducible(self, m as usize);
        let f = Field::over(self, modulus)?;
        field_cache().lock().unwrap().insert(key, f.clone());
        Ok(f)
    }

    fn build_inner(spec: FieldSpec, p: u32, order: u32, base: Option<Field>) -> Inner {
        let base_order = base.as_ref().map_or(p, |b| b.order());
        let mut inner =
            Inner { spec, p, order, base, base_order, exp: Vec::new(), log: Vec::new(), neg: Vec::new(), add: None };
        let q = order as usize;
        inner.neg = (0..order).map(|a| Self::neg_ref_inner(&inner, a)).collect();
        if p != 2 && inner.base.is_some() && q <= 729 {
            let mut t = vec![0u32; q * q];
            for a in 0..q {
                for b in 0..q {
                    t[a * q + b] = Self::add_ref_inner(&inner, a as u32, b as u32);
                }
            }
            inner.add = Some(t);
        }
        // log/antilog tables from a primitive element found with the
        // reference multiplication
        let n = q - 1;
        let factors = prime_factors(n as u64);
        let gen = (2..order.max(2))
            .chain(1..2)
            .find(|&g| g < order && factors.iter().all(|&f| Self::pow_ref_inner(&inner, g, n as u64 / f) != 1))
            .unwrap_or(1);
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = Self::mul_ref_inner(&inner, x, gen);
        }
        inner.exp = exp;
        inner.log = log;
        inner
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }
    /// Number of elements `q`.
    pub fn order(&self) -> u32 {
        self.0.order
    }
    /// Degree over the immediate base (the prime field for `F_{p^r}`).
    pub fn degree(&self) -> u32 {
        self.0.spec.degree
    }
    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> u32 {
        self.degree() * self.0.base.as_ref().map_or(1, |b| b.absolute_degree())
    }
    pub fn base(&self) -> Option<&Field> {
        self.0.base.as_ref()
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }
    /// Monic modulus over the base, low coefficient first.
    pub fn modulus(&self) -> Vec<Elem> {
        self.0.spec.modulus.iter().map(|&c| Elem(c)).collect()
    }

    /// True if `sub` is `self` or appears in the tower below it, so that its
    /// elements embed with the same encoding.
    pub fn contains_subfield(&self, sub: &Field) -> bool {
        let mut cur = Some(self);
        while let Some(f) = cur {
            if f == sub {
                return true;
            }
            cur = f.base();
        }
        false
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }
    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The generator `y` of the extension over its base (`g` in literals).
    pub fn generator(&self) -> Elem {
        if self.degree() > 1 {
            Elem(self.0.base_order)
        } else {
            Elem::ONE
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.order
    }

    /// All `q` elements, zero first, in lexicographic coefficient order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.order).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let i = &*self.0;
        if i.p == 2 {
            Elem(a.0 ^ b.0)
        } else if i.base.is_none() {
            let s = a.0 + b.0;
            Elem(if s >= i.p { s - i.p } else { s })
        } else if let Some(t) = &i.add {
            Elem(t[(a.0 * i.order + b.0) as usize])
        } else {
            Elem(Self::add_ref_inner(i, a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let i = &*self.0;
        if i.base.is_none() {
            return Elem(((a.0 as u64 * b.0 as u64) % i.p as u64) as u32);
        }
        Elem(i.exp[(i.log[a.0 as usize] + i.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let i = &*self.0;
        let n = i.order - 1;
        Ok(Elem(i.exp[((n - i.log[a.0 as usize]) % n.max(1)) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let i = &*self.0;
        let n = (i.order - 1) as u64;
        Elem(i.exp[((i.log[a.0 as usize] as u64 * (e % n)) % n) as usize])
    }

    /// Coefficient vector over the base field, low degree first.
    pub fn coefficients(&self, a: Elem) -> Vec<Elem> {
        let b = self.0.base_order;
        let mut v = Vec::with_capacity(self.degree() as usize);
        let mut x = a.0;
        for _ in 0..self.degree() {
            v.push(Elem(x % b));
            x /= b;
        }
        v
    }

    pub fn from_coefficients(&self, coeffs: &[Elem]) -> Elem {
        let b = self.0.base_order;
        Elem(coeffs.iter().rev().fold(0u32, |acc, c| acc * b + c.0))
    }

    // ---- reference arithmetic on coefficient vectors ----

    fn add_ref_inner(i: &Inner, a: u32, b: u32) -> u32 {
        let Some(base) = &i.base else {
            return (a + b) % i.p;
        };
        let bo = i.base_order;
        let (mut x, mut y, mut out, mut scale) = (a, b, 0u32, 1u32);
        for _ in 0..i.spec.degree {
            out += base.add(Elem(x % bo), Elem(y % bo)).0 * scale;
            x /= bo;
            y /= bo;
            scale = scale.wrapping_mul(bo);
        }
        out
    }

    fn neg_ref_inner(i: &Inner, a: u32) -> u32 {
        let Some(base) = &i.base else {
            return (i.p - a % i.p) % i.p;
        };
        let bo = i.base_order;
        let (mut x, mut out, mut scale) = (a, 0u32, 1u32);
        for _ in 0..i.spec.degree {
            out += base.neg(Elem(x % bo)).0 * scale;
            x /= bo;
            scale = scale.wrapping_mul(bo);
        }
        out
    }

    fn mul_ref_inner(i: &Inner, a: u32, b: u32) -> u32 {
        let Some(base) = &i.base else {
            return ((a as u64 * b as u64) % i.p as u64) as u32;
        };
        let bo = i.base_order;
        let m = i.spec.degree as usize;
        let digits = |mut x: u32| {
            let mut v = vec![Elem::ZERO; m];
            for d in v.iter_mut() {
                *d = Elem(x % bo);
                x /= bo;
            }
            v
        };
        let (da, db) = (digits(a), digits(b));
        let mut prod = vec![Elem::ZERO; 2 * m - 1];
        for (s, &x) in da.iter().enumerate() {
            for (t, &y) in db.iter().enumerate() {
                prod[s + t] = base.add(prod[s + t], base.mul(x, y));
            }
        }
        let modulus: Vec<Elem> = i.spec.modulus.iter().map(|&c| Elem(c)).collect();
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c.is_zero() {
                continue;
            }
            for (j, &mc) in modulus.iter().enumerate().take(m) {
                prod[k - m + j] = base.sub(prod[k - m + j], base.mul(c, mc));
            }
            prod[k] = Elem::ZERO;
        }
        prod[..m].iter().rev().fold(0u32, |acc, c| acc * bo + c.0)
    }

    fn pow_ref_inner(i: &Inner, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mul_ref_inner(i, acc, base);
            }
            base = Self::mul_ref_inner(i, base, base);
            e >>= 1;
        }
        acc
    }

    /// Coefficientwise sum, bypassing the tables.
    pub fn add_reference(&self, a: Elem, b: Elem) -> Elem {
        Elem(Self::add_ref_inner(&self.0, a.0, b.0))
    }

    /// Schoolbook product reduced by the modulus, bypassing the tables.
    pub fn mul_reference(&self, a: Elem, b: Elem) -> Elem {
        Elem(Self::mul_ref_inner(&self.0, a.0, b.0))
    }

    // ---- literals ----

    /// Formats an element: decimal for prime fields, a polynomial in `g`
    /// over prime-field coefficients otherwise; tower coefficients are
    /// parenthesized and the tower generator is `h`.
    pub fn format(&self, a: Elem) -> String {
        let Some(base) = self.base() else {
            return a.0.to_string();
        };
        if a.is_zero() {
            return "0".into();
        }
        let var = if base.is_prime_field() { "g" } else { "h" };
        let mut parts = Vec::new();
        for (k, c) in self.coefficients(a).into_iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = base.format(c);
            let coef = if base.is_prime_field() { cs } else { format!("({cs})") };
            parts.push(match (k, c == Elem::ONE) {
                (0, _) => coef,
                (1, true) => var.to_string(),
                (1, false) => format!("{coef}*{var}"),
                (_, true) => format!("{var}^{k}"),
                (_, false) => format!("{coef}*{var}^{k}"),
            });
        }
        parts.join("+")
    }

    /// Parses an element literal (see [`Field::format`]; towers excluded).
    pub fn parse_elem(&self, s: &str) -> Result<Elem, FieldError> {
        let bad = || FieldError::BadLiteral(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(&t).to_string();
        if t.is_empty() {
            return Err(bad());
        }
        let Some(base) = self.base() else {
            let v: i64 = t.parse().map_err(|_| bad())?;
            return Ok(self.from_int(v));
        };
        if !base.is_prime_field() {
            return Err(bad());
        }
        let mut coeffs = vec![Elem::ZERO; self.degree() as usize];
        for term in t.split('+') {
            let (c, rest) = match term.split_once('*') {
                Some((c, r)) => (base.from_int(c.parse::<i64>().map_err(|_| bad())?), r),
                None if term.starts_with('g') => (Elem::ONE, term),
                None => (base.from_int(term.parse::<i64>().map_err(|_| bad())?), ""),
            };
            let k = match rest {
                "" => 0,
                "g" => 1,
                r => r.strip_prefix("g^").and_then(|e| e.parse::<usize>().ok()).ok_or_else(bad)?,
            };
            // reduce g^k for k >= degree via the field itself
            let gk = self.pow(self.generator(), k as u64);
            let add = self.mul(c, gk);
            let cur = self.from_coefficients(&coeffs);
            coeffs = self.coefficients(self.add(cur, add));
        }
        Ok(self.from_coefficients(&coeffs))
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// Accepts `p`, `q` (a prime power) or `p^r`.
    fn from_str(s: &str) -> Result<Field, FieldError> {
        let bad = || FieldError::BadFieldSyntax(s.to_string());
        let s = s.trim();
        if let Some((p, r)) = s.split_once('^') {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let r: u32 = r.trim().parse().map_err(|_| bad())?;
            return Field::new(p, r);
        }
        let q: u64 = s.parse().map_err(|_| bad())?;
        Field::with_order(q)
    }
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

/// A self-describing element carrying its field; binary operations check
/// that both operands share a field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.field.format(self.value), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Self {
        assert!(field.contains(value), "element out of range");
        FieldElement { field: field.clone(), value }
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn value(&self) -> Elem {
        self.value
    }
    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }
    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(FieldElement::new(&self.field, self.field.add(self.value, other.value)))
    }
    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(FieldElement::new(&self.field, self.field.sub(self.value, other.value)))
    }
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(FieldElement::new(&self.field, self.field.mul(self.value, other.value)))
    }
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(FieldElement::new(&self.field, self.field.inv(self.value)?))
    }
    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement::new(&self.field, self.field.pow(self.value, e))
    }
}

/// Dense univariate polynomials over a field, low coefficient first. Only
/// what modulus selection needs.
pub(crate) mod upoly {
    use super::{Elem, Field};

    fn trim(v: &mut Vec<Elem>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }

    /// Remainder of `a` modulo monic `b`.
    pub fn rem(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        while r.len() > db {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - db;
            for (j, &c) in b.iter().enumerate() {
                r[shift + j] = f.sub(r[shift + j], f.mul(lead, c));
            }
            trim(&mut r);
        }
        r
    }

    /// Monic polynomials of degree `deg` in lexicographic order of their
    /// coefficient vectors (highest non-leading coefficient most significant).
    pub fn monics(f: &Field, deg: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
        let q = f.order() as u64;
        let count = q.pow(deg as u32);
        (0..count).map(move |mut idx| {
            let mut v = vec![Elem::ZERO; deg + 1];
            for c in v.iter_mut().take(deg) {
                *c = Elem((idx % q) as u32);
                idx /= q;
            }
            v[deg] = Elem::ONE;
            v
        })
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(f: &Field, h: &[Elem]) -> bool {
        let deg = h.len() - 1;
        if deg == 0 {
            return false;
        }
        (1..=deg / 2).all(|k| monics(f, k).all(|d| !rem(f, h, &d).is_empty()))
    }

    pub fn smallest_irreducible(f: &Field, deg: usize) -> Vec<Elem> {
        monics(f, deg).find(|h| is_irreducible(f, h)).expect("irreducible polynomials exist in every degree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn small_field_examples() {
        let f2 = f(2);
        assert_eq!(f2.add(Elem(1), Elem(1)), Elem(0));
        assert_eq!(f2.mul(Elem(1), Elem(1)), Elem(1));
        assert_eq!(f2.inv(Elem(1)).unwrap(), Elem(1));
        let f3 = f(3);
        assert_eq!(f3.add(Elem(2), Elem(2)), Elem(1));
        assert_eq!(f(5).inv(Elem(2)).unwrap(), Elem(3));

        let f4 = f(4);
        let y = f4.generator();
        let y1 = f4.add(y, Elem::ONE);
        assert_eq!(f4.add(y, y1), Elem::ONE);
        assert_eq!(f4.mul(y, y1), Elem::ONE);
        assert_eq!(f4.inv(y).unwrap(), y1);
        assert_eq!(f4.pow(y, 3), Elem::ONE);
        assert_eq!(f4.pow(y, 4), y);
        assert_eq!(f4.pow(y, 0), Elem::ONE);
        assert_eq!(f4.pow(Elem::ZERO, 0), Elem::ONE);
        assert_eq!(f4.format(y1), "g+1");
        assert_eq!(f4.elements().map(|e| f4.format(e)).collect::<Vec<_>>(), ["0", "1", "g", "g+1"]);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(f(4).inv(Elem::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn extension_moduli() {
        let f2 = f(2);
        assert_eq!(f2.extension(1).unwrap(), f2);
        // y^2+y+1 and y^3+y+1, low coefficient first
        assert_eq!(f2.extension(2).unwrap().spec().modulus, vec![1, 1, 1]);
        assert_eq!(f2.extension(3).unwrap().spec().modulus, vec![1, 1, 0, 1]);
        assert_eq!(f2.extension(3).unwrap(), f2.extension(3).unwrap());
    }

    #[test]
    fn from_spec_rejects_reducible_modulus() {
        let spec = FieldSpec { characteristic: 2, degree: 2, modulus: vec![1, 0, 1], base: None };
        assert_eq!(Field::from_spec(&spec), Err(FieldError::Reducible));
        let spec = FieldSpec { characteristic: 2, degree: 2, modulus: vec![1, 1, 1], base: None };
        assert_eq!(Field::from_spec(&spec).unwrap(), f(4));
        let spec = FieldSpec { characteristic: 4, degree: 1, modulus: vec![0, 1], base: None };
        assert_eq!(Field::from_spec(&spec), Err(FieldError::NotPrime(4)));
    }

    #[test]
    fn spec_mismatch_is_reported() {
        let a = FieldElement::new(&f(2), Elem(1));
        let b = FieldElement::new(&f(3), Elem(1));
        assert_eq!(a.add(&b), Err(FieldError::SpecMismatch));
        assert_eq!(a.mul(&b), Err(FieldError::SpecMismatch));
        let c = FieldElement::new(&f(4), Elem(2));
        assert_eq!(c.mul(&c.inv().unwrap()).unwrap().value(), Elem::ONE);
    }

    #[test]
    fn field_syntax() {
        assert_eq!("2^2".parse::<Field>().unwrap(), f(4));
        assert_eq!("9".parse::<Field>().unwrap().order(), 9);
        assert!("6".parse::<Field>().is_err());
        assert!("x".parse::<Field>().is_err());
        assert_eq!(f(4).to_string(), "2^2");
    }

    #[test]
    fn literals_round_trip() {
        for q in [2, 3, 4, 8, 9, 25] {
            let k = f(q);
            for a in k.elements() {
                assert_eq!(k.parse_elem(&k.format(a)).unwrap(), a, "q={q}");
            }
        }
        let f8 = f(8);
        assert_eq!(f8.parse_elem("g^3").unwrap(), f8.parse_elem("g+1").unwrap());
        assert!(f8.parse_elem("g^").is_err());
    }

    fn all_fields() -> Vec<Field> {
        let mut v: Vec<Field> = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27].into_iter().map(f).collect();
        v.push(f(4).extension(2).unwrap());
        v.push(f(9).extension(2).unwrap());
        v.push(f(4).extension(3).unwrap());
        v
    }

    #[test]
    fn tables_agree_with_reference_arithmetic() {
        for k in all_fields() {
            for a in k.elements() {
                for b in k.elements().step_by(1 + k.order() as usize / 40) {
                    assert_eq!(k.add(a, b), k.add_reference(a, b), "{k:?}");
                    assert_eq!(k.mul(a, b), k.mul_reference(a, b), "{k:?}");
                }
            }
        }
    }

    #[test]
    fn axioms_exhaustive_small() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let k = f(q);
            for a in k.elements() {
                assert_eq!(k.pow(a, q), a);
                if !a.is_zero() {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), Elem::ONE);
                }
                assert_eq!(k.add(a, k.neg(a)), Elem::ZERO);
                for b in k.elements() {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    let p = k.characteristic() as u64;
                    assert_eq!(k.pow(k.add(a, b), p), k.add(k.pow(a, p), k.pow(b, p)));
                    for c in k.elements() {
                        assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
                        assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn tower_embeds_base() {
        let f4 = f(4);
        let f16 = f4.extension(2).unwrap();
        assert!(f16.contains_subfield(&f4));
        assert!(f16.contains_subfield(&f(2)));
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(f16.mul(a, b), f4.mul(a, b));
                assert_eq!(f16.add(a, b), f4.add(a, b));
            }
        }
        assert_eq!(f16.order(), 16);
        assert_eq!(f16.absolute_degree(), 4);
    }
}
