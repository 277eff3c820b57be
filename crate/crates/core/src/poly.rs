//! Sparse multivariate polynomials over a finite field.
//!
//! Terms are kept sorted in descending graded reverse-lexicographic order
//! with no zero coefficients, so equality is structural and the leading
//! term is `terms()[0]`.
//!
//! Text grammar: terms joined by `+` (or `-`); a term is
//! `[coeff*]var[^exp](*var[^exp])*` with variables `x0..x9`, and
//! coefficients in the field literal syntax (parenthesize compound
//! extension-field coefficients, e.g. `(g+1)*x0*x1`). Whitespace is ignored.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::field::{Elem, Field, FieldError};
use crate::linalg::{self, Matrix};
use crate::monomial::{Monomial, MAX_VARS};
use crate::projgeom::{self, LinearSubspace, ProjError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("at most {MAX_VARS} variables are supported")]
    TooManyVariables,
    #[error("syntax error in polynomial: {0}")]
    Syntax(String),
    #[error("polynomial has a nonzero x0^d term, so (1:0:...:0) is not on it")]
    VertexNotOnHypersurface,
    #[error("matrix is not invertible")]
    Singular,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("polynomials live over different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: Vec<(Monomial, Elem)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms && self.field == other.field
    }
}
impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{} vars over {}]({})", self.nvars, self.field, self)
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, nvars: usize) -> MultiPoly {
        assert!(nvars <= MAX_VARS);
        MultiPoly { field: field.clone(), nvars, terms: Vec::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: Elem) -> MultiPoly {
        Self::monomial(field, nvars, Monomial::ONE, c)
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> MultiPoly {
        assert!(i < nvars);
        Self::monomial(field, nvars, Monomial::var(i), Elem::ONE)
    }

    pub fn monomial(field: &Field, nvars: usize, m: Monomial, c: Elem) -> MultiPoly {
        assert!(nvars <= MAX_VARS && m.support_len() <= nvars);
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        MultiPoly { field: field.clone(), nvars, terms }
    }

    /// Builds a polynomial from arbitrary terms, combining repeats.
    pub fn from_terms(field: &Field, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> MultiPoly {
        assert!(nvars <= MAX_VARS);
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (m, c) in terms {
            assert!(m.support_len() <= nvars, "monomial {m} uses more than {nvars} variables");
            let e = acc.entry(m).or_insert(Elem::ZERO);
            *e = field.add(*e, c);
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MultiPoly { field: field.clone(), nvars, terms }
    }

    /// Takes already sorted (descending), zero-free terms.
    pub(crate) fn from_sorted(field: &Field, nvars: usize, terms: Vec<(Monomial, Elem)>) -> MultiPoly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        MultiPoly { field: field.clone(), nvars, terms }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn terms(&self) -> &[(Monomial, Elem)] {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn leading_term(&self) -> Option<(Monomial, Elem)> {
        self.terms.first().copied()
    }

    /// Total degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn coefficient(&self, m: Monomial) -> Elem {
        self.terms.iter().find(|t| t.0 == m).map_or(Elem::ZERO, |t| t.1)
    }

    /// True if variable `i` occurs in some term.
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|t| t.0.exponent(i) > 0)
    }

    /// Reinterprets the coefficients in an extension field.
    pub fn lift(&self, ext: &Field) -> Result<MultiPoly, PolyError> {
        if !ext.contains_subfield(&self.field) {
            return Err(PolyError::FieldMismatch);
        }
        Ok(MultiPoly { field: ext.clone(), nvars: self.nvars, terms: self.terms.clone() })
    }

    /// Same terms viewed in more variables.
    pub fn with_nvars(&self, nvars: usize) -> MultiPoly {
        assert!(nvars <= MAX_VARS && self.terms.iter().all(|t| t.0.support_len() <= nvars));
        MultiPoly { field: self.field.clone(), nvars, terms: self.terms.clone() }
    }

    fn check_compat(&self, other: &MultiPoly) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert!(self.field == other.field, "field mismatch");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check_compat(other);
        let f = &self.field;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(a[i].1, b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        MultiPoly::from_sorted(f, self.nvars, out)
    }

    pub fn neg(&self) -> MultiPoly {
        let f = &self.field;
        let terms = self.terms.iter().map(|&(m, c)| (m, f.neg(c))).collect();
        MultiPoly::from_sorted(f, self.nvars, terms)
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        let terms = self.terms.iter().map(|&(m, x)| (m, f.mul(x, c))).collect();
        MultiPoly::from_sorted(f, self.nvars, terms)
    }

    pub fn mul_term(&self, m: Monomial, c: Elem) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        let terms = self.terms.iter().map(|&(t, x)| (t.mul(m), f.mul(x, c))).collect();
        MultiPoly::from_sorted(f, self.nvars, terms)
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check_compat(other);
        let f = &self.field;
        let mut acc: HashMap<Monomial, Elem> = HashMap::with_capacity(self.len() * other.len());
        for &(m1, c1) in &self.terms {
            for &(m2, c2) in &other.terms {
                let e = acc.entry(m1.mul(m2)).or_insert(Elem::ZERO);
                *e = f.add(*e, f.mul(c1, c2));
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MultiPoly::from_sorted(f, self.nvars, terms)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(&self.field, self.nvars, Elem::ONE);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Makes the leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) if c != Elem::ONE => self.scale(self.field.inv(c).expect("nonzero")),
            _ => self.clone(),
        }
    }

    pub fn evaluate(&self, point: &[Elem]) -> Result<Elem, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::Arity { expected: self.nvars, got: point.len() });
        }
        Ok(eval_terms(&self.field, &self.terms, point))
    }

    /// Evaluates at a point whose coordinates live in an extension field.
    pub fn evaluate_in(&self, ext: &Field, point: &[Elem]) -> Result<Elem, PolyError> {
        if !ext.contains_subfield(&self.field) {
            return Err(PolyError::FieldMismatch);
        }
        if point.len() != self.nvars {
            return Err(PolyError::Arity { expected: self.nvars, got: point.len() });
        }
        Ok(eval_terms(ext, &self.terms, point))
    }

    /// Formal partial derivative; coefficients are reduced in characteristic
    /// `p`, so exponents divisible by `p` annihilate their term.
    pub fn derivative(&self, i: usize) -> MultiPoly {
        assert!(i < self.nvars);
        let f = &self.field;
        let terms = self.terms.iter().filter_map(|&(m, c)| {
            let e = m.exponent(i);
            if e == 0 {
                return None;
            }
            let c = f.mul(c, f.from_int(e as i64));
            (!c.is_zero()).then(|| (Monomial::var(i).quotient_of(m), c))
        });
        MultiPoly::from_terms(f, self.nvars, terms)
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Substitutes `x_i = sum_j forms[i][j] y_j` for every variable,
    /// producing a polynomial in `forms[i].len()` new variables.
    pub fn substitute_linear(&self, forms: &[Vec<Elem>]) -> Result<MultiPoly, PolyError> {
        if forms.len() != self.nvars {
            return Err(PolyError::Arity { expected: self.nvars, got: forms.len() });
        }
        let new_n = forms.first().map_or(0, |r| r.len());
        if new_n > MAX_VARS {
            return Err(PolyError::TooManyVariables);
        }
        let f = &self.field;
        let linear: Vec<MultiPoly> = forms
            .iter()
            .map(|row| MultiPoly::from_terms(f, new_n, row.iter().enumerate().map(|(j, &c)| (Monomial::var(j), c))))
            .collect();
        let mut powers: Vec<Vec<MultiPoly>> =
            linear.iter().map(|_| vec![MultiPoly::constant(f, new_n, Elem::ONE)]).collect();
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for &(m, c) in &self.terms {
            let mut prod = MultiPoly::constant(f, new_n, c);
            for i in 0..self.nvars {
                let e = m.exponent(i) as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&linear[i]);
                    powers[i].push(next);
                }
                prod = prod.mul(&powers[i][e]);
            }
            for &(pm, pc) in &prod.terms {
                let e = acc.entry(pm).or_insert(Elem::ZERO);
                *e = f.add(*e, pc);
            }
        }
        Ok(MultiPoly::from_terms(f, new_n, acc))
    }

    /// `F o T`, i.e. `x -> F(T x)`.
    pub fn apply_projectivity(&self, t: &Projectivity) -> Result<MultiPoly, PolyError> {
        if t.dim() != self.nvars {
            return Err(PolyError::DimensionMismatch);
        }
        self.substitute_linear(&t.matrix)
    }

    /// Composes with the parametrization `y -> sum_j y_j b_j` by the given
    /// basis vectors (in the given order).
    pub fn restrict_to_basis(&self, basis: &[Vec<Elem>]) -> Result<MultiPoly, PolyError> {
        if basis.iter().any(|b| b.len() != self.nvars) {
            return Err(PolyError::DimensionMismatch);
        }
        let forms: Matrix = (0..self.nvars).map(|i| basis.iter().map(|b| b[i]).collect()).collect();
        self.substitute_linear(&forms)
    }

    /// Restriction to a subspace through its echelon basis. The result has
    /// `dim S + 1` variables and is zero exactly when `S` lies in `V(F)`.
    pub fn restrict_to_subspace(&self, s: &LinearSubspace) -> Result<MultiPoly, PolyError> {
        if s.ambient_dim() + 1 != self.nvars {
            return Err(PolyError::DimensionMismatch);
        }
        self.restrict_to_basis(s.rows())
    }

    /// Splits a form with no `x0^d` term as `sum_j x0^(d-j) F_j` with `F_j`
    /// homogeneous of degree `j` in `x1..x_m`. Entry `j` of the result is
    /// `F_j` (in `nvars - 1` variables), for `j = 0..=d`.
    pub fn x0_decomposition(&self) -> Result<Vec<MultiPoly>, PolyError> {
        if !self.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        let Some(d) = self.degree() else {
            return Ok(vec![MultiPoly::zero(&self.field, self.nvars - 1)]);
        };
        let mut comps: Vec<Vec<(Monomial, Elem)>> = vec![Vec::new(); d as usize + 1];
        for &(m, c) in &self.terms {
            let (rest, e0) = m.remove_var(0);
            comps[(d - e0) as usize].push((rest, c));
        }
        if !comps[0].is_empty() {
            return Err(PolyError::VertexNotOnHypersurface);
        }
        Ok(comps.into_iter().map(|t| MultiPoly::from_terms(&self.field, self.nvars - 1, t)).collect())
    }

    /// Inverse of [`MultiPoly::x0_decomposition`].
    pub fn from_x0_components(comps: &[MultiPoly]) -> MultiPoly {
        let d = comps.len() as u32 - 1;
        let field = comps[0].field.clone();
        let nvars = comps[0].nvars + 1;
        MultiPoly::from_terms(
            &field,
            nvars,
            comps
                .iter()
                .enumerate()
                .flat_map(|(j, fj)| fj.terms.iter().map(move |&(m, c)| (m.insert_var(0, d - j as u32), c))),
        )
    }

    /// Exact quotient by a linear form, or `None` if it does not divide.
    pub fn divide_by_linear(&self, form: &[Elem]) -> Option<MultiPoly> {
        assert_eq!(form.len(), self.nvars);
        let f = &self.field;
        let k = form.iter().position(|c| !c.is_zero())?;
        // L = a_k (x_k + M) with M free of x_k
        let inv = f.inv(form[k]).ok()?;
        let rest: Vec<(usize, Elem)> = form
            .iter()
            .enumerate()
            .filter(|&(j, c)| j != k && !c.is_zero())
            .map(|(j, &c)| (j, f.mul(c, inv)))
            .collect();
        let mpoly = MultiPoly::from_terms(f, self.nvars, rest.iter().map(|&(j, c)| (Monomial::var(j), c)));
        // coefficients of x_k^e, as polynomials free of x_k
        let top = self.terms.iter().map(|t| t.0.exponent(k)).max().unwrap_or(0) as usize;
        let mut coeffs: Vec<Vec<(Monomial, Elem)>> = vec![Vec::new(); top + 1];
        for &(m, c) in &self.terms {
            let e = m.exponent(k);
            let stripped = if e > 0 { Monomial::var_pow(k, e).quotient_of(m) } else { m };
            coeffs[e as usize].push((stripped, c));
        }
        let coeffs: Vec<MultiPoly> = coeffs.into_iter().map(|t| MultiPoly::from_terms(f, self.nvars, t)).collect();
        if top == 0 {
            return self.is_zero().then(|| self.clone());
        }
        // synthetic division by (x_k + M)
        let mut q = vec![MultiPoly::zero(f, self.nvars); top];
        q[top - 1] = coeffs[top].clone();
        for e in (1..top).rev() {
            q[e - 1] = coeffs[e].sub(&mpoly.mul(&q[e]));
        }
        let remainder = coeffs[0].sub(&mpoly.mul(&q[0]));
        if !remainder.is_zero() {
            return None;
        }
        let mut out = MultiPoly::zero(f, self.nvars);
        for (e, qe) in q.iter().enumerate() {
            out = out.add(&qe.mul_term(Monomial::var_pow(k, e as u32), inv));
        }
        Some(out)
    }

    /// Pulls out every `F_q`-rational linear factor by trial division
    /// against the normalized linear forms (points of the dual space).
    /// Factors are returned with multiplicity, normalized so their first
    /// nonzero coefficient is 1; `product(factors) * remainder == self`.
    pub fn linear_factor_split(&self) -> LinearSplit {
        let mut rem = self.clone();
        let mut factors = Vec::new();
        if self.is_zero() || self.nvars == 0 {
            return LinearSplit { factors, remainder: rem };
        }
        for form in projgeom::points(&self.field, self.nvars - 1) {
            loop {
                if rem.degree().unwrap_or(0) == 0 {
                    break;
                }
                match rem.divide_by_linear(form.coords()) {
                    Some(q) => {
                        factors.push(form.coords().to_vec());
                        rem = q;
                    }
                    None => break,
                }
            }
        }
        LinearSplit { factors, remainder: rem }
    }

    /// Parses polynomial text; the variable count is `nvars` or, if `None`,
    /// one more than the highest variable index used.
    pub fn parse(field: &Field, text: &str, nvars: Option<usize>) -> Result<MultiPoly, PolyError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(PolyError::Syntax("empty input".into()));
        }
        let mut terms = Vec::new();
        let mut max_var = 0usize;
        for (neg, term) in split_terms(&s)? {
            let (m, mut c) = parse_term(field, term, &mut max_var)?;
            if neg {
                c = field.neg(c);
            }
            terms.push((m, c));
        }
        let n = nvars.unwrap_or(max_var);
        if n > MAX_VARS {
            return Err(PolyError::TooManyVariables);
        }
        if max_var > n {
            return Err(PolyError::Syntax(format!("variable x{} out of range for {n} variables", max_var - 1)));
        }
        Ok(MultiPoly::from_terms(field, n, terms))
    }

    /// Parses and requires a homogeneous result.
    pub fn parse_homogeneous(field: &Field, text: &str, nvars: Option<usize>) -> Result<MultiPoly, PolyError> {
        let p = MultiPoly::parse(field, text, nvars)?;
        if !p.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        Ok(p)
    }
}

fn eval_terms(field: &Field, terms: &[(Monomial, Elem)], point: &[Elem]) -> Elem {
    let mut acc = Elem::ZERO;
    for &(m, c) in terms {
        let mut v = c;
        for (i, &x) in point.iter().enumerate() {
            let e = m.exponent(i);
            if e > 0 {
                v = field.mul(v, field.pow(x, e as u64));
                if v.is_zero() {
                    break;
                }
            }
        }
        acc = field.add(acc, v);
    }
    acc
}

/// Result of [`MultiPoly::linear_factor_split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSplit {
    pub factors: Vec<Vec<Elem>>,
    pub remainder: MultiPoly,
}

impl LinearSplit {
    /// True if the polynomial is a product of rational linear forms.
    pub fn is_complete(&self) -> bool {
        self.remainder.degree() == Some(0)
    }

    /// The distinct factors.
    pub fn distinct_factors(&self) -> Vec<Vec<Elem>> {
        let mut v = self.factors.clone();
        v.dedup();
        v
    }
}

fn split_terms(s: &str) -> Result<Vec<(bool, &str)>, PolyError> {
    let mut out = Vec::new();
    let (mut depth, mut start, mut neg) = (0i32, 0usize, false);
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                if i > start {
                    out.push((neg, &s[start..i]));
                } else if i > 0 {
                    return Err(PolyError::Syntax(format!("empty term at {i}")));
                }
                neg = b == b'-';
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(PolyError::Syntax("unbalanced parentheses".into()));
        }
    }
    if depth != 0 {
        return Err(PolyError::Syntax("unbalanced parentheses".into()));
    }
    if start >= s.len() {
        return Err(PolyError::Syntax("dangling operator".into()));
    }
    out.push((neg, &s[start..]));
    Ok(out)
}

fn parse_term(field: &Field, term: &str, max_var: &mut usize) -> Result<(Monomial, Elem), PolyError> {
    let mut exps = [0u32; MAX_VARS];
    let mut coeff = Elem::ONE;
    let mut depth = 0i32;
    let mut factors = Vec::new();
    let mut start = 0;
    for (i, b) in term.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => {
                factors.push(&term[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    factors.push(&term[start..]);
    for fac in factors {
        if fac.is_empty() {
            return Err(PolyError::Syntax(format!("empty factor in {term:?}")));
        }
        if let Some(rest) = fac.strip_prefix('x') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => {
                    (i, e.parse::<u32>().map_err(|_| PolyError::Syntax(format!("bad exponent in {fac:?}")))?)
                }
                None => (rest, 1),
            };
            let idx: usize = idx.parse().map_err(|_| PolyError::Syntax(format!("bad variable {fac:?}")))?;
            if idx >= MAX_VARS {
                return Err(PolyError::TooManyVariables);
            }
            exps[idx] += exp;
            *max_var = (*max_var).max(idx + 1);
        } else {
            let c = field.parse_elem(fac).map_err(|_| PolyError::Syntax(format!("bad coefficient {fac:?}")))?;
            coeff = field.mul(coeff, c);
        }
    }
    if exps.iter().any(|&e| e >= 128) || exps.iter().sum::<u32>() >= 128 {
        return Err(PolyError::Syntax("degree too large".into()));
    }
    Ok((Monomial::from_exponents(&exps), coeff))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let cs = self.field.format(c);
            let compound = cs.contains('+');
            match (m.degree(), c == Elem::ONE) {
                (0, _) if compound => write!(f, "({cs})")?,
                (0, _) => f.write_str(&cs)?,
                (_, true) => write!(f, "{m}")?,
                (_, false) if compound => write!(f, "({cs})*{m}")?,
                (_, false) => write!(f, "{cs}*{m}")?,
            }
        }
        Ok(())
    }
}

/// An invertible linear change of coordinates of `P^N`, acting on
/// polynomials by `F -> F(T x)`. Column `j` of `T` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectivity {
    field: Field,
    matrix: Matrix,
    inverse: Matrix,
}

impl Projectivity {
    pub fn new(field: &Field, matrix: Matrix) -> Result<Projectivity, PolyError> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(PolyError::DimensionMismatch);
        }
        let inverse = linalg::inverse(field, &matrix).ok_or(PolyError::Singular)?;
        Ok(Projectivity { field: field.clone(), matrix, inverse })
    }

    pub fn identity(field: &Field, n: usize) -> Projectivity {
        Projectivity { field: field.clone(), matrix: linalg::identity(n), inverse: linalg::identity(n) }
    }

    /// The projectivity whose columns are the given vectors.
    pub fn from_columns(field: &Field, cols: &[Vec<Elem>]) -> Result<Projectivity, PolyError> {
        let n = cols.len();
        let matrix = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        Projectivity::new(field, matrix)
    }

    /// Swaps two coordinates.
    pub fn swap(field: &Field, n: usize, i: usize, j: usize) -> Projectivity {
        let mut m = linalg::identity(n);
        m.swap(i, j);
        Projectivity::new(field, m).expect("permutation matrices are invertible")
    }

    /// Number of homogeneous coordinates.
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
    pub fn inverse(&self) -> Projectivity {
        Projectivity { field: self.field.clone(), matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    /// Image `T v` of a coordinate vector.
    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        linalg::mat_vec(&self.field, &self.matrix, v)
    }

    /// `T^{-1} v`.
    pub fn apply_inverse(&self, v: &[Elem]) -> Vec<Elem> {
        linalg::mat_vec(&self.field, &self.inverse, v)
    }
}

impl From<ProjError> for PolyError {
    fn from(e: ProjError) -> Self {
        match e {
            ProjError::Field(f) => PolyError::Field(f),
            _ => PolyError::DimensionMismatch,
        }
    }
}
