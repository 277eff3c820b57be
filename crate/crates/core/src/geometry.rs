//! Hypersurfaces `V(F)` in `P^N` and their rational geometry: point
//! counts, singular points, tangent hyperplane sections and cones, lines
//! through a point, the Thas invariant and pencils of planes through a line.

use std::collections::BTreeSet;

use serde_json::json;
use thiserror::Error;

use crate::bitslice::BitTable;
use crate::field::{Elem, Field};
use crate::groebner::{self, GroebnerError, Ideal};
use crate::linalg;
use crate::poly::{MultiPoly, PolyError, Projectivity};
use crate::projgeom::{self, LinearSubspace, ProjError, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("the zero polynomial does not define a hypersurface")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} is below 2")]
    DegreeTooLow(u32),
    #[error("need at least 3 homogeneous coordinates")]
    TooFewVariables,
    #[error("point {0} is not on the hypersurface")]
    NotOnHypersurface(String),
    #[error("point {0} is a singular point of the hypersurface")]
    SingularPoint(String),
    #[error("the line is not contained in the hypersurface")]
    LineNotContained,
    #[error("expected a line, got a subspace of dimension {0}")]
    NotALine(usize),
    #[error("pencil statistics need a threefold in P^4")]
    NotThreefold,
    #[error("expected a nonzero quadratic form in 3 variables")]
    DegenerateConic,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Proj(#[from] ProjError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    poly: MultiPoly,
    degree: u32,
}

impl Hypersurface {
    pub fn new(poly: MultiPoly) -> Result<Hypersurface, GeometryError> {
        let degree = poly.degree().ok_or(GeometryError::ZeroPolynomial)?;
        if !poly.is_homogeneous() {
            return Err(GeometryError::NotHomogeneous);
        }
        if degree < 2 {
            return Err(GeometryError::DegreeTooLow(degree));
        }
        if poly.nvars() < 3 {
            return Err(GeometryError::TooFewVariables);
        }
        Ok(Hypersurface { poly, degree })
    }

    pub fn parse(field: &Field, text: &str, nvars: Option<usize>) -> Result<Hypersurface, GeometryError> {
        Hypersurface::new(MultiPoly::parse_homogeneous(field, text, nvars)?)
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    /// `N`, the dimension of the ambient projective space.
    pub fn ambient_dim(&self) -> usize {
        self.poly.nvars() - 1
    }
    /// `n = N - 1`.
    pub fn dim(&self) -> usize {
        self.poly.nvars() - 2
    }
    pub fn q(&self) -> u64 {
        self.field().order() as u64
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.poly.evaluate(p.coords()).is_ok_and(|v| v.is_zero())
    }

    /// True if the line (or any subspace) lies in the hypersurface.
    pub fn contains_subspace(&self, s: &LinearSubspace) -> Result<bool, GeometryError> {
        Ok(self.poly.restrict_to_subspace(s)?.is_zero())
    }

    fn bit_table(&self, m: u32, degrees: &[u32]) -> Option<std::sync::Arc<BitTable>> {
        let f = self.field();
        if f.characteristic() != 2 || !f.is_prime_field() && f.base().is_some_and(|b| !b.is_prime_field()) {
            return None;
        }
        if self.poly.terms().iter().any(|t| t.1 != Elem::ONE) {
            return None;
        }
        BitTable::get(self.poly.nvars(), f.absolute_degree() * m, degrees)
    }

    /// Rational points over `F_q`, in canonical order.
    pub fn rational_points(&self) -> Vec<ProjPoint> {
        projgeom::points(self.field(), self.ambient_dim()).filter(|p| self.contains(p)).collect()
    }

    /// Number of points over `F_{q^m}`. Uses the bitsliced evaluator when
    /// all coefficients are 1 in characteristic 2.
    pub fn point_count(&self, m: u32) -> u64 {
        assert!(m >= 1);
        if let Some(t) = self.bit_table(m, &[self.degree]) {
            let v = t.poly_values(&self.poly).expect("coefficients checked");
            return t.count_zeros(&v);
        }
        self.point_count_naive(m)
    }

    /// Point count by evaluating at every point of `P^N(F_{q^m})`.
    pub fn point_count_naive(&self, m: u32) -> u64 {
        let ext = self.field().extension(m).expect("extension field");
        projgeom::points(&ext, self.ambient_dim())
            .filter(|p| self.poly.evaluate_in(&ext, p.coords()).unwrap().is_zero())
            .count() as u64
    }

    /// Points over `F_{q^m}` (coordinates in `field().extension(m)`) where
    /// `F` and all partial derivatives vanish.
    pub fn singular_points_over(&self, m: u32) -> Vec<ProjPoint> {
        let ext = self.field().extension(m).expect("extension field");
        let grad = self.poly.gradient();
        projgeom::points(&ext, self.ambient_dim())
            .filter(|p| {
                let c = p.coords();
                self.poly.evaluate_in(&ext, c).unwrap().is_zero()
                    && grad.iter().all(|g| g.evaluate_in(&ext, c).unwrap().is_zero())
            })
            .collect()
    }

    /// Whether a singular point exists over `F_{q^m}`, with the bitsliced
    /// evaluator when possible.
    pub fn has_singular_point_over(&self, m: u32) -> bool {
        let grad = self.poly.gradient();
        let d = self.degree;
        if let Some(t) = self.bit_table(m, &[d, d - 1]) {
            let mut vecs = vec![t.poly_values(&self.poly).unwrap()];
            for g in &grad {
                match t.poly_values(g) {
                    Some(v) => vecs.push(v),
                    None if g.is_zero() => {}
                    None => return !self.singular_points_over(m).is_empty(),
                }
            }
            return (0..t.words()).any(|w| vecs.iter().fold(u64::MAX, |acc, v| acc & t.zero_bits(v, w)) != 0);
        }
        !self.singular_points_over(m).is_empty()
    }

    /// Exact nonsingularity over the algebraic closure, from the Jacobian
    /// ideal `(F, dF/dx0, ..., dF/dxN)`.
    pub fn is_nonsingular(&self) -> Result<bool, GeometryError> {
        Ok(groebner::is_projectively_empty(&Ideal::jacobian(&self.poly)?)?)
    }

    pub fn is_nonsingular_capped(&self, degree_cap: u32) -> Result<bool, GeometryError> {
        Ok(groebner::is_projectively_empty_capped(&Ideal::jacobian(&self.poly)?, degree_cap)?)
    }

    pub fn gradient_at(&self, p: &ProjPoint) -> Vec<Elem> {
        self.poly.gradient().iter().map(|g| g.evaluate(p.coords()).unwrap()).collect()
    }

    fn require_on(&self, p: &ProjPoint) -> Result<(), GeometryError> {
        if p.ambient_dim() != self.ambient_dim() {
            return Err(ProjError::DimensionMismatch(p.ambient_dim(), self.ambient_dim()).into());
        }
        if !self.contains(p) {
            return Err(GeometryError::NotOnHypersurface(p.format(self.field())));
        }
        Ok(())
    }

    /// The tangent hyperplane at a nonsingular rational point.
    pub fn tangent_hyperplane(&self, p: &ProjPoint) -> Result<LinearSubspace, GeometryError> {
        self.require_on(p)?;
        let g = self.gradient_at(p);
        if g.iter().all(|c| c.is_zero()) {
            return Err(GeometryError::SingularPoint(p.format(self.field())));
        }
        Ok(LinearSubspace::hyperplane(self.field(), &g)?)
    }

    /// Coordinate frame `[P, v_1, ..., v_N]`. At a nonsingular point
    /// `v_1..v_{N-1}` span the tangent hyperplane together with `P` and
    /// `v_N` is a coordinate vector off it; at a singular point the `v_i`
    /// are the coordinate vectors other than the leading one of `P`.
    fn frame(&self, p: &ProjPoint) -> (Vec<Vec<Elem>>, bool) {
        let f = self.field();
        let nn = self.poly.nvars();
        let g = self.gradient_at(p);
        let mut cols = vec![p.coords().to_vec()];
        let smooth = g.iter().any(|c| !c.is_zero());
        let candidates: Vec<Vec<Elem>> =
            if smooth { linalg::kernel(f, std::slice::from_ref(&g), nn) } else { linalg::identity(nn) };
        for v in candidates {
            let mut trial = cols.clone();
            trial.push(v.clone());
            if linalg::rank(f, &trial) == trial.len() {
                cols = trial;
            }
        }
        if smooth {
            let i = g.iter().position(|c| !c.is_zero()).unwrap();
            cols.push(linalg::identity(nn).swap_remove(i));
        }
        debug_assert_eq!(cols.len(), nn);
        (cols, smooth)
    }

    /// Section by the tangent hyperplane at a nonsingular rational point,
    /// in coordinates putting `P` at `(1:0:...:0)`.
    pub fn tangent_section(&self, p: &ProjPoint) -> Result<TangentSectionReport, GeometryError> {
        let tangent = self.tangent_hyperplane(p)?;
        let f = self.field();
        let (cols, _) = self.frame(p);
        let nn = self.poly.nvars();
        let frame = Projectivity::from_columns(f, &cols)?;
        let section = self.poly.restrict_to_basis(&cols[..nn - 1])?;
        let components = section.x0_decomposition()?;
        let d = self.degree as usize;
        let order = components.iter().position(|c| !c.is_zero());
        let tangent_cone = order.map_or_else(|| MultiPoly::zero(f, nn - 2), |j| components[j].clone());
        let is_cone = components[..d].iter().all(|c| c.is_zero());
        let cone_base = if is_cone && !components[d].is_zero() {
            Some(Hypersurface { poly: components[d].clone(), degree: self.degree })
        } else {
            None
        };
        Ok(TangentSectionReport {
            point: p.clone(),
            tangent_hyperplane: tangent,
            frame,
            section,
            components,
            order,
            tangent_cone,
            is_cone,
            cone_base,
        })
    }

    /// Tangent sections at every nonsingular rational point.
    pub fn tangent_sections(&self) -> Vec<TangentSectionReport> {
        self.rational_points().iter().filter_map(|p| self.tangent_section(p).ok()).collect()
    }

    /// The rational points whose tangent section is a cone, with reports.
    pub fn cone_points(&self) -> Vec<TangentSectionReport> {
        self.tangent_sections().into_iter().filter(|r| r.is_cone).collect()
    }

    /// The locus of directions of lines through `P` contained in `X`.
    pub fn line_locus(&self, p: &ProjPoint) -> Result<LineLocus, GeometryError> {
        self.require_on(p)?;
        let f = self.field();
        let nn = self.poly.nvars();
        let (cols, smooth) = self.frame(p);
        let basis = if smooth { &cols[..nn - 1] } else { &cols[..] };
        let restricted = self.poly.restrict_to_basis(basis)?;
        let comps = restricted.x0_decomposition()?;
        let generators: Vec<MultiPoly> = comps.into_iter().skip(1).filter(|c| !c.is_zero()).collect();
        let dirs = &basis[1..];
        let mut directions = Vec::new();
        for z in projgeom::points(f, dirs.len() - 1) {
            if generators.iter().all(|g| g.evaluate(z.coords()).unwrap().is_zero()) {
                let mut v = vec![Elem::ZERO; nn];
                for (&c, d) in z.coords().iter().zip(dirs) {
                    for (vi, &di) in v.iter_mut().zip(d) {
                        *vi = f.add(*vi, f.mul(c, di));
                    }
                }
                directions.push(ProjPoint::new(f, v)?);
            }
        }
        Ok(LineLocus { point: p.clone(), in_tangent_frame: smooth, generators, directions })
    }

    /// All rational lines in `X`, sorted.
    pub fn lines_in(&self) -> Vec<LinearSubspace> {
        let f = self.field();
        let mut lines = BTreeSet::new();
        for p in self.rational_points() {
            let locus = self.line_locus(&p).expect("rational point on X");
            for q in &locus.directions {
                lines.insert(projgeom::line_through(f, &p, q).expect("distinct points"));
            }
        }
        lines.into_iter().collect()
    }

    /// Largest `k` with a rational `k`-space inside `X`; `-1` if `X` has
    /// no rational points.
    pub fn thas_invariant(&self) -> i32 {
        self.maximal_subspaces().0
    }

    /// The Thas invariant together with all subspaces of that dimension.
    pub fn maximal_subspaces(&self) -> (i32, Vec<LinearSubspace>) {
        let f = self.field();
        let pts = self.rational_points();
        if pts.is_empty() {
            return (-1, Vec::new());
        }
        let mut current: BTreeSet<LinearSubspace> = self.lines_in().into_iter().collect();
        if current.is_empty() {
            let spaces = pts.into_iter().map(|p| LinearSubspace::span_points(f, &[p]).unwrap()).collect();
            return (0, spaces);
        }
        let mut k = 1;
        loop {
            let mut next = BTreeSet::new();
            for s in &current {
                for t in s.superspaces(f) {
                    if !next.contains(&t) && self.poly.restrict_to_subspace(&t).unwrap().is_zero() {
                        next.insert(t);
                    }
                }
            }
            if next.is_empty() {
                return (k, current.into_iter().collect());
            }
            current = next;
            k += 1;
        }
    }

    /// Plane pencil statistics around a line `l` of a threefold in `P^4`.
    /// `designated` selects the point for `epsilon` (default: first point
    /// of `l`).
    pub fn pencil_stats(
        &self,
        l: &LinearSubspace,
        designated: Option<&ProjPoint>,
    ) -> Result<PencilStats, GeometryError> {
        let f = self.field();
        if self.ambient_dim() != 4 {
            return Err(GeometryError::NotThreefold);
        }
        if l.dim() != 1 {
            return Err(GeometryError::NotALine(l.dim()));
        }
        if !self.contains_subspace(l)? {
            return Err(GeometryError::LineNotContained);
        }
        let d = self.degree as usize;
        let line_points = l.points(f);
        let mut planes = Vec::new();
        let mut omega_counts = vec![0usize; line_points.len()];
        let (mut delta, mut sigma, mut omega) = (0, 0, 0);
        let mut delta_planes = Vec::new();
        for pi in projgeom::planes_containing(f, l)? {
            let r = self.poly.restrict_to_subspace(&pi)?;
            let kind = if r.is_zero() {
                delta += 1;
                delta_planes.push(pi.clone());
                PlaneKind::Contained
            } else {
                let split = r.linear_factor_split();
                if split.factors.len() == d {
                    sigma += 1;
                    let distinct = split.distinct_factors();
                    let concurrent = if distinct.len() == d {
                        let k = linalg::kernel(f, &distinct, 3);
                        (k.len() == 1).then(|| {
                            let v = linalg::mat_vec(f, &transpose(pi.rows()), &k[0]);
                            ProjPoint::new(f, v).expect("nonzero")
                        })
                    } else {
                        None
                    };
                    match concurrent {
                        Some(qpt) => {
                            omega += 1;
                            let i = line_points.iter().position(|x| *x == qpt).expect("concurrency point lies on l");
                            omega_counts[i] += 1;
                            PlaneKind::Concurrent(qpt)
                        }
                        None => PlaneKind::Split,
                    }
                } else {
                    PlaneKind::Other
                }
            };
            planes.push((pi, kind));
        }
        let mut delta_x = Vec::new();
        for x in &line_points {
            delta_x.push(self.line_locus(x)?.directions.len());
        }
        let p = designated.cloned().unwrap_or_else(|| line_points[0].clone());
        if !l.contains(f, &p) {
            return Err(GeometryError::NotOnHypersurface(p.format(f)));
        }
        let mut epsilon = 0;
        for qd in self.line_locus(&p)?.directions {
            let m = projgeom::line_through(f, &p, &qd)?;
            if m != *l && !delta_planes.iter().any(|pl| pl.contains_subspace(f, &m)) {
                epsilon += 1;
            }
        }
        Ok(PencilStats {
            q: self.q(),
            degree: self.degree,
            line: l.clone(),
            planes,
            delta,
            omega,
            sigma,
            line_points,
            omega_by_point: omega_counts,
            delta_x,
            designated: p,
            epsilon,
        })
    }
}

fn transpose(rows: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = rows.first().map_or(0, |r| r.len());
    (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

/// The hyperplane section of `X` by `T_P X`, with `P` moved to
/// `(1:0:...:0)` and the tangent hyperplane to `x_N = 0`.
#[derive(Clone, Debug)]
pub struct TangentSectionReport {
    pub point: ProjPoint,
    pub tangent_hyperplane: LinearSubspace,
    /// Columns: `P`, a completion to a basis of `T_P X`, then a vector off it.
    pub frame: Projectivity,
    /// The section, in `N` variables.
    pub section: MultiPoly,
    /// `F_0, ..., F_d` in `N - 1` variables with `section = sum x0^(d-j) F_j`.
    pub components: Vec<MultiPoly>,
    /// Smallest `j` with `F_j != 0`.
    pub order: Option<usize>,
    pub tangent_cone: MultiPoly,
    pub is_cone: bool,
    /// `V(F_d)` in `P^(N-2)` when the section is a cone.
    pub cone_base: Option<Hypersurface>,
}

impl TangentSectionReport {
    /// True when the tangent cone is the whole section.
    pub fn tangent_cone_is_section(&self) -> bool {
        self.is_cone
    }

    pub fn cone_base_nonsingular(&self) -> Result<bool, GeometryError> {
        match &self.cone_base {
            Some(y) => y.is_nonsingular(),
            None => Ok(false),
        }
    }

    pub fn cone_base_count(&self) -> Option<u64> {
        self.cone_base.as_ref().map(|y| y.point_count(1))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.section.field();
        json!({
            "point": self.point.format(f),
            "tangent_hyperplane": self.tangent_hyperplane.rows().iter()
                .map(|r| r.iter().map(|&c| f.format(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "section": self.section.to_string(),
            "components": self.components.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "order": self.order,
            "tangent_cone": self.tangent_cone.to_string(),
            "is_cone": self.is_cone,
            "cone_base": self.cone_base.as_ref().map(|y| y.poly().to_string()),
            "cone_base_count": self.cone_base_count(),
        })
    }
}

/// Rational lines through a point of `X`, as directions.
#[derive(Clone, Debug)]
pub struct LineLocus {
    pub point: ProjPoint,
    /// Whether the coordinates are those of the tangent hyperplane (the
    /// point is nonsingular) or of a general complement.
    pub in_tangent_frame: bool,
    /// Nonzero components `F_j`, `j >= 1`, whose common zeros are the locus.
    pub generators: Vec<MultiPoly>,
    /// One second point per line, in the ambient space.
    pub directions: Vec<ProjPoint>,
}

impl LineLocus {
    pub fn rational_count(&self) -> usize {
        self.directions.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaneKind {
    /// The plane lies in `X`.
    Contained,
    /// The section is `d` distinct rational lines through this point of `l`.
    Concurrent(ProjPoint),
    /// The section is a product of `d` rational lines otherwise.
    Split,
    Other,
}

#[derive(Clone, Debug)]
pub struct PencilStats {
    pub q: u64,
    pub degree: u32,
    pub line: LinearSubspace,
    pub planes: Vec<(LinearSubspace, PlaneKind)>,
    /// Planes through `l` contained in `X`.
    pub delta: usize,
    /// `|Omega(l)|`.
    pub omega: usize,
    /// `|sigma(l)|`.
    pub sigma: usize,
    pub line_points: Vec<ProjPoint>,
    /// `|Omega_l(Q)|` for each `Q` in `line_points`.
    pub omega_by_point: Vec<usize>,
    /// Number of rational lines of `X` through each point of `l`.
    pub delta_x: Vec<usize>,
    pub designated: ProjPoint,
    /// Lines through `designated` other than `l` and outside the contained planes.
    pub epsilon: usize,
}

impl PencilStats {
    pub fn omega_bound(&self) -> u64 {
        self.q * self.q - 1
    }
    pub fn sigma_bound(&self) -> u64 {
        self.q * self.q + self.q - 2
    }
    pub fn within_omega_bound(&self) -> bool {
        self.omega as u64 <= self.omega_bound()
    }
    pub fn within_sigma_bound(&self) -> bool {
        self.sigma as u64 <= self.sigma_bound()
    }

    pub fn to_json(&self, field: &Field) -> serde_json::Value {
        let kinds: Vec<_> = self
            .planes
            .iter()
            .map(|(pi, k)| {
                let pts: Vec<String> =
                    pi.rows().iter().map(|r| ProjPoint::new(field, r.clone()).unwrap().format(field)).collect();
                let (kind, at) = match k {
                    PlaneKind::Contained => ("contained", None),
                    PlaneKind::Concurrent(p) => ("concurrent", Some(p.format(field))),
                    PlaneKind::Split => ("split", None),
                    PlaneKind::Other => ("other", None),
                };
                json!({ "plane": pts, "kind": kind, "point": at })
            })
            .collect();
        json!({
            "q": self.q,
            "degree": self.degree,
            "line": self.line.rows().iter().map(|r| ProjPoint::new(field, r.clone()).unwrap().format(field)).collect::<Vec<_>>(),
            "delta": self.delta,
            "omega": self.omega,
            "sigma": self.sigma,
            "omega_by_point": self.line_points.iter().zip(&self.omega_by_point)
                .map(|(p, c)| json!({ "point": p.format(field), "count": c })).collect::<Vec<_>>(),
            "delta_x": self.line_points.iter().zip(&self.delta_x)
                .map(|(p, c)| json!({ "point": p.format(field), "lines": c })).collect::<Vec<_>>(),
            "designated": self.designated.format(field),
            "epsilon": self.epsilon,
            "omega_bound": self.omega_bound(),
            "sigma_bound": self.sigma_bound(),
            "within_omega_bound": self.within_omega_bound(),
            "within_sigma_bound": self.within_sigma_bound(),
            "planes": kinds,
        })
    }
}

/// Plane conics up to projective equivalence over `F_q`. An irreducible
/// form without `q + 1` points is a pair of conjugate lines over `F_{q^2}`
/// meeting in the single rational point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicClass {
    SmoothConic,
    PointlessIrreducible,
    DoubleLine,
    RationalLinePair,
}

pub fn classify_conic(f2: &MultiPoly) -> Result<ConicClass, GeometryError> {
    if f2.nvars() != 3 || f2.degree() != Some(2) || !f2.is_homogeneous() {
        return Err(GeometryError::DegenerateConic);
    }
    let split = f2.linear_factor_split();
    match split.factors.len() {
        2 if split.factors[0] == split.factors[1] => Ok(ConicClass::DoubleLine),
        2 => Ok(ConicClass::RationalLinePair),
        _ => {
            let q = f2.field().order() as usize;
            let n = projgeom::points(f2.field(), 2).filter(|p| f2.evaluate(p.coords()).unwrap().is_zero()).count();
            Ok(if n == q + 1 { ConicClass::SmoothConic } else { ConicClass::PointlessIrreducible })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_CUBIC: &str = "x0^2*x1 + x0*x1^2 + x0*x1*x2 + x0*x2^2 + x1*x2^2 + x2^3 + x0*x2*x3 + \
        x2^2*x3 + x0^2*x4 + x0*x1*x4 + x1*x2*x4 + x0*x3*x4 + x2*x3*x4 + x3^2*x4 + x2*x4^2 + x3*x4^2";

    fn hyp(q: u64, s: &str, n: usize) -> Hypersurface {
        Hypersurface::parse(&Field::with_order(q).unwrap(), s, Some(n)).unwrap()
    }

    #[test]
    fn counts() {
        let x = hyp(2, EXAMPLE_CUBIC, 5);
        assert_eq!(x.point_count(1), 27);
        assert_eq!(x.point_count_naive(1), 27);
        assert_eq!(x.rational_points().len(), 27);
        let quad = hyp(2, "x0^2 + x1*x2 + x3*x4", 5);
        assert_eq!(quad.point_count(1), 15);
        let herm = hyp(4, "x0^3 + x1^3 + x2^3 + x3^3 + x4^3", 5);
        assert_eq!(herm.point_count(1), 165);
        assert_eq!(herm.point_count_naive(1), 165);
        for m in 1..=3 {
            assert_eq!(x.point_count(m), x.point_count_naive(m));
        }
    }

    #[test]
    fn singularity() {
        let x = hyp(2, EXAMPLE_CUBIC, 5);
        assert!(x.is_nonsingular().unwrap());
        for m in 1..=3 {
            assert!(x.singular_points_over(m).is_empty());
            assert!(!x.has_singular_point_over(m));
        }
        let pair = hyp(2, "x0*x1", 4);
        assert_eq!(pair.singular_points_over(1).len(), 3);
        assert!(pair.has_singular_point_over(1));
        assert!(!pair.is_nonsingular().unwrap());
        let cone = hyp(2, "x1^3 + x2^3 + x3^3 + x4^3", 5);
        assert!(!cone.is_nonsingular().unwrap());
        assert_eq!(cone.singular_points_over(1), vec![ProjPoint::unit(4, 0)]);
    }

    #[test]
    fn quadric_tangent_section() {
        let quad = hyp(2, "x0^2 + x1*x2 + x3*x4", 5);
        let p = ProjPoint::unit(4, 1);
        let r = quad.tangent_section(&p).unwrap();
        assert!(r.tangent_hyperplane.contains(quad.field(), &p));
        assert_eq!(
            r.tangent_hyperplane,
            LinearSubspace::hyperplane(quad.field(), &[Elem(0), Elem(0), Elem(1), Elem(0), Elem(0)]).unwrap()
        );
        assert!(r.is_cone);
        assert_eq!(r.cone_base_count(), Some(3));
        assert!(r.cone_base_nonsingular().unwrap());
        assert!(quad.tangent_section(&ProjPoint::unit(4, 0)).is_err());
    }

    #[test]
    fn example_has_cone_point() {
        let x = hyp(2, EXAMPLE_CUBIC, 5);
        let cones = x.cone_points();
        assert!(!cones.is_empty());
        for r in &cones {
            assert_eq!(r.cone_base_count(), Some(5));
            assert!(r.cone_base_nonsingular().unwrap());
            assert!(r.components[..3].iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn lines_and_thas() {
        let hq = hyp(2, "x0*x1 + x2*x3", 4);
        assert_eq!(hq.lines_in().len(), 6);
        assert_eq!(hq.thas_invariant(), 1);
        let x = hyp(2, EXAMPLE_CUBIC, 5);
        assert_eq!(x.thas_invariant(), 1);
        let pointless = hyp(2, "x2^3 + x1^2*x2 + x1^3 + x0*x1*x2 + x0^2*x2 + x0^2*x1 + x0^3", 3);
        assert!(pointless.rational_points().is_empty());
        assert_eq!(pointless.thas_invariant(), -1);
        let conic = hyp(2, "x0^2 + x1*x2", 3);
        assert!(conic.lines_in().is_empty());
        assert_eq!(conic.thas_invariant(), 0);
    }

    #[test]
    fn line_locus_matches_containment() {
        let x = hyp(2, EXAMPLE_CUBIC, 5);
        let f = x.field().clone();
        for p in x.rational_points() {
            let locus = x.line_locus(&p).unwrap();
            for q in &locus.directions {
                let l = projgeom::line_through(&f, &p, q).unwrap();
                assert!(x.contains_subspace(&l).unwrap());
            }
            let through: Vec<_> = x.lines_in().into_iter().filter(|l| l.contains(&f, &p)).collect();
            assert_eq!(through.len(), locus.rational_count());
        }
    }

    #[test]
    fn conics() {
        let f2 = Field::prime(2).unwrap();
        let c = |s: &str| classify_conic(&MultiPoly::parse(&f2, s, Some(3)).unwrap()).unwrap();
        assert_eq!(c("x0^2 + x1*x2"), ConicClass::SmoothConic);
        assert_eq!(c("x0^2 + x0*x1 + x1^2"), ConicClass::PointlessIrreducible);
        assert_eq!(c("x0*x1"), ConicClass::RationalLinePair);
        assert_eq!(c("x0^2"), ConicClass::DoubleLine);
        assert!(classify_conic(&MultiPoly::parse(&f2, "x0^3", Some(3)).unwrap()).is_err());
    }

    #[test]
    fn pencil_on_hyperbolic_threefold() {
        let x = hyp(2, "x0*x1 + x2*x3 + x4^2", 5);
        let f = x.field().clone();
        let l = x.lines_in().into_iter().next().unwrap();
        let s = x.pencil_stats(&l, None).unwrap();
        assert_eq!(s.planes.len(), 7);
        assert!(s.omega <= s.sigma);
        let off = projgeom::line_through(&f, &ProjPoint::unit(4, 0), &ProjPoint::unit(4, 1)).unwrap();
        assert_eq!(x.pencil_stats(&off, None).unwrap_err(), GeometryError::LineNotContained);
    }
}
