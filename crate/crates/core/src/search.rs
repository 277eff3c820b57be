//! Staged exhaustive search over coefficient families of hypersurfaces.
//!
//! A family is a fixed form plus free coefficients on a list of slot
//! monomials. Candidate `i` assigns the mixed-radix digits of `i` to the
//! slots, the last slot varying fastest. Each candidate passes through:
//!
//! 1. point count over `F_q`, rejected below the threshold;
//! 2. singular-point scan over `F_q`, `F_{q^2}`, `F_{q^3}`;
//! 3. Gröbner nonsingularity (degree-cap failures are quarantined);
//! 4. tangent-section scan counting rational points with a cone section.
//!
//! Output is one JSON record per stage-1 survivor, in index order, plus a
//! summary. Runs can be sharded by index residue, checkpointed, resumed and
//! merged; the merged output is byte-identical to an unsharded run.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bitslice::BitTable;
use crate::field::{Elem, Field};
use crate::geometry::Hypersurface;
use crate::groebner::{self, GroebnerError, Ideal, DEFAULT_DEGREE_CAP};
use crate::monomial::Monomial;
use crate::poly::MultiPoly;
use crate::projgeom;

/// Extension levels of the stage-2 scan with more points than this are
/// skipped on the generic (non-bitsliced) path.
pub const DENSE_SCAN_LIMIT: u64 = 100_000;
const BLOCK: u64 = 2048;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid family: {0}")]
    Family(String),
    #[error("invalid shard {index}/{count}")]
    Shard { index: u64, count: u64 },
    #[error("checkpoint belongs to a different job: {0}")]
    CheckpointMismatch(String),
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error("cannot merge: {0}")]
    Merge(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A family as a JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    /// `p`, `q` or `p^r`.
    pub field: String,
    /// `N`: candidates live in `P^N`.
    pub ambient_dim: usize,
    pub degree: u32,
    /// Fixed part in polynomial text (`0` for none).
    pub fixed: String,
    /// Slot monomials in polynomial text.
    pub slots: Vec<String>,
}

impl FamilySpec {
    /// Cubic threefolds `x4*G2 + x0*x1*x2 + F3(x1,x2,x3)` over `F_2` with
    /// all 25 coefficients free.
    pub fn flagship() -> FamilySpec {
        let quad = [
            "x0^2", "x1^2", "x2^2", "x3^2", "x4^2", "x0*x1", "x0*x2", "x0*x3", "x0*x4", "x1*x2", "x1*x3", "x1*x4",
            "x2*x3", "x2*x4", "x3*x4",
        ];
        let cubic =
            ["x1^3", "x2^3", "x3^3", "x1^2*x2", "x1^2*x3", "x2^2*x3", "x1*x2^2", "x1*x3^2", "x2*x3^2", "x1*x2*x3"];
        let mut slots: Vec<String> = quad.iter().map(|m| format!("x4*{m}")).collect();
        slots.extend(cubic.iter().map(|m| m.to_string()));
        FamilySpec { field: "2".into(), ambient_dim: 4, degree: 3, fixed: "x0*x1*x2".into(), slots }
    }

    /// Every form of degree `d` in `P^N` over the given field.
    pub fn all_forms(field: &str, ambient_dim: usize, degree: u32) -> FamilySpec {
        let slots = Monomial::all_of_degree(ambient_dim + 1, degree).iter().map(|m| m.to_string()).collect();
        FamilySpec { field: field.into(), ambient_dim, degree, fixed: "0".into(), slots }
    }

    /// All quadrics in `P^4` over `F_2`.
    pub fn quadrics() -> FamilySpec {
        FamilySpec::all_forms("2", 4, 2)
    }
}

/// A validated family in canonical form.
#[derive(Clone, Debug)]
pub struct Family {
    spec: FamilySpec,
    field: Field,
    nvars: usize,
    fixed: MultiPoly,
    slots: Vec<Monomial>,
    size: u64,
}

impl Family {
    pub fn compile(spec: &FamilySpec) -> Result<Family, SearchError> {
        let bad = |s: String| SearchError::Family(s);
        let field: Field = spec.field.parse().map_err(|e| bad(format!("field {:?}: {e}", spec.field)))?;
        let nvars = spec.ambient_dim + 1;
        if !(3..=crate::monomial::MAX_VARS).contains(&nvars) {
            return Err(bad(format!("ambient dimension {} out of range", spec.ambient_dim)));
        }
        if spec.degree < 2 {
            return Err(bad("degree below 2".into()));
        }
        let fixed = MultiPoly::parse(&field, &spec.fixed, Some(nvars)).map_err(|e| bad(format!("fixed part: {e}")))?;
        if !fixed.is_zero() && (!fixed.is_homogeneous() || fixed.degree() != Some(spec.degree)) {
            return Err(bad("fixed part is not a form of the family degree".into()));
        }
        let mut slots = Vec::new();
        for s in &spec.slots {
            let p = MultiPoly::parse(&field, s, Some(nvars)).map_err(|e| bad(format!("slot {s:?}: {e}")))?;
            if p.len() != 1 || p.terms()[0].1 != Elem::ONE {
                return Err(bad(format!("slot {s:?} is not a monomial")));
            }
            let m = p.terms()[0].0;
            if m.degree() != spec.degree {
                return Err(bad(format!("slot {s:?} has degree {}", m.degree())));
            }
            if slots.contains(&m) {
                return Err(bad(format!("slot {s:?} repeated")));
            }
            slots.push(m);
        }
        let size = (field.order() as u64)
            .checked_pow(slots.len() as u32)
            .filter(|&s| s <= 1 << 40)
            .ok_or_else(|| bad("family too large".into()))?;
        let canonical = FamilySpec {
            field: field.to_string(),
            ambient_dim: spec.ambient_dim,
            degree: spec.degree,
            fixed: fixed.to_string(),
            slots: slots.iter().map(|m| m.to_string()).collect(),
        };
        Ok(Family { spec: canonical, field, nvars, fixed, slots, size })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn size(&self) -> u64 {
        self.size
    }
    pub fn slots(&self) -> &[Monomial] {
        &self.slots
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(&self.spec).expect("serializable");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Slot coefficients of candidate `index`, as field-element encodings.
    pub fn digits(&self, mut index: u64) -> Vec<u32> {
        let q = self.field.order() as u64;
        let mut d = vec![0u32; self.slots.len()];
        for x in d.iter_mut().rev() {
            *x = (index % q) as u32;
            index /= q;
        }
        d
    }

    pub fn candidate(&self, index: u64) -> MultiPoly {
        let terms = self.slots.iter().zip(self.digits(index)).map(|(&m, c)| (m, Elem(c)));
        self.fixed.add(&MultiPoly::from_terms(&self.field, self.nvars, terms))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    RejectedStage1Count,
    RejectedRationalSingular,
    RejectedGroebnerSingular,
    Quarantined,
    /// Nonsingular, above the threshold, with a cone point.
    Extremal,
    /// Nonsingular, above the threshold, without cone points.
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub index: u64,
    pub category: Category,
    pub points: u64,
    /// Extension degree over which stage 2 found a singular point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular_over: Option<u32>,
    /// Rational points whose tangent section is a cone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_points: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_bases_nonsingular: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thas_invariant: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub candidates: u64,
    pub rejected_stage1_count: u64,
    pub rejected_rational_singular: u64,
    pub rejected_groebner_singular: u64,
    pub quarantined: u64,
    pub extremal: u64,
    pub exceptional: u64,
    /// Stage-2 rejections by extension degree 1, 2, 3.
    pub singular_found_over: [u64; 3],
}

impl Counters {
    fn absorb(&mut self, o: &Counters) {
        self.candidates += o.candidates;
        self.rejected_stage1_count += o.rejected_stage1_count;
        self.rejected_rational_singular += o.rejected_rational_singular;
        self.rejected_groebner_singular += o.rejected_groebner_singular;
        self.quarantined += o.quarantined;
        self.extremal += o.extremal;
        self.exceptional += o.exceptional;
        for (a, b) in self.singular_found_over.iter_mut().zip(o.singular_found_over) {
            *a += b;
        }
    }

    fn record(&mut self, c: Category) {
        match c {
            Category::RejectedStage1Count => self.rejected_stage1_count += 1,
            Category::RejectedRationalSingular => self.rejected_rational_singular += 1,
            Category::RejectedGroebnerSingular => self.rejected_groebner_singular += 1,
            Category::Quarantined => self.quarantined += 1,
            Category::Extremal => self.extremal += 1,
            Category::Exceptional => self.exceptional += 1,
        }
    }

    /// Sum of the category counts; equals `candidates` on a consistent run.
    pub fn categorized(&self) -> u64 {
        self.rejected_stage1_count
            + self.rejected_rational_singular
            + self.rejected_groebner_singular
            + self.quarantined
            + self.extremal
            + self.exceptional
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub fingerprint: String,
    pub family: FamilySpec,
    pub threshold: u64,
    pub degree_cap: u32,
    pub shard_index: u64,
    pub shard_count: u64,
    /// Candidates in this shard.
    pub shard_size: u64,
    pub counters: Counters,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Checkpoint {
    fingerprint: String,
    threshold: u64,
    degree_cap: u32,
    shard_index: u64,
    shard_count: u64,
    cursor: u64,
    counters: Counters,
    out_len: u64,
}

#[derive(Clone, Debug)]
pub struct SearchJob {
    pub family: FamilySpec,
    pub threshold: u64,
    pub shard_index: u64,
    pub shard_count: u64,
    pub degree_cap: u32,
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
    /// Records file (JSON lines).
    pub out: PathBuf,
    pub checkpoint: Option<PathBuf>,
    /// Candidates between checkpoint writes.
    pub checkpoint_every: u64,
    /// Stop (with a checkpoint) once this many shard candidates are done.
    pub halt_after: Option<u64>,
}

impl SearchJob {
    pub fn new(family: FamilySpec, threshold: u64, out: impl Into<PathBuf>) -> SearchJob {
        SearchJob {
            family,
            threshold,
            shard_index: 0,
            shard_count: 1,
            degree_cap: DEFAULT_DEGREE_CAP,
            threads: 0,
            out: out.into(),
            checkpoint: None,
            checkpoint_every: 1 << 20,
            halt_after: None,
        }
    }
}

/// Precomputed evaluation data shared by all workers.
struct Engine {
    family: Family,
    threshold: u64,
    degree_cap: u32,
    kind: EngineKind,
}

enum EngineKind {
    Sliced(Sliced),
    Dense(Dense),
}

/// `F_2` families: XOR of bit masks.
struct Sliced {
    count_table: Arc<BitTable>,
    fixed_value: Vec<u64>,
    slot_values: Vec<Vec<u64>>,
    /// Per extension degree: table, and for each polynomial checked (the
    /// partials, plus `F` when `p | d`) fixed mask and per-slot masks.
    levels: Vec<SlicedLevel>,
}

struct SlicedLevel {
    table: Arc<BitTable>,
    fixed: Vec<Vec<u64>>,
    slots: Vec<Vec<Option<Vec<u64>>>>,
}

/// Any field: value tables at the rational points for counting, direct
/// evaluation for the singular scan.
struct Dense {
    fixed_value: Vec<Elem>,
    slot_values: Vec<Vec<Elem>>,
    levels: Vec<(Field, Vec<Vec<Elem>>)>,
}

impl Engine {
    fn new(family: Family, threshold: u64, degree_cap: u32) -> Engine {
        let kind = if family.field.order() == 2 {
            EngineKind::Sliced(Engine::sliced(&family))
        } else {
            EngineKind::Dense(Engine::dense(&family))
        };
        Engine { family, threshold, degree_cap, kind }
    }

    fn checked_polys(family: &Family, f: &MultiPoly) -> Vec<MultiPoly> {
        let d = family.spec.degree;
        let mut v: Vec<MultiPoly> = f.gradient();
        if d.is_multiple_of(family.field.characteristic()) {
            v.push(f.clone());
        }
        v
    }

    fn sliced(family: &Family) -> Sliced {
        let d = family.spec.degree;
        let n = family.nvars;
        let count_table = BitTable::get(n, 1, &[d]).expect("small table");
        let fixed_value = count_table.poly_values(&family.fixed).expect("F_2 coefficients");
        let slot_values = family.slots.iter().map(|m| count_table.mask(*m).unwrap().to_vec()).collect();
        let mut levels = Vec::new();
        for m in 1..=3 {
            let Some(table) = BitTable::get(n, m, &[d, d - 1]) else { break };
            let fixed = Engine::checked_polys(family, &family.fixed)
                .iter()
                .map(|g| table.poly_values(g).expect("F_2 coefficients"))
                .collect();
            let slots = family
                .slots
                .iter()
                .map(|&mono| {
                    let one = MultiPoly::monomial(&family.field, n, mono, Elem::ONE);
                    Engine::checked_polys(family, &one)
                        .iter()
                        .map(|g| (!g.is_zero()).then(|| table.poly_values(g).expect("F_2 coefficients")))
                        .collect()
                })
                .collect();
            levels.push(SlicedLevel { table, fixed, slots });
        }
        Sliced { count_table, fixed_value, slot_values, levels }
    }

    fn dense(family: &Family) -> Dense {
        let f = &family.field;
        let pts: Vec<Vec<Elem>> = projgeom::points(f, family.nvars - 1).map(|p| p.coords().to_vec()).collect();
        let fixed_value = pts.iter().map(|p| family.fixed.evaluate(p).unwrap()).collect();
        let slot_values = family
            .slots
            .iter()
            .map(|&m| {
                let one = MultiPoly::monomial(f, family.nvars, m, Elem::ONE);
                pts.iter().map(|p| one.evaluate(p).unwrap()).collect()
            })
            .collect();
        let mut levels = Vec::new();
        for m in 1..=3u32 {
            let ext = f.extension(m).expect("extension");
            if projgeom::proj_count_u64(family.nvars as u32 - 1, ext.order() as u64) > DENSE_SCAN_LIMIT {
                break;
            }
            let pts = projgeom::points(&ext, family.nvars - 1).map(|p| p.coords().to_vec()).collect();
            levels.push((ext, pts));
        }
        Dense { fixed_value, slot_values, levels }
    }

    fn count(&self, index: u64, digits: &[u32]) -> u64 {
        match &self.kind {
            EngineKind::Sliced(s) => {
                let mut v = s.fixed_value.clone();
                let nslots = s.slot_values.len();
                for (k, sv) in s.slot_values.iter().enumerate() {
                    if index >> (nslots - 1 - k) & 1 == 1 {
                        crate::bitslice::xor_into(&mut v, sv);
                    }
                }
                s.count_table.count_zeros(&v)
            }
            EngineKind::Dense(dn) => {
                let f = &self.family.field;
                (0..dn.fixed_value.len())
                    .filter(|&k| {
                        let mut acc = dn.fixed_value[k];
                        for (s, &c) in digits.iter().enumerate() {
                            if c != 0 {
                                acc = f.add(acc, f.mul(Elem(c), dn.slot_values[s][k]));
                            }
                        }
                        acc.is_zero()
                    })
                    .count() as u64
            }
        }
    }

    /// Smallest extension degree with a singular point, if any is found.
    fn singular_scan(&self, index: u64, poly: &MultiPoly) -> Option<u32> {
        match &self.kind {
            EngineKind::Sliced(s) => {
                let nslots = self.family.slots.len();
                let active: Vec<usize> = (0..nslots).filter(|&k| index >> (nslots - 1 - k) & 1 == 1).collect();
                for (li, lv) in s.levels.iter().enumerate() {
                    let t = &lv.table;
                    let planes = t.planes();
                    let mut buf = vec![0u64; planes];
                    for w in 0..t.words() {
                        let mut zeros = t.valid()[w];
                        for (g, fixed) in lv.fixed.iter().enumerate() {
                            buf.copy_from_slice(&fixed[w * planes..(w + 1) * planes]);
                            for &k in &active {
                                if let Some(mask) = &lv.slots[k][g] {
                                    crate::bitslice::xor_into(&mut buf, &mask[w * planes..(w + 1) * planes]);
                                }
                            }
                            zeros &= !buf.iter().fold(0, |a, &x| a | x);
                            if zeros == 0 {
                                break;
                            }
                        }
                        if zeros != 0 {
                            return Some(li as u32 + 1);
                        }
                    }
                }
                None
            }
            EngineKind::Dense(dn) => {
                let checks = Engine::checked_polys(&self.family, poly);
                for (li, (ext, pts)) in dn.levels.iter().enumerate() {
                    let hit = pts.iter().any(|p| checks.iter().all(|g| g.evaluate_in(ext, p).unwrap().is_zero()));
                    if hit {
                        return Some(li as u32 + 1);
                    }
                }
                None
            }
        }
    }

    fn classify(&self, index: u64) -> SearchRecord {
        let digits = self.family.digits(index);
        let points = self.count(index, &digits);
        let mut rec = SearchRecord {
            index,
            category: Category::RejectedStage1Count,
            points,
            singular_over: None,
            cone_points: None,
            cone_bases_nonsingular: None,
            thas_invariant: None,
            poly: None,
        };
        if points < self.threshold {
            return rec;
        }
        let poly = self.family.candidate(index);
        if let Some(m) = self.singular_scan(index, &poly) {
            rec.category = Category::RejectedRationalSingular;
            rec.singular_over = Some(m);
            return rec;
        }
        let verdict = match Ideal::jacobian(&poly) {
            Ok(ideal) => groebner::is_projectively_empty_capped(&ideal, self.degree_cap),
            Err(GroebnerError::NoGenerators) => Ok(false),
            Err(e) => Err(e),
        };
        match verdict {
            Ok(false) => {
                rec.category = Category::RejectedGroebnerSingular;
                return rec;
            }
            Err(_) => {
                rec.category = Category::Quarantined;
                rec.poly = Some(poly.to_string());
                return rec;
            }
            Ok(true) => {}
        }
        let x = Hypersurface::new(poly.clone()).expect("nonsingular forms are nonzero");
        let cones = x.cone_points();
        let bases_ok = cones.iter().all(|r| r.cone_base_nonsingular().unwrap_or(false));
        rec.category = if cones.is_empty() { Category::Exceptional } else { Category::Extremal };
        rec.cone_points = Some(cones.len() as u64);
        rec.cone_bases_nonsingular = Some(bases_ok);
        rec.thas_invariant = Some(x.thas_invariant());
        rec.poly = Some(poly.to_string());
        rec
    }
}

fn shard_size(total: u64, index: u64, count: u64) -> u64 {
    if index >= total {
        0
    } else {
        (total - index).div_ceil(count)
    }
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), SearchError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs (or resumes) a search job, appending records to `job.out`.
pub fn run(job: &SearchJob) -> Result<SearchSummary, SearchError> {
    if job.shard_count == 0 || job.shard_index >= job.shard_count {
        return Err(SearchError::Shard { index: job.shard_index, count: job.shard_count });
    }
    let family = Family::compile(&job.family)?;
    let fingerprint = family.fingerprint();
    let total = shard_size(family.size(), job.shard_index, job.shard_count);

    let mut cursor = 0u64;
    let mut counters = Counters::default();
    let mut out_len = 0u64;
    if let Some(cp) = &job.checkpoint {
        if cp.exists() {
            let text = fs::read_to_string(cp)?;
            let c: Checkpoint =
                serde_json::from_str(&text).map_err(|e| SearchError::CorruptCheckpoint(e.to_string()))?;
            if c.fingerprint != fingerprint {
                return Err(SearchError::CheckpointMismatch("family fingerprint differs".into()));
            }
            if (c.threshold, c.degree_cap, c.shard_index, c.shard_count)
                != (job.threshold, job.degree_cap, job.shard_index, job.shard_count)
            {
                return Err(SearchError::CheckpointMismatch("threshold, degree cap or shard differs".into()));
            }
            if c.cursor > total || c.counters.candidates != c.cursor {
                return Err(SearchError::CorruptCheckpoint("cursor out of range".into()));
            }
            cursor = c.cursor;
            counters = c.counters;
            out_len = c.out_len;
        }
    }
    let mut file = OpenOptions::new().create(true).write(true).read(true).truncate(false).open(&job.out)?;
    if file.metadata()?.len() < out_len {
        return Err(SearchError::CorruptCheckpoint("records file shorter than checkpoint".into()));
    }
    file.set_len(out_len)?;
    file.seek(SeekFrom::End(0))?;
    let mut out = BufWriter::new(file);

    let engine = Engine::new(family, job.threshold, job.degree_cap);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(job.threads).build().expect("thread pool");
    let batch = BLOCK * pool.current_num_threads().max(1) as u64 * 4;
    let mut since_checkpoint = 0u64;
    let save = |cursor: u64, counters: &Counters, out: &mut BufWriter<File>| -> Result<(), SearchError> {
        out.flush()?;
        let out_len = out.get_ref().metadata()?.len();
        if let Some(cp) = &job.checkpoint {
            let c = Checkpoint {
                fingerprint: fingerprint.clone(),
                threshold: job.threshold,
                degree_cap: job.degree_cap,
                shard_index: job.shard_index,
                shard_count: job.shard_count,
                cursor,
                counters: counters.clone(),
                out_len,
            };
            write_atomic(cp, serde_json::to_string_pretty(&c)?.as_bytes())?;
        }
        Ok(())
    };

    while cursor < total {
        if job.halt_after.is_some_and(|h| cursor >= h) {
            break;
        }
        let end = (cursor + batch).min(total);
        let blocks: Vec<(u64, u64)> =
            (cursor..end).step_by(BLOCK as usize).map(|s| (s, (s + BLOCK).min(end))).collect();
        let results: Vec<(Vec<SearchRecord>, Counters)> = pool.install(|| {
            blocks
                .par_iter()
                .map(|&(s, e)| {
                    let mut recs = Vec::new();
                    let mut c = Counters::default();
                    for pos in s..e {
                        let index = job.shard_index + pos * job.shard_count;
                        let r = engine.classify(index);
                        c.candidates += 1;
                        c.record(r.category);
                        if let Some(m) = r.singular_over {
                            c.singular_found_over[m as usize - 1] += 1;
                        }
                        if r.category != Category::RejectedStage1Count {
                            recs.push(r);
                        }
                    }
                    (recs, c)
                })
                .collect()
        });
        for (recs, c) in results {
            for r in recs {
                serde_json::to_writer(&mut out, &r)?;
                out.write_all(b"\n")?;
            }
            counters.absorb(&c);
        }
        since_checkpoint += end - cursor;
        cursor = end;
        if since_checkpoint >= job.checkpoint_every {
            save(cursor, &counters, &mut out)?;
            since_checkpoint = 0;
        }
    }
    save(cursor, &counters, &mut out)?;
    Ok(SearchSummary {
        fingerprint,
        family: engine.family.spec.clone(),
        threshold: job.threshold,
        degree_cap: job.degree_cap,
        shard_index: job.shard_index,
        shard_count: job.shard_count,
        shard_size: total,
        counters,
        complete: cursor == total,
    })
}

/// Classifies a single candidate without touching the filesystem.
pub fn classify(family: &FamilySpec, threshold: u64, index: u64) -> Result<SearchRecord, SearchError> {
    let family = Family::compile(family)?;
    if index >= family.size() {
        return Err(SearchError::Family(format!("index {index} outside the family")));
    }
    Ok(Engine::new(family, threshold, DEFAULT_DEGREE_CAP).classify(index))
}

pub fn write_summary(path: &Path, s: &SearchSummary) -> Result<(), SearchError> {
    let mut text = serde_json::to_string_pretty(s)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_summary(path: &Path) -> Result<SearchSummary, SearchError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn read_records(path: &Path) -> Result<Vec<SearchRecord>, SearchError> {
    let mut v = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        if !line.is_empty() {
            v.push(serde_json::from_str(&line)?);
        }
    }
    Ok(v)
}

/// Combines complete shard outputs `(summary, records file)` into the
/// output of an unsharded run, written to `out`.
pub fn merge(shards: &[(SearchSummary, PathBuf)], out: &Path) -> Result<SearchSummary, SearchError> {
    let (first, _) = shards.first().ok_or_else(|| SearchError::Merge("no shards given".into()))?;
    let count = first.shard_count;
    let mut seen = vec![false; count as usize];
    let mut counters = Counters::default();
    let mut lines: Vec<(u64, String)> = Vec::new();
    for (s, path) in shards {
        if (&s.fingerprint, s.threshold, s.degree_cap, s.shard_count)
            != (&first.fingerprint, first.threshold, first.degree_cap, count)
        {
            return Err(SearchError::Merge("shards come from different jobs".into()));
        }
        if !s.complete {
            return Err(SearchError::Merge(format!("shard {} is incomplete", s.shard_index)));
        }
        let slot = seen
            .get_mut(s.shard_index as usize)
            .ok_or_else(|| SearchError::Merge(format!("shard index {} out of range", s.shard_index)))?;
        if *slot {
            return Err(SearchError::Merge(format!("shard {} given twice", s.shard_index)));
        }
        *slot = true;
        counters.absorb(&s.counters);
        for line in BufReader::new(File::open(path)?).lines() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let r: SearchRecord = serde_json::from_str(&line)?;
            if r.index % count != s.shard_index {
                return Err(SearchError::Merge(format!(
                    "record {} does not belong to shard {}",
                    r.index, s.shard_index
                )));
            }
            lines.push((r.index, line));
        }
    }
    if let Some(missing) = seen.iter().position(|&b| !b) {
        return Err(SearchError::Merge(format!("shard {missing} missing")));
    }
    lines.sort_by_key(|l| l.0);
    let mut w = BufWriter::new(File::create(out)?);
    for (_, l) in &lines {
        w.write_all(l.as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    let family = Family::compile(&first.family)?;
    Ok(SearchSummary {
        fingerprint: first.fingerprint.clone(),
        family: first.family.clone(),
        threshold: first.threshold,
        degree_cap: first.degree_cap,
        shard_index: 0,
        shard_count: 1,
        shard_size: family.size(),
        counters,
        complete: true,
    })
}
