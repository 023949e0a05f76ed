//! Exhaustive search over the sextics with a prescribed singular
//! configuration: linear system, GF(3) null basis, candidate iteration with
//! staged filters, and checkpointed multi-worker runs.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field_tower::{tower, Fe, Gf};
use crate::linear_algebra::{galois_descent_nullspace, nullspace, reduced_echelon, LinalgError, Matrix, NullBasis};
use crate::point_counting::{adjustment_sum, count_plane_curve, is_geometrically_irreducible, weil_polynomial};
use crate::polynomials::{sextic_monomials, taylor_at, ternary_index, ProjPoint, TernaryForm};
use crate::singularity::{multiplicity, non_special_check_with, Case, ConfigPoint, SingularConfig, DEFAULT_SEED};

pub const MANIFEST_SCHEMA: u32 = 1;
pub const DEDUP_RULE: &str = "first nonzero coordinate of v equals 1";

/// Exponents of the case-II normalized coefficients b1, b2, b3.
pub const B_MONOMIALS: [[u8; 3]; 3] = [[3, 0, 3], [2, 1, 3], [3, 3, 0]];

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("range {start}..{end} is outside 0..{total}")]
    Range { start: u64, end: u64, total: u64 },
    #[error("checkpoint directory holds a different run; pass --force to discard it")]
    ManifestMismatch,
    #[error("run already completed in {0}; pass --force to redo it")]
    AlreadyComplete(PathBuf),
    #[error("interrupted with {done} of {total} chunks complete; rerun to resume")]
    Interrupted { done: usize, total: usize },
}

/// Taylor coefficients at one configured point as linear functionals on the
/// 28 sextic coefficients, over the point's own field.
#[derive(Clone, Debug)]
pub struct PointFunctionals {
    pub point: ConfigPoint,
    pub field_degree: usize,
    /// `(i, j)` -> functional giving the coefficient of `X^i Y^j`.
    pub terms: BTreeMap<(u32, u32), Vec<Fe>>,
}

impl PointFunctionals {
    pub fn new(point: ConfigPoint) -> Self {
        let m = point.multiplicity;
        let mut terms: BTreeMap<(u32, u32), Vec<Fe>> = BTreeMap::new();
        for deg in 0..=m {
            for i in (0..=deg).rev() {
                terms.insert((i, deg - i), vec![Fe::ZERO; 28]);
            }
        }
        for (idx, e) in sextic_monomials().into_iter().enumerate() {
            let mono = TernaryForm::monomial(1, e, Fe::ONE);
            let (g, _) = taylor_at(&mono, &point.point);
            for (&(i, j), lin) in terms.iter_mut() {
                lin[idx] = g.coeff((i, j));
            }
        }
        PointFunctionals { point, field_degree: point.point.field_degree(), terms }
    }

    /// Functionals of the degree-`d` piece, `X^d` first.
    pub fn piece(&self, d: u32) -> Vec<&Vec<Fe>> {
        (0..=d).map(|j| &self.terms[&(d - j, j)]).collect()
    }

    pub fn apply(lin: &[Fe], c: &[u8], gf: &Gf) -> Fe {
        let _ = gf;
        lin.iter().zip(c).fold(Fe::ZERO, |acc, (&l, &d)| acc.add(l.scale(d)))
    }
}

/// Linear conditions for the prescribed singularities: per double point the
/// X, Y and constant coefficients of the Taylor expansion; a triple point
/// adds the X^2, XY, Y^2 coefficients. Rows live in the compositum field.
pub fn build_system(config: &SingularConfig) -> Matrix {
    let k = config.field_degree();
    let t = tower();
    let mut rows = Vec::new();
    for cp in &config.points {
        let pf = PointFunctionals::new(*cp);
        let mut keys = vec![(1, 0), (0, 1), (0, 0)];
        if cp.multiplicity == 3 {
            keys.extend([(2, 0), (1, 1), (0, 2)]);
        }
        for key in keys {
            rows.push(pf.terms[&key].iter().map(|&v| t.embed(v, pf.field_degree, k)).collect());
        }
    }
    Matrix::from_rows(k, rows)
}

/// GF(3) basis of the sextics with the prescribed singularities.
pub fn null_basis(config: &SingularConfig) -> Result<NullBasis, LinalgError> {
    galois_descent_nullspace(&build_system(config))
}

/// `Δ = β(c)^2 - α(c)γ(c)` for the tangent quadric `αX^2 + βXY + γY^2` at a
/// double point, with `α, β, γ` linear in the sextic coefficients.
#[derive(Clone, Debug)]
pub struct PointDiscriminant {
    pub point: ProjPoint,
    pub field_degree: usize,
    pub alpha: Vec<Fe>,
    pub beta: Vec<Fe>,
    pub gamma: Vec<Fe>,
}

impl PointDiscriminant {
    pub fn eval(&self, c: &[u8]) -> Fe {
        let gf = tower().field(self.field_degree);
        let a = PointFunctionals::apply(&self.alpha, c, gf);
        let b = PointFunctionals::apply(&self.beta, c, gf);
        let g = PointFunctionals::apply(&self.gamma, c, gf);
        gf.mul(b, b).sub(gf.mul(a, g))
    }

    /// Coefficients of `a_i a_j` (`i <= j`) in `D(a_1..a_28)`.
    pub fn quadratic_form(&self) -> BTreeMap<(usize, usize), Fe> {
        let gf = tower().field(self.field_degree);
        let mut out: BTreeMap<(usize, usize), Fe> = BTreeMap::new();
        for i in 0..28 {
            for j in 0..28 {
                let v = gf.mul(self.beta[i], self.beta[j]).sub(gf.mul(self.alpha[i], self.gamma[j]));
                let key = (i.min(j), i.max(j));
                let e = out.entry(key).or_insert(Fe::ZERO);
                *e = e.add(v);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// Symbolic discriminants of the tangent quadrics at every double point.
pub fn discriminant_precompute(config: &SingularConfig) -> Vec<PointDiscriminant> {
    config
        .points
        .iter()
        .filter(|cp| cp.multiplicity == 2)
        .map(|cp| {
            let pf = PointFunctionals::new(*cp);
            let piece = pf.piece(2);
            PointDiscriminant {
                point: cp.point,
                field_degree: pf.field_degree,
                alpha: piece[0].clone(),
                beta: piece[1].clone(),
                gamma: piece[2].clone(),
            }
        })
        .collect()
}

/// A contiguous run of candidate indices: `offset + Σ v_j g_{free_j}` with
/// `v` read as a base-3 number, `free[0]` most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub start: u64,
    pub size: u64,
    pub offset: Vec<u8>,
    pub free: Vec<usize>,
}

/// Case-II affine slice of the null space with fixed b-coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSlice {
    pub b: [u8; 3],
    pub offset: Vec<u8>,
    pub directions: Vec<Vec<u8>>,
}

/// The candidate coefficient vectors and their canonical ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSpace {
    pub generators: Vec<Vec<u8>>,
    pub blocks: Vec<Block>,
}

fn pow3(n: usize) -> u64 {
    3u64.pow(n as u32)
}

impl CandidateSpace {
    /// Nonzero vectors of span(basis) up to scalar: the first nonzero
    /// coordinate of `v` is 1. Blocks grow with the number of free tail digits.
    pub fn projective(basis: &NullBasis) -> Self {
        let d = basis.dim();
        let mut blocks = Vec::new();
        let mut start = 0;
        for m in 0..d {
            let lead = d - 1 - m;
            blocks.push(Block { start, size: pow3(m), offset: basis.vectors[lead].clone(), free: (lead + 1..d).collect() });
            start += pow3(m);
        }
        CandidateSpace { generators: basis.vectors.clone(), blocks }
    }

    pub fn affine(slices: &[AffineSlice]) -> Self {
        let mut generators = Vec::new();
        let mut blocks = Vec::new();
        let mut start = 0;
        for s in slices {
            let first = generators.len();
            generators.extend(s.directions.iter().cloned());
            let size = pow3(s.directions.len());
            blocks.push(Block { start, size, offset: s.offset.clone(), free: (first..generators.len()).collect() });
            start += size;
        }
        CandidateSpace { generators, blocks }
    }

    pub fn total(&self) -> u64 {
        self.blocks.iter().map(|b| b.size).sum()
    }

    fn block_of(&self, index: u64) -> &Block {
        let i = self.blocks.partition_point(|b| b.start + b.size <= index);
        &self.blocks[i]
    }

    /// Free digits of candidate `index` within its block.
    fn digits(&self, block: &Block, index: u64) -> Vec<u8> {
        let mut t = index - block.start;
        let mut v = vec![0u8; block.free.len()];
        for slot in v.iter_mut().rev() {
            *slot = (t % 3) as u8;
            t /= 3;
        }
        v
    }

    /// Coefficient vector (28 GF(3) digits) of candidate `index`.
    pub fn vector(&self, index: u64) -> Vec<u8> {
        let block = self.block_of(index);
        let mut c = block.offset.clone();
        for (&v, &g) in self.digits(block, index).iter().zip(&block.free) {
            for (o, &x) in c.iter_mut().zip(&self.generators[g]) {
                *o = (*o + v * x) % 3;
            }
        }
        c
    }
}

/// Index of the projective candidate proportional to `c`, if `c` lies in
/// the span of `basis` (given in reduced echelon form).
pub fn projective_index(basis: &NullBasis, c: &[u8]) -> Option<u64> {
    // pivots of an echelon basis read the coordinates off directly
    let pivots: Vec<usize> = basis.vectors.iter().map(|v| v.iter().position(|&x| x != 0).unwrap()).collect();
    let mut v: Vec<u8> = pivots.iter().map(|&p| c[p]).collect();
    if basis.combine(&v) != c || v.iter().all(|&x| x == 0) {
        return None;
    }
    let lead = v.iter().position(|&x| x != 0).unwrap();
    if v[lead] == 2 {
        v.iter_mut().for_each(|x| *x = (*x * 2) % 3);
    }
    let d = v.len();
    let m = d - 1 - lead;
    let tail = v[lead + 1..].iter().fold(0u64, |acc, &x| acc * 3 + x as u64);
    Some((pow3(m) - 1) / 2 + tail)
}

/// Affine slices of span(basis) on which the b-coefficients take each of
/// the given values; infeasible assignments are dropped.
pub fn affine_slices(basis: &NullBasis, b_values: &[[u8; 3]]) -> Vec<AffineSlice> {
    let d = basis.dim();
    let idx: Vec<usize> = B_MONOMIALS.iter().map(|&e| ternary_index(e)).collect();
    let coeff = |j: usize, k: usize| Fe::from_i64(basis.vectors[j][idx[k]] as i64);
    let lhs = Matrix::from_rows(1, (0..3).map(|k| (0..d).map(|j| coeff(j, k)).collect()).collect());
    let kernel: Vec<Vec<u8>> = nullspace(&lhs).into_iter().map(|v| v.into_iter().map(Fe::prime_value).collect()).collect();
    let directions: Vec<Vec<u8>> = kernel.iter().map(|w| basis.combine(w)).collect();
    let mut out = Vec::new();
    for &b in b_values {
        let aug = Matrix::from_rows(
            1,
            (0..3)
                .map(|k| (0..d).map(|j| coeff(j, k)).chain([Fe::from_i64(b[k] as i64)]).collect())
                .collect(),
        );
        let (e, pivots) = reduced_echelon(&aug);
        if pivots.contains(&d) {
            continue;
        }
        let mut w = vec![0u8; d];
        for (r, &p) in pivots.iter().enumerate() {
            w[p] = e.get(r, d).prime_value();
        }
        out.push(AffineSlice { b, offset: basis.combine(&w), directions: directions.clone() });
    }
    out
}

/// Which filter rejected a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Multiplicity,
    PointCount,
    Irreducibility,
    SingularLocus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounters {
    pub visited: u64,
    pub multiplicity: u64,
    pub point_count: u64,
    pub irreducibility: u64,
    pub singular_locus: u64,
    pub survivors: u64,
}

impl StageCounters {
    fn reject(&mut self, s: Stage) {
        match s {
            Stage::Multiplicity => self.multiplicity += 1,
            Stage::PointCount => self.point_count += 1,
            Stage::Irreducibility => self.irreducibility += 1,
            Stage::SingularLocus => self.singular_locus += 1,
        }
    }

    pub fn merge(&mut self, o: &StageCounters) {
        self.visited += o.visited;
        self.multiplicity += o.multiplicity;
        self.point_count += o.point_count;
        self.irreducibility += o.irreducibility;
        self.singular_locus += o.singular_locus;
        self.survivors += o.survivors;
    }

    pub fn rejected(&self) -> u64 {
        self.multiplicity + self.point_count + self.irreducibility + self.singular_locus
    }
}

/// A candidate that passed every filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub index: u64,
    pub coefficients: String,
    pub sextic: String,
    pub n1: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weil: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weil_factored: Option<String>,
}

impl CandidateRecord {
    pub fn form(&self) -> TernaryForm {
        TernaryForm::parse(&self.sextic, 1).expect("record sextic parses")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Rejected(Stage),
    Survivor(CandidateRecord),
}

/// Everything needed to search one configuration.
#[derive(Clone, Debug)]
pub struct SearchTask {
    pub config: SingularConfig,
    pub basis: NullBasis,
    pub space: CandidateSpace,
    pub threshold: i64,
    pub b_values: Option<Vec<[u8; 3]>>,
    pub seed: u64,
    /// Compute N_1..N_5 and the Weil polynomial of every survivor.
    pub with_weil: bool,
}

impl SearchTask {
    pub fn new(config: SingularConfig, threshold: i64, b_values: Option<&[[u8; 3]]>) -> Result<Self, SearchError> {
        let basis = null_basis(&config)?;
        let space = match b_values {
            Some(b) => CandidateSpace::affine(&affine_slices(&basis, b)),
            None => CandidateSpace::projective(&basis),
        };
        Ok(SearchTask {
            config,
            basis,
            space,
            threshold,
            b_values: b_values.map(<[_]>::to_vec),
            seed: DEFAULT_SEED,
            with_weil: true,
        })
    }

    /// Restricts the search to the span of the first `dim` basis vectors
    /// (used for exhaustive cross-checks at small scale).
    pub fn truncated(mut self, dim: usize) -> Self {
        self.basis.vectors.truncate(dim);
        self.space = CandidateSpace::projective(&self.basis);
        self.b_values = None;
        self
    }

    pub fn total(&self) -> u64 {
        self.space.total()
    }

    pub fn dimension(&self) -> usize {
        self.basis.dim()
    }

    fn record(&self, index: u64, c: &[u8], f: &TernaryForm, n1: i64) -> CandidateRecord {
        let mut rec = CandidateRecord {
            index,
            coefficients: c.iter().map(|d| char::from(b'0' + d)).collect(),
            sextic: f.render(),
            n1,
            counts: None,
            weil: None,
            weil_factored: None,
        };
        if self.with_weil {
            let (cv, w) = weil_polynomial(f, &self.config).expect("non-special survivor has valid counts");
            rec.counts = Some(cv.n);
            rec.weil = Some(w.expanded());
            rec.weil_factored = Some(w.factored());
        }
        rec
    }

    /// The exact tail of the pipeline shared by both evaluation paths.
    fn finish(&self, index: u64, c: &[u8], n1: i64) -> Outcome {
        let f = TernaryForm::sextic_from_digits(c);
        if !is_geometrically_irreducible(&f) {
            return Outcome::Rejected(Stage::Irreducibility);
        }
        if non_special_check_with(&f, &self.config, false, self.seed).is_err() {
            return Outcome::Rejected(Stage::SingularLocus);
        }
        Outcome::Survivor(self.record(index, c, &f, n1))
    }

    /// Reference evaluation of one candidate from scratch, without any
    /// incremental state.
    pub fn evaluate(&self, index: u64) -> Outcome {
        let c = self.space.vector(index);
        let f = TernaryForm::sextic_from_digits(&c);
        if self.config.points.iter().any(|cp| multiplicity(&f, &cp.point) != cp.multiplicity) {
            return Outcome::Rejected(Stage::Multiplicity);
        }
        let n1 = count_plane_curve(&f, 2) as i64 + adjustment_sum(&f, &self.config, 2).expect("tangent cones are nonzero");
        if n1 < self.threshold {
            return Outcome::Rejected(Stage::PointCount);
        }
        self.finish(index, &c, n1)
    }

    /// Visits `start..end` in order with incremental updates, handing each
    /// survivor to `sink`. Stops early (returning the next unvisited index)
    /// when `stop` is raised; checks it every `poll` candidates.
    pub fn iterate_candidates(
        &self,
        start: u64,
        end: u64,
        counters: &mut StageCounters,
        sink: &mut dyn FnMut(CandidateRecord),
        stop: &AtomicBool,
        poll: u64,
    ) -> u64 {
        let fast = FastFilter::new(self);
        let mut n = start;
        while n < end {
            let block = self.space.block_of(n).clone();
            let stop_at = end.min(block.start + block.size);
            let mut digits = self.space.digits(&block, n);
            let mut c = self.space.vector(n);
            let mut state = fast.state_of(&c);
            loop {
                counters.visited += 1;
                match fast.check(&state, self.threshold) {
                    Err(s) => counters.reject(s),
                    Ok(n1) => match self.finish(n, &c, n1) {
                        Outcome::Rejected(s) => counters.reject(s),
                        Outcome::Survivor(r) => {
                            counters.survivors += 1;
                            sink(r);
                        }
                    },
                }
                n += 1;
                if n >= stop_at {
                    break;
                }
                if (n - start) % poll == 0 && stop.load(Ordering::Relaxed) {
                    return n;
                }
                // odometer step: every changed digit goes up by one mod 3
                for pos in (0..digits.len()).rev() {
                    let g = block.free[pos];
                    fast.add_generator(&mut state, g);
                    for (o, &x) in c.iter_mut().zip(&self.space.generators[g]) {
                        *o = (*o + x) % 3;
                    }
                    digits[pos] = (digits[pos] + 1) % 3;
                    if digits[pos] != 0 {
                        break;
                    }
                }
            }
            if stop.load(Ordering::Relaxed) {
                return n;
            }
        }
        n
    }
}

/// Incremental evaluation of the cheap filters: values of `F` at the 91
/// points of P^2(GF(9)) and the tangent-cone coefficients at each orbit
/// representative of the configuration.
struct FastFilter {
    /// `lin[s][i]`: contribution of coefficient `i` to slot `s`.
    lin: Vec<[Fe; 28]>,
    reps: Vec<RepSlots>,
    /// Slot images of each generator.
    gen_images: Vec<Vec<Fe>>,
    gf9: &'static Gf,
    square9: [i8; 16],
}

struct RepSlots {
    first: usize,
    multiplicity: u32,
    /// Number of conjugates rational over GF(9), 0 if none are.
    weight: i64,
}

impl FastFilter {
    fn new(task: &SearchTask) -> Self {
        let t = tower();
        let gf9 = t.field(2);
        let monos = sextic_monomials();
        let mut lin: Vec<[Fe; 28]> = Vec::new();
        for p in projective_points_9() {
            let mut row = [Fe::ZERO; 28];
            for (i, e) in monos.iter().enumerate() {
                row[i] = TernaryForm::monomial(1, *e, Fe::ONE).eval(&p, 2);
            }
            lin.push(row);
        }
        let mut reps = Vec::new();
        for cp in task.config.orbit_representatives() {
            let pf = PointFunctionals::new(cp);
            let first = lin.len();
            for l in pf.piece(cp.multiplicity) {
                lin.push(l.clone().try_into().unwrap());
            }
            let k = cp.point.field_degree();
            reps.push(RepSlots { first, multiplicity: cp.multiplicity, weight: if 2 % k == 0 { k as i64 } else { 0 } });
        }
        let image = |c: &[u8]| -> Vec<Fe> {
            lin.iter().map(|row| row.iter().zip(c).fold(Fe::ZERO, |acc, (&l, &d)| acc.add(l.scale(d)))).collect()
        };
        let gen_images = task.space.generators.iter().map(|g| image(g)).collect();
        let mut square9 = [0i8; 16];
        for a in gf9.elements() {
            let (o, w) = a.raw();
            square9[(o | (w << 2)) as usize] = if a.is_zero() {
                0
            } else if gf9.is_square(a) {
                1
            } else {
                -1
            };
        }
        FastFilter { lin, reps, gen_images, gf9, square9 }
    }

    fn state_of(&self, c: &[u8]) -> Vec<Fe> {
        self.lin.iter().map(|row| row.iter().zip(c).fold(Fe::ZERO, |acc, (&l, &d)| acc.add(l.scale(d)))).collect()
    }

    #[inline]
    fn add_generator(&self, state: &mut [Fe], g: usize) {
        for (s, &v) in state.iter_mut().zip(&self.gen_images[g]) {
            *s = s.add(v);
        }
    }

    fn adjustment(&self, coeffs: &[Fe], m: u32) -> i64 {
        let gf = self.gf9;
        if m == 2 {
            let disc = gf.mul(coeffs[1], coeffs[1]).sub(gf.mul(coeffs[0], coeffs[2]));
            let (o, w) = disc.raw();
            return self.square9[(o | (w << 2)) as usize] as i64;
        }
        // distinct roots of the binary form in P^1(GF(9)), minus one
        let mut roots = coeffs[m as usize].is_zero() as i64;
        for t in gf.elements() {
            let v = coeffs.iter().rev().fold(Fe::ZERO, |acc, &a| gf.mul(acc, t).add(a));
            roots += v.is_zero() as i64;
        }
        roots - 1
    }

    /// `Ok(N1)` when the multiplicities are exact and the formula count
    /// reaches `threshold`.
    fn check(&self, state: &[Fe], threshold: i64) -> Result<i64, Stage> {
        for r in &self.reps {
            if state[r.first..=r.first + r.multiplicity as usize].iter().all(|v| v.is_zero()) {
                return Err(Stage::Multiplicity);
            }
        }
        let mut n1 = state[..91].iter().filter(|v| v.is_zero()).count() as i64;
        for r in self.reps.iter().filter(|r| r.weight > 0) {
            let coeffs = &state[r.first..=r.first + r.multiplicity as usize];
            n1 += r.weight * self.adjustment(coeffs, r.multiplicity);
        }
        if n1 < threshold {
            return Err(Stage::PointCount);
        }
        Ok(n1)
    }
}

fn projective_points_9() -> Vec<[Fe; 3]> {
    let gf = tower().field(2);
    let mut out = Vec::with_capacity(91);
    for a in gf.elements() {
        for b in gf.elements() {
            out.push([Fe::ONE, a, b]);
        }
    }
    for a in gf.elements() {
        out.push([Fe::ZERO, Fe::ONE, a]);
    }
    out.push([Fe::ZERO, Fe::ZERO, Fe::ONE]);
    out
}

/// Reproducibility record of a search run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    pub case: Case,
    pub pattern: String,
    pub orbit: Option<usize>,
    pub config: String,
    pub threshold: i64,
    pub d: usize,
    pub basis_hash: String,
    pub total: u64,
    pub range: [u64; 2],
    pub chunk_size: u64,
    pub seed: u64,
    pub dedup: String,
    pub b_values: Option<Vec<[u8; 3]>>,
    pub with_weil: bool,
    pub tower: String,
}

impl RunManifest {
    pub fn for_task(task: &SearchTask, pattern: &str, orbit: Option<usize>, range: [u64; 2], chunk_size: u64) -> Self {
        RunManifest {
            schema: MANIFEST_SCHEMA,
            command: "search".into(),
            case: task.config.case,
            pattern: pattern.into(),
            orbit,
            config: task.config.points_text(),
            threshold: task.threshold,
            d: task.dimension(),
            basis_hash: task.basis.hash(),
            total: task.total(),
            range,
            chunk_size,
            seed: task.seed,
            dedup: if task.b_values.is_some() { "affine slices with fixed b-coefficients".into() } else { DEDUP_RULE.into() },
            b_values: task.b_values.clone(),
            with_weil: task.with_weil,
            tower: tower().manifest(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
struct ChunkState {
    start: u64,
    end: u64,
    next: u64,
    counters: StageCounters,
    done: bool,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub workers: usize,
    pub checkpoint_dir: Option<PathBuf>,
    pub force: bool,
    /// Candidates between stop-flag polls and checkpoint writes.
    pub poll: u64,
    pub progress: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { workers: 1, checkpoint_dir: None, force: false, poll: 1 << 14, progress: false }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchSummary {
    pub manifest: RunManifest,
    pub counters: StageCounters,
    pub survivors: usize,
    pub results_sha256: String,
    pub elapsed_secs: f64,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub summary: SearchSummary,
    pub records: Vec<CandidateRecord>,
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(tmp, path)
}

fn read_records(path: &Path) -> Result<Vec<CandidateRecord>, SearchError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for line in BufReader::new(fs::File::open(path)?).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

/// Survivors as sorted JSON lines.
pub fn records_jsonl(records: &[CandidateRecord]) -> String {
    records.iter().map(|r| serde_json::to_string(r).unwrap() + "\n").collect()
}

/// Runs `manifest.range` of `task` over `opts.workers` threads, resuming
/// from and writing to `opts.checkpoint_dir` when given.
pub fn run_search(task: &SearchTask, manifest: &RunManifest, opts: &SearchOptions, stop: &AtomicBool) -> Result<SearchResult, SearchError> {
    let [start, end] = manifest.range;
    if start > end || end > task.total() {
        return Err(SearchError::Range { start, end, total: task.total() });
    }
    let began = Instant::now();
    if let Some(dir) = &opts.checkpoint_dir {
        prepare_dir(dir, manifest, opts.force)?;
    }
    let chunk = manifest.chunk_size.max(1);
    let chunks: Vec<(u64, u64)> = (start..end).step_by(chunk as usize).map(|s| (s, (s + chunk).min(end))).collect();
    let states: Vec<Mutex<(ChunkState, Vec<CandidateRecord>)>> = chunks
        .iter()
        .enumerate()
        .map(|(i, &(s, e))| {
            let mut st = ChunkState { start: s, end: e, next: s, ..Default::default() };
            let mut recs = Vec::new();
            if let Some(dir) = &opts.checkpoint_dir {
                let p = chunk_path(dir, i, "json");
                if p.exists() {
                    st = serde_json::from_str(&fs::read_to_string(&p)?)?;
                    recs = read_records(&chunk_path(dir, i, "jsonl"))?;
                }
            }
            Ok(Mutex::new((st, recs)))
        })
        .collect::<Result<_, SearchError>>()?;
    let next_chunk = AtomicUsize::new(0);
    let failure: Mutex<Option<SearchError>> = Mutex::new(None);
    let done_count = AtomicUsize::new(states.iter().filter(|s| s.lock().unwrap().0.done).count());
    std::thread::scope(|scope| {
        for _ in 0..opts.workers.max(1) {
            scope.spawn(|| loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next_chunk.fetch_add(1, Ordering::Relaxed);
                if i >= states.len() {
                    break;
                }
                if let Err(e) = run_chunk(task, i, &states[i], opts, stop) {
                    *failure.lock().unwrap() = Some(e);
                    stop.store(true, Ordering::Relaxed);
                    break;
                }
                if states[i].lock().unwrap().0.done {
                    let d = done_count.fetch_add(1, Ordering::Relaxed) + 1;
                    if opts.progress {
                        eprintln!("chunk {}/{} done  [{:.1?}]", d, states.len(), began.elapsed());
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut counters = StageCounters::default();
    let mut by_index: BTreeMap<u64, CandidateRecord> = BTreeMap::new();
    let mut done = 0;
    for s in &states {
        let (st, recs) = &*s.lock().unwrap();
        counters.merge(&st.counters);
        done += st.done as usize;
        for r in recs {
            if r.index < st.next {
                by_index.insert(r.index, r.clone());
            }
        }
    }
    if done < states.len() {
        return Err(SearchError::Interrupted { done, total: states.len() });
    }
    let records: Vec<CandidateRecord> = by_index.into_values().collect();
    let body = records_jsonl(&records);
    let summary = SearchSummary {
        manifest: manifest.clone(),
        counters,
        survivors: records.len(),
        results_sha256: hex::encode(Sha256::digest(body.as_bytes())),
        elapsed_secs: began.elapsed().as_secs_f64(),
    };
    if let Some(dir) = &opts.checkpoint_dir {
        write_atomic(&dir.join("results.jsonl"), &body)?;
        write_atomic(&dir.join("summary.json"), &serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(SearchResult { summary, records })
}

fn chunk_path(dir: &Path, i: usize, ext: &str) -> PathBuf {
    dir.join("chunks").join(format!("{i:06}.{ext}"))
}

fn prepare_dir(dir: &Path, manifest: &RunManifest, force: bool) -> Result<(), SearchError> {
    let mpath = dir.join("manifest.json");
    if force && dir.exists() {
        for sub in ["chunks", "results.jsonl", "summary.json", "manifest.json"] {
            let p = dir.join(sub);
            if p.is_dir() {
                fs::remove_dir_all(&p)?;
            } else if p.exists() {
                fs::remove_file(&p)?;
            }
        }
    }
    if mpath.exists() {
        let old: RunManifest = serde_json::from_str(&fs::read_to_string(&mpath)?)?;
        if &old != manifest {
            return Err(SearchError::ManifestMismatch);
        }
        if dir.join("summary.json").exists() {
            return Err(SearchError::AlreadyComplete(dir.to_path_buf()));
        }
    }
    fs::create_dir_all(dir.join("chunks"))?;
    write_atomic(&mpath, &serde_json::to_string_pretty(manifest)?)?;
    Ok(())
}

fn run_chunk(
    task: &SearchTask,
    i: usize,
    slot: &Mutex<(ChunkState, Vec<CandidateRecord>)>,
    opts: &SearchOptions,
    stop: &AtomicBool,
) -> Result<(), SearchError> {
    let mut st = slot.lock().unwrap().0.clone();
    if st.done {
        return Ok(());
    }
    let mut file = match &opts.checkpoint_dir {
        Some(dir) => Some(fs::OpenOptions::new().create(true).append(true).open(chunk_path(dir, i, "jsonl"))?),
        None => None,
    };
    let mut fresh: Vec<CandidateRecord> = Vec::new();
    while st.next < st.end {
        let upto = (st.next + opts.poll).min(st.end);
        let mut pending = Vec::new();
        let reached = task.iterate_candidates(st.next, upto, &mut st.counters, &mut |r| pending.push(r), stop, opts.poll);
        if let Some(f) = file.as_mut() {
            for r in &pending {
                writeln!(f, "{}", serde_json::to_string(r)?)?;
            }
            f.flush()?;
        }
        fresh.extend(pending);
        st.next = reached;
        st.done = st.next >= st.end;
        if let Some(dir) = &opts.checkpoint_dir {
            write_atomic(&chunk_path(dir, i, "json"), &serde_json::to_string(&st)?)?;
        }
        if reached < upto || stop.load(Ordering::Relaxed) {
            break;
        }
    }
    let mut guard = slot.lock().unwrap();
    guard.0 = st;
    guard.1.extend(fresh);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{curves, orbit_patterns};

    fn rep(selector: &str, i: usize) -> SingularConfig {
        orbit_patterns().find(Case::I, selector).unwrap().representative(i).unwrap()
    }

    #[test]
    fn dimension_thirteen_for_listed_case_one_configs() {
        for p in orbit_patterns().patterns.iter().filter(|p| p.case == Case::I) {
            for i in 1..=p.reps.len() {
                let cfg = p.representative(i).unwrap();
                let m = build_system(&cfg);
                assert_eq!((m.rows, m.rank()), (15, 15), "{}", cfg.render());
                assert_eq!(null_basis(&cfg).unwrap().dim(), 13);
            }
        }
    }

    #[test]
    fn example_relations_hold_on_the_null_space() {
        let cfg = SingularConfig::parse(Case::I, "(0:0:1) (0:1:0) (1:0:0) (1:1:0) (0:1:1)", "").unwrap();
        let basis = null_basis(&cfg).unwrap();
        // a1..a19 of the worked example, by exponent
        let named = [
            [4, 2, 0], [4, 1, 1], [4, 0, 2], [3, 3, 0], [3, 2, 1], [3, 1, 2], [3, 0, 3], [2, 4, 0], [2, 3, 1], [2, 2, 2],
            [2, 1, 3], [2, 0, 4], [1, 4, 1], [1, 3, 2], [1, 2, 3], [1, 1, 4], [0, 4, 2], [0, 3, 3], [0, 2, 4],
        ];
        let idx: Vec<usize> = named.iter().map(|&e| ternary_index(e)).collect();
        let rel: [&[(usize, u8)]; 6] = [
            &[(1, 1), (4, 1), (8, 1)],
            &[(1, 2), (8, 1)],
            &[(2, 1), (5, 1), (9, 1), (13, 1)],
            &[(17, 1), (18, 1), (19, 1)],
            &[(13, 1), (14, 1), (15, 1), (16, 1)],
            &[(17, 1), (19, 2)],
        ];
        for v in &basis.vectors {
            for r in rel {
                let s: u32 = r.iter().map(|&(a, c)| c as u32 * v[idx[a - 1]] as u32).sum();
                assert_eq!(s % 3, 0);
            }
            for (i, &x) in v.iter().enumerate() {
                if !idx.contains(&i) {
                    assert_eq!(x, 0);
                }
            }
        }
    }

    #[test]
    fn candidate_indexing_round_trips() {
        let basis = null_basis(&rep("1,1,1,1,1", 1)).unwrap();
        let space = CandidateSpace::projective(&basis);
        assert_eq!(space.total(), (3u64.pow(13) - 1) / 2);
        for n in [0, 1, 2, 3, 4, 12, 13, 40, 1000, 797_160] {
            let c = space.vector(n);
            assert!(c.iter().any(|&x| x != 0));
            assert_eq!(projective_index(&basis, &c), Some(n));
            let neg: Vec<u8> = c.iter().map(|&x| (3 - x) % 3).collect();
            assert_eq!(projective_index(&basis, &neg), Some(n));
        }
    }

    #[test]
    fn fast_and_reference_paths_agree() {
        let mut task = SearchTask::new(rep("1,1,1,2-indep", 3), 28, None).unwrap();
        task.with_weil = false;
        let stop = AtomicBool::new(false);
        let (a, b) = (300_000, 302_000);
        let mut counters = StageCounters::default();
        let mut fast = Vec::new();
        task.iterate_candidates(a, b, &mut counters, &mut |r| fast.push(r), &stop, 1 << 20);
        let mut reference = Vec::new();
        let mut ref_counters = StageCounters::default();
        for n in a..b {
            ref_counters.visited += 1;
            match task.evaluate(n) {
                Outcome::Rejected(s) => ref_counters.reject(s),
                Outcome::Survivor(r) => {
                    ref_counters.survivors += 1;
                    reference.push(r)
                }
            }
        }
        assert_eq!(fast, reference);
        assert_eq!(counters, ref_counters);
        assert_eq!(counters.rejected() + counters.survivors, b - a);
    }

    #[test]
    fn discriminants_match_tangent_cones() {
        let fx = &curves().curves[0];
        let (f, cfg) = (fx.form(), fx.singular_config());
        let c: Vec<u8> = f.to_vector().iter().map(|v| v.prime_value()).collect();
        for d in discriminant_precompute(&cfg) {
            let (h, _, k) = crate::singularity::tangent_cone(&f, &d.point);
            assert_eq!(d.eval(&c), crate::singularity::discriminant(&h, tower().field(k)));
            assert!(d.eval(&[0; 28]).is_zero());
            let gf = tower().field(d.field_degree);
            let q = d.quadratic_form();
            let via_form = q.iter().fold(Fe::ZERO, |acc, (&(i, j), &v)| acc.add(gf.mul(v, Fe::from_i64((c[i] * c[j]) as i64))));
            assert_eq!(via_form, d.eval(&c));
        }
    }

    #[test]
    fn case_two_slices() {
        let e = orbit_patterns().find(Case::II, "1,1").unwrap();
        let cfg = e.representative(1).unwrap();
        let basis = null_basis(&cfg).unwrap();
        assert_eq!(basis.dim(), 16);
        let slices = affine_slices(&basis, e.b_values.as_ref().unwrap());
        assert_eq!(slices.len(), 6);
        let idx: Vec<usize> = B_MONOMIALS.iter().map(|&m| ternary_index(m)).collect();
        for s in &slices {
            assert_eq!(s.directions.len(), 13);
            assert_eq!(idx.iter().map(|&i| s.offset[i]).collect::<Vec<_>>(), s.b.to_vec());
            for d in &s.directions {
                assert!(idx.iter().all(|&i| d[i] == 0));
            }
        }
    }
}
