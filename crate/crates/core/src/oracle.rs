//! Evaluation-based checks that share no code with the symbolic
//! composition engine, plus the exhaustive census of associative
//! multilinear operations.

use std::fmt::Write as _;
use std::io;

use rayon::prelude::*;
use thiserror::Error;

use crate::assoc::{
    compose_closed_form, compose_substitution, is_associative_multilinear, AssocError,
};
use crate::classify::{family_matches, Classification};
use crate::poly::{MultilinearPoly, PolyError, SparsePoly};
use crate::ring::{RingId, Scalar};
use crate::sampling::Sampler;

/// Largest number of evaluations a grid check may perform.
pub const GRID_LIMIT: u128 = 1 << 20;

/// Default candidate budget for `enumerate_associative`.
pub const DEFAULT_BUDGET: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("grid check needs {required} evaluations, limit is {limit}")]
    GridTooLarge { required: u128, limit: u128 },
    #[error("arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },
    #[error("arity must be at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("enumeration needs {required} candidates, budget is {budget}")]
    BudgetExceeded { required: String, budget: u128 },
    #[error("enumeration is not available over {0}")]
    UnsupportedRing(RingId),
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Assoc(#[from] AssocError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Every point of a box `{0, ..., d}^m` large enough to be exact.
    Grid,
    /// `samples` seeded points from `[-value_range, value_range]^m`.
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub mode: OracleMode,
    pub samples: usize,
    pub seed: u64,
    pub value_range: u32,
}

impl OracleConfig {
    pub fn grid() -> Self {
        OracleConfig {
            mode: OracleMode::Grid,
            ..Self::default()
        }
    }

    pub fn random(samples: usize, seed: u64, value_range: u32) -> Self {
        OracleConfig {
            mode: OracleMode::Random,
            samples,
            seed,
            value_range,
        }
    }

    fn validate(&self) -> Result<(), OracleError> {
        if self.mode == OracleMode::Random && self.samples == 0 {
            return Err(OracleError::InvalidConfig(
                "samples must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            mode: OracleMode::Grid,
            samples: 1000,
            seed: 0x5eed_cafe,
            value_range: 10,
        }
    }
}

/// Odometer over `{0, ..., sides[j]-1}`, last coordinate fastest.
struct GridPoints {
    sides: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl GridPoints {
    fn new(sides: Vec<u32>) -> Self {
        let current = Some(vec![0; sides.len()]);
        GridPoints { sides, current }
    }
}

impl Iterator for GridPoints {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for j in (0..next.len()).rev() {
            next[j] += 1;
            if next[j] < self.sides[j] {
                self.current = Some(next);
                return Some(out);
            }
            next[j] = 0;
        }
        Some(out)
    }
}

fn grid_size(sides: &[u32], per_point: u128) -> Result<u128, OracleError> {
    let mut total = per_point;
    for &s in sides {
        total = total.saturating_mul(u128::from(s));
    }
    if total > GRID_LIMIT {
        return Err(OracleError::GridTooLarge {
            required: total,
            limit: GRID_LIMIT,
        });
    }
    Ok(total)
}

fn to_point<R: Scalar>(coords: &[u32]) -> Vec<R> {
    coords.iter().map(|&v| R::from_i64(i64::from(v))).collect()
}

/// Enumerates the configured points, stopping at the first for which `f`
/// yields something.
fn search<R: Scalar, T>(
    cfg: &OracleConfig,
    sides: Vec<u32>,
    per_point: u128,
    mut f: impl FnMut(&[R]) -> Result<Option<T>, OracleError>,
) -> Result<Option<T>, OracleError> {
    cfg.validate()?;
    match cfg.mode {
        OracleMode::Grid => {
            grid_size(&sides, per_point)?;
            for coords in GridPoints::new(sides) {
                if let Some(t) = f(&to_point(&coords))? {
                    return Ok(Some(t));
                }
            }
        }
        OracleMode::Random => {
            let mut sampler = Sampler::new(cfg.seed, cfg.value_range);
            for _ in 0..cfg.samples {
                let point = sampler.point::<R>(sides.len());
                if let Some(t) = f(&point)? {
                    return Ok(Some(t));
                }
            }
        }
    }
    Ok(None)
}

/// A point where `p` and `q` take different values, if the oracle finds one.
/// The grid side for a variable is one more than its degree in `p` or `q`, so
/// grid mode is exact.
pub fn find_difference<R: Scalar>(
    p: &SparsePoly<R>,
    q: &SparsePoly<R>,
    cfg: &OracleConfig,
) -> Result<Option<Vec<R>>, OracleError> {
    if p.nvars() != q.nvars() {
        return Err(OracleError::ArityMismatch {
            left: p.nvars(),
            right: q.nvars(),
        });
    }
    let (dp, dq) = (p.degrees(), q.degrees());
    let sides = dp.iter().zip(&dq).map(|(a, b)| a.max(b) + 1).collect();
    search(cfg, sides, 1, |x: &[R]| {
        Ok((p.evaluate(x)? != q.evaluate(x)?).then(|| x.to_vec()))
    })
}

pub fn polys_equal_oracle<R: Scalar>(
    p: &SparsePoly<R>,
    q: &SparsePoly<R>,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    Ok(find_difference(p, q, cfg)?.is_none())
}

/// A point where the bracketing at `slot` disagrees with the first one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointFailure<R> {
    pub slot: usize,
    pub point: Vec<R>,
    /// Value with the inner call in slot 1.
    pub first: R,
    /// Value with the inner call in `slot`.
    pub other: R,
}

/// `p(x_1, ..., x_{i-1}, p(x_i, ..., x_{i+n-1}), x_{i+n}, ..., x_{2n-1})`
/// evaluated numerically.
pub fn bracket_value<R: Scalar>(
    p: &SparsePoly<R>,
    slot: usize,
    point: &[R],
) -> Result<R, OracleError> {
    let n = p.nvars();
    let inner = p.evaluate(&point[slot - 1..slot - 1 + n])?;
    let mut outer = Vec::with_capacity(n);
    outer.extend_from_slice(&point[..slot - 1]);
    outer.push(inner);
    outer.extend_from_slice(&point[slot - 1 + n..]);
    Ok(p.evaluate(&outer)?)
}

/// First failing point (grid points in odometer order, smallest slot first).
pub fn assoc_pointwise_detailed<R: Scalar>(
    p: &SparsePoly<R>,
    cfg: &OracleConfig,
) -> Result<Option<PointFailure<R>>, OracleError> {
    let n = p.nvars();
    if n < 2 {
        return Err(OracleError::ArityTooSmall(n));
    }
    // degree of a bracketing in any variable is at most D^2
    let d = p.degrees().into_iter().max().unwrap_or(0);
    let side = d.saturating_mul(d).max(d) + 1;
    let sides = vec![side; 2 * n - 1];
    search(cfg, sides, (n - 1) as u128, |x: &[R]| {
        let first = bracket_value(p, 1, x)?;
        for slot in 2..=n {
            let other = bracket_value(p, slot, x)?;
            if other != first {
                return Ok(Some(PointFailure {
                    slot,
                    point: x.to_vec(),
                    first,
                    other,
                }));
            }
        }
        Ok(None)
    })
}

pub fn assoc_pointwise<R: Scalar>(
    p: &SparsePoly<R>,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    Ok(assoc_pointwise_detailed(p, cfg)?.is_none())
}

// ------------------------------------------------------------------ census

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Runs the full decision on every table.
    Exhaustive,
    /// Skips tables rejected by cheap necessary conditions first.
    Pruned,
}

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub n: usize,
    pub bound: u32,
    pub strategy: Strategy,
    pub budget: u128,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Seed of the random spot check run on every associative candidate.
    pub seed: u64,
    /// Points of that spot check; zero disables it.
    pub spot_samples: usize,
}

impl EnumerationConfig {
    pub fn new(n: usize, bound: u32) -> Self {
        EnumerationConfig {
            n,
            bound,
            strategy: Strategy::Exhaustive,
            budget: DEFAULT_BUDGET,
            jobs: None,
            seed: 0x5eed_cafe,
            spot_samples: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub tag: &'static str,
    pub clause: &'static str,
    pub params: String,
    pub count: u64,
}

/// A candidate on which two independent checks disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub index: u128,
    pub poly: String,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Candidate<R: Scalar> {
    pub index: u128,
    pub poly: MultilinearPoly<R>,
    pub classification: Classification<R>,
}

#[derive(Clone, Debug)]
pub struct EnumerationReport<R: Scalar> {
    pub ring: RingId,
    pub n: usize,
    pub bound: u32,
    pub strategy: Strategy,
    pub total: u128,
    /// Tables that reached the full decision.
    pub examined: u128,
    pub associative: Vec<Candidate<R>>,
    pub census: Vec<CensusRow>,
    /// Symbolic verdict vs grid oracle.
    pub oracle_discrepancies: Vec<Discrepancy>,
    /// Closed form vs substitution on associative candidates.
    pub dual_path_mismatches: Vec<Discrepancy>,
    /// Random spot-check failures on associative candidates.
    pub spot_failures: Vec<Discrepancy>,
    pub unclassified: Vec<Discrepancy>,
    pub double_classified: Vec<Discrepancy>,
}

impl<R: Scalar> EnumerationReport<R> {
    pub fn is_clean(&self) -> bool {
        self.oracle_discrepancies.is_empty()
            && self.dual_path_mismatches.is_empty()
            && self.spot_failures.is_empty()
            && self.unclassified.is_empty()
            && self.double_classified.is_empty()
    }

    pub fn census_csv(&self) -> String {
        let mut out = String::from("type,params,count\n");
        for row in &self.census {
            let _ = writeln!(out, "{},{},{}", row.tag, row.params, row.count);
        }
        out
    }

    pub fn write_census_csv(&self, w: &mut impl io::Write) -> io::Result<()> {
        w.write_all(self.census_csv().as_bytes())
    }

    /// One canonical polynomial per line, in enumeration order.
    pub fn candidates_text(&self) -> String {
        let mut out = String::new();
        for c in &self.associative {
            let _ = writeln!(out, "{}", c.poly.to_sparse());
        }
        out
    }
}

/// `(2b+1)^(2^n)` over ℤ, its square over ℤ[i]; `None` on overflow.
pub fn candidate_count(box_len: usize, n: usize) -> Option<u128> {
    let exp = u32::try_from(1u64.checked_shl(n as u32)?).ok()?;
    (box_len as u128).checked_pow(exp)
}

/// Necessary conditions for associativity of a multilinear table: with
/// `c_[n] = 0` the polynomial has degree at most one and `c_{1}`, `c_{n}`
/// are idempotent; with `c_[n] ≠ 0` it is symmetric.
pub fn passes_prefilter<R: Scalar>(m: &MultilinearPoly<R>) -> bool {
    let n = m.arity();
    let top = m.coeff(crate::poly::full_set(n));
    if top.is_zero() {
        let c1 = m.coeff(1);
        let cn = m.coeff(1 << (n - 1));
        m.degree() <= 1 && c1.clone() * c1.clone() == c1 && cn.clone() * cn.clone() == cn
    } else {
        m.is_symmetric()
    }
}

fn table_at<R: Scalar>(
    index: u128,
    n: usize,
    values: &[R],
) -> Result<MultilinearPoly<R>, PolyError> {
    let len = 1usize << n;
    let base = values.len() as u128;
    let mut table = vec![R::zero(); len];
    let mut rest = index;
    // subset 0 is the most significant digit
    for slot in (0..len).rev() {
        table[slot] = values[(rest % base) as usize].clone();
        rest /= base;
    }
    MultilinearPoly::from_table(n, &table)
}

#[derive(Default)]
struct ChunkResult<R: Scalar> {
    examined: u128,
    associative: Vec<Candidate<R>>,
    oracle: Vec<Discrepancy>,
    dual: Vec<Discrepancy>,
    spot: Vec<Discrepancy>,
    unclassified: Vec<Discrepancy>,
    double: Vec<Discrepancy>,
}

fn examine<R: Scalar>(
    index: u128,
    m: MultilinearPoly<R>,
    cfg: &EnumerationConfig,
    out: &mut ChunkResult<R>,
) -> Result<(), OracleError> {
    out.examined += 1;
    let sparse = m.to_sparse();
    let discrepancy = |detail: String| Discrepancy {
        index,
        poly: sparse.to_string(),
        detail,
    };
    let symbolic = is_associative_multilinear(&m)?.is_associative();
    let pointwise = assoc_pointwise(&sparse, &OracleConfig::grid())?;
    if symbolic != pointwise {
        out.oracle.push(discrepancy(format!(
            "symbolic {symbolic}, grid oracle {pointwise}"
        )));
    }
    if !symbolic {
        return Ok(());
    }
    for slot in 1..=cfg.n {
        let closed = compose_closed_form(&m, slot)?.to_sparse();
        let subst = compose_substitution(&sparse, slot)?;
        if !polys_equal_oracle(&closed, &subst, &OracleConfig::grid())? {
            out.dual
                .push(discrepancy(format!("compositions differ at slot {slot}")));
        }
    }
    if cfg.spot_samples > 0 {
        let spot = OracleConfig::random(cfg.spot_samples, cfg.seed ^ index as u64, 5);
        if let Some(f) = assoc_pointwise_detailed(&sparse, &spot)? {
            out.spot.push(discrepancy(format!(
                "slot {} fails at a random point",
                f.slot
            )));
        }
    }
    let mut found = family_matches(&m);
    match found.len() {
        0 => out
            .unclassified
            .push(discrepancy("no family matches".into())),
        1 => out.associative.push(Candidate {
            index,
            poly: m,
            classification: found.remove(0),
        }),
        _ => {
            let tags: Vec<_> = found.iter().map(Classification::tag).collect();
            out.double
                .push(discrepancy(format!("matches {}", tags.join(", "))));
        }
    }
    Ok(())
}

fn run_chunk<R: Scalar>(
    indices: impl Iterator<Item = u128>,
    values: &[R],
    cfg: &EnumerationConfig,
) -> Result<ChunkResult<R>, OracleError> {
    let mut out = ChunkResult {
        examined: 0,
        associative: Vec::new(),
        oracle: Vec::new(),
        dual: Vec::new(),
        spot: Vec::new(),
        unclassified: Vec::new(),
        double: Vec::new(),
    };
    for index in indices {
        let m = table_at(index, cfg.n, values)?;
        if cfg.strategy == Strategy::Pruned && !passes_prefilter(&m) {
            continue;
        }
        examine(index, m, cfg, &mut out)?;
    }
    Ok(out)
}

fn index_of_digits(digits: &[usize], base: u128) -> u128 {
    digits.iter().fold(0, |acc, &d| acc * base + d as u128)
}

/// Steps `digits` through `0..limits[k]`, last position fastest; `false`
/// once it wraps around.
fn advance(digits: &mut [usize], limits: &[usize]) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < limits[k] {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// Indices of exactly the tables accepted by `passes_prefilter`, ascending.
pub fn prefiltered_indices<R: Scalar>(n: usize, values: &[R]) -> Vec<u128> {
    let len = 1usize << n;
    let base = values.len() as u128;
    let pos = |v: &R| values.iter().position(|x| x == v);
    let Some(zero) = pos(&R::zero()) else {
        return Vec::new();
    };
    let idem: Vec<usize> = std::iter::once(zero).chain(pos(&R::one())).collect();
    let mut out = Vec::new();

    // degree <= 1: free constant and middle singletons, idempotent ends
    let mut limits = vec![values.len(); n + 1];
    limits[1] = idem.len();
    limits[n] = idem.len();
    let mut choice = vec![0usize; n + 1];
    loop {
        let mut digits = vec![zero; len];
        digits[0] = choice[0];
        for j in 0..n {
            let c = choice[j + 1];
            digits[1 << j] = if j == 0 || j == n - 1 { idem[c] } else { c };
        }
        out.push(index_of_digits(&digits, base));
        if !advance(&mut choice, &limits) {
            break;
        }
    }

    // nonzero top coefficient: symmetric, one value per subset size
    let limits = vec![values.len(); n + 1];
    let mut level = vec![0usize; n + 1];
    loop {
        if level[n] != zero {
            let digits: Vec<usize> = (0..len)
                .map(|s| level[(s as u64).count_ones() as usize])
                .collect();
            out.push(index_of_digits(&digits, base));
        }
        if !advance(&mut level, &limits) {
            break;
        }
    }
    out.sort_unstable();
    out
}

const CLAUSE_ORDER: [&str; 6] = ["i", "ii", "iii", "iv", "v", "vi"];

fn build_census<R: Scalar>(candidates: &[Candidate<R>]) -> Vec<CensusRow> {
    let mut rows: Vec<CensusRow> = Vec::new();
    for c in candidates {
        let cls = &c.classification;
        let params = cls
            .params()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        let tag = cls.tag();
        match rows.iter_mut().find(|r| r.tag == tag && r.params == params) {
            Some(r) => r.count += 1,
            None => rows.push(CensusRow {
                tag,
                clause: cls.clause().unwrap_or("-"),
                params,
                count: 1,
            }),
        }
    }
    // stable: first appearance within a family is kept
    rows.sort_by_key(|r| CLAUSE_ORDER.iter().position(|c| *c == r.clause));
    rows
}

/// Runs every multilinear table with entries in the coefficient box through
/// the symbolic decision and the independent checks, in index order.
pub fn enumerate_associative<R: Scalar>(
    cfg: &EnumerationConfig,
) -> Result<EnumerationReport<R>, OracleError> {
    let n = cfg.n;
    if n < 2 {
        return Err(OracleError::ArityTooSmall(n));
    }
    if n > crate::assoc::MAX_ARITY {
        return Err(AssocError::ArityTooLarge(n).into());
    }
    let values = R::enumeration_box(cfg.bound).ok_or(OracleError::UnsupportedRing(R::RING))?;
    let total = candidate_count(values.len(), n)
        .filter(|&t| t <= cfg.budget)
        .ok_or_else(|| OracleError::BudgetExceeded {
            required: match candidate_count(values.len(), n) {
                Some(t) => t.to_string(),
                None => format!("{}^{}", values.len(), 1u128 << n.min(127)),
            },
            budget: cfg.budget,
        })?;
    if cfg.jobs == Some(0) {
        return Err(OracleError::InvalidConfig("jobs must be positive".into()));
    }

    const CHUNK: u128 = 256;
    let pruned = match cfg.strategy {
        Strategy::Pruned => Some(prefiltered_indices(n, &values)),
        Strategy::Exhaustive => None,
    };
    let work = || -> Result<Vec<ChunkResult<R>>, OracleError> {
        match &pruned {
            Some(idx) => idx
                .par_chunks(CHUNK as usize)
                .map(|c| run_chunk(c.iter().copied(), &values, cfg))
                .collect(),
            None => (0..total.div_ceil(CHUNK) as u64)
                .into_par_iter()
                .map(|k| {
                    let k = u128::from(k);
                    run_chunk(k * CHUNK..((k + 1) * CHUNK).min(total), &values, cfg)
                })
                .collect(),
        }
    };
    let parts = match cfg.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| OracleError::InvalidConfig(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let mut report = EnumerationReport {
        ring: R::RING,
        n,
        bound: cfg.bound,
        strategy: cfg.strategy,
        total,
        examined: 0,
        associative: Vec::new(),
        census: Vec::new(),
        oracle_discrepancies: Vec::new(),
        dual_path_mismatches: Vec::new(),
        spot_failures: Vec::new(),
        unclassified: Vec::new(),
        double_classified: Vec::new(),
    };
    for part in parts {
        report.examined += part.examined;
        report.associative.extend(part.associative);
        report.oracle_discrepancies.extend(part.oracle);
        report.dual_path_mismatches.extend(part.dual);
        report.spot_failures.extend(part.spot);
        report.unclassified.extend(part.unclassified);
        report.double_classified.extend(part.double);
    }
    report.census = build_census(&report.associative);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::GaussianInteger;
    use num_bigint::BigInt;

    const WORKED: &str = "9*x1*x2*x3 + 3*(x1*x2 + x2*x3 + x3*x1) + x1 + x2 + x3";

    fn pz(s: &str, n: usize) -> SparsePoly<BigInt> {
        parse_poly(s, n).unwrap()
    }

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn grid_odometer_order() {
        let pts: Vec<_> = GridPoints::new(vec![2, 3]).collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts[1], vec![0, 1]);
        assert_eq!(pts[5], vec![1, 2]);
        assert_eq!(GridPoints::new(vec![]).count(), 1);
    }

    #[test]
    fn equality_examples() {
        let g = OracleConfig::grid();
        let p = pz(WORKED, 3);
        let m = p.to_multilinear().unwrap();
        let closed = compose_closed_form(&m, 1).unwrap().to_sparse();
        let subst = compose_substitution(&p, 1).unwrap();
        assert!(polys_equal_oracle(&closed, &subst, &g).unwrap());
        assert!(polys_equal_oracle(&pz("x1 + x2", 2), &pz("x2 + x1", 2), &g).unwrap());
        assert_eq!(
            find_difference(&pz("x1*x2", 2), &pz("x1 + x2", 2), &g).unwrap(),
            Some(vec![z(0), z(1)])
        );
        // x^2 and x agree on {0,1}; the degree-aware side catches them
        assert!(!polys_equal_oracle(&pz("x1^2", 1), &pz("x1", 1), &g).unwrap());
        assert!(matches!(
            polys_equal_oracle(&pz("x1", 1), &pz("x1", 2), &g),
            Err(OracleError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn pointwise_examples() {
        let g = OracleConfig::grid();
        assert!(assoc_pointwise(&pz(WORKED, 3), &g).unwrap());
        assert!(assoc_pointwise(&pz("7", 4), &g).unwrap());
        let f = assoc_pointwise_detailed(&pz("2*x1*x2 + x1", 2), &g)
            .unwrap()
            .unwrap();
        assert_eq!(f.slot, 2);
        assert_eq!(f.point, vec![z(1), z(0), z(1)]);
        assert_eq!((f.first, f.other), (z(3), z(1)));
        let r = OracleConfig::random(200, 1, 4);
        assert!(assoc_pointwise(&pz("x1 - x2 + x3", 3), &r).unwrap());
        assert!(!assoc_pointwise(&pz("x1^2 + x2", 2), &r).unwrap());
        assert!(!assoc_pointwise(&pz("x1^2 + x2", 2), &g).unwrap());
    }

    #[test]
    fn grid_guard() {
        let p = pz("x1^40*x2", 2);
        assert!(matches!(
            assoc_pointwise(&p, &OracleConfig::grid()),
            Err(OracleError::GridTooLarge { .. })
        ));
        assert!(OracleConfig::random(0, 1, 1).validate().is_err());
    }

    #[test]
    fn census_n2_bound1() {
        let rep = enumerate_associative::<BigInt>(&EnumerationConfig::new(2, 1)).unwrap();
        assert_eq!(rep.total, 81);
        assert!(rep.is_clean());
        assert!(rep.census.iter().all(|r| r.tag != "twisted-sum"));
        let count = |tag: &str| {
            rep.census
                .iter()
                .filter(|r| r.tag == tag)
                .map(|r| r.count)
                .sum::<u64>()
        };
        assert_eq!(count("constant"), 3);
        assert_eq!(count("left-projection"), 1);
        assert_eq!(count("right-projection"), 1);
        assert_eq!(count("translated-sum"), 3);
        assert!(rep
            .census_csv()
            .starts_with("type,params,count\nconstant,c=-1,1\n"));
    }

    #[test]
    fn pruning_matches_exhaustive_at_n2() {
        let mut cfg = EnumerationConfig::new(2, 2);
        cfg.spot_samples = 0;
        let full = enumerate_associative::<BigInt>(&cfg).unwrap();
        cfg.strategy = Strategy::Pruned;
        let pruned = enumerate_associative::<BigInt>(&cfg).unwrap();
        assert!(pruned.examined < full.examined);
        let idx = |r: &EnumerationReport<BigInt>| {
            r.associative.iter().map(|c| c.index).collect::<Vec<_>>()
        };
        assert_eq!(idx(&full), idx(&pruned));
        assert_eq!(full.census, pruned.census);
    }

    #[test]
    fn census_deterministic_across_jobs() {
        let mut cfg = EnumerationConfig::new(2, 2);
        cfg.jobs = Some(1);
        let a = enumerate_associative::<BigInt>(&cfg).unwrap();
        cfg.jobs = Some(4);
        let b = enumerate_associative::<BigInt>(&cfg).unwrap();
        assert_eq!(a.census_csv(), b.census_csv());
        assert_eq!(a.candidates_text(), b.candidates_text());
    }

    #[test]
    fn prefilter_generator_matches_filter() {
        for (n, bound) in [(2, 2), (3, 1)] {
            let values = BigInt::enumeration_box(bound).unwrap();
            let total = candidate_count(values.len(), n).unwrap();
            let scanned: Vec<u128> = (0..total)
                .filter(|&i| passes_prefilter(&table_at(i, n, &values).unwrap()))
                .collect();
            assert_eq!(prefiltered_indices(n, &values), scanned);
        }
    }

    #[test]
    fn gaussian_census_twisted_rows() {
        let mut cfg = EnumerationConfig::new(3, 1);
        cfg.strategy = Strategy::Pruned;
        cfg.spot_samples = 0;
        let rep = enumerate_associative::<GaussianInteger>(&cfg).unwrap();
        assert_eq!(rep.total, 43_046_721);
        assert!(rep.is_clean());
        let twisted: Vec<_> = rep
            .census
            .iter()
            .filter(|r| r.tag == "twisted-sum")
            .collect();
        assert_eq!(twisted.len(), 1);
        assert_eq!(twisted[0].params, "omega=-1");
        assert_eq!(twisted[0].count, 1);
    }

    #[test]
    fn budget_and_ring_errors() {
        let mut cfg = EnumerationConfig::new(4, 2);
        cfg.budget = 1000;
        assert!(matches!(
            enumerate_associative::<BigInt>(&cfg),
            Err(OracleError::BudgetExceeded { .. })
        ));
        let cfg = EnumerationConfig::new(2, 1);
        assert!(matches!(
            enumerate_associative::<num_rational::BigRational>(&cfg),
            Err(OracleError::UnsupportedRing(RingId::Rationals))
        ));
        assert_eq!(candidate_count(5, 2), Some(625));
        assert_eq!(candidate_count(5, 7), None);
    }
}
