//! Group divisible designs over GF(q): the instance model, an exact line-
//! coverage verifier, maximum-index computations, supplementary designs, and
//! divisibility of point multisets.
//!
//! An instance is a triple (ambient space, spread, blocks): the spread is a
//! (g-1)-spread partitioning the points, the blocks are k-dimensional
//! subspaces, and the defining condition is that every line (2-dimensional
//! subspace) lies in exactly lambda blocks or inside one spread element,
//! never both. Only simple designs are modeled; duplicate blocks are an
//! input error.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grassmann::{enumerate_hyperplanes, enumerate_k_subspaces, gaussian_binomial, is_scattered};
use crate::linalg::{add_scaled, digit_at, rref, Subspace};
use crate::params;
use crate::spread::Spread;

/// Cap on [v k]_q for the enumeration-backed operations.
pub const DEFAULT_ENUM_LIMIT: u64 = 1 << 23;

/// Verification runs blocks in parallel above this count.
const PARALLEL_BLOCK_THRESHOLD: usize = 4096;

const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GddParams {
    pub q: u32,
    pub v: u16,
    pub g: u16,
    pub k: u16,
    pub lambda: u64,
}

/// A candidate design: spread plus blocks, with claimed parameters.
/// Construction validates shape (dimensions, ambient, simplicity), not the
/// covering condition; that is what [`GddInstance::verify`] is for.
#[derive(Debug, Clone)]
pub struct GddInstance {
    params: GddParams,
    spread: Spread,
    blocks: Vec<Subspace>,
}

/// Exact verification outcome. `line_histogram` maps block-coverage counts
/// to the number of uncovered lines attaining them, including the 0 entry;
/// a design is valid iff the histogram is concentrated on the claimed lambda.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub params: GddParams,
    pub is_gdd: bool,
    /// The constant coverage, when coverage is constant over uncovered lines.
    pub lambda_observed: Option<u64>,
    pub line_histogram: BTreeMap<u64, BigUint>,
    /// Up to 16 uncovered lines (canonical row pairs) with coverage != lambda.
    pub offending_lines: Vec<(u64, u64)>,
    /// Block count equals the admissibility formula at the claimed lambda.
    pub block_count_matches: bool,
    /// Every point lies in exactly the formula's replication number of blocks.
    pub replication_constant: bool,
}

impl GddInstance {
    /// Validate shape: nontrivial spread, all blocks k-dimensional subspaces
    /// of the spread's ambient space, no duplicates. Blocks are stored sorted
    /// by canonical encoding.
    pub fn new(spread: Spread, k: u16, lambda: u64, mut blocks: Vec<Subspace>) -> Result<GddInstance> {
        if spread.len() <= 1 {
            return Err(Error::TrivialGroupSet);
        }
        let (q, v) = (spread.q(), spread.ambient_dim());
        for b in &blocks {
            if b.q() != q || b.ambient_dim() != v {
                return Err(Error::AmbientMismatch("block outside the spread's space".into()));
            }
            if b.dim() as u16 != k {
                return Err(Error::BlockDimensionMismatch { expected: k, found: b.dim() as u16 });
            }
        }
        blocks.sort_unstable();
        if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateBlocks(format!("{:?}", w[0].row_encodings())));
        }
        let params = GddParams { q, v, g: spread.group_dim(), k, lambda };
        Ok(GddInstance { params, spread, blocks })
    }

    pub fn params(&self) -> GddParams {
        self.params
    }

    pub fn spread(&self) -> &Spread {
        &self.spread
    }

    /// Blocks in canonical sorted order.
    pub fn blocks(&self) -> &[Subspace] {
        &self.blocks
    }

    pub fn into_parts(self) -> (GddParams, Spread, Vec<Subspace>) {
        (self.params, self.spread, self.blocks)
    }

    /// Check the defining covering condition exactly: accumulate, over all
    /// blocks, the coverage count of each of the block's lines, then compare
    /// the distribution against the claimed lambda. A block containing a
    /// spread-covered line is a hard error. Deterministic regardless of the
    /// number of worker threads.
    pub fn verify(&self) -> Result<VerificationReport> {
        let GddParams { q, v, g, k, lambda } = self.params;
        let counts = accumulate_line_coverage(&self.spread, &self.blocks)?;

        let uncovered_total = params::uncovered_line_count(q, v, g);
        let mut histogram: BTreeMap<u64, BigUint> = BTreeMap::new();
        for &c in counts.values() {
            *histogram.entry(c).or_insert_with(BigUint::zero) += 1u32;
        }
        let seen = BigUint::from(counts.len());
        let zeros = &uncovered_total - &seen;
        if !zeros.is_zero() {
            histogram.insert(0, zeros.clone());
        }

        let is_gdd = match histogram.len() {
            0 => true, // no uncovered lines exist at all
            1 => {
                let (&c, n) = histogram.iter().next().unwrap();
                c == lambda && *n == uncovered_total
            }
            _ => false,
        };
        let lambda_observed = match histogram.len() {
            0 => Some(lambda),
            1 => Some(*histogram.keys().next().unwrap()),
            _ => None,
        };

        let mut offending_lines: Vec<(u64, u64)> = counts
            .iter()
            .filter(|&(_, &c)| c != lambda)
            .map(|(&line, _)| line)
            .collect();
        offending_lines.sort_unstable();
        offending_lines.truncate(MAX_WITNESSES);
        // lines silently at coverage 0 are reported through the histogram

        let expected_blocks = params::block_count(q, v, g, k, &BigUint::from(lambda));
        let block_count_matches = expected_blocks == Some(BigUint::from(self.blocks.len()));
        let replication_constant = self.replication_is_constant();

        Ok(VerificationReport {
            params: self.params,
            is_gdd,
            lambda_observed,
            line_histogram: histogram,
            offending_lines,
            block_count_matches,
            replication_constant,
        })
    }

    /// Every point of the ambient space lies in exactly
    /// lambda([v-1 1] - [g-1 1])/[k-1 1] blocks.
    fn replication_is_constant(&self) -> bool {
        let GddParams { q, v, g, k, lambda } = self.params;
        let mut per_point: HashMap<u64, u64> = HashMap::new();
        for b in &self.blocks {
            for p in b.points() {
                *per_point.entry(p).or_insert(0) += 1;
            }
        }
        let expected = match params::replication(q, v, g, k, &BigUint::from(lambda)) {
            Some(r) => r,
            None => return self.blocks.is_empty() && lambda == 0,
        };
        if expected.is_zero() {
            return per_point.is_empty();
        }
        if BigUint::from(per_point.len()) != gaussian_binomial(v as u64, 1, q as u64) {
            return false;
        }
        per_point.values().all(|&c| BigUint::from(c) == expected)
    }
}

/// Coverage count per uncovered line, keyed by the line's canonical row pair,
/// summed over all blocks. Errors with a witness if any block contains a
/// spread-covered line.
fn accumulate_line_coverage(
    spread: &Spread,
    blocks: &[Subspace],
) -> Result<HashMap<(u64, u64), u64>> {
    let q = spread.q();
    let Some(first) = blocks.first() else {
        return Ok(HashMap::new());
    };
    let k = first.dim() as u16;
    // lines of the k-dimensional coordinate space, reused for every block
    let coord_lines: Vec<[u64; 2]> = enumerate_k_subspaces(q, k, 2)?
        .map(|l| {
            let r = l.row_encodings();
            [r[0], r[1]]
        })
        .collect();

    let fold = |mut acc: HashMap<(u64, u64), u64>, block: &Subspace| -> Result<HashMap<_, _>> {
        for line in block_lines(block, &coord_lines) {
            let (l0, l1) = line;
            if spread.covers_line(l0, l1)? {
                return Err(Error::BlockMeetsGroupBadly {
                    block: block.row_encodings().to_vec(),
                    line: vec![l0, l1],
                });
            }
            *acc.entry(line).or_insert(0) += 1;
        }
        Ok(acc)
    };

    if blocks.len() >= PARALLEL_BLOCK_THRESHOLD {
        blocks
            .par_iter()
            .try_fold(HashMap::new, fold)
            .try_reduce(HashMap::new, |mut a, b| {
                if b.len() > a.len() {
                    return Ok(merge_counts(b, a));
                }
                a = merge_counts(a, b);
                Ok(a)
            })
    } else {
        blocks.iter().try_fold(HashMap::new(), fold)
    }
}

fn merge_counts(
    mut big: HashMap<(u64, u64), u64>,
    small: HashMap<(u64, u64), u64>,
) -> HashMap<(u64, u64), u64> {
    for (k, v) in small {
        *big.entry(k).or_insert(0) += v;
    }
    big
}

/// The canonical row pairs of all lines inside a block: coordinate-space
/// lines mapped through the block's basis rows and re-reduced.
fn block_lines<'a>(
    block: &'a Subspace,
    coord_lines: &'a [[u64; 2]],
) -> impl Iterator<Item = (u64, u64)> + 'a {
    let q = block.q();
    let v = block.ambient_dim();
    let rows = block.row_encodings();
    coord_lines.iter().map(move |pair| {
        let mapped = pair.map(|coord| {
            let mut acc = 0u64;
            for (j, &row) in rows.iter().enumerate() {
                let c = digit_at(coord, j as u16, q);
                if c != 0 {
                    acc = add_scaled(q, v, acc, row, c);
                }
            }
            acc
        });
        let reduced = rref(q, v, &mapped);
        debug_assert_eq!(reduced.len(), 2, "independent rows stay independent");
        (reduced[0], reduced[1])
    })
}

/// Maximum index for k = 3, valid for every (g-1)-spread:
/// [v-2 1] - [2 1][g-1 1].
pub fn lambda_max_k3(q: u32, v: u16, g: u16) -> BigUint {
    gaussian_binomial(v as u64 - 2, 1, q as u64)
        - gaussian_binomial(2, 1, q as u64) * gaussian_binomial(g as u64 - 1, 1, q as u64)
}

/// Maximum index for g = 2, k = 4 over a Desarguesian spread:
/// [v-2 2] - 1 - q[2 1][v-4 1] - [v 1]/[2 1] + [4 1]/[2 1].
pub fn lambda_max_g2k4(q: u32, v: u16) -> BigUint {
    let two = gaussian_binomial(2, 1, q as u64);
    let pos = gaussian_binomial(v as u64 - 2, 2, q as u64) + gaussian_binomial(4, 1, q as u64) / &two;
    let neg = BigUint::from(1u32)
        + q * &two * gaussian_binomial(v as u64 - 4, 1, q as u64)
        + gaussian_binomial(v as u64, 1, q as u64) / &two;
    pos - neg
}

/// All k-subspaces scattered with respect to the spread, in canonical order.
/// Guarded by `limit` on the full Grassmannian size.
pub fn scattered_k_subspaces(spread: &Spread, k: u16, limit: u64) -> Result<Vec<Subspace>> {
    let (q, v) = (spread.q(), spread.ambient_dim());
    let total = gaussian_binomial(v as u64, k as u64, q as u64);
    if total > BigUint::from(limit) {
        return Err(Error::TooLarge {
            size: u128::try_from(&total).unwrap_or(u128::MAX),
            limit: limit as u128,
        });
    }
    let mut out = Vec::new();
    for u in enumerate_k_subspaces(q, v, k)? {
        if is_scattered(&u, spread)? {
            out.push(u);
        }
    }
    Ok(out)
}

/// Coverage of every uncovered line by the set of ALL scattered k-subspaces:
/// the maximum index when that coverage is constant, none otherwise (whether
/// a constant exists can depend on the spread).
pub fn lambda_max_bruteforce(spread: &Spread, k: u16, limit: u64) -> Result<Option<u64>> {
    let blocks = scattered_k_subspaces(spread, k, limit)?;
    let counts = accumulate_line_coverage(spread, &blocks)?;
    let (q, v, g) = (spread.q(), spread.ambient_dim(), spread.group_dim());
    let uncovered_total = params::uncovered_line_count(q, v, g);
    if counts.is_empty() {
        return Ok(Some(0));
    }
    if BigUint::from(counts.len()) != uncovered_total {
        return Ok(None); // some lines at zero, others covered
    }
    let mut values = counts.values();
    let first = *values.next().unwrap();
    Ok(values.all(|&c| c == first).then_some(first))
}

/// The complement of the instance's blocks within all scattered k-subspaces,
/// carrying index lambda_max - lambda. Errors when no constant maximum index
/// exists for this spread and k (or the claimed lambda exceeds it).
pub fn supplementary(instance: &GddInstance, limit: u64) -> Result<GddInstance> {
    let GddParams { k, lambda, .. } = instance.params();
    let all = scattered_k_subspaces(instance.spread(), k, limit)?;
    let lambda_max = lambda_max_bruteforce(instance.spread(), k, limit)?.ok_or(Error::NoLambdaMax)?;
    let new_lambda = lambda_max.checked_sub(lambda).ok_or(Error::NoLambdaMax)?;
    let own: std::collections::HashSet<&Subspace> = instance.blocks().iter().collect();
    let complement: Vec<Subspace> = all.into_iter().filter(|b| !own.contains(b)).collect();
    GddInstance::new(instance.spread().clone(), k, new_lambda, complement)
}

/// A multiset of points (1-dimensional subspaces), stored by canonical
/// representative encoding with nonnegative multiplicities.
#[derive(Debug, Clone, Default)]
pub struct PointMultiset {
    q: u32,
    v: u16,
    weights: HashMap<u64, u64>,
}

impl PointMultiset {
    pub fn new(q: u32, v: u16) -> PointMultiset {
        PointMultiset { q, v, weights: HashMap::new() }
    }

    /// Add `mult` copies of the point spanned by a nonzero vector.
    pub fn add_vector(&mut self, enc: u64, mult: u64) -> Result<()> {
        let p = Subspace::from_rows(self.q, self.v, &[enc])?;
        if p.dim() != 1 {
            return Err(Error::NotAPoint(p.dim()));
        }
        *self.weights.entry(p.row_encodings()[0]).or_insert(0) += mult;
        Ok(())
    }

    /// Add `mult` copies of every point of a subspace.
    pub fn add_subspace(&mut self, u: &Subspace, mult: u64) -> Result<()> {
        if u.q() != self.q || u.ambient_dim() != self.v {
            return Err(Error::AmbientMismatch("subspace in a different space".into()));
        }
        for p in u.points() {
            *self.weights.entry(p).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.values().copied().max().unwrap_or(0)
    }

    pub fn weight_of(&self, canonical_point: u64) -> u64 {
        self.weights.get(&canonical_point).copied().unwrap_or(0)
    }

    /// The multiset with weight function lambda - w over ALL points of the
    /// space. Requires lambda >= every current weight.
    pub fn complement(&self, lambda: u64) -> Result<PointMultiset> {
        if self.max_weight() > lambda {
            return Err(Error::DimensionMismatch(format!(
                "complement level {lambda} is below the maximum weight {}",
                self.max_weight()
            )));
        }
        let mut out = PointMultiset::new(self.q, self.v);
        let unit_rows: Vec<u64> = (0..self.v as u32).map(|j| (self.q as u64).pow(j)).collect();
        let whole = Subspace::from_rows(self.q, self.v, &unit_rows)?;
        for p in whole.points() {
            let w = lambda - self.weight_of(p);
            if w > 0 {
                out.weights.insert(p, w);
            }
        }
        Ok(out)
    }
}

/// Largest r such that the multiset total is congruent to the hyperplane
/// intersection total mod q^r for EVERY hyperplane, capped at v - 1 (the
/// empty multiset is divisible by everything). Returns 0 when some
/// hyperplane breaks divisibility by q.
pub fn qr_divisibility(points: &PointMultiset, q: u32, v: u16) -> Result<u32> {
    let cap = v.saturating_sub(1) as u32;
    let total = points.total() as i128;
    let mut r = cap;
    for h in enumerate_hyperplanes(q, v)? {
        let inter: u64 = points
            .weights
            .iter()
            .filter(|(&p, _)| h.contains_vector(p))
            .map(|(_, &w)| w)
            .sum();
        let mut diff = total - inter as i128;
        if diff == 0 {
            continue;
        }
        diff = diff.abs();
        let mut val = 0u32;
        while val < r && diff % q as i128 == 0 {
            diff /= q as i128;
            val += 1;
        }
        r = r.min(val);
        if r == 0 {
            break;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::rng::SplitMix64;
    use crate::spread::desarguesian_spread;

    fn line_spread_2_6() -> Spread {
        let ext = Field::with_default_poly(2, 2).unwrap();
        desarguesian_spread(&ext, 3).unwrap()
    }

    #[test]
    fn maximum_index_closed_form_k3() {
        let cases: &[(u32, u16, u16, u64)] = &[
            (2, 6, 2, 12),
            (2, 6, 3, 6),
            (2, 8, 2, 60),
            (2, 8, 4, 42),
            (2, 9, 3, 118),
            (2, 10, 2, 252),
            (2, 10, 5, 210),
            (2, 12, 2, 1020),
            (2, 12, 3, 1014),
            (2, 12, 4, 1002),
            (2, 12, 6, 930),
            (2, 14, 2, 4092),
            (2, 14, 7, 3906),
            (3, 6, 2, 36),
            (3, 6, 3, 24),
            (3, 8, 4, 312),
            (3, 9, 3, 1077),
            (3, 12, 4, 29472),
        ];
        for &(q, v, g, want) in cases {
            assert_eq!(lambda_max_k3(q, v, g), BigUint::from(want), "({q},{v},{g})");
        }
    }

    #[test]
    fn maximum_index_closed_form_g2_k4() {
        let cases: &[(u32, u16, u64)] =
            &[(2, 8, 480), (2, 10, 10080), (2, 12, 171360), (2, 14, 2782560), (3, 8, 9720)];
        for &(q, v, want) in cases {
            assert_eq!(lambda_max_g2k4(q, v), BigUint::from(want), "({q},{v})");
        }
    }

    #[test]
    fn empty_block_set_is_the_trivial_design() {
        let sp = line_spread_2_6();
        let inst = GddInstance::new(sp, 3, 0, Vec::new()).unwrap();
        let report = inst.verify().unwrap();
        assert!(report.is_gdd);
        assert_eq!(report.lambda_observed, Some(0));
        assert_eq!(report.line_histogram.len(), 1);
        assert_eq!(report.line_histogram[&0], BigUint::from(630u32));
        assert!(report.block_count_matches);
        assert!(report.replication_constant);
    }

    #[test]
    fn all_scattered_blocks_form_the_complete_design() {
        let sp = line_spread_2_6();
        let blocks = scattered_k_subspaces(&sp, 3, DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(blocks.len(), 1080);
        let inst = GddInstance::new(sp, 3, 12, blocks).unwrap();
        let report = inst.verify().unwrap();
        assert!(report.is_gdd);
        assert_eq!(report.lambda_observed, Some(12));
        assert!(report.block_count_matches);
        assert!(report.replication_constant);
    }

    #[test]
    fn bruteforce_maximum_agrees_with_the_closed_form() {
        let sp = line_spread_2_6();
        assert_eq!(lambda_max_bruteforce(&sp, 3, DEFAULT_ENUM_LIMIT).unwrap(), Some(12));

        let ext = Field::with_default_poly(2, 3).unwrap();
        let plane_spread = desarguesian_spread(&ext, 2).unwrap(); // GF(2)^6, g = 3
        assert_eq!(lambda_max_bruteforce(&plane_spread, 3, DEFAULT_ENUM_LIMIT).unwrap(), Some(6));
    }

    #[test]
    fn oversized_enumeration_is_rejected() {
        let sp = line_spread_2_6();
        assert!(matches!(
            scattered_k_subspaces(&sp, 3, 100),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn block_containing_a_covered_line_is_a_hard_error() {
        let sp = line_spread_2_6();
        // extend a spread element by one vector outside it
        let elem = sp.elements()[0].clone();
        let mut rows = elem.row_encodings().to_vec();
        let outside = (1u64..64).find(|&x| !elem.contains_vector(x)).unwrap();
        rows.push(outside);
        let bad = Subspace::from_rows(2, 6, &rows).unwrap();
        assert_eq!(bad.dim(), 3);
        let inst = GddInstance::new(sp, 3, 1, vec![bad]).unwrap();
        assert!(matches!(inst.verify(), Err(Error::BlockMeetsGroupBadly { .. })));
    }

    #[test]
    fn shape_errors_are_rejected_up_front() {
        let sp = line_spread_2_6();
        let b = Subspace::from_rows(2, 6, &[1, 2, 4]).unwrap();
        assert!(matches!(
            GddInstance::new(sp.clone(), 3, 1, vec![b.clone(), b.clone()]),
            Err(Error::DuplicateBlocks(_))
        ));
        let small = Subspace::from_rows(2, 6, &[1, 2]).unwrap();
        assert!(matches!(
            GddInstance::new(sp.clone(), 3, 1, vec![small]),
            Err(Error::BlockDimensionMismatch { expected: 3, found: 2 })
        ));
        let foreign = Subspace::from_rows(2, 4, &[1, 2, 4]).unwrap();
        assert!(matches!(
            GddInstance::new(sp, 3, 1, vec![foreign]),
            Err(Error::AmbientMismatch(_))
        ));

        let whole = Spread::from_elements(vec![Subspace::from_rows(2, 4, &[1, 2, 4, 8]).unwrap()])
            .unwrap();
        assert!(matches!(
            GddInstance::new(whole, 2, 0, Vec::new()),
            Err(Error::TrivialGroupSet)
        ));
    }

    #[test]
    fn double_count_identity_on_arbitrary_block_sets() {
        let sp = line_spread_2_6();
        let all = scattered_k_subspaces(&sp, 3, DEFAULT_ENUM_LIMIT).unwrap();
        let mut rng = SplitMix64::new(97);
        let mut some: Vec<Subspace> =
            (0..60).map(|_| all[rng.below(all.len() as u64) as usize].clone()).collect();
        some.sort_unstable();
        some.dedup();
        let n = some.len() as u64;
        let inst = GddInstance::new(sp, 3, 2, some).unwrap();
        let report = inst.verify().unwrap();
        // sum of coverage over all lines = blocks * [k 2]_q
        let weighted: BigUint = report
            .line_histogram
            .iter()
            .map(|(&c, n)| n * BigUint::from(c))
            .sum();
        assert_eq!(weighted, BigUint::from(n * 7));
        assert!(!report.is_gdd, "random subsets are not designs");
        assert!(!report.offending_lines.is_empty());
        assert!(report.offending_lines.len() <= 16);
    }

    #[test]
    fn supplementary_of_trivial_and_complete() {
        let sp = line_spread_2_6();
        let trivial = GddInstance::new(sp.clone(), 3, 0, Vec::new()).unwrap();
        let complete = supplementary(&trivial, DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(complete.params().lambda, 12);
        assert_eq!(complete.blocks().len(), 1080);
        assert!(complete.verify().unwrap().is_gdd);

        let back = supplementary(&complete, DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(back.params().lambda, 0);
        assert!(back.blocks().is_empty());
        assert!(back.verify().unwrap().is_gdd);
    }

    #[test]
    fn point_multiset_of_a_subspace_is_divisible_by_dimension_minus_one() {
        for (q, v, rows) in [
            (2u32, 6u16, vec![1u64, 2, 4]),
            (2, 6, vec![1, 2, 4, 8]),
            (3, 5, vec![1, 3, 9]),
            (2, 5, vec![5, 2]),
        ] {
            let u = Subspace::from_rows(q, v, &rows).unwrap();
            let k = u.dim() as u32;
            let mut pm = PointMultiset::new(q, v);
            pm.add_subspace(&u, 1).unwrap();
            let r = qr_divisibility(&pm, q, v).unwrap();
            assert!(r >= k - 1, "dim {k} gives divisibility at least {}, got {r}", k - 1);
        }
    }

    #[test]
    fn lambda_fold_subspace_differences() {
        // 3-fold copy of a 3-dimensional subspace of GF(2)^5: hyperplane
        // differences are 0 or 3 * 2^(3-1) / 2 = 3 * 4
        let u = Subspace::from_rows(2, 5, &[1, 2, 4]).unwrap();
        let mut pm = PointMultiset::new(2, 5);
        pm.add_subspace(&u, 3).unwrap();
        assert_eq!(pm.total(), 21);
        let r = qr_divisibility(&pm, 2, 5).unwrap();
        assert_eq!(r, 2);
    }

    #[test]
    fn empty_multiset_is_divisible_by_everything() {
        let pm = PointMultiset::new(2, 6);
        assert_eq!(qr_divisibility(&pm, 2, 6).unwrap(), 5);
    }

    #[test]
    fn complement_preserves_divisibility() {
        let mut rng = SplitMix64::new(2024);
        let (q, v) = (2u32, 5u16);
        let all = enumerate_k_subspaces(q, v, 3).unwrap().collect::<Vec<_>>();
        for _ in 0..100 {
            let mut pm = PointMultiset::new(q, v);
            let m = 1 + rng.below(4);
            for _ in 0..m {
                let u = &all[rng.below(all.len() as u64) as usize];
                pm.add_subspace(u, 1 + rng.below(3)).unwrap();
            }
            let r = qr_divisibility(&pm, q, v).unwrap();
            assert!(r >= 2, "unions of 3-subspaces are 4-divisible");
            let lambda = pm.max_weight() + rng.below(3);
            let comp = pm.complement(lambda).unwrap();
            let rc = qr_divisibility(&comp, q, v).unwrap();
            assert!(rc >= r.min(v as u32 - 1), "complement keeps divisibility: {rc} < {r}");
        }
    }

    #[test]
    fn verify_rejects_wrong_lambda_claim() {
        let sp = line_spread_2_6();
        let blocks = scattered_k_subspaces(&sp, 3, DEFAULT_ENUM_LIMIT).unwrap();
        let inst = GddInstance::new(sp, 3, 11, blocks).unwrap();
        let report = inst.verify().unwrap();
        assert!(!report.is_gdd);
        assert_eq!(report.lambda_observed, Some(12), "coverage is constant, just not 11");
        assert!(!report.block_count_matches);
    }
}
