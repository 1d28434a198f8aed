//! Fat-subspace constructions over a Desarguesian spread.
//!
//! A k-subspace of GF(q)^{gs} is *fat* when its GF(q)-basis stays linearly
//! independent over GF(q^g) after unflattening. Fat subspaces are scattered
//! with respect to the Desarguesian spread, and unions of determinant classes
//! of fat s-subspaces form group divisible designs with an index given by a
//! closed formula. This module provides the counting formula, the determinant
//! class invariant, the design builder, and the projection transformer that
//! turns a Steiner system into a design one dimension down.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gdd::GddInstance;
use crate::grassmann::{enumerate_k_subspaces, gaussian_binomial, is_fat};
use crate::linalg::Subspace;
use crate::rng::SplitMix64;
use crate::spread::{desarguesian_spread, Spread};

/// Largest number of k-subspaces `build_fat_design` will enumerate.
const ENUM_LIMIT: u64 = 1 << 23;

/// Number of fat k-subspaces of GF(q)^{gs}:
/// q^{(g-1)·C(k,2)} · prod_{i=0}^{k-1} (q^{g(s-i)} - 1) / (q^{k-i} - 1).
///
/// Requires 1 <= k <= s; the quotient is exact.
pub fn fat_count(q: u32, g: u32, s: u32, k: u32) -> BigUint {
    assert!(k >= 1 && k <= s, "fat_count requires 1 <= k <= s");
    let qb = BigUint::from(q);
    let mut num = qb.pow((g - 1) * (k * (k - 1) / 2));
    let mut den = BigUint::one();
    for i in 0..k {
        num *= qb.pow(g * (s - i)) - 1u32;
        den *= qb.pow(k - i) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// Canonical label of the coset x·GF(q)* in GF(q^g)*: the minimum integer
/// encoding among the q-1 scalar multiples of x. Requires x != 0.
pub fn coset_label(ext: &Field, x: u32) -> u32 {
    assert!(x != 0, "zero has no multiplicative coset");
    (1..ext.q()).map(|c| ext.mul(x, c)).min().unwrap()
}

/// All coset labels of GF(q^g)*/GF(q)*, sorted ascending.
/// There are (q^g - 1)/(q - 1) of them and the first is always 1.
pub fn coset_labels(ext: &Field) -> Vec<u32> {
    let mut labels: Vec<u32> = (1..ext.order() as u32).map(|x| coset_label(ext, x)).collect();
    labels.sort_unstable();
    labels.dedup();
    labels
}

/// Determinant of a square matrix over the extension field, by Gaussian
/// elimination. Rows are consumed. Returns 0 when the matrix is singular.
pub(crate) fn ext_determinant(ext: &Field, m: &mut [Vec<u32>]) -> u32 {
    let n = m.len();
    let mut det = 1u32;
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| m[i][col] != 0) else {
            return 0;
        };
        if p != col {
            m.swap(p, col);
            det = ext.mul(det, ext.neg(1));
        }
        let pivot = m[col][col];
        det = ext.mul(det, pivot);
        let inv = ext.inv(pivot);
        for j in col..n {
            m[col][j] = ext.mul(m[col][j], inv);
        }
        for i in (col + 1)..n {
            if m[i][col] != 0 {
                let c = m[i][col];
                for j in col..n {
                    let t = ext.mul(c, m[col][j]);
                    m[i][j] = ext.sub(m[i][j], t);
                }
            }
        }
    }
    det
}

/// Determinant class of a fat s-subspace: the coset label of the determinant
/// of the unflattened basis matrix. Independent of the choice of basis, since
/// a GF(q)-basis change multiplies the determinant by an element of GF(q)*.
pub fn det_invariant(u: &Subspace, ext: &Field) -> Result<u32> {
    if u.q() != ext.q() {
        return Err(Error::AmbientMismatch(format!(
            "subspace over GF({}), extension over GF({})",
            u.q(),
            ext.q()
        )));
    }
    let g = ext.g() as u16;
    if u.ambient_dim() % g != 0 {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimension {} is not a multiple of g = {g}",
            u.ambient_dim()
        )));
    }
    let s = (u.ambient_dim() / g) as usize;
    if u.dim() != s {
        return Err(Error::WrongDimension { expected: s, found: u.dim() });
    }
    let mut m: Vec<Vec<u32>> =
        u.row_encodings().iter().map(|&r| ext.unflatten(r, s)).collect();
    let det = ext_determinant(ext, &mut m);
    if det == 0 {
        return Err(Error::NotFat(format!(
            "basis is dependent over GF({}^{})",
            ext.q(),
            ext.g()
        )));
    }
    Ok(coset_label(ext, det))
}

/// A choice of determinant classes for the k = s design builder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSelection {
    chosen_classes: Vec<u32>,
}

impl OrbitSelection {
    /// Canonicalizes each entry to its coset label, sorts, and rejects
    /// encodings outside GF(q^g)* as well as entries naming the same class
    /// twice.
    pub fn new(ext: &Field, classes: &[u32]) -> Result<OrbitSelection> {
        if classes.is_empty() {
            return Err(Error::SelectionRequired);
        }
        let mut chosen = Vec::with_capacity(classes.len());
        for &c in classes {
            if c == 0 || c as u64 >= ext.order() {
                return Err(Error::SelectionOutOfRange(c));
            }
            chosen.push(coset_label(ext, c));
        }
        chosen.sort_unstable();
        for w in chosen.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DecodeError(format!(
                    "classes name the coset {} more than once",
                    w[0]
                )));
            }
        }
        Ok(OrbitSelection { chosen_classes: chosen })
    }

    /// Number of chosen classes.
    pub fn alpha(&self) -> u32 {
        self.chosen_classes.len() as u32
    }

    /// Canonical labels, sorted ascending.
    pub fn chosen_classes(&self) -> &[u32] {
        &self.chosen_classes
    }

    fn contains(&self, label: u32) -> bool {
        self.chosen_classes.binary_search(&label).is_ok()
    }
}

/// Index of the fat-subspace design on GF(q)^{gs}.
///
/// For 3 <= k < s the design takes all fat k-subspaces and
/// lambda = q^{(g-1)(C(k,2)-1)} · prod_{i=2}^{k-1} (q^{g(s-i)}-1)/(q^{k-i}-1);
/// alpha must be 1. For k = s it takes alpha determinant classes and
/// lambda = alpha · q^{(g-1)(C(s,2)-1)} · prod_{i=2}^{s-2} (q^{gi}-1)/(q^i-1),
/// where an empty product (s = 3) is 1.
pub fn fat_design_lambda(q: u32, g: u32, s: u32, k: u32, alpha: u32) -> BigUint {
    assert!((3..=s).contains(&k), "requires 3 <= k <= s");
    assert!(alpha >= 1, "alpha must be positive");
    assert!(k == s || alpha == 1, "alpha applies only to k = s");
    let qb = BigUint::from(q);
    let mut num = BigUint::from(alpha) * qb.pow((g - 1) * (k * (k - 1) / 2 - 1));
    let mut den = BigUint::one();
    if k < s {
        for i in 2..k {
            num *= qb.pow(g * (s - i)) - 1u32;
            den *= qb.pow(k - i) - 1u32;
        }
    } else {
        for i in 2..s.saturating_sub(1) {
            num *= qb.pow(g * i) - 1u32;
            den *= qb.pow(i) - 1u32;
        }
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// Builds the fat-subspace design on GF(q)^{gs} over the Desarguesian spread.
///
/// For k < s the block set is every fat k-subspace and `selection` must be
/// absent; for k = s it is the fat s-subspaces whose determinant class lies
/// in `selection`, which is then required. The returned instance carries the
/// formula's lambda and verifies against it.
pub fn build_fat_design(
    q: u32,
    g: u32,
    s: u16,
    k: u16,
    selection: Option<&OrbitSelection>,
) -> Result<GddInstance> {
    if g < 2 || s < 3 || k < 3 || k > s {
        return Err(Error::DimensionMismatch(format!(
            "need g >= 2, s >= 3, 3 <= k <= s; got g={g}, s={s}, k={k}"
        )));
    }
    let v32 = g * s as u32;
    if v32 > u16::MAX as u32 {
        return Err(Error::TooLarge { size: v32 as u128, limit: u16::MAX as u128 });
    }
    let v = v32 as u16;
    let total = gaussian_binomial(v as u64, k as u64, q as u64);
    if total > BigUint::from(ENUM_LIMIT) {
        return Err(Error::TooLarge {
            size: u128::try_from(&total).unwrap_or(u128::MAX),
            limit: ENUM_LIMIT as u128,
        });
    }
    let ext = Field::with_default_poly(q, g)?;
    let alpha = if k == s {
        match selection {
            Some(sel) => sel.alpha(),
            None => return Err(Error::SelectionRequired),
        }
    } else {
        if selection.is_some() {
            return Err(Error::DimensionMismatch(
                "a class selection applies only when k = s".into(),
            ));
        }
        1
    };
    let spread = desarguesian_spread(&ext, s)?;
    let candidates: Vec<Subspace> = enumerate_k_subspaces(q, v, k)?.collect();
    let blocks: Vec<Subspace> = candidates
        .into_par_iter()
        .map(|u| -> Result<Option<Subspace>> {
            if !is_fat(&u, &ext)? {
                return Ok(None);
            }
            if k == s {
                let label = det_invariant(&u, &ext)?;
                if !selection.unwrap().contains(label) {
                    return Ok(None);
                }
            }
            Ok(Some(u))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let lambda_big = fat_design_lambda(q, g, s as u32, k as u32, alpha);
    let lambda = u64::try_from(&lambda_big).map_err(|_| Error::TooLarge {
        size: u128::try_from(&lambda_big).unwrap_or(u128::MAX),
        limit: u64::MAX as u128,
    })?;
    GddInstance::new(spread, k, lambda, blocks)
}

/// Projects a Steiner system 2-(v+1, k, 1)_q through one of its points P,
/// yielding a (v, k-1, k, q^2)_q design candidate: blocks through P project
/// to the groups (a (k-2)-spread if the input really is Steiner), the rest
/// project to the blocks. The result is returned unverified.
///
/// `sample` random lines are first checked to lie in exactly one block each;
/// 0 skips the check. The full Steiner property is quadratic in the block
/// count and is never checked here.
pub fn gdd_from_steiner(
    design_blocks: &[Subspace],
    p: &Subspace,
    sample: u32,
    seed: u64,
) -> Result<GddInstance> {
    if p.dim() != 1 {
        return Err(Error::NotAPoint(p.dim()));
    }
    let q = p.q();
    let v = p.ambient_dim();
    let first = design_blocks
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no blocks given".into()))?;
    let k = first.dim() as u16;
    for b in design_blocks {
        if b.q() != q || b.ambient_dim() != v {
            return Err(Error::AmbientMismatch(format!(
                "block over GF({})^{}, point over GF({})^{}",
                b.q(),
                b.ambient_dim(),
                q,
                v
            )));
        }
        if b.dim() as u16 != k {
            return Err(Error::BlockDimensionMismatch { expected: k, found: b.dim() as u16 });
        }
    }
    let mut rng = SplitMix64::new(seed);
    let space = (q as u64).pow(v as u32);
    for _ in 0..sample {
        let line = loop {
            let w1 = rng.below(space - 1) + 1;
            let w2 = rng.below(space - 1) + 1;
            let candidate = Subspace::from_rows(q, v, &[w1, w2])?;
            if candidate.dim() == 2 {
                break candidate;
            }
        };
        let count = design_blocks.iter().filter(|b| b.contains(&line)).count() as u64;
        if count != 1 {
            return Err(Error::NotSteinerSampled {
                line: line.row_encodings().to_vec(),
                count,
            });
        }
    }
    let prow = p.row_encodings()[0];
    let mut groups = Vec::new();
    let mut blocks = Vec::new();
    for b in design_blocks {
        let image = b.project_through_point(p)?;
        if b.contains_vector(prow) {
            groups.push(image);
        } else {
            blocks.push(image);
        }
    }
    let spread = Spread::from_elements(groups)?;
    GddInstance::new(spread, k, (q as u64) * (q as u64), blocks)
}
