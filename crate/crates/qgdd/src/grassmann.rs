//! Gaussian binomial counting and enumeration of k-subspaces of GF(q)^v.
//!
//! Enumeration walks reduced row echelon forms directly: choose pivot
//! columns, then run a mixed-radix counter over the free entries. The
//! iterator is lazy, so callers decide how much to materialize.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Subspace;
use crate::spread::Spread;

/// Number of m-dimensional subspaces of GF(q)^v, exactly.
pub fn gaussian_binomial(v: u64, m: u64, q: u64) -> BigUint {
    if m > v {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..m {
        num *= q.pow((v - i) as u32) - 1u32;
        den *= q.pow((m - i) as u32) - 1u32;
    }
    num / den
}

/// Lazy iterator over all k-subspaces of GF(q)^v in a fixed deterministic
/// order (pivot-column patterns ascending, free entries counting up).
pub struct KSubspaceIter {
    q: u32,
    v: u16,
    k: u16,
    pivots: Vec<u16>,
    free: Vec<(u16, u16)>,
    digits: Vec<u32>,
    state: IterState,
}

enum IterState {
    Fresh,
    Running,
    Done,
}

pub fn enumerate_k_subspaces(q: u32, v: u16, k: u16) -> Result<KSubspaceIter> {
    // validate ambient bounds through the Subspace constructor
    Subspace::zero(q, v)?;
    if k > v {
        return Err(Error::DimensionMismatch(format!("k = {k} exceeds ambient dimension {v}")));
    }
    Ok(KSubspaceIter {
        q,
        v,
        k,
        pivots: (0..k).collect(),
        free: Vec::new(),
        digits: Vec::new(),
        state: IterState::Fresh,
    })
}

impl KSubspaceIter {
    fn recompute_free(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for col in p + 1..self.v {
                if !self.pivots.contains(&col) {
                    self.free.push((i as u16, col));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn build(&self) -> Subspace {
        let q = self.q as u64;
        let mut rows: Vec<u64> = self.pivots.iter().map(|&p| q.pow(p as u32)).collect();
        for (&(row, col), &d) in self.free.iter().zip(&self.digits) {
            rows[row as usize] += d as u64 * q.pow(col as u32);
        }
        Subspace::from_canonical_rows(self.q, self.v, rows)
    }

    /// Advance the free-entry counter; false when this pivot pattern is spent.
    fn advance_digits(&mut self) -> bool {
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.q {
                return true;
            }
            *d = 0;
        }
        false
    }

    /// Advance the pivot pattern (lexicographically next k-combination of 0..v).
    fn advance_pivots(&mut self) -> bool {
        let k = self.k as usize;
        if k == 0 {
            return false;
        }
        let v = self.v;
        let mut i = k;
        while i > 0 {
            i -= 1;
            let max = v - (k - i) as u16;
            if self.pivots[i] < max {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for KSubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Running;
                self.recompute_free();
                return Some(self.build());
            }
            IterState::Running => {}
        }
        if self.advance_digits() {
            return Some(self.build());
        }
        if self.advance_pivots() {
            self.recompute_free();
            return Some(self.build());
        }
        self.state = IterState::Done;
        None
    }
}

/// All k-subspaces of GF(q)^v containing the fixed subspace `w`, produced by
/// lifting (k - dim w)-subspaces of the quotient V/w.
pub fn enumerate_through(
    q: u32,
    v: u16,
    k: u16,
    w: &Subspace,
) -> Result<impl Iterator<Item = Subspace> + '_> {
    if w.q() != q || w.ambient_dim() != v {
        return Err(Error::AmbientMismatch("fixed subspace lives in a different space".into()));
    }
    let wdim = w.dim() as u16;
    if k < wdim || k > v {
        return Err(Error::DimensionMismatch(format!(
            "no {k}-subspaces through a {wdim}-subspace of GF({q})^{v}"
        )));
    }
    // pivot columns of w, ascending
    let pivot_cols: Vec<u16> = w
        .row_encodings()
        .iter()
        .map(|&r| {
            let mut col = 0u16;
            let mut e = r;
            let qq = q as u64;
            while e % qq == 0 {
                e /= qq;
                col += 1;
            }
            col
        })
        .collect();
    let inner = enumerate_k_subspaces(q, v - wdim, k - wdim)?;
    Ok(inner.map(move |quot| {
        let mut rows: Vec<u64> = quot
            .row_encodings()
            .iter()
            .map(|&r| {
                let mut lifted = r;
                for &c in &pivot_cols {
                    lifted = crate::linalg::insert_zero_column(lifted, c, q);
                }
                lifted
            })
            .collect();
        rows.extend_from_slice(w.row_encodings());
        Subspace::from_rows(q, v, &rows).expect("lifted rows are in range")
    }))
}

/// Hyperplanes of GF(q)^v.
pub fn enumerate_hyperplanes(q: u32, v: u16) -> Result<KSubspaceIter> {
    enumerate_k_subspaces(q, v, v - 1)
}

/// A subspace of GF(q)^(g*s) is fat when its GF(q)-basis rows, read as
/// GF(q^g)-vectors of length s, are linearly independent over GF(q^g).
pub fn is_fat(u: &Subspace, ext: &Field) -> Result<bool> {
    let g = ext.g() as u16;
    if ext.q() != u.q() {
        return Err(Error::AmbientMismatch(format!(
            "subspace over GF({}), extension over GF({})",
            u.q(),
            ext.q()
        )));
    }
    if g == 0 || u.ambient_dim() % g != 0 {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimension {} is not a multiple of g = {g}",
            u.ambient_dim()
        )));
    }
    let s = (u.ambient_dim() / g) as usize;
    let k = u.dim();
    if k > s {
        return Ok(false);
    }
    // Gaussian elimination over GF(q^g) on the k x s coordinate matrix
    let mut m: Vec<Vec<u32>> = u.row_encodings().iter().map(|&r| ext.unflatten(r, s)).collect();
    let mut rank = 0usize;
    for col in 0..s {
        let Some(pivot) = (rank..k).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, pivot);
        let inv = ext.inv(m[rank][col]);
        for j in col..s {
            m[rank][j] = ext.mul(m[rank][j], inv);
        }
        for i in 0..k {
            if i != rank && m[i][col] != 0 {
                let c = m[i][col];
                for j in col..s {
                    let t = ext.mul(c, m[rank][j]);
                    m[i][j] = ext.sub(m[i][j], t);
                }
            }
        }
        rank += 1;
        if rank == k {
            break;
        }
    }
    Ok(rank == k)
}

/// A subspace is scattered with respect to a spread when it meets every
/// spread element in dimension at most 1, equivalently when no two of its
/// points land in the same spread element.
pub fn is_scattered(u: &Subspace, spread: &Spread) -> Result<bool> {
    if u.q() != spread.q() || u.ambient_dim() != spread.ambient_dim() {
        return Err(Error::AmbientMismatch("subspace and spread ambient differ".into()));
    }
    let mut seen: Vec<u32> = Vec::with_capacity(16);
    for p in u.points() {
        let idx = spread.element_of_vector(p)?;
        if seen.contains(&idx) {
            return Ok(false);
        }
        seen.push(idx);
    }
    Ok(true)
}

/// Subspace-enumeration constraint.
pub enum Constraint<'a> {
    None,
    Through(&'a Subspace),
    Fat(&'a Field),
    Scattered(&'a Spread),
}

/// Enumerate k-subspaces subject to a constraint. Lazy; `Through` uses the
/// quotient lifting, the predicates filter the full enumeration.
pub fn enumerate_with_constraint<'a>(
    q: u32,
    v: u16,
    k: u16,
    constraint: Constraint<'a>,
) -> Result<Box<dyn Iterator<Item = Subspace> + 'a>> {
    match constraint {
        Constraint::None => Ok(Box::new(enumerate_k_subspaces(q, v, k)?)),
        Constraint::Through(w) => Ok(Box::new(enumerate_through(q, v, k, w)?)),
        Constraint::Fat(ext) => {
            let g = ext.g() as u16;
            if ext.q() != q {
                return Err(Error::AmbientMismatch("extension field has a different q".into()));
            }
            if g == 0 || v % g != 0 {
                return Err(Error::DimensionMismatch(format!(
                    "ambient dimension {v} is not a multiple of g = {g}"
                )));
            }
            let iter = enumerate_k_subspaces(q, v, k)?;
            Ok(Box::new(iter.filter(move |u| is_fat(u, ext).unwrap_or(false))))
        }
        Constraint::Scattered(spread) => {
            if spread.q() != q || spread.ambient_dim() != v {
                return Err(Error::AmbientMismatch("spread lives in a different space".into()));
            }
            let iter = enumerate_k_subspaces(q, v, k)?;
            Ok(Box::new(iter.filter(move |u| is_scattered(u, spread).unwrap_or(false))))
        }
    }
}
