//! Exact linear algebra over prime fields GF(q).
//!
//! A subspace of GF(q)^v is held as the reduced row echelon form of a basis,
//! pivots in increasing column order. A row vector is encoded as the integer
//! sum digit_j * q^j (digit j = column j, little-endian base q), so equal
//! subspaces have byte-equal row encodings and identity is plain `==` on the
//! encoding lists. GF(2) takes a bitwise fast path; other q use base-q digit
//! arithmetic on the same u64 encodings.

use crate::error::{Error, Result};
use crate::field::is_prime;

/// Largest ambient encoding: q^v must stay below 2^63.
const ENCODING_BOUND: u128 = 1 << 63;

#[inline]
pub(crate) fn digit_at(enc: u64, col: u16, q: u32) -> u32 {
    if q == 2 {
        ((enc >> col) & 1) as u32
    } else {
        let qq = q as u64;
        ((enc / qq.pow(col as u32)) % qq) as u32
    }
}

#[inline]
fn first_nonzero_digit(enc: u64, q: u32) -> u16 {
    debug_assert!(enc != 0);
    if q == 2 {
        enc.trailing_zeros() as u16
    } else {
        let qq = q as u64;
        let mut e = enc;
        let mut col = 0u16;
        while e % qq == 0 {
            e /= qq;
            col += 1;
        }
        col
    }
}

fn inv_mod(c: u32, q: u32) -> u32 {
    // Fermat: c^(q-2) mod q for prime q
    let mut acc = 1u64;
    let mut b = c as u64 % q as u64;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q as u64;
        }
        b = b * b % q as u64;
        e >>= 1;
    }
    acc as u32
}

/// a + c*b, digitwise mod q over n digits.
pub(crate) fn add_scaled(q: u32, n: u16, a: u64, b: u64, c: u32) -> u64 {
    if q == 2 {
        return if c & 1 == 1 { a ^ b } else { a };
    }
    let qq = q as u64;
    let cc = c as u64 % qq;
    let mut res = 0u64;
    let mut pw = 1u64;
    let (mut x, mut y) = (a, b);
    for _ in 0..n {
        let d = (x % qq + (y % qq) * cc) % qq;
        res += d * pw;
        x /= qq;
        y /= qq;
        pw *= qq;
    }
    res
}

fn scale_row(q: u32, n: u16, a: u64, c: u32) -> u64 {
    add_scaled(q, n, 0, a, c)
}

/// Reduced row echelon basis of the span of `input`, pivots ascending.
pub(crate) fn rref(q: u32, v: u16, input: &[u64]) -> Vec<u64> {
    if q == 2 {
        return rref2(input);
    }
    let mut basis: Vec<u64> = Vec::new();
    let mut pivots: Vec<u16> = Vec::new();
    for &row0 in input {
        let mut r = row0;
        for (i, &b) in basis.iter().enumerate() {
            let c = digit_at(r, pivots[i], q);
            if c != 0 {
                r = add_scaled(q, v, r, b, q - c);
            }
        }
        if r == 0 {
            continue;
        }
        let p = first_nonzero_digit(r, q);
        let lead = digit_at(r, p, q);
        if lead != 1 {
            r = scale_row(q, v, r, inv_mod(lead, q));
        }
        for b in basis.iter_mut() {
            let c = digit_at(*b, p, q);
            if c != 0 {
                *b = add_scaled(q, v, *b, r, q - c);
            }
        }
        let pos = pivots.partition_point(|&x| x < p);
        basis.insert(pos, r);
        pivots.insert(pos, p);
    }
    basis
}

fn rref2(input: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    let mut pivots: Vec<u16> = Vec::new();
    for &row0 in input {
        let mut r = row0;
        for (i, &b) in basis.iter().enumerate() {
            if (r >> pivots[i]) & 1 == 1 {
                r ^= b;
            }
        }
        if r == 0 {
            continue;
        }
        let p = r.trailing_zeros() as u16;
        for b in basis.iter_mut() {
            if (*b >> p) & 1 == 1 {
                *b ^= r;
            }
        }
        let pos = pivots.partition_point(|&x| x < p);
        basis.insert(pos, r);
        pivots.insert(pos, p);
    }
    basis
}

/// Reduce a vector against an RREF basis; returns 0 iff the vector lies in
/// the span.
pub(crate) fn reduce_vector(q: u32, v: u16, basis: &[u64], vec: u64) -> u64 {
    let mut r = vec;
    if q == 2 {
        for &b in basis {
            if r == 0 {
                break;
            }
            let p = b.trailing_zeros();
            if (r >> p) & 1 == 1 {
                r ^= b;
            }
        }
        return r;
    }
    for &b in basis {
        if r == 0 {
            break;
        }
        let p = first_nonzero_digit(b, q);
        let c = digit_at(r, p, q);
        if c != 0 {
            r = add_scaled(q, v, r, b, q - c);
        }
    }
    r
}

/// A subspace of GF(q)^v in canonical (RREF) form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    q: u32,
    v: u16,
    rows: Vec<u64>,
}

fn check_ambient(q: u32, v: u16) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NonPrimeModulus(q));
    }
    if v == 0 {
        return Err(Error::DimensionMismatch("ambient dimension must be >= 1".into()));
    }
    let size = (q as u128).checked_pow(v as u32).unwrap_or(u128::MAX);
    if size > ENCODING_BOUND {
        return Err(Error::FieldTooLarge { order: size, bound: ENCODING_BOUND });
    }
    Ok(())
}

impl Subspace {
    /// Canonicalize arbitrary spanning rows (given as integer encodings).
    pub fn from_rows(q: u32, v: u16, rows: &[u64]) -> Result<Subspace> {
        check_ambient(q, v)?;
        let bound = (q as u64).pow(v as u32);
        for &r in rows {
            if r >= bound {
                return Err(Error::EncodingOutOfRange { enc: r, q, v });
            }
        }
        Ok(Subspace { q, v, rows: rref(q, v, rows) })
    }

    /// Canonicalize rows given as digit vectors (length v each).
    pub fn from_vectors(q: u32, v: u16, vectors: &[Vec<u32>]) -> Result<Subspace> {
        check_ambient(q, v)?;
        let mut encs = Vec::with_capacity(vectors.len());
        for vec in vectors {
            if vec.len() != v as usize {
                return Err(Error::DimensionMismatch(format!(
                    "vector has {} entries, ambient dimension is {v}",
                    vec.len()
                )));
            }
            let mut enc = 0u64;
            let mut pw = 1u64;
            for &d in vec {
                if d >= q {
                    return Err(Error::EncodingOutOfRange { enc: d as u64, q, v });
                }
                enc += d as u64 * pw;
                pw *= q as u64;
            }
            encs.push(enc);
        }
        Subspace::from_rows(q, v, &encs)
    }

    pub fn zero(q: u32, v: u16) -> Result<Subspace> {
        check_ambient(q, v)?;
        Ok(Subspace { q, v, rows: Vec::new() })
    }

    /// Trusted constructor for rows already known to be canonical RREF.
    pub(crate) fn from_canonical_rows(q: u32, v: u16, rows: Vec<u64>) -> Subspace {
        debug_assert_eq!(rows, rref(q, v, &rows));
        Subspace { q, v, rows }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ambient_dim(&self) -> u16 {
        self.v
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Canonical RREF rows as integer encodings, pivots ascending.
    pub fn row_encodings(&self) -> &[u64] {
        &self.rows
    }

    /// Digit matrix of the canonical rows (dim x v).
    pub fn row_digits(&self) -> Vec<Vec<u32>> {
        self.rows
            .iter()
            .map(|&r| (0..self.v).map(|j| digit_at(r, j, self.q)).collect())
            .collect()
    }

    pub fn contains_vector(&self, enc: u64) -> bool {
        reduce_vector(self.q, self.v, &self.rows, enc) == 0
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        debug_assert_eq!((self.q, self.v), (other.q, other.v));
        other.rows.iter().all(|&r| self.contains_vector(r))
    }

    /// All nonzero vectors of the subspace (q^dim - 1 encodings); small dims only.
    pub fn vectors(&self) -> Vec<u64> {
        let k = self.rows.len();
        let total = (self.q as u64).pow(k as u32);
        let mut out = Vec::with_capacity(total as usize - 1);
        for combo in 1..total {
            let mut w = 0u64;
            let mut c = combo;
            for &row in &self.rows {
                let coeff = (c % self.q as u64) as u32;
                if coeff != 0 {
                    w = add_scaled(self.q, self.v, w, row, coeff);
                }
                c /= self.q as u64;
            }
            out.push(w);
        }
        out
    }

    /// Canonical representatives of the 1-dimensional subspaces (points) of
    /// this subspace: vectors whose first nonzero digit is 1, one per point.
    pub fn points(&self) -> PointIter<'_> {
        PointIter { space: self, lead: 0, counter: 0 }
    }

    /// dim(U + W) via a joint row reduction.
    pub fn sum_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_same_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Ok(rref(self.q, self.v, &rows).len())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Subspace::from_rows(self.q, self.v, &rows)
    }

    /// U ∩ W by the Zassenhaus block trick on [U|U] over [W|0].
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let q = self.q;
        let v = self.v;
        let mut pairs: Vec<(u64, u64)> = self.rows.iter().map(|&r| (r, r)).collect();
        pairs.extend(other.rows.iter().map(|&r| (r, 0)));
        let reduced = rref_pairs(q, v, pairs);
        let rows: Vec<u64> = reduced.iter().filter(|&&(l, _)| l == 0).map(|&(_, r)| r).collect();
        Subspace::from_rows(q, v, &rows)
    }

    /// Image of this subspace in the quotient V/P for a point P, using the
    /// coordinatization that drops P's pivot column after reducing rows
    /// against P. The image lives in GF(q)^(v-1); its dimension drops by one
    /// exactly when P lies inside the subspace.
    pub fn project_through_point(&self, p: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(p)?;
        if p.dim() != 1 {
            return Err(Error::NotAPoint(p.dim()));
        }
        if self.v < 2 {
            return Err(Error::DimensionMismatch("quotient would have dimension 0".into()));
        }
        let prow = p.rows[0];
        let c = first_nonzero_digit(prow, self.q);
        let rows: Vec<u64> = self
            .rows
            .iter()
            .map(|&r| {
                let coeff = digit_at(r, c, self.q);
                let reduced =
                    if coeff != 0 { add_scaled(self.q, self.v, r, prow, self.q - coeff) } else { r };
                drop_column(reduced, c, self.q)
            })
            .collect();
        Subspace::from_rows(self.q, self.v - 1, &rows)
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.q != other.q || self.v != other.v {
            return Err(Error::AmbientMismatch(format!(
                "GF({})^{} vs GF({})^{}",
                self.q, self.v, other.q, other.v
            )));
        }
        Ok(())
    }
}

/// Remove one column from a row encoding, shifting higher columns down.
pub(crate) fn drop_column(enc: u64, col: u16, q: u32) -> u64 {
    let qq = q as u64;
    let pw = qq.pow(col as u32);
    let low = enc % pw;
    let high = enc / (pw * qq);
    low + high * pw
}

/// Insert a zero column into a row encoding, shifting higher columns up.
pub(crate) fn insert_zero_column(enc: u64, col: u16, q: u32) -> u64 {
    let qq = q as u64;
    let pw = qq.pow(col as u32);
    let low = enc % pw;
    let high = enc / pw;
    low + high * pw * qq
}

fn rref_pairs(q: u32, v: u16, input: Vec<(u64, u64)>) -> Vec<(u64, u64)> {
    // RREF over 2v columns: left limb columns 0..v, right limb columns v..2v.
    let digit = |row: &(u64, u64), col: u16| -> u32 {
        if col < v {
            digit_at(row.0, col, q)
        } else {
            digit_at(row.1, col - v, q)
        }
    };
    let add_sc = |a: &(u64, u64), b: &(u64, u64), c: u32| -> (u64, u64) {
        (add_scaled(q, v, a.0, b.0, c), add_scaled(q, v, a.1, b.1, c))
    };
    let mut basis: Vec<(u64, u64)> = Vec::new();
    let mut pivots: Vec<u16> = Vec::new();
    for row0 in input {
        let mut r = row0;
        for (i, b) in basis.iter().enumerate() {
            let c = digit(&r, pivots[i]);
            if c != 0 {
                r = add_sc(&r, b, q - c);
            }
        }
        if r == (0, 0) {
            continue;
        }
        let p = if r.0 != 0 { first_nonzero_digit(r.0, q) } else { v + first_nonzero_digit(r.1, q) };
        let lead = digit(&r, p);
        if lead != 1 {
            let ic = inv_mod(lead, q);
            r = (scale_row(q, v, r.0, ic), scale_row(q, v, r.1, ic));
        }
        for b in basis.iter_mut() {
            let c = digit(b, p);
            if c != 0 {
                *b = add_sc(b, &r, q - c);
            }
        }
        let pos = pivots.partition_point(|&x| x < p);
        basis.insert(pos, r);
        pivots.insert(pos, p);
    }
    basis
}

/// Iterator over canonical point representatives of a subspace. Because the
/// basis is in RREF, the combination with first nonzero coefficient 1 is
/// already the canonical vector of its 1-dimensional subspace.
pub struct PointIter<'a> {
    space: &'a Subspace,
    lead: usize,
    counter: u64,
}

impl Iterator for PointIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let k = self.space.rows.len();
        let q = self.space.q as u64;
        while self.lead < k {
            let tail = k - self.lead - 1;
            let total = q.pow(tail as u32);
            if self.counter >= total {
                self.lead += 1;
                self.counter = 0;
                continue;
            }
            let mut w = self.space.rows[self.lead];
            let mut c = self.counter;
            for i in self.lead + 1..k {
                let coeff = (c % q) as u32;
                if coeff != 0 {
                    w = add_scaled(self.space.q, self.space.v, w, self.space.rows[i], coeff);
                }
                c /= q;
            }
            self.counter += 1;
            return Some(w);
        }
        None
    }
}

/// A square matrix over GF(q), rows stored as integer encodings. Acts on row
/// vectors from the right: x -> x * M.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfMatrix {
    q: u32,
    n: u16,
    rows: Vec<u64>,
}

impl GfMatrix {
    pub fn from_rows(q: u32, n: u16, rows: Vec<u64>) -> Result<GfMatrix> {
        check_ambient(q, n)?;
        if rows.len() != n as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} rows for a {n}x{n} matrix",
                rows.len()
            )));
        }
        let bound = (q as u64).pow(n as u32);
        for &r in &rows {
            if r >= bound {
                return Err(Error::EncodingOutOfRange { enc: r, q, v: n });
            }
        }
        Ok(GfMatrix { q, n, rows })
    }

    pub fn identity(q: u32, n: u16) -> Result<GfMatrix> {
        check_ambient(q, n)?;
        let rows = (0..n).map(|i| (q as u64).pow(i as u32)).collect();
        Ok(GfMatrix { q, n, rows })
    }

    /// Companion matrix of a monic polynomial of degree n (low-degree-first):
    /// e_i -> e_{i+1} for i < n-1, e_{n-1} -> -(poly_0, ..., poly_{n-1}).
    pub fn companion(q: u32, poly: &[u32]) -> Result<GfMatrix> {
        let n = poly.len().saturating_sub(1) as u16;
        check_ambient(q, n)?;
        if poly.last() != Some(&1) {
            return Err(Error::DimensionMismatch("companion matrix needs a monic polynomial".into()));
        }
        let mut rows: Vec<u64> = (1..n).map(|i| (q as u64).pow(i as u32)).collect();
        let mut last = 0u64;
        let mut pw = 1u64;
        for &c in poly.iter().take(n as usize) {
            last += (((q - c % q) % q) as u64) * pw;
            pw *= q as u64;
        }
        rows.push(last);
        Ok(GfMatrix { q, n, rows })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u16 {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// x * M for a row vector encoding x.
    pub fn apply_to_row(&self, x: u64) -> u64 {
        if self.q == 2 {
            let mut acc = 0u64;
            let mut bits = x;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                acc ^= self.rows[i];
                bits &= bits - 1;
            }
            return acc;
        }
        let mut acc = 0u64;
        let mut e = x;
        let qq = self.q as u64;
        for i in 0..self.n as usize {
            let coeff = (e % qq) as u32;
            if coeff != 0 {
                acc = add_scaled(self.q, self.n, acc, self.rows[i], coeff);
            }
            e /= qq;
        }
        acc
    }

    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        if self.q != other.q || self.n != other.n {
            return Err(Error::AmbientMismatch("matrix sizes differ".into()));
        }
        let rows = self.rows.iter().map(|&r| other.apply_to_row(r)).collect();
        Ok(GfMatrix { q: self.q, n: self.n, rows })
    }

    pub fn pow(&self, e: u64) -> Result<GfMatrix> {
        let mut acc = GfMatrix::identity(self.q, self.n)?;
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            b = b.mul(&b)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_invertible(&self) -> bool {
        rref(self.q, self.n, &self.rows).len() == self.n as usize
    }

    /// Image of a subspace under the right action, canonicalized.
    pub fn apply_to_subspace(&self, s: &Subspace) -> Result<Subspace> {
        if self.q != s.q() || self.n != s.ambient_dim() {
            return Err(Error::AmbientMismatch("matrix and subspace ambient differ".into()));
        }
        let rows: Vec<u64> = s.row_encodings().iter().map(|&r| self.apply_to_row(r)).collect();
        Subspace::from_rows(self.q, self.n, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn canonicalize_two_gf2_rows() {
        let s = Subspace::from_vectors(2, 3, &[vec![1, 1, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(s.row_encodings(), &[1, 2]);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn empty_input_gives_the_zero_subspace() {
        let s = Subspace::from_rows(2, 4, &[]).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s, Subspace::zero(2, 4).unwrap());
        assert!(s.contains_vector(0));
        assert!(!s.contains_vector(1));
    }

    #[test]
    fn gf3_reduction_normalizes_leading_digits() {
        // rows (0,1,0,0,1,1), (0,0,1,0,0,0), (0,0,1,2,0,1) over GF(3)
        let s = Subspace::from_rows(3, 6, &[327, 9, 306]).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.row_encodings(), &[327, 9, 513]);
    }

    #[test]
    fn duplicate_and_dependent_rows_collapse() {
        let s = Subspace::from_rows(2, 4, &[3, 3, 5, 6]).unwrap();
        // 3 ^ 5 = 6, so the span has dimension 2
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn out_of_range_encodings_are_rejected() {
        assert!(matches!(
            Subspace::from_rows(2, 3, &[8]),
            Err(Error::EncodingOutOfRange { enc: 8, .. })
        ));
        assert!(matches!(Subspace::from_rows(6, 3, &[1]), Err(Error::NonPrimeModulus(6))));
    }

    fn random_invertible(q: u32, n: u16, rng: &mut SplitMix64) -> GfMatrix {
        let bound = (q as u64).pow(n as u32);
        loop {
            let rows: Vec<u64> = (0..n).map(|_| rng.below(bound)).collect();
            if let Ok(m) = GfMatrix::from_rows(q, n, rows) {
                if m.is_invertible() {
                    return m;
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_invariant_under_basis_changes() {
        let mut rng = SplitMix64::new(2024);
        for q in [2u32, 3, 5] {
            let v = 6u16;
            let bound = (q as u64).pow(v as u32);
            for _ in 0..200 {
                let rows: Vec<u64> = (0..3).map(|_| rng.below(bound)).collect();
                let s = Subspace::from_rows(q, v, &rows).unwrap();
                let k = s.dim() as u16;
                if k == 0 {
                    continue;
                }
                // mix basis rows by a random invertible k x k matrix
                let c = random_invertible(q, k, &mut rng);
                let mixed: Vec<u64> =
                    c.rows().iter().map(|&crow| {
                        let mut acc = 0u64;
                        let mut e = crow;
                        for row in s.row_encodings() {
                            let coeff = (e % q as u64) as u32;
                            if coeff != 0 {
                                acc = add_scaled(q, v, acc, *row, coeff);
                            }
                            e /= q as u64;
                        }
                        acc
                    }).collect();
                let s2 = Subspace::from_rows(q, v, &mixed).unwrap();
                assert_eq!(s, s2);
            }
        }
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let mut rng = SplitMix64::new(7);
        for q in [2u32, 3] {
            let v = 7u16;
            let bound = (q as u64).pow(v as u32);
            for _ in 0..300 {
                let rows: Vec<u64> = (0..4).map(|_| rng.below(bound)).collect();
                let s = Subspace::from_rows(q, v, &rows).unwrap();
                let again = Subspace::from_rows(q, v, s.row_encodings()).unwrap();
                assert_eq!(s, again);
            }
        }
    }

    #[test]
    fn sum_and_intersection_dimensions_are_dual() {
        let mut rng = SplitMix64::new(11);
        for q in [2u32, 3] {
            let v = 6u16;
            let bound = (q as u64).pow(v as u32);
            for _ in 0..200 {
                let a_rows: Vec<u64> = (0..3).map(|_| rng.below(bound)).collect();
                let b_rows: Vec<u64> = (0..3).map(|_| rng.below(bound)).collect();
                let a = Subspace::from_rows(q, v, &a_rows).unwrap();
                let b = Subspace::from_rows(q, v, &b_rows).unwrap();
                let cap = a.intersect(&b).unwrap();
                let sum = a.sum_dim(&b).unwrap();
                assert_eq!(sum + cap.dim(), a.dim() + b.dim());
                assert!(a.contains(&cap) && b.contains(&cap));
                // oracle: common nonzero vectors number q^dim(cap) - 1
                let common = a
                    .vectors()
                    .into_iter()
                    .filter(|&w| b.contains_vector(w))
                    .count() as u64;
                assert_eq!(common, (q as u64).pow(cap.dim() as u32) - 1);
            }
        }
    }

    #[test]
    fn two_distinct_points_span_a_line() {
        let p1 = Subspace::from_rows(2, 4, &[1]).unwrap();
        let p2 = Subspace::from_rows(2, 4, &[6]).unwrap();
        assert_eq!(p1.sum_dim(&p2).unwrap(), 2);
        assert_eq!(p1.intersect(&p2).unwrap().dim(), 0);
        assert_eq!(p1.sum_dim(&p1).unwrap(), 1);
    }

    #[test]
    fn point_representatives_are_canonical_and_complete() {
        for q in [2u32, 3] {
            let s = Subspace::from_rows(q, 5, &[1, q as u64, (q as u64).pow(2)]).unwrap();
            let pts: Vec<u64> = s.points().collect();
            let expected = ((q as u64).pow(3) - 1) / (q as u64 - 1);
            assert_eq!(pts.len() as u64, expected);
            let mut seen = std::collections::HashSet::new();
            for p in &pts {
                assert!(s.contains_vector(*p));
                let lead = first_nonzero_digit(*p, q);
                assert_eq!(digit_at(*p, lead, q), 1, "leading digit normalized");
                assert!(seen.insert(*p));
            }
        }
    }

    #[test]
    fn projection_through_contained_point_drops_dimension() {
        let u = Subspace::from_rows(2, 6, &[1, 2, 4]).unwrap();
        let p = Subspace::from_rows(2, 6, &[1]).unwrap();
        let img = u.project_through_point(&p).unwrap();
        assert_eq!(img.dim(), 2);
        assert_eq!(img.ambient_dim(), 5);
    }

    #[test]
    fn projection_through_external_point_keeps_dimension() {
        let u = Subspace::from_rows(2, 6, &[1, 2, 4]).unwrap();
        let p = Subspace::from_rows(2, 6, &[32]).unwrap();
        let img = u.project_through_point(&p).unwrap();
        assert_eq!(img.dim(), 3);
        assert_eq!(img.ambient_dim(), 5);
    }

    #[test]
    fn projection_of_the_point_itself_is_zero() {
        let p = Subspace::from_rows(3, 4, &[5]).unwrap();
        let img = p.project_through_point(&p).unwrap();
        assert_eq!(img.dim(), 0);
    }

    #[test]
    fn projection_rejects_non_points() {
        let u = Subspace::from_rows(2, 5, &[1, 2]).unwrap();
        let l = Subspace::from_rows(2, 5, &[4, 8]).unwrap();
        assert!(matches!(u.project_through_point(&l), Err(Error::NotAPoint(2))));
    }

    #[test]
    fn projection_is_independent_of_the_point_representative() {
        // scaling the point vector must not change the image
        let u = Subspace::from_rows(3, 5, &[4, 10, 27]).unwrap();
        let p1 = Subspace::from_rows(3, 5, &[7]).unwrap(); // digits (1,2)
        let p2 = Subspace::from_rows(3, 5, &[5]).unwrap(); // digits (2,1) = 2 * (1,2)
        assert_eq!(p1, p2);
        let a = u.project_through_point(&p1).unwrap();
        let b = u.project_through_point(&p2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn column_surgery_roundtrips() {
        let mut rng = SplitMix64::new(5);
        for q in [2u32, 3, 5] {
            for _ in 0..200 {
                let v = 6u16;
                let enc = rng.below((q as u64).pow(v as u32 - 1));
                for col in 0..v - 1 {
                    let widened = insert_zero_column(enc, col, q);
                    assert_eq!(digit_at(widened, col, q), 0);
                    assert_eq!(drop_column(widened, col, q), enc);
                }
            }
        }
    }

    #[test]
    fn companion_matrix_of_the_gf64_polynomial() {
        let m = GfMatrix::companion(2, &[1, 1, 0, 1, 1, 0, 1]).unwrap();
        assert_eq!(m.rows(), &[2, 4, 8, 16, 32, 27]);
        assert!(m.is_invertible());
    }

    #[test]
    fn identity_fixes_subspaces() {
        let id = GfMatrix::identity(3, 4).unwrap();
        let s = Subspace::from_rows(3, 4, &[5, 11]).unwrap();
        assert_eq!(id.apply_to_subspace(&s).unwrap(), s);
    }

    #[test]
    fn matrix_multiplication_is_associative_and_respects_action() {
        let mut rng = SplitMix64::new(17);
        for q in [2u32, 3] {
            let n = 4u16;
            for _ in 0..100 {
                let a = random_invertible(q, n, &mut rng);
                let b = random_invertible(q, n, &mut rng);
                let c = random_invertible(q, n, &mut rng);
                let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
                let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
                assert_eq!(ab_c, a_bc);
                let x = rng.below((q as u64).pow(n as u32));
                assert_eq!(a.apply_to_row(b.apply_to_row(x)), b.mul(&a).unwrap().apply_to_row(x));
            }
        }
    }

    #[test]
    fn matrix_power_matches_repeated_multiplication() {
        let m = GfMatrix::companion(2, &[1, 1, 0, 1, 1, 0, 1]).unwrap();
        let mut acc = GfMatrix::identity(2, 6).unwrap();
        for e in 0..10u64 {
            assert_eq!(m.pow(e).unwrap(), acc);
            acc = acc.mul(&m).unwrap();
        }
        // order of the companion matrix of a primitive polynomial is 2^6 - 1
        assert_eq!(m.pow(63).unwrap(), GfMatrix::identity(2, 6).unwrap());
        assert_ne!(m.pow(21).unwrap(), GfMatrix::identity(2, 6).unwrap());
        assert_ne!(m.pow(9).unwrap(), GfMatrix::identity(2, 6).unwrap());
    }
}
