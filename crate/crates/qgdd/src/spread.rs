//! (g-1)-spreads of GF(q)^v: sets of g-dimensional subspaces partitioning the
//! nonzero points. A spread doubles as the group-set of a group divisible
//! design; a dense point-to-element table makes membership queries O(1).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{GfMatrix, Subspace};

/// Point lookups use a dense table up to this many ambient vectors.
const DENSE_LOOKUP_BOUND: u128 = 1 << 24;

#[derive(Debug, Clone)]
pub struct Spread {
    q: u32,
    v: u16,
    g: u16,
    elements: Vec<Subspace>,
    lookup: Lookup,
}

#[derive(Debug, Clone)]
enum Lookup {
    Dense(Vec<u32>),
    Map(HashMap<u64, u32>),
}

impl Spread {
    /// Validate and index a set of subspaces as a spread: equal dimensions,
    /// and every nonzero vector covered exactly once. Elements are sorted by
    /// their canonical encodings.
    pub fn from_elements(mut elements: Vec<Subspace>) -> Result<Spread> {
        let Some(first) = elements.first() else {
            return Err(Error::NotAPartition("no elements given".into()));
        };
        let (q, v) = (first.q(), first.ambient_dim());
        let g = first.dim() as u16;
        if g == 0 {
            return Err(Error::NotAPartition("zero-dimensional elements".into()));
        }
        for e in &elements {
            if e.q() != q || e.ambient_dim() != v {
                return Err(Error::AmbientMismatch("spread elements live in different spaces".into()));
            }
            if e.dim() as u16 != g {
                return Err(Error::NotAPartition(format!(
                    "element dimensions differ: {} vs {g}",
                    e.dim()
                )));
            }
        }
        elements.sort_unstable();
        elements.dedup();

        let ambient = (q as u128).pow(v as u32);
        let mut lookup = if ambient <= DENSE_LOOKUP_BOUND {
            Lookup::Dense(vec![u32::MAX; ambient as usize])
        } else {
            Lookup::Map(HashMap::new())
        };
        let mut covered = 0u64;
        for (idx, e) in elements.iter().enumerate() {
            for w in e.vectors() {
                let slot = match &mut lookup {
                    Lookup::Dense(t) => {
                        let s = &mut t[w as usize];
                        if *s != u32::MAX {
                            return Err(Error::NotAPartition(format!(
                                "vector {w} covered by elements {} and {idx}",
                                *s
                            )));
                        }
                        s
                    }
                    Lookup::Map(m) => match m.entry(w) {
                        std::collections::hash_map::Entry::Occupied(o) => {
                            return Err(Error::NotAPartition(format!(
                                "vector {w} covered by elements {} and {idx}",
                                o.get()
                            )));
                        }
                        std::collections::hash_map::Entry::Vacant(va) => va.insert(u32::MAX),
                    },
                };
                *slot = idx as u32;
                covered += 1;
            }
        }
        let total = (q as u128).pow(v as u32) - 1;
        if covered as u128 != total {
            return Err(Error::NotAPartition(format!(
                "{covered} of {total} nonzero vectors covered"
            )));
        }
        Ok(Spread { q, v, g, elements, lookup })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ambient_dim(&self) -> u16 {
        self.v
    }

    pub fn group_dim(&self) -> u16 {
        self.g
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in canonical sorted order; indices from lookups refer here.
    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    /// Index of the spread element containing a nonzero vector.
    #[inline]
    pub fn element_of_vector(&self, w: u64) -> Result<u32> {
        if w == 0 {
            return Err(Error::NotAPoint(0));
        }
        let idx = match &self.lookup {
            Lookup::Dense(t) => t.get(w as usize).copied().unwrap_or(u32::MAX),
            Lookup::Map(m) => m.get(&w).copied().unwrap_or(u32::MAX),
        };
        if idx == u32::MAX {
            return Err(Error::EncodingOutOfRange { enc: w, q: self.q, v: self.v });
        }
        Ok(idx)
    }

    /// Index of the element containing a 1-dimensional subspace.
    pub fn element_of(&self, p: &Subspace) -> Result<u32> {
        if p.q() != self.q || p.ambient_dim() != self.v {
            return Err(Error::AmbientMismatch("point lives in a different space".into()));
        }
        if p.dim() != 1 {
            return Err(Error::NotAPoint(p.dim()));
        }
        self.element_of_vector(p.row_encodings()[0])
    }

    /// True when the line spanned by two independent vectors lies inside one
    /// spread element (both vectors then share that element).
    #[inline]
    pub fn covers_line(&self, w1: u64, w2: u64) -> Result<bool> {
        Ok(self.element_of_vector(w1)? == self.element_of_vector(w2)?)
    }

    /// Normality: for every pair of distinct elements U, V, each element W is
    /// either contained in span(U, V) or intersects it trivially. For v/g = 3
    /// this characterizes Desarguesian spreads.
    pub fn is_normal(&self) -> Result<bool> {
        for (i, u) in self.elements.iter().enumerate() {
            for vsp in &self.elements[i + 1..] {
                let span = u.sum(vsp)?;
                for w in &self.elements {
                    let sd = span.sum_dim(w)?;
                    let inter = span.dim() + w.dim() - sd;
                    if inter != 0 && inter != w.dim() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// The Desarguesian spread of GF(q)^(g*s): 1-dimensional GF(q^g)-subspaces of
/// GF(q^g)^s, flattened to g-dimensional GF(q)-subspaces. Elements are the
/// flattenings of {c * w : c in GF(q^g)} over projective representatives w.
pub fn desarguesian_spread(ext: &Field, s: u16) -> Result<Spread> {
    if s == 0 {
        return Err(Error::DimensionMismatch("s must be >= 1".into()));
    }
    let q = ext.q();
    let g = ext.g() as u16;
    let v = g.checked_mul(s).ok_or(Error::DimensionMismatch("g*s overflows".into()))?;
    Subspace::zero(q, v)?; // ambient bound check
    let order = ext.order();
    let mut elements = Vec::new();
    // projective representatives: first nonzero coordinate is 1
    let mut coords = vec![0u32; s as usize];
    for lead in 0..s as usize {
        let tail = s as usize - lead - 1;
        let combos = (order as u128).pow(tail as u32);
        for mut c in 0..combos {
            for x in coords.iter_mut().take(lead) {
                *x = 0;
            }
            coords[lead] = 1;
            for j in 0..tail {
                coords[lead + 1 + j] = (c % order as u128) as u32;
                c /= order as u128;
            }
            // basis rows: flatten(a^t * w) for t = 0..g
            let rows: Vec<u64> = (0..g as u64)
                .map(|t| {
                    let at = ext.exp(t);
                    let scaled: Vec<u32> = coords.iter().map(|&x| ext.mul(at, x)).collect();
                    ext.flatten(&scaled).expect("encoding bound checked above")
                })
                .collect();
            elements.push(Subspace::from_rows(q, v, &rows)?);
        }
    }
    Spread::from_elements(elements)
}

/// Spread as the orbit of a seed subspace under a cyclic matrix group
/// generated by one invertible matrix. The orbit must close with exactly
/// `expected_size` distinct elements and partition the points.
pub fn spread_from_orbit(
    seed: &Subspace,
    generator: &GfMatrix,
    expected_size: usize,
) -> Result<Spread> {
    if !generator.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let mut elements = vec![seed.clone()];
    let mut current = generator.apply_to_subspace(seed)?;
    while current != *seed {
        elements.push(current.clone());
        if elements.len() > (1 << 22) {
            return Err(Error::TooLarge { size: elements.len() as u128, limit: 1 << 22 });
        }
        current = generator.apply_to_subspace(&current)?;
    }
    if elements.len() != expected_size {
        return Err(Error::NotAPartition(format!(
            "orbit closed after {} elements, expected {expected_size}",
            elements.len()
        )));
    }
    Spread::from_elements(elements)
}

/// The subfield spread: GF(q^v) viewed as GF(q)^v, partitioned by the
/// multiplicative cosets of the subfield GF(q^g), g | v. Generated as the
/// orbit of the subfield under the companion matrix of the field polynomial.
pub fn subfield_spread(field: &Field, g: u32) -> Result<Spread> {
    let q = field.q();
    let v = field.g();
    if g == 0 || g >= v || v % g != 0 {
        return Err(Error::DimensionMismatch(format!(
            "GF({q}^{v}) has no proper subfield spread of degree {g}"
        )));
    }
    let sub = field.subfield_elements(g)?;
    let rows: Vec<u64> = sub.iter().filter(|&&x| x != 0).map(|&x| x as u64).collect();
    let seed = Subspace::from_rows(q, v as u16, &rows)?;
    let sigma = GfMatrix::companion(q, field.poly())?;
    let expected = (((q as u64).pow(v) - 1) / ((q as u64).pow(g) - 1)) as usize;
    spread_from_orbit(&seed, &sigma, expected)
}
