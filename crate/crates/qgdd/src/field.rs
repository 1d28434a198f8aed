//! Finite fields GF(q^g) with exp/log tables over a primitive polynomial.
//!
//! An element c_0 + c_1*a + ... + c_{g-1}*a^{g-1} (a = root of the primitive
//! polynomial) is encoded as the integer sum c_i * q^i, digits base q in
//! low-degree-first order. Encoding 0 is the zero element, 1 is the unit.
//! Multiplication and inversion go through discrete-log tables; addition is
//! digitwise mod q.

use crate::conway::CONWAY_POLYNOMIALS;
use crate::error::{Error, Result};

/// Largest supported field order q^g.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Orders up to this bound get a built-in default primitive polynomial.
pub const DEFAULT_POLY_ORDER_BOUND: u64 = 1 << 13;

#[derive(Debug, Clone)]
pub struct Field {
    q: u32,
    g: u32,
    order: u64,
    poly: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut b = base % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Smallest primitive root modulo the prime q.
fn smallest_primitive_root(q: u32) -> u32 {
    if q == 2 {
        return 1;
    }
    let phi = (q - 1) as u64;
    let factors = prime_factors(phi);
    'next: for r in 2..q {
        for &p in &factors {
            if pow_mod(r as u64, phi / p, q as u64) == 1 {
                continue 'next;
            }
        }
        return r;
    }
    unreachable!("every prime has a primitive root")
}

/// Built-in primitive polynomial for GF(q^g), low-degree-first, monic.
pub fn default_primitive_poly(q: u32, g: u32) -> Result<Vec<u32>> {
    if !is_prime(q) {
        return Err(Error::NonPrimeModulus(q));
    }
    if g == 1 {
        let r = smallest_primitive_root(q);
        return Ok(vec![(q - r) % q, 1]);
    }
    for &(cq, cg, coeffs) in CONWAY_POLYNOMIALS {
        if cq == q && cg == g {
            return Ok(coeffs.to_vec());
        }
    }
    Err(Error::NoDefaultPolynomial { q, g })
}

impl Field {
    /// Build GF(q^g) from an explicit primitive polynomial (length g+1,
    /// low-degree-first, monic). The exp/log tables are filled by iterating
    /// multiplication by a; any failure to cycle through all q^g - 1 nonzero
    /// elements rejects the polynomial.
    pub fn new(q: u32, g: u32, poly: &[u32]) -> Result<Field> {
        if !is_prime(q) {
            return Err(Error::NonPrimeModulus(q));
        }
        if g == 0 {
            return Err(Error::DimensionMismatch("extension degree must be >= 1".into()));
        }
        let order = (q as u128).checked_pow(g).filter(|&o| o <= MAX_FIELD_ORDER as u128).ok_or(
            Error::FieldTooLarge { order: (q as u128).saturating_pow(g), bound: MAX_FIELD_ORDER as u128 },
        )? as u64;
        if poly.len() != g as usize + 1 {
            return Err(Error::NonPrimitivePolynomial {
                q,
                reason: format!("expected degree {g}, got {}", poly.len().saturating_sub(1)),
            });
        }
        let poly: Vec<u32> = poly.iter().map(|&c| c % q).collect();
        if poly[g as usize] != 1 {
            return Err(Error::NonPrimitivePolynomial { q, reason: "polynomial is not monic".into() });
        }

        // reduction digits: x^g = -(poly_0 + poly_1 x + ... + poly_{g-1} x^{g-1})
        let mut reduction = 0u64;
        let mut pw = 1u64;
        for &c in poly.iter().take(g as usize) {
            reduction += ((q - c) % q) as u64 * pw;
            pw *= q as u64;
        }

        let mulx = |e: u64| -> u64 {
            let shifted = e * q as u64; // digits move up one place
            let hi = (shifted / order) as u32;
            let lo = shifted % order;
            if hi == 0 {
                lo
            } else {
                scale_add(lo, reduction, hi, q, g as u16, order)
            }
        };

        let n = order as usize;
        let mut exp = Vec::with_capacity(n - 1);
        let mut log = vec![u32::MAX; n];
        let mut e = 1u64;
        for i in 0..n - 1 {
            if log[e as usize] != u32::MAX {
                return Err(Error::NonPrimitivePolynomial {
                    q,
                    reason: format!("powers of x repeat after {i} steps"),
                });
            }
            log[e as usize] = i as u32;
            exp.push(e as u32);
            e = mulx(e);
        }
        if e != 1 {
            return Err(Error::NonPrimitivePolynomial {
                q,
                reason: "x does not have multiplicative order q^g - 1".into(),
            });
        }
        Ok(Field { q, g, order, poly, exp, log })
    }

    /// Build GF(q^g) with the built-in default polynomial.
    pub fn with_default_poly(q: u32, g: u32) -> Result<Field> {
        if is_prime(q) {
            let order = (q as u128).saturating_pow(g);
            if order > MAX_FIELD_ORDER as u128 {
                return Err(Error::FieldTooLarge { order, bound: MAX_FIELD_ORDER as u128 });
            }
        }
        let poly = default_primitive_poly(q, g)?;
        Field::new(q, g, &poly)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    /// The element a (root of the primitive polynomial); a primitive root of
    /// the prime field when g = 1.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len().max(1)]
    }

    /// a^i for 0 <= i < q^g - 1.
    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.order - 1)) as usize]
    }

    /// Discrete log base a of a nonzero element.
    pub fn log(&self, e: u32) -> u64 {
        assert!(e != 0 && (e as u64) < self.order, "log of zero or out-of-range element");
        self.log[e as usize] as u64
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        if self.q == 2 {
            x ^ y
        } else {
            digitwise(x as u64, y as u64, self.q, self.g as u16, |a, b| (a + b) % self.q) as u32
        }
    }

    pub fn neg(&self, x: u32) -> u32 {
        if self.q == 2 {
            x
        } else {
            digitwise(x as u64, 0, self.q, self.g as u16, |a, _| (self.q - a) % self.q) as u32
        }
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let n = self.order - 1;
        let i = self.log[x as usize] as u64 + self.log[y as usize] as u64;
        self.exp[(i % n) as usize]
    }

    pub fn inv(&self, x: u32) -> u32 {
        assert!(x != 0, "inverse of zero");
        let n = self.order - 1;
        self.exp[((n - self.log[x as usize] as u64) % n) as usize]
    }

    pub fn div(&self, x: u32, y: u32) -> u32 {
        self.mul(x, self.inv(y))
    }

    pub fn pow(&self, x: u32, e: u64) -> u32 {
        if x == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.order - 1;
        self.exp[((self.log[x as usize] as u128 * e as u128) % n as u128) as usize]
    }

    /// Frobenius endomorphism x -> x^q.
    pub fn frobenius(&self, x: u32) -> u32 {
        self.pow(x, self.q as u64)
    }

    /// Coefficient digits of an element, low-degree-first, length g.
    pub fn coeffs(&self, x: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.g as usize);
        let mut e = x as u64;
        for _ in 0..self.g {
            out.push((e % self.q as u64) as u32);
            e /= self.q as u64;
        }
        out
    }

    /// Flatten a GF(q^g)-vector of length s into a GF(q)-row vector of length
    /// g*s, returned as its base-q integer encoding. Each coordinate expands
    /// to its g coefficient digits over the basis 1, a, ..., a^{g-1}.
    pub fn flatten(&self, coords: &[u32]) -> Result<u64> {
        let s = coords.len() as u32;
        if (self.order as u128).checked_pow(s).map_or(true, |t| t > u64::MAX as u128 / 2) {
            return Err(Error::FieldTooLarge {
                order: (self.order as u128).saturating_pow(s),
                bound: u64::MAX as u128 / 2,
            });
        }
        let mut enc = 0u64;
        let mut pw = 1u64;
        for &c in coords {
            debug_assert!((c as u64) < self.order);
            enc += c as u64 * pw;
            pw *= self.order;
        }
        Ok(enc)
    }

    /// Inverse of [`Field::flatten`]: split a g*s-digit GF(q)-row encoding into
    /// s field-element coordinates.
    pub fn unflatten(&self, row: u64, s: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(s);
        let mut e = row;
        for _ in 0..s {
            out.push((e % self.order) as u32);
            e /= self.order;
        }
        debug_assert_eq!(e, 0, "row encoding has more than s coordinates");
        out
    }

    /// Elements of the subfield GF(q^d) inside GF(q^g), for d dividing g.
    /// Returned sorted by encoding, zero included.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<u32>> {
        if d == 0 || self.g % d != 0 {
            return Err(Error::DimensionMismatch(format!(
                "GF({}^{}) has no subfield of degree {d}",
                self.q, self.g
            )));
        }
        let sub_order = (self.q as u64).pow(d);
        let step = (self.order - 1) / (sub_order - 1);
        let mut out = vec![0u32, 1u32];
        for t in 1..sub_order - 1 {
            out.push(self.exp[(t * step) as usize]);
        }
        out.sort_unstable();
        out.dedup();
        if out.len() != sub_order as usize {
            return Err(Error::DecodeError("subfield enumeration did not close".into()));
        }
        Ok(out)
    }
}

/// lo + c * other, digitwise mod q over n digits (encodings base q).
fn scale_add(lo: u64, other: u64, c: u32, q: u32, n: u16, _order: u64) -> u64 {
    let mut res = 0u64;
    let mut pw = 1u64;
    let (mut a, mut b) = (lo, other);
    let qq = q as u64;
    for _ in 0..n {
        let d = (a % qq + (b % qq) * c as u64) % qq;
        res += d * pw;
        a /= qq;
        b /= qq;
        pw *= qq;
    }
    res
}

fn digitwise(a: u64, b: u64, q: u32, n: u16, f: impl Fn(u32, u32) -> u32) -> u64 {
    let mut res = 0u64;
    let mut pw = 1u64;
    let (mut x, mut y) = (a, b);
    let qq = q as u64;
    for _ in 0..n {
        let d = f((x % qq) as u32, (y % qq) as u32) as u64;
        res += d * pw;
        x /= qq;
        y /= qq;
        pw *= qq;
    }
    res
}
