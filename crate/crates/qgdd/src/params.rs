//! Admissibility arithmetic for (v, g, k, lambda) parameters over GF(q):
//! necessary conditions, the minimum index lambda_delta, block-count and
//! replication formulas, and generation of admissible-parameter tables.
//!
//! Everything here is exact big-integer arithmetic; no geometry is touched.
//! A parameter tuple is admissible when
//!   1. g divides v,
//!   2. k <= v - g,
//!   3. the block count and the replication number are integers,
//!   4. q^(k-g) divides lambda whenever 2 <= g <= k.
//! Every admissible lambda is a multiple of the minimum, lambda_delta.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::grassmann::gaussian_binomial;

/// The individual necessary conditions, used to label failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// g | v: a (g-1)-spread of GF(q)^v exists iff g divides v.
    GroupDividesAmbient,
    /// k <= v - g: scattered k-subspaces cannot outgrow the complement.
    BlockWithinComplement,
    /// The block count is an integer.
    BlockCountIntegral,
    /// The replication number is an integer.
    ReplicationIntegral,
    /// q^(k-g) | lambda when 2 <= g <= k (point-multiset divisibility).
    PowerDividesIndex,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Condition::GroupDividesAmbient => "g divides v",
            Condition::BlockWithinComplement => "k <= v - g",
            Condition::BlockCountIntegral => "block count is an integer",
            Condition::ReplicationIntegral => "replication number is an integer",
            Condition::PowerDividesIndex => "q^(k-g) divides lambda",
        };
        f.write_str(s)
    }
}

/// A known maximum index, with the caveat that some values hold for the
/// Desarguesian spread only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaMaxValue {
    pub value: BigUint,
    pub desarguesian_only: bool,
}

/// Exact admissibility report for one parameter tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamReport {
    pub q: u32,
    pub v: u16,
    pub g: u16,
    pub k: u16,
    pub lambda: BigUint,
    pub admissible: bool,
    pub lambda_delta: Option<BigUint>,
    pub lambda_max_known: Option<LambdaMaxValue>,
    /// Block count at this lambda, when integral.
    pub block_count: Option<BigUint>,
    /// Replication number at this lambda, when integral.
    pub replication: Option<BigUint>,
    pub group_count: BigUint,
    pub failed_conditions: Vec<Condition>,
}

/// Number of elements of a (g-1)-spread of GF(q)^v.
pub fn group_count(q: u32, v: u16, g: u16) -> BigUint {
    let pts = gaussian_binomial(v as u64, 1, q as u64);
    let per = gaussian_binomial(g as u64, 1, q as u64);
    pts / per
}

/// Number of lines covered by the elements of a (g-1)-spread.
pub fn spread_line_count(q: u32, v: u16, g: u16) -> BigUint {
    gaussian_binomial(g as u64, 2, q as u64) * group_count(q, v, g)
}

/// Number of lines not covered by any spread element.
pub fn uncovered_line_count(q: u32, v: u16, g: u16) -> BigUint {
    gaussian_binomial(v as u64, 2, q as u64) - spread_line_count(q, v, g)
}

/// Block count lambda * ([v 2] - [g 2][v 1]/[g 1]) / [k 2], when integral.
pub fn block_count(q: u32, v: u16, g: u16, k: u16, lambda: &BigUint) -> Option<BigUint> {
    let num = lambda * uncovered_line_count(q, v, g);
    let den = gaussian_binomial(k as u64, 2, q as u64);
    let (quot, rem) = num.div_rem(&den);
    rem.is_zero().then_some(quot)
}

/// Replication number lambda * ([v-1 1] - [g-1 1]) / [k-1 1], when integral.
pub fn replication(q: u32, v: u16, g: u16, k: u16, lambda: &BigUint) -> Option<BigUint> {
    if v == 0 || g == 0 || k == 0 {
        return None;
    }
    let num = lambda
        * (gaussian_binomial(v as u64 - 1, 1, q as u64) - gaussian_binomial(g as u64 - 1, 1, q as u64));
    let den = gaussian_binomial(k as u64 - 1, 1, q as u64);
    let (quot, rem) = num.div_rem(&den);
    rem.is_zero().then_some(quot)
}

/// Evaluate every necessary condition for (q, v, g, k, lambda) exactly.
/// Failures are reported, never raised; lambda = 0 is never admissible.
pub fn check_conditions(q: u32, v: u16, g: u16, k: u16, lambda: &BigUint) -> ParamReport {
    let mut failed = Vec::new();
    if g == 0 || v == 0 || v % g != 0 {
        failed.push(Condition::GroupDividesAmbient);
    }
    if k as u32 + g as u32 > v as u32 {
        failed.push(Condition::BlockWithinComplement);
    }
    let bc = block_count(q, v, g, k, lambda);
    if bc.is_none() {
        failed.push(Condition::BlockCountIntegral);
    }
    let rep = replication(q, v, g, k, lambda);
    if rep.is_none() {
        failed.push(Condition::ReplicationIntegral);
    }
    if 2 <= g && g <= k {
        let power = BigUint::from(q).pow((k - g) as u32);
        if !(lambda % power).is_zero() {
            failed.push(Condition::PowerDividesIndex);
        }
    }
    let admissible = failed.is_empty() && !lambda.is_zero();
    ParamReport {
        q,
        v,
        g,
        k,
        lambda: lambda.clone(),
        admissible,
        lambda_delta: lambda_delta(q, v, g, k),
        lambda_max_known: lambda_max_known(q, v, g, k),
        block_count: bc,
        replication: rep,
        group_count: group_count_checked(q, v, g),
        failed_conditions: failed,
    }
}

fn group_count_checked(q: u32, v: u16, g: u16) -> BigUint {
    if g == 0 || v == 0 || v % g != 0 {
        return BigUint::zero();
    }
    group_count(q, v, g)
}

/// Smallest lambda >= 1 satisfying all necessary conditions, or none when the
/// structural conditions (g | v, k <= v - g) fail. It is the lcm of the
/// denominators left after reducing the block-count and replication fractions,
/// together with q^(k-g) where applicable; every admissible lambda is one of
/// its multiples.
pub fn lambda_delta(q: u32, v: u16, g: u16, k: u16) -> Option<BigUint> {
    if g == 0 || v == 0 || v % g != 0 || k as u32 + g as u32 > v as u32 || k < 2 {
        return None;
    }
    let a = uncovered_line_count(q, v, g);
    let b = gaussian_binomial(k as u64, 2, q as u64);
    let c = gaussian_binomial(v as u64 - 1, 1, q as u64) - gaussian_binomial(g as u64 - 1, 1, q as u64);
    let d = gaussian_binomial(k as u64 - 1, 1, q as u64);
    let mut delta = (&b / a.gcd(&b)).lcm(&(&d / c.gcd(&d)));
    if 2 <= g && g <= k {
        delta = delta.lcm(&BigUint::from(q).pow((k - g) as u32));
    }
    Some(delta)
}

/// Maximum indices with a closed form or a stored enumeration result:
/// k = 3 holds for every spread; g = 2, k = 4 and the two stored values
/// (8,4,4) and (9,3,4) over GF(2) hold for the Desarguesian spread.
pub fn lambda_max_known(q: u32, v: u16, g: u16, k: u16) -> Option<LambdaMaxValue> {
    if g == 0 || v == 0 || v % g != 0 || k as u32 + g as u32 > v as u32 {
        return None;
    }
    if k == 3 {
        return Some(LambdaMaxValue {
            value: crate::gdd::lambda_max_k3(q, v, g),
            desarguesian_only: false,
        });
    }
    if g == 2 && k == 4 {
        return Some(LambdaMaxValue {
            value: crate::gdd::lambda_max_g2k4(q, v),
            desarguesian_only: true,
        });
    }
    // enumeration results, reproducible via the brute-force maximum index
    if (q, v, g, k) == (2, 8, 4, 4) {
        return Some(LambdaMaxValue { value: BigUint::from(14u32), desarguesian_only: true });
    }
    if (q, v, g, k) == (2, 9, 3, 4) {
        return Some(LambdaMaxValue { value: BigUint::from(1680u32), desarguesian_only: true });
    }
    None
}

/// All rows (v, g, k) with 2 <= g < v, g | v and 3 <= k <= v - g, evaluated
/// at lambda = lambda_delta. With `desarguesian_cap` set, k is additionally
/// capped at v/2 (scattered subspaces of a Desarguesian spread cannot exceed
/// dimension v/2). Rows are sorted by (v, g, k).
pub fn admissible_table(q: u32, v_max: u16, desarguesian_cap: bool) -> Vec<ParamReport> {
    let mut rows = Vec::new();
    for v in 2..=v_max {
        for g in 2..v {
            if v % g != 0 {
                continue;
            }
            let mut k_hi = v - g;
            if desarguesian_cap {
                k_hi = k_hi.min(v / 2);
            }
            for k in 3..=k_hi {
                let Some(delta) = lambda_delta(q, v, g, k) else { continue };
                rows.push(check_conditions(q, v, g, k, &delta));
            }
        }
    }
    rows
}
