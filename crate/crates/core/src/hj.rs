//! Exact arithmetic for cyclic fiber types and their minus
//! (Hirzebruch–Jung) continued-fraction expansions.
//!
//! A fiber type `(r, a)` encodes the cyclic group of order `r` acting on
//! coordinates with rotation numbers `(1, a)`. The expansion
//! `r/a = b_1 - 1/(b_2 - 1/(... - 1/b_n))` with every `b_i >= 2` drives the
//! construction of every atlas in this crate, so it is computed exactly in
//! machine integers with overflow checks.

use crate::error::{Error, Result};
use serde::Serialize;

/// Greatest common divisor of two non-negative integers.
fn gcd(mut x: i64, mut y: i64) -> i64 {
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    x
}

/// A canonicalized cyclic fiber type `(r, a)`.
///
/// Invariants after construction: `r >= 1`; if `r = 1` then `a = 1`
/// (the regular fiber); otherwise `1 <= a < r` and `gcd(r, a) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FiberType {
    r: i64,
    a: i64,
}

impl FiberType {
    /// Builds a fiber type from raw parameters, canonicalizing `a` into
    /// `[1, r)` modulo `r` and rejecting non-faithful pairs.
    pub fn new(r: i64, a: i64) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidFiberType { r, a });
        }
        if r == 1 {
            // Every weight is equivalent mod 1: the regular fiber.
            return Ok(FiberType { r: 1, a: 1 });
        }
        let a_mod = a.rem_euclid(r);
        if a_mod == 0 {
            return Err(Error::NonFaithful { r, a: a_mod, g: r });
        }
        let g = gcd(r, a_mod);
        if g != 1 {
            return Err(Error::NonFaithful { r, a: a_mod, g });
        }
        Ok(FiberType { r, a: a_mod })
    }

    /// Order of the cyclic group.
    pub fn r(&self) -> i64 {
        self.r
    }

    /// Canonicalized rotation parameter in `[1, r)` (equal to 1 when
    /// `r = 1`).
    pub fn a(&self) -> i64 {
        self.a
    }

    /// Whether this is the regular fiber `(1, 1)`.
    pub fn is_regular(&self) -> bool {
        self.r == 1
    }

    /// Minus continued-fraction expansion of `r/a`.
    ///
    /// Fails with [`Error::RegularFiber`] when `r = 1`, since the expansion
    /// of `1/1` is empty and every construction that consumes it requires a
    /// genuine singularity.
    pub fn expansion(&self) -> Result<HjExpansion> {
        if self.is_regular() {
            return Err(Error::RegularFiber);
        }
        Ok(hj_expand(self.r, self.a))
    }

    /// Length `n` of the expansion (0 for the regular fiber).
    pub fn length(&self) -> usize {
        if self.is_regular() {
            0
        } else {
            hj_expand(self.r, self.a).coefficients.len()
        }
    }
}

/// A minus continued-fraction expansion together with its remainder
/// sequence.
///
/// For `r/a` with `0 < a < r` coprime, the remainders satisfy
/// `rem[0] = r`, `rem[1] = a`, `rem[i-1] = rem[i] * b_i - rem[i+1]`,
/// ending in `rem[n] = 1` followed by `rem[n+1] = 0`. The sequence is
/// strictly decreasing, which is what makes each resolution chart chain
/// terminate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HjExpansion {
    /// Coefficients `b_1, ..., b_n`, all `>= 2`.
    #[serde(rename = "b")]
    pub coefficients: Vec<i64>,
    /// Remainders `r = rem[0] > a = rem[1] > ... > 1 > 0`, of length
    /// `n + 2`.
    pub remainders: Vec<i64>,
}

impl HjExpansion {
    /// Number of coefficients `n`.
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    /// True only for the (unused) empty expansion.
    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Computes the minus continued-fraction expansion of `r/a`.
///
/// Requires `0 < a < r` and `gcd(r, a) = 1`; [`FiberType`] guarantees this.
pub fn hj_expand(r: i64, a: i64) -> HjExpansion {
    debug_assert!(0 < a && a < r, "need 0 < a < r, got ({r},{a})");
    let mut remainders = vec![r, a];
    let mut coefficients = Vec::new();
    let (mut prev, mut cur) = (r, a);
    while cur > 0 {
        // b = ceil(prev / cur); exact since both are positive.
        let b = (prev + cur - 1) / cur;
        let next = b * cur - prev;
        debug_assert!(next >= 0 && next < cur);
        coefficients.push(b);
        remainders.push(next);
        prev = cur;
        cur = next;
    }
    HjExpansion {
        coefficients,
        remainders,
    }
}

/// Evaluates a minus continued fraction `b_1 - 1/(b_2 - 1/(...))` exactly,
/// returning the reduced fraction `(numerator, denominator)` with positive
/// denominator.
///
/// Every coefficient must be `>= 2`; the value then satisfies
/// `numerator > denominator >= 1` and `gcd = 1`, so the round trip
/// `hj_expand(num, den)` recovers the input coefficients.
pub fn hj_evaluate(coefficients: &[i64]) -> Result<(i64, i64)> {
    if coefficients.is_empty() {
        return Err(Error::InvalidExpansion {
            reason: "empty coefficient list".to_string(),
        });
    }
    for (i, &b) in coefficients.iter().enumerate() {
        if b < 2 {
            return Err(Error::InvalidExpansion {
                reason: format!("coefficient b_{} = {b} is below 2", i + 1),
            });
        }
    }
    // Evaluate back-to-front as a fraction num/den, in i128 to postpone
    // overflow, with a final checked narrowing to i64.
    let mut num: i128 = *coefficients.last().unwrap() as i128;
    let mut den: i128 = 1;
    for &b in coefficients.iter().rev().skip(1) {
        // b - den/num = (b*num - den) / num
        let new_num = (b as i128)
            .checked_mul(num)
            .and_then(|p| p.checked_sub(den))
            .ok_or(Error::Overflow)?;
        den = num;
        num = new_num;
    }
    let g = {
        let (mut x, mut y) = (num, den);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    let (num, den) = (num / g, den / g);
    let num = i64::try_from(num).map_err(|_| Error::Overflow)?;
    let den = i64::try_from(den).map_err(|_| Error::Overflow)?;
    Ok((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(r: i64, a: i64) -> (Vec<i64>, Vec<i64>) {
        let e = hj_expand(r, a);
        (e.coefficients, e.remainders)
    }

    #[test]
    fn known_expansions() {
        assert_eq!(expand(2, 1).0, vec![2]);
        assert_eq!(expand(3, 2).0, vec![2, 2]);
        assert_eq!(expand(5, 2).0, vec![3, 2]);
        assert_eq!(expand(5, 3).0, vec![2, 3]);
        assert_eq!(expand(7, 3).0, vec![3, 2, 2]);
        assert_eq!(expand(7, 4).0, vec![2, 4]);
        assert_eq!(expand(7, 5).0, vec![2, 2, 3]);
        assert_eq!(expand(11, 7).0, vec![2, 3, 2, 2]);
        assert_eq!(expand(12, 5).0, vec![3, 2, 3]);
        assert_eq!(expand(13, 8).0, vec![2, 3, 3]);
    }

    #[test]
    fn remainder_sequence_structure() {
        let (bs, rems) = expand(7, 3);
        assert_eq!(rems, vec![7, 3, 2, 1, 0]);
        assert_eq!(rems.len(), bs.len() + 2);
        for i in 1..=bs.len() {
            assert_eq!(rems[i - 1], rems[i] * bs[i - 1] - rems[i + 1]);
        }
        // Strictly decreasing, ending ..., 1, 0.
        for w in rems.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert_eq!(rems[rems.len() - 2], 1);
        assert_eq!(rems[rems.len() - 1], 0);
    }

    #[test]
    fn evaluate_inverts_expand_for_all_coprime_pairs() {
        for r in 2..=200 {
            for a in 1..r {
                if gcd(r, a) != 1 {
                    continue;
                }
                let e = hj_expand(r, a);
                assert!(e.coefficients.iter().all(|&b| b >= 2), "({r},{a})");
                let (num, den) = hj_evaluate(&e.coefficients).unwrap();
                assert_eq!((num, den), (r, a), "({r},{a})");
            }
        }
    }

    #[test]
    fn evaluate_rejects_bad_coefficients() {
        assert!(matches!(
            hj_evaluate(&[]),
            Err(Error::InvalidExpansion { .. })
        ));
        assert!(matches!(
            hj_evaluate(&[3, 1, 2]),
            Err(Error::InvalidExpansion { .. })
        ));
    }

    #[test]
    fn fiber_type_canonicalizes() {
        let f = FiberType::new(7, 10).unwrap();
        assert_eq!((f.r(), f.a()), (7, 3));
        let f = FiberType::new(7, -4).unwrap();
        assert_eq!((f.r(), f.a()), (7, 3));
        let f = FiberType::new(1, 42).unwrap();
        assert!(f.is_regular());
        assert_eq!((f.r(), f.a()), (1, 1));
        assert_eq!(f.length(), 0);
        assert!(matches!(f.expansion(), Err(Error::RegularFiber)));
    }

    #[test]
    fn fiber_type_rejects_invalid() {
        assert!(matches!(
            FiberType::new(0, 1),
            Err(Error::InvalidFiberType { .. })
        ));
        assert!(matches!(
            FiberType::new(-3, 1),
            Err(Error::InvalidFiberType { .. })
        ));
        assert!(matches!(
            FiberType::new(6, 4),
            Err(Error::NonFaithful { g: 2, .. })
        ));
        assert!(matches!(
            FiberType::new(6, 0),
            Err(Error::NonFaithful { g: 6, .. })
        ));
        assert!(matches!(
            FiberType::new(6, 6),
            Err(Error::NonFaithful { g: 6, .. })
        ));
    }

    #[test]
    fn length_matches_expansion() {
        for (r, a, n) in [(2, 1, 1), (7, 3, 3), (11, 7, 4), (12, 5, 3)] {
            let f = FiberType::new(r, a).unwrap();
            assert_eq!(f.length(), n);
            assert_eq!(f.expansion().unwrap().len(), n);
        }
    }
}
