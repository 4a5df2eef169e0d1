//! Checked integer helpers. Overflow is always reported, never wrapped.

use crate::{Error, Result};

/// Nonnegative greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Least common multiple of two positive integers.
pub fn lcm(a: i64, b: i64) -> Result<i64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    mul(a / gcd(a, b), b).map(i64::abs)
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (r0, x0, y0) = (-r0, -x0, -y0);
    }
    (r0 as i64, x0 as i64, y0 as i64)
}

/// Inverse of `a` modulo `m > 1`, in `[0, m)`.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

#[inline]
pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

/// `a*b - c*d`, checked.
#[inline]
pub(crate) fn det2(a: i64, b: i64, c: i64, d: i64) -> Result<i64> {
    sub(mul(a, b)?, mul(c, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_bezout() {
        for a in -30i64..=30 {
            for b in -30i64..=30 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(a * x + b * y, g);
            }
        }
    }

    #[test]
    fn inverse_and_lcm() {
        assert_eq!(mod_inverse(3, 8), Some(3));
        assert_eq!(mod_inverse(4, 8), None);
        assert_eq!(lcm(4, 6).unwrap(), 12);
        assert_eq!(mul(i64::MAX, 2), Err(Error::Overflow));
    }
}
