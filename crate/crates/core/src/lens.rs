//! The one-sided genus function `N(2k, q)` of a solid torus.
//!
//! A curve `2k[l] + q[m]` on the boundary of a solid torus bounds, up to isotopy, a unique
//! geometric incompressible one-sided surface when `k != 0`. Its nonorientable genus is
//! `N(2k, q)`, which is also the least genus of a one-sided surface in the lens space
//! `L(2k, q)`. The meridian bounds a disk, so `N(0, 1) = 0`.
//!
//! Two independent evaluations are provided. [`n_genus`] reads the value off the continued
//! fraction of `2k/q` with the skip-sum rule, while [`n_genus_oracle`] runs the recursion
//! `N(2k, q) = N(2(k - Q), q - 2m) + 1` with `2km - Qq = ±1`, `0 < Q < k`.

use alloc::vec::Vec;
use core::fmt;

use crate::arith::gcd;
use crate::{Error, Result};

/// A boundary slope `2k[l] + q[m]` with `gcd(2k, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LensCurve {
    twok: i64,
    q: i64,
}

impl LensCurve {
    /// The meridian `(0, 1)`.
    pub const MERIDIAN: LensCurve = LensCurve { twok: 0, q: 1 };

    /// Validates parity and coprimality.
    pub fn new(twok: i64, q: i64) -> Result<Self> {
        if twok % 2 != 0 {
            return Err(Error::OddLongitude(twok));
        }
        if gcd(twok, q) != 1 {
            return Err(Error::NotCoprime(twok, q));
        }
        Ok(LensCurve { twok, q })
    }

    /// Coefficient of the longitude (always even).
    pub fn twok(&self) -> i64 {
        self.twok
    }

    /// Coefficient of the meridian.
    pub fn q(&self) -> i64 {
        self.q
    }

    /// True for the representative returned by [`normalize_lens`]: `(0, 1)` or
    /// `2k > 0` with `0 < q <= k` (equality only for `(2, 1)`).
    pub fn is_normalized(&self) -> bool {
        if self.twok == 0 {
            return self.q == 1;
        }
        self.twok > 0 && self.q > 0 && 2 * self.q <= self.twok
    }
}

impl fmt::Display for LensCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.twok, self.q)
    }
}

/// One of the three value-preserving rewrites applied by [`normalize_lens`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NormalizationRule {
    /// `N(2k, q) = N(-2k, -q)`.
    SignFlip,
    /// `N(2k, q) = N(2k, q + 2k)`.
    ReduceModulo,
    /// `N(2k, q) = N(2k, 2k - q)`.
    Reflect,
}

/// Applies sign flip, reduction mod `2k` and reflection, recording each rule that changed
/// the curve.
pub fn normalize_steps(c: LensCurve) -> Vec<(NormalizationRule, LensCurve)> {
    let mut steps = Vec::new();
    if c.twok == 0 {
        if c.q != 1 {
            steps.push((NormalizationRule::SignFlip, LensCurve::MERIDIAN));
        }
        return steps;
    }
    let mut cur = c;
    if cur.twok < 0 {
        cur = LensCurve { twok: -cur.twok, q: -cur.q };
        steps.push((NormalizationRule::SignFlip, cur));
    }
    let reduced = cur.q.rem_euclid(cur.twok);
    if reduced != cur.q {
        cur.q = reduced;
        steps.push((NormalizationRule::ReduceModulo, cur));
    }
    if 2 * cur.q > cur.twok {
        cur.q = cur.twok - cur.q;
        steps.push((NormalizationRule::Reflect, cur));
    }
    steps
}

/// The canonical representative of `c` on which `N` is evaluated.
pub fn normalize_lens(c: LensCurve) -> LensCurve {
    normalize_steps(c).last().map_or(c, |&(_, n)| n)
}

/// Continued fraction digits `[a0; a1, ..., an]` in canonical form.
///
/// `a0 >= 0`, `ai > 0` for `i >= 1`, and `an > 1` whenever `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CfDigits(Vec<u64>);

impl CfDigits {
    /// Validates digits, folding a trailing `[..., a, 1]` into `[..., a + 1]`.
    pub fn new(mut digits: Vec<u64>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::BadDigits("empty digit list"));
        }
        if digits[1..].contains(&0) {
            return Err(Error::BadDigits("partial quotients after the first must be positive"));
        }
        if digits.len() >= 2 && digits[digits.len() - 1] == 1 {
            digits.pop();
            let last = digits.last_mut().expect("nonempty");
            *last = last.checked_add(1).ok_or(Error::Overflow)?;
        }
        Ok(CfDigits(digits))
    }

    /// The digits as a slice.
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Folds the digits back into a reduced fraction `(numerator, denominator)`.
    pub fn reconstruct(&self) -> Result<(u64, u64)> {
        let (mut num, mut den) = (1u64, 0u64);
        for &a in self.0.iter().rev() {
            let next = a.checked_mul(num).and_then(|v| v.checked_add(den)).ok_or(Error::Overflow)?;
            (num, den) = (next, num);
        }
        Ok((num, den))
    }
}

/// Partial quotients of `num/den` by the Euclidean algorithm. The fraction need not be
/// reduced; the digits only depend on its value.
pub(crate) fn euclid_digits(mut num: u64, mut den: u64) -> Vec<u64> {
    let mut digits = Vec::new();
    while den != 0 {
        digits.push(num / den);
        (num, den) = (den, num % den);
    }
    digits
}

/// Continued fraction of a positive reduced fraction.
pub fn cf_expand(numerator: i64, denominator: i64) -> Result<CfDigits> {
    if numerator <= 0 || denominator <= 0 || gcd(numerator, denominator) != 1 {
        return Err(Error::BadFraction(numerator, denominator));
    }
    Ok(CfDigits(euclid_digits(numerator as u64, denominator as u64)))
}

/// The skip sequence `b`: digits are added in order, except that the digit following an
/// even partial sum is skipped when the previous digit was itself taken.
pub fn b_sequence(digits: &[u64]) -> Vec<u64> {
    let mut b = Vec::with_capacity(digits.len());
    let mut sum = 0u64;
    for (i, &a) in digits.iter().enumerate() {
        let skip = i > 0 && b[i - 1] == digits[i - 1] && sum.is_multiple_of(2);
        let bi = if skip { 0 } else { a };
        sum += bi;
        b.push(bi);
    }
    b
}

/// Half the sum of the skip sequence.
pub fn skip_sum(digits: &CfDigits) -> Result<u64> {
    let total: u64 = b_sequence(digits.as_slice()).iter().sum();
    if !total.is_multiple_of(2) {
        return Err(Error::OddSkipSum(total));
    }
    Ok(total / 2)
}

/// `N(2k, q)` by continued fractions.
pub fn n_genus(c: LensCurve) -> u64 {
    let n = normalize_lens(c);
    if n.twok == 0 {
        return 0;
    }
    let digits = CfDigits(euclid_digits(n.twok as u64, n.q as u64));
    skip_sum(&digits).expect("valid lens curves have an even skip sum")
}

/// Convenience wrapper validating `(2k, q)` first.
pub fn n_genus_of(twok: i64, q: i64) -> Result<u64> {
    LensCurve::new(twok, q).map(n_genus)
}

/// `N(2k, q)` by the recursion on `(Q, m)`, normalizing at every step.
///
/// Both signs of `2km - Qq = ±1` are searched by brute force over `0 < Q < k`;
/// `+1` wins when both occur.
pub fn n_genus_oracle(c: LensCurve) -> Result<u64> {
    let mut cur = normalize_lens(c);
    let mut acc = 0u64;
    loop {
        if cur.twok == 0 {
            return Ok(acc);
        }
        let (twok, q) = (cur.twok, cur.q);
        let k = twok / 2;
        if q == 1 {
            return Ok(acc + k as u64);
        }
        let step = [1i64, -1].iter().find_map(|&sign| {
            (1..k).find_map(|big_q| {
                let t = big_q * q + sign;
                (t % twok == 0).then_some((big_q, t / twok))
            })
        });
        let (big_q, m) = step.ok_or(Error::NoRecursionStep(twok, q))?;
        cur = normalize_lens(LensCurve::new(2 * (k - big_q), q - 2 * m)?);
        acc += 1;
    }
}

/// True when the digits of `target`, or its alternate expansion `[..., an - 1, 1]`, form a
/// strict prefix of the digits of the normalized `c`.
///
/// The skip sequence of a prefix does not depend on later digits, so a `true` answer
/// certifies `N(c) >= N(target)`. `false` says nothing.
pub fn n_lower_bound_reached(c: LensCurve, target: LensCurve) -> Result<bool> {
    if !target.is_normalized() {
        return Err(Error::NotNormalized(target.twok, target.q));
    }
    let c = normalize_lens(c);
    if target.twok == 0 || c.twok == 0 {
        return Ok(false);
    }
    let t = euclid_digits(target.twok as u64, target.q as u64);
    let d = euclid_digits(c.twok as u64, c.q as u64);
    Ok(is_strict_prefix(&t, &d) || alternate_expansion(&t).is_some_and(|alt| is_strict_prefix(&alt, &d)))
}

pub(crate) fn is_strict_prefix(prefix: &[u64], digits: &[u64]) -> bool {
    digits.len() > prefix.len() && digits.starts_with(prefix)
}

/// The non-canonical expansion `[..., an - 1, 1]` of the same rational.
pub(crate) fn alternate_expansion(digits: &[u64]) -> Option<Vec<u64>> {
    let (&last, head) = digits.split_last()?;
    if last < 2 {
        return None;
    }
    let mut alt = head.to_vec();
    alt.push(last - 1);
    alt.push(1);
    Some(alt)
}

/// Intermediate data of an `N` evaluation, for display.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NGenusExplanation {
    /// The curve as given.
    pub input: LensCurve,
    /// Each normalization rule that fired, with the curve after it.
    pub steps: Vec<(NormalizationRule, LensCurve)>,
    /// The normalized curve.
    pub normalized: LensCurve,
    /// Continued fraction digits of `2k/q` (empty for the meridian).
    pub digits: Vec<u64>,
    /// The skip sequence.
    pub b: Vec<u64>,
    /// `N`.
    pub value: u64,
}

/// Evaluates `N` and keeps every intermediate.
pub fn explain_n_genus(c: LensCurve) -> NGenusExplanation {
    let steps = normalize_steps(c);
    let normalized = normalize_lens(c);
    let digits =
        if normalized.twok == 0 { Vec::new() } else { euclid_digits(normalized.twok as u64, normalized.q as u64) };
    let b = b_sequence(&digits);
    NGenusExplanation { input: c, steps, normalized, digits, b, value: n_genus(c) }
}
