//! Presentations `S2((a1,b1),(a2,b2),(a3,b3))`, their notations, and the Z2-homology census.
//!
//! Each exceptional fiber carries a gluing matrix `(a b; c d)` with `ad - bc = 1` sending
//! the meridian and longitude of the solid torus to `a[h] + b[v]` and `c[h] + d[v]` on the
//! boundary of `B0 x S1`. Only `(a, b)` are part of the presentation; `(c, d)` is chosen
//! canonically by [`complete_matrix`].
//!
//! Three notations are understood:
//!
//! | notation | example |
//! |----------|---------|
//! | Martelli | `S2((2,-1),(3,1),(8,1))` |
//! | Hatcher  | `M(+0,0; -1/2, 1/3, 1/8)` |
//! | Orlik    | `[-1; (2,1),(3,1),(8,1)]` |
//!
//! Orlik's form normalizes `0 < b' < a` and moves the integer part into `e`; converting
//! back absorbs `e` into the first fiber.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::arith::{self, gcd, lcm, mod_inverse};
use crate::expr::{Cursor, Lookup};
use crate::{Error, Result};

/// Gluing data `(alpha beta; gamma delta)` of one exceptional fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiberMatrix {
    /// Multiplicity of the exceptional fiber.
    pub alpha: i64,
    /// Obstruction numerator.
    pub beta: i64,
    /// Longitude coefficient of `h`.
    pub gamma: i64,
    /// Longitude coefficient of `v`.
    pub delta: i64,
}

impl FiberMatrix {
    /// Accepts an explicit completion, checking `alpha >= 2`, coprimality and the determinant.
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        check_pair(0, alpha, beta)?;
        let det = arith::det2(alpha, delta, beta, gamma)?;
        if det != 1 {
            return Err(Error::Determinant { fiber: 1, det });
        }
        Ok(FiberMatrix { alpha, beta, gamma, delta })
    }

    /// Another completion of the same `(alpha, beta)`: `(gamma + t alpha, delta + t beta)`.
    pub fn shifted(&self, t: i64) -> Result<Self> {
        Ok(FiberMatrix {
            gamma: arith::add(self.gamma, arith::mul(t, self.alpha)?)?,
            delta: arith::add(self.delta, arith::mul(t, self.beta)?)?,
            ..*self
        })
    }

    /// `alpha delta - beta gamma`.
    pub fn determinant(&self) -> i64 {
        self.alpha * self.delta - self.beta * self.gamma
    }
}

fn check_pair(fiber: usize, alpha: i64, beta: i64) -> Result<()> {
    if alpha < 2 {
        return Err(Error::DegenerateFiber { fiber: fiber + 1, alpha });
    }
    if gcd(alpha, beta) != 1 {
        return Err(Error::FiberNotCoprime { fiber: fiber + 1, alpha, beta });
    }
    Ok(())
}

/// Completes `(alpha, beta)` to a gluing matrix with `1 <= delta <= |beta|`.
pub fn complete_matrix(alpha: i64, beta: i64) -> Result<FiberMatrix> {
    check_pair(0, alpha, beta)?;
    let modulus = beta.abs();
    let delta = match mod_inverse(alpha, modulus) {
        Some(0) | None if modulus == 1 => 1,
        Some(0) => modulus,
        Some(d) => d,
        None => return Err(Error::FiberNotCoprime { fiber: 1, alpha, beta }),
    };
    let num = arith::sub(arith::mul(alpha, delta)?, 1)?;
    debug_assert_eq!(num % beta, 0);
    Ok(FiberMatrix { alpha, beta, gamma: num / beta, delta })
}

/// A small Seifert manifold over `S2` with three exceptional fibers, in user order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeifertPresentation {
    fibers: [FiberMatrix; 3],
}

impl SeifertPresentation {
    /// Builds a presentation from `(alpha, beta)` pairs with canonical completions.
    pub fn new(pairs: [(i64, i64); 3]) -> Result<Self> {
        let mut fibers = [FiberMatrix { alpha: 0, beta: 0, gamma: 0, delta: 0 }; 3];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            check_pair(i, a, b)?;
            fibers[i] = complete_matrix(a, b)?;
        }
        Self::from_fibers(fibers)
    }

    /// Builds a presentation from explicit gluing matrices.
    pub fn from_fibers(fibers: [FiberMatrix; 3]) -> Result<Self> {
        for (i, f) in fibers.iter().enumerate() {
            check_pair(i, f.alpha, f.beta)?;
            let det = arith::det2(f.alpha, f.delta, f.beta, f.gamma)?;
            if det != 1 {
                return Err(Error::Determinant { fiber: i + 1, det });
            }
        }
        let m = SeifertPresentation { fibers };
        if m.euler_sum()?.0 == 0 {
            return Err(Error::NotSmall);
        }
        Ok(m)
    }

    /// The three gluing matrices.
    pub fn fibers(&self) -> &[FiberMatrix; 3] {
        &self.fibers
    }

    /// `(alpha_i, beta_i)` pairs.
    pub fn pairs(&self) -> [(i64, i64); 3] {
        self.fibers.map(|f| (f.alpha, f.beta))
    }

    /// Multiplicities.
    pub fn alphas(&self) -> [i64; 3] {
        self.fibers.map(|f| f.alpha)
    }

    /// `sum beta_i / alpha_i` as a reduced fraction `(numerator, denominator > 0)`.
    pub fn euler_sum(&self) -> Result<(i64, i64)> {
        let den = self.fibers.iter().try_fold(1, |acc, f| lcm(acc, f.alpha))?;
        let mut num = 0i64;
        for f in &self.fibers {
            num = arith::add(num, arith::mul(f.beta, den / f.alpha)?)?;
        }
        let g = gcd(num, den).max(1);
        Ok((num / g, den / g))
    }

    /// The same manifold with fibers listed in the order `order[0], order[1], order[2]`.
    pub fn permuted(&self, order: [usize; 3]) -> Self {
        SeifertPresentation { fibers: order.map(|i| self.fibers[i]) }
    }

    /// Renders the presentation in the requested notation.
    pub fn format(&self, notation: Notation) -> String {
        match notation {
            Notation::Martelli => {
                let [a, b, c] = self.pairs();
                format!("S2(({},{}),({},{}),({},{}))", a.0, a.1, b.0, b.1, c.0, c.1)
            }
            Notation::Hatcher => {
                let [a, b, c] = self.pairs();
                format!("M(+0,0; {}/{}, {}/{}, {}/{})", a.1, a.0, b.1, b.0, c.1, c.0)
            }
            Notation::Orlik => to_orlik_normal_form(self).to_string(),
        }
    }

    /// The Orlik string, constant on fiber-move orbits; used as a stable key.
    pub fn canonical_key(&self) -> String {
        self.format(Notation::Orlik)
    }
}

impl fmt::Display for SeifertPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(Notation::Martelli))
    }
}

impl FromStr for SeifertPresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_presentation(s)
    }
}

/// The three supported notations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Notation {
    /// `S2((a,b),(a,b),(a,b))`
    Martelli,
    /// `M(+0,0; b/a, b/a, b/a)`
    Hatcher,
    /// `[e; (a,b'),(a,b'),(a,b')]`
    Orlik,
}

impl Notation {
    /// All notations, in display order.
    pub const ALL: [Notation; 3] = [Notation::Martelli, Notation::Hatcher, Notation::Orlik];

    /// Detects the notation from the leading token.
    pub fn detect(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        let column = text.len() - trimmed.len() + 1;
        match trimmed.chars().next() {
            Some('S') => Ok(Notation::Martelli),
            Some('M') => Ok(Notation::Hatcher),
            Some('[') => Ok(Notation::Orlik),
            _ => Err(Error::syntax(column, "expected a presentation starting with `S2(`, `M(` or `[`")),
        }
    }

    /// Lowercase name.
    pub fn name(&self) -> &'static str {
        match self {
            Notation::Martelli => "martelli",
            Notation::Hatcher => "hatcher",
            Notation::Orlik => "orlik",
        }
    }
}

impl FromStr for Notation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Notation::ALL
            .into_iter()
            .find(|n| n.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::syntax(1, format!("unknown notation `{s}` (martelli, hatcher, orlik)")))
    }
}

impl fmt::Display for Notation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Orlik's normal form `e + sum b'_i / a_i = sum b_i / a_i` with `0 < b'_i < a_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrlikForm {
    /// Integer obstruction.
    pub e: i64,
    /// `(alpha_i, beta'_i)`.
    pub pairs: [(i64, i64); 3],
}

impl fmt::Display for OrlikForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.pairs;
        write!(f, "[{}; ({},{}),({},{}),({},{})]", self.e, a.0, a.1, b.0, b.1, c.0, c.1)
    }
}

impl OrlikForm {
    /// Back to a presentation, absorbing `e` into fiber 1.
    pub fn to_presentation(&self) -> Result<SeifertPresentation> {
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            check_pair(i, a, b)?;
            if !(0 < b && b < a) {
                return Err(Error::OrlikRange { fiber: i + 1, alpha: a, beta: b });
            }
        }
        let mut pairs = self.pairs;
        pairs[0].1 = arith::add(pairs[0].1, arith::mul(self.e, pairs[0].0)?)?;
        SeifertPresentation::new(pairs)
    }
}

/// Orlik normal form of a presentation.
pub fn to_orlik_normal_form(m: &SeifertPresentation) -> OrlikForm {
    let mut e = 0;
    let pairs = m.pairs().map(|(a, b)| {
        let reduced = b.rem_euclid(a);
        e += (b - reduced) / a;
        (a, reduced)
    });
    OrlikForm { e, pairs }
}

/// Parses any supported notation, detected from the leading token.
pub fn parse_presentation(text: &str) -> Result<SeifertPresentation> {
    parse_with_notation(text, Notation::detect(text)?)
}

/// Parses `text` in a fixed notation.
pub fn parse_with_notation(text: &str, notation: Notation) -> Result<SeifertPresentation> {
    parse_generic(text, notation, &mut |cur: &mut Cursor<'_>| cur.signed_number())
}

/// Parses a template whose numeric slots are integer expressions over `lookup`'s variables,
/// e.g. `S2((2,-1),(2m+1,m),(2n,1))`.
pub fn parse_template(text: &str, lookup: Lookup<'_>) -> Result<SeifertPresentation> {
    let notation = Notation::detect(text)?;
    parse_generic(text, notation, &mut |cur: &mut Cursor<'_>| cur.expr(lookup))
}

type ValueParser<'f> = dyn FnMut(&mut Cursor<'_>) -> Result<i64> + 'f;

fn parse_generic(text: &str, notation: Notation, value: &mut ValueParser<'_>) -> Result<SeifertPresentation> {
    let mut cur = Cursor::new(text);
    let result = match notation {
        Notation::Martelli => {
            if !(cur.eat_str("S2") || cur.eat_str("S^2")) {
                return Err(cur.error_expected("`S2`"));
            }
            cur.expect('(')?;
            let pairs = pair_list(&mut cur, value)?;
            cur.expect(')')?;
            Syntax::Pairs(pairs)
        }
        Notation::Hatcher => {
            if !cur.eat('M') {
                return Err(cur.error_expected("`M`"));
            }
            cur.expect('(')?;
            let col = cur.column();
            let genus = cur.signed_number()?;
            cur.expect(',')?;
            let boundary = cur.signed_number()?;
            if genus != 0 || boundary != 0 {
                return Err(Error::syntax(col, "only closed manifolds over S2 are supported, expected `+0,0`"));
            }
            cur.expect(';')?;
            let mut pairs = [(0, 0); 3];
            for (i, slot) in pairs.iter_mut().enumerate() {
                if i > 0 {
                    cur.expect(',')?;
                }
                let beta = value(&mut cur)?;
                cur.expect('/')?;
                let alpha = value(&mut cur)?;
                *slot = (alpha, beta);
            }
            cur.expect(')')?;
            Syntax::Pairs(pairs)
        }
        Notation::Orlik => {
            cur.expect('[')?;
            let e = value(&mut cur)?;
            if cur.eat(',') {
                cur.expect('(')?;
                if !cur.eat_str("o1") {
                    return Err(cur.error_expected("`o1`"));
                }
                cur.expect(',')?;
                let col = cur.column();
                if cur.number()? != 0 {
                    return Err(Error::syntax(col, "only genus 0 orbit surfaces are supported"));
                }
                cur.expect(')')?;
            }
            cur.expect(';')?;
            let pairs = pair_list(&mut cur, value)?;
            cur.expect(']')?;
            Syntax::Orlik(OrlikForm { e, pairs })
        }
    };
    if !cur.at_end() {
        return Err(cur.error_expected("end of input"));
    }
    match result {
        Syntax::Pairs(pairs) => SeifertPresentation::new(pairs),
        Syntax::Orlik(form) => form.to_presentation(),
    }
}

enum Syntax {
    Pairs([(i64, i64); 3]),
    Orlik(OrlikForm),
}

fn pair_list(cur: &mut Cursor<'_>, value: &mut ValueParser<'_>) -> Result<[(i64, i64); 3]> {
    let mut pairs = [(0, 0); 3];
    for (i, slot) in pairs.iter_mut().enumerate() {
        if i > 0 {
            cur.expect(',')?;
        }
        cur.expect('(')?;
        let a = value(cur)?;
        cur.expect(',')?;
        let b = value(cur)?;
        cur.expect(')')?;
        *slot = (a, b);
    }
    Ok(pairs)
}

/// Uses a compensating pair of fiber moves to make every `beta_i` even.
///
/// Requires all `alpha_i` odd and `beta_1 + beta_2 + beta_3` even; then either no `beta`
/// is odd or exactly two are, and `b_i += a_i`, `b_j -= a_j` fixes both.
pub fn normalize_even_betas(m: &SeifertPresentation) -> Result<SeifertPresentation> {
    let pairs = m.pairs();
    if pairs.iter().any(|&(a, _)| a % 2 == 0) {
        return Err(Error::Precondition("all multiplicities must be odd"));
    }
    if pairs.iter().map(|&(_, b)| b).sum::<i64>() % 2 != 0 {
        return Err(Error::Precondition("the sum of the betas must be even"));
    }
    let odd: Vec<usize> = (0..3).filter(|&i| pairs[i].1 % 2 != 0).collect();
    let mut fibers = *m.fibers();
    if let [i, j] = odd[..] {
        fibers[i] = move_fiber(fibers[i], 1)?;
        fibers[j] = move_fiber(fibers[j], -1)?;
    }
    SeifertPresentation::from_fibers(fibers)
}

/// `beta -> beta + t alpha` with the completion adjusted to keep the determinant.
fn move_fiber(f: FiberMatrix, t: i64) -> Result<FiberMatrix> {
    Ok(FiberMatrix {
        beta: arith::add(f.beta, arith::mul(t, f.alpha)?)?,
        delta: arith::add(f.delta, arith::mul(t, f.gamma)?)?,
        ..f
    })
}

/// Which of the four possible shapes `H1(M; Z2)` takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum HomologyCase {
    /// `H1 = 0`.
    Trivial,
    /// All multiplicities odd: `Z2`, generated by the regular fiber.
    CyclicVertical,
    /// Exactly two even multiplicities: `Z2`.
    CyclicTwoEven,
    /// All multiplicities even: `Z2 + Z2`.
    KleinFour,
}

impl HomologyCase {
    /// Lowercase name.
    pub fn name(&self) -> &'static str {
        match self {
            HomologyCase::Trivial => "trivial",
            HomologyCase::CyclicVertical => "cyclic_vertical",
            HomologyCase::CyclicTwoEven => "cyclic_two_even",
            HomologyCase::KleinFour => "klein_four",
        }
    }
}

/// A nonzero class in `H2(M; Z2)`, recorded by its intersection parities with the
/// boundary curves `h1, h2, h3` and with the regular fiber `v`.
///
/// The `v` parity is only ever set when all multiplicities are odd; in that case the
/// `h` parities equal `beta_i mod 2` of the presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Z2Class {
    /// Parities against `h1, h2, h3`.
    pub h: [bool; 3],
    /// Parity against the regular fiber.
    pub v: bool,
}

impl Z2Class {
    /// The class of the pseudo-vertical surface joining fibers `i` and `j` (0-based).
    pub fn vertical(i: usize, j: usize) -> Self {
        let mut h = [false; 3];
        h[i] = true;
        h[j] = true;
        Z2Class { h, v: false }
    }

    /// `h` parities as `0/1`.
    pub fn parities(&self) -> [u8; 3] {
        self.h.map(u8::from)
    }

    /// The same class after reordering fibers as in [`SeifertPresentation::permuted`].
    pub fn permuted(&self, order: [usize; 3]) -> Self {
        Z2Class { h: order.map(|i| self.h[i]), v: self.v }
    }

    /// `V12`, `V13`, `V23` for classes of pseudo-vertical surfaces, `fiber` otherwise.
    pub fn label(&self) -> String {
        if self.v {
            return String::from("fiber");
        }
        let idx: Vec<usize> = (0..3).filter(|&i| self.h[i]).map(|i| i + 1).collect();
        match idx[..] {
            [i, j] => format!("V{i}{j}"),
            _ => format!("h{}{}{}", u8::from(self.h[0]), u8::from(self.h[1]), u8::from(self.h[2])),
        }
    }
}

impl fmt::Display for Z2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The census of nonzero classes.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HomologyStructure {
    /// Group shape.
    pub case: HomologyCase,
    /// Nonzero classes: none, one, or three.
    pub classes: Vec<Z2Class>,
}

/// Computes `H1(M; Z2)` from the parities of the fiber invariants.
pub fn homology_structure(m: &SeifertPresentation) -> HomologyStructure {
    let pairs = m.pairs();
    let even: Vec<usize> = (0..3).filter(|&i| pairs[i].0 % 2 == 0).collect();
    let (case, classes) = match even[..] {
        [] => {
            let beta_parity = pairs.map(|(_, b)| b.rem_euclid(2) == 1);
            if beta_parity.iter().filter(|&&p| p).count() % 2 == 1 {
                (HomologyCase::Trivial, vec![])
            } else {
                (HomologyCase::CyclicVertical, vec![Z2Class { h: beta_parity, v: true }])
            }
        }
        [_] => (HomologyCase::Trivial, vec![]),
        [i, j] => (HomologyCase::CyclicTwoEven, vec![Z2Class::vertical(i, j)]),
        _ => (HomologyCase::KleinFour, vec![Z2Class::vertical(0, 1), Z2Class::vertical(0, 2), Z2Class::vertical(1, 2)]),
    };
    HomologyStructure { case, classes }
}
