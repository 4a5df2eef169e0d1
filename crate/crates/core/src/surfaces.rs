//! Candidate one-sided surfaces: pseudo-vertical surfaces `V_ij` and pseudo-horizontal
//! surfaces determined by slopes `(lambda_i, mu_i)` on the three boundary tori.
//!
//! A pseudo-horizontal surface meets the regular part `M0` in a horizontal surface of
//! covering degree `lambda = lcm(lambda_i)` and caps off inside each solid torus with
//! either meridian disks or a one-sided surface of genus `N`.

use alloc::vec::Vec;
use core::fmt;

use crate::arith::{self, gcd, lcm};
use crate::lens::{n_genus, LensCurve};
use crate::seifert::{homology_structure, FiberMatrix, HomologyCase, SeifertPresentation, Z2Class};
use crate::{Error, Result};

/// Boundary slopes `(lambda_i, mu_i)` of a pseudo-horizontal surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PHParams {
    /// `(lambda_i, mu_i)` with `lambda_i > 0` and `gcd(lambda_i, mu_i) = 1`.
    pub pairs: [(i64, i64); 3],
    /// `lcm(lambda_1, lambda_2, lambda_3)`.
    pub lam: i64,
}

impl PHParams {
    /// Checks `lambda_i > 0` and coprimality, and computes `lam`.
    pub fn new(pairs: [(i64, i64); 3]) -> Result<Self> {
        let mut lam = 1;
        for &(l, m) in &pairs {
            if l <= 0 || gcd(l, m) != 1 {
                return Err(Error::BadFraction(m, l));
            }
            lam = lcm(lam, l)?;
        }
        Ok(PHParams { pairs, lam })
    }

    /// The same slopes listed in the order `order[0], order[1], order[2]`.
    pub fn permuted(&self, order: [usize; 3]) -> Self {
        PHParams { pairs: order.map(|i| self.pairs[i]), lam: self.lam }
    }
}

impl fmt::Display for PHParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.pairs;
        write!(f, "(({},{}),({},{}),({},{}))", a.0, a.1, b.0, b.1, c.0, c.1)
    }
}

/// The first existence condition a parameter triple fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PhViolation {
    /// `sum mu_i / lambda_i != 0`.
    SlopeSum,
    /// None of: all `lambda` odd with `sum mu` even; exactly two `lambda` even; all
    /// `lambda` even with all `mu` odd.
    ParityPattern,
    /// `lambda_i` is neither the lcm nor paired with `(alpha_i, beta_i)`.
    NotLcm {
        /// 1-based fiber.
        fiber: usize,
    },
    /// `lambda_i - alpha_i` or `mu_i - beta_i` is odd.
    Congruence {
        /// 1-based fiber.
        fiber: usize,
    },
    /// Every torus is capped by meridian disks, giving an orientable horizontal surface.
    AllMeridians,
}

impl fmt::Display for PhViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhViolation::SlopeSum => f.write_str("the slopes mu_i/lambda_i do not sum to zero"),
            PhViolation::ParityPattern => f.write_str("the parities of lambda_i and mu_i fit no admissible pattern"),
            PhViolation::NotLcm { fiber } => {
                write!(
                    f,
                    "lambda_{fiber} is not the lcm and (lambda_{fiber}, mu_{fiber}) != (alpha_{fiber}, beta_{fiber})"
                )
            }
            PhViolation::Congruence { fiber } => {
                write!(f, "lambda_{fiber} - alpha_{fiber} or mu_{fiber} - beta_{fiber} is odd")
            }
            PhViolation::AllMeridians => f.write_str("all three tori are capped by meridian disks"),
        }
    }
}

/// Decides whether `p` determines a pseudo-horizontal surface in `m`.
pub fn ph_exists(m: &SeifertPresentation, p: &PHParams) -> core::result::Result<(), PhViolation> {
    let lam = p.lam;
    let mut sum: i128 = 0;
    for &(l, mu) in &p.pairs {
        sum += i128::from(mu) * i128::from(lam / l);
    }
    if sum != 0 {
        return Err(PhViolation::SlopeSum);
    }

    let even_lambdas = p.pairs.iter().filter(|(l, _)| l % 2 == 0).count();
    let parity_ok = match even_lambdas {
        0 => p.pairs.iter().map(|&(_, mu)| mu.rem_euclid(2)).sum::<i64>() % 2 == 0,
        2 => true,
        3 => p.pairs.iter().all(|&(_, mu)| mu % 2 != 0),
        _ => false,
    };
    if !parity_ok {
        return Err(PhViolation::ParityPattern);
    }

    let native = m.pairs();
    for (i, (&(l, mu), &(a, b))) in p.pairs.iter().zip(&native).enumerate() {
        if l != lam && (l, mu) != (a, b) {
            return Err(PhViolation::NotLcm { fiber: i + 1 });
        }
    }
    for (i, (&(l, mu), &(a, b))) in p.pairs.iter().zip(&native).enumerate() {
        if (l - a) % 2 != 0 || (mu - b) % 2 != 0 {
            return Err(PhViolation::Congruence { fiber: i + 1 });
        }
    }
    if p.pairs == native {
        return Err(PhViolation::AllMeridians);
    }
    Ok(())
}

/// The curve bounded inside solid torus `f` by a boundary slope `(lambda, mu)`:
/// `(mu alpha - lambda beta, lambda delta - mu gamma)`.
pub fn torus_curve(f: &FiberMatrix, lambda: i64, mu: i64) -> Result<LensCurve> {
    let twok = arith::sub(arith::mul(mu, f.alpha)?, arith::mul(lambda, f.beta)?)?;
    let q = arith::sub(arith::mul(lambda, f.delta)?, arith::mul(mu, f.gamma)?)?;
    LensCurve::new(twok, q)
}

/// Nonorientable genus `2 + lambda (1 - sum 1/lambda_i) + sum N(c_i)`.
pub fn ph_genus(m: &SeifertPresentation, p: &PHParams) -> Result<u64> {
    ph_exists(m, p).map_err(Error::NoPseudoHorizontal)?;
    let lam = p.lam;
    let mut genus: i64 = arith::add(2, lam)?;
    for (f, &(l, mu)) in m.fibers().iter().zip(&p.pairs) {
        if lam % l != 0 {
            return Err(Error::invariant("lcm not divisible by a slope denominator"));
        }
        genus = arith::sub(genus, lam / l)?;
        let n = n_genus(torus_curve(f, l, mu)?);
        genus = arith::add(genus, i64::try_from(n).map_err(|_| Error::Overflow)?)?;
    }
    if genus < 1 {
        return Err(Error::invariant(alloc::format!("pseudo-horizontal genus {genus} for {p}")));
    }
    Ok(genus as u64)
}

/// The Z2-homology class carried by the surface of `p`.
pub fn ph_class(m: &SeifertPresentation, p: &PHParams) -> Result<Z2Class> {
    ph_exists(m, p).map_err(Error::NoPseudoHorizontal)?;
    let hs = homology_structure(m);
    match hs.case {
        HomologyCase::Trivial => Err(Error::TrivialHomology),
        HomologyCase::CyclicVertical | HomologyCase::CyclicTwoEven => Ok(hs.classes[0]),
        HomologyCase::KleinFour => {
            let h = p.pairs.map(|(l, mu)| (mu * (p.lam / l)).rem_euclid(2) == 1);
            let class = Z2Class { h, v: false };
            if hs.classes.contains(&class) {
                Ok(class)
            } else {
                Err(Error::invariant(alloc::format!("parities {:?} of {p} name no class", class.parities())))
            }
        }
    }
}

/// A pseudo-vertical surface joining two solid tori with even multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerticalSurface {
    /// 1-based fiber indices, increasing.
    pub connects: [u8; 2],
}

impl fmt::Display for VerticalSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}{}", self.connects[0], self.connects[1])
    }
}

/// Either family of candidate surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", content = "params", rename_all = "lowercase"))]
pub enum SurfaceKind {
    /// Pseudo-vertical.
    Vertical(VerticalSurface),
    /// Pseudo-horizontal.
    Horizontal(PHParams),
}

impl SurfaceKind {
    /// `vertical` or `horizontal`.
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceKind::Vertical(_) => "vertical",
            SurfaceKind::Horizontal(_) => "horizontal",
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::Vertical(v) => write!(f, "vertical {v}"),
            SurfaceKind::Horizontal(p) => write!(f, "horizontal {p}"),
        }
    }
}

/// A measured candidate surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurfaceReport {
    /// The surface.
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub kind: SurfaceKind,
    /// Nonorientable genus.
    pub genus: u64,
    /// Z2-homology class.
    pub class: Z2Class,
    /// `max(0, genus - 2)`.
    pub norm: u64,
}

impl SurfaceReport {
    /// Assembles a report, deriving the norm contribution from the genus.
    pub fn new(kind: SurfaceKind, genus: u64, class: Z2Class) -> Self {
        SurfaceReport { kind, genus, class, norm: genus.saturating_sub(2) }
    }

    /// Measures and classifies a pseudo-horizontal candidate.
    pub fn horizontal(m: &SeifertPresentation, p: &PHParams) -> Result<Self> {
        Ok(SurfaceReport::new(SurfaceKind::Horizontal(*p), ph_genus(m, p)?, ph_class(m, p)?))
    }
}

/// All pseudo-vertical surfaces, one per pair of even multiplicities, with genus
/// `N(alpha_i, beta_i) + N(alpha_j, beta_j)`.
pub fn vertical_surfaces(m: &SeifertPresentation) -> Vec<SurfaceReport> {
    let pairs = m.pairs();
    let even: Vec<usize> = (0..3).filter(|&i| pairs[i].0 % 2 == 0).collect();
    if even.len() < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (x, &i) in even.iter().enumerate() {
        for &j in &even[x + 1..] {
            let genus: u64 = [i, j]
                .iter()
                .map(|&t| n_genus(LensCurve::new(pairs[t].0, pairs[t].1).expect("even alpha coprime to beta")))
                .sum();
            let surface = VerticalSurface { connects: [i as u8 + 1, j as u8 + 1] };
            out.push(SurfaceReport::new(SurfaceKind::Vertical(surface), genus, Z2Class::vertical(i, j)));
        }
    }
    out
}
