//! Least-genus representatives of every nonzero class, and batch scans over families.
//!
//! Pseudo-horizontal candidates split by how the slope denominators compare (the pattern
//! `lambda_i = lambda_j < lambda_k` never occurs):
//!
//! * all equal to an odd `lambda`, possible only when every multiplicity is odd;
//! * `lambda_i < lambda_j = lambda_k`, where torus `i` keeps `(alpha_i, beta_i)` and
//!   `lambda = p alpha_i`;
//! * all distinct, where two native slopes force the third.
//!
//! The first two families have a fixed `lambda` and free `mu` values on a lattice plane or
//! line. Far out, each torus is controlled by a *tail certificate*: once the continued
//! fraction of its curve begins with an expansion of the limiting slope, the curve is
//! `[P, t]` with `t` moving by one for every `lambda` step of `mu`, and a further `2 lambda`
//! step outward never lowers `N`. Shifting opposite coordinates toward their certificates
//! then reduces every candidate to a bounded box, which is enumerated in full. A torus
//! whose certificate is not found within `mu_window` leaves its class marked
//! non-exhaustive.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::arith::gcd;
use crate::expr::{eval_constraint, Lookup};
use crate::lens::{alternate_expansion, euclid_digits, is_strict_prefix, n_genus};
use crate::seifert::{
    homology_structure, parse_template, to_orlik_normal_form, FiberMatrix, HomologyCase, Notation, SeifertPresentation,
    Z2Class,
};
use crate::surfaces::{
    ph_exists, torus_curve, vertical_surfaces, PHParams, SurfaceKind, SurfaceReport, VerticalSurface,
};
use crate::{Error, Result};

/// Largest accepted `mu_window`.
pub const MAX_MU_WINDOW: u64 = 1 << 22;

/// Limits of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchBudget {
    /// How far from its starting point a torus is scanned for a tail certificate.
    /// Defaults to `64 max(alpha_i)`.
    pub mu_window: Option<u64>,
    /// Upper bound on the covering degree `lambda`. Without it the search stops when
    /// `lambda` alone already forces a genus no better than the best found.
    pub lambda_cap: Option<u64>,
    /// Consecutive certified values required before a certificate is accepted.
    pub prefix_stop_run: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { mu_window: None, lambda_cap: None, prefix_stop_run: 8 }
    }
}

impl SearchBudget {
    /// Rejects zero fields and oversized windows.
    pub fn validate(&self) -> Result<()> {
        match self.mu_window {
            Some(0) => return Err(Error::Budget("mu_window must be at least 1")),
            Some(w) if w > MAX_MU_WINDOW => return Err(Error::Budget("mu_window exceeds 2^22")),
            _ => {}
        }
        if self.lambda_cap == Some(0) {
            return Err(Error::Budget("lambda_cap must be at least 1"));
        }
        if self.prefix_stop_run == 0 {
            return Err(Error::Budget("prefix_stop_run must be at least 1"));
        }
        Ok(())
    }

    /// The window in effect for `m`.
    pub fn window_for(&self, m: &SeifertPresentation) -> i64 {
        match self.mu_window {
            Some(w) => w as i64,
            None => 64 * max_alpha(m),
        }
    }

    fn lambda_limit(&self, m: &SeifertPresentation, have_bound: bool) -> Option<i64> {
        match (self.lambda_cap, have_bound) {
            (Some(c), _) => Some(i64::try_from(c).unwrap_or(i64::MAX)),
            (None, true) => None,
            (None, false) => Some(16 * max_alpha(m)),
        }
    }
}

fn max_alpha(m: &SeifertPresentation) -> i64 {
    m.alphas().into_iter().max().unwrap_or(2)
}

#[derive(Debug, Clone, Default)]
struct Slot {
    best: Option<SurfaceReport>,
    vertical: Option<SurfaceReport>,
    horizontal: Option<SurfaceReport>,
    incomplete: bool,
}

/// Running per-class minima during a search.
#[derive(Debug, Clone)]
pub struct Incumbent {
    case: HomologyCase,
    classes: Vec<Z2Class>,
    slots: Vec<Slot>,
}

impl Incumbent {
    /// An empty incumbent for the classes of `m`.
    pub fn new(m: &SeifertPresentation) -> Self {
        let hs = homology_structure(m);
        let slots = alloc::vec![Slot::default(); hs.classes.len()];
        Incumbent { case: hs.case, classes: hs.classes, slots }
    }

    /// The classes being tracked.
    pub fn classes(&self) -> &[Z2Class] {
        &self.classes
    }

    fn index(&self, class: &Z2Class) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c == class)
            .ok_or_else(|| Error::invariant(format!("class {class} is not a nonzero class of the manifold")))
    }

    /// Records a surface. Returns whether it became the class's witness.
    pub fn offer(&mut self, r: SurfaceReport) -> Result<bool> {
        let idx = self.index(&r.class)?;
        let slot = &mut self.slots[idx];
        let family = match r.kind {
            SurfaceKind::Vertical(_) => &mut slot.vertical,
            SurfaceKind::Horizontal(_) => &mut slot.horizontal,
        };
        if family.is_none_or(|f| r.genus < f.genus) {
            *family = Some(r);
        }
        let better = match slot.best {
            None => true,
            Some(b) => {
                r.genus < b.genus
                    || (r.genus == b.genus
                        && matches!(r.kind, SurfaceKind::Vertical(_))
                        && matches!(b.kind, SurfaceKind::Horizontal(_)))
            }
        };
        if better {
            slot.best = Some(r);
        }
        Ok(better)
    }

    /// Least genus recorded for `class`.
    pub fn best_genus(&self, class: &Z2Class) -> Option<u64> {
        let i = self.index(class).ok()?;
        self.slots[i].best.map(|b| b.genus)
    }

    fn wants(&self, idx: usize, genus: u64) -> bool {
        let s = &self.slots[idx];
        s.best.is_none_or(|b| genus < b.genus) || s.horizontal.is_none_or(|h| genus < h.genus)
    }

    fn best_at(&self, idx: usize) -> Option<u64> {
        self.slots[idx].best.map(|b| b.genus)
    }

    /// Largest per-class best, or `None` while some class has no representative.
    fn prune_bound(&self) -> Option<u64> {
        self.slots.iter().map(|s| s.best.map(|b| b.genus)).try_fold(0, |acc, g| g.map(|g| acc.max(g)))
    }

    fn mark_incomplete(&mut self, idx: usize) {
        self.slots[idx].incomplete = true;
    }

    fn class_of_parities(&self, eps: [bool; 3]) -> Option<usize> {
        match self.case {
            HomologyCase::Trivial => None,
            HomologyCase::CyclicVertical | HomologyCase::CyclicTwoEven => Some(0),
            HomologyCase::KleinFour => self.classes.iter().position(|c| c.h == eps),
        }
    }
}

/// Horizontal candidates that improved the incumbent, plus whether every family
/// examined was certified.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Enumeration {
    /// Candidates in the order they were found; each passed `ph_exists` and `ph_genus`.
    pub candidates: Vec<SurfaceReport>,
    /// False when a certificate was missing or the `lambda` cap cut the search short.
    pub certified: bool,
}

/// Limiting behaviour of one torus along a line of fixed `lambda`.
struct TorusLine {
    f: FiberMatrix,
    lambda: i64,
    floor_limit: i128,
    reflect_limit: Option<bool>,
    prefixes: Vec<Vec<u64>>,
}

impl TorusLine {
    fn new(f: FiberMatrix, lambda: i64) -> Self {
        let neg_gamma = -f.gamma;
        let g = neg_gamma.rem_euclid(f.alpha);
        let q = g.min(f.alpha - g);
        let canonical = euclid_digits(f.alpha as u64, q as u64);
        let mut prefixes = alloc::vec![canonical.clone()];
        prefixes.extend(alternate_expansion(&canonical));
        TorusLine {
            f,
            lambda,
            floor_limit: i128::from(neg_gamma.div_euclid(f.alpha)),
            reflect_limit: (2 * g != f.alpha).then_some(2 * g > f.alpha),
            prefixes,
        }
    }

    fn up_start(&self) -> i64 {
        (self.lambda * self.f.beta).div_euclid(self.f.alpha) + 1
    }

    fn down_start(&self) -> i64 {
        let lb = self.lambda * self.f.beta;
        if lb % self.f.alpha == 0 {
            lb / self.f.alpha - 1
        } else {
            lb.div_euclid(self.f.alpha)
        }
    }

    /// Whether every `mu'` at or beyond `mu` in direction `dir` has a curve whose digits
    /// extend an expansion of the limiting slope.
    fn certified(&self, mu: i64, dir: i64) -> bool {
        let (a, b, c, d) = (self.f.alpha as i128, self.f.beta as i128, self.f.gamma as i128, self.f.delta as i128);
        let (mu, l) = (i128::from(mu), i128::from(self.lambda));
        let x = mu * a - l * b;
        let y = l * d - mu * c;
        if x.signum() != i128::from(dir) {
            return false;
        }
        let (x, y) = if x > 0 { (x, y) } else { (-x, -y) };
        if y.div_euclid(x) != self.floor_limit {
            return false;
        }
        let r = y.rem_euclid(x);
        let reflected = 2 * r > x;
        if self.reflect_limit.is_some_and(|side| side != reflected) {
            return false;
        }
        let q = if reflected { x - r } else { r };
        if q == 0 {
            return false;
        }
        let digits = euclid_digits(x as u64, q as u64);
        self.prefixes.iter().any(|p| is_strict_prefix(p, &digits))
    }

    fn find_certificate(&self, start: i64, dir: i64, window: i64, run: u32) -> Option<i64> {
        let mut first = start;
        let mut count = 0;
        for s in 0..window {
            let mu = start + dir * s;
            if self.certified(mu, dir) {
                if count == 0 {
                    first = mu;
                }
                count += 1;
                if count >= run {
                    return Some(first);
                }
            } else {
                count = 0;
            }
        }
        None
    }

    /// `[lo, hi]` outside which `N` is monotone under `2 lambda` steps, or the window
    /// edge when no certificate was found.
    fn extent(&self, window: i64, run: u32) -> Extent {
        let l2 = 2 * self.lambda;
        let up = self.find_certificate(self.up_start(), 1, window, run);
        let down = self.find_certificate(self.down_start(), -1, window, run);
        Extent {
            lo: down.map_or(self.down_start() - window + 1, |d| d - l2 + 1),
            hi: up.map_or(self.up_start() + window - 1, |u| u + l2 - 1),
            certified: up.is_some() && down.is_some(),
        }
    }

    fn table(&self, lo: i64, hi: i64) -> Result<Table> {
        let mut vals = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        for mu in lo..=hi {
            let valid = (mu - self.f.beta) % 2 == 0 && gcd(mu, self.lambda) == 1;
            vals.push(if valid { Some(n_genus(torus_curve(&self.f, self.lambda, mu)?)) } else { None });
        }
        Ok(Table { lo, vals })
    }
}

#[derive(Debug, Clone, Copy)]
struct Extent {
    lo: i64,
    hi: i64,
    certified: bool,
}

struct Table {
    lo: i64,
    vals: Vec<Option<u64>>,
}

impl Table {
    fn get(&self, mu: i64) -> Option<u64> {
        let i = mu.checked_sub(self.lo)?;
        if i < 0 {
            return None;
        }
        *self.vals.get(i as usize)?
    }
}

fn check_not_case2(p: &PHParams) -> Result<()> {
    let mut l = p.pairs.map(|(l, _)| l);
    l.sort_unstable();
    if l[0] == l[1] && l[1] < l[2] {
        return Err(Error::invariant(format!("slopes {p} have two equal smaller denominators")));
    }
    Ok(())
}

fn emit(
    m: &SeifertPresentation,
    pairs: [(i64, i64); 3],
    genus: u64,
    idx: usize,
    inc: &mut Incumbent,
    out: &mut Enumeration,
) -> Result<()> {
    let p = PHParams::new(pairs)?;
    check_not_case2(&p)?;
    let r = SurfaceReport::horizontal(m, &p)?;
    if r.genus != genus {
        return Err(Error::invariant(format!("genus of {p} tabulated as {genus}, measured {}", r.genus)));
    }
    if r.class != inc.classes[idx] {
        return Err(Error::invariant(format!("class of {p} predicted {}, measured {}", inc.classes[idx], r.class)));
    }
    inc.offer(r)?;
    out.candidates.push(r);
    Ok(())
}

/// The all-distinct family: two native slopes `(alpha_i, beta_i)`, `(alpha_j, beta_j)` with
/// `alpha_i < alpha_j` force `mu_k / lambda_k = -(beta_i/alpha_i + beta_j/alpha_j)`.
pub fn enumerate_case4(m: &SeifertPresentation) -> Result<Vec<PHParams>> {
    let pairs = m.pairs();
    let mut out: Vec<PHParams> = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let (ai, bi) = pairs[i];
            let (aj, bj) = pairs[j];
            if i == j || ai >= aj {
                continue;
            }
            let k = 3 - i - j;
            let num = -(bi * aj + bj * ai);
            let den = ai * aj;
            let g = gcd(num, den);
            let (mu_k, lambda_k) = (num / g, den / g);
            if aj >= lambda_k {
                continue;
            }
            let mut slopes = [(0, 0); 3];
            slopes[i] = (ai, bi);
            slopes[j] = (aj, bj);
            slopes[k] = (lambda_k, mu_k);
            let p = PHParams::new(slopes)?;
            if ph_exists(m, &p).is_ok() && !out.contains(&p) {
                check_not_case2(&p)?;
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// The all-equal family `lambda_1 = lambda_2 = lambda_3 = lambda` with `lambda` odd and
/// `mu_1 + mu_2 + mu_3 = 0`, run in increasing `lambda` until `lambda - 1` reaches the
/// best genus found.
pub fn enumerate_case1(m: &SeifertPresentation, budget: &SearchBudget, inc: &mut Incumbent) -> Result<Enumeration> {
    budget.validate()?;
    let mut out = Enumeration { candidates: Vec::new(), certified: true };
    if m.alphas().iter().any(|a| a % 2 == 0) || inc.classes.is_empty() {
        return Ok(out);
    }
    let idx = inc
        .class_of_parities(m.pairs().map(|(_, b)| b % 2 != 0))
        .ok_or_else(|| Error::invariant("no class for the all-odd family"))?;
    let window = budget.window_for(m);
    let mut lambda: i64 = 1;
    loop {
        let base = (lambda - 1) as u64;
        if inc.best_at(idx).is_some_and(|b| base >= b) {
            break;
        }
        if budget.lambda_limit(m, inc.best_at(idx).is_some()).is_some_and(|cap| lambda > cap) {
            inc.mark_incomplete(idx);
            out.certified = false;
            break;
        }
        if !case1_family(m, lambda, window, budget.prefix_stop_run, idx, inc, &mut out)? {
            inc.mark_incomplete(idx);
            out.certified = false;
        }
        lambda += 2;
    }
    Ok(out)
}

fn case1_family(
    m: &SeifertPresentation,
    lambda: i64,
    window: i64,
    run: u32,
    idx: usize,
    inc: &mut Incumbent,
    out: &mut Enumeration,
) -> Result<bool> {
    let lines = m.fibers().map(|f| TorusLine::new(f, lambda));
    let ext = [0, 1, 2].map(|t| lines[t].extent(window, run));
    let range = |t: usize| {
        let (s, u) = ((t + 1) % 3, (t + 2) % 3);
        (ext[t].lo.min(-(ext[s].hi + ext[u].hi)), ext[t].hi.max(-(ext[s].lo + ext[u].lo)))
    };
    let ranges = [range(0), range(1), range(2)];
    let tables = [
        lines[0].table(ranges[0].0, ranges[0].1)?,
        lines[1].table(ranges[1].0, ranges[1].1)?,
        lines[2].table(ranges[2].0, ranges[2].1)?,
    ];
    let base = (lambda - 1) as u64;
    for mu0 in ranges[0].0..=ranges[0].1 {
        let Some(v0) = tables[0].get(mu0) else { continue };
        if !inc.wants(idx, base + v0) {
            continue;
        }
        for mu1 in ranges[1].0..=ranges[1].1 {
            let Some(v1) = tables[1].get(mu1) else { continue };
            let mu2 = -mu0 - mu1;
            let Some(v2) = tables[2].get(mu2) else { continue };
            let genus = base + v0 + v1 + v2;
            if inc.wants(idx, genus) {
                emit(m, [(lambda, mu0), (lambda, mu1), (lambda, mu2)], genus, idx, inc, out)?;
            }
        }
    }
    Ok(ext.iter().all(|e| e.certified))
}

/// The family `lambda_i < lambda_j = lambda_k = p alpha_i` for each `i`, run in increasing
/// `p` until `p (alpha_i - 1)` reaches the best genus found.
pub fn enumerate_case3(m: &SeifertPresentation, budget: &SearchBudget, inc: &mut Incumbent) -> Result<Enumeration> {
    budget.validate()?;
    let mut out = Enumeration { candidates: Vec::new(), certified: true };
    if inc.classes.is_empty() {
        return Ok(out);
    }
    let window = budget.window_for(m);
    let pairs = m.pairs();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let (ai, bi) = pairs[i];
        for p in 2i64.. {
            let lambda = p * ai;
            let base = (lambda - p) as u64;
            let bound = inc.prune_bound();
            if bound.is_some_and(|b| base >= b) {
                break;
            }
            if budget.lambda_limit(m, bound.is_some()).is_some_and(|cap| lambda > cap) {
                for idx in 0..inc.slots.len() {
                    if inc.best_at(idx).is_none_or(|b| b > base) {
                        inc.mark_incomplete(idx);
                    }
                }
                out.certified = false;
                break;
            }
            if (lambda - pairs[j].0) % 2 != 0
                || (lambda - pairs[k].0) % 2 != 0
                || (p * bi + pairs[j].1 + pairs[k].1) % 2 != 0
            {
                continue;
            }
            let eps = [(p * bi) % 2 != 0, pairs[j].1 % 2 != 0, pairs[k].1 % 2 != 0];
            let mut class_eps = [false; 3];
            class_eps[i] = eps[0];
            class_eps[j] = eps[1];
            class_eps[k] = eps[2];
            let idx = inc
                .class_of_parities(class_eps)
                .ok_or_else(|| Error::invariant(format!("parities {class_eps:?} name no class")))?;
            if inc.best_at(idx).is_some_and(|b| base >= b) {
                continue;
            }
            if !case3_family(m, i, p, window, budget.prefix_stop_run, idx, inc, &mut out)? {
                inc.mark_incomplete(idx);
                out.certified = false;
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn case3_family(
    m: &SeifertPresentation,
    i: usize,
    p: i64,
    window: i64,
    run: u32,
    idx: usize,
    inc: &mut Incumbent,
    out: &mut Enumeration,
) -> Result<bool> {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let fibers = m.fibers();
    let (ai, bi) = (fibers[i].alpha, fibers[i].beta);
    let lambda = p * ai;
    let total = -p * bi;
    let lj = TorusLine::new(fibers[j], lambda);
    let lk = TorusLine::new(fibers[k], lambda);
    let (ej, ek) = (lj.extent(window, run), lk.extent(window, run));
    let lo = ej.lo.min(total - ek.hi);
    let hi = ej.hi.max(total - ek.lo);
    let tj = lj.table(lo, hi)?;
    let tk = lk.table(total - hi, total - lo)?;
    let base = (lambda - p) as u64;
    for mu_j in lo..=hi {
        let Some(vj) = tj.get(mu_j) else { continue };
        let mu_k = total - mu_j;
        let Some(vk) = tk.get(mu_k) else { continue };
        let genus = base + vj + vk;
        if inc.wants(idx, genus) {
            let mut slopes = [(0, 0); 3];
            slopes[i] = (ai, bi);
            slopes[j] = (lambda, mu_j);
            slopes[k] = (lambda, mu_k);
            emit(m, slopes, genus, idx, inc, out)?;
        }
    }
    Ok(ej.certified && ek.certified)
}

/// The minimum over one class.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassNorm {
    /// The class, with parities in the caller's fiber order.
    pub class: Z2Class,
    /// `V12`, `V13`, `V23` or `fiber`.
    pub label: String,
    /// Least genus of a one-sided representative.
    pub min_genus: u64,
    /// `max(0, min_genus - 2)`.
    pub norm: u64,
    /// A surface realizing `min_genus`; vertical on ties.
    pub witness: SurfaceReport,
    /// True when every candidate family was certified or pruned.
    pub exhaustive: bool,
    /// Genus of the pseudo-vertical surface in this class, if any.
    pub vertical_genus: Option<u64>,
    /// Least pseudo-horizontal genus examined. Exact whenever it is at most
    /// `vertical_genus`; larger horizontal values may have been pruned.
    pub horizontal_genus: Option<u64>,
    /// Slopes realizing `horizontal_genus`.
    pub horizontal_witness: Option<PHParams>,
}

/// Norms of every nonzero class of a manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormReport {
    /// The presentation as given, in Martelli notation.
    pub presentation: String,
    /// Orlik normal form.
    pub canonical_form: String,
    /// Shape of `H1(M; Z2)`.
    pub case: HomologyCase,
    /// One entry per nonzero class, in census order.
    pub classes: Vec<ClassNorm>,
}

impl NormReport {
    /// True when every class is exhaustive.
    pub fn exhaustive(&self) -> bool {
        self.classes.iter().all(|c| c.exhaustive)
    }

    /// Looks a class up by label.
    pub fn class(&self, label: &str) -> Option<&ClassNorm> {
        self.classes.iter().find(|c| c.label == label)
    }
}

fn invert(order: [usize; 3]) -> [usize; 3] {
    let mut inv = [0; 3];
    for (s, &u) in order.iter().enumerate() {
        inv[u] = s;
    }
    inv
}

fn unsort_report(r: SurfaceReport, order: [usize; 3], inv: [usize; 3]) -> SurfaceReport {
    let kind = match r.kind {
        SurfaceKind::Vertical(v) => {
            let mut c = v.connects.map(|s| order[s as usize - 1] as u8 + 1);
            c.sort_unstable();
            SurfaceKind::Vertical(VerticalSurface { connects: c })
        }
        SurfaceKind::Horizontal(p) => SurfaceKind::Horizontal(p.permuted(inv)),
    };
    SurfaceReport { kind, class: r.class.permuted(inv), ..r }
}

/// Computes the minimal genus and norm of every nonzero class of `m`.
pub fn compute_norms(m: &SeifertPresentation, budget: &SearchBudget) -> Result<NormReport> {
    budget.validate()?;
    let hs = homology_structure(m);
    let mut report = NormReport {
        presentation: m.format(Notation::Martelli),
        canonical_form: to_orlik_normal_form(m).to_string(),
        case: hs.case,
        classes: Vec::new(),
    };
    if hs.classes.is_empty() {
        return Ok(report);
    }

    let pairs = m.pairs();
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&i| pairs[i]);
    let inv = invert(order);
    let sorted = m.permuted(order);

    let mut inc = Incumbent::new(&sorted);
    for v in vertical_surfaces(&sorted) {
        inc.offer(v)?;
    }
    for p in enumerate_case4(&sorted)? {
        inc.offer(SurfaceReport::horizontal(&sorted, &p)?)?;
    }
    enumerate_case1(&sorted, budget, &mut inc)?;
    enumerate_case3(&sorted, budget, &mut inc)?;

    for class in &hs.classes {
        let idx = inc.index(&class.permuted(order))?;
        let slot = &inc.slots[idx];
        let best = slot.best.ok_or(Error::Budget("no representative found; enlarge mu_window or lambda_cap"))?;
        let witness = unsort_report(best, order, inv);
        if witness.class != *class {
            return Err(Error::invariant(format!("class {} mapped back to {}", class, witness.class)));
        }
        report.classes.push(ClassNorm {
            class: *class,
            label: class.label(),
            min_genus: best.genus,
            norm: best.norm,
            witness,
            exhaustive: !slot.incomplete,
            vertical_genus: slot.vertical.map(|v| v.genus),
            horizontal_genus: slot.horizontal.map(|h| h.genus),
            horizontal_witness: slot.horizontal.and_then(|h| match unsort_report(h, order, inv).kind {
                SurfaceKind::Horizontal(p) => Some(p),
                SurfaceKind::Vertical(_) => None,
            }),
        });
    }
    Ok(report)
}

/// Inclusive range of one template variable.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarRange {
    /// Variable name.
    pub name: String,
    /// First value.
    pub lo: i64,
    /// Last value; the range is empty when `hi < lo`.
    pub hi: i64,
}

/// A presentation template with a grid of variable values and side constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyGrid {
    /// Presentation with integer expressions in place of numbers.
    pub template: String,
    /// Variables, the first one varying slowest.
    pub ranges: Vec<VarRange>,
    /// Comparisons every instance must satisfy, such as `n > 2m+1`.
    pub constraints: Vec<String>,
}

/// One point of a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    /// `(name, value)` in range order.
    pub bindings: Vec<(String, i64)>,
    /// The instantiated manifold, or why there is none.
    pub presentation: Result<SeifertPresentation>,
}

impl Instance {
    /// `m=1,n=4`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.join(",")
    }
}

impl FamilyGrid {
    /// Every grid point in lexicographic order.
    pub fn instances(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        if self.ranges.iter().any(|r| r.hi < r.lo) {
            return out;
        }
        let mut values: Vec<i64> = self.ranges.iter().map(|r| r.lo).collect();
        loop {
            let bindings: Vec<(String, i64)> =
                self.ranges.iter().zip(&values).map(|(r, &v)| (r.name.clone(), v)).collect();
            let presentation = self.instantiate(&bindings);
            out.push(Instance { bindings, presentation });

            let mut pos = self.ranges.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if values[pos] < self.ranges[pos].hi {
                    values[pos] += 1;
                    for (v, r) in values.iter_mut().zip(&self.ranges).skip(pos + 1) {
                        *v = r.lo;
                    }
                    break;
                }
            }
        }
    }

    fn instantiate(&self, bindings: &[(String, i64)]) -> Result<SeifertPresentation> {
        let lookup = |name: &str| bindings.iter().find(|(k, _)| k == name).map(|&(_, v)| v);
        let lookup: Lookup<'_> = &lookup;
        for c in &self.constraints {
            if !eval_constraint(c, lookup)? {
                return Err(Error::Constraint(c.clone()));
            }
        }
        parse_template(&self.template, lookup)
    }
}

/// One line of a scan: an instance and one of its classes.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyRow {
    /// Variable bindings, `m=1,n=4`.
    pub instance: String,
    /// Orlik normal form.
    pub canonical_form: String,
    /// The class.
    pub class: Z2Class,
    /// Its label.
    pub label: String,
    /// Least genus.
    pub min_genus: u64,
    /// Norm.
    pub norm: u64,
    /// `vertical` or `horizontal`.
    pub witness_kind: String,
    /// Vertical genus minus least horizontal genus, when both exist and the horizontal
    /// value is exact, that is, no larger than the vertical one.
    pub gap: Option<i64>,
    /// Whether the class minimum is certified.
    pub exhaustive: bool,
    /// Vertical genus in the class.
    pub vertical_genus: Option<u64>,
    /// Least horizontal genus examined.
    pub horizontal_genus: Option<u64>,
}

/// A grid point left out of a scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    /// Variable bindings.
    pub instance: String,
    /// The reason.
    pub error: Error,
}

/// Result of [`family_scan`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FamilyScan {
    /// Rows in grid order, classes in census order within an instance.
    pub rows: Vec<FamilyRow>,
    /// Instances violating a constraint, failing validation, or with no nonzero class.
    pub skipped: Vec<Skipped>,
}

/// Runs [`compute_norms`] on every grid point.
pub fn family_scan(grid: &FamilyGrid, budget: &SearchBudget) -> Result<FamilyScan> {
    budget.validate()?;
    let mut scan = FamilyScan::default();
    for inst in grid.instances() {
        let label = inst.label();
        let m = match inst.presentation {
            Ok(m) => m,
            Err(e) if e.kind() == crate::ErrorKind::Internal => return Err(e),
            Err(error) => {
                scan.skipped.push(Skipped { instance: label, error });
                continue;
            }
        };
        let report = compute_norms(&m, budget)?;
        if report.classes.is_empty() {
            scan.skipped.push(Skipped { instance: label, error: Error::TrivialHomology });
            continue;
        }
        for c in report.classes {
            let gap = match (c.vertical_genus, c.horizontal_genus) {
                (Some(v), Some(h)) if h <= v => Some(v as i64 - h as i64),
                _ => None,
            };
            scan.rows.push(FamilyRow {
                instance: label.clone(),
                canonical_form: report.canonical_form.clone(),
                class: c.class,
                label: c.label,
                min_genus: c.min_genus,
                norm: c.norm,
                witness_kind: c.witness.kind.name().to_string(),
                gap,
                exhaustive: c.exhaustive,
                vertical_genus: c.vertical_genus,
                horizontal_genus: c.horizontal_genus,
            });
        }
    }
    Ok(scan)
}
