//! Contact-set analysis: where pi(s) = s, how the sign of pi(s) - s
//! partitions [0,1], which contacts can be limits of the black fraction,
//! and which terminal fractions are reachable past hard walls.
//!
//! Terminology: a *contact* is a root of h(s) = pi(s) - s; *plateaus* are
//! maximal intervals where h vanishes identically; the open intervals between
//! consecutive contact points are the K intervals, each carrying the constant
//! sign of h (0 on plateau interiors). The crossing direction classifies a
//! contact: (+,-) downcrossings are stable, (-,+) upcrossings unstable,
//! one-sided signs mark plateau edges.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::roots::{find_root, golden_min};
use crate::urn::UrnFunction;

/// Sign of pi(s) - s on an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Pos
        } else if x < 0.0 {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }
}

/// Crossing type of a contact, read off the neighbouring interval signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContactLabel {
    /// (+,-): stable equilibrium.
    Downcrossing,
    /// (-,+): unstable equilibrium.
    Upcrossing,
    /// (+,+): tangential approach from above the diagonal.
    TouchpointAbove,
    /// (-,-): tangential approach from below the diagonal.
    TouchpointBelow,
    /// One side sits on a plateau (alpha or beta is 0).
    HalfPlateau,
}

/// A classified contact point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Contact {
    pub s: f64,
    pub alpha: Sign,
    pub beta: Sign,
    pub label: ContactLabel,
}

/// Open interval between consecutive contacts with the sign of pi - s.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KInterval {
    pub lo: f64,
    pub hi: f64,
    pub sign: Sign,
}

/// Support-membership verdict for a contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportVerdict {
    InSupport,
    NotInSupport,
    /// Plateau-adjacent contacts behave like the Polya urn: always support.
    PolyaLike,
    /// Slope probe straddles the decision boundary within numerical noise.
    Indeterminate,
}

/// Complete contact-set analysis of an urn function.
#[derive(Debug, Clone, Serialize)]
pub struct ContactAnalysis {
    /// Isolated contact points in increasing order (plateau edges included).
    pub contacts: Vec<Contact>,
    /// Maximal closed intervals where pi(s) = s identically.
    pub plateaus: Vec<(f64, f64)>,
    /// K intervals in increasing order; plateau interiors carry sign 0.
    pub k_intervals: Vec<KInterval>,
    /// Reachable-interval endpoints under the uniform initial condition.
    pub z_minus: f64,
    pub z_plus: f64,
    /// Set when structure could not be resolved at the scan resolution.
    pub resolution_warning: bool,
}

impl ContactAnalysis {
    /// First contact position (the infimum of the contact set).
    pub fn inf_contact(&self) -> f64 {
        self.contacts.first().map(|c| c.s).unwrap_or(f64::NAN)
    }

    /// Last contact position (the supremum of the contact set).
    pub fn sup_contact(&self) -> f64 {
        self.contacts.last().map(|c| c.s).unwrap_or(f64::NAN)
    }

    /// Signs sequence including the empty-end conventions a_0 = +1 and
    /// a_N = -1 when the first/last interval collapses.
    pub fn sign_sequence(&self) -> Vec<Sign> {
        self.k_intervals.iter().map(|k| k.sign).collect()
    }
}

/// Scan configuration for `find_contacts`.
#[derive(Debug, Clone, Copy)]
pub struct ContactOptions {
    /// Equality tolerance for pi(s) = s.
    pub eps_eq: f64,
    /// Grid resolution of the bracketing scan.
    pub grid_n: usize,
}

impl Default for ContactOptions {
    fn default() -> Self {
        ContactOptions {
            eps_eq: 1e-10,
            grid_n: 10_000,
        }
    }
}

const MERGE_TOL: f64 = 1e-9;

/// Locate and classify all contacts of `u`.
pub fn find_contacts(u: &UrnFunction, opts: &ContactOptions) -> Result<ContactAnalysis> {
    let n = opts.grid_n.max(64);
    let eps = opts.eps_eq;
    let h = |s: f64| u.value(s) - s;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let hv: Vec<f64> = grid.iter().map(|&s| h(s)).collect();
    let near: Vec<bool> = hv.iter().map(|&v| v.abs() <= eps).collect();

    let mut plateaus: Vec<(f64, f64)> = Vec::new();
    let mut points: Vec<f64> = Vec::new();
    let mut consumed = vec![false; n + 1];

    // plateau runs: >= 3 consecutive near nodes (>= 2 grid cells), maximal
    // extent refined by bisecting |h| - eps at both flanks
    let mut i = 0;
    while i <= n {
        if near[i] {
            let start = i;
            while i + 1 <= n && near[i + 1] {
                i += 1;
            }
            let end = i;
            if end - start >= 2 {
                let lo = if start == 0 {
                    0.0
                } else {
                    find_root(
                        |s| h(s).abs() - eps,
                        grid[start - 1],
                        grid[start],
                        1e-14,
                        200,
                    )?
                };
                let hi = if end == n {
                    1.0
                } else {
                    find_root(|s| h(s).abs() - eps, grid[end], grid[end + 1], 1e-14, 200)?
                };
                plateaus.push((lo, hi));
                points.push(lo);
                points.push(hi);
                for c in consumed.iter_mut().take(end + 1).skip(start) {
                    *c = true;
                }
            }
            i = end + 1;
        } else {
            i += 1;
        }
    }

    // short runs of near nodes (isolated roots sitting on grid nodes)
    let mut i = 0;
    while i <= n {
        if near[i] && !consumed[i] {
            let start = i;
            while i + 1 <= n && near[i + 1] && !consumed[i + 1] {
                i += 1;
            }
            let end = i;
            let lo = if start == 0 { 0.0 } else { grid[start - 1] };
            let hi = if end == n { 1.0 } else { grid[end + 1] };
            let root = refine_isolated_root(&h, lo, hi, eps)?;
            if let Some(r) = root {
                points.push(r);
            }
            for c in consumed.iter_mut().take(end + 1).skip(start) {
                *c = true;
            }
            i = end + 1;
        } else {
            i += 1;
        }
    }

    // transversal crossings between non-near nodes
    for i in 0..n {
        if consumed[i] || consumed[i + 1] || near[i] || near[i + 1] {
            continue;
        }
        if hv[i] * hv[i + 1] < 0.0 {
            let r = find_root(&h, grid[i], grid[i + 1], 1e-15, 200)?;
            points.push(r);
        }
    }

    // tangential candidates: local minima of |h| shallow enough to be worth
    // a refinement; confirmation requires the minimum to actually vanish
    for i in 1..n {
        if consumed[i] || near[i] {
            continue;
        }
        let a = hv[i - 1].abs();
        let b = hv[i].abs();
        let c = hv[i + 1].abs();
        if b <= a && b <= c && b <= 1e-2 && hv[i - 1] * hv[i + 1] > 0.0 {
            if let Some(x) = confirm_root(&h, grid[i - 1], grid[i + 1], eps) {
                points.push(x);
            }
        }
    }

    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);

    // refinement passes: verify every gap holds one sign; recover missed roots
    let mut warning = false;
    for _pass in 0..4 {
        let missing = verify_gaps(&h, &points, &plateaus, eps)?;
        if missing.is_empty() {
            break;
        }
        points.extend(missing);
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        points.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);
        warning = true; // structure finer than the scan grid
    }

    // resolution flag: distinct contacts inside one scan cell
    let cell = 1.0 / n as f64;
    if points.windows(2).any(|w| w[1] - w[0] < cell) {
        warning = true;
    }

    // assemble K intervals over the gaps between consecutive boundary points
    let mut k_intervals = Vec::new();
    let mut bounds = Vec::with_capacity(points.len() + 2);
    if points.first().map_or(true, |&p| p > MERGE_TOL) {
        bounds.push(0.0);
    }
    bounds.extend(points.iter().copied());
    if points.last().map_or(true, |&p| p < 1.0 - MERGE_TOL) {
        bounds.push(1.0);
    }
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= MERGE_TOL {
            continue;
        }
        let sign = if plateaus
            .iter()
            .any(|&(a, b)| (a - lo).abs() <= MERGE_TOL && (b - hi).abs() <= MERGE_TOL)
        {
            Sign::Zero
        } else {
            Sign::of(h(0.5 * (lo + hi)))
        };
        k_intervals.push(KInterval { lo, hi, sign });
    }

    // classify contacts by neighbouring interval signs with the empty-end
    // conventions a_0 = +1, a_N = -1
    let mut contacts = Vec::with_capacity(points.len());
    for &p in &points {
        let alpha = k_intervals
            .iter()
            .rev()
            .find(|k| k.hi <= p + MERGE_TOL)
            .map(|k| k.sign)
            .unwrap_or(Sign::Pos);
        let beta = k_intervals
            .iter()
            .find(|k| k.lo >= p - MERGE_TOL)
            .map(|k| k.sign)
            .unwrap_or(Sign::Neg);
        let label = match (alpha, beta) {
            (Sign::Pos, Sign::Neg) => ContactLabel::Downcrossing,
            (Sign::Neg, Sign::Pos) => ContactLabel::Upcrossing,
            (Sign::Pos, Sign::Pos) => ContactLabel::TouchpointAbove,
            (Sign::Neg, Sign::Neg) => ContactLabel::TouchpointBelow,
            _ => ContactLabel::HalfPlateau,
        };
        contacts.push(Contact {
            s: p,
            alpha,
            beta,
            label,
        });
    }

    let (z_minus, z_plus) = reachable_interval(u, None)?;
    Ok(ContactAnalysis {
        contacts,
        plateaus,
        k_intervals,
        z_minus,
        z_plus,
        resolution_warning: warning,
    })
}

/// Refine a root known to lie near a short run of near-zero nodes.
fn refine_isolated_root(
    h: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    eps: f64,
) -> Result<Option<f64>> {
    let (ha, hb) = (h(lo), h(hi));
    if ha * hb < 0.0 && ha.abs() > eps && hb.abs() > eps {
        return Ok(Some(find_root(h, lo, hi, 1e-15, 200)?));
    }
    Ok(confirm_root(h, lo, hi, eps))
}

/// Tangential-root confirmation: a minimum of |h| counts as a root when it
/// keeps shrinking under bracket refinement. A square-root cusp can never
/// push |h| below eps at f64 resolution, but its minimum value scales with
/// the bracket width, which separates it from a genuine positive minimum.
fn confirm_root(h: &impl Fn(f64) -> f64, lo: f64, hi: f64, eps: f64) -> Option<f64> {
    let (x1, v1) = golden_min(|s| h(s).abs(), lo, hi, 1e-9);
    if v1 <= eps {
        return Some(x1);
    }
    if v1 > 1e-4 {
        return None;
    }
    let w = 2e-9;
    let (x2, v2) = golden_min(|s| h(s).abs(), (x1 - w).max(lo), (x1 + w).min(hi), 1e-16);
    if v2 <= eps || v2 <= 0.05 * v1 {
        Some(x2)
    } else {
        None
    }
}

/// Scan each gap between boundary points for sign changes or near-zero dips
/// the coarse grid missed; returns any newly found roots.
fn verify_gaps(
    h: &impl Fn(f64) -> f64,
    points: &[f64],
    plateaus: &[(f64, f64)],
    eps: f64,
) -> Result<Vec<f64>> {
    let mut missing = Vec::new();
    let mut bounds = vec![0.0];
    bounds.extend(points.iter().copied());
    bounds.push(1.0);
    bounds.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);
    const M: usize = 128;
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= 4.0 * MERGE_TOL {
            continue;
        }
        if plateaus
            .iter()
            .any(|&(a, b)| lo >= a - MERGE_TOL && hi <= b + MERGE_TOL)
        {
            continue;
        }
        // probe strictly inside, away from the root endpoints
        let pad = (hi - lo) * 1e-3;
        let mut prev_s = lo + pad;
        let mut prev = h(prev_s);
        for j in 1..=M {
            let s = lo + pad + (hi - lo - 2.0 * pad) * j as f64 / M as f64;
            let v = h(s);
            if prev * v < 0.0 && prev.abs() > eps && v.abs() > eps {
                missing.push(find_root(h, prev_s, s, 1e-15, 200)?);
            }
            prev = v;
            prev_s = s;
        }
    }
    Ok(missing)
}

/// Classification (alpha, beta) of contact `i`.
pub fn classify_contact(analysis: &ContactAnalysis, i: usize) -> Result<(Sign, Sign)> {
    analysis
        .contacts
        .get(i)
        .map(|c| (c.alpha, c.beta))
        .ok_or_else(|| Error::validation(format!("contact index {i} out of range")))
}

/// Support membership of contact `i` per the crossing-type rules:
/// downcrossings always belong, upcrossings never, touchpoints require the
/// one-sided slope probe Delta in (1/2, 1), plateau-adjacent contacts are
/// Polya-like.
pub fn support_membership(
    u: &UrnFunction,
    analysis: &ContactAnalysis,
    i: usize,
    delta: f64,
) -> Result<SupportVerdict> {
    let c = analysis
        .contacts
        .get(i)
        .ok_or_else(|| Error::validation(format!("contact index {i} out of range")))?;
    Ok(match c.label {
        ContactLabel::Downcrossing => SupportVerdict::InSupport,
        ContactLabel::Upcrossing => SupportVerdict::NotInSupport,
        ContactLabel::HalfPlateau => SupportVerdict::PolyaLike,
        ContactLabel::TouchpointAbove => slope_probe(u, c.s, -delta),
        ContactLabel::TouchpointBelow => slope_probe(u, c.s, delta),
    })
}

/// Majority vote of Delta_{pi,eps}(s) over a geometric epsilon ladder.
fn slope_probe(u: &UrnFunction, s: f64, delta: f64) -> SupportVerdict {
    let base = u.value(s);
    let mut votes_in = 0;
    let mut votes_total = 0;
    for j in 0..=10 {
        let eps = delta * 0.5f64.powi(j);
        let arg = s + eps;
        if !(0.0..=1.0).contains(&arg) {
            continue;
        }
        let d = (u.value(arg) - base) / eps;
        if (d - 0.5).abs() < 1e-7 || (d - 1.0).abs() < 1e-7 {
            return SupportVerdict::Indeterminate;
        }
        votes_total += 1;
        if d > 0.5 && d < 1.0 {
            votes_in += 1;
        }
    }
    if votes_total == 0 {
        return SupportVerdict::Indeterminate;
    }
    let frac = votes_in as f64 / votes_total as f64;
    if frac >= 0.75 {
        SupportVerdict::InSupport
    } else if frac <= 0.25 {
        SupportVerdict::NotInSupport
    } else {
        SupportVerdict::Indeterminate
    }
}

/// Maximal intervals where pi is identically `level` (0 or 1): the hard
/// walls. Only intervals spanning at least one scan cell count.
fn wall_intervals(u: &UrnFunction, level: f64) -> Result<Vec<(f64, f64)>> {
    const N: usize = 10_000;
    const WALL_EPS: f64 = 1e-12;
    let at = |s: f64| (u.value(s) - level).abs() <= WALL_EPS;
    let mut walls = Vec::new();
    let mut i = 0;
    while i <= N {
        if at(i as f64 / N as f64) {
            let start = i;
            while i + 1 <= N && at((i + 1) as f64 / N as f64) {
                i += 1;
            }
            let end = i;
            if end > start {
                let lo = if start == 0 {
                    0.0
                } else {
                    find_root(
                        |s| (u.value(s) - level).abs() - WALL_EPS,
                        (start - 1) as f64 / N as f64,
                        start as f64 / N as f64,
                        1e-14,
                        200,
                    )?
                };
                let hi = if end == N {
                    1.0
                } else {
                    find_root(
                        |s| (u.value(s) - level).abs() - WALL_EPS,
                        end as f64 / N as f64,
                        (end + 1) as f64 / N as f64,
                        1e-14,
                        200,
                    )?
                };
                walls.push((lo, hi));
            }
            i = end + 1;
        } else {
            i += 1;
        }
    }
    Ok(walls)
}

/// Reachable-interval endpoints (z-, z+).
///
/// Uniform start: z- = inf{s : pi(s) < 1}, z+ = sup{s : pi(s) > 0}. With a
/// fixed initial condition (m, X_m) the walls become one-way barriers around
/// x = X_m / m: pi = 1 intervals cannot be crossed downward, pi = 0 intervals
/// cannot be crossed upward.
pub fn reachable_interval(
    u: &UrnFunction,
    init: Option<(usize, usize)>,
) -> Result<(f64, f64)> {
    let ones = wall_intervals(u, 1.0)?;
    let zeros = wall_intervals(u, 0.0)?;
    match init {
        None => {
            let z_minus = ones
                .iter()
                .find(|&&(lo, _)| lo <= MERGE_TOL)
                .map(|&(_, hi)| hi)
                .unwrap_or(0.0);
            let z_plus = zeros
                .iter()
                .find(|&&(_, hi)| hi >= 1.0 - MERGE_TOL)
                .map(|&(lo, _)| lo)
                .unwrap_or(1.0);
            Ok((z_minus, z_plus))
        }
        Some((m, x_m)) => {
            if m == 0 || x_m > m {
                return Err(Error::validation(format!(
                    "initial condition must satisfy 0 <= X_m <= m with m >= 1, got ({m}, {x_m})"
                )));
            }
            let x = x_m as f64 / m as f64;
            let z_minus = ones
                .iter()
                .filter(|&&(lo, _)| lo <= x)
                .map(|&(_, hi)| hi)
                .fold(0.0, f64::max);
            let z_plus = zeros
                .iter()
                .filter(|&&(_, hi)| hi >= x)
                .map(|&(lo, _)| lo)
                .fold(1.0, f64::min);
            Ok((z_minus, z_plus))
        }
    }
}

/// The modified urn function pi* induced by a fixed initial condition:
/// 1 on [0, z-), pi on [z-, z+], 0 on (z+, 1].
pub fn modified_urn(u: &UrnFunction, init: (usize, usize)) -> Result<UrnFunction> {
    let (z_minus, z_plus) = reachable_interval(u, Some(init))?;
    if z_minus <= 0.0 && z_plus >= 1.0 {
        return Ok(u.clone());
    }
    use crate::urn::{Piece, PieceForm};
    let mut pieces = Vec::new();
    if z_minus > 0.0 {
        pieces.push(Piece {
            lo: 0.0,
            hi: z_minus,
            form: PieceForm::Poly(vec![1.0]),
        });
    }
    if z_plus > z_minus {
        pieces.push(Piece {
            lo: z_minus,
            hi: z_plus,
            form: PieceForm::Urn(Box::new(u.clone())),
        });
    }
    if z_plus < 1.0 {
        pieces.push(Piece {
            lo: z_plus,
            hi: 1.0,
            form: PieceForm::Poly(vec![0.0]),
        });
    }
    UrnFunction::piecewise(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::urn::UrnFunction;

    fn analyse(u: &UrnFunction) -> ContactAnalysis {
        find_contacts(u, &ContactOptions::default()).unwrap()
    }

    #[test]
    fn majority_urn_contacts_and_signs() {
        let a = analyse(&catalog::majority3());
        let pts: Vec<f64> = a.contacts.iter().map(|c| c.s).collect();
        assert_eq!(pts.len(), 3);
        assert!(pts[0].abs() < 1e-12);
        assert!((pts[1] - 0.5).abs() < 1e-12);
        assert!((pts[2] - 1.0).abs() < 1e-12);
        let signs: Vec<i8> = a.sign_sequence().iter().map(|s| s.as_i8()).collect();
        assert_eq!(signs, vec![-1, 1]);
        let (lo, hi) = (a.k_intervals[0], a.k_intervals[1]);
        assert!(lo.lo.abs() < 1e-12 && (lo.hi - 0.5).abs() < 1e-12);
        assert!((hi.lo - 0.5).abs() < 1e-12 && (hi.hi - 1.0).abs() < 1e-12);
        // contact at 1/2 is an upcrossing; endpoints are downcrossing-like
        assert_eq!(a.contacts[1].label, ContactLabel::Upcrossing);
        assert_eq!(a.contacts[0].label, ContactLabel::Downcrossing);
        assert_eq!(a.contacts[2].label, ContactLabel::Downcrossing);
    }

    #[test]
    fn identity_urn_is_single_plateau() {
        let a = analyse(&UrnFunction::identity());
        assert_eq!(a.plateaus.len(), 1);
        assert!(a.plateaus[0].0.abs() < 1e-12);
        assert!((a.plateaus[0].1 - 1.0).abs() < 1e-12);
        assert!(a.k_intervals.iter().all(|k| k.sign == Sign::Zero));
    }

    #[test]
    fn sign_pattern_example_matches_figure() {
        let a = analyse(&catalog::sign_pattern_example());
        let signs: Vec<i8> = a.sign_sequence().iter().map(|s| s.as_i8()).collect();
        assert_eq!(signs, vec![1, -1, 1, 0, -1]);
        let pts: Vec<f64> = a.contacts.iter().map(|c| c.s).collect();
        for (got, want) in pts.iter().zip([0.2, 0.4, 0.6, 0.8]) {
            assert!((got - want).abs() < 1e-9, "contact {got} vs {want}");
        }
        assert_eq!(a.contacts[2].label, ContactLabel::HalfPlateau);
        assert_eq!(a.contacts[2].alpha, Sign::Pos);
        assert_eq!(a.contacts[2].beta, Sign::Zero);
        assert_eq!(a.plateaus.len(), 1);
    }

    #[test]
    fn arcsin_urn_classification() {
        let a = analyse(&catalog::arcsin_example());
        let pts: Vec<f64> = a.contacts.iter().map(|c| c.s).collect();
        assert_eq!(pts.len(), 3);
        assert!((pts[0] - 0.25).abs() < 1e-9);
        assert!((pts[1] - 0.5).abs() < 1e-9);
        assert!((pts[2] - 0.75).abs() < 1e-9);
        assert_eq!(a.contacts[0].label, ContactLabel::TouchpointAbove);
        assert_eq!(a.contacts[1].label, ContactLabel::Downcrossing);
        assert_eq!(a.contacts[2].label, ContactLabel::TouchpointBelow);
    }

    #[test]
    fn touchpoint_support_rules() {
        use crate::urn::{Piece, PieceForm};
        // quadratic touch pi = min(1/4 + s^2, 1): left slope tends to 1
        // from below at the touchpoint -> in support
        let cross = 0.75f64.sqrt();
        let quad = UrnFunction::piecewise(vec![
            Piece {
                lo: 0.0,
                hi: cross,
                form: PieceForm::Poly(vec![0.25, 0.0, 1.0]),
            },
            Piece {
                lo: cross,
                hi: 1.0,
                form: PieceForm::Poly(vec![1.0]),
            },
        ])
        .unwrap();
        let a = analyse(&quad);
        let idx = a
            .contacts
            .iter()
            .position(|c| (c.s - 0.5).abs() < 1e-6)
            .expect("touchpoint found");
        assert_eq!(a.contacts[idx].label, ContactLabel::TouchpointAbove);
        assert_eq!(
            support_membership(&quad, &a, idx, 1e-3).unwrap(),
            SupportVerdict::InSupport
        );

        // kinked touch from below with slope 0.75: in support
        let kink_in = kinked_touch(0.25);
        let a = analyse(&kink_in);
        let idx = a
            .contacts
            .iter()
            .position(|c| (c.s - 0.5).abs() < 1e-6)
            .unwrap();
        assert_eq!(a.contacts[idx].label, ContactLabel::TouchpointBelow);
        assert_eq!(
            support_membership(&kink_in, &a, idx, 1e-3).unwrap(),
            SupportVerdict::InSupport
        );

        // kinked touch with slope 0.3: not in support
        let kink_out = kinked_touch(0.7);
        let a = analyse(&kink_out);
        let idx = a
            .contacts
            .iter()
            .position(|c| (c.s - 0.5).abs() < 1e-6)
            .unwrap();
        assert_eq!(
            support_membership(&kink_out, &a, idx, 1e-3).unwrap(),
            SupportVerdict::NotInSupport
        );
    }

    /// pi(s) = max(0, s - c |s - 1/2|): kinked touch at 1/2 with one-sided
    /// slopes 1 + c (left) and 1 - c (right).
    fn kinked_touch(c: f64) -> UrnFunction {
        use crate::urn::{Piece, PieceForm};
        let x0 = 0.5 * c / (1.0 + c); // where s - c(1/2 - s) crosses zero
        UrnFunction::piecewise(vec![
            Piece {
                lo: 0.0,
                hi: x0,
                form: PieceForm::Poly(vec![0.0]),
            },
            Piece {
                lo: x0,
                hi: 0.5,
                form: PieceForm::Poly(vec![-0.5 * c, 1.0 + c]),
            },
            Piece {
                lo: 0.5,
                hi: 1.0,
                form: PieceForm::Poly(vec![0.5 * c, 1.0 - c]),
            },
        ])
        .unwrap()
    }

    #[test]
    fn downcrossing_of_linear_urn_in_support() {
        let u = UrnFunction::linear(0.3, 0.2).unwrap();
        let a = analyse(&u);
        assert_eq!(a.contacts.len(), 1);
        assert!((a.contacts[0].s - 0.375).abs() < 1e-12);
        assert_eq!(a.contacts[0].label, ContactLabel::Downcrossing);
        assert_eq!(
            support_membership(&u, &a, 0, 1e-3).unwrap(),
            SupportVerdict::InSupport
        );
    }

    #[test]
    fn reachable_interval_cases() {
        // strictly interior urn: no walls
        let u = UrnFunction::linear(0.3, 0.2).unwrap();
        assert_eq!(reachable_interval(&u, None).unwrap(), (0.0, 1.0));
        // subtractive urn: walls at 1/3 and 2/3
        let s = catalog::subtractive_example();
        let (zm, zp) = reachable_interval(&s, None).unwrap();
        assert!((zm - 1.0 / 3.0).abs() < 1e-9, "zm = {zm}");
        assert!((zp - 2.0 / 3.0).abs() < 1e-9, "zp = {zp}");
        // majority urn with interior start: no interior walls
        let m = catalog::majority3();
        assert_eq!(reachable_interval(&m, Some((10, 2))).unwrap(), (0.0, 1.0));
    }

    #[test]
    fn modified_urn_walls() {
        use crate::urn::{Piece, PieceForm};
        // pi = 0 on [0.7, 0.8], positive elsewhere
        let u = UrnFunction::piecewise(vec![
            Piece {
                lo: 0.0,
                hi: 0.7,
                form: PieceForm::Poly(vec![0.5]),
            },
            Piece {
                lo: 0.7,
                hi: 0.8,
                form: PieceForm::Poly(vec![0.0]),
            },
            Piece {
                lo: 0.8,
                hi: 1.0,
                form: PieceForm::Poly(vec![0.5]),
            },
        ])
        .unwrap();
        let (zm, zp) = reachable_interval(&u, Some((2, 1))).unwrap();
        assert!(zm.abs() < 1e-12);
        assert!((zp - 0.7).abs() < 1e-9);
        let star = modified_urn(&u, (2, 1)).unwrap();
        assert_eq!(star.value(0.75), 0.0);
        assert_eq!(star.value(0.9), 0.0);
        assert!((star.value(0.3) - 0.5).abs() < 1e-12);
        // interior pi: modified urn is the original
        let v = UrnFunction::linear(0.3, 0.2).unwrap();
        let w = modified_urn(&v, (4, 2)).unwrap();
        assert!((w.value(0.9) - v.value(0.9)).abs() < 1e-15);
        // subtractive urn with interior start keeps its own walls
        let s = catalog::subtractive_example();
        let star = modified_urn(&s, (2, 1)).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((star.value(x) - s.value(x)).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn partition_covers_unit_interval() {
        for u in [
            catalog::majority3(),
            catalog::arcsin_example(),
            catalog::sign_pattern_example(),
            UrnFunction::linear(0.3, 0.2).unwrap(),
            UrnFunction::constant(0.3).unwrap(),
        ] {
            let a = analyse(&u);
            for i in 0..=100_000 {
                let s = i as f64 / 100_000.0;
                let in_contact = a.contacts.iter().any(|c| (c.s - s).abs() <= 1e-7);
                let in_plateau = a
                    .plateaus
                    .iter()
                    .any(|&(lo, hi)| s >= lo - 1e-12 && s <= hi + 1e-12);
                let in_k = a
                    .k_intervals
                    .iter()
                    .any(|k| s > k.lo && s < k.hi && k.sign != Sign::Zero);
                assert!(
                    in_contact || in_plateau || in_k,
                    "s = {s} uncovered"
                );
                // non-zero K intervals never overlap plateaus
                if in_k && !in_contact {
                    assert!(!in_plateau, "s = {s} double covered");
                }
            }
        }
    }

    #[test]
    fn k_interval_signs_hold_on_refinement() {
        for u in [catalog::majority3(), catalog::sign_pattern_example()] {
            let a = analyse(&u);
            for k in &a.k_intervals {
                if k.sign == Sign::Zero {
                    continue;
                }
                let mut min_abs = f64::INFINITY;
                for j in 1..1000 {
                    let s = k.lo + (k.hi - k.lo) * j as f64 / 1000.0;
                    let h = u.value(s) - s;
                    assert_eq!(Sign::of(h), k.sign, "sign flip inside K at {s}");
                    min_abs = min_abs.min(h.abs());
                }
                assert!(min_abs > 0.0);
            }
        }
    }
}
