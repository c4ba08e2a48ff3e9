//! Zero-cost trajectories: the optimal paths along which the urn realises a
//! rare terminal fraction.
//!
//! Any zero-rate path solves the homogeneous equation phi-dot = pi(phi/tau).
//! Writing u = phi/tau, the solution through u(1) = s is implicit in
//!
//!     F(s, u) = int_u^s dz / (pi(z) - z) = log(1/tau),
//!
//! so the path emanates from the unstable end s* of the K interval holding s
//! and leaves it at the exit time tau* = exp(-|F(s, s*)|), positive exactly
//! when 1/(pi(z)-z) is integrable at s*. Trajectories ending at the stable
//! end s-dagger form a one-parameter family indexed by the hitting time t
//! when the singularity is integrable there, with the family constant
//! theta* = exp(-|F(s-dagger, s*)|).
//!
//! Integrability is decided numerically: the local exponent gamma of
//! |pi(z) - z| ~ c |z - s0|^gamma is fitted by log-log least squares on a
//! geometric ladder; gamma >= 1 means a divergent integral.

use serde::Serialize;

use crate::contacts::{ContactAnalysis, Sign};
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, integrate_to_singularity, QuadOptions};
use crate::numerics::roots::find_root;
use crate::rate::Trajectory;
use crate::urn::UrnFunction;

/// Construction output: the sampled curve plus the structural constants.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroCostTrajectory {
    pub s_target: f64,
    pub interval_index: usize,
    /// Exit time from the unstable equilibrium (0 when F diverges there).
    pub tau_star: f64,
    /// Unstable emanation point s*.
    pub s_star: f64,
    /// Stable end s-dagger of the interval.
    pub s_dagger: f64,
    /// Hitting time for boundary-family members.
    pub t_hit: Option<f64>,
    /// Set when the requested family does not exist and the constant
    /// trajectory was returned instead.
    pub family_degenerate: bool,
    /// u*(tau) per grid node.
    pub us: Vec<f64>,
    pub curve: Trajectory,
}

const ROOT_TOL: f64 = 1e-12;
const ROOT_ITER: u32 = 80;
/// Exponent threshold: gamma at or above this means non-integrable.
const GAMMA_DIVERGENT: f64 = 0.999;

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_depth: 52,
    }
}

struct IntervalCtx<'a> {
    u: &'a UrnFunction,
    lo: f64,
    hi: f64,
    sign: f64,
    /// Unstable end (F diverges or the path emanates here).
    s_star: f64,
    /// Stable end.
    s_dagger: f64,
    index: usize,
}

impl<'a> IntervalCtx<'a> {
    fn h(&self, z: f64) -> f64 {
        self.u.value(z) - z
    }

    fn recip(&self) -> impl Fn(f64) -> f64 + '_ {
        move |z: f64| 1.0 / (self.u.value(z) - z)
    }

    fn contains(&self, s: f64) -> bool {
        s > self.lo && s < self.hi
    }
}

fn locate_interval<'a>(
    u: &'a UrnFunction,
    analysis: &ContactAnalysis,
    index: usize,
) -> Result<IntervalCtx<'a>> {
    let k = analysis
        .k_intervals
        .get(index)
        .ok_or_else(|| Error::validation(format!("K interval index {index} out of range")))?;
    let sign = k.sign.as_i8() as f64;
    if k.sign == Sign::Zero {
        return Err(Error::validation(format!(
            "K interval {index} is a plateau: zero-cost paths there are straight lines"
        )));
    }
    let (s_star, s_dagger) = if sign > 0.0 { (k.lo, k.hi) } else { (k.hi, k.lo) };
    Ok(IntervalCtx {
        u,
        lo: k.lo,
        hi: k.hi,
        sign,
        s_star,
        s_dagger,
        index,
    })
}

/// Local exponent gamma of |pi(z) - z| ~ c |z - s0|^gamma at an interval
/// endpoint, fitted on a geometric ladder reaching into the interval.
pub fn endpoint_exponent(u: &UrnFunction, lo: f64, hi: f64, s0: f64) -> f64 {
    let width = hi - lo;
    let dir = if (s0 - lo).abs() < (s0 - hi).abs() { 1.0 } else { -1.0 };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in 0..=12 {
        let r = 1e-2 * 10f64.powf(-0.5 * j as f64);
        let r = r.min(0.4 * width);
        let z = s0 + dir * r;
        let habs = (u.value(z) - z).abs();
        if habs > 0.0 {
            xs.push(r.ln());
            ys.push(habs.ln());
        }
    }
    if xs.len() < 3 {
        return 1.0; // cannot resolve: treat as divergent (conservative)
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// F evaluated between two points of the closed interval, taking the
/// improper route when either limit sits on a singular endpoint.
fn f_value(ctx: &IntervalCtx, s: f64, x: f64) -> Result<f64> {
    let opts = quad_opts();
    let edge_tol = 1e-11 * (ctx.hi - ctx.lo).max(1e-3);
    let at_edge = |z: f64| (z - ctx.lo).abs() <= edge_tol || (z - ctx.hi).abs() <= edge_tol;
    let edge_of = |z: f64| {
        if (z - ctx.lo).abs() <= edge_tol {
            ctx.lo
        } else {
            ctx.hi
        }
    };
    match (at_edge(s), at_edge(x)) {
        (false, false) => integrate(ctx.recip(), x, s, &opts),
        (false, true) => {
            let e = edge_of(x);
            let gamma = endpoint_exponent(ctx.u, ctx.lo, ctx.hi, e);
            if gamma >= GAMMA_DIVERGENT {
                // sign of the divergence: h carries ctx.sign, orientation x -> s
                let orient = (s - e).signum();
                return Ok(f64::INFINITY * ctx.sign * orient);
            }
            // F(s, e) = int_e^s = -(integral from s down to e)
            Ok(-integrate_to_singularity(ctx.recip(), s, e, &opts)?)
        }
        (true, false) => Ok(-f_value_swapped(ctx, x, s)?),
        (true, true) => {
            // both ends singular: split at the midpoint
            let mid = 0.5 * (ctx.lo + ctx.hi);
            let left = f_value(ctx, mid, x)?;
            let right = f_value(ctx, s, mid)?;
            Ok(left + right)
        }
    }
}

fn f_value_swapped(ctx: &IntervalCtx, s: f64, x: f64) -> Result<f64> {
    f_value(ctx, s, x)
}

/// The singular integral F(s, x) = int_x^s dz / (pi(z) - z) inside K
/// interval `index`; +/- infinity marks a non-integrable endpoint.
pub fn f_pi(
    u: &UrnFunction,
    analysis: &ContactAnalysis,
    index: usize,
    s: f64,
    x: f64,
) -> Result<f64> {
    let ctx = locate_interval(u, analysis, index)?;
    let inside = |z: f64| z >= ctx.lo - 1e-12 && z <= ctx.hi + 1e-12;
    if !inside(s) || !inside(x) {
        return Err(Error::domain(format!(
            "arguments ({s}, {x}) outside the closed K interval [{}, {}]",
            ctx.lo, ctx.hi
        )));
    }
    f_value(&ctx, s, x)
}

/// Exit time tau* = exp(-|F(s, s*)|); zero when F diverges at s*.
pub fn tau_star(
    u: &UrnFunction,
    analysis: &ContactAnalysis,
    index: usize,
    s: f64,
) -> Result<f64> {
    let ctx = locate_interval(u, analysis, index)?;
    if !ctx.contains(s) {
        return Err(Error::domain(format!(
            "s = {s} is not strictly inside K interval {index}"
        )));
    }
    let f = f_value(&ctx, s, ctx.s_star)?;
    if f.is_infinite() {
        return Ok(0.0);
    }
    Ok((-f.abs()).exp())
}

/// Family constant theta* = exp(-|F(s-dagger, s*)|) for boundary families;
/// zero when the integral diverges at either end.
pub fn theta_star(u: &UrnFunction, analysis: &ContactAnalysis, index: usize) -> Result<f64> {
    let ctx = locate_interval(u, analysis, index)?;
    let g_star = endpoint_exponent(u, ctx.lo, ctx.hi, ctx.s_star);
    let g_dag = endpoint_exponent(u, ctx.lo, ctx.hi, ctx.s_dagger);
    if g_star >= GAMMA_DIVERGENT || g_dag >= GAMMA_DIVERGENT {
        return Ok(0.0);
    }
    let f = f_value(&ctx, ctx.s_dagger, ctx.s_star)?;
    Ok((-f.abs()).exp())
}

/// Walks the implicit solution u(q) with F(start_u, u) accumulated
/// incrementally; `targets` are (tau, q) pairs in decreasing tau order with
/// q increasing. `singular_start` marks a start point sitting on the
/// integrable singular endpoint s-dagger (boundary families).
fn solve_branch(
    ctx: &IntervalCtx,
    start_u: f64,
    singular_start: bool,
    targets: &[(f64, f64)],
) -> Result<Vec<f64>> {
    let opts = quad_opts();
    let mut out = Vec::with_capacity(targets.len());
    let mut u_a = start_u;
    let mut q_a = 0.0f64;
    let mut anchor_singular = singular_start;
    let toward = (ctx.s_star - start_u).signum();
    for &(_tau, q) in targets {
        debug_assert!(q >= q_a - 1e-12);
        let span = (u_a - ctx.s_star).abs();
        if !anchor_singular && span <= 4.0 * f64::EPSILON {
            out.push(ctx.s_star);
            continue;
        }
        // increment from the anchor: F(base, u) = q_a + int_u^{u_a} dz/h;
        // the oriented improper integral from `cand` to the singular anchor
        // is exactly int_cand^{u_a}
        let increment = |cand: f64| -> Result<f64> {
            if anchor_singular {
                integrate_to_singularity(ctx.recip(), cand, u_a, &opts)
            } else {
                integrate(ctx.recip(), cand, u_a, &opts)
            }
        };
        if q - q_a <= 1e-15 {
            out.push(u_a);
            continue;
        }
        // expand a bracket from the anchor toward s*
        let mut frac = 0.05f64;
        let mut lo_u = u_a;
        let mut hi_u = u_a;
        let mut found = false;
        loop {
            let cand = if frac >= 1.0 {
                ctx.s_star - toward * span * 2.0f64.powi(-60)
            } else {
                ctx.s_star - toward * span * (1.0 - frac)
            };
            let g = q_a + increment(cand)? - q;
            if g >= 0.0 {
                hi_u = cand;
                found = true;
                break;
            }
            lo_u = cand;
            if frac >= 1.0 {
                break;
            }
            frac = (frac * 2.0).min(1.0);
        }
        if !found {
            // target beyond the resolvable branch: clamp to the equilibrium
            out.push(ctx.s_star);
            u_a = ctx.s_star - toward * span * 2.0f64.powi(-60);
            q_a = q;
            anchor_singular = false;
            continue;
        }
        let root = find_root(
            |cand| q_a + increment(cand).unwrap_or(f64::NAN) - q,
            lo_u,
            hi_u,
            ROOT_TOL,
            ROOT_ITER,
        )?;
        out.push(root);
        u_a = root;
        q_a = q;
        anchor_singular = false;
    }
    Ok(out)
}

/// Moving-segment grid between tau_lo (exclusive) and tau_hi (inclusive):
/// geometric refinement near tau_lo, uniform elsewhere.
fn moving_grid(tau_lo: f64, tau_hi: f64, nodes: usize) -> Vec<f64> {
    let mut taus = Vec::with_capacity(nodes);
    let gap = tau_hi - tau_lo;
    if gap <= 0.0 {
        return vec![tau_hi];
    }
    if tau_lo > 0.0 {
        // ratio-1.1 ladder over three decades of relative offset
        let mut e = 1e-4 * gap;
        while e < 0.1 * gap {
            taus.push(tau_lo + e);
            e *= 1.1;
        }
    } else {
        // divergent exit: log-spaced approach to tau = 0
        let lo = (1e-6f64).min(0.01 * gap);
        let hi = 0.1 * gap;
        let m = (nodes / 6).max(16);
        for j in 0..m {
            let t = lo * (hi / lo).powf(j as f64 / (m - 1) as f64);
            taus.push(tau_lo + t);
        }
    }
    let uniform_from = tau_lo + 0.1 * gap;
    let remaining = nodes.saturating_sub(taus.len()).max(8);
    for j in 0..=remaining {
        taus.push(uniform_from + (tau_hi - uniform_from) * j as f64 / remaining as f64);
    }
    taus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    taus.dedup_by(|a, b| (*a - *b) < 1e-15);
    if let Some(last) = taus.last_mut() {
        *last = tau_hi;
    }
    taus
}

/// Zero-cost trajectory ending at s inside a K interval (Corollary-4 shape):
/// u = s* for tau <= tau*, the F-inverse branch above it.
pub fn zero_cost_interior(
    u: &UrnFunction,
    analysis: &ContactAnalysis,
    s: f64,
    nodes: usize,
) -> Result<ZeroCostTrajectory> {
    // contacts and plateau interiors get the straight line
    if (u.value(s) - s).abs() <= 1e-12 {
        let curve = Trajectory::line(s, nodes.max(64));
        let us = vec![s; curve.len()];
        return Ok(ZeroCostTrajectory {
            s_target: s,
            interval_index: usize::MAX,
            tau_star: 1.0,
            s_star: s,
            s_dagger: s,
            t_hit: None,
            family_degenerate: false,
            us,
            curve,
        });
    }
    let index = analysis
        .k_intervals
        .iter()
        .position(|k| s > k.lo && s < k.hi)
        .ok_or_else(|| {
            Error::domain(format!("target {s} lies in no K interval of this urn"))
        })?;
    let k = &analysis.k_intervals[index];
    if k.sign == Sign::Zero {
        // plateau: Polya behaviour, straight line
        let curve = Trajectory::line(s, nodes.max(64));
        let us = vec![s; curve.len()];
        return Ok(ZeroCostTrajectory {
            s_target: s,
            interval_index: index,
            tau_star: 1.0,
            s_star: s,
            s_dagger: s,
            t_hit: None,
            family_degenerate: false,
            us,
            curve,
        });
    }
    // interior K intervals are bounded by contacts on both sides
    let bounded = analysis.contacts.iter().any(|c| (c.s - k.lo).abs() < 1e-9)
        && analysis.contacts.iter().any(|c| (c.s - k.hi).abs() < 1e-9);
    if !bounded {
        return Err(Error::domain(format!(
            "no zero-cost trajectory ends at {s}: the K interval [{}, {}] touches the \
             domain boundary without a contact there",
            k.lo, k.hi
        )));
    }
    let ctx = locate_interval(u, analysis, index)?;
    let ts = tau_star(u, analysis, index, s)?;

    let nodes = nodes.max(64);
    let moving = moving_grid(ts, 1.0, nodes - 6);
    let targets: Vec<(f64, f64)> = moving
        .iter()
        .rev()
        .map(|&t| (t, (1.0 / t).ln()))
        .collect();
    let mut us_moving = solve_branch(&ctx, s, false, &targets)?;
    us_moving.reverse(); // ascending tau order

    let mut taus = Vec::with_capacity(nodes);
    let mut us = Vec::with_capacity(nodes);
    if ts > 0.0 {
        for j in 0..5 {
            taus.push(ts * j as f64 / 5.0);
            us.push(ctx.s_star);
        }
    } else {
        taus.push(0.0);
        us.push(ctx.s_star);
    }
    taus.extend_from_slice(&moving);
    us.extend_from_slice(&us_moving);
    // exact endpoint
    *us.last_mut().unwrap() = s;

    let phis: Vec<f64> = taus.iter().zip(&us).map(|(&t, &v)| t * v).collect();
    let curve = Trajectory::new(taus, phis)?;
    Ok(ZeroCostTrajectory {
        s_target: s,
        interval_index: index,
        tau_star: ts,
        s_star: ctx.s_star,
        s_dagger: ctx.s_dagger,
        t_hit: None,
        family_degenerate: false,
        us,
        curve,
    })
}

/// Member of the zero-cost family ending at the stable contact s-dagger of
/// K interval `index`, hitting it at time `t` (Corollary-4.1 shape).
///
/// When F diverges at s-dagger the family degenerates to the straight line
/// u = s-dagger; `t` is then ignored and the result is flagged.
pub fn zero_cost_boundary(
    u: &UrnFunction,
    analysis: &ContactAnalysis,
    index: usize,
    t: f64,
    nodes: usize,
) -> Result<ZeroCostTrajectory> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("hitting time t = {t} outside [0,1]")));
    }
    let ctx = locate_interval(u, analysis, index)?;
    let nodes = nodes.max(64);
    let gamma_dag = endpoint_exponent(u, ctx.lo, ctx.hi, ctx.s_dagger);
    let line = |flag: bool, t_hit: Option<f64>| -> Result<ZeroCostTrajectory> {
        let curve = Trajectory::line(ctx.s_dagger, nodes);
        let us = vec![ctx.s_dagger; curve.len()];
        Ok(ZeroCostTrajectory {
            s_target: ctx.s_dagger,
            interval_index: index,
            tau_star: 0.0,
            s_star: ctx.s_star,
            s_dagger: ctx.s_dagger,
            t_hit,
            family_degenerate: flag,
            us,
            curve,
        })
    };
    if gamma_dag >= GAMMA_DIVERGENT {
        return line(true, None);
    }
    if t == 0.0 {
        // hit immediately: the constant trajectory at s-dagger
        return line(false, Some(0.0));
    }
    let theta = theta_star(u, analysis, index)?;

    // moving segment (theta t, t]: q = log(t / tau)
    let moving = moving_grid(theta * t, t, (nodes * 3) / 4);
    let targets: Vec<(f64, f64)> = moving.iter().rev().map(|&tau| (tau, (t / tau).ln())).collect();
    let mut us_moving = solve_branch(&ctx, ctx.s_dagger, true, &targets)?;
    us_moving.reverse();

    let mut taus = Vec::new();
    let mut us = Vec::new();
    if theta > 0.0 {
        for j in 0..5 {
            taus.push(theta * t * j as f64 / 5.0);
            us.push(ctx.s_star);
        }
    } else {
        taus.push(0.0);
        us.push(ctx.s_star);
    }
    taus.extend_from_slice(&moving);
    us.extend_from_slice(&us_moving);
    *us.last_mut().unwrap() = ctx.s_dagger;
    // constant segment (t, 1]
    if t < 1.0 {
        let tail_nodes = (nodes / 5).max(4);
        for j in 1..=tail_nodes {
            taus.push(t + (1.0 - t) * j as f64 / tail_nodes as f64);
            us.push(ctx.s_dagger);
        }
    }
    let phis: Vec<f64> = taus.iter().zip(&us).map(|(&tt, &v)| tt * v).collect();
    let curve = Trajectory::new(taus, phis)?;
    Ok(ZeroCostTrajectory {
        s_target: ctx.s_dagger,
        interval_index: index,
        tau_star: theta * t,
        s_star: ctx.s_star,
        s_dagger: ctx.s_dagger,
        t_hit: Some(t),
        family_degenerate: false,
        us,
        curve,
    })
}

/// Max residual |slope - pi(phi_mid / tau_mid)| over interior cells,
/// excluding cells within two cells of any kink time in `kinks`.
pub fn verify_homogeneous(u: &UrnFunction, t: &Trajectory, kinks: &[f64]) -> f64 {
    let taus = t.taus();
    let phis = t.phis();
    let mut kink_idx: Vec<usize> = Vec::new();
    for &k in kinks {
        let idx = taus.partition_point(|&x| x < k);
        kink_idx.push(idx);
    }
    let mut worst: f64 = 0.0;
    for i in 1..taus.len() {
        if kink_idx.iter().any(|&ki| (i as i64 - ki as i64).abs() <= 2) {
            continue;
        }
        let dt = taus[i] - taus[i - 1];
        let slope = (phis[i] - phis[i - 1]) / dt;
        let tau_mid = 0.5 * (taus[i] + taus[i - 1]);
        let phi_mid = 0.5 * (phis[i] + phis[i - 1]);
        let ratio = (phi_mid / tau_mid).clamp(0.0, 1.0);
        worst = worst.max((slope - u.value(ratio)).abs());
    }
    worst
}

impl ZeroCostTrajectory {
    /// Residual of the homogeneous equation, excluding the kink cells.
    pub fn homogeneous_residual(&self, u: &UrnFunction) -> f64 {
        let mut kinks = vec![self.tau_star];
        if let Some(t) = self.t_hit {
            kinks.push(t);
        }
        verify_homogeneous(u, &self.curve, &kinks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::contacts::{find_contacts, ContactOptions};
    use crate::rate::rate_i;

    fn analysis(u: &UrnFunction) -> ContactAnalysis {
        find_contacts(u, &ContactOptions::default()).unwrap()
    }

    /// rho(s) = 4 s (1-s) / (2s-1)^2: the majority-urn exit profile.
    fn rho(s: f64) -> f64 {
        4.0 * s * (1.0 - s) / ((2.0 * s - 1.0) * (2.0 * s - 1.0))
    }

    /// Branch-corrected closed form 2u = 1 + sign(s - 1/2) (1 + rho(s)/tau)^{-1/2}.
    fn majority_u(s: f64, tau: f64) -> f64 {
        0.5 * (1.0 + (s - 0.5).signum() * (1.0 + rho(s) / tau).powf(-0.5))
    }

    #[test]
    fn f_pi_majority_closed_form() {
        let u = catalog::majority3();
        let a = analysis(&u);
        // interval (1/2, 1) is index 1
        let f = f_pi(&u, &a, 1, 0.8, 0.6).unwrap();
        assert!((f - 13.5f64.ln()).abs() < 1e-8, "F = {f}");
        // degenerate zero-width case
        let z = f_pi(&u, &a, 1, 0.7, 0.7).unwrap();
        assert!(z.abs() < 1e-14);
    }

    #[test]
    fn f_pi_arcsin_closed_form() {
        let u = catalog::arcsin_example();
        let a = analysis(&u);
        // interval (1/4, 1/2) is index 1; F(3/8, 1/4) = pi/2
        let f = f_pi(&u, &a, 1, 0.375, 0.25).unwrap();
        assert!(
            (f - std::f64::consts::FRAC_PI_2).abs() < 1e-8,
            "F = {f} vs pi/2"
        );
    }

    #[test]
    fn tau_star_values() {
        let maj = catalog::majority3();
        let am = analysis(&maj);
        // simple transversal zeros: divergent, tau* = 0
        assert_eq!(tau_star(&maj, &am, 1, 0.8).unwrap(), 0.0);
        assert_eq!(tau_star(&maj, &am, 0, 0.2).unwrap(), 0.0);

        let arc = catalog::arcsin_example();
        let aa = analysis(&arc);
        let ts = tau_star(&arc, &aa, 1, 0.375).unwrap();
        assert!(
            (ts - (-std::f64::consts::FRAC_PI_2).exp()).abs() < 1e-8,
            "tau* = {ts}"
        );
    }

    #[test]
    fn theta_star_values() {
        let arc = catalog::arcsin_example();
        let aa = analysis(&arc);
        let th = theta_star(&arc, &aa, 1).unwrap();
        assert!(
            (th - (-std::f64::consts::PI).exp()).abs() < 1e-8,
            "theta* = {th}"
        );
        // tau* tends to theta* as s approaches the stable end
        let near = tau_star(&arc, &aa, 1, 0.5 - 1e-9).unwrap();
        assert!((near - th).abs() < 1e-4, "{near} vs {th}");

        let maj = catalog::majority3();
        let am = analysis(&maj);
        assert_eq!(theta_star(&maj, &am, 1).unwrap(), 0.0);
    }

    #[test]
    fn interior_trajectory_matches_majority_closed_form() {
        let u = catalog::majority3();
        let a = analysis(&u);
        for s in [0.2, 0.8] {
            let z = zero_cost_interior(&u, &a, s, 800).unwrap();
            assert_eq!(z.tau_star, 0.0);
            let mut worst: f64 = 0.0;
            for (&tau, &uv) in z.curve.taus().iter().zip(&z.us) {
                if tau <= 0.0 {
                    continue;
                }
                worst = worst.max((uv - majority_u(s, tau)).abs());
            }
            assert!(worst < 1e-8, "s={s}: sup deviation {worst:.2e}");
            // terminal pin
            assert!((z.us.last().unwrap() - s).abs() < 1e-9);
            // spec point value u*(tau = 0.5) for s = 0.8
            if s == 0.8 {
                let idx = z
                    .curve
                    .taus()
                    .iter()
                    .position(|&t| (t - 0.5).abs() < 2e-3)
                    .expect("node near 0.5");
                assert!((z.us[idx] - majority_u(0.8, z.curve.taus()[idx])).abs() < 1e-8);
                assert!((majority_u(0.8, 0.5) - 0.7342606428329091).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn interior_trajectory_matches_arcsin_closed_form() {
        let u = catalog::arcsin_example();
        let a = analysis(&u);
        let s = 0.375;
        let z = zero_cost_interior(&u, &a, s, 800).unwrap();
        let ts = z.tau_star;
        assert!((ts - (-std::f64::consts::FRAC_PI_2).exp()).abs() < 1e-8);
        let closed = |tau: f64| -> f64 {
            if tau <= ts {
                0.25
            } else {
                0.25 * (1.0 + (0.5 * (ts / tau).ln()).sin().powi(2))
            }
        };
        let mut worst: f64 = 0.0;
        for (&tau, &uv) in z.curve.taus().iter().zip(&z.us) {
            worst = worst.max((uv - closed(tau)).abs());
        }
        assert!(worst < 1e-8, "sup deviation {worst:.2e}");
        // continuity at the exit time
        assert!((closed(ts) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn plateau_target_gives_line() {
        let u = crate::urn::UrnFunction::identity();
        let a = analysis(&u);
        let z = zero_cost_interior(&u, &a, 0.3, 200).unwrap();
        for (&tau, &phi) in z.curve.taus().iter().zip(z.curve.phis()) {
            assert!((phi - 0.3 * tau).abs() < 1e-14);
        }
    }

    #[test]
    fn outer_interval_rejected() {
        // linear(0.3, 0.2): K0 = (0, 0.375) has no contact at 0
        let u = crate::urn::UrnFunction::linear(0.3, 0.2).unwrap();
        let a = analysis(&u);
        assert!(zero_cost_interior(&u, &a, 0.2, 200).is_err());
        assert!(zero_cost_interior(&u, &a, 0.8, 200).is_err());
    }

    #[test]
    fn constructed_trajectories_have_zero_rate() {
        let maj = catalog::majority3();
        let am = analysis(&maj);
        let z = zero_cost_interior(&maj, &am, 0.8, 10_000).unwrap();
        let r = rate_i(&maj, &z.curve).unwrap();
        assert!(r.rate <= 1e-6, "rate = {:.2e}", r.rate);
        // perturbed trajectory pays a positive rate
        let shifted = z.curve.shifted(0.01);
        let rs = rate_i(&maj, &shifted).unwrap();
        assert!(rs.rate >= 1e-4, "shifted rate = {:.2e}", rs.rate);

        let arc = catalog::arcsin_example();
        let aa = analysis(&arc);
        let z = zero_cost_interior(&arc, &aa, 0.375, 10_000).unwrap();
        let r = rate_i(&arc, &z.curve).unwrap();
        assert!(r.rate <= 1e-6, "arcsin rate = {:.2e}", r.rate);
    }

    #[test]
    fn homogeneous_residuals() {
        let u = catalog::majority3();
        let a = analysis(&u);
        let z = zero_cost_interior(&u, &a, 0.8, 10_000).unwrap();
        assert!(z.homogeneous_residual(&u) <= 1e-3);
        // identity line: zero residual
        let line = Trajectory::line(0.4, 500);
        assert!(verify_homogeneous(&crate::urn::UrnFunction::identity(), &line, &[]) < 1e-12);
        // straight line under the majority urn misses by |pi(s) - s|
        let line8 = Trajectory::line(0.8, 500);
        let res = verify_homogeneous(&u, &line8, &[]);
        let expect = (u.value(0.8) - 0.8f64).abs();
        assert!((res - expect).abs() < 1e-6, "res = {res}, expect = {expect}");
    }

    #[test]
    fn boundary_family_matches_arcsin_closed_form() {
        let u = catalog::arcsin_example();
        let a = analysis(&u);
        let theta = (-std::f64::consts::PI).exp();
        for t in [1.0, 0.5] {
            let z = zero_cost_boundary(&u, &a, 1, t, 900).unwrap();
            assert!(!z.family_degenerate);
            let closed = |tau: f64| -> f64 {
                if tau <= theta * t {
                    0.25
                } else if tau >= t {
                    0.5
                } else {
                    0.25 * (1.0 + (0.5 * (t / tau).ln()).cos().powi(2))
                }
            };
            let mut worst: f64 = 0.0;
            for (&tau, &uv) in z.curve.taus().iter().zip(&z.us) {
                worst = worst.max((uv - closed(tau)).abs());
            }
            assert!(worst < 1e-8, "t={t}: sup deviation {worst:.2e}");
            let r = rate_i(&u, &z.curve).unwrap();
            assert!(r.rate <= 1e-5, "t={t}: rate {:.2e}", r.rate);
        }
        // t = 0 is the constant trajectory at the stable end
        let z0 = zero_cost_boundary(&u, &a, 1, 0.0, 200).unwrap();
        for &uv in &z0.us {
            assert!((uv - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_family_scaling_consistency() {
        // members coincide after time rescaling on the moving segment
        let u = catalog::arcsin_example();
        let a = analysis(&u);
        let (t1, t2) = (0.4, 0.8);
        let z2 = zero_cost_boundary(&u, &a, 1, t2, 1200).unwrap();
        let theta = (-std::f64::consts::PI).exp();
        // u_{t1}(tau) = u_{t2}(tau t2 / t1): check by re-solving
        let z1 = zero_cost_boundary(&u, &a, 1, t1, 1200).unwrap();
        for (&tau, &uv) in z1.curve.taus().iter().zip(&z1.us) {
            if tau <= theta * t1 * 1.05 || tau >= t1 * 0.95 {
                continue;
            }
            let scaled = tau * t2 / t1;
            // interpolate z2 at `scaled`
            let ts = z2.curve.taus();
            let idx = ts.partition_point(|&x| x < scaled).clamp(1, ts.len() - 1);
            let w = (scaled - ts[idx - 1]) / (ts[idx] - ts[idx - 1]);
            let interp = z2.us[idx - 1] * (1.0 - w) + z2.us[idx] * w;
            assert!(
                (uv - interp).abs() < 1e-5,
                "tau={tau}: {uv} vs {interp}"
            );
        }
    }

    #[test]
    fn boundary_family_degenerate_for_majority() {
        let u = catalog::majority3();
        let a = analysis(&u);
        let z = zero_cost_boundary(&u, &a, 1, 0.5, 300).unwrap();
        assert!(z.family_degenerate);
        // the unique trajectory is the straight line at s-dagger = 1
        for (&tau, &phi) in z.curve.taus().iter().zip(z.curve.phis()) {
            assert!((phi - tau).abs() < 1e-12);
        }
    }

    #[test]
    fn inversion_consistency_random_taus() {
        let u = catalog::majority3();
        let a = analysis(&u);
        let s = 0.8;
        let z = zero_cost_interior(&u, &a, s, 4000).unwrap();
        // F(s, u(tau)) should reproduce -log tau
        let mut rng = 123456789u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let tau = 0.02 + 0.98 * next();
            let ts = z.curve.taus();
            let idx = ts.partition_point(|&x| x < tau).clamp(1, ts.len() - 1);
            let w = (tau - ts[idx - 1]) / (ts[idx] - ts[idx - 1]);
            let uv = z.us[idx - 1] * (1.0 - w) + z.us[idx] * w;
            let f = f_pi(&u, &a, 1, s, uv).unwrap();
            // linear interpolation of u adds O(cell^2) error scaled by F'
            assert!(
                (f - (1.0 / tau).ln()).abs() < 1e-4,
                "tau={tau}: F={f} vs {}",
                (1.0 / tau).ln()
            );
        }
        // and exactly at the nodes the consistency is tight
        for (i, (&tau, &uv)) in z.curve.taus().iter().zip(&z.us).enumerate() {
            if tau < 0.02 || i % 37 != 0 {
                continue;
            }
            let f = f_pi(&u, &a, 1, s, uv).unwrap();
            assert!((f - (1.0 / tau).ln()).abs() < 1e-8, "node tau={tau}");
        }
    }
}
