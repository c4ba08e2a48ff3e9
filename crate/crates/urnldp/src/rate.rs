//! The sample-path rate functional I = J - S on discretised trajectories.
//!
//! J is the binary path entropy, the integral of H(phi-dot) with
//! H(x) = x log x + (1-x) log(1-x); S is the urn action
//!
//!     S[phi] = int [ dphi log pi(phi/tau) + d(tau - phi) log(1 - pi(phi/tau)) ].
//!
//! Quadrature is per-cell: the slope for J, the midpoint ratio for S (second
//! order for smooth paths). Cells lying on a hard wall (pi = 0 or 1) cost
//! nothing while the path obeys the wall and -infinity the moment it moves
//! against it. The first cell never evaluates at tau = 0: its midpoint ratio
//! equals the cell slope, which is the limit value for admissible paths.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::urn::UrnFunction;

/// A sampled monotone 1-Lipschitz path on [0,1] with phi(0) = 0.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    taus: Vec<f64>,
    phis: Vec<f64>,
}

/// Slack allowed when validating admissibility of sampled data.
const ADMISSIBLE_TOL: f64 = 1e-9;

/// pi below this is treated as an exact wall (log-domain floor).
const WALL_FLOOR: f64 = 1e-300;

impl Trajectory {
    /// Validate and build a trajectory; tiny constraint violations (below
    /// 1e-9) are clamped, anything larger is rejected.
    pub fn new(taus: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if taus.len() != phis.len() || taus.len() < 2 {
            return Err(Error::validation(
                "trajectory needs matching grids with at least 2 nodes".into(),
            ));
        }
        if taus[0] != 0.0 || (taus[taus.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::validation(
                "trajectory grid must start at 0 and end at 1".into(),
            ));
        }
        if phis[0].abs() > ADMISSIBLE_TOL {
            return Err(Error::validation("trajectory must start at phi(0) = 0".into()));
        }
        let mut phis = phis;
        phis[0] = 0.0;
        for i in 1..taus.len() {
            let dt = taus[i] - taus[i - 1];
            if dt <= 0.0 {
                return Err(Error::validation(format!(
                    "trajectory grid must be strictly increasing (at index {i})"
                )));
            }
            let dp = phis[i] - phis[i - 1];
            if dp < -ADMISSIBLE_TOL || dp > dt + ADMISSIBLE_TOL {
                return Err(Error::validation(format!(
                    "trajectory increment {dp:.3e} outside [0, {dt:.3e}] at tau = {}",
                    taus[i]
                )));
            }
            // clamp roundoff-level violations so downstream slopes stay in [0,1]
            phis[i] = phis[i].clamp(phis[i - 1], phis[i - 1] + dt);
        }
        Ok(Trajectory { taus, phis })
    }

    /// Straight line phi = s tau on a uniform grid.
    pub fn line(s: f64, nodes: usize) -> Self {
        let n = nodes.max(2);
        let taus: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let phis: Vec<f64> = taus.iter().map(|&t| s * t).collect();
        Trajectory { taus, phis }
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// Terminal value phi(1).
    pub fn terminal(&self) -> f64 {
        *self.phis.last().expect("non-empty trajectory")
    }

    /// Pointwise shift by `delta`, clamped back into the admissible cone
    /// (phi <= tau, monotone, phi(0) = 0).
    pub fn shifted(&self, delta: f64) -> Trajectory {
        let mut phis: Vec<f64> = self
            .taus
            .iter()
            .zip(&self.phis)
            .map(|(&t, &p)| (p + delta).clamp(0.0, t))
            .collect();
        phis[0] = 0.0;
        for i in 1..phis.len() {
            let dt = self.taus[i] - self.taus[i - 1];
            phis[i] = phis[i].clamp(phis[i - 1], phis[i - 1] + dt);
        }
        Trajectory {
            taus: self.taus.clone(),
            phis,
        }
    }
}

/// H(x) = x log x + (1-x) log(1-x), continuously extended by 0 at {0, 1}.
pub fn binary_entropy(x: f64) -> f64 {
    let mut v = 0.0;
    if x > 0.0 {
        v += x * x.ln();
    }
    if x < 1.0 {
        v += (1.0 - x) * (1.0 - x).ln();
    }
    v
}

/// Path entropy J = int H(phi-dot) d tau over the cells of the grid.
pub fn entropy_j(t: &Trajectory) -> f64 {
    let mut total = 0.0;
    for i in 1..t.len() {
        let dt = t.taus[i] - t.taus[i - 1];
        let slope = ((t.phis[i] - t.phis[i - 1]) / dt).clamp(0.0, 1.0);
        total += dt * binary_entropy(slope);
    }
    total
}

/// Urn action S (midpoint rule); -infinity on wall violations.
pub fn action_s(u: &UrnFunction, t: &Trajectory) -> f64 {
    let mut total = 0.0;
    for i in 1..t.len() {
        let dt = t.taus[i] - t.taus[i - 1];
        let dp = (t.phis[i] - t.phis[i - 1]).clamp(0.0, dt);
        let tau_mid = 0.5 * (t.taus[i] + t.taus[i - 1]);
        let phi_mid = 0.5 * (t.phis[i] + t.phis[i - 1]);
        // for the first cell this ratio equals the cell slope (phi(0) = 0)
        let ratio = (phi_mid / tau_mid).clamp(0.0, 1.0);
        let p = u.value(ratio);
        // moving mass against a wall is forbidden; riding it is free
        let up_flat = dp <= 1e-12 * dt;
        let down_flat = (dt - dp) <= 1e-12 * dt;
        if p <= WALL_FLOOR {
            if up_flat {
                total += dt * binary_entropy(0.0); // zero
            } else {
                return f64::NEG_INFINITY;
            }
            continue;
        }
        if p >= 1.0 - 1e-16 {
            if down_flat {
                continue; // dphi = dtau against pi = 1 costs nothing
            } else if 1.0 - p <= WALL_FLOOR {
                return f64::NEG_INFINITY;
            }
        }
        let mut cell = 0.0;
        if !up_flat {
            cell += dp * p.ln();
        }
        if !down_flat {
            cell += (dt - dp) * (1.0 - p).ln();
        }
        total += cell;
    }
    total
}

/// Rate value with its two parts; `clamped` marks a negative rate within
/// numerical noise that was snapped to zero.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateBreakdown {
    pub entropy: f64,
    pub action: f64,
    pub rate: f64,
    pub clamped: bool,
}

/// Rate functional I = J - S with infinity propagation; never negative
/// beyond 1e-9 noise (clamped to zero with a flag).
pub fn rate_i(u: &UrnFunction, t: &Trajectory) -> Result<RateBreakdown> {
    let entropy = entropy_j(t);
    let action = action_s(u, t);
    if action == f64::NEG_INFINITY {
        return Ok(RateBreakdown {
            entropy,
            action,
            rate: f64::INFINITY,
            clamped: false,
        });
    }
    let raw = entropy - action;
    if raw < -1e-9 {
        return Err(Error::numeric(format!(
            "rate functional evaluated to {raw:.3e} < 0: quadrature inconsistency"
        )));
    }
    Ok(RateBreakdown {
        entropy,
        action,
        rate: raw.max(0.0),
        clamped: raw < 0.0,
    })
}
