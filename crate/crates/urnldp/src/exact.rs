//! Exact law of the urn process by forward dynamic programming in the log
//! domain: terminal distributions, finite-horizon entropy and cumulant
//! values, and exact bridge (conditional) marginals.
//!
//! The recursion follows the one-step transition: from the step-k law p_k,
//!
//!     p_{k+1}(j) = p_k(j) (1 - pi(j/k)) + p_k(j-1) pi((j-1)/k),
//!
//! accumulated with log-sum-exp so tails survive far past the f64 underflow
//! horizon (probabilities reach e^{-3000} and below at n ~ 4000). States of
//! probability exactly zero carry the -inf sentinel; walls stay exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::logspace::{log_add_exp, log_sum_exp, ln_prob, NEG_INF};
use crate::urn::UrnFunction;

/// Initial condition of the urn chain.
///
/// `Uniform` is the half-half convention for the first ball: at k = 1 there
/// is one ball, black or white with probability 1/2 each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InitCondition {
    Uniform,
    /// Start at step `m` with exactly `count` black balls (0 <= count <= m).
    Fixed { m: usize, count: usize },
}

impl InitCondition {
    fn start_step(&self) -> usize {
        match self {
            InitCondition::Uniform => 1,
            InitCondition::Fixed { m, .. } => *m,
        }
    }

    fn start_row(&self) -> Vec<f64> {
        match self {
            InitCondition::Uniform => vec![0.5f64.ln(), 0.5f64.ln()],
            InitCondition::Fixed { m, count } => {
                let mut row = vec![NEG_INF; m + 1];
                row[*count] = 0.0;
                row
            }
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            InitCondition::Uniform => Ok(()),
            InitCondition::Fixed { m, count } => {
                if *m == 0 || *m > n || *count > *m {
                    Err(Error::validation(format!(
                        "fixed init needs 1 <= m <= n and count <= m, got m={m}, count={count}, n={n}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Exact terminal law at horizon n: log P(X_{n,n} = k) for k = 0..n.
#[derive(Debug, Clone, Serialize)]
pub struct TerminalDistribution {
    pub n: usize,
    pub init: InitCondition,
    pub log_p: Vec<f64>,
}

/// Forward DP visiting every intermediate row; `visit(k, row)` receives the
/// log-law of X_{n,k}. O(n^2) time, O(n) memory.
pub fn forward_rows(
    u: &UrnFunction,
    n: usize,
    init: InitCondition,
    mut visit: impl FnMut(usize, &[f64]),
) -> Result<()> {
    if n < 1 {
        return Err(Error::validation("horizon n must be at least 1".into()));
    }
    init.validate(n)?;
    let start = init.start_step();
    let mut row = init.start_row();
    visit(start, &row);
    let mut next = Vec::new();
    for k in start..n {
        next.clear();
        next.resize(k + 2, NEG_INF);
        let kf = k as f64;
        for (j, &lp) in row.iter().enumerate() {
            if lp == NEG_INF {
                continue;
            }
            let p = u.value(j as f64 / kf);
            let up = ln_prob(p);
            let stay = ln_prob(1.0 - p);
            if stay != NEG_INF {
                next[j] = log_add_exp(next[j], lp + stay);
            }
            if up != NEG_INF {
                next[j + 1] = log_add_exp(next[j + 1], lp + up);
            }
        }
        std::mem::swap(&mut row, &mut next);
        visit(k + 1, &row);
    }
    Ok(())
}

/// Exact terminal distribution of X_{n,n}.
pub fn terminal_distribution(
    u: &UrnFunction,
    n: usize,
    init: InitCondition,
) -> Result<TerminalDistribution> {
    let mut last: Vec<f64> = Vec::new();
    forward_rows(u, n, init, |k, row| {
        if k == n {
            last = row.to_vec();
        }
    })?;
    Ok(TerminalDistribution {
        n,
        init,
        log_p: last,
    })
}

impl TerminalDistribution {
    /// Normalisation defect: logsumexp of the law (0 for a proper law).
    pub fn normalization(&self) -> f64 {
        log_sum_exp(&self.log_p)
    }

    /// Linear-domain probabilities.
    pub fn probabilities(&self) -> Vec<f64> {
        self.log_p.iter().map(|&lp| lp.exp()).collect()
    }
}

/// Finite-n entropy value phi_n(s) = n^{-1} log P(X_{n,n} = floor(s n)).
pub fn phi_n(dist: &TerminalDistribution, s: f64) -> f64 {
    let k = ((s * dist.n as f64).floor() as usize).min(dist.n);
    dist.log_p[k] / dist.n as f64
}

/// Finite-n cumulant value psi_n(lambda) = n^{-1} log E e^{lambda X_{n,n}}.
pub fn psi_n(dist: &TerminalDistribution, lambda: f64) -> f64 {
    let terms: Vec<f64> = dist
        .log_p
        .iter()
        .enumerate()
        .map(|(k, &lp)| lambda * k as f64 + lp)
        .collect();
    log_sum_exp(&terms) / dist.n as f64
}

/// Exact bridge marginals: E[x_{n, floor(tau n)} | X_{n,n} = k_terminal] for
/// each tau in `taus`.
///
/// Forward probabilities times backward hitting probabilities give the
/// conditional law at every intermediate step; both sweeps are O(n^2).
pub fn conditional_marginals(
    u: &UrnFunction,
    n: usize,
    k_terminal: usize,
    taus: &[f64],
    init: InitCondition,
) -> Result<Vec<f64>> {
    if k_terminal > n {
        return Err(Error::validation(format!(
            "terminal count {k_terminal} exceeds horizon {n}"
        )));
    }
    let start = init.start_step();
    let steps: Vec<usize> = taus
        .iter()
        .map(|&t| {
            let k = (t * n as f64).floor() as usize;
            k.clamp(start, n)
        })
        .collect();

    // forward sweep, keeping the rows we will need
    let mut kept: std::collections::HashMap<usize, Vec<f64>> = std::collections::HashMap::new();
    let mut terminal = Vec::new();
    forward_rows(u, n, init, |k, row| {
        if steps.contains(&k) {
            kept.insert(k, row.to_vec());
        }
        if k == n {
            terminal = row.to_vec();
        }
    })?;
    let log_z = terminal[k_terminal];
    if log_z == NEG_INF {
        return Err(Error::validation(format!(
            "terminal state {k_terminal} is unreachable at horizon {n}"
        )));
    }

    // backward sweep: h_k(j) = log P(X_n = k_terminal | X_k = j)
    let min_step = steps.iter().copied().min().unwrap_or(n);
    let mut h = vec![NEG_INF; n + 1];
    h[k_terminal] = 0.0;
    let mut means = vec![0.0; taus.len()];
    let mut fill = |k: usize, h: &[f64]| {
        if let Some(fwd) = kept.get(&k) {
            // conditional law q_k(j) = fwd_k(j) + h_k(j) - log Z
            let mut mean = 0.0;
            for (j, &lp) in fwd.iter().enumerate() {
                if lp == NEG_INF || h[j] == NEG_INF {
                    continue;
                }
                let q = (lp + h[j] - log_z).exp();
                mean += q * j as f64 / k as f64;
            }
            for (i, &st) in steps.iter().enumerate() {
                if st == k {
                    means[i] = mean;
                }
            }
        }
    };
    fill(n, &h);
    let mut prev = vec![NEG_INF; n + 1];
    for k in (min_step..n).rev() {
        let kf = k as f64;
        prev.clear();
        prev.resize(k + 1, NEG_INF);
        for (j, slot) in prev.iter_mut().enumerate() {
            let p = u.value(j as f64 / kf);
            let up = ln_prob(p);
            let stay = ln_prob(1.0 - p);
            let mut acc = NEG_INF;
            if stay != NEG_INF && h[j] != NEG_INF {
                acc = log_add_exp(acc, stay + h[j]);
            }
            if up != NEG_INF && h[j + 1] != NEG_INF {
                acc = log_add_exp(acc, up + h[j + 1]);
            }
            *slot = acc;
        }
        std::mem::swap(&mut h, &mut prev);
        fill(k, &h);
    }
    Ok(means)
}
