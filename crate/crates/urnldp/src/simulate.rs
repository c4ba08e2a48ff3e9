//! Monte Carlo sampling of urn paths, with reproducible per-trial RNG
//! substreams and support for horizon-indexed urn-function sequences.
//!
//! Reproducibility contract: the generator is ChaCha8 seeded from the run
//! seed, and trial i uses stream i. Identical (seed, config) pairs produce
//! byte-identical paths regardless of thread count, because the reduction
//! over trials is order-independent (integer histogram sums).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::urn::UrnFunction;

/// One sampled path: X_k for k = 1..n.
#[derive(Debug, Clone, Serialize)]
pub struct PathSample {
    pub n: usize,
    pub counts: Vec<u32>,
    pub seed: u64,
}

impl PathSample {
    /// Admissibility: increments in {0,1} and 0 <= X_k <= k.
    pub fn is_admissible(&self) -> bool {
        if self.counts.len() != self.n {
            return false;
        }
        let mut prev = None;
        for (i, &x) in self.counts.iter().enumerate() {
            let k = (i + 1) as u32;
            if x > k {
                return false;
            }
            if let Some(p) = prev {
                if x != p && x != p + 1 {
                    return false;
                }
            }
            prev = Some(x);
        }
        true
    }

    pub fn terminal(&self) -> u32 {
        *self.counts.last().expect("non-empty path")
    }
}

/// Urn selection for a run at horizon n: a homogeneous urn uses the same
/// function at every horizon, an inhomogeneous family picks pi_n.
pub enum HorizonUrn<'a> {
    Fixed(&'a UrnFunction),
    PerHorizon(&'a (dyn Fn(usize) -> UrnFunction + Sync)),
}

impl<'a> HorizonUrn<'a> {
    pub fn resolve(&self, n: usize) -> Cow<'a, UrnFunction> {
        match self {
            HorizonUrn::Fixed(u) => Cow::Borrowed(*u),
            HorizonUrn::PerHorizon(f) => Cow::Owned(f(n)),
        }
    }
}

fn sample_with_rng(u: &UrnFunction, n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut counts = Vec::with_capacity(n);
    // half-half first ball
    let mut x: u32 = rng.gen_bool(0.5) as u32;
    counts.push(x);
    for k in 1..n {
        let p = u.value(x as f64 / k as f64);
        if p >= 1.0 || (p > 0.0 && rng.gen_bool(p)) {
            x += 1;
        }
        counts.push(x);
    }
    counts
}

/// Sample one path of horizon n; reproducible in `seed`.
pub fn sample_path(urn: &HorizonUrn, n: usize, seed: u64) -> Result<PathSample> {
    if n < 1 {
        return Err(Error::validation("horizon n must be at least 1".into()));
    }
    let u = urn.resolve(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    Ok(PathSample {
        n,
        counts: sample_with_rng(&u, n, &mut rng),
        seed,
    })
}

/// Histogram of terminal counts over independent trials; trial i draws from
/// RNG stream i, so the ensemble is reproducible and embarrassingly parallel.
pub fn empirical_terminal(
    urn: &HorizonUrn,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    if n < 1 {
        return Err(Error::validation("horizon n must be at least 1".into()));
    }
    if trials < 1 {
        return Err(Error::validation("need at least one trial".into()));
    }
    let u = urn.resolve(n);
    let u = u.as_ref();
    let hist = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut acc, i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                let mut x: u32 = rng.gen_bool(0.5) as u32;
                for k in 1..n {
                    let p = u.value(x as f64 / k as f64);
                    if p >= 1.0 || (p > 0.0 && rng.gen_bool(p)) {
                        x += 1;
                    }
                }
                acc[x as usize] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(hist)
}

/// Total-variation distance between an empirical histogram and an exact law.
pub fn tv_distance(hist: &[u64], exact_probs: &[f64]) -> f64 {
    let total: u64 = hist.iter().sum();
    let t = total as f64;
    0.5 * hist
        .iter()
        .zip(exact_probs)
        .map(|(&h, &p)| (h as f64 / t - p).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exact::{terminal_distribution, InitCondition};
    use crate::numerics::special::gamma_q;

    #[test]
    fn identical_seed_gives_identical_path() {
        let u = catalog::majority3();
        let a = sample_path(&HorizonUrn::Fixed(&u), 500, 42).unwrap();
        let b = sample_path(&HorizonUrn::Fixed(&u), 500, 42).unwrap();
        assert_eq!(a.counts, b.counts);
        let c = sample_path(&HorizonUrn::Fixed(&u), 500, 43).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn sampled_paths_are_admissible() {
        for (i, u) in [
            catalog::majority3(),
            catalog::subtractive_example(),
            crate::urn::UrnFunction::identity(),
        ]
        .iter()
        .enumerate()
        {
            let p = sample_path(&HorizonUrn::Fixed(u), 1000, 7 + i as u64).unwrap();
            assert!(p.is_admissible());
        }
    }

    #[test]
    fn identity_urn_locks_after_first_ball() {
        let u = crate::urn::UrnFunction::identity();
        let p = sample_path(&HorizonUrn::Fixed(&u), 100, 5).unwrap();
        let first = p.counts[0];
        for (i, &x) in p.counts.iter().enumerate() {
            let k = i as u32 + 1;
            assert!(x == if first == 1 { k } else { 0 });
        }
    }

    #[test]
    fn constant_half_terminal_near_half() {
        let u = crate::urn::UrnFunction::constant(0.5).unwrap();
        let p = sample_path(&HorizonUrn::Fixed(&u), 100_000, 11).unwrap();
        let frac = p.terminal() as f64 / 100_000.0;
        assert!((frac - 0.5).abs() < 0.01, "frac = {frac}");
    }

    #[test]
    fn majority_urn_locks_in() {
        let u = catalog::majority3();
        let hist = empirical_terminal(&HorizonUrn::Fixed(&u), 1000, 10_000, 3).unwrap();
        let middle: u64 = hist[400..=600].iter().sum();
        assert!(
            (middle as f64) / 10_000.0 <= 0.05,
            "middle mass {middle} too heavy"
        );
    }

    #[test]
    fn empirical_matches_exact_in_tv() {
        let u = crate::urn::UrnFunction::constant(0.3).unwrap();
        let hist = empirical_terminal(&HorizonUrn::Fixed(&u), 50, 1_000_000, 1).unwrap();
        let exact = terminal_distribution(&u, 50, InitCondition::Uniform)
            .unwrap()
            .probabilities();
        let tv = tv_distance(&hist, &exact);
        assert!(tv <= 0.003, "tv = {tv}");
    }

    #[test]
    fn chi_square_sanity_against_exact_law() {
        for u in [crate::urn::UrnFunction::constant(0.3).unwrap(), catalog::majority3()] {
            let n = 30;
            let trials = 1_000_000u64;
            let hist = empirical_terminal(&HorizonUrn::Fixed(&u), n, trials, 9).unwrap();
            let exact = terminal_distribution(&u, n, InitCondition::Uniform)
                .unwrap()
                .probabilities();
            // merge cells with expectation below 5 into a shared bucket
            let mut stat = 0.0;
            let mut df: i64 = -1;
            let mut pool_obs = 0.0;
            let mut pool_exp = 0.0;
            for k in 0..=n {
                let e = exact[k] * trials as f64;
                let o = hist[k] as f64;
                if e >= 5.0 {
                    stat += (o - e) * (o - e) / e;
                    df += 1;
                } else {
                    pool_obs += o;
                    pool_exp += e;
                }
            }
            if pool_exp > 0.0 {
                stat += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
                df += 1;
            }
            let p_value = gamma_q(df as f64 / 2.0, stat / 2.0);
            assert!(p_value > 1e-4, "chi2 stat {stat:.2} df {df} p {p_value:.2e}");
        }
    }

    #[test]
    fn inhomogeneous_family_selects_by_horizon() {
        let family = |n: usize| crate::urn::UrnFunction::constant(0.3 + 1.0 / n as f64).unwrap();
        let sel = HorizonUrn::PerHorizon(&family);
        let u = sel.resolve(2000);
        assert!((u.value(0.5) - 0.3005).abs() < 1e-12);
        // exact finite-n cumulant under the selected member approaches the
        // homogeneous limit
        let d = terminal_distribution(u.as_ref(), 2000, InitCondition::Uniform).unwrap();
        let psi = crate::exact::psi_n(&d, 1.0);
        let limit = (0.7f64 + 0.3 * 1f64.exp()).ln();
        assert!((psi - limit).abs() < 0.01, "psi = {psi}, limit = {limit}");
    }
}
