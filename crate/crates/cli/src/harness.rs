//! Empirical checks of the certified bounds.
//!
//! A fuzz run computes a certificate for `f`, draws random perturbations at
//! `safety * bound`, and checks the theorem's conclusion on each one with
//! the root finder and the alignment test. Trial `t` draws from its own
//! ChaCha stream `(seed, t)`, so results do not depend on scheduling.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rootcont_core::alignment::is_epsilon_aligned_with_slack;
use rootcont_core::bounds::{delta_aligned_with, delta_all_roots_with, epsilon_inverse_with};
use rootcont_core::{
    cluster_roots, delta_zero_root, dist, find_roots, BoundOptions, DeltaCertificate, FindRootsOptions, Polynomial,
    RootClusters, RootSequence, Scalar,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack added to ball radii to absorb root-finder error.
pub const DEFAULT_SLACK: f64 = 1e-7;
pub const DEFAULT_SAFETY: f64 = 0.9;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] rootcont_core::Error),
    #[error("invalid fuzz configuration: {0}")]
    Config(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[derive(clap::ValueEnum)]
#[value(rename_all = "kebab-case")]
pub enum Theorem {
    /// `f = a_n z^n`: all roots of `g` in `|ω| < ε`.
    ZeroRoot,
    /// Every root of `f` has a root of `g` within `ε`.
    AllRoots,
    /// `g` is `ε`-aligned to `f` with exact per-ball counts.
    Aligned,
    /// Root perturbations below `ε(δ)` keep monic coefficients within `δ`.
    /// The configured `epsilon` is read as `δ`.
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub theorem: Theorem,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub safety: f64,
    pub slack: f64,
}

impl FuzzConfig {
    pub fn new(theorem: Theorem, epsilon: f64, trials: usize, seed: u64) -> Self {
        FuzzConfig {
            theorem,
            epsilon,
            trials,
            seed,
            safety: DEFAULT_SAFETY,
            slack: DEFAULT_SLACK,
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be positive"));
        }
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(HarnessError::Config("safety must lie in (0, 1]"));
        }
        if !(self.slack.is_finite() && self.slack >= 0.0) {
            return Err(HarnessError::Config("slack must be finite and >= 0"));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(HarnessError::Config("epsilon must be finite and > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub trials: usize,
    pub violations: usize,
    /// Minimum over trials of the certified radius minus the observed one.
    pub worst_margin: f64,
    pub empirical_delta_sup: Option<f64>,
    pub seed: u64,
    /// Radius of the sampled discs: `safety * delta_sup` for the forward
    /// theorems, `safety * epsilon` for the inverse one.
    pub perturbation_radius: f64,
    pub certificate: DeltaCertificate,
    pub config: FuzzConfig,
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn in_disc(rng: &mut impl Rng, radius: f64) -> Scalar {
    let r = radius * rng.gen::<f64>().sqrt();
    Scalar::from_polar(r, TAU * rng.gen::<f64>())
}

/// Independent uniform draws in the disc of radius `delta` per coefficient.
/// A leading coefficient that lands exactly on zero is redrawn.
pub fn sample_deformation(f: &Polynomial, delta: f64, rng: &mut impl Rng) -> Polynomial {
    let n = f.degree();
    let mut coeffs: Vec<Scalar> = f.coeffs().iter().map(|&a| a + in_disc(rng, delta)).collect();
    while coeffs[n] == Scalar::new(0.0, 0.0) {
        coeffs[n] = f.coeffs()[n] + in_disc(rng, delta);
    }
    Polynomial::new(coeffs).expect("finite perturbation with nonzero leading coefficient")
}

/// What a single trial checks, with everything derived from `f` precomputed.
enum Check {
    ZeroRoot { eps: f64 },
    AllRoots { eps: f64, centers: Vec<Scalar> },
    Aligned { eps: f64, clusters: RootClusters },
    Inverse { delta: f64, roots: RootSequence, monic: Vec<Scalar>, leading: Scalar },
}

struct Outcome {
    violated: bool,
    margin: f64,
}

impl Check {
    fn run(&self, f: &Polynomial, radius: f64, slack: f64, rng: &mut ChaCha8Rng) -> rootcont_core::Result<Outcome> {
        let opts = FindRootsOptions {
            seed: rng.gen(),
            ..Default::default()
        };
        match self {
            Check::ZeroRoot { eps } => {
                let g = sample_deformation(f, radius, rng);
                let worst = find_roots(&g, &opts)?.max_modulus();
                Ok(Outcome {
                    violated: worst >= eps + slack,
                    margin: eps - worst,
                })
            }
            Check::AllRoots { eps, centers } => {
                let g = sample_deformation(f, radius, rng);
                let roots = find_roots(&g, &opts)?;
                let worst = centers
                    .iter()
                    .map(|&z| roots.iter().map(|&w| dist(z, w)).fold(f64::INFINITY, f64::min))
                    .fold(0.0, f64::max);
                Ok(Outcome {
                    violated: worst >= eps + slack,
                    margin: eps - worst,
                })
            }
            Check::Aligned { eps, clusters } => {
                let g = sample_deformation(f, radius, rng);
                let roots = find_roots(&g, &opts)?;
                let rep = is_epsilon_aligned_with_slack(clusters, &roots, *eps, slack)?;
                let exact = rep.counts.iter().zip(clusters.iter()).all(|(&k, c)| k == c.mult);
                Ok(Outcome {
                    violated: !(rep.aligned && exact),
                    margin: eps - rep.max_displacement,
                })
            }
            Check::Inverse { delta, roots, monic, leading } => {
                let moved: Vec<Scalar> = roots.iter().map(|&z| z + in_disc(rng, radius)).collect();
                let scale = Scalar::from_polar(0.5 + 1.5 * rng.gen::<f64>(), TAU * rng.gen::<f64>());
                let g = Polynomial::from_roots(*leading * scale, &RootSequence::new(moved))?;
                let dev = g
                    .monic_coeffs()
                    .iter()
                    .zip(monic)
                    .map(|(&b, &a)| dist(a, b))
                    .fold(0.0, f64::max);
                Ok(Outcome {
                    violated: dev >= *delta,
                    margin: delta - dev,
                })
            }
        }
    }
}

fn prepare(f: &Polynomial, cfg: &FuzzConfig, opts: &BoundOptions) -> Result<(DeltaCertificate, Check, f64), HarnessError> {
    let clusters = || -> rootcont_core::Result<RootClusters> {
        cluster_roots(&find_roots(f, &opts.roots)?, opts.cluster_tol)
    };
    Ok(match cfg.theorem {
        Theorem::ZeroRoot => {
            let cert = delta_zero_root(f, cfg.epsilon)?;
            let radius = cfg.safety * cert.delta_sup;
            (cert, Check::ZeroRoot { eps: cfg.epsilon }, radius)
        }
        Theorem::AllRoots => {
            let cert = delta_all_roots_with(f, cfg.epsilon, opts)?;
            let centers = clusters()?.iter().map(|c| c.center).collect();
            let radius = cfg.safety * cert.delta_sup;
            (cert, Check::AllRoots { eps: cfg.epsilon, centers }, radius)
        }
        Theorem::Aligned => {
            let cert = delta_aligned_with(f, cfg.epsilon, opts)?;
            let radius = cfg.safety * cert.delta_sup;
            let check = Check::Aligned {
                eps: cert.epsilon,
                clusters: clusters()?,
            };
            (cert, check, radius)
        }
        Theorem::Inverse => {
            let cert = epsilon_inverse_with(f, cfg.epsilon, opts)?;
            let radius = cfg.safety * cert.epsilon;
            let check = Check::Inverse {
                delta: cfg.epsilon,
                roots: find_roots(f, &opts.roots)?,
                monic: f.monic_coeffs(),
                leading: f.leading(),
            };
            (cert, check, radius)
        }
    })
}

/// Runs `cfg.trials` perturbations of `f` against the selected theorem's
/// certificate and counts violations of its conclusion.
pub fn fuzz_theorem(f: &Polynomial, cfg: &FuzzConfig) -> Result<FuzzReport, HarnessError> {
    cfg.validate()?;
    let (certificate, check, radius) = prepare(f, cfg, &BoundOptions::default())?;
    let outcomes: Vec<Outcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| check.run(f, radius, cfg.slack, &mut trial_rng(cfg.seed, t)))
        .collect::<rootcont_core::Result<_>>()?;
    Ok(FuzzReport {
        trials: cfg.trials,
        violations: outcomes.iter().filter(|o| o.violated).count(),
        worst_margin: outcomes.iter().map(|o| o.margin).fold(f64::INFINITY, f64::min),
        empirical_delta_sup: None,
        seed: cfg.seed,
        perturbation_radius: radius,
        certificate,
        config: cfg.clone(),
    })
}

/// Number of trials at coefficient radius `delta` that fail alignment.
/// Root-finder failures count as failures here.
fn alignment_failures(f: &Polynomial, check: &Check, delta: f64, trials: usize, seed: u64) -> usize {
    (0..trials)
        .into_par_iter()
        .filter(|&t| {
            check
                .run(f, delta, DEFAULT_SLACK, &mut trial_rng(seed, t))
                .map_or(true, |o| o.violated)
        })
        .count()
}

/// Largest coefficient radius at which `trials_per_level` random
/// deformations all stay aligned at the certified `ε`, found by doubling
/// then bisecting from the certified `delta_sup`. Never below it.
pub fn estimate_empirical_delta(
    f: &Polynomial,
    eps: f64,
    trials_per_level: usize,
    seed: u64,
) -> Result<f64, HarnessError> {
    estimate_with_certificate(f, eps, trials_per_level, seed).map(|(_, d)| d)
}

/// Same as [`estimate_empirical_delta`], also returning the certificate.
pub fn estimate_with_certificate(
    f: &Polynomial,
    eps: f64,
    trials_per_level: usize,
    seed: u64,
) -> Result<(DeltaCertificate, f64), HarnessError> {
    let cfg = FuzzConfig::new(Theorem::Aligned, eps, trials_per_level, seed);
    cfg.validate()?;
    let (cert, check, _) = prepare(f, &cfg, &BoundOptions::default())?;
    // The leading coefficient may not be allowed to reach zero.
    let ceiling = f.leading().norm();
    let mut lo = cert.delta_sup;
    // An underflowed certificate starts at the coefficients' rounding scale.
    let mut hi = if lo > 0.0 { 2.0 * lo } else { f64::EPSILON * f.max_abs_coeff() };
    for _ in 0..64 {
        if hi >= ceiling || alignment_failures(f, &check, hi, trials_per_level, seed) > 0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    hi = hi.min(ceiling);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if alignment_failures(f, &check, mid, trials_per_level, seed) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!(lo >= cert.delta_sup);
    Ok((cert, lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn zero_root_quadratic() {
        let f = Polynomial::monomial(c(1.0, 0.0), 2).unwrap();
        let rep = fuzz_theorem(&f, &FuzzConfig::new(Theorem::ZeroRoot, 0.5, 1000, 42)).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.worst_margin > 0.0);
        assert_eq!(rep.certificate.delta_sup, 0.0625);
    }

    #[test]
    fn aligned_quadratic() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let rep = fuzz_theorem(&f, &FuzzConfig::new(Theorem::Aligned, 0.1, 1000, 7)).unwrap();
        assert_eq!(rep.violations, 0);
    }

    #[test]
    fn rejects_bad_config() {
        let f = Polynomial::from_real(&[-1.0, 1.0]).unwrap();
        let mut cfg = FuzzConfig::new(Theorem::AllRoots, 0.1, 0, 1);
        assert!(matches!(fuzz_theorem(&f, &cfg), Err(HarnessError::Config(_))));
        cfg.trials = 10;
        cfg.safety = 1.5;
        assert!(matches!(fuzz_theorem(&f, &cfg), Err(HarnessError::Config(_))));
    }

    #[test]
    fn propagates_certificate_errors() {
        let f = Polynomial::from_real(&[-1.0, 1.0]).unwrap();
        let cfg = FuzzConfig::new(Theorem::ZeroRoot, 0.1, 10, 1);
        assert!(matches!(fuzz_theorem(&f, &cfg), Err(HarnessError::Core(rootcont_core::Error::NotPurePower))));
    }

    #[test]
    fn unsafe_radius_finds_violations() {
        // far above the certified bound the conclusion must break
        let f = Polynomial::from_real(&[-1.0, 1.0]).unwrap();
        let (_, check, _) = prepare(&f, &FuzzConfig::new(Theorem::AllRoots, 0.1, 1, 0), &BoundOptions::default()).unwrap();
        assert!(alignment_failures(&f, &check, 0.5, 200, 3) > 0);
    }

    #[test]
    fn reproducible() {
        let f = Polynomial::from_real(&[0.5, -1.0, 0.0, 1.0]).unwrap();
        let cfg = FuzzConfig::new(Theorem::AllRoots, 0.2, 300, 11);
        assert_eq!(fuzz_theorem(&f, &cfg).unwrap(), fuzz_theorem(&f, &cfg).unwrap());
    }

    #[test]
    fn estimate_linear() {
        let f = Polynomial::from_real(&[-1.0, 1.0]).unwrap();
        let est = estimate_empirical_delta(&f, 0.1, 500, 1).unwrap();
        assert!(est >= 0.025);
        // the exact tolerance of z - 1 at ε = 0.1 is 0.1/2.1
        assert!(est <= 0.1 / 2.1 * 1.2, "{est}");
    }

    #[test]
    fn estimate_square() {
        let f = Polynomial::monomial(c(1.0, 0.0), 2).unwrap();
        assert!(estimate_empirical_delta(&f, 0.5, 300, 2).unwrap() >= 0.0625);
    }

    #[test]
    fn estimate_at_separation_boundary() {
        // ε exactly half the separation of ±1
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let cert = delta_aligned_with(&f, 1.0, &BoundOptions::default()).unwrap();
        assert!(estimate_empirical_delta(&f, 1.0, 200, 3).unwrap() >= cert.delta_sup);
    }
}
