//! Explicit perturbation bounds.
//!
//! Each bound comes back as a [`DeltaCertificate`]: for the forward bounds,
//! every coefficient perturbation strictly below `delta_sup` satisfies the
//! conclusion at the certificate's `epsilon`; for the inverse bound, every
//! root perturbation strictly below `epsilon` keeps the monic coefficients
//! within `delta_sup`.
//!
//! The inductive bound shrinks roughly like `δ_{n-1}^n` per degree and
//! leaves the `f64` range around degree 5, so the recursion runs on natural
//! logarithms. Certificates carry `log10_*` companions that stay exact when
//! the plain value flushes to zero.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::alignment::is_epsilon_aligned;
use crate::poly::Polynomial;
use crate::roots::{cluster_roots, find_roots, separation, FindRootsOptions, RootClusters, DEFAULT_CLUSTER_TOL};
use crate::scalar::{check_finite, check_positive, exp, ln, powi, Scalar};
use crate::{Error, Result};

/// Largest double below 1; the zero-root bound needs `ε < 1`.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ZeroRoot,
    AllRoots,
    Inductive,
    Inverse,
}

/// One deflation step of [`delta_aligned`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLevel {
    /// Degree of the quotient after dividing out `z - zeta_1`.
    pub deflated_degree: usize,
    /// Radius certified at this level (after clamping).
    pub epsilon: f64,
    pub zeta_1: Scalar,
    pub kappa: f64,
    /// Deformation budget of the quotient; `None` when the quotient is a
    /// constant and any budget works.
    pub lambda: Option<f64>,
    pub delta_1: f64,
    pub log10_kappa: f64,
    pub log10_lambda: Option<f64>,
    pub log10_delta_1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaCertificate {
    pub epsilon: f64,
    /// Supremum: only `δ < delta_sup` is certified.
    pub delta_sup: f64,
    /// `log10(delta_sup)`, finite even when `delta_sup` underflows to 0.
    pub log10_delta_sup: f64,
    pub method: Method,
    pub trace: Vec<TraceLevel>,
}

fn log10_of_ln(x: f64) -> f64 {
    x / core::f64::consts::LN_10
}

impl DeltaCertificate {
    fn new(epsilon: f64, delta_sup: f64, ln_delta_sup: f64, method: Method, trace: Vec<TraceLevel>) -> Self {
        DeltaCertificate {
            epsilon,
            delta_sup,
            log10_delta_sup: log10_of_ln(ln_delta_sup),
            method,
            trace,
        }
    }

    /// Natural log of `delta_sup`.
    pub fn ln_delta_sup(&self) -> f64 {
        self.log10_delta_sup * core::f64::consts::LN_10
    }
}

/// Root-finding parameters used wherever a bound needs the roots of `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundOptions {
    pub roots: FindRootsOptions,
    pub cluster_tol: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            roots: FindRootsOptions::default(),
            cluster_tol: DEFAULT_CLUSTER_TOL,
        }
    }
}

impl BoundOptions {
    fn clusters(&self, f: &Polynomial) -> Result<RootClusters> {
        cluster_roots(&find_roots(f, &self.roots)?, self.cluster_tol)
    }
}

fn require_degree(f: &Polynomial) -> Result<usize> {
    match f.degree() {
        0 => Err(Error::DegreeTooLow { got: 0, min: 1 }),
        n => Ok(n),
    }
}

/// Bound for `f = a_n z^n`: `δ_sup = ε^n |a_n| / (2n)`, `0 < ε < 1`.
///
/// Any `g` of degree `n` whose coefficients are within `δ < δ_sup` of `f`
/// has all of its roots in `|ω| < ε`.
pub fn delta_zero_root(f: &Polynomial, eps: f64) -> Result<DeltaCertificate> {
    let n = require_degree(f)?;
    if !f.is_pure_power() {
        return Err(Error::NotPurePower);
    }
    check_positive(eps, "epsilon")?;
    if eps >= 1.0 {
        return Err(Error::param("epsilon", eps, "zero-root bound needs epsilon < 1"));
    }
    let delta_sup = powi(eps, n as i32) * f.leading().norm() / (2.0 * n as f64);
    let ln_delta = n as f64 * ln(eps) + ln(f.leading().norm()) - ln(2.0 * n as f64);
    Ok(DeltaCertificate::new(eps, delta_sup, ln_delta, Method::ZeroRoot, Vec::new()))
}

/// `M = max(1, |ζ_1|, ..., |ζ_ℓ|)`.
fn root_scale(rc: &RootClusters) -> f64 {
    rc.max_modulus().max(1.0)
}

/// `(δ_sup, ln δ_sup)` of the all-roots bound at radius `eps` (given with
/// its logarithm, which may lie below the `f64` range of `eps` itself).
fn all_roots_delta(f: &Polynomial, eps: f64, ln_eps: f64, m: f64) -> Result<(f64, f64)> {
    if eps >= m {
        return Err(Error::param("epsilon", eps, "all-roots bound needs epsilon < M = max(1, |roots|)"));
    }
    let n = f.degree();
    let factor = f.leading().norm() / (2.0 * (n + 1) as f64);
    Ok((factor * powi(eps / m, n as i32), ln(factor) + n as f64 * (ln_eps - ln(m))))
}

/// [`delta_all_roots_with`] with default root-finding options.
pub fn delta_all_roots(f: &Polynomial, eps: f64) -> Result<DeltaCertificate> {
    delta_all_roots_with(f, eps, &BoundOptions::default())
}

/// Bound `δ_sup = |a_n| / (2(n+1)) (ε/M)^n` with `M = max(1, max |ζ_j|)`,
/// valid for `0 < ε < M`: every root of `f` then has a root of any
/// `δ`-deformation within `ε`.
pub fn delta_all_roots_with(f: &Polynomial, eps: f64, opts: &BoundOptions) -> Result<DeltaCertificate> {
    require_degree(f)?;
    check_positive(eps, "epsilon")?;
    let m = root_scale(&opts.clusters(f)?);
    let (delta, ln_delta) = all_roots_delta(f, eps, ln(eps), m)?;
    Ok(DeltaCertificate::new(eps, delta, ln_delta, Method::AllRoots, Vec::new()))
}

/// `G(κ)` with `B(κ) = κ G(κ)` bounding `max_i |φ_i(u, v) - φ_i(a, ζ)|`
/// over the box `|u_k - a_k| < κ`, `|v - ζ| < κ`, for `κ <= |ζ|/2`.
///
/// Term by term, with `m = i + 1 - k`:
/// `|u_k v^{-m} - a_k ζ^{-m}| <= κ |v|^{-m} + |a_k| |v^{-m} - ζ^{-m}|`
/// and `|v^{-m} - ζ^{-m}| <= m κ (|ζ|+κ)^{m-1} / ((|ζ|-κ)^m |ζ|^m)`.
/// `G` is increasing in `κ`.
fn deflation_growth(abs_coeffs: &[f64], r: f64, kappa: f64) -> f64 {
    let lo = r - kappa;
    let hi = r + kappa;
    let mut worst: f64 = 0.0;
    for i in 0..abs_coeffs.len() - 1 {
        let mut sum = 0.0;
        for (k, &ak) in abs_coeffs[..=i].iter().enumerate() {
            let m = (i + 1 - k) as i32;
            let inv_lo = powi(lo, -m);
            sum += inv_lo + ak * m as f64 * powi(hi, m - 1) * inv_lo / powi(r, m);
        }
        worst = worst.max(sum);
    }
    worst
}

/// `(κ, ln κ)` for a budget given as `ln λ`. The plain `κ` is exactly the
/// cap `|ζ|/2` when that is feasible and may underflow otherwise.
fn kappa_ln(abs_coeffs: &[f64], r: f64, ln_lambda: f64) -> (f64, f64) {
    let cap = 0.5 * r;
    let g_cap = deflation_growth(abs_coeffs, r, cap);
    if ln(cap) + ln(g_cap) <= ln_lambda {
        return (cap, ln(cap));
    }
    // G(κ) <= G(cap) on the whole range, so λ / G(cap) is feasible.
    let log_bound = |ln_k: f64| ln_k + ln(deflation_growth(abs_coeffs, r, exp(ln_k)));
    let mut lo = ln_lambda - ln(g_cap);
    let mut hi = ln(cap);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if log_bound(mid) <= ln_lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (exp(lo), lo)
}

/// Radius `κ ∈ (0, |ζ_1|/2]` such that whenever `|b_i - a_i| < κ` for all
/// `i` and `|ω_1 - ζ_1| < κ`, the closed-form deflated coefficients satisfy
/// `|φ_i(b, ω_1) - φ_i(a, ζ_1)| < λ`.
///
/// The triangle-inequality bound `B(κ)` is solved for `B(κ) = λ` by
/// bisection. `λ = +∞` is accepted and yields the cap `|ζ_1|/2`.
pub fn kappa_deflation(f: &Polynomial, zeta_1: Scalar, lambda: f64) -> Result<f64> {
    let (abs, r) = kappa_inputs(f, zeta_1)?;
    if !(lambda > 0.0) {
        return Err(Error::param("lambda", lambda, "must be > 0"));
    }
    Ok(kappa_ln(&abs, r, ln(lambda)).0)
}

fn kappa_inputs(f: &Polynomial, zeta_1: Scalar) -> Result<(Vec<f64>, f64)> {
    require_degree(f)?;
    check_finite(zeta_1, "zeta_1")?;
    let r = zeta_1.norm();
    if r == 0.0 {
        return Err(Error::ZeroDeflationPoint);
    }
    Ok((f.coeffs().iter().map(|a| a.norm()).collect(), r))
}

/// [`delta_aligned_with`] with default root-finding options.
pub fn delta_aligned(f: &Polynomial, eps: f64) -> Result<DeltaCertificate> {
    delta_aligned_with(f, eps, &BoundOptions::default())
}

/// `δ(ε)` such that every `δ`-deformation of `f` is `ε`-aligned to `f`.
///
/// Pure powers delegate to [`delta_zero_root`] (with `ε` pulled below 1).
/// Otherwise `ε` is clamped to at most half the root separation and at most
/// the smallest nonzero root modulus; the certificate reports the clamped
/// value. The nonzero root of largest modulus is divided out, the quotient
/// is certified recursively to get `λ`, and the level's bound is
/// `min(κ(λ), δ_1(κ))` with `δ_1` the all-roots bound at radius `κ`.
pub fn delta_aligned_with(f: &Polynomial, eps: f64, opts: &BoundOptions) -> Result<DeltaCertificate> {
    require_degree(f)?;
    check_positive(eps, "epsilon")?;
    if f.is_pure_power() {
        return delta_zero_root(f, eps.min(BELOW_ONE));
    }

    let rc = opts.clusters(f)?;
    let mut eps = eps;
    if let Ok(sep) = separation(&rc) {
        eps = eps.min(0.5 * sep);
    }
    let mut zeta_1: Option<Scalar> = None;
    for c in rc.iter().filter(|c| c.center.norm() > 0.0) {
        eps = eps.min(c.center.norm());
        if zeta_1.map_or(true, |z| c.center.norm() > z.norm()) {
            zeta_1 = Some(c.center);
        }
    }
    // Not a pure power, so some coefficient below a_n is nonzero and at
    // least one root is nonzero.
    let zeta_1 = zeta_1.ok_or(Error::NotPurePower)?;

    let quotient = f.deflate(zeta_1)?;
    let inner = if quotient.degree() == 0 {
        None
    } else {
        Some(delta_aligned_with(&quotient, eps, opts)?)
    };
    let (lambda, ln_lambda) = match &inner {
        Some(c) => (Some(c.delta_sup), c.ln_delta_sup()),
        None => (None, f64::INFINITY),
    };

    let (abs, r) = kappa_inputs(f, zeta_1)?;
    let (mut kappa, mut ln_kappa) = kappa_ln(&abs, r, ln_lambda);
    if kappa >= eps {
        kappa = eps;
        ln_kappa = ln(eps);
    }
    let (delta_1, ln_delta_1) = all_roots_delta(f, kappa, ln_kappa, root_scale(&rc))?;

    let mut trace = vec![TraceLevel {
        deflated_degree: quotient.degree(),
        epsilon: eps,
        zeta_1,
        kappa,
        lambda,
        delta_1,
        log10_kappa: log10_of_ln(ln_kappa),
        log10_lambda: inner.as_ref().map(|c| c.log10_delta_sup),
        log10_delta_1: log10_of_ln(ln_delta_1),
    }];
    if let Some(mut c) = inner {
        trace.append(&mut c.trace);
    }
    Ok(DeltaCertificate::new(
        eps,
        kappa.min(delta_1),
        ln_kappa.min(ln_delta_1),
        Method::Inductive,
        trace,
    ))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// [`epsilon_inverse_with`] with default root-finding options.
pub fn epsilon_inverse(f: &Polynomial, delta: f64) -> Result<DeltaCertificate> {
    epsilon_inverse_with(f, delta, &BoundOptions::default())
}

/// `ε(δ)` for the inverse direction: if every root of `f` moves by less
/// than `ε`, the monic coefficients move by less than `δ`.
///
/// `σ_k` is Lipschitz on the polydisc of radius `R + 1` (`R` the largest
/// root modulus) with constant `L_k = C(n,k) k (R+1)^{k-1}`, so
/// `ε = min(1, δ / max_k L_k)`. With two or more distinct roots `ε` is also
/// capped at half the separation, where alignment pins down a matching.
pub fn epsilon_inverse_with(f: &Polynomial, delta: f64, opts: &BoundOptions) -> Result<DeltaCertificate> {
    let n = require_degree(f)?;
    check_positive(delta, "delta")?;
    let rc = opts.clusters(f)?;
    let grow = rc.max_modulus() + 1.0;
    let lipschitz = (1..=n)
        .map(|k| binomial(n, k) * k as f64 * powi(grow, k as i32 - 1))
        .fold(0.0, f64::max);
    let mut eps = (delta / lipschitz).min(1.0);
    if let Ok(sep) = separation(&rc) {
        eps = eps.min(0.5 * sep);
    }
    Ok(DeltaCertificate::new(eps, delta, ln(delta), Method::Inverse, Vec::new()))
}

/// [`proportional_iff_always_aligned_check_with`] with default options.
pub fn proportional_iff_always_aligned_check(f: &Polynomial, g: &Polynomial, ladder: &[f64]) -> Result<bool> {
    proportional_iff_always_aligned_check_with(f, g, ladder, &BoundOptions::default())
}

/// Whether `g` is `ε`-aligned to `f` for every `ε` on a strictly
/// decreasing positive ladder. Descending to root-finder accuracy this
/// detects `g = c f`.
pub fn proportional_iff_always_aligned_check_with(
    f: &Polynomial,
    g: &Polynomial,
    ladder: &[f64],
    opts: &BoundOptions,
) -> Result<bool> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            left: f.degree(),
            right: g.degree(),
        });
    }
    require_degree(f)?;
    if ladder.is_empty() {
        return Err(Error::param("ladder", 0.0, "must not be empty"));
    }
    for &e in ladder {
        check_positive(e, "ladder step")?;
    }
    if let Some(w) = ladder.windows(2).find(|w| !(w[1] < w[0])) {
        return Err(Error::param("ladder", w[1], "must be strictly decreasing"));
    }
    let rc = opts.clusters(f)?;
    let g_roots = find_roots(g, &opts.roots)?;
    for &e in ladder {
        if !is_epsilon_aligned(&rc, &g_roots, e)?.aligned {
            return Ok(false);
        }
    }
    Ok(true)
}
