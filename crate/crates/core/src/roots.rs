//! All-roots solver and the passage from a root sequence to distinct roots
//! with multiplicities.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::ops::Deref;

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::scalar::{check_finite, check_positive, dist, Scalar};
use crate::{Error, Result};

/// Default clustering distance for turning computed roots into distinct
/// roots. Multiplicity-`m` roots are only located to about `tol^(1/m)`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// The `n` roots of a degree-`n` polynomial, repeated by multiplicity.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootSequence(Vec<Scalar>);

impl RootSequence {
    pub fn new(roots: Vec<Scalar>) -> Self {
        RootSequence(roots)
    }

    pub fn from_real(roots: &[f64]) -> Self {
        RootSequence(roots.iter().map(|&r| Scalar::new(r, 0.0)).collect())
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Scalar> {
        self.0
    }

    /// Largest modulus, 0 for an empty sequence.
    pub fn max_modulus(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Deref for RootSequence {
    type Target = [Scalar];

    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl From<Vec<Scalar>> for RootSequence {
    fn from(v: Vec<Scalar>) -> Self {
        RootSequence(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub center: Scalar,
    pub mult: usize,
}

/// Distinct roots `ζ_j` with multiplicities `μ_j`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootClusters(Vec<Cluster>);

impl RootClusters {
    /// Builds clusters directly. Multiplicities must be positive.
    pub fn new(clusters: Vec<Cluster>) -> Result<Self> {
        for c in &clusters {
            check_finite(c.center, "cluster center")?;
            if c.mult == 0 {
                return Err(Error::param("mult", 0.0, "multiplicity must be positive"));
            }
        }
        Ok(RootClusters(clusters))
    }

    /// Each point its own simple root.
    pub fn simple(centers: &[Scalar]) -> Result<Self> {
        Self::new(centers.iter().map(|&center| Cluster { center, mult: 1 }).collect())
    }

    pub fn as_slice(&self) -> &[Cluster] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Cluster> {
        self.0.iter()
    }

    /// `Σ μ_j`.
    pub fn total_multiplicity(&self) -> usize {
        self.0.iter().map(|c| c.mult).sum()
    }

    pub fn max_modulus(&self) -> f64 {
        self.0.iter().map(|c| c.center.norm()).fold(0.0, f64::max)
    }

    /// Centers repeated by multiplicity.
    pub fn expanded(&self) -> RootSequence {
        RootSequence(
            self.0
                .iter()
                .flat_map(|c| core::iter::repeat(c.center).take(c.mult))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FindRootsOptions {
    pub max_iter: usize,
    /// Backward-error tolerance relative to `max|a_i| max(1,|ω|)^n`.
    pub tol: f64,
    /// Seeds the random phase of the initial iterates.
    pub seed: u64,
}

impl Default for FindRootsOptions {
    fn default() -> Self {
        FindRootsOptions {
            max_iter: 200,
            tol: 1e-12,
            seed: 0,
        }
    }
}

/// All `n` roots of `f` by Aberth–Ehrlich simultaneous iteration.
///
/// Exact zero roots (vanishing low-order coefficients) are split off first
/// and returned as exact zeros. Every returned `ω` satisfies
/// `|f(ω)| <= opts.tol * max|a_i| * max(1,|ω|)^n`; otherwise the call fails
/// with [`Error::NonConvergence`].
pub fn find_roots(f: &Polynomial, opts: &FindRootsOptions) -> Result<RootSequence> {
    let n = f.degree();
    if n == 0 {
        return Err(Error::DegreeTooLow { got: 0, min: 1 });
    }
    check_positive(opts.tol, "tol")?;

    let zeros = f.zero_root_multiplicity();
    let mut roots = vec![Scalar::zero(); zeros];
    let reduced = Polynomial::new(f.coeffs()[zeros..].to_vec())?;
    let mut iterations = 0;
    match reduced.degree() {
        0 => {}
        1 => {
            let c = reduced.coeffs();
            roots.push(-c[0] / c[1]);
        }
        _ => {
            let (found, iters) = aberth(&reduced, opts);
            iterations = iters;
            roots.extend(found);
        }
    }

    let worst = roots
        .iter()
        .map(|&w| f.eval(w).norm() / f.residual_scale(w))
        .fold(0.0, f64::max);
    if !(worst <= opts.tol) {
        return Err(Error::NonConvergence {
            iterations,
            worst_residual: worst,
        });
    }
    Ok(RootSequence(roots))
}

fn initial_iterates(f: &Polynomial, seed: u64) -> Vec<Scalar> {
    let n = f.degree();
    let lead = f.leading().norm();
    let radius = 1.0
        + f.coeffs()[..n]
            .iter()
            .map(|a| a.norm() / lead)
            .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let step = TAU / n as f64;
    let phase = unit * step;
    (0..n)
        .map(|j| Scalar::from_polar(radius, phase + step * j as f64))
        .collect()
}

/// Runs the iteration on a polynomial with nonzero constant term. A root is
/// frozen once `|f(z)|` falls to the Horner rounding level at `z`.
fn aberth(f: &Polynomial, opts: &FindRootsOptions) -> (Vec<Scalar>, usize) {
    let n = f.degree();
    let mut z = initial_iterates(f, opts.seed);
    let mut frozen = vec![false; n];
    let noise_factor = 4.0 * n as f64 * f64::EPSILON;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        let mut active = false;
        for j in 0..n {
            if frozen[j] {
                continue;
            }
            let zj = z[j];
            let (p, dp) = f.eval_with_derivative(zj);
            if p.norm() <= noise_factor * f.abs_eval(zj.norm()) {
                frozen[j] = true;
                continue;
            }
            active = true;
            let mut repulsion = Scalar::zero();
            for (k, &zk) in z.iter().enumerate() {
                if k != j && zk != zj {
                    repulsion += (zj - zk).inv();
                }
            }
            let step = if dp.is_zero() {
                // stationary point: kick off it
                Scalar::new(1e-3, 1e-3) * (1.0 + zj.norm())
            } else {
                let newton = p / dp;
                let denom = Scalar::new(1.0, 0.0) - newton * repulsion;
                if denom.is_zero() {
                    newton
                } else {
                    newton / denom
                }
            };
            if step.re.is_finite() && step.im.is_finite() {
                z[j] = zj - step;
            }
        }
        if !active {
            break;
        }
    }
    (z, iterations)
}

/// Single-linkage clustering at distance `tol`; the center of a cluster is
/// the mean of its members. Clusters whose centers end up within `tol` of
/// each other are merged, so centers are pairwise farther apart than `tol`.
/// Clusters are ordered by their first member.
pub fn cluster_roots(rs: &RootSequence, tol: f64) -> Result<RootClusters> {
    check_positive(tol, "cluster tol")?;
    let n = rs.len();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    let union = |parent: &mut [usize], a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    };

    for i in 0..n {
        for j in i + 1..n {
            if dist(rs[i], rs[j]) <= tol {
                union(&mut parent, i, j);
            }
        }
    }

    loop {
        let groups = groups(&mut parent, |p, i| find(p, i));
        let centers: Vec<Scalar> = groups.iter().map(|g| mean(rs, g)).collect();
        let mut merged = false;
        'outer: for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                if dist(centers[a], centers[b]) <= tol {
                    union(&mut parent, groups[a][0], groups[b][0]);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            let clusters = groups
                .iter()
                .zip(centers)
                .map(|(g, center)| Cluster {
                    center,
                    mult: g.len(),
                })
                .collect();
            return Ok(RootClusters(clusters));
        }
    }
}

fn groups(parent: &mut [usize], mut find: impl FnMut(&mut [usize], usize) -> usize) -> Vec<Vec<usize>> {
    let n = parent.len();
    let mut slot = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(parent, i);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(i);
    }
    out
}

fn mean(rs: &RootSequence, members: &[usize]) -> Scalar {
    let sum = members.iter().fold(Scalar::zero(), |acc, &i| acc + rs[i]);
    sum / members.len() as f64
}

/// `min_{j<k} |ζ_j - ζ_k|` over cluster centers. Any `ε` up to half of it
/// gives pairwise disjoint balls.
pub fn separation(rc: &RootClusters) -> Result<f64> {
    if rc.len() < 2 {
        return Err(Error::SingleCluster);
    }
    let c = rc.as_slice();
    let mut best = f64::INFINITY;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            best = best.min(dist(c[i].center, c[j].center));
        }
    }
    Ok(best)
}
