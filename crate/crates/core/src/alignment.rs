//! Coefficient deformation, root alignment and the bottleneck matching
//! between two root sequences.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::roots::{separation, RootClusters, RootSequence};
use crate::scalar::{check_finite, check_positive, dist, Scalar};
use crate::{Error, Result};

/// Open ball `{z : |z - center| < radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    center: Scalar,
    radius: f64,
}

impl Ball {
    pub fn new(center: Scalar, radius: f64) -> Result<Self> {
        check_finite(center, "ball center")?;
        check_positive(radius, "radius")?;
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> Scalar {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, z: Scalar) -> bool {
        dist(z, self.center) < self.radius
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    /// `permutation[j]` is the index of the `ω` paired with `ζ_j`.
    pub permutation: Vec<usize>,
    pub max_displacement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentReport {
    /// Roots of `g` inside `B(ζ_j, ε)`, per cluster of `f`.
    pub counts: Vec<usize>,
    /// Every ball holds at least `μ_j` roots.
    pub aligned: bool,
    pub balls_disjoint: bool,
    /// Bottleneck matching of the expanded roots of `f` against `g`.
    pub permutation: Vec<usize>,
    pub max_displacement: f64,
}

/// `max_i |b_i - a_i| < delta`.
pub fn is_delta_deformation(f: &Polynomial, g: &Polynomial, delta: f64) -> Result<bool> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            left: f.degree(),
            right: g.degree(),
        });
    }
    check_positive(delta, "delta")?;
    Ok(f.coeffs()
        .iter()
        .zip(g.coeffs())
        .all(|(&a, &b)| dist(a, b) < delta))
}

/// Sufficient disjointness test for the open balls of radius `eps` around
/// the cluster centers: `eps <= separation / 2`. Always true for fewer than
/// two clusters.
pub fn balls_disjoint(rc: &RootClusters, eps: f64) -> bool {
    match separation(rc) {
        Ok(sep) => eps <= 0.5 * sep,
        Err(_) => true,
    }
}

/// Whether `g` (given by its roots) is `eps`-aligned to `f` (given by its
/// clusters). Same as [`is_epsilon_aligned_with_slack`] with zero slack.
pub fn is_epsilon_aligned(
    f_clusters: &RootClusters,
    g_roots: &RootSequence,
    eps: f64,
) -> Result<AlignmentReport> {
    is_epsilon_aligned_with_slack(f_clusters, g_roots, eps, 0.0)
}

/// Membership uses the open ball of radius `eps + slack`. The slack absorbs
/// root-finder error and defaults to zero everywhere except the fuzz
/// harness.
pub fn is_epsilon_aligned_with_slack(
    f_clusters: &RootClusters,
    g_roots: &RootSequence,
    eps: f64,
    slack: f64,
) -> Result<AlignmentReport> {
    check_positive(eps, "epsilon")?;
    if !(slack.is_finite() && slack >= 0.0) {
        return Err(Error::param("slack", slack, "must be finite and >= 0"));
    }
    let n = f_clusters.total_multiplicity();
    if n != g_roots.len() {
        return Err(Error::LengthMismatch {
            left: n,
            right: g_roots.len(),
        });
    }
    let radius = eps + slack;
    let counts: Vec<usize> = f_clusters
        .iter()
        .map(|c| g_roots.iter().filter(|&&w| dist(w, c.center) < radius).count())
        .collect();
    let aligned = counts
        .iter()
        .zip(f_clusters.iter())
        .all(|(&k, c)| k >= c.mult);
    let matching = bottleneck_match(&f_clusters.expanded(), g_roots)?;
    Ok(AlignmentReport {
        counts,
        aligned,
        balls_disjoint: balls_disjoint(f_clusters, radius),
        permutation: matching.permutation,
        max_displacement: matching.max_displacement,
    })
}

/// Permutation `σ` minimizing `max_j |ω_{σ(j)} - ζ_j|`.
///
/// Binary search over the sorted pairwise distances; feasibility of a
/// threshold is a perfect bipartite matching on the edges at or below it.
pub fn bottleneck_match(zetas: &RootSequence, omegas: &RootSequence) -> Result<Matching> {
    let n = zetas.len();
    if n != omegas.len() {
        return Err(Error::LengthMismatch {
            left: n,
            right: omegas.len(),
        });
    }
    if n == 0 {
        return Ok(Matching {
            permutation: Vec::new(),
            max_displacement: 0.0,
        });
    }
    let d: Vec<Vec<f64>> = zetas
        .iter()
        .map(|&z| omegas.iter().map(|&w| dist(z, w)).collect())
        .collect();
    let mut levels: Vec<f64> = d.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let (mut lo, mut hi) = (0, levels.len() - 1);
    let mut best = perfect_matching(&d, levels[hi]).expect("complete graph has a perfect matching");
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match perfect_matching(&d, levels[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let max_displacement = best
        .iter()
        .enumerate()
        .map(|(j, &k)| d[j][k])
        .fold(0.0, f64::max);
    Ok(Matching {
        permutation: best,
        max_displacement,
    })
}

/// Kuhn's augmenting paths on edges with `d[j][k] <= threshold`. Returns the
/// right-partner of each left vertex when a perfect matching exists.
fn perfect_matching(d: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let n = d.len();
    let mut right_owner = vec![usize::MAX; n];
    for j in 0..n {
        let mut visited = vec![false; n];
        if !augment(d, threshold, j, &mut visited, &mut right_owner) {
            return None;
        }
    }
    let mut left = vec![0; n];
    for (k, &j) in right_owner.iter().enumerate() {
        left[j] = k;
    }
    Some(left)
}

fn augment(
    d: &[Vec<f64>],
    threshold: f64,
    j: usize,
    visited: &mut [bool],
    right_owner: &mut [usize],
) -> bool {
    for k in 0..d.len() {
        if d[j][k] <= threshold && !visited[k] {
            visited[k] = true;
            if right_owner[k] == usize::MAX || augment(d, threshold, right_owner[k], visited, right_owner) {
                right_owner[k] = j;
                return true;
            }
        }
    }
    false
}
