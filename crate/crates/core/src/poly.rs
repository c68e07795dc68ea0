//! Dense univariate polynomials over [`Scalar`], coefficients stored
//! ascending (`coeffs[i]` multiplies `z^i`).

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::roots::RootSequence;
use crate::scalar::{check_finite, powi, Scalar};
use crate::{Error, Result};

/// Relative residual accepted by [`Polynomial::deflate`].
pub const DEFLATE_RESIDUAL_TOL: f64 = 1e-6;

/// A polynomial `a_0 + a_1 z + ... + a_n z^n` with `a_n != 0`.
///
/// Every coefficient is finite. Degree 0 (a nonzero constant) is
/// representable, but the bound operations need `n >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolynomial")]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

#[derive(Deserialize)]
struct RawPolynomial {
    coeffs: Vec<Scalar>,
}

impl TryFrom<RawPolynomial> for Polynomial {
    type Error = Error;

    fn try_from(raw: RawPolynomial) -> Result<Self> {
        Polynomial::new(raw.coeffs)
    }
}

impl Polynomial {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        let last = *coeffs.last().ok_or(Error::Empty)?;
        for &c in &coeffs {
            check_finite(c, "polynomial coefficient")?;
        }
        if last.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(Polynomial { coeffs })
    }

    /// Convenience constructor for real coefficients, ascending.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Scalar::new(c, 0.0)).collect())
    }

    /// `a_n z^n`.
    pub fn monomial(leading: Scalar, degree: usize) -> Result<Self> {
        let mut coeffs = vec![Scalar::zero(); degree + 1];
        coeffs[degree] = leading;
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs[self.degree()]
    }

    /// `max_i |a_i|`.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient below the leading one is exactly zero.
    pub fn is_pure_power(&self) -> bool {
        self.coeffs[..self.degree()].iter().all(|c| c.is_zero())
    }

    /// Number of exactly-zero low-order coefficients, i.e. the multiplicity
    /// of the root at the origin.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, &a| acc * z + a)
    }

    /// `(f(z), f'(z))` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Scalar) -> (Scalar, Scalar) {
        let mut p = Scalar::zero();
        let mut dp = Scalar::zero();
        for &a in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    }

    /// `Σ |a_i| |z|^i`, the magnitude scale of Horner rounding at `z`.
    pub(crate) fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
    }

    /// Scale used by the backward-error checks:
    /// `max_i |a_i| * max(1, |z|)^n`.
    pub fn residual_scale(&self, z: Scalar) -> f64 {
        self.max_abs_coeff() * powi(z.norm().max(1.0), self.degree() as i32)
    }

    /// `(z - root) * f(z)`.
    pub fn mul_linear(&self, root: Scalar) -> Polynomial {
        let n = self.degree();
        let mut out = vec![Scalar::zero(); n + 2];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[i + 1] += a;
            out[i] -= root * a;
        }
        Polynomial { coeffs: out }
    }

    pub fn scale(&self, c: Scalar) -> Result<Polynomial> {
        Polynomial::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Coefficients divided by the leading one.
    pub fn monic_coeffs(&self) -> Vec<Scalar> {
        let lead = self.leading();
        self.coeffs.iter().map(|&a| a / lead).collect()
    }

    /// Expands `a_n ∏ (z - ρ)` over `roots`.
    pub fn from_roots(leading: Scalar, roots: &RootSequence) -> Result<Polynomial> {
        check_finite(leading, "leading coefficient")?;
        if leading.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let mut p = Polynomial {
            coeffs: vec![leading],
        };
        for &r in roots.iter() {
            check_finite(r, "root")?;
            p = p.mul_linear(r);
        }
        Ok(p)
    }

    /// Divides out the linear factor `z - zeta`.
    ///
    /// `zeta` must be nonzero and an approximate root: the call fails when
    /// `|f(zeta)|` exceeds `1e-6 * max|a_i| * max(1, |zeta|)^n`.
    ///
    /// Low coefficients come from the forward recurrence
    /// ([`deflation_recurrence`]), high ones from synthetic division from
    /// the top, `â_{n-1} = a_n`, `â_{i-1} = a_i + ζ â_i`. Each index takes
    /// whichever side has the smaller magnitude `Σ |a_k| |ζ|^k`, so the
    /// division stays accurate when `zeta` is much smaller or larger than
    /// the other roots. Exact zeros in the low coefficients stay exact.
    pub fn deflate(&self, zeta: Scalar) -> Result<Polynomial> {
        check_finite(zeta, "deflation point")?;
        let n = self.degree();
        if n == 0 {
            return Err(Error::DegreeTooLow { got: 0, min: 1 });
        }
        if zeta.is_zero() {
            return Err(Error::ZeroDeflationPoint);
        }
        let residual = self.eval(zeta).norm();
        let threshold = DEFLATE_RESIDUAL_TOL * self.residual_scale(zeta);
        if !(residual <= threshold) {
            return Err(Error::ResidualTooLarge {
                residual,
                threshold,
            });
        }
        let r = zeta.norm();
        let mut weights: Vec<f64> = Vec::with_capacity(n + 1);
        let mut pow = 1.0;
        for a in &self.coeffs {
            weights.push(a.norm() * pow);
            pow *= r;
        }
        // Forward for i < split: Σ_{k<=i} w_k <= Σ_{k>i} w_k.
        let total: f64 = weights.iter().sum();
        let mut below = 0.0;
        let mut split = 0;
        while split < n && below + weights[split] <= total - below - weights[split] {
            below += weights[split];
            split += 1;
        }
        let mut out = deflation_recurrence(&self.coeffs[..split], zeta);
        out.resize(n, Scalar::zero());
        out[n - 1] = self.leading();
        for i in (split..n - 1).rev() {
            out[i] = self.coeffs[i + 1] + zeta * out[i + 1];
        }
        Polynomial::new(out)
    }

    /// Returns `c = b_n / a_n` when `other ≈ c * self`, i.e.
    /// `max_i |b_i - c a_i| <= tol * max_i |b_i|`.
    pub fn is_scalar_multiple(&self, other: &Polynomial, tol: f64) -> Result<Option<Scalar>> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        let c = other.leading() / self.leading();
        let dev = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (b - c * a).norm())
            .fold(0.0, f64::max);
        Ok((dev <= tol * other.max_abs_coeff()).then_some(c))
    }
}

/// The closed-form deflated coefficient
/// `φ_i(u_0..u_i, v) = -(1/v^{i+1}) Σ_{k<=i} u_k v^k`, with `i = u.len() - 1`.
///
/// For a root `v` of `Σ u_k z^k` this equals coefficient `i` of the quotient
/// by `z - v`.
pub fn deflated_coefficient(u: &[Scalar], v: Scalar) -> Scalar {
    let i = u.len() as i32 - 1;
    let sum = u
        .iter()
        .enumerate()
        .fold(Scalar::zero(), |acc, (k, &uk)| acc + uk * v.powi(k as i32));
    -sum / v.powi(i + 1)
}

/// The forward recurrence `â_0 = -a_0/ζ`, `â_i = -(a_i - â_{i-1})/ζ` for
/// `i < a.len()`. Agrees with [`deflated_coefficient`] term by term.
pub fn deflation_recurrence(a: &[Scalar], zeta: Scalar) -> Vec<Scalar> {
    let inv = zeta.inv();
    let mut prev = Scalar::zero();
    a.iter()
        .map(|&ak| {
            prev = -(ak - prev) * inv;
            prev
        })
        .collect()
}

/// `σ_k(values)`, the sum of all `k`-fold products of distinct entries.
/// `σ_0 = 1`.
///
/// Computed by incremental product expansion in `O(n k)`.
pub fn elementary_symmetric(k: usize, values: &[Scalar]) -> Result<Scalar> {
    if k > values.len() {
        return Err(Error::OutOfRange {
            k,
            len: values.len(),
        });
    }
    let mut e = vec![Scalar::zero(); k + 1];
    e[0] = Scalar::one();
    for (seen, &z) in values.iter().enumerate() {
        for j in (1..=k.min(seen + 1)).rev() {
            let lower = e[j - 1];
            e[j] += z * lower;
        }
    }
    Ok(e[k])
}

/// All of `σ_0..σ_n` at once.
fn all_elementary_symmetric(values: &[Scalar]) -> Vec<Scalar> {
    let n = values.len();
    let mut e = vec![Scalar::zero(); n + 1];
    e[0] = Scalar::one();
    for (seen, &z) in values.iter().enumerate() {
        for j in (1..=seen + 1).rev() {
            let lower = e[j - 1];
            e[j] += z * lower;
        }
    }
    e
}

/// Coefficients from roots via Viète: `a_i = a_n (-1)^{n-i} σ_{n-i}(roots)`.
pub fn viete_coefficients(roots: &RootSequence, leading: Scalar) -> Result<Polynomial> {
    check_finite(leading, "leading coefficient")?;
    if leading.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    for &r in roots.iter() {
        check_finite(r, "root")?;
    }
    let n = roots.len();
    let sigma = all_elementary_symmetric(roots.as_slice());
    let coeffs = (0..=n)
        .map(|i| {
            let s = sigma[n - i];
            let signed = if (n - i) % 2 == 0 { s } else { -s };
            leading * signed
        })
        .collect();
    Polynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn real(re: f64) -> Scalar {
        c(re, 0.0)
    }

    fn cubic() -> Polynomial {
        Polynomial::from_real(&[-6.0, 11.0, -6.0, 1.0]).unwrap()
    }

    fn rel_close(a: &[Scalar], b: &[Scalar], tol: f64) -> bool {
        let scale = a.iter().chain(b).map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * scale)
    }

    /// Synthetic division from the top coefficient down, independent of the
    /// forward recurrence used by `deflate`.
    fn synthetic_division(f: &[Scalar], zeta: Scalar) -> Vec<Scalar> {
        let n = f.len() - 1;
        let mut q = vec![Scalar::zero(); n];
        let mut carry = Scalar::zero();
        for i in (1..=n).rev() {
            carry = f[i] + carry * zeta;
            q[i - 1] = carry;
        }
        q
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Polynomial::new(vec![]), Err(Error::Empty));
        assert_eq!(
            Polynomial::from_real(&[1.0, 0.0]),
            Err(Error::ZeroLeadingCoefficient)
        );
        assert!(matches!(
            Polynomial::from_real(&[f64::NAN, 1.0]),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            Polynomial::from_real(&[1.0, f64::INFINITY]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn eval_examples() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(f.eval(real(0.0)), real(-1.0));
        assert_eq!(f.eval(real(1.0)), real(0.0));
        // 64 - 96 + 44 - 6
        assert_eq!(cubic().eval(real(4.0)), real(6.0));
    }

    #[test]
    fn eval_with_derivative_matches_eval() {
        let f = cubic();
        let z = c(0.3, -1.7);
        let (p, dp) = f.eval_with_derivative(z);
        assert_eq!(p, f.eval(z));
        // f'(z) = 3z^2 - 12z + 11
        let expected = real(3.0) * z * z - real(12.0) * z + real(11.0);
        assert!((dp - expected).norm() < 1e-12);
    }

    #[test]
    fn from_roots_examples() {
        let two = Polynomial::from_roots(real(1.0), &RootSequence::from_real(&[1.0, 2.0])).unwrap();
        assert_eq!(two, Polynomial::from_real(&[2.0, -3.0, 1.0]).unwrap());
        let zeros = Polynomial::from_roots(real(2.0), &RootSequence::from_real(&[0.0, 0.0])).unwrap();
        assert_eq!(zeros.coeffs(), &[real(0.0), real(0.0), real(2.0)]);
        assert!(zeros.is_pure_power());
        let three =
            Polynomial::from_roots(real(1.0), &RootSequence::from_real(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(three, cubic());
        assert_eq!(
            Polynomial::from_roots(real(0.0), &RootSequence::from_real(&[1.0])),
            Err(Error::ZeroLeadingCoefficient)
        );
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(elementary_symmetric(0, &[real(5.0), real(7.0)]), Ok(real(1.0)));
        let v = [real(1.0), real(2.0), real(3.0)];
        assert_eq!(elementary_symmetric(1, &v), Ok(real(6.0)));
        assert_eq!(elementary_symmetric(2, &v), Ok(real(11.0)));
        assert_eq!(elementary_symmetric(3, &v), Ok(real(6.0)));
        assert_eq!(
            elementary_symmetric(4, &v),
            Err(Error::OutOfRange { k: 4, len: 3 })
        );
        assert_eq!(elementary_symmetric(0, &[]), Ok(real(1.0)));
    }

    #[test]
    fn viete_examples() {
        let p = viete_coefficients(&RootSequence::from_real(&[1.0, 2.0]), real(1.0)).unwrap();
        assert_eq!(p.coeffs()[1], real(-3.0));
        let z = viete_coefficients(&RootSequence::from_real(&[0.0; 4]), c(2.0, 1.0)).unwrap();
        assert_eq!(z, Polynomial::monomial(c(2.0, 1.0), 4).unwrap());
        let i = RootSequence::new(vec![c(0.0, 1.0), c(0.0, -1.0)]);
        let p = viete_coefficients(&i, real(1.0)).unwrap();
        assert_eq!(p, Polynomial::from_real(&[1.0, 0.0, 1.0]).unwrap());
        assert_eq!(
            viete_coefficients(&i, real(0.0)),
            Err(Error::ZeroLeadingCoefficient)
        );
    }

    #[test]
    fn deflate_examples() {
        let q = cubic().deflate(real(1.0)).unwrap();
        assert_eq!(q, Polynomial::from_real(&[6.0, -5.0, 1.0]).unwrap());
        assert_eq!(
            q.coeffs(),
            synthetic_division(cubic().coeffs(), real(1.0)).as_slice()
        );

        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(f.deflate(real(1.0)).unwrap(), Polynomial::from_real(&[1.0, 1.0]).unwrap());

        let cst = c(0.5, -2.0);
        let lin = Polynomial::new(vec![-cst, real(1.0)]).unwrap();
        let q = lin.deflate(cst).unwrap();
        assert_eq!(q.degree(), 0);
        assert_eq!(q.coeffs(), &[real(1.0)]);
    }

    #[test]
    fn deflate_errors() {
        let f = cubic();
        assert_eq!(f.deflate(real(0.0)), Err(Error::ZeroDeflationPoint));
        match f.deflate(real(4.0)) {
            Err(Error::ResidualTooLarge { residual, .. }) => assert_eq!(residual, 6.0),
            other => panic!("unexpected {other:?}"),
        }
        let cst = Polynomial::from_real(&[3.0]).unwrap();
        assert!(matches!(cst.deflate(real(1.0)), Err(Error::DegreeTooLow { .. })));
    }

    #[test]
    fn deflate_keeps_exact_low_zeros() {
        // z^2 (z - 1.3) deflated at an approximation of 1.3
        let f = Polynomial::from_real(&[0.0, 0.0, -1.3, 1.0]).unwrap();
        let q = f.deflate(real(1.3 + 1e-13)).unwrap();
        assert!(q.is_pure_power());
        assert_eq!(q.degree(), 2);
    }

    #[test]
    fn closed_form_matches_deflate() {
        let f = cubic();
        let q = f.deflate(real(1.0)).unwrap();
        let rec = deflation_recurrence(&f.coeffs()[..3], real(1.0));
        for i in 0..3 {
            let phi = deflated_coefficient(&f.coeffs()[..=i], real(1.0));
            assert!((phi - q.coeffs()[i]).norm() <= 1e-12 * q.max_abs_coeff());
            assert!((phi - rec[i]).norm() <= 1e-12 * q.max_abs_coeff());
        }
    }

    #[test]
    fn deflate_small_root_among_large() {
        // forward division alone loses about (2/0.1)^10 in the top coefficients
        let mut roots = vec![real(0.1)];
        roots.extend((0..9).map(|k| Scalar::from_polar(2.0, 0.7 * k as f64)));
        let f = Polynomial::from_roots(Scalar::one(), &RootSequence::new(roots)).unwrap();
        let back = f.deflate(real(0.1)).unwrap().mul_linear(real(0.1));
        assert!(rel_close(f.coeffs(), back.coeffs(), 1e-13));
    }

    #[test]
    fn scalar_multiple_examples() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let g = Polynomial::from_real(&[-3.0, 0.0, 3.0]).unwrap();
        assert_eq!(f.is_scalar_multiple(&g, 1e-12), Ok(Some(real(3.0))));
        let h = Polynomial::from_real(&[1.0, 0.0, 1.0]).unwrap();
        assert_eq!(f.is_scalar_multiple(&h, 1e-6), Ok(None));
        assert_eq!(f.is_scalar_multiple(&f, 0.0), Ok(Some(real(1.0))));
        assert!(matches!(
            f.is_scalar_multiple(&cubic(), 1e-6),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    fn small_root() -> impl Strategy<Value = Scalar> {
        (0.0f64..2.0, 0.0f64..core::f64::consts::TAU).prop_map(|(r, t)| Scalar::from_polar(r, t))
    }

    fn root_vec(max: usize) -> impl Strategy<Value = Vec<Scalar>> {
        proptest::collection::vec(small_root(), 1..=max)
    }

    proptest! {
        #[test]
        fn viete_agrees_with_product(roots in root_vec(10), lead in small_root()) {
            prop_assume!(lead.norm() > 0.1);
            let rs = RootSequence::new(roots);
            let a = Polynomial::from_roots(lead, &rs).unwrap();
            let b = viete_coefficients(&rs, lead).unwrap();
            prop_assert!(rel_close(a.coeffs(), b.coeffs(), 1e-10));
        }

        #[test]
        fn deflate_round_trip(mut roots in root_vec(10), first in small_root()) {
            prop_assume!(first.norm() >= 0.1);
            roots[0] = first;
            let rs = RootSequence::new(roots);
            let f = Polynomial::from_roots(Scalar::one(), &rs).unwrap();
            let back = f.deflate(first).unwrap().mul_linear(first);
            prop_assert!(rel_close(f.coeffs(), back.coeffs(), 1e-9));
        }

        #[test]
        fn recurrence_matches_closed_form(a in root_vec(11), zeta in small_root()) {
            prop_assume!(zeta.norm() >= 0.1);
            let rec = deflation_recurrence(&a, zeta);
            for i in 0..a.len() {
                let scale: f64 = (0..=i).map(|k| a[k].norm() * zeta.norm().powi(k as i32 - i as i32 - 1)).sum();
                prop_assert!((rec[i] - deflated_coefficient(&a[..=i], zeta)).norm() <= 1e-12 * scale);
            }
        }

        #[test]
        fn sigma_permutation_invariant(values in root_vec(9), k in 0usize..10, seed in any::<u64>()) {
            let k = k.min(values.len());
            let mut shuffled = values.clone();
            // Fisher-Yates with a splitmix stream
            let mut state = seed;
            for i in (1..shuffled.len()).rev() {
                state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
                z ^= z >> 31;
                shuffled.swap(i, (z % (i as u64 + 1)) as usize);
            }
            let a = elementary_symmetric(k, &values).unwrap();
            let b = elementary_symmetric(k, &shuffled).unwrap();
            let bound: f64 = {
                let abs: Vec<Scalar> = values.iter().map(|z| Scalar::new(z.norm(), 0.0)).collect();
                elementary_symmetric(k, &abs).unwrap().re
            };
            prop_assert!((a - b).norm() <= 1e-12 * bound.max(1.0));
        }

        #[test]
        fn roots_are_zeros(roots in root_vec(10), lead in small_root()) {
            prop_assume!(lead.norm() > 0.1);
            let rs = RootSequence::new(roots);
            let f = Polynomial::from_roots(lead, &rs).unwrap();
            let n = rs.len() as i32;
            let maxr = rs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for &r in rs.iter() {
                prop_assert!(f.eval(r).norm() <= 1e-8 * lead.norm() * (1.0 + maxr).powi(n));
            }
        }

        #[test]
        fn sigma_matches_subset_enumeration(values in proptest::collection::vec(small_root(), 0..=7)) {
            let n = values.len();
            for k in 0..=n {
                let mut brute = Scalar::zero();
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() as usize == k {
                        brute += values.iter().enumerate()
                            .filter(|(i, _)| mask & (1 << i) != 0)
                            .fold(Scalar::one(), |acc, (_, &z)| acc * z);
                    }
                }
                let fast = elementary_symmetric(k, &values).unwrap();
                prop_assert!((fast - brute).norm() <= 1e-12 * brute.norm().max(1.0) * 64.0);
            }
        }
    }
}
