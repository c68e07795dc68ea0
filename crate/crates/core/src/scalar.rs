use num_complex::Complex64;

/// Element of the coefficient field. Fixed to double-precision complex.
pub type Scalar = Complex64;

/// `|a - b|`.
#[inline]
pub fn dist(a: Scalar, b: Scalar) -> f64 {
    (a - b).norm()
}

/// `x^n` without relying on std's inherent float methods.
#[inline]
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    num_traits::Float::powi(x, n)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    num_traits::Float::ln(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    num_traits::Float::exp(x)
}

#[inline]
pub(crate) fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn check_finite(z: Scalar, what: &'static str) -> crate::Result<()> {
    if is_finite(z) {
        Ok(())
    } else {
        Err(crate::Error::NonFinite(what))
    }
}

pub(crate) fn check_positive(value: f64, name: &'static str) -> crate::Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(crate::Error::param(name, value, "must be finite and > 0"))
    }
}
