//! Hermite and associated Legendre polynomials plus the normalizing constants
//! used by the state catalog.
//!
//! Hermite polynomials follow the physicists' convention (`H_1(x) = 2x`).
//! Associated Legendre functions carry no Condon–Shortley phase; every
//! quantity downstream depends on them only through `|P|^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted by [`PolyDegree::new`].
pub const DEFAULT_MAX_DEGREE: u32 = 64;

/// Degree (or order) of an orthogonal polynomial, bounded to keep the
/// double-precision recurrences away from overflow.
///
/// The recurrences are accurate to roughly degree 30; tests cover degree 20.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PolyDegree(u32);

impl PolyDegree {
    pub fn new(n: u32) -> Result<Self> {
        Self::with_max(n, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max(n: u32, max: u32) -> Result<Self> {
        if n > max {
            return Err(Error::DegreeOutOfRange { n, max });
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for PolyDegree {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        Self::new(n)
    }
}

impl From<PolyDegree> for u32 {
    fn from(d: PolyDegree) -> u32 {
        d.0
    }
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite(n: PolyDegree, x: f64) -> f64 {
    let n = n.get();
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_n'(x) = 2n H_{n-1}(x)`.
pub fn hermite_derivative(n: PolyDegree, x: f64) -> f64 {
    match n.get() {
        0 => 0.0,
        k => 2.0 * f64::from(k) * hermite(PolyDegree(k - 1), x),
    }
}

/// Real zeros of `H_n`, ascending.
///
/// All zeros lie inside `|x| < sqrt(2n + 1)`; they are bracketed on a fine
/// scan and refined by bisection.
pub fn hermite_zeros(n: PolyDegree) -> Vec<f64> {
    let deg = n.get();
    if deg == 0 {
        return Vec::new();
    }
    let bound = (2.0 * f64::from(deg) + 1.0).sqrt() + 0.5;
    let steps = 400 * deg as usize;
    let dx = 2.0 * bound / steps as f64;
    let mut zeros = Vec::with_capacity(deg as usize);
    let mut a = -bound;
    let mut fa = hermite(n, a);
    for i in 1..=steps {
        let b = -bound + i as f64 * dx;
        let fb = hermite(n, b);
        if fb == 0.0 {
            zeros.push(b);
        } else if fa != 0.0 && fa.signum() != fb.signum() {
            zeros.push(bisect(|t| hermite(n, t), a, b));
        }
        a = b;
        fa = fb;
    }
    zeros
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Associated Legendre function `P_l^m(x)` for `0 <= m <= l`, without the
/// `(-1)^m` phase.
pub fn assoc_legendre(l: PolyDegree, m_abs: PolyDegree, x: f64) -> Result<f64> {
    let (l, m) = (l.get(), m_abs.get());
    if m > l {
        return Err(Error::OrderExceedsDegree { m, l });
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::ArgumentOutOfDomain { x });
    }

    // P_m^m = (2m-1)!! (1-x^2)^{m/2}
    let sin = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= f64::from(2 * k - 1) * sin;
    }
    if l == m {
        return Ok(pmm);
    }

    let mut pm1m = x * f64::from(2 * m + 1) * pmm;
    for k in m + 2..=l {
        let next = (x * f64::from(2 * k - 1) * pm1m - f64::from(k + m - 1) * pmm) / f64::from(k - m);
        pmm = pm1m;
        pm1m = next;
    }
    Ok(pm1m)
}

/// Normalizing constant of the spherical harmonic `Y_l^m`:
/// `sqrt((2l+1)/(4π) · (l-|m|)!/(l+|m|)!)`.
pub fn spherical_harmonic_norm(l: PolyDegree, m_abs: PolyDegree) -> Result<f64> {
    let (l, m) = (l.get(), m_abs.get());
    if m > l {
        return Err(Error::OrderExceedsDegree { m, l });
    }
    // (l-m)!/(l+m)! = 1 / prod_{k=l-m+1}^{l+m} k
    let ratio = (l - m + 1..=l + m).fold(1.0, |acc, k| acc / f64::from(k));
    Ok(((2.0 * f64::from(l) + 1.0) / (4.0 * PI) * ratio).sqrt())
}

/// One-dimensional oscillator normalization
/// `N_n = (α / (√π 2^n n!))^{1/2}`.
pub fn oscillator_norm(n: PolyDegree, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::NonPositive { name: "alpha", value: alpha });
    }
    // 2^n n! overflows near n = 150; accumulate as a product of 2k.
    let denom = (1..=n.get()).fold(PI.sqrt(), |acc, k| acc * 2.0 * f64::from(k));
    Ok((alpha / denom).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: u32) -> PolyDegree {
        PolyDegree::new(n).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn degree_cap() {
        assert!(PolyDegree::new(64).is_ok());
        assert_eq!(PolyDegree::new(65), Err(Error::DegreeOutOfRange { n: 65, max: 64 }));
        assert!(PolyDegree::with_max(10, 8).is_err());
        let parsed: std::result::Result<PolyDegree, _> = serde_json::from_str("99");
        assert!(parsed.is_err());
    }

    #[test]
    fn hermite_low_orders() {
        assert_eq!(hermite(d(0), 1.7), 1.0);
        assert_eq!(hermite(d(1), 0.5), 1.0);
        // explicit-series value, 16x^4 - 48x^2 + 12 at x = 0.8
        assert!(rel(hermite(d(4), 0.8), -12.1664) < 1e-13);
        assert!(rel(hermite(d(7), -1.3), -1010.9230976) < 1e-12);
    }

    #[test]
    fn hermite_derivative_identity() {
        let h = 1e-5;
        for n in 0..10 {
            for &x in &[-1.2, 0.0, 0.37, 2.1] {
                let fd = (hermite(d(n), x + h) - hermite(d(n), x - h)) / (2.0 * h);
                let an = hermite_derivative(d(n), x);
                assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn hermite_zero_locations() {
        assert!(hermite_zeros(d(0)).is_empty());
        assert_eq!(hermite_zeros(d(1)), vec![0.0]);
        let z3 = hermite_zeros(d(3));
        assert_eq!(z3.len(), 3);
        assert!((z3[2] - 1.5f64.sqrt()).abs() < 1e-12);
        assert!(z3[1].abs() < 1e-12);
        for n in 1..=20 {
            let zs = hermite_zeros(d(n));
            assert_eq!(zs.len(), n as usize, "n={n}");
            assert!(zs.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn legendre_values() {
        assert_eq!(assoc_legendre(d(0), d(0), 0.3).unwrap(), 1.0);
        assert_eq!(assoc_legendre(d(1), d(1), 0.0).unwrap(), 1.0);
        // Rodrigues-formula values
        assert!(rel(assoc_legendre(d(2), d(1), 0.5).unwrap(), 1.299038105676658) < 1e-14);
        assert!(rel(assoc_legendre(d(5), d(3), -0.3).unwrap(), -8.65914461606197) < 1e-12);
        assert!(rel(assoc_legendre(d(8), d(4), 0.7).unwrap(), 1306.75109709375) < 1e-12);
    }

    #[test]
    fn legendre_vanishes_at_poles() {
        for l in 1..=12 {
            for m in 1..=l {
                assert_eq!(assoc_legendre(d(l), d(m), 1.0).unwrap(), 0.0);
                assert_eq!(assoc_legendre(d(l), d(m), -1.0).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn legendre_errors() {
        assert_eq!(assoc_legendre(d(1), d(2), 0.0), Err(Error::OrderExceedsDegree { m: 2, l: 1 }));
        assert_eq!(assoc_legendre(d(2), d(1), 1.5), Err(Error::ArgumentOutOfDomain { x: 1.5 }));
    }

    #[test]
    fn oscillator_norm_values() {
        assert!(rel(oscillator_norm(d(0), 1.0).unwrap(), 0.7511255444649425) < 1e-14);
        assert!(rel(oscillator_norm(d(1), 1.0).unwrap(), 0.5311259660135984) < 1e-14);
        assert!(rel(oscillator_norm(d(0), 2.0).unwrap(), 1.0622519320271968) < 1e-14);
        assert!(rel(oscillator_norm(d(3), 1.5).unwrap(), 0.1327814915033996) < 1e-13);
        assert!(oscillator_norm(d(0), 0.0).is_err());
        assert!(oscillator_norm(d(0), -1.0).is_err());
        assert!(oscillator_norm(d(0), f64::NAN).is_err());
    }

    #[test]
    fn spherical_norm_l1() {
        // Y_1^1 normalization sqrt(3/(8π))
        let c = spherical_harmonic_norm(d(1), d(1)).unwrap();
        assert!(rel(c, (3.0 / (8.0 * PI)).sqrt()) < 1e-14);
        assert!(rel(spherical_harmonic_norm(d(0), d(0)).unwrap(), (1.0 / (4.0 * PI)).sqrt()) < 1e-14);
    }
}
