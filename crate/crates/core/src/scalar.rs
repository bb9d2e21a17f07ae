//! Exact scalars: polynomials in the formal parameter `hbar` with rational
//! coefficients.
//!
//! Every relation produced by the constructions in this crate is polynomial
//! in `hbar`, so the scalar ring is `Q[hbar]` rather than a power series
//! completion. `Q[hbar]` is a Euclidean domain, which is what the Smith
//! normal form in [`crate::homology`] relies on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// A polynomial in `hbar` over the rationals.
///
/// Invariant: the coefficient vector has no trailing zero, so the zero
/// polynomial is the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    coeffs: Vec<Rat>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        if r.is_zero() {
            Scalar::zero()
        } else {
            Scalar { coeffs: vec![r] }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(rat_int(n))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Scalar::from_rat(rat(num, den))
    }

    /// The monomial `c * hbar^k`.
    pub fn hbar_pow(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return Scalar::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Scalar { coeffs }
    }

    pub fn hbar() -> Self {
        Scalar::hbar_pow(Rat::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Scalar { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree in `hbar`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    /// Evaluation at `hbar = 0`, the classical-limit ring map to `Q`.
    pub fn eval_zero(&self) -> Rat {
        self.coeff(0)
    }

    /// Evaluation at an arbitrary rational value of `hbar`.
    pub fn eval_at(&self, q: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    /// Exact division by `hbar`; `None` if the constant term is nonzero.
    pub fn div_hbar(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if !self.coeffs[0].is_zero() {
            return None;
        }
        Some(Scalar::from_coeffs(self.coeffs[1..].to_vec()))
    }

    /// Truncation to the constant `hbar^0` part.
    pub fn classical_part(&self) -> Scalar {
        Scalar::from_rat(self.coeff(0))
    }

    pub fn scale(&self, r: &Rat) -> Scalar {
        Scalar::from_coeffs(self.coeffs.iter().map(|c| c * r).collect())
    }

    /// Euclidean division: returns `(q, r)` with `self = q * d + r` and
    /// `deg r < deg d`. Panics on division by zero.
    pub fn div_rem(&self, d: &Scalar) -> (Scalar, Scalar) {
        assert!(!d.is_zero(), "scalar division by zero");
        let mut r = self.clone();
        let mut q = Scalar::zero();
        let dd = d.degree().unwrap();
        let lead_inv = Rat::one() / d.leading();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.leading() * &lead_inv;
            let t = Scalar::hbar_pow(c, rd - dd);
            q += t.clone();
            r -= t * d.clone();
        }
        (q, r)
    }

    /// Exact division; `None` when the remainder is nonzero.
    pub fn try_div(&self, d: &Scalar) -> Option<Scalar> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd of two polynomials.
    pub fn gcd(a: &Scalar, b: &Scalar) -> Scalar {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Normalizes the leading coefficient to 1 (zero stays zero).
    pub fn monic(&self) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        let inv = Rat::one() / self.leading();
        self.scale(&inv)
    }

    /// A unit of `Q[hbar]` is a nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Product, callable without importing the `Mul` trait.
    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        Mul::mul(self, rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        let mut coeffs = self.coeffs;
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), Rat::zero());
        }
        for (i, c) in rhs.coeffs.into_iter().enumerate() {
            coeffs[i] += c;
        }
        Scalar::from_coeffs(coeffs)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = std::mem::take(self) + rhs;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + (-rhs)
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = std::mem::take(self) - rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Scalar::from_coeffs(coeffs)
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = (&*self).mul(&rhs);
    }
}

fn fmt_rat(r: &Rat, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => fmt_rat(&a, f)?,
                _ => {
                    if !a.is_one() {
                        fmt_rat(&a, f)?;
                        write!(f, "*")?;
                    }
                    if k == 1 {
                        write!(f, "h")?;
                    } else {
                        write!(f, "h^{}", k)?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = Scalar::from_frac(1, 3) + Scalar::hbar_pow(rat_int(2), 2);
        let b = Scalar::from_frac(2, 3) - Scalar::hbar();
        let p = (&a).mul(&b);
        assert_eq!(p.coeff(0), rat(2, 9));
        assert_eq!(p.coeff(1), rat(-1, 3));
        assert_eq!(p.coeff(2), rat(4, 3));
        assert_eq!(p.coeff(3), rat_int(-2));
        assert_eq!(p.degree(), Some(3));
    }

    #[test]
    fn eval_zero_is_ring_map() {
        let a = Scalar::from_int(3) + Scalar::hbar();
        let b = Scalar::from_int(5) - Scalar::hbar_pow(rat_int(1), 3);
        assert_eq!(
            (&a).mul(&b).eval_zero(),
            a.eval_zero() * b.eval_zero()
        );
    }

    #[test]
    fn euclidean_division() {
        // (h^2 + 1)(h - 2) + 7
        let d = Scalar::from_coeffs(vec![rat_int(1), rat_int(0), rat_int(1)]);
        let q = Scalar::from_coeffs(vec![rat_int(-2), rat_int(1)]);
        let n = (&d).mul(&q) + Scalar::from_int(7);
        let (q2, r2) = n.div_rem(&d);
        assert_eq!(q2, q);
        assert_eq!(r2, Scalar::from_int(7));
        assert!(n.try_div(&d).is_none());
        assert_eq!((&d).mul(&q).try_div(&d), Some(q));
    }

    #[test]
    fn gcd_is_monic() {
        let a = Scalar::hbar_pow(rat_int(4), 2); // 4h^2
        let b = Scalar::hbar_pow(rat_int(6), 1); // 6h
        let g = Scalar::gcd(&a, &b);
        assert_eq!(g, Scalar::hbar());
    }

    #[test]
    fn div_hbar_exact() {
        let a = Scalar::hbar_pow(rat_int(3), 2);
        assert_eq!(a.div_hbar(), Some(Scalar::hbar_pow(rat_int(3), 1)));
        assert_eq!(Scalar::one().div_hbar(), None);
    }
}
