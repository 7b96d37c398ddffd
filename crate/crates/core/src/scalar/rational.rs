use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{default_names, Poly};
use crate::error::{Error, Result};

/// An exact rational function `numerator / denominator` in the chart coordinates.
///
/// Always canonical: the two polynomials are coprime and the denominator is
/// monic, so structural equality is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero(n: usize) -> Self {
        Scalar {
            num: Poly::zero(n),
            den: Poly::one(n),
        }
    }

    pub fn one(n: usize) -> Self {
        Scalar {
            num: Poly::one(n),
            den: Poly::one(n),
        }
    }

    pub fn from_int(k: i64, n: usize) -> Self {
        Self::from_poly(Poly::from_int(k, n))
    }

    pub fn from_ratio(p: i64, q: i64, n: usize) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)), n)
    }

    pub fn from_rational(r: BigRational, n: usize) -> Self {
        Self::from_poly(Poly::constant(r, n))
    }

    /// The coordinate function `x_i` (0-based).
    pub fn coordinate(i: usize, n: usize) -> Self {
        Self::from_poly(Poly::var(i, n))
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        Scalar {
            num: p,
            den: Poly::one(n),
        }
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::MalformedScalar("zero denominator".into()));
        }
        if num.nvars() != den.nvars() {
            return Err(Error::ChartMismatch(num.nvars(), den.nvars()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return Self::zero(n);
        }
        if den.is_constant() {
            let inv = den.constant_term().recip();
            return Scalar {
                num: num.scale(&inv),
                den: Poly::one(n),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// Re-canonicalizes; a no-op on any value this type hands out.
    pub fn normalize(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    #[inline]
    pub fn chart_dim(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Rough size used for pivot selection.
    pub fn complexity(&self) -> usize {
        self.num.nterms() + self.den.nterms() + (self.num.total_degree() + self.den.total_degree()) as usize
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        Scalar {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero(self.chart_dim());
        }
        Scalar {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
    }

    /// ∂/∂x_i by the quotient rule; `i` is 0-based.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        let n = self.chart_dim();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        Ok(self.d(i))
    }

    /// Unchecked partial derivative for internal use.
    pub(crate) fn d(&self, i: usize) -> Self {
        if self.den.is_one() {
            return Scalar::from_poly(self.num.derivative(i));
        }
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(top, &self.den * &self.den)
    }

    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let num = self.num.display_with(names);
        if self.den.is_one() {
            return num;
        }
        let den = self.den.display_with(names);
        let num = if self.num.nterms() > 1 {
            format!("({num})")
        } else {
            num
        };
        let den = if self.den.nterms() > 1 || !self.den.is_monomial() || den.contains('*') {
            format!("({den})")
        } else {
            den
        };
        format!("{num}/{den}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_names(self.chart_dim())))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

fn check_dims(a: &Scalar, b: &Scalar) {
    assert_eq!(
        a.chart_dim(),
        b.chart_dim(),
        "scalars from charts of different dimension"
    );
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        check_dims(self, rhs);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return Scalar::from_poly(num);
            }
            return Scalar::reduce(num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let (b, d) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (
                self.den.div_exact(&g).expect("gcd divides"),
                rhs.den.div_exact(&g).expect("gcd divides"),
            )
        };
        let num = &(&self.num * &d) + &(&rhs.num * &b);
        let den = &(&b * &d) * &g;
        Scalar::reduce(num, den)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        check_dims(self, rhs);
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero(self.chart_dim());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        let num = &a * &c;
        let den = &b * &d;
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::inv`] for a checked inverse.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by the zero scalar")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Scalar {
    /// Sum over an iterator; `n` fixes the chart for an empty sum.
    pub fn sum_in(n: usize, iter: impl IntoIterator<Item = Scalar>) -> Scalar {
        iter.into_iter().fold(Scalar::zero(n), |acc, x| &acc + &x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Scalar {
        Scalar::coordinate(0, 2)
    }
    fn y() -> Scalar {
        Scalar::coordinate(1, 2)
    }
    fn k(v: i64) -> Scalar {
        Scalar::from_int(v, 2)
    }

    #[test]
    fn normalize_cancels_common_factors() {
        let num = &(&x() * &x()) - &k(1);
        let den = &x() - &k(1);
        assert_eq!(&num / &den, &x() + &k(1));
    }

    #[test]
    fn normalize_zero_and_units() {
        let den = &k(1) + &(&x() * &x());
        assert_eq!(&k(0) / &den, k(0));
        assert!((&k(0) / &den).denominator().is_one());
        let r = &(&k(2) * &x()) / &k(4);
        assert_eq!(r, &x() * &Scalar::from_ratio(1, 2, 2));
        assert!(r.denominator().is_one());
    }

    #[test]
    fn zero_denominator_is_rejected() {
        let err = Scalar::new(Poly::one(2), Poly::zero(2)).unwrap_err();
        assert!(matches!(err, Error::MalformedScalar(_)));
        assert!(matches!(k(0).inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!((&x() * &y()).partial_derivative(0).unwrap(), y());
        let inv = k(1) / x();
        assert_eq!(inv.partial_derivative(0).unwrap(), -(k(1) / (&x() * &x())));
        // d ln|1+x^2| = 2x/(1+x^2) is supplied directly
        let h = &k(1) + &(&x() * &x());
        assert_eq!(h.partial_derivative(0).unwrap() / &h, &(&k(2) * &x()) / &h);
        assert!(matches!(
            x().partial_derivative(2),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let s = &k(1) / &(&(&k(3) * &x()) + &k(6));
        assert!(s.denominator().leading_coeff().is_one());
        assert_eq!(s, &Scalar::from_ratio(1, 3, 2) / &(&x() + &k(2)));
    }
}
