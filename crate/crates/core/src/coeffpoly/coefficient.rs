use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// A Gaussian rational `re + im*i` with arbitrary-precision parts.
///
/// All arithmetic is exact; there is a multiplicative inverse for every
/// nonzero value.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coefficient {
    re: Rat,
    im: Rat,
}

impl Coefficient {
    pub fn new(re: Rat, im: Rat) -> Self {
        Coefficient { re, im }
    }

    pub fn zero() -> Self {
        Coefficient {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        Coefficient {
            re: Rat::one(),
            im: Rat::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Coefficient {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient {
            re: Rat::from_integer(BigInt::from(n)),
            im: Rat::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coefficient {
            re: Rat::new(BigInt::from(num), BigInt::from(den)),
            im: Rat::zero(),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        Coefficient {
            re: r,
            im: Rat::zero(),
        }
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }

    pub fn im(&self) -> &Rat {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Coefficient {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Multiplicative inverse. Returns `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Coefficient {
            re: &self.re / &norm,
            im: -&self.im / &norm,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Coefficient::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `n!` as an exact coefficient.
    pub fn factorial(n: u32) -> Self {
        let mut acc = BigInt::one();
        for t in 2..=n as u64 {
            acc *= BigInt::from(t);
        }
        Coefficient::from_rat(Rat::from_integer(acc))
    }

    /// Binomial coefficient `C(n, k)` as an exact coefficient.
    pub fn binomial(n: u32, k: u32) -> Self {
        Coefficient::from_rat(Rat::from_integer(binomial_big(n, k)))
    }
}

/// Exact binomial coefficient; zero when `k > n`.
pub(crate) fn binomial_big(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &Coefficient {
    type Output = Coefficient;
    fn div(self, rhs: &Coefficient) -> Coefficient {
        let inv = rhs.inv().expect("division by zero coefficient");
        self * &inv
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: Coefficient) -> Coefficient {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Coefficient> for Coefficient {
    fn sub_assign(&mut self, rhs: &Coefficient) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Coefficient> for Coefficient {
    fn mul_assign(&mut self, rhs: &Coefficient) {
        *self = &*self * rhs;
    }
}

fn fmt_rat(r: &Rat, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}/{}", r.numer(), r.denom())
}

impl fmt::Display for Coefficient {
    /// Canonical text form: `a/b` for real values, `a/b+c/d*i` otherwise
    /// (with a `-` sign when the imaginary part is negative).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rat(&self.re, f);
        }
        fmt_rat(&self.re, f)?;
        if self.im.is_negative() {
            write!(f, "-")?;
            fmt_rat(&-self.im.clone(), f)?;
        } else {
            write!(f, "+")?;
            fmt_rat(&self.im, f)?;
        }
        write!(f, "*i")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_roundtrip() {
        let a = Coefficient::from_ratio(1, 3);
        let b = Coefficient::from_ratio(2, 7);
        let sum = &a + &b;
        assert_eq!(&sum - &b, a);
    }

    #[test]
    fn inverse_of_nonzero() {
        let c = Coefficient::new(Rat::new(3.into(), 5.into()), Rat::new((-2).into(), 9.into()));
        let inv = c.inv().unwrap();
        assert!((&c * &inv).is_one());
        assert!(Coefficient::zero().inv().is_none());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = Coefficient::i();
        assert_eq!(&i * &i, Coefficient::from_int(-1));
    }

    #[test]
    fn display_canonical() {
        assert_eq!(Coefficient::from_ratio(-1, 2).to_string(), "-1/2");
        let c = Coefficient::new(Rat::new(1.into(), 1.into()), Rat::new((-3).into(), 4.into()));
        assert_eq!(c.to_string(), "1/1-3/4*i");
        assert_eq!(Coefficient::i().to_string(), "0/1+1/1*i");
    }

    #[test]
    fn binomials() {
        assert_eq!(Coefficient::binomial(6, 4), Coefficient::from_int(15));
        assert_eq!(Coefficient::binomial(4, 4), Coefficient::from_int(1));
        assert_eq!(Coefficient::binomial(3, 4), Coefficient::zero());
        assert_eq!(Coefficient::factorial(5), Coefficient::from_int(120));
    }
}
