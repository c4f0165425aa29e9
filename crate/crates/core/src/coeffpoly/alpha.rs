use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::coefficient::Coefficient;

/// A univariate polynomial in the formal parameter `alpha` over
/// [`Coefficient`].
///
/// The degree-0 embedding is a ring homomorphism, and evaluation at any
/// rational value commutes with the ring operations. Coefficients are stored
/// in ascending powers with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaPoly {
    coeffs: Vec<Coefficient>,
}

impl AlphaPoly {
    pub fn zero() -> Self {
        AlphaPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        AlphaPoly::constant(Coefficient::one())
    }

    pub fn constant(c: Coefficient) -> Self {
        if c.is_zero() {
            AlphaPoly::zero()
        } else {
            AlphaPoly { coeffs: vec![c] }
        }
    }

    /// The parameter `alpha` itself.
    pub fn alpha() -> Self {
        AlphaPoly {
            coeffs: vec![Coefficient::zero(), Coefficient::one()],
        }
    }

    /// `alpha + c` for a constant `c`.
    pub fn alpha_plus(c: Coefficient) -> Self {
        let mut p = AlphaPoly {
            coeffs: vec![c, Coefficient::one()],
        };
        p.normalize();
        p
    }

    pub fn from_coeffs(coeffs: Vec<Coefficient>) -> Self {
        let mut p = AlphaPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Coefficient::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, power: usize) -> Coefficient {
        self.coeffs.get(power).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// Evaluate at a rational (or Gaussian rational) value of `alpha`.
    pub fn eval(&self, at: &Coefficient) -> Coefficient {
        let mut acc = Coefficient::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        AlphaPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }
}

impl Add for &AlphaPoly {
    type Output = AlphaPoly;
    fn add(self, rhs: &AlphaPoly) -> AlphaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for t in 0..n {
            out.push(&self.coeff(t) + &rhs.coeff(t));
        }
        AlphaPoly::from_coeffs(out)
    }
}

impl Sub for &AlphaPoly {
    type Output = AlphaPoly;
    fn sub(self, rhs: &AlphaPoly) -> AlphaPoly {
        self + &(-rhs)
    }
}

impl Neg for &AlphaPoly {
    type Output = AlphaPoly;
    fn neg(self) -> AlphaPoly {
        AlphaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &AlphaPoly {
    type Output = AlphaPoly;
    fn mul(self, rhs: &AlphaPoly) -> AlphaPoly {
        if self.is_zero() || rhs.is_zero() {
            return AlphaPoly::zero();
        }
        let mut out = vec![Coefficient::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        AlphaPoly::from_coeffs(out)
    }
}

impl fmt::Display for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0/1");
        }
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match p {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*a")?,
                _ => write!(f, "({c})*a^{p}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_commutes_with_ring_ops() {
        let p = AlphaPoly::from_coeffs(vec![
            Coefficient::from_int(2),
            Coefficient::from_ratio(-1, 3),
            Coefficient::from_int(1),
        ]);
        let q = AlphaPoly::alpha_plus(Coefficient::from_int(5));
        let at = Coefficient::from_ratio(7, 2);
        assert_eq!((&p * &q).eval(&at), &p.eval(&at) * &q.eval(&at));
        assert_eq!((&p + &q).eval(&at), &p.eval(&at) + &q.eval(&at));
    }

    #[test]
    fn constant_embedding_is_homomorphism() {
        let a = Coefficient::from_ratio(3, 4);
        let b = Coefficient::from_int(-2);
        assert_eq!(
            &AlphaPoly::constant(a.clone()) * &AlphaPoly::constant(b.clone()),
            AlphaPoly::constant(&a * &b)
        );
    }
}
