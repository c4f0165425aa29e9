use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::alpha::AlphaPoly;
use super::coefficient::Coefficient;
use crate::{Error, Result};

/// Coefficient rings a [`MultiPoly`] can be built over.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

impl Scalar for Coefficient {
    fn zero() -> Self {
        Coefficient::zero()
    }
    fn one() -> Self {
        Coefficient::one()
    }
    fn is_zero(&self) -> bool {
        Coefficient::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Scalar for AlphaPoly {
    fn zero() -> Self {
        AlphaPoly::zero()
    }
    fn one() -> Self {
        AlphaPoly::one()
    }
    fn is_zero(&self) -> bool {
        AlphaPoly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

/// An exponent vector over the variables `x1..xm, u1..um` (length `2m`).
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically with `x1` heaviest. This fixed order drives term
/// storage, canonical serialization and basis tie-breaking everywhere.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Expo(pub Vec<u8>);

impl Expo {
    pub fn zeros(m: u32) -> Self {
        Expo(vec![0; 2 * m as usize])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn deg_x(&self) -> u32 {
        let m = self.0.len() / 2;
        self.0[..m].iter().map(|&e| e as u32).sum()
    }

    pub fn deg_u(&self) -> u32 {
        let m = self.0.len() / 2;
        self.0[m..].iter().map(|&e| e as u32).sum()
    }

    fn checked_add(&self, rhs: &Expo) -> Expo {
        assert_eq!(self.0.len(), rhs.0.len());
        Expo(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl Ord for Expo {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0).reverse())
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One of the `2m` variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    /// `x_j`, 1-based.
    X(u32),
    /// `u_j`, 1-based.
    U(u32),
}

impl Var {
    pub fn index(self, m: u32) -> usize {
        match self {
            Var::X(j) => {
                assert!(j >= 1 && j <= m, "x index out of range");
                (j - 1) as usize
            }
            Var::U(j) => {
                assert!(j >= 1 && j <= m, "u index out of range");
                (m + j - 1) as usize
            }
        }
    }
}

/// A sparse polynomial in the variables `x1..xm, u1..um` over a scalar ring.
///
/// No stored term has a zero coefficient. The dimension `m` is carried on
/// every value and checked on every binary operation.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<C: Scalar = Coefficient> {
    m: u32,
    terms: BTreeMap<Expo, C>,
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero(m: u32) -> Self {
        MultiPoly {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: u32, c: C) -> Self {
        let mut p = MultiPoly::zero(m);
        if !c.is_zero() {
            p.terms.insert(Expo::zeros(m), c);
        }
        p
    }

    pub fn one(m: u32) -> Self {
        MultiPoly::constant(m, C::one())
    }

    pub fn monomial(m: u32, expo: Expo, c: C) -> Self {
        assert_eq!(expo.0.len(), 2 * m as usize, "exponent length mismatch");
        let mut p = MultiPoly::zero(m);
        if !c.is_zero() {
            p.terms.insert(expo, c);
        }
        p
    }

    pub fn var(m: u32, v: Var) -> Self {
        let mut e = Expo::zeros(m);
        e.0[v.index(m)] = 1;
        MultiPoly::monomial(m, e, C::one())
    }

    pub fn dim(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Expo) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Leading exponent in the fixed term order.
    pub fn leading_expo(&self) -> Option<&Expo> {
        self.terms.keys().next_back()
    }

    fn check_dim(&self, other: &MultiPoly<C>, op: &'static str) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                left: self.m,
                right: other.m,
                op,
            });
        }
        Ok(())
    }

    pub fn add_term(&mut self, e: Expo, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &MultiPoly<C>) -> Result<MultiPoly<C>> {
        self.check_dim(rhs, "add")?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &MultiPoly<C>) -> Result<MultiPoly<C>> {
        self.check_dim(rhs, "sub")?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.neg_ref());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly<C> {
        MultiPoly {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> MultiPoly<C> {
        if c.is_zero() {
            return MultiPoly::zero(self.m);
        }
        let mut out = MultiPoly::zero(self.m);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.mul_ref(c));
        }
        out
    }

    pub fn mul(&self, rhs: &MultiPoly<C>) -> Result<MultiPoly<C>> {
        self.check_dim(rhs, "mul")?;
        let mut out = MultiPoly::zero(self.m);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.checked_add(eb), ca.mul_ref(cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> MultiPoly<C> {
        let mut acc = MultiPoly::one(self.m);
        for _ in 0..e {
            acc = acc.mul(self).expect("same dim");
        }
        acc
    }

    /// Multiply by a single variable.
    pub fn mul_var(&self, v: Var) -> MultiPoly<C> {
        let idx = v.index(self.m);
        let mut out = MultiPoly::zero(self.m);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.0[idx] = e2.0[idx].checked_add(1).expect("exponent overflow");
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Exact partial derivative.
    pub fn deriv(&self, v: Var) -> MultiPoly<C>
    where
        C: MulByInt,
    {
        let idx = v.index(self.m);
        let mut out = MultiPoly::zero(self.m);
        for (e, c) in &self.terms {
            let pow = e.0[idx];
            if pow == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.0[idx] -= 1;
            out.add_term(e2, c.mul_int(pow as i64));
        }
        out
    }

    /// `(deg_x, deg_u)` when bihomogeneous (every term has the same x-degree
    /// and the same u-degree). Zero reports `None` as well.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let bid = (first.deg_x(), first.deg_u());
        for e in it {
            if (e.deg_x(), e.deg_u()) != bid {
                return None;
            }
        }
        Some(bid)
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.is_zero() || self.bidegree().is_some()
    }

    pub fn depends_only_on_u(&self) -> bool {
        self.terms.keys().all(|e| e.deg_x() == 0)
    }

    pub fn depends_only_on_x(&self) -> bool {
        self.terms.keys().all(|e| e.deg_u() == 0)
    }

    /// Split into bihomogeneous components, keyed by bidegree.
    pub fn bihomogeneous_components(&self) -> BTreeMap<(u32, u32), MultiPoly<C>> {
        let mut out: BTreeMap<(u32, u32), MultiPoly<C>> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry((e.deg_x(), e.deg_u()))
                .or_insert_with(|| MultiPoly::zero(self.m))
                .add_term(e.clone(), c.clone());
        }
        out
    }

    /// Exchange the roles of the `x` and `u` variable blocks.
    pub fn swap_xu(&self) -> MultiPoly<C> {
        let m = self.m as usize;
        let mut out = MultiPoly::zero(self.m);
        for (e, c) in &self.terms {
            let mut e2 = vec![0u8; 2 * m];
            e2[..m].copy_from_slice(&e.0[m..]);
            e2[m..].copy_from_slice(&e.0[..m]);
            out.add_term(Expo(e2), c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(self.m);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

/// Scalars that can be multiplied by a machine integer (derivative rule).
pub trait MulByInt {
    fn mul_int(&self, n: i64) -> Self;
}

impl MulByInt for Coefficient {
    fn mul_int(&self, n: i64) -> Self {
        self * &Coefficient::from_int(n)
    }
}

impl MulByInt for AlphaPoly {
    fn mul_int(&self, n: i64) -> Self {
        self.scale(&Coefficient::from_int(n))
    }
}

impl MultiPoly<Coefficient> {
    /// `||x||^2`.
    pub fn norm_sq_x(m: u32) -> Self {
        let mut p = MultiPoly::zero(m);
        for j in 1..=m {
            let mut e = Expo::zeros(m);
            e.0[Var::X(j).index(m)] = 2;
            p.add_term(e, Coefficient::one());
        }
        p
    }

    /// `||u||^2`.
    pub fn norm_sq_u(m: u32) -> Self {
        let mut p = MultiPoly::zero(m);
        for j in 1..=m {
            let mut e = Expo::zeros(m);
            e.0[Var::U(j).index(m)] = 2;
            p.add_term(e, Coefficient::one());
        }
        p
    }

    /// `<u, x>`.
    pub fn inner_ux(m: u32) -> Self {
        let mut p = MultiPoly::zero(m);
        for j in 1..=m {
            let mut e = Expo::zeros(m);
            e.0[Var::X(j).index(m)] = 1;
            e.0[Var::U(j).index(m)] = 1;
            p.add_term(e, Coefficient::one());
        }
        p
    }

    /// Substitute `u -> x u x = ||x||^2 u - 2 <u,x> x` into a polynomial that
    /// may also depend on `x`. A u-homogeneous input of degree `k` becomes
    /// bihomogeneous of bidegree `(old deg_x + 2k, k)`.
    pub fn substitute_u_to_xux(&self) -> MultiPoly<Coefficient> {
        let m = self.m;
        let norm_x = MultiPoly::norm_sq_x(m);
        let inner = MultiPoly::inner_ux(m);
        // Images of the u_j under the substitution.
        let images: Vec<MultiPoly<Coefficient>> = (1..=m)
            .map(|j| {
                let a = MultiPoly::var(m, Var::U(j)).mul(&norm_x).unwrap();
                let b = inner
                    .mul_var(Var::X(j))
                    .scale(&Coefficient::from_int(-2));
                a.add(&b).unwrap()
            })
            .collect();
        let mut out = MultiPoly::zero(m);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(m, c.clone());
            let (xs, us) = e.0.split_at(m as usize);
            // The x-part of the monomial is untouched.
            let mut xe = Expo::zeros(m);
            xe.0[..m as usize].copy_from_slice(xs);
            term = term.mul(&MultiPoly::monomial(m, xe, Coefficient::one())).unwrap();
            for (j0, &pow) in us.iter().enumerate() {
                if pow > 0 {
                    term = term.mul(&images[j0].pow(pow as u32)).unwrap();
                }
            }
            out = out.add(&term).unwrap();
        }
        out
    }

    /// The substitution `u -> x u x` for polynomials in `u` only.
    pub fn substitute_xux(&self) -> Result<MultiPoly<Coefficient>> {
        if !self.depends_only_on_u() {
            return Err(Error::domain("substitute_xux input depends on x"));
        }
        Ok(self.substitute_u_to_xux())
    }

    /// Evaluate at a point given by `2m` coordinates `(x1..xm, u1..um)`.
    pub fn eval(&self, point: &[Coefficient]) -> Coefficient {
        assert_eq!(point.len(), 2 * self.m as usize);
        let mut acc = Coefficient::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (idx, &pow) in e.0.iter().enumerate() {
                if pow > 0 {
                    term = &term * &point[idx].pow(pow as u32);
                }
            }
            acc += &term;
        }
        acc
    }

    /// Conjugate every coefficient.
    pub fn conj(&self) -> MultiPoly<Coefficient> {
        self.map_coeffs(|c| c.conj())
    }

    /// Embed into the alpha-polynomial coefficient ring.
    pub fn to_alpha(&self) -> MultiPoly<AlphaPoly> {
        self.map_coeffs(|c| AlphaPoly::constant(c.clone()))
    }

    /// Exact division by `||x||^2` repeated `times` times.
    ///
    /// Errors when the input is not divisible.
    pub fn div_exact_norm_sq_x(&self, times: u32) -> Result<MultiPoly<Coefficient>> {
        let mut cur = self.clone();
        let norm = MultiPoly::norm_sq_x(self.m);
        for _ in 0..times {
            cur = div_exact(&cur, &norm)?;
        }
        Ok(cur)
    }
}

/// Exact single-divisor multivariate division (remainder must vanish).
fn div_exact(p: &MultiPoly<Coefficient>, d: &MultiPoly<Coefficient>) -> Result<MultiPoly<Coefficient>> {
    let mut rem = p.clone();
    let mut quot = MultiPoly::zero(p.dim());
    let (de, dc) = {
        let e = d.leading_expo().expect("nonzero divisor").clone();
        let c = d.coeff(&e);
        (e, c)
    };
    let dc_inv = dc.inv().expect("leading coefficient nonzero");
    while let Some(le) = rem.leading_expo().cloned() {
        // Divisibility of the leading monomial.
        if le.0.iter().zip(&de.0).any(|(a, b)| a < b) {
            return Err(Error::domain("exact division has nonzero remainder"));
        }
        let qe = Expo(le.0.iter().zip(&de.0).map(|(a, b)| a - b).collect());
        let qc = &rem.coeff(&le) * &dc_inv;
        for (ed, cd) in d.terms() {
            rem.add_term(qe.checked_add(ed), -(&qc * cd));
        }
        quot.add_term(qe, qc);
    }
    Ok(quot)
}

impl MultiPoly<AlphaPoly> {
    /// Evaluate the formal parameter at a rational value.
    pub fn eval_alpha(&self, at: &Coefficient) -> MultiPoly<Coefficient> {
        let mut out = MultiPoly::zero(self.dim());
        for (e, c) in self.terms() {
            out.add_term(e.clone(), c.eval(at));
        }
        out
    }
}

fn fmt_expo(e: &Expo, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let m = e.0.len() / 2;
    for (idx, &pow) in e.0.iter().enumerate() {
        if pow == 0 {
            continue;
        }
        if idx < m {
            write!(f, " x{}^{}", idx + 1, pow)?;
        } else {
            write!(f, " u{}^{}", idx - m + 1, pow)?;
        }
    }
    Ok(())
}

impl<C: Scalar> fmt::Display for MultiPoly<C> {
    /// Canonical text form: terms in descending term order, joined by ` + `,
    /// each as `<coefficient> x1^e .. um^e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            fmt_expo(e, f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(m: u32, j: u32) -> MultiPoly {
        MultiPoly::var(m, Var::X(j))
    }

    fn u(m: u32, j: u32) -> MultiPoly {
        MultiPoly::var(m, Var::U(j))
    }

    #[test]
    fn ring_axioms_smoke() {
        let m = 3;
        let p = x(m, 1);
        assert_eq!(p.mul(&p).unwrap(), p.pow(2));
        let inner = MultiPoly::inner_ux(m);
        assert_eq!(inner.mul(&MultiPoly::one(m)).unwrap(), inner);
    }

    #[test]
    fn bidegree_of_products_adds() {
        let m = 4;
        let p = MultiPoly::norm_sq_x(m);
        let q = MultiPoly::inner_ux(m);
        let pq = p.mul(&q).unwrap();
        assert_eq!(p.bidegree(), Some((2, 0)));
        assert_eq!(q.bidegree(), Some((1, 1)));
        assert_eq!(pq.bidegree(), Some((3, 1)));
    }

    #[test]
    fn substitution_matches_expansion() {
        // ||x||^2 (u1 - i u2) - 2 <u,x> (x1 - i x2)  ==  substitute_xux(u1 - i u2)
        let m = 3;
        let i = Coefficient::i();
        let w = u(m, 1).sub(&u(m, 2).scale(&i)).unwrap();
        let lhs = MultiPoly::norm_sq_x(m)
            .mul(&w)
            .unwrap()
            .sub(
                &MultiPoly::inner_ux(m)
                    .mul(&x(m, 1).sub(&x(m, 2).scale(&i)).unwrap())
                    .unwrap()
                    .scale(&Coefficient::from_int(2)),
            )
            .unwrap();
        assert_eq!(w.substitute_xux().unwrap(), lhs);
        assert_eq!(lhs.bidegree(), Some((2, 1)));
    }

    #[test]
    fn substitution_rejects_x_dependence() {
        let m = 3;
        assert!(x(m, 1).substitute_xux().is_err());
    }

    #[test]
    fn substitution_degree_zero() {
        let m = 5;
        let one = MultiPoly::one(m);
        assert_eq!(one.substitute_xux().unwrap(), one);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = x(3, 1);
        let q = x(4, 1);
        assert!(p.mul(&q).is_err());
    }

    #[test]
    fn exact_division_by_norm() {
        let m = 4;
        let norm = MultiPoly::norm_sq_x(m);
        let p = norm.mul(&MultiPoly::inner_ux(m)).unwrap();
        assert_eq!(p.div_exact_norm_sq_x(1).unwrap(), MultiPoly::inner_ux(m));
        assert!(x(m, 1).div_exact_norm_sq_x(1).is_err());
    }

    #[test]
    fn swap_blocks() {
        let m = 3;
        assert_eq!(u(m, 2).swap_xu(), x(m, 2));
        assert_eq!(MultiPoly::inner_ux(m).swap_xu(), MultiPoly::inner_ux(m));
    }

    #[test]
    fn canonical_display() {
        let m = 2;
        let p = x(m, 1)
            .pow(2)
            .add(&u(m, 2).scale(&Coefficient::from_ratio(-1, 2)))
            .unwrap();
        assert_eq!(p.to_string(), "1/1 x1^2 + -1/2 u2^1");
    }
}
