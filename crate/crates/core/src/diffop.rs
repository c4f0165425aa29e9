//! Scalar differential operators on [`MultiPoly`] values.
//!
//! A [`DiffOp`] is a finite sum of terms `p(x,u) * d^A` where `p` is a
//! polynomial coefficient and `d^A` a monomial in the partial derivatives
//! `d/dx_j`, `d/du_j`. Operators are stored in normal form (all derivatives
//! to the right of all coefficients), which makes operator equality plain
//! coefficient comparison. Composition re-normalizes via the Leibniz rule.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::coeffpoly::{Coefficient, Expo, MultiPoly, Var};
use crate::{Error, Result};

/// A scalar differential operator with polynomial coefficients, in normal
/// form: a map from derivative monomials (exponents over `d/dx_1..d/du_m`)
/// to polynomial coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct DiffOp {
    m: u32,
    terms: BTreeMap<Expo, MultiPoly>,
}

impl DiffOp {
    pub fn zero(m: u32) -> Self {
        DiffOp {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(m: u32) -> Self {
        DiffOp::mul_op(MultiPoly::one(m))
    }

    /// The operator "multiply by `p`".
    pub fn mul_op(p: MultiPoly) -> Self {
        let m = p.dim();
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(Expo::zeros(m), p);
        }
        DiffOp { m, terms }
    }

    /// A single partial derivative.
    pub fn partial(m: u32, v: Var) -> Self {
        let mut e = Expo::zeros(m);
        e.0[v.index(m)] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, MultiPoly::one(m));
        DiffOp { m, terms }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &MultiPoly)> {
        self.terms.iter()
    }

    fn check_dim(&self, other: &DiffOp, op: &'static str) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                left: self.m,
                right: other.m,
                op,
            });
        }
        Ok(())
    }

    pub fn add_term(&mut self, e: Expo, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&p).expect("same dim");
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &DiffOp) -> Result<DiffOp> {
        self.check_dim(rhs, "op add")?;
        let mut out = self.clone();
        for (e, p) in &rhs.terms {
            out.add_term(e.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &DiffOp) -> Result<DiffOp> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(e, p)| (e.clone(), p.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> DiffOp {
        if c.is_zero() {
            return DiffOp::zero(self.m);
        }
        DiffOp {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(e, p)| (e.clone(), p.scale(c)))
                .collect(),
        }
    }

    /// Apply to a polynomial; exact and linear.
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if self.m != f.dim() {
            return Err(Error::DimensionMismatch {
                left: self.m,
                right: f.dim(),
                op: "op apply",
            });
        }
        let mut out = MultiPoly::zero(self.m);
        for (e, p) in &self.terms {
            let mut g = f.clone();
            'deriv: for (idx, &pow) in e.0.iter().enumerate() {
                let v = index_var(self.m, idx);
                for _ in 0..pow {
                    g = g.deriv(v);
                    if g.is_zero() {
                        break 'deriv;
                    }
                }
            }
            if !g.is_zero() {
                out = out.add(&p.mul(&g)?)?;
            }
        }
        Ok(out)
    }

    /// Composition `self . other` (apply `other` first), re-normalized with
    /// the Leibniz rule.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_dim(other, "op compose")?;
        let n = 2 * self.m as usize;
        let mut out = DiffOp::zero(self.m);
        for (ea, pa) in &self.terms {
            for (eb, pb) in &other.terms {
                // p_a d^A (p_b d^B) = sum_{C <= A} binom(A,C) p_a (d^{A-C} p_b) d^{C+B}
                let mut stack: Vec<(usize, Expo, MultiPoly, Coefficient)> = vec![(
                    0,
                    Expo::zeros(self.m),
                    pb.clone(),
                    Coefficient::one(),
                )];
                while let Some((idx, c_expo, diffed, binco)) = stack.pop() {
                    if idx == n {
                        let mut e = c_expo.clone();
                        for t in 0..n {
                            e.0[t] += eb.0[t];
                        }
                        out.add_term(e, pa.mul(&diffed)?.scale(&binco));
                        continue;
                    }
                    let a = ea.0[idx];
                    // Choose how many of the `a` derivatives in slot idx hit
                    // the coefficient (a - c of them) vs pass through (c).
                    let v = index_var(self.m, idx);
                    let mut current = diffed.clone();
                    for c in (0..=a).rev() {
                        // `current` = d^{a-c} applied in slot idx.
                        if !current.is_zero() || c == a {
                            let mut e2 = c_expo.clone();
                            e2.0[idx] = c;
                            let bin = &binco * &Coefficient::binomial(a as u32, c as u32);
                            stack.push((idx + 1, e2, current.clone(), bin));
                        }
                        if c > 0 {
                            current = current.deriv(v);
                            if current.is_zero() && c > 1 {
                                // Remaining splits with more derivatives on the
                                // coefficient all vanish; but splits with fewer
                                // were already pushed. Skip the rest.
                                break;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn pow(&self, e: u32) -> Result<DiffOp> {
        let mut acc = DiffOp::identity(self.m);
        for _ in 0..e {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Drop every term whose derivative monomial has total u-order larger
    /// than `k`: such terms act as zero on u-degree-`k` arguments.
    pub fn prune_u_order_above(&self, k: u32) -> DiffOp {
        DiffOp {
            m: self.m,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.deg_u() <= k)
                .map(|(e, p)| (e.clone(), p.clone()))
                .collect(),
        }
    }
}

fn index_var(m: u32, idx: usize) -> Var {
    if idx < m as usize {
        Var::X(idx as u32 + 1)
    } else {
        Var::U((idx - m as usize) as u32 + 1)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let m = self.m as usize;
        let mut first = true;
        for (e, p) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p})")?;
            for (idx, &pow) in e.0.iter().enumerate() {
                if pow == 0 {
                    continue;
                }
                if idx < m {
                    write!(f, " dx{}^{}", idx + 1, pow)?;
                } else {
                    write!(f, " du{}^{}", idx - m + 1, pow)?;
                }
            }
        }
        Ok(())
    }
}

// ---- Named operators ----

/// Laplacian in the `x` variables.
pub fn laplace_x(m: u32) -> DiffOp {
    let mut op = DiffOp::zero(m);
    for j in 1..=m {
        let mut e = Expo::zeros(m);
        e.0[Var::X(j).index(m)] = 2;
        op.add_term(e, MultiPoly::one(m));
    }
    op
}

/// Laplacian in the `u` variables.
pub fn laplace_u(m: u32) -> DiffOp {
    let mut op = DiffOp::zero(m);
    for j in 1..=m {
        let mut e = Expo::zeros(m);
        e.0[Var::U(j).index(m)] = 2;
        op.add_term(e, MultiPoly::one(m));
    }
    op
}

/// Euler operator `sum_j x_j d/dx_j`.
pub fn euler_x(m: u32) -> DiffOp {
    let mut op = DiffOp::zero(m);
    for j in 1..=m {
        let mut e = Expo::zeros(m);
        e.0[Var::X(j).index(m)] = 1;
        op.add_term(e, MultiPoly::var(m, Var::X(j)));
    }
    op
}

/// Euler operator `sum_j u_j d/du_j`.
pub fn euler_u(m: u32) -> DiffOp {
    let mut op = DiffOp::zero(m);
    for j in 1..=m {
        let mut e = Expo::zeros(m);
        e.0[Var::U(j).index(m)] = 1;
        op.add_term(e, MultiPoly::var(m, Var::U(j)));
    }
    op
}

/// `<u, d_x> = sum_j u_j d/dx_j`.
pub fn inner_u_dx(m: u32) -> DiffOp {
    let mut op = DiffOp::zero(m);
    for j in 1..=m {
        let mut e = Expo::zeros(m);
        e.0[Var::X(j).index(m)] = 1;
        op.add_term(e, MultiPoly::var(m, Var::U(j)));
    }
    op
}

/// `<x, d_u> = sum_j x_j d/du_j`.
pub fn inner_x_du(m: u32) -> DiffOp {
    let mut op = DiffOp::zero(m);
    for j in 1..=m {
        let mut e = Expo::zeros(m);
        e.0[Var::U(j).index(m)] = 1;
        op.add_term(e, MultiPoly::var(m, Var::X(j)));
    }
    op
}

/// `<d_u, d_x> = sum_j d/du_j d/dx_j`.
pub fn inner_du_dx(m: u32) -> DiffOp {
    let mut op = DiffOp::zero(m);
    for j in 1..=m {
        let mut e = Expo::zeros(m);
        e.0[Var::X(j).index(m)] = 1;
        e.0[Var::U(j).index(m)] = 1;
        op.add_term(e, MultiPoly::one(m));
    }
    op
}

/// Multiplication by `||x||^2`.
pub fn norm_sq_x_op(m: u32) -> DiffOp {
    DiffOp::mul_op(MultiPoly::norm_sq_x(m))
}

/// Multiplication by `||u||^2`.
pub fn norm_sq_u_op(m: u32) -> DiffOp {
    DiffOp::mul_op(MultiPoly::norm_sq_u(m))
}

/// Multiplication by `<u, x>`.
pub fn inner_ux_op(m: u32) -> DiffOp {
    DiffOp::mul_op(MultiPoly::inner_ux(m))
}

/// Angular momentum `L^x_ij = x_i d/dx_j - x_j d/dx_i`.
pub fn angular_x(m: u32, i: u32, j: u32) -> DiffOp {
    let a = DiffOp::mul_op(MultiPoly::var(m, Var::X(i)))
        .compose(&DiffOp::partial(m, Var::X(j)))
        .unwrap();
    let b = DiffOp::mul_op(MultiPoly::var(m, Var::X(j)))
        .compose(&DiffOp::partial(m, Var::X(i)))
        .unwrap();
    a.sub(&b).unwrap()
}

/// Angular momentum `L^u_ij`.
pub fn angular_u(m: u32, i: u32, j: u32) -> DiffOp {
    let a = DiffOp::mul_op(MultiPoly::var(m, Var::U(i)))
        .compose(&DiffOp::partial(m, Var::U(j)))
        .unwrap();
    let b = DiffOp::mul_op(MultiPoly::var(m, Var::U(j)))
        .compose(&DiffOp::partial(m, Var::U(i)))
        .unwrap();
    a.sub(&b).unwrap()
}

/// The full rotation generator `L^x_ij + L^u_ij`.
pub fn angular_xu(m: u32, i: u32, j: u32) -> DiffOp {
    angular_x(m, i, j).add(&angular_u(m, i, j)).unwrap()
}

/// Special conformal generator
/// `C_j = 2<u,x> d/du_j - 2 u_j <x,d_u> + ||x||^2 d/dx_j - x_j (2E_x + m - 2)`.
pub fn special_conformal(m: u32, j: u32) -> DiffOp {
    let t1 = DiffOp::mul_op(MultiPoly::inner_ux(m).scale(&Coefficient::from_int(2)))
        .compose(&DiffOp::partial(m, Var::U(j)))
        .unwrap();
    let t2 = DiffOp::mul_op(MultiPoly::var(m, Var::U(j)).scale(&Coefficient::from_int(2)))
        .compose(&inner_x_du(m))
        .unwrap();
    let t3 = norm_sq_x_op(m).compose(&DiffOp::partial(m, Var::X(j))).unwrap();
    let shifted_euler = euler_x(m)
        .scale(&Coefficient::from_int(2))
        .add(&DiffOp::identity(m).scale(&Coefficient::from_int(m as i64 - 2)))
        .unwrap();
    let t4 = DiffOp::mul_op(MultiPoly::var(m, Var::X(j)))
        .compose(&shifted_euler)
        .unwrap();
    t1.sub(&t2).unwrap().add(&t3).unwrap().sub(&t4).unwrap()
}

fn check_denominators(m: u32, k: u32) -> Result<()> {
    if 2 * k as i64 + m as i64 - 2 == 0 {
        return Err(Error::DegenerateParameter {
            what: "2k+m-2",
            m,
            k,
        });
    }
    if 2 * k as i64 + m as i64 - 4 == 0 {
        return Err(Error::DegenerateParameter {
            what: "2k+m-4",
            m,
            k,
        });
    }
    Ok(())
}

/// The twistor operator `pi_k <u, d_x> = <u,d_x> - ||u||^2/(2k+m-4) <d_u,d_x>`,
/// raising the value degree from `k-1` to `k`.
pub fn twistor(m: u32, k: u32) -> Result<DiffOp> {
    check_denominators(m, k)?;
    let trace = norm_sq_u_op(m)
        .compose(&inner_du_dx(m))?
        .scale(&Coefficient::from_ratio(1, 2 * k as i64 + m as i64 - 4));
    inner_u_dx(m).sub(&trace)
}

/// The symbol of the twistor operator:
/// `pi_k <u, x> = <u,x> - ||u||^2/(2k+m-4) <x,d_u>`.
pub fn twistor_symbol(m: u32, k: u32) -> Result<DiffOp> {
    check_denominators(m, k)?;
    let trace = norm_sq_u_op(m)
        .compose(&inner_x_du(m))?
        .scale(&Coefficient::from_ratio(1, 2 * k as i64 + m as i64 - 4));
    inner_ux_op(m).sub(&trace)
}

/// The second-order conformally invariant operator on value degree `k`:
///
/// `D_k = Lap_x - 4/(2k+m-2) (<u,d_x> - ||u||^2/(2k+m-4) <d_u,d_x>) <d_u,d_x>`.
///
/// Terms whose derivative monomial lowers the u-degree by more than `k` act
/// as zero on degree-`k` values and are dropped, so `k = 0` gives the plain
/// Laplacian and `k = 1` the generalised Maxwell operator coefficientwise.
pub fn higher_spin_laplace(m: u32, k: u32) -> Result<DiffOp> {
    if m < 3 {
        return Err(Error::domain(format!("dimension m={m} too small, need m >= 3")));
    }
    if k == 0 {
        return Ok(laplace_x(m));
    }
    check_denominators(m, k)?;
    let correction = twistor(m, k)?
        .compose(&inner_du_dx(m))?
        .scale(&Coefficient::from_ratio(4, 2 * k as i64 + m as i64 - 2));
    Ok(laplace_x(m).sub(&correction)?.prune_u_order_above(k))
}

/// Order-`2k` factor with `A_2k D_k = Lap_x^{k+1} = D_k A_2k`, built by the
/// recursion `A_2 = Lap_x + 4/(m-4) <u,d_x><d_u,d_x>`,
/// `A_2k = Lap_x^k + 4/(2k+m-6) pi_k<u,d_x> A_{2k-2} <d_u,d_x>`.
pub fn a2k(m: u32, k: u32) -> Result<DiffOp> {
    if m <= 4 {
        return Err(Error::domain(format!("a2k requires m > 4, got m={m}")));
    }
    if k == 0 {
        return Ok(DiffOp::identity(m));
    }
    if k == 1 {
        let t = inner_u_dx(m)
            .compose(&inner_du_dx(m))?
            .scale(&Coefficient::from_ratio(4, m as i64 - 4));
        return laplace_x(m).add(&t);
    }
    let prev = a2k(m, k - 1)?;
    let c = 2 * k as i64 + m as i64 - 6;
    let t = twistor(m, k)?
        .compose(&prev)?
        .compose(&inner_du_dx(m))?
        .scale(&Coefficient::from_ratio(4, c));
    laplace_x(m).pow(k)?.add(&t)
}

/// Closed form of the conjugation of the Laplacian by the harmonic inversion,
/// acting on value degree `k`:
///
/// `||x||^4 Lap_x - 4(2k+m-4) pi_k<u,x> <x,d_u>
///  + 4||x||^2 (pi_k<u,x> <d_x,d_u> - pi_k<u,d_x> <x,d_u>)`.
///
/// The sign of the second term is fixed against the exact conjugation route
/// (see `radial::inversion` and the tests there).
pub fn jr_laplace_jr(m: u32, k: u32) -> Result<DiffOp> {
    check_denominators(m, k)?;
    let t1 = DiffOp::mul_op(MultiPoly::norm_sq_x(m).pow(2)).compose(&laplace_x(m))?;
    let t2 = twistor_symbol(m, k)?
        .compose(&inner_x_du(m))?
        .scale(&Coefficient::from_int(4 * (2 * k as i64 + m as i64 - 4)));
    let inner = twistor_symbol(m, k)?
        .compose(&inner_du_dx(m))?
        .sub(&twistor(m, k)?.compose(&inner_x_du(m))?)?;
    let t3 = norm_sq_x_op(m)
        .compose(&inner)?
        .scale(&Coefficient::from_int(4));
    t1.sub(&t2)?.add(&t3)
}

/// Names accepted by [`build_named`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OpName {
    LaplaceX,
    LaplaceU,
    EulerX,
    EulerU,
    InnerUDx,
    InnerXDu,
    InnerDuDx,
    NormSqX,
    NormSqU,
    InnerUx,
    HigherSpinLaplace,
    Twistor,
    TwistorSymbol,
    JrLaplaceJr,
    A2k,
}

impl FromStr for OpName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "laplace_x" => OpName::LaplaceX,
            "laplace_u" => OpName::LaplaceU,
            "euler_x" => OpName::EulerX,
            "euler_u" => OpName::EulerU,
            "inner_u_dx" => OpName::InnerUDx,
            "inner_x_du" => OpName::InnerXDu,
            "inner_du_dx" => OpName::InnerDuDx,
            "norm_sq_x" => OpName::NormSqX,
            "norm_sq_u" => OpName::NormSqU,
            "inner_ux" => OpName::InnerUx,
            "dk" | "higher_spin_laplace" => OpName::HigherSpinLaplace,
            "twistor" => OpName::Twistor,
            "twistor_symbol" => OpName::TwistorSymbol,
            "jr_laplace_jr" => OpName::JrLaplaceJr,
            "a2k" => OpName::A2k,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

/// Build a named operator for dimension `m` and value degree `k`.
pub fn build_named(name: OpName, m: u32, k: u32) -> Result<DiffOp> {
    if m < 3 {
        return Err(Error::domain(format!("dimension m={m} too small, need m >= 3")));
    }
    Ok(match name {
        OpName::LaplaceX => laplace_x(m),
        OpName::LaplaceU => laplace_u(m),
        OpName::EulerX => euler_x(m),
        OpName::EulerU => euler_u(m),
        OpName::InnerUDx => inner_u_dx(m),
        OpName::InnerXDu => inner_x_du(m),
        OpName::InnerDuDx => inner_du_dx(m),
        OpName::NormSqX => norm_sq_x_op(m),
        OpName::NormSqU => norm_sq_u_op(m),
        OpName::InnerUx => inner_ux_op(m),
        OpName::HigherSpinLaplace => higher_spin_laplace(m, k)?,
        OpName::Twistor => twistor(m, k)?,
        OpName::TwistorSymbol => twistor_symbol(m, k)?,
        OpName::JrLaplaceJr => jr_laplace_jr(m, k)?,
        OpName::A2k => a2k(m, k)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_of_norm_squared() {
        let m = 5;
        let p = MultiPoly::norm_sq_x(m);
        let img = laplace_x(m).apply(&p).unwrap();
        assert_eq!(img, MultiPoly::constant(m, Coefficient::from_int(10)));
    }

    #[test]
    fn dual_twistor_contraction() {
        let m = 5;
        let img = inner_du_dx(m).apply(&MultiPoly::inner_ux(m)).unwrap();
        assert_eq!(img, MultiPoly::constant(m, Coefficient::from_int(5)));
    }

    #[test]
    fn euler_eigenvalue() {
        // E_x (x1^2 u2) = 2 x1^2 u2
        let m = 3;
        let p = MultiPoly::var(m, Var::X(1))
            .pow(2)
            .mul(&MultiPoly::var(m, Var::U(2)))
            .unwrap();
        assert_eq!(
            euler_x(m).apply(&p).unwrap(),
            p.scale(&Coefficient::from_int(2))
        );
        assert_eq!(euler_u(m).apply(&p).unwrap(), p);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let m = 4;
        let a = special_conformal(m, 2);
        let b = higher_spin_laplace(m, 1).unwrap();
        let f = MultiPoly::inner_ux(m)
            .mul(&MultiPoly::norm_sq_x(m))
            .unwrap();
        let composed = a.compose(&b).unwrap().apply(&f).unwrap();
        let sequential = a.apply(&b.apply(&f).unwrap()).unwrap();
        assert_eq!(composed, sequential);
    }

    #[test]
    fn composition_is_associative() {
        let m = 3;
        let a = inner_u_dx(m);
        let b = norm_sq_x_op(m);
        let c = laplace_x(m);
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn sl2_commutator_on_constants() {
        // [Lap_x, ||x||^2] 1 = 2m, consistent with 4E_x + 2m.
        let m = 5;
        let comm = laplace_x(m).commutator(&norm_sq_x_op(m)).unwrap();
        let img = comm.apply(&MultiPoly::one(m)).unwrap();
        assert_eq!(img, MultiPoly::constant(m, Coefficient::from_int(10)));
        // As operators, [Lap_x, ||x||^2] = 4 E_x + 2m exactly.
        let expected = euler_x(m)
            .scale(&Coefficient::from_int(4))
            .add(&DiffOp::identity(m).scale(&Coefficient::from_int(2 * m as i64)))
            .unwrap();
        assert_eq!(comm, expected);
    }

    #[test]
    fn partials_commute() {
        let m = 4;
        let d1 = DiffOp::partial(m, Var::X(1));
        let d2 = DiffOp::partial(m, Var::X(3));
        assert!(d1.commutator(&d2).unwrap().is_zero());
    }

    #[test]
    fn degenerate_parameters_rejected() {
        assert!(higher_spin_laplace(4, 1).is_ok());
        assert!(higher_spin_laplace(2, 1).is_err()); // 2k+m-4 = 0
        assert!(twistor(2, 1).is_err());
        assert!(a2k(4, 1).is_err()); // needs m > 4
    }

    #[test]
    fn dk_kills_inner_ux_at_m5() {
        let m = 5;
        let dk = higher_spin_laplace(m, 1).unwrap();
        let img = dk.apply(&MultiPoly::inner_ux(m)).unwrap();
        assert!(img.is_zero(), "got {img}");
    }

    #[test]
    fn degenerations_are_coefficientwise() {
        let m = 6;
        assert_eq!(higher_spin_laplace(m, 0).unwrap(), laplace_x(m));
        // k = 1: Lap_x - (4/m) <u,d_x><d_u,d_x> coefficientwise.
        let maxwell = laplace_x(m)
            .sub(
                &inner_u_dx(m)
                    .compose(&inner_du_dx(m))
                    .unwrap()
                    .scale(&Coefficient::from_ratio(4, m as i64)),
            )
            .unwrap();
        assert_eq!(higher_spin_laplace(m, 1).unwrap(), maxwell);
    }
}
