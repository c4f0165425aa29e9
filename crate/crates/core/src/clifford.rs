//! The complex Clifford algebra on generators `e_1..e_n` with
//! `e_a e_b + e_b e_a = -2 delta_ab`, the Witt basis, the primitive
//! idempotent realizing the spinor space as a left ideal, and spinor-valued
//! polynomials with the Dirac operators.
//!
//! Blades are stored as bitmasks with sign bookkeeping by transposition
//! counting. For odd vector dimension `m` the spinor space is realized inside
//! the algebra of dimension `m + 1`, so the algebra dimension carried by a
//! value is always even where the idempotent is involved.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeffpoly::{Coefficient, ExactMatrix, MultiPoly, Var};
use crate::diffop::DiffOp;
use crate::{Error, Result};

/// Product of two basis blades (bitmasks over generators).
///
/// Returns the resulting blade and `true` when the sign is negative. The
/// metric contributes one `-1` per common generator.
pub fn blade_mul(a: u64, b: u64) -> (u64, bool) {
    let mut swaps: u32 = 0;
    // Move each generator of b left past the generators of a above it.
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        let higher = a >> (bit + 1);
        swaps += higher.count_ones();
    }
    let metric = (a & b).count_ones();
    ((a ^ b), (swaps + metric) % 2 == 1)
}

/// An element of the complex Clifford algebra of a given (generator)
/// dimension: a finite map from basis blades to coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct CliffordElement {
    dim: u32,
    terms: BTreeMap<u64, Coefficient>,
}

impl CliffordElement {
    pub fn zero(dim: u32) -> Self {
        CliffordElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: u32, c: Coefficient) -> Self {
        let mut e = CliffordElement::zero(dim);
        e.add_term(0, c);
        e
    }

    pub fn one(dim: u32) -> Self {
        CliffordElement::scalar(dim, Coefficient::one())
    }

    /// The generator `e_a`, 1-based.
    pub fn generator(dim: u32, a: u32) -> Self {
        assert!(a >= 1 && a <= dim, "generator index out of range");
        let mut e = CliffordElement::zero(dim);
        e.add_term(1 << (a - 1), Coefficient::one());
        e
    }

    /// Witt basis vector `f_j = (e_{2j-1} - i e_{2j}) / 2`.
    pub fn witt_f(dim: u32, j: u32) -> Self {
        let half = Coefficient::from_ratio(1, 2);
        let a = CliffordElement::generator(dim, 2 * j - 1).scale(&half);
        let b = CliffordElement::generator(dim, 2 * j).scale(&(&half * &Coefficient::i()));
        a.sub(&b)
    }

    /// Witt basis vector `f_j^dag = -(e_{2j-1} + i e_{2j}) / 2`.
    pub fn witt_f_dag(dim: u32, j: u32) -> Self {
        let half = Coefficient::from_ratio(-1, 2);
        let a = CliffordElement::generator(dim, 2 * j - 1).scale(&half);
        let b = CliffordElement::generator(dim, 2 * j).scale(&(&half * &Coefficient::i()));
        a.add(&b)
    }

    /// The primitive idempotent `I = (f_1 f_1^dag) ... (f_n f_n^dag)` for an
    /// even algebra dimension `2n`.
    pub fn idempotent(dim: u32) -> Result<Self> {
        if dim % 2 != 0 {
            return Err(Error::domain(format!(
                "idempotent needs an even algebra dimension, got {dim}"
            )));
        }
        let mut acc = CliffordElement::one(dim);
        for j in 1..=dim / 2 {
            let pair = CliffordElement::witt_f(dim, j).mul(&CliffordElement::witt_f_dag(dim, j))?;
            acc = acc.mul(&pair)?;
        }
        Ok(acc)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &Coefficient)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, blade: u64, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_dim(&self, other: &CliffordElement, op: &'static str) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
                op,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &CliffordElement) -> CliffordElement {
        self.check_dim(rhs, "clifford add").expect("dim checked");
        let mut out = self.clone();
        for (&b, c) in &rhs.terms {
            out.add_term(b, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &CliffordElement) -> CliffordElement {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> CliffordElement {
        CliffordElement {
            dim: self.dim,
            terms: self.terms.iter().map(|(&b, c)| (b, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> CliffordElement {
        let mut out = CliffordElement::zero(self.dim);
        for (&b, a) in &self.terms {
            out.add_term(b, a * c);
        }
        out
    }

    /// Bilinear associative product obeying the generator relations.
    pub fn mul(&self, rhs: &CliffordElement) -> Result<CliffordElement> {
        self.check_dim(rhs, "clifford mul")?;
        let mut out = CliffordElement::zero(self.dim);
        for (&ba, ca) in &self.terms {
            for (&bb, cb) in &rhs.terms {
                let (blade, negative) = blade_mul(ba, bb);
                let c = ca * cb;
                out.add_term(blade, if negative { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Coordinates over the full blade basis of the algebra (length `2^dim`).
    pub fn blade_coords(&self) -> Vec<Coefficient> {
        let n = 1usize << self.dim;
        let mut v = vec![Coefficient::zero(); n];
        for (&b, c) in &self.terms {
            v[b as usize] = c.clone();
        }
        v
    }
}

fn fmt_blade(blade: u64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if blade == 0 {
        return Ok(());
    }
    write!(f, "*e")?;
    for a in 0..64 {
        if blade & (1 << a) != 0 {
            write!(f, "{}", a + 1)?;
        }
    }
    Ok(())
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&b, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            fmt_blade(b, f)?;
        }
        Ok(())
    }
}

/// The spinor space of an even-dimensional algebra: the left ideal generated
/// by the primitive idempotent, with a fixed echelonized basis and the
/// matrices of left multiplication by the generators.
pub struct SpinorSpace {
    alg_dim: u32,
    basis: Vec<CliffordElement>,
    /// Pivot blade of each echelon basis row; used to expand ideal elements.
    pivots: Vec<usize>,
    rref: ExactMatrix,
    /// `left_mul[j]` is the matrix of `s -> e_{j+1} s` on the basis.
    left_mul: Vec<ExactMatrix>,
}

impl SpinorSpace {
    pub fn new(alg_dim: u32) -> Result<Self> {
        let idem = CliffordElement::idempotent(alg_dim)?;
        let nblades = 1usize << alg_dim;
        // Echelonize the span of { e_A I } over blade coordinates.
        let mut rows: Vec<Vec<Coefficient>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let mut blades: Vec<u64> = (0..nblades as u64).collect();
        blades.sort_by_key(|b| (b.count_ones(), *b));
        for blade in blades {
            let mut e = CliffordElement::zero(alg_dim);
            e.add_term(blade, Coefficient::one());
            let cand = e.mul(&idem)?;
            let mut coords = cand.blade_coords();
            // Reduce against the current echelon rows.
            for (row, &p) in rows.iter().zip(&pivots) {
                if !coords[p].is_zero() {
                    let f = coords[p].clone();
                    for (t, r) in coords.iter_mut().zip(row) {
                        if !r.is_zero() {
                            *t = &*t - &(&f * r);
                        }
                    }
                }
            }
            if let Some(p) = coords.iter().position(|c| !c.is_zero()) {
                let inv = coords[p].inv().unwrap();
                for t in coords.iter_mut() {
                    if !t.is_zero() {
                        *t = &*t * &inv;
                    }
                }
                // Back-substitute into earlier rows to keep the form reduced.
                for row in rows.iter_mut() {
                    if !row[p].is_zero() {
                        let f = row[p].clone();
                        for (t, s) in row.iter_mut().zip(&coords) {
                            if !s.is_zero() {
                                *t = &*t - &(&f * s);
                            }
                        }
                    }
                }
                rows.push(coords);
                pivots.push(p);
            }
        }
        // Canonical basis: element i is the ideal element whose reduced
        // blade coordinates are echelon row i.
        let dim_s = rows.len();
        let mut canonical = Vec::with_capacity(dim_s);
        for row in &rows {
            let mut e = CliffordElement::zero(alg_dim);
            for (b, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    e.add_term(b as u64, c.clone());
                }
            }
            canonical.push(e);
        }
        let rref = ExactMatrix::from_rows(&rows);
        let mut space = SpinorSpace {
            alg_dim,
            basis: canonical,
            pivots,
            rref,
            left_mul: Vec::new(),
        };
        let mut mats = Vec::with_capacity(alg_dim as usize);
        for j in 1..=alg_dim {
            let gen = CliffordElement::generator(alg_dim, j);
            let mut cols = Vec::with_capacity(dim_s);
            for s in &space.basis {
                cols.push(space.expand(&gen.mul(s)?)?);
            }
            mats.push(ExactMatrix::from_columns(&cols));
        }
        space.left_mul = mats;
        Ok(space)
    }

    pub fn alg_dim(&self) -> u32 {
        self.alg_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CliffordElement] {
        &self.basis
    }

    /// Matrix of left multiplication by `e_j` (1-based) on the spinor basis.
    pub fn left_mul_matrix(&self, j: u32) -> &ExactMatrix {
        &self.left_mul[(j - 1) as usize]
    }

    /// Expand an element of the ideal over the spinor basis.
    pub fn expand(&self, e: &CliffordElement) -> Result<Vec<Coefficient>> {
        let mut coords = e.blade_coords();
        let mut out = vec![Coefficient::zero(); self.dim()];
        for (i, &p) in self.pivots.iter().enumerate() {
            if coords[p].is_zero() {
                continue;
            }
            let f = coords[p].clone();
            for (b, slot) in coords.iter_mut().enumerate() {
                let r = self.rref.get(i, b);
                if !r.is_zero() {
                    *slot = &*slot - &(&f * r);
                }
            }
            out[i] = f;
        }
        if coords.iter().any(|c| !c.is_zero()) {
            return Err(Error::domain(
                "element does not lie in the spinor ideal".to_string(),
            ));
        }
        Ok(out)
    }
}

/// A Clifford-algebra-valued polynomial in `(x, u)`: a finite map from basis
/// blades to scalar polynomial components.
///
/// The vector dimension `m` (number of active variables) and the algebra
/// dimension may differ: odd `m` runs with the algebra of dimension `m + 1`.
#[derive(Clone, PartialEq, Debug)]
pub struct SpinorPoly {
    m: u32,
    alg_dim: u32,
    comps: BTreeMap<u64, MultiPoly>,
}

impl SpinorPoly {
    pub fn zero(m: u32, alg_dim: u32) -> Self {
        SpinorPoly {
            m,
            alg_dim,
            comps: BTreeMap::new(),
        }
    }

    /// A constant element of the algebra as a polynomial.
    pub fn from_element(m: u32, e: &CliffordElement) -> Self {
        let mut out = SpinorPoly::zero(m, e.dim());
        for (&b, c) in e.terms() {
            out.add_component(b, MultiPoly::constant(m, c.clone()));
        }
        out
    }

    /// A scalar polynomial times a constant algebra element.
    pub fn from_poly_element(p: &MultiPoly, e: &CliffordElement) -> Self {
        let mut out = SpinorPoly::zero(p.dim(), e.dim());
        for (&b, c) in e.terms() {
            out.add_component(b, p.scale(c));
        }
        out
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn alg_dim(&self) -> u32 {
        self.alg_dim
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&u64, &MultiPoly)> {
        self.comps.iter()
    }

    pub fn component(&self, blade: u64) -> MultiPoly {
        self.comps
            .get(&blade)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.m))
    }

    pub fn add_component(&mut self, blade: u64, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        match self.comps.entry(blade) {
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

    fn check(&self, other: &SpinorPoly, op: &'static str) -> Result<()> {
        if self.m != other.m || self.alg_dim != other.alg_dim {
            return Err(Error::DimensionMismatch {
                left: self.m,
                right: other.m,
                op,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &SpinorPoly) -> Result<SpinorPoly> {
        self.check(rhs, "spinor add")?;
        let mut out = self.clone();
        for (&b, p) in &rhs.comps {
            out.add_component(b, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &SpinorPoly) -> Result<SpinorPoly> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> SpinorPoly {
        SpinorPoly {
            m: self.m,
            alg_dim: self.alg_dim,
            comps: self.comps.iter().map(|(&b, p)| (b, p.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> SpinorPoly {
        let mut out = SpinorPoly::zero(self.m, self.alg_dim);
        for (&b, p) in &self.comps {
            out.add_component(b, p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Result<SpinorPoly> {
        let mut out = SpinorPoly::zero(self.m, self.alg_dim);
        for (&b, q) in &self.comps {
            out.add_component(b, q.mul(p)?);
        }
        Ok(out)
    }

    /// Left multiplication by a constant algebra element.
    pub fn left_mul_element(&self, e: &CliffordElement) -> Result<SpinorPoly> {
        let mut out = SpinorPoly::zero(self.m, self.alg_dim);
        for (&be, ce) in e.terms() {
            for (&bf, pf) in &self.comps {
                let (blade, negative) = blade_mul(be, bf);
                let scaled = pf.scale(ce);
                out.add_component(blade, if negative { scaled.neg() } else { scaled });
            }
        }
        Ok(out)
    }

    /// Right multiplication by a constant algebra element.
    pub fn right_mul_element(&self, e: &CliffordElement) -> Result<SpinorPoly> {
        let mut out = SpinorPoly::zero(self.m, self.alg_dim);
        for (&bf, pf) in &self.comps {
            for (&be, ce) in e.terms() {
                let (blade, negative) = blade_mul(bf, be);
                let scaled = pf.scale(ce);
                out.add_component(blade, if negative { scaled.neg() } else { scaled });
            }
        }
        Ok(out)
    }

    /// Componentwise partial derivative.
    pub fn deriv(&self, v: Var) -> SpinorPoly {
        let mut out = SpinorPoly::zero(self.m, self.alg_dim);
        for (&b, p) in &self.comps {
            out.add_component(b, p.deriv(v));
        }
        out
    }

    /// Apply a scalar operator to every component.
    pub fn apply_scalar(&self, op: &DiffOp) -> Result<SpinorPoly> {
        let mut out = SpinorPoly::zero(self.m, self.alg_dim);
        for (&b, p) in &self.comps {
            out.add_component(b, op.apply(p)?);
        }
        Ok(out)
    }

    /// Dirac operator `sum_j e_j d/dx_j` (or the `u` version).
    pub fn dirac(&self, in_u: bool) -> Result<SpinorPoly> {
        let mut out = SpinorPoly::zero(self.m, self.alg_dim);
        for j in 1..=self.m {
            let v = if in_u { Var::U(j) } else { Var::X(j) };
            let d = self.deriv(v);
            out = out.add(&d.left_mul_element(&CliffordElement::generator(self.alg_dim, j))?)?;
        }
        Ok(out)
    }

    /// Left multiplication by the vector variable `x` (or `u`):
    /// `sum_j x_j e_j`.
    pub fn vector_mul(&self, in_u: bool) -> Result<SpinorPoly> {
        let mut out = SpinorPoly::zero(self.m, self.alg_dim);
        for j in 1..=self.m {
            let v = if in_u { Var::U(j) } else { Var::X(j) };
            let mut scaled = SpinorPoly::zero(self.m, self.alg_dim);
            for (&b, p) in &self.comps {
                scaled.add_component(b, p.mul_var(v));
            }
            out = out.add(&scaled.left_mul_element(&CliffordElement::generator(self.alg_dim, j))?)?;
        }
        Ok(out)
    }

    /// Common bidegree of all components, when defined.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut bid = None;
        for p in self.comps.values() {
            let b = p.bidegree()?;
            match bid {
                None => bid = Some(b),
                Some(prev) if prev != b => return None,
                _ => {}
            }
        }
        bid
    }

    /// Whether every coefficient satisfies `c = c I` for the idempotent of
    /// the carried algebra dimension.
    pub fn is_spinor_valued(&self) -> Result<bool> {
        let idem = CliffordElement::idempotent(self.alg_dim)?;
        Ok(self.right_mul_element(&idem)? == *self)
    }
}

impl fmt::Display for SpinorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&b, p) in &self.comps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{p}]")?;
            fmt_blade(b, f)?;
        }
        Ok(())
    }
}

/// Split a u-harmonic spinor-valued polynomial `H` of u-degree `k` into its
/// monogenic refinement `H = M_k + u M_{k-1}`:
///
/// `M_{k-1} = -d_u H / (2k+m-2)`, `M_k = H + u d_u H / (2k+m-2)`.
pub fn monogenic_refine(h: &SpinorPoly, k: u32) -> Result<(SpinorPoly, SpinorPoly)> {
    let m = h.m();
    let denom = 2 * k as i64 + m as i64 - 2;
    if denom == 0 {
        return Err(Error::DegenerateParameter {
            what: "2k+m-2",
            m,
            k,
        });
    }
    let lap_u = crate::diffop::laplace_u(m);
    if !h.apply_scalar(&lap_u)?.is_zero() {
        return Err(Error::domain("monogenic_refine input is not harmonic in u"));
    }
    let du = h.dirac(true)?;
    let c = Coefficient::from_ratio(1, denom);
    let m_low = du.scale(&(-c.clone()));
    let m_high = h.add(&du.vector_mul(true)?.scale(&c))?;
    Ok((m_high, m_low))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_relations() {
        let dim = 6;
        for a in 1..=dim {
            for b in 1..=dim {
                let ea = CliffordElement::generator(dim, a);
                let eb = CliffordElement::generator(dim, b);
                let anti = ea.mul(&eb).unwrap().add(&eb.mul(&ea).unwrap());
                let expected = if a == b {
                    CliffordElement::scalar(dim, Coefficient::from_int(-2))
                } else {
                    CliffordElement::zero(dim)
                };
                assert_eq!(anti, expected, "relation failed for ({a},{b})");
            }
        }
    }

    #[test]
    fn e1_squared_is_minus_one() {
        let e1 = CliffordElement::generator(4, 1);
        assert_eq!(
            e1.mul(&e1).unwrap(),
            CliffordElement::scalar(4, Coefficient::from_int(-1))
        );
    }

    #[test]
    fn idempotent_squares_to_itself() {
        for dim in [4u32, 6] {
            let i = CliffordElement::idempotent(dim).unwrap();
            assert_eq!(i.mul(&i).unwrap(), i);
        }
    }

    #[test]
    fn spinor_space_dimension() {
        let s = SpinorSpace::new(6).unwrap();
        assert_eq!(s.dim(), 8);
        let s4 = SpinorSpace::new(4).unwrap();
        assert_eq!(s4.dim(), 4);
    }

    #[test]
    fn spinor_expansion_roundtrip() {
        let s = SpinorSpace::new(6).unwrap();
        let idem = CliffordElement::idempotent(6).unwrap();
        let e = CliffordElement::generator(6, 3)
            .mul(&CliffordElement::generator(6, 5))
            .unwrap()
            .mul(&idem)
            .unwrap();
        let coords = s.expand(&e).unwrap();
        let mut rebuilt = CliffordElement::zero(6);
        for (c, b) in coords.iter().zip(s.basis()) {
            rebuilt = rebuilt.add(&b.scale(c));
        }
        assert_eq!(rebuilt, e);
        // Something outside the ideal must be rejected.
        assert!(s.expand(&CliffordElement::one(6)).is_err());
    }

    #[test]
    fn dirac_of_vector_x_is_minus_m() {
        // d_x (sum_i e_i x_i) = sum_i e_i e_i = -m
        let m = 5;
        let alg = 6;
        let one = SpinorPoly::from_element(m, &CliffordElement::one(alg));
        let x_vec = one.vector_mul(false).unwrap();
        let img = x_vec.dirac(false).unwrap();
        let expected =
            SpinorPoly::from_element(m, &CliffordElement::scalar(alg, Coefficient::from_int(-5)));
        assert_eq!(img, expected);
    }

    #[test]
    fn dirac_squares_to_minus_laplacian() {
        let m = 4;
        let alg = 4;
        let p = MultiPoly::norm_sq_x(m)
            .mul(&MultiPoly::var(m, Var::X(2)))
            .unwrap();
        let f = SpinorPoly::from_poly_element(&p, &CliffordElement::generator(alg, 1));
        let twice = f.dirac(false).unwrap().dirac(false).unwrap();
        let lap = f.apply_scalar(&crate::diffop::laplace_x(m)).unwrap();
        assert_eq!(twice, lap.neg());
    }

    #[test]
    fn refine_constant_spinor() {
        let m = 5;
        let alg = 6;
        let idem = CliffordElement::idempotent(alg).unwrap();
        let s = SpinorPoly::from_element(m, &idem);
        let (mk, mlow) = monogenic_refine(&s, 0).unwrap();
        assert_eq!(mk, s);
        assert!(mlow.is_zero());
    }

    #[test]
    fn refine_u1_times_spinor() {
        // H = u1 s with m = 5: M_0 = -e1 s / 5, M_1 = u1 s + u e1 s / 5.
        let m = 5;
        let alg = 6;
        let idem = CliffordElement::idempotent(alg).unwrap();
        let h = SpinorPoly::from_poly_element(&MultiPoly::var(m, Var::U(1)), &idem);
        let (m1, m0) = monogenic_refine(&h, 1).unwrap();
        let e1s =
            SpinorPoly::from_element(m, &CliffordElement::generator(alg, 1).mul(&idem).unwrap());
        assert_eq!(m0, e1s.scale(&Coefficient::from_ratio(-1, 5)));
        let expected_m1 = h
            .add(
                &e1s.vector_mul(true)
                    .unwrap()
                    .scale(&Coefficient::from_ratio(1, 5)),
            )
            .unwrap();
        assert_eq!(m1, expected_m1);
        // Both refinement parts are monogenic in u.
        assert!(m0.dirac(true).unwrap().is_zero());
        assert!(m1.dirac(true).unwrap().is_zero());
        // Reconstruction.
        let back = m1.add(&m0.vector_mul(true).unwrap()).unwrap();
        assert_eq!(back, h);
        // Refining a monogenic part again returns (itself, 0).
        let (again, rest) = monogenic_refine(&m1, 1).unwrap();
        assert_eq!(again, m1);
        assert!(rest.is_zero());
    }

    #[test]
    fn spinor_valued_flag() {
        let alg = 6;
        let idem = CliffordElement::idempotent(alg).unwrap();
        let s = SpinorPoly::from_element(5, &idem);
        assert!(s.is_spinor_valued().unwrap());
        let not_s = SpinorPoly::from_element(5, &CliffordElement::one(alg));
        assert!(!not_s.is_spinor_valued().unwrap());
    }
}
