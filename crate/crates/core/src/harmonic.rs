//! Exact bases of the polynomial spaces in play: harmonics, simplicial
//! harmonics, Howe harmonics, monogenics and simplicial monogenics, plus the
//! Fischer inner product, Fischer projection, highest weight vectors and the
//! reproducing kernel of the harmonic value space.
//!
//! Every basis is the exact nullspace of the stacked defining operators on a
//! bihomogeneous coordinate space, so each basis element is annihilated by
//! each defining operator exactly, and the basis order is canonical (driven
//! by the global graded-lexicographic monomial order).

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::clifford::{SpinorPoly, SpinorSpace};
use crate::coeffpoly::{Coefficient, ExactMatrix, Expo, MultiPoly, Rat, Var};
use crate::diffop::{self, DiffOp};
use crate::{Error, Result};

/// All monomials of a fixed bidegree, in the global term order, with
/// positional lookup. This is the coordinate chart every matrix uses.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    m: u32,
    list: Vec<Expo>,
    pos: HashMap<Expo, usize>,
}

impl MonomialIndex {
    pub fn new(m: u32, deg_x: u32, deg_u: u32) -> Self {
        let mut list = Vec::new();
        let mut xs = Vec::new();
        enumerate_monomials(m as usize, deg_x, &mut xs);
        let mut us = Vec::new();
        enumerate_monomials(m as usize, deg_u, &mut us);
        for x in &xs {
            for u in &us {
                let mut e = vec![0u8; 2 * m as usize];
                e[..m as usize].copy_from_slice(x);
                e[m as usize..].copy_from_slice(u);
                list.push(Expo(e));
            }
        }
        list.sort();
        let pos = list
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        MonomialIndex { m, list, pos }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn monomials(&self) -> &[Expo] {
        &self.list
    }

    pub fn monomial_poly(&self, i: usize) -> MultiPoly {
        MultiPoly::monomial(self.m, self.list[i].clone(), Coefficient::one())
    }

    /// Exact coordinates of a polynomial of this bidegree.
    pub fn coords(&self, p: &MultiPoly) -> Result<Vec<Coefficient>> {
        let mut v = vec![Coefficient::zero(); self.list.len()];
        for (e, c) in p.terms() {
            let Some(&i) = self.pos.get(e) else {
                return Err(Error::domain(format!(
                    "monomial outside the indexed bidegree space: {p}"
                )));
            };
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coords(&self, v: &[Coefficient]) -> MultiPoly {
        let mut p = MultiPoly::zero(self.m);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(self.list[i].clone(), c.clone());
            }
        }
        p
    }
}

fn enumerate_monomials(nvars: usize, degree: u32, out: &mut Vec<Vec<u8>>) {
    fn rec(nvars: usize, degree: u32, idx: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if idx == nvars - 1 {
            cur.push(degree as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for d in (0..=degree).rev() {
            cur.push(d as u8);
            rec(nvars, degree - d, idx + 1, cur, out);
            cur.pop();
        }
    }
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return;
    }
    let mut cur = Vec::new();
    rec(nvars, degree, 0, &mut cur, out);
}

/// `dim P_k(R^m)` = C(m+k-1, m-1).
pub fn dim_pk(m: u32, k: u32) -> u64 {
    use crate::coeffpoly::Coefficient as C;
    let b = C::binomial(m + k - 1, m - 1);
    b.re().numer().try_into().unwrap_or(0)
}

/// `dim H_k(R^m)` = C(m+k-1, m-1) - C(m+k-3, m-1).
pub fn dim_hk(m: u32, k: u32) -> u64 {
    if k < 2 {
        return dim_pk(m, k);
    }
    dim_pk(m, k) - dim_pk(m, k - 2)
}

/// Space tags for [`basis`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpaceTag {
    /// Harmonics of degree `k` in `u` alone: `ker Lap_u`.
    Hk,
    /// Simplicial harmonics of bidegree `(k, l)` = (x-degree, u-degree),
    /// `k >= l`: `ker(Lap_x, Lap_u, <d_u,d_x>, <x,d_u>)`.
    Hkl,
    /// Howe harmonics of bidegree `(l, k)` = (x-degree, u-degree):
    /// `ker(Lap_u, Lap_x, <d_u,d_x>)`.
    Howe,
    /// Spinor-valued monogenics of degree `k` in `u`: `ker d_u`.
    Mk,
    /// Simplicial monogenics of bidegree `(k, l)` = (x-degree, u-degree),
    /// `k >= l`: `ker(d_x, d_u, <x,d_u>)`, spinor-valued.
    Skl,
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceTag::Hk => "Hk",
            SpaceTag::Hkl => "Hkl",
            SpaceTag::Howe => "Howe",
            SpaceTag::Mk => "Mk",
            SpaceTag::Skl => "Skl",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for SpaceTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Hk" => SpaceTag::Hk,
            "Hkl" => SpaceTag::Hkl,
            "Howe" => SpaceTag::Howe,
            "Mk" => SpaceTag::Mk,
            "Skl" => SpaceTag::Skl,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

/// Which space to build: tag plus parameters.
#[derive(Clone, Copy, Debug)]
pub struct BasisSpec {
    pub tag: SpaceTag,
    pub m: u32,
    pub k: u32,
    pub l: u32,
}

/// A computed basis, scalar- or spinor-valued depending on the tag.
pub enum Basis {
    Scalar(Vec<MultiPoly>),
    Spinor(Vec<SpinorPoly>),
}

impl Basis {
    pub fn len(&self) -> usize {
        match self {
            Basis::Scalar(v) => v.len(),
            Basis::Spinor(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn scalar(self) -> Vec<MultiPoly> {
        match self {
            Basis::Scalar(v) => v,
            Basis::Spinor(_) => panic!("expected a scalar basis"),
        }
    }

    pub fn spinor(self) -> Vec<SpinorPoly> {
        match self {
            Basis::Spinor(v) => v,
            Basis::Scalar(_) => panic!("expected a spinor basis"),
        }
    }
}

/// Exact basis of the space described by `spec`, as the nullspace of its
/// stacked defining operators on the bihomogeneous coordinate space.
pub fn basis(spec: BasisSpec) -> Result<Basis> {
    let BasisSpec { tag, m, k, l } = spec;
    if m < 3 {
        return Err(Error::domain(format!("dimension m={m} too small, need m >= 3")));
    }
    match tag {
        SpaceTag::Hk => Ok(Basis::Scalar(scalar_kernel_basis(
            m,
            0,
            k,
            &[diffop::laplace_u(m)],
        )?)),
        SpaceTag::Hkl => {
            if k < l {
                return Err(Error::domain(format!(
                    "dominant weight condition violated: k={k} < l={l}"
                )));
            }
            Ok(Basis::Scalar(scalar_kernel_basis(
                m,
                k,
                l,
                &[
                    diffop::laplace_x(m),
                    diffop::laplace_u(m),
                    diffop::inner_du_dx(m),
                    diffop::inner_x_du(m),
                ],
            )?))
        }
        SpaceTag::Howe => Ok(Basis::Scalar(scalar_kernel_basis(
            m,
            l,
            k,
            &[
                diffop::laplace_u(m),
                diffop::laplace_x(m),
                diffop::inner_du_dx(m),
            ],
        )?)),
        SpaceTag::Mk => {
            let space = SpinorSpace::new(spinor_alg_dim(m))?;
            Ok(Basis::Spinor(spinor_kernel_basis(
                m,
                &space,
                0,
                k,
                &[SpinorOp::DiracU],
            )?))
        }
        SpaceTag::Skl => {
            if k < l {
                return Err(Error::domain(format!(
                    "dominant weight condition violated: k={k} < l={l}"
                )));
            }
            let space = SpinorSpace::new(spinor_alg_dim(m))?;
            Ok(Basis::Spinor(spinor_kernel_basis(
                m,
                &space,
                k,
                l,
                &[SpinorOp::DiracX, SpinorOp::DiracU, SpinorOp::InnerXDu],
            )?))
        }
    }
}

/// Even algebra dimension hosting the spinor space for vector dimension `m`.
pub fn spinor_alg_dim(m: u32) -> u32 {
    if m % 2 == 0 {
        m
    } else {
        m + 1
    }
}

/// Nullspace of stacked scalar operators on the bidegree-(dx, du) space.
pub fn scalar_kernel_basis(
    m: u32,
    deg_x: u32,
    deg_u: u32,
    ops: &[DiffOp],
) -> Result<Vec<MultiPoly>> {
    let domain = MonomialIndex::new(m, deg_x, deg_u);
    let mut blocks: Vec<ExactMatrix> = Vec::new();
    for op in ops {
        let mut codomain: Option<MonomialIndex> = None;
        let mut cols = Vec::with_capacity(domain.len());
        let mut images = Vec::with_capacity(domain.len());
        for i in 0..domain.len() {
            let img = op.apply(&domain.monomial_poly(i))?;
            if codomain.is_none() {
                if let Some((dx, du)) = img.bidegree() {
                    codomain = Some(MonomialIndex::new(m, dx, du));
                }
            }
            images.push(img);
        }
        let Some(codomain) = codomain else {
            continue; // operator vanishes on the whole space
        };
        for img in &images {
            cols.push(codomain.coords(img)?);
        }
        blocks.push(ExactMatrix::from_columns(&cols));
    }
    let stacked = match blocks.split_first() {
        None => ExactMatrix::zeros(0, domain.len()),
        Some((first, rest)) => rest.iter().fold(first.clone(), |acc, b| acc.vstack(b)),
    };
    Ok(stacked
        .nullspace()
        .into_iter()
        .map(|v| domain.from_coords(&v))
        .collect())
}

/// First-order spinor operators used as kernel systems.
#[derive(Clone, Copy, Debug)]
pub enum SpinorOp {
    DiracX,
    DiracU,
    InnerXDu,
}

impl SpinorOp {
    pub fn apply(self, f: &SpinorPoly) -> Result<SpinorPoly> {
        match self {
            SpinorOp::DiracX => f.dirac(false),
            SpinorOp::DiracU => f.dirac(true),
            SpinorOp::InnerXDu => f.apply_scalar(&diffop::inner_x_du(f.m())),
        }
    }
}

/// Coordinates for spinor-valued bihomogeneous polynomials: pairs of a
/// monomial slot and a spinor-basis slot.
pub struct SpinorIndex<'a> {
    pub monomials: MonomialIndex,
    pub space: &'a SpinorSpace,
}

impl<'a> SpinorIndex<'a> {
    pub fn new(m: u32, deg_x: u32, deg_u: u32, space: &'a SpinorSpace) -> Self {
        SpinorIndex {
            monomials: MonomialIndex::new(m, deg_x, deg_u),
            space,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len() * self.space.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn basis_element(&self, _m: u32, i: usize) -> SpinorPoly {
        let s = self.space.dim();
        let mono = self.monomials.monomial_poly(i / s);
        SpinorPoly::from_poly_element(&mono, &self.space.basis()[i % s])
    }

    /// Exact coordinates of a spinor polynomial of this bidegree.
    pub fn coords(&self, f: &SpinorPoly) -> Result<Vec<Coefficient>> {
        let s = self.space.dim();
        let mut out = vec![Coefficient::zero(); self.len()];
        // Group components by monomial, then expand the algebra element.
        let mut per_monomial: HashMap<Expo, crate::clifford::CliffordElement> = HashMap::new();
        for (&blade, poly) in f.components() {
            for (e, c) in poly.terms() {
                per_monomial
                    .entry(e.clone())
                    .or_insert_with(|| crate::clifford::CliffordElement::zero(f.alg_dim()))
                    .add_term(blade, c.clone());
            }
        }
        for (e, elem) in per_monomial {
            let Some(&slot) = self.monomials.pos.get(&e) else {
                return Err(Error::domain(
                    "spinor polynomial outside the indexed bidegree space".to_string(),
                ));
            };
            let coords = self.space.expand(&elem)?;
            for (t, c) in coords.into_iter().enumerate() {
                out[slot * s + t] = c;
            }
        }
        Ok(out)
    }

    pub fn from_coords(&self, m: u32, v: &[Coefficient]) -> SpinorPoly {
        let s = self.space.dim();
        let mut out = SpinorPoly::zero(m, self.space.alg_dim());
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = self.monomials.monomial_poly(i / s);
            let elem = self.space.basis()[i % s].scale(c);
            out = out
                .add(&SpinorPoly::from_poly_element(&mono, &elem))
                .expect("same dims");
        }
        out
    }
}

/// Nullspace of stacked first-order spinor operators on the spinor-valued
/// bidegree space.
pub fn spinor_kernel_basis(
    m: u32,
    space: &SpinorSpace,
    deg_x: u32,
    deg_u: u32,
    ops: &[SpinorOp],
) -> Result<Vec<SpinorPoly>> {
    let domain = SpinorIndex::new(m, deg_x, deg_u, space);
    let mut blocks: Vec<ExactMatrix> = Vec::new();
    for op in ops {
        let mut codomain: Option<SpinorIndex> = None;
        let mut images = Vec::with_capacity(domain.len());
        for i in 0..domain.len() {
            let img = op.apply(&domain.basis_element(m, i))?;
            if codomain.is_none() && !img.is_zero() {
                let (dx, du) = img.bidegree().ok_or_else(|| {
                    Error::domain("operator image not bihomogeneous".to_string())
                })?;
                codomain = Some(SpinorIndex::new(m, dx, du, space));
            }
            images.push(img);
        }
        let Some(codomain) = codomain else { continue };
        let mut cols = Vec::with_capacity(domain.len());
        for img in &images {
            cols.push(codomain.coords(img)?);
        }
        blocks.push(ExactMatrix::from_columns(&cols));
    }
    let stacked = match blocks.split_first() {
        None => ExactMatrix::zeros(0, domain.len()),
        Some((first, rest)) => rest.iter().fold(first.clone(), |acc, b| acc.vstack(b)),
    };
    Ok(stacked
        .nullspace()
        .into_iter()
        .map(|v| domain.from_coords(m, &v))
        .collect())
}

/// Fischer inner product on polynomials in `u`:
/// `[f, g] = (conj f)(d_u) g |_{u=0}`. Distinct monomials are orthogonal and
/// `[u^a, u^a] = a!`.
pub fn fischer_inner(f: &MultiPoly, g: &MultiPoly) -> Result<Coefficient> {
    if !f.depends_only_on_u() || !g.depends_only_on_u() {
        return Err(Error::domain("fischer_inner expects polynomials in u only"));
    }
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: g.dim(),
            op: "fischer_inner",
        });
    }
    let mut acc = Coefficient::zero();
    for (e, cf) in f.terms() {
        let cg = g.coeff(e);
        if cg.is_zero() {
            continue;
        }
        let mut fact = Coefficient::one();
        for &p in &e.0 {
            if p > 1 {
                fact = &fact * &Coefficient::factorial(p as u32);
            }
        }
        acc += &(&(&cf.conj() * &cg) * &fact);
    }
    Ok(acc)
}

/// Fischer pairing in `u` with the `x` block as a spectator: pairs the
/// u-part of `kernel` against `g` monomial by monomial, leaving a polynomial
/// in the `x` block. Coefficients of `kernel` are conjugated.
pub fn fischer_pair_in_u(kernel: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    if !g.depends_only_on_u() {
        return Err(Error::domain("fischer_pair_in_u: g must depend on u only"));
    }
    let m = kernel.dim() as usize;
    let mut out = MultiPoly::zero(kernel.dim());
    for (e, ck) in kernel.terms() {
        let mut u_part = Expo::zeros(kernel.dim() as u32);
        u_part.0[m..].copy_from_slice(&e.0[m..]);
        let cg = g.coeff(&u_part);
        if cg.is_zero() {
            continue;
        }
        let mut fact = Coefficient::one();
        for &p in &e.0[m..] {
            if p > 1 {
                fact = &fact * &Coefficient::factorial(p as u32);
            }
        }
        let mut x_part = Expo::zeros(kernel.dim() as u32);
        x_part.0[..m].copy_from_slice(&e.0[..m]);
        out.add_term(x_part, &(&ck.conj() * &cg) * &fact);
    }
    Ok(out)
}

/// The harmonic component `h_k` of a u-homogeneous `p = h_k + ||u||^2 q`.
pub fn fischer_project(p: &MultiPoly, k: u32) -> Result<MultiPoly> {
    if !p.depends_only_on_u() {
        return Err(Error::domain("fischer_project expects a polynomial in u"));
    }
    let m = p.dim();
    if p.is_zero() {
        return Ok(MultiPoly::zero(m));
    }
    if p.bidegree() != Some((0, k)) {
        return Err(Error::domain(format!(
            "fischer_project expects u-homogeneous input of degree {k}"
        )));
    }
    if k < 2 {
        return Ok(p.clone());
    }
    // Solve Lap_u (||u||^2 q) = Lap_u p for q in P_{k-2}(u); then
    // h = p - ||u||^2 q. The map q -> Lap_u(||u||^2 q) is invertible.
    let lap = diffop::laplace_u(m);
    let norm_u = MultiPoly::norm_sq_u(m);
    let domain = MonomialIndex::new(m, 0, k - 2);
    let mut cols = Vec::with_capacity(domain.len());
    for i in 0..domain.len() {
        let q = domain.monomial_poly(i);
        let img = lap.apply(&q.mul(&norm_u)?)?;
        cols.push(domain.coords(&img)?);
    }
    let mat = ExactMatrix::from_columns(&cols);
    let rhs = domain.coords(&lap.apply(p)?)?;
    let sol = mat
        .solve_many(&[rhs])
        .ok_or_else(|| Error::domain("trace solve failed".to_string()))?;
    let q = domain.from_coords(&sol[0]);
    let h = p.sub(&q.mul(&norm_u)?)?;
    debug_assert!(lap.apply(&h).unwrap().is_zero());
    Ok(h)
}

/// Kinds of highest weight vectors.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HwvKind {
    Harmonic,
    Monogenic,
}

/// The highest weight vector
/// `w_{k,l} = (x1 - i x2)^{k-l} ((x1 - i x2)(u3 - i u4) - (x3 - i x4)(u1 - i u2))^l`,
/// times the idempotent for the monogenic kind.
pub fn highest_weight_vector(kind: HwvKind, m: u32, k: u32, l: u32) -> Result<Basis> {
    if k < l {
        return Err(Error::domain(format!(
            "dominant weight condition violated: k={k} < l={l}"
        )));
    }
    if l >= 1 && m < 4 {
        return Err(Error::domain(format!(
            "highest weight vector with l={l} needs m >= 4, got m={m}"
        )));
    }
    if m < 2 {
        return Err(Error::domain("need m >= 2".to_string()));
    }
    let i = Coefficient::i();
    let zbar = |a: u32, b: u32| -> MultiPoly {
        MultiPoly::var(m, Var::X(a))
            .sub(&MultiPoly::var(m, Var::X(b)).scale(&i))
            .unwrap()
    };
    let wbar = |a: u32, b: u32| -> MultiPoly {
        MultiPoly::var(m, Var::U(a))
            .sub(&MultiPoly::var(m, Var::U(b)).scale(&i))
            .unwrap()
    };
    let mut w = zbar(1, 2).pow(k - l);
    if l >= 1 {
        let inner = zbar(1, 2)
            .mul(&wbar(3, 4))?
            .sub(&zbar(3, 4).mul(&wbar(1, 2))?)?;
        w = w.mul(&inner.pow(l))?;
    }
    match kind {
        HwvKind::Harmonic => Ok(Basis::Scalar(vec![w])),
        HwvKind::Monogenic => {
            let alg = spinor_alg_dim(m);
            let idem = crate::clifford::CliffordElement::idempotent(alg)?;
            Ok(Basis::Spinor(vec![SpinorPoly::from_poly_element(&w, &idem)]))
        }
    }
}

/// Gegenbauer coefficients of `C_k^(lambda)(t)` from the three-term
/// recurrence `C_0 = 1`, `C_1 = 2 lambda t`,
/// `n C_n = 2(n + lambda - 1) t C_{n-1} - (n + 2 lambda - 2) C_{n-2}`,
/// with exact rational `lambda`. Returned as dense coefficients in `t`.
pub fn gegenbauer_coeffs(k: u32, lambda: &Rat) -> Vec<Rat> {
    let mut c0: Vec<Rat> = vec![Rat::one()];
    if k == 0 {
        return c0;
    }
    let two = Rat::from_integer(2.into());
    let mut c1: Vec<Rat> = vec![Rat::zero(), &two * lambda];
    if k == 1 {
        return c1;
    }
    for n in 2..=k {
        let nr = Rat::from_integer(n.into());
        let a = &two * &(Rat::from_integer((n - 1).into()) + lambda) / &nr;
        let b = (Rat::from_integer((n - 2).into()) + &two * lambda) / &nr;
        let mut next = vec![Rat::zero(); n as usize + 1];
        for (p, c) in c1.iter().enumerate() {
            if !c.is_zero() {
                next[p + 1] = &next[p + 1] + &(&a * c);
            }
        }
        for (p, c) in c0.iter().enumerate() {
            if !c.is_zero() {
                next[p] = &next[p] - &(&b * c);
            }
        }
        c0 = c1;
        c1 = next;
    }
    c1
}

/// The zonal kernel built from the Gegenbauer polynomial with
/// `lambda = m/2 - 1`: homogenizing `C_k^(lambda)(t)` with
/// `t = <u,v> / (||u|| ||v||)` and one factor `||u||^k ||v||^k` gives
///
/// `sum_j a_{k-2j} <u,v>^{k-2j} (||u||^2 ||v||^2)^j`.
///
/// The second vector variable `v` is stored in the `x` block.
pub fn gegenbauer_kernel(m: u32, k: u32) -> MultiPoly {
    let lambda = Rat::new((m as i64 - 2).into(), 2.into());
    let coeffs = gegenbauer_coeffs(k, &lambda);
    let inner = MultiPoly::inner_ux(m); // <u, v> with v in the x slots
    let norm_u = MultiPoly::norm_sq_u(m);
    let norm_v = MultiPoly::norm_sq_x(m);
    let mut out = MultiPoly::zero(m);
    for (p, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // p = k - 2j
        let j = (k as usize - p) / 2;
        let term = inner
            .pow(p as u32)
            .mul(&norm_u.pow(j as u32))
            .unwrap()
            .mul(&norm_v.pow(j as u32))
            .unwrap()
            .scale(&Coefficient::from_rat(c.clone()));
        out = out.add(&term).unwrap();
    }
    out
}

/// The reproducing kernel `K_k(u, v)` of the degree-`k` harmonics under the
/// Fischer inner product: the unique element of `H_k(u) (x) H_k(v)` with
/// `[K(., v), H]_F = H(v)` for every `H`. The `v` variable lives in the `x`
/// block of the returned polynomial.
pub fn reproducing_kernel(m: u32, k: u32) -> Result<MultiPoly> {
    if k == 0 {
        return Ok(MultiPoly::one(m));
    }
    let hk = basis(BasisSpec {
        tag: SpaceTag::Hk,
        m,
        k,
        l: 0,
    })?
    .scalar();
    let n = hk.len();
    // Gram matrix of the (real, rational) basis under the Fischer product.
    let mut gram = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = fischer_inner(&hk[i], &hk[j])?;
            gram.set(i, j, v.clone());
            gram.set(j, i, v);
        }
    }
    // K = sum_ab (G^{-1})_ab h_a(u) h_b(v).
    let rhs: Vec<Vec<Coefficient>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        Coefficient::one()
                    } else {
                        Coefficient::zero()
                    }
                })
                .collect()
        })
        .collect();
    let ginv_cols = gram
        .solve_many(&rhs)
        .ok_or_else(|| Error::domain("Fischer Gram matrix is singular".to_string()))?;
    let mut kernel = MultiPoly::zero(m);
    for (b, col) in ginv_cols.iter().enumerate() {
        let hb_v = hk[b].swap_xu();
        for (a, c) in col.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            kernel = kernel.add(&hk[a].scale(c).mul(&hb_v)?)?;
        }
    }
    Ok(kernel)
}

/// The exact ratio `gegenbauer_kernel / reproducing_kernel` (they must be
/// proportional; the ratio is reported).
pub fn kernel_gegenbauer_ratio(m: u32, k: u32) -> Result<Coefficient> {
    let solved = reproducing_kernel(m, k)?;
    let gegen = gegenbauer_kernel(m, k);
    let (e, c) = solved
        .terms()
        .next()
        .map(|(e, c)| (e.clone(), c.clone()))
        .ok_or_else(|| Error::domain("zero reproducing kernel".to_string()))?;
    let ratio = &gegen.coeff(&e) / &c;
    if gegen != solved.scale(&ratio) {
        return Err(Error::CheckFailed {
            check: "kernel proportionality".to_string(),
            witness: format!("{}", gegen.sub(&solved.scale(&ratio)).unwrap()),
        });
    }
    Ok(ratio)
}

/// Tensor basis of `P_l(x) (x) span(values)`: every x-monomial of degree `l`
/// times every value-space basis element.
pub fn tensor_basis(m: u32, l: u32, values: &[MultiPoly]) -> Vec<MultiPoly> {
    let xmono = MonomialIndex::new(m, l, 0);
    let mut out = Vec::with_capacity(xmono.len() * values.len());
    for i in 0..xmono.len() {
        let mono = xmono.monomial_poly(i);
        for h in values {
            out.push(mono.mul(h).expect("same dim"));
        }
    }
    out
}
