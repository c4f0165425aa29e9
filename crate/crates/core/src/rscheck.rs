//! The bridge to the first-order operator on monogenic-valued functions:
//! Clifford-coefficient differential operators, the projections of the
//! monogenic refinement, the four operator-block identities, and the
//! four-block decomposition of the spinor-valued polynomial kernel.

use crate::clifford::{CliffordElement, SpinorPoly, SpinorSpace};
use crate::coeffpoly::{Coefficient, ExactMatrix, Expo, MultiPoly, Var};
use crate::diffop::{self, DiffOp};
use crate::harmonic::{self, spinor_alg_dim, MonomialIndex, SpinorIndex};
use crate::radial::inversion_twistor_raise;
use crate::{Error, Result};

use std::collections::BTreeMap;

/// A differential operator with Clifford-valued polynomial coefficients, in
/// normal form: derivative monomials to the right of (left-multiplying)
/// coefficients. Application is linear; composition is associative and
/// re-normalizes with the Leibniz rule.
#[derive(Clone, PartialEq, Debug)]
pub struct CliffordDiffOp {
    m: u32,
    alg_dim: u32,
    terms: BTreeMap<Expo, SpinorPoly>,
}

impl CliffordDiffOp {
    pub fn zero(m: u32, alg_dim: u32) -> Self {
        CliffordDiffOp {
            m,
            alg_dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(m: u32, alg_dim: u32) -> Self {
        let mut op = CliffordDiffOp::zero(m, alg_dim);
        op.add_term(
            Expo::zeros(m),
            SpinorPoly::from_element(m, &CliffordElement::one(alg_dim)),
        );
        op
    }

    /// Lift a scalar operator (blade-diagonal action).
    pub fn from_scalar(op: &DiffOp, alg_dim: u32) -> Self {
        let m = op.dim();
        let mut out = CliffordDiffOp::zero(m, alg_dim);
        for (e, p) in op.terms() {
            out.add_term(
                e.clone(),
                SpinorPoly::from_poly_element(p, &CliffordElement::one(alg_dim)),
            );
        }
        out
    }

    /// The Dirac operator `sum_j e_j d/dx_j` (or in `u`).
    pub fn dirac(m: u32, alg_dim: u32, in_u: bool) -> Self {
        let mut out = CliffordDiffOp::zero(m, alg_dim);
        for j in 1..=m {
            let v = if in_u { Var::U(j) } else { Var::X(j) };
            let mut e = Expo::zeros(m);
            e.0[v.index(m)] = 1;
            out.add_term(
                e,
                SpinorPoly::from_element(m, &CliffordElement::generator(alg_dim, j)),
            );
        }
        out
    }

    /// Left multiplication by the vector variable (`x` or `u`).
    pub fn vector_mult(m: u32, alg_dim: u32, in_u: bool) -> Self {
        let mut out = CliffordDiffOp::zero(m, alg_dim);
        for j in 1..=m {
            let v = if in_u { Var::U(j) } else { Var::X(j) };
            out.add_term(
                Expo::zeros(m),
                SpinorPoly::from_poly_element(
                    &MultiPoly::var(m, v),
                    &CliffordElement::generator(alg_dim, j),
                ),
            );
        }
        out
    }

    pub fn add_term(&mut self, e: Expo, c: SpinorPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c).expect("same dims");
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &CliffordDiffOp) -> Result<CliffordDiffOp> {
        if self.m != rhs.m || self.alg_dim != rhs.alg_dim {
            return Err(Error::DimensionMismatch {
                left: self.m,
                right: rhs.m,
                op: "clifford op add",
            });
        }
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &CliffordDiffOp) -> Result<CliffordDiffOp> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> CliffordDiffOp {
        CliffordDiffOp {
            m: self.m,
            alg_dim: self.alg_dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> CliffordDiffOp {
        CliffordDiffOp {
            m: self.m,
            alg_dim: self.alg_dim,
            terms: self.terms.iter().map(|(e, p)| (e.clone(), p.scale(c))).collect(),
        }
    }

    pub fn apply(&self, f: &SpinorPoly) -> Result<SpinorPoly> {
        let mut out = SpinorPoly::zero(self.m, self.alg_dim);
        for (e, c) in &self.terms {
            let mut g = f.clone();
            'deriv: for (idx, &pow) in e.0.iter().enumerate() {
                let v = if idx < self.m as usize {
                    Var::X(idx as u32 + 1)
                } else {
                    Var::U((idx - self.m as usize) as u32 + 1)
                };
                for _ in 0..pow {
                    g = g.deriv(v);
                    if g.is_zero() {
                        break 'deriv;
                    }
                }
            }
            if !g.is_zero() {
                out = out.add(&mul_spinor(c, &g)?)?;
            }
        }
        Ok(out)
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &CliffordDiffOp) -> Result<CliffordDiffOp> {
        let n = 2 * self.m as usize;
        let mut out = CliffordDiffOp::zero(self.m, self.alg_dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut stack: Vec<(usize, Expo, SpinorPoly, Coefficient)> =
                    vec![(0, Expo::zeros(self.m), cb.clone(), Coefficient::one())];
                while let Some((idx, c_expo, diffed, binco)) = stack.pop() {
                    if idx == n {
                        let mut e = c_expo.clone();
                        for t in 0..n {
                            e.0[t] += eb.0[t];
                        }
                        out.add_term(e, mul_spinor(ca, &diffed)?.scale(&binco));
                        continue;
                    }
                    let a = ea.0[idx];
                    let v = if idx < self.m as usize {
                        Var::X(idx as u32 + 1)
                    } else {
                        Var::U((idx - self.m as usize) as u32 + 1)
                    };
                    let mut current = diffed.clone();
                    for c in (0..=a).rev() {
                        if !current.is_zero() || c == a {
                            let mut e2 = c_expo.clone();
                            e2.0[idx] = c;
                            let bin = &binco * &Coefficient::binomial(a as u32, c as u32);
                            stack.push((idx + 1, e2, current.clone(), bin));
                        }
                        if c > 0 {
                            current = current.deriv(v);
                            if current.is_zero() && c > 1 {
                                break;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Full Clifford product of two algebra-valued polynomials.
fn mul_spinor(a: &SpinorPoly, b: &SpinorPoly) -> Result<SpinorPoly> {
    let mut out = SpinorPoly::zero(a.m(), a.alg_dim());
    for (&ba, pa) in a.components() {
        for (&bb, pb) in b.components() {
            let (blade, negative) = crate::clifford::blade_mul(ba, bb);
            let prod = pa.mul(pb)?;
            out.add_component(blade, if negative { prod.neg() } else { prod });
        }
    }
    Ok(out)
}

fn check_rs_denominator(m: u32, k: u32) -> Result<i64> {
    let d = m as i64 + 2 * k as i64 - 2;
    if d == 0 {
        return Err(Error::DegenerateParameter {
            what: "m+2k-2",
            m,
            k,
        });
    }
    Ok(d)
}

/// Projection `p_1 = 1 + u d_u / (2k+m-2)` onto the top monogenic component.
pub fn p1(m: u32, alg_dim: u32, k: u32) -> Result<CliffordDiffOp> {
    let d = check_rs_denominator(m, k)?;
    let u_du = CliffordDiffOp::vector_mult(m, alg_dim, true)
        .compose(&CliffordDiffOp::dirac(m, alg_dim, true))?;
    CliffordDiffOp::identity(m, alg_dim).add(&u_du.scale(&Coefficient::from_ratio(1, d)))
}

/// Projection `p_0 = -d_u / (2k+m-2)` onto the lower monogenic component.
pub fn p0(m: u32, alg_dim: u32, k: u32) -> Result<CliffordDiffOp> {
    let d = check_rs_denominator(m, k)?;
    Ok(CliffordDiffOp::dirac(m, alg_dim, true).scale(&Coefficient::from_ratio(-1, d)))
}

/// The first-order conformally invariant operator on monogenic values:
/// `R_k = (1 + u d_u / (m + 2k - 2)) d_x`.
pub fn build_rs(m: u32, alg_dim: u32, k: u32) -> Result<CliffordDiffOp> {
    p1(m, alg_dim, k)?.compose(&CliffordDiffOp::dirac(m, alg_dim, false))
}

/// Degree-`k` monogenic value basis.
pub fn monogenic_basis(m: u32, k: u32) -> Result<Vec<SpinorPoly>> {
    Ok(harmonic::basis(harmonic::BasisSpec {
        tag: harmonic::SpaceTag::Mk,
        m,
        k,
        l: 0,
    })?
    .spinor())
}

/// Basis of `P_l(x) (x) M_k`.
pub fn pl_mk_basis(m: u32, l: u32, mk: &[SpinorPoly]) -> Vec<SpinorPoly> {
    let xmono = MonomialIndex::new(m, l, 0);
    let mut out = Vec::with_capacity(xmono.len() * mk.len());
    for i in 0..xmono.len() {
        let mono = xmono.monomial_poly(i);
        for f in mk {
            out.push(f.mul_poly(&mono).expect("same dim"));
        }
    }
    out
}

/// Exact basis of `ker_l R_k` by nullspace.
pub fn rs_kernel_basis(
    m: u32,
    space: &SpinorSpace,
    k: u32,
    l: u32,
) -> Result<Vec<SpinorPoly>> {
    let rk = build_rs(m, space.alg_dim(), k)?;
    let mk = monogenic_basis(m, k)?;
    let domain = pl_mk_basis(m, l, &mk);
    if domain.is_empty() {
        return Ok(Vec::new());
    }
    if l == 0 {
        // No x-degree to differentiate: the kernel is everything.
        return Ok(domain);
    }
    let codomain = SpinorIndex::new(m, l - 1, k, space);
    let cols: Vec<Vec<Coefficient>> = domain
        .iter()
        .map(|f| codomain.coords(&rk.apply(f)?))
        .collect::<Result<_>>()?;
    let ns = ExactMatrix::from_columns(&cols).nullspace();
    Ok(ns
        .into_iter()
        .map(|v| {
            let mut acc = SpinorPoly::zero(m, space.alg_dim());
            for (c, b) in v.iter().zip(&domain) {
                if !c.is_zero() {
                    acc = acc.add(&b.scale(c)).expect("same dims");
                }
            }
            acc
        })
        .collect())
}

/// Basis of `P_l (x) (H_k tensor S)`.
pub fn pl_hk_spinor_basis(
    m: u32,
    space: &SpinorSpace,
    k: u32,
    l: u32,
) -> Result<Vec<SpinorPoly>> {
    let hk = harmonic::basis(harmonic::BasisSpec {
        tag: harmonic::SpaceTag::Hk,
        m,
        k,
        l: 0,
    })?
    .scalar();
    let xmono = MonomialIndex::new(m, l, 0);
    let mut out = Vec::new();
    for i in 0..xmono.len() {
        let mono = xmono.monomial_poly(i);
        for h in &hk {
            let p = mono.mul(h)?;
            for s in space.basis() {
                out.push(SpinorPoly::from_poly_element(&p, s));
            }
        }
    }
    Ok(out)
}

/// Report of the three operator-block identities.
pub struct BlockIdentityReport {
    pub m: u32,
    pub k: u32,
    pub l: u32,
    pub identity_a: bool,
    pub identity_b: bool,
    pub identity_c: bool,
    /// `f = u f_0` with `f_0` in the lower kernel is annihilated (sampled).
    pub u_embedding_annihilated: bool,
}

impl BlockIdentityReport {
    pub fn passed(&self) -> bool {
        self.identity_a && self.identity_b && self.identity_c && self.u_embedding_annihilated
    }
}

/// Verify, as exact operators on full bases:
///
/// (a) `D_k p_1 = (-R_k + 4/((2k+m-2)(2k+m-4)) u <d_u,d_x>) R_k p_1` on
///     `P_l (x) (H_k tensor S)`;
/// (b) `<d_u,d_x> R_k = ((2k+m-4)/(2k+m-2) d_x - 2/(2k+m-2) u <d_u,d_x>) <d_u,d_x>`
///     on monogenic-valued inputs;
/// (c) `D_k u p_0 = -(u R_(k-1) + 4/(2k+m-2)(<u,d_x> - ||u||^2/(2k+m-4) <d_u,d_x>)) R_(k-1) p_0`.
pub fn verify_block_identities(m: u32, k: u32, l: u32, seed: u64) -> Result<BlockIdentityReport> {
    if m <= 4 || k == 0 {
        return Err(Error::domain("needs m > 4 and k >= 1".to_string()));
    }
    let alg = spinor_alg_dim(m);
    let space = SpinorSpace::new(alg)?;
    let c1 = 2 * k as i64 + m as i64 - 2;
    let c2 = 2 * k as i64 + m as i64 - 4;
    let dk = CliffordDiffOp::from_scalar(&diffop::higher_spin_laplace(m, k)?, alg);
    let rk = build_rs(m, alg, k)?;
    let p1k = p1(m, alg, k)?;
    let u_mult = CliffordDiffOp::vector_mult(m, alg, true);
    let dual = CliffordDiffOp::from_scalar(&diffop::inner_du_dx(m), alg);
    let u_dual = u_mult.compose(&dual)?;

    let domain = pl_hk_spinor_basis(m, &space, k, l)?;

    // (a) on H_k (x) S valued polynomials.
    let mut identity_a = true;
    for f in &domain {
        let pf = p1k.apply(f)?;
        let lhs = dk.apply(&pf)?;
        let rpf = rk.apply(&pf)?;
        let rhs = rk
            .apply(&rpf)?
            .neg()
            .add(&u_dual.apply(&rpf)?.scale(&Coefficient::from_ratio(4, c1 * c2)))?;
        if lhs != rhs {
            identity_a = false;
            break;
        }
    }

    // (b) on monogenic-valued polynomials.
    let mk = monogenic_basis(m, k)?;
    let mono_domain = pl_mk_basis(m, l, &mk);
    let dirac_x = CliffordDiffOp::dirac(m, alg, false);
    let mut identity_b = true;
    for f in &mono_domain {
        let lhs = dual.apply(&rk.apply(f)?)?;
        let g = dual.apply(f)?;
        let rhs = dirac_x
            .apply(&g)?
            .scale(&Coefficient::from_ratio(c2, c1))
            .sub(&u_dual.apply(&g)?.scale(&Coefficient::from_ratio(2, c1)))?;
        if lhs != rhs {
            identity_b = false;
            break;
        }
    }

    // (c) on H_k (x) S valued polynomials.
    let rk1 = build_rs(m, alg, k - 1)?;
    let p0k = p0(m, alg, k)?;
    let twistor = CliffordDiffOp::from_scalar(&diffop::twistor(m, k)?, alg);
    let mut identity_c = true;
    for f in &domain {
        let p0f = p0k.apply(f)?;
        let lhs = dk.apply(&u_mult.apply(&p0f)?)?;
        let rp0 = rk1.apply(&p0f)?;
        let rhs = u_mult
            .compose(&rk1)?
            .apply(&rp0)?
            .add(&twistor.apply(&rp0)?.scale(&Coefficient::from_ratio(4, c1)))?
            .neg();
        if lhs != rhs {
            identity_c = false;
            break;
        }
    }

    // Sampled check: f = u f_0 with f_0 in ker_l R_(k-1) is killed.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let lower_kernel = rs_kernel_basis(m, &space, k - 1, l)?;
    let mut u_embedding_annihilated = true;
    for _ in 0..5 {
        if lower_kernel.is_empty() {
            break;
        }
        let mut f0 = SpinorPoly::zero(m, alg);
        for b in &lower_kernel {
            let c = Coefficient::from_int(rng.gen_range(-3i64..=3));
            f0 = f0.add(&b.scale(&c))?;
        }
        let f = f0.vector_mul(true)?;
        if !dk.apply(&f)?.is_zero() {
            u_embedding_annihilated = false;
        }
    }

    Ok(BlockIdentityReport {
        m,
        k,
        l,
        identity_a,
        identity_b,
        identity_c,
        u_embedding_annihilated,
    })
}

/// One block of the four-block decomposition.
pub struct RsBlock {
    pub name: &'static str,
    pub source_dim: usize,
    pub images: Vec<SpinorPoly>,
}

/// Report of the four-block decomposition of the spinor-valued kernel.
pub struct RsDecompositionReport {
    pub m: u32,
    pub k: u32,
    pub l: u32,
    pub blocks: Vec<RsBlock>,
    pub expected_total: u64,
    pub all_in_kernel: bool,
    pub independent: bool,
    pub count_matches: bool,
}

impl RsDecompositionReport {
    pub fn passed(&self) -> bool {
        self.all_in_kernel && self.independent && self.count_matches
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.images.len()).collect()
    }
}

/// Decompose `ker_l D_k (x) S` into the four embedded blocks: the kernel of
/// `R_k` itself, `x ker_(l-1) R_k`, `u ker_l R_(k-1)`, and the
/// inversion-raised copy of `ker_(l-1) R_(k-1)` (the scalar degree raiser
/// applied componentwise).
pub fn rs_kernel_decomposition(m: u32, k: u32, l: u32) -> Result<RsDecompositionReport> {
    if m <= 4 || m % 2 != 0 {
        return Err(Error::domain(
            "decomposition needs even m > 4 (spinor realization)".to_string(),
        ));
    }
    let alg = spinor_alg_dim(m);
    let space = SpinorSpace::new(alg)?;
    let dk_scalar = diffop::higher_spin_laplace(m, k)?;
    let lap_u = diffop::laplace_u(m);

    let mut blocks: Vec<RsBlock> = Vec::new();

    // ker_l R_k, embedded by the identity.
    let b1 = rs_kernel_basis(m, &space, k, l)?;
    blocks.push(RsBlock {
        name: "ker_l R_k",
        source_dim: b1.len(),
        images: b1,
    });

    // x ker_(l-1) R_k.
    if l >= 1 {
        let src = rs_kernel_basis(m, &space, k, l - 1)?;
        let images: Vec<SpinorPoly> = src
            .iter()
            .map(|f| f.vector_mul(false))
            .collect::<Result<_>>()?;
        blocks.push(RsBlock {
            name: "x ker_(l-1) R_k",
            source_dim: images.len(),
            images,
        });
    }

    // u ker_l R_(k-1).
    if k >= 1 {
        let src = rs_kernel_basis(m, &space, k - 1, l)?;
        let images: Vec<SpinorPoly> = src
            .iter()
            .map(|f| f.vector_mul(true))
            .collect::<Result<_>>()?;
        blocks.push(RsBlock {
            name: "u ker_l R_(k-1)",
            source_dim: images.len(),
            images,
        });
    }

    // Inversion-raised ker_(l-1) R_(k-1), componentwise on blades.
    if k >= 1 && l >= 1 {
        let src = rs_kernel_basis(m, &space, k - 1, l - 1)?;
        let mut images = Vec::with_capacity(src.len());
        for f in &src {
            let mut out = SpinorPoly::zero(m, alg);
            for (&blade, comp) in f.components() {
                let raised = inversion_twistor_raise(comp, k)?;
                out.add_component(blade, raised);
            }
            images.push(out);
        }
        blocks.push(RsBlock {
            name: "raised ker_(l-1) R_(k-1)",
            source_dim: images.len(),
            images,
        });
    }

    // Assertions: kernel membership, value space, independence, count.
    let mut all_in_kernel = true;
    for b in &blocks {
        for f in &b.images {
            if !f.apply_scalar(&dk_scalar)?.is_zero() || !f.apply_scalar(&lap_u)?.is_zero() {
                all_in_kernel = false;
            }
        }
    }
    let expected_total = crate::kernelcheck::kernel_dimension(m, k, l)? * space.dim() as u64;
    let total: usize = blocks.iter().map(|b| b.images.len()).sum();
    let chart = SpinorIndex::new(m, l, k, &space);
    let mut cols = Vec::with_capacity(total);
    for b in &blocks {
        for f in &b.images {
            cols.push(chart.coords(f)?);
        }
    }
    let rank = ExactMatrix::from_columns(&cols).rank();
    Ok(RsDecompositionReport {
        m,
        k,
        l,
        blocks,
        expected_total,
        all_in_kernel,
        independent: rank == total,
        count_matches: total as u64 == expected_total,
    })
}

/// Dimension cross-check: `dim ker_l R_k` equals the sum of the simplicial
/// monogenic block dimensions over the double sum, with dominance-violating
/// summands skipped.
pub fn rs_kernel_dimension_crosscheck(m: u32, k: u32, l: u32) -> Result<(u64, u64)> {
    let space = SpinorSpace::new(spinor_alg_dim(m))?;
    let computed = rs_kernel_basis(m, &space, k, l)?.len() as u64;
    let mut expected = 0u64;
    for i in 0..=k {
        for j in 0..=k - i {
            let sx = l as i64 - i as i64 + j as i64;
            let su = k as i64 - i as i64 - j as i64;
            if sx < su || su < 0 || sx < 0 {
                continue;
            }
            expected += harmonic::basis(harmonic::BasisSpec {
                tag: harmonic::SpaceTag::Skl,
                m,
                k: sx as u32,
                l: su as u32,
            })?
            .len() as u64;
        }
    }
    Ok((computed, expected))
}

/// Lemma check: the twistor `p_1 pi_k <u, d_x>` maps `ker_(l-1) R_(k-1)`
/// into `ker_(l-2) R_k`.
pub fn twistor_mapping_check(m: u32, k: u32, l: u32) -> Result<bool> {
    if l < 2 || k < 1 {
        return Err(Error::domain("needs l >= 2 and k >= 1".to_string()));
    }
    let alg = spinor_alg_dim(m);
    let space = SpinorSpace::new(alg)?;
    let d = check_rs_denominator(m, k)?;
    // p_1 pi_k <u,d_x> = <u,d_x> + (u d_x - ||u||^2 <d_u,d_x>) / (2k+m-2)
    let twist = CliffordDiffOp::from_scalar(&diffop::inner_u_dx(m), alg).add(
        &CliffordDiffOp::vector_mult(m, alg, true)
            .compose(&CliffordDiffOp::dirac(m, alg, false))?
            .sub(&CliffordDiffOp::from_scalar(
                &diffop::norm_sq_u_op(m).compose(&diffop::inner_du_dx(m))?,
                alg,
            ))?
            .scale(&Coefficient::from_ratio(1, d)),
    )?;
    let rk = build_rs(m, alg, k)?;
    let dirac_u = CliffordDiffOp::dirac(m, alg, true);
    for f in rs_kernel_basis(m, &space, k - 1, l - 1)? {
        let g = twist.apply(&f)?;
        // Image is monogenic-valued and killed by R_k.
        if !dirac_u.apply(&g)?.is_zero() || !rk.apply(&g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Identity behind the `x`-multiplication embedding: for monogenic-valued
/// `f`, `D_k (x f) = x D_k f + 2 (d_x - 2/(2k+m-2) u <d_u,d_x>) f`; on the
/// kernel the right side vanishes.
pub fn x_embedding_check(m: u32, k: u32, l: u32) -> Result<bool> {
    let alg = spinor_alg_dim(m);
    let space = SpinorSpace::new(alg)?;
    let c1 = check_rs_denominator(m, k)?;
    let dk = CliffordDiffOp::from_scalar(&diffop::higher_spin_laplace(m, k)?, alg);
    let dirac_x = CliffordDiffOp::dirac(m, alg, false);
    let u_dual = CliffordDiffOp::vector_mult(m, alg, true)
        .compose(&CliffordDiffOp::from_scalar(&diffop::inner_du_dx(m), alg))?;
    let mk = monogenic_basis(m, k)?;
    for f in pl_mk_basis(m, l, &mk) {
        let xf = f.vector_mul(false)?;
        let lhs = dk.apply(&xf)?;
        let rhs = dk.apply(&f)?.vector_mul(false)?.add(
            &dirac_x
                .apply(&f)?
                .sub(&u_dual.apply(&f)?.scale(&Coefficient::from_ratio(2, c1)))?
                .scale(&Coefficient::from_int(2)),
        )?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    // And on kernel elements the image is annihilated outright.
    for f in rs_kernel_basis(m, &space, k, l)? {
        if !dk.apply(&f.vector_mul(false)?)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rs_at_k0_is_dirac() {
        let (m, alg) = (6, 6);
        let r0 = build_rs(m, alg, 0).unwrap();
        let dirac = CliffordDiffOp::dirac(m, alg, false);
        // On u-constant inputs both agree (the u d_u correction needs
        // u-degree); as operators they differ by terms with du-derivatives.
        let idem = CliffordElement::idempotent(alg).unwrap();
        let f = SpinorPoly::from_poly_element(&MultiPoly::norm_sq_x(m), &idem);
        assert_eq!(r0.apply(&f).unwrap(), dirac.apply(&f).unwrap());
        // Applied to zero: zero.
        let z = SpinorPoly::zero(m, alg);
        assert!(build_rs(m, alg, 1).unwrap().apply(&z).unwrap().is_zero());
    }

    #[test]
    fn rs_preserves_monogenic_values() {
        let m = 6;
        let space = SpinorSpace::new(6).unwrap();
        let rk = build_rs(m, 6, 1).unwrap();
        let mk = monogenic_basis(m, 1).unwrap();
        let dom = pl_mk_basis(m, 2, &mk);
        for f in &dom {
            let img = rk.apply(f).unwrap();
            assert!(img.dirac(true).unwrap().is_zero(), "value not preserved");
        }
        let _ = space;
    }

    #[test]
    fn projections_sum_to_identity() {
        // p_1 + u p_0 = Id on H_k (x) S valued polynomials.
        let m = 6;
        let alg = 6;
        let space = SpinorSpace::new(alg).unwrap();
        let k = 1;
        let p1k = p1(m, alg, k).unwrap();
        let p0k = p0(m, alg, k).unwrap();
        for f in pl_hk_spinor_basis(m, &space, k, 1).unwrap() {
            let back = p1k
                .apply(&f)
                .unwrap()
                .add(&p0k.apply(&f).unwrap().vector_mul(true).unwrap())
                .unwrap();
            assert_eq!(back, f);
            // p_0 lands in monogenics, p_1 in monogenics.
            assert!(p0k.apply(&f).unwrap().dirac(true).unwrap().is_zero());
            assert!(p1k.apply(&f).unwrap().dirac(true).unwrap().is_zero());
        }
    }

    #[test]
    fn block_identities_m6_k1_l2() {
        let r = verify_block_identities(6, 1, 2, 7).unwrap();
        assert!(r.identity_a, "identity (a) failed");
        assert!(r.identity_b, "identity (b) failed");
        assert!(r.identity_c, "identity (c) failed");
        assert!(r.u_embedding_annihilated);
    }

    #[test]
    fn kernel_dimensions_m6_k1() {
        let space = SpinorSpace::new(6).unwrap();
        // ker_0 R_1 = M_1 (dim 40); ker_1 R_0 has dim 40; ker_1 R_1 has 200.
        assert_eq!(rs_kernel_basis(6, &space, 1, 0).unwrap().len(), 40);
        assert_eq!(rs_kernel_basis(6, &space, 0, 1).unwrap().len(), 40);
        assert_eq!(rs_kernel_basis(6, &space, 1, 1).unwrap().len(), 200);
    }

    #[test]
    fn decomposition_m6_k1_l1() {
        let r = rs_kernel_decomposition(6, 1, 1).unwrap();
        assert_eq!(r.expected_total, 36 * 8);
        assert_eq!(r.block_sizes(), vec![200, 40, 40, 8]);
        assert!(r.passed());
    }

    #[test]
    fn decomposition_k0_is_fischer_refinement() {
        // ker_1 Lap (x) S = ker_1 d_x (+) x ker_0 d_x at m = 6.
        let r = rs_kernel_decomposition(6, 0, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.blocks.len(), 2);
    }

    #[test]
    fn decomposition_l0_two_blocks() {
        // No x-degree: M_k (+) u M_(k-1) fills H_k (x) S.
        let r = rs_kernel_decomposition(6, 1, 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.block_sizes(), vec![40, 8]);
    }

    #[test]
    fn simplicial_monogenic_crosscheck() {
        let (computed, expected) = rs_kernel_dimension_crosscheck(6, 1, 1).unwrap();
        assert_eq!(computed, 200);
        assert_eq!(computed, expected);
    }

    #[test]
    fn twistor_mapping_m6() {
        assert!(twistor_mapping_check(6, 1, 2).unwrap());
    }

    #[test]
    fn x_embedding_m6() {
        assert!(x_embedding_check(6, 1, 1).unwrap());
    }

    #[test]
    fn rs_rejects_degenerate_denominator() {
        // m + 2k - 2 = 0 at m = 4... not reachable for m >= 3, k >= 0 except
        // m = 2, k = 0; the guard still protects the construction.
        assert!(build_rs(2, 2, 0).is_err());
    }
}
