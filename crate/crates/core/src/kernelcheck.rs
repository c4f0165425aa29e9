//! Operators as exact matrices on bihomogeneous spaces: kernel dimensions of
//! the second-order operator, the block decomposition of its polynomial
//! kernel, and the ellipticity dichotomy of its principal symbol.

use crate::coeffpoly::{Coefficient, ExactMatrix, MultiPoly, Var};
use crate::diffop::{self, DiffOp};
use crate::harmonic::{self, basis, BasisSpec, MonomialIndex, SpaceTag};
use crate::radial::inversion_twistor_raise;
use crate::{Error, Result};

/// Matrix of `op` on the given domain basis, with image coordinates over the
/// full monomial space of the image bidegree. A zero map yields a 0-row
/// matrix.
pub fn operator_matrix(op: &DiffOp, domain: &[MultiPoly]) -> Result<ExactMatrix> {
    let mut codomain: Option<MonomialIndex> = None;
    let mut images = Vec::with_capacity(domain.len());
    let m = op.dim();
    for f in domain {
        let img = op.apply(f)?;
        if codomain.is_none() && !img.is_zero() {
            let (dx, du) = img
                .bidegree()
                .ok_or_else(|| Error::domain("image not bihomogeneous".to_string()))?;
            codomain = Some(MonomialIndex::new(m, dx, du));
        }
        images.push(img);
    }
    let Some(codomain) = codomain else {
        return Ok(ExactMatrix::zeros(0, domain.len()));
    };
    let cols: Vec<Vec<Coefficient>> = images
        .iter()
        .map(|img| codomain.coords(img))
        .collect::<Result<_>>()?;
    Ok(ExactMatrix::from_columns(&cols))
}

/// Basis of `P_l(x) (x) H_k(u)`.
pub fn pl_hk_basis(m: u32, k: u32, l: u32) -> Result<Vec<MultiPoly>> {
    let hk = basis(BasisSpec {
        tag: SpaceTag::Hk,
        m,
        k,
        l: 0,
    })?
    .scalar();
    Ok(harmonic::tensor_basis(m, l, &hk))
}

/// The closed-form dimension `dim P_l(x) (x) H_k = (C(m+l-1,m-1) - C(m+l-3,m-1)) dim H_k`
/// valid for `l >= 2`; for `l < 2` the operator kills everything and the
/// kernel is the full space.
pub fn kernel_dimension_formula(m: u32, k: u32, l: u32) -> u64 {
    if l >= 2 {
        (harmonic::dim_pk(m, l) - harmonic::dim_pk(m, l - 2)) * harmonic::dim_hk(m, k)
    } else {
        harmonic::dim_pk(m, l) * harmonic::dim_hk(m, k)
    }
}

/// Exact nullity of the degree-`k` operator on `P_l (x) H_k`.
pub fn kernel_dimension(m: u32, k: u32, l: u32) -> Result<u64> {
    let dk = diffop::higher_spin_laplace(m, k)?;
    let domain = pl_hk_basis(m, k, l)?;
    let mat = operator_matrix(&dk, &domain)?;
    Ok((domain.len() - mat.rank()) as u64)
}

/// Exact basis of the polynomial kernel on `P_l (x) H_k`.
pub fn kernel_basis(m: u32, k: u32, l: u32) -> Result<Vec<MultiPoly>> {
    let dk = diffop::higher_spin_laplace(m, k)?;
    let domain = pl_hk_basis(m, k, l)?;
    let mat = operator_matrix(&dk, &domain)?;
    let ns = mat.nullspace();
    Ok(ns
        .into_iter()
        .map(|v| {
            let mut acc = MultiPoly::zero(m);
            for (c, b) in v.iter().zip(&domain) {
                if !c.is_zero() {
                    acc = acc.add(&b.scale(c)).expect("same dim");
                }
            }
            acc
        })
        .collect())
}

/// The degree-raising conjugated twistor applied `i` times, tracking the
/// value degree: step `t` targets value degree `k - i + t`.
fn raise_by_inversion(f: &MultiPoly, k: u32, i: u32) -> Result<MultiPoly> {
    let mut cur = f.clone();
    for t in 1..=i {
        cur = inversion_twistor_raise(&cur, k - i + t)?;
    }
    Ok(cur)
}

/// One embedded block of the kernel decomposition.
pub struct DecompositionBlock {
    pub i: u32,
    pub j: u32,
    /// Dimension of the simplicial-harmonic source space.
    pub source_dim: usize,
    pub images: Vec<MultiPoly>,
}

/// Report of the full kernel decomposition at `(m, k, l)`.
pub struct DecompositionReport {
    pub m: u32,
    pub k: u32,
    pub l: u32,
    pub blocks: Vec<DecompositionBlock>,
    pub nullity: u64,
    /// Every embedded vector is annihilated by the operator.
    pub all_annihilated: bool,
    /// The union of all embedded blocks is linearly independent.
    pub independent: bool,
    /// Total block size equals the nullity.
    pub count_matches: bool,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.all_annihilated && self.independent && self.count_matches
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.images.len()).collect()
    }
}

/// Decompose the polynomial kernel at `(m, k, l)` into embedded
/// simplicial-harmonic blocks.
///
/// The `(i, j)` summand is a copy of the simplicial harmonics of bidegree
/// `(l - i + j, k - i - j)`; summands violating the dominant weight
/// condition `l - i + j >= k - i - j >= 0` are skipped. The embedding first
/// raises the u-degree with `j` plain applications of `<u, d_x>` (which is
/// the twistor on this range) and then raises the bidegree by `(1,1)` `i`
/// times with the inversion-conjugated twistor.
pub fn decomposition_basis(m: u32, k: u32, l: u32) -> Result<DecompositionReport> {
    if m <= 4 {
        return Err(Error::domain("decomposition needs m > 4".to_string()));
    }
    let dk = diffop::higher_spin_laplace(m, k)?;
    let raise_u = diffop::inner_u_dx(m);
    let mut blocks = Vec::new();
    let mut all_annihilated = true;
    for i in 0..=k {
        for j in 0..=k - i {
            let src_x = l as i64 - i as i64 + j as i64;
            let src_u = k as i64 - i as i64 - j as i64;
            if src_x < src_u || src_u < 0 || src_x < 0 {
                continue; // dominant weight violated: summand missing
            }
            let source = basis(BasisSpec {
                tag: SpaceTag::Hkl,
                m,
                k: src_x as u32,
                l: src_u as u32,
            })?
            .scalar();
            let mut images = Vec::with_capacity(source.len());
            for h in &source {
                let mut cur = h.clone();
                for _ in 0..j {
                    cur = raise_u.apply(&cur)?;
                }
                cur = raise_by_inversion(&cur, k, i)?;
                if !dk.apply(&cur)?.is_zero() {
                    all_annihilated = false;
                }
                images.push(cur);
            }
            blocks.push(DecompositionBlock {
                i,
                j,
                source_dim: source.len(),
                images,
            });
        }
    }
    let nullity = kernel_dimension(m, k, l)?;
    let total: usize = blocks.iter().map(|b| b.images.len()).sum();
    // Joint independence over the monomial coordinates of P_l (x) P_k.
    let chart = MonomialIndex::new(m, l, k);
    let mut cols = Vec::with_capacity(total);
    for b in &blocks {
        for v in &b.images {
            cols.push(chart.coords(v)?);
        }
    }
    let rank = ExactMatrix::from_columns(&cols).rank();
    Ok(DecompositionReport {
        m,
        k,
        l,
        blocks,
        nullity,
        all_annihilated,
        independent: rank == total,
        count_matches: total as u64 == nullity,
    })
}

/// Report for the Howe-harmonics complement check.
pub struct GaugeSplitReport {
    pub m: u32,
    pub k: u32,
    pub l: u32,
    pub howe_dim: usize,
    pub lower_kernel_dim: u64,
    pub nullity: u64,
    pub counts_match: bool,
    /// Embedded lower kernel lies in the kernel and meets the Howe space
    /// trivially.
    pub split_is_direct: bool,
}

/// Verify `ker_l = Howe_(l,k) (+) ker_(l-1)` at the level of exact
/// dimensions and an explicit direct-sum split (embedding the lower kernel
/// with the inversion-conjugated twistor).
pub fn lemma42_check(m: u32, k: u32, l: u32) -> Result<GaugeSplitReport> {
    if m <= 4 {
        return Err(Error::domain("needs m > 4".to_string()));
    }
    let howe = basis(BasisSpec {
        tag: SpaceTag::Howe,
        m,
        k,
        l,
    })?
    .scalar();
    let nullity = kernel_dimension(m, k, l)?;
    if k == 0 {
        // Howe harmonics with no u-content are exactly the x-harmonics; the
        // second summand is absent.
        return Ok(GaugeSplitReport {
            m,
            k,
            l,
            howe_dim: howe.len(),
            lower_kernel_dim: 0,
            nullity,
            counts_match: howe.len() as u64 == nullity,
            split_is_direct: true,
        });
    }
    let lower = kernel_basis(m, k - 1, l.saturating_sub(1))?;
    let dk = diffop::higher_spin_laplace(m, k)?;
    let chart = MonomialIndex::new(m, l, k);
    let mut cols = Vec::new();
    for h in &howe {
        cols.push(chart.coords(h)?);
    }
    let mut embedded_ok = true;
    for f in &lower {
        let img = inversion_twistor_raise(f, k)?;
        if !dk.apply(&img)?.is_zero() {
            embedded_ok = false;
        }
        cols.push(chart.coords(&img)?);
    }
    let rank = ExactMatrix::from_columns(&cols).rank();
    let counts_match = howe.len() as u64 + lower.len() as u64 == nullity;
    Ok(GaugeSplitReport {
        m,
        k,
        l,
        howe_dim: howe.len(),
        lower_kernel_dim: lower.len() as u64,
        nullity,
        counts_match,
        split_is_direct: embedded_ok && rank == howe.len() + lower.len(),
    })
}

/// Precomputed value-space data for symbol evaluations at many points.
pub struct SymbolContext {
    m: u32,
    k: u32,
    hk: Vec<MultiPoly>,
    chart: MonomialIndex,
    basis_mat: ExactMatrix,
}

impl SymbolContext {
    pub fn new(m: u32, k: u32) -> Result<Self> {
        let c1 = 2 * k as i64 + m as i64 - 2;
        let c2 = 2 * k as i64 + m as i64 - 4;
        if c1 == 0 || c2 == 0 {
            return Err(Error::DegenerateParameter {
                what: "2k+m-2 or 2k+m-4",
                m,
                k,
            });
        }
        let hk = basis(BasisSpec {
            tag: SpaceTag::Hk,
            m,
            k,
            l: 0,
        })?
        .scalar();
        let chart = MonomialIndex::new(m, 0, k);
        let basis_cols: Vec<Vec<Coefficient>> =
            hk.iter().map(|h| chart.coords(h)).collect::<Result<_>>()?;
        let basis_mat = ExactMatrix::from_columns(&basis_cols);
        Ok(SymbolContext {
            m,
            k,
            hk,
            chart,
            basis_mat,
        })
    }

    /// The principal symbol at a fixed nonzero point, as an exact matrix on
    /// the degree-`k` harmonics in `u`:
    ///
    /// `sigma = ||x0||^2 - 4/(2k+m-2) (<u,x0> - ||u||^2/(2k+m-4) <x0,d_u>) <x0,d_u>`.
    pub fn matrix(&self, x0: &[Coefficient]) -> Result<ExactMatrix> {
        let (m, k) = (self.m, self.k);
        if x0.len() != m as usize {
            return Err(Error::domain("point length must equal m".to_string()));
        }
        if x0.iter().all(Coefficient::is_zero) {
            return Err(Error::domain("symbol point must be nonzero".to_string()));
        }
        let c1 = 2 * k as i64 + m as i64 - 2;
        let c2 = 2 * k as i64 + m as i64 - 4;
        // <x0, d_u> and multiplication by <u, x0> with numeric x0.
        let mut lower = DiffOp::zero(m);
        let mut raise_poly = MultiPoly::zero(m);
        for j in 1..=m {
            let c = &x0[(j - 1) as usize];
            if c.is_zero() {
                continue;
            }
            lower = lower.add(&DiffOp::partial(m, Var::U(j)).scale(c))?;
            raise_poly = raise_poly.add(&MultiPoly::var(m, Var::U(j)).scale(c))?;
        }
        let norm_sq: Coefficient = x0.iter().fold(Coefficient::zero(), |acc, c| &acc + &(c * c));
        let norm_u = MultiPoly::norm_sq_u(m);
        let mut sym_cols = Vec::with_capacity(self.hk.len());
        for h in &self.hk {
            let g = lower.apply(h)?;
            let raised = raise_poly.mul(&g)?.sub(
                &norm_u
                    .mul(&lower.apply(&g)?)?
                    .scale(&Coefficient::from_ratio(1, c2)),
            )?;
            let img = h
                .scale(&norm_sq)
                .sub(&raised.scale(&Coefficient::from_ratio(4, c1)))?;
            sym_cols.push(self.chart.coords(&img)?);
        }
        // Expand images over the harmonic basis; the combination is exactly
        // harmonic, so the solve must succeed.
        let sol = self
            .basis_mat
            .solve_many(&sym_cols)
            .ok_or_else(|| Error::domain("symbol image left the harmonic space".to_string()))?;
        Ok(ExactMatrix::from_columns(&sol))
    }
}

/// The principal symbol matrix at `x0` (one-shot convenience).
pub fn symbol_matrix(m: u32, k: u32, x0: &[Coefficient]) -> Result<ExactMatrix> {
    SymbolContext::new(m, k)?.matrix(x0)
}

/// Exact determinant of the principal symbol at `x0`.
pub fn ellipticity_check(m: u32, k: u32, x0: &[Coefficient]) -> Result<Coefficient> {
    Ok(symbol_matrix(m, k, x0)?.det())
}

/// Rank of the operator on `P_l (x) H_k` (surjectivity onto
/// `P_(l-2) (x) H_k` means the rank equals that dimension).
pub fn operator_rank(m: u32, k: u32, l: u32) -> Result<(u64, u64)> {
    let dk = diffop::higher_spin_laplace(m, k)?;
    let domain = pl_hk_basis(m, k, l)?;
    let mat = operator_matrix(&dk, &domain)?;
    let expected = if l >= 2 {
        harmonic::dim_pk(m, l - 2) * harmonic::dim_hk(m, k)
    } else {
        0
    };
    Ok((mat.rank() as u64, expected))
}
