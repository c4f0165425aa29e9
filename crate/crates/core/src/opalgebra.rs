//! Noncommutative normal ordering over an abstract generator algebra with
//! coefficients polynomial in the symbolic dimension `m` (and degree `k`).
//!
//! The commutation table is never hand-entered: it is fitted from exact
//! matrices of the realized operators on small bihomogeneous test spaces at
//! several dimensions, interpolated affinely in `m`, and re-verified at two
//! further dimensions. Normal ordering then rewrites any word to the fixed
//! canonical order, and module reduction specializes the action on
//! harmonic-valued arguments (trailing `Lap_u -> 0`, trailing `E_u -> k`).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::coeffpoly::{Coefficient, ExactMatrix, MultiPoly, Rat, Var};
use crate::diffop::{self, DiffOp};
use crate::harmonic::MonomialIndex;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Coefficients: sparse polynomials in (m, k) over the rationals
// ---------------------------------------------------------------------------

/// A polynomial in the symbols `m` (dimension) and `k` (value degree) with
/// exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MkPoly {
    terms: BTreeMap<(u8, u8), Rat>,
}

impl MkPoly {
    pub fn zero() -> Self {
        MkPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(r: Rat) -> Self {
        let mut p = MkPoly::zero();
        p.add_term(0, 0, r);
        p
    }

    pub fn int(n: i64) -> Self {
        MkPoly::constant(Rat::from_integer(n.into()))
    }

    pub fn one() -> Self {
        MkPoly::int(1)
    }

    pub fn m() -> Self {
        let mut p = MkPoly::zero();
        p.add_term(1, 0, Rat::one());
        p
    }

    pub fn k() -> Self {
        let mut p = MkPoly::zero();
        p.add_term(0, 1, Rat::one());
        p
    }

    /// `2k + m + c`.
    pub fn two_k_plus_m(c: i64) -> Self {
        let mut p = MkPoly::zero();
        p.add_term(0, 1, Rat::from_integer(2.into()));
        p.add_term(1, 0, Rat::one());
        p.add_term(0, 0, Rat::from_integer(c.into()));
        p
    }

    /// `m + c`.
    pub fn m_plus(c: i64) -> Self {
        let mut p = MkPoly::zero();
        p.add_term(1, 0, Rat::one());
        p.add_term(0, 0, Rat::from_integer(c.into()));
        p
    }

    pub fn add_term(&mut self, dm: u8, dk: u8, r: Rat) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry((dm, dk)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(r);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &r;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &MkPoly) -> MkPoly {
        let mut out = self.clone();
        for (&(dm, dk), r) in &rhs.terms {
            out.add_term(dm, dk, r.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MkPoly) -> MkPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MkPoly {
        MkPoly {
            terms: self.terms.iter().map(|(&e, r)| (e, -r.clone())).collect(),
        }
    }

    pub fn mul(&self, rhs: &MkPoly) -> MkPoly {
        let mut out = MkPoly::zero();
        for (&(am, ak), ar) in &self.terms {
            for (&(bm, bk), br) in &rhs.terms {
                out.add_term(am + bm, ak + bk, ar * br);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> MkPoly {
        if r.is_zero() {
            return MkPoly::zero();
        }
        MkPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, c * r)).collect(),
        }
    }

    /// Substitute `k -> k + delta`.
    pub fn shift_k(&self, delta: i64) -> MkPoly {
        let d = Rat::from_integer(delta.into());
        let mut out = MkPoly::zero();
        for (&(dm, dk), r) in &self.terms {
            // (k + delta)^dk expanded binomially
            for t in 0..=dk {
                let bin = crate::coeffpoly::Coefficient::binomial(dk as u32, t as u32)
                    .re()
                    .clone();
                let mut pow = Rat::one();
                for _ in 0..(dk - t) {
                    pow *= &d;
                }
                out.add_term(dm, t, r * &bin * &pow);
            }
        }
        out
    }

    /// Substitute a numeric value for `k`.
    pub fn eval_k(&self, k: i64) -> MkPoly {
        let kv = Rat::from_integer(k.into());
        let mut out = MkPoly::zero();
        for (&(dm, dk), r) in &self.terms {
            let mut pow = Rat::one();
            for _ in 0..dk {
                pow *= &kv;
            }
            out.add_term(dm, 0, r * &pow);
        }
        out
    }

    pub fn eval(&self, m: i64, k: i64) -> Rat {
        let mv = Rat::from_integer(m.into());
        let kv = Rat::from_integer(k.into());
        let mut acc = Rat::zero();
        for (&(dm, dk), r) in &self.terms {
            let mut t = r.clone();
            for _ in 0..dm {
                t *= &mv;
            }
            for _ in 0..dk {
                t *= &kv;
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for MkPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(dm, dk), r) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}/{}", r.numer(), r.denom())?;
            if dm > 0 {
                write!(f, "*m^{dm}")?;
            }
            if dk > 0 {
                write!(f, "*k^{dk}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Generator sets
// ---------------------------------------------------------------------------

/// A finite generator set with a fixed canonical order (the declaration
/// order), bidegree shifts, and a concrete realization per dimension.
pub trait GeneratorSet: Copy + Ord + Eq + fmt::Debug + fmt::Display + 'static {
    fn all() -> &'static [Self];
    /// Bidegree shift `(x, u)` of the realized operator.
    fn shift(self) -> (i32, i32);
    fn realize(self, m: u32) -> DiffOp;
}

/// The ten index-free generators of the two-variable operator algebra.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Gen10 {
    XNormSq,
    UNormSq,
    InnerUx,
    InnerUDx,
    InnerXDu,
    LapX,
    InnerDuDx,
    EulerX,
    EulerU,
    LapU,
}

impl fmt::Display for Gen10 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gen10::XNormSq => "|x|^2",
            Gen10::UNormSq => "|u|^2",
            Gen10::InnerUx => "<u,x>",
            Gen10::InnerUDx => "<u,dx>",
            Gen10::InnerXDu => "<x,du>",
            Gen10::LapX => "Lx",
            Gen10::InnerDuDx => "<du,dx>",
            Gen10::EulerX => "Ex",
            Gen10::EulerU => "Eu",
            Gen10::LapU => "Lu",
        };
        write!(f, "{s}")
    }
}

impl GeneratorSet for Gen10 {
    fn all() -> &'static [Self] {
        &[
            Gen10::XNormSq,
            Gen10::UNormSq,
            Gen10::InnerUx,
            Gen10::InnerUDx,
            Gen10::InnerXDu,
            Gen10::LapX,
            Gen10::InnerDuDx,
            Gen10::EulerX,
            Gen10::EulerU,
            Gen10::LapU,
        ]
    }

    fn shift(self) -> (i32, i32) {
        match self {
            Gen10::XNormSq => (2, 0),
            Gen10::UNormSq => (0, 2),
            Gen10::InnerUx => (1, 1),
            Gen10::InnerUDx => (-1, 1),
            Gen10::InnerXDu => (1, -1),
            Gen10::LapX => (-2, 0),
            Gen10::InnerDuDx => (-1, -1),
            Gen10::EulerX => (0, 0),
            Gen10::EulerU => (0, 0),
            Gen10::LapU => (0, -2),
        }
    }

    fn realize(self, m: u32) -> DiffOp {
        match self {
            Gen10::XNormSq => diffop::norm_sq_x_op(m),
            Gen10::UNormSq => diffop::norm_sq_u_op(m),
            Gen10::InnerUx => diffop::inner_ux_op(m),
            Gen10::InnerUDx => diffop::inner_u_dx(m),
            Gen10::InnerXDu => diffop::inner_x_du(m),
            Gen10::LapX => diffop::laplace_x(m),
            Gen10::InnerDuDx => diffop::inner_du_dx(m),
            Gen10::EulerX => diffop::euler_x(m),
            Gen10::EulerU => diffop::euler_u(m),
            Gen10::LapU => diffop::laplace_u(m),
        }
    }
}

/// Generators of the one-variable subalgebra attached to a fixed unit
/// direction (realized with `omega = e1`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum OmegaGen {
    /// `<omega, u>` (multiplication).
    OmU,
    /// `||u||^2` (multiplication).
    UNormSq,
    /// `<omega, d_u>`.
    OmDu,
    EulerU,
    LapU,
}

impl fmt::Display for OmegaGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OmegaGen::OmU => "<w,u>",
            OmegaGen::UNormSq => "|u|^2",
            OmegaGen::OmDu => "<w,du>",
            OmegaGen::EulerU => "Eu",
            OmegaGen::LapU => "Lu",
        };
        write!(f, "{s}")
    }
}

impl GeneratorSet for OmegaGen {
    fn all() -> &'static [Self] {
        &[
            OmegaGen::OmU,
            OmegaGen::UNormSq,
            OmegaGen::OmDu,
            OmegaGen::EulerU,
            OmegaGen::LapU,
        ]
    }

    fn shift(self) -> (i32, i32) {
        match self {
            OmegaGen::OmU => (0, 1),
            OmegaGen::UNormSq => (0, 2),
            OmegaGen::OmDu => (0, -1),
            OmegaGen::EulerU => (0, 0),
            OmegaGen::LapU => (0, -2),
        }
    }

    fn realize(self, m: u32) -> DiffOp {
        match self {
            OmegaGen::OmU => DiffOp::mul_op(MultiPoly::var(m, Var::U(1))),
            OmegaGen::UNormSq => diffop::norm_sq_u_op(m),
            OmegaGen::OmDu => DiffOp::partial(m, Var::U(1)),
            OmegaGen::EulerU => diffop::euler_u(m),
            OmegaGen::LapU => diffop::laplace_u(m),
        }
    }
}

// ---------------------------------------------------------------------------
// Expressions and normal ordering
// ---------------------------------------------------------------------------

/// A finite sum of words in the generators with [`MkPoly`] coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct OpExpr<G: GeneratorSet> {
    terms: BTreeMap<Vec<G>, MkPoly>,
}

impl<G: GeneratorSet> OpExpr<G> {
    pub fn zero() -> Self {
        OpExpr {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        OpExpr::word(vec![], MkPoly::one())
    }

    pub fn gen(g: G) -> Self {
        OpExpr::word(vec![g], MkPoly::one())
    }

    pub fn word(w: Vec<G>, c: MkPoly) -> Self {
        let mut e = OpExpr::zero();
        e.add_word(w, c);
        e
    }

    pub fn add_word(&mut self, w: Vec<G>, c: MkPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<G>, &MkPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &OpExpr<G>) -> OpExpr<G> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_word(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &OpExpr<G>) -> OpExpr<G> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> OpExpr<G> {
        OpExpr {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &MkPoly) -> OpExpr<G> {
        let mut out = OpExpr::zero();
        for (w, a) in &self.terms {
            out.add_word(w.clone(), a.mul(c));
        }
        out
    }

    /// Noncommutative product: concatenate words, multiply coefficients.
    pub fn mul(&self, rhs: &OpExpr<G>) -> OpExpr<G> {
        let mut out = OpExpr::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_word(w, ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> OpExpr<G> {
        let mut acc = OpExpr::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Map the symbolic `k` in every coefficient to `k + delta`.
    pub fn shift_k(&self, delta: i64) -> OpExpr<G> {
        OpExpr {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.shift_k(delta)))
                .collect(),
        }
    }

    /// Substitute a numeric `k` in every coefficient.
    pub fn eval_k(&self, k: i64) -> OpExpr<G> {
        let mut out = OpExpr::zero();
        for (w, c) in &self.terms {
            out.add_word(w.clone(), c.eval_k(k));
        }
        out
    }

    /// Realize as a concrete operator at numeric `(m, k)`.
    pub fn realize(&self, m: u32, k: i64) -> Result<DiffOp> {
        let mut acc = DiffOp::zero(m);
        for (w, c) in &self.terms {
            let mut op = DiffOp::identity(m);
            for g in w {
                op = op.compose(&g.realize(m))?;
            }
            let r = c.eval(m as i64, k);
            acc = acc.add(&op.scale(&Coefficient::from_rat(r)))?;
        }
        Ok(acc)
    }
}

impl<G: GeneratorSet> fmt::Display for OpExpr<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for g in w {
                write!(f, " {g}")?;
            }
        }
        Ok(())
    }
}

/// The fitted commutator table: for each ordered pair `(a, b)` with `a`
/// after `b` in the canonical order, `[a, b]` as a sum of single generators
/// and the identity, with coefficients affine in `m`.
pub struct RelationTable<G: GeneratorSet> {
    entries: BTreeMap<(G, G), Vec<(Option<G>, MkPoly)>>,
}

impl<G: GeneratorSet> RelationTable<G> {
    /// The commutator `[a, b]` as an expression, for any pair.
    pub fn commutator(&self, a: G, b: G) -> OpExpr<G> {
        if a == b {
            return OpExpr::zero();
        }
        let (key, negate) = if a > b { ((a, b), false) } else { ((b, a), true) };
        let mut out = OpExpr::zero();
        if let Some(rel) = self.entries.get(&key) {
            for (g, c) in rel {
                let w = g.map(|g| vec![g]).unwrap_or_default();
                out.add_word(w, if negate { c.neg() } else { c.clone() });
            }
        }
        out
    }
}

/// Dimensions used to fit and validate the table.
const FIT_MS: [u32; 2] = [5, 6];
const CHECK_MS: [u32; 2] = [7, 8];
/// Bidegree test spaces; chosen so the scalar actions of `E_x`, `E_u` and
/// the identity are separable.
const TEST_SPACES: [(u32, u32); 3] = [(1, 1), (2, 1), (1, 2)];

fn operator_matrix_on_space(
    op: &DiffOp,
    m: u32,
    dx: u32,
    du: u32,
    tx: i32,
    tu: i32,
) -> Result<Option<ExactMatrix>> {
    let tx = dx as i32 + tx;
    let tu = du as i32 + tu;
    if tx < 0 || tu < 0 {
        return Ok(None);
    }
    let domain = MonomialIndex::new(m, dx, du);
    let codomain = MonomialIndex::new(m, tx as u32, tu as u32);
    let mut cols = Vec::with_capacity(domain.len());
    for i in 0..domain.len() {
        let img = op.apply(&domain.monomial_poly(i))?;
        cols.push(codomain.coords(&img)?);
    }
    Ok(Some(ExactMatrix::from_columns(&cols)))
}

type CandCache<G> = BTreeMap<(Option<G>, u32, usize), ExactMatrix>;

fn candidate_matrix<G: GeneratorSet>(
    cache: &mut CandCache<G>,
    cand: &Option<G>,
    m: u32,
    space_idx: usize,
    sx: i32,
    su: i32,
) -> Result<ExactMatrix> {
    if let Some(mat) = cache.get(&(*cand, m, space_idx)) {
        return Ok(mat.clone());
    }
    let (dx, du) = TEST_SPACES[space_idx];
    let mat = match cand {
        Some(g) => operator_matrix_on_space(&g.realize(m), m, dx, du, sx, su)?.expect("same shift"),
        None => operator_matrix_on_space(&DiffOp::identity(m), m, dx, du, 0, 0)?.expect("identity"),
    };
    cache.insert((*cand, m, space_idx), mat.clone());
    Ok(mat)
}

/// Fit `[a, b]` in the span of same-shift generators (plus the identity) at
/// one numeric dimension. Returns one rational per candidate.
fn fit_pair_at_m<G: GeneratorSet>(
    cache: &mut CandCache<G>,
    a: G,
    b: G,
    m: u32,
    candidates: &[Option<G>],
) -> Result<Vec<Rat>> {
    let (sx, su) = (a.shift().0 + b.shift().0, a.shift().1 + b.shift().1);
    let comm = a.realize(m).commutator(&b.realize(m))?;
    if comm.is_zero() {
        // Exactly commuting pair: the fit is zero on every candidate.
        return Ok(vec![Rat::zero(); candidates.len()]);
    }
    let mut rows: Vec<Vec<Coefficient>> = Vec::new();
    let mut rhs: Vec<Coefficient> = Vec::new();
    for (space_idx, &(dx, du)) in TEST_SPACES.iter().enumerate() {
        let Some(cm) = operator_matrix_on_space(&comm, m, dx, du, sx, su)? else {
            continue;
        };
        let cand_mats: Vec<ExactMatrix> = candidates
            .iter()
            .map(|c| candidate_matrix(cache, c, m, space_idx, sx, su))
            .collect::<Result<_>>()?;
        for i in 0..cm.rows() {
            for j in 0..cm.cols() {
                // Only informative rows: all-zero rows constrain nothing.
                if cm.get(i, j).is_zero()
                    && cand_mats.iter().all(|cmat| cmat.get(i, j).is_zero())
                {
                    continue;
                }
                let mut row = Vec::with_capacity(candidates.len());
                for cmat in &cand_mats {
                    row.push(cmat.get(i, j).clone());
                }
                rows.push(row);
                rhs.push(cm.get(i, j).clone());
            }
        }
    }
    if candidates.is_empty() {
        if rhs.iter().any(|c| !c.is_zero()) {
            return Err(Error::CheckFailed {
                check: format!("commutator [{a}, {b}] outside the generator span"),
                witness: "no candidate of matching shift".to_string(),
            });
        }
        return Ok(Vec::new());
    }
    let mat = ExactMatrix::from_rows(&rows);
    let sol = mat.solve_many(&[rhs]).ok_or_else(|| Error::CheckFailed {
        check: format!("commutator [{a}, {b}] outside the generator span"),
        witness: format!("at m={m}"),
    })?;
    sol[0]
        .iter()
        .map(|c| {
            if c.is_real() {
                Ok(c.re().clone())
            } else {
                Err(Error::domain("non-real fit coefficient".to_string()))
            }
        })
        .collect()
}

/// Verify an already-fitted relation at a held-out dimension by direct
/// operator comparison in normal form (stronger than the matrix route used
/// for the fit itself).
fn verify_pair_at_m<G: GeneratorSet>(
    a: G,
    b: G,
    m: u32,
    rel: &[(Option<G>, MkPoly)],
) -> Result<()> {
    let comm = a.realize(m).commutator(&b.realize(m))?;
    let mut predicted = DiffOp::zero(m);
    for (cand, c) in rel {
        let weight = Coefficient::from_rat(c.eval(m as i64, 0));
        let op = match cand {
            Some(g) => g.realize(m),
            None => DiffOp::identity(m),
        };
        predicted = predicted.add(&op.scale(&weight))?;
    }
    if predicted != comm {
        return Err(Error::CheckFailed {
            check: format!("affine fit of [{a}, {b}]"),
            witness: format!("held-out dimension m={m}"),
        });
    }
    Ok(())
}

/// Derive the commutator table by exact interpolation, then validate the
/// affine-in-`m` fit at two further dimensions.
pub fn derive_relation_table<G: GeneratorSet>() -> Result<RelationTable<G>> {
    let gens = G::all();
    let mut entries = BTreeMap::new();
    let mut cache: CandCache<G> = BTreeMap::new();
    for (ia, &a) in gens.iter().enumerate() {
        for &b in &gens[..ia] {
            // a > b in the canonical order
            let shift = (a.shift().0 + b.shift().0, a.shift().1 + b.shift().1);
            let mut candidates: Vec<Option<G>> = gens
                .iter()
                .copied()
                .filter(|g| g.shift() == shift)
                .map(Some)
                .collect();
            if shift == (0, 0) {
                candidates.push(None);
            }
            let y5 = fit_pair_at_m(&mut cache, a, b, FIT_MS[0], &candidates)?;
            let y6 = fit_pair_at_m(&mut cache, a, b, FIT_MS[1], &candidates)?;
            // Affine interpolation y(m) = c0 + c1 m from the two fits.
            let mut rel: Vec<(Option<G>, MkPoly)> = Vec::new();
            for (i, cand) in candidates.iter().enumerate() {
                let c1 = &y6[i] - &y5[i];
                let c0 = &y5[i] - &(&c1 * &Rat::from_integer(5.into()));
                let mut c = MkPoly::constant(c0);
                c = c.add(&MkPoly::m().scale(&c1));
                if !c.is_zero() {
                    rel.push((*cand, c));
                }
            }
            // Validate at the held-out dimensions.
            for &mv in &CHECK_MS {
                verify_pair_at_m(a, b, mv, &rel)?;
            }
            entries.insert((a, b), rel);
        }
    }
    Ok(RelationTable { entries })
}

static TABLE10: OnceLock<RelationTable<Gen10>> = OnceLock::new();
static TABLE_OMEGA: OnceLock<RelationTable<OmegaGen>> = OnceLock::new();

/// The frozen ten-generator table (derived once per process).
pub fn table10() -> &'static RelationTable<Gen10> {
    TABLE10.get_or_init(|| derive_relation_table().expect("ten-generator table derivation"))
}

/// The frozen table of the fixed-direction subalgebra.
pub fn table_omega() -> &'static RelationTable<OmegaGen> {
    TABLE_OMEGA.get_or_init(|| derive_relation_table().expect("omega table derivation"))
}

/// Rewrite to the canonical order using the table. Idempotent and linear;
/// the result equals the input modulo the relations.
pub fn normal_order<G: GeneratorSet>(expr: &OpExpr<G>, table: &RelationTable<G>) -> OpExpr<G> {
    let mut out = OpExpr::zero();
    let mut work: Vec<(Vec<G>, MkPoly)> = expr
        .terms
        .iter()
        .map(|(w, c)| (w.clone(), c.clone()))
        .collect();
    while let Some((w, c)) = work.pop() {
        if c.is_zero() {
            continue;
        }
        let bad = w.windows(2).position(|p| p[0] > p[1]);
        let Some(i) = bad else {
            out.add_word(w, c);
            continue;
        };
        // w = prefix a b suffix with a > b:
        // a b = b a + [a, b]
        let (a, b) = (w[i], w[i + 1]);
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        work.push((swapped, c.clone()));
        for (g, rc) in table.commutator(a, b).terms() {
            let mut nw = Vec::with_capacity(w.len() - 2 + g.len());
            nw.extend_from_slice(&w[..i]);
            nw.extend_from_slice(g);
            nw.extend_from_slice(&w[i + 2..]);
            work.push((nw, c.mul(rc)));
        }
    }
    out
}

/// Reduce a normal-form expression to its action on harmonic-valued
/// arguments of a fixed numeric u-degree `k`: the symbolic rules of
/// [`reduce_on_hk`] plus degree pruning, dropping every word whose running
/// u-degree (scanned from the right, starting at `k`) goes negative -- such
/// a word factors through a zero space.
pub fn reduce_on_hk_at(expr: &OpExpr<Gen10>, k: u32) -> OpExpr<Gen10> {
    let sym = reduce_on_hk(expr);
    let mut out = OpExpr::zero();
    'words: for (w, c) in sym.terms() {
        let mut deg = k as i32;
        for g in w.iter().rev() {
            deg += g.shift().1;
            if deg < 0 {
                continue 'words;
            }
        }
        out.add_word(w.clone(), c.eval_k(k as i64));
    }
    out
}

/// Reduce a normal-form expression to its action on harmonic-valued
/// arguments of u-degree `k`: any word ending in `Lap_u` acts as zero, and a
/// trailing `E_u` acts as multiplication by the symbol `k`.
pub fn reduce_on_hk(expr: &OpExpr<Gen10>) -> OpExpr<Gen10> {
    let mut out = OpExpr::zero();
    for (w, c) in expr.terms() {
        let mut w = w.clone();
        let mut c = c.clone();
        loop {
            match w.last() {
                Some(Gen10::LapU) => {
                    c = MkPoly::zero();
                    break;
                }
                Some(Gen10::EulerU) => {
                    w.pop();
                    c = c.mul(&MkPoly::k());
                }
                _ => break,
            }
        }
        out.add_word(w, c);
    }
    out
}

// ---------------------------------------------------------------------------
// The identity catalogue
// ---------------------------------------------------------------------------

/// The cleared second-order operator
/// `(2k+m-2)(2k+m-4) Lap_x - 4(2k+m-4) <u,dx><du,dx> + 4 |u|^2 <du,dx>^2`,
/// i.e. `(2k+m-2)(2k+m-4) D_k` with symbolic `(m, k)`.
pub fn dk_cleared() -> OpExpr<Gen10> {
    let c_lap = MkPoly::two_k_plus_m(-2).mul(&MkPoly::two_k_plus_m(-4));
    let c_mid = MkPoly::two_k_plus_m(-4).scale(&Rat::from_integer(4.into())).neg();
    let c_trace = MkPoly::int(4);
    let mut e = OpExpr::word(vec![Gen10::LapX], c_lap);
    e.add_word(vec![Gen10::InnerUDx, Gen10::InnerDuDx], c_mid);
    e.add_word(
        vec![Gen10::UNormSq, Gen10::InnerDuDx, Gen10::InnerDuDx],
        c_trace,
    );
    e
}

/// Names of the symbolically verified identities.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModuleIdentity {
    /// Dual-twistor intertwining:
    /// `<du,dx> D_k = (2k+m-6)/(2k+m-2) D_(k-1) <du,dx>` on harmonic values,
    /// identically in `(m, k)` after clearing denominators.
    Lemma41,
    /// Order-2 factorization at `k = 1`:
    /// `A_2 D_1 = Lap^2 = D_1 A_2` on harmonic values, identically in `m`.
    A2kK1,
    /// Order-4 factorization at `k = 2`:
    /// `A_4 D_2 = Lap^3 = D_2 A_4` on harmonic values, identically in `m`.
    A2kK2,
    /// The enveloping-algebra relation
    /// `[<w,du>, Q^j] + j Q^(j-1) (2 E_u + m + j - 3) = 0` with
    /// `Q = |u|^2 <w,du> - <w,u>(2 E_u + m - 2)`, identically in `m`.
    UeaSl2(u32),
}

impl fmt::Display for ModuleIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleIdentity::Lemma41 => write!(f, "lemma41"),
            ModuleIdentity::A2kK1 => write!(f, "a2k_k1"),
            ModuleIdentity::A2kK2 => write!(f, "a2k_k2"),
            ModuleIdentity::UeaSl2(j) => write!(f, "ueasl2_{j}"),
        }
    }
}

/// The catalogue of identities [`verify_module_identity`] accepts.
pub fn catalogue() -> Vec<ModuleIdentity> {
    vec![
        ModuleIdentity::Lemma41,
        ModuleIdentity::A2kK1,
        ModuleIdentity::A2kK2,
        ModuleIdentity::UeaSl2(1),
        ModuleIdentity::UeaSl2(2),
        ModuleIdentity::UeaSl2(3),
        ModuleIdentity::UeaSl2(4),
    ]
}

impl std::str::FromStr for ModuleIdentity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lemma41" => ModuleIdentity::Lemma41,
            "a2k_k1" => ModuleIdentity::A2kK1,
            "a2k_k2" => ModuleIdentity::A2kK2,
            "ueasl2_1" => ModuleIdentity::UeaSl2(1),
            "ueasl2_2" => ModuleIdentity::UeaSl2(2),
            "ueasl2_3" => ModuleIdentity::UeaSl2(3),
            "ueasl2_4" => ModuleIdentity::UeaSl2(4),
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

/// Report of a symbolic identity verification.
pub struct IdentityReport {
    pub identity: ModuleIdentity,
    /// The reduced normal form of the difference; empty string when zero.
    pub residual: String,
    pub holds: bool,
}

fn a2_cleared_scaled() -> OpExpr<Gen10> {
    // (m - 4) A_2 = (m-4) Lap + 4 <u,dx><du,dx>
    let mut e = OpExpr::word(vec![Gen10::LapX], MkPoly::m_plus(-4));
    e.add_word(vec![Gen10::InnerUDx, Gen10::InnerDuDx], MkPoly::int(4));
    e
}

fn a4_cleared_scaled() -> OpExpr<Gen10> {
    // m(m-2)(m-4) A_4
    //   = m(m-2)(m-4) Lap^2 + 4 (m <u,dx> - |u|^2 <du,dx>) ((m-4) A_2) <du,dx>
    let lead = MkPoly::m()
        .mul(&MkPoly::m_plus(-2))
        .mul(&MkPoly::m_plus(-4));
    let mut twistor = OpExpr::word(vec![Gen10::InnerUDx], MkPoly::m());
    twistor.add_word(
        vec![Gen10::UNormSq, Gen10::InnerDuDx],
        MkPoly::int(-1),
    );
    let inner = twistor
        .mul(&a2_cleared_scaled())
        .mul(&OpExpr::gen(Gen10::InnerDuDx))
        .scale(&MkPoly::int(4));
    OpExpr::word(vec![Gen10::LapX, Gen10::LapX], lead).add(&inner)
}

/// Expand, normal-order and module-reduce the named identity; the result
/// must be the zero normal form identically in the symbols.
pub fn verify_module_identity(id: ModuleIdentity) -> Result<IdentityReport> {
    let residual: String;
    let holds: bool;
    match id {
        ModuleIdentity::Lemma41 => {
            let dual = OpExpr::gen(Gen10::InnerDuDx);
            let lhs = dual.mul(&dk_cleared());
            let rhs = dk_cleared().shift_k(-1).mul(&dual);
            let diff = reduce_on_hk(&normal_order(&lhs.sub(&rhs), table10()));
            holds = diff.is_zero();
            residual = format!("{diff}");
        }
        ModuleIdentity::A2kK1 => {
            let d1 = dk_cleared().eval_k(1);
            let a2 = a2_cleared_scaled();
            let scale = MkPoly::m_plus(-4)
                .mul(&MkPoly::m())
                .mul(&MkPoly::m_plus(-2));
            let lap2 = OpExpr::word(vec![Gen10::LapX, Gen10::LapX], scale);
            let left = a2.mul(&d1).sub(&lap2);
            let right = d1.mul(&a2).sub(&lap2);
            let dl = reduce_on_hk_at(&normal_order(&left, table10()), 1);
            let dr = reduce_on_hk_at(&normal_order(&right, table10()), 1);
            holds = dl.is_zero() && dr.is_zero();
            residual = format!("{dl} ; {dr}");
        }
        ModuleIdentity::A2kK2 => {
            let d2 = dk_cleared().eval_k(2);
            let a4 = a4_cleared_scaled();
            let scale = MkPoly::m()
                .mul(&MkPoly::m_plus(-2))
                .mul(&MkPoly::m_plus(-4))
                .mul(&MkPoly::m_plus(2))
                .mul(&MkPoly::m());
            let lap3 = OpExpr::word(vec![Gen10::LapX, Gen10::LapX, Gen10::LapX], scale);
            let left = a4.mul(&d2).sub(&lap3);
            let right = d2.mul(&a4).sub(&lap3);
            let dl = reduce_on_hk_at(&normal_order(&left, table10()), 2);
            let dr = reduce_on_hk_at(&normal_order(&right, table10()), 2);
            holds = dl.is_zero() && dr.is_zero();
            residual = format!("{dl} ; {dr}");
        }
        ModuleIdentity::UeaSl2(j) => {
            if !(1..=4).contains(&j) {
                return Err(Error::UnknownName(format!("ueasl2_{j}")));
            }
            let p = OpExpr::gen(OmegaGen::OmDu);
            // Q = |u|^2 <w,du> - <w,u> (2 E_u + m - 2)
            let mut q = OpExpr::word(
                vec![OmegaGen::UNormSq, OmegaGen::OmDu],
                MkPoly::one(),
            );
            q.add_word(
                vec![OmegaGen::OmU, OmegaGen::EulerU],
                MkPoly::int(-2),
            );
            q.add_word(vec![OmegaGen::OmU], MkPoly::m_plus(-2).neg());
            let qj = q.pow(j);
            let comm = p.mul(&qj).sub(&qj.mul(&p));
            // + j Q^(j-1) (2 E_u + m + j - 3)
            let mut tail = OpExpr::word(vec![OmegaGen::EulerU], MkPoly::int(2));
            tail.add_word(vec![], MkPoly::m_plus(j as i64 - 3));
            let correction = q.pow(j - 1).mul(&tail).scale(&MkPoly::int(j as i64));
            let diff = normal_order(&comm.add(&correction), table_omega());
            holds = diff.is_zero();
            residual = format!("{diff}");
        }
    }
    Ok(IdentityReport {
        identity: id,
        residual,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_known_relations() {
        let t = table10();
        // [Lap_x, |x|^2] = 4 E_x + 2m
        let mut expected = OpExpr::word(vec![Gen10::EulerX], MkPoly::int(4));
        expected.add_word(vec![], MkPoly::m().scale(&Rat::from_integer(2.into())));
        assert_eq!(t.commutator(Gen10::LapX, Gen10::XNormSq), expected);
        // [Lap_x, <u,x>] = 2 <u,dx>
        assert_eq!(
            t.commutator(Gen10::LapX, Gen10::InnerUx),
            OpExpr::word(vec![Gen10::InnerUDx], MkPoly::int(2))
        );
        // [E_x, Lap_x] = -2 Lap_x
        assert_eq!(
            t.commutator(Gen10::EulerX, Gen10::LapX),
            OpExpr::word(vec![Gen10::LapX], MkPoly::int(-2))
        );
        // [<du,dx>, <u,x>] = E_x + E_u + m
        let mut expected = OpExpr::word(vec![Gen10::EulerX], MkPoly::one());
        expected.add_word(vec![Gen10::EulerU], MkPoly::one());
        expected.add_word(vec![], MkPoly::m());
        assert_eq!(t.commutator(Gen10::InnerDuDx, Gen10::InnerUx), expected);
        // Commuting pair.
        assert!(t.commutator(Gen10::LapU, Gen10::XNormSq).is_zero());
    }

    #[test]
    fn normal_order_examples() {
        let t = table10();
        // <du,dx> <u,x> normal-orders to <u,x> <du,dx> + E_x + E_u + m.
        let e = OpExpr::word(vec![Gen10::InnerDuDx, Gen10::InnerUx], MkPoly::one());
        let n = normal_order(&e, t);
        let mut expected = OpExpr::word(vec![Gen10::InnerUx, Gen10::InnerDuDx], MkPoly::one());
        expected.add_word(vec![Gen10::EulerX], MkPoly::one());
        expected.add_word(vec![Gen10::EulerU], MkPoly::one());
        expected.add_word(vec![], MkPoly::m());
        assert_eq!(n, expected);
        // Idempotence.
        assert_eq!(normal_order(&n, t), n);
        // Commuting pair stays a plain swap.
        let e = OpExpr::word(vec![Gen10::LapU, Gen10::XNormSq], MkPoly::one());
        assert_eq!(
            normal_order(&e, t),
            OpExpr::word(vec![Gen10::XNormSq, Gen10::LapU], MkPoly::one())
        );
        // Empty word unchanged.
        let e = OpExpr::<Gen10>::one();
        assert_eq!(normal_order(&e, t), e);
    }

    #[test]
    fn normal_order_respects_table_on_pairs() {
        let t = table10();
        for &a in Gen10::all() {
            for &b in Gen10::all() {
                let ab = normal_order(&OpExpr::word(vec![a, b], MkPoly::one()), t);
                let ba = normal_order(&OpExpr::word(vec![b, a], MkPoly::one()), t);
                let diff = ab.sub(&ba);
                assert_eq!(
                    normal_order(&diff, t),
                    normal_order(&t.commutator(a, b), t),
                    "pair ({a}, {b})"
                );
            }
        }
    }

    #[test]
    fn jacobi_identity_all_triples() {
        let t = table10();
        let gens = Gen10::all();
        let comm = |x: &OpExpr<Gen10>, y: &OpExpr<Gen10>| x.mul(y).sub(&y.mul(x));
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                for l in (j + 1)..gens.len() {
                    let (a, b, c) = (
                        OpExpr::gen(gens[i]),
                        OpExpr::gen(gens[j]),
                        OpExpr::gen(gens[l]),
                    );
                    let jac = comm(&a, &comm(&b, &c))
                        .add(&comm(&b, &comm(&c, &a)))
                        .add(&comm(&c, &comm(&a, &b)));
                    assert!(
                        normal_order(&jac, t).is_zero(),
                        "Jacobi failed on ({}, {}, {})",
                        gens[i],
                        gens[j],
                        gens[l]
                    );
                }
            }
        }
    }

    #[test]
    fn module_identities_all_hold() {
        for id in catalogue() {
            let r = verify_module_identity(id).unwrap();
            assert!(r.holds, "{} residual: {}", r.identity, r.residual);
        }
    }

    #[test]
    fn module_rule_soundness_on_random_words() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(12345);
        let t = table10();
        let gens = Gen10::all();
        let (m, k, l) = (5u32, 1i64, 2u32);
        let hk = crate::harmonic::basis(crate::harmonic::BasisSpec {
            tag: crate::harmonic::SpaceTag::Hk,
            m,
            k: k as u32,
            l: 0,
        })
        .unwrap()
        .scalar();
        let domain = crate::harmonic::tensor_basis(m, l, &hk);
        for _ in 0..20 {
            let len = rng.gen_range(1..=3);
            let w: Vec<Gen10> = (0..len).map(|_| gens[rng.gen_range(0..gens.len())]).collect();
            let expr = OpExpr::word(w.clone(), MkPoly::one());
            let reduced = reduce_on_hk_at(&normal_order(&expr, t), k as u32);
            let direct = expr.realize(m, k).unwrap();
            let via = reduced.realize(m, k).unwrap();
            for f in &domain {
                assert_eq!(
                    direct.apply(f).unwrap(),
                    via.apply(f).unwrap(),
                    "word {w:?} disagrees on harmonic-valued argument"
                );
            }
        }
    }

    #[test]
    fn lemma41_consistent_with_concrete_matrices() {
        // The same intertwining as exact operators on P_l (x) H_k.
        for (m, k, l) in [(5u32, 1u32, 1u32), (6, 2, 2)] {
            let dk = diffop::higher_spin_laplace(m, k).unwrap();
            let dk1 = diffop::higher_spin_laplace(m, k - 1).unwrap();
            let dual = diffop::inner_du_dx(m);
            let c = Coefficient::from_ratio(
                2 * k as i64 + m as i64 - 6,
                2 * k as i64 + m as i64 - 2,
            );
            let lhs = dual.compose(&dk).unwrap();
            let rhs = dk1.compose(&dual).unwrap().scale(&c);
            let hk = crate::harmonic::basis(crate::harmonic::BasisSpec {
                tag: crate::harmonic::SpaceTag::Hk,
                m,
                k,
                l: 0,
            })
            .unwrap()
            .scalar();
            for f in crate::harmonic::tensor_basis(m, l, &hk) {
                assert_eq!(lhs.apply(&f).unwrap(), rhs.apply(&f).unwrap());
            }
        }
    }

    #[test]
    fn mkpoly_shift_and_eval() {
        let p = MkPoly::two_k_plus_m(-2); // 2k + m - 2
        let q = p.shift_k(-1); // 2k + m - 4
        assert_eq!(q, MkPoly::two_k_plus_m(-4));
        assert_eq!(p.eval(5, 1), Rat::from_integer(5.into()));
    }
}
