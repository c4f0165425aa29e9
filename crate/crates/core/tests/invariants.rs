//! Property and invariant tests drawn from the contracts of each module:
//! randomized algebraic laws (seeded and exact) plus the cross-module
//! consistency statements that do not fit a single unit test.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use hsl_core::clifford::{CliffordElement, SpinorPoly};
use hsl_core::coeffpoly::{AlphaPoly, Coefficient, ExactMatrix, MultiPoly, Var};
use hsl_core::diffop::{self, DiffOp};
use hsl_core::harmonic::{self, basis, BasisSpec, MonomialIndex, SpaceTag};
use hsl_core::kernelcheck;

fn small_coeff() -> impl Strategy<Value = Coefficient> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| {
        Coefficient::new(
            num_rational::BigRational::new(a.into(), b.into()),
            num_rational::BigRational::new(c.into(), d.into()),
        )
    })
}

/// Random sparse polynomial in (x, u) with small exponents.
fn small_poly(m: u32) -> impl Strategy<Value = MultiPoly> {
    let nvars = 2 * m as usize;
    proptest::collection::vec((proptest::collection::vec(0u8..3, nvars), small_coeff()), 1..6)
        .prop_map(move |terms| {
            let mut p = MultiPoly::zero(m);
            for (e, c) in terms {
                p.add_term(hsl_core::coeffpoly::Expo(e), c);
            }
            p
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Evaluation is a ring homomorphism: e(p q) = e(p) e(q) exactly.
    #[test]
    fn eval_respects_products(p in small_poly(3), q in small_poly(3), pt in proptest::collection::vec(small_coeff(), 6)) {
        let pq = p.mul(&q).unwrap();
        prop_assert_eq!(pq.eval(&pt), &p.eval(&pt) * &q.eval(&pt));
        let ps = p.add(&q).unwrap();
        prop_assert_eq!(ps.eval(&pt), &p.eval(&pt) + &q.eval(&pt));
    }

    /// Bidegrees add under multiplication of bihomogeneous polynomials.
    #[test]
    fn bidegrees_add(ax in 0u32..3, au in 0u32..3, bx in 0u32..3, bu in 0u32..3) {
        let m = 3;
        let p = MultiPoly::norm_sq_x(m).pow(ax).mul(&MultiPoly::norm_sq_u(m).pow(au)).unwrap();
        let q = MultiPoly::var(m, Var::X(1)).pow(bx).mul(&MultiPoly::var(m, Var::U(2)).pow(bu)).unwrap();
        let pq = p.mul(&q).unwrap();
        let (px, pu) = p.bidegree().unwrap();
        let (qx, qu) = q.bidegree().unwrap();
        prop_assert_eq!(pq.bidegree().unwrap(), (px + qx, pu + qu));
    }

    /// Alpha evaluation commutes with ring operations at random points.
    #[test]
    fn alpha_eval_homomorphism(
        a in proptest::collection::vec(small_coeff(), 1..4),
        b in proptest::collection::vec(small_coeff(), 1..4),
        at in small_coeff()
    ) {
        let p = AlphaPoly::from_coeffs(a);
        let q = AlphaPoly::from_coeffs(b);
        prop_assert_eq!((&p * &q).eval(&at), &p.eval(&at) * &q.eval(&at));
        prop_assert_eq!((&p + &q).eval(&at), &p.eval(&at) + &q.eval(&at));
    }
}

#[test]
fn leibniz_for_first_order_operators() {
    // D(pq) = D(p) q + p D(q) for 50 random pairs and several first-order D.
    let mut rng = ChaCha20Rng::seed_from_u64(31);
    let m = 4;
    let ops = [
        diffop::inner_u_dx(m),
        diffop::inner_x_du(m),
        diffop::euler_x(m),
        DiffOp::partial(m, Var::X(2)),
        diffop::angular_xu(m, 1, 3),
    ];
    for trial in 0..50 {
        let p = random_poly(&mut rng, m);
        let q = random_poly(&mut rng, m);
        let d = &ops[trial % ops.len()];
        let lhs = d.apply(&p.mul(&q).unwrap()).unwrap();
        let rhs = d
            .apply(&p)
            .unwrap()
            .mul(&q)
            .unwrap()
            .add(&p.mul(&d.apply(&q).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs, "Leibniz failed on trial {trial}");
    }
}

fn random_poly(rng: &mut ChaCha20Rng, m: u32) -> MultiPoly {
    let mut p = MultiPoly::zero(m);
    for _ in 0..rng.gen_range(1..5) {
        let e: Vec<u8> = (0..2 * m as usize).map(|_| rng.gen_range(0..3)).collect();
        p.add_term(
            hsl_core::coeffpoly::Expo(e),
            Coefficient::from_ratio(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=4)),
        );
    }
    p
}

#[test]
fn clifford_product_is_associative_on_random_triples() {
    let mut rng = ChaCha20Rng::seed_from_u64(77);
    let dim = 6;
    for _ in 0..20 {
        let rand_elem = |rng: &mut ChaCha20Rng| {
            let mut e = CliffordElement::zero(dim);
            for _ in 0..3 {
                let blade = rng.gen_range(0u64..(1 << dim));
                e.add_term(blade, Coefficient::from_int(rng.gen_range(-4i64..=4)));
            }
            e
        };
        let (a, b, c) = (rand_elem(&mut rng), rand_elem(&mut rng), rand_elem(&mut rng));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn dirac_squares_to_minus_laplacian_on_random_spinor_polys() {
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    for (m, alg) in [(5u32, 6u32), (6, 6)] {
        let lap = diffop::laplace_x(m);
        for _ in 0..20 {
            let mut f = SpinorPoly::zero(m, alg);
            for _ in 0..3 {
                let blade = rng.gen_range(0u64..(1 << alg));
                f = f
                    .add(&SpinorPoly::from_poly_element(
                        &random_poly(&mut rng, m),
                        &{
                            let mut e = CliffordElement::zero(alg);
                            e.add_term(blade, Coefficient::one());
                            e
                        },
                    ))
                    .unwrap();
            }
            let twice = f.dirac(false).unwrap().dirac(false).unwrap();
            assert_eq!(twice, f.apply_scalar(&lap).unwrap().neg());
        }
    }
}

#[test]
fn simplicial_monogenic_highest_weight_vectors() {
    // v_(k,l) = w_(k,l) I solves the simplicial monogenic system at m = 6.
    let m = 6;
    for (k, l) in [(1u32, 0u32), (1, 1), (2, 1)] {
        let v = harmonic::highest_weight_vector(harmonic::HwvKind::Monogenic, m, k, l)
            .unwrap()
            .spinor()
            .remove(0);
        assert!(v.is_spinor_valued().unwrap());
        assert!(v.dirac(false).unwrap().is_zero(), "d_x v != 0 at ({k},{l})");
        assert!(v.dirac(true).unwrap().is_zero(), "d_u v != 0 at ({k},{l})");
        assert!(
            v.apply_scalar(&diffop::inner_x_du(m)).unwrap().is_zero(),
            "<x,d_u> v != 0 at ({k},{l})"
        );
    }
}

#[test]
fn howe_harmonics_decompose_into_raised_simplicial_blocks() {
    // A_(l,k) = (+)_j <u,d_x>^j H_(l+j, k-j): block dimensions sum, images
    // are jointly independent, and they span the Howe space.
    for (m, l, k) in [(5u32, 1u32, 1u32), (5, 2, 1), (5, 2, 2)] {
        let howe = basis(BasisSpec {
            tag: SpaceTag::Howe,
            m,
            k,
            l,
        })
        .unwrap()
        .scalar();
        let raise = diffop::inner_u_dx(m);
        let chart = MonomialIndex::new(m, l, k);
        let mut cols = Vec::new();
        let mut total = 0usize;
        for j in 0..=k {
            let src_x = l + j;
            let src_u = k - j;
            if src_x < src_u {
                continue;
            }
            let block = basis(BasisSpec {
                tag: SpaceTag::Hkl,
                m,
                k: src_x,
                l: src_u,
            })
            .unwrap()
            .scalar();
            total += block.len();
            for h in &block {
                let mut img = h.clone();
                for _ in 0..j {
                    img = raise.apply(&img).unwrap();
                }
                cols.push(chart.coords(&img).unwrap());
            }
        }
        assert_eq!(total, howe.len(), "dimension sum at (m={m}, l={l}, k={k})");
        let rank = ExactMatrix::from_columns(&cols).rank();
        assert_eq!(rank, total, "joint independence at (m={m}, l={l}, k={k})");
        // Spanning: adding the Howe basis does not increase the rank.
        for h in &howe {
            cols.push(chart.coords(h).unwrap());
        }
        assert_eq!(
            ExactMatrix::from_columns(&cols).rank(),
            total,
            "span at (m={m}, l={l}, k={k})"
        );
    }
}

#[test]
fn howe_harmonics_solve_the_second_order_operator() {
    // Every gauge solution is an honest kernel element.
    let (m, l, k) = (5u32, 2u32, 1u32);
    let dk = diffop::higher_spin_laplace(m, k).unwrap();
    for h in basis(BasisSpec {
        tag: SpaceTag::Howe,
        m,
        k,
        l,
    })
    .unwrap()
    .scalar()
    {
        assert!(dk.apply(&h).unwrap().is_zero());
    }
}

#[test]
fn surjectivity_ranks_on_the_grid() {
    for m in [5u32, 6] {
        for k in [1u32, 2] {
            for l in [2u32, 3] {
                let (rank, expected) = kernelcheck::operator_rank(m, k, l).unwrap();
                assert_eq!(rank, expected, "rank deficit at (m={m}, k={k}, l={l})");
            }
        }
    }
}

#[test]
fn weighted_leibniz_on_random_polynomials() {
    use hsl_core::radial::RadialElement;
    let mut rng = ChaCha20Rng::seed_from_u64(2718);
    let m = 5;
    for _ in 0..20 {
        let p = random_poly(&mut rng, m);
        let e = RadialElement::weighted(0, p.to_alpha());
        let lhs = e.laplace_x();
        let alpha = AlphaPoly::alpha();
        let t1 = RadialElement::weighted(
            -1,
            p.to_alpha().scale(
                &(&alpha * &AlphaPoly::alpha_plus(Coefficient::from_int(m as i64 - 2))),
            ),
        );
        let t2 = RadialElement::weighted(
            -1,
            diffop::euler_x(m)
                .apply(&p)
                .unwrap()
                .to_alpha()
                .scale(&alpha.scale(&Coefficient::from_int(2))),
        );
        let t3 = RadialElement::weighted(0, diffop::laplace_x(m).apply(&p).unwrap().to_alpha());
        assert!(lhs.eq_radial(&t1.add(&t2).add(&t3)));
    }
}

#[test]
fn block_operators_have_stated_codomains() {
    // The four composite blocks map H_k (x) S into monogenic-valued or
    // u-times-monogenic-valued functions.
    use hsl_core::rscheck;
    let (m, alg, k, l) = (6u32, 6u32, 1u32, 1u32);
    let space = hsl_core::clifford::SpinorSpace::new(alg).unwrap();
    let rk = rscheck::build_rs(m, alg, k).unwrap();
    let rk1 = rscheck::build_rs(m, alg, k - 1).unwrap();
    let p1 = rscheck::p1(m, alg, k).unwrap();
    let p0 = rscheck::p0(m, alg, k).unwrap();
    let twistor =
        hsl_core::rscheck::CliffordDiffOp::from_scalar(&diffop::twistor(m, k).unwrap(), alg);
    let domain = rscheck::pl_hk_spinor_basis(m, &space, k, l).unwrap();
    for f in &domain {
        // -R_k^2 p_1 is monogenic-valued.
        let a = rk.apply(&rk.apply(&p1.apply(f).unwrap()).unwrap()).unwrap();
        assert!(a.dirac(true).unwrap().is_zero());
        // u <d_u,d_x> R_k p_1 is u-times-monogenic-valued: stripping the
        // leading u leaves a monogenic.
        let b = p1
            .apply(f)
            .unwrap();
        let b = rk.apply(&b).unwrap().apply_scalar(&diffop::inner_du_dx(m)).unwrap();
        assert!(b.dirac(true).unwrap().is_zero()); // M_(k-1)-valued before u
        // u R_(k-1)^2 p_0: inner part monogenic-valued.
        let c = rk1.apply(&rk1.apply(&p0.apply(f).unwrap()).unwrap()).unwrap();
        assert!(c.dirac(true).unwrap().is_zero());
        // twistor R_(k-1) p_0 is monogenic-valued.
        let d = twistor.apply(&rk1.apply(&p0.apply(f).unwrap()).unwrap()).unwrap();
        assert!(d.dirac(true).unwrap().is_zero());
    }
}
