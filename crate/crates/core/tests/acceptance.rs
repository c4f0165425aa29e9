//! Acceptance suite: every exit criterion, each printed as one pass/fail
//! line. All comparisons are exact (rational arithmetic); there are no
//! tolerances anywhere.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use hsl_core::coeffpoly::Coefficient;
use hsl_core::harmonic;
use hsl_core::kernelcheck;
use hsl_core::opalgebra;
use hsl_core::radial;
use hsl_core::rscheck;
use hsl_core::suites;

fn criterion(name: &str, started: Instant, ok: bool, detail: &str) -> bool {
    let status = if ok { "PASS" } else { "FAIL" };
    println!(
        "{status} {name} ({:.2}s) {detail}",
        started.elapsed().as_secs_f64()
    );
    ok
}

#[test]
fn criterion_01_conformal_symmetries() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for m in [5u32, 6] {
        for k in [1u32, 2] {
            for l in [k, k + 1] {
                let r = suites::symmetries(m, k, l).unwrap();
                if !r.passed() {
                    ok = false;
                    detail.push_str(&format!(" fail at (m={m},k={k},l={l})"));
                }
            }
        }
    }
    assert!(criterion(
        "criterion-01 conformal symmetry suite",
        t,
        ok,
        &format!("m in {{5,6}}, k in {{1,2}}, l in {{k,k+1}}, exact zero matrices{detail}")
    ));
}

#[test]
fn criterion_02_ellipticity_dichotomy() {
    let t = Instant::now();
    let mut ok = true;
    for m in [5u32, 6, 7] {
        for k in [1u32, 2, 3] {
            let r = suites::ellipticity(m, k, 2024).unwrap();
            ok &= r.passed();
            ok &= r
                .checks
                .iter()
                .all(|c| c.status == hsl_core::report::Status::Pass);
        }
    }
    for k in [1u32, 2] {
        let r = suites::ellipticity(4, k, 2024).unwrap();
        ok &= r.passed();
        ok &= r
            .checks
            .iter()
            .all(|c| c.status == hsl_core::report::Status::SingularAsExpected);
    }
    // Spot value: m = 5, k = 1, x0 = e1 gives exactly 1/5.
    let mut e1 = vec![Coefficient::zero(); 5];
    e1[0] = Coefficient::one();
    let det = kernelcheck::ellipticity_check(5, 1, &e1).unwrap();
    ok &= det == Coefficient::from_ratio(1, 5);
    assert!(criterion(
        "criterion-02 ellipticity dichotomy",
        t,
        ok,
        &format!("nonsingular for m>4, singular at m=4; det(e1; 5,1) = {det}")
    ));
}

#[test]
fn criterion_03_kernel_dimension_formula() {
    let t = Instant::now();
    let mut ok = true;
    for m in [5u32, 6] {
        for k in [0u32, 1, 2] {
            for l in [2u32, 3] {
                let computed = kernelcheck::kernel_dimension(m, k, l).unwrap();
                let expected = kernelcheck::kernel_dimension_formula(m, k, l);
                if computed != expected {
                    ok = false;
                }
            }
        }
    }
    let spot = kernelcheck::kernel_dimension(5, 1, 2).unwrap();
    ok &= spot == 70;
    assert!(criterion(
        "criterion-03 kernel dimension formula",
        t,
        ok,
        &format!("binomial count over the grid; (5,1,2) -> {spot}")
    ));
}

#[test]
fn criterion_04_kernel_decomposition() {
    let t = Instant::now();
    let mut ok = true;
    let mut sizes_511 = Vec::new();
    for (m, k, l) in [(5u32, 1u32, 1u32), (5, 1, 2), (5, 2, 2), (6, 1, 2)] {
        let r = kernelcheck::decomposition_basis(m, k, l).unwrap();
        ok &= r.passed();
        if (m, k, l) == (5, 1, 1) {
            sizes_511 = r.block_sizes();
        }
    }
    ok &= sizes_511 == vec![10, 14, 1];
    assert!(criterion(
        "criterion-04 kernel decomposition",
        t,
        ok,
        &format!("annihilation + independence + count; block sizes at (5,1,1): {sizes_511:?}")
    ));
}

#[test]
fn criterion_05_factorization() {
    let t = Instant::now();
    let mut ok = true;
    for m in [5u32, 6] {
        for k in [1u32, 2] {
            for l in [2u32, 3] {
                let r = suites::factorization(m, k, l).unwrap();
                ok &= r.passed();
            }
        }
    }
    assert!(criterion(
        "criterion-05 laplacian power factorization",
        t,
        ok,
        "A_2k D_k = Lap^(k+1) = D_k A_2k as exact matrices"
    ));
}

#[test]
fn criterion_06_fundamental_solution() {
    let t = Instant::now();
    let mut ok = true;
    for m in [5u32, 6, 7] {
        for k in [1u32, 2] {
            let r = suites::fundamental(m, k, 2024).unwrap();
            ok &= r.passed();
        }
        for k in [0u32, 1] {
            ok &= radial::fundamental_constant_check(m, k).is_ok();
        }
    }
    let (s1, _) = radial::laplace_power_constants(5, 2).unwrap();
    ok &= s1 == Coefficient::from_int(120);
    assert!(criterion(
        "criterion-06 fundamental solution identities",
        t,
        ok,
        &format!("alpha-expansion, critical vanishing, constants; spot (5,2) -> {s1}")
    ));
}

#[test]
fn criterion_07_reproducing_kernel() {
    let t = Instant::now();
    let mut ok = true;
    let mut ratios = Vec::new();
    for k in [1u32, 2, 3] {
        let r = suites::reproducing(5, k).unwrap();
        ok &= r.passed();
        ratios.push(
            harmonic::kernel_gegenbauer_ratio(5, k)
                .map(|c| c.to_string())
                .unwrap_or_else(|_| "not proportional".to_string()),
        );
    }
    assert!(criterion(
        "criterion-07 reproducing kernel",
        t,
        ok,
        &format!("full-basis reproduction at m=5, k<=3; proportionality ratios {ratios:?}")
    ));
}

#[test]
fn criterion_08_symbolic_identities() {
    let t = Instant::now();
    let r = suites::opalgebra_suite().unwrap();
    let ok = r.passed();
    assert!(criterion(
        "criterion-08 symbolic identities",
        t,
        ok,
        "intertwining, factorizations and enveloping-algebra relations, identically in (m, k)"
    ));
}

#[test]
fn criterion_09_rarita_schwinger_bridge() {
    let t = Instant::now();
    let mut ok = true;
    let b = rscheck::verify_block_identities(6, 1, 2, 2024).unwrap();
    ok &= b.passed();
    let d = rscheck::rs_kernel_decomposition(6, 1, 1).unwrap();
    ok &= d.passed() && d.expected_total == d.block_sizes().iter().sum::<usize>() as u64;
    let fischer = rscheck::rs_kernel_decomposition(6, 0, 1).unwrap();
    ok &= fischer.passed() && fischer.blocks.len() == 2;
    assert!(criterion(
        "criterion-09 first-order bridge",
        t,
        ok,
        &format!(
            "block identities at (6,1,2); four blocks {:?} summing to {}; k=0 refinement",
            d.block_sizes(),
            d.expected_total
        )
    ));
}

#[test]
fn criterion_10_degenerations() {
    let t = Instant::now();
    let mut ok = true;
    for m in [5u32, 6] {
        ok &= suites::degeneration(m).unwrap().passed();
    }
    assert!(criterion(
        "criterion-10 operator degenerations",
        t,
        ok,
        "k=0 is the Laplacian and k=1 the generalized Maxwell operator, coefficientwise"
    ));
}

#[test]
fn symbolic_table_spot_relations() {
    // The fitted table reproduces the classical relations.
    use opalgebra::{Gen10, MkPoly, OpExpr};
    let t = opalgebra::table10();
    let mut expected = OpExpr::word(vec![Gen10::EulerX], MkPoly::int(4));
    expected.add_word(vec![], MkPoly::m().scale(&num_rational::BigRational::from_integer(2.into())));
    assert_eq!(t.commutator(Gen10::LapX, Gen10::XNormSq), expected);
}
