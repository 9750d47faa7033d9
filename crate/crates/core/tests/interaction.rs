mod common;

use gfp_core::interaction::{
    interaction, interaction_with, j_lambda, perimeter, BaseMeasure, InteractionMethod, PairKernel,
};
use gfp_core::measure::SetExpr;
use gfp_core::{InteractionConfig, Region};

const INF: f64 = f64::INFINITY;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn separated_intervals_match_trapezoid() {
    let cfg = InteractionConfig::default();
    let est = interaction(
        &Region::interval(0.0, 1.0),
        &Region::interval(2.0, 3.0),
        0.5,
        &cfg,
    )
    .unwrap();
    assert_eq!(est.method, InteractionMethod::GradedQuadrature1d);
    let (fine, coarse) = common::interaction_trapezoid(0.5, (0.0, 1.0), (2.0, 3.0), 2000);
    // Trapezoid error is O(h²): the halved grid overestimates it fourfold.
    let oracle_err = (fine - coarse).abs() / 3.0;
    let combined = est.error + oracle_err;
    assert!(
        (est.value - fine).abs() <= 3.0 * combined,
        "graded {} ± {:e}, trapezoid {fine} ± {oracle_err:e}",
        est.value,
        est.error
    );
}

#[test]
fn half_line_interaction_is_symmetric_and_equals_perimeter() {
    let cfg = InteractionConfig::default();
    let a = Region::interval(0.0, INF);
    let b = Region::interval(-INF, 0.0);
    let ab = interaction(&a, &b, 0.5, &cfg).unwrap();
    let ba = interaction(&b, &a, 0.5, &cfg).unwrap();
    assert!(close(ab.value, ba.value, ab.error + ba.error));
    let p = perimeter(&a, &Region::full(1), 0.5, &cfg).unwrap();
    assert!(close(p.total.value, ab.value, p.total.error + ab.error));
    assert_eq!(p.nonlocal_out.value, 0.0);
    assert_eq!(p.nonlocal_in.value, 0.0);
}

#[test]
fn monotone_in_operands() {
    let cfg = InteractionConfig::default();
    let big = interaction(
        &Region::interval(0.0, 1.0),
        &Region::interval(-1.0, 0.0),
        0.5,
        &cfg,
    )
    .unwrap();
    let small = interaction(
        &Region::interval(0.2, 0.8),
        &Region::interval(-0.5, -0.1),
        0.5,
        &cfg,
    )
    .unwrap();
    assert!(small.value <= big.value + small.error + big.error);
}

#[test]
fn perimeter_parts_and_complement_symmetry() {
    let cfg = InteractionConfig::default();
    let e = Region::interval(0.0, INF);
    let omega = Region::interval(-1.0, 1.0);
    let p = perimeter(&e, &omega, 0.5, &cfg).unwrap();
    let sum = p.local.value + p.nonlocal_out.value + p.nonlocal_in.value;
    assert!(close(p.total.value, sum, 1e-12 * sum));
    let q = perimeter(&e.complement(), &omega, 0.5, &cfg).unwrap();
    assert!(close(
        p.total.value,
        q.total.value,
        p.total.error + q.total.error
    ));
}

#[test]
fn set_inside_omega_has_global_perimeter() {
    let cfg = InteractionConfig::default();
    let e = Region::interval(0.0, 1.0);
    let local = perimeter(&e, &Region::interval(-1.0, 2.0), 0.5, &cfg).unwrap();
    assert_eq!(local.nonlocal_in.value, 0.0);
    let global = perimeter(&e, &Region::full(1), 0.5, &cfg).unwrap();
    assert!(close(
        local.total.value,
        global.total.value,
        local.total.error + global.total.error
    ));
}

#[test]
fn full_space_has_no_perimeter() {
    let cfg = InteractionConfig::default();
    for p in [
        perimeter(&Region::full(1), &Region::interval(-1.0, 1.0), 0.5, &cfg).unwrap(),
        j_lambda(&Region::full(1), &Region::full(1), 0.5, &cfg).unwrap(),
    ] {
        assert_eq!(p.total.value, 0.0);
    }
}

#[test]
fn kernel_dominates_its_lower_bound_on_identical_nodes() {
    let cfg = InteractionConfig::default();
    for s in [0.1, 0.5, 0.9] {
        for (a, b) in [
            ((0.0, 1.0), (-1.0, 0.0)),
            ((0.0, INF), (-INF, 0.0)),
            ((0.5, 2.0), (-3.0, -0.5)),
        ] {
            let a = Region::interval(a.0, a.1);
            let b = Region::interval(b.0, b.1);
            let k = interaction_with(
                &a,
                &b,
                PairKernel::Subordinated(s),
                BaseMeasure::Gaussian,
                &cfg,
            )
            .unwrap();
            let l = interaction_with(
                &a,
                &b,
                PairKernel::LowerBound(s),
                BaseMeasure::Gaussian,
                &cfg,
            )
            .unwrap();
            assert_eq!(k.samples_or_cells, l.samples_or_cells);
            assert!(
                k.value + k.error >= l.value - l.error,
                "s={s}: {} < {}",
                k.value,
                l.value
            );
        }
    }
}

#[test]
fn j_lambda_half_line_is_finite_and_positive() {
    let cfg = InteractionConfig::default();
    let p = j_lambda(&Region::interval(0.0, INF), &Region::full(1), 0.5, &cfg).unwrap();
    assert!(p.total.value.is_finite() && p.total.value > 0.0);
    assert!(p.total.error < 1e-3 * p.total.value);
}

#[test]
fn overlapping_operands_are_rejected() {
    let cfg = InteractionConfig::default();
    assert!(interaction(
        &Region::interval(0.0, 2.0),
        &Region::interval(1.0, 3.0),
        0.5,
        &cfg
    )
    .is_err());
}

#[test]
fn monte_carlo_slabs_match_one_dimensional_quadrature() {
    // The Mehler kernel factorises over coordinates and integrates to one in
    // each, so slabs {x₁ ∈ I} in the plane interact exactly like I on the line.
    let cfg = InteractionConfig {
        mc_rel_tol: 5e-3,
        ..InteractionConfig::default()
    };
    let slab =
        |lo: f64, hi: f64| Region::new(2, SetExpr::cuboid(vec![lo, -INF], vec![hi, INF])).unwrap();
    let s = 0.25;
    let mc = interaction(&slab(0.5, INF), &slab(-INF, -0.5), s, &cfg).unwrap();
    assert_eq!(mc.method, InteractionMethod::MonteCarlo);
    let exact = interaction(
        &Region::interval(0.5, INF),
        &Region::interval(-INF, -0.5),
        s,
        &cfg,
    )
    .unwrap();
    assert!(
        (mc.value - exact.value).abs() <= 4.0 * mc.error + exact.error,
        "mc {} ± {}, quadrature {}",
        mc.value,
        mc.error,
        exact.value
    );
}
