use gfp_core::field::ScalarField;
use gfp_core::interaction::{perimeter, seminorm_sq_direct};
use gfp_core::special::gamma_fn;
use gfp_core::spectral::{apply_frac_ou, expand, ms_limit, spectral_seminorm_sq, HermiteExpansion};
use gfp_core::{InteractionConfig, Region};

fn half_line() -> Region {
    Region::interval(0.0, f64::INFINITY)
}

#[test]
fn hermite_modes_spectral_equals_direct() {
    let cfg = InteractionConfig::default();
    for alpha in [1usize, 2] {
        let u = ScalarField::hermite(vec![alpha]).unwrap();
        let e = expand(&u, alpha + 4, 64).unwrap();
        for s in [0.25, 0.5] {
            let sp = spectral_seminorm_sq(&e, s).unwrap();
            let direct = seminorm_sq_direct(&u, s, &cfg).unwrap();
            assert!(
                (sp.value - direct.value).abs() <= direct.error + 1e-10 * sp.value,
                "H{alpha} s={s}: spectral {} direct {} ± {}",
                sp.value,
                direct.value,
                direct.error
            );
        }
    }
}

#[test]
fn first_hermite_mode_scaled_seminorm() {
    let cfg = InteractionConfig::default();
    let u = ScalarField::hermite(vec![1]).unwrap();
    let direct = seminorm_sq_direct(&u, 0.25, &cfg).unwrap();
    let target = 2.0 * gamma_fn(0.75).unwrap();
    assert!((0.25 * direct.value - target).abs() <= 0.02 * target);
}

#[test]
fn half_line_indicator_spectral_vs_direct() {
    let cfg = InteractionConfig::default();
    let s = 0.25;
    let u = ScalarField::indicator(&half_line());
    let direct = seminorm_sq_direct(&u, s, &cfg).unwrap();
    let sp = spectral_seminorm_sq(&expand(&u, 100_000, 0).unwrap(), s).unwrap();
    // The reported truncation term is a lower estimate of the missing modes.
    assert!(sp.value + sp.truncation <= direct.value + direct.error);
    // Jump discontinuities give c_n² ~ n^{−3/2}, for which the missing part is
    // truncation/(1 − 2s) to leading order.
    let corrected = sp.value + sp.truncation / (1.0 - 2.0 * s);
    assert!(
        (corrected - direct.value).abs() <= 1e-3 * direct.value,
        "{corrected} vs {}",
        direct.value
    );
}

#[test]
fn indicator_seminorm_is_twice_the_perimeter() {
    let cfg = InteractionConfig::default();
    let e = half_line();
    let u = ScalarField::indicator(&e);
    let direct = seminorm_sq_direct(&u, 0.25, &cfg).unwrap();
    let p = perimeter(&e, &Region::full(1), 0.5, &cfg).unwrap();
    assert!(
        (direct.value - 2.0 * p.total.value).abs()
            <= direct.error + 2.0 * p.total.error + 1e-9 * direct.value
    );
}

fn finite_expansion(coeffs: &[f64]) -> HermiteExpansion {
    let entries = coeffs
        .iter()
        .enumerate()
        .map(|(n, &c)| (vec![n], c))
        .collect();
    HermiteExpansion {
        dimension: 1,
        degree: coeffs.len() - 1,
        entries,
        tail_bound: 0.0,
    }
}

#[test]
fn scaled_seminorm_approaches_small_order_limit() {
    for coeffs in [
        vec![0.0, 1.0],
        vec![0.3, 0.5, -0.2, 0.1],
        vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.7],
    ] {
        let e = finite_expansion(&coeffs);
        let limit = ms_limit(&e);
        let mut prev_gap = f64::INFINITY;
        for k in 1..=10 {
            let s = 0.5f64.powi(k);
            let gap = (s * spectral_seminorm_sq(&e, s).unwrap().value - limit).abs();
            assert!(gap <= prev_gap * (1.0 + 1e-12));
            prev_gap = gap;
        }
        assert!(prev_gap <= 0.01 * limit);
    }
}

#[test]
fn pairing_with_fractional_operator() {
    let e = finite_expansion(&[0.4, -1.0, 0.25, 0.0, 0.3]);
    for s in [0.1, 0.5, 0.9] {
        let applied = apply_frac_ou(&e, s).unwrap();
        let pairing = 2.0 * s * e.inner_product(&applied).unwrap();
        let direct = s * spectral_seminorm_sq(&e, s).unwrap().value;
        assert!((pairing - direct).abs() <= 1e-12 * direct);
    }
}

#[test]
fn indicator_partial_norms_are_monotone_and_bounded() {
    let u = ScalarField::indicator(&Region::interval(-0.3, 1.2));
    let e = expand(&u, 5000, 0).unwrap();
    let norm_sq = e.norm_sq();
    let partial = e.partial_norms();
    assert!(partial.windows(2).all(|w| w[1] >= w[0]));
    assert!(*partial.last().unwrap() <= norm_sq * (1.0 + 1e-12));
}
