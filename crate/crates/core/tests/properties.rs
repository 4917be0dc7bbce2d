use chiral_diode::diode::{working_area_single_res, working_area_two_res, TwoResOptions};
use chiral_diode::grid::Grid;
use chiral_diode::model::{make_params, PhotonIn};
use chiral_diode::single_photon::{chiral_coeffs, reflection, transmission};
use chiral_diode::two_photon::{RtConvention, TwoPhotonField};
use chiral_diode::verification::residual_draws;
use chiral_diode::{Direction, Error, ModelParams, TwoPhotonIn};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams> {
    (-1.0..1.0f64, 0.0..3.0f64, -15.0..15.0f64, 0.0..1.5f64, 0.0..1.5f64)
        .prop_filter("some coupling", |(.., g1, g2)| g1 + g2 > 1e-3)
        .prop_map(|(w, k, u, g1, g2)| make_params(w, k, u, g1, g2).unwrap())
}

fn lossless() -> impl Strategy<Value = ModelParams> {
    params().prop_map(|p| p.with_kappa(0.0).unwrap())
}

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::LeftIncident), Just(Direction::RightIncident)]
}

fn coeffs(p: &ModelParams, direction: Direction, omega_k: f64) -> (f64, f64) {
    let c = chiral_coeffs(p, PhotonIn { direction, omega_k });
    (c.transmittance, c.reflectance)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lossless_cavity_is_unitary(p in lossless(), d in direction(), w in -50.0..50.0f64) {
        let (t, r) = coeffs(&p, d, w);
        prop_assert!((t + r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dissipation_only_removes_flux(p in params(), d in direction(), w in -50.0..50.0f64) {
        let (t, r) = coeffs(&p, d, w);
        prop_assert!(t + r <= 1.0 + 1e-12);
        prop_assert!(t >= 0.0 && r >= 0.0);
    }

    #[test]
    fn reflection_ignores_direction(p in params(), w in -50.0..50.0f64) {
        let l = chiral_coeffs(&p, PhotonIn { direction: Direction::LeftIncident, omega_k: w });
        prop_assert_eq!(l.r, reflection(&p, w));
        let r = chiral_coeffs(&p, PhotonIn { direction: Direction::RightIncident, omega_k: w });
        prop_assert_eq!(l.r, r.r);
    }

    #[test]
    fn reciprocal_without_loss_or_asymmetry(p in params(), w in -20.0..20.0f64, lossless in any::<bool>()) {
        let p = if lossless {
            p.with_kappa(0.0).unwrap()
        } else {
            p.with_gamma1_fraction(0.5).unwrap()
        };
        let (tl, _) = coeffs(&p, Direction::LeftIncident, w);
        let (tr, _) = coeffs(&p, Direction::RightIncident, w);
        prop_assert!((tl - tr).abs() < 1e-12);
    }

    #[test]
    fn swapping_couplings_swaps_directions(p in params(), w in -20.0..20.0f64) {
        let q = p.swapped();
        for d in [Direction::LeftIncident, Direction::RightIncident] {
            let a = transmission(&p, w, d);
            let b = transmission(&q, w, d.reversed());
            prop_assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn far_detuned_photon_passes(p in params(), sign in prop_oneof![Just(-1.0), Just(1.0)], d in direction()) {
        let w = p.omega_a() + sign * 1e6 * p.gamma();
        prop_assert!((transmission(&p, w, d) - 1.0).norm() < 1e-5);
    }

    #[test]
    fn grid_text_round_trips(lo in -1e3..1e3f64, span in 0.0..1e3f64, n in 2usize..5000) {
        let g = Grid::new(lo, lo + span, n).unwrap();
        let back: Grid = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pair_amplitudes_are_exchange_symmetric(
        p in params(),
        d in direction(),
        k1 in -4.0..4.0f64,
        k2 in -4.0..4.0f64,
        x1 in -6.0..6.0f64,
        x2 in -6.0..6.0f64,
    ) {
        let f = TwoPhotonField::new(&p, &TwoPhotonIn::new(d, k1, k2).unwrap());
        prop_assert!((f.psi_tt(x1, x2) - f.psi_tt(x2, x1)).norm() < 1e-12);
        prop_assert!((f.psi_rr(x1, x2) - f.psi_rr(x2, x1)).norm() < 1e-12);
    }

    #[test]
    fn right_incidence_mirrors_left(
        p in params(),
        k1 in -4.0..4.0f64,
        k2 in -4.0..4.0f64,
        x1 in -6.0..6.0f64,
        x2 in -6.0..6.0f64,
    ) {
        let right = TwoPhotonField::new(&p, &TwoPhotonIn::new(Direction::RightIncident, k1, k2).unwrap());
        let left = TwoPhotonField::new(&p.swapped(), &TwoPhotonIn::new(Direction::LeftIncident, k1, k2).unwrap());
        prop_assert!((right.psi_tt(x1, x2) - left.psi_tt(-x1, -x2)).norm() < 1e-12);
        prop_assert!((right.psi_rr(x1, x2) - left.psi_rr(-x1, -x2)).norm() < 1e-12);
        let conv = RtConvention::Derived;
        prop_assert!((right.psi_rt_with(x1, x2, conv) - left.psi_rt_with(-x1, -x2, conv)).norm() < 1e-12);
    }

    #[test]
    fn linear_cavity_has_no_bound_part(
        p in params(),
        d in direction(),
        k1 in -4.0..4.0f64,
        k2 in -4.0..4.0f64,
        x1 in -6.0..6.0f64,
        x2 in -6.0..6.0f64,
    ) {
        let p = p.with_u(0.0).unwrap();
        let f = TwoPhotonField::new(&p, &TwoPhotonIn::new(d, k1, k2).unwrap());
        prop_assert_eq!(f.psi_tt_parts(x1, x2).1.norm(), 0.0);
        prop_assert_eq!(f.psi_rr_parts(x1, x2).1.norm(), 0.0);
    }

    #[test]
    fn bound_part_decays_at_half_linewidth(
        p in params(),
        k1 in -4.0..4.0f64,
        k2 in -4.0..4.0f64,
        x in 0.1..5.0f64,
        step in 0.0..3.0f64,
        xc in -3.0..3.0f64,
    ) {
        let f = TwoPhotonField::new(&p, &TwoPhotonIn::new(Direction::LeftIncident, k1, k2).unwrap());
        let near = f.psi_tt_parts(xc - x / 2.0, xc + x / 2.0).1.norm();
        let far = f.psi_tt_parts(xc - (x + step) / 2.0, xc + (x + step) / 2.0).1.norm();
        let want = near * (-p.half_linewidth() * step).exp();
        prop_assert!((far - want).abs() <= 1e-12 * near.max(1e-300));
    }

    #[test]
    fn residual_draws_are_reproducible(seed in any::<u64>()) {
        prop_assert_eq!(residual_draws(3, seed), residual_draws(3, seed));
    }

    #[test]
    fn invalid_rates_name_the_field(bad in -10.0..-1e-9f64, which in 0usize..3) {
        let (args, field) = match which {
            0 => ((0.0, bad, 1.0, 1.0, 0.0), "kappa"),
            1 => ((0.0, 1.0, 1.0, bad, 1.0), "gamma1"),
            _ => ((0.0, 1.0, 1.0, 1.0, bad), "gamma2"),
        };
        match make_params(args.0, args.1, args.2, args.3, args.4) {
            Err(Error::InvalidParameter { field: f, .. }) => prop_assert_eq!(f, field),
            other => prop_assert!(false, "expected rejection, got {:?}", other),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_resonance_area_grows_with_gamma1(kappa in 0.0..3.0f64, gamma in 0.5..2.0f64) {
        let p = make_params(0.0, kappa, 10.0, gamma, 0.0).unwrap();
        let curve = working_area_single_res(&p, &Grid::new(0.0, 1.0, 201).unwrap());
        // rising branch only: past γ1 = (κ+Γ)/2 the curve comes back down
        let edge = 0.5 * (kappa + gamma) / gamma;
        let pts: Vec<_> = curve.finite().filter(|q| q.gamma1_over_gamma < edge).collect();
        prop_assert!(pts.len() > 2 || edge > 1.0);
        for w in pts.windows(2) {
            prop_assert!(w[0].gamma1_over_gamma < w[1].gamma1_over_gamma);
            prop_assert!(w[0].gamma_abs_x < w[1].gamma_abs_x, "{:?}", w);
        }
    }

    #[test]
    fn raising_the_ceiling_keeps_points(kappa in 0.0..1.0f64, u in 2.0..15.0f64, ceiling in 2.0..15.0f64) {
        let p = make_params(0.0, kappa, u, 1.0, 0.0).unwrap();
        let low = working_area_two_res(&p, &TwoResOptions { ceiling, ..TwoResOptions::default() });
        let high = working_area_two_res(&p, &TwoResOptions { ceiling: ceiling + 5.0, ..TwoResOptions::default() });
        for a in low.finite() {
            prop_assert!(
                high.finite().any(|b| b.gamma1_over_gamma == a.gamma1_over_gamma && b.gamma_abs_x == a.gamma_abs_x),
                "{:?} lost", a
            );
        }
    }
}
