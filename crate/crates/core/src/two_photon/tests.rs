use super::*;
use crate::model::make_params;

fn left(p: &ModelParams, case: Resonance) -> TwoPhotonField {
    TwoPhotonField::new(p, &TwoPhotonIn::at_resonance(p, Direction::LeftIncident, case))
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn d_at_small_dissipation() {
    let p = make_params(0.0, 0.01, 10.0, 1.0, 0.0).unwrap();
    let c = bound_coeffs(&p, &TwoPhotonIn::at_resonance(&p, Direction::LeftIncident, Resonance::SinglePhoton));
    assert!(close(c.d, Complex64::new(-0.88033146, -0.04445674), 1e-8), "{:?}", c.d);
}

#[test]
fn d_modulus_at_unit_dissipation() {
    let p = make_params(0.0, 1.0, 10.0, 1.0, 0.0).unwrap();
    let c = bound_coeffs(&p, &TwoPhotonIn::at_resonance(&p, Direction::LeftIncident, Resonance::SinglePhoton));
    let want = 100.0 / (2.0 * PI * PI * 101.0);
    assert!((c.d.norm_sqr() - want).abs() < 1e-15);
}

#[test]
fn linear_cavity_has_no_bound_state() {
    let p = make_params(0.2, 0.3, 0.0, 0.6, 0.7).unwrap();
    let input = TwoPhotonIn::new(Direction::LeftIncident, 0.5, -0.4).unwrap();
    let c = bound_coeffs(&p, &input);
    assert_eq!(c.chi.norm(), 0.0);
    assert_eq!(c.d.norm(), 0.0);
}

#[test]
fn regression_value_on_diagonal() {
    let p = make_params(0.0, 0.01, 10.0, 1.0, 0.0).unwrap();
    let f = left(&p, Resonance::SinglePhoton);
    for x in [-3.0, 0.0, 0.7] {
        let v = f.psi_tt(x, x).norm_sqr();
        assert!((v - 0.4429761894).abs() < 1e-9, "{v}");
    }
}

#[test]
fn ideal_point_is_pure_bound_state() {
    let p = make_params(0.0, 1.0, 10.0, 1.0, 0.0).unwrap();
    let f = left(&p, Resonance::SinglePhoton);
    let v = f.psi_tt(0.4, 0.4).norm_sqr();
    assert!((v - f.coeffs().d.norm_sqr()).abs() < 1e-16);
}

#[test]
fn uncoupled_two_photon_resonance_stripes() {
    let p = make_params(0.0, 1.0, 10.0, 0.0, 1.0).unwrap();
    let f = left(&p, Resonance::TwoPhoton);
    for x in [0.0, 0.1, 0.37, 1.3] {
        let v = f.psi_tt(0.2, 0.2 + x).norm_sqr();
        let want = (10.0 * x).cos().powi(2) / (2.0 * PI * PI);
        assert!((v - want).abs() < 1e-14);
    }
}

#[test]
fn reflection_channels_vanish_without_counter_coupling() {
    let p = make_params(0.0, 0.5, 10.0, 1.0, 0.0).unwrap();
    let f = left(&p, Resonance::SinglePhoton);
    for (x1, x2) in [(0.1, -0.3), (1.0, 2.0), (-0.5, -0.5)] {
        assert_eq!(f.psi_rr(x1, x2).norm(), 0.0);
        assert_eq!(f.psi_rt(x1, x2).norm(), 0.0);
    }
    let p = make_params(0.0, 0.5, 0.0, 1.0, 0.0).unwrap();
    assert_eq!(left(&p, Resonance::SinglePhoton).psi_rr(0.3, 0.1).norm(), 0.0);
}

#[test]
fn total_reflection_of_pairs() {
    let p = make_params(0.0, 0.0, 0.0, 0.5, 0.5).unwrap();
    let f = left(&p, Resonance::SinglePhoton);
    for (x1, x2) in [(0.1, -0.3), (1.0, 2.0)] {
        let want = plane_pair(0.0, 0.0, -x1, -x2).norm();
        assert!((f.psi_rr(x1, x2).norm() - want).abs() < 1e-15);
        assert!(f.psi_tt(x1, x2).norm() < 1e-15);
    }
}

#[test]
fn psi_rt_is_plane_only_without_kerr() {
    let p = make_params(0.0, 0.5, 0.0, 0.7, 0.3).unwrap();
    let f = left(&p, Resonance::SinglePhoton);
    let (_, bound) = f.psi_rt_parts(0.3, -0.2, RtConvention::Derived);
    assert_eq!(bound.norm(), 0.0);
}

#[test]
fn exchange_symmetry() {
    let p = make_params(0.1, 0.4, 3.0, 0.65, 0.35).unwrap();
    for dir in [Direction::LeftIncident, Direction::RightIncident] {
        let f = TwoPhotonField::new(&p, &TwoPhotonIn::new(dir, 0.3, -0.8).unwrap());
        for (x1, x2) in [(0.1, 0.7), (-1.2, 0.4), (2.0, -3.0)] {
            assert!(close(f.psi_tt(x1, x2), f.psi_tt(x2, x1), 1e-15));
            assert!(close(f.psi_rr(x1, x2), f.psi_rr(x2, x1), 1e-15));
        }
    }
}

#[test]
fn asymptote_matches_full_density() {
    let p = make_params(0.0, 1.0, 10.0, 1.0, 0.0).unwrap();
    for case in [Resonance::SinglePhoton, Resonance::TwoPhoton] {
        let a = bound_asymptote(&p, case).unwrap();
        let f = left(&p, case);
        for x in [0.0, 0.5, 3.0, 10.0] {
            let v = f.psi_tt(0.0, x).norm_sqr();
            let want = a.amplitude_sq * (-a.decay_rate * x).exp();
            assert!((v - want).abs() <= 1e-12 * want.max(1e-300), "{case:?} {x}: {v} vs {want}");
        }
    }
    let single = bound_asymptote(&p, Resonance::SinglePhoton).unwrap().amplitude_sq;
    assert!((single - 3200.0 / (PI * PI * 16.0 * 404.0)).abs() < 1e-15);
    let two = bound_asymptote(&p, Resonance::TwoPhoton).unwrap().amplitude_sq;
    assert!((two - 3200.0 / (PI * PI * 16.0 * 1604.0)).abs() < 1e-15);
    assert!(bound_asymptote(&p.with_u(0.0).unwrap(), Resonance::SinglePhoton).unwrap().amplitude_sq == 0.0);
}

#[test]
fn asymptote_rejects_partial_coupling() {
    let p = make_params(0.0, 1.0, 10.0, 0.9, 0.1).unwrap();
    assert!(matches!(bound_asymptote(&p, Resonance::SinglePhoton), Err(Error::Domain(_))));
}

#[test]
fn bound_part_decays_at_half_linewidth() {
    let p = make_params(0.0, 0.3, 4.0, 0.8, 0.2).unwrap();
    let f = left(&p, Resonance::SinglePhoton);
    let c = p.kappa() + p.gamma();
    let (_, b0) = f.psi_tt_parts(0.0, 1.0);
    let (_, b1) = f.psi_tt_parts(0.0, 1.75);
    let ratio = b1.norm() / b0.norm();
    assert!((ratio - (-c * 0.75 / 2.0).exp()).abs() < 1e-14);
}

#[test]
fn map_is_symmetric() {
    let p = make_params(0.0, 1.0, 10.0, 0.75, 0.25).unwrap();
    let f = left(&p, Resonance::SinglePhoton);
    let m = map_two_photon(&f, &"-3:3:31".parse().unwrap(), MapChannels::All);
    assert_eq!(m.tt.len(), 31 * 31);
    assert_eq!(m.rr.as_ref().unwrap().len(), 31 * 31);
    for i in 0..31 {
        for j in 0..31 {
            assert!((m.tt_at(i, j) - m.tt_at(j, i)).abs() < 1e-15);
        }
    }
}

/// Chiral channels assembled from the even/odd amplitudes. Valid in the
/// outgoing region: transmitted photons at x > 0, reflected ones at x < 0.
struct Transformed {
    e: EvenOdd,
    g1: f64,
    g2: f64,
}

impl Transformed {
    fn new(p: &ModelParams, input: &TwoPhotonIn) -> Self {
        Self {
            e: EvenOdd::new(p, input),
            g1: p.gamma1(),
            g2: p.gamma2(),
        }
    }

    fn g(&self) -> f64 {
        self.g1 + self.g2
    }

    fn tt(&self, x1: f64, x2: f64) -> Complex64 {
        let (g1, g2, g) = (self.g1, self.g2, self.g());
        let e = &self.e;
        (g1 * g1 * e.phi_ee(x1, x2).value
            + g2 * g2 * e.phi_oo(x1, x2).value
            + g1 * g2 * (e.phi_oe(x1, x2).value + e.phi_oe(x2, x1).value))
            / (g * g)
    }

    fn rr(&self, y1: f64, y2: f64) -> Complex64 {
        let (x1, x2) = (-y1, -y2);
        let e = &self.e;
        self.g1 * self.g2
            * (e.phi_ee(x1, x2).value + e.phi_oo(x1, x2).value - e.phi_oe(x1, x2).value - e.phi_oe(x2, x1).value)
            / (self.g() * self.g())
    }

    fn rt(&self, x1: f64, y2: f64) -> Complex64 {
        let (g1, g2, g) = (self.g1, self.g2, self.g());
        let x2 = -y2;
        let e = &self.e;
        (2.0 * g1 * g2).sqrt()
            * (g1 * e.phi_ee(x1, x2).value - g2 * e.phi_oo(x1, x2).value + g2 * e.phi_oe(x1, x2).value
                - g1 * e.phi_oe(x2, x1).value)
            / (g * g)
    }
}

#[test]
fn closed_forms_match_even_odd_transform() {
    let p = make_params(0.2, 0.45, 7.0, 0.7, 0.3).unwrap();
    let input = TwoPhotonIn::new(Direction::LeftIncident, 0.9, -0.35).unwrap();
    let f = TwoPhotonField::new(&p, &input);
    let tr = Transformed::new(&p, &input);
    for (x1, x2) in [(0.3, 0.9), (1.7, 0.2), (0.05, 4.0), (2.5, 2.6)] {
        assert!(close(f.psi_tt(x1, x2), tr.tt(x1, x2), 1e-14));
        assert!(close(f.psi_rr(-x1, -x2), tr.rr(-x1, -x2), 1e-14));
        assert!(close(f.psi_rt(x1, -x2), tr.rt(x1, -x2), 1e-14), "{x1},{x2}");
    }
}

#[test]
fn printed_rt_normalisation_disagrees_with_transform() {
    let p = make_params(0.0, 0.45, 0.0, 0.7, 0.3).unwrap();
    let input = TwoPhotonIn::new(Direction::LeftIncident, 0.9, -0.35).unwrap();
    let f = TwoPhotonField::new(&p, &input);
    let tr = Transformed::new(&p, &input);
    let printed = f.psi_rt_with(0.3, -0.9, RtConvention::Printed);
    assert!((printed - tr.rt(0.3, -0.9)).norm() > 1e-3);
}

#[test]
fn right_incidence_mirrors_swapped_left_incidence() {
    let p = make_params(0.1, 0.45, 7.0, 0.7, 0.3).unwrap();
    let right = TwoPhotonField::new(&p, &TwoPhotonIn::new(Direction::RightIncident, 0.9, -0.35).unwrap());
    let q = p.swapped();
    let left = TwoPhotonField::new(&q, &TwoPhotonIn::new(Direction::LeftIncident, 0.9, -0.35).unwrap());
    for (x1, x2) in [(0.3, 0.9), (-1.7, 0.2), (0.05, -4.0)] {
        assert!(close(right.psi_tt(x1, x2), left.psi_tt(-x1, -x2), 1e-15));
        assert!(close(right.psi_rr(x1, x2), left.psi_rr(-x1, -x2), 1e-15));
        for conv in [RtConvention::Derived, RtConvention::Printed] {
            assert!(close(right.psi_rt_with(x1, x2, conv), left.psi_rt_with(-x1, -x2, conv), 1e-15));
        }
    }
}

#[test]
fn even_odd_record_examples() {
    let p = make_params(0.0, 0.4, 0.0, 0.6, 0.4).unwrap();
    let input = TwoPhotonIn::new(Direction::LeftIncident, 0.3, -0.2).unwrap();
    let (x1, x2) = (0.7, -0.4);
    let a = even_odd_amplitudes(&p, &input, x1, x2);
    assert!(close(a.phi_oo, plane_pair(-0.2, 0.3, x1, x2), 1e-16));

    let e = |k: f64, t: Complex64, x: f64| {
        let w = if x > 0.0 { t } else { Complex64::new(1.0, 0.0) };
        w * Complex64::from_polar(1.0, k * x) / (2.0 * PI).sqrt()
    };
    let t1 = single_photon::even_mode_t(&p, -0.2);
    let t2 = single_photon::even_mode_t(&p, 0.3);
    let want = (e(-0.2, t1, x1) * e(0.3, t2, x2) + e(-0.2, t1, x2) * e(0.3, t2, x1)) / SQRT_2;
    assert!(close(a.phi_ee, want, 1e-16));

    let q = p.with_u(5.0).unwrap();
    let eo = EvenOdd::new(&q, &input);
    for x in [0.3, -1.1, 2.0] {
        let jump = eo.phi_ee(Lim::above(0.0), x).value - eo.phi_ee(Lim::below(0.0), x).value;
        let want = -I * (0.5 * q.gamma()).sqrt() * eo.phi_ae(x).value;
        assert!(close(jump, want, 1e-15));
    }
}

