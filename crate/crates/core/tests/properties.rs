use nsbounds::forces::{CutoffProfile, q_norm_bounds};
use nsbounds::geometry::{Branch, ChannelGeometry};
use nsbounds::inflow::{InflowDatum, DEFAULT_COMPAT_TOL};
use nsbounds::report::{dec17, CertificateReport, InflowSource};
use nsbounds::sobolev::EmbeddingBounds;
use nsbounds::wellposedness::{certify, threshold_explicit, threshold_general, FluidParams, Status};
use proptest::prelude::*;

fn geometry() -> impl Strategy<Value = ChannelGeometry> {
    (0.5f64..3.0, 0.05f64..0.98, 0.05f64..=1.0, 0.05f64..=1.0, 1e-3f64..=1.0).prop_map(|(l, fa, fb, fc, fv)| {
        let a = l * fa;
        let b = a * fb;
        let c = b * fc;
        ChannelGeometry::new(l, a, b, c, 8.0 * a * b * c * fv).unwrap()
    })
}

proptest! {
    #[test]
    fn bogovskii_constants_positive(g in geometry()) {
        let (sigma, gamma) = g.sigma_gamma();
        prop_assert!(sigma > 0.0 && gamma > 0.0 && g.bogovskii_m() > 0.0);
    }

    #[test]
    fn conda_implies_cube_root_branch(g in geometry()) {
        if g.conda() {
            prop_assert_eq!(g.min_branch().branch, Branch::CubeRoot);
        }
    }

    #[test]
    fn embedding_bounds_are_positive(g in geometry()) {
        let e = EmbeddingBounds::compute(&g).unwrap();
        for v in [e.s2_lb, e.s3_lb, e.s6_lb, e.j2_lb, e.j6_lb] {
            prop_assert!(v > 0.0 && v.is_finite());
        }
    }

    #[test]
    fn threshold_forms_agree(g in geometry(), log_eta in -2.0f64..2.0) {
        let eta = 10f64.powf(log_eta);
        let e = EmbeddingBounds::compute(&g).unwrap();
        let (x, y) = (threshold_explicit(&g, eta), threshold_general(e.s3_lb, e.j6_lb, eta));
        prop_assert!((x - y).abs() <= 1e-12 * y);
    }

    #[test]
    fn certified_means_contraction(g in geometry(), log_eta in -2.0f64..2.0, u in 0.0f64..=1.0) {
        let f = FluidParams::new(10f64.powf(log_eta)).unwrap();
        let unit = certify(&g, &f, &InflowDatum::analytic(1.0).unwrap(), DEFAULT_COMPAT_TOL).unwrap();
        let amp = u * unit.threshold / unit.phi;
        let c = certify(&g, &f, &InflowDatum::analytic(amp).unwrap(), DEFAULT_COMPAT_TOL).unwrap();
        if c.status == Status::Certified {
            prop_assert!(c.beta < 1.0);
            prop_assert!(c.grad_bound_sharp.is_some());
        }
    }

    #[test]
    fn phi_is_linear_in_amplitude(g in geometry(), amp in 0.0f64..10.0) {
        let f = FluidParams::new(1.0).unwrap();
        let one = certify(&g, &f, &InflowDatum::analytic(1.0).unwrap(), DEFAULT_COMPAT_TOL).unwrap();
        let c = certify(&g, &f, &InflowDatum::analytic(amp).unwrap(), DEFAULT_COMPAT_TOL).unwrap();
        prop_assert!((c.phi - amp * one.phi).abs() <= 1e-14 * one.phi * (1.0 + amp));
        prop_assert_eq!(c.threshold, one.threshold);
    }

    #[test]
    fn q_bounds_finite_and_positive(g in geometry()) {
        let q = q_norm_bounds(&g);
        for v in [q.q1_l3, q.q3_l3, q.q1_h1, q.q3_h1] {
            prop_assert!(v > 0.0 && v.is_finite());
        }
    }

    #[test]
    fn cutoff_range_and_parity(eps in 1e-3f64..10.0, t in -20.0f64..20.0) {
        let p = CutoffProfile::new(eps).unwrap();
        let (v, w) = (p.eval(t), p.eval(-t));
        prop_assert!((0.0..=1.0).contains(&v.value));
        prop_assert_eq!(v.value, w.value);
        prop_assert_eq!(v.d1, -w.d1);
        prop_assert!(v.d1.abs() <= p.sup_d1() * (1.0 + 1e-12));
        prop_assert!(v.d2.abs() <= p.sup_d2() * (1.0 + 1e-12));
    }

    #[test]
    fn dec17_roundtrips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let s = dec17::format(x);
        prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn certificate_json_roundtrip(g in geometry(), log_eta in -1.0f64..1.0, amp in 0.0f64..1e-3) {
        let f = FluidParams::new(10f64.powf(log_eta)).unwrap();
        let r = CertificateReport::evaluate(&g, &f, &InflowSource::Analytic(amp), DEFAULT_COMPAT_TOL).unwrap();
        let json = r.to_json();
        let back = CertificateReport::from_json(&json).unwrap();
        prop_assert_eq!(back.reevaluate().unwrap().to_json(), json);
    }
}
