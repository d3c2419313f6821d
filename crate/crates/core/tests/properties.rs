use proptest::prelude::*;
use twocenter_core::geometry::{distances, metric, s_matrix, to_cartesian, to_elliptic};
use twocenter_core::groundstates::norm_bosonic_i;
use twocenter_core::specfun::{bessel_i, bessel_k, elliptic_e, elliptic_f, BesselOrder, Parity};
use twocenter_core::spectrum::{
    ionization_threshold, qes_energy, razavy_params, xi_factor, QesBranch, XiCoeffs,
};
use twocenter_core::{Branch, CartesianPoint, EllipticPoint, GroundState, GroundStateKind, ModelParams, SectorSign};

fn branch() -> impl Strategy<Value = Branch> {
    prop_oneof![Just(Branch::Plus), Just(Branch::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn elliptic_round_trip(u in 1.001f64..20.0, v in -0.999f64..0.999, b in branch()) {
        let e = EllipticPoint::new(u, v, b);
        let p = to_cartesian(e);
        let back = to_elliptic(p);
        prop_assert!((back.u - u).abs() <= 1e-12 * u);
        prop_assert!((back.v - v).abs() <= 1e-12 * u);
        prop_assert_eq!(back.branch, b);
        let (r1, r2) = distances(p);
        prop_assert!((r1 * r2 - e.focal_product()).abs() <= 1e-12 * u * u);
    }

    #[test]
    fn metric_and_s_identities(u in 1.001f64..20.0, v in -0.999f64..0.999, b in branch()) {
        let e = EllipticPoint::new(u, v, b);
        let m = metric(e).unwrap();
        prop_assert!((m.e_u1 * m.e_u1 * m.g_uu - 1.0).abs() < 1e-12);
        prop_assert!((m.e_v2 * m.e_v2 * m.g_vv - 1.0).abs() < 1e-12);
        prop_assert!((m.jacobian_weight / (m.g_uu * m.g_vv).sqrt() - 1.0).abs() < 1e-12);
        let s = s_matrix(e).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let sq: f64 = (0..4).map(|k| s[i][k] * s[k][j]).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!((sq - id).abs() < 1e-13);
                prop_assert_eq!(s[i][j], s[j][i]);
            }
        }
    }

    #[test]
    fn bessel_wronskian(x in 0.1f64..30.0) {
        let i0 = bessel_i(BesselOrder::Zero, x).unwrap();
        let i1 = bessel_i(BesselOrder::One, x).unwrap();
        let k0 = bessel_k(BesselOrder::Zero, x).unwrap();
        let k1 = bessel_k(BesselOrder::One, x).unwrap();
        prop_assert!(((i0 * k1 + i1 * k0) * x - 1.0).abs() < 1e-11);
    }

    #[test]
    fn legendre_relation(m in 0.01f64..0.99) {
        let h = std::f64::consts::FRAC_PI_2;
        let (k, kc) = (elliptic_f(h, m).unwrap(), elliptic_f(h, 1.0 - m).unwrap());
        let (e, ec) = (elliptic_e(h, m).unwrap(), elliptic_e(h, 1.0 - m).unwrap());
        prop_assert!((e * kc + ec * k - k * kc - h).abs() < 1e-10);
    }

    #[test]
    fn qes_levels_have_integer_m(n in 0u32..=10, delta in 0.05f64..=1.0, hbar in 0.1f64..10.0) {
        let p = ModelParams::type_i(hbar, delta).unwrap();
        let e = qes_energy(QesBranch::RazavyU, n, &p);
        for sign in [SectorSign::Plus, SectorSign::Minus] {
            let r = razavy_params(e, 0.0, sign, &p).unwrap();
            prop_assert!((r.m - f64::from(n + 1)).abs() < 1e-12);
        }
    }

    #[test]
    fn energies_approach_threshold(delta in 0.05f64..=1.0, hbar in 0.1f64..10.0) {
        let p = ModelParams::type_i(hbar, delta).unwrap();
        let limit = ionization_threshold(&p);
        let e: Vec<f64> = (0..=50).map(|n| qes_energy(QesBranch::RazavyU, n, &p)).collect();
        prop_assert!(e.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(e[50] < limit);
        prop_assert!((limit - e[50]) / limit < 1e-3);
    }

    #[test]
    fn xi_has_exact_parity(
        nm in (0u32..=2).prop_flat_map(|n| (Just(n), 1..=n + 1)),
        plus in any::<bool>(),
        even in any::<bool>(),
        hbar in 0.5f64..4.0,
        v in 0.0f64..0.999,
        c2 in -1.0f64..1.0,
    ) {
        let (n, m) = nm;
        let sign = if plus { SectorSign::Plus } else { SectorSign::Minus };
        let (parity, s) = if even { (Parity::Even, 1.0) } else { (Parity::Odd, -1.0) };
        let p = ModelParams::type_i(hbar, 1.0).unwrap();
        let c = XiCoeffs { first: 1.0, second: c2 };
        let a = xi_factor(n, m, sign, parity, v, c, &p).unwrap();
        let b = xi_factor(n, m, sign, parity, -v, c, &p).unwrap();
        prop_assert_eq!(b.value, s * a.value);
        prop_assert_eq!(b.dv, -s * a.dv);
    }

    #[test]
    fn equal_strength_densities_are_mirror_symmetric(
        x1 in -3.0f64..3.0,
        x2 in 0.05f64..2.0,
        hbar in 0.3f64..10.0,
        fermionic in any::<bool>(),
    ) {
        let kind = if fermionic { GroundStateKind::FermionicI } else { GroundStateKind::BosonicI };
        let gs = GroundState::new(kind, &ModelParams::type_i(hbar, 1.0).unwrap()).unwrap();
        let p = CartesianPoint::new(x1, x2);
        let d = gs.density(p).unwrap();
        let tol = 1e-12 * d;
        prop_assert!((gs.density(CartesianPoint::new(-x1, x2)).unwrap() - d).abs() <= tol);
        prop_assert!((gs.density(CartesianPoint::new(x1, -x2)).unwrap() - d).abs() <= tol);
    }
}

#[test]
fn bosonic_norms_grow_with_hbar() {
    for delta in [0.3, 0.5, 1.0] {
        let norms: Vec<f64> = (1..=10)
            .map(|k| {
                let p = ModelParams::type_i(f64::from(k), delta).unwrap();
                norm_bosonic_i(&p).unwrap().ln
            })
            .collect();
        assert!(norms.windows(2).all(|w| w[0] < w[1]), "delta {delta}: {norms:?}");
    }
}

#[test]
fn fermionic_norms_grow_with_hbar() {
    for delta in [0.3, 0.5, 1.0] {
        let norms: Vec<f64> = (1..=10)
            .map(|k| {
                let p = ModelParams::type_i(f64::from(k), delta).unwrap();
                GroundState::new(GroundStateKind::FermionicI, &p).unwrap().norm().unwrap().ln
            })
            .collect();
        assert!(norms.windows(2).all(|w| w[0] < w[1]), "delta {delta}: {norms:?}");
    }
}
