//! Invariants checked over randomly drawn parameters.

use floquet_core::bessel::{bessel_j, bessel_zero};
use floquet_core::dynloc::{mu_nu, n2_analytic, AcLatticeParams};
use floquet_core::ed::{kick_unitary, Path};
use floquet_core::hsf::{self, Boundary, Conserved, HsfParams};
use floquet_core::ising::{self, IsingChainParams};
use floquet_core::scars::{self, XyParams};
use floquet_core::timecrystal::{self, TcParams};
use floquet_core::{linalg, special_frequency, Constraint, DriveKind, FockBasis, SparseOperator, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn constraint() -> impl Strategy<Value = Constraint> {
    prop_oneof![
        (0usize..=4).prop_map(Constraint::NumberSector),
        Just(Constraint::BlockadeObc),
        Just(Constraint::BlockadePbc),
        Just(Constraint::FullSpinHalf),
        Just(Constraint::FullSpinOne),
    ]
}

fn bc() -> impl Strategy<Value = Boundary> {
    prop_oneof![Just(Boundary::Pbc), Just(Boundary::Obc)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn basis_index_inverts_states(l in 4usize..=9, c in constraint()) {
        let c = match c { Constraint::NumberSector(n) => Constraint::NumberSector(n.min(l)), c => c };
        let b = FockBasis::build(l, c).unwrap();
        for (i, &s) in b.states().iter().enumerate() {
            prop_assert_eq!(b.index(s), Some(i));
            prop_assert!(b.admits(s));
        }
        prop_assert!(b.states().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bessel_recurrence(n in 1u32..=40, x in 0.1f64..50.0) {
        let lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
        let rhs = 2.0 * n as f64 / x * bessel_j(n, x);
        prop_assert!((lhs - rhs).abs() <= 1e-10);
        prop_assert!(bessel_j(n, x).abs() <= 1.0);
    }

    #[test]
    fn special_frequencies_suppress_first_order(h1 in 0.5f64..40.0, n in 1usize..=6) {
        let w = special_frequency(DriveKind::Cosine, h1, n).unwrap();
        prop_assert!(bessel_j(0, 4.0 * h1 / w).abs() < 1e-9);
        let w = special_frequency(DriveKind::SquarePulse, h1, n).unwrap();
        let p = floquet_core::DriveProtocol::square_pulse(h1, w).unwrap();
        prop_assert!(p.suppression_factor().unwrap().abs() < 1e-9);
    }

    #[test]
    fn ising_modes_are_unitary(k in 0.01f64..PI, hs in -2.0f64..2.0, h1 in 0.0f64..10.0, w in 5.0f64..60.0) {
        let p = IsingChainParams::new(8, hs, h1, 0.0, w).unwrap();
        let u = ising::evolve_mode_period(k, &p, 16).unwrap();
        prop_assert!(u.adjoint().mul(&u).sub(&ising::Mat2::IDENTITY).max_abs() < 1e-9);
        prop_assert!((u.det().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stroboscopic_occupation_fluctuation(p in 1usize..=20, x in 0.2f64..6.0) {
        let params = AcLatticeParams::at_ratio(x).unwrap();
        let t = params.period() * p as f64;
        let (mu, nu) = mu_nu(t, x, params.omega, 1e-15).unwrap();
        prop_assert!(mu.abs() < 1e-9 && nu.abs() < 1e-9);
        let want = 2.0 * params.j_prime * (bessel_j(0, x) * t).powi(2);
        prop_assert!((n2_analytic(t, &params).unwrap() - want).abs() < 1e-8 * (1.0 + want));
    }

    #[test]
    fn fermion_drive_is_unitary_and_conserves_number(v1 in 0.0f64..30.0, w in 2.0f64..40.0, bc in bc()) {
        let p = HsfParams::new(8, v1, w, bc).unwrap();
        let b = p.basis().unwrap();
        let u = hsf::hsf_floquet(&p, &b, Path::Dense).unwrap();
        prop_assert!(u.unitarity_defect().unwrap() < 1e-9);
        let h = hsf::hsf_hf1(&p, &b).unwrap();
        prop_assert!(h.hermiticity_defect() < 1e-12);
        prop_assert!(hsf::conservation_check(&h, &p, &b, Conserved::N) < 1e-12);
    }

    #[test]
    fn fragments_partition_and_carry_uniform_charges(half in 3usize..=6, n in 1usize..=4, bc in bc()) {
        let w = 10.0 * n as f64;
        let p = HsfParams::new(2 * half, 2.0 * n as f64 * w, w, bc).unwrap();
        prop_assume!(p.is_special());
        let b = p.basis().unwrap();
        let h = hsf::hsf_hf1(&p, &b).unwrap();
        let f = hsf::fragments(&h);
        let mut seen = vec![false; b.dim()];
        for frag in &f.fragments {
            for &i in frag {
                prop_assert!(!seen[i]);
                seen[i] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        prop_assert_eq!(f.dims().iter().sum::<usize>(), b.dim());
        if bc == Boundary::Pbc {
            for q in [Conserved::Nd, Conserved::NdStaggered] {
                let d = hsf::conserved_diagonal(&p, &b, q);
                for frag in &f.fragments {
                    prop_assert!(frag.iter().all(|&i| d[i] == d[frag[0]]));
                }
            }
        }
    }

    #[test]
    fn tower_is_exact_for_any_couplings(l in 2usize..=6, j in -2.0f64..2.0, b0 in -2.0f64..2.0) {
        let t = scars::bimagnon_tower(&XyParams::new(l, j, b0).unwrap()).unwrap();
        prop_assert_eq!(t.states.len(), l + 1);
        prop_assert!(t.max_residual < 1e-10);
        let (w, dev) = t.spacing();
        prop_assert!(dev < 1e-10);
        prop_assert!((w + 2.0 * b0).abs() < 1e-10);
    }

    #[test]
    fn perfect_kick_gives_exact_period_doubling(l in 2usize..=8, j in -2.0f64..2.0, t in 0.1f64..3.0) {
        let p = TcParams::new(l, j, 0.0, t, 0.0).unwrap();
        let m = timecrystal::subharmonic_run(&p, 60).unwrap();
        for n in 0..=60 {
            let want = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((m.get(n).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn kick_group_property(theta in -3.0f64..3.0, l in 2usize..=5) {
        let b = FockBasis::build(l, Constraint::FullSpinHalf).unwrap();
        let mut k = SparseOperator::zero(b.dim());
        for j in 0..l {
            let t: Vec<_> = (0..b.dim()).map(|c| (c ^ (1 << j), c, C64::new(1.0, 0.0))).collect();
            k = k.add(&SparseOperator::from_triplets(b.dim(), t));
        }
        let half = kick_unitary(&k, 0.5 * theta).unwrap();
        let full = kick_unitary(&k, theta).unwrap();
        let v: Vec<C64> = (0..b.dim()).map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let twice = half.apply(&half.apply(&v).unwrap()).unwrap();
        let once = full.apply(&v).unwrap();
        prop_assert!(twice.iter().zip(&once).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn bessel_zeros_are_ordered(n in 1usize..=30) {
        let (a, b) = (bessel_zero(n).unwrap(), bessel_zero(n + 1).unwrap());
        prop_assert!(b > a);
        prop_assert!(bessel_j(0, a).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn pxp_drive_is_unitary(omega in 0.5f64..2.0, lambda in 0.0f64..20.0, w in 2.0f64..40.0, bc in bc()) {
        let p = scars::PxpParams::new(10, omega, lambda, w, bc).unwrap();
        let b = p.basis().unwrap();
        let u = scars::pxp_floquet(&p, &b, Path::Dense).unwrap();
        prop_assert!(u.unitarity_defect().unwrap() < 1e-9);
        let h3 = scars::pxp_hf3(&p, &b).unwrap();
        prop_assert!(h3.hermiticity_defect() < 1e-12 * (1.0 + h3.max_abs()));
    }

    #[test]
    fn floquet_group_property(v1 in 0.0f64..20.0, w in 2.0f64..30.0) {
        let p = HsfParams::new(8, v1, w, Boundary::Pbc).unwrap();
        let b = p.basis().unwrap();
        let u = hsf::hsf_floquet(&p, &b, Path::Dense).unwrap();
        let d = u.dense().unwrap();
        let u2 = d * d;
        let v: Vec<C64> = (0..b.dim()).map(|i| C64::new(1.0 / (1.0 + i as f64), 0.0)).collect();
        let a = u.apply_n(&v, 2).unwrap();
        let c = linalg::matvec(&u2, &v);
        prop_assert!(a.iter().zip(&c).all(|(x, y)| (x - y).norm() < 1e-8));
    }
}
