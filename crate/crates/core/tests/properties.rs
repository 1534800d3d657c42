//! Property tests for the invariants of each module.

use g52::foliation::{
    closed_flow, homeo_apply, homeo_inverse, integrate_flow, jacobian_constancy, Homeomorphism,
    VectorField,
};
use g52::lie::{ad_matrix, bracket, kirillov_form, skew_rank};
use g52::orbits::{cross_section, in_v, invariant, quadrant, sample_orbit, same_leaf, SECTION_TOL};
use g52::spectral::{eigenvalues_closed, eigenvalues_numeric, spectrum_mismatch};
use g52::{
    build_algebra, coadjoint_point, coadjoint_point_closed, exp_ad, exp_ad_closed, Algebra,
    AlgebraElement, Covector, Error, FamilyId, FamilyTag, Studied,
};
use proptest::prelude::*;

fn any_family() -> impl Strategy<Value = FamilyId> {
    (0usize..16, any::<u64>())
        .prop_map(|(k, seed)| FamilyId::random(FamilyTag::ALL[k], &mut g52::sampling::rng(seed)))
}

fn exponential_family() -> impl Strategy<Value = FamilyId> {
    any_family().prop_filter("exponential", |id| id.is_exponential_tag())
}

fn studied_family() -> impl Strategy<Value = FamilyId> {
    prop_oneof![
        Just(Studied::G2.id()),
        Just(Studied::G3.id()),
        Just(Studied::G4_00.id()),
        Just(Studied::G9.id()),
        (-2.0..2.0f64).prop_map(|l| Studied::G10(l).id()),
    ]
}

fn coords() -> impl Strategy<Value = [f64; 7]> {
    prop::array::uniform7(-2.0..2.0f64)
}

fn element() -> impl Strategy<Value = AlgebraElement> {
    coords().prop_map(AlgebraElement)
}

fn covector() -> impl Strategy<Value = Covector> {
    coords().prop_map(Covector)
}

/// A point of `V` with `|x*_4|, |x*_5| >= 0.25`.
fn point_in_v() -> impl Strategy<Value = Covector> {
    (coords(), 0.25..2.0f64, 0.25..2.0f64, any::<bool>(), any::<bool>()).prop_map(
        |(mut c, a, b, sa, sb)| {
            c[3] = if sa { a } else { -a };
            c[4] = if sb { b } else { -b };
            Covector(c)
        },
    )
}

/// Entries that are exactly zero about a third of the time.
fn structured_covector() -> impl Strategy<Value = Covector> {
    prop::array::uniform7(prop_oneof![
        1 => Just(0.0),
        2 => (0.25..2.0f64, any::<bool>()).prop_map(|(m, s)| if s { m } else { -m }),
    ])
    .prop_map(Covector)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(id in any_family(), u in element(), v in element(), w in element()) {
        let c = build_algebra(&id).unwrap();
        let uv = bracket(&c, &u, &v);
        let vu = bracket(&c, &v, &u);
        prop_assert!((uv + vu).norm_inf() < 1e-13);
        let j = bracket(&c, &u, &bracket(&c, &v, &w))
            + bracket(&c, &v, &bracket(&c, &w, &u))
            + bracket(&c, &w, &bracket(&c, &u, &v));
        prop_assert!(j.norm_inf() < 1e-11, "{} jacobi {:e}", id, j.norm_inf());
    }

    #[test]
    fn ad_is_linear(id in any_family(), u in element(), v in element(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let c = build_algebra(&id).unwrap();
        let lhs = ad_matrix(&c, &(u.scale(a) + v.scale(b)));
        let rhs = ad_matrix(&c, &u).scale(a) + ad_matrix(&c, &v).scale(b);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn kirillov_is_exactly_skew_with_even_rank(id in any_family(), f in structured_covector()) {
        let c = build_algebra(&id).unwrap();
        let k = kirillov_form(&c, &f);
        prop_assert_eq!(k + k.transpose(), g52::Matrix7::zeros());
        prop_assert_eq!(skew_rank(&k).unwrap() % 2, 0);
    }

    #[test]
    fn eigenvalues_closed_match_numeric(id in any_family(), u in element()) {
        let alg = Algebra::new(id).unwrap();
        let ad = alg.ad(&u);
        let numeric = eigenvalues_numeric(&ad).unwrap();
        let closed = eigenvalues_closed(&id, &u);
        prop_assert!(spectrum_mismatch(&closed, &ad).unwrap() < 1e-8);
        prop_assert!(numeric.conjugation_residual() < 1e-10);
    }

    #[test]
    fn liouville(id in any_family(), u in element()) {
        let alg = Algebra::new(id).unwrap();
        let ad = alg.ad(&u);
        let det = exp_ad(&alg, &u).unwrap().determinant();
        let want = ad.trace().exp();
        prop_assert!((det - want).abs() < 1e-9 * want);
    }

    #[test]
    fn coadjoint_group_law(id in exponential_family(), f in covector(), u in element()) {
        let back = coadjoint_point(&id, &coadjoint_point(&id, &f, &u).unwrap(), &(-u)).unwrap();
        prop_assert!((back - f).norm_inf() < 1e-9 * (1.0 + f.norm_inf()));
    }

    #[test]
    fn non_exponential_families_refuse_the_action(k in 12usize..16, seed in any::<u64>(), f in covector(), u in element()) {
        let id = FamilyId::random(FamilyTag::ALL[k], &mut g52::sampling::rng(seed));
        let is_refused = matches!(coadjoint_point(&id, &f, &u), Err(Error::NotExponentialFamily(_)));
        prop_assert!(is_refused);
    }

    #[test]
    fn closed_exponential_matches_oracle(id in studied_family(), u in element()) {
        let alg = Algebra::new(id).unwrap();
        let oracle = exp_ad(&alg, &u).unwrap();
        let closed = exp_ad_closed(&id, &u).unwrap();
        prop_assert!((closed - oracle).frobenius_norm() < 1e-9 * (1.0 + oracle.frobenius_norm()));
    }

    #[test]
    fn closed_exponential_is_continuous_across_loci(
        id in studied_family(),
        u in element(),
        locus in 0usize..4,
        exponent in -16.0..-3.0f64,
        positive in any::<bool>(),
    ) {
        let mut u = u;
        let d = if positive { 10f64.powf(exponent) } else { -10f64.powf(exponent) };
        let l = if id.tag() == FamilyTag::G10 { id.lambda() } else { 0.0 };
        match locus {
            0 => u[5] = d,
            1 => u[6] = d,
            2 => u[6] = d - u[5],
            _ => u[6] = d - l * u[5],
        }
        let alg = Algebra::new(id).unwrap();
        let oracle = exp_ad(&alg, &u).unwrap();
        let closed = exp_ad_closed(&id, &u).unwrap();
        prop_assert!((closed - oracle).frobenius_norm() < 1e-9 * (1.0 + oracle.frobenius_norm()));
    }

    #[test]
    fn closed_orbit_points_match_oracle(id in studied_family(), f in covector(), u in element()) {
        let a = coadjoint_point_closed(&id, &f, &u).unwrap();
        let b = coadjoint_point(&id, &f, &u).unwrap();
        prop_assert!((a - b).norm_inf() < 1e-9 * (1.0 + b.norm_inf()));
    }

    #[test]
    fn orbits_stay_on_their_leaf(id in studied_family(), f in point_in_v(), u in element()) {
        let p = coadjoint_point(&id, &f, &u).unwrap();
        prop_assert!(in_v(&p));
        prop_assert_eq!(quadrant(&p).unwrap(), quadrant(&f).unwrap());
        let c = invariant(&id, &f).unwrap();
        prop_assert!((invariant(&id, &p).unwrap() - c).abs() < 1e-8 * (1.0 + c.abs()));
    }

    #[test]
    fn sampled_orbits_share_the_leaf(id in studied_family(), f in point_in_v(), seed in any::<u64>()) {
        for p in sample_orbit(&id, &f, 20, seed).unwrap() {
            prop_assert!(same_leaf(&id, &f, &p, 1e-8).unwrap());
        }
    }

    #[test]
    fn sampling_is_deterministic(id in studied_family(), f in covector(), seed in any::<u64>()) {
        prop_assert_eq!(sample_orbit(&id, &f, 5, seed).unwrap(), sample_orbit(&id, &f, 5, seed).unwrap());
    }

    #[test]
    fn closed_flows_preserve_leaf_and_quadrant(id in studied_family(), v in point_in_v(), k in 1usize..=6, t in -1.0..1.0f64) {
        let field = VectorField::new(&id, k).unwrap();
        match closed_flow(field, &v, t) {
            Ok(p) => {
                let c = invariant(&id, &v).unwrap();
                prop_assert!((invariant(&id, &p).unwrap() - c).abs() < 1e-6 * (1.0 + c.abs()));
                prop_assert_eq!(quadrant(&p).unwrap(), quadrant(&v).unwrap());
            }
            Err(Error::LeftV { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn closed_flows_form_a_group(id in studied_family(), v in point_in_v(), k in 1usize..=6, s in -0.5..0.5f64, t in -0.5..0.5f64) {
        let field = VectorField::new(&id, k).unwrap();
        if let (Ok(a), Ok(st)) = (closed_flow(field, &v, s), closed_flow(field, &v, s + t)) {
            if let Ok(b) = closed_flow(field, &a, t) {
                prop_assert!((b - st).norm_inf() < 1e-10 * (1.0 + st.norm_inf()));
            }
        }
    }

    #[test]
    fn homeomorphisms_round_trip(v in point_in_v(), l in -2.0..2.0f64) {
        for h in Homeomorphism::all(l) {
            let w = homeo_apply(h, &v).unwrap();
            prop_assert!(in_v(&w));
            let back = homeo_inverse(h, &w).unwrap();
            prop_assert!((back - v).norm_inf() < 1e-10 * (1.0 + v.norm_inf()));
            let (src, dst) = h.pair();
            let cs = invariant(&src.id(), &v).unwrap();
            let ct = invariant(&dst.id(), &w).unwrap();
            prop_assert!((cs - ct).abs() < 1e-10 * (1.0 + cs.abs()), "{h}");
        }
    }

    #[test]
    fn cross_sections_lie_on_the_leaf(id in studied_family(), c in -2.0..2.0f64, a in -2.0..2.0f64, n in 0usize..12) {
        for p in cross_section(&id, c, a, n).unwrap() {
            let v = Covector([0.0, p.x2, a, p.x4, p.x5, 0.0, 0.0]);
            prop_assert!((invariant(&id, &v).unwrap() - c).abs() < SECTION_TOL);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rk4_matches_closed_flows(id in studied_family(), v in point_in_v(), k in 1usize..=6, t in -1.0..1.0f64) {
        let field = VectorField::new(&id, k).unwrap();
        if let Ok(end) = closed_flow(field, &v, t) {
            match integrate_flow(field, &v, t, 1000) {
                Ok(num) => prop_assert!((num - end).norm_inf() < 1e-6 * (1.0 + end.norm_inf())),
                Err(Error::LeftV { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }

    #[test]
    fn jacobian_is_constant(id in exponential_family(), u in element(), fs in prop::collection::vec(point_in_v(), 3..8)) {
        let r = jacobian_constancy(&id, &u, &fs).unwrap();
        prop_assert!(r.pass, "{} {:?}", id, r);
    }
}
