use hetlab::model::GameParameters;
use hetlab::network::{CycleKind, CycleSpec};
use hetlab::stability::{
    classify_in_as_regime, classify_point, constant_identities, derived_constants, f_index, lemma_relations_check,
    mutual_exclusion_check, rtop_row_sums, stability_indices_closed_form, stability_indices_generic, Classification,
    RelationStatus,
};
use proptest::prelude::*;

fn gp(ca: f64, cb: f64, ea: f64, eb: f64) -> GameParameters {
    GameParameters::new(ca, cb, ea, eb).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a == b) || (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn rsp_worked_point() {
    let p = gp(1.2, 4.0, 1.0, 0.8);
    let spec = CycleSpec::canonical(CycleKind::Rsp);
    for r in [
        stability_indices_generic(&spec, &p),
        stability_indices_closed_form(&spec, &p),
    ] {
        assert_eq!(r.classification, Classification::Fas, "{:?}", r.method);
        let v = r.values();
        // Indexed by incoming connection: 3->1, 1->2, 2->3.
        let want = [-1.0, 0.25, -1.45];
        for (got, want) in v.iter().zip(want) {
            assert!(close(*got, want, 1e-9), "{v:?}");
        }
    }
}

#[test]
fn rtop_eas_point() {
    let p = gp(3.0, 2.0, 1.0, 0.8);
    let rep = classify_point(&p);
    assert!(rep.all_agree());
    assert_eq!(rep.generic(CycleKind::RockToPaper), Classification::Eas);
    for k in [CycleKind::Star, CycleKind::Rsp, CycleKind::FourNode] {
        assert_eq!(rep.generic(k), Classification::CompletelyUnstable, "{k:?}");
    }
}

#[test]
fn star_fas_point() {
    let p = gp(1.5, 2.5, 1.0, 0.8);
    let rep = classify_point(&p);
    assert!(rep.all_agree());
    assert_eq!(rep.generic(CycleKind::Star), Classification::Fas);
    let cf = &rep.cycles[&CycleKind::Star].closed_form;
    assert_eq!(cf.classification, Classification::Fas);
    // The closed form bounds every connection by F(1, -e_A/e_B, 0).
    let bound = f_index([1.0, -1.0 / 0.8, 0.0]);
    assert!(close(bound, -0.25, 1e-12));
    for idx in &cf.per_connection {
        assert!(idx.value <= bound + 1e-9);
    }
}

#[test]
fn outside_regime_is_unsupported() {
    let p = gp(0.5, 0.4, 1.0, 0.8);
    assert!(classify_in_as_regime(&p).is_err());
    let rep = classify_point(&p);
    for v in rep.cycles.values() {
        assert_eq!(v.regime, Classification::Unsupported);
    }
}

#[test]
fn rsp_return_constant() {
    let d = derived_constants(&gp(2.0, 3.0, 1.0, 0.8));
    assert!(close(d.delta_t, 15.0, 1e-12));
}

#[test]
fn rtop_sums_at_eas_point() {
    let s = rtop_row_sums(&gp(3.0, 2.0, 1.0, 0.8));
    // Hand evaluation at (3, 2, 1, 0.8).
    let want = [0.2, 0.6, 4.04, 8.2, 14.968];
    for (got, want) in s.iter().zip(want) {
        assert!(close(*got, want, 1e-12), "{s:?}");
    }
}

#[test]
fn contracting_three_node_return_is_not_attracting() {
    // delta_T < 1: the return spectrum is {delta_T, 1, 1} and the leading
    // eigenvalue is a double root at 1.
    let p = gp(
        0.5174691349953549,
        3.936511440801363,
        1.0932035448583677,
        1.045392563664651,
    );
    assert!(derived_constants(&p).delta_t < 1.0);
    let rsp = CycleSpec::canonical(CycleKind::Rsp);
    let g = stability_indices_generic(&rsp, &p).classification;
    assert!(!g.is_attracting(), "{g}");
    assert_eq!(
        stability_indices_closed_form(&rsp, &p).classification,
        Classification::CompletelyUnstable
    );
}

#[test]
fn pipelines_agree_on_random_draws() {
    for seed in 0..5 {
        for p in hetlab::verify::random_points(1000, seed) {
            let rep = classify_point(&p);
            for (k, v) in &rep.cycles {
                assert!(
                    v.generic.classification.compatible(v.closed_form.classification),
                    "{k:?} at {p:?}: {} vs {}",
                    v.generic.classification,
                    v.closed_form.classification
                );
            }
        }
    }
}

fn any_params() -> impl Strategy<Value = GameParameters> {
    (0.2f64..5.0, 0.2f64..5.0, 0.2f64..5.0, 0.2f64..5.0).prop_map(|(a, b, c, d)| gp(a, b, c, d))
}

fn regime_params() -> impl Strategy<Value = GameParameters> {
    (0.05f64..1.0, 0.05f64..0.95, 0.01f64..4.0, 0.01f64..4.0).prop_map(|(ea, f, da, db)| {
        let eb = ea * f;
        gp(ea + da, ea + db, ea, eb)
    })
}

/// Regime points with `c_A e_A > c_B e_B`.
fn regime_params_with_ca_ea_above_cb_eb() -> impl Strategy<Value = GameParameters> {
    (0.05f64..1.0, 0.05f64..0.95, 0.01f64..4.0, 0.01f64..0.99).prop_map(|(ea, f, da, g)| {
        let eb = ea * f;
        let ca = ea + da;
        // c_B strictly between e_A and c_A e_A / e_B.
        gp(ca, ea + g * (ca * ea / eb - ea), ea, eb)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn identities_hold(p in any_params()) {
        for (name, lhs, rhs) in constant_identities(&p) {
            prop_assert!(close(lhs, rhs, 1e-9), "{name}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn lemma_relations_never_violated(p in any_params()) {
        for r in lemma_relations_check(&p) {
            prop_assert!(r.status != RelationStatus::Violated, "{}", r.name);
        }
    }

    #[test]
    fn rotation_does_not_change_verdict(p in any_params(), k in 0usize..5) {
        for kind in CycleKind::ALL {
            let base = CycleSpec::canonical(kind);
            let rot = base.rotated(k % base.len());
            let a = stability_indices_generic(&base, &p);
            let b = stability_indices_generic(&rot, &p);
            prop_assert_eq!(a.classification, b.classification);
            let mut va = a.values();
            let mut vb = b.values();
            va.sort_by(f64::total_cmp);
            vb.sort_by(f64::total_cmp);
            for (x, y) in va.iter().zip(&vb) {
                prop_assert!(close(*x, *y, 1e-9), "{kind:?}: {va:?} vs {vb:?}");
            }
        }
    }

    #[test]
    fn pipelines_agree(p in any_params()) {
        let rep = classify_point(&p);
        for (k, v) in &rep.cycles {
            prop_assert!(v.agree, "{k:?}: {:?} {:?} {:?}", v.generic.classification, v.closed_form.classification, v.regime);
        }
    }

    #[test]
    fn three_node_closed_form_is_exact(p in any_params()) {
        let rsp = CycleSpec::canonical(CycleKind::Rsp);
        let g = stability_indices_generic(&rsp, &p);
        let c = stability_indices_closed_form(&rsp, &p);
        if g.classification.is_definite() && c.classification.is_definite() {
            for (a, b) in g.values().iter().zip(c.values()) {
                prop_assert!(close(*a, b, 1e-9), "{:?} vs {:?}", g.values(), c.values());
            }
        }
    }

    #[test]
    fn five_node_indices_respect_bounds(p in any_params()) {
        for kind in [CycleKind::RockToPaper, CycleKind::Star] {
            let c = stability_indices_closed_form(&CycleSpec::canonical(kind), &p);
            if !c.classification.is_attracting() {
                continue;
            }
            for s in &c.per_connection {
                let b = s.bound.expect("bound attached");
                prop_assert!(s.value <= b + 1e-9 * b.abs().max(1.0), "{kind:?}: {} > {b}", s.value);
                if b < 0.0 {
                    prop_assert!(s.value < 0.0);
                }
            }
        }
    }

    #[test]
    fn regime_pipelines_agree(p in regime_params()) {
        let rep = classify_point(&p);
        prop_assert!(rep.all_agree());
    }

    #[test]
    fn four_node_never_eas(p in any_params()) {
        let r = stability_indices_generic(&CycleSpec::canonical(CycleKind::FourNode), &p);
        prop_assert!(r.classification != Classification::Eas);
    }

    #[test]
    fn exclusion_claims_hold(p in any_params()) {
        let rep = classify_point(&p);
        for c in mutual_exclusion_check(&p, |k| rep.generic(k)) {
            prop_assert!(!c.violated(), "{}", c.name);
        }
    }

    #[test]
    fn rtop_sums_signs(p in regime_params_with_ca_ea_above_cb_eb()) {
        let s = rtop_row_sums(&p);
        let eps = 1e-9 * s.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        prop_assert!(s[0] > 0.0);
        prop_assert!(s[1] <= s[2] + eps, "{s:?}");
        prop_assert!(s[3] > -eps, "{s:?}");
        if p.c_a * p.e_a - p.c_b * p.e_b > p.e_a * p.e_b {
            prop_assert!(s[1] > -eps && s[4] > -eps, "{s:?}");
        }
    }
}
