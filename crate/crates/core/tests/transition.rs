use hetlab::linalg::Mat3;
use hetlab::model::GameParameters;
use hetlab::network::{CycleKind, CycleSpec, NodeId};
use hetlab::transition::{closed_form_product, printed_product, product_chain, table_entries, ERRATA};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut ChaCha8Rng) -> GameParameters {
    let mut r = || rng.gen_range(0.2..5.0);
    GameParameters::new(r(), r(), r(), r()).unwrap()
}

fn multiplied(label: &str, p: &GameParameters) -> Mat3 {
    let e = table_entries().iter().find(|e| e.label == label).unwrap();
    let spec = CycleSpec::canonical(e.cycle);
    let pos = spec.position(NodeId::from_xi(e.start).unwrap()).unwrap();
    product_chain(&spec, pos, p).unwrap()[e.len - 1].entries
}

/// Entrywise comparison scaled by the size of the terms involved: the
/// products have entries that are sums of large terms of both signs.
fn mismatches(a: &Mat3, b: &Mat3, tol: f64) -> Vec<(usize, usize)> {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    let mut out = vec![];
    for i in 0..3 {
        for j in 0..3 {
            if (a.0[i][j] - b.0[i][j]).abs() > tol * scale {
                out.push((i, j));
            }
        }
    }
    out
}

#[test]
fn corrected_table_matches_multiplication() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        for e in table_entries() {
            let bad = mismatches(
                &closed_form_product(e.label, &p).unwrap(),
                &multiplied(e.label, &p),
                1e-10,
            );
            assert!(bad.is_empty(), "{} at {p:?}: entries {bad:?}", e.label);
        }
    }
}

#[test]
fn every_erratum_is_a_real_misprint() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let p = random_params(&mut rng);
    for fix in ERRATA.iter() {
        let printed = printed_product(fix.label, &p).unwrap();
        let product = multiplied(fix.label, &p);
        let bad = mismatches(&printed, &product, 1e-10);
        assert_eq!(bad, vec![(fix.row, fix.col)], "{}", fix.label);
    }
}

#[test]
fn printed_table_discrepancies_are_exactly_the_errata() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let p = random_params(&mut rng);
    for e in table_entries() {
        let bad = mismatches(&printed_product(e.label, &p).unwrap(), &multiplied(e.label, &p), 1e-10);
        let listed: Vec<_> = ERRATA
            .iter()
            .filter(|f| f.label == e.label)
            .map(|f| (f.row, f.col))
            .collect();
        assert_eq!(bad, listed, "{}", e.label);
    }
}

fn first_returns(kind: CycleKind, p: &GameParameters) -> Vec<Mat3> {
    let spec = CycleSpec::canonical(kind);
    (0..spec.len())
        .map(|j| product_chain(&spec, j, p).unwrap().pop().unwrap().entries)
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

#[test]
fn first_returns_share_their_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        for kind in [CycleKind::Rsp, CycleKind::FourNode] {
            let polys: Vec<_> = first_returns(kind, &p).iter().map(Mat3::charpoly).collect();
            let (t0, s0, d0) = polys[0];
            for &(t, s, d) in &polys[1..] {
                let err = rel(t, t0).max(rel(s, s0)).max(rel(d, d0));
                assert!(err < 1e-10, "{kind:?} at {p:?}: {polys:?}");
            }
        }
    }
}

#[test]
fn four_node_returns_fix_a_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        for m in first_returns(CycleKind::FourNode, &p) {
            // det(M - I) = 0 means 1 is an eigenvalue.
            let (t, s, d) = m.charpoly();
            let scale = 1.0 + t.abs() + s.abs() + d.abs();
            assert!((1.0 - t + s - d).abs() < 1e-10 * scale, "{p:?}");
        }
    }
}
