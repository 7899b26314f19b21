use hetlab::network::{edges, elementary_cycles, ConnType, CycleKind, CycleSpec, NodeId};

#[test]
fn every_node_has_two_connections_each_way() {
    let all = edges();
    assert_eq!(all.len(), 10);
    for n in NodeId::all() {
        let out: Vec<_> = all.iter().filter(|e| e.from == n).collect();
        let inc: Vec<_> = all.iter().filter(|e| e.to == n).collect();
        assert_eq!(out.len(), 2);
        assert_eq!(inc.len(), 2);
        for e in out {
            let (step, dim) = match e.kind {
                ConnType::A => (1, 2),
                ConnType::B => (3, 1),
            };
            assert_eq!(e.to, n.shift(step));
            assert_eq!(e.kind.dimension(), dim);
        }
    }
}

#[test]
fn cycles_are_closed() {
    let all = edges();
    for c in elementary_cycles() {
        let conns = c.connections();
        assert_eq!(conns.len(), c.len());
        for (i, e) in conns.iter().enumerate() {
            assert!(all.contains(e), "{c}: {e}");
            assert_eq!(e.to, conns[(i + 1) % conns.len()].from, "{c}");
        }
        assert_eq!(conns.last().unwrap().to, c.nodes[0]);
    }
}

#[test]
fn relabelling_maps_each_family_onto_itself() {
    let cycles = elementary_cycles();
    for kind in CycleKind::ALL {
        let family: Vec<&CycleSpec> = cycles.iter().filter(|c| c.name == kind).collect();
        for c in &family {
            for k in 0..5 {
                let r = c.rotated(k);
                assert!(family.iter().any(|f| f.same_cycle(&r)), "{r}");
            }
        }
    }
}
