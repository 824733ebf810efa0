use std::collections::BTreeSet;

use permcover_core::group::*;
use permcover_core::perm::Permutation;

fn codes() -> Vec<GroupCode> {
    let mut out = Vec::new();
    for n in 1..=12 {
        out.push(make_cyclic(n).unwrap());
    }
    for n in 3..=20 {
        out.push(make_dihedral(n).unwrap());
    }
    for parts in [vec![3, 2], vec![4, 4], vec![5, 3, 2], vec![2, 2, 2], vec![6, 1]] {
        out.push(make_product(&FactorProfile::new(parts).unwrap()));
    }
    out.push(make_symmetric(5).unwrap());
    out
}

#[test]
fn every_code_is_a_group() {
    for c in codes() {
        assert!(c.len() <= 10_000);
        audit_group(c.degree(), c.elements()).unwrap_or_else(|e| panic!("{}: {e}", c.descriptor()));
    }
}

#[test]
fn dihedral_matches_explicit_families() {
    for n in 3..=20 {
        let got: BTreeSet<Permutation> = make_dihedral(n).unwrap().elements().iter().cloned().collect();
        let want: BTreeSet<Permutation> = (1..=n)
            .flat_map(|i| [dihedral_a(n, i), dihedral_b(n, i)])
            .collect();
        assert_eq!(got, want, "n={n}");
        assert_eq!(got.len(), 2 * n);
        assert!(got.contains(&Permutation::reversal(n)));
    }
}

#[test]
fn product_elements_rotate_each_block() {
    let c = make_product(&FactorProfile::new(vec![4, 3, 2]).unwrap());
    assert_eq!(c.len(), 24);
    let blocks = c.blocks().unwrap().to_vec();
    for g in c.elements() {
        for b in &blocks {
            let len = b.locations.len();
            let start = b.locations[0];
            let shift = (g.get(start) + len - start) % len;
            for (k, &x) in b.locations.iter().enumerate() {
                assert_eq!(g.get(x), b.locations[(k + shift) % len]);
            }
        }
    }
}

#[test]
fn relabel_preserves_order_and_axioms() {
    let base = make_product(&FactorProfile::new(vec![4, 3]).unwrap());
    for pi in ["[7,1,5,3,2,6,4]", "[1,2,3,4,5,6,7]", "[2,3,4,5,6,7,1]"] {
        let pi: Permutation = pi.parse().unwrap();
        let c = relabel(&base, &pi).unwrap();
        assert_eq!(c.len(), base.len());
        audit_group(7, c.elements()).unwrap();
        assert!(c.is_relabeled());
        assert_eq!(c.pq_type(), Some((4, 3)));
        let rebuilt = GroupCode::build(c.descriptor()).unwrap();
        assert_eq!(rebuilt.elements(), c.elements());
    }
    let d = make_dihedral(6).unwrap();
    let c = relabel(&d, &Permutation::reversal(6)).unwrap();
    assert_eq!(c.elements(), d.elements());
}

#[test]
fn closure_of_generators() {
    let r = Permutation::from_cycles(5, "(1,2,3,4,5)").unwrap();
    assert_eq!(generate_closure(5, std::slice::from_ref(&r)).unwrap(), make_cyclic(5).unwrap().elements());
    let s = Permutation::from_cycles(5, "(1,4)(2,3)").unwrap();
    assert_eq!(generate_closure(5, &[r, s]).unwrap(), make_dihedral(5).unwrap().elements());
}

#[test]
fn non_groups_are_rejected() {
    let t = Permutation::from_cycles(4, "(1,2,3)").unwrap();
    let err = from_elements(4, vec![Permutation::identity(4), t]);
    assert!(err.is_err());
    assert!(make_dihedral(2).is_err());
}

#[test]
fn descriptors_round_trip() {
    let descs = [
        CodeDescriptor::cyclic(5),
        CodeDescriptor::dihedral(7),
        CodeDescriptor::product(&[3, 2]).unwrap(),
        CodeDescriptor::relabeled(CodeDescriptor::product(&[3, 3]).unwrap(), "[2,1,3,4,6,5]".parse().unwrap()),
    ];
    for d in descs {
        let json = serde_json::to_string(&d).unwrap();
        let back: CodeDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        GroupCode::build(&back).unwrap();
    }
    let d: CodeDescriptor = serde_json::from_str(r#"{"kind":"dihedral","n":12}"#).unwrap();
    assert_eq!(GroupCode::build(&d).unwrap().len(), 24);
    assert!(serde_json::from_str::<CodeDescriptor>(r#"{"kind":"product","parts":[2,3]}"#).is_err());
}
