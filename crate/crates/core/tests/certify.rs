use spin7_flat::certify::*;
use spin7_flat::enumeration::TokenTuple;
use spin7_flat::linalg::QMatrix;
use spin7_flat::orbifold::Gen;
use spin7_flat::rational::int;
use spin7_flat::Error;

#[test]
fn trivial_rep_has_h0_equal_to_dim() {
    for n in 2..=5 {
        let r = certify(&FlatRep::trivial(n)).unwrap();
        let d = n * (n - 1) / 2;
        assert_eq!(r.h0, d);
        // alpha and beta act as -1 on e4..e7, and gamma, delta split e1..e3,
        // so neither the translations nor the 7-piece carry invariants.
        assert_eq!((r.h1, r.h2), (0, 0));
        assert!(!r.irreducible && !r.certified);
    }
}

#[test]
fn dihedral_example_is_obstructed_with_witness() {
    let rep = dihedral_so3_example();
    assert!(rep.validate().is_empty());
    assert!(!rep.is_diagonal());
    let r = certify(&rep).unwrap();
    assert_eq!((r.h0, r.h1, r.h2), (0, 0, 1));
    let w = obstruction_witness(&rep).unwrap().expect("h2 = 1");
    assert_eq!(w.form, 3);
    assert_eq!(w.signs, (-1, -1));
    assert!(w.verify(&rep));
    assert_eq!(obstruction_witnesses(&rep).len(), r.h2);
}

#[test]
fn certified_so3_example() {
    let t = TokenTuple::parse("(b, c, a, b, c)", 3).unwrap();
    let r = certify(&t.expand()).unwrap();
    assert!(r.certified, "{r:?}");
    assert!(obstruction_witness(&t.expand()).unwrap().is_none());
}

#[test]
fn validation_rejects_broken_relations() {
    let mut rep = FlatRep::trivial(3);
    rep.set_image(Gen::Gamma, QMatrix::from_i64(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]));
    let v = rep.validate();
    assert!(v.iter().any(|s| s.contains("relation fails")), "{v:?}");
    assert!(matches!(certify(&rep), Err(Error::Validation(_))));
}

#[test]
fn validation_rejects_reflections() {
    let mut rep = FlatRep::trivial(2);
    rep.set_image(Gen::Tau(1), QMatrix::from_i64(&[&[1, 0], &[0, -1]]));
    let v = rep.validate();
    assert!(v.iter().any(|s| s.contains("determinant")), "{v:?}");
}

#[test]
fn conjugation_preserves_cohomology() {
    let rep = dihedral_so3_example();
    let h = QMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
    let conj = rep.conjugate(&h).unwrap();
    let (a, b) = (certify(&rep).unwrap(), certify(&conj).unwrap());
    assert_eq!((a.h0, a.h1, a.h2), (b.h0, b.h1, b.h2));
    assert!(rep.conjugate(&QMatrix::identity(3).scale(&int(2))).is_err());
}

#[test]
fn fast_and_general_paths_agree() {
    for s in ["(b, c, a, b, c)", "(a, 1, a, b, c)", "(1, a, 1, 1, 1)", "(c, c, b, a, 1)"] {
        let rep = TokenTuple::parse(s, 3).unwrap().expand();
        let mut fast = certify_diagonal(&rep, true);
        let mut slow = certify_general(&rep, true);
        assert_eq!((fast.h0, fast.h1, fast.h2), (slow.h0, slow.h1, slow.h2), "{s}");
        fast.bases = None;
        slow.bases = None;
        assert_eq!(fast, slow);
    }
}

#[test]
fn bases_have_the_reported_dimensions() {
    let rep = FlatRep::trivial(4);
    let r = certify(&rep).unwrap();
    let b = r.bases.unwrap();
    assert_eq!(b.h0.len(), r.h0);
    assert_eq!(b.h1.len(), r.h1);
    assert_eq!(b.h2.len(), r.h2);
    let basis = LieBasis::new(4);
    for v in &b.h0 {
        let xi = basis.matrix(v);
        assert_eq!(xi.transpose(), xi.scale(&int(-1)));
    }
}

#[test]
fn rep_json_round_trip() {
    let rep = dihedral_so3_example();
    let text = serde_json::to_string(&rep).unwrap();
    let back: FlatRep = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rep);
}
