use std::collections::{BTreeMap, BTreeSet};

use spin7_flat::certify::certify_unchecked;
use spin7_flat::enumeration::scan::{exhaustive_keys, permutations, raw_admissible, staged_keys};
use spin7_flat::enumeration::*;

/// Every tuple of five determinant-one sign vectors in rank `n`.
fn all_tuples(n: usize) -> Vec<TokenTuple> {
    let special: Vec<SignVector> = (0u16..1 << n)
        .map(|b| SignVector::new(n, b))
        .filter(|s| s.is_special())
        .collect();
    let mut out = Vec::new();
    let k = special.len();
    for idx in 0..k.pow(5) {
        let mut r = idx;
        let toks = std::array::from_fn(|_| {
            let t = special[r % k];
            r /= k;
            t
        });
        out.push(TokenTuple::new(toks).unwrap());
    }
    out
}

/// Orbits of `tuples` under coordinate permutations, found by closing each
/// tuple under the whole symmetric group.
fn orbits_by_closure(tuples: &BTreeSet<TokenTuple>, n: usize) -> Vec<BTreeSet<TokenTuple>> {
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in tuples {
        if seen.contains(t) {
            continue;
        }
        let orbit: BTreeSet<TokenTuple> = perms.iter().map(|p| t.permuted(p)).collect();
        assert!(orbit.is_subset(tuples), "certification is not permutation invariant");
        seen.extend(orbit.iter().copied());
        out.push(orbit);
    }
    out
}

fn certified_raw(n: usize) -> BTreeSet<TokenTuple> {
    all_tuples(n)
        .into_iter()
        .filter(|t| t.is_admissible() && certify_unchecked(&t.expand(), false).certified)
        .collect()
}

#[test]
fn so3_brute_force_matches_catalog() {
    let all = all_tuples(3);
    assert_eq!(all.len(), 1024);
    let raw = certified_raw(3);
    assert_eq!(raw.len(), 630);
    assert_eq!(inclusion_exclusion_so3(), 630);
    let orbits = orbits_by_closure(&raw, 3);
    assert_eq!(orbits.len(), 105);

    let cat = enumerate(3, ScanOptions::default()).unwrap();
    assert_eq!((cat.certified_orbits, cat.certified_raw), (105, 630));
    let from_catalog: BTreeSet<TokenTuple> = cat
        .records
        .iter()
        .flat_map(|r| permutations(3).into_iter().map(move |p| r.tuple.permuted(&p)))
        .collect();
    assert_eq!(from_catalog, raw);
}

#[test]
fn so4_brute_force_orbits() {
    let raw = certified_raw(4);
    let orbits = orbits_by_closure(&raw, 4);
    assert_eq!(orbits.len(), 882);
    let cat = enumerate(4, ScanOptions::default()).unwrap();
    assert_eq!(cat.certified_orbits, 882);
    assert_eq!(cat.certified_raw, raw.len() as u64);
    let sizes: BTreeMap<OrbitKey, u64> = cat.records.iter().map(|r| (r.key.clone(), r.orbit_size)).collect();
    for o in &orbits {
        let t = o.iter().next().unwrap();
        assert_eq!(sizes[&t.canonical_key()], o.len() as u64);
    }
}

#[test]
fn so2_has_only_reducible_admissible_tuples() {
    let cat = enumerate(2, ScanOptions { mode: None, include_reducible: true }).unwrap();
    assert_eq!(cat.certified_orbits, 0);
    assert_eq!(cat.raw_admissible, 24);
    let red = cat.reducible.unwrap();
    assert_eq!(red.iter().map(|r| r.orbit_size).sum::<u64>(), 24);
}

#[test]
fn counts_for_so5_so7_so8() {
    for (n, want) in [(5, 1785), (7, 4095), (8, 16383)] {
        let cat = enumerate(n, ScanOptions::default()).unwrap();
        assert_eq!(cat.certified_orbits, want, "SO({n})");
    }
}

#[test]
fn staged_matches_exhaustive_up_to_rank_six() {
    for n in 2..=6 {
        let ex = enumerate(n, ScanOptions { mode: Some(ScanMode::Exhaustive), include_reducible: false }).unwrap();
        let st = enumerate(n, ScanOptions { mode: Some(ScanMode::Staged), include_reducible: false }).unwrap();
        assert_eq!(ex.keys(), st.keys(), "SO({n})");
        assert!(staged_keys(n).len() <= exhaustive_keys(n).len());
    }
}

#[test]
fn exhaustive_keys_cover_every_admissible_tuple() {
    for n in 2..=6 {
        let total: u64 = exhaustive_keys(n).iter().map(OrbitKey::orbit_size).sum();
        assert_eq!(total, raw_admissible(n), "SO({n})");
    }
}

#[test]
fn reducible_bucket_is_rejected_in_staged_mode() {
    let opts = ScanOptions { mode: Some(ScanMode::Staged), include_reducible: true };
    assert!(enumerate(7, opts).is_err());
    assert!(enumerate(13, ScanOptions::default()).is_err());
}

#[test]
fn nogo_scans() {
    let r = nogo_scan(6).unwrap();
    assert!(r.passed && r.certified == 0);
    for n in 9..=12 {
        let t = tau_triple_scan(n).unwrap();
        assert!(t.passed, "SO({n})");
        assert!(t.scanned > 0);
    }
}

#[test]
fn appendix_lists_verify() {
    let so3 = parse_list(appendix::SO3_LIST, 3).unwrap();
    assert_eq!(so3.len(), 105);
    assert!(verify_appendix(&so3, 3).unwrap().passed);
    let so4 = parse_list(appendix::SO4_LIST, 4).unwrap();
    assert_eq!(so4.len(), 882);
    assert!(verify_appendix(&so4, 4).unwrap().passed);
}

#[test]
fn appendix_verification_catches_tampering() {
    let mut so3 = parse_list(appendix::SO3_LIST, 3).unwrap();
    let first = so3[0];
    so3.push(first.permuted(&[1, 0, 2]));
    let r = verify_appendix(&so3, 3).unwrap();
    assert!(!r.passed);
    assert_eq!(r.duplicates.len(), 1);

    so3.truncate(104);
    let r = verify_appendix(&so3, 3).unwrap();
    assert!(!r.passed);
    assert_eq!(r.missing.len(), 1);

    so3.push(TokenTuple::parse("(1, a, 1, 1, 1)", 3).unwrap());
    let r = verify_appendix(&so3, 3).unwrap();
    assert_eq!(r.uncertified.len(), 1);
}

#[test]
fn list_parser_accepts_braces_and_reports_lines() {
    let t = parse_list("{(b, c, a, b, c), (a, 1, a, b, c)}\n\n", 3).unwrap();
    assert_eq!(t.len(), 2);
    let err = parse_list("(b, c, a, b, c)\n(q, c, a, b, c)\n", 3).unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}

#[test]
fn canonicalization_is_an_orbit_invariant() {
    let cat = enumerate(3, ScanOptions::default()).unwrap();
    for r in &cat.records {
        let c = canonical_representative(&r.tuple).unwrap();
        assert_eq!(c.canonical_key(), r.key);
        for p in permutations(3) {
            assert_eq!(canonical_representative(&r.tuple.permuted(&p)).unwrap(), c);
        }
    }
}

#[test]
fn token_names() {
    let t = TokenTuple::parse("(b, 1, a, b, 1)", 3).unwrap();
    assert_eq!(t.to_string(), "(b, 1, a, b, 1)");
    assert_eq!(TokenTuple::from_rep(&t.expand()), Some(t));
    assert!(!SignVector::parse("+-+", 3).unwrap().is_special());
    assert!(TokenTuple::parse("(+-+, 1, 1, 1, 1)", 3).is_err());
    assert_eq!(SignVector::parse("--+", 3).unwrap().name(), "c");
}

fn tau_part(t: &TokenTuple) -> [String; 3] {
    let [_, _, t4, t5, t8] = t.tokens();
    [t4.name(), t5.name(), t8.name()]
}

#[test]
fn so4_representatives_use_fourteen_translation_configurations() {
    let cat = enumerate(4, ScanOptions::default()).unwrap();
    let mut configs: BTreeMap<[String; 3], usize> = BTreeMap::new();
    for r in &cat.records {
        *configs.entry(tau_part(&r.tuple)).or_default() += 1;
    }
    assert_eq!(configs.len(), 14);
    // Each configuration pairs with every (gamma, delta) except (1, 1).
    assert!(configs.values().all(|&c| c == 63), "{configs:?}");
    for [t4, t5, _] in configs.keys() {
        assert!(["1", "-1", "a"].contains(&t4.as_str()), "{t4}");
        assert!(["1", "-1", "a", "-a", "b"].contains(&t5.as_str()), "{t5}");
    }
}

#[test]
fn so5_representatives_use_the_seven_listed_configurations() {
    let cat = enumerate(5, ScanOptions::default()).unwrap();
    let configs: BTreeSet<[String; 3]> = cat.records.iter().map(|r| tau_part(&r.tuple)).collect();
    let want: BTreeSet<[String; 3]> = [
        ["a12", "a13", "a14"],
        ["a12", "a13", "a24"],
        ["a12", "a13", "a34"],
        ["a12", "a13", "b5"],
        ["a12", "a34", "a13"],
        ["a12", "b5", "a13"],
        ["b5", "a12", "a13"],
    ]
    .into_iter()
    .map(|c| c.map(String::from))
    .collect();
    assert_eq!(configs, want);
}

#[test]
fn so7_and_so8_translation_parts_are_fixed() {
    let rows = [
        "-,-,-,-,+,+,+,+",
        "-,-,+,+,-,-,+,+",
        "+,-,-,+,+,-,-,+",
    ];
    for n in [7, 8] {
        let want: Vec<String> = rows.iter().map(|r| r.split(',').take(n).collect::<String>()).collect();
        let cat = enumerate(n, ScanOptions::default()).unwrap();
        for r in &cat.records {
            let [_, _, t4, t5, t8] = r.tuple.tokens();
            let got = vec![t4.sign_string(), t5.sign_string(), t8.sign_string()];
            assert_eq!(got, want, "SO({n}) {}", r.tuple);
        }
    }
    let one = "+++++++";
    let uncertified = TokenTuple::parse(&format!("(--+++++, {one}, {one}, {one}, {one})"), 7).unwrap();
    assert!(canonical_representative(&uncertified).is_err());
}

#[test]
fn key_examples() {
    let t = TokenTuple::parse("(1, a, a, b, 1)", 3).unwrap();
    let u = TokenTuple::parse("(1, a, a, c, 1)", 3).unwrap();
    assert_eq!(t.canonical_key(), t.permuted(&[2, 0, 1]).canonical_key());
    // Swapping the last two axes fixes a and exchanges b with c.
    assert_eq!(t.permuted(&[0, 2, 1]), u);
    assert_eq!(t.canonical_key(), u.canonical_key());
    let v = TokenTuple::parse("(1, a, b, a, 1)", 3).unwrap();
    assert_ne!(t.canonical_key(), v.canonical_key());
    let central = TokenTuple::parse("(-1, 1, a, b, 1)", 4).unwrap();
    assert_eq!(central.gamma().signs(), vec![-1; 4]);
}
