//! Orbit scans over commuting diagonal representations.
//!
//! Two tuples are gauge equivalent when a signed permutation matrix of
//! determinant one conjugates one into the other. On diagonal matrices that
//! is exactly a simultaneous permutation of coordinates, so an orbit is a
//! multiset of per-coordinate 5-bit columns ([`OrbitKey`]). A tuple of
//! special sign vectors is the same as a column multiset in which every bit
//! occurs an even number of times, i.e. the columns XOR to zero.
//!
//! The exhaustive scan visits every such multiset. The staged scan first
//! chooses the `(tau_4, tau_5, tau_8)` columns and keeps only those whose
//! common fixed space in `so(n)` vanishes. That pruning is sound: a nonzero
//! vector fixed by the translations splits into joint eigenvectors of
//! `Ad gamma, Ad delta`, and any sign pattern gives either `h0 > 0` (pattern
//! `(+,+)`) or an invariant `e_k (x) xi` with `k` in `1..=3` (`h2 > 0`).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{adjoint_matrix, certify_unchecked, CertReport, LieBasis};
use crate::error::{Error, Result};
use crate::linalg::{fixed_subspace, SparseMatrix};

use super::tokens::{OrbitKey, SignVector, TokenTuple, MAX_N};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Staged,
}

impl ScanMode {
    pub fn default_for(n: usize) -> Self {
        if n <= 6 {
            ScanMode::Exhaustive
        } else {
            ScanMode::Staged
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ScanOptions {
    pub mode: Option<ScanMode>,
    /// Also collect orbits with `h0 > 0` but `h1 = h2 = 0`.
    pub include_reducible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    /// Chosen representative of the orbit.
    pub tuple: TokenTuple,
    pub key: OrbitKey,
    pub orbit_size: u64,
    pub report: CertReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCatalog {
    pub group: String,
    pub n: usize,
    pub mode: ScanMode,
    /// Admissible raw tuples: `(gamma, delta) != (1, 1)`.
    pub raw_admissible: u64,
    /// Orbits whose certificates were computed.
    pub scanned_orbits: usize,
    /// Raw tuples covered by the scanned orbits.
    pub scanned_raw: u64,
    pub certified_orbits: usize,
    pub certified_raw: u64,
    pub records: Vec<OrbitRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reducible: Option<Vec<OrbitRecord>>,
}

impl OrbitCatalog {
    pub fn keys(&self) -> Vec<OrbitKey> {
        self.records.iter().map(|r| r.key.clone()).collect()
    }
}

fn check_rank(n: usize) -> Result<()> {
    if !(2..=MAX_N).contains(&n) {
        return Err(Error::Domain(format!("SO({n}) outside the supported range 2..={MAX_N}")));
    }
    Ok(())
}

/// All non-decreasing sequences of length `n` over `0..alphabet` whose XOR is 0.
fn xor_free_multisets(n: usize, alphabet: u8) -> Vec<Vec<u8>> {
    fn rec(n: usize, alphabet: u8, start: u8, acc: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() + 1 == n {
            // The last column is forced by parity.
            if acc >= start && acc < alphabet {
                cur.push(acc);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for c in start..alphabet {
            cur.push(c);
            rec(n, alphabet, c, acc ^ c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, alphabet, 0, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

const GD_MASK: u8 = 0b00011;

fn is_admissible_key(cols: &[u8]) -> bool {
    cols.iter().any(|c| c & GD_MASK != 0)
}

/// Keys visited by the exhaustive scan.
pub fn exhaustive_keys(n: usize) -> Vec<OrbitKey> {
    xor_free_multisets(n, 32)
        .into_iter()
        .filter(|k| is_admissible_key(k))
        .map(OrbitKey)
        .collect()
}

/// Translation parts (3-bit columns `tau4 | tau5 << 1 | tau8 << 2`) whose
/// fixed space in `so(n)` vanishes, checked exactly.
pub fn translation_keys(n: usize) -> Vec<Vec<u8>> {
    xor_free_multisets(n, 8)
        .into_par_iter()
        .filter(|cols| translation_fixed_dim(cols) == 0)
        .collect()
}

fn translation_fixed_dim(tau_cols: &[u8]) -> usize {
    let n = tau_cols.len();
    let mats: Vec<SparseMatrix> = (0..3)
        .map(|k| {
            let bits = tau_cols
                .iter()
                .enumerate()
                .fold(0u16, |acc, (p, c)| acc | ((c >> k & 1) as u16) << p);
            adjoint_matrix(&SignVector::new(n, bits).matrix())
        })
        .collect();
    fixed_subspace(&mats, LieBasis::new(n).dim()).dim()
}

/// Keys visited by the staged scan.
pub fn staged_keys(n: usize) -> Vec<OrbitKey> {
    let mut out = Vec::new();
    for tau in translation_keys(n) {
        // Classes of equal translation columns and their multiplicities.
        let mut classes: Vec<(u8, usize)> = Vec::new();
        for &t in &tau {
            match classes.last_mut() {
                Some((v, m)) if *v == t => *m += 1,
                _ => classes.push((t, 1)),
            }
        }
        let mut partial: Vec<Vec<u8>> = vec![Vec::new()];
        for &(t, m) in &classes {
            let choices = multisets(m, 4);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |gd| {
                        let mut q = p.clone();
                        q.extend(gd.iter().map(|&x| x | t << 2));
                        q
                    })
                })
                .collect();
        }
        for mut cols in partial {
            let parity = cols.iter().fold(0, |a, c| a ^ c);
            if parity == 0 && is_admissible_key(&cols) {
                cols.sort_unstable();
                out.push(OrbitKey(cols));
            }
        }
    }
    out.sort();
    out
}

/// Non-decreasing sequences of length `m` over `0..alphabet`.
fn multisets(m: usize, alphabet: u8) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u8>| {
                let start = p.last().copied().unwrap_or(0);
                (start..alphabet).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Number of admissible raw tuples for `SO(n)`.
pub fn raw_admissible(n: usize) -> u64 {
    let per = 1u64 << (n - 1);
    per.pow(5) - per.pow(3)
}

/// `(tau_4, tau_5, tau_8)` columns of the fixed translation part for `SO(7)`;
/// `SO(8)` appends the all-plus column. Bit 0 is `tau_4`.
const FIXED_TAU_COLUMNS: [u8; 8] = [0b011, 0b111, 0b101, 0b001, 0b010, 0b110, 0b100, 0b000];

/// Representative shown for an orbit.
///
/// Up to rank 6 this is the least image under coordinate permutations,
/// comparing `(tau_4, tau_5, tau_8, gamma, delta)` by [`SignVector::rank`].
/// Fixing the translation tokens first, in that order, is the usual gauge
/// fixing: in rank 4 a non-central `tau_4` becomes `a` and the first
/// non-commuting partner becomes `b`; in rank 5 it lands on one of seven
/// translation configurations. In ranks 7 and 8 a certified tuple has a
/// translation part with distinct columns, gauge equivalent to a fixed one,
/// and the coordinates are sorted into that order.
pub fn canonical_representative(t: &TokenTuple) -> Result<TokenTuple> {
    let n = t.n();
    if n <= 6 {
        let sort_key = |x: &TokenTuple| {
            let [g, d, t4, t5, t8] = x.tokens();
            [t4.rank(), t5.rank(), t8.rank(), g.rank(), d.rank()]
        };
        return Ok(permutations(n)
            .iter()
            .map(|p| t.permuted(p))
            .min_by_key(sort_key)
            .expect("at least one permutation"));
    }
    let cols = t.columns();
    let not_fixed = || Error::Domain(format!("{t}: translation part is not the certified configuration for SO({n})"));
    if n > 8 {
        return Err(not_fixed());
    }
    let mut perm = vec![0; n];
    for (target, want) in FIXED_TAU_COLUMNS[..n].iter().enumerate() {
        let matches: Vec<usize> = (0..n).filter(|&p| cols[p] >> 2 == *want).collect();
        if matches.len() != 1 {
            return Err(not_fixed());
        }
        perm[target] = matches[0];
    }
    Ok(t.permuted(&perm))
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap(n, &mut p, &mut out);
    out.sort();
    out
}

fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k - 1 {
        heap(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
    heap(k - 1, p, out);
}

fn certify_keys(keys: Vec<OrbitKey>) -> Vec<(OrbitKey, CertReport)> {
    keys.into_par_iter()
        .map(|k| {
            let rep = k.tuple().expand();
            let report = certify_unchecked(&rep, false);
            (k, report)
        })
        .collect()
}

fn record(key: OrbitKey, report: CertReport) -> OrbitRecord {
    OrbitRecord {
        // Catalog records are certified or, in the reducible bucket, rank <= 6.
        tuple: canonical_representative(&key.tuple()).unwrap_or_else(|_| key.tuple()),
        orbit_size: key.orbit_size(),
        key,
        report,
    }
}

/// Certified orbits of commuting diagonal representations into `SO(n)` with
/// trivial `rho(alpha), rho(beta)`, sorted by key.
pub fn enumerate(n: usize, opts: ScanOptions) -> Result<OrbitCatalog> {
    check_rank(n)?;
    let mode = opts.mode.unwrap_or(ScanMode::default_for(n));
    if opts.include_reducible && mode == ScanMode::Staged {
        return Err(Error::Unsupported(
            "the reducible bucket needs the exhaustive scan".into(),
        ));
    }
    let keys = match mode {
        ScanMode::Exhaustive => exhaustive_keys(n),
        ScanMode::Staged => staged_keys(n),
    };
    let scanned_orbits = keys.len();
    let scanned_raw = keys.iter().map(OrbitKey::orbit_size).sum();
    let mut certified = Vec::new();
    let mut reducible = Vec::new();
    for (k, rep) in certify_keys(keys) {
        if rep.certified {
            certified.push(record(k, rep));
        } else if opts.include_reducible && rep.h0 > 0 && rep.rigid && rep.unobstructed {
            reducible.push(record(k, rep));
        }
    }
    certified.sort_by(|a, b| a.key.cmp(&b.key));
    reducible.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(OrbitCatalog {
        group: format!("SO({n})"),
        n,
        mode,
        raw_admissible: raw_admissible(n),
        scanned_orbits,
        scanned_raw,
        certified_orbits: certified.len(),
        certified_raw: certified.iter().map(|r| r.orbit_size).sum(),
        records: certified,
        reducible: opts.include_reducible.then_some(reducible),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NoGoReport {
    pub group: String,
    pub n: usize,
    pub mode: ScanMode,
    pub scanned_orbits: usize,
    pub scanned_raw: u64,
    pub certified: usize,
    pub passed: bool,
}

/// Scan `SO(n)` and report how many orbits certify; `passed` when none do.
pub fn nogo_scan(n: usize) -> Result<NoGoReport> {
    let cat = enumerate(n, ScanOptions::default())?;
    Ok(NoGoReport {
        group: cat.group,
        n,
        mode: cat.mode,
        scanned_orbits: cat.scanned_orbits,
        scanned_raw: cat.scanned_raw,
        certified: cat.certified_orbits,
        passed: cat.certified_orbits == 0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TauTripleReport {
    pub group: String,
    pub n: usize,
    /// Translation parts scanned up to permutation.
    pub scanned: usize,
    /// Translation parts whose common fixed space in `so(n)` is zero.
    pub without_invariant: usize,
    pub passed: bool,
}

/// Check that every commuting diagonal choice of `(tau_4, tau_5, tau_8)` in
/// `SO(n)` fixes a nonzero element of `so(n)`, which rules out certified
/// diagonal representations.
pub fn tau_triple_scan(n: usize) -> Result<TauTripleReport> {
    check_rank(n)?;
    let scanned = xor_free_multisets(n, 8).len();
    let without_invariant = translation_keys(n).len();
    Ok(TauTripleReport {
        group: format!("SO({n})"),
        n,
        scanned,
        without_invariant,
        passed: without_invariant == 0,
    })
}

/// Raw count of certified `SO(3)` tuples by inclusion-exclusion over the
/// ways the translation images can fail to generate the Klein group, or
/// `(gamma, delta)` can be trivial.
pub fn inclusion_exclusion_so3() -> i64 {
    let p = |b: i64, e: u32| b.pow(e);
    p(4, 5) - p(4, 3) - 3 * p(4, 2) * p(2, 3) + 3 * p(2, 3) + 2 * p(4, 2) - 2
}

/// Orbits grouped by their translation part, for summaries.
pub fn by_translation_part(cat: &OrbitCatalog) -> BTreeMap<Vec<u8>, usize> {
    let mut m = BTreeMap::new();
    for r in &cat.records {
        let mut tau: Vec<u8> = r.key.0.iter().map(|c| c >> 2).collect();
        tau.sort_unstable();
        *m.entry(tau).or_insert(0) += 1;
    }
    m
}
