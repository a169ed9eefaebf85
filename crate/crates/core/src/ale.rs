//! Bundle bookkeeping on the ALE side of the gluing: bundle choice for a
//! boundary involution, the adjoint splitting, compatibility of gluing data,
//! Pontryagin coefficients and the index formula.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::certify::{certify_unchecked, FlatRep};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::orbifold::{singular_census, Census, Stratum, StratumType, Word};
use crate::rational::{int, serde_rat, Rational};

/// `E = m[L] + R^k` over Eguchi-Hanson space, where `[L]` is the real rank-2
/// bundle underlying the basic `U(1)` instanton. Its holonomy at infinity is
/// the involution with `2m` entries `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ALEBundleSpec {
    pub m: usize,
    pub k: usize,
}

impl ALEBundleSpec {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if 2 * m + k == 0 {
            return Err(Error::Domain("bundle rank must be positive".into()));
        }
        Ok(ALEBundleSpec { m, k })
    }

    pub fn n(&self) -> usize {
        2 * self.m + self.k
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 0
    }

    /// `diag(-1 x 2m, 1 x k)`.
    pub fn asymptotic_holonomy(&self) -> QMatrix {
        QMatrix::from_fn(self.n(), self.n(), |i, j| match (i == j, i < 2 * self.m) {
            (false, _) => int(0),
            (true, true) => int(-1),
            (true, false) => int(1),
        })
    }
}

/// Bundle whose holonomy at infinity is the diagonal involution `g`.
pub fn ale_bundle_for(g: &QMatrix) -> Result<ALEBundleSpec> {
    if !g.is_diagonal() {
        return Err(Error::Domain("expected a diagonal involution".into()));
    }
    ale_bundle_for_involution(g)
}

/// As [`ale_bundle_for`] for any involution in `SO(n)`; these are classified
/// up to conjugacy by the trace `n - 4m`.
pub fn ale_bundle_for_involution(g: &QMatrix) -> Result<ALEBundleSpec> {
    let n = g.rows();
    if n == 0 || g.cols() != n {
        return Err(Error::Domain("expected a non-empty square matrix".into()));
    }
    if !g.mul(g).is_identity() || !g.is_orthogonal() {
        return Err(Error::Domain("not an orthogonal involution".into()));
    }
    if g.det() != int(1) {
        return Err(Error::Domain("involution has determinant -1".into()));
    }
    // trace = n - 2 * (#-1 entries)
    let tr = g.trace().to_integer().to_i64().expect("small trace");
    let minus = (n as i64 - tr) / 2;
    if minus % 2 != 0 {
        return Err(Error::Domain("odd number of -1 eigenvalues".into()));
    }
    let m = (minus / 2) as usize;
    ALEBundleSpec::new(m, n - 2 * m)
}

/// Multiplicities in `Ad E = s0 R + s1 [L] + s2 [L^2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjointDecomposition {
    pub s0: usize,
    pub s1: usize,
    pub s2: usize,
}

impl AdjointDecomposition {
    /// Real rank: `s0 + 2 s1 + 2 s2`.
    pub fn rank(&self) -> usize {
        self.s0 + 2 * self.s1 + 2 * self.s2
    }
}

/// Weight count: `E_C` has weights `+1, -1` (m times each) and `0` (k times);
/// pairs in `Lambda^2` with sum `2`, `1`, `0` give `s2`, `s1`, `s0`.
pub fn adjoint_decomposition(spec: ALEBundleSpec) -> AdjointDecomposition {
    let mut w: Vec<i8> = Vec::with_capacity(spec.n());
    w.extend(std::iter::repeat_n(1, spec.m));
    w.extend(std::iter::repeat_n(-1, spec.m));
    w.extend(std::iter::repeat_n(0, spec.k));
    let mut d = AdjointDecomposition { s0: 0, s1: 0, s2: 0 };
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            match w[i] + w[j] {
                2 => d.s2 += 1,
                1 => d.s1 += 1,
                0 => d.s0 += 1,
                _ => {}
            }
        }
    }
    d
}

/// Independent oracle by peeling summands off `E`. With `E = E' + [L]`,
/// `Lambda^2 E = Lambda^2 E' + E' (x) [L] + R`, and `E' (x) [L]` contributes
/// `2(m-1)` trivial, `k` copies of `[L]` and `m-1` copies of `[L^2]`. With
/// `E = E' + R^2` the new terms are `2 E' + R`. Both routes are taken when
/// available and must agree.
pub fn adjoint_decomposition_recursive(m: usize, k: usize) -> AdjointDecomposition {
    if m == 0 {
        return AdjointDecomposition { s0: k * k.saturating_sub(1) / 2, s1: 0, s2: 0 };
    }
    let r = adjoint_decomposition_recursive(m - 1, k);
    let via_l = AdjointDecomposition {
        s0: r.s0 + 1 + 2 * (m - 1),
        s1: r.s1 + k,
        s2: r.s2 + m - 1,
    };
    if k >= 2 {
        let r = adjoint_decomposition_recursive(m, k - 2);
        let via_trivial = AdjointDecomposition {
            s0: r.s0 + 1 + 2 * (k - 2),
            s1: r.s1 + 2 * m,
            s2: r.s2,
        };
        assert_eq!(via_l, via_trivial, "recursion branches disagree at ({m}, {k})");
    }
    via_l
}

/// Topological inputs to the index formula, all supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexInputs {
    pub dim_g: i64,
    pub b0: i64,
    pub b1: i64,
    pub b2_7: i64,
    /// `int p1(M) p1(Ad P)`
    #[serde(rename = "I_pp", with = "serde_rat")]
    pub i_pp: Rational,
    /// `int p1(Ad P)^2`
    #[serde(rename = "I_p2", with = "serde_rat")]
    pub i_p2: Rational,
    /// `int p2(Ad P)`
    #[serde(rename = "I_q", with = "serde_rat")]
    pub i_q: Rational,
}

pub const INDEX_GROUPING: &str =
    "-dim_g*(b0 - b1 + b2_7) + I_pp/24 - (I_p2 - 2*I_q)/12";

/// `-dim g (b0 - b1 + b2_7) + I_pp/24 - (I_p2 - 2 I_q)/12`.
pub fn index_value(inp: &IndexInputs) -> Rational {
    let euler = int(inp.dim_g * (inp.b0 - inp.b1 + inp.b2_7));
    -euler + &inp.i_pp / int(24) - (&inp.i_p2 - int(2) * &inp.i_q) / int(12)
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub inputs: IndexInputs,
    pub grouping: &'static str,
    #[serde(with = "serde_rat")]
    pub value: Rational,
}

pub fn index_report(inp: IndexInputs) -> IndexReport {
    IndexReport { value: index_value(&inp), inputs: inp, grouping: INDEX_GROUPING }
}

/// Labels of the strata resolved with ALE data.
pub const ALE_LABELS: [usize; 4] = [73, 74, 75, 76];

/// Identifiers for the connected components `C1..C5` of the union of
/// singular neighbourhoods, each standing for a base point and framing.
pub fn default_framing() -> Vec<String> {
    (1..=5).map(|k| format!("C{k}")).collect()
}

/// A flat representation together with ALE-side choices on the strata
/// `73..=76`.
#[derive(Clone, Debug, Serialize)]
pub struct GluingData {
    pub rep: FlatRep,
    pub specs: BTreeMap<usize, ALEBundleSpec>,
    /// Energy of each ALE instanton over `8 pi^2`; zero for trivial bundles.
    #[serde(with = "serde_charge_map")]
    pub charges: BTreeMap<usize, Rational>,
    pub framing: Vec<String>,
    /// Claimed infinitesimal rigidity of the flat connection.
    pub rigid: bool,
}

mod serde_charge_map {
    use super::*;
    use crate::rational::RatRepr;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(m: &BTreeMap<usize, Rational>, s: S) -> Result<S::Ok, S::Error> {
        let out: BTreeMap<String, RatRepr> =
            m.iter().map(|(k, v)| (k.to_string(), RatRepr::from(v))).collect();
        out.serialize(s)
    }
}

/// Parse `{"73": q, ...}` where `q` is an integer, `{"num", "den"}` or a
/// string `"p/q"`.
pub fn parse_charges(json: &serde_json::Value) -> Result<BTreeMap<usize, Rational>> {
    let obj = json
        .as_object()
        .ok_or_else(|| Error::Domain("charges must be a JSON object".into()))?;
    let mut out = BTreeMap::new();
    for (key, v) in obj {
        let j: usize = key
            .parse()
            .ok()
            .filter(|j| ALE_LABELS.contains(j))
            .ok_or_else(|| Error::Domain(format!("charge label {key:?} is not one of 73..76")))?;
        let q = serde_rat::deserialize(v.clone())
            .map_err(|e| Error::Domain(format!("charge {key}: {e}")))?;
        out.insert(j, q);
    }
    Ok(out)
}

/// The census with each stratum's isotropy and neighbourhood words, built once.
struct StrataCache {
    census: Census,
    isotropy: BTreeMap<usize, Vec<Word>>,
    neighbourhood: BTreeMap<usize, Vec<Word>>,
}

fn strata() -> &'static StrataCache {
    static CACHE: OnceLock<StrataCache> = OnceLock::new();
    CACHE.get_or_init(|| {
        let census = singular_census();
        let isotropy = census.strata.iter().map(|s| (s.label, s.isotropy_words())).collect();
        let neighbourhood = census.strata.iter().map(|s| (s.label, s.neighbourhood_words())).collect();
        StrataCache { census, isotropy, neighbourhood }
    })
}

/// Asymptotic holonomy of the flat connection at a type-(i) stratum: the image
/// of the deck transformation fixing a generic point of the stratum.
pub fn stratum_holonomy(rep: &FlatRep, s: &Stratum) -> QMatrix {
    let words = &strata().isotropy[&s.label];
    assert_eq!(words.len(), 1, "a type-(i) stratum has cyclic isotropy of order 2");
    rep.eval(&words[0])
}

impl GluingData {
    /// Choose the ALE bundles from the holonomy at each type-(i) stratum;
    /// charges default to zero.
    pub fn from_rep(rep: FlatRep, charges: BTreeMap<usize, Rational>) -> Result<Self> {
        let violations = rep.validate();
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        let census = &strata().census;
        let mut specs = BTreeMap::new();
        for s in census.strata.iter().filter(|s| s.kind == StratumType::I) {
            specs.insert(s.label, ale_bundle_for_involution(&stratum_holonomy(&rep, s))?);
        }
        let mut all = BTreeMap::new();
        for j in ALE_LABELS {
            all.insert(j, charges.get(&j).cloned().unwrap_or_else(Rational::zero));
        }
        let rigid = certify_unchecked(&rep, false).rigid;
        Ok(GluingData { rep, specs, charges: all, framing: default_framing(), rigid })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionResult {
    pub condition: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumMonodromy {
    pub label: usize,
    pub kind: StratumType,
    /// Neighbourhood generators whose image is not the identity.
    pub nontrivial: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GluingReport {
    pub passed: bool,
    pub conditions: Vec<ConditionResult>,
    /// Strata among `1..=72` with nontrivial local monodromy.
    pub monodromy_failures: Vec<StratumMonodromy>,
    /// The weaker check that only looks at the images of the bare words
    /// `alpha`, `beta`, `alpha beta` on strata `1..=72` and compares the
    /// ALE holonomy with `rho(gamma)`, `rho(delta)`, ignoring the lattice
    /// translations needed to fix a point of the stratum.
    pub untwisted_passed: bool,
    pub decompositions: BTreeMap<usize, AdjointDecomposition>,
    /// Missing inputs that do not affect compatibility, such as charges.
    pub warnings: Vec<String>,
}

/// Check the gluing conditions:
/// (i) the flat connection is a valid representation and rigid;
/// (ii) one framing identifier per component `C1..C5`;
/// (iii) each ALE bundle on `73..=76` has the holonomy of the flat connection
///   at that stratum, with a positive charge exactly when it is nontrivial;
/// (iv) the local monodromy around every stratum `1..=72` is trivial.
pub fn check_compatible_gluing_data(data: &GluingData) -> GluingReport {
    let rep = &data.rep;
    let cache = strata();
    let census = &cache.census;
    let n = rep.n();

    let mut c1 = Vec::new();
    let violations = rep.validate();
    let valid = violations.is_empty();
    c1.extend(violations);
    if !data.rigid {
        c1.push("rigidity flag is not set".into());
    }
    if valid && !certify_unchecked(rep, false).rigid {
        c1.push("h1 != 0: the flat connection is not infinitesimally rigid".into());
    }

    let mut c2 = Vec::new();
    let mut tags = data.framing.clone();
    tags.sort();
    tags.dedup();
    if data.framing.len() != 5 || tags.len() != 5 || tags.iter().any(String::is_empty) {
        c2.push(format!("expected five distinct framing identifiers, got {:?}", data.framing));
    }

    let mut c3 = Vec::new();
    let mut warnings = Vec::new();
    let mut decompositions = BTreeMap::new();
    let mut untwisted = valid;
    let id = QMatrix::identity(n);
    for s in census.strata.iter().filter(|s| s.kind == StratumType::I) {
        let j = s.label;
        let Some(spec) = data.specs.get(&j) else {
            c3.push(format!("stratum {j}: no ALE bundle"));
            continue;
        };
        decompositions.insert(j, adjoint_decomposition(*spec));
        if spec.n() != n {
            c3.push(format!("stratum {j}: bundle rank {} but structure group SO({n})", spec.n()));
            continue;
        }
        let charge = data.charges.get(&j).cloned().unwrap_or_else(Rational::zero);
        if spec.is_trivial() && !charge.is_zero() {
            c3.push(format!("stratum {j}: trivial bundle with nonzero charge {charge}"));
        }
        if charge.is_negative() {
            c3.push(format!("stratum {j}: negative charge {charge}"));
        }
        if !spec.is_trivial() && charge.is_zero() {
            warnings.push(format!("stratum {j}: no charge given for a nontrivial bundle"));
        }
        if !valid {
            continue;
        }
        let hol = stratum_holonomy(rep, s);
        match ale_bundle_for_involution(&hol) {
            Ok(want) if want == *spec => {}
            Ok(want) => c3.push(format!(
                "stratum {j}: holonomy at infinity ({}, {}) but the flat connection has ({}, {})",
                spec.m, spec.k, want.m, want.k
            )),
            Err(e) => c3.push(format!("stratum {j}: {e}")),
        }
        let bare = rep.eval(&s.source);
        untwisted &= ale_bundle_for_involution(&bare).is_ok_and(|b| b == *spec);
    }

    let mut c4 = Vec::new();
    let mut monodromy_failures = Vec::new();
    if valid {
        for s in census.strata.iter().filter(|s| s.kind != StratumType::I) {
            let nontrivial: Vec<String> = cache.neighbourhood[&s.label]
                .iter()
                .filter(|w| rep.eval(w) != id)
                .map(ToString::to_string)
                .collect();
            untwisted &= rep.eval(&s.source) == id;
            if !nontrivial.is_empty() {
                c4.push(format!("stratum {}: nontrivial monodromy of {}", s.label, nontrivial.join(", ")));
                monodromy_failures.push(StratumMonodromy { label: s.label, kind: s.kind, nontrivial });
            }
        }
    } else {
        c4.push("skipped: invalid representation".into());
    }

    let conditions = vec![
        ConditionResult { condition: "i", passed: c1.is_empty(), failures: c1 },
        ConditionResult { condition: "ii", passed: c2.is_empty(), failures: c2 },
        ConditionResult { condition: "iii", passed: c3.is_empty(), failures: c3 },
        ConditionResult { condition: "iv", passed: c4.is_empty(), failures: c4 },
    ];
    GluingReport {
        passed: conditions.iter().all(|c| c.passed),
        conditions,
        monodromy_failures,
        untwisted_passed: untwisted,
        decompositions,
        warnings,
    }
}

/// Coefficients of `p1(Ad E_t)` on the Poincare duals of the strata
/// `73..=76`: `-k_j` where the ALE bundle is nontrivial. `p2(Ad E_t)` is zero.
#[derive(Clone, Debug, Serialize)]
pub struct PontryaginData {
    #[serde(with = "serde_charge_map")]
    pub p1: BTreeMap<usize, Rational>,
    #[serde(with = "serde_rat")]
    pub p2: Rational,
}

pub fn p1_coefficients(data: &GluingData) -> PontryaginData {
    let p1 = ALE_LABELS
        .iter()
        .map(|&j| {
            let nontrivial = data.specs.get(&j).is_some_and(|s| !s.is_trivial());
            let c = if nontrivial {
                -data.charges.get(&j).cloned().unwrap_or_else(Rational::zero)
            } else {
                Rational::zero()
            };
            (j, c)
        })
        .collect();
    PontryaginData { p1, p2: Rational::zero() }
}

/// Deliberate corruptions of valid gluing data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Flip the ALE bundle on stratum 75 between trivial and nontrivial.
    HolonomyMismatch,
    /// Send `tau_4` to a nontrivial diagonal involution; `tau_4` is part of
    /// the local monodromy at strata through points with `x_4 = 1/2`.
    InjectMonodromy,
    ClearRigidity,
}

pub const MUTATIONS: [Mutation; 3] =
    [Mutation::HolonomyMismatch, Mutation::InjectMonodromy, Mutation::ClearRigidity];

pub fn mutate(data: &GluingData, m: Mutation) -> Result<GluingData> {
    let mut out = data.clone();
    let n = data.rep.n();
    match m {
        Mutation::HolonomyMismatch => {
            let j = 75;
            let spec = data.specs.get(&j).copied().unwrap_or(ALEBundleSpec { m: 0, k: n });
            let flipped = if spec.is_trivial() {
                if n < 2 {
                    return Err(Error::Unsupported("SO(1) has no nontrivial involution".into()));
                }
                ALEBundleSpec { m: 1, k: n - 2 }
            } else {
                ALEBundleSpec { m: 0, k: n }
            };
            out.specs.insert(j, flipped);
        }
        Mutation::InjectMonodromy => {
            if n < 2 {
                return Err(Error::Unsupported("SO(1) has no nontrivial involution".into()));
            }
            let r = QMatrix::from_fn(n, n, |i, j| match (i == j, i < 2) {
                (false, _) => int(0),
                (true, true) => int(-1),
                (true, false) => int(1),
            });
            out.rep.set_image(crate::orbifold::Gen::Tau(4), r);
            let violations = out.rep.validate();
            if !violations.is_empty() {
                return Err(Error::Validation(violations));
            }
        }
        Mutation::ClearRigidity => out.rigid = false,
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn bundle_for_examples() {
        let g = QMatrix::diagonal(&[int(1), int(-1), int(-1)]);
        assert_eq!(ale_bundle_for(&g).unwrap(), ALEBundleSpec { m: 1, k: 1 });
        assert_eq!(ale_bundle_for(&QMatrix::identity(5)).unwrap(), ALEBundleSpec { m: 0, k: 5 });
        let minus = QMatrix::identity(4).scale(&int(-1));
        assert_eq!(ale_bundle_for(&minus).unwrap(), ALEBundleSpec { m: 2, k: 0 });
        let odd = QMatrix::diagonal(&[int(-1), int(1), int(1)]);
        assert!(ale_bundle_for(&odd).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let d = |m, k| adjoint_decomposition(ALEBundleSpec { m, k });
        assert_eq!(d(1, 1), AdjointDecomposition { s0: 1, s1: 1, s2: 0 });
        assert_eq!(d(2, 0), AdjointDecomposition { s0: 4, s1: 0, s2: 1 });
        assert_eq!(d(0, 6), AdjointDecomposition { s0: 15, s1: 0, s2: 0 });
    }

    #[test]
    fn index_examples() {
        let z = IndexInputs {
            dim_g: 0,
            b0: 0,
            b1: 0,
            b2_7: 0,
            i_pp: int(0),
            i_p2: int(0),
            i_q: int(0),
        };
        assert_eq!(index_value(&z), int(0));
        let a = IndexInputs { dim_g: 3, b0: 1, ..z.clone() };
        assert_eq!(index_value(&a), int(-3));
        let b = IndexInputs { i_pp: int(24), ..z.clone() };
        assert_eq!(index_value(&b), int(1));
        let c = IndexInputs { i_q: q(3, 1), ..z };
        assert_eq!(index_value(&c), q(1, 2));
    }
}
