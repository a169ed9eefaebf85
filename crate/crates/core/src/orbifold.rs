//! The group generated by `alpha, beta, gamma, delta` and the unit translations
//! `tau_1..tau_8` acting on R^8, its relations, and the singular strata of the
//! quotient of the torus `T^8 = R^8 / Z^8`.
//!
//! Maps are kept as lifts to R^8 (deck transformations); reduction mod `Z^8`
//! gives the induced map of the torus. Composition is `compose(f, g) = f o g`
//! and commutators are `[g, h] = g h g^-1 h^-1`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{fmt as rfmt, int, q, Rational, RatRepr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Alpha,
    Beta,
    Gamma,
    Delta,
    /// Unit translation along coordinate `1..=8`.
    Tau(u8),
}

pub use Gen::{Alpha, Beta, Delta, Gamma, Tau};

/// Generator order used for representation images everywhere in the crate.
pub const GENERATORS: [Gen; 12] = [
    Alpha,
    Beta,
    Gamma,
    Delta,
    Tau(1),
    Tau(2),
    Tau(3),
    Tau(4),
    Tau(5),
    Tau(6),
    Tau(7),
    Tau(8),
];

impl Gen {
    pub fn index(self) -> usize {
        match self {
            Alpha => 0,
            Beta => 1,
            Gamma => 2,
            Delta => 3,
            Tau(i) => 3 + i as usize,
        }
    }

    pub fn name(self) -> String {
        match self {
            Alpha => "alpha".into(),
            Beta => "beta".into(),
            Gamma => "gamma".into(),
            Delta => "delta".into(),
            Tau(i) => format!("tau{i}"),
        }
    }

    pub fn from_name(s: &str) -> Option<Gen> {
        GENERATORS.iter().copied().find(|g| g.name() == s)
    }

    pub fn map(self) -> AffineMap {
        match self {
            Alpha => AffineMap::diagonal([-1, -1, -1, -1, 1, 1, 1, 1], [0; 8]),
            Beta => AffineMap::diagonal([1, 1, 1, 1, -1, -1, -1, -1], [0; 8]),
            Gamma => AffineMap::diagonal([-1, -1, 1, 1, -1, -1, 1, 1], [1, 1, 0, 0, 1, 1, 0, 0]),
            Delta => AffineMap::diagonal([-1, 1, -1, 1, -1, 1, -1, 1], [0, 0, 1, 0, 1, 0, 1, 0]),
            Tau(i) => {
                let mut t = [0; 8];
                t[i as usize - 1] = 2;
                AffineMap::diagonal([1; 8], t)
            }
        }
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: Gen) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn inv(gen: Gen) -> Self {
        Letter { gen, inverse: true }
    }
}

/// Product of letters, read left to right as composition: `[a, b]` is `a o b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gens(gens: &[Gen]) -> Self {
        Word(gens.iter().map(|&g| Letter::new(g)).collect())
    }

    pub fn then(mut self, other: &Word) -> Self {
        self.0.extend(other.0.iter().copied());
        self
    }

    pub fn inverse(&self) -> Self {
        Word(
            self.0
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    inverse: !l.inverse,
                })
                .collect(),
        )
    }

    pub fn commutator(g: Gen, h: Gen) -> Self {
        Word(vec![
            Letter::new(g),
            Letter::new(h),
            Letter::inv(g),
            Letter::inv(h),
        ])
    }

    /// Evaluate in any group given images of the generators.
    pub fn eval<T: Clone>(
        &self,
        image: impl Fn(Gen) -> T,
        inverse: impl Fn(&T) -> T,
        mul: impl Fn(&T, &T) -> T,
        identity: T,
    ) -> T {
        let mut acc = identity;
        for l in &self.0 {
            let x = image(l.gen);
            let x = if l.inverse { inverse(&x) } else { x };
            acc = mul(&acc, &x);
        }
        acc
    }

    pub fn to_map(&self) -> AffineMap {
        self.eval(Gen::map, AffineMap::inverse, AffineMap::compose, AffineMap::identity())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", l.gen.name())
                } else {
                    l.gen.name()
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `x -> L x + t` on R^8 with `L` a signed permutation:
/// `(L x)_i = sign[i] * x[perm[i]]`, and `t = half / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    perm: [u8; 8],
    sign: [i8; 8],
    half: [i64; 8],
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            perm: [0, 1, 2, 3, 4, 5, 6, 7],
            sign: [1; 8],
            half: [0; 8],
        }
    }

    /// Diagonal linear part; translation given in units of 1/2.
    pub fn diagonal(sign: [i8; 8], half: [i64; 8]) -> Self {
        AffineMap {
            perm: [0, 1, 2, 3, 4, 5, 6, 7],
            sign,
            half,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    pub fn signs(&self) -> [i8; 8] {
        self.sign
    }

    pub fn translation(&self) -> [Rational; 8] {
        self.half.map(|h| q(h, 2))
    }

    /// Translation part in units of 1/2.
    pub fn translation_halves(&self) -> [i64; 8] {
        self.half
    }

    pub fn linear_matrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(8, 8);
        for i in 0..8 {
            m.set(i, self.perm[i] as usize, int(self.sign[i] as i64));
        }
        m
    }

    pub fn compose(&self, g: &AffineMap) -> AffineMap {
        let mut out = AffineMap::identity();
        for i in 0..8 {
            let pi = self.perm[i] as usize;
            out.perm[i] = g.perm[pi];
            out.sign[i] = self.sign[i] * g.sign[pi];
            out.half[i] = self.sign[i] as i64 * g.half[pi] + self.half[i];
        }
        out
    }

    pub fn inverse(&self) -> AffineMap {
        let mut out = AffineMap::identity();
        for i in 0..8 {
            let j = self.perm[i] as usize;
            out.perm[j] = i as u8;
            out.sign[j] = self.sign[i];
            out.half[j] = -(self.sign[i] as i64) * self.half[i];
        }
        out
    }

    /// The induced map of `T^8`: translation reduced into `[0, 1)`.
    pub fn reduced(&self) -> AffineMap {
        let mut out = self.clone();
        for h in &mut out.half {
            *h = h.rem_euclid(2);
        }
        out
    }

    pub fn eq_mod_lattice(&self, other: &AffineMap) -> bool {
        self.reduced() == other.reduced()
    }

    pub fn is_translation(&self) -> bool {
        self.is_diagonal() && self.sign.iter().all(|&s| s == 1)
    }

    pub fn apply(&self, x: &[Rational; 8]) -> [Rational; 8] {
        std::array::from_fn(|i| {
            int(self.sign[i] as i64) * &x[self.perm[i] as usize] + q(self.half[i], 2)
        })
    }

    /// Integer translation vector as a word in the `tau_i`, or `None` when the
    /// map is not an integral translation.
    pub fn as_tau_word(&self) -> Option<Word> {
        if !self.is_translation() || self.half.iter().any(|h| h % 2 != 0) {
            return None;
        }
        let mut w = Vec::new();
        for (i, &h) in self.half.iter().enumerate() {
            let k = h / 2;
            let letter = if k > 0 {
                Letter::new(Tau(i as u8 + 1))
            } else {
                Letter::inv(Tau(i as u8 + 1))
            };
            for _ in 0..k.abs() {
                w.push(letter);
            }
        }
        Some(Word(w))
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..8)
            .map(|i| {
                let var = format!("x{}", self.perm[i] + 1);
                let lin = if self.sign[i] < 0 { format!("-{var}") } else { var };
                let t = q(self.half[i], 2);
                if t.is_zero() {
                    lin
                } else if t.is_negative() {
                    format!("{lin}-{}", rfmt(&-t))
                } else {
                    format!("{lin}+{}", rfmt(&t))
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct AffineMapRepr {
    linear: Vec<Vec<i8>>,
    translation: Vec<RatRepr>,
}

impl Serialize for AffineMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut linear = vec![vec![0i8; 8]; 8];
        for i in 0..8 {
            linear[i][self.perm[i] as usize] = self.sign[i];
        }
        AffineMapRepr {
            linear,
            translation: self.translation().iter().map(RatRepr::from).collect(),
        }
        .serialize(s)
    }
}

/// One defining relation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// Family number 1..=7 in the usual presentation order: translations
    /// commute, involutions, commutators, then how each of alpha, beta, gamma,
    /// delta conjugates the translations.
    pub family: u8,
    pub lhs: Word,
    pub rhs: Word,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

fn tau_inv_word(idx: &[u8]) -> Word {
    Word(idx.iter().map(|&i| Letter::inv(Tau(i))).collect())
}

/// Relations in the form they are usually stated for this group.
pub fn stated_relations() -> Vec<Relation> {
    let mut out = Vec::new();
    for i in 1..=8u8 {
        for j in i + 1..=8 {
            out.push(Relation {
                family: 1,
                lhs: Word::commutator(Tau(i), Tau(j)),
                rhs: Word::identity(),
            });
        }
    }
    for g in [Alpha, Beta, Gamma, Delta] {
        out.push(Relation {
            family: 2,
            lhs: Word::gens(&[g, g]),
            rhs: Word::identity(),
        });
    }
    let comms = [
        (Alpha, Beta, Word::identity()),
        (Alpha, Gamma, tau_inv_word(&[2, 1])),
        (Alpha, Delta, tau_inv_word(&[3])),
        (Beta, Gamma, tau_inv_word(&[6, 5])),
        (Beta, Delta, tau_inv_word(&[7])),
        (Gamma, Delta, Word::gens(&[Tau(1)])),
    ];
    for (g, h, rhs) in comms {
        out.push(Relation {
            family: 3,
            lhs: Word::commutator(g, h),
            rhs,
        });
    }
    let inverted: [(Gen, &[u8]); 4] = [
        (Alpha, &[1, 2, 3, 4]),
        (Beta, &[5, 6, 7, 8]),
        (Gamma, &[1, 2, 5, 6]),
        (Delta, &[1, 3, 5, 7]),
    ];
    for (family, (g, inv)) in (4u8..).zip(inverted) {
        for i in 1..=8u8 {
            let rhs = if inv.contains(&i) {
                Word(vec![Letter::inv(Tau(i)), Letter::new(g)])
            } else {
                Word::gens(&[Tau(i), g])
            };
            out.push(Relation {
                family,
                lhs: Word::gens(&[g, Tau(i)]),
                rhs,
            });
        }
    }
    out
}

/// Relations whose right-hand sides are recomputed from the maps themselves.
/// Only commutators of the four involutions can differ from the stated form;
/// these are integral translations and are rewritten as `tau` words.
pub fn derived_relations() -> Vec<Relation> {
    stated_relations()
        .into_iter()
        .map(|mut r| {
            if r.family == 3 {
                r.rhs = r
                    .lhs
                    .to_map()
                    .as_tau_word()
                    .expect("commutators of the involutions are lattice translations");
            }
            r
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Identity of lifts to R^8.
    Lifted,
    /// Identity of the induced maps of `T^8`.
    Torus,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationFailure {
    pub family: u8,
    pub relation: String,
    pub lhs: AffineMap,
    pub rhs: AffineMap,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub level: Level,
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_relations(relations: &[Relation], level: Level) -> RelationReport {
    let failures = relations
        .iter()
        .filter_map(|r| {
            let (l, rh) = (r.lhs.to_map(), r.rhs.to_map());
            let ok = match level {
                Level::Lifted => l == rh,
                Level::Torus => l.eq_mod_lattice(&rh),
            };
            (!ok).then(|| RelationFailure {
                family: r.family,
                relation: r.to_string(),
                lhs: l,
                rhs: rh,
            })
        })
        .collect();
    RelationReport {
        level,
        checked: relations.len(),
        failures,
    }
}

/// The 16 elements `alpha^a beta^b gamma^c delta^d` (as words), identity first.
pub fn finite_quotient_words() -> Vec<Word> {
    let mut out = Vec::with_capacity(16);
    for bits in 0u8..16 {
        let gens: Vec<Gen> = [Alpha, Beta, Gamma, Delta]
            .into_iter()
            .enumerate()
            .filter(|(k, _)| bits >> k & 1 == 1)
            .map(|(_, g)| g)
            .collect();
        out.push(Word::gens(&gens));
    }
    out
}

fn mod1(x: &Rational) -> Rational {
    x - x.floor()
}

/// A connected component of the fixed set of a torus map: the affine subtorus
/// where the constrained coordinates take fixed values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedComponent {
    /// Per coordinate: `Some(value in [0,1))` if constrained, `None` if free.
    coords: [Option<Rational>; 8],
}

impl FixedComponent {
    pub fn dim(&self) -> usize {
        self.coords.iter().filter(|c| c.is_none()).count()
    }

    pub fn coords(&self) -> &[Option<Rational>; 8] {
        &self.coords
    }

    pub fn contains(&self, x: &[Rational; 8]) -> bool {
        self.coords
            .iter()
            .zip(x)
            .all(|(c, v)| c.as_ref().is_none_or(|c| mod1(v) == *c))
    }

    /// A point on the component: free coordinates are set to `free_values`.
    pub fn point_with(&self, free_values: &[Rational; 8]) -> [Rational; 8] {
        std::array::from_fn(|i| match &self.coords[i] {
            Some(v) => v.clone(),
            None => free_values[i].clone(),
        })
    }

    /// Image under a torus map.
    pub fn image(&self, g: &AffineMap) -> FixedComponent {
        let t = g.translation();
        FixedComponent {
            coords: std::array::from_fn(|i| {
                self.coords[g.perm[i] as usize]
                    .as_ref()
                    .map(|v| mod1(&(int(g.sign[i] as i64) * v + &t[i])))
            }),
        }
    }
}

impl fmt::Display for FixedComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| c.as_ref().map_or("*".to_string(), rfmt))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Components of `{x in T^8 : g(x) = x}` for a map with diagonal linear part.
pub fn fixed_point_components(g: &AffineMap) -> Result<Vec<FixedComponent>> {
    if !g.is_diagonal() {
        return Err(Error::Unsupported(
            "fixed components for non-diagonal linear parts".into(),
        ));
    }
    let t = g.translation();
    let mut choices: Vec<Vec<Option<Rational>>> = Vec::with_capacity(8);
    for (i, ti) in t.iter().enumerate() {
        let ti = mod1(ti);
        if g.sign[i] == 1 {
            if !ti.is_zero() {
                return Ok(Vec::new());
            }
            choices.push(vec![None]);
        } else {
            // 2x = t mod 1
            let a = &ti / int(2);
            choices.push(vec![Some(a.clone()), Some(mod1(&(a + q(1, 2))))]);
        }
    }
    let mut out = vec![Vec::<Option<Rational>>::new()];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                c.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    let mut comps: Vec<FixedComponent> = out
        .into_iter()
        .map(|v| FixedComponent {
            coords: v.try_into().expect("eight coordinates"),
        })
        .collect();
    comps.sort();
    Ok(comps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StratumType {
    /// Fixed four-tori of `gamma` and `delta`: resolved with non-flat data.
    #[serde(rename = "i")]
    I,
    /// Fixed four-tori of `alpha` and `beta`.
    #[serde(rename = "ii")]
    II,
    /// Isolated fixed points of `alpha beta`.
    #[serde(rename = "iii")]
    III,
}

#[derive(Clone, Debug)]
pub struct Stratum {
    /// 1-based label.
    pub label: usize,
    pub kind: StratumType,
    pub source: Word,
    pub neighbourhood: &'static str,
    /// The components of the orbit, sorted; the first is the base component.
    pub components: Vec<FixedComponent>,
}

impl Stratum {
    /// A generic point of the base component, lifted to R^8.
    pub fn base_point(&self) -> [Rational; 8] {
        let generic: [Rational; 8] = std::array::from_fn(|i| q(1, 11 + 2 * i as i64));
        self.components[0].point_with(&generic)
    }

    /// The non-trivial deck transformations fixing the base point, each written
    /// as a translation word followed by an element of the finite quotient.
    /// Their images under a representation are the monodromies around this
    /// stratum.
    pub fn isotropy_words(&self) -> Vec<Word> {
        let p = self.base_point();
        let mut out = Vec::new();
        for w in finite_quotient_words().into_iter().skip(1) {
            let m = w.to_map();
            let image = m.apply(&p);
            let diff: Vec<Rational> = p.iter().zip(&image).map(|(a, b)| a - b).collect();
            if diff.iter().all(|d| d.is_integer()) {
                let shift = AffineMap::diagonal(
                    [1; 8],
                    std::array::from_fn(|i| {
                        let v: i64 = diff[i].to_integer().try_into().expect("small shift");
                        2 * v
                    }),
                );
                let t = shift.as_tau_word().expect("integral");
                let word = t.then(&w);
                debug_assert_eq!(word.to_map().apply(&p), p);
                out.push(word);
            }
        }
        out
    }

    /// Generators of the deck group of a tubular neighbourhood of the base
    /// component: unit translations along its free directions, and for each
    /// quotient element preserving the component, the lift that preserves the
    /// lifted affine subspace through the base point. The local fundamental
    /// group away from the stratum maps onto this group.
    pub fn neighbourhood_words(&self) -> Vec<Word> {
        let p = self.base_point();
        let coords = self.components[0].coords();
        let mut out: Vec<Word> = (0..8u8)
            .filter(|&i| coords[i as usize].is_none())
            .map(|i| Word::gens(&[Gen::Tau(i + 1)]))
            .collect();
        for w in finite_quotient_words().into_iter().skip(1) {
            let image = w.to_map().apply(&p);
            let mut halves = [0i64; 8];
            let mut preserves = true;
            for i in 0..8 {
                if coords[i].is_none() {
                    continue;
                }
                let d = &p[i] - &image[i];
                if !d.is_integer() {
                    preserves = false;
                    break;
                }
                halves[i] = 2 * i64::try_from(d.to_integer()).expect("small shift");
            }
            if preserves {
                let t = AffineMap::diagonal([1; 8], halves).as_tau_word().expect("integral");
                out.push(t.then(&w));
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub source: String,
    pub kind: StratumType,
    pub component_dim: usize,
    pub components: usize,
    pub orbits: usize,
    pub orbit_size: usize,
    pub neighbourhood: String,
    pub labels: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub rows: Vec<CensusRow>,
    pub strata: Vec<Stratum>,
}

const NBHD_I: &str = "T^4 x B^4/{+-1}";
const NBHD_II: &str = "T^4/{+-1} x B^4/{+-1}";
const NBHD_III: &str = "B^4/{+-1} x B^4/{+-1}";

fn orbits(comps: &[FixedComponent], acting: &[AffineMap]) -> Vec<Vec<FixedComponent>> {
    let all: BTreeSet<&FixedComponent> = comps.iter().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in comps {
        if seen.contains(c) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut queue = VecDeque::from([c.clone()]);
        while let Some(x) = queue.pop_front() {
            if !orbit.insert(x.clone()) {
                continue;
            }
            for g in acting {
                let y = x.image(g);
                assert!(all.contains(&y), "group action leaves the fixed set");
                queue.push_back(y);
            }
        }
        seen.extend(orbit.iter().cloned());
        out.push(orbit.into_iter().collect());
    }
    out
}

/// Fixed tori and points of `alpha, beta, alpha beta, gamma, delta` on `T^8`,
/// grouped into orbits of the finite quotient and labelled `1..=76`:
/// type (ii) first, then type (iii), then type (i).
pub fn singular_census() -> Census {
    let acting: Vec<AffineMap> = [Alpha, Beta, Gamma, Delta].map(Gen::map).to_vec();
    let sources: [(Word, StratumType, &'static str); 5] = [
        (Word::gens(&[Alpha]), StratumType::II, NBHD_II),
        (Word::gens(&[Beta]), StratumType::II, NBHD_II),
        (Word::gens(&[Alpha, Beta]), StratumType::III, NBHD_III),
        (Word::gens(&[Gamma]), StratumType::I, NBHD_I),
        (Word::gens(&[Delta]), StratumType::I, NBHD_I),
    ];
    let mut rows = Vec::new();
    let mut strata = Vec::new();
    let mut next_label = 1;
    for (word, kind, nbhd) in sources {
        let comps = fixed_point_components(&word.to_map().reduced()).expect("diagonal");
        let orbs = orbits(&comps, &acting);
        let size = orbs[0].len();
        assert!(orbs.iter().all(|o| o.len() == size));
        let labels: Vec<usize> = (next_label..next_label + orbs.len()).collect();
        for (label, o) in labels.iter().zip(orbs) {
            strata.push(Stratum {
                label: *label,
                kind,
                source: word.clone(),
                neighbourhood: nbhd,
                components: o,
            });
        }
        next_label += labels.len();
        rows.push(CensusRow {
            source: word.to_string().replace(' ', "*"),
            kind,
            component_dim: comps[0].dim(),
            components: comps.len(),
            orbits: labels.len(),
            orbit_size: size,
            neighbourhood: nbhd.to_string(),
            labels,
        });
    }
    Census { rows, strata }
}

/// Holonomy of a generator: its linear part (translations act trivially).
pub fn holonomy(g: Gen) -> QMatrix {
    g.map().linear_matrix()
}

/// Counts by type, for quick summaries.
pub fn census_type_counts(c: &Census) -> BTreeMap<StratumType, usize> {
    let mut m = BTreeMap::new();
    for s in &c.strata {
        *m.entry(s.kind).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_delta_commutator_is_tau1() {
        let c = Word::commutator(Gamma, Delta).to_map();
        assert_eq!(c, Tau(1).map());
    }

    #[test]
    fn generators_are_involutions_on_r8() {
        for g in [Alpha, Beta, Gamma, Delta] {
            assert_eq!(g.map().compose(&g.map()), AffineMap::identity());
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let w = Word::gens(&[Gamma, Tau(3), Delta, Alpha]).to_map();
        assert_eq!(w.compose(&w.inverse()), AffineMap::identity());
        assert_eq!(w.inverse().compose(&w), AffineMap::identity());
    }

    #[test]
    fn fixed_points_of_gamma() {
        let comps = fixed_point_components(&Gamma.map()).unwrap();
        assert_eq!(comps.len(), 16);
        assert!(comps.iter().all(|c| c.dim() == 4));
        for c in &comps {
            assert_eq!(c.image(&Gamma.map()), *c);
        }
    }

    #[test]
    fn tau_word_round_trip() {
        let m = Word(vec![Letter::inv(Tau(2)), Letter::new(Tau(5)), Letter::new(Tau(5))]).to_map();
        let w = m.as_tau_word().unwrap();
        assert_eq!(w.to_map(), m);
    }
}
