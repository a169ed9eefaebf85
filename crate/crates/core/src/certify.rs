//! Representations of the orbifold fundamental group into `SO(n)` and the
//! exact computation of the deformation-complex invariants of the associated
//! flat connection.
//!
//! For a representation `rho` the three numbers are the dimensions of
//!
//! * `h0`: vectors of `so(n)` fixed by every `Ad rho(g)`,
//! * `h1`: vectors of `R^8 (x) so(n)` fixed by every `hol(g) (x) Ad rho(g)`,
//! * `h2`: vectors of `L7 (x) so(n)` fixed by every `L7(hol g) (x) Ad rho(g)`,
//!
//! where `L7` is the 7-dimensional piece of two-forms. Fixed subspaces of a
//! generating set are fixed subspaces of the group, so only the twelve
//! generators are used. The connection is certified when all three vanish.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::induced_matrix_on_lambda27;
use crate::linalg::{fixed_subspace, FixedSpace, QMatrix, SparseMatrix};
use crate::orbifold::{
    derived_relations, holonomy, Gen, Relation, Word, Alpha, Beta, Delta, Gamma, Tau, GENERATORS,
};
use crate::rational::{int, serde_rows, Rational};

/// Images of the twelve generators, in [`GENERATORS`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatRep {
    n: usize,
    images: Vec<QMatrix>,
}

impl FlatRep {
    pub fn new(n: usize, images: Vec<QMatrix>) -> Result<Self> {
        if images.len() != GENERATORS.len() {
            return Err(Error::Domain(format!(
                "need {} generator images, got {}",
                GENERATORS.len(),
                images.len()
            )));
        }
        if let Some(m) = images.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::Domain(format!(
                "image of size {}x{} in a rank-{n} representation",
                m.rows(),
                m.cols()
            )));
        }
        Ok(FlatRep { n, images })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(Gen) -> QMatrix) -> Result<Self> {
        Self::new(n, GENERATORS.iter().map(|&g| f(g)).collect())
    }

    /// The trivial representation.
    pub fn trivial(n: usize) -> Self {
        FlatRep {
            n,
            images: vec![QMatrix::identity(n); GENERATORS.len()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn image(&self, g: Gen) -> &QMatrix {
        &self.images[g.index()]
    }

    pub fn set_image(&mut self, g: Gen, m: QMatrix) {
        assert_eq!((m.rows(), m.cols()), (self.n, self.n));
        self.images[g.index()] = m;
    }

    pub fn images(&self) -> &[QMatrix] {
        &self.images
    }

    /// `rho(w)`, inverting letters by transposition (images are orthogonal).
    pub fn eval(&self, w: &Word) -> QMatrix {
        w.eval(
            |g| self.image(g).clone(),
            QMatrix::transpose,
            QMatrix::mul,
            QMatrix::identity(self.n),
        )
    }

    /// `h rho h^-1` for an orthogonal `h`.
    pub fn conjugate(&self, h: &QMatrix) -> Result<FlatRep> {
        if !h.is_orthogonal() || h.rows() != self.n {
            return Err(Error::Domain("conjugating matrix must be orthogonal of rank n".into()));
        }
        let ht = h.transpose();
        Ok(FlatRep {
            n: self.n,
            images: self.images.iter().map(|m| h.mul(m).mul(&ht)).collect(),
        })
    }

    /// Empty when every image lies in `SO(n)` and the relations hold.
    pub fn validate(&self) -> Vec<String> {
        self.validate_against(&derived_relations())
    }

    pub fn validate_against(&self, relations: &[Relation]) -> Vec<String> {
        let mut out = Vec::new();
        for (g, m) in GENERATORS.iter().zip(&self.images) {
            if !m.is_orthogonal() {
                out.push(format!("rho({}) is not orthogonal", g.name()));
            } else if !m.det().is_one() {
                out.push(format!("rho({}) has determinant {}", g.name(), m.det()));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for r in relations {
            if self.eval(&r.lhs) != self.eval(&r.rhs) {
                out.push(format!("relation fails: {r}"));
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.images.iter().all(QMatrix::is_diagonal)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImagesRepr {
    #[serde(with = "serde_rows")]
    alpha: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    beta: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    gamma: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    delta: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    tau1: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    tau2: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    tau3: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    tau4: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    tau5: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    tau6: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    tau7: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    tau8: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepRepr {
    n: usize,
    images: ImagesRepr,
}

impl Serialize for FlatRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = |g: Gen| self.image(g).to_rows();
        RepRepr {
            n: self.n,
            images: ImagesRepr {
                alpha: r(Alpha),
                beta: r(Beta),
                gamma: r(Gamma),
                delta: r(Delta),
                tau1: r(Tau(1)),
                tau2: r(Tau(2)),
                tau3: r(Tau(3)),
                tau4: r(Tau(4)),
                tau5: r(Tau(5)),
                tau6: r(Tau(6)),
                tau7: r(Tau(7)),
                tau8: r(Tau(8)),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FlatRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let RepRepr { n, images: im } = RepRepr::deserialize(d)?;
        let rows = [
            im.alpha, im.beta, im.gamma, im.delta, im.tau1, im.tau2, im.tau3, im.tau4, im.tau5,
            im.tau6, im.tau7, im.tau8,
        ];
        let mut images = Vec::with_capacity(12);
        for (g, r) in GENERATORS.iter().zip(rows) {
            if r.len() != n || r.iter().any(|row| row.len() != n) {
                return Err(D::Error::custom(format!("{} is not {n}x{n}", g.name())));
            }
            images.push(QMatrix::from_rows(r));
        }
        FlatRep::new(n, images).map_err(D::Error::custom)
    }
}

/// Basis `E_ij = e_i e_j^T - e_j e_i^T`, `i < j`, of `so(n)`, lexicographic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBasis {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl LieBasis {
    pub fn new(n: usize) -> Self {
        let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        LieBasis { n, pairs }
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Index of `E_ij` for `i < j` (0-based).
    pub fn index(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.n);
        // pairs before row i: sum_{r<i} (n-1-r)
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn element(&self, k: usize) -> QMatrix {
        let (i, j) = self.pairs[k];
        let mut m = QMatrix::zeros(self.n, self.n);
        m.set(i, j, Rational::one());
        m.set(j, i, -Rational::one());
        m
    }

    /// Antisymmetric matrix with the given coordinates.
    pub fn matrix(&self, coords: &[Rational]) -> QMatrix {
        let mut m = QMatrix::zeros(self.n, self.n);
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            m.set(i, j, coords[k].clone());
            m.set(j, i, -coords[k].clone());
        }
        m
    }

    /// Coordinates of an antisymmetric matrix.
    pub fn coords(&self, m: &QMatrix) -> Vec<Rational> {
        self.pairs.iter().map(|&(i, j)| m.get(i, j).clone()).collect()
    }
}

/// Matrix of `X -> g X g^T` on `so(n)` in the [`LieBasis`].
pub fn adjoint_matrix(g: &QMatrix) -> SparseMatrix {
    let n = g.rows();
    let basis = LieBasis::new(n);
    let cols: Vec<Vec<(usize, Rational)>> = (0..n)
        .map(|c| {
            (0..n)
                .filter(|&r| !g.get(r, c).is_zero())
                .map(|r| (r, g.get(r, c).clone()))
                .collect()
        })
        .collect();
    let mut trips = Vec::new();
    for (col, &(i, j)) in basis.pairs().iter().enumerate() {
        // g E_ij g^T = g_i g_j^T - g_j g_i^T, with g_k the k-th column of g.
        for (p, a) in &cols[i] {
            for (q, b) in &cols[j] {
                if p < q {
                    trips.push((basis.index(*p, *q), col, a * b));
                } else if p > q {
                    trips.push((basis.index(*q, *p), col, -(a * b)));
                }
            }
        }
    }
    SparseMatrix::from_triplets(basis.dim(), basis.dim(), trips)
}

struct GeomActions {
    hol: Vec<SparseMatrix>,
    lam: Vec<SparseMatrix>,
    lam_dense: Vec<QMatrix>,
    /// Diagonal entries of `hol` and `lam`; every generator acts diagonally
    /// on both, which the sign-counting path relies on.
    hol_signs: Vec<Vec<i8>>,
    lam_signs: Vec<Vec<i8>>,
}

fn diagonal_signs(m: &QMatrix) -> Vec<i8> {
    assert!(m.is_diagonal(), "expected a diagonal action");
    (0..m.rows())
        .map(|i| if m.get(i, i).is_positive() { 1 } else { -1 })
        .collect()
}

fn geom() -> &'static GeomActions {
    static G: OnceLock<GeomActions> = OnceLock::new();
    G.get_or_init(|| {
        let hol: Vec<QMatrix> = GENERATORS.iter().map(|&g| holonomy(g)).collect();
        let lam_dense: Vec<QMatrix> = hol
            .iter()
            .map(|h| induced_matrix_on_lambda27(h).expect("Gamma preserves the Cayley form"))
            .collect();
        GeomActions {
            hol_signs: hol.iter().map(diagonal_signs).collect(),
            lam_signs: lam_dense.iter().map(diagonal_signs).collect(),
            hol: hol.iter().map(SparseMatrix::from_dense).collect(),
            lam: lam_dense.iter().map(SparseMatrix::from_dense).collect(),
            lam_dense,
        }
    })
}

/// Action of a generator on the 7-piece of two-forms, basis `e_1..e_7`.
pub fn lambda27_action(g: Gen) -> &'static QMatrix {
    &geom().lam_dense[g.index()]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bases {
    #[serde(with = "serde_rows")]
    pub h0: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    pub h1: Vec<Vec<Rational>>,
    #[serde(with = "serde_rows")]
    pub h2: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub n: usize,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub irreducible: bool,
    pub rigid: bool,
    pub unobstructed: bool,
    pub certified: bool,
    /// Fixed-subspace bases; tensor coordinates are `(form index) * dim so(n) + (Lie index)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Bases>,
}

impl CertReport {
    fn from_spaces(n: usize, s0: FixedSpace, s1: FixedSpace, s2: FixedSpace, keep: bool) -> Self {
        let (h0, h1, h2) = (s0.dim(), s1.dim(), s2.dim());
        CertReport {
            n,
            h0,
            h1,
            h2,
            irreducible: h0 == 0,
            rigid: h1 == 0,
            unobstructed: h2 == 0,
            certified: h0 == 0 && h1 == 0 && h2 == 0,
            bases: keep.then_some(Bases {
                h0: s0.basis,
                h1: s1.basis,
                h2: s2.basis,
            }),
        }
    }
}

/// Validate, then compute `h0, h1, h2` with bases.
pub fn certify(rep: &FlatRep) -> Result<CertReport> {
    certify_with(rep, true)
}

pub fn certify_with(rep: &FlatRep, keep_bases: bool) -> Result<CertReport> {
    let violations = rep.validate();
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    Ok(certify_unchecked(rep, keep_bases))
}

/// Skips validation; for callers that build representations valid by
/// construction.
pub fn certify_unchecked(rep: &FlatRep, keep_bases: bool) -> CertReport {
    if rep.is_diagonal() {
        certify_diagonal(rep, keep_bases)
    } else {
        certify_general(rep, keep_bases)
    }
}

/// Row reduction over the sparse tensor actions; works for any representation.
pub fn certify_general(rep: &FlatRep, keep_bases: bool) -> CertReport {
    let d = LieBasis::new(rep.n()).dim();
    let geo = geom();
    let ads: Vec<SparseMatrix> = rep.images().iter().map(adjoint_matrix).collect();
    let s0 = fixed_subspace(&ads, d);
    let t1: Vec<SparseMatrix> = geo.hol.iter().zip(&ads).map(|(h, a)| h.kron(a)).collect();
    let s1 = fixed_subspace(&t1, 8 * d);
    let t2: Vec<SparseMatrix> = geo.lam.iter().zip(&ads).map(|(l, a)| l.kron(a)).collect();
    let s2 = fixed_subspace(&t2, 7 * d);
    CertReport::from_spaces(rep.n(), s0, s1, s2, keep_bases)
}

/// When every image is diagonal, `Ad rho(g)` is diagonal with entry
/// `s_i s_j` on `E_ij`, and so are the tensor actions. The invariant spaces
/// are then spanned by the basis vectors whose sign is `+1` for all twelve
/// generators, which is exact and much cheaper than elimination.
pub fn certify_diagonal(rep: &FlatRep, keep_bases: bool) -> CertReport {
    assert!(rep.is_diagonal(), "certify_diagonal needs diagonal images");
    let n = rep.n();
    let lie = LieBasis::new(n);
    let d = lie.dim();
    let geo = geom();
    let ad_signs: Vec<Vec<i8>> = rep
        .images()
        .iter()
        .map(|m| {
            let s = diagonal_signs(m);
            lie.pairs().iter().map(|&(i, j)| s[i] * s[j]).collect()
        })
        .collect();
    let fixed = |outer: Option<&[Vec<i8>]>, blocks: usize| {
        let ambient = blocks * d;
        let basis = (0..ambient)
            .filter(|&idx| {
                let (b, a) = (idx / d, idx % d);
                (0..GENERATORS.len())
                    .all(|g| outer.map_or(1, |o| o[g][b]) * ad_signs[g][a] == 1)
            })
            .map(|idx| {
                let mut v = vec![Rational::zero(); ambient];
                v[idx] = Rational::one();
                v
            })
            .collect();
        FixedSpace { ambient, basis }
    };
    let s0 = fixed(None, 1);
    let s1 = fixed(Some(&geo.hol_signs), 8);
    let s2 = fixed(Some(&geo.lam_signs), 7);
    CertReport::from_spaces(n, s0, s1, s2, keep_bases)
}

/// An explicit invariant vector `e_k (x) xi` in `L7 (x) so(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionWitness {
    /// Index `k` in `1..=7` of the basis form `e_k`.
    pub form: usize,
    /// Signs of `gamma` and `delta` on `e_k`, which `xi` shares under `Ad`.
    pub signs: (i8, i8),
    #[serde(with = "crate::rational::serde_vec")]
    pub lie: Vec<Rational>,
}

impl ObstructionWitness {
    /// Coordinates of `e_k (x) xi` in `L7 (x) so(n)`.
    pub fn tensor(&self) -> Vec<Rational> {
        let d = self.lie.len();
        let mut v = vec![Rational::zero(); 7 * d];
        for (a, x) in self.lie.iter().enumerate() {
            v[(self.form - 1) * d + a] = x.clone();
        }
        v
    }

    /// Check invariance under all twelve generators directly.
    pub fn verify(&self, rep: &FlatRep) -> bool {
        let v = self.tensor();
        if v.iter().all(Zero::is_zero) {
            return false;
        }
        GENERATORS.iter().all(|&g| {
            let act = geom().lam[g.index()].kron(&adjoint_matrix(rep.image(g)));
            act.mul_vec(&v) == v
        })
    }
}

/// All generators act diagonally on `e_1..e_7`, so each `e_k (x) so(n)` is
/// invariant and an obstruction lives in one of them. Returns the first
/// `e_k (x) xi` fixed by every generator, or `None` when `h2 = 0`.
pub fn obstruction_witness(rep: &FlatRep) -> Result<Option<ObstructionWitness>> {
    let violations = rep.validate();
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    Ok(obstruction_witnesses(rep).into_iter().next())
}

/// One witness per basis vector of each `e_k`-block's invariant space.
pub fn obstruction_witnesses(rep: &FlatRep) -> Vec<ObstructionWitness> {
    let d = LieBasis::new(rep.n()).dim();
    let ads: Vec<SparseMatrix> = rep.images().iter().map(adjoint_matrix).collect();
    let mut out = Vec::new();
    for k in 0..7 {
        // xi with Ad(g) xi = s_k(g) xi, i.e. fixed by s_k(g) Ad(g).
        let scaled: Vec<SparseMatrix> = GENERATORS
            .iter()
            .zip(&ads)
            .map(|(&g, a)| {
                let lam = lambda27_action(g);
                assert!(lam.is_diagonal(), "generators act diagonally on e_1..e_7");
                let s = lam.get(k, k).clone();
                SparseMatrix::from_dense(&a.to_dense().scale(&s))
            })
            .collect();
        let fs = fixed_subspace(&scaled, d);
        let signs = |g: Gen| if lambda27_action(g).get(k, k) == &int(1) { 1 } else { -1 };
        for lie in fs.basis {
            out.push(ObstructionWitness {
                form: k + 1,
                signs: (signs(Gamma), signs(Delta)),
                lie,
            });
        }
    }
    out
}

/// A non-abelian `SO(3)` representation: `gamma, delta` generate a dihedral
/// group of order 8 whose commutator is `rho(tau_1) = rho(tau_2)`.
pub fn dihedral_so3_example() -> FlatRep {
    let r = QMatrix::from_i64(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]]);
    let gamma = QMatrix::from_i64(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
    let delta = QMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]);
    FlatRep::from_fn(3, |g| match g {
        Gamma => gamma.clone(),
        Delta => delta.clone(),
        Tau(1) | Tau(2) | Tau(4) => r.clone(),
        _ => QMatrix::identity(3),
    })
    .expect("3x3 images")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fixed_subspace_dense;

    #[test]
    fn sign_counting_matches_elimination() {
        use crate::enumeration::scan::exhaustive_keys;
        for k in exhaustive_keys(3).into_iter().step_by(7) {
            let rep = k.tuple().expand();
            let fast = certify_diagonal(&rep, true);
            let slow = certify_general(&rep, false);
            assert_eq!((fast.h0, fast.h1, fast.h2), (slow.h0, slow.h1, slow.h2), "{k}");
        }
    }

    #[test]
    fn lie_index_matches_enumeration() {
        for n in 2..7 {
            let b = LieBasis::new(n);
            for (k, &(i, j)) in b.pairs().iter().enumerate() {
                assert_eq!(b.index(i, j), k);
            }
        }
    }

    #[test]
    fn adjoint_matches_conjugation() {
        let g = QMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]);
        let b = LieBasis::new(3);
        let ad = adjoint_matrix(&g).to_dense();
        for k in 0..3 {
            let direct = b.coords(&g.mul(&b.element(k)).mul(&g.transpose()));
            assert_eq!(ad.column(k), direct);
        }
    }

    #[test]
    fn trivial_rep_dimensions() {
        // Fixed vectors: so(n) itself, no invariant one-forms, no invariant L7 vectors.
        let rep = FlatRep::trivial(3);
        let c = certify(&rep).unwrap();
        assert_eq!((c.h0, c.h1, c.h2), (3, 0, 0));
    }

    #[test]
    fn dihedral_example_is_valid_and_obstructed() {
        let rep = dihedral_so3_example();
        assert!(rep.validate().is_empty(), "{:?}", rep.validate());
        let c = certify(&rep).unwrap();
        assert!(c.h2 > 0);
        let w = obstruction_witness(&rep).unwrap().unwrap();
        assert_eq!(w.signs, (-1, -1));
        assert!(w.verify(&rep));
    }

    #[test]
    fn sparse_fixed_space_matches_dense_oracle() {
        let rep = dihedral_so3_example();
        let ads: Vec<SparseMatrix> = rep.images().iter().map(adjoint_matrix).collect();
        let sparse = fixed_subspace(&ads, 3);
        let dense = fixed_subspace_dense(&ads.iter().map(|a| a.to_dense()).collect::<Vec<_>>(), 3);
        assert_eq!(sparse.dim(), dense.dim());
    }
}
