//! Exterior algebra of R^8 with exact coefficients, the Cayley four-form and
//! the splitting of two-forms into the 7- and 21-dimensional pieces.
//!
//! Coordinates are indexed 1..=8. A basis monomial `dx_I` is stored under its
//! increasing index tuple `I`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::QMatrix;
use crate::rational::{fmt as rfmt, int, q, Rational, RatRepr};

pub const DIM: u8 = 8;

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
fn sort_sign(idx: &mut [u8]) -> Option<i8> {
    let mut sign = 1i8;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct KForm {
    degree: usize,
    terms: BTreeMap<Vec<u8>, Rational>,
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let name: String = idx.iter().map(|i| i.to_string()).collect();
                format!("{}*dx{}", rfmt(c), name)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        KForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `coeff * dx_{i_1} ^ ... ^ dx_{i_k}` for an arbitrary index order.
    pub fn monomial(idx: &[u8], coeff: Rational) -> Result<Self, Error> {
        if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > DIM) {
            return Err(Error::Domain(format!("form index {bad} outside 1..=8")));
        }
        let mut sorted = idx.to_vec();
        let mut form = KForm::zero(idx.len());
        if let Some(sign) = sort_sign(&mut sorted) {
            form.add_term(sorted, coeff * int(sign as i64));
        }
        Ok(form)
    }

    /// Basis monomial with coefficient one. Panics on a bad index; meant for
    /// literals in code.
    pub fn dx(idx: &[u8]) -> Self {
        Self::monomial(idx, Rational::one()).expect("valid index literal")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coeff(&self, idx: &[u8]) -> Rational {
        self.terms.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, idx: Vec<u8>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &KForm) -> Result<KForm, Error> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Domain(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        if out.is_zero() {
            out.degree = other.degree;
        }
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KForm) -> Result<KForm, Error> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> KForm {
        let mut out = KForm::zero(self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c * s);
        }
        out
    }

    pub fn wedge(&self, other: &KForm) -> KForm {
        let mut out = KForm::zero(self.degree + other.degree);
        if out.degree > DIM as usize {
            return out;
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut joined: Vec<u8> = a.iter().chain(b.iter()).copied().collect();
                if let Some(sign) = sort_sign(&mut joined) {
                    out.add_term(joined, ca * cb * int(sign as i64));
                }
            }
        }
        out
    }

    /// Hodge star for the Euclidean metric and orientation `dx_12345678`:
    /// `*dx_I = sign(I, I^c) dx_{I^c}`.
    pub fn hodge(&self) -> KForm {
        let mut out = KForm::zero(DIM as usize - self.degree);
        for (idx, c) in &self.terms {
            let comp: Vec<u8> = (1..=DIM).filter(|i| !idx.contains(i)).collect();
            let mut joined: Vec<u8> = idx.iter().chain(comp.iter()).copied().collect();
            let sign = sort_sign(&mut joined).expect("complement is disjoint");
            out.add_term(comp, c * int(sign as i64));
        }
        out
    }

    /// Pointwise inner product; the `dx_I` are orthonormal.
    pub fn inner(&self, other: &KForm) -> Rational {
        self.terms
            .iter()
            .filter_map(|(idx, c)| other.terms.get(idx).map(|d| c * d))
            .sum()
    }

    /// Pullback along the linear map `x -> m x`: `m^* dx_i = sum_j m_ij dx_j`.
    pub fn pullback(&self, m: &QMatrix) -> Result<KForm, Error> {
        if m.rows() != DIM as usize || m.cols() != DIM as usize {
            return Err(Error::Domain("pullback needs an 8x8 matrix".into()));
        }
        if !m.is_orthogonal() {
            return Err(Error::Domain("pullback needs an orthogonal matrix".into()));
        }
        let ones: Vec<KForm> = (0..DIM as usize)
            .map(|i| {
                let mut f = KForm::zero(1);
                for j in 0..DIM as usize {
                    f.add_term(vec![j as u8 + 1], m.get(i, j).clone());
                }
                f
            })
            .collect();
        let mut out = KForm::zero(self.degree);
        for (idx, c) in &self.terms {
            let mut acc = KForm::zero(0);
            acc.add_term(Vec::new(), c.clone());
            for &i in idx {
                acc = acc.wedge(&ones[i as usize - 1]);
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

/// The volume form `dx_12345678`.
pub fn volume() -> KForm {
    KForm::dx(&[1, 2, 3, 4, 5, 6, 7, 8])
}

const CAYLEY_TERMS: [([u8; 4], i64); 14] = [
    ([1, 2, 3, 4], 1),
    ([1, 2, 5, 6], 1),
    ([1, 2, 7, 8], 1),
    ([1, 3, 5, 7], 1),
    ([1, 3, 6, 8], -1),
    ([1, 4, 5, 8], -1),
    ([1, 4, 6, 7], -1),
    ([2, 3, 5, 8], -1),
    ([2, 3, 6, 7], -1),
    ([2, 4, 5, 7], -1),
    ([2, 4, 6, 8], 1),
    ([3, 4, 5, 6], 1),
    ([3, 4, 7, 8], 1),
    ([5, 6, 7, 8], 1),
];

/// Which reading of the printed shorthand `dx_ijkl` builds the Cayley form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `dx_ijkl = dx_i ^ dx_j ^ dx_k ^ dx_l`.
    Standard,
    /// `dx_ijkl = dx_i ^ dx_j ^ dx_l ^ dx_k`, the order as literally printed
    /// in some sources. Every monomial flips sign.
    SwappedLastPair,
}

pub fn cayley_form_with(conv: Convention) -> KForm {
    let mut out = KForm::zero(4);
    for (idx, c) in CAYLEY_TERMS {
        let order = match conv {
            Convention::Standard => idx,
            Convention::SwappedLastPair => [idx[0], idx[1], idx[3], idx[2]],
        };
        out = out
            .add(&KForm::monomial(&order, int(c)).expect("static index"))
            .expect("same degree");
    }
    out
}

/// The Cayley form `Omega_0` in the standard convention.
pub fn cayley_form() -> KForm {
    static OMEGA: OnceLock<KForm> = OnceLock::new();
    OMEGA.get_or_init(|| cayley_form_with(Convention::Standard)).clone()
}

/// Lexicographic basis `dx_ij`, `i < j`, of two-forms.
pub fn two_form_basis() -> Vec<[u8; 2]> {
    let mut out = Vec::with_capacity(28);
    for i in 1..=DIM {
        for j in i + 1..=DIM {
            out.push([i, j]);
        }
    }
    out
}

pub fn two_form_to_vec(f: &KForm) -> Vec<Rational> {
    two_form_basis().iter().map(|ij| f.coeff(ij)).collect()
}

pub fn vec_to_two_form(v: &[Rational]) -> KForm {
    let mut out = KForm::zero(2);
    for (ij, c) in two_form_basis().iter().zip(v) {
        out.add_term(ij.to_vec(), c.clone());
    }
    out
}

/// `S(a) = *(Omega ^ a)` on two-forms, using the given four-form.
pub fn s_operator(omega: &KForm, a: &KForm) -> Result<KForm, Error> {
    if a.degree() != 2 {
        return Err(Error::Domain(format!("S acts on 2-forms, got degree {}", a.degree())));
    }
    Ok(omega.wedge(a).hodge())
}

/// Matrix of `S` in the lexicographic basis; column `j` is `S(dx_j)`.
pub fn s_matrix_for(omega: &KForm) -> QMatrix {
    let basis = two_form_basis();
    let cols: Vec<Vec<Rational>> = basis
        .iter()
        .map(|ij| two_form_to_vec(&omega.wedge(&KForm::dx(ij)).hodge()))
        .collect();
    QMatrix::from_fn(28, 28, |r, c| cols[c][r].clone())
}

pub fn s_matrix() -> QMatrix {
    static S: OnceLock<QMatrix> = OnceLock::new();
    S.get_or_init(|| s_matrix_for(&cayley_form())).clone()
}

/// Orthogonal projection onto the eigenvalue-3 piece: `(S + 1)/4`.
pub fn projector7() -> QMatrix {
    s_matrix()
        .add(&QMatrix::identity(28))
        .scale(&q(1, 4))
}

/// Orthogonal projection onto the eigenvalue-(-1) piece: `(3 - S)/4`.
pub fn projector21() -> QMatrix {
    QMatrix::identity(28)
        .scale(&int(3))
        .sub(&s_matrix())
        .scale(&q(1, 4))
}

/// `(S - 3)/4`, the 21-projector with its overall sign flipped. On the 21-piece
/// it is minus the identity, so it is not a projection; kept for comparison.
pub fn projector21_printed_sign() -> QMatrix {
    s_matrix()
        .sub(&QMatrix::identity(28).scale(&int(3)))
        .scale(&q(1, 4))
}

fn apply_projector(p: &QMatrix, a: &KForm) -> Result<KForm, Error> {
    if a.degree() != 2 {
        return Err(Error::Domain(format!("projectors act on 2-forms, got degree {}", a.degree())));
    }
    Ok(vec_to_two_form(&p.mul_vec(&two_form_to_vec(a))))
}

/// `(S a + a)/4`.
pub fn project_2_7(a: &KForm) -> Result<KForm, Error> {
    apply_projector(&projector7(), a)
}

/// `(3a - S a)/4`.
pub fn project_2_21(a: &KForm) -> Result<KForm, Error> {
    apply_projector(&projector21(), a)
}

/// The seven basis forms `e_1..e_7` of the 7-piece, mutually orthogonal with
/// `<e_i, e_j> = 4 delta_ij`. In `e_3` the terms `dx58, dx67` carry a minus
/// sign: with a plus sign the form has `S`-eigenvalue `-1`. The actions of
/// `alpha, beta, gamma, delta` are unchanged by that sign.
pub fn lambda27_basis() -> [KForm; 7] {
    const E: [[([u8; 2], i64); 4]; 7] = [
        [([1, 2], 1), ([3, 4], 1), ([5, 6], 1), ([7, 8], 1)],
        [([1, 3], 1), ([2, 4], -1), ([5, 7], 1), ([6, 8], -1)],
        [([1, 4], 1), ([2, 3], 1), ([5, 8], -1), ([6, 7], -1)],
        [([1, 5], 1), ([2, 6], -1), ([3, 7], -1), ([4, 8], 1)],
        [([1, 6], 1), ([2, 5], 1), ([3, 8], 1), ([4, 7], 1)],
        [([1, 7], 1), ([2, 8], -1), ([3, 5], 1), ([4, 6], -1)],
        [([1, 8], 1), ([2, 7], 1), ([3, 6], -1), ([4, 5], -1)],
    ];
    E.map(|terms| {
        let mut f = KForm::zero(2);
        for (ij, c) in terms {
            f.add_term(ij.to_vec(), int(c));
        }
        f
    })
}

/// Matrix of the pullback `g^*` on the 7-piece in the basis `e_1..e_7`:
/// entry `(j, i) = <g^* e_i, e_j> / 4`. Fails if `g^*` leaves the 7-piece.
pub fn induced_matrix_on_lambda27(g: &QMatrix) -> Result<QMatrix, Error> {
    let basis = lambda27_basis();
    let quarter = q(1, 4);
    let mut out = QMatrix::zeros(7, 7);
    for (i, e) in basis.iter().enumerate() {
        let image = e.pullback(g)?;
        let mut residual = image.clone();
        for (j, f) in basis.iter().enumerate() {
            let c = image.inner(f) * &quarter;
            residual = residual.sub(&f.scale(&c))?;
            out.set(j, i, c);
        }
        if !residual.is_zero() {
            return Err(Error::Domain(
                "pullback does not preserve the 7-dimensional piece".into(),
            ));
        }
    }
    Ok(out)
}

/// A hyper-Kaehler triple: three two-forms on one R^4 factor.
pub type Triple = [KForm; 3];

/// `mu` on the first R^4 (coordinates 1..4) and `omega` on the second (5..8)
/// such that `Omega_0 = 1/2 mu_1^mu_1 + 1/2 omega_1^omega_1 - sum omega_i^mu_i`.
pub fn hyperkahler_triples() -> (Triple, Triple) {
    let f = |a: &[u8], b: &[u8], sb: i64| {
        KForm::dx(a)
            .add(&KForm::dx(b).scale(&int(sb)))
            .expect("degree 2")
    };
    let mu = [f(&[1, 2], &[3, 4], 1), f(&[1, 3], &[2, 4], -1), f(&[1, 4], &[2, 3], 1)];
    let omega = [
        f(&[5, 6], &[7, 8], 1).scale(&int(-1)),
        f(&[5, 7], &[6, 8], -1).scale(&int(-1)),
        f(&[5, 8], &[6, 7], 1),
    ];
    (mu, omega)
}

/// `1/2 mu_1^mu_1 + 1/2 omega_1^omega_1 - sum_i omega_i^mu_i`.
pub fn four_form_from_triples(mu: &Triple, omega: &Triple) -> KForm {
    let half = q(1, 2);
    let mut out = mu[0]
        .wedge(&mu[0])
        .scale(&half)
        .add(&omega[0].wedge(&omega[0]).scale(&half))
        .expect("degree 4");
    for i in 0..3 {
        out = out.sub(&omega[i].wedge(&mu[i])).expect("degree 4");
    }
    out
}

/// `x_i ^ x_j = 2 delta_ij vol` on the factor carrying the triple.
pub fn is_orthonormal_triple(t: &Triple, vol: &KForm) -> bool {
    (0..3).all(|i| {
        (0..3).all(|j| {
            let expected = if i == j { vol.scale(&int(2)) } else { KForm::zero(4) };
            t[i].wedge(&t[j]) == expected
        })
    })
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    idx: Vec<u8>,
    #[serde(flatten)]
    coeff: RatRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KFormRepr {
    degree: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for KForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        KFormRepr {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(idx, c)| TermRepr {
                    idx: idx.clone(),
                    coeff: RatRepr::from(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = KFormRepr::deserialize(d)?;
        let mut out = KForm::zero(repr.degree);
        for t in repr.terms {
            if t.idx.len() != repr.degree {
                return Err(D::Error::custom(format!(
                    "term of length {} in a {}-form",
                    t.idx.len(),
                    repr.degree
                )));
            }
            let c = Rational::try_from(t.coeff).map_err(D::Error::custom)?;
            let m = KForm::monomial(&t.idx, c).map_err(D::Error::custom)?;
            out = out.add(&m).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}
