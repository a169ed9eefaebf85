//! Diagonal sign matrices, their printed names, and 5-tuples of them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certify::FlatRep;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::orbifold::{Alpha, Beta, Delta, Gamma, Tau};
use crate::rational::int;

pub const MAX_N: usize = 12;

/// `diag(+-1, ..., +-1)`; bit `p` set means entry `p` is `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    n: u8,
    bits: u16,
}

impl SignVector {
    pub fn new(n: usize, bits: u16) -> Self {
        assert!((1..=MAX_N).contains(&n), "rank {n} out of range");
        assert!(bits >> n == 0, "bits beyond rank");
        SignVector { n: n as u8, bits }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, 0)
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut bits = 0u16;
        for (p, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => bits |= 1 << p,
                _ => return Err(Error::Domain(format!("sign entry {s} is not +-1"))),
            }
        }
        Ok(Self::new(signs.len(), bits))
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn bits(self) -> u16 {
        self.bits
    }

    pub fn is_minus(self, p: usize) -> bool {
        self.bits >> p & 1 == 1
    }

    pub fn signs(self) -> Vec<i8> {
        (0..self.n()).map(|p| if self.is_minus(p) { -1 } else { 1 }).collect()
    }

    /// Determinant one.
    pub fn is_special(self) -> bool {
        self.bits.count_ones().is_multiple_of(2)
    }

    pub fn is_identity(self) -> bool {
        self.bits == 0
    }

    /// Entrywise product.
    pub fn times(self, other: SignVector) -> SignVector {
        assert_eq!(self.n, other.n);
        SignVector::new(self.n(), self.bits ^ other.bits)
    }

    pub fn matrix(self) -> QMatrix {
        let d: Vec<_> = self.signs().into_iter().map(|s| int(s as i64)).collect();
        QMatrix::diagonal(&d)
    }

    pub fn from_matrix(m: &QMatrix) -> Option<Self> {
        if !m.is_diagonal() || !m.is_square() || m.rows() > MAX_N {
            return None;
        }
        let signs: Option<Vec<i8>> = (0..m.rows())
            .map(|i| {
                let v = m.get(i, i);
                if *v == int(1) {
                    Some(1)
                } else if *v == int(-1) {
                    Some(-1)
                } else {
                    None
                }
            })
            .collect();
        Self::from_signs(&signs?).ok()
    }

    /// Coordinates permuted: entry `p` of the result is entry `perm[p]` of self.
    pub fn permuted(self, perm: &[usize]) -> Self {
        let mut bits = 0;
        for (p, &src) in perm.iter().enumerate() {
            if self.is_minus(src) {
                bits |= 1 << p;
            }
        }
        SignVector::new(self.n(), bits)
    }

    /// Printed name: `1, a, b, c` for rank 3; `+-1, +-a, +-b, +-c` for rank 4;
    /// `1, a_ij, b_k` for rank 5 (`a_ij` has `-1` exactly at `i, j`, `b_k` has
    /// `+1` exactly at `k`); `1, -1` for rank 2; otherwise a sign string.
    pub fn name(self) -> String {
        if let Some((_, name)) = alphabet(self.n()).iter().find(|(v, _)| *v == self.bits) {
            return name.clone();
        }
        self.sign_string()
    }

    pub fn sign_string(self) -> String {
        (0..self.n()).map(|p| if self.is_minus(p) { '-' } else { '+' }).collect()
    }

    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let s = s.trim().replace('\u{2212}', "-");
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::Domain(format!("rank {n} out of range")));
        }
        if let Some((bits, _)) = alphabet(n).iter().find(|(_, name)| *name == s) {
            return Ok(SignVector::new(n, *bits));
        }
        if s.len() == n && s.chars().all(|c| c == '+' || c == '-') {
            let signs: Vec<i8> = s.chars().map(|c| if c == '-' { -1 } else { 1 }).collect();
            return Self::from_signs(&signs);
        }
        Err(Error::Domain(format!("unknown token {s:?} for SO({n})")))
    }

    /// Order used when choosing representatives. Ranks 3 and 4 follow the
    /// order the names are listed in; rank 5 lists `1`, the `a_ij`, then
    /// `b_5, ..., b_1`; otherwise the bit pattern as an integer.
    pub fn rank(self) -> u32 {
        let n = self.n();
        if !(3..=5).contains(&n) {
            return self.bits as u32;
        }
        let pos = alphabet(n)
            .iter()
            .position(|(v, _)| *v == self.bits)
            .expect("every special sign vector is named") as u32;
        match n {
            // b_1..b_5 sit at 11..=15.
            5 if pos >= 11 => 26 - pos,
            _ => pos,
        }
    }
}

fn alphabet(n: usize) -> Vec<(u16, String)> {
    match n {
        2 => vec![(0, "1".into()), (0b11, "-1".into())],
        3 => vec![
            (0, "1".into()),
            (0b110, "a".into()),
            (0b101, "b".into()),
            (0b011, "c".into()),
        ],
        4 => vec![
            (0, "1".into()),
            (0b1111, "-1".into()),
            (0b0110, "a".into()),
            (0b1001, "-a".into()),
            (0b0101, "b".into()),
            (0b1010, "-b".into()),
            (0b0011, "c".into()),
            (0b1100, "-c".into()),
        ],
        5 => {
            let mut v = vec![(0u16, "1".to_string())];
            for i in 0..5 {
                for j in i + 1..5 {
                    v.push((1 << i | 1 << j, format!("a{}{}", i + 1, j + 1)));
                }
            }
            for k in 0..5 {
                v.push((0b11111 ^ (1 << k), format!("b{}", k + 1)));
            }
            v
        }
        _ => Vec::new(),
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Images of `(gamma, delta, tau_4, tau_5, tau_8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenTuple {
    n: u8,
    tokens: [SignVector; 5],
}

/// Position names inside a [`TokenTuple`].
pub const TUPLE_SLOTS: [&str; 5] = ["gamma", "delta", "tau4", "tau5", "tau8"];

impl TokenTuple {
    pub fn new(tokens: [SignVector; 5]) -> Result<Self> {
        let n = tokens[0].n();
        if tokens.iter().any(|t| t.n() != n) {
            return Err(Error::Domain("tokens of different rank".into()));
        }
        if let Some(t) = tokens.iter().find(|t| !t.is_special()) {
            return Err(Error::Domain(format!("token {} has determinant -1", t.sign_string())));
        }
        Ok(TokenTuple { n: n as u8, tokens })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn tokens(&self) -> [SignVector; 5] {
        self.tokens
    }

    pub fn gamma(&self) -> SignVector {
        self.tokens[0]
    }

    pub fn delta(&self) -> SignVector {
        self.tokens[1]
    }

    /// `(gamma, delta)` not both trivial.
    pub fn is_admissible(&self) -> bool {
        !(self.gamma().is_identity() && self.delta().is_identity())
    }

    /// Column `p`: bit `k` is set when token `k` has `-1` at position `p`.
    pub fn column(&self, p: usize) -> u8 {
        self.tokens
            .iter()
            .enumerate()
            .fold(0, |acc, (k, t)| acc | (t.is_minus(p) as u8) << k)
    }

    pub fn columns(&self) -> Vec<u8> {
        (0..self.n()).map(|p| self.column(p)).collect()
    }

    pub fn from_columns(cols: &[u8]) -> Result<Self> {
        let n = cols.len();
        let tokens = std::array::from_fn(|k| {
            let bits = cols
                .iter()
                .enumerate()
                .fold(0u16, |acc, (p, c)| acc | ((c >> k & 1) as u16) << p);
            SignVector::new(n, bits)
        });
        Self::new(tokens)
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        TokenTuple {
            n: self.n,
            tokens: self.tokens.map(|t| t.permuted(perm)),
        }
    }

    /// The full representation. Images not named by the tuple are forced by
    /// the relations for commuting diagonal images with trivial
    /// `rho(alpha), rho(beta)`: `rho(tau_1) = rho(tau_2) = rho(tau_3) = 1` and
    /// `rho(tau_6) = rho(tau_7) = rho(tau_5)`.
    pub fn expand(&self) -> FlatRep {
        let n = self.n();
        let [g, d, t4, t5, t8] = self.tokens.map(SignVector::matrix);
        FlatRep::from_fn(n, |gen| match gen {
            Gamma => g.clone(),
            Delta => d.clone(),
            Tau(4) => t4.clone(),
            Tau(5) | Tau(6) | Tau(7) => t5.clone(),
            Tau(8) => t8.clone(),
            Alpha | Beta | Tau(_) => QMatrix::identity(n),
        })
        .expect("square images of rank n")
    }

    /// Read back a tuple from a diagonal representation with trivial
    /// `rho(alpha), rho(beta)`.
    pub fn from_rep(rep: &FlatRep) -> Option<Self> {
        let tok = |g| SignVector::from_matrix(rep.image(g));
        let t = TokenTuple::new([tok(Gamma)?, tok(Delta)?, tok(Tau(4))?, tok(Tau(5))?, tok(Tau(8))?]).ok()?;
        (t.expand() == *rep).then_some(t)
    }

    /// `(x1, x2, x3, x4, x5)`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Domain(format!("expected (x1, ..., x5), got {s:?}")))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 5 {
            return Err(Error::Domain(format!("expected 5 entries, got {}", parts.len())));
        }
        let mut tokens = [SignVector::identity(n); 5];
        for (slot, p) in tokens.iter_mut().zip(parts) {
            *slot = SignVector::parse(p, n)?;
        }
        Self::new(tokens)
    }
}

impl fmt::Display for TokenTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.tokens.iter().map(|t| t.name()).collect();
        write!(f, "({})", names.join(", "))
    }
}

impl Serialize for TokenTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Orbit invariant under simultaneous coordinate permutation: the sorted
/// multiset of per-coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitKey(pub Vec<u8>);

impl TokenTuple {
    pub fn canonical_key(&self) -> OrbitKey {
        let mut c = self.columns();
        c.sort_unstable();
        OrbitKey(c)
    }
}

impl OrbitKey {
    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Number of tuples with this key: `n! / prod(multiplicity!)`.
    pub fn orbit_size(&self) -> u64 {
        let n = self.n() as u64;
        let mut size: u64 = (1..=n).product();
        let mut i = 0;
        while i < self.0.len() {
            let j = self.0[i..].iter().take_while(|&&c| c == self.0[i]).count();
            size /= (1..=j as u64).product::<u64>();
            i += j;
        }
        size
    }

    pub fn tuple(&self) -> TokenTuple {
        TokenTuple::from_columns(&self.0).expect("keys come from special tuples")
    }
}

impl fmt::Display for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| format!("{c:05b}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so4_names_round_trip() {
        for name in ["1", "-1", "a", "-a", "b", "-b", "c", "-c"] {
            let v = SignVector::parse(name, 4).unwrap();
            assert!(v.is_special());
            assert_eq!(v.name(), name);
        }
        let a = SignVector::parse("a", 4).unwrap();
        let m1 = SignVector::parse("-1", 4).unwrap();
        assert_eq!(a.times(m1).name(), "-a");
        assert_eq!(a.signs(), vec![1, -1, -1, 1]);
    }

    #[test]
    fn so5_names() {
        assert_eq!(SignVector::parse("a24", 5).unwrap().signs(), vec![1, -1, 1, -1, 1]);
        assert_eq!(SignVector::parse("b5", 5).unwrap().signs(), vec![-1, -1, -1, -1, 1]);
    }

    #[test]
    fn odd_token_rejected() {
        assert!(TokenTuple::parse("(+-+, 1, 1, 1, 1)", 3).is_err());
        assert!(TokenTuple::parse("(---, a, 1, 1, 1)", 3).is_err());
    }

    #[test]
    fn key_is_permutation_invariant() {
        let t = TokenTuple::parse("(1, a, b, c, a)", 3).unwrap();
        let p = t.permuted(&[2, 0, 1]);
        assert_ne!(t, p);
        assert_eq!(t.canonical_key(), p.canonical_key());
    }

    #[test]
    fn orbit_size_of_repeated_columns() {
        assert_eq!(OrbitKey(vec![0, 0, 3]).orbit_size(), 3);
        assert_eq!(OrbitKey(vec![1, 2, 3]).orbit_size(), 6);
        assert_eq!(OrbitKey(vec![5, 5, 5, 5]).orbit_size(), 1);
    }
}
