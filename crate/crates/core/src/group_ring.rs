//! The group rings `ZF_n` and `F_pF_n`, Fox derivatives and Jacobians.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::word::{parse_word, Endomorphism, Word};

/// A finite linear combination of reduced words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    rank: usize,
    ring: Ring,
    terms: BTreeMap<Word, BigInt>,
}

impl GroupRingElement {
    pub fn zero(rank: usize, ring: Ring) -> Self {
        GroupRingElement { rank, ring, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize, ring: Ring) -> Self {
        Self::from_word(&Word::identity(rank), ring)
    }

    pub fn from_word(w: &Word, ring: Ring) -> Self {
        Self::from_term(w.clone(), BigInt::one(), ring)
    }

    pub fn from_term(w: Word, c: BigInt, ring: Ring) -> Self {
        let mut out = Self::zero(w.rank(), ring);
        out.add_term(w, c);
        out
    }

    /// `w - 1`.
    pub fn word_minus_one(w: &Word, ring: Ring) -> Self {
        let mut out = Self::from_word(w, ring);
        out.add_term(Word::identity(w.rank()), -BigInt::one());
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Word, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, w: Word, c: BigInt) {
        let c = self.ring.reduce(c);
        if c.is_zero() {
            return;
        }
        let ring = self.ring;
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.reduce(o.get() + c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        self.ring.check_same(other.ring)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.rank, self.ring);
        for (w, d) in &self.terms {
            out.add_term(w.clone(), d * c);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.rank, self.ring);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.mul_unchecked(v), a * b);
            }
        }
        Ok(out)
    }

    /// The augmentation `ε`: the sum of all coefficients.
    pub fn augment(&self) -> BigInt {
        self.ring.reduce(self.terms.values().sum())
    }

    /// Applies an endomorphism of `F_n` to every word.
    pub fn map_words(&self, f: &Endomorphism) -> Result<Self> {
        if f.rank() != self.rank {
            return Err(Error::RankMismatch { left: f.rank(), right: self.rank });
        }
        let mut out = Self::zero(self.rank, self.ring);
        for (w, c) in &self.terms {
            out.add_term(f.apply_unchecked(w), c.clone());
        }
        Ok(out)
    }

    /// Reduces the coefficients into another ring (e.g. `Z → F_p`).
    pub fn change_ring(&self, ring: Ring) -> Self {
        let mut out = Self::zero(self.rank, ring);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// The Fox derivative `∂/∂x_i` (1-based).
    pub fn fox_derivative(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.rank {
            return Err(Error::IndexOutOfRange { index: i, rank: self.rank });
        }
        let mut out = Self::zero(self.rank, self.ring);
        for (w, c) in &self.terms {
            fox_word_into(&mut out, w, i, c);
        }
        Ok(out)
    }

    pub fn parse(text: &str, rank: usize, ring: Ring) -> Result<Self> {
        parse_element(text, rank, ring)
    }
}

/// Adds `c · ∂w/∂x_i` to `out` in one left-to-right pass:
/// `x_i` at position `t` contributes `+prefix(t)`, `x_i^{-1}` contributes
/// `-prefix(t+1)`.
fn fox_word_into(out: &mut GroupRingElement, w: &Word, i: usize, c: &BigInt) {
    let letters = w.letters();
    for (t, l) in letters.iter().enumerate() {
        if l.generator() != i {
            continue;
        }
        if l.is_inverse() {
            let prefix = Word::from_letters(w.rank(), letters[..=t].iter().copied()).expect("valid");
            out.add_term(prefix, -c.clone());
        } else {
            let prefix = Word::from_letters(w.rank(), letters[..t].iter().copied()).expect("valid");
            out.add_term(prefix, c.clone());
        }
    }
}

/// Fox derivative of a single word, over the given ring.
pub fn fox_derivative_word(w: &Word, i: usize, ring: Ring) -> Result<GroupRingElement> {
    GroupRingElement::from_word(w, ring).fox_derivative(i)
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_identity() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{abs}*{w}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_element(text: &str, rank: usize, ring: Ring) -> Result<GroupRingElement> {
    let bytes = text.as_bytes();
    let mut out = GroupRingElement::zero(rank, ring);
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut sign = 1i32;
    let mut pieces: Vec<(usize, usize, i32)> = Vec::new();
    let mut last_sig: Option<u8> = None;
    for (pos, &b) in bytes.iter().enumerate() {
        match b {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'+' | b'-' if depth == 0 && !matches!(last_sig, Some(b'^') | Some(b'*')) => {
                if text[start..pos].trim().is_empty() {
                    sign *= sign_of(b);
                } else {
                    pieces.push((start, pos, sign));
                    sign = sign_of(b);
                }
                start = pos + 1;
            }
            _ => {}
        }
        if !b.is_ascii_whitespace() {
            last_sig = Some(b);
        }
    }
    if text[start..].trim().is_empty() {
        return Err(Error::Parse { pos: bytes.len(), msg: "expected a term".into() });
    }
    pieces.push((start, bytes.len(), sign));

    for (s, e, sign) in pieces {
        let mut coeff = BigInt::from(sign);
        let mut word = Word::identity(rank);
        let mut off = s;
        for factor in text[s..e].split('*') {
            let t = factor.trim();
            if t.is_empty() {
                return Err(Error::Parse { pos: off, msg: "empty factor".into() });
            }
            if t.bytes().all(|c| c.is_ascii_digit()) {
                let n: BigInt = t.parse().map_err(|_| Error::Parse { pos: off, msg: "bad integer".into() })?;
                coeff *= n;
            } else {
                let w = parse_word(t, rank).map_err(|err| match err {
                    Error::Parse { pos, msg } => {
                        let lead = factor.len() - factor.trim_start().len();
                        Error::Parse { pos: pos + off + lead, msg }
                    }
                    other => other,
                })?;
                word = word.mul_unchecked(&w);
            }
            off += factor.len() + 1;
        }
        out.add_term(word, coeff);
    }
    Ok(out)
}

fn sign_of(b: u8) -> i32 {
    if b == b'-' {
        -1
    } else {
        1
    }
}

/// A matrix of group-ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianMatrix {
    rank: usize,
    ring: Ring,
    entries: Vec<Vec<GroupRingElement>>,
}

impl JacobianMatrix {
    /// `D(f)_{ji} = ∂f(x_j)/∂x_i`.
    pub fn of(f: &Endomorphism, ring: Ring) -> Self {
        let n = f.rank();
        let entries = f
            .images()
            .iter()
            .map(|img| {
                let u = GroupRingElement::from_word(img, ring);
                (1..=n).map(|i| u.fox_derivative(i).expect("index in range")).collect()
            })
            .collect();
        JacobianMatrix { rank: n, ring, entries }
    }

    pub fn identity(rank: usize, ring: Ring) -> Self {
        let entries = (0..rank)
            .map(|r| {
                (0..rank)
                    .map(|c| {
                        if r == c {
                            GroupRingElement::one(rank, ring)
                        } else {
                            GroupRingElement::zero(rank, ring)
                        }
                    })
                    .collect()
            })
            .collect();
        JacobianMatrix { rank, ring, entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn entry(&self, row: usize, col: usize) -> &GroupRingElement {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[Vec<GroupRingElement>] {
        &self.entries
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch { expected: self.cols(), got: other.rows() });
        }
        let mut entries = Vec::with_capacity(self.rows());
        for r in 0..self.rows() {
            let mut row = Vec::with_capacity(other.cols());
            for c in 0..other.cols() {
                let mut acc = GroupRingElement::zero(self.rank, self.ring);
                for k in 0..self.cols() {
                    acc = acc.add(&self.entries[r][k].multiply(&other.entries[k][c])?)?;
                }
                row.push(acc);
            }
            entries.push(row);
        }
        Ok(JacobianMatrix { rank: self.rank, ring: self.ring, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch { expected: self.rows(), got: other.rows() });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(JacobianMatrix { rank: self.rank, ring: self.ring, entries })
    }

    /// Applies `f` to every word of every entry.
    pub fn map_words(&self, f: &Endomorphism) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| e.map_words(f)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(JacobianMatrix { rank: self.rank, ring: self.ring, entries })
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> GroupRingElement {
        let mut acc = GroupRingElement::zero(self.rank, self.ring);
        for i in 0..self.rows().min(self.cols()) {
            acc = acc.add(&self.entries[i][i]).expect("uniform");
        }
        acc
    }
}

/// Outcome of an entrywise matrix identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    /// First failing `(row, column)`, 1-based.
    pub first_failure: Option<(usize, usize)>,
}

fn compare(a: &JacobianMatrix, b: &JacobianMatrix) -> IdentityCheck {
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if a.entries[r][c] != b.entries[r][c] {
                return IdentityCheck { holds: false, first_failure: Some((r + 1, c + 1)) };
            }
        }
    }
    IdentityCheck { holds: true, first_failure: None }
}

/// Checks `D(f∘g) = f(Dg)·D(f)` entrywise.
pub fn verify_chain_rule(f: &Endomorphism, g: &Endomorphism) -> Result<IdentityCheck> {
    let fg = Endomorphism::compose(f, g)?;
    let ring = Ring::Integers;
    let lhs = JacobianMatrix::of(&fg, ring);
    let rhs = JacobianMatrix::of(g, ring).map_words(f)?.multiply(&JacobianMatrix::of(f, ring))?;
    Ok(compare(&lhs, &rhs))
}

/// Checks `f(x_i) - 1 = Σ_j ∂f(x_i)/∂x_j · (x_j - 1)` for every `i`.
pub fn verify_fundamental_formula(f: &Endomorphism) -> IdentityCheck {
    let n = f.rank();
    let ring = Ring::Integers;
    let d = JacobianMatrix::of(f, ring);
    for (i, img) in f.images().iter().enumerate() {
        let lhs = GroupRingElement::word_minus_one(img, ring);
        let mut rhs = GroupRingElement::zero(n, ring);
        for j in 1..=n {
            let xj = GroupRingElement::word_minus_one(&Word::generator(n, j).expect("in range"), ring);
            rhs = rhs.add(&d.entries[i][j - 1].multiply(&xj).expect("uniform")).expect("uniform");
        }
        if lhs != rhs {
            return IdentityCheck { holds: false, first_failure: Some((i + 1, 0)) };
        }
    }
    IdentityCheck { holds: true, first_failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str, n: usize) -> GroupRingElement {
        GroupRingElement::parse(s, n, Ring::Integers).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let u = e("2*x1*x2^-1 - 1", 2);
        assert_eq!(u.terms().len(), 2);
        assert_eq!(u.augment(), BigInt::one());
        assert_eq!(e(&u.to_string(), 2), u);
        assert_eq!(e("-x1 + x1", 2), GroupRingElement::zero(2, Ring::Integers));
        assert_eq!(e("3*x1 - 3*x2", 2).augment(), BigInt::zero());
        assert!(GroupRingElement::parse("2*", 2, Ring::Integers).is_err());
        assert!(GroupRingElement::parse("x1 +", 2, Ring::Integers).is_err());
    }

    #[test]
    fn ring_arithmetic() {
        assert_eq!(e("x1", 2).multiply(&e("x1^-1", 2)).unwrap(), e("1", 2));
        let prod = e("x1 - 1", 2).multiply(&e("x2 - 1", 2)).unwrap();
        assert_eq!(prod, e("x1*x2 - x1 - x2 + 1", 2));
        let p = Ring::Prime(3);
        let u = GroupRingElement::parse("4*x1", 2, p).unwrap();
        assert_eq!(u.coefficient(&Word::parse("x1", 2).unwrap()), BigInt::one());
    }

    #[test]
    fn fox_basics() {
        let x1 = e("x1", 2);
        assert_eq!(x1.fox_derivative(1).unwrap(), e("1", 2));
        assert!(x1.fox_derivative(2).unwrap().is_zero());
        assert_eq!(e("x1^-1", 2).fox_derivative(1).unwrap(), e("-x1^-1", 2));
        let c = e("[x1,x2]", 2);
        assert_eq!(c.fox_derivative(1).unwrap(), e("1 - x1 x2 x1^-1", 2));
        assert!(matches!(c.fox_derivative(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn jacobian_of_conjugation() {
        let k12 = Endomorphism::conjugation(2, 1, 2).unwrap();
        let d = JacobianMatrix::of(&k12, Ring::Integers);
        assert_eq!(d.entry(0, 0), &e("x2", 2));
        assert_eq!(d.entry(0, 1), &e("1 - x2 x1 x2^-1", 2));
        assert!(d.entry(1, 0).is_zero());
        assert_eq!(d.entry(1, 1), &e("1", 2));
        let id = Endomorphism::identity(3);
        assert_eq!(JacobianMatrix::of(&id, Ring::Integers), JacobianMatrix::identity(3, Ring::Integers));
    }

    #[test]
    fn chain_rule_on_generators() {
        let f = Endomorphism::conjugation(3, 1, 2).unwrap();
        let g = Endomorphism::commutator_transvection(3, 1, 2, 3).unwrap();
        assert!(verify_chain_rule(&f, &g).unwrap().holds);
        let id = Endomorphism::identity(2);
        assert!(verify_chain_rule(&id, &id).unwrap().holds);
        assert!(verify_fundamental_formula(&g).holds);
    }
}
