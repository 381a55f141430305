//! Reduced words in a free group of finite rank and endomorphisms given by
//! the images of the generators.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator `x_i` (positive) or its inverse (negative); indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        assert!(generator >= 1, "generators are 1-based");
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn exponent(self) -> i32 {
        self.0.signum()
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn raw(self) -> i32 {
        self.0
    }
}

/// A fully reduced word in `F_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

fn push_reduced(acc: &mut Vec<Letter>, l: Letter) {
    if acc.last() == Some(&l.inverse()) {
        acc.pop();
    } else {
        acc.push(l);
    }
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word { rank, letters: Vec::new() }
    }

    /// The generator `x_i`.
    pub fn generator(rank: usize, i: usize) -> Result<Word> {
        if i == 0 || i > rank {
            return Err(Error::IndexOutOfRange { index: i, rank });
        }
        Ok(Word { rank, letters: vec![Letter::new(i, false)] })
    }

    /// Builds a word from arbitrary letters, reducing freely.
    pub fn from_letters(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Word> {
        let mut acc = Vec::new();
        for l in letters {
            if l.generator() > rank {
                return Err(Error::IndexOutOfRange { index: l.generator(), rank });
            }
            push_reduced(&mut acc, l);
        }
        Ok(Word { rank, letters: acc })
    }

    /// Builds a word from signed 1-based indices (`-2` is `x_2^{-1}`).
    pub fn from_signed(rank: usize, letters: &[i32]) -> Result<Word> {
        for &l in letters {
            if l == 0 {
                return Err(Error::IndexOutOfRange { index: 0, rank });
            }
        }
        Word::from_letters(rank, letters.iter().map(|&l| Letter(l)))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch { left: self.rank, right: other.rank })
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        let mut acc = self.letters.clone();
        acc.reserve(other.letters.len());
        for &l in &other.letters {
            push_reduced(&mut acc, l);
        }
        Word { rank: self.rank, letters: acc }
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `[a, b] = a b a^{-1} b^{-1}`.
    pub fn commutator(a: &Word, b: &Word) -> Result<Word> {
        a.check_rank(b)?;
        Ok(a.mul_unchecked(b).mul_unchecked(&a.inverse()).mul_unchecked(&b.inverse()))
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity(self.rank);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul_unchecked(&base);
        }
        acc
    }

    /// `b^{-1} a b`.
    pub fn conjugate_by(&self, b: &Word) -> Result<Word> {
        self.check_rank(b)?;
        Ok(b.inverse().mul_unchecked(self).mul_unchecked(b))
    }

    /// Exponent sums per generator: the image in `Z^n`.
    pub fn abelianization(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for l in &self.letters {
            v[l.generator() - 1] += l.exponent() as i64;
        }
        v
    }

    pub fn contains_generator(&self, i: usize) -> bool {
        self.letters.iter().any(|l| l.generator() == i)
    }

    /// Reinterprets the word in a free group of larger rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        Word::from_letters(rank, self.letters.iter().copied())
    }

    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        parse_word(text, rank)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.exponent() as i64;
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if run == 1 {
                write!(f, "x{}", l.generator())?;
            } else {
                write!(f, "x{}^{}", l.generator(), run)?;
            }
            i = j;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<i64>().map_err(|_| Error::Parse { pos: start, msg: "integer overflow".into() })
    }

    fn word(&mut self) -> Result<Word> {
        let mut acc = Word::identity(self.rank);
        let mut terms = 0;
        while let Some(c) = self.peek() {
            if !matches!(c, b'x' | b'(' | b'[' | b'1') {
                break;
            }
            let t = self.term()?;
            acc = acc.mul_unchecked(&t);
            terms += 1;
        }
        if terms == 0 {
            return self.err("expected a term");
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word> {
        let a = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            Ok(a.pow(e))
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return self.err("expected generator index after 'x'");
                }
                let idx: usize = std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ascii")
                    .parse()
                    .map_err(|_| Error::Parse { pos: start, msg: "bad index".into() })?;
                if idx == 0 || idx > self.rank {
                    return Err(Error::IndexOutOfRange { index: idx, rank: self.rank });
                }
                Ok(Word { rank: self.rank, letters: vec![Letter::new(idx, false)] })
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity(self.rank))
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                Ok(a.mul_unchecked(&b).mul_unchecked(&a.inverse()).mul_unchecked(&b.inverse()))
            }
            _ => self.err("expected 'x', '1', '(' or '['"),
        }
    }
}

/// Parses `word := term+ ; term := atom ('^' int)? ;
/// atom := 'x' int | '1' | '(' word ')' | '[' word ',' word ']'`.
pub fn parse_word(text: &str, rank: usize) -> Result<Word> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, rank };
    let w = p.word()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("unexpected trailing input");
    }
    Ok(w)
}

/// An endomorphism of `F_n` given by the images of `x_1, …, x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(images: Vec<Word>) -> Result<Endomorphism> {
        let rank = images.len();
        for w in &images {
            if w.rank != rank {
                return Err(Error::RankMismatch { left: rank, right: w.rank });
            }
        }
        Ok(Endomorphism { rank, images })
    }

    pub fn identity(rank: usize) -> Endomorphism {
        Endomorphism {
            rank,
            images: (1..=rank)
                .map(|i| Word { rank, letters: vec![Letter::new(i, false)] })
                .collect(),
        }
    }

    fn check_index(rank: usize, i: usize) -> Result<()> {
        if i == 0 || i > rank {
            Err(Error::IndexOutOfRange { index: i, rank })
        } else {
            Ok(())
        }
    }

    /// `x_i ↦ x_j x_i x_j^{-1}`, other generators fixed.
    pub fn conjugation(rank: usize, i: usize, j: usize) -> Result<Endomorphism> {
        Self::conjugation_power(rank, i, j, 1)
    }

    /// `x_i ↦ x_j^e x_i x_j^{-e}`.
    pub fn conjugation_power(rank: usize, i: usize, j: usize, e: i64) -> Result<Endomorphism> {
        Self::check_index(rank, i)?;
        Self::check_index(rank, j)?;
        if i == j {
            return Err(Error::InvalidParameter("conjugation needs i != j".into()));
        }
        let mut f = Endomorphism::identity(rank);
        let xj = Word::generator(rank, j)?.pow(e);
        f.images[i - 1] = xj.mul_unchecked(&f.images[i - 1]).mul_unchecked(&xj.inverse());
        Ok(f)
    }

    /// `x_i ↦ [x_j, x_k] x_i`, other generators fixed.
    pub fn commutator_transvection(rank: usize, i: usize, j: usize, k: usize) -> Result<Endomorphism> {
        Self::check_index(rank, i)?;
        Self::check_index(rank, j)?;
        Self::check_index(rank, k)?;
        if i == j || i == k || j == k {
            return Err(Error::InvalidParameter("commutator transvection needs distinct indices".into()));
        }
        let mut f = Endomorphism::identity(rank);
        let c = Word::commutator(&Word::generator(rank, j)?, &Word::generator(rank, k)?)?;
        f.images[i - 1] = c.mul_unchecked(&f.images[i - 1]);
        Ok(f)
    }

    /// `x_i ↦ w x_i`, other generators fixed.
    pub fn left_multiplication(i: usize, w: &Word) -> Result<Endomorphism> {
        Self::check_index(w.rank, i)?;
        let mut f = Endomorphism::identity(w.rank);
        f.images[i - 1] = w.mul_unchecked(&f.images[i - 1]);
        Ok(f)
    }

    /// `x_i ↦ x_i w`, other generators fixed.
    pub fn right_multiplication(i: usize, w: &Word) -> Result<Endomorphism> {
        Self::check_index(w.rank, i)?;
        let mut f = Endomorphism::identity(w.rank);
        f.images[i - 1] = f.images[i - 1].mul_unchecked(w);
        Ok(f)
    }

    /// Generator permutation `x_i ↦ x_{σ(i)}`, with `σ` given 1-based.
    pub fn permutation(perm: &[usize]) -> Result<Endomorphism> {
        let rank = perm.len();
        let mut seen = vec![false; rank];
        for &s in perm {
            Self::check_index(rank, s)?;
            if std::mem::replace(&mut seen[s - 1], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        Endomorphism::new(perm.iter().map(|&s| Word::generator(rank, s)).collect::<Result<_>>()?)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of `x_i` (1-based).
    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank != self.rank {
            return Err(Error::RankMismatch { left: self.rank, right: w.rank });
        }
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &Word) -> Word {
        let mut inverses: Vec<Option<Word>> = vec![None; self.rank];
        let mut acc = Vec::new();
        for &l in &w.letters {
            let g = l.generator() - 1;
            let img = if l.is_inverse() {
                inverses[g].get_or_insert_with(|| self.images[g].inverse())
            } else {
                &self.images[g]
            };
            for &m in &img.letters {
                push_reduced(&mut acc, m);
            }
        }
        Word { rank: self.rank, letters: acc }
    }

    /// `compose(f, g) = f ∘ g`: apply `g` first, then `f`.
    pub fn compose(f: &Endomorphism, g: &Endomorphism) -> Result<Endomorphism> {
        if f.rank != g.rank {
            return Err(Error::RankMismatch { left: f.rank, right: g.rank });
        }
        Ok(Endomorphism {
            rank: f.rank,
            images: g.images.iter().map(|w| f.apply_unchecked(w)).collect(),
        })
    }

    pub fn pow(&self, e: u32) -> Endomorphism {
        let mut acc = Endomorphism::identity(self.rank);
        for _ in 0..e {
            acc = Endomorphism::compose(self, &acc).expect("same rank");
        }
        acc
    }

    /// Integer matrix of the induced map on `Z^n`; column `i` is the image of `x_i`.
    pub fn abelianization(&self) -> Vec<Vec<i64>> {
        let cols: Vec<Vec<i64>> = self.images.iter().map(|w| w.abelianization()).collect();
        (0..self.rank).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
    }

    /// `φ_i = x_i^{-1} φ(x_i)` for each generator.
    pub fn displacements(&self) -> Vec<Word> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, img)| Word::generator(self.rank, i + 1).expect("in range").inverse().mul_unchecked(img))
            .collect()
    }

    /// Parses images separated by `;`, e.g. `"x2 x1 x2^-1; x2"`.
    pub fn parse(text: &str, rank: usize) -> Result<Endomorphism> {
        let parts: Vec<&str> = text.split(';').collect();
        if parts.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, got: parts.len() });
        }
        let mut offset = 0;
        let mut images = Vec::with_capacity(rank);
        for part in parts {
            let w = parse_word(part, rank).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
                other => other,
            })?;
            images.push(w);
            offset += part.len() + 1;
        }
        Endomorphism::new(images)
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// An automorphism stored together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub forward: Endomorphism,
    pub backward: Endomorphism,
}

impl Automorphism {
    pub fn identity(rank: usize) -> Automorphism {
        Automorphism {
            forward: Endomorphism::identity(rank),
            backward: Endomorphism::identity(rank),
        }
    }

    pub fn conjugation(rank: usize, i: usize, j: usize) -> Result<Automorphism> {
        Ok(Automorphism {
            forward: Endomorphism::conjugation_power(rank, i, j, 1)?,
            backward: Endomorphism::conjugation_power(rank, i, j, -1)?,
        })
    }

    pub fn commutator_transvection(rank: usize, i: usize, j: usize, k: usize) -> Result<Automorphism> {
        let forward = Endomorphism::commutator_transvection(rank, i, j, k)?;
        // x_i ↦ [x_j,x_k] x_i is undone by x_i ↦ [x_j,x_k]^{-1} x_i = [x_k,x_j] x_i.
        let backward = Endomorphism::commutator_transvection(rank, i, k, j)?;
        Ok(Automorphism { forward, backward })
    }

    /// `x_i ↦ w x_i` where `w` avoids `x_i`.
    pub fn left_multiplication(i: usize, w: &Word) -> Result<Automorphism> {
        if w.contains_generator(i) {
            return Err(Error::InvalidParameter(format!("multiplier must avoid x{i}")));
        }
        Ok(Automorphism {
            forward: Endomorphism::left_multiplication(i, w)?,
            backward: Endomorphism::left_multiplication(i, &w.inverse())?,
        })
    }

    /// `x_i ↦ x_i w` where `w` avoids `x_i`.
    pub fn right_multiplication(i: usize, w: &Word) -> Result<Automorphism> {
        if w.contains_generator(i) {
            return Err(Error::InvalidParameter(format!("multiplier must avoid x{i}")));
        }
        Ok(Automorphism {
            forward: Endomorphism::right_multiplication(i, w)?,
            backward: Endomorphism::right_multiplication(i, &w.inverse())?,
        })
    }

    pub fn permutation(perm: &[usize]) -> Result<Automorphism> {
        let forward = Endomorphism::permutation(perm)?;
        let mut inv = vec![0; perm.len()];
        for (i, &s) in perm.iter().enumerate() {
            inv[s - 1] = i + 1;
        }
        Ok(Automorphism { forward, backward: Endomorphism::permutation(&inv)? })
    }

    pub fn rank(&self) -> usize {
        self.forward.rank()
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    pub fn compose(f: &Automorphism, g: &Automorphism) -> Result<Automorphism> {
        Ok(Automorphism {
            forward: Endomorphism::compose(&f.forward, &g.forward)?,
            backward: Endomorphism::compose(&g.backward, &f.backward)?,
        })
    }

    /// Group commutator `f g f^{-1} g^{-1}`.
    pub fn commutator(f: &Automorphism, g: &Automorphism) -> Result<Automorphism> {
        let fg = Automorphism::compose(f, g)?;
        let fi_gi = Automorphism::compose(&f.inverse(), &g.inverse())?;
        Automorphism::compose(&fg, &fi_gi)
    }

    /// `h f h^{-1}`.
    pub fn conjugate(f: &Automorphism, h: &Automorphism) -> Result<Automorphism> {
        Automorphism::compose(&Automorphism::compose(h, f)?, &h.inverse())
    }

    pub fn pow(&self, e: i64) -> Automorphism {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Automorphism::identity(self.rank());
        for _ in 0..e.unsigned_abs() {
            acc = Automorphism::compose(&base, &acc).expect("same rank");
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, n: usize) -> Word {
        parse_word(s, n).unwrap()
    }

    #[test]
    fn parse_cancels() {
        assert!(w("x1 x1^-1", 2).is_identity());
        assert_eq!(w("[x1,x2]", 2), Word::from_signed(2, &[1, 2, -1, -2]).unwrap());
        assert_eq!(w("x1^3", 1), Word::from_signed(1, &[1, 1, 1]).unwrap());
        assert_eq!(w("(x1 x2)^-1", 2), Word::from_signed(2, &[-2, -1]).unwrap());
        assert_eq!(w("x1x2", 2).len(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_word("x3", 2), Err(Error::IndexOutOfRange { index: 3, rank: 2 })));
        assert!(matches!(parse_word("x1 ]", 2), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_word("[x1 x2]", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_word("", 2), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_word("x", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn group_laws() {
        let a = w("x1 x2^2 x3^-1", 3);
        let b = w("x3 x1", 3);
        assert!(Word::commutator(&a, &a).unwrap().is_identity());
        assert_eq!(Word::commutator(&a, &b).unwrap().inverse(), Word::commutator(&b, &a).unwrap());
        assert!(a.multiply(&a.inverse()).unwrap().is_identity());
        assert!(matches!(a.multiply(&Word::identity(2)), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn ia_generator_images() {
        let k12 = Endomorphism::conjugation(2, 1, 2).unwrap();
        assert_eq!(k12.apply(&w("x1", 2)).unwrap(), w("x2 x1 x2^-1", 2));
        let k123 = Endomorphism::commutator_transvection(3, 1, 2, 3).unwrap();
        assert_eq!(k123.apply(&w("x1", 3)).unwrap(), w("[x2,x3] x1", 3));
        let id = Endomorphism::identity(3);
        let u = w("x1 x3^-2 x2", 3);
        assert_eq!(id.apply(&u).unwrap(), u);
    }

    #[test]
    fn composition_order() {
        let f = Endomorphism::parse("x1 x2; x2", 2).unwrap();
        let g = Endomorphism::parse("x1^2; x2 x1", 2).unwrap();
        let fg = Endomorphism::compose(&f, &g).unwrap();
        let u = w("x1 x2^-1", 2);
        assert_eq!(fg.apply(&u).unwrap(), f.apply(&g.apply(&u).unwrap()).unwrap());
    }

    #[test]
    fn automorphism_inverses() {
        let gens = [
            Automorphism::conjugation(3, 1, 2).unwrap(),
            Automorphism::commutator_transvection(3, 2, 1, 3).unwrap(),
            Automorphism::permutation(&[2, 3, 1]).unwrap(),
            Automorphism::left_multiplication(1, &w("x2 x3^-1", 3)).unwrap(),
        ];
        for g in &gens {
            let c = Endomorphism::compose(&g.forward, &g.backward).unwrap();
            assert_eq!(c, Endomorphism::identity(3));
            let c = Endomorphism::compose(&g.backward, &g.forward).unwrap();
            assert_eq!(c, Endomorphism::identity(3));
        }
    }

    #[test]
    fn display_roundtrip() {
        let u = w("x1^3 x2^-2 [x1,x3]", 3);
        assert_eq!(parse_word(&u.to_string(), 3).unwrap(), u);
        assert_eq!(Word::identity(2).to_string(), "1");
        assert!(parse_word("1", 2).unwrap().is_identity());
    }
}
