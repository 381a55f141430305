//! Free Lie rings in Lyndon coordinates, free restricted Lie algebras and
//! graded derivations, all computed through the embedding into `TV`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{bigint_to_json, Ring};
use crate::tensor::{monomial_text, Monomial, TensorPoly};

/// Generates all Lyndon words of length exactly `k` over `n` letters, in
/// lexicographic order.
pub fn lyndon_words(n: usize, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    if n == 0 || k == 0 {
        return out;
    }
    let mut w: Vec<i32> = vec![-1];
    loop {
        *w.last_mut().expect("nonempty") += 1;
        if w.len() == k {
            out.push(w.iter().map(|&x| x as u8).collect());
        }
        let m = w.len();
        while w.len() < k {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&(n as i32 - 1)) {
            w.pop();
        }
        if w.is_empty() {
            break;
        }
    }
    out
}

pub fn is_lyndon(w: &[u8]) -> bool {
    let k = w.len();
    k > 0 && (1..k).all(|s| w[s..].iter().chain(&w[..s]).copied().gt(w.iter().copied()))
}

/// Split point of the standard factorization `w = uv`, `v` the longest
/// proper Lyndon suffix.
pub fn standard_split(w: &[u8]) -> usize {
    (1..w.len()).find(|&s| is_lyndon(&w[s..])).expect("Lyndon words of length >= 2 factor")
}

fn mobius(mut m: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

/// `(1/k) Σ_{e|k} μ(e) n^{k/e}`.
pub fn witt_dimension(n: usize, k: usize) -> usize {
    if k == 0 {
        return 0;
    }
    let mut total: i128 = 0;
    for e in 1..=k {
        if k % e == 0 {
            total += mobius(e) as i128 * (n as i128).pow((k / e) as u32);
        }
    }
    (total / k as i128) as usize
}

/// `Σ_{p^e | k} dim 𝔏_{k/p^e}`.
pub fn restricted_dimension(n: usize, k: usize, p: usize) -> usize {
    let mut total = 0;
    let mut q = 1;
    while k % q == 0 {
        total += witt_dimension(n, k / q);
        q *= p;
    }
    total
}

fn bracket_text(w: &[u8]) -> String {
    if w.len() == 1 {
        return monomial_text(w);
    }
    let s = standard_split(w);
    format!("[{},{}]", bracket_text(&w[..s]), bracket_text(&w[s..]))
}

/// The Lyndon basis of `𝔏_k` on `n` generators with tensor embeddings.
#[derive(Debug)]
pub struct LyndonBasis {
    pub rank: usize,
    pub degree: usize,
    words: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Computed on first use; high degrees only ever touch a few of them.
    embeddings: Vec<OnceLock<TensorPoly>>,
}

static LYNDON_CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<LyndonBasis>>>> = OnceLock::new();

impl LyndonBasis {
    /// Memoized basis for `(n, k)`.
    pub fn get(n: usize, k: usize) -> Arc<LyndonBasis> {
        let cache = LYNDON_CACHE.get_or_init(Default::default);
        if let Some(b) = cache.lock().expect("cache poisoned").get(&(n, k)) {
            return b.clone();
        }
        let built = Arc::new(Self::build(n, k));
        cache.lock().expect("cache poisoned").entry((n, k)).or_insert(built).clone()
    }

    fn build(n: usize, k: usize) -> LyndonBasis {
        let words = lyndon_words(n, k);
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let embeddings = words.iter().map(|_| OnceLock::new()).collect();
        LyndonBasis { rank: n, degree: k, words, index, embeddings }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Monomial] {
        &self.words
    }

    pub fn index_of(&self, w: &[u8]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Embedding of the `i`-th basis bracket, over the integers.
    pub fn embedding(&self, i: usize) -> &TensorPoly {
        self.embeddings[i].get_or_init(|| {
            let (n, k, w) = (self.rank, self.degree, &self.words[i]);
            if k == 1 {
                return TensorPoly::monomial(n, 1, Ring::Integers, w, BigInt::one());
            }
            let s = standard_split(w);
            let part = |sub: &[u8]| {
                let b = LyndonBasis::get(n, sub.len());
                let idx = b.index_of(sub).expect("standard factors are Lyndon");
                b.embedding(idx).with_degree_bound(k)
            };
            part(&w[..s]).commutator(&part(&w[s..])).expect("uniform")
        })
    }

    /// Standard bracketing of the `i`-th basis word, e.g. `[X1,[X1,X2]]`.
    pub fn bracketing(&self, i: usize) -> String {
        bracket_text(&self.words[i])
    }

    /// Documented basis order for reports.
    pub fn ordering(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.bracketing(i)).collect()
    }
}

/// Subtracts `c · e` from a working map of tensor coefficients.
fn subtract_scaled(work: &mut BTreeMap<Monomial, BigInt>, e: &TensorPoly, c: &BigInt, ring: Ring) {
    for (m, d) in e.terms() {
        let entry = work.entry(m.clone()).or_default();
        *entry = ring.reduce(&*entry - c * d);
        if entry.is_zero() {
            work.remove(m);
        }
    }
}

fn residual_text(work: BTreeMap<Monomial, BigInt>, n: usize, k: usize, ring: Ring) -> String {
    TensorPoly::from_terms(n, k, ring, work).to_string()
}

/// A homogeneous element of the free Lie ring in Lyndon coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieElement {
    rank: usize,
    degree: usize,
    ring: Ring,
    coords: Vec<BigInt>,
}

impl LieElement {
    pub fn zero(rank: usize, degree: usize, ring: Ring) -> Self {
        let dim = LyndonBasis::get(rank, degree).len();
        LieElement { rank, degree, ring, coords: vec![BigInt::zero(); dim] }
    }

    /// `X_i` (1-based).
    pub fn generator(rank: usize, i: usize, ring: Ring) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::IndexOutOfRange { index: i, rank });
        }
        let mut x = Self::zero(rank, 1, ring);
        x.coords[i - 1] = ring.one();
        Ok(x)
    }

    pub fn basis_element(rank: usize, degree: usize, ring: Ring, idx: usize) -> Self {
        let mut x = Self::zero(rank, degree, ring);
        x.coords[idx] = ring.one();
        x
    }

    pub fn from_coords(rank: usize, degree: usize, ring: Ring, coords: Vec<BigInt>) -> Result<Self> {
        let dim = LyndonBasis::get(rank, degree).len();
        if coords.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: coords.len() });
        }
        Ok(LieElement { rank, degree, ring, coords: coords.into_iter().map(|c| ring.reduce(c)).collect() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn embed(&self) -> TensorPoly {
        let basis = LyndonBasis::get(self.rank, self.degree);
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, d) in basis.embedding(i).terms() {
                *acc.entry(m.clone()).or_default() += c * d;
            }
        }
        TensorPoly::from_terms(self.rank, self.degree, self.ring, acc)
    }

    /// Exact Lyndon coordinates of a homogeneous degree-`k` tensor, or the
    /// residual left once the smallest monomial is not Lyndon.
    pub fn decompose(t: &TensorPoly, k: usize) -> Result<Self> {
        if !t.is_homogeneous_of(k) {
            return Err(Error::NotHomogeneous);
        }
        let (n, ring) = (t.rank(), t.ring());
        let basis = LyndonBasis::get(n, k);
        let mut coords = vec![BigInt::zero(); basis.len()];
        let mut work = t.terms().clone();
        while let Some((m, c)) = work.iter().next().map(|(m, c)| (m.clone(), c.clone())) {
            let Some(idx) = basis.index_of(&m) else {
                return Err(Error::NotLie { residual: residual_text(work, n, k, ring) });
            };
            subtract_scaled(&mut work, basis.embedding(idx), &c, ring);
            coords[idx] = c;
        }
        Ok(LieElement { rank: n, degree: k, ring, coords })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        self.ring.check_same(other.ring)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: other.degree });
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| self.ring.reduce(a + b)).collect();
        Ok(LieElement { coords, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let coords = self.coords.iter().map(|a| self.ring.reduce(a * c)).collect();
        LieElement { coords, ..self.clone() }
    }

    pub fn change_ring(&self, ring: Ring) -> Self {
        let coords = self.coords.iter().map(|a| ring.reduce(a.clone())).collect();
        LieElement { ring, coords, ..self.clone() }
    }

    /// `[x, y]`, computed as `xy - yx` in `TV` and decomposed.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let t = self.embed().with_degree_bound(self.degree + other.degree);
        let u = other.embed().with_degree_bound(self.degree + other.degree);
        let c = t.commutator(&u)?;
        Ok(LieElement::decompose(&c, self.degree + other.degree).expect("brackets of Lie elements are Lie"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coords.iter().map(bigint_to_json).collect())
    }

    /// Parses bracket expressions such as `2*[X1,X2] - [X2,X3]`.
    pub fn parse(text: &str, rank: usize, ring: Ring) -> Result<Self> {
        let mut p = LieParser { src: text.as_bytes(), pos: 0, rank, ring };
        let (t, k) = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse { pos: p.pos, msg: "unexpected trailing input".into() });
        }
        LieElement::decompose(&t.with_degree_bound(k), k)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = LyndonBasis::get(self.rank, self.degree);
        write_combination(f, self.coords.iter().enumerate().map(|(i, c)| (basis.bracketing(i), c)))
    }
}

fn write_combination<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (String, &'a BigInt)>) -> fmt::Result {
    let mut first = true;
    for (name, c) in terms {
        if c.is_zero() {
            continue;
        }
        let abs = c.abs();
        match (first, c.is_negative()) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        if abs.is_one() {
            write!(f, "{name}")?;
        } else {
            write!(f, "{abs}*{name}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

struct LieParser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
    ring: Ring,
}

const PARSE_BOUND: usize = 64;

impl LieParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn expr(&mut self) -> Result<(TensorPoly, usize)> {
        let mut sign = BigInt::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        }
        let (t, k) = self.term()?;
        let mut acc = t.scale(&sign);
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let (t, k2) = self.term()?;
            if k2 != k {
                return self.err("inhomogeneous expression");
            }
            acc = if c == b'+' { acc.add(&t)? } else { acc.sub(&t)? };
        }
        Ok((acc, k))
    }

    fn term(&mut self) -> Result<(TensorPoly, usize)> {
        let mut coeff = BigInt::one();
        if matches!(self.peek(), Some(b'0'..=b'9')) {
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            coeff = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").parse().expect("digits");
            if self.peek() != Some(b'*') {
                return self.err("expected '*'");
            }
            self.pos += 1;
        }
        let (t, k) = self.atom()?;
        Ok((t.scale(&coeff), k))
    }

    fn atom(&mut self) -> Result<(TensorPoly, usize)> {
        match self.peek() {
            Some(b'X') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return self.err("expected index after 'X'");
                }
                let i: usize = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").parse().expect("digits");
                Ok((TensorPoly::generator(self.rank, i, PARSE_BOUND, self.ring)?, 1))
            }
            Some(b'[') => {
                self.pos += 1;
                let (a, ka) = self.expr()?;
                if self.peek() != Some(b',') {
                    return self.err("expected ','");
                }
                self.pos += 1;
                let (b, kb) = self.expr()?;
                if self.peek() != Some(b']') {
                    return self.err("expected ']'");
                }
                self.pos += 1;
                Ok((a.commutator(&b)?, ka + kb))
            }
            _ => self.err("expected 'X' or '['"),
        }
    }
}

/// Basis of the free restricted Lie algebra in degree `k` over `F_p`:
/// `P(w)^{p^e}` for Lyndon `w` with `|w| p^e = k`.
#[derive(Debug)]
pub struct RestrictedBasis {
    pub rank: usize,
    pub degree: usize,
    pub p: u32,
    /// `(Lyndon word, e)` sorted by leading monomial `w^{p^e}`.
    elements: Vec<(Monomial, u32)>,
    index: HashMap<Monomial, usize>,
    embeddings: Vec<OnceLock<TensorPoly>>,
}

static RESTRICTED_CACHE: OnceLock<Mutex<HashMap<(usize, usize, u32), Arc<RestrictedBasis>>>> = OnceLock::new();

impl RestrictedBasis {
    pub fn get(n: usize, k: usize, p: u32) -> Arc<RestrictedBasis> {
        let cache = RESTRICTED_CACHE.get_or_init(Default::default);
        if let Some(b) = cache.lock().expect("cache poisoned").get(&(n, k, p)) {
            return b.clone();
        }
        let built = Arc::new(Self::build(n, k, p));
        cache.lock().expect("cache poisoned").entry((n, k, p)).or_insert(built).clone()
    }

    fn build(n: usize, k: usize, p: u32) -> RestrictedBasis {
        let mut items: Vec<(Monomial, Monomial, u32)> = Vec::new();
        let mut q = 1usize;
        let mut e = 0u32;
        while k % q == 0 {
            for w in LyndonBasis::get(n, k / q).words() {
                let lead: Monomial = w.iter().copied().cycle().take(k).collect();
                items.push((lead, w.clone(), e));
            }
            q *= p as usize;
            e += 1;
        }
        items.sort_by(|a, b| a.0.cmp(&b.0));
        let index = items.iter().enumerate().map(|(i, it)| (it.0.clone(), i)).collect();
        let embeddings = items.iter().map(|_| OnceLock::new()).collect();
        let elements = items.into_iter().map(|it| (it.1, it.2)).collect();
        RestrictedBasis { rank: n, degree: k, p, elements, index, embeddings }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[(Monomial, u32)] {
        &self.elements
    }

    pub fn embedding(&self, i: usize) -> &TensorPoly {
        self.embeddings[i].get_or_init(|| {
            let (n, k, ring) = (self.rank, self.degree, Ring::Prime(self.p));
            let (w, e) = &self.elements[i];
            let lie = LyndonBasis::get(n, w.len());
            let base = lie.embedding(lie.index_of(w).expect("Lyndon")).change_ring(ring).with_degree_bound(k);
            let mut power = TensorPoly::one(n, k, ring);
            for _ in 0..(self.p as usize).pow(*e) {
                power = power.mul(&base).expect("uniform");
            }
            power
        })
    }

    /// Position of the ordinary Lie basis element `w` (exponent 0).
    pub fn index_of_lie(&self, w: &[u8]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn name(&self, i: usize) -> String {
        let (w, e) = &self.elements[i];
        let b = bracket_text(w);
        if *e == 0 {
            b
        } else {
            format!("({b})^{}", (self.p as usize).pow(*e))
        }
    }
}

/// A homogeneous element of the free restricted Lie algebra over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RestrictedLieElement {
    rank: usize,
    degree: usize,
    p: u32,
    coords: Vec<BigInt>,
}

impl RestrictedLieElement {
    pub fn zero(rank: usize, degree: usize, p: u32) -> Self {
        let dim = RestrictedBasis::get(rank, degree, p).len();
        RestrictedLieElement { rank, degree, p, coords: vec![BigInt::zero(); dim] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Coordinates on the `p`-power basis elements (`e ≥ 1`).
    pub fn power_part(&self) -> Vec<(String, BigInt)> {
        let basis = RestrictedBasis::get(self.rank, self.degree, self.p);
        self.coords
            .iter()
            .enumerate()
            .filter(|(i, c)| basis.elements()[*i].1 > 0 && !c.is_zero())
            .map(|(i, c)| (basis.name(i), c.clone()))
            .collect()
    }

    /// The mod-`p` reduction of an ordinary Lie element.
    pub fn from_lie(x: &LieElement, p: u32) -> Self {
        let ring = Ring::Prime(p);
        let lie = LyndonBasis::get(x.rank, x.degree);
        let basis = RestrictedBasis::get(x.rank, x.degree, p);
        let mut coords = vec![BigInt::zero(); basis.len()];
        for (i, c) in x.coords.iter().enumerate() {
            let idx = basis.index_of_lie(&lie.words()[i]).expect("Lie basis is part of the restricted basis");
            coords[idx] = ring.reduce(c.clone());
        }
        RestrictedLieElement { rank: x.rank, degree: x.degree, p, coords }
    }

    pub fn embed(&self) -> TensorPoly {
        let basis = RestrictedBasis::get(self.rank, self.degree, self.p);
        let ring = Ring::Prime(self.p);
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, d) in basis.embedding(i).terms() {
                *acc.entry(m.clone()).or_default() += c * d;
            }
        }
        TensorPoly::from_terms(self.rank, self.degree, ring, acc)
    }

    /// Triangular decomposition over the restricted basis.
    pub fn decompose(t: &TensorPoly, k: usize) -> Result<Self> {
        let Ring::Prime(p) = t.ring() else {
            return Err(Error::RingMismatch { left: "F_p".into(), right: t.ring().to_string() });
        };
        if !t.is_homogeneous_of(k) {
            return Err(Error::NotHomogeneous);
        }
        let n = t.rank();
        let ring = t.ring();
        let basis = RestrictedBasis::get(n, k, p);
        let mut coords = vec![BigInt::zero(); basis.len()];
        let mut work = t.terms().clone();
        while let Some((m, c)) = work.iter().next().map(|(m, c)| (m.clone(), c.clone())) {
            let Some(&idx) = basis.index.get(&m) else {
                return Err(Error::NotRestrictedLie { residual: residual_text(work, n, k, ring) });
            };
            subtract_scaled(&mut work, basis.embedding(idx), &c, ring);
            coords[idx] = c;
        }
        Ok(RestrictedLieElement { rank: n, degree: k, p, coords })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coords.iter().map(bigint_to_json).collect())
    }
}

impl fmt::Display for RestrictedLieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = RestrictedBasis::get(self.rank, self.degree, self.p);
        write_combination(f, self.coords.iter().enumerate().map(|(i, c)| (basis.name(i), c)))
    }
}

fn write_derivation<T: fmt::Display>(f: &mut fmt::Formatter<'_>, values: &[T], zero: impl Fn(&T) -> bool) -> fmt::Result {
    let mut first = true;
    for (i, v) in values.iter().enumerate() {
        if zero(v) {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        write!(f, "X{}*⊗({})", i + 1, v)?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// A degree-`k` derivation of the free Lie ring: `X_i ↦ values[i] ∈ 𝔏_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    rank: usize,
    degree: usize,
    ring: Ring,
    values: Vec<LieElement>,
}

impl Derivation {
    pub fn zero(rank: usize, degree: usize, ring: Ring) -> Self {
        let v = LieElement::zero(rank, degree + 1, ring);
        Derivation { rank, degree, ring, values: vec![v; rank] }
    }

    pub fn from_values(values: Vec<LieElement>) -> Result<Self> {
        let first = values.first().ok_or(Error::InvalidParameter("no values".into()))?;
        let (rank, ring, vd) = (first.rank, first.ring, first.degree);
        if values.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, got: values.len() });
        }
        for v in &values {
            if v.rank != rank {
                return Err(Error::RankMismatch { left: rank, right: v.rank });
            }
            ring.check_same(v.ring)?;
            if v.degree != vd {
                return Err(Error::DimensionMismatch { expected: vd, got: v.degree });
            }
        }
        if vd == 0 {
            return Err(Error::InvalidParameter("values must have positive degree".into()));
        }
        Ok(Derivation { rank, degree: vd - 1, ring, values })
    }

    /// `X_i^* ⊗ x`: sends `X_i` to `x` and the other generators to zero.
    pub fn elementary(i: usize, x: &LieElement) -> Result<Self> {
        if i == 0 || i > x.rank {
            return Err(Error::IndexOutOfRange { index: i, rank: x.rank });
        }
        if x.degree == 0 {
            return Err(Error::InvalidParameter("values must have positive degree".into()));
        }
        let mut d = Derivation::zero(x.rank, x.degree - 1, x.ring);
        d.values[i - 1] = x.clone();
        Ok(d)
    }

    /// Dimension of `Der_k = V^* ⊗ 𝔏_{k+1}`.
    pub fn space_dimension(n: usize, k: usize) -> usize {
        n * witt_dimension(n, k + 1)
    }

    /// Rebuilds from `i`-major coordinates `(i, Lyndon index)`.
    pub fn from_coordinates(rank: usize, degree: usize, ring: Ring, coords: &[BigInt]) -> Result<Self> {
        let dim = witt_dimension(rank, degree + 1);
        if coords.len() != rank * dim {
            return Err(Error::DimensionMismatch { expected: rank * dim, got: coords.len() });
        }
        let values = coords
            .chunks(dim)
            .map(|c| LieElement::from_coords(rank, degree + 1, ring, c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation { rank, degree, ring, values })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn values(&self) -> &[LieElement] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn coordinates(&self) -> Vec<BigInt> {
        self.values.iter().flat_map(|v| v.coords.iter().cloned()).collect()
    }

    pub fn tensor_values(&self) -> Vec<TensorPoly> {
        self.values.iter().map(|v| v.embed()).collect()
    }

    /// Applies the derivation to a tensor by the Leibniz rule.
    pub fn apply_to_tensor(&self, t: &TensorPoly) -> Result<TensorPoly> {
        let bound = t.degree_bound() + self.degree;
        t.apply_derivation(&self.tensor_values(), bound)
    }

    pub fn apply(&self, x: &LieElement) -> Result<LieElement> {
        let t = self.apply_to_tensor(&x.embed())?;
        LieElement::decompose(&t, x.degree + self.degree)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: other.degree });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(Derivation { values, ..self.clone() })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Derivation { values: self.values.iter().map(|v| v.scale(c)).collect(), ..self.clone() }
    }

    pub fn change_ring(&self, ring: Ring) -> Self {
        Derivation { ring, values: self.values.iter().map(|v| v.change_ring(ring)).collect(), ..self.clone() }
    }

    /// `[d1, d2](X_i) = d1(d2(X_i)) - d2(d1(X_i))`.
    pub fn bracket(d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
        if d1.rank != d2.rank {
            return Err(Error::RankMismatch { left: d1.rank, right: d2.rank });
        }
        d1.ring.check_same(d2.ring)?;
        let deg = d1.degree + d2.degree;
        let t1 = d1.tensor_values();
        let t2 = d2.tensor_values();
        let mut values = Vec::with_capacity(d1.rank);
        for i in 0..d1.rank {
            let a = t2[i].apply_derivation(&t1, deg + 1)?;
            let b = t1[i].apply_derivation(&t2, deg + 1)?;
            let v = LieElement::decompose(&a.sub(&b)?, deg + 1).expect("brackets of derivations preserve 𝔏");
            values.push(v);
        }
        Ok(Derivation { rank: d1.rank, degree: deg, ring: d1.ring, values })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.values.iter().map(|v| v.to_json()).collect())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_derivation(f, &self.values, |v| v.is_zero())
    }
}

/// A degree-`k` derivation with values in the free restricted Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RestrictedDerivation {
    rank: usize,
    degree: usize,
    p: u32,
    values: Vec<RestrictedLieElement>,
}

impl RestrictedDerivation {
    /// Reduction mod `p` of an ordinary derivation.
    pub fn restricted_extend(d: &Derivation, p: u32) -> Self {
        RestrictedDerivation {
            rank: d.rank,
            degree: d.degree,
            p,
            values: d.values.iter().map(|v| RestrictedLieElement::from_lie(v, p)).collect(),
        }
    }

    pub fn from_values(values: Vec<RestrictedLieElement>) -> Result<Self> {
        let first = values.first().ok_or(Error::InvalidParameter("no values".into()))?;
        let (rank, p, vd) = (first.rank, first.p, first.degree);
        if values.len() != rank || vd == 0 {
            return Err(Error::DimensionMismatch { expected: rank, got: values.len() });
        }
        if values.iter().any(|v| v.rank != rank || v.p != p || v.degree != vd) {
            return Err(Error::InvalidParameter("values must share rank, prime and degree".into()));
        }
        Ok(RestrictedDerivation { rank, degree: vd - 1, p, values })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn values(&self) -> &[RestrictedLieElement] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Dimension of `V^* ⊗ 𝔏^{[p]}_{k+1}`.
    pub fn space_dimension(n: usize, k: usize, p: u32) -> usize {
        n * restricted_dimension(n, k + 1, p as usize)
    }

    pub fn coordinates(&self) -> Vec<BigInt> {
        self.values.iter().flat_map(|v| v.coords.iter().cloned()).collect()
    }

    pub fn tensor_values(&self) -> Vec<TensorPoly> {
        self.values.iter().map(|v| v.embed()).collect()
    }

    pub fn bracket(d1: &Self, d2: &Self) -> Result<Self> {
        if d1.rank != d2.rank || d1.p != d2.p {
            return Err(Error::RankMismatch { left: d1.rank, right: d2.rank });
        }
        let deg = d1.degree + d2.degree;
        let t1 = d1.tensor_values();
        let t2 = d2.tensor_values();
        let mut values = Vec::with_capacity(d1.rank);
        for i in 0..d1.rank {
            let a = t2[i].apply_derivation(&t1, deg + 1)?;
            let b = t1[i].apply_derivation(&t2, deg + 1)?;
            values.push(RestrictedLieElement::decompose(&a.sub(&b)?, deg + 1)?);
        }
        Ok(RestrictedDerivation { rank: d1.rank, degree: deg, p: d1.p, values })
    }

    /// The `p`-th power `d^p` (iterated composition), of degree `p·k`.
    pub fn p_power(&self) -> Result<Self> {
        let p = self.p as usize;
        let deg = p * self.degree;
        let t = self.tensor_values();
        let mut values = Vec::with_capacity(self.rank);
        for i in 0..self.rank {
            let mut x = TensorPoly::generator(self.rank, i + 1, deg + 1, Ring::Prime(self.p))?;
            for _ in 0..p {
                x = x.apply_derivation(&t, deg + 1)?;
            }
            values.push(RestrictedLieElement::decompose(&x, deg + 1)?);
        }
        Ok(RestrictedDerivation { rank: self.rank, degree: deg, p: self.p, values })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.values.iter().map(|v| v.to_json()).collect())
    }
}

impl fmt::Display for RestrictedDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_derivation(f, &self.values, |v| v.is_zero())
    }
}
