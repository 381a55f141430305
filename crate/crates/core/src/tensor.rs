//! The truncated tensor algebra `TV`, Magnus expansions, valuations,
//! the contraction map and cyclic quotients.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_ring::GroupRingElement;
use crate::ring::{bigint_to_json, Ring};
use crate::word::{Letter, Word};

/// A monomial `X_{i_1} ⋯ X_{i_m}` stored with 0-based indices.
pub type Monomial = Vec<u8>;

/// An element of `TV` truncated above a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorPoly {
    rank: usize,
    degree_bound: usize,
    ring: Ring,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TensorPoly {
    pub fn zero(rank: usize, degree_bound: usize, ring: Ring) -> Self {
        assert!(rank <= u8::MAX as usize, "rank above 255 is unsupported");
        TensorPoly { rank, degree_bound, ring, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize, degree_bound: usize, ring: Ring) -> Self {
        Self::monomial(rank, degree_bound, ring, &[], BigInt::one())
    }

    /// `X_i` (1-based).
    pub fn generator(rank: usize, i: usize, degree_bound: usize, ring: Ring) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::IndexOutOfRange { index: i, rank });
        }
        Ok(Self::monomial(rank, degree_bound, ring, &[(i - 1) as u8], BigInt::one()))
    }

    pub fn monomial(rank: usize, degree_bound: usize, ring: Ring, m: &[u8], c: BigInt) -> Self {
        let mut t = Self::zero(rank, degree_bound, ring);
        t.add_term(m.to_vec(), c);
        t
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u8]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigInt) {
        if m.len() > self.degree_bound {
            return;
        }
        debug_assert!(m.iter().all(|&g| (g as usize) < self.rank));
        let c = self.ring.reduce(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ring.reduce(o.get() + c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub(crate) fn from_terms(
        rank: usize,
        degree_bound: usize,
        ring: Ring,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Self {
        let mut t = Self::zero(rank, degree_bound, ring);
        for (m, c) in terms {
            t.add_term(m, c);
        }
        t
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
        out.degree_bound = self.degree_bound.min(other.degree_bound);
        out.terms.retain(|m, _| m.len() <= out.degree_bound);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
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
        let mut out = Self::zero(self.rank, self.degree_bound, self.ring);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d * c);
        }
        out
    }

    /// Product, truncated at the smaller of the two degree bounds.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let bound = self.degree_bound.min(other.degree_bound);
        let mut out = Self::zero(self.rank, bound, self.ring);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.len() + b.len() <= bound {
                    let mut m = Vec::with_capacity(a.len() + b.len());
                    m.extend_from_slice(a);
                    m.extend_from_slice(b);
                    out.add_term(m, x * y);
                }
            }
        }
        Ok(out)
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn with_degree_bound(&self, degree_bound: usize) -> Self {
        let mut out = self.clone();
        out.degree_bound = degree_bound;
        out.terms.retain(|m, _| m.len() <= degree_bound);
        out
    }

    pub fn change_ring(&self, ring: Ring) -> Self {
        Self::from_terms(self.rank, self.degree_bound, ring, self.terms.clone())
    }

    /// The degree-`k` part.
    pub fn graded_component(&self, k: usize) -> Self {
        let mut out = Self::zero(self.rank, self.degree_bound, self.ring);
        out.terms = self.terms.iter().filter(|(m, _)| m.len() == k).map(|(m, c)| (m.clone(), c.clone())).collect();
        out
    }

    /// The common degree of all terms; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.len());
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.len() == k)
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.len()).min()
    }

    /// Contraction against `X_i^*` (1-based) on the last letter of a
    /// homogeneous element; constants go to zero.
    pub fn contract(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.rank {
            return Err(Error::IndexOutOfRange { index: i, rank: self.rank });
        }
        if !self.is_zero() && self.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous);
        }
        let g = (i - 1) as u8;
        let mut out = Self::zero(self.rank, self.degree_bound, self.ring);
        for (m, c) in &self.terms {
            if m.last() == Some(&g) {
                out.add_term(m[..m.len() - 1].to_vec(), c.clone());
            }
        }
        Ok(out)
    }

    /// Replaces each letter `X_j` by `values[j]` using the Leibniz rule,
    /// i.e. applies the algebra derivation determined by `values`.
    pub fn apply_derivation(&self, values: &[TensorPoly], degree_bound: usize) -> Result<Self> {
        if values.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: values.len() });
        }
        let mut out = Self::zero(self.rank, degree_bound, self.ring);
        for (m, c) in &self.terms {
            for (pos, &g) in m.iter().enumerate() {
                let v = &values[g as usize];
                for (vm, vc) in &v.terms {
                    let len = m.len() - 1 + vm.len();
                    if len > degree_bound {
                        continue;
                    }
                    let mut mono = Vec::with_capacity(len);
                    mono.extend_from_slice(&m[..pos]);
                    mono.extend_from_slice(vm);
                    mono.extend_from_slice(&m[pos + 1..]);
                    out.add_term(mono, c * vc);
                }
            }
        }
        Ok(out)
    }

    /// Applies the algebra endomorphism `X_j ↦ values[j]`.
    pub fn substitute(&self, values: &[TensorPoly]) -> Result<Self> {
        if values.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: values.len() });
        }
        let bound = values.iter().map(|v| v.degree_bound).min().unwrap_or(self.degree_bound).min(self.degree_bound);
        let mut out = Self::zero(self.rank, bound, self.ring);
        for (m, c) in &self.terms {
            let mut acc = Self::monomial(self.rank, bound, self.ring, &[], c.clone());
            for &g in m {
                acc = acc.mul(&values[g as usize])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Class sums over rotation classes of the degree-`k` component.
    ///
    /// With `p_restricted`, classes of `p`-th power monomials are zeroed;
    /// this requires a prime coefficient field.
    pub fn cyclic_project(&self, k: usize, p_restricted: bool) -> Result<CyclicClassVector> {
        if !self.is_homogeneous_of(k) {
            return Err(Error::NotHomogeneous);
        }
        let p = match (p_restricted, self.ring) {
            (false, _) => None,
            (true, Ring::Prime(p)) => Some(p as usize),
            (true, Ring::Integers) => {
                return Err(Error::InvalidParameter("p-restricted projection needs a prime field".into()))
            }
        };
        let mut classes: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some(p) = p {
                if is_pth_power(m, p) {
                    continue;
                }
            }
            *classes.entry(min_rotation(m)).or_default() += c;
        }
        let ring = self.ring;
        let classes = classes
            .into_iter()
            .map(|(m, c)| (m, ring.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(CyclicClassVector { degree: k, ring, p_restricted, classes })
    }

    /// Membership in `[TV,TV]_k` (plus `p`-th powers with the flag), decided
    /// exactly through the class sums.
    pub fn in_bracket_subspace(&self, k: usize, p_restricted: bool) -> Result<bool> {
        Ok(self.cyclic_project(k, p_restricted)?.is_zero())
    }

    /// Evaluates `X_i` at random weighted cyclic shifts in `M_k` and checks
    /// that every sampled trace vanishes. `false` certifies non-membership.
    pub fn bryant_matrix_test(&self, k: usize, samples: usize, seed: u64) -> Result<bool> {
        Ok(self.bryant_refutation(k, samples, seed)?.is_none())
    }

    /// Index of the first sample with nonzero trace, if any.
    pub fn bryant_refutation(&self, k: usize, samples: usize, seed: u64) -> Result<Option<usize>> {
        if !self.is_homogeneous_of(k) {
            return Err(Error::NotHomogeneous);
        }
        if k == 0 {
            let c = self.coefficient(&[]);
            return Ok((!c.is_zero()).then_some(0));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in 0..samples {
            let weights: Vec<Vec<BigInt>> = (0..self.rank)
                .map(|_| {
                    (0..k)
                        .map(|_| match self.ring {
                            Ring::Integers => BigInt::from(rng.random_range(-50i64..=50)),
                            Ring::Prime(p) => BigInt::from(rng.random_range(0..p)),
                        })
                        .collect()
                })
                .collect();
            if !self.shift_trace(k, &weights).is_zero() {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    /// `tr(t(C_1, …, C_n))` with `C_i = Σ_j weights[i][j] e_{j,j+1 mod k}`.
    pub fn shift_trace(&self, k: usize, weights: &[Vec<BigInt>]) -> BigInt {
        let mats: Vec<SquareMatrix> = weights
            .iter()
            .map(|w| {
                let mut m = SquareMatrix::zero(k);
                for j in 0..k {
                    m.set(j, (j + 1) % k, w[j].clone());
                }
                m
            })
            .collect();
        let mut total = BigInt::zero();
        for (mono, c) in &self.terms {
            let mut acc = SquareMatrix::identity(k);
            for &g in mono {
                acc = acc.mul(&mats[g as usize], self.ring);
            }
            total += c * acc.trace();
        }
        self.ring.reduce(total)
    }

    /// Coefficient–monomial pairs for reports.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| serde_json::json!([bigint_to_json(c), monomial_text(m)]))
                .collect(),
        )
    }

    /// Parses `2*X1X2 - X2X1 + 3`.
    pub fn parse(text: &str, rank: usize, degree_bound: usize, ring: Ring) -> Result<Self> {
        let mut out = Self::zero(rank, degree_bound, ring);
        let bytes = text.as_bytes();
        let mut sign = 1i64;
        let mut start = 0usize;
        let mut pieces = Vec::new();
        let mut prev: Option<u8> = None;
        for (pos, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && prev != Some(b'*') {
                if text[start..pos].trim().is_empty() {
                    if b == b'-' {
                        sign = -sign;
                    }
                } else {
                    pieces.push((start, pos, sign));
                    sign = if b == b'-' { -1 } else { 1 };
                }
                start = pos + 1;
            }
            if !b.is_ascii_whitespace() {
                prev = Some(b);
            }
        }
        if text[start..].trim().is_empty() {
            return Err(Error::Parse { pos: bytes.len(), msg: "expected a term".into() });
        }
        pieces.push((start, bytes.len(), sign));
        for (s, e, sign) in pieces {
            let mut coeff = BigInt::from(sign);
            let mut mono = Vec::new();
            let mut off = s;
            for factor in text[s..e].split('*') {
                let t = factor.trim();
                let lead = factor.len() - factor.trim_start().len();
                if t.is_empty() {
                    return Err(Error::Parse { pos: off, msg: "empty factor".into() });
                }
                if t.bytes().all(|c| c.is_ascii_digit()) {
                    coeff *= t.parse::<BigInt>().expect("digits");
                } else {
                    mono.extend(parse_monomial(t, rank).map_err(|err| match err {
                        Error::Parse { pos, msg } => Error::Parse { pos: pos + off + lead, msg },
                        other => other,
                    })?);
                }
                off += factor.len() + 1;
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

/// Parses `X1X2X1` (whitespace between tokens allowed) into 0-based indices.
pub fn parse_monomial(text: &str, rank: usize) -> Result<Monomial> {
    let b = text.as_bytes();
    let mut pos = 0;
    let mut out = Vec::new();
    while pos < b.len() {
        if b[pos].is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        if b[pos] != b'X' {
            return Err(Error::Parse { pos, msg: "expected 'X'".into() });
        }
        pos += 1;
        let start = pos;
        while pos < b.len() && b[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Parse { pos, msg: "expected index after 'X'".into() });
        }
        let idx: usize = text[start..pos].parse().map_err(|_| Error::Parse { pos: start, msg: "bad index".into() })?;
        if idx == 0 || idx > rank {
            return Err(Error::IndexOutOfRange { index: idx, rank });
        }
        out.push((idx - 1) as u8);
    }
    Ok(out)
}

pub fn monomial_text(m: &[u8]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter().map(|g| format!("X{}", g + 1)).collect()
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", monomial_text(m))?;
            } else {
                write!(f, "{abs}*{}", monomial_text(m))?;
            }
        }
        Ok(())
    }
}

/// The lexicographically minimal rotation.
pub fn min_rotation(m: &[u8]) -> Monomial {
    let k = m.len();
    let mut best = m.to_vec();
    for s in 1..k {
        let rot: Vec<u8> = m[s..].iter().chain(&m[..s]).copied().collect();
        if rot < best {
            best = rot;
        }
    }
    best
}

/// Smallest `d` such that the sequence is invariant under rotation by `d`.
pub fn minimal_period(m: &[u8]) -> usize {
    let k = m.len();
    (1..=k).find(|&d| k % d == 0 && (0..k).all(|i| m[i] == m[(i + d) % k])).unwrap_or(k)
}

/// Whether the monomial is a `p`-th power of a monomial.
pub fn is_pth_power(m: &[u8], p: usize) -> bool {
    !m.is_empty() && (m.len() / minimal_period(m)) % p == 0
}

/// Number of rotation classes of length-`k` sequences over `n` letters.
pub fn necklace_count(n: usize, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    let mut total: u128 = 0;
    for d in 1..=k {
        if k % d == 0 {
            total += euler_phi(k / d) as u128 * (n as u128).pow(d as u32);
        }
    }
    (total / k as u128) as usize
}

fn euler_phi(mut m: usize) -> usize {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// An element of `C_kV` (or `C_k^{[p]}V`), keyed by necklace representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicClassVector {
    pub degree: usize,
    pub ring: Ring,
    pub p_restricted: bool,
    pub classes: BTreeMap<Monomial, BigInt>,
}

impl CyclicClassVector {
    pub fn zero(degree: usize, ring: Ring, p_restricted: bool) -> Self {
        CyclicClassVector { degree, ring, p_restricted, classes: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, necklace: &[u8]) -> BigInt {
        self.classes.get(&min_rotation(necklace)).cloned().unwrap_or_default()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.classes
                .iter()
                .map(|(m, c)| serde_json::json!([bigint_to_json(c), monomial_text(m)]))
                .collect(),
        )
    }
}

impl fmt::Display for CyclicClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.classes.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.classes.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}]: {}", monomial_text(m), c)?;
        }
        Ok(())
    }
}

impl Serialize for CyclicClassVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl Serialize for TensorPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[derive(Clone, Debug)]
struct SquareMatrix {
    k: usize,
    data: Vec<BigInt>,
}

impl SquareMatrix {
    fn zero(k: usize) -> Self {
        SquareMatrix { k, data: vec![BigInt::zero(); k * k] }
    }

    fn identity(k: usize) -> Self {
        let mut m = Self::zero(k);
        for i in 0..k {
            m.data[i * k + i] = BigInt::one();
        }
        m
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.k + c] = v;
    }

    fn mul(&self, other: &Self, ring: Ring) -> Self {
        let k = self.k;
        let mut out = Self::zero(k);
        for r in 0..k {
            for j in 0..k {
                let a = &self.data[r * k + j];
                if a.is_zero() {
                    continue;
                }
                for c in 0..k {
                    let b = &other.data[j * k + c];
                    if !b.is_zero() {
                        out.data[r * k + c] += a * b;
                    }
                }
            }
        }
        for v in &mut out.data {
            *v = ring.reduce(std::mem::take(v));
        }
        out
    }

    fn trace(&self) -> BigInt {
        (0..self.k).map(|i| self.data[i * self.k + i].clone()).sum()
    }
}

/// Lower bound on the degree of the first nonzero Magnus component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Valuation {
    /// The first nonzero component sits in this degree.
    Exact(usize),
    /// All components up to the cap vanish; the valuation is at least this.
    AtLeast(usize),
}

impl Valuation {
    pub fn lower_bound(self) -> usize {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    /// True when the valuation is certainly at least `k`.
    pub fn is_at_least(self, k: usize) -> bool {
        self.lower_bound() >= k
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Dense Magnus engine.
//
// A truncated series is stored degree by degree; the degree-`m` block is a
// dense array of length `n^m` indexed big-endian, so index order agrees with
// lexicographic order of monomials.

pub(crate) trait Arith {
    type V: Clone;
    fn zero(&self) -> Self::V;
    fn one(&self) -> Self::V;
    fn is_zero(&self, v: &Self::V) -> bool;
    fn add_to(&self, a: &mut Self::V, b: &Self::V);
    fn sub_from(&self, a: &mut Self::V, b: &Self::V);
    fn from_big(&self, c: &BigInt) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn to_big(&self, v: &Self::V) -> BigInt;
}

pub(crate) struct BigArith;

impl Arith for BigArith {
    type V = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, v: &BigInt) -> bool {
        v.is_zero()
    }
    fn add_to(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }
    fn sub_from(&self, a: &mut BigInt, b: &BigInt) {
        *a -= b;
    }
    fn from_big(&self, c: &BigInt) -> BigInt {
        c.clone()
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn to_big(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
}

/// `i128` arithmetic that records overflow instead of failing; callers rerun
/// with [`BigArith`] when the flag is raised.
#[derive(Default)]
pub(crate) struct I128Arith {
    overflow: Cell<bool>,
}

impl I128Arith {
    pub(crate) fn overflowed(&self) -> bool {
        self.overflow.get()
    }
}

impl Arith for I128Arith {
    type V = i128;
    fn zero(&self) -> i128 {
        0
    }
    fn one(&self) -> i128 {
        1
    }
    fn is_zero(&self, v: &i128) -> bool {
        *v == 0
    }
    fn add_to(&self, a: &mut i128, b: &i128) {
        match a.checked_add(*b) {
            Some(s) => *a = s,
            None => self.overflow.set(true),
        }
    }
    fn sub_from(&self, a: &mut i128, b: &i128) {
        match a.checked_sub(*b) {
            Some(s) => *a = s,
            None => self.overflow.set(true),
        }
    }
    fn from_big(&self, c: &BigInt) -> i128 {
        c.to_i128().unwrap_or_else(|| {
            self.overflow.set(true);
            0
        })
    }
    fn mul(&self, a: &i128, b: &i128) -> i128 {
        a.checked_mul(*b).unwrap_or_else(|| {
            self.overflow.set(true);
            0
        })
    }
    fn to_big(&self, v: &i128) -> BigInt {
        BigInt::from(*v)
    }
}

pub(crate) struct ModArith(pub u64);

impl Arith for ModArith {
    type V = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn is_zero(&self, v: &u64) -> bool {
        *v == 0
    }
    fn add_to(&self, a: &mut u64, b: &u64) {
        *a = (*a + *b) % self.0;
    }
    fn sub_from(&self, a: &mut u64, b: &u64) {
        *a = (*a + self.0 - *b) % self.0;
    }
    fn from_big(&self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.0)).to_u64().expect("reduced")
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn to_big(&self, v: &u64) -> BigInt {
        BigInt::from(*v)
    }
}

pub(crate) struct Dense<V> {
    n: usize,
    levels: Vec<Vec<V>>,
}

impl<V: Clone> Dense<V> {
    pub(crate) fn zero<A: Arith<V = V>>(a: &A, n: usize, d: usize) -> Self {
        let levels = (0..=d).map(|m| vec![a.zero(); n.pow(m as u32)]).collect();
        Dense { n, levels }
    }

    pub(crate) fn identity<A: Arith<V = V>>(a: &A, n: usize, d: usize) -> Self {
        let mut s = Self::zero(a, n, d);
        s.levels[0][0] = a.one();
        s
    }

    fn degree_bound(&self) -> usize {
        self.levels.len() - 1
    }

    /// Right multiplication by the Magnus image of one letter.
    pub(crate) fn right_mul_letter<A: Arith<V = V>>(&mut self, a: &A, l: Letter) {
        let n = self.n;
        let g = l.generator() - 1;
        let d = self.degree_bound();
        if l.is_inverse() {
            // y (1 + X_g) = v  ⇒  y_m = v_m - y_{m-1} X_g, solved upwards.
            for m in 1..=d {
                let (lo, hi) = self.levels.split_at_mut(m);
                let prev = &lo[m - 1];
                let cur = &mut hi[0];
                for (idx, v) in prev.iter().enumerate() {
                    if !a.is_zero(v) {
                        a.sub_from(&mut cur[idx * n + g], v);
                    }
                }
            }
        } else {
            for m in (1..=d).rev() {
                let (lo, hi) = self.levels.split_at_mut(m);
                let prev = &lo[m - 1];
                let cur = &mut hi[0];
                for (idx, v) in prev.iter().enumerate() {
                    if !a.is_zero(v) {
                        a.add_to(&mut cur[idx * n + g], v);
                    }
                }
            }
        }
    }

    pub(crate) fn add_assign<A: Arith<V = V>>(&mut self, a: &A, other: &Self, negate: bool) {
        for (x, y) in self.levels.iter_mut().zip(&other.levels) {
            for (u, v) in x.iter_mut().zip(y) {
                if !a.is_zero(v) {
                    if negate {
                        a.sub_from(u, v);
                    } else {
                        a.add_to(u, v);
                    }
                }
            }
        }
    }

    pub(crate) fn add_scaled<A: Arith<V = V>>(&mut self, a: &A, other: &Self, c: &V) {
        for (x, y) in self.levels.iter_mut().zip(&other.levels) {
            for (u, v) in x.iter_mut().zip(y) {
                if !a.is_zero(v) {
                    a.add_to(u, &a.mul(v, c));
                }
            }
        }
    }

    pub(crate) fn to_tensor<A: Arith<V = V>>(&self, a: &A, ring: Ring) -> TensorPoly {
        let mut t = TensorPoly::zero(self.n, self.degree_bound(), ring);
        for (m, level) in self.levels.iter().enumerate() {
            for (idx, v) in level.iter().enumerate() {
                if !a.is_zero(v) {
                    t.terms.insert(index_to_monomial(idx, self.n, m), ring.reduce(a.to_big(v)));
                }
            }
        }
        t.terms.retain(|_, c| !c.is_zero());
        t
    }
}

pub(crate) fn index_to_monomial(mut idx: usize, n: usize, m: usize) -> Monomial {
    let mut out = vec![0u8; m];
    for slot in out.iter_mut().rev() {
        *slot = (idx % n) as u8;
        idx /= n;
    }
    out
}

/// Runs a dense computation over the arithmetic matching `ring`, falling back
/// from `i128` to big integers on overflow.
macro_rules! with_arith {
    ($ring:expr, |$a:ident| $body:expr) => {{
        match $ring {
            Ring::Prime(p) => {
                let $a = &ModArith(p as u64);
                $body
            }
            Ring::Integers => {
                let fast = I128Arith::default();
                let result = {
                    let $a = &fast;
                    $body
                };
                if fast.overflowed() {
                    let $a = &BigArith;
                    $body
                } else {
                    result
                }
            }
        }
    }};
}

fn magnus_words<A: Arith>(a: &A, n: usize, d: usize, ring: Ring, terms: &[(&Word, &BigInt)]) -> TensorPoly {
    let mut acc = Dense::zero(a, n, d);
    for (w, c) in terms {
        let mut s = Dense::identity(a, n, d);
        for &l in w.letters() {
            s.right_mul_letter(a, l);
        }
        acc.add_scaled(a, &s, &a.from_big(c));
    }
    acc.to_tensor(a, ring)
}

/// The Magnus expansion `x_i ↦ 1 + X_i`, truncated above degree `d`.
pub fn magnus(u: &GroupRingElement, d: usize) -> TensorPoly {
    let terms: Vec<(&Word, &BigInt)> = u.terms().iter().collect();
    let n = u.rank();
    with_arith!(u.ring(), |a| magnus_words(a, n, d, u.ring(), &terms))
}

pub fn magnus_word(w: &Word, d: usize, ring: Ring) -> TensorPoly {
    let one = BigInt::one();
    with_arith!(ring, |a| magnus_words(a, w.rank(), d, ring, &[(w, &one)]))
}

fn magnus_fox_inner<A: Arith>(a: &A, w: &Word, i: usize, d: usize, ring: Ring) -> TensorPoly {
    let n = w.rank();
    let mut prefix = Dense::identity(a, n, d);
    let mut acc = Dense::zero(a, n, d);
    for &l in w.letters() {
        let hit = l.generator() == i;
        if hit && !l.is_inverse() {
            acc.add_assign(a, &prefix, false);
        }
        prefix.right_mul_letter(a, l);
        if hit && l.is_inverse() {
            acc.add_assign(a, &prefix, true);
        }
    }
    acc.to_tensor(a, ring)
}

/// Magnus expansion of `∂w/∂x_i`, computed in one pass without forming the
/// Fox derivative in the group ring.
pub fn magnus_fox_derivative(w: &Word, i: usize, d: usize, ring: Ring) -> Result<TensorPoly> {
    if i == 0 || i > w.rank() {
        return Err(Error::IndexOutOfRange { index: i, rank: w.rank() });
    }
    Ok(with_arith!(ring, |a| magnus_fox_inner(a, w, i, d, ring)))
}

/// Degree of the first nonzero Magnus component, capped at `d_max`.
pub fn valuation(u: &GroupRingElement, d_max: usize) -> Result<Valuation> {
    if u.is_zero() {
        return Err(Error::ZeroElement);
    }
    let t = magnus(u, d_max);
    Ok(match t.lowest_degree() {
        Some(v) => Valuation::Exact(v),
        None => Valuation::AtLeast(d_max + 1),
    })
}

/// Valuation of `w - 1`; the identity word has unbounded valuation.
pub fn word_valuation(w: &Word, ring: Ring, d_max: usize) -> Valuation {
    if w.is_identity() {
        return Valuation::AtLeast(d_max + 1);
    }
    let mut t = magnus_word(w, d_max, ring);
    t.add_term(Vec::new(), -BigInt::one());
    match t.lowest_degree() {
        Some(v) => Valuation::Exact(v),
        None => Valuation::AtLeast(d_max + 1),
    }
}

/// Degree-`k` Magnus component of `w - 1`.
pub fn word_component(w: &Word, k: usize, ring: Ring) -> TensorPoly {
    let mut t = magnus_word(w, k, ring).graded_component(k);
    if k == 0 {
        t.add_term(Vec::new(), -BigInt::one());
    }
    t
}
