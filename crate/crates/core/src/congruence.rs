//! Congruence subgroups `GL_n(q^k ℤ)`, their graded symbols in
//! `𝔰𝔩_n(ℤ/q)·t^k`, and explicit commutator witnesses.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{snf_of_basis, HnfBasis, IntMatrix};
use crate::sampling::{rng, SampleRng};

/// An integer matrix congruent to the identity modulo `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceMatrix {
    q: u64,
    m: IntMatrix,
}

fn check_modulus(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("modulus must be at least 2, got {q}")));
    }
    Ok(())
}

/// `Id + t·e_{αβ}` (1-based indices).
pub fn shear(n: usize, alpha: usize, beta: usize, t: &BigInt) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    let v = m.get(alpha - 1, beta - 1) + t;
    m.set(alpha - 1, beta - 1, v);
    m
}

fn sub_identity(m: &IntMatrix) -> IntMatrix {
    let mut d = m.clone();
    for i in 0..m.rows() {
        let v = d.get(i, i) - 1;
        d.set(i, i, v);
    }
    d
}

impl CongruenceMatrix {
    pub fn new(m: IntMatrix, q: u64) -> Result<Self> {
        check_modulus(q)?;
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
        }
        let d = sub_identity(&m);
        let qb = BigInt::from(q);
        if (0..m.rows()).any(|r| d.row(r).iter().any(|x| !(x % &qb).is_zero())) {
            return Err(Error::InvalidParameter(format!("matrix is not congruent to the identity mod {q}")));
        }
        Ok(CongruenceMatrix { q, m })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn is_invertible(&self) -> bool {
        self.m.determinant().expect("square").abs().is_one()
    }

    /// Largest `k` with `M ≡ Id mod q^k`; `None` for the identity.
    pub fn depth(&self) -> Option<usize> {
        let d = sub_identity(&self.m);
        let qb = BigInt::from(self.q);
        let mut best: Option<usize> = None;
        for r in 0..d.rows() {
            for x in d.row(r) {
                if x.is_zero() {
                    continue;
                }
                let mut v = 0;
                let mut y = x.clone();
                while (&y % &qb).is_zero() {
                    y /= &qb;
                    v += 1;
                }
                best = Some(best.map_or(v, |b: usize| b.min(v)));
            }
        }
        best
    }

    /// `(M − Id)/q^k mod q` at the depth `k`; `None` for the identity.
    pub fn symbol(&self) -> Option<GradedSymbol> {
        let k = self.depth()?;
        let qb = BigInt::from(self.q);
        let scale = qb.pow(k as u32);
        let d = sub_identity(&self.m);
        let n = self.size();
        let mut s = IntMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                s.set(r, c, (d.get(r, c) / &scale).mod_floor(&qb));
            }
        }
        Some(GradedSymbol { degree: k, q: self.q, matrix: s })
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.q != other.q {
            return Err(Error::InvalidParameter("moduli differ".into()));
        }
        Ok(CongruenceMatrix { q: self.q, m: self.m.mul(&other.m)? })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(CongruenceMatrix { q: self.q, m: self.m.inverse()? })
    }

    /// `A B A^{-1} B^{-1}`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        a.multiply(b)?.multiply(&a.inverse()?)?.multiply(&b.inverse()?)
    }
}

/// A class `S·t^k` with `S` an `n × n` matrix over `ℤ/q`, entries in `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedSymbol {
    pub degree: usize,
    pub q: u64,
    pub matrix: IntMatrix,
}

impl GradedSymbol {
    pub fn from_matrix(degree: usize, q: u64, m: &IntMatrix) -> Self {
        let qb = BigInt::from(q);
        let mut s = m.clone();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                s.set(r, c, m.get(r, c).mod_floor(&qb));
            }
        }
        GradedSymbol { degree, q, matrix: s }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn trace(&self) -> BigInt {
        let t: BigInt = (0..self.matrix.rows()).map(|i| self.matrix.get(i, i).clone()).sum();
        t.mod_floor(&BigInt::from(self.q))
    }

    /// `[S, T] = ST − TS`, in degree `deg S + deg T`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let st = self.matrix.mul(&other.matrix)?;
        let ts = other.matrix.mul(&self.matrix)?;
        let mut d = st;
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                let v = d.get(r, c) - ts.get(r, c);
                d.set(r, c, v);
            }
        }
        Ok(GradedSymbol::from_matrix(self.degree + other.degree, self.q, &d))
    }

    /// Row-major entries as an integer vector.
    pub fn flatten(&self) -> Vec<BigInt> {
        (0..self.matrix.rows()).flat_map(|r| self.matrix.row(r).to_vec()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketCompatReport {
    pub depth_a: Option<usize>,
    pub depth_b: Option<usize>,
    pub depth_commutator: Option<usize>,
    /// `depth [A,B] ≥ depth A + depth B`.
    pub inequality_holds: bool,
    /// The symbol of `[A,B]` in degree `depth A + depth B` (zero when the
    /// commutator is deeper) equals the bracket of symbols.
    pub symbols_match: bool,
}

impl BracketCompatReport {
    pub fn holds(&self) -> bool {
        self.inequality_holds && self.symbols_match
    }
}

pub fn verify_bracket_compat(a: &CongruenceMatrix, b: &CongruenceMatrix) -> Result<BracketCompatReport> {
    let c = CongruenceMatrix::commutator(a, b)?;
    let (da, db, dc) = (a.depth(), b.depth(), c.depth());
    let (Some(sa), Some(sb)) = (a.symbol(), b.symbol()) else {
        // The identity commutes with everything: [A,B] = Id.
        return Ok(BracketCompatReport {
            depth_a: da,
            depth_b: db,
            depth_commutator: dc,
            inequality_holds: dc.is_none(),
            symbols_match: dc.is_none(),
        });
    };
    let target = sa.depth_sum(&sb);
    let inequality_holds = dc.is_none_or(|d| d >= target);
    let expected = sa.bracket(&sb)?;
    let symbols_match = match (dc, c.symbol()) {
        (Some(d), Some(s)) if d == target => s == expected,
        _ => expected.is_zero(),
    };
    Ok(BracketCompatReport { depth_a: da, depth_b: db, depth_commutator: dc, inequality_holds, symbols_match })
}

impl GradedSymbol {
    fn depth_sum(&self, other: &Self) -> usize {
        self.degree + other.degree
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetTraceReport {
    pub depth: Option<usize>,
    pub determinant: String,
    pub trace: String,
    /// `det M ≡ 1 + tr(M − Id) mod q^{2j}`.
    pub square_holds: bool,
    /// For invertible `M` and `q ≥ 3`: `det M = 1` iff the symbol is traceless.
    pub sl_condition: Option<bool>,
}

impl DetTraceReport {
    pub fn holds(&self) -> bool {
        self.square_holds && self.sl_condition.unwrap_or(true)
    }
}

pub fn verify_det_tr_square(m: &CongruenceMatrix) -> DetTraceReport {
    let det = m.m.determinant().expect("square");
    let d = sub_identity(&m.m);
    let tr: BigInt = (0..d.rows()).map(|i| d.get(i, i).clone()).sum();
    let Some(j) = m.depth() else {
        return DetTraceReport {
            depth: None,
            determinant: det.to_string(),
            trace: tr.to_string(),
            square_holds: det.is_one(),
            sl_condition: None,
        };
    };
    let modulus = BigInt::from(m.q).pow(2 * j as u32);
    let diff: BigInt = &det - BigInt::one() - &tr;
    let square_holds = (diff % &modulus).is_zero();
    let sl_condition = (m.q >= 3 && det.abs().is_one()).then(|| {
        let traceless = m.symbol().expect("not identity").trace().is_zero();
        det.is_one() == traceless
    });
    DetTraceReport { depth: Some(j), determinant: det.to_string(), trace: tr.to_string(), square_holds, sl_condition }
}

/// An explicit product of shears and group commutators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommutatorExpr {
    /// `Id + t·e_{αβ}`.
    Shear { alpha: usize, beta: usize, t: BigInt },
    /// `Id + q·(e_11 + e_1α − e_α1 − e_αα)`, a traceless lift with square zero part.
    Lift { alpha: usize, q: BigInt },
    Commutator(Box<CommutatorExpr>, Box<CommutatorExpr>),
}

impl CommutatorExpr {
    /// Nesting level: shears and lifts have level 1.
    pub fn commutator_depth(&self) -> usize {
        match self {
            CommutatorExpr::Shear { .. } | CommutatorExpr::Lift { .. } => 1,
            CommutatorExpr::Commutator(a, b) => a.commutator_depth() + b.commutator_depth(),
        }
    }

    /// The matrix and its inverse.
    pub fn evaluate(&self, n: usize) -> (IntMatrix, IntMatrix) {
        match self {
            CommutatorExpr::Shear { alpha, beta, t } => (shear(n, *alpha, *beta, t), shear(n, *alpha, *beta, &-t)),
            CommutatorExpr::Lift { alpha, q } => {
                let lift = |s: &BigInt| {
                    let mut m = IntMatrix::identity(n);
                    let a = alpha - 1;
                    let cells = [(0, 0, 1), (0, a, 1), (a, 0, -1), (a, a, -1)];
                    for (r, c, sign) in cells {
                        let v = m.get(r, c) + s * sign;
                        m.set(r, c, v);
                    }
                    m
                };
                (lift(q), lift(&-q))
            }
            CommutatorExpr::Commutator(a, b) => {
                let (ma, ia) = a.evaluate(n);
                let (mb, ib) = b.evaluate(n);
                let m = ma.mul(&mb).and_then(|x| x.mul(&ia)).and_then(|x| x.mul(&ib)).expect("square");
                let inv = mb.mul(&ma).and_then(|x| x.mul(&ib)).and_then(|x| x.mul(&ia)).expect("square");
                (m, inv)
            }
        }
    }
}

impl fmt::Display for CommutatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommutatorExpr::Shear { alpha, beta, t } => write!(f, "E({alpha},{beta},{t})"),
            CommutatorExpr::Lift { alpha, q } => write!(f, "L({alpha},{q})"),
            CommutatorExpr::Commutator(a, b) => write!(f, "(comm {a} {b})"),
        }
    }
}

impl Serialize for CommutatorExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn comm(a: CommutatorExpr, b: CommutatorExpr) -> CommutatorExpr {
    CommutatorExpr::Commutator(Box::new(a), Box::new(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementaryWitness {
    pub expression: CommutatorExpr,
    pub commutator_depth: usize,
    /// Exact multiplication reproduces `Id + t·e_{αβ}`.
    pub verified: bool,
}

/// Writes `Id + t·e_{αβ}` (with `q^k | t`) as a `k`-fold nested commutator
/// of shears, using `Id + ab·e_{αβ} = [Id + a·e_{αγ}, Id + b·e_{γβ}]`.
pub fn elementary_witness(n: usize, q: u64, k: usize, alpha: usize, beta: usize, t: &BigInt) -> Result<ElementaryWitness> {
    check_modulus(q)?;
    if n < 5 {
        return Err(Error::InvalidParameter(format!("commutator witnesses need n >= 5, got {n}")));
    }
    if k == 0 || alpha == beta || alpha == 0 || beta == 0 || alpha > n || beta > n {
        return Err(Error::InvalidParameter("need k >= 1 and distinct indices in range".into()));
    }
    let qk = BigInt::from(q).pow(k as u32);
    if !(t % &qk).is_zero() {
        return Err(Error::InvalidParameter(format!("{t} is not a multiple of {q}^{k}")));
    }
    let expression = witness_expr(n, q, k, alpha, beta, t);
    let (m, _) = expression.evaluate(n);
    Ok(ElementaryWitness {
        commutator_depth: expression.commutator_depth(),
        verified: m == shear(n, alpha, beta, t),
        expression,
    })
}

fn witness_expr(n: usize, q: u64, k: usize, alpha: usize, beta: usize, t: &BigInt) -> CommutatorExpr {
    if k == 1 {
        return CommutatorExpr::Shear { alpha, beta, t: t.clone() };
    }
    let gamma = (1..=n).find(|&g| g != alpha && g != beta).expect("n >= 3");
    let inner = witness_expr(n, q, k - 1, alpha, gamma, &(t / BigInt::from(q)));
    comm(inner, CommutatorExpr::Shear { alpha: gamma, beta, t: BigInt::from(q) })
}

/// Degree-`k` witnesses whose symbols should span `𝔰𝔩_n(ℤ/q)`: all
/// off-diagonal shears, plus diagonal classes `e_11 − e_ββ` (through lifts
/// at `k = 1`, through `[W_{k−1}(1,β), E(β,1,q)]` above).
pub fn degree_witnesses(n: usize, q: u64, k: usize) -> Result<Vec<CommutatorExpr>> {
    let qb = BigInt::from(q);
    let mut out = Vec::new();
    for a in 1..=n {
        for b in (1..=n).filter(|&b| b != a) {
            out.push(elementary_witness(n, q, k, a, b, &qb.pow(k as u32))?.expression);
        }
    }
    for b in 2..=n {
        if k == 1 {
            out.push(CommutatorExpr::Lift { alpha: b, q: qb.clone() });
        } else {
            let inner = elementary_witness(n, q, k - 1, 1, b, &qb.pow(k as u32 - 1))?.expression;
            out.push(comm(inner, CommutatorExpr::Shear { alpha: b, beta: 1, t: qb.clone() }));
        }
    }
    Ok(out)
}

/// A random product of `len` shears `E(α, β, ±q)`, with its inverse.
pub fn random_shear_product(rng: &mut SampleRng, n: usize, q: u64, len: usize) -> (IntMatrix, IntMatrix) {
    let mut m = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    for _ in 0..len {
        let a = rng.random_range(1..=n);
        let b = (a + rng.random_range(1..n) - 1) % n + 1;
        let t = if rng.random_bool(0.5) { BigInt::from(q) } else { -BigInt::from(q) };
        m = m.mul(&shear(n, a, b, &t)).expect("square");
        inv = shear(n, a, b, &-t).mul(&inv).expect("square");
    }
    (m, inv)
}

/// Span of symbol vectors together with `q·ℤ^{n²}`, and its comparison with
/// the lattice of matrices whose trace vanishes mod `q`.
fn symbol_span(n: usize, q: u64, symbols: &[GradedSymbol]) -> (usize, bool) {
    let dim = n * n;
    let qb = BigInt::from(q);
    let mut span = HnfBasis::new(dim);
    let mut sl = HnfBasis::new(dim);
    for i in 0..dim {
        let mut v = vec![BigInt::zero(); dim];
        v[i] = qb.clone();
        span.insert(&v);
        let (r, c) = (i / n, i % n);
        let mut w = vec![BigInt::zero(); dim];
        if r != c {
            w[i] = BigInt::one();
        } else if r == 0 {
            w[0] = qb.clone();
        } else {
            w[0] = BigInt::one();
            w[i] = -BigInt::one();
        }
        sl.insert(&w);
    }
    for s in symbols {
        span.insert(&s.flatten());
    }
    let rank = snf_of_basis(&span, dim).iter().filter(|d| d.is_one()).count();
    (rank, span == sl)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub witnesses: usize,
    pub witnesses_verified: bool,
    /// Every witness has exact depth `k` and commutator depth `k`.
    pub witness_depths_ok: bool,
    /// Rank of the span of witness symbols over `ℤ/q`.
    pub symbol_rank: usize,
    pub expected_rank: usize,
    pub spans_sl: bool,
    /// Every sampled `k`-fold commutator has depth at least `k`.
    pub samples: usize,
    pub sample_depths_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl DegreeReport {
    pub fn holds(&self) -> bool {
        self.witnesses_verified && self.witness_depths_ok && self.spans_sl && self.sample_depths_ok
    }
}

/// Checks that degree `k` of the graded Lie ring of `SL_n(qℤ)` is all of
/// `𝔰𝔩_n(ℤ/q)` for each `k ≤ k_max`.
pub fn verify_lie_ring(n: usize, q: u64, k_max: usize, samples: usize, seed: u64) -> Result<Vec<DegreeReport>> {
    check_modulus(q)?;
    if n < 5 || q < 3 {
        return Err(Error::InvalidParameter("the Lie ring comparison needs n >= 5 and q >= 3".into()));
    }
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for k in 1..=k_max {
        let witnesses = degree_witnesses(n, q, k)?;
        let mut symbols = Vec::new();
        let mut verified = true;
        let mut depths_ok = true;
        let mut bad = None;
        for w in &witnesses {
            let (m, _) = w.evaluate(n);
            let cm = CongruenceMatrix::new(m, q)?;
            if cm.depth() != Some(k) || w.commutator_depth() != k {
                depths_ok = false;
                bad.get_or_insert_with(|| w.to_string());
            }
            if let Some(s) = cm.symbol() {
                symbols.push(s);
            }
        }
        for a in 1..=n {
            for b in (1..=n).filter(|&b| b != a) {
                let t = BigInt::from(q).pow(k as u32);
                if !elementary_witness(n, q, k, a, b, &t)?.verified {
                    verified = false;
                    bad.get_or_insert_with(|| format!("E({a},{b},{t})"));
                }
            }
        }
        let (symbol_rank, spans_sl) = symbol_span(n, q, &symbols);
        let mut sample_depths_ok = true;
        for _ in 0..samples {
            let (mut m, mut inv) = random_shear_product(&mut rng, n, q, 3);
            for _ in 1..k {
                let (b, binv) = random_shear_product(&mut rng, n, q, 3);
                let next = m.mul(&b).and_then(|x| x.mul(&inv)).and_then(|x| x.mul(&binv))?;
                let next_inv = b.mul(&m).and_then(|x| x.mul(&binv)).and_then(|x| x.mul(&inv))?;
                m = next;
                inv = next_inv;
            }
            let d = CongruenceMatrix::new(m, q)?.depth();
            if d.is_some_and(|d| d < k) {
                sample_depths_ok = false;
            }
        }
        out.push(DegreeReport {
            degree: k,
            witnesses: witnesses.len(),
            witnesses_verified: verified,
            witness_depths_ok: depths_ok,
            symbol_rank,
            expected_rank: n * n - 1,
            spans_sl,
            samples,
            sample_depths_ok,
            witness: bad,
        });
    }
    Ok(out)
}

/// Random depth-one matrices: half shear products (in `SL_n`), half
/// `Id + q·R` with small random `R` (not necessarily invertible).
pub fn random_congruence_matrices(n: usize, q: u64, count: usize, seed: u64) -> Vec<CongruenceMatrix> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let m = if i % 2 == 0 {
                random_shear_product(&mut rng, n, q, 4).0
            } else {
                let mut m = IntMatrix::identity(n);
                for r in 0..n {
                    for c in 0..n {
                        let x: i64 = rng.random_range(-3..=3);
                        let v = m.get(r, c) + BigInt::from(x * q as i64);
                        m.set(r, c, v);
                    }
                }
                m
            };
            CongruenceMatrix::new(m, q).expect("congruent by construction")
        })
        .collect()
}
