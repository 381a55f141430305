//! The Andreadakis filtration on `End(F_n)`: depth, IA generators, the
//! Johnson morphism, the two trace maps, the Lie ring `𝔍` generated in
//! degree one, and the comparison `𝔍_k = ker tr`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{kernel, snf_of_basis, HnfBasis, IntMatrix, QuotientStructure};
use crate::lie::{Derivation, LieElement, LyndonBasis};
use crate::ring::Ring;
use crate::tensor::{magnus_fox_derivative, min_rotation, necklace_count, word_component, word_valuation, CyclicClassVector, Monomial};
use crate::word::{Automorphism, Endomorphism};

/// `K_ij` for `i ≠ j`, then `K_ijk` for `j < k` with `j, k ≠ i`, each with
/// a printable label.
pub fn ia_generator_automorphisms(n: usize) -> Vec<(String, Automorphism)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            out.push((format!("K{i},{j}"), Automorphism::conjugation(n, i, j).expect("valid indices")));
        }
    }
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            for k in (j + 1..=n).filter(|&k| k != i) {
                let a = Automorphism::commutator_transvection(n, i, j, k).expect("valid indices");
                out.push((format!("K{i},{j},{k}"), a));
            }
        }
    }
    out
}

pub fn ia_generators(n: usize) -> Vec<Endomorphism> {
    ia_generator_automorphisms(n).into_iter().map(|(_, a)| a.forward).collect()
}

/// Integer determinant of a square `i64` matrix.
fn det_i64(m: &[Vec<i64>]) -> BigInt {
    let rows: Vec<Vec<i64>> = m.to_vec();
    IntMatrix::from_i64(&rows).determinant().expect("square")
}

/// Whether `f` induces an automorphism of `F_n/Γ_{c+1}`; by the criterion on
/// abelianizations this does not depend on `c ≥ 1`.
pub fn is_automorphism_mod_gamma(f: &Endomorphism, c: usize) -> bool {
    let _ = c;
    det_i64(&f.abelianization()).abs().is_one()
}

/// Andreadakis depth of an endomorphism, capped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Depth {
    /// `φ_i` is not in `Γ_2` for this generator (1-based).
    NotInIa { generator: usize },
    Exact(usize),
    /// The depth is at least the cap.
    AtLeast(usize),
}

impl Depth {
    pub fn lower_bound(self) -> usize {
        match self {
            Depth::NotInIa { .. } => 0,
            Depth::Exact(k) | Depth::AtLeast(k) => k,
        }
    }

    pub fn is_at_least(self, k: usize) -> bool {
        self.lower_bound() >= k
    }
}

impl std::fmt::Display for Depth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Depth::NotInIa { generator } => write!(f, "0 (x{generator} moves in the abelianization)"),
            Depth::Exact(k) => write!(f, "{k}"),
            Depth::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// Depth over `ring`: the largest `k ≤ d_max` with every `φ_i − 1` of
/// Magnus valuation at least `k + 1`.
pub(crate) fn depth_in(f: &Endomorphism, ring: Ring, d_max: usize) -> Depth {
    let mut best = usize::MAX;
    for (i, phi) in f.displacements().iter().enumerate() {
        let v = word_valuation(phi, ring, d_max + 1).lower_bound();
        if v <= 1 {
            return Depth::NotInIa { generator: i + 1 };
        }
        best = best.min(v - 1);
    }
    if best >= d_max {
        Depth::AtLeast(d_max)
    } else {
        Depth::Exact(best)
    }
}

pub fn andreadakis_depth(f: &Endomorphism, d_max: usize) -> Depth {
    if let Some(i) = f.displacements().iter().position(|w| w.abelianization().iter().any(|&e| e != 0)) {
        return Depth::NotInIa { generator: i + 1 };
    }
    depth_in(f, Ring::Integers, d_max)
}

/// A class in `𝒜_k / 𝒜_{k+1}`, represented by an endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAutClass {
    rank: usize,
    depth: usize,
    rep: Endomorphism,
}

impl GradedAutClass {
    /// Checks automorphy and that every `φ_i` lies in `Γ_{k+1}`.
    pub fn new(rep: Endomorphism, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be positive".into()));
        }
        if !is_automorphism_mod_gamma(&rep, depth) {
            return Err(Error::NotInvertible);
        }
        match andreadakis_depth(&rep, depth) {
            Depth::NotInIa { generator } => Err(Error::NotInIa { generator }),
            d if !d.is_at_least(depth) => Err(Error::DepthTooLow { requested: depth, actual: d.lower_bound() }),
            _ => Ok(GradedAutClass { rank: rep.rank(), depth, rep }),
        }
    }

    pub fn from_automorphism(a: &Automorphism, depth: usize) -> Result<Self> {
        Self::new(a.forward.clone(), depth)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn representative(&self) -> &Endomorphism {
        &self.rep
    }
}

/// `τ(φ)`: `X_i ↦` class of `x_i^{-1} φ(x_i)` in `𝔏_{k+1}`.
pub fn johnson(g: &GradedAutClass) -> Result<Derivation> {
    johnson_in(&g.rep, g.depth, Ring::Integers)
}

pub(crate) fn johnson_values(rep: &Endomorphism, k: usize, ring: Ring) -> Vec<crate::tensor::TensorPoly> {
    rep.displacements().iter().map(|phi| word_component(phi, k + 1, ring)).collect()
}

fn johnson_in(rep: &Endomorphism, k: usize, ring: Ring) -> Result<Derivation> {
    let values = johnson_values(rep, k, ring)
        .iter()
        .map(|t| LieElement::decompose(t, k + 1))
        .collect::<Result<Vec<_>>>()?;
    Derivation::from_values(values)
}

/// Degree-`k` part of `Σ_i ∂φ_i/∂x_i`, projected to cyclic classes.
pub(crate) fn trace_fox_in(rep: &Endomorphism, k: usize, ring: Ring, p_flag: bool) -> CyclicClassVector {
    let n = rep.rank();
    let mut total = crate::tensor::TensorPoly::zero(n, k, ring);
    for (i, phi) in rep.displacements().iter().enumerate() {
        let d = magnus_fox_derivative(phi, i + 1, k, ring).expect("index in range");
        total = total.add(&d.graded_component(k)).expect("same shape");
    }
    total.cyclic_project(k, p_flag).expect("homogeneous")
}

/// Trace computed from the Fox Jacobian.
pub fn trace_fox(g: &GradedAutClass) -> CyclicClassVector {
    trace_fox_in(&g.rep, g.depth, Ring::Integers, false)
}

/// Trace of a derivation: contract each `X_i^*`-component on `X_i`, sum,
/// project cyclically.
pub fn derivation_trace(d: &Derivation) -> CyclicClassVector {
    let k = d.degree();
    let mut total = crate::tensor::TensorPoly::zero(d.rank(), k, d.ring());
    for (i, v) in d.values().iter().enumerate() {
        let c = v.embed().contract(i + 1).expect("homogeneous");
        total = total.add(&c.with_degree_bound(k)).expect("same shape");
    }
    total.cyclic_project(k, false).expect("homogeneous")
}

/// Trace computed from the Johnson image by contraction.
pub fn trace_algebraic(g: &GradedAutClass) -> Result<CyclicClassVector> {
    Ok(derivation_trace(&johnson(g)?))
}

/// The action of a letter permutation (`x_i ↦ x_{perm[i-1]}`) on a
/// derivation: `(π·d)(X_{π(i)}) = π(d(X_i))`.
pub fn permute_derivation(d: &Derivation, perm: &[usize]) -> Result<Derivation> {
    let n = d.rank();
    if perm.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
    }
    let k = d.degree() + 1;
    let mut values = vec![LieElement::zero(n, k, d.ring()); n];
    for (i, v) in d.values().iter().enumerate() {
        let mut t = crate::tensor::TensorPoly::zero(n, k, d.ring());
        for (m, c) in v.embed().terms() {
            let relabeled: Monomial = m.iter().map(|&g| (perm[g as usize] - 1) as u8).collect();
            t = t.add(&crate::tensor::TensorPoly::monomial(n, k, d.ring(), &relabeled, c.clone()))?;
        }
        values[perm[i] - 1] = LieElement::decompose(&t, k)?;
    }
    Derivation::from_values(values)
}

/// Necklace representatives of length `k`, sorted.
pub fn necklaces(n: usize, k: usize) -> Vec<Monomial> {
    let mut set = BTreeSet::new();
    let total = n.pow(k as u32);
    for idx in 0..total {
        let m = crate::tensor::index_to_monomial(idx, n, k);
        set.insert(min_rotation(&m));
    }
    debug_assert_eq!(set.len(), necklace_count(n, k));
    set.into_iter().collect()
}

fn monomial_index(m: &[u8], n: usize) -> usize {
    m.iter().fold(0, |acc, &g| acc * n + g as usize)
}

/// `Φ`: rows indexed by `Der_k` coordinates `(i, Lyndon index)`, columns by
/// the monomials of `V^{⊗k}` in lex order.
pub fn contraction_matrix(n: usize, k: usize) -> IntMatrix {
    let basis = LyndonBasis::get(n, k + 1);
    let cols = n.pow(k as u32);
    let mut m = IntMatrix::zeros(n * basis.len(), cols);
    for i in 0..n {
        for b in 0..basis.len() {
            let row = i * basis.len() + b;
            for (mono, c) in basis.embedding(b).contract(i + 1).expect("homogeneous").terms() {
                m.set(row, monomial_index(mono, n), c.clone());
            }
        }
    }
    m
}

/// `tr_M = π∘Φ∘ι`: rows as in [`contraction_matrix`], columns by necklaces.
pub fn trace_matrix(n: usize, k: usize) -> IntMatrix {
    let phi = contraction_matrix(n, k);
    let necks = necklaces(n, k);
    let mut col_of = vec![0usize; phi.cols()];
    for idx in 0..phi.cols() {
        let m = crate::tensor::index_to_monomial(idx, n, k);
        col_of[idx] = necks.binary_search(&min_rotation(&m)).expect("listed");
    }
    let mut m = IntMatrix::zeros(phi.rows(), necks.len());
    for r in 0..phi.rows() {
        for c in 0..phi.cols() {
            let x = phi.get(r, c);
            if !x.is_zero() {
                let v = m.get(r, col_of[c]) + x;
                m.set(r, col_of[c], v);
            }
        }
    }
    m
}

/// Basis of `ker tr_M ⊂ Der_k`.
pub fn ker_trace_lattice(n: usize, k: usize) -> IntMatrix {
    kernel(&trace_matrix(n, k))
}

/// `𝔍_k` in `Der_k` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JLattice {
    pub rank: usize,
    pub degree: usize,
    pub basis: HnfBasis,
}

impl JLattice {
    pub fn lattice_rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn matrix(&self) -> IntMatrix {
        self.basis.to_matrix()
    }

    pub fn derivations(&self) -> Vec<Derivation> {
        self.basis
            .sparse_rows()
            .map(|r| {
                let dense = crate::lattice::to_dense(r, self.basis.cols());
                Derivation::from_coordinates(self.rank, self.degree, Ring::Integers, &dense).expect("width")
            })
            .collect()
    }

    pub fn contains(&self, d: &Derivation) -> bool {
        self.basis.contains(&d.coordinates())
    }
}

/// Johnson images of the IA generators (degree one).
pub fn degree_one_generators(n: usize) -> Vec<Derivation> {
    ia_generators(n)
        .into_iter()
        .map(|f| johnson_in(&f, 1, Ring::Integers).expect("IA generators have depth one"))
        .collect()
}

/// Sign-normalizes so that `v` and `-v` deduplicate together.
fn normalized(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut v {
            *x = -std::mem::take(x);
        }
    }
    v
}

/// Next layer: span of `[b, g]` for `b` a basis vector of the previous layer
/// and `g` a degree-one generator.
fn next_layer(prev: &JLattice, gens: &[Derivation]) -> JLattice {
    let n = prev.rank;
    let degree = prev.degree + 1;
    let basis = prev.derivations();
    let pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|b| (0..gens.len()).map(move |g| (b, g))).collect();
    let brackets: BTreeSet<Vec<BigInt>> = pairs
        .par_iter()
        .map(|&(b, g)| normalized(Derivation::bracket(&basis[b], &gens[g]).expect("same rank").coordinates()))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut lattice = HnfBasis::new(Derivation::space_dimension(n, degree));
    for v in &brackets {
        lattice.insert(v);
    }
    JLattice { rank: n, degree, basis: lattice }
}

type JCache = Mutex<HashMap<usize, Vec<Arc<JLattice>>>>;

/// `𝔍_k` for rank `n`; layers are memoized per rank.
pub fn frakj_lattice(n: usize, k: usize) -> Result<Arc<JLattice>> {
    if n < 2 || k == 0 {
        return Err(Error::InvalidParameter("need n >= 2 and k >= 1".into()));
    }
    static CACHE: OnceLock<JCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut layers = cache.lock().expect("cache lock").get(&n).cloned().unwrap_or_default();
    let gens = degree_one_generators(n);
    if layers.is_empty() {
        let mut b = HnfBasis::new(Derivation::space_dimension(n, 1));
        for g in &gens {
            b.insert(&g.coordinates());
        }
        layers.push(Arc::new(JLattice { rank: n, degree: 1, basis: b }));
    }
    let extended = layers.len() < k;
    while layers.len() < k {
        let next = next_layer(layers.last().expect("nonempty"), &gens);
        layers.push(Arc::new(next));
    }
    let out = Arc::clone(&layers[k - 1]);
    let mut guard = cache.lock().expect("cache lock");
    let entry = guard.entry(n).or_default();
    if extended || entry.len() < layers.len() {
        *entry = layers;
    }
    Ok(out)
}

/// Outcome of comparing `𝔍_k` with `ker tr_M` at one `(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableSurjectivityReport {
    pub n: usize,
    pub k: usize,
    pub der_dimension: usize,
    pub j_rank: usize,
    pub ker_trace_rank: usize,
    pub necklace_count: usize,
    /// `𝔍_k ⊆ ker tr_M`.
    pub j_in_kernel: bool,
    /// `𝔍_k = ker tr_M` as lattices.
    pub lattices_equal: bool,
    /// Invariants of `Der_k / 𝔍_k`.
    pub cokernel: QuotientStructure,
    /// `Φ: Der_k → V^{⊗k}` is onto (all Smith divisors are units, full rank).
    pub contraction_surjective: bool,
    /// `ker Φ ⊆ 𝔍_k`.
    pub contraction_kernel_in_j: bool,
    /// A `Der_k` coordinate vector violating one of the inclusions.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_vec")]
    pub witness: Option<Vec<BigInt>>,
}

fn ser_opt_vec<S: serde::Serializer>(v: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let json = v
        .as_ref()
        .map(|v| serde_json::Value::Array(v.iter().map(crate::ring::bigint_to_json).collect()))
        .unwrap_or(serde_json::Value::Null);
    json.serialize(s)
}

impl StableSurjectivityReport {
    /// The cokernel is free of rank `N(n,k)` and everything else holds.
    pub fn holds(&self) -> bool {
        self.j_in_kernel
            && self.lattices_equal
            && self.cokernel.is_free()
            && self.cokernel.free_rank == self.necklace_count
            && self.contraction_surjective
            && self.contraction_kernel_in_j
    }
}

/// Computes every comparison at `(n, k)` without range restrictions.
pub fn stable_surjectivity_data(n: usize, k: usize) -> Result<StableSurjectivityReport> {
    if k < 2 {
        return Err(Error::InvalidParameter("the trace comparison needs k >= 2".into()));
    }
    let j = frakj_lattice(n, k)?;
    let dim = Derivation::space_dimension(n, k);
    let ker = HnfBasis::from_matrix(&ker_trace_lattice(n, k));
    let mut witness = None;
    let j_in_kernel = match j.basis.sparse_rows().find(|r| !ker.contains_sparse((*r).clone())) {
        Some(r) => {
            witness = Some(crate::lattice::to_dense(r, dim));
            false
        }
        None => true,
    };
    let lattices_equal = j_in_kernel && j.basis == ker;
    if j_in_kernel && !lattices_equal {
        witness = ker.sparse_rows().find(|r| !j.basis.contains_sparse((*r).clone())).map(|r| crate::lattice::to_dense(r, dim));
    }
    let divisors: Vec<BigInt> = snf_of_basis(&j.basis, 0).into_iter().filter(|d| !d.is_zero()).collect();
    let cokernel = QuotientStructure { free_rank: dim - divisors.len(), divisors };
    let phi = contraction_matrix(n, k);
    let phi_basis = HnfBasis::from_matrix(&phi);
    let contraction_surjective =
        phi_basis.rank() == phi.cols() && snf_of_basis(&phi_basis, 0).iter().all(|d| d.is_one());
    let ker_phi = kernel(&phi);
    let mut contraction_kernel_in_j = true;
    for r in 0..ker_phi.rows() {
        if !j.basis.contains(ker_phi.row(r)) {
            contraction_kernel_in_j = false;
            witness.get_or_insert_with(|| ker_phi.row(r).to_vec());
            break;
        }
    }
    Ok(StableSurjectivityReport {
        n,
        k,
        der_dimension: dim,
        j_rank: j.lattice_rank(),
        ker_trace_rank: ker.rank(),
        necklace_count: necklace_count(n, k),
        j_in_kernel,
        lattices_equal,
        cokernel,
        contraction_surjective,
        contraction_kernel_in_j,
        witness,
    })
}

/// The stable comparison, restricted to the range `2 ≤ k ≤ n − 2`.
pub fn verify_stable_surjectivity(n: usize, k: usize) -> Result<StableSurjectivityReport> {
    if k < 2 || k + 2 > n {
        return Err(Error::InvalidParameter(format!("stable range needs 2 <= k <= n-2, got n={n}, k={k}")));
    }
    stable_surjectivity_data(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn class(a: &Automorphism, k: usize) -> GradedAutClass {
        GradedAutClass::from_automorphism(a, k).unwrap()
    }

    #[test]
    fn generator_counts() {
        assert_eq!(ia_generators(2).len(), 2);
        assert_eq!(ia_generators(3).len(), 9);
        assert_eq!(ia_generators(4).len(), 12 + 12);
        for f in ia_generators(4) {
            assert_eq!(andreadakis_depth(&f, 5), Depth::Exact(1));
            assert!(is_automorphism_mod_gamma(&f, 3));
        }
    }

    #[test]
    fn automorphy() {
        let sq = Endomorphism::parse("x1^2; x2", 2).unwrap();
        assert!(!is_automorphism_mod_gamma(&sq, 1));
        assert_eq!(andreadakis_depth(&sq, 3), Depth::NotInIa { generator: 1 });
        assert_eq!(andreadakis_depth(&Endomorphism::identity(3), 4), Depth::AtLeast(4));
    }

    #[test]
    fn johnson_of_generators() {
        let k12 = class(&Automorphism::conjugation(2, 1, 2).unwrap(), 1);
        let t = johnson(&k12).unwrap();
        let expected = LieElement::parse("[X2,X1]", 2, Ring::Integers).unwrap();
        assert_eq!(t.values()[0], expected);
        assert!(t.values()[1].is_zero());
        let k123 = class(&Automorphism::commutator_transvection(3, 1, 2, 3).unwrap(), 1);
        let t = johnson(&k123).unwrap();
        assert_eq!(t.values()[0], LieElement::parse("[X2,X3]", 3, Ring::Integers).unwrap());
    }

    #[test]
    fn commutator_depth_adds() {
        let a = Automorphism::conjugation(3, 1, 2).unwrap();
        let b = Automorphism::commutator_transvection(3, 1, 2, 3).unwrap();
        let c = Automorphism::commutator(&a, &b).unwrap();
        assert!(andreadakis_depth(&c.forward, 4).is_at_least(2));
    }

    #[test]
    fn traces_agree() {
        let k12 = class(&Automorphism::conjugation(2, 1, 2).unwrap(), 1);
        // The depth-one trace of a conjugation is the class of X2, not zero.
        let tf = trace_fox(&k12);
        assert_eq!(tf, trace_algebraic(&k12).unwrap());
        assert_eq!(tf.get(&[1]), BigInt::one());
        let a = Automorphism::conjugation(3, 1, 2).unwrap();
        let b = Automorphism::commutator_transvection(3, 2, 1, 3).unwrap();
        let c = class(&Automorphism::commutator(&a, &b).unwrap(), 2);
        assert!(trace_fox(&c).is_zero());
        assert!(trace_algebraic(&c).unwrap().is_zero());
        let id = GradedAutClass::new(Endomorphism::identity(3), 3).unwrap();
        assert!(trace_fox(&id).is_zero());
    }

    #[test]
    fn trace_ignores_deeper_factors() {
        let a = Automorphism::conjugation(3, 1, 2).unwrap();
        let b = Automorphism::conjugation(3, 2, 3).unwrap();
        let c = Automorphism::commutator(&a, &b).unwrap();
        let w = Word::parse("[x1,x2]", 3).unwrap();
        let deep = Automorphism::left_multiplication(3, &Word::commutator(&w, &Word::parse("x1", 3).unwrap()).unwrap()).unwrap();
        let cd = Automorphism::compose(&c, &deep).unwrap();
        assert_eq!(trace_fox(&class(&c, 2)), trace_fox(&class(&cd, 2)));
    }

    #[test]
    fn equivariance() {
        let g = Automorphism::commutator_transvection(3, 1, 2, 3).unwrap();
        let h = Automorphism::permutation(&[2, 3, 1]).unwrap();
        let c = Automorphism::conjugate(&g, &h).unwrap();
        let lhs = johnson(&class(&c, 1)).unwrap();
        let rhs = permute_derivation(&johnson(&class(&g, 1)).unwrap(), &[2, 3, 1]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_one_lattice() {
        let j = frakj_lattice(3, 1).unwrap();
        assert_eq!(j.lattice_rank(), 9);
        assert!(snf_of_basis(&j.basis, 9).iter().all(|d| d.is_one()));
        assert_eq!(frakj_lattice(2, 1).unwrap().lattice_rank(), 2);
    }

    #[test]
    fn trace_kernel_and_necklaces() {
        assert_eq!(necklaces(2, 2).len(), 3);
        assert_eq!(necklaces(4, 2).len(), 10);
        let ker = ker_trace_lattice(4, 2);
        assert_eq!(Derivation::space_dimension(4, 2) - ker.rows(), 10);
        for d in frakj_lattice(3, 2).unwrap().derivations() {
            assert!(derivation_trace(&d).is_zero());
        }
    }

    #[test]
    fn stable_case_four_two() {
        let r = verify_stable_surjectivity(4, 2).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.cokernel.free_rank, 10);
        assert!(verify_stable_surjectivity(3, 2).is_err());
    }
}
