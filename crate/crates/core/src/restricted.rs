//! The mod-`p` lower central series `Γ^{[p]}`, the `p`-restricted Andreadakis
//! filtration, its Johnson and trace maps, and where the restricted analogue
//! of `𝔍 = ker tr` fails.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::andreadakis::{depth_in, frakj_lattice, ia_generator_automorphisms, trace_fox_in, Depth};
use crate::error::{Error, Result};
use crate::lattice::{FpBasis, IntMatrix};
use crate::lie::{standard_split, witt_dimension, Derivation, RestrictedBasis, RestrictedDerivation, RestrictedLieElement};
use crate::ring::Ring;
use crate::sampling::{random_word, rng, SampleRng};
use crate::tensor::{is_pth_power, word_component, word_valuation, CyclicClassVector, Monomial, TensorPoly, Valuation};
use crate::word::{Automorphism, Endomorphism, Word};

use rand::Rng;

fn check_prime(p: u32) -> Result<Ring> {
    Ring::prime(p)
}

/// Degree of `w` in `Γ^{[p]}`: the `F_p`-Magnus valuation of `w − 1`.
pub fn gamma_p_degree(w: &Word, p: u32, d_max: usize) -> Result<Valuation> {
    Ok(word_valuation(w, check_prime(p)?, d_max))
}

/// The group commutator word of the standard bracketing of a Lyndon word.
pub fn lyndon_commutator(rank: usize, w: &[u8]) -> Word {
    if w.len() == 1 {
        return Word::generator(rank, w[0] as usize + 1).expect("letter within rank");
    }
    let s = standard_split(w);
    Word::commutator(&lyndon_commutator(rank, &w[..s]), &lyndon_commutator(rank, &w[s..])).expect("same rank")
}

/// A random element of `Γ_i`: a left-normed commutator of `i` short words.
fn random_gamma_element(rng: &mut SampleRng, n: usize, i: usize) -> Word {
    let len = rng.random_range(1..=3);
    let mut acc = random_word(rng, n, len);
    for _ in 1..i {
        let len = rng.random_range(1..=2);
        let w = random_word(rng, n, len);
        acc = Word::commutator(&acc, &w).expect("same rank");
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductFormulaDegree {
    pub degree: usize,
    pub samples: usize,
    /// Every sampled product of `(Γ_i)^{p^j}`, `i p^j ≥ k`, has degree `≥ k`.
    pub samples_deep_enough: bool,
    /// Rank of the degree-`k` components of `c_w^{p^e}`, `|w| p^e = k`.
    pub leading_rank: usize,
    pub restricted_dimension: usize,
}

impl ProductFormulaDegree {
    pub fn holds(&self) -> bool {
        self.samples_deep_enough && self.leading_rank == self.restricted_dimension
    }
}

/// Samples the right-hand side of `Γ_k^{[p]} = ∏_{i p^j ≥ k} (Γ_i)^{p^j}` and
/// counts independent leading terms against `dim 𝔏^{[p]}_k`.
pub fn verify_gamma_p_product_formula(n: usize, p: u32, k_max: usize, samples: usize, seed: u64) -> Result<Vec<ProductFormulaDegree>> {
    let ring = check_prime(p)?;
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut factors: Vec<(usize, u32)> = Vec::new();
        for i in 1..=k {
            let mut j = 0u32;
            while i * (p as usize).pow(j) < k {
                j += 1;
            }
            factors.push((i, j));
        }
        let mut deep = true;
        for _ in 0..samples {
            let mut prod = Word::identity(n);
            for _ in 0..rng.random_range(1..=3) {
                let (i, j) = factors[rng.random_range(0..factors.len())];
                let g = random_gamma_element(&mut rng, n, i).pow((p as i64).pow(j));
                prod = prod.multiply(&g)?;
            }
            if !word_valuation(&prod, ring, k).is_at_least(k) {
                deep = false;
            }
        }
        let basis = RestrictedBasis::get(n, k, p);
        let mut span = FpBasis::new(p as u64, n.pow(k as u32));
        for (w, e) in basis.elements() {
            let c = lyndon_commutator(n, w).pow((p as i64).pow(*e));
            let comp = word_component(&c, k, ring);
            let mut v = vec![BigInt::zero(); n.pow(k as u32)];
            for (m, x) in comp.terms() {
                v[m.iter().fold(0, |acc, &g| acc * n + g as usize)] = x.clone();
            }
            span.insert(&v);
        }
        out.push(ProductFormulaDegree {
            degree: k,
            samples,
            samples_deep_enough: deep,
            leading_rank: span.rank(),
            restricted_dimension: basis.len(),
        });
    }
    Ok(out)
}

/// Whether `f` induces the identity on `F_n^{ab} ⊗ F_p`.
pub fn is_ia_p(f: &Endomorphism, p: u32) -> bool {
    f.displacements().iter().all(|w| w.abelianization().iter().all(|&e| e % p as i64 == 0))
}

/// Depth in the filtration by `[σ, F_n] ⊆ Γ^{[p]}_{k+1}`, capped.
pub fn andreadakis_p_depth(f: &Endomorphism, p: u32, d_max: usize) -> Result<Depth> {
    let ring = check_prime(p)?;
    if let Some(i) = f.displacements().iter().position(|w| w.abelianization().iter().any(|&e| e % p as i64 != 0)) {
        return Ok(Depth::NotInIa { generator: i + 1 });
    }
    Ok(depth_in(f, ring, d_max))
}

/// A class in `𝒜^{[p]}_k / 𝒜^{[p]}_{k+1}`; automorphy is not required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PGradedAutClass {
    p: u32,
    depth: usize,
    rep: Endomorphism,
}

impl PGradedAutClass {
    pub fn new(rep: Endomorphism, p: u32, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be positive".into()));
        }
        match andreadakis_p_depth(&rep, p, depth)? {
            Depth::NotInIa { generator } => Err(Error::NotInIa { generator }),
            d if !d.is_at_least(depth) => Err(Error::DepthTooLow { requested: depth, actual: d.lower_bound() }),
            _ => Ok(PGradedAutClass { p, depth, rep }),
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn rank(&self) -> usize {
        self.rep.rank()
    }

    pub fn representative(&self) -> &Endomorphism {
        &self.rep
    }
}

/// Restricted Johnson image: `X_i ↦` class of `φ_i` in `𝔏^{[p]}_{k+1}`.
pub fn johnson_p(g: &PGradedAutClass) -> Result<RestrictedDerivation> {
    let ring = Ring::Prime(g.p);
    let values = g
        .rep
        .displacements()
        .iter()
        .map(|phi| RestrictedLieElement::decompose(&word_component(phi, g.depth + 1, ring), g.depth + 1))
        .collect::<Result<Vec<_>>>()?;
    RestrictedDerivation::from_values(values)
}

/// Trace in `C^{[p]}_k V`, from the Fox Jacobian over `F_p`.
pub fn trace_p(g: &PGradedAutClass) -> CyclicClassVector {
    trace_fox_in(&g.rep, g.depth, Ring::Prime(g.p), true)
}

/// Contraction trace of a restricted derivation, in `C^{[p]}_k V`.
pub fn restricted_derivation_trace(d: &RestrictedDerivation) -> CyclicClassVector {
    let k = d.degree();
    let ring = Ring::Prime(d.prime());
    let mut total = TensorPoly::zero(d.rank(), k, ring);
    for (i, v) in d.tensor_values().iter().enumerate() {
        let c = v.contract(i + 1).expect("homogeneous");
        total = total.add(&c.with_degree_bound(k)).expect("same shape");
    }
    total.cyclic_project(k, true).expect("homogeneous")
}

/// The automorphism `x_1 ↦ w^p x_1` and the evidence that its restricted
/// Johnson image leaves `V^* ⊗ 𝔏V`.
#[derive(Clone, Debug)]
pub struct NontameWitness {
    pub class: PGradedAutClass,
    pub automorphism: Automorphism,
    /// Degree of `w` in the lower central series.
    pub word_degree: usize,
    pub johnson: RestrictedDerivation,
    /// Nonzero coordinates of `τ(φ)(X_1)` on pure `p`-power basis elements.
    pub certificate: Vec<(String, BigInt)>,
}

impl NontameWitness {
    pub fn certified(&self) -> bool {
        !self.certificate.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "automorphism": self.automorphism.forward.to_string(),
            "depth": self.class.depth,
            "word_degree": self.word_degree,
            "johnson": self.johnson.to_string(),
            "certificate": self.certificate.iter().map(|(name, c)| serde_json::json!([name, crate::ring::bigint_to_json(c)])).collect::<Vec<_>>(),
        })
    }
}

pub fn nontame_witness(w: &Word, p: u32) -> Result<NontameWitness> {
    check_prime(p)?;
    if w.contains_generator(1) {
        return Err(Error::InvalidParameter("the word must avoid x1".into()));
    }
    if w.is_identity() {
        return Err(Error::InvalidParameter("the word must be nontrivial".into()));
    }
    let cap = 2 * w.len() + 2;
    let k = word_valuation(w, Ring::Integers, cap)
        .exact()
        .ok_or_else(|| Error::InvalidParameter("could not determine the degree of the word".into()))?;
    let automorphism = Automorphism::left_multiplication(1, &w.pow(p as i64))?;
    let depth = p as usize * k - 1;
    let class = PGradedAutClass::new(automorphism.forward.clone(), p, depth)?;
    let johnson = johnson_p(&class)?;
    let certificate = johnson.values()[0].power_part();
    Ok(NontameWitness { class, automorphism, word_degree: k, johnson, certificate })
}

/// Necklaces of length `k` that survive in `C^{[p]}_k V` (not `p`-th powers).
fn restricted_necklaces(n: usize, k: usize, p: u32) -> Vec<Monomial> {
    crate::andreadakis::necklaces(n, k).into_iter().filter(|m| !is_pth_power(m, p as usize)).collect()
}

/// `tr_M` over `F_p` on `V^* ⊗ 𝔏^{[p]}_{k+1}`, rows `(i, restricted index)`.
pub fn restricted_trace_matrix(n: usize, k: usize, p: u32) -> IntMatrix {
    let basis = RestrictedBasis::get(n, k + 1, p);
    let necks = restricted_necklaces(n, k, p);
    let mut m = IntMatrix::zeros(n * basis.len(), necks.len());
    for i in 0..n {
        for b in 0..basis.len() {
            let c = basis.embedding(b).contract(i + 1).expect("homogeneous").with_degree_bound(k);
            let cls = c.cyclic_project(k, true).expect("homogeneous");
            for (neck, x) in &cls.classes {
                let col = necks.binary_search(neck).expect("listed");
                m.set(i * basis.len() + b, col, x.clone());
            }
        }
    }
    m
}

/// `𝔍^{[p]}_k`: the reduction of `𝔍_k` plus the `p^e`-th powers of a basis
/// of the reduction of `𝔍_{k/p^e}`.
pub fn restricted_j_space(n: usize, k: usize, p: u32) -> Result<FpBasis> {
    check_prime(p)?;
    let dim = RestrictedDerivation::space_dimension(n, k, p);
    let mut space = FpBasis::new(p as u64, dim);
    for d in frakj_lattice(n, k)?.derivations() {
        space.insert(&RestrictedDerivation::restricted_extend(&d, p).coordinates());
    }
    let mut q = p as usize;
    let mut e = 1;
    while k % q == 0 {
        let lower = frakj_lattice(n, k / q)?;
        let powers: Vec<Vec<BigInt>> = lower
            .derivations()
            .par_iter()
            .map(|d| {
                let mut r = RestrictedDerivation::restricted_extend(d, p);
                for _ in 0..e {
                    r = r.p_power().expect("p-th powers stay restricted");
                }
                r.coordinates()
            })
            .collect();
        for v in &powers {
            space.insert(v);
        }
        q *= p as usize;
        e += 1;
    }
    Ok(space)
}

/// Comparison of `𝔍^{[p]}_k` with `ker tr_M` at one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcentrationDegree {
    pub k: usize,
    /// `k = pl − 1` or `k = pl` for some `l ≥ 1`.
    pub concentrated: bool,
    pub ambient_dimension: usize,
    pub kernel_dimension: usize,
    pub j_dimension: usize,
    pub j_in_kernel: bool,
    pub gap: usize,
    /// Upper bound on the gap at concentrated degrees.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_bound: Option<usize>,
}

impl ConcentrationDegree {
    pub fn holds(&self) -> bool {
        self.j_in_kernel
            && match self.gap_bound {
                None => self.gap == 0,
                Some(b) => self.gap <= b,
            }
    }
}

pub fn concentration_degree(n: usize, k: usize, p: u32) -> Result<ConcentrationDegree> {
    if k < 2 {
        return Err(Error::InvalidParameter("the trace comparison needs k >= 2".into()));
    }
    let pu = p as usize;
    let j = restricted_j_space(n, k, p)?;
    let tr = restricted_trace_matrix(n, k, p);
    let ker_dim = tr.rows() - crate::lattice::rank_mod_p(&tr, p as u64);
    let mut ker = FpBasis::new(p as u64, tr.rows());
    for v in crate::lattice::kernel_mod_p(&tr, p as u64) {
        ker.insert(&v);
    }
    let j_in_kernel = ker.contains_space(&j);
    let gap_bound = if (k + 1) % pu == 0 {
        let extra = crate::lie::restricted_dimension(n, k + 1, pu) - witt_dimension(n, k + 1);
        Some(n * extra)
    } else if k % pu == 0 {
        Some(n.pow((k / pu) as u32))
    } else {
        None
    };
    Ok(ConcentrationDegree {
        k,
        concentrated: gap_bound.is_some(),
        ambient_dimension: tr.rows(),
        kernel_dimension: ker_dim,
        j_dimension: j.rank(),
        j_in_kernel,
        gap: ker_dim.saturating_sub(j.rank()),
        gap_bound,
    })
}

/// Runs [`concentration_degree`] for `2 ≤ k ≤ k_max ≤ n − 2`.
pub fn verify_p_concentration(n: usize, p: u32, k_max: usize) -> Result<Vec<ConcentrationDegree>> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::InvalidParameter("degree-one surjectivity needs p != 2".into()));
    }
    if k_max + 2 > n {
        return Err(Error::InvalidParameter(format!("need k_max <= n - 2, got n={n}, k_max={k_max}")));
    }
    (2..=k_max).map(|k| concentration_degree(n, k, p)).collect()
}

/// Generators used to sample `𝒜^{[p]}`: IA generators and the transvections
/// `x_i ↦ x_i x_j^p`.
pub fn p_generator_pool(n: usize, p: u32) -> Vec<(String, Automorphism)> {
    let mut pool = ia_generator_automorphisms(n);
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            let xj = Word::generator(n, j).expect("in range").pow(p as i64);
            pool.push((format!("T{i},{j}"), Automorphism::right_multiplication(i, &xj).expect("avoids x_i")));
        }
    }
    pool
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerDepthSample {
    pub factors: Vec<String>,
    pub depth: usize,
    pub power_depth: usize,
    pub required: usize,
}

/// Checks `depth(f^p) ≥ min(p · depth f, cap)` on products of at most two
/// pool elements. Returns the samples and the first violation, if any.
pub fn verify_power_depth(n: usize, p: u32, samples: usize, cap: usize, seed: u64) -> Result<(Vec<PowerDepthSample>, Option<usize>)> {
    check_prime(p)?;
    let pool = p_generator_pool(n, p);
    let mut rng = rng(seed);
    let picks: Vec<Vec<usize>> = (0..samples)
        .map(|_| (0..rng.random_range(1..=2)).map(|_| rng.random_range(0..pool.len())).collect())
        .collect();
    let results: Vec<Result<PowerDepthSample>> = picks
        .par_iter()
        .map(|pick| {
            let mut f = Automorphism::identity(n);
            for &i in pick {
                f = Automorphism::compose(&f, &pool[i].1)?;
            }
            let depth = andreadakis_p_depth(&f.forward, p, cap)?.lower_bound();
            let power = f.pow(p as i64);
            let power_depth = andreadakis_p_depth(&power.forward, p, cap)?.lower_bound();
            Ok(PowerDepthSample {
                factors: pick.iter().map(|&i| pool[i].0.clone()).collect(),
                depth,
                power_depth,
                required: (p as usize * depth).min(cap),
            })
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let bad = results.iter().position(|s| s.power_depth < s.required);
    Ok((results, bad))
}

/// Reduction mod `p` of an integral derivation, for comparisons.
pub fn reduce_derivation(d: &Derivation, p: u32) -> RestrictedDerivation {
    RestrictedDerivation::restricted_extend(d, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::andreadakis::{johnson, GradedAutClass};
    use crate::lie::LieElement;

    fn w(s: &str, n: usize) -> Word {
        Word::parse(s, n).unwrap()
    }

    #[test]
    fn gamma_p_degrees() {
        assert_eq!(gamma_p_degree(&w("x1^2", 2), 2, 6).unwrap(), Valuation::Exact(2));
        for p in [2, 3, 5] {
            assert_eq!(gamma_p_degree(&w("[x1,x2]", 2), p, 6).unwrap(), Valuation::Exact(2));
        }
        assert_eq!(gamma_p_degree(&w("[x1,x2]^3", 2), 3, 8).unwrap(), Valuation::Exact(6));
        assert!(gamma_p_degree(&w("x1", 1), 4, 3).is_err());
    }

    #[test]
    fn product_formula_small() {
        for d in verify_gamma_p_product_formula(2, 2, 4, 10, 3).unwrap() {
            assert!(d.holds(), "{d:?}");
        }
        for d in verify_gamma_p_product_formula(3, 3, 3, 10, 4).unwrap() {
            assert!(d.holds(), "{d:?}");
        }
    }

    #[test]
    fn p_depth_and_johnson() {
        let k12 = Automorphism::conjugation(3, 1, 2).unwrap();
        let c = PGradedAutClass::new(k12.forward.clone(), 3, 1).unwrap();
        let integral = johnson(&GradedAutClass::from_automorphism(&k12, 1).unwrap()).unwrap();
        assert_eq!(johnson_p(&c).unwrap(), reduce_derivation(&integral, 3));
        let f = Endomorphism::parse("x1^4; x2", 2).unwrap();
        assert!(is_ia_p(&f, 3));
        assert!(andreadakis_p_depth(&f, 3, 4).unwrap().is_at_least(1));
        assert_eq!(andreadakis_p_depth(&f, 2, 4).unwrap(), Depth::NotInIa { generator: 1 });
    }

    #[test]
    fn nontame() {
        let a = nontame_witness(&w("[x2,x3]", 4), 3).unwrap();
        assert_eq!(a.class.depth(), 5);
        assert!(a.certified());
        assert_eq!(a.certificate, vec![("([X2,X3])^3".to_string(), BigInt::from(1))]);
        let b = nontame_witness(&w("x2", 2), 2).unwrap();
        assert_eq!(b.class.depth(), 1);
        assert_eq!(b.certificate, vec![("(X2)^2".to_string(), BigInt::from(1))]);
        assert!(nontame_witness(&w("x1 x2", 2), 3).is_err());
    }

    #[test]
    fn trace_p_vanishes_on_reduced_j() {
        for d in frakj_lattice(3, 2).unwrap().derivations() {
            assert!(restricted_derivation_trace(&reduce_derivation(&d, 3)).is_zero());
        }
        let x = LieElement::parse("[X1,X2]", 2, Ring::Prime(3)).unwrap();
        assert!(!x.is_zero());
    }

    #[test]
    fn concentration_small() {
        let r = verify_p_concentration(4, 5, 2).unwrap();
        assert!(r[0].holds() && !r[0].concentrated && r[0].gap == 0, "{r:?}");
        let r = verify_p_concentration(4, 3, 2).unwrap();
        assert!(r[0].holds() && r[0].concentrated, "{r:?}");
        assert_eq!((r[0].ambient_dimension, r[0].kernel_dimension, r[0].j_dimension, r[0].gap), (96, 86, 70, 16));
    }

    #[test]
    fn power_depths() {
        let (samples, bad) = verify_power_depth(3, 3, 10, 5, 11).unwrap();
        assert_eq!(bad, None, "{samples:?}");
    }

    /// Closure under all brackets `[S_i, S_j]` and `p`-th powers of bases,
    /// compared with the generation scheme of `restricted_j_space`.
    #[test]
    fn generation_scheme_matches_closure() {
        let (n, p) = (3, 3u32);
        let basis_of = |space: &FpBasis, k: usize| -> Vec<RestrictedDerivation> {
            space
                .basis()
                .iter()
                .map(|v| {
                    let dim = crate::lie::restricted_dimension(n, k + 1, p as usize);
                    let vals = v
                        .chunks(dim)
                        .map(|c| RestrictedLieElement::decompose(&coords_tensor(n, k + 1, p, c), k + 1).unwrap())
                        .collect();
                    RestrictedDerivation::from_values(vals).unwrap()
                })
                .collect()
        };
        let mut layers: Vec<FpBasis> = Vec::new();
        let mut s1 = FpBasis::new(p as u64, RestrictedDerivation::space_dimension(n, 1, p));
        for d in crate::andreadakis::degree_one_generators(n) {
            s1.insert(&reduce_derivation(&d, p).coordinates());
        }
        layers.push(s1);
        for k in 2..=3 {
            let mut sk = FpBasis::new(p as u64, RestrictedDerivation::space_dimension(n, k, p));
            for i in 1..k {
                for a in basis_of(&layers[i - 1], i) {
                    for b in basis_of(&layers[k - i - 1], k - i) {
                        sk.insert(&RestrictedDerivation::bracket(&a, &b).unwrap().coordinates());
                    }
                }
            }
            if k % p as usize == 0 {
                for a in basis_of(&layers[k / p as usize - 1], k / p as usize) {
                    sk.insert(&a.p_power().unwrap().coordinates());
                }
            }
            let scheme = restricted_j_space(n, k, p).unwrap();
            assert_eq!(sk.rank(), scheme.rank(), "k={k}");
            assert!(sk.contains_space(&scheme) && scheme.contains_space(&sk));
            layers.push(sk);
        }
    }

    fn coords_tensor(n: usize, k: usize, p: u32, c: &[BigInt]) -> TensorPoly {
        let basis = RestrictedBasis::get(n, k, p);
        let mut t = TensorPoly::zero(n, k, Ring::Prime(p));
        for (i, x) in c.iter().enumerate() {
            t = t.add(&basis.embedding(i).scale(x)).unwrap();
        }
        t
    }
}
