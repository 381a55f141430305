//! Named verification suites producing deterministic, machine-readable
//! reports. Each claim records the statement it checks, its inputs, the
//! computed result and a pass/fail status.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::andreadakis::{
    andreadakis_depth, frakj_lattice, ia_generator_automorphisms, johnson, permute_derivation, stable_surjectivity_data,
    trace_algebraic, trace_fox, GradedAutClass,
};
use crate::congruence::{
    random_congruence_matrices, random_shear_product, verify_bracket_compat, verify_det_tr_square, verify_lie_ring,
    CongruenceMatrix,
};
use crate::dark::{dark_table, verify_dark, DarkVariant};
use crate::error::{Error, Result};
use crate::group_ring::{verify_chain_rule, verify_fundamental_formula};
use crate::lattice::snf_of_basis;
use crate::lie::Derivation;
use crate::restricted::{nontame_witness, verify_gamma_p_product_formula, verify_p_concentration, verify_power_depth};
use crate::ring::Ring;
use crate::sampling::{random_endomorphism, random_product, rng, SampleRng};
use crate::tensor::{Monomial, TensorPoly};
use crate::word::{Automorphism, Word};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 24301;

/// `Der_k` dimension above which the stable comparison needs an explicit opt-in.
pub const STRETCH_DIMENSION: usize = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Computed and reported, but nothing is asserted.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub claim: String,
    /// The mathematical statement being checked.
    pub reference: String,
    pub inputs: Value,
    pub result: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

fn claim(id: &str, reference: &str, inputs: Value, result: Value, pass: bool, witness: Option<Value>) -> Claim {
    Claim {
        claim: id.into(),
        reference: reference.into(),
        inputs,
        result,
        status: if pass { Status::Pass } else { Status::Fail },
        witness: if pass { None } else { witness },
    }
}

fn info(id: &str, reference: &str, inputs: Value, result: Value) -> Claim {
    Claim { claim: id.into(), reference: reference.into(), inputs, result, status: Status::Info, witness: None }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub tool_version: String,
    pub claims: Vec<Claim>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, parameters: Value) -> Self {
        let parameters = match parameters {
            Value::Object(m) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        SuiteReport {
            suite: suite.into(),
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            claims: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.status == Status::Fail)
    }

    /// JSON with keys in sorted order.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Progress sink for long computations (the CLI prints to stderr).
pub type Progress<'a> = &'a (dyn Fn(&str) + Sync);

pub fn silent(_: &str) {}

pub fn chain_rule_suite(n: usize, pairs: usize, endomorphisms: usize, seed: u64, progress: Progress) -> Result<SuiteReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("rank must be positive".into()));
    }
    let mut report = SuiteReport::new("chainrule", seed, json!({"n": n, "pairs": pairs, "endomorphisms": endomorphisms}));
    progress(&format!("chain rule on {pairs} random pairs"));
    let mut r = rng(seed);
    let cases: Vec<_> = (0..pairs).map(|_| (random_endomorphism(&mut r, n, 4), random_endomorphism(&mut r, n, 4))).collect();
    let checks: Vec<_> = cases.par_iter().map(|(f, g)| verify_chain_rule(f, g)).collect::<Result<_>>()?;
    let bad = checks.iter().position(|c| !c.holds);
    report.claims.push(claim(
        "chain-rule",
        "Jacobians compose: D(f∘g) = f(Dg)·D(f)",
        json!({"n": n, "pairs": pairs, "max_image_length": 4}),
        json!({"checked": pairs, "failures": checks.iter().filter(|c| !c.holds).count()}),
        bad.is_none(),
        bad.map(|i| json!({"f": cases[i].0.to_string(), "g": cases[i].1.to_string(), "entry": checks[i].first_failure})),
    ));
    progress(&format!("fundamental formula on {endomorphisms} random endomorphisms"));
    let endos: Vec<_> = (0..endomorphisms).map(|_| random_endomorphism(&mut r, n, 5)).collect();
    let checks: Vec<_> = endos.par_iter().map(verify_fundamental_formula).collect();
    let bad = checks.iter().position(|c| !c.holds);
    report.claims.push(claim(
        "fundamental-formula",
        "an endomorphism is determined by its Jacobian: f(x_i) − 1 = Σ_j ∂f(x_i)/∂x_j·(x_j − 1)",
        json!({"n": n, "endomorphisms": endomorphisms, "max_image_length": 5}),
        json!({"checked": endomorphisms}),
        bad.is_none(),
        bad.map(|i| json!({"f": endos[i].to_string()})),
    ));
    Ok(report)
}

pub fn dark_suite(variant: Option<DarkVariant>, alpha_max: usize, beta_max: usize) -> Result<SuiteReport> {
    if alpha_max == 0 || beta_max == 0 {
        return Err(Error::InvalidParameter("exponent bounds must be positive".into()));
    }
    let variants = match variant {
        Some(v) => vec![v],
        None => vec![DarkVariant::Product, DarkVariant::Commutator],
    };
    let mut report = SuiteReport::new(
        "dark",
        0,
        json!({"variant": variant.map_or("both".to_string(), |v| v.to_string()), "alpha_max": alpha_max, "beta_max": beta_max}),
    );
    for v in variants {
        let (r_max, reference, inputs) = match v {
            DarkVariant::Product => (
                alpha_max,
                "x^α y^α = ∏_r θ(r)^C(α,r) with θ(r) a product of commutators of length ≥ r",
                json!({"alpha_max": alpha_max}),
            ),
            DarkVariant::Commutator => (
                alpha_max.max(beta_max),
                "[x^α, y^β] = ∏_{r,s} θ(r,s)^{C(α,r)C(β,s)} with x at least r and y at least s times in each factor",
                json!({"alpha_max": alpha_max, "beta_max": beta_max}),
            ),
        };
        let table = dark_table(v, r_max);
        let rep = verify_dark(&table, alpha_max, beta_max);
        report.claims.push(claim(
            &format!("dark-{v}"),
            reference,
            inputs,
            json!({"identities_checked": rep.identities_checked, "depth_checks": rep.depth_checks, "table": table.to_json()}),
            rep.holds(),
            rep.first_failure.as_ref().map(|f| serde_json::to_value(f).expect("serializable")),
        ));
    }
    Ok(report)
}

fn labeled_pool(n: usize) -> Vec<Automorphism> {
    ia_generator_automorphisms(n).into_iter().map(|(_, a)| a).collect()
}

/// A random element of depth at least `level` (1 or 2). Depth-two samples
/// are commutators of single generators so image lengths stay small.
fn random_deep(rng: &mut SampleRng, pool: &[Automorphism], level: usize) -> Automorphism {
    if level < 2 {
        return random_product(rng, pool, 2);
    }
    let a = random_product(rng, pool, 1);
    let b = random_product(rng, pool, 1);
    Automorphism::commutator(&a, &b).expect("same rank")
}

pub fn johnson_suite(n: usize, samples: usize, seed: u64, progress: Progress) -> Result<SuiteReport> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidParameter("rank must be between 2 and 6".into()));
    }
    let mut report = SuiteReport::new("johnson", seed, json!({"n": n, "samples": samples}));
    let gens = ia_generator_automorphisms(n);
    let expected = n * (n - 1) + n * (n - 1) * (n.saturating_sub(2)) / 2;
    report.claims.push(claim(
        "ia-generator-count",
        "IA_n is generated by K_ij and K_ijk",
        json!({"n": n}),
        json!({"count": gens.len(), "expected": expected}),
        gens.len() == expected,
        None,
    ));
    let depths: Vec<_> = gens.iter().map(|(_, a)| andreadakis_depth(&a.forward, 4)).collect();
    let bad = depths.iter().position(|d| d.lower_bound() != 1);
    report.claims.push(claim(
        "ia-generator-depth",
        "every K_ij and K_ijk lies in the first Andreadakis layer and not the second",
        json!({"n": n}),
        json!({"depths": depths.iter().map(|d| d.to_string()).collect::<Vec<_>>()}),
        bad.is_none(),
        bad.map(|i| json!(gens[i].0)),
    ));
    let j1 = frakj_lattice(n, 1)?;
    let dim = Derivation::space_dimension(n, 1);
    let divisors = snf_of_basis(&j1.basis, dim);
    let units = divisors.iter().filter(|d| **d == BigInt::from(1)).count();
    report.claims.push(claim(
        "johnson-degree-one",
        "in degree one the Johnson morphism maps IA_n onto V*⊗Λ²V",
        json!({"n": n}),
        json!({"rank": j1.lattice_rank(), "der_dimension": dim, "unit_divisors": units}),
        j1.lattice_rank() == dim && units == dim,
        None,
    ));
    progress(&format!("strong centrality on {samples} samples"));
    let pool = labeled_pool(n);
    let mut r = rng(seed);
    let pairs: Vec<(usize, usize, Automorphism, Automorphism)> = (0..samples)
        .map(|_| {
            let a = r.random_range(1..=2);
            let b = r.random_range(1..=2);
            (a, b, random_deep(&mut r, &pool, a), random_deep(&mut r, &pool, b))
        })
        .collect();
    let cap = 5;
    let results: Vec<(usize, usize, usize)> = pairs
        .par_iter()
        .map(|(_, _, f, g)| {
            let df = andreadakis_depth(&f.forward, cap).lower_bound();
            let dg = andreadakis_depth(&g.forward, cap).lower_bound();
            let c = Automorphism::commutator(f, g).expect("same rank");
            (df, dg, andreadakis_depth(&c.forward, cap).lower_bound())
        })
        .collect();
    let bad = results.iter().position(|&(a, b, c)| c < (a + b).min(cap));
    report.claims.push(claim(
        "strong-centrality",
        "[𝒜_a, 𝒜_b] ⊆ 𝒜_{a+b}",
        json!({"n": n, "samples": samples, "depth_cap": cap}),
        json!({"checked": samples}),
        bad.is_none(),
        bad.map(|i| json!({"f": pairs[i].2.forward.to_string(), "g": pairs[i].3.forward.to_string()})),
    ));
    let mut additive_ok = true;
    let mut equivariant_ok = true;
    let mut witness = None;
    for _ in 0..samples.min(50) {
        let f = random_product(&mut r, &pool, 3);
        let g = random_product(&mut r, &pool, 3);
        let fg = Automorphism::compose(&f, &g)?;
        let tf = johnson(&GradedAutClass::from_automorphism(&f, 1)?)?;
        let tg = johnson(&GradedAutClass::from_automorphism(&g, 1)?)?;
        let tfg = johnson(&GradedAutClass::from_automorphism(&fg, 1)?)?;
        if tfg != tf.add(&tg)? {
            additive_ok = false;
            witness.get_or_insert_with(|| json!({"f": f.forward.to_string(), "g": g.forward.to_string()}));
        }
        let mut perm: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            perm.swap(i, r.random_range(0..=i));
        }
        let h = Automorphism::permutation(&perm)?;
        let conj = Automorphism::conjugate(&f, &h)?;
        if johnson(&GradedAutClass::from_automorphism(&conj, 1)?)? != permute_derivation(&tf, &perm)? {
            equivariant_ok = false;
            witness.get_or_insert_with(|| json!({"f": f.forward.to_string(), "permutation": perm}));
        }
    }
    report.claims.push(claim(
        "johnson-additive",
        "τ(fg) = τ(f) + τ(g) on depth-one classes",
        json!({"n": n, "samples": samples.min(50)}),
        json!({"holds": additive_ok}),
        additive_ok,
        witness.clone(),
    ));
    report.claims.push(claim(
        "johnson-equivariant",
        "τ(h f h⁻¹) = h·τ(f) for permutation automorphisms h",
        json!({"n": n, "samples": samples.min(50)}),
        json!({"holds": equivariant_ok}),
        equivariant_ok,
        witness,
    ));
    Ok(report)
}

pub fn trace_suite(n: usize, progress: Progress) -> Result<SuiteReport> {
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidParameter("rank must be between 2 and 5".into()));
    }
    let mut report = SuiteReport::new("traces", 0, json!({"n": n}));
    let gens = ia_generator_automorphisms(n);
    let pairs: Vec<(usize, usize)> = (0..gens.len()).flat_map(|i| (i + 1..gens.len()).map(move |j| (i, j))).collect();
    progress(&format!("traces of {} generator commutators", pairs.len()));
    let results: Vec<(bool, bool, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let c = Automorphism::commutator(&gens[i].1, &gens[j].1).expect("same rank");
            let cls = GradedAutClass::from_automorphism(&c, 2).expect("commutators of IA generators have depth two");
            let tf = trace_fox(&cls);
            let ta = trace_algebraic(&cls).expect("Johnson images decompose");
            (tf.is_zero(), ta.is_zero(), tf == ta)
        })
        .collect();
    let bad_zero = results.iter().position(|r| !(r.0 && r.1));
    let bad_agree = results.iter().position(|r| !r.2);
    let name = |k: Option<usize>| k.map(|k| json!([gens[pairs[k].0].0, gens[pairs[k].1].0]));
    report.claims.push(claim(
        "trace-vanishing",
        "the trace of a depth-two class of Γ_2(IA_n) lies in [TV,TV], so its cyclic class vanishes",
        json!({"n": n, "pairs": pairs.len()}),
        json!({"fox_zero": results.iter().filter(|r| r.0).count(), "algebraic_zero": results.iter().filter(|r| r.1).count()}),
        bad_zero.is_none(),
        name(bad_zero),
    ));
    report.claims.push(claim(
        "trace-pipelines-agree",
        "the Fox-calculus trace equals contraction of the Johnson image",
        json!({"n": n, "pairs": pairs.len()}),
        json!({"agreeing": results.iter().filter(|r| r.2).count()}),
        bad_agree.is_none(),
        name(bad_agree),
    ));
    let degree_one: Vec<Value> = gens
        .iter()
        .map(|(label, a)| {
            let cls = GradedAutClass::from_automorphism(a, 1).expect("depth one");
            let tf = trace_fox(&cls);
            json!({"generator": label, "trace": tf.to_json(), "agree": trace_algebraic(&cls).ok() == Some(tf)})
        })
        .collect();
    let agree = degree_one.iter().all(|v| v["agree"] == json!(true));
    report.claims.push(claim(
        "trace-degree-one",
        "in degree one both trace pipelines agree on the generators",
        json!({"n": n}),
        json!(degree_one),
        agree,
        None,
    ));
    Ok(report)
}

fn stable_gate(n: usize, k: usize, allow_stretch: bool) -> Result<()> {
    if !(2..=6).contains(&n) || !(2..=6).contains(&k) {
        return Err(Error::InvalidParameter("need 2 <= n <= 6 and 2 <= k <= 6".into()));
    }
    let dim = Derivation::space_dimension(n, k);
    if dim > STRETCH_DIMENSION && !allow_stretch {
        return Err(Error::InvalidParameter(format!(
            "Der_k has dimension {dim} > {STRETCH_DIMENSION}; pass --allow-stretch to run it"
        )));
    }
    Ok(())
}

fn contraction_claims(r: &crate::andreadakis::StableSurjectivityReport, stable: bool) -> Vec<Claim> {
    let inputs = json!({"n": r.n, "k": r.k});
    let w = r.witness.as_ref().map(|v| json!(v.iter().map(crate::ring::bigint_to_json).collect::<Vec<_>>()));
    let surj = ("contraction-surjective", "the contraction Φ: V*⊗𝔏_{k+1}V → V^{⊗k} is onto", r.contraction_surjective);
    let kern = ("contraction-kernel-in-j", "ker Φ ⊆ 𝔍_k", r.contraction_kernel_in_j);
    [surj, kern]
        .into_iter()
        .map(|(id, reference, ok)| {
            if stable {
                claim(id, reference, inputs.clone(), json!({"holds": ok}), ok, w.clone())
            } else {
                info(id, reference, inputs.clone(), json!({"holds": ok}))
            }
        })
        .collect()
}

pub fn stable_surjectivity_suite(n: usize, k: usize, allow_stretch: bool, progress: Progress) -> Result<SuiteReport> {
    stable_gate(n, k, allow_stretch)?;
    let mut report = SuiteReport::new("stable-surjectivity", 0, json!({"n": n, "k": k}));
    progress(&format!("building 𝔍_{k} and ker tr for n={n}"));
    let r = stable_surjectivity_data(n, k)?;
    let stable = k + 2 <= n;
    let inputs = json!({"n": n, "k": k});
    let result = json!({
        "der_dimension": r.der_dimension,
        "j_rank": r.j_rank,
        "ker_trace_rank": r.ker_trace_rank,
        "j_in_kernel": r.j_in_kernel,
        "lattices_equal": r.lattices_equal,
    });
    let coker = json!({
        "free_rank": r.cokernel.free_rank,
        "torsion": r.cokernel.torsion().iter().map(crate::ring::bigint_to_json).collect::<Vec<_>>(),
        "necklace_count": r.necklace_count,
    });
    let w = r.witness.as_ref().map(|v| json!(v.iter().map(crate::ring::bigint_to_json).collect::<Vec<_>>()));
    let eq_ref = "𝔍_k = ker(tr_M) in the stable range";
    let coker_ref = "Der_k/𝔍_k ≅ C_kV is free of rank N(n,k)";
    let coker_ok = r.cokernel.is_free() && r.cokernel.free_rank == r.necklace_count;
    if stable {
        report.claims.push(claim("j-equals-ker-trace", eq_ref, inputs.clone(), result, r.lattices_equal, w));
        report.claims.push(claim("cokernel-free", coker_ref, inputs, coker, coker_ok, None));
    } else {
        report.claims.push(info("j-equals-ker-trace", eq_ref, inputs.clone(), result));
        report.claims.push(info("cokernel-free", coker_ref, inputs, coker));
    }
    report.claims.extend(contraction_claims(&r, stable));
    Ok(report)
}

pub fn contraction_suite(n: usize, k: usize, allow_stretch: bool, progress: Progress) -> Result<SuiteReport> {
    stable_gate(n, k, allow_stretch)?;
    let mut report = SuiteReport::new("satoh", 0, json!({"n": n, "k": k}));
    progress(&format!("contraction map for n={n}, k={k}"));
    let r = stable_surjectivity_data(n, k)?;
    report.claims.extend(contraction_claims(&r, k + 2 <= n));
    Ok(report)
}

pub fn congruence_suite(n: usize, q: u64, k_max: usize, samples: usize, seed: u64, progress: Progress) -> Result<SuiteReport> {
    if !(2..=6).contains(&n) || q < 2 || k_max == 0 || k_max > 6 {
        return Err(Error::InvalidParameter("need 2 <= n <= 6, q >= 2 and 1 <= k_max <= 6".into()));
    }
    let mut report = SuiteReport::new("congruence", seed, json!({"n": n, "q": q, "k_max": k_max, "samples": samples}));
    let lie_ref = "Lie(GL_n(qℤ)) ≅ 𝔰𝔩_n(ℤ/q)[t]: each degree is spanned by symbols of commutator witnesses";
    if n >= 5 && q >= 3 {
        progress("graded Lie ring witnesses");
        for d in verify_lie_ring(n, q, k_max, 20, seed)? {
            let ok = d.holds();
            report.claims.push(claim(
                &format!("lie-ring-degree-{}", d.degree),
                lie_ref,
                json!({"n": n, "q": q, "k": d.degree}),
                serde_json::to_value(&d).expect("serializable"),
                ok,
                d.witness.clone().map(Value::String),
            ));
        }
    } else {
        report.claims.push(info(
            "lie-ring",
            lie_ref,
            json!({"n": n, "q": q}),
            json!("not asserted: the comparison needs n >= 5 and q >= 3"),
        ));
    }
    progress(&format!("determinant/trace square on {samples} samples"));
    let mats = random_congruence_matrices(n, q, samples, seed);
    let reports: Vec<_> = mats.par_iter().map(verify_det_tr_square).collect();
    let bad = reports.iter().position(|r| !r.holds());
    report.claims.push(claim(
        "det-trace-square",
        "det(Id + M) ≡ 1 + tr(M) mod q^{2j} for M ≡ 0 mod q^j, and det = 1 exactly when the symbol is traceless",
        json!({"n": n, "q": q, "samples": samples}),
        json!({"checked": samples}),
        bad.is_none(),
        bad.map(|i| mats[i].matrix().to_json()),
    ));
    progress("bracket compatibility");
    let mut r = rng(seed ^ 0x5eed);
    let mut bad = None;
    let pairs = samples.min(200);
    for idx in 0..pairs {
        let (a, ai) = random_shear_product(&mut r, n, q, 3);
        let (b, _) = random_shear_product(&mut r, n, q, 3);
        // Every other sample uses a depth-two left factor.
        let a = if idx % 2 == 1 {
            let (c, ci) = random_shear_product(&mut r, n, q, 2);
            a.mul(&c)?.mul(&ai)?.mul(&ci)?
        } else {
            a
        };
        let ca = CongruenceMatrix::new(a, q)?;
        let cb = CongruenceMatrix::new(b, q)?;
        if !verify_bracket_compat(&ca, &cb)?.holds() && bad.is_none() {
            bad = Some(json!({"a": ca.matrix().to_json(), "b": cb.matrix().to_json()}));
        }
    }
    report.claims.push(claim(
        "bracket-compatibility",
        "depth([A,B]) ≥ depth A + depth B and the symbol of [A,B] is the bracket of symbols",
        json!({"n": n, "q": q, "pairs": pairs}),
        json!({"checked": pairs}),
        bad.is_none(),
        bad,
    ));
    Ok(report)
}

pub fn p_concentration_suite(n: usize, p: u32, samples: usize, seed: u64, progress: Progress) -> Result<SuiteReport> {
    Ring::prime(p)?;
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidParameter("rank must be between 2 and 6".into()));
    }
    let mut report = SuiteReport::new("p-concentration", seed, json!({"n": n, "p": p, "samples": samples}));
    progress(&format!("p-th power depths on {samples} samples"));
    let cap = p as usize + 1;
    let (s, bad) = verify_power_depth(n, p, samples, cap, seed)?;
    report.claims.push(claim(
        "p-power-depth",
        "𝒜^[p] is p-restricted: depth(f^p) ≥ p·depth(f)",
        json!({"n": n, "p": p, "samples": samples, "depth_cap": cap}),
        json!({"checked": s.len(), "max_power_depth": s.iter().map(|x| x.power_depth).max()}),
        bad.is_none(),
        bad.map(|i| serde_json::to_value(&s[i]).expect("serializable")),
    ));
    let k_max = 3.min(if n <= 2 { 4 } else { 3 });
    let formula = verify_gamma_p_product_formula(n, p, k_max, 20, seed)?;
    let bad = formula.iter().position(|d| !d.holds());
    report.claims.push(claim(
        "gamma-p-product-formula",
        "Γ_k^[p] = ∏_{i p^j ≥ k} (Γ_i)^{p^j}, with graded dimensions those of the free restricted Lie algebra",
        json!({"n": n, "p": p, "k_max": k_max, "samples": 20}),
        serde_json::to_value(&formula).expect("serializable"),
        bad.is_none(),
        None,
    ));
    let mut words = vec!["x2"];
    if n >= 3 {
        words.push("[x2,x3]");
    }
    for text in words {
        let w = Word::parse(text, n)?;
        let wit = nontame_witness(&w, p)?;
        report.claims.push(claim(
            &format!("nontame-witness-{text}"),
            "x_1 ↦ w^p x_1 lies in 𝒜^[p]_{pk−1} but τ sends X_1 outside V*⊗𝔏V",
            json!({"n": n, "p": p, "w": text}),
            wit.to_json(),
            wit.certified() && wit.class.depth() == p as usize * wit.word_degree - 1,
            None,
        ));
    }
    let conc_ref = "coker(𝔍^[p]_k → ker tr_M) is concentrated in degrees pl−1 and pl, within the stated bounds";
    if p == 2 || n < 4 {
        report.claims.push(info(
            "p-concentration",
            conc_ref,
            json!({"n": n, "p": p}),
            json!("not asserted: needs p odd and n >= 4"),
        ));
    } else {
        progress("restricted 𝔍 against the restricted trace kernel");
        for d in verify_p_concentration(n, p, n - 2)? {
            report.claims.push(claim(
                &format!("p-concentration-degree-{}", d.k),
                conc_ref,
                json!({"n": n, "p": p, "k": d.k}),
                serde_json::to_value(&d).expect("serializable"),
                d.holds(),
                None,
            ));
        }
    }
    Ok(report)
}

fn random_tensor(rng: &mut SampleRng, n: usize, k: usize, ring: Ring) -> TensorPoly {
    let mut t = TensorPoly::zero(n, k, ring);
    for _ in 0..rng.random_range(1..=4) {
        let m: Monomial = (0..k).map(|_| rng.random_range(0..n) as u8).collect();
        let c = ring.reduce(BigInt::from(rng.random_range(-3i64..=3)));
        t = t.add(&TensorPoly::monomial(n, k, ring, &m, c)).expect("same shape");
    }
    t
}

/// A random element of `[TV,TV]_k` (plus a `p`-th power over `F_p`).
fn random_member(rng: &mut SampleRng, n: usize, k: usize, ring: Ring) -> TensorPoly {
    let mut t = TensorPoly::zero(n, k, ring);
    for _ in 0..rng.random_range(1..=2) {
        let i = rng.random_range(1..k);
        let a = random_tensor(rng, n, i, ring).with_degree_bound(k);
        let b = random_tensor(rng, n, k - i, ring).with_degree_bound(k);
        t = t.add(&a.commutator(&b).expect("same shape")).expect("same shape");
    }
    if let Ring::Prime(p) = ring {
        let p = p as usize;
        if k % p == 0 {
            let u = random_tensor(rng, n, k / p, ring).with_degree_bound(k);
            let mut power = TensorPoly::one(n, k, ring);
            for _ in 0..p {
                power = power.mul(&u).expect("same shape");
            }
            t = t.add(&power).expect("same shape");
        }
    }
    t
}

/// Compares exact class-sum membership with random matrix evaluations.
pub fn cross_oracle_suite(samples: usize, bryant_samples: usize, seed: u64, progress: Progress) -> Result<SuiteReport> {
    let n = 3;
    let mut report =
        SuiteReport::new("cross-oracle", seed, json!({"n": n, "samples": samples, "matrix_samples": bryant_samples, "degree_max": 4}));
    for ring in [Ring::Integers, Ring::Prime(2), Ring::Prime(3)] {
        progress(&format!("cross-oracle over {ring}"));
        let flag = matches!(ring, Ring::Prime(_));
        let mut r = rng(seed ^ ring.characteristic() as u64);
        let cases: Vec<(TensorPoly, u64)> = (0..samples)
            .map(|i| {
                let k = r.random_range(2..=4);
                let t = if i % 2 == 0 { random_member(&mut r, n, k, ring) } else { random_tensor(&mut r, n, k, ring) };
                (t, r.random::<u64>())
            })
            .collect();
        let outcomes: Vec<(bool, Option<usize>)> = cases
            .par_iter()
            .map(|(t, s)| {
                let k = t.homogeneous_degree().unwrap_or(2);
                let member = t.in_bracket_subspace(k, flag).expect("homogeneous");
                let refuted = t.bryant_refutation(k, bryant_samples, *s).expect("homogeneous");
                (member, refuted)
            })
            .collect();
        let members = outcomes.iter().filter(|o| o.0).count();
        let member_bad = outcomes.iter().position(|o| o.0 && o.1.is_some());
        let non_members = outcomes.len() - members;
        let refuted = outcomes.iter().filter(|o| !o.0 && o.1.is_some()).count();
        let inputs = json!({"ring": ring.to_string(), "samples": samples, "p_restricted": flag});
        report.claims.push(claim(
            &format!("members-trace-free-{ring}"),
            "elements of [TV,TV] (and p-th powers over F_p) have vanishing traces in every matrix evaluation",
            inputs.clone(),
            json!({"members": members}),
            member_bad.is_none(),
            member_bad.map(|i| cases[i].0.to_json()),
        ));
        let ok = non_members == 0 || refuted * 100 >= non_members * 95;
        report.claims.push(claim(
            &format!("non-members-refuted-{ring}"),
            "a tensor outside [TV,TV] is detected by a matrix trace (sampling target 95%)",
            inputs,
            json!({"non_members": non_members, "refuted": refuted}),
            ok,
            None,
        ));
    }
    Ok(report)
}

/// Every suite with its default parameters.
pub fn all_suites(seed: u64, allow_stretch: bool, progress: Progress) -> Result<Vec<SuiteReport>> {
    let mut out = vec![
        chain_rule_suite(3, 200, 100, seed, progress)?,
        dark_suite(None, 5, 4)?,
        johnson_suite(3, 50, seed, progress)?,
        trace_suite(4, progress)?,
        stable_surjectivity_suite(4, 2, allow_stretch, progress)?,
        contraction_suite(4, 2, allow_stretch, progress)?,
        congruence_suite(5, 3, 3, 500, seed, progress)?,
        p_concentration_suite(4, 3, 100, seed, progress)?,
        cross_oracle_suite(500, 50, seed, progress)?,
    ];
    if allow_stretch {
        out.push(stable_surjectivity_suite(5, 2, true, progress)?);
        out.push(stable_surjectivity_suite(5, 3, true, progress)?);
    }
    Ok(out)
}
