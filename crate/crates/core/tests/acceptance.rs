//! End-to-end acceptance criteria, each checked exactly against an
//! independent oracle and within its time budget. Prints one line per
//! criterion and exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use foxlie::andreadakis::{
    contraction_matrix, frakj_lattice, ia_generator_automorphisms, johnson, stable_surjectivity_data, trace_algebraic,
    trace_fox, GradedAutClass,
};
use foxlie::congruence::{degree_witnesses, random_congruence_matrices, verify_det_tr_square, verify_lie_ring, CongruenceMatrix};
use foxlie::dark::{dark_table, verify_dark, DarkVariant};
use foxlie::group_ring::{verify_chain_rule, verify_fundamental_formula};
use foxlie::lattice::{kernel, rank_mod_p, snf};
use foxlie::lie::{restricted_dimension, witt_dimension};
use foxlie::restricted::{nontame_witness, verify_p_concentration, verify_power_depth};
use foxlie::sampling::{random_endomorphism, rng};
use foxlie::tensor::word_valuation;
use foxlie::word::Automorphism;
use foxlie::{Derivation, Endomorphism, GroupRingElement, IntMatrix, JacobianMatrix, LieElement, Ring, TensorPoly, Word};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// A deliberately naive group ring ZF_n: words are vectors of signed generator
// indices, reduced after every product.

type NaiveWord = Vec<i32>;
type NaiveElement = BTreeMap<NaiveWord, i64>;

fn reduce(w: impl IntoIterator<Item = i32>) -> NaiveWord {
    let mut out: NaiveWord = Vec::new();
    for l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn naive_word(w: &Word) -> NaiveWord {
    w.letters().iter().map(|l| l.raw()).collect()
}

fn naive_inverse(w: &[i32]) -> NaiveWord {
    w.iter().rev().map(|l| -l).collect()
}

fn naive_apply(images: &[NaiveWord], w: &[i32]) -> NaiveWord {
    reduce(w.iter().flat_map(|&l| {
        let img = &images[l.unsigned_abs() as usize - 1];
        if l > 0 {
            img.clone()
        } else {
            naive_inverse(img)
        }
    }))
}

fn add_term(e: &mut NaiveElement, w: NaiveWord, c: i64) {
    let entry = e.entry(w.clone()).or_insert(0);
    *entry += c;
    if *entry == 0 {
        e.remove(&w);
    }
}

fn naive_mul(a: &NaiveElement, b: &NaiveElement) -> NaiveElement {
    let mut out = NaiveElement::new();
    for (u, x) in a {
        for (v, y) in b {
            add_term(&mut out, reduce(u.iter().chain(v).copied()), x * y);
        }
    }
    out
}

fn naive_add(a: &NaiveElement, b: &NaiveElement) -> NaiveElement {
    let mut out = a.clone();
    for (w, c) in b {
        add_term(&mut out, w.clone(), *c);
    }
    out
}

fn naive_map(images: &[NaiveWord], e: &NaiveElement) -> NaiveElement {
    let mut out = NaiveElement::new();
    for (w, c) in e {
        add_term(&mut out, naive_apply(images, w), *c);
    }
    out
}

/// Fox derivative from the letter-by-letter formula.
fn naive_fox(w: &[i32], i: i32) -> NaiveElement {
    let mut out = NaiveElement::new();
    for (pos, &l) in w.iter().enumerate() {
        if l == i {
            add_term(&mut out, reduce(w[..pos].iter().copied()), 1);
        } else if l == -i {
            add_term(&mut out, reduce(w[..=pos].iter().copied()), -1);
        }
    }
    out
}

fn from_library(e: &GroupRingElement) -> NaiveElement {
    e.terms().iter().map(|(w, c)| (naive_word(w), i64::try_from(c).expect("small coefficient"))).collect()
}

fn naive_images(f: &Endomorphism) -> Vec<NaiveWord> {
    f.images().iter().map(naive_word).collect()
}

fn criterion_chain_rule() -> Outcome {
    let mut r = rng(7);
    for pair in 0..200 {
        let n = 2 + pair % 3;
        let f = random_endomorphism(&mut r, n, 4);
        let g = random_endomorphism(&mut r, n, 4);
        ensure(verify_chain_rule(&f, &g).map_err(|e| e.to_string())?.holds, || format!("library check fails on f={f}, g={g}"))?;
        let (fi, gi) = (naive_images(&f), naive_images(&g));
        let fg: Vec<NaiveWord> = gi.iter().map(|w| naive_apply(&fi, w)).collect();
        let lib = JacobianMatrix::of(&Endomorphism::compose(&f, &g).map_err(|e| e.to_string())?, Ring::Integers);
        for j in 0..n {
            for i in 1..=n as i32 {
                let lhs = naive_fox(&fg[j], i);
                let mut rhs = NaiveElement::new();
                for k in 1..=n as i32 {
                    let dg = naive_map(&fi, &naive_fox(&gi[j], k));
                    rhs = naive_add(&rhs, &naive_mul(&dg, &naive_fox(&fi[k as usize - 1], i)));
                }
                ensure(lhs == rhs, || format!("D(fg) != f(Dg)D(f) at ({}, {i}) for f={f}, g={g}", j + 1))?;
                ensure(from_library(lib.entry(j, i as usize - 1)) == lhs, || format!("library Jacobian differs for f={f}, g={g}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_fundamental_formula() -> Outcome {
    let mut r = rng(11);
    for s in 0..100 {
        let n = 2 + s % 3;
        let f = random_endomorphism(&mut r, n, 6);
        ensure(verify_fundamental_formula(&f).holds, || format!("library check fails on f={f}"))?;
        for img in naive_images(&f) {
            let mut rhs = NaiveElement::new();
            for i in 1..=n as i32 {
                let xi_minus_one: NaiveElement = [(vec![i], 1), (vec![], -1)].into_iter().collect();
                rhs = naive_add(&rhs, &naive_mul(&naive_fox(&img, i), &xi_minus_one));
            }
            let mut lhs = NaiveElement::new();
            add_term(&mut lhs, img.clone(), 1);
            add_term(&mut lhs, vec![], -1);
            ensure(lhs == rhs, || format!("fundamental formula fails for f={f}"))?;
        }
    }
    Ok(())
}

/// Parses a label `Ki,j` or `Ki,j,k` into indices.
fn label_indices(label: &str) -> Vec<usize> {
    label[1..].split(',').map(|s| s.parse().expect("index")).collect()
}

fn criterion_johnson_degree_one() -> Outcome {
    let n = 3;
    let gens = ia_generator_automorphisms(n);
    ensure(gens.len() == 9, || format!("{} generators", gens.len()))?;
    let mut rows = Vec::new();
    for (label, a) in &gens {
        let tau = johnson(&GradedAutClass::from_automorphism(a, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let idx = label_indices(label);
        let bracket = match idx[..] {
            [i, j] => format!("[X{j},X{i}]"),
            [_, j, k] => format!("[X{j},X{k}]"),
            _ => unreachable!(),
        };
        let value = LieElement::parse(&bracket, n, Ring::Integers).map_err(|e| e.to_string())?;
        let expected = Derivation::elementary(idx[0], &value).map_err(|e| e.to_string())?;
        ensure(tau == expected, || format!("τ({label}) = {tau}, expected X{}*⊗{bracket}", idx[0]))?;
        rows.push(tau.coordinates());
    }
    let dim = Derivation::space_dimension(n, 1);
    ensure(dim == 9, || format!("Der_1 has dimension {dim}"))?;
    let m = IntMatrix::from_rows(dim, rows).map_err(|e| e.to_string())?;
    let det = m.determinant().map_err(|e| e.to_string())?;
    ensure(det.abs().is_one(), || format!("determinant {det}"))?;
    ensure(snf(&m).iter().all(|d| d.is_one()), || "non-unit Smith divisor".into())?;
    ensure(frakj_lattice(n, 1).map_err(|e| e.to_string())?.lattice_rank() == 9, || "degree-one lattice rank".into())
}

fn criterion_trace_vanishing() -> Outcome {
    let gens = ia_generator_automorphisms(4);
    ensure(gens.len() == 24, || format!("{} generators", gens.len()))?;
    let mut pairs = 0;
    for (i, (la, a)) in gens.iter().enumerate() {
        for (lb, b) in &gens[i + 1..] {
            let c = Automorphism::commutator(a, b).map_err(|e| e.to_string())?;
            let cls = GradedAutClass::from_automorphism(&c, 2).map_err(|e| format!("[{la},{lb}]: {e}"))?;
            let fox = trace_fox(&cls);
            let alg = trace_algebraic(&cls).map_err(|e| e.to_string())?;
            ensure(fox.is_zero() && alg.is_zero(), || format!("nonzero trace for [{la},{lb}]: {fox} / {alg}"))?;
            ensure(fox == alg, || format!("pipelines disagree for [{la},{lb}]"))?;
            pairs += 1;
        }
    }
    ensure(pairs == 276, || format!("{pairs} pairs"))?;
    // The pipelines also agree where the trace is nonzero.
    for (label, a) in &gens {
        let cls = GradedAutClass::from_automorphism(a, 1).map_err(|e| e.to_string())?;
        ensure(Ok(trace_fox(&cls)) == trace_algebraic(&cls).map_err(|e| e.to_string()), || format!("degree-one disagreement at {label}"))?;
    }
    Ok(())
}

/// Rotation classes of length-`k` sequences, by enumeration.
fn brute_necklaces(n: usize, k: usize) -> usize {
    let mut seen = BTreeSet::new();
    let total = n.pow(k as u32);
    for code in 0..total {
        let seq: Vec<usize> = (0..k).map(|i| code / n.pow(i as u32) % n).collect();
        let canon = (0..k).map(|r| [&seq[r..], &seq[..r]].concat()).min().expect("k >= 1");
        seen.insert(canon);
    }
    seen.len()
}

fn stable_cases() -> [(usize, usize, usize); 3] {
    [(4, 2, 10), (5, 2, 15), (5, 3, 45)]
}

fn criterion_stable_surjectivity() -> Outcome {
    for (n, k, rank) in stable_cases() {
        let necklaces = brute_necklaces(n, k);
        ensure(necklaces == rank, || format!("N({n},{k}) = {necklaces}"))?;
        let r = stable_surjectivity_data(n, k).map_err(|e| e.to_string())?;
        ensure(r.der_dimension == n * witt_dimension(n, k + 1), || "Der_k dimension".into())?;
        ensure(r.j_in_kernel && r.lattices_equal, || format!("𝔍_{k} != ker tr at n={n}"))?;
        ensure(r.cokernel.is_free() && r.cokernel.free_rank == rank, || format!("cokernel {:?} at ({n},{k})", r.cokernel))?;
        ensure(r.j_rank + rank == r.der_dimension, || "rank bookkeeping".into())?;
    }
    Ok(())
}

fn criterion_contraction() -> Outcome {
    for (n, k, _) in stable_cases() {
        let phi = contraction_matrix(n, k);
        let divisors = snf(&phi);
        ensure(divisors.len() == n.pow(k as u32) && divisors.iter().all(|d| d.is_one()), || format!("Φ not onto at ({n},{k})"))?;
        let j = frakj_lattice(n, k).map_err(|e| e.to_string())?;
        let ker = kernel(&phi);
        for row in ker.row_vecs() {
            ensure(j.basis.contains(&row), || format!("ker Φ ⊄ 𝔍 at ({n},{k})"))?;
        }
        let r = stable_surjectivity_data(n, k).map_err(|e| e.to_string())?;
        ensure(r.contraction_surjective && r.contraction_kernel_in_j, || "library report disagrees".into())?;
    }
    Ok(())
}

fn criterion_congruence() -> Outcome {
    let (n, q) = (5usize, 3u64);
    for d in verify_lie_ring(n, q, 3, 20, 3).map_err(|e| e.to_string())? {
        ensure(d.holds() && d.symbol_rank == 24, || format!("degree report {d:?}"))?;
    }
    for k in 1..=3 {
        let mut symbols = Vec::new();
        for w in degree_witnesses(n, q, k).map_err(|e| e.to_string())? {
            let (m, inv) = w.evaluate(n);
            ensure(m.mul(&inv).map_err(|e| e.to_string())? == IntMatrix::identity(n), || format!("{w}: inverse"))?;
            ensure(w.commutator_depth() == k, || format!("{w}: commutator depth"))?;
            let cm = CongruenceMatrix::new(m.clone(), q).map_err(|e| e.to_string())?;
            ensure(cm.depth() == Some(k), || format!("{w}: depth {:?}", cm.depth()))?;
            let qk = BigInt::from(q).pow(k as u32);
            let mut sym = Vec::new();
            let mut trace = BigInt::zero();
            for r in 0..n {
                for c in 0..n {
                    let e = m.get(r, c) - if r == c { BigInt::one() } else { BigInt::zero() };
                    let s = (e / &qk) % BigInt::from(q);
                    if r == c {
                        trace += &s;
                    }
                    sym.push(s);
                }
            }
            ensure((trace % BigInt::from(q)).is_zero(), || format!("{w}: symbol not traceless"))?;
            symbols.push(sym);
        }
        let rank = rank_mod_p(&IntMatrix::from_rows(n * n, symbols).map_err(|e| e.to_string())?, q);
        ensure(rank == n * n - 1, || format!("degree {k}: symbol rank {rank}"))?;
    }
    let samples = random_congruence_matrices(n, q, 500, 5);
    ensure(samples.len() == 500, || "sample count".into())?;
    for m in &samples {
        ensure(verify_det_tr_square(m).holds(), || format!("det/tr fails on {}", m.matrix()))?;
        let j = m.depth().expect("not the identity") as u32;
        let det = m.matrix().determinant().map_err(|e| e.to_string())?;
        let tr: BigInt = (0..n).map(|i| m.matrix().get(i, i) - 1).sum();
        let modulus = BigInt::from(q).pow(2 * j);
        let diff: BigInt = det - BigInt::one() - tr;
        ensure((diff % &modulus).is_zero(), || format!("det ≢ 1 + tr on {}", m.matrix()))?;
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn criterion_dark() -> Outcome {
    let product = dark_table(DarkVariant::Product, 5);
    ensure(verify_dark(&product, 5, 0).holds(), || "library product check".into())?;
    for a in 1..=5 {
        let mut acc = Vec::new();
        for r in 0..=a {
            let t = naive_word(product.theta(r).ok_or("missing θ")?);
            for _ in 0..binomial(a, r) {
                acc = reduce(acc.into_iter().chain(t.iter().copied()));
            }
        }
        let target: NaiveWord = std::iter::repeat_n(1, a).chain(std::iter::repeat_n(2, a)).collect();
        ensure(acc == target, || format!("x^{a}y^{a} product identity"))?;
    }
    for r in 2..=5 {
        let v = word_valuation(product.theta(r).ok_or("missing θ")?, Ring::Integers, r);
        ensure(v.is_at_least(r), || format!("θ({r}) too shallow"))?;
    }
    let comm = dark_table(DarkVariant::Commutator, 4);
    ensure(verify_dark(&comm, 4, 4).holds(), || "library commutator check".into())?;
    for a in 1..=4 {
        for b in 1..=4 {
            let mut acc = Vec::new();
            for r in 1..=a {
                for s in 1..=b {
                    let t = naive_word(comm.theta2(r, s).ok_or("missing θ")?);
                    for _ in 0..binomial(a, r) * binomial(b, s) {
                        acc = reduce(acc.into_iter().chain(t.iter().copied()));
                    }
                }
            }
            let xa: NaiveWord = vec![1; a];
            let yb: NaiveWord = vec![2; b];
            let target = reduce([xa.clone(), yb.clone(), naive_inverse(&xa), naive_inverse(&yb)].concat());
            ensure(acc == target, || format!("[x^{a},y^{b}] commutator identity"))?;
            let v = word_valuation(comm.theta2(a, b).ok_or("missing θ")?, Ring::Integers, a + b);
            ensure(v.is_at_least(a + b), || format!("θ({a},{b}) too shallow"))?;
        }
    }
    Ok(())
}

fn criterion_p_restricted() -> Outcome {
    let n = 4;
    for p in [3u32, 5] {
        let (samples, bad) = verify_power_depth(n, p, 100, p as usize + 1, 13).map_err(|e| e.to_string())?;
        ensure(samples.len() == 100 && bad.is_none(), || format!("p={p}: power depth fails at {bad:?}"))?;
        for text in ["x2", "[x2,x3]"] {
            let w = Word::parse(text, n).map_err(|e| e.to_string())?;
            let wit = nontame_witness(&w, p).map_err(|e| e.to_string())?;
            ensure(wit.certified(), || format!("p={p}: no certificate for {text}"))?;
        }
        for d in verify_p_concentration(n, p, n - 2).map_err(|e| e.to_string())? {
            let p_us = p as usize;
            let concentrated = (d.k + 1) % p_us == 0 || d.k % p_us == 0;
            ensure(d.j_in_kernel, || format!("p={p}, k={}: 𝔍 ⊄ ker", d.k))?;
            ensure(d.concentrated == concentrated, || format!("p={p}, k={}: concentration flag", d.k))?;
            if concentrated {
                let bound = if (d.k + 1) % p_us == 0 {
                    n * (restricted_dimension(n, d.k + 1, p_us) - witt_dimension(n, d.k + 1))
                } else {
                    n.pow((d.k / p_us) as u32)
                };
                ensure(d.gap <= bound, || format!("p={p}, k={}: gap {} > {bound}", d.k, d.gap))?;
            } else {
                ensure(d.gap == 0, || format!("p={p}, k={}: gap {}", d.k, d.gap))?;
            }
        }
    }
    Ok(())
}

fn random_tensor(r: &mut foxlie::sampling::SampleRng, n: usize, k: usize, ring: Ring) -> TensorPoly {
    let mut t = TensorPoly::zero(n, k, ring);
    for _ in 0..r.random_range(1..=4) {
        let m: Vec<u8> = (0..k).map(|_| r.random_range(0..n) as u8).collect();
        let c = ring.reduce(BigInt::from(r.random_range(-3i64..=3)));
        t = t.add(&TensorPoly::monomial(n, k, ring, &m, c)).expect("same shape");
    }
    t
}

fn criterion_cross_oracle() -> Outcome {
    let n = 3;
    for ring in [Ring::Integers, Ring::Prime(2), Ring::Prime(3)] {
        let flag = ring != Ring::Integers;
        let mut r = rng(17 + ring.characteristic() as u64);
        let (mut members, mut non_members, mut refuted) = (0, 0, 0);
        for s in 0..500 {
            let k = r.random_range(1..=4);
            // Even samples are built to lie in the bracket subspace.
            let t = if s % 2 == 0 && k >= 2 {
                let i = r.random_range(1..k);
                let a = random_tensor(&mut r, n, i, ring).with_degree_bound(k);
                let b = random_tensor(&mut r, n, k - i, ring).with_degree_bound(k);
                let c = a.commutator(&b).expect("same shape");
                let member = c.in_bracket_subspace(k, flag).map_err(|e| e.to_string())?;
                ensure(member, || format!("commutator {c} rejected over {ring}"))?;
                c
            } else {
                random_tensor(&mut r, n, k, ring)
            };
            let seed = r.random::<u64>();
            let refutation = t.bryant_refutation(k, 50, seed).map_err(|e| e.to_string())?;
            if t.in_bracket_subspace(k, flag).map_err(|e| e.to_string())? {
                members += 1;
                ensure(refutation.is_none(), || format!("member {t} has a nonzero matrix trace over {ring}"))?;
            } else {
                non_members += 1;
                if refutation.is_some() {
                    refuted += 1;
                }
            }
        }
        ensure(members + non_members == 500, || "sample count".into())?;
        ensure(refuted * 100 >= non_members * 95, || format!("{ring}: refuted {refuted} of {non_members}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("chain rule", Duration::from_secs(10), criterion_chain_rule),
        ("fundamental formula", Duration::from_secs(5), criterion_fundamental_formula),
        ("Johnson degree one", Duration::from_secs(5), criterion_johnson_degree_one),
        ("trace vanishing", Duration::from_secs(60), criterion_trace_vanishing),
        ("stable surjectivity", Duration::from_secs(300), criterion_stable_surjectivity),
        ("contraction facts", Duration::from_secs(300), criterion_contraction),
        ("congruence Lie ring", Duration::from_secs(120), criterion_congruence),
        ("dark identities", Duration::from_secs(30), criterion_dark),
        ("p-restricted suite", Duration::from_secs(300), criterion_p_restricted),
        ("cross-oracle consistency", Duration::from_secs(60), criterion_cross_oracle),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| ensure(elapsed <= budget, || format!("exceeded budget {budget:?}")));
        match outcome {
            Ok(()) => println!("criterion {}: pass ({name}, {elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: fail ({name}, {elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
