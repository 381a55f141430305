use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use foxlie::andreadakis::{
    andreadakis_depth, ia_generator_automorphisms, johnson, trace_algebraic, trace_fox, GradedAutClass,
};
use foxlie::congruence::{random_shear_product, verify_bracket_compat, verify_det_tr_square, CongruenceMatrix};
use foxlie::group_ring::{verify_chain_rule, verify_fundamental_formula};
use foxlie::lattice::{hnf, kernel, lattice_equal, rank_mod_p, snf};
use foxlie::restricted::gamma_p_degree;
use foxlie::sampling::{random_endomorphism, random_product, rng};
use foxlie::tensor::{magnus_word, word_valuation};
use foxlie::word::Automorphism;
use foxlie::{Derivation, GroupRingElement, IntMatrix, LieElement, LyndonBasis, Ring, Word};

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    let letter = (1..=rank as i32).prop_flat_map(|g| prop_oneof![Just(g), Just(-g)]);
    prop::collection::vec(letter, 0..=max_len).prop_map(move |ls| Word::from_signed(rank, &ls).expect("in range"))
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r)
            .prop_map(move |rows| IntMatrix::from_i64(&rows))
    })
}

fn lie_element(rank: usize, degree: usize) -> impl Strategy<Value = LieElement> {
    let dim = LyndonBasis::get(rank, degree).len();
    prop::collection::vec(-3i64..=3, dim).prop_map(move |c| {
        LieElement::from_coords(rank, degree, Ring::Integers, c.into_iter().map(BigInt::from).collect()).expect("dimension")
    })
}

/// Standard-convention commutator `x⁻¹y⁻¹xy`, written with the library's `[a,b] = aba⁻¹b⁻¹`.
fn std_comm(x: &Word, y: &Word) -> Word {
    Word::commutator(&x.inverse(), &y.inverse()).unwrap()
}

/// `y⁻¹ x y`.
fn std_conj(x: &Word, y: &Word) -> Word {
    y.inverse().multiply(x).unwrap().multiply(y).unwrap()
}

fn ia_pool(n: usize) -> Vec<Automorphism> {
    ia_generator_automorphisms(n).into_iter().map(|(_, a)| a).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_group_axioms(u in word(3, 12), v in word(3, 12), w in word(3, 12)) {
        prop_assert!(u.multiply(&u.inverse()).unwrap().is_identity());
        prop_assert_eq!(u.multiply(&v).unwrap().inverse(), v.inverse().multiply(&u.inverse()).unwrap());
        prop_assert_eq!(u.multiply(&v).unwrap().multiply(&w).unwrap(), u.multiply(&v.multiply(&w).unwrap()).unwrap());
        let reduced = u.letters().windows(2).all(|p| p[0] != p[1].inverse());
        prop_assert!(reduced);
    }

    #[test]
    fn hall_witt_identity(x in word(3, 6), y in word(3, 6), z in word(3, 6)) {
        let a = std_conj(&std_comm(&std_comm(&x, &y.inverse()), &z), &y);
        let b = std_conj(&std_comm(&std_comm(&y, &z.inverse()), &x), &z);
        let c = std_conj(&std_comm(&std_comm(&z, &x.inverse()), &y), &x);
        prop_assert!(a.multiply(&b).unwrap().multiply(&c).unwrap().is_identity());
    }

    #[test]
    fn fox_derivative_is_a_derivation(u in word(3, 10), v in word(3, 10), i in 1usize..=3) {
        let r = Ring::Integers;
        let (gu, gv) = (GroupRingElement::from_word(&u, r), GroupRingElement::from_word(&v, r));
        let lhs = GroupRingElement::from_word(&u.multiply(&v).unwrap(), r).fox_derivative(i).unwrap();
        let rhs = gu.fox_derivative(i).unwrap().add(&gu.multiply(&gv.fox_derivative(i).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chain_rule_and_fundamental_formula(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let f = random_endomorphism(&mut r, n, 5);
        let g = random_endomorphism(&mut r, n, 5);
        prop_assert!(verify_chain_rule(&f, &g).unwrap().holds);
        prop_assert!(verify_fundamental_formula(&f).holds);
    }

    #[test]
    fn magnus_is_multiplicative(u in word(3, 8), v in word(3, 8), p in prop_oneof![Just(0u32), Just(2), Just(3)]) {
        let ring = if p == 0 { Ring::Integers } else { Ring::Prime(p) };
        let d = 5;
        let lhs = magnus_word(&u.multiply(&v).unwrap(), d, ring);
        let rhs = magnus_word(&u, d, ring).mul(&magnus_word(&v, d, ring)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutators_deepen_valuation(u in word(3, 6), v in word(3, 6), w in word(3, 6)) {
        let d = 6;
        let vu = word_valuation(&u, Ring::Integers, d).lower_bound();
        let c = Word::commutator(&u, &Word::commutator(&v, &w).unwrap()).unwrap();
        let vc = word_valuation(&v, Ring::Integers, d).lower_bound() + word_valuation(&w, Ring::Integers, d).lower_bound();
        prop_assert!(word_valuation(&c, Ring::Integers, d).lower_bound() >= (vu + vc).min(d + 1));
    }

    #[test]
    fn hnf_is_a_unimodular_change_of_basis(m in small_matrix()) {
        let (h, u) = hnf(&m);
        prop_assert_eq!(&u.mul(&m).unwrap(), &h);
        prop_assert!(u.determinant().unwrap().abs() == BigInt::from(1));
        prop_assert!(lattice_equal(&h, &m));
        for row in kernel(&m).row_vecs() {
            let prod = IntMatrix::from_rows(row.len(), vec![row]).unwrap().mul(&m).unwrap();
            prop_assert!(prod.is_zero());
        }
    }

    #[test]
    fn mod_p_rank_drops_by_divisors_divisible_by_p(m in small_matrix(), p in prop_oneof![Just(2u64), Just(3), Just(5)]) {
        let divisors = snf(&m);
        let rank = divisors.iter().filter(|d| !d.is_zero()).count();
        let drops = divisors.iter().filter(|d| !d.is_zero() && (*d % BigInt::from(p)).is_zero()).count();
        prop_assert_eq!(rank_mod_p(&m, p), rank - drops);
        for w in divisors.windows(2) {
            prop_assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn lie_bracket_axioms(a in lie_element(3, 1), b in lie_element(3, 2), c in lie_element(3, 1)) {
        let ab = a.bracket(&b).unwrap();
        prop_assert_eq!(&ab, &b.bracket(&a).unwrap().scale(&BigInt::from(-1)));
        let j1 = a.bracket(&b.bracket(&c).unwrap()).unwrap();
        let j2 = b.bracket(&c.bracket(&a).unwrap()).unwrap();
        let j3 = c.bracket(&a.bracket(&b).unwrap()).unwrap();
        prop_assert!(j1.add(&j2).unwrap().add(&j3).unwrap().is_zero());
        prop_assert_eq!(LieElement::decompose(&ab.embed(), 3).unwrap(), ab);
    }

    #[test]
    fn restricted_lower_central_series(u in word(3, 5), v in word(3, 5), p in prop_oneof![Just(2u32), Just(3)]) {
        let cap = 7;
        let du = gamma_p_degree(&u, p, cap).unwrap().lower_bound();
        let dv = gamma_p_degree(&v, p, cap).unwrap().lower_bound();
        let dc = gamma_p_degree(&Word::commutator(&u, &v).unwrap(), p, cap).unwrap().lower_bound();
        prop_assert!(dc >= (du + dv).min(cap + 1));
        let dp = gamma_p_degree(&u.pow(p as i64), p, cap).unwrap().lower_bound();
        prop_assert!(dp >= (p as usize * du).min(cap + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn johnson_is_a_lie_morphism(seed in any::<u64>()) {
        let pool = ia_pool(3);
        let mut r = rng(seed);
        let len = r.random_range(1..=2);
        let f = random_product(&mut r, &pool, len);
        let len = r.random_range(1..=2);
        let g = random_product(&mut r, &pool, len);
        let tf = johnson(&GradedAutClass::from_automorphism(&f, 1).unwrap()).unwrap();
        let tg = johnson(&GradedAutClass::from_automorphism(&g, 1).unwrap()).unwrap();
        let c = Automorphism::commutator(&f, &g).unwrap();
        let tc = johnson(&GradedAutClass::from_automorphism(&c, 2).unwrap()).unwrap();
        prop_assert_eq!(tc, Derivation::bracket(&tf, &tg).unwrap());
        let tfg = johnson(&GradedAutClass::from_automorphism(&Automorphism::compose(&f, &g).unwrap(), 1).unwrap()).unwrap();
        prop_assert_eq!(tfg, tf.add(&tg).unwrap());
    }

    #[test]
    fn strong_centrality(seed in any::<u64>()) {
        let pool = ia_pool(3);
        let mut r = rng(seed);
        let f = random_product(&mut r, &pool, 2);
        let g = Automorphism::commutator(&random_product(&mut r, &pool, 1), &random_product(&mut r, &pool, 1)).unwrap();
        let cap = 5;
        let df = andreadakis_depth(&f.forward, cap).lower_bound();
        let dg = andreadakis_depth(&g.forward, cap).lower_bound();
        let c = Automorphism::commutator(&f, &g).unwrap();
        prop_assert!(andreadakis_depth(&c.forward, cap).lower_bound() >= (df + dg).min(cap));
    }

    #[test]
    fn trace_depends_only_on_the_class(seed in any::<u64>()) {
        let pool = ia_pool(3);
        let mut r = rng(seed);
        // Nested commutators of longer products have very long images.
        let f = Automorphism::commutator(&random_product(&mut r, &pool, 1), &random_product(&mut r, &pool, 1)).unwrap();
        let deep = Automorphism::commutator(&random_product(&mut r, &pool, 1), &f).unwrap();
        let g = Automorphism::compose(&f, &deep).unwrap();
        let cf = GradedAutClass::from_automorphism(&f, 2).unwrap();
        let cg = GradedAutClass::from_automorphism(&g, 2).unwrap();
        prop_assert_eq!(trace_fox(&cf), trace_fox(&cg));
        prop_assert_eq!(trace_fox(&cg), trace_algebraic(&cg).unwrap());
    }

    #[test]
    fn congruence_filtration_is_strongly_central(seed in any::<u64>(), q in prop_oneof![Just(2u64), Just(3), Just(4)]) {
        let mut r = rng(seed);
        let (a, _) = random_shear_product(&mut r, 3, q, 3);
        let (b, _) = random_shear_product(&mut r, 3, q, 3);
        let a = CongruenceMatrix::new(a, q).unwrap();
        let b = CongruenceMatrix::new(b, q).unwrap();
        prop_assume!(a.depth().is_some() && b.depth().is_some());
        prop_assert!(verify_bracket_compat(&a, &b).unwrap().holds());
        prop_assert!(verify_det_tr_square(&a).holds());
        let prod = a.multiply(&b).unwrap();
        prop_assert!(prod.depth().unwrap_or(usize::MAX) >= a.depth().unwrap().min(b.depth().unwrap()));
    }
}
