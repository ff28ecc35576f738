use itertools::Itertools;
use num_complex::Complex;
use proptest::prelude::*;
use qtoric::grassmann::*;
use qtoric::qmatrix::{QMatrixContext, QMonomial, QPolynomial};
use qtoric::scalars::q_coeff_exp;
use qtoric::{Numeric, Phase, PhaseExp, Rational, Symbolic, ThetaSpec};

type Ctx = QMatrixContext<Symbolic<Rational>>;

fn ctx(n: usize) -> Ctx {
    QMatrixContext::new(Symbolic::new(n))
}

fn subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
    (1..=n).combinations(d).collect()
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k).map(|_| 1..=n).multi_cartesian_product().collect()
}

fn rows(d: usize) -> Vec<usize> {
    (1..=d).collect()
}

fn plucker_vanishes(d: usize, n: usize) {
    let c = ctx(n);
    for i in subsets(n, d + 1) {
        for j in tuples(n, d - 1) {
            let r = pluecker_relation(&c, &i, &j).unwrap();
            assert!(r.is_empty(), "I={:?} J={:?}: {}", i, j, r);
        }
    }
}

#[test]
fn plucker_gr24() {
    plucker_vanishes(2, 4);
}

#[test]
fn plucker_gr25() {
    plucker_vanishes(2, 5);
}

#[test]
fn plucker_gr35() {
    plucker_vanishes(3, 5);
}

#[test]
fn plucker_unordered_i() {
    let c = ctx(4);
    for i in tuples(4, 3) {
        for j in 1..=4 {
            assert!(pluecker_relation(&c, &i, &[j]).unwrap().is_empty(), "I={:?} J={}", i, j);
        }
    }
}

#[test]
fn plucker_d1_is_a_commutation() {
    let c = ctx(3);
    let r = pluecker_terms(&[1, 2], &[]).unwrap();
    assert_eq!(r.terms.len(), 2);
    // g_12 g_11 q_12 − g_11 g_12 q_21 = 0
    let lhs = c.mul(&c.generator(1, 2).unwrap(), &c.generator(1, 1).unwrap()).scale(&Phase::q(1, 2));
    let rhs = c.mul(&c.generator(1, 1).unwrap(), &c.generator(1, 2).unwrap()).scale(&Phase::q(2, 1));
    assert!(lhs.sub(&rhs).is_empty());
    assert!(pluecker_relation(&c, &[1, 2], &[]).unwrap().is_empty());
}

#[test]
fn plucker_repeated_indices_vanish_termwise() {
    let r = pluecker_terms(&[1, 1, 1], &[2]).unwrap();
    assert!(r.terms.iter().all(|t| !t.survives()));
    assert_eq!(classify_relation(&r), RelationClass::Trivial);
}

#[test]
fn bad_lengths() {
    assert!(pluecker_terms(&[1, 2, 3], &[]).is_err());
    assert!(young_terms(&[1, 2], &[1, 2], 1, 2).is_err());
    assert!(young_terms(&[1, 2, 3], &[1, 2], 2, 2).is_err());
    assert!(theta_capital_exp(&[1, 2], &[3]).is_err());
}

#[test]
fn young_for_partitions_of_4() {
    let c = ctx(4);
    let mut count = 0;
    for gamma in [vec![1, 3], vec![3, 1], vec![2, 2], vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1], vec![1, 1, 1, 1]] {
        let sizes = flag_sizes(&gamma, 4).unwrap();
        for &d in &sizes {
            for &d2 in sizes.iter().filter(|x| **x <= d) {
                for i in subsets(4, d + 1) {
                    for j in tuples(4, d2 - 1) {
                        let r = young_relation(&c, &i, &j, d, d2).unwrap();
                        assert!(r.is_empty(), "d={} d'={} I={:?} J={:?}", d, d2, i, j);
                        count += 1;
                    }
                }
            }
        }
    }
    assert!(count > 100);
}

#[test]
fn young_examples() {
    let c = ctx(4);
    assert!(young_relation(&c, &[1, 2, 3], &[], 2, 1).unwrap().is_empty());
    for i in subsets(4, 4) {
        for j in tuples(4, 1) {
            assert!(young_relation(&c, &i, &j, 3, 2).unwrap().is_empty());
        }
    }
    assert_eq!(young_terms(&[1, 2, 3], &[4], 2, 2).unwrap(), pluecker_terms(&[1, 2, 3], &[4]).unwrap());
}

#[test]
fn young_numeric() {
    let theta = ThetaSpec::random(4, 11);
    let c = QMatrixContext::new(Numeric::new(theta).unwrap());
    let r = young_relation(&c, &[1, 2, 4], &[], 2, 1).unwrap();
    assert!(r.max_magnitude() < 1e-12);
    let r = young_relation(&c, &[1, 2, 3, 4], &[2], 3, 2).unwrap();
    assert!(r.max_magnitude() < 1e-12);
}

#[test]
fn classification_at_gr24() {
    let mut seen = std::collections::BTreeMap::new();
    for i in tuples(4, 3) {
        for j in tuples(4, 1) {
            let r = young_terms(&i, &j, 2, 2).unwrap();
            let class = classify_relation(&r);
            *seen.entry(class.name()).or_insert(0usize) += 1;
            if class == RelationClass::Structure {
                let live: Vec<_> = r.terms.iter().filter(|t| t.survives()).collect();
                assert_eq!(live.len(), 2);
                for t in &live {
                    assert_eq!(t.left.len(), t.right.len());
                    let a: std::collections::BTreeSet<_> = t.left.iter().collect();
                    let b: std::collections::BTreeSet<_> = t.right.iter().collect();
                    assert_eq!(a.intersection(&b).count(), 1, "I={:?} J={:?}", i, j);
                }
            }
        }
    }
    assert_eq!(seen.len(), 4, "{:?}", seen);
}

#[test]
fn classification_examples() {
    assert_eq!(classify_relation(&young_terms(&[1, 2, 3], &[4], 2, 2).unwrap()), RelationClass::Pluecker);
    assert_eq!(classify_relation(&young_terms(&[1, 2, 3], &[4], 2, 2).unwrap()).name(), "pluecker");
    // I=(1,2,3), J=(1): Λ^{23}Λ^{11} dies, Λ^{13}Λ^{21} and Λ^{12}Λ^{31} swap
    assert_eq!(classify_relation(&young_terms(&[1, 2, 3], &[1], 2, 2).unwrap()), RelationClass::Structure);
    // I=(1,2,1), J=(3): Λ^{21}Λ^{13}, Λ^{12}Λ^{13}
    assert_eq!(classify_relation(&young_terms(&[1, 2, 1], &[3], 2, 2).unwrap()), RelationClass::Alternating);
    assert_eq!(classify_relation(&young_terms(&[1, 2, 3], &[4], 2, 2).unwrap()), RelationClass::Pluecker);
    let r = young_terms(&[1, 2, 3], &[4], 2, 2).unwrap();
    assert_eq!(r.terms.iter().filter(|t| t.survives()).count(), 3);
    let r5 = young_terms(&[1, 2, 3], &[5], 2, 2).unwrap();
    assert_eq!(classify_relation(&r5), RelationClass::Pluecker);
}

#[test]
fn theta_capital_values() {
    assert!(theta_capital_exp(&[1, 3], &[1, 3]).unwrap().is_one());
    let e = theta_capital_exp(&[1, 2], &[3, 4]).unwrap();
    let want = PhaseExp::q(1, 3).mul(&PhaseExp::q(1, 4)).mul(&PhaseExp::q(2, 3)).mul(&PhaseExp::q(2, 4));
    assert_eq!(e, want);
    let theta = ThetaSpec::random(4, 3);
    let v = theta_capital_value(&theta, &[1, 2], &[3, 4]).unwrap();
    let w = theta.value(1, 3).unwrap()
        + theta.value(1, 4).unwrap()
        + theta.value(2, 3).unwrap()
        + theta.value(2, 4).unwrap();
    assert!((v - w).norm() < 1e-14);
}

#[test]
fn theta_squared_is_minor_commutation() {
    assert!(theta_matches_commutation(2, 4));
    assert!(theta_matches_commutation(1, 3));
    assert!(theta_matches_commutation(2, 5));
    // and both agree with the actual product of minors
    let c = ctx(4);
    let gens = subsets(4, 2);
    let mut pairs = 0;
    for a in &gens {
        for b in &gens {
            let ma = c.minor(&rows(2), a).unwrap();
            let mb = c.minor(&rows(2), b).unwrap();
            let ph = c.phase(&theta_capital_exp(a, b).unwrap().pow(2));
            assert!(c.mul(&ma, &mb).sub(&c.mul(&mb, &ma).scale(&ph)).is_empty(), "{:?} {:?}", a, b);
            pairs += 1;
        }
    }
    assert_eq!(pairs, 36);
}

#[test]
fn cross_size_commutation_matches_products() {
    let pc = PlueckerContext::flag(&[1, 1, 2], 4).unwrap();
    let c = ctx(4);
    for a in 0..pc.generators.len() {
        for b in 0..pc.generators.len() {
            let ja = &pc.generators[a];
            let jb = &pc.generators[b];
            let ma = c.minor(&rows(ja.len()), ja).unwrap();
            let mb = c.minor(&rows(jb.len()), jb).unwrap();
            let ph = c.phase(&pc.commutation_exp(a, b));
            assert!(c.mul(&ma, &mb).sub(&c.mul(&mb, &ma).scale(&ph)).is_empty(), "{:?} {:?}", ja, jb);
        }
    }
}

#[test]
fn embedding_round_trip() {
    for seed in 0..5 {
        let theta = ThetaSpec::random(4, seed);
        let big = theta_capital_matrix(&theta, 2).unwrap();
        let Embedding::Compatible(sol) = embedding_compatible(&big, 2, 4).unwrap() else {
            panic!("seed {}", seed);
        };
        let again = theta_capital_matrix(&sol, 2).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        for (r1, r2) in big.iter().zip(&again) {
            for (x, y) in r1.iter().zip(r2) {
                let dre = (x.re - y.re) / two_pi;
                assert!((dre - dre.round()).abs() < 1e-9 && (x.im - y.im).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn embedding_zero_and_inconsistent() {
    let zero = vec![vec![Complex::new(0.0, 0.0); 6]; 6];
    let Embedding::Compatible(sol) = embedding_compatible(&zero, 2, 4).unwrap() else { panic!() };
    for i in 1..=4 {
        for j in 1..=4 {
            assert!(sol.value(i, j).unwrap().norm() < 1e-12);
        }
    }
    let theta = ThetaSpec::random(4, 9);
    let mut big = theta_capital_matrix(&theta, 2).unwrap();
    big[0][1] += Complex::new(0.3, 0.0);
    big[1][0] -= Complex::new(0.3, 0.0);
    match embedding_compatible(&big, 2, 4).unwrap() {
        Embedding::Incompatible { residual, .. } => assert!(residual > 1e-3),
        Embedding::Compatible(_) => panic!("perturbed Θ accepted"),
    }
    assert!(embedding_compatible(&zero[..3].to_vec(), 2, 4).is_err());
}

#[test]
fn grassmannian_presentations() {
    let g = grassmannian_algebra(2, 4).unwrap();
    assert_eq!(g.presentation.generators.len(), 6);
    assert_eq!(g.relations.len(), 1);
    assert_eq!(g.presentation.relations.len(), 1);

    // with all phases set to 1 the relation is the classical one
    let pc = &g.context;
    let nf = pc.normal_form(&g.relations[0]);
    let mut classical = std::collections::BTreeMap::new();
    for ((a, b), cs) in &nf {
        let s: i64 = cs.iter().map(|(s, _)| s).sum();
        if s != 0 {
            classical.insert((pc.generators[*a].clone(), pc.generators[*b].clone()), s);
        }
    }
    assert_eq!(classical.len(), 3);
    let s0 = classical[&(vec![1, 2], vec![3, 4])];
    assert_eq!(s0.abs(), 1);
    assert_eq!(classical[&(vec![1, 3], vec![2, 4])], -s0);
    assert_eq!(classical[&(vec![1, 4], vec![2, 3])], s0);

    let p = grassmannian_algebra(1, 3).unwrap();
    assert_eq!(p.presentation.generators, vec!["L[1]", "L[2]", "L[3]"]);
    assert!(p.relations.is_empty());
    for cm in &p.presentation.commutation {
        assert_eq!(cm.phase, PhaseExp::q_pow(cm.a + 1, cm.b + 1, 2));
    }
    assert!(grassmannian_algebra(0, 3).is_err());
    assert!(grassmannian_algebra(4, 3).is_err());
}

#[test]
fn flag_presentations() {
    let f = flag_algebra(&[1, 1, 2], 4).unwrap();
    assert_eq!(f.context.sizes, vec![1, 2]);
    assert_eq!(f.presentation.generators.len(), 10);
    assert_eq!(f.truncations.len(), 2);
    assert_eq!(f.truncations[0].omitted, 1);
    assert_eq!(f.truncations[0].generators.len(), 6);
    assert_eq!(f.truncations[1].generators, vec![0, 1, 2, 3]);
    let c = ctx(4);
    assert!(!f.relations.is_empty());
    for r in &f.relations {
        assert!(expand(&c, r).unwrap().is_empty());
    }
    let full = flag_algebra(&[1, 1, 1], 3).unwrap();
    assert_eq!(full.context.sizes, vec![1, 2]);
    // one incidence relation Σ ± Λ^i Λ^{jk}
    assert_eq!(full.relations.len(), 1);
    let g = flag_algebra(&[2, 2], 4).unwrap();
    assert_eq!(g.relations.len(), grassmannian_algebra(2, 4).unwrap().relations.len());
    assert!(flag_algebra(&[2, 1], 4).is_err());
    assert!(flag_algebra(&[0, 4], 4).is_err());
    let js = f.to_json();
    assert_eq!(js["sizes"], serde_json::json!([1, 2]));
}

#[test]
fn taut_relations() {
    assert_eq!(taut_section_relations(2, 3).len(), 1);
    assert_eq!(taut_section_relations(1, 4).len(), 6);
    let c = ctx(3);
    for r in taut_section_relations(1, 3) {
        let v = r.evaluate(&c, &|j| Ok(c.minor(&[1], &[j])?)).unwrap();
        assert!(v.is_empty(), "{:?}", r.j);
    }
    let c4 = ctx(4);
    for k in 1..=4 {
        for r in taut_section_relations(2, 4) {
            let v = r.evaluate(&c4, &|j| taut_section_from_minor(&c4, &[k], j)).unwrap();
            assert!(v.is_empty());
            let plain = expand(&c4, &pluecker_terms(&r.j, &[k]).unwrap()).unwrap();
            assert!(plain.is_empty());
        }
    }
    // the identity behind it: the normalized sections give minus the Plücker combination term by term
    let r = &taut_section_relations(2, 4)[0];
    let k = [4];
    let p = pluecker_terms(&r.j, &k).unwrap();
    for (t, pt) in r.terms.iter().zip(&p.terms) {
        let mut e = t.1.clone();
        e.add_q(t.3, k[0], 1);
        assert_eq!((t.0, &e, &t.2), (-pt.sign, &pt.phase, &pt.left));
    }
    // without the normalizing phase the sections are not a solution
    let r = &taut_section_relations(2, 4)[0];
    let literal = r.evaluate(&c4, &|j| Ok(c4.minor(&[1, 2], &[j, 4])?)).unwrap();
    assert!(!literal.is_empty());
}

fn eta_suite(d: usize, n: usize) {
    let c = ctx(n);
    let alg = eta_matrix(&c, d).unwrap();
    let report = eta_checks(&c, &alg);
    for chk in &report {
        assert!(chk.passed, "(d,n)=({},{}) {} {:?}", d, n, chk.name, chk.witness);
    }
    assert!(report.len() >= 15);
}

#[test]
fn eta_12() {
    eta_suite(1, 2);
}

#[test]
fn eta_13() {
    eta_suite(1, 3);
}

#[test]
fn eta_23() {
    eta_suite(2, 3);
}

#[test]
fn eta_24() {
    eta_suite(2, 4);
}

#[test]
fn eta_full_is_identity() {
    let c = ctx(2);
    let alg = eta_matrix(&c, 2).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { QPolynomial::one(2) } else { QPolynomial::zero(2) };
            assert!(c.equals(&alg.eta[i][j], &want));
        }
    }
}

#[test]
fn eta_hat_is_twisted_sum() {
    let c = ctx(3);
    let alg = eta_matrix(&c, 1).unwrap();
    for i in 1..=3 {
        for j in 1..=3 {
            let s = c.mul(&c.antipode_entry(i, 1).unwrap(), &c.generator(1, j).unwrap());
            assert!(c.equals(&s, &alg.eta_hat[i - 1][j - 1]));
        }
    }
}

#[test]
fn eta_diagonal_commutes() {
    let c = ctx(3);
    let alg = eta_matrix(&c, 1).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let a = &alg.eta[i][i];
            let b = &alg.eta[j][j];
            assert!(c.equals(&c.mul(a, b), &c.mul(b, a)));
        }
    }
}

#[test]
fn eta_numeric_matches_symbolic() {
    let theta = ThetaSpec::random(3, 5);
    let num = QMatrixContext::new(Numeric::new(theta.clone()).unwrap());
    let sym = ctx(3);
    let a = eta_matrix(&num, 1).unwrap();
    let b = eta_matrix(&sym, 1).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let diff = a.eta[i][j].sub(&b.eta[i][j].specialize(&theta).unwrap());
            assert!(diff.max_magnitude() < 1e-12);
        }
    }
    for chk in eta_checks(&num, &a) {
        assert!(chk.passed, "{}", chk.name);
    }
}

fn mono(_n: usize, exps: &[u16], det: i32) -> QPolynomial<Phase> {
    QPolynomial::monomial(QMonomial { exps: exps.to_vec(), det }, Phase::one())
}

use num_traits::One;

proptest! {
    #[test]
    fn untwisted_product_is_commutative_and_associative(
        a in proptest::collection::vec(0u16..2, 4), da in -1i32..2,
        b in proptest::collection::vec(0u16..2, 4), db in -1i32..2,
        e in proptest::collection::vec(0u16..2, 4), de in -1i32..2,
    ) {
        let c = ctx(2);
        let (x, y, z) = (mono(2, &a, da), mono(2, &b, db), mono(2, &e, de));
        prop_assert!(c.equals(&c.untwisted_mul(&x, &y), &c.untwisted_mul(&y, &x)));
        let l = c.untwisted_mul(&c.untwisted_mul(&x, &y), &z);
        let r = c.untwisted_mul(&x, &c.untwisted_mul(&y, &z));
        prop_assert!(c.equals(&l, &r));
    }

    #[test]
    fn plucker_random_ordered(i in proptest::collection::vec(1usize..=5, 3), j in 1usize..=5) {
        prop_assert!(pluecker_relation(&ctx(5), &i, &[j]).unwrap().is_empty());
    }
}

#[test]
fn generator_commutation_phase() {
    // sanity check on the phases used above
    let c = ctx(2);
    let g11 = c.generator(1, 1).unwrap();
    let g22 = c.generator(2, 2).unwrap();
    let ph = c.phase(&q_coeff_exp(1, 1, 2, 2).pow(2));
    assert!(c.mul(&g11, &g22).sub(&c.mul(&g22, &g11).scale(&ph)).is_empty());
}
