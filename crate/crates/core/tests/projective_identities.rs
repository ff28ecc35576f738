use num_integer::binomial;
use proptest::prelude::*;
use qtoric::fan::{faces, Cone};
use qtoric::grassmann::grassmannian_algebra;
use qtoric::projective::*;
use qtoric::{Phase, PhaseExp};

#[test]
fn free_dimensions() {
    assert_eq!(projective_space(2).graded_dimension(2), 6);
    assert_eq!(projective_space(3).graded_dimension(0), 1);
    for n in 1..=4 {
        let a = projective_space(n);
        assert!(a.is_skew());
        for k in 0..=10 {
            assert_eq!(a.graded_dimension(k), binomial(n + k, n), "n={} k={}", n, k);
            assert_eq!(a.monomials(k).len(), binomial(n + k, n));
        }
    }
}

#[test]
fn dimensions_in_the_tensor_algebra() {
    for n in 1..=3 {
        let a = projective_space(n);
        let d = a.koszul_dual();
        let rels = quadratic_relations(&a);
        let drels = d.relations();
        for k in 0..=4.min(n + 2) {
            assert_eq!(tensor_quotient_dimension(n + 1, n, &rels, k).unwrap(), binomial(n + k, n), "A n={} k={}", n, k);
            assert_eq!(
                tensor_quotient_dimension(n + 1, n, &drels, k).unwrap(),
                binomial(n + 1, k),
                "A! n={} k={}",
                n,
                k
            );
        }
    }
    assert!(tensor_quotient_dimension(5, 4, &[], 6).is_err());
}

#[test]
fn koszul_dual_dimensions_and_series() {
    let d = projective_space(2).koszul_dual();
    assert_eq!(d.series(4), vec![1, 3, 3, 1, 0]);
    assert!(d.product(&[1], &[1]).is_none());
    for n in 1..=4 {
        let a = projective_space(n);
        let d = a.koszul_dual();
        for k in 0..=10 {
            assert_eq!(d.dimension(k), if k <= n + 1 { binomial(n + 1, k) } else { 0 });
        }
        assert!(series_product_is_one(&a.hilbert_series(10), &d.series(10)), "n={}", n);
        let mut bad = d.series(10);
        bad[2] += 1;
        assert!(!series_product_is_one(&a.hilbert_series(10), &bad));
    }
}

#[test]
fn koszul_relations_are_the_annihilator() {
    for n in 1..=4 {
        let a = projective_space(n);
        assert!(annihilator_check(&a, &a.koszul_dual()), "n={}", n);
    }
    // the same relations fail against the unreversed pairing as soon as a phase is nontrivial
    let a = projective_space(2);
    let straight = |xi: &QuadTensor, r: &QuadTensor| {
        let mut s = Phase::from_ratio(0, 1);
        for ((p, q), c) in xi {
            for ((x, y), e) in r {
                if p == x && q == y {
                    s = s + c * e;
                }
            }
        }
        s
    };
    let rels = quadratic_relations(&a);
    let bad =
        a.koszul_dual().relations().iter().any(|x| rels.iter().any(|r| !num_traits::Zero::is_zero(&straight(x, r))));
    assert!(bad);
}

#[test]
fn koszul_sign_rule() {
    let d = projective_space(2).koszul_dual();
    // v2 v1 = −q12^-2 v1 v2
    let (s, e, w) = d.product(&[1], &[0]).unwrap();
    assert_eq!((s, e, w), (-1, PhaseExp::q_pow(1, 2, -2), vec![0, 1]));
    let (s, e, _) = d.product(&[2], &[0]).unwrap();
    assert_eq!((s, e.is_one()), (-1, true));
    assert_eq!(d.presentation().relations.len(), 6);
}

#[test]
fn frobenius_pairing() {
    let seeds = [1, 2, 3, 4, 5];
    let d2 = projective_space(2).koszul_dual();
    let r = frobenius_pairing_rank(&d2, 0, &seeds).unwrap();
    assert_eq!((r.size, r.numeric_ranks[0]), (1, 1));
    let r = frobenius_pairing_rank(&d2, 1, &seeds).unwrap();
    assert_eq!(r.numeric_ranks, vec![3; 5]);
    assert_eq!(r.symbolic_nonzero, Some(true));
    let d3 = projective_space(3).koszul_dual();
    let r = frobenius_pairing_rank(&d3, 2, &seeds).unwrap();
    assert_eq!(r.numeric_ranks, vec![6; 5]);
    assert_eq!(r.symbolic_nonzero, None);
    for n in 1..=3 {
        let d = projective_space(n).koszul_dual();
        for k in 0..=n + 1 {
            let r = frobenius_pairing_rank(&d, k, &seeds).unwrap();
            assert!(r.full() && r.min_singular > 1e-6, "n={} k={}", n, k);
            assert_eq!(r.size, binomial(n + 1, k));
        }
    }
    assert!(frobenius_pairing_rank(&d2, 4, &seeds).is_err());
    assert!(frobenius_pairing_rank(&projective_space(4).koszul_dual(), 1, &seeds).is_err());
}

#[test]
fn localization_at_the_central_generator() {
    for n in 1..=3 {
        let a = projective_space(n);
        let loc = a.localize_degree0(n).unwrap();
        for k in 0..n {
            for l in (k + 1)..n {
                assert_eq!(loc.commutation_exp(k, l), PhaseExp::q_pow(k + 1, l + 1, 2));
            }
        }
    }
    let one = projective_space(1);
    let loc = one.localize_degree0(0).unwrap();
    assert_eq!(loc.others(), vec![1]);
    assert!(loc.presentation().commutation.is_empty());
    assert!(one.localize_degree0(2).is_err());
}

#[test]
fn localization_matches_affine_chart_relations() {
    // n=2, localize at w1: x2 = t2/t1 ↦ y2, x1 = 1/t1 ↦ y3, and x2 x1 = q12² x1 x2
    let a = projective_space(2);
    let loc = a.localize_degree0(0).unwrap();
    assert_eq!(loc.commutation_exp(1, 2), PhaseExp::q_pow(1, 2, 2));
    assert_eq!(loc.weight(1), vec![-1, 1]);
    assert_eq!(loc.weight(2), vec![-1, 0]);
    assert_eq!(loc.presentation().generators, vec!["y2", "y3"]);
}

#[test]
fn quadratic_chart_phase_erratum() {
    // x_i = t_i/t_k, x_j = t_j/t_k: the ratio is q_ij² q_ki² q_jk², not q_ij² q_ik² q_jk²
    let a = projective_space(3);
    let loc = a.localize_degree0(0).unwrap();
    let got = loc.commutation_exp(1, 2);
    let right = PhaseExp::q_pow(2, 3, 2).mul(&PhaseExp::q_pow(1, 2, 2)).mul(&PhaseExp::q_pow(3, 1, 2));
    let printed = PhaseExp::q_pow(2, 3, 2).mul(&PhaseExp::q_pow(2, 1, 2)).mul(&PhaseExp::q_pow(3, 1, 2));
    assert_eq!(got, right);
    assert_ne!(got, printed);
}

#[test]
fn ore_condition_holds() {
    let a = projective_space(3);
    for i in 0..4 {
        let loc = a.localize_degree0(i).unwrap();
        for mono in a.monomials(2) {
            for d in 0..3u32 {
                let (sd, ph, at) = loc.ore_data(d, &mono);
                let mut s = vec![0u32; 4];
                s[i] = d;
                let mut st = vec![0u32; 4];
                st[i] = sd;
                let lhs = a.mul(&a.monomial(at), &a.monomial(s));
                let rhs = a.mul(&a.monomial(st), &a.monomial(mono.clone()));
                let lhs: Vec<_> = lhs.into_iter().map(|(m, c)| (m, c.mul_exp(&ph))).collect();
                assert_eq!(lhs, rhs.into_iter().collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn chart_isomorphisms() {
    for n in 1..=3 {
        let report = chart_iso_check(n).unwrap();
        assert_eq!(report.len(), 4 * (n + 1));
        for c in &report {
            assert!(c.passed, "n={} {} {:?}", n, c.name, c.witness);
        }
    }
    assert!(chart_iso_check(4).is_err());
}

#[test]
fn fan_of_projective_space() {
    let cones = projective_fan_cones(2).unwrap();
    assert_eq!(cones.len(), 3);
    assert_eq!(cones[0].rays(), &[vec![0, 1], vec![-1, -1]]);
    assert_eq!(cones[2].rays(), &[vec![1, 0], vec![0, 1]]);
}

fn cone(n: usize, rays: &[&[i64]]) -> Cone {
    Cone::new(n, rays.iter().map(|r| r.to_vec()).collect()).unwrap()
}

#[test]
fn face_ideals() {
    let sigma = cone(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let zero = monomial_ideal(&sigma, &Cone::zero(3)).unwrap();
    assert!(zero.is_zero_in_box(4));
    assert!(is_prime_monomial(&zero, 4));

    // τ = cone(e1, e2) gives ⟨t1, t2⟩
    let tau = cone(3, &[&[1, 0, 0], &[0, 1, 0]]);
    let i = monomial_ideal(&sigma, &tau).unwrap();
    let g = generated_ideal(&sigma, vec![vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
    for m in i.box_points(4) {
        assert_eq!(i.contains(&m), g.contains(&m), "{:?}", m);
    }
    assert!(is_prime_monomial(&i, 4));

    let whole = monomial_ideal(&sigma, &sigma).unwrap();
    assert!(!whole.contains(&[0, 0, 0]));
    assert!(whole.contains(&[0, 0, 1]));

    for s in [sigma.clone(), cone(2, &[&[0, 1], &[2, -1]]), cone(2, &[&[1, 0], &[1, 2]])] {
        for t in faces(&s) {
            let id = monomial_ideal(&s, &t).unwrap();
            assert_eq!(id.ideal_violation(5).unwrap(), None);
            assert!(is_prime_monomial(&id, 5), "{:?} {:?}", s, t);
        }
    }
}

#[test]
fn non_prime_and_errors() {
    let sigma = cone(2, &[&[1, 0], &[0, 1]]);
    let sq = generated_ideal(&sigma, vec![vec![2, 0]]).unwrap();
    assert_eq!(sq.ideal_violation(6).unwrap(), None);
    let (x, y) = sq.primality_witness(6).unwrap();
    assert!(!sq.contains(&x) && !sq.contains(&y));
    assert_eq!(x.iter().zip(&y).map(|(a, b)| a + b).collect::<Vec<_>>()[0] >= 2, true);
    assert!(!is_prime_monomial(&sq, 6));
    assert!(monomial_ideal(&sigma, &cone(2, &[&[1, 1]])).is_err());
    assert!(generated_ideal(&sigma, vec![vec![-1, 0]]).is_err());
}

#[test]
fn quotient_varieties() {
    let a = projective_space(3);
    let same = quotient_variety(&a, vec![]).unwrap();
    assert_eq!(same.graded_dimension(3), a.graded_dimension(3));
    let cut = quotient_variety(&a, vec![a.generator(3)]).unwrap();
    for k in 0..=4 {
        assert_eq!(cut.graded_dimension(k), binomial(2 + k, 2));
    }
    let mut mixed = a.generator(0);
    mixed.extend(a.word(&[1, 2]));
    assert_eq!(quotient_variety(&a, vec![mixed]).unwrap_err(), ProjectiveError::Inhomogeneous(0));
    let mut unweighted = a.generator(0);
    unweighted.extend(a.generator(1));
    assert_eq!(quotient_variety(&a, vec![unweighted]).unwrap_err(), ProjectiveError::NotWeightHomogeneous(0));
}

#[test]
fn grassmannian_inside_projective_space() {
    let gr = grassmannian_algebra(2, 4).unwrap();
    let q = pluecker_embedding(&gr).unwrap();
    assert_eq!(q.len(), 6);
    assert_eq!(q.relations.len(), 1);
    assert!(q.is_skew());
    for k in 0..=4 {
        assert_eq!(q.graded_dimension(k), binomial(5 + k, 5) - binomial(3 + k, 5), "k={}", k);
    }
    let p = q.presentation();
    assert_eq!(p.relations.len(), 1);
    assert_eq!(p.commutation.len(), 15);
}

#[test]
fn presentation_of_projective_plane() {
    let p = projective_space(2).presentation();
    assert_eq!(p.generators, vec!["w1", "w2", "w3"]);
    assert_eq!(p.commutation[0].phase, PhaseExp::q_pow(1, 2, 2));
    assert!(p.commutation[1].phase.is_one() && p.commutation[2].phase.is_one());
}

#[test]
fn ore_and_star_routes_agree() {
    for n in 1..=4 {
        let a = projective_space(n);
        for i in 0..=n {
            let loc = a.localize_degree0(i).unwrap();
            for k in loc.others() {
                for l in loc.others() {
                    let mut p = vec![0i64; n + 1];
                    let mut q = vec![0i64; n + 1];
                    p[k] += 1;
                    p[i] -= 1;
                    q[l] += 1;
                    q[i] -= 1;
                    assert_eq!(loc.commutation_exp(k, l), embedded_star_commutation(&p, &q, n));
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn fractions_associate(n in 3usize..=3, i in 0usize..4, ws in proptest::collection::vec((0u32..3, 0usize..4), 3)) {
        let a = projective_space(n);
        let loc = a.localize_degree0(i).unwrap();
        let f: Vec<Fraction> = ws.iter().map(|(d, k)| {
            let mut mono = vec![0u32; n + 1];
            mono[*k] = 1;
            Fraction { phase: PhaseExp::one(), denom: *d, mono }
        }).collect();
        let l = loc.mul(&loc.mul(&f[0], &f[1]), &f[2]);
        let r = loc.mul(&f[0], &loc.mul(&f[1], &f[2]));
        prop_assert_eq!(l, r);
    }
}
