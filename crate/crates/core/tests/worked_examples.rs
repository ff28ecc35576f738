use std::path::PathBuf;

use qtoric::fixtures::{worked_example, worked_examples, Status};
use qtoric::torus::{star, LaurentElement};
use qtoric::{Complex64, Numeric, ThetaSpec};

fn golden(id: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{id}.txt"));
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn presentations_match_golden_files() {
    for ex in worked_examples() {
        let text = ex.presentation().unwrap().to_text();
        assert_eq!(text, golden(ex.id), "{}", ex.id);
    }
}

#[test]
fn transcription_checks_pass() {
    for ex in worked_examples() {
        for c in ex.checks().unwrap() {
            assert!(c.passed, "{}: {:?}", c.name, c.witness);
        }
    }
}

#[test]
fn erratum_inventory() {
    let mut found = Vec::new();
    for ex in worked_examples() {
        for e in &ex.phases {
            if matches!(e.status, Status::Erratum { .. }) {
                found.push(format!("{}:{}{}", ex.id, ex.names[e.a], ex.names[e.b]));
            }
        }
        for b in &ex.binomials {
            if matches!(b.status, Status::Erratum { .. }) {
                found.push(format!("{}:binomial", ex.id));
            }
        }
    }
    assert_eq!(
        found,
        [
            "cp2-sigma1:x1x2",
            "conifold:zw",
            "conifold:binomial",
            "conifold-resolution-sigma1:yz",
            "conifold-resolution-tau:y1y3",
            "conifold-resolution-tau:y1y4",
            "conifold-resolution-tau:y2y3",
            "conifold-resolution-tau:y2y4",
            "conifold-resolution-tau:y3y4",
        ]
    );
}

// Independent route: multiply the characters numerically and compare
// x_a x_b with (expected phase) x_b x_a.
#[test]
fn expected_phases_hold_numerically() {
    for seed in 0..5u64 {
        for ex in worked_examples() {
            let def = Numeric::new(ThetaSpec::random(ex.n, seed)).unwrap();
            let chi = |p: &Vec<i64>| LaurentElement::<Complex64>::character(p.clone());
            for e in &ex.phases {
                let (ma, mb) = (&ex.generators[e.a], &ex.generators[e.b]);
                let ab = star(&def, &chi(ma), &chi(mb)).unwrap();
                let ba = star(&def, &chi(mb), &chi(ma)).unwrap();
                let ph = e.expected().evaluate(def.theta()).unwrap();
                let (wa, ca) = ab.terms().next().unwrap();
                let (wb, cb) = ba.terms().next().unwrap();
                assert_eq!(wa, wb);
                assert!((ca - ph * cb).norm() < 1e-12, "{} {}{}", ex.id, e.a, e.b);
            }
        }
    }
}

#[test]
fn corrected_generators_replace_a_non_dual_vector() {
    let ex = worked_example("conifold-resolution-tau").unwrap();
    let cone = ex.cone().unwrap();
    for (i, shown) in &ex.generator_errata {
        assert!(
            !qtoric::fan::in_dual(&cone, shown)
                || !qtoric::fan::in_dual(&cone, &shown.iter().map(|x| -x).collect::<Vec<_>>()),
            "{i}"
        );
        assert!(qtoric::fan::in_dual(&cone, &ex.generators[*i]));
    }
}

#[test]
fn stated_cones_differ_from_generator_cones() {
    for ex in worked_examples() {
        if let Some(r) = &ex.stated_rays {
            assert_ne!(&ex.rays, r, "{}", ex.id);
        }
    }
    assert_eq!(worked_examples().len(), 12);
    assert!(worked_example("nonexistent").is_none());
}
