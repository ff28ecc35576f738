//! Named identity suites, numeric cross-checks and their reports.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::fan::{faces, Cone};
use crate::fixtures::worked_examples;
use crate::grassmann::{
    classify_relation, eta_checks, eta_matrix, flag_sizes, pluecker_relation, theta_matches_commutation,
    young_relation, young_terms, RelationClass,
};
use crate::presentation::IdentityCheck;
use crate::projective::{
    annihilator_check, chart_iso_check, frobenius_pairing_rank_at, is_prime_monomial, monomial_ideal,
    projective_fan_cones, projective_space, quadratic_relations, series_product_is_one, tensor_quotient_dimension,
};
use crate::qmatrix::{det_centrality_condition, QMatrixContext, QPolynomial};
use crate::scalars::{Coefficient, Deformation, NUMERIC_TOLERANCE};
use crate::torus::{star, ChartAlgebra, Kaehler, LaurentElement};
use crate::{Complex64, Numeric, Phase, PhaseExp, Rational, Symbolic, ThetaSpec};

pub const SCHEMA: &str = "qtoric-report/1";

pub const SUITES: [&str; 14] = [
    "star-assoc",
    "det",
    "laplace",
    "minors",
    "pluecker",
    "young",
    "classify",
    "chart-iso",
    "hilbert",
    "koszul",
    "eta",
    "ideals",
    "kaehler",
    "examples",
];

/// Suites whose identities involve θ and can be re-run numerically.
pub const NUMERIC_SUITES: [&str; 11] = [
    "star-assoc",
    "det",
    "laplace",
    "minors",
    "pluecker",
    "young",
    "chart-iso",
    "koszul",
    "eta",
    "kaehler",
    "examples",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("size cap exceeded: {0}")]
    Cap(String),
    #[error("{0}")]
    Input(String),
}

fn input<E: Display>(e: E) -> VerifyError {
    VerifyError::Input(e.to_string())
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub deg: Option<usize>,
    pub box_size: Option<i64>,
    pub trials: Option<usize>,
    /// Numeric θ; suites run symbolically when absent.
    pub theta: Option<ThetaSpec<f64>>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub suite: String,
    pub parameters: BTreeMap<String, Value>,
    pub theta_mode: String,
    pub identities: Vec<IdentityCheck>,
    /// Largest numeric discrepancy, for numeric runs.
    pub max_delta: Option<f64>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|c| c.passed)
    }

    pub fn to_json(&self, timing: bool) -> Value {
        let mut v = json!({
            "schema": SCHEMA,
            "suite": self.suite,
            "parameters": self.parameters,
            "theta_mode": self.theta_mode,
            "status": if self.passed() { "pass" } else { "fail" },
            "identities": self.identities.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        });
        if let Some(d) = self.max_delta {
            v["max_delta"] = json!(d);
        }
        if timing {
            v["elapsed_ms"] = json!(self.elapsed.as_secs_f64() * 1e3);
        }
        v
    }

    pub fn to_text(&self, timing: bool) -> String {
        let params = self.parameters.iter().map(|(k, v)| format!("{}={}", k, v)).join(" ");
        let mut s = format!(
            "{} [{}] {}: {}\n",
            self.suite,
            self.theta_mode,
            params,
            if self.passed() { "pass" } else { "FAIL" }
        );
        for c in &self.identities {
            match (&c.witness, c.passed) {
                (_, true) => s.push_str(&format!("  pass  {}\n", c.name)),
                (Some(w), false) => s.push_str(&format!("  FAIL  {}: {}\n", c.name, w)),
                (None, false) => s.push_str(&format!("  FAIL  {}\n", c.name)),
            }
        }
        if let Some(d) = self.max_delta {
            s.push_str(&format!("  max |delta| = {:e}\n", d));
        }
        if timing {
            s.push_str(&format!("  elapsed {:.3} s\n", self.elapsed.as_secs_f64()));
        }
        s
    }
}

fn subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
    (1..=n).combinations(d).collect()
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (0..k).map(|_| 1..=n).multi_cartesian_product().collect()
}

/// Ordered sums of positive parts equal to `n`.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn cap(ok: bool, what: impl FnOnce() -> String) -> Result<(), VerifyError> {
    if ok {
        Ok(())
    } else {
        Err(VerifyError::Cap(what()))
    }
}

fn check(name: impl AsRef<str>, failures: Vec<String>) -> IdentityCheck {
    IdentityCheck::from_failures(name.as_ref(), failures)
}

fn check_bool(name: impl AsRef<str>, ok: bool, witness: impl FnOnce() -> String) -> IdentityCheck {
    check(name, if ok { Vec::new() } else { vec![witness()] })
}

/// Rank `n` of the suite, taken from θ when one is given.
fn rank(cfg: &RunConfig, default: usize) -> Result<usize, VerifyError> {
    match (&cfg.theta, cfg.n) {
        (Some(t), Some(n)) if t.n() != n => Err(VerifyError::Input(format!("theta has rank {}, --n is {}", t.n(), n))),
        (Some(t), _) => Ok(t.n()),
        (None, Some(n)) => Ok(n),
        (None, None) => Ok(default),
    }
}

macro_rules! with_ctx {
    ($theta:expr, $n:expr, |$c:ident| $body:expr) => {
        match $theta {
            None => {
                let $c = QMatrixContext::new(Symbolic::<Rational>::new($n));
                $body
            }
            Some(t) => {
                let $c = QMatrixContext::new(Numeric::new(t.clone()).map_err(input)?);
                $body
            }
        }
    };
}

pub fn run_suite(suite: &str, cfg: &RunConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut params: BTreeMap<String, Value> = BTreeMap::new();
    let numeric = cfg.theta.as_ref().map(|t| t.is_numeric()).unwrap_or(false);
    let theta = if numeric { cfg.theta.as_ref() } else { None };
    let identities = match suite {
        "star-assoc" => {
            let n = rank(cfg, 3)?;
            let trials = cfg.trials.unwrap_or(100);
            cap((1..=8).contains(&n), || format!("star-assoc needs 1 ≤ n ≤ 8, got {}", n))?;
            cap(trials <= 10_000, || "at most 10000 trials".into())?;
            params.insert("n".into(), json!(n));
            params.insert("trials".into(), json!(trials));
            params.insert("seed".into(), json!(cfg.seed));
            star_assoc_suite(n, trials, cfg.seed, theta)?
        }
        "det" => {
            let n = rank(cfg, 3)?;
            cap((1..=5).contains(&n), || format!("det needs 1 ≤ n ≤ 5, got {}", n))?;
            params.insert("n".into(), json!(n));
            with_ctx!(theta, n, |c| det_suite(&c))
        }
        "laplace" => {
            let n = rank(cfg, 3)?;
            cap((1..=4).contains(&n), || format!("laplace needs 1 ≤ n ≤ 4, got {}", n))?;
            params.insert("n".into(), json!(n));
            with_ctx!(theta, n, |c| laplace_suite(&c))
        }
        "minors" => {
            let n = rank(cfg, 4)?;
            cap((1..=5).contains(&n), || format!("minors needs 1 ≤ n ≤ 5, got {}", n))?;
            params.insert("n".into(), json!(n));
            with_ctx!(theta, n, |c| minors_suite(&c))
        }
        "pluecker" => {
            let n = rank(cfg, 4)?;
            let d = cfg.d.unwrap_or(2);
            cap(d >= 1 && d < n && n <= 6, || format!("pluecker needs 1 ≤ d < n ≤ 6, got d={} n={}", d, n))?;
            params.insert("d".into(), json!(d));
            params.insert("n".into(), json!(n));
            with_ctx!(theta, n, |c| pluecker_suite(&c, d))
        }
        "young" => {
            let n = rank(cfg, 4)?;
            cap((2..=5).contains(&n), || format!("young needs 2 ≤ n ≤ 5, got {}", n))?;
            params.insert("n".into(), json!(n));
            with_ctx!(theta, n, |c| young_suite(&c))
        }
        "classify" => {
            let n = cfg.n.unwrap_or(4);
            let d = cfg.d.unwrap_or(2);
            cap(d >= 1 && d < n && n <= 5, || format!("classify needs 1 ≤ d < n ≤ 5, got d={} n={}", d, n))?;
            params.insert("d".into(), json!(d));
            params.insert("n".into(), json!(n));
            classify_suite(d, n)
        }
        "chart-iso" => {
            let n = cfg.n.unwrap_or(2);
            cap((1..=3).contains(&n), || format!("chart-iso needs 1 ≤ n ≤ 3, got {}", n))?;
            params.insert("n".into(), json!(n));
            chart_iso_check(n).map_err(input)?
        }
        "hilbert" => {
            let n = cfg.n.unwrap_or(3);
            let deg = cfg.deg.unwrap_or(10);
            cap((1..=4).contains(&n) && deg <= 12, || {
                format!("hilbert needs 1 ≤ n ≤ 4 and deg ≤ 12, got n={} deg={}", n, deg)
            })?;
            params.insert("deg".into(), json!(deg));
            params.insert("n".into(), json!(n));
            hilbert_suite(n, deg)?
        }
        "koszul" => {
            let n = cfg.n.unwrap_or(3);
            let deg = cfg.deg.unwrap_or(10);
            cap((1..=4).contains(&n) && deg <= 12, || {
                format!("koszul needs 1 ≤ n ≤ 4 and deg ≤ 12, got n={} deg={}", n, deg)
            })?;
            params.insert("deg".into(), json!(deg));
            params.insert("n".into(), json!(n));
            let thetas: Vec<ThetaSpec<f64>> = match theta {
                Some(t) if t.n() == n => vec![t.clone()],
                Some(t) => return Err(VerifyError::Input(format!("theta has rank {}, --n is {}", t.n(), n))),
                None => (1..=5).map(|s| ThetaSpec::random(n, cfg.seed + s)).collect(),
            };
            koszul_suite(n, deg, &thetas)?
        }
        "eta" => {
            let n = rank(cfg, 4)?;
            let d = cfg.d.unwrap_or(2.min(n.saturating_sub(1)).max(1));
            cap(d >= 1 && d < n && n <= 4, || format!("eta needs 1 ≤ d < n ≤ 4, got d={} n={}", d, n))?;
            params.insert("d".into(), json!(d));
            params.insert("n".into(), json!(n));
            with_ctx!(theta, n, |c| {
                let alg = eta_matrix(&c, d).map_err(input)?;
                eta_checks(&c, &alg)
            })
        }
        "ideals" => {
            let b = cfg.box_size.unwrap_or(8);
            cap((1..=10).contains(&b), || format!("ideals needs 1 ≤ box ≤ 10, got {}", b))?;
            params.insert("box".into(), json!(b));
            ideals_suite(b)?
        }
        "kaehler" => {
            let trials = cfg.trials.unwrap_or(100);
            cap(trials <= 10_000, || "at most 10000 trials".into())?;
            params.insert("trials".into(), json!(trials));
            params.insert("seed".into(), json!(cfg.seed));
            kaehler_suite(trials, cfg.seed, theta)?
        }
        "examples" => examples_suite()?,
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    };
    Ok(VerificationReport {
        suite: suite.to_string(),
        parameters: params,
        theta_mode: if theta.is_some() { "numeric" } else { "symbolic" }.into(),
        identities,
        max_delta: None,
        elapsed: start.elapsed(),
    })
}

fn random_element(n: usize, rng: &mut ChaCha8Rng) -> LaurentElement<Phase> {
    let mut e = LaurentElement::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let mut num = rng.gen_range(-5..=5);
        if num == 0 {
            num = 1;
        }
        let mut ph = PhaseExp::one();
        if n >= 2 {
            let i = rng.gen_range(1..n);
            let j = rng.gen_range(i + 1..=n);
            ph.add_q(i, j, rng.gen_range(-2..=2));
        }
        e.add_term(p, Phase::monomial(Rational::new(num, rng.gen_range(1..=3)), ph));
    }
    e
}

fn specialize_element(
    e: &LaurentElement<Phase>,
    theta: &ThetaSpec<f64>,
) -> Result<LaurentElement<Complex64>, VerifyError> {
    let mut out = LaurentElement::zero(e.n());
    for (p, c) in e.terms() {
        out.add_term(p.clone(), c.specialize(theta).map_err(input)?);
    }
    Ok(out)
}

fn random_triples(n: usize, trials: usize, seed: u64) -> Vec<[LaurentElement<Phase>; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| [random_element(n, &mut rng), random_element(n, &mut rng), random_element(n, &mut rng)])
        .collect()
}

fn assoc_failures<D: Deformation>(
    def: &D,
    triples: &[[LaurentElement<D::Coeff>; 3]],
) -> Result<Vec<String>, VerifyError> {
    let res: Result<Vec<Option<String>>, VerifyError> = triples
        .par_iter()
        .enumerate()
        .map(|(k, [a, b, c])| {
            let l = star(def, &star(def, a, b).map_err(input)?, c).map_err(input)?;
            let r = star(def, a, &star(def, b, c).map_err(input)?).map_err(input)?;
            Ok((!l.equals(&r)).then(|| format!("triple {}", k)))
        })
        .collect();
    Ok(res?.into_iter().flatten().collect())
}

fn star_assoc_suite(
    n: usize,
    trials: usize,
    seed: u64,
    theta: Option<&ThetaSpec<f64>>,
) -> Result<Vec<IdentityCheck>, VerifyError> {
    let triples = random_triples(n, trials, seed);
    let unit_ok = |fails: &mut Vec<String>, k: usize, ok: bool| {
        if !ok {
            fails.push(format!("element {}", k));
        }
    };
    let mut unit = Vec::new();
    let assoc = match theta {
        None => {
            let def = Symbolic::<Rational>::new(n);
            let one = LaurentElement::<Phase>::character(vec![0; n]);
            for (k, [a, _, _]) in triples.iter().enumerate() {
                let ok = star(&def, a, &one).map_err(input)? == *a && star(&def, &one, a).map_err(input)? == *a;
                unit_ok(&mut unit, k, ok);
            }
            assoc_failures(&def, &triples)?
        }
        Some(t) => {
            let def = Numeric::new(t.clone()).map_err(input)?;
            let num: Vec<[LaurentElement<Complex64>; 3]> = triples
                .iter()
                .map(|[a, b, c]| Ok([specialize_element(a, t)?, specialize_element(b, t)?, specialize_element(c, t)?]))
                .collect::<Result<_, VerifyError>>()?;
            let one = LaurentElement::<Complex64>::character(vec![0; n]);
            for (k, [a, _, _]) in num.iter().enumerate() {
                let ok = star(&def, a, &one).map_err(input)?.equals(a);
                unit_ok(&mut unit, k, ok);
            }
            assoc_failures(&def, &num)?
        }
    };
    Ok(vec![check(format!("associativity ({} triples)", trials), assoc), check("unit", unit)])
}

fn det_suite<D: Deformation>(c: &QMatrixContext<D>) -> Vec<IdentityCheck> {
    let n = c.n();
    let mut out = vec![
        check_bool("qdet = leib (rows)", c.equals(c.det(), &c.leib()), || "row Leibniz form differs".into()),
        check_bool("qdet = leib (columns)", c.equals(c.det(), &c.leib_columns()), || {
            "column Leibniz form differs".into()
        }),
    ];
    let perm: Vec<String> = c
        .det_permutability_check()
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|((k, l), _)| format!("g[{},{}]", k, l))
        .collect();
    out.push(check("det permutable", perm));
    if n <= 3 {
        let (adj, anti) = c.adjugate_check().unwrap_or((false, false));
        let (l, r) = c.antipode_check().unwrap_or((false, false));
        out.push(check_bool("adjugate", adj && anti, || "adjugate product differs from det".into()));
        out.push(check_bool("antipode", l && r, || "S(g) g differs from identity".into()));
    }
    out
}

fn laplace_suite<D: Deformation>(c: &QMatrixContext<D>) -> Vec<IdentityCheck> {
    let n = c.n();
    let mut out = Vec::new();
    for d in 1..=n.min(3) {
        let pairs: Vec<(Vec<usize>, Vec<usize>)> = subsets(n, d).into_iter().cartesian_product(subsets(n, d)).collect();
        let fails: Vec<(Vec<String>, Vec<String>)> = pairs
            .par_iter()
            .map(|(rows, cols)| {
                let m = c.minor(rows, cols).expect("indices in range");
                let mut fr = Vec::new();
                let mut fc = Vec::new();
                for k in 1..=d {
                    if !c.equals(&c.laplace_row(rows, cols, k).expect("indices in range"), &m) {
                        fr.push(format!("I={:?} J={:?} k={}", rows, cols, k));
                    }
                    if !c.equals(&c.laplace_col(rows, cols, k).expect("indices in range"), &m) {
                        fc.push(format!("I={:?} J={:?} k={}", rows, cols, k));
                    }
                }
                (fr, fc)
            })
            .collect();
        let (fr, fc): (Vec<_>, Vec<_>) = fails.into_iter().unzip();
        out.push(check(format!("row expansion d={}", d), fr.concat()));
        out.push(check(format!("column expansion d={}", d), fc.concat()));
    }
    out
}

fn minors_suite<D: Deformation>(c: &QMatrixContext<D>) -> Vec<IdentityCheck> {
    let n = c.n();
    let mut out = Vec::new();
    for d in 1..=n.min(2) {
        for d2 in 1..=n.min(2) {
            let a: Vec<(Vec<usize>, Vec<usize>)> = subsets(n, d).into_iter().cartesian_product(subsets(n, d)).collect();
            let b: Vec<(Vec<usize>, Vec<usize>)> =
                subsets(n, d2).into_iter().cartesian_product(subsets(n, d2)).collect();
            let pairs: Vec<_> = a.iter().cartesian_product(b.iter()).collect();
            let fails: Vec<String> = pairs
                .par_iter()
                .filter_map(|((i, j), (i2, j2))| {
                    let ok = c.minor_commutation_check(i, j, i2, j2).unwrap_or(false);
                    (!ok).then(|| format!("({:?},{:?}) ({:?},{:?})", i, j, i2, j2))
                })
                .collect();
            out.push(check(format!("minor commutation d={} d'={}", d, d2), fails));
        }
    }
    if n >= 2 {
        out.push(check_bool("squared phase = 2 x Theta sum", theta_matches_commutation(2, n), || {
            "phase of a grassmannian pair differs from the Theta sum".into()
        }));
    }
    out
}

fn pluecker_suite<D: Deformation>(c: &QMatrixContext<D>, d: usize) -> Vec<IdentityCheck> {
    let n = c.n();
    let cases: Vec<(Vec<usize>, Vec<usize>)> =
        subsets(n, d + 1).into_iter().cartesian_product(tuples(n, d - 1)).collect();
    let fails: Vec<String> = cases
        .par_iter()
        .filter_map(|(i, j)| {
            let r = pluecker_relation(c, i, j).expect("sizes checked");
            (r.max_magnitude() > D::Coeff::tolerance()).then(|| format!("I={:?} J={:?}", i, j))
        })
        .collect();
    vec![check(format!("Pluecker relations vanish ({} cases)", cases.len()), fails)]
}

fn young_suite<D: Deformation>(c: &QMatrixContext<D>) -> Vec<IdentityCheck> {
    let n = c.n();
    let mut out = Vec::new();
    for gamma in compositions(n).into_iter().filter(|g| g.len() >= 2) {
        let sizes = flag_sizes(&gamma, n).expect("composition of n");
        let mut cases = Vec::new();
        for &d in &sizes {
            for &d2 in sizes.iter().filter(|x| **x <= d) {
                for i in subsets(n, d + 1) {
                    for j in tuples(n, d2 - 1) {
                        cases.push((d, d2, i.clone(), j));
                    }
                }
            }
        }
        let fails: Vec<String> = cases
            .par_iter()
            .filter_map(|(d, d2, i, j)| {
                let r = young_relation(c, i, j, *d, *d2).expect("sizes checked");
                (r.max_magnitude() > D::Coeff::tolerance()).then(|| format!("d={} d'={} I={:?} J={:?}", d, d2, i, j))
            })
            .collect();
        out.push(check(format!("Young relations vanish gamma={:?}", gamma), fails));
    }
    out
}

fn classify_suite(d: usize, n: usize) -> Vec<IdentityCheck> {
    let mut seen = BTreeMap::new();
    let mut shape = Vec::new();
    for i in tuples(n, d + 1) {
        for j in tuples(n, d - 1) {
            let r = young_terms(&i, &j, d, d).expect("sizes match");
            let class = classify_relation(&r);
            *seen.entry(class.name()).or_insert(0usize) += 1;
            if class == RelationClass::Structure {
                let live: Vec<_> = r.terms.iter().filter(|t| t.survives()).collect();
                let ok = live.len() == 2
                    && live.iter().all(|t| {
                        let a: std::collections::BTreeSet<_> = t.left.iter().collect();
                        let b: std::collections::BTreeSet<_> = t.right.iter().collect();
                        t.left.len() == t.right.len() && a.intersection(&b).count() + 1 == t.left.len()
                    });
                if !ok {
                    shape.push(format!("I={:?} J={:?}", i, j));
                }
            }
        }
    }
    let counts = seen.iter().map(|(k, v)| format!("{}={}", k, v)).join(", ");
    vec![
        check_bool("every relation class occurs", seen.len() == 4, || counts.clone()),
        check("structure relations are same-size, one index different", shape),
    ]
}

fn hilbert_suite(n: usize, deg: usize) -> Result<Vec<IdentityCheck>, VerifyError> {
    let a = projective_space(n);
    let mut graded = Vec::new();
    for k in 0..=deg {
        let want = binomial(n + k, n);
        let got = a.graded_dimension(k);
        if got != want || a.free_dimension(k) as usize != want {
            graded.push(format!("k={}: {} vs C({},{})={}", k, got, n + k, n, want));
        }
    }
    let rels = quadratic_relations(&a);
    let mut tensor = Vec::new();
    for k in 0..=4.min(n + 2) {
        let got = tensor_quotient_dimension(n + 1, n, &rels, k).map_err(input)?;
        if got != binomial(n + k, n) {
            tensor.push(format!("k={}: {}", k, got));
        }
    }
    Ok(vec![check(format!("dim A_k = C(n+k,n), k <= {}", deg), graded), check("tensor algebra modulo R", tensor)])
}

fn koszul_suite(n: usize, deg: usize, thetas: &[ThetaSpec<f64>]) -> Result<Vec<IdentityCheck>, VerifyError> {
    let a = projective_space(n);
    let dual = a.koszul_dual();
    let mut dims = Vec::new();
    for k in 0..=deg {
        let want = if k <= n + 1 { binomial(n + 1, k) } else { 0 };
        if dual.dimension(k) != want {
            dims.push(format!("k={}: {}", k, dual.dimension(k)));
        }
    }
    let drels = dual.relations();
    let mut tensor = Vec::new();
    for k in 0..=4.min(n + 2) {
        let got = tensor_quotient_dimension(n + 1, n, &drels, k).map_err(input)?;
        if got != binomial(n + 1, k) {
            tensor.push(format!("k={}: {}", k, got));
        }
    }
    let h = a.hilbert_series(deg);
    let hd = dual.series(deg);
    let mut out = vec![
        check(format!("dim A!_k = C(n+1,k), k <= {}", deg), dims),
        check("tensor algebra modulo the annihilator", tensor),
        check_bool("annihilator of the relations", annihilator_check(&a, &dual), || "pairing does not vanish".into()),
        check_bool("H_A(s) H_A!(-s) = 1", series_product_is_one(&h, &hd), || format!("{:?} {:?}", h, hd)),
    ];
    if n <= 3 {
        let mut fails = Vec::new();
        for k in 0..=n + 1 {
            let r = frobenius_pairing_rank_at(&dual, k, thetas).map_err(input)?;
            if !r.full() || r.min_singular <= 1e-6 {
                fails.push(format!("k={}: ranks {:?} of {}", k, r.numeric_ranks, r.size));
            }
        }
        out.push(check(format!("Frobenius pairing full rank at {} theta", thetas.len()), fails));
    }
    Ok(out)
}

fn ideal_cones() -> Vec<(String, Cone)> {
    let mut out: Vec<(String, Cone)> = Vec::new();
    for ex in worked_examples() {
        if let Ok(c) = ex.cone() {
            out.push((ex.id.to_string(), c));
        }
    }
    out
}

fn ideals_suite(b: i64) -> Result<Vec<IdentityCheck>, VerifyError> {
    let mut out = Vec::new();
    for (id, sigma) in ideal_cones() {
        let b = if sigma.n() >= 3 { b.min(5) } else { b };
        let mut bad = Vec::new();
        for tau in faces(&sigma) {
            let ideal = monomial_ideal(&sigma, &tau).map_err(input)?;
            if let Some(w) = ideal.ideal_violation(b).map_err(input)? {
                bad.push(format!("face {:?}: not an ideal at {:?}", tau.rays(), w));
            } else if !is_prime_monomial(&ideal, b) {
                bad.push(format!("face {:?}: not prime", tau.rays()));
            }
        }
        let zero = monomial_ideal(&sigma, &Cone::zero(sigma.n())).map_err(input)?;
        if !zero.is_zero_in_box(b) {
            bad.push("zero face does not give the zero ideal".into());
        }
        let top = monomial_ideal(&sigma, &sigma).map_err(input)?;
        if top.contains(&vec![0; sigma.n()]) {
            bad.push("the cone itself contains the unit".into());
        }
        out.push(check(format!("{}: face ideals are prime", id), bad));
    }
    Ok(out)
}

fn free_charts() -> Vec<(String, ChartAlgebra)> {
    worked_examples()
        .into_iter()
        .filter_map(|ex| ex.chart().ok().filter(|c| c.is_free()).map(|c| (ex.id.to_string(), c)))
        .collect()
}

fn kaehler_suite(trials: usize, seed: u64, theta: Option<&ThetaSpec<f64>>) -> Result<Vec<IdentityCheck>, VerifyError> {
    let mut out = Vec::new();
    for (id, chart) in free_charts() {
        let k = Kaehler::new(&chart).map_err(input)?;
        let report = match theta {
            None => crate::torus::verify_leibniz(&Symbolic::<Rational>::new(chart.n()), &k, trials, seed),
            Some(t) if t.n() == chart.n() => {
                crate::torus::verify_leibniz(&Numeric::new(t.clone()).map_err(input)?, &k, trials, seed)
            }
            Some(_) => continue,
        };
        let fails = report.failures.iter().map(|(a, b)| format!("{:?} {:?}", a, b)).collect();
        out.push(check(format!("{}: Leibniz rule", id), fails));
    }
    if out.is_empty() {
        return Err(VerifyError::Input("no chart matches the rank of theta".into()));
    }
    Ok(out)
}

fn examples_suite() -> Result<Vec<IdentityCheck>, VerifyError> {
    let mut out = Vec::new();
    for ex in worked_examples() {
        out.extend(ex.checks().map_err(input)?);
    }
    Ok(out)
}

/// Largest coefficient difference over the union of monomials.
fn poly_delta(a: &QPolynomial<Complex64>, b: &QPolynomial<Complex64>) -> f64 {
    a.terms().chain(b.terms()).map(|(m, _)| (a.coefficient(m) - b.coefficient(m)).norm()).fold(0.0, f64::max)
}

/// Re-runs a suite at numeric θ and compares every symbolic quantity with
/// its numeric counterpart. One θ per seed, or `cfg.theta` alone.
pub fn cross_check(suite: &str, cfg: &RunConfig, seeds: &[u64]) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    if !SUITES.contains(&suite) {
        return Err(VerifyError::UnknownSuite(suite.to_string()));
    }
    if !NUMERIC_SUITES.contains(&suite) {
        return Err(VerifyError::Input(format!("suite {} has no θ-dependent quantities", suite)));
    }
    let thetas_for = |n: usize| -> Result<Vec<ThetaSpec<f64>>, VerifyError> {
        match &cfg.theta {
            Some(t) if !t.is_numeric() => Err(VerifyError::Input("cross-check needs a numeric theta".into())),
            Some(t) if t.n() != n => Err(VerifyError::Input(format!("theta has rank {}, suite needs {}", t.n(), n))),
            Some(t) => Ok(vec![t.clone()]),
            None => Ok(seeds.iter().map(|s| ThetaSpec::random(n, *s)).collect()),
        }
    };
    let mut params: BTreeMap<String, Value> = BTreeMap::new();
    let mut fails: Vec<String> = Vec::new();
    let mut delta: f64 = 0.0;
    let note = |label: String, d: f64, delta: &mut f64, fails: &mut Vec<String>| {
        *delta = delta.max(d);
        if !(d < NUMERIC_TOLERANCE) {
            fails.push(format!("{}: |delta| = {:e}", label, d));
        }
    };
    let n_of = |default: usize| cfg.theta.as_ref().map(|t| t.n()).or(cfg.n).unwrap_or(default);
    match suite {
        "star-assoc" => {
            let n = n_of(3);
            let trials = cfg.trials.unwrap_or(100);
            params.insert("n".into(), json!(n));
            params.insert("trials".into(), json!(trials));
            let triples = random_triples(n, trials, cfg.seed);
            let sym = Symbolic::<Rational>::new(n);
            let exact: Vec<LaurentElement<Phase>> = triples
                .iter()
                .map(|[a, b, c]| star(&sym, &star(&sym, a, b).map_err(input)?, c).map_err(input))
                .collect::<Result<_, _>>()?;
            for (s, t) in thetas_for(n)?.iter().enumerate() {
                let def = Numeric::new(t.clone()).map_err(input)?;
                for (k, ([a, b, c], e)) in triples.iter().zip(&exact).enumerate() {
                    let (a, b, c) = (specialize_element(a, t)?, specialize_element(b, t)?, specialize_element(c, t)?);
                    let l = star(&def, &star(&def, &a, &b).map_err(input)?, &c).map_err(input)?;
                    let r = star(&def, &a, &star(&def, &b, &c).map_err(input)?).map_err(input)?;
                    let d = l.residual(&r).max(l.residual(&specialize_element(e, t)?));
                    note(format!("theta {} triple {}", s, k), d, &mut delta, &mut fails);
                }
            }
        }
        "det" | "laplace" | "minors" | "pluecker" | "young" | "eta" => {
            let n = n_of(match suite {
                "det" | "laplace" => 3,
                _ => 4,
            });
            params.insert("n".into(), json!(n));
            let d = cfg.d.unwrap_or(2.min(n.saturating_sub(1)).max(1));
            if matches!(suite, "pluecker" | "eta") {
                params.insert("d".into(), json!(d));
            }
            let sym = QMatrixContext::new(Symbolic::<Rational>::new(n));
            let sym_eta = if suite == "eta" { Some(eta_matrix(&sym, d).map_err(input)?) } else { None };
            for (s, t) in thetas_for(n)?.iter().enumerate() {
                let num = QMatrixContext::new(Numeric::new(t.clone()).map_err(input)?);
                let at_theta = |p: &QPolynomial<Phase>| p.specialize(t).map_err(input);
                match suite {
                    "det" => {
                        note(
                            format!("theta {} det", s),
                            poly_delta(&at_theta(sym.det())?, num.det()),
                            &mut delta,
                            &mut fails,
                        );
                        note(format!("theta {} leib", s), poly_delta(num.det(), &num.leib()), &mut delta, &mut fails);
                        for k in 1..=n {
                            for l in 1..=n {
                                let g = num.generator(k, l).map_err(input)?;
                                let lhs = num.mul(num.det(), &g);
                                let rhs = num.mul(&g, num.det()).scale(&num.phase(&num.det_commutation_exp(k, l)));
                                note(
                                    format!("theta {} det g[{},{}]", s, k, l),
                                    poly_delta(&lhs, &rhs),
                                    &mut delta,
                                    &mut fails,
                                );
                            }
                        }
                    }
                    "laplace" => {
                        for dd in 1..=n.min(3) {
                            for rows in subsets(n, dd) {
                                for cols in subsets(n, dd) {
                                    let m = num.minor(&rows, &cols).map_err(input)?;
                                    note(
                                        format!("theta {} minor {:?} {:?}", s, rows, cols),
                                        poly_delta(&at_theta(&sym.minor(&rows, &cols).map_err(input)?)?, &m),
                                        &mut delta,
                                        &mut fails,
                                    );
                                    for k in 1..=dd {
                                        let r = num.laplace_row(&rows, &cols, k).map_err(input)?;
                                        let c = num.laplace_col(&rows, &cols, k).map_err(input)?;
                                        let dlt = poly_delta(&r, &m).max(poly_delta(&c, &m));
                                        note(
                                            format!("theta {} {:?} {:?} k={}", s, rows, cols, k),
                                            dlt,
                                            &mut delta,
                                            &mut fails,
                                        );
                                    }
                                }
                            }
                        }
                    }
                    "minors" => {
                        let all: Vec<(Vec<usize>, Vec<usize>)> = (1..=n.min(2))
                            .flat_map(|dd| subsets(n, dd).into_iter().cartesian_product(subsets(n, dd)))
                            .collect();
                        let mins: Vec<QPolynomial<Complex64>> =
                            all.iter().map(|(i, j)| num.minor(i, j)).collect::<Result<_, _>>().map_err(input)?;
                        for (x, (i, j)) in all.iter().enumerate() {
                            for (y, (i2, j2)) in all.iter().enumerate() {
                                let r = crate::scalars::r_coeff_exp(i, j, i2, j2).map_err(input)?.pow(2);
                                let lhs = num.mul(&mins[x], &mins[y]);
                                let rhs = num.mul(&mins[y], &mins[x]).scale(&num.phase(&r));
                                note(
                                    format!("theta {} ({:?},{:?}) ({:?},{:?})", s, i, j, i2, j2),
                                    poly_delta(&lhs, &rhs),
                                    &mut delta,
                                    &mut fails,
                                );
                            }
                        }
                    }
                    "pluecker" => {
                        for i in subsets(n, d + 1) {
                            for j in tuples(n, d - 1) {
                                let r = pluecker_relation(&num, &i, &j).map_err(input)?;
                                note(
                                    format!("theta {} I={:?} J={:?}", s, i, j),
                                    r.max_magnitude(),
                                    &mut delta,
                                    &mut fails,
                                );
                            }
                        }
                    }
                    "young" => {
                        for gamma in compositions(n).into_iter().filter(|g| g.len() >= 2) {
                            let sizes = flag_sizes(&gamma, n).map_err(input)?;
                            for &dd in &sizes {
                                for &d2 in sizes.iter().filter(|x| **x <= dd) {
                                    for i in subsets(n, dd + 1) {
                                        for j in tuples(n, d2 - 1) {
                                            let r = young_relation(&num, &i, &j, dd, d2).map_err(input)?;
                                            note(
                                                format!("theta {} {:?} {:?}", s, i, j),
                                                r.max_magnitude(),
                                                &mut delta,
                                                &mut fails,
                                            );
                                        }
                                    }
                                }
                            }
                        }
                    }
                    _ => {
                        let se = sym_eta.as_ref().expect("computed for eta");
                        let ne = eta_matrix(&num, d).map_err(input)?;
                        for (name, a, b) in [
                            ("eta", &se.eta, &ne.eta),
                            ("eta_hat", &se.eta_hat, &ne.eta_hat),
                            ("antipode", &se.antipode, &ne.antipode),
                        ] {
                            for (x, (ra, rb)) in a.iter().zip(b).enumerate() {
                                for (y, (pa, pb)) in ra.iter().zip(rb).enumerate() {
                                    note(
                                        format!("theta {} {}[{},{}]", s, name, x + 1, y + 1),
                                        poly_delta(&at_theta(pa)?, pb),
                                        &mut delta,
                                        &mut fails,
                                    );
                                }
                            }
                        }
                        for c in eta_checks(&num, &ne) {
                            if !c.passed {
                                fails.push(format!("theta {} {}", s, c.name));
                            }
                        }
                    }
                }
            }
        }
        "chart-iso" => {
            let n = n_of(2);
            params.insert("n".into(), json!(n));
            let a = projective_space(n);
            let cones = projective_fan_cones(n).map_err(input)?;
            for (s, t) in thetas_for(n)?.iter().enumerate() {
                let def = Numeric::new(t.clone()).map_err(input)?;
                let mut upper = Vec::new();
                for i in 1..=n + 1 {
                    for j in (i + 1)..=n + 1 {
                        upper.push(if j <= n { t.value(i, j).map_err(input)?.re } else { 0.0 });
                    }
                }
                let big = ThetaSpec::from_upper(n + 1, &upper).map_err(input)?;
                for (i, cone) in cones.iter().enumerate() {
                    let chart = ChartAlgebra::new(cone).map_err(input)?;
                    let loc = a.localize_degree0(i).map_err(input)?;
                    let image: Vec<usize> = chart
                        .generators()
                        .iter()
                        .map(|m| {
                            loc.others()
                                .into_iter()
                                .find(|k| &loc.weight(*k) == m)
                                .ok_or_else(|| VerifyError::Input("no matching y".into()))
                        })
                        .collect::<Result<_, _>>()?;
                    for x in 0..chart.len() {
                        for y in (x + 1)..chart.len() {
                            let (mx, my) = (&chart.generators()[x], &chart.generators()[y]);
                            let xy = star(
                                &def,
                                &LaurentElement::character(mx.clone()),
                                &LaurentElement::character(my.clone()),
                            )
                            .map_err(input)?;
                            let yx = star(
                                &def,
                                &LaurentElement::character(my.clone()),
                                &LaurentElement::character(mx.clone()),
                            )
                            .map_err(input)?;
                            let ratio =
                                *xy.terms().next().expect("one term").1 / *yx.terms().next().expect("one term").1;
                            let ore = loc.commutation_exp(image[x], image[y]).evaluate(&big).map_err(input)?;
                            note(
                                format!("theta {} sigma{} x{} x{}", s, i + 1, x + 1, y + 1),
                                (ore - ratio).norm(),
                                &mut delta,
                                &mut fails,
                            );
                        }
                    }
                }
            }
        }
        "koszul" => {
            let n = n_of(3);
            params.insert("n".into(), json!(n));
            if n > 3 {
                return Err(VerifyError::Cap("numeric Koszul check needs n ≤ 3".into()));
            }
            let dual = projective_space(n).koszul_dual();
            for (s, t) in thetas_for(n)?.iter().enumerate() {
                for k in 0..=n + 1 {
                    let r = frobenius_pairing_rank_at(&dual, k, std::slice::from_ref(t)).map_err(input)?;
                    if !r.full() || r.min_singular <= 1e-6 {
                        fails.push(format!("theta {} k={}: pairing rank {:?} of {}", s, k, r.numeric_ranks, r.size));
                    }
                }
            }
        }
        "kaehler" => {
            let trials = cfg.trials.unwrap_or(100);
            params.insert("trials".into(), json!(trials));
            for (id, chart) in free_charts() {
                if cfg.theta.as_ref().is_some_and(|t| t.n() != chart.n()) {
                    continue;
                }
                let k = Kaehler::new(&chart).map_err(input)?;
                for (s, t) in thetas_for(chart.n())?.iter().enumerate() {
                    let r =
                        crate::torus::verify_leibniz(&Numeric::new(t.clone()).map_err(input)?, &k, trials, cfg.seed);
                    note(format!("theta {} {}", s, id), r.max_residual, &mut delta, &mut fails);
                }
            }
        }
        _ => {
            for ex in worked_examples() {
                if cfg.theta.as_ref().is_some_and(|t| t.n() != ex.n) {
                    continue;
                }
                for (s, t) in thetas_for(ex.n)?.iter().enumerate() {
                    let def = Numeric::new(t.clone()).map_err(input)?;
                    let chi = |p: &Vec<i64>| LaurentElement::<Complex64>::character(p.clone());
                    for e in &ex.phases {
                        let (ma, mb) = (&ex.generators[e.a], &ex.generators[e.b]);
                        let ab = star(&def, &chi(ma), &chi(mb)).map_err(input)?;
                        let ba = star(&def, &chi(mb), &chi(ma)).map_err(input)?;
                        let ph = e.expected().evaluate(t).map_err(input)?;
                        let d = (*ab.terms().next().expect("one term").1
                            - ph * *ba.terms().next().expect("one term").1)
                            .norm();
                        note(
                            format!("theta {} {} {}{}", s, ex.id, ex.names[e.a], ex.names[e.b]),
                            d,
                            &mut delta,
                            &mut fails,
                        );
                    }
                }
            }
        }
    }
    let count = cfg.theta.as_ref().map(|_| 1).unwrap_or(seeds.len());
    params.insert("thetas".into(), json!(count));
    Ok(VerificationReport {
        suite: format!("specialize:{}", suite),
        parameters: params,
        theta_mode: "numeric".into(),
        identities: vec![check(format!("numeric agreement, |delta| < {:e}", NUMERIC_TOLERANCE), fails)],
        max_delta: Some(delta),
        elapsed: start.elapsed(),
    })
}

/// Twenty θ for the centrality test: generic ones, ones built to satisfy
/// the column-sum condition (some shifted by 2π), and `θ^{12} = π` at n=2.
pub fn centrality_cases(seed: u64) -> Vec<(String, ThetaSpec<f64>)> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut out = Vec::new();
    let upper_of = |t: &ThetaSpec<f64>, n: usize| -> Vec<f64> {
        let mut u = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                u.push(t.value(i, j).expect("in range").re);
            }
        }
        u
    };
    for k in 0..9 {
        out.push((format!("generic {}", k), ThetaSpec::random(3, seed + k)));
    }
    for k in 0..10 {
        let a = ThetaSpec::random(3, seed + 100 + k);
        let col: Vec<f64> = (1..=3).map(|i| (1..=3).map(|r| a.value(r, i).expect("in range").re).sum()).collect();
        let mut u = upper_of(&a, 3);
        let mut idx = 0;
        for r in 1..=3usize {
            for i in (r + 1)..=3 {
                // subtract T_ri = (c_i − c_r)/n so that every column sums to zero
                u[idx] -= (col[i - 1] - col[r - 1]) / 3.0;
                idx += 1;
            }
        }
        if k % 3 == 1 {
            u[0] += two_pi;
        }
        if k % 3 == 2 {
            u[2] -= two_pi;
        }
        out.push((format!("central {}", k), ThetaSpec::from_upper(3, &u).expect("skew")));
    }
    out.push(("theta12 = pi".into(), ThetaSpec::from_upper(2, &[std::f64::consts::PI]).expect("skew")));
    out
}

/// Centrality of det decided two ways: numerically from the commutators
/// `[det, g_kl]`, and by the column-sum condition on θ.
pub fn centrality_report(cases: &[(String, ThetaSpec<f64>)]) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut central = 0;
    for (label, t) in cases {
        let ctx = QMatrixContext::new(Numeric::new(t.clone()).map_err(input)?);
        let by_commutator = ctx.det_commutator_size() < NUMERIC_TOLERANCE;
        let by_condition = det_centrality_condition(t).map_err(input)?;
        central += by_condition as usize;
        if by_commutator != by_condition {
            fails.push(format!("{}: commutators say {}, condition says {}", label, by_commutator, by_condition));
        }
    }
    let mut params = BTreeMap::new();
    params.insert("cases".into(), json!(cases.len()));
    params.insert("central".into(), json!(central));
    Ok(VerificationReport {
        suite: "centrality".into(),
        parameters: params,
        theta_mode: "numeric".into(),
        identities: vec![check("central verdicts agree", fails)],
        max_delta: None,
        elapsed: start.elapsed(),
    })
}
