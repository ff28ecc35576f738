//! Homogeneous coordinate algebras of CP^n_θ and of quotient projective
//! varieties: grading, localization at a generator, the Koszul dual and its
//! Frobenius pairing, and torus-invariant monomial ideals of a chart.

use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::fan::{self, Cone, FanError, LatticePoint};
use crate::grassmann::FlagAlgebra;
use crate::modp::{self, QPoint};
use crate::presentation::{monomial_text, AlgebraPresentation, Commutation, IdentityCheck};
use crate::scalars::{PhaseExp, ScalarError, ThetaSpec};
use crate::torus::{star_phase, ChartAlgebra, TorusError};
use crate::Phase;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectiveError {
    #[error("relation {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("relation {0} is not weight-homogeneous")]
    NotWeightHomogeneous(usize),
    #[error("degree {k} out of range 0..={max}")]
    DegreeOutOfRange { k: usize, max: usize },
    #[error("generator index {0} out of range")]
    BadIndex(usize),
    #[error("{0} exceeds the supported size")]
    TooLarge(String),
    #[error("τ is not a face of σ")]
    NotAFace,
    #[error("ideal generator {0:?} is not in σ∨")]
    NotInDual(LatticePoint),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A homogeneous element: normal-ordered exponent vectors with exact
/// phase coefficients.
pub type HElement = BTreeMap<Vec<u32>, Phase>;

fn add_into(f: &mut HElement, m: Vec<u32>, c: Phase) {
    let v = match f.remove(&m) {
        Some(old) => old + c,
        None => c,
    };
    if !v.is_zero() {
        f.insert(m, v);
    }
}

/// Quasi-commutative algebra on generators `w_a` with `w_a w_b = P_ab w_b w_a`,
/// graded by degree and by torus weight, possibly modulo homogeneous relations.
#[derive(Debug, Clone)]
pub struct HomogeneousAlgebra {
    pub kind: String,
    pub names: Vec<String>,
    /// Rank of the torus whose `q_ij` appear in the phases.
    pub torus_rank: usize,
    phases: Vec<Vec<PhaseExp>>,
    pub weights: Vec<Vec<i64>>,
    pub relations: Vec<HElement>,
}

impl HomogeneousAlgebra {
    /// Builds the skew phase matrix from its upper triangle.
    pub fn quasi_commutative(
        kind: &str,
        names: Vec<String>,
        torus_rank: usize,
        weights: Vec<Vec<i64>>,
        upper: impl Fn(usize, usize) -> PhaseExp,
    ) -> Self {
        let m = names.len();
        let mut phases = vec![vec![PhaseExp::one(); m]; m];
        for a in 0..m {
            for b in (a + 1)..m {
                let e = upper(a, b);
                phases[b][a] = e.inv();
                phases[a][b] = e;
            }
        }
        HomogeneousAlgebra { kind: kind.into(), names, torus_rank, phases, weights, relations: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn phase(&self, a: usize, b: usize) -> &PhaseExp {
        &self.phases[a][b]
    }

    /// `P_ab P_ba = 1` and `P_aa = 1`, which makes the ordered monomials a basis.
    pub fn is_skew(&self) -> bool {
        let m = self.len();
        (0..m).all(|a| self.phases[a][a].is_one() && (0..m).all(|b| self.phases[a][b].mul(&self.phases[b][a]).is_one()))
    }

    /// Phase of `w^α · w^β = phase · w^{α+β}`.
    pub fn mono_phase(&self, a: &[u32], b: &[u32]) -> PhaseExp {
        let mut e = PhaseExp::one();
        for x in 0..a.len() {
            if a[x] == 0 {
                continue;
            }
            for y in 0..x {
                if b[y] != 0 {
                    e = e.mul(&self.phases[x][y].pow((a[x] * b[y]) as i32));
                }
            }
        }
        e
    }

    pub fn monomial(&self, exps: Vec<u32>) -> HElement {
        let mut f = HElement::new();
        f.insert(exps, Phase::one());
        f
    }

    pub fn generator(&self, a: usize) -> HElement {
        let mut e = vec![0; self.len()];
        e[a] = 1;
        self.monomial(e)
    }

    /// The product `w_{a_1} ⋯ w_{a_k}` in normal order.
    pub fn word(&self, letters: &[usize]) -> HElement {
        letters.iter().fold(self.monomial(vec![0; self.len()]), |acc, a| self.mul(&acc, &self.generator(*a)))
    }

    pub fn mul(&self, f: &HElement, g: &HElement) -> HElement {
        let mut out = HElement::new();
        for (a, c) in f {
            for (b, d) in g {
                let m: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                add_into(&mut out, m, (c * d).mul_exp(&self.mono_phase(a, b)));
            }
        }
        out
    }

    pub fn weight(&self, mono: &[u32]) -> Vec<i64> {
        let mut w = vec![0i64; self.torus_rank];
        for (a, k) in mono.iter().enumerate() {
            for (i, x) in self.weights[a].iter().enumerate() {
                w[i] += *k as i64 * x;
            }
        }
        w
    }

    /// Number of monomials of degree `k`, by dynamic programming over the generators.
    pub fn free_dimension(&self, k: usize) -> u64 {
        let mut ways = vec![0u64; k + 1];
        ways[0] = 1;
        for _ in 0..self.len() {
            for d in 1..=k {
                ways[d] += ways[d - 1];
            }
        }
        ways[k]
    }

    /// Ordered monomials of degree `k`.
    pub fn monomials(&self, k: usize) -> Vec<Vec<u32>> {
        let m = self.len();
        let mut out = Vec::new();
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(cur.clone());
                return;
            }
            for x in (0..=left).rev() {
                cur[pos] = x;
                rec(pos + 1, left - x, cur, out);
            }
        }
        if m == 0 {
            if k == 0 {
                out.push(Vec::new());
            }
            return out;
        }
        rec(0, k as u32, &mut vec![0; m], &mut out);
        out
    }

    /// `dim A_k`. With relations, the ideal in degree `k` is spanned by the
    /// `u f v` and its rank is taken at a random point of F_p.
    pub fn graded_dimension(&self, k: usize) -> usize {
        if self.relations.is_empty() {
            return self.free_dimension(k) as usize;
        }
        let basis = self.monomials(k);
        let index: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let pt = QPoint::random(self.torus_rank, 0x9e37);
        let mut rows = Vec::new();
        for f in &self.relations {
            let Some(d) = helement_degree(f) else { continue };
            if d > k {
                continue;
            }
            for s in 0..=(k - d) {
                for u in self.monomials(s) {
                    for v in self.monomials(k - d - s) {
                        let p = self.mul(&self.mul(&self.monomial(u.clone()), f), &self.monomial(v));
                        let mut row = vec![0u64; basis.len()];
                        for (m, c) in &p {
                            row[index[m]] = modp::add(row[index[m]], pt.eval_scalar(c));
                        }
                        rows.push(row);
                    }
                }
            }
        }
        basis.len() - if rows.is_empty() { 0 } else { modp::rank(rows) }
    }

    pub fn hilbert_series(&self, deg: usize) -> Vec<i64> {
        (0..=deg).map(|k| self.graded_dimension(k) as i64).collect()
    }

    pub fn element_text(&self, f: &HElement) -> String {
        let mut out = String::new();
        for (k, (m, c)) in f.iter().rev().enumerate() {
            let exps: Vec<i64> = m.iter().map(|x| *x as i64).collect();
            let mono = monomial_text(&self.names, &exps);
            let (neg, body) = match c.as_monomial() {
                Some((r, e)) if *r == crate::Rational::one() && e.is_one() => (false, mono),
                Some((r, e)) if *r == -crate::Rational::one() && e.is_one() => (true, mono),
                Some((r, e)) if *r == -crate::Rational::one() => (true, format!("{} * {}", e, mono)),
                _ => (false, format!("{} * {}", c, mono)),
            };
            match (k, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{}", body)),
                (_, false) => out.push_str(&format!(" + {}", body)),
                (_, true) => out.push_str(&format!(" - {}", body)),
            }
        }
        out
    }

    pub fn presentation(&self) -> AlgebraPresentation {
        let m = self.len();
        let mut commutation = Vec::new();
        for a in 0..m {
            for b in (a + 1)..m {
                commutation.push(Commutation { a, b, phase: self.phases[a][b].clone() });
            }
        }
        AlgebraPresentation {
            kind: self.kind.clone(),
            generators: self.names.clone(),
            weights: self.weights.clone(),
            commutation,
            binomials: Vec::new(),
            relations: self.relations.iter().map(|f| format!("{} = 0", self.element_text(f))).collect(),
        }
    }

    pub fn koszul_dual(&self) -> KoszulDual {
        KoszulDual { torus_rank: self.torus_rank, phases: self.phases.clone() }
    }

    /// Degree-zero part of the localization at `w_i` (zero-based).
    pub fn localize_degree0(&self, i: usize) -> Result<Localization<'_>, ProjectiveError> {
        if i >= self.len() {
            return Err(ProjectiveError::BadIndex(i));
        }
        Ok(Localization { alg: self, i })
    }
}

fn helement_degree(f: &HElement) -> Option<usize> {
    let degs: Vec<u32> = f.keys().map(|m| m.iter().sum()).collect();
    degs.first().filter(|d| degs.iter().all(|x| x == *d)).map(|d| *d as usize)
}

/// `A(CP^n_θ)`: `w_i w_j = q_ij² w_j w_i` for `i,j ≤ n`, `w_{n+1}` central,
/// torus weights `e_i` and `0`.
pub fn projective_space(n: usize) -> HomogeneousAlgebra {
    let names = (1..=n + 1).map(|i| format!("w{}", i)).collect();
    let mut weights = Vec::new();
    for a in 0..=n {
        let mut w = vec![0i64; n];
        if a < n {
            w[a] = 1;
        }
        weights.push(w);
    }
    HomogeneousAlgebra::quasi_commutative("projective", names, n, weights, |a, b| {
        if b < n {
            PhaseExp::q_pow(a + 1, b + 1, 2)
        } else {
            PhaseExp::one()
        }
    })
}

/// `A/⟨f_1, …, f_m⟩`, after checking each `f` is homogeneous in degree and weight.
pub fn quotient_variety(a: &HomogeneousAlgebra, fs: Vec<HElement>) -> Result<HomogeneousAlgebra, ProjectiveError> {
    for (k, f) in fs.iter().enumerate() {
        if helement_degree(f).is_none() {
            return Err(ProjectiveError::Inhomogeneous(k));
        }
        let ws: Vec<Vec<i64>> = f.keys().map(|m| a.weight(m)).collect();
        if ws.iter().any(|w| w != &ws[0]) {
            return Err(ProjectiveError::NotWeightHomogeneous(k));
        }
    }
    let mut out = a.clone();
    out.kind = "quotient".into();
    out.relations.extend(fs.into_iter().filter(|f| !f.is_empty()));
    Ok(out)
}

/// The ambient `CP_Θ^N` of a grassmannian or flag presentation, with the
/// Plücker or Young relations as quotient ideal.
pub fn pluecker_embedding(alg: &FlagAlgebra) -> Result<HomogeneousAlgebra, ProjectiveError> {
    let pc = &alg.context;
    let g = pc.generators.len();
    let weights = pc
        .generators
        .iter()
        .map(|j| {
            let mut w = vec![0i64; pc.n];
            for x in j {
                w[x - 1] += 1;
            }
            w
        })
        .collect();
    let ambient =
        HomogeneousAlgebra::quasi_commutative("projective", pc.names(), pc.n, weights, |a, b| pc.commutation_exp(a, b));
    let mut fs = Vec::new();
    for r in &alg.relations {
        let mut f = HElement::new();
        for ((a, b), cs) in pc.normal_form(r) {
            let mut m = vec![0u32; g];
            m[a] += 1;
            m[b] += 1;
            for (s, e) in cs {
                add_into(&mut f, m.clone(), Phase::unit(e).scale(&crate::Rational::from_integer(s)));
            }
        }
        fs.push(f);
    }
    quotient_variety(&ambient, fs)
}

/// Koszul dual `A^!` of a quasi-commutative algebra: `v_a² = 0` and
/// `v_a v_b + P_ab v_b v_a = 0`.
#[derive(Debug, Clone)]
pub struct KoszulDual {
    pub torus_rank: usize,
    phases: Vec<Vec<PhaseExp>>,
}

/// A tensor in `V ⊗ V` (or its dual), as coefficients on index pairs.
pub type QuadTensor = Vec<((usize, usize), Phase)>;

impl KoszulDual {
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        (1..=self.len()).map(|i| format!("v{}", i)).collect()
    }

    pub fn relations(&self) -> Vec<QuadTensor> {
        let m = self.len();
        let mut out: Vec<QuadTensor> = (0..m).map(|a| vec![((a, a), Phase::one())]).collect();
        for a in 0..m {
            for b in (a + 1)..m {
                out.push(vec![((a, b), Phase::one()), ((b, a), Phase::unit(self.phases[a][b].clone()))]);
            }
        }
        out
    }

    /// Strictly increasing words of length `k`.
    pub fn basis(&self, k: usize) -> Vec<Vec<usize>> {
        (0..self.len()).combinations(k).collect()
    }

    pub fn dimension(&self, k: usize) -> usize {
        self.basis(k).len()
    }

    pub fn series(&self, deg: usize) -> Vec<i64> {
        (0..=deg).map(|k| self.dimension(k) as i64).collect()
    }

    /// `v_s v_t = sign · phase · v_{sorted}`, or `None` on a repeated index;
    /// each inversion `x > y` contributes `−P_xy`.
    pub fn product(&self, s: &[usize], t: &[usize]) -> Option<(i64, PhaseExp, Vec<usize>)> {
        let mut w: Vec<usize> = s.iter().chain(t).copied().collect();
        let mut sign = 1;
        let mut e = PhaseExp::one();
        for p in 0..w.len() {
            for q in (p + 1)..w.len() {
                match w[p].cmp(&w[q]) {
                    std::cmp::Ordering::Equal => return None,
                    std::cmp::Ordering::Greater => {
                        sign = -sign;
                        e = e.mul(&self.phases[w[p]][w[q]]);
                    }
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        w.sort_unstable();
        Some((sign, e, w))
    }

    /// Matrix of `A^!_k ⊗ A^!_{m−k} → A^!_m` in the monomial bases.
    pub fn pairing_matrix(&self, k: usize) -> Result<Vec<Vec<Phase>>, ProjectiveError> {
        let m = self.len();
        if k > m {
            return Err(ProjectiveError::DegreeOutOfRange { k, max: m });
        }
        let left = self.basis(k);
        let right = self.basis(m - k);
        Ok(left
            .iter()
            .map(|s| {
                right
                    .iter()
                    .map(|t| match self.product(s, t) {
                        Some((sign, e, _)) => Phase::unit(e).scale(&crate::Rational::from_integer(sign)),
                        None => Phase::zero(),
                    })
                    .collect()
            })
            .collect())
    }

    pub fn presentation(&self) -> AlgebraPresentation {
        let names = self.names();
        let mut relations = Vec::new();
        for r in self.relations() {
            let parts: Vec<String> = r
                .iter()
                .map(|((a, b), c)| {
                    let mono = format!("{}*{}", names[*a], names[*b]);
                    if c.is_one() {
                        mono
                    } else {
                        format!("{} * {}", c, mono)
                    }
                })
                .collect();
            relations.push(format!("{} = 0", parts.join(" + ")));
        }
        AlgebraPresentation { kind: "koszul-dual".into(), generators: names, relations, ..Default::default() }
    }
}

/// The quadratic relations `w_a ⊗ w_b − P_ab w_b ⊗ w_a` of `A`, `a < b`.
pub fn quadratic_relations(a: &HomogeneousAlgebra) -> Vec<QuadTensor> {
    let m = a.len();
    let mut out = Vec::new();
    for x in 0..m {
        for y in (x + 1)..m {
            out.push(vec![((x, y), Phase::one()), ((y, x), -Phase::unit(a.phase(x, y).clone()))]);
        }
    }
    out
}

/// `⟨v_a ⊗ v_b, w_c ⊗ w_d⟩ = δ_ad δ_bc`.
pub fn reversed_pairing(xi: &QuadTensor, r: &QuadTensor) -> Phase {
    let mut s = Phase::zero();
    for ((a, b), c) in xi {
        for ((x, y), d) in r {
            if a == y && b == x {
                s = s + c * d;
            }
        }
    }
    s
}

/// Whether the dual relations are exactly the annihilator of the relations:
/// every pairing vanishes and the ranks add up to `m²`.
pub fn annihilator_check(a: &HomogeneousAlgebra, dual: &KoszulDual) -> bool {
    let rel = quadratic_relations(a);
    let drel = dual.relations();
    if !drel.iter().all(|x| rel.iter().all(|r| reversed_pairing(x, r).is_zero())) {
        return false;
    }
    let m = a.len();
    let pt = QPoint::random(a.torus_rank, 17);
    let rank_of = |ts: &[QuadTensor]| {
        let rows: Vec<Vec<u64>> = ts
            .iter()
            .map(|t| {
                let mut row = vec![0u64; m * m];
                for ((x, y), c) in t {
                    row[x * m + y] = modp::add(row[x * m + y], pt.eval_scalar(c));
                }
                row
            })
            .collect();
        if rows.is_empty() {
            0
        } else {
            modp::rank(rows)
        }
    };
    rank_of(&rel) + rank_of(&drel) == m * m
}

/// `dim (T(V)/⟨R⟩)_k` computed in the tensor algebra at a random point of F_p.
pub fn tensor_quotient_dimension(
    m: usize,
    torus_rank: usize,
    rels: &[QuadTensor],
    k: usize,
) -> Result<usize, ProjectiveError> {
    let cols =
        m.checked_pow(k as u32).filter(|c| *c <= 4096).ok_or_else(|| ProjectiveError::TooLarge(format!("V^⊗{}", k)))?;
    if k < 2 {
        return Ok(cols);
    }
    let pt = QPoint::random(torus_rank, 23);
    let vals: Vec<Vec<((usize, usize), u64)>> =
        rels.iter().map(|t| t.iter().map(|(ab, c)| (*ab, pt.eval_scalar(c))).collect()).collect();
    let mut rows = Vec::new();
    for l in 0..=(k - 2) {
        let right = k - 2 - l;
        for pre in 0..m.pow(l as u32) {
            for post in 0..m.pow(right as u32) {
                for t in &vals {
                    let mut row = vec![0u64; cols];
                    for ((a, b), c) in t {
                        let idx = ((pre * m + a) * m + b) * m.pow(right as u32) + post;
                        row[idx] = modp::add(row[idx], *c);
                    }
                    rows.push(row);
                }
            }
        }
    }
    Ok(cols - modp::rank(rows))
}

/// Whether `H_A(s) H_{A^!}(−s) = 1` through degree `len − 1`.
pub fn series_product_is_one(h: &[i64], hd: &[i64]) -> bool {
    (0..h.len()).all(|k| {
        let s: i64 =
            (0..=k).map(|j| h[j] * hd.get(k - j).copied().unwrap_or(0) * if (k - j) % 2 == 0 { 1 } else { -1 }).sum();
        s == i64::from(k == 0)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusRank {
    pub size: usize,
    /// Rank at each random θ, counting singular values above `1e-6`.
    pub numeric_ranks: Vec<usize>,
    pub min_singular: f64,
    /// Exact determinant is nonzero, when computed (size ≤ 3).
    pub symbolic_nonzero: Option<bool>,
}

impl FrobeniusRank {
    pub fn full(&self) -> bool {
        self.numeric_ranks.iter().all(|r| *r == self.size) && self.symbolic_nonzero != Some(false)
    }
}

fn leibniz_det(m: &[Vec<Phase>]) -> Phase {
    let n = m.len();
    let mut total = Phase::zero();
    for p in (0..n).permutations(n) {
        let inv = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).filter(|(a, b)| p[*a] > p[*b]).count();
        let mut t = Phase::one();
        for (r, c) in p.iter().enumerate() {
            t = &t * &m[r][*c];
        }
        total = if inv % 2 == 0 { total + t } else { total - t };
    }
    total
}

/// Rank of the multiplication pairing `A^!_k ⊗ A^!_{m−k} → A^!_m`, numerically
/// at the given random θ seeds, and exactly when the matrix is at most 3×3.
pub fn frobenius_pairing_rank(dual: &KoszulDual, k: usize, seeds: &[u64]) -> Result<FrobeniusRank, ProjectiveError> {
    let thetas: Vec<ThetaSpec<f64>> = seeds.iter().map(|s| ThetaSpec::random(dual.torus_rank.max(1), *s)).collect();
    frobenius_pairing_rank_at(dual, k, &thetas)
}

/// As [`frobenius_pairing_rank`], at explicit numeric θ.
pub fn frobenius_pairing_rank_at(
    dual: &KoszulDual,
    k: usize,
    thetas: &[ThetaSpec<f64>],
) -> Result<FrobeniusRank, ProjectiveError> {
    if dual.len() > 4 {
        return Err(ProjectiveError::TooLarge(format!("Frobenius pairing with {} generators", dual.len())));
    }
    let mat = dual.pairing_matrix(k)?;
    let size = mat.len();
    let mut numeric_ranks = Vec::new();
    let mut min_singular = f64::INFINITY;
    for theta in thetas {
        let mut vals = Vec::with_capacity(size * size);
        for row in &mat {
            for c in row {
                vals.push(c.specialize(theta)?);
            }
        }
        let dm = DMatrix::<Complex<f64>>::from_row_slice(size, size, &vals);
        let sv = dm.svd(false, false).singular_values;
        numeric_ranks.push(sv.iter().filter(|s| **s > 1e-6).count());
        min_singular = sv.iter().copied().fold(min_singular, f64::min);
    }
    let symbolic_nonzero = (size <= 3).then(|| !leibniz_det(&mat).is_zero());
    Ok(FrobeniusRank { size, numeric_ranks, min_singular, symbolic_nonzero })
}

/// `c · w_i^{-d} · w^α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fraction {
    pub phase: PhaseExp,
    pub denom: u32,
    pub mono: Vec<u32>,
}

/// Left Ore localization at a generator `w_i`, restricted to monomial fractions.
pub struct Localization<'a> {
    alg: &'a HomogeneousAlgebra,
    i: usize,
}

impl<'a> Localization<'a> {
    pub fn index(&self) -> usize {
        self.i
    }

    /// `λ(α)` with `w_i w^α = λ(α) w^α w_i`.
    pub fn lambda(&self, mono: &[u32]) -> PhaseExp {
        let mut e = PhaseExp::one();
        for (x, k) in mono.iter().enumerate() {
            if *k != 0 {
                e = e.mul(&self.alg.phase(self.i, x).pow(*k as i32));
            }
        }
        e
    }

    /// The Ore data `(s̃', ã')` for `s_2 = w_i^d` and `a_1 = w^α`:
    /// `ã' s_2 = s̃' a_1` with `s̃' = w_i^d` and `ã' = λ(α)^d w^α`.
    pub fn ore_data(&self, d: u32, a1: &[u32]) -> (u32, PhaseExp, Vec<u32>) {
        (d, self.lambda(a1).pow(d as i32), a1.to_vec())
    }

    /// `(s_1^{-1} a_1)(s_2^{-1} a_2) = (s̃' s_1)^{-1} (ã' a_2)`.
    pub fn mul(&self, x: &Fraction, y: &Fraction) -> Fraction {
        let (sd, ph, a) = self.ore_data(y.denom, &x.mono);
        let mono: Vec<u32> = a.iter().zip(&y.mono).map(|(p, q)| p + q).collect();
        let phase = x.phase.mul(&y.phase).mul(&ph).mul(&self.alg.mono_phase(&a, &y.mono));
        Fraction { phase, denom: sd + x.denom, mono }
    }

    /// `y_k = w_i^{-1} w_k`.
    pub fn y(&self, k: usize) -> Fraction {
        let mut mono = vec![0; self.alg.len()];
        mono[k] = 1;
        Fraction { phase: PhaseExp::one(), denom: 1, mono }
    }

    pub fn others(&self) -> Vec<usize> {
        (0..self.alg.len()).filter(|k| *k != self.i).collect()
    }

    /// `y_k y_l = phase · y_l y_k`.
    pub fn commutation_exp(&self, k: usize, l: usize) -> PhaseExp {
        let a = self.mul(&self.y(k), &self.y(l));
        let b = self.mul(&self.y(l), &self.y(k));
        debug_assert_eq!((a.denom, &a.mono), (b.denom, &b.mono));
        a.phase.mul(&b.phase.inv())
    }

    /// Torus weight of `y_k`.
    pub fn weight(&self, k: usize) -> Vec<i64> {
        self.alg.weights[k].iter().zip(&self.alg.weights[self.i]).map(|(a, b)| a - b).collect()
    }

    pub fn presentation(&self) -> AlgebraPresentation {
        let others = self.others();
        let mut commutation = Vec::new();
        for (a, k) in others.iter().enumerate() {
            for (b, l) in others.iter().enumerate().skip(a + 1) {
                commutation.push(Commutation { a, b, phase: self.commutation_exp(*k, *l) });
            }
        }
        AlgebraPresentation {
            kind: "localization".into(),
            generators: others.iter().map(|k| format!("y{}", k + 1)).collect(),
            weights: others.iter().map(|k| self.weight(*k)).collect(),
            commutation,
            ..Default::default()
        }
    }
}

/// Commutation exponent of `χ_p ⋆ χ_q` against `χ_q ⋆ χ_p` on the
/// `(n+1)`-torus with `θ̃ = diag(θ, 0)`.
pub fn embedded_star_commutation(p: &[i64], q: &[i64], n: usize) -> PhaseExp {
    let full = star_phase(p, q).pow(2);
    let mut e = PhaseExp::one();
    for (i, j, k) in full.entries() {
        if i <= n && j <= n {
            e.add_q(i, j, k);
        }
    }
    e
}

/// Rays `v_i = e_i`, `v_{n+1} = −Σ e_i` and maximal cones
/// `σ_i = cone(v_{i+1}, …, v_{i+n})`, indices mod `n+1`.
pub fn projective_fan_cones(n: usize) -> Result<Vec<Cone>, ProjectiveError> {
    let rays: Vec<LatticePoint> =
        (0..=n).map(|a| (0..n).map(|i| if a == n { -1 } else { i64::from(i == a) }).collect()).collect();
    (0..=n).map(|i| Ok(Cone::new(n, (1..=n).map(|s| rays[(i + s) % (n + 1)].clone()).collect())?)).collect()
}

/// Compares each chart `C_θ[σ_i]` of CP^n with `A[w_i^{-1}]_0` under
/// `x_k ↦ y_k`, `x_i ↦ y_{n+1}`: weights, the assignment itself and every
/// commutation phase, by Ore multiplication and by the embedded star product.
pub fn chart_iso_check(n: usize) -> Result<Vec<IdentityCheck>, ProjectiveError> {
    if n == 0 || n > 3 {
        return Err(ProjectiveError::TooLarge(format!("chart isomorphism at n={}", n)));
    }
    let a = projective_space(n);
    let cones = projective_fan_cones(n)?;
    fan::validate_fan(n, &cones)?;
    let mut out = Vec::new();
    for (i, cone) in cones.iter().enumerate() {
        let chart = ChartAlgebra::new(cone)?;
        let loc = a.localize_degree0(i)?;
        let label = format!("sigma{}", i + 1);
        let mut bad = Vec::new();
        if !chart.is_free() || chart.len() != n {
            bad.push(format!("chart has {} generators", chart.len()));
        }
        let mut image = Vec::new();
        for m in chart.generators() {
            match loc.others().into_iter().filter(|k| &loc.weight(*k) == m).collect::<Vec<_>>().as_slice() {
                [k] => image.push(*k),
                _ => bad.push(format!("no unique y for {:?}", m)),
            }
        }
        out.push(IdentityCheck::from_failures(&format!("{} weights", label), bad));
        if image.len() != chart.len() {
            continue;
        }

        // x_k ↦ y_k for characters e_k* − e_i*, and x_i = −e_i* ↦ y_{n+1}
        let mut bad = Vec::new();
        for (m, k) in chart.generators().iter().zip(&image) {
            let want = if i == n {
                m.iter().position(|x| *x == 1)
            } else if m.iter().filter(|x| **x != 0).count() == 1 {
                Some(n)
            } else {
                m.iter().position(|x| *x == 1)
            };
            if want != Some(*k) {
                bad.push(format!("{:?} -> y{}", m, k + 1));
            }
        }
        out.push(IdentityCheck::from_failures(&format!("{} assignment", label), bad));

        let mut ore_bad = Vec::new();
        let mut star_bad = Vec::new();
        for x in 0..chart.len() {
            for y in (x + 1)..chart.len() {
                let want = chart.check_theta()[x][y].pow(2);
                if loc.commutation_exp(image[x], image[y]) != want {
                    ore_bad.push(format!("x{} x{}", x + 1, y + 1));
                }
                let mut p = vec![0i64; n + 1];
                let mut q = vec![0i64; n + 1];
                p[image[x]] += 1;
                p[i] -= 1;
                q[image[y]] += 1;
                q[i] -= 1;
                if embedded_star_commutation(&p, &q, n) != want {
                    star_bad.push(format!("x{} x{}", x + 1, y + 1));
                }
            }
        }
        out.push(IdentityCheck::from_failures(&format!("{} relations (Ore)", label), ore_bad));
        out.push(IdentityCheck::from_failures(&format!("{} relations (star)", label), star_bad));
    }
    Ok(out)
}

/// Describes the complement `S` of the ideal inside `σ∨ ∩ L*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealDescriptor {
    /// `I_σ(τ)`: the characters not vanishing on τ, `S = σ∨ ∩ L* ∖ τ^⊥`.
    Face(Cone),
    /// The ideal generated by the given characters.
    Generated(Vec<LatticePoint>),
}

/// A torus-invariant two-sided ideal `⊕_{m ∈ S} C χ_m` of `C_θ[σ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    pub sigma: Cone,
    pub descriptor: IdealDescriptor,
}

pub fn monomial_ideal(sigma: &Cone, tau: &Cone) -> Result<MonomialIdeal, ProjectiveError> {
    if !fan::is_face(tau, sigma) {
        return Err(ProjectiveError::NotAFace);
    }
    Ok(MonomialIdeal { sigma: sigma.clone(), descriptor: IdealDescriptor::Face(tau.clone()) })
}

pub fn generated_ideal(sigma: &Cone, gens: Vec<LatticePoint>) -> Result<MonomialIdeal, ProjectiveError> {
    if let Some(g) = gens.iter().find(|g| !fan::in_dual(sigma, g)) {
        return Err(ProjectiveError::NotInDual(g.clone()));
    }
    Ok(MonomialIdeal { sigma: sigma.clone(), descriptor: IdealDescriptor::Generated(gens) })
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl MonomialIdeal {
    pub fn contains(&self, m: &[i64]) -> bool {
        if !fan::in_dual(&self.sigma, m) {
            return false;
        }
        match &self.descriptor {
            IdealDescriptor::Face(tau) => tau.rays().iter().any(|v| dot(m, v) != 0),
            IdealDescriptor::Generated(gs) => gs.iter().any(|g| {
                let d: Vec<i64> = m.iter().zip(g).map(|(x, y)| x - y).collect();
                fan::in_dual(&self.sigma, &d)
            }),
        }
    }

    /// Lattice points of `σ∨` with all coordinates in `[−b, b]`.
    pub fn box_points(&self, b: i64) -> Vec<LatticePoint> {
        let n = self.sigma.n();
        (0..n).map(|_| -b..=b).multi_cartesian_product().filter(|m| fan::in_dual(&self.sigma, m)).collect()
    }

    /// A pair `(m, g)` with `m ∈ S`, `g` a chart generator and `m + g ∉ S`.
    pub fn ideal_violation(&self, b: i64) -> Result<Option<(LatticePoint, LatticePoint)>, ProjectiveError> {
        let gens = fan::semigroup_generators(&self.sigma)?;
        for m in self.box_points(b).into_iter().filter(|m| self.contains(m)) {
            for g in &gens {
                let s: Vec<i64> = m.iter().zip(g).map(|(x, y)| x + y).collect();
                if !self.contains(&s) {
                    return Ok(Some((m, g.clone())));
                }
            }
        }
        Ok(None)
    }

    /// A pair in the complement whose sum lies in the ideal.
    pub fn primality_witness(&self, b: i64) -> Option<(LatticePoint, LatticePoint)> {
        let comp: Vec<LatticePoint> = self.box_points(b).into_iter().filter(|m| !self.contains(m)).collect();
        for (x, y) in comp.iter().tuple_combinations().chain(comp.iter().map(|x| (x, x))) {
            let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            if s.iter().all(|c| c.abs() <= b) && self.contains(&s) {
                return Some((x.clone(), y.clone()));
            }
        }
        None
    }

    pub fn is_zero_in_box(&self, b: i64) -> bool {
        self.box_points(b).iter().all(|m| !self.contains(m))
    }
}

/// Prime iff the complement is a sub-semigroup, certified inside the box.
pub fn is_prime_monomial(ideal: &MonomialIdeal, b: i64) -> bool {
    ideal.primality_witness(b).is_none()
}
