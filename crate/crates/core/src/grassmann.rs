//! Noncommutative grassmannians and flag varieties: Plücker coordinates as
//! minors with rows `(1..d)`, the Θ matrix of the ambient projective space,
//! Plücker and Young symmetry relations, the tautological relations and the
//! η coinvariant algebra.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_complex::Complex;
use serde_json::{json, Value};
use thiserror::Error;

use crate::intlin;
use crate::modp::{self, QPoint};
use crate::presentation::{AlgebraPresentation, Commutation, IdentityCheck};
use crate::qmatrix::{perm_sign, QMatrixContext, QMatrixError, QPolynomial};
use crate::scalars::{
    pair_count, pair_index, pair_of_index, r_coeff_exp, Deformation, PhaseExp, ScalarError, ThetaSpec,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrassError {
    #[error(transparent)]
    Matrix(#[from] QMatrixError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("expected |I| = {want_i} and |J| = {want_j}, got {got_i} and {got_j}")]
    BadLengths { want_i: usize, want_j: usize, got_i: usize, got_j: usize },
    #[error("Young relations need d >= d' >= 1, got d={d}, d'={d2}")]
    BadSizes { d: usize, d2: usize },
    #[error("{0:?} is not a partition of {1}")]
    BadPartition(Vec<usize>, usize),
    #[error("need 1 <= d <= n, got d={d}, n={n}")]
    BadGrassmannian { d: usize, n: usize },
    #[error("Θ has size {got}, expected {want}")]
    BadThetaSize { got: usize, want: usize },
}

fn rows(d: usize) -> Vec<usize> {
    (1..=d).collect()
}

fn without(v: &[usize], pos: usize) -> Vec<usize> {
    v.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, x)| *x).collect()
}

/// `Θ^{JJ'} = Σ θ^{j_α j'_β}` as the phase `∏ q_{j_α j'_β}`.
pub fn theta_capital_exp(j: &[usize], j2: &[usize]) -> Result<PhaseExp, GrassError> {
    if j.len() != j2.len() {
        return Err(QMatrixError::LengthMismatch(j.len(), j2.len()).into());
    }
    let mut e = PhaseExp::one();
    for a in j {
        for b in j2 {
            e.add_q(*a, *b, 1);
        }
    }
    Ok(e)
}

/// Numeric value of `Θ^{JJ'}`.
pub fn theta_capital_value(theta: &ThetaSpec<f64>, j: &[usize], j2: &[usize]) -> Result<Complex<f64>, GrassError> {
    if j.len() != j2.len() {
        return Err(QMatrixError::LengthMismatch(j.len(), j2.len()).into());
    }
    let mut s = Complex::new(0.0, 0.0);
    for a in j {
        for b in j2 {
            s += theta.value(*a, *b)?;
        }
    }
    Ok(s)
}

/// `sign · phase · Λ^{left} Λ^{right}`, minors taken on rows `(1..|left|)`
/// and `(1..|right|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorProduct {
    pub sign: i64,
    pub phase: PhaseExp,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl MinorProduct {
    /// Whether neither minor has a repeated column.
    pub fn survives(&self) -> bool {
        perm_sign(&self.left) != 0 && perm_sign(&self.right) != 0
    }
}

/// A formal quadratic relation among minors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticRelation {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub terms: Vec<MinorProduct>,
}

/// The terms of the Young symmetry relation
/// `Σ_γ (−1)^{γ+1} ∏_μ q_{i_γ i^γ_μ} ∏_ν q_{i_γ j_ν} Λ^{I^γ} Λ^{i_γ ∪ J}`.
pub fn young_terms(i: &[usize], j: &[usize], d: usize, d2: usize) -> Result<QuadraticRelation, GrassError> {
    if d2 == 0 || d < d2 {
        return Err(GrassError::BadSizes { d, d2 });
    }
    if i.len() != d + 1 || j.len() + 1 != d2 {
        return Err(GrassError::BadLengths { want_i: d + 1, want_j: d2 - 1, got_i: i.len(), got_j: j.len() });
    }
    let mut terms = Vec::new();
    for g in 0..=d {
        let ig = i[g];
        let rest = without(i, g);
        let mut e = PhaseExp::one();
        for x in &rest {
            e.add_q(ig, *x, 1);
        }
        for x in j {
            e.add_q(ig, *x, 1);
        }
        let mut right = vec![ig];
        right.extend_from_slice(j);
        terms.push(MinorProduct { sign: if g % 2 == 0 { 1 } else { -1 }, phase: e, left: rest, right });
    }
    Ok(QuadraticRelation { i: i.to_vec(), j: j.to_vec(), terms })
}

/// Plücker relation terms, `|I| = d+1`, `|J| = d−1`.
pub fn pluecker_terms(i: &[usize], j: &[usize]) -> Result<QuadraticRelation, GrassError> {
    if i.len() < 2 || i.len() != j.len() + 2 {
        let d = i.len().saturating_sub(1).max(1);
        return Err(GrassError::BadLengths { want_i: d + 1, want_j: d - 1, got_i: i.len(), got_j: j.len() });
    }
    let d = i.len() - 1;
    young_terms(i, j, d, d)
}

/// Expands a quadratic relation into the g-algebra.
pub fn expand<D: Deformation>(
    ctx: &QMatrixContext<D>,
    rel: &QuadraticRelation,
) -> Result<QPolynomial<D::Coeff>, GrassError> {
    let mut total = QPolynomial::zero(ctx.n());
    for t in &rel.terms {
        if !t.survives() {
            continue;
        }
        let a = ctx.minor(&rows(t.left.len()), &t.left)?;
        let b = ctx.minor(&rows(t.right.len()), &t.right)?;
        let c = ctx.deformation().sign_phase(t.sign, &t.phase);
        total = total.add(&ctx.mul(&a, &b).scale(&c));
    }
    Ok(total)
}

pub fn pluecker_relation<D: Deformation>(
    ctx: &QMatrixContext<D>,
    i: &[usize],
    j: &[usize],
) -> Result<QPolynomial<D::Coeff>, GrassError> {
    expand(ctx, &pluecker_terms(i, j)?)
}

pub fn young_relation<D: Deformation>(
    ctx: &QMatrixContext<D>,
    i: &[usize],
    j: &[usize],
    d: usize,
    d2: usize,
) -> Result<QPolynomial<D::Coeff>, GrassError> {
    expand(ctx, &young_terms(i, j, d, d2)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationClass {
    /// Every term has a repeated column.
    Trivial,
    Alternating,
    Structure,
    Pluecker,
}

impl RelationClass {
    pub fn name(&self) -> &'static str {
        match self {
            RelationClass::Trivial => "trivial",
            RelationClass::Alternating => "alternating",
            RelationClass::Structure => "structure",
            RelationClass::Pluecker => "pluecker",
        }
    }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

/// Classifies by the surviving terms: two terms on the same ordered pair
/// of coordinates are alternating, two terms on a swapped pair are a
/// structure equation, anything else is a Plücker equation.
pub fn classify_relation(rel: &QuadraticRelation) -> RelationClass {
    let live: Vec<(Vec<usize>, Vec<usize>)> =
        rel.terms.iter().filter(|t| t.survives()).map(|t| (sorted(&t.left), sorted(&t.right))).collect();
    match live.len() {
        0 => RelationClass::Trivial,
        2 if live[0] == live[1] => RelationClass::Alternating,
        2 if live[0].0 == live[1].1 && live[0].1 == live[1].0 => RelationClass::Structure,
        _ => RelationClass::Pluecker,
    }
}

/// Partition sizes `d_i = Σ_{a≤i} γ_a`, omitting the final `d = n`.
pub fn flag_sizes(gamma: &[usize], n: usize) -> Result<Vec<usize>, GrassError> {
    if gamma.is_empty() || gamma.iter().any(|g| *g == 0) || gamma.iter().sum::<usize>() != n {
        return Err(GrassError::BadPartition(gamma.to_vec(), n));
    }
    let mut out = Vec::new();
    let mut acc = 0;
    for g in &gamma[..gamma.len() - 1] {
        acc += g;
        out.push(acc);
    }
    Ok(out)
}

/// Generators `Λ^J` of the flag (or grassmannian) coordinate algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlueckerContext {
    pub n: usize,
    pub sizes: Vec<usize>,
    pub generators: Vec<Vec<usize>>,
}

impl PlueckerContext {
    pub fn grassmannian(d: usize, n: usize) -> Result<Self, GrassError> {
        if d == 0 || d > n {
            return Err(GrassError::BadGrassmannian { d, n });
        }
        Ok(Self::with_sizes(n, vec![d]))
    }

    pub fn flag(gamma: &[usize], n: usize) -> Result<Self, GrassError> {
        Ok(Self::with_sizes(n, flag_sizes(gamma, n)?))
    }

    fn with_sizes(n: usize, sizes: Vec<usize>) -> Self {
        let generators = sizes.iter().flat_map(|d| (1..=n).combinations(*d)).collect();
        PlueckerContext { n, sizes, generators }
    }

    pub fn index(&self, j: &[usize]) -> Option<usize> {
        self.generators.iter().position(|g| g.as_slice() == j)
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| format!("L[{}]", g.iter().join(","))).collect()
    }

    /// `Λ^J Λ^{J'} = phase · Λ^{J'} Λ^J` with rows `(1..|J|)`, `(1..|J'|)`.
    pub fn commutation_exp(&self, a: usize, b: usize) -> PhaseExp {
        let ja = &self.generators[a];
        let jb = &self.generators[b];
        r_coeff_exp(&rows(ja.len()), ja, &rows(jb.len()), jb).expect("equal lengths").pow(2)
    }

    /// A relation rewritten on the sorted generators: normal-ordered
    /// monomials `(a ≤ b)` with `(sign, phase)` contributions.
    pub fn normal_form(&self, rel: &QuadraticRelation) -> BTreeMap<(usize, usize), Vec<(i64, PhaseExp)>> {
        let mut out: BTreeMap<(usize, usize), Vec<(i64, PhaseExp)>> = BTreeMap::new();
        for t in rel.terms.iter().filter(|t| t.survives()) {
            let sign = t.sign * perm_sign(&t.left) * perm_sign(&t.right);
            let (Some(a), Some(b)) = (self.index(&sorted(&t.left)), self.index(&sorted(&t.right))) else {
                continue;
            };
            let (key, phase) =
                if a <= b { ((a, b), t.phase.clone()) } else { ((b, a), t.phase.mul(&self.commutation_exp(a, b))) };
            out.entry(key).or_default().push((sign, phase));
        }
        out
    }

    fn relation_text(&self, nf: &BTreeMap<(usize, usize), Vec<(i64, PhaseExp)>>) -> String {
        let names = self.names();
        let mut parts = Vec::new();
        for ((a, b), cs) in nf {
            for (s, e) in cs {
                let mono = format!("{}*{}", names[*a], names[*b]);
                let body = if e.is_one() { mono } else { format!("{}*{}", e, mono) };
                parts.push((*s, body));
            }
        }
        let mut out = String::new();
        for (k, (s, body)) in parts.into_iter().enumerate() {
            match (k, s < 0) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{}", body)),
                (_, false) => out.push_str(&format!(" + {}", body)),
                (_, true) => out.push_str(&format!(" - {}", body)),
            }
        }
        out
    }

    fn vector_at(&self, nf: &BTreeMap<(usize, usize), Vec<(i64, PhaseExp)>>, pt: &QPoint) -> Vec<u64> {
        let g = self.generators.len();
        let mut v = vec![0u64; g * g];
        for ((a, b), cs) in nf {
            for (s, e) in cs {
                let x = modp::mul(modp::from_i64(*s), pt.eval(e));
                v[a * g + b] = modp::add(v[a * g + b], x);
            }
        }
        v
    }
}

/// Keeps a subset of the relations spanning the same space, by rank at a
/// random specialization of the `q_ij`.
fn independent_relations(pc: &PlueckerContext, rels: Vec<QuadraticRelation>, seed: u64) -> Vec<QuadraticRelation> {
    let pt = QPoint::random(pc.n, seed);
    let mut kept = Vec::new();
    let mut rows_so_far: Vec<Vec<u64>> = Vec::new();
    for r in rels {
        let v = pc.vector_at(&pc.normal_form(&r), &pt);
        if v.iter().all(|x| *x == 0) {
            continue;
        }
        let mut trial = rows_so_far.clone();
        trial.push(v);
        if modp::rank(trial.clone()) > rows_so_far.len() {
            rows_so_far = trial;
            kept.push(r);
        }
    }
    kept
}

/// Map `p_i` forgetting the size `omitted`: the generators of the smaller
/// flag algebra as a subset of this one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub omitted: usize,
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FlagAlgebra {
    pub context: PlueckerContext,
    pub presentation: AlgebraPresentation,
    pub relations: Vec<QuadraticRelation>,
    pub truncations: Vec<Truncation>,
}

impl FlagAlgebra {
    pub fn to_json(&self) -> Value {
        let mut v = self.presentation.to_json();
        v["sizes"] = json!(self.context.sizes);
        if !self.truncations.is_empty() {
            v["truncations"] = Value::Array(
                self.truncations.iter().map(|t| json!({"omitted": t.omitted, "generators": t.generators})).collect(),
            );
        }
        v
    }
}

fn assemble(pc: PlueckerContext, kind: &str, rels: Vec<QuadraticRelation>) -> FlagAlgebra {
    let mut comm = Vec::new();
    for a in 0..pc.generators.len() {
        for b in (a + 1)..pc.generators.len() {
            comm.push(Commutation { a, b, phase: pc.commutation_exp(a, b) });
        }
    }
    let rels = independent_relations(&pc, rels, 0x5eed);
    let texts = rels.iter().map(|r| pc.relation_text(&pc.normal_form(r))).collect();
    let mut truncations = Vec::new();
    if pc.sizes.len() > 1 {
        for d in &pc.sizes {
            let gens = (0..pc.generators.len()).filter(|g| pc.generators[*g].len() != *d).collect();
            truncations.push(Truncation { omitted: *d, generators: gens });
        }
    }
    let presentation = AlgebraPresentation {
        kind: kind.into(),
        generators: pc.names(),
        commutation: comm,
        relations: texts,
        ..Default::default()
    };
    FlagAlgebra { context: pc, presentation, relations: rels, truncations }
}

fn admissible_relations(n: usize, d: usize, d2: usize) -> Vec<QuadraticRelation> {
    let mut out = Vec::new();
    for i in (1..=n).combinations(d + 1) {
        for j in (1..=n).combinations(d2 - 1) {
            let r = young_terms(&i, &j, d, d2).expect("sizes checked");
            if classify_relation(&r) == RelationClass::Pluecker {
                out.push(r);
            }
        }
    }
    out
}

/// Homogeneous coordinate algebra of Gr_θ(d;n): the `Λ^J`, their
/// commutation phases and an independent set of Plücker relations.
pub fn grassmannian_algebra(d: usize, n: usize) -> Result<FlagAlgebra, GrassError> {
    let pc = PlueckerContext::grassmannian(d, n)?;
    let rels = if d < n { admissible_relations(n, d, d) } else { Vec::new() };
    Ok(assemble(pc, "grassmannian", rels))
}

/// Coordinate algebra of the flag variety of the partition γ.
pub fn flag_algebra(gamma: &[usize], n: usize) -> Result<FlagAlgebra, GrassError> {
    let pc = PlueckerContext::flag(gamma, n)?;
    let mut rels = Vec::new();
    for (a, d) in pc.sizes.iter().enumerate() {
        for d2 in &pc.sizes[..=a] {
            rels.extend(admissible_relations(n, *d, *d2));
        }
    }
    Ok(assemble(pc, "flag", rels))
}

/// Outcome of solving `Θ^{JJ'} = Σ θ^{j_α j'_β} mod 2π` for θ.
#[derive(Debug, Clone)]
pub enum Embedding {
    Compatible(ThetaSpec<f64>),
    Incompatible { witness: (Vec<usize>, Vec<usize>), residual: f64 },
}

/// Finds a θ with the given Θ, or a pair (J,J') on which every solution fails.
pub fn embedding_compatible(big: &[Vec<Complex<f64>>], d: usize, n: usize) -> Result<Embedding, GrassError> {
    let subsets: Vec<Vec<usize>> = (1..=n).combinations(d).collect();
    let size = subsets.len();
    if big.len() != size || big.iter().any(|r| r.len() != size) {
        return Err(GrassError::BadThetaSize { got: big.len(), want: size });
    }
    let m = pair_count(n);
    let mut a: Vec<Vec<i64>> = Vec::new();
    let mut rhs = Vec::new();
    let mut labels = Vec::new();
    for x in 0..size {
        for y in (x + 1)..size {
            let mut row = vec![0i64; m];
            for p in &subsets[x] {
                for q in &subsets[y] {
                    match p.cmp(q) {
                        std::cmp::Ordering::Less => row[pair_index(p - 1, q - 1)] += 1,
                        std::cmp::Ordering::Greater => row[pair_index(q - 1, p - 1)] -= 1,
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
            a.push(row);
            rhs.push(big[x][y]);
            labels.push((subsets[x].clone(), subsets[y].clone()));
        }
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let (dm, u, v) = intlin::smith(&a, m);
    let rank = (0..dm.len().min(m)).take_while(|&i| dm[i][i] != 0).count();
    let mut y = vec![Complex::new(0.0, 0.0); m];
    for (i, row) in u.iter().enumerate() {
        let b: Complex<f64> = row.iter().zip(&rhs).map(|(c, r)| r * (*c as f64)).sum();
        if i < rank {
            y[i] = b / dm[i][i] as f64;
        } else {
            let off = b.re - two_pi * (b.re / two_pi).round();
            let residual = off.abs().max(b.im.abs());
            if residual > 1e-8 {
                let k = row.iter().position(|c| *c != 0).unwrap_or(0);
                return Ok(Embedding::Incompatible { witness: labels[k].clone(), residual });
            }
        }
    }
    let mut values = vec![Complex::new(0.0, 0.0); m];
    for (k, val) in values.iter_mut().enumerate() {
        *val = (0..m).map(|t| y[t] * v[k][t] as f64).sum();
    }
    let mut full = vec![Complex::new(0.0, 0.0); n * n];
    for (k, val) in values.iter().enumerate() {
        let (i, j) = pair_of_index(k);
        full[i * n + j] = *val;
        full[j * n + i] = -*val;
    }
    Ok(Embedding::Compatible(ThetaSpec::numeric(n, full)?))
}

/// `Θ` as a numeric matrix over the ordered d-subsets.
pub fn theta_capital_matrix(theta: &ThetaSpec<f64>, d: usize) -> Result<Vec<Vec<Complex<f64>>>, GrassError> {
    let subsets: Vec<Vec<usize>> = (1..=theta.n()).combinations(d).collect();
    subsets.iter().map(|a| subsets.iter().map(|b| theta_capital_value(theta, a, b)).collect()).collect()
}

/// One relation `Σ_α (∏_β q_{j_α j^α_β}) (−1)^α Λ^{J^α} w_{j_α} = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TautRelation {
    pub j: Vec<usize>,
    /// `(sign, phase, columns of the minor, index of w)`.
    pub terms: Vec<(i64, PhaseExp, Vec<usize>, usize)>,
}

impl TautRelation {
    /// Substitutes `w_j ↦ w(j)` and expands.
    pub fn evaluate<D: Deformation>(
        &self,
        ctx: &QMatrixContext<D>,
        w: &dyn Fn(usize) -> Result<QPolynomial<D::Coeff>, GrassError>,
    ) -> Result<QPolynomial<D::Coeff>, GrassError> {
        let mut total = QPolynomial::zero(ctx.n());
        for (s, e, cols, k) in &self.terms {
            let m = ctx.minor(&rows(cols.len()), cols)?;
            total = total.add(&ctx.mul(&m, &w(*k)?).scale(&ctx.deformation().sign_phase(*s, e)));
        }
        Ok(total)
    }
}

pub fn taut_section_relations(d: usize, n: usize) -> Vec<TautRelation> {
    let mut out = Vec::new();
    for j in (1..=n).combinations(d + 1) {
        let mut terms = Vec::new();
        for a in 0..=d {
            let rest = without(&j, a);
            let mut e = PhaseExp::one();
            for x in &rest {
                e.add_q(j[a], *x, 1);
            }
            // (−1)^α with α one-based
            terms.push((if a % 2 == 0 { -1 } else { 1 }, e, rest, j[a]));
        }
        out.push(TautRelation { j, terms });
    }
    out
}

/// The normalized section `w_j = (∏_β q_{j k_β}) Λ^{j ∪ K}`.
pub fn taut_section_from_minor<D: Deformation>(
    ctx: &QMatrixContext<D>,
    k: &[usize],
    j: usize,
) -> Result<QPolynomial<D::Coeff>, GrassError> {
    let mut cols = vec![j];
    cols.extend_from_slice(k);
    let mut e = PhaseExp::one();
    for x in k {
        e.add_q(j, *x, 1);
    }
    Ok(ctx.minor(&rows(cols.len()), &cols)?.scale(&ctx.phase(&e)))
}

type Matrix<C> = Vec<Vec<QPolynomial<C>>>;

/// The coinvariant generators `η`, `η⊥` and their rescalings `η̂`, `η̂⊥`.
pub struct CoinvariantAlgebra<C> {
    pub d: usize,
    pub n: usize,
    pub antipode: Matrix<C>,
    pub eta: Matrix<C>,
    pub eta_perp: Matrix<C>,
    pub eta_hat: Matrix<C>,
    pub eta_hat_perp: Matrix<C>,
}

/// `η_ij = Σ_{k≤d} S(g_ik) ·₀ g_kj`, with `·₀` the untwisted product, so
/// that `η̂_ij = q_ij^{-1} η_ij = Σ_{k≤d} S(g_ik) ⋆ g_kj`.
pub fn eta_matrix<D: Deformation>(
    ctx: &QMatrixContext<D>,
    d: usize,
) -> Result<CoinvariantAlgebra<D::Coeff>, GrassError> {
    let n = ctx.n();
    if d == 0 || d > n {
        return Err(GrassError::BadGrassmannian { d, n });
    }
    let s: Matrix<D::Coeff> = (1..=n)
        .map(|i| (1..=n).map(|k| ctx.antipode_entry(i, k)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let mut eta = Vec::new();
    let mut eta_perp = Vec::new();
    let mut eta_hat = Vec::new();
    let mut eta_hat_perp = Vec::new();
    for i in 1..=n {
        let mut row = Vec::new();
        let mut prow = Vec::new();
        let mut hrow = Vec::new();
        let mut hprow = Vec::new();
        for j in 1..=n {
            let mut e = QPolynomial::zero(n);
            for k in 1..=d {
                e = e.add(&ctx.untwisted_mul(&s[i - 1][k - 1], &ctx.generator(k, j)?));
            }
            let delta = if i == j { QPolynomial::one(n) } else { QPolynomial::zero(n) };
            let qinv = ctx.phase(&PhaseExp::q(i, j).inv());
            let p = delta.sub(&e);
            hrow.push(e.scale(&qinv));
            hprow.push(p.scale(&qinv));
            row.push(e);
            prow.push(p);
        }
        eta.push(row);
        eta_perp.push(prow);
        eta_hat.push(hrow);
        eta_hat_perp.push(hprow);
    }
    Ok(CoinvariantAlgebra { d, n, antipode: s, eta, eta_perp, eta_hat, eta_hat_perp })
}

fn record(out: &mut Vec<IdentityCheck>, name: &str, failures: Vec<String>) {
    out.push(IdentityCheck::from_failures(name, failures));
}

fn matrix_product<D: Deformation>(
    ctx: &QMatrixContext<D>,
    a: &Matrix<D::Coeff>,
    b: &Matrix<D::Coeff>,
    i: usize,
    j: usize,
    untwisted: bool,
) -> QPolynomial<D::Coeff> {
    let mut s = QPolynomial::zero(ctx.n());
    for m in 0..ctx.n() {
        let p = if untwisted { ctx.untwisted_mul(&a[i][m], &b[m][j]) } else { ctx.mul(&a[i][m], &b[m][j]) };
        s = s.add(&p);
    }
    s
}

fn projector_checks<D: Deformation>(
    ctx: &QMatrixContext<D>,
    out: &mut Vec<IdentityCheck>,
    label: &str,
    p: &Matrix<D::Coeff>,
    pp: &Matrix<D::Coeff>,
    d: usize,
    untwisted: bool,
) {
    let n = ctx.n();
    for (name, x, y, rank) in [("", p, pp, d), ("perp ", pp, p, n - d)] {
        let mut idem = Vec::new();
        let mut orth = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !ctx.equals(&matrix_product(ctx, x, x, i, j, untwisted), &x[i][j]) {
                    idem.push(format!("({},{})", i + 1, j + 1));
                }
                if !ctx.equals(&matrix_product(ctx, x, y, i, j, untwisted), &QPolynomial::zero(n)) {
                    orth.push(format!("({},{})", i + 1, j + 1));
                }
            }
        }
        record(out, &format!("{} {}idempotent", label, name), idem);
        record(out, &format!("{} {}orthogonal", label, name), orth);
        let mut tr = QPolynomial::zero(n);
        for i in 0..n {
            tr = tr.add(&x[i][i]);
        }
        let target = QPolynomial::constant(n, <D::Coeff as crate::scalars::Coefficient>::from_ratio(rank as i64, 1));
        let bad = if ctx.equals(&tr, &target) { vec![] } else { vec![format!("trace {}", tr)] };
        record(out, &format!("{} {}trace", label, name), bad);
    }
}

fn commutation_checks<D: Deformation>(
    ctx: &QMatrixContext<D>,
    out: &mut Vec<IdentityCheck>,
    label: &str,
    a: &Matrix<D::Coeff>,
    b: &Matrix<D::Coeff>,
) {
    let n = ctx.n();
    let mut bad = Vec::new();
    for (i, j, i2, j2) in (0..n)
        .cartesian_product(0..n)
        .cartesian_product((0..n).cartesian_product(0..n))
        .map(|((a, b), (c, d))| (a, b, c, d))
    {
        let k2 = crate::scalars::k_coeff_exp(i + 1, j + 1, i2 + 1, j2 + 1).pow(2);
        let lhs = ctx.mul(&a[i][j], &b[i2][j2]);
        let rhs = ctx.mul(&b[i2][j2], &a[i][j]).scale(&ctx.phase(&k2));
        if !ctx.equals(&lhs, &rhs) {
            bad.push(format!("({},{};{},{})", i + 1, j + 1, i2 + 1, j2 + 1));
        }
    }
    record(out, label, bad);
}

/// The identities of the coinvariant algebra, each with a witness on failure.
pub fn eta_checks<D: Deformation>(ctx: &QMatrixContext<D>, c: &CoinvariantAlgebra<D::Coeff>) -> Vec<IdentityCheck> {
    let n = ctx.n();
    let mut out = Vec::new();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut s = QPolynomial::zero(n);
            for k in 0..n {
                s = s.add(&ctx.mul(&c.antipode[i][k], &ctx.generator(k + 1, j + 1).expect("in range")));
            }
            let delta = if i == j { QPolynomial::one(n) } else { QPolynomial::zero(n) };
            if !ctx.equals(&s, &delta) {
                bad.push(format!("({},{})", i + 1, j + 1));
            }
        }
    }
    record(&mut out, "antipode orthogonality", bad);
    projector_checks(ctx, &mut out, "eta (untwisted)", &c.eta, &c.eta_perp, c.d, true);
    projector_checks(ctx, &mut out, "eta-hat", &c.eta_hat, &c.eta_hat_perp, c.d, false);

    commutation_checks(ctx, &mut out, "eta eta commutation", &c.eta, &c.eta);
    commutation_checks(ctx, &mut out, "eta-perp eta-perp commutation", &c.eta_perp, &c.eta_perp);
    commutation_checks(ctx, &mut out, "eta eta-perp commutation", &c.eta, &c.eta_perp);
    commutation_checks(ctx, &mut out, "eta-hat commutation", &c.eta_hat, &c.eta_hat);
    commutation_checks(ctx, &mut out, "eta-hat eta-hat-perp commutation", &c.eta_hat, &c.eta_hat_perp);

    // η ⋆ η' = K · (η ·₀ η')
    let mut bad = Vec::new();
    for (i, j, i2, j2) in (0..n)
        .cartesian_product(0..n)
        .cartesian_product((0..n).cartesian_product(0..n))
        .map(|((a, b), (c, d))| (a, b, c, d))
    {
        let k = crate::scalars::k_coeff_exp(i + 1, j + 1, i2 + 1, j2 + 1);
        let lhs = ctx.mul(&c.eta[i][j], &c.eta[i2][j2]);
        let rhs = ctx.untwisted_mul(&c.eta[i][j], &c.eta[i2][j2]).scale(&ctx.phase(&k));
        if !ctx.equals(&lhs, &rhs) {
            bad.push(format!("({},{};{},{})", i + 1, j + 1, i2 + 1, j2 + 1));
        }
    }
    record(&mut out, "eta twisted product", bad);

    // H_a ▷ η_ij = (δ_aj − δ_ai) η_ij: the column weight of every term is e_j − e_i
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut want = vec![0i64; n];
            want[j] += 1;
            want[i] -= 1;
            for (m, _) in c.eta[i][j].terms() {
                let (r, col) = ctx.bidegree(m);
                if col != want || r.iter().any(|x| *x != 0) {
                    bad.push(format!("({},{})", i + 1, j + 1));
                    break;
                }
            }
        }
    }
    record(&mut out, "eta torus weights", bad);
    out
}

/// Whether Θ's squared phase equals the minor commutation factor for all
/// pairs of d-subsets.
pub fn theta_matches_commutation(d: usize, n: usize) -> bool {
    let pc = PlueckerContext::with_sizes(n, vec![d]);
    let g = pc.generators.len();
    (0..g).all(|a| {
        (0..g).all(|b| {
            a == b
                || theta_capital_exp(&pc.generators[a], &pc.generators[b]).unwrap().pow(2) == pc.commutation_exp(a, b)
        })
    })
}
