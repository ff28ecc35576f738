//! The quantum Laurent algebra, deformed chart algebras of cones, their
//! gluing data, torus weights and first-order differential calculus on
//! free charts.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fan::{self, Cone, FanError, LatticePoint, RelationLattice};
use crate::presentation::{numbered, AlgebraPresentation, Binomial, Commutation};
use num_traits::One;

use crate::scalars::{Coefficient, Deformation, PhaseExp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("cone is not strongly convex")]
    NotStronglyConvex,
    #[error("the given cone is not a common face")]
    NotAFace,
    #[error("the given generators do not generate the dual semigroup")]
    BadGenerators,
    #[error("chart has binomial relations; differential forms need a free chart")]
    NotFree,
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// Exponent of the star-product phase `χ_p ⋆ χ_q = ∏_{i<j} q_ij^{p_i q_j − p_j q_i} χ_{p+q}`.
pub fn star_phase(p: &[i64], q: &[i64]) -> PhaseExp {
    let n = p.len();
    let mut e = PhaseExp::one();
    for j in 1..n {
        for i in 0..j {
            let k = p[i] * q[j] - p[j] * q[i];
            if k != 0 {
                e.add_q(i + 1, j + 1, k as i32);
            }
        }
    }
    e
}

/// Finite sum of characters `Σ c_p χ_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentElement<C> {
    n: usize,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> LaurentElement<C> {
    pub fn zero(n: usize) -> Self {
        LaurentElement { n, terms: BTreeMap::new() }
    }

    pub fn character(p: Vec<i64>) -> Self {
        Self::monomial(C::one(), p)
    }

    pub fn monomial(c: C, p: Vec<i64>) -> Self {
        let mut e = Self::zero(p.len());
        e.add_term(p, c);
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: Vec<i64>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&p) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(p, s);
                }
            }
            None => {
                self.terms.insert(p, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), -c.clone());
        }
        out
    }

    /// Largest coefficient magnitude of `self − other`.
    pub fn residual(&self, other: &Self) -> f64 {
        self.sub(other).terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Equality up to the coefficient tolerance.
    pub fn equals(&self, other: &Self) -> bool {
        self.residual(other) <= C::tolerance()
    }

    /// Torus weight of each term; an element is homogeneous if all agree.
    pub fn weights(&self) -> Vec<&Vec<i64>> {
        self.terms.keys().collect()
    }
}

/// `a ⋆ b`, bilinear in the character basis.
pub fn star<D: Deformation>(
    def: &D,
    a: &LaurentElement<D::Coeff>,
    b: &LaurentElement<D::Coeff>,
) -> Result<LaurentElement<D::Coeff>, TorusError> {
    if a.n != b.n {
        return Err(TorusError::RankMismatch(a.n, b.n));
    }
    if a.n > def.n() {
        return Err(TorusError::RankMismatch(a.n, def.n()));
    }
    let mut out = LaurentElement::zero(a.n);
    for (p, c1) in &a.terms {
        for (q, c2) in &b.terms {
            let sum: Vec<i64> = p.iter().zip(q).map(|(x, y)| x + y).collect();
            let c = def.phase(&star_phase(p, q)) * c1.clone() * c2.clone();
            out.add_term(sum, c);
        }
    }
    Ok(out)
}

/// Deformed coordinate algebra of a cone, on the generators of σ∨ ∩ L*.
#[derive(Debug, Clone)]
pub struct ChartAlgebra {
    cone: Cone,
    generators: Vec<LatticePoint>,
    check: Vec<Vec<PhaseExp>>,
    relations: RelationLattice,
}

/// `q̌_ab = ∏_{i<j} q_ij^{(m_a)_i (m_b)_j − (m_a)_j (m_b)_i}`.
pub fn check_q(ma: &[i64], mb: &[i64]) -> PhaseExp {
    star_phase(ma, mb)
}

impl ChartAlgebra {
    /// Chart on the computed generators of σ∨ ∩ L*.
    pub fn new(cone: &Cone) -> Result<ChartAlgebra, TorusError> {
        if !cone.is_strongly_convex() {
            return Err(TorusError::NotStronglyConvex);
        }
        let gens = fan::semigroup_generators(cone)?;
        Ok(Self::build(cone.clone(), gens))
    }

    /// Chart on a caller-chosen generating set (e.g. a displayed ordering);
    /// checked to generate σ∨ ∩ L* within `bound`.
    pub fn with_generators(cone: &Cone, gens: Vec<LatticePoint>, bound: i64) -> Result<ChartAlgebra, TorusError> {
        if !cone.is_strongly_convex() {
            return Err(TorusError::NotStronglyConvex);
        }
        if !fan::generates_dual_semigroup(cone, &gens, bound)? {
            return Err(TorusError::BadGenerators);
        }
        Ok(Self::build(cone.clone(), gens))
    }

    fn build(cone: Cone, gens: Vec<LatticePoint>) -> ChartAlgebra {
        let check = gens.iter().map(|a| gens.iter().map(|b| check_q(a, b)).collect()).collect();
        let relations = fan::relation_lattice(&gens);
        ChartAlgebra { cone, generators: gens, check, relations }
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn n(&self) -> usize {
        self.cone.n()
    }

    pub fn generators(&self) -> &[LatticePoint] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn check_theta(&self) -> &[Vec<PhaseExp>] {
        &self.check
    }

    pub fn relation_lattice(&self) -> &RelationLattice {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.relations.is_empty()
    }

    /// `x_a x_b = q̌_ab² x_b x_a` for `a < b`.
    pub fn commutation_relations(&self) -> Vec<Commutation> {
        let l = self.len();
        let mut out = Vec::new();
        for a in 0..l {
            for b in (a + 1)..l {
                out.push(Commutation { a, b, phase: self.check[a][b].pow(2) });
            }
        }
        out
    }

    /// `x^p = (∏_{a<b} q̌_ab^{p_a p_b − r_a r_b}) x^r` for each kernel relation.
    pub fn binomial_relations(&self) -> Vec<Binomial> {
        self.relations
            .relations
            .iter()
            .map(|(p, r)| Binomial { lhs: p.clone(), rhs: r.clone(), phase: self.excon_phase(p, r) })
            .collect()
    }

    pub fn excon_phase(&self, p: &[i64], r: &[i64]) -> PhaseExp {
        let l = self.len();
        let mut e = PhaseExp::one();
        for a in 0..l {
            for b in (a + 1)..l {
                let k = p[a] * p[b] - r[a] * r[b];
                if k != 0 {
                    e = e.mul(&self.check[a][b].pow(k as i32));
                }
            }
        }
        e
    }

    /// Sorts a word of generator powers into index order. Moving `x_a^k`
    /// to the right of `x_b^l` (`a > b`) costs `q̌_ab^{2kl}`.
    pub fn normal_form(&self, word: &[(usize, i64)]) -> (PhaseExp, Vec<i64>) {
        let mut letters: Vec<(usize, i64)> = word.to_vec();
        let mut e = PhaseExp::one();
        // bubble sort, one adjacent transposition at a time
        let mut swapped = true;
        while swapped {
            swapped = false;
            for s in 1..letters.len() {
                let (a, k) = letters[s - 1];
                let (b, l) = letters[s];
                if a > b {
                    e = e.mul(&self.check[a][b].pow((2 * k * l) as i32));
                    letters.swap(s - 1, s);
                    swapped = true;
                }
            }
        }
        let mut exps = vec![0i64; self.len()];
        for (a, k) in letters {
            exps[a] += k;
        }
        (e, exps)
    }

    /// The ordered monomial `x_1^{α_1} ⋯ x_l^{α_l}` as a phase times a
    /// character of the torus.
    pub fn to_character(&self, alpha: &[i64]) -> (PhaseExp, Vec<i64>) {
        let n = self.n();
        let mut e = PhaseExp::one();
        for a in 0..alpha.len() {
            for b in (a + 1)..alpha.len() {
                let k = alpha[a] * alpha[b];
                if k != 0 {
                    e = e.mul(&self.check[a][b].pow(k as i32));
                }
            }
        }
        let mut p = vec![0i64; n];
        for (a, k) in alpha.iter().enumerate() {
            for i in 0..n {
                p[i] += k * self.generators[a][i];
            }
        }
        (e, p)
    }

    /// The same monomial computed by iterated star products of the
    /// generator characters.
    pub fn to_character_by_star(&self, alpha: &[i64]) -> (PhaseExp, Vec<i64>) {
        let n = self.n();
        let mut e = PhaseExp::one();
        let mut p = vec![0i64; n];
        for (a, k) in alpha.iter().enumerate() {
            let step = if *k >= 0 { 1 } else { -1 };
            let m: Vec<i64> = self.generators[a].iter().map(|x| x * step).collect();
            for _ in 0..k.abs() {
                e = e.mul(&star_phase(&p, &m));
                for i in 0..n {
                    p[i] += m[i];
                }
            }
        }
        (e, p)
    }

    /// Weight of `x^α` under `H_i` (zero-based `i`).
    pub fn weight(&self, alpha: &[i64], i: usize) -> i64 {
        alpha.iter().zip(&self.generators).map(|(k, m)| k * m[i]).sum()
    }

    pub fn weight_vector(&self, alpha: &[i64]) -> Vec<i64> {
        (0..self.n()).map(|i| self.weight(alpha, i)).collect()
    }

    pub fn presentation(&self) -> AlgebraPresentation {
        AlgebraPresentation {
            kind: "chart".into(),
            generators: numbered("x", self.len()),
            weights: self.generators.clone(),
            commutation: self.commutation_relations(),
            binomials: self.binomial_relations(),
            relations: Vec::new(),
        }
    }
}

/// Weight of a character under `H_i`.
pub fn weight(p: &[i64], i: usize) -> i64 {
    p[i]
}

/// One identification `x^u ⋆ x'^{u'} = phase · x^v ⋆ x'^{v'}` between the
/// generators of two charts over their common face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingIdentity {
    pub u: Vec<i64>,
    pub u2: Vec<i64>,
    pub v: Vec<i64>,
    pub v2: Vec<i64>,
    pub phase: PhaseExp,
}

/// Kernel relations among the combined generators of two charts, with the
/// phase assembled from the q̌, q̌' and cross q̌° factors.
pub fn gluing_relations(a: &ChartAlgebra, b: &ChartAlgebra, tau: &Cone) -> Result<Vec<GluingIdentity>, TorusError> {
    if a.n() != b.n() {
        return Err(TorusError::RankMismatch(a.n(), b.n()));
    }
    if !fan::is_face(tau, a.cone()) || !fan::is_face(tau, b.cone()) {
        return Err(TorusError::NotAFace);
    }
    if !fan::intersect(a.cone(), b.cone()).same_as(tau) {
        return Err(TorusError::NotAFace);
    }
    let l = a.len();
    let mut combined = a.generators().to_vec();
    combined.extend(b.generators().iter().cloned());
    let rel = fan::relation_lattice(&combined);
    let cross: Vec<Vec<PhaseExp>> =
        a.generators().iter().map(|ma| b.generators().iter().map(|mb| check_q(ma, mb)).collect()).collect();
    let mut out = Vec::new();
    for (p, r) in rel.relations {
        let (u, u2) = (p[..l].to_vec(), p[l..].to_vec());
        let (v, v2) = (r[..l].to_vec(), r[l..].to_vec());
        let mut phase = a.excon_phase(&u, &v).mul(&b.excon_phase(&u2, &v2));
        for (i, row) in cross.iter().enumerate() {
            for (j, q) in row.iter().enumerate() {
                let k = u[i] * u2[j] - v[i] * v2[j];
                if k != 0 {
                    phase = phase.mul(&q.pow(k as i32));
                }
            }
        }
        out.push(GluingIdentity { u, u2, v, v2, phase });
    }
    Ok(out)
}

/// Recomputes both sides of a gluing identity by star products in the
/// torus and checks they agree.
pub fn verify_gluing(a: &ChartAlgebra, b: &ChartAlgebra, g: &GluingIdentity) -> bool {
    let side = |x: &[i64], y: &[i64]| {
        let (e1, p1) = a.to_character_by_star(x);
        let (e2, p2) = b.to_character_by_star(y);
        let e = e1.mul(&e2).mul(&star_phase(&p1, &p2));
        let p: Vec<i64> = p1.iter().zip(&p2).map(|(s, t)| s + t).collect();
        (e, p)
    };
    let (el, pl) = side(&g.u, &g.u2);
    let (er, pr) = side(&g.v, &g.v2);
    pl == pr && el == g.phase.mul(&er)
}

/// First-order differential calculus on a free chart: one-forms are sums of
/// `c · x^α dx_b` in normal form.
#[derive(Debug, Clone)]
pub struct Kaehler {
    chart: ChartAlgebra,
}

/// Chart element `Σ c_α x^α`, normal-ordered, α ≥ 0.
pub type ChartElement<C> = BTreeMap<Vec<i64>, C>;
/// One-form `Σ c_{α,b} x^α dx_b`.
pub type OneForm<C> = BTreeMap<(Vec<i64>, usize), C>;

fn add_into<K: Ord, C: Coefficient>(m: &mut BTreeMap<K, C>, k: K, c: C) {
    if c.is_zero() {
        return;
    }
    match m.remove(&k) {
        Some(old) => {
            let s = old + c;
            if !s.is_zero() {
                m.insert(k, s);
            }
        }
        None => {
            m.insert(k, c);
        }
    }
}

pub fn form_residual<K: Ord + Clone, C: Coefficient>(a: &BTreeMap<K, C>, b: &BTreeMap<K, C>) -> f64 {
    let mut d = a.clone();
    for (k, c) in b {
        add_into(&mut d, k.clone(), -c.clone());
    }
    d.values().map(|c| c.magnitude()).fold(0.0, f64::max)
}

impl Kaehler {
    pub fn new(chart: &ChartAlgebra) -> Result<Kaehler, TorusError> {
        if !chart.is_free() {
            return Err(TorusError::NotFree);
        }
        Ok(Kaehler { chart: chart.clone() })
    }

    pub fn chart(&self) -> &ChartAlgebra {
        &self.chart
    }

    /// Phase of `x^α · x^β = phase · x^{α+β}`.
    fn mono_mul_phase(&self, alpha: &[i64], beta: &[i64]) -> PhaseExp {
        let mut e = PhaseExp::one();
        for a in 0..alpha.len() {
            for b in 0..a {
                let k = 2 * alpha[a] * beta[b];
                if k != 0 {
                    e = e.mul(&self.chart.check[a][b].pow(k as i32));
                }
            }
        }
        e
    }

    /// Phase of `dx_b · x^β = phase · x^β dx_b`.
    fn d_past_phase(&self, b: usize, beta: &[i64]) -> PhaseExp {
        let mut e = PhaseExp::one();
        for (c, k) in beta.iter().enumerate() {
            if *k != 0 {
                e = e.mul(&self.chart.check[b][c].pow((2 * k) as i32));
            }
        }
        e
    }

    pub fn mul<D: Deformation>(
        &self,
        def: &D,
        f: &ChartElement<D::Coeff>,
        g: &ChartElement<D::Coeff>,
    ) -> ChartElement<D::Coeff> {
        let mut out = BTreeMap::new();
        for (a, c1) in f {
            for (b, c2) in g {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                add_into(&mut out, s, def.phase(&self.mono_mul_phase(a, b)) * c1.clone() * c2.clone());
            }
        }
        out
    }

    /// `ω · g` for a one-form ω.
    pub fn form_mul_right<D: Deformation>(
        &self,
        def: &D,
        w: &OneForm<D::Coeff>,
        g: &ChartElement<D::Coeff>,
    ) -> OneForm<D::Coeff> {
        let mut out = BTreeMap::new();
        for ((a, b), c1) in w {
            for (beta, c2) in g {
                // x^α dx_b x^β = phase(dx_b past x^β) x^α x^β dx_b
                let e = self.d_past_phase(*b, beta).mul(&self.mono_mul_phase(a, beta));
                let s: Vec<i64> = a.iter().zip(beta).map(|(x, y)| x + y).collect();
                add_into(&mut out, (s, *b), def.phase(&e) * c1.clone() * c2.clone());
            }
        }
        out
    }

    /// `f · ω` for a one-form ω.
    pub fn form_mul_left<D: Deformation>(
        &self,
        def: &D,
        f: &ChartElement<D::Coeff>,
        w: &OneForm<D::Coeff>,
    ) -> OneForm<D::Coeff> {
        let mut out = BTreeMap::new();
        for (alpha, c1) in f {
            for ((a, b), c2) in w {
                let e = self.mono_mul_phase(alpha, a);
                let s: Vec<i64> = alpha.iter().zip(a).map(|(x, y)| x + y).collect();
                add_into(&mut out, (s, *b), def.phase(&e) * c1.clone() * c2.clone());
            }
        }
        out
    }

    /// `d(x^α)` by the Leibniz rule over the ordered word
    /// `x_1 ⋯ x_1 x_2 ⋯ x_l`.
    pub fn d_monomial<D: Deformation>(&self, def: &D, alpha: &[i64]) -> OneForm<D::Coeff> {
        let l = alpha.len();
        let mut word = Vec::new();
        for (a, k) in alpha.iter().enumerate() {
            assert!(*k >= 0, "differentials are defined on polynomial monomials");
            for _ in 0..*k {
                word.push(a);
            }
        }
        let mut out = BTreeMap::new();
        for s in 0..word.len() {
            let mut left = vec![0i64; l];
            for &a in &word[..s] {
                left[a] += 1;
            }
            let mut right = vec![0i64; l];
            for &a in &word[s + 1..] {
                right[a] += 1;
            }
            let b = word[s];
            let e = self.d_past_phase(b, &right).mul(&self.mono_mul_phase(&left, &right));
            let tot: Vec<i64> = left.iter().zip(&right).map(|(x, y)| x + y).collect();
            add_into(&mut out, (tot, b), def.phase(&e));
        }
        out
    }

    pub fn d<D: Deformation>(&self, def: &D, f: &ChartElement<D::Coeff>) -> OneForm<D::Coeff> {
        let mut out = BTreeMap::new();
        for (alpha, c) in f {
            for (k, v) in self.d_monomial(def, alpha) {
                add_into(&mut out, k, v * c.clone());
            }
        }
        out
    }

    /// Residual of `d(fg) − (df)g − f(dg)`.
    pub fn leibniz_residual<D: Deformation>(
        &self,
        def: &D,
        f: &ChartElement<D::Coeff>,
        g: &ChartElement<D::Coeff>,
    ) -> f64 {
        let lhs = self.d(def, &self.mul(def, f, g));
        let mut rhs = self.form_mul_right(def, &self.d(def, f), g);
        for (k, v) in self.form_mul_left(def, f, &self.d(def, g)) {
            add_into(&mut rhs, k, v);
        }
        form_residual(&lhs, &rhs)
    }

    /// Ω¹ as a bimodule presentation: `x_a · dx_b = q̌_ab² dx_b · x_a`.
    pub fn presentation(&self) -> AlgebraPresentation {
        let l = self.chart.len();
        let mut gens = numbered("x", l);
        gens.extend(numbered("dx", l));
        let mut comm = Vec::new();
        for a in 0..l {
            for b in (a + 1)..l {
                comm.push(Commutation { a, b, phase: self.chart.check[a][b].pow(2) });
            }
        }
        for a in 0..l {
            for b in 0..l {
                comm.push(Commutation { a, b: l + b, phase: self.chart.check[a][b].pow(2) });
            }
        }
        let mut weights = self.chart.generators.clone();
        weights.extend(self.chart.generators.iter().cloned());
        AlgebraPresentation {
            kind: "kaehler".into(),
            generators: gens,
            weights,
            commutation: comm,
            binomials: Vec::new(),
            relations: (1..=l).map(|a| format!("d(x{}) = dx{}", a, a)).collect(),
        }
    }
}

/// Result of a randomized Leibniz check.
#[derive(Debug, Clone)]
pub struct LeibnizReport {
    pub trials: usize,
    pub max_residual: f64,
    pub failures: Vec<(Vec<i64>, Vec<i64>)>,
}

/// `d(f⋆g) = (df)⋆g + f⋆(dg)` on random monomial pairs with exponents ≤ 3.
pub fn verify_leibniz<D: Deformation>(def: &D, k: &Kaehler, trials: usize, seed: u64) -> LeibnizReport {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let l = k.chart.len();
    let mut max_residual: f64 = 0.0;
    let mut failures = Vec::new();
    for _ in 0..trials {
        let a: Vec<i64> = (0..l).map(|_| rng.gen_range(0..4)).collect();
        let b: Vec<i64> = (0..l).map(|_| rng.gen_range(0..4)).collect();
        let f: ChartElement<D::Coeff> = [(a.clone(), D::Coeff::one())].into_iter().collect();
        let g: ChartElement<D::Coeff> = [(b.clone(), D::Coeff::one())].into_iter().collect();
        let r = k.leibniz_residual(def, &f, &g);
        max_residual = max_residual.max(r);
        if r > D::Coeff::tolerance() {
            failures.push((a, b));
        }
    }
    LeibnizReport { trials, max_residual, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Phase, SymbolicQ};

    fn cone(n: usize, rays: &[&[i64]]) -> Cone {
        Cone::new(n, rays.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn star_examples() {
        let def = SymbolicQ::new(2);
        let t1 = LaurentElement::<Phase>::character(vec![1, 0]);
        let t2 = LaurentElement::<Phase>::character(vec![0, 1]);
        let a = star(&def, &t1, &t2).unwrap();
        let b = star(&def, &t2, &t1).unwrap();
        assert_eq!(a, LaurentElement::monomial(Phase::q(1, 2), vec![1, 1]));
        // t1 t2 = q² t2 t1
        let lifted = b.terms().map(|(p, c)| (p.clone(), c * &Phase::unit(PhaseExp::q_pow(1, 2, 2)))).next().unwrap();
        assert_eq!(a, LaurentElement::monomial(lifted.1, lifted.0));
        let unit = LaurentElement::<Phase>::character(vec![0, 0]);
        assert_eq!(star(&def, &t1, &unit).unwrap(), t1);
        assert!(star(&def, &t1, &LaurentElement::character(vec![0, 0, 1])).is_err());
    }

    #[test]
    fn orbifold_chart() {
        let c = cone(2, &[&[1, 0], &[1, 2]]);
        let ch = ChartAlgebra::with_generators(&c, vec![vec![2, -1], vec![0, 1], vec![1, 0]], 8).unwrap();
        let comm = ch.commutation_relations();
        assert_eq!(comm[0].phase, PhaseExp::q_pow(1, 2, 4));
        assert_eq!(comm[1].phase, PhaseExp::q_pow(1, 2, 2));
        assert_eq!(comm[2].phase, PhaseExp::q_pow(1, 2, -2));
        let bins = ch.binomial_relations();
        assert_eq!(bins.len(), 1);
        assert_eq!(bins[0].phase, PhaseExp::q_pow(1, 2, 2));
        assert_eq!(bins[0].text(&numbered("x", 3)), "x1*x2 - q12^2*x3^2");
    }

    #[test]
    fn normal_forms() {
        let ch = ChartAlgebra::new(&cone(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(ch.generators(), &[vec![1, 0], vec![0, 1]]);
        let (e, x) = ch.normal_form(&[(1, 1), (0, 1)]);
        assert_eq!((e, x), (PhaseExp::q_pow(1, 2, -2), vec![1, 1]));
        assert_eq!(ch.normal_form(&[(0, 1), (0, 1)]), (PhaseExp::one(), vec![2, 0]));
        // reversal of a 4-letter word in a rank-3 chart: product of pairwise factors
        let c3 = ChartAlgebra::new(&cone(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let (e, _) = c3.normal_form(&[(2, 1), (1, 1), (0, 1), (0, 1)]);
        let mut expect = PhaseExp::one();
        for (a, b, k) in [(2, 1, 1), (2, 0, 2), (1, 0, 2)] {
            expect = expect.mul(&c3.check_theta()[a][b].pow(2 * k));
        }
        assert_eq!(e, expect);
    }

    #[test]
    fn two_routes_to_characters() {
        let ch = ChartAlgebra::new(&cone(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]])).unwrap();
        for alpha in [vec![1, 2, 0, 1], vec![0, 0, 3, 1], vec![2, 1, 1, 1]] {
            assert_eq!(ch.to_character(&alpha), ch.to_character_by_star(&alpha));
        }
        for b in ch.binomial_relations() {
            let (el, pl) = ch.to_character(&b.lhs);
            let (er, pr) = ch.to_character(&b.rhs);
            assert_eq!(pl, pr);
            assert_eq!(el, b.phase.mul(&er));
        }
    }

    #[test]
    fn gluing_cp2() {
        let s3 = cone(2, &[&[1, 0], &[0, 1]]);
        let s1 = cone(2, &[&[-1, -1], &[1, 0]]);
        let tau = cone(2, &[&[1, 0]]);
        let a = ChartAlgebra::with_generators(&s3, vec![vec![1, 0], vec![0, 1]], 8).unwrap();
        let b = ChartAlgebra::with_generators(&s1, vec![vec![1, -1], vec![0, -1]], 8).unwrap();
        let ids = gluing_relations(&a, &b, &tau).unwrap();
        assert_eq!(ids.len(), 2);
        for g in &ids {
            assert!(verify_gluing(&a, &b, g));
        }
        let same = gluing_relations(&a, &a, &s3).unwrap();
        assert!(same.iter().all(|g| verify_gluing(&a, &a, g)));
        assert!(gluing_relations(&a, &b, &s3).is_err());
    }

    #[test]
    fn weights_are_additive() {
        let ch = ChartAlgebra::new(&cone(2, &[&[1, 0], &[1, 2]])).unwrap();
        let x: Vec<i64> = vec![1, 0, 0];
        let y: Vec<i64> = vec![0, 2, 1];
        let xy: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        for i in 0..2 {
            assert_eq!(ch.weight(&xy, i), ch.weight(&x, i) + ch.weight(&y, i));
            assert_eq!(ch.weight(&[0, 0, 0], i), 0);
        }
        for b in ch.binomial_relations() {
            assert_eq!(ch.weight_vector(&b.lhs), ch.weight_vector(&b.rhs));
        }
    }

    #[test]
    fn kaehler_moyal() {
        let def = SymbolicQ::new(2);
        let ch = ChartAlgebra::new(&cone(2, &[&[1, 0], &[0, 1]])).unwrap();
        let k = Kaehler::new(&ch).unwrap();
        let p = k.presentation();
        let c = p.commutation.iter().find(|c| c.a == 0 && c.b == 3).unwrap();
        assert_eq!(c.phase, PhaseExp::q_pow(1, 2, 2));
        let one: ChartElement<Phase> = [(vec![0, 0], Phase::one())].into_iter().collect();
        assert!(k.d(&def, &one).is_empty());
        let x1: ChartElement<Phase> = [(vec![1, 0], Phase::one())].into_iter().collect();
        let sq = k.d(&def, &k.mul(&def, &x1, &x1));
        assert_eq!(sq.get(&(vec![1, 0], 0)), Some(&Phase::from_ratio(2, 1)));
        assert!(verify_leibniz(&def, &k, 50, 7).failures.is_empty());
        let orb = ChartAlgebra::new(&cone(2, &[&[1, 0], &[1, 2]])).unwrap();
        assert_eq!(Kaehler::new(&orb).unwrap_err(), TorusError::NotFree);
    }
}
