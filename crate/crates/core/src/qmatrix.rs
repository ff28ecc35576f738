//! The quasi-commutative matrix algebra F_n^θ: normal ordering of words in
//! the generators `g_ij`, deformed Levi-Civita symbols, the quantum
//! determinant and minors, Laplace expansions, localization at `det` and the
//! adjugate/antipode.
//!
//! Elements are stored as sums of normal-ordered monomials with a power of
//! `det` on the right. Generators are ordered row-major on `(i, j)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use itertools::Itertools;
use num_traits::One;
use thiserror::Error;

use crate::presentation::{AlgebraPresentation, Commutation};
use crate::scalars::{pair_count, pair_index, Coefficient, Deformation, PhaseExp, PhaseScalar, ScalarError, ThetaSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QMatrixError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("multi-indices of different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("expansion index {k} outside 1..={d}")]
    BadExpansionIndex { k: usize, d: usize },
    #[error("rectangular quotient needs d < n, got d={d}, n={n}")]
    BadRectangle { d: usize, n: usize },
    #[error("identity failed: {0}")]
    IdentityFailed(String),
}

/// A normal-ordered monomial `∏ g_x^{exps[x]} · det^det`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QMonomial {
    pub exps: Vec<u16>,
    pub det: i32,
}

impl QMonomial {
    pub fn one(n: usize) -> Self {
        QMonomial { exps: vec![0; n * n], det: 0 }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|e| *e as u32).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QPolynomial<C> {
    n: usize,
    terms: BTreeMap<QMonomial, C>,
}

impl<C: Coefficient> QPolynomial<C> {
    pub fn zero(n: usize) -> Self {
        QPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: C) -> Self {
        let mut p = Self::zero(n);
        p.add_term(QMonomial::one(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, C::one())
    }

    pub fn monomial(mono: QMonomial, c: C) -> Self {
        let n = (mono.exps.len() as f64).sqrt() as usize;
        let mut p = Self::zero(n);
        p.add_term(mono, c);
        p
    }

    /// `det^k` as a formal monomial.
    pub fn det_power(n: usize, k: i32) -> Self {
        let mut m = QMonomial::one(n);
        m.det = k;
        Self::monomial(m, C::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QMonomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &QMonomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: QMonomial, c: C) {
        if c.negligible() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.negligible() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut r = Self::zero(self.n);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.clone() * s.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-C::one()))
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn min_det_power(&self) -> i32 {
        self.terms.keys().map(|m| m.det).min().unwrap_or(0)
    }
}

impl<R: num_traits::Signed + Clone + fmt::Display + num_integer::Integer + Send + Sync + fmt::Debug + 'static>
    QPolynomial<PhaseScalar<num_rational::Ratio<R>>>
where
    num_rational::Ratio<R>: crate::scalars::ExactRing,
{
    /// Substitutes a numeric θ into every coefficient.
    pub fn specialize(&self, theta: &ThetaSpec<f64>) -> Result<QPolynomial<num_complex::Complex<f64>>, ScalarError> {
        let mut r = QPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.specialize(theta)?);
        }
        Ok(r)
    }
}

fn coefficient_text(c: &str) -> String {
    let inner = c.trim_start_matches('-');
    if inner.contains(" + ") || inner.contains(" - ") {
        format!("({})", c)
    } else {
        c.replace('*', " * ")
    }
}

impl<C: Coefficient> fmt::Display for QPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut parts = Vec::new();
            for (x, e) in m.exps.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let (i, j) = (x / self.n + 1, x % self.n + 1);
                parts.push(if *e == 1 { format!("g[{},{}]", i, j) } else { format!("g[{},{}]^{}", i, j, e) });
            }
            if m.det != 0 {
                parts.push(if m.det == 1 { "det".to_string() } else { format!("det^{}", m.det) });
            }
            let ct = coefficient_text(&c.to_string());
            let term = match (ct.as_str(), parts.is_empty()) {
                (_, true) => ct.clone(),
                ("1", false) => parts.join(" * "),
                ("-1", false) => format!("-{}", parts.join(" * ")),
                _ => format!("{} * {}", ct, parts.join(" * ")),
            };
            if k == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        write!(f, "{}", out)
    }
}

/// Sign of the permutation sorting `v`, or 0 if an entry repeats.
pub fn perm_sign(v: &[usize]) -> i64 {
    let mut s = 1;
    for a in 0..v.len() {
        for b in (a + 1)..v.len() {
            if v[a] == v[b] {
                return 0;
            }
            if v[a] > v[b] {
                s = -s;
            }
        }
    }
    s
}

/// `ε^(c)` of an index tuple: sign and phase exponent.
pub fn epsilon_c_exp(j: &[usize]) -> (i64, PhaseExp) {
    let s = perm_sign(j);
    let mut e = PhaseExp::one();
    if s == 0 {
        return (0, e);
    }
    for k in 0..j.len() {
        for t in (k + 1)..j.len() {
            e.add_q(k + 1, t + 1, 1);
            e.add_q(j[t], j[k], 1);
        }
    }
    (s, e)
}

/// `ε^(r)` of an index tuple: sign and phase exponent.
pub fn epsilon_r_exp(i: &[usize]) -> (i64, PhaseExp) {
    let s = perm_sign(i);
    let mut e = PhaseExp::one();
    if s == 0 {
        return (0, e);
    }
    for k in 0..i.len() {
        for t in (k + 1)..i.len() {
            e.add_q(i[k], i[t], 1);
            e.add_q(t + 1, k + 1, 1);
        }
    }
    (s, e)
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

fn without(v: &[usize], pos: usize) -> Vec<usize> {
    v.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, x)| *x).collect()
}

fn factorial(d: usize) -> i64 {
    (1..=d as i64).product()
}

/// Dense accumulator for phase exponents over the pairs of `1..=n`.
struct PhaseAcc(Vec<i32>);

impl PhaseAcc {
    fn new(n: usize) -> Self {
        PhaseAcc(vec![0; pair_count(n)])
    }

    fn add(&mut self, i: usize, j: usize, k: i32) {
        if i == j || k == 0 {
            return;
        }
        if i < j {
            self.0[pair_index(i - 1, j - 1)] += k;
        } else {
            self.0[pair_index(j - 1, i - 1)] -= k;
        }
    }

    fn finish(self) -> PhaseExp {
        PhaseExp::from_dense(&self.0)
    }
}

/// Context for F_n^θ at a fixed deformation.
pub struct QMatrixContext<D: Deformation> {
    n: usize,
    def: D,
    det: OnceLock<QPolynomial<D::Coeff>>,
    det_pows: Mutex<Vec<QPolynomial<D::Coeff>>>,
}

impl<D: Deformation> QMatrixContext<D> {
    pub fn new(def: D) -> Self {
        let n = def.n();
        assert!(n >= 1, "quantum matrices need n >= 1");
        QMatrixContext { n, def, det: OnceLock::new(), det_pows: Mutex::new(Vec::new()) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn deformation(&self) -> &D {
        &self.def
    }

    fn index(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }

    fn check(&self, idx: &[usize]) -> Result<(), QMatrixError> {
        for &x in idx {
            if x == 0 || x > self.n {
                return Err(ScalarError::IndexOutOfRange { index: x, n: self.n }.into());
            }
        }
        Ok(())
    }

    pub fn phase(&self, e: &PhaseExp) -> D::Coeff {
        self.def.phase(e)
    }

    pub fn generator(&self, i: usize, j: usize) -> Result<QPolynomial<D::Coeff>, QMatrixError> {
        self.check(&[i, j])?;
        let mut m = QMonomial::one(self.n);
        m.exps[self.index(i, j)] = 1;
        Ok(QPolynomial::monomial(m, D::Coeff::one()))
    }

    pub fn constant(&self, c: D::Coeff) -> QPolynomial<D::Coeff> {
        QPolynomial::constant(self.n, c)
    }

    /// `Q²_{ij;kl} = q_ki² q_jl²`, the factor from `g_ij g_kl = Q² g_kl g_ij`.
    pub fn swap_exp(i: usize, j: usize, k: usize, l: usize) -> PhaseExp {
        let mut e = PhaseExp::q_pow(k, i, 2);
        e.add_q(j, l, 2);
        e
    }

    /// Exponent of `∏_i Q²_{ii;kl}`, with `det · g_kl = phase · g_kl · det`.
    pub fn det_commutation_exp(&self, k: usize, l: usize) -> PhaseExp {
        let mut acc = PhaseAcc::new(self.n);
        for i in 1..=self.n {
            acc.add(k, i, 2);
            acc.add(i, l, 2);
        }
        acc.finish()
    }

    fn product_phase(&self, a: &QMonomial, b: &QMonomial) -> PhaseExp {
        let n = self.n;
        let mut acc = PhaseAcc::new(n);
        for (x, ea) in a.exps.iter().enumerate() {
            if *ea == 0 {
                continue;
            }
            let (i, j) = (x / n + 1, x % n + 1);
            for (y, eb) in b.exps.iter().enumerate().take(x) {
                if *eb == 0 {
                    continue;
                }
                let (k, l) = (y / n + 1, y % n + 1);
                let t = (*ea as i32) * (*eb as i32) * 2;
                acc.add(k, i, t);
                acc.add(j, l, t);
            }
        }
        if a.det != 0 {
            for (y, eb) in b.exps.iter().enumerate() {
                if *eb == 0 {
                    continue;
                }
                let (k, l) = (y / n + 1, y % n + 1);
                let t = a.det * (*eb as i32) * 2;
                for i in 1..=n {
                    acc.add(k, i, t);
                    acc.add(i, l, t);
                }
            }
        }
        acc.finish()
    }

    pub fn mul(&self, a: &QPolynomial<D::Coeff>, b: &QPolynomial<D::Coeff>) -> QPolynomial<D::Coeff> {
        let mut r = QPolynomial::zero(self.n);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let ph = self.product_phase(ma, mb);
                let mut m = ma.clone();
                for (x, e) in mb.exps.iter().enumerate() {
                    m.exps[x] += e;
                }
                m.det += mb.det;
                let c = ca.clone() * cb.clone();
                let c = if ph.is_one() { c } else { c * self.def.phase(&ph) };
                r.add_term(m, c);
            }
        }
        r
    }

    /// Row and column torus weights of a monomial; `det` has weight `(1, 1)`.
    pub fn bidegree(&self, m: &QMonomial) -> (Vec<i64>, Vec<i64>) {
        let n = self.n;
        let mut r = vec![m.det as i64; n];
        let mut c = vec![m.det as i64; n];
        for (x, e) in m.exps.iter().enumerate() {
            r[x / n] += *e as i64;
            c[x % n] += *e as i64;
        }
        (r, c)
    }

    /// Exponent of the twist cocycle `φ((r,c),(r',c')) = ∏ q_ab^{c_a c'_b − r_a r'_b}`,
    /// with `x ⋆ y = φ(|x|,|y|) x ·₀ y`.
    pub fn cocycle_exp(&self, a: &QMonomial, b: &QMonomial) -> PhaseExp {
        let (ra, ca) = self.bidegree(a);
        let (rb, cb) = self.bidegree(b);
        let mut acc = PhaseAcc::new(self.n);
        for x in 1..=self.n {
            for y in 1..=self.n {
                let k = ca[x - 1] * cb[y - 1] - ra[x - 1] * rb[y - 1];
                acc.add(x, y, k as i32);
            }
        }
        acc.finish()
    }

    /// The untwisted (commutative) product `x ·₀ y = φ(|x|,|y|)^{-1} x ⋆ y`.
    pub fn untwisted_mul(&self, a: &QPolynomial<D::Coeff>, b: &QPolynomial<D::Coeff>) -> QPolynomial<D::Coeff> {
        let mut r = QPolynomial::zero(self.n);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let ph = self.product_phase(ma, mb).mul(&self.cocycle_exp(ma, mb).inv());
                let mut m = ma.clone();
                for (x, e) in mb.exps.iter().enumerate() {
                    m.exps[x] += e;
                }
                m.det += mb.det;
                let c = ca.clone() * cb.clone();
                let c = if ph.is_one() { c } else { c * self.def.phase(&ph) };
                r.add_term(m, c);
            }
        }
        r
    }

    pub fn commutator(&self, a: &QPolynomial<D::Coeff>, b: &QPolynomial<D::Coeff>) -> QPolynomial<D::Coeff> {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// Normal form of a word `g_{w_1} ⋯ g_{w_m}`.
    pub fn normalize(&self, word: &[(usize, usize)]) -> Result<QPolynomial<D::Coeff>, QMatrixError> {
        let mut acc = PhaseAcc::new(self.n);
        let mut m = QMonomial::one(self.n);
        for (pos, &(i, j)) in word.iter().enumerate() {
            self.check(&[i, j])?;
            for &(k, l) in &word[..pos] {
                if (k, l) > (i, j) {
                    // g_kl g_ij = Q²_{kl;ij} g_ij g_kl, moving g_ij to the left
                    acc.add(i, k, 2);
                    acc.add(l, j, 2);
                }
            }
            m.exps[self.index(i, j)] += 1;
        }
        let e = acc.finish();
        Ok(QPolynomial::monomial(m, self.def.phase(&e)))
    }

    pub fn epsilon_c(&self, j: &[usize]) -> Result<D::Coeff, QMatrixError> {
        self.check(j)?;
        let (s, e) = epsilon_c_exp(j);
        Ok(self.def.sign_phase(s, &e))
    }

    pub fn epsilon_r(&self, i: &[usize]) -> Result<D::Coeff, QMatrixError> {
        self.check(i)?;
        let (s, e) = epsilon_r_exp(i);
        Ok(self.def.sign_phase(s, &e))
    }

    fn word_of(rows: &[usize], cols: &[usize]) -> Vec<(usize, usize)> {
        rows.iter().copied().zip(cols.iter().copied()).collect()
    }

    /// `Λ^{IJ} = (1/d!) Σ ε^(r) ε^(c) g_{i_1 j_1} ⋯ g_{i_d j_d}`, the sum
    /// running over the orderings of I and J with signs relative to the
    /// given orders.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<QPolynomial<D::Coeff>, QMatrixError> {
        if rows.len() != cols.len() {
            return Err(QMatrixError::LengthMismatch(rows.len(), cols.len()));
        }
        self.check(rows)?;
        self.check(cols)?;
        let d = rows.len();
        let outer = perm_sign(rows) * perm_sign(cols);
        if outer == 0 {
            return Ok(QPolynomial::zero(self.n));
        }
        let sr = sorted(rows);
        let sc = sorted(cols);
        let mut total = QPolynomial::zero(self.n);
        for i in sr.iter().copied().permutations(d) {
            let (s1, e1) = epsilon_r_exp(&i);
            for j in sc.iter().copied().permutations(d) {
                let (s2, e2) = epsilon_c_exp(&j);
                let w = self.normalize(&Self::word_of(&i, &j))?;
                total = total.add(&w.scale(&self.def.sign_phase(s1 * s2, &e1.mul(&e2))));
            }
        }
        Ok(total.scale(&D::Coeff::from_ratio(outer, factorial(d))))
    }

    /// The quantum determinant, computed from the double ε sum.
    pub fn det(&self) -> &QPolynomial<D::Coeff> {
        self.det.get_or_init(|| {
            let all: Vec<usize> = (1..=self.n).collect();
            self.minor(&all, &all).expect("full index range")
        })
    }

    /// `det^k`, `k ≥ 0`, expanded.
    pub fn det_pow(&self, k: usize) -> QPolynomial<D::Coeff> {
        let mut cache = self.det_pows.lock().expect("det cache");
        if cache.is_empty() {
            cache.push(QPolynomial::one(self.n));
        }
        while cache.len() <= k {
            let next = self.mul(cache.last().unwrap(), self.det());
            cache.push(next);
        }
        cache[k].clone()
    }

    /// Leibniz form `Σ_σ sgn(σ) ∏_{a<b} Q_{b σ(b); a σ(a)} g_{1σ(1)} ⋯ g_{nσ(n)}`.
    pub fn leib(&self) -> QPolynomial<D::Coeff> {
        let n = self.n;
        let mut total = QPolynomial::zero(n);
        for sigma in (1..=n).permutations(n) {
            let mut e = PhaseExp::one();
            for a in 0..n {
                for b in (a + 1)..n {
                    e = e.mul(&crate::scalars::q_coeff_exp(b + 1, sigma[b], a + 1, sigma[a]));
                }
            }
            let rows: Vec<usize> = (1..=n).collect();
            let w = self.normalize(&Self::word_of(&rows, &sigma)).expect("valid indices");
            total = total.add(&w.scale(&self.def.sign_phase(perm_sign(&sigma), &e)));
        }
        total
    }

    /// Column form `Σ_σ sgn(σ) ∏_{a<b} Q_{σ(b) b; σ(a) a} g_{σ(1)1} ⋯ g_{σ(n)n}`.
    pub fn leib_columns(&self) -> QPolynomial<D::Coeff> {
        let n = self.n;
        let mut total = QPolynomial::zero(n);
        for sigma in (1..=n).permutations(n) {
            let mut e = PhaseExp::one();
            for a in 0..n {
                for b in (a + 1)..n {
                    e = e.mul(&crate::scalars::q_coeff_exp(sigma[b], b + 1, sigma[a], a + 1));
                }
            }
            let cols: Vec<usize> = (1..=n).collect();
            let w = self.normalize(&Self::word_of(&sigma, &cols)).expect("valid indices");
            total = total.add(&w.scale(&self.def.sign_phase(perm_sign(&sigma), &e)));
        }
        total
    }

    fn check_expansion(&self, rows: &[usize], cols: &[usize], k: usize) -> Result<usize, QMatrixError> {
        if rows.len() != cols.len() {
            return Err(QMatrixError::LengthMismatch(rows.len(), cols.len()));
        }
        self.check(rows)?;
        self.check(cols)?;
        let d = rows.len();
        if k == 0 || k > d {
            return Err(QMatrixError::BadExpansionIndex { k, d });
        }
        Ok(d)
    }

    fn sign(k: usize, a: usize) -> i64 {
        if (k + a) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Expansion along the k-th row:
    /// `Σ_α (−1)^{k+α} ∏_β Q_{i^k_β j^α_β; i_k j_α} g_{i_k j_α} Λ^{I^k J^α}`.
    pub fn laplace_row(&self, rows: &[usize], cols: &[usize], k: usize) -> Result<QPolynomial<D::Coeff>, QMatrixError> {
        let d = self.check_expansion(rows, cols, k)?;
        let ik = rows[k - 1];
        let rk = without(rows, k - 1);
        let mut total = QPolynomial::zero(self.n);
        for a in 1..=d {
            let ja = cols[a - 1];
            let ca = without(cols, a - 1);
            let mut e = PhaseExp::one();
            for (x, y) in rk.iter().zip(&ca) {
                e = e.mul(&crate::scalars::q_coeff_exp(*x, *y, ik, ja));
            }
            let term = self.mul(&self.generator(ik, ja)?, &self.minor(&rk, &ca)?);
            total = total.add(&term.scale(&self.def.sign_phase(Self::sign(k, a), &e)));
        }
        Ok(total)
    }

    /// Expansion along the k-th column:
    /// `Σ_α (−1)^{k+α} ∏_β Q_{i^α_β j^k_β; i_α j_k} g_{i_α j_k} Λ^{I^α J^k}`.
    pub fn laplace_col(&self, rows: &[usize], cols: &[usize], k: usize) -> Result<QPolynomial<D::Coeff>, QMatrixError> {
        let d = self.check_expansion(rows, cols, k)?;
        let jk = cols[k - 1];
        let ck = without(cols, k - 1);
        let mut total = QPolynomial::zero(self.n);
        for a in 1..=d {
            let ia = rows[a - 1];
            let ra = without(rows, a - 1);
            let mut e = PhaseExp::one();
            for (x, y) in ra.iter().zip(&ck) {
                e = e.mul(&crate::scalars::q_coeff_exp(*x, *y, ia, jk));
            }
            let term = self.mul(&self.generator(ia, jk)?, &self.minor(&ra, &ck)?);
            total = total.add(&term.scale(&self.def.sign_phase(Self::sign(k, a), &e)));
        }
        Ok(total)
    }

    /// Equality in the localized algebra: both sides are brought to a
    /// common right power of `det` and compared as polynomials.
    pub fn equals(&self, a: &QPolynomial<D::Coeff>, b: &QPolynomial<D::Coeff>) -> bool {
        self.difference(a, b).is_empty()
    }

    /// `a − b` as a polynomial times `det^{k0}`; returns the polynomial part.
    pub fn difference(&self, a: &QPolynomial<D::Coeff>, b: &QPolynomial<D::Coeff>) -> QPolynomial<D::Coeff> {
        let k0 = a.min_det_power().min(b.min_det_power());
        let lift = |p: &QPolynomial<D::Coeff>, sign: bool| {
            let mut r = QPolynomial::zero(self.n);
            for (m, c) in &p.terms {
                let mut base = m.clone();
                let j = (base.det - k0) as usize;
                base.det = 0;
                let c = if sign { c.clone() } else { -c.clone() };
                let t = self.mul(&QPolynomial::monomial(base, c), &self.det_pow(j));
                r = r.add(&t);
            }
            r
        };
        lift(a, true).add(&lift(b, false))
    }

    /// `det^{-k} · p`.
    pub fn localize_det(&self, p: &QPolynomial<D::Coeff>, k: i32) -> QPolynomial<D::Coeff> {
        self.mul(&QPolynomial::det_power(self.n, -k), p)
    }

    /// Checks `Λ^{IJ} Λ^{I'J'} = R²_{IJ;I'J'} Λ^{I'J'} Λ^{IJ}` by expansion.
    pub fn minor_commutation_check(
        &self,
        i: &[usize],
        j: &[usize],
        i2: &[usize],
        j2: &[usize],
    ) -> Result<bool, QMatrixError> {
        let a = self.minor(i, j)?;
        let b = self.minor(i2, j2)?;
        let r = crate::scalars::r_coeff_exp(i, j, i2, j2)?.pow(2);
        let lhs = self.mul(&a, &b);
        let rhs = self.mul(&b, &a).scale(&self.def.phase(&r));
        Ok(lhs.sub(&rhs).is_empty())
    }

    /// `det · g_kl = (∏_i Q²_{ii;kl}) g_kl · det` for every `(k, l)`.
    pub fn det_permutability_check(&self) -> Vec<((usize, usize), bool)> {
        let mut out = Vec::new();
        for k in 1..=self.n {
            for l in 1..=self.n {
                let g = self.generator(k, l).expect("index in range");
                let lhs = self.mul(self.det(), &g);
                let rhs = self.mul(&g, self.det()).scale(&self.def.phase(&self.det_commutation_exp(k, l)));
                out.push(((k, l), lhs.sub(&rhs).is_empty()));
            }
        }
        out
    }

    /// Largest coefficient of `det · g_kl − g_kl · det` over all generators.
    pub fn det_commutator_size(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 1..=self.n {
            for l in 1..=self.n {
                let g = self.generator(k, l).expect("index in range");
                worst = worst.max(self.commutator(self.det(), &g).max_magnitude());
            }
        }
        worst
    }

    /// Adjugate entry `A_im = (−1)^{i+m} ∏_a (q_am / q_ai) Λ^{(rows∖m)(cols∖i)}`,
    /// so that `Σ_m A_im g_mj = δ_ij det`.
    pub fn adjugate_entry(&self, i: usize, m: usize) -> Result<QPolynomial<D::Coeff>, QMatrixError> {
        self.check(&[i, m])?;
        let n = self.n;
        let rows: Vec<usize> = (1..=n).filter(|r| *r != m).collect();
        let cols: Vec<usize> = (1..=n).filter(|c| *c != i).collect();
        let mut e = PhaseExp::one();
        for a in 1..=n {
            e.add_q(a, m, 1);
            e.add_q(a, i, -1);
        }
        let sign = Self::sign(i, m);
        Ok(self.minor(&rows, &cols)?.scale(&self.def.sign_phase(sign, &e)))
    }

    pub fn quantum_adjugate(&self) -> Result<Vec<Vec<QPolynomial<D::Coeff>>>, QMatrixError> {
        (1..=self.n).map(|i| (1..=self.n).map(|m| self.adjugate_entry(i, m)).collect()).collect()
    }

    /// `S(g_ij) = det^{-1} A_ij`.
    pub fn antipode_entry(&self, i: usize, j: usize) -> Result<QPolynomial<D::Coeff>, QMatrixError> {
        Ok(self.localize_det(&self.adjugate_entry(i, j)?, 1))
    }

    /// Checks `Σ_m A_im g_mj = δ_ij det` and `Σ_m g_im A_mj = δ_ij det'`
    /// where `det'` is the right-hand version; returns `(left, right)`
    /// verdicts for `adj·G` and `G·adj`.
    pub fn adjugate_check(&self) -> Result<(bool, bool), QMatrixError> {
        let n = self.n;
        let adj = self.quantum_adjugate()?;
        let mut left = true;
        let mut right = true;
        for i in 1..=n {
            for j in 1..=n {
                let mut s = QPolynomial::zero(n);
                let mut t = QPolynomial::zero(n);
                for m in 1..=n {
                    s = s.add(&self.mul(&adj[i - 1][m - 1], &self.generator(m, j)?));
                    // g_im det^{-1} = c det^{-1} g_im, so G·S needs the twisted adjugate
                    let c = self.def.phase(&self.det_commutation_exp(i, m));
                    t = t.add(&self.mul(&self.generator(i, m)?, &adj[m - 1][j - 1]).scale(&c));
                }
                let target = if i == j { self.det().clone() } else { QPolynomial::zero(n) };
                left &= s.sub(&target).is_empty();
                right &= t.sub(&target).is_empty();
            }
        }
        Ok((left, right))
    }

    /// Checks `Σ_k S(g_ik) g_kj = δ_ij` and `Σ_k g_ik S(g_kj) = δ_ij` in the
    /// localized algebra.
    pub fn antipode_check(&self) -> Result<(bool, bool), QMatrixError> {
        let n = self.n;
        let s: Vec<Vec<_>> = (1..=n)
            .map(|i| (1..=n).map(|j| self.antipode_entry(i, j)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let mut left = true;
        let mut right = true;
        for i in 1..=n {
            for j in 1..=n {
                let mut a = QPolynomial::zero(n);
                let mut b = QPolynomial::zero(n);
                for k in 1..=n {
                    a = a.add(&self.mul(&s[i - 1][k - 1], &self.generator(k, j)?));
                    b = b.add(&self.mul(&self.generator(i, k)?, &s[k - 1][j - 1]));
                }
                let target = if i == j { QPolynomial::one(n) } else { QPolynomial::zero(n) };
                left &= self.equals(&a, &target);
                right &= self.equals(&b, &target);
            }
        }
        Ok((left, right))
    }

    /// F_n^θ / ⟨g_ij⟩_{i>d}: the generators `g_ij`, `i ≤ d`, with their
    /// commutation phases.
    pub fn rectangular_quotient(&self, d: usize) -> Result<AlgebraPresentation, QMatrixError> {
        let n = self.n;
        if d == 0 || d >= n {
            return Err(QMatrixError::BadRectangle { d, n });
        }
        let gens: Vec<(usize, usize)> = (1..=d).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
        let mut comm = Vec::new();
        for a in 0..gens.len() {
            for b in (a + 1)..gens.len() {
                let (i, j) = gens[a];
                let (k, l) = gens[b];
                comm.push(Commutation { a, b, phase: Self::swap_exp(i, j, k, l) });
            }
        }
        Ok(AlgebraPresentation {
            kind: "rectangular".into(),
            generators: gens.iter().map(|(i, j)| format!("g[{},{}]", i, j)).collect(),
            commutation: comm,
            ..Default::default()
        })
    }
}

/// Whether `det` is central at a numeric θ: `Σ_k θ^{ki} ≡ Σ_k θ^{kj} mod 2π`.
pub fn det_centrality_condition(theta: &ThetaSpec<f64>) -> Result<bool, ScalarError> {
    if !theta.is_numeric() {
        return Err(ScalarError::SymbolicTheta);
    }
    let n = theta.n();
    let col = |i: usize| -> Result<num_complex::Complex<f64>, ScalarError> {
        let mut s = num_complex::Complex::new(0.0, 0.0);
        for k in 1..=n {
            s += theta.value(k, i)?;
        }
        Ok(s)
    };
    let base = col(1)?;
    for i in 2..=n {
        let d = col(i)? - base;
        let two_pi = 2.0 * std::f64::consts::PI;
        let r = d.re - two_pi * (d.re / two_pi).round();
        if r.abs() > 1e-9 || d.im.abs() > 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}
