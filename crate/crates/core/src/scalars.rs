//! Deformation coefficients.
//!
//! Every coefficient that appears in the deformed algebras is a Laurent
//! polynomial in the units `q_ij = exp(i θ^{ij} / 2)`, `i < j`. Exponents are
//! kept as integer vectors so that products, inverses and squares of these
//! units stay exact. A numeric θ can be substituted at any point to obtain a
//! complex number.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("multi-index lengths do not match ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("scalar is not invertible (zero or more than one term)")]
    NotInvertible,
    #[error("a numeric theta is required")]
    SymbolicTheta,
    #[error("theta is not skew-symmetric at ({0},{1})")]
    NotSkew(usize, usize),
    #[error("malformed theta input: {0}")]
    Malformed(String),
}

/// Position of the pair `(i, j)`, `0 <= i < j`, in the colex enumeration of
/// pairs. It does not depend on the torus rank.
pub fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Inverse of [`pair_index`], zero-based.
pub fn pair_of_index(idx: usize) -> (usize, usize) {
    let mut j = 1;
    while (j + 1) * j / 2 <= idx {
        j += 1;
    }
    (idx - j * (j - 1) / 2, j)
}

/// Number of unordered pairs in rank `n`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// A phase monomial `∏_{i<j} q_ij^{e_ij}` stored by its exponent vector.
///
/// Trailing zeros are trimmed so that equal monomials have equal vectors.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseExp(Vec<i32>);

impl PhaseExp {
    pub fn one() -> Self {
        PhaseExp(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// `q_ij` with one-based indices; `q_ii = 1` and `q_ji = q_ij^{-1}`.
    pub fn q(i: usize, j: usize) -> Self {
        Self::q_pow(i, j, 1)
    }

    /// `q_ij^k` with one-based indices.
    pub fn q_pow(i: usize, j: usize, k: i32) -> Self {
        let mut e = PhaseExp::one();
        e.add_q(i, j, k);
        e
    }

    /// Multiplies in place by `q_ij^k` (one-based indices).
    pub fn add_q(&mut self, i: usize, j: usize, k: i32) {
        if i == j || k == 0 {
            return;
        }
        let (a, b, s) = if i < j { (i - 1, j - 1, k) } else { (j - 1, i - 1, -k) };
        let idx = pair_index(a, b);
        if self.0.len() <= idx {
            self.0.resize(idx + 1, 0);
        }
        self.0[idx] += s;
        self.trim();
    }

    pub fn from_dense(v: &[i32]) -> Self {
        let mut e = PhaseExp(v.to_vec());
        e.trim();
        e
    }

    /// Exponent vector padded to `len` entries.
    pub fn to_dense(&self, len: usize) -> Vec<i32> {
        let mut v = self.0.clone();
        v.resize(len.max(v.len()), 0);
        v
    }

    pub fn raw(&self) -> &[i32] {
        &self.0
    }

    /// Exponent of `q_ij`, `i < j` one-based.
    pub fn exponent(&self, i: usize, j: usize) -> i32 {
        if i == j {
            return 0;
        }
        let (a, b, s) = if i < j { (i - 1, j - 1, 1) } else { (j - 1, i - 1, -1) };
        s * self.0.get(pair_index(a, b)).copied().unwrap_or(0)
    }

    /// Nonzero exponents as one-based `(i, j, e)` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i32)> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e != 0).map(|(idx, e)| {
            let (i, j) = pair_of_index(idx);
            (i + 1, j + 1, *e)
        })
    }

    /// Largest index that occurs.
    pub fn max_index(&self) -> usize {
        self.entries().map(|(_, j, _)| j).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &PhaseExp) -> PhaseExp {
        let len = self.0.len().max(other.0.len());
        let mut v = vec![0; len];
        for (k, e) in self.0.iter().enumerate() {
            v[k] += e;
        }
        for (k, e) in other.0.iter().enumerate() {
            v[k] += e;
        }
        PhaseExp::from_dense(&v)
    }

    pub fn pow(&self, k: i32) -> PhaseExp {
        PhaseExp::from_dense(&self.0.iter().map(|e| e * k).collect::<Vec<_>>())
    }

    pub fn inv(&self) -> PhaseExp {
        self.pow(-1)
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    /// `exp((i/2) Σ e_ij θ^{ij})` for a numeric θ.
    pub fn evaluate<F: Float>(&self, theta: &ThetaSpec<F>) -> Result<Complex<F>, ScalarError> {
        let two = F::one() + F::one();
        let mut arg = Complex::new(F::zero(), F::zero());
        for (i, j, e) in self.entries() {
            if j > theta.n() {
                return Err(ScalarError::IndexOutOfRange { index: j, n: theta.n() });
            }
            let t = theta.value(i, j)?;
            arg = arg + t * F::from(e).unwrap();
        }
        // exp(i * arg / 2)
        let z = Complex::new(-arg.im / two, arg.re / two);
        Ok(z.exp())
    }
}

impl fmt::Display for PhaseExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, j, e) in self.entries() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if i >= 10 || j >= 10 {
                write!(f, "q{}_{}", i, j)?;
            } else {
                write!(f, "q{}{}", i, j)?;
            }
            if e != 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

/// Exact scalar type bound used for the rational coefficients of phase
/// polynomials.
pub trait ExactRing:
    Clone + Num + Signed + Ord + ToPrimitive + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> ExactRing for T where
    T: Clone + Num + Signed + Ord + ToPrimitive + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// Laurent polynomial `Σ c_e ∏ q_ij^{e_ij}` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseScalar<R> {
    terms: BTreeMap<PhaseExp, R>,
}

impl<R: ExactRing> PhaseScalar<R> {
    pub fn monomial(c: R, e: PhaseExp) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        PhaseScalar { terms }
    }

    pub fn unit(e: PhaseExp) -> Self {
        Self::monomial(R::one(), e)
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(c, PhaseExp::one())
    }

    /// `q_ij` (one-based, normalized).
    pub fn q(i: usize, j: usize) -> Self {
        Self::unit(PhaseExp::q(i, j))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        let c = R::from_i64(num).unwrap() / R::from_i64(den).unwrap();
        Self::constant(c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PhaseExp, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(&R, &PhaseExp)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, e))
        } else {
            None
        }
    }

    /// Inverse of a single-term scalar.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self.as_monomial() {
            Some((c, e)) => Ok(Self::monomial(R::one() / c.clone(), e.inv())),
            None => Err(ScalarError::NotInvertible),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = PhaseScalar { terms: BTreeMap::new() };
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul_exp(&self, e: &PhaseExp) -> Self {
        PhaseScalar { terms: self.terms.iter().map(|(k, v)| (k.mul(e), v.clone())).collect() }
    }

    /// Substitutes a numeric θ.
    pub fn specialize<F: Float>(&self, theta: &ThetaSpec<F>) -> Result<Complex<F>, ScalarError> {
        if !theta.is_numeric() {
            return Err(ScalarError::SymbolicTheta);
        }
        let mut acc = Complex::new(F::zero(), F::zero());
        for (e, c) in &self.terms {
            let v = F::from(c.to_f64().unwrap()).unwrap();
            acc = acc + e.evaluate(theta)? * v;
        }
        Ok(acc)
    }

    /// Substitutes `q_ij ↦ values(i, j)` for an arbitrary field of values.
    pub fn evaluate_with<T, G>(&self, mut unit: G) -> T
    where
        T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
        G: FnMut(&PhaseExp) -> T,
        R: Into<T>,
    {
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            acc = acc + unit(e) * c.clone().into();
        }
        acc
    }

    fn add_term(&mut self, e: PhaseExp, c: R) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                v.is_zero()
            }
            None => {
                self.terms.insert(e.clone(), c);
                false
            }
        };
        if remove {
            self.terms.remove(&e);
        }
    }
}

impl<R: ExactRing> Zero for PhaseScalar<R> {
    fn zero() -> Self {
        PhaseScalar { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: ExactRing> One for PhaseScalar<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: ExactRing> Add for PhaseScalar<R> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<'a, R: ExactRing> Add<&'a PhaseScalar<R>> for &'a PhaseScalar<R> {
    type Output = PhaseScalar<R>;
    fn add(self, rhs: &PhaseScalar<R>) -> PhaseScalar<R> {
        self.clone() + rhs.clone()
    }
}

impl<R: ExactRing> Neg for PhaseScalar<R> {
    type Output = Self;
    fn neg(self) -> Self {
        PhaseScalar { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<R: ExactRing> Sub for PhaseScalar<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<'a, R: ExactRing> Sub<&'a PhaseScalar<R>> for &'a PhaseScalar<R> {
    type Output = PhaseScalar<R>;
    fn sub(self, rhs: &PhaseScalar<R>) -> PhaseScalar<R> {
        self.clone() - rhs.clone()
    }
}

impl<'a, R: ExactRing> Mul<&'a PhaseScalar<R>> for &'a PhaseScalar<R> {
    type Output = PhaseScalar<R>;
    fn mul(self, rhs: &PhaseScalar<R>) -> PhaseScalar<R> {
        let mut out = PhaseScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.mul(e2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<R: ExactRing> Mul for PhaseScalar<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<R: ExactRing> fmt::Display for PhaseScalar<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (a.is_one(), e.is_one()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", e)?,
                (false, true) => write!(f, "{}", a)?,
                (false, false) => write!(f, "{}*{}", a, e)?,
            }
        }
        Ok(())
    }
}

/// Coefficient field of the polynomial structures: either exact phase
/// polynomials or complex numbers after substituting θ.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Size of the coefficient; zero iff the coefficient vanishes for
    /// exact types.
    fn magnitude(&self) -> f64;
    /// Largest magnitude still treated as zero.
    fn tolerance() -> f64;
    fn is_exact() -> bool;
    /// Drops terms that are zero within tolerance.
    fn negligible(&self) -> bool {
        self.magnitude() <= Self::tolerance()
    }
}

impl<R: ExactRing> Coefficient for PhaseScalar<R> {
    fn from_ratio(num: i64, den: i64) -> Self {
        PhaseScalar::from_ratio(num, den)
    }
    fn magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum()
    }
    fn tolerance() -> f64 {
        0.0
    }
    fn is_exact() -> bool {
        true
    }
    fn negligible(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Absolute tolerance for numeric identity checks in double precision.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

impl<F> Coefficient for Complex<F>
where
    F: Float + fmt::Debug + fmt::Display + Send + Sync + 'static,
{
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(F::from(num).unwrap() / F::from(den).unwrap(), F::zero())
    }
    fn magnitude(&self) -> f64 {
        self.norm().to_f64().unwrap()
    }
    fn tolerance() -> f64 {
        let eps = F::epsilon().to_f64().unwrap();
        if eps < 1e-12 {
            NUMERIC_TOLERANCE
        } else {
            eps.sqrt() * 10.0
        }
    }
    fn is_exact() -> bool {
        false
    }
}

/// A choice of deformation: how phase monomials turn into coefficients.
pub trait Deformation: Send + Sync {
    type Coeff: Coefficient;
    fn n(&self) -> usize;
    fn phase(&self, e: &PhaseExp) -> Self::Coeff;
    fn mode(&self) -> &'static str;

    fn sign_phase(&self, sign: i64, e: &PhaseExp) -> Self::Coeff {
        let p = self.phase(e);
        match sign {
            1 => p,
            -1 => -p,
            0 => Self::Coeff::zero(),
            s => p * Self::Coeff::from_ratio(s, 1),
        }
    }
}

/// Formal units `q_ij`: coefficients are exact phase polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Symbolic<R = Ratio<i64>> {
    n: usize,
    _r: std::marker::PhantomData<R>,
}

impl<R> Symbolic<R> {
    pub fn new(n: usize) -> Self {
        Symbolic { n, _r: std::marker::PhantomData }
    }
}

impl<R: ExactRing> Deformation for Symbolic<R> {
    type Coeff = PhaseScalar<R>;
    fn n(&self) -> usize {
        self.n
    }
    fn phase(&self, e: &PhaseExp) -> PhaseScalar<R> {
        PhaseScalar::unit(e.clone())
    }
    fn mode(&self) -> &'static str {
        "symbolic"
    }
}

/// Numeric θ substituted into every phase.
#[derive(Debug, Clone)]
pub struct Numeric<F = f64> {
    theta: ThetaSpec<F>,
}

impl<F: Float> Numeric<F> {
    pub fn new(theta: ThetaSpec<F>) -> Result<Self, ScalarError> {
        if !theta.is_numeric() {
            return Err(ScalarError::SymbolicTheta);
        }
        Ok(Numeric { theta })
    }

    pub fn theta(&self) -> &ThetaSpec<F> {
        &self.theta
    }
}

impl<F> Deformation for Numeric<F>
where
    F: Float + fmt::Debug + fmt::Display + Send + Sync + 'static,
{
    type Coeff = Complex<F>;
    fn n(&self) -> usize {
        self.theta.n()
    }
    fn phase(&self, e: &PhaseExp) -> Complex<F> {
        e.evaluate(&self.theta).expect("phase index within theta rank")
    }
    fn mode(&self) -> &'static str {
        "numeric"
    }
}

/// The deformation matrix θ: either purely formal of rank `n`, or an
/// explicit skew-symmetric complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSpec<F = f64> {
    n: usize,
    values: Option<Vec<Complex<F>>>,
}

impl<F: Float> ThetaSpec<F> {
    pub fn symbolic(n: usize) -> Self {
        ThetaSpec { n, values: None }
    }

    /// Numeric θ from a row-major `n×n` matrix; rejects non-skew input.
    pub fn numeric(n: usize, values: Vec<Complex<F>>) -> Result<Self, ScalarError> {
        if values.len() != n * n {
            return Err(ScalarError::Malformed(format!("expected {} entries, got {}", n * n, values.len())));
        }
        let tol = F::from(1e-12).unwrap();
        for i in 0..n {
            for j in 0..n {
                let s = values[i * n + j] + values[j * n + i];
                if s.norm() > tol {
                    return Err(ScalarError::NotSkew(i + 1, j + 1));
                }
            }
        }
        Ok(ThetaSpec { n, values: Some(values) })
    }

    /// Real skew matrix from its upper-triangular entries `θ^{ij}`, `i<j`,
    /// listed row by row.
    pub fn from_upper(n: usize, upper: &[F]) -> Result<Self, ScalarError> {
        if upper.len() != pair_count(n) {
            return Err(ScalarError::Malformed(format!("expected {} upper entries", pair_count(n))));
        }
        let zero = Complex::new(F::zero(), F::zero());
        let mut v = vec![zero; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                v[i * n + j] = Complex::new(upper[k], F::zero());
                v[j * n + i] = Complex::new(-upper[k], F::zero());
                k += 1;
            }
        }
        ThetaSpec::numeric(n, v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_numeric(&self) -> bool {
        self.values.is_some()
    }

    pub fn mode(&self) -> &'static str {
        if self.is_numeric() {
            "numeric"
        } else {
            "symbolic"
        }
    }

    /// `θ^{ij}` with one-based indices.
    pub fn value(&self, i: usize, j: usize) -> Result<Complex<F>, ScalarError> {
        let v = self.values.as_ref().ok_or(ScalarError::SymbolicTheta)?;
        for &k in &[i, j] {
            if k == 0 || k > self.n {
                return Err(ScalarError::IndexOutOfRange { index: k, n: self.n });
            }
        }
        Ok(v[(i - 1) * self.n + (j - 1)])
    }

    /// `q_ij = exp(i θ^{ij}/2)`.
    pub fn q(&self, i: usize, j: usize) -> Result<Complex<F>, ScalarError> {
        PhaseExp::q(i, j).evaluate(self)
    }
}

impl ThetaSpec<f64> {
    /// A reproducible random real θ with entries in `(-π, π)`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let upper: Vec<f64> =
            (0..pair_count(n)).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        ThetaSpec::from_upper(n, &upper).expect("skew by construction")
    }

    /// Parses `{"n": int, "theta": ...}` where `theta` is either `n` rows of
    /// `n` entries or a flat list of `n²` entries, each entry `[re, im]` or a
    /// plain real number.
    pub fn from_json(text: &str) -> Result<Self, ScalarError> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| ScalarError::Malformed(e.to_string()))?;
        let n = v
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| ScalarError::Malformed("missing integer field n".into()))? as usize;
        let theta = v.get("theta").and_then(|x| x.as_array());
        let theta = match theta {
            Some(t) => t,
            None => return Ok(ThetaSpec::symbolic(n)),
        };
        let mut flat = Vec::new();
        let nested = if n == 1 {
            theta.len() == 1 && theta[0].as_array().map(|a| a.len() == 1).unwrap_or(false)
        } else {
            theta.len() == n && theta.len() != n * n
        };
        let entry = |x: &serde_json::Value| -> Result<Complex<f64>, ScalarError> {
            if let Some(r) = x.as_f64() {
                return Ok(Complex::new(r, 0.0));
            }
            let a = x.as_array().ok_or_else(|| ScalarError::Malformed("bad theta entry".into()))?;
            if a.len() != 2 {
                return Err(ScalarError::Malformed("theta entries must be [re, im]".into()));
            }
            let re = a[0].as_f64().ok_or_else(|| ScalarError::Malformed("bad real part".into()))?;
            let im = a[1].as_f64().ok_or_else(|| ScalarError::Malformed("bad imaginary part".into()))?;
            Ok(Complex::new(re, im))
        };
        if nested {
            for row in theta {
                let row = row.as_array().ok_or_else(|| ScalarError::Malformed("theta rows must be arrays".into()))?;
                if row.len() != n {
                    return Err(ScalarError::Malformed("theta row has wrong length".into()));
                }
                for x in row {
                    flat.push(entry(x)?);
                }
            }
        } else {
            for x in theta {
                flat.push(entry(x)?);
            }
        }
        ThetaSpec::numeric(n, flat)
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.values {
            None => serde_json::json!({ "n": self.n }),
            Some(v) => {
                let rows: Vec<Vec<[f64; 2]>> = (0..self.n)
                    .map(|i| (0..self.n).map(|j| [v[i * self.n + j].re, v[i * self.n + j].im]).collect())
                    .collect();
                serde_json::json!({ "n": self.n, "theta": rows })
            }
        }
    }
}

fn check_index(i: usize, n: usize) -> Result<(), ScalarError> {
    if i == 0 || i > n {
        Err(ScalarError::IndexOutOfRange { index: i, n })
    } else {
        Ok(())
    }
}

/// `Q_{ij;kl} = q_ki q_jl` as an exponent vector.
pub fn q_coeff_exp(i: usize, j: usize, k: usize, l: usize) -> PhaseExp {
    let mut e = PhaseExp::q(k, i);
    e.add_q(j, l, 1);
    e
}

/// `R_{IJ;I'J'} = ∏_{α,α'} Q_{i_α j_α; i'_α' j'_α'}`.
pub fn r_coeff_exp(i: &[usize], j: &[usize], i2: &[usize], j2: &[usize]) -> Result<PhaseExp, ScalarError> {
    if i.len() != j.len() {
        return Err(ScalarError::LengthMismatch(i.len(), j.len()));
    }
    if i2.len() != j2.len() {
        return Err(ScalarError::LengthMismatch(i2.len(), j2.len()));
    }
    let mut e = PhaseExp::one();
    for (a, b) in i.iter().zip(j) {
        for (c, d) in i2.iter().zip(j2) {
            e.add_q(*c, *a, 1);
            e.add_q(*b, *d, 1);
        }
    }
    Ok(e)
}

/// `K_{ij;i'j'} = q_{ii'} q_{j'i} q_{i'j} q_{jj'}`.
pub fn k_coeff_exp(i: usize, j: usize, i2: usize, j2: usize) -> PhaseExp {
    let mut e = PhaseExp::q(i, i2);
    e.add_q(j2, i, 1);
    e.add_q(i2, j, 1);
    e.add_q(j, j2, 1);
    e
}

/// `q_ij` in rank `n`, as an exact scalar.
pub fn phase_unit<R: ExactRing>(n: usize, i: usize, j: usize) -> Result<PhaseScalar<R>, ScalarError> {
    check_index(i, n)?;
    check_index(j, n)?;
    Ok(PhaseScalar::q(i, j))
}

pub fn q_coeff<R: ExactRing>(n: usize, i: usize, j: usize, k: usize, l: usize) -> Result<PhaseScalar<R>, ScalarError> {
    for x in [i, j, k, l] {
        check_index(x, n)?;
    }
    Ok(PhaseScalar::unit(q_coeff_exp(i, j, k, l)))
}

pub fn r_coeff<R: ExactRing>(
    n: usize,
    i: &[usize],
    j: &[usize],
    i2: &[usize],
    j2: &[usize],
) -> Result<PhaseScalar<R>, ScalarError> {
    for x in i.iter().chain(j).chain(i2).chain(j2) {
        check_index(*x, n)?;
    }
    Ok(PhaseScalar::unit(r_coeff_exp(i, j, i2, j2)?))
}

pub fn k_coeff<R: ExactRing>(
    n: usize,
    i: usize,
    j: usize,
    i2: usize,
    j2: usize,
) -> Result<PhaseScalar<R>, ScalarError> {
    for x in [i, j, i2, j2] {
        check_index(x, n)?;
    }
    Ok(PhaseScalar::unit(k_coeff_exp(i, j, i2, j2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    type P = PhaseScalar<Ratio<i64>>;

    #[test]
    fn pair_index_roundtrip() {
        for j in 1..12 {
            for i in 0..j {
                assert_eq!(pair_of_index(pair_index(i, j)), (i, j));
            }
        }
    }

    #[test]
    fn unit_normalization() {
        assert!(PhaseExp::q(1, 1).is_one());
        assert_eq!(PhaseExp::q(2, 1), PhaseExp::q(1, 2).inv());
        assert!(PhaseExp::q(1, 2).mul(&PhaseExp::q(2, 1)).is_one());
        let p: P = phase_unit(3, 2, 1).unwrap();
        assert_eq!(p.to_string(), "q12^-1");
        assert!(phase_unit::<Ratio<i64>>(3, 4, 1).is_err());
    }

    #[test]
    fn q_coeff_examples() {
        assert!(q_coeff_exp(1, 1, 2, 2).is_one());
        assert_eq!(q_coeff_exp(1, 2, 2, 1), PhaseExp::q_pow(1, 2, -2));
        let mut e = PhaseExp::q(3, 1);
        e.add_q(2, 4, 1);
        assert_eq!(q_coeff_exp(1, 2, 3, 4), e);
    }

    #[test]
    fn k_coeff_examples() {
        assert!(k_coeff_exp(1, 2, 1, 2).is_one());
        assert!(k_coeff_exp(1, 1, 2, 2).is_one());
        assert_eq!(k_coeff_exp(1, 2, 3, 4).to_string(), "q13*q23^-1*q14^-1*q24");
    }

    #[test]
    fn r_coeff_trivial_and_length_check() {
        assert!(r_coeff_exp(&[1], &[1], &[1], &[1]).unwrap().is_one());
        assert!(r_coeff_exp(&[1, 2], &[1], &[1], &[1]).is_err());
    }

    #[test]
    fn ring_examples() {
        let q12 = P::q(1, 2);
        assert!((q12.clone() + (-q12.clone())).is_zero());
        let prod = &P::q(1, 2) * &P::q(1, 3);
        assert_eq!(prod.len(), 1);
        assert_eq!(prod.to_string(), "q12*q13");
        let two_q = P::monomial(Ratio::from_integer(2), PhaseExp::q_pow(1, 2, 2));
        assert_eq!(two_q.inv().unwrap().to_string(), "1/2*q12^-2");
        assert!((q12.clone() + P::one()).inv().is_err());
        assert!(P::zero().inv().is_err());
    }

    #[test]
    fn display_forms() {
        let s = P::q(1, 2) * P::q(1, 2) * P::q(3, 1);
        assert_eq!(s.to_string(), "q12^2*q13^-1");
        let e = PhaseExp::q(3, 11);
        assert_eq!(e.to_string(), "q3_11");
        let m = P::q(1, 2) - P::one();
        assert_eq!(m.to_string(), "-1 + q12");
    }

    #[test]
    fn specialization() {
        let theta = ThetaSpec::from_upper(2, &[std::f64::consts::PI]).unwrap();
        let v = P::q(1, 2).specialize(&theta).unwrap();
        assert!((v - Complex::new(0.0, 1.0)).norm() < 1e-15);
        let one = (P::q(1, 2) * P::q(2, 1)).specialize(&theta).unwrap();
        assert!((one - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(P::one().specialize(&ThetaSpec::<f64>::symbolic(2)).is_err());
    }

    #[test]
    fn theta_json() {
        let t = ThetaSpec::from_json(r#"{"n":2,"theta":[[[0,0],[1.5,0]],[[-1.5,0],[0,0]]]}"#).unwrap();
        assert_eq!(t.value(1, 2).unwrap().re, 1.5);
        let flat = ThetaSpec::from_json(r#"{"n":2,"theta":[[0,0],[1.5,0],[-1.5,0],[0,0]]}"#).unwrap();
        assert_eq!(flat, t);
        let bad = ThetaSpec::from_json(r#"{"n":2,"theta":[[0,0],[1.5,0],[1.5,0],[0,0]]}"#);
        assert!(matches!(bad, Err(ScalarError::NotSkew(..))));
        let back = ThetaSpec::from_json(&t.to_json().to_string()).unwrap();
        assert_eq!(back, t);
        assert!(!ThetaSpec::from_json(r#"{"n":3}"#).unwrap().is_numeric());
    }
}
