//! Rational polyhedral cones and fans over ℤⁿ.
//!
//! Everything is brute force over small ray sets: facets come from subsets
//! of rays, Hilbert bases from fundamental parallelepipeds of simplicial
//! subcones. Adequate for the dimensions (≤ 4) and ray counts used here.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{self, IMatrix};

pub type LatticePoint = Vec<i64>;

/// Largest cone dimension accepted by [`hilbert_basis`].
pub const MAX_HILBERT_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("vector {0:?} has length {1}, expected {2}")]
    BadLength(Vec<i64>, usize, usize),
    #[error("zero vector given as a ray")]
    ZeroRay,
    #[error("cone {0} is not strongly convex")]
    NotStronglyConvex(usize),
    #[error("cones {0} and {1} intersect in a set that is not a face of both")]
    NotAFace(usize, usize),
    #[error("cone dimension {0} exceeds the supported bound {MAX_HILBERT_DIM}")]
    DimensionTooLarge(usize),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("ray index {0} out of range")]
    BadRayIndex(usize),
    #[error("malformed fan input: {0}")]
    Malformed(String),
}

/// A cone generated by primitive integer rays.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    n: usize,
    rays: Vec<LatticePoint>,
}

impl Cone {
    /// Rays are made primitive; duplicates are dropped keeping first
    /// occurrences.
    pub fn new(n: usize, rays: Vec<LatticePoint>) -> Result<Self, FanError> {
        let mut out: Vec<LatticePoint> = Vec::new();
        for r in rays {
            if r.len() != n {
                let l = r.len();
                return Err(FanError::BadLength(r, l, n));
            }
            if r.iter().all(|x| *x == 0) {
                return Err(FanError::ZeroRay);
            }
            let p = intlin::primitive(&r);
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(Cone { n, rays: out })
    }

    pub fn zero(n: usize) -> Self {
        Cone { n, rays: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rays(&self) -> &[LatticePoint] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        intlin::rank(&self.rays, self.n)
    }

    pub fn ray_set(&self) -> BTreeSet<LatticePoint> {
        self.rays.iter().cloned().collect()
    }

    /// Equality as cones (same ray set, order ignored).
    pub fn same_as(&self, other: &Cone) -> bool {
        self.n == other.n && self.ray_set() == other.ray_set()
    }

    pub fn is_strongly_convex(&self) -> bool {
        is_strongly_convex(self)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let h = HRep::of(self);
        h.contains(x)
    }

    /// Rays extend to a basis of ℤⁿ.
    pub fn is_smooth(&self) -> bool {
        if !intlin::independent(&self.rays, self.n) {
            return false;
        }
        let (d, _, _) = intlin::smith(&self.rays, self.n);
        (0..self.rays.len()).all(|i| d[i][i] == 1)
    }
}

/// True iff no nontrivial non-negative combination of the rays vanishes.
/// Checked on circuits: a non-negative dependency decomposes conformally
/// into non-negative circuits.
pub fn is_strongly_convex(c: &Cone) -> bool {
    let k = c.rays.len();
    let maxsize = (c.dim() + 1).min(k);
    for size in 1..=maxsize {
        for s in subsets(k, size) {
            let rows: IMatrix = s.iter().map(|&i| c.rays[i].clone()).collect();
            if intlin::rank(&rows, c.n) != size - 1 {
                continue;
            }
            let ker = intlin::left_kernel(&rows, c.n);
            if ker.len() != 1 {
                continue;
            }
            let v = &ker[0];
            if v.iter().any(|x| *x == 0) {
                continue;
            }
            if v.iter().all(|x| *x > 0) || v.iter().all(|x| *x < 0) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, k: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            if k - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, k, size, cur, out);
            cur.pop();
        }
    }
    rec(0, k, size, &mut cur, &mut out);
    out
}

/// Coordinates adapted to a cone: `basis` is a ℤ-basis (rows) of the
/// saturated lattice spanned by the rays, `coords` maps points of that
/// lattice to ℤ^r, `perp` is a basis of the orthogonal lattice σ^⊥ and
/// `lift` is an integer right inverse of `m ↦ basis·m`.
#[derive(Debug, Clone)]
struct Adapted {
    n: usize,
    r: usize,
    basis: IMatrix,
    coords: IMatrix,
    perp: IMatrix,
    lift: IMatrix,
}

impl Adapted {
    fn of(rays: &[LatticePoint], n: usize) -> Adapted {
        let perp = intlin::right_kernel(rays, n);
        let basis = if perp.is_empty() { intlin::identity(n) } else { intlin::right_kernel(&perp, n) };
        let r = basis.len();
        // basis is r×n with saturated row lattice, so its Smith form is [I 0].
        let coords = if r == 0 { Vec::new() } else { left_inverse(&basis, n) };
        let lift = if r == 0 { Vec::new() } else { intlin::transpose(&coords, n) };
        Adapted { n, r, basis, coords, perp, lift }
    }

    fn to_coords(&self, x: &[i64]) -> Vec<i64> {
        intlin::mat_vec(&self.coords, x)
    }

    /// A point of ℤⁿ whose pairings with the basis rows are `y`, reduced
    /// modulo σ^⊥.
    fn lift_dual(&self, y: &[i64]) -> Vec<i64> {
        let m: Vec<i64> = (0..self.n).map(|i| self.lift[i].iter().zip(y).map(|(a, b)| a * b).sum()).collect();
        debug_assert_eq!(intlin::mat_vec(&self.basis, &m), y.to_vec());
        let reduced = intlin::reduce_modulo(&m, &self.perp);
        debug_assert_eq!(intlin::mat_vec(&self.basis, &reduced), y.to_vec());
        reduced
    }
}

/// For `b` (r×n) with saturated row lattice, an integer `P` (r×n) with
/// `P·bᵀ = I`, i.e. coordinates of lattice points in the row basis.
fn left_inverse(b: &[Vec<i64>], n: usize) -> IMatrix {
    let bt = intlin::transpose(b, n);
    let r = b.len();
    let (d, u, v) = intlin::smith(&bt, r);
    debug_assert!((0..r).all(|i| d[i][i] == 1));
    // P = V · Dᵀ · U with Dᵀ = [I_r 0]
    let du: IMatrix = u[..r].to_vec();
    intlin::mat_mul(&v, &du, n)
}

/// Facet normals of a full-dimensional pointed cone in ℤ^r, given by its
/// rays; normals are primitive, oriented inward, deduplicated, in subset
/// enumeration order.
fn facet_normals(rays: &[Vec<i64>], r: usize) -> Vec<Vec<i64>> {
    let k = rays.len();
    if r == 0 {
        return Vec::new();
    }
    let mut out: Vec<Vec<i64>> = Vec::new();
    for s in subsets(k, r - 1) {
        let rows: IMatrix = s.iter().map(|&i| rays[i].clone()).collect();
        if intlin::rank(&rows, r) != r - 1 {
            continue;
        }
        let ker = intlin::right_kernel(&rows, r);
        debug_assert_eq!(ker.len(), 1);
        let mut w = intlin::primitive(&ker[0]);
        let vals: Vec<i64> = rays.iter().map(|v| intlin::dot(&w, v)).collect();
        if vals.iter().all(|x| *x <= 0) {
            for x in w.iter_mut() {
                *x = -*x;
            }
        } else if vals.iter().any(|x| *x < 0) {
            continue;
        }
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// Inequality description `perp·x = 0`, `normals·x ≥ 0`.
#[derive(Debug, Clone)]
pub struct HRep {
    pub n: usize,
    pub equalities: IMatrix,
    pub inequalities: IMatrix,
}

impl HRep {
    pub fn of(c: &Cone) -> HRep {
        let a = Adapted::of(&c.rays, c.n);
        let crays: Vec<Vec<i64>> = c.rays.iter().map(|v| a.to_coords(v)).collect();
        let normals = facet_normals(&crays, a.r);
        let inequalities = normals.iter().map(|w| a.lift_dual(w)).collect();
        HRep { n: c.n, equalities: a.perp, inequalities }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.equalities.iter().all(|m| intlin::dot(m, x) == 0)
            && self.inequalities.iter().all(|m| intlin::dot(m, x) >= 0)
    }

    /// All constraints as inequalities `a·x ≥ 0`.
    fn rows(&self) -> IMatrix {
        let mut rows = self.inequalities.clone();
        for e in &self.equalities {
            rows.push(e.clone());
            rows.push(e.iter().map(|x| -x).collect());
        }
        rows
    }
}

/// Extreme rays of the pointed cone `{x : a·x ≥ 0 for all rows a}`.
fn rays_from_inequalities(rows: &[Vec<i64>], n: usize) -> Vec<LatticePoint> {
    let mut out: Vec<LatticePoint> = Vec::new();
    if n == 0 {
        return out;
    }
    let feasible = |x: &[i64]| rows.iter().all(|a| intlin::dot(a, x) >= 0);
    for s in subsets(rows.len(), n - 1) {
        let sub: IMatrix = s.iter().map(|&i| rows[i].clone()).collect();
        if intlin::rank(&sub, n) != n - 1 {
            continue;
        }
        let ker = intlin::right_kernel(&sub, n);
        let k = intlin::primitive(&ker[0]);
        for cand in [k.clone(), k.iter().map(|x| -x).collect::<Vec<_>>()] {
            if feasible(&cand) && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    if n == 1 {
        // no constraints selected; the candidates are ±e₁
        for cand in [vec![1], vec![-1]] {
            if feasible(&cand) && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out
}

/// Generators of σ∨ = {m : ⟨m,u⟩ ≥ 0 ∀u ∈ σ}. The pointed part comes
/// first, then `+b, −b` for a basis `b` of σ^⊥. The zero cone gives ±eᵢ.
pub fn dual_cone(c: &Cone) -> Cone {
    let a = Adapted::of(&c.rays, c.n);
    let crays: Vec<Vec<i64>> = c.rays.iter().map(|v| a.to_coords(v)).collect();
    let mut rays: Vec<LatticePoint> = facet_normals(&crays, a.r).iter().map(|w| a.lift_dual(w)).collect();
    for b in &a.perp {
        rays.push(b.clone());
        rays.push(b.iter().map(|x| -x).collect());
    }
    Cone::new(c.n, rays).expect("dual generators are nonzero")
}

/// Hilbert basis of `C ∩ ℤⁿ` for a pointed cone `C`: the minimal
/// generating set of the semigroup, in [`sort_generators`] order.
pub fn hilbert_basis(c: &Cone) -> Result<Vec<LatticePoint>, FanError> {
    if !c.is_strongly_convex() {
        return Err(FanError::NotPointed);
    }
    let a = Adapted::of(&c.rays, c.n);
    if a.r > MAX_HILBERT_DIM {
        return Err(FanError::DimensionTooLarge(a.r));
    }
    let crays: Vec<Vec<i64>> = c.rays.iter().map(|v| a.to_coords(v)).collect();
    let hb = hilbert_basis_full(&crays, a.r);
    let back =
        |y: &Vec<i64>| -> LatticePoint { (0..c.n).map(|j| (0..a.r).map(|i| y[i] * a.basis[i][j]).sum()).collect() };
    let mut out: Vec<LatticePoint> = hb.iter().map(back).collect();
    sort_generators(&mut out);
    Ok(out)
}

/// Canonical generator order: by ℓ¹ norm, then lexicographically
/// decreasing, so coordinate vectors come out as e₁, e₂, … .
pub fn sort_generators(v: &mut [LatticePoint]) {
    v.sort_by(|a, b| {
        let na: i64 = a.iter().map(|x| x.abs()).sum();
        let nb: i64 = b.iter().map(|x| x.abs()).sum();
        na.cmp(&nb).then_with(|| b.cmp(a))
    });
}

/// Hilbert basis of a full-dimensional pointed cone in ℤ^r.
fn hilbert_basis_full(rays: &[Vec<i64>], r: usize) -> Vec<Vec<i64>> {
    if r == 0 {
        return Vec::new();
    }
    let normals = facet_normals(rays, r);
    let inside = |x: &[i64]| normals.iter().all(|w| intlin::dot(w, x) >= 0);
    let mut cand: BTreeSet<Vec<i64>> = rays.iter().cloned().collect();
    for s in subsets(rays.len(), r) {
        let w: IMatrix = s.iter().map(|&i| rays[i].clone()).collect();
        if intlin::rank(&w, r) != r {
            continue;
        }
        for p in parallelepiped_points(&w, r) {
            cand.insert(p);
        }
    }
    let cand: Vec<Vec<i64>> = cand.into_iter().collect();
    cand.iter()
        .filter(|x| {
            !cand.iter().any(|g| {
                g != *x && {
                    let d: Vec<i64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
                    d.iter().any(|v| *v != 0) && inside(&d)
                }
            })
        })
        .cloned()
        .collect()
}

/// Nonzero lattice points `Σ λᵢ wᵢ` with `λ ∈ [0,1)^r`, for `r` independent
/// rows `w`.
fn parallelepiped_points(w: &[Vec<i64>], r: usize) -> Vec<Vec<i64>> {
    // x = Wᵀ λ; coset representatives of ℤ^r / Wᵀℤ^r via Smith form.
    let wt = intlin::transpose(w, r);
    let (d, u, _v) = intlin::smith(&wt, r);
    let diag: Vec<i64> = (0..r).map(|i| d[i][i]).collect();
    let uinv = unimodular_inverse(&u);
    let mut out = Vec::new();
    let mut a = vec![0i64; r];
    loop {
        let x = intlin::mat_vec(&uinv, &a);
        let lam = intlin::solve_rational(&wt, &x).expect("independent rays");
        let frac: Vec<intlin::Q> = lam.iter().map(|l| l - l.floor()).collect();
        let p: Vec<i64> = (0..r)
            .map(|i| {
                let s: intlin::Q = (0..r).map(|j| frac[j] * intlin::Q::from_integer(wt[i][j])).sum();
                debug_assert!(s.is_integer());
                s.to_integer()
            })
            .collect();
        if p.iter().any(|v| *v != 0) {
            out.push(p);
        }
        // odometer over a_i ∈ [0, d_i)
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            a[i] += 1;
            if a[i] < diag[i] {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

fn unimodular_inverse(u: &[Vec<i64>]) -> IMatrix {
    let n = u.len();
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let e: Vec<i64> = (0..n).map(|i| i64::from(i == j)).collect();
            intlin::solve_rational(u, &e)
                .expect("unimodular")
                .into_iter()
                .map(|q| {
                    debug_assert!(q.is_integer());
                    q.to_integer()
                })
                .collect()
        })
        .collect();
    intlin::transpose(&cols, n)
}

/// Generators of the semigroup σ∨ ∩ L*. For full-dimensional σ this is the
/// Hilbert basis of the (pointed) dual cone. Otherwise it is a Hilbert basis
/// of the pointed quotient, lifted and reduced modulo σ^⊥, followed by
/// `±b` for an HNF basis `b` of σ^⊥.
pub fn semigroup_generators(sigma: &Cone) -> Result<Vec<LatticePoint>, FanError> {
    let a = Adapted::of(&sigma.rays, sigma.n);
    if a.r > MAX_HILBERT_DIM {
        return Err(FanError::DimensionTooLarge(a.r));
    }
    let crays: Vec<Vec<i64>> = sigma.rays.iter().map(|v| a.to_coords(v)).collect();
    let normals = facet_normals(&crays, a.r);
    let hb = hilbert_basis_full(&normals, a.r);
    let mut out: Vec<LatticePoint> = hb.iter().map(|y| a.lift_dual(y)).collect();
    sort_generators(&mut out);
    for b in &a.perp {
        out.push(b.clone());
        out.push(b.iter().map(|x| -x).collect());
    }
    Ok(out)
}

/// m ∈ σ∨.
pub fn in_dual(sigma: &Cone, m: &[i64]) -> bool {
    sigma.rays.iter().all(|v| intlin::dot(v, m) >= 0)
}

/// Whether `target` is a non-negative integer combination of `gens`, with
/// every coefficient at most `bound`.
pub fn in_semigroup(target: &[i64], gens: &[LatticePoint], bound: i64) -> bool {
    fn rec(t: &[i64], gens: &[LatticePoint], idx: usize, bound: i64) -> bool {
        if t.iter().all(|x| *x == 0) {
            return true;
        }
        if idx == gens.len() {
            return false;
        }
        let mut cur = t.to_vec();
        for _ in 0..=bound {
            if rec(&cur, gens, idx + 1, bound) {
                return true;
            }
            for (c, g) in cur.iter_mut().zip(&gens[idx]) {
                *c -= g;
            }
        }
        false
    }
    rec(target, gens, 0, bound)
}

/// Checks that `gens` generate σ∨ ∩ L*: each lies in σ∨ and every element
/// of [`semigroup_generators`] is reachable with coefficients ≤ `bound`.
pub fn generates_dual_semigroup(sigma: &Cone, gens: &[LatticePoint], bound: i64) -> Result<bool, FanError> {
    if gens.iter().any(|g| g.len() != sigma.n || !in_dual(sigma, g)) {
        return Ok(false);
    }
    let ours = semigroup_generators(sigma)?;
    Ok(ours.iter().all(|h| in_semigroup(h, gens, bound)))
}

/// All faces of a strongly convex cone, from `0` up to the cone itself,
/// ordered by dimension and then by ray indices.
pub fn faces(c: &Cone) -> Vec<Cone> {
    face_index_sets(c)
        .into_iter()
        .map(|s| Cone { n: c.n, rays: s.iter().map(|&i| c.rays[i].clone()).collect() })
        .collect()
}

fn face_index_sets(c: &Cone) -> Vec<Vec<usize>> {
    let h = HRep::of(c);
    let all: BTreeSet<usize> = (0..c.rays.len()).collect();
    let facets: Vec<BTreeSet<usize>> = h
        .inequalities
        .iter()
        .map(|w| (0..c.rays.len()).filter(|&i| intlin::dot(w, &c.rays[i]) == 0).collect())
        .collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![all];
    while let Some(s) = frontier.pop() {
        let v: Vec<usize> = s.iter().copied().collect();
        if !found.insert(v) {
            continue;
        }
        for f in &facets {
            let t: BTreeSet<usize> = s.intersection(f).copied().collect();
            if t != s {
                frontier.push(t);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by_key(|s| {
        let rows: IMatrix = s.iter().map(|&i| c.rays[i].clone()).collect();
        (intlin::rank(&rows, c.n), s.clone())
    });
    out
}

/// The intersection of two cones, as a cone.
pub fn intersect(a: &Cone, b: &Cone) -> Cone {
    let mut rows = HRep::of(a).rows();
    rows.extend(HRep::of(b).rows());
    let rays = rays_from_inequalities(&rows, a.n);
    Cone::new(a.n, rays).expect("nonzero rays")
}

/// Whether `tau` (as a cone) is a face of `sigma`.
pub fn is_face(tau: &Cone, sigma: &Cone) -> bool {
    faces(sigma).iter().any(|f| f.same_as(tau))
}

/// A fan: face-closed list of cones, sorted by dimension, with the indices
/// of the maximal ones.
#[derive(Debug, Clone)]
pub struct Fan {
    n: usize,
    cones: Vec<Cone>,
    maximal: Vec<usize>,
}

impl Fan {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn maximal(&self) -> Vec<&Cone> {
        self.maximal.iter().map(|&i| &self.cones[i]).collect()
    }

    pub fn maximal_indices(&self) -> &[usize] {
        &self.maximal
    }

    pub fn position(&self, c: &Cone) -> Option<usize> {
        self.cones.iter().position(|x| x.same_as(c))
    }

    /// Every cone with its dual semigroup generators and relation lattice.
    /// Cone ids are positions in [`Fan::cones`].
    pub fn summary(&self) -> Result<serde_json::Value, FanError> {
        let mut cones = Vec::new();
        for (id, c) in self.cones.iter().enumerate() {
            let gens = semigroup_generators(c)?;
            let rels: Vec<serde_json::Value> = relation_lattice(&gens)
                .relations
                .into_iter()
                .map(|(p, r)| serde_json::json!({"lhs": p, "rhs": r}))
                .collect();
            cones.push(serde_json::json!({
                "id": id,
                "dim": c.dim(),
                "rays": c.rays(),
                "maximal": self.maximal.contains(&id),
                "generators": gens,
                "relations": rels,
            }));
        }
        Ok(serde_json::json!({
            "n": self.n,
            "maximal": self.maximal,
            "charts": self.maximal.len(),
            "cones": cones,
        }))
    }

    /// Reads `{"n": int, "rays": [[int,...],...], "cones": [[ray indices],...]}`
    /// with zero-based ray indices; the face closure is computed.
    pub fn from_json(text: &str) -> Result<Fan, FanError> {
        #[derive(Deserialize)]
        struct Input {
            n: usize,
            rays: Vec<Vec<i64>>,
            cones: Vec<Vec<usize>>,
        }
        let inp: Input = serde_json::from_str(text).map_err(|e| FanError::Malformed(e.to_string()))?;
        let mut cones = Vec::new();
        for c in &inp.cones {
            let mut rays = Vec::new();
            for &i in c {
                rays.push(inp.rays.get(i).ok_or(FanError::BadRayIndex(i))?.clone());
            }
            cones.push(Cone::new(inp.n, rays)?);
        }
        validate_fan(inp.n, &cones)
    }
}

/// Face closure of `cones`, or the first violated axiom. Witness indices
/// refer to the input list.
pub fn validate_fan(n: usize, cones: &[Cone]) -> Result<Fan, FanError> {
    for (i, c) in cones.iter().enumerate() {
        if c.n != n {
            return Err(FanError::BadLength(Vec::new(), c.n, n));
        }
        if !c.is_strongly_convex() {
            return Err(FanError::NotStronglyConvex(i));
        }
    }
    for i in 0..cones.len() {
        for j in (i + 1)..cones.len() {
            let t = intersect(&cones[i], &cones[j]);
            if !is_face(&t, &cones[i]) || !is_face(&t, &cones[j]) {
                return Err(FanError::NotAFace(i, j));
            }
        }
    }
    let mut keyed: BTreeMap<(usize, Vec<LatticePoint>), Cone> = BTreeMap::new();
    for c in cones {
        for f in faces(c) {
            let mut key: Vec<LatticePoint> = f.rays.clone();
            key.sort();
            keyed.entry((f.dim(), key)).or_insert(f);
        }
    }
    let all: Vec<Cone> = keyed.into_values().collect();
    let maximal: Vec<usize> = (0..all.len())
        .filter(|&i| !(0..all.len()).any(|j| j != i && all[j].dim() > all[i].dim() && is_face(&all[i], &all[j])))
        .collect();
    Ok(Fan { n, cones: all, maximal })
}

/// Relations `Σ (p_a − r_a) m_a = 0` among semigroup generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationLattice {
    pub relations: Vec<(Vec<i64>, Vec<i64>)>,
}

impl RelationLattice {
    /// Every relation contracts to zero against `gens`.
    pub fn holds(&self, gens: &[LatticePoint]) -> bool {
        let n = gens.first().map(|g| g.len()).unwrap_or(0);
        self.relations
            .iter()
            .all(|(p, r)| (0..n).all(|i| gens.iter().enumerate().map(|(a, g)| (p[a] - r[a]) * g[i]).sum::<i64>() == 0))
    }
}

/// HNF basis of the integer relations among `gens`, split into positive
/// and negative parts.
pub fn relation_lattice(gens: &[LatticePoint]) -> RelationLattice {
    let n = gens.first().map(|g| g.len()).unwrap_or(0);
    let ker = intlin::left_kernel(gens, n);
    let relations = ker
        .into_iter()
        .map(|v| (v.iter().map(|x| (*x).max(0)).collect(), v.iter().map(|x| (-*x).max(0)).collect()))
        .collect();
    RelationLattice { relations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cone(n: usize, rays: &[&[i64]]) -> Cone {
        Cone::new(n, rays.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn as_set(v: &[LatticePoint]) -> BTreeSet<LatticePoint> {
        v.iter().cloned().collect()
    }

    #[test]
    fn convexity() {
        assert!(cone(2, &[&[1, 0], &[0, 1]]).is_strongly_convex());
        assert!(!cone(2, &[&[1, 0], &[-1, 0]]).is_strongly_convex());
        assert!(!cone(2, &[&[1, 0], &[-1, 1], &[-1, -1]]).is_strongly_convex());
        assert!(cone(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]).is_strongly_convex());
        assert!(Cone::zero(2).is_strongly_convex());
    }

    #[test]
    fn duals() {
        let q = cone(2, &[&[1, 0], &[0, 1]]);
        assert!(dual_cone(&q).same_as(&q));
        let orb = cone(2, &[&[1, 0], &[1, 2]]);
        assert!(dual_cone(&orb).same_as(&cone(2, &[&[2, -1], &[0, 1]])));
        let z = dual_cone(&Cone::zero(2));
        assert_eq!(as_set(z.rays()), as_set(&[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]));
    }

    #[test]
    fn hilbert_bases() {
        let orb = cone(2, &[&[1, 0], &[1, 2]]);
        let hb = hilbert_basis(&dual_cone(&orb)).unwrap();
        assert_eq!(as_set(&hb), as_set(&[vec![2, -1], vec![0, 1], vec![1, 0]]));
        let coni = cone(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        let hb = hilbert_basis(&dual_cone(&coni)).unwrap();
        assert_eq!(as_set(&hb), as_set(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, -1]]));
        // A_2 singularity cone(e2, 3e1-2e2): dual Hilbert basis has 3 elements
        let a2 = cone(2, &[&[0, 1], &[3, -2]]);
        let hb = semigroup_generators(&a2).unwrap();
        assert_eq!(as_set(&hb), as_set(&[vec![1, 0], vec![2, 3], vec![1, 1]]));
    }

    #[test]
    fn non_pointed_duals() {
        let tau = cone(2, &[&[1, 0]]);
        let g = semigroup_generators(&tau).unwrap();
        assert_eq!(g, vec![vec![1, 0], vec![0, 1], vec![0, -1]]);
        let q = cone(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(semigroup_generators(&q).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        assert!(generates_dual_semigroup(&tau, &[vec![1, 0], vec![0, 1], vec![0, -1]], 8).unwrap());
        assert!(generates_dual_semigroup(&tau, &[vec![1, 1], vec![0, 1], vec![0, -1]], 8).unwrap());
        assert!(!generates_dual_semigroup(&tau, &[vec![0, 1], vec![0, -1]], 8).unwrap());
        let g0 = semigroup_generators(&Cone::zero(2)).unwrap();
        assert_eq!(g0.len(), 4);
    }

    #[test]
    fn face_lattices() {
        let q = cone(2, &[&[1, 0], &[0, 1]]);
        let f = faces(&q);
        assert_eq!(f.len(), 4);
        assert_eq!(f[0].dim(), 0);
        assert!(f[3].same_as(&q));
        assert_eq!(faces(&cone(2, &[&[1, 1]])).len(), 2);
        let coni = cone(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        // square pyramid: 1 + 4 + 4 + 1
        assert_eq!(faces(&coni).len(), 10);
    }

    #[test]
    fn fans() {
        let v1 = vec![1, 0];
        let v2 = vec![0, 1];
        let v3 = vec![-1, -1];
        let cones = vec![
            Cone::new(2, vec![v2.clone(), v3.clone()]).unwrap(),
            Cone::new(2, vec![v3.clone(), v1.clone()]).unwrap(),
            Cone::new(2, vec![v1, v2]).unwrap(),
        ];
        let fan = validate_fan(2, &cones).unwrap();
        assert_eq!(fan.cones().len(), 7);
        assert_eq!(fan.maximal().len(), 3);
        let bad = vec![cone(2, &[&[1, 0], &[0, 1]]), cone(2, &[&[-1, 0], &[2, 1]])];
        assert_eq!(validate_fan(2, &bad).unwrap_err(), FanError::NotAFace(0, 1));
        let single = validate_fan(2, &[cone(2, &[&[1, 0], &[1, 2]])]).unwrap();
        assert_eq!(single.maximal().len(), 1);
    }

    #[test]
    fn intersections() {
        let a = cone(2, &[&[1, 0], &[0, 1]]);
        let b = cone(2, &[&[-1, 0], &[2, 1]]);
        assert!(intersect(&a, &b).same_as(&cone(2, &[&[0, 1], &[2, 1]])));
        let c = cone(2, &[&[0, 1], &[-1, -1]]);
        assert!(intersect(&a, &c).same_as(&cone(2, &[&[0, 1]])));
    }

    #[test]
    fn relations() {
        let orb = vec![vec![2, -1], vec![0, 1], vec![1, 0]];
        let r = relation_lattice(&orb);
        assert_eq!(r.relations, vec![(vec![1, 1, 0], vec![0, 0, 2])]);
        assert!(r.holds(&orb));
        let coni = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, -1]];
        let r = relation_lattice(&coni);
        assert_eq!(r.relations, vec![(vec![1, 1, 0, 0], vec![0, 0, 1, 1])]);
        assert!(relation_lattice(&[vec![1, 0], vec![0, 1]]).relations.is_empty());
    }

    #[test]
    fn smoothness() {
        assert!(cone(2, &[&[1, 0], &[0, 1]]).is_smooth());
        assert!(!cone(2, &[&[1, 0], &[1, 2]]).is_smooth());
    }

    fn random_cone() -> impl Strategy<Value = Cone> {
        prop::collection::vec(prop::collection::vec(-3i64..4, 3), 3..6).prop_filter_map("pointed full cone", |rays| {
            let c = Cone::new(3, rays).ok()?;
            (c.is_strongly_convex() && c.dim() == 3).then_some(c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn double_dual_is_identity(c in random_cone()) {
            let dd = dual_cone(&dual_cone(&c));
            // the input rays may include non-extremal generators
            let ext: Vec<LatticePoint> = rays_from_inequalities(&HRep::of(&c).rows(), 3);
            prop_assert_eq!(as_set(dd.rays()), as_set(&ext));
        }

        #[test]
        fn hilbert_basis_elements_are_irreducible(c in random_cone()) {
            let hb = semigroup_generators(&c).unwrap();
            let d = dual_cone(&c);
            for h in &hb {
                prop_assert!(in_dual(&c, h));
                // h = a + b with a,b nonzero in the box would contradict irreducibility
                let bound = intlin::abs_max(h);
                let mut reducible = false;
                let r = -bound..=bound;
                for x in r.clone() { for y in r.clone() { for z in r.clone() {
                    let a = [x, y, z];
                    let b = [h[0]-x, h[1]-y, h[2]-z];
                    if a != [0,0,0] && b != [0,0,0] && in_dual(&c, &a) && in_dual(&c, &b) { reducible = true; }
                }}}
                prop_assert!(!reducible);
                prop_assert!(d.contains(h));
            }
        }

        #[test]
        fn relation_lattice_contracts_to_zero(c in random_cone()) {
            let hb = semigroup_generators(&c).unwrap();
            let r = relation_lattice(&hb);
            prop_assert!(r.holds(&hb));
            prop_assert_eq!(r.relations.len(), hb.len() - 3);
        }
    }
}
