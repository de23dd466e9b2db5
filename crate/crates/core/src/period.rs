//! Classical periods of Laurent polynomials and affine matching of periods.
//!
//! The period of `g` is `Σ_d c_d t^d` with `c_d` the constant term of `g^d`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{degree, hull_vertices, LatticePoint, Polygon, Rational};
use crate::laurent::{mm_space, ParamLaurent};
use crate::linalg::{determinant, solve_affine};
use crate::poly::ParamPolynomial;
use crate::singularity::{singularity_content, SingularityContent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSeries {
    pub params: Vec<String>,
    /// `c_0, …, c_D`.
    pub coeffs: Vec<ParamPolynomial>,
}

impl PeriodSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, d: usize) -> &ParamPolynomial {
        &self.coeffs[d]
    }

    /// The first `order + 1` coefficients.
    pub fn truncate(&self, order: usize) -> PeriodSeries {
        PeriodSeries {
            params: self.params.clone(),
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }
}

trait Coefficient: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn add_assign(&mut self, o: &Self);
}

impl Coefficient for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
}

impl Coefficient for ParamPolynomial {
    fn zero_like(&self) -> Self {
        ParamPolynomial::zero(self.nvars())
    }
    fn vanishes(&self) -> bool {
        ParamPolynomial::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
}

/// Half-planes `<n, x> >= c` cutting out the hull of `pts`, or `None` when the
/// points are collinear.
fn half_planes(pts: &[LatticePoint]) -> Option<Vec<(LatticePoint, i64)>> {
    let verts = hull_vertices(pts).ok()?;
    let k = verts.len();
    Some(
        (0..k)
            .map(|i| {
                let n = (verts[(i + 1) % k] - verts[i]).rot90();
                (n, n.dot(verts[i]))
            })
            .collect(),
    )
}

fn constant_terms<C: Coefficient>(terms: &[(LatticePoint, C)], order: usize, one: C) -> Vec<C> {
    let support: Vec<LatticePoint> = terms.iter().map(|(e, _)| *e).collect();
    let planes = half_planes(&support);
    // `e` can still return to the origin in `left` steps iff `-e ∈ left·conv(S)`
    let reachable = |e: LatticePoint, left: usize| match &planes {
        Some(hp) => hp.iter().all(|(n, c)| -n.dot(e) >= (left as i64) * c),
        None => true,
    };
    let mut out = vec![one.clone()];
    let mut cur: HashMap<LatticePoint, C> = HashMap::new();
    cur.insert(LatticePoint::ORIGIN, one.clone());
    for step in 1..=order {
        let left = order - step;
        let mut next: HashMap<LatticePoint, C> = HashMap::with_capacity(cur.len() * 2);
        for (e, c) in &cur {
            for (s, cs) in terms {
                let t = *e + *s;
                if !reachable(t, left) {
                    continue;
                }
                let v = c.mul(cs);
                next.entry(t).or_insert_with(|| one.zero_like()).add_assign(&v);
            }
        }
        next.retain(|_, c| !c.vanishes());
        out.push(next.get(&LatticePoint::ORIGIN).cloned().unwrap_or_else(|| one.zero_like()));
        cur = next;
    }
    out
}

/// `c_0, …, c_order` of the classical period of `g`.
pub fn classical_period(g: &ParamLaurent, order: usize) -> PeriodSeries {
    let n = g.nparams();
    let coeffs = if n == 0 {
        let terms: Vec<(LatticePoint, Rational)> =
            g.terms().map(|(e, c)| (*e, c.constant_term())).collect();
        constant_terms(&terms, order, Rational::one())
            .into_iter()
            .map(|c| ParamPolynomial::constant(0, c))
            .collect()
    } else {
        let terms: Vec<(LatticePoint, ParamPolynomial)> =
            g.terms().map(|(e, c)| (*e, c.clone())).collect();
        constant_terms(&terms, order, ParamPolynomial::one(n))
    };
    PeriodSeries { params: g.params().to_vec(), coeffs }
}

/// An affine map `a ↦ M a + c` with `s1(a) = s2(M a + c)` through `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMatch {
    pub matrix: Vec<Vec<Rational>>,
    pub offset: Vec<Rational>,
    pub order: usize,
}

impl AffineMatch {
    pub fn apply(&self, a: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, c)| row.iter().zip(a).fold(c.clone(), |acc, (m, x)| acc + m * x))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineComparison {
    Match(AffineMatch),
    /// No invertible affine map exists; the coefficients through `order`
    /// already rule it out.
    NoMatch { order: usize },
    /// The solver could not decide.
    Inconclusive { order: usize },
}

impl AffineComparison {
    pub fn matched(&self) -> Option<&AffineMatch> {
        match self {
            AffineComparison::Match(m) => Some(m),
            _ => None,
        }
    }
}

/// Upper bound on the number of search branches explored by the solver.
const BRANCH_BUDGET: usize = 4096;

enum Search {
    Found(Vec<ParamPolynomial>),
    Exhausted,
    GaveUp,
}

struct Solver {
    unknowns: usize,
    k: usize,
    branches: usize,
}

impl Solver {
    fn det_nonzero(&self, values: &[Rational]) -> bool {
        let k = self.k;
        let m: Vec<Vec<Rational>> =
            (0..k).map(|i| (0..k).map(|j| values[i * k + j].clone()).collect()).collect();
        !determinant(&m).is_zero()
    }

    /// Identity-like values for unknowns that no equation constrains.
    fn completions(&self) -> Vec<Vec<Rational>> {
        let k = self.k;
        let identity: Vec<Rational> = (0..self.unknowns)
            .map(|u| if u < k * k && u / k == u % k { Rational::one() } else { Rational::zero() })
            .collect();
        let mut out = vec![identity.clone()];
        for shift in 1..4i64 {
            let v: Vec<Rational> = identity
                .iter()
                .enumerate()
                .map(|(u, x)| if u < k * k { x + Rational::from_integer(BigInt::from(shift * (u as i64 + 1) % 5)) } else { x.clone() })
                .collect();
            out.push(v);
        }
        out
    }

    /// Depth-first search over the system `eqs = 0`, with `sigma` giving every
    /// unknown in terms of the unknowns still free.
    fn search(&mut self, eqs: Vec<ParamPolynomial>, sigma: Vec<ParamPolynomial>) -> Search {
        self.branches += 1;
        if self.branches > BRANCH_BUDGET {
            return Search::GaveUp;
        }
        let mut eqs: Vec<ParamPolynomial> = eqs.into_iter().filter(|e| !e.is_zero()).collect();
        eqs.sort();
        eqs.dedup();
        if eqs.iter().any(|e| e.as_constant().is_some()) {
            return Search::Exhausted;
        }
        if eqs.is_empty() {
            let free: Vec<usize> =
                (0..self.unknowns).filter(|&u| sigma.iter().any(|s| s.degree_in(u) > 0)).collect();
            let mut gave_up = false;
            for base in self.completions() {
                let vals: Vec<Rational> = sigma.iter().map(|s| s.evaluate(&base)).collect();
                if self.det_nonzero(&vals) {
                    return Search::Found(
                        vals.into_iter().map(|v| ParamPolynomial::constant(self.unknowns, v)).collect(),
                    );
                }
                if free.is_empty() {
                    return Search::Exhausted;
                }
                gave_up = true;
            }
            return if gave_up { Search::GaveUp } else { Search::Exhausted };
        }
        // linear equations first
        let linear: Vec<Vec<Rational>> = eqs
            .iter()
            .filter(|e| e.total_degree() == Some(1))
            .map(|e| e.to_affine().expect("degree one"))
            .collect();
        if !linear.is_empty() {
            let Some(sol) = solve_affine(self.unknowns, &linear) else {
                return Search::Exhausted;
            };
            let step = self.embed(&sol.free, &sol.substitution);
            return self.descend(&eqs, &sigma, &step);
        }
        // a monomial equation forces one of its variables to vanish
        if let Some(e) = eqs.iter().find(|e| e.num_terms() == 1) {
            let vars = e.variables();
            return self.branch(&eqs, &sigma, vars.into_iter().map(|v| (v, Rational::zero())).collect());
        }
        // a univariate equation has finitely many rational roots
        if let Some(e) = eqs.iter().find(|e| e.variables().len() == 1) {
            let v = e.variables()[0];
            let Some(roots) = rational_roots(e, v) else {
                return Search::GaveUp;
            };
            return self.branch(&eqs, &sigma, roots.into_iter().map(|r| (v, r)).collect());
        }
        Search::GaveUp
    }

    fn embed(&self, free: &[usize], sub: &[ParamPolynomial]) -> Vec<ParamPolynomial> {
        // rename the free variables back to their own indices
        let rename: Vec<ParamPolynomial> =
            free.iter().map(|&u| ParamPolynomial::var(self.unknowns, u)).collect();
        sub.iter()
            .map(|s| if rename.is_empty() { ParamPolynomial::constant(self.unknowns, s.constant_term()) } else { s.substitute(&rename) })
            .collect()
    }

    fn descend(&mut self, eqs: &[ParamPolynomial], sigma: &[ParamPolynomial], step: &[ParamPolynomial]) -> Search {
        let eqs2: Vec<ParamPolynomial> = eqs.iter().map(|e| e.substitute(step)).collect();
        let sigma2: Vec<ParamPolynomial> = sigma.iter().map(|s| s.substitute(step)).collect();
        self.search(eqs2, sigma2)
    }

    fn branch(&mut self, eqs: &[ParamPolynomial], sigma: &[ParamPolynomial], choices: Vec<(usize, Rational)>) -> Search {
        let mut gave_up = false;
        for (v, value) in choices {
            let step: Vec<ParamPolynomial> = (0..self.unknowns)
                .map(|u| {
                    if u == v {
                        ParamPolynomial::constant(self.unknowns, value.clone())
                    } else {
                        ParamPolynomial::var(self.unknowns, u)
                    }
                })
                .collect();
            match self.descend(eqs, sigma, &step) {
                Search::Found(s) => return Search::Found(s),
                Search::Exhausted => {}
                Search::GaveUp => gave_up = true,
            }
        }
        if gave_up {
            Search::GaveUp
        } else {
            Search::Exhausted
        }
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots of `e`, a polynomial in the single variable `v`. `None` when
/// the coefficients are too large to enumerate candidates.
fn rational_roots(e: &ParamPolynomial, v: usize) -> Option<Vec<Rational>> {
    let deg = e.degree_in(v) as usize;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (m, c) in e.terms() {
        coeffs[m[v] as usize] = c.clone();
    }
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero())?;
    if low > 0 {
        roots.push(Rational::zero());
    }
    let (a0, an) = (&ints[low], &ints[deg]);
    if low == deg {
        return Some(roots);
    }
    let (ps, qs) = (small_divisors(a0)?, small_divisors(an)?);
    let value = |x: &Rational| ints.iter().rev().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()));
    let mut cands: Vec<Rational> = Vec::new();
    for p in &ps {
        for q in &qs {
            for s in [1i64, -1] {
                cands.push(Rational::new(p * BigInt::from(s), q.clone()));
            }
        }
    }
    cands.sort();
    cands.dedup();
    for c in cands {
        if value(&c).is_zero() {
            roots.push(c);
        }
    }
    Some(roots)
}

/// Equations on the entries of `M` and `c` expressing
/// `s1.c_d(a) = s2.c_d(M a + c)` for `d <= order`.
fn matching_equations(s1: &PeriodSeries, s2: &PeriodSeries, order: usize) -> Vec<ParamPolynomial> {
    let k = s1.params.len();
    let unknowns = k * k + k;
    let total = k + unknowns;
    // combined ring: a_0..a_{k-1}, then M row-major, then c
    let image: Vec<ParamPolynomial> = (0..k)
        .map(|i| {
            let mut p = ParamPolynomial::var(total, k + k * k + i);
            for j in 0..k {
                p += &(&ParamPolynomial::var(total, k + i * k + j) * &ParamPolynomial::var(total, j));
            }
            p
        })
        .collect();
    let mut eqs = Vec::new();
    for d in 0..=order {
        let lhs = s1.coeffs[d].extend(total);
        let rhs = if k == 0 { s2.coeffs[d].clone() } else { s2.coeffs[d].substitute(&image) };
        let diff = &lhs - &rhs;
        eqs.extend(diff.split_leading(k).into_values());
    }
    eqs
}

fn try_match(s1: &PeriodSeries, s2: &PeriodSeries, order: usize) -> Search {
    let k = s1.params.len();
    let unknowns = k * k + k;
    let mut solver = Solver { unknowns, k, branches: 0 };
    let eqs = matching_equations(s1, s2, order);
    let sigma: Vec<ParamPolynomial> = (0..unknowns).map(|u| ParamPolynomial::var(unknowns, u)).collect();
    solver.search(eqs, sigma)
}

/// Looks for an invertible affine map `φ` with `s1(a) = s2(φ(a))` through `order`.
pub fn compare_affine(s1: &PeriodSeries, s2: &PeriodSeries, order: usize) -> AffineComparison {
    if s1.params.len() != s2.params.len() {
        return AffineComparison::NoMatch { order: 0 };
    }
    if s1.order() < order || s2.order() < order {
        return AffineComparison::Inconclusive { order: s1.order().min(s2.order()) };
    }
    let k = s1.params.len();
    match try_match(s1, s2, order) {
        Search::Found(vals) => {
            let vals: Vec<Rational> = vals.iter().map(|v| v.constant_term()).collect();
            let matrix = (0..k).map(|i| vals[i * k..(i + 1) * k].to_vec()).collect();
            let offset = vals[k * k..].to_vec();
            AffineComparison::Match(AffineMatch { matrix, offset, order })
        }
        Search::GaveUp => AffineComparison::Inconclusive { order },
        Search::Exhausted => {
            let first = (0..order)
                .find(|&d| matches!(try_match(s1, s2, d), Search::Exhausted))
                .unwrap_or(order);
            AffineComparison::NoMatch { order: first }
        }
    }
}

/// Invariants of a polygon used to tell mutation classes apart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodSignature {
    pub content: String,
    pub degree: String,
    pub dimension: usize,
    pub depth: usize,
    pub stabilized: bool,
    /// Total degree in the parameters of each `c_d`, `None` for zero.
    pub degree_profile: Vec<Option<u32>>,
    /// The period coefficients themselves when no parameters remain.
    pub values: Option<Vec<String>>,
}

impl PeriodSignature {
    /// The fields that are invariant under mutation and affine reparametrisation.
    pub fn key(&self) -> (String, String, usize, Vec<Option<u32>>, Option<Vec<String>>) {
        (
            self.content.clone(),
            self.degree.clone(),
            self.dimension,
            self.degree_profile.clone(),
            self.values.clone(),
        )
    }
}

pub fn period_signature(p: &Polygon, depth: usize, order: usize) -> Result<PeriodSignature> {
    let content: SingularityContent = singularity_content(p);
    let space = mm_space(p, depth)?;
    let series = classical_period(&space.general(), order);
    let values = (space.dimension() == 0)
        .then(|| series.coeffs.iter().map(|c| c.constant_term().to_string()).collect());
    Ok(PeriodSignature {
        content: content.to_string(),
        degree: degree(p).to_string(),
        dimension: space.dimension(),
        depth: space.depth,
        stabilized: space.stabilized,
        degree_profile: series.coeffs.iter().map(|c| c.total_degree()).collect(),
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Entries are `d!·G_d`, directly comparable with `c_d`.
    Regularized,
    /// Entries are `G_d`; `c_d` is compared with `d!·G_d`.
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceFile {
    pub convention: Convention,
    pub coeffs: BTreeMap<usize, Rational>,
    pub substitution: BTreeMap<String, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Match,
    Mismatch,
    /// The order exceeds the truncation of the series.
    NotComputed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub order: usize,
    pub expected: String,
    pub actual: Option<String>,
    pub status: EntryStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceReport {
    pub entries: Vec<ReferenceEntry>,
    pub first_mismatch: Option<usize>,
}

impl ReferenceReport {
    pub fn all_match(&self) -> bool {
        self.entries.iter().all(|e| e.status == EntryStatus::Match)
    }
}

fn factorial(d: usize) -> Rational {
    Rational::from_integer((1..=d as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)))
}

/// Compares `s`, with the reference's parameter values substituted, against
/// its tabulated coefficients. Orders missing from the file are not checked.
pub fn compare_to_reference(s: &PeriodSeries, reference: &ReferenceFile) -> Result<ReferenceReport> {
    let mut values = Vec::with_capacity(s.params.len());
    for name in &s.params {
        let v = reference
            .substitution
            .get(name)
            .ok_or_else(|| Error::parse(format!("reference does not fix parameter '{name}'")))?;
        values.push(v.clone());
    }
    let mut entries = Vec::new();
    for (&d, val) in &reference.coeffs {
        let expected = match reference.convention {
            Convention::Regularized => val.clone(),
            Convention::Plain => val * factorial(d),
        };
        let (actual, status) = if d <= s.order() {
            let a = s.coeffs[d].evaluate(&values);
            let st = if a == expected { EntryStatus::Match } else { EntryStatus::Mismatch };
            (Some(a.to_string()), st)
        } else {
            (None, EntryStatus::NotComputed)
        };
        entries.push(ReferenceEntry { order: d, expected: expected.to_string(), actual, status });
    }
    let first_mismatch = entries.iter().find(|e| e.status != EntryStatus::Match).map(|e| e.order);
    Ok(ReferenceReport { entries, first_mismatch })
}
