//! Laurent polynomials in two variables with coefficients polynomial in a
//! list of named parameters, their cluster transformations, and the affine
//! spaces of maximally-mutable Laurent polynomials.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    edges, extended_gcd, hull_vertices, lattice_points, normal_form_with_maps, Edge,
    LatticePoint, Polygon, Rational, UnimodularMap,
};
use crate::linalg::solve_affine;
use crate::mutation::{find_mutation_data, mutate, MutationData};
use crate::poly::{parse_rational, ParamPolynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamLaurent {
    params: Vec<String>,
    terms: BTreeMap<LatticePoint, ParamPolynomial>,
}

impl ParamLaurent {
    pub fn zero(params: Vec<String>) -> Self {
        ParamLaurent { params, terms: BTreeMap::new() }
    }

    /// A Laurent polynomial with rational coefficients and no parameters.
    pub fn numeric<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (LatticePoint, Rational)>,
    {
        let mut g = Self::zero(Vec::new());
        for (e, c) in terms {
            g.add_term(e, ParamPolynomial::constant(0, c));
        }
        g
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &ParamPolynomial)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: LatticePoint) -> ParamPolynomial {
        self.terms.get(&e).cloned().unwrap_or_else(|| ParamPolynomial::zero(self.nparams()))
    }

    pub fn constant_term(&self) -> ParamPolynomial {
        self.coefficient(LatticePoint::ORIGIN)
    }

    /// Exponents with a coefficient that is not identically zero.
    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn add_term(&mut self, e: LatticePoint, c: ParamPolynomial) {
        assert_eq!(c.nvars(), self.nparams(), "coefficient lives in another parameter ring");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &ParamLaurent) -> ParamLaurent {
        assert_eq!(self.params, o.params);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &ParamLaurent) -> ParamLaurent {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> ParamLaurent {
        let mut out = Self::zero(self.params.clone());
        for (e, v) in &self.terms {
            out.add_term(*e, v.scale(c));
        }
        out
    }

    pub fn mul(&self, o: &ParamLaurent) -> ParamLaurent {
        assert_eq!(self.params, o.params);
        let mut out = Self::zero(self.params.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                out.add_term(*ea + *eb, ca * cb);
            }
        }
        out
    }

    /// The substitution `x^γ ↦ x^{Uγ}` of torus coordinates.
    pub fn map_exponents(&self, u: &UnimodularMap) -> ParamLaurent {
        ParamLaurent {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(e, c)| (u.apply(*e), c.clone())).collect(),
        }
    }

    /// Replaces parameter `i` by `values[i]`, a polynomial in `new_params`.
    pub fn substitute(&self, new_params: Vec<String>, values: &[ParamPolynomial]) -> ParamLaurent {
        assert_eq!(values.len(), self.nparams());
        let mut out = Self::zero(new_params);
        for (e, c) in &self.terms {
            let v = if values.is_empty() {
                ParamPolynomial::constant(out.nparams(), c.constant_term())
            } else {
                c.substitute(values)
            };
            out.add_term(*e, v);
        }
        out
    }

    /// Specialises every parameter to a rational value.
    pub fn evaluate(&self, values: &[Rational]) -> ParamLaurent {
        let consts: Vec<ParamPolynomial> =
            values.iter().map(|v| ParamPolynomial::constant(0, v.clone())).collect();
        self.substitute(Vec::new(), &consts)
    }

    /// Parses expressions such as `x^-3*y + 6*x^-2*y + a*x^-1 + b*x + y^-1`.
    /// `x` and `y` are the torus variables and every other identifier must be
    /// one of `params`.
    pub fn parse(expr: &str, params: &[&str]) -> Result<ParamLaurent> {
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let mut parser = ExprParser { s: expr.as_bytes(), pos: 0, params: &params };
        parser.parse()
    }
}

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
    params: &'a [String],
}

impl ExprParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { line: 1, column: self.pos + 1, message: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        self.skip_ws();
        let Some(d) = self.digits() else {
            return self.err("expected an integer exponent");
        };
        let k: i64 = d.parse().map_err(|_| Error::parse("exponent out of range"))?;
        if paren {
            if self.peek() != Some(b')') {
                return self.err("expected ')'");
            }
            self.pos += 1;
        }
        Ok(if neg { -k } else { k })
    }

    fn parse(&mut self) -> Result<ParamLaurent> {
        let n = self.params.len();
        let mut g = ParamLaurent::zero(self.params.to_vec());
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.err("empty expression"),
                None => break,
                Some(b'+') if !first => {
                    self.pos += 1;
                    Rational::one()
                }
                Some(b'-') => {
                    self.pos += 1;
                    -Rational::one()
                }
                Some(_) if first => Rational::one(),
                Some(_) => return self.err("expected '+' or '-'"),
            };
            first = false;
            let mut coeff = ParamPolynomial::constant(n, sign);
            let mut exp = LatticePoint::ORIGIN;
            loop {
                match self.peek() {
                    Some(c) if c.is_ascii_digit() => {
                        let num = self.digits().unwrap().to_string();
                        let text = if self.peek() == Some(b'/') {
                            self.pos += 1;
                            self.skip_ws();
                            let Some(den) = self.digits() else {
                                return self.err("expected a denominator");
                            };
                            format!("{num}/{den}")
                        } else {
                            num
                        };
                        coeff = coeff.scale(&parse_rational(&text)?);
                    }
                    Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                        let start = self.pos;
                        while self.pos < self.s.len()
                            && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                        {
                            self.pos += 1;
                        }
                        let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string();
                        let k = if self.peek() == Some(b'^') {
                            self.pos += 1;
                            self.exponent()?
                        } else {
                            1
                        };
                        match name.as_str() {
                            "x" => exp.x += k,
                            "y" => exp.y += k,
                            _ => {
                                let Some(i) = self.params.iter().position(|p| *p == name) else {
                                    return self.err(&format!("unknown parameter '{name}'"));
                                };
                                if k < 0 {
                                    return self.err("parameters take nonnegative exponents");
                                }
                                coeff = &coeff * &ParamPolynomial::var(n, i).pow(k as u32);
                            }
                        }
                    }
                    _ => return self.err("expected a number or identifier"),
                }
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            g.add_term(exp, coeff);
        }
        Ok(g)
    }
}

fn monomial_text(e: LatticePoint) -> String {
    let part = |v: &str, k: i64| match k {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{k}")),
    };
    let parts: Vec<String> = [part("x", e.x), part("y", e.y)].into_iter().flatten().collect();
    parts.join("*")
}

impl fmt::Display for ParamLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mono = monomial_text(*e);
            let (neg, body) = match c.as_constant() {
                Some(v) => {
                    let mag = v.abs();
                    let body = if mono.is_empty() {
                        mag.to_string()
                    } else if mag.is_one() {
                        mono.clone()
                    } else {
                        format!("{mag}*{mono}")
                    };
                    (v.is_negative(), body)
                }
                None => {
                    let neg = c.num_terms() == 1 && c.terms().all(|(_, v)| v.is_negative());
                    let c = if neg { -c } else { c.clone() };
                    let cs = c.display_with(&self.params).to_string();
                    let cs = if c.num_terms() > 1 { format!("({cs})") } else { cs };
                    (neg, if mono.is_empty() { cs } else { format!("{cs}*{mono}") })
                }
            };
            match (idx, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Vertices of the convex hull of the support.
pub fn support_hull(g: &ParamLaurent) -> Result<Vec<LatticePoint>> {
    hull_vertices(&g.support())
}

/// The Newton polygon of `g`, which must be Fano.
pub fn newton_polygon(g: &ParamLaurent) -> Result<Polygon> {
    Polygon::new(&g.support())
}

/// Division data for one cluster transformation: the image with every row
/// at negative height divided through, and the remainders of those divisions.
struct ClusterImage {
    image: ParamLaurent,
    remainders: Vec<ParamPolynomial>,
}

/// Row-wise evaluation of `x^γ ↦ x^γ (1+x^f)^{<γ,h>}`. Exponents in a row of
/// constant height `k = <γ,h>` differ by multiples of `f`, so each row is a
/// polynomial in `X = x^f` that is multiplied by, or divided by, a power of
/// `1 + X`.
fn cluster_image(g: &ParamLaurent, h: LatticePoint, f: LatticePoint) -> ClusterImage {
    let n = g.nparams();
    let (_, s, t) = extended_gcd(f.x, f.y);
    let along = LatticePoint::new(s, t);
    let mut rows: BTreeMap<i64, BTreeMap<i64, (LatticePoint, ParamPolynomial)>> = BTreeMap::new();
    for (e, c) in g.terms() {
        rows.entry(h.dot(*e)).or_default().insert(along.dot(*e), (*e, c.clone()));
    }
    let mut image = ParamLaurent::zero(g.params.clone());
    let mut remainders = Vec::new();
    for (k, row) in rows {
        let (&i0, (base, _)) = row.iter().next().unwrap();
        let base = *base;
        let i1 = *row.keys().next_back().unwrap();
        let mut coeffs: Vec<ParamPolynomial> =
            (i0..=i1).map(|_| ParamPolynomial::zero(n)).collect();
        for (i, (_, c)) in row {
            coeffs[(i - i0) as usize] = c;
        }
        if k >= 0 {
            for _ in 0..k {
                let mut next: Vec<ParamPolynomial> =
                    (0..=coeffs.len()).map(|_| ParamPolynomial::zero(n)).collect();
                for (j, c) in coeffs.iter().enumerate() {
                    next[j] += c;
                    next[j + 1] += c;
                }
                coeffs = next;
            }
        } else {
            for _ in 0..(-k) {
                // synthetic division by 1 + X, from the top coefficient down
                let len = coeffs.len();
                if len == 1 {
                    remainders.push(coeffs[0].clone());
                    coeffs[0] = ParamPolynomial::zero(n);
                    continue;
                }
                let mut q: Vec<ParamPolynomial> =
                    (0..len - 1).map(|_| ParamPolynomial::zero(n)).collect();
                q[len - 2] = coeffs[len - 1].clone();
                for j in (1..len - 1).rev() {
                    q[j - 1] = &coeffs[j] - &q[j];
                }
                remainders.push(&coeffs[0] - &q[0]);
                coeffs = q;
            }
        }
        for (j, c) in coeffs.into_iter().enumerate() {
            image.add_term(base + (j as i64) * f, c);
        }
    }
    remainders.retain(|r| !r.is_zero());
    ClusterImage { image, remainders }
}

fn check_datum(g: &ParamLaurent, d: &MutationData) -> Result<()> {
    let p = newton_polygon(g).map_err(|e| {
        Error::InvalidMutationData(format!("the Newton polygon cannot carry mutation data: {e}"))
    })?;
    d.validate(&p)
}

/// `g ∘ Φ` for the cluster transformation of `d`, or `None` when the result
/// has a denominator.
pub fn apply_cluster(g: &ParamLaurent, d: &MutationData) -> Result<Option<ParamLaurent>> {
    check_datum(g, d)?;
    let img = cluster_image(g, d.h, d.f);
    Ok(img.remainders.is_empty().then_some(img.image))
}

/// Affine equations `[c_0, c_1, …]` on the parameters of `g`, meaning
/// `c_0 + Σ c_i a_i = 0`, that make `g` mutable along `d`. The constant term
/// of `g` is always required to vanish.
pub fn mutability_constraints(g: &ParamLaurent, d: &MutationData) -> Result<Vec<Vec<Rational>>> {
    check_datum(g, d)?;
    let img = cluster_image(g, d.h, d.f);
    let mut rows = Vec::new();
    let c0 = g.constant_term();
    if !c0.is_zero() {
        rows.push(c0.to_affine()?);
    }
    for r in img.remainders {
        rows.push(r.to_affine()?);
    }
    Ok(rows)
}

/// Coefficients of `(1+T)^{mr}` or `(1+T)^{mr}(1+T^{w₀})` for an edge of
/// height `r` and width `w = mr + w₀`, in edge order.
pub fn t_binomial_edge_coeffs(e: &Edge) -> Vec<Rational> {
    let (w, r) = (e.width, e.height);
    let (m, w0) = (w / r, w % r);
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for _ in 0..m * r {
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (j, v) in c.iter().enumerate() {
            next[j] += v;
            next[j + 1] += v;
        }
        c = next;
    }
    if w0 > 0 {
        let mut next = vec![BigInt::zero(); c.len() + w0 as usize];
        for (j, v) in c.iter().enumerate() {
            next[j] += v;
            next[j + w0 as usize] += v;
        }
        c = next;
    }
    c.into_iter().map(Rational::from_integer).collect()
}

/// Name of the parameter attached to a lattice point, e.g. `a_m1_0` for `(-1,0)`.
pub fn point_param_name(v: LatticePoint) -> String {
    let part = |k: i64| if k < 0 { format!("m{}", -k) } else { k.to_string() };
    format!("a_{}_{}", part(v.x), part(v.y))
}

/// The Laurent polynomial with T-binomial edge coefficients, zero constant
/// term and one free parameter at every other interior lattice point.
pub fn t_binomial_generic(p: &Polygon) -> ParamLaurent {
    let mut pinned: BTreeMap<LatticePoint, Rational> = BTreeMap::new();
    for e in edges(p) {
        for (pt, c) in e.points().into_iter().zip(t_binomial_edge_coeffs(&e)) {
            pinned.insert(pt, c);
        }
    }
    let interior: Vec<LatticePoint> = lattice_points(p)
        .into_iter()
        .filter(|v| *v != LatticePoint::ORIGIN && !pinned.contains_key(v))
        .collect();
    let params: Vec<String> = interior.iter().map(|v| point_param_name(*v)).collect();
    let n = params.len();
    let mut g = ParamLaurent::zero(params);
    for (pt, c) in pinned {
        g.add_term(pt, ParamPolynomial::constant(n, c));
    }
    for (i, v) in interior.into_iter().enumerate() {
        g.add_term(v, ParamPolynomial::var(n, i));
    }
    g
}

/// An affine space `offset + Σ a_i basis_i` of maximally-mutable Laurent
/// polynomials, computed up to a bounded mutation depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MMSpace {
    pub polygon: Polygon,
    pub params: Vec<String>,
    pub offset: ParamLaurent,
    pub basis: Vec<ParamLaurent>,
    /// Number of mutation rounds carried out.
    pub depth: usize,
    /// Whether a round at positive depth added no new constraint.
    pub stabilized: bool,
}

impl MMSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The general member, with coefficients polynomial in [`MMSpace::params`].
    pub fn general(&self) -> ParamLaurent {
        let n = self.params.len();
        let lift = |g: &ParamLaurent, factor: ParamPolynomial| {
            let mut out = ParamLaurent::zero(self.params.clone());
            for (e, c) in g.terms() {
                out.add_term(*e, &ParamPolynomial::constant(n, c.constant_term()) * &factor);
            }
            out
        };
        let mut g = lift(&self.offset, ParamPolynomial::one(n));
        for (i, b) in self.basis.iter().enumerate() {
            g = g.add(&lift(b, ParamPolynomial::var(n, i)));
        }
        g
    }

    pub fn member(&self, values: &[Rational]) -> ParamLaurent {
        self.general().evaluate(values)
    }
}

/// Key identifying a (polygon, polynomial) pair up to unimodular change of
/// coordinates.
fn node_key(q: &Polygon, g: &ParamLaurent) -> (Polygon, ParamLaurent) {
    let nf = normal_form_with_maps(q);
    let best = nf
        .maps
        .iter()
        .map(|u| g.map_exponents(u))
        .min()
        .expect("normal form has a map");
    (nf.polygon, best)
}

/// The space of Laurent polynomials on `p` with T-binomial edge coefficients
/// that remain Laurent along every mutation sequence of length at most `depth`.
pub fn mm_space(p: &Polygon, depth: usize) -> Result<MMSpace> {
    let generic = t_binomial_generic(p);
    let mut names: Vec<String> = generic.params().to_vec();
    // each original parameter, written in the current free parameters
    let mut base: Vec<ParamPolynomial> =
        (0..names.len()).map(|i| ParamPolynomial::var(names.len(), i)).collect();
    let mut frontier = vec![(p.clone(), generic.clone())];
    let mut seen: HashSet<(Polygon, ParamLaurent)> = HashSet::new();
    seen.insert(node_key(p, &generic));
    let mut rounds = 0;
    let mut stabilized = false;
    while rounds < depth && !frontier.is_empty() {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut children = Vec::new();
        for (q, g) in &frontier {
            for d in find_mutation_data(q) {
                let img = cluster_image(g, d.h, d.f);
                for r in &img.remainders {
                    rows.push(r.to_affine()?);
                }
                children.push((mutate(q, &d)?, img.image));
            }
        }
        let sol = solve_affine(names.len(), &rows).ok_or(Error::EmptySpace)?;
        let added = sol.free.len() < names.len();
        if added {
            let new_names: Vec<String> = sol.free.iter().map(|&i| names[i].clone()).collect();
            base = base.iter().map(|b| b.substitute(&sol.substitution)).collect();
            children = children
                .into_iter()
                .map(|(q, g)| (q, g.substitute(new_names.clone(), &sol.substitution)))
                .collect();
            seen = seen
                .into_iter()
                .map(|(q, g)| (q, g.substitute(new_names.clone(), &sol.substitution)))
                .collect();
            names = new_names;
        }
        rounds += 1;
        frontier = children
            .into_iter()
            .filter(|(q, g)| seen.insert(node_key(q, g)))
            .collect();
        if (rounds >= 2 && !added) || frontier.is_empty() {
            stabilized = true;
            break;
        }
    }
    let general = generic.substitute(names.clone(), &base);
    let k = names.len();
    let mut offset = ParamLaurent::zero(Vec::new());
    let mut basis: Vec<ParamLaurent> = (0..k).map(|_| ParamLaurent::zero(Vec::new())).collect();
    for (e, c) in general.terms() {
        let aff = c.to_affine()?;
        offset.add_term(*e, ParamPolynomial::constant(0, aff[0].clone()));
        for (i, b) in basis.iter_mut().enumerate() {
            b.add_term(*e, ParamPolynomial::constant(0, aff[i + 1].clone()));
        }
    }
    Ok(MMSpace { polygon: p.clone(), params: names, offset, basis, depth: rounds, stabilized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rat, LatticePoint as P};

    fn poly(v: &[(i64, i64)]) -> Polygon {
        Polygon::new(&v.iter().map(|&(x, y)| P::new(x, y)).collect::<Vec<_>>()).unwrap()
    }

    fn datum(p: &Polygon, h: (i64, i64), f: (i64, i64)) -> MutationData {
        *find_mutation_data(p)
            .iter()
            .find(|d| d.h == P::new(h.0, h.1) && d.f == P::new(f.0, f.1))
            .unwrap()
    }

    #[test]
    fn parse_and_display() {
        let g = ParamLaurent::parse("x^-3*y + 6*x^-2*y + a*x^-1 - 2/3*b*x + y^-1 + 1", &["a", "b"])
            .unwrap();
        assert_eq!(g.num_terms(), 6);
        assert_eq!(g.coefficient(P::new(1, 0)).coefficient(&[0, 1]), crate::lattice::ratio(-2, 3));
        let h = ParamLaurent::parse(&g.to_string(), &["a", "b"]).unwrap();
        assert_eq!(g, h);
        assert!(ParamLaurent::parse("x + c", &["a"]).is_err());
        assert!(ParamLaurent::parse("x +", &[]).is_err());
        assert!(ParamLaurent::parse("x^(-2)*y", &[]).unwrap().coefficient(P::new(-2, 1)).as_constant()
            == Some(rat(1)));
    }

    #[test]
    fn newton_polygons() {
        let g12 = ParamLaurent::parse(
            "x^-3*y + 6*x^-2*y + 15*x^-1*y + 20*y + 15*x*y + 6*x^2*y + x^3*y + a*x^-1 + b*x + y^-1",
            &["a", "b"],
        )
        .unwrap();
        assert_eq!(newton_polygon(&g12).unwrap(), poly(&[(-3, 1), (3, 1), (0, -1)]));
        let p2 = ParamLaurent::parse("x + y + x^-1*y^-1", &[]).unwrap();
        assert_eq!(newton_polygon(&p2).unwrap(), poly(&[(1, 0), (0, 1), (-1, -1)]));
        let line = ParamLaurent::parse("x + y", &[]).unwrap();
        assert_eq!(newton_polygon(&line), Err(Error::DegenerateHull));
    }

    #[test]
    fn cluster_on_projective_plane() {
        let g = ParamLaurent::parse("x + y + x^-1*y^-1", &[]).unwrap();
        let p = newton_polygon(&g).unwrap();
        let d = datum(&p, (-1, -1), (-1, 1));
        let out = apply_cluster(&g, &d).unwrap().unwrap();
        let expect = ParamLaurent::parse("x + x^-1*y^-1 + 2*x^-2 + x^-3*y", &[]).unwrap();
        assert_eq!(out, expect);
        assert_eq!(newton_polygon(&out).unwrap(), poly(&[(1, 0), (-1, -1), (-3, 1)]));
        assert_eq!(newton_polygon(&out).unwrap(), mutate(&p, &d).unwrap());

        let bad = ParamLaurent::parse("x + 2*y + x^-1*y^-1", &[]).unwrap();
        assert_eq!(apply_cluster(&bad, &d).unwrap(), None);
        let line = ParamLaurent::parse("x + y", &[]).unwrap();
        assert!(matches!(apply_cluster(&line, &d), Err(Error::InvalidMutationData(_))));
    }

    #[test]
    fn binomial_edges() {
        let e = |w: i64, r: i64| Edge {
            start: P::new(0, 0),
            end: P::new(w, 0),
            width: w,
            height: r,
            inner_normal: P::new(0, 1),
        };
        let ints = |v: Vec<Rational>| v.into_iter().map(|c| c.to_integer()).collect::<Vec<_>>();
        let b = |v: &[i64]| v.iter().map(|&k| BigInt::from(k)).collect::<Vec<_>>();
        assert_eq!(ints(t_binomial_edge_coeffs(&e(6, 1))), b(&[1, 6, 15, 20, 15, 6, 1]));
        assert_eq!(ints(t_binomial_edge_coeffs(&e(1, 3))), b(&[1, 1]));
        assert_eq!(ints(t_binomial_edge_coeffs(&e(2, 2))), b(&[1, 2, 1]));
        assert_eq!(ints(t_binomial_edge_coeffs(&e(5, 2))), b(&[1, 5, 10, 10, 5, 1]));
        assert_eq!(ints(t_binomial_edge_coeffs(&e(3, 2))), b(&[1, 3, 3, 1]));
    }

    #[test]
    fn constraints_for_generic_polynomials() {
        let p2 = poly(&[(1, 0), (0, 1), (-1, -1)]);
        let g = t_binomial_generic(&p2);
        assert_eq!(g.nparams(), 0);
        for d in find_mutation_data(&p2) {
            assert!(mutability_constraints(&g, &d).unwrap().is_empty());
        }
        // free constant and edge-midpoint coefficients on the square
        let sq = poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)]);
        let g = ParamLaurent::parse(
            "x*y + c0*y + x^-1*y + c1*x^-1 + x^-1*y^-1 + c2*y^-1 + x*y^-1 + c3*x + c4",
            &["c0", "c1", "c2", "c3", "c4"],
        )
        .unwrap();
        let d = find_mutation_data(&sq)[0];
        let rows = mutability_constraints(&g, &d).unwrap();
        assert!(rows.len() >= 2);
        assert!(rows.contains(&vec![rat(0), rat(0), rat(0), rat(0), rat(0), rat(1)]));
    }

    #[test]
    fn mm_spaces_of_small_polygons() {
        let p2 = poly(&[(1, 0), (0, 1), (-1, -1)]);
        let s = mm_space(&p2, 3).unwrap();
        assert_eq!(s.dimension(), 0);
        assert_eq!(s.general(), ParamLaurent::parse("x + y + x^-1*y^-1", &[]).unwrap());

        let sq = poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)]);
        let s = mm_space(&sq, 2).unwrap();
        assert_eq!(s.dimension(), 0);
        assert!(s.general().constant_term().is_zero());

        let p12 = poly(&[(-3, 1), (3, 1), (0, -1)]);
        let s = mm_space(&p12, 2).unwrap();
        assert_eq!(s.dimension(), 2);
        assert_eq!(s.params, vec!["a_m1_0".to_string(), "a_1_0".to_string()]);
        let expect = ParamLaurent::parse(
            "x^-3*y + 6*x^-2*y + 15*x^-1*y + 20*y + 15*x*y + 6*x^2*y + x^3*y + a_m1_0*x^-1 + a_1_0*x + y^-1",
            &["a_m1_0", "a_1_0"],
        )
        .unwrap();
        assert_eq!(s.general(), expect);
    }
}
