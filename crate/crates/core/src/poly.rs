//! Sparse multivariate polynomials over ℚ in a fixed number of parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{rat, Rational};

/// Exponent vector of a parameter monomial.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl ParamPolynomial {
    pub fn zero(nvars: usize) -> Self {
        ParamPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rat(c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    /// The value when the polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    fn add_term(&mut self, exps: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        ParamPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                for _ in 0..k {
                    t *= v;
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces parameter `i` by `values[i]`; all values share one target ring.
    pub fn substitute(&self, values: &[ParamPolynomial]) -> ParamPolynomial {
        assert_eq!(values.len(), self.nvars);
        let target = values.first().map(|v| v.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<ParamPolynomial>> = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let maxk = self.degree_in(i) as usize;
                let mut ps = vec![ParamPolynomial::one(target)];
                for k in 1..=maxk {
                    let next = &ps[k - 1] * v;
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = ParamPolynomial::zero(target);
        for (e, c) in &self.terms {
            let mut t = ParamPolynomial::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out += &t;
        }
        powers.clear();
        out
    }

    /// Embeds into a ring with more parameters, the old ones first.
    pub fn extend(&self, nvars: usize) -> ParamPolynomial {
        assert!(nvars >= self.nvars);
        ParamPolynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.resize(nvars, 0);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// `[constant, coeff_0, …, coeff_{n-1}]` of an affine-linear polynomial.
    pub fn to_affine(&self) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.nvars + 1];
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            match deg {
                0 => out[0] = c.clone(),
                1 => {
                    let i = e.iter().position(|&k| k == 1).unwrap();
                    out[i + 1] = c.clone();
                }
                _ => return Err(Error::NotAffine),
            }
        }
        Ok(out)
    }

    pub fn from_affine(row: &[Rational]) -> Self {
        let nvars = row.len() - 1;
        let mut p = Self::constant(nvars, row[0].clone());
        for (i, c) in row[1..].iter().enumerate() {
            let mut e = vec![0; nvars];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    /// Groups terms by the exponents of the first `k` variables; the values
    /// are polynomials in the remaining variables.
    pub fn split_leading(&self, k: usize) -> BTreeMap<Monomial, ParamPolynomial> {
        let rest = self.nvars - k;
        let mut out: BTreeMap<Monomial, ParamPolynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let (head, tail) = e.split_at(k);
            out.entry(head.to_vec())
                .or_insert_with(|| ParamPolynomial::zero(rest))
                .add_term(tail.to_vec(), c.clone());
        }
        out
    }

    /// Terms in display order: higher total degree first, then exponents descending.
    fn ordered_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        ts
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayPoly { p: self, names }
    }

    /// Keys of the JSON coefficient map: `"1"`, `"a"`, `"a^2*b"`.
    pub fn monomial_key(exps: &[u32], names: &[String]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .zip(names)
            .filter(|(k, _)| **k > 0)
            .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn parse_monomial_key(key: &str, names: &[String]) -> Result<Monomial> {
        let mut e = vec![0u32; names.len()];
        let key = key.trim();
        if key == "1" {
            return Ok(e);
        }
        for factor in key.split('*') {
            let factor = factor.trim();
            let (name, k) = match factor.split_once('^') {
                Some((n, k)) => (
                    n.trim(),
                    k.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::parse(format!("bad exponent in '{factor}'")))?,
                ),
                None => (factor, 1),
            };
            let i = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::parse(format!("unknown parameter '{name}'")))?;
            e[i] += k;
        }
        Ok(e)
    }

    /// Coefficient map keyed by [`ParamPolynomial::monomial_key`].
    pub fn to_key_map(&self, names: &[String]) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(e, c)| (Self::monomial_key(e, names), c.to_string()))
            .collect()
    }

    pub fn from_key_map<'a, I>(entries: I, names: &[String]) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a String, &'a String)>,
    {
        let mut p = Self::zero(names.len());
        for (k, v) in entries {
            let e = Self::parse_monomial_key(k, names)?;
            p.add_term(e, parse_rational(v)?);
        }
        Ok(p)
    }
}

struct DisplayPoly<'a> {
    p: &'a ParamPolynomial,
    names: &'a [String],
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.p.ordered_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let key = ParamPolynomial::monomial_key(e, self.names);
            if key == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{key}")?;
            } else {
                write!(f, "{mag}*{key}")?;
            }
        }
        Ok(())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::parse(format!("'{s}' is not an exact rational"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().map_err(|_| err())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

impl AddAssign<&ParamPolynomial> for ParamPolynomial {
    fn add_assign(&mut self, o: &ParamPolynomial) {
        debug_assert_eq!(self.nvars, o.nvars);
        for (e, c) in &o.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl Add for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, o: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Sub for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(self, o: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(self) -> ParamPolynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, o: &ParamPolynomial) -> ParamPolynomial {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut out = ParamPolynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ratio;

    fn names() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn arithmetic_and_display() {
        let a = ParamPolynomial::var(2, 0);
        let b = ParamPolynomial::var(2, 1);
        let p = &(&a * &b).scale(&rat(2)) + &ParamPolynomial::from_int(2, 40);
        assert_eq!(p.display_with(&names()).to_string(), "2*a*b + 40");
        let sq = p.pow(2);
        assert_eq!(sq.coefficient(&[2, 2]), rat(4));
        assert_eq!(sq.constant_term(), rat(1600));
        assert!((&p - &p).is_zero());
        assert_eq!(p.total_degree(), Some(2));
        let q = &a - &ParamPolynomial::constant(2, ratio(1, 2));
        assert_eq!(q.display_with(&names()).to_string(), "a - 1/2");
    }

    #[test]
    fn substitution_swaps_variables() {
        let a = ParamPolynomial::var(2, 0);
        let b = ParamPolynomial::var(2, 1);
        let p = &(&a * &a).scale(&rat(72)) + &b;
        let swapped = p.substitute(&[b.clone(), a.clone()]);
        assert_eq!(swapped, &(&b * &b).scale(&rat(72)) + &a);
        assert_eq!(p.evaluate(&[rat(1), rat(2)]), rat(74));
    }

    #[test]
    fn key_maps_round_trip() {
        let a = ParamPolynomial::var(2, 0);
        let b = ParamPolynomial::var(2, 1);
        let p = &(&(&a * &a) * &b).scale(&ratio(-3, 7)) + &ParamPolynomial::from_int(2, 5);
        let m = p.to_key_map(&names());
        assert_eq!(m.get("a^2*b").unwrap(), "-3/7");
        assert_eq!(m.get("1").unwrap(), "5");
        assert_eq!(ParamPolynomial::from_key_map(m.iter(), &names()).unwrap(), p);
        assert!(ParamPolynomial::parse_monomial_key("c", &names()).is_err());
    }

    #[test]
    fn affine_conversion() {
        let a = ParamPolynomial::var(2, 0);
        let p = &a.scale(&rat(3)) + &ParamPolynomial::from_int(2, -1);
        assert_eq!(p.to_affine().unwrap(), vec![rat(-1), rat(3), rat(0)]);
        assert_eq!(ParamPolynomial::from_affine(&p.to_affine().unwrap()), p);
        assert_eq!((&a * &a).to_affine(), Err(Error::NotAffine));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-2/6").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rational("17").unwrap(), rat(17));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
