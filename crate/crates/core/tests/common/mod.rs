#![allow(dead_code)]

use fano_mirror::lattice::{LatticePoint, Polygon, Rational, UnimodularMap};
use fano_mirror::laurent::{mutability_constraints, t_binomial_generic, ParamLaurent};
use fano_mirror::linalg::solve_affine;
use fano_mirror::mutation::{find_mutation_data, MutationData};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn lp(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(x, y)
}

pub fn poly(v: &[(i64, i64)]) -> Polygon {
    Polygon::new(&v.iter().map(|&(x, y)| lp(x, y)).collect::<Vec<_>>()).unwrap()
}

pub fn q(n: i64) -> Rational {
    BigRational::from_integer(n.into())
}

pub fn projective_plane() -> Polygon {
    poly(&[(1, 0), (0, 1), (-1, -1)])
}

pub fn square() -> Polygon {
    poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)])
}

pub fn p12() -> Polygon {
    poly(&[(-3, 1), (3, 1), (0, -1)])
}

pub fn p13() -> Polygon {
    poly(&[(-1, -1), (2, -1), (1, 1), (-1, 2)])
}

pub const G12: &str =
    "x^-3*y + 6*x^-2*y + 15*x^-1*y + 20*y + 15*x*y + 6*x^2*y + x^3*y + a*x^-1 + b*x + y^-1";

pub const G13: &str =
    "x^-1*y^-1 + 3*y^-1 + 3*x*y^-1 + x^2*y^-1 + 3*x^-1 + a*x + 3*x^-1*y + b*y + x*y + x^-1*y^2";

pub fn worked_examples() -> Vec<Polygon> {
    vec![projective_plane(), square(), p12(), p13()]
}

/// A Fano polygon from the hull of a few random points in `[-b, b]^2`.
pub fn random_fano<R: Rng>(rng: &mut R, b: i64) -> Polygon {
    loop {
        let k = rng.gen_range(3..=6);
        let pts: Vec<LatticePoint> =
            (0..k).map(|_| lp(rng.gen_range(-b..=b), rng.gen_range(-b..=b))).collect();
        if let Ok(p) = Polygon::new(&pts) {
            return p;
        }
    }
}

/// A random Fano polygon in `[-b, b]^2` admitting a mutation, with one of its data.
pub fn random_mutable<R: Rng>(rng: &mut R, b: i64) -> (Polygon, MutationData) {
    loop {
        let p = random_fano(rng, b);
        let data = find_mutation_data(&p);
        if let Some(d) = data.choose(rng) {
            return (p, *d);
        }
    }
}

pub fn random_unimodular<R: Rng>(rng: &mut R) -> UnimodularMap {
    let mut u = UnimodularMap::new(1, 0, 0, 1).unwrap();
    for _ in 0..rng.gen_range(1..=4) {
        let k = rng.gen_range(-2..=2);
        let step = match rng.gen_range(0..3) {
            0 => UnimodularMap::new(1, k, 0, 1),
            1 => UnimodularMap::new(1, 0, k, 1),
            _ => UnimodularMap::new(0, 1, 1, 0),
        };
        u = u.compose(&step.unwrap());
    }
    u
}

/// A numeric Laurent polynomial on `p` with T-binomial edges that is mutable
/// with respect to `d`: interior coefficients solve the mutability constraints,
/// with random integers for the free ones. `None` when the constraints are
/// inconsistent.
pub fn random_mutable_polynomial<R: Rng>(rng: &mut R, p: &Polygon, d: &MutationData) -> Option<ParamLaurent> {
    let generic = t_binomial_generic(p);
    let n = generic.nparams();
    let rows = mutability_constraints(&generic, d).ok()?;
    let sol = solve_affine(n, &rows)?;
    let free: Vec<Rational> = sol.free.iter().map(|_| q(rng.gen_range(-3..=3))).collect();
    let values: Vec<Rational> = sol.substitution.iter().map(|s| s.evaluate(&free)).collect();
    Some(generic.evaluate(&values))
}
