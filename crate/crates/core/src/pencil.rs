//! The three-dimensional polytope `Q̃ ⊂ M ⊕ ℤ` whose two shadows are the
//! duals of a polygon and of its mutation, with the trinomial cutting out
//! both toric surfaces.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    dual, dual_vertices, rat, LatticePoint, Polygon, Rational, RationalPoint, RationalPolygon,
};
use crate::linalg::{rank, solve_unique};
use crate::mutation::{mutate, mutation_labelling, MutationData};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub name: String,
    pub vector: [i64; 3],
}

/// The half-space `<normal, ũ> >= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub normal: [i64; 3],
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilData {
    pub h: LatticePoint,
    pub f: LatticePoint,
    /// Rays in the order `x, y, z, t`, then `a_j` for `j` in `J`.
    pub rays: Vec<Ray>,
    pub inequalities: Vec<Inequality>,
    /// Exponent vectors over the rays of `xy`, `A z^w t^{w'-r'}` and `B z^{w-r} t^{w'}`.
    pub trinomial: [Vec<i64>; 3],
    /// `(j, exponent)` of the factors of `A` and of `B`.
    pub a_factors: Vec<(usize, i64)>,
    pub b_factors: Vec<(usize, i64)>,
    pub w: i64,
    pub r: i64,
    /// Third coordinate of `ρ̃_t`, equal to `r' - w'`.
    pub t_height: i64,
    pub w_prime: i64,
    pub r_prime: i64,
}

fn ratio_entry(num: Rational, den: Rational, what: &str) -> Result<i64> {
    if den.is_zero() {
        return Err(Error::NonIntegralRay(format!("{what}: zero denominator")));
    }
    let q = num / den;
    if !q.is_integer() {
        return Err(Error::NonIntegralRay(format!("{what} = {q}")));
    }
    Ok(q.to_integer().try_into().expect("ray coordinate fits in i64"))
}

/// Assembles the rays, inequalities and trinomial for the mutation of `p` by `d`.
pub fn build_pencil(p: &Polygon, d: &MutationData) -> Result<PencilData> {
    d.validate(p)?;
    let (rho, i, case_two) = mutation_labelling(p, d);
    let total = rho.len();
    let m = if case_two { total - 1 } else { total };
    // vertex of the dual for the edge [ρ_j, ρ_{j+1}], 1-based with wraparound
    let duals = dual_vertices(p);
    let k = p.len();
    let start = p.vertices().iter().position(|v| *v == rho[0]).unwrap();
    let v = |j: usize| -> RationalPoint { duals[(start + j - 1) % k].clone() };
    let rho_at = |j: usize| rho[(j - 1) % total];
    let pair = |a: LatticePoint, u: &RationalPoint| u.pair(a);
    let height_ratio = |a: LatticePoint, u: &RationalPoint, what: &str| {
        ratio_entry(Rational::one() + pair(a, u), pair(d.f, u), what)
    };
    let rho_i = rho_at(i);
    let z3 = height_ratio(rho_i, &v(i + 1), "z-ray height")?;
    let t3 = height_ratio(rho_at(1), &v(m), "t-ray height")?;
    let mut rays = vec![
        Ray { name: "x".into(), vector: [d.f.x, d.f.y, 1] },
        Ray { name: "y".into(), vector: [0, 0, 1] },
        Ray { name: "z".into(), vector: [rho_i.x, rho_i.y, z3] },
        Ray { name: "t".into(), vector: [rho_at(1).x, rho_at(1).y, t3] },
    ];
    let mut bounds = vec![0, 0, -1, -1];
    let (mut a_factors, mut b_factors) = (Vec::new(), Vec::new());
    let (mut a_exp, mut b_exp) = (Vec::new(), Vec::new());
    for j in 1..=m {
        if j == 1 || j == i || j == i + 1 {
            continue;
        }
        let r = rho_at(j);
        let hj = d.h.dot(r);
        let vector = if hj >= 0 {
            [r.x, r.y, 0]
        } else {
            let rp = if j <= i { r } else { r + hj * d.f };
            [rp.x, rp.y, hj]
        };
        rays.push(Ray { name: format!("a_{j}"), vector });
        bounds.push(-1);
        a_exp.push(if hj < 0 { -hj } else { 0 });
        b_exp.push(if hj > 0 { hj } else { 0 });
        if hj < 0 {
            a_factors.push((j, -hj));
        } else if hj > 0 {
            b_factors.push((j, hj));
        }
    }
    let w = d.w;
    let r = -d.h_min;
    let r_prime = d.h_max;
    let w_prime = d.h_max - t3;
    let mut xy = vec![1, 1, 0, 0];
    xy.extend(std::iter::repeat(0).take(a_exp.len()));
    let mut a_term = vec![0, 0, w, w_prime - r_prime];
    a_term.extend(a_exp);
    let mut b_term = vec![0, 0, w - r, w_prime];
    b_term.extend(b_exp);
    let inequalities = rays
        .iter()
        .zip(bounds)
        .map(|(ray, bound)| Inequality { normal: ray.vector, bound })
        .collect();
    Ok(PencilData {
        h: d.h,
        f: d.f,
        rays,
        inequalities,
        trinomial: [xy, a_term, b_term],
        a_factors,
        b_factors,
        w,
        r,
        t_height: t3,
        w_prime,
        r_prime,
    })
}

fn to_rat(v: &[i64; 3]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn cross(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: &[i64; 3], b: &[i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Whether the inequalities cut out a bounded region: the normals span and
/// no edge direction of the recession cone survives.
fn is_bounded(ineqs: &[Inequality]) -> bool {
    let normals: Vec<Vec<Rational>> = ineqs.iter().map(|q| to_rat(&q.normal)).collect();
    if rank(&normals, 3) < 3 {
        return false;
    }
    for (a, qa) in ineqs.iter().enumerate() {
        for qb in &ineqs[a + 1..] {
            let c = cross(&qa.normal, &qb.normal);
            if c == [0, 0, 0] {
                continue;
            }
            for dir in [c, [-c[0], -c[1], -c[2]]] {
                if ineqs.iter().all(|q| dot3(&q.normal, &dir) >= 0) {
                    return false;
                }
            }
        }
    }
    true
}

/// Vertices of a bounded polytope given by inequalities.
fn polytope_vertices(ineqs: &[Inequality]) -> Vec<[Rational; 3]> {
    let n = ineqs.len();
    let mut out: Vec<[Rational; 3]> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let rows: Vec<Vec<Rational>> =
                    [a, b, c].iter().map(|&j| to_rat(&ineqs[j].normal)).collect();
                let rhs: Vec<Rational> = [a, b, c].iter().map(|&j| rat(ineqs[j].bound)).collect();
                let Some(x) = solve_unique(&rows, &rhs) else {
                    continue;
                };
                let feasible = ineqs.iter().all(|q| {
                    let val: Rational =
                        (0..3).map(|k| rat(q.normal[k]) * &x[k]).fold(Rational::zero(), |s, t| s + t);
                    val >= rat(q.bound)
                });
                if feasible {
                    let pt = [x[0].clone(), x[1].clone(), x[2].clone()];
                    if !out.contains(&pt) {
                        out.push(pt);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub bounded: bool,
    pub pi_matches: bool,
    pub pi_prime_matches: bool,
    /// Description of the first discrepancy found.
    pub mismatch: Option<String>,
}

impl ProjectionReport {
    pub fn ok(&self) -> bool {
        self.bounded && self.pi_matches && self.pi_prime_matches
    }
}

/// Checks `π(Q̃) = Q` and `π'(Q̃) = Q'` by projecting the vertices of `Q̃`.
pub fn verify_projections(pd: &PencilData, p: &Polygon, d: &MutationData) -> ProjectionReport {
    let fail = |bounded, pi, pip, msg: String| ProjectionReport {
        bounded,
        pi_matches: pi,
        pi_prime_matches: pip,
        mismatch: Some(msg),
    };
    if !is_bounded(&pd.inequalities) {
        return fail(false, false, false, "Q̃ is unbounded".into());
    }
    let verts = polytope_vertices(&pd.inequalities);
    let q = dual(p);
    let q_prime = match mutate(p, d) {
        Ok(pp) => dual(&pp),
        Err(e) => return fail(true, false, false, format!("mutation failed: {e}")),
    };
    let pi: Vec<RationalPoint> =
        verts.iter().map(|v| RationalPoint::new(v[0].clone(), v[1].clone())).collect();
    let (hx, hy) = (rat(pd.h.x), rat(pd.h.y));
    let pi_prime: Vec<RationalPoint> = verts
        .iter()
        .map(|v| RationalPoint::new(&v[0] + &v[2] * &hx, &v[1] + &v[2] * &hy))
        .collect();
    let image = |pts: &[RationalPoint]| RationalPolygon::new(pts).ok();
    let (ip, ipp) = (image(&pi), image(&pi_prime));
    let pi_ok = ip.as_ref() == Some(&q);
    let pip_ok = ipp.as_ref() == Some(&q_prime);
    let mismatch = if !pi_ok {
        Some(format!(
            "π(Q̃) = {} but Q = {q}",
            ip.map(|x| x.to_string()).unwrap_or_else(|| "degenerate".into())
        ))
    } else if !pip_ok {
        Some(format!(
            "π'(Q̃) = {} but Q' = {q_prime}",
            ipp.map(|x| x.to_string()).unwrap_or_else(|| "degenerate".into())
        ))
    } else {
        None
    };
    ProjectionReport { bounded: true, pi_matches: pi_ok, pi_prime_matches: pip_ok, mismatch }
}

/// Whether `target` is `(<ρ̃, ũ>)_ρ̃` for some integral `ũ`.
fn in_character_image(rays: &[Ray], target: &[i64]) -> bool {
    let a: Vec<Vec<Rational>> = rays.iter().map(|r| to_rat(&r.vector)).collect();
    let b: Vec<Rational> = target.iter().map(|&x| rat(x)).collect();
    match solve_unique(&a, &b) {
        Some(u) => u.iter().all(|x| x.is_integer()),
        None => false,
    }
}

/// The three monomials of the trinomial have equal degree in the class group
/// of the toric variety of `Q̃` exactly when their pairwise differences are
/// characters.
pub fn verify_homogeneity(pd: &PencilData) -> bool {
    let n = pd.rays.len();
    if pd.trinomial.iter().any(|e| e.len() != n) {
        return false;
    }
    let diff = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
    let [m0, m1, m2] = &pd.trinomial;
    in_character_image(&pd.rays, &diff(m0, m1)) && in_character_image(&pd.rays, &diff(m0, m2))
}

impl PencilData {
    /// Third coordinate of `ρ̃_z`.
    pub fn z_height(&self) -> i64 {
        self.rays[2].vector[2]
    }

    /// Exponents of `A` and `B` are nonnegative and the trinomial has
    /// nonnegative exponents in `x, y, z, t`.
    pub fn exponents_nonnegative(&self) -> bool {
        self.trinomial.iter().all(|e| e.iter().all(|x| !x.is_negative()))
    }
}
