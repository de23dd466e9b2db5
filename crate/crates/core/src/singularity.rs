//! Cyclic quotient singularities of toric surfaces and their singularity content.
//!
//! The cone spanned by `u, v` (counterclockwise) is identified with the model
//! cone `cone{(n,-q), (0,1)}` of `1/n(1,q)` by an orientation-preserving lattice
//! map sending `v` to `(0,1)`. A reflection replaces `q` by its inverse modulo
//! `n`; [`CyclicQuotient::canonical`] picks the smaller of the two so that
//! baskets are comparable across orientations.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{extended_gcd, LatticePoint, Polygon, UnimodularMap};

/// The singularity `1/n(1,q)`; `n = 1, q = 0` is a smooth point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicQuotient {
    pub n: i64,
    pub q: i64,
}

impl CyclicQuotient {
    pub const SMOOTH: CyclicQuotient = CyclicQuotient { n: 1, q: 0 };

    pub fn new(n: i64, q: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidBounds(format!("order {n} must be positive")));
        }
        let q = q.rem_euclid(n);
        if q.gcd(&n) != 1 {
            return Err(Error::InvalidBounds(format!("hcf({q},{n}) != 1")));
        }
        Ok(CyclicQuotient { n, q })
    }

    /// The representative with the smaller of `q` and `q⁻¹ mod n`.
    pub fn canonical(self) -> CyclicQuotient {
        if self.n == 1 {
            return CyclicQuotient::SMOOTH;
        }
        let (_, inv, _) = extended_gcd(self.q, self.n);
        let inv = inv.rem_euclid(self.n);
        CyclicQuotient { n: self.n, q: self.q.min(inv) }
    }

    pub fn is_smooth(self) -> bool {
        self.n == 1
    }

    pub fn decompose(self) -> ContentDecomposition {
        decompose(self)
    }
}

impl fmt::Display for CyclicQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.n, self.q)
    }
}

/// `q = p - 1`, `w = hcf(n, p)`, `n = w r`, `p = w a`, `w = m r + w0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContentDecomposition {
    pub p: i64,
    pub w: i64,
    pub r: i64,
    pub a: i64,
    pub m: i64,
    pub w0: i64,
}

pub fn decompose(s: CyclicQuotient) -> ContentDecomposition {
    let p = s.q + 1;
    let w = s.n.gcd(&p);
    let r = s.n / w;
    let a = p / w;
    ContentDecomposition { p, w, r, a, m: w / r, w0: w % r }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularityClass {
    PrimitiveT,
    T,
    R,
    Neither,
}

pub fn classify(s: CyclicQuotient) -> SingularityClass {
    let d = decompose(s);
    if d.w0 == 0 && d.m == 1 {
        SingularityClass::PrimitiveT
    } else if d.w0 == 0 {
        SingularityClass::T
    } else if d.m == 0 {
        SingularityClass::R
    } else {
        SingularityClass::Neither
    }
}

/// The residual singularity `1/(w0 r)(1, w0 a - 1)`, absent for class T.
pub fn r_content(s: CyclicQuotient) -> Option<CyclicQuotient> {
    let d = decompose(s);
    let n = d.w0 * d.r;
    if d.w0 == 0 || n == 1 {
        return None;
    }
    Some(CyclicQuotient::new(n, d.w0 * d.a - 1).expect("R-content is a valid cyclic quotient"))
}

/// Type of the cone spanned by `u` and `v`. The generators may be given in
/// either order; they are primitivised first.
pub fn cone_type(u: LatticePoint, v: LatticePoint) -> Result<CyclicQuotient> {
    if u == LatticePoint::ORIGIN || v == LatticePoint::ORIGIN {
        return Err(Error::DegenerateCone);
    }
    let (mut u, mut v) = (u.primitive(), v.primitive());
    let mut n = u.det(v);
    if n == 0 {
        return Err(Error::DegenerateCone);
    }
    if n < 0 {
        std::mem::swap(&mut u, &mut v);
        n = -n;
    }
    let rot = UnimodularMap { a: 0, b: -1, c: 1, d: 0 };
    let to_model = rot.compose(&UnimodularMap::sending_to_e1(v));
    let image = to_model.apply(u);
    debug_assert_eq!(image.x, n);
    CyclicQuotient::new(n, -image.y)
}

/// Singularity content `(m, basket)`; the basket is kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SingularityContent {
    pub m: i64,
    pub basket: Vec<CyclicQuotient>,
}

impl SingularityContent {
    pub fn new(m: i64, mut basket: Vec<CyclicQuotient>) -> Self {
        for b in basket.iter_mut() {
            *b = b.canonical();
        }
        basket.sort();
        SingularityContent { m, basket }
    }

    /// Basket as `(singularity, multiplicity)` pairs.
    pub fn basket_counts(&self) -> Vec<(CyclicQuotient, usize)> {
        let mut counts: BTreeMap<CyclicQuotient, usize> = BTreeMap::new();
        for b in &self.basket {
            *counts.entry(*b).or_default() += 1;
        }
        counts.into_iter().collect()
    }
}

impl fmt::Display for SingularityContent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basket.is_empty() {
            return write!(f, "({}, ∅)", self.m);
        }
        write!(f, "({}, {{", self.m)?;
        for (i, (s, k)) in self.basket_counts().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k} × {s}")?;
        }
        write!(f, "}})")
    }
}

/// The cones of the spanning fan, one per edge, in edge order.
pub fn cone_types(p: &Polygon) -> Vec<CyclicQuotient> {
    let k = p.len();
    (0..k)
        .map(|i| cone_type(p.vertex(i), p.vertex(i + 1)).expect("fan cones are non-degenerate"))
        .collect()
}

/// Every cone contributes its `m`, smooth cones included, so that `m` is the
/// Euler number of the smooth locus of a generic deformation.
pub fn singularity_content(p: &Polygon) -> SingularityContent {
    let mut m = 0;
    let mut basket = Vec::new();
    for s in cone_types(p) {
        m += decompose(s).m;
        if let Some(res) = r_content(s) {
            basket.push(res);
        }
    }
    SingularityContent::new(m, basket)
}

/// Geometric genus of a generic fibre: `1 + Σ w0 (r - 1) / 2` over the basket.
pub fn genus_from_content(c: &SingularityContent) -> Result<i64> {
    let twice: i64 = c
        .basket
        .iter()
        .map(|s| {
            let d = decompose(*s);
            d.w0 * (d.r - 1)
        })
        .sum();
    if twice % 2 != 0 {
        return Err(Error::NonIntegerGenus);
    }
    Ok(1 + twice / 2)
}
