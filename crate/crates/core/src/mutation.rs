//! Combinatorial mutations of Fano polygons.
//!
//! Mutation data `(h, f)` is attached to an edge `E` of a polygon: `h` is the
//! primitive inner normal of `E` and `f` the primitive counterclockwise
//! direction of `E`, so `h = rot90(f)`. The datum qualifies when the lattice
//! width of `E` is at least its height.

use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    degree, edges, normal_form, rat, LatticePoint, Polygon, Rational, RationalPoint,
    RationalPolygon,
};
use crate::singularity::{singularity_content, SingularityContent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MutationData {
    /// Primitive functional in `M`, minimal on the edge.
    pub h: LatticePoint,
    /// Primitive vector in `h^⊥` along the edge.
    pub f: LatticePoint,
    /// Index `k` of the edge `[v_k, v_{k+1}]` in the polygon's vertex order.
    pub edge_index: usize,
    pub w: i64,
    pub h_min: i64,
    pub h_max: i64,
}

/// One datum per edge whose width is at least its height.
pub fn find_mutation_data(p: &Polygon) -> Vec<MutationData> {
    let es = edges(p);
    es.iter()
        .enumerate()
        .filter(|(_, e)| e.width >= e.height)
        .map(|(i, e)| {
            let h = e.inner_normal;
            let h_max = p.vertices().iter().map(|v| h.dot(*v)).max().unwrap();
            MutationData {
                h,
                f: e.direction(),
                edge_index: i,
                w: e.width,
                h_min: -e.height,
                h_max,
            }
        })
        .collect()
}

impl MutationData {
    /// Checks every condition on the datum against `p`.
    pub fn validate(&self, p: &Polygon) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidMutationData(m));
        if !self.h.is_primitive() || !self.f.is_primitive() {
            return bad("h and f must be primitive".into());
        }
        if self.h.dot(self.f) != 0 {
            return bad("f is not orthogonal to h".into());
        }
        if self.edge_index >= p.len() {
            return bad(format!("edge index {} out of range", self.edge_index));
        }
        let heights: Vec<i64> = p.vertices().iter().map(|v| self.h.dot(*v)).collect();
        let (lo, hi) = (*heights.iter().min().unwrap(), *heights.iter().max().unwrap());
        if lo != self.h_min || hi != self.h_max {
            return bad(format!(
                "h takes values [{lo},{hi}] on the polygon, not [{},{}]",
                self.h_min, self.h_max
            ));
        }
        let (a, b) = (p.vertex(self.edge_index), p.vertex(self.edge_index + 1));
        if self.h.dot(a) != lo || self.h.dot(b) != lo {
            return bad("h is not minimal on the chosen edge".into());
        }
        if b - a != self.w * self.f {
            return bad("edge is not w·f".into());
        }
        if self.w < -self.h_min {
            return bad(format!("width {} is less than height {}", self.w, -self.h_min));
        }
        Ok(())
    }

    /// Checks `(h, f)` against the polygon, locating the edge by `h` alone.
    /// Used where a datum is transported between polygons that share the
    /// same vertex set but not necessarily the same edge numbering.
    pub fn rebind(&self, p: &Polygon) -> Result<MutationData> {
        find_mutation_data(p)
            .into_iter()
            .find(|d| d.h == self.h && d.f == self.f)
            .ok_or_else(|| Error::InvalidMutationData("no qualifying edge with this (h, f)".into()))
    }
}

/// Vertices relabelled as `ρ_1, ρ_2, …` counterclockwise with `h(ρ_1) = h_max`,
/// the other maximal vertex (case II) coming last. Returns the labels, the
/// 1-based index `i` of the minimal edge `[ρ_i, ρ_{i+1}]`, and whether case II.
pub(crate) fn mutation_labelling(p: &Polygon, d: &MutationData) -> (Vec<LatticePoint>, usize, bool) {
    let k = p.len();
    let maxima: Vec<usize> = (0..k).filter(|&j| d.h.dot(p.vertex(j)) == d.h_max).collect();
    let start = match maxima.len() {
        1 => maxima[0],
        2 => {
            // the later of two adjacent maxima in counterclockwise order
            if (maxima[0] + 1) % k == maxima[1] {
                maxima[1]
            } else {
                maxima[0]
            }
        }
        n => panic!("a polygon cannot attain a linear maximum at {n} vertices"),
    };
    let labels: Vec<_> = (0..k).map(|j| p.vertex(start + j)).collect();
    let i = (d.edge_index + k - start) % k + 1;
    (labels, i, maxima.len() == 2)
}

/// Mutates `p` with respect to `d`, applying the vertex formulas of cases I
/// and II and re-hulling.
pub fn mutate(p: &Polygon, d: &MutationData) -> Result<Polygon> {
    d.validate(p)?;
    let (rho, i, case_two) = mutation_labelling(p, d);
    let total = rho.len();
    let m = if case_two { total - 1 } else { total };
    let mut out = Vec::with_capacity(m + 1);
    for j in 1..=m {
        let v = rho[j - 1];
        if j <= i {
            out.push(v);
        } else {
            out.push(v + d.h.dot(v) * d.f);
        }
    }
    let last = if case_two { rho[m] } else { rho[0] };
    out.push(last + d.h_max * d.f);
    Polygon::new(&out)
}

/// `ψ(u) = u - min(<f,u>, 0) h`.
pub fn psi(u: &RationalPoint, d: &MutationData) -> RationalPoint {
    let t = u.pair(d.f);
    if t.is_negative() {
        RationalPoint::new(&u.x - &t * rat(d.h.x), &u.y - &t * rat(d.h.y))
    } else {
        u.clone()
    }
}

/// Image of the dual polygon under the piecewise-linear map `ψ`. The polygon
/// is split along the line `<f,u> = 0` so both pieces map linearly.
pub fn mutate_dual(q: &RationalPolygon, d: &MutationData) -> Result<RationalPolygon> {
    let verts = q.vertices();
    let k = verts.len();
    let mut pts: Vec<RationalPoint> = Vec::with_capacity(k + 2);
    for j in 0..k {
        let (a, b) = (&verts[j], &verts[(j + 1) % k]);
        pts.push(psi(a, d));
        let (ta, tb) = (a.pair(d.f), b.pair(d.f));
        if (ta.is_negative() && tb.is_positive()) || (ta.is_positive() && tb.is_negative()) {
            let s: Rational = &ta / (&ta - &tb);
            let cross = RationalPoint::new(&a.x + (&b.x - &a.x) * &s, &a.y + (&b.y - &a.y) * &s);
            debug_assert!(cross.pair(d.f).is_zero());
            pts.push(cross);
        }
    }
    RationalPolygon::new(&pts)
}

/// A datum on `p_prime` that mutates it back to the class of `p`.
pub fn inverse_mutation(p_prime: &Polygon, d: &MutationData, p: &Polygon) -> Result<MutationData> {
    let target = normal_form(p);
    let candidates = find_mutation_data(p_prime);
    let preferred = candidates.iter().filter(|c| c.h == -d.h);
    let rest = candidates.iter().filter(|c| c.h != -d.h);
    for c in preferred.chain(rest) {
        if let Ok(back) = mutate(p_prime, c) {
            if normal_form(&back) == target {
                return Ok(*c);
            }
        }
    }
    Err(Error::NoInverseFound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphBounds {
    pub max_nodes: usize,
    /// Largest absolute coordinate allowed in a node's normal form.
    pub max_vertex_coord: i64,
    pub max_lattice_points: u64,
}

impl GraphBounds {
    pub fn new(max_nodes: usize, max_vertex_coord: i64, max_lattice_points: u64) -> Result<Self> {
        let b = GraphBounds { max_nodes, max_vertex_coord, max_lattice_points };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_nodes == 0 {
            return Err(Error::InvalidBounds("max_nodes must be at least 1".into()));
        }
        if self.max_vertex_coord < 1 || self.max_lattice_points < 4 {
            return Err(Error::InvalidBounds("coordinate and lattice-point bounds too small".into()));
        }
        Ok(())
    }

    fn admits(&self, p: &Polygon) -> bool {
        p.max_abs_coordinate() <= self.max_vertex_coord
            && p.lattice_point_count() <= self.max_lattice_points
    }
}

impl Default for GraphBounds {
    fn default() -> Self {
        GraphBounds { max_nodes: 2000, max_vertex_coord: 30, max_lattice_points: 400 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub source: usize,
    pub target: usize,
    pub data: MutationData,
}

/// Nodes are normal forms; arc data refer to the source node's vertex order.
#[derive(Clone, Debug)]
pub struct MutationGraph {
    pub nodes: Vec<Polygon>,
    pub arcs: Vec<Arc>,
    /// BFS parent of each node (`None` for the seed).
    pub parent: Vec<Option<usize>>,
    pub index: HashMap<Polygon, usize>,
    pub bounds: GraphBounds,
    /// True when the closure was completed without any pruning.
    pub exhausted: bool,
}

impl MutationGraph {
    pub fn contains(&self, p: &Polygon) -> bool {
        self.index.contains_key(&normal_form(p))
    }

    /// Arcs from the seed to node `target` along BFS parents.
    pub fn path_to(&self, target: usize) -> Vec<Arc> {
        let mut path = Vec::new();
        let mut cur = target;
        while let Some(parent) = self.parent[cur] {
            let arc = self
                .arcs
                .iter()
                .find(|a| a.source == parent && a.target == cur)
                .expect("tree arc recorded");
            path.push(arc.clone());
            cur = parent;
        }
        path.reverse();
        path
    }
}

/// Breadth-first closure of the seed under mutation, deduplicated by normal form.
///
/// Each BFS level is expanded in parallel and merged in a fixed order, so the
/// result does not depend on scheduling.
pub fn mutation_graph(seed: &Polygon, bounds: GraphBounds) -> MutationGraph {
    let root = normal_form(seed);
    let mut g = MutationGraph {
        nodes: vec![root.clone()],
        arcs: Vec::new(),
        parent: vec![None],
        index: HashMap::from([(root, 0)]),
        bounds,
        exhausted: true,
    };
    let mut frontier: VecDeque<usize> = VecDeque::from([0]);
    while !frontier.is_empty() {
        let level: Vec<usize> = frontier.drain(..).collect();
        let expansions: Vec<(usize, Vec<(MutationData, Polygon)>)> = level
            .par_iter()
            .map(|&src| {
                let p = &g.nodes[src];
                let out = find_mutation_data(p)
                    .into_iter()
                    .map(|d| {
                        let q = mutate(p, &d).expect("qualifying data always mutates");
                        (d, normal_form(&q))
                    })
                    .collect();
                (src, out)
            })
            .collect();
        for (src, outs) in expansions {
            for (d, q) in outs {
                let target = match g.index.get(&q) {
                    Some(&t) => t,
                    None => {
                        if !bounds.admits(&q) || g.nodes.len() >= bounds.max_nodes {
                            g.exhausted = false;
                            continue;
                        }
                        let t = g.nodes.len();
                        g.nodes.push(q.clone());
                        g.parent.push(Some(src));
                        g.index.insert(q, t);
                        frontier.push_back(t);
                        t
                    }
                };
                g.arcs.push(Arc { source: src, target, data: d });
            }
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvariantWitness {
    Content(SingularityContent, SingularityContent),
    Degree(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Arcs from `normal_form(p1)` to `normal_form(p2)`.
    Yes(Vec<Arc>, Vec<Polygon>),
    No(InvariantWitness),
    Unknown,
}

/// Decides mutation equivalence within the given bounds.
pub fn are_mutation_equivalent(p1: &Polygon, p2: &Polygon, bounds: GraphBounds) -> Equivalence {
    let (c1, c2) = (singularity_content(p1), singularity_content(p2));
    if c1 != c2 {
        return Equivalence::No(InvariantWitness::Content(c1, c2));
    }
    let (d1, d2) = (degree(p1), degree(p2));
    if d1 != d2 {
        return Equivalence::No(InvariantWitness::Degree(d1.to_string(), d2.to_string()));
    }
    let g = mutation_graph(p1, bounds);
    match g.index.get(&normal_form(p2)) {
        Some(&t) => {
            let path = g.path_to(t);
            let mut polys = vec![g.nodes[0].clone()];
            polys.extend(path.iter().map(|a| g.nodes[a.target].clone()));
            Equivalence::Yes(path, polys)
        }
        None => Equivalence::Unknown,
    }
}
