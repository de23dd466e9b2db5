//! Bounded enumeration of Fano polygons and their classification into
//! mutation classes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{degree, normal_form, LatticePoint, Polygon};
use crate::laurent::mm_space;
use crate::mutation::{mutation_graph, Arc, GraphBounds};
use crate::period::{classical_period, compare_affine, period_signature, AffineComparison, PeriodSignature};
use crate::singularity::{singularity_content, CyclicQuotient, SingularityContent};

/// Which singularity contents a census keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentFilter {
    Any,
    /// Empty basket.
    EmptyBasket,
    /// A nonempty basket of `1/3(1,1)` points only.
    OneThird,
}

impl ContentFilter {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "any" => Ok(ContentFilter::Any),
            "" | "empty" | "(n,{})" | "(n,∅)" => Ok(ContentFilter::EmptyBasket),
            "1/3(1,1)" | "k*1/3(1,1)" => Ok(ContentFilter::OneThird),
            other => Err(Error::parse(format!("unknown content filter '{other}'"))),
        }
    }

    pub fn accepts(&self, c: &SingularityContent) -> bool {
        match self {
            ContentFilter::Any => true,
            ContentFilter::EmptyBasket => c.basket.is_empty(),
            ContentFilter::OneThird => {
                let third = CyclicQuotient { n: 3, q: 1 };
                !c.basket.is_empty() && c.basket.iter().all(|b| *b == third)
            }
        }
    }
}

fn half(p: LatticePoint) -> u8 {
    if p.y > 0 || (p.y == 0 && p.x > 0) {
        0
    } else {
        1
    }
}

/// Counterclockwise angle order starting from the positive `x` axis.
fn angle_cmp(a: LatticePoint, b: LatticePoint) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&a.det(b)))
}

fn turn(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b - a).det(c - b)
}

/// Every Fano polygon with vertices in `[-b, b]²`, as sorted normal forms.
pub fn enumerate_fano_polygons(b: i64) -> Result<Vec<Polygon>> {
    if b < 1 {
        return Err(Error::InvalidBounds("box size must be at least 1".into()));
    }
    let mut pts: Vec<LatticePoint> = (-b..=b)
        .flat_map(|x| (-b..=b).map(move |y| LatticePoint::new(x, y)))
        .filter(|p| *p != LatticePoint::ORIGIN && p.is_primitive())
        .collect();
    pts.sort_by(|a, b| angle_cmp(*a, *b));
    // each polygon is found once, from its vertex of least angle
    let found: Vec<Vec<Polygon>> = (0..pts.len())
        .into_par_iter()
        .map(|start| {
            let mut out = Vec::new();
            let mut chain = vec![start];
            extend_chain(&pts, &mut chain, &mut out);
            out
        })
        .collect();
    let mut seen: HashSet<Polygon> = HashSet::new();
    for p in found.into_iter().flatten() {
        seen.insert(p);
    }
    let mut all: Vec<Polygon> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

fn extend_chain(pts: &[LatticePoint], chain: &mut Vec<usize>, out: &mut Vec<Polygon>) {
    let last = pts[*chain.last().unwrap()];
    let first = pts[chain[0]];
    for q_idx in chain.last().unwrap() + 1..pts.len() {
        let q = pts[q_idx];
        if last.det(q) <= 0 {
            continue;
        }
        if chain.len() >= 2 && turn(pts[chain[chain.len() - 2]], last, q) <= 0 {
            continue;
        }
        chain.push(q_idx);
        if chain.len() >= 3 && q.det(first) > 0 && turn(last, q, first) > 0 && turn(q, first, pts[chain[1]]) > 0 {
            let verts: Vec<LatticePoint> = chain.iter().map(|&i| pts[i]).collect();
            let p = Polygon::new(&verts).expect("convex chain around the origin is Fano");
            out.push(normal_form(&p));
        }
        extend_chain(pts, chain, out);
        chain.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    pub box_size: i64,
    pub filter: ContentFilter,
    pub bounds: GraphBounds,
    /// Mutation depth for spaces of maximally-mutable polynomials.
    pub depth: usize,
    /// Period order for signatures and affine comparison.
    pub order: usize,
}

impl CensusConfig {
    pub fn new(box_size: i64, filter: ContentFilter) -> Self {
        CensusConfig { box_size, filter, bounds: GraphBounds::default(), depth: 2, order: 6 }
    }
}

/// A member joined to the cluster by an explicit mutation path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Join {
    pub from: Polygon,
    pub to: Polygon,
    pub path: Vec<Arc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub representative: Polygon,
    pub members: Vec<Polygon>,
    pub content: SingularityContent,
    pub degree: String,
    pub signature: Option<PeriodSignature>,
    pub joins: Vec<Join>,
    /// Whether every mutation graph grown inside this cluster was exhausted.
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Distinguished by the named invariant.
    Distinguished(String),
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub a: usize,
    pub b: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub config: CensusConfig,
    pub enumerated: usize,
    pub kept: usize,
    pub clusters: Vec<Cluster>,
    pub pairs: Vec<PairReport>,
}

impl Census {
    pub fn unresolved(&self) -> usize {
        self.pairs.iter().filter(|p| p.verdict == Verdict::Unresolved).count()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Groups polygons sharing content and degree into clusters joined by
/// mutation paths found in bounded mutation graphs.
fn cluster_group(polys: &[Polygon], bounds: GraphBounds) -> Vec<(Vec<usize>, Vec<Join>, bool)> {
    let index: HashMap<&Polygon, usize> = polys.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut uf = UnionFind::new(polys.len());
    let mut covered = vec![false; polys.len()];
    let mut joins: Vec<(usize, Join)> = Vec::new();
    let mut exhausted = vec![true; polys.len()];
    for s in 0..polys.len() {
        if covered[s] {
            continue;
        }
        let g = mutation_graph(&polys[s], bounds);
        exhausted[s] = g.exhausted;
        for (node, q) in g.nodes.iter().enumerate() {
            if let Some(&t) = index.get(q) {
                covered[t] = true;
                if t != s && uf.union(s, t) {
                    joins.push((s, Join { from: polys[s].clone(), to: q.clone(), path: g.path_to(node) }));
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, (Vec<usize>, Vec<Join>, bool)> = BTreeMap::new();
    for i in 0..polys.len() {
        let r = uf.find(i);
        let e = by_root.entry(r).or_insert_with(|| (Vec::new(), Vec::new(), true));
        e.0.push(i);
        e.2 &= exhausted[i];
    }
    for (s, j) in joins {
        let r = uf.find(s);
        by_root.get_mut(&r).unwrap().1.push(j);
    }
    by_root.into_values().collect()
}

fn simplicity(p: &Polygon) -> (u64, Vec<LatticePoint>) {
    (p.lattice_point_count(), p.vertices().to_vec())
}

/// Enumerates, filters and classifies the polygons of one box.
pub fn run_census(cfg: &CensusConfig) -> Result<Census> {
    cfg.bounds.validate()?;
    let all = enumerate_fano_polygons(cfg.box_size)?;
    let enumerated = all.len();
    let tagged: Vec<(Polygon, SingularityContent, String)> = all
        .into_par_iter()
        .map(|p| {
            let c = singularity_content(&p);
            let d = degree(&p).to_string();
            (p, c, d)
        })
        .filter(|(_, c, _)| cfg.filter.accepts(c))
        .collect();
    let kept = tagged.len();
    let mut groups: BTreeMap<(SingularityContent, String), Vec<Polygon>> = BTreeMap::new();
    for (p, c, d) in tagged {
        groups.entry((c, d)).or_default().push(p);
    }
    let group_list: Vec<((SingularityContent, String), Vec<Polygon>)> = groups.into_iter().collect();
    let clustered: Vec<Vec<Cluster>> = group_list
        .par_iter()
        .map(|((c, d), polys)| {
            cluster_group(polys, cfg.bounds)
                .into_iter()
                .map(|(idx, joins, exhausted)| {
                    let members: Vec<Polygon> = idx.iter().map(|&i| polys[i].clone()).collect();
                    let representative =
                        members.iter().min_by_key(|p| simplicity(p)).unwrap().clone();
                    Cluster {
                        representative,
                        members,
                        content: c.clone(),
                        degree: d.clone(),
                        signature: None,
                        joins,
                        exhausted,
                    }
                })
                .collect()
        })
        .collect();
    let mut clusters: Vec<Cluster> = clustered.into_iter().flatten().collect();
    let signatures: Vec<Result<PeriodSignature>> = clusters
        .par_iter()
        .map(|c| period_signature(&c.representative, cfg.depth, cfg.order))
        .collect();
    for (c, s) in clusters.iter_mut().zip(signatures) {
        c.signature = Some(s?);
    }
    let mut pairs = Vec::new();
    let mut need_periods: Vec<(usize, usize)> = Vec::new();
    for a in 0..clusters.len() {
        for b in a + 1..clusters.len() {
            let (ca, cb) = (&clusters[a], &clusters[b]);
            let verdict = if ca.content != cb.content {
                Some("singularity content")
            } else if ca.degree != cb.degree {
                Some("degree")
            } else if ca.signature.as_ref().unwrap().key() != cb.signature.as_ref().unwrap().key() {
                Some("period signature")
            } else {
                None
            };
            match verdict {
                Some(v) => pairs.push(PairReport { a, b, verdict: Verdict::Distinguished(v.into()) }),
                None => need_periods.push((a, b)),
            }
        }
    }
    let compared: Vec<Result<PairReport>> = need_periods
        .par_iter()
        .map(|&(a, b)| {
            let sa = classical_period(&mm_space(&clusters[a].representative, cfg.depth)?.general(), cfg.order);
            let sb = classical_period(&mm_space(&clusters[b].representative, cfg.depth)?.general(), cfg.order);
            let verdict = match compare_affine(&sa, &sb, cfg.order) {
                AffineComparison::NoMatch { order } => {
                    Verdict::Distinguished(format!("no affine period match up to t^{order}"))
                }
                _ => Verdict::Unresolved,
            };
            Ok(PairReport { a, b, verdict })
        })
        .collect();
    for r in compared {
        pairs.push(r?);
    }
    pairs.sort_by_key(|p| (p.a, p.b));
    Ok(Census { config: cfg.clone(), enumerated, kept, clusters, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_box_contains_the_reflexive_basics() {
        let all = enumerate_fano_polygons(1).unwrap();
        let p2 = normal_form(&Polygon::new(&[(1, 0).into(), (0, 1).into(), (-1, -1).into()]).unwrap());
        let sq = normal_form(
            &Polygon::new(&[(1, 1).into(), (-1, 1).into(), (-1, -1).into(), (1, -1).into()]).unwrap(),
        );
        assert!(all.contains(&p2) && all.contains(&sq));
        // every vertex set fitting in the unit box is one of the 16 reflexive polygons
        assert!(all.len() <= 16);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn filters() {
        let empty = SingularityContent::new(3, vec![]);
        let third = SingularityContent::new(6, vec![CyclicQuotient { n: 3, q: 1 }; 2]);
        assert!(ContentFilter::EmptyBasket.accepts(&empty));
        assert!(!ContentFilter::EmptyBasket.accepts(&third));
        assert!(ContentFilter::OneThird.accepts(&third));
        assert!(!ContentFilter::OneThird.accepts(&empty));
        assert!(ContentFilter::parse("nonsense").is_err());
    }

    #[test]
    fn small_census() {
        let cfg = CensusConfig::new(1, ContentFilter::EmptyBasket);
        let c = run_census(&cfg).unwrap();
        assert!(c.kept > 0);
        assert_eq!(c.unresolved(), 0, "{:?}", c.pairs);
        assert!(c.clusters.len() <= 10);
    }
}
