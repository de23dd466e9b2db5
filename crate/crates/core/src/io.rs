//! JSON interchange formats.
//!
//! * Polygon: `{"vertices": [[x, y], …]}`.
//! * Rational polygon: `{"vertices": [["p/q", "r/s"], …]}`.
//! * Laurent polynomial: `{"params": ["a", …], "terms": [{"exp": [i, j], "coeff": {"1": "20", "a*b": "2"}}]}`.
//! * Reference coefficients: `{"convention": "regularized" | "plain", "coeffs": {"3": "6"}, "substitution": {"a": "0"}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, Polygon, Rational, RationalPoint, RationalPolygon};
use crate::laurent::{MMSpace, ParamLaurent};
use crate::mutation::MutationGraph;
use crate::period::{Convention, PeriodSeries, ReferenceFile};
use crate::poly::{parse_rational, ParamPolynomial};

#[derive(Serialize, Deserialize)]
struct PolygonDoc {
    vertices: Vec<[i64; 2]>,
}

pub fn points_json(pts: &[LatticePoint]) -> Vec<[i64; 2]> {
    pts.iter().map(|v| [v.x, v.y]).collect()
}

pub fn polygon_json(p: &Polygon) -> Value {
    json!({ "vertices": points_json(p.vertices()) })
}

pub fn parse_polygon(s: &str) -> Result<Polygon> {
    let doc: PolygonDoc = serde_json::from_str(s)?;
    polygon_from_value(&doc.vertices)
}

fn polygon_from_value(vs: &[[i64; 2]]) -> Result<Polygon> {
    let pts: Vec<LatticePoint> = vs.iter().map(|&[x, y]| LatticePoint::new(x, y)).collect();
    Polygon::new(&pts)
}

pub fn rational_polygon_json(q: &RationalPolygon) -> Value {
    let vs: Vec<[String; 2]> = q.vertices().iter().map(|v| [v.x.to_string(), v.y.to_string()]).collect();
    json!({ "vertices": vs })
}

pub fn parse_rational_polygon(s: &str) -> Result<RationalPolygon> {
    #[derive(Deserialize)]
    struct Doc {
        vertices: Vec<[String; 2]>,
    }
    let doc: Doc = serde_json::from_str(s)?;
    let pts = doc
        .vertices
        .iter()
        .map(|[x, y]| Ok(RationalPoint::new(parse_rational(x)?, parse_rational(y)?)))
        .collect::<Result<Vec<_>>>()?;
    RationalPolygon::new(&pts)
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    exp: [i64; 2],
    coeff: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct LaurentDoc {
    #[serde(default)]
    params: Vec<String>,
    terms: Vec<TermDoc>,
}

pub fn laurent_json(g: &ParamLaurent) -> Value {
    let terms: Vec<TermDoc> = g
        .terms()
        .map(|(e, c)| TermDoc { exp: [e.x, e.y], coeff: c.to_key_map(g.params()) })
        .collect();
    serde_json::to_value(LaurentDoc { params: g.params().to_vec(), terms }).expect("serialisable")
}

pub fn parse_laurent(s: &str) -> Result<ParamLaurent> {
    let doc: LaurentDoc = serde_json::from_str(s)?;
    laurent_from_doc(doc)
}

fn laurent_from_doc(doc: LaurentDoc) -> Result<ParamLaurent> {
    let mut g = ParamLaurent::zero(doc.params.clone());
    for t in &doc.terms {
        let c = ParamPolynomial::from_key_map(t.coeff.iter(), &doc.params)?;
        g.add_term(LatticePoint::new(t.exp[0], t.exp[1]), c);
    }
    Ok(g)
}

/// A file holding either a polygon or a Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolygonOrLaurent {
    Polygon(Polygon),
    Laurent(ParamLaurent),
}

pub fn parse_polygon_or_laurent(s: &str) -> Result<PolygonOrLaurent> {
    let v: Value = serde_json::from_str(s)?;
    if v.get("terms").is_some() {
        let doc: LaurentDoc = serde_json::from_value(v)?;
        Ok(PolygonOrLaurent::Laurent(laurent_from_doc(doc)?))
    } else {
        let doc: PolygonDoc = serde_json::from_value(v)?;
        Ok(PolygonOrLaurent::Polygon(polygon_from_value(&doc.vertices)?))
    }
}

pub fn series_json(s: &PeriodSeries) -> Value {
    let coeffs: Vec<BTreeMap<String, String>> = s.coeffs.iter().map(|c| c.to_key_map(&s.params)).collect();
    let display: Vec<String> = s.coeffs.iter().map(|c| c.display_with(&s.params).to_string()).collect();
    json!({ "params": s.params, "order": s.order(), "coeffs": coeffs, "display": display })
}

pub fn parse_series(s: &str) -> Result<PeriodSeries> {
    #[derive(Deserialize)]
    struct Doc {
        params: Vec<String>,
        coeffs: Vec<BTreeMap<String, String>>,
    }
    let doc: Doc = serde_json::from_str(s)?;
    let coeffs = doc
        .coeffs
        .iter()
        .map(|m| ParamPolynomial::from_key_map(m.iter(), &doc.params))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        return Err(Error::parse("a series needs at least c_0"));
    }
    Ok(PeriodSeries { params: doc.params, coeffs })
}

pub fn mm_space_json(s: &MMSpace) -> Value {
    json!({
        "polygon": polygon_json(&s.polygon),
        "params": s.params,
        "dimension": s.dimension(),
        "depth": s.depth,
        "stabilized": s.stabilized,
        "offset": laurent_json(&s.offset),
        "basis": s.basis.iter().map(laurent_json).collect::<Vec<_>>(),
        "general": laurent_json(&s.general()),
        "display": s.general().to_string(),
    })
}

pub fn parse_reference(s: &str) -> Result<ReferenceFile> {
    #[derive(Deserialize)]
    struct Doc {
        convention: Convention,
        #[serde(default)]
        coeffs: BTreeMap<String, String>,
        #[serde(default)]
        substitution: BTreeMap<String, String>,
    }
    let doc: Doc = serde_json::from_str(s)?;
    let mut coeffs = BTreeMap::new();
    for (k, v) in &doc.coeffs {
        let d: usize = k.trim().parse().map_err(|_| Error::parse(format!("order '{k}' is not a natural number")))?;
        coeffs.insert(d, parse_rational(v)?);
    }
    let substitution = doc
        .substitution
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_rational(v)?)))
        .collect::<Result<BTreeMap<String, Rational>>>()?;
    Ok(ReferenceFile { convention: doc.convention, coeffs, substitution })
}

/// One JSON object per line: the nodes, then the arcs, then a summary.
pub fn graph_jsonl(g: &MutationGraph) -> String {
    let mut out = String::new();
    for (i, p) in g.nodes.iter().enumerate() {
        let line = json!({ "kind": "node", "id": i, "vertices": points_json(p.vertices()), "parent": g.parent[i] });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    for a in &g.arcs {
        let line = json!({ "kind": "arc", "source": a.source, "target": a.target, "data": a.data });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    let summary = json!({
        "kind": "summary",
        "nodes": g.nodes.len(),
        "arcs": g.arcs.len(),
        "exhausted": g.exhausted,
        "bounds": g.bounds,
    });
    out.push_str(&summary.to_string());
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::dual;

    #[test]
    fn polygon_round_trip() {
        let p = parse_polygon(r#"{"vertices": [[0,1],[1,0],[-1,-1]]}"#).unwrap();
        assert_eq!(parse_polygon(&polygon_json(&p).to_string()).unwrap(), p);
        let q = dual(&p);
        assert_eq!(parse_rational_polygon(&rational_polygon_json(&q).to_string()).unwrap(), q);
    }

    #[test]
    fn malformed_input_reports_position() {
        match parse_polygon("{\"vertices\": [[0,1],\n [1,0}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_polygon(r#"{"vertices": [[0,1],[1,0],[1,1]]}"#), Err(Error::NotFano(_))));
    }

    #[test]
    fn laurent_round_trip() {
        let g = ParamLaurent::parse("x^-3*y + 20*y + 2/3*a*b*x + y^-1 - b", &["a", "b"]).unwrap();
        let s = laurent_json(&g).to_string();
        assert_eq!(parse_laurent(&s).unwrap(), g);
        match parse_polygon_or_laurent(&s).unwrap() {
            PolygonOrLaurent::Laurent(h) => assert_eq!(h, g),
            _ => panic!("expected a Laurent polynomial"),
        }
    }

    #[test]
    fn reference_parsing() {
        let r = parse_reference(r#"{"convention": "regularized", "coeffs": {"3": "6", "6": "90"}}"#).unwrap();
        assert_eq!(r.convention, Convention::Regularized);
        assert_eq!(r.coeffs.len(), 2);
        assert!(parse_reference(r#"{"convention": "weird"}"#).is_err());
    }
}
