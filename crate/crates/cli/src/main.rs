use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fano_mirror::census::{run_census, Census, CensusConfig, ContentFilter, Verdict};
use fano_mirror::io::{
    graph_jsonl, mm_space_json, parse_polygon, parse_polygon_or_laurent, parse_reference,
    points_json, polygon_json, rational_polygon_json, series_json, PolygonOrLaurent,
};
use fano_mirror::lattice::{degree, dual, edges, normal_form_with_maps, Polygon};
use fano_mirror::laurent::{mm_space, ParamLaurent};
use fano_mirror::mutation::{find_mutation_data, mutate, mutation_graph, GraphBounds, MutationData};
use fano_mirror::pencil::{build_pencil, verify_homogeneity, verify_projections};
use fano_mirror::period::{classical_period, compare_affine, compare_to_reference, AffineComparison};
use fano_mirror::singularity::{classify, cone_types, genus_from_content, singularity_content};
use fano_mirror::Error;

mod store;

#[derive(Parser)]
#[command(name = "fano-mirror", version, about = "Exact computations on Fano polygons and their mirrors")]
struct Cli {
    /// Use one worker thread and omit timestamps from stored records.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// Polygon JSON file.
    #[arg(short, long)]
    input: PathBuf,
}

#[derive(clap::Args, Clone, Copy)]
struct Bounds {
    /// Largest number of polygons in a mutation graph.
    #[arg(long, default_value_t = 2000)]
    max_nodes: usize,
    /// Largest absolute vertex coordinate of a polygon in a mutation graph.
    #[arg(long, default_value_t = 30)]
    max_coord: i64,
    /// Largest number of lattice points of a polygon in a mutation graph.
    #[arg(long, default_value_t = 400)]
    max_points: u64,
}

impl Bounds {
    fn graph_bounds(self) -> Result<GraphBounds, Error> {
        GraphBounds::new(self.max_nodes, self.max_coord, self.max_points)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a polygon under GL(2,Z).
    NormalForm(Input),
    /// The dual polygon.
    Dual(Input),
    /// Singularity content, cone types and genus.
    Content(Input),
    /// Degree, the normalised area of the dual.
    Degree(Input),
    /// All mutation data of a polygon.
    Mutations(Input),
    /// Mutates along the datum with the given index.
    Mutate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        index: usize,
    },
    /// Bounded mutation graph as JSON lines.
    Graph {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Space of maximally-mutable Laurent polynomials.
    Mm {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Classical period of a Laurent polynomial, or of the general
    /// maximally-mutable polynomial of a polygon.
    Period {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Reference coefficient file to compare against.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Searches for an affine-linear match between two periods.
    Compare {
        /// Two polygon or Laurent polynomial files.
        #[arg(short, long, num_args = 1, required = true)]
        input: Vec<PathBuf>,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// The three-dimensional pencil interpolating one mutation.
    Pencil {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        index: usize,
    },
    /// Bounded census of Fano polygons grouped into mutation classes.
    Classify {
        /// Vertices are taken in [-B, B]^2.
        #[arg(long = "box", default_value_t = 2)]
        box_size: i64,
        /// "empty", "1/3(1,1)" or "any".
        #[arg(long, default_value = "empty")]
        filter_content: String,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// JSON-lines store of class records.
        #[arg(long)]
        store: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::NotFano(_)
            | Error::DegenerateHull
            | Error::DegenerateCone
            | Error::InvalidMutationData(_)
            | Error::InvalidBounds(_) => Failure::Input(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_polygon(i: &Input) -> Result<Polygon, Failure> {
    Ok(parse_polygon(&read(&i.input)?)?)
}

fn datum_at(p: &Polygon, index: usize) -> Result<MutationData, Failure> {
    let data = find_mutation_data(p);
    data.get(index).copied().ok_or_else(|| {
        Failure::Input(format!("mutation index {index} out of range: the polygon has {} data", data.len()))
    })
}

fn laurent_for(path: &Path, depth: usize) -> Result<ParamLaurent, Failure> {
    Ok(match parse_polygon_or_laurent(&read(path)?)? {
        PolygonOrLaurent::Laurent(g) => g,
        PolygonOrLaurent::Polygon(p) => mm_space(&p, depth)?.general(),
    })
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn census_lines(c: &Census) -> Vec<Value> {
    let mut out = Vec::new();
    for (i, cl) in c.clusters.iter().enumerate() {
        let joins: Vec<Value> = cl
            .joins
            .iter()
            .map(|j| {
                json!({
                    "from": points_json(j.from.vertices()),
                    "to": points_json(j.to.vertices()),
                    "path": j.path.iter().map(|a| a.data).collect::<Vec<_>>(),
                })
            })
            .collect();
        out.push(json!({
            "kind": "cluster",
            "index": i,
            "representative": points_json(cl.representative.vertices()),
            "content": cl.content.to_string(),
            "degree": cl.degree,
            "members": cl.members.iter().map(|p| points_json(p.vertices())).collect::<Vec<_>>(),
            "exhausted": cl.exhausted,
            "signature": cl.signature,
            "joins": joins,
        }));
    }
    for p in &c.pairs {
        let (verdict, reason) = match &p.verdict {
            Verdict::Distinguished(r) => ("distinguished", Some(r.clone())),
            Verdict::Unresolved => ("unresolved", None),
        };
        out.push(json!({ "kind": "pair", "a": p.a, "b": p.b, "verdict": verdict, "invariant": reason }));
    }
    out.push(json!({
        "kind": "summary",
        "box": c.config.box_size,
        "filter": c.config.filter,
        "bounds": c.config.bounds,
        "depth": c.config.depth,
        "order": c.config.order,
        "enumerated": c.enumerated,
        "kept": c.kept,
        "clusters": c.clusters.len(),
        "unresolved_pairs": c.unresolved(),
        "all_exhausted": c.clusters.iter().all(|cl| cl.exhausted),
    }));
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::NormalForm(i) => {
            let p = load_polygon(&i)?;
            let nf = normal_form_with_maps(&p);
            let maps: Vec<[i64; 4]> = nf.maps.iter().map(|u| [u.a, u.b, u.c, u.d]).collect();
            print(&json!({ "vertices": points_json(nf.polygon.vertices()), "maps": maps }));
        }
        Command::Dual(i) => print(&rational_polygon_json(&dual(&load_polygon(&i)?))),
        Command::Content(i) => {
            let p = load_polygon(&i)?;
            let c = singularity_content(&p);
            let basket: Vec<Value> = c
                .basket_counts()
                .iter()
                .map(|(s, k)| json!({ "n": s.n, "q": s.q, "count": k }))
                .collect();
            let cones: Vec<Value> = cone_types(&p)
                .iter()
                .map(|s| json!({ "n": s.n, "q": s.q, "class": format!("{:?}", classify(*s)) }))
                .collect();
            print(&json!({
                "content": c.to_string(),
                "m": c.m,
                "basket": basket,
                "cones": cones,
                "genus": genus_from_content(&c).ok(),
            }));
        }
        Command::Degree(i) => print(&json!({ "degree": degree(&load_polygon(&i)?).to_string() })),
        Command::Mutations(i) => {
            let p = load_polygon(&i)?;
            let es = edges(&p);
            let data: Vec<Value> = find_mutation_data(&p)
                .iter()
                .enumerate()
                .map(|(k, d)| {
                    let e = &es[d.edge_index];
                    json!({ "index": k, "edge": points_json(&[e.start, e.end]), "data": d })
                })
                .collect();
            print(&json!({ "mutations": data }));
        }
        Command::Mutate { input, index } => {
            let p = load_polygon(&input)?;
            let d = datum_at(&p, index)?;
            let q = mutate(&p, &d)?;
            print(&json!({ "data": d, "polygon": polygon_json(&q) }));
        }
        Command::Graph { input, bounds } => {
            let p = load_polygon(&input)?;
            print_raw(&graph_jsonl(&mutation_graph(&p, bounds.graph_bounds()?)));
        }
        Command::Mm { input, depth } => print(&mm_space_json(&mm_space(&load_polygon(&input)?, depth)?)),
        Command::Period { input, order, depth, reference } => {
            let g = laurent_for(&input.input, depth)?;
            let s = classical_period(&g, order);
            let mut out = series_json(&s);
            if let Some(path) = reference {
                let r = parse_reference(&read(&path)?)?;
                let rep = compare_to_reference(&s, &r)?;
                out["reference"] = serde_json::to_value(rep).expect("serialisable");
            }
            print(&out);
        }
        Command::Compare { input, order, depth } => {
            if input.len() != 2 {
                return Err(Failure::Input("compare takes exactly two --input files".into()));
            }
            let s1 = classical_period(&laurent_for(&input[0], depth)?, order);
            let s2 = classical_period(&laurent_for(&input[1], depth)?, order);
            let out = match compare_affine(&s1, &s2, order) {
                AffineComparison::Match(m) => json!({
                    "verdict": "match",
                    "order": m.order,
                    "matrix": m.matrix.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "offset": m.offset.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "message": format!("affine-linear match verified up to t^{}", m.order),
                }),
                AffineComparison::NoMatch { order: at } => json!({
                    "verdict": "no_match",
                    "order": order,
                    "failing_order": at,
                    "message": format!("no affine-linear match up to t^{order}"),
                }),
                AffineComparison::Inconclusive { order } => json!({
                    "verdict": "inconclusive",
                    "order": order,
                    "message": format!("undecided up to t^{order}"),
                }),
            };
            print(&out);
        }
        Command::Pencil { input, index } => {
            let p = load_polygon(&input)?;
            let d = datum_at(&p, index)?;
            let pd = build_pencil(&p, &d)?;
            let proj = verify_projections(&pd, &p, &d);
            let homogeneous = verify_homogeneity(&pd);
            print(&json!({ "pencil": pd, "projections": proj, "homogeneous": homogeneous }));
        }
        Command::Classify { box_size, filter_content, bounds, depth, order, store } => {
            let mut cfg = CensusConfig::new(box_size, ContentFilter::parse(&filter_content)?);
            cfg.bounds = bounds.graph_bounds()?;
            cfg.depth = depth;
            cfg.order = order;
            let census = run_census(&cfg)?;
            let mut text = String::new();
            for line in census_lines(&census) {
                text.push_str(&line.to_string());
                text.push('\n');
            }
            print_raw(&text);
            if let Some(path) = store {
                let records = store::records(&census, cli.deterministic);
                store::append(&path, &records).map_err(|e| Failure::Compute(format!("store: {e}")))?;
            }
        }
    }
    Ok(())
}

fn print_raw(s: &str) {
    print!("{s}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if cli.deterministic {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("{}", json!({ "error": m }));
            ExitCode::from(1)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("{}", json!({ "error": m }));
            ExitCode::from(2)
        }
    }
}
