//! File formats: Fan JSON, TypeCone JSON, ROFF polytopes, seed input and
//! DOT exports. Every writer is byte-deterministic.

use serde::Deserialize;
use thiserror::Error;

use crate::clusterfan::{ClusterError, Diagonal, ExchangeGraph, Seed, Triangulation};
use crate::polyhedra::{Fan, PolyError, VPolytope};
use crate::scalar::{parse_rational, ExactField};
use crate::typecone::{LinearDependency, TypeConeJson};
use crate::Rat;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `{"dim":n,"rays":[...],"cones":[...],"labels":[...]}` on one line.
pub fn fan_to_json(fan: &Fan) -> String {
    serde_json::to_string(fan).expect("fan serializes")
}

pub fn fan_from_json(s: &str) -> Result<Fan, IoError> {
    Ok(serde_json::from_str(s)?)
}

pub fn type_cone_to_json(tc: &TypeConeJson) -> String {
    serde_json::to_string(tc).expect("type cone serializes")
}

pub fn type_cone_from_json(s: &str) -> Result<TypeConeJson, IoError> {
    Ok(serde_json::from_str(s)?)
}

/// `ROFF`, `V F`, one `p/q ...` line per vertex (lexicographic order), then
/// one `k i₁ … i_k` line per facet.
pub fn write_roff<F: ExactField>(p: &VPolytope<F>) -> Result<String, PolyError> {
    let facets = p.facets()?;
    let mut out = String::from("ROFF\n");
    out.push_str(&format!("{} {}\n", p.vertices().len(), facets.len()));
    for v in p.vertices() {
        let parts: Vec<String> = v.iter().map(ExactField::to_pq).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    for f in &facets {
        let parts: Vec<String> = f.vertices.iter().map(usize::to_string).collect();
        out.push_str(&format!("{} {}\n", f.vertices.len(), parts.join(" ")));
    }
    Ok(out)
}

/// Parsed ROFF contents: vertex coordinates and facet index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roff {
    pub vertices: Vec<Vec<Rat>>,
    pub facets: Vec<Vec<usize>>,
}

pub fn parse_roff(s: &str) -> Result<Roff, IoError> {
    let bad = |line: usize, msg: &str| IoError::Format {
        line,
        msg: msg.to_string(),
    };
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, "ROFF")) => {}
        Some((i, _)) => return Err(bad(i, "expected ROFF header")),
        None => return Err(bad(1, "empty input")),
    }
    let (i, counts) = lines.next().ok_or_else(|| bad(2, "missing counts"))?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| bad(i, "bad counts"))?;
    let [nv, nf] = counts[..] else {
        return Err(bad(i, "expected `V F`"));
    };
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (i, l) = lines.next().ok_or_else(|| bad(i, "missing vertex line"))?;
        let v: Option<Vec<Rat>> = l.split_whitespace().map(parse_rational).collect();
        let v = v.ok_or_else(|| bad(i, "bad rational"))?;
        if vertices
            .first()
            .is_some_and(|w: &Vec<Rat>| w.len() != v.len())
        {
            return Err(bad(i, "vertex dimension differs"));
        }
        vertices.push(v);
    }
    let mut facets = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (i, l) = lines.next().ok_or_else(|| bad(i, "missing facet line"))?;
        let nums: Vec<usize> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad(i, "bad facet index"))?;
        match nums.split_first() {
            Some((&k, rest)) if k == rest.len() && rest.iter().all(|&x| x < nv) => {
                facets.push(rest.to_vec())
            }
            _ => return Err(bad(i, "bad facet line")),
        }
    }
    if let Some((i, _)) = lines.next() {
        return Err(bad(i, "trailing data"));
    }
    Ok(Roff { vertices, facets })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TriangulationInput {
    polygon: usize,
    diagonals: Vec<Diagonal>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SeedInputRepr {
    Matrix {
        b: Vec<Vec<i64>>,
        #[serde(default)]
        labels: Vec<String>,
    },
    Triangulation {
        triangulation: TriangulationInput,
    },
}

/// A parsed seed file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedInput {
    /// Exchange matrix and optional names of the initial variables.
    Matrix {
        seed: Seed,
        labels: Vec<String>,
    },
    Triangulation(Triangulation),
}

/// `{"b": [[..]], "labels": [..]}` or
/// `{"triangulation": {"polygon": m, "diagonals": [[a,b], ...]}}`.
pub fn parse_seed_input(s: &str) -> Result<SeedInput, IoError> {
    match serde_json::from_str::<SeedInputRepr>(s)? {
        SeedInputRepr::Matrix { b, labels } => {
            let seed = Seed::new(b)?;
            if !labels.is_empty() && labels.len() != seed.rank() {
                return Err(IoError::Format {
                    line: 1,
                    msg: format!("{} labels for rank {}", labels.len(), seed.rank()),
                });
            }
            Ok(SeedInput::Matrix { seed, labels })
        }
        SeedInputRepr::Triangulation { triangulation } => Ok(SeedInput::Triangulation(
            Triangulation::new(triangulation.polygon, triangulation.diagonals)?,
        )),
    }
}

fn dependency_label(d: &LinearDependency) -> String {
    let mids: Vec<String> = d
        .wall
        .shared
        .iter()
        .zip(&d.middle_coeffs)
        .map(|(s, a)| format!("{}*r{s}", a.to_pq()))
        .collect();
    format!(
        "{}*r{} + {}*r{} = {}",
        d.alpha.to_pq(),
        d.wall.exchanged.0,
        d.alpha_prime.to_pq(),
        d.wall.exchanged.1,
        if mids.is_empty() {
            "0".to_string()
        } else {
            mids.join(" + ")
        }
    )
}

/// Exchange graph in DOT. Nodes are labelled by their sorted ray indices;
/// edges by the exchanged rays, plus the wall dependency when given
/// (`deps` in wall order, matched to edges by cone pair).
pub fn exchange_dot(graph: &ExchangeGraph, deps: Option<&[LinearDependency]>) -> String {
    let mut out = String::from("graph exchange {\n");
    for (i, node) in graph.nodes().iter().enumerate() {
        let label: Vec<String> = node.iter().map(usize::to_string).collect();
        let style = if i == graph.initial() {
            ", shape=box"
        } else {
            ""
        };
        out.push_str(&format!("  n{i} [label=\"{}\"{style}];\n", label.join(",")));
    }
    for e in graph.edges() {
        let mut label = format!("r{}/r{}", e.exchanged.0, e.exchanged.1);
        if let Some(d) = deps.and_then(|ds| {
            ds.iter()
                .find(|d| (d.wall.cone_a, d.wall.cone_b) == (e.source, e.target))
        }) {
            label.push_str(&format!(": {}", dependency_label(d)));
        }
        out.push_str(&format!(
            "  n{} -- n{} [label=\"{label}\"];\n",
            e.source, e.target
        ));
    }
    out.push_str("}\n");
    out
}
