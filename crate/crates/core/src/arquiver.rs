//! Auslander–Reiten quivers of Dynkin quivers and the mesh-equation route
//! to generalized associahedra.
//!
//! The window knitted here is the part of the derived category made of the
//! shifted injectives `I_j[−1]` followed by all indecomposable modules. It
//! lives in the translation quiver `ZQ'`, where `Q'` is the quiver formed by
//! the shifted injectives: vertex `(k, v)` is the `k`-th inverse translate of
//! `I_v[−1]`, so slice 1 holds the projectives `P_v`. Classes in the
//! Grothendieck group follow from mesh additivity, and each τ-orbit stops at
//! the last positive class, which is an injective.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{dot, Matrix};
use crate::polyhedra::HPolytope;
use crate::scalar::ExactField;
use crate::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArError {
    #[error("unsupported Dynkin type {0}")]
    UnsupportedType(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("mesh parameter {index} is not positive")]
    NonPositiveParameter { index: usize },
    #[error("expected {expected} mesh parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("back-substitution could not isolate coordinate {0}")]
    SingularSystem(String),
    #[error("knitting left the window at {0}")]
    Knitting(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DynkinType {
    A,
    D,
    E,
}

impl FromStr for DynkinType {
    type Err = ArError;

    fn from_str(s: &str) -> Result<Self, ArError> {
        match s.trim() {
            "A" | "a" => Ok(Self::A),
            "D" | "d" => Ok(Self::D),
            "E" | "e" => Ok(Self::E),
            other => Err(ArError::UnsupportedType(other.to_string())),
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::A => "A",
            Self::D => "D",
            Self::E => "E",
        };
        f.write_str(s)
    }
}

/// Undirected edges of the Dynkin tree, 0-based.
///
/// `D_n` hangs vertex `n−1` off `n−3`; `E_n` hangs vertex `n−1` off vertex 2
/// of a chain of length `n−1`.
pub fn dynkin_edges(kind: DynkinType, rank: usize) -> Result<Vec<(usize, usize)>, ArError> {
    let chain = |len: usize| (1..len).map(|i| (i - 1, i)).collect::<Vec<_>>();
    match kind {
        DynkinType::A if rank >= 1 => Ok(chain(rank)),
        DynkinType::D if rank >= 4 => {
            let mut e = chain(rank - 1);
            e.push((rank - 3, rank - 1));
            Ok(e)
        }
        DynkinType::E if (6..=8).contains(&rank) => {
            let mut e = chain(rank - 1);
            e.push((2, rank - 1));
            Ok(e)
        }
        _ => Err(ArError::UnsupportedType(format!("{kind}{rank}"))),
    }
}

/// A Dynkin quiver: the tree of a simply-laced type with every edge oriented.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DynkinQuiver {
    kind: DynkinType,
    rank: usize,
    /// Directed edges `(source, target)`, 0-based.
    arrows: Vec<(usize, usize)>,
}

impl DynkinQuiver {
    pub fn new(
        kind: DynkinType,
        rank: usize,
        arrows: Vec<(usize, usize)>,
    ) -> Result<Self, ArError> {
        let mut want: Vec<(usize, usize)> = dynkin_edges(kind, rank)?;
        want.sort_unstable();
        let mut got: Vec<(usize, usize)> =
            arrows.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        got.sort_unstable();
        if got != want {
            return Err(ArError::InvalidQuiver(format!(
                "arrows do not orient the {kind}{rank} tree"
            )));
        }
        let mut arrows = arrows;
        arrows.sort_unstable();
        Ok(Self { kind, rank, arrows })
    }

    /// Every edge `{i, i+1}` (and the branch edge) points towards the lower
    /// index; for type A this is `1 ← 2 ← … ← n`.
    pub fn linear(kind: DynkinType, rank: usize) -> Result<Self, ArError> {
        let arrows = dynkin_edges(kind, rank)?
            .into_iter()
            .map(|(a, b)| (b, a))
            .collect();
        Self::new(kind, rank, arrows)
    }

    /// Parse `"2>1,3>2"` (1-based, `a>b` is an arrow a → b).
    pub fn parse_orientation(kind: DynkinType, rank: usize, text: &str) -> Result<Self, ArError> {
        let mut arrows = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = tok
                .split_once('>')
                .ok_or_else(|| ArError::InvalidQuiver(format!("bad arrow `{tok}`")))?;
            let parse = |s: &str| -> Result<usize, ArError> {
                s.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1 && v <= rank)
                    .map(|v| v - 1)
                    .ok_or_else(|| ArError::InvalidQuiver(format!("bad vertex `{s}`")))
            };
            arrows.push((parse(a)?, parse(b)?));
        }
        Self::new(kind, rank, arrows)
    }

    pub fn kind(&self) -> DynkinType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn is_linear_type_a(&self) -> bool {
        self.kind == DynkinType::A && self.arrows.iter().all(|&(s, t)| s == t + 1)
    }

    /// Exchange matrix of the seed whose quiver is the slice of shifted
    /// injectives: `b[i][j] = 1` for an arrow `j → i` of this quiver.
    pub fn exchange_matrix(&self) -> Vec<Vec<i64>> {
        let mut b = vec![vec![0; self.rank]; self.rank];
        for &(s, t) in &self.arrows {
            b[t][s] += 1;
            b[s][t] -= 1;
        }
        b
    }

    /// Dimension vector of the injective `I_v`: vertices with a path to `v`.
    fn injective_dim(&self, v: usize) -> Vec<i64> {
        let mut dim = vec![0; self.rank];
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if dim[u] == 0 {
                dim[u] = 1;
                stack.extend(self.arrows.iter().filter(|a| a.1 == u).map(|a| a.0));
            }
        }
        dim
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Module,
    ShiftedInjective,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArVertex {
    pub slice: usize,
    /// Tree vertex, 0-based.
    pub vertex: usize,
    /// Class in the Grothendieck group; negative on shifted injectives.
    pub dim: Vec<i64>,
    pub kind: VertexKind,
    pub name: String,
}

/// `q + t = r₁ + r₂ + r₃ + c` for the mesh from `start` (q) to `end` (t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshRelation {
    pub start: usize,
    pub middles: Vec<usize>,
    pub end: usize,
    pub coeff_id: usize,
}

#[derive(Clone, Debug)]
pub struct ArQuiver {
    quiver: DynkinQuiver,
    vertices: Vec<ArVertex>,
    arrows: Vec<(usize, usize)>,
    meshes: Vec<MeshRelation>,
    /// `projection[j]` is the vertex holding the injective `I_j`.
    projection: Vec<usize>,
    coeff_names: Vec<String>,
}

fn q_name(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("q{i}{j}")
    } else {
        format!("q{i}_{j}")
    }
}

/// Knit the window from the shifted injectives through the injectives.
pub fn knit_ar_quiver(q: &DynkinQuiver) -> Result<ArQuiver, ArError> {
    if q.kind == DynkinType::E && !cfg!(feature = "type-e") {
        return Err(ArError::UnsupportedType(format!(
            "E{} (enable feature `type-e`)",
            q.rank
        )));
    }
    let n = q.rank;
    // Slice quiver Q': an arrow j → i for each arrow i → j of Q.
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|v| q.arrows.iter().filter(|a| a.1 == v).map(|a| a.0).collect())
        .collect();
    let topo = topological_order(n, &succ);

    let injectives: Vec<Vec<i64>> = (0..n).map(|v| q.injective_dim(v)).collect();
    let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<i64>>();

    // classes[k][v] for the whole relevant part of ZQ'.
    let mut classes: Vec<Vec<Vec<i64>>> = vec![(0..n).map(|v| neg(&injectives[v])).collect()];
    let mut alive = vec![true; n];
    let mut last_slice = vec![0usize; n];
    let mut k = 0;
    while alive.iter().any(|&a| a) {
        let mut next = vec![vec![0i64; n]; n];
        for &v in &topo {
            let mut c: Vec<i64> = neg(&classes[k][v]);
            for &y in &succ[v] {
                add_into(&mut c, &classes[k][y]);
            }
            for &x in &pred_in_slice(&succ, v) {
                add_into(&mut c, &next[x]);
            }
            next[v] = c;
        }
        for v in 0..n {
            if alive[v] {
                let c = &next[v];
                if c.iter().all(|&x| x >= 0) && c.iter().any(|&x| x > 0) {
                    last_slice[v] = k + 1;
                } else {
                    alive[v] = false;
                }
            }
        }
        classes.push(next);
        k += 1;
        if k > 4 * n + 8 {
            return Err(ArError::Knitting("orbit did not terminate".into()));
        }
    }

    let mut id: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    let linear_a = q.is_linear_type_a();
    for (slice, row) in classes.iter().enumerate() {
        for &v in &topo {
            if slice > last_slice[v] {
                continue;
            }
            let name = if linear_a {
                q_name(slice + 1, v + 1 + slice + 2)
            } else {
                format!("q({slice},{})", v + 1)
            };
            id.insert((slice, v), vertices.len());
            vertices.push(ArVertex {
                slice,
                vertex: v,
                dim: row[v].clone(),
                kind: if slice == 0 {
                    VertexKind::ShiftedInjective
                } else {
                    VertexKind::Module
                },
                name,
            });
        }
    }

    let lookup = |slice: usize, v: usize| -> Result<usize, ArError> {
        id.get(&(slice, v))
            .copied()
            .ok_or_else(|| ArError::Knitting(format!("({slice},{})", v + 1)))
    };
    let mut arrows = Vec::new();
    let mut meshes = Vec::new();
    let mut coeff_names = Vec::new();
    for (vid, vert) in vertices.iter().enumerate() {
        let (s, v) = (vert.slice, vert.vertex);
        for &y in &succ[v] {
            if let Some(&t) = id.get(&(s, y)) {
                arrows.push((vid, t));
            }
        }
        for &x in &pred_in_slice(&succ, v) {
            if let Some(&t) = id.get(&(s + 1, x)) {
                arrows.push((vid, t));
            }
        }
        if s == 0 {
            continue;
        }
        let start = lookup(s - 1, v)?;
        let mut middles = Vec::new();
        for &y in &succ[v] {
            middles.push(lookup(s - 1, y)?);
        }
        for &x in &pred_in_slice(&succ, v) {
            middles.push(lookup(s, x)?);
        }
        middles.sort_unstable();
        let coeff_id = meshes.len();
        coeff_names.push(if linear_a {
            vert.name.replacen('q', "c", 1)
        } else {
            format!("c({s},{})", v + 1)
        });
        meshes.push(MeshRelation {
            start,
            middles,
            end: vid,
            coeff_id,
        });
    }
    arrows.sort_unstable();

    let mut projection = Vec::with_capacity(n);
    for inj in &injectives {
        let found = (0..n)
            .map(|v| (last_slice[v], v))
            .filter(|&(s, v)| s > 0 && classes[s][v] == *inj)
            .map(|(s, v)| id[&(s, v)])
            .next()
            .ok_or_else(|| ArError::Knitting("injective not reached".into()))?;
        projection.push(found);
    }

    Ok(ArQuiver {
        quiver: q.clone(),
        vertices,
        arrows,
        meshes,
        projection,
        coeff_names,
    })
}

/// Predecessors of `v` in the slice quiver.
fn pred_in_slice(succ: &[Vec<usize>], v: usize) -> Vec<usize> {
    (0..succ.len()).filter(|&x| succ[x].contains(&v)).collect()
}

fn add_into(acc: &mut [i64], v: &[i64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

fn topological_order(n: usize, succ: &[Vec<usize>]) -> Vec<usize> {
    let mut indeg = vec![0; n];
    for s in succ {
        for &t in s {
            indeg[t] += 1;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &t in &succ[v] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.insert(t);
            }
        }
    }
    order
}

impl ArQuiver {
    pub fn quiver(&self) -> &DynkinQuiver {
        &self.quiver
    }

    pub fn vertices(&self) -> &[ArVertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn meshes(&self) -> &[MeshRelation] {
        &self.meshes
    }

    pub fn projection_vertices(&self) -> &[usize] {
        &self.projection
    }

    pub fn coeff_names(&self) -> &[String] {
        &self.coeff_names
    }

    pub fn rank(&self) -> usize {
        self.quiver.rank
    }

    /// Mesh additivity of classes at every mesh.
    pub fn mesh_additivity_holds(&self) -> bool {
        self.meshes.iter().all(|m| {
            let n = self.rank();
            let mut lhs = vec![0i64; n];
            add_into(&mut lhs, &self.vertices[m.start].dim);
            add_into(&mut lhs, &self.vertices[m.end].dim);
            let mut rhs = vec![0i64; n];
            for &r in &m.middles {
                add_into(&mut rhs, &self.vertices[r].dim);
            }
            lhs == rhs
        })
    }

    /// One line per mesh, e.g. `q13 + q24 = q14 + c24`.
    pub fn render_mesh(&self, m: &MeshRelation) -> String {
        let name = |i: usize| self.vertices[i].name.clone();
        let mut rhs: Vec<String> = m.middles.iter().map(|&i| name(i)).collect();
        rhs.push(self.coeff_names[m.coeff_id].clone());
        format!("{} + {} = {}", name(m.start), name(m.end), rhs.join(" + "))
    }

    /// `q13 = c24 + c25 - q25`.
    pub fn render_functional(&self, vertex: usize, f: &AffineFunctional) -> String {
        let mut terms: Vec<(Rat, String)> = Vec::new();
        for (i, c) in f.constant_terms.iter().enumerate() {
            if !c.is_zero() {
                terms.push((c.clone(), self.coeff_names[i].clone()));
            }
        }
        for (j, c) in f.linear_terms.iter().enumerate() {
            if !c.is_zero() {
                terms.push((c.clone(), self.vertices[self.projection[j]].name.clone()));
            }
        }
        let mut out = format!("{} =", self.vertices[vertex].name);
        if terms.is_empty() {
            out.push_str(" 0");
        }
        for (k, (c, sym)) in terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            let coef = if mag.is_one() {
                String::new()
            } else {
                format!("{mag} ")
            };
            if k == 0 {
                let lead = if c.is_negative() { "-" } else { "" };
                out.push_str(&format!(" {lead}{coef}{sym}"));
            } else {
                out.push_str(&format!(" {sign} {coef}{sym}"));
            }
        }
        out
    }

    pub fn to_json(&self) -> ArQuiverJson {
        ArQuiverJson {
            kind: self.quiver.kind.to_string(),
            rank: self.quiver.rank,
            vertices: self
                .vertices
                .iter()
                .map(|v| ArVertexJson {
                    slice: v.slice,
                    vertex: v.vertex + 1,
                    dim: v.dim.clone(),
                    label: v.kind,
                    name: v.name.clone(),
                })
                .collect(),
            arrows: self.arrows.iter().map(|&(a, b)| [a, b]).collect(),
            meshes: self
                .meshes
                .iter()
                .map(|m| MeshJson {
                    start: m.start,
                    middles: m.middles.clone(),
                    end: m.end,
                    coeff: self.coeff_names[m.coeff_id].clone(),
                })
                .collect(),
            projection: self.projection.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArVertexJson {
    pub slice: usize,
    pub vertex: usize,
    pub dim: Vec<i64>,
    pub label: VertexKind,
    pub name: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MeshJson {
    pub start: usize,
    pub middles: Vec<usize>,
    pub end: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArQuiverJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    pub vertices: Vec<ArVertexJson>,
    pub arrows: Vec<[usize; 2]>,
    pub meshes: Vec<MeshJson>,
    pub projection: Vec<usize>,
}

/// The mesh relations in slice order.
pub fn mesh_equations(ar: &ArQuiver) -> Vec<MeshRelation> {
    ar.meshes.clone()
}

/// A coordinate `q_M` written as `constant · c + linear · x`, where `c` are
/// the mesh parameters and `x` the coordinates at the injectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub constant_terms: Vec<Rat>,
    pub linear_terms: Vec<Rat>,
}

impl AffineFunctional {
    pub fn eval(&self, c: &[Rat], x: &[Rat]) -> Rat {
        dot(&self.constant_terms, c) + dot(&self.linear_terms, x)
    }
}

/// Express every coordinate over the injective coordinates and the mesh
/// parameters, by back-substituting meshes in reverse slice order.
pub fn abhy_functionals(ar: &ArQuiver) -> Result<Vec<AffineFunctional>, ArError> {
    let nm = ar.meshes.len();
    let n = ar.rank();
    let mut out: Vec<Option<AffineFunctional>> = vec![None; ar.vertices.len()];
    for (j, &p) in ar.projection.iter().enumerate() {
        let mut lin = vec![Rat::zero(); n];
        lin[j] = Rat::one();
        out[p] = Some(AffineFunctional {
            constant_terms: vec![Rat::zero(); nm],
            linear_terms: lin,
        });
    }
    let by_start: BTreeMap<usize, &MeshRelation> = ar.meshes.iter().map(|m| (m.start, m)).collect();
    for vid in (0..ar.vertices.len()).rev() {
        if out[vid].is_some() {
            continue;
        }
        let singular = || ArError::SingularSystem(ar.vertices[vid].name.clone());
        let mesh = by_start.get(&vid).ok_or_else(singular)?;
        // q_start = Σ q_middle + c − q_end
        let end = out[mesh.end].clone().ok_or_else(singular)?;
        let mut cons: Vec<Rat> = end.constant_terms.iter().map(|x| -x.clone()).collect();
        let mut lin: Vec<Rat> = end.linear_terms.iter().map(|x| -x.clone()).collect();
        cons[mesh.coeff_id] += Rat::one();
        for &m in &mesh.middles {
            let f = out[m].as_ref().ok_or_else(singular)?;
            for (a, b) in cons.iter_mut().zip(&f.constant_terms) {
                *a += b;
            }
            for (a, b) in lin.iter_mut().zip(&f.linear_terms) {
                *a += b;
            }
        }
        out[vid] = Some(AffineFunctional {
            constant_terms: cons,
            linear_terms: lin,
        });
    }
    out.into_iter()
        .enumerate()
        .map(|(i, f)| f.ok_or_else(|| ArError::SingularSystem(ar.vertices[i].name.clone())))
        .collect()
}

/// Closed ABHY polytope: `{x : q_M(x) ≥ 0 for every vertex M}` in the
/// injective coordinates, one row per AR vertex in vertex order.
pub fn abhy_polytope(ar: &ArQuiver, c: &[Rat]) -> Result<HPolytope<Rat>, ArError> {
    if c.len() != ar.meshes.len() {
        return Err(ArError::ParameterCount {
            expected: ar.meshes.len(),
            got: c.len(),
        });
    }
    if let Some(index) = c.iter().position(|x| !x.is_positive()) {
        return Err(ArError::NonPositiveParameter { index });
    }
    let funcs = abhy_functionals(ar)?;
    let rows: Vec<Vec<Rat>> = funcs
        .iter()
        .map(|f| f.linear_terms.iter().map(|x| -x.clone()).collect())
        .collect();
    let bounds = funcs.iter().map(|f| dot(&f.constant_terms, c)).collect();
    Ok(HPolytope::new(Matrix::from_rows(&rows, ar.rank()), bounds).expect("one bound per row"))
}

/// The normal vector of each coordinate's facet, `−linear_terms`, as an
/// integer vector: the g-vector of the object in injective coordinates.
pub fn abhy_rays(ar: &ArQuiver) -> Result<Vec<Vec<i64>>, ArError> {
    Ok(abhy_functionals(ar)?
        .iter()
        .map(|f| {
            f.linear_terms
                .iter()
                .map(|x| {
                    assert!(x.is_integer(), "ABHY functionals have integer slopes");
                    num_traits::ToPrimitive::to_i64(&-x.to_integer()).expect("small integer")
                })
                .collect()
        })
        .collect())
}

pub fn ones(len: usize) -> Vec<Rat> {
    vec![Rat::from_int(1); len]
}
