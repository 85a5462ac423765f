use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use super::triangulation::{Diagonal, FlipGraph, Triangulation};
use super::{seed_from_triangulation, ClusterError, Seed};
use crate::polyhedra::Fan;

/// Default cap on the number of clusters visited.
pub const DEFAULT_BUDGET: usize = 100_000;

/// A wall crossing: `exchanged.0` is the ray of `source` replaced by the ray
/// `exchanged.1` of `target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExchangeEdge {
    pub source: usize,
    pub target: usize,
    pub exchanged: (usize, usize),
}

/// Clusters (as maximal cones, in fan cone order) and mutations between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeGraph {
    nodes: Vec<Vec<usize>>,
    edges: Vec<ExchangeEdge>,
    initial: usize,
}

impl ExchangeGraph {
    /// The dual graph of a fan read from disk: one node per maximal cone, one
    /// edge per wall between two cones. The initial node is the positive
    /// orthant when it is a cone, else cone 0.
    pub fn from_fan(fan: &Fan) -> Self {
        let cones = fan.cones();
        let mut edges: Vec<ExchangeEdge> = fan
            .ridge_map()
            .into_values()
            .filter(|cs| cs.len() == 2)
            .map(|cs| {
                let (a, b) = (cs[0].min(cs[1]), cs[0].max(cs[1]));
                let only = |x: &[usize], y: &[usize]| {
                    x.iter()
                        .copied()
                        .find(|r| !y.contains(r))
                        .expect("distinct cones")
                };
                ExchangeEdge {
                    source: a,
                    target: b,
                    exchanged: (only(&cones[a], &cones[b]), only(&cones[b], &cones[a])),
                }
            })
            .collect();
        edges.sort();
        let n = fan.dim();
        let orthant: Vec<usize> = (0..n)
            .filter_map(|i| fan.ray_index(&(0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Self {
            nodes: cones.to_vec(),
            edges,
            initial: cones.iter().position(|c| *c == orthant).unwrap_or(0),
        }
    }

    pub fn nodes(&self) -> &[Vec<usize>] {
        &self.nodes
    }

    pub fn edges(&self) -> &[ExchangeEdge] {
        &self.edges
    }

    /// Node of the initial cluster.
    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for e in &self.edges {
            deg[e.source] += 1;
            deg[e.target] += 1;
        }
        deg
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.degrees().iter().all(|&d| d == degree)
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.source].push(e.target);
            adj[e.target].push(e.source);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// A discovered state with the BFS edges leaving it: `(direction, target)`.
struct Explored<S> {
    states: Vec<S>,
    steps: Vec<Vec<(usize, usize)>>,
}

/// Level-synchronous BFS. Each frontier is expanded in parallel; new states
/// are merged in frontier order, so the result does not depend on the
/// thread count. `merge_check` compares a rediscovered state with the stored
/// one.
fn explore<S, K, Step, Key, Check>(
    start: S,
    rank: usize,
    budget: usize,
    step: Step,
    key: Key,
    merge_check: Check,
) -> Result<Explored<S>, ClusterError>
where
    S: Send + Sync,
    K: Ord + std::hash::Hash + Clone + Send,
    Step: Fn(&S, usize) -> Result<S, ClusterError> + Sync,
    Key: Fn(&S) -> K + Sync,
    Check: Fn(&S, &S) -> Result<(), ClusterError>,
{
    let mut index: HashMap<K, usize> = HashMap::new();
    index.insert(key(&start), 0);
    let mut states = vec![start];
    let mut steps: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let expanded: Vec<Vec<(usize, S, K)>> = frontier
            .par_iter()
            .map(|&u| {
                (0..rank)
                    .map(|k| {
                        let s = step(&states[u], k)?;
                        let kk = key(&s);
                        Ok((k, s, kk))
                    })
                    .collect::<Result<Vec<_>, ClusterError>>()
            })
            .collect::<Result<Vec<_>, ClusterError>>()?;
        let mut next = Vec::new();
        for (&u, children) in frontier.iter().zip(expanded) {
            for (k, s, kk) in children {
                let v = match index.get(&kk) {
                    Some(&v) => {
                        merge_check(&states[v], &s)?;
                        v
                    }
                    None => {
                        let v = states.len();
                        if v >= budget {
                            return Err(ClusterError::BudgetExceeded { budget });
                        }
                        index.insert(kk, v);
                        states.push(s);
                        steps.push(Vec::new());
                        next.push(v);
                        v
                    }
                };
                steps[u].push((k, v));
            }
        }
        frontier = next;
    }
    Ok(Explored { states, steps })
}

fn checked_mutation(s: &Seed, k: usize) -> Result<Seed, ClusterError> {
    let t = s.mutate(k + 1)?;
    let det = t.g_determinant();
    if det.abs() != 1 {
        return Err(ClusterError::NotUnimodular(det));
    }
    Ok(t)
}

/// Assemble the canonical fan and graph from explored seeds. Rays are
/// sorted in descending lexicographic order, cones lexicographically; node
/// `i` of the graph is cone `i`.
fn assemble(seeds: &[&Seed], steps: &[Vec<(usize, usize)>]) -> (Fan, ExchangeGraph, Vec<usize>) {
    let n = seeds[0].rank();
    let mut rays: Vec<Vec<i64>> = seeds
        .iter()
        .flat_map(|s| s.g_vectors())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    rays.reverse();
    let ray_idx: BTreeMap<Vec<i64>, usize> = rays
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    let cone_of = |s: &Seed| -> Vec<usize> {
        let mut c: Vec<usize> = s.g_vectors().iter().map(|g| ray_idx[g]).collect();
        c.sort_unstable();
        c
    };
    let cones: Vec<Vec<usize>> = seeds.iter().map(|s| cone_of(s)).collect();
    let mut order: Vec<usize> = (0..seeds.len()).collect();
    order.sort_by(|&a, &b| cones[a].cmp(&cones[b]));
    let mut node_of = vec![0; seeds.len()];
    for (new, &old) in order.iter().enumerate() {
        node_of[old] = new;
    }

    let mut edges = BTreeSet::new();
    for (u, out) in steps.iter().enumerate() {
        for &(_, v) in out {
            // Stored seeds may list the same cluster in different orders, so
            // read the exchanged pair off the cones.
            let only = |a: &[usize], b: &[usize]| -> usize {
                let d: Vec<usize> = a.iter().copied().filter(|x| !b.contains(x)).collect();
                assert_eq!(d.len(), 1, "adjacent clusters differ in one variable");
                d[0]
            };
            let r = only(&cones[u], &cones[v]);
            let r2 = only(&cones[v], &cones[u]);
            let (a, b) = (node_of[u], node_of[v]);
            edges.insert(if a < b {
                ExchangeEdge {
                    source: a,
                    target: b,
                    exchanged: (r, r2),
                }
            } else {
                ExchangeEdge {
                    source: b,
                    target: a,
                    exchanged: (r2, r),
                }
            });
        }
    }
    let fan = Fan::new(n, rays, cones, vec![]).expect("g-vectors are distinct primitive vectors");
    let nodes: Vec<Vec<usize>> = order.iter().map(|&i| cone_of(seeds[i])).collect();
    debug_assert_eq!(nodes, fan.cones());
    let graph = ExchangeGraph {
        nodes,
        edges: edges.into_iter().collect(),
        initial: node_of[0],
    };
    (fan, graph, node_of)
}

/// The g-vector fan of `s0` with the default budget.
pub fn enumerate_fan(s0: &Seed) -> Result<(Fan, ExchangeGraph), ClusterError> {
    enumerate_fan_with_budget(s0, DEFAULT_BUDGET)
}

/// BFS over seeds up to cluster equality. The g-matrix is checked to be
/// unimodular at every seed.
pub fn enumerate_fan_with_budget(
    s0: &Seed,
    budget: usize,
) -> Result<(Fan, ExchangeGraph), ClusterError> {
    let explored = explore(
        s0.clone(),
        s0.rank(),
        budget,
        checked_mutation,
        Seed::cluster_key,
        |_, _| Ok(()),
    )?;
    let refs: Vec<&Seed> = explored.states.iter().collect();
    let (fan, graph, _) = assemble(&refs, &explored.steps);
    Ok((fan, graph))
}

/// A type A g-vector fan enumerated together with the triangulations, so
/// that every ray is attached to a diagonal.
#[derive(Clone, Debug)]
pub struct TriangulatedFan {
    pub initial: Triangulation,
    /// Rays labelled by their diagonals.
    pub fan: Fan,
    pub graph: ExchangeGraph,
    /// Triangulation of each node, with its diagonals in the order of the
    /// node's seed.
    pub triangulations: Vec<Triangulation>,
    pub diagonal_rays: BTreeMap<Diagonal, usize>,
}

/// Enumerate the fan of `seed_from_triangulation(t)` while flipping `t` in
/// step with every mutation. The diagonal ↔ g-vector correspondence is
/// checked to be the same in every cluster it is observed in.
pub fn enumerate_with_triangulation(t: &Triangulation) -> Result<TriangulatedFan, ClusterError> {
    let s0 = seed_from_triangulation(t);
    let rank = s0.rank();
    let explored = explore(
        (s0, t.clone()),
        rank,
        DEFAULT_BUDGET,
        |(s, tri), k| Ok((checked_mutation(s, k)?, tri.flip(k))),
        |(s, _)| s.cluster_key(),
        |(s1, t1), (s2, t2)| {
            let pair = |s: &Seed, t: &Triangulation| -> BTreeMap<Vec<i64>, Diagonal> {
                s.positions()
                    .into_iter()
                    .map(|(g, j)| (g, t.diagonals()[j]))
                    .collect()
            };
            if pair(s1, t1) == pair(s2, t2) {
                Ok(())
            } else {
                Err(ClusterError::Inconsistent(
                    "a cluster was reached with two different triangulations".into(),
                ))
            }
        },
    )?;
    let seeds: Vec<&Seed> = explored.states.iter().map(|(s, _)| s).collect();
    let (fan, graph, node_of) = assemble(&seeds, &explored.steps);

    let mut diagonal_rays: BTreeMap<Diagonal, usize> = BTreeMap::new();
    let mut ray_diag: BTreeMap<usize, Diagonal> = BTreeMap::new();
    for (s, tri) in &explored.states {
        for (j, &d) in tri.diagonals().iter().enumerate() {
            let r = fan.ray_index(&s.g_vector(j)).expect("g-vector is a ray");
            if *diagonal_rays.entry(d).or_insert(r) != r || *ray_diag.entry(r).or_insert(d) != d {
                return Err(ClusterError::Inconsistent(format!(
                    "diagonal {d} has two g-vectors"
                )));
            }
        }
    }
    let labels = (0..fan.n_rays())
        .map(|r| ray_diag[&r].to_string())
        .collect();
    let fan = fan.with_labels(labels);
    let mut triangulations = vec![None; explored.states.len()];
    for (old, (_, tri)) in explored.states.iter().enumerate() {
        triangulations[node_of[old]] = Some(tri.clone());
    }
    Ok(TriangulatedFan {
        initial: t.clone(),
        fan,
        graph,
        triangulations: triangulations
            .into_iter()
            .map(|t| t.expect("every node"))
            .collect(),
        diagonal_rays,
    })
}

impl TriangulatedFan {
    /// Whether node ↦ triangulation is a graph isomorphism onto `flips`
    /// sending the initial cluster to the initial triangulation.
    pub fn matches_flip_graph(&self, flips: &FlipGraph) -> bool {
        if flips.nodes.len() != self.graph.nodes().len()
            || flips.edges.len() != self.graph.edges().len()
        {
            return false;
        }
        let image: Option<Vec<usize>> = self
            .triangulations
            .iter()
            .map(|t| flips.index_of(t.diagonals()))
            .collect();
        let Some(image) = image else {
            return false;
        };
        if image.iter().collect::<BTreeSet<_>>().len() != image.len() {
            return false;
        }
        if Some(image[self.graph.initial()]) != flips.index_of(self.initial.diagonals()) {
            return false;
        }
        let flip_edges: BTreeSet<(usize, usize)> = flips.edges.iter().copied().collect();
        self.graph.edges().iter().all(|e| {
            let (a, b) = (image[e.source], image[e.target]);
            flip_edges.contains(&(a.min(b), a.max(b)))
        })
    }
}
