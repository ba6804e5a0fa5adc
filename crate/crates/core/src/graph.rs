//! Interconnection graphs.
//!
//! Agents are indexed `0..n` internally; agent `0` plays the role of the
//! radical in the star and ring constructions. Self-membership of an agent's
//! neighbourhood is implicit: [`Graph::neighbors`] never contains the agent
//! itself, while [`Graph::closed_degree`] counts it.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Undirected simple graph, immutable after construction and always connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list over `0..n`, deduplicating edges.
    ///
    /// Self-loops and out-of-range endpoints are rejected, as is a
    /// disconnected result.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidSize("graph needs at least one agent".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidSize(format!(
                    "edge ({i}, {j}) out of range for {n} agents"
                )));
            }
            if i == j {
                return Err(Error::Parameter(format!("self-loop on agent {i}")));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let graph = Graph { adjacency };
        let components = graph.component_count();
        if components > 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(graph)
    }

    /// Every pair of distinct agents is adjacent.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("complete graph needs n >= 2, got {n}")));
        }
        let adjacency = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).collect())
            .collect();
        Ok(Graph { adjacency })
    }

    /// Agent `0` is the centre, every other agent a leaf.
    pub fn star(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("star graph needs n >= 2, got {n}")));
        }
        Self::from_edges(n, (1..n).map(|i| (0, i)))
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize(format!("ring graph needs n >= 3, got {n}")));
        }
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Sorted neighbours of `i`, excluding `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Neighbourhood size counting the agent itself.
    pub fn closed_degree(&self, i: usize) -> usize {
        self.adjacency[i].len() + 1
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Index of the agent with the most neighbours (lowest index on ties).
    pub fn max_degree_agent(&self) -> usize {
        let mut best = 0;
        for i in 1..self.len() {
            if self.adjacency[i].len() > self.adjacency[best].len() {
                best = i;
            }
        }
        best
    }

    /// Serialises as a 1-based edge list, one `i j` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{} {}", i + 1, j + 1);
        }
        out
    }

    fn component_count(&self) -> usize {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }
}

/// A graph read from an edge list, together with its external node ids.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `ids[k]` is the external id of internal agent `k`.
    pub ids: Vec<u64>,
    /// Number of `i i` lines that were skipped.
    pub self_loops: usize,
}

impl LoadedGraph {
    /// Internal index of an external node id.
    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    /// Adds a node `id` adjacent to every existing node, as needed for ego
    /// dumps that leave the ego implicit. If `id` is already present it is
    /// connected to all other nodes instead.
    pub fn attach_hub(self, id: u64) -> Result<Self> {
        let mut ids = self.ids;
        let hub = match ids.iter().position(|&x| x == id) {
            Some(k) => k,
            None => {
                ids.push(id);
                ids.len() - 1
            }
        };
        let n = ids.len();
        let edges = self
            .graph
            .edges()
            .chain((0..n).filter(|&k| k != hub).map(|k| (hub, k)))
            .collect::<Vec<_>>();
        Ok(LoadedGraph {
            graph: Graph::from_edges(n, edges)?,
            ids,
            self_loops: self.self_loops,
        })
    }
}

/// Reads a whitespace-separated integer edge list.
///
/// Blank lines and lines starting with `#` are skipped. Node ids are
/// remapped to `0..n` in order of first appearance.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<LoadedGraph> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut ids = Vec::new();
    let mut edges = Vec::new();
    let mut self_loops = 0;

    for (lineno, line) in source.lines().enumerate() {
        let line_number = lineno + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_number,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_number,
                message: format!("expected two node ids, found {} fields", fields.len()),
            });
        }
        let mut ends = [0u64; 2];
        for (slot, field) in ends.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| Error::Parse {
                line: line_number,
                message: format!("`{field}` is not a non-negative integer"),
            })?;
        }
        if ends[0] == ends[1] {
            self_loops += 1;
            continue;
        }
        let [u, v] = ends.map(|id| {
            *index.entry(id).or_insert_with(|| {
                ids.push(id);
                ids.len() - 1
            })
        });
        edges.push((u, v));
    }

    if ids.is_empty() {
        return Err(Error::InvalidSize("edge list contains no edges".into()));
    }
    let graph = Graph::from_edges(ids.len(), edges)?;
    Ok(LoadedGraph {
        graph,
        ids,
        self_loops,
    })
}

/// Reads an edge list from a file path.
pub fn load_edge_list_file(path: &std::path::Path) -> Result<LoadedGraph> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    load_edge_list(std::io::BufReader::new(file))
}
