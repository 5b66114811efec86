//! Labeled hypergraph model, text format, and structural statistics.
//!
//! Vertices carry an optional label, a subset of {1..m2} stored as a bitmask.
//! Edges are sorted vertex-id lists; duplicate edges are representable (two
//! edges may have identical vertex sets) because symmetry certification must
//! be able to reject them rather than refuse them.

pub mod engine;

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A subset of {1..m2} packed into a bitmask: bit i-1 represents element i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSet(pub u32);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    /// Builds a label from explicit elements, validating each against m2.
    pub fn from_elements(elements: &[u32], m2: u32) -> Result<Self> {
        let mut bits = 0u32;
        for &e in elements {
            if e < 1 || e > m2 {
                return Err(Error::LabelOutOfRange { element: e, m2 });
            }
            bits |= 1 << (e - 1);
        }
        Ok(LabelSet(bits))
    }

    /// The full label {1..m2}.
    pub fn full(m2: u32) -> Self {
        if m2 == 0 {
            LabelSet(0)
        } else {
            LabelSet(u32::MAX >> (32 - m2))
        }
    }

    /// Number of elements.
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, element: u32) -> bool {
        element >= 1 && element <= 32 && self.0 & (1 << (element - 1)) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// True when every element lies in {1..m2}.
    pub fn fits(self, m2: u32) -> bool {
        self.0 & !Self::full(m2).0 == 0
    }

    /// Elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        (1..=32).filter(move |&e| self.contains(e))
    }

    /// Adds 1 modulo m2 to every element (the label rotation xi).
    pub fn rotate(self, m2: u32) -> Self {
        if m2 == 0 {
            return self;
        }
        let mut bits = 0u32;
        for e in self.elements() {
            let image = e % m2 + 1;
            bits |= 1 << (image - 1);
        }
        LabelSet(bits)
    }

    /// Applies a permutation of {1..m2}; perm[i-1] is the image of i.
    pub fn apply_perm(self, perm: &[u32]) -> Self {
        let mut bits = 0u32;
        for e in self.elements() {
            let image = perm[(e - 1) as usize];
            bits |= 1 << (image - 1);
        }
        LabelSet(bits)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.elements() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

/// A vertex: stable id plus an optional label over {1..m2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertex {
    pub id: u32,
    pub label: Option<LabelSet>,
}

/// An edge: stable id plus a sorted list of distinct vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: u32,
    pub vertices: Vec<u32>,
}

/// A vertex-labeled hypergraph over label universe {1..m2}.
///
/// m2 = 0 means the unlabeled regime; labels are then always `None`.
#[derive(Debug, Clone)]
pub struct LabeledHypergraph {
    m2: u32,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: BTreeMap<u32, usize>,
    edge_index: BTreeMap<u32, usize>,
    incidence: Vec<Vec<usize>>,
}

/// Degree statistics: per-vertex degrees plus per-edge counts of degree-1
/// and degree->=2 members.
#[derive(Debug, Clone)]
pub struct DegreeProfile {
    pub degrees: BTreeMap<u32, u32>,
    pub edge_deg1: BTreeMap<u32, u32>,
    pub edge_deg2plus: BTreeMap<u32, u32>,
    pub deg1_vertex_count: u32,
    pub deg2plus_vertex_count: u32,
}

/// Tree shape statistics: excess degree and leaf-edge data.
#[derive(Debug, Clone)]
pub struct MuLeaves {
    /// mu = sum over vertices of max(deg - 2, 0).
    pub mu: u64,
    /// Number of leaf edges (edges with n1 - 1 degree-1 vertices).
    pub leaf_count: u64,
    pub leaf_edges: BTreeSet<u32>,
}

impl LabeledHypergraph {
    pub fn new(m2: u32) -> Self {
        LabeledHypergraph {
            m2,
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_index: BTreeMap::new(),
            edge_index: BTreeMap::new(),
            incidence: Vec::new(),
        }
    }

    pub fn m2(&self) -> u32 {
        self.m2
    }

    pub fn add_vertex(&mut self, id: u32, label: Option<LabelSet>) -> Result<()> {
        if self.vertex_index.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        if let Some(l) = label {
            if !l.fits(self.m2) {
                let element = l.elements().last().unwrap_or(0);
                return Err(Error::LabelOutOfRange { element, m2: self.m2 });
            }
        }
        self.vertex_index.insert(id, self.vertices.len());
        self.vertices.push(Vertex { id, label });
        self.incidence.push(Vec::new());
        Ok(())
    }

    pub fn add_edge(&mut self, id: u32, vertex_ids: &[u32]) -> Result<()> {
        if self.edge_index.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        let mut vs: Vec<u32> = vertex_ids.to_vec();
        vs.sort_unstable();
        vs.dedup();
        for &v in &vs {
            if !self.vertex_index.contains_key(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        let eidx = self.edges.len();
        for &v in &vs {
            let vidx = self.vertex_index[&v];
            self.incidence[vidx].push(eidx);
        }
        self.edge_index.insert(id, eidx);
        self.edges.push(Edge { id, vertices: vs });
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_position(&self, id: u32) -> Option<usize> {
        self.vertex_index.get(&id).copied()
    }

    pub fn edge_position(&self, id: u32) -> Option<usize> {
        self.edge_index.get(&id).copied()
    }

    pub fn degree(&self, vertex_idx: usize) -> usize {
        self.incidence[vertex_idx].len()
    }

    pub fn incident_edges(&self, vertex_idx: usize) -> &[usize] {
        &self.incidence[vertex_idx]
    }

    /// Largest vertex id in use, if any.
    pub fn max_vertex_id(&self) -> Option<u32> {
        self.vertex_index.keys().next_back().copied()
    }

    pub fn max_edge_id(&self) -> Option<u32> {
        self.edge_index.keys().next_back().copied()
    }

    /// Common edge size, `None` when edgeless, error when mixed.
    pub fn uniform_size(&self) -> Result<Option<usize>> {
        let mut size = None;
        for e in &self.edges {
            match size {
                None => size = Some(e.vertices.len()),
                Some(s) if s != e.vertices.len() => {
                    return Err(Error::NonUniform(s, e.vertices.len()));
                }
                _ => {}
            }
        }
        Ok(size)
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut degrees = BTreeMap::new();
        let mut deg1_vertex_count = 0;
        let mut deg2plus_vertex_count = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            let d = self.degree(i) as u32;
            degrees.insert(v.id, d);
            if d == 1 {
                deg1_vertex_count += 1;
            } else if d >= 2 {
                deg2plus_vertex_count += 1;
            }
        }
        let mut edge_deg1 = BTreeMap::new();
        let mut edge_deg2plus = BTreeMap::new();
        for e in &self.edges {
            let mut d1 = 0;
            let mut d2 = 0;
            for &v in &e.vertices {
                if self.degree(self.vertex_index[&v]) == 1 {
                    d1 += 1;
                } else {
                    d2 += 1;
                }
            }
            edge_deg1.insert(e.id, d1);
            edge_deg2plus.insert(e.id, d2);
        }
        DegreeProfile {
            degrees,
            edge_deg1,
            edge_deg2plus,
            deg1_vertex_count,
            deg2plus_vertex_count,
        }
    }

    /// Connected components as sorted vertex-position sets; isolated vertices
    /// form singleton components.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            seen[start] = true;
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &e in &self.incidence[v] {
                    for &wid in &self.edges[e].vertices {
                        let w = self.vertex_index[&wid];
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Extracts the sub-hypergraph induced by a vertex-position set, keeping
    /// ids and labels. Edges must lie fully inside the set to be kept; for
    /// connected components they always do.
    pub fn induced_subgraph(&self, vertex_positions: &[usize]) -> LabeledHypergraph {
        let keep: BTreeSet<usize> = vertex_positions.iter().copied().collect();
        let mut sub = LabeledHypergraph::new(self.m2);
        for &p in vertex_positions {
            let v = self.vertices[p];
            sub.add_vertex(v.id, v.label).expect("distinct source ids");
        }
        for e in &self.edges {
            if e.vertices.iter().all(|vid| keep.contains(&self.vertex_index[vid])) {
                sub.add_edge(e.id, &e.vertices).expect("vertices present");
            }
        }
        sub
    }

    /// Tree test: uniform (error if mixed), connected, and |V| = (n1-1)|E| + 1.
    /// An edgeless hypergraph is a tree exactly when it is a single vertex.
    pub fn is_tree(&self) -> Result<bool> {
        let size = self.uniform_size()?;
        match size {
            None => Ok(self.vertices.len() == 1),
            Some(n1) => {
                if self.connected_components().len() != 1 {
                    return Ok(false);
                }
                let expected = (n1 - 1) * self.edges.len() + 1;
                Ok(self.vertices.len() == expected)
            }
        }
    }

    /// Total excess degree: sum over vertices of max(deg - 2, 0).
    pub fn mu(&self) -> u64 {
        (0..self.vertices.len())
            .map(|i| self.degree(i).saturating_sub(2) as u64)
            .sum()
    }

    /// mu plus leaf-edge statistics; requires a tree.
    pub fn mu_and_leaves(&self) -> Result<MuLeaves> {
        if !self.is_tree()? {
            return Err(Error::NotATree);
        }
        let n1 = self.uniform_size()?.unwrap_or(0);
        let mut leaf_edges = BTreeSet::new();
        for e in &self.edges {
            let deg1 = e
                .vertices
                .iter()
                .filter(|vid| self.degree(self.vertex_index[vid]) == 1)
                .count();
            // A single-edge tree has no leaf edges: a leaf edge must have
            // exactly n1 - 1 degree-1 vertices, and there all n1 qualify.
            if n1 >= 1 && deg1 == n1 - 1 {
                leaf_edges.insert(e.id);
            }
        }
        Ok(MuLeaves {
            mu: self.mu(),
            leaf_count: leaf_edges.len() as u64,
            leaf_edges,
        })
    }

    /// Sum of label weights over all vertices; errors on an unlabeled vertex.
    pub fn total_weight(&self) -> Result<u64> {
        let mut w = 0u64;
        for v in &self.vertices {
            match v.label {
                Some(l) => w += l.weight() as u64,
                None => return Err(Error::UnlabeledVertex(v.id)),
            }
        }
        Ok(w)
    }

    /// First pair of edge positions with identical vertex sets, if any.
    pub fn duplicate_edge_pair(&self) -> Option<(usize, usize)> {
        let mut seen: BTreeMap<&[u32], usize> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if let Some(&j) = seen.get(e.vertices.as_slice()) {
                return Some((j, i));
            }
            seen.insert(&e.vertices, i);
        }
        None
    }

    /// Per-element counts: how many labeled vertices contain each of 1..m2.
    /// Errors on an unlabeled vertex.
    pub fn label_element_counts(&self) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; self.m2 as usize];
        for v in &self.vertices {
            let l = v.label.ok_or(Error::UnlabeledVertex(v.id))?;
            for e in l.elements() {
                counts[(e - 1) as usize] += 1;
            }
        }
        Ok(counts)
    }

    /// Applies the label rotation xi (add 1 mod m2 to every element).
    pub fn apply_xi(&self) -> LabeledHypergraph {
        let mut h = self.clone();
        for v in &mut h.vertices {
            v.label = v.label.map(|l| l.rotate(self.m2));
        }
        h
    }

    /// Applies a permutation of {1..m2} to every label; perm[i-1] = image of i.
    pub fn apply_label_permutation(&self, perm: &[u32]) -> Result<LabeledHypergraph> {
        if perm.len() != self.m2 as usize {
            return Err(Error::Domain(format!(
                "permutation length {} does not match m2 = {}",
                perm.len(),
                self.m2
            )));
        }
        let mut check: Vec<u32> = perm.to_vec();
        check.sort_unstable();
        if check != (1..=self.m2).collect::<Vec<_>>() {
            return Err(Error::Domain("not a permutation of 1..=m2".into()));
        }
        let mut h = self.clone();
        for v in &mut h.vertices {
            v.label = v.label.map(|l| l.apply_perm(perm));
        }
        Ok(h)
    }

    /// Serializes to the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("m2 {}\n", self.m2));
        for v in &self.vertices {
            match v.label {
                None => out.push_str(&format!("vertex {} -\n", v.id)),
                Some(l) if l.is_empty() => out.push_str(&format!("vertex {}\n", v.id)),
                Some(l) => out.push_str(&format!("vertex {} {}\n", v.id, l)),
            }
        }
        for e in &self.edges {
            out.push_str(&format!("edge {}", e.id));
            for v in &e.vertices {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the line-oriented text format. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<LabeledHypergraph> {
        let mut h: Option<LabeledHypergraph> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let head = tokens.next().unwrap();
            let parse_u32 = |t: &str| {
                t.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("line {}: bad integer {t:?}", lineno + 1)))
            };
            match head {
                "m2" => {
                    if h.is_some() {
                        return Err(Error::Parse(format!("line {}: repeated m2", lineno + 1)));
                    }
                    let m2 = parse_u32(
                        tokens
                            .next()
                            .ok_or_else(|| Error::Parse(format!("line {}: m2 needs a value", lineno + 1)))?,
                    )?;
                    if m2 > 32 {
                        return Err(Error::Parse(format!("line {}: m2 > 32 unsupported", lineno + 1)));
                    }
                    h = Some(LabeledHypergraph::new(m2));
                }
                "vertex" => {
                    let h = h
                        .as_mut()
                        .ok_or_else(|| Error::Parse(format!("line {}: vertex before m2", lineno + 1)))?;
                    let id = parse_u32(
                        tokens
                            .next()
                            .ok_or_else(|| Error::Parse(format!("line {}: vertex needs an id", lineno + 1)))?,
                    )?;
                    let rest: Vec<&str> = tokens.collect();
                    let label = if rest == ["-"] {
                        None
                    } else {
                        let mut elements = Vec::new();
                        for t in rest {
                            elements.push(parse_u32(t)?);
                        }
                        Some(LabelSet::from_elements(&elements, h.m2())?)
                    };
                    h.add_vertex(id, label)?;
                }
                "edge" => {
                    let h = h
                        .as_mut()
                        .ok_or_else(|| Error::Parse(format!("line {}: edge before m2", lineno + 1)))?;
                    let id = parse_u32(
                        tokens
                            .next()
                            .ok_or_else(|| Error::Parse(format!("line {}: edge needs an id", lineno + 1)))?,
                    )?;
                    let mut vs = Vec::new();
                    for t in tokens {
                        vs.push(parse_u32(t)?);
                    }
                    h.add_edge(id, &vs)?;
                }
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown directive {other:?}",
                        lineno + 1
                    )));
                }
            }
        }
        h.ok_or_else(|| Error::Parse("empty input".into()))
    }
}
