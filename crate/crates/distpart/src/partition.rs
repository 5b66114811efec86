//! Complete multipartite shapes, regular partitions, the incidence
//! hypergraph bijections, parameter arithmetic, and the exact weight and
//! value bounds.
//!
//! A regular partition of K_{n_1,...,n_m} meets every part in at most one
//! vertex per cell. Its incidence hypergraph has one vertex per cell and one
//! edge per part; automorphism groups on the two sides agree, which is the
//! engine-checked bridge between distinguishing partitions and asymmetric
//! hypergraphs.

use crate::error::{Error, Result};
use crate::hypercore::{engine, LabelSet, LabeledHypergraph};
use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Part sizes of a complete multipartite graph; every part is nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipartiteShape {
    part_sizes: Vec<u32>,
}

impl MultipartiteShape {
    pub fn new(part_sizes: Vec<u32>) -> Result<Self> {
        if part_sizes.is_empty() {
            return Err(Error::Domain("shape needs at least one part".into()));
        }
        if part_sizes.iter().any(|&s| s == 0) {
            return Err(Error::Domain("part sizes must be positive".into()));
        }
        Ok(MultipartiteShape { part_sizes })
    }

    /// m1 parts of size n1 followed by m2 parts of size n2.
    pub fn two_block(m1: u32, n1: u32, m2: u32, n2: u32) -> Result<Self> {
        if m1 == 0 || n1 == 0 {
            return Err(Error::Domain("need m1 >= 1 and n1 >= 1".into()));
        }
        if m2 > 0 && n2 == 0 {
            return Err(Error::Domain("n2 must be positive when m2 > 0".into()));
        }
        let mut parts = vec![n1; m1 as usize];
        parts.extend(std::iter::repeat(n2).take(m2 as usize));
        MultipartiteShape::new(parts)
    }

    pub fn part_sizes(&self) -> &[u32] {
        &self.part_sizes
    }

    pub fn part_count(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn total_vertices(&self) -> u64 {
        self.part_sizes.iter().map(|&s| s as u64).sum()
    }

    /// Order of the automorphism group of the graph itself:
    /// product of n_i! times, for each size class, (multiplicity)!.
    pub fn graph_group_order(&self) -> BigUint {
        let mut order = BigUint::one();
        let mut by_size: BTreeMap<u32, u32> = BTreeMap::new();
        for &s in &self.part_sizes {
            *by_size.entry(s).or_insert(0) += 1;
            order *= factorial(s as u64);
        }
        for (_, mult) in by_size {
            order *= factorial(mult as u64);
        }
        order
    }

    /// Flat index of a coordinate for permutation arithmetic.
    fn coord_index(&self, c: Coord) -> usize {
        let mut offset = 0usize;
        for p in 0..c.0 as usize {
            offset += self.part_sizes[p] as usize;
        }
        offset + c.1 as usize
    }

    fn index_coord(&self, mut idx: usize) -> Coord {
        for (p, &s) in self.part_sizes.iter().enumerate() {
            if idx < s as usize {
                return (p as u32, idx as u32);
            }
            idx -= s as usize;
        }
        unreachable!("index out of range");
    }

    /// Generators of the graph automorphism group as flat-index permutations:
    /// adjacent transpositions within each part plus swaps of adjacent
    /// equal-size parts.
    pub fn graph_group_generators(&self) -> Vec<Vec<usize>> {
        let n = self.total_vertices() as usize;
        let mut gens = Vec::new();
        for (p, &s) in self.part_sizes.iter().enumerate() {
            for e in 0..s.saturating_sub(1) {
                let mut perm: Vec<usize> = (0..n).collect();
                let a = self.coord_index((p as u32, e));
                let b = self.coord_index((p as u32, e + 1));
                perm.swap(a, b);
                gens.push(perm);
            }
        }
        let mut order: Vec<usize> = (0..self.part_sizes.len()).collect();
        order.sort_by_key(|&p| (self.part_sizes[p], p));
        for w in order.windows(2) {
            let (a, b) = (w[0], w[1]);
            if self.part_sizes[a] == self.part_sizes[b] {
                let mut perm: Vec<usize> = (0..n).collect();
                for e in 0..self.part_sizes[a] {
                    let x = self.coord_index((a as u32, e));
                    let y = self.coord_index((b as u32, e));
                    perm.swap(x, y);
                }
                gens.push(perm);
            }
        }
        gens
    }
}

/// A graph vertex as (part index, index within part), both 0-based.
pub type Coord = (u32, u32);

/// A regular partition: every cell meets every part at most once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularPartition {
    shape: MultipartiteShape,
    cells: Vec<Vec<Coord>>,
}

impl RegularPartition {
    pub fn new(shape: MultipartiteShape, mut cells: Vec<Vec<Coord>>) -> Result<Self> {
        let mut seen: BTreeSet<Coord> = BTreeSet::new();
        for cell in &mut cells {
            if cell.is_empty() {
                return Err(Error::NotRegular("empty cell".into()));
            }
            cell.sort_unstable();
            let mut parts = BTreeSet::new();
            for &(p, e) in cell.iter() {
                if p as usize >= shape.part_count() || e >= shape.part_sizes()[p as usize] {
                    return Err(Error::NotRegular(format!("coordinate {p}:{e} outside shape")));
                }
                if !parts.insert(p) {
                    return Err(Error::NotRegular(format!("cell meets part {p} twice")));
                }
                if !seen.insert((p, e)) {
                    return Err(Error::NotRegular(format!("vertex {p}:{e} in two cells")));
                }
            }
        }
        if seen.len() as u64 != shape.total_vertices() {
            return Err(Error::NotRegular("cells do not cover every vertex".into()));
        }
        cells.sort();
        Ok(RegularPartition { shape, cells })
    }

    pub fn shape(&self) -> &MultipartiteShape {
        &self.shape
    }

    pub fn cells(&self) -> &[Vec<Coord>] {
        &self.cells
    }

    /// Canonical byte key for orbit bookkeeping.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for cell in &self.cells {
            for &(p, e) in cell {
                out.extend(p.to_le_bytes());
                out.extend(e.to_le_bytes());
            }
            out.extend(u32::MAX.to_le_bytes());
        }
        out
    }

    /// Applies a flat-index vertex permutation (a graph automorphism) and
    /// renormalizes. The image of a regular partition under a graph
    /// automorphism is again regular.
    pub fn apply_flat_perm(&self, perm: &[usize]) -> RegularPartition {
        let mut cells: Vec<Vec<Coord>> = self
            .cells
            .iter()
            .map(|cell| {
                let mut c: Vec<Coord> = cell
                    .iter()
                    .map(|&co| self.shape.index_coord(perm[self.shape.coord_index(co)]))
                    .collect();
                c.sort_unstable();
                c
            })
            .collect();
        cells.sort();
        RegularPartition { shape: self.shape.clone(), cells }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("shape");
        for s in self.shape.part_sizes() {
            out.push_str(&format!(" {s}"));
        }
        out.push('\n');
        for cell in &self.cells {
            out.push_str("cell");
            for &(p, e) in cell {
                out.push_str(&format!(" {p}:{e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<RegularPartition> {
        let mut shape: Option<MultipartiteShape> = None;
        let mut cells: Vec<Vec<Coord>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            match tokens.next().unwrap() {
                "shape" => {
                    let mut sizes = Vec::new();
                    for t in tokens {
                        sizes.push(t.parse::<u32>().map_err(|_| {
                            Error::Parse(format!("line {}: bad part size {t:?}", lineno + 1))
                        })?);
                    }
                    shape = Some(MultipartiteShape::new(sizes)?);
                }
                "cell" => {
                    let mut cell = Vec::new();
                    for t in tokens {
                        let (p, e) = t.split_once(':').ok_or_else(|| {
                            Error::Parse(format!("line {}: expected part:index, got {t:?}", lineno + 1))
                        })?;
                        let p = p.parse::<u32>().map_err(|_| {
                            Error::Parse(format!("line {}: bad part {p:?}", lineno + 1))
                        })?;
                        let e = e.parse::<u32>().map_err(|_| {
                            Error::Parse(format!("line {}: bad index {e:?}", lineno + 1))
                        })?;
                        cell.push((p, e));
                    }
                    cells.push(cell);
                }
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown directive {other:?}",
                        lineno + 1
                    )));
                }
            }
        }
        let shape = shape.ok_or_else(|| Error::Parse("missing shape line".into()))?;
        RegularPartition::new(shape, cells)
    }
}

/// Incidence hypergraph of a regular partition: one vertex per cell, one
/// edge per part, incidence by nonempty intersection. Unlabeled.
pub fn tau(p: &RegularPartition) -> LabeledHypergraph {
    let mut h = LabeledHypergraph::new(0);
    for (i, _) in p.cells().iter().enumerate() {
        h.add_vertex(i as u32, None).expect("fresh ids");
    }
    for part in 0..p.shape().part_count() {
        let members: Vec<u32> = p
            .cells()
            .iter()
            .enumerate()
            .filter(|(_, cell)| cell.iter().any(|&(q, _)| q as usize == part))
            .map(|(i, _)| i as u32)
            .collect();
        h.add_edge(part as u32, &members).expect("valid edge");
    }
    h
}

/// Labeled incidence hypergraph: the designated parts become vertex labels
/// instead of edges. designated[pos] is the part recorded as label element
/// pos + 1; the remaining parts stay edges under their part-index ids.
/// Cells in no remaining part are kept as labeled degree-0 vertices.
pub fn tau_prime(p: &RegularPartition, designated: &[usize]) -> Result<LabeledHypergraph> {
    let m2 = designated.len();
    if m2 > 32 {
        return Err(Error::Domain("more than 32 designated parts unsupported".into()));
    }
    let mut seen = BTreeSet::new();
    for &d in designated {
        if d >= p.shape().part_count() {
            return Err(Error::Domain(format!("designated part {d} outside shape")));
        }
        if !seen.insert(d) {
            return Err(Error::Domain(format!("designated part {d} repeated")));
        }
    }
    let mut h = LabeledHypergraph::new(m2 as u32);
    for (i, cell) in p.cells().iter().enumerate() {
        let mut elements = Vec::new();
        for (pos, &d) in designated.iter().enumerate() {
            if cell.iter().any(|&(q, _)| q as usize == d) {
                elements.push(pos as u32 + 1);
            }
        }
        let label = LabelSet::from_elements(&elements, m2 as u32)?;
        h.add_vertex(i as u32, Some(label))?;
    }
    for part in 0..p.shape().part_count() {
        if seen.contains(&part) {
            continue;
        }
        let members: Vec<u32> = p
            .cells()
            .iter()
            .enumerate()
            .filter(|(_, cell)| cell.iter().any(|&(q, _)| q as usize == part))
            .map(|(i, _)| i as u32)
            .collect();
        h.add_edge(part as u32, &members)?;
    }
    Ok(h)
}

/// Rebuilds the unlabeled incidence hypergraph from a labeled one: every
/// label element i becomes an edge over the vertices whose labels contain i.
/// Requires every vertex to be labeled.
pub fn tau_prime_inverse(h: &LabeledHypergraph) -> Result<LabeledHypergraph> {
    let mut out = LabeledHypergraph::new(0);
    for v in h.vertices() {
        if v.label.is_none() {
            return Err(Error::UnlabeledVertex(v.id));
        }
        out.add_vertex(v.id, None)?;
    }
    for e in h.edges() {
        out.add_edge(e.id, &e.vertices)?;
    }
    let base = h.max_edge_id().map_or(0, |x| x + 1);
    for i in 1..=h.m2() {
        let members: Vec<u32> = h
            .vertices()
            .iter()
            .filter(|v| v.label.map_or(false, |l| l.contains(i)))
            .map(|v| v.id)
            .collect();
        out.add_edge(base + i - 1, &members)?;
    }
    Ok(out)
}

/// Outcome of comparing the partition-stabilizer group with the incidence
/// hypergraph automorphism group.
#[derive(Debug, Clone)]
pub struct AutEquivalence {
    pub partition_group_order: BigUint,
    pub hypergraph_group_order: BigUint,
    pub equal: bool,
}

/// Compares |aut(P)| with |aut(tau(P))|. The partition side is computed by
/// orbit-stabilizer inside the full graph group: |aut(P)| multiplied by the
/// orbit size of P equals the graph group order. Errors with TooLarge above
/// the vertex bound.
pub fn aut_equivalence_check(p: &RegularPartition, bound: u64) -> Result<AutEquivalence> {
    let total = p.shape().total_vertices();
    if total > bound {
        return Err(Error::TooLarge(format!("{total} vertices exceeds bound {bound}")));
    }
    let orbit = partition_orbit_size(p);
    let full = p.shape().graph_group_order();
    let partition_group_order = full / BigUint::from(orbit);
    let hypergraph_group_order = engine::automorphisms(&tau(p))?.group_order;
    let equal = partition_group_order == hypergraph_group_order;
    Ok(AutEquivalence { partition_group_order, hypergraph_group_order, equal })
}

/// Size of the orbit of P under the graph automorphism group.
pub fn partition_orbit_size(p: &RegularPartition) -> u64 {
    let gens = p.shape().graph_group_generators();
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    seen.insert(p.canonical_key());
    let mut queue = vec![p.clone()];
    while let Some(q) = queue.pop() {
        for g in &gens {
            let img = q.apply_flat_perm(g);
            if seen.insert(img.canonical_key()) {
                queue.push(img);
            }
        }
    }
    seen.len() as u64
}

/// All regular partitions of a shape, by restricted-growth assignment in
/// part-major vertex order.
pub fn enumerate_regular_partitions(shape: &MultipartiteShape) -> Vec<RegularPartition> {
    let mut coords: Vec<Coord> = Vec::new();
    for (p, &s) in shape.part_sizes().iter().enumerate() {
        for e in 0..s {
            coords.push((p as u32, e));
        }
    }
    let mut out = Vec::new();
    let mut cells: Vec<Vec<Coord>> = Vec::new();
    fn rec(
        coords: &[Coord],
        next: usize,
        cells: &mut Vec<Vec<Coord>>,
        shape: &MultipartiteShape,
        out: &mut Vec<RegularPartition>,
    ) {
        if next == coords.len() {
            out.push(
                RegularPartition::new(shape.clone(), cells.clone())
                    .expect("constructed partitions are regular"),
            );
            return;
        }
        let c = coords[next];
        for i in 0..cells.len() {
            if cells[i].iter().all(|&(p, _)| p != c.0) {
                cells[i].push(c);
                rec(coords, next + 1, cells, shape, out);
                cells[i].pop();
            }
        }
        cells.push(vec![c]);
        rec(coords, next + 1, cells, shape, out);
        cells.pop();
    }
    rec(&coords, 0, &mut cells, shape, &mut out);
    out
}

/// Parameters (j, k, r) determined by n1 and m2.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub n1: u32,
    pub m2: u32,
    pub j: i64,
    pub k: u64,
    pub r: BigRational,
}

pub fn j_max(m2: u32) -> i64 {
    (m2 as i64 - 1) / 2
}

/// Decomposes n1 = 2 + sum_{i=0}^{j} C(m2, i) + k and computes r.
pub fn params(n1: u32, m2: u32) -> Result<Params> {
    if n1 < 2 {
        return Err(Error::Domain("n1 must be at least 2".into()));
    }
    if m2 < 1 || m2 > 32 {
        return Err(Error::Domain("m2 must lie in 1..=32".into()));
    }
    let jm = j_max(m2);
    let mut rem = (n1 - 2) as u64;
    let mut j: i64 = -1;
    while j < jm {
        let c = binomial(m2 as u64, (j + 1) as u64);
        if rem < c {
            break;
        }
        rem -= c;
        j += 1;
    }
    let k = rem;
    let m2_big = BigRational::from_integer(BigInt::from(m2));
    let mut r = BigRational::one();
    for i in 0..=j {
        let c = BigRational::from_integer(BigInt::from(binomial(m2 as u64, i as u64)));
        let coeff = BigRational::from_integer(BigInt::from(m2 as i64 - i)) / m2_big.clone();
        r += coeff * c;
    }
    if j < jm {
        let coeff = BigRational::from_integer(BigInt::from(m2 as i64 - j - 1)) / m2_big;
        r += coeff * BigRational::from_integer(BigInt::from(k));
    } else {
        r += BigRational::new(BigInt::from(k), BigInt::from(2));
    }
    Ok(Params { n1, m2, j, k, r })
}

impl Params {
    /// True in the extreme regime j = j_max (k unbounded, r gains k/2).
    pub fn is_extreme(&self) -> bool {
        self.j == j_max(self.m2)
    }

    /// r * m2, integral exactly in the non-extreme regime.
    pub fn r_m2(&self) -> BigRational {
        self.r.clone() * BigRational::from_integer(BigInt::from(self.m2))
    }

    /// Minimum ring length: 6 for a single label class, else
    /// max(2 m2, n1 + 1).
    pub fn min_ring_edges(&self) -> u64 {
        if self.m2 == 1 {
            6
        } else {
            (2 * self.m2 as u64).max(self.n1 as u64 + 1)
        }
    }

    /// Lower bound on the value of a ring built for these parameters:
    /// -3 for one label class, else -(m2-1) m2 r - 2 m2, attained when the
    /// edge count is maximally misaligned with m2. In the extreme regime
    /// with m2 odd and k > 0 the slot weights lose an extra k/2 per core
    /// edge, so the bound covers exactly the regimes the packing
    /// construction draws rings from.
    pub fn omega(&self) -> BigRational {
        if self.m2 == 1 {
            return BigRational::from_integer(BigInt::from(-3));
        }
        let m2 = BigInt::from(self.m2);
        let deficit = BigRational::from_integer(m2.clone() - 1) * BigRational::from_integer(m2.clone());
        -(deficit * self.r.clone()) - BigRational::from_integer(BigInt::from(2) * m2)
    }
}

/// Largest total weight of `size` distinct labels over {1..m2}: take labels
/// in decreasing size order. Errors when more distinct labels are requested
/// than exist.
pub fn w_cap(size: u64, m2: u32) -> Result<u64> {
    let available = 1u64 << m2;
    if size > available {
        return Err(Error::TooManyDistinctLabels { requested: size, available });
    }
    let mut remaining = size;
    let mut w = 0u64;
    for i in 0..=m2 as u64 {
        if remaining == 0 {
            break;
        }
        let count = binomial(m2 as u64, i).min(remaining);
        w += count * (m2 as u64 - i);
        remaining -= count;
    }
    Ok(w)
}

fn w_cap_clamped(size: u64, m2: u32) -> u64 {
    w_cap(size.min(1u64 << m2), m2).expect("clamped size fits")
}

/// Per-component weight and value ledger of a labeled uniform hypergraph.
#[derive(Debug, Clone)]
pub struct ComponentValue {
    pub vertex_ids: Vec<u32>,
    pub edge_ids: Vec<u32>,
    pub weight: u64,
    pub value: BigRational,
    pub edge_value: BigRational,
}

#[derive(Debug, Clone)]
pub struct ValueReport {
    pub components: Vec<ComponentValue>,
    /// Degree-0 vertices as (id, label weight).
    pub isolated: Vec<(u32, u64)>,
    pub total_weight: u64,
    /// Sum of component values plus isolated weights; equals
    /// total_weight - r m2 |E|.
    pub total_value: BigRational,
    /// total_weight / m2: the implied size of the designated parts.
    pub implied_n2: BigRational,
    pub n2_integral: bool,
}

fn check_form(h: &LabeledHypergraph, params: &Params) -> Result<()> {
    if h.m2() != params.m2 {
        return Err(Error::Domain(format!(
            "hypergraph m2 = {} does not match params m2 = {}",
            h.m2(),
            params.m2
        )));
    }
    if let Some(s) = h.uniform_size()? {
        if s as u32 != params.n1 {
            return Err(Error::Domain(format!(
                "edge size {s} does not match params n1 = {}",
                params.n1
            )));
        }
    }
    Ok(())
}

/// Weights and values per component, with the implied designated-part size.
pub fn weight_and_value(h: &LabeledHypergraph, params: &Params) -> Result<ValueReport> {
    check_form(h, params)?;
    let total_weight = h.total_weight()?;
    let rm2 = params.r_m2();
    let mut components = Vec::new();
    let mut isolated = Vec::new();
    let mut total_value = BigRational::zero();
    for comp in h.connected_components() {
        let sub = h.induced_subgraph(&comp);
        if sub.edge_count() == 0 {
            let v = sub.vertices()[0];
            let w = v.label.map_or(0, |l| l.weight() as u64);
            total_value += BigRational::from_integer(BigInt::from(w));
            isolated.push((v.id, w));
            continue;
        }
        let weight = sub.total_weight()?;
        let edges = sub.edge_count() as u64;
        let value = BigRational::from_integer(BigInt::from(weight))
            - rm2.clone() * BigRational::from_integer(BigInt::from(edges));
        let edge_value = value.clone() / BigRational::from_integer(BigInt::from(edges));
        total_value += value.clone();
        components.push(ComponentValue {
            vertex_ids: sub.vertices().iter().map(|v| v.id).collect(),
            edge_ids: sub.edges().iter().map(|e| e.id).collect(),
            weight,
            value,
            edge_value,
        });
    }
    let m2_big = BigRational::from_integer(BigInt::from(params.m2));
    let implied_n2 = BigRational::from_integer(BigInt::from(total_weight)) / m2_big;
    let n2_integral = implied_n2.is_integer();
    Ok(ValueReport {
        components,
        isolated,
        total_weight,
        total_value,
        implied_n2,
        n2_integral,
    })
}

/// Defect multiplicities: degree->=2 vertices short of the full label, and
/// edges whose degree-1 label set falls short of the distinct-label cap.
/// Caps are clamped, so symmetric inputs with duplicate labels saturate at
/// zero rather than erroring.
#[derive(Debug, Clone)]
pub struct DefectReport {
    pub defective_vertices: Vec<(u32, u64)>,
    pub defective_edges: Vec<(u32, u64)>,
    pub total: u64,
}

pub fn defects(h: &LabeledHypergraph, params: &Params) -> Result<DefectReport> {
    check_form(h, params)?;
    let m2 = params.m2;
    let mut defective_vertices = Vec::new();
    let mut defective_edges = Vec::new();
    let mut total = 0u64;
    for (i, v) in h.vertices().iter().enumerate() {
        if h.degree(i) < 2 {
            continue;
        }
        let w = v.label.ok_or(Error::UnlabeledVertex(v.id))?.weight() as u64;
        if w < m2 as u64 {
            let mult = m2 as u64 - w;
            defective_vertices.push((v.id, mult));
            total += mult;
        }
    }
    for e in h.edges() {
        let mut w_s = 0u64;
        let mut size = 0u64;
        for vid in &e.vertices {
            let pos = h.vertex_position(*vid).unwrap();
            if h.degree(pos) == 1 {
                size += 1;
                w_s += h.vertices()[pos]
                    .label
                    .ok_or(Error::UnlabeledVertex(*vid))?
                    .weight() as u64;
            }
        }
        let cap = w_cap_clamped(size, m2);
        if cap > w_s {
            let mult = cap - w_s;
            defective_edges.push((e.id, mult));
            total += mult;
        }
    }
    Ok(DefectReport { defective_vertices, defective_edges, total })
}

/// One inequality: the exact rational bound and whether it holds.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub bound: BigRational,
    pub holds: bool,
}

fn check(bound: BigRational, lhs: &BigRational) -> BoundCheck {
    let holds = *lhs <= bound;
    BoundCheck { bound, holds }
}

/// Bound suite for one component. `applicable` requires the degree-1 labels
/// inside every edge to be distinct; duplicates certify a label-swap
/// symmetry, and the capped inequalities are then skipped as None.
#[derive(Debug, Clone)]
pub struct ComponentBounds {
    pub edge_ids: Vec<u32>,
    pub applicable: bool,
    pub is_tree: bool,
    pub mu: u64,
    /// Leaf-edge count for trees.
    pub leaf_count: Option<u64>,
    pub deg1_count: u64,
    /// deg1(G) = 2p + mu with p = |V| - n1 |E| / 2; an identity.
    pub degree_identity: bool,
    /// Trees with >= 2 edges have at least mu + 2 leaf edges.
    pub leaf_mu_bound: Option<bool>,
    pub defect_total: u64,
    pub weight: u64,
    pub value: BigRational,
    /// w <= m2 deg2+(G) + sum_e w_cap(deg1(e)) - d.
    pub cap_by_edges: Option<BoundCheck>,
    /// Balanced redistribution of degree-1 slots across edges.
    pub cap_balanced: Option<BoundCheck>,
    /// Extremal redistribution ignoring per-edge granularity.
    pub cap_extremal: Option<BoundCheck>,
    /// Shape-free cap depending only on n1, m2.
    pub cap_uniform: Option<BoundCheck>,
    /// w <= m2 r |E| in the extreme regime or when p is small.
    pub value_cap_extreme: Option<BoundCheck>,
    /// Positive value forces a tree in the non-extreme regime with
    /// v <= m2 - 2j - d.
    pub positive_value_tree: Option<bool>,
    /// Tree bound for k = 0: v <= m2 - 2j - l - j mu - d.
    pub tree_value_cap: Option<BoundCheck>,
}

#[derive(Debug, Clone)]
pub struct ValueBounds {
    pub components: Vec<ComponentBounds>,
    pub isolated_weight: u64,
    pub isolated_labels_distinct: bool,
    /// m2 * 2^(m2-1): total weight of all distinct labels.
    pub isolated_cap: u64,
    /// None when isolated labels repeat (which certifies symmetry).
    pub isolated_ok: Option<bool>,
    pub total_value: BigRational,
}

/// Evaluates the full bound suite on a labeled uniform hypergraph.
pub fn value_bounds(h: &LabeledHypergraph, params: &Params) -> Result<ValueBounds> {
    check_form(h, params)?;
    let report = weight_and_value(h, params)?;
    let m2 = params.m2 as u64;
    let n1 = params.n1 as u64;
    let rm2 = params.r_m2();
    let cap_universe = 1u64 << params.m2;
    let mut components = Vec::new();
    for comp in h.connected_components() {
        let sub = h.induced_subgraph(&comp);
        if sub.edge_count() == 0 {
            continue;
        }
        let edges = sub.edge_count() as u64;
        let verts = sub.vertex_count() as u64;
        let weight = sub.total_weight()?;
        let value = BigRational::from_integer(BigInt::from(weight))
            - rm2.clone() * BigRational::from_integer(BigInt::from(edges));
        let is_tree = sub.is_tree()?;
        let mu = sub.mu();
        let defect = defects(&sub, params)?.total;
        let profile = sub.degree_profile();
        let deg1 = profile.deg1_vertex_count as u64;
        let deg2plus = profile.deg2plus_vertex_count as u64;
        // 2p = 2|V| - n1 |E|; the degree identity is deg1 = 2p + mu.
        let two_p = 2 * verts as i64 - (n1 * edges) as i64;
        let degree_identity = deg1 as i64 == two_p + mu as i64;

        // Applicability: distinct degree-1 labels within every edge, and
        // every slot count within the distinct-label universe.
        let mut applicable = true;
        for e in sub.edges() {
            let mut labels = Vec::new();
            for vid in &e.vertices {
                let pos = sub.vertex_position(*vid).unwrap();
                if sub.degree(pos) == 1 {
                    labels.push(sub.vertices()[pos].label.unwrap());
                }
            }
            if labels.len() as u64 > cap_universe {
                applicable = false;
            }
            labels.sort_unstable();
            labels.dedup();
            let distinct = labels.len() as u64;
            if distinct < *profile.edge_deg1.get(&e.id).unwrap() as u64 {
                applicable = false;
            }
        }

        let leaf_count = if is_tree {
            Some(sub.mu_and_leaves()?.leaf_count)
        } else {
            None
        };
        let leaf_mu_bound = leaf_count.map(|l| edges < 2 || l >= mu + 2);

        let weight_rat = BigRational::from_integer(BigInt::from(weight));
        let mut cap_by_edges = None;
        let mut cap_balanced = None;
        let mut cap_extremal = None;
        let mut cap_uniform = None;
        let mut value_cap_extreme = None;
        let mut positive_value_tree = None;
        let mut tree_value_cap = None;
        if applicable {
            // Per-edge caps.
            let mut sum_caps = 0u64;
            for e in sub.edges() {
                sum_caps += w_cap(*profile.edge_deg1.get(&e.id).unwrap() as u64, params.m2)?;
            }
            let b1 = BigRational::from_integer(BigInt::from(
                (m2 * deg2plus + sum_caps) as i64 - defect as i64,
            ));
            cap_by_edges = Some(check(b1, &weight_rat));

            // Balanced slot redistribution.
            let lo = deg1 / edges;
            let hi = deg1.div_ceil(edges);
            if hi <= cap_universe {
                let b_hi = deg1 - lo * edges;
                let b_lo = edges - b_hi;
                let b2 = BigRational::from_integer(BigInt::from(
                    (m2 * deg2plus + b_lo * w_cap(lo, params.m2)? + b_hi * w_cap(hi, params.m2)?)
                        as i64
                        - defect as i64,
                ));
                cap_balanced = Some(check(b2, &weight_rat));
            }

            // Extremal redistribution: deg1 = |E| sum_{i<=j*} C(m2,i) + k*.
            let mut rem = deg1;
            let mut jstar: i64 = -1;
            while jstar < params.m2 as i64 {
                let c = edges * binomial(m2, (jstar + 1) as u64);
                if rem < c {
                    break;
                }
                rem -= c;
                jstar += 1;
            }
            if jstar < params.m2 as i64 || rem == 0 {
                let mut slot_weight = 0i64;
                for i in 0..=jstar {
                    slot_weight += (edges * (m2 - i as u64) * binomial(m2, i as u64)) as i64;
                }
                slot_weight += (m2 as i64 - jstar - 1) * rem as i64;
                let b3 = BigRational::from_integer(BigInt::from(
                    (m2 * deg2plus) as i64 + slot_weight - defect as i64,
                ));
                cap_extremal = Some(check(b3, &weight_rat));
            }

            // Shape-free cap: |E| (m2 n1 / 2 - (m2/2) sum C + sum (m2-i) C)
            // over i <= j_max.
            let jm = j_max(params.m2);
            let mut sum_c = BigInt::zero();
            let mut sum_wc = BigInt::zero();
            for i in 0..=jm {
                let c = BigInt::from(binomial(m2, i as u64));
                sum_c += &c;
                sum_wc += BigInt::from(m2 - i as u64) * c;
            }
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let per_edge = BigRational::from_integer(BigInt::from(m2 * n1)) * half.clone()
                - BigRational::from_integer(BigInt::from(m2)) * half * BigRational::from_integer(sum_c)
                + BigRational::from_integer(sum_wc);
            let b4 = per_edge * BigRational::from_integer(BigInt::from(edges));
            cap_uniform = Some(check(b4, &weight_rat));

            // Extreme-regime weight cap; outside the extreme regime it needs
            // p <= |E| (n1/2 - 1), i.e. 2p <= (n1 - 2) |E|.
            let small_p = 2 * verts as i64 - (n1 * edges) as i64 <= ((n1 - 2) * edges) as i64;
            if params.is_extreme() || small_p {
                let b5 = rm2.clone() * BigRational::from_integer(BigInt::from(edges));
                value_cap_extreme = Some(check(b5, &weight_rat));
            }

            if value > BigRational::zero() {
                let ok = !params.is_extreme()
                    && is_tree
                    && value
                        <= BigRational::from_integer(BigInt::from(
                            m2 as i64 - 2 * params.j - defect as i64,
                        ));
                positive_value_tree = Some(ok);
            }

            if is_tree && params.k == 0 {
                let l = leaf_count.unwrap() as i64;
                let b6 = BigRational::from_integer(BigInt::from(
                    m2 as i64 - 2 * params.j - l - params.j * mu as i64 - defect as i64,
                ));
                tree_value_cap = Some(check(b6, &value));
            }
        }

        components.push(ComponentBounds {
            edge_ids: sub.edges().iter().map(|e| e.id).collect(),
            applicable,
            is_tree,
            mu,
            leaf_count,
            deg1_count: deg1,
            degree_identity,
            leaf_mu_bound,
            defect_total: defect,
            weight,
            value,
            cap_by_edges,
            cap_balanced,
            cap_extremal,
            cap_uniform,
            value_cap_extreme,
            positive_value_tree,
            tree_value_cap,
        });
    }

    let isolated_weight: u64 = report.isolated.iter().map(|&(_, w)| w).sum();
    let mut iso_labels: Vec<LabelSet> = report
        .isolated
        .iter()
        .map(|&(id, _)| {
            let pos = h.vertex_position(id).unwrap();
            h.vertices()[pos].label.unwrap()
        })
        .collect();
    let before = iso_labels.len();
    iso_labels.sort_unstable();
    iso_labels.dedup();
    let isolated_labels_distinct = iso_labels.len() == before;
    let isolated_cap = m2 * (1u64 << (params.m2 - 1));
    let isolated_ok = if isolated_labels_distinct {
        Some(isolated_weight <= isolated_cap)
    } else {
        None
    };
    Ok(ValueBounds {
        components,
        isolated_weight,
        isolated_labels_distinct,
        isolated_cap,
        isolated_ok,
        total_value: report.total_value,
    })
}

pub(crate) fn factorial(n: u64) -> BigUint {
    let mut f = BigUint::one();
    for i in 2..=n {
        f *= BigUint::from(i);
    }
    f
}

/// True when the per-element counts of the labels are all equal, which a
/// labeled incidence hypergraph of an actual partition must satisfy.
pub fn is_label_balanced(h: &LabeledHypergraph) -> Result<bool> {
    let counts = h.label_element_counts()?;
    Ok(counts.windows(2).all(|w| w[0] == w[1]))
}

/// Signed rational convenience for tests and reports.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
