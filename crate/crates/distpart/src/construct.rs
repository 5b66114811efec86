//! Explicit constructions: symmetry breaking rings, the packed catalogue
//! union delta, tail extension, the chain and cycle families for the
//! extreme regimes, and regular asymmetric hypergraph builders with their
//! dualization.

use crate::error::{Error, Result};
use crate::hypercore::{engine, LabelSet, LabeledHypergraph};
use crate::partition::{self, is_label_balanced, weight_and_value, Params, ValueReport};
use crate::trees::build_t_star;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Default lower bound on the vertex count of random regular graphs; the
/// generators are probabilistic and small instances may admit no asymmetric
/// graph at all.
pub fn default_regular_floor(s: u64) -> u64 {
    3 * s + 4
}

const GRAPH_ATTEMPTS: u64 = 2000;

/// A certified construction: the hypergraph, exact implied block size,
/// asymmetry evidence under both fixed labels and label permutations, the
/// component value ledger, and the balance verdict.
#[derive(Debug, Clone)]
pub struct ConstructionReport {
    pub hypergraph: LabeledHypergraph,
    pub n2: BigRational,
    pub certificate: engine::AutomorphismReport,
    pub pi_sweep: engine::LabelPermSweep,
    pub values: ValueReport,
    pub balanced: bool,
    pub seed: Option<u64>,
    /// Worst-case gap to the optimum block size, when the packing argument
    /// provides one.
    pub error_bound: Option<BigRational>,
}

/// Runs the full certification stack on a finished construction: exact
/// automorphism check with labels fixed, the label-permutation sweep,
/// balance, and block-size integrality. When the implied block size equals
/// n1 the two-layer argument is insufficient, so the rebuilt incidence
/// structure is checked directly.
fn certify(
    h: LabeledHypergraph,
    params: &Params,
    seed: Option<u64>,
    error_bound: Option<BigRational>,
) -> Result<ConstructionReport> {
    let certificate = engine::automorphisms(&h)?;
    if !certificate.is_asymmetric {
        return Err(Error::CertificationFailed(
            "label-preserving automorphism found".into(),
        ));
    }
    let pi_sweep = engine::label_perm_sweep(&h, engine::DEFAULT_NODE_BUDGET)?;
    if !pi_sweep.tau_asymmetric {
        return Err(Error::CertificationFailed(
            "a label permutation preserves the construction".into(),
        ));
    }
    let values = weight_and_value(&h, params)?;
    if !values.n2_integral {
        return Err(Error::CertificationFailed(
            "implied block size is not an integer".into(),
        ));
    }
    let balanced = is_label_balanced(&h)?;
    if !balanced {
        return Err(Error::CertificationFailed("label balance violated".into()));
    }
    if values.implied_n2 == BigRational::from_integer(BigInt::from(params.n1)) {
        let tau = partition::tau_prime_inverse(&h)?;
        if !engine::automorphisms(&tau)?.is_asymmetric {
            return Err(Error::CertificationFailed(
                "equal block sizes admit a cross-size automorphism".into(),
            ));
        }
    }
    Ok(ConstructionReport {
        n2: values.implied_n2.clone(),
        hypergraph: h,
        certificate,
        pi_sweep,
        values,
        balanced,
        seed,
        error_bound,
    })
}

/// Shape of a symmetry breaking ring: a cyclic component whose label
/// layout admits no nontrivial automorphism and survives every label
/// permutation, absorbing an arbitrary edge count at bounded value loss.
#[derive(Debug, Clone)]
pub struct RingSpec {
    pub params: Params,
    pub edge_count: u64,
}

impl RingSpec {
    pub fn new(n1: u32, m2: u32, edge_count: u64) -> Result<Self> {
        let params = partition::params(n1, m2)?;
        if m2 == 1 && n1 != 2 {
            return Err(Error::WrongCase(
                "single-label rings exist only for edge size 2".into(),
            ));
        }
        let minimum = params.min_ring_edges();
        if edge_count < minimum {
            return Err(Error::TooFewEdges { minimum, got: edge_count });
        }
        Ok(RingSpec { params, edge_count })
    }

    /// Largest multiple of m2 within the edge budget; the cyclic core size.
    pub fn quot(&self) -> u64 {
        if self.params.m2 == 1 {
            self.edge_count
        } else {
            self.edge_count - self.edge_count % self.params.m2 as u64
        }
    }
}

/// Degree-1 slot labels of the base edge: every label of size at least
/// m2 - j, then the k numerically smallest of size m2 - j - 1.
fn ring_base_labels(params: &Params) -> Result<Vec<LabelSet>> {
    let m2 = params.m2;
    let mut base = Vec::new();
    if params.j >= 0 {
        let min_size = (m2 as i64 - params.j) as u32;
        for mask in 1..(1u32 << m2) {
            if mask.count_ones() >= min_size {
                base.push(LabelSet(mask));
            }
        }
        let mut added = 0u64;
        for mask in 0..(1u32 << m2) {
            if added == params.k {
                break;
            }
            if mask.count_ones() == min_size - 1 {
                base.push(LabelSet(mask));
                added += 1;
            }
        }
        if added < params.k {
            return Err(Error::Domain(
                "not enough distinct labels for the extra slots".into(),
            ));
        }
    }
    if base.len() as u64 != params.n1 as u64 - 2 {
        return Err(Error::Domain(format!(
            "slot labels ({}) do not fill the edge size ({})",
            base.len(),
            params.n1 - 2
        )));
    }
    Ok(base)
}

pub fn build_ring(spec: &RingSpec) -> Result<LabeledHypergraph> {
    let params = &spec.params;
    let m2 = params.m2;
    let mut h = LabeledHypergraph::new(m2);
    if m2 == 1 {
        // Plain cycle; the three weight-0 vertices at positions 0, 1, 3
        // have gap pattern (1, 2, L-3), which no rotation or reflection
        // preserves for L >= 6.
        let len = spec.edge_count as u32;
        for i in 0..len {
            let label = if i == 0 || i == 1 || i == 3 {
                LabelSet::EMPTY
            } else {
                LabelSet(1)
            };
            h.add_vertex(i, Some(label))?;
        }
        for i in 0..len {
            h.add_edge(i, &[i, (i + 1) % len])?;
        }
        return Ok(h);
    }

    let quot = spec.quot() as u32;
    if (params.n1 as u64) > quot as u64 {
        return Err(Error::Domain(
            "edge size exceeds the cyclic core; windows would collapse".into(),
        ));
    }
    let full = (1u32 << m2) - 1;
    for i in 0..quot {
        let label = if i == 0 {
            LabelSet::EMPTY
        } else if i <= m2 {
            LabelSet(full ^ (1 << (i - 1)))
        } else {
            LabelSet(full)
        };
        h.add_vertex(i, Some(label))?;
    }
    let base = ring_base_labels(params)?;
    let mut next_vertex = quot;
    for i in 0..quot {
        let mut members = vec![i, (i + 1) % quot];
        for slot in &base {
            let mut label = *slot;
            for _ in 0..(i % m2) {
                label = label.rotate(m2);
            }
            h.add_vertex(next_vertex, Some(label))?;
            members.push(next_vertex);
            next_vertex += 1;
        }
        h.add_edge(i, &members)?;
    }
    let trailing = spec.edge_count - quot as u64;
    for i in 1..=trailing as u32 {
        let members: Vec<u32> = (0..params.n1).map(|o| (i + o) % quot).collect();
        h.add_edge(quot + i - 1, &members)?;
    }
    Ok(h)
}

/// Certifies a stand-alone ring as a full construction report.
pub fn ring_report(spec: &RingSpec) -> Result<ConstructionReport> {
    let h = build_ring(spec)?;
    certify(h, &spec.params, None, None)
}

/// Disjoint union with dense renumbering, preserving labels.
fn disjoint_union(parts: &[LabeledHypergraph], m2: u32) -> Result<LabeledHypergraph> {
    let mut out = LabeledHypergraph::new(m2);
    let mut vnext = 0u32;
    let mut enext = 0u32;
    for p in parts {
        let mut vmap = BTreeMap::new();
        for v in p.vertices() {
            vmap.insert(v.id, vnext);
            out.add_vertex(vnext, v.label)?;
            vnext += 1;
        }
        for e in p.edges() {
            let members: Vec<u32> = e.vertices.iter().map(|id| vmap[id]).collect();
            out.add_edge(enext, &members)?;
            enext += 1;
        }
    }
    Ok(out)
}

/// Appends one degree-0 vertex of every nonempty label.
fn add_isolated_label_vertices(h: &mut LabeledHypergraph) -> Result<()> {
    let m2 = h.m2();
    let mut next = h.max_vertex_id().map_or(0, |id| id + 1);
    for mask in 1..(1u32 << m2) {
        h.add_vertex(next, Some(LabelSet(mask)))?;
        next += 1;
    }
    Ok(())
}

/// The packed construction: all trees of the best catalogue classes, as
/// many whole classes as fit while leaving room for a ring, the ring
/// absorbing the remaining edge budget, and one degree-0 vertex per
/// nonempty label.
pub fn build_delta(
    m1: u64,
    n1: u32,
    m2: u32,
    catalogue_max_edges: u64,
) -> Result<ConstructionReport> {
    let params = partition::params(n1, m2)?;
    if params.is_extreme() {
        return Err(Error::WrongCase(
            "extreme regime; use the chain or cycle families".into(),
        ));
    }
    let min_ring = params.min_ring_edges();
    if m1 < min_ring {
        return Err(Error::TooSmallM1 { minimum: min_ring, got: m1 });
    }
    let catalogue = build_t_star(&params, catalogue_max_edges)?;
    let budget = m1 - min_ring;
    let mut cumulative = 0u64;
    let mut zeta_max = 0usize;
    for class in &catalogue.classes {
        let cost = class.class_size * class.edges;
        if cumulative + cost > budget {
            break;
        }
        cumulative += cost;
        zeta_max += 1;
    }
    // The packing is only valid against the full infinite catalogue when
    // the next class is visible and no class beyond the horizon could
    // outrank a chosen one.
    if zeta_max >= catalogue.classes.len() {
        return Err(Error::CatalogueExhausted(catalogue_max_edges));
    }
    let vmax = if params.k == 0 && params.j >= 0 {
        m2 as i64 - 2 * params.j
    } else {
        m2 as i64
    };
    let horizon = BigRational::new(BigInt::from(vmax), BigInt::from(catalogue_max_edges + 1));
    if catalogue.classes[zeta_max].edge_value < horizon {
        return Err(Error::CatalogueExhausted(catalogue_max_edges));
    }

    let mut last_err: Option<Error> = None;
    for zeta in (0..=zeta_max).rev() {
        let used: u64 = catalogue.classes[..zeta]
            .iter()
            .map(|c| c.class_size * c.edges)
            .sum();
        let ring_spec = RingSpec::new(n1, m2, m1 - used)?;
        let mut parts: Vec<LabeledHypergraph> = Vec::new();
        for class in &catalogue.classes[..zeta] {
            let mut member = class.representative.clone();
            let mut seen = BTreeSet::new();
            for _ in 0..m2 {
                if seen.insert(engine::canonical_form(&member)?) {
                    parts.push(member.clone());
                }
                member = member.apply_xi();
            }
        }
        parts.push(build_ring(&ring_spec)?);
        let mut h = disjoint_union(&parts, m2)?;
        add_isolated_label_vertices(&mut h)?;
        let next_value = catalogue.classes[zeta].edge_value.clone();
        let error_bound = BigRational::from_integer(BigInt::from(m2 as u64 * m2 as u64))
            + BigRational::from_integer(BigInt::from(min_ring)) * next_value
            - params.omega();
        match certify(h, &params, None, Some(error_bound)) {
            Ok(report) => return Ok(report),
            Err(e @ Error::CertificationFailed(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(Error::RetriesExhausted(zeta_max as u64 + 1)))
}

/// A maximal tail: a chain of sliding windows whose interior vertices
/// belong to no outside edge.
struct TailSearch<'a> {
    h: &'a LabeledHypergraph,
    n1: usize,
    best_len: u64,
    /// Extension data: the last window and the vertex the next slide drops.
    best: Option<(BTreeSet<u32>, u32)>,
}

struct TailState {
    edge_set: BTreeSet<usize>,
    window: BTreeSet<u32>,
    originals_left: BTreeSet<u32>,
    anchor: u32,
    anchor_dropped: bool,
    inner_queue: VecDeque<u32>,
    inner_all: Vec<u32>,
    used: BTreeSet<u32>,
    len: u64,
}

impl<'a> TailSearch<'a> {
    fn next_drop(&self, st: &TailState) -> Vec<u32> {
        if !st.originals_left.is_empty() {
            st.originals_left.iter().copied().collect()
        } else if !st.anchor_dropped {
            vec![st.anchor]
        } else if let Some(&front) = st.inner_queue.front() {
            vec![front]
        } else {
            Vec::new()
        }
    }

    fn record(&mut self, st: &TailState) {
        let exclusive = st.inner_all.iter().chain(Some(&st.anchor)).all(|v| {
            let pos = self.h.vertex_position(*v).unwrap();
            self.h
                .incident_edges(pos)
                .iter()
                .all(|e| st.edge_set.contains(e))
        });
        if !exclusive || st.len <= self.best_len {
            return;
        }
        let drop = *self
            .next_drop(st)
            .first()
            .expect("a window always has a next drop");
        self.best_len = st.len;
        self.best = Some((st.window.clone(), drop));
    }

    fn dfs(&mut self, st: &mut TailState) {
        self.record(st);
        for drop in self.next_drop(st) {
            let core: BTreeSet<u32> = st.window.iter().copied().filter(|&v| v != drop).collect();
            // Candidate next windows: existing edges containing the core
            // plus one unused vertex.
            let probe = *core.iter().next().expect("window larger than one");
            let ppos = self.h.vertex_position(probe).unwrap();
            for &epos in self.h.incident_edges(ppos) {
                if st.edge_set.contains(&epos) {
                    continue;
                }
                let members: BTreeSet<u32> =
                    self.h.edges()[epos].vertices.iter().copied().collect();
                if members.len() != self.n1 || !core.is_subset(&members) {
                    continue;
                }
                let fresh: Vec<u32> = members.difference(&core).copied().collect();
                if fresh.len() != 1 {
                    continue;
                }
                let new_vertex = fresh[0];
                if st.used.contains(&new_vertex) {
                    continue;
                }
                st.edge_set.insert(epos);
                st.window = members;
                let was_original = st.originals_left.remove(&drop);
                let was_anchor = !was_original && drop == st.anchor && !st.anchor_dropped;
                if was_anchor {
                    st.anchor_dropped = true;
                }
                if !was_original && !was_anchor {
                    st.inner_queue.pop_front();
                }
                st.inner_queue.push_back(new_vertex);
                st.inner_all.push(new_vertex);
                st.used.insert(new_vertex);
                st.len += 1;

                self.dfs(st);

                st.len -= 1;
                st.used.remove(&new_vertex);
                st.inner_all.pop();
                st.inner_queue.pop_back();
                if !was_original && !was_anchor {
                    st.inner_queue.push_front(drop);
                }
                if was_anchor {
                    st.anchor_dropped = false;
                }
                if was_original {
                    st.originals_left.insert(drop);
                }
                st.edge_set.remove(&epos);
                let mut back = core.clone();
                back.insert(drop);
                st.window = back;
            }
        }
    }
}

/// Extends an asymmetric uniform hypergraph by one edge: finds a maximum
/// tail, slides its window one step onto a fresh vertex, and certifies the
/// result. The fresh vertex carries the empty label, so the implied block
/// size is unchanged.
pub fn extend_tail(h: &LabeledHypergraph) -> Result<LabeledHypergraph> {
    let Some(n1) = h.uniform_size()? else {
        return Err(Error::NoTail);
    };
    if !engine::automorphisms(h)?.is_asymmetric {
        return Err(Error::SymmetricInput(
            "tail extension needs an asymmetric input".into(),
        ));
    }
    let mut search = TailSearch { h, n1, best_len: 0, best: None };
    for epos in 0..h.edge_count() {
        let members: BTreeSet<u32> = h.edges()[epos].vertices.iter().copied().collect();
        for &anchor in &members {
            let mut st = TailState {
                edge_set: BTreeSet::from([epos]),
                window: members.clone(),
                originals_left: members.iter().copied().filter(|&v| v != anchor).collect(),
                anchor,
                anchor_dropped: false,
                inner_queue: VecDeque::new(),
                inner_all: Vec::new(),
                used: members.clone(),
                len: 1,
            };
            search.dfs(&mut st);
        }
    }
    let Some((window, drop)) = search.best else {
        return Err(Error::NoTail);
    };
    let mut out = h.clone();
    let fresh = out.max_vertex_id().map_or(0, |id| id + 1);
    let label = if out.m2() == 0 { None } else { Some(LabelSet::EMPTY) };
    out.add_vertex(fresh, label)?;
    let mut members: Vec<u32> = window.iter().copied().filter(|&v| v != drop).collect();
    members.push(fresh);
    let next_edge = out.max_edge_id().map_or(0, |id| id + 1);
    out.add_edge(next_edge, &members)?;
    if !engine::automorphisms(&out)?.is_asymmetric {
        return Err(Error::CertificationFailed(
            "extended hypergraph admits an automorphism".into(),
        ));
    }
    Ok(out)
}

/// Cyclic window of the label alphabet: length values starting at start
/// (1-based), wrapping mod m2.
fn window_label(start: u32, length: u32, m2: u32) -> LabelSet {
    let mut mask = 0u32;
    for o in 0..length {
        mask |= 1 << ((start - 1 + o) % m2);
    }
    LabelSet(mask)
}

/// One chain of t edges overlapping in single full-label vertices, with
/// per-edge slot labels and two end distinction labels.
#[allow(clippy::too_many_arguments)]
fn build_chain(
    h: &mut LabeledHypergraph,
    next_vertex: &mut u32,
    next_edge: &mut u32,
    t: u64,
    slots: &[LabelSet],
    interior: LabelSet,
    end1: LabelSet,
    end2: LabelSet,
) -> Result<()> {
    let mut joints = Vec::new();
    for _ in 0..t.saturating_sub(1) {
        h.add_vertex(*next_vertex, Some(interior))?;
        joints.push(*next_vertex);
        *next_vertex += 1;
    }
    for a in 0..t {
        let mut members = Vec::new();
        if a > 0 {
            members.push(joints[(a - 1) as usize]);
        }
        if a + 1 < t {
            members.push(joints[a as usize]);
        }
        for slot in slots {
            h.add_vertex(*next_vertex, Some(*slot))?;
            members.push(*next_vertex);
            *next_vertex += 1;
        }
        if a == 0 {
            h.add_vertex(*next_vertex, Some(end1))?;
            members.push(*next_vertex);
            *next_vertex += 1;
        }
        if a + 1 == t {
            h.add_vertex(*next_vertex, Some(end2))?;
            members.push(*next_vertex);
            *next_vertex += 1;
        }
        h.add_edge(*next_edge, &members)?;
        *next_edge += 1;
    }
    Ok(())
}

/// The even-alphabet chain family: m2 chains of pairwise distinct lengths,
/// interior vertices fully labelled, ends carrying the forward and backward
/// half-alphabet windows anchored at the chain index.
pub fn build_even_m2_chains(
    m1: u64,
    n1: u32,
    m2: u32,
    t_partition: Option<Vec<u64>>,
) -> Result<ConstructionReport> {
    let params = partition::params(n1, m2)?;
    if m2 % 2 != 0 || m2 < 4 || params.k != 0 || !params.is_extreme() {
        return Err(Error::WrongCase(
            "chain family needs an even alphabet of size at least 4 with k = 0 at the extreme j"
                .into(),
        ));
    }
    let parts = match t_partition {
        Some(p) => {
            let set: BTreeSet<u64> = p.iter().copied().collect();
            if p.len() != m2 as usize
                || set.len() != p.len()
                || p.iter().any(|&t| t == 0)
                || p.iter().sum::<u64>() != m1
            {
                return Err(Error::BadPartition(format!(
                    "need {m2} distinct positive lengths summing to {m1}"
                )));
            }
            p
        }
        None => {
            let head: u64 = (1..m2 as u64).sum();
            if m1 < head + m2 as u64 {
                return Err(Error::BadPartition(format!(
                    "no default split of {m1} into {m2} distinct lengths"
                )));
            }
            let mut p: Vec<u64> = (1..m2 as u64).collect();
            p.push(m1 - head);
            p
        }
    };
    let j = params.j as u32;
    let slots: Vec<LabelSet> = (1..(1u32 << m2))
        .filter(|mask| mask.count_ones() >= m2 - j)
        .map(LabelSet)
        .collect();
    let interior = LabelSet((1u32 << m2) - 1);
    let mut h = LabeledHypergraph::new(m2);
    let mut next_vertex = 0u32;
    let mut next_edge = 0u32;
    for (idx, &t) in parts.iter().enumerate() {
        let i = idx as u32 + 1;
        let end1 = window_label(i, j + 1, m2);
        let back_start = (i + m2 - 1 - j) % m2 + 1;
        let end2 = window_label(back_start, j + 1, m2);
        build_chain(&mut h, &mut next_vertex, &mut next_edge, t, &slots, interior, end1, end2)?;
    }
    add_isolated_label_vertices(&mut h)?;
    certify(h, &params, None, None)
}

/// The two-label chain: one chain of m1 edges with two adjacent interior
/// defects and distinct singleton end labels.
pub fn build_m2_2_chain(m1: u64, n1: u32) -> Result<ConstructionReport> {
    let params = partition::params(n1, 2)?;
    if n1 != 3 {
        return Err(Error::WrongCase("two-label chain needs edge size 3".into()));
    }
    if m1 < 5 {
        return Err(Error::TooFewEdges { minimum: 5, got: m1 });
    }
    let full = LabelSet(0b11);
    let one = LabelSet(0b01);
    let two = LabelSet(0b10);
    let mut h = LabeledHypergraph::new(2);
    let mut next_vertex = 0u32;
    let mut joints = Vec::new();
    for a in 1..m1 {
        let label = match a {
            1 => one,
            2 => two,
            _ => full,
        };
        h.add_vertex(next_vertex, Some(label))?;
        joints.push(next_vertex);
        next_vertex += 1;
    }
    for a in 0..m1 {
        let mut members = Vec::new();
        if a > 0 {
            members.push(joints[(a - 1) as usize]);
        }
        if a + 1 < m1 {
            members.push(joints[a as usize]);
        }
        h.add_vertex(next_vertex, Some(full))?;
        members.push(next_vertex);
        next_vertex += 1;
        if a == 0 {
            h.add_vertex(next_vertex, Some(one))?;
            members.push(next_vertex);
            next_vertex += 1;
        }
        if a + 1 == m1 {
            h.add_vertex(next_vertex, Some(two))?;
            members.push(next_vertex);
            next_vertex += 1;
        }
        h.add_edge(a as u32, &members)?;
    }
    add_isolated_label_vertices(&mut h)?;
    certify(h, &params, None, None)
}

/// The odd-alphabet cycle: m1 edges in a single cycle whose joint vertices
/// are fully labelled except for a run of single-element defects with one
/// deliberate skip, which kills rotations and reflections.
pub fn build_odd_m2_cycle(m1: u64, n1: u32, m2: u32) -> Result<ConstructionReport> {
    let params = partition::params(n1, m2)?;
    if m2 % 2 == 0 || m2 < 3 || params.k != 0 || !params.is_extreme() {
        return Err(Error::WrongCase(
            "cycle family needs an odd alphabet of size at least 3 with k = 0 at the extreme j"
                .into(),
        ));
    }
    if m1 < m2 as u64 + 3 {
        return Err(Error::TooFewEdges { minimum: m2 as u64 + 3, got: m1 });
    }
    let j = params.j as u32;
    let full = (1u32 << m2) - 1;
    let slots: Vec<LabelSet> = (1..(1u32 << m2))
        .filter(|mask| mask.count_ones() >= m2 - j)
        .map(LabelSet)
        .collect();
    let mut h = LabeledHypergraph::new(m2);
    // Joint vertex v_a sits in edges a and a+1 (1-based, wrapping).
    for a in 1..=m1 as u32 {
        let label = if (1..m2).contains(&a) || a == m2 + 1 {
            let missing = if a == m2 + 1 { m2 } else { a };
            LabelSet(full ^ (1 << (missing - 1)))
        } else {
            LabelSet(full)
        };
        h.add_vertex(a - 1, Some(label))?;
    }
    let mut next_vertex = m1 as u32;
    for a in 1..=m1 as u32 {
        let prev = (a + m1 as u32 - 2) % m1 as u32;
        let mut members = vec![prev, a - 1];
        for slot in &slots {
            h.add_vertex(next_vertex, Some(*slot))?;
            members.push(next_vertex);
            next_vertex += 1;
        }
        h.add_edge(a - 1, &members)?;
    }
    add_isolated_label_vertices(&mut h)?;
    certify(h, &params, None, None)
}

/// Simple graph on vertices 0..n with edges stored as ordered pairs.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    pub n: u64,
    pub edges: BTreeSet<(u32, u32)>,
}

impl SimpleGraph {
    fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.n as usize];
        for &(u, v) in &self.edges {
            d[u as usize] += 1;
            d[v as usize] += 1;
        }
        d
    }

    fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n as usize];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut seen = vec![false; self.n as usize];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }

    fn to_hypergraph(&self) -> Result<LabeledHypergraph> {
        let mut h = LabeledHypergraph::new(0);
        for v in 0..self.n as u32 {
            h.add_vertex(v, None)?;
        }
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            h.add_edge(i as u32, &[u, v])?;
        }
        Ok(h)
    }

    fn is_asymmetric(&self) -> Result<bool> {
        Ok(engine::automorphisms(&self.to_hypergraph()?)?.is_asymmetric)
    }
}

/// One pairing-model draw of an s-regular graph; None on loops or
/// duplicate edges.
fn pairing_draw(s: u64, t: u64, rng: &mut ChaCha8Rng) -> Option<SimpleGraph> {
    let mut points: Vec<u32> = (0..t as u32).flat_map(|v| std::iter::repeat(v).take(s as usize)).collect();
    points.shuffle(rng);
    let mut edges = BTreeSet::new();
    for pair in points.chunks(2) {
        let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if u == v || !edges.insert((u, v)) {
            return None;
        }
    }
    Some(SimpleGraph { n: t, edges })
}

/// Random connected asymmetric s-regular graph on t vertices.
fn asymmetric_regular(s: u64, t: u64, rng: &mut ChaCha8Rng) -> Result<SimpleGraph> {
    for _ in 0..GRAPH_ATTEMPTS {
        if let Some(g) = pairing_draw(s, t, rng) {
            if g.is_connected() && g.is_asymmetric()? {
                return Ok(g);
            }
        }
    }
    Err(Error::RetriesExhausted(GRAPH_ATTEMPTS))
}

/// Asymmetric s-regular graph minus one edge, still connected and
/// asymmetric; the two endpoints become the deficient vertices.
fn asymmetric_regular_minus_edge(s: u64, t: u64, rng: &mut ChaCha8Rng) -> Result<SimpleGraph> {
    for _ in 0..32 {
        let g = asymmetric_regular(s, t, rng)?;
        for cut in g.edges.iter().copied().collect::<Vec<_>>() {
            let mut trimmed = g.clone();
            trimmed.edges.remove(&cut);
            if trimmed.is_connected() && trimmed.is_asymmetric()? {
                return Ok(trimmed);
            }
        }
    }
    Err(Error::RetriesExhausted(32))
}

/// Distinct piece sizes summing to total, each at least floor, even when
/// required; lexicographically smallest with the surplus on the last.
fn distinct_piece_sizes(total: u64, pieces: u64, floor: u64, even: bool) -> Result<Vec<u64>> {
    let step = if even { 2 } else { 1 };
    let start = if even { floor + floor % 2 } else { floor };
    let sizes: Vec<u64> = (0..pieces).map(|i| start + i * step).collect();
    let minimum: u64 = sizes.iter().sum();
    if minimum > total {
        return Err(Error::TooFewEdges { minimum, got: total });
    }
    let surplus = total - minimum;
    if even && surplus % 2 == 1 {
        return Err(Error::ParityViolation(total as i64));
    }
    let mut sizes = sizes;
    *sizes.last_mut().expect("at least one piece") += surplus;
    Ok(sizes)
}

/// Graph with t vertices, psi of degree s-1 and the rest of degree s,
/// asymmetric and certified. Even-parity deficiency splits into distinct
/// pieces each missing one edge; odd products attach fresh vertices to
/// disjoint groups of deficient vertices.
fn build_psi_graph(
    psi: u64,
    s: u64,
    t: u64,
    floor: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SimpleGraph> {
    if (s * t).saturating_sub(psi) % 2 != 0 || psi > s * t {
        return Err(Error::ParityViolation(s as i64 * t as i64 - psi as i64));
    }
    if psi == 0 {
        if t < floor {
            return Err(Error::TooFewEdges { minimum: floor, got: t });
        }
        return asymmetric_regular(s, t, rng);
    }
    if (s * t) % 2 == 0 {
        let pieces = psi / 2;
        let sizes = distinct_piece_sizes(t, pieces, floor, s % 2 == 1)?;
        let mut edges = BTreeSet::new();
        let mut offset = 0u32;
        for &size in &sizes {
            let piece = asymmetric_regular_minus_edge(s, size, rng)?;
            for &(u, v) in &piece.edges {
                edges.insert((u + offset, v + offset));
            }
            offset += size as u32;
        }
        let g = SimpleGraph { n: t, edges };
        // Distinct piece sizes keep the components non-isomorphic, but the
        // union is certified as a whole anyway.
        if !g.is_asymmetric()? {
            return Err(Error::CertificationFailed(
                "piece union admits an automorphism".into(),
            ));
        }
        return Ok(g);
    }
    // Odd product: build the heavier-deficiency graph on t - psi vertices,
    // then attach psi fresh vertices to disjoint groups of s-1 deficient
    // vertices each.
    for _ in 0..8 {
        let base = build_psi_graph(psi * (s - 1), s, t - psi, floor, rng)?;
        let degrees = base.degrees();
        let deficient: Vec<u32> = (0..base.n as u32)
            .filter(|&v| degrees[v as usize] == s - 1)
            .collect();
        if deficient.len() as u64 != psi * (s - 1) {
            return Err(Error::Domain("deficiency bookkeeping failed".into()));
        }
        let mut g = SimpleGraph { n: t, edges: base.edges.clone() };
        for (i, group) in deficient.chunks((s - 1) as usize).enumerate() {
            let fresh = (t - psi) as u32 + i as u32;
            for &v in group {
                g.edges.insert((v.min(fresh), v.max(fresh)));
            }
        }
        if g.is_asymmetric()? {
            return Ok(g);
        }
    }
    Err(Error::RetriesExhausted(8))
}

/// A dualized regular structure: uniform hypergraph whose edges pairwise
/// meet in at most one vertex, every automorphism fixing all edges.
#[derive(Debug, Clone)]
pub struct RegularAsymmetric {
    pub hypergraph: LabeledHypergraph,
    pub graph: SimpleGraph,
    /// Edge ids meeting one fewer other edge than the rest.
    pub deficient_edges: Vec<u32>,
    pub seed: u64,
    pub t_floor: u64,
}

/// Builds an asymmetric graph with psi vertices of degree s-1 and the rest
/// of degree s, then dualizes: graph vertices become edges, graph edges
/// become degree-2 vertices, and fresh degree-1 vertices pad every edge to
/// size n1. All labels are left empty; the certificate requires every
/// automorphism to fix every edge.
pub fn build_regular_asymmetric(
    psi: u64,
    s: u64,
    t: u64,
    n1: u32,
    seed: u64,
    t_floor: Option<u64>,
) -> Result<RegularAsymmetric> {
    if s < 3 {
        return Err(Error::Domain("need degree at least 3".into()));
    }
    if (n1 as u64) < s {
        return Err(Error::Domain("edge size must be at least the degree".into()));
    }
    let floor = t_floor.unwrap_or_else(|| default_regular_floor(s));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = build_psi_graph(psi, s, t, floor, &mut rng)?;
    let (h, deficient_edges) = dualize(&graph, n1, 0, &BTreeMap::new(), &[])?;
    let report = engine::automorphisms(&h)?;
    if !report.all_edges_fixed() {
        return Err(Error::CertificationFailed(
            "dualized hypergraph moves an edge".into(),
        ));
    }
    Ok(RegularAsymmetric { hypergraph: h, graph, deficient_edges, seed, t_floor: floor })
}

/// Dualizes a graph into an n1-uniform hypergraph: one edge per graph
/// vertex, one degree-2 vertex per graph edge, degree-1 padding. Degree-2
/// labels come from deg2_labels (by padded order, default full), per-edge
/// degree-1 labels from slot_labels; with m2 = 0 everything is unlabeled.
fn dualize(
    g: &SimpleGraph,
    n1: u32,
    m2: u32,
    slot_labels: &BTreeMap<u32, Vec<LabelSet>>,
    deg2_labels: &[LabelSet],
) -> Result<(LabeledHypergraph, Vec<u32>)> {
    let mut h = LabeledHypergraph::new(m2);
    let degrees = g.degrees();
    let full = LabelSet(if m2 == 0 { 0 } else { (1u32 << m2) - 1 });
    let mut members: BTreeMap<u32, Vec<u32>> = (0..g.n as u32).map(|v| (v, Vec::new())).collect();
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        let id = i as u32;
        let label = if m2 == 0 {
            None
        } else if let Some(l) = deg2_labels.get(i) {
            Some(*l)
        } else {
            Some(full)
        };
        h.add_vertex(id, label)?;
        members.get_mut(&u).unwrap().push(id);
        members.get_mut(&v).unwrap().push(id);
    }
    let mut next_vertex = g.edges.len() as u32;
    let mut deficient = Vec::new();
    for v in 0..g.n as u32 {
        let mut edge_members = members.remove(&v).unwrap();
        let pads = n1 as u64 - degrees[v as usize];
        let slots = slot_labels.get(&v);
        for p in 0..pads {
            let label = if m2 == 0 {
                None
            } else {
                Some(*slots.and_then(|s| s.get(p as usize)).unwrap_or(&full))
            };
            h.add_vertex(next_vertex, label)?;
            edge_members.push(next_vertex);
            next_vertex += 1;
        }
        h.add_edge(v, &edge_members)?;
        if degrees[v as usize] < s_of(&degrees) {
            deficient.push(v);
        }
    }
    Ok((h, deficient))
}

/// The regular degree of a near-regular degree sequence: its maximum.
fn s_of(degrees: &[u64]) -> u64 {
    degrees.iter().copied().max().unwrap_or(0)
}

/// The construction for k >= 1 at the extreme j: a dualized near-regular
/// structure with case-specific extra labels chosen by the parities of
/// k * m1 and m2.
pub fn build_k1_jlarge(
    m1: u64,
    n1: u32,
    m2: u32,
    seed: u64,
    t_floor: Option<u64>,
) -> Result<ConstructionReport> {
    let params = partition::params(n1, m2)?;
    if params.k < 1 || !params.is_extreme() {
        return Err(Error::WrongCase(
            "near-regular family needs k >= 1 at the extreme j".into(),
        ));
    }
    let k = params.k;
    let s = k + 2;
    let km1_even = (k * m1) % 2 == 0;
    let m2_odd = m2 % 2 == 1;
    let psi = match (km1_even, m2_odd) {
        (true, false) => m2 as u64,
        (true, true) => 0,
        (false, false) => m2 as u64 + 1,
        (false, true) => m2 as u64,
    };
    let floor = t_floor.unwrap_or_else(|| default_regular_floor(s));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = build_psi_graph(psi, s, m1, floor, &mut rng)?;
    let degrees = graph.degrees();
    let deficient: Vec<u32> = (0..graph.n as u32)
        .filter(|&v| degrees[v as usize] == s - 1)
        .collect();
    if deficient.len() as u64 != psi {
        return Err(Error::Domain("deficiency bookkeeping failed".into()));
    }

    let j = params.j as u32;
    let base: Vec<LabelSet> = (1..(1u32 << m2))
        .filter(|mask| mask.count_ones() >= m2 - j)
        .map(LabelSet)
        .collect();
    if base.len() as u64 != n1 as u64 - k - 2 {
        return Err(Error::Domain("slot label count mismatch".into()));
    }
    let mut slot_labels: BTreeMap<u32, Vec<LabelSet>> = BTreeMap::new();
    for v in 0..graph.n as u32 {
        slot_labels.insert(v, base.clone());
    }
    let extra_len = (m2 as i64 - params.j - 1) as u32;
    for (idx, &e) in deficient.iter().enumerate() {
        let i = idx as u32 + 1;
        let extra = if !km1_even && !m2_odd && i == m2 + 1 {
            LabelSet::EMPTY
        } else {
            window_label(i, extra_len, m2)
        };
        slot_labels.get_mut(&e).unwrap().push(extra);
    }
    let deg2_labels: Vec<LabelSet> = if psi == 0 {
        // The all-even case with no deficiencies takes its distinguishing
        // marks as single-element defects on the first m2 joint vertices.
        let full = (1u32 << m2) - 1;
        let count = graph.edges.len();
        if count < m2 as usize {
            return Err(Error::Domain("too few joint vertices for defects".into()));
        }
        (0..count as u32)
            .map(|i| {
                if i < m2 {
                    LabelSet(full ^ (1 << i))
                } else {
                    LabelSet(full)
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let (mut h, _) = dualize(&graph, n1, m2, &slot_labels, &deg2_labels)?;
    add_isolated_label_vertices(&mut h)?;
    let report = certify(h, &params, Some(seed), None)?;

    // The achieved block size must hit the advertised epsilon exactly.
    let two_pow = BigRational::from_integer(BigInt::from(1u64) << (m2 - 1));
    let shift = match (km1_even, m2_odd) {
        (true, false) => BigRational::from_integer(BigInt::from(0)),
        (true, true) => BigRational::from_integer(BigInt::from(1)),
        _ => BigRational::new(BigInt::from(1), BigInt::from(2)),
    };
    let expected =
        params.r.clone() * BigRational::from_integer(BigInt::from(m1)) + two_pow - shift;
    if report.n2 != expected {
        return Err(Error::CertificationFailed(format!(
            "achieved block size {} differs from the target {}",
            report.n2, expected
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::rational;
    use num_traits::One;

    #[test]
    fn single_label_ring_values() {
        let spec = RingSpec::new(2, 1, 6).unwrap();
        let report = ring_report(&spec).unwrap();
        assert_eq!(report.values.total_value, rational(-3, 1));
        assert_eq!(report.n2, rational(3, 1));
        assert!(report.certificate.is_asymmetric);
        let spec = RingSpec::new(2, 1, 9).unwrap();
        let report = ring_report(&spec).unwrap();
        assert_eq!(report.values.total_value, rational(-3, 1));
        assert!(matches!(
            RingSpec::new(2, 1, 5),
            Err(Error::TooFewEdges { minimum: 6, got: 5 })
        ));
    }

    #[test]
    fn three_label_ring_weight_and_value() {
        // n1 = 3, m2 = 3: j = 0, k = 0, r = 2; 7 edges leave one trailing
        // window over a cyclic core of 6.
        let spec = RingSpec::new(3, 3, 7).unwrap();
        let h = build_ring(&spec).unwrap();
        assert_eq!(h.total_weight().unwrap(), 6 * 3 * 2 - 2 * 3);
        let report = ring_report(&spec).unwrap();
        assert_eq!(
            report.values.total_value,
            rational(30 - 2 * 3 * 7, 1)
        );
        assert!(report.values.total_value >= spec.params.omega());
    }

    #[test]
    fn delta_packs_catalogue_and_ring() {
        let report = build_delta(30, 2, 1, 8).unwrap();
        assert_eq!(report.n2, rational(31, 1));
        assert!(report.certificate.is_asymmetric);
        assert!(report.balanced);
        // Ring of 9 edges at value -3, three trees of value 1, one isolated
        // vertex of weight 1.
        assert_eq!(report.values.total_value, rational(1, 1));
        assert_eq!(report.values.components.len(), 4);
        assert_eq!(report.error_bound, Some(rational(19, 4)));

        let report = build_delta(6, 2, 1, 8).unwrap();
        assert_eq!(report.n2, rational(4, 1));
        assert_eq!(report.error_bound, Some(rational(5, 1)));

        assert!(matches!(build_delta(5, 2, 1, 8), Err(Error::TooSmallM1 { .. })));
        assert!(matches!(build_delta(40, 2, 1, 6), Err(Error::CatalogueExhausted(6))));
    }

    #[test]
    fn tail_extension_on_labeled_path() {
        let mut h = LabeledHypergraph::new(1);
        h.add_vertex(0, Some(LabelSet(1))).unwrap();
        h.add_vertex(1, Some(LabelSet::EMPTY)).unwrap();
        h.add_vertex(2, Some(LabelSet::EMPTY)).unwrap();
        h.add_edge(0, &[0, 1]).unwrap();
        h.add_edge(1, &[1, 2]).unwrap();
        let mut g = extend_tail(&h).unwrap();
        assert_eq!(g.edge_count(), 3);
        for _ in 0..3 {
            g = extend_tail(&g).unwrap();
        }
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.total_weight().unwrap(), 1);

        let mut sym = LabeledHypergraph::new(1);
        for v in 0..3 {
            sym.add_vertex(v, Some(LabelSet::EMPTY)).unwrap();
        }
        sym.add_edge(0, &[0, 1]).unwrap();
        sym.add_edge(1, &[1, 2]).unwrap();
        assert!(matches!(extend_tail(&sym), Err(Error::SymmetricInput(_))));

        // A ring has no degree-1 vertex anywhere, so no tail exists.
        let ring = build_ring(&RingSpec::new(2, 1, 7).unwrap()).unwrap();
        assert!(matches!(extend_tail(&ring), Err(Error::NoTail)));
    }

    #[test]
    fn even_chain_family_minimal_instance() {
        let report = build_even_m2_chains(10, 7, 4, None).unwrap();
        assert_eq!(report.n2, rational(58, 1));
        assert!(report.certificate.is_asymmetric);
        assert!(report.pi_sweep.tau_asymmetric);
        assert_eq!(report.values.components.len(), 4);
        for c in &report.values.components {
            assert_eq!(c.value, rational(0, 1));
        }
        assert!(matches!(
            build_even_m2_chains(10, 7, 4, Some(vec![2, 2, 3, 3])),
            Err(Error::BadPartition(_))
        ));
        assert!(matches!(
            build_even_m2_chains(9, 7, 4, None),
            Err(Error::BadPartition(_))
        ));
    }

    #[test]
    fn two_label_chain_values() {
        let report = build_m2_2_chain(6, 3).unwrap();
        assert_eq!(report.n2, rational(13, 1));
        assert_eq!(report.values.components.len(), 1);
        assert_eq!(report.values.components[0].value, rational(-2, 1));
        assert!(report.balanced);
        assert!(matches!(
            build_m2_2_chain(4, 3),
            Err(Error::TooFewEdges { minimum: 5, got: 4 })
        ));
    }

    #[test]
    fn odd_cycle_family_minimal_instance() {
        let report = build_odd_m2_cycle(10, 6, 3).unwrap();
        assert_eq!(report.n2, rational(43, 1));
        assert_eq!(report.values.components.len(), 1);
        assert_eq!(report.values.components[0].value, rational(-3, 1));
        assert!(report.certificate.is_asymmetric);
        assert!(matches!(
            build_odd_m2_cycle(5, 6, 3),
            Err(Error::TooFewEdges { .. })
        ));

        // Removing every defect restores a rotational symmetry.
        let mut plain = LabeledHypergraph::new(3);
        for v in report.hypergraph.vertices() {
            let label = if v.label != Some(LabelSet(0)) && report.hypergraph.degree(report.hypergraph.vertex_position(v.id).unwrap()) == 2 {
                Some(LabelSet(0b111))
            } else {
                v.label
            };
            plain.add_vertex(v.id, label).unwrap();
        }
        for e in report.hypergraph.edges() {
            plain.add_edge(e.id, &e.vertices).unwrap();
        }
        assert!(!engine::automorphisms(&plain).unwrap().is_asymmetric);
    }

    #[test]
    fn regular_family_certificate() {
        let built = build_regular_asymmetric(0, 3, 12, 3, 7, Some(12)).unwrap();
        assert_eq!(built.hypergraph.edge_count(), 12);
        assert_eq!(built.hypergraph.uniform_size().unwrap(), Some(3));
        let report = engine::automorphisms(&built.hypergraph).unwrap();
        assert!(report.all_edges_fixed());
        assert!(built.deficient_edges.is_empty());

        assert!(matches!(
            build_regular_asymmetric(1, 4, 9, 4, 7, Some(8)),
            Err(Error::ParityViolation(_))
        ));
    }

    #[test]
    fn k1_family_even_even_case() {
        // m2 = 2, k = 1 (n1 = 4), m1 = 12: k m1 even, m2 even.
        let report = build_k1_jlarge(12, 4, 2, 11, Some(10)).unwrap();
        assert_eq!(report.n2, rational(32, 1));
        assert!(report.certificate.is_asymmetric);
        assert!(report.pi_sweep.tau_asymmetric);
        assert!(report.balanced);
        assert_eq!(report.seed, Some(11));
    }

    #[test]
    fn piece_sizes_are_distinct_and_parity_clean() {
        assert_eq!(distinct_piece_sizes(42, 3, 12, true).unwrap(), vec![12, 14, 16]);
        assert_eq!(distinct_piece_sizes(45, 3, 12, false).unwrap(), vec![12, 13, 20]);
        assert!(matches!(
            distinct_piece_sizes(20, 3, 12, true),
            Err(Error::TooFewEdges { .. })
        ));
    }

    #[test]
    fn delta_error_bound_formula() {
        // Error = m2^2 + min_R * v_{zeta+1} - omega, all exact.
        let report = build_delta(30, 2, 1, 8).unwrap();
        let expected = BigRational::one() + rational(6, 1) * rational(1, 8) - rational(-3, 1);
        assert_eq!(report.error_bound, Some(expected));
    }
}
