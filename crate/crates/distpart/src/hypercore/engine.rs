//! Exact automorphism engine: color refinement with individualization,
//! automorphism generators, exact group order, orbits, and a canonical form.
//!
//! Nodes are vertices (positions 0..nv) and edges (positions nv..nv+ne) of a
//! bipartite incidence structure. Automorphisms act on both parts at once, so
//! duplicate edges produce a nontrivial group even when the vertex action is
//! trivial. Canonical byte strings are equal exactly for label-preserving
//! isomorphic hypergraphs over the same label universe.

use super::LabeledHypergraph;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use std::collections::BTreeMap;

/// Default individualization-search node budget.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// One automorphism, as position permutations of the vertex and edge lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorPair {
    pub vertex_perm: Vec<usize>,
    pub edge_perm: Vec<usize>,
}

/// Full description of the label-exact automorphism group.
#[derive(Debug, Clone)]
pub struct AutomorphismReport {
    pub generators: Vec<GeneratorPair>,
    pub group_order: BigUint,
    pub is_asymmetric: bool,
    /// Sorted orbits of vertex positions.
    pub vertex_orbits: Vec<Vec<usize>>,
    /// Sorted orbits of edge positions.
    pub edge_orbits: Vec<Vec<usize>>,
}

impl AutomorphismReport {
    /// True when every edge position is fixed by the whole group.
    pub fn all_edges_fixed(&self) -> bool {
        self.edge_orbits.iter().all(|o| o.len() == 1)
    }
}

/// Engine output: the group report plus the canonical byte string.
#[derive(Debug, Clone)]
pub struct EngineOutput {
    pub report: AutomorphismReport,
    pub canonical: Vec<u8>,
}

/// Computes the automorphism report with the default budget.
pub fn automorphisms(h: &LabeledHypergraph) -> Result<AutomorphismReport> {
    automorphisms_with_budget(h, DEFAULT_NODE_BUDGET)
}

pub fn automorphisms_with_budget(h: &LabeledHypergraph, budget: u64) -> Result<AutomorphismReport> {
    Ok(run(h, budget)?.report)
}

/// Canonical byte string with the default budget.
pub fn canonical_form(h: &LabeledHypergraph) -> Result<Vec<u8>> {
    canonical_form_with_budget(h, DEFAULT_NODE_BUDGET)
}

pub fn canonical_form_with_budget(h: &LabeledHypergraph, budget: u64) -> Result<Vec<u8>> {
    Ok(run(h, budget)?.canonical)
}

/// Label-exact isomorphism test via canonical forms.
pub fn is_isomorphic(a: &LabeledHypergraph, b: &LabeledHypergraph) -> Result<bool> {
    if a.m2() != b.m2()
        || a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
    {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// Checks a claimed automorphism by replay: labels preserved and every edge
/// mapped onto the vertex set of its image edge.
pub fn verify_generator(h: &LabeledHypergraph, g: &GeneratorPair) -> bool {
    let nv = h.vertex_count();
    let ne = h.edge_count();
    if g.vertex_perm.len() != nv || g.edge_perm.len() != ne {
        return false;
    }
    let mut seen = vec![false; nv];
    for &img in &g.vertex_perm {
        if img >= nv || seen[img] {
            return false;
        }
        seen[img] = true;
    }
    let mut seen_e = vec![false; ne];
    for &img in &g.edge_perm {
        if img >= ne || seen_e[img] {
            return false;
        }
        seen_e[img] = true;
    }
    for (i, v) in h.vertices().iter().enumerate() {
        if h.vertices()[g.vertex_perm[i]].label != v.label {
            return false;
        }
    }
    for (j, e) in h.edges().iter().enumerate() {
        let mut image: Vec<u32> = e
            .vertices
            .iter()
            .map(|vid| {
                let p = h.vertex_position(*vid).unwrap();
                h.vertices()[g.vertex_perm[p]].id
            })
            .collect();
        image.sort_unstable();
        if image != h.edges()[g.edge_perm[j]].vertices {
            return false;
        }
    }
    true
}

/// Outcome of testing every nonidentity permutation of the label universe:
/// `tau_asymmetric` holds when no relabeled copy is isomorphic to the
/// original, i.e. the structure stays asymmetric even if the label classes
/// themselves may be permuted.
#[derive(Debug, Clone)]
pub struct LabelPermSweep {
    pub tau_asymmetric: bool,
    /// A permutation of 1..=m2 under which the relabeled hypergraph is
    /// isomorphic to the original, if one exists.
    pub violating_perm: Option<Vec<u32>>,
}

/// Sweeps all nonidentity permutations of {1..m2} and tests each relabeled
/// copy for isomorphism with the original.
pub fn label_perm_sweep(h: &LabeledHypergraph, budget: u64) -> Result<LabelPermSweep> {
    let m2 = h.m2();
    let base = canonical_form_with_budget(h, budget)?;
    let mut perm: Vec<u32> = (1..=m2).collect();
    loop {
        if !next_permutation(&mut perm) {
            break;
        }
        let relabeled = h.apply_label_permutation(&perm)?;
        if canonical_form_with_budget(&relabeled, budget)? == base {
            return Ok(LabelPermSweep {
                tau_asymmetric: false,
                violating_perm: Some(perm),
            });
        }
    }
    Ok(LabelPermSweep {
        tau_asymmetric: true,
        violating_perm: None,
    })
}

/// In-place lexicographic successor; false once the last permutation passed.
fn next_permutation(p: &mut [u32]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Runs the full search once, producing both the report and canonical form.
pub fn run(h: &LabeledHypergraph, budget: u64) -> Result<EngineOutput> {
    let ctx = Ctx::new(h, budget);
    let mut st = SearchState {
        visited: 0,
        first_rank: None,
        first_cert: None,
        best_cert: None,
        gens: Vec::new(),
    };
    let colors = ctx.initial_colors();
    let mut path = Vec::new();
    ctx.explore(colors, &mut path, &mut st)?;

    let canonical = st.best_cert.expect("search visits at least one leaf");
    let nv = ctx.nv;
    let ne = ctx.ne;
    let order = schreier_sims_order(ctx.n, &st.gens);
    let mut uf = UnionFind::new(ctx.n);
    for g in &st.gens {
        for x in 0..ctx.n {
            uf.union(x, g[x]);
        }
    }
    let mut vertex_orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..nv {
        vertex_orbits.entry(uf.find(x)).or_default().push(x);
    }
    let mut edge_orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in nv..ctx.n {
        edge_orbits.entry(uf.find(x)).or_default().push(x - nv);
    }
    let generators: Vec<GeneratorPair> = st
        .gens
        .iter()
        .map(|g| GeneratorPair {
            vertex_perm: g[..nv].to_vec(),
            edge_perm: g[nv..].iter().map(|&x| x - nv).collect(),
        })
        .collect();
    debug_assert!(generators.iter().all(|g| verify_generator(h, g)));
    let is_asymmetric = order.is_one();
    let _ = ne;
    Ok(EngineOutput {
        report: AutomorphismReport {
            generators,
            group_order: order,
            is_asymmetric,
            vertex_orbits: vertex_orbits.into_values().collect(),
            edge_orbits: edge_orbits.into_values().collect(),
        },
        canonical,
    })
}

struct Ctx<'a> {
    h: &'a LabeledHypergraph,
    nv: usize,
    n: usize,
    ne: usize,
    adj: Vec<Vec<u32>>,
    raw_keys: Vec<Vec<u64>>,
    budget: u64,
}

struct SearchState {
    visited: u64,
    first_rank: Option<Vec<u32>>,
    first_cert: Option<Vec<u8>>,
    best_cert: Option<Vec<u8>>,
    /// Verified automorphisms as node permutations.
    gens: Vec<Vec<usize>>,
}

impl<'a> Ctx<'a> {
    fn new(h: &'a LabeledHypergraph, budget: u64) -> Self {
        let nv = h.vertex_count();
        let ne = h.edge_count();
        let n = nv + ne;
        let mut adj = vec![Vec::new(); n];
        for (j, e) in h.edges().iter().enumerate() {
            for vid in &e.vertices {
                let v = h.vertex_position(*vid).unwrap();
                adj[v].push((nv + j) as u32);
                adj[nv + j].push(v as u32);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        let label_code = |p: usize| -> u64 {
            match h.vertices()[p].label {
                None => 0,
                Some(l) => 1 + l.0 as u64,
            }
        };
        let mut raw_keys = Vec::with_capacity(n);
        for v in 0..nv {
            let mut sizes: Vec<u64> = adj[v]
                .iter()
                .map(|&e| h.edges()[e as usize - nv].vertices.len() as u64)
                .collect();
            sizes.sort_unstable();
            let mut key = vec![0u64, label_code(v), adj[v].len() as u64];
            key.extend(sizes);
            raw_keys.push(key);
        }
        for (j, e) in h.edges().iter().enumerate() {
            let mut codes: Vec<u64> = e
                .vertices
                .iter()
                .map(|vid| label_code(h.vertex_position(*vid).unwrap()))
                .collect();
            codes.sort_unstable();
            let mut key = vec![1u64, e.vertices.len() as u64];
            key.extend(codes);
            raw_keys.push(key);
            let _ = j;
        }
        Ctx { h, nv, ne, n, adj, raw_keys, budget }
    }

    fn initial_colors(&self) -> Vec<u32> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| self.raw_keys[a].cmp(&self.raw_keys[b]));
        let mut colors = vec![0u32; self.n];
        let mut c = 0u32;
        for i in 0..order.len() {
            if i > 0 && self.raw_keys[order[i]] != self.raw_keys[order[i - 1]] {
                c += 1;
            }
            colors[order[i]] = c;
        }
        colors
    }

    fn color_count(colors: &[u32]) -> usize {
        colors.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// One round of neighborhood refinement until stable; colors stay dense
    /// and only ever split (old color is the primary sort key).
    fn refine(&self, colors: &mut Vec<u32>) {
        loop {
            let before = Self::color_count(colors);
            if before == self.n {
                return;
            }
            let mut sigs: Vec<(u32, Vec<u32>, usize)> = (0..self.n)
                .map(|v| {
                    let mut neigh: Vec<u32> =
                        self.adj[v].iter().map(|&u| colors[u as usize]).collect();
                    neigh.sort_unstable();
                    (colors[v], neigh, v)
                })
                .collect();
            sigs.sort();
            let mut c = 0u32;
            for i in 0..sigs.len() {
                if i > 0 && (sigs[i].0, &sigs[i].1) != (sigs[i - 1].0, &sigs[i - 1].1) {
                    c += 1;
                }
                colors[sigs[i].2] = c;
            }
            if c as usize + 1 == before {
                return;
            }
        }
    }

    fn explore(&self, mut colors: Vec<u32>, path: &mut Vec<usize>, st: &mut SearchState) -> Result<()> {
        st.visited += 1;
        if st.visited > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        self.refine(&mut colors);
        let k = Self::color_count(&colors);
        if k == self.n {
            self.leaf(&colors, st);
            return Ok(());
        }
        // Target cell: smallest non-singleton class, ties by color value.
        let mut sizes = vec![0u32; k];
        for &c in colors.iter() {
            sizes[c as usize] += 1;
        }
        let target = (0..k)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .expect("non-discrete coloring has a non-singleton cell");
        let members: Vec<usize> = (0..self.n)
            .filter(|&v| colors[v] as usize == target)
            .collect();
        let mut explored: Vec<usize> = Vec::new();
        for &cand in &members {
            if !explored.is_empty() && self.pruned(cand, &explored, path, st) {
                continue;
            }
            let mut child = colors.clone();
            child[cand] = k as u32;
            path.push(cand);
            self.explore(child, path, st)?;
            path.pop();
            explored.push(cand);
        }
        Ok(())
    }

    /// Sibling orbit pruning: candidate is skipped when a known automorphism
    /// fixing every node individualized so far maps it into the explored set.
    fn pruned(&self, cand: usize, explored: &[usize], path: &[usize], st: &SearchState) -> bool {
        let mut uf = UnionFind::new(self.n);
        for g in &st.gens {
            if path.iter().all(|&x| g[x] == x) {
                for x in 0..self.n {
                    uf.union(x, g[x]);
                }
            }
        }
        explored.iter().any(|&e| uf.find(e) == uf.find(cand))
    }

    fn leaf(&self, colors: &[u32], st: &mut SearchState) {
        let cert = self.cert_of(colors);
        match (&st.first_cert, &st.first_rank) {
            (None, _) => {
                st.first_cert = Some(cert.clone());
                st.first_rank = Some(colors.to_vec());
            }
            (Some(fc), Some(fr)) if *fc == cert => {
                let mut inv = vec![0usize; self.n];
                for (node, &r) in colors.iter().enumerate() {
                    inv[r as usize] = node;
                }
                let sigma: Vec<usize> = (0..self.n).map(|x| inv[fr[x] as usize]).collect();
                let nontrivial = sigma.iter().enumerate().any(|(x, &y)| x != y);
                if nontrivial && self.verify_node_perm(&sigma) && !st.gens.contains(&sigma) {
                    st.gens.push(sigma);
                }
            }
            _ => {}
        }
        if st.best_cert.as_ref().map_or(true, |b| cert < *b) {
            st.best_cert = Some(cert);
        }
    }

    fn cert_of(&self, colors: &[u32]) -> Vec<u8> {
        let mut inv = vec![0usize; self.n];
        for (node, &r) in colors.iter().enumerate() {
            inv[r as usize] = node;
        }
        let mut out = Vec::with_capacity(16 + 16 * self.n);
        out.extend(self.h.m2().to_le_bytes());
        out.extend((self.nv as u32).to_le_bytes());
        out.extend((self.ne as u32).to_le_bytes());
        for r in 0..self.n {
            let node = inv[r];
            let key = &self.raw_keys[node];
            out.extend((key.len() as u32).to_le_bytes());
            for &k in key {
                out.extend(k.to_le_bytes());
            }
            let mut neigh: Vec<u32> = self.adj[node].iter().map(|&u| colors[u as usize]).collect();
            neigh.sort_unstable();
            out.extend((neigh.len() as u32).to_le_bytes());
            for nr in neigh {
                out.extend(nr.to_le_bytes());
            }
        }
        out
    }

    fn verify_node_perm(&self, sigma: &[usize]) -> bool {
        for x in 0..self.n {
            if self.raw_keys[x] != self.raw_keys[sigma[x]] {
                return false;
            }
            let mut image: Vec<u32> = self.adj[x].iter().map(|&u| sigma[u as usize] as u32).collect();
            image.sort_unstable();
            if image != self.adj[sigma[x]] {
                return false;
            }
        }
        true
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

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

/// Exact group order from a list of permutation generators via a
/// Schreier-Sims stabilizer chain.
///
/// The chain level for base prefix b_0..b_{i-1} uses every known generator
/// fixing that prefix pointwise. Generators are added until every Schreier
/// generator of every level sifts to the identity through the levels below,
/// at which point the order is the product of the orbit sizes.
pub fn schreier_sims_order(n: usize, input: &[Vec<usize>]) -> BigUint {
    let mut bases: Vec<usize> = Vec::new();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for g in input {
        if !is_identity(g) && !gens.contains(g) {
            ensure_base(&mut bases, g);
            gens.push(g.clone());
        }
    }
    if gens.is_empty() {
        return BigUint::one();
    }
    loop {
        let levels = build_transversals(n, &bases, &gens);
        match find_unsifted_schreier_generator(&bases, &gens, &levels) {
            Some(h) => {
                ensure_base(&mut bases, &h);
                gens.push(h);
            }
            None => {
                let mut order = BigUint::one();
                for t in &levels {
                    order *= BigUint::from(t.len() as u64);
                }
                return order;
            }
        }
    }
}

/// Appends a base point moved by g when g fixes the whole current base.
fn ensure_base(bases: &mut Vec<usize>, g: &[usize]) {
    if bases.iter().all(|&b| g[b] == b) {
        let b = (0..g.len()).find(|&x| g[x] != x).expect("nonidentity moves a point");
        bases.push(b);
    }
}

fn effective<'a>(gens: &'a [Vec<usize>], bases: &[usize], level: usize) -> Vec<&'a Vec<usize>> {
    gens.iter()
        .filter(|g| bases[..level].iter().all(|&b| g[b] == b))
        .collect()
}

/// Orbit transversals: level i maps each point x in the orbit of bases[i]
/// (under generators fixing bases[..i]) to a group element sending bases[i]
/// to x.
fn build_transversals(n: usize, bases: &[usize], gens: &[Vec<usize>]) -> Vec<BTreeMap<usize, Vec<usize>>> {
    let mut levels = Vec::with_capacity(bases.len());
    for (i, &b) in bases.iter().enumerate() {
        let eff = effective(gens, bases, i);
        let mut tr: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        tr.insert(b, (0..n).collect());
        let mut queue = vec![b];
        while let Some(x) = queue.pop() {
            let tx = tr[&x].clone();
            for g in &eff {
                let y = g[x];
                if !tr.contains_key(&y) {
                    tr.insert(y, compose(g, &tx));
                    queue.push(y);
                }
            }
        }
        levels.push(tr);
    }
    levels
}

fn find_unsifted_schreier_generator(
    bases: &[usize],
    gens: &[Vec<usize>],
    levels: &[BTreeMap<usize, Vec<usize>>],
) -> Option<Vec<usize>> {
    for i in 0..bases.len() {
        let eff = effective(gens, bases, i);
        for (&x, tx) in &levels[i] {
            for s in &eff {
                let y = s[x];
                let ty = &levels[i][&y];
                let schreier = compose(&invert(ty), &compose(s, tx));
                if let Some(res) = strip(schreier, bases, levels, i + 1) {
                    return Some(res);
                }
            }
        }
    }
    None
}

/// Sifts g through levels from..; returns the nonidentity residue if the
/// sift gets stuck or ends nontrivially.
fn strip(
    g: Vec<usize>,
    bases: &[usize],
    levels: &[BTreeMap<usize, Vec<usize>>],
    from: usize,
) -> Option<Vec<usize>> {
    let mut g = g;
    for k in from..bases.len() {
        if is_identity(&g) {
            return None;
        }
        let x = g[bases[k]];
        match levels[k].get(&x) {
            None => return Some(g),
            Some(t) => g = compose(&invert(t), &g),
        }
    }
    if is_identity(&g) {
        None
    } else {
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::LabelSet;
    use num_traits::ToPrimitive;

    fn order_of(h: &LabeledHypergraph) -> u64 {
        automorphisms(h).unwrap().group_order.to_u64().unwrap()
    }

    fn path_graph(edges: usize) -> LabeledHypergraph {
        let mut h = LabeledHypergraph::new(0);
        for v in 0..=edges as u32 {
            h.add_vertex(v, None).unwrap();
        }
        for e in 0..edges as u32 {
            h.add_edge(e, &[e, e + 1]).unwrap();
        }
        h
    }

    fn cycle_graph(len: usize) -> LabeledHypergraph {
        let mut h = LabeledHypergraph::new(0);
        for v in 0..len as u32 {
            h.add_vertex(v, None).unwrap();
        }
        for e in 0..len as u32 {
            h.add_edge(e, &[e, (e + 1) % len as u32]).unwrap();
        }
        h
    }

    #[test]
    fn schreier_sims_known_orders() {
        // S_4 from adjacent transpositions on 4 points.
        let gens: Vec<Vec<usize>> = vec![
            vec![1, 0, 2, 3],
            vec![0, 2, 1, 3],
            vec![0, 1, 3, 2],
        ];
        assert_eq!(schreier_sims_order(4, &gens), BigUint::from(24u32));
        // Cyclic group of order 6.
        let rot: Vec<usize> = (0..6).map(|x| (x + 1) % 6).collect();
        assert_eq!(schreier_sims_order(6, &[rot.clone()]), BigUint::from(6u32));
        // Dihedral group of order 12.
        let refl: Vec<usize> = (0..6).map(|x| (6 - x) % 6).collect();
        assert_eq!(schreier_sims_order(6, &[rot, refl]), BigUint::from(12u32));
        // Direct product of disjoint transpositions: order 2^3.
        let t = |a: usize, b: usize| -> Vec<usize> {
            let mut p: Vec<usize> = (0..6).collect();
            p.swap(a, b);
            p
        };
        assert_eq!(
            schreier_sims_order(6, &[t(0, 1), t(2, 3), t(4, 5)]),
            BigUint::from(8u32)
        );
        assert_eq!(schreier_sims_order(5, &[]), BigUint::one());
    }

    #[test]
    fn path_group_order_two() {
        let rep = automorphisms(&path_graph(2)).unwrap();
        assert_eq!(rep.group_order, BigUint::from(2u32));
        assert!(!rep.is_asymmetric);
        assert_eq!(rep.generators.len(), 1);
        assert!(verify_generator(&path_graph(2), &rep.generators[0]));
    }

    #[test]
    fn cycle_group_is_dihedral() {
        for len in [3usize, 4, 5, 6, 8] {
            assert_eq!(order_of(&cycle_graph(len)), 2 * len as u64, "cycle {len}");
        }
    }

    #[test]
    fn star_group_order() {
        // Star with 4 leaves: S_4 on the leaf edges.
        let mut h = LabeledHypergraph::new(0);
        for v in 0..5 {
            h.add_vertex(v, None).unwrap();
        }
        for e in 1..5u32 {
            h.add_edge(e - 1, &[0, e]).unwrap();
        }
        assert_eq!(order_of(&h), 24);
    }

    #[test]
    fn complete_graph_group_order() {
        // K4 as a 2-uniform hypergraph: order 4! = 24.
        let mut h = LabeledHypergraph::new(0);
        for v in 0..4 {
            h.add_vertex(v, None).unwrap();
        }
        let mut id = 0;
        for a in 0..4u32 {
            for b in a + 1..4 {
                h.add_edge(id, &[a, b]).unwrap();
                id += 1;
            }
        }
        assert_eq!(order_of(&h), 24);
    }

    #[test]
    fn single_edge_matchings() {
        // m disjoint single-vertex edges: group S_m.
        let mut h = LabeledHypergraph::new(0);
        for v in 0..5 {
            h.add_vertex(v, None).unwrap();
            h.add_edge(v, &[v]).unwrap();
        }
        assert_eq!(order_of(&h), 120);
    }

    #[test]
    fn labels_break_symmetry() {
        // One 3-edge with labels {1}, {2}, {} is asymmetric; unlabeled is S_3.
        let mut labeled = LabeledHypergraph::new(2);
        labeled.add_vertex(0, Some(LabelSet::from_elements(&[1], 2).unwrap())).unwrap();
        labeled.add_vertex(1, Some(LabelSet::from_elements(&[2], 2).unwrap())).unwrap();
        labeled.add_vertex(2, Some(LabelSet::EMPTY)).unwrap();
        labeled.add_edge(0, &[0, 1, 2]).unwrap();
        let rep = automorphisms(&labeled).unwrap();
        assert!(rep.is_asymmetric);
        assert_eq!(rep.group_order, BigUint::one());

        let mut plain = LabeledHypergraph::new(0);
        for v in 0..3 {
            plain.add_vertex(v, None).unwrap();
        }
        plain.add_edge(0, &[0, 1, 2]).unwrap();
        assert_eq!(order_of(&plain), 6);
    }

    #[test]
    fn duplicate_edges_force_symmetry() {
        let mut h = LabeledHypergraph::new(0);
        h.add_vertex(0, None).unwrap();
        h.add_vertex(1, None).unwrap();
        h.add_edge(0, &[0, 1]).unwrap();
        h.add_edge(1, &[0, 1]).unwrap();
        let rep = automorphisms(&h).unwrap();
        assert!(!rep.is_asymmetric);
        // Vertex swap times edge swap: order 4.
        assert_eq!(rep.group_order, BigUint::from(4u32));
        assert!(!rep.all_edges_fixed());
    }

    #[test]
    fn smallest_asymmetric_tree_has_six_edges() {
        // The 7-vertex tree: path 0-1-2-3-4-5 with leaf 6 on vertex 2.
        let mut h = path_graph(5);
        h.add_vertex(6, None).unwrap();
        h.add_edge(5, &[2, 6]).unwrap();
        let rep = automorphisms(&h).unwrap();
        assert!(rep.is_asymmetric);
        assert!(rep.vertex_orbits.iter().all(|o| o.len() == 1));
    }

    #[test]
    fn orbits_partition_nodes() {
        let h = cycle_graph(5);
        let rep = automorphisms(&h).unwrap();
        assert_eq!(rep.vertex_orbits.len(), 1);
        assert_eq!(rep.vertex_orbits[0].len(), 5);
        assert_eq!(rep.edge_orbits.len(), 1);
    }

    #[test]
    fn canonical_form_invariant_under_relabeling() {
        // Same tree inserted in two different vertex/edge orders.
        let mut a = LabeledHypergraph::new(1);
        let l1 = Some(LabelSet::from_elements(&[1], 1).unwrap());
        let l0 = Some(LabelSet::EMPTY);
        for (id, lab) in [(0, l1), (1, l0), (2, l1), (3, l1)] {
            a.add_vertex(id, lab).unwrap();
        }
        a.add_edge(0, &[0, 1]).unwrap();
        a.add_edge(1, &[1, 2]).unwrap();
        a.add_edge(2, &[2, 3]).unwrap();

        let mut b = LabeledHypergraph::new(1);
        for (id, lab) in [(10, l1), (7, l1), (5, l0), (2, l1)] {
            b.add_vertex(id, lab).unwrap();
        }
        b.add_edge(4, &[7, 10]).unwrap();
        b.add_edge(9, &[5, 7]).unwrap();
        b.add_edge(11, &[2, 5]).unwrap();

        assert!(is_isomorphic(&a, &b).unwrap());

        // Moving the empty label to an end vertex changes the class.
        let mut c = LabeledHypergraph::new(1);
        for (id, lab) in [(0, l0), (1, l1), (2, l1), (3, l1)] {
            c.add_vertex(id, lab).unwrap();
        }
        c.add_edge(0, &[0, 1]).unwrap();
        c.add_edge(1, &[1, 2]).unwrap();
        c.add_edge(2, &[2, 3]).unwrap();
        assert!(!is_isomorphic(&a, &c).unwrap());
    }

    #[test]
    fn canonical_form_separates_sizes() {
        let p3 = path_graph(3);
        let mut star = LabeledHypergraph::new(0);
        for v in 0..4 {
            star.add_vertex(v, None).unwrap();
        }
        for e in 1..4u32 {
            star.add_edge(e - 1, &[0, e]).unwrap();
        }
        assert!(!is_isomorphic(&p3, &star).unwrap());
    }

    #[test]
    fn label_perm_sweep_detects_swappable_labels() {
        // Path with end labels {1} and {2}: label-exact asymmetric, but the
        // swap (1 2) composed with the reflection is an isomorphism.
        let mut h = LabeledHypergraph::new(2);
        h.add_vertex(0, Some(LabelSet::from_elements(&[1], 2).unwrap())).unwrap();
        h.add_vertex(1, Some(LabelSet::EMPTY)).unwrap();
        h.add_vertex(2, Some(LabelSet::from_elements(&[2], 2).unwrap())).unwrap();
        h.add_edge(0, &[0, 1]).unwrap();
        h.add_edge(1, &[1, 2]).unwrap();
        let rep = automorphisms(&h).unwrap();
        assert!(rep.is_asymmetric);
        let sweep = label_perm_sweep(&h, DEFAULT_NODE_BUDGET).unwrap();
        assert!(!sweep.tau_asymmetric);
        assert_eq!(sweep.violating_perm, Some(vec![2, 1]));

        // Making one end heavier kills the swap.
        let mut g = LabeledHypergraph::new(2);
        g.add_vertex(0, Some(LabelSet::from_elements(&[1, 2], 2).unwrap())).unwrap();
        g.add_vertex(1, Some(LabelSet::EMPTY)).unwrap();
        g.add_vertex(2, Some(LabelSet::from_elements(&[2], 2).unwrap())).unwrap();
        g.add_edge(0, &[0, 1]).unwrap();
        g.add_edge(1, &[1, 2]).unwrap();
        let sweep = label_perm_sweep(&g, DEFAULT_NODE_BUDGET).unwrap();
        assert!(sweep.tau_asymmetric);
    }

    #[test]
    fn budget_is_enforced() {
        let h = cycle_graph(8);
        assert!(matches!(
            automorphisms_with_budget(&h, 2),
            Err(Error::BudgetExceeded(2))
        ));
    }

    #[test]
    fn petersen_graph_order_120() {
        // Outer 5-cycle, inner 5-cycle with step 2, spokes.
        let mut h = LabeledHypergraph::new(0);
        for v in 0..10 {
            h.add_vertex(v, None).unwrap();
        }
        let mut id = 0;
        for i in 0..5u32 {
            h.add_edge(id, &[i, (i + 1) % 5]).unwrap();
            id += 1;
        }
        for i in 0..5u32 {
            h.add_edge(id, &[5 + i, 5 + (i + 2) % 5]).unwrap();
            id += 1;
        }
        for i in 0..5u32 {
            h.add_edge(id, &[i, 5 + i]).unwrap();
            id += 1;
        }
        assert_eq!(order_of(&h), 120);
    }
}
