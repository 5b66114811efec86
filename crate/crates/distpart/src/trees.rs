//! Asymmetric tree counting: recurrences for rooted, unrooted, and
//! enriched identity trees, closed-form labelled counts, the catalogue of
//! positive-value labelled trees, contraction graphs with their edge bound,
//! and growth-constant estimation.

use crate::error::{Error, Result};
use crate::hypercore::{engine, LabelSet, LabeledHypergraph};
use crate::oracle;
use crate::partition::{self, defects, factorial, Params};
use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Which count a table column holds; all are indexed by edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Series {
    Unrooted,
    Rooted,
    EnrichedUnrooted,
    EnrichedPlanted,
}

/// Count series indexed by edge count (a tree with e edges has e+1
/// vertices).
#[derive(Debug, Clone)]
pub struct CountTable {
    pub max_edges: usize,
    pub series: BTreeMap<Series, Vec<BigUint>>,
}

impl CountTable {
    pub fn get(&self, series: Series, edges: usize) -> Option<&BigUint> {
        self.series.get(&series).and_then(|v| v.get(edges))
    }
}

/// Rooted identity tree counts u(n) for n = 0..=max_n vertices (u(0) = 0):
/// branches at the root are pairwise distinct rooted identity trees.
fn rooted_counts(max_n: usize) -> Vec<BigUint> {
    let mut u = vec![BigUint::zero(); max_n + 1];
    if max_n == 0 {
        return u;
    }
    // prod = product over processed k of (1 + x^k)^{u(k)}, truncated to
    // degree max_n - 1.
    let deg = max_n - 1;
    let mut prod = vec![BigUint::zero(); deg + 1];
    prod[0] = BigUint::one();
    for k in 1..=max_n {
        u[k] = prod[k - 1].clone();
        if k <= deg {
            prod = mul_binomial_factor(&prod, k, &u[k], deg);
        }
    }
    u
}

/// Multiplies the truncated polynomial by (1 + x^k)^count.
fn mul_binomial_factor(p: &[BigUint], k: usize, count: &BigUint, deg: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); deg + 1];
    let mut coef = BigUint::one();
    let mut i = 0usize;
    loop {
        let shift = i * k;
        if shift > deg {
            break;
        }
        if i > 0 {
            if BigUint::from(i as u64) > *count {
                break;
            }
            coef = coef * (count - BigUint::from((i - 1) as u64)) / BigUint::from(i as u64);
        }
        for x in 0..=deg - shift {
            if !p[x].is_zero() {
                out[x + shift] += &p[x] * &coef;
            }
        }
        i += 1;
    }
    out
}

/// Unrooted identity tree counts from the rooted series: subtract the
/// unordered pairs of rooted identity trees (edge-rooted objects and
/// root-orbit duplicates cancel together).
fn unrooted_from_rooted(u: &[BigUint]) -> Vec<BigUint> {
    let max_n = u.len() - 1;
    let mut t = vec![BigUint::zero(); max_n + 1];
    for n in 1..=max_n {
        let mut pairs = BigUint::zero();
        for a in 1..n {
            pairs += &u[a] * &u[n - a];
        }
        if n % 2 == 0 {
            pairs += &u[n / 2];
        }
        let half = pairs / BigUint::from(2u32);
        t[n] = &u[n] - &half;
    }
    t
}

/// Rooted and unrooted identity tree counts up to max_edges edges.
pub fn count_asymmetric_trees(max_edges: usize) -> CountTable {
    let u = rooted_counts(max_edges + 1);
    let t = unrooted_from_rooted(&u);
    let mut series = BTreeMap::new();
    series.insert(Series::Rooted, (0..=max_edges).map(|e| u[e + 1].clone()).collect());
    series.insert(Series::Unrooted, (0..=max_edges).map(|e| t[e + 1].clone()).collect());
    CountTable { max_edges, series }
}

/// Decoration multiplicities per vertex degree: weights[d] decorations are
/// available to a degree-d vertex. A decorated tree is asymmetric when no
/// nontrivial automorphism preserves every decoration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichmentSpec {
    pub weights: Vec<u64>,
}

impl EnrichmentSpec {
    /// One decoration at every degree up to max_degree: plain trees.
    pub fn plain(max_degree: usize) -> Self {
        EnrichmentSpec { weights: vec![1; max_degree + 1] }
    }

    pub fn weight(&self, degree: usize) -> u64 {
        self.weights.get(degree).copied().unwrap_or(0)
    }

    pub fn max_decorations(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }
}

/// Truncated bivariate polynomial in x (vertices) and y (branches).
struct Bivar {
    deg: usize,
    ycap: usize,
    c: Vec<Vec<BigUint>>,
}

impl Bivar {
    fn one(deg: usize, ycap: usize) -> Self {
        let mut c = vec![vec![BigUint::zero(); ycap + 1]; deg + 1];
        c[0][0] = BigUint::one();
        Bivar { deg, ycap, c }
    }

    fn get(&self, x: usize, y: usize) -> BigUint {
        if x <= self.deg && y <= self.ycap {
            self.c[x][y].clone()
        } else {
            BigUint::zero()
        }
    }

    /// Multiplies by (1 + y x^k)^count.
    fn mul_factor(&mut self, k: usize, count: &BigUint) {
        let mut powers: Vec<(usize, usize, BigUint)> = Vec::new();
        let mut coef = BigUint::one();
        let mut i = 0usize;
        loop {
            let shift = i * k;
            if shift > self.deg || i > self.ycap {
                break;
            }
            if i > 0 {
                if BigUint::from(i as u64) > *count {
                    break;
                }
                coef = coef * (count - BigUint::from((i - 1) as u64)) / BigUint::from(i as u64);
            }
            powers.push((shift, i, coef.clone()));
            i += 1;
        }
        let mut out = vec![vec![BigUint::zero(); self.ycap + 1]; self.deg + 1];
        for (shift, dy, coef) in &powers {
            for x in 0..=self.deg - shift {
                for y in 0..=self.ycap - dy {
                    if !self.c[x][y].is_zero() {
                        out[x + shift][y + dy] += &self.c[x][y] * coef;
                    }
                }
            }
        }
        self.c = out;
    }
}

/// Planted and unrooted asymmetric decorated tree counts up to max_edges.
/// Planted trees hang from a stem (the root's degree counts the stem);
/// unrooted counts decompose at the centroid, with the bicentroid pair term
/// for even orders.
pub fn count_enriched_trees(max_edges: usize, spec: &EnrichmentSpec) -> Result<CountTable> {
    if spec.weights.is_empty() {
        return Err(Error::Domain("enrichment needs at least one degree weight".into()));
    }
    let max_n = max_edges + 1;
    let ycap = (spec.weights.len() - 1).max(1);
    let deg = max_n - 1;

    let mut p = vec![BigUint::zero(); max_n + 1];
    let mut full = Bivar::one(deg, ycap);
    for n in 1..=max_n {
        let mut total = BigUint::zero();
        for d in 0..=ycap.min(n - 1) {
            let a = spec.weight(d + 1);
            if a > 0 {
                total += full.get(n - 1, d) * BigUint::from(a);
            }
        }
        p[n] = total;
        if n <= deg {
            let count = p[n].clone();
            full.mul_factor(n, &count);
        }
    }

    let mut unrooted = vec![BigUint::zero(); max_n + 1];
    let mut half = Bivar::one(deg, ycap);
    let mut half_k = 0usize;
    for n in 1..=max_n {
        let hbound = (n - 1) / 2;
        while half_k < hbound {
            half_k += 1;
            let count = p[half_k].clone();
            half.mul_factor(half_k, &count);
        }
        let mut total = BigUint::zero();
        for d in 0..=ycap.min(n.saturating_sub(1)) {
            let a = spec.weight(d);
            if a > 0 {
                total += half.get(n - 1, d) * BigUint::from(a);
            }
        }
        if n == 1 {
            // A single vertex has degree 0; the loop above covers d = 0.
        }
        if n % 2 == 0 {
            let pm = &p[n / 2];
            if !pm.is_zero() {
                total += pm * (pm - BigUint::one()) / BigUint::from(2u32);
            }
        }
        unrooted[n] = total;
    }

    let mut series = BTreeMap::new();
    series.insert(
        Series::EnrichedPlanted,
        (0..=max_edges).map(|e| p[e + 1].clone()).collect(),
    );
    series.insert(
        Series::EnrichedUnrooted,
        (0..=max_edges).map(|e| unrooted[e + 1].clone()).collect(),
    );
    Ok(CountTable { max_edges, series })
}

/// Closed-form weighted count of labelled trees on i+1 vertices with all
/// degrees in {1, 3}, each cubic vertex weighted a3: the cubic count is
/// pinned at (i-1)/2, so the count is C(i+1,(i-1)/2) (i-1)!/2^{(i-1)/2}
/// times a3^{(i-1)/2}. Defined for odd i >= 1.
pub fn labelled_count_formula(i: u64, a3: u64) -> Result<BigUint> {
    if i < 1 {
        return Err(Error::Domain("need i >= 1".into()));
    }
    if i % 2 == 0 {
        return Err(Error::EvenParameter(i));
    }
    let cubic = (i - 1) / 2;
    let count = binomial(BigUint::from(i + 1), BigUint::from(cubic)) * factorial(i - 1)
        / (BigUint::one() << cubic);
    Ok(count * BigUint::from(a3).pow(cubic as u32))
}

/// Ordered-forest counts: L(0) = 1 and L(n) = sum_{i>=1} a_i L(n-i), the
/// sequence recursion "a forest is empty or a first tree and a forest".
pub fn l_series(weights: &[BigUint], max_n: usize) -> Vec<BigUint> {
    let mut l = vec![BigUint::zero(); max_n + 1];
    l[0] = BigUint::one();
    for n in 1..=max_n {
        let mut s = BigUint::zero();
        for i in 1..=n.min(weights.len()) {
            s += &weights[i - 1] * &l[n - i];
        }
        l[n] = s;
    }
    l
}

/// Growth-constant fit for a count series s_i ~ alpha beta^i i^exponent.
#[derive(Debug, Clone)]
pub struct GrowthEstimate {
    pub beta: f64,
    pub alpha: f64,
    pub raw_ratio_variance: f64,
    pub corrected_ratio_variance: f64,
    pub samples: usize,
}

/// Fits beta as the intercept of consecutive ratios regressed on 1/i, and
/// alpha from mean log residuals over the tail. The corrected variance
/// divides each ratio by the model factor ((i+1)/i)^exponent; it should
/// shrink when the polynomial correction matches.
pub fn estimate_growth(series: &[BigUint], exponent: f64) -> Result<GrowthEstimate> {
    let vals: Vec<f64> = series.iter().map(|b| b.to_f64().unwrap_or(f64::INFINITY)).collect();
    let mut pts: Vec<(usize, f64)> = Vec::new();
    for i in 1..vals.len().saturating_sub(1) {
        let (a, b) = (vals[i], vals[i + 1]);
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            pts.push((i, b / a));
        } else {
            pts.clear();
        }
    }
    if pts.len() < 6 {
        return Err(Error::InsufficientData { needed: 6, got: pts.len() });
    }
    // Least squares for ratio = beta + c / i.
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|&(i, _)| 1.0 / i as f64).sum();
    let sy: f64 = pts.iter().map(|&(_, r)| r).sum();
    let sxx: f64 = pts.iter().map(|&(i, _)| (1.0 / i as f64).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|&(i, r)| r / i as f64).sum();
    let denom = n * sxx - sx * sx;
    let slope = if denom.abs() < f64::EPSILON { 0.0 } else { (n * sxy - sx * sy) / denom };
    let beta = (sy - slope * sx) / n;

    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let var = |xs: &[f64]| {
        let m = mean(xs);
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64
    };
    let raw: Vec<f64> = pts.iter().map(|&(_, r)| r).collect();
    let corrected: Vec<f64> = pts
        .iter()
        .map(|&(i, r)| r / ((i as f64 + 1.0) / i as f64).powf(exponent))
        .collect();

    // Alpha from the tail half in log space.
    let tail: Vec<f64> = pts[pts.len() / 2..]
        .iter()
        .map(|&(i, _)| vals[i].ln() - i as f64 * beta.ln() - exponent * (i as f64).ln())
        .collect();
    let alpha = mean(&tail).exp();

    Ok(GrowthEstimate {
        beta,
        alpha,
        raw_ratio_variance: var(&raw),
        corrected_ratio_variance: var(&corrected),
        samples: pts.len(),
    })
}

/// One rotation class of positive-value asymmetric labelled trees.
#[derive(Debug, Clone)]
pub struct TStarClass {
    pub representative: LabeledHypergraph,
    pub canonical: Vec<u8>,
    /// Distinct members under label rotation; divides m2.
    pub class_size: u64,
    pub edges: u64,
    pub weight: u64,
    pub value: BigRational,
    pub edge_value: BigRational,
}

/// Catalogue of rotation classes ordered by edge value (descending), then
/// canonical form.
#[derive(Debug, Clone)]
pub struct TStarCatalogue {
    pub params: Params,
    pub max_edges: u64,
    pub classes: Vec<TStarClass>,
}

impl TStarCatalogue {
    /// Total edges consumed by taking every member of the first z classes.
    pub fn edges_of_first(&self, z: usize) -> u64 {
        self.classes[..z.min(self.classes.len())]
            .iter()
            .map(|c| c.class_size * c.edges)
            .sum()
    }
}

/// Builds the catalogue of positive-value asymmetric labelled trees up to
/// max_edges edges, grouped into label-rotation classes. Empty in the
/// extreme regime, where no component has positive value.
pub fn build_t_star(params: &Params, max_edges: u64) -> Result<TStarCatalogue> {
    if params.is_extreme() {
        return Ok(TStarCatalogue { params: params.clone(), max_edges, classes: Vec::new() });
    }
    let rm2 = params.r_m2();
    let levels = oracle::small_hypertree_classes(params.n1, max_edges)?;
    let mut by_canon: BTreeMap<Vec<u8>, (LabeledHypergraph, u64, u64)> = BTreeMap::new();
    for (t, level) in levels.iter().enumerate().skip(1) {
        let t = t as u64;
        // Positive value needs w > r m2 t; r m2 is integral off the extreme
        // regime.
        let need_w = (rm2.clone() * BigRational::from_integer(BigInt::from(t)))
            .to_integer()
            .to_u64()
            .expect("desk scale")
            + 1;
        for h in level {
            if need_w > params.m2 as u64 * h.vertex_count() as u64 {
                continue;
            }
            for assignment in oracle::label_assignments_min_weight(h, params.m2, need_w) {
                let mut g = LabeledHypergraph::new(params.m2);
                for (i, v) in h.vertices().iter().enumerate() {
                    g.add_vertex(v.id, Some(LabelSet(assignment[i])))?;
                }
                for e in h.edges() {
                    g.add_edge(e.id, &e.vertices)?;
                }
                let out = engine::run(&g, engine::DEFAULT_NODE_BUDGET)?;
                if !out.report.is_asymmetric {
                    continue;
                }
                let weight = g.total_weight()?;
                by_canon.entry(out.canonical).or_insert((g, t, weight));
            }
        }
    }

    // Group by rotation orbit; the representative minimizes the canonical
    // form over all rotations.
    let mut classes: Vec<TStarClass> = Vec::new();
    let mut claimed: BTreeSet<Vec<u8>> = BTreeSet::new();
    for (canon, (g, t, weight)) in &by_canon {
        if claimed.contains(canon) {
            continue;
        }
        let mut orbit_canons = BTreeSet::new();
        let mut best = (canon.clone(), g.clone());
        let mut cur = g.clone();
        for _ in 0..params.m2 {
            let c = engine::canonical_form(&cur)?;
            if c < best.0 {
                best = (c.clone(), cur.clone());
            }
            orbit_canons.insert(c);
            cur = cur.apply_xi();
        }
        for c in &orbit_canons {
            claimed.insert(c.clone());
        }
        let value = BigRational::from_integer(BigInt::from(*weight))
            - rm2.clone() * BigRational::from_integer(BigInt::from(*t));
        classes.push(TStarClass {
            representative: best.1,
            canonical: best.0,
            class_size: orbit_canons.len() as u64,
            edges: *t,
            weight: *weight,
            value: value.clone(),
            edge_value: value / BigRational::from_integer(BigInt::from(*t)),
        });
    }
    classes.sort_by(|a, b| {
        b.edge_value
            .cmp(&a.edge_value)
            .then_with(|| a.canonical.cmp(&b.canonical))
    });
    Ok(TStarCatalogue { params: params.clone(), max_edges, classes })
}

/// Node color in the contraction graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeColor {
    Red,
    Green,
    Blue,
}

/// Contraction graph of a labelled tree component: nodes are edges and
/// degree->=2 vertices joined by containment; defects are red, non-defective
/// branch vertices green, the rest blue; maximal paths through blue
/// degree-2 interiors collapse to labelled edges.
#[derive(Debug, Clone)]
pub struct ContractionReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub red: usize,
    pub green: usize,
    pub blue: usize,
    pub contracted_node_count: usize,
    pub contracted_edge_count: usize,
    pub segment_lengths: Vec<u64>,
    /// Degree-2 nodes of the contracted graph (the a of the bound).
    pub deg2_nodes: usize,
    /// Degree->=4 nodes of the contracted graph (the b of the bound).
    pub deg4plus_nodes: usize,
    pub leaf_nodes: usize,
    pub defect_total: u64,
    pub value: BigRational,
    /// 2 m2 - 4 j - 5 - 2 d + a - b, in the applicable regime.
    pub bound_with_correction: Option<i64>,
    /// 2 m2 - 4 j - 5.
    pub bound_plain: Option<i64>,
    pub holds: Option<bool>,
}

pub fn contraction_graph(h: &LabeledHypergraph, params: &Params) -> Result<ContractionReport> {
    if !h.is_tree()? {
        return Err(Error::NotATree);
    }
    let def = defects(h, params)?;
    let red_vertices: BTreeSet<u32> = def.defective_vertices.iter().map(|&(id, _)| id).collect();
    let red_edges: BTreeSet<u32> = def.defective_edges.iter().map(|&(id, _)| id).collect();

    // Node space: edges first, then degree->=2 vertices.
    let ne = h.edge_count();
    let mut vertex_nodes: Vec<usize> = Vec::new();
    let mut vertex_node_of: BTreeMap<usize, usize> = BTreeMap::new();
    for vpos in 0..h.vertex_count() {
        if h.degree(vpos) >= 2 {
            vertex_node_of.insert(vpos, ne + vertex_nodes.len());
            vertex_nodes.push(vpos);
        }
    }
    let n_nodes = ne + vertex_nodes.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_nodes];
    for (epos, e) in h.edges().iter().enumerate() {
        for vid in &e.vertices {
            let vpos = h.vertex_position(*vid).unwrap();
            if let Some(&vn) = vertex_node_of.get(&vpos) {
                adj[epos].push(vn);
                adj[vn].push(epos);
            }
        }
    }

    let color = |node: usize| -> NodeColor {
        if node < ne {
            let id = h.edges()[node].id;
            if red_edges.contains(&id) {
                NodeColor::Red
            } else {
                NodeColor::Blue
            }
        } else {
            let vpos = vertex_nodes[node - ne];
            let id = h.vertices()[vpos].id;
            if red_vertices.contains(&id) {
                NodeColor::Red
            } else if h.degree(vpos) >= 3 {
                NodeColor::Green
            } else {
                NodeColor::Blue
            }
        }
    };
    let mut red = 0;
    let mut green = 0;
    let mut blue = 0;
    for node in 0..n_nodes {
        match color(node) {
            NodeColor::Red => red += 1,
            NodeColor::Green => green += 1,
            NodeColor::Blue => blue += 1,
        }
    }
    let c_edges: usize = adj.iter().map(|a| a.len()).sum::<usize>() / 2;

    // Contract maximal paths whose interiors are blue degree-2 nodes.
    let eligible: Vec<bool> = (0..n_nodes)
        .map(|x| color(x) == NodeColor::Blue && adj[x].len() == 2)
        .collect();
    let mut segments: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for u in 0..n_nodes {
        if eligible[u] {
            continue;
        }
        for &first in &adj[u] {
            let mut prev = u;
            let mut cur = first;
            let mut len = 1u64;
            while eligible[cur] {
                let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                prev = cur;
                cur = next;
                len += 1;
            }
            let key = (u.min(cur), u.max(cur));
            segments.insert(key, len);
        }
    }
    let contracted_nodes = (0..n_nodes).filter(|&x| !eligible[x]).count();
    let mut cdeg: BTreeMap<usize, usize> = BTreeMap::new();
    for (&(a, b), _) in &segments {
        *cdeg.entry(a).or_insert(0) += 1;
        *cdeg.entry(b).or_insert(0) += 1;
    }
    let contracted_edges = segments.len();
    let a_nodes = (0..n_nodes)
        .filter(|x| !eligible[*x] && cdeg.get(x).copied().unwrap_or(0) == 2)
        .count();
    let b_nodes = (0..n_nodes)
        .filter(|x| !eligible[*x] && cdeg.get(x).copied().unwrap_or(0) >= 4)
        .count();
    let leaf_nodes = (0..n_nodes)
        .filter(|x| !eligible[*x] && cdeg.get(x).copied().unwrap_or(0) == 1)
        .count();
    let segment_lengths: Vec<u64> = {
        let mut v: Vec<u64> = segments.values().copied().collect();
        v.sort_unstable();
        v
    };

    let weight = h.total_weight()?;
    let value = BigRational::from_integer(BigInt::from(weight))
        - params.r_m2()
            * BigRational::from_integer(BigInt::from(h.edge_count() as u64));
    let applicable = params.k == 0
        && params.j >= 0
        && !params.is_extreme()
        && value >= BigRational::one();
    let (bound_with_correction, bound_plain, holds) = if applicable {
        let base = 2 * params.m2 as i64 - 4 * params.j - 5;
        let corr = base - 2 * def.total as i64 + a_nodes as i64 - b_nodes as i64;
        let ok = (contracted_edges as i64) <= corr && (contracted_edges as i64) <= base;
        (Some(corr), Some(base), Some(ok))
    } else {
        (None, None, None)
    };

    Ok(ContractionReport {
        node_count: n_nodes,
        edge_count: c_edges,
        red,
        green,
        blue,
        contracted_node_count: contracted_nodes,
        contracted_edge_count: contracted_edges,
        segment_lengths,
        deg2_nodes: a_nodes,
        deg4plus_nodes: b_nodes,
        leaf_nodes,
        defect_total: def.total,
        value,
        bound_with_correction,
        bound_plain,
        holds,
    })
}

/// Leading polynomial constant for the k = 0 mid-regime, by subcase.
pub fn constant_c(params: &Params) -> Result<BigRational> {
    if params.k != 0 {
        return Err(Error::NotApplicableCase(format!("k = {} is nonzero", params.k)));
    }
    if params.is_extreme() {
        return Err(Error::NotApplicableCase("extreme regime".into()));
    }
    if params.j < 0 {
        return Err(Error::NotApplicableCase("no binomial block consumed".into()));
    }
    let m2 = params.m2 as u64;
    let j = params.j as u64;
    if params.m2 % 2 == 1 && 2 * j + 3 == m2 {
        // Path-shaped contraction: choose two distinct boundary labels.
        let c = binomial(m2, j + 1);
        return Ok(BigRational::new(
            BigInt::from(c * (c - 1)),
            BigInt::from(2),
        ));
    }
    if j == 0 && m2 > 3 {
        let num = BigUint::from(m2).pow((m2 - 1) as u32)
            * binomial(BigUint::from(2 * m2 - 4), BigUint::from(m2 - 3));
        let den = factorial(2 * m2 - 4);
        return Ok(BigRational::new(BigInt::from(num), BigInt::from(den)));
    }
    if j >= 1 && 2 * j + 3 < m2 {
        let num = BigUint::from(binomial(m2, j + 1)).pow((m2 - 2 * j - 1) as u32)
            * BigUint::from(binomial(m2, j)).pow((m2 - 2 * j - 3) as u32)
            * binomial(
                BigUint::from(2 * m2 - 4 * j - 4),
                BigUint::from(m2 - 2 * j - 3),
            );
        let den = factorial(2 * m2 - 4 * j - 4) * (BigUint::one() << (m2 - 2 * j - 3));
        return Ok(BigRational::new(BigInt::from(num), BigInt::from(den)));
    }
    Err(Error::NotApplicableCase(format!(
        "no closed-form constant for m2 = {m2}, j = {j}"
    )))
}

/// z choice for the logarithmic regime, given growth estimates.
pub fn log_regime_z(m1: u64, alpha: f64, beta: f64) -> Result<i64> {
    if m1 < 2 {
        return Err(Error::Domain("need m1 >= 2".into()));
    }
    if !(alpha > 0.0) || !(beta > 1.0) {
        return Err(Error::Domain("need alpha > 0 and beta > 1".into()));
    }
    let logb = |x: f64| x.ln() / beta.ln();
    let inner = m1 as f64 * (beta - 1.0) / (alpha * beta) * logb(m1 as f64).powf(1.5);
    if !(inner > 0.0) || !inner.is_finite() {
        return Err(Error::Domain("degenerate z argument".into()));
    }
    Ok(logb(inner).floor() as i64)
}

/// Numeric leading form of the logarithmic-regime epsilon.
pub fn epsilon_log_estimate(m1: u64, alpha: f64, beta: f64) -> Result<f64> {
    let z = log_regime_z(m1, alpha, beta)? as f64;
    if z < 1.0 {
        return Err(Error::Domain("z below 1; m1 too small for the form".into()));
    }
    Ok(m1 as f64 / (z + 1.0)
        + alpha * beta.powf(z) * z.powf(-3.5) * (beta / (beta - 1.0)).powi(2))
}

/// The epsilon regime and associated constants for one parameter point.
#[derive(Debug, Clone)]
pub struct RegimeConstants {
    pub params: Params,
    pub regime: String,
    pub epsilon_description: String,
    /// Exact epsilon in the extreme regimes, which depend only on parity
    /// data and r m1.
    pub epsilon_exact: Option<BigRational>,
    pub c_constant: Option<BigRational>,
    pub z: Option<i64>,
    pub epsilon_estimate: Option<f64>,
    pub min_ring_edges: u64,
    pub omega: BigRational,
}

pub fn regime_constants(
    n1: u32,
    m2: u32,
    m1: u64,
    alpha_hat: Option<f64>,
    beta_hat: Option<f64>,
) -> Result<RegimeConstants> {
    let params = partition::params(n1, m2)?;
    let min_ring_edges = params.min_ring_edges();
    let omega = params.omega();
    let two_pow = BigInt::from(1u64) << (m2 - 1);

    let (regime, epsilon_description, epsilon_exact, c_constant, z, epsilon_estimate);
    if params.j < 0 {
        regime = "logarithmic".to_string();
        epsilon_description =
            "m1/(z+1) + (1+o(1)) alpha beta^z z^(-7/2) (beta/(beta-1))^2".to_string();
        epsilon_exact = None;
        c_constant = None;
        match (alpha_hat, beta_hat) {
            (Some(a), Some(b)) => {
                z = Some(log_regime_z(m1, a, b)?);
                epsilon_estimate = epsilon_log_estimate(m1, a, b).ok();
            }
            _ => {
                z = None;
                epsilon_estimate = None;
            }
        }
    } else if !params.is_extreme() && params.k == 0 {
        let p = 2 * m2 as i64 - 4 * params.j - 4;
        regime = "polynomial".to_string();
        epsilon_description = format!(
            "(({p})^(({pm1})/({p}))/({pm1}) C^(1/({p})) + o(1)) m1^(({pm1})/({p}))",
            p = p,
            pm1 = p - 1
        );
        epsilon_exact = None;
        c_constant = constant_c(&params).ok();
        z = None;
        epsilon_estimate = match &c_constant {
            Some(c) => {
                let cf = c.to_f64().unwrap_or(f64::NAN);
                let pf = p as f64;
                let expo = (pf - 1.0) / pf;
                Some(pf.powf(expo) / (pf - 1.0) * cf.powf(1.0 / pf) * (m1 as f64).powf(expo))
            }
            None => None,
        };
    } else if !params.is_extreme() {
        regime = "quasilinear".to_string();
        epsilon_description = "Theta(m1 / log m1)".to_string();
        epsilon_exact = None;
        c_constant = None;
        z = None;
        epsilon_estimate = None;
    } else if params.k == 0 {
        regime = "constant".to_string();
        let reduced = m2 % 2 == 1 || m2 == 2;
        epsilon_description = if reduced {
            "2^(m2-1) - 1".to_string()
        } else {
            "2^(m2-1)".to_string()
        };
        epsilon_exact = Some(BigRational::from_integer(if reduced {
            two_pow.clone() - 1
        } else {
            two_pow.clone()
        }));
        c_constant = None;
        z = None;
        epsilon_estimate = None;
    } else {
        regime = "constant".to_string();
        let km1_even = (params.k * m1) % 2 == 0;
        if km1_even && m2 % 2 == 1 {
            epsilon_description = "2^(m2-1) - 1".to_string();
            epsilon_exact = Some(BigRational::from_integer(two_pow.clone() - 1));
        } else {
            epsilon_description = "2^(m2-1) + floor(r m1) - r m1".to_string();
            let rm1 = params.r.clone() * BigRational::from_integer(BigInt::from(m1));
            let frac = rm1.floor() - rm1;
            epsilon_exact = Some(BigRational::from_integer(two_pow.clone()) + frac);
        }
        c_constant = None;
        z = None;
        epsilon_estimate = None;
    }

    Ok(RegimeConstants {
        params,
        regime,
        epsilon_description,
        epsilon_exact,
        c_constant,
        z,
        epsilon_estimate,
        min_ring_edges,
        omega,
    })
}

/// Generation-side counts of unrooted identity trees per edge count, via
/// exhaustive tree generation and the automorphism engine.
pub fn generation_counts_plain(max_edges: u64) -> Result<Vec<u64>> {
    let levels = oracle::small_hypertree_classes(2, max_edges)?;
    let mut out = Vec::new();
    for level in &levels {
        let mut count = 0u64;
        for h in level {
            if engine::automorphisms(h)?.is_asymmetric {
                count += 1;
            }
        }
        out.push(count);
    }
    Ok(out)
}

/// Generation-side counts of rooted identity trees per edge count: the root
/// is marked with a singleton label and the marked tree must be asymmetric.
pub fn generation_counts_rooted(max_edges: u64) -> Result<Vec<u64>> {
    let levels = oracle::small_hypertree_classes(2, max_edges)?;
    let mut out = Vec::new();
    for level in &levels {
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut count = 0u64;
        for h in level {
            for root in 0..h.vertex_count() {
                let mut g = LabeledHypergraph::new(1);
                for (i, v) in h.vertices().iter().enumerate() {
                    let label = if i == root { LabelSet(1) } else { LabelSet::EMPTY };
                    g.add_vertex(v.id, Some(label))?;
                }
                for e in h.edges() {
                    g.add_edge(e.id, &e.vertices)?;
                }
                let res = engine::run(&g, engine::DEFAULT_NODE_BUDGET)?;
                if res.report.is_asymmetric && seen.insert(res.canonical) {
                    count += 1;
                }
            }
        }
        out.push(count);
    }
    Ok(out)
}

/// Generation-side counts of asymmetric decorated trees per edge count.
pub fn generation_counts_enriched(max_edges: u64, spec: &EnrichmentSpec) -> Result<Vec<u64>> {
    let m2 = spec.max_decorations() as u32;
    if m2 == 0 {
        return Err(Error::Domain("spec admits no decorations at all".into()));
    }
    let levels = oracle::small_hypertree_classes(2, max_edges)?;
    let mut out = Vec::new();
    for level in &levels {
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut count = 0u64;
        for h in level {
            let degrees: Vec<usize> = (0..h.vertex_count()).map(|i| h.degree(i)).collect();
            if degrees.iter().any(|&d| spec.weight(d) == 0) {
                continue;
            }
            let choices: Vec<u64> = degrees.iter().map(|&d| spec.weight(d)).collect();
            let mut pick = vec![1u64; choices.len()];
            loop {
                let mut g = LabeledHypergraph::new(m2);
                for (i, v) in h.vertices().iter().enumerate() {
                    let label = LabelSet::from_elements(&[pick[i] as u32], m2)?;
                    g.add_vertex(v.id, Some(label))?;
                }
                for e in h.edges() {
                    g.add_edge(e.id, &e.vertices)?;
                }
                let res = engine::run(&g, engine::DEFAULT_NODE_BUDGET)?;
                if res.report.is_asymmetric && seen.insert(res.canonical) {
                    count += 1;
                }
                let mut i = 0;
                loop {
                    if i == pick.len() {
                        break;
                    }
                    pick[i] += 1;
                    if pick[i] <= choices[i] {
                        break;
                    }
                    pick[i] = 1;
                    i += 1;
                }
                if i == pick.len() {
                    break;
                }
            }
        }
        out.push(count);
    }
    Ok(out)
}

/// Generation-side counts of asymmetric decorated planted trees per edge
/// count: a root is marked with an extra label element and its degree is
/// taken one higher (the stem).
pub fn generation_counts_planted(max_edges: u64, spec: &EnrichmentSpec) -> Result<Vec<u64>> {
    let dec = spec.max_decorations() as u32;
    if dec == 0 {
        return Err(Error::Domain("spec admits no decorations at all".into()));
    }
    let m2 = dec + 1;
    let marker = m2;
    let levels = oracle::small_hypertree_classes(2, max_edges)?;
    let mut out = Vec::new();
    for level in &levels {
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut count = 0u64;
        for h in level {
            for root in 0..h.vertex_count() {
                let degrees: Vec<usize> = (0..h.vertex_count())
                    .map(|i| h.degree(i) + usize::from(i == root))
                    .collect();
                if degrees.iter().any(|&d| spec.weight(d) == 0) {
                    continue;
                }
                let choices: Vec<u64> = degrees.iter().map(|&d| spec.weight(d)).collect();
                let mut pick = vec![1u64; choices.len()];
                loop {
                    let mut g = LabeledHypergraph::new(m2);
                    for (i, v) in h.vertices().iter().enumerate() {
                        let label = if i == root {
                            LabelSet::from_elements(&[pick[i] as u32, marker], m2)?
                        } else {
                            LabelSet::from_elements(&[pick[i] as u32], m2)?
                        };
                        g.add_vertex(v.id, Some(label))?;
                    }
                    for e in h.edges() {
                        g.add_edge(e.id, &e.vertices)?;
                    }
                    let res = engine::run(&g, engine::DEFAULT_NODE_BUDGET)?;
                    if res.report.is_asymmetric && seen.insert(res.canonical) {
                        count += 1;
                    }
                    let mut i = 0;
                    loop {
                        if i == pick.len() {
                            break;
                        }
                        pick[i] += 1;
                        if pick[i] <= choices[i] {
                            break;
                        }
                        pick[i] = 1;
                        i += 1;
                    }
                    if i == pick.len() {
                        break;
                    }
                }
            }
        }
        out.push(count);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::rational;

    #[test]
    fn rooted_sequence_known_prefix() {
        let u = rooted_counts(10);
        let got: Vec<u64> = (1..=10).map(|n| u[n].to_u64().unwrap()).collect();
        assert_eq!(got, vec![1, 1, 1, 2, 3, 6, 12, 25, 52, 113]);
    }

    #[test]
    fn unrooted_sequence_known_prefix() {
        let table = count_asymmetric_trees(12);
        let got: Vec<u64> = (0..=12)
            .map(|e| table.get(Series::Unrooted, e).unwrap().to_u64().unwrap())
            .collect();
        // By vertex count 1..13: 1,0,0,0,0,0,1,1,3,6,15,29,67.
        assert_eq!(got, vec![1, 0, 0, 0, 0, 0, 1, 1, 3, 6, 15, 29, 67]);
    }

    #[test]
    fn plain_enrichment_matches_identity_trees() {
        let plain = EnrichmentSpec::plain(14);
        let enriched = count_enriched_trees(12, &plain).unwrap();
        let base = count_asymmetric_trees(12);
        for e in 0..=12 {
            assert_eq!(
                enriched.get(Series::EnrichedUnrooted, e),
                base.get(Series::Unrooted, e),
                "edges {e}"
            );
            assert_eq!(
                enriched.get(Series::EnrichedPlanted, e),
                base.get(Series::Rooted, e),
                "edges {e}"
            );
        }
    }

    #[test]
    fn labelled_formula_values() {
        assert_eq!(labelled_count_formula(3, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(labelled_count_formula(3, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(labelled_count_formula(5, 1).unwrap(), BigUint::from(90u32));
        assert_eq!(labelled_count_formula(7, 1).unwrap(), BigUint::from(5040u32));
        assert_eq!(labelled_count_formula(7, 2).unwrap(), BigUint::from(40320u32));
        assert!(matches!(labelled_count_formula(4, 1), Err(Error::EvenParameter(4))));
        assert!(labelled_count_formula(0, 1).is_err());
    }

    #[test]
    fn l_series_matches_composition_sums() {
        let weights: Vec<BigUint> =
            [2u32, 1, 3].iter().map(|&x| BigUint::from(x)).collect();
        let l = l_series(&weights, 8);
        // Direct composition sum for n = 4 over parts in {1,2,3} with
        // weights 2,1,3.
        fn direct(weights: &[u64], n: usize) -> u64 {
            if n == 0 {
                return 1;
            }
            let mut s = 0;
            for (i, w) in weights.iter().enumerate() {
                if i + 1 <= n {
                    s += w * direct(weights, n - i - 1);
                }
            }
            s
        }
        for n in 0..=8 {
            assert_eq!(l[n].to_u64().unwrap(), direct(&[2, 1, 3], n), "n = {n}");
        }
    }

    #[test]
    fn growth_recovers_geometric() {
        let series: Vec<BigUint> = (0..24).map(|i| BigUint::from(2u64).pow(i)).collect();
        let g = estimate_growth(&series, 0.0).unwrap();
        assert!((g.beta - 2.0).abs() < 0.02 * 2.0, "beta = {}", g.beta);
        assert!((g.alpha - 1.0).abs() < 0.05, "alpha = {}", g.alpha);
    }

    #[test]
    fn growth_correction_reduces_variance() {
        let u = rooted_counts(40);
        let g = estimate_growth(&u[1..], -1.5).unwrap();
        assert!(g.corrected_ratio_variance < g.raw_ratio_variance);
        assert!(g.beta > 2.0 && g.beta < 3.0, "beta = {}", g.beta);
    }

    #[test]
    fn t_star_single_label_catalogue() {
        let params = partition::params(2, 1).unwrap();
        let cat = build_t_star(&params, 8).unwrap();
        // Positive value with one label class forces every vertex to carry
        // the label, so the tree itself must be an identity tree: counts
        // 1, 1, 3 at 6, 7, 8 edges and nothing smaller.
        let mut by_edges: BTreeMap<u64, u64> = BTreeMap::new();
        for c in &cat.classes {
            *by_edges.entry(c.edges).or_insert(0) += 1;
            assert_eq!(c.class_size, 1);
            assert_eq!(c.value, rational(1, 1));
            assert!(c
                .representative
                .vertices()
                .iter()
                .all(|v| v.label == Some(LabelSet(1))));
        }
        assert_eq!(by_edges, BTreeMap::from([(6, 1), (7, 1), (8, 3)]));
        // Ordered by edge value: 1/6 >= 1/7 >= 1/8.
        let evs: Vec<BigRational> = cat.classes.iter().map(|c| c.edge_value.clone()).collect();
        for w in evs.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert_eq!(cat.edges_of_first(2), 13);
        assert_eq!(cat.edges_of_first(5), 6 + 7 + 24);
    }

    #[test]
    fn t_star_empty_in_extreme_regime() {
        let params = partition::params(3, 2).unwrap();
        let cat = build_t_star(&params, 5).unwrap();
        assert!(cat.classes.is_empty());
    }

    #[test]
    fn contraction_of_two_edge_tree() {
        // A 2-edge 3-uniform tree, m2 = 3 (j = 0, k = 0, r = 2), with value
        // 1: shared vertex full, each edge one full and one size-2 leaf.
        let params = partition::params(3, 3).unwrap();
        let mut h = LabeledHypergraph::new(3);
        let full = LabelSet::from_elements(&[1, 2, 3], 3).unwrap();
        h.add_vertex(0, Some(full)).unwrap();
        h.add_vertex(1, Some(LabelSet::from_elements(&[1, 2], 3).unwrap())).unwrap();
        h.add_vertex(2, Some(full)).unwrap();
        h.add_vertex(3, Some(full)).unwrap();
        h.add_vertex(4, Some(LabelSet::from_elements(&[1, 3], 3).unwrap())).unwrap();
        h.add_edge(0, &[0, 1, 2]).unwrap();
        h.add_edge(1, &[2, 3, 4]).unwrap();
        assert!(engine::automorphisms(&h).unwrap().is_asymmetric);
        let rep = contraction_graph(&h, &params).unwrap();
        assert_eq!(rep.value, rational(1, 1));
        assert_eq!(rep.defect_total, 0);
        assert_eq!(rep.node_count, 3);
        assert_eq!(rep.contracted_edge_count, 1);
        assert_eq!(rep.segment_lengths, vec![2]);
        assert_eq!(rep.bound_plain, Some(1));
        assert_eq!(rep.bound_with_correction, Some(1));
        assert_eq!(rep.holds, Some(true));
    }

    #[test]
    fn constant_c_cases() {
        // Odd boundary case at m2 = 3, j = 0 (n1 = 3).
        let p = partition::params(3, 3).unwrap();
        assert_eq!(constant_c(&p).unwrap(), rational(3, 1));
        // j = 0 with m2 = 4 (n1 = 3).
        let p = partition::params(3, 4).unwrap();
        assert_eq!(constant_c(&p).unwrap(), rational(32, 3));
        // Interior case m2 = 7, j = 1 (n1 = 2 + 1 + 7 = 10).
        let p = partition::params(10, 7).unwrap();
        assert_eq!((p.j, p.k), (1, 0));
        assert_eq!(constant_c(&p).unwrap(), rational(3176523, 64));
        // Nonzero k is rejected.
        let p = partition::params(4, 3).unwrap();
        assert!(matches!(constant_c(&p), Err(Error::NotApplicableCase(_))));
    }

    #[test]
    fn z_value_hand_checked() {
        assert_eq!(log_regime_z(1000, 1.0, 2.0).unwrap(), 13);
        assert!(log_regime_z(1, 1.0, 2.0).is_err());
        assert!(log_regime_z(1000, 0.0, 2.0).is_err());
    }

    #[test]
    fn regime_constants_regimes() {
        let tc = regime_constants(2, 5, 1000, Some(1.0), Some(2.0)).unwrap();
        assert_eq!(tc.regime, "logarithmic");
        assert!(tc.z.is_some());
        let tc = regime_constants(3, 2, 10, None, None).unwrap();
        assert_eq!(tc.regime, "constant");
        assert_eq!(tc.epsilon_exact, Some(rational(1, 1)));
        let tc = regime_constants(4, 3, 10, None, None).unwrap();
        assert_eq!(tc.regime, "quasilinear");
        let tc = regime_constants(3, 4, 10, None, None).unwrap();
        assert_eq!(tc.regime, "polynomial");
        assert_eq!(tc.c_constant, Some(rational(32, 3)));
        // k >= 1 at the extreme j: epsilon depends on parities.
        let tc = regime_constants(4, 2, 12, None, None).unwrap();
        assert_eq!(tc.regime, "constant");
        // k = 1, m1 = 12: k m1 even, m2 even: epsilon = 2^(m2-1) = 2.
        assert_eq!(tc.epsilon_exact, Some(rational(2, 1)));
        let tc = regime_constants(4, 2, 45, None, None).unwrap();
        // k m1 odd: r m1 is a half-integer, epsilon = 2 - 1/2.
        assert_eq!(tc.epsilon_exact, Some(rational(3, 2)));
    }

    #[test]
    fn generation_matches_recurrence_small() {
        let table = count_asymmetric_trees(6);
        let gen = generation_counts_plain(6).unwrap();
        for e in 0..=6usize {
            assert_eq!(
                table.get(Series::Unrooted, e).unwrap().to_u64().unwrap(),
                gen[e],
                "edges {e}"
            );
        }
        let rooted = generation_counts_rooted(6).unwrap();
        for e in 0..=6usize {
            assert_eq!(
                table.get(Series::Rooted, e).unwrap().to_u64().unwrap(),
                rooted[e],
                "edges {e}"
            );
        }
    }

    #[test]
    fn enriched_generation_matches_recurrence_small() {
        let spec = EnrichmentSpec { weights: vec![0, 2, 1, 1] };
        let table = count_enriched_trees(5, &spec).unwrap();
        let gen = generation_counts_enriched(5, &spec).unwrap();
        for e in 1..=5usize {
            assert_eq!(
                table.get(Series::EnrichedUnrooted, e).unwrap().to_u64().unwrap(),
                gen[e],
                "edges {e}"
            );
        }
        let planted = generation_counts_planted(5, &spec).unwrap();
        for e in 1..=5usize {
            assert_eq!(
                table.get(Series::EnrichedPlanted, e).unwrap().to_u64().unwrap(),
                planted[e],
                "edges {e}"
            );
        }
    }
}
