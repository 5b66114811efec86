//! Acceptance gates for the workspace: nine independent checks, each
//! printing one "criterion N: PASS/FAIL" line (visible with --nocapture).
//! Every numeric target is stated inline next to the check that uses it;
//! a failing criterion panics with the collected mismatch list.

use distpart::construct;
use distpart::hypercore::{engine, LabelSet, LabeledHypergraph};
use distpart::oracle::{self, LabelMode};
use distpart::partition::{self, MultipartiteShape, Params};
use distpart::trees::{self, EnrichmentSpec, Series};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

const FAILURE_CAP: usize = 50;

fn note(failures: &mut Vec<String>, msg: String) {
    if failures.len() < FAILURE_CAP {
        failures.push(msg);
    } else if failures.len() == FAILURE_CAP {
        failures.push("... further failures elided".into());
    }
}

fn conclude(criterion: u32, detail: String, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {criterion}: PASS ({detail})");
    } else {
        println!("criterion {criterion}: FAIL ({detail}; {} problems)", failures.len());
        panic!("criterion {criterion} failed:\n{}", failures.join("\n"));
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exhaustive |aut(P)| = |aut(tau(P))| over every regular partition of
/// every complete multipartite shape with at most 9 vertices.
#[test]
fn criterion_1_partition_hypergraph_aut_bijection() {
    let report = oracle::aut_equivalence_sweep(9).expect("sweep");
    let detail = format!(
        "{} shapes, {} partitions in {} orbits, <= 9 vertices",
        report.shapes, report.partitions, report.orbits
    );
    conclude(1, detail, report.mismatches);
}

/// The smallest number of size-2 blocks admitting a distinguishing
/// partition is exactly 6: none for 1..=5 blocks, a certified witness at 6.
#[test]
fn criterion_2_six_block_flip_for_pairs() {
    let mut failures = Vec::new();
    for m in 1..=5usize {
        let shape = MultipartiteShape::new(vec![2; m]).expect("shape");
        if let Some(p) = oracle::exists_distinguishing(&shape).expect("search") {
            note(&mut failures, format!("unexpected witness at {m} blocks: {}", p.to_text()));
        }
    }
    let shape = MultipartiteShape::new(vec![2; 6]).expect("shape");
    match oracle::exists_distinguishing(&shape).expect("search") {
        Some(p) => {
            let chk = partition::aut_equivalence_check(&p, 12).expect("aut check");
            if !chk.partition_group_order.is_one() {
                note(
                    &mut failures,
                    format!("witness stabilizer has order {}", chk.partition_group_order),
                );
            }
        }
        None => note(&mut failures, "no witness at 6 blocks".into()),
    }
    conclude(2, "flip at 6 blocks of size 2, witness stabilizer trivial".into(), failures);
}

/// Existence of a distinguishing partition matches the closed-form
/// threshold (with its exceptional sizes) on every (n, m) with n*m <= 12.
/// Block size 1 follows the separate rule: only a single block works.
#[test]
fn criterion_3_threshold_formula_cross_check() {
    let mut failures = Vec::new();
    let mut cases = 0u32;
    for n in 1..=12u64 {
        for m in 1..=(12 / n) {
            cases += 1;
            let shape = MultipartiteShape::new(vec![n as u32; m as usize]).expect("shape");
            let actual = oracle::exists_distinguishing(&shape).expect("search").is_some();
            let predicted = oracle::predicted_distinguishing(n, m).expect("formula");
            if actual != predicted {
                note(
                    &mut failures,
                    format!("n={n} m={m}: search {actual}, formula {predicted}"),
                );
            }
        }
    }
    conclude(3, format!("{cases} shapes with n*m <= 12"), failures);
}

fn sweep_bounds(
    tag: &str,
    h: &LabeledHypergraph,
    params: &Params,
    checked: &mut u64,
    failures: &mut Vec<String>,
) {
    let vb = match partition::value_bounds(h, params) {
        Ok(v) => v,
        Err(e) => {
            note(failures, format!("{tag}: bounds failed to evaluate: {e}"));
            return;
        }
    };
    for (ci, c) in vb.components.iter().enumerate() {
        if !c.applicable {
            continue;
        }
        if !c.degree_identity {
            note(failures, format!("{tag} component {ci}: degree identity broken"));
        }
        if c.leaf_mu_bound == Some(false) {
            note(failures, format!("{tag} component {ci}: leaf count below mu + 2"));
        }
        if c.positive_value_tree == Some(false) {
            note(failures, format!("{tag} component {ci}: positive-value non-tree cap broken"));
        }
        let caps = [
            ("cap_by_edges", &c.cap_by_edges),
            ("cap_balanced", &c.cap_balanced),
            ("cap_extremal", &c.cap_extremal),
            ("cap_uniform", &c.cap_uniform),
            ("value_cap_extreme", &c.value_cap_extreme),
            ("tree_value_cap", &c.tree_value_cap),
        ];
        for (name, cap) in caps {
            *checked += 1;
            if let Some(b) = cap {
                if !b.holds {
                    note(
                        failures,
                        format!(
                            "{tag} component {ci}: {name} bound {} < value {}",
                            b.bound, c.value
                        ),
                    );
                }
            }
        }
    }
    if vb.isolated_ok == Some(false) {
        note(failures, format!("{tag}: isolated weight above cap"));
    }
}

/// Every construction this library can emit, with its parameters.
fn all_construction_reports() -> Vec<(String, u32, u32, construct::ConstructionReport)> {
    let mut out = Vec::new();
    for (n1, m2, edges) in [(2u32, 1u32, 6u64), (2, 1, 9), (3, 3, 7)] {
        let spec = construct::RingSpec::new(n1, m2, edges).expect("ring spec");
        let rep = construct::ring_report(&spec).expect("ring");
        out.push((format!("ring({n1},{m2},{edges})"), n1, m2, rep));
    }
    for m1 in [6u64, 7, 8, 30] {
        let rep = construct::build_delta(m1, 2, 1, 12).expect("delta");
        out.push((format!("delta({m1})"), 2, 1, rep));
    }
    for m1 in [10u64, 13] {
        let rep = construct::build_even_m2_chains(m1, 7, 4, None).expect("chains");
        out.push((format!("chains({m1})"), 7, 4, rep));
    }
    for m1 in [5u64, 12] {
        let rep = construct::build_m2_2_chain(m1, 3).expect("two-label chain");
        out.push((format!("pair_chain({m1})"), 3, 2, rep));
    }
    for m1 in [6u64, 9] {
        let rep = construct::build_odd_m2_cycle(m1, 6, 3).expect("odd cycle");
        out.push((format!("odd_cycle({m1})"), 6, 3, rep));
    }
    for (m1, n1, m2, floor) in [(12u64, 4u32, 2u32, 10u64), (12, 7, 3, 12), (45, 4, 2, 12), (45, 7, 3, 12)]
    {
        let rep = construct::build_k1_jlarge(m1, n1, m2, 0, Some(floor)).expect("near-regular");
        out.push((format!("near_regular({m1},{n1},{m2})"), n1, m2, rep));
    }
    out
}

/// The weight/value bound suite holds on every labeling of every small
/// hypertree (pair edges to 6, triple edges to 4 with two label elements)
/// and on every construction output; exact rational comparisons.
#[test]
fn criterion_4_bound_suite_everywhere() {
    let mut failures = Vec::new();
    let mut checked = 0u64;
    let mut swept = 0u64;
    for (n1, m2, max_edges) in [(2u32, 1u32, 6u64), (2, 2, 6), (3, 1, 6), (3, 2, 4)] {
        let params = partition::params(n1, m2).expect("params");
        let tag = format!("trees(n1={n1},m2={m2})");
        oracle::enumerate_small_trees(n1, max_edges, m2, LabelMode::All, u64::MAX, &mut |h, _| {
            swept += 1;
            sweep_bounds(&tag, h, &params, &mut checked, &mut failures);
            Ok(())
        })
        .expect("enumeration");
    }
    for (tag, n1, m2, rep) in all_construction_reports() {
        swept += 1;
        let params = partition::params(n1, m2).expect("params");
        sweep_bounds(&tag, &rep.hypergraph, &params, &mut checked, &mut failures);
    }
    // A tail-extended path exercises the only builder without a report.
    let mut path = LabeledHypergraph::new(1);
    path.add_vertex(0, Some(LabelSet(1))).unwrap();
    path.add_vertex(1, Some(LabelSet::EMPTY)).unwrap();
    path.add_vertex(2, Some(LabelSet::EMPTY)).unwrap();
    path.add_edge(0, &[0, 1]).unwrap();
    path.add_edge(1, &[1, 2]).unwrap();
    let params21 = partition::params(2, 1).expect("params");
    for _ in 0..4 {
        path = construct::extend_tail(&path).expect("tail");
        swept += 1;
        sweep_bounds("tail_extension", &path, &params21, &mut checked, &mut failures);
    }
    conclude(4, format!("{swept} hypergraphs, {checked} bound slots"), failures);
}

/// Closed-form labelled counts equal direct Prüfer-sequence enumeration
/// for trees with degrees in {1, 3} on i+1 vertices, i in {3, 5, 7},
/// for both degree-3 weight variants.
#[test]
fn criterion_5_labelled_count_formula() {
    let mut failures = Vec::new();
    let cases: [(u64, u32, [u64; 2]); 3] =
        [(3, 4, [4, 8]), (5, 6, [90, 360]), (7, 8, [5040, 40320])];
    for (i, vertices, expected) in cases {
        for (idx, a3) in [1u64, 2].into_iter().enumerate() {
            let formula = trees::labelled_count_formula(i, a3).expect("formula");
            // weights[d] is the multiplier for a vertex of degree d.
            let weights = [0, 1, 0, a3];
            let direct = oracle::labelled_enriched_trees_by_sequences(vertices, &weights);
            if formula != direct {
                note(
                    &mut failures,
                    format!("i={i} a3={a3}: formula {formula} vs enumeration {direct}"),
                );
            }
            if formula != BigUint::from(expected[idx]) {
                note(
                    &mut failures,
                    format!("i={i} a3={a3}: formula {formula}, expected {}", expected[idx]),
                );
            }
        }
    }
    conclude(5, "i in {3,5,7}, both degree-3 weights, counts 4/8, 90/360, 5040/40320".into(), failures);
}

/// Recurrence-computed tree counts equal brute-force generation to 10
/// edges: plain, rooted, and two enrichment weight vectors (unrooted and
/// planted).
#[test]
fn criterion_6_recurrence_matches_generation() {
    let mut failures = Vec::new();
    let max_edges = 10u64;
    let table = trees::count_asymmetric_trees(max_edges as usize);
    let plain = trees::generation_counts_plain(max_edges).expect("generation");
    let rooted = trees::generation_counts_rooted(max_edges).expect("generation");
    for e in 0..=max_edges as usize {
        for (series, gen, name) in [
            (Series::Unrooted, &plain, "plain"),
            (Series::Rooted, &rooted, "rooted"),
        ] {
            let counted = table.get(series, e).cloned().unwrap_or_default();
            if counted != BigUint::from(gen[e]) {
                note(
                    &mut failures,
                    format!("{name} edges={e}: recurrence {counted}, generation {}", gen[e]),
                );
            }
        }
    }
    let specs = [
        EnrichmentSpec { weights: vec![0, 2, 1, 1] },
        EnrichmentSpec { weights: vec![0, 1, 2] },
    ];
    for spec in &specs {
        let table = trees::count_enriched_trees(max_edges as usize, spec).expect("recurrence");
        let unrooted = trees::generation_counts_enriched(max_edges, spec).expect("generation");
        let planted = trees::generation_counts_planted(max_edges, spec).expect("generation");
        for e in 0..=max_edges as usize {
            for (series, gen, name) in [
                (Series::EnrichedUnrooted, &unrooted, "enriched"),
                (Series::EnrichedPlanted, &planted, "planted"),
            ] {
                let counted = table.get(series, e).cloned().unwrap_or_default();
                if counted != BigUint::from(gen[e]) {
                    note(
                        &mut failures,
                        format!(
                            "{name} {:?} edges={e}: recurrence {counted}, generation {}",
                            spec.weights, gen[e]
                        ),
                    );
                }
            }
        }
    }
    conclude(6, "plain, rooted, and 2 enrichment specs to 10 edges".into(), failures);
}

fn expect_report(
    tag: &str,
    rep: &construct::ConstructionReport,
    n2: i64,
    failures: &mut Vec<String>,
) {
    if rep.n2 != int(n2) {
        note(failures, format!("{tag}: n2 {} expected {n2}", rep.n2));
    }
    if !rep.certificate.is_asymmetric {
        note(failures, format!("{tag}: certificate not asymmetric"));
    }
    if !rep.pi_sweep.tau_asymmetric {
        note(failures, format!("{tag}: label-permutation sweep failed"));
    }
    if !rep.balanced {
        note(failures, format!("{tag}: labels not balanced"));
    }
}

/// Exact families at desk scale: the two-label chain reaches 2*m1 + 1 for
/// every m1 in [5, 50]; four-label chains reach 5*m1 + 8; three-label
/// cycles reach 4*m1 + 3; the near-regular family hits its exact offset
/// in all four parity cases. All outputs carry asymmetry certificates.
#[test]
fn criterion_7_exact_families_certified() {
    let mut failures = Vec::new();
    for m1 in 5..=50i64 {
        let rep = construct::build_m2_2_chain(m1 as u64, 3).expect("two-label chain");
        expect_report(&format!("pair_chain({m1})"), &rep, 2 * m1 + 1, &mut failures);
    }
    for m1 in [10i64, 11, 13] {
        let rep = construct::build_even_m2_chains(m1 as u64, 7, 4, None).expect("chains");
        expect_report(&format!("chains({m1})"), &rep, 5 * m1 + 8, &mut failures);
    }
    for m1 in 6..=12i64 {
        let rep = construct::build_odd_m2_cycle(m1 as u64, 6, 3).expect("odd cycle");
        expect_report(&format!("odd_cycle({m1})"), &rep, 4 * m1 + 3, &mut failures);
    }
    // Parity cases (k*m1, m2): (even, even), (even, odd), (odd, even),
    // (odd, odd) with exact offsets 0, 1, 1/2, 1/2 off r*m1 + 2^(m2-1).
    for (m1, n1, m2, floor, n2) in [
        (12u64, 4u32, 2u32, 10u64, 32i64),
        (12, 7, 3, 12, 57),
        (45, 4, 2, 12, 114),
        (45, 7, 3, 12, 206),
    ] {
        let rep = construct::build_k1_jlarge(m1, n1, m2, 0, Some(floor)).expect("near-regular");
        expect_report(&format!("near_regular({m1},{n1},{m2})"), &rep, n2, &mut failures);
    }
    conclude(7, "46 pair chains, 3 four-label chains, 7 cycles, 4 parity cases".into(), failures);
}

/// Wherever the exhaustive optimum completes, constructions never beat it,
/// and the two-label chain meets it exactly on three instances.
#[test]
fn criterion_8_oracle_optimality() {
    let mut failures = Vec::new();
    // Frozen optima for single-label pair edges, m1 = 1..8.
    let expected = [1u64, 3, 4, 5, 6, 8, 9, 10];
    let mut opt21 = Vec::new();
    for (i, want) in expected.iter().enumerate() {
        let m1 = i as u64 + 1;
        let rep = oracle::max_n2(m1, 2, 1, 12).expect("oracle").expect("feasible");
        if rep.n2 != *want {
            note(&mut failures, format!("optimum(m1={m1},2,1) = {} expected {want}", rep.n2));
        }
        opt21.push(rep.n2);
    }
    for m1 in [6u64, 7, 8] {
        let opt = opt21[m1 as usize - 1];
        let spec = construct::RingSpec::new(2, 1, m1).expect("spec");
        let ring = construct::ring_report(&spec).expect("ring");
        let delta = construct::build_delta(m1, 2, 1, 12).expect("delta");
        for (tag, rep) in [("ring", &ring), ("delta", &delta)] {
            if rep.n2 > int(opt as i64) {
                note(&mut failures, format!("{tag}({m1}) n2 {} beats optimum {opt}", rep.n2));
            }
        }
    }
    // Three instances where the chain family provably meets the optimum.
    let mut met = 0u32;
    for m1 in [5u64, 6, 7] {
        let bound = 2 * m1 + 2;
        let opt = oracle::max_n2(m1, 3, 2, bound).expect("oracle").expect("feasible");
        let chain = construct::build_m2_2_chain(m1, 3).expect("chain");
        if chain.n2 > int(opt.n2 as i64) {
            note(&mut failures, format!("chain({m1}) n2 {} beats optimum {}", chain.n2, opt.n2));
        }
        if chain.n2 == int(opt.n2 as i64) {
            met += 1;
        } else {
            note(
                &mut failures,
                format!("chain({m1}) n2 {} below optimum {}", chain.n2, opt.n2),
            );
        }
    }
    if met < 3 {
        note(&mut failures, format!("only {met} chain instances met the optimum"));
    }
    conclude(
        8,
        "pair-edge grid m1 <= 8, chain meets optimum at m1 = 5, 6, 7".into(),
        failures,
    );
}

fn rotation(m2: u32) -> Vec<u32> {
    (1..=m2).map(|i| i % m2 + 1).collect()
}

fn tree_value(h: &LabeledHypergraph, params: &Params) -> BigRational {
    let w = h.total_weight().expect("weight");
    BigRational::from_integer(BigInt::from(w))
        - params.r_m2() * BigRational::from_integer(BigInt::from(h.edge_count() as u64))
}

/// Asymptotic statements are replaced by three desk-scale proxies: the
/// positive-value catalogue is enumeration-complete and ordered, the
/// packing construction sits within its stated distance of the exhaustive
/// optimum, and growth estimation recovers a planted geometric rate
/// within 1%.
#[test]
fn criterion_9_catalogue_gap_and_growth() {
    let mut failures = Vec::new();

    // Catalogue completeness and ordering for two parameter sets.
    for (n1, m2, max_edges) in [(2u32, 1u32, 8u64), (2, 2, 6)] {
        let params = partition::params(n1, m2).expect("params");
        let cat = trees::build_t_star(&params, max_edges).expect("catalogue");
        let tag = format!("catalogue({n1},{m2})");
        for w in cat.classes.windows(2) {
            let bad_order = w[0].edge_value < w[1].edge_value
                || (w[0].edge_value == w[1].edge_value && w[0].canonical >= w[1].canonical);
            if bad_order {
                note(&mut failures, format!("{tag}: classes out of order"));
            }
        }
        let mut members: std::collections::BTreeSet<Vec<u8>> = Default::default();
        for (i, class) in cat.classes.iter().enumerate() {
            let rep = &class.representative;
            let report = engine::automorphisms(rep).expect("engine");
            if !report.is_asymmetric {
                note(&mut failures, format!("{tag} class {i}: representative symmetric"));
            }
            if !rep.is_tree().expect("tree check") {
                note(&mut failures, format!("{tag} class {i}: representative not a tree"));
            }
            if class.value <= BigRational::from_integer(BigInt::from(0)) {
                note(&mut failures, format!("{tag} class {i}: value {} not positive", class.value));
            }
            if tree_value(rep, &params) != class.value
                || class.edge_value != class.value.clone() / int(class.edges as i64)
            {
                note(&mut failures, format!("{tag} class {i}: value fields inconsistent"));
            }
            let mut orbit: std::collections::BTreeSet<Vec<u8>> = Default::default();
            let mut g = rep.clone();
            for _ in 0..m2 {
                orbit.insert(engine::canonical_form(&g).expect("canonical"));
                g = g.apply_label_permutation(&rotation(m2)).expect("rotation");
            }
            if orbit.len() as u64 != class.class_size {
                note(
                    &mut failures,
                    format!("{tag} class {i}: orbit {} vs class_size {}", orbit.len(), class.class_size),
                );
            }
            for c in orbit {
                if !members.insert(c) {
                    note(&mut failures, format!("{tag} class {i}: member repeated across classes"));
                }
            }
        }
        // Independent enumeration of every positive-value asymmetric
        // labelled tree at this scale.
        let mut brute: std::collections::BTreeSet<Vec<u8>> = Default::default();
        oracle::enumerate_small_trees(n1, max_edges, m2, LabelMode::All, u64::MAX, &mut |h, _| {
            if tree_value(h, &params) > BigRational::from_integer(BigInt::from(0)) {
                let out = engine::automorphisms(h)?;
                if out.is_asymmetric {
                    brute.insert(engine::canonical_form(h)?);
                }
            }
            Ok(())
        })
        .expect("enumeration");
        if brute != members {
            note(
                &mut failures,
                format!(
                    "{tag}: enumeration found {} trees, catalogue holds {}",
                    brute.len(),
                    members.len()
                ),
            );
        }
    }

    // Optimum minus packing stays within the construction's own bound.
    for m1 in [6u64, 7, 8] {
        let opt = oracle::max_n2(m1, 2, 1, 12).expect("oracle").expect("feasible");
        let delta = construct::build_delta(m1, 2, 1, 12).expect("delta");
        let gap = int(opt.n2 as i64) - delta.n2.clone();
        let bound = delta.error_bound.clone().expect("bound");
        if gap > bound {
            note(&mut failures, format!("delta({m1}): gap {gap} above bound {bound}"));
        }
    }

    // Planted geometric series a_e = 7 * 3^e: the fitted rate must land
    // within 1% and the exponent-corrected variance must not grow.
    let mut series = Vec::new();
    let mut a = BigUint::from(7u32);
    for _ in 0..18 {
        series.push(a.clone());
        a *= 3u32;
    }
    let est = trees::estimate_growth(&series, 0.0).expect("fit");
    if (est.beta - 3.0).abs() / 3.0 > 0.01 {
        note(&mut failures, format!("geometric rate {} off target 3", est.beta));
    }
    // The exponent diagnostic on a planted polynomial correction:
    // a_i = round(10^6 * 2.5^i * i^(-3/2)) at series position i. Dividing
    // ratios by the matching model factor must collapse their variance to
    // rounding noise. Position 0 is a placeholder; the fit never uses it.
    let mut poly = vec![BigUint::one()];
    for i in 1..=24u32 {
        let v = 1.0e6 * 2.5f64.powi(i as i32) * f64::from(i).powf(-1.5);
        poly.push(BigUint::from(v.round() as u64));
    }
    let est = trees::estimate_growth(&poly, -1.5).expect("fit");
    if est.corrected_ratio_variance > est.raw_ratio_variance {
        note(
            &mut failures,
            format!(
                "correction worsened variance: {} vs {}",
                est.corrected_ratio_variance, est.raw_ratio_variance
            ),
        );
    }
    if est.corrected_ratio_variance > 1.0e-3 {
        note(
            &mut failures,
            format!("corrected variance {} above rounding noise", est.corrected_ratio_variance),
        );
    }
    conclude(
        9,
        "catalogue complete and ordered at 2 parameter sets, gap within bound at m1 = 6..8, rates within 1%".into(),
        failures,
    );
}
