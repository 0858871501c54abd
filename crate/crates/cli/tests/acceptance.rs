use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use labeled_simplicity::automaton::range_stabilization;
use labeled_simplicity::conditions::{classify_loops, simplicity_verdict, Limits};
use labeled_simplicity::fixtures;
use labeled_simplicity::oracle::{
    condition_l_graph, cross_check, disagreeable_bruteforce, fuzz_graphs, graph_cofinal,
    ConsistencyReport, FuzzParams,
};
use labeled_simplicity::witness::check_hereditary_saturated;
use labeled_simplicity::{stable_partition, LabeledGraph, Witness, Word};
use labeled_simplicity_cli::AnalysisReport;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn corpus(
    count: usize,
    max_vertices: usize,
    seed: u64,
    trivial: bool,
) -> (Vec<LabeledGraph>, usize) {
    let p = FuzzParams {
        count,
        max_vertices,
        seed,
        trivial_labeling: trivial,
        ..FuzzParams::default()
    };
    let mut s = fuzz_graphs(p).expect("valid params");
    let graphs: Vec<_> = s.by_ref().collect();
    (graphs, s.discarded())
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    }
}

fn fixture_verdicts() -> Outcome {
    let start = Instant::now();
    let lim = Limits::default();
    let mut problems = Vec::new();
    let mut check = |name: &str, cond: bool, what: &str| {
        if !cond {
            problems.push(format!("{name}: {what}"));
        }
    };
    let r = |name: &str| simplicity_verdict(&fixtures::load(name), lim).expect("in scope");

    let g1 = r("G1");
    check(
        "G1",
        !g1.simple && !g1.disagreeable.holds,
        "expected not simple, not disagreeable",
    );
    check("G2", r("G2").simple, "expected simple");

    let g3 = fixtures::load("G3");
    let r3 = r("G3");
    let aab_v1 = r3.cycles_without_exit.iter().any(|c| {
        g3.format_word(&c.word) == "aab"
            && r3.atoms.vertex_set(&c.set) == g3.set_of(&["v1"]).unwrap()
    });
    check(
        "G3",
        !r3.simple && !r3.disagreeable.holds,
        "expected not simple, not disagreeable",
    );
    check("G3", aab_v1, "expected cycle (aab, {v1}) without exit");
    check(
        "G3",
        !r3.proper_hereditary_saturated.holds,
        "expected no proper HS family",
    );

    let r4 = r("G4");
    check(
        "G4",
        !r4.simple && !r4.strongly_cofinal.holds && !r4.disagreeable.holds,
        "expected not simple, not strongly cofinal, not disagreeable",
    );

    let g5 = fixtures::load("G5");
    let r5 = r("G5");
    check(
        "G5",
        !r5.simple && g5.has_trivial_labeling() && !condition_l_graph(&g5),
        "expected not simple, trivial labeling, Condition (L) failing",
    );

    let g6 = fixtures::load("G6");
    let r6 = r("G6");
    let hs_v = match &r6.proper_hereditary_saturated.witness {
        Some(Witness::ProperHereditarySaturated { members, .. }) => {
            let sets: Vec<_> = members.iter().map(|m| r6.atoms.vertex_set(m)).collect();
            sets == vec![g6.empty_set(), g6.set_of(&["v"]).unwrap()]
        }
        _ => false,
    };
    check(
        "G6",
        !r6.simple && !r6.strongly_cofinal.holds,
        "expected not simple, not strongly cofinal",
    );
    check("G6", hs_v, "expected proper HS family {∅, {v}}");

    check("G8", r("G8").simple, "expected simple");

    let g10 = fixtures::load("G10");
    let atoms10 = stable_partition(&g10);
    let loops = classify_loops(&g10, &atoms10, 1, lim).expect("loops");
    let u = atoms10.element_of(&g10.set_of(&["u"]).unwrap()).unwrap();
    let type_two = loops
        .loops
        .iter()
        .any(|l| l.set == u && g10.format_word(&l.word) == "a" && l.exit_type_two);
    check("G10", type_two, "expected loop (a, {u}) with type-II exit");

    if !problems.is_empty() {
        return Err(problems.join("; "));
    }
    within(start.elapsed(), Duration::from_secs(1), "fixture table")?;
    Ok(format!("8 fixture rows match in {:?}", start.elapsed()))
}

fn atom_goldens() -> Outcome {
    let mut problems = Vec::new();
    let g3 = stable_partition(&fixtures::load("G3"));
    if g3.len() != 3 || g3.stabilization_level() != 2 {
        problems.push(format!(
            "G3: {} atoms at level {}",
            g3.len(),
            g3.stabilization_level()
        ));
    }
    let g5 = stable_partition(&fixtures::load("G5"));
    if g5.atoms().iter().any(|a| a.count() != 1) || g5.stabilization_level() != 1 {
        problems.push(format!(
            "G5: {:?} at level {}",
            g5.atoms(),
            g5.stabilization_level()
        ));
    }
    let g2 = stable_partition(&fixtures::load("G2"));
    if g2.len() != 1 {
        problems.push(format!("G2: {} atoms", g2.len()));
    }
    if problems.is_empty() {
        Ok("G3 3 atoms at level 2, G5 singletons at level 1, G2 one atom".into())
    } else {
        Err(problems.join("; "))
    }
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let lim = Limits::default();
    let mut graphs: Vec<LabeledGraph> = fixtures::NAMES
        .iter()
        .filter(|&&n| n != "G7")
        .map(|n| fixtures::load(n))
        .collect();
    let (fuzz, discarded) = corpus(200, 5, 42, false);
    graphs.extend(fuzz);
    let mismatches: Vec<String> = graphs
        .par_iter()
        .filter_map(|g| {
            let atoms = stable_partition(g);
            let r = simplicity_verdict(g, lim).expect("in scope");
            let b = disagreeable_bruteforce(g, &atoms, lim).expect("within bound");
            (b.holds != r.disagreeable.holds).then(|| g.to_text())
        })
        .collect();
    if !mismatches.is_empty() {
        return Err(format!(
            "{} mismatches, first:\n{}",
            mismatches.len(),
            mismatches[0]
        ));
    }
    within(start.elapsed(), Duration::from_secs(60), "oracle agreement")?;
    Ok(format!(
        "{} graphs (9 fixtures + 200 fuzz, {discarded} non-WLR discarded), 0 mismatches in {:?}",
        graphs.len(),
        start.elapsed()
    ))
}

fn trivial_labeling() -> Outcome {
    let start = Instant::now();
    let lim = Limits::default();
    let (graphs, _) = corpus(300, 6, 43, true);
    let mismatches: Vec<String> = graphs
        .par_iter()
        .filter_map(|g| {
            let r = simplicity_verdict(g, lim).expect("in scope");
            let l = condition_l_graph(g);
            let classical = l && graph_cofinal(g);
            (!g.has_trivial_labeling() || r.disagreeable.holds != l || r.simple != classical)
                .then(|| g.to_text())
        })
        .collect();
    if !mismatches.is_empty() {
        return Err(format!(
            "{} mismatches, first:\n{}",
            mismatches.len(),
            mismatches[0]
        ));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60), "trivial labeling")?;
    let simple = graphs
        .iter()
        .filter(|g| condition_l_graph(g) && graph_cofinal(g))
        .count();
    Ok(format!(
        "{} trivially labeled graphs, {simple} classically simple, 0 mismatches in {elapsed:?}",
        graphs.len()
    ))
}

fn condition_equivalence(
    reports: &[ConsistencyReport],
    discarded: usize,
    elapsed: Duration,
) -> Outcome {
    let domain: Vec<_> = reports.iter().filter(|r| r.domain_condition).collect();
    let bad: Vec<_> = domain
        .iter()
        .filter(|r| r.simple != r.condition_c)
        .collect();
    if let Some(r) = bad.first() {
        return Err(format!(
            "{} violations, first:\n{}",
            bad.len(),
            r.graph_text
        ));
    }
    within(elapsed, Duration::from_secs(300), "condition equivalence")?;
    Ok(format!(
        "{} graphs, {} with domain condition, {} without it and not compared, {discarded} non-WLR discarded, 0 violations in {elapsed:?}",
        reports.len(),
        domain.len(),
        reports.len() - domain.len()
    ))
}

fn implication_chain(reports: &[&ConsistencyReport]) -> Outcome {
    let first = reports
        .iter()
        .filter(|r| r.disagreeable && !r.bounded_loops_have_exits)
        .count();
    let second = reports
        .iter()
        .filter(|r| r.bounded_loops_have_exits && r.cycles_without_exit > 0)
        .count();
    let mixed = reports
        .iter()
        .filter(|r| r.disagreeable && r.cycles_without_exit > 0)
        .count();
    let others: Vec<_> = reports
        .iter()
        .flat_map(|r| r.violations.iter().map(move |v| (v, &r.graph_text)))
        .collect();
    if first + second + mixed > 0 || !others.is_empty() {
        return Err(format!(
            "disagreeable with loop lacking exit {first}, exits with cycle lacking exit {second}, disagreeable with cycle lacking exit {mixed}, other violations {:?}",
            others.first()
        ));
    }
    let notes: usize = reports.iter().map(|r| r.notes.len()).sum();
    Ok(format!(
        "{} graphs, loops bounded by 2 x atoms, 0 chain breaks, {notes} informational non-implication findings",
        reports.len()
    ))
}

fn realizable_word(
    rng: &mut ChaCha8Rng,
    g: &LabeledGraph,
    start: &labeled_simplicity::VertexSet,
) -> Word {
    let len = rng.random_range(1..=4);
    let mut w = Word::epsilon();
    let mut cur = start.clone();
    for _ in 0..len {
        let out = g.out_labels(&cur);
        let l = out[rng.random_range(0..out.len())];
        cur = g.letter_image(&cur, l);
        w.push(l);
    }
    w
}

fn stabilization_and_saturation(
    graphs: &[&LabeledGraph],
    reports: &[&ConsistencyReport],
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let mut problems = Vec::new();
    for i in 0..100 {
        let g = graphs[rng.random_range(0..graphs.len())];
        let atoms = stable_partition(g);
        let elements: Vec<_> = atoms.elements().skip(1).collect();
        let a0 = atoms.vertex_set(&elements[rng.random_range(0..elements.len())]);
        let beta = realizable_word(&mut rng, g, &a0);
        let n = match range_stabilization(g, &a0, &beta) {
            Ok(n) => n,
            Err(e) => {
                problems.push(format!("pair {i}: {e}"));
                continue;
            }
        };
        let p = beta.len();
        // enough steps for every (range, phase) pair to have repeated
        let horizon = n + 2 * n * p + (1 << g.vertex_count()) * p;
        let mut ranges = Vec::with_capacity(horizon);
        let mut cur = a0.clone();
        for j in 0..horizon {
            cur = g.letter_image(&cur, beta.labels()[j % p]);
            ranges.push(cur.clone());
        }
        let cover = |m: usize| {
            ranges[..m]
                .iter()
                .fold(g.empty_set(), |acc, s| acc.union(s))
        };
        let cn = cover(n);
        if (1..=2 * n * p).any(|k| !ranges[n + k - 1].is_subset(&cn)) {
            problems.push(format!(
                "pair {i}: N = {n} fails within k <= 2N|β|\n{}",
                g.to_text()
            ));
        }
        if n > 1 {
            let c = cover(n - 1);
            if ranges[n - 1..].iter().all(|t| t.is_subset(&c)) {
                problems.push(format!("pair {i}: N = {n} is not least"));
            }
        }
    }
    let mut families = 0;
    for (g, r) in graphs.iter().zip(reports) {
        if !r.proper_hereditary_saturated {
            continue;
        }
        let report = simplicity_verdict(g, Limits::default()).expect("in scope");
        if let Some(Witness::ProperHereditarySaturated { members, .. }) =
            &report.proper_hereditary_saturated.witness
        {
            families += 1;
            let depth = 2 * report.atoms.len();
            if let Err(e) = check_hereditary_saturated(g, &report.atoms, members, depth) {
                problems.push(format!("HS family: {e}\n{}", g.to_text()));
            }
        }
    }
    if problems.is_empty() {
        Ok(format!(
            "100 (A0, β) pairs stabilize as stated, {families} HS families pass the sweep to depth 2 x atoms"
        ))
    } else {
        Err(format!(
            "{} failures, first: {}",
            problems.len(),
            problems[0]
        ))
    }
}

fn witness_replay() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_lgsimple");
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");
    let mut replayed = 0;
    for name in fixtures::NAMES {
        let path = format!("{dir}/{name}.lg");
        let out = Command::new(bin)
            .args(["analyze", "--json", "--verify-witness", &path])
            .output()
            .map_err(|e| format!("cannot run {bin}: {e}"))?;
        let code = out.status.code();
        if name == "G7" {
            if code != Some(2) {
                return Err(format!("G7: expected exit 2, got {code:?}"));
            }
            continue;
        }
        if code != Some(0) {
            return Err(format!("{name}: exit {code:?}"));
        }
        let report: AnalysisReport =
            serde_json::from_slice(&out.stdout).map_err(|e| format!("{name}: {e}"))?;
        let entries = report.witness_replay.unwrap_or_default();
        if let Some(bad) = entries.iter().find(|e| !e.ok) {
            return Err(format!("{name}: {} {:?}", bad.condition, bad.error));
        }
        replayed += entries.len();
    }
    Ok(format!(
        "{replayed} witnesses across 9 in-scope fixtures replay, G7 refused with exit 2"
    ))
}

fn cross_check_all(graphs: &[LabeledGraph]) -> Vec<ConsistencyReport> {
    graphs
        .par_iter()
        .map(|g| cross_check(g, Limits::default()).expect("within bounds"))
        .collect()
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = vec![
        ("fixture verdict table", fixture_verdicts()),
        ("atom-table goldens", atom_goldens()),
        ("oracle agreement", oracle_agreement()),
    ];

    results.push(("trivial-labeling reduction", trivial_labeling()));
    let (trivial, _) = corpus(300, 6, 43, true);

    let start = Instant::now();
    let (main_corpus, discarded) = corpus(500, 6, 44, false);
    let main_reports = cross_check_all(&main_corpus);
    results.push((
        "equivalence under the domain condition",
        condition_equivalence(&main_reports, discarded, start.elapsed()),
    ));

    let (labeled, _) = corpus(200, 5, 42, false);
    let mut full_graphs: Vec<&LabeledGraph> = labeled.iter().chain(&trivial).collect();
    let side_reports =
        cross_check_all(&labeled.iter().chain(&trivial).cloned().collect::<Vec<_>>());
    full_graphs.extend(&main_corpus);
    let full_reports: Vec<&ConsistencyReport> = side_reports.iter().chain(&main_reports).collect();
    results.push(("implication chain", implication_chain(&full_reports)));
    results.push((
        "range stabilization and saturation sweep",
        stabilization_and_saturation(&full_graphs, &full_reports),
    ));
    results.push(("witness replay", witness_replay()));

    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
