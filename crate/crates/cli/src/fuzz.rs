use std::fs;
use std::path::{Path, PathBuf};

use labeled_simplicity::conditions::Limits;
use labeled_simplicity::oracle::{cross_check, fuzz_graphs, ConsistencyReport, FuzzParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Per-condition tallies over a fuzz run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub checked: usize,
    pub discarded_not_wlr: usize,
    pub skipped: usize,
    pub skip_reasons: Vec<String>,
    pub disagreeable: usize,
    pub strongly_cofinal: usize,
    pub simple: usize,
    pub condition_c: usize,
    pub domain_condition: usize,
    pub with_cycle_without_exit: usize,
    pub with_proper_hereditary_saturated: usize,
    pub trivially_labeled: usize,
    pub violations: usize,
    pub violation_messages: Vec<String>,
    pub notes: Vec<String>,
    pub dumps: Vec<PathBuf>,
}

impl FuzzSummary {
    pub fn render(&self) -> String {
        let mut lines = vec![
            format!(
                "{} graphs checked (seed {}), {} discarded as not weakly left-resolving, {} skipped",
                self.checked, self.seed, self.discarded_not_wlr, self.skipped
            ),
            format!(
                "disagreeable {}, strongly cofinal {}, simple {}",
                self.disagreeable, self.strongly_cofinal, self.simple
            ),
            format!(
                "condition (c) {}, domain condition {}, with cycle without exit {}, with proper hereditary saturated family {}",
                self.condition_c,
                self.domain_condition,
                self.with_cycle_without_exit,
                self.with_proper_hereditary_saturated
            ),
            format!("trivially labeled {}", self.trivially_labeled),
            format!("violations {}", self.violations),
        ];
        lines.extend(
            self.violation_messages
                .iter()
                .map(|m| format!("  violation: {m}")),
        );
        lines.extend(self.skip_reasons.iter().map(|m| format!("  skipped: {m}")));
        lines.extend(self.notes.iter().map(|m| format!("  note: {m}")));
        lines.extend(
            self.dumps
                .iter()
                .map(|p| format!("  dumped {}", p.display())),
        );
        lines.join("\n") + "\n"
    }
}

fn dump(dir: &Path, index: usize, r: &ConsistencyReport) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("violation-{index:04}.lg"));
    let mut text = String::new();
    for v in &r.violations {
        text.push_str(&format!("# {v}\n"));
    }
    text.push_str(&r.graph_text);
    fs::write(&path, text)?;
    Ok(path)
}

/// Cross-checks `params.count` generated graphs. Graphs are produced
/// sequentially from the seed and evaluated in parallel; violating graphs
/// are written to `out` in the fixture format.
pub fn run_fuzz(
    params: FuzzParams,
    limits: Limits,
    out: Option<&Path>,
) -> anyhow::Result<FuzzSummary> {
    let mut stream = fuzz_graphs(params)?;
    let graphs: Vec<_> = stream.by_ref().collect();
    let results: Vec<_> = graphs.par_iter().map(|g| cross_check(g, limits)).collect();
    let mut s = FuzzSummary {
        seed: params.seed,
        discarded_not_wlr: stream.discarded(),
        ..FuzzSummary::default()
    };
    for (i, result) in results.into_iter().enumerate() {
        let r = match result {
            Ok(r) => r,
            Err(e) => {
                s.skipped += 1;
                s.skip_reasons.push(format!("graph {i}: {e}"));
                continue;
            }
        };
        s.checked += 1;
        s.disagreeable += r.disagreeable as usize;
        s.strongly_cofinal += r.strongly_cofinal as usize;
        s.simple += r.simple as usize;
        s.condition_c += r.condition_c as usize;
        s.domain_condition += r.domain_condition as usize;
        s.with_cycle_without_exit += (r.cycles_without_exit > 0) as usize;
        s.with_proper_hereditary_saturated += r.proper_hereditary_saturated as usize;
        s.trivially_labeled += r.trivial_labeling.is_some() as usize;
        s.notes
            .extend(r.notes.iter().map(|n| format!("graph {i}: {n}")));
        if !r.is_consistent() {
            s.violations += 1;
            s.violation_messages
                .extend(r.violations.iter().map(|v| format!("graph {i}: {v}")));
            if let Some(dir) = out {
                s.dumps.push(dump(dir, i, &r)?);
            }
        }
    }
    Ok(s)
}
