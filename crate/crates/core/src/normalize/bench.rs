use std::io::{self, Write};

use crate::kernel::Kernel;
use crate::term::TermRef;

use super::{NormalizationStats, NormalizeError, Normalizer, Strategy};

pub const CSV_HEADER: &str = "strategy,corpusItem,steps,closures,compositions,nanoseconds";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchmarkRow {
    pub strategy: Strategy,
    pub item: usize,
    pub stats: NormalizationStats,
}

impl BenchmarkRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.strategy,
            self.item,
            self.stats.reduction_steps,
            self.stats.closures_built,
            self.stats.subst_compositions,
            self.stats.wall_time.as_nanos()
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
    /// Items on which a strategy hit its step budget.
    pub failures: Vec<(Strategy, usize, NormalizeError)>,
    /// Items whose normal forms differ between strategies.
    pub disagreements: Vec<usize>,
}

impl BenchmarkReport {
    /// Per-strategy sums over all successfully normalized items.
    pub fn totals(&self) -> Vec<(Strategy, NormalizationStats)> {
        let mut out: Vec<(Strategy, NormalizationStats)> = Vec::new();
        for row in &self.rows {
            let idx = match out.iter().position(|(s, _)| *s == row.strategy) {
                Some(i) => i,
                None => {
                    out.push((row.strategy, NormalizationStats::default()));
                    out.len() - 1
                }
            };
            let acc = &mut out[idx].1;
            acc.reduction_steps += row.stats.reduction_steps;
            acc.closures_built += row.stats.closures_built;
            acc.subst_compositions += row.stats.subst_compositions;
            acc.wall_time += row.stats.wall_time;
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(out, "{}", row.csv_line())?;
        }
        Ok(())
    }
}

/// Normalizes every corpus term under every strategy and checks that the
/// strategies agree on each normal form.
pub fn benchmark_strategies(
    k: &Kernel,
    corpus: &[TermRef],
    strategies: &[Strategy],
) -> BenchmarkReport {
    let mut report = BenchmarkReport::default();
    for (item, t) in corpus.iter().enumerate() {
        let mut normal: Option<TermRef> = None;
        let mut agree = true;
        for &strategy in strategies {
            match Normalizer::new(k, strategy).beta_normalize(t) {
                Ok((nf, stats)) => {
                    match &normal {
                        None => normal = Some(nf),
                        Some(prev) => agree &= *prev == nf,
                    }
                    report.rows.push(BenchmarkRow {
                        strategy,
                        item,
                        stats,
                    });
                }
                Err(e) => report.failures.push((strategy, item, e)),
            }
        }
        if !agree {
            report.disagreements.push(item);
        }
    }
    report
}
