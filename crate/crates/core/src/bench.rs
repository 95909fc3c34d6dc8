//! Experiment harness: sub-sample attributes, run both schema approaches end
//! to end and aggregate the metrics into a per-subset report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kggen::{generate_kg, KnowledgeGraph, DEFAULT_BASE_IRI};
use crate::mapping::{MappingSet, UserInfo};
use crate::metrics::{evaluate, MetricsReport};
use crate::ontology::Ontology;
use crate::reshape::{baseline_schema, reshape, strip_key_suffix, ReshapeOptions};
use crate::schema::KgSchema;
use crate::tabular::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Approach {
    Baseline,
    Reshape,
}

impl Approach {
    pub const ALL: [Approach; 2] = [Approach::Baseline, Approach::Reshape];

    pub fn as_str(self) -> &'static str {
        match self {
            Approach::Baseline => "baseline",
            Approach::Reshape => "reshape",
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Approach {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Approach::Baseline),
            "reshape" => Ok(Approach::Reshape),
            other => Err(Error::Config(format!("unknown approach {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub attribute_counts: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
    pub approaches: BTreeSet<Approach>,
    /// Worker threads; 1 runs everything on the calling thread.
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            attribute_counts: vec![10, 20, 30, 40, 50, 60],
            repetitions: 10,
            seed: 1,
            approaches: Approach::ALL.into_iter().collect(),
            jobs: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.attribute_counts.is_empty() {
            return Err(Error::Config(
                "at least one attribute count is required".into(),
            ));
        }
        if self.attribute_counts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "attribute counts must be strictly increasing".into(),
            ));
        }
        if self.approaches.is_empty() {
            return Err(Error::Config("at least one approach is required".into()));
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub approach: Approach,
    pub attribute_count: usize,
    pub repetition: usize,
    pub report: MetricsReport,
}

/// Everything one approach produces from one dataset.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub schema: KgSchema,
    pub graph: KnowledgeGraph,
    pub ntriples: String,
    pub elapsed_ms: f64,
}

/// Schema derivation, materialization and serialization under one timer.
pub fn run_pipeline(
    approach: Approach,
    onto: &Ontology,
    data: &Dataset,
    mappings: &MappingSet,
    user: &UserInfo,
    options: ReshapeOptions,
) -> Result<PipelineOutput> {
    let start = Instant::now();
    let build = match approach {
        Approach::Baseline => baseline_schema(onto, data, mappings, &user.main_class, options)?,
        Approach::Reshape => reshape(onto, data, mappings, user, options)?,
    };
    let graph = generate_kg(&build.schema, data, mappings)?.graph;
    let ntriples = graph.to_ntriples(DEFAULT_BASE_IRI)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(PipelineOutput {
        schema: build.schema,
        graph,
        ntriples,
        elapsed_ms,
    })
}

/// Attributes of the main table that identify entities; always kept when
/// sub-sampling.
pub fn key_attributes(data: &Dataset, mappings: &MappingSet) -> BTreeSet<String> {
    let main = data.main_table();
    main.attributes()
        .iter()
        .filter(|a| {
            mappings
                .resolve_attribute_class(main.name(), a)
                .is_some_and(|c| strip_key_suffix(c).is_some())
        })
        .cloned()
        .collect()
}

pub fn run_experiment(
    cfg: &ExperimentConfig,
    onto: &Ontology,
    data: &Dataset,
    mappings: &MappingSet,
    user: &UserInfo,
) -> Result<Vec<RunResult>> {
    cfg.validate()?;
    let retained = key_attributes(data, mappings);
    let available = data.main_table().attributes().len() - retained.len();
    let largest = *cfg.attribute_counts.last().expect("validated non-empty");
    if largest > available {
        return Err(Error::SampleTooLarge {
            requested: largest,
            available,
        });
    }

    let mut jobs = Vec::new();
    for &count in &cfg.attribute_counts {
        for repetition in 0..cfg.repetitions {
            for &approach in &cfg.approaches {
                jobs.push((count, repetition, approach));
            }
        }
    }
    let run = |&(count, repetition, approach): &(usize, usize, Approach)| -> Result<RunResult> {
        let sample =
            data.subsample_attributes(count, &retained, cfg.seed.wrapping_add(repetition as u64))?;
        let out = run_pipeline(
            approach,
            onto,
            &sample,
            mappings,
            user,
            ReshapeOptions::default(),
        )?;
        let mut report = evaluate(&out.graph, &out.schema, &sample, out.ntriples.len());
        report.time_cost_ms = out.elapsed_ms;
        Ok(RunResult {
            approach,
            attribute_count: count,
            repetition,
            report,
        })
    };
    if cfg.jobs == 1 {
        return jobs.iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| jobs.par_iter().map(run).collect())
}

/// Mean and maximum of every metric over the repetitions of one subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub approach: Approach,
    pub attribute_count: usize,
    pub runs: usize,
    pub mean: MetricSummary,
    pub max: MetricSummary,
    pub min_coverage: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MetricSummary {
    pub time_cost_ms: f64,
    pub storage_bytes: f64,
    pub class_count: f64,
    pub object_prop_count: f64,
    pub data_prop_count: f64,
    pub entity_count: f64,
    pub dummy_count: f64,
    pub root_to_leaf_depth: f64,
    pub global_depth: f64,
}

impl MetricSummary {
    fn of(r: &MetricsReport) -> Self {
        MetricSummary {
            time_cost_ms: r.time_cost_ms,
            storage_bytes: r.storage_bytes as f64,
            class_count: r.class_count as f64,
            object_prop_count: r.object_prop_count as f64,
            data_prop_count: r.data_prop_count as f64,
            entity_count: r.entity_count as f64,
            dummy_count: r.dummy_count as f64,
            root_to_leaf_depth: r.root_to_leaf_depth as f64,
            global_depth: r.global_depth as f64,
        }
    }

    fn zip(self, o: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        MetricSummary {
            time_cost_ms: f(self.time_cost_ms, o.time_cost_ms),
            storage_bytes: f(self.storage_bytes, o.storage_bytes),
            class_count: f(self.class_count, o.class_count),
            object_prop_count: f(self.object_prop_count, o.object_prop_count),
            data_prop_count: f(self.data_prop_count, o.data_prop_count),
            entity_count: f(self.entity_count, o.entity_count),
            dummy_count: f(self.dummy_count, o.dummy_count),
            root_to_leaf_depth: f(self.root_to_leaf_depth, o.root_to_leaf_depth),
            global_depth: f(self.global_depth, o.global_depth),
        }
    }
}

/// Groups runs by (approach, attribute count), ordered by both.
pub fn aggregate_runs(results: &[RunResult]) -> Result<Vec<Aggregate>> {
    if results.is_empty() {
        return Err(Error::Config("no runs to aggregate".into()));
    }
    let mut groups: BTreeMap<(Approach, usize), Vec<&MetricsReport>> = BTreeMap::new();
    for r in results {
        groups
            .entry((r.approach, r.attribute_count))
            .or_default()
            .push(&r.report);
    }
    Ok(groups
        .into_iter()
        .map(|((approach, attribute_count), reports)| {
            let n = reports.len() as f64;
            let first = MetricSummary::of(reports[0]);
            let (sum, max) = reports[1..].iter().fold((first, first), |(s, m), r| {
                let v = MetricSummary::of(r);
                (s.zip(v, |a, b| a + b), m.zip(v, f64::max))
            });
            Aggregate {
                approach,
                attribute_count,
                runs: reports.len(),
                mean: sum.zip(sum, |a, _| a / n),
                max,
                min_coverage: reports.iter().map(|r| r.data_coverage).fold(1.0, f64::min),
            }
        })
        .collect())
}

pub const EFFICIENCY_LABELS: [&str; 2] = ["time cost (sec)", "storage space (MB)"];

pub const SIMPLICITY_LABELS: [&str; 11] = [
    "#avg. class",
    "#max. class",
    "#object prop.",
    "#data prop.",
    "#entities",
    "#avg. dummy entities",
    "#max. dummy entities",
    "avg. root to leaf depth",
    "max. root to leaf depth",
    "avg. global depth",
    "max. global depth",
];

/// The thirteen report rows for one subset, in label order.
fn report_values(a: &Aggregate) -> [String; 13] {
    let (m, x) = (&a.mean, &a.max);
    [
        format!("{:.4}", m.time_cost_ms / 1000.0),
        format!("{:.4}", m.storage_bytes / 1e6),
        format!("{:.1}", m.class_count),
        format!("{:.1}", x.class_count),
        format!("{:.1}", m.object_prop_count),
        format!("{:.1}", m.data_prop_count),
        format!("{:.1}", m.entity_count),
        format!("{:.1}", m.dummy_count),
        format!("{:.1}", x.dummy_count),
        format!("{:.1}", m.root_to_leaf_depth),
        format!("{:.1}", x.root_to_leaf_depth),
        format!("{:.1}", m.global_depth),
        format!("{:.1}", x.global_depth),
    ]
}

/// Mean time and storage of the baseline divided by those of the reshaped
/// approach, per attribute count.
pub fn ratios(agg: &[Aggregate]) -> Vec<(usize, f64, f64)> {
    let by = |approach| -> BTreeMap<usize, &Aggregate> {
        agg.iter()
            .filter(|a| a.approach == approach)
            .map(|a| (a.attribute_count, a))
            .collect()
    };
    let (base, resh) = (by(Approach::Baseline), by(Approach::Reshape));
    base.iter()
        .filter_map(|(count, b)| {
            let r = resh.get(count)?;
            Some((
                *count,
                b.mean.time_cost_ms / r.mean.time_cost_ms,
                b.mean.storage_bytes / r.mean.storage_bytes,
            ))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedReport {
    pub csv: String,
    pub text: String,
}

/// Renders the aggregate as a CSV document and an aligned text table with one
/// column per attribute subset.
///
/// Rows labelled `time cost (sec)` and `speed ratio` carry wall-clock
/// measurements and differ between otherwise identical runs.
pub fn render_report(agg: &[Aggregate]) -> RenderedReport {
    let counts: Vec<usize> = agg
        .iter()
        .map(|a| a.attribute_count)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let sets: Vec<String> = (1..=counts.len()).map(|i| format!("Set {i}")).collect();
    let approaches: BTreeSet<Approach> = agg.iter().map(|a| a.approach).collect();
    let labels: Vec<&str> = EFFICIENCY_LABELS
        .iter()
        .chain(&SIMPLICITY_LABELS)
        .copied()
        .collect();

    let mut csv_rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["approach".to_string(), "metric".to_string()];
    header.extend(sets.iter().cloned());
    csv_rows.push(header.clone());
    let mut attr_row = vec![String::new(), "#attributes".to_string()];
    attr_row.extend(counts.iter().map(|c| c.to_string()));
    csv_rows.push(attr_row);

    let mut text = String::new();
    let label_width = labels
        .iter()
        .map(|l| l.len())
        .chain(["storage ratio".len(), "#attributes".len()])
        .chain(
            approaches
                .iter()
                .map(|a| format!("data coverage ({a})").len()),
        )
        .max()
        .unwrap_or(0);
    let cell = 10;
    let line = |out: &mut String, label: &str, cells: &[String]| {
        let _ = write!(out, "{label:<label_width$}");
        for c in cells {
            let _ = write!(out, "  {c:>cell$}");
        }
        out.push('\n');
    };

    for approach in &approaches {
        let columns: Vec<Option<[String; 13]>> = counts
            .iter()
            .map(|c| {
                agg.iter()
                    .find(|a| a.approach == *approach && a.attribute_count == *c)
                    .map(report_values)
            })
            .collect();
        let value = |row: usize| -> Vec<String> {
            columns
                .iter()
                .map(|col| {
                    col.as_ref()
                        .map_or_else(|| "-".to_string(), |v| v[row].clone())
                })
                .collect()
        };
        for (i, label) in labels.iter().enumerate() {
            let mut row = vec![approach.to_string(), label.to_string()];
            row.extend(value(i));
            csv_rows.push(row);
        }

        let _ = writeln!(text, "== {approach} ==");
        line(&mut text, "", &sets);
        let attrs: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
        line(&mut text, "#attributes", &attrs);
        for (i, label) in labels.iter().enumerate() {
            if i == 0 {
                let _ = writeln!(text, "Efficiency metrics");
            } else if i == EFFICIENCY_LABELS.len() {
                let _ = writeln!(text, "Simplicity metrics");
            }
            line(&mut text, label, &value(i));
        }
        text.push('\n');
    }

    let _ = writeln!(text, "== summary ==");
    line(&mut text, "", &sets);
    for approach in &approaches {
        let cov: Vec<String> = counts
            .iter()
            .map(|c| {
                agg.iter()
                    .find(|a| a.approach == *approach && a.attribute_count == *c)
                    .map_or_else(|| "-".to_string(), |a| format!("{:.4}", a.min_coverage))
            })
            .collect();
        line(&mut text, &format!("data coverage ({approach})"), &cov);
        let mut row = vec![approach.to_string(), "data coverage".to_string()];
        row.extend(cov);
        csv_rows.push(row);
    }
    let ratio = ratios(agg);
    if !ratio.is_empty() {
        let pick = |f: fn(&(usize, f64, f64)) -> f64| -> Vec<String> {
            counts
                .iter()
                .map(|c| {
                    ratio
                        .iter()
                        .find(|r| r.0 == *c)
                        .map_or_else(|| "-".to_string(), |r| format!("{:.2}", f(r)))
                })
                .collect()
        };
        for (label, cells) in [
            ("speed ratio", pick(|r| r.1)),
            ("storage ratio", pick(|r| r.2)),
        ] {
            line(&mut text, label, &cells);
            let mut row = vec!["summary".to_string(), label.to_string()];
            row.extend(cells);
            csv_rows.push(row);
        }
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &csv_rows {
        w.write_record(row).expect("writing to memory cannot fail");
    }
    let csv = String::from_utf8(w.into_inner().expect("writing to memory cannot fail"))
        .expect("report is valid UTF-8");
    RenderedReport { csv, text }
}

/// One line per run, for re-analysis.
pub fn runs_csv(results: &[RunResult]) -> String {
    let mut out = format!(
        "approach,attributes,repetition,{}\n",
        MetricsReport::CSV_HEADER
    );
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.approach,
            r.attribute_count,
            r.repetition,
            r.report.to_csv_row()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syndata::{generate_synthetic, SynthConfig};

    fn report(depth: usize, dummies: usize) -> MetricsReport {
        MetricsReport {
            data_coverage: 1.0,
            root_to_leaf_depth: depth,
            dummy_count: dummies,
            ..Default::default()
        }
    }

    fn run(approach: Approach, count: usize, repetition: usize, r: MetricsReport) -> RunResult {
        RunResult {
            approach,
            attribute_count: count,
            repetition,
            report: r,
        }
    }

    #[test]
    fn aggregates_mean_and_max() {
        let runs = [
            run(Approach::Reshape, 10, 0, report(1, 0)),
            run(Approach::Reshape, 10, 1, report(3, 0)),
        ];
        let agg = aggregate_runs(&runs).unwrap();
        assert_eq!(agg.len(), 1);
        assert_eq!(agg[0].mean.root_to_leaf_depth, 2.0);
        assert_eq!(agg[0].max.root_to_leaf_depth, 3.0);
        assert_eq!(agg[0].mean.dummy_count, 0.0);
        assert_eq!(agg[0].max.dummy_count, 0.0);

        let single = aggregate_runs(&runs[..1]).unwrap();
        assert_eq!(single[0].mean, single[0].max);
        assert!(aggregate_runs(&[]).is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            ExperimentConfig {
                repetitions: 0,
                ..Default::default()
            },
            ExperimentConfig {
                attribute_counts: vec![20, 10],
                ..Default::default()
            },
            ExperimentConfig {
                attribute_counts: vec![],
                ..Default::default()
            },
            ExperimentConfig {
                approaches: BTreeSet::new(),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    fn inputs(n_attributes: usize) -> crate::syndata::SynthInputs {
        generate_synthetic(&SynthConfig {
            n_attributes,
            n_rows: 20,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn single_run() {
        let s = inputs(12);
        let cfg = ExperimentConfig {
            attribute_counts: vec![10],
            repetitions: 1,
            approaches: [Approach::Reshape].into(),
            ..Default::default()
        };
        let runs = run_experiment(&cfg, &s.ontology, &s.data, &s.mappings, &s.user).unwrap();
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0].report.dummy_count, 0);
        assert_eq!(runs[0].report.data_coverage, 1.0);
    }

    #[test]
    fn too_few_attributes() {
        let s = inputs(5);
        let cfg = ExperimentConfig {
            attribute_counts: vec![10],
            ..Default::default()
        };
        assert!(matches!(
            run_experiment(&cfg, &s.ontology, &s.data, &s.mappings, &s.user),
            Err(Error::SampleTooLarge {
                requested: 10,
                available: 5
            })
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let s = inputs(20);
        let cfg = ExperimentConfig {
            attribute_counts: vec![5, 10],
            repetitions: 3,
            ..Default::default()
        };
        let strip = |runs: Vec<RunResult>| -> Vec<RunResult> {
            runs.into_iter()
                .map(|mut r| {
                    r.report.time_cost_ms = 0.0;
                    r
                })
                .collect()
        };
        let seq = strip(run_experiment(&cfg, &s.ontology, &s.data, &s.mappings, &s.user).unwrap());
        let par_cfg = ExperimentConfig { jobs: 4, ..cfg };
        let par =
            strip(run_experiment(&par_cfg, &s.ontology, &s.data, &s.mappings, &s.user).unwrap());
        assert_eq!(seq.len(), 2 * 2 * 3);
        assert_eq!(seq, par);
    }

    #[test]
    fn report_has_every_label_per_approach() {
        let s = inputs(20);
        let cfg = ExperimentConfig {
            attribute_counts: vec![5, 10, 15],
            repetitions: 2,
            ..Default::default()
        };
        let runs = run_experiment(&cfg, &s.ontology, &s.data, &s.mappings, &s.user).unwrap();
        let rendered = render_report(&aggregate_runs(&runs).unwrap());
        let mut reader = csv::Reader::from_reader(rendered.csv.as_bytes());
        let header = reader.headers().unwrap().clone();
        assert_eq!(
            header.iter().collect::<Vec<_>>(),
            ["approach", "metric", "Set 1", "Set 2", "Set 3"]
        );
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        for approach in ["baseline", "reshape"] {
            let labels: Vec<&str> = rows
                .iter()
                .filter(|r| &r[0] == approach)
                .map(|r| &r[1])
                .collect();
            let expected: Vec<&str> = EFFICIENCY_LABELS
                .iter()
                .chain(&SIMPLICITY_LABELS)
                .copied()
                .chain(["data coverage"])
                .collect();
            assert_eq!(labels, expected);
        }
        let dummies = rows
            .iter()
            .find(|r| &r[0] == "reshape" && &r[1] == "#max. dummy entities")
            .unwrap();
        assert_eq!(
            dummies.iter().skip(2).collect::<Vec<_>>(),
            ["0.0", "0.0", "0.0"]
        );
        for label in SIMPLICITY_LABELS {
            assert!(rendered.text.contains(label));
        }
        assert!(rendered.text.contains("speed ratio"));
    }

    #[test]
    fn single_count_gives_single_column() {
        let s = inputs(10);
        let cfg = ExperimentConfig {
            attribute_counts: vec![10],
            repetitions: 1,
            ..Default::default()
        };
        let runs = run_experiment(&cfg, &s.ontology, &s.data, &s.mappings, &s.user).unwrap();
        let csv = render_report(&aggregate_runs(&runs).unwrap()).csv;
        assert!(csv.lines().all(|l| l.split(',').count() == 3));
    }
}
