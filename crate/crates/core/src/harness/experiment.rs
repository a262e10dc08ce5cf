//! Ratio experiments against the exact oracle, emitted as JSON lines.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::generate::{generate, Family, InstanceSpec};
use crate::error::{Error, Result};
use crate::exact::{lcs_exact_capped, lcs_length, DEFAULT_MAX_CELLS};
use crate::multi::{lcs_approx, Guarantee, SolveConfig, SolveMode, SolveReport};
use crate::primitives::{approx_ed_lcs, best_match, Candidate, EdApproximator, Strategy};
use crate::schedule::{derive_schedule, ConstantSchedule};
use crate::types::{validate_witness, SymbolString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    BestMatch,
    Binary,
    Equal,
    Reduce,
    Auto,
    ApproxEd,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::BestMatch,
        Algorithm::Binary,
        Algorithm::Equal,
        Algorithm::Reduce,
        Algorithm::Auto,
        Algorithm::ApproxEd,
        Algorithm::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::BestMatch => "bm",
            Algorithm::Binary => "binary",
            Algorithm::Equal => "equal",
            Algorithm::Reduce => "reduce",
            Algorithm::Auto => "auto",
            Algorithm::ApproxEd => "approx-ed",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Spec {
                field: "algorithm",
                reason: format!("unknown algorithm {s:?}"),
            })
    }
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Run one algorithm and return its report. The schedule is the one
/// derived for the input's alphabet unless overridden.
pub fn run_algorithm(
    algorithm: Algorithm,
    a: &SymbolString,
    b: &SymbolString,
    schedule: Option<ConstantSchedule>,
    ed: &dyn EdApproximator,
    max_cells: u64,
) -> Result<SolveReport> {
    let sc = schedule.unwrap_or_else(|| derive_schedule(a.sigma(), ed.ratio()));
    let single = |c: Candidate, guarantee| SolveReport {
        path: c.label(),
        candidates: vec![c.clone()],
        answer: c,
        schedule: sc,
        exact: None,
        guarantee,
        stats: None,
    };
    let mode = match algorithm {
        Algorithm::BestMatch => return Ok(single(best_match(a, b)?, Guarantee::BaselineOnly)),
        Algorithm::ApproxEd => return Ok(single(approx_ed_lcs(a, b, ed)?, Guarantee::Improved)),
        Algorithm::Exact => {
            let (_, w) = lcs_exact_capped(a, b, max_cells)?;
            return Ok(single(
                Candidate::new(Strategy::Exact, w.into_pairs()),
                Guarantee::Improved,
            ));
        }
        Algorithm::Binary => SolveMode::Binary,
        Algorithm::Equal => SolveMode::Equal,
        Algorithm::Reduce => SolveMode::Reduce,
        Algorithm::Auto => SolveMode::Auto,
    };
    let config = SolveConfig {
        mode,
        schedule,
        ..SolveConfig::default()
    };
    lcs_approx(a, b, &config, ed)
}

/// An instance spec plus a repeat count; repeats use seeds `seed, seed+1, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceTemplate {
    pub spec: InstanceSpec,
    pub repeat: usize,
}

impl Serialize for InstanceTemplate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut value = serde_json::to_value(&self.spec).map_err(serde::ser::Error::custom)?;
        if let Some(map) = value.as_object_mut() {
            map.insert("repeat".into(), self.repeat.into());
        }
        value.serialize(s)
    }
}

impl<'de> Deserialize<'de> for InstanceTemplate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let mut map = serde_json::Map::deserialize(d)?;
        let repeat = match map.remove("repeat") {
            None => 1,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| D::Error::custom("repeat must be a non-negative integer"))?
                as usize,
        };
        let spec =
            serde_json::from_value(serde_json::Value::Object(map)).map_err(D::Error::custom)?;
        Ok(InstanceTemplate { spec, repeat })
    }
}

fn default_max_cells() -> u64 {
    DEFAULT_MAX_CELLS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instances: Vec<InstanceTemplate>,
    pub algorithms: Vec<Algorithm>,
    /// Exact ratios are attached when `n·m` is at most this.
    #[serde(default = "default_max_cells")]
    pub max_cells: u64,
    /// Adds `wall_time_us` to records; output is then no longer reproducible.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub schedule: Option<ConstantSchedule>,
}

impl ExperimentConfig {
    pub fn expand(&self) -> Vec<InstanceSpec> {
        self.instances
            .iter()
            .flat_map(|t| {
                (0..t.repeat as u64).map(move |k| InstanceSpec {
                    seed: t.spec.seed.wrapping_add(k),
                    ..t.spec.clone()
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub id: usize,
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub instance: InstanceMeta,
    pub algorithm: Algorithm,
    pub length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<usize>,
    /// `length / exact`, or 1 when the exact LCS is empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_us: Option<u64>,
    pub path: String,
    pub guarantee: String,
    /// Best length per candidate label.
    pub candidates: BTreeMap<String, usize>,
    pub schedule: ConstantSchedule,
    pub schedule_digest: String,
}

/// First 16 hex digits of the SHA-256 of the schedule's JSON form.
pub fn schedule_digest(schedule: &ConstantSchedule) -> String {
    let json = serde_json::to_vec(schedule).expect("schedule serializes");
    Sha256::digest(&json)
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn ratio(length: usize, exact: usize) -> f64 {
    if exact == 0 {
        1.0
    } else {
        length as f64 / exact as f64
    }
}

fn run_instance(
    id: usize,
    spec: &InstanceSpec,
    config: &ExperimentConfig,
    ed: &dyn EdApproximator,
) -> Result<Vec<ReportRecord>> {
    let (a, b) = generate(spec)?;
    let cells = a.len() as u64 * b.len() as u64;
    let exact = if cells <= config.max_cells {
        Some(lcs_length(&a, &b, config.max_cells)?)
    } else {
        None
    };
    if let (Some(lcs), Family::CasePortfolio) = (exact, spec.family) {
        // lcs <= min(0(X),0(Y)) + min(1(X),1(Y)) <= 0(Y) + 1(X)
        let bound = a.histogram().count(1) + b.histogram().count(0);
        if lcs > bound {
            return Err(Error::ContractViolation(format!(
                "instance {id}: lcs {lcs} exceeds 0(Y) + 1(X) = {bound}"
            )));
        }
    }
    let meta = InstanceMeta {
        id,
        family: spec.family,
        n: a.len(),
        m: b.len(),
        s: spec.s,
        seed: spec.seed,
    };
    let mut out = Vec::with_capacity(config.algorithms.len());
    for &algorithm in &config.algorithms {
        let start = Instant::now();
        let report = run_algorithm(algorithm, &a, &b, config.schedule, ed, config.max_cells)?;
        let elapsed = start.elapsed();
        for c in &report.candidates {
            if !validate_witness(&a, &b, &c.witness) {
                return Err(Error::InvalidWitness(format!(
                    "{} on instance {id} ({algorithm})",
                    c.label()
                )));
            }
        }
        let length = report.len();
        if let Some(lcs) = exact {
            if length > lcs {
                return Err(Error::ContractViolation(format!(
                    "instance {id}: {algorithm} returned {length} > lcs {lcs}"
                )));
            }
        }
        let mut candidates = BTreeMap::new();
        for c in &report.candidates {
            let e = candidates.entry(c.label()).or_insert(0);
            *e = (*e).max(c.len());
        }
        out.push(ReportRecord {
            instance: meta.clone(),
            algorithm,
            length,
            exact,
            ratio: exact.map(|lcs| ratio(length, lcs)),
            wall_time_us: config.record_timing.then(|| elapsed.as_micros() as u64),
            path: report.path.clone(),
            guarantee: match report.guarantee {
                Guarantee::Improved => "improved".into(),
                Guarantee::BaselineOnly => "baseline-only".into(),
            },
            candidates,
            schedule_digest: schedule_digest(&report.schedule),
            schedule: report.schedule,
        });
    }
    Ok(out)
}

/// Evaluate every `(instance, algorithm)` pair. Instances run in parallel;
/// records come back ordered by instance id, then algorithm order.
pub fn run_experiment(
    config: &ExperimentConfig,
    ed: &dyn EdApproximator,
) -> Result<Vec<ReportRecord>> {
    if config.algorithms.is_empty() {
        return Err(Error::Spec {
            field: "algorithms",
            reason: "at least one algorithm is required".into(),
        });
    }
    let specs = config.expand();
    for spec in &specs {
        spec.validate()?;
    }
    let per_instance: Vec<Vec<ReportRecord>> = specs
        .par_iter()
        .enumerate()
        .map(|(id, spec)| run_instance(id, spec, config, ed))
        .collect::<Result<_>>()?;
    Ok(per_instance.into_iter().flatten().collect())
}

/// One JSON object per line.
pub fn write_jsonl(records: &[ReportRecord], mut out: impl Write) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::BandedExactEd;

    fn config(json: &str) -> ExperimentConfig {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn uniform_binary_portfolio_dominates_bm() {
        let cfg = config(
            r#"{"instances":[{"family":"uniform-random","n":512,"s":2,"seed":100,"repeat":100}],
                "algorithms":["bm","binary"]}"#,
        );
        let records = run_experiment(&cfg, &BandedExactEd).unwrap();
        assert_eq!(records.len(), 200);
        for pair in records.chunks(2) {
            assert_eq!(pair[0].instance, pair[1].instance);
            let (bm, bin) = (pair[0].ratio.unwrap(), pair[1].ratio.unwrap());
            assert!(bin >= bm);
            assert!(bin <= 1.0 && bin >= 0.5);
        }
    }

    #[test]
    fn adversarial_equal_beats_bm() {
        let cfg = config(
            r#"{"instances":[{"family":"unary-adversarial","n":3000,"s":3,"seed":1}],
                "algorithms":["bm","equal"]}"#,
        );
        let records = run_experiment(&cfg, &BandedExactEd).unwrap();
        assert!(records[1].ratio.unwrap() > records[0].ratio.unwrap());
    }

    #[test]
    fn records_round_trip_and_are_stable() {
        let cfg = config(
            r#"{"instances":[{"family":"skewed-random","n":40,"m":30,"s":3,"seed":5,"repeat":3},
                             {"family":"case-portfolio","n":64,"m":48,"s":2,"seed":1,"layout":"blocks"}],
                "algorithms":["bm","auto","exact"]}"#,
        );
        let r1 = run_experiment(&cfg, &BandedExactEd).unwrap();
        let r2 = run_experiment(&cfg, &BandedExactEd).unwrap();
        let (mut b1, mut b2) = (Vec::new(), Vec::new());
        write_jsonl(&r1, &mut b1).unwrap();
        write_jsonl(&r2, &mut b2).unwrap();
        assert_eq!(b1, b2);
        let text = String::from_utf8(b1).unwrap();
        let first: ReportRecord = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first, r1[0]);
        assert!(!text.contains("wall_time_us"));
        assert!(r1.iter().all(|r| r.ratio.is_some() == r.exact.is_some()));
        assert!(r1
            .iter()
            .filter(|r| r.algorithm == Algorithm::Exact)
            .all(|r| r.ratio == Some(1.0)));
        assert_eq!(r1.iter().map(|r| r.instance.id).max(), Some(3));

        // reduce needs s > 2
        let cfg = config(
            r#"{"instances":[{"family":"case-portfolio","n":64,"m":48,"s":2,"seed":1}],
                "algorithms":["reduce"]}"#,
        );
        assert!(matches!(
            run_experiment(&cfg, &BandedExactEd),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn timing_and_cap() {
        let cfg = config(
            r#"{"instances":[{"family":"uniform-random","n":100,"s":2,"seed":1}],
                "algorithms":["bm"],"record_timing":true,"max_cells":100}"#,
        );
        let r = run_experiment(&cfg, &BandedExactEd).unwrap();
        assert!(r[0].wall_time_us.is_some());
        assert!(r[0].exact.is_none() && r[0].ratio.is_none());
    }

    #[test]
    fn bad_configs() {
        let cfg = config(
            r#"{"instances":[{"family":"uniform-random","n":0,"s":2,"seed":1}],"algorithms":["bm"]}"#,
        );
        assert!(matches!(
            run_experiment(&cfg, &BandedExactEd),
            Err(Error::Spec { field: "n", .. })
        ));
        assert!(serde_json::from_str::<ExperimentConfig>(
            r#"{"instances":[],"algorithms":["quick"]}"#
        )
        .is_err());
        let cfg = config(r#"{"instances":[],"algorithms":[]}"#);
        assert!(run_experiment(&cfg, &BandedExactEd).is_err());
    }

    #[test]
    fn digest_is_stable() {
        let d = schedule_digest(&derive_schedule(2, 1.0));
        assert_eq!(d.len(), 16);
        assert_eq!(d, schedule_digest(&derive_schedule(2, 1.0)));
        assert_ne!(d, schedule_digest(&derive_schedule(3, 1.0)));
    }
}
