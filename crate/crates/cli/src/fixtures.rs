//! Golden-file runner: `name.session` next to `name.expected.json`.

use crate::exec::{run_text, Options};
use serde_json::{json, Value};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub const SESSION_EXT: &str = "session";
pub const EXPECTED_SUFFIX: &str = ".expected.json";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Mismatch { expected: String, actual: String },
    MissingExpectation,
}

#[derive(Debug, Clone)]
pub struct FixtureResult {
    pub name: String,
    pub outcome: Outcome,
}

impl FixtureResult {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

#[derive(Debug, Clone, Default)]
pub struct FixtureReport {
    pub results: Vec<FixtureResult>,
    pub warnings: Vec<String>,
}

impl FixtureReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed())
    }

    pub fn failed(&self) -> Vec<&str> {
        self.results.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect()
    }

    pub fn summary_json(&self) -> Value {
        let passed = self.results.iter().filter(|r| r.passed()).count();
        json!({"total": self.results.len(), "passed": passed, "failed": self.failed()})
    }

    pub fn to_json(&self) -> Value {
        let results: Vec<Value> = self
            .results
            .iter()
            .map(|r| {
                let status = match r.outcome {
                    Outcome::Pass => "pass",
                    Outcome::Mismatch { .. } => "mismatch",
                    Outcome::MissingExpectation => "missing-expectation",
                };
                json!({"name": r.name, "status": status})
            })
            .collect();
        let mut v = self.summary_json();
        v["fixtures"] = json!(results);
        v["warnings"] = json!(self.warnings);
        v
    }

    /// One line per fixture, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            match &r.outcome {
                Outcome::Pass => out.push_str(&format!("PASS {}\n", r.name)),
                Outcome::MissingExpectation => out.push_str(&format!("FAIL {} (missing expectation)\n", r.name)),
                Outcome::Mismatch { expected, actual } => {
                    out.push_str(&format!("FAIL {}\n", r.name));
                    if let Some((k, (e, a))) = first_difference(expected, actual) {
                        out.push_str(&format!("  line {}:\n    expected: {e}\n    actual:   {a}\n", k + 1));
                    }
                }
            }
        }
        let failed = self.failed().len();
        out.push_str(&format!(
            "{} fixtures, {} passed, {} failed\n",
            self.results.len(),
            self.results.len() - failed,
            failed
        ));
        out
    }
}

fn first_difference<'a>(expected: &'a str, actual: &'a str) -> Option<(usize, (&'a str, &'a str))> {
    let (mut e, mut a) = (expected.lines(), actual.lines());
    for k in 0.. {
        match (e.next(), a.next()) {
            (None, None) => return None,
            (x, y) if x != y => return Some((k, (x.unwrap_or("<end>"), y.unwrap_or("<end>")))),
            _ => {}
        }
    }
    None
}

/// Session files of `dir`, sorted by name.
pub fn discover(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    out.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == SESSION_EXT));
    out.sort();
    Ok(out)
}

pub fn expected_path(session: &Path) -> PathBuf {
    let stem = session.file_stem().unwrap_or_default().to_string_lossy();
    session.with_file_name(format!("{stem}{EXPECTED_SUFFIX}"))
}

fn run_one(path: &Path, opts: &Options) -> io::Result<FixtureResult> {
    let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    let text = fs::read_to_string(path)?;
    let expected = match fs::read_to_string(expected_path(path)) {
        Ok(e) => e,
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            return Ok(FixtureResult {
                name,
                outcome: Outcome::MissingExpectation,
            })
        }
        Err(e) => return Err(e),
    };
    let actual = run_text(&text, opts).render();
    let outcome = if actual == expected {
        Outcome::Pass
    } else {
        Outcome::Mismatch { expected, actual }
    };
    Ok(FixtureResult { name, outcome })
}

/// Runs every fixture of `dir`, several at a time; results are reported in
/// name order.
pub fn run_fixtures(dir: &Path, opts: &Options) -> io::Result<FixtureReport> {
    let paths = discover(dir)?;
    let mut report = FixtureReport::default();
    if paths.is_empty() {
        report.warnings.push(format!("no fixtures found in {}", dir.display()));
        return Ok(report);
    }
    let opts = Options {
        base_dir: Some(dir.to_path_buf()),
        nested: true,
        ..opts.clone()
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(paths.len());
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<io::Result<FixtureResult>>>> = Mutex::new((0..paths.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= paths.len() {
                    break;
                }
                let r = run_one(&paths[k], &opts);
                slots.lock().unwrap()[k] = Some(r);
            });
        }
    });
    for r in slots.into_inner().unwrap() {
        report.results.push(r.expect("every fixture is claimed by a worker")?);
    }
    Ok(report)
}
