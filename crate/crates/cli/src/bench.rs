//! Corpus runs. Rows go to stdout as TSV with the columns
//! `path task millis timeout answer`; the summary goes to stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use flzero_core::{Reasoner, ReasonerError, TBox};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commands::{load, read, register, write};
use crate::error::{CliError, MISMATCH};
use crate::{Flags, Task};

pub struct Row {
    pub path: PathBuf,
    pub task: Task,
    pub millis: f64,
    pub timeout: bool,
    /// Checksum for classification, `sub [= sup: yes|no` for subsumption.
    pub answer: String,
}

impl Row {
    fn tsv(&self) -> String {
        let task = match self.task {
            Task::Subsume => "subsume",
            Task::Classify => "classify",
        };
        format!(
            "{}\t{task}\t{:.3}\t{}\t{}",
            self.path.display(),
            self.millis,
            u8::from(self.timeout),
            self.answer
        )
    }
}

fn corpus(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "flo") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("tests")
}

/// `k` pairs with a positive and `k` with a negative outcome, drawn from
/// the classification of `tbox`.
fn generate(tbox: &TBox, k: usize, seed: u64, flags: &Flags) -> Result<String, CliError> {
    let reasoner = Reasoner::new(tbox, flags.options()?)?;
    let result = reasoner.classify()?;
    let sym = reasoner.symbols();
    let mut yes = Vec::new();
    let mut no = Vec::new();
    for (a, ups) in &result.subsumers {
        for b in reasoner.user_names() {
            if a == &b {
                continue;
            }
            let pair = (sym.concept_name(*a), sym.concept_name(b));
            if ups.contains(&b) {
                yes.push(pair);
            } else {
                no.push(pair);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    yes.shuffle(&mut rng);
    no.shuffle(&mut rng);
    let mut out = String::new();
    for (list, answer) in [(&yes, "yes"), (&no, "no")] {
        for (a, b) in list.iter().take(k) {
            let _ = writeln!(out, "{a}\t{b}\t{answer}");
        }
    }
    Ok(out)
}

fn limit_millis(flags: &Flags) -> Result<Option<f64>, CliError> {
    Ok(flags.timeout()?.map(|d| d.as_secs_f64() * 1e3))
}

fn classify_row(path: &Path, tbox: &TBox, flags: &Flags) -> Result<Row, CliError> {
    let limit = limit_millis(flags)?;
    let start = Instant::now();
    let result = Reasoner::new(tbox, flags.options()?)?.classify()?;
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let timeout = !result.timeout_names.is_empty() || limit.is_some_and(|l| millis >= l);
    Ok(Row {
        path: path.to_path_buf(),
        task: Task::Classify,
        millis: if timeout { limit.unwrap_or(millis) } else { millis },
        timeout,
        answer: if timeout {
            "timeout".into()
        } else {
            format!("{:#018x}", result.checksum())
        },
    })
}

/// One row per sidecar line; the second value counts wrong answers.
fn subsume_rows(path: &Path, mut tbox: TBox, tests: &str, flags: &Flags) -> Result<(Vec<Row>, usize), CliError> {
    let limit = limit_millis(flags)?;
    let mut pairs = Vec::new();
    for (n, line) in tests.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let (sub, sup, expected) = match cols.as_slice() {
            [a, b] => (*a, *b, None),
            [a, b, e] => (*a, *b, Some(*e)),
            _ => {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected sub<TAB>sup<TAB>expected",
                    sidecar(path).display(),
                    n + 1
                )))
            }
        };
        let expected = match expected {
            None | Some("") => None,
            Some("yes") => Some(true),
            Some("no") => Some(false),
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected yes or no, got {other:?}",
                    sidecar(path).display(),
                    n + 1
                )))
            }
        };
        pairs.push((
            register(&mut tbox, sub)?,
            register(&mut tbox, sup)?,
            sub.to_owned(),
            sup.to_owned(),
            expected,
        ));
    }
    let reasoner = Reasoner::new(&tbox, flags.options()?)?;
    let mut rows = Vec::new();
    let mut wrong = 0;
    for (a, b, sub, sup, expected) in pairs {
        let start = Instant::now();
        let outcome = reasoner.subsumes(a, b);
        let millis = start.elapsed().as_secs_f64() * 1e3;
        let (answer, timeout) = match outcome {
            Ok(yes) if !limit.is_some_and(|l| millis >= l) => {
                if expected.is_some_and(|e| e != yes) {
                    wrong += 1;
                    eprintln!(
                        "{}: {sub} [= {sup} answered {}, expected otherwise",
                        path.display(),
                        if yes { "yes" } else { "no" }
                    );
                }
                (format!("{sub} [= {sup}: {}", if yes { "yes" } else { "no" }), false)
            }
            Ok(_) | Err(ReasonerError::Timeout | ReasonerError::Inconclusive(_) | ReasonerError::DepthLimit) => {
                (format!("{sub} [= {sup}: timeout"), true)
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(Row {
            path: path.to_path_buf(),
            task: Task::Subsume,
            millis: if timeout { limit.unwrap_or(millis) } else { millis },
            timeout,
            answer,
        });
    }
    Ok((rows, wrong))
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

pub fn summary(rows: &[Row]) -> String {
    let timeouts = rows.iter().filter(|r| r.timeout).count();
    let mut times: Vec<f64> = rows.iter().map(|r| r.millis).collect();
    times.sort_by(f64::total_cmp);
    let pct = if rows.is_empty() {
        0.0
    } else {
        100.0 * timeouts as f64 / rows.len() as f64
    };
    format!(
        "rows {}, timeouts {timeouts} ({pct:.1}%), median {:.3} ms, p90 {:.3} ms, max {:.3} ms",
        rows.len(),
        quantile(&times, 0.5),
        quantile(&times, 0.9),
        quantile(&times, 1.0)
    )
}

pub fn run(
    dir: &Path,
    task: Task,
    generate_tests: Option<usize>,
    seed: u64,
    flags: &Flags,
) -> Result<ExitCode, CliError> {
    let files = corpus(dir)?;
    let mut rows = Vec::new();
    let mut wrong = 0;
    for path in &files {
        let tbox = match load(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("warning: skipping {e}");
                continue;
            }
        };
        if let Some(k) = generate_tests {
            write(&sidecar(path), &generate(&tbox, k, seed, flags)?)?;
        }
        match task {
            Task::Classify => rows.push(classify_row(path, &tbox, flags)?),
            Task::Subsume => {
                let side = sidecar(path);
                if !side.exists() {
                    eprintln!("warning: {} has no {}, skipped", path.display(), side.display());
                    continue;
                }
                let (mut r, w) = subsume_rows(path, tbox, &read(&side)?, flags)?;
                rows.append(&mut r);
                wrong += w;
            }
        }
    }
    for row in &rows {
        println!("{}", row.tsv());
    }
    eprintln!("{}", summary(&rows));
    if wrong > 0 {
        eprintln!("{wrong} answer(s) differ from the expected column");
        return Ok(ExitCode::from(MISMATCH));
    }
    Ok(ExitCode::SUCCESS)
}
