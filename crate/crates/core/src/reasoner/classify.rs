use std::collections::{BTreeMap, BTreeSet};
use std::hash::Hasher;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use fnv::FnvHasher;

use super::{Reasoner, ReasonerError};
use crate::symbols::{ConceptId, SymbolTable};

/// Named subsumers of every user-visible concept name.
#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub subsumers: BTreeMap<ConceptId, BTreeSet<ConceptId>>,
    pub timings: BTreeMap<ConceptId, Duration>,
    /// Names whose run hit the deadline or the step limit.
    pub timeout_names: BTreeSet<ConceptId>,
    pub symbols: SymbolTable,
}

impl ClassificationResult {
    /// Rows as external names, sorted: `(name, sorted subsumers)`.
    pub fn rows(&self) -> Vec<(String, Vec<String>)> {
        let name = |c: &ConceptId| self.symbols.concept_name(*c).to_owned();
        let mut rows: Vec<(String, Vec<String>)> = self
            .subsumers
            .iter()
            .map(|(a, subs)| {
                let mut s: Vec<String> = subs.iter().map(name).collect();
                s.sort();
                (name(a), s)
            })
            .collect();
        rows.sort();
        rows
    }

    /// FNV-1a 64 over the lines `name: s1,s2,…\n` of completed rows.
    pub fn checksum(&self) -> u64 {
        let mut h = FnvHasher::default();
        for (name, subs) in self.rows() {
            h.write(name.as_bytes());
            h.write(b": ");
            h.write(subs.join(",").as_bytes());
            h.write(b"\n");
        }
        h.finish()
    }

    /// One line per row, `A: A B M`.
    pub fn render(&self) -> String {
        self.rows()
            .into_iter()
            .map(|(name, subs)| format!("{name}: {}\n", subs.join(" ")))
            .collect()
    }
}

pub fn classification_checksum(result: &ClassificationResult) -> u64 {
    result.checksum()
}

enum Row {
    Done(BTreeSet<ConceptId>),
    Incomplete,
}

impl Reasoner {
    /// Computes the subsumer set of every user-visible name, in batches
    /// spread over `threads` workers.
    pub fn classify(&self) -> Result<ClassificationResult, ReasonerError> {
        let names: Vec<ConceptId> = self.user_names().collect();
        let batch = self.opts.batch_size.max(1);
        let batches: Vec<&[ConceptId]> = names.chunks(batch).collect();
        let next = AtomicUsize::new(0);
        let results: Mutex<Vec<(ConceptId, Row, Duration)>> = Mutex::new(Vec::with_capacity(names.len()));
        let failure: Mutex<Option<ReasonerError>> = Mutex::new(None);
        let worker = || loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            let Some(chunk) = batches.get(i) else { break };
            let mut local = Vec::with_capacity(chunk.len());
            for &a in chunk.iter() {
                let start = Instant::now();
                let row = match self.subsumer_set(a) {
                    Ok(set) => Row::Done(set),
                    Err(ReasonerError::Timeout | ReasonerError::Inconclusive(_) | ReasonerError::DepthLimit) => {
                        Row::Incomplete
                    }
                    Err(e) => {
                        failure.lock().expect("lock").get_or_insert(e);
                        return;
                    }
                };
                local.push((a, row, start.elapsed()));
            }
            results.lock().expect("lock").extend(local);
        };
        let threads = self.opts.threads.clamp(1, batches.len().max(1));
        if threads == 1 {
            worker();
        } else {
            std::thread::scope(|s| {
                for _ in 0..threads {
                    s.spawn(worker);
                }
            });
        }
        if let Some(e) = failure.into_inner().expect("lock") {
            return Err(e);
        }
        let mut out = ClassificationResult {
            subsumers: BTreeMap::new(),
            timings: BTreeMap::new(),
            timeout_names: BTreeSet::new(),
            symbols: self.symbols().clone(),
        };
        for (a, row, took) in results.into_inner().expect("lock") {
            out.timings.insert(a, took);
            match row {
                Row::Done(set) => {
                    out.subsumers.insert(a, set);
                }
                Row::Incomplete => {
                    out.timeout_names.insert(a);
                }
            }
        }
        Ok(out)
    }
}
