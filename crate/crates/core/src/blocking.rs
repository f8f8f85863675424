//! Blocking statuses.
//!
//! Statuses are defined by induction over ascending index:
//! `ε` is free; a node with a blocked proper prefix is indirectly blocked
//! (when ancestor blocking is on); a pinned node is cached; otherwise a node
//! is directly blocked by the least smaller free node with the same label,
//! and free if there is none.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{NodeIndex, PartialModel, Status};

/// Net status changes caused by one or more label changes.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct BlockingDelta {
    pub became_blocked: BTreeSet<NodeIndex>,
    pub became_unblocked: BTreeSet<NodeIndex>,
}

impl BlockingDelta {
    pub fn is_empty(&self) -> bool {
        self.became_blocked.is_empty() && self.became_unblocked.is_empty()
    }

    fn record(&mut self, idx: NodeIndex, blocked: bool) {
        let (add, cancel) = if blocked {
            (&mut self.became_blocked, &mut self.became_unblocked)
        } else {
            (&mut self.became_unblocked, &mut self.became_blocked)
        };
        if !cancel.remove(&idx) {
            add.insert(idx);
        }
    }

    /// Appends a later delta; a node that flips back cancels out.
    pub fn merge(&mut self, later: BlockingDelta) {
        for idx in later.became_blocked {
            self.record(idx, true);
        }
        for idx in later.became_unblocked {
            self.record(idx, false);
        }
    }
}

/// Statuses of the current tree computed from scratch, scanning every
/// smaller node and every proper prefix.
pub fn recompute_blocking(model: &PartialModel) -> BTreeMap<NodeIndex, Status> {
    let enc = model.encoding();
    let mut out: BTreeMap<NodeIndex, Status> = BTreeMap::new();
    for idx in model.nodes() {
        let status = if idx.is_root() {
            Status::Free
        } else if model.ancestor_blocking()
            && out
                .iter()
                .any(|(&rho, s)| s.is_blocked() && enc.is_proper_prefix(rho, idx))
        {
            Status::Indirect
        } else if model.is_pinned(idx) {
            Status::Cached
        } else {
            let label = model.label(idx);
            out.iter()
                .find(|(&omega, s)| **s == Status::Free && model.label(omega) == label)
                .map_or(Status::Free, |(&omega, _)| Status::Direct(omega))
        };
        out.insert(idx, status);
    }
    out
}

/// Status of `idx` from the statuses of smaller nodes, using the label
/// inverse and the parent instead of full scans.
fn local_status(model: &PartialModel, idx: NodeIndex) -> Status {
    if idx.is_root() {
        return Status::Free;
    }
    if model.ancestor_blocking() {
        let parent = model.encoding().parent(idx).expect("non-root");
        if model.status(parent).is_some_and(Status::is_blocked) {
            return Status::Indirect;
        }
    }
    if model.is_pinned(idx) {
        return Status::Cached;
    }
    let label = model.label(idx).expect("node exists");
    model
        .inverse
        .get(label)
        .and_then(|set| set.range(..idx).copied().find(|&w| model.is_free(w)))
        .map_or(Status::Free, Status::Direct)
}

/// Brings statuses up to date after the label of `idx` changed, or after
/// `idx` was added or pinned.
pub fn apply_label_change(model: &mut PartialModel, idx: NodeIndex) -> BlockingDelta {
    apply_label_changes(model, [idx])
}

/// As [`apply_label_change`] for several nodes changed since the statuses
/// were last consistent.
///
/// Every cause of a status change points to larger indices, so a worklist
/// processed in ascending order sees final statuses for all smaller nodes.
pub fn apply_label_changes<I: IntoIterator<Item = NodeIndex>>(model: &mut PartialModel, changed: I) -> BlockingDelta {
    let mut delta = BlockingDelta::default();
    let mut work: BTreeSet<NodeIndex> = BTreeSet::new();
    for idx in changed {
        work.insert(idx);
        work.extend(model.blocked_by(idx));
        if let Some(label) = model.label(idx) {
            work.extend(model.nodes_with_label(label).filter(|&w| w > idx));
        }
    }
    while let Some(x) = work.pop_first() {
        let Some(old) = model.status(x) else { continue };
        let new = local_status(model, x);
        if new == old {
            continue;
        }
        model.set_status(x, new);
        if old.is_blocked() == new.is_blocked() {
            continue;
        }
        delta.record(x, new.is_blocked());
        if model.ancestor_blocking() {
            let children: Vec<NodeIndex> = model.encoding().children(x).filter(|&c| model.contains(c)).collect();
            work.extend(children);
        }
        let label = model.label(x).expect("node exists").clone();
        work.extend(model.nodes_with_label(&label).filter(|&w| w > x));
    }
    delta
}

/// Whether the stored statuses and blocker sets agree with the oracle.
pub fn is_consistent(model: &PartialModel) -> bool {
    let expected = recompute_blocking(model);
    if model.statuses() != expected {
        return false;
    }
    let mut blocks: BTreeMap<NodeIndex, BTreeSet<NodeIndex>> = BTreeMap::new();
    for (&idx, s) in &expected {
        if let Status::Direct(by) = s {
            blocks.entry(*by).or_default().insert(idx);
        }
    }
    let stored: BTreeMap<NodeIndex, BTreeSet<NodeIndex>> = model.blocks.iter().map(|(&k, v)| (k, v.clone())).collect();
    stored == blocks
}
