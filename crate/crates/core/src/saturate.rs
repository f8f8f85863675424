//! Reference saturation engine: full violation rescans after every step.
//!
//! Also hosts the pieces shared with the Rete engine: matching, the
//! expansion step and run options.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::blocking::{apply_label_changes, BlockingDelta};
use crate::model::{LabelSet, ModelError, NodeIndex, PartialModel};
use crate::symbols::{ConceptId, RoleId};
use crate::tbox::{Atom, Dialect, NormalSide, NormalTBox};

/// A node together with an axiom it violates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Violation {
    pub node: NodeIndex,
    pub axiom: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SaturationError {
    #[error("saturation needs a normalized FL0 TBox; eliminate top and bottom first")]
    NotFl0,
    #[error("step limit of {0} reached before completion")]
    StepLimit(u64),
    #[error("deadline passed before completion")]
    Timeout,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Order in which pending violations are taken from the agenda.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Strategy {
    #[default]
    Fifo,
    Lifo,
    Random(u64),
}

/// Finished subsumer sets of single names, consulted when a new node is
/// created with exactly one name in its label.
pub trait SubsumerCache: Sync {
    fn lookup(&self, name: ConceptId) -> Option<Arc<LabelSet>>;
}

#[derive(Clone, Debug)]
pub struct SaturationOptions {
    pub strategy: Strategy,
    pub ancestor_blocking: bool,
    /// Stop as soon as this name reaches the root.
    pub stop_when: Option<ConceptId>,
    pub step_limit: Option<u64>,
    pub deadline: Option<Instant>,
    /// Roles whose successors may be created; `None` allows all.
    pub role_filter: Option<BitSet>,
}

impl Default for SaturationOptions {
    fn default() -> Self {
        SaturationOptions {
            strategy: Strategy::Fifo,
            ancestor_blocking: true,
            stop_when: None,
            step_limit: None,
            deadline: None,
            role_filter: None,
        }
    }
}

/// What an expansion step may consult besides the model and the TBox.
#[derive(Clone, Copy, Default)]
pub struct ExpandContext<'a> {
    pub role_filter: Option<&'a BitSet>,
    pub cache: Option<&'a dyn SubsumerCache>,
}

impl ExpandContext<'_> {
    fn creates(&self, r: RoleId) -> bool {
        self.role_filter.is_none_or(|f| f.contains(r.index()))
    }
}

/// Result of one expansion step.
#[derive(Clone, Default, Debug)]
pub struct Expansion {
    pub delta: BlockingDelta,
    /// Nodes created or whose label grew, ascending.
    pub touched: Vec<NodeIndex>,
}

#[derive(Clone, Debug)]
pub struct Saturation {
    pub model: PartialModel,
    pub steps: u64,
    /// Whether the run ended through `stop_when` rather than completion.
    pub stopped_early: bool,
}

impl Saturation {
    pub fn root_label(&self) -> &LabelSet {
        self.model.root_label()
    }
}

/// Syntactic satisfaction of `side` at `idx`. A value restriction needs the
/// successor to exist.
pub fn matches(model: &PartialModel, idx: NodeIndex, side: &NormalSide) -> bool {
    match side {
        NormalSide::Top => true,
        NormalSide::Bottom => false,
        NormalSide::Atoms(atoms) => atoms.iter().all(|atom| match *atom {
            Atom::Name(a) => model.has_name(idx, a),
            Atom::Forall(r, a) => model.successor(idx, r).is_ok_and(|c| model.has_name(c, a)),
            Atom::ForallBottom(_) => false,
        }),
    }
}

/// As [`matches`], except that a value restriction over a role outside the
/// filter holds when the successor does not exist.
pub fn rhs_satisfied(model: &PartialModel, idx: NodeIndex, rhs: &NormalSide, filter: Option<&BitSet>) -> bool {
    let Some(filter) = filter else {
        return matches(model, idx, rhs);
    };
    rhs.atom_list().iter().all(|atom| match *atom {
        Atom::Name(a) => model.has_name(idx, a),
        Atom::Forall(r, a) => match model.successor(idx, r) {
            Ok(c) if model.contains(c) => model.has_name(c, a),
            _ => !filter.contains(r.index()),
        },
        Atom::ForallBottom(_) => false,
    }) && !matches!(rhs, NormalSide::Bottom)
}

pub fn is_violation(model: &PartialModel, tbox: &NormalTBox, v: Violation, filter: Option<&BitSet>) -> bool {
    let g = &tbox.axioms[v.axiom];
    model.is_free(v.node) && matches(model, v.node, &g.lhs) && !rhs_satisfied(model, v.node, &g.rhs, filter)
}

pub fn find_violations(model: &PartialModel, tbox: &NormalTBox) -> Vec<Violation> {
    find_violations_filtered(model, tbox, None)
}

/// Every (free node, axiom) pair whose left side matches and right side does not.
pub fn find_violations_filtered(model: &PartialModel, tbox: &NormalTBox, filter: Option<&BitSet>) -> Vec<Violation> {
    let mut out = Vec::new();
    for node in model.nodes() {
        if !model.is_free(node) {
            continue;
        }
        for axiom in 0..tbox.axioms.len() {
            let v = Violation { node, axiom };
            if is_violation(model, tbox, v, filter) {
                out.push(v);
            }
        }
    }
    out
}

pub fn expand(model: &mut PartialModel, tbox: &NormalTBox, v: Violation) -> Result<Expansion, ModelError> {
    expand_with(model, tbox, v, ExpandContext::default())
}

/// Adds the right side of the violated axiom at `v.node`, creating
/// successors as needed, then updates blocking.
pub fn expand_with(
    model: &mut PartialModel,
    tbox: &NormalTBox,
    v: Violation,
    ctx: ExpandContext<'_>,
) -> Result<Expansion, ModelError> {
    let mut touched = BTreeSet::new();
    let mut created = Vec::new();
    for atom in tbox.axioms[v.axiom].rhs.atom_list() {
        match *atom {
            Atom::Name(a) => {
                if model.add_to_label(v.node, a)? {
                    touched.insert(v.node);
                }
            }
            Atom::Forall(r, b) => {
                let child = model.successor(v.node, r)?;
                if !ctx.creates(r) && !model.contains(child) {
                    continue;
                }
                if model.add_node(child)? {
                    created.push(child);
                    touched.insert(child);
                }
                if model.add_to_label(child, b)? {
                    touched.insert(child);
                }
            }
            Atom::ForallBottom(_) => unreachable!("FL0 input"),
        }
    }
    if let Some(cache) = ctx.cache {
        for child in created {
            let label = model.label(child).expect("just created");
            if label.len() != 1 {
                continue;
            }
            let seed = ConceptId(label.iter().next().unwrap() as u32);
            if let Some(full) = cache.lookup(seed) {
                model.add_labels(child, &full)?;
                model.pin(child, LabelSet::clone(&full))?;
            }
        }
    }
    let delta = apply_label_changes(model, touched.iter().copied());
    Ok(Expansion {
        delta,
        touched: touched.into_iter().collect(),
    })
}

/// Upper bound `2^|N_C| + 1` on the depth of any node.
pub fn depth_bound(concept_count: usize) -> u128 {
    if concept_count >= 127 {
        u128::MAX
    } else {
        (1u128 << concept_count) + 1
    }
}

/// Pending violations with duplicate suppression.
pub(crate) struct Agenda {
    items: VecDeque<Violation>,
    queued: HashSet<Violation>,
    strategy: Strategy,
    rng: Option<ChaCha8Rng>,
}

impl Agenda {
    pub(crate) fn new(strategy: Strategy) -> Agenda {
        let rng = match strategy {
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Agenda {
            items: VecDeque::new(),
            queued: HashSet::new(),
            strategy,
            rng,
        }
    }

    pub(crate) fn push(&mut self, v: Violation) {
        if self.queued.insert(v) {
            self.items.push_back(v);
        }
    }

    pub(crate) fn pop(&mut self) -> Option<Violation> {
        let v = match self.strategy {
            Strategy::Fifo => self.items.pop_front(),
            Strategy::Lifo => self.items.pop_back(),
            Strategy::Random(_) => {
                if self.items.is_empty() {
                    None
                } else {
                    let i = self.rng.as_mut().unwrap().random_range(0..self.items.len());
                    self.items.swap_remove_back(i)
                }
            }
        }?;
        self.queued.remove(&v);
        Some(v)
    }
}

/// Step accounting shared by both engines.
pub(crate) struct Budget {
    steps: u64,
    limit: Option<u64>,
    deadline: Option<Instant>,
}

impl Budget {
    pub(crate) fn new(opts: &SaturationOptions) -> Budget {
        Budget {
            steps: 0,
            limit: opts.step_limit,
            deadline: opts.deadline,
        }
    }

    pub(crate) fn charge(&mut self) -> Result<(), SaturationError> {
        if let Some(limit) = self.limit {
            if self.steps >= limit {
                return Err(SaturationError::StepLimit(limit));
            }
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SaturationError::Timeout);
        }
        self.steps += 1;
        Ok(())
    }

    pub(crate) fn steps(&self) -> u64 {
        self.steps
    }
}

/// The depth bound only holds with ancestor blocking.
pub(crate) fn check_depth(model: &PartialModel, tbox: &NormalTBox, touched: &[NodeIndex]) {
    if cfg!(debug_assertions) && model.ancestor_blocking() {
        let bound = depth_bound(tbox.symbols.concept_count());
        for &t in touched {
            debug_assert!(
                model.encoding().depth(t) as u128 <= bound,
                "depth bound exceeded at {t}"
            );
        }
    }
}

/// Runs the completion loop from the tree `ε{a0}` until no free node
/// violates an axiom, or until `stop_when` reaches the root.
pub fn saturate(tbox: &NormalTBox, a0: ConceptId, opts: &SaturationOptions) -> Result<Saturation, SaturationError> {
    saturate_with_cache(tbox, a0, opts, None)
}

pub fn saturate_with_cache(
    tbox: &NormalTBox,
    a0: ConceptId,
    opts: &SaturationOptions,
    cache: Option<&dyn SubsumerCache>,
) -> Result<Saturation, SaturationError> {
    let model = PartialModel::init(tbox.symbols.role_count(), opts.ancestor_blocking, a0);
    complete(model, tbox, opts, cache)
}

/// Continues the completion loop from an arbitrary model whose statuses
/// are up to date. The model's own ancestor-blocking setting applies.
pub fn complete(
    mut model: PartialModel,
    tbox: &NormalTBox,
    opts: &SaturationOptions,
    cache: Option<&dyn SubsumerCache>,
) -> Result<Saturation, SaturationError> {
    if tbox.dialect() != Dialect::Fl0 {
        return Err(SaturationError::NotFl0);
    }
    let filter = opts.role_filter.as_ref();
    let ctx = ExpandContext {
        role_filter: filter,
        cache,
    };
    let mut budget = Budget::new(opts);
    let reached = |m: &PartialModel| opts.stop_when.is_some_and(|b| m.has_name(NodeIndex::ROOT, b));
    if reached(&model) {
        return Ok(Saturation {
            model,
            steps: 0,
            stopped_early: true,
        });
    }
    let mut agenda = Agenda::new(opts.strategy);
    for v in find_violations_filtered(&model, tbox, filter) {
        agenda.push(v);
    }
    while let Some(v) = agenda.pop() {
        if !is_violation(&model, tbox, v, filter) {
            continue;
        }
        budget.charge()?;
        let exp = expand_with(&mut model, tbox, v, ctx)?;
        check_depth(&model, tbox, &exp.touched);
        if reached(&model) {
            return Ok(Saturation {
                model,
                steps: budget.steps(),
                stopped_early: true,
            });
        }
        for v in find_violations_filtered(&model, tbox, filter) {
            agenda.push(v);
        }
    }
    Ok(Saturation {
        model,
        steps: budget.steps(),
        stopped_early: false,
    })
}
