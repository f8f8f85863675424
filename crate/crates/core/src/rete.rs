//! Rete network compiled from a normalized TBox, and the saturation engine
//! driven by it.
//!
//! Left-hand sides are split into groups by the node they test: bare names
//! test the element itself (mark `ε`), `∀r.A` atoms test its `r`-successor
//! (mark `r`). Each group is a chain of concept tests ending in a role test;
//! groups of one axiom meet in an inter-element node. When the label of a
//! node `σ = ρr` changes, the chains are walked once against `σ`'s label:
//! `ε` role tests deliver `(σ, ε)` and `r` role tests deliver `(ρ, r)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::model::{NodeIndex, PartialModel};
use crate::parser::serialize_concept;
use crate::saturate::{
    check_depth, expand_with, find_violations_filtered, is_violation, Agenda, Budget, ExpandContext, Saturation,
    SaturationError, SaturationOptions, SubsumerCache, Violation,
};
use crate::symbols::{ConceptId, RoleId};
use crate::tbox::{Atom, Dialect, NormalTBox};

/// Which element a group of atoms is tested on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Mark {
    Eps,
    Role(RoleId),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ReteKind {
    Root,
    ConceptTest(ConceptId),
    RoleTest(Mark),
    InterElement(Vec<Mark>),
    Terminal(usize),
}

#[derive(Clone, Debug)]
pub struct ReteNode {
    pub kind: ReteKind,
    pub successors: Vec<usize>,
    /// Concept-test successors keyed by their name.
    /// Concept-test successors by name; several per name only when chains
    /// are not shared.
    children: HashMap<ConceptId, Vec<usize>>,
    /// Role-test successors.
    role_tests: Vec<usize>,
}

impl ReteNode {
    fn new(kind: ReteKind) -> ReteNode {
        ReteNode {
            kind,
            successors: Vec::new(),
            children: HashMap::new(),
            role_tests: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CompileOptions {
    /// Merge concept-test chains with a common name prefix.
    pub share_chains: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { share_chains: true }
    }
}

/// Immutable after compilation; one network serves any number of runs.
#[derive(Clone, Debug)]
pub struct ReteNetwork {
    pub nodes: Vec<ReteNode>,
    pub entry: usize,
    pub axiom_of_terminal: BTreeMap<usize, usize>,
}

pub fn compile(tbox: &NormalTBox) -> ReteNetwork {
    compile_with(tbox, CompileOptions::default())
}

pub fn compile_with(tbox: &NormalTBox, opts: CompileOptions) -> ReteNetwork {
    let mut net = ReteNetwork {
        nodes: vec![ReteNode::new(ReteKind::Root)],
        entry: 0,
        axiom_of_terminal: BTreeMap::new(),
    };
    let mut role_tests: HashMap<(usize, Mark), usize> = HashMap::new();
    for (i, g) in tbox.axioms.iter().enumerate() {
        let mut groups: BTreeMap<Mark, Vec<ConceptId>> = BTreeMap::new();
        for atom in g.lhs.atom_list() {
            match *atom {
                Atom::Name(a) => groups.entry(Mark::Eps).or_default().push(a),
                Atom::Forall(r, a) => groups.entry(Mark::Role(r)).or_default().push(a),
                Atom::ForallBottom(_) => {}
            }
        }
        if groups.is_empty() {
            continue;
        }
        let mut ends = Vec::with_capacity(groups.len());
        for (&mark, names) in groups.iter_mut() {
            names.sort_unstable();
            let mut at = net.entry;
            for &name in names.iter() {
                at = match net.nodes[at].children.get(&name).and_then(|v| v.first()) {
                    Some(&next) if opts.share_chains => next,
                    _ => {
                        let next = net.push(ReteKind::ConceptTest(name), at);
                        net.nodes[at].children.entry(name).or_default().push(next);
                        next
                    }
                };
            }
            let test = match role_tests.get(&(at, mark)) {
                Some(&t) if opts.share_chains => t,
                _ => {
                    let t = net.push(ReteKind::RoleTest(mark), at);
                    net.nodes[at].role_tests.push(t);
                    role_tests.insert((at, mark), t);
                    t
                }
            };
            ends.push(test);
        }
        let terminal = if ends.len() == 1 {
            net.push(ReteKind::Terminal(i), ends[0])
        } else {
            let inter = net.push(ReteKind::InterElement(groups.keys().copied().collect()), ends[0]);
            for &e in &ends[1..] {
                net.nodes[e].successors.push(inter);
            }
            net.push(ReteKind::Terminal(i), inter)
        };
        net.axiom_of_terminal.insert(terminal, i);
    }
    net
}

impl ReteNetwork {
    fn push(&mut self, kind: ReteKind, from: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(ReteNode::new(kind));
        self.nodes[from].successors.push(id);
        id
    }

    pub fn count(&self, pred: impl Fn(&ReteKind) -> bool) -> usize {
        self.nodes.iter().filter(|n| pred(&n.kind)).count()
    }

    /// One line per node: `id\tkind\tlabel\tsuccessor-ids`.
    pub fn dump(&self, tbox: &NormalTBox) -> String {
        let sym = &tbox.symbols;
        let mark = |m: &Mark| match m {
            Mark::Eps => "ε".to_owned(),
            Mark::Role(r) => sym.role_name(*r).to_owned(),
        };
        let mut out = String::new();
        for (id, node) in self.nodes.iter().enumerate() {
            let (kind, label) = match &node.kind {
                ReteKind::Root => ("root", "-".to_owned()),
                ReteKind::ConceptTest(a) => ("concept", sym.concept_name(*a).to_owned()),
                ReteKind::RoleTest(m) => ("role", mark(m)),
                ReteKind::InterElement(ms) => (
                    "inter",
                    format!("({})", ms.iter().map(mark).collect::<Vec<_>>().join(",")),
                ),
                ReteKind::Terminal(i) => ("terminal", serialize_concept(&tbox.axioms[*i].rhs.to_concept(), sym)),
            };
            let succ: Vec<String> = node.successors.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{id}\t{kind}\t{label}\t{}", succ.join(","));
        }
        out
    }
}

/// Per-run memories: partial inter-element matches and terminals already
/// fired, both keyed by subject.
#[derive(Clone, Debug, Default)]
pub struct ReteState {
    arrived: HashMap<(usize, NodeIndex), BitSet>,
    fired: HashMap<NodeIndex, BitSet>,
}

impl ReteState {
    pub fn new() -> ReteState {
        ReteState::default()
    }

    /// Axioms whose left side has matched at `subject`.
    pub fn matched(&self, subject: NodeIndex) -> impl Iterator<Item = usize> + '_ {
        self.fired.get(&subject).into_iter().flat_map(BitSet::iter)
    }
}

/// Re-matches after a change at `changed` and returns the terminal firings
/// not reported before.
pub fn inject(net: &ReteNetwork, state: &mut ReteState, model: &PartialModel, changed: NodeIndex) -> Vec<Violation> {
    let mut out = Vec::new();
    let Some(label) = model.label(changed) else { return out };
    let up = model
        .encoding()
        .parent(changed)
        .ok()
        .zip(model.encoding().last_role(changed));
    let mut stack = vec![net.entry];
    while let Some(at) = stack.pop() {
        let node = &net.nodes[at];
        if node.children.len() <= label.len() {
            stack.extend(
                node.children
                    .iter()
                    .filter(|(&a, _)| label.contains(a.index()))
                    .flat_map(|(_, n)| n),
            );
        } else {
            stack.extend(
                label
                    .iter()
                    .filter_map(|a| node.children.get(&ConceptId(a as u32)))
                    .flatten(),
            );
        }
        for &t in &node.role_tests {
            let ReteKind::RoleTest(mark) = net.nodes[t].kind else {
                unreachable!()
            };
            let subject = match (mark, up) {
                (Mark::Eps, _) => changed,
                (Mark::Role(r), Some((parent, last))) if r == last => parent,
                _ => continue,
            };
            for &next in &net.nodes[t].successors {
                deliver(net, state, next, subject, mark, &mut out);
            }
        }
    }
    out
}

fn deliver(
    net: &ReteNetwork,
    state: &mut ReteState,
    at: usize,
    subject: NodeIndex,
    mark: Mark,
    out: &mut Vec<Violation>,
) {
    match &net.nodes[at].kind {
        ReteKind::InterElement(marks) => {
            let slot = marks.binary_search(&mark).expect("mark belongs to the tuple");
            let seen = state.arrived.entry((at, subject)).or_default();
            if seen.insert(slot) && seen.len() == marks.len() {
                for &next in &net.nodes[at].successors {
                    deliver(net, state, next, subject, Mark::Eps, out);
                }
            }
        }
        ReteKind::Terminal(axiom) => {
            if state.fired.entry(subject).or_default().insert(*axiom) {
                out.push(Violation {
                    node: subject,
                    axiom: *axiom,
                });
            }
        }
        other => unreachable!("role tests feed joins and terminals, not {other:?}"),
    }
}

pub fn saturate_rete(
    tbox: &NormalTBox,
    a0: ConceptId,
    opts: &SaturationOptions,
) -> Result<Saturation, SaturationError> {
    saturate_rete_with(&compile(tbox), tbox, a0, opts, None)
}

/// The completion loop fed by network firings instead of rescans. Firings
/// are re-validated before expansion; a node that becomes unblocked gets
/// its earlier firings back on the agenda.
pub fn saturate_rete_with(
    net: &ReteNetwork,
    tbox: &NormalTBox,
    a0: ConceptId,
    opts: &SaturationOptions,
    cache: Option<&dyn SubsumerCache>,
) -> Result<Saturation, SaturationError> {
    if tbox.dialect() != Dialect::Fl0 {
        return Err(SaturationError::NotFl0);
    }
    let mut model = PartialModel::init(tbox.symbols.role_count(), opts.ancestor_blocking, a0);
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
    let mut state = ReteState::new();
    let mut agenda = Agenda::new(opts.strategy);
    for v in inject(net, &mut state, &model, NodeIndex::ROOT) {
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
        for &t in &exp.touched {
            for f in inject(net, &mut state, &model, t) {
                agenda.push(f);
            }
        }
        for &u in &exp.delta.became_unblocked {
            let again: Vec<usize> = state.matched(u).collect();
            for axiom in again {
                agenda.push(Violation { node: u, axiom });
            }
        }
    }
    debug_assert!(
        find_violations_filtered(&model, tbox, filter).is_empty(),
        "missed firing"
    );
    Ok(Saturation {
        model,
        steps: budget.steps(),
        stopped_early: false,
    })
}

/// Firing sets of two networks over the same model, for comparing
/// compilation variants: every node is injected once, in ascending order.
pub fn all_firings(net: &ReteNetwork, model: &PartialModel) -> BTreeSet<Violation> {
    let mut state = ReteState::new();
    let mut out = BTreeSet::new();
    for idx in model.nodes() {
        out.extend(inject(net, &mut state, model, idx));
    }
    out
}
