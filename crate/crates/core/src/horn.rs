//! Polynomial decision procedure for Horn-FL0.
//!
//! Horn left sides are conjunctions of names, so whether an axiom applies at
//! a node depends on that node's label alone. Saturation can therefore be
//! restricted to the prefix closure of the goal's role words (the skeleton):
//! successors outside it receive names but are never expanded, and blocking
//! is never needed. Rule application is counter-based: each (axiom,
//! skeleton node) pair fires at most once.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::model::{Encoding, LabelSet, ModelError, NodeIndex};
use crate::symbols::{ConceptId, RoleId};
use crate::tbox::{Atom, NormalTBox};
use crate::transform::is_horn;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum HornError {
    #[error("the TBox is not Horn-FL0")]
    NotHorn,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The goal `∀σ1.A1 ⊓ … ⊓ ∀σn.An` and the prefix closure of its words.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub goal: Vec<(NodeIndex, ConceptId)>,
    pub nodes: BTreeSet<NodeIndex>,
}

impl Skeleton {
    pub fn new(enc: &Encoding, goal: &[(Vec<RoleId>, ConceptId)]) -> Result<Skeleton, ModelError> {
        let mut nodes = BTreeSet::from([NodeIndex::ROOT]);
        let mut targets = Vec::with_capacity(goal.len());
        for (word, name) in goal {
            let mut idx = NodeIndex::ROOT;
            for &r in word {
                idx = enc.successor(idx, r)?;
                nodes.insert(idx);
            }
            targets.push((idx, *name));
        }
        Ok(Skeleton { goal: targets, nodes })
    }

    /// The skeleton `{ε}` of a goal that is a single name.
    pub fn root(name: ConceptId) -> Skeleton {
        Skeleton {
            goal: vec![(NodeIndex::ROOT, name)],
            nodes: BTreeSet::from([NodeIndex::ROOT]),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HornOutcome {
    pub holds: bool,
    /// Rule applications; at most `|T| · |skeleton|`.
    pub steps: u64,
    /// Labels of every node reached, skeleton or not.
    pub labels: HashMap<NodeIndex, LabelSet>,
}

impl HornOutcome {
    pub fn root_label(&self) -> &LabelSet {
        &self.labels[&NodeIndex::ROOT]
    }
}

/// Decides `a0 ⊑ ∀σ1.A1 ⊓ … ⊓ ∀σn.An` w.r.t. a Horn-FL0 TBox.
pub fn horn_subsumes(
    tbox: &NormalTBox,
    a0: ConceptId,
    goal: &[(Vec<RoleId>, ConceptId)],
) -> Result<HornOutcome, HornError> {
    let skeleton = Skeleton::new(&Encoding::new(tbox.symbols.role_count()), goal)?;
    horn_run(tbox, a0, &skeleton)
}

pub fn horn_run(tbox: &NormalTBox, a0: ConceptId, skeleton: &Skeleton) -> Result<HornOutcome, HornError> {
    if !is_horn(tbox) {
        return Err(HornError::NotHorn);
    }
    let enc = Encoding::new(tbox.symbols.role_count());
    let mut uses: HashMap<ConceptId, Vec<usize>> = HashMap::new();
    for (i, g) in tbox.axioms.iter().enumerate() {
        for atom in g.lhs.atom_list() {
            if let Atom::Name(a) = *atom {
                uses.entry(a).or_default().push(i);
            }
        }
    }
    let mut remaining: HashMap<(usize, NodeIndex), usize> = HashMap::new();
    let mut labels: HashMap<NodeIndex, LabelSet> = skeleton.nodes.iter().map(|&n| (n, LabelSet::new())).collect();
    let mut work: Vec<(NodeIndex, ConceptId)> = vec![(NodeIndex::ROOT, a0)];
    let mut steps = 0u64;
    while let Some((node, name)) = work.pop() {
        if !labels.entry(node).or_default().insert(name.index()) || !skeleton.nodes.contains(&node) {
            continue;
        }
        for &i in uses.get(&name).map_or(&[][..], Vec::as_slice) {
            let left = remaining
                .entry((i, node))
                .or_insert_with(|| tbox.axioms[i].lhs.atom_list().len());
            *left -= 1;
            if *left > 0 {
                continue;
            }
            steps += 1;
            match tbox.axioms[i].rhs.atom_list() {
                [Atom::Name(c)] => work.push((node, *c)),
                [Atom::Forall(r, b)] => work.push((enc.successor(node, *r)?, *b)),
                _ => unreachable!("Horn right sides are single atoms"),
            }
        }
    }
    let holds = skeleton
        .goal
        .iter()
        .all(|(idx, a)| labels.get(idx).is_some_and(|l| l.contains(a.index())));
    debug_assert!(steps as usize <= tbox.axioms.len() * skeleton.nodes.len());
    Ok(HornOutcome { holds, steps, labels })
}

/// All named subsumers of `a0`: the root label of the `{ε}`-skeleton run.
pub fn horn_subsumers(tbox: &NormalTBox, a0: ConceptId) -> Result<HornOutcome, HornError> {
    horn_run(tbox, a0, &Skeleton::root(a0))
}
