//! Reference computations that share no code path with the engines.

use std::collections::{BTreeMap, BTreeSet};

use flzero_core::*;

pub type Labels = BTreeMap<Vec<u32>, BTreeSet<u32>>;

fn child(w: &[u32], r: RoleId) -> Vec<u32> {
    let mut c = w.to_vec();
    c.push(r.0);
    c
}

/// Whether `c` holds at `w`; value restrictions fail at the cut.
pub fn eval(label: &Labels, w: &[u32], c: &Concept) -> bool {
    match c {
        Concept::Top => true,
        Concept::Bottom => panic!("the cut-tree oracle covers FL0 only"),
        Concept::Name(a) => label[w].contains(&a.0),
        Concept::Conj(parts) => parts.iter().all(|p| eval(label, w, p)),
        Concept::Forall(r, f) => {
            let c = child(w, *r);
            label.contains_key(&c) && eval(label, &c, f)
        }
    }
}

/// Adds the names `c` requires at `w`, dropping what falls below the cut.
pub fn assert_at(label: &mut Labels, w: &[u32], c: &Concept) -> bool {
    match c {
        Concept::Top => false,
        Concept::Bottom => panic!("the cut-tree oracle covers FL0 only"),
        Concept::Name(a) => label.get_mut(w).is_some_and(|l| l.insert(a.0)),
        Concept::Conj(parts) => parts.iter().fold(false, |ch, p| assert_at(label, w, p) | ch),
        Concept::Forall(r, f) => {
            let c = child(w, *r);
            label.contains_key(&c) && assert_at(label, &c, f)
        }
    }
}

/// Least fixpoint of an FL0 TBox on the full role tree cut at `depth`,
/// seeded with `start` at the root. Every label is a subset of the label of
/// the same word in the least functional model, and labels grow with
/// `depth`.
pub fn cut_tree(tbox: &TBox, start: &Concept, depth: usize) -> Labels {
    let roles = tbox.symbols.role_count() as u32;
    let mut words: Vec<Vec<u32>> = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..depth {
        let next: Vec<Vec<u32>> = frontier
            .iter()
            .flat_map(|w: &Vec<u32>| (0..roles).map(move |r| child(w, RoleId(r))))
            .collect();
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut label: Labels = words.iter().map(|w| (w.clone(), BTreeSet::new())).collect();
    assert_at(&mut label, &[], start);
    let mut forward = true;
    loop {
        let mut changed = false;
        // Alternate sweep direction so chains settle in few rounds.
        let order: Box<dyn Iterator<Item = &Vec<u32>>> = if forward {
            Box::new(words.iter())
        } else {
            Box::new(words.iter().rev())
        };
        for w in order {
            for g in &tbox.axioms {
                if eval(&label, w, &g.lhs) {
                    changed |= assert_at(&mut label, w, &g.rhs);
                }
            }
        }
        if !changed {
            return label;
        }
        forward = !forward;
    }
}

/// Root label of [`cut_tree`] seeded with the name `a`.
pub fn truncated_root(tbox: &NormalTBox, a: ConceptId, depth: usize) -> BTreeSet<u32> {
    cut_tree(&tbox.to_tbox(), &Concept::Name(a), depth)
        .remove(&vec![])
        .unwrap()
}

/// Whether `c ⊑ d` holds in the cut tree seeded with `c`.
pub fn cut_subsumes(tbox: &TBox, c: &Concept, d: &Concept, depth: usize) -> bool {
    eval(&cut_tree(tbox, c, depth), &[], d)
}

/// A cut deep enough to hold a complete blocked run, whose derivation then
/// replays inside the cut tree, so the root labels coincide.
pub fn safe_depth(tbox: &NormalTBox) -> usize {
    (1usize << tbox.symbols.concept_count()) + 2
}

/// Statuses written out from their definition: the root is free, a child of
/// a blocked node is indirect (with ancestor blocking), a pinned node is
/// cached, and otherwise a node is directly blocked by the least smaller
/// free node carrying the same label.
pub fn statuses(model: &PartialModel) -> BTreeMap<NodeIndex, Status> {
    let mut out: BTreeMap<NodeIndex, Status> = BTreeMap::new();
    for idx in model.nodes() {
        let st = if idx.is_root() {
            Status::Free
        } else {
            let parent = NodeIndex(idx.0 / (model.encoding().role_count().max(1) as u128 + 1));
            if model.ancestor_blocking() && out[&parent] != Status::Free {
                Status::Indirect
            } else if model.is_pinned(idx) {
                Status::Cached
            } else {
                let lab = model.label(idx).unwrap();
                out.iter()
                    .find(|(j, s)| **s == Status::Free && model.label(**j) == Some(lab))
                    .map_or(Status::Free, |(j, _)| Status::Direct(*j))
            }
        };
        out.insert(idx, st);
    }
    out
}

/// Label sets as sorted name lists, for readable assertion failures.
pub fn names(symbols: &SymbolTable, label: impl IntoIterator<Item = u32>) -> Vec<String> {
    let mut v: Vec<String> = label
        .into_iter()
        .map(|c| symbols.concept_name(ConceptId(c)).to_owned())
        .collect();
    v.sort();
    v
}
