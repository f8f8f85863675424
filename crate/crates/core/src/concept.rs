//! FL⊥ concept syntax trees.

use std::collections::BTreeSet;

use crate::symbols::{ConceptId, RoleId};

/// A concept over `⊤`, `⊥`, names, conjunction and value restriction.
///
/// Values built through [`Concept::and`] and [`Concept::canonical`] keep
/// conjunctions flat, sorted by the derived order and free of duplicates, so
/// derived equality is structural equality of canonical forms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Concept {
    Top,
    Bottom,
    Name(ConceptId),
    Conj(Vec<Concept>),
    Forall(RoleId, Box<Concept>),
}

impl Concept {
    pub fn name(id: ConceptId) -> Concept {
        Concept::Name(id)
    }

    pub fn forall(role: RoleId, filler: Concept) -> Concept {
        Concept::Forall(role, Box::new(filler))
    }

    /// `∀σ.C` for a role word `σ`.
    pub fn forall_word(word: &[RoleId], filler: Concept) -> Concept {
        word.iter().rev().fold(filler, |acc, &r| Concept::forall(r, acc))
    }

    /// Canonical conjunction. An empty conjunction is `⊤`, a single conjunct
    /// is returned as is.
    pub fn and<I: IntoIterator<Item = Concept>>(parts: I) -> Concept {
        let mut flat = Vec::new();
        for part in parts {
            match part {
                Concept::Conj(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => Concept::Top,
            1 => flat.pop().unwrap(),
            _ => Concept::Conj(flat),
        }
    }

    pub fn canonical(self) -> Concept {
        match self {
            Concept::Conj(parts) => Concept::and(parts.into_iter().map(Concept::canonical)),
            Concept::Forall(r, c) => Concept::forall(r, c.canonical()),
            atom => atom,
        }
    }

    pub fn mentions_top_or_bottom(&self) -> bool {
        match self {
            Concept::Top | Concept::Bottom => true,
            Concept::Name(_) => false,
            Concept::Conj(parts) => parts.iter().any(Concept::mentions_top_or_bottom),
            Concept::Forall(_, c) => c.mentions_top_or_bottom(),
        }
    }

    pub fn collect_signature(&self, concepts: &mut BTreeSet<ConceptId>, roles: &mut BTreeSet<RoleId>) {
        match self {
            Concept::Top | Concept::Bottom => {}
            Concept::Name(a) => {
                concepts.insert(*a);
            }
            Concept::Conj(parts) => {
                for p in parts {
                    p.collect_signature(concepts, roles);
                }
            }
            Concept::Forall(r, c) => {
                roles.insert(*r);
                c.collect_signature(concepts, roles);
            }
        }
    }

    /// Number of constructor occurrences; the size measure for linearity checks.
    pub fn size(&self) -> usize {
        match self {
            Concept::Conj(parts) => 1 + parts.iter().map(Concept::size).sum::<usize>(),
            Concept::Forall(_, c) => 1 + c.size(),
            _ => 1,
        }
    }
}
