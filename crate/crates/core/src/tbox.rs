//! General and normalized TBoxes.

use std::collections::BTreeSet;

use crate::concept::Concept;
use crate::symbols::{ConceptId, RoleId, SymbolTable};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Dialect {
    Fl0,
    FlBot,
}

/// A general concept inclusion `lhs ⊑ rhs`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gci {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Gci {
    pub fn new(lhs: Concept, rhs: Concept) -> Gci {
        Gci {
            lhs: lhs.canonical(),
            rhs: rhs.canonical(),
        }
    }
}

/// Occurrence-based signature: names that appear in at least one axiom.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Signature {
    pub concepts: BTreeSet<ConceptId>,
    pub roles: BTreeSet<RoleId>,
}

/// An un-normalized TBox as read from a file.
#[derive(Clone, Debug, Default)]
pub struct TBox {
    pub symbols: SymbolTable,
    pub axioms: Vec<Gci>,
}

impl TBox {
    pub fn new(symbols: SymbolTable, axioms: Vec<Gci>) -> TBox {
        TBox { symbols, axioms }
    }

    pub fn dialect(&self) -> Dialect {
        let bot = self
            .axioms
            .iter()
            .any(|g| g.lhs.mentions_top_or_bottom() || g.rhs.mentions_top_or_bottom());
        if bot {
            Dialect::FlBot
        } else {
            Dialect::Fl0
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for g in &self.axioms {
            g.lhs.collect_signature(&mut sig.concepts, &mut sig.roles);
            g.rhs.collect_signature(&mut sig.concepts, &mut sig.roles);
        }
        sig
    }

    /// Structural equality up to renumbering of symbols: axioms are compared
    /// in order, by name, with conjunctions compared as sets.
    pub fn structurally_eq(&self, other: &TBox) -> bool {
        self.axioms.len() == other.axioms.len()
            && self.axioms.iter().zip(&other.axioms).all(|(a, b)| {
                Named::of(&a.lhs, &self.symbols) == Named::of(&b.lhs, &other.symbols)
                    && Named::of(&a.rhs, &self.symbols) == Named::of(&b.rhs, &other.symbols)
            })
    }
}

/// Name-keyed mirror of [`Concept`] used for id-independent comparison.
#[derive(PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Named {
    Top,
    Bottom,
    Name(String),
    Conj(Vec<Named>),
    Forall(String, Box<Named>),
}

impl Named {
    fn of(c: &Concept, symbols: &SymbolTable) -> Named {
        match c {
            Concept::Top => Named::Top,
            Concept::Bottom => Named::Bottom,
            Concept::Name(a) => Named::Name(symbols.concept_name(*a).to_owned()),
            Concept::Conj(parts) => {
                let mut v: Vec<Named> = parts.iter().map(|p| Named::of(p, symbols)).collect();
                v.sort();
                Named::Conj(v)
            }
            Concept::Forall(r, c) => Named::Forall(symbols.role_name(*r).to_owned(), Box::new(Named::of(c, symbols))),
        }
    }
}

/// Conjunct of a normalized side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    Name(ConceptId),
    Forall(RoleId, ConceptId),
    ForallBottom(RoleId),
}

/// One side of a normalized GCI: `⊤`, `⊥` or a non-empty atom conjunction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum NormalSide {
    Top,
    Bottom,
    /// Sorted, deduplicated, non-empty.
    Atoms(Vec<Atom>),
}

impl NormalSide {
    pub fn atoms<I: IntoIterator<Item = Atom>>(atoms: I) -> NormalSide {
        let mut v: Vec<Atom> = atoms.into_iter().collect();
        assert!(!v.is_empty(), "a normal side needs at least one atom");
        v.sort();
        v.dedup();
        NormalSide::Atoms(v)
    }

    pub fn name(a: ConceptId) -> NormalSide {
        NormalSide::Atoms(vec![Atom::Name(a)])
    }

    pub fn atom_list(&self) -> &[Atom] {
        match self {
            NormalSide::Atoms(v) => v,
            _ => &[],
        }
    }

    pub fn is_fl0(&self) -> bool {
        match self {
            NormalSide::Atoms(v) => v.iter().all(|a| !matches!(a, Atom::ForallBottom(_))),
            _ => false,
        }
    }

    pub fn to_concept(&self) -> Concept {
        match self {
            NormalSide::Top => Concept::Top,
            NormalSide::Bottom => Concept::Bottom,
            NormalSide::Atoms(v) => Concept::and(v.iter().map(|a| match *a {
                Atom::Name(c) => Concept::Name(c),
                Atom::Forall(r, c) => Concept::forall(r, Concept::Name(c)),
                Atom::ForallBottom(r) => Concept::forall(r, Concept::Bottom),
            })),
        }
    }

    fn collect_signature(&self, sig: &mut Signature) {
        for atom in self.atom_list() {
            match *atom {
                Atom::Name(c) => {
                    sig.concepts.insert(c);
                }
                Atom::Forall(r, c) => {
                    sig.roles.insert(r);
                    sig.concepts.insert(c);
                }
                Atom::ForallBottom(r) => {
                    sig.roles.insert(r);
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalGci {
    pub lhs: NormalSide,
    pub rhs: NormalSide,
}

/// A TBox in normal form. `lhs` is never `⊥` and `rhs` never `⊤`.
#[derive(Clone, Debug, Default)]
pub struct NormalTBox {
    pub symbols: SymbolTable,
    pub axioms: Vec<NormalGci>,
    /// Stand-in for `⊥` after top/bottom elimination.
    pub bottom_name: Option<ConceptId>,
    /// Stand-in for `⊤` after top/bottom elimination.
    pub top_name: Option<ConceptId>,
}

impl NormalTBox {
    pub fn dialect(&self) -> Dialect {
        if self.axioms.iter().all(|g| g.lhs.is_fl0() && g.rhs.is_fl0()) {
            Dialect::Fl0
        } else {
            Dialect::FlBot
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for g in &self.axioms {
            g.lhs.collect_signature(&mut sig);
            g.rhs.collect_signature(&mut sig);
        }
        sig
    }

    /// The same axioms as a general TBox.
    pub fn to_tbox(&self) -> TBox {
        TBox {
            symbols: self.symbols.clone(),
            axioms: self
                .axioms
                .iter()
                .map(|g| Gci {
                    lhs: g.lhs.to_concept(),
                    rhs: g.rhs.to_concept(),
                })
                .collect(),
        }
    }
}
