//! TBox rewritings: normal form, ⊤/⊥ elimination, reduction of concept
//! subsumption to name subsumption, Horn detection and quantifier flipping.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::concept::Concept;
use crate::parser::OwlImport;
use crate::symbols::{ConceptId, RoleId, SymbolTable};
use crate::tbox::{Atom, Dialect, Gci, NormalGci, NormalSide, NormalTBox, TBox};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Polarity {
    Lhs,
    Rhs,
}

/// Pushes `⊤` and `⊥` outwards: `⊥` absorbs conjunctions, `⊤` disappears
/// from them, and `∀r.⊤` is `⊤`.
pub fn simplify(c: &Concept) -> Concept {
    match c {
        Concept::Conj(parts) => {
            let parts: Vec<Concept> = parts.iter().map(simplify).collect();
            if parts.contains(&Concept::Bottom) {
                Concept::Bottom
            } else {
                Concept::and(parts.into_iter().filter(|p| *p != Concept::Top))
            }
        }
        Concept::Forall(r, filler) => match simplify(filler) {
            Concept::Top => Concept::Top,
            f => Concept::forall(*r, f),
        },
        other => other.clone(),
    }
}

struct Normalizer {
    symbols: SymbolTable,
    names: HashMap<(Concept, Polarity), ConceptId>,
    pending: VecDeque<Gci>,
    out: Vec<NormalGci>,
}

impl Normalizer {
    fn side(&mut self, c: &Concept, polarity: Polarity) -> NormalSide {
        match c {
            Concept::Top => NormalSide::Top,
            Concept::Bottom => NormalSide::Bottom,
            Concept::Conj(parts) => NormalSide::atoms(parts.iter().map(|p| self.atom(p, polarity))),
            atom => NormalSide::atoms([self.atom(atom, polarity)]),
        }
    }

    fn atom(&mut self, c: &Concept, polarity: Polarity) -> Atom {
        match c {
            Concept::Name(a) => Atom::Name(*a),
            Concept::Forall(r, filler) => match filler.as_ref() {
                Concept::Name(a) => Atom::Forall(*r, *a),
                Concept::Bottom => Atom::ForallBottom(*r),
                e => Atom::Forall(*r, self.flatten(e, polarity)),
            },
            other => unreachable!("simplified conjunct {other:?}"),
        }
    }

    /// The fresh stand-in for `e` at the given polarity, defining it on first use.
    fn flatten(&mut self, e: &Concept, polarity: Polarity) -> ConceptId {
        if let Some(&x) = self.names.get(&(e.clone(), polarity)) {
            return x;
        }
        let x = self.symbols.fresh_concept();
        self.names.insert((e.clone(), polarity), x);
        let def = match polarity {
            Polarity::Lhs => Gci {
                lhs: e.clone(),
                rhs: Concept::Name(x),
            },
            Polarity::Rhs => Gci {
                lhs: Concept::Name(x),
                rhs: e.clone(),
            },
        };
        self.pending.push_back(def);
        x
    }

    fn axiom(&mut self, g: &Gci) {
        let lhs = simplify(&g.lhs);
        let rhs = simplify(&g.rhs);
        if lhs == Concept::Bottom || rhs == Concept::Top {
            return;
        }
        let lhs = self.side(&lhs, Polarity::Lhs);
        let rhs = self.side(&rhs, Polarity::Rhs);
        self.out.push(NormalGci { lhs, rhs });
        while let Some(def) = self.pending.pop_front() {
            self.axiom(&def);
        }
    }
}

/// Brings every axiom into normal form. Nested value restrictions are
/// replaced by fresh names, one per distinct filler and polarity; axioms
/// with `⊥` on the left or `⊤` on the right are dropped.
pub fn normalize(tbox: &TBox) -> NormalTBox {
    let mut n = Normalizer {
        symbols: tbox.symbols.clone(),
        names: HashMap::new(),
        pending: VecDeque::new(),
        out: Vec::new(),
    };
    for g in &tbox.axioms {
        n.axiom(g);
    }
    NormalTBox {
        symbols: n.symbols,
        axioms: n.out,
        bottom_name: None,
        top_name: None,
    }
}

/// Replaces `⊥` and `⊤` by fresh names over the occurrence signature of
/// the TBox. FL0 input is returned unchanged.
pub fn eliminate_top_bottom(tbox: &NormalTBox) -> NormalTBox {
    let sig = tbox.signature();
    eliminate_top_bottom_over(tbox, &sig.concepts, &sig.roles)
}

/// As [`eliminate_top_bottom`], quantifying the ⊥/⊤ axioms over the given
/// names and roles instead of the occurrence signature.
pub fn eliminate_top_bottom_over(
    tbox: &NormalTBox,
    concepts: &BTreeSet<ConceptId>,
    roles: &BTreeSet<RoleId>,
) -> NormalTBox {
    if tbox.dialect() == Dialect::Fl0 {
        return tbox.clone();
    }
    let mut symbols = tbox.symbols.clone();
    let bot = symbols.fresh_concept();
    let top = symbols.fresh_concept();
    let replace = |side: &NormalSide| match side {
        NormalSide::Top => NormalSide::name(top),
        NormalSide::Bottom => NormalSide::name(bot),
        NormalSide::Atoms(v) => NormalSide::atoms(v.iter().map(|a| match *a {
            Atom::ForallBottom(r) => Atom::Forall(r, bot),
            other => other,
        })),
    };
    let mut axioms: Vec<NormalGci> = tbox
        .axioms
        .iter()
        .map(|g| NormalGci {
            lhs: replace(&g.lhs),
            rhs: replace(&g.rhs),
        })
        .collect();
    for &b in concepts {
        axioms.push(NormalGci {
            lhs: NormalSide::name(bot),
            rhs: NormalSide::name(b),
        });
    }
    for &b in concepts {
        axioms.push(NormalGci {
            lhs: NormalSide::name(b),
            rhs: NormalSide::name(top),
        });
    }
    for &r in roles {
        axioms.push(NormalGci {
            lhs: NormalSide::name(top),
            rhs: NormalSide::atoms([Atom::Forall(r, top)]),
        });
    }
    NormalTBox {
        symbols,
        axioms,
        bottom_name: Some(bot),
        top_name: Some(top),
    }
}

/// Output of [`reduce_to_name_subsumption`]: `C ⊑_T D` iff
/// `sub_name ⊑ sup_name` w.r.t. `tbox`.
#[derive(Clone, Debug)]
pub struct ReductionHandle {
    pub sub_name: ConceptId,
    pub sup_name: ConceptId,
    pub tbox: NormalTBox,
}

/// Adds `A ⊑ C` and `D ⊑ B` for fresh `A`, `B` and normalizes.
pub fn reduce_to_name_subsumption(c: &Concept, d: &Concept, tbox: &TBox) -> ReductionHandle {
    let mut t = tbox.clone();
    let sub = t.symbols.fresh_concept();
    let sup = t.symbols.fresh_concept();
    t.axioms.push(Gci::new(Concept::Name(sub), c.clone()));
    t.axioms.push(Gci::new(d.clone(), Concept::Name(sup)));
    ReductionHandle {
        sub_name: sub,
        sup_name: sup,
        tbox: normalize(&t),
    }
}

/// Horn-FL0 shapes: a conjunction of names on the left, and a single name or
/// a single `∀r.B` on the right.
pub fn is_horn(tbox: &NormalTBox) -> bool {
    tbox.dialect() == Dialect::Fl0
        && tbox.axioms.iter().all(|g| {
            let lhs_ok = g.lhs.atom_list().iter().all(|a| matches!(a, Atom::Name(_)));
            let rhs_ok = matches!(g.rhs.atom_list(), [Atom::Name(_)] | [Atom::Forall(..)]);
            lhs_ok && rhs_ok
        })
}

/// Splits every right-hand conjunction into one axiom per atom. The result
/// has the same models.
pub fn split_rhs(tbox: &NormalTBox) -> NormalTBox {
    let mut axioms = Vec::with_capacity(tbox.axioms.len());
    for g in &tbox.axioms {
        match &g.rhs {
            NormalSide::Atoms(v) if v.len() > 1 => axioms.extend(v.iter().map(|&a| NormalGci {
                lhs: g.lhs.clone(),
                rhs: NormalSide::atoms([a]),
            })),
            _ => axioms.push(g.clone()),
        }
    }
    NormalTBox { axioms, ..tbox.clone() }
}

/// Turns every existential restriction of an OWL import into the
/// corresponding value restriction.
pub fn flip_quantifiers(import: &OwlImport) -> TBox {
    let axioms = import
        .axioms
        .iter()
        .map(|(sub, sup)| {
            let lhs = sub.to_concept(true).expect("flipping removes every existential");
            let rhs = sup.to_concept(true).expect("flipping removes every existential");
            Gci::new(lhs, rhs)
        })
        .collect();
    TBox::new(import.symbols.clone(), axioms)
}
