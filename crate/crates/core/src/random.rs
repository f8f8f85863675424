//! Random TBoxes and inputs for property tests and benchmarks.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::concept::Concept;
use crate::symbols::{ConceptId, RoleId, SymbolTable};
use crate::tbox::{Gci, TBox};

/// Size limits of a generated TBox.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub concepts: usize,
    pub roles: usize,
    /// Axiom count is drawn from `1..=axioms`.
    pub axioms: usize,
    /// Atom count per side is drawn from `1..=max_atoms`.
    pub max_atoms: usize,
    /// Probability that an atom is a value restriction.
    pub forall: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            concepts: 8,
            roles: 2,
            axioms: 12,
            max_atoms: 3,
            forall: 0.4,
        }
    }
}

/// Concepts `A0…` and roles `r0…`.
pub fn symbols(concepts: usize, roles: usize) -> SymbolTable {
    let mut s = SymbolTable::new();
    for i in 0..concepts {
        s.intern_concept(&format!("A{i}")).expect("fresh table");
    }
    for i in 0..roles {
        s.intern_role(&format!("r{i}")).expect("fresh table");
    }
    s
}

fn name<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Concept {
    Concept::Name(ConceptId(rng.random_range(0..shape.concepts) as u32))
}

fn role<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> RoleId {
    RoleId(rng.random_range(0..shape.roles) as u32)
}

/// A name or a value restriction over a name.
pub fn atom<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Concept {
    if shape.roles > 0 && rng.random_bool(shape.forall) {
        Concept::forall(role(rng, shape), name(rng, shape))
    } else {
        name(rng, shape)
    }
}

pub fn side<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Concept {
    let n = rng.random_range(1..=shape.max_atoms);
    Concept::and((0..n).map(|_| atom(rng, shape)))
}

/// Normal-form FL0 axioms over names and `∀r.A`.
pub fn fl0_tbox<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> TBox {
    let n = rng.random_range(1..=shape.axioms);
    let axioms = (0..n).map(|_| Gci::new(side(rng, shape), side(rng, shape))).collect();
    TBox::new(symbols(shape.concepts, shape.roles), axioms)
}

/// Arbitrarily nested FL0 concept of bounded depth.
pub fn nested_concept<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, depth: usize) -> Concept {
    if depth == 0 || rng.random_bool(0.35) {
        return name(rng, shape);
    }
    if shape.roles > 0 && rng.random_bool(0.5) {
        Concept::forall(role(rng, shape), nested_concept(rng, shape, depth - 1))
    } else {
        let n = rng.random_range(2..=3);
        Concept::and((0..n).map(|_| nested_concept(rng, shape, depth - 1)))
    }
}

/// FL0 axioms with nested sides.
pub fn nested_tbox<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, depth: usize) -> TBox {
    let n = rng.random_range(1..=shape.axioms);
    let axioms = (0..n)
        .map(|_| Gci::new(nested_concept(rng, shape, depth), nested_concept(rng, shape, depth)))
        .collect();
    TBox::new(symbols(shape.concepts, shape.roles), axioms)
}

/// Normal-form FL⊥ axioms: atoms may also be `⊤`, `⊥` or `∀r.⊥`.
pub fn flbot_tbox<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> TBox {
    let special = |rng: &mut R| -> Concept {
        match rng.random_range(0..3) {
            0 => Concept::Top,
            1 => Concept::Bottom,
            _ if shape.roles > 0 => Concept::forall(role(rng, shape), Concept::Bottom),
            _ => Concept::Bottom,
        }
    };
    let side_of = |rng: &mut R| -> Concept {
        let n = rng.random_range(1..=shape.max_atoms);
        Concept::and((0..n).map(|_| {
            if rng.random_bool(0.15) {
                special(rng)
            } else {
                atom(rng, shape)
            }
        }))
    };
    let n = rng.random_range(1..=shape.axioms);
    let mut axioms: Vec<Gci> = (0..n).map(|_| Gci::new(side_of(rng), side_of(rng))).collect();
    if !axioms
        .iter()
        .any(|g| g.lhs.mentions_top_or_bottom() || g.rhs.mentions_top_or_bottom())
    {
        axioms.push(Gci::new(name(rng, shape), special(rng)));
    }
    TBox::new(symbols(shape.concepts, shape.roles), axioms)
}

/// Horn-FL0 axioms: `A ⊑ C`, `A ⊓ B ⊑ C` and `A ⊑ ∀r.B`.
pub fn horn_tbox<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> TBox {
    let n = rng.random_range(1..=shape.axioms);
    let axioms = (0..n)
        .map(|_| {
            let lhs = if rng.random_bool(0.4) {
                Concept::and([name(rng, shape), name(rng, shape)])
            } else {
                name(rng, shape)
            };
            let rhs = if shape.roles > 0 && rng.random_bool(0.4) {
                Concept::forall(role(rng, shape), name(rng, shape))
            } else {
                name(rng, shape)
            };
            Gci::new(lhs, rhs)
        })
        .collect();
    TBox::new(symbols(shape.concepts, shape.roles), axioms)
}

const FRAGMENTS: &[&str] = &[
    "A", "B", "_x", "r", "s1", "all", "top", "bot", "&", "[=", "[", "=", ".", "(", ")", " ", " ", "\n", "#", "_fresh#",
    "7", "é", "\t", "all r.", "A [= B\n", "((", "))", "&&", "[= [=", "\u{0}", "all all", ".all",
];

/// Text assembled from grammar fragments and arbitrary characters.
pub fn fuzz_text<R: Rng + ?Sized>(rng: &mut R, max_pieces: usize) -> String {
    let n = rng.random_range(0..=max_pieces);
    let mut out = String::new();
    for _ in 0..n {
        if rng.random_bool(0.1) {
            out.push(char::from_u32(rng.random_range(0..0x3000)).unwrap_or('?'));
        } else {
            out.push_str(FRAGMENTS.choose(rng).expect("non-empty"));
        }
    }
    out
}
