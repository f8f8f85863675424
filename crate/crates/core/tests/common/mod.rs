//! Scripts and helpers shared by the integration tests and the acceptance
//! runner.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use flzero_core::blocking::is_consistent;
use flzero_core::saturate::{expand, find_violations, is_violation};
use flzero_core::*;

pub mod criteria;
pub mod oracle;

/// The worked example TBox with names A, B, K, L, M and roles r, s.
pub const SECTION3: &str = "\
A [= all r.A
A [= B
A [= all s.K
K [= all s.A
all s.B [= L
all s.L [= M
";

/// The three-axiom TBox used to illustrate the Rete network.
pub const T_EX: &str = "\
A2 & A4 & A5 & all r1.A3 & all r1.A4 & all r2.A1 [= B7
all r2.A3 & all r2.A4 [= B8
all r1.A6 [= all r1.B9
";

pub fn normal(src: &str) -> NormalTBox {
    normalize(&parse_tbox(src).expect("fixture parses"))
}

pub fn word(model: &PartialModel, symbols: &SymbolTable, idx: NodeIndex) -> String {
    model.word_string(idx, symbols)
}

/// `word=labels/status` for every node, space separated. Status letters:
/// `f` free, `d:w` directly blocked by `w`, `i` indirect, `c` cached.
pub fn render(model: &PartialModel, symbols: &SymbolTable) -> String {
    let mut out = Vec::new();
    for idx in model.nodes() {
        let mut names: Vec<&str> = model
            .label(idx)
            .unwrap()
            .iter()
            .map(|c| symbols.concept_name(ConceptId(c as u32)))
            .collect();
        names.sort_unstable();
        let st = match model.status(idx).unwrap() {
            Status::Free => "f".to_owned(),
            Status::Direct(b) => format!("d:{}", word(model, symbols, b)),
            Status::Indirect => "i".to_owned(),
            Status::Cached => "c".to_owned(),
        };
        out.push(format!("{}={}/{}", word(model, symbols, idx), names.join(","), st));
    }
    out.join(" ")
}

/// The fixture is already normal, so axiom positions follow its lines.
fn find_axiom(text: &str) -> usize {
    SECTION3
        .lines()
        .position(|l| l == text)
        .unwrap_or_else(|| panic!("no axiom {text}"))
}

/// The nine scripted completion steps of the worked example, with the
/// expected tree after each.
pub const TRAJECTORY_STEPS: [(&str, &str, &str); 9] = [
    ("A [= all r.A", "", "ε=A/f r=A/d:ε"),
    ("A [= B", "", "ε=A,B/f r=A/f"),
    ("A [= all s.K", "", "ε=A,B/f r=A/f s=K/f"),
    ("A [= all r.A", "r", "ε=A,B/f r=A/f s=K/f r.r=A/d:r"),
    ("A [= B", "r", "ε=A,B/f r=A,B/d:ε s=K/f r.r=A/i"),
    ("K [= all s.A", "s", "ε=A,B/f r=A,B/d:ε s=K/f r.r=A/i s.s=A/f"),
    ("A [= B", "s.s", "ε=A,B/f r=A,B/d:ε s=K/f r.r=A/i s.s=A,B/d:ε"),
    ("all s.B [= L", "s", "ε=A,B/f r=A,B/d:ε s=K,L/f r.r=A/i s.s=A,B/d:ε"),
    ("all s.L [= M", "", "ε=A,B,M/f r=A,B/f s=K,L/f r.r=A/f s.s=A,B/d:r"),
];

fn node_of(model: &PartialModel, symbols: &SymbolTable, w: &str) -> NodeIndex {
    if w.is_empty() {
        return NodeIndex::ROOT;
    }
    let roles: Vec<RoleId> = w.split('.').map(|r| symbols.role(r).expect("role")).collect();
    model.encoding().index_of(&roles).expect("index")
}

/// Replays the scripted steps, checking every intermediate tree, then
/// completes the run and checks that M reaches the root.
pub fn worked_trajectory() -> Result<PartialModel, String> {
    let tbox = normal(SECTION3);
    if tbox.axioms.len() != SECTION3.lines().count() {
        return Err("fixture did not stay normal".into());
    }
    let sym = &tbox.symbols;
    let a = sym.concept("A").ok_or("no A")?;
    let m = sym.concept("M").ok_or("no M")?;
    let mut model = PartialModel::init(sym.role_count(), true, a);
    for (i, (axiom, at, expected)) in TRAJECTORY_STEPS.iter().enumerate() {
        let v = Violation {
            node: node_of(&model, sym, at),
            axiom: find_axiom(axiom),
        };
        if !is_violation(&model, &tbox, v, None) {
            return Err(format!("step {}: <{axiom}, {at:?}> is not applicable", i + 1));
        }
        expand(&mut model, &tbox, v).map_err(|e| e.to_string())?;
        let got = render(&model, sym);
        if got != *expected {
            return Err(format!("Y{}: expected {expected}, got {got}", i + 1));
        }
        if !is_consistent(&model) {
            return Err(format!("Y{}: statuses disagree with recompute", i + 1));
        }
    }
    let done = complete(model, &tbox, &SaturationOptions::default(), None).map_err(|e| e.to_string())?;
    if !done.model.has_name(NodeIndex::ROOT, m) {
        return Err("M missing from the final root label".into());
    }
    if !find_violations(&done.model, &tbox).is_empty() {
        return Err("completed model still has violations".into());
    }
    Ok(done.model)
}

/// Statuses of the nine-node chain reaction before and after the first
/// node becomes blocked.
pub struct ChainReaction {
    pub before: String,
    pub after: String,
    pub delta: BlockingDelta,
}

/// Builds the tree where `rs` directly blocks `sr` (so `srs` is indirect and
/// `sss` stays free), then makes `r` equal to the root. The block on `r`
/// frees `sr`, which in turn lets `srs` block `sss`.
pub fn build_chain_reaction() -> Result<ChainReaction, String> {
    let mut sym = SymbolTable::new();
    sym.intern_role("r").map_err(|e| e.to_string())?;
    sym.intern_role("s").map_err(|e| e.to_string())?;
    let tree: [(&str, &[&str]); 11] = [
        ("", &["P", "X"]),
        ("r", &["P"]),
        ("s", &["Q"]),
        ("r.r", &["R2"]),
        ("r.s", &["C"]),
        ("s.r", &["C"]),
        ("s.s", &["R7"]),
        ("s.r.r", &["R5"]),
        ("s.r.s", &["D"]),
        ("s.s.r", &["R8"]),
        ("s.s.s", &["D"]),
    ];
    for (_, names) in &tree {
        for n in *names {
            sym.intern_concept(n).map_err(|e| e.to_string())?;
        }
    }
    let mut model = PartialModel::new(2, true);
    for (w, names) in &tree {
        let idx = node_of(&model, &sym, w);
        model.add_node(idx).map_err(|e| e.to_string())?;
        for n in *names {
            model
                .add_to_label(idx, sym.concept(n).unwrap())
                .map_err(|e| e.to_string())?;
        }
        apply_label_change(&mut model, idx);
    }
    if !is_consistent(&model) {
        return Err("initial statuses disagree with recompute".into());
    }
    let before = render(&model, &sym);
    let r = node_of(&model, &sym, "r");
    model
        .add_to_label(r, sym.concept("X").unwrap())
        .map_err(|e| e.to_string())?;
    let delta = apply_label_change(&mut model, r);
    if !is_consistent(&model) {
        return Err("statuses after the change disagree with recompute".into());
    }
    Ok(ChainReaction {
        before,
        after: render(&model, &sym),
        delta,
    })
}

pub const CHAIN_BEFORE: &str = "ε=P,X/f r=P/f s=Q/f r.r=R2/f r.s=C/f s.r=C/d:r.s s.s=R7/f \
s.r.r=R5/i s.r.s=D/i s.s.r=R8/f s.s.s=D/f";
pub const CHAIN_AFTER: &str = "ε=P,X/f r=P,X/d:ε s=Q/f r.r=R2/i r.s=C/i s.r=C/f s.s=R7/f \
s.r.r=R5/f s.r.s=D/f s.s.r=R8/f s.s.s=D/d:s.r.s";

/// Checks the chain reaction against the expected trees and delta.
pub fn check_chain_reaction() -> Result<(), String> {
    let run = build_chain_reaction()?;
    if run.before != CHAIN_BEFORE {
        return Err(format!("before: {}", run.before));
    }
    if run.after != CHAIN_AFTER {
        return Err(format!("after: {}", run.after));
    }
    let enc = flzero_core::Encoding::new(2);
    let idx = |w: &[u32]| enc.index_of(&w.iter().map(|&r| RoleId(r)).collect::<Vec<_>>()).unwrap();
    let blocked: BTreeSet<NodeIndex> = [idx(&[0]), idx(&[0, 0]), idx(&[0, 1]), idx(&[1, 1, 1])].into();
    let unblocked: BTreeSet<NodeIndex> = [idx(&[1, 0]), idx(&[1, 0, 0]), idx(&[1, 0, 1])].into();
    if run.delta.became_blocked != blocked || run.delta.became_unblocked != unblocked {
        return Err(format!("unexpected delta {:?}", run.delta));
    }
    Ok(())
}

/// Runs every user name of `tbox` through both engines and returns the
/// root labels keyed by name.
pub fn root_labels(
    tbox: &NormalTBox,
    opts: &SaturationOptions,
    rete: bool,
) -> Result<BTreeMap<ConceptId, LabelSet>, SaturationError> {
    let mut out = BTreeMap::new();
    for a in tbox.symbols.user_concepts() {
        let s = if rete {
            saturate_rete(tbox, a, opts)?
        } else {
            saturate(tbox, a, opts)?
        };
        out.insert(a, s.root_label().clone());
    }
    Ok(out)
}
