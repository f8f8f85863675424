//! The acceptance checks, parameterized by sample size so the integration
//! tests can run smaller versions. Each returns a one-line summary on
//! success and the first failure otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::panic;
use std::time::{Duration, Instant};

use flzero_core::random::{self, Shape};
use flzero_core::saturate::depth_bound;
use flzero_core::transform::eliminate_top_bottom_over;
use flzero_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle;

pub type Outcome = Result<String, String>;

fn rng(stream: u64, seed: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A shape within the stated limits: up to 8 names, 2 roles, 12 axioms and
/// 3 atoms per side.
pub fn small_shape<R: Rng>(rng: &mut R) -> Shape {
    Shape {
        concepts: rng.random_range(2..=8),
        roles: rng.random_range(1..=2),
        axioms: rng.random_range(1..=12),
        max_atoms: rng.random_range(1..=3),
        forall: 0.4,
    }
}

pub fn random_fl0(seed: u64) -> NormalTBox {
    let mut r = rng(1, seed);
    let shape = small_shape(&mut r);
    normalize(&random::fl0_tbox(&mut r, &shape))
}

/// Tracks the largest depth seen relative to `2^|N_C| + 1`.
#[derive(Default)]
pub struct DepthLog {
    pub runs: usize,
    pub violations: Vec<String>,
}

impl DepthLog {
    pub fn record(&mut self, tbox: &NormalTBox, s: &Saturation, what: &str) {
        self.runs += 1;
        let bound = depth_bound(tbox.symbols.concept_count());
        // Independent of the library's helper: the bound is 2^k + 1.
        let k = tbox.symbols.concept_count() as u32;
        let own = if k >= 127 { u128::MAX } else { (1u128 << k) + 1 };
        assert_eq!(bound, own, "depth bound formula");
        if s.model.max_depth() as u128 > own && self.violations.len() < 5 {
            self.violations
                .push(format!("{what}: depth {} > {own}", s.model.max_depth()));
        }
    }
}

/// Scripted example run plus the subsumption answer, under one second.
pub fn golden() -> Outcome {
    let start = Instant::now();
    super::worked_trajectory()?;
    let r =
        Reasoner::new(&parse_tbox(super::SECTION3).unwrap(), ReasonerOptions::default()).map_err(|e| e.to_string())?;
    let yes = r
        .subsumes(r.concept("A").unwrap(), r.concept("M").unwrap())
        .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    if !yes {
        return Err("subsumes(A, M) answered no".into());
    }
    if took >= Duration::from_secs(1) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("9 steps replayed, A [= M, {:.1} ms", took.as_secs_f64() * 1e3))
}

/// Naive and Rete engines on `count` random TBoxes, every name as a query.
pub fn engines(count: u64, depths: &mut DepthLog) -> Outcome {
    let start = Instant::now();
    let opts = SaturationOptions::default();
    let mut queries = 0;
    for seed in 0..count {
        let t = random_fl0(seed);
        for a in t.symbols.user_concepts() {
            let n = saturate(&t, a, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
            let r = saturate_rete(&t, a, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
            depths.record(&t, &n, "naive");
            depths.record(&t, &r, "rete");
            if n.root_label() != r.root_label() {
                return Err(format!(
                    "seed {seed}, query {}: labels differ",
                    t.symbols.concept_name(a)
                ));
            }
            queries += 1;
        }
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(60) {
        return Err(format!("{count} TBoxes took {took:?}"));
    }
    Ok(format!(
        "{count} TBoxes, {queries} queries, 0 mismatches, {:.2} s",
        took.as_secs_f64()
    ))
}

/// FIFO, LIFO and seeded random scheduling in both engines.
pub fn strategies(count: u64, depths: &mut DepthLog) -> Outcome {
    let mut queries = 0;
    for seed in 0..count {
        let t = random_fl0(1000 + seed);
        for a in t.symbols.user_concepts() {
            let mut labels = Vec::new();
            for strategy in [
                Strategy::Fifo,
                Strategy::Lifo,
                Strategy::Random(seed),
                Strategy::Random(!seed),
            ] {
                let opts = SaturationOptions {
                    strategy,
                    ..Default::default()
                };
                for s in [saturate(&t, a, &opts), saturate_rete(&t, a, &opts)] {
                    let s = s.map_err(|e| format!("seed {seed}: {e}"))?;
                    depths.record(&t, &s, "strategy");
                    labels.push(s.root_label().clone());
                }
            }
            if labels.windows(2).any(|w| w[0] != w[1]) {
                return Err(format!(
                    "seed {seed}, query {}: strategies disagree",
                    t.symbols.concept_name(a)
                ));
            }
            queries += 1;
        }
    }
    Ok(format!(
        "{count} TBoxes, {queries} queries, 8 schedules each, 0 mismatches"
    ))
}

pub fn depth(log: &DepthLog) -> Outcome {
    match log.violations.first() {
        Some(v) => Err(v.clone()),
        None => Ok(format!("{} runs, 0 violations", log.runs)),
    }
}

/// Random tree growth, label extension and pinning; statuses are compared
/// against the definition after every mutation.
pub fn blocking(mutations: usize) -> Outcome {
    super::check_chain_reaction()?;
    let mut done = 0;
    let mut trial = 0u64;
    while done < mutations {
        let mut r = rng(2, trial);
        trial += 1;
        let roles = r.random_range(1..=3);
        let names = r.random_range(1..=4u32);
        let mut model = PartialModel::new(roles, r.random_bool(0.8));
        let mut present = vec![NodeIndex::ROOT];
        for step in 0..r.random_range(10..80) {
            let what = r.random_range(0..10);
            let idx = if what < 5 {
                let parent = present[r.random_range(0..present.len())];
                let Ok(child) = model.successor(parent, RoleId(r.random_range(0..roles) as u32)) else {
                    continue;
                };
                if model.encoding().depth(child) > 6 || !model.add_node(child).map_err(|e| e.to_string())? {
                    continue;
                }
                present.push(child);
                for _ in 0..r.random_range(0..=2) {
                    model.add_to_label(child, ConceptId(r.random_range(0..names))).unwrap();
                }
                child
            } else if what < 9 {
                let idx = present[r.random_range(0..present.len())];
                model.add_to_label(idx, ConceptId(r.random_range(0..names))).unwrap();
                idx
            } else {
                let idx = present[r.random_range(0..present.len())];
                if idx.is_root() {
                    continue;
                }
                let mut allowed = model.label(idx).unwrap().clone();
                allowed.insert(r.random_range(0..names) as usize);
                model.pin(idx, allowed).unwrap();
                idx
            };
            let before = model.statuses();
            let delta = apply_label_change(&mut model, idx);
            let expected = oracle::statuses(&model);
            if model.statuses() != expected {
                return Err(format!(
                    "trial {}, step {step}: statuses differ from the definition",
                    trial - 1
                ));
            }
            for (i, st) in &expected {
                let was = before.get(i).is_some_and(|s| s.is_blocked());
                let now = st.is_blocked();
                let flagged = if now {
                    delta.became_blocked.contains(i)
                } else {
                    delta.became_unblocked.contains(i)
                };
                if was != now && !flagged {
                    return Err(format!("trial {}, step {step}: delta misses a flip", trial - 1));
                }
            }
            done += 1;
        }
    }
    Ok(format!("chain reaction reproduced, {done} mutations, 0 mismatches"))
}

/// Word of length ≤ 2 over the first `roles` roles.
fn random_word<R: Rng>(r: &mut R, roles: usize) -> Vec<RoleId> {
    (0..r.random_range(0..=2))
        .map(|_| RoleId(r.random_range(0..roles) as u32))
        .collect()
}

/// Horn runs against general saturation of the reduced name query, with the
/// step bound `|T|·|Δ0|` checked on every run.
pub fn horn(count: u64) -> Outcome {
    let mut max_ratio = 0.0f64;
    for seed in 0..count {
        let mut r = rng(3, seed);
        let shape = small_shape(&mut r);
        let raw = random::horn_tbox(&mut r, &shape);
        let t = normalize(&raw);
        if !is_horn(&t) {
            return Err(format!("seed {seed}: generated TBox is not Horn"));
        }
        let a = ConceptId(r.random_range(0..shape.concepts) as u32);
        let goal: Vec<(Vec<RoleId>, ConceptId)> = (0..r.random_range(1..=3))
            .map(|_| {
                (
                    random_word(&mut r, shape.roles),
                    ConceptId(r.random_range(0..shape.concepts) as u32),
                )
            })
            .collect();
        let fast = horn_subsumes(&t, a, &goal).map_err(|e| format!("seed {seed}: {e}"))?;
        let delta0: BTreeSet<NodeIndex> = {
            let enc = Encoding::new(t.symbols.role_count());
            let mut s = BTreeSet::from([NodeIndex::ROOT]);
            for (w, _) in &goal {
                for k in 0..=w.len() {
                    s.insert(enc.index_of(&w[..k]).unwrap());
                }
            }
            s
        };
        let bound = t.axioms.len() * delta0.len();
        if fast.steps as usize > bound {
            return Err(format!("seed {seed}: {} steps > {bound}", fast.steps));
        }
        max_ratio = max_ratio.max(fast.steps as f64 / bound.max(1) as f64);
        let d = Concept::and(goal.iter().map(|(w, b)| {
            w.iter()
                .rev()
                .fold(Concept::Name(*b), |acc, &role| Concept::forall(role, acc))
        }));
        let red = reduce_to_name_subsumption(&Concept::Name(a), &d, &raw);
        let general = saturate(&red.tbox, red.sub_name, &SaturationOptions::default())
            .map_err(|e| format!("seed {seed}: {e}"))?
            .model
            .has_name(NodeIndex::ROOT, red.sup_name);
        if general != fast.holds {
            return Err(format!("seed {seed}: Horn says {}, general says {general}", fast.holds));
        }
    }
    Ok(format!(
        "{count} instances agree, max steps/(|T|·|Δ0|) = {max_ratio:.2}"
    ))
}

/// Elimination sanity on random FL⊥ TBoxes and the forced `A ⊑ ⊥` case.
pub fn elimination(count: u64) -> Outcome {
    let opts = SaturationOptions::default();
    let mut eliminated = 0;
    for seed in 0..count {
        let mut r = rng(4, seed);
        let shape = small_shape(&mut r);
        let raw = random::flbot_tbox(&mut r, &shape);
        let n = normalize(&raw);
        let names: BTreeSet<ConceptId> = raw.symbols.user_concepts().collect();
        let roles: BTreeSet<RoleId> = raw.symbols.roles().collect();
        let e = eliminate_top_bottom_over(&n, &names, &roles);
        if let (Some(bot), Some(top)) = (e.bottom_name, e.top_name) {
            eliminated += 1;
            let from_bot = saturate(&e, bot, &opts).map_err(|x| format!("seed {seed}: {x}"))?;
            for &b in &names {
                if !from_bot.model.has_name(NodeIndex::ROOT, b) {
                    return Err(format!(
                        "seed {seed}: bottom name misses {}",
                        raw.symbols.concept_name(b)
                    ));
                }
                let up = saturate(&e, b, &opts).map_err(|x| format!("seed {seed}: {x}"))?;
                if !up.model.has_name(NodeIndex::ROOT, top) {
                    return Err(format!(
                        "seed {seed}: {} misses the top name",
                        raw.symbols.concept_name(b)
                    ));
                }
            }
        } else if e.dialect() != Dialect::Fl0 {
            return Err(format!("seed {seed}: FL-bottom input left without elimination names"));
        }
        let mut forced = raw.clone();
        let a = ConceptId(r.random_range(0..shape.concepts) as u32);
        forced.axioms.push(Gci::new(Concept::Name(a), Concept::Bottom));
        let reasoner = Reasoner::new(
            &forced,
            ReasonerOptions {
                threads: 1,
                ..Default::default()
            },
        )
        .map_err(|x| format!("seed {seed}: {x}"))?;
        for &b in &names {
            if !reasoner.subsumes(a, b).map_err(|x| format!("seed {seed}: {x}"))? {
                return Err(format!(
                    "seed {seed}: forced bottom does not reach {}",
                    raw.symbols.concept_name(b)
                ));
            }
        }
    }
    Ok(format!(
        "{count} TBoxes ({eliminated} kept FL-bottom after normalizing), forced case holds"
    ))
}

/// The four optimization switches: multithreading, ancestor blocking, role
/// filtering, global caching.
pub fn toggles(bits: u8, threads: usize, step_limit: u64) -> ReasonerOptions {
    let on = |i: u8| bits & (1 << i) != 0;
    ReasonerOptions {
        threads: if on(0) { threads } else { 1 },
        ancestor_blocking: on(1),
        role_filtering: on(2),
        global_caching: on(3),
        step_limit: Some(step_limit),
        // One name per batch so that several workers really interleave.
        batch_size: 1,
        ..Default::default()
    }
}

fn classify(t: &TBox, opts: ReasonerOptions) -> Result<ClassificationResult, ReasonerError> {
    Reasoner::new(t, opts)?.classify()
}

/// The ontology suite: alternating FL0 and FL⊥ TBoxes with nested sides.
pub fn suite_candidate(seed: u64) -> TBox {
    let mut r = rng(5, seed);
    let mut shape = small_shape(&mut r);
    shape.concepts = shape.concepts.max(4);
    if seed.is_multiple_of(2) {
        random::nested_tbox(&mut r, &shape, 3)
    } else {
        random::flbot_tbox(&mut r, &shape)
    }
}

/// Checksums across all 16 switch combinations and 1, 2, 8 threads. Without
/// ancestor blocking some runs never close; candidates where any
/// configuration hits the step limit are set aside (and their completed
/// configurations still have to agree).
pub fn determinism(ontologies: usize, step_limit: u64) -> Outcome {
    let mut used = 0;
    let mut skipped = 0;
    let mut seed = 0;
    while used < ontologies {
        let t = suite_candidate(seed);
        seed += 1;
        let mut sums: BTreeMap<u64, String> = BTreeMap::new();
        let mut incomplete = false;
        for bits in 0..16u8 {
            for threads in [1, 2, 8] {
                match classify(&t, toggles(bits, threads, step_limit)) {
                    Ok(c) if c.timeout_names.is_empty() => {
                        sums.entry(c.checksum())
                            .or_insert_with(|| format!("bits {bits:04b}, {threads} threads"));
                    }
                    Ok(_) | Err(ReasonerError::Inconclusive(_) | ReasonerError::DepthLimit) => incomplete = true,
                    Err(e) => return Err(format!("candidate {}: {e}", seed - 1)),
                }
            }
        }
        if sums.len() > 1 {
            let cfgs: Vec<&String> = sums.values().collect();
            return Err(format!("candidate {}: {} checksums ({cfgs:?})", seed - 1, sums.len()));
        }
        if incomplete {
            skipped += 1;
        } else {
            used += 1;
        }
    }
    Ok(format!(
        "{used} ontologies x 16 switches x 3 thread counts agree; {skipped} candidates set aside for non-termination"
    ))
}

/// Printing then parsing reproduces every generated TBox, and fuzzed text
/// yields a TBox or a located error without panicking.
pub fn parser(round_trips: u64, fuzz: u64) -> Outcome {
    for seed in 0..round_trips {
        let mut r = rng(6, seed);
        let shape = small_shape(&mut r);
        let t = match seed % 4 {
            0 => random::fl0_tbox(&mut r, &shape),
            1 => random::nested_tbox(&mut r, &shape, 4),
            2 => random::flbot_tbox(&mut r, &shape),
            _ => normalize(&random::nested_tbox(&mut r, &shape, 3)).to_tbox(),
        };
        let text = serialize_tbox(&t);
        let back = parse_tbox(&text).map_err(|e| format!("seed {seed}: {e}\n{text}"))?;
        // Conjuncts print in id order and parsing renumbers names by first
        // occurrence, so identity is structural rather than textual.
        let twice = parse_tbox(&serialize_tbox(&back)).map_err(|e| format!("seed {seed}: {e}"))?;
        if !back.structurally_eq(&t) || !twice.structurally_eq(&t) {
            return Err(format!("seed {seed}: round trip changed\n{text}"));
        }
    }
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut accepted = 0;
    let mut failure = None;
    for seed in 0..fuzz {
        let text = random::fuzz_text(&mut rng(7, seed), 24);
        match panic::catch_unwind(|| parse_tbox(&text).map(|t| t.axioms.len())) {
            Ok(Ok(_)) => accepted += 1,
            Ok(Err(e)) if e.line >= 1 && e.column >= 1 => {}
            Ok(Err(e)) => {
                failure = Some(format!("fuzz {seed}: error without a position: {e}"));
                break;
            }
            Err(_) => {
                failure = Some(format!("fuzz {seed}: panic on {text:?}"));
                break;
            }
        }
    }
    panic::set_hook(hook);
    match failure {
        Some(f) => Err(f),
        None => Ok(format!(
            "{round_trips} round trips, {fuzz} fuzz inputs ({accepted} parsed), 0 panics"
        )),
    }
}
