//! Seeded workloads shared by the benchmarks.

use flzero_core::random::{self, Shape};
use flzero_core::{parse_tbox, Engine, Reasoner, ReasonerOptions, TBox};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const WORKED_EXAMPLE: &str = "\
A [= all r.A
A [= B
A [= all s.K
K [= all s.A
all s.B [= L
all s.L [= M
";

pub struct Workload {
    pub name: String,
    pub tbox: TBox,
}

pub fn worked_example() -> Workload {
    Workload {
        name: "worked".into(),
        tbox: parse_tbox(WORKED_EXAMPLE).expect("valid"),
    }
}

/// Plain FL0, nested FL0, FL⊥ and Horn TBoxes of a fixed size.
pub fn workloads(seed: u64, concepts: usize, axioms: usize) -> Vec<Workload> {
    let shape = Shape {
        concepts,
        roles: 2,
        axioms,
        max_atoms: 3,
        forall: 0.4,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        Workload {
            name: format!("fl0-{concepts}"),
            tbox: random::fl0_tbox(&mut rng, &shape),
        },
        Workload {
            name: format!("nested-{concepts}"),
            tbox: random::nested_tbox(&mut rng, &shape, 3),
        },
        Workload {
            name: format!("flbot-{concepts}"),
            tbox: random::flbot_tbox(&mut rng, &shape),
        },
        Workload {
            name: format!("horn-{concepts}"),
            tbox: random::horn_tbox(&mut rng, &shape),
        },
    ]
}

/// Single-threaded options for one engine; the four switches are bits
/// 0..4 of `bits` in the order multithreading, ancestor blocking, role
/// filtering, global caching.
pub fn options(engine: Engine, bits: u8) -> ReasonerOptions {
    let mut opts = ReasonerOptions {
        engine,
        threads: 1,
        ..ReasonerOptions::default()
    };
    if bits & 1 != 0 {
        opts.threads = 4;
    }
    opts.ancestor_blocking = bits & 2 != 0;
    opts.role_filtering = bits & 4 != 0;
    opts.global_caching = bits & 8 != 0;
    if !opts.ancestor_blocking {
        opts.step_limit = Some(200_000);
    }
    opts
}

/// Classifies and returns the number of names that completed.
pub fn classify(tbox: &TBox, opts: ReasonerOptions) -> usize {
    let reasoner = Reasoner::new(tbox, opts).expect("valid options");
    let result = reasoner.classify().expect("classification runs");
    result.subsumers.len() - result.timeout_names.len()
}
