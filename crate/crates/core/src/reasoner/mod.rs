//! Subsumption, subsumer sets and classification over a prepared TBox.

mod cache;
mod classify;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use thiserror::Error;

pub use cache::GlobalCache;
pub use classify::{classification_checksum, ClassificationResult};

use crate::bitset::BitSet;
use crate::horn::{horn_run, HornError, Skeleton};
use crate::model::{LabelSet, ModelError};
use crate::rete::{compile, saturate_rete_with, ReteNetwork};
use crate::saturate::{saturate_with_cache, Saturation, SaturationError, SaturationOptions, Strategy, SubsumerCache};
use crate::symbols::{ConceptId, RoleId, SymbolTable};
use crate::tbox::{Atom, NormalTBox, TBox};
use crate::transform::{eliminate_top_bottom_over, is_horn, normalize, split_rhs};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum HornMode {
    /// Use the Horn procedure whenever the TBox is Horn.
    #[default]
    Auto,
    /// Require the Horn procedure; non-Horn TBoxes are an error.
    Force,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Engine {
    #[default]
    Rete,
    Naive,
}

#[derive(Clone, Debug)]
pub struct ReasonerOptions {
    pub threads: usize,
    pub ancestor_blocking: bool,
    pub role_filtering: bool,
    pub global_caching: bool,
    /// Mandatory when ancestor blocking is off.
    pub step_limit: Option<u64>,
    /// Wall-clock limit per saturation run.
    pub timeout: Option<Duration>,
    pub horn: HornMode,
    pub batch_size: usize,
    pub engine: Engine,
    pub strategy: Strategy,
}

impl Default for ReasonerOptions {
    fn default() -> Self {
        ReasonerOptions {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            ancestor_blocking: true,
            role_filtering: true,
            global_caching: true,
            step_limit: None,
            timeout: None,
            horn: HornMode::Auto,
            batch_size: 48,
            engine: Engine::Rete,
            strategy: Strategy::Fifo,
        }
    }
}

impl ReasonerOptions {
    pub fn validate(&self) -> Result<(), ReasonerError> {
        let bad = |m: &str| Err(ReasonerError::InvalidOptions(m.to_owned()));
        if self.threads == 0 {
            return bad("threads must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch size must be positive");
        }
        if self.step_limit == Some(0) {
            return bad("step limit must be positive");
        }
        if !self.ancestor_blocking && self.step_limit.is_none() {
            return bad("a step limit is required when ancestor blocking is off");
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ReasonerError {
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error("timeout")]
    Timeout,
    #[error("inconclusive: step limit of {0} reached")]
    Inconclusive(u64),
    /// A run grew deeper than node indices can address; only reachable
    /// without ancestor blocking or with very many names.
    #[error("inconclusive: node depth exceeds the index range")]
    DepthLimit,
    #[error("the TBox is not Horn-FL0")]
    NotHorn,
    #[error(transparent)]
    Saturation(SaturationError),
}

impl From<SaturationError> for ReasonerError {
    fn from(e: SaturationError) -> Self {
        match e {
            SaturationError::Timeout => ReasonerError::Timeout,
            SaturationError::StepLimit(n) => ReasonerError::Inconclusive(n),
            SaturationError::Model(ModelError::DepthLimit) => ReasonerError::DepthLimit,
            other => ReasonerError::Saturation(other),
        }
    }
}

impl From<HornError> for ReasonerError {
    fn from(e: HornError) -> Self {
        match e {
            HornError::NotHorn => ReasonerError::NotHorn,
            HornError::Model(ModelError::DepthLimit) => ReasonerError::DepthLimit,
            HornError::Model(m) => ReasonerError::Saturation(SaturationError::Model(m)),
        }
    }
}

/// Roles occurring in a left-hand `∀r.A`; successors for other roles never
/// influence a match.
pub fn role_filter(tbox: &NormalTBox) -> BTreeSet<RoleId> {
    tbox.axioms
        .iter()
        .flat_map(|g| g.lhs.atom_list())
        .filter_map(|a| match *a {
            Atom::Forall(r, _) | Atom::ForallBottom(r) => Some(r),
            Atom::Name(_) => None,
        })
        .collect()
}

/// A TBox prepared once for many queries: normalized, free of `⊤`/`⊥`,
/// compiled to a Rete network, with its role filter and Horn variant.
pub struct Reasoner {
    opts: ReasonerOptions,
    user: SymbolTable,
    tbox: NormalTBox,
    horn: Option<NormalTBox>,
    network: ReteNetwork,
    filter: BitSet,
    cache: GlobalCache,
}

impl Reasoner {
    pub fn new(tbox: &TBox, opts: ReasonerOptions) -> Result<Reasoner, ReasonerError> {
        opts.validate()?;
        let normal = normalize(tbox);
        // ⊥ and ⊤ axioms range over every registered name so that names
        // without occurrences are still answered correctly.
        let concepts: BTreeSet<ConceptId> = normal.symbols.concepts().collect();
        let roles: BTreeSet<RoleId> = normal.symbols.roles().collect();
        let fl0 = eliminate_top_bottom_over(&normal, &concepts, &roles);
        let split = split_rhs(&fl0);
        let horn = is_horn(&split).then_some(split);
        if opts.horn == HornMode::Force && horn.is_none() {
            return Err(ReasonerError::NotHorn);
        }
        let filter = role_filter(&fl0).into_iter().map(|r| r.index()).collect();
        Ok(Reasoner {
            network: compile(&fl0),
            opts,
            user: tbox.symbols.clone(),
            tbox: fl0,
            horn,
            filter,
            cache: GlobalCache::new(),
        })
    }

    pub fn options(&self) -> &ReasonerOptions {
        &self.opts
    }

    /// The symbols of the input TBox.
    pub fn symbols(&self) -> &SymbolTable {
        &self.user
    }

    pub fn concept(&self, name: &str) -> Option<ConceptId> {
        self.user.concept(name)
    }

    /// The FL0 TBox the engines run on.
    pub fn prepared(&self) -> &NormalTBox {
        &self.tbox
    }

    pub fn network(&self) -> &ReteNetwork {
        &self.network
    }

    pub fn cache(&self) -> &GlobalCache {
        &self.cache
    }

    pub fn is_horn(&self) -> bool {
        self.horn.is_some()
    }

    fn uses_horn(&self) -> bool {
        self.horn.is_some() && self.opts.horn != HornMode::Off
    }

    /// Concept names of the input that are not transformation artifacts.
    pub fn user_names(&self) -> impl Iterator<Item = ConceptId> + '_ {
        self.user.user_concepts()
    }

    fn visible(&self, label: &LabelSet) -> BTreeSet<ConceptId> {
        label
            .iter()
            .map(|c| ConceptId(c as u32))
            .filter(|&c| c.index() < self.user.concept_count() && !self.user.is_fresh(c))
            .collect()
    }

    fn run_options(&self, stop_when: Option<ConceptId>) -> SaturationOptions {
        SaturationOptions {
            strategy: self.opts.strategy,
            ancestor_blocking: self.opts.ancestor_blocking,
            stop_when,
            step_limit: self.opts.step_limit,
            deadline: self.opts.timeout.map(|t| Instant::now() + t),
            role_filter: self.opts.role_filtering.then(|| self.filter.clone()),
        }
    }

    /// One saturation run from `a0` with the configured engine.
    pub fn saturate(&self, a0: ConceptId, stop_when: Option<ConceptId>) -> Result<Saturation, ReasonerError> {
        let opts = self.run_options(stop_when);
        let cache: Option<&dyn SubsumerCache> = self.opts.global_caching.then_some(&self.cache as _);
        let run = match self.opts.engine {
            Engine::Rete => saturate_rete_with(&self.network, &self.tbox, a0, &opts, cache),
            Engine::Naive => saturate_with_cache(&self.tbox, a0, &opts, cache),
        }?;
        if self.opts.global_caching && !run.stopped_early {
            self.cache.insert(a0, run.root_label().clone());
        }
        Ok(run)
    }

    /// Whether `a ⊑ b`. The run stops as soon as `b` reaches the root.
    pub fn subsumes(&self, a: ConceptId, b: ConceptId) -> Result<bool, ReasonerError> {
        if a == b {
            return Ok(true);
        }
        if self.uses_horn() {
            let horn = self.horn.as_ref().expect("checked");
            return Ok(horn_run(horn, a, &Skeleton::root(b))?.holds);
        }
        Ok(self
            .saturate(a, Some(b))?
            .model
            .has_name(crate::model::NodeIndex::ROOT, b))
    }

    /// All user-visible names `b` with `a ⊑ b`.
    pub fn subsumer_set(&self, a: ConceptId) -> Result<BTreeSet<ConceptId>, ReasonerError> {
        if self.uses_horn() {
            let horn = self.horn.as_ref().expect("checked");
            return Ok(self.visible(horn_run(horn, a, &Skeleton::root(a))?.root_label()));
        }
        Ok(self.visible(self.saturate(a, None)?.root_label()))
    }
}
