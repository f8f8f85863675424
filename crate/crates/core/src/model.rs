//! Partial functional interpretations: finite prefix-closed trees over role
//! words, stored under an integer encoding.
//!
//! A word `r_{i1}…r_{im}` over `n` roles is the base-`(n+1)` number with
//! digits `i1…im`, each in `1..=n`. Shorter words get smaller numbers, so
//! integer order on indices is a valid choice for the node order `≺`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::bitset::BitSet;
use crate::symbols::{ConceptId, RoleId, SymbolTable};

/// Label of a node: a set of concept-name ids.
pub type LabelSet = BitSet;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct NodeIndex(pub u128);

impl NodeIndex {
    pub const ROOT: NodeIndex = NodeIndex(0);

    pub fn is_root(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for NodeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ModelError {
    #[error("node index exceeds the supported depth")]
    DepthLimit,
    #[error("the root has no parent")]
    NoParent,
    #[error("node {0} is not in the model")]
    MissingNode(NodeIndex),
    #[error("parent of node {0} is not in the model")]
    MissingParent(NodeIndex),
}

/// Index arithmetic for a fixed number of roles.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Encoding {
    roles: u32,
    base: u128,
}

impl Encoding {
    pub fn new(role_count: usize) -> Encoding {
        let roles = u32::try_from(role_count).expect("role count fits in u32");
        // With no roles only the root exists; any base above 1 will do.
        Encoding {
            roles,
            base: u128::from(roles).max(1) + 1,
        }
    }

    pub fn role_count(&self) -> usize {
        self.roles as usize
    }

    pub fn index_of(&self, word: &[RoleId]) -> Result<NodeIndex, ModelError> {
        word.iter().try_fold(NodeIndex::ROOT, |idx, &r| self.successor(idx, r))
    }

    /// `(n+1)·idx + i` for the `i`-th role.
    pub fn successor(&self, idx: NodeIndex, role: RoleId) -> Result<NodeIndex, ModelError> {
        debug_assert!(role.0 < self.roles, "role {role} outside the encoding");
        idx.0
            .checked_mul(self.base)
            .and_then(|v| v.checked_add(role.digit()))
            .map(NodeIndex)
            .ok_or(ModelError::DepthLimit)
    }

    pub fn parent(&self, idx: NodeIndex) -> Result<NodeIndex, ModelError> {
        if idx.is_root() {
            return Err(ModelError::NoParent);
        }
        Ok(NodeIndex(idx.0 / self.base))
    }

    /// The role of the last edge on the path to `idx`.
    pub fn last_role(&self, idx: NodeIndex) -> Option<RoleId> {
        if idx.is_root() {
            return None;
        }
        Some(RoleId((idx.0 % self.base) as u32 - 1))
    }

    /// Word length, counted in digits.
    pub fn depth(&self, idx: NodeIndex) -> usize {
        let mut v = idx.0;
        let mut d = 0;
        while v > 0 {
            v /= self.base;
            d += 1;
        }
        d
    }

    pub fn is_proper_prefix(&self, rho: NodeIndex, sigma: NodeIndex) -> bool {
        let (dr, ds) = (self.depth(rho), self.depth(sigma));
        if dr >= ds {
            return false;
        }
        match self.base.checked_pow((ds - dr) as u32) {
            Some(p) => rho.0 == sigma.0 / p,
            None => rho.is_root(),
        }
    }

    pub fn word_of(&self, idx: NodeIndex) -> Vec<RoleId> {
        let mut word = Vec::with_capacity(self.depth(idx));
        let mut v = idx.0;
        while v > 0 {
            word.push(RoleId((v % self.base) as u32 - 1));
            v /= self.base;
        }
        word.reverse();
        word
    }

    /// Existing-or-not children of `idx`, one per role, skipping overflow.
    pub fn children(&self, idx: NodeIndex) -> impl Iterator<Item = NodeIndex> + '_ {
        (0..self.roles).filter_map(move |r| self.successor(idx, RoleId(r)).ok())
    }
}

/// Blocking status of a node.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Status {
    Free,
    /// Blocked by the given smaller node with the same label.
    Direct(NodeIndex),
    /// Some proper prefix is blocked.
    Indirect,
    /// Label was spliced in from a finished run; blocked until it grows.
    Cached,
}

impl Status {
    pub fn is_blocked(self) -> bool {
        self != Status::Free
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Free => f.write_str("free"),
            Status::Direct(by) => write!(f, "direct({by})"),
            Status::Indirect => f.write_str("indirect"),
            Status::Cached => f.write_str("cached"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct NodeData {
    pub(crate) label: LabelSet,
    pub(crate) status: Status,
}

/// The tree `Y`: nodes, labels, blocking statuses and the bookkeeping that
/// lets the blocking module update statuses incrementally.
///
/// Mutators here only touch nodes and labels. Statuses are brought up to
/// date by [`crate::blocking::apply_label_change`].
#[derive(Clone, Debug)]
pub struct PartialModel {
    enc: Encoding,
    pub(crate) nodes: BTreeMap<NodeIndex, NodeData>,
    pub(crate) inverse: HashMap<LabelSet, BTreeSet<NodeIndex>>,
    pub(crate) blocks: HashMap<NodeIndex, BTreeSet<NodeIndex>>,
    pub(crate) pinned: HashMap<NodeIndex, LabelSet>,
    ancestor_blocking: bool,
}

impl PartialModel {
    /// The one-node tree `{ε}` with an empty label.
    pub fn new(role_count: usize, ancestor_blocking: bool) -> PartialModel {
        let mut m = PartialModel {
            enc: Encoding::new(role_count),
            nodes: BTreeMap::new(),
            inverse: HashMap::new(),
            blocks: HashMap::new(),
            pinned: HashMap::new(),
            ancestor_blocking,
        };
        m.nodes.insert(
            NodeIndex::ROOT,
            NodeData {
                label: LabelSet::new(),
                status: Status::Free,
            },
        );
        m.inverse.entry(LabelSet::new()).or_default().insert(NodeIndex::ROOT);
        m
    }

    /// The initial tree for a run seeded with `a0`.
    pub fn init(role_count: usize, ancestor_blocking: bool, a0: ConceptId) -> PartialModel {
        let mut m = PartialModel::new(role_count, ancestor_blocking);
        m.add_to_label(NodeIndex::ROOT, a0).expect("root exists");
        m
    }

    pub fn encoding(&self) -> &Encoding {
        &self.enc
    }

    pub fn ancestor_blocking(&self) -> bool {
        self.ancestor_blocking
    }

    pub fn contains(&self, idx: NodeIndex) -> bool {
        self.nodes.contains_key(&idx)
    }

    pub fn label(&self, idx: NodeIndex) -> Option<&LabelSet> {
        self.nodes.get(&idx).map(|d| &d.label)
    }

    pub fn status(&self, idx: NodeIndex) -> Option<Status> {
        self.nodes.get(&idx).map(|d| d.status)
    }

    pub fn is_free(&self, idx: NodeIndex) -> bool {
        self.status(idx) == Some(Status::Free)
    }

    pub fn has_name(&self, idx: NodeIndex, name: ConceptId) -> bool {
        self.label(idx).is_some_and(|l| l.contains(name.index()))
    }

    pub fn root_label(&self) -> &LabelSet {
        &self.nodes[&NodeIndex::ROOT].label
    }

    /// Node indices in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeIndex> + '_ {
        self.nodes.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.keys().next_back().map_or(0, |&i| self.enc.depth(i))
    }

    /// All statuses, ascending by index.
    pub fn statuses(&self) -> BTreeMap<NodeIndex, Status> {
        self.nodes.iter().map(|(&i, d)| (i, d.status)).collect()
    }

    /// Nodes currently carrying exactly `label`, ascending.
    pub fn nodes_with_label(&self, label: &LabelSet) -> impl Iterator<Item = NodeIndex> + '_ {
        self.inverse.get(label).into_iter().flatten().copied()
    }

    /// Nodes directly blocked by `idx`.
    pub fn blocked_by(&self, idx: NodeIndex) -> impl Iterator<Item = NodeIndex> + '_ {
        self.blocks.get(&idx).into_iter().flatten().copied()
    }

    pub fn successor(&self, idx: NodeIndex, role: RoleId) -> Result<NodeIndex, ModelError> {
        self.enc.successor(idx, role)
    }

    /// Adds `idx` with an empty label; the parent must already exist.
    pub fn add_node(&mut self, idx: NodeIndex) -> Result<bool, ModelError> {
        if self.contains(idx) {
            return Ok(false);
        }
        let parent = self.enc.parent(idx)?;
        if !self.contains(parent) {
            return Err(ModelError::MissingParent(idx));
        }
        self.nodes.insert(
            idx,
            NodeData {
                label: LabelSet::new(),
                status: Status::Free,
            },
        );
        self.inverse.entry(LabelSet::new()).or_default().insert(idx);
        Ok(true)
    }

    /// Adds `name` to the label of `idx`; returns whether the label grew.
    pub fn add_to_label(&mut self, idx: NodeIndex, name: ConceptId) -> Result<bool, ModelError> {
        self.add_labels(idx, &LabelSet::singleton(name.index()))
    }

    /// Adds every name of `names` to the label of `idx`.
    pub fn add_labels(&mut self, idx: NodeIndex, names: &LabelSet) -> Result<bool, ModelError> {
        let data = self.nodes.get_mut(&idx).ok_or(ModelError::MissingNode(idx))?;
        if names.is_subset(&data.label) {
            return Ok(false);
        }
        let old = data.label.clone();
        data.label.union_with(names);
        let new = data.label.clone();
        if let Some(set) = self.inverse.get_mut(&old) {
            set.remove(&idx);
            if set.is_empty() {
                self.inverse.remove(&old);
            }
        }
        if self.pinned.get(&idx).is_some_and(|allowed| !new.is_subset(allowed)) {
            self.pinned.remove(&idx);
        }
        self.inverse.entry(new).or_default().insert(idx);
        Ok(true)
    }

    /// Holds `idx` as blocked for as long as its label stays within `allowed`.
    pub fn pin(&mut self, idx: NodeIndex, allowed: LabelSet) -> Result<(), ModelError> {
        if !self.contains(idx) {
            return Err(ModelError::MissingNode(idx));
        }
        self.pinned.insert(idx, allowed);
        Ok(())
    }

    pub fn is_pinned(&self, idx: NodeIndex) -> bool {
        self.pinned.contains_key(&idx)
    }

    pub(crate) fn set_status(&mut self, idx: NodeIndex, status: Status) {
        let data = self.nodes.get_mut(&idx).expect("node exists");
        if let Status::Direct(old) = data.status {
            if let Some(set) = self.blocks.get_mut(&old) {
                set.remove(&idx);
                if set.is_empty() {
                    self.blocks.remove(&old);
                }
            }
        }
        data.status = status;
        if let Status::Direct(by) = status {
            self.blocks.entry(by).or_default().insert(idx);
        }
    }

    /// Human-readable word for `idx`: `ε` or role names joined by dots.
    pub fn word_string(&self, idx: NodeIndex, symbols: &SymbolTable) -> String {
        let word = self.enc.word_of(idx);
        if word.is_empty() {
            return "ε".to_owned();
        }
        word.iter().map(|&r| symbols.role_name(r)).collect::<Vec<_>>().join(".")
    }

    pub fn label_string(&self, label: &LabelSet, symbols: &SymbolTable) -> String {
        let mut names: Vec<&str> = label
            .iter()
            .map(|c| symbols.concept_name(ConceptId(c as u32)))
            .collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }

    /// One line per node: `index\tword\t{labels}\tstatus`, ascending by index.
    pub fn dump(&self, symbols: &SymbolTable) -> String {
        let mut out = String::new();
        for (&idx, data) in &self.nodes {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                idx,
                self.word_string(idx, symbols),
                self.label_string(&data.label, symbols),
                data.status
            );
        }
        out
    }

    /// Rebuilds the label inverse from scratch; used to check consistency.
    pub fn rebuilt_inverse(&self) -> HashMap<LabelSet, BTreeSet<NodeIndex>> {
        let mut inv: HashMap<LabelSet, BTreeSet<NodeIndex>> = HashMap::new();
        for (&idx, data) in &self.nodes {
            inv.entry(data.label.clone()).or_default().insert(idx);
        }
        inv
    }

    pub fn inverse_is_consistent(&self) -> bool {
        self.rebuilt_inverse() == self.inverse
    }
}
