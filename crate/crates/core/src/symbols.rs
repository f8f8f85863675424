//! Interned concept and role names.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Reserved prefix of names introduced by transformations.
pub const FRESH_PREFIX: &str = "_fresh#";

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ConceptId(pub u32);

/// Dense role identifier. Roles are numbered from zero here; the node
/// encoding uses `digit() = id + 1` so that zero is never a role digit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RoleId(pub u32);

impl ConceptId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl RoleId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn digit(self) -> u128 {
        u128::from(self.0) + 1
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

impl fmt::Display for RoleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("`{0}` is already used as a role name")]
    ConceptIsRole(String),
    #[error("`{0}` is already used as a concept name")]
    RoleIsConcept(String),
}

/// The signature registry of a TBox: `N_C` and `N_R` as dense id spaces.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    concepts: Vec<String>,
    roles: Vec<String>,
    concept_ids: HashMap<String, ConceptId>,
    role_ids: HashMap<String, RoleId>,
    next_fresh: u64,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern_concept(&mut self, name: &str) -> Result<ConceptId, SymbolError> {
        if let Some(&id) = self.concept_ids.get(name) {
            return Ok(id);
        }
        if self.role_ids.contains_key(name) {
            return Err(SymbolError::ConceptIsRole(name.to_owned()));
        }
        let id = ConceptId(self.concepts.len() as u32);
        self.concepts.push(name.to_owned());
        self.concept_ids.insert(name.to_owned(), id);
        if let Some(k) = fresh_number(name) {
            self.next_fresh = self.next_fresh.max(k + 1);
        }
        Ok(id)
    }

    pub fn intern_role(&mut self, name: &str) -> Result<RoleId, SymbolError> {
        if let Some(&id) = self.role_ids.get(name) {
            return Ok(id);
        }
        if self.concept_ids.contains_key(name) {
            return Err(SymbolError::RoleIsConcept(name.to_owned()));
        }
        let id = RoleId(self.roles.len() as u32);
        self.roles.push(name.to_owned());
        self.role_ids.insert(name.to_owned(), id);
        Ok(id)
    }

    /// Registers a new concept name `_fresh#k` that does not clash with
    /// anything registered so far.
    pub fn fresh_concept(&mut self) -> ConceptId {
        loop {
            let name = format!("{FRESH_PREFIX}{}", self.next_fresh);
            self.next_fresh += 1;
            if !self.concept_ids.contains_key(&name) {
                return self.intern_concept(&name).expect("fresh names are never roles");
            }
        }
    }

    pub fn concept(&self, name: &str) -> Option<ConceptId> {
        self.concept_ids.get(name).copied()
    }

    pub fn role(&self, name: &str) -> Option<RoleId> {
        self.role_ids.get(name).copied()
    }

    pub fn concept_name(&self, id: ConceptId) -> &str {
        &self.concepts[id.index()]
    }

    pub fn role_name(&self, id: RoleId) -> &str {
        &self.roles[id.index()]
    }

    pub fn is_fresh(&self, id: ConceptId) -> bool {
        is_fresh_name(self.concept_name(id))
    }

    pub fn concept_count(&self) -> usize {
        self.concepts.len()
    }

    pub fn role_count(&self) -> usize {
        self.roles.len()
    }

    pub fn concepts(&self) -> impl Iterator<Item = ConceptId> + '_ {
        (0..self.concepts.len() as u32).map(ConceptId)
    }

    pub fn roles(&self) -> impl Iterator<Item = RoleId> + '_ {
        (0..self.roles.len() as u32).map(RoleId)
    }

    /// Concept names that are not transformation artifacts.
    pub fn user_concepts(&self) -> impl Iterator<Item = ConceptId> + '_ {
        self.concepts().filter(|&c| !self.is_fresh(c))
    }
}

pub fn is_fresh_name(name: &str) -> bool {
    name.starts_with(FRESH_PREFIX)
}

fn fresh_number(name: &str) -> Option<u64> {
    name.strip_prefix(FRESH_PREFIX)?.parse().ok()
}
