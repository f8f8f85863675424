use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::model::LabelSet;
use crate::saturate::SubsumerCache;
use crate::symbols::ConceptId;

/// Completed root labels shared by all workers of a reasoner.
///
/// Insertion keeps the first value; concurrent runs for the same name
/// compute equal labels, so losing a race is harmless.
#[derive(Debug, Default)]
pub struct GlobalCache {
    map: RwLock<HashMap<ConceptId, Arc<LabelSet>>>,
}

impl GlobalCache {
    pub fn new() -> GlobalCache {
        GlobalCache::default()
    }

    pub fn insert(&self, name: ConceptId, label: LabelSet) {
        self.map
            .write()
            .expect("cache lock")
            .entry(name)
            .or_insert_with(|| Arc::new(label));
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().expect("cache lock").clear();
    }
}

impl SubsumerCache for GlobalCache {
    fn lookup(&self, name: ConceptId) -> Option<Arc<LabelSet>> {
        self.map.read().expect("cache lock").get(&name).cloned()
    }
}
