//! Read-mostly memo tables for symbolic results keyed by `(n, word, ...)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::Result;

type Slot<V> = Arc<OnceLock<Result<Arc<V>>>>;

/// Each key is computed at most once; concurrent readers of the same key wait
/// on its slot instead of recomputing.
pub struct Memo<V> {
    table: OnceLock<RwLock<HashMap<Vec<usize>, Slot<V>>>>,
}

impl<V> Memo<V> {
    pub const fn new() -> Self {
        Memo { table: OnceLock::new() }
    }

    pub fn get_or_compute(&self, key: Vec<usize>, f: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        let table = self.table.get_or_init(Default::default);
        let existing = table.read().expect("memo lock poisoned").get(&key).cloned();
        let slot = match existing {
            Some(s) => s,
            None => table.write().expect("memo lock poisoned").entry(key).or_default().clone(),
        };
        slot.get_or_init(|| f().map(Arc::new)).clone()
    }
}

impl<V> Default for Memo<V> {
    fn default() -> Self {
        Self::new()
    }
}
