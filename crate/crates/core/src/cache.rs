//! Write-once memo table shared between evaluation threads.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::RwLock;

use crate::arith::Rat;

/// Map from canonical keys to exact values.
///
/// Reads take a shared lock; an insert takes the exclusive lock only for the
/// store itself, so recursive evaluation never holds a lock across calls.
/// Two threads racing on the same key both compute it; the first store wins
/// and the second is checked against it.
#[derive(Debug)]
pub struct IntegralCache<K> {
    map: RwLock<HashMap<K, Rat>>,
}

impl<K> Default for IntegralCache<K> {
    fn default() -> Self {
        IntegralCache {
            map: RwLock::new(HashMap::new()),
        }
    }
}

impl<K: Eq + Hash + Clone> IntegralCache<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &K) -> Option<Rat> {
        self.map.read().unwrap().get(key).cloned()
    }

    /// Stores `value` unless the key is present, and returns the stored value.
    ///
    /// Panics if the key already holds a different value: that means two
    /// evaluation paths disagree, and no result from this cache can be trusted.
    pub fn insert(&self, key: K, value: Rat) -> Rat {
        let mut map = self.map.write().unwrap();
        match map.get(&key) {
            Some(existing) => {
                assert_eq!(
                    existing, &value,
                    "write-once cache received a conflicting value"
                );
                existing.clone()
            }
            None => {
                map.insert(key, value.clone());
                value
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// A copy of all entries, in no particular order.
    pub fn entries(&self) -> Vec<(K, Rat)> {
        self.map
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}
