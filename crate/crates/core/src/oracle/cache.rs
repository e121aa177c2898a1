use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::IndependenceOracle;
use crate::nodeset::NodeSet;

/// Memoizing wrapper that also counts queries.
///
/// The lock is held across the inner call so each distinct query reaches the
/// wrapped oracle exactly once, even under concurrent use.
#[derive(Debug)]
pub struct CachedOracle<O> {
    inner: O,
    answers: Mutex<HashMap<(usize, usize, NodeSet), bool>>,
    requests: AtomicUsize,
    underlying: AtomicUsize,
}

impl<O: IndependenceOracle> CachedOracle<O> {
    pub fn new(inner: O) -> Self {
        CachedOracle {
            inner,
            answers: Mutex::new(HashMap::new()),
            requests: AtomicUsize::new(0),
            underlying: AtomicUsize::new(0),
        }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    /// Calls that reached the wrapped oracle.
    pub fn underlying_calls(&self) -> usize {
        self.underlying.load(Ordering::Relaxed)
    }

    /// Every call made through this wrapper, cached or not.
    pub fn requests(&self) -> usize {
        self.requests.load(Ordering::Relaxed)
    }
}

impl<O: IndependenceOracle> IndependenceOracle for CachedOracle<O> {
    fn variables(&self) -> &[String] {
        self.inner.variables()
    }

    fn independent(&self, x: usize, y: usize, z: NodeSet) -> bool {
        self.requests.fetch_add(1, Ordering::Relaxed);
        let key = (x.min(y), x.max(y), z);
        let mut answers = self.answers.lock().unwrap_or_else(|p| p.into_inner());
        *answers.entry(key).or_insert_with(|| {
            self.underlying.fetch_add(1, Ordering::Relaxed);
            self.inner.independent(x, y, z)
        })
    }
}
