use std::sync::atomic::{AtomicU64, Ordering};

/// Identifier of one dependent factor.
pub type FactorId = u64;

/// Issues factor identifiers from a monotone counter.
///
/// Identifiers are never reused. The counter is atomic, so one allocator can
/// be shared by reference between threads.
#[derive(Debug)]
pub struct IdAllocator {
    next: AtomicU64,
}

impl IdAllocator {
    pub fn new() -> Self {
        IdAllocator {
            next: AtomicU64::new(1),
        }
    }

    /// `p` identifiers never previously issued by this allocator.
    pub fn unique_id(&self, p: usize) -> Vec<FactorId> {
        let start = self.next.fetch_add(p as u64, Ordering::Relaxed);
        (start..start + p as u64).collect()
    }

    /// Moves the counter past `ids`, so identifiers that came from outside
    /// (e.g. a loaded file) are never issued again.
    pub fn observe(&self, ids: &[FactorId]) {
        if let Some(&max) = ids.iter().max() {
            self.next.fetch_max(max + 1, Ordering::Relaxed);
        }
    }

    /// The identifier the next call would start at.
    pub fn peek(&self) -> FactorId {
        self.next.load(Ordering::Relaxed)
    }
}

impl Default for IdAllocator {
    fn default() -> Self {
        Self::new()
    }
}
