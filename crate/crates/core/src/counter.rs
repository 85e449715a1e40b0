//! Multiplication instrumentation.
//!
//! Every moment backend reports each multiplication it performs to a
//! [`Tally`]. Timed runs pass [`Uncounted`], which compiles to nothing.

/// Sink for multiplication events.
pub trait Tally {
    /// Records `n` multiplications involving a coordinate weight or pixel value.
    fn weight(&mut self, n: u64);
    /// Records `n` multiplications by a literal constant during final assembly.
    fn assembly(&mut self, n: u64);
}

/// Counts multiplications for one backend call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MultCounter {
    pub count: u64,
    pub assembly_count: u64,
}

impl MultCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }

    pub fn total(&self) -> u64 {
        self.count + self.assembly_count
    }
}

impl Tally for MultCounter {
    #[inline(always)]
    fn weight(&mut self, n: u64) {
        self.count += n;
    }

    #[inline(always)]
    fn assembly(&mut self, n: u64) {
        self.assembly_count += n;
    }
}

/// Discards all events.
#[derive(Debug, Clone, Copy, Default)]
pub struct Uncounted;

impl Tally for Uncounted {
    #[inline(always)]
    fn weight(&mut self, _: u64) {}

    #[inline(always)]
    fn assembly(&mut self, _: u64) {}
}
