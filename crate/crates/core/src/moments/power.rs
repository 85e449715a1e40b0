use std::sync::{Arc, Mutex};

/// Precomputed `k^1`, `k^2`, `k^3` for `k` in `0..=max_k`.
///
/// Building a table is not counted against any backend call; tables are
/// meant to be built once per size and reused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerTable {
    max_k: usize,
    // powers[e - 1][k] == k^e
    powers: [Vec<u64>; 3],
}

impl PowerTable {
    pub fn max_k(&self) -> usize {
        self.max_k
    }

    /// `k^exponent` for every `k` in the table. `exponent` must be 1, 2 or 3.
    pub fn powers(&self, exponent: u32) -> &[u64] {
        assert!(
            (1..=3).contains(&exponent),
            "power tables hold exponents 1..=3"
        );
        &self.powers[exponent as usize - 1]
    }

    pub fn covers(&self, k: usize) -> bool {
        k <= self.max_k
    }

    /// Returns a shared table covering at least `max_k`, growing the cached
    /// one when it is too small.
    pub fn cached(max_k: usize) -> Arc<PowerTable> {
        static CACHE: Mutex<Option<Arc<PowerTable>>> = Mutex::new(None);
        let mut slot = CACHE.lock().unwrap_or_else(|e| e.into_inner());
        match slot.as_ref() {
            Some(table) if table.covers(max_k) => Arc::clone(table),
            _ => {
                let table = Arc::new(build_power_table(max_k));
                *slot = Some(Arc::clone(&table));
                table
            }
        }
    }
}

pub fn build_power_table(max_k: usize) -> PowerTable {
    let k = (0..=max_k as u64).collect::<Vec<_>>();
    let squares: Vec<u64> = k.iter().map(|&k| k * k).collect();
    let cubes: Vec<u64> = k.iter().zip(&squares).map(|(&k, &k2)| k2 * k).collect();
    PowerTable {
        max_k,
        powers: [k, squares, cubes],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(build_power_table(3).powers(2), &[0, 1, 4, 9]);
        assert_eq!(build_power_table(0).powers(3), &[0]);
        assert_eq!(build_power_table(0).powers(1), &[0]);
    }

    #[test]
    fn largest_benchmark_table_is_exact() {
        // 4032 + 3024 - 2; the cube is checked by summing k^2 k times.
        let max_k = 7054usize;
        let table = build_power_table(max_k);
        let square: u128 = (0..max_k).map(|_| max_k as u128).sum();
        let cube: u128 = (0..max_k).map(|_| square).sum();
        assert_eq!(u128::from(table.powers(3)[max_k]), cube);
        assert_eq!(table.powers(3)[max_k], 350_999_393_464);
    }

    #[test]
    fn cache_grows_and_reuses() {
        let small = PowerTable::cached(10);
        assert!(small.covers(10));
        let big = PowerTable::cached(20);
        assert!(big.covers(20));
        let again = PowerTable::cached(5);
        assert!(again.covers(5));
    }
}
