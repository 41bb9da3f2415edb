//! Fixture sizing shared by the benchmark targets. Keeping the numbers
//! here means a size change reruns every affected benchmark together.

/// Token budget for the desk-scale corpus most benchmarks run on.
pub const BENCH_TOKENS: usize = 50_000;

/// Smaller budget for the end-to-end sweep benchmark, which retrains
/// once per scheme code.
pub const SWEEP_TOKENS: usize = 12_000;

/// Seed for every generated benchmark corpus.
pub const BENCH_SEED: u64 = 1;
