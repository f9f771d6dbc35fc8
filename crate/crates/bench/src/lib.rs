//! Benchmark fixtures shared by the criterion targets.

use bundling::families::power_pair;
use bundling::ProblemSpec;

/// Two-item power family instance used across benchmarks.
pub fn fixture(grid: usize) -> ProblemSpec {
    power_pair(0.3, 0.5, grid).expect("fixture is valid")
}
