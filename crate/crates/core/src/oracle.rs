//! Exhaustive search over all `2^m` bundles; the reference every other
//! solver is checked against.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{better, Bundle, Instance, Solution};

/// Returns an optimal feasible bundle, preferring the lexicographically
/// smallest item set among optima.
pub fn brute_force_solve(instance: &Instance, caps: &Caps) -> Result<Solution> {
    let m = instance.num_items();
    Error::check_cap("oracle_max_items", caps.oracle_max_items as u64, m as u64)?;
    let budget = instance.budget();
    let mut best = Bundle::empty();
    let mut items = Vec::with_capacity(m);
    for mask in 1u64..(1u64 << m) {
        let cost: u64 = (0..m).filter(|&p| mask >> p & 1 == 1).map(|p| instance.cost(p)).sum();
        if cost > budget {
            continue;
        }
        items.clear();
        items.extend((0..m).filter(|&p| mask >> p & 1 == 1));
        let value = instance.value_unchecked(&items);
        if value < best.value {
            continue;
        }
        let candidate = Bundle {
            items: items.clone(),
            cost,
            value,
        };
        if better(&candidate, &best) {
            best = candidate;
        }
    }
    Ok(Solution::with_witness(best, 1u64 << m))
}
