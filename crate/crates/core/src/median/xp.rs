use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{Bundle, Instance, Rule, Solution};
use crate::wmsc::{solve_wmsc, WmscInstance};

/// Median-rule solver that guesses every voter's representative item and
/// checks each guess with a `lambda`-fold multicover.
///
/// Guesses are visited in lexicographic order of `(r_1, .., r_n)` and a
/// guess only replaces the incumbent when its guaranteed value
/// `sum util_v(r_v)` is strictly larger, so the earliest best guess wins.
pub fn solve_muk_xp(instance: &Instance, caps: &Caps) -> Result<Solution> {
    if instance.rule() == Rule::Best {
        return Err(Error::input("the representative solver handles the median and diverse rules"));
    }
    let n = instance.num_voters();
    let m = instance.num_items();
    let lambda = instance.lambda();
    Error::check_cap("xp_max_voters", caps.xp_max_voters as u64, n as u64)?;
    let guesses = (m as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    Error::check_cap("xp_max_guesses", caps.xp_max_guesses, guesses)?;
    if m == 0 || lambda > m {
        return Ok(Solution::with_witness(Bundle::empty(), 0));
    }

    let mut best_guess_value = 0u64;
    let mut best = Bundle::empty();
    let mut states = 0u64;
    let mut reps = vec![0usize; n];
    loop {
        let guaranteed: u64 = reps.iter().enumerate().map(|(v, &r)| instance.util(v, r)).sum();
        if guaranteed > best_guess_value {
            let sets = (0..m)
                .map(|p| {
                    (0..n)
                        .filter(|&v| instance.util(v, p) >= instance.util(v, reps[v]))
                        .fold(0u64, |acc, v| acc | 1 << v)
                })
                .collect();
            let wmsc = WmscInstance {
                universe: n,
                sets,
                set_costs: instance.costs().to_vec(),
                budget: instance.budget(),
                multiplicity: lambda,
            };
            if let Some(cover) = solve_wmsc(&wmsc, caps.wmsc_max_cells)? {
                states += cover.states;
                if cover.total_cost <= instance.budget() {
                    best_guess_value = guaranteed;
                    best = instance.bundle_dedup(cover.selection);
                    debug_assert!(best.value >= guaranteed);
                }
            }
        }
        if !advance(&mut reps, m) {
            break;
        }
    }
    Ok(Solution::with_witness(best, states))
}

/// Odometer increment, last coordinate fastest.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}
