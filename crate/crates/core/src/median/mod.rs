//! Exact solvers for the median and best rules.

mod matching;
mod single;
mod xp;

pub use matching::{assign_positions, solve_matching_fpt, Assignment};
pub use single::solve_buk_single_voter;
pub use xp::solve_muk_xp;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{Instance, Rule, Solution};
use crate::profiles::{is_strongly_unanimous, merge_identical_voters};
use crate::Indexing;

/// Strongly unanimous profiles collapse to a single voter, which both
/// rules solve in polynomial time.
pub fn solve_su(instance: &Instance, indexing: Indexing, caps: &Caps) -> Result<Solution> {
    if !is_strongly_unanimous(instance) {
        return Err(Error::input("profile is not strongly unanimous"));
    }
    let (merged, _) = merge_identical_voters(instance);
    debug_assert_eq!(merged.num_voters(), 1);
    let solved = match merged.rule() {
        Rule::Best => solve_buk_single_voter(&merged, indexing, caps)?,
        Rule::Median | Rule::Diverse => solve_muk_xp(&merged, caps)?,
    };
    let bundle = instance.bundle_dedup(solved.bundle().items.clone());
    debug_assert_eq!(bundle.value, solved.value);
    Ok(Solution::with_witness(bundle, solved.states))
}

/// Turns a diverse instance into an equivalent median instance with the
/// given `lambda`.
///
/// `lambda - 1` unit-cost items are appended, each valued above every
/// original utility by every voter, and the budget grows by `lambda - 1`.
/// Every optimal median bundle then contains all of them, and its
/// `lambda`-th item per voter is that voter's favourite original item.
pub fn lift_diverse_to_median(instance: &Instance, target_lambda: usize) -> Result<Instance> {
    if instance.rule() != Rule::Diverse {
        return Err(Error::input("lifting starts from a diverse instance"));
    }
    if target_lambda < 1 {
        return Err(Error::input("target lambda must be at least 1"));
    }
    if target_lambda == 1 {
        return Ok(instance.clone());
    }
    let extra = target_lambda - 1;
    let u_max = instance.stats().u_max;
    let mut items: Vec<(String, u64)> = instance
        .item_ids()
        .iter()
        .cloned()
        .zip(instance.costs().iter().copied())
        .collect();
    for j in 1..=extra {
        let mut id = format!("lift#{j}");
        while instance.item_index(&id).is_some() {
            id.push('#');
        }
        items.push((id, 1));
    }
    let voters = (0..instance.num_voters())
        .map(|v| {
            let mut row = instance.utils(v).to_vec();
            row.extend((1..=extra as u64).map(|j| u_max + j));
            (instance.voter_ids()[v].clone(), row)
        })
        .collect();
    Instance::new(
        items,
        voters,
        instance.budget() + extra as u64,
        Rule::Median,
        target_lambda,
        instance.target(),
    )
}
