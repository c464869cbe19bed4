//! One voter under the best rule: a knapsack with at most `lambda` items.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{Bundle, Instance, Rule, Solution};
use crate::Indexing;

/// Exact optimum for a single voter under the best rule.
///
/// `Indexing::Cost` fills `T[i][j][k]`, the largest utility of exactly `k`
/// of the first `i` items costing at most `j`. `Indexing::Profit` fills the
/// cheapest cost of exactly `k` of the first `i` items with utility exactly
/// `a` instead, which is independent of the budget.
pub fn solve_buk_single_voter(instance: &Instance, indexing: Indexing, caps: &Caps) -> Result<Solution> {
    if instance.rule() != Rule::Best {
        return Err(Error::input("the single-voter knapsack handles the best rule"));
    }
    if instance.num_voters() != 1 {
        return Err(Error::input(format!(
            "the single-voter knapsack needs exactly one voter, got {}",
            instance.num_voters()
        )));
    }
    let lambda = instance.lambda().min(instance.num_items());
    match indexing {
        Indexing::Cost => by_cost(instance, lambda, caps),
        Indexing::Profit => by_profit(instance, lambda, caps),
    }
}

fn by_cost(inst: &Instance, lambda: usize, caps: &Caps) -> Result<Solution> {
    let m = inst.num_items();
    let cap = inst.budget().min(inst.costs().iter().sum()) as usize;
    let (w, l) = (cap + 1, lambda + 1);
    let cells = ((m + 1) * w * l) as u64;
    Error::check_cap("dp_max_cells", caps.dp_max_cells, cells)?;
    let at = |i: usize, j: usize, k: usize| (i * w + j) * l + k;
    // None marks an unreachable cell.
    let mut t: Vec<Option<u64>> = vec![None; (m + 1) * w * l];
    for j in 0..w {
        t[at(0, j, 0)] = Some(0);
    }
    for i in 1..=m {
        let (c, u) = (inst.cost(i - 1) as usize, inst.util(0, i - 1));
        for j in 0..w {
            for k in 0..l {
                let skip = t[at(i - 1, j, k)];
                let take = if k > 0 && j >= c {
                    t[at(i - 1, j - c, k - 1)].map(|x| x + u)
                } else {
                    None
                };
                t[at(i, j, k)] = skip.max(take);
            }
        }
    }
    let (mut k, _) = (0..l)
        .filter_map(|k| t[at(m, cap, k)].map(|v| (k, v)))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("the empty bundle is always reachable");
    let mut items = Vec::with_capacity(k);
    let mut j = cap;
    for i in (1..=m).rev() {
        if t[at(i, j, k)] != t[at(i - 1, j, k)] {
            items.push(i - 1);
            j -= inst.cost(i - 1) as usize;
            k -= 1;
        }
    }
    Ok(Solution::with_witness(inst.bundle_dedup(items), cells))
}

fn by_profit(inst: &Instance, lambda: usize, caps: &Caps) -> Result<Solution> {
    let m = inst.num_items();
    let mut row = inst.utils(0).to_vec();
    row.sort_unstable_by(|a, b| b.cmp(a));
    let top: u64 = row[..lambda].iter().sum();
    let (w, l) = (top as usize + 1, lambda + 1);
    let cells = ((m + 1) as u64).saturating_mul(w as u64).saturating_mul(l as u64);
    Error::check_cap("dp_max_cells", caps.dp_max_cells, cells)?;
    let at = |i: usize, a: usize, k: usize| (i * w + a) * l + k;
    const INF: u64 = u64::MAX;
    let mut t = vec![INF; (m + 1) * w * l];
    t[at(0, 0, 0)] = 0;
    for i in 1..=m {
        let (c, u) = (inst.cost(i - 1), inst.util(0, i - 1) as usize);
        for a in 0..w {
            for k in 0..l {
                let skip = t[at(i - 1, a, k)];
                let take = if k > 0 && a >= u {
                    t[at(i - 1, a - u, k - 1)].saturating_add(c)
                } else {
                    INF
                };
                t[at(i, a, k)] = skip.min(take);
            }
        }
    }
    let found = (0..w)
        .rev()
        .find_map(|a| (0..l).find(|&k| t[at(m, a, k)] <= inst.budget()).map(|k| (a, k)));
    let Some((mut a, mut k)) = found else {
        return Ok(Solution::with_witness(Bundle::empty(), cells));
    };
    let mut items = Vec::with_capacity(k);
    for i in (1..=m).rev() {
        if t[at(i, a, k)] != t[at(i - 1, a, k)] {
            items.push(i - 1);
            a -= inst.util(0, i - 1) as usize;
            k -= 1;
        }
    }
    Ok(Solution::with_witness(inst.bundle_dedup(items), cells))
}
