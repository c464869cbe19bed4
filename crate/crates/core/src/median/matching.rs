//! Guess-and-assign solver parameterized by the number of voters and the
//! budget.
//!
//! A solution bundle of size `k` is viewed as `k` positions. For every voter
//! we guess which positions carry its top-`lambda` items (best rule) or its
//! `lambda`-th item (median rule), turn the guess into position/item weights
//! and look for the heaviest affordable assignment of positions to distinct
//! items. Positions are interchangeable, so guesses that differ only by a
//! relabelling of positions are examined once.

use std::collections::HashSet;

use itertools::Itertools;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{better, Bundle, Instance, Rule, Solution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    /// `positions[l]` is the item placed at position `l`.
    pub positions: Vec<usize>,
    pub weight: u64,
    pub cost: u64,
}

const NONE: i64 = -1;

/// Maximum-weight injective map from the `k = weights.len()` positions to
/// items whose total cost stays within `budget`.
///
/// Items are scanned once each; the table is indexed by the set of filled
/// positions and the exact cost spent, so the work is `O(m * 2^k * b)`.
pub fn assign_positions(weights: &[Vec<u64>], costs: &[u64], budget: u64) -> Option<Assignment> {
    let k = weights.len();
    let m = costs.len();
    if k > m {
        return None;
    }
    let cap = budget.min(costs.iter().sum()) as usize;
    let width = cap + 1;
    let masks = 1usize << k;
    let mut best = vec![NONE; masks * width];
    best[0] = 0;
    // choice[p][mask * width + c] = position + 1 when item p improved that cell.
    let mut choice = vec![0u8; m * masks * width];

    for p in 0..m {
        let c = costs[p] as usize;
        if c > cap {
            continue;
        }
        let layer = &mut choice[p * masks * width..(p + 1) * masks * width];
        for mask in (0..masks).rev() {
            for spent in (0..=cap - c).rev() {
                let base = best[mask * width + spent];
                if base == NONE {
                    continue;
                }
                for (l, row) in weights.iter().enumerate() {
                    if mask >> l & 1 == 1 {
                        continue;
                    }
                    let to = (mask | 1 << l) * width + spent + c;
                    let cand = base + row[p] as i64;
                    if cand > best[to] {
                        best[to] = cand;
                        layer[to] = l as u8 + 1;
                    }
                }
            }
        }
    }

    let full = masks - 1;
    let (spent, weight) = (0..width)
        .map(|c| (c, best[full * width + c]))
        .filter(|&(_, w)| w != NONE)
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))?;

    let mut positions = vec![usize::MAX; k];
    let (mut mask, mut c) = (full, spent);
    for p in (0..m).rev() {
        let l = choice[p * masks * width + mask * width + c];
        if l > 0 {
            let l = (l - 1) as usize;
            positions[l] = p;
            mask ^= 1 << l;
            c -= costs[p] as usize;
        }
    }
    debug_assert_eq!(mask, 0);
    Some(Assignment {
        positions,
        weight: weight as u64,
        cost: spent as u64,
    })
}

/// Largest `k` such that the `k` cheapest items fit the budget together.
fn max_cardinality(instance: &Instance) -> usize {
    let mut costs = instance.costs().to_vec();
    costs.sort_unstable();
    let mut spent = 0u64;
    costs
        .iter()
        .take_while(|&&c| {
            spent += c;
            spent <= instance.budget()
        })
        .count()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Set partitions of `n` voters into at most `k` labelled-by-first-use
/// blocks, as restricted growth strings.
fn growth_strings(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, top: usize, n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=(top + 1).min(k - 1) {
            prefix.push(b);
            go(prefix, top.max(b), n, k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        let mut prefix = vec![0];
        go(&mut prefix, 0, n, k, &mut out);
    }
    out
}

/// Best bundle found by guessing per-voter rank structure and assigning
/// positions to items. Handles the best and median rules (and diverse as
/// median with `lambda = 1`).
pub fn solve_matching_fpt(instance: &Instance, caps: &Caps) -> Result<Solution> {
    let n = instance.num_voters();
    Error::check_cap("matching_max_voters", caps.matching_max_voters as u64, n as u64)?;
    let k_max = max_cardinality(instance);
    Error::check_cap("matching_max_k", caps.matching_max_k as u64, k_max as u64)?;
    match instance.rule() {
        Rule::Best => solve_best(instance, caps, k_max),
        Rule::Median | Rule::Diverse => solve_median(instance, caps, k_max),
    }
}

fn solve_best(instance: &Instance, caps: &Caps, k_max: usize) -> Result<Solution> {
    let n = instance.num_voters();
    let m = instance.num_items();
    let lambda = instance.lambda();
    let tuples: u64 = (1..=k_max)
        .map(|k| {
            if k <= lambda {
                1
            } else {
                binomial(k as u64, lambda as u64).saturating_pow(n as u32 - 1)
            }
        })
        .fold(0u64, u64::saturating_add);
    Error::check_cap("matching_max_guesses", caps.matching_max_guesses, tuples)?;
    let dp_cells = (m as u64) << k_max;
    Error::check_cap(
        "dp_max_cells",
        caps.dp_max_cells,
        dp_cells.saturating_mul(instance.budget().min(instance.costs().iter().sum()) + 1),
    )?;

    let mut best = Bundle::empty();
    let mut states = 0u64;
    for k in 1..=k_max {
        let subsets: Vec<u64> = if k <= lambda {
            vec![(1u64 << k) - 1]
        } else {
            (0..k)
                .combinations(lambda)
                .map(|c| c.iter().fold(0u64, |acc, &l| acc | 1 << l))
                .collect()
        };
        let first = subsets[0];
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        // Voter 0 is pinned to the first subset: every guess is a position
        // relabelling away from one that does so.
        let others = std::iter::repeat_n(subsets.iter().copied(), n - 1)
            .multi_cartesian_product();
        let mut visit = |tail: &[u64]| {
            // columns[l] = voters whose top-lambda guess includes position l
            let mut columns = vec![0u64; k];
            for (i, &s) in std::iter::once(&first).chain(tail).enumerate() {
                for (l, col) in columns.iter_mut().enumerate() {
                    if s >> l & 1 == 1 {
                        *col |= 1 << i;
                    }
                }
            }
            columns.sort_unstable();
            if !seen.insert(columns.clone()) {
                return;
            }
            let weights: Vec<Vec<u64>> = columns
                .iter()
                .map(|&col| {
                    (0..m)
                        .map(|p| (0..n).filter(|&i| col >> i & 1 == 1).map(|i| instance.util(i, p)).sum())
                        .collect()
                })
                .collect();
            states += 1;
            if let Some(a) = assign_positions(&weights, instance.costs(), instance.budget()) {
                let candidate = instance.bundle_dedup(a.positions);
                debug_assert!(candidate.value >= a.weight);
                if better(&candidate, &best) {
                    best = candidate;
                }
            }
        };
        if n == 1 {
            visit(&[]);
        } else {
            for tail in others {
                visit(&tail);
            }
        }
    }
    Ok(Solution::with_witness(best, states))
}

/// Median rule. A guess fixes, for every voter, the position holding its
/// `lambda`-th favourite item. An assignment is accepted for the guess only
/// if each voter ranks at least `lambda - 1` other assigned items at least as
/// high as the item at its guessed position, so the guess weight never
/// exceeds the bundle's satisfaction.
fn solve_median(instance: &Instance, caps: &Caps, k_max: usize) -> Result<Solution> {
    let n = instance.num_voters();
    let lambda = instance.lambda();
    let mut best = Bundle::empty();
    if lambda > k_max {
        return Ok(Solution::with_witness(best, 0));
    }
    let per_k: Vec<(usize, Vec<Vec<usize>>)> =
        (lambda..=k_max).map(|k| (k, growth_strings(n, k))).collect();
    let guesses = per_k.iter().map(|(_, g)| g.len() as u64).sum();
    Error::check_cap("matching_max_guesses", caps.matching_max_guesses, guesses)?;

    let mut search = MedianSearch {
        instance,
        lambda,
        best_weight: 0,
        best: &mut best,
        examined: 0,
        limit: caps.dp_max_cells,
    };
    for (k, strings) in &per_k {
        for blocks in strings {
            let groups = blocks.iter().copied().max().map_or(0, |b| b + 1);
            let mut reps = Vec::with_capacity(groups);
            search.place_reps(*k, blocks, groups, &mut reps, 0)?;
        }
    }
    let examined = search.examined;
    Ok(Solution::with_witness(best, examined))
}

struct MedianSearch<'a> {
    instance: &'a Instance,
    lambda: usize,
    best_weight: u64,
    best: &'a mut Bundle,
    examined: u64,
    limit: u64,
}

impl MedianSearch<'_> {
    /// Chooses distinct items for the guessed representative positions, then
    /// fills the remaining positions.
    fn place_reps(
        &mut self,
        k: usize,
        blocks: &[usize],
        groups: usize,
        reps: &mut Vec<usize>,
        spent: u64,
    ) -> Result<()> {
        let inst = self.instance;
        if reps.len() == groups {
            return self.fill(k, blocks, reps, spent);
        }
        for p in 0..inst.num_items() {
            let c = spent + inst.cost(p);
            if reps.contains(&p) || c > inst.budget() {
                continue;
            }
            reps.push(p);
            self.place_reps(k, blocks, groups, reps, c)?;
            reps.pop();
        }
        Ok(())
    }

    fn fill(&mut self, k: usize, blocks: &[usize], reps: &[usize], spent: u64) -> Result<()> {
        let inst = self.instance;
        let weight: u64 = blocks.iter().enumerate().map(|(v, &b)| inst.util(v, reps[b])).sum();
        if weight <= self.best_weight {
            return Ok(());
        }
        let rest: Vec<usize> = (0..inst.num_items()).filter(|p| !reps.contains(p)).collect();
        for fillers in rest.into_iter().combinations(k - reps.len()) {
            self.examined += 1;
            Error::check_cap("dp_max_cells", self.limit, self.examined)?;
            if spent + inst.bundle_cost(&fillers) > inst.budget() {
                continue;
            }
            let items: Vec<usize> = reps.iter().chain(&fillers).copied().collect();
            let consistent = blocks.iter().enumerate().all(|(v, &b)| {
                let rep = reps[b];
                let floor = inst.util(v, rep);
                items.iter().filter(|&&q| q != rep && inst.util(v, q) >= floor).count() + 1 >= self.lambda
            });
            if consistent {
                let candidate = inst.bundle_dedup(items);
                debug_assert!(candidate.value >= weight);
                self.best_weight = weight;
                if better(&candidate, self.best) {
                    *self.best = candidate;
                }
                return Ok(());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_solve;

    /// Every injective map of positions to items, the exhaustive reference.
    fn enumerate_assignments(weights: &[Vec<u64>], costs: &[u64], budget: u64) -> Option<u64> {
        (0..costs.len())
            .permutations(weights.len())
            .filter(|items| items.iter().map(|&p| costs[p]).sum::<u64>() <= budget)
            .map(|items| items.iter().enumerate().map(|(l, &p)| weights[l][p]).sum())
            .max()
    }

    #[test]
    fn assign_single_position() {
        let a = assign_positions(&[vec![4, 9, 7]], &[1, 5, 2], 3).unwrap();
        assert_eq!(a.positions, vec![2]);
        assert_eq!(a.weight, 7);
    }

    #[test]
    fn assign_only_affordable_pair() {
        let a = assign_positions(&[vec![1, 1], vec![1, 1]], &[2, 3], 5).unwrap();
        let mut items = a.positions.clone();
        items.sort();
        assert_eq!(items, vec![0, 1]);
        assert!(assign_positions(&[vec![1, 1], vec![1, 1]], &[2, 3], 4).is_none());
    }

    #[test]
    fn assign_matches_enumeration() {
        let weights = vec![vec![3, 8, 1, 6, 2], vec![7, 2, 5, 4, 9], vec![0, 6, 6, 3, 1]];
        let costs = [2, 3, 1, 4, 2];
        for budget in 0..12 {
            let dp = assign_positions(&weights, &costs, budget).map(|a| a.weight);
            assert_eq!(dp, enumerate_assignments(&weights, &costs, budget), "budget {budget}");
        }
    }

    fn inst(costs: &[u64], utils: Vec<Vec<u64>>, budget: u64, rule: Rule, lambda: usize) -> Instance {
        let items = costs.iter().enumerate().map(|(i, &c)| (format!("p{}", i + 1), c)).collect();
        let voters = utils.into_iter().enumerate().map(|(i, u)| (format!("v{}", i + 1), u)).collect();
        Instance::new(items, voters, budget, rule, lambda, None).unwrap()
    }

    #[test]
    fn single_voter_single_item() {
        let i = inst(&[3, 1, 2], vec![vec![5, 2, 4]], 2, Rule::Median, 1);
        let s = solve_matching_fpt(&i, &Caps::default()).unwrap();
        assert_eq!(s.value, 4);
    }

    #[test]
    fn inconsistent_guess_does_not_inflate_median() {
        // One voter, lambda 2, budget 2. Naively weighting the guessed
        // second position would credit 10 to {p1, p2}; the true optimum is 5.
        let i = inst(&[1, 1, 1, 1], vec![vec![10, 1, 5, 5]], 2, Rule::Median, 2);
        let s = solve_matching_fpt(&i, &Caps::default()).unwrap();
        assert_eq!(s.value, 5);
        assert_eq!(s.value, brute_force_solve(&i, &Caps::default()).unwrap().value);
    }

    #[test]
    fn agrees_with_oracle_both_rules() {
        let utils = vec![vec![5, 1, 3, 6, 2], vec![0, 4, 4, 1, 6]];
        for rule in [Rule::Median, Rule::Best] {
            let i = inst(&[1, 2, 1, 3, 2], utils.clone(), 4, rule, 2);
            let s = solve_matching_fpt(&i, &Caps::default()).unwrap();
            let o = brute_force_solve(&i, &Caps::default()).unwrap();
            assert_eq!(s.value, o.value, "{rule}");
            s.bundle().verify(&i).unwrap();
        }
    }

    #[test]
    fn zero_budget_gives_empty() {
        let i = inst(&[1, 1], vec![vec![3, 4]], 0, Rule::Best, 1);
        let s = solve_matching_fpt(&i, &Caps::default()).unwrap();
        assert_eq!(s.bundle(), &Bundle::empty());
    }

    #[test]
    fn growth_strings_count_partitions() {
        // Bell numbers when k >= n.
        assert_eq!(growth_strings(4, 4).len(), 15);
        assert_eq!(growth_strings(4, 2).len(), 8);
        assert_eq!(growth_strings(3, 1), vec![vec![0, 0, 0]]);
    }
}
