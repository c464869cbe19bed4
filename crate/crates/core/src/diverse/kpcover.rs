//! Diverse rule as a covering knapsack over voter subsets.
//!
//! The family consists of every pair `(X, p)` of a nonempty voter set and an
//! affordable item, priced `c(p)` and worth `sum_{v in X} util_v(p)`. A
//! selection of pairs whose voter sets partition all voters describes a
//! bundle together with a favourite-item assignment. Pairs are generated on
//! the fly, item-major, voter sets ascending as bitmasks.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{Instance, Rule, Solution};
use crate::Indexing;

struct Family<'a> {
    instance: &'a Instance,
    n: usize,
    items: Vec<usize>,
}

impl<'a> Family<'a> {
    fn new(instance: &'a Instance) -> Self {
        let items = (0..instance.num_items()).filter(|&p| instance.is_affordable(p)).collect();
        Family {
            instance,
            n: instance.num_voters(),
            items,
        }
    }

    /// `(index, voter set, item, cost, profit)` in generation order.
    fn pairs(&self) -> impl Iterator<Item = (usize, usize, usize, u64, u64)> + '_ {
        let sets = (1usize << self.n) - 1;
        self.items.iter().enumerate().flat_map(move |(slot, &p)| {
            (1..=sets).map(move |x| {
                let profit = (0..self.n).filter(|&v| x >> v & 1 == 1).map(|v| self.instance.util(v, p)).sum();
                (slot * sets + x - 1, x, p, self.instance.cost(p), profit)
            })
        })
    }

    fn len(&self) -> usize {
        self.items.len() * ((1usize << self.n) - 1)
    }
}

/// Supersets of `x` within `n` bits, in decreasing order.
fn supersets_desc(x: usize, n: usize) -> impl Iterator<Item = usize> {
    let free = !x & ((1usize << n) - 1);
    let mut t = free;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let s = x | t;
        if t == 0 {
            done = true;
        } else {
            t = (t - 1) & free;
        }
        Some(s)
    })
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
}

/// Exact optimum under the diverse rule with a witness bundle.
///
/// With `Indexing::Profit` the table holds the cheapest cost of an exact
/// partition of `S` reaching profit exactly `j` (`j` up to `u_bar`); with
/// `Indexing::Cost` it holds the largest profit of an exact partition of `S`
/// paying at most `j`.
pub fn solve_dk_kpcover(instance: &Instance, indexing: Indexing, caps: &Caps) -> Result<Solution> {
    if instance.rule() != Rule::Diverse {
        return Err(Error::input("the covering knapsack handles the diverse rule"));
    }
    let n = instance.num_voters();
    if n >= 40 {
        return Err(Error::Size {
            cap: "dp_max_cells",
            limit: caps.dp_max_cells,
            actual: u64::MAX,
        });
    }
    let family = Family::new(instance);
    let dim = match indexing {
        Indexing::Profit => instance.stats().u_bar,
        Indexing::Cost => {
            let c_max = family.items.iter().map(|&p| instance.cost(p)).max().unwrap_or(0);
            instance.budget().min(c_max.saturating_mul(n as u64))
        }
    } as usize
        + 1;
    let subsets = 1usize << n;
    let work = (subsets as u64)
        .saturating_mul(family.len() as u64)
        .saturating_mul(dim as u64);
    Error::check_cap("dp_max_cells", caps.dp_max_cells, work)?;
    let full = subsets - 1;

    let (chosen, profit) = match indexing {
        Indexing::Profit => by_profit(instance, &family, subsets, dim),
        Indexing::Cost => by_cost(&family, subsets, dim),
    };
    let Some(chosen) = chosen else {
        // Only possible when nothing is affordable.
        return Ok(Solution::with_witness(instance.bundle_dedup(Vec::new()), work));
    };

    let mut covered = 0usize;
    for &(x, _) in &chosen {
        assert_eq!(covered & x, 0, "covering parts must be disjoint");
        covered |= x;
    }
    assert_eq!(covered, full, "covering parts must include every voter");
    let bundle = instance.bundle_dedup(chosen.iter().map(|&(_, p)| p).collect());
    assert!(bundle.cost <= instance.budget());
    debug_assert_eq!(bundle.value, profit);
    Ok(Solution::with_witness(bundle, work))
}

type Chosen = Option<Vec<(usize, usize)>>;

fn by_profit(instance: &Instance, family: &Family, subsets: usize, dim: usize) -> (Chosen, u64) {
    const INF: u64 = u64::MAX;
    let n = family.n;
    let mut t = vec![INF; subsets * dim];
    t[0] = 0;
    let mut took = Bits::new(family.len() * subsets * dim);
    for (f, x, _, cost, profit) in family.pairs() {
        let profit = profit as usize;
        for s in supersets_desc(x, n) {
            let from = (s ^ x) * dim;
            for j in profit..dim {
                let base = t[from + j - profit];
                if base == INF {
                    continue;
                }
                let cand = base + cost;
                if cand < t[s * dim + j] {
                    t[s * dim + j] = cand;
                    took.set((f * subsets + s) * dim + j);
                }
            }
        }
    }
    let full = subsets - 1;
    let Some(best) = (0..dim).rev().find(|&j| t[full * dim + j] <= instance.budget()) else {
        return (None, 0);
    };
    let chosen = backtrack(family, subsets, dim, &took, best, |_, _, profit| profit as usize);
    (Some(chosen), best as u64)
}

fn by_cost(family: &Family, subsets: usize, dim: usize) -> (Chosen, u64) {
    const NONE: i64 = -1;
    let n = family.n;
    let mut t = vec![NONE; subsets * dim];
    t[..dim].fill(0);
    let mut took = Bits::new(family.len() * subsets * dim);
    for (f, x, _, cost, profit) in family.pairs() {
        let cost = cost as usize;
        for s in supersets_desc(x, n) {
            let from = (s ^ x) * dim;
            for j in cost..dim {
                let base = t[from + j - cost];
                if base == NONE {
                    continue;
                }
                let cand = base + profit as i64;
                if cand > t[s * dim + j] {
                    t[s * dim + j] = cand;
                    took.set((f * subsets + s) * dim + j);
                }
            }
        }
    }
    let full = subsets - 1;
    let best = t[full * dim + dim - 1];
    if best == NONE {
        return (None, 0);
    }
    let chosen = backtrack(family, subsets, dim, &took, dim - 1, |_, cost, _| cost as usize);
    (Some(chosen), best as u64)
}

/// Walks the family backwards from `(full, j)` following the take bits;
/// `step` gives how far the second index moves for a taken pair.
fn backtrack(
    family: &Family,
    subsets: usize,
    dim: usize,
    took: &Bits,
    mut j: usize,
    step: impl Fn(usize, u64, u64) -> usize,
) -> Vec<(usize, usize)> {
    let mut s = subsets - 1;
    let mut chosen = Vec::new();
    let pairs: Vec<_> = family.pairs().collect();
    for &(f, x, p, cost, profit) in pairs.iter().rev() {
        if s == 0 {
            break;
        }
        if x & !s == 0 && took.get((f * subsets + s) * dim + j) {
            chosen.push((x, p));
            s ^= x;
            j -= step(x, cost, profit);
        }
    }
    debug_assert_eq!(s, 0);
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_solve;

    fn inst(costs: &[u64], utils: Vec<Vec<u64>>, budget: u64) -> Instance {
        let items = costs.iter().enumerate().map(|(i, &c)| (format!("p{}", i + 1), c)).collect();
        let voters = utils.into_iter().enumerate().map(|(i, u)| (format!("v{}", i + 1), u)).collect();
        Instance::new(items, voters, budget, Rule::Diverse, 1, None).unwrap()
    }

    const BOTH: [Indexing; 2] = [Indexing::Profit, Indexing::Cost];

    #[test]
    fn supersets_enumerated() {
        let got: Vec<usize> = supersets_desc(0b010, 3).collect();
        assert_eq!(got, vec![0b111, 0b110, 0b011, 0b010]);
    }

    #[test]
    fn one_voter_best_item() {
        let i = inst(&[4, 2, 1], vec![vec![9, 6, 3]], 3);
        for ix in BOTH {
            let s = solve_dk_kpcover(&i, ix, &Caps::default()).unwrap();
            assert_eq!(s.bundle().items, vec![1]);
            assert_eq!(s.value, 6);
        }
    }

    #[test]
    fn opposite_tops_both_bought() {
        let i = inst(&[2, 2, 1], vec![vec![5, 0, 1], vec![0, 5, 1]], 4);
        for ix in BOTH {
            let s = solve_dk_kpcover(&i, ix, &Caps::default()).unwrap();
            assert_eq!(s.bundle().items, vec![0, 1]);
            assert_eq!(s.value, brute_force_solve(&i, &Caps::default()).unwrap().value);
        }
    }

    #[test]
    fn matches_oracle() {
        let i = inst(
            &[3, 1, 2, 2, 4],
            vec![vec![4, 1, 0, 3, 6], vec![2, 2, 5, 0, 1], vec![0, 3, 1, 4, 2]],
            5,
        );
        let want = brute_force_solve(&i, &Caps::default()).unwrap().value;
        for ix in BOTH {
            let s = solve_dk_kpcover(&i, ix, &Caps::default()).unwrap();
            assert_eq!(s.value, want);
            s.bundle().verify(&i).unwrap();
        }
    }

    #[test]
    fn nothing_affordable() {
        let i = inst(&[5], vec![vec![1], vec![2]], 4);
        for ix in BOTH {
            assert_eq!(solve_dk_kpcover(&i, ix, &Caps::default()).unwrap().value, 0);
        }
    }
}
