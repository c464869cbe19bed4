//! Diverse rule on single-crossing profiles.
//!
//! Along a single-crossing voter order, the voters whose favourite in a
//! fixed bundle is a given item form a contiguous run. An optimal bundle is
//! therefore described by cutting the ordered voters into consecutive blocks
//! and serving each block with one item, which a table over (voter prefix,
//! budget or utility) explores exhaustively.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{Instance, Rule, Solution};
use crate::profiles::verify_single_crossing;
use crate::Indexing;

/// Optimal bundle for a single-crossing diverse instance with voter order
/// `sigma`.
pub fn solve_dk_sc_unary(instance: &Instance, sigma: &[usize], indexing: Indexing, caps: &Caps) -> Result<Solution> {
    if instance.rule() != Rule::Diverse {
        return Err(Error::input("the single-crossing table handles the diverse rule"));
    }
    if !verify_single_crossing(instance, sigma)? {
        return Err(Error::input("voter order is not single-crossing for this profile"));
    }
    let utils: Vec<&[u64]> = (0..instance.num_voters()).map(|v| instance.utils(v)).collect();
    let blocks = Blocks::new(&utils, sigma, instance);
    let plan = match indexing {
        Indexing::Cost => blocks.by_cost(caps)?,
        Indexing::Profit => blocks.by_profit(caps)?,
    };
    let bundle = instance.bundle_dedup(plan.items);
    debug_assert_eq!(bundle.value, plan.score);
    Ok(Solution::with_witness(bundle, plan.states))
}

pub(crate) struct Plan {
    /// Serving items along the order, possibly repeated.
    pub items: Vec<usize>,
    /// Table optimum in the utilities the tables were built from.
    pub score: u64,
    pub states: u64,
}

/// Block partition tables for an arbitrary utility matrix over the
/// instance's items, costs and budget. Items above the budget never serve a
/// block.
pub(crate) struct Blocks<'a> {
    instance: &'a Instance,
    items: Vec<usize>,
    n: usize,
    /// `prefix[p][i]` = utility of item `p` summed over the first `i`
    /// voters of the order.
    prefix: Vec<Vec<u64>>,
}

impl<'a> Blocks<'a> {
    pub(crate) fn new(utils: &[impl AsRef<[u64]>], sigma: &[usize], instance: &'a Instance) -> Self {
        let n = sigma.len();
        let items: Vec<usize> = (0..instance.num_items()).filter(|&p| instance.is_affordable(p)).collect();
        let prefix = (0..instance.num_items())
            .map(|p| {
                let mut row = vec![0u64; n + 1];
                for (i, &v) in sigma.iter().enumerate() {
                    row[i + 1] = row[i] + utils[v].as_ref()[p];
                }
                row
            })
            .collect();
        Blocks {
            instance,
            items,
            n,
            prefix,
        }
    }

    fn block(&self, p: usize, from: usize, to: usize) -> u64 {
        self.prefix[p][to] - self.prefix[p][from]
    }

    /// `T[j][beta]`: best utility of the first `j` voters paying at most
    /// `beta`.
    pub(crate) fn by_cost(&self, caps: &Caps) -> Result<Plan> {
        let n = self.n;
        let c_max = self.items.iter().map(|&p| self.instance.cost(p)).max().unwrap_or(0);
        let cap = self.instance.budget().min(c_max.saturating_mul(n as u64)) as usize;
        let width = cap + 1;
        let cells = ((n + 1) as u64).saturating_mul(width as u64);
        Error::check_cap("dp_max_cells", caps.dp_max_cells, cells.saturating_mul(n as u64 * self.items.len() as u64))?;
        const NONE: i64 = -1;
        let mut t = vec![NONE; (n + 1) * width];
        t[..width].fill(0);
        let mut parent = vec![(0usize, 0usize); (n + 1) * width];
        for j in 1..=n {
            for beta in 0..width {
                for i in 0..j {
                    for &p in &self.items {
                        let c = self.instance.cost(p) as usize;
                        if c > beta {
                            continue;
                        }
                        let base = t[i * width + beta - c];
                        if base == NONE {
                            continue;
                        }
                        let cand = base + self.block(p, i, j) as i64;
                        if cand > t[j * width + beta] {
                            t[j * width + beta] = cand;
                            parent[j * width + beta] = (i, p);
                        }
                    }
                }
            }
        }
        let score = t[n * width + cap];
        if score == NONE {
            return Ok(Plan { items: Vec::new(), score: 0, states: cells });
        }
        let (mut j, mut beta) = (n, cap);
        let mut items = Vec::new();
        while j > 0 {
            let (i, p) = parent[j * width + beta];
            items.push(p);
            beta -= self.instance.cost(p) as usize;
            j = i;
        }
        Ok(Plan { items, score: score as u64, states: cells })
    }

    /// `C[j][alpha]`: cheapest way for the first `j` voters to collect
    /// exactly `alpha`.
    pub(crate) fn by_profit(&self, caps: &Caps) -> Result<Plan> {
        let n = self.n;
        let top: u64 = (0..n)
            .map(|i| self.items.iter().map(|&p| self.block(p, i, i + 1)).max().unwrap_or(0))
            .sum();
        let width = top as usize + 1;
        let cells = ((n + 1) as u64).saturating_mul(width as u64);
        Error::check_cap("dp_max_cells", caps.dp_max_cells, cells.saturating_mul(n as u64 * self.items.len() as u64))?;
        const INF: u64 = u64::MAX;
        let mut t = vec![INF; (n + 1) * width];
        t[0] = 0;
        let mut parent = vec![(0usize, 0usize); (n + 1) * width];
        for j in 1..=n {
            for i in 0..j {
                for &p in &self.items {
                    let gain = self.block(p, i, j) as usize;
                    let c = self.instance.cost(p);
                    for alpha in gain..width {
                        let base = t[i * width + alpha - gain];
                        if base == INF {
                            continue;
                        }
                        let cand = base + c;
                        if cand < t[j * width + alpha] {
                            t[j * width + alpha] = cand;
                            parent[j * width + alpha] = (i, p);
                        }
                    }
                }
            }
        }
        let budget = self.instance.budget();
        let Some(best) = (0..width).rev().find(|&a| t[n * width + a] <= budget) else {
            return Ok(Plan { items: Vec::new(), score: 0, states: cells });
        };
        let (mut j, mut alpha) = (n, best);
        let mut items = Vec::new();
        while j > 0 {
            let (i, p) = parent[j * width + alpha];
            items.push(p);
            alpha -= self.block(p, i, j) as usize;
            j = i;
        }
        Ok(Plan { items, score: best as u64, states: cells })
    }
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

    const BOTH: [Indexing; 2] = [Indexing::Cost, Indexing::Profit];

    #[test]
    fn one_voter() {
        let i = inst(&[1, 4, 2], vec![vec![3, 8, 5]], 3);
        for ix in BOTH {
            let s = solve_dk_sc_unary(&i, &[0], ix, &Caps::default()).unwrap();
            assert_eq!(s.bundle().items, vec![2]);
        }
    }

    #[test]
    fn crossing_profile_matches_oracle() {
        // Preferences drift from p1 towards p4 along the voter order.
        let utils = vec![
            vec![9, 6, 3, 0],
            vec![7, 8, 4, 1],
            vec![2, 8, 6, 3],
            vec![1, 4, 7, 6],
            vec![0, 2, 5, 9],
        ];
        let i = inst(&[2, 3, 2, 2], utils, 5);
        let sigma = [0, 1, 2, 3, 4];
        let want = brute_force_solve(&i, &Caps::default()).unwrap().value;
        for ix in BOTH {
            let s = solve_dk_sc_unary(&i, &sigma, ix, &Caps::default()).unwrap();
            assert_eq!(s.value, want);
            s.bundle().verify(&i).unwrap();
        }
    }

    #[test]
    fn rejects_non_crossing_order() {
        let i = inst(&[1, 1, 1], vec![vec![3, 2, 1], vec![1, 3, 2], vec![2, 1, 3]], 2);
        assert!(solve_dk_sc_unary(&i, &[0, 1, 2], Indexing::Cost, &Caps::default()).is_err());
    }
}
