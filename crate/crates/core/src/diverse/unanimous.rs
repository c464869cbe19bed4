use crate::error::{Error, Result};
use crate::model::{Instance, Rule, Solution};

/// When all voters share a top item, that item alone is optimal.
///
/// Among several shared tops the lowest-index affordable one is returned.
pub fn solve_dk_unanimous(instance: &Instance) -> Result<Solution> {
    if instance.rule() != Rule::Diverse {
        return Err(Error::input("the unanimous shortcut handles the diverse rule"));
    }
    let maxima: Vec<u64> = (0..instance.num_voters())
        .map(|v| instance.utils(v).iter().copied().max().unwrap_or(0))
        .collect();
    let tops: Vec<usize> = (0..instance.num_items())
        .filter(|&p| maxima.iter().enumerate().all(|(v, &mx)| instance.util(v, p) == mx))
        .collect();
    if tops.is_empty() {
        return Err(Error::input("profile is not unanimous"));
    }
    let Some(&top) = tops.iter().find(|&&p| instance.is_affordable(p)) else {
        return Err(Error::input("no common top item fits the budget"));
    };
    let bundle = instance.bundle_dedup(vec![top]);
    debug_assert_eq!(bundle.value, instance.stats().u_bar);
    Ok(Solution::with_witness(bundle, tops.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::oracle::brute_force_solve;

    fn inst(costs: &[u64], utils: Vec<Vec<u64>>, budget: u64) -> Instance {
        let items = costs.iter().enumerate().map(|(i, &c)| (format!("p{}", i + 1), c)).collect();
        let voters = utils.into_iter().enumerate().map(|(i, u)| (format!("v{}", i + 1), u)).collect();
        Instance::new(items, voters, budget, Rule::Diverse, 1, None).unwrap()
    }

    #[test]
    fn common_top_alone() {
        let i = inst(&[1, 2, 1], vec![vec![1, 5, 2], vec![3, 4, 0]], 2);
        let s = solve_dk_unanimous(&i).unwrap();
        assert_eq!(s.bundle().items, vec![1]);
        assert_eq!(s.value, 9);
        assert_eq!(s.value, brute_force_solve(&i, &Caps::default()).unwrap().value);
    }

    #[test]
    fn tie_takes_lowest_index() {
        let i = inst(&[1, 1, 1], vec![vec![2, 5, 5], vec![5, 5, 5]], 1);
        assert_eq!(solve_dk_unanimous(&i).unwrap().bundle().items, vec![1]);
    }

    #[test]
    fn refusals() {
        let split = inst(&[1, 1], vec![vec![1, 0], vec![0, 1]], 2);
        assert!(solve_dk_unanimous(&split).is_err());
        let pricey = inst(&[3, 1], vec![vec![2, 1], vec![2, 1]], 2);
        assert!(solve_dk_unanimous(&pricey).is_err());
    }
}
