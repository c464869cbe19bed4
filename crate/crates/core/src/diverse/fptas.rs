//! Approximation scheme for single-crossing diverse instances.
//!
//! Utilities are rounded up to multiples of `s = eps * u_max / (2n)` and the
//! utility-indexed block table runs on the rounded values, whose total is
//! bounded by `n * ceil(2n / eps)` regardless of the input magnitudes.

use num_rational::Ratio;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{Instance, Rule, Solution};
use crate::profiles::verify_single_crossing;

use super::sc::Blocks;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptasSolution {
    pub solution: Solution,
    pub epsilon: Ratio<u64>,
    /// Rounding step `s`.
    pub scale: Ratio<u128>,
    /// Optimum of the rounded table; `scale * scaled_optimum` bounds the
    /// true optimum from above.
    pub scaled_optimum: u64,
}

impl FptasSolution {
    /// Smallest integer that is provably at least the true optimum.
    pub fn upper_bound(&self) -> u64 {
        (self.scale * u128::from(self.scaled_optimum)).ceil().to_integer() as u64
    }
}

/// `ceil(util / s)` for `s = eps * u_max / (2n)`, in exact integers.
pub fn scaled_utility(util: u64, scale: Ratio<u128>) -> u64 {
    (Ratio::from_integer(u128::from(util)) / scale).ceil().to_integer() as u64
}

/// Bundle worth at least `OPT / (1 + eps)` for `0 < eps <= 1`.
pub fn solve_dk_fptas(instance: &Instance, sigma: &[usize], epsilon: Ratio<u64>, caps: &Caps) -> Result<FptasSolution> {
    if instance.rule() != Rule::Diverse {
        return Err(Error::input("the approximation scheme handles the diverse rule"));
    }
    if *epsilon.numer() == 0 || epsilon > Ratio::from_integer(1) {
        return Err(Error::input(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    if !verify_single_crossing(instance, sigma)? {
        return Err(Error::input("voter order is not single-crossing for this profile"));
    }
    let n = instance.num_voters();
    let affordable: Vec<usize> = (0..instance.num_items()).filter(|&p| instance.is_affordable(p)).collect();
    let u_max = (0..n)
        .flat_map(|v| affordable.iter().map(move |&p| (v, p)))
        .map(|(v, p)| instance.util(v, p))
        .max()
        .unwrap_or(0);
    let eps = Ratio::new(u128::from(*epsilon.numer()), u128::from(*epsilon.denom()));

    if u_max == 0 {
        // Every affordable item is worthless; any bundle is optimal.
        let solution = Solution::with_witness(instance.bundle_dedup(Vec::new()), 0);
        return Ok(FptasSolution {
            solution,
            epsilon,
            scale: Ratio::from_integer(1),
            scaled_optimum: 0,
        });
    }
    let scale = eps * u128::from(u_max) / (2 * n as u128);
    let scaled: Vec<Vec<u64>> = (0..n)
        .map(|v| instance.utils(v).iter().map(|&u| scaled_utility(u, scale)).collect())
        .collect();
    let plan = Blocks::new(&scaled, sigma, instance).by_profit(caps)?;
    let bundle = instance.bundle_dedup(plan.items);
    Ok(FptasSolution {
        solution: Solution::with_witness(bundle, plan.states),
        epsilon,
        scale,
        scaled_optimum: plan.score,
    })
}
