//! Instances, bundles and the three satisfaction rules.
//!
//! Items and voters are addressed by their position (`0..m`, `0..n`); the
//! string ids are kept only for reporting and file round-trips.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Each voter is satisfied by its favourite item (`lambda = 1`).
    Diverse,
    /// Each voter is satisfied by its `lambda`-th favourite item.
    Median,
    /// Each voter is satisfied by the sum of its `lambda` favourite items.
    Best,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Diverse => "diverse",
            Rule::Median => "median",
            Rule::Best => "best",
        })
    }
}

/// An immutable multiagent knapsack instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    item_ids: Vec<String>,
    costs: Vec<u64>,
    voter_ids: Vec<String>,
    /// `utils[v][p]`
    utils: Vec<Vec<u64>>,
    budget: u64,
    lambda: usize,
    rule: Rule,
    target: Option<u64>,
}

impl Instance {
    /// Builds and validates an instance.
    ///
    /// `items` are `(id, cost)` pairs, `voters` are `(id, utilities)` pairs
    /// with one utility per item.
    pub fn new(
        items: Vec<(String, u64)>,
        voters: Vec<(String, Vec<u64>)>,
        budget: u64,
        rule: Rule,
        lambda: usize,
        target: Option<u64>,
    ) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::input("instance needs at least one item"));
        }
        if voters.is_empty() {
            return Err(Error::input("instance needs at least one voter"));
        }
        let (item_ids, costs): (Vec<_>, Vec<_>) = items.into_iter().unzip();
        let (voter_ids, utils): (Vec<_>, Vec<_>) = voters.into_iter().unzip();
        let instance = Instance {
            item_ids,
            costs,
            voter_ids,
            utils,
            budget,
            lambda,
            rule,
            target,
        };
        instance.validate()?;
        Ok(instance)
    }

    fn validate(&self) -> Result<()> {
        if self.lambda == 0 {
            return Err(Error::input("lambda must be at least 1"));
        }
        if self.rule == Rule::Diverse && self.lambda != 1 {
            return Err(Error::input(format!(
                "the diverse rule requires lambda = 1, got {}",
                self.lambda
            )));
        }
        for (id, &c) in self.item_ids.iter().zip(&self.costs) {
            if c == 0 {
                return Err(Error::input(format!("item `{id}` has cost 0; costs must be >= 1")));
            }
        }
        let m = self.item_ids.len();
        for (id, row) in self.voter_ids.iter().zip(&self.utils) {
            if row.len() != m {
                return Err(Error::input(format!(
                    "voter `{id}` has {} utilities, expected {m}",
                    row.len()
                )));
            }
        }
        check_unique("item", &self.item_ids)?;
        check_unique("voter", &self.voter_ids)?;
        Ok(())
    }

    pub fn num_items(&self) -> usize {
        self.costs.len()
    }

    pub fn num_voters(&self) -> usize {
        self.utils.len()
    }

    pub fn item_ids(&self) -> &[String] {
        &self.item_ids
    }

    pub fn voter_ids(&self) -> &[String] {
        &self.voter_ids
    }

    pub fn costs(&self) -> &[u64] {
        &self.costs
    }

    pub fn cost(&self, item: usize) -> u64 {
        self.costs[item]
    }

    pub fn util(&self, voter: usize, item: usize) -> u64 {
        self.utils[voter][item]
    }

    pub fn utils(&self, voter: usize) -> &[u64] {
        &self.utils[voter]
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// The rank parameter; always 1 under the diverse rule.
    pub fn lambda(&self) -> usize {
        match self.rule {
            Rule::Diverse => 1,
            _ => self.lambda,
        }
    }

    pub fn target(&self) -> Option<u64> {
        self.target
    }

    pub fn item_index(&self, id: &str) -> Option<usize> {
        self.item_ids.iter().position(|x| x == id)
    }

    pub fn voter_index(&self, id: &str) -> Option<usize> {
        self.voter_ids.iter().position(|x| x == id)
    }

    pub fn with_budget(&self, budget: u64) -> Instance {
        Instance { budget, ..self.clone() }
    }

    pub fn with_target(&self, target: Option<u64>) -> Instance {
        Instance { target, ..self.clone() }
    }

    /// Same profile under another rule. Fails when `rule` is diverse and
    /// `lambda != 1`.
    pub fn with_rule(&self, rule: Rule, lambda: usize) -> Result<Instance> {
        let out = Instance {
            rule,
            lambda,
            ..self.clone()
        };
        out.validate()?;
        Ok(out)
    }

    /// Replaces the utility profile, keeping items, budget and rule.
    pub(crate) fn with_utils(&self, voter_ids: Vec<String>, utils: Vec<Vec<u64>>) -> Instance {
        Instance {
            voter_ids,
            utils,
            ..self.clone()
        }
    }

    pub fn is_affordable(&self, item: usize) -> bool {
        self.costs[item] <= self.budget
    }

    pub fn stats(&self) -> InstanceStats {
        let u_max = self.utils.iter().flatten().copied().max().unwrap_or(0);
        let u_bar = self
            .utils
            .iter()
            .map(|row| row.iter().copied().max().unwrap_or(0))
            .sum();
        let u_hat = self.utils.iter().flatten().sum();
        InstanceStats { u_max, u_bar, u_hat }
    }

    fn check_voter(&self, voter: usize) -> Result<()> {
        if voter >= self.num_voters() {
            return Err(Error::input(format!(
                "voter index {voter} out of range (n = {})",
                self.num_voters()
            )));
        }
        Ok(())
    }

    fn check_items(&self, items: &[usize]) -> Result<()> {
        let mut seen = HashSet::with_capacity(items.len());
        for &p in items {
            if p >= self.num_items() {
                return Err(Error::input(format!(
                    "item index {p} out of range (m = {})",
                    self.num_items()
                )));
            }
            if !seen.insert(p) {
                return Err(Error::input(format!("item `{}` appears twice", self.item_ids[p])));
            }
        }
        Ok(())
    }

    /// The `lambda`-th largest utility `voter` has for an item of `bundle`,
    /// or 0 when the bundle holds fewer than `lambda` items.
    pub fn sat_median(&self, voter: usize, bundle: &[usize]) -> Result<u64> {
        self.check_voter(voter)?;
        self.check_items(bundle)?;
        Ok(self.median_unchecked(voter, bundle, self.lambda()))
    }

    /// The sum of the `lambda` largest utilities `voter` has for items of
    /// `bundle`. Bundles smaller than `lambda` contribute all their items.
    pub fn sat_best(&self, voter: usize, bundle: &[usize]) -> Result<u64> {
        self.check_voter(voter)?;
        self.check_items(bundle)?;
        Ok(self.best_unchecked(voter, bundle, self.lambda()))
    }

    /// Satisfaction of one voter under the instance's rule.
    pub fn satisfaction(&self, voter: usize, bundle: &[usize]) -> Result<u64> {
        self.check_voter(voter)?;
        self.check_items(bundle)?;
        Ok(self.voter_value(voter, bundle))
    }

    pub fn total_satisfaction(&self, bundle: &[usize]) -> Result<u64> {
        self.check_items(bundle)?;
        Ok(self.value_unchecked(bundle))
    }

    pub(crate) fn voter_value(&self, voter: usize, bundle: &[usize]) -> u64 {
        match self.rule {
            Rule::Diverse => self.median_unchecked(voter, bundle, 1),
            Rule::Median => self.median_unchecked(voter, bundle, self.lambda),
            Rule::Best => self.best_unchecked(voter, bundle, self.lambda),
        }
    }

    pub(crate) fn value_unchecked(&self, bundle: &[usize]) -> u64 {
        (0..self.num_voters()).map(|v| self.voter_value(v, bundle)).sum()
    }

    fn median_unchecked(&self, voter: usize, bundle: &[usize], lambda: usize) -> u64 {
        if bundle.len() < lambda {
            return 0;
        }
        let row = &self.utils[voter];
        if lambda == 1 {
            return bundle.iter().map(|&p| row[p]).max().unwrap_or(0);
        }
        let mut vals: Vec<u64> = bundle.iter().map(|&p| row[p]).collect();
        let (_, kth, _) = vals.select_nth_unstable_by(lambda - 1, |a, b| b.cmp(a));
        *kth
    }

    fn best_unchecked(&self, voter: usize, bundle: &[usize], lambda: usize) -> u64 {
        let row = &self.utils[voter];
        if bundle.len() <= lambda {
            return bundle.iter().map(|&p| row[p]).sum();
        }
        let mut vals: Vec<u64> = bundle.iter().map(|&p| row[p]).collect();
        vals.sort_unstable_by(|a, b| b.cmp(a));
        vals[..lambda].iter().sum()
    }

    pub fn bundle_cost(&self, bundle: &[usize]) -> u64 {
        bundle.iter().map(|&p| self.costs[p]).sum()
    }

    /// Validates `items` and evaluates them as a [`Bundle`].
    pub fn bundle(&self, items: impl IntoIterator<Item = usize>) -> Result<Bundle> {
        let mut items: Vec<usize> = items.into_iter().collect();
        self.check_items(&items)?;
        items.sort_unstable();
        Ok(self.bundle_sorted(items))
    }

    /// Sorts and de-duplicates; indices must be in range.
    pub(crate) fn bundle_dedup(&self, mut items: Vec<usize>) -> Bundle {
        items.sort_unstable();
        items.dedup();
        self.bundle_sorted(items)
    }

    fn bundle_sorted(&self, items: Vec<usize>) -> Bundle {
        let cost = self.bundle_cost(&items);
        let value = self.value_unchecked(&items);
        Bundle { items, cost, value }
    }

    /// Drops every item that costs more than the budget.
    pub fn normalize(&self) -> Result<Normalized> {
        let keep: Vec<usize> = (0..self.num_items()).filter(|&p| self.is_affordable(p)).collect();
        let removed = (0..self.num_items())
            .filter(|&p| !self.is_affordable(p))
            .map(|p| self.item_ids[p].clone())
            .collect();
        if keep.is_empty() && self.target.is_some_and(|t| t > 0) {
            return Err(Error::Infeasible(format!(
                "no item fits the budget {} but the target is {}",
                self.budget,
                self.target.unwrap_or(0)
            )));
        }
        let instance = self.restrict_items(&keep);
        Ok(Normalized {
            instance,
            kept: keep,
            removed,
        })
    }

    /// The sub-instance on `keep` (in that order).
    pub(crate) fn restrict_items(&self, keep: &[usize]) -> Instance {
        Instance {
            item_ids: keep.iter().map(|&p| self.item_ids[p].clone()).collect(),
            costs: keep.iter().map(|&p| self.costs[p]).collect(),
            utils: self
                .utils
                .iter()
                .map(|row| keep.iter().map(|&p| row[p]).collect())
                .collect(),
            ..self.clone()
        }
    }
}

fn check_unique(kind: &str, ids: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::input(format!("duplicate {kind} id `{id}`")));
        }
    }
    Ok(())
}

/// Result of [`Instance::normalize`].
#[derive(Debug, Clone)]
pub struct Normalized {
    pub instance: Instance,
    /// `kept[i]` is the original index of item `i` of the new instance.
    pub kept: Vec<usize>,
    pub removed: Vec<String>,
}

impl Normalized {
    /// Translates a bundle of the normalized instance back to original indices.
    pub fn lift_items(&self, items: &[usize]) -> Vec<usize> {
        items.iter().map(|&p| self.kept[p]).collect()
    }
}

/// Utility aggregates used to size the pseudo-polynomial tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceStats {
    /// Largest single utility.
    pub u_max: u64,
    /// Sum over voters of each voter's largest utility.
    pub u_bar: u64,
    /// Sum of all utilities.
    pub u_hat: u64,
}

/// A set of items, sorted by index, with its cost and total satisfaction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bundle {
    pub items: Vec<usize>,
    pub cost: u64,
    pub value: u64,
}

impl Bundle {
    pub fn empty() -> Self {
        Bundle {
            items: Vec::new(),
            cost: 0,
            value: 0,
        }
    }

    /// Re-evaluates the bundle from scratch and checks it against `instance`.
    pub fn verify(&self, instance: &Instance) -> Result<()> {
        let fresh = instance.bundle(self.items.iter().copied())?;
        if fresh.cost != self.cost || fresh.value != self.value {
            return Err(Error::input(format!(
                "bundle reports cost {} / value {}, recomputed {} / {}",
                self.cost, self.value, fresh.cost, fresh.value
            )));
        }
        if fresh.cost > instance.budget() {
            return Err(Error::input(format!(
                "bundle cost {} exceeds budget {}",
                fresh.cost,
                instance.budget()
            )));
        }
        Ok(())
    }

    pub fn ids<'a>(&self, instance: &'a Instance) -> Vec<&'a str> {
        self.items.iter().map(|&p| instance.item_ids()[p].as_str()).collect()
    }
}

/// What a solver hands back: the optimum, a witness when the algorithm
/// produces one, and how many states it touched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub value: u64,
    pub witness: Option<Bundle>,
    pub states: u64,
}

impl Solution {
    pub(crate) fn with_witness(bundle: Bundle, states: u64) -> Self {
        Solution {
            value: bundle.value,
            witness: Some(bundle),
            states,
        }
    }

    pub(crate) fn value_only(value: u64, states: u64) -> Self {
        Solution {
            value,
            witness: None,
            states,
        }
    }

    /// The witness bundle; panics for value-only solvers.
    pub fn bundle(&self) -> &Bundle {
        self.witness.as_ref().expect("solver produced no witness")
    }
}

/// Keeps the better of two bundles: higher value, then the lexicographically
/// smaller item set.
pub(crate) fn better(candidate: &Bundle, incumbent: &Bundle) -> bool {
    candidate.value > incumbent.value
        || (candidate.value == incumbent.value && candidate.items < incumbent.items)
}
