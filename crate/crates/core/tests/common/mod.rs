//! Reference evaluation shared by the integration tests. It reads plain
//! vectors only and never calls the library's own satisfaction code.

#![allow(dead_code)]

use mak_core::generate::{generate, GenParams, Kind};
use mak_core::{Instance, Rule};
use proptest::prelude::*;

#[derive(Debug, Clone)]
pub struct Raw {
    pub costs: Vec<u64>,
    pub utils: Vec<Vec<u64>>,
    pub budget: u64,
    pub rule: Rule,
    pub lambda: usize,
}

impl Raw {
    pub fn of(inst: &Instance) -> Raw {
        Raw {
            costs: inst.costs().to_vec(),
            utils: (0..inst.num_voters()).map(|v| inst.utils(v).to_vec()).collect(),
            budget: inst.budget(),
            rule: inst.rule(),
            lambda: inst.lambda(),
        }
    }

    pub fn instance(&self) -> Instance {
        let items = self.costs.iter().enumerate().map(|(i, &c)| (format!("p{i}"), c)).collect();
        let voters = self.utils.iter().enumerate().map(|(i, u)| (format!("v{i}"), u.clone())).collect();
        Instance::new(items, voters, self.budget, self.rule, self.lambda, None).expect("valid instance")
    }

    pub fn sat(&self, voter: usize, bundle: &[usize]) -> u64 {
        let mut vals: Vec<u64> = bundle.iter().map(|&p| self.utils[voter][p]).collect();
        vals.sort_unstable_by(|a, b| b.cmp(a));
        match self.rule {
            Rule::Diverse => vals.first().copied().unwrap_or(0),
            Rule::Median => vals.get(self.lambda - 1).copied().unwrap_or(0),
            Rule::Best => vals.iter().take(self.lambda).sum(),
        }
    }

    pub fn total(&self, bundle: &[usize]) -> u64 {
        (0..self.utils.len()).map(|v| self.sat(v, bundle)).sum()
    }

    pub fn cost(&self, bundle: &[usize]) -> u64 {
        bundle.iter().map(|&p| self.costs[p]).sum()
    }

    pub fn optimum(&self) -> u64 {
        let m = self.costs.len();
        (0u32..1 << m)
            .map(|mask| (0..m).filter(|&p| mask >> p & 1 == 1).collect::<Vec<_>>())
            .filter(|z| self.cost(z) <= self.budget)
            .map(|z| self.total(&z))
            .max()
            .unwrap_or(0)
    }
}

pub fn raw(rule: Rule, max_n: usize, max_m: usize, max_lambda: usize) -> impl Strategy<Value = Raw> {
    (1..=max_n, 1..=max_m).prop_flat_map(move |(n, m)| {
        let lambda = if rule == Rule::Diverse { 1..=1 } else { 1..=max_lambda };
        (
            prop::collection::vec(1..=5u64, m),
            prop::collection::vec(prop::collection::vec(0..=6u64, m), n),
            0..=12u64,
            lambda,
        )
            .prop_map(move |(costs, utils, budget, lambda)| Raw {
                costs,
                utils,
                budget,
                rule,
                lambda,
            })
    })
}

/// A generated single-crossing instance together with its order.
pub fn sc(max_n: usize, max_m: usize, max_util: u64) -> impl Strategy<Value = (Instance, Vec<usize>)> {
    (1..=max_n, 1..=max_m, 1..=12u64, any::<u64>()).prop_map(move |(n, m, budget, seed)| {
        let mut p = GenParams::new(Kind::Sc, n, m, seed);
        p.max_util = max_util;
        p.budget = budget;
        let g = generate(&p).expect("generator");
        (g.instance, g.sc_order.expect("order"))
    })
}
