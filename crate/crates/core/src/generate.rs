//! Seeded random instances with a prescribed profile structure.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Rule};
use crate::profiles::{distance_to_su, is_unanimous, verify_single_crossing, verify_single_peaked};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    General,
    Unanimous,
    Su,
    Sc,
    Sp,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::General => "general",
            Kind::Unanimous => "unanimous",
            Kind::Su => "su",
            Kind::Sc => "sc",
            Kind::Sp => "sp",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "general" => Kind::General,
            "unanimous" => Kind::Unanimous,
            "su" => Kind::Su,
            "sc" => Kind::Sc,
            "sp" => Kind::Sp,
            other => return Err(Error::input(format!("unknown instance kind `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub kind: Kind,
    pub n: usize,
    pub m: usize,
    pub max_util: u64,
    pub max_cost: u64,
    pub budget: u64,
    pub rule: Rule,
    pub lambda: usize,
    pub seed: u64,
}

impl GenParams {
    pub fn new(kind: Kind, n: usize, m: usize, seed: u64) -> Self {
        GenParams {
            kind,
            n,
            m,
            max_util: 10,
            max_cost: 5,
            budget: 10,
            rule: Rule::Diverse,
            lambda: 1,
            seed,
        }
    }
}

/// A generated instance plus the structure it was built around.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub instance: Instance,
    /// Voter order under which the profile is single-crossing.
    pub sc_order: Option<Vec<usize>>,
    /// Item axis under which the profile is single-peaked.
    pub sp_axis: Option<Vec<usize>>,
}

pub fn generate(params: &GenParams) -> Result<Generated> {
    let GenParams { kind, n, m, max_util, max_cost, .. } = *params;
    if n == 0 || m == 0 || max_cost == 0 {
        return Err(Error::input("voters, items and the cost range must be positive"));
    }
    if matches!(kind, Kind::Sc | Kind::Sp) && max_util + 1 < m as u64 {
        return Err(Error::input(format!(
            "strict {kind} profiles over {m} items need max_util >= {}",
            m - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let costs: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=max_cost)).collect();
    let mut sc_order = None;
    let mut sp_axis = None;
    let utils: Vec<Vec<u64>> = match kind {
        Kind::General => random_rows(&mut rng, n, m, max_util),
        Kind::Unanimous => {
            let mut rows = random_rows(&mut rng, n, m, max_util);
            let top = rng.gen_range(0..m);
            for row in &mut rows {
                row[top] = max_util;
            }
            rows
        }
        Kind::Su => {
            let base: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=max_util)).collect();
            let mut levels = base.clone();
            levels.sort_unstable();
            levels.dedup();
            (0..n)
                .map(|_| {
                    // A fresh strictly increasing relabelling of the shared levels.
                    let mut fresh = scores(&mut rng, levels.len(), max_util);
                    fresh.reverse();
                    base.iter().map(|u| fresh[levels.binary_search(u).unwrap()]).collect()
                })
                .collect()
        }
        Kind::Sc => {
            let (rows, order) = single_crossing(&mut rng, n, m, max_util);
            sc_order = Some(order);
            rows
        }
        Kind::Sp => {
            let mut axis: Vec<usize> = (0..m).collect();
            axis.shuffle(&mut rng);
            let rows = (0..n).map(|_| single_peaked_row(&mut rng, &axis, max_util)).collect();
            sp_axis = Some(axis);
            rows
        }
    };

    let items = (0..m).map(|p| (format!("p{}", p + 1), costs[p])).collect();
    let voters = utils.into_iter().enumerate().map(|(v, u)| (format!("v{}", v + 1), u)).collect();
    let instance = Instance::new(items, voters, params.budget, params.rule, params.lambda, None)?;

    let verified = match kind {
        Kind::General => true,
        Kind::Unanimous => is_unanimous(&instance),
        Kind::Su => distance_to_su(&instance) == 0,
        Kind::Sc => verify_single_crossing(&instance, sc_order.as_deref().unwrap())?,
        Kind::Sp => verify_single_peaked(&instance, sp_axis.as_deref().unwrap())?,
    };
    assert!(verified, "generated {kind} profile failed its own check (seed {})", params.seed);
    Ok(Generated {
        instance,
        sc_order,
        sp_axis,
    })
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize, m: usize, max_util: u64) -> Vec<Vec<u64>> {
    (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..=max_util)).collect()).collect()
}

/// `len` distinct values from `0..=max_util`, strictly decreasing.
fn scores(rng: &mut ChaCha8Rng, len: usize, max_util: u64) -> Vec<u64> {
    let mut picked: Vec<u64> = if max_util < 1 << 20 {
        index::sample(rng, max_util as usize + 1, len).into_iter().map(|x| x as u64).collect()
    } else {
        let mut set = std::collections::BTreeSet::new();
        while set.len() < len {
            set.insert(rng.gen_range(0..=max_util));
        }
        set.into_iter().collect()
    };
    picked.sort_unstable_by(|a, b| b.cmp(a));
    picked
}

/// Strict rankings that drift from the first voter's by adjacent swaps of
/// pairs never swapped before; voters are then shuffled and the drift order
/// is returned as the crossing order.
fn single_crossing(rng: &mut ChaCha8Rng, n: usize, m: usize, max_util: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut ranking: Vec<usize> = (0..m).collect();
    ranking.shuffle(rng);
    // position of each item in the first ranking; a pair is still unswapped
    // while it appears in that original relative order
    let mut first_pos = vec![0; m];
    for (k, &p) in ranking.iter().enumerate() {
        first_pos[p] = k;
    }
    let mut sequence = Vec::with_capacity(n);
    for t in 0..n {
        if t > 0 {
            for _ in 0..rng.gen_range(0..m) {
                let open: Vec<usize> = (0..m - 1)
                    .filter(|&k| first_pos[ranking[k]] < first_pos[ranking[k + 1]])
                    .collect();
                let Some(&k) = open.choose(rng) else { break };
                ranking.swap(k, k + 1);
            }
        }
        let s = scores(rng, m, max_util);
        let mut row = vec![0; m];
        for (k, &p) in ranking.iter().enumerate() {
            row[p] = s[k];
        }
        sequence.push(row);
    }
    let mut slots: Vec<usize> = (0..n).collect();
    slots.shuffle(rng);
    // voter slots[t] receives the t-th ranking of the drift
    let mut rows = vec![Vec::new(); n];
    for (t, row) in sequence.into_iter().enumerate() {
        rows[slots[t]] = row;
    }
    (rows, slots)
}

fn single_peaked_row(rng: &mut ChaCha8Rng, axis: &[usize], max_util: u64) -> Vec<u64> {
    let m = axis.len();
    let peak = rng.gen_range(0..m);
    let s = scores(rng, m, max_util);
    let mut row = vec![0; m];
    let (mut lo, mut hi) = (peak, peak);
    row[axis[peak]] = s[0];
    for &score in &s[1..] {
        let left = lo > 0 && (hi + 1 == m || rng.gen_bool(0.5));
        if left {
            lo -= 1;
            row[axis[lo]] = score;
        } else {
            hi += 1;
            row[axis[hi]] = score;
        }
    }
    row
}
