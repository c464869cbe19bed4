//! Preference-profile structure: unanimity, strong unanimity,
//! single-crossing and single-peaked orderings, the distance to strong
//! unanimity, and the voter-merge reduction.

use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::Instance;

/// A voter's items grouped into indifference classes, best class first.
/// Items inside a class are in index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakOrder(pub Vec<Vec<usize>>);

pub fn weak_order_of(instance: &Instance, voter: usize) -> WeakOrder {
    let row = instance.utils(voter);
    let mut items: Vec<usize> = (0..row.len()).collect();
    items.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
    let classes = items
        .into_iter()
        .chunk_by(|&p| row[p])
        .into_iter()
        .map(|(_, group)| group.collect())
        .collect();
    WeakOrder(classes)
}

/// Lowest-index item that every voter ranks first (ties allowed).
pub fn common_top(instance: &Instance) -> Option<usize> {
    let maxima: Vec<u64> = (0..instance.num_voters())
        .map(|v| instance.utils(v).iter().copied().max().unwrap_or(0))
        .collect();
    (0..instance.num_items())
        .find(|&p| maxima.iter().enumerate().all(|(v, &mx)| instance.util(v, p) == mx))
}

pub fn is_unanimous(instance: &Instance) -> bool {
    common_top(instance).is_some()
}

pub fn is_strongly_unanimous(instance: &Instance) -> bool {
    let first = weak_order_of(instance, 0);
    (1..instance.num_voters()).all(|v| weak_order_of(instance, v) == first)
}

/// `n` minus the size of the largest group of voters sharing a weak order.
pub fn distance_to_su(instance: &Instance) -> usize {
    let mut groups: HashMap<WeakOrder, usize> = HashMap::new();
    for v in 0..instance.num_voters() {
        *groups.entry(weak_order_of(instance, v)).or_default() += 1;
    }
    instance.num_voters() - groups.values().copied().max().unwrap_or(0)
}

fn check_permutation(kind: &str, perm: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if perm.len() != len {
        return Err(Error::input(format!(
            "{kind} has {} entries, expected {len}",
            perm.len()
        )));
    }
    for &x in perm {
        if x >= len || std::mem::replace(&mut seen[x], true) {
            return Err(Error::input(format!("{kind} is not a permutation")));
        }
    }
    Ok(())
}

/// Checks that for every ordered item pair `(p, q)` the voters with
/// `util(p) >= util(q)` are consecutive in `sigma`.
pub fn verify_single_crossing(instance: &Instance, sigma: &[usize]) -> Result<bool> {
    check_permutation("voter order", sigma, instance.num_voters())?;
    Ok(is_single_crossing_unchecked(instance, sigma))
}

fn is_single_crossing_unchecked(instance: &Instance, sigma: &[usize]) -> bool {
    let m = instance.num_items();
    for p in 0..m {
        for q in 0..m {
            if p == q {
                continue;
            }
            let mut first = None;
            let mut last = 0;
            let mut count = 0;
            for (pos, &v) in sigma.iter().enumerate() {
                if instance.util(v, p) >= instance.util(v, q) {
                    first.get_or_insert(pos);
                    last = pos;
                    count += 1;
                }
            }
            if let Some(first) = first {
                if last - first + 1 != count {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks that every voter's utilities never increase moving away from its
/// peak along `axis`. With tied maxima, each tied item is tried as the peak
/// (closest to the axis start first).
pub fn verify_single_peaked(instance: &Instance, axis: &[usize]) -> Result<bool> {
    check_permutation("item axis", axis, instance.num_items())?;
    Ok((0..instance.num_voters()).all(|v| {
        let along: Vec<u64> = axis.iter().map(|&p| instance.util(v, p)).collect();
        let top = along.iter().copied().max().unwrap_or(0);
        along
            .iter()
            .positions(|&u| u == top)
            .any(|peak| peaked_at(&along, peak))
    }))
}

fn peaked_at(along: &[u64], peak: usize) -> bool {
    along[..=peak].windows(2).all(|w| w[0] <= w[1]) && along[peak..].windows(2).all(|w| w[0] >= w[1])
}

/// Searches all voter orders (lexicographically) for a single-crossing one.
pub fn detect_single_crossing(instance: &Instance, caps: &Caps) -> Result<Option<Vec<usize>>> {
    let n = instance.num_voters();
    Error::check_cap("sc_detect_max_voters", caps.sc_detect_max_voters as u64, n as u64)?;
    Ok((0..n)
        .permutations(n)
        .find(|sigma| is_single_crossing_unchecked(instance, sigma)))
}

/// Repeatedly merges voters with identical weak orders into one voter whose
/// utilities are the coordinatewise sum.
///
/// Returns the reduced instance and, for every original voter, the index of
/// the merged voter it went into. Groups keep the order of their first
/// member and merged ids are the member ids joined by `+`.
pub fn merge_identical_voters(instance: &Instance) -> (Instance, Vec<usize>) {
    let n = instance.num_voters();
    let mut group_of: HashMap<WeakOrder, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut mapping = Vec::with_capacity(n);
    for v in 0..n {
        let next = members.len();
        let g = *group_of.entry(weak_order_of(instance, v)).or_insert(next);
        if g == next {
            members.push(Vec::new());
        }
        members[g].push(v);
        mapping.push(g);
    }
    let m = instance.num_items();
    let ids = members
        .iter()
        .map(|g| g.iter().map(|&v| instance.voter_ids()[v].as_str()).join("+"))
        .collect();
    let utils = members
        .iter()
        .map(|g| (0..m).map(|p| g.iter().map(|&v| instance.util(v, p)).sum()).collect())
        .collect();
    (instance.with_utils(ids, utils), mapping)
}

/// Everything `analyze` reports about a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub is_unanimous: bool,
    pub is_strongly_unanimous: bool,
    pub distance_d: usize,
    /// A verified single-crossing voter order, if one is known.
    pub sc_order: Option<Vec<usize>>,
    /// A verified single-peaked item axis, if one is known.
    pub sp_axis: Option<Vec<usize>>,
    /// Result of checking a user-supplied voter order.
    pub supplied_sc_verified: Option<bool>,
    /// Result of checking a user-supplied item axis.
    pub supplied_sp_verified: Option<bool>,
    /// `Some(found)` when exhaustive detection ran, `None` when it was
    /// skipped because the instance exceeds the cap.
    pub sc_detected: Option<bool>,
}

pub fn analyze(
    instance: &Instance,
    sc_order: Option<&[usize]>,
    sp_axis: Option<&[usize]>,
    caps: &Caps,
) -> Result<ProfileReport> {
    let supplied_sc_verified = sc_order.map(|s| verify_single_crossing(instance, s)).transpose()?;
    let supplied_sp_verified = sp_axis.map(|a| verify_single_peaked(instance, a)).transpose()?;
    let detected = match detect_single_crossing(instance, caps) {
        Ok(found) => Some(found),
        Err(Error::Size { .. }) => None,
        Err(e) => return Err(e),
    };
    let sc_order = match (sc_order, supplied_sc_verified) {
        (Some(s), Some(true)) => Some(s.to_vec()),
        _ => detected.clone().flatten(),
    };
    let sp_axis = match (sp_axis, supplied_sp_verified) {
        (Some(a), Some(true)) => Some(a.to_vec()),
        _ => None,
    };
    let strongly = is_strongly_unanimous(instance);
    Ok(ProfileReport {
        is_unanimous: is_unanimous(instance),
        is_strongly_unanimous: strongly,
        distance_d: distance_to_su(instance),
        sc_order,
        sp_axis,
        supplied_sc_verified,
        supplied_sp_verified,
        sc_detected: detected.map(|d| d.is_some()),
    })
}
