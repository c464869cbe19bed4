//! Cross-solver agreement harness.
//!
//! Every generated instance is solved by each applicable solver and each
//! value is checked against the exhaustive oracle. Instances run in
//! parallel; rows are sorted before they are returned, so output depends
//! only on the seed and the configuration.

use std::ops::RangeInclusive;
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::caps::Caps;
use crate::diverse::{solve_dk_fptas, solve_dk_kpcover, solve_dk_polymul, solve_dk_sc_unary};
use crate::error::{Error, Result};
use crate::generate::{generate, GenParams, Kind};
use crate::io::{to_json, Document};
use crate::median::{lift_diverse_to_median, solve_buk_single_voter, solve_matching_fpt, solve_muk_xp, solve_su};
use crate::model::{Instance, Rule, Solution};
use crate::oracle::brute_force_solve;
use crate::profiles::merge_identical_voters;
use crate::solve::{solve, SolveOptions};
use crate::Indexing;

pub const CSV_HEADER: &str = "instance_id,n,m,b,lambda,rule,algo,value,millis,states";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub seed: u64,
    /// Instances generated per group.
    pub per_group: usize,
    pub caps: Caps,
    /// Fill the `millis` column; off by default so runs are reproducible
    /// byte for byte.
    pub timings: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 0,
            per_group: 8,
            caps: Caps::default(),
            timings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance_id: String,
    pub n: usize,
    pub m: usize,
    pub b: u64,
    pub lambda: usize,
    pub rule: Rule,
    pub algo: String,
    pub value: u64,
    pub millis: Option<f64>,
    pub states: u64,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        let millis = self.millis.map(|t| format!("{t:.3}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.instance_id, self.n, self.m, self.b, self.lambda, self.rule, self.algo, self.value, millis, self.states
        )
    }
}

/// A solver that disagreed with the oracle, with the instance that shows it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub instance_id: String,
    pub algo: String,
    pub expected: String,
    pub got: u64,
    /// The instance as a JSON document.
    pub document: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    pub disagreements: Vec<Disagreement>,
    /// Observations that are reported but not enforced.
    pub notes: Vec<String>,
}

impl BenchOutcome {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    Median,
    Best,
    Single,
    Diverse,
    Crossing,
    Unanimous,
    Lift,
    Merge,
    Scaling,
}

const GROUPS: [(Group, &str); 9] = [
    (Group::Median, "med"),
    (Group::Best, "best"),
    (Group::Single, "single"),
    (Group::Diverse, "div"),
    (Group::Crossing, "sc"),
    (Group::Unanimous, "su"),
    (Group::Lift, "lift"),
    (Group::Merge, "merge"),
    (Group::Scaling, "scale"),
];

struct Case {
    id: String,
    group: Group,
    doc: Document,
}

fn params(rng: &mut ChaCha8Rng, kind: Kind, n: RangeInclusive<usize>, m: RangeInclusive<usize>) -> GenParams {
    let (n, m) = (rng.gen_range(n), rng.gen_range(m));
    let mut p = GenParams::new(kind, n, m, rng.gen());
    p.max_util = 6;
    p.max_cost = 5;
    p.budget = rng.gen_range(1..=10);
    p
}

fn build(group: Group, seed: u64, stream: u64, index: usize) -> Result<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let median_like = |rng: &mut ChaCha8Rng, rule: Rule| {
        let mut p = params(rng, Kind::General, 1..=4, 2..=6);
        p.rule = rule;
        p.lambda = rng.gen_range(1..=3);
        p
    };
    let p = match group {
        Group::Median => median_like(&mut rng, Rule::Median),
        Group::Best => median_like(&mut rng, Rule::Best),
        Group::Single => {
            let mut p = params(&mut rng, Kind::General, 1..=1, 3..=10);
            p.rule = Rule::Best;
            p.lambda = rng.gen_range(1..=5);
            p
        }
        Group::Diverse | Group::Lift => params(&mut rng, Kind::General, 1..=5, 2..=7),
        Group::Crossing => {
            let mut p = params(&mut rng, Kind::Sc, 2..=6, 3..=8);
            p.max_util = 1000;
            p
        }
        Group::Unanimous => {
            let mut p = params(&mut rng, Kind::Su, 2..=4, 2..=6);
            p.rule = if rng.gen_bool(0.5) { Rule::Median } else { Rule::Best };
            p.lambda = rng.gen_range(1..=3);
            p
        }
        Group::Merge => {
            let rule = [Rule::Diverse, Rule::Median, Rule::Best][index % 3];
            let mut p = median_like(&mut rng, rule);
            if rule == Rule::Diverse {
                p.lambda = 1;
            }
            p
        }
        Group::Scaling => {
            let mut p = params(&mut rng, Kind::General, index % 6 + 1..=index % 6 + 1, 5..=5);
            p.budget = 6;
            p
        }
    };
    let doc: Document = generate(&p)?.into();
    if group == Group::Merge {
        plant_duplicates(&mut rng, &doc.instance).map(Document::new)
    } else {
        Ok(doc)
    }
}

/// Appends voters that rank items exactly like existing ones.
fn plant_duplicates(rng: &mut ChaCha8Rng, inst: &Instance) -> Result<Instance> {
    let m = inst.num_items();
    let items = inst.item_ids().iter().cloned().zip(inst.costs().iter().copied()).collect();
    let mut voters: Vec<(String, Vec<u64>)> =
        (0..inst.num_voters()).map(|v| (inst.voter_ids()[v].clone(), inst.utils(v).to_vec())).collect();
    for k in 0..rng.gen_range(1..=3) {
        let src = rng.gen_range(0..inst.num_voters());
        let (scale, shift) = (rng.gen_range(1..=3), rng.gen_range(0..=2));
        let row = (0..m).map(|p| inst.util(src, p) * scale + shift).collect();
        voters.push((format!("dup{}", k + 1), row));
    }
    Instance::new(items, voters, inst.budget(), inst.rule(), inst.lambda(), None)
}

enum Check {
    Equal(u64),
    Approx { opt: u64, eps: Ratio<u64> },
}

struct Runner<'a> {
    case: &'a Case,
    timings: bool,
    rows: Vec<BenchRow>,
    bad: Vec<Disagreement>,
    notes: Vec<String>,
}

impl Runner<'_> {
    fn run(&mut self, algo: &str, check: Check, f: impl FnOnce() -> Result<Solution>) -> Result<Option<u64>> {
        let start = Instant::now();
        let solution = match f() {
            Ok(s) => s,
            Err(Error::Size { cap, .. }) => {
                self.notes.push(format!("{} {algo}: skipped by cap `{cap}`", self.case.id));
                return Ok(None);
            }
            Err(e) => return Err(e),
        };
        let millis = start.elapsed().as_secs_f64() * 1000.0;
        let inst = &self.case.doc.instance;
        if let Some(bundle) = &solution.witness {
            bundle.verify(inst)?;
        }
        let value = solution.value;
        let (ok, expected) = match check {
            Check::Equal(want) => (value == want, want.to_string()),
            Check::Approx { opt, eps } => (
                value <= opt && Ratio::from_integer(value) * (Ratio::from_integer(1) + eps) >= Ratio::from_integer(opt),
                format!("within 1+{eps} of {opt}"),
            ),
        };
        if !ok {
            self.bad.push(Disagreement {
                instance_id: self.case.id.clone(),
                algo: algo.to_string(),
                expected,
                got: value,
                document: to_json(&self.case.doc),
            });
        }
        self.rows.push(BenchRow {
            instance_id: self.case.id.clone(),
            n: inst.num_voters(),
            m: inst.num_items(),
            b: inst.budget(),
            lambda: inst.lambda(),
            rule: inst.rule(),
            algo: algo.to_string(),
            value,
            millis: self.timings.then_some(millis),
            states: solution.states,
        });
        Ok(Some(value))
    }
}

fn run_case(case: &Case, cfg: &BenchConfig) -> Result<(Vec<BenchRow>, Vec<Disagreement>, Vec<String>)> {
    let caps = &cfg.caps;
    let inst = &case.doc.instance;
    let mut r = Runner {
        case,
        timings: cfg.timings,
        rows: Vec::new(),
        bad: Vec::new(),
        notes: Vec::new(),
    };
    let opt = brute_force_solve(inst, caps)?.value;
    r.run("oracle", Check::Equal(opt), || brute_force_solve(inst, caps))?;
    let eq = || Check::Equal(opt);
    match case.group {
        Group::Median | Group::Best => {
            if inst.rule() == Rule::Median {
                r.run("xp", eq(), || solve_muk_xp(inst, caps))?;
            }
            r.run("matching", eq(), || solve_matching_fpt(inst, caps))?;
            r.run("auto", eq(), || auto(&case.doc, caps))?;
        }
        Group::Single => {
            r.run("single-voter-cost", eq(), || solve_buk_single_voter(inst, Indexing::Cost, caps))?;
            r.run("single-voter-profit", eq(), || solve_buk_single_voter(inst, Indexing::Profit, caps))?;
        }
        Group::Diverse => {
            r.run("kpcover-profit", eq(), || solve_dk_kpcover(inst, Indexing::Profit, caps))?;
            r.run("kpcover-cost", eq(), || solve_dk_kpcover(inst, Indexing::Cost, caps))?;
            r.run("polymul", eq(), || solve_dk_polymul(inst, caps))?;
            r.run("xp", eq(), || solve_muk_xp(inst, caps))?;
            r.run("matching", eq(), || solve_matching_fpt(inst, caps))?;
            r.run("auto", eq(), || auto(&case.doc, caps))?;
        }
        Group::Crossing => {
            let sigma = case.doc.sc_order.as_deref().expect("generated with an order");
            r.run("sc-cost", eq(), || solve_dk_sc_unary(inst, sigma, Indexing::Cost, caps))?;
            r.run("sc-profit", eq(), || solve_dk_sc_unary(inst, sigma, Indexing::Profit, caps))?;
            r.run("kpcover-cost", eq(), || solve_dk_kpcover(inst, Indexing::Cost, caps))?;
            for (label, eps) in [("fptas-1/10", Ratio::new(1, 10)), ("fptas-1/2", Ratio::new(1, 2)), ("fptas-1", Ratio::new(1, 1))] {
                r.run(label, Check::Approx { opt, eps }, || {
                    solve_dk_fptas(inst, sigma, eps, caps).map(|f| f.solution)
                })?;
            }
        }
        Group::Unanimous => {
            r.run("su", eq(), || solve_su(inst, Indexing::Cost, caps))?;
            r.run("auto", eq(), || auto(&case.doc, caps))?;
        }
        Group::Lift => {
            for lambda in [2, 3] {
                let lifted = lift_diverse_to_median(inst, lambda)?;
                r.run(&format!("lift{lambda}-oracle"), eq(), || {
                    brute_force_solve(&lifted, caps).map(|s| Solution::value_only(s.value, s.states))
                })?;
            }
        }
        Group::Merge => {
            let (merged, _) = merge_identical_voters(inst);
            r.run("merged-oracle", eq(), || {
                brute_force_solve(&merged, caps).map(|s| Solution::value_only(s.value, s.states))
            })?;
        }
        Group::Scaling => {
            r.run("polymul", eq(), || solve_dk_polymul(inst, caps))?;
            r.run("kpcover-profit", eq(), || solve_dk_kpcover(inst, Indexing::Profit, caps))?;
        }
    }
    Ok((r.rows, r.bad, r.notes))
}

fn auto(doc: &Document, caps: &Caps) -> Result<Solution> {
    let options = SolveOptions {
        caps: caps.clone(),
        ..SolveOptions::default()
    };
    let report = solve(doc, &options)?;
    Ok(Solution {
        value: report.value,
        witness: report.witness,
        states: report.states,
    })
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome> {
    let mut cases = Vec::new();
    for (g, (group, name)) in GROUPS.iter().enumerate() {
        for index in 0..cfg.per_group {
            let stream = (g as u64) << 32 | index as u64;
            cases.push(Case {
                id: format!("{name}-{index:03}"),
                group: *group,
                doc: build(*group, cfg.seed, stream, index)?,
            });
        }
    }
    let results: Vec<_> = cases.par_iter().map(|case| run_case(case, cfg)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut disagreements = Vec::new();
    let mut notes = Vec::new();
    for (r, d, n) in results {
        rows.extend(r);
        disagreements.extend(d);
        notes.extend(n);
    }
    rows.sort_by(|a, b| (&a.instance_id, &a.algo).cmp(&(&b.instance_id, &b.algo)));
    disagreements.sort_by(|a, b| (&a.instance_id, &a.algo).cmp(&(&b.instance_id, &b.algo)));
    notes.sort();
    if cfg.timings {
        notes.extend(scaling_note(&rows));
    }
    Ok(BenchOutcome {
        rows,
        disagreements,
        notes,
    })
}

/// Mean polymul time per voter count in the scaling group, flagged when it
/// fails to grow with `n`.
fn scaling_note(rows: &[BenchRow]) -> Option<String> {
    let mut by_n: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for row in rows.iter().filter(|r| r.instance_id.starts_with("scale-") && r.algo == "polymul") {
        by_n.entry(row.n).or_default().extend(row.millis);
    }
    let means: Vec<(usize, f64)> = by_n
        .into_iter()
        .map(|(n, ts)| (n, ts.iter().sum::<f64>() / ts.len().max(1) as f64))
        .collect();
    if means.is_empty() {
        return None;
    }
    let monotone = means.windows(2).all(|w| w[0].1 <= w[1].1);
    let listing: Vec<String> = means.iter().map(|(n, t)| format!("n={n}: {t:.3} ms")).collect();
    Some(format!(
        "polymul mean time by n ({}): {}",
        if monotone { "monotone" } else { "not monotone" },
        listing.join(", ")
    ))
}
