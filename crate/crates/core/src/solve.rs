//! Solver selection and the report handed to the command line.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::Ratio;
use serde::Serialize;

use crate::caps::Caps;
use crate::diverse::{
    solve_dk_fptas, solve_dk_kpcover, solve_dk_polymul_with, solve_dk_sc_unary, solve_dk_unanimous, ProductMethod,
};
use crate::error::{Error, Result};
use crate::io::Document;
use crate::median::{solve_buk_single_voter, solve_matching_fpt, solve_muk_xp, solve_su};
use crate::model::{Bundle, Instance, Rule, Solution};
use crate::oracle::brute_force_solve;
use crate::profiles::{is_strongly_unanimous, is_unanimous, merge_identical_voters, verify_single_crossing};
use crate::Indexing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Auto,
    Oracle,
    Xp,
    Matching,
    SingleVoter,
    Su,
    Unanimous,
    Kpcover,
    Polymul,
    Sc,
    Fptas,
}

impl Algorithm {
    pub const ALL: [Algorithm; 11] = [
        Algorithm::Auto,
        Algorithm::Oracle,
        Algorithm::Xp,
        Algorithm::Matching,
        Algorithm::SingleVoter,
        Algorithm::Su,
        Algorithm::Unanimous,
        Algorithm::Kpcover,
        Algorithm::Polymul,
        Algorithm::Sc,
        Algorithm::Fptas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Oracle => "oracle",
            Algorithm::Xp => "xp",
            Algorithm::Matching => "matching",
            Algorithm::SingleVoter => "single-voter",
            Algorithm::Su => "su",
            Algorithm::Unanimous => "unanimous",
            Algorithm::Kpcover => "kpcover",
            Algorithm::Polymul => "polymul",
            Algorithm::Sc => "sc",
            Algorithm::Fptas => "fptas",
        }
    }

    /// Whether the algorithm accepts instances of `rule` at all.
    pub fn supports(self, rule: Rule) -> bool {
        match self {
            Algorithm::Auto | Algorithm::Oracle | Algorithm::Matching | Algorithm::Su => true,
            Algorithm::Xp => rule != Rule::Best,
            Algorithm::SingleVoter => rule == Rule::Best,
            Algorithm::Unanimous | Algorithm::Kpcover | Algorithm::Polymul | Algorithm::Sc | Algorithm::Fptas => {
                rule == Rule::Diverse
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::input(format!("unknown algorithm `{s}`")))
    }
}

/// Parses `num/den` or a bare integer.
pub fn parse_epsilon(text: &str) -> Result<Ratio<u64>> {
    let eps: Ratio<u64> = text
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("epsilon `{text}` is not a rational like 1/2")))?;
    if *eps.numer() == 0 || eps > Ratio::from_integer(1) {
        return Err(Error::input(format!("epsilon must lie in (0, 1], got {eps}")));
    }
    Ok(eps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    pub indexing: Indexing,
    pub epsilon: Option<Ratio<u64>>,
    pub product: ProductMethod,
    pub caps: Caps,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            algorithm: Algorithm::Auto,
            indexing: Indexing::Cost,
            epsilon: None,
            product: ProductMethod::Schoolbook,
            caps: Caps::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    /// The solver that produced the value; for `auto` the one it chose.
    pub algorithm: Algorithm,
    pub value: u64,
    /// Item indices, `None` for value-only solvers.
    pub witness: Option<Bundle>,
    pub witness_ids: Option<Vec<String>>,
    /// `value >= target` when the instance has a target.
    pub decision: Option<bool>,
    pub millis: f64,
    pub states: u64,
    /// Guarantee line for approximate answers.
    pub certificate: Option<String>,
    pub notes: Vec<String>,
}

struct Outcome {
    algorithm: Algorithm,
    solution: Solution,
    certificate: Option<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn exact(algorithm: Algorithm, solution: Solution) -> Self {
        Outcome {
            algorithm,
            solution,
            certificate: None,
            notes: Vec::new(),
        }
    }
}

pub fn solve(doc: &Document, options: &SolveOptions) -> Result<SolveReport> {
    let instance = &doc.instance;
    if !options.algorithm.supports(instance.rule()) {
        return Err(Error::input(format!(
            "algorithm `{}` does not handle the {} rule",
            options.algorithm,
            instance.rule()
        )));
    }
    let start = Instant::now();
    let outcome = match options.algorithm {
        Algorithm::Auto => auto(doc, options)?,
        algo => run(algo, doc, options)?,
    };
    let millis = start.elapsed().as_secs_f64() * 1000.0;

    let Outcome {
        algorithm,
        solution,
        certificate,
        notes,
    } = outcome;
    if let Some(bundle) = &solution.witness {
        bundle.verify(instance)?;
        if certificate.is_none() && bundle.value != solution.value {
            return Err(Error::input(format!(
                "{algorithm} reported {} but its bundle is worth {}",
                solution.value, bundle.value
            )));
        }
    }
    Ok(SolveReport {
        algorithm,
        value: solution.value,
        witness_ids: solution
            .witness
            .as_ref()
            .map(|b| b.ids(instance).into_iter().map(String::from).collect()),
        witness: solution.witness,
        decision: instance.target().map(|t| solution.value >= t),
        millis,
        states: solution.states,
        certificate,
        notes,
    })
}

fn need_order(doc: &Document) -> Result<&[usize]> {
    doc.sc_order
        .as_deref()
        .ok_or_else(|| Error::input("this algorithm needs an sc_order in the instance file"))
}

/// Runs one named solver on the instance as given.
fn run(algo: Algorithm, doc: &Document, options: &SolveOptions) -> Result<Outcome> {
    let inst = &doc.instance;
    let caps = &options.caps;
    let solution = match algo {
        Algorithm::Auto => unreachable!("auto is resolved by the caller"),
        Algorithm::Oracle => brute_force_solve(inst, caps)?,
        Algorithm::Xp => solve_muk_xp(inst, caps)?,
        Algorithm::Matching => solve_matching_fpt(inst, caps)?,
        Algorithm::SingleVoter => solve_buk_single_voter(inst, options.indexing, caps)?,
        Algorithm::Su => solve_su(inst, options.indexing, caps)?,
        Algorithm::Unanimous => solve_dk_unanimous(inst)?,
        Algorithm::Kpcover => solve_dk_kpcover(inst, options.indexing, caps)?,
        Algorithm::Polymul => solve_dk_polymul_with(inst, caps, options.product, &mut |_, _| {})?,
        Algorithm::Sc => solve_dk_sc_unary(inst, need_order(doc)?, options.indexing, caps)?,
        Algorithm::Fptas => {
            let eps = options
                .epsilon
                .ok_or_else(|| Error::input("the approximation scheme needs --epsilon"))?;
            let r = solve_dk_fptas(inst, need_order(doc)?, eps, caps)?;
            let value = r.solution.value;
            let scaled = Ratio::from_integer(u128::from(value)) * (Ratio::from_integer(1) + widen(eps));
            let certificate = format!(
                "value * (1 + {eps}) = {} >= OPT; OPT <= {} (rounding step {})",
                fmt_ratio(scaled),
                r.upper_bound(),
                fmt_ratio(r.scale)
            );
            return Ok(Outcome {
                algorithm: algo,
                solution: r.solution,
                certificate: Some(certificate),
                notes: Vec::new(),
            });
        }
    };
    Ok(Outcome::exact(algo, solution))
}

fn widen(r: Ratio<u64>) -> Ratio<u128> {
    Ratio::new(u128::from(*r.numer()), u128::from(*r.denom()))
}

fn fmt_ratio(r: Ratio<u128>) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rough state count each exact solver would touch, `None` when the
/// solver does not apply.
fn estimate(algo: Algorithm, inst: &Instance) -> Option<u64> {
    let n = inst.num_voters() as u32;
    let m = inst.num_items() as u64;
    let b = inst.budget().min(inst.costs().iter().sum()) + 1;
    let lambda = inst.lambda() as u64;
    let rule = inst.rule();
    let pow = |base: u64, e: u32| base.checked_pow(e).unwrap_or(u64::MAX);
    let est = match algo {
        Algorithm::Oracle => pow(2, m.min(63) as u32).saturating_mul(m * u64::from(n)),
        Algorithm::Xp if rule != Rule::Best => pow(m, n).saturating_mul(pow(lambda + 1, n)).saturating_mul(m),
        Algorithm::Matching => {
            let k = m.min(b);
            pow(k.max(2), n * k.min(8) as u32).saturating_mul(m)
        }
        Algorithm::SingleVoter if rule == Rule::Best && n == 1 => m * b * (lambda + 1),
        Algorithm::Kpcover if rule == Rule::Diverse => pow(3, n).saturating_mul(m).saturating_mul(b),
        _ => return None,
    };
    Some(est)
}

fn auto(doc: &Document, options: &SolveOptions) -> Result<Outcome> {
    let original = &doc.instance;
    let normalized = match original.normalize() {
        Ok(n) => n,
        Err(Error::Infeasible(why)) => {
            let mut out = Outcome::exact(Algorithm::Auto, Solution::with_witness(Bundle::empty(), 0));
            out.notes.push(why);
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let mut notes = Vec::new();
    if !normalized.removed.is_empty() {
        notes.push(format!("dropped unaffordable items: {}", normalized.removed.join(", ")));
    }
    let inst = &normalized.instance;
    if inst.num_items() == 0 {
        let mut out = Outcome::exact(Algorithm::Auto, Solution::with_witness(Bundle::empty(), 0));
        out.notes = notes;
        return Ok(out);
    }

    let local = Document {
        instance: inst.clone(),
        sc_order: doc.sc_order.clone(),
        sp_axis: None,
    };
    let structured = if inst.rule() == Rule::Diverse && is_unanimous(inst) {
        Some(Algorithm::Unanimous)
    } else if is_strongly_unanimous(inst) {
        Some(Algorithm::Su)
    } else if inst.rule() == Rule::Diverse
        && doc.sc_order.as_deref().map(|s| verify_single_crossing(inst, s)).transpose()? == Some(true)
    {
        Some(Algorithm::Sc)
    } else {
        if doc.sc_order.is_some() && inst.rule() == Rule::Diverse {
            notes.push("supplied sc_order does not verify; ignoring it".into());
        }
        None
    };

    let mut outcome = if let Some(algo) = structured {
        run(algo, &local, options)?
    } else {
        // Voters with identical rankings merge without changing the optimum.
        let (merged, _) = merge_identical_voters(inst);
        if merged.num_voters() < inst.num_voters() {
            notes.push(format!("merged {} voters into {}", inst.num_voters(), merged.num_voters()));
        }
        let merged_doc = Document::new(merged);
        let mut candidates: Vec<(u64, Algorithm)> = [
            Algorithm::SingleVoter,
            Algorithm::Kpcover,
            Algorithm::Xp,
            Algorithm::Matching,
            Algorithm::Oracle,
        ]
        .into_iter()
        .filter_map(|a| estimate(a, &merged_doc.instance).map(|e| (e, a)))
        .collect();
        candidates.sort();
        let mut last = None;
        let mut chosen = None;
        for (_, algo) in candidates {
            match run(algo, &merged_doc, options) {
                Ok(out) => {
                    chosen = Some(out);
                    break;
                }
                Err(e @ Error::Size { .. }) => {
                    if let Error::Size { cap, .. } = &e {
                        notes.push(format!("{algo} skipped: cap `{cap}`"));
                    }
                    last = Some(e);
                }
                Err(e) => return Err(e),
            }
        }
        match (chosen, last) {
            (Some(out), _) => out,
            (None, Some(e)) => return Err(e),
            (None, None) => unreachable!("the oracle is always a candidate"),
        }
    };

    // Back to the original item indices.
    if let Some(bundle) = outcome.solution.witness.take() {
        let lifted = original.bundle(normalized.lift_items(&bundle.items))?;
        outcome.solution = Solution {
            value: lifted.value,
            witness: Some(lifted),
            states: outcome.solution.states,
        };
    }
    notes.append(&mut outcome.notes);
    outcome.notes = notes;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenParams, Kind};

    fn doc(kind: Kind, rule: Rule, lambda: usize, seed: u64) -> Document {
        let mut p = GenParams::new(kind, 3, 5, seed);
        p.rule = rule;
        p.lambda = lambda;
        generate(&p).unwrap().into()
    }

    #[test]
    fn auto_takes_shortcuts() {
        let su = doc(Kind::Su, Rule::Median, 2, 3);
        let r = solve(&su, &SolveOptions::default()).unwrap();
        assert!(matches!(r.algorithm, Algorithm::Su | Algorithm::Unanimous), "{:?}", r.algorithm);

        let sc = doc(Kind::Sc, Rule::Diverse, 1, 4);
        let r = solve(&sc, &SolveOptions::default()).unwrap();
        assert!(matches!(r.algorithm, Algorithm::Sc | Algorithm::Unanimous));
    }

    #[test]
    fn auto_agrees_with_oracle() {
        for seed in 0..10 {
            for (rule, lambda) in [(Rule::Diverse, 1), (Rule::Median, 2), (Rule::Best, 2)] {
                let d = doc(Kind::General, rule, lambda, seed);
                let auto = solve(&d, &SolveOptions::default()).unwrap();
                let oracle = solve(&d, &SolveOptions { algorithm: Algorithm::Oracle, ..Default::default() }).unwrap();
                assert_eq!(auto.value, oracle.value, "seed {seed} {rule}");
            }
        }
    }

    #[test]
    fn incompatible_algorithm_is_rejected() {
        let d = doc(Kind::General, Rule::Median, 1, 0);
        let opts = SolveOptions { algorithm: Algorithm::Polymul, ..Default::default() };
        assert!(matches!(solve(&d, &opts), Err(Error::Input(_))));
    }

    #[test]
    fn fptas_reports_certificate() {
        let d = doc(Kind::Sc, Rule::Diverse, 1, 9);
        let opts = SolveOptions {
            algorithm: Algorithm::Fptas,
            epsilon: Some(parse_epsilon("1/2").unwrap()),
            ..Default::default()
        };
        let r = solve(&d, &opts).unwrap();
        assert!(r.certificate.unwrap().contains("1 + 1/2"));
    }

    #[test]
    fn epsilon_parsing() {
        assert_eq!(parse_epsilon("1/10").unwrap(), Ratio::new(1, 10));
        assert_eq!(parse_epsilon("1").unwrap(), Ratio::from_integer(1));
        assert!(parse_epsilon("0").is_err());
        assert!(parse_epsilon("3/2").is_err());
        assert!(parse_epsilon("half").is_err());
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
    }
}
