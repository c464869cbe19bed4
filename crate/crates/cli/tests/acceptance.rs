//! Acceptance suite: nine criteria, each printed as one PASS/FAIL line.
//! Runs without the libtest harness so the lines always reach the terminal.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mak_core::diverse::{
    poly_product_project, poly_product_project_with, solve_dk_fptas, solve_dk_kpcover, solve_dk_polymul,
    solve_dk_polymul_with, solve_dk_sc_unary, IndexedPolynomial, PolyKey, ProductMethod,
};
use mak_core::generate::{generate, GenParams, Kind};
use mak_core::median::{lift_diverse_to_median, solve_buk_single_voter, solve_matching_fpt, solve_muk_xp};
use mak_core::profiles::{merge_identical_voters, verify_single_crossing};
use mak_core::wmsc::{solve_wmsc, WmscInstance};
use mak_core::{Caps, Indexing, Instance, Rule};

/// Plain-data instance; the reference evaluation below reads only this.
#[derive(Debug, Clone)]
struct Raw {
    costs: Vec<u64>,
    utils: Vec<Vec<u64>>,
    budget: u64,
    rule: Rule,
    lambda: usize,
}

impl Raw {
    fn from_instance(inst: &Instance) -> Raw {
        Raw {
            costs: inst.costs().to_vec(),
            utils: (0..inst.num_voters()).map(|v| inst.utils(v).to_vec()).collect(),
            budget: inst.budget(),
            rule: inst.rule(),
            lambda: inst.lambda(),
        }
    }

    fn instance(&self) -> Instance {
        let items = self.costs.iter().enumerate().map(|(i, &c)| (format!("p{i}"), c)).collect();
        let voters = self.utils.iter().enumerate().map(|(i, u)| (format!("v{i}"), u.clone())).collect();
        Instance::new(items, voters, self.budget, self.rule, self.lambda, None).expect("valid instance")
    }

    fn satisfaction(&self, row: &[u64], bundle: &[usize]) -> u64 {
        let mut vals: Vec<u64> = bundle.iter().map(|&p| row[p]).collect();
        vals.sort_unstable_by(|a, b| b.cmp(a));
        match self.rule {
            Rule::Diverse => vals.first().copied().unwrap_or(0),
            Rule::Median => vals.get(self.lambda - 1).copied().unwrap_or(0),
            Rule::Best => vals.iter().take(self.lambda).sum(),
        }
    }

    /// Best total satisfaction over every affordable subset.
    fn optimum(&self) -> u64 {
        let m = self.costs.len();
        let mut best = 0;
        for mask in 0u32..1 << m {
            let bundle: Vec<usize> = (0..m).filter(|&p| mask >> p & 1 == 1).collect();
            if bundle.iter().map(|&p| self.costs[p]).sum::<u64>() > self.budget {
                continue;
            }
            let total = self.utils.iter().map(|row| self.satisfaction(row, &bundle)).sum();
            best = best.max(total);
        }
        best
    }
}

fn random_raw(rng: &mut ChaCha8Rng, n: usize, m: usize, max_cost: u64, max_util: u64, rule: Rule, lambda: usize) -> Raw {
    Raw {
        costs: (0..m).map(|_| rng.gen_range(1..=max_cost)).collect(),
        utils: (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..=max_util)).collect()).collect(),
        budget: rng.gen_range(0..=10),
        rule,
        lambda,
    }
}

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new() -> Self {
        Verdict {
            ok: true,
            detail: String::new(),
        }
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond && self.ok {
            self.ok = false;
            self.detail = what();
        }
    }
}

fn criterion_1() -> Verdict {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut v = Verdict::new();
    let start = Instant::now();
    for case in 0..300 {
        let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=6));
        let lambda = rng.gen_range(1..=3);
        let raw = random_raw(&mut rng, n, m, 5, 6, Rule::Median, lambda);
        let inst = raw.instance();
        let want = raw.optimum();
        let xp = solve_muk_xp(&inst, &caps).map(|s| s.value);
        let mt = solve_matching_fpt(&inst, &caps).map(|s| s.value);
        v.check(xp == Ok(want) && mt == Ok(want), || {
            format!("case {case}: oracle {want}, xp {xp:?}, matching {mt:?} on {raw:?}")
        });
    }
    v.check(start.elapsed() < Duration::from_secs(300), || "took over 5 minutes".into());
    v
}

fn criterion_2() -> Verdict {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut v = Verdict::new();
    for case in 0..300 {
        let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=6));
        let lambda = rng.gen_range(1..=3);
        let raw = random_raw(&mut rng, n, m, 5, 6, Rule::Best, lambda);
        let want = raw.optimum();
        let got = solve_matching_fpt(&raw.instance(), &caps).map(|s| s.value);
        v.check(got == Ok(want), || format!("matching case {case}: oracle {want}, got {got:?} on {raw:?}"));
    }
    for case in 0..300 {
        let m = rng.gen_range(1..=12);
        let lambda = rng.gen_range(1..=5);
        let raw = random_raw(&mut rng, 1, m, 5, 6, Rule::Best, lambda);
        let want = raw.optimum();
        let inst = raw.instance();
        for ix in [Indexing::Cost, Indexing::Profit] {
            let got = solve_buk_single_voter(&inst, ix, &caps).map(|s| s.value);
            v.check(got == Ok(want), || {
                format!("single-voter case {case} {ix:?}: oracle {want}, got {got:?} on {raw:?}")
            });
        }
    }
    v
}

fn sc_instance(rng: &mut ChaCha8Rng, n: usize, m: usize, max_util: u64) -> (Instance, Vec<usize>) {
    let mut p = GenParams::new(Kind::Sc, n, m, rng.gen());
    p.max_util = max_util;
    p.max_cost = 5;
    p.budget = rng.gen_range(1..=12);
    let g = generate(&p).expect("generator");
    (g.instance, g.sc_order.expect("order"))
}

fn criterion_3() -> Verdict {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut v = Verdict::new();
    for case in 0..300 {
        let (n, m) = (rng.gen_range(1..=6), rng.gen_range(1..=8));
        let raw = random_raw(&mut rng, n, m, 5, 6, Rule::Diverse, 1);
        let inst = raw.instance();
        let want = raw.optimum();
        let kp = solve_dk_kpcover(&inst, Indexing::Profit, &caps).map(|s| s.value);
        let kc = solve_dk_kpcover(&inst, Indexing::Cost, &caps).map(|s| s.value);
        let pm = solve_dk_polymul(&inst, &caps).map(|s| s.value);
        v.check(kp == Ok(want) && kc == Ok(want) && pm == Ok(want), || {
            format!("case {case}: oracle {want}, kpcover {kp:?}/{kc:?}, polymul {pm:?} on {raw:?}")
        });
    }
    for case in 0..300 {
        let (n, m) = (rng.gen_range(1..=6), rng.gen_range(1..=8));
        let (inst, sigma) = sc_instance(&mut rng, n, m, 20);
        let raw = Raw::from_instance(&inst);
        let want = raw.optimum();
        v.check(verify_single_crossing(&inst, &sigma) == Ok(true), || format!("sc case {case}: order fails"));
        for ix in [Indexing::Cost, Indexing::Profit] {
            let got = solve_dk_sc_unary(&inst, &sigma, ix, &caps).map(|s| s.value);
            v.check(got == Ok(want), || format!("sc case {case} {ix:?}: oracle {want}, got {got:?} on {raw:?}"));
        }
    }
    v
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut v = Verdict::new();
    for case in 0..200 {
        let n = rng.gen_range(1..=3);
        let f = rng.gen_range(0..=6);
        let k = rng.gen_range(1..=3);
        let sets: Vec<u64> = (0..f).map(|_| rng.gen_range(0..1u64 << n)).collect();
        let costs: Vec<u64> = (0..f).map(|_| rng.gen_range(1..=9)).collect();
        let mut want: Option<u64> = None;
        for mask in 0u32..1 << f {
            let chosen: Vec<usize> = (0..f).filter(|&j| mask >> j & 1 == 1).collect();
            let covered = (0..n).all(|e| chosen.iter().filter(|&&j| sets[j] >> e & 1 == 1).count() >= k);
            if covered {
                let c = chosen.iter().map(|&j| costs[j]).sum();
                want = Some(want.map_or(c, |w: u64| w.min(c)));
            }
        }
        let wmsc = WmscInstance {
            universe: n,
            sets: sets.clone(),
            set_costs: costs.clone(),
            budget: u64::MAX,
            multiplicity: k,
        };
        let got = solve_wmsc(&wmsc, u64::MAX).map(|s| s.map(|s| s.total_cost));
        v.check(got == Ok(want), || {
            format!("case {case}: brute {want:?}, dp {got:?}, sets {sets:?} costs {costs:?} k {k}")
        });
    }
    v
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut v = Verdict::new();
    for case in 0..100 {
        let (rule, lambda) = match case % 3 {
            0 => (Rule::Diverse, 1),
            1 => (Rule::Median, rng.gen_range(1..=3)),
            _ => (Rule::Best, rng.gen_range(1..=3)),
        };
        let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=7));
        let mut raw = random_raw(&mut rng, n, m, 5, 6, rule, lambda);
        for _ in 0..rng.gen_range(1..=3) {
            let src = raw.utils[rng.gen_range(0..n)].clone();
            let (a, b) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
            raw.utils.push(src.iter().map(|u| u * a + b).collect());
        }
        let inst = raw.instance();
        let (merged, _) = merge_identical_voters(&inst);
        let want = raw.optimum();
        let got = Raw::from_instance(&merged).optimum();
        v.check(merged.num_voters() <= n, || format!("case {case}: duplicates not merged"));
        v.check(got == want, || format!("case {case}: original {want}, merged {got} on {raw:?}"));
    }
    v
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut v = Verdict::new();
    for case in 0..100 {
        let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=7));
        let raw = random_raw(&mut rng, n, m, 5, 6, Rule::Diverse, 1);
        let inst = raw.instance();
        let want = raw.optimum();
        for lambda in [2, 3] {
            let lifted = lift_diverse_to_median(&inst, lambda).expect("lift");
            let got = Raw::from_instance(&lifted).optimum();
            v.check(got == want, || format!("case {case} lambda {lambda}: diverse {want}, lifted {got} on {raw:?}"));
        }
    }
    for case in 0..100 {
        let (n, m) = (rng.gen_range(1..=6), rng.gen_range(1..=7));
        let (inst, sigma) = sc_instance(&mut rng, n, m, 20);
        for lambda in [2, 3] {
            let lifted = lift_diverse_to_median(&inst, lambda).expect("lift");
            v.check(verify_single_crossing(&lifted, &sigma) == Ok(true), || {
                format!("sc case {case} lambda {lambda}: lifted profile loses the order")
            });
        }
    }
    v
}

fn criterion_7() -> Verdict {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut v = Verdict::new();
    let mut slowest = Duration::ZERO;
    for case in 0..100 {
        let (n, m) = (rng.gen_range(1..=6), rng.gen_range(1..=10));
        let (inst, sigma) = sc_instance(&mut rng, n, m, 10_000);
        let opt = Raw::from_instance(&inst).optimum();
        for eps in [Ratio::new(1u64, 10), Ratio::new(1, 2), Ratio::new(1, 1)] {
            let start = Instant::now();
            let r = solve_dk_fptas(&inst, &sigma, eps, &caps);
            let took = start.elapsed();
            slowest = slowest.max(took);
            let Ok(r) = r else {
                v.check(false, || format!("case {case} eps {eps}: {r:?}"));
                continue;
            };
            let got = r.solution.value;
            let lower = Ratio::from_integer(got) * (Ratio::from_integer(1) + eps) >= Ratio::from_integer(opt);
            v.check(lower && got <= opt, || format!("case {case} eps {eps}: opt {opt}, got {got}"));
            v.check(took < Duration::from_secs(1), || format!("case {case} eps {eps}: {took:?}"));
        }
    }
    if v.ok {
        v.detail = format!("slowest {slowest:?}");
    }
    v
}

fn criterion_8() -> Verdict {
    let n = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut v = Verdict::new();
    let with_weight = |rng: &mut ChaCha8Rng, s: usize| -> Vec<usize> {
        (0..1usize << n)
            .filter(|i| i.count_ones() as usize == s)
            .filter(|_| rng.gen_bool(0.3))
            .collect()
    };
    for case in 0..50 {
        let s1 = rng.gen_range(1..=n - 1);
        let s2 = rng.gen_range(1..=n - s1);
        let (ia, ib) = (with_weight(&mut rng, s1), with_weight(&mut rng, s2));
        let key = |s| PolyKey { s, alpha: 0, beta: 0 };
        let a = IndexedPolynomial::from_indices(n, key(s1), ia.iter().copied());
        let b = IndexedPolynomial::from_indices(n, key(s2), ib.iter().copied());
        let mut want: Vec<usize> = ia
            .iter()
            .flat_map(|&x| ib.iter().filter(move |&&y| x & y == 0).map(move |&y| x | y))
            .collect();
        want.sort_unstable();
        want.dedup();
        let plain: Vec<usize> = poly_product_project(&a, &b, s1 + s2).indices().collect();
        let fast: Vec<usize> = poly_product_project_with(&a, &b, s1 + s2, ProductMethod::Fft).indices().collect();
        v.check(plain == want && fast == want, || format!("pair {case}: product differs from pairwise check"));
    }
    let caps = Caps::default();
    let mut stored = 0usize;
    for case in 0..5 {
        let raw = random_raw(&mut rng, n, 6, 5, 6, Rule::Diverse, 1);
        let mut bad = None;
        let got = solve_dk_polymul_with(&raw.instance(), &caps, ProductMethod::Schoolbook, &mut |j, p| {
            stored += 1;
            if let Some(i) = p.indices().find(|i| i.count_ones() as usize != p.key.s) {
                bad.get_or_insert((j, p.key, i));
            }
        })
        .map(|s| s.value);
        v.check(bad.is_none(), || format!("solve {case}: index weight mismatch {bad:?}"));
        v.check(got == Ok(raw.optimum()), || format!("solve {case}: value {got:?}"));
    }
    if v.ok {
        v.detail = format!("{stored} stored polynomials checked");
    }
    v
}

fn criterion_9() -> Verdict {
    let mut v = Verdict::new();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_mak"))
            .args(["bench", "--seed", "9", "--per-group", "6"])
            .output()
            .expect("run mak bench")
    };
    let (a, b) = (run(), run());
    v.check(a.status.success() && b.status.success(), || {
        format!("bench failed: {}", String::from_utf8_lossy(&a.stderr))
    });
    v.check(!a.stdout.is_empty() && a.stdout == b.stdout, || "outputs differ".into());
    v
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("median rule: xp and matching equal the oracle", criterion_1),
        ("best rule: matching and single-voter table equal the oracle", criterion_2),
        ("diverse rule: kpcover, polymul and single-crossing table equal the oracle", criterion_3),
        ("multicover table equals subfamily enumeration", criterion_4),
        ("merging identical voters keeps the optimum", criterion_5),
        ("lifting keeps the optimum and the crossing order", criterion_6),
        ("approximation bounds and per-instance time", criterion_7),
        ("polynomial product and index weights", criterion_8),
        ("bench output is reproducible", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let verdict = run();
        let status = if verdict.ok { "PASS" } else { "FAIL" };
        let detail = if verdict.detail.is_empty() { String::new() } else { format!(" ({})", verdict.detail) };
        println!("[criterion {}] {status}: {name} in {:.2?}{detail}", k + 1, start.elapsed());
        failed += usize::from(!verdict.ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
