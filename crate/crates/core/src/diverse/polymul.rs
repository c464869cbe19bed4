//! Diverse-rule optimum by multiplying set-indexed polynomials.
//!
//! A polynomial keyed by `(s, alpha, beta)` is a flag array over the `2^n`
//! voter subsets: flag `i` says that the voter set with bitmask `i` can be
//! split into parts, each served by one item, with total utility `alpha`
//! and total item cost `beta`. Multiplying two such arrays adds indices as
//! integers; keeping only results of popcount `s1 + s2` keeps exactly the
//! disjoint unions, since any shared voter produces a carry.

use std::collections::BTreeMap;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{Instance, Rule, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyKey {
    /// Number of voters covered; every stored index has this popcount.
    pub s: usize,
    pub alpha: u64,
    pub beta: u64,
}

/// A 0/1 polynomial in `2^n` monomials, one per voter subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedPolynomial {
    n: usize,
    pub key: PolyKey,
    words: Vec<u64>,
}

impl IndexedPolynomial {
    pub fn new(n: usize, key: PolyKey) -> Self {
        IndexedPolynomial {
            n,
            key,
            words: vec![0; (1usize << n).div_ceil(64)],
        }
    }

    pub fn from_indices(n: usize, key: PolyKey, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::new(n, key);
        for i in indices {
            p.set(i);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < 1 << self.n, "index {i} out of range");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        i < 1 << self.n && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the non-zero coefficients, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rest = bits;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    w * 64 + b
                })
            })
        })
    }

    fn or_assign(&mut self, other: &IndexedPolynomial) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductMethod {
    /// Pairs of non-zero coefficients, `O(|A| * |B|)`.
    #[default]
    Schoolbook,
    /// Floating-point convolution of the full arrays, `O(2^n * n)`.
    Fft,
}

/// Product of `a` and `b` restricted to monomials of popcount `s`, with
/// every surviving coefficient replaced by one.
pub fn poly_product_project(a: &IndexedPolynomial, b: &IndexedPolynomial, s: usize) -> IndexedPolynomial {
    poly_product_project_with(a, b, s, ProductMethod::Schoolbook)
}

pub fn poly_product_project_with(
    a: &IndexedPolynomial,
    b: &IndexedPolynomial,
    s: usize,
    method: ProductMethod,
) -> IndexedPolynomial {
    assert_eq!(a.n, b.n, "polynomials over different voter sets");
    let n = a.n;
    let key = PolyKey {
        s,
        alpha: a.key.alpha + b.key.alpha,
        beta: a.key.beta + b.key.beta,
    };
    let mut out = IndexedPolynomial::new(n, key);
    let size = 1usize << n;
    let keep = |i: usize| i < size && i.count_ones() as usize == s;
    match method {
        ProductMethod::Schoolbook => {
            let right: Vec<usize> = b.indices().collect();
            for i in a.indices() {
                for &j in &right {
                    if keep(i + j) {
                        out.set(i + j);
                    }
                }
            }
        }
        ProductMethod::Fft => {
            let len = 2 * size;
            let mut planner = FftPlanner::<f64>::new();
            let forward = planner.plan_fft_forward(len);
            let inverse = planner.plan_fft_inverse(len);
            let load = |p: &IndexedPolynomial| {
                let mut buf = vec![Complex::new(0.0, 0.0); len];
                for i in p.indices() {
                    buf[i].re = 1.0;
                }
                buf
            };
            let (mut x, mut y) = (load(a), load(b));
            forward.process(&mut x);
            forward.process(&mut y);
            for (u, v) in x.iter_mut().zip(&y) {
                *u *= v;
            }
            inverse.process(&mut x);
            for (i, c) in x.iter().enumerate() {
                if (c.re / len as f64).round() >= 1.0 && keep(i) {
                    out.set(i);
                }
            }
        }
    }
    out
}

type Layer = BTreeMap<PolyKey, IndexedPolynomial>;

/// Optimal diverse-rule value; no witness.
pub fn solve_dk_polymul(instance: &Instance, caps: &Caps) -> Result<Solution> {
    solve_dk_polymul_with(instance, caps, ProductMethod::Schoolbook, &mut |_, _| {})
}

/// As [`solve_dk_polymul`], calling `inspect(j, poly)` for every non-zero
/// polynomial stored for `j` parts.
pub fn solve_dk_polymul_with(
    instance: &Instance,
    caps: &Caps,
    method: ProductMethod,
    inspect: &mut dyn FnMut(usize, &IndexedPolynomial),
) -> Result<Solution> {
    if instance.rule() != Rule::Diverse {
        return Err(Error::input("polynomial multiplication handles the diverse rule"));
    }
    let n = instance.num_voters();
    Error::check_cap("polymul_max_voters", caps.polymul_max_voters as u64, n as u64)?;
    let items: Vec<usize> = (0..instance.num_items()).filter(|&p| instance.is_affordable(p)).collect();
    let c_max = items.iter().map(|&p| instance.cost(p)).max().unwrap_or(0);
    let budget = instance.budget().min(c_max.saturating_mul(n as u64));
    let u_bar = instance.stats().u_bar;
    let cells = (n as u64)
        .saturating_mul(u_bar + 1)
        .saturating_mul(budget + 1)
        .saturating_mul(1 << n);
    Error::check_cap("polymul_max_cells", caps.polymul_max_cells, cells)?;

    let full = (1usize << n) - 1;
    let mut first: Layer = BTreeMap::new();
    for &p in &items {
        for y in 1..=full {
            let alpha = (0..n).filter(|&v| y >> v & 1 == 1).map(|v| instance.util(v, p)).sum();
            let key = PolyKey {
                s: y.count_ones() as usize,
                alpha,
                beta: instance.cost(p),
            };
            first.entry(key).or_insert_with(|| IndexedPolynomial::new(n, key)).set(y);
        }
    }

    let mut best: Option<u64> = None;
    let mut states = 0u64;
    let mut record = |j: usize, layer: &Layer, best: &mut Option<u64>| {
        for (key, poly) in layer {
            inspect(j, poly);
            states += 1;
            if key.s == n && poly.get(full) {
                *best = (*best).max(Some(key.alpha));
            }
        }
    };
    record(1, &first, &mut best);

    let mut current = first.clone();
    for j in 2..=n {
        let mut next: Layer = BTreeMap::new();
        for (ka, a) in current.iter().filter(|(k, _)| k.s < n) {
            for (kb, b) in first.range(..PolyKey { s: n - ka.s + 1, alpha: 0, beta: 0 }) {
                let s = ka.s + kb.s;
                if ka.beta + kb.beta > budget {
                    continue;
                }
                let prod = poly_product_project_with(a, b, s, method);
                if prod.is_zero() {
                    continue;
                }
                match next.get_mut(&prod.key) {
                    Some(slot) => slot.or_assign(&prod),
                    None => {
                        next.insert(prod.key, prod);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        record(j, &next, &mut best);
        current = next;
    }
    Ok(Solution::value_only(best.unwrap_or(0), states))
}
