//! Exact counting of pattern-avoiding permutations.
//!
//! [`count_avoiders`] handles arbitrary pattern sets by depth-first
//! generation of avoiding prefixes. The monotone, `A_k` and involution
//! counters go through Young tableau counts instead and reach far larger
//! lengths.

use std::fmt;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Matcher, Permutation, PatternSet};
use crate::tableaux::{syt_count, syt_counts_bounded, Shape};

/// An exact counting sequence `a_0, a_1, ..., a_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerSeries {
    pub label: String,
    #[serde(with = "decimal_terms")]
    pub terms: Vec<BigUint>,
}

mod decimal_terms {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(terms: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(terms.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.trim().parse().map_err(|_| D::Error::custom(format!("not a non-negative integer: {t:?}"))))
            .collect()
    }
}

impl IntegerSeries {
    pub fn new(label: impl Into<String>, terms: Vec<BigUint>) -> Self {
        Self {
            label: label.into(),
            terms,
        }
    }

    pub fn from_u64(label: impl Into<String>, terms: &[u64]) -> Self {
        Self::new(label, terms.iter().map(|&t| BigUint::from(t)).collect())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The first `len` terms.
    pub fn truncated(&self, len: usize) -> Self {
        Self::new(self.label.clone(), self.terms[..len.min(self.len())].to_vec())
    }

    /// `n,a_n` rows under a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,a_n\n");
        for (n, t) in self.terms.iter().enumerate() {
            out.push_str(&format!("{n},{t}\n"));
        }
        out
    }

    /// Parses the CSV layout written by [`IntegerSeries::to_csv`]. Lines
    /// starting with `#` and a non-numeric header are skipped; indices must
    /// run `0, 1, 2, ...`.
    pub fn from_csv(label: impl Into<String>, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') || line.starts_with("n,") {
                continue;
            }
            let bad = || Error::Parse(line.to_string());
            let (n, a) = line.split_once(',').ok_or_else(bad)?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if n != terms.len() {
                return Err(bad());
            }
            terms.push(a.trim().parse().map_err(|_| bad())?);
        }
        Ok(Self::new(label, terms))
    }
}

/// Crude estimate of `lim a_n^(1/n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRate {
    pub value: f64,
    /// Spread (max - min) of the last few extrapolated ratios.
    pub dispersion: f64,
}

impl fmt::Display for GrowthRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} (+/- {:.2e})", self.value, self.dispersion)
    }
}

/// Above this many projected DFS nodes [`count_avoiders`] logs a warning.
pub const DEFAULT_WARN_NODES: f64 = 1e10;

/// A pattern `12..(k-1)` with one more entry appended, which is the `i`-th
/// smallest. Every member of `A_k` has this form, as do all monotone
/// increasing patterns.
#[derive(Clone, Copy, Debug)]
struct RunThenLast {
    k: usize,
    i: usize,
}

/// Decides, for an avoiding prefix, which new final entries keep it
/// avoiding.
#[derive(Clone, Debug)]
struct ExtensionChecker {
    run_patterns: Vec<RunThenLast>,
    generic: Vec<Matcher>,
}

impl ExtensionChecker {
    fn new(set: &PatternSet) -> Self {
        let mut run_patterns = Vec::new();
        let mut generic = Vec::new();
        for q in set.patterns() {
            let e = q.entries();
            let k = e.len();
            if k >= 1 && e[..k - 1].windows(2).all(|w| w[0] < w[1]) {
                run_patterns.push(RunThenLast { k, i: e[k - 1] as usize });
            } else {
                generic.push(Matcher::new(e));
            }
        }
        Self { run_patterns, generic }
    }

    /// Bit `v - 1` set iff appending an entry of relative value `v`
    /// (`1..=m+1`) to `values` avoids every pattern. `rank[a]` is the length
    /// of the longest increasing subsequence ending at position `a`.
    fn allowed(&self, values: &[u8], rank: &[u8]) -> u64 {
        let m = values.len();
        let all = if m + 1 >= 64 { u64::MAX } else { (1u64 << (m + 1)) - 1 };
        let mut forbidden = 0u64;

        if !self.run_patterns.is_empty() {
            // Longest increasing subsequence starting at each position.
            let mut rise = vec![1u8; m];
            for a in (0..m).rev() {
                for b in a + 1..m {
                    if values[b] > values[a] && rise[b] + 1 > rise[a] {
                        rise[a] = rise[b] + 1;
                    }
                }
            }
            for pat in &self.run_patterns {
                forbidden |= run_pattern_forbidden(pat, values, rank, &rise);
            }
        }

        let mut allowed = all & !forbidden;
        if !self.generic.is_empty() && allowed != 0 {
            let mut child = vec![0u8; m + 1];
            let mut bits = allowed;
            while bits != 0 {
                let v = bits.trailing_zeros() as u8 + 1;
                bits &= bits - 1;
                extend_into(values, v, &mut child);
                if self.generic.iter().any(|q| q.occurs(&child, true)) {
                    allowed &= !(1u64 << (v - 1));
                }
            }
        }
        allowed
    }
}

/// Forbidden final values for one `RunThenLast` pattern.
///
/// The new entry `x` completes an occurrence iff the prefix has an
/// increasing subsequence of length `k - 1` with exactly `i - 1` entries
/// below `x`. Splitting that subsequence at `x`, this means some entry `a`
/// below `x` ends an increasing run of length `i - 1` and some later entry
/// `b` above `x` starts one of length `k - i`. Relative value `v` puts `x`
/// between old values `v - 1` and `v`, so such a pair forbids
/// `v` in `values[a] + 1 ..= values[b]`.
fn run_pattern_forbidden(pat: &RunThenLast, values: &[u8], rank: &[u8], rise: &[u8]) -> u64 {
    let m = values.len();
    let (below, above) = (pat.i - 1, pat.k - pat.i);
    let range = |lo: usize, hi: usize| -> u64 {
        // bits lo-1 ..= hi-1 for v in lo..=hi
        if lo > hi {
            return 0;
        }
        let upper = if hi >= 64 { u64::MAX } else { (1u64 << hi) - 1 };
        upper & !((1u64 << (lo - 1)) - 1)
    };
    if pat.k == 1 {
        return range(1, m + 1);
    }
    if below == 0 {
        let top = (0..m).filter(|&b| rise[b] as usize >= above).map(|b| values[b] as usize).max();
        return top.map_or(0, |t| range(1, t));
    }
    if above == 0 {
        let bottom = (0..m).filter(|&a| rank[a] as usize >= below).map(|a| values[a] as usize).min();
        return bottom.map_or(0, |b| range(b + 1, m + 1));
    }
    let mut forbidden = 0u64;
    let mut best_after = 0usize;
    for a in (0..m).rev() {
        if rank[a] as usize >= below && best_after > values[a] as usize {
            forbidden |= range(values[a] as usize + 1, best_after);
        }
        if rise[a] as usize >= above {
            best_after = best_after.max(values[a] as usize);
        }
    }
    forbidden
}

/// Appends an entry of relative value `v`, shifting larger entries up.
fn extend_into(values: &[u8], v: u8, child: &mut [u8]) {
    for (c, &x) in child.iter_mut().zip(values) {
        *c = if x >= v { x + 1 } else { x };
    }
    child[values.len()] = v;
}

/// One avoiding prefix in the search tree.
#[derive(Clone, Debug)]
struct Node {
    values: Vec<u8>,
    rank: Vec<u8>,
}

impl Node {
    fn root() -> Self {
        Self {
            values: Vec::new(),
            rank: Vec::new(),
        }
    }

    fn child(&self, v: u8) -> Self {
        let m = self.values.len();
        let mut values = vec![0u8; m + 1];
        extend_into(&self.values, v, &mut values);
        let new_rank = 1 + (0..m)
            .filter(|&a| self.values[a] < v)
            .map(|a| self.rank[a])
            .max()
            .unwrap_or(0);
        let mut rank = self.rank.clone();
        rank.push(new_rank);
        Self { values, rank }
    }

    fn children(&self, allowed: u64) -> impl Iterator<Item = Node> + '_ {
        let mut bits = allowed;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as u8 + 1;
            bits &= bits - 1;
            Some(self.child(v))
        })
    }
}

/// Counts avoiders of every length below `node` (inclusive) into `counts`.
fn count_below(checker: &ExtensionChecker, node: &Node, n_max: usize, counts: &mut [u128]) {
    let m = node.values.len();
    if m == n_max {
        return;
    }
    let allowed = checker.allowed(&node.values, &node.rank);
    counts[m + 1] += u128::from(allowed.count_ones());
    if m + 1 == n_max {
        return;
    }
    for child in node.children(allowed) {
        count_below(checker, &child, n_max, counts);
    }
}

fn collect_below(checker: &ExtensionChecker, node: Node, n: usize, out: &mut Vec<Vec<u8>>) {
    if node.values.len() == n {
        out.push(node.values);
        return;
    }
    let allowed = checker.allowed(&node.values, &node.rank);
    for child in node.children(allowed) {
        collect_below(checker, child, n, out);
    }
}

/// Expands the tree breadth-first until the frontier is wide enough to
/// split across threads. Returns the frontier and the counts of every
/// level above it.
fn frontier(checker: &ExtensionChecker, n_max: usize, width: usize) -> (Vec<Node>, Vec<u128>) {
    let mut counts = vec![0u128; n_max + 1];
    counts[0] = 1;
    let mut level = vec![Node::root()];
    while level.len() < width && level[0].values.len() + 2 < n_max {
        let next: Vec<Node> = level
            .iter()
            .flat_map(|node| {
                let allowed = checker.allowed(&node.values, &node.rank);
                node.children(allowed).collect::<Vec<_>>()
            })
            .collect();
        counts[level[0].values.len() + 1] = next.len() as u128;
        if next.is_empty() {
            return (next, counts);
        }
        level = next;
    }
    (level, counts)
}

/// Longest length the DFS counters accept.
pub const MAX_DFS_LENGTH: usize = 63;

/// Upper estimate of the nodes the DFS visits up to length `n_max`: at
/// length `m` there are at most `m!` prefixes, and a pattern of length `k`
/// is avoided by at most roughly `(k-1)^(2m)` of them.
pub fn projected_nodes(set: &PatternSet, n_max: usize) -> f64 {
    let shortest = set.patterns().iter().map(Permutation::len).min();
    let mut total = 0.0;
    let mut fact = 1.0f64;
    for m in 0..=n_max {
        if m > 0 {
            fact *= m as f64;
        }
        let bound = shortest.map_or(f64::INFINITY, |k| ((k as f64 - 1.0).powi(2)).powi(m as i32));
        total += fact.min(bound);
    }
    total
}

/// `av_n(S)` for `0 <= n <= n_max` by pruned prefix generation.
pub fn count_avoiders(set: &PatternSet, n_max: usize) -> IntegerSeries {
    count_avoiders_with(set, n_max, DEFAULT_WARN_NODES)
}

/// [`count_avoiders`] with a custom node-count warning threshold.
///
/// # Panics
///
/// If `n_max` exceeds 63, beyond any feasible enumeration.
pub fn count_avoiders_with(set: &PatternSet, n_max: usize, warn_nodes: f64) -> IntegerSeries {
    assert!(n_max <= MAX_DFS_LENGTH, "enumeration length {n_max} is out of reach");
    let projected = projected_nodes(set, n_max);
    if projected > warn_nodes {
        log::warn!(
            "counting Av({}) up to n = {n_max} may visit ~{projected:.2e} nodes",
            set.label()
        );
    }
    let checker = ExtensionChecker::new(set);
    let (front, mut counts) = frontier(&checker, n_max, 256);
    if let Some(depth) = front.first().map(|node| node.values.len()) {
        counts[depth] = front.len() as u128;
        let below = front
            .par_iter()
            .map(|node| {
                let mut local = vec![0u128; n_max + 1];
                count_below(&checker, node, n_max, &mut local);
                local
            })
            .reduce(
                || vec![0u128; n_max + 1],
                |mut acc, local| {
                    acc.iter_mut().zip(local).for_each(|(a, b)| *a += b);
                    acc
                },
            );
        for (c, b) in counts.iter_mut().zip(below).skip(depth + 1) {
            *c += b;
        }
    }
    IntegerSeries::new(
        format!("Av({})", set.label()),
        counts.into_iter().map(BigUint::from).collect(),
    )
}

/// Every permutation of length `n` avoiding `set`, in lexicographic order.
pub fn avoiders(set: &PatternSet, n: usize) -> Vec<Permutation> {
    assert!(n <= MAX_DFS_LENGTH, "enumeration length {n} is out of reach");
    let checker = ExtensionChecker::new(set);
    let (front, _) = frontier(&checker, n, 256);
    let mut found: Vec<Vec<u8>> = front
        .into_par_iter()
        .flat_map_iter(|node| {
            let mut out = Vec::new();
            collect_below(&checker, node, n, &mut out);
            out
        })
        .collect();
    found.sort_unstable();
    found
        .into_iter()
        .map(|v| Permutation::from_vec_unchecked(v.into_iter().map(u32::from).collect()))
        .collect()
}

/// `av_n(12..m)` as a sum of squared tableau counts over shapes with first
/// row shorter than `m`.
pub fn count_monotone_avoiders(m: usize, n_max: usize) -> Result<IntegerSeries> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("monotone pattern length must be >= 2, got {m}")));
    }
    let terms = (0..=n_max)
        .map(|n| {
            Shape::partitions(n, m - 1)
                .iter()
                .map(|shape| {
                    let f = syt_count(shape);
                    &f * &f
                })
                .sum()
        })
        .collect();
    Ok(IntegerSeries::new(format!("Av({})", Permutation::identity(m)), terms))
}

/// `av_n(A_k) = n * av_{n-1}(12..(k-1))`.
pub fn count_a_k(k: usize, n_max: usize) -> Result<IntegerSeries> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("family A(k) needs k >= 3, got {k}")));
    }
    let mono = count_monotone_avoiders(k - 1, n_max.saturating_sub(1))?;
    let mut terms = vec![BigUint::one()];
    terms.extend((1..=n_max).map(|n| &mono.terms[n - 1] * BigUint::from(n)));
    Ok(IntegerSeries::new(format!("Av(A({k}))"), terms))
}

/// Involutions avoiding `12..(c+1)`, i.e. standard tableaux with at most
/// `c` columns.
pub fn count_bounded_involutions(c: usize, n_max: usize) -> Result<IntegerSeries> {
    if c < 1 {
        return Err(Error::InvalidParameter("column bound must be >= 1".into()));
    }
    Ok(IntegerSeries::new(
        format!("I({})", Permutation::identity(c + 1)),
        syt_counts_bounded(n_max, c),
    ))
}

fn check_lower_bound_args(k: usize, n: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("need k >= 3, got {k}")));
    }
    if n < k - 2 {
        return Err(Error::InvalidParameter(format!("need n >= k - 2 = {}, got {n}", k - 2)));
    }
    Ok(())
}

/// Lower bound for `av_n(A_{k,k})`: the number of Robinson–Schensted pairs
/// whose columns beyond the first `k - 2` have length one, whose `Q` tail
/// holds the largest entries, and whose `P` first row starts `1..=k-2`.
///
/// With first row length `l` the `P` tail is any `(l - (k-2))`-subset of
/// `{k-1..n}`, and the front below the first row is a shape `mu` with parts
/// at most `k - 2`; `P` then has `f(mu)` fillings of that part and `Q`
/// `f((k-2, mu))` fillings of its front.
pub fn lower_bound_a_kk(k: usize, n: usize) -> Result<BigUint> {
    check_lower_bound_args(k, n)?;
    let c = k - 2;
    let mut total = BigUint::zero();
    for l in c..=n {
        let fronts: BigUint = Shape::partitions(n - l, c)
            .iter()
            .map(|mu| {
                let mut rows = vec![c];
                rows.extend_from_slice(mu.rows());
                let with_first_row = Shape::new(rows).expect("parts of mu are at most c");
                syt_count(mu) * syt_count(&with_first_row)
            })
            .sum();
        total += binomial(BigUint::from(n - c), BigUint::from(l - c)) * fronts;
    }
    Ok(total)
}

/// `sum_l C(n-(k-2), l-(k-2)) I_{n-l} I_{n-l+k-2}` with `I_m` the number of
/// tableaux on `m` boxes with at most `k - 2` columns.
///
/// This counts `P` and `Q` fronts independently rather than as a same-shape
/// pair, so for `k >= 4` it can exceed `av_n(A_{k,k})` (first at `k = 4`,
/// `n = 6`: 326 against 311). [`lower_bound_a_kk`] is the sound bound.
pub fn lower_bound_a_kk_product(k: usize, n: usize) -> Result<BigUint> {
    check_lower_bound_args(k, n)?;
    let c = k - 2;
    let inv = syt_counts_bounded(n, c);
    Ok((c..=n)
        .map(|l| binomial(BigUint::from(n - c), BigUint::from(l - c)) * &inv[n - l] * &inv[n - l + c])
        .sum())
}

/// `a / b` as a float without overflowing on huge operands.
pub(crate) fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(900);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap_or(f64::NAN) / b.to_f64().unwrap_or(f64::NAN)
}

/// Ratio-method estimate of the exponential growth rate.
///
/// With `r_n = a_n / a_{n-1} ~ mu (1 + g/n)`, the linear extrapolants
/// `n r_n - (n-1) r_{n-1}` remove the `1/n` correction. The estimate is the
/// last extrapolant; the dispersion is the spread of the last four.
pub fn growth_from_series(s: &IntegerSeries) -> Result<GrowthRate> {
    let trailing = s.terms.iter().rev().take_while(|t| !t.is_zero()).count();
    if trailing < 4 {
        return Err(Error::TooFewTerms { needed: 4, got: trailing });
    }
    let start = s.len() - trailing;
    let ratios: Vec<(f64, f64)> = (start + 1..s.len())
        .map(|n| (n as f64, big_ratio(&s.terms[n], &s.terms[n - 1])))
        .collect();
    let extrapolated: Vec<f64> = ratios
        .windows(2)
        .map(|w| w[1].0 * w[1].1 - w[0].0 * w[0].1)
        .collect();
    let tail = &extrapolated[extrapolated.len().saturating_sub(4)..];
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GrowthRate {
        value: *tail.last().expect("at least two extrapolants"),
        dispersion: max - min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{avoids_all, family_a, family_a_ki};

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    fn terms(s: &IntegerSeries) -> Vec<u64> {
        s.terms.iter().map(|t| t.to_u64().unwrap()).collect()
    }

    fn brute_force(set: &PatternSet, n_max: usize) -> Vec<u64> {
        (0..=n_max)
            .map(|n| Permutation::all(n).filter(|p| avoids_all(p, set)).count() as u64)
            .collect()
    }

    fn catalan(n_max: usize) -> IntegerSeries {
        let terms = (0..=n_max as u64)
            .map(|n| binomial(BigUint::from(2 * n), BigUint::from(n)) / BigUint::from(n + 1))
            .collect();
        IntegerSeries::new("catalan", terms)
    }

    #[test]
    fn count_examples() {
        assert_eq!(terms(&count_avoiders(&set("123,132"), 6)), vec![1, 1, 2, 4, 8, 16, 32]);
        assert_eq!(terms(&count_avoiders(&set("123"), 4))[4], 14);
        assert_eq!(terms(&count_avoiders(&set("12345"), 3))[3], 6);
        assert_eq!(terms(&count_avoiders(&set("1"), 3)), vec![1, 0, 0, 0]);
        assert_eq!(terms(&count_avoiders(&set("123"), 0)), vec![1]);
        assert_eq!(terms(&count_avoiders(&PatternSet::default(), 4)), vec![1, 1, 2, 6, 24]);
    }

    #[test]
    fn dfs_matches_brute_force() {
        let sets = [
            "123,132", "2413,3142", "1324", "321", "12", "21", "231,312", "1342,2431", "4231,1234",
            "132,4321", "2143", "3412,12",
        ];
        for s in sets {
            let s = set(s);
            assert_eq!(terms(&count_avoiders(&s, 8)), brute_force(&s, 8), "{s}");
        }
        for k in 3..=5 {
            for i in 1..=k {
                let s = family_a_ki(k, i).unwrap();
                assert_eq!(terms(&count_avoiders(&s, 8)), brute_force(&s, 8), "{s}");
            }
        }
    }

    #[test]
    fn avoiders_listed_match_counts() {
        let s = family_a_ki(4, 2).unwrap();
        let counts = terms(&count_avoiders(&s, 7));
        for n in 0..=7 {
            let list = avoiders(&s, n);
            assert_eq!(list.len() as u64, counts[n]);
            assert!(list.iter().all(|p| avoids_all(p, &s)));
            assert!(list.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn monotone_examples() {
        assert_eq!(terms(&count_monotone_avoiders(3, 5).unwrap()), vec![1, 1, 2, 5, 14, 42]);
        assert_eq!(terms(&count_monotone_avoiders(2, 4).unwrap()), vec![1; 5]);
        assert_eq!(terms(&count_monotone_avoiders(4, 5).unwrap())[5], 103);
        assert!(count_monotone_avoiders(1, 3).is_err());
    }

    #[test]
    fn monotone_agrees_with_dfs() {
        for m in 3..=5 {
            let dfs = count_avoiders(&PatternSet::new(vec![Permutation::identity(m)]).unwrap(), 9);
            assert_eq!(count_monotone_avoiders(m, 9).unwrap().terms, dfs.terms, "m={m}");
        }
    }

    #[test]
    fn a_k_examples() {
        assert_eq!(terms(&count_a_k(5, 6).unwrap())[6], 618);
        assert_eq!(terms(&count_a_k(3, 3).unwrap())[3], 3);
        assert_eq!(terms(&count_a_k(4, 1).unwrap()), vec![1, 1]);
        for k in 3..=5 {
            let dfs = count_avoiders(&family_a(k).unwrap(), 8);
            assert_eq!(count_a_k(k, 8).unwrap().terms, dfs.terms, "k={k}");
        }
    }

    #[test]
    fn involution_examples() {
        assert_eq!(terms(&count_bounded_involutions(2, 4).unwrap())[4], 6);
        assert_eq!(terms(&count_bounded_involutions(2, 5).unwrap())[5], 10);
        assert_eq!(terms(&count_bounded_involutions(1, 6).unwrap()), vec![1; 7]);
    }

    #[test]
    fn lower_bound_examples() {
        for n in 1..=12 {
            assert_eq!(lower_bound_a_kk(3, n).unwrap(), BigUint::from(1u64 << (n - 1)));
        }
        for k in 3..=6 {
            assert_eq!(lower_bound_a_kk(k, k - 2).unwrap(), BigUint::one());
        }
        assert!(lower_bound_a_kk(4, 1).is_err());
        assert!(lower_bound_a_kk(2, 3).is_err());
        let av44 = count_avoiders(&family_a_ki(4, 4).unwrap(), 4);
        assert!(lower_bound_a_kk(4, 4).unwrap() <= av44.terms[4]);
    }

    #[test]
    fn lower_bound_below_counts() {
        for k in 3..=5 {
            let av = count_avoiders(&family_a_ki(k, k).unwrap(), 9);
            for n in k - 2..=9 {
                assert!(lower_bound_a_kk(k, n).unwrap() <= av.terms[n], "k={k} n={n}");
            }
        }
    }

    #[test]
    fn product_bound_overcounts() {
        let av = count_avoiders(&family_a_ki(4, 4).unwrap(), 6);
        assert_eq!(lower_bound_a_kk_product(4, 6).unwrap(), BigUint::from(326u32));
        assert_eq!(av.terms[6], BigUint::from(311u32));
        assert_eq!(lower_bound_a_kk_product(3, 7).unwrap(), BigUint::from(64u32));
    }

    #[test]
    fn sandwich_and_monotonicity() {
        for k in 3..=5 {
            let mono = count_monotone_avoiders(k - 1, 8).unwrap();
            let all = count_avoiders(&family_a(k).unwrap(), 8);
            for i in 1..=k {
                let s = family_a_ki(k, i).unwrap();
                let av = count_avoiders(&s, 8);
                for n in 0..=8 {
                    assert!(mono.terms[n] <= av.terms[n]);
                    // A(k,i) is a subset of A(k), so it is avoided more often.
                    assert!(all.terms[n] <= av.terms[n]);
                }
            }
        }
    }

    #[test]
    fn growth_estimates() {
        let pow2 = IntegerSeries::new("2^(n-1)", (0..=30).map(|n| BigUint::one() << n.max(1) >> 1).collect());
        let g = growth_from_series(&pow2).unwrap();
        assert_eq!(g.value, 2.0);
        assert_eq!(g.dispersion, 0.0);

        let g = growth_from_series(&catalan(40)).unwrap();
        assert!((g.value - 4.0).abs() < 0.02 * 4.0, "{g}");

        let g = growth_from_series(&count_monotone_avoiders(4, 40).unwrap()).unwrap();
        assert!((g.value - 9.0).abs() < 0.02 * 9.0, "{g}");

        assert!(growth_from_series(&IntegerSeries::from_u64("short", &[1, 1, 2])).is_err());
        assert!(growth_from_series(&IntegerSeries::from_u64("zeros", &[1, 2, 3, 4, 0])).is_err());
    }

    #[test]
    fn series_formats() {
        let s = IntegerSeries::from_u64("x", &[1, 1, 2, 5]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"label":"x","terms":["1","1","2","5"]}"#);
        assert_eq!(serde_json::from_str::<IntegerSeries>(&json).unwrap(), s);
        let csv = s.to_csv();
        assert_eq!(csv, "n,a_n\n0,1\n1,1\n2,2\n3,5\n");
        assert_eq!(IntegerSeries::from_csv("x", &csv).unwrap(), s);
        assert!(IntegerSeries::from_csv("x", "n,a_n\n1,1\n").is_err());
        assert!(serde_json::from_str::<IntegerSeries>(r#"{"label":"x","terms":["-1"]}"#).is_err());
    }

    #[test]
    fn projection_grows() {
        let s = set("123");
        assert!(projected_nodes(&s, 10) < projected_nodes(&s, 20));
        assert!(projected_nodes(&set("1"), 30) <= 31.0);
    }
}
