//! Permutations, classical pattern containment, rank words, and the pattern
//! families `A_k` / `A_{k,i}`.
//!
//! A permutation of length `n` is stored in one-line notation with entries
//! `1..=n`. Patterns are just permutations; a [`PatternSet`] is a finite
//! duplicate-free collection of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    entries: Vec<u32>,
}

/// A pattern is an ordinary permutation read up to order-isomorphism.
pub type Pattern = Permutation;

impl Permutation {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n];
        for &e in &entries {
            let idx = e as usize;
            if idx == 0 || idx > n || seen[idx - 1] {
                return Err(Error::InvalidPermutation(entries));
            }
            seen[idx - 1] = true;
        }
        Ok(Self { entries })
    }

    /// Caller guarantees `entries` is a permutation of `1..=n`.
    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Self::new(entries.clone()).is_ok());
        Self { entries }
    }

    /// Relabels distinct values by their relative order.
    pub fn standardize<T: Ord>(values: &[T]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].cmp(&values[b]));
        let mut entries = vec![0u32; values.len()];
        for (rank, &pos) in order.iter().enumerate() {
            entries[pos] = rank as u32 + 1;
        }
        Self { entries }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: (1..=n as u32).collect(),
        }
    }

    pub fn decreasing(n: usize) -> Self {
        Self {
            entries: (1..=n as u32).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (pos, &v) in self.entries.iter().enumerate() {
            inv[v as usize - 1] = pos as u32 + 1;
        }
        Self { entries: inv }
    }

    pub fn is_involution(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(pos, &v)| self.entries[v as usize - 1] as usize == pos + 1)
    }

    /// 1-based positions `i` with `p_i > p_{i+1}`.
    pub fn descent_set(&self) -> BTreeSet<usize> {
        self.entries
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn longest_increasing_subsequence(&self) -> usize {
        ranks(&self.entries).into_iter().max().unwrap_or(0) as usize
    }

    /// The permutation with its suffix starting at 0-based `start` reversed.
    pub fn reverse_suffix(&self, start: usize) -> Self {
        let mut entries = self.entries.clone();
        entries[start..].reverse();
        Self { entries }
    }

    /// All permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n as u32).collect()),
        }
    }

    /// Writes the permutation in one-line notation. Lengths up to 9 use bare
    /// digits ("3752416"); longer ones are space separated.
    fn write_one_line(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for e in &self.entries {
                write!(f, "{e}")?;
            }
        } else {
            for (i, e) in self.entries.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_one_line(f)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Permutation(")?;
        self.write_one_line(f)?;
        f.write_str(")")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts a digit string ("2413") or whitespace-separated entries.
    /// The empty string parses to the empty permutation.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let entries: Option<Vec<u32>> = if s.contains(char::is_whitespace) {
            s.split_whitespace().map(|t| t.parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10)).collect()
        };
        let entries = entries.ok_or_else(|| Error::Parse(s.to_string()))?;
        Self::new(entries).map_err(|_| Error::Parse(s.to_string()))
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub struct AllPermutations {
    next: Option<Vec<u32>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { entries: current })
    }
}

fn next_permutation(a: &mut [u32]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let Some(i) = (0..a.len() - 1).rev().find(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// Rank of each entry: the length of the longest increasing subsequence
/// ending at that entry. Quadratic DP over prefixes.
pub(crate) fn ranks<T: Ord>(values: &[T]) -> Vec<u32> {
    let mut rank = Vec::with_capacity(values.len());
    for j in 0..values.len() {
        let best = (0..j)
            .filter(|&a| values[a] < values[j])
            .map(|a| rank[a])
            .max()
            .unwrap_or(0);
        rank.push(best + 1);
    }
    rank
}

/// Precomputed order constraints for matching one pattern.
///
/// Pattern positions are matched left to right. When placing position `r`,
/// the already placed position holding the largest smaller pattern value
/// (`below[r]`) and the smallest larger one (`above[r]`) bound the admissible
/// text values; checking just those two neighbours is enough to keep the
/// partial embedding order-isomorphic.
#[derive(Clone, Debug)]
pub(crate) struct Matcher {
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
}

impl Matcher {
    pub(crate) fn new(q: &[u32]) -> Self {
        let k = q.len();
        let mut below = vec![None; k];
        let mut above = vec![None; k];
        for r in 0..k {
            for s in 0..r {
                if q[s] < q[r] && below[r].is_none_or(|b: usize| q[b] < q[s]) {
                    below[r] = Some(s);
                }
                if q[s] > q[r] && above[r].is_none_or(|a: usize| q[a] > q[s]) {
                    above[r] = Some(s);
                }
            }
        }
        Self { below, above }
    }

    fn len(&self) -> usize {
        self.below.len()
    }

    /// Is there an occurrence of the pattern in `text`? With `anchor_last`
    /// the occurrence must use the final entry of `text`.
    pub(crate) fn occurs<T: Ord + Copy>(&self, text: &[T], anchor_last: bool) -> bool {
        let k = self.len();
        if k == 0 {
            return true;
        }
        if k > text.len() {
            return false;
        }
        let mut chosen = vec![0usize; k];
        self.extend(text, anchor_last, &mut chosen, 0, 0)
    }

    fn extend<T: Ord + Copy>(
        &self,
        text: &[T],
        anchor_last: bool,
        chosen: &mut [usize],
        r: usize,
        start: usize,
    ) -> bool {
        let k = self.len();
        let n = text.len();
        if r == k {
            return true;
        }
        let (first, last) = if anchor_last && r == k - 1 {
            (n - 1, n - 1)
        } else {
            // Leave room for the remaining pattern positions; when anchored
            // the last of them is the final entry.
            let reserve = k - 1 - r;
            if n < reserve + 1 {
                return false;
            }
            (start, n - 1 - reserve)
        };
        for j in first..=last {
            if j < start {
                continue;
            }
            let v = text[j];
            if let Some(b) = self.below[r] {
                if text[chosen[b]] >= v {
                    continue;
                }
            }
            if let Some(a) = self.above[r] {
                if text[chosen[a]] <= v {
                    continue;
                }
            }
            chosen[r] = j;
            if self.extend(text, anchor_last, chosen, r + 1, j + 1) {
                return true;
            }
        }
        false
    }
}

/// Does `p` contain an occurrence of `q`?
pub fn contains(p: &Permutation, q: &Pattern) -> bool {
    Matcher::new(q.entries()).occurs(p.entries(), false)
}

/// True iff `p` contains no pattern of `set`.
pub fn avoids_all(p: &Permutation, set: &PatternSet) -> bool {
    set.patterns().iter().all(|q| !contains(p, q))
}

/// Which structured family a pattern set was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `A_k`: the `k` patterns of length `k` starting with `12..(k-1)`.
    A { k: usize },
    /// `A_{k,i}`: `A_k` without the pattern whose final entry is `i`.
    Aki { k: usize, i: usize },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A { k } => write!(f, "A({k})"),
            Family::Aki { k, i } => write!(f, "A({k},{i})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PatternSet {
    patterns: Vec<Pattern>,
    family: Option<Family>,
}

impl PatternSet {
    pub fn new(patterns: Vec<Pattern>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for q in &patterns {
            if q.is_empty() {
                return Err(Error::InvalidParameter("patterns must be nonempty".into()));
            }
            if !seen.insert(q.clone()) {
                return Err(Error::DuplicatePattern(q.to_string()));
            }
        }
        Ok(Self {
            patterns,
            family: None,
        })
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Is `other` a subset of `self` (as sets of patterns)?
    pub fn is_superset_of(&self, other: &PatternSet) -> bool {
        other.patterns.iter().all(|q| self.patterns.contains(q))
    }

    /// Human-readable label: the family name when known, otherwise the
    /// comma-separated list.
    pub fn label(&self) -> String {
        match self.family {
            Some(fam) => fam.to_string(),
            None => self.to_string(),
        }
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.patterns.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

impl FromStr for PatternSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let patterns = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::new(patterns)
    }
}

/// The increasing arrangement of `1..=k` without `last`, followed by `last`.
fn family_member(k: usize, last: usize) -> Pattern {
    let mut entries: Vec<u32> = (1..=k as u32).filter(|&v| v as usize != last).collect();
    entries.push(last as u32);
    Permutation::from_vec_unchecked(entries)
}

/// `A_k`, listed in increasing lexicographic order (`12..k` first).
pub fn family_a(k: usize) -> Result<PatternSet> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("family A(k) needs k >= 3, got {k}")));
    }
    Ok(PatternSet {
        patterns: (1..=k).rev().map(|i| family_member(k, i)).collect(),
        family: Some(Family::A { k }),
    })
}

/// `A_{k,i}`: `A_k` with the member ending in `i` removed.
pub fn family_a_ki(k: usize, i: usize) -> Result<PatternSet> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("family A(k,i) needs k >= 3, got {k}")));
    }
    if i == 0 || i > k {
        return Err(Error::InvalidParameter(format!("family A({k},i) needs 1 <= i <= {k}, got {i}")));
    }
    Ok(PatternSet {
        patterns: (1..=k)
            .rev()
            .filter(|&last| last != i)
            .map(|last| family_member(k, last))
            .collect(),
        family: Some(Family::Aki { k, i }),
    })
}

/// The rank words of a permutation: `w[j]` is the rank of the entry at
/// position `j`, `z[t]` the rank of the entry with value `t + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankProfile {
    pub w: Vec<u32>,
    pub z: Vec<u32>,
}

impl RankProfile {
    /// Length of the longest increasing subsequence (the largest rank).
    pub fn max_rank(&self) -> u32 {
        self.w.iter().copied().max().unwrap_or(0)
    }
}

pub fn rank_profile(p: &Permutation) -> RankProfile {
    let w = ranks(p.entries());
    let mut z = vec![0u32; p.len()];
    for (pos, &v) in p.entries().iter().enumerate() {
        z[v as usize - 1] = w[pos];
    }
    RankProfile { w, z }
}

/// Recovers `p` from its rank words, or `None` if `(w, z)` is not the image
/// of any permutation.
///
/// Entries of equal rank form a decreasing subsequence, so for every rank
/// the values carrying it (largest first) go to the positions carrying it
/// (left to right). The result is accepted only if it reproduces `(w, z)`.
pub fn decode_rank_profile(w: &[u32], z: &[u32]) -> Option<Permutation> {
    let n = w.len();
    if z.len() != n {
        return None;
    }
    let max_rank = w.iter().chain(z).copied().max().unwrap_or(0) as usize;
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); max_rank + 1];
    let mut values: Vec<Vec<u32>> = vec![Vec::new(); max_rank + 1];
    for (pos, &r) in w.iter().enumerate() {
        positions[r as usize].push(pos);
    }
    for (t, &r) in z.iter().enumerate().rev() {
        values[r as usize].push(t as u32 + 1);
    }
    let mut entries = vec![0u32; n];
    for (pos, vals) in positions.iter().zip(&values) {
        if pos.len() != vals.len() {
            return None;
        }
        for (&at, &v) in pos.iter().zip(vals) {
            entries[at] = v;
        }
    }
    let p = Permutation::new(entries).ok()?;
    let profile = rank_profile(&p);
    (profile.w == w && profile.z == z).then_some(p)
}
