//! Young diagrams, standard Young tableaux and the Robinson–Schensted
//! correspondence.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A partition, stored as weakly decreasing positive row lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Shape {
    rows: Vec<usize>,
}

impl Shape {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.iter().any(|&r| r == 0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "shape rows must be positive and weakly decreasing, got {rows:?}"
            )));
        }
        Ok(Self { rows })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn first_row(&self) -> usize {
        self.rows.first().copied().unwrap_or(0)
    }

    /// Column lengths (the conjugate partition).
    pub fn columns(&self) -> Vec<usize> {
        (0..self.first_row())
            .map(|j| self.rows.iter().take_while(|&&r| r > j).count())
            .collect()
    }

    /// All partitions of `n` with every part at most `max_part`, in reverse
    /// lexicographic order.
    pub fn partitions(n: usize, max_part: usize) -> Vec<Shape> {
        fn go(rest: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Shape>) {
            if rest == 0 {
                out.push(Shape { rows: prefix.clone() });
                return;
            }
            for part in (1..=cap.min(rest)).rev() {
                prefix.push(part);
                go(rest - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(n, max_part, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// A standard Young tableau, serialized as its list of rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StandardTableau {
    rows: Vec<Vec<u32>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let t = Self { rows };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        Shape::new(self.rows.iter().map(Vec::len).collect())
            .map_err(|_| Error::InvalidTableau(format!("rows {:?} do not form a shape", self.rows)))?;
        let n = self.size();
        let mut seen = vec![false; n];
        for row in &self.rows {
            for &v in row {
                let idx = v as usize;
                if idx == 0 || idx > n || seen[idx - 1] {
                    return Err(Error::InvalidTableau(format!("entries {:?} are not 1..={n}", self.rows)));
                }
                seen[idx - 1] = true;
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidTableau(format!("row {row:?} is not increasing")));
            }
        }
        for pair in self.rows.windows(2) {
            if pair[1].iter().zip(&pair[0]).any(|(below, above)| below <= above) {
                return Err(Error::InvalidTableau(format!("columns of {:?} are not increasing", self.rows)));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> Shape {
        Shape {
            rows: self.rows.iter().map(Vec::len).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Row index (0-based) of every value, indexed by `value - 1`.
    fn row_of(&self) -> Vec<usize> {
        let mut row_of = vec![0; self.size()];
        for (r, row) in self.rows.iter().enumerate() {
            for &v in row {
                row_of[v as usize - 1] = r;
            }
        }
        row_of
    }

    /// Values `i` such that `i + 1` sits in a strictly lower row than `i`.
    pub fn descent_set(&self) -> BTreeSet<usize> {
        let row_of = self.row_of();
        (1..self.size()).filter(|&i| row_of[i] > row_of[i - 1]).collect()
    }
}

/// Robinson–Schensted by row insertion. Returns the insertion tableau `P`
/// and the recording tableau `Q`.
pub fn rsk(p: &Permutation) -> (StandardTableau, StandardTableau) {
    let mut prows: Vec<Vec<u32>> = Vec::new();
    let mut qrows: Vec<Vec<u32>> = Vec::new();
    for (step, &value) in p.entries().iter().enumerate() {
        let mut x = value;
        let mut r = 0;
        loop {
            if r == prows.len() {
                prows.push(vec![x]);
                qrows.push(vec![step as u32 + 1]);
                break;
            }
            let row = &mut prows[r];
            let at = row.partition_point(|&y| y < x);
            if at == row.len() {
                row.push(x);
                qrows[r].push(step as u32 + 1);
                break;
            }
            x = std::mem::replace(&mut row[at], x);
            r += 1;
        }
    }
    (StandardTableau { rows: prows }, StandardTableau { rows: qrows })
}

/// The unique permutation whose Robinson–Schensted pair is `(p, q)`.
pub fn inverse_rsk(p: &StandardTableau, q: &StandardTableau) -> Result<Permutation> {
    p.validate()?;
    q.validate()?;
    if p.shape() != q.shape() {
        return Err(Error::InvalidTableau(format!(
            "shapes differ: {} vs {}",
            p.shape(),
            q.shape()
        )));
    }
    let n = p.size();
    let mut prows = p.rows.clone();
    let q_row_of = q.row_of();
    let mut entries = vec![0u32; n];
    for t in (1..=n).rev() {
        // The largest recording entry always sits at the end of its row.
        let mut r = q_row_of[t - 1];
        let mut x = prows[r].pop().expect("shape mismatch is rejected above");
        if prows[r].is_empty() {
            prows.pop();
        }
        while r > 0 {
            r -= 1;
            let row = &mut prows[r];
            let at = row.partition_point(|&y| y < x) - 1;
            x = std::mem::replace(&mut row[at], x);
        }
        entries[t - 1] = x;
    }
    Ok(Permutation::from_vec_unchecked(entries))
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of standard fillings of `shape`, by the hook length formula.
pub fn syt_count(shape: &Shape) -> BigUint {
    let cols = shape.columns();
    let mut hooks = BigUint::one();
    for (i, &len) in shape.rows().iter().enumerate() {
        for (j, &height) in cols.iter().enumerate().take(len) {
            hooks *= (len - j - 1) + (height - i - 1) + 1;
        }
    }
    factorial(shape.size()) / hooks
}

/// Number of standard tableaux on `n` boxes whose first row has length at
/// most `max_first_row`.
pub fn syt_count_bounded(n: usize, max_first_row: usize) -> BigUint {
    syt_counts_bounded(n, max_first_row).pop().unwrap_or_default()
}

/// `syt_count_bounded(m, max_first_row)` for every `m` in `0..=n_max`.
///
/// Shapes are tracked by their column heights (at most `max_first_row`
/// columns) and grown one box at a time; each level keeps, per shape, the
/// number of standard fillings reaching it.
pub fn syt_counts_bounded(n_max: usize, max_first_row: usize) -> Vec<BigUint> {
    if max_first_row == 0 {
        return (0..=n_max).map(|n| BigUint::from(u8::from(n == 0))).collect();
    }
    let cols = max_first_row.min(n_max.max(1));
    let mut level: HashMap<Vec<u16>, BigUint> = HashMap::new();
    level.insert(vec![0; cols], BigUint::one());
    let mut totals = vec![BigUint::one()];
    for _ in 1..=n_max {
        let mut next: HashMap<Vec<u16>, BigUint> = HashMap::with_capacity(level.len() * 2);
        for (heights, count) in &level {
            for j in 0..cols {
                if j == 0 || heights[j - 1] > heights[j] {
                    let mut grown = heights.clone();
                    grown[j] += 1;
                    *next.entry(grown).or_insert_with(BigUint::zero) += count;
                }
            }
        }
        totals.push(next.values().sum());
        level = next;
    }
    totals
}
