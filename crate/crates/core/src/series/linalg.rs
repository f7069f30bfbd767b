use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in row.iter_mut() {
            *c /= &g;
        }
    }
}

/// Reduced row echelon form over the integers, computed fraction-free with
/// content removal after every elimination step. Returns the pivot columns.
fn echelon(rows: &mut Vec<Vec<BigInt>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].abs())
        else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        let pv = &pivot_row[c];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let g = pv.gcd(&row[c]);
            let a = pv / &g;
            let b = &row[c] / &g;
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &a - y * &b;
            }
            primitive(row);
        }
        r += 1;
        pivots.push(c);
    }
    rows.truncate(r);
    pivots
}

/// An integer basis of the right nullspace of `matrix` (each row has
/// `cols` entries). Every basis vector is primitive and has exactly one
/// free column set.
pub fn integer_nullspace(matrix: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .cloned()
        .map(|mut r| {
            primitive(&mut r);
            r
        })
        .collect();
    let pivots = echelon(&mut rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    // With row i having pivot value d_i in column p_i, setting free column
    // f to L = lcm(d_i) gives x[p_i] = -row_i[f] * L / d_i.
    free.iter()
        .map(|&f| {
            let l = pivots
                .iter()
                .enumerate()
                .fold(BigInt::one(), |acc, (i, &p)| acc.lcm(&rows[i][p]));
            let mut v = vec![BigInt::zero(); cols];
            v[f] = l.clone();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -(&rows[i][f] * &l) / &rows[i][p];
            }
            primitive(&mut v);
            v
        })
        .collect()
}

/// Nullspace dimension, i.e. `cols - rank`.
pub fn nullity(matrix: &[Vec<BigInt>], cols: usize) -> usize {
    let mut rows: Vec<Vec<BigInt>> = matrix.to_vec();
    cols - echelon(&mut rows, cols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn apply(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
        a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    }

    #[test]
    fn simple_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = integer_nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(apply(&a, v).iter().all(Zero::is_zero));
        }
        assert_eq!(integer_nullspace(&m(&[&[1, 0], &[0, 1]]), 2).len(), 0);
        assert_eq!(integer_nullspace(&m(&[&[2, -3]]), 2), m(&[&[3, 2]]));
        assert_eq!(nullity(&m(&[&[0, 0, 0]]), 3), 3);
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(
            rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 5), 0..6)
        ) {
            let a: Vec<Vec<BigInt>> =
                rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let ns = integer_nullspace(&a, 5);
            prop_assert_eq!(ns.len(), nullity(&a, 5));
            for v in &ns {
                prop_assert!(v.iter().any(|c| !c.is_zero()));
                prop_assert!(apply(&a, v).iter().all(Zero::is_zero));
            }
        }
    }
}
