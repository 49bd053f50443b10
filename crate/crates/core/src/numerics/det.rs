use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rat;
use crate::error::{Error, Result};

/// Exact determinant of a square rational matrix.
///
/// Each row is scaled to integers by the lcm of its denominators, the
/// integer matrix is reduced by Bareiss' fraction-free elimination, and the
/// row scales are divided back out at the end.
pub fn exact_det(m: &[Vec<Rat>]) -> Result<Rat> {
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Dimension {
                rows: n,
                row: i,
                cols: row.len(),
            });
        }
    }

    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m {
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect(),
        );
        scale *= lcm;
    }

    let det = bareiss(&mut a);
    Ok(Rat::new(det, scale))
}

fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Sylvester's identity guarantees the division is exact.
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
