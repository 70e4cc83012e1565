//! Determinantal divisors computed directly from minors.

use num_integer::Integer;

use npi_core::homology::IntMatrix;

/// Fraction-free elimination on a small square `i128` matrix.
pub fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else { return 0 };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect()
}

/// gcd of all k×k minors.
pub fn minor_gcd(m: &[Vec<i128>], k: usize) -> i128 {
    let (r, c) = (m.len(), m.first().map_or(0, |x| x.len()));
    let mut g = 0i128;
    for rows in subsets(r, k) {
        for cols in subsets(c, k) {
            let sub = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
            g = g.gcd(&det(sub));
        }
    }
    g
}

pub fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| i128::try_from(x).unwrap()).collect()).collect()
}

