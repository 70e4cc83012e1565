//! Abelianization: exponent matrices, Smith normal form, `H_1`, and the
//! search for surjective weight homomorphisms `G → ℤ`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::presentation::Presentation;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact determinant by cofactor-free fraction-free elimination (Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * factor;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * factor;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "IntMatrix{rows:?}")
    }
}

/// `entry[i][j]` is the exponent sum of generator `j` in relator `i`.
pub fn exponent_matrix(p: &Presentation) -> IntMatrix {
    let n = p.num_generators();
    let mut m = IntMatrix::zeros(p.num_relators(), n);
    for (i, r) in p.relators.iter().enumerate() {
        for l in r.iter() {
            if l.gen < n {
                m[(i, l.gen)] += l.sign();
            }
        }
    }
    m
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with a
/// nonnegative divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                // A remainder smaller than the pivot survived; promote it.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    a.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // Row and column cleared; enforce divisibility of the rest.
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, v, d: a }
}

/// Invariant factors of `ℤⁿ / rowspan(M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1Structure {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

impl H1Structure {
    pub fn from_smith(form: &SmithForm) -> Self {
        let diag = form.diagonal();
        let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
        let torsion = diag
            .iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .map(|x| x.to_string())
            .collect();
        H1Structure { free_rank: form.d.cols - nonzero, torsion }
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for H1Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn h1_structure(p: &Presentation) -> H1Structure {
    H1Structure::from_smith(&smith_normal_form(&exponent_matrix(p)))
}

/// Outcome of the generalized-Wirtinger test together with a reason string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WirtingerCheck {
    pub holds: bool,
    pub h1: H1Structure,
    pub reason: String,
}

/// `H_1` nontrivial free abelian of rank `n − k`.
pub fn is_generalized_wirtinger(p: &Presentation) -> WirtingerCheck {
    let h1 = h1_structure(p);
    let n = p.num_generators() as i64;
    let k = p.num_relators() as i64;
    let reason = if !h1.is_torsion_free() {
        format!("H1 = {h1} has torsion [{}]", h1.torsion.join(", "))
    } else if n - k < 1 {
        format!("deficiency n - k = {} is not positive", n - k)
    } else if h1.free_rank as i64 != n - k {
        format!("H1 = {h1} has rank {} but n - k = {}", h1.free_rank, n - k)
    } else {
        return WirtingerCheck {
            holds: true,
            reason: format!("H1 = {h1}, free of rank n - k = {}", n - k),
            h1,
        };
    };
    WirtingerCheck { holds: false, h1, reason }
}

/// Basis of `{w ∈ ℤⁿ : M w = 0}` read off the columns of `V` past the rank.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let form = smith_normal_form(m);
    let rank = form.rank();
    (rank..m.cols)
        .map(|j| (0..m.cols).map(|i| form.v[(i, j)].clone()).collect())
        .collect()
}

/// A weight homomorphism `φ` given by `φ(a_j) = weights[j]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WeightVector {
    pub weights: Vec<i64>,
}

impl WeightVector {
    pub fn new(weights: Vec<i64>) -> Self {
        WeightVector { weights }
    }

    pub fn all_ones(n: usize) -> Self {
        WeightVector { weights: vec![1; n] }
    }

    pub fn gcd(&self) -> i64 {
        self.weights.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    /// Generators carrying a negative weight.
    pub fn negative_generators(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&j| self.weights[j] < 0).collect()
    }

    /// Same homomorphism expressed on the presentation with the negative
    /// generators inverted.
    pub fn flipped(&self) -> WeightVector {
        WeightVector { weights: self.weights.iter().map(|w| w.abs()).collect() }
    }

    /// Whether every relator has weight zero.
    pub fn kills_relators(&self, p: &Presentation) -> bool {
        p.relators.iter().all(|r| {
            r.iter().map(|l| l.sign() * self.weights.get(l.gen).copied().unwrap_or(0)).sum::<i64>()
                == 0
        })
    }
}

/// A primitive weight vector plus the generators to invert so that all
/// weights become nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightCandidate {
    pub weights: WeightVector,
    pub flips: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("no surjection onto Z: no primitive kernel vector with coefficients in [-{bound}, {bound}]")]
    NoSurjection { bound: i64 },
    #[error("kernel search space too large ({dim} basis vectors at bound {bound})")]
    SearchTooLarge { dim: usize, bound: i64 },
    #[error("kernel vector entry does not fit in 64 bits")]
    Overflow,
}

/// Upper limit on the number of kernel combinations enumerated.
pub const MAX_KERNEL_COMBINATIONS: u64 = 5_000_000;

/// Enumerates surjective homomorphisms `G → ℤ` from integer combinations of
/// the kernel basis with coefficients in `[-bound, bound]`, normalized to
/// gcd 1 and deduplicated up to global sign. The all-ones vector comes first
/// when valid; the rest are sorted lexicographically.
pub fn find_weight_homomorphisms(
    p: &Presentation,
    bound: i64,
) -> Result<Vec<WeightCandidate>, HomologyError> {
    assert!(bound >= 1, "coefficient bound must be at least 1");
    let m = exponent_matrix(p);
    let basis = integer_kernel_basis(&m);
    let dim = basis.len();
    let n = m.cols();
    let side = (2 * bound + 1) as u64;
    if side.checked_pow(dim as u32).is_none_or(|c| c > MAX_KERNEL_COMBINATIONS) {
        return Err(HomologyError::SearchTooLarge { dim, bound });
    }

    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut coeffs = vec![-bound; dim];
    if dim > 0 {
        loop {
            let mut v = vec![BigInt::zero(); n];
            for (c, b) in coeffs.iter().zip(&basis) {
                if *c == 0 {
                    continue;
                }
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += bi * c;
                }
            }
            let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() {
                let prim: Option<Vec<i64>> = v.iter().map(|x| (x / &g).to_i64()).collect();
                let prim = prim.ok_or(HomologyError::Overflow)?;
                found.insert(canonical_sign(prim));
            }
            // odometer
            let mut i = 0;
            while i < dim {
                coeffs[i] += 1;
                if coeffs[i] > bound {
                    coeffs[i] = -bound;
                    i += 1;
                } else {
                    break;
                }
            }
            if i == dim {
                break;
            }
        }
    }

    if found.is_empty() {
        return Err(HomologyError::NoSurjection { bound });
    }
    let ones = vec![1i64; n];
    let mut out: Vec<Vec<i64>> = Vec::with_capacity(found.len());
    if found.remove(&ones) {
        out.push(ones);
    }
    out.extend(found);
    Ok(out
        .into_iter()
        .map(|w| {
            let weights = WeightVector::new(w);
            debug_assert!(weights.kills_relators(p) && weights.gcd() == 1);
            let flips = weights.negative_generators();
            WeightCandidate { weights, flips }
        })
        .collect())
}

/// Representative of `{v, -v}`: fewer negative entries, then first nonzero
/// entry positive.
fn canonical_sign(v: Vec<i64>) -> Vec<i64> {
    let neg = v.iter().filter(|&&x| x < 0).count();
    let pos = v.iter().filter(|&&x| x > 0).count();
    let first_negative = v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
    if neg > pos || (neg == pos && first_negative) {
        v.into_iter().map(|x| -x).collect()
    } else {
        v
    }
}
