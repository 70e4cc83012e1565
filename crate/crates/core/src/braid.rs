//! Braid words and Dehornoy's handle reduction.
//!
//! A braid word is a sequence of nonzero integers: `i` stands for the Artin
//! generator `σ_i` and `-i` for its inverse.

use std::fmt;

/// Hard cap on handle-reduction steps for a single word.
pub const MAX_REDUCTION_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BraidError {
    #[error("handle reduction did not terminate within {0} steps")]
    StepLimit(usize),
    #[error("generator sigma_{index} is out of range for {strands} strands")]
    BadGenerator { index: i32, strands: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidSign {
    Positive,
    Negative,
    Trivial,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraidWord(pub Vec<i32>);

impl BraidWord {
    pub fn identity() -> Self {
        BraidWord(Vec::new())
    }

    pub fn sigma(i: i32) -> Self {
        BraidWord(vec![i])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|x| -x).collect())
    }

    /// Concatenation followed by free cancellation at the seam.
    pub fn mul(&self, other: &BraidWord) -> BraidWord {
        let mut out = self.0.clone();
        for &x in &other.0 {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        BraidWord(out)
    }

    pub fn check(&self, strands: usize) -> Result<(), BraidError> {
        match self.0.iter().find(|x| **x == 0 || x.unsigned_abs() as usize >= strands) {
            Some(&index) => Err(BraidError::BadGenerator { index, strands }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&x| if x > 0 { format!("s{x}") } else { format!("s{}^-1", -x) })
            .collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Locates the handle whose right end is leftmost: `σ_i^e u σ_i^{-e}` where
/// `u` has no `σ_i^{±1}` and no `σ_{i-1}^{±1}`. Such a handle is permitted
/// (it contains no nested handle).
fn first_handle(word: &[i32], strands: usize) -> Option<(usize, usize)> {
    let mut last: Vec<Option<usize>> = vec![None; strands + 1];
    for (r, &x) in word.iter().enumerate() {
        let i = x.unsigned_abs() as usize;
        if let Some(l) = last[i] {
            let blocked = i >= 2 && last[i - 1].is_some_and(|m| m > l);
            if word[l] == -x && !blocked {
                return Some((l, r));
            }
        }
        last[i] = Some(r);
    }
    None
}

/// Repeatedly reduces the first permitted handle until the word is
/// handle-free. The result represents the same braid.
pub fn handle_reduce(word: &BraidWord, strands: usize) -> Result<BraidWord, BraidError> {
    word.check(strands)?;
    let mut w = word.0.clone();
    let mut steps = 0usize;
    while let Some((l, r)) = first_handle(&w, strands) {
        steps += 1;
        if steps > MAX_REDUCTION_STEPS {
            return Err(BraidError::StepLimit(MAX_REDUCTION_STEPS));
        }
        let i = w[l].abs();
        let e = w[l].signum();
        let mut next = Vec::with_capacity(w.len() + 2 * (r - l));
        next.extend_from_slice(&w[..l]);
        for &y in &w[l + 1..r] {
            if y.abs() == i + 1 {
                // σ_i^e σ_{i+1}^d σ_i^{-e} = σ_{i+1}^{-e} σ_i^d σ_{i+1}^e
                next.extend_from_slice(&[-e * (i + 1), y.signum() * i, e * (i + 1)]);
            } else {
                next.push(y);
            }
        }
        next.extend_from_slice(&w[r + 1..]);
        w = next;
    }
    Ok(BraidWord(w))
}

/// σ-positivity of the braid represented by `word`.
pub fn braid_sign(word: &BraidWord, strands: usize) -> Result<BraidSign, BraidError> {
    let reduced = handle_reduce(word, strands)?;
    let Some(&lowest) = reduced.0.iter().min_by_key(|x| x.abs()) else {
        return Ok(BraidSign::Trivial);
    };
    let i = lowest.abs();
    debug_assert!(reduced.0.iter().filter(|x| x.abs() == i).all(|x| x.signum() == lowest.signum()));
    Ok(if lowest > 0 { BraidSign::Positive } else { BraidSign::Negative })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(x: &[i32]) -> BraidWord {
        BraidWord(x.to_vec())
    }

    #[test]
    fn trivial_handle() {
        assert_eq!(handle_reduce(&bw(&[1, -1]), 3).unwrap(), bw(&[]));
    }

    #[test]
    fn braid_relation_reduces_to_identity() {
        let w = bw(&[1, 2, 1, -2, -1, -2]);
        assert_eq!(handle_reduce(&w, 3).unwrap(), bw(&[]));
        assert_eq!(braid_sign(&w, 3).unwrap(), BraidSign::Trivial);
    }

    #[test]
    fn single_handle_step() {
        // σ1^-1 σ2 σ1 is a σ1-handle; it becomes σ2 σ1 σ2^-1
        assert_eq!(handle_reduce(&bw(&[-1, 2, 1]), 3).unwrap(), bw(&[2, 1, -2]));
        // which is already handle-free: σ1 only occurs positively
        assert_eq!(handle_reduce(&bw(&[2, 1, -2]), 3).unwrap(), bw(&[2, 1, -2]));
        assert_eq!(braid_sign(&bw(&[2, 1, -2]), 3).unwrap(), BraidSign::Positive);
    }

    #[test]
    fn signs() {
        assert_eq!(braid_sign(&bw(&[1]), 4).unwrap(), BraidSign::Positive);
        assert_eq!(braid_sign(&bw(&[-3]), 4).unwrap(), BraidSign::Negative);
        assert_eq!(braid_sign(&bw(&[]), 4).unwrap(), BraidSign::Trivial);
        // B4 relators in x = σ1, y = σ2, z = σ3
        for r in [&[1, 3, -1, -3][..], &[1, 2, 1, -2, -1, -2], &[2, 3, 2, -3, -2, -3]] {
            assert_eq!(braid_sign(&bw(r), 4).unwrap(), BraidSign::Trivial);
        }
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(handle_reduce(&bw(&[4]), 4), Err(BraidError::BadGenerator { .. })));
        assert!(matches!(handle_reduce(&bw(&[0]), 4), Err(BraidError::BadGenerator { .. })));
    }

    #[test]
    fn display() {
        assert_eq!(bw(&[1, -2]).to_string(), "s1.s2^-1");
        assert_eq!(bw(&[]).to_string(), "e");
    }
}
