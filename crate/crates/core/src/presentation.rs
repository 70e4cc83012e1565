//! Words, relators and finite group presentations.
//!
//! Generators are referred to by their 0-based index into
//! [`Presentation::generators`]; names only matter for parsing and printing.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// `+1` for a generator, `-1` for an inverse generator.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// A finite sequence of letters. Not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from signed 1-based generator indices: `3` is the third
    /// generator, `-3` its inverse. Handy in tests.
    pub fn from_signed(indices: &[i64]) -> Self {
        Word(
            indices
                .iter()
                .map(|&x| {
                    assert!(x != 0, "generator index 0 is not allowed");
                    Letter { gen: (x.unsigned_abs() - 1) as usize, inverse: x < 0 }
                })
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().copied()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Rotation starting at position `k` (taken modulo the length).
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::empty();
        }
        let k = k % self.0.len();
        let mut letters = self.0[k..].to_vec();
        letters.extend_from_slice(&self.0[..k]);
        Word(letters)
    }

    /// Free reduction using a stack; the result is the unique reduced
    /// representative of the same free group element.
    pub fn freely_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word(stack)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// First position `p` such that letter `p` cancels with the cyclically
    /// next letter, if any.
    pub fn cyclic_cancellation(&self) -> Option<usize> {
        let n = self.0.len();
        if n == 0 {
            return None;
        }
        (0..n).find(|&p| self.0[p].cancels(self.0[(p + 1) % n]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.cyclic_cancellation().is_none()
    }

    /// Returns `(core, u)` with `core` cyclically reduced and
    /// `self = u · core · u⁻¹` in the free group.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let reduced = self.freely_reduce().0;
        let mut lo = 0;
        let mut hi = reduced.len();
        while hi - lo >= 2 && reduced[lo].cancels(reduced[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        (Word(reduced[lo..hi].to_vec()), Word(reduced[..lo].to_vec()))
    }

    /// Signed number of occurrences of generator `gen`.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.sign()).sum()
    }

    /// Smallest `q > 0` such that rotating by `q` gives the same word.
    pub fn rotation_period(&self) -> usize {
        let n = self.0.len();
        (1..=n)
            .find(|&q| n.is_multiple_of(q) && (0..n).all(|p| self.0[p] == self.0[(p + q) % n]))
            .unwrap_or(0)
    }

    /// True iff the cyclic word is `s^m` for some `m ≥ 2`.
    pub fn is_proper_power(&self) -> bool {
        let n = self.0.len();
        n > 0 && self.rotation_period() < n
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A violated presentation invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Diagnostic {
    NoGenerators,
    InvalidGeneratorName { name: String },
    DuplicateGenerator { name: String },
    EmptyRelator { relator: usize },
    UnknownGenerator { relator: usize, position: usize, gen: usize },
    NotCyclicallyReduced { relator: usize, position: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoGenerators => write!(f, "presentation has no generators"),
            Diagnostic::InvalidGeneratorName { name } => {
                write!(f, "invalid generator name {name:?}")
            }
            Diagnostic::DuplicateGenerator { name } => write!(f, "duplicate generator {name:?}"),
            Diagnostic::EmptyRelator { relator } => write!(f, "relator r{} is empty", relator + 1),
            Diagnostic::UnknownGenerator { relator, position, gen } => write!(
                f,
                "relator r{} position {position}: unknown generator index {gen}",
                relator + 1
            ),
            Diagnostic::NotCyclicallyReduced { relator, position } => write!(
                f,
                "relator r{} is not cyclically reduced (cancellation at position {position})",
                relator + 1
            ),
        }
    }
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `⟨a_1, …, a_n | r_1, …, r_k⟩`. Relators keep the rotation they were
/// given in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        Presentation { generators, relators }
    }

    /// Convenience constructor from string generator names.
    pub fn from_names(names: &[&str], relators: Vec<Word>) -> Self {
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), relators)
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.generators.is_empty() {
            out.push(Diagnostic::NoGenerators);
        }
        let mut seen = HashSet::new();
        for name in &self.generators {
            if !is_valid_name(name) {
                out.push(Diagnostic::InvalidGeneratorName { name: name.clone() });
            }
            if !seen.insert(name.as_str()) {
                out.push(Diagnostic::DuplicateGenerator { name: name.clone() });
            }
        }
        let n = self.generators.len();
        for (r, word) in self.relators.iter().enumerate() {
            if word.is_empty() {
                out.push(Diagnostic::EmptyRelator { relator: r });
                continue;
            }
            let mut unknown = false;
            for (position, l) in word.iter().enumerate() {
                if l.gen >= n {
                    unknown = true;
                    out.push(Diagnostic::UnknownGenerator { relator: r, position, gen: l.gen });
                }
            }
            if !unknown {
                if let Some(position) = word.cyclic_cancellation() {
                    out.push(Diagnostic::NotCyclicallyReduced { relator: r, position });
                }
            }
        }
        out
    }

    /// Replaces every relator by its cyclically reduced core. Returns the new
    /// presentation and the indices of the relators that changed.
    pub fn cyclically_reduced(&self) -> (Presentation, Vec<usize>) {
        let mut changed = Vec::new();
        let relators = self
            .relators
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let (core, _) = r.cyclically_reduce();
                if core != *r {
                    changed.push(i);
                }
                core
            })
            .collect();
        (Presentation { generators: self.generators.clone(), relators }, changed)
    }

    /// Replaces generator `gen` by its inverse in every relator.
    pub fn flip_generator(&self, gen: usize) -> Presentation {
        assert!(gen < self.generators.len(), "generator {gen} out of range");
        let relators = self
            .relators
            .iter()
            .map(|w| {
                w.iter()
                    .map(|l| if l.gen == gen { l.inv() } else { l })
                    .collect::<Word>()
            })
            .collect();
        Presentation { generators: self.generators.clone(), relators }
    }

    pub fn flip_generators(&self, gens: &[usize]) -> Presentation {
        gens.iter().fold(self.clone(), |p, &g| p.flip_generator(g))
    }

    /// Space-separated letters with runs compressed to powers, e.g.
    /// `c^-1 b^-1 c a b a^-1 c^-1 b^-1 c^2`. The empty word prints as `1`.
    pub fn format_word(&self, w: &Word) -> String {
        format_word_with(w, |g| {
            self.generators.get(g).cloned().unwrap_or_else(|| format!("?{g}"))
        })
    }
}

pub(crate) fn format_word_with(w: &Word, name: impl Fn(usize) -> String) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let letters = w.letters();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut j = i + 1;
        while j < letters.len() && letters[j] == l {
            j += 1;
        }
        let run = (j - i) as i64 * l.sign();
        let n = name(l.gen);
        parts.push(if run == 1 { n } else { format!("{n}^{run}") });
        i = j;
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // a=1, b=2, c=3
    fn w(x: &[i64]) -> Word {
        Word::from_signed(x)
    }

    fn first_example() -> Presentation {
        Presentation::from_names(
            &["a", "b", "c"],
            vec![w(&[-1, 2]), w(&[-3, -2, 3, 1, 2, -1, -3, -2, 3, 3])],
        )
    }

    #[test]
    fn free_reduction() {
        assert_eq!(w(&[1, -1]).freely_reduce(), Word::empty());
        assert_eq!(w(&[1, 2, 3]).freely_reduce(), w(&[1, 2, 3]));
        assert_eq!(w(&[1, 2, -2, 1]).freely_reduce(), w(&[1, 1]));
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w(&[1, 2, -1]).cyclically_reduce(), (w(&[2]), w(&[1])));
        assert_eq!(w(&[-1, 2]).cyclically_reduce(), (w(&[-1, 2]), Word::empty()));
        assert_eq!(w(&[2, 1, -1, -2]).cyclically_reduce(), (Word::empty(), Word::empty()));
        // this r2 starts with c^-1 and ends with c
        let r2 = &first_example().relators[1];
        assert_eq!(r2.cyclic_cancellation(), Some(9));
        assert_eq!(r2.cyclically_reduce(), (w(&[-2, 3, 1, 2, -1, -3, -2, 3]), w(&[-3])));
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(w(&[1, 2, -1]).exponent_sum(0), 0);
        assert_eq!(first_example().relators[1].exponent_sum(2), 1);
        assert_eq!(Word::empty().exponent_sum(0), 0);
    }

    #[test]
    fn flipping() {
        let p = Presentation::from_names(&["a", "b"], vec![w(&[-1, 2])]);
        let q = p.flip_generator(0);
        assert_eq!(q.relators, vec![w(&[1, 2])]);
        assert_eq!(q.flip_generator(0), p);
        let t = Presentation::from_names(&["a"], vec![w(&[1, 1])]);
        assert_eq!(t.flip_generator(0).relators, vec![w(&[-1, -1])]);
    }

    #[test]
    fn validation() {
        assert_eq!(
            first_example().validate(),
            vec![Diagnostic::NotCyclicallyReduced { relator: 1, position: 9 }]
        );
        let (core, changed) = first_example().cyclically_reduced();
        assert_eq!(changed, vec![1]);
        assert!(core.validate().is_empty());
        let bad = Presentation::from_names(&["a"], vec![w(&[1, -1])]);
        assert_eq!(
            bad.validate(),
            vec![Diagnostic::NotCyclicallyReduced { relator: 0, position: 0 }]
        );
        let empty = Presentation::from_names(&["a"], vec![Word::empty()]);
        assert_eq!(empty.validate(), vec![Diagnostic::EmptyRelator { relator: 0 }]);
        let dup = Presentation::from_names(&["a", "a"], vec![w(&[3])]);
        assert_eq!(
            dup.validate(),
            vec![
                Diagnostic::DuplicateGenerator { name: "a".into() },
                Diagnostic::UnknownGenerator { relator: 0, position: 0, gen: 2 },
            ]
        );
        assert_eq!(Presentation::from_names(&[], vec![]).validate(), vec![Diagnostic::NoGenerators]);
        // last letter against the first one
        let wrap = Presentation::from_names(&["a", "b"], vec![w(&[1, 2, -1])]);
        assert_eq!(
            wrap.validate(),
            vec![Diagnostic::NotCyclicallyReduced { relator: 0, position: 2 }]
        );
    }

    #[test]
    fn proper_powers() {
        assert!(w(&[1, 1]).is_proper_power());
        assert!(w(&[1, 2, 1, 2]).is_proper_power());
        assert!(!w(&[1, 2, 1, -2]).is_proper_power());
        assert_eq!(w(&[1, 2, 1, 2]).rotation_period(), 2);
    }

    #[test]
    fn formatting() {
        let p = first_example();
        assert_eq!(p.format_word(&p.relators[1]), "c^-1 b^-1 c a b a^-1 c^-1 b^-1 c^2");
        assert_eq!(p.format_word(&Word::empty()), "1");
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, any::<bool>()), 0..=max_len)
            .prop_map(|v| v.into_iter().map(|(gen, inverse)| Letter { gen, inverse }).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn free_reduction_idempotent_and_shrinking(x in arb_word(64)) {
            let r = x.freely_reduce();
            prop_assert!(r.len() <= x.len());
            prop_assert!(r.is_freely_reduced());
            prop_assert_eq!(r.freely_reduce(), r);
        }

        #[test]
        fn cyclic_reduction_reconstructs(x in arb_word(64)) {
            let (core, u) = x.cyclically_reduce();
            prop_assert!(core.is_cyclically_reduced());
            let rebuilt = u.concat(&core).concat(&u.inverse()).freely_reduce();
            prop_assert_eq!(rebuilt, x.freely_reduce());
        }

        #[test]
        fn flip_preserves_exponent_magnitude(x in arb_word(20), g in 0usize..3) {
            let p = Presentation::from_names(&["a", "b", "c"], vec![x]);
            let q = p.flip_generator(g);
            prop_assert_eq!(
                q.relators[0].exponent_sum(g).abs(),
                p.relators[0].exponent_sum(g).abs()
            );
            prop_assert_eq!(q.flip_generator(g), p);
        }
    }
}
