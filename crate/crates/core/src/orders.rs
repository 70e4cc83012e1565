//! Left-ordered target groups for weight homomorphisms.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::braid::{braid_sign, BraidError, BraidSign, BraidWord};
use crate::presentation::{Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("generator {0} has no image")]
    UnassignedGenerator(usize),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("cannot parse {input:?} as an element of {target}: {reason}")]
    BadElement { input: String, target: String, reason: String },
}

/// A group with a total order invariant under left multiplication.
pub trait OrderedTarget {
    type Element: Clone + fmt::Debug;

    fn identity(&self) -> Self::Element;
    fn multiply(&self, g: &Self::Element, h: &Self::Element) -> Self::Element;
    fn inverse(&self, g: &Self::Element) -> Self::Element;
    fn compare(&self, g: &Self::Element, h: &Self::Element) -> Result<Ordering, OrderError>;

    /// Short spec string, e.g. `z` or `braid:4:opp`.
    fn name(&self) -> String;
    fn format_element(&self, g: &Self::Element) -> String;
    fn parse_element(&self, s: &str) -> Result<Self::Element, OrderError>;

    /// Integer targets require nonnegative generator images (invert the
    /// negative generators first).
    fn requires_nonnegative_images(&self) -> bool {
        false
    }

    fn equal(&self, g: &Self::Element, h: &Self::Element) -> Result<bool, OrderError> {
        Ok(self.compare(g, h)? == Ordering::Equal)
    }

    /// Whether the generator images generate the whole target; `None` when
    /// this cannot be decided here.
    fn images_generate(&self, _images: &[Self::Element]) -> Option<bool> {
        None
    }

    /// Whether local indicability of the target is a known fact rather than
    /// an assumption.
    fn locally_indicable_known(&self) -> bool {
        false
    }
}

/// `ℤ` with the usual order.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntTarget;

impl OrderedTarget for IntTarget {
    type Element = BigInt;

    fn identity(&self) -> BigInt {
        BigInt::zero()
    }
    fn multiply(&self, g: &BigInt, h: &BigInt) -> BigInt {
        g + h
    }
    fn inverse(&self, g: &BigInt) -> BigInt {
        -g
    }
    fn compare(&self, g: &BigInt, h: &BigInt) -> Result<Ordering, OrderError> {
        Ok(g.cmp(h))
    }
    fn name(&self) -> String {
        "z".into()
    }
    fn format_element(&self, g: &BigInt) -> String {
        g.to_string()
    }
    fn parse_element(&self, s: &str) -> Result<BigInt, OrderError> {
        s.trim().parse().map_err(|_| OrderError::BadElement {
            input: s.into(),
            target: self.name(),
            reason: "expected an integer".into(),
        })
    }
    fn requires_nonnegative_images(&self) -> bool {
        true
    }
    fn images_generate(&self, images: &[BigInt]) -> Option<bool> {
        let g = images.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        Some(g == BigInt::from(1))
    }
    fn locally_indicable_known(&self) -> bool {
        true
    }
}

/// `ℤᵈ` with componentwise addition and the lexicographic order.
#[derive(Clone, Copy, Debug)]
pub struct LexTarget {
    pub dim: usize,
}

impl OrderedTarget for LexTarget {
    type Element = Vec<BigInt>;

    fn identity(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.dim]
    }
    fn multiply(&self, g: &Vec<BigInt>, h: &Vec<BigInt>) -> Vec<BigInt> {
        g.iter().zip(h).map(|(a, b)| a + b).collect()
    }
    fn inverse(&self, g: &Vec<BigInt>) -> Vec<BigInt> {
        g.iter().map(|a| -a).collect()
    }
    fn compare(&self, g: &Vec<BigInt>, h: &Vec<BigInt>) -> Result<Ordering, OrderError> {
        Ok(g.cmp(h))
    }
    fn name(&self) -> String {
        format!("zlex:{}", self.dim)
    }
    fn format_element(&self, g: &Vec<BigInt>) -> String {
        g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":")
    }
    fn parse_element(&self, s: &str) -> Result<Vec<BigInt>, OrderError> {
        let bad = |reason: String| OrderError::BadElement {
            input: s.into(),
            target: self.name(),
            reason,
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != self.dim {
            return Err(bad(format!("expected {} colon-separated integers", self.dim)));
        }
        parts
            .iter()
            .map(|p| p.parse::<BigInt>().map_err(|_| bad(format!("{p:?} is not an integer"))))
            .collect()
    }
    fn locally_indicable_known(&self) -> bool {
        true
    }
}

/// The braid group `B_n` under the Dehornoy order (`1 < g` iff `g` is
/// σ-positive), or its opposite.
#[derive(Clone, Copy, Debug)]
pub struct BraidTarget {
    pub strands: usize,
    pub opposite: bool,
}

impl OrderedTarget for BraidTarget {
    type Element = BraidWord;

    fn identity(&self) -> BraidWord {
        BraidWord::identity()
    }
    fn multiply(&self, g: &BraidWord, h: &BraidWord) -> BraidWord {
        g.mul(h)
    }
    fn inverse(&self, g: &BraidWord) -> BraidWord {
        g.inverse()
    }
    fn compare(&self, g: &BraidWord, h: &BraidWord) -> Result<Ordering, OrderError> {
        let ord = match braid_sign(&g.inverse().mul(h), self.strands)? {
            BraidSign::Positive => Ordering::Less,
            BraidSign::Negative => Ordering::Greater,
            BraidSign::Trivial => Ordering::Equal,
        };
        Ok(if self.opposite { ord.reverse() } else { ord })
    }
    fn name(&self) -> String {
        if self.opposite {
            format!("braid:{}:opp", self.strands)
        } else {
            format!("braid:{}", self.strands)
        }
    }
    fn format_element(&self, g: &BraidWord) -> String {
        g.to_string()
    }
    /// `e`, or `.`-separated letters `s<i>` / `s<i>^-1`.
    fn parse_element(&self, s: &str) -> Result<BraidWord, OrderError> {
        let bad = |reason: String| OrderError::BadElement {
            input: s.into(),
            target: self.name(),
            reason,
        };
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(BraidWord::identity());
        }
        let mut out = Vec::new();
        for part in s.split('.') {
            let (body, inv) = match part.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (part, false),
            };
            let idx: i32 = body
                .strip_prefix('s')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| bad(format!("{part:?} is not of the form s<i> or s<i>^-1")))?;
            if idx < 1 || idx as usize >= self.strands {
                return Err(bad(format!("s{idx} is not a generator of B_{}", self.strands)));
            }
            out.push(if inv { -idx } else { idx });
        }
        Ok(BraidWord(out))
    }
}

/// Parsed `--target` value: `z`, `zlex:<d>` or `braid:<n>[:opp]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetSpec {
    Int,
    Lex(usize),
    Braid { strands: usize, opposite: bool },
}

impl FromStr for TargetSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["z"] => Ok(TargetSpec::Int),
            ["zlex", d] => match d.parse::<usize>() {
                Ok(d) if d >= 1 => Ok(TargetSpec::Lex(d)),
                _ => Err(format!("bad dimension in target {s:?}")),
            },
            ["braid", n, rest @ ..] => {
                let strands = match n.parse::<usize>() {
                    Ok(n) if n >= 2 => n,
                    _ => return Err(format!("bad strand count in target {s:?}")),
                };
                match rest {
                    [] => Ok(TargetSpec::Braid { strands, opposite: false }),
                    ["opp"] => Ok(TargetSpec::Braid { strands, opposite: true }),
                    _ => Err(format!("unknown braid order suffix in {s:?}")),
                }
            }
            _ => Err(format!("unknown target {s:?} (expected z, zlex:<d>, braid:<n>[:opp])")),
        }
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Int => write!(f, "z"),
            TargetSpec::Lex(d) => write!(f, "zlex:{d}"),
            TargetSpec::Braid { strands, opposite: false } => write!(f, "braid:{strands}"),
            TargetSpec::Braid { strands, opposite: true } => write!(f, "braid:{strands}:opp"),
        }
    }
}

/// Images of the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment<E> {
    pub images: Vec<Option<E>>,
}

impl<E: Clone> Assignment<E> {
    pub fn new(images: Vec<E>) -> Self {
        Assignment { images: images.into_iter().map(Some).collect() }
    }

    pub fn image(&self, gen: usize) -> Result<&E, OrderError> {
        self.images
            .get(gen)
            .and_then(|x| x.as_ref())
            .ok_or(OrderError::UnassignedGenerator(gen))
    }
}

impl Assignment<BigInt> {
    pub fn from_weights(weights: &[i64]) -> Self {
        Assignment::new(weights.iter().map(|&w| BigInt::from(w)).collect())
    }
}

/// `φ(w)`, the product of the letter images.
pub fn evaluate_word<T: OrderedTarget>(
    target: &T,
    assignment: &Assignment<T::Element>,
    w: &Word,
) -> Result<T::Element, OrderError> {
    let mut acc = target.identity();
    for l in w.iter() {
        let img = assignment.image(l.gen)?;
        acc = if l.inverse {
            target.multiply(&acc, &target.inverse(img))
        } else {
            target.multiply(&acc, img)
        };
    }
    Ok(acc)
}

/// Whether every relator is sent to the identity.
pub fn verify_assignment<T: OrderedTarget>(
    target: &T,
    assignment: &Assignment<T::Element>,
    p: &Presentation,
) -> Result<bool, OrderError> {
    for r in &p.relators {
        let v = evaluate_word(target, assignment, r)?;
        if !target.equal(&v, &target.identity())? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(x: &[i64]) -> Word {
        Word::from_signed(x)
    }

    const B4: BraidTarget = BraidTarget { strands: 4, opposite: false };
    const B4_OPP: BraidTarget = BraidTarget { strands: 4, opposite: true };

    fn named_b4() -> Assignment<BraidWord> {
        Assignment::new(vec![BraidWord::sigma(1), BraidWord::sigma(2), BraidWord::sigma(3)])
    }

    fn first_example() -> Presentation {
        Presentation::from_names(
            &["a", "b", "c"],
            vec![w(&[-1, 2]), w(&[-3, -2, 3, 1, 2, -1, -3, -2, 3, 3])],
        )
    }

    #[test]
    fn evaluate_examples() {
        let ones = Assignment::from_weights(&[1, 1, 1]);
        assert_eq!(evaluate_word(&IntTarget, &ones, &w(&[-1, 2])).unwrap(), BigInt::zero());
        assert_eq!(evaluate_word(&IntTarget, &ones, &Word::empty()).unwrap(), BigInt::zero());
        let v = evaluate_word(&B4, &named_b4(), &w(&[1, 3, -1, -3])).unwrap();
        assert!(B4.equal(&v, &B4.identity()).unwrap());
        let partial: Assignment<BigInt> = Assignment { images: vec![Some(1.into()), None] };
        assert_eq!(
            evaluate_word(&IntTarget, &partial, &w(&[1, 2])),
            Err(OrderError::UnassignedGenerator(1))
        );
    }

    #[test]
    fn verify_examples() {
        let braid = Presentation::from_names(
            &["x", "y", "z"],
            vec![
                w(&[-1, 3, 3, 3, 3, 1, -3, -3, -3, 2, 3, -2, -3, -2]),
                w(&[-2, -1, -2, -3, 1, 3, 2, 3, 1, -3]),
            ],
        );
        assert!(verify_assignment(&B4_OPP, &named_b4(), &braid).unwrap());
        assert!(verify_assignment(&IntTarget, &Assignment::from_weights(&[1, 1, 1]), &first_example())
            .unwrap());
        assert!(!verify_assignment(&IntTarget, &Assignment::from_weights(&[1, 2, 1]), &first_example())
            .unwrap());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(IntTarget.compare(&(-2).into(), &(-1).into()).unwrap(), Ordering::Less);
        let s3 = BraidWord::sigma(3);
        assert_eq!(B4.compare(&BraidWord::identity(), &s3).unwrap(), Ordering::Less);
        assert_eq!(B4_OPP.compare(&BraidWord::identity(), &s3).unwrap(), Ordering::Greater);
        let lex = LexTarget { dim: 2 };
        let a = vec![BigInt::from(0), BigInt::from(5)];
        let b = vec![BigInt::from(1), BigInt::from(-9)];
        assert_eq!(lex.compare(&a, &b).unwrap(), Ordering::Less);
    }

    #[test]
    fn target_specs() {
        assert_eq!("z".parse::<TargetSpec>(), Ok(TargetSpec::Int));
        assert_eq!("zlex:3".parse::<TargetSpec>(), Ok(TargetSpec::Lex(3)));
        assert_eq!(
            "braid:4:opp".parse::<TargetSpec>(),
            Ok(TargetSpec::Braid { strands: 4, opposite: true })
        );
        assert!("braid:1".parse::<TargetSpec>().is_err());
        assert!("q".parse::<TargetSpec>().is_err());
        for s in ["z", "zlex:2", "braid:3", "braid:4:opp"] {
            assert_eq!(s.parse::<TargetSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn element_parsing() {
        assert_eq!(B4.parse_element("s1.s3^-1").unwrap(), BraidWord(vec![1, -3]));
        assert_eq!(B4.parse_element("e").unwrap(), BraidWord::identity());
        assert!(B4.parse_element("s4").is_err());
        assert_eq!(LexTarget { dim: 2 }.parse_element("1:-2").unwrap(), vec![1.into(), (-2).into()]);
        assert!(LexTarget { dim: 2 }.parse_element("1").is_err());
        assert_eq!(IntTarget.parse_element("-7").unwrap(), BigInt::from(-7));
    }
}
