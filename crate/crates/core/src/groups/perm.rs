//! Permutations and permutation-inversion operations.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A permutation of `{0, .., n-1}` stored in one-line notation.
///
/// `images[i]` is the label that sphere `i` receives, so applying `p` to a
/// cluster moves the sphere labelled `i` to slot `p(i)`. Composition follows
/// the matrix product: `p.compose(&q)` applies `q` first.
///
/// The derived ordering is lexicographic on the one-line form, which is the
/// canonical ordering used for every group listing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &j in &images {
            if j >= n || seen[j] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[j] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from disjoint cycles of 0-based labels.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle {cycle:?} is out of range or not disjoint"
                    )));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    /// Non-trivial cycles, each starting at its smallest element, ordered by
    /// that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle notation with 1-based labels; `E` for the identity.
    pub fn to_cycle_string(&self) -> String {
        if self.is_identity() {
            return "E".to_string();
        }
        let spaced = self.len() >= 10;
        let mut s = String::new();
        for cycle in self.cycles() {
            s.push('(');
            let labels: Vec<String> = cycle.iter().map(|i| (i + 1).to_string()).collect();
            s.push_str(&labels.join(if spaced { " " } else { "" }));
            s.push(')');
        }
        s
    }

    /// Parses cycle notation over `n` points. Accepts `E`, `()`, compact
    /// single-digit cycles like `(1234)(56)` and separated cycles like
    /// `(9 10)` or `(1,2)`.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "E" || text == "()" {
            return Ok(Self::identity(n));
        }
        let bad = || Error::InvalidPermutation(format!("cannot parse cycle notation {text:?}"));
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            let body_start = rest_trim.strip_prefix('(').ok_or_else(bad)?;
            let close = body_start.find(')').ok_or_else(bad)?;
            let body = body_start[..close].trim();
            rest = &body_start[close + 1..];
            if body.is_empty() {
                continue;
            }
            let labels: Vec<usize> = if body.contains(|c: char| c.is_whitespace() || c == ',') {
                body.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect::<Result<_>>()?
            };
            if labels.iter().any(|&l| l == 0 || l > n) {
                return Err(bad());
            }
            cycles.push(labels.into_iter().map(|l| l - 1).collect::<Vec<_>>());
        }
        Self::from_cycles(n, &cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

/// A permutation paired with an inversion sign δ ∈ {+1, −1}.
///
/// Ordering puts δ = +1 before δ = −1 for equal permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PIOperation {
    pub perm: Permutation,
    /// `true` when δ = −1.
    pub inverted: bool,
}

impl PIOperation {
    pub fn new(perm: Permutation, inverted: bool) -> Self {
        Self { perm, inverted }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Permutation::identity(n), false)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn sign(&self) -> f64 {
        if self.inverted {
            -1.0
        } else {
            1.0
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.inverted && self.perm.is_identity()
    }

    /// `(P, δ)(Q, μ) = (PQ, δμ)`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.perm.compose(&other.perm), self.inverted ^ other.inverted)
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.perm.inverse(), self.inverted)
    }

    /// Cycle notation with a trailing `*` for δ = −1.
    pub fn to_notation(&self) -> String {
        let mut s = self.perm.to_cycle_string();
        if self.inverted {
            s.push('*');
        }
        s
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let (body, inverted) = match text.strip_suffix('*') {
            Some(b) => (b, true),
            None => (text, false),
        };
        Ok(Self::new(Permutation::parse_cycles(body, n)?, inverted))
    }
}

impl fmt::Display for PIOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_notation())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(images).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cycle_notation_examples() {
        let p = Permutation::parse_cycles("(12)(34)", 6).unwrap();
        assert_eq!(p.images(), &[1, 0, 3, 2, 4, 5]);
        assert_eq!(p.to_cycle_string(), "(12)(34)");
        let q = PIOperation::parse("(56)*", 6).unwrap();
        assert!(q.inverted);
        assert_eq!(q.to_notation(), "(56)*");
        assert_eq!(PIOperation::parse("E", 4).unwrap(), PIOperation::identity(4));
        assert_eq!(PIOperation::parse("E*", 4).unwrap().to_notation(), "E*");
        let big = Permutation::parse_cycles("(9 10)", 10).unwrap();
        assert_eq!(big.to_cycle_string(), "(9 10)");
        assert_eq!(Permutation::parse_cycles("(1,2)", 3).unwrap().images(), &[1, 0, 2]);
    }

    #[test]
    fn cycle_strings_start_at_smallest_label() {
        let p = Permutation::parse_cycles("(3142)", 4).unwrap();
        assert_eq!(p.to_cycle_string(), "(1423)");
    }

    #[test]
    fn rejects_malformed_notation() {
        assert!(Permutation::parse_cycles("(12", 3).is_err());
        assert!(Permutation::parse_cycles("(14)", 3).is_err());
        assert!(Permutation::parse_cycles("(12)(23)", 3).is_err());
        assert!(Permutation::parse_cycles("12", 3).is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn composition_applies_right_operand_first() {
        let p = Permutation::parse_cycles("(12)", 3).unwrap();
        let q = Permutation::parse_cycles("(23)", 3).unwrap();
        // q sends 2->3, then p leaves 3 alone.
        assert_eq!(p.compose(&q).apply(1), 2);
        assert_eq!(p.compose(&q).to_cycle_string(), "(123)");
    }

    #[test]
    fn pi_ordering_puts_plus_before_minus() {
        let e = PIOperation::identity(3);
        let e_star = PIOperation::new(Permutation::identity(3), true);
        let swap = PIOperation::new(Permutation::parse_cycles("(23)", 3).unwrap(), false);
        let mut v = vec![swap.clone(), e_star.clone(), e.clone()];
        v.sort();
        assert_eq!(v, vec![e, e_star, swap]);
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn notation_round_trips(p in (1usize..13).prop_flat_map(arb_perm), inv in any::<bool>()) {
            let n = p.len();
            let op = PIOperation::new(p, inv);
            prop_assert_eq!(PIOperation::parse(&op.to_notation(), n).unwrap(), op);
        }

        #[test]
        fn inverse_composes_to_identity(p in (1usize..9).prop_flat_map(arb_perm)) {
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }
    }
}
