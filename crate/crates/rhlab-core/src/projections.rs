//! Peripheral cosets and exact closest-point projections.
//!
//! The peripheral collection consists of all left cosets `g·A_j` of the
//! factors. In a free product these cosets are the pieces of a tree-graded
//! structure, so the closest-point projection onto a coset is a single gate
//! point, computed exactly from normal forms. The cross-projection minimum
//! between distinct cosets is identically zero here, which certifies the
//! projection constants of the ambient theory as `0` in these models.

use crate::error::{Error, Result};
use crate::group::{FreeProduct, GroupElement, Syllable};
use std::fmt;

/// Canonical handle of a left coset `prefix·A_j`.
///
/// The prefix never ends in a syllable of factor `factor`, which makes the
/// handle unique, so structural equality is coset equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeripheralCoset {
    prefix: GroupElement,
    factor: usize,
}

impl PeripheralCoset {
    /// Canonical handle of `g·A_j`: a trailing `A_j`-syllable of `g` is
    /// absorbed into the coset.
    pub fn new(g: &GroupElement, factor: usize) -> PeripheralCoset {
        let mut syllables = g.syllables().to_vec();
        if syllables.last().is_some_and(|s| s.factor == factor) {
            syllables.pop();
        }
        PeripheralCoset {
            prefix: GroupElement::from_syllables(syllables),
            factor,
        }
    }

    pub fn prefix(&self) -> &GroupElement {
        &self.prefix
    }

    pub fn factor(&self) -> usize {
        self.factor
    }

    /// Report rendering: `<prefix word>·<factor alias>`.
    pub fn render(&self, group: &FreeProduct) -> String {
        let prefix = if self.prefix.is_identity() {
            "1".to_string()
        } else {
            group
                .canonical_letters(&self.prefix)
                .iter()
                .map(|&l| group.spec().letter_name(l))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let alias = if self.factor < 26 {
            ((b'A' + self.factor as u8) as char).to_string()
        } else {
            format!("G{}", self.factor + 1)
        };
        format!("{prefix}·{alias}")
    }
}

/// The exact nearest point of a coset together with its distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionResult {
    pub point: GroupElement,
    pub distance: u64,
}

impl fmt::Display for ProjectionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, d={})", self.point, self.distance)
    }
}

impl FreeProduct {
    /// Exact closest-point projection of `x` onto the coset `P`.
    ///
    /// Writing `prefix⁻¹·x = a·u` with `a` the leading `A_j`-syllable
    /// (identity if there is none), the unique gate is `prefix·a` at
    /// distance `|u|`.
    pub fn project_point(&self, coset: &PeripheralCoset, x: &GroupElement) -> ProjectionResult {
        let h = self.left_difference(&coset.prefix, x);
        let (leading, tail_length) = match h.syllables().first() {
            Some(s) if s.factor == coset.factor => {
                let rest: u64 = h.syllables()[1..]
                    .iter()
                    .map(|s| s.elem.length(self.spec().factor(s.factor)))
                    .sum();
                (Some(s.clone()), rest)
            }
            _ => (None, self.word_length(&h)),
        };
        let point = match leading {
            Some(s) => self.multiply(&coset.prefix, &GroupElement::from_syllables(vec![s])),
            None => coset.prefix.clone(),
        };
        ProjectionResult {
            point,
            distance: tail_length,
        }
    }

    /// Distance between the projections of `x` and `y` onto `P`.
    pub fn coset_distance(
        &self,
        coset: &PeripheralCoset,
        x: &GroupElement,
        y: &GroupElement,
    ) -> u64 {
        let px = self.project_point(coset, x).point;
        let py = self.project_point(coset, y).point;
        self.distance(&px, &py)
    }

    /// The single gate point `π_P(Q)` of a distinct coset `Q`.
    pub fn project_coset(&self, p: &PeripheralCoset, q: &PeripheralCoset) -> Result<GroupElement> {
        if p == q {
            return Err(Error::invalid("project_coset requires distinct cosets"));
        }
        Ok(self.project_point(p, &q.prefix).point)
    }

    /// `min{ d(π_P(x), π_P(Q)), d(π_Q(x), π_Q(P)) }` for distinct `P, Q`.
    ///
    /// Identically zero on these models; the test suites certify that.
    pub fn behrstock_min(
        &self,
        x: &GroupElement,
        p: &PeripheralCoset,
        q: &PeripheralCoset,
    ) -> Result<u64> {
        if p == q {
            return Err(Error::invalid("behrstock_min requires distinct cosets"));
        }
        let at_p = self.distance(&self.project_point(p, x).point, &self.project_coset(p, q)?);
        let at_q = self.distance(&self.project_point(q, x).point, &self.project_coset(q, p)?);
        Ok(at_p.min(at_q))
    }

    /// The syllable cosets of `x`: for each syllable, the coset it crosses
    /// and the factor length of the crossing. These are exactly the cosets
    /// with a nonzero projection distance from `1` to `x`.
    pub fn syllable_cosets(&self, x: &GroupElement) -> Vec<(PeripheralCoset, u64)> {
        let mut out = Vec::with_capacity(x.syllable_count());
        let mut prefix: Vec<Syllable> = Vec::new();
        for s in x.syllables() {
            let coset = PeripheralCoset {
                prefix: GroupElement::from_syllables(prefix.clone()),
                factor: s.factor,
            };
            out.push((coset, s.elem.length(self.spec().factor(s.factor))));
            prefix.push(s.clone());
        }
        out
    }

    /// Maximum over all peripheral cosets of `coset_distance(H, 1, x)`,
    /// with an attaining coset. Only syllable cosets can contribute, so
    /// this is the maximum syllable length, found in linear time.
    pub fn max_projection(&self, x: &GroupElement) -> (u64, Option<PeripheralCoset>) {
        let mut best: Option<(u64, usize)> = None;
        for (i, s) in x.syllables().iter().enumerate() {
            let len = s.elem.length(self.spec().factor(s.factor));
            if best.is_none_or(|(b, _)| len > b) {
                best = Some((len, i));
            }
        }
        match best {
            Some((len, i)) => {
                let coset = PeripheralCoset {
                    prefix: GroupElement::from_syllables(x.syllables()[..i].to_vec()),
                    factor: x.syllables()[i].factor,
                };
                (len, Some(coset))
            }
            None => (0, None),
        }
    }
}
