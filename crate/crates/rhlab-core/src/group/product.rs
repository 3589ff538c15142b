//! The free product context: group operations on normal forms.

use super::element::{FactorElement, GroupElement, NfStack, Syllable};
use super::{GroupSpec, Letter};
use crate::error::{Error, Result};

/// A free product of elementary factors, owning the spec and the generator
/// table. All operations are pure functions on immutable values.
#[derive(Debug, Clone)]
pub struct FreeProduct {
    spec: GroupSpec,
    letters: Vec<Letter>,
}

impl FreeProduct {
    pub fn new(spec: GroupSpec) -> FreeProduct {
        let letters = spec.letters();
        FreeProduct { spec, letters }
    }

    pub fn parse(input: &str) -> Result<FreeProduct> {
        Ok(FreeProduct::new(GroupSpec::parse(input)?))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// The symmetric generating set `S ∪ S⁻¹` in the fixed order.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Normal form of a word in the generators.
    pub fn normalize(&self, word: &[Letter]) -> GroupElement {
        let mut st = NfStack::new();
        for &l in word {
            st.push_letter(&self.spec, l);
        }
        st.to_element()
    }

    /// Normal form of a word given by letter names, e.g. `"a1 b1 a1^-1"`.
    pub fn normalize_str(&self, word: &str) -> Result<GroupElement> {
        Ok(self.normalize(&self.spec.parse_word(word)?))
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut out = x.syllables.clone();
        for s in &y.syllables {
            self.push_syllable(&mut out, s.clone());
        }
        GroupElement { syllables: out }
    }

    fn push_syllable(&self, out: &mut Vec<Syllable>, s: Syllable) {
        debug_assert!(!s.elem.is_identity());
        if let Some(top) = out.last() {
            if top.factor == s.factor {
                let kind = self.spec.factor(s.factor);
                let merged = top.elem.mul(&s.elem, kind);
                if merged.is_identity() {
                    out.pop();
                } else {
                    out.last_mut().unwrap().elem = merged;
                }
                return;
            }
        }
        out.push(s);
    }

    pub fn invert(&self, x: &GroupElement) -> GroupElement {
        GroupElement {
            syllables: x
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    factor: s.factor,
                    elem: s.elem.inverse(self.spec.factor(s.factor)),
                })
                .collect(),
        }
    }

    /// `x⁻¹ · y`, the most common compound.
    pub fn left_difference(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.multiply(&self.invert(x), y)
    }

    /// Word length `d(1, x)`: the sum of the factor lengths of the syllables.
    pub fn word_length(&self, x: &GroupElement) -> u64 {
        x.syllables
            .iter()
            .map(|s| s.elem.length(self.spec.factor(s.factor)))
            .sum()
    }

    /// Graph distance `d(x, y)` in the Cayley graph of `S ∪ S⁻¹`,
    /// computed from the common syllable prefix without building `x⁻¹y`.
    pub fn distance(&self, x: &GroupElement, y: &GroupElement) -> u64 {
        let lcp = x
            .syllables
            .iter()
            .zip(&y.syllables)
            .take_while(|(a, b)| a == b)
            .count();
        let tail = |e: &GroupElement| -> u64 {
            e.syllables[lcp..]
                .iter()
                .map(|s| s.elem.length(self.spec.factor(s.factor)))
                .sum()
        };
        let mut d = tail(x) + tail(y);
        // a same-factor branch pair merges into one syllable
        if let (Some(a), Some(b)) = (x.syllables.get(lcp), y.syllables.get(lcp)) {
            if a.factor == b.factor {
                let kind = self.spec.factor(a.factor);
                d = d - a.elem.length(kind) - b.elem.length(kind) + a.elem.dist(&b.elem, kind);
            }
        }
        d
    }

    /// Right-multiply by a single letter.
    pub fn mul_letter(&self, x: &GroupElement, letter: Letter) -> GroupElement {
        let kind = self.spec.factor(letter.factor);
        let mut syllables = x.syllables.clone();
        if let Some(top) = syllables.last() {
            if top.factor == letter.factor {
                let merged = top
                    .elem
                    .apply_letter(kind, letter.generator, letter.inverse);
                if merged.is_identity() {
                    syllables.pop();
                } else {
                    syllables.last_mut().unwrap().elem = merged;
                }
                return GroupElement { syllables };
            }
        }
        syllables.push(Syllable {
            factor: letter.factor,
            elem: FactorElement::from_letter(kind, letter.generator, letter.inverse),
        });
        GroupElement { syllables }
    }

    /// Check that an element is a valid normal form over this spec.
    /// Rejects elements built over a different spec.
    pub fn validate(&self, x: &GroupElement) -> Result<()> {
        let nf = self.spec.factors().len();
        for (i, s) in x.syllables.iter().enumerate() {
            if s.factor >= nf {
                return Err(Error::invalid(format!(
                    "syllable {i} references factor {} of a different spec",
                    s.factor + 1
                )));
            }
            let kind = self.spec.factor(s.factor);
            let shape_ok = match (&s.elem, kind) {
                (FactorElement::Vector(v), super::FactorKind::FreeAbelian { rank }) => {
                    v.len() == *rank
                }
                (FactorElement::Residue(r), super::FactorKind::FiniteCyclic { modulus }) => {
                    *r < *modulus
                }
                (FactorElement::Word(w), super::FactorKind::Free { rank }) => {
                    w.iter().enumerate().all(|(j, &l)| {
                        l != 0 && l.unsigned_abs() as usize <= *rank && (j == 0 || w[j - 1] != -l)
                    })
                }
                _ => false,
            };
            if !shape_ok {
                return Err(Error::invalid(format!(
                    "syllable {i} does not fit factor {} ({kind})",
                    s.factor + 1,
                )));
            }
            if s.elem.is_identity() {
                return Err(Error::invalid(format!("identity syllable at {i}")));
            }
            if i > 0 && x.syllables[i - 1].factor == s.factor {
                return Err(Error::invalid(format!(
                    "adjacent syllables {i} share factor {}",
                    s.factor + 1
                )));
            }
        }
        Ok(())
    }
}
