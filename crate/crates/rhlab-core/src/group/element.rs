//! Alternating-syllable normal forms and the incremental normal-form stack.

use super::{FactorKind, GroupSpec, Letter};
use std::fmt;

/// An element of a single factor.
///
/// Stored syllables are never the factor identity: vectors are nonzero,
/// residues lie in `[1, m)` and free words are nonempty and freely reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorElement {
    /// Integer vector in `Z^d`.
    Vector(Vec<i64>),
    /// Residue in `Z/m`.
    Residue(u64),
    /// Freely reduced word; letter `k+1` is `x_{k+1}`, `-(k+1)` its inverse.
    Word(Vec<i32>),
}

impl FactorElement {
    pub fn identity(kind: &FactorKind) -> FactorElement {
        match kind {
            FactorKind::FreeAbelian { rank } => FactorElement::Vector(vec![0; *rank]),
            FactorKind::FiniteCyclic { .. } => FactorElement::Residue(0),
            FactorKind::Free { .. } => FactorElement::Word(Vec::new()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            FactorElement::Vector(v) => v.iter().all(|&c| c == 0),
            FactorElement::Residue(r) => *r == 0,
            FactorElement::Word(w) => w.is_empty(),
        }
    }

    /// Distance from the factor identity in the factor generators.
    pub fn length(&self, kind: &FactorKind) -> u64 {
        match (self, kind) {
            (FactorElement::Vector(v), _) => v.iter().map(|c| c.unsigned_abs()).sum(),
            (FactorElement::Residue(r), FactorKind::FiniteCyclic { modulus }) => {
                (*r).min(modulus - r)
            }
            (FactorElement::Word(w), _) => w.len() as u64,
            _ => unreachable!("factor element does not match factor kind"),
        }
    }

    /// Distance `d(a, b)` inside the factor, allocation-free.
    pub fn dist(&self, other: &FactorElement, kind: &FactorKind) -> u64 {
        match (self, other) {
            (FactorElement::Vector(a), FactorElement::Vector(b)) => {
                a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
            }
            (FactorElement::Residue(a), FactorElement::Residue(b)) => {
                let m = match kind {
                    FactorKind::FiniteCyclic { modulus } => *modulus,
                    _ => unreachable!(),
                };
                let d = a.abs_diff(*b);
                d.min(m - d)
            }
            (FactorElement::Word(a), FactorElement::Word(b)) => {
                let lcp = a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count();
                (a.len() + b.len() - 2 * lcp) as u64
            }
            _ => unreachable!("mixed factor element kinds"),
        }
    }

    pub fn mul(&self, other: &FactorElement, kind: &FactorKind) -> FactorElement {
        match (self, other) {
            (FactorElement::Vector(a), FactorElement::Vector(b)) => {
                FactorElement::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (FactorElement::Residue(a), FactorElement::Residue(b)) => {
                let m = match kind {
                    FactorKind::FiniteCyclic { modulus } => *modulus,
                    _ => unreachable!(),
                };
                FactorElement::Residue((a + b) % m)
            }
            (FactorElement::Word(a), FactorElement::Word(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last().is_some_and(|&t| t == -l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                FactorElement::Word(out)
            }
            _ => unreachable!("mixed factor element kinds"),
        }
    }

    pub fn inverse(&self, kind: &FactorKind) -> FactorElement {
        match self {
            FactorElement::Vector(v) => FactorElement::Vector(v.iter().map(|c| -c).collect()),
            FactorElement::Residue(r) => {
                let m = match kind {
                    FactorKind::FiniteCyclic { modulus } => *modulus,
                    _ => unreachable!(),
                };
                FactorElement::Residue(if *r == 0 { 0 } else { m - r })
            }
            FactorElement::Word(w) => FactorElement::Word(w.iter().rev().map(|&l| -l).collect()),
        }
    }

    /// Right-multiply by a single generator letter of the same factor.
    pub fn apply_letter(
        &self,
        kind: &FactorKind,
        generator: usize,
        inverse: bool,
    ) -> FactorElement {
        match self {
            FactorElement::Vector(v) => {
                let mut v = v.clone();
                v[generator] += if inverse { -1 } else { 1 };
                FactorElement::Vector(v)
            }
            FactorElement::Residue(r) => {
                let m = match kind {
                    FactorKind::FiniteCyclic { modulus } => *modulus,
                    _ => unreachable!(),
                };
                FactorElement::Residue(if inverse {
                    (r + m - 1) % m
                } else {
                    (r + 1) % m
                })
            }
            FactorElement::Word(w) => {
                let l = (generator as i32 + 1) * if inverse { -1 } else { 1 };
                let mut w = w.clone();
                if w.last().is_some_and(|&t| t == -l) {
                    w.pop();
                } else {
                    w.push(l);
                }
                FactorElement::Word(w)
            }
        }
    }

    pub fn from_letter(kind: &FactorKind, generator: usize, inverse: bool) -> FactorElement {
        FactorElement::identity(kind).apply_letter(kind, generator, inverse)
    }
}

/// One syllable of a normal form: a nontrivial element of one factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: usize,
    pub elem: FactorElement,
}

/// An element of the free product in alternating-syllable normal form.
///
/// Adjacent syllables live in distinct factors and no syllable is a factor
/// identity; the empty sequence is the group identity. Equality is
/// structural, which by uniqueness of normal forms is group equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub(crate) syllables: Vec<Syllable>,
}

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement::default()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    /// Build from syllables, asserting the normal-form invariants.
    pub fn from_syllables(syllables: Vec<Syllable>) -> GroupElement {
        for (i, s) in syllables.iter().enumerate() {
            debug_assert!(!s.elem.is_identity(), "identity syllable at {i}");
            if i > 0 {
                debug_assert_ne!(
                    syllables[i - 1].factor,
                    s.factor,
                    "adjacent same-factor syllables"
                );
            }
        }
        GroupElement { syllables }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            match &s.elem {
                FactorElement::Vector(v) => write!(f, "[{}:{v:?}]", s.factor + 1)?,
                FactorElement::Residue(r) => write!(f, "[{}:t^{r}]", s.factor + 1)?,
                FactorElement::Word(w) => write!(f, "[{}:{w:?}]", s.factor + 1)?,
            }
        }
        Ok(())
    }
}

/// What a letter did to the top of an [`NfStack`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackOp {
    Pushed,
    ReplacedTop,
    Popped,
}

/// A normal form maintained incrementally under right multiplication by
/// generator letters, with cumulative syllable lengths.
///
/// Each letter touches only the top syllable, so a walk of `n` steps costs
/// `O(n)` total. This is the workhorse under every trajectory statistic.
#[derive(Debug, Clone, Default)]
pub struct NfStack {
    sylls: Vec<Syllable>,
    /// `cum[i]` = summed factor length of `sylls[..=i]`.
    cum: Vec<u64>,
    total: u64,
}

impl NfStack {
    pub fn new() -> NfStack {
        NfStack::default()
    }

    pub fn from_element(spec: &GroupSpec, x: &GroupElement) -> NfStack {
        let mut cum = Vec::with_capacity(x.syllables.len());
        let mut total = 0u64;
        for s in &x.syllables {
            total += s.elem.length(spec.factor(s.factor));
            cum.push(total);
        }
        NfStack {
            sylls: x.syllables.clone(),
            cum,
            total,
        }
    }

    pub fn depth(&self) -> usize {
        self.sylls.len()
    }

    pub fn total_length(&self) -> u64 {
        self.total
    }

    pub fn syllable(&self, i: usize) -> &Syllable {
        &self.sylls[i]
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.sylls
    }

    /// Summed length of the first `i` syllables.
    pub fn prefix_length(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.cum[i - 1]
        }
    }

    pub fn push_letter(&mut self, spec: &GroupSpec, letter: Letter) -> StackOp {
        let kind = spec.factor(letter.factor);
        if let Some(top) = self.sylls.last() {
            if top.factor == letter.factor {
                let new_elem = top
                    .elem
                    .apply_letter(kind, letter.generator, letter.inverse);
                let old_len = top.elem.length(kind);
                if new_elem.is_identity() {
                    self.sylls.pop();
                    self.cum.pop();
                    self.total -= old_len;
                    return StackOp::Popped;
                }
                let new_len = new_elem.length(kind);
                self.total = self.total - old_len + new_len;
                *self.cum.last_mut().unwrap() = self.prefix_length(self.sylls.len() - 1) + new_len;
                self.sylls.last_mut().unwrap().elem = new_elem;
                return StackOp::ReplacedTop;
            }
        }
        let elem = FactorElement::from_letter(kind, letter.generator, letter.inverse);
        let len = elem.length(kind);
        self.total += len;
        self.cum.push(self.total);
        self.sylls.push(Syllable {
            factor: letter.factor,
            elem,
        });
        StackOp::Pushed
    }

    /// Right-multiply by one syllable (merging or cancelling at the top).
    pub fn push_syllable(&mut self, spec: &GroupSpec, syllable: Syllable) -> StackOp {
        debug_assert!(!syllable.elem.is_identity());
        let kind = spec.factor(syllable.factor);
        if let Some(top) = self.sylls.last() {
            if top.factor == syllable.factor {
                let merged = top.elem.mul(&syllable.elem, kind);
                let old_len = top.elem.length(kind);
                if merged.is_identity() {
                    self.sylls.pop();
                    self.cum.pop();
                    self.total -= old_len;
                    return StackOp::Popped;
                }
                let new_len = merged.length(kind);
                self.total = self.total - old_len + new_len;
                *self.cum.last_mut().unwrap() = self.prefix_length(self.sylls.len() - 1) + new_len;
                self.sylls.last_mut().unwrap().elem = merged;
                return StackOp::ReplacedTop;
            }
        }
        let len = syllable.elem.length(kind);
        self.total += len;
        self.cum.push(self.total);
        self.sylls.push(syllable);
        StackOp::Pushed
    }

    pub fn to_element(&self) -> GroupElement {
        GroupElement {
            syllables: self.sylls.clone(),
        }
    }

    pub fn clear(&mut self) {
        self.sylls.clear();
        self.cum.clear();
        self.total = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2z2() -> GroupSpec {
        GroupSpec::parse("Z^2*Z^2").unwrap()
    }

    #[test]
    fn stack_tracks_lengths() {
        let spec = z2z2();
        let mut st = NfStack::new();
        let word = ["a1", "a1", "b2", "a1^-1"];
        for w in word {
            st.push_letter(&spec, spec.parse_letter(w).unwrap());
        }
        assert_eq!(st.depth(), 3);
        assert_eq!(st.total_length(), 4);
        assert_eq!(st.prefix_length(1), 2);
        assert_eq!(st.prefix_length(2), 3);
        let e = st.to_element();
        assert_eq!(e.syllables()[0].elem, FactorElement::Vector(vec![2, 0]));
        assert_eq!(e.syllables()[2].elem, FactorElement::Vector(vec![-1, 0]));
    }

    #[test]
    fn stack_pops_cancelled_syllables() {
        let spec = z2z2();
        let mut st = NfStack::new();
        for w in ["a1", "b1", "b1^-1", "a2"] {
            st.push_letter(&spec, spec.parse_letter(w).unwrap());
        }
        assert_eq!(st.depth(), 1);
        assert_eq!(st.total_length(), 2);
        assert_eq!(
            st.to_element().syllables()[0].elem,
            FactorElement::Vector(vec![1, 1])
        );
    }

    #[test]
    fn residue_arithmetic_wraps() {
        let kind = FactorKind::FiniteCyclic { modulus: 4 };
        let t3 = FactorElement::Residue(3);
        assert_eq!(t3.length(&kind), 1);
        assert_eq!(t3.inverse(&kind), FactorElement::Residue(1));
        assert_eq!(t3.apply_letter(&kind, 0, false), FactorElement::Residue(0));
        assert_eq!(FactorElement::Residue(2).length(&kind), 2);
    }

    #[test]
    fn free_words_reduce() {
        let kind = FactorKind::Free { rank: 2 };
        let w = FactorElement::Word(vec![1, 2]);
        let v = FactorElement::Word(vec![-2, -1, 1]);
        assert_eq!(w.mul(&v, &kind), FactorElement::Word(vec![1]));
        assert_eq!(w.inverse(&kind), FactorElement::Word(vec![-2, -1]));
    }
}
