//! Shared brute-force oracles, independent of the implementation paths
//! they check: geodesics are enumerated letter by letter, distances are
//! naive scans.

use rhlab_core::{FactorKind, FreeProduct, GroupElement, Letter};

/// All letter sequences spelling one factor element.
fn factor_paths(
    group: &FreeProduct,
    factor: usize,
    elem: &rhlab_core::FactorElement,
) -> Vec<Vec<Letter>> {
    let kind = group.spec().factor(factor);
    match (elem, kind) {
        (rhlab_core::FactorElement::Vector(v), _) => {
            // distinct interleavings of the per-coordinate steps
            let mut steps: Vec<Letter> = Vec::new();
            for (generator, &c) in v.iter().enumerate() {
                for _ in 0..c.unsigned_abs() {
                    steps.push(Letter {
                        factor,
                        generator,
                        inverse: c < 0,
                    });
                }
            }
            let mut out = Vec::new();
            permute_multiset(&mut steps, 0, &mut out);
            out
        }
        (rhlab_core::FactorElement::Residue(r), FactorKind::FiniteCyclic { modulus }) => {
            let mut out = Vec::new();
            let fwd = Letter {
                factor,
                generator: 0,
                inverse: false,
            };
            if *r <= modulus - r {
                out.push(vec![fwd; *r as usize]);
            }
            if modulus - r <= *r {
                out.push(vec![fwd.inverted(); (modulus - r) as usize]);
            }
            out
        }
        (rhlab_core::FactorElement::Word(w), _) => {
            vec![w
                .iter()
                .map(|&l| Letter {
                    factor,
                    generator: (l.unsigned_abs() - 1) as usize,
                    inverse: l < 0,
                })
                .collect()]
        }
        _ => unreachable!(),
    }
}

fn permute_multiset(steps: &mut Vec<Letter>, from: usize, out: &mut Vec<Vec<Letter>>) {
    if from == steps.len() {
        out.push(steps.clone());
        return;
    }
    let mut seen: Vec<Letter> = Vec::new();
    for i in from..steps.len() {
        if seen.contains(&steps[i]) {
            continue;
        }
        seen.push(steps[i]);
        steps.swap(from, i);
        permute_multiset(steps, from + 1, out);
        steps.swap(from, i);
    }
}

/// Every geodesic from `x` to `y` as a vertex sequence, or `None` if there
/// are more than `cap`.
pub fn enumerate_geodesics(
    group: &FreeProduct,
    x: &GroupElement,
    y: &GroupElement,
    cap: usize,
) -> Option<Vec<Vec<GroupElement>>> {
    let w = group.left_difference(x, y);
    let per_syllable: Vec<Vec<Vec<Letter>>> = w
        .syllables()
        .iter()
        .map(|s| factor_paths(group, s.factor, &s.elem))
        .collect();
    let mut total = 1usize;
    for p in &per_syllable {
        total = total.checked_mul(p.len())?;
        if total > cap {
            return None;
        }
    }
    let mut geodesics = vec![vec![x.clone()]];
    for paths in &per_syllable {
        let mut next = Vec::new();
        for g in &geodesics {
            for p in paths {
                let mut extended = g.clone();
                let mut cur = extended.last().unwrap().clone();
                for &l in p {
                    cur = group.mul_letter(&cur, l);
                    extended.push(cur.clone());
                }
                next.push(extended);
            }
        }
        geodesics = next;
    }
    Some(geodesics)
}

/// Transient flags per vertex position for any geodesic from `x` to `y`
/// (positions within `depth` of a syllable boundary).
pub fn transient_positions(
    group: &FreeProduct,
    x: &GroupElement,
    y: &GroupElement,
    depth: u64,
) -> Vec<bool> {
    let w = group.left_difference(x, y);
    let total = group.word_length(&w) as usize;
    let mut mask = vec![false; total + 1];
    mask[0] = true;
    let mut pos = 0u64;
    for s in w.syllables() {
        let len = s.elem.length(group.spec().factor(s.factor));
        for k in 0..=len {
            if k <= depth || k + depth >= len {
                mask[(pos + k) as usize] = true;
            }
        }
        pos += len;
    }
    mask
}

/// Naive Hausdorff distance between two point sets.
pub fn naive_hausdorff(group: &FreeProduct, a: &[GroupElement], b: &[GroupElement]) -> u64 {
    let one_way = |from: &[GroupElement], to: &[GroupElement]| {
        from.iter()
            .map(|p| to.iter().map(|q| group.distance(p, q)).min().unwrap())
            .max()
            .unwrap()
    };
    one_way(a, b).max(one_way(b, a))
}

/// Deterministic random normal forms from word sampling.
pub struct WordSampler {
    state: u64,
}

impl WordSampler {
    pub fn new(seed: u64) -> WordSampler {
        WordSampler { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        // splitmix64, good enough for test-case generation
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn element(&mut self, group: &FreeProduct, length: usize) -> GroupElement {
        let letters = group.letters();
        let word: Vec<Letter> = (0..length)
            .map(|_| letters[(self.next_u64() % letters.len() as u64) as usize])
            .collect();
        group.normalize(&word)
    }

    pub fn below(&mut self, k: usize) -> usize {
        (self.next_u64() % k as u64) as usize
    }
}
