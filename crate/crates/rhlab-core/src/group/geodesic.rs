//! Canonical geodesics and per-factor geodesic hulls.
//!
//! Geodesics from `x` to `y` traverse the syllables of `x⁻¹y` in order;
//! the only freedom is the path chosen inside each factor. The canonical
//! representative spells free-abelian syllables in coordinate order, takes
//! the shorter arc in finite cyclic factors (ties toward positive powers)
//! and the unique reduced path in free factors.

use super::element::{FactorElement, GroupElement};
use super::product::FreeProduct;
use super::{FactorKind, Letter};
use crate::error::{Error, Result};

/// A concrete geodesic path with materialized vertices.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    pub start: GroupElement,
    pub letters: Vec<Letter>,
    /// Prefix products `start, start·l₁, …`; `vertices.len() == letters.len() + 1`.
    pub vertices: Vec<GroupElement>,
    /// Interior positions where the path crosses from one syllable to the next.
    pub transition_indices: Vec<usize>,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn end(&self) -> &GroupElement {
        self.vertices.last().unwrap()
    }
}

/// The canonical letter sequence spelling one factor element.
pub(crate) fn factor_canonical_letters(
    kind: &FactorKind,
    factor: usize,
    elem: &FactorElement,
) -> Vec<Letter> {
    let mut out = Vec::new();
    match (elem, kind) {
        (FactorElement::Vector(v), _) => {
            for (generator, &c) in v.iter().enumerate() {
                for _ in 0..c.unsigned_abs() {
                    out.push(Letter {
                        factor,
                        generator,
                        inverse: c < 0,
                    });
                }
            }
        }
        (FactorElement::Residue(r), FactorKind::FiniteCyclic { modulus }) => {
            let forward = *r <= modulus - r;
            let steps = if forward { *r } else { modulus - r };
            for _ in 0..steps {
                out.push(Letter {
                    factor,
                    generator: 0,
                    inverse: !forward,
                });
            }
        }
        (FactorElement::Word(w), _) => {
            for &l in w {
                out.push(Letter {
                    factor,
                    generator: (l.unsigned_abs() - 1) as usize,
                    inverse: l < 0,
                });
            }
        }
        _ => unreachable!("factor element does not match factor kind"),
    }
    out
}

/// The vertex of the canonical factor path at arc position `k`.
pub(crate) fn factor_path_point(kind: &FactorKind, elem: &FactorElement, k: u64) -> FactorElement {
    match (elem, kind) {
        (FactorElement::Vector(v), _) => {
            let mut p = vec![0i64; v.len()];
            let mut left = k;
            for (c, &target) in v.iter().enumerate() {
                let take = left.min(target.unsigned_abs());
                p[c] = if target < 0 {
                    -(take as i64)
                } else {
                    take as i64
                };
                left -= take;
                if left == 0 {
                    break;
                }
            }
            debug_assert_eq!(left, 0, "arc position beyond path length");
            FactorElement::Vector(p)
        }
        (FactorElement::Residue(r), FactorKind::FiniteCyclic { modulus }) => {
            let forward = *r <= modulus - r;
            FactorElement::Residue(if forward {
                k % modulus
            } else {
                (modulus - k % modulus) % modulus
            })
        }
        (FactorElement::Word(w), _) => FactorElement::Word(w[..k as usize].to_vec()),
        _ => unreachable!(),
    }
}

impl FreeProduct {
    /// Letters of the canonical geodesic spelling `w` from the identity.
    pub fn canonical_letters(&self, w: &GroupElement) -> Vec<Letter> {
        let mut out = Vec::new();
        for s in w.syllables() {
            out.extend(factor_canonical_letters(
                self.spec().factor(s.factor),
                s.factor,
                &s.elem,
            ));
        }
        out
    }

    /// The canonical geodesic from `x` to `y` with materialized vertices.
    pub fn canonical_geodesic(&self, x: &GroupElement, y: &GroupElement) -> GeodesicPath {
        let w = self.left_difference(x, y);
        let letters = self.canonical_letters(&w);
        let mut vertices = Vec::with_capacity(letters.len() + 1);
        vertices.push(x.clone());
        let mut cur = x.clone();
        for &l in &letters {
            cur = self.mul_letter(&cur, l);
            vertices.push(cur.clone());
        }
        let mut transition_indices = Vec::new();
        let mut pos = 0u64;
        for (i, s) in w.syllables().iter().enumerate() {
            pos += s.elem.length(self.spec().factor(s.factor));
            if i + 1 < w.syllable_count() {
                transition_indices.push(pos as usize);
            }
        }
        GeodesicPath {
            start: x.clone(),
            letters,
            vertices,
            transition_indices,
        }
    }
}

/// The union of all geodesics from the factor identity to a factor element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorHull {
    /// Axis-aligned integer box spanned by `0` and the corner.
    Box { corner: Vec<i64> },
    /// Short arc(s) on the `m`-cycle; both arcs at the antipode.
    Arc {
        modulus: u64,
        residue: u64,
        both: bool,
    },
    /// The unique reduced path in a free factor.
    Path { word: Vec<i32> },
}

impl FactorHull {
    pub fn point_count(&self) -> u64 {
        match self {
            FactorHull::Box { corner } => corner
                .iter()
                .map(|c| c.unsigned_abs() + 1)
                .fold(1u64, |a, b| a.saturating_mul(b)),
            FactorHull::Arc {
                modulus,
                residue,
                both,
            } => {
                if *both {
                    *modulus
                } else {
                    (*residue).min(modulus - residue) + 1
                }
            }
            FactorHull::Path { word } => word.len() as u64 + 1,
        }
    }

    pub fn contains(&self, p: &FactorElement) -> bool {
        match (self, p) {
            (FactorHull::Box { corner }, FactorElement::Vector(v)) => {
                v.len() == corner.len()
                    && v.iter().zip(corner).all(|(&x, &c)| {
                        if c >= 0 {
                            0 <= x && x <= c
                        } else {
                            c <= x && x <= 0
                        }
                    })
            }
            (
                FactorHull::Arc {
                    modulus,
                    residue,
                    both,
                },
                FactorElement::Residue(r),
            ) => {
                if *both {
                    true
                } else if *residue <= modulus - residue {
                    *r <= *residue
                } else {
                    *r == 0 || *r >= *residue
                }
            }
            (FactorHull::Path { word }, FactorElement::Word(w)) => {
                w.len() <= word.len() && word[..w.len()] == w[..]
            }
            _ => false,
        }
    }

    /// All hull points, subject to a size guard.
    pub fn enumerate(&self, guard: u64) -> Result<Vec<FactorElement>> {
        let count = self.point_count();
        if count > guard {
            return Err(Error::ResourceGuard(format!(
                "factor hull has {count} points, guard is {guard}"
            )));
        }
        let mut out = Vec::with_capacity(count as usize);
        match self {
            FactorHull::Box { corner } => {
                let mut p = vec![0i64; corner.len()];
                loop {
                    out.push(FactorElement::Vector(p.clone()));
                    // mixed-radix increment toward the corner
                    let mut c = 0;
                    loop {
                        if c == corner.len() {
                            return Ok(out);
                        }
                        let target = corner[c];
                        let step = if target >= 0 { 1 } else { -1 };
                        if p[c] != target {
                            p[c] += step;
                            break;
                        }
                        p[c] = 0;
                        c += 1;
                    }
                }
            }
            FactorHull::Arc {
                modulus,
                residue,
                both,
            } => {
                if *both {
                    for r in 0..*modulus {
                        out.push(FactorElement::Residue(r));
                    }
                } else if *residue <= modulus - residue {
                    for r in 0..=*residue {
                        out.push(FactorElement::Residue(r));
                    }
                } else {
                    out.push(FactorElement::Residue(0));
                    for r in *residue..*modulus {
                        out.push(FactorElement::Residue(r));
                    }
                }
            }
            FactorHull::Path { word } => {
                for k in 0..=word.len() {
                    out.push(FactorElement::Word(word[..k].to_vec()));
                }
            }
        }
        Ok(out)
    }
}

/// The set of points lying on some geodesic from the factor identity to `e`.
pub fn factor_geodesic_hull(kind: &FactorKind, e: &FactorElement) -> FactorHull {
    match (e, kind) {
        (FactorElement::Vector(v), _) => FactorHull::Box { corner: v.clone() },
        (FactorElement::Residue(r), FactorKind::FiniteCyclic { modulus }) => FactorHull::Arc {
            modulus: *modulus,
            residue: *r,
            both: modulus % 2 == 0 && *r == modulus / 2,
        },
        (FactorElement::Word(w), _) => FactorHull::Path { word: w.clone() },
        _ => unreachable!(),
    }
}
