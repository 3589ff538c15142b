//! Geodesic frames and prefix cursors.
//!
//! A frame holds the syllable decomposition of `w = x⁻¹y` with arc prefix
//! sums; a cursor maintains the normal form of `x⁻¹s` for a point `s` moving
//! by generator steps, together with the longest common syllable prefix with
//! the frame. Every point-versus-geodesic statistic reduces to the data in a
//! [`PointView`]: the split position, the suffix lengths and the branching
//! syllable.

use crate::group::{FactorElement, FreeProduct, GroupElement, NfStack, StackOp, Syllable};

/// Syllable decomposition of a geodesic target with arc positions.
#[derive(Debug, Clone)]
pub(crate) struct GeodesicFrame {
    sylls: Vec<Syllable>,
    /// `arc[t]` = position of cut vertex `v_t` along any geodesic; length `p + 1`.
    arc: Vec<u64>,
}

impl GeodesicFrame {
    pub fn new(group: &FreeProduct, w: &GroupElement) -> GeodesicFrame {
        let mut arc = Vec::with_capacity(w.syllable_count() + 1);
        arc.push(0);
        let mut pos = 0u64;
        for s in w.syllables() {
            pos += s.elem.length(group.spec().factor(s.factor));
            arc.push(pos);
        }
        GeodesicFrame {
            sylls: w.syllables().to_vec(),
            arc,
        }
    }

    pub fn syllable_count(&self) -> usize {
        self.sylls.len()
    }

    pub fn syllable(&self, t: usize) -> &Syllable {
        &self.sylls[t]
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.sylls
    }

    pub fn arc(&self, t: usize) -> u64 {
        self.arc[t]
    }

    pub fn total(&self) -> u64 {
        *self.arc.last().unwrap()
    }

    pub fn block_len(&self, t: usize) -> u64 {
        self.arc[t + 1] - self.arc[t]
    }

    /// Transient mask over arc positions `0..=total` for depth `R`:
    /// a vertex is transient iff it sits within `R` of a cut vertex of its
    /// syllable segment.
    pub fn transient_mask(&self, depth: u64) -> Vec<bool> {
        let total = self.total() as usize;
        let mut mask = vec![false; total + 1];
        mask[0] = true;
        for t in 0..self.syllable_count() {
            let start = self.arc[t];
            let len = self.block_len(t);
            for k in 0..=len {
                if k <= depth || k + depth >= len {
                    mask[(start + k) as usize] = true;
                }
            }
        }
        mask
    }

    /// View of a point given as a normal form `tau = x⁻¹s`.
    pub fn view_of_element(&self, group: &FreeProduct, tau: &GroupElement) -> PointView {
        let lcp = tau
            .syllables()
            .iter()
            .zip(&self.sylls)
            .take_while(|(a, b)| a == b)
            .count();
        let total = group.word_length(tau);
        self.view_parts(lcp, total, tau.syllables().get(lcp), group)
    }

    /// View from an incrementally maintained stack with known common prefix.
    pub fn view_of_stack(&self, group: &FreeProduct, stack: &NfStack, lcp: usize) -> PointView {
        let syl = if lcp < stack.depth() {
            Some(stack.syllable(lcp))
        } else {
            None
        };
        self.view_parts(lcp, stack.total_length(), syl, group)
    }

    /// View of `base` extended on the right by one optional syllable,
    /// without mutating the base stack.
    pub fn view_of_extended(
        &self,
        group: &FreeProduct,
        base: &NfStack,
        base_lcp: usize,
        extra: Option<&Syllable>,
    ) -> PointView {
        let Some(s) = extra else {
            return self.view_of_stack(group, base, base_lcp);
        };
        let spec = group.spec();
        let kind = spec.factor(s.factor);
        let depth = base.depth();
        let (lcp, total, at_lcp): (usize, u64, Option<Syllable>) =
            if depth > 0 && base.syllable(depth - 1).factor == s.factor {
                let top = base.syllable(depth - 1);
                let merged = top.elem.mul(&s.elem, kind);
                let top_len = top.elem.length(kind);
                if merged.is_identity() {
                    let lcp = base_lcp.min(depth - 1);
                    let total = base.total_length() - top_len;
                    let at = if lcp < depth - 1 {
                        Some(base.syllable(lcp).clone())
                    } else {
                        None
                    };
                    (lcp, total, at)
                } else {
                    let merged_syl = Syllable {
                        factor: s.factor,
                        elem: merged,
                    };
                    let lcp = if base_lcp >= depth - 1 {
                        let matched = self.sylls.get(depth - 1).is_some_and(|f| *f == merged_syl);
                        depth - 1 + usize::from(matched)
                    } else {
                        base_lcp
                    };
                    let total = base.total_length() - top_len + merged_syl.elem.length(kind);
                    let at = if lcp < depth {
                        Some(if lcp == depth - 1 {
                            merged_syl
                        } else {
                            base.syllable(lcp).clone()
                        })
                    } else {
                        None
                    };
                    (lcp, total, at)
                }
            } else {
                let lcp = if base_lcp == depth && self.sylls.get(depth).is_some_and(|f| f == s) {
                    depth + 1
                } else {
                    base_lcp
                };
                let total = base.total_length() + s.elem.length(kind);
                let at = if lcp < depth + 1 {
                    Some(if lcp == depth {
                        s.clone()
                    } else {
                        base.syllable(lcp).clone()
                    })
                } else {
                    None
                };
                (lcp, total, at)
            };
        self.view_parts(lcp, total, at_lcp.as_ref(), group)
    }

    fn view_parts(
        &self,
        lcp: usize,
        total: u64,
        next: Option<&Syllable>,
        group: &FreeProduct,
    ) -> PointView {
        debug_assert!(lcp <= self.sylls.len());
        let d_left = total - self.arc[lcp];
        let split = match next {
            Some(s) if lcp < self.sylls.len() && s.factor == self.sylls[lcp].factor => {
                let tau_len = s.elem.length(group.spec().factor(s.factor));
                Some(SplitData {
                    tau: s.elem.clone(),
                    rest: d_left - tau_len,
                })
            }
            _ => None,
        };
        PointView { lcp, d_left, split }
    }
}

/// Same-factor branching data of a point against a frame.
#[derive(Debug, Clone)]
pub(crate) struct SplitData {
    /// The point's syllable at the split position (same factor as the
    /// frame's syllable there).
    pub tau: FactorElement,
    /// Distance from the point to its gate on the split block.
    pub rest: u64,
}

/// Everything point-versus-geodesic statistics need about one point.
#[derive(Debug, Clone)]
pub(crate) struct PointView {
    /// Number of leading syllables shared with the frame (`l`).
    pub lcp: usize,
    /// `d(s, v_l)`: the suffix length beyond the shared prefix.
    pub d_left: u64,
    /// Present when the point branches inside the block of syllable `l`.
    pub split: Option<SplitData>,
}

/// A normal form `x⁻¹s` maintained under generator steps of `s`, with the
/// longest common syllable prefix against a fixed frame.
#[derive(Debug, Clone)]
pub(crate) struct PrefixCursor {
    pub stack: NfStack,
    pub lcp: usize,
}

impl PrefixCursor {
    /// Cursor at `s = x` (empty difference).
    pub fn new() -> PrefixCursor {
        PrefixCursor {
            stack: NfStack::new(),
            lcp: 0,
        }
    }

    /// Cursor at an arbitrary starting difference.
    pub fn from_element(
        group: &FreeProduct,
        frame: &GeodesicFrame,
        tau: &GroupElement,
    ) -> PrefixCursor {
        let stack = NfStack::from_element(group.spec(), tau);
        let lcp = tau
            .syllables()
            .iter()
            .zip(frame.syllables())
            .take_while(|(a, b)| a == b)
            .count();
        PrefixCursor { stack, lcp }
    }

    pub fn push(
        &mut self,
        group: &FreeProduct,
        frame: &GeodesicFrame,
        letter: crate::group::Letter,
    ) {
        let op = self.stack.push_letter(group.spec(), letter);
        let depth = self.stack.depth();
        match op {
            StackOp::Pushed => {
                if self.lcp == depth - 1
                    && frame
                        .syllables()
                        .get(depth - 1)
                        .is_some_and(|s| s == self.stack.syllable(depth - 1))
                {
                    self.lcp = depth;
                }
            }
            StackOp::ReplacedTop => {
                if self.lcp >= depth - 1 {
                    let matched = frame
                        .syllables()
                        .get(depth - 1)
                        .is_some_and(|s| s == self.stack.syllable(depth - 1));
                    self.lcp = depth - 1 + usize::from(matched);
                }
            }
            StackOp::Popped => {
                self.lcp = self.lcp.min(depth);
            }
        }
        debug_assert!(self.lcp <= frame.syllable_count());
    }

    /// Advance by a whole syllable.
    pub fn push_syllable(
        &mut self,
        group: &FreeProduct,
        frame: &GeodesicFrame,
        syllable: Syllable,
    ) {
        let op = self.stack.push_syllable(group.spec(), syllable);
        let depth = self.stack.depth();
        match op {
            StackOp::Pushed | StackOp::ReplacedTop => {
                if self.lcp >= depth - 1 {
                    let matched = frame
                        .syllables()
                        .get(depth - 1)
                        .is_some_and(|s| s == self.stack.syllable(depth - 1));
                    self.lcp = depth - 1 + usize::from(matched);
                }
            }
            StackOp::Popped => {
                self.lcp = self.lcp.min(depth);
            }
        }
    }

    pub fn view(&self, group: &FreeProduct, frame: &GeodesicFrame) -> PointView {
        frame.view_of_stack(group, &self.stack, self.lcp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cursor_lcp_tracks_direct_comparison() {
        let g = FreeProduct::parse("Z^2*Z/3*F_1").unwrap();
        let y = g.normalize_str("a1 a1 b1 a2 c1 c1").unwrap();
        let frame = GeodesicFrame::new(&g, &y);
        let mut cursor = PrefixCursor::new();
        let mut stack = NfStack::new();
        let word = "a1 a1 b1 b1 b1 a2 a2^-1 a1^-1 a1^-1 a1 a1 b1 a2 c1 c1^-1 c1 c1";
        for token in word.split_whitespace() {
            let letter = g.spec().parse_letter(token).unwrap();
            cursor.push(&g, &frame, letter);
            stack.push_letter(g.spec(), letter);
            let direct = frame.view_of_element(&g, &stack.to_element());
            let incr = cursor.view(&g, &frame);
            assert_eq!(direct.lcp, incr.lcp, "after {token}");
            assert_eq!(direct.d_left, incr.d_left, "after {token}");
            assert_eq!(
                direct
                    .split
                    .as_ref()
                    .map(|s| (&s.tau == &incr.split.as_ref().unwrap().tau, s.rest)),
                incr.split.as_ref().map(|s| (true, s.rest)),
                "after {token}"
            );
        }
    }

    #[test]
    fn transient_mask_example() {
        // syllables of length 5, 1, 6 at depth 1
        let g = FreeProduct::parse("Z^2*Z^2").unwrap();
        let w = g
            .normalize_str("a1 a1 a1 a1 a1 b2 a1 a1 a1 a2 a2 a2")
            .unwrap();
        let frame = GeodesicFrame::new(&g, &w);
        let mask = frame.transient_mask(1);
        let deep: Vec<usize> = (0..mask.len()).filter(|&i| !mask[i]).collect();
        assert_eq!(deep, vec![2, 3, 8, 9, 10]);
    }
}
