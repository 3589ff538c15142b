//! Brute-force breadth-first enumeration of metric balls.
//!
//! The ball is the validation oracle for the word metric: every distance it
//! reports is a plain BFS distance in the Cayley graph, independent of the
//! normal-form arithmetic it checks.

use super::element::GroupElement;
use super::product::FreeProduct;
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Default element-count guard for [`FreeProduct::enumerate_ball`].
pub const BALL_GUARD: usize = 10_000_000;

/// An exact metric ball with BFS distances.
#[derive(Debug, Clone)]
pub struct Ball {
    elements: Vec<GroupElement>,
    distances: Vec<u32>,
    index: HashMap<GroupElement, usize>,
    radius: u32,
}

impl Ball {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in BFS discovery order (identity first, distances ascending).
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn distance(&self, x: &GroupElement) -> Option<u32> {
        self.index.get(x).map(|&i| self.distances[i])
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.index.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, u32)> {
        self.elements.iter().zip(self.distances.iter().copied())
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.radius as usize + 1];
        for &d in &self.distances {
            sizes[d as usize] += 1;
        }
        sizes
    }
}

impl FreeProduct {
    /// Exact ball of the given radius via BFS over generator moves.
    pub fn enumerate_ball(&self, radius: u32) -> Result<Ball> {
        self.enumerate_ball_guarded(radius, BALL_GUARD)
    }

    pub fn enumerate_ball_guarded(&self, radius: u32, guard: usize) -> Result<Ball> {
        let mut elements = vec![GroupElement::identity()];
        let mut distances = vec![0u32];
        let mut index = HashMap::new();
        index.insert(GroupElement::identity(), 0usize);

        let mut frontier_start = 0usize;
        for d in 1..=radius {
            let frontier_end = elements.len();
            for i in frontier_start..frontier_end {
                let base = elements[i].clone();
                for &l in self.letters() {
                    let next = self.mul_letter(&base, l);
                    if !index.contains_key(&next) {
                        if elements.len() >= guard {
                            return Err(Error::ResourceGuard(format!(
                                "ball of radius {radius} exceeds {guard} elements"
                            )));
                        }
                        index.insert(next.clone(), elements.len());
                        elements.push(next);
                        distances.push(d);
                    }
                }
            }
            frontier_start = frontier_end;
        }

        Ok(Ball {
            elements,
            distances,
            index,
            radius,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_one_ball_of_z2_z2() {
        let g = FreeProduct::parse("Z^2*Z^2").unwrap();
        let ball = g.enumerate_ball(1).unwrap();
        assert_eq!(ball.len(), 9); // identity + 8 generators
    }

    #[test]
    fn radius_two_ball_of_z2_z2() {
        let g = FreeProduct::parse("Z^2*Z^2").unwrap();
        let ball = g.enumerate_ball(2).unwrap();
        assert_eq!(ball.len(), 57);
    }

    #[test]
    fn free_group_sphere_sizes() {
        let g = FreeProduct::parse("F_2").unwrap();
        let ball = g.enumerate_ball(5).unwrap();
        let sizes = ball.sphere_sizes();
        assert_eq!(sizes[0], 1);
        for k in 1..=5usize {
            assert_eq!(sizes[k], 4 * 3usize.pow(k as u32 - 1));
        }
    }

    #[test]
    fn bfs_distance_matches_word_length() {
        let g = FreeProduct::parse("Z^2*Z/3").unwrap();
        let ball = g.enumerate_ball(4).unwrap();
        for (e, d) in ball.iter() {
            assert_eq!(g.word_length(e), d as u64, "element {e}");
        }
    }

    #[test]
    fn guard_trips() {
        let g = FreeProduct::parse("F_2").unwrap();
        assert!(g.enumerate_ball_guarded(5, 100).is_err());
    }
}
