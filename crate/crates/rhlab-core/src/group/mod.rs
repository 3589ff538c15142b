//! Free products of elementary factors: specs, generators, normal forms,
//! canonical geodesics and a breadth-first-search oracle.
//!
//! A group is described by an ordered list of factors, each of which is a
//! free abelian group `Z^d`, a finite cyclic group `Z/m` or a free group
//! `F_r`. Elements are kept in alternating-syllable normal form, which makes
//! the word metric, geodesics and peripheral projections exactly computable.

mod ball;
mod element;
mod geodesic;
mod product;

pub use ball::Ball;
pub use element::{FactorElement, GroupElement, NfStack, StackOp, Syllable};
pub(crate) use geodesic::factor_path_point;
pub use geodesic::{factor_geodesic_hull, FactorHull, GeodesicPath};
pub use product::FreeProduct;

use crate::error::{Error, Result};
use std::fmt;

/// One factor of a free product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FactorKind {
    /// `Z^d` with the standard generators `e_1..e_d`, `d >= 1`.
    FreeAbelian { rank: usize },
    /// `Z/m` with a single generator, `m >= 2`.
    FiniteCyclic { modulus: u64 },
    /// `F_r` with free generators `x_1..x_r`, `r >= 1`.
    Free { rank: usize },
}

impl FactorKind {
    pub fn generator_count(&self) -> usize {
        match self {
            FactorKind::FreeAbelian { rank } => *rank,
            FactorKind::FiniteCyclic { .. } => 1,
            FactorKind::Free { rank } => *rank,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FactorKind::FiniteCyclic { .. })
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorKind::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            FactorKind::FiniteCyclic { modulus } => write!(f, "Z/{modulus}"),
            FactorKind::Free { rank } => write!(f, "F_{rank}"),
        }
    }
}

/// A generator letter of the free product, possibly inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub factor: usize,
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inverted(self) -> Letter {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }
}

/// An ordered list of factors describing a free product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<FactorKind>,
}

impl GroupSpec {
    pub fn new(factors: Vec<FactorKind>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::invalid("a group spec needs at least one factor"));
        }
        for (i, kind) in factors.iter().enumerate() {
            let ok = match kind {
                FactorKind::FreeAbelian { rank } => *rank >= 1,
                FactorKind::FiniteCyclic { modulus } => *modulus >= 2,
                FactorKind::Free { rank } => *rank >= 1,
            };
            if !ok {
                return Err(Error::invalid(format!(
                    "factor #{} out of range: {kind}",
                    i + 1
                )));
            }
        }
        Ok(GroupSpec { factors })
    }

    /// Parse the `Z^d*Z/m*F_r` grammar with positioned errors.
    pub fn parse(input: &str) -> Result<Self> {
        let mut factors = Vec::new();
        let mut pos = 0usize;
        for (idx, token) in input.split('*').enumerate() {
            if idx > 0 {
                pos += 1; // the '*'
            }
            let token_start = pos;
            pos += token.len();
            let t = token.trim();
            let offset = token_start + (token.len() - token.trim_start().len());
            if t.is_empty() {
                return Err(Error::parse(token_start, "empty factor token"));
            }
            let factor = if let Some(rest) = t.strip_prefix("Z^") {
                let rank: usize = rest
                    .parse()
                    .map_err(|_| Error::parse(offset + 2, format!("bad rank `{rest}`")))?;
                if rank < 1 {
                    return Err(Error::parse(offset + 2, "Z^d needs d >= 1"));
                }
                FactorKind::FreeAbelian { rank }
            } else if let Some(rest) = t.strip_prefix("Z/") {
                let modulus: u64 = rest
                    .parse()
                    .map_err(|_| Error::parse(offset + 2, format!("bad modulus `{rest}`")))?;
                if modulus < 2 {
                    return Err(Error::parse(offset + 2, "Z/m needs m >= 2"));
                }
                FactorKind::FiniteCyclic { modulus }
            } else if let Some(rest) = t.strip_prefix("F_") {
                let rank: usize = rest
                    .parse()
                    .map_err(|_| Error::parse(offset + 2, format!("bad rank `{rest}`")))?;
                if rank < 1 {
                    return Err(Error::parse(offset + 2, "F_r needs r >= 1"));
                }
                FactorKind::Free { rank }
            } else if t == "Z" {
                FactorKind::FreeAbelian { rank: 1 }
            } else {
                return Err(Error::parse(
                    offset,
                    format!("unknown factor token `{t}` (expected Z^d, Z/m or F_r)"),
                ));
            };
            factors.push(factor);
        }
        GroupSpec::new(factors)
    }

    pub fn factors(&self) -> &[FactorKind] {
        &self.factors
    }

    pub fn factor(&self, index: usize) -> &FactorKind {
        &self.factors[index]
    }

    pub fn render(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// All generator letters together with their inverses, in a fixed order.
    ///
    /// For each factor in order and each generator in order the positive
    /// letter comes first, immediately followed by its inverse. An involution
    /// (the generator of `Z/2`) is listed once.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (factor, kind) in self.factors.iter().enumerate() {
            let involution = matches!(kind, FactorKind::FiniteCyclic { modulus: 2 });
            for generator in 0..kind.generator_count() {
                out.push(Letter {
                    factor,
                    generator,
                    inverse: false,
                });
                if !involution {
                    out.push(Letter {
                        factor,
                        generator,
                        inverse: true,
                    });
                }
            }
        }
        out
    }

    /// Render a letter: aliases `a..z` by factor position, `^-1` for inverses.
    pub fn letter_name(&self, letter: Letter) -> String {
        let base = if letter.factor < 26 {
            let c = (b'a' + letter.factor as u8) as char;
            format!("{c}{}", letter.generator + 1)
        } else {
            format!("g{}_{}", letter.factor + 1, letter.generator + 1)
        };
        if letter.inverse {
            format!("{base}^-1")
        } else {
            base
        }
    }

    /// Parse a letter name in either the alias (`b2`) or the explicit
    /// (`g2_2`) form, with an optional `^-1` suffix.
    pub fn parse_letter(&self, name: &str) -> Result<Letter> {
        let (body, inverse) = match name.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (name, false),
        };
        let err = || Error::invalid(format!("unknown letter `{name}`"));
        let (factor, generator) = if let Some(rest) = body.strip_prefix('g') {
            let (f, g) = rest.split_once('_').ok_or_else(err)?;
            let f: usize = f.parse().map_err(|_| err())?;
            let g: usize = g.parse().map_err(|_| err())?;
            if f == 0 || g == 0 {
                return Err(err());
            }
            (f - 1, g - 1)
        } else {
            let mut chars = body.chars();
            let alias = chars.next().ok_or_else(err)?;
            if !alias.is_ascii_lowercase() {
                return Err(err());
            }
            let g: usize = chars.as_str().parse().map_err(|_| err())?;
            if g == 0 {
                return Err(err());
            }
            ((alias as u8 - b'a') as usize, g - 1)
        };
        if factor >= self.factors.len() || generator >= self.factors[factor].generator_count() {
            return Err(err());
        }
        Ok(Letter {
            factor,
            generator,
            inverse,
        })
    }

    /// Parse a whitespace-separated word of letter names.
    pub fn parse_word(&self, word: &str) -> Result<Vec<Letter>> {
        word.split_whitespace()
            .map(|t| self.parse_letter(t))
            .collect()
    }

    /// Check the hypotheses required by the tracking experiments: at least
    /// two peripheral sets, every peripheral subgroup of infinite index with
    /// unbounded stabiliser orbits, and not the infinite dihedral case.
    pub fn nontrivial_rh(&self) -> Result<()> {
        if self.factors.len() < 2 {
            return Err(Error::HypothesisViolation(format!(
                "at least 2 peripheral sets are required, got {} factor(s)",
                self.factors.len()
            )));
        }
        if self
            .factors
            .iter()
            .all(|f| matches!(f, FactorKind::FiniteCyclic { modulus: 2 }))
            && self.factors.len() == 2
        {
            return Err(Error::HypothesisViolation(
                "Z/2*Z/2 is virtually cyclic (infinite dihedral)".into(),
            ));
        }
        for (i, kind) in self.factors.iter().enumerate() {
            if kind.is_finite() {
                return Err(Error::HypothesisViolation(format!(
                    "all peripheral subgroups have infinite index with unbounded stabiliser orbits: factor #{} ({kind}) is finite",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
