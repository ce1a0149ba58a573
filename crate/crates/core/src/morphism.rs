//! Typed maps between incidence structures.
//!
//! A [`StructureMap`] is a pair of index vectors. For isomorphisms and
//! embeddings the point part lands on target points and the line part on
//! target lines; for correlations the sorts are swapped. Maps do not hold
//! the structures they relate: checks take source and target explicitly.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::IncidenceStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Isomorphism,
    Correlation,
    Embedding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMap {
    pub kind: MapKind,
    /// Image of each source point (a target point, or a target line for correlations).
    pub point_part: Vec<usize>,
    /// Image of each source line (a target line, or a target point for correlations).
    pub line_part: Vec<usize>,
    /// Number of points and lines of the target.
    pub target_shape: (usize, usize),
}

impl StructureMap {
    pub fn identity(s: &IncidenceStructure) -> Self {
        StructureMap {
            kind: MapKind::Isomorphism,
            point_part: (0..s.num_points()).collect(),
            line_part: (0..s.num_lines()).collect(),
            target_shape: (s.num_points(), s.num_lines()),
        }
    }

    pub fn source_shape(&self) -> (usize, usize) {
        (self.point_part.len(), self.line_part.len())
    }

    /// Sizes of the target sorts hit by the point part and the line part.
    fn image_sizes(&self) -> (usize, usize) {
        match self.kind {
            MapKind::Correlation => (self.target_shape.1, self.target_shape.0),
            _ => self.target_shape,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind == MapKind::Isomorphism
            && self.target_shape == self.source_shape()
            && self.point_part.iter().enumerate().all(|(i, &j)| i == j)
            && self.line_part.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &StructureMap) -> Result<StructureMap> {
        let kind = match (self.kind, other.kind) {
            (MapKind::Isomorphism, k) | (k, MapKind::Isomorphism) => k,
            (MapKind::Correlation, MapKind::Correlation) => MapKind::Isomorphism,
            (MapKind::Embedding, MapKind::Embedding) => MapKind::Embedding,
            (a, b) => {
                return Err(Error::InvalidMap(format!(
                    "cannot compose {a:?} after {b:?}"
                )))
            }
        };
        // Sorts reached by `other` must be the sorts `self` is defined on.
        if other.target_shape != self.source_shape() {
            return Err(Error::InvalidMap(format!(
                "sort mismatch: inner map targets {:?}, outer map is defined on {:?}",
                other.target_shape,
                self.source_shape()
            )));
        }
        let (pp, lp) = if other.kind == MapKind::Correlation {
            (
                other.point_part.iter().map(|&l| self.line_part[l]).collect(),
                other.line_part.iter().map(|&p| self.point_part[p]).collect(),
            )
        } else {
            (
                other.point_part.iter().map(|&p| self.point_part[p]).collect(),
                other.line_part.iter().map(|&l| self.line_part[l]).collect(),
            )
        };
        Ok(StructureMap {
            kind,
            point_part: pp,
            line_part: lp,
            target_shape: self.target_shape,
        })
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> Result<StructureMap> {
        if self.kind == MapKind::Embedding {
            return Err(Error::InvalidMap("embeddings have no inverse".into()));
        }
        let (ip, il) = self.image_sizes();
        let inv_p = invert(&self.point_part, ip)
            .ok_or_else(|| Error::InvalidMap("point part is not a bijection".into()))?;
        let inv_l = invert(&self.line_part, il)
            .ok_or_else(|| Error::InvalidMap("line part is not a bijection".into()))?;
        let (point_part, line_part) = match self.kind {
            MapKind::Correlation => (inv_l, inv_p),
            _ => (inv_p, inv_l),
        };
        Ok(StructureMap {
            kind: self.kind,
            point_part,
            line_part,
            target_shape: self.source_shape(),
        })
    }

    /// Verifies the map between `source` and `target`.
    ///
    /// Returns `Ok(false)` when injectivity, bijectivity (for isomorphisms and
    /// correlations) or incidence fails; `Err` when the map is not total on
    /// the source or does not fit the target.
    pub fn check(&self, source: &IncidenceStructure, target: &IncidenceStructure) -> Result<bool> {
        Ok(self.check_witness(source, target)?.is_none())
    }

    /// Like [`check`](Self::check) but describes the first failure found.
    pub fn check_witness(
        &self,
        source: &IncidenceStructure,
        target: &IncidenceStructure,
    ) -> Result<Option<String>> {
        if self.point_part.len() != source.num_points() || self.line_part.len() != source.num_lines() {
            return Err(Error::InvalidMap(format!(
                "map covers {}/{} points/lines, source has {}/{}",
                self.point_part.len(),
                self.line_part.len(),
                source.num_points(),
                source.num_lines()
            )));
        }
        if self.target_shape != (target.num_points(), target.num_lines()) {
            return Err(Error::InvalidMap("target shape mismatch".into()));
        }
        let (ip, il) = self.image_sizes();
        if self.point_part.iter().any(|&x| x >= ip) || self.line_part.iter().any(|&x| x >= il) {
            return Err(Error::InvalidMap("image index out of range".into()));
        }
        if !injective(&self.point_part) {
            return Ok(Some("point part is not injective".into()));
        }
        if !injective(&self.line_part) {
            return Ok(Some("line part is not injective".into()));
        }
        if self.kind != MapKind::Embedding && (self.point_part.len() != ip || self.line_part.len() != il) {
            return Ok(Some("map is not onto the target".into()));
        }
        for p in 0..source.num_points() {
            for l in 0..source.num_lines() {
                let before = source.incident(p, l);
                let after = match self.kind {
                    MapKind::Correlation => target.incident(self.line_part[l], self.point_part[p]),
                    _ => target.incident(self.point_part[p], self.line_part[l]),
                };
                if before != after {
                    let (tp, tl) = match self.kind {
                        MapKind::Correlation => (
                            target.point_id(self.line_part[l]),
                            target.line_id(self.point_part[p]),
                        ),
                        _ => (
                            target.point_id(self.point_part[p]),
                            target.line_id(self.line_part[l]),
                        ),
                    };
                    return Ok(Some(format!(
                        "({}, {}) {} in source but ({tp}, {tl}) {} in target",
                        source.point_id(p),
                        source.line_id(l),
                        if before { "is a flag" } else { "is not a flag" },
                        if after { "is a flag" } else { "is not a flag" },
                    )));
                }
            }
        }
        Ok(None)
    }

    /// Whether a self-correlation squares to the identity.
    pub fn is_involutive(&self) -> Result<bool> {
        if self.kind != MapKind::Correlation {
            return Err(Error::InvalidMap(format!(
                "involution check needs a correlation, got {:?}",
                self.kind
            )));
        }
        if self.target_shape != self.source_shape() {
            return Err(Error::InvalidMap("correlation is not a self-map".into()));
        }
        let points_back = self
            .point_part
            .iter()
            .enumerate()
            .all(|(p, &l)| self.line_part[l] == p);
        let lines_back = self
            .line_part
            .iter()
            .enumerate()
            .all(|(l, &p)| self.point_part[p] == l);
        Ok(points_back && lines_back)
    }
}

fn injective(v: &[usize]) -> bool {
    let mut seen = HashSet::with_capacity(v.len());
    v.iter().all(|x| seen.insert(*x))
}

fn invert(v: &[usize], size: usize) -> Option<Vec<usize>> {
    if v.len() != size {
        return None;
    }
    let mut inv = vec![usize::MAX; size];
    for (i, &j) in v.iter().enumerate() {
        if j >= size || inv[j] != usize::MAX {
            return None;
        }
        inv[j] = i;
    }
    Some(inv)
}
