//! Correlative multiplying, dualisation multiplying and gluing.
//!
//! All three constructions share one shape: `k` layers indexed by the cyclic
//! group `C_k`, where layer `i` is a copy of some structure `M_i`, and each
//! line `[j,m]` of layer `j` picks up exactly one extra point from layer
//! `j+1`. They differ only in how that extra point is chosen, so they are
//! built by one routine driven by a chain of correlations `M_i → M_{i+1}`.

use crate::error::{Error, Result};
use crate::morphism::{MapKind, StructureMap};
use crate::structure::{Builder, Construction, Coord, Coordinates, IncidenceStructure};

/// Arithmetic in the cyclic group of order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cyclic {
    k: usize,
}

impl Cyclic {
    pub fn new(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidParameter(format!(
                "cycle length must be at least 3, got {k}"
            )));
        }
        Ok(Cyclic { k })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn add(&self, i: usize, d: isize) -> usize {
        (i as isize + d).rem_euclid(self.k as isize) as usize
    }

    pub fn succ(&self, i: usize) -> usize {
        self.add(i, 1)
    }

    pub fn pred(&self, i: usize) -> usize {
        self.add(i, -1)
    }

    /// `c - i`
    pub fn reflect(&self, c: isize, i: usize) -> usize {
        (c - i as isize).rem_euclid(self.k as isize) as usize
    }
}

pub fn point_label(layer: usize, origin: &str) -> String {
    format!("({layer},{origin})")
}

pub fn line_label(layer: usize, origin: &str) -> String {
    format!("[{layer},{origin}]")
}

/// A cycle of structures `M_0 .. M_{k-1}` with correlations `φ_i: M_i → M_{i+1}`.
#[derive(Clone, Debug)]
pub struct GlueSpec {
    structures: Vec<IncidenceStructure>,
    correlations: Vec<StructureMap>,
}

impl GlueSpec {
    /// Validates the chain: `k >= 3`, every `M_i` connected, every `φ_i` a
    /// correlation from `M_i` onto `M_{i+1}`.
    pub fn new(structures: Vec<IncidenceStructure>, correlations: Vec<StructureMap>) -> Result<Self> {
        let cyc = Cyclic::new(structures.len())?;
        if correlations.len() != structures.len() {
            return Err(Error::InvalidParameter(format!(
                "{} structures but {} correlations",
                structures.len(),
                correlations.len()
            )));
        }
        for (i, m) in structures.iter().enumerate() {
            let n = m.connected_components().len();
            if n > 1 {
                return Err(Error::Disconnected(n));
            }
            check_link(&structures, &correlations, cyc, i)?;
        }
        Ok(GlueSpec {
            structures,
            correlations,
        })
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    pub fn structures(&self) -> &[IncidenceStructure] {
        &self.structures
    }

    pub fn correlations(&self) -> &[StructureMap] {
        &self.correlations
    }

    /// `φ_{k-1} ∘ … ∘ φ_1 ∘ φ_0`, a map `M_0 → M_0`.
    pub fn cycle_composite(&self) -> Result<StructureMap> {
        let mut acc = self.correlations[0].clone();
        for phi in &self.correlations[1..] {
            acc = phi.compose(&acc)?;
        }
        Ok(acc)
    }
}

fn check_link(
    structures: &[IncidenceStructure],
    correlations: &[StructureMap],
    cyc: Cyclic,
    i: usize,
) -> Result<()> {
    let phi = &correlations[i];
    let (src, dst) = (&structures[i], &structures[cyc.succ(i)]);
    if phi.kind != MapKind::Correlation {
        return Err(Error::InvalidMap(format!(
            "correlation chain broken at {i}: map has kind {:?}",
            phi.kind
        )));
    }
    match phi.check_witness(src, dst) {
        Ok(None) => Ok(()),
        Ok(Some(w)) => Err(Error::InvalidMap(format!("correlation chain broken at {i}: {w}"))),
        Err(e) => Err(Error::InvalidMap(format!("correlation chain broken at {i}: {e}"))),
    }
}

fn build_chain(
    name: String,
    construction: Construction,
    structures: &[&IncidenceStructure],
    line_to_extra_point: &[&[usize]],
) -> IncidenceStructure {
    let k = structures.len();
    let mut b = Builder::new(name);
    let mut point_offset = Vec::with_capacity(k);
    let mut coords_p = Vec::new();
    let mut coords_l = Vec::new();
    for (i, m) in structures.iter().enumerate() {
        point_offset.push(coords_p.len());
        for a in m.point_ids() {
            b.point(point_label(i, a)).expect("layer labels are distinct");
            coords_p.push(Coord {
                layer: i,
                origin: a.clone(),
            });
        }
    }
    for (j, m) in structures.iter().enumerate() {
        let next = (j + 1) % k;
        for l in 0..m.num_lines() {
            let mut pts: Vec<usize> = m.points_on(l).iter().map(|&a| point_offset[j] + a).collect();
            pts.push(point_offset[next] + line_to_extra_point[j][l]);
            b.line(line_label(j, m.line_id(l)), pts)
                .expect("layer labels are distinct");
            coords_l.push(Coord {
                layer: j,
                origin: m.line_id(l).to_string(),
            });
        }
    }
    b.build()
        .with_coordinates(Coordinates {
            construction,
            modulus: k,
            points: coords_p,
            lines: coords_l,
        })
        .expect("coordinate table matches")
}

/// `⊛(i∈C_k, M_i, φ_i)`: `(i,a)` lies on `[j,m]` iff `i = j` and `a` is on
/// `m` in `M_i`, or `i = j+1` and `a = φ_j(m)`.
pub fn glue(spec: &GlueSpec) -> IncidenceStructure {
    let structures: Vec<&IncidenceStructure> = spec.structures.iter().collect();
    let extra: Vec<&[usize]> = spec.correlations.iter().map(|c| c.line_part.as_slice()).collect();
    let names: Vec<&str> = structures.iter().map(|s| s.name()).collect();
    build_chain(
        format!("⊛(C{},{})", structures.len(), names.join(",")),
        Construction::Glue,
        &structures,
        &extra,
    )
}

/// `⊛_k(κ, M_0)`: `k` copies of `M_0`; line `[j,l]` gains the point `(j+1, κ(l))`.
pub fn multiply_correlative(k: usize, kappa: &StructureMap, base: &IncidenceStructure) -> Result<IncidenceStructure> {
    Cyclic::new(k)?;
    if kappa.kind != MapKind::Correlation || !kappa.check(base, base)? {
        return Err(Error::InvalidMap("κ is not a self-correlation of the base structure".into()));
    }
    let structures = vec![base; k];
    let extra = vec![kappa.line_part.as_slice(); k];
    Ok(build_chain(
        format!("⊛{k}(κ,{})", base.name()),
        Construction::Correlative,
        &structures,
        &extra,
    ))
}

/// The correlation `M → M°` that sends each element to its own name.
pub fn naming_correlation(m: &IncidenceStructure) -> StructureMap {
    StructureMap {
        kind: MapKind::Correlation,
        point_part: (0..m.num_points()).collect(),
        line_part: (0..m.num_lines()).collect(),
        target_shape: (m.num_lines(), m.num_points()),
    }
}

/// `⊛(C_k, ∘, M_0)` for even `k >= 4`: even layers copy `M_0`, odd layers
/// copy its dual, and `[j,b]` gains the point `(j+1, b)`.
pub fn multiply_dual(k: usize, base: &IncidenceStructure) -> Result<IncidenceStructure> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "dualisation multiplying needs an even cycle length >= 4, got {k}"
        )));
    }
    let dual = base.dual();
    let structures: Vec<&IncidenceStructure> = (0..k).map(|i| if i % 2 == 0 { base } else { &dual }).collect();
    // The naming correlation has identity index vectors in both directions.
    let ids: Vec<usize> = (0..base.num_points().max(base.num_lines())).collect();
    let extra: Vec<&[usize]> = structures.iter().map(|m| &ids[..m.num_lines()]).collect();
    Ok(build_chain(
        format!("⊛(C{k},∘,{})", base.name()),
        Construction::Dualisation,
        &structures,
        &extra,
    ))
}

/// The chain `M_0, M_0°, M_0, …` with naming correlations, whose glue is
/// `⊛(C_k, ∘, M_0)` up to the construction tag.
pub fn dual_glue_spec(k: usize, base: &IncidenceStructure) -> Result<GlueSpec> {
    if k % 2 == 1 {
        return Err(Error::InvalidParameter(format!("the dual chain needs an even length, got {k}")));
    }
    let dual = base.dual();
    let structures: Vec<IncidenceStructure> =
        (0..k).map(|i| if i % 2 == 0 { base.clone() } else { dual.clone() }).collect();
    let correlations = structures.iter().map(naming_correlation).collect();
    GlueSpec::new(structures, correlations)
}

/// Builds a map from `source` to `target` by rewriting coordinates.
fn map_by_coordinates<FP, FL>(
    source: &IncidenceStructure,
    target: &IncidenceStructure,
    kind: MapKind,
    mut on_point: FP,
    mut on_line: FL,
) -> Result<StructureMap>
where
    FP: FnMut(&Coord) -> Result<Coord>,
    FL: FnMut(&Coord) -> Result<Coord>,
{
    let sc = source.require_coordinates()?;
    let tc = target.require_coordinates()?;
    let tp = tc.point_lookup();
    let tl = tc.line_lookup();
    let (for_points, for_lines) = match kind {
        MapKind::Correlation => (&tl, &tp),
        _ => (&tp, &tl),
    };
    let find = |table: &std::collections::HashMap<(usize, &str), usize>, c: &Coord| {
        table
            .get(&(c.layer, c.origin.as_str()))
            .copied()
            .ok_or_else(|| Error::CoordinateMismatch(format!("no element at layer {} named `{}`", c.layer, c.origin)))
    };
    let point_part = sc
        .points
        .iter()
        .map(|c| on_point(c).and_then(|d| find(for_points, &d)))
        .collect::<Result<Vec<_>>>()?;
    let line_part = sc
        .lines
        .iter()
        .map(|c| on_line(c).and_then(|d| find(for_lines, &d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(StructureMap {
        kind,
        point_part,
        line_part,
        target_shape: (target.num_points(), target.num_lines()),
    })
}

fn require_construction(s: &IncidenceStructure, want: Construction) -> Result<usize> {
    let c = s.require_coordinates()?;
    if c.construction != want {
        return Err(Error::CoordinateMismatch(format!(
            "expected a {want:?} construction, found {:?}",
            c.construction
        )));
    }
    Ok(c.modulus)
}

/// The self-correlation `(i,x) ↦ [1-i,x]`, `[i,y] ↦ (1-i,y)` of a
/// dualisation-multiplied structure.
pub fn builtin_correlation(s: &IncidenceStructure) -> Result<StructureMap> {
    let cyc = Cyclic::new(require_construction(s, Construction::Dualisation)?)?;
    let flip = |c: &Coord| {
        Ok(Coord {
            layer: cyc.reflect(1, c.layer),
            origin: c.origin.clone(),
        })
    };
    map_by_coordinates(s, s, MapKind::Correlation, flip, flip)
}

/// The isomorphism `(i,a) ↦ (i+1,a)` from `⊛(C_k,∘,M_0)` onto `⊛(C_k,∘,M_0°)`.
pub fn shift_iso(source: &IncidenceStructure, target: &IncidenceStructure) -> Result<StructureMap> {
    let k = require_construction(source, Construction::Dualisation)?;
    if require_construction(target, Construction::Dualisation)? != k {
        return Err(Error::CoordinateMismatch("cycle lengths differ".into()));
    }
    let cyc = Cyclic::new(k)?;
    let shift = |c: &Coord| {
        Ok(Coord {
            layer: cyc.succ(c.layer),
            origin: c.origin.clone(),
        })
    };
    map_by_coordinates(source, target, MapKind::Isomorphism, shift, shift)
}

/// The isomorphism from `⊛(C_k,∘,M_0)` onto `⊛_k(κ,M_0)` that fixes even
/// layers and applies `κ` on odd layers. Needs `k` even and `κ` involutive.
pub fn parity_iso(
    source: &IncidenceStructure,
    target: &IncidenceStructure,
    base: &IncidenceStructure,
    kappa: &StructureMap,
) -> Result<StructureMap> {
    let k = require_construction(source, Construction::Dualisation)?;
    if require_construction(target, Construction::Correlative)? != k {
        return Err(Error::CoordinateMismatch("cycle lengths differ".into()));
    }
    if !kappa.check(base, base)? || kappa.kind != MapKind::Correlation {
        return Err(Error::InvalidMap("κ is not a self-correlation of the base structure".into()));
    }
    if !kappa.is_involutive()? {
        return Err(Error::NotInvolutive("κ∘κ is not the identity".into()));
    }
    // On odd layers, source points are base lines and source lines are base points.
    let on_point = |c: &Coord| -> Result<Coord> {
        let origin = if c.layer % 2 == 0 {
            c.origin.clone()
        } else {
            base.point_id(kappa.line_part[base.line(&c.origin)?]).to_string()
        };
        Ok(Coord { layer: c.layer, origin })
    };
    let on_line = |c: &Coord| -> Result<Coord> {
        let origin = if c.layer % 2 == 0 {
            c.origin.clone()
        } else {
            base.line_id(kappa.point_part[base.point(&c.origin)?]).to_string()
        };
        Ok(Coord { layer: c.layer, origin })
    };
    map_by_coordinates(source, target, MapKind::Isomorphism, on_point, on_line)
}

/// The embedding `ε_i` of the base structure as layer `i` of
/// `⊛(C_k,∘,M_0)`.
///
/// On odd layers `ε_i` sends points to lines, so it is returned as an
/// ordinary embedding of `M_0°`. The first component is the source of the
/// returned map.
pub fn canonical_embedding(
    host: &IncidenceStructure,
    base: &IncidenceStructure,
    layer: usize,
) -> Result<(IncidenceStructure, StructureMap)> {
    let k = require_construction(host, Construction::Dualisation)?;
    if layer >= k {
        return Err(Error::InvalidParameter(format!("layer {layer} out of range for C{k}")));
    }
    let source = if layer % 2 == 0 { base.clone() } else { base.dual() };
    let coords = host.require_coordinates()?;
    let tp = coords.point_lookup();
    let tl = coords.line_lookup();
    let find = |table: &std::collections::HashMap<(usize, &str), usize>, id: &str| {
        table
            .get(&(layer, id))
            .copied()
            .ok_or_else(|| Error::CoordinateMismatch(format!("layer {layer} has no element `{id}`")))
    };
    let point_part = source
        .point_ids()
        .iter()
        .map(|id| find(&tp, id))
        .collect::<Result<Vec<_>>>()?;
    let line_part = source
        .line_ids()
        .iter()
        .map(|id| find(&tl, id))
        .collect::<Result<Vec<_>>>()?;
    let map = StructureMap {
        kind: MapKind::Embedding,
        point_part,
        line_part,
        target_shape: (host.num_points(), host.num_lines()),
    };
    Ok((source, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{projective_plane, segment};
    use crate::search::find_involutive_correlation;

    #[test]
    fn cyclic_arithmetic() {
        let c = Cyclic::new(6).unwrap();
        assert_eq!(c.succ(5), 0);
        assert_eq!(c.pred(0), 5);
        assert_eq!(c.reflect(1, 3), 4);
        assert_eq!(c.reflect(0, 0), 0);
        assert!(Cyclic::new(2).is_err());
    }

    #[test]
    fn dual_multiply_of_segment() {
        let m = multiply_dual(6, &segment()).unwrap();
        assert_eq!((m.num_points(), m.num_lines()), (9, 9));
        assert!(m.validate().is_pls);
        assert!(multiply_dual(5, &segment()).is_err());
        assert!(multiply_dual(2, &segment()).is_err());
    }

    #[test]
    fn every_correlative_line_has_one_point_from_the_next_layer() {
        let f = projective_plane(2).unwrap();
        let pi = find_involutive_correlation(&f).unwrap();
        let m = multiply_correlative(3, &pi, &f).unwrap();
        let c = m.coordinates().unwrap();
        for l in 0..m.num_lines() {
            let j = c.lines[l].layer;
            let n = m.points_on(l).iter().filter(|&&p| c.points[p].layer == (j + 1) % 3).count();
            assert_eq!(n, 1);
        }
    }

    #[test]
    fn correlative_rejects_non_correlation() {
        let f = projective_plane(2).unwrap();
        assert!(multiply_correlative(3, &StructureMap::identity(&f), &f).is_err());
        let pi = find_involutive_correlation(&f).unwrap();
        assert!(multiply_correlative(2, &pi, &f).is_err());
    }

    #[test]
    fn shift_twice_is_shift_by_two() {
        let s = segment();
        let a = multiply_dual(6, &s).unwrap();
        let b = multiply_dual(6, &s.dual()).unwrap();
        let ab = shift_iso(&a, &b).unwrap();
        let ba = shift_iso(&b, &a).unwrap();
        let twice = ba.compose(&ab).unwrap();
        let c = a.coordinates().unwrap();
        for (p, &q) in twice.point_part.iter().enumerate() {
            assert_eq!(c.points[q].layer, (c.points[p].layer + 2) % 6);
            assert_eq!(c.points[q].origin, c.points[p].origin);
        }
    }

    #[test]
    fn parity_iso_is_identity_shaped_on_even_layers() {
        let f = projective_plane(2).unwrap();
        let pi = find_involutive_correlation(&f).unwrap();
        let src = multiply_dual(4, &f).unwrap();
        let dst = multiply_correlative(4, &pi, &f).unwrap();
        let d = parity_iso(&src, &dst, &f, &pi).unwrap();
        for (p, &q) in d.point_part.iter().enumerate() {
            if src.coordinates().unwrap().points[p].layer % 2 == 0 {
                assert_eq!(src.point_id(p), dst.point_id(q));
            }
        }
    }

    #[test]
    fn maps_need_coordinates() {
        let m = multiply_dual(4, &segment()).unwrap().stripped();
        assert!(matches!(builtin_correlation(&m), Err(Error::MissingCoordinates)));
        let m = multiply_dual(4, &segment()).unwrap();
        assert!(canonical_embedding(&m, &segment(), 4).is_err());
    }
}
