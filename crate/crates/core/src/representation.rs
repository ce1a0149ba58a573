//! Reconstruction of a covered structure as a glue, and the explicit maps
//! that identify glues with the two multiplying constructions.

use serde::Serialize;

use crate::axioms::{self, ConditionReport, CorrelationFamily};
use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::morphism::{MapKind, StructureMap};
use crate::multiply::{glue, multiply_correlative, multiply_dual, Cyclic, GlueSpec};
use crate::structure::IncidenceStructure;

/// Outcome of [`rebuild`].
#[derive(Clone, Debug)]
pub struct RebuildResult {
    pub report: ConditionReport,
    pub family: CorrelationFamily,
    pub spec: GlueSpec,
    pub rebuilt: IncidenceStructure,
    /// `δ`: `a ↦ (t,a)` and `l ↦ [t,l]` where `t` is the cycle position of
    /// the block holding the element.
    pub delta: StructureMap,
    pub verdict: bool,
}

/// Short machine-readable summary of a rebuild.
#[derive(Clone, Debug, Serialize)]
pub struct RebuildSummary {
    pub blocks: usize,
    pub order: Vec<usize>,
    pub rebuilt_points: usize,
    pub rebuilt_lines: usize,
    pub verdict: bool,
}

impl RebuildResult {
    pub fn summary(&self) -> RebuildSummary {
        RebuildSummary {
            blocks: self.family.blocks.len(),
            order: self.family.rho.order.clone(),
            rebuilt_points: self.rebuilt.num_points(),
            rebuilt_lines: self.rebuilt.num_lines(),
            verdict: self.verdict,
        }
    }
}

/// Rebuilds `host` as the glue of its blocks along the recovered
/// correlations and checks that `δ` is an isomorphism.
pub fn rebuild(host: &IncidenceStructure, cov: &Covering) -> Result<RebuildResult> {
    let report = axioms::require_conditions(host, cov)?;
    let family = axioms::build_correlations(host, cov)?;
    let order = &family.rho.order;
    let spec = GlueSpec::new(
        order.iter().map(|&i| family.blocks[i].clone()).collect(),
        order.iter().map(|&i| family.maps[i].clone()).collect(),
    )?;
    let rebuilt = glue(&spec);
    let coords = rebuilt.require_coordinates()?;
    let pl = coords.point_lookup();
    let ll = coords.line_lookup();
    let mut point_part = vec![usize::MAX; host.num_points()];
    let mut line_part = vec![usize::MAX; host.num_lines()];
    for (t, &i) in order.iter().enumerate() {
        for &a in &cov.blocks[i].points {
            point_part[a] = pl[&(t, host.point_id(a))];
        }
        for &l in &cov.blocks[i].lines {
            line_part[l] = ll[&(t, host.line_id(l))];
        }
    }
    let delta = StructureMap {
        kind: MapKind::Isomorphism,
        point_part,
        line_part,
        target_shape: (rebuilt.num_points(), rebuilt.num_lines()),
    };
    if let Some(w) = delta.check_witness(host, &rebuilt)? {
        return Err(Error::NotIsomorphism(format!("δ: {w}")));
    }
    Ok(RebuildResult {
        report,
        family,
        spec,
        rebuilt,
        delta,
        verdict: true,
    })
}

/// The correlation `(i,x) ↦ [c-i, ξ_i(x)]`, `[j,y] ↦ (c-j, ξ_j(y))` of a
/// glue, for correlations `ξ_i: M_i → M_{c-i}`.
///
/// Requires `ξ_{i-1}(m) = φ_{c-i}(ξ_i(φ_{i-1}(m)))` for every line `m` of
/// `M_{i-1}` and every `i`. With `c = 1` on the dual chain this is the
/// built-in correlation of a dualisation-multiplied structure.
pub fn glue_selfdual_correlation(
    spec: &GlueSpec,
    glued: &IncidenceStructure,
    xi: &[StructureMap],
    offset: isize,
) -> Result<StructureMap> {
    let k = spec.len();
    let cyc = Cyclic::new(k)?;
    let ms = spec.structures();
    let phi = spec.correlations();
    if xi.len() != k {
        return Err(Error::InvalidParameter(format!("{} maps ξ for a cycle of length {k}", xi.len())));
    }
    for (i, x) in xi.iter().enumerate() {
        let target = &ms[cyc.reflect(offset, i)];
        if x.kind != MapKind::Correlation || !x.check(&ms[i], target)? {
            return Err(Error::InvalidMap(format!(
                "ξ_{i} is not a correlation onto layer {}",
                cyc.reflect(offset, i)
            )));
        }
    }
    for i in 0..k {
        let prev = cyc.pred(i);
        let back = cyc.reflect(offset, i);
        for m in 0..ms[prev].num_lines() {
            let via = phi[back].line_part[xi[i].point_part[phi[prev].line_part[m]]];
            let direct = xi[prev].line_part[m];
            if via != direct {
                return Err(Error::Compatibility {
                    index: i,
                    detail: format!(
                        "line {} of layer {prev} goes to {} one way and {} the other",
                        ms[prev].line_id(m),
                        ms[cyc.reflect(offset, prev)].point_id(via),
                        ms[cyc.reflect(offset, prev)].point_id(direct)
                    ),
                });
            }
        }
    }
    let coords = glued.require_coordinates()?;
    let pl = coords.point_lookup();
    let ll = coords.line_lookup();
    let mut point_part = Vec::with_capacity(glued.num_points());
    for c in &coords.points {
        let layer = cyc.reflect(offset, c.layer);
        let x = ms[c.layer].point(&c.origin)?;
        let y = xi[c.layer].point_part[x];
        point_part.push(ll[&(layer, ms[layer].line_id(y))]);
    }
    let mut line_part = Vec::with_capacity(glued.num_lines());
    for c in &coords.lines {
        let layer = cyc.reflect(offset, c.layer);
        let x = ms[c.layer].line(&c.origin)?;
        let y = xi[c.layer].line_part[x];
        line_part.push(pl[&(layer, ms[layer].point_id(y))]);
    }
    let kappa = StructureMap {
        kind: MapKind::Correlation,
        point_part,
        line_part,
        target_shape: (glued.num_points(), glued.num_lines()),
    };
    if let Some(w) = kappa.check_witness(glued, glued)? {
        return Err(Error::NotIsomorphism(format!("κ: {w}")));
    }
    Ok(kappa)
}

/// Sends layer `i` of a glue to layer `i` of `target` through a map
/// `M_i → M_0` per layer. Isomorphisms land on names of points of `M_0`,
/// correlations on names of lines.
fn layerwise(
    spec: &GlueSpec,
    glued: &IncidenceStructure,
    target: &IncidenceStructure,
    per_layer: &[StructureMap],
) -> Result<StructureMap> {
    let base = &spec.structures()[0];
    let gc = glued.require_coordinates()?;
    let tc = target.require_coordinates()?;
    let pl = tc.point_lookup();
    let ll = tc.line_lookup();
    let name = |m: &StructureMap, idx: usize, of_point: bool| -> &str {
        match (m.kind, of_point) {
            (MapKind::Isomorphism, true) | (MapKind::Correlation, false) => base.point_id(idx),
            _ => base.line_id(idx),
        }
    };
    let mut point_part = Vec::with_capacity(glued.num_points());
    for c in &gc.points {
        let m = &per_layer[c.layer];
        let y = m.point_part[spec.structures()[c.layer].point(&c.origin)?];
        point_part.push(pl[&(c.layer, name(m, y, true))]);
    }
    let mut line_part = Vec::with_capacity(glued.num_lines());
    for c in &gc.lines {
        let m = &per_layer[c.layer];
        let y = m.line_part[spec.structures()[c.layer].line(&c.origin)?];
        line_part.push(ll[&(c.layer, name(m, y, false))]);
    }
    Ok(StructureMap {
        kind: MapKind::Isomorphism,
        point_part,
        line_part,
        target_shape: (target.num_points(), target.num_lines()),
    })
}

/// `α_0 = id`, `α_i = α_{i-1} ∘ φ_{i-1}⁻¹`, maps `M_i → M_0`.
fn alphas(spec: &GlueSpec) -> Result<Vec<StructureMap>> {
    let mut out = vec![StructureMap::identity(&spec.structures()[0])];
    for phi in &spec.correlations()[..spec.len() - 1] {
        let next = out.last().unwrap().compose(&phi.inverse()?)?;
        out.push(next);
    }
    Ok(out)
}

fn verified(map: StructureMap, source: &IncidenceStructure, target: &IncidenceStructure) -> Result<StructureMap> {
    match map.check_witness(source, target)? {
        None => Ok(map),
        Some(w) => Err(Error::NotIsomorphism(w)),
    }
}

/// For even `k` and `φ_{k-1} ∘ … ∘ φ_0 = id`: the isomorphism
/// `σ: (i,x) ↦ (i, α_i(x))` from the glue onto `⊛(C_k, ∘, M_0)`.
///
/// Returns the glue, the target, and `σ`.
pub fn collapse_even(spec: &GlueSpec) -> Result<(IncidenceStructure, IncidenceStructure, StructureMap)> {
    let k = spec.len();
    if k % 2 == 1 {
        return Err(Error::InvalidParameter(format!("cycle length {k} is odd")));
    }
    let composite = spec.cycle_composite()?;
    if !composite.is_identity() {
        return Err(Error::CompositeNotIdentity(format!(
            "φ_{}…φ_0 moves some element of M_0",
            k - 1
        )));
    }
    let glued = glue(spec);
    let target = multiply_dual(k, &spec.structures()[0])?;
    let sigma = layerwise(spec, &glued, &target, &alphas(spec)?)?;
    let sigma = verified(sigma, &glued, &target)?;
    Ok((glued, target, sigma))
}

/// For odd `k` and involutive `κ = φ_{k-1} ∘ … ∘ φ_0`: the isomorphism from
/// the glue onto `⊛_k(κ, M_0)` given by `α_i` on even layers and
/// `β_i = φ_{k-1} ∘ … ∘ φ_i` on odd layers.
///
/// Returns the glue, the target, and the map.
pub fn collapse_odd(spec: &GlueSpec) -> Result<(IncidenceStructure, IncidenceStructure, StructureMap)> {
    let k = spec.len();
    if k % 2 == 0 {
        return Err(Error::InvalidParameter(format!("cycle length {k} is even")));
    }
    let kappa = spec.cycle_composite()?;
    if !kappa.is_involutive()? {
        return Err(Error::NotInvolutive(format!("φ_{}…φ_0 squared is not the identity", k - 1)));
    }
    let phi = spec.correlations();
    let alpha = alphas(spec)?;
    let mut per_layer = Vec::with_capacity(k);
    for (i, a) in alpha.into_iter().enumerate() {
        if i % 2 == 0 {
            per_layer.push(a);
        } else {
            let mut b = phi[i].clone();
            for p in &phi[i + 1..] {
                b = p.compose(&b)?;
            }
            per_layer.push(b);
        }
    }
    let base = &spec.structures()[0];
    let glued = glue(spec);
    let target = multiply_correlative(k, &kappa, base)?;
    let delta = layerwise(spec, &glued, &target, &per_layer)?;
    let delta = verified(delta, &glued, &target)?;
    Ok((glued, target, delta))
}

/// One recovered inter-block correlation, by identifiers.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationEntry {
    pub from: usize,
    pub to: usize,
    pub map: serde_json::Value,
}

/// Everything the full pipeline established, for one covering.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyBundle {
    pub conditions: Option<ConditionReport>,
    pub rho: Option<axioms::RhoStructure>,
    pub correlations: Vec<CorrelationEntry>,
    pub delta_verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub verdict: bool,
}

/// Conditions, then `ρ`, then the correlations, then `δ`. Stops at the
/// first failure and records it. `Err` only for malformed input.
pub fn verify_pipeline(host: &IncidenceStructure, cov: &Covering) -> Result<VerifyBundle> {
    let mut bundle = VerifyBundle {
        conditions: None,
        rho: None,
        correlations: Vec::new(),
        delta_verdict: false,
        error: None,
        verdict: false,
    };
    let fail = |mut b: VerifyBundle, e: Error| -> Result<VerifyBundle> {
        if !e.is_falsification() {
            return Err(e);
        }
        b.error = Some(e.to_string());
        Ok(b)
    };
    match axioms::check_conditions(host, cov) {
        Ok(r) => {
            let pass = r.all_pass();
            bundle.conditions = Some(r);
            if !pass {
                return Ok(bundle);
            }
        }
        Err(e) => return fail(bundle, e),
    }
    let family = match axioms::build_correlations(host, cov) {
        Ok(f) => f,
        Err(e) => return fail(bundle, e),
    };
    bundle.rho = Some(family.rho.clone());
    for (i, phi) in family.maps.iter().enumerate() {
        let to = family.rho.successor[i];
        let doc = crate::io::map_to_document(phi, &family.blocks[i], &family.blocks[to]);
        bundle.correlations.push(CorrelationEntry { from: i, to, map: doc.payload });
    }
    match rebuild(host, cov) {
        Ok(r) => {
            bundle.delta_verdict = r.verdict;
            bundle.verdict = r.verdict;
            Ok(bundle)
        }
        Err(e) => fail(bundle, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{projective_plane, segment};
    use crate::multiply::{builtin_correlation, dual_glue_spec};
    use crate::search::{find_correlation_between, find_involutive_correlation};

    #[test]
    fn rebuild_segment_layers() {
        let m = multiply_dual(6, &segment()).unwrap();
        let cov = Covering::layers(&m).unwrap();
        let r = rebuild(&m, &cov).unwrap();
        assert!(r.verdict);
        assert_eq!(r.rebuilt.num_points(), 9);
    }

    #[test]
    fn dual_chain_glue_matches_multiply_dual() {
        let f = projective_plane(2).unwrap();
        let spec = dual_glue_spec(4, &f).unwrap();
        assert_eq!(glue(&spec), multiply_dual(4, &f).unwrap());
    }

    #[test]
    fn offset_one_reproduces_builtin_correlation() {
        let s = segment();
        let spec = dual_glue_spec(6, &s).unwrap();
        let g = glue(&spec);
        let xi: Vec<StructureMap> = spec.correlations().to_vec();
        let kappa = glue_selfdual_correlation(&spec, &g, &xi, 1).unwrap();
        let m = multiply_dual(6, &s).unwrap();
        let builtin = builtin_correlation(&m).unwrap();
        assert_eq!(kappa.point_part, builtin.point_part);
        assert_eq!(kappa.line_part, builtin.line_part);
    }

    #[test]
    fn polarity_cycle_is_self_dual() {
        let f = projective_plane(2).unwrap();
        let pi = find_involutive_correlation(&f).unwrap();
        let spec = GlueSpec::new(vec![f.clone(); 4], vec![pi.clone(); 4]).unwrap();
        let g = glue(&spec);
        let kappa = glue_selfdual_correlation(&spec, &g, &vec![pi.clone(); 4], 0).unwrap();
        assert!(kappa.check(&g, &g).unwrap());
    }

    #[test]
    fn collapse_odd_polarity() {
        let f = projective_plane(2).unwrap();
        let pi = find_involutive_correlation(&f).unwrap();
        let spec = GlueSpec::new(vec![f.clone(); 3], vec![pi.clone(); 3]).unwrap();
        let (g, t, d) = collapse_odd(&spec).unwrap();
        assert!(d.check(&g, &t).unwrap());
    }

    #[test]
    fn collapse_even_segment_chain() {
        let s = segment();
        let sd = s.dual();
        let c0 = find_correlation_between(&s, &sd).unwrap();
        let c1 = find_correlation_between(&sd, &s).unwrap();
        let c2 = c0.clone();
        let partial = c2.compose(&c1.compose(&c0).unwrap()).unwrap();
        let c3 = partial.inverse().unwrap();
        let spec = GlueSpec::new(vec![s.clone(), sd.clone(), s.clone(), sd], vec![c0, c1, c2, c3]).unwrap();
        let (g, t, sigma) = collapse_even(&spec).unwrap();
        assert!(sigma.check(&g, &t).unwrap());
        let gc = g.coordinates().unwrap();
        for (p, &q) in sigma.point_part.iter().enumerate() {
            if gc.points[p].layer == 0 {
                assert_eq!(g.point_id(p), t.point_id(q));
            }
        }
    }
}
