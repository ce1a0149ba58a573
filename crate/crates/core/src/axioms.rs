//! The synthetic conditions on a covering by closed substructures.
//!
//! A covering `{B_i}` of a connected partial linear space is checked against
//! seven conditions: blocks are disjoint or equal (on points, on lines),
//! every element escapes its block, block complements are closed, and the
//! concurrence/collinearity exchange and its dual. When they hold, the
//! successor relation `ρ` on block indices is a single cycle, the flags that
//! leave every block form a point-line bijection, and that bijection
//! completes to correlations `B_i → B_ρ(i)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::covering::{Covering, Substructure, TackRelation};
use crate::error::{Error, Result};
use crate::morphism::{MapKind, StructureMap};
use crate::structure::IncidenceStructure;

/// A concrete counterexample to one condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub blocks: Vec<usize>,
    pub points: Vec<String>,
    pub lines: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: u8,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    /// Status of condition `n` in `1..=7`.
    pub fn holds(&self, n: u8) -> bool {
        self.conditions.iter().any(|c| c.condition == n && c.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| !c.pass)
    }
}

fn ids<'a>(names: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    names.into_iter().map(str::to_string).collect()
}

/// Checks the preconditions shared by every operation here: the covering
/// covers, the host and every block are connected, and blocks are closed.
pub fn check_covering(host: &IncidenceStructure, cov: &Covering) -> Result<()> {
    cov.validate(host)?;
    let comps = host.connected_components().len();
    if comps > 1 {
        return Err(Error::Disconnected(comps));
    }
    for (i, b) in cov.blocks.iter().enumerate() {
        if b.points.is_empty() && b.lines.is_empty() {
            return Err(Error::InvalidCovering(format!("block {i} is empty")));
        }
        if !b.is_connected(host) {
            return Err(Error::InvalidCovering(format!("block {i} is not connected")));
        }
        if let Some(v) = b.closure_violation(host) {
            return Err(Error::InvalidCovering(format!("block {i} is not closed: {}", v.describe(host))));
        }
    }
    Ok(())
}

fn disjoint_or_equal(sets: &[&BTreeSet<usize>], name: impl Fn(usize) -> String) -> Option<Witness> {
    for i1 in 0..sets.len() {
        for i2 in i1 + 1..sets.len() {
            if sets[i1] == sets[i2] {
                continue;
            }
            if let Some(&x) = sets[i1].intersection(sets[i2]).next() {
                return Some(Witness {
                    blocks: vec![i1, i2],
                    points: vec![],
                    lines: vec![],
                    note: format!("distinct blocks share {}", name(x)),
                });
            }
        }
    }
    None
}

/// First element of `own` with no incident element outside `other`.
fn escape_failure(
    own: &BTreeSet<usize>,
    other: &BTreeSet<usize>,
    neighbours: impl Fn(usize) -> Vec<usize>,
) -> Option<usize> {
    own.iter().copied().find(|&x| neighbours(x).iter().all(|y| other.contains(y)))
}

/// Condition (6) on one block: for every `p`, all points off the block lying
/// on block lines through `p` are collinear (taken three at a time, with
/// repetition). Returns `(p, [m1,m2,m3], [d1,d2,d3])` on failure.
///
/// Condition (7) is this check run on the dual.
fn exchange_failure(
    host: &IncidenceStructure,
    block_points: &BTreeSet<usize>,
    block_lines: &BTreeSet<usize>,
) -> Option<(usize, [usize; 3], [usize; 3])> {
    for p in 0..host.num_points() {
        let mut outside: Vec<(usize, usize)> = Vec::new();
        for &m in host.lines_through(p) {
            if !block_lines.contains(&m) {
                continue;
            }
            for &d in host.points_on(m) {
                if !block_points.contains(&d) {
                    outside.push((m, d));
                }
            }
        }
        for x in 0..outside.len() {
            for y in x..outside.len() {
                for z in y..outside.len() {
                    let ds = [outside[x].1, outside[y].1, outside[z].1];
                    if !all_on_a_line(host, &ds) {
                        return Some((p, [outside[x].0, outside[y].0, outside[z].0], ds));
                    }
                }
            }
        }
    }
    None
}

fn all_on_a_line(host: &IncidenceStructure, pts: &[usize]) -> bool {
    host.lines_through(pts[0])
        .iter()
        .any(|&n| pts.iter().all(|&d| host.incident(d, n)))
}

/// Evaluates conditions (1)–(7) exhaustively.
pub fn check_conditions(host: &IncidenceStructure, cov: &Covering) -> Result<ConditionReport> {
    check_covering(host, cov)?;
    let dual = host.dual();
    let pts: Vec<&BTreeSet<usize>> = cov.blocks.iter().map(|b| &b.points).collect();
    let lns: Vec<&BTreeSet<usize>> = cov.blocks.iter().map(|b| &b.lines).collect();

    let w1 = disjoint_or_equal(&pts, |p| format!("point {}", host.point_id(p)));
    let w2 = disjoint_or_equal(&lns, |l| format!("line {}", host.line_id(l)));

    let mut w3 = None;
    let mut w4 = None;
    let mut w5 = None;
    let mut w6 = None;
    let mut w7 = None;
    for (i, b) in cov.blocks.iter().enumerate() {
        if w3.is_none() {
            w3 = escape_failure(&b.points, &b.lines, |d| host.lines_through(d).to_vec()).map(|d| Witness {
                blocks: vec![i],
                points: ids([host.point_id(d)]),
                lines: vec![],
                note: "every line through the point lies in the block".into(),
            });
        }
        if w4.is_none() {
            w4 = escape_failure(&b.lines, &b.points, |m| host.points_on(m).to_vec()).map(|m| Witness {
                blocks: vec![i],
                points: vec![],
                lines: ids([host.line_id(m)]),
                note: "every point on the line lies in the block".into(),
            });
        }
        if w5.is_none() {
            w5 = b.complement(host).closure_violation(host).map(|v| Witness {
                blocks: vec![i],
                points: vec![],
                lines: vec![],
                note: format!("complement not closed: {}", v.describe(host)),
            });
        }
        if w6.is_none() {
            w6 = exchange_failure(host, &b.points, &b.lines).map(|(p, ms, ds)| Witness {
                blocks: vec![i],
                points: ids(std::iter::once(host.point_id(p)).chain(ds.iter().map(|&d| host.point_id(d)))),
                lines: ids(ms.iter().map(|&m| host.line_id(m))),
                note: "lines of the block through the first point carry outside points that are not collinear"
                    .into(),
            });
        }
        if w7.is_none() {
            // Points of the dual are the host's lines.
            w7 = exchange_failure(&dual, &b.lines, &b.points).map(|(n, ds, ms)| Witness {
                blocks: vec![i],
                points: ids(ms.iter().map(|&m| host.point_id(m))),
                lines: ids(std::iter::once(host.line_id(n)).chain(ds.iter().map(|&d| host.line_id(d)))),
                note: "block points on the first line have outside lines that are not concurrent".into(),
            });
        }
    }
    let conditions = [w1, w2, w3, w4, w5, w6, w7]
        .into_iter()
        .enumerate()
        .map(|(n, w)| ConditionResult {
            condition: n as u8 + 1,
            pass: w.is_none(),
            witness: w,
        })
        .collect();
    Ok(ConditionReport { conditions })
}

/// Fails with the first violated condition.
pub fn require_conditions(host: &IncidenceStructure, cov: &Covering) -> Result<ConditionReport> {
    let report = check_conditions(host, cov)?;
    if let Some(f) = report.first_failure() {
        let w = f.witness.as_ref().expect("failed conditions carry witnesses");
        return Err(Error::ConditionsFailed(format!(
            "condition ({}) at blocks {:?}: {} [points {:?}, lines {:?}]",
            f.condition, w.blocks, w.note, w.points, w.lines
        )));
    }
    Ok(report)
}

/// The successor map on block indices, with the relabeling that turns it
/// into `i ↦ i+1 mod k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoStructure {
    /// `successor[j] = i` iff `j ρ i`.
    pub successor: Vec<usize>,
    /// Block indices in cycle order, starting at block 0.
    pub order: Vec<usize>,
    /// `position[order[t]] = t`.
    pub position: Vec<usize>,
}

impl RhoStructure {
    pub fn cycle_length(&self) -> usize {
        self.order.len()
    }
}

/// Computes `j ρ i` (some line of `B_j` carries some point of `B_i`, `j ≠ i`)
/// and checks that it is a permutation with a single cycle.
pub fn rho(host: &IncidenceStructure, cov: &Covering) -> Result<RhoStructure> {
    let k = cov.len();
    for i in 0..k {
        for j in i + 1..k {
            if cov.blocks[i] == cov.blocks[j] {
                return Err(Error::Rho(format!("blocks {i} and {j} coincide")));
            }
        }
    }
    let mut rel: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for (j, bj) in cov.blocks.iter().enumerate() {
        for (i, bi) in cov.blocks.iter().enumerate() {
            if i != j && bj.lines.iter().any(|&l| host.points_on(l).iter().any(|p| bi.points.contains(p))) {
                rel[j].insert(i);
            }
        }
    }
    let mut successor = Vec::with_capacity(k);
    for (j, targets) in rel.iter().enumerate() {
        match targets.len() {
            1 => successor.push(*targets.first().unwrap()),
            0 => return Err(Error::Rho(format!("block {j} has no successor"))),
            _ => return Err(Error::Rho(format!("block {j} has successors {targets:?}"))),
        }
    }
    let mut order = vec![0];
    let mut seen = vec![false; k];
    seen[0] = true;
    loop {
        let next = successor[*order.last().unwrap()];
        if next == 0 {
            break;
        }
        if seen[next] {
            return Err(Error::Rho(format!("block {next} is reached twice")));
        }
        seen[next] = true;
        order.push(next);
    }
    if order.len() != k {
        return Err(Error::Rho(format!(
            "the cycle through block 0 has length {}, there are {k} blocks",
            order.len()
        )));
    }
    let mut position = vec![0; k];
    for (t, &i) in order.iter().enumerate() {
        position[i] = t;
    }
    Ok(RhoStructure {
        successor,
        order,
        position,
    })
}

/// `a ⌒ m` iff `a` is on `m` and no block contains both; must be a
/// point-line bijection.
pub fn tack_from_covering(host: &IncidenceStructure, cov: &Covering) -> Result<TackRelation> {
    let pairs = host
        .flags()
        .filter(|&(a, m)| !cov.blocks.iter().any(|b| b.points.contains(&a) && b.lines.contains(&m)));
    let t = TackRelation::new(host, pairs)?;
    let mut pc = vec![Vec::new(); host.num_points()];
    let mut lc = vec![Vec::new(); host.num_lines()];
    for (a, m) in t.pairs() {
        pc[a].push(m);
        lc[m].push(a);
    }
    if let Some((a, ms)) = pc.iter().enumerate().find(|(_, v)| v.len() != 1) {
        return Err(Error::TackNotBijective(format!(
            "point {} is in {} pairs",
            host.point_id(a),
            ms.len()
        )));
    }
    if let Some((m, ps)) = lc.iter().enumerate().find(|(_, v)| v.len() != 1) {
        return Err(Error::TackNotBijective(format!(
            "line {} is in {} pairs",
            host.line_id(m),
            ps.len()
        )));
    }
    Ok(t)
}

/// The tack bijection read as a pair of mutually inverse maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaMaps {
    /// `κ′(a) = m` iff `a ⌒ m`.
    pub point_to_line: Vec<usize>,
    /// `κ″(m) = a` iff `a ⌒ m`.
    pub line_to_point: Vec<usize>,
}

pub fn kappa_maps(host: &IncidenceStructure, cov: &Covering) -> Result<KappaMaps> {
    let t = tack_from_covering(host, cov)?;
    let mut point_to_line = vec![0; host.num_points()];
    let mut line_to_point = vec![0; host.num_lines()];
    for (a, m) in t.pairs() {
        point_to_line[a] = m;
        line_to_point[m] = a;
    }
    Ok(KappaMaps {
        point_to_line,
        line_to_point,
    })
}

/// For each block `j`, the unique block whose lines receive `κ′(B′_j)` and
/// the unique block whose points receive `κ″(B″_j)`.
pub fn kappa_block_images(cov: &Covering, kappa: &KappaMaps) -> Result<Vec<(usize, usize)>> {
    let block_of = |elems: &mut dyn Iterator<Item = usize>, pick: &dyn Fn(&Substructure) -> &BTreeSet<usize>| {
        let targets: BTreeSet<usize> = elems
            .flat_map(|x| {
                cov.blocks
                    .iter()
                    .enumerate()
                    .filter(move |(_, b)| pick(b).contains(&x))
                    .map(|(i, _)| i)
            })
            .collect();
        targets
    };
    let mut out = Vec::with_capacity(cov.len());
    for (j, b) in cov.blocks.iter().enumerate() {
        let lines = block_of(&mut b.points.iter().map(|&a| kappa.point_to_line[a]), &|s| &s.lines);
        let points = block_of(&mut b.lines.iter().map(|&m| kappa.line_to_point[m]), &|s| &s.points);
        if lines.len() != 1 || points.len() != 1 {
            return Err(Error::CorrelationCompletion(format!(
                "block {j} is spread by κ over blocks {lines:?} (lines) and {points:?} (points)"
            )));
        }
        out.push((*lines.first().unwrap(), *points.first().unwrap()));
    }
    Ok(out)
}

/// Blocks as standalone structures together with the correlations
/// `φ_i: B_i → B_ρ(i)`, all in the covering's own indexing.
#[derive(Clone, Debug)]
pub struct CorrelationFamily {
    pub rho: RhoStructure,
    pub blocks: Vec<IncidenceStructure>,
    pub maps: Vec<StructureMap>,
}

pub fn block_structure(host: &IncidenceStructure, cov: &Covering, i: usize) -> IncidenceStructure {
    cov.blocks[i].to_structure(host, format!("B{i}"))
}

/// Builds `φ_i: B_i → B_ρ(i)`.
///
/// The line part sends each line to its tack point, which lies in the
/// successor block. The point part sends `p` to the successor line whose
/// points inside the successor block are exactly the images of the lines
/// through `p`. Points with the same image set are matched in order with the
/// lines carrying that set; the counts must agree.
pub fn build_correlations(host: &IncidenceStructure, cov: &Covering) -> Result<CorrelationFamily> {
    check_covering(host, cov)?;
    let rho = rho(host, cov)?;
    let kappa = kappa_maps(host, cov)?;
    let blocks: Vec<IncidenceStructure> = (0..cov.len()).map(|i| block_structure(host, cov, i)).collect();
    let local = |set: &BTreeSet<usize>| -> BTreeMap<usize, usize> {
        set.iter().enumerate().map(|(loc, &g)| (g, loc)).collect()
    };
    let mut maps = Vec::with_capacity(cov.len());
    for i in 0..cov.len() {
        let s = rho.successor[i];
        let (src, dst) = (&blocks[i], &blocks[s]);
        let dst_points = local(&cov.blocks[s].points);
        let line_part = cov.blocks[i]
            .lines
            .iter()
            .map(|&m| {
                let a = kappa.line_to_point[m];
                dst_points.get(&a).copied().ok_or_else(|| {
                    Error::CorrelationCompletion(format!(
                        "tack point {} of line {} is not in block {s}",
                        host.point_id(a),
                        host.line_id(m)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut by_points: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for l in 0..dst.num_lines() {
            by_points.entry(dst.points_on(l).to_vec()).or_default().push(l);
        }
        let mut wanted: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for p in 0..src.num_points() {
            let mut img: Vec<usize> = src.lines_through(p).iter().map(|&m| line_part[m]).collect();
            img.sort_unstable();
            wanted.entry(img).or_default().push(p);
        }
        let mut point_part = vec![usize::MAX; src.num_points()];
        for (img, ps) in &wanted {
            let lines = by_points.get(img).map(Vec::as_slice).unwrap_or(&[]);
            if lines.len() != ps.len() {
                let names: Vec<&str> = img.iter().map(|&q| dst.point_id(q)).collect();
                return Err(Error::CorrelationCompletion(format!(
                    "{} point(s) of block {i} need a line of block {s} through exactly {names:?}, found {}",
                    ps.len(),
                    lines.len()
                )));
            }
            for (&p, &l) in ps.iter().zip(lines) {
                point_part[p] = l;
            }
        }
        let phi = StructureMap {
            kind: MapKind::Correlation,
            point_part,
            line_part,
            target_shape: (dst.num_points(), dst.num_lines()),
        };
        if let Some(w) = phi.check_witness(src, dst)? {
            return Err(Error::CorrelationCompletion(format!("block {i} to block {s}: {w}")));
        }
        maps.push(phi);
    }
    Ok(CorrelationFamily { rho, blocks, maps })
}

/// The two-line case of condition (6) and its dual. Returns a witness
/// description on failure.
pub fn two_line_exchange(host: &IncidenceStructure, cov: &Covering) -> Option<String> {
    let dual = host.dual();
    for (i, b) in cov.blocks.iter().enumerate() {
        for (g, pts, lns, what) in [(host, &b.points, &b.lines, "points"), (&dual, &b.lines, &b.points, "lines")] {
            for p in 0..g.num_points() {
                let ms: Vec<usize> = g.lines_through(p).iter().copied().filter(|m| lns.contains(m)).collect();
                for &m1 in &ms {
                    for &m2 in &ms {
                        for &d1 in g.points_on(m1).iter().filter(|d| !pts.contains(d)) {
                            for &d2 in g.points_on(m2).iter().filter(|d| !pts.contains(d)) {
                                if !g.collinear_idx(d1, d2) {
                                    return Some(format!(
                                        "block {i}: outside {what} {} and {} are not joined",
                                        g.point_id(d1),
                                        g.point_id(d2)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Collinear points in different blocks sit in `ρ`-adjacent blocks.
pub fn adjacent_blocks_witness(host: &IncidenceStructure, cov: &Covering, rho: &RhoStructure) -> Option<(usize, usize)> {
    let block_of: Vec<Vec<usize>> = (0..host.num_points())
        .map(|p| (0..cov.len()).filter(|&i| cov.blocks[i].points.contains(&p)).collect())
        .collect();
    for a in 0..host.num_points() {
        for b in 0..host.num_points() {
            if !host.collinear_idx(a, b) {
                continue;
            }
            for &i1 in &block_of[a] {
                for &i2 in &block_of[b] {
                    if i1 != i2 && rho.successor[i1] != i2 && rho.successor[i2] != i1 {
                        return Some((a, b));
                    }
                }
            }
        }
    }
    None
}

/// For distinct lines `m1,m2,m3` of one block and their points `d_t` in a
/// different block: the lines meet in a point other than the `d_t` iff the
/// `d_t` lie on a line other than the `m_t`. Returns a failing triple.
pub fn concurrence_collinearity_witness(host: &IncidenceStructure, cov: &Covering) -> Option<[usize; 3]> {
    for (j, bj) in cov.blocks.iter().enumerate() {
        let lines: Vec<usize> = bj.lines.iter().copied().collect();
        for (i, bi) in cov.blocks.iter().enumerate() {
            if i == j {
                continue;
            }
            let hits: Vec<(usize, Vec<usize>)> = lines
                .iter()
                .map(|&m| (m, host.points_on(m).iter().copied().filter(|d| bi.points.contains(d)).collect()))
                .filter(|(_, ds): &(usize, Vec<usize>)| !ds.is_empty())
                .collect();
            for x in 0..hits.len() {
                for y in x + 1..hits.len() {
                    for z in y + 1..hits.len() {
                        let ms = [hits[x].0, hits[y].0, hits[z].0];
                        for &d1 in &hits[x].1 {
                            for &d2 in &hits[y].1 {
                                for &d3 in &hits[z].1 {
                                    let ds = [d1, d2, d3];
                                    let meet = (0..host.num_points())
                                        .any(|p| !ds.contains(&p) && ms.iter().all(|&m| host.incident(p, m)));
                                    let join = (0..host.num_lines())
                                        .any(|n| !ms.contains(&n) && ds.iter().all(|&d| host.incident(d, n)));
                                    if meet != join {
                                        return Some(ms);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}
