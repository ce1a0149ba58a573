//! Oracles and fixtures shared by the integration tests. The oracles here
//! re-derive constructions from their defining formulas on identifiers and
//! never call the library code they are compared against.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use multiconf::covering::Method;
use multiconf::generators::{grassmannian, ht_config, projective_plane, segment};
use multiconf::multiply::{glue, multiply_correlative, multiply_dual, GlueSpec};
use multiconf::search::{find_involutive_correlation, for_each_isomorphism};
use multiconf::{IncidenceStructure, MapKind, StructureMap};

pub type Flags = BTreeSet<(String, String)>;

pub fn flag_ids(s: &IncidenceStructure) -> Flags {
    s.flags()
        .map(|(p, l)| (s.point_id(p).to_string(), s.line_id(l).to_string()))
        .collect()
}

pub fn fano() -> IncidenceStructure {
    projective_plane(2).unwrap()
}

pub fn polarity(s: &IncidenceStructure) -> StructureMap {
    find_involutive_correlation(s).expect("structure has a polarity")
}

/// The first `n` non-identity collineations of `s` in search order.
pub fn collineations(s: &IncidenceStructure, n: usize) -> Vec<StructureMap> {
    let mut out = Vec::new();
    for_each_isomorphism(s, s, |m| {
        if !m.is_identity() {
            out.push(m.clone());
        }
        if out.len() == n {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// Flags of the dual-alternating chain, straight from the incidence rule:
/// `(i,a)` on `[j,l]` iff `i = j` and `a` on `l` in layer `j`, or
/// `i = j+1` and `a` carries the same name as `l`.
pub fn multiply_dual_oracle(k: usize, base: &IncidenceStructure) -> Flags {
    let mut flags = Flags::new();
    for j in 0..k {
        for l in 0..base.num_lines().max(base.num_points()) {
            // Even layers: lines are base lines; odd layers: base points.
            let (line_name, own): (String, Vec<String>) = if j % 2 == 0 {
                if l >= base.num_lines() {
                    continue;
                }
                (
                    base.line_id(l).to_string(),
                    base.points_on(l).iter().map(|&p| base.point_id(p).to_string()).collect(),
                )
            } else {
                if l >= base.num_points() {
                    continue;
                }
                (
                    base.point_id(l).to_string(),
                    base.lines_through(l).iter().map(|&m| base.line_id(m).to_string()).collect(),
                )
            };
            let line = format!("[{j},{line_name}]");
            for a in own {
                flags.insert((format!("({j},{a})"), line.clone()));
            }
            flags.insert((format!("({},{line_name})", (j + 1) % k), line));
        }
    }
    flags
}

/// Flags of `k` copies of `base` where `[j,l]` also gains `(j+1, κ(l))`.
pub fn multiply_correlative_oracle(k: usize, kappa: &StructureMap, base: &IncidenceStructure) -> Flags {
    let mut flags = Flags::new();
    for j in 0..k {
        for l in 0..base.num_lines() {
            let line = format!("[{j},{}]", base.line_id(l));
            for &p in base.points_on(l) {
                flags.insert((format!("({j},{})", base.point_id(p)), line.clone()));
            }
            let extra = base.point_id(kappa.line_part[l]);
            flags.insert((format!("({},{extra})", (j + 1) % k), line));
        }
    }
    flags
}

/// Counts of (degree, number of points) and (size, number of lines).
pub fn rank_census(s: &IncidenceStructure) -> (BTreeMap<usize, usize>, BTreeMap<usize, usize>) {
    let mut pts = BTreeMap::new();
    let mut lns = BTreeMap::new();
    for p in 0..s.num_points() {
        *pts.entry(s.point_degree(p)).or_default() += 1;
    }
    for l in 0..s.num_lines() {
        *lns.entry(s.line_size(l)).or_default() += 1;
    }
    (pts, lns)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn line_multiset(s: &IncidenceStructure, perm: &[usize]) -> BTreeMap<Vec<usize>, usize> {
    let mut out = BTreeMap::new();
    for l in 0..s.num_lines() {
        let mut img: Vec<usize> = s.points_on(l).iter().map(|&p| perm[p]).collect();
        img.sort_unstable();
        *out.entry(img).or_default() += 1;
    }
    out
}

/// Number of isomorphisms `a → b`, by trying every point permutation. A
/// permutation that carries the multiset of line point sets of `a` onto that
/// of `b` extends to `∏ m!` line bijections, `m` running over multiplicities.
pub fn brute_isomorphism_count(a: &IncidenceStructure, b: &IncidenceStructure) -> usize {
    if a.num_points() != b.num_points() || a.num_lines() != b.num_lines() {
        return 0;
    }
    let id: Vec<usize> = (0..b.num_points()).collect();
    let target = line_multiset(b, &id);
    let extensions: usize = target.values().map(|&m| (1..=m).product::<usize>()).product();
    let mut perm: Vec<usize> = (0..a.num_points()).collect();
    let mut count = 0;
    loop {
        if line_multiset(a, &perm) == target {
            count += extensions;
        }
        if !next_permutation(&mut perm) {
            return count;
        }
    }
}

pub fn brute_isomorphic(a: &IncidenceStructure, b: &IncidenceStructure) -> bool {
    brute_isomorphism_count(a, b) > 0
}

/// `s` with points and lines listed in a new order; `points[i]` is the old
/// index of the new `i`-th point.
pub fn reorder(s: &IncidenceStructure, points: &[usize], lines: &[usize]) -> IncidenceStructure {
    let pts: Vec<String> = points.iter().map(|&p| s.point_id(p).to_string()).collect();
    let lns: Vec<(String, Vec<String>)> = lines
        .iter()
        .map(|&l| {
            (
                s.line_id(l).to_string(),
                s.points_on(l).iter().map(|&p| s.point_id(p).to_string()).collect(),
            )
        })
        .collect();
    IncidenceStructure::from_ids(s.name(), pts, lns).unwrap()
}

/// `s` with every identifier prefixed, so that names carry no information.
pub fn rename(s: &IncidenceStructure, prefix: &str) -> IncidenceStructure {
    let pts: Vec<String> = (0..s.num_points()).map(|p| format!("{prefix}p{p}")).collect();
    let lns: Vec<(String, Vec<String>)> = (0..s.num_lines())
        .map(|l| (format!("{prefix}l{l}"), s.points_on(l).iter().map(|&p| format!("{prefix}p{p}")).collect()))
        .collect();
    IncidenceStructure::from_ids(s.name(), pts, lns).unwrap()
}

/// Toggles the incidence of one point-line pair, keeping coordinates.
pub fn flip(s: &IncidenceStructure, p: usize, l: usize) -> IncidenceStructure {
    let pts: Vec<String> = s.point_ids().to_vec();
    let lns: Vec<(String, Vec<String>)> = (0..s.num_lines())
        .map(|m| {
            let mut on: Vec<String> = s.points_on(m).iter().map(|&q| s.point_id(q).to_string()).collect();
            if m == l {
                let id = s.point_id(p).to_string();
                if let Some(i) = on.iter().position(|x| *x == id) {
                    on.remove(i);
                } else {
                    on.push(id);
                }
            }
            (s.line_id(m).to_string(), on)
        })
        .collect();
    let out = IncidenceStructure::from_ids(format!("{}~", s.name()), pts, lns).unwrap();
    match s.coordinates() {
        Some(c) => out.with_coordinates(c.clone()).unwrap(),
        None => out,
    }
}

/// Fano cycle of length 3 with three different correlations.
pub fn mixed_fano_spec() -> GlueSpec {
    let f = fano();
    let pi = polarity(&f);
    let g = collineations(&f, 2);
    let phis = vec![pi.clone(), pi.compose(&g[0]).unwrap(), pi.compose(&g[1]).unwrap()];
    GlueSpec::new(vec![f.clone(), f.clone(), f], phis).unwrap()
}

/// Construction outputs that carry their layer covering.
pub fn layered_instances() -> Vec<(String, IncidenceStructure)> {
    let f = fano();
    let pi = polarity(&f);
    vec![
        ("dual-multiply C6 segment".into(), multiply_dual(6, &segment()).unwrap()),
        ("dual-multiply C4 segment".into(), multiply_dual(4, &segment()).unwrap()),
        ("dual-multiply C4 PG(2,2)".into(), multiply_dual(4, &f).unwrap()),
        ("dual-multiply C6 PG(2,2)".into(), multiply_dual(6, &f).unwrap()),
        ("dual-multiply C4 PG(2,3)".into(), multiply_dual(4, &projective_plane(3).unwrap()).unwrap()),
        ("dual-multiply C4 G2(6)".into(), multiply_dual(4, &grassmannian(2, 6).unwrap()).unwrap()),
        ("dual-multiply C4 HT(3)".into(), multiply_dual(4, &ht_config(3).unwrap()).unwrap()),
        ("correlative C3 PG(2,2)".into(), multiply_correlative(3, &pi, &f).unwrap()),
        ("correlative C5 PG(2,2)".into(), multiply_correlative(5, &pi, &f).unwrap()),
        ("glue C3 PG(2,2) mixed".into(), glue(&mixed_fano_spec())),
    ]
}

/// Inputs whose layers are recoverable from incidence alone, with the
/// method that recovers them.
pub fn blind_instances() -> Vec<(String, IncidenceStructure, Method)> {
    vec![
        ("dual-multiply C6 segment".into(), multiply_dual(6, &segment()).unwrap(), Method::Rank),
        ("dual-multiply C4 PG(2,2)".into(), multiply_dual(4, &fano()).unwrap(), Method::Tack1),
        (
            "dual-multiply C4 PG(2,3)".into(),
            multiply_dual(4, &projective_plane(3).unwrap()).unwrap(),
            Method::Tack1,
        ),
        (
            "dual-multiply C4 G2(6)".into(),
            multiply_dual(4, &grassmannian(2, 6).unwrap()).unwrap(),
            Method::Tack2,
        ),
        (
            "dual-multiply C4 HT(3)".into(),
            multiply_dual(4, &ht_config(3).unwrap()).unwrap(),
            Method::Tack2,
        ),
        (
            "dual-multiply C6 HT(5)".into(),
            multiply_dual(6, &ht_config(5).unwrap()).unwrap(),
            Method::Tack2,
        ),
    ]
}

pub fn is_correlation(m: &StructureMap) -> bool {
    m.kind == MapKind::Correlation
}
