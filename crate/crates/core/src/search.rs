//! Isomorphism search on Levi graphs.
//!
//! Both structures are laid side by side as one bipartite graph. Colour
//! refinement runs on the union so that colour names are comparable across
//! the two halves; a branch dies as soon as some colour class has unequal
//! counts on the two sides. Branching individualises the first vertex of the
//! smallest non-singleton class on the source side against each candidate on
//! the target side, in index order.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::morphism::{MapKind, StructureMap};
use crate::structure::IncidenceStructure;

struct Union {
    /// Vertices of the source come first; each half lists points then lines.
    adj: Vec<Vec<usize>>,
    half: usize,
    source_points: usize,
    target_points: usize,
}

impl Union {
    fn new(s: &IncidenceStructure, t: &IncidenceStructure) -> Self {
        let half = s.num_points() + s.num_lines();
        let mut adj = vec![Vec::new(); 2 * half];
        for (offset, g) in [(0, s), (half, t)] {
            let np = g.num_points();
            for (p, l) in g.flags() {
                adj[offset + p].push(offset + np + l);
                adj[offset + np + l].push(offset + p);
            }
        }
        Union {
            adj,
            half,
            source_points: s.num_points(),
            target_points: t.num_points(),
        }
    }

    fn initial_colours(&self) -> Vec<usize> {
        (0..2 * self.half)
            .map(|v| {
                let is_point = if v < self.half {
                    v < self.source_points
                } else {
                    v - self.half < self.target_points
                };
                usize::from(!is_point)
            })
            .collect()
    }

    /// Refines to the coarsest equitable partition below `colours`.
    /// Returns false if the two halves stop being balanced.
    fn refine(&self, colours: &mut Vec<usize>) -> bool {
        let mut classes = count_classes(colours);
        loop {
            if !self.balanced(colours) {
                return false;
            }
            let sigs: Vec<(usize, Vec<usize>)> = (0..colours.len())
                .map(|v| {
                    let mut n: Vec<usize> = self.adj[v].iter().map(|&w| colours[w]).collect();
                    n.sort_unstable();
                    (colours[v], n)
                })
                .collect();
            let mut ranked: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
            ranked.sort();
            ranked.dedup();
            let index: BTreeMap<&(usize, Vec<usize>), usize> =
                ranked.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
            let next: Vec<usize> = sigs.iter().map(|s| index[s]).collect();
            let next_classes = index.len();
            *colours = next;
            if next_classes == classes {
                return self.balanced(colours);
            }
            classes = next_classes;
        }
    }

    fn balanced(&self, colours: &[usize]) -> bool {
        let mut diff: BTreeMap<usize, isize> = BTreeMap::new();
        for (v, &c) in colours.iter().enumerate() {
            *diff.entry(c).or_default() += if v < self.half { 1 } else { -1 };
        }
        diff.values().all(|&d| d == 0)
    }
}

fn count_classes(colours: &[usize]) -> usize {
    let mut c: Vec<usize> = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Calls `visit` on every isomorphism from `s` onto `t` until it breaks.
pub fn for_each_isomorphism<F>(s: &IncidenceStructure, t: &IncidenceStructure, mut visit: F)
where
    F: FnMut(&StructureMap) -> ControlFlow<()>,
{
    if s.num_points() != t.num_points() || s.num_lines() != t.num_lines() || s.num_flags() != t.num_flags() {
        return;
    }
    let u = Union::new(s, t);
    let mut colours = u.initial_colours();
    if !u.refine(&mut colours) {
        return;
    }
    let _ = branch(&u, s, t, colours, &mut visit);
}

fn branch<F>(
    u: &Union,
    s: &IncidenceStructure,
    t: &IncidenceStructure,
    colours: Vec<usize>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&StructureMap) -> ControlFlow<()>,
{
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &colours[..u.half] {
        *sizes.entry(c).or_default() += 1;
    }
    let cell = sizes
        .iter()
        .filter(|(_, &n)| n > 1)
        .min_by_key(|(&c, &n)| (n, c))
        .map(|(&c, _)| c);
    let Some(cell) = cell else {
        return leaf(u, s, t, &colours, visit);
    };
    let v = (0..u.half).find(|&v| colours[v] == cell).expect("cell is non-empty");
    let fresh = colours.iter().max().copied().unwrap_or(0) + 1;
    for w in (u.half..2 * u.half).filter(|&w| colours[w] == cell) {
        let mut next = colours.clone();
        next[v] = fresh;
        next[w] = fresh;
        if u.refine(&mut next) {
            branch(u, s, t, next, visit)?;
        }
    }
    ControlFlow::Continue(())
}

fn leaf<F>(
    u: &Union,
    s: &IncidenceStructure,
    t: &IncidenceStructure,
    colours: &[usize],
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&StructureMap) -> ControlFlow<()>,
{
    let mut by_colour = BTreeMap::new();
    for w in u.half..2 * u.half {
        by_colour.insert(colours[w], w - u.half);
    }
    let np = s.num_points();
    let image = |v: usize| by_colour[&colours[v]];
    let point_part: Vec<usize> = (0..np).map(image).collect();
    let line_part: Vec<usize> = (np..u.half).map(|v| image(v) - t.num_points()).collect();
    if point_part.iter().any(|&x| x >= t.num_points()) {
        return ControlFlow::Continue(());
    }
    let map = StructureMap {
        kind: MapKind::Isomorphism,
        point_part,
        line_part,
        target_shape: (t.num_points(), t.num_lines()),
    };
    // A discrete equitable partition already forces an isomorphism; the
    // check guards the refinement code itself.
    if map.check(s, t).unwrap_or(false) {
        visit(&map)
    } else {
        ControlFlow::Continue(())
    }
}

/// First isomorphism from `s` onto `t` in search order, if any.
pub fn find_isomorphism(s: &IncidenceStructure, t: &IncidenceStructure) -> Option<StructureMap> {
    let mut found = None;
    for_each_isomorphism(s, t, |m| {
        found = Some(m.clone());
        ControlFlow::Break(())
    });
    found
}

pub fn are_isomorphic(s: &IncidenceStructure, t: &IncidenceStructure) -> bool {
    find_isomorphism(s, t).is_some()
}

/// Reads an isomorphism `s → dual(s)` as a correlation of `s`.
fn as_correlation(m: &StructureMap) -> StructureMap {
    StructureMap {
        kind: MapKind::Correlation,
        point_part: m.point_part.clone(),
        line_part: m.line_part.clone(),
        target_shape: (m.target_shape.1, m.target_shape.0),
    }
}

/// A correlation of `s` onto itself, if `s` is self-dual.
pub fn find_correlation(s: &IncidenceStructure) -> Option<StructureMap> {
    find_isomorphism(s, &s.dual()).map(|m| as_correlation(&m))
}

/// Calls `visit` on every correlation of `s` onto itself.
pub fn for_each_correlation<F>(s: &IncidenceStructure, mut visit: F)
where
    F: FnMut(&StructureMap) -> ControlFlow<()>,
{
    for_each_isomorphism(s, &s.dual(), |m| visit(&as_correlation(m)));
}

/// First involutive correlation of `s` in search order (a polarity, for planes).
pub fn find_involutive_correlation(s: &IncidenceStructure) -> Option<StructureMap> {
    let mut found = None;
    for_each_correlation(s, |c| {
        if c.is_involutive().unwrap_or(false) {
            found = Some(c.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// Correlations from `s` onto a different structure `t` (isomorphisms `s → dual(t)`).
pub fn find_correlation_between(s: &IncidenceStructure, t: &IncidenceStructure) -> Option<StructureMap> {
    find_isomorphism(s, &t.dual()).map(|m| as_correlation(&m))
}
