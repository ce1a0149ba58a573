//! Finite incidence structures and their basic geometric predicates.
//!
//! Points and lines are addressed two ways: by their opaque string
//! identifier (what users and files see) and by their position in insertion
//! order (what algorithms use). Both orders are deterministic.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which construction produced a structure carrying [`Coordinates`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Cyclic copies of one structure chained by a self-correlation.
    Correlative,
    /// Cyclic alternation of a structure and its dual.
    Dualisation,
    /// Cyclic chain of structures linked by correlations.
    Glue,
}

/// Layer index and origin identifier of one element of a multiplied structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub layer: usize,
    pub origin: String,
}

/// Construction metadata: the layer and origin of every point and line.
///
/// Only the output of the multiplying constructions carries this. Algorithms
/// that claim to recover layers from incidence alone must not look at it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coordinates {
    pub construction: Construction,
    pub modulus: usize,
    pub points: Vec<Coord>,
    pub lines: Vec<Coord>,
}

impl Coordinates {
    pub fn point_lookup(&self) -> HashMap<(usize, &str), usize> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.layer, c.origin.as_str()), i))
            .collect()
    }

    pub fn line_lookup(&self) -> HashMap<(usize, &str), usize> {
        self.lines
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.layer, c.origin.as_str()), i))
            .collect()
    }
}

/// A finite incidence structure: points, lines and the flags between them.
#[derive(Clone, Debug)]
pub struct IncidenceStructure {
    name: String,
    points: Vec<String>,
    lines: Vec<String>,
    line_points: Vec<Vec<usize>>,
    point_lines: Vec<Vec<usize>>,
    incidence: Vec<bool>,
    point_index: HashMap<String, usize>,
    line_index: HashMap<String, usize>,
    coordinates: Option<Coordinates>,
}

/// Equality is element-wise: same points and lines in the same order, same
/// flags. The name and construction metadata are ignored.
impl PartialEq for IncidenceStructure {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
            && self.lines == other.lines
            && self.line_points == other.line_points
    }
}

impl Eq for IncidenceStructure {}

/// Incremental construction of an [`IncidenceStructure`].
#[derive(Debug, Default)]
pub struct Builder {
    name: String,
    points: Vec<String>,
    lines: Vec<String>,
    line_points: Vec<Vec<usize>>,
    point_index: HashMap<String, usize>,
    line_index: HashMap<String, usize>,
}

impl Builder {
    pub fn new(name: impl Into<String>) -> Self {
        Builder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn point(&mut self, id: impl Into<String>) -> Result<usize> {
        let id = id.into();
        if self.line_index.contains_key(&id) {
            return Err(Error::SortClash(id));
        }
        if self.point_index.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        let idx = self.points.len();
        self.point_index.insert(id.clone(), idx);
        self.points.push(id);
        Ok(idx)
    }

    pub fn line<I>(&mut self, id: impl Into<String>, points: I) -> Result<usize>
    where
        I: IntoIterator<Item = usize>,
    {
        let id = id.into();
        if self.point_index.contains_key(&id) {
            return Err(Error::SortClash(id));
        }
        if self.line_index.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        let mut pts: Vec<usize> = points.into_iter().collect();
        pts.sort_unstable();
        for w in pts.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateId(self.points[w[0]].clone()));
            }
        }
        if let Some(&bad) = pts.iter().find(|&&p| p >= self.points.len()) {
            return Err(Error::InvalidParameter(format!(
                "line `{id}` references point index {bad} out of range"
            )));
        }
        let idx = self.lines.len();
        self.line_index.insert(id.clone(), idx);
        self.lines.push(id);
        self.line_points.push(pts);
        Ok(idx)
    }

    /// Adds a line given by the identifiers of its points.
    pub fn line_by_ids<S: AsRef<str>>(&mut self, id: impl Into<String>, points: &[S]) -> Result<usize> {
        let pts = points
            .iter()
            .map(|p| {
                self.point_index
                    .get(p.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownId(p.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.line(id, pts)
    }

    pub fn build(self) -> IncidenceStructure {
        let np = self.points.len();
        let nl = self.lines.len();
        let mut point_lines = vec![Vec::new(); np];
        let mut incidence = vec![false; np * nl];
        for (l, pts) in self.line_points.iter().enumerate() {
            for &p in pts {
                point_lines[p].push(l);
                incidence[p * nl + l] = true;
            }
        }
        IncidenceStructure {
            name: self.name,
            points: self.points,
            lines: self.lines,
            line_points: self.line_points,
            point_lines,
            incidence,
            point_index: self.point_index,
            line_index: self.line_index,
            coordinates: None,
        }
    }
}

/// Outcome of the partial-linear-space checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlsReport {
    pub is_uniqueness: bool,
    pub every_line_ge2: bool,
    pub every_point_ge2: bool,
    pub is_pls: bool,
}

/// A connected component of the flag graph, as element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
}

impl IncidenceStructure {
    /// Builds a structure from identifiers; each line lists its points.
    pub fn from_ids<P, L, S>(name: impl Into<String>, points: P, lines: L) -> Result<Self>
    where
        P: IntoIterator<Item = S>,
        S: Into<String>,
        L: IntoIterator<Item = (S, Vec<S>)>,
    {
        let mut b = Builder::new(name);
        for p in points {
            b.point(p)?;
        }
        for (id, pts) in lines {
            let pts: Vec<String> = pts.into_iter().map(Into::into).collect();
            b.line_by_ids(id, &pts)?;
        }
        Ok(b.build())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn num_flags(&self) -> usize {
        self.line_points.iter().map(Vec::len).sum()
    }

    pub fn point_ids(&self) -> &[String] {
        &self.points
    }

    pub fn line_ids(&self) -> &[String] {
        &self.lines
    }

    pub fn point_id(&self, p: usize) -> &str {
        &self.points[p]
    }

    pub fn line_id(&self, l: usize) -> &str {
        &self.lines[l]
    }

    pub fn point(&self, id: &str) -> Result<usize> {
        self.point_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn line(&self, id: &str) -> Result<usize> {
        self.line_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    /// Points on line `l`, ascending.
    pub fn points_on(&self, l: usize) -> &[usize] {
        &self.line_points[l]
    }

    /// Lines through point `p`, ascending.
    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    #[inline]
    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.incidence[p * self.lines.len() + l]
    }

    /// All flags as `(point, line)` index pairs, ordered by line then point.
    pub fn flags(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.line_points
            .iter()
            .enumerate()
            .flat_map(|(l, pts)| pts.iter().map(move |&p| (p, l)))
    }

    pub fn coordinates(&self) -> Option<&Coordinates> {
        self.coordinates.as_ref()
    }

    pub fn require_coordinates(&self) -> Result<&Coordinates> {
        self.coordinates.as_ref().ok_or(Error::MissingCoordinates)
    }

    pub fn with_coordinates(mut self, coords: Coordinates) -> Result<Self> {
        if coords.points.len() != self.num_points() || coords.lines.len() != self.num_lines() {
            return Err(Error::CoordinateMismatch(format!(
                "coordinate table has {}/{} entries for {}/{} points/lines",
                coords.points.len(),
                coords.lines.len(),
                self.num_points(),
                self.num_lines()
            )));
        }
        if coords.modulus == 0
            || coords
                .points
                .iter()
                .chain(&coords.lines)
                .any(|c| c.layer >= coords.modulus)
        {
            return Err(Error::CoordinateMismatch("layer out of range".into()));
        }
        self.coordinates = Some(coords);
        Ok(self)
    }

    /// Drops construction metadata, leaving the bare incidence data.
    pub fn stripped(mut self) -> Self {
        self.coordinates = None;
        self
    }

    /// Degree of a point or size of a line, looked up by identifier.
    pub fn rank(&self, id: &str) -> Result<usize> {
        if let Some(&p) = self.point_index.get(id) {
            Ok(self.point_lines[p].len())
        } else if let Some(&l) = self.line_index.get(id) {
            Ok(self.line_points[l].len())
        } else {
            Err(Error::UnknownId(id.to_string()))
        }
    }

    pub fn point_degree(&self, p: usize) -> usize {
        self.point_lines[p].len()
    }

    pub fn line_size(&self, l: usize) -> usize {
        self.line_points[l].len()
    }

    /// Points shared by two lines.
    pub fn common_points(&self, k: usize, m: usize) -> Vec<usize> {
        intersect_sorted(&self.line_points[k], &self.line_points[m])
    }

    /// Lines shared by two points.
    pub fn common_lines(&self, a: usize, b: usize) -> Vec<usize> {
        intersect_sorted(&self.point_lines[a], &self.point_lines[b])
    }

    /// Whether two lines share at least one point.
    pub fn lines_meet(&self, k: usize, m: usize) -> bool {
        let (short, long) = if self.line_points[k].len() <= self.line_points[m].len() {
            (k, m)
        } else {
            (m, k)
        };
        self.line_points[short].iter().any(|&p| self.incident(p, long))
    }

    /// Whether some line carries both points. A point is collinear with
    /// itself iff it lies on some line.
    pub fn collinear_idx(&self, a: usize, b: usize) -> bool {
        let (short, long) = if self.point_lines[a].len() <= self.point_lines[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.point_lines[short].iter().any(|&l| self.incident(long, l))
    }

    pub fn collinear(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.collinear_idx(self.point(a)?, self.point(b)?))
    }

    /// The common point of two distinct lines, if any.
    pub fn line_meet(&self, k: &str, m: &str) -> Result<Option<String>> {
        let (ki, mi) = (self.line(k)?, self.line(m)?);
        if ki == mi {
            return Err(Error::InvalidParameter(format!(
                "line_meet needs two distinct lines, got `{k}` twice"
            )));
        }
        let common = self.common_points(ki, mi);
        match common.as_slice() {
            [] => Ok(None),
            [p] => Ok(Some(self.points[*p].clone())),
            _ => Err(Error::UniquenessViolated(k.to_string(), m.to_string())),
        }
    }

    /// Full collinearity table, `table[a * n + b]`.
    pub fn collinearity_table(&self) -> Vec<bool> {
        let n = self.num_points();
        let mut t = vec![false; n * n];
        for pts in &self.line_points {
            for &a in pts {
                for &b in pts {
                    t[a * n + b] = true;
                }
            }
        }
        t
    }

    /// First pair of distinct lines sharing two or more points.
    pub fn uniqueness_witness(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for (l, pts) in self.line_points.iter().enumerate() {
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    if let Some(&k) = seen.get(&(a, b)) {
                        return Some((k, l));
                    }
                    seen.insert((a, b), l);
                }
            }
        }
        None
    }

    pub fn validate(&self) -> PlsReport {
        let is_uniqueness = self.uniqueness_witness().is_none();
        let every_line_ge2 = self.line_points.iter().all(|p| p.len() >= 2);
        let every_point_ge2 = self.point_lines.iter().all(|l| l.len() >= 2);
        PlsReport {
            is_uniqueness,
            every_line_ge2,
            every_point_ge2,
            is_pls: is_uniqueness && every_line_ge2 && every_point_ge2,
        }
    }

    fn require_uniqueness(&self) -> Result<()> {
        match self.uniqueness_witness() {
            Some((k, m)) => Err(Error::UniquenessViolated(
                self.lines[k].clone(),
                self.lines[m].clone(),
            )),
            None => Ok(()),
        }
    }

    /// The dual structure: lines become points and points become lines,
    /// identifiers and flags preserved.
    pub fn dual(&self) -> IncidenceStructure {
        let name = match self.name.strip_suffix('°') {
            Some(base) => base.to_string(),
            None => format!("{}°", self.name),
        };
        IncidenceStructure {
            name,
            points: self.lines.clone(),
            lines: self.points.clone(),
            line_points: self.point_lines.clone(),
            point_lines: self.line_points.clone(),
            incidence: transpose(&self.incidence, self.num_points(), self.num_lines()),
            point_index: self.line_index.clone(),
            line_index: self.point_index.clone(),
            coordinates: None,
        }
    }

    /// Components of the bipartite flag graph, ordered by their smallest
    /// point (components without points come last, by smallest line).
    pub fn connected_components(&self) -> Vec<Component> {
        let np = self.num_points();
        let nl = self.num_lines();
        let mut comp = vec![usize::MAX; np + nl];
        let mut out = Vec::new();
        for start in 0..np + nl {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut c = Component {
                points: Vec::new(),
                lines: Vec::new(),
            };
            let mut queue = VecDeque::from([start]);
            comp[start] = id;
            while let Some(v) = queue.pop_front() {
                let nbrs: Vec<usize> = if v < np {
                    c.points.push(v);
                    self.point_lines[v].iter().map(|&l| np + l).collect()
                } else {
                    c.lines.push(v - np);
                    self.line_points[v - np].clone()
                };
                for w in nbrs {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            c.points.sort_unstable();
            c.lines.sort_unstable();
            out.push(c);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Substructure spanned by the given points and lines, with flags
    /// restricted to them. Identifiers are kept.
    pub fn restrict(&self, name: impl Into<String>, points: &[usize], lines: &[usize]) -> IncidenceStructure {
        let mut b = Builder::new(name);
        let mut remap = HashMap::new();
        for &p in points {
            remap.insert(p, b.point(self.points[p].clone()).expect("distinct ids"));
        }
        for &l in lines {
            let pts: Vec<usize> = self.line_points[l]
                .iter()
                .filter_map(|p| remap.get(p).copied())
                .collect();
            b.line(self.lines[l].clone(), pts).expect("distinct ids");
        }
        b.build()
    }

    /// The neighbourhood of `p`: every other point collinear with `p`,
    /// together with the lines carrying at least two of those points.
    pub fn neighborhood(&self, p: &str) -> Result<IncidenceStructure> {
        let pi = self.point(p)?;
        let pts: Vec<usize> = (0..self.num_points())
            .filter(|&q| q != pi && self.collinear_idx(pi, q))
            .collect();
        let inside: HashSet<usize> = pts.iter().copied().collect();
        let lines: Vec<usize> = (0..self.num_lines())
            .filter(|&l| self.line_points[l].iter().filter(|q| inside.contains(q)).count() >= 2)
            .collect();
        Ok(self.restrict(format!("{}({p})", self.name), &pts, &lines))
    }

    /// For every triangle `(a, b, c)` and every point `d` on the line
    /// joining `a` and `b`, `c` is collinear with `d`.
    pub fn is_shultenian(&self) -> Result<bool> {
        self.require_uniqueness()?;
        Ok(self.shult_witness().is_none())
    }

    /// A triangle `(a, b, c)` and point `d` on `ab` with `c` not collinear to `d`.
    pub fn shult_witness(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.num_points();
        let col = self.collinearity_table();
        for l in 0..self.num_lines() {
            let on_l = &self.line_points[l];
            for (i, &a) in on_l.iter().enumerate() {
                for &b in &on_l[i + 1..] {
                    for c in 0..n {
                        if self.incident(c, l) || !col[a * n + c] || !col[b * n + c] {
                            continue;
                        }
                        if let Some(&d) = on_l.iter().find(|&&d| !col[c * n + d]) {
                            return Some((a, b, c, d));
                        }
                    }
                }
            }
        }
        None
    }
}

fn transpose(m: &[bool], rows: usize, cols: usize) -> Vec<bool> {
    let mut t = vec![false; m.len()];
    for r in 0..rows {
        for c in 0..cols {
            t[c * rows + r] = m[r * cols + c];
        }
    }
    t
}

pub(crate) fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
