//! The example families: segment, combinatorial Grassmannians, prime-field
//! planes and Havlicek–Tietze configurations, plus the classical Pappus and
//! Desargues configurations shipped as data.

use crate::error::{Error, Result};
use crate::io;
use crate::structure::{Builder, IncidenceStructure};

/// Arithmetic modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return None;
        }
        // a^(p-2) by square-and-multiply
        let (mut base, mut exp, mut acc) = (a, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        Some(acc)
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// A parallel class of an affine plane, labelled by slope (`inf` for vertical).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelClass {
    pub direction: String,
    pub lines: Vec<usize>,
}

/// Two points `a`, `b` on one line `c`.
pub fn segment() -> IncidenceStructure {
    IncidenceStructure::from_ids("segment", ["a", "b"], [("c", vec!["a", "b"])])
        .expect("static structure")
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, size, &mut Vec::new(), &mut out);
    out
}

fn subset_id(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// `G_m(X)` for `X = {1..n}`: `m`-subsets as points, `(m+1)`-subsets as
/// lines, incidence by inclusion.
pub fn grassmannian(m: usize, n: usize) -> Result<IncidenceStructure> {
    if m < 1 || m >= n {
        return Err(Error::InvalidParameter(format!(
            "grassmannian needs 1 <= m < n, got m={m}, n={n}"
        )));
    }
    let mut b = Builder::new(format!("G_{m}({n})"));
    let pts = subsets(n, m);
    for s in &pts {
        b.point(subset_id(s))?;
    }
    for big in subsets(n, m + 1) {
        let on: Vec<usize> = pts
            .iter()
            .enumerate()
            .filter(|(_, s)| s.iter().all(|x| big.contains(x)))
            .map(|(i, _)| i)
            .collect();
        b.line(subset_id(&big), on)?;
    }
    Ok(b.build())
}

/// Havlicek–Tietze configuration over GF(p):
/// `(a,b)` lies on `[α,β]` iff `a·α = b + β`.
pub fn ht_config(p: u64) -> Result<IncidenceStructure> {
    if p == 2 {
        return Err(Error::InvalidParameter("HT(q) needs an odd prime".into()));
    }
    let f = PrimeField::new(p)?;
    let mut b = Builder::new(format!("HT({p})"));
    let mut index = Vec::new();
    for a in f.elements() {
        for c in f.elements() {
            index.push(((a, c), b.point(format!("({a},{c})"))?));
        }
    }
    for alpha in f.elements() {
        for beta in f.elements() {
            let on = index
                .iter()
                .filter(|((a, c), _)| f.mul(*a, alpha) == f.add(*c, beta))
                .map(|(_, i)| *i);
            b.line(format!("[{alpha},{beta}]"), on)?;
        }
    }
    Ok(b.build())
}

/// AG(2,p) with its parallel classes. Lines are `[s,c]` for `y = s·x + c`
/// and `[inf,c]` for `x = c`; classes come in the order `inf, 0, .., p-1`.
pub fn affine_plane(p: u64) -> Result<(IncidenceStructure, Vec<ParallelClass>)> {
    let f = PrimeField::new(p)?;
    let mut b = Builder::new(format!("AG(2,{p})"));
    let mut pts = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            pts.push(((x, y), b.point(format!("({x},{y})"))?));
        }
    }
    let mut classes = Vec::new();
    let mut vertical = Vec::new();
    for c in f.elements() {
        let on = pts.iter().filter(|((x, _), _)| *x == c).map(|(_, i)| *i);
        vertical.push(b.line(format!("[inf,{c}]"), on)?);
    }
    classes.push(ParallelClass {
        direction: "inf".into(),
        lines: vertical,
    });
    for s in f.elements() {
        let mut class = Vec::new();
        for c in f.elements() {
            let on = pts
                .iter()
                .filter(|((x, y), _)| *y == f.add(f.mul(s, *x), c))
                .map(|(_, i)| *i);
            class.push(b.line(format!("[{s},{c}]"), on)?);
        }
        classes.push(ParallelClass {
            direction: s.to_string(),
            lines: class,
        });
    }
    Ok((b.build(), classes))
}

/// Removes one whole parallel class from an affine plane.
pub fn delete_direction(
    plane: &IncidenceStructure,
    classes: &[ParallelClass],
    direction: &str,
) -> Result<IncidenceStructure> {
    let class = classes
        .iter()
        .find(|c| c.direction == direction)
        .ok_or_else(|| Error::InvalidParameter(format!("no parallel class `{direction}`")))?;
    let points: Vec<usize> = (0..plane.num_points()).collect();
    let lines: Vec<usize> = (0..plane.num_lines())
        .filter(|l| !class.lines.contains(l))
        .collect();
    Ok(plane.restrict(format!("{}-{direction}", plane.name()), &points, &lines))
}

/// Normalised representatives of the 1-dimensional subspaces of GF(p)^3
/// (first non-zero coordinate equal to 1).
fn projective_points(f: &PrimeField) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            for z in f.elements() {
                let v = [x, y, z];
                if v.iter().find(|&&c| c != 0) == Some(&1) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// PG(2,p): points `(x,y,z)` and lines `[u,v,w]`, incident iff `ux+vy+wz = 0`.
pub fn projective_plane(p: u64) -> Result<IncidenceStructure> {
    let f = PrimeField::new(p)?;
    let vecs = projective_points(&f);
    let mut b = Builder::new(format!("PG(2,{p})"));
    for v in &vecs {
        b.point(format!("({},{},{})", v[0], v[1], v[2]))?;
    }
    for u in &vecs {
        let on = vecs.iter().enumerate().filter(|(_, v)| {
            let dot = f.add(f.add(f.mul(u[0], v[0]), f.mul(u[1], v[1])), f.mul(u[2], v[2]));
            dot == 0
        });
        b.line(format!("[{},{},{}]", u[0], u[1], u[2]), on.map(|(i, _)| i))?;
    }
    Ok(b.build())
}

const PAPPUS_JSON: &str = include_str!("../data/pappus.json");
const DESARGUES_JSON: &str = include_str!("../data/desargues.json");

/// The Pappus configuration 9_3, drawn classically (see `data/pappus.json`).
pub fn pappus() -> IncidenceStructure {
    io::structure_from_str(PAPPUS_JSON).expect("bundled Pappus data parses")
}

/// The Desargues configuration 10_3, drawn classically (see `data/desargues.json`).
pub fn desargues() -> IncidenceStructure {
    io::structure_from_str(DESARGUES_JSON).expect("bundled Desargues data parses")
}
