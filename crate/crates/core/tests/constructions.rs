mod common;

use std::collections::BTreeMap;

use common::*;
use multiconf::covering::Substructure;
use multiconf::generators::*;
use multiconf::multiply::*;
use multiconf::search::{are_isomorphic, find_correlation_between};
use multiconf::structure::Construction;

#[test]
fn dual_multiply_matches_incidence_rule() {
    for base in [segment(), segment().dual(), fano(), grassmannian(2, 4).unwrap(), ht_config(3).unwrap()] {
        for k in [4, 6, 8] {
            let m = multiply_dual(k, &base).unwrap();
            assert_eq!(flag_ids(&m), multiply_dual_oracle(k, &base), "{} k={k}", base.name());
        }
    }
}

#[test]
fn correlative_multiply_matches_incidence_rule() {
    let f = fano();
    let pi = polarity(&f);
    let c = pi.compose(&collineations(&f, 1)[0]).unwrap();
    for kappa in [&pi, &c] {
        for k in [3, 4, 5] {
            let m = multiply_correlative(k, kappa, &f).unwrap();
            assert_eq!(flag_ids(&m), multiply_correlative_oracle(k, kappa, &f));
        }
    }
}

#[test]
fn segment_example_census() {
    let m = multiply_dual(6, &segment()).unwrap();
    assert_eq!((m.num_points(), m.num_lines()), (9, 9));
    let (pts, lns) = rank_census(&m);
    assert_eq!(pts, BTreeMap::from([(2, 6), (3, 3)]));
    assert_eq!(lns, BTreeMap::from([(2, 6), (3, 3)]));
}

#[test]
fn layer_ranks_alternate() {
    // Base with constant point degree κ and line size ρ: points of even
    // layers get degree κ+1, odd layers ρ+1; lines the other way round.
    let cases = [
        (segment(), 1, 2),
        (grassmannian(2, 5).unwrap(), 3, 3),
        (grassmannian(1, 4).unwrap(), 3, 2),
        (ht_config(3).unwrap(), 3, 3),
    ];
    for (base, kappa, rho) in cases {
        for k in [4, 6] {
            let m = multiply_dual(k, &base).unwrap();
            let c = m.coordinates().unwrap();
            for p in 0..m.num_points() {
                let want = if c.points[p].layer % 2 == 0 { kappa + 1 } else { rho + 1 };
                assert_eq!(m.point_degree(p), want);
            }
            for l in 0..m.num_lines() {
                let want = if c.lines[l].layer % 2 == 0 { rho + 1 } else { kappa + 1 };
                assert_eq!(m.line_size(l), want);
            }
        }
    }
}

#[test]
fn fano_multiplies_are_regular() {
    let f = fano();
    let m = multiply_correlative(3, &polarity(&f), &f).unwrap();
    assert_eq!((m.num_points(), m.num_lines()), (21, 21));
    assert_eq!(rank_census(&m), (BTreeMap::from([(4, 21)]), BTreeMap::from([(4, 21)])));
    let m = multiply_dual(4, &f).unwrap();
    assert_eq!((m.num_points(), m.num_lines()), (28, 28));
    assert!(m.validate().is_pls);
}

#[test]
fn builtin_correlation_is_involutive() {
    for (k, base) in [(6, segment()), (4, fano()), (6, fano()), (8, grassmannian(2, 4).unwrap())] {
        let m = multiply_dual(k, &base).unwrap();
        let c = builtin_correlation(&m).unwrap();
        assert!(c.check(&m, &m).unwrap());
        assert!(c.is_involutive().unwrap());
        let coords = m.coordinates().unwrap();
        for (p, &l) in c.point_part.iter().enumerate() {
            assert_eq!(coords.lines[l].layer, (7 * k + 1 - coords.points[p].layer) % k);
            assert_eq!(coords.lines[l].origin, coords.points[p].origin);
        }
    }
}

#[test]
fn shift_and_parity_maps_verify() {
    for (k, base) in [(6, segment()), (4, fano()), (6, fano())] {
        let a = multiply_dual(k, &base).unwrap();
        let b = multiply_dual(k, &base.dual()).unwrap();
        let s = shift_iso(&a, &b).unwrap();
        assert!(s.check(&a, &b).unwrap());
    }
    let f = fano();
    let pi = polarity(&f);
    for k in [4, 6] {
        let a = multiply_dual(k, &f).unwrap();
        let b = multiply_correlative(k, &pi, &f).unwrap();
        assert!(parity_iso(&a, &b, &f, &pi).unwrap().check(&a, &b).unwrap());
    }
}

#[test]
fn parity_map_needs_involution() {
    let f = fano();
    let pi = polarity(&f);
    let c = pi.compose(&collineations(&f, 1)[0]).unwrap();
    if !c.is_involutive().unwrap() {
        let a = multiply_dual(4, &f).unwrap();
        let b = multiply_correlative(4, &c, &f).unwrap();
        assert!(parity_iso(&a, &b, &f, &c).is_err());
    }
}

#[test]
fn layer_embeddings_are_closed_copies() {
    let s = segment();
    let m = multiply_dual(6, &s).unwrap();
    for layer in 0..6 {
        let (src, e) = canonical_embedding(&m, &s, layer).unwrap();
        assert!(e.check(&src, &m).unwrap());
        let sub = Substructure::new(e.point_part.iter().copied(), e.line_part.iter().copied());
        assert!(sub.is_closed(&m));
        let image = sub.to_structure(&m, "image");
        assert!(are_isomorphic(&image, &src));
        if layer % 2 == 1 {
            assert_eq!((image.num_points(), image.num_lines()), (1, 2));
        }
    }
}

#[test]
fn glue_of_dual_chain_is_dual_multiply() {
    for base in [segment(), fano()] {
        let spec = dual_glue_spec(6, &base).unwrap();
        let g = glue(&spec);
        assert_eq!(flag_ids(&g), multiply_dual_oracle(6, &base));
        assert_eq!(g.coordinates().unwrap().construction, Construction::Glue);
    }
}

#[test]
fn glue_rejects_broken_chains() {
    let s = segment();
    let sd = s.dual();
    let c = find_correlation_between(&s, &sd).unwrap();
    // Three segments cannot be chained: the second map would start at a dual.
    assert!(GlueSpec::new(vec![s.clone(), sd.clone(), s.clone()], vec![c.clone(), c.clone(), c.clone()]).is_err());
    assert!(GlueSpec::new(vec![s.clone(), sd.clone()], vec![c.clone(), c]).is_err());
}

#[test]
fn neighbourhoods() {
    let m = multiply_dual(6, &segment()).unwrap();
    let n = m.neighborhood("(0,a)").unwrap();
    let mut pts: Vec<&str> = n.point_ids().iter().map(String::as_str).collect();
    pts.sort();
    assert_eq!(pts, ["(0,b)", "(1,c)", "(5,c)"]);
    let mut lns: Vec<&str> = n.line_ids().iter().map(String::as_str).collect();
    lns.sort();
    assert_eq!(lns, ["[0,c]", "[5,b]"]);

    let f = fano();
    let n = f.neighborhood(f.point_id(0)).unwrap();
    assert_eq!(n.num_points(), 6);
    // Four lines miss the point and keep three points; three pass through
    // it and keep two.
    assert_eq!(rank_census(&n).1, BTreeMap::from([(2, 3), (3, 4)]));
}

#[test]
fn named_configurations() {
    assert!(are_isomorphic(&grassmannian(2, 5).unwrap(), &desargues()));
    assert!(are_isomorphic(&ht_config(3).unwrap(), &pappus()));
    assert!(!are_isomorphic(&pappus(), &desargues()));
    let (ag, classes) = affine_plane(3).unwrap();
    for class in &classes {
        let d = delete_direction(&ag, &classes, &class.direction).unwrap();
        assert!(are_isomorphic(&d, &ht_config(3).unwrap()));
    }
}

#[test]
fn ht_has_parallel_lines() {
    let h = ht_config(3).unwrap();
    let mut disjoint = 0;
    for k in 0..h.num_lines() {
        for m in k + 1..h.num_lines() {
            if h.line_meet(h.line_id(k), h.line_id(m)).unwrap().is_none() {
                disjoint += 1;
            }
        }
    }
    // Three remaining parallel classes of three lines each.
    assert_eq!(disjoint, 3 * 3);
}

/// For every point `a` off a line `l`: some line through `a` misses `l`, and
/// some point of `l` is not collinear with `a`.
fn escape_hypotheses(s: &multiconf::IncidenceStructure) -> bool {
    (0..s.num_points()).all(|a| {
        (0..s.num_lines()).filter(|&l| !s.incident(a, l)).all(|l| {
            s.lines_through(a).iter().any(|&m| !s.lines_meet(l, m))
                && s.points_on(l).iter().any(|&q| !s.collinear_idx(a, q))
        })
    })
}

#[test]
fn tack2_bases_meet_their_hypotheses() {
    for p in [3, 5] {
        let h = ht_config(p).unwrap();
        assert!(h.validate().is_uniqueness);
        assert!(escape_hypotheses(&h), "HT({p})");
    }
    for (m, n) in [(2, 6), (2, 5), (3, 7)] {
        let g = grassmannian(m, n).unwrap();
        assert!(escape_hypotheses(&g), "G{m}({n})");
        assert!((0..g.num_points()).all(|p| g.point_degree(p) == n - m));
        assert!((0..g.num_lines()).all(|l| g.line_size(l) == m + 1));
    }
    // With m = 1 or m = n-2 any two points are collinear.
    assert!(!escape_hypotheses(&grassmannian(1, 4).unwrap()));
    assert!(!escape_hypotheses(&grassmannian(2, 4).unwrap()));
}
