mod common;

use common::*;
use multiconf::covering::{closed_hull, tack1, tack2, tack_rank, TackRelation};
use multiconf::generators::{grassmannian, ht_config, segment};
use multiconf::io::{structure_from_str, structure_to_string, Document};
use multiconf::multiply::multiply_dual;
use multiconf::search::{are_isomorphic, find_isomorphism};
use multiconf::IncidenceStructure;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn build(np: usize, rows: &[Vec<bool>]) -> IncidenceStructure {
    let pts: Vec<String> = (0..np).map(|p| format!("p{p}")).collect();
    let lns: Vec<(String, Vec<String>)> = rows
        .iter()
        .enumerate()
        .map(|(l, row)| {
            (
                format!("l{l}"),
                row.iter().enumerate().filter(|(_, &b)| b).map(|(p, _)| format!("p{p}")).collect(),
            )
        })
        .collect();
    IncidenceStructure::from_ids("random", pts, lns).unwrap()
}

fn structure(max_points: usize, max_lines: usize) -> impl Strategy<Value = IncidenceStructure> {
    (1..=max_points, 1..=max_lines).prop_flat_map(|(np, nl)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), np), nl).prop_map(move |rows| build(np, &rows))
    })
}

/// A structure together with a random reordering of its points and lines.
fn shuffled(
    s: impl Strategy<Value = IncidenceStructure>,
) -> impl Strategy<Value = (IncidenceStructure, Vec<usize>, Vec<usize>)> {
    s.prop_flat_map(|s| {
        let pts: Vec<usize> = (0..s.num_points()).collect();
        let lns: Vec<usize> = (0..s.num_lines()).collect();
        (Just(s), Just(pts).prop_shuffle(), Just(lns).prop_shuffle())
    })
}

fn pulled_back(t: &TackRelation, points: &[usize], lines: &[usize]) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = t.pairs().map(|(p, l)| (points[p], lines[l])).collect();
    v.sort_unstable();
    v
}

fn layered() -> impl Strategy<Value = IncidenceStructure> {
    prop_oneof![
        Just(multiply_dual(6, &segment()).unwrap()),
        Just(multiply_dual(4, &fano()).unwrap()),
        Just(multiply_dual(4, &ht_config(3).unwrap()).unwrap()),
        Just(multiply_dual(4, &grassmannian(1, 4).unwrap()).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution(s in structure(7, 7)) {
        let d = s.dual();
        prop_assert_eq!(d.dual(), s.clone());
        prop_assert_eq!((d.num_points(), d.num_lines(), d.num_flags()), (s.num_lines(), s.num_points(), s.num_flags()));
        for l in 0..s.num_lines() {
            prop_assert_eq!(d.rank(s.line_id(l)).unwrap(), s.rank(s.line_id(l)).unwrap());
        }
    }

    #[test]
    fn ranks_count_flags(s in structure(7, 7)) {
        let pts: usize = (0..s.num_points()).map(|p| s.point_degree(p)).sum();
        let lns: usize = (0..s.num_lines()).map(|l| s.line_size(l)).sum();
        prop_assert_eq!(pts, s.num_flags());
        prop_assert_eq!(lns, s.num_flags());
    }

    #[test]
    fn search_is_relabel_invariant((s, p, l) in shuffled(structure(7, 7))) {
        let t = reorder(&s, &p, &l);
        let m = find_isomorphism(&s, &t).expect("relabelled copy is isomorphic");
        prop_assert!(m.check(&s, &t).unwrap());
        let back = m.inverse().unwrap();
        prop_assert!(back.check(&t, &s).unwrap());
        prop_assert!(m.compose(&back).unwrap().is_identity());
    }

    #[test]
    fn search_agrees_with_brute_force(a in structure(6, 6), b in structure(6, 6)) {
        prop_assert_eq!(are_isomorphic(&a, &b), brute_isomorphic(&a, &b));
        if let Some(m) = find_isomorphism(&a, &b) {
            prop_assert!(m.check(&a, &b).unwrap());
        }
    }

    #[test]
    fn search_agrees_with_brute_force_on_near_copies((s, p, l) in shuffled(structure(6, 6)), q in 0usize..36, toggle: bool) {
        let mut t = reorder(&s, &p, &l);
        if toggle {
            let q = q % (t.num_points() * t.num_lines());
            t = flip(&t, q / t.num_lines(), q % t.num_lines());
        }
        prop_assert_eq!(are_isomorphic(&s, &t), brute_isomorphic(&s, &t));
    }

    #[test]
    fn documents_round_trip(s in structure(7, 7)) {
        let text = structure_to_string(&s);
        let back = structure_from_str(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(structure_to_string(&back), text.clone());
        prop_assert_eq!(Document::parse(&text).unwrap().render(), text);
    }

    #[test]
    fn layered_documents_keep_coordinates(m in layered()) {
        let back = structure_from_str(&structure_to_string(&m)).unwrap();
        prop_assert_eq!(back.coordinates(), m.coordinates());
    }

    #[test]
    fn hulls_are_closed_and_idempotent(
        s in structure(7, 7),
        seeds in subsequence((0..7).collect::<Vec<usize>>(), 0..4),
        lseeds in subsequence((0..7).collect::<Vec<usize>>(), 0..3),
    ) {
        let pts: Vec<usize> = seeds.into_iter().filter(|&p| p < s.num_points()).collect();
        let lns: Vec<usize> = lseeds.into_iter().filter(|&l| l < s.num_lines()).collect();
        let h = closed_hull(&s, &pts, &lns);
        prop_assert!(h.is_closed(&s));
        prop_assert!(pts.iter().all(|p| h.points.contains(p)));
        prop_assert!(lns.iter().all(|l| h.lines.contains(l)));
        let hp: Vec<usize> = h.points.iter().copied().collect();
        let hl: Vec<usize> = h.lines.iter().copied().collect();
        prop_assert_eq!(closed_hull(&s, &hp, &hl), h);
    }

    #[test]
    fn tacks_are_relabel_equivariant((s, p, l) in shuffled(layered())) {
        let t = reorder(&s, &p, &l);
        for f in [tack_rank, tack1, tack2] {
            let mut want: Vec<(usize, usize)> = f(&s).pairs().collect();
            want.sort_unstable();
            prop_assert_eq!(pulled_back(&f(&t), &p, &l), want);
        }
    }

    #[test]
    fn random_tacks_are_relabel_equivariant((s, p, l) in shuffled(structure(6, 6))) {
        let t = reorder(&s, &p, &l);
        for f in [tack_rank, tack1, tack2] {
            let mut want: Vec<(usize, usize)> = f(&s).pairs().collect();
            want.sort_unstable();
            prop_assert_eq!(pulled_back(&f(&t), &p, &l), want);
        }
    }

    #[test]
    fn dual_multiply_follows_the_rule(base in structure(4, 4), half in 1usize..4) {
        let k = 2 * half;
        if let Ok(m) = multiply_dual(k, &base) {
            prop_assert_eq!(flag_ids(&m), multiply_dual_oracle(k, &base));
        }
    }
}
