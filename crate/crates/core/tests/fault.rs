mod common;

use common::RefGraph;
use dcell_core::fault::{ft_hc, ft_hp, hc_fault_bound, hp_fault_bound, FaultSet};
use dcell_core::topology::{build_graph, Dcell};
use dcell_core::DcellError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, PartialEq, Debug)]
enum El {
    V(u64),
    E(u64, u64),
}

fn elements(r: &RefGraph) -> Vec<El> {
    let mut v: Vec<El> = (0..r.order()).map(El::V).collect();
    v.extend(r.edges().into_iter().map(|(a, b)| El::E(a, b)));
    v
}

fn fault_set(d: &Dcell, els: &[El]) -> FaultSet {
    let mut f = FaultSet::new();
    for e in els {
        match *e {
            El::V(x) => f.add_vertex(d, x).unwrap(),
            El::E(a, b) => f.add_edge(d, a, b).unwrap(),
        }
    }
    f
}

fn split(els: &[El]) -> (Vec<u64>, Vec<(u64, u64)>) {
    let vs = els.iter().filter_map(|e| if let El::V(x) = e { Some(*x) } else { None }).collect();
    let es = els.iter().filter_map(|e| if let El::E(a, b) = e { Some((*a, *b)) } else { None }).collect();
    (vs, es)
}

fn check_hc(d: &Dcell, r: &RefGraph, els: &[El]) {
    let c = ft_hc(d, &fault_set(d, els)).unwrap_or_else(|e| panic!("{els:?}: {e}"));
    let (vs, es) = split(els);
    assert!(r.is_hc(&c, &vs, &es), "{els:?}");
}

fn check_hp(d: &Dcell, r: &RefGraph, els: &[El], u: u64, v: u64) {
    let p = ft_hp(d, &fault_set(d, els), u, v).unwrap_or_else(|e| panic!("{els:?} ({u}, {v}): {e}"));
    let (vs, es) = split(els);
    assert!(r.is_hp(&p, u, v, &vs, &es), "{els:?} ({u}, {v})");
}

fn random_set(r: &RefGraph, pool: &[El], size: usize, rng: &mut ChaCha8Rng) -> Vec<El> {
    let _ = r;
    let mut s = Vec::new();
    while s.len() < size {
        let e = pool[rng.gen_range(0..pool.len())];
        if !s.contains(&e) {
            s.push(e);
        }
    }
    s
}

#[test]
fn bounds() {
    let d = Dcell::from_nk(4, 2).unwrap();
    assert_eq!((hp_fault_bound(&d), hc_fault_bound(&d)), (2, 3));
    let d = Dcell::from_nk(2, 2).unwrap();
    assert_eq!((hp_fault_bound(&d), hc_fault_bound(&d)), (0, 1));
    let f = FaultSet::from_parts(&d, [0, 1], []).unwrap();
    assert!(matches!(ft_hc(&d, &f), Err(DcellError::BoundExceeded { .. })));
    let one = FaultSet::from_parts(&d, [0], []).unwrap();
    assert!(matches!(ft_hp(&d, &one, 1, 2), Err(DcellError::BoundExceeded { .. })));
}

#[test]
fn fault_free_cycle_and_path() {
    for (n, k) in [(2, 2), (3, 2), (4, 2), (2, 3)] {
        let d = Dcell::from_nk(n, k).unwrap();
        let r = RefGraph::dcell(n as u64, k);
        check_hc(&d, &r, &[]);
        if n + k >= 4 {
            check_hp(&d, &r, &[], 0, d.vertex_count() - 1);
        }
    }
}

#[test]
fn every_single_fault_small() {
    for (n, k) in [(2, 2), (3, 1), (4, 1), (3, 2)] {
        let d = Dcell::from_nk(n, k).unwrap();
        let r = RefGraph::dcell(n as u64, k);
        for e in elements(&r) {
            check_hc(&d, &r, &[e]);
        }
    }
}

#[test]
fn every_double_fault_four_one() {
    let d = Dcell::from_nk(4, 1).unwrap();
    let r = RefGraph::dcell(4, 1);
    let els = elements(&r);
    for i in 0..els.len() {
        for j in i + 1..els.len() {
            check_hc(&d, &r, &[els[i], els[j]]);
        }
    }
}

#[test]
fn single_faults_all_pairs_four_one() {
    let d = Dcell::from_nk(4, 1).unwrap();
    let r = RefGraph::dcell(4, 1);
    for e in elements(&r) {
        for u in 0..20 {
            for v in 0..20 {
                if u != v && e != El::V(u) && e != El::V(v) {
                    check_hp(&d, &r, &[e], u, v);
                }
            }
        }
    }
}

#[test]
fn random_sets_at_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (n, k, trials) in [(5, 2, 60), (6, 1, 150), (5, 1, 150), (4, 2, 120), (7, 1, 100), (3, 3, 5), (2, 3, 60)] {
        let d = Dcell::from_nk(n, k).unwrap();
        let r = RefGraph::dcell(n as u64, k);
        let pool = elements(&r);
        let hc = hc_fault_bound(&d) as usize;
        for _ in 0..trials {
            check_hc(&d, &r, &random_set(&r, &pool, hc, &mut rng));
            let s = random_set(&r, &pool, hc - 1, &mut rng);
            for _ in 0..3 {
                let (u, v) = (rng.gen_range(0..r.order()), rng.gen_range(0..r.order()));
                if u != v && !s.contains(&El::V(u)) && !s.contains(&El::V(v)) {
                    check_hp(&d, &r, &s, u, v);
                }
            }
        }
    }
}

#[test]
fn faults_packed_into_one_copy() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, k, trials) in [(2, 3, 100), (3, 2, 150), (4, 2, 150), (5, 2, 40), (5, 1, 150), (4, 1, 150)] {
        let d = Dcell::from_nk(n, k).unwrap();
        let r = RefGraph::dcell(n as u64, k);
        let inner = d.size(k - 1);
        let all = elements(&r);
        for _ in 0..trials {
            let copy = rng.gen_range(0..=inner);
            let inside = |x: u64| x / inner == copy;
            let pool: Vec<El> = all
                .iter()
                .copied()
                .filter(|e| match *e {
                    El::V(x) => inside(x),
                    El::E(a, b) => inside(a) && inside(b),
                })
                .collect();
            let hc = hc_fault_bound(&d) as usize;
            check_hc(&d, &r, &random_set(&r, &pool, hc, &mut rng));
            let s = random_set(&r, &pool, hc - 1, &mut rng);
            for _ in 0..4 {
                let pick = |rng: &mut ChaCha8Rng| {
                    if rng.gen_bool(0.5) {
                        copy * inner + rng.gen_range(0..inner)
                    } else {
                        rng.gen_range(0..r.order())
                    }
                };
                let (u, v) = (pick(&mut rng), pick(&mut rng));
                if u != v && !s.contains(&El::V(u)) && !s.contains(&El::V(v)) {
                    check_hp(&d, &r, &s, u, v);
                }
            }
        }
    }
}

#[test]
fn fault_files_round_trip() {
    let d = Dcell::from_nk(3, 2).unwrap();
    let g = build_graph(&d, 1000).unwrap();
    let e = g.edges()[10];
    let f = FaultSet::from_parts(&d, [5], [(e.v, e.u)]).unwrap();
    assert_eq!(FaultSet::from_json(&d, &f.to_json()).unwrap(), f);
    assert!(FaultSet::from_parts(&d, [], [(0, 100)]).is_err());
    assert!(FaultSet::from_json(&d, "{\"vertices\": [156]}").is_err());
}
