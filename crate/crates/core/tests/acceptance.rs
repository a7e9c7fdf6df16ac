mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{all_tuples, RefGraph};
use dcell_core::broadcast::{fixed_cycle_experiment, simulate, Scheme, SimConfig};
use dcell_core::construct::{counted_dcell_hp, dcell_hp};
use dcell_core::fault::{ft_hc, ft_hp, FaultSet};
use dcell_core::oracle::{find_hc, find_hp, is_hamiltonian_connected, SmallGraph};
use dcell_core::partial::{materialize_partial, partial_hp, Listing, Prefix, ShapeA};
use dcell_core::topology::{build_graph, Dcell};
use dcell_core::{verify_cycle, verify_path};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Check = fn() -> Outcome;
type Element = (Option<u64>, Option<(u64, u64)>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn topology_fidelity() -> Outcome {
    for (n, k) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (4, 2)] {
        let d = Dcell::from_nk(n, k).map_err(|e| e.to_string())?;
        let g = build_graph(&d, 1_000_000).map_err(|e| e.to_string())?;
        ensure(g.vertex_count() == common::ref_t(n as u64, k), || format!("({n},{k}) vertex count"))?;
        ensure(g.regular_degree() == Some(n - 1 + k), || format!("({n},{k}) not regular"))?;
        for x in 0..g.vertex_count() {
            for j in 1..=k {
                let c = g.neighbors(x).iter().filter(|&&(_, l)| l == j).count();
                ensure(c == 1, || format!("({n},{k}) vertex {x} has {c} level-{j} edges"))?;
            }
        }
    }
    Ok(())
}

fn six_cycle() -> Outcome {
    let g = SmallGraph::from_dcell(2, 1).map_err(|e| e.to_string())?;
    // a connected 2-regular graph on six vertices is C_6
    let two_regular = g.vertex_count() == 6 && (0..6).all(|v| g.degree(v) == 2);
    let c = find_hc(&g).map_err(|e| e.to_string())?;
    ensure(two_regular && c.found(), || "not a six-cycle".into())?;
    ensure(verify_cycle(&g, &c.sequence).is_valid(), || "bad cycle".into())?;
    let r = is_hamiltonian_connected(&g).map_err(|e| e.to_string())?;
    let (a, b) = r.witness.ok_or("no witness pair")?;
    ensure(!r.connected && !find_hp(&g, a as usize, b as usize).map_err(|e| e.to_string())?.found(), || {
        format!("witness ({a}, {b}) has a path")
    })
}

fn base_certification() -> Outcome {
    for (n, k, pairs) in [(2, 2, 861), (3, 1, 66)] {
        let g = SmallGraph::from_dcell(n, k).map_err(|e| e.to_string())?;
        let r = is_hamiltonian_connected(&g).map_err(|e| e.to_string())?;
        ensure(r.connected && r.pairs_checked == pairs, || format!("({n},{k}): {} pairs", r.pairs_checked))?;
        for ((u, v), p) in &r.paths {
            ensure(verify_path(&g, p, *u, *v, true).is_valid(), || format!("({n},{k}) path {u}-{v}"))?;
        }
    }
    Ok(())
}

fn fault_free_paths() -> Outcome {
    let check = |d: &Dcell, r: &RefGraph, u: u64, v: u64| -> Outcome {
        let p = dcell_hp(d, u, v).map_err(|e| format!("({u}, {v}): {e}"))?;
        ensure(verify_path(d, &p, u, v, true).is_valid() && r.is_hp(&p, u, v, &[], &[]), || format!("({u}, {v})"))
    };
    for (n, k) in [(2, 2), (3, 1), (4, 1)] {
        let d = Dcell::from_nk(n, k).unwrap();
        let r = RefGraph::dcell(n as u64, k);
        for u in 0..r.order() {
            for v in 0..r.order() {
                if u != v {
                    check(&d, &r, u, v)?;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (n, k) in [(3, 2), (2, 3)] {
        let d = Dcell::from_nk(n, k).unwrap();
        let r = RefGraph::dcell(n as u64, k);
        let mut done = 0;
        while done < 200 {
            let (u, v) = (rng.gen_range(0..r.order()), rng.gen_range(0..r.order()));
            if u != v {
                check(&d, &r, u, v)?;
                done += 1;
            }
        }
    }
    Ok(())
}

fn call_growth() -> Outcome {
    for n in [2, 3] {
        let ratio = |k: usize| -> Result<f64, String> {
            let d = Dcell::from_nk(n, k).map_err(|e| e.to_string())?;
            let (_, calls) = counted_dcell_hp(&d, 0, 1).map_err(|e| e.to_string())?;
            Ok(calls as f64 / d.vertex_count() as f64)
        };
        let ks: &[usize] = if n == 2 { &[2, 3, 4] } else { &[1, 2, 3] };
        for w in ks.windows(2) {
            let (a, b) = (ratio(w[0])?, ratio(w[1])?);
            ensure((b - a).abs() / a < 0.1, || format!("n={n}: {a:.4} at k={} vs {b:.4} at k={}", w[0], w[1]))?;
        }
    }
    Ok(())
}

fn elements(r: &RefGraph) -> Vec<Element> {
    let mut v: Vec<_> = (0..r.order()).map(|x| (Some(x), None)).collect();
    v.extend(r.edges().into_iter().map(|e| (None, Some(e))));
    v
}

fn check_faulty_cycle(d: &Dcell, r: &RefGraph, set: &[Element]) -> Outcome {
    let vs: Vec<u64> = set.iter().filter_map(|e| e.0).collect();
    let es: Vec<(u64, u64)> = set.iter().filter_map(|e| e.1).collect();
    let f = FaultSet::from_parts(d, vs.clone(), es.clone()).map_err(|e| e.to_string())?;
    let c = ft_hc(d, &f).map_err(|e| format!("{set:?}: {e}"))?;
    ensure(r.is_hc(&c, &vs, &es), || format!("{set:?}"))
}

fn small_fault_bounds() -> Outcome {
    for (n, k) in [(2, 2), (3, 1)] {
        let d = Dcell::from_nk(n, k).unwrap();
        let r = RefGraph::dcell(n as u64, k);
        for e in elements(&r) {
            check_faulty_cycle(&d, &r, &[e])?;
        }
    }
    let d = Dcell::from_nk(4, 1).unwrap();
    let r = RefGraph::dcell(4, 1);
    let els = elements(&r);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pairs = Vec::new();
    while pairs.len() < 100 {
        let (u, v) = (rng.gen_range(0..20), rng.gen_range(0..20));
        if u != v {
            pairs.push((u, v));
        }
    }
    for &e in &els {
        let vs: Vec<u64> = e.0.into_iter().collect();
        let es: Vec<(u64, u64)> = e.1.into_iter().collect();
        let f = FaultSet::from_parts(&d, vs.clone(), es.clone()).map_err(|e| e.to_string())?;
        for &(u, v) in &pairs {
            if vs.contains(&u) || vs.contains(&v) {
                continue;
            }
            let p = ft_hp(&d, &f, u, v).map_err(|x| format!("{e:?} ({u}, {v}): {x}"))?;
            ensure(r.is_hp(&p, u, v, &vs, &es), || format!("{e:?} ({u}, {v})"))?;
        }
    }
    let mut sets = 0;
    for i in 0..els.len() {
        check_faulty_cycle(&d, &r, &[els[i]])?;
        sets += 1;
        for j in i + 1..els.len() {
            check_faulty_cycle(&d, &r, &[els[i], els[j]])?;
            sets += 1;
        }
    }
    ensure(sets == 60 + 1770, || format!("{sets} fault sets"))
}

fn listing_order() -> Outcome {
    let shape = ShapeA::new(vec![3, 3, 2]).unwrap();
    let mut l = Listing::new(shape.clone());
    let mut got = Vec::new();
    for _ in 0..18 {
        got.push(l.next().map_err(|e| e.to_string())?.iter().map(|d| d.to_string()).collect::<String>());
    }
    let want = "000,100,010,001,011,020,021,110,101,111,120,121,200,210,201,211,220,221";
    ensure(got.join(",") == want, || got.join(","))?;

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..1000 {
        let bounds = random_bounds(&mut rng);
        let shape = ShapeA::new(bounds.clone()).unwrap();
        let d = rng.gen_range(0..=shape.size());
        let l = Listing::with_calls(shape, d).map_err(|e| e.to_string())?;
        let listed: BTreeSet<Vec<u64>> = l.listed().iter().cloned().collect();
        let tuples = all_tuples(&bounds);
        let mut prefixes: BTreeSet<Vec<u64>> = BTreeSet::from([vec![]]);
        for t in &tuples {
            for len in 1..=t.len() {
                prefixes.insert(t[..len].to_vec());
            }
        }
        for p in prefixes {
            let under: Vec<&Vec<u64>> = tuples.iter().filter(|t| t.starts_with(&p)).collect();
            let empty = !under.iter().any(|t| listed.contains(*t));
            let full = under.iter().all(|t| listed.contains(*t));
            let q = Prefix::new(p.clone());
            let ok = l.is_empty_prefix(&q).map_err(|e| e.to_string())? == empty
                && l.is_full_prefix(&q).map_err(|e| e.to_string())? == full;
            ensure(ok, || format!("{bounds:?} d={d} prefix {p:?}"))?;
        }
    }
    Ok(())
}

fn random_bounds(rng: &mut ChaCha8Rng) -> Vec<u64> {
    let digits = rng.gen_range(1..4);
    let last = rng.gen_range(1..6u64);
    let mut b: Vec<u64> = (0..digits - 1).map(|_| rng.gen_range(last..7)).collect();
    b.push(last);
    b
}

fn kc_repair() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..400 {
        let bounds = random_bounds(&mut rng);
        let shape = ShapeA::new(bounds.clone()).unwrap();
        let d = rng.gen_range(0..=shape.size());
        for c in 2..=shape.last_bound() {
            let mut l = Listing::with_calls(shape.clone(), d).map_err(|e| e.to_string())?;
            let calls = l.make_kc_connected(c).map_err(|e| e.to_string())?;
            ensure(calls <= c - 2, || format!("{bounds:?} d={d} c={c}: {calls} calls"))?;
        }
    }
    Ok(())
}

fn partial_paths() -> Outcome {
    let (n, k, c) = (4, 2, 5);
    let shape = ShapeA::dcell(n, k).unwrap();
    let full = RefGraph::dcell(n as u64, k);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut sizes = 0;
    for d in 1..=shape.size() {
        let l = Listing::with_calls(shape.clone(), d).map_err(|e| e.to_string())?;
        if !l.is_kc_connected(c).map_err(|e| e.to_string())?.connected {
            continue;
        }
        sizes += 1;
        let p = materialize_partial(&l, n, k, 100_000).map_err(|e| e.to_string())?;
        let vs: Vec<u64> = p.vertices().collect();
        let absent: Vec<u64> = (0..full.order()).filter(|x| !p.has_vertex(*x)).collect();
        let mut pairs = 0;
        while pairs < 50 {
            let (u, v) = (vs[rng.gen_range(0..vs.len())], vs[rng.gen_range(0..vs.len())]);
            if u == v {
                continue;
            }
            pairs += 1;
            let h = partial_hp(&p, c, u, v).map_err(|e| format!("d={d} ({u}, {v}): {e}"))?;
            let ok = verify_path(&p, &h.sequence, u, v, true).is_valid() && full.is_hp(&h.sequence, u, v, &absent, &[]);
            ensure(ok, || format!("d={d} ({u}, {v})"))?;
            if d == shape.size() {
                let dc = Dcell::from_nk(n, k).unwrap();
                ensure(verify_path(&dc, &h.sequence, u, v, true).is_valid(), || format!("full ({u}, {v})"))?;
            }
        }
    }
    ensure(sizes >= 10, || format!("only {sizes} listing sizes"))
}

fn broadcast_accounting() -> Outcome {
    let first = |n, k, s| -> Result<(u64, Option<u64>), String> {
        let r = simulate(&SimConfig::new(n, k, s)).map_err(|e| e.to_string())?;
        Ok((r.first().messages, r.first().rounds))
    };
    for (n, k) in [(2, 2), (3, 1)] {
        let r = RefGraph::dcell(n as u64, k);
        let tk = r.order();
        let e = r.edges().len() as u64;
        ensure(first(n, k, Scheme::Ham)?.0 == tk - 1, || format!("({n},{k}) ham messages"))?;
        ensure(first(n, k, Scheme::Flood)?.0 == 2 * e - (tk - 1), || format!("({n},{k}) flood messages"))?;
    }
    let hier = first(2, 2, Scheme::Hier)?.1.ok_or("hier incomplete")?;
    let ham = first(2, 2, Scheme::Ham)?.1.ok_or("ham incomplete")?;
    ensure(hier < ham, || format!("hier {hier} rounds, ham {ham}"))?;
    let mut cfg = SimConfig::new(2, 1, Scheme::Ham);
    cfg.p = 0.1;
    cfg.trials = 10_000;
    cfg.seed = 2024;
    let rate = fixed_cycle_experiment(&cfg).map_err(|e| e.to_string())?.success_rate;
    let e = 0.9f64.powi(6);
    let sigma = (e * (1.0 - e) / 10_000.0).sqrt();
    ensure((rate - e).abs() <= 3.0 * sigma, || format!("rate {rate:.4} vs {e:.4}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check, u64); 10] = [
        ("topology fidelity", topology_fidelity, 5),
        ("six-cycle is Hamiltonian, not Hamiltonian-connected", six_cycle, 1),
        ("base cases Hamiltonian-connected", base_certification, 600),
        ("fault-free Hamiltonian paths", fault_free_paths, 120),
        ("recursive call growth", call_growth, 60),
        ("small fault bounds", small_fault_bounds, 600),
        ("listing order and prefix queries", listing_order, 10),
        ("K_c repair call bound", kc_repair, 30),
        ("partial DCell Hamiltonian paths", partial_paths, 300),
        ("broadcast accounting", broadcast_accounting, 60),
    ];
    let mut failed = Vec::new();
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let took = start.elapsed();
        if outcome.is_ok() && took > Duration::from_secs(*budget) {
            outcome = Err(format!("took {took:.1?}, budget {budget}s"));
        }
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({took:.2?})", i + 1),
            Err(e) => {
                println!("FAIL {:>2} {name}: {e}", i + 1);
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
