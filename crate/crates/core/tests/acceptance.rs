//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the report is always printed; exits nonzero if any check fails.

use std::collections::{BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robustflow::cli::run;
use robustflow::eval::{arc_flow_value, destroyed_value, nominal_value, robust_value, Scenario};
use robustflow::format::{write_graph, write_instance, write_path_flow, PlainGraph};
use robustflow::gadgets::{
    adp_witness_flow, build_adp_gadget, build_clique_gadget, canonical_gadget_flow, disjoint_paths_oracle,
    structured_lambda, structured_scenario, CliqueGadget, FlowVariant, SimpleGraph, Terminals,
};
use robustflow::graph::{max_flow, ArcId, Instance};
use robustflow::kroute::robust_baseline;
use robustflow::lp::{solve_full_lp, solve_full_lp_fixed_nominal, solve_row_generation};
use robustflow::random::{random_instance, RandomSpec};
use robustflow::rational::{binomial, int, Capacity, Rational};
use robustflow::special::{brute_force_integral, greedy_cut_interdiction, solve_integral_cap2, solve_unit_capacity};
use robustflow::transform::{map_flow_back, split_capacities};

const PATHS: usize = 100_000;
const BUDGET: u128 = 1_000_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn spec(nodes: usize, arcs: usize, k_max: usize, caps: &[i64]) -> RandomSpec {
    RandomSpec { nodes, arcs, k_max, capacities: caps.to_vec() }
}

/// 50 instances with 5 to 8 nodes, 8 to 14 arcs, k in {1, 2}, capacities in {1, 2, 3}.
fn lp_corpus() -> Vec<Instance> {
    (0..50u64)
        .map(|seed| random_instance(seed, &spec(5 + (seed % 4) as usize, 8 + (seed % 7) as usize, 2, &[1, 2, 3])))
        .collect()
}

/// Size of a smallest arc set whose removal disconnects the sink, by
/// enumerating arc subsets in order of size.
fn min_cardinality_oracle(inst: &Instance) -> usize {
    let reachable = |removed: &[ArcId]| {
        let mut seen = vec![false; inst.node_count];
        seen[inst.source] = true;
        let mut queue = VecDeque::from([inst.source]);
        while let Some(v) = queue.pop_front() {
            for (id, a) in inst.arcs.iter().enumerate() {
                if a.tail == v && !seen[a.head] && !removed.contains(&id) {
                    seen[a.head] = true;
                    queue.push_back(a.head);
                }
            }
        }
        seen[inst.sink]
    };
    (0..=inst.arc_count())
        .find(|&size| (0..inst.arc_count()).combinations(size).any(|s| !reachable(&s)))
        .unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut sink = Vec::new();
    let code = run(std::iter::once("rflow").chain(args.iter().copied()), &mut out, &mut sink);
    (code, String::from_utf8(out).unwrap())
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rflow-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn lp_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rounds = 0;
    for (i, inst) in lp_corpus().iter().enumerate() {
        let full = solve_full_lp(inst, PATHS, BUDGET).map_err(err)?;
        let lazy = solve_row_generation(inst, PATHS, BUDGET).map_err(err)?;
        ensure!(
            full.primal.objective == lazy.primal.objective,
            "instance {i}: full {} vs row generation {}",
            full.primal.objective,
            lazy.primal.objective
        );
        rounds += lazy.iterations;
    }
    ensure!(start.elapsed() < Duration::from_secs(120), "took {:?}", start.elapsed());
    Ok(format!("50 instances equal, {rounds} master solves"))
}

fn zero_value_observation() -> Outcome {
    let dir = scratch_dir();
    let mut corpus = lp_corpus();
    corpus.extend((0..50u64).map(|seed| random_instance(500 + seed, &spec(6, 9, 4, &[1, 2, 3]))));
    let mut checked = 0;
    for (i, inst) in corpus.iter().enumerate() {
        if min_cardinality_oracle(inst) > inst.k {
            continue;
        }
        let lib = solve_row_generation(inst, PATHS, BUDGET).map_err(err)?;
        ensure!(lib.primal.objective == int(0), "instance {i}: objective {}", lib.primal.objective);
        let file = dir.join(format!("cut{i}.rflow"));
        std::fs::write(&file, write_instance(inst)).map_err(err)?;
        let (code, out) = cli(&["--json", "solve-lp", file.to_str().unwrap()]);
        let v: serde_json::Value = serde_json::from_str(&out).map_err(err)?;
        ensure!(code == 0 && v["objective"] == "0/1", "instance {i}: cli printed {out}");
        checked += 1;
    }
    ensure!(checked >= 10, "only {checked} instances had a cut of at most k arcs");
    Ok(format!("{checked} instances with a cut of at most k arcs, all 0"))
}

fn unit_capacity_optimality() -> Outcome {
    let mut positive = 0;
    for seed in 0..50u64 {
        let inst = random_instance(2000 + seed, &spec(5 + (seed % 4) as usize, 8 + (seed % 7) as usize, 3, &[1]));
        let cut = min_cardinality_oracle(&inst);
        let expected = int(cut.saturating_sub(inst.k) as i64);
        let (_, special) = solve_unit_capacity(&inst).map_err(err)?;
        let lp = solve_full_lp(&inst, PATHS, BUDGET).map_err(err)?.primal.objective;
        ensure!(
            special == expected && lp == expected,
            "seed {seed}: unit {special}, lp {lp}, |C| - k = {expected}"
        );
        positive += usize::from(expected > int(0));
    }
    Ok(format!("50 instances, {positive} with positive value"))
}

fn capacity_two_formula() -> Outcome {
    let mut deltas = 0;
    let mut choices = BTreeSet::new();
    for seed in 0..50u64 {
        let inst = random_instance(3000 + seed, &spec(4 + (seed % 3) as usize, 6 + (seed % 5) as usize, 3, &[1, 2]));
        let sol = solve_integral_cap2(&inst).map_err(err)?;
        let (brute_flow, brute) = brute_force_integral(&inst, 50_000_000).map_err(err)?;
        ensure!(sol.value == brute, "seed {seed}: cap2 {} vs brute force {brute}", sol.value);
        ensure!(
            robust_value(&inst, &sol.flow, BUDGET).map_err(err)? == sol.value,
            "seed {seed}: reported flow does not attain its value"
        );
        choices.insert(format!("{:?}", sol.choice));
        for x in [&sol.flow, &brute_flow] {
            let trace = greedy_cut_interdiction(&inst, x).trace;
            let values: Vec<&Rational> = trace.iter().map(|(_, d)| d).collect();
            ensure!(
                values.iter().all(|d| [int(0), int(1), int(2)].contains(d)),
                "seed {seed}: delta outside {{0, 1, 2}}: {values:?}"
            );
            ensure!(values.windows(2).all(|w| w[0] >= w[1]), "seed {seed}: deltas increase: {values:?}");
            deltas += values.len();
        }
    }
    Ok(format!("50 instances equal, choices {choices:?}, {deltas} greedy steps"))
}

fn split_preserves_values() -> Outcome {
    for seed in 0..30u64 {
        let inst = random_instance(4000 + seed, &spec(4 + (seed % 2) as usize, 5 + (seed % 3) as usize, 2, &[1, 2, 3]));
        let (split, map) = split_capacities(&inst).map_err(err)?;
        ensure!(
            split.arcs.iter().all(|a| {
                a.capacity == Capacity::from_int(1) || a.capacity == Capacity::from_int(max_cap(&inst))
            }),
            "seed {seed}: split capacity outside {{1, u_max}}"
        );
        let before = solve_full_lp(&inst, PATHS, BUDGET).map_err(err)?;
        let after = solve_row_generation(&split, PATHS, BUDGET).map_err(err)?;
        ensure!(
            before.primal.objective == after.primal.objective,
            "seed {seed}: objective {} became {}",
            before.primal.objective,
            after.primal.objective
        );
        let x_split = &after.primal.x;
        let x = map_flow_back(&inst, &split, &map, x_split).map_err(err)?;
        let r_split = robust_value(&split, x_split, BUDGET).map_err(err)?;
        let r = robust_value(&inst, &x, BUDGET).map_err(err)?;
        ensure!(r == r_split, "seed {seed}: robust value {r_split} mapped to {r}");
    }
    Ok("30 instances, objective and mapped robust value preserved".into())
}

fn max_cap(inst: &Instance) -> i64 {
    inst.arcs
        .iter()
        .map(|a| i64::try_from(a.capacity.as_integer().unwrap()).unwrap())
        .max()
        .unwrap()
}

/// Crafted inputs first, then seeded random graphs on 4 to 6 nodes.
fn adp_inputs() -> Vec<(String, PlainGraph, Terminals)> {
    let t = Terminals::new(0, 1, 2, 3);
    let g = |n: usize, edges: &[(usize, usize)]| PlainGraph { node_count: n, edges: edges.to_vec() };
    let mut cases = vec![
        ("disjoint arcs".to_string(), g(4, &[(0, 1), (2, 3)]), t),
        ("no arcs".to_string(), g(4, &[]), t),
        ("shared bottleneck".to_string(), g(6, &[(0, 4), (2, 4), (4, 5), (5, 1), (5, 3)]), t),
        ("bypass around bottleneck".to_string(), g(6, &[(0, 4), (2, 4), (4, 5), (5, 1), (5, 3), (0, 1)]), t),
        ("crossing grid".to_string(), g(6, &[(0, 4), (4, 1), (2, 4), (4, 3), (0, 5), (5, 3)]), t),
        ("one demand unroutable".to_string(), g(4, &[(0, 1), (3, 2)]), t),
        ("through each other's terminals".to_string(), g(5, &[(0, 2), (2, 3), (3, 1), (2, 4), (4, 3)]), t),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    while cases.len() < 26 {
        let n = rng.gen_range(4..=6);
        let m = rng.gen_range(2..=8);
        let edges: Vec<(usize, usize)> = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                (u, v)
            })
            .collect();
        let name = format!("random {}", cases.len());
        cases.push((name, g(n, &edges), t));
    }
    cases
}

fn adp_reduction() -> Outcome {
    let mut positive = 0;
    let mut slowest = Duration::ZERO;
    let cases = adp_inputs();
    for (name, graph, terminals) in &cases {
        let start = Instant::now();
        let gadget = build_adp_gadget(graph, *terminals).map_err(err)?;
        let pair = disjoint_paths_oracle(graph, *terminals, PATHS, BUDGET).map_err(err)?;
        let (_, best) = brute_force_integral(&gadget.instance, 200_000_000).map_err(err)?;
        ensure!(
            (best >= int(3)) == pair.is_some(),
            "{name}: integral optimum {best}, disjoint pair {pair:?}"
        );
        ensure!(best <= int(3), "{name}: integral optimum {best} above 3");
        if let Some((p1, p2)) = pair {
            positive += 1;
            let x = adp_witness_flow(&gadget, &p1, &p2).map_err(err)?;
            ensure!(nominal_value(&x) == int(7), "{name}: witness nominal {}", nominal_value(&x));
            let r = robust_value(&gadget.instance, &x, BUDGET).map_err(err)?;
            ensure!(r == int(3), "{name}: witness robust value {r}");
        }
        slowest = slowest.max(start.elapsed());
        ensure!(slowest < Duration::from_secs(60), "{name}: took {slowest:?}");
    }
    Ok(format!(
        "{} inputs ({positive} routable, {} not), slowest {:.2}s",
        cases.len(),
        cases.len() - positive,
        slowest.as_secs_f64()
    ))
}

fn clique_inputs() -> Vec<(&'static str, SimpleGraph, usize)> {
    vec![
        ("K3", SimpleGraph::complete(3), 3),
        ("K4", SimpleGraph::complete(4), 3),
        ("C5", SimpleGraph::cycle(5), 3),
        ("single edge", SimpleGraph::new(2, [(0, 1)]).unwrap(), 2),
    ]
}

fn audit(g: &CliqueGadget) -> Outcome {
    let (n, edges, kp) = (g.graph.vertex_count, g.graph.edges.len(), g.params.kprime);
    let ell = n + 2 * edges;
    let k = kp * ell + (n - kp) + 2 * edges;
    let eps = Rational::new(1.into(), (ell as i64).into());
    let one_eps = int(1) + &eps;
    let big_m = &one_eps * int(k as i64);
    let h = (kp * (kp - 1)) - 2;
    ensure!(
        (g.params.ell, g.params.k, g.params.h) == (ell, k, h) && g.params.eps == eps && g.params.big_m == big_m,
        "parameters {:?}",
        g.params
    );
    let inst = &g.instance;
    let r = &g.roles;
    ensure!(inst.k == k, "instance k {}", inst.k);
    ensure!(inst.node_count == 2 + n * (1 + 2 * ell) + 2 * edges + 2, "node count {}", inst.node_count);
    let expected_arcs = (n + n * ell + 2 * edges) + (2 * n * ell + 4 * edges * ell) + n * ell + k + 7;
    ensure!(inst.arc_count() == expected_arcs, "arc count {} vs {expected_arcs}", inst.arc_count());

    let a_nodes: BTreeSet<usize> = r.a_group.iter().flatten().copied().collect();
    let b_nodes: BTreeSet<usize> = r.b_group.iter().flatten().copied().collect();
    let hubs: BTreeSet<usize> = r.vertex_hub.iter().copied().collect();
    let edge_hubs: BTreeSet<usize> = r.edge_hubs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let fin = |c: &Rational| Capacity::Finite(c.clone());
    let mut parallel_seen = 0;
    for (id, arc) in inst.arcs.iter().enumerate() {
        let (u, v) = (arc.tail, arc.head);
        let expected = if u == r.source && (hubs.contains(&v) || a_nodes.contains(&v) || edge_hubs.contains(&v)) {
            Capacity::Infinite
        } else if b_nodes.contains(&u) && v == r.sink {
            Capacity::Infinite
        } else if hubs.contains(&u) {
            let vtx = r.vertex_hub.iter().position(|&x| x == u).unwrap();
            ensure!(r.b_group[vtx].contains(&v), "arc {id}: a_v must point into B_v");
            fin(&big_m)
        } else if a_nodes.contains(&u) {
            let vtx = r.a_group.iter().position(|grp| grp.contains(&u)).unwrap();
            let i = r.a_group[vtx].iter().position(|&x| x == u).unwrap();
            ensure!(r.b_group[vtx][i] == v, "arc {id}: a_(v,i) must point to b_(v,i)");
            Capacity::from_int(1)
        } else if edge_hubs.contains(&u) {
            let e = r.edge_hubs.iter().position(|&(a, b)| a == u || b == u).unwrap();
            let (x, y) = g.graph.edges[e];
            ensure!(r.b_group[x].contains(&v) || r.b_group[y].contains(&v), "arc {id}: edge node to wrong B");
            fin(&big_m)
        } else if u == r.source && v == r.sink {
            parallel_seen += 1;
            if parallel_seen <= h {
                fin(&one_eps)
            } else {
                Capacity::from_int(1)
            }
        } else if id == r.e_prime[0] || id == r.e_double[0] {
            Capacity::from_int(1)
        } else if id == r.e_prime[1] || id == r.e_double[1] || id == r.v_prime_to_v_double {
            fin(&eps)
        } else if id == r.s_to_v_double || id == r.v_prime_to_t {
            fin(&one_eps)
        } else {
            return Err(format!("arc {id} ({u}, {v}) has no role"));
        };
        ensure!(arc.capacity == expected, "arc {id} ({u}, {v}): capacity {} expected {expected}", arc.capacity);
    }
    ensure!(parallel_seen == k, "{parallel_seen} parallel source-sink arcs");
    let ends = |a: ArcId| (inst.arcs[a].tail, inst.arcs[a].head);
    ensure!(
        r.e_prime.iter().all(|&a| ends(a) == (r.source, r.v_prime))
            && r.e_double.iter().all(|&a| ends(a) == (r.v_double, r.sink))
            && ends(r.s_to_v_double) == (r.source, r.v_double)
            && ends(r.v_prime_to_t) == (r.v_prime, r.sink)
            && ends(r.v_prime_to_v_double) == (r.v_prime, r.v_double),
        "H arcs have wrong endpoints"
    );
    let f: BTreeSet<ArcId> = r.parallel.iter().chain(&r.h_arcs).copied().collect();
    ensure!(
        f.len() == k + 7 && f == r.f_arcs.iter().copied().collect::<BTreeSet<_>>(),
        "F has {} arcs",
        r.f_arcs.len()
    );
    for size in 0..=kp {
        for u in (0..n).combinations(size) {
            let u: BTreeSet<usize> = u.into_iter().collect();
            let induced = g.graph.induced_edges(&u);
            let k_u = ell * u.len() + n - u.len() + 2 * (edges - induced);
            ensure!(g.forced_count(&u) == k_u, "k_U for {u:?}");
            let forced: BTreeSet<ArcId> = g.forced_arcs(&u).into_iter().collect();
            ensure!(forced.len() == k_u && k_u <= k, "forced arcs for {u:?}: {}", forced.len());
        }
    }
    Ok(format!("{} arcs", inst.arc_count()))
}

fn gadget_audit() -> Outcome {
    let mut sizes = Vec::new();
    for (name, graph, kp) in clique_inputs() {
        let g = build_clique_gadget(&graph, kp).map_err(err)?;
        sizes.push(format!("{name}: {}", audit(&g).map_err(|e| format!("{name}: {e}"))?));
    }
    Ok(sizes.join(", "))
}

/// `max |E'[U]|` over `|U| <= k'`, and the first maximizing `U`.
fn densest(graph: &SimpleGraph, kp: usize) -> (usize, BTreeSet<usize>) {
    let mut best: Option<(usize, BTreeSet<usize>)> = None;
    for u in (0..graph.vertex_count).combinations(kp) {
        let u: BTreeSet<usize> = u.into_iter().collect();
        let count = graph.induced_edges(&u);
        if best.as_ref().is_none_or(|(b, _)| count > *b) {
            best = Some((count, u));
        }
    }
    best.unwrap()
}

fn witness_accounting() -> Outcome {
    let mut lines = Vec::new();
    for (name, graph, kp) in clique_inputs().into_iter().filter(|(n, ..)| *n == "K3" || *n == "C5") {
        let g = build_clique_gadget(&graph, kp).map_err(err)?;
        let (hstar, u_star) = densest(&graph, kp);
        let p = &g.params;
        for variant in [FlowVariant::ZeroRoute, FlowVariant::EpsRoute] {
            let x = canonical_gadget_flow(&g, variant);
            let mut ranked: Vec<(Rational, ArcId)> =
                g.roles.f_arcs.iter().map(|&a| (arc_flow_value(&x, a), a)).collect();
            ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let f_star: Vec<ArcId> = ranked.iter().take(2 * hstar).map(|(_, a)| *a).collect();
            let f_value = ranked.iter().take(2 * hstar).fold(int(0), |acc, (v, _)| acc + v);
            let heavy = (graph.vertex_count + 4 * graph.edges.len()) * p.ell;
            let closed = int(heavy as i64) * &p.big_m + int((kp * p.ell) as i64) + &f_value;

            let mut s_star: BTreeSet<ArcId> = f_star.iter().copied().collect();
            for v in 0..graph.vertex_count {
                if u_star.contains(&v) {
                    s_star.extend(g.roles.b_group[v].iter().map(|b| g.roles.sink_arc[b]));
                } else {
                    s_star.insert(g.roles.source_arc[&g.roles.vertex_hub[v]]);
                }
            }
            for (e, (a, b)) in graph.edges.iter().enumerate() {
                if !(u_star.contains(a) && u_star.contains(b)) {
                    let (h1, h2) = g.roles.edge_hubs[e];
                    s_star.insert(g.roles.source_arc[&h1]);
                    s_star.insert(g.roles.source_arc[&h2]);
                }
            }
            ensure!(s_star.len() == p.k, "{name}: |S*| = {}", s_star.len());
            let s_star = Scenario::new(s_star);
            ensure!(
                structured_scenario(&g, &u_star, &f_star).map_err(err)? == s_star,
                "{name}: structured scenario differs from S*"
            );
            let direct = destroyed_value(&x, &s_star);
            ensure!(direct == closed, "{name} {variant:?}: destroyed {direct} vs closed form {closed}");
            let best = structured_lambda(&g, &x, BUDGET).map_err(err)?;
            ensure!(best.lambda == closed, "{name} {variant:?}: structured lambda {} vs {closed}", best.lambda);
            ensure!(
                destroyed_value(&x, &best.scenario) == best.lambda,
                "{name} {variant:?}: witness does not attain lambda"
            );
            // every r', r'': f(r' + r'') <= f(r') + (1 + eps) r''
            let prefix: Vec<Rational> = std::iter::once(int(0))
                .chain(ranked.iter().scan(int(0), |acc, (v, _)| {
                    *acc += v;
                    Some(acc.clone())
                }))
                .collect();
            let one_eps = int(1) + &p.eps;
            for a in 0..prefix.len() {
                for b in 0..prefix.len() - a {
                    ensure!(
                        prefix[a + b] <= &prefix[a] + &one_eps * int(b as i64),
                        "{name}: f subadditivity fails at ({a}, {b})"
                    );
                }
            }
        }
        lines.push(format!("{name} h*={hstar}"));
    }
    Ok(format!("closed form attained on {}, both flows", lines.join(", ")))
}

fn decision_property() -> Outcome {
    let mut lines = Vec::new();
    for (name, graph, kp) in clique_inputs().into_iter().filter(|(n, ..)| *n != "single edge") {
        let g = build_clique_gadget(&graph, kp).map_err(err)?;
        let objective = |variant| -> Result<Rational, String> {
            let x = canonical_gadget_flow(&g, variant);
            Ok(nominal_value(&x) - structured_lambda(&g, &x, BUDGET).map_err(err)?.lambda)
        };
        let gap = objective(FlowVariant::EpsRoute)? - objective(FlowVariant::ZeroRoute)?;
        let (hstar, _) = densest(&graph, kp);
        let clique = hstar as u128 == binomial(kp, 2);
        if clique {
            ensure!(gap == g.params.eps, "{name}: gap {gap}, expected eps = {}", g.params.eps);
        } else {
            ensure!(gap <= int(0), "{name}: eps-route ahead by {gap} without a clique");
        }
        lines.push(format!("{name} gap {gap}"));
    }
    Ok(lines.join(", "))
}

fn kroute_baseline() -> Outcome {
    let mut tight = 0;
    for (i, inst) in lp_corpus().iter().enumerate() {
        let base = robust_baseline(inst, inst.k).map_err(err)?;
        let k1 = int(inst.k as i64 + 1);
        ensure!(base.guarantee == &base.value / &k1, "instance {i}: guarantee");
        let r = robust_value(inst, &base.flow, BUDGET).map_err(err)?;
        ensure!(r >= base.guarantee, "instance {i}: robust value {r} below guarantee {}", base.guarantee);
        let opt = solve_full_lp(inst, PATHS, BUDGET).map_err(err)?.primal.objective;
        ensure!(opt <= &k1 * &r, "instance {i}: optimum {opt} above (k+1) x {r}");
        tight += usize::from(opt == r);
    }
    Ok(format!("50 instances, baseline optimal on {tight}"))
}

fn k1_simultaneity() -> Outcome {
    for seed in 0..30u64 {
        let inst = random_instance(6000 + seed, &spec(5 + (seed % 4) as usize, 8 + (seed % 6) as usize, 1, &[1, 2, 3]));
        let free = solve_full_lp(&inst, PATHS, BUDGET).map_err(err)?;
        let mf = max_flow(&inst, None).map_err(err)?.value;
        let fixed = solve_full_lp_fixed_nominal(&inst, PATHS, BUDGET, &mf).map_err(err)?;
        ensure!(
            fixed.primal.objective == free.primal.objective,
            "seed {seed}: objective {} with nominal {mf}, {} free",
            fixed.primal.objective,
            free.primal.objective
        );
        ensure!(nominal_value(&fixed.primal.x) == mf, "seed {seed}: nominal not at max flow");
    }
    Ok("30 instances, optimum unchanged at maximum nominal value".into())
}

fn determinism() -> Outcome {
    let dir = scratch_dir();
    let inst = random_instance(12, &spec(7, 12, 2, &[1, 2, 3]));
    let inst_file = dir.join("det.rflow");
    std::fs::write(&inst_file, write_instance(&inst)).map_err(err)?;
    let flow = robustflow::graph::path_decompose(&inst, &max_flow(&inst, None).map_err(err)?.arc_flow).map_err(err)?;
    let flow_file = dir.join("det.pathflow");
    std::fs::write(&flow_file, write_path_flow(&flow)).map_err(err)?;
    let tri = dir.join("k3.graph");
    std::fs::write(&tri, write_graph(&PlainGraph { node_count: 3, edges: vec![(0, 1), (1, 2), (0, 2)] })).map_err(err)?;
    let adp = dir.join("adp.graph");
    std::fs::write(&adp, write_graph(&PlainGraph { node_count: 4, edges: vec![(0, 1), (2, 3)] })).map_err(err)?;
    let (i, f, t, a) = (
        inst_file.to_str().unwrap(),
        flow_file.to_str().unwrap(),
        tri.to_str().unwrap(),
        adp.to_str().unwrap(),
    );
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", i],
        vec!["--seed", "5", "validate"],
        vec!["solve-lp", i],
        vec!["solve-lp", i, "--method", "full"],
        vec!["solve-int", i, "--method", "brute"],
        vec!["eval", i, "--flow", f],
        vec!["worst-case", i, "--flow", f],
        vec!["transform", "split", i],
        vec!["transform", "finitize", i],
        vec!["transform", "scale", i],
        vec!["gadget", "clique", "--graph", t, "--kprime", "3"],
        vec!["gadget", "adp", "--graph", a, "--terminals", "0", "1", "2", "3"],
        vec!["approx", "kroute", i],
    ];
    for cmd in &commands {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "1", "4"] {
            let mut argv = vec!["--json", "--threads", threads];
            argv.extend(cmd.iter().copied());
            let (code, out) = cli(&argv);
            ensure!(code == 0, "{cmd:?} exited {code}: {out}");
            outputs.push(out);
        }
        ensure!(outputs.windows(2).all(|w| w[0] == w[1]), "{cmd:?}: output differs between runs");
    }
    Ok(format!("{} commands byte-identical across 1 and 4 threads", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("LP row generation equals full LP", lp_oracle_equivalence),
        ("cut of at most k arcs gives value 0", zero_value_observation),
        ("unit capacities: max flow is robust-optimal", unit_capacity_optimality),
        ("capacities in {1,2}: integral formula and greedy deltas", capacity_two_formula),
        ("capacity splitting preserves values", split_preserves_values),
        ("arc-disjoint paths reduction, both directions", adp_reduction),
        ("clique gadget structural audit", gadget_audit),
        ("clique gadget worst-case accounting", witness_accounting),
        ("clique gadget decision gap", decision_property),
        ("(k+1)-uniform flow baseline", kroute_baseline),
        ("k = 1: optimum at maximum nominal value", k1_simultaneity),
        ("JSON output independent of thread count", determinism),
    ];
    let mut failures = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", n + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {reason} ({secs:.2}s)", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
