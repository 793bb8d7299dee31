use qdd::circuit::generators::*;
use qdd::sim::{simulate, SimConfig};
use qdd::Strategy;

fn run(c: &qdd::Circuit, s: Strategy) -> qdd::SimResult {
    let cfg = SimConfig {
        strategy: s,
        ..SimConfig::default()
    };
    simulate(c, &cfg).unwrap().result
}

fn main() {
    let w = gen_wstate(130).unwrap();
    let r = run(&w, Strategy::Original);
    println!("wstate130: gates={} final={} max={}", w.num_gates(), r.final_nodes, r.max_nodes);

    let q = gen_qft(84, false).unwrap();
    let r = run(&q, Strategy::Original);
    println!("qft84: gates={} final={} max={}", q.num_gates(), r.final_nodes, r.max_nodes);

    let qe = gen_qft(18, true).unwrap();
    let r = run(&qe, Strategy::Original);
    println!("qftent18: gates={} final={} max={}", qe.num_gates(), r.final_nodes, r.max_nodes);

    for n in [10usize, 12, 14] {
        let c = gen_qpe(n, false).unwrap();
        let o = run(&c, Strategy::Original);
        let p = run(&c, Strategy::Proposed);
        let rv = run(&c, Strategy::Reversed);
        println!(
            "qpe_inexact {n}: gates={} orig(ops={} wall={:?} max={}) prop(ops={} wall={:?} max={}) rev(ops={} wall={:?})",
            c.num_gates(), o.apply_ops, o.wall, o.max_nodes, p.apply_ops, p.wall, p.max_nodes, rv.apply_ops, rv.wall
        );
    }

    for n in [10usize, 12, 14] {
        let c = gen_qpe(n, true).unwrap();
        let o = run(&c, Strategy::Original);
        let p = run(&c, Strategy::Proposed);
        println!(
            "qpe_exact {n}: gates={} orig(ops={} max={}) prop(ops={} max={})",
            c.num_gates(), o.apply_ops, o.max_nodes, p.apply_ops, p.max_nodes
        );
    }

    for depth in [62usize, 64, 66, 68, 70] {
        for seed in 0..6u64 {
            let c = gen_random(18, depth, seed).unwrap();
            let g = c.num_gates();
            let mark = if (710..=784).contains(&g) { " <-- in range" } else { "" };
            println!("random18 d={depth} s={seed}: gates={g}{mark}");
        }
    }

    for depth in [30usize, 40, 50] {
        for seed in 0..4u64 {
            let c = gen_random(10, depth, seed).unwrap();
            let mut finals = vec![];
            for s in Strategy::NAMED {
                finals.push(run(&c, s).final_nodes);
            }
            println!("random10 d={depth} s={seed}: gates={} finals={finals:?}", c.num_gates());
        }
    }
}
