use qdd::circuit::generators::{gen_qft, gen_random};
use qdd::{emit_qasm, parse_qasm, simulate, SimConfig};

fn main() {
    for n in [8usize, 10] {
        let c = gen_qft(n, true).unwrap();
        let run = simulate(&c, &SimConfig::default()).unwrap();
        println!(
            "qftent{n}: gates={} final={} max={}",
            c.num_gates(),
            run.result.final_nodes,
            run.result.max_nodes
        );
    }
    let c = gen_random(18, 64, 1).unwrap();
    let t = emit_qasm(&c);
    let p = parse_qasm(&t).unwrap();
    assert_eq!(p.circuit.ops, c.ops);
    println!("random18 d64 s1: gates={} roundtrip ok", c.num_gates());
}
