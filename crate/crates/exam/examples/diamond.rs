//! Diamond non-determinism of the set machine: two different choices from
//! the same state close in one step each, up to reordering independent
//! environment entries.
//!
//!     cargo run --example diamond

use exam::exam as machine;
use exam::parse;
use exam::pools::{PoolTemplate, TemplateKind};

fn main() {
    let term = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
    let mut s = machine::init(&term, TemplateKind::Set, 0);
    // walk to the first state with two jobs, then exhaust the overhead
    // steps so both pending moves are betas
    while s.pool.names().len() < 2 {
        let pick = s.pool.choose().unwrap();
        s = machine::step(&s, pick).unwrap().1;
    }
    let (s, _) = machine::o_normalize(s);
    println!("branching state:");
    for (key, value) in machine::render_fields(&s) {
        println!("  {key}: {value}");
    }

    let names = s.pool.names();
    let (j1, j2) = (names[0], names[1]);
    let (i1, s1) = machine::step(&s, j1).unwrap();
    let (i2, s2) = machine::step(&s, j2).unwrap();
    println!("\nstep {j1} first: {} on {j1}", i1.label);
    println!("step {j2} first: {} on {j2}", i2.label);

    let (c1, c2) = machine::diamond_close(&s1, j1, &s2, j2).unwrap();
    println!("\nafter closing, both orders give:");
    println!("  env via {j1} then {j2}: {}", c1.env);
    println!("  env via {j2} then {j1}: {}", c2.env);
    assert!(machine::state_equiv_up_to_names(&c1, &c2));
    assert!(machine::env_equiv(&c1.env, &c2.env));
    println!("the states are equivalent up to swapping independent entries");
}
