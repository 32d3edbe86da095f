//! Swapping the pool template changes the strategy without touching the
//! machine: the least-level template processes shallow redexes first, and
//! the fair template keeps every job alive where the stack template
//! starves everything behind a loop.
//!
//!     cargo run --example schedulers

use exam::exam as machine;
use exam::parse;
use exam::pools::{self, PoolTemplate, TemplateKind};
use exam::strategies::redex_level;

fn main() {
    // the leftmost redex (\a. a) y sits under two arguments (level 2),
    // the right redex (\b. b) z under one (level 1)
    let term = parse("x (x ((\\a. a) y)) ((\\b. b) z)").unwrap();
    println!("least-level on {term}:");
    let mut s = machine::init(&term, TemplateKind::LeastLevel, 0);
    while !machine::is_final(&s) {
        let pick = s.pool.choose().unwrap();
        let before = machine::readback_term(&s).unwrap();
        let (info, next) = machine::step(&s, pick).unwrap();
        if let Some(addr) = &info.redex_addr {
            let level = redex_level(&before, addr).unwrap();
            println!("  beta at {addr} (level {level}) in {before}");
        }
        s = next;
    }
    println!("  normal form: {}", machine::final_term(&s).unwrap());
    assert!(pools::level_trace_check(&term, 500));

    // a looping first argument next to a finite second one
    let trap = parse("x ((\\w. w w) (\\w. w w)) ((\\a. a) y)").unwrap();
    println!("\nfairness on {trap}:");
    for kind in [TemplateKind::Fair, TemplateKind::Stack] {
        let mut s = machine::init(&trap, kind, 0);
        for _ in 0..200 {
            if machine::is_final(&s) {
                break;
            }
            let pick = s.pool.choose().unwrap();
            s = machine::step(&s, pick).unwrap().1;
        }
        println!("  {kind:<6} after 200 steps: approximant {}", s.approx);
    }
    println!("  the fair run finished the finite argument; the stack run never got to it");
}
