//! The stack template turns the jumping machine into a deterministic
//! leftmost normalizer: exactly one job is ever selectable, and every
//! beta transition contracts the leftmost redex of the read-back.
//!
//!     cargo run --example leftmost

use exam::exam as machine;
use exam::parse;
use exam::pools::{PoolTemplate, TemplateKind};
use exam::strategies::{leftmost_redex_addr, normalize, Picker};

fn main() {
    let term = parse("(\\f. f (f a)) (\\q. x ((\\y. y) q))").unwrap();
    println!("term: {term}\n");

    let mut s = machine::init(&term, TemplateKind::Stack, 0);
    let mut betas = 0;
    while !machine::is_final(&s) {
        let pick = s.pool.choose().unwrap();
        let before = machine::readback_term(&s).unwrap();
        let (info, next) = machine::step(&s, pick).unwrap();
        if let Some(addr) = &info.redex_addr {
            betas += 1;
            let leftmost = leftmost_redex_addr(&before).unwrap();
            println!("beta {betas}: contracts {addr} in {before}");
            assert_eq!(*addr, leftmost, "the machine left the leftmost order");
        }
        s = next;
    }
    let result = machine::final_term(&s).unwrap();
    let (reference, steps) = normalize(&term, Picker::Leftmost, 1_000).unwrap();
    println!("\nmachine normal form:   {result}");
    println!("reference normal form: {reference} ({steps} steps)");
    assert!(result.alpha_eq(&reference));
    assert_eq!(betas, steps);
}
