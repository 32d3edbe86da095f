//! Weak head evaluation with the single-job machine: run it on a term,
//! print the trace table, and compare against the reference stepper.
//!
//!     cargo run --example weak_head

use exam::mam;
use exam::parse;
use exam::strategies::{whnf_step, StepOutcome};

fn main() {
    let term = parse("(\\x. \\y. x y) ((\\z. z) a) b").unwrap();
    println!("term: {term}\n");

    let (trace, final_state) = mam::run(&term, 100, true);
    print!("{}", trace.render_text());

    let result = mam::readback(&final_state);
    println!("\nread-back of the final state: {result}");

    // the reference stepper agrees step for step on beta counts
    let mut cur = term.clone();
    let mut steps = 0;
    while let StepOutcome::Reduced { next, .. } = whnf_step(&cur) {
        cur = next;
        steps += 1;
    }
    println!("reference weak head normal form: {cur} in {steps} steps");
    assert!(result.alpha_eq(&cur));
    assert_eq!(trace.beta_count, steps);
    println!("machine and reference agree (beta count {steps})");
}
