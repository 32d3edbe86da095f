//! The executable side of the machine's metatheory: reachable-state
//! invariants, read-back transparency of overhead steps, the decreasing
//! overhead measure, and beta reflection at overhead-normal states.
//!
//!     cargo run --example validators

use exam::exam as machine;
use exam::parse;
use exam::pools::{PoolTemplate, TemplateKind};
use exam::strategies::{contract, external_redexes};

fn main() {
    let term = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
    let mut s = machine::init(&term, TemplateKind::Set, 9);
    let mut step_no = 0;
    while !machine::is_final(&s) {
        let report = machine::validate_invariants(&s);
        assert!(report.ok(), "state {step_no}: {report}");
        let measure = machine::overhead_measure(&s).unwrap();
        let before = machine::readback(&s);

        let pick = s.pool.choose().unwrap();
        let (info, next) = machine::step(&s, pick).unwrap();
        step_no += 1;

        let after_measure = machine::overhead_measure(&next).unwrap();
        if info.label.is_beta() {
            println!("step {step_no:>2}: beta on {} (measure {measure} -> {after_measure})", info.job);
        } else {
            assert_eq!(measure, after_measure + 1);
            let after = machine::readback(&next);
            let preserved = if before == after { "unchanged" } else { "unchanged up to alpha" };
            println!(
                "step {step_no:>2}: {} on {} (measure {measure} -> {after_measure}, read-back {preserved})",
                info.label, info.job
            );
        }
        s = next;
    }
    println!("\nfinal: {}", machine::final_term(&s).unwrap());

    // reflection: at an overhead-normal state every external redex of the
    // read-back is contracted by some enabled beta
    let (onf, _) = machine::o_normalize(machine::init(
        &parse("(\\p. p p) ((\\q. q) r)").unwrap(),
        TemplateKind::Set,
        0,
    ));
    let read = machine::readback_term(&onf).unwrap();
    println!("\noverhead-normal state reads back to {read}");
    for addr in external_redexes(&read).iter() {
        let contracted = contract(&read, addr).unwrap();
        let hit = machine::enabled(&onf).into_iter().any(|(name, _)| {
            let (info, next) = machine::step(&onf, name).unwrap();
            info.redex_addr.as_ref() == Some(addr)
                && machine::readback_term(&next) == Some(contracted.clone())
        });
        assert!(hit);
        println!("external redex at {addr}: matched by an enabled beta -> {contracted}");
    }
}
