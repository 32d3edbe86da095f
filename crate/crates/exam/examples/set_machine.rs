//! The jumping machine with the set template: any job may fire at any
//! step, yet every seed reaches the same normal form in the same number
//! of beta transitions.
//!
//!     cargo run --example set_machine

use exam::exam as machine;
use exam::parse;
use exam::pools::TemplateKind;
use exam::trace::Outcome;

fn main() {
    let term = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
    println!("term: {term}\n");

    let (trace, state) = machine::run(&term, TemplateKind::Set, 42, 1_000, true);
    print!("{}", trace.render_text());
    assert_eq!(trace.outcome, Outcome::Final);
    println!("\nfinal approximant: {}", machine::final_term(&state).unwrap());

    println!("\nacross seeds:");
    for seed in [0, 1, 7, 1234, 987654321] {
        let (t, s) = machine::run(&term, TemplateKind::Set, seed, 1_000, false);
        println!(
            "  seed {seed:>9}: {} in {} betas, {} overhead steps",
            machine::final_term(&s).unwrap(),
            t.beta_count,
            t.overhead_count
        );
        assert_eq!(t.beta_count, trace.beta_count);
    }
    println!("\nthe schedule changes, the result and the beta count never do");
}
