//! Driving the job schedule by hand: the interactive template delegates
//! each selection to a callback. Here the callback replays a fixed script
//! and narrates what it picked; binding it to a terminal prompt instead is
//! what `exam reduce --template interactive` does.
//!
//!     cargo run --example interactive

use std::sync::{Arc, Mutex};

use exam::exam as machine;
use exam::parse;
use exam::pools::{ChoiceItem, Pool, TemplateKind};
use exam::syntax::HoleName;
use exam::trace::Trace;

fn main() {
    let term = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
    let script: Vec<u64> = vec![0, 0, 0, 2, 2, 1, 2, 1, 1, 2, 2, 3, 1, 3];
    let mut replay = script.into_iter();
    let chooser = Arc::new(Mutex::new(move |items: &[ChoiceItem]| {
        let pick = replay
            .next()
            .map(HoleName)
            .unwrap_or_else(|| items[0].name);
        let menu: Vec<String> = items.iter().map(|i| i.name.to_string()).collect();
        println!("offered [{}], picked {pick}", menu.join(", "));
        pick
    }));

    let state = machine::init_with_pool(&term, |job| Pool::interactive(job, chooser));
    let trace = Trace::new_exam(term.clone(), TemplateKind::Interactive, 0, 100);
    let (trace, final_state) = machine::run_from(state, trace, 100, false);

    println!(
        "\n{term}  evaluates to  {}  ({} betas, {} overhead steps)",
        machine::final_term(&final_state).unwrap(),
        trace.beta_count,
        trace.overhead_count
    );
}
