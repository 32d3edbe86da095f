//! Strong normalization by backtracking: entered abstractions pile up on
//! the abstraction stack, finished sub-terms are walked back out of
//! through the dump. The run prints every state with its phase and counts
//! the pure search transitions that the jumping machine later avoids.
//!
//!     cargo run --example strong_backtracking

use exam::bmam;
use exam::mam::Label;
use exam::parse;

fn main() {
    let term = parse("\\f. f ((\\y. y) a) ((\\w. w w) b)").unwrap();
    println!("term: {term}\n");

    let (trace, final_state) = bmam::run(&term, 500, true);
    print!("{}", trace.render_text());

    println!("\nnormal form: {}", bmam::result(&final_state).unwrap());
    let count = |l: Label| trace.steps.iter().filter(|s| s.label == l).count();
    println!(
        "betas {}, substitutions {}, search {} (enter @ {}, enter λ {}), backtracking {} (▼▲ {}, ▲▼ {}, ▲λ {}, ▲@ {})",
        trace.beta_count,
        count(Label::Sub),
        count(Label::SeaApp) + count(Label::SeaLam),
        count(Label::SeaApp),
        count(Label::SeaLam),
        count(Label::SwitchBack) + count(Label::SwitchEval) + count(Label::BackLam) + count(Label::BackApp),
        count(Label::SwitchBack),
        count(Label::SwitchEval),
        count(Label::BackLam),
        count(Label::BackApp),
    );
}
