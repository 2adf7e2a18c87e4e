//! Enumerate the one-step transitions of a term under the labelled
//! transition semantics.
//!
//! Run with: cargo run --example semantics_step

use privcal::calculus::{parse_term, print_label, print_term};
use privcal::semantics::step;

fn show(source: &str) {
    println!("{source}");
    for tr in step(&parse_term(source).unwrap()) {
        println!("  --{}--> {}", print_label(&tr.label), print_term(&tr.target));
    }
    println!();
}

fn main() {
    // An input offers a bound-input label; the binder in the label is a
    // placeholder chosen during canonicalization.
    show("req(r:Req).handle!<r>.0");

    // Communication: the pair can synchronize (tau) or either side can
    // act alone.
    show("req(r:Req).handle!<r>.0 | req!<job>.0");

    // Scope extrusion: sending a restricted name produces a bound
    // output, and the matching input closes the scope again.
    show("(new secret:Key)chan!<secret>.0 | chan(k:Key).use!<k>.0");

    // Conditions resolve against the tested value before stepping.
    show("if status=ok then ship!<pkg>.0 else refund!<pkg>.0");

    // Lifted processes step inside their group annotation.
    show("[Clinic,treatment]{record!<data>.0} || [Lab,analysis]{record(d:Data).0}");
}
