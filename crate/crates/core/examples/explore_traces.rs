//! Build the reachable transition graph of a closed term and list its
//! maximal silent traces.
//!
//! Run with: cargo run --example explore_traces

use privcal::calculus::{parse_term, print_label, print_term};
use privcal::semantics::{explore_tau, maximal_traces};

fn main() {
    // A two-branch workflow: the coordinator hands a token to either
    // worker, and whichever receives it reports back.
    let source = "(new t:Token)(start!<t>.0 \
                  | (start(x:Token).a!<x>.0 + start(x:Token).b!<x>.0) \
                  | a(y:Token).done!<y>.0 \
                  | b(y:Token).done!<y>.0 \
                  | done(z:Token).0)";
    let term = parse_term(source).unwrap();

    let graph = explore_tau(&term, 10_000, 1_000);
    println!("states: {}", graph.states.len());
    println!("edges:  {}", graph.edges.len());
    println!("truncated: {}", graph.truncated);

    for (i, state) in graph.states.iter().enumerate() {
        println!("  [{i}] {}", print_term(state));
    }

    let traces = maximal_traces(&graph).unwrap();
    println!("{} maximal trace(s):", traces.len());
    for trace in &traces {
        let labels: Vec<String> = trace.iter().map(print_label).collect();
        println!("  {}", labels.join(" "));
    }
}
