//! Parse a term from the concrete syntax, print it back, and show its
//! canonical form.
//!
//! Run with: cargo run --example term_roundtrip

use privcal::calculus::{canonical, congruent, parse_term, print_term};

fn main() {
    let source = "(new order:Order)(shop(o:Order).pay!<o>.0 | shop!<order>.0)";
    let term = parse_term(source).unwrap();
    println!("parsed:    {}", print_term(&term));

    let canon = canonical(&term);
    println!("canonical: {}", print_term(&canon));

    // Structural congruence is decided by comparing canonical forms, so
    // renaming binders, reordering parallel components, and adding
    // inert ones never changes the answer.
    let shuffled =
        parse_term("0 | (new o2:Order)(shop!<o2>.0 | shop(x:Order).pay!<x>.0)").unwrap();
    let same = congruent(&term, &shuffled).unwrap();
    println!("congruent to shuffled variant: {same}");
    assert!(same);

    // Different free names are a real difference.
    let other = parse_term("(new order:Order)(bank(o:Order).pay!<o>.0 | bank!<order>.0)").unwrap();
    println!("congruent to renamed channel:  {}", congruent(&term, &other).unwrap());
}
