//! Build the workflow flow patterns directly: splits, joins, and
//! synchronisation.
//!
//! Run with: cargo run --example flow_patterns

use std::collections::BTreeSet;

use privcal::calculus::{parse_process, print_process, Group, Name};
use privcal::convert::{join_pattern, split_pattern, sync_pattern, FreshNames, JoinKind, SplitKind};

fn main() {
    let flows: Vec<Name> = ["f1", "f2", "f3"].iter().map(|s| Name::free(*s)).collect();
    let token = Name::free("t");
    let group = Group::role("G");
    let cont = || parse_process("body").unwrap();
    let mut fresh = FreshNames::new("h", BTreeSet::new());

    let par = split_pattern(SplitKind::Parallel, &flows, &token).unwrap();
    println!("parallel split:   {}", print_process(&par));

    let alt = split_pattern(SplitKind::Exclusive, &flows, &token).unwrap();
    println!("exclusive choice: {}", print_process(&alt));

    let choice = join_pattern(JoinKind::Choice, &flows, cont(), "t", "Token", &group, &mut fresh)
        .unwrap();
    println!("choice join:      {}", print_process(&choice));

    let sync = sync_pattern(&flows, cont(), "t", "Token").unwrap();
    println!("synchronisation:  {}", print_process(&sync));

    // The n-of-n join waits for all three triggers on a fresh helper
    // channel before releasing the continuation.
    let all = join_pattern(JoinKind::NofN, &flows, cont(), "t", "Token", &group, &mut fresh)
        .unwrap();
    println!("3-of-3 join:      {}", print_process(&all));

    // The m-of-n join releases the continuation after m triggers and
    // quietly absorbs the rest.
    let some =
        join_pattern(JoinKind::MofN { m: 2 }, &flows, cont(), "t", "Token", &group, &mut fresh)
            .unwrap();
    println!("2-of-3 join:      {}", print_process(&some));
}
