//! Parse BPMN XML and check it against the structural conventions the
//! translation relies on.
//!
//! Run with: cargo run --example validate_diagram

use privcal::bpmn::{parse_diagram, validate};

const BROKEN: &str = r#"<definitions>
  <process id="proc">
    <startEvent id="start"/>
    <task id="work"/>
    <task id="floating"/>
    <sequenceFlow id="f1" sourceRef="start" targetRef="work"/>
  </process>
</definitions>"#;

const FIXED: &str = r#"<definitions>
  <process id="proc">
    <startEvent id="start"/>
    <task id="work"/>
    <endEvent id="done"/>
    <sequenceFlow id="f1" sourceRef="start" targetRef="work"/>
    <sequenceFlow id="f2" sourceRef="work" targetRef="done"/>
  </process>
</definitions>"#;

fn main() {
    let diagram = parse_diagram(BROKEN.as_bytes()).unwrap();
    let violations = validate(&diagram);
    println!("broken diagram, {} violation(s):", violations.len());
    for v in &violations {
        println!("  {} {} {}", v.code, v.node_or_flow, v.message);
    }

    let diagram = parse_diagram(FIXED.as_bytes()).unwrap();
    let violations = validate(&diagram);
    println!("fixed diagram, {} violation(s)", violations.len());
    assert!(violations.is_empty());
}
