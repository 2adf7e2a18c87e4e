//! Translate a single BPMN process into a calculus system and render
//! the resulting module.
//!
//! Run with: cargo run --example convert_process

use privcal::bpmn::parse_diagram;
use privcal::calculus::{print_system, print_type};
use privcal::convert::convert_collaboration;
use privcal::emit::{load_config, render_module};

const DIAGRAM: &str = r#"<definitions>
  <process id="review">
    <startEvent id="start"/>
    <receiveTask id="collect"/>
    <task id="approve"/>
    <task id="reject"/>
    <exclusiveGateway id="merge"/>
    <endEvent id="done"/>
    <sequenceFlow id="f1" sourceRef="start" targetRef="collect"/>
    <sequenceFlow id="f2" sourceRef="collect" targetRef="approve">
      <conditionExpression>verdict == yes</conditionExpression>
    </sequenceFlow>
    <sequenceFlow id="f3" sourceRef="collect" targetRef="reject">
      <conditionExpression>verdict != yes</conditionExpression>
    </sequenceFlow>
    <sequenceFlow id="f4" sourceRef="approve" targetRef="merge"/>
    <sequenceFlow id="f5" sourceRef="reject" targetRef="merge"/>
    <sequenceFlow id="f6" sourceRef="merge" targetRef="done"/>
  </process>
</definitions>"#;

const CONFIG: &str = r#"{
  "token_type_name": "Token",
  "token_value_name": "t",
  "fresh_prefix": "h",
  "processes": {
    "review": { "group": "Board", "purpose": "evaluation" }
  },
  "phantoms": {
    "collect": {
      "channel": "Applicant",
      "name": "verdict",
      "type": "Verdict{yes,no}"
    }
  }
}"#;

fn main() {
    let diagram = parse_diagram(DIAGRAM.as_bytes()).unwrap();
    let cfg = load_config(CONFIG).unwrap();
    let out = convert_collaboration(&diagram, &cfg.conversion).unwrap();

    println!("system:\n  {}\n", print_system(&out.system));

    println!("context (free names and their types):");
    for (name, ty) in &out.context {
        println!("  {name} : {}", print_type(ty));
    }

    println!("\nrendered module:\n{}", render_module(&out, &cfg.emit));
}
