//! Translate a diagram with message events, close it against an
//! environment that drives the phantom channels, and list the maximal
//! silent traces per scenario.
//!
//! Run with: cargo run --example trace_diagram

use privcal::bpmn::parse_diagram;
use privcal::calculus::{print_label, Term};
use privcal::cli::closed_systems;
use privcal::convert::convert_collaboration;
use privcal::emit::load_config;
use privcal::semantics::{explore_tau, maximal_traces};

const DIAGRAM: &str = r#"<definitions>
  <process id="triage">
    <startEvent id="start"/>
    <receiveTask id="assess"/>
    <task id="admit"/>
    <task id="discharge"/>
    <exclusiveGateway id="merge"/>
    <endEvent id="done"/>
    <sequenceFlow id="f1" sourceRef="start" targetRef="assess"/>
    <sequenceFlow id="f2" sourceRef="assess" targetRef="admit">
      <conditionExpression>severity == high</conditionExpression>
    </sequenceFlow>
    <sequenceFlow id="f3" sourceRef="assess" targetRef="discharge">
      <conditionExpression>severity != high</conditionExpression>
    </sequenceFlow>
    <sequenceFlow id="f4" sourceRef="admit" targetRef="merge"/>
    <sequenceFlow id="f5" sourceRef="discharge" targetRef="merge"/>
    <sequenceFlow id="f6" sourceRef="merge" targetRef="done"/>
  </process>
</definitions>"#;

const CONFIG: &str = r#"{
  "token_type_name": "Token",
  "token_value_name": "t",
  "fresh_prefix": "h",
  "processes": {
    "triage": { "group": "Clinic", "purpose": "treatment" }
  },
  "phantoms": {
    "assess": {
      "channel": "Nurse",
      "name": "severity",
      "type": "Severity{high,low}"
    }
  }
}"#;

fn main() {
    let diagram = parse_diagram(DIAGRAM.as_bytes()).unwrap();
    let cfg = load_config(CONFIG).unwrap().conversion;
    let out = convert_collaboration(&diagram, &cfg).unwrap();

    // One closed system per combination of context-variable values the
    // environment can send.
    for (scenario, system) in closed_systems(&diagram, &out, &cfg) {
        let graph = explore_tau(&Term::System(system), 10_000, 1_000);
        let traces = maximal_traces(&graph).unwrap();
        println!("[{scenario}] {} trace(s)", traces.len());
        for trace in &traces {
            let labels: Vec<String> = trace.iter().map(print_label).collect();
            println!("  {}", labels.join(" "));
        }
    }
}
