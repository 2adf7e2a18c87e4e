//! Translate a two-pool collaboration: message flows become shared
//! channels typed over the union group of the pools.
//!
//! Run with: cargo run --example collaboration

use privcal::bpmn::parse_diagram;
use privcal::calculus::print_system;
use privcal::convert::convert_collaboration;
use privcal::emit::load_config;

const DIAGRAM: &str = r#"<definitions>
  <collaboration id="deal">
    <participant id="poolCustomer" processRef="customer"/>
    <participant id="poolStore" processRef="store"/>
    <messageFlow id="m1" sourceRef="order" targetRef="intake"/>
    <messageFlow id="m2" sourceRef="ship" targetRef="receive"/>
  </collaboration>
  <process id="customer">
    <startEvent id="cStart"/>
    <sendTask id="order"/>
    <receiveTask id="receive"/>
    <endEvent id="cEnd"/>
    <sequenceFlow id="c1" sourceRef="cStart" targetRef="order"/>
    <sequenceFlow id="c2" sourceRef="order" targetRef="receive"/>
    <sequenceFlow id="c3" sourceRef="receive" targetRef="cEnd"/>
  </process>
  <process id="store">
    <startEvent id="sStart"/>
    <receiveTask id="intake"/>
    <sendTask id="ship"/>
    <endEvent id="sEnd"/>
    <sequenceFlow id="s1" sourceRef="sStart" targetRef="intake"/>
    <sequenceFlow id="s2" sourceRef="intake" targetRef="ship"/>
    <sequenceFlow id="s3" sourceRef="ship" targetRef="sEnd"/>
  </process>
</definitions>"#;

const CONFIG: &str = r#"{
  "token_type_name": "Token",
  "token_value_name": "t",
  "fresh_prefix": "h",
  "processes": {
    "poolCustomer": { "group": "alice:user", "purpose": "purchase" },
    "poolStore": { "group": "Store", "purpose": "fulfilment" }
  },
  "messages": {
    "m1": { "name": "order", "type": "Order" },
    "m2": { "name": "parcel", "type": "Parcel" }
  }
}"#;

fn main() {
    let diagram = parse_diagram(DIAGRAM.as_bytes()).unwrap();
    let cfg = load_config(CONFIG).unwrap();
    let out = convert_collaboration(&diagram, &cfg.conversion).unwrap();

    println!("system:\n  {}\n", print_system(&out.system));
    println!("groups:   {:?}", out.declarations.groups);
    println!("purposes: {:?}", out.declarations.purposes);
    println!("types:    {:?}", out.declarations.basic_types);
}
