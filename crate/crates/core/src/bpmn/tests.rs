use super::*;

const SIMPLE: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
  <process id="proc">
    <startEvent id="s"/>
    <task id="t" name="Work"/>
    <endEvent id="e"/>
    <sequenceFlow id="f1" sourceRef="s" targetRef="t"/>
    <sequenceFlow id="f2" sourceRef="t" targetRef="e"/>
  </process>
</definitions>
"#;

#[test]
fn parse_simple_process() {
    let d = parse_diagram(SIMPLE.as_bytes()).unwrap();
    let Diagram::SingleProcess(p) = d else { panic!("expected a single process") };
    assert_eq!(p.id, "proc");
    assert_eq!(p.nodes.len(), 3);
    assert_eq!(p.sequence_flows.len(), 2);
    assert_eq!(p.nodes["t"].name.as_deref(), Some("Work"));
    assert!(matches!(
        p.nodes["t"].kind,
        FlowNodeKind::Task { task_kind: TaskKind::Abstract }
    ));
    assert!(validate(&Diagram::SingleProcess(p)).is_empty());
}

#[test]
fn parse_unresolved_flow_target() {
    let xml = SIMPLE.replace(r#"targetRef="e""#, r#"targetRef="nowhere""#);
    let err = parse_diagram(xml.as_bytes()).unwrap_err();
    assert!(matches!(err, BpmnError::UnresolvedReference { id } if id == "nowhere"));
}

#[test]
fn parse_rejects_excluded_kinds() {
    let xml = SIMPLE.replace("<task id=\"t\" name=\"Work\"/>", "<serviceTask id=\"t\"/>");
    let err = parse_diagram(xml.as_bytes()).unwrap_err();
    assert!(matches!(err, BpmnError::UnsupportedElement { kind, .. } if kind == "serviceTask"));
}

#[test]
fn parse_rejects_non_message_intermediate() {
    let xml = SIMPLE.replace(
        "<task id=\"t\" name=\"Work\"/>",
        "<intermediateCatchEvent id=\"t\"><timerEventDefinition/></intermediateCatchEvent>",
    );
    assert!(matches!(
        parse_diagram(xml.as_bytes()),
        Err(BpmnError::UnsupportedElement { .. })
    ));
}

#[test]
fn parse_malformed_xml() {
    assert!(matches!(
        parse_diagram(b"<definitions><process id='p'>"),
        Err(BpmnError::MalformedXml(_))
    ));
}

const COLLAB: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
  <collaboration id="c">
    <participant id="poolA" name="Customer" processRef="procA"/>
    <participant id="poolB" name="Service"/>
    <messageFlow id="m1" sourceRef="poolB" targetRef="recv"/>
  </collaboration>
  <process id="procA">
    <startEvent id="s"/>
    <receiveTask id="recv" name="order"/>
    <endEvent id="e"/>
    <sequenceFlow id="f1" sourceRef="s" targetRef="recv"/>
    <sequenceFlow id="f2" sourceRef="recv" targetRef="e"/>
  </process>
</definitions>
"#;

#[test]
fn parse_collaboration_with_black_box() {
    let d = parse_diagram(COLLAB.as_bytes()).unwrap();
    let Diagram::Collaboration { participants, message_flows } = &d else {
        panic!("expected a collaboration")
    };
    assert_eq!(participants.len(), 2);
    assert!(matches!(participants[1].body, ParticipantBody::BlackBox));
    assert_eq!(message_flows.len(), 1);
    assert!(!message_flows[0].phantom);
    assert!(validate(&d).is_empty());
}

#[test]
fn parse_rejects_pool_to_pool_message_flow() {
    let xml = COLLAB.replace(
        r#"<messageFlow id="m1" sourceRef="poolB" targetRef="recv"/>"#,
        r#"<messageFlow id="m1" sourceRef="poolB" targetRef="poolA"/>"#,
    );
    assert!(matches!(
        parse_diagram(xml.as_bytes()),
        Err(BpmnError::UnsupportedElement { kind, .. }) if kind.contains("between two pools")
    ));
}

#[test]
fn parse_condition_shapes() {
    let xml = SIMPLE.replace(
        r#"<sequenceFlow id="f2" sourceRef="t" targetRef="e"/>"#,
        r#"<sequenceFlow id="f2" sourceRef="t" targetRef="e">
             <conditionExpression>status == ok</conditionExpression>
           </sequenceFlow>"#,
    );
    let Diagram::SingleProcess(p) = parse_diagram(xml.as_bytes()).unwrap() else {
        panic!()
    };
    assert_eq!(
        p.sequence_flows[1].condition,
        Some(Condition { message: "status".into(), op: CondOp::Eq, value: "ok".into() })
    );
    let bad = xml.replace("status == ok", "status approx ok");
    assert!(matches!(
        parse_diagram(bad.as_bytes()),
        Err(BpmnError::UnsupportedElement { .. })
    ));
}

#[test]
fn reparse_equals() {
    let a = parse_diagram(SIMPLE.as_bytes()).unwrap();
    let b = parse_diagram(SIMPLE.as_bytes()).unwrap();
    assert_eq!(a, b);
}

fn graph(xml: &str) -> ProcessGraph {
    match parse_diagram(xml.as_bytes()).unwrap() {
        Diagram::SingleProcess(p) => p,
        _ => panic!("expected a single process"),
    }
}

#[test]
fn reachable_basics() {
    let p = graph(SIMPLE);
    let all = reachable_from(&p, "s").unwrap();
    assert_eq!(all, ["s", "t", "e"].iter().map(|s| s.to_string()).collect());
    assert_eq!(reachable_from(&p, "e").unwrap().len(), 1);
    assert_eq!(reachable_from(&p, "zz"), Err(UnknownNode("zz".into())));
}

#[test]
fn reachable_diamond() {
    let xml = r#"<definitions><process id="p">
      <startEvent id="a"/>
      <task id="b"/><task id="c"/>
      <parallelGateway id="d"/>
      <endEvent id="e"/>
      <sequenceFlow id="f1" sourceRef="a" targetRef="b"/>
      <sequenceFlow id="f2" sourceRef="a" targetRef="c"/>
      <sequenceFlow id="f3" sourceRef="b" targetRef="d"/>
      <sequenceFlow id="f4" sourceRef="c" targetRef="d"/>
      <sequenceFlow id="f5" sourceRef="d" targetRef="e"/>
    </process></definitions>"#;
    let p = graph(xml);
    assert_eq!(reachable_from(&p, "a").unwrap().len(), 5);
    assert_eq!(
        reachable_from(&p, "b").unwrap(),
        ["b", "d", "e"].iter().map(|s| s.to_string()).collect()
    );
}

fn codes(xml: &str) -> Vec<ViolationCode> {
    validate(&parse_diagram(xml.as_bytes()).unwrap())
        .iter()
        .map(|v| v.code)
        .collect()
}

#[test]
fn validate_task_two_incoming() {
    let xml = r#"<definitions><process id="p">
      <startEvent id="s1"/><startEvent id="s2"/>
      <task id="t"/>
      <endEvent id="e"/>
      <sequenceFlow id="f1" sourceRef="s1" targetRef="t"/>
      <sequenceFlow id="f2" sourceRef="s2" targetRef="t"/>
      <sequenceFlow id="f3" sourceRef="t" targetRef="e"/>
    </process></definitions>"#;
    assert_eq!(codes(xml), vec![ViolationCode::TaskMultiIn]);
}

#[test]
fn validate_start_with_incoming() {
    let xml = r#"<definitions><process id="p">
      <startEvent id="s1"/>
      <task id="t"/>
      <startEvent id="s2"/>
      <endEvent id="e"/>
      <sequenceFlow id="f1" sourceRef="s1" targetRef="t"/>
      <sequenceFlow id="f2" sourceRef="t" targetRef="e"/>
      <sequenceFlow id="f3" sourceRef="t" targetRef="s2"/>
    </process></definitions>"#;
    assert_eq!(codes(xml), vec![ViolationCode::StartHasIn]);
}

#[test]
fn validate_backward_flow() {
    let xml = r#"<definitions><process id="p">
      <startEvent id="s"/>
      <exclusiveGateway id="xg"/>
      <task id="t"/>
      <parallelGateway id="pg"/>
      <endEvent id="e"/>
      <sequenceFlow id="f1" sourceRef="s" targetRef="xg"/>
      <sequenceFlow id="f2" sourceRef="xg" targetRef="t"/>
      <sequenceFlow id="f3" sourceRef="t" targetRef="pg"/>
      <sequenceFlow id="f4" sourceRef="pg" targetRef="xg"/>
      <sequenceFlow id="f5" sourceRef="pg" targetRef="e"/>
    </process></definitions>"#;
    assert_eq!(codes(xml), vec![ViolationCode::BackwardFlow]);
}

#[test]
fn validate_orphan_end_event() {
    let xml = SIMPLE.replace("<endEvent id=\"e\"/>", "<endEvent id=\"e\"/><endEvent id=\"e2\"/>");
    assert_eq!(codes(&xml), vec![ViolationCode::OrphanNode]);
}

#[test]
fn validate_subprocess_body_checked() {
    let xml = r#"<definitions><process id="p">
      <startEvent id="s"/>
      <subProcess id="sp">
        <startEvent id="is"/>
        <sequenceFlow id="g1" sourceRef="is" targetRef="it"/>
        <task id="it"/>
      </subProcess>
      <endEvent id="e"/>
      <sequenceFlow id="f1" sourceRef="s" targetRef="sp"/>
      <sequenceFlow id="f2" sourceRef="sp" targetRef="e"/>
    </process></definitions>"#;
    assert_eq!(codes(xml), vec![ViolationCode::MissingEnd]);
}
