use std::collections::BTreeMap;

use super::*;
use crate::calculus::{Name, PrivType, System};
use crate::convert::Declarations;

const MINIMAL: &str = r#"{
  "token_type_name": "Token",
  "token_value_name": "t",
  "fresh_prefix": "h",
  "processes": { "proc": { "group": "G", "purpose": "billing" } }
}"#;

#[test]
fn load_minimal_config() {
    let cfg = load_config(MINIMAL).unwrap();
    assert_eq!(cfg.conversion.token_type_name, "Token");
    assert_eq!(cfg.conversion.token_value_name, "t");
    assert_eq!(cfg.conversion.fresh_prefix, "h");
    let meta = &cfg.conversion.process_meta["proc"];
    assert_eq!(meta.group, Group::role("G"));
    assert_eq!(meta.purpose, "billing");
    assert_eq!(cfg.emit, EmitTemplate::default());
}

#[test]
fn load_rejects_missing_purpose() {
    let text = MINIMAL.replace(r#", "purpose": "billing""#, "");
    assert_eq!(
        load_config(&text).unwrap_err(),
        ConfigError::MissingKey("processes.proc.purpose".into())
    );
}

#[test]
fn load_rejects_missing_token_names() {
    let text = MINIMAL.replace(r#""token_value_name": "t","#, "");
    assert_eq!(
        load_config(&text).unwrap_err(),
        ConfigError::MissingKey("token_value_name".into())
    );
}

#[test]
fn load_parses_message_and_phantom_types() {
    let text = r#"{
      "token_type_name": "Token",
      "token_value_name": "t",
      "fresh_prefix": "h",
      "processes": { "proc": { "group": "G", "purpose": "p" } },
      "messages": { "m1": { "name": "status", "type": "Status{ok,bad}" } },
      "phantoms": { "n1": { "channel": "E", "name": "d", "type": "G[Data]" } }
    }"#;
    let cfg = load_config(text).unwrap().conversion;
    assert_eq!(
        cfg.message_meta["m1"].message_type,
        PrivType::ContextVar { id: "Status".into(), domain: vec!["ok".into(), "bad".into()] }
    );
    assert_eq!(cfg.phantoms["n1"].channel, "E");
    assert_eq!(
        cfg.phantoms["n1"].message_type,
        PrivType::group(Group::role("G"), PrivType::basic("Data"))
    );
}

#[test]
fn load_rejects_duplicate_keys() {
    let text = MINIMAL.replace(
        r#""fresh_prefix": "h","#,
        r#""fresh_prefix": "h", "fresh_prefix": "k","#,
    );
    assert_eq!(
        load_config(&text).unwrap_err(),
        ConfigError::DuplicateKey("fresh_prefix".into())
    );
    let nested = MINIMAL.replace(
        r#""purpose": "billing""#,
        r#""purpose": "billing", "purpose": "other""#,
    );
    assert_eq!(
        load_config(&nested).unwrap_err(),
        ConfigError::DuplicateKey("processes.proc.purpose".into())
    );
}

#[test]
fn load_rejects_malformed_json() {
    assert!(matches!(
        load_config("{ not json"),
        Err(ConfigError::ConfigSyntax(_))
    ));
}

#[test]
fn load_applies_emit_overrides() {
    let text = MINIMAL.replacen(
        '{',
        r#"{ "emit": { "module_name": "SHOP", "sort_names": { "system": "Sys" } }, "#,
        1,
    );
    let emit = load_config(&text).unwrap().emit;
    assert_eq!(emit.module_name, "SHOP");
    assert_eq!(emit.header, "mod SHOP is");
    assert_eq!(emit.footer, "endm");
    assert_eq!(emit.sort_names.system, "Sys");
    assert_eq!(emit.sort_names.group, "Group");
}

#[test]
fn group_expressions() {
    assert_eq!(parse_group_expr("A").unwrap(), Group::role("A"));
    assert_eq!(
        parse_group_expr("alice:user+Hospital").unwrap(),
        Group::union(Group::user("alice"), Group::role("Hospital"))
    );
    assert!(matches!(parse_group_expr(""), Err(ConfigError::ConfigSyntax(_))));
    assert!(matches!(parse_group_expr("A:owner"), Err(ConfigError::ConfigSyntax(_))));
}

fn sample_output() -> ConversionOutput {
    let mut declarations = Declarations::default();
    declarations.groups.insert("G".into());
    declarations.purposes.insert("billing".into());
    declarations.basic_types.insert("Token".into());
    declarations.context_vars.insert("Status".into(), vec!["ok".into(), "no".into()]);
    declarations.process_vars.insert("P_S".into());
    let status = PrivType::ContextVar { id: "Status".into(), domain: vec!["ok".into(), "no".into()] };
    let mut context = BTreeMap::new();
    context.insert(Name::free("E"), status);
    ConversionOutput { system: System::Empty, context, declarations }
}

#[test]
fn render_empty_system_module() {
    let text = render_module(&sample_output(), &EmitTemplate::default());
    let expect = "mod PRIVACY-MODULE is\n\
                  \x20 op G : -> Group .\n\
                  \x20 op billing : -> Purpose .\n\
                  \x20 op Token : -> Type .\n\
                  \x20 op Status : -> Type .\n\
                  \x20 op ok : -> Value .\n\
                  \x20 op no : -> Value .\n\
                  \x20 op P_S : -> S .\n\
                  \x20 eq S = 0 .\n\
                  \x20 eq C = E : Status{ok,no} .\n\
                  endm\n";
    assert_eq!(text, expect);
}

#[test]
fn render_empty_context_is_nil() {
    let mut out = sample_output();
    out.context.clear();
    let text = render_module(&out, &EmitTemplate::default());
    assert!(text.contains("  eq C = nil .\n"));
}

#[test]
fn render_declares_each_identifier_once() {
    let out = sample_output();
    let text = render_module(&out, &EmitTemplate::default());
    let declared: Vec<&str> = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix("op "))
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    let mut unique = declared.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(declared.len(), unique.len());
    let mut expected: Vec<&str> = vec![];
    expected.extend(out.declarations.groups.iter().map(String::as_str));
    expected.extend(out.declarations.purposes.iter().map(String::as_str));
    expected.extend(out.declarations.basic_types.iter().map(String::as_str));
    for (var, domain) in &out.declarations.context_vars {
        expected.push(var);
        expected.extend(domain.iter().map(String::as_str));
    }
    expected.extend(out.declarations.process_vars.iter().map(String::as_str));
    expected.sort();
    unique.sort();
    assert_eq!(unique, expected);
}

#[test]
fn render_is_deterministic() {
    let out = sample_output();
    let a = render_module(&out, &EmitTemplate::default());
    let b = render_module(&out, &EmitTemplate::default());
    assert_eq!(a, b);
}
