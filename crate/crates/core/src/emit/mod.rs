//! Configuration loading and Maude-style module emission.
//!
//! The config file is a single JSON document; see [`load_config`] for
//! the key layout. The emitted module is shape-compatible with a
//! rewriting-logic formalisation (declarations, a system equation, a
//! context equation); the exact sort and symbol spellings are template
//! defaults and can be overridden under the `emit` key.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::calculus::{parse_type, print_term, print_type, Group, Term};
use crate::convert::{
    ConversionConfig, ConversionOutput, MessageMeta, PhantomMeta, ProcessMeta,
};

#[cfg(test)]
mod tests;

/// Names used by the emitted module: one sort per declaration role plus
/// the two symbols bound by equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortNames {
    pub group: String,
    pub purpose: String,
    pub ty: String,
    pub value: String,
    /// Sort of system terms and of process-variable constants; also the
    /// symbol the system equation binds.
    pub system: String,
    /// Symbol the context equation binds.
    pub context: String,
}

impl Default for SortNames {
    fn default() -> Self {
        SortNames {
            group: "Group".into(),
            purpose: "Purpose".into(),
            ty: "Type".into(),
            value: "Value".into(),
            system: "S".into(),
            context: "C".into(),
        }
    }
}

/// Template for the emitted module. The defaults are provisional: the
/// downstream tool's concrete grammar is not fixed here, only the shape
/// (declarations, then the two equations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitTemplate {
    pub module_name: String,
    pub sort_names: SortNames,
    pub header: String,
    pub footer: String,
}

impl EmitTemplate {
    pub fn with_module_name(module_name: impl Into<String>) -> Self {
        let module_name = module_name.into();
        EmitTemplate {
            header: format!("mod {module_name} is"),
            footer: "endm".into(),
            module_name,
            sort_names: SortNames::default(),
        }
    }
}

impl Default for EmitTemplate {
    fn default() -> Self {
        EmitTemplate::with_module_name("PRIVACY-MODULE")
    }
}

/// A parsed configuration file: the conversion inputs plus the emit
/// template with any overrides applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedConfig {
    pub conversion: ConversionConfig,
    pub emit: EmitTemplate,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    ConfigSyntax(String),
    #[error("missing config key '{0}'")]
    MissingKey(String),
    #[error("duplicate config key '{0}'")]
    DuplicateKey(String),
}

/// Loads a configuration document. Top-level keys:
///
/// - `token_type_name`, `token_value_name`, `fresh_prefix`: strings
/// - `processes`: object keyed by process/participant id, each with
///   `group` (a group expression) and `purpose`
/// - `messages`: object keyed by message-flow id, each with `name` and
///   `type` (a type expression, e.g. `Data` or `Status{ok,no}`)
/// - `phantoms`: object keyed by flow-node id, each with `channel`,
///   `name` and `type`
/// - `emit`: optional overrides: `module_name`, `header`, `footer`, and
///   `sort_names` with keys `group`, `purpose`, `type`, `value`,
///   `system`, `context`
///
/// Group expressions are `+`-separated atoms; an atom is an identifier
/// optionally suffixed with `:user` or `:role` (role is the default),
/// e.g. `alice:user+Hospital`.
pub fn load_config(text: &str) -> Result<LoadedConfig, ConfigError> {
    check_duplicate_keys(text)?;
    let root: Value =
        serde_json::from_str(text).map_err(|e| ConfigError::ConfigSyntax(e.to_string()))?;
    let root = root
        .as_object()
        .ok_or_else(|| ConfigError::ConfigSyntax("top level must be an object".into()))?;

    let mut conversion = ConversionConfig {
        token_type_name: str_key(root, "token_type_name")?,
        token_value_name: str_key(root, "token_value_name")?,
        fresh_prefix: str_key(root, "fresh_prefix")?,
        process_meta: BTreeMap::new(),
        message_meta: BTreeMap::new(),
        phantoms: BTreeMap::new(),
    };

    for (id, v) in obj_key(root, "processes")? {
        let o = entry_object(v, &format!("processes.{id}"))?;
        conversion.process_meta.insert(
            id.clone(),
            ProcessMeta {
                group: parse_group_expr(&str_field(o, &format!("processes.{id}"), "group")?)?,
                purpose: str_field(o, &format!("processes.{id}"), "purpose")?,
            },
        );
    }
    if let Some(messages) = opt_obj_key(root, "messages")? {
        for (id, v) in messages {
            let o = entry_object(v, &format!("messages.{id}"))?;
            conversion.message_meta.insert(
                id.clone(),
                MessageMeta {
                    message_name: str_field(o, &format!("messages.{id}"), "name")?,
                    message_type: type_field(o, &format!("messages.{id}"), "type")?,
                },
            );
        }
    }
    if let Some(phantoms) = opt_obj_key(root, "phantoms")? {
        for (id, v) in phantoms {
            let o = entry_object(v, &format!("phantoms.{id}"))?;
            conversion.phantoms.insert(
                id.clone(),
                PhantomMeta {
                    channel: str_field(o, &format!("phantoms.{id}"), "channel")?,
                    message_name: str_field(o, &format!("phantoms.{id}"), "name")?,
                    message_type: type_field(o, &format!("phantoms.{id}"), "type")?,
                },
            );
        }
    }

    let mut emit = EmitTemplate::default();
    if let Some(v) = root.get("emit") {
        let o = entry_object(v, "emit")?;
        if let Some(name) = o.get("module_name") {
            let name = string_value(name, "emit.module_name")?;
            emit = EmitTemplate::with_module_name(name);
        }
        if let Some(h) = o.get("header") {
            emit.header = string_value(h, "emit.header")?;
        }
        if let Some(f) = o.get("footer") {
            emit.footer = string_value(f, "emit.footer")?;
        }
        if let Some(v) = o.get("sort_names") {
            let s = entry_object(v, "emit.sort_names")?;
            let set = |slot: &mut String, key: &str| -> Result<(), ConfigError> {
                if let Some(v) = s.get(key) {
                    *slot = string_value(v, &format!("emit.sort_names.{key}"))?;
                }
                Ok(())
            };
            set(&mut emit.sort_names.group, "group")?;
            set(&mut emit.sort_names.purpose, "purpose")?;
            set(&mut emit.sort_names.ty, "type")?;
            set(&mut emit.sort_names.value, "value")?;
            set(&mut emit.sort_names.system, "system")?;
            set(&mut emit.sort_names.context, "context")?;
        }
    }

    Ok(LoadedConfig { conversion, emit })
}

/// Renders the module: header, one constant declaration per declared
/// identifier, the system equation, the context equation (entries sorted
/// by name), footer. Byte-deterministic for equal inputs.
pub fn render_module(out: &ConversionOutput, tpl: &EmitTemplate) -> String {
    let s = &tpl.sort_names;
    let mut lines = vec![tpl.header.clone()];
    let mut decl = |id: &str, sort: &str| lines.push(format!("  op {id} : -> {sort} ."));
    for g in &out.declarations.groups {
        decl(g, &s.group);
    }
    for p in &out.declarations.purposes {
        decl(p, &s.purpose);
    }
    for t in &out.declarations.basic_types {
        decl(t, &s.ty);
    }
    for (var, domain) in &out.declarations.context_vars {
        decl(var, &s.ty);
        for v in domain {
            decl(v, &s.value);
        }
    }
    for x in &out.declarations.process_vars {
        decl(x, &s.system);
    }
    lines.push(format!(
        "  eq {} = {} .",
        s.system,
        print_term(&Term::System(out.system.clone()))
    ));
    let context = if out.context.is_empty() {
        "nil".to_string()
    } else {
        out.context
            .iter()
            .map(|(name, ty)| format!("{name} : {}", print_type(ty)))
            .collect::<Vec<_>>()
            .join(", ")
    };
    lines.push(format!("  eq {} = {context} .", s.context));
    lines.push(tpl.footer.clone());
    lines.push(String::new());
    lines.join("\n")
}

/// Parses a group expression: `+`-separated atoms, each optionally
/// suffixed `:user` or `:role`.
pub fn parse_group_expr(text: &str) -> Result<Group, ConfigError> {
    let mut atoms = vec![];
    for part in text.split('+') {
        let part = part.trim();
        let (id, kind) = match part.split_once(':') {
            None => (part, "role"),
            Some((id, kind)) => (id.trim(), kind.trim()),
        };
        if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ConfigError::ConfigSyntax(format!(
                "bad group atom '{part}' in '{text}'"
            )));
        }
        atoms.push(match kind {
            "role" => Group::role(id),
            "user" => Group::user(id),
            _ => {
                return Err(ConfigError::ConfigSyntax(format!(
                    "unknown group kind '{kind}' in '{text}' (expected 'role' or 'user')"
                )))
            }
        });
    }
    let mut it = atoms.into_iter();
    let first = it
        .next()
        .ok_or_else(|| ConfigError::ConfigSyntax(format!("empty group expression '{text}'")))?;
    Ok(it.fold(first, Group::union))
}

fn str_key(o: &serde_json::Map<String, Value>, key: &str) -> Result<String, ConfigError> {
    string_value(o.get(key).ok_or_else(|| ConfigError::MissingKey(key.into()))?, key)
}

fn string_value(v: &Value, path: &str) -> Result<String, ConfigError> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| ConfigError::ConfigSyntax(format!("'{path}' must be a string")))
}

fn obj_key<'a>(
    o: &'a serde_json::Map<String, Value>,
    key: &str,
) -> Result<&'a serde_json::Map<String, Value>, ConfigError> {
    entry_object(o.get(key).ok_or_else(|| ConfigError::MissingKey(key.into()))?, key)
}

fn opt_obj_key<'a>(
    o: &'a serde_json::Map<String, Value>,
    key: &str,
) -> Result<Option<&'a serde_json::Map<String, Value>>, ConfigError> {
    o.get(key).map(|v| entry_object(v, key)).transpose()
}

fn entry_object<'a>(
    v: &'a Value,
    path: &str,
) -> Result<&'a serde_json::Map<String, Value>, ConfigError> {
    v.as_object()
        .ok_or_else(|| ConfigError::ConfigSyntax(format!("'{path}' must be an object")))
}

fn str_field(
    o: &serde_json::Map<String, Value>,
    path: &str,
    key: &str,
) -> Result<String, ConfigError> {
    string_value(
        o.get(key).ok_or_else(|| ConfigError::MissingKey(format!("{path}.{key}")))?,
        &format!("{path}.{key}"),
    )
}

fn type_field(
    o: &serde_json::Map<String, Value>,
    path: &str,
    key: &str,
) -> Result<crate::calculus::PrivType, ConfigError> {
    let text = str_field(o, path, key)?;
    parse_type(&text)
        .map_err(|e| ConfigError::ConfigSyntax(format!("'{path}.{key}': {e}")))
}

/// Rejects documents with a duplicate key in any object. serde_json
/// silently keeps the last occurrence, which would make configs
/// ambiguous.
fn check_duplicate_keys(text: &str) -> Result<(), ConfigError> {
    enum Frame {
        Object { keys: std::collections::BTreeSet<String>, current: Option<String>, expect_key: bool },
        Array,
    }
    let mut stack: Vec<Frame> = vec![];
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '{' => stack.push(Frame::Object {
                keys: Default::default(),
                current: None,
                expect_key: true,
            }),
            '[' => stack.push(Frame::Array),
            '}' | ']' => {
                stack.pop();
            }
            ',' => {
                if let Some(Frame::Object { expect_key, .. }) = stack.last_mut() {
                    *expect_key = true;
                }
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Ok(()), // serde_json will report the syntax error
                        Some('"') => break,
                        Some('\\') => {
                            s.push('\\');
                            if let Some(e) = chars.next() {
                                s.push(e);
                            }
                        }
                        Some(c) => s.push(c),
                    }
                }
                let duplicate = match stack.last_mut() {
                    Some(Frame::Object { keys, current, expect_key }) if *expect_key => {
                        *expect_key = false;
                        *current = Some(s.clone());
                        !keys.insert(s)
                    }
                    _ => false,
                };
                if duplicate {
                    let path: Vec<&str> = stack
                        .iter()
                        .filter_map(|f| match f {
                            Frame::Object { current: Some(k), .. } => Some(k.as_str()),
                            _ => None,
                        })
                        .collect();
                    return Err(ConfigError::DuplicateKey(path.join(".")));
                }
            }
            _ => {}
        }
    }
    Ok(())
}
