//! JSON interchange form of a collaboration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Branch, Collaboration, Element, Pool, Process};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("element {index} (`{kind}`): {reason}")]
    Element { index: usize, kind: String, reason: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonModel {
    pools: Vec<JsonPool>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonPool {
    name: String,
    elements: Vec<JsonElement>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonElement {
    kind: String,
    #[serde(rename = "in", skip_serializing_if = "Option::is_none", default)]
    input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    ins: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    outs: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    msg: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    branches: Option<Vec<JsonBranch>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    body: Option<Vec<JsonElement>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonBranch {
    msg: String,
    out: String,
}

fn encode_process(p: &Process) -> Vec<JsonElement> {
    p.elements.iter().map(encode_element).collect()
}

fn encode_element(el: &Element) -> JsonElement {
    let mut j = JsonElement { kind: el.kind_name().to_string(), ..Default::default() };
    match el {
        Element::Start { enb, out } => {
            j.input = Some(enb.clone());
            j.out = Some(out.clone());
        }
        Element::End { input, cmp } => {
            j.input = Some(input.clone());
            j.out = Some(cmp.clone());
        }
        Element::StartMsg { enb, msg, out } => {
            j.input = Some(enb.clone());
            j.msg = Some(msg.clone());
            j.out = Some(out.clone());
        }
        Element::EndMsg { input, msg, cmp } => {
            j.input = Some(input.clone());
            j.msg = Some(msg.clone());
            j.out = Some(cmp.clone());
        }
        Element::Terminate { input } => j.input = Some(input.clone()),
        Element::EventBased { input, branches } => {
            j.input = Some(input.clone());
            j.branches = Some(
                branches
                    .iter()
                    .map(|b| JsonBranch { msg: b.msg.clone(), out: b.out.clone() })
                    .collect(),
            );
        }
        Element::AndSplit { input, outs } | Element::XorSplit { input, outs } => {
            j.input = Some(input.clone());
            j.outs = Some(outs.clone());
        }
        Element::AndJoin { ins, out } | Element::XorJoin { ins, out } => {
            j.ins = Some(ins.clone());
            j.out = Some(out.clone());
        }
        Element::Task { input, out } | Element::EmptyTask { input, out } => {
            j.input = Some(input.clone());
            j.out = Some(out.clone());
        }
        Element::ReceiveTask { input, msg, out }
        | Element::SendTask { input, msg, out }
        | Element::CatchEvent { input, msg, out }
        | Element::ThrowEvent { input, msg, out } => {
            j.input = Some(input.clone());
            j.msg = Some(msg.clone());
            j.out = Some(out.clone());
        }
        Element::SubProcess { input, body, out } => {
            j.input = Some(input.clone());
            j.out = Some(out.clone());
            j.body = Some(encode_process(body));
        }
    }
    j
}

fn decode_process(elements: Vec<JsonElement>) -> Result<Process, JsonError> {
    elements
        .into_iter()
        .enumerate()
        .map(|(i, e)| decode_element(i, e))
        .collect::<Result<Vec<_>, _>>()
        .map(Process::new)
}

fn decode_element(index: usize, j: JsonElement) -> Result<Element, JsonError> {
    let kind = j.kind.clone();
    let err = |reason: &str| JsonError::Element {
        index,
        kind: kind.clone(),
        reason: reason.to_string(),
    };
    let JsonElement { input, ins, out, outs, msg, branches, body, .. } = j;

    // Reject fields the constructor does not take, so that every JSON
    // document maps to exactly one model.
    let allowed: &[&str] = match kind.as_str() {
        "start" | "end" | "task" | "emptyTask" => &["in", "out"],
        "startMsg" | "endMsg" | "receiveTask" | "sendTask" | "catchEvent" | "throwEvent" => {
            &["in", "msg", "out"]
        }
        "terminate" => &["in"],
        "eventBased" => &["in", "branches"],
        "andSplit" | "xorSplit" => &["in", "outs"],
        "andJoin" | "xorJoin" => &["ins", "out"],
        "subProcess" => &["in", "out", "body"],
        _ => return Err(err("unknown element kind")),
    };
    let present = [
        ("in", input.is_some()),
        ("ins", ins.is_some()),
        ("out", out.is_some()),
        ("outs", outs.is_some()),
        ("msg", msg.is_some()),
        ("branches", branches.is_some()),
        ("body", body.is_some()),
    ];
    for (field, is_present) in present {
        if is_present && !allowed.contains(&field) {
            return Err(err(&format!("unexpected field `{field}`")));
        }
        if !is_present && allowed.contains(&field) {
            return Err(err(&format!("missing field `{field}`")));
        }
    }

    let input = input.unwrap_or_default();
    let out = out.unwrap_or_default();
    let msg = msg.unwrap_or_default();
    Ok(match kind.as_str() {
        "start" => Element::Start { enb: input, out },
        "end" => Element::End { input, cmp: out },
        "startMsg" => Element::StartMsg { enb: input, msg, out },
        "endMsg" => Element::EndMsg { input, msg, cmp: out },
        "terminate" => Element::Terminate { input },
        "eventBased" => Element::EventBased {
            input,
            branches: branches
                .unwrap_or_default()
                .into_iter()
                .map(|b| Branch { msg: b.msg, out: b.out })
                .collect(),
        },
        "andSplit" => Element::AndSplit { input, outs: outs.unwrap_or_default() },
        "xorSplit" => Element::XorSplit { input, outs: outs.unwrap_or_default() },
        "andJoin" => Element::AndJoin { ins: ins.unwrap_or_default(), out },
        "xorJoin" => Element::XorJoin { ins: ins.unwrap_or_default(), out },
        "task" => Element::Task { input, out },
        "emptyTask" => Element::EmptyTask { input, out },
        "receiveTask" => Element::ReceiveTask { input, msg, out },
        "sendTask" => Element::SendTask { input, msg, out },
        "catchEvent" => Element::CatchEvent { input, msg, out },
        "throwEvent" => Element::ThrowEvent { input, msg, out },
        "subProcess" => Element::SubProcess {
            input,
            body: decode_process(body.unwrap_or_default())?,
            out,
        },
        _ => unreachable!("kind checked above"),
    })
}

/// Serializes a collaboration to its JSON interchange form.
pub fn to_json(model: &Collaboration) -> String {
    let doc = JsonModel {
        pools: model
            .pools
            .iter()
            .map(|p| JsonPool { name: p.name.clone(), elements: encode_process(&p.process) })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("model serialization cannot fail")
}

/// Reads a collaboration from its JSON interchange form. The result is not
/// validated.
pub fn from_json(text: &str) -> Result<Collaboration, JsonError> {
    let doc: JsonModel = serde_json::from_str(text)?;
    let pools = doc
        .pools
        .into_iter()
        .map(|p| Ok(Pool::new(p.name, decode_process(p.elements)?)))
        .collect::<Result<Vec<_>, JsonError>>()?;
    Ok(Collaboration::new(pools))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_names() {
        let model = Collaboration::new(vec![Pool::new(
            "A",
            Process::new(vec![
                Element::Start { enb: "a".into(), out: "b".into() },
                Element::End { input: "b".into(), cmp: "c".into() },
            ]),
        )]);
        let v: serde_json::Value = serde_json::from_str(&to_json(&model)).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"pools": [{"name": "A", "elements": [
                {"kind": "start", "in": "a", "out": "b"},
                {"kind": "end", "in": "b", "out": "c"}
            ]}]})
        );
        assert_eq!(from_json(&to_json(&model)).unwrap(), model);
    }

    #[test]
    fn rejects_wrong_fields() {
        let bad = r#"{"pools":[{"name":"A","elements":[{"kind":"task","in":"a","outs":["b"]}]}]}"#;
        assert!(matches!(from_json(bad), Err(JsonError::Element { .. })));
        let bad = r#"{"pools":[{"name":"A","elements":[{"kind":"gizmo","in":"a"}]}]}"#;
        assert!(matches!(from_json(bad), Err(JsonError::Element { .. })));
        assert!(matches!(from_json("{"), Err(JsonError::Syntax(_))));
    }
}
