use std::fmt::Write;

use crate::model::{Collaboration, Element, Process};

/// Canonical DSL text: one element per line, two-space indentation per
/// nesting level, pools separated by a blank line.
pub fn pretty(model: &Collaboration) -> String {
    let mut out = String::new();
    for (i, pool) in model.pools.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "pool {} {{", pool.name);
        write_process(&mut out, &pool.process, 1);
        out.push_str("}\n");
    }
    out
}

fn write_process(out: &mut String, process: &Process, level: usize) {
    for el in &process.elements {
        let indent = "  ".repeat(level);
        out.push_str(&indent);
        match el {
            Element::SubProcess { input, body, out: o } => {
                let _ = writeln!(out, "subProcess({input} -> {o}) {{");
                write_process(out, body, level + 1);
                out.push_str(&indent);
                out.push_str("}\n");
            }
            other => {
                out.push_str(&element_text(other));
                out.push('\n');
            }
        }
    }
}

fn set(edges: &[String]) -> String {
    format!("{{{}}}", edges.join(", "))
}

fn element_text(el: &Element) -> String {
    let k = el.kind_name();
    match el {
        Element::Start { enb, out } => format!("{k}(enb:{enb} -> {out})"),
        Element::StartMsg { enb, msg, out } => format!("{k}(enb:{enb}, msg:{msg} -> {out})"),
        Element::End { input, cmp } => format!("{k}({input} -> cmp:{cmp})"),
        Element::EndMsg { input, msg, cmp } => format!("{k}({input}, msg:{msg} -> cmp:{cmp})"),
        Element::Terminate { input } => format!("{k}({input})"),
        Element::EventBased { input, branches } => {
            let bs: Vec<_> =
                branches.iter().map(|b| format!("msg:{} -> {}", b.msg, b.out)).collect();
            format!("{k}({input} -> {{{}}})", bs.join(", "))
        }
        Element::AndSplit { input, outs } | Element::XorSplit { input, outs } => {
            format!("{k}({input} -> {})", set(outs))
        }
        Element::AndJoin { ins, out } | Element::XorJoin { ins, out } => {
            format!("{k}({} -> {out})", set(ins))
        }
        Element::Task { input, out } | Element::EmptyTask { input, out } => {
            format!("{k}({input} -> {out})")
        }
        Element::ReceiveTask { input, msg, out }
        | Element::SendTask { input, msg, out }
        | Element::CatchEvent { input, msg, out }
        | Element::ThrowEvent { input, msg, out } => format!("{k}({input}, msg:{msg} -> {out})"),
        Element::SubProcess { .. } => unreachable!("sub-processes are written as blocks"),
    }
}
