//! Fixed output formatting: every float is printed with 9 significant
//! digits in scientific notation so that reports are byte-identical across
//! runs and machines.

pub fn f9(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v }; // fold -0.0
    format!("{v:.8e}")
}

/// Minimal JSON string escaping (our strings are ASCII diagnostics).
pub fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
