//! Bracketed-section text files: `[name]` headers followed by body lines.

use crate::error::{Error, Result};

/// Splits text into `(name, body)` pairs in file order.
pub fn split_sections(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            out.push((name.to_string(), String::new()));
        } else if t.is_empty() || t.starts_with('#') {
            continue;
        } else if let Some((_, body)) = out.last_mut() {
            body.push_str(t);
            body.push('\n');
        } else {
            return Err(Error::Parse(format!("line `{t}` outside any section")));
        }
    }
    Ok(out)
}

/// Body of the named section.
pub fn section<'a>(sections: &'a [(String, String)], name: &str) -> Result<&'a str> {
    sections
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, b)| b.as_str())
        .ok_or_else(|| Error::Parse(format!("missing section [{name}]")))
}

pub fn write_section(out: &mut String, name: &str, body: &str) {
    out.push_str(&format!("[{name}]\n"));
    out.push_str(body);
    if !body.is_empty() && !body.ends_with('\n') {
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_roundtrip() {
        let mut text = String::new();
        write_section(&mut text, "a", "x: 1\n");
        write_section(&mut text, "b", "");
        let s = split_sections(&text).unwrap();
        assert_eq!(section(&s, "a").unwrap(), "x: 1\n");
        assert_eq!(section(&s, "b").unwrap(), "");
        assert!(section(&s, "c").is_err());
        assert!(split_sections("stray\n[a]\n").is_err());
    }
}
