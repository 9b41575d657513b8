//! Spec files: three sections `tree:`, `mu:` and `phi:`.
//!
//! A section's expression starts after its colon and continues on the
//! following lines until the next section header. Lines starting with `#`
//! are comments.

use super::ast::Expr;
use super::{parse_at, ParseError, Section};

#[derive(Debug, Clone, PartialEq)]
pub struct SpecSource {
    pub tree: Expr,
    pub mu: Expr,
    pub phi: Expr,
}

impl SpecSource {
    /// Canonical spec text; parses back to the same expressions.
    pub fn to_text(&self) -> String {
        format!("tree: {}\nmu: {}\nphi: {}\n", self.tree, self.mu, self.phi)
    }
}

fn header(line: &str) -> Option<(Section, usize)> {
    let trimmed = line.trim_start();
    let indent = line.len() - trimmed.len();
    for (name, section) in [
        ("tree", Section::Tree),
        ("mu", Section::Mu),
        ("phi", Section::Phi),
    ] {
        if let Some(rest) = trimmed.strip_prefix(name) {
            if rest.trim_start().starts_with(':') {
                let colon = rest.find(':').expect("checked above");
                return Some((section, indent + name.len() + colon + 1));
            }
        }
    }
    None
}

pub fn parse_spec(text: &str) -> Result<SpecSource, ParseError> {
    // (section, first line number, text with the header blanked out)
    let mut sections: Vec<(Section, usize, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let is_comment = line.trim_start().starts_with('#');
        if let Some((section, body_start)) = (!is_comment).then(|| header(line)).flatten() {
            if sections.iter().any(|(s, _, _)| *s == section) {
                return Err(ParseError::new(
                    lineno,
                    1,
                    format!("duplicate section `{}`", name(section)),
                ));
            }
            let body = " ".repeat(body_start) + &line[body_start..];
            sections.push((section, lineno, body));
            continue;
        }
        match sections.last_mut() {
            Some((_, _, body)) => {
                body.push('\n');
                if !is_comment {
                    body.push_str(line);
                }
            }
            None if line.trim().is_empty() || is_comment => {}
            None => {
                let col = line.len() - line.trim_start().len() + 1;
                return Err(ParseError::new(
                    lineno,
                    col,
                    "expected a section header `tree:`, `mu:` or `phi:`",
                ));
            }
        }
    }
    let end_line = text.lines().count().max(1);
    let take = |section: Section| -> Result<Expr, ParseError> {
        let Some(idx) = sections.iter().position(|(s, _, _)| *s == section) else {
            return Err(ParseError::new(
                end_line,
                1,
                format!("missing section `{}`", name(section)),
            ));
        };
        let (_, line, body) = &sections[idx];
        if body.trim().is_empty() {
            return Err(ParseError::new(
                *line,
                1,
                format!("empty section `{}`", name(section)),
            ));
        }
        parse_at(body, *line, section)
    };
    Ok(SpecSource {
        tree: take(Section::Tree)?,
        mu: take(Section::Mu)?,
        phi: take(Section::Phi)?,
    })
}

fn name(section: Section) -> &'static str {
    match section {
        Section::Tree => "tree",
        Section::Mu => "mu",
        Section::Phi => "phi",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let s = parse_spec(
            "# example\ntree: 2\nmu: if len == 0 then 2\n   else 1/len\nphi: spine(2^len)\n",
        )
        .unwrap();
        assert_eq!(s.tree, Expr::Int(2));
        assert_eq!(s.mu.to_string(), "(if len == 0 then 2 else (1 / len))");
        assert_eq!(s.phi.to_string(), "spine((2 ^ len))");
        assert_eq!(parse_spec(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn errors_are_located_in_the_file() {
        let e = parse_spec("tree: 2\nmu: 1 +\nphi: v\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("end of input"));
        let e = parse_spec("tree: 2\nmu: len $ 2\nphi: v\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 9));
        let e = parse_spec("tree: 2\nphi: v\n").unwrap_err();
        assert!(e.message.contains("missing section `mu`"));
        let e = parse_spec("tree: 2\ntree: 3\nmu: 1\nphi: v").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_spec("hello\ntree: 2").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_spec("tree: 2\nmu: 1\nphi: len").unwrap_err();
        assert!(e.message.contains("expected vertex"));
    }
}
