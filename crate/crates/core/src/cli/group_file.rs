//! Plain-text group definitions.
//!
//! ```text
//! # projective line
//! 1 1
//! 1 ; 0
//! x ; 0
//! x^2 ; 0
//! ```
//!
//! The header gives `p q`; each following line is one generator, its `p`
//! independent components then its `q` dependent components separated by
//! `;`. Blank lines and `#` comments are ignored.

use crate::algebra::RationalExpr;
use crate::calculus::VectorField;
use crate::invariants::LieAlgebraBasis;
use crate::jetspace::JetSpace;

use super::parse::{parse_expr_at, ParseError, Pos};

/// One component source with its position in the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub text: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFile {
    pub p: usize,
    pub q: usize,
    pub generators: Vec<Vec<Component>>,
}

fn error(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<GroupFile, ParseError> {
        let mut header: Option<(usize, usize)> = None;
        let mut generators = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some((p, q)) = header else {
                let fields: Vec<&str> = content.split_whitespace().collect();
                let dims: Option<Vec<usize>> = fields.iter().map(|f| f.parse().ok()).collect();
                match dims.as_deref() {
                    Some(&[p, q]) if p >= 1 && q >= 1 => header = Some((p, q)),
                    _ => return Err(error(line, 1, "expected header 'p q' with p, q >= 1")),
                }
                continue;
            };
            let mut components = Vec::new();
            let mut column = 1;
            for piece in content.split(';') {
                let lead = piece.len() - piece.trim_start().len();
                components.push(Component {
                    text: piece.trim().to_string(),
                    pos: Pos {
                        line,
                        column: column + lead,
                    },
                });
                column += piece.chars().count() + 1;
            }
            if components.len() != p + q {
                return Err(error(
                    line,
                    1,
                    format!("expected {} ';'-separated components, found {}", p + q, components.len()),
                ));
            }
            generators.push(components);
        }
        let (p, q) = header.ok_or_else(|| error(1, 1, "missing header 'p q'"))?;
        Ok(GroupFile { p, q, generators })
    }

    pub fn to_basis(&self, name: &str) -> Result<LieAlgebraBasis, ParseError> {
        let base = JetSpace::new(self.p, self.q, 0);
        let mut fields = Vec::with_capacity(self.generators.len());
        for components in &self.generators {
            let exprs: Vec<RationalExpr> = components
                .iter()
                .map(|c| parse_expr_at(&c.text, &base, c.pos))
                .collect::<Result<_, _>>()?;
            let (xi, phi) = exprs.split_at(self.p);
            let field = VectorField::new(self.p, self.q, xi.to_vec(), phi.to_vec())
                .map_err(|e| error(components[0].pos.line, 1, e.to_string()))?;
            fields.push(field);
        }
        LieAlgebraBasis::new(name, self.p, self.q, fields).map_err(|e| error(1, 1, e.to_string()))
    }

    /// Renders a basis in this format.
    pub fn render(basis: &LieAlgebraBasis) -> String {
        let base = basis.space(0);
        let mut out = format!("{} {}\n", basis.p(), basis.q());
        for g in basis.generators() {
            let parts: Vec<String> = g
                .xi()
                .iter()
                .chain(g.phi())
                .map(|e| e.display_in(&base).to_string())
                .collect();
            out.push_str(&parts.join(" ; "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sl2_text() {
        let text = "# projective line\n1 1\n1 ; 0\n\nx ; 0\nx^2 ; 0   # third\n";
        let basis = GroupFile::parse(text).unwrap().to_basis("file").unwrap();
        let preset = LieAlgebraBasis::sl2();
        assert_eq!(basis.generators(), preset.generators());
    }

    #[test]
    fn presets_round_trip_through_text() {
        for preset in [LieAlgebraBasis::sl2(), LieAlgebraBasis::sl3()] {
            let text = GroupFile::render(&preset);
            let back = GroupFile::parse(&text).unwrap().to_basis(preset.name()).unwrap();
            assert_eq!(back.generators(), preset.generators());
        }
    }

    #[test]
    fn empty_algebra() {
        let basis = GroupFile::parse("1 1\n").unwrap().to_basis("trivial").unwrap();
        assert_eq!(basis.group_dim(), 0);
    }

    #[test]
    fn errors_point_at_the_offending_component() {
        let err = GroupFile::parse("1 1\nx ; 0\nx^2 ; u1\n").unwrap().to_basis("g").unwrap_err();
        assert_eq!((err.line, err.column), (3, 7));
        let err = GroupFile::parse("1 1\nx ; 0 ; 1\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = GroupFile::parse("one one\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(GroupFile::parse("# nothing\n").is_err());
        let err = GroupFile::parse("1 1\nx ; (u\n").unwrap().to_basis("g").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
