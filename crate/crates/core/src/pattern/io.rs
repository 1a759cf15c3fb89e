//! Pattern-group files.
//!
//! ```text
//! # comment
//! 2 2            # k d
//! generators:    # portrait blocks, each a `k d` line and one line per vertex
//! 2 2
//! 1 0
//! 0 1
//! 0 1
//! ```
//!
//! or, with leaf permutations in 1-based cycle notation:
//!
//! ```text
//! 2 2
//! leafperms:
//! (1,3)(2,4)
//! ```

use std::fmt::Write as _;

use super::PatternGroup;
use crate::error::{Error, Result};
use crate::perm::parse_cycles_at;
use crate::tree::{parse_usizes, strip_comment, Alphabet, LeafNumbering, TreeAutomorphism};

enum Section {
    None,
    Portraits,
    LeafPerms,
}

/// Parses a pattern-group file and closes its generators.
pub fn parse_pattern_text(text: &str, numbering: LeafNumbering) -> Result<PatternGroup> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "missing 'k d' header"))?;
    let (alphabet, depth) = parse_header(hline, header)?;
    if depth == 0 {
        return Err(Error::parse(hline, 1, "pattern depth must be at least 1"));
    }
    let vertex_lines = alphabet.level_offset(depth);
    let degree = alphabet.level_size(depth);

    let mut section = Section::None;
    let mut gens = Vec::new();
    let mut lines = lines.peekable();
    while let Some((ln, line)) = lines.next() {
        let trimmed = line.trim();
        match trimmed {
            "generators:" => {
                section = Section::Portraits;
                continue;
            }
            "leafperms:" => {
                section = Section::LeafPerms;
                continue;
            }
            _ => {}
        }
        match section {
            Section::None => {
                return Err(Error::parse(
                    ln,
                    column_of(line, trimmed),
                    "expected 'generators:' or 'leafperms:'",
                ))
            }
            Section::LeafPerms => {
                let offset = column_of(line, trimmed) - 1;
                let p = parse_cycles_at(trimmed, degree)
                    .map_err(|(col, msg)| Error::parse(ln, col + offset, msg))?;
                let g =
                    TreeAutomorphism::from_leaf_permutation_with(&p, alphabet, depth, numbering)
                        .map_err(|e| Error::parse(ln, 1, e.to_string()))?;
                gens.push(g);
            }
            Section::Portraits => {
                let (k2, d2) = parse_header(ln, line)?;
                if k2 != alphabet || d2 != depth {
                    return Err(Error::parse(
                        ln,
                        1,
                        format!("block header '{k2} {d2}' does not match the file header '{alphabet} {depth}'"),
                    ));
                }
                let mut block = format!("{alphabet} {depth}\n");
                let mut last = ln;
                for i in 0..vertex_lines {
                    let (vl, vline) = lines.next().ok_or_else(|| {
                        Error::parse(
                            last,
                            1,
                            format!(
                                "portrait block truncated after {i} of {vertex_lines} vertex lines"
                            ),
                        )
                    })?;
                    parse_usizes(vl, vline)?;
                    last = vl;
                    block.push_str(vline);
                    block.push('\n');
                }
                let g = TreeAutomorphism::parse_portrait_text(&block).map_err(|e| match e {
                    Error::Parse {
                        line,
                        column,
                        message,
                    } => Error::parse(ln + line - 1, column, message),
                    other => Error::parse(ln, 1, other.to_string()),
                })?;
                gens.push(g);
            }
        }
    }
    PatternGroup::generate(alphabet, depth, gens)
}

fn parse_header(ln: usize, line: &str) -> Result<(Alphabet, usize)> {
    let nums = parse_usizes(ln, line)?;
    if nums.len() != 2 {
        return Err(Error::parse(ln, 1, "header must be 'k d'"));
    }
    let alphabet = Alphabet::new(nums[0]).map_err(|e| Error::parse(ln, 1, e.to_string()))?;
    Ok((alphabet, nums[1]))
}

fn column_of(line: &str, trimmed: &str) -> usize {
    line.find(trimmed).unwrap_or(0) + 1
}

/// File text listing the stored generators as leaf permutations.
pub fn to_leafperm_text(p: &PatternGroup, numbering: LeafNumbering) -> String {
    let mut s = format!(
        "# |P| = {}, leaf numbering {numbering}\n{} {}\nleafperms:\n",
        p.order(),
        p.alphabet(),
        p.depth()
    );
    for g in p.generators() {
        let _ = writeln!(s, "{}", g.to_leaf_permutation_with(numbering));
    }
    s
}

/// File text listing the stored generators as portrait blocks.
pub fn to_portrait_text(p: &PatternGroup) -> String {
    let mut s = format!(
        "# |P| = {}\n{} {}\ngenerators:\n",
        p.order(),
        p.alphabet(),
        p.depth()
    );
    for g in p.generators() {
        s.push_str(&g.to_portrait_text());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn portrait_blocks() {
        let text = "2 2\ngenerators:\n2 2\n1 0\n0 1\n0 1\n2 2 # second\n0 1\n1 0\n0 1\n";
        let p = parse_pattern_text(text, LeafNumbering::Lex).unwrap();
        assert_eq!(p.order(), 8);
    }

    #[test]
    fn leafperms_and_round_trip() {
        let text = "# Aut X^[2]\n2 2\nleafperms:\n(1,3)(2,4)\n(1,2)\n";
        let p = parse_pattern_text(text, LeafNumbering::Lex).unwrap();
        assert_eq!(p.order(), 8);
        for numbering in [LeafNumbering::Lex, LeafNumbering::Reversed] {
            let again = parse_pattern_text(&to_leafperm_text(&p, numbering), numbering).unwrap();
            assert_eq!(again, p);
        }
        assert_eq!(
            parse_pattern_text(&to_portrait_text(&p), LeafNumbering::Lex).unwrap(),
            p
        );
    }

    #[test]
    fn empty_generator_list_is_trivial() {
        let p = parse_pattern_text("2 3\nleafperms:\n", LeafNumbering::Lex).unwrap();
        assert!(p.is_trivial());
        assert_eq!(p.depth(), 3);
    }

    #[test]
    fn errors_carry_positions() {
        let err =
            parse_pattern_text("2 2\nleafperms:\n  (1,3)(2,x)\n", LeafNumbering::Lex).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Parse {
                    line: 3,
                    column: 11,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = parse_pattern_text("2 2\n(1,2)\n", LeafNumbering::Lex).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Parse {
                    line: 2,
                    column: 1,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = parse_pattern_text("2 2\nleafperms:\n(1,2,3)\n", LeafNumbering::Lex).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = parse_pattern_text("2 2\ngenerators:\n2 2\n1 0\n0 1\n", LeafNumbering::Lex)
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
        let err = parse_pattern_text("2 2\ngenerators:\n2 2\n1 0\n0 0\n0 1\n", LeafNumbering::Lex)
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
    }
}
