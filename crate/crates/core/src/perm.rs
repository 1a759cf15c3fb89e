//! Permutations of `{0, .., n-1}` with 1-based cycle notation for I/O.
//!
//! Composition follows the left-action convention used throughout the crate:
//! `a.compose(&b)` is the permutation `x -> a(b(x))`.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest supported degree; points are stored as `u16`.
pub const MAX_DEGREE: usize = u16::MAX as usize;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u16]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} exceeds {MAX_DEGREE}");
        Permutation {
            images: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::domain(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] {
                return Err(Error::structure(
                    None,
                    format!("images {images:?} do not form a permutation"),
                ));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&i| i as u16).collect(),
        })
    }

    pub(crate) fn from_raw(images: Vec<u16>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v as usize)
        });
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// Builds a permutation of the given degree from disjoint cycles of
    /// 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (pos, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::domain(format!(
                        "point {} exceeds degree {degree}",
                        p + 1
                    )));
                }
                if touched[p] {
                    return Err(Error::structure(
                        None,
                        format!("point {} occurs twice in cycle notation", p + 1),
                    ));
                }
                touched[p] = true;
                images[p] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Permutation::from_images(&images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    #[inline]
    pub fn images(&self) -> &[u16] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in compose");
        Permutation {
            images: other
                .images
                .iter()
                .map(|&i| self.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img as usize] = i as u16;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| i == v as usize)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &v)| i != v as usize)
            .map(|(i, _)| i)
    }

    pub fn pow(&self, mut exp: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            exp >>= 1;
        }
        acc
    }

    /// The commutator `a^-1 b^-1 a b`.
    pub fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
        a.inverse().compose(&b.inverse()).compose(a).compose(b)
    }

    /// `h ∘ self ∘ h^-1`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        h.compose(self).compose(&h.inverse())
    }

    /// Nontrivial cycles in order of their smallest point, each starting at
    /// its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.image(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// Parses 1-based cycle notation such as `(1,9)(2,10)` or `()`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        parse_cycles_at(text, degree).map_err(|(col, msg)| Error::parse(1, col, msg))
    }
}

/// Cycle-notation parser reporting a 1-based column on failure, so that file
/// readers can attach their own line number.
pub(crate) fn parse_cycles_at(
    text: &str,
    degree: usize,
) -> std::result::Result<Permutation, (usize, String)> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && (bytes[*pos] as char).is_ascii_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err((1, "empty permutation; use () for the identity".into()));
    }
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err((
                pos + 1,
                format!("expected '(', found '{}'", bytes[pos] as char),
            ));
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                return Err((pos + 1, "unterminated cycle".into()));
            }
            if bytes[pos] == b')' {
                pos += 1;
                break;
            }
            if !cycle.is_empty() {
                if bytes[pos] != b',' {
                    return Err((
                        pos + 1,
                        format!("expected ',' or ')', found '{}'", bytes[pos] as char),
                    ));
                }
                pos += 1;
                skip_ws(&mut pos);
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err((start + 1, "expected a point number".into()));
            }
            let point: usize = text[start..pos]
                .parse()
                .map_err(|_| (start + 1, "point number out of range".to_string()))?;
            if point == 0 || point > degree {
                return Err((start + 1, format!("point {point} outside 1..={degree}")));
            }
            cycle.push(point - 1);
        }
        if cycle.len() == 1 {
            cycle.clear();
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        skip_ws(&mut pos);
    }
    Permutation::from_cycles(degree, &cycles).map_err(|e| (1, e.to_string()))
}

/// Serializes as 1-based cycle notation.
impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_prints_as_empty_cycle() {
        assert_eq!(Permutation::identity(5).to_string(), "()");
        assert_eq!(
            Permutation::parse_cycles("()", 5).unwrap(),
            Permutation::identity(5)
        );
    }

    #[test]
    fn parse_and_print() {
        let p = Permutation::parse_cycles("(1,9)(2,10)", 16).unwrap();
        assert_eq!(p.image(0), 8);
        assert_eq!(p.image(9), 1);
        assert_eq!(p.to_string(), "(1,9)(2,10)");
        let q = Permutation::parse_cycles(" (1, 10 ,2,9) (3,11)", 16).unwrap();
        assert_eq!(q.to_string(), "(1,10,2,9)(3,11)");
        assert_eq!(q.order(), 4);
    }

    #[test]
    fn parse_errors_report_columns() {
        let err = Permutation::parse_cycles("(1,2)(3;4)", 8).unwrap_err();
        assert_eq!(err, Error::parse(1, 8, "expected ',' or ')', found ';'"));
        assert!(matches!(
            Permutation::parse_cycles("(1,17)", 16),
            Err(Error::Parse { column: 4, .. })
        ));
        assert!(Permutation::parse_cycles("(1,2)(2,3)", 4).is_err());
        assert!(Permutation::parse_cycles("", 4).is_err());
    }

    #[test]
    fn left_action_composition() {
        let a = Permutation::parse_cycles("(1,2)", 3).unwrap();
        let b = Permutation::parse_cycles("(2,3)", 3).unwrap();
        // a(b(1)) = a(1) = 2 ; a(b(2)) = a(3) = 3 ; a(b(3)) = a(2) = 1
        assert_eq!(a.compose(&b).to_string(), "(1,2,3)");
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.compose(&b).pow(3), Permutation::identity(3));
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(&[0, 0, 1]).is_err());
        assert!(Permutation::from_images(&[0, 3, 1]).is_err());
    }
}
