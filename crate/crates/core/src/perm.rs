//! Permutations of `{0, .., n-1}` acting on the right.
//!
//! `x^(p * q) = (x^p)^q`, so `p.then(&q)` applies `p` first.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A bijection of `{0, .., degree-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n {
                return Err(Error::PointOutOfRange {
                    point: x,
                    degree: n,
                });
            }
            if seen[x] {
                return Err(Error::RepeatedPoint { point: x });
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Caller guarantees `images` is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
                if seen[p] {
                    return Err(Error::RepeatedPoint { point: p });
                }
                seen[p] = true;
                images[p] = cycle[(i + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    /// In-place `self = self * other`.
    pub fn then_assign(&mut self, other: &Permutation) {
        for x in self.images.iter_mut() {
            *x = other.images[*x as usize];
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        // x^(g^-1 p g): take y = x^(g^-1); result maps y^g -> (y^p)^g.
        let mut out = vec![0u32; self.degree()];
        for y in 0..self.degree() {
            out[g.images[y] as usize] = g.images[self.images[y] as usize];
        }
        Permutation { images: out }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc.then_assign(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Element order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles().iter().fold(1u64, |acc, c| {
            acc / gcd(acc, c.len() as u64) * c.len() as u64
        })
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i != x as usize)
            .map(|(i, _)| i)
    }

    /// Parses cycle notation `(0,1,2)(3,4)` / `()` or image notation `[1,2,0]`.
    pub fn parse(text: &str, degree: usize) -> Result<Permutation> {
        let err = |reason: &str| Error::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        if let Some(body) = s.strip_prefix('[') {
            let body = body.strip_suffix(']').ok_or_else(|| err("missing ']'"))?;
            let images = if body.is_empty() {
                Vec::new()
            } else {
                body.split(',')
                    .map(|t| t.parse::<u32>().map_err(|_| err("bad point")))
                    .collect::<Result<Vec<_>>>()?
            };
            if images.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: images.len(),
                });
            }
            return Permutation::from_images(images);
        }
        let mut cycles = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
            let close = inner.find(')').ok_or_else(|| err("unclosed cycle"))?;
            let body = &inner[..close];
            rest = &inner[close + 1..];
            if body.is_empty() {
                continue;
            }
            let cycle = body
                .split(',')
                .map(|t| t.parse::<usize>().map_err(|_| err("bad point")))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
        }
        Permutation::from_cycles(degree, &cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

/// Parses a group file: first line `degree <n>`, then one permutation per line.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_group_file(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse {
        text: String::new(),
        reason: "missing degree line".into(),
    })?;
    let degree = header
        .strip_prefix("degree")
        .and_then(|d| d.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::Parse {
            text: header.to_string(),
            reason: "expected `degree <n>`".into(),
        })?;
    let gens = lines
        .map(|l| Permutation::parse(l, degree))
        .collect::<Result<Vec<_>>>()?;
    Ok((degree, gens))
}

/// Inverse of [`parse_group_file`].
pub fn format_group_file(degree: usize, gens: &[Permutation]) -> String {
    let mut s = format!("degree {degree}\n");
    for g in gens {
        s.push_str(&g.to_string());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_eleven_cycle() {
        let p = Permutation::parse("(0,1,2,3,4,5,6,7,8,9,10)", 11).unwrap();
        assert_eq!(p.order(), 11);
        assert_eq!(p.apply(10), 0);
        assert_eq!(p.cycles().len(), 1);
    }

    #[test]
    fn parse_identity() {
        let p = Permutation::parse("()", 11).unwrap();
        assert!(p.is_identity());
        assert_eq!(p.degree(), 11);
        assert_eq!(p.to_string(), "()");
    }

    #[test]
    fn parse_order_four() {
        let p = Permutation::parse("(2,6,10,7)(3,9,4,5)", 11).unwrap();
        assert_eq!(p.order(), 4);
    }

    #[test]
    fn parse_image_notation() {
        let p = Permutation::parse("[1, 2, 0, 3]", 4).unwrap();
        assert_eq!(p.to_string(), "(0,1,2)");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Permutation::parse("(0,1", 3),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Permutation::parse("(0,1,0)", 3),
            Err(Error::RepeatedPoint { point: 0 })
        ));
        assert!(matches!(
            Permutation::parse("(0,5)", 3),
            Err(Error::PointOutOfRange { point: 5, .. })
        ));
        assert!(matches!(
            Permutation::parse("(0)(0,1)", 3),
            Err(Error::RepeatedPoint { .. })
        ));
        assert!(Permutation::parse("(a,b)", 3).is_err());
        assert!(Permutation::parse("[0,0,1]", 3).is_err());
    }

    #[test]
    fn conjugation_matches_product() {
        let p = Permutation::parse("(0,1,2)(3,4)", 6).unwrap();
        let g = Permutation::parse("(0,5,3)", 6).unwrap();
        let direct = &(&g.inverse() * &p) * &g;
        assert_eq!(p.conjugate_by(&g), direct);
    }

    #[test]
    fn group_file_round_trip() {
        let g = vec![
            Permutation::parse("(0,1,2,3,4,5,6,7,8,9,10)", 11).unwrap(),
            Permutation::parse("(2,6,10,7)(3,9,4,5)", 11).unwrap(),
        ];
        let text = format_group_file(11, &g);
        let (d, back) = parse_group_file(&text).unwrap();
        assert_eq!(d, 11);
        assert_eq!(back, g);
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(p in arb_perm(13)) {
            prop_assert!(p.then(&p.inverse()).is_identity());
            prop_assert!(p.inverse().then(&p).is_identity());
        }

        #[test]
        fn format_parse_round_trip(p in arb_perm(17)) {
            let back = Permutation::parse(&p.to_string(), 17).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn pow_order_is_identity(p in arb_perm(12)) {
            prop_assert!(p.pow(p.order()).is_identity());
        }
    }
}
