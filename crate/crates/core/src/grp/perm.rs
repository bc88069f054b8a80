use std::fmt;

use crate::error::{Error, Result};

/// Largest degree accepted for user supplied permutations.
pub const MAX_INPUT_DEGREE: usize = 64;

/// A permutation of `{0..n}` stored by its image sequence.
///
/// Composition is right to left: `g.compose(h)` maps `i` to `g(h(i))`.
/// The derived ordering is lexicographic on the image sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Box<[u32]>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "images {:?} are not a bijection of 0..{}",
                    images, n
                )));
            }
            seen[x] = true;
        }
        Ok(Perm(images.into_boxed_slice()))
    }

    /// Builds a permutation from 1-based images as used in group files.
    pub fn from_one_based(images: &[usize]) -> Result<Perm> {
        if images.len() > MAX_INPUT_DEGREE {
            return Err(Error::InvalidPermutation(format!(
                "degree {} exceeds {}",
                images.len(),
                MAX_INPUT_DEGREE
            )));
        }
        let mut v = Vec::with_capacity(images.len());
        for &x in images {
            if x == 0 || x > images.len() {
                return Err(Error::InvalidPermutation(format!(
                    "image {} out of range 1..={}",
                    x,
                    images.len()
                )));
            }
            v.push((x - 1) as u32);
        }
        Perm::from_images(v)
    }

    /// Parses cycle notation such as `(1,2)(3,4)` or `(1 2 3)`; points are 1-based.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Perm> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidPermutation(format!("expected '(' in {text}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in {text}")))?;
            let body = &open[..close];
            let pts: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad point {s:?}")))
                })
                .collect::<Result<_>>()?;
            for (k, &a) in pts.iter().enumerate() {
                let b = pts[(k + 1) % pts.len()];
                if a == 0 || a > degree || b == 0 || b > degree {
                    return Err(Error::InvalidPermutation(format!("point out of range in {text}")));
                }
                images[a - 1] = (b - 1) as u32;
            }
            rest = open[close + 1..].trim_start();
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv.into_boxed_slice())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.0[start] as usize;
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x] as usize;
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_is_right_to_left() {
        let a = Perm::from_cycles(3, "(1,2)").unwrap();
        let b = Perm::from_cycles(3, "(2,3)").unwrap();
        // a(b(2)) = a(3) = 3
        assert_eq!(a.compose(&b).image(1), 2);
        assert_eq!(a.compose(&b).to_string(), "(1,2,3)");
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_one_based(&[1, 1, 3]).is_err());
        assert!(Perm::from_one_based(&[0, 1]).is_err());
        assert!(Perm::from_one_based(&[2, 1]).is_ok());
    }

    #[test]
    fn inverse_and_display() {
        let p = Perm::from_cycles(5, "(1 3 5)(2 4)").unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.to_string(), "(1,3,5)(2,4)");
        assert_eq!(Perm::identity(4).to_string(), "()");
    }
}
