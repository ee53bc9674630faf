use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{1..m}` stored 0-based by its image list.
///
/// Products compose left to right: `(a·b)(i) = b(a(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Self { images: (0..degree as u32).collect() }
    }

    /// From one-line notation with 1-based images.
    pub fn from_images(one_based: &[usize]) -> Result<Self> {
        let m = one_based.len();
        let mut seen = vec![false; m];
        let mut images = Vec::with_capacity(m);
        for &x in one_based {
            if x == 0 || x > m || seen[x - 1] {
                return Err(Error::Parse(format!("{one_based:?} is not a permutation")));
            }
            seen[x - 1] = true;
            images.push((x - 1) as u32);
        }
        Ok(Self { images })
    }

    /// From disjoint cycles written 1-based.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if x == 0 || x > degree || y == 0 || y > degree {
                    return Err(Error::Parse(format!("cycle point out of range 1..={degree}")));
                }
                images[x - 1] = (y - 1) as u32;
            }
        }
        let one_based: Vec<usize> = images.iter().map(|&i| i as usize + 1).collect();
        Self::from_images(&one_based)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "permutation degree mismatch");
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        let mut transpositions = 0;
        for start in 0..self.images.len() {
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    pub fn parse(text: &str) -> Result<Self> {
        let one_based = text
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad image `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if one_based.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        Self::from_images(&one_based)
    }
}

/// Space-separated 1-based image list.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}
