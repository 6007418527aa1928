//! Permutations on `0..degree`, written and parsed in 1-based cycle notation.
//!
//! Composition is left to right: `a.then(&b)` maps `x` to `b(a(x))`, matching
//! the right-action convention `x^(ab) = (x^a)^b`.

use std::fmt;

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, Error> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(Error::Permutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `degree` points from 1-based cycles.
    pub fn from_cycles(cycles: &[Vec<u32>], degree: usize) -> Result<Self, Error> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p as usize > degree {
                    return Err(Error::Permutation(format!("point {p} outside 1..={degree}")));
                }
                if std::mem::replace(&mut touched[p as usize - 1], true) {
                    return Err(Error::Permutation(format!("point {p} repeated")));
                }
                let next = cycle[(k + 1) % cycle.len()];
                images[p as usize - 1] = next - 1;
            }
        }
        Ok(Perm { images })
    }

    /// Parses `()`, `(1 2 3)(4 5)` or `(1,2,3)`.
    pub fn parse_cycles(text: &str) -> Result<Vec<Vec<u32>>, Error> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Permutation("empty permutation".into()));
        }
        let mut cycles = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::Permutation(format!("malformed cycle in '{t}'")));
            };
            let Some(end) = body.find(')') else {
                return Err(Error::Permutation(format!("unclosed cycle in '{t}'")));
            };
            let pts = body[..end]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>().map_err(|_| Error::Permutation(format!("bad point '{s}' in '{t}'"))))
                .collect::<Result<Vec<_>, _>>()?;
            if pts.len() > 1 {
                cycles.push(pts);
            }
            rest = body[end + 1..].trim_start();
        }
        Ok(cycles)
    }

    pub fn parse(text: &str, degree: usize) -> Result<Self, Error> {
        Self::from_cycles(&Self::parse_cycles(text)?, degree)
    }

    /// Largest point mentioned in a cycle string, 0 for the identity.
    pub fn max_point(text: &str) -> Result<usize, Error> {
        Ok(Self::parse_cycles(text)?.iter().flatten().copied().max().unwrap_or(0) as usize)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn pad_to(&self, degree: usize) -> Perm {
        let mut images = self.images.clone();
        images.extend(self.images.len() as u32..degree as u32);
        Perm { images }
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32 + 1);
                x = self.images[x] as usize;
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
            let body: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
