//! Permutations on finite point sets: arithmetic, cycle structure, parsing
//! and printing.
//!
//! Composition is a right action throughout the crate: `x^(g*h) = (x^g)^h`,
//! i.e. [`Permutation::compose`] applies the left factor first. Conjugation
//! is `g^h = h^-1 * g * h`. Points are 0-based internally and 1-based in all
//! text I/O.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1} (embed to a common degree first)")]
    DegreeMismatch(usize, usize),
    #[error("images are not a bijection on 0..{degree}: point {point} duplicated or out of range")]
    NotBijective { degree: usize, point: u32 },
    #[error("malformed cycle text at byte {0}")]
    Malformed(usize),
    #[error("point {0} appears in more than one cycle")]
    OverlappingCycles(u32),
    #[error("point {0} out of range for degree {1}")]
    PointOutOfRange(u32, usize),
    #[error("cannot shrink degree: {0} < {1}")]
    BadEmbed(usize, usize),
}

/// A permutation of the points `0..degree`, stored by its image table.
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

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if (y as usize) >= n || seen[y as usize] {
                return Err(PermError::NotBijective {
                    degree: n,
                    point: y,
                });
            }
            seen[y as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn image(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i as u32 == y)
    }

    /// `self * other`: apply `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        let images = self
            .images
            .iter()
            .map(|&y| other.images[y as usize])
            .collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &y) in self.images.iter().enumerate() {
            images[y as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `g^h = h^-1 * g * h`, so that cycle entries are relabelled by `h`.
    pub fn conjugate(&self, h: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != h.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), h.degree()));
        }
        let mut images = vec![0u32; self.degree()];
        for (i, &y) in self.images.iter().enumerate() {
            images[h.images[i] as usize] = h.images[y as usize];
        }
        Ok(Permutation { images })
    }

    /// `k`-th power; `k` may be negative.
    pub fn power(&self, k: i64) -> Permutation {
        let n = self.degree();
        if n == 0 {
            return self.clone();
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(n);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq).expect("equal degree");
            }
            sq = sq.compose(&sq).expect("equal degree");
            e >>= 1;
        }
        acc
    }

    /// Least `n >= 1` with `g^n = identity`; the lcm of the cycle lengths.
    pub fn order(&self) -> u128 {
        let mut ord: u128 = 1;
        for cycle in self.cycles().cycles() {
            ord = num_integer::lcm(ord, cycle.len() as u128);
        }
        ord
    }

    /// Smallest moved point, if any.
    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &y)| *i as u32 != y)
            .map(|(i, _)| i as u32)
    }

    pub fn support_size(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &y)| *i as u32 != y)
            .count()
    }

    /// Pad with fixed points up to `new_degree`.
    pub fn embed(&self, new_degree: usize) -> Result<Permutation, PermError> {
        if new_degree < self.degree() {
            return Err(PermError::BadEmbed(new_degree, self.degree()));
        }
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..new_degree as u32);
        Ok(Permutation { images })
    }

    /// Copy of `self` acting on `offset..offset+degree` inside a larger set.
    pub fn shift(&self, offset: usize, new_degree: usize) -> Result<Permutation, PermError> {
        if offset + self.degree() > new_degree {
            return Err(PermError::BadEmbed(new_degree, offset + self.degree()));
        }
        let mut images: Vec<u32> = (0..new_degree as u32).collect();
        for (i, &y) in self.images.iter().enumerate() {
            images[offset + i] = y + offset as u32;
        }
        Ok(Permutation { images })
    }

    /// Disjoint union: `self` on the first block, `other` on the second.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.degree();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&y| y + n as u32));
        Permutation { images }
    }

    /// Restriction to an initial segment, which must be invariant.
    pub fn restrict(&self, new_degree: usize) -> Result<Permutation, PermError> {
        for p in new_degree..self.degree() {
            if self.images[p] as usize != p {
                return Err(PermError::PointOutOfRange(p as u32, new_degree));
            }
        }
        let images = self.images[..new_degree].to_vec();
        for &y in &images {
            if (y as usize) >= new_degree {
                return Err(PermError::PointOutOfRange(y, new_degree));
            }
        }
        Ok(Permutation { images })
    }

    pub fn cycles(&self) -> CycleForm {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            cycles.push(cycle);
        }
        CycleForm {
            degree: n,
            cycles,
        }
    }

    /// Parse disjoint-cycle text with an explicit degree.
    pub fn parse(text: &str, degree: usize) -> Result<Permutation, PermError> {
        let cycles = parse_cycle_text(text)?;
        CycleForm::new(cycles, degree)?.to_permutation()
    }

    /// Parse disjoint-cycle text, inferring the degree from the largest point.
    pub fn parse_min(text: &str) -> Result<Permutation, PermError> {
        let cycles = parse_cycle_text(text)?;
        let degree = cycles
            .iter()
            .flatten()
            .map(|&p| p as usize)
            .max()
            .unwrap_or(0);
        CycleForm::new(cycles, degree)?.to_permutation()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycles())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({}, deg {})", self.cycles(), self.degree())
    }
}

/// Disjoint-cycle form; fixed points omitted. Points are 0-based here, the
/// 1-based shift is confined to parsing and printing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleForm {
    degree: usize,
    cycles: Vec<Vec<u32>>,
}

impl CycleForm {
    /// Build from 1-based cycles as they appear in text.
    pub fn new(cycles_1based: Vec<Vec<u32>>, degree: usize) -> Result<CycleForm, PermError> {
        let mut seen = vec![false; degree];
        let mut cycles = Vec::new();
        for c in cycles_1based {
            if c.len() < 2 {
                continue;
            }
            let mut cycle = Vec::with_capacity(c.len());
            for &p1 in &c {
                if p1 == 0 {
                    return Err(PermError::Malformed(0));
                }
                let p = p1 - 1;
                if (p as usize) >= degree {
                    return Err(PermError::PointOutOfRange(p1, degree));
                }
                if seen[p as usize] {
                    return Err(PermError::OverlappingCycles(p1));
                }
                seen[p as usize] = true;
                cycle.push(p);
            }
            cycles.push(cycle);
        }
        Ok(CycleForm { degree, cycles })
    }

    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    pub fn to_permutation(&self) -> Result<Permutation, PermError> {
        let mut images: Vec<u32> = (0..self.degree as u32).collect();
        for cycle in &self.cycles {
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                images[from as usize] = to;
            }
        }
        Permutation::from_images(images)
    }
}

impl fmt::Display for CycleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Canonical print: each cycle rotated to start at its least point,
        // cycles sorted by first point.
        let mut cycles: Vec<Vec<u32>> = self
            .cycles
            .iter()
            .map(|c| {
                let k = c
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &p)| p)
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                let mut r = c[k..].to_vec();
                r.extend_from_slice(&c[..k]);
                r
            })
            .collect();
        cycles.sort_by_key(|c| c[0]);
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn parse_cycle_text(text: &str) -> Result<Vec<Vec<u32>>, PermError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut cycles = Vec::new();
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if b != b'(' {
            return Err(PermError::Malformed(i));
        }
        i += 1;
        let mut cycle = Vec::new();
        loop {
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            if i >= bytes.len() {
                return Err(PermError::Malformed(i));
            }
            if bytes[i] == b')' {
                i += 1;
                break;
            }
            if bytes[i] == b',' {
                i += 1;
                continue;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i == start {
                return Err(PermError::Malformed(i));
            }
            let v: u32 = text[start..i].parse().map_err(|_| PermError::Malformed(start))?;
            if v == 0 {
                return Err(PermError::Malformed(start));
            }
            cycle.push(v);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
    }
    Ok(cycles)
}
