//! Set partitions of `{1..n}`: the index set of admissible subgroups of a
//! power of a centerless simple group.

use crate::{Error, Result};

const MAX_N: usize = 8;

/// Blocks are sorted internally and by least element, so equal partitions
/// compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidConfig("empty partition block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= n || seen[i] {
                    return Err(Error::InvalidConfig(format!(
                        "partition blocks must disjointly cover 0..{n}"
                    )));
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidConfig("partition does not cover 0..n".into()));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { blocks })
    }

    /// Partition of coordinate indices by equal values.
    pub fn from_equality_pattern<T: PartialEq>(coords: &[T]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, value) in coords.iter().enumerate() {
            match blocks.iter_mut().find(|b| coords[b[0]] == *value) {
                Some(block) => block.push(i),
                None => blocks.push(vec![i]),
            }
        }
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of each coordinate.
    pub fn assignment(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                out[i] = b;
            }
        }
        out
    }
}

/// All set partitions of `{1..n}` (as 0-based index blocks), one per
/// admissible subgroup of `H^n`; enumerated through restricted growth
/// strings, so the count is the Bell number.
pub fn admissible_subgroups(n: usize) -> Result<Vec<Partition>> {
    if n < 1 || n > MAX_N {
        return Err(Error::InvalidConfig(format!(
            "partition size {n} outside supported range 1..={MAX_N}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().unwrap() + 1;
        let mut partition = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            partition[b].push(i);
        }
        out.push(Partition { blocks: partition });
        // next restricted growth string: a[i] <= max(a[..i]) + 1
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(out);
            }
            i -= 1;
            let cap = rgs[..i].iter().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for slot in rgs[i + 1..].iter_mut() {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

pub fn bell(n: usize) -> u64 {
    const BELL: [u64; 9] = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
    BELL[n]
}
