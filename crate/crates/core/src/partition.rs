//! Set partitions of `{0..n-1}` stored as restricted growth strings.
//!
//! Blocks are numbered by increasing minimum, which is the canonical block
//! order used everywhere else in the crate (quotients, ψ-products, decorations).

use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    rgs: Vec<u8>,
}

impl Partition {
    /// Builds a partition from arbitrary block labels, renumbering blocks by minimum.
    pub fn from_labels<T: PartialEq + Copy>(labels: &[T]) -> Self {
        let mut seen: Vec<T> = Vec::new();
        let rgs = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(p) => p as u8,
                None => {
                    seen.push(*l);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        Partition { rgs }
    }

    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self> {
        let mut next = 0u8;
        for &b in &rgs {
            if b > next {
                return Err(Error::InvalidPartition(format!("{rgs:?} is not a growth string")));
            }
            if b == next {
                next += 1;
            }
        }
        if rgs.is_empty() {
            return Err(Error::InvalidPartition("empty ground set".into()));
        }
        Ok(Partition { rgs })
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut lab = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &i in block {
                if i >= n || lab[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("bad element {i}")));
                }
                lab[i] = b;
            }
        }
        if n == 0 || lab.contains(&usize::MAX) {
            return Err(Error::InvalidPartition("blocks do not cover the ground set".into()));
        }
        Ok(Self::from_labels(&lab))
    }

    pub fn one_block(n: usize) -> Self {
        Partition { rgs: vec![0; n] }
    }

    pub fn discrete(n: usize) -> Self {
        Partition { rgs: (0..n as u8).collect() }
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn num_blocks(&self) -> usize {
        self.rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.rgs[i] as usize
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(i);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_blocks()];
        for &b in &self.rgs {
            out[b as usize] += 1;
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.n()
    }

    pub fn is_one_block(&self) -> bool {
        self.num_blocks() == 1
    }

    /// `self ≤ other`: `self` is obtained by merging blocks of `other`.
    pub fn le(&self, other: &Partition) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let mut img = vec![u8::MAX; other.num_blocks()];
        for (i, &b) in other.rgs.iter().enumerate() {
            let s = self.rgs[i];
            if img[b as usize] == u8::MAX {
                img[b as usize] = s;
            } else if img[b as usize] != s {
                return false;
            }
        }
        true
    }

    /// The quotient `self/pi` for `self ≤ pi`, a partition of the blocks of `pi`.
    pub fn quotient(&self, pi: &Partition) -> Partition {
        debug_assert!(self.le(pi));
        let labels: Vec<u8> = pi.blocks().iter().map(|b| self.rgs[b[0]]).collect();
        Partition::from_labels(&labels)
    }

    /// The restriction to a sorted subset, transported order-preservingly to `{0..|t|-1}`.
    pub fn restrict(&self, t: &[usize]) -> Partition {
        let labels: Vec<u8> = t.iter().map(|&i| self.rgs[i]).collect();
        Partition::from_labels(&labels)
    }

    /// Image under the bijection `i ↦ sigma[i]`.
    pub fn relabel(&self, sigma: &[usize]) -> Partition {
        let mut lab = vec![0u8; self.n()];
        for (i, &b) in self.rgs.iter().enumerate() {
            lab[sigma[i]] = b;
        }
        Partition::from_labels(&lab)
    }

    /// For the bijection `sigma`, the map sending block `i` of `self` to the
    /// index of its image block in `self.relabel(sigma)`.
    pub fn block_map(&self, sigma: &[usize]) -> Vec<usize> {
        let image = self.relabel(sigma);
        self.blocks().iter().map(|b| image.block_of(sigma[b[0]])).collect()
    }

    /// All partitions of `{0..n-1}` in lexicographic growth-string order.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut cur = vec![0u8; n];
        fn rec(i: usize, max: u8, cur: &mut Vec<u8>, out: &mut Vec<Partition>) {
            if i == cur.len() {
                out.push(Partition { rgs: cur.clone() });
                return;
            }
            for b in 0..=max + 1 {
                cur[i] = b;
                rec(i + 1, max.max(b), cur, out);
            }
        }
        rec(1, 0, &mut cur, &mut out);
        out
    }

    /// Partitions of a sorted subset (as lists of blocks of original elements).
    pub fn splits_in_two(block: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
        let k = block.len();
        let mut out = Vec::new();
        if k < 2 {
            return out;
        }
        // the first element always goes left, so each unordered split appears once
        for mask in 0..(1u64 << (k - 1)) {
            if mask == (1u64 << (k - 1)) - 1 {
                continue;
            }
            let mut left = vec![block[0]];
            let mut right = Vec::new();
            for (j, &e) in block.iter().enumerate().skip(1) {
                if mask >> (j - 1) & 1 == 1 {
                    left.push(e);
                } else {
                    right.push(e);
                }
            }
            out.push((left, right));
        }
        out
    }

    pub fn is_noncrossing(&self) -> bool {
        let n = self.n();
        for a in 0..n {
            for b in a + 1..n {
                if self.rgs[a] != self.rgs[b] {
                    continue;
                }
                for c in a + 1..b {
                    for d in b + 1..n {
                        if self.rgs[c] == self.rgs[d] && self.rgs[c] != self.rgs[a] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Label with 1-based elements, e.g. `1|23`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() > 9 { "," } else { "" };
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(sep))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// All permutations of `{0..n-1}` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn invert(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

/// Order-preserving normalisation of `sigma` restricted to the sorted set `t`:
/// position `p` of `t` goes to the rank of `sigma[t[p]]` inside `sigma(t)`.
pub fn restrict_perm(sigma: &[usize], t: &[usize]) -> Vec<usize> {
    let mut img: Vec<usize> = t.iter().map(|&i| sigma[i]).collect();
    let orig = img.clone();
    img.sort_unstable();
    orig.iter().map(|v| img.binary_search(v).unwrap()).collect()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let bell = [1, 2, 5, 15, 52, 203];
        for (n, &b) in (1..=6).zip(bell.iter()) {
            assert_eq!(Partition::all(n).len(), b);
        }
    }

    #[test]
    fn quotient_and_restrict() {
        let pi = Partition::from_blocks(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        let top = Partition::one_block(5);
        assert_eq!(top.quotient(&pi), Partition::one_block(2));
        let beta = Partition::discrete(3);
        let p = Partition::from_blocks(3, &[vec![0], vec![1, 2]]).unwrap();
        assert!(p.le(&beta));
        assert_eq!(beta.restrict(&[1, 2]), Partition::discrete(2));
        assert_eq!(p.to_string(), "1|23");
    }

    #[test]
    fn crossing() {
        let p = Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert!(!p.is_noncrossing());
        let q = Partition::from_blocks(4, &[vec![0, 3], vec![1, 2]]).unwrap();
        assert!(q.is_noncrossing());
    }

    #[test]
    fn perms() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(restrict_perm(&[2, 0, 1], &[0, 2]), vec![1, 0]);
    }
}
