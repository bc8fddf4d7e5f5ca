use super::Poset;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which endpoint constraints a chain `x₀ < ⋯ < xₙ` must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum ChainVariant {
    /// All chains.
    Full,
    /// `x₀` minimal and `xₙ` maximal.
    MinMax,
    /// `x₀` minimal.
    Min,
    /// `xₙ` maximal.
    Max,
}

impl ChainVariant {
    pub fn start_min(self) -> bool {
        matches!(self, ChainVariant::MinMax | ChainVariant::Min)
    }

    pub fn end_max(self) -> bool {
        matches!(self, ChainVariant::MinMax | ChainVariant::Max)
    }

    pub fn valid_start(self, p: &Poset, x: usize) -> bool {
        !self.start_min() || p.is_min(x)
    }

    pub fn valid_end(self, p: &Poset, x: usize) -> bool {
        !self.end_max() || p.is_max(x)
    }

    pub fn name(self) -> &'static str {
        match self {
            ChainVariant::Full => "full",
            ChainVariant::MinMax => "minmax",
            ChainVariant::Min => "min",
            ChainVariant::Max => "max",
        }
    }
}

impl fmt::Display for ChainVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChainVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(ChainVariant::Full),
            "minmax" => Ok(ChainVariant::MinMax),
            "min" => Ok(ChainVariant::Min),
            "max" => Ok(ChainVariant::Max),
            _ => Err(format!("unknown variant `{s}` (expected full, minmax, min, max)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    pub variant: ChainVariant,
    pub degree: usize,
}

/// Length of the longest chain starting at each element (ignoring constraints).
fn heights_up(p: &Poset) -> Vec<usize> {
    let mut h = vec![0usize; p.len()];
    for &x in p.topological_order().iter().rev() {
        let x = x as usize;
        h[x] = p.upper_covers(x).iter().map(|&y| h[y as usize] + 1).max().unwrap_or(0);
    }
    h
}

/// Longest chain length among chains satisfying the variant, or `None` if there are none.
pub fn longest_chain(p: &Poset, variant: ChainVariant) -> Option<usize> {
    // best[x] = longest valid-start chain ending at x
    let mut best: Vec<Option<usize>> = vec![None; p.len()];
    for &y in p.topological_order() {
        let y = y as usize;
        let mut b = variant.valid_start(p, y).then_some(0);
        for &x in p.lower_covers(y) {
            if let Some(v) = best[x as usize] {
                b = Some(b.map_or(v + 1, |c: usize| c.max(v + 1)));
            }
        }
        best[y] = b;
    }
    (0..p.len()).filter(|&y| variant.valid_end(p, y)).filter_map(|y| best[y]).max()
}

/// All strict chains of the given degree satisfying the variant, in
/// lexicographic order of their index sequences.
pub fn enumerate_chains(p: &Poset, spec: ChainSpec) -> Vec<Vec<u32>> {
    let h = heights_up(p);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(spec.degree + 1);
    fn rec(
        p: &Poset,
        spec: ChainSpec,
        h: &[usize],
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let x = *cur.last().unwrap() as usize;
        let steps = cur.len() - 1;
        if steps == spec.degree {
            if spec.variant.valid_end(p, x) {
                out.push(cur.clone());
            }
            return;
        }
        for &y in p.above(x) {
            if h[y as usize] + steps + 1 >= spec.degree {
                cur.push(y);
                rec(p, spec, h, cur, out);
                cur.pop();
            }
        }
    }
    for x in 0..p.len() {
        if spec.variant.valid_start(p, x) && h[x] >= spec.degree {
            cur.clear();
            cur.push(x as u32);
            rec(p, spec, &h, &mut cur, &mut out);
        }
    }
    out
}

/// Number of chains of each degree satisfying the variant, by dynamic programming.
pub fn chain_counts(p: &Poset, variant: ChainVariant) -> Vec<BigInt> {
    let m = p.len();
    let mut cur: Vec<BigInt> =
        (0..m).map(|y| if variant.valid_start(p, y) { BigInt::one() } else { BigInt::zero() }).collect();
    let mut out = Vec::new();
    loop {
        let total: BigInt =
            (0..m).filter(|&y| variant.valid_end(p, y)).map(|y| &cur[y]).sum();
        if cur.iter().all(|c| c.is_zero()) {
            break;
        }
        out.push(total);
        let mut next = vec![BigInt::zero(); m];
        for &y in p.topological_order() {
            let y = y as usize;
            let mut s = BigInt::zero();
            for &x in p.below(y) {
                s += &cur[x as usize];
            }
            next[y] = s;
        }
        cur = next;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}
