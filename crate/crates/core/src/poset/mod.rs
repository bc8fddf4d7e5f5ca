//! Finite posets given by covering relations.

mod chains;
mod checkers;
mod mobius;

pub use chains::{chain_counts, enumerate_chains, longest_chain, ChainSpec, ChainVariant};
pub use checkers::{
    check_recursive_atom_condition, is_totally_semimodular, sjt_heredity_holds, sjt_order,
};
pub use mobius::{fixed_chain_trace, mobius_function, mobius_number, signed_fixed_trace, zeta_eval};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Immutable finite poset on dense indices `0..len`, in builder insertion order.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    up: Vec<Vec<u32>>,
    down: Vec<Vec<u32>>,
    below: Vec<Vec<u32>>,
    above: Vec<Vec<u32>>,
    minimal: Vec<u32>,
    maximal: Vec<u32>,
    is_min: Vec<bool>,
    is_max: Vec<bool>,
    topo: Vec<u32>,
    redundant: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PosetJson {
    pub labels: Vec<String>,
    pub covers: Vec<[usize; 2]>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.up == other.up
    }
}

impl Poset {
    /// Builds a poset from labels and pairs `(i, j)` meaning `i < j`.
    ///
    /// Pairs that are implied by others are dropped and counted in
    /// [`Poset::redundant_pairs`].
    pub fn from_covers<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        pairs: &[(usize, usize)],
    ) -> Result<Poset> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let m = labels.len();
        if m == 0 {
            return Err(Error::EmptyPoset);
        }
        let mut seen = HashMap::with_capacity(m);
        for l in &labels {
            if seen.insert(l.as_str(), ()).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); m];
        for &(i, j) in pairs {
            if i >= m {
                return Err(Error::InvalidIndex(i));
            }
            if j >= m {
                return Err(Error::InvalidIndex(j));
            }
            if i == j {
                return Err(Error::Cycle(i));
            }
            preds[j].push(i as u32);
        }
        for p in preds.iter_mut() {
            p.sort_unstable();
            p.dedup();
        }
        Self::from_preds(labels, preds)
    }

    fn from_preds(labels: Vec<String>, preds: Vec<Vec<u32>>) -> Result<Poset> {
        let m = labels.len();
        let mut succ: Vec<Vec<u32>> = vec![Vec::new(); m];
        let mut indeg = vec![0usize; m];
        for (j, ps) in preds.iter().enumerate() {
            indeg[j] = ps.len();
            for &i in ps {
                succ[i as usize].push(j as u32);
            }
        }
        let mut topo = Vec::with_capacity(m);
        let mut stack: Vec<u32> = (0..m as u32).rev().filter(|&i| indeg[i as usize] == 0).collect();
        while let Some(i) = stack.pop() {
            topo.push(i);
            for &j in succ[i as usize].iter().rev() {
                indeg[j as usize] -= 1;
                if indeg[j as usize] == 0 {
                    stack.push(j);
                }
            }
        }
        if topo.len() != m {
            let bad = (0..m).find(|&i| indeg[i] > 0).unwrap_or(0);
            return Err(Error::Cycle(bad));
        }
        let mut below: Vec<Vec<u32>> = vec![Vec::new(); m];
        let mut mark = vec![u32::MAX; m];
        let mut down: Vec<Vec<u32>> = vec![Vec::new(); m];
        let mut redundant = 0;
        for &j in &topo {
            let j = j as usize;
            let mut set = Vec::new();
            let stamp = j as u32;
            // elements strictly below some predecessor
            for &p in &preds[j] {
                for &q in &below[p as usize] {
                    if mark[q as usize] != stamp {
                        mark[q as usize] = stamp;
                        set.push(q);
                    }
                }
            }
            for &p in &preds[j] {
                if mark[p as usize] == stamp {
                    redundant += 1;
                } else {
                    down[j].push(p);
                }
            }
            for &p in &preds[j] {
                if mark[p as usize] != stamp {
                    mark[p as usize] = stamp;
                    set.push(p);
                }
            }
            set.sort_unstable();
            below[j] = set;
        }
        let mut above: Vec<Vec<u32>> = vec![Vec::new(); m];
        for (j, bs) in below.iter().enumerate() {
            for &i in bs {
                above[i as usize].push(j as u32);
            }
        }
        let mut up: Vec<Vec<u32>> = vec![Vec::new(); m];
        for (j, ds) in down.iter().enumerate() {
            for &i in ds {
                up[i as usize].push(j as u32);
            }
        }
        let is_min: Vec<bool> = down.iter().map(|d| d.is_empty()).collect();
        let is_max: Vec<bool> = up.iter().map(|u| u.is_empty()).collect();
        let minimal = (0..m as u32).filter(|&i| is_min[i as usize]).collect();
        let maximal = (0..m as u32).filter(|&i| is_max[i as usize]).collect();
        Ok(Poset { labels, up, down, below, above, minimal, maximal, is_min, is_max, topo, redundant })
    }

    /// Builds the subposet induced on `elems` (sorted source indices).
    pub fn induced(&self, elems: &[u32]) -> Poset {
        let pos: HashMap<u32, usize> = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let labels: Vec<String> = elems.iter().map(|&e| self.labels[e as usize].clone()).collect();
        let preds: Vec<Vec<u32>> = elems
            .iter()
            .map(|&e| {
                self.below[e as usize]
                    .iter()
                    .filter_map(|b| pos.get(b).map(|&k| k as u32))
                    .collect()
            })
            .collect();
        let mut p = Self::from_preds(labels, preds).expect("induced order is acyclic");
        p.redundant = 0;
        p
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Number of input pairs dropped because they were implied by others.
    pub fn redundant_pairs(&self) -> usize {
        self.redundant
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        i == j || self.below[j].binary_search(&(i as u32)).is_ok()
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    pub fn upper_covers(&self, i: usize) -> &[u32] {
        &self.up[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[u32] {
        &self.down[i]
    }

    /// Elements strictly below `i`, sorted.
    pub fn below(&self, i: usize) -> &[u32] {
        &self.below[i]
    }

    /// Elements strictly above `i`, sorted.
    pub fn above(&self, i: usize) -> &[u32] {
        &self.above[i]
    }

    pub fn minimal(&self) -> &[u32] {
        &self.minimal
    }

    pub fn maximal(&self) -> &[u32] {
        &self.maximal
    }

    pub fn is_min(&self, i: usize) -> bool {
        self.is_min[i]
    }

    pub fn is_max(&self, i: usize) -> bool {
        self.is_max[i]
    }

    /// A linear extension.
    pub fn topological_order(&self) -> &[u32] {
        &self.topo
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, us) in self.up.iter().enumerate() {
            for &j in us {
                out.push((i, j as usize));
            }
        }
        out
    }

    pub fn is_bounded(&self) -> bool {
        self.minimal.len() == 1 && self.maximal.len() == 1
    }

    pub fn bottom(&self) -> Option<usize> {
        (self.minimal.len() == 1).then(|| self.minimal[0] as usize)
    }

    pub fn top(&self) -> Option<usize> {
        (self.maximal.len() == 1).then(|| self.maximal[0] as usize)
    }

    /// Elements strictly between `i` and `j`, sorted.
    pub fn open_interval(&self, i: usize, j: usize) -> Vec<u32> {
        intersect_sorted(&self.above[i], &self.below[j])
    }

    /// The induced subposet `{y : lower ≤ y ≤ upper}` with the translation
    /// table from new indices to indices of `self`.
    pub fn interval(&self, lower: Option<usize>, upper: Option<usize>) -> Result<(Poset, Vec<u32>)> {
        for e in [lower, upper].into_iter().flatten() {
            if e >= self.len() {
                return Err(Error::InvalidIndex(e));
            }
        }
        let elems: Vec<u32> = match (lower, upper) {
            (Some(l), Some(u)) => {
                if !self.le(l, u) {
                    return Err(Error::NotComparable(l, u));
                }
                let mut v = self.open_interval(l, u);
                v.push(l as u32);
                if l != u {
                    v.push(u as u32);
                }
                v.sort_unstable();
                v
            }
            (Some(l), None) => {
                let mut v = self.above[l].clone();
                v.push(l as u32);
                v.sort_unstable();
                v
            }
            (None, Some(u)) => {
                let mut v = self.below[u].clone();
                v.push(u as u32);
                v.sort_unstable();
                v
            }
            (None, None) => (0..self.len() as u32).collect(),
        };
        Ok((self.convex_subposet(&elems), elems))
    }

    /// Induced subposet on a convex sorted set, whose covers are the restricted covers.
    pub(crate) fn convex_subposet(&self, elems: &[u32]) -> Poset {
        let mut pos = vec![u32::MAX; self.len()];
        for (k, &e) in elems.iter().enumerate() {
            pos[e as usize] = k as u32;
        }
        let labels: Vec<String> = elems.iter().map(|&e| self.labels[e as usize].clone()).collect();
        let preds: Vec<Vec<u32>> = elems
            .iter()
            .map(|&e| {
                self.down[e as usize]
                    .iter()
                    .filter(|&&d| pos[d as usize] != u32::MAX)
                    .map(|&d| pos[d as usize])
                    .collect()
            })
            .collect();
        Self::from_preds(labels, preds).expect("subposet of a poset is acyclic")
    }

    /// Componentwise order; element `(i, j)` has index `i * |Q| + j`.
    pub fn direct_product(&self, q: &Poset) -> Poset {
        let (m, k) = (self.len(), q.len());
        let mut labels = Vec::with_capacity(m * k);
        let mut preds = vec![Vec::new(); m * k];
        for i in 0..m {
            for j in 0..k {
                labels.push(format!("({},{})", self.labels[i], q.labels[j]));
                let idx = i * k + j;
                for &d in &self.down[i] {
                    preds[idx].push(d * k as u32 + j as u32);
                }
                for &d in &q.down[j] {
                    preds[idx].push((i * k) as u32 + d);
                }
                preds[idx].sort_unstable();
            }
        }
        Self::from_preds(labels, preds).expect("product of posets is acyclic")
    }

    pub fn dual(&self) -> Poset {
        Self::from_preds(self.labels.clone(), self.up.clone()).expect("dual is acyclic")
    }

    /// Adds a new greatest element at the last index.
    pub fn adjoin_top(&self) -> Poset {
        let mut labels = self.labels.clone();
        labels.push(self.fresh_label("top"));
        let mut preds = self.down.clone();
        preds.push(self.maximal.clone());
        Self::from_preds(labels, preds).expect("acyclic")
    }

    /// Adds a new least element at the last index.
    pub fn adjoin_bottom(&self) -> Poset {
        let mut labels = self.labels.clone();
        labels.push(self.fresh_label("bottom"));
        let b = self.len() as u32;
        let mut preds = self.down.clone();
        for &i in &self.minimal {
            preds[i as usize].push(b);
        }
        preds.push(Vec::new());
        Self::from_preds(labels, preds).expect("acyclic")
    }

    fn fresh_label(&self, base: &str) -> String {
        let mut l = base.to_string();
        while self.labels.contains(&l) {
            l.push('\'');
        }
        l
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            labels: self.labels.clone(),
            covers: self.covers().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn from_json(j: &PosetJson) -> Result<Poset> {
        let pairs: Vec<(usize, usize)> = j.covers.iter().map(|c| (c[0], c[1])).collect();
        Poset::from_covers(j.labels.iter().cloned(), &pairs)
    }

    /// Checks that `g` is an order automorphism.
    pub fn check_automorphism(&self, g: &[u32]) -> Result<()> {
        if g.len() != self.len() {
            return Err(Error::NotAutomorphism);
        }
        let mut hit = vec![false; self.len()];
        for &x in g {
            if x as usize >= self.len() || std::mem::replace(&mut hit[x as usize], true) {
                return Err(Error::NotAutomorphism);
            }
        }
        for (i, us) in self.up.iter().enumerate() {
            if us.len() != self.up[g[i] as usize].len() {
                return Err(Error::NotAutomorphism);
            }
            for &j in us {
                if !self.up[g[i] as usize].contains(&g[j as usize]) {
                    return Err(Error::NotAutomorphism);
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compat {
    Min,
    Max,
    MinMax,
}

/// An order-preserving map between two posets.
#[derive(Clone, Debug)]
pub struct PosetMap<'a> {
    pub source: &'a Poset,
    pub target: &'a Poset,
    pub assignment: Vec<u32>,
}

impl<'a> PosetMap<'a> {
    pub fn new(source: &'a Poset, target: &'a Poset, assignment: Vec<u32>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::Mismatch("assignment length".into()));
        }
        if let Some(&bad) = assignment.iter().find(|&&a| a as usize >= target.len()) {
            return Err(Error::InvalidIndex(bad as usize));
        }
        for (i, j) in source.covers() {
            if !target.le(assignment[i] as usize, assignment[j] as usize) {
                return Err(Error::Mismatch(format!("map is not monotone on {i} < {j}")));
            }
        }
        Ok(PosetMap { source, target, assignment })
    }

    pub fn identity(p: &'a Poset) -> Self {
        PosetMap { source: p, target: p, assignment: (0..p.len() as u32).collect() }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.assignment[i] as usize
    }

    /// `f⁻¹(min Q) ⊆ min P` for `Min`, the dual for `Max`, both for `MinMax`.
    pub fn check_compatibility(&self, mode: Compat) -> bool {
        let min_ok = || {
            (0..self.source.len())
                .all(|i| !self.target.is_min(self.apply(i)) || self.source.is_min(i))
        };
        let max_ok = || {
            (0..self.source.len())
                .all(|i| !self.target.is_max(self.apply(i)) || self.source.is_max(i))
        };
        match mode {
            Compat::Min => min_ok(),
            Compat::Max => max_ok(),
            Compat::MinMax => min_ok() && max_ok(),
        }
    }
}
