use super::PosetSpecies;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::poset::{Poset, PosetMap};
use std::collections::HashMap;

/// The partition species `Π`, ordered by refinement (coarser is smaller).
#[derive(Clone, Copy, Debug, Default)]
pub struct PartitionSpecies;

impl PosetSpecies for PartitionSpecies {
    type Elem = Partition;

    fn name(&self) -> String {
        "pi".into()
    }

    fn elements(&self, n: usize) -> Vec<Partition> {
        Partition::all(n)
    }

    fn le(&self, x: &Partition, y: &Partition) -> bool {
        x.le(y)
    }

    fn upper_generators(&self, x: &Partition) -> Option<Vec<Partition>> {
        Some(split_block_covers(x))
    }

    fn underlying(&self, x: &Partition) -> Partition {
        x.clone()
    }

    fn relabel(&self, sigma: &[usize], x: &Partition) -> Partition {
        x.relabel(sigma)
    }

    fn phi(&self, x: &Partition, y: &Partition) -> Partition {
        y.quotient(x)
    }

    fn psi(&self, x: &Partition, y: &Partition) -> Vec<Partition> {
        x.blocks().iter().map(|t| y.restrict(t)).collect()
    }

    fn label(&self, x: &Partition) -> String {
        x.label()
    }
}

/// Partitions obtained by splitting one block of `x` in two.
pub(crate) fn split_block_covers(x: &Partition) -> Vec<Partition> {
    let n = x.n();
    let mut out = Vec::new();
    let blocks = x.blocks();
    for block in &blocks {
        for (_, right) in Partition::splits_in_two(block) {
            let mut lab: Vec<usize> = (0..n).map(|i| x.block_of(i)).collect();
            for &i in &right {
                lab[i] = blocks.len();
            }
            out.push(Partition::from_labels(&lab));
        }
    }
    out
}

/// `Π(n)` as a plain poset, elements in growth-string order.
pub fn partition_poset(n: usize) -> Result<Poset> {
    if n == 0 {
        return Err(Error::EmptyPoset);
    }
    let elems = Partition::all(n);
    let index: HashMap<&Partition, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut pairs = Vec::new();
    for (i, p) in elems.iter().enumerate() {
        for q in split_block_covers(p) {
            pairs.push((i, index[&q]));
        }
    }
    Poset::from_covers(elems.iter().map(Partition::label), &pairs)
}

/// A poset map owning its source and target.
#[derive(Clone, Debug)]
pub struct OwnedMap {
    pub source: Poset,
    pub target: Poset,
    pub assignment: Vec<u32>,
}

impl OwnedMap {
    pub fn as_map(&self) -> Result<PosetMap<'_>> {
        PosetMap::new(&self.source, &self.target, self.assignment.clone())
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.assignment.len() == self.target.len()
            && self.assignment.iter().all(|&a| !std::mem::replace(&mut seen[a as usize], true))
    }

    /// Bijective, and both the map and its inverse are monotone.
    pub fn is_isomorphism(&self) -> bool {
        if !self.is_bijective() {
            return false;
        }
        let m = self.source.len();
        (0..m).all(|i| {
            (0..m).all(|j| {
                self.source.le(i, j) == self.target.le(self.assignment[i] as usize, self.assignment[j] as usize)
            })
        })
    }
}

fn check_partition(pi: &Partition) -> Result<()> {
    Partition::from_rgs(pi.rgs().to_vec()).map(|_| ())
}

/// `φ_π : Π_{≤π}(n) → Π(π)`, `α ↦ α/π`.
pub fn partition_phi(pi: &Partition) -> Result<OwnedMap> {
    check_partition(pi)?;
    let n = pi.n();
    let big = partition_poset(n)?;
    let elems = Partition::all(n);
    let x = elems.iter().position(|p| p == pi).unwrap();
    let (source, trans) = big.interval(None, Some(x))?;
    let k = pi.num_blocks();
    let target = partition_poset(k)?;
    let tel = Partition::all(k);
    let assignment = trans
        .iter()
        .map(|&t| tel.iter().position(|q| *q == elems[t as usize].quotient(pi)).unwrap() as u32)
        .collect();
    Ok(OwnedMap { source, target, assignment })
}

/// `ψ_π : Π_{≥π}(n) → ∏_T Π(T)`, `β ↦ (β|T)`, the product associated to the
/// left over blocks by minimum.
pub fn partition_psi(pi: &Partition) -> Result<OwnedMap> {
    check_partition(pi)?;
    let n = pi.n();
    let big = partition_poset(n)?;
    let elems = Partition::all(n);
    let x = elems.iter().position(|p| p == pi).unwrap();
    let (source, trans) = big.interval(Some(x), None)?;
    let blocks = pi.blocks();
    let mut target = partition_poset(blocks[0].len())?;
    for b in &blocks[1..] {
        target = target.direct_product(&partition_poset(b.len())?);
    }
    let sizes: Vec<usize> = blocks.iter().map(|b| Partition::all(b.len()).len()).collect();
    let assignment = trans
        .iter()
        .map(|&t| {
            let beta = &elems[t as usize];
            let mut idx = 0usize;
            for (b, block) in blocks.iter().enumerate() {
                let r = beta.restrict(block);
                let local = Partition::all(block.len()).iter().position(|q| *q == r).unwrap();
                idx = idx * sizes[b] + local;
            }
            idx as u32
        })
        .collect();
    Ok(OwnedMap { source, target, assignment })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_maps_are_isomorphisms() {
        for n in 1..=5 {
            for pi in Partition::all(n) {
                assert!(partition_phi(&pi).unwrap().is_isomorphism(), "phi {pi}");
                assert!(partition_psi(&pi).unwrap().is_isomorphism(), "psi {pi}");
            }
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(partition_poset(3).unwrap().len(), 5);
        assert_eq!(partition_poset(4).unwrap().len(), 15);
        let pi = Partition::from_blocks(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        let phi = partition_phi(&pi).unwrap();
        // the bottom of Π_{≤π} is the one-block partition
        assert_eq!(phi.target.label(phi.assignment[0] as usize), "12");
        let pi = Partition::from_blocks(3, &[vec![0], vec![1, 2]]).unwrap();
        let psi = partition_psi(&pi).unwrap();
        let top = psi.source.index_of("1|2|3").unwrap();
        assert_eq!(psi.target.label(psi.assignment[top] as usize), "(1,1|2)");
    }
}
