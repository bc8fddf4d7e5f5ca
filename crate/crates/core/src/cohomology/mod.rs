//! The four cochain complexes of a poset and their cohomology.

mod classes;
mod maps;

pub use classes::{class_basis, cohomology_q, induced_automorphism_action, push_forward, ClassBasis};
pub use maps::{concat, kunneth, kunneth_chain, pullback, pullback_unchecked, Interval};

use crate::linalg::{invariant_factors, SparseMatrix};
use crate::poset::{enumerate_chains, longest_chain, ChainSpec, ChainVariant, Poset};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;
use std::collections::{BTreeMap, HashMap};

/// Chain bases per degree and the sparse differentials `d_k : C^k → C^{k+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    variant: ChainVariant,
    poset_len: usize,
    bases: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, u32>>,
    diffs: Vec<SparseMatrix>,
}

/// Builds the complex of the given variant; `d ∘ d = 0` is asserted.
pub fn build_complex(p: &Poset, variant: ChainVariant) -> CochainComplex {
    let top = longest_chain(p, variant);
    let bases: Vec<Vec<Vec<u32>>> = match top {
        None => Vec::new(),
        Some(t) => (0..=t)
            .into_par_iter()
            .map(|k| enumerate_chains(p, ChainSpec { variant, degree: k }))
            .collect(),
    };
    let index: Vec<HashMap<Vec<u32>, u32>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect())
        .collect();
    let diffs: Vec<SparseMatrix> = (0..bases.len())
        .into_par_iter()
        .map(|k| {
            let empty = HashMap::new();
            let next = index.get(k + 1).unwrap_or(&empty);
            let nrows = bases.get(k + 1).map_or(0, Vec::len);
            let mut m = SparseMatrix::zeros(nrows, bases[k].len());
            for (j, chain) in bases[k].iter().enumerate() {
                m.cols[j] = differential_column(p, chain, next);
            }
            m
        })
        .collect();
    for k in 0..diffs.len().saturating_sub(1) {
        assert!(diffs[k + 1].mul(&diffs[k]).is_zero(), "d∘d ≠ 0 in degree {k}");
    }
    CochainComplex { variant, poset_len: p.len(), bases, index, diffs }
}

/// `d[x₀<⋯<xₙ]`: insert before, between (sign (−1)^i) and after (sign (−1)^{n+1}).
fn differential_column(p: &Poset, chain: &[u32], next: &HashMap<Vec<u32>, u32>) -> Vec<(u32, i64)> {
    let n = chain.len() - 1;
    let mut out: Vec<(u32, i64)> = Vec::new();
    let mut push = |c: Vec<u32>, s: i64| {
        if let Some(&r) = next.get(&c) {
            out.push((r, s));
        }
    };
    for &y in p.below(chain[0] as usize) {
        let mut c = Vec::with_capacity(n + 2);
        c.push(y);
        c.extend_from_slice(chain);
        push(c, 1);
    }
    for i in 1..=n {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for y in p.open_interval(chain[i - 1] as usize, chain[i] as usize) {
            let mut c = Vec::with_capacity(n + 2);
            c.extend_from_slice(&chain[..i]);
            c.push(y);
            c.extend_from_slice(&chain[i..]);
            push(c, sign);
        }
    }
    let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
    for &y in p.above(chain[n] as usize) {
        let mut c = chain.to_vec();
        c.push(y);
        push(c, sign);
    }
    out.sort_unstable();
    out
}

impl CochainComplex {
    pub fn variant(&self) -> ChainVariant {
        self.variant
    }

    pub fn poset_len(&self) -> usize {
        self.poset_len
    }

    /// Number of degrees carrying a (possibly empty) basis.
    pub fn num_degrees(&self) -> usize {
        self.bases.len()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, Vec::len)
    }

    pub fn basis(&self, k: usize) -> &[Vec<u32>] {
        self.bases.get(k).map_or(&[], |b| b.as_slice())
    }

    pub fn chain_index(&self, chain: &[u32]) -> Option<usize> {
        let k = chain.len().checked_sub(1)?;
        self.index.get(k)?.get(chain).map(|&i| i as usize)
    }

    /// `d_k`, or an empty matrix outside the degree range.
    pub fn differential(&self, k: usize) -> SparseMatrix {
        self.diffs.get(k).cloned().unwrap_or_else(|| SparseMatrix::zeros(self.dim(k + 1), self.dim(k)))
    }

    pub(crate) fn diff_ref(&self, k: usize) -> Option<&SparseMatrix> {
        self.diffs.get(k)
    }

    /// Applies `d` to a cochain.
    pub fn d(&self, v: &CochainVector) -> CochainVector {
        let mut out = CochainVector::zero(v.degree + 1);
        if let Some(m) = self.diffs.get(v.degree) {
            for (&j, c) in &v.coeffs {
                for &(i, s) in &m.cols[j as usize] {
                    out.add_at(i, &(c * BigRational::from_integer(s.into())));
                }
            }
        }
        out
    }

    /// The basis vector of a chain, if the chain belongs to this complex.
    pub fn chain_vector(&self, chain: &[u32]) -> Option<CochainVector> {
        let i = self.chain_index(chain)?;
        Some(CochainVector::basis(chain.len() - 1, i as u32))
    }
}

/// Sparse rational cochain in a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CochainVector {
    pub degree: usize,
    pub coeffs: BTreeMap<u32, BigRational>,
}

impl CochainVector {
    pub fn zero(degree: usize) -> Self {
        CochainVector { degree, coeffs: BTreeMap::new() }
    }

    pub fn basis(degree: usize, i: u32) -> Self {
        let mut v = Self::zero(degree);
        v.coeffs.insert(i, BigRational::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_at(&mut self, i: u32, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(i).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &CochainVector, c: &BigRational) {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        for (&i, a) in &other.coeffs {
            self.add_at(i, &(a * c));
        }
    }

    pub fn plus(&self, other: &CochainVector) -> CochainVector {
        let mut out = self.clone();
        out.add_scaled(other, &BigRational::one());
        out
    }

    pub fn minus(&self, other: &CochainVector) -> CochainVector {
        let mut out = self.clone();
        out.add_scaled(other, &-BigRational::one());
        out
    }

    pub fn scaled(&self, c: &BigRational) -> CochainVector {
        let mut out = CochainVector::zero(self.degree);
        out.add_scaled(self, c);
        out
    }

    pub fn get(&self, i: u32) -> BigRational {
        self.coeffs.get(&i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn to_qvec(&self) -> Vec<(u32, BigRational)> {
        self.coeffs.iter().map(|(&i, c)| (i, c.clone())).collect()
    }
}

/// Betti ranks and torsion invariants per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologySummary {
    pub variant: ChainVariant,
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
}

impl CohomologySummary {
    pub fn to_json(&self) -> serde_json::Value {
        let torsion: Vec<Vec<serde_json::Value>> = self
            .torsion
            .iter()
            .map(|t| {
                t.iter()
                    .map(|x| match u64::try_from(x) {
                        Ok(v) => json!(v),
                        Err(_) => json!(x.to_string()),
                    })
                    .collect()
            })
            .collect();
        json!({ "variant": self.variant.name(), "betti": self.betti, "torsion": torsion })
    }

    /// Degrees with nonzero free rank or torsion.
    pub fn nonzero_degrees(&self) -> Vec<usize> {
        (0..self.betti.len())
            .filter(|&k| self.betti[k] > 0 || !self.torsion[k].is_empty())
            .collect()
    }
}

/// Cohomology over ℤ from Smith forms of the differentials.
pub fn cohomology_z(c: &CochainComplex) -> CohomologySummary {
    let invs: Vec<Vec<BigInt>> = c.diffs.par_iter().map(invariant_factors).collect();
    let n = c.num_degrees();
    let mut betti = Vec::with_capacity(n);
    let mut torsion = Vec::with_capacity(n);
    for k in 0..n {
        let out_rank = invs[k].len();
        let in_rank = if k > 0 { invs[k - 1].len() } else { 0 };
        betti.push(c.dim(k) - out_rank - in_rank);
        let t: Vec<BigInt> = if k > 0 {
            invs[k - 1].iter().filter(|x| !x.is_one()).cloned().collect()
        } else {
            Vec::new()
        };
        torsion.push(t);
    }
    CohomologySummary { variant: c.variant, betti, torsion }
}

/// Reduced Betti numbers over ℚ of the order complex, indexed from degree −1.
/// The empty poset has reduced cohomology ℚ in degree −1.
#[cfg(test)]
pub(crate) fn reduced_betti(p: Option<&Poset>) -> Vec<usize> {
    let Some(p) = p else { return vec![1] };
    let c = build_complex(p, ChainVariant::Full);
    let ranks: Vec<usize> = c.diffs.iter().map(|m| invariant_factors(m).len()).collect();
    // augmentation C^{-1} → C^0 has rank 1
    let mut out = vec![0];
    for k in 0..c.num_degrees() {
        let in_rank = if k == 0 { 1 } else { ranks[k - 1] };
        out.push(c.dim(k) - ranks[k] - in_rank);
    }
    out
}
