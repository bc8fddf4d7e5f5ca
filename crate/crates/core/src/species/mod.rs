//! Operadic poset species: families `n ↦ P(n)` with a map `a` to partitions
//! and the structure morphisms `φ_x : P_{≤x}(n) → P(a(x))`,
//! `ψ_x : P_{≥x}(n) → ∏_{T ∈ a(x)} P(T)`.
//!
//! Species are written against the typed [`PosetSpecies`] trait and used
//! through the index-based, object-safe [`OperadicSpecies`] trait, which
//! [`Built`] implements with construct-once caching of every level.

mod partitions;
mod product;
mod verify;

pub(crate) use partitions::split_block_covers;
pub(crate) use product::transpositions;
pub use partitions::{partition_phi, partition_poset, partition_psi, OwnedMap, PartitionSpecies};
pub use product::{
    fiber_product, forgetful_to_pi, species_morphism, FiberProduct, Mutant, Mutation, SpeciesMorphism,
};
pub use verify::{
    verify_all, verify_associativity, verify_base, verify_equivariance, verify_unitality, Report, Witness,
};

use crate::partition::Partition;
use crate::poset::Poset;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

/// A species described on canonical ground sets `{0..n-1}`.
pub trait PosetSpecies: Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn name(&self) -> String;

    /// All elements of `P(n)`, in the order that fixes element indices.
    fn elements(&self, n: usize) -> Vec<Self::Elem>;

    /// The order relation, straight from its definition.
    fn le(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// Elements above `x` whose relations generate the order, if cheaply known.
    fn upper_generators(&self, _x: &Self::Elem) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Elements below `x` whose relations generate the order, if cheaply known.
    fn lower_generators(&self, _x: &Self::Elem) -> Option<Vec<Self::Elem>> {
        None
    }

    fn underlying(&self, x: &Self::Elem) -> Partition;

    /// Image of `x` under the bijection `i ↦ sigma[i]`.
    fn relabel(&self, sigma: &[usize], x: &Self::Elem) -> Self::Elem;

    /// `φ_x(y)` for `y ≤ x`, an element of `P(#blocks of a(x))`.
    fn phi(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    /// `ψ_x(y)` for `y ≥ x`, one element of `P(|T|)` per block `T` of `a(x)`.
    fn psi(&self, x: &Self::Elem, y: &Self::Elem) -> Vec<Self::Elem>;

    fn label(&self, x: &Self::Elem) -> String;
}

/// One level `P(n)` with the underlying partition of every element.
#[derive(Debug)]
pub struct Level {
    pub n: usize,
    pub poset: Poset,
    pub under: Vec<Partition>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// Elements whose underlying partition is `pi`.
    pub fn fiber(&self, pi: &Partition) -> Vec<usize> {
        (0..self.len()).filter(|&i| &self.under[i] == pi).collect()
    }
}

/// Index-level view of an operadic poset species.
pub trait OperadicSpecies: Send + Sync {
    fn name(&self) -> String;

    fn level(&self, n: usize) -> Arc<Level>;

    /// The action of `sigma` on element indices of `P(n)`.
    fn relabel(&self, n: usize, sigma: &[usize]) -> Vec<u32>;

    /// `φ_x(y)` as an index of `P(#blocks of a(x))`.
    fn phi(&self, n: usize, x: usize, y: usize) -> usize;

    /// `ψ_x(y)` as indices of `P(|T|)`, blocks `T` of `a(x)` by minimum.
    fn psi(&self, n: usize, x: usize, y: usize) -> Vec<usize>;

    /// Element labels, for reports.
    fn element_label(&self, n: usize, x: usize) -> String {
        self.level(n).poset.label(x).to_string()
    }
}

pub type SpeciesRef = Arc<dyn OperadicSpecies>;

/// A typed level together with its element index.
pub struct TypedLevel<E> {
    pub level: Arc<Level>,
    pub elems: Vec<E>,
    pub index: HashMap<E, u32>,
}

type Slot<T> = Arc<OnceLock<Arc<T>>>;

/// Caches levels of a typed species; each level is constructed once even
/// under concurrent access.
pub struct Built<S: PosetSpecies> {
    species: S,
    levels: Mutex<HashMap<usize, Slot<TypedLevel<S::Elem>>>>,
}

impl<S: PosetSpecies> Built<S> {
    pub fn new(species: S) -> Self {
        Built { species, levels: Mutex::new(HashMap::new()) }
    }

    pub fn species(&self) -> &S {
        &self.species
    }

    pub fn typed(&self, n: usize) -> Arc<TypedLevel<S::Elem>> {
        let slot = {
            let mut map = self.levels.lock().unwrap();
            map.entry(n).or_default().clone()
        };
        slot.get_or_init(|| Arc::new(build_level(&self.species, n))).clone()
    }

    pub fn index_of(&self, n: usize, e: &S::Elem) -> usize {
        *self.typed(n).index.get(e).unwrap_or_else(|| panic!("{e:?} is not an element of level {n}")) as usize
    }
}

/// Builds `P(n)`, using generators when available and otherwise the
/// definitional order between consecutive ranks (number of blocks).
pub fn build_level<S: PosetSpecies>(s: &S, n: usize) -> TypedLevel<S::Elem> {
    let elems = s.elements(n);
    let index: HashMap<S::Elem, u32> = elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
    let under: Vec<Partition> = elems.iter().map(|e| s.underlying(e)).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let first = elems.first();
    let has_up = first.is_some_and(|e| s.upper_generators(e).is_some());
    let has_down = !has_up && first.is_some_and(|e| s.lower_generators(e).is_some());
    if has_up || has_down {
        for (i, e) in elems.iter().enumerate() {
            let gens = if has_up { s.upper_generators(e) } else { s.lower_generators(e) }.unwrap_or_default();
            for g in gens {
                let j = index[&g] as usize;
                pairs.push(if has_up { (i, j) } else { (j, i) });
            }
        }
    } else {
        let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (i, u) in under.iter().enumerate() {
            by_rank[u.num_blocks()].push(i);
        }
        for r in 1..n {
            for &i in &by_rank[r] {
                for &j in &by_rank[r + 1] {
                    if under[i].le(&under[j]) && s.le(&elems[i], &elems[j]) {
                        pairs.push((i, j));
                    }
                }
            }
        }
    }
    let labels: Vec<String> = elems.iter().map(|e| s.label(e)).collect();
    let poset = Poset::from_covers(labels, &pairs).unwrap_or_else(|e| panic!("{} level {n}: {e}", s.name()));
    TypedLevel { level: Arc::new(Level { n, poset, under }), elems, index }
}

/// `P(n)` with the order computed from `le` on all pairs, as a reference.
pub fn brute_force_level<S: PosetSpecies>(s: &S, n: usize) -> Poset {
    let elems = s.elements(n);
    let mut pairs = Vec::new();
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate() {
            if i != j && s.le(x, y) {
                pairs.push((i, j));
            }
        }
    }
    Poset::from_covers(elems.iter().map(|e| s.label(e)), &pairs).expect("definitional order is a partial order")
}

impl<S: PosetSpecies> OperadicSpecies for Built<S> {
    fn name(&self) -> String {
        self.species.name()
    }

    fn level(&self, n: usize) -> Arc<Level> {
        self.typed(n).level.clone()
    }

    fn relabel(&self, n: usize, sigma: &[usize]) -> Vec<u32> {
        let t = self.typed(n);
        t.elems.iter().map(|e| t.index[&self.species.relabel(sigma, e)]).collect()
    }

    fn phi(&self, n: usize, x: usize, y: usize) -> usize {
        let t = self.typed(n);
        let (xe, ye) = (&t.elems[x], &t.elems[y]);
        let k = t.level.under[x].num_blocks();
        self.index_of(k, &self.species.phi(xe, ye))
    }

    fn psi(&self, n: usize, x: usize, y: usize) -> Vec<usize> {
        let t = self.typed(n);
        let (xe, ye) = (&t.elems[x], &t.elems[y]);
        let sizes = t.level.under[x].block_sizes();
        self.species
            .psi(xe, ye)
            .iter()
            .zip(sizes)
            .map(|(e, k)| self.index_of(k, e))
            .collect()
    }
}

/// Wraps a typed species into a shared, cached handle.
pub fn build<S: PosetSpecies>(s: S) -> SpeciesRef {
    Arc::new(Built::new(s))
}
