//! Operad and module structures on the cohomology of an operadic poset species.
//!
//! Classes are stored as coordinates in the deterministic [`ClassBasis`] of
//! their level; every map is evaluated on cocycle representatives and the
//! result is reduced back to coordinates.

use crate::catalog;
use crate::cohomology::{
    build_complex, class_basis, concat, kunneth, pullback_unchecked, push_forward, ClassBasis, CochainComplex,
    CochainVector, Interval,
};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, QVec};
use crate::partition::{permutations, restrict_perm, Partition};
use crate::poset::{ChainVariant, Poset};
use crate::species::{transpositions, Report, SpeciesMorphism, SpeciesRef};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

/// A cohomology class of `P(n)` in one variant and degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub species: String,
    pub n: usize,
    pub variant: ChainVariant,
    pub degree: usize,
    pub coords: Vec<BigRational>,
}

#[derive(Serialize)]
struct ClassJson<'a> {
    species: &'a str,
    n: usize,
    degree: usize,
    variant: &'static str,
    coords: Vec<String>,
}

impl Class {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ClassJson {
            species: &self.species,
            n: self.n,
            degree: self.degree,
            variant: self.variant.name(),
            coords: self.coords.iter().map(|c| c.to_string()).collect(),
        })
        .expect("class serializes")
    }

    fn same_space(&self, other: &Class) -> Result<()> {
        if (self.species.as_str(), self.n, self.variant, self.degree)
            != (other.species.as_str(), other.n, other.variant, other.degree)
        {
            return Err(Error::Mismatch(format!(
                "classes live in different spaces: {}({}) {} deg {} vs {}({}) {} deg {}",
                self.species,
                self.n,
                self.variant.name(),
                self.degree,
                other.species,
                other.n,
                other.variant.name(),
                other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Class) -> Result<Class> {
        self.same_space(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Class { coords, ..self.clone() })
    }

    pub fn scaled(&self, c: &BigRational) -> Class {
        Class { coords: self.coords.iter().map(|a| a * c).collect(), ..self.clone() }
    }
}

/// The complex of one level with lazily computed class bases.
pub struct LevelCohomology {
    pub poset: Arc<crate::species::Level>,
    pub complex: CochainComplex,
    bases: Vec<OnceLock<ClassBasis>>,
}

impl LevelCohomology {
    fn new(level: Arc<crate::species::Level>, variant: ChainVariant) -> Self {
        let complex = build_complex(&level.poset, variant);
        let bases = (0..complex.num_degrees().max(1)).map(|_| OnceLock::new()).collect();
        LevelCohomology { poset: level, complex, bases }
    }

    pub fn basis(&self, k: usize) -> Option<&ClassBasis> {
        self.bases.get(k).map(|b| b.get_or_init(|| class_basis(&self.complex, k)))
    }

    pub fn rank(&self, k: usize) -> usize {
        self.basis(k).map_or(0, ClassBasis::rank)
    }
}

type Memo<K, V> = Mutex<HashMap<K, Arc<OnceLock<Arc<V>>>>>;

fn memo<K: Hash + Eq + Clone, V>(map: &Memo<K, V>, key: &K, f: impl FnOnce() -> V) -> Arc<V> {
    let slot = map.lock().unwrap().entry(key.clone()).or_default().clone();
    slot.get_or_init(|| Arc::new(f())).clone()
}

type IntervalComplex = (Interval, CochainComplex);

/// Cohomology of an operadic poset species with the structure maps of its
/// operad and modules. All intermediate complexes are cached.
pub struct SpeciesCohomology {
    species: SpeciesRef,
    name: String,
    levels: Memo<(usize, ChainVariant), LevelCohomology>,
    below: Memo<(usize, usize, ChainVariant), IntervalComplex>,
    above: Memo<(usize, usize, ChainVariant), IntervalComplex>,
    products: Memo<(Vec<usize>, ChainVariant), CochainComplex>,
}

fn contexts() -> &'static Mutex<HashMap<String, Arc<SpeciesCohomology>>> {
    static CTX: OnceLock<Mutex<HashMap<String, Arc<SpeciesCohomology>>>> = OnceLock::new();
    CTX.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The shared context of a catalog species.
pub fn context(name: &str) -> Result<Arc<SpeciesCohomology>> {
    let species = catalog::parse_and_build(name)?;
    Ok(context_for(&species))
}

/// The shared context of any species, keyed by its name.
pub fn context_for(species: &SpeciesRef) -> Arc<SpeciesCohomology> {
    let name = species.name();
    contexts()
        .lock()
        .unwrap()
        .entry(name)
        .or_insert_with(|| Arc::new(SpeciesCohomology::new(species.clone())))
        .clone()
}

impl SpeciesCohomology {
    /// A private context, not shared through [`context`].
    pub fn new(species: SpeciesRef) -> Self {
        SpeciesCohomology {
            name: species.name(),
            species,
            levels: Mutex::default(),
            below: Mutex::default(),
            above: Mutex::default(),
            products: Mutex::default(),
        }
    }

    pub fn species(&self) -> &SpeciesRef {
        &self.species
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self, n: usize, variant: ChainVariant) -> Arc<LevelCohomology> {
        memo(&self.levels, &(n, variant), || LevelCohomology::new(self.species.level(n), variant))
    }

    fn below(&self, n: usize, x: usize, variant: ChainVariant) -> Arc<IntervalComplex> {
        memo(&self.below, &(n, x, variant), || {
            let iv = Interval::below(&self.species.level(n).poset, x).expect("valid element");
            let c = build_complex(&iv.poset, variant);
            (iv, c)
        })
    }

    fn above(&self, n: usize, x: usize, variant: ChainVariant) -> Arc<IntervalComplex> {
        memo(&self.above, &(n, x, variant), || {
            let iv = Interval::above(&self.species.level(n).poset, x).expect("valid element");
            let c = build_complex(&iv.poset, variant);
            (iv, c)
        })
    }

    /// The complex of `∏_j P(sizes[j])`, product taken left to right.
    fn product(&self, sizes: &[usize], variant: ChainVariant) -> Arc<CochainComplex> {
        memo(&self.products, &(sizes.to_vec(), variant), || {
            let mut p: Poset = self.species.level(sizes[0]).poset.clone();
            for &s in &sizes[1..] {
                p = p.direct_product(&self.species.level(s).poset);
            }
            build_complex(&p, variant)
        })
    }

    pub fn rank(&self, n: usize, variant: ChainVariant, degree: usize) -> usize {
        self.level(n, variant).rank(degree)
    }

    /// Degrees with non-zero rational cohomology.
    pub fn nonzero_degrees(&self, n: usize, variant: ChainVariant) -> Vec<usize> {
        let l = self.level(n, variant);
        (0..l.complex.num_degrees()).filter(|&k| l.rank(k) > 0).collect()
    }

    fn zero_class(&self, n: usize, variant: ChainVariant, degree: usize) -> Class {
        let r = self.rank(n, variant, degree);
        Class { species: self.name.clone(), n, variant, degree, coords: vec![BigRational::zero(); r] }
    }

    /// The `j`-th basis class.
    pub fn basis_class(&self, n: usize, variant: ChainVariant, degree: usize, j: usize) -> Class {
        let mut c = self.zero_class(n, variant, degree);
        c.coords[j] = BigRational::one();
        c
    }

    pub fn basis_classes(&self, n: usize, variant: ChainVariant, degree: usize) -> Vec<Class> {
        (0..self.rank(n, variant, degree)).map(|j| self.basis_class(n, variant, degree, j)).collect()
    }

    /// The unit, the class of the single point of `P(1)`.
    pub fn unit(&self, variant: ChainVariant) -> Class {
        self.basis_class(1, variant, 0, 0)
    }

    /// The class of a cocycle.
    pub fn class_of(&self, n: usize, variant: ChainVariant, z: &CochainVector) -> Result<Class> {
        let l = self.level(n, variant);
        let Some(b) = l.basis(z.degree) else {
            if z.is_zero() {
                return Ok(self.zero_class(n, variant, z.degree));
            }
            return Err(Error::Mismatch(format!("degree {} out of range", z.degree)));
        };
        let coords = b.coordinates(&l.complex, z)?;
        Ok(Class { species: self.name.clone(), n, variant, degree: z.degree, coords })
    }

    /// A cocycle representing the class.
    pub fn representative(&self, c: &Class) -> CochainVector {
        match self.level(c.n, c.variant).basis(c.degree) {
            Some(b) => b.representative(&c.coords),
            None => CochainVector::zero(c.degree),
        }
    }

    /// The class of a signed sum of chains given by element labels.
    pub fn class_of_chains(&self, n: usize, variant: ChainVariant, chains: &[(i64, &[&str])]) -> Result<Class> {
        let l = self.level(n, variant);
        let degree = chains.first().map_or(0, |c| c.1.len().saturating_sub(1));
        let mut z = CochainVector::zero(degree);
        for (coef, labels) in chains {
            let idx: Vec<u32> = labels
                .iter()
                .map(|s| l.poset.poset.index_of(s).map(|i| i as u32).ok_or_else(|| Error::UnknownName(s.to_string())))
                .collect::<Result<_>>()?;
            let i = l
                .complex
                .chain_index(&idx)
                .ok_or_else(|| Error::Mismatch(format!("{labels:?} is not a {} chain", variant.name())))?;
            z.add_at(i as u32, &BigRational::from_integer((*coef).into()));
        }
        self.class_of(n, variant, &z)
    }

    fn check_species(&self, c: &Class) -> Result<()> {
        if c.species != self.name {
            return Err(Error::Mismatch(format!("class of {} used with {}", c.species, self.name)));
        }
        Ok(())
    }

    /// The action of the relabeling `i ↦ sigma[i]`.
    pub fn relabel(&self, sigma: &[usize], c: &Class) -> Result<Class> {
        self.check_species(c)?;
        if sigma.len() != c.n {
            return Err(Error::Mismatch("permutation size differs from arity".into()));
        }
        let g = self.species.relabel(c.n, sigma);
        let l = self.level(c.n, c.variant);
        let img = push_forward(&l.complex, &g, &self.representative(c));
        self.class_of(c.n, c.variant, &img)
    }

    fn phi_assignment(&self, n: usize, x: usize, iv: &Interval) -> Vec<u32> {
        iv.trans.iter().map(|&t| self.species.phi(n, x, t as usize) as u32).collect()
    }

    fn psi_assignment(&self, n: usize, x: usize, iv: &Interval, sizes: &[usize]) -> Vec<u32> {
        let lens: Vec<usize> = sizes.iter().map(|&s| self.species.level(s).len()).collect();
        iv.trans
            .iter()
            .map(|&t| {
                let parts = self.species.psi(n, x, t as usize);
                parts.iter().zip(&lens).fold(0usize, |acc, (&p, &len)| acc * len + p) as u32
            })
            .collect()
    }

    /// `ρ_π(u; (v_T))`: Künneth over the blocks, then the sum over the fiber of
    /// `π` of concatenated pullbacks. Variants: minmax ⊗ minmax → minmax
    /// (operad), minmax ⊗ min → min (left module), max ⊗ minmax → max (right
    /// module).
    pub fn compose_full(&self, pi: &Partition, u: &Class, vs: &[Class]) -> Result<Class> {
        self.check_species(u)?;
        let sizes = pi.block_sizes();
        if u.n != pi.num_blocks() || vs.len() != sizes.len() {
            return Err(Error::Mismatch("block count differs from the outer arity".into()));
        }
        for (v, &s) in vs.iter().zip(&sizes) {
            self.check_species(v)?;
            if v.n != s {
                return Err(Error::Mismatch("inner arity differs from block size".into()));
            }
        }
        let vv = vs[0].variant;
        if vs.iter().any(|v| v.variant != vv) {
            return Err(Error::Mismatch("inner classes in different variants".into()));
        }
        use ChainVariant::*;
        let result_variant = match (u.variant, vv) {
            (MinMax, MinMax) => MinMax,
            (MinMax, Min) => Min,
            (Max, MinMax) => Max,
            (a, b) => return Err(Error::Mismatch(format!("no composition {} ⊗ {}", a.name(), b.name()))),
        };
        let n = pi.n();
        let degree = u.degree + vs.iter().map(|v| v.degree).sum::<usize>();
        // iterated Künneth of the inner representatives
        let mut acc = self.representative(&vs[0]);
        for j in 1..vs.len() {
            let prev = self.product(&sizes[..j], vv);
            let next = self.product(&sizes[..=j], vv);
            let lv = self.level(sizes[j], vv);
            acc = kunneth(&next, &prev, &lv.complex, &acc, &self.representative(&vs[j]))?;
        }
        let prod = self.product(&sizes, vv);
        let cu = self.representative(u);
        let lu = self.level(u.n, u.variant);
        let target = self.level(n, result_variant);
        let mut total = CochainVector::zero(degree);
        for x in target.poset.fiber(pi) {
            let lo = self.below(n, x, u.variant);
            let hi = self.above(n, x, vv);
            let a = pullback_unchecked(&self.phi_assignment(n, x, &lo.0), &lo.1, &lu.complex, &cu);
            let b = pullback_unchecked(&self.psi_assignment(n, x, &hi.0, &sizes), &hi.1, &prod, &acc);
            let piece = concat(&target.complex, x, (&lo.0, &lo.1, &a), (&hi.0, &hi.1, &b))?;
            total.add_scaled(&piece, &BigRational::one());
        }
        self.class_of(n, result_variant, &total)
    }

    /// `u ∘_B v`: `u` lives on the blocks of `{B} ∪ singletons` (ordered by
    /// minimum), `v` on `B`. Computed directly, without Künneth.
    pub fn compose_partial(&self, u: &Class, v: &Class, block: &[usize]) -> Result<Class> {
        self.check_species(u)?;
        self.check_species(v)?;
        if u.variant != ChainVariant::MinMax || v.variant != ChainVariant::MinMax {
            return Err(Error::Mismatch("partial composition needs min-max classes".into()));
        }
        let n = u.n + v.n - 1;
        let pi = single_block_partition(n, block)?;
        if block.len() != v.n {
            return Err(Error::Mismatch("block size differs from the inner arity".into()));
        }
        let bidx = pi.block_of(block[0]);
        let cu = self.representative(u);
        let cv = self.representative(v);
        let lu = self.level(u.n, ChainVariant::MinMax);
        let lv = self.level(v.n, ChainVariant::MinMax);
        let target = self.level(n, ChainVariant::MinMax);
        let mut total = CochainVector::zero(u.degree + v.degree);
        for x in target.poset.fiber(&pi) {
            let lo = self.below(n, x, ChainVariant::MinMax);
            let hi = self.above(n, x, ChainVariant::MinMax);
            let a = pullback_unchecked(&self.phi_assignment(n, x, &lo.0), &lo.1, &lu.complex, &cu);
            let psi: Vec<u32> =
                hi.0.trans.iter().map(|&t| self.species.psi(n, x, t as usize)[bidx] as u32).collect();
            let b = pullback_unchecked(&psi, &hi.1, &lv.complex, &cv);
            let piece = concat(&target.complex, x, (&lo.0, &lo.1, &a), (&hi.0, &hi.1, &b))?;
            total.add_scaled(&piece, &BigRational::one());
        }
        self.class_of(n, ChainVariant::MinMax, &total)
    }

    pub fn module_left(&self, pi: &Partition, u: &Class, vs: &[Class]) -> Result<Class> {
        if u.variant != ChainVariant::MinMax || vs.iter().any(|v| v.variant != ChainVariant::Min) {
            return Err(Error::Mismatch("left action needs a min-max class acting on min classes".into()));
        }
        self.compose_full(pi, u, vs)
    }

    pub fn module_right(&self, pi: &Partition, u: &Class, vs: &[Class]) -> Result<Class> {
        if u.variant != ChainVariant::Max || vs.iter().any(|v| v.variant != ChainVariant::MinMax) {
            return Err(Error::Mismatch("right action needs a max class acted on by min-max classes".into()));
        }
        self.compose_full(pi, u, vs)
    }

    /// Pullback along the structure map `a : P → Π`.
    pub fn pullback_from_pi(&self, c: &Class) -> Result<Class> {
        if c.species != "pi" {
            return Err(Error::Mismatch("expected a class of pi".into()));
        }
        let pi_ctx = context("pi")?;
        let lp = pi_ctx.level(c.n, c.variant);
        let index: HashMap<&Partition, u32> =
            lp.poset.under.iter().enumerate().map(|(i, u)| (u, i as u32)).collect();
        let mine = self.level(c.n, c.variant);
        let assign: Vec<u32> = mine.poset.under.iter().map(|u| index[u]).collect();
        let z = pullback_unchecked(&assign, &mine.complex, &lp.complex, &pi_ctx.representative(c));
        self.class_of(c.n, c.variant, &z)
    }
}

fn single_block_partition(n: usize, block: &[usize]) -> Result<Partition> {
    if block.is_empty() || block.iter().any(|&b| b >= n) || block.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Malformed("block must be a non-empty sorted subset".into()));
    }
    let labels: Vec<usize> = (0..n).map(|i| if block.contains(&i) { n } else { i }).collect();
    Ok(Partition::from_labels(&labels))
}

/// Coordinates of `Σ c_i · x_i`; all classes must share species, arity, variant and degree.
pub fn linear_combination(terms: &[(i64, Class)]) -> Result<Class> {
    let (first, rest) = terms.split_first().ok_or_else(|| Error::Malformed("empty combination".into()))?;
    let mut acc = first.1.scaled(&BigRational::from_integer(first.0.into()));
    for (c, x) in rest {
        acc = acc.add(&x.scaled(&BigRational::from_integer((*c).into())))?;
    }
    Ok(acc)
}

/// True iff the combination is the zero class.
pub fn check_relation_zero(terms: &[(i64, Class)]) -> Result<bool> {
    Ok(linear_combination(terms)?.is_zero())
}

/// Rank of the span of a family of classes.
pub fn span_rank(classes: &[Class]) -> usize {
    let mut ech = Echelon::new();
    for c in classes {
        let v: QVec = c
            .coords
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| (i as u32, a.clone()))
            .collect();
        ech.insert(&v);
    }
    ech.len()
}

// ---------------------------------------------------------------------------
// labeled classes and words

/// A class whose canonical labels `0..n-1` stand for the sorted `labels`.
#[derive(Clone, Debug)]
pub struct Labeled {
    pub labels: Vec<u32>,
    pub class: Class,
}

/// `u ∘_slot v` on explicit label sets.
pub fn compose_labeled(ctx: &SpeciesCohomology, u: &Labeled, slot: u32, v: &Labeled) -> Result<Labeled> {
    if !u.labels.contains(&slot) {
        return Err(Error::Malformed(format!("slot {slot} is not an input")));
    }
    let mut labels: Vec<u32> = u.labels.iter().copied().filter(|&l| l != slot).chain(v.labels.iter().copied()).collect();
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Malformed("label sets overlap".into()));
    }
    let pos = |l: u32| labels.binary_search(&l).unwrap();
    let block: Vec<usize> = v.labels.iter().map(|&l| pos(l)).collect();
    let pi = single_block_partition(labels.len(), &block)?;
    let tau: Vec<usize> = u
        .labels
        .iter()
        .map(|&l| if l == slot { pi.block_of(block[0]) } else { pi.block_of(pos(l)) })
        .collect();
    let u2 = ctx.relabel(&tau, &u.class)?;
    let class = ctx.compose_partial(&u2, &v.class, &block)?;
    Ok(Labeled { labels, class })
}

/// A binary word on distinct positive labels, e.g. `[1,[2,3]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Leaf(u32),
    Node(Box<Word>, Box<Word>),
}

impl Word {
    pub fn parse(s: &str) -> Result<Word> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut i = 0;
        let w = Self::parse_at(&chars, &mut i)?;
        if i != chars.len() {
            return Err(Error::Malformed(format!("trailing input in `{s}`")));
        }
        let mut ls = w.labels();
        ls.sort_unstable();
        if ls.windows(2).any(|p| p[0] == p[1]) || ls.first() != Some(&1) || *ls.last().unwrap() as usize != ls.len() {
            return Err(Error::Malformed(format!("`{s}` must use each of 1..n exactly once")));
        }
        Ok(w)
    }

    fn parse_at(c: &[char], i: &mut usize) -> Result<Word> {
        let bad = || Error::Malformed("expected `[a,b]` or a label".into());
        match c.get(*i) {
            Some('[') => {
                *i += 1;
                let a = Self::parse_at(c, i)?;
                if c.get(*i) != Some(&',') {
                    return Err(bad());
                }
                *i += 1;
                let b = Self::parse_at(c, i)?;
                if c.get(*i) != Some(&']') {
                    return Err(bad());
                }
                *i += 1;
                Ok(Word::Node(Box::new(a), Box::new(b)))
            }
            Some(d) if d.is_ascii_digit() => {
                let start = *i;
                while c.get(*i).is_some_and(|d| d.is_ascii_digit()) {
                    *i += 1;
                }
                let s: String = c[start..*i].iter().collect();
                let v: u32 = s.parse().map_err(|_| bad())?;
                if v == 0 {
                    return Err(bad());
                }
                Ok(Word::Leaf(v))
            }
            _ => Err(bad()),
        }
    }

    pub fn labels(&self) -> Vec<u32> {
        match self {
            Word::Leaf(l) => vec![*l],
            Word::Node(a, b) => {
                let mut v = a.labels();
                v.extend(b.labels());
                v
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.labels().len()
    }
}

const SLOT_X: u32 = u32::MAX - 1;
const SLOT_Y: u32 = u32::MAX;

/// Evaluates a word with a binary generator: `w(w₁, w₂) = (g ∘_x w₁) ∘_y w₂`.
pub fn word_class(ctx: &SpeciesCohomology, gen: &Class, w: &Word) -> Result<Labeled> {
    match w {
        Word::Leaf(l) => Ok(Labeled { labels: vec![*l], class: ctx.unit(gen.variant) }),
        Word::Node(a, b) => {
            let g = Labeled { labels: vec![SLOT_X, SLOT_Y], class: gen.clone() };
            let r = compose_labeled(ctx, &g, SLOT_X, &word_class(ctx, gen, a)?)?;
            compose_labeled(ctx, &r, SLOT_Y, &word_class(ctx, gen, b)?)
        }
    }
}

/// The class `[12 < 1|2]` generating `h¹(Π(2))`.
pub fn lie_generator() -> Result<Class> {
    context("pi")?.class_of_chains(2, ChainVariant::MinMax, &[(1, &["12", "1|2"])])
}

/// The image of a Lie word in `h•(P)`: computed in `h•(Π)` and pulled back along `a`.
pub fn lie_class(ctx: &SpeciesCohomology, w: &Word) -> Result<Class> {
    let pi = context("pi")?;
    let c = word_class(&pi, &lie_generator()?, w)?.class;
    if ctx.name() == "pi" {
        Ok(c)
    } else {
        ctx.pullback_from_pi(&c)
    }
}

/// `1 ≺ 2` in `h¹(Π₂(2))`: the one-block element below the element whose
/// block `{1}` sits at position 1.
pub fn prec_generator() -> Result<Class> {
    context("nc2")?.class_of_chains(2, ChainVariant::MinMax, &[(1, &["12>12", "1>1|2>2"])])
}

/// Right-normed words `[σ₂,[σ₃,…,[σₙ,1]]]`, a basis of the Lie words of arity `n`.
pub fn comb_words(n: usize) -> Vec<Word> {
    permutations(n - 1)
        .into_iter()
        .map(|p| {
            p.iter()
                .rev()
                .fold(Word::Leaf(1), |w, &i| Word::Node(Box::new(Word::Leaf(i as u32 + 2)), Box::new(w)))
        })
        .collect()
}

/// Pullback of a class along a validated morphism `source → target`.
pub fn pullback_operad_morphism(m: &SpeciesMorphism, c: &Class) -> Result<Class> {
    let tgt = context_for(&m.target);
    let src = context_for(&m.source);
    if c.species != tgt.name() {
        return Err(Error::Mismatch("class does not live on the morphism target".into()));
    }
    if c.n > m.max_n() {
        return Err(Error::Budget(format!("morphism checked only up to n = {}", m.max_n())));
    }
    let lt = tgt.level(c.n, c.variant);
    let ls = src.level(c.n, c.variant);
    let z = pullback_unchecked(m.map(c.n), &ls.complex, &lt.complex, &tgt.representative(c));
    src.class_of(c.n, c.variant, &z)
}

// ---------------------------------------------------------------------------
// axiom checks

fn koszul_sign(order: &[(usize, usize)]) -> i64 {
    // order: (target position, degree) listed in source order
    let mut s = 0usize;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i].0 > order[j].0 {
                s += order[i].1 * order[j].1;
            }
        }
    }
    if s % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All choices of one basis class per entry, across all non-zero degrees.
fn basis_tuples(ctx: &SpeciesCohomology, arities: &[usize], variants: &[ChainVariant]) -> Vec<Vec<Class>> {
    let choices: Vec<Vec<Class>> = arities
        .iter()
        .zip(variants)
        .map(|(&a, &v)| ctx.nonzero_degrees(a, v).into_iter().flat_map(|d| ctx.basis_classes(a, v, d)).collect())
        .collect();
    crate::set_operads::tuples(&choices).collect()
}

fn lab(c: &Class) -> String {
    let coords: Vec<String> = c.coords.iter().map(|a| a.to_string()).collect();
    format!("{}({}) {} deg {} [{}]", c.species, c.n, c.variant.name(), c.degree, coords.join(","))
}

/// Which structure a check exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    Operad,
    LeftModule,
    RightModule,
}

impl Structure {
    /// Variants of (outer, middle, inner) in an associativity square.
    fn variants(self) -> [ChainVariant; 3] {
        use ChainVariant::*;
        match self {
            Structure::Operad => [MinMax, MinMax, MinMax],
            Structure::LeftModule => [MinMax, MinMax, Min],
            Structure::RightModule => [Max, MinMax, MinMax],
        }
    }
}

/// `ρ_π(u; (ρ_{π'|T}(v_T; w))_T) = ± ρ_{π'}(ρ_{π/π'}(u; v); w)` for
/// `π < π'` with `1 < #π < #π' < n`, over basis classes.
pub fn check_associativity(ctx: &SpeciesCohomology, n: usize, which: Structure, report: &mut Report) -> Result<()> {
    let [vo, vm, vi] = which.variants();
    let parts = Partition::all(n);
    for pi in &parts {
        for pi2 in &parts {
            let (k, k2) = (pi.num_blocks(), pi2.num_blocks());
            if !(pi.le(pi2) && 1 < k && k < k2 && k2 < n) {
                continue;
            }
            let blocks = pi.blocks();
            let blocks2 = pi2.blocks();
            let grouping = pi.quotient(pi2);
            // inner arities: per T, the number of π'-blocks inside T
            let mids: Vec<usize> = grouping.block_sizes();
            let sizes2: Vec<usize> = pi2.block_sizes();
            let mut arities = vec![k];
            arities.extend(&mids);
            arities.extend(&sizes2);
            let mut variants = vec![vo];
            variants.extend(std::iter::repeat(vm).take(mids.len()));
            variants.extend(std::iter::repeat(vi).take(sizes2.len()));
            for tuple in basis_tuples(ctx, &arities, &variants) {
                report.checked += 1;
                let u = &tuple[0];
                let v = &tuple[1..=k];
                let w = &tuple[k + 1..];
                // left side
                let mut inner = Vec::with_capacity(k);
                let mut order = vec![(0usize, u.degree)];
                for (t, block) in blocks.iter().enumerate() {
                    let members: Vec<usize> = (0..k2).filter(|&b| grouping.block_of(b) == t).collect();
                    let ws: Vec<Class> = members.iter().map(|&b| w[b].clone()).collect();
                    order.push((1 + t, v[t].degree));
                    for &b in &members {
                        order.push((1 + k + b, w[b].degree));
                    }
                    inner.push(ctx.compose_full(&pi2.restrict(block), &v[t], &ws)?);
                }
                let lhs = ctx.compose_full(pi, u, &inner)?;
                let mid = ctx.compose_full(&grouping, u, v)?;
                let rhs = ctx.compose_full(pi2, &mid, w)?;
                let sign = koszul_sign(&order);
                let rhs = rhs.scaled(&BigRational::from_integer(sign.into()));
                if lhs != rhs {
                    report.fail(
                        format!("{which:?} associativity at {pi} ≤ {pi2}"),
                        vec![lab(&lhs), lab(&rhs), format!("blocks {blocks2:?}")],
                    );
                }
            }
        }
    }
    Ok(())
}

/// `σ·ρ_π(u; v) = ± ρ_{σπ}(τ·u; σ|_T·v_T)` over basis classes.
pub fn check_equivariance(ctx: &SpeciesCohomology, n: usize, which: Structure, report: &mut Report) -> Result<()> {
    let [vo, _, vi] = which.variants();
    let vi = if which == Structure::RightModule { ChainVariant::MinMax } else { vi };
    let sigmas = if n <= 3 { permutations(n) } else { transpositions(n) };
    for pi in Partition::all(n) {
        let k = pi.num_blocks();
        if k == 1 || k == n {
            continue;
        }
        let blocks = pi.blocks();
        let mut arities = vec![k];
        arities.extend(pi.block_sizes());
        let mut variants = vec![vo];
        variants.extend(std::iter::repeat(vi).take(k));
        let tuples = basis_tuples(ctx, &arities, &variants);
        for sigma in &sigmas {
            let bm = pi.block_map(sigma);
            let spi = pi.relabel(sigma);
            for tuple in &tuples {
                report.checked += 1;
                let lhs = ctx.relabel(sigma, &ctx.compose_full(&pi, &tuple[0], &tuple[1..])?)?;
                let u2 = ctx.relabel(&bm, &tuple[0])?;
                let mut vs2: Vec<Option<Class>> = vec![None; k];
                for (b, block) in blocks.iter().enumerate() {
                    vs2[bm[b]] = Some(ctx.relabel(&restrict_perm(sigma, block), &tuple[1 + b])?);
                }
                let vs2: Vec<Class> = vs2.into_iter().map(Option::unwrap).collect();
                let order: Vec<(usize, usize)> = (0..k).map(|b| (bm[b], tuple[1 + b].degree)).collect();
                let sign = koszul_sign(&order);
                let rhs = ctx.compose_full(&spi, &u2, &vs2)?.scaled(&BigRational::from_integer(sign.into()));
                if lhs != rhs {
                    report.fail(
                        format!("{which:?} equivariance at {pi} under {sigma:?}"),
                        vec![lab(&lhs), lab(&rhs)],
                    );
                }
            }
        }
    }
    Ok(())
}

/// Unit insertions act as the identity.
pub fn check_unitality(ctx: &SpeciesCohomology, n: usize, which: Structure, report: &mut Report) -> Result<()> {
    let [vo, _, vi] = which.variants();
    let vi = if which == Structure::RightModule { ChainVariant::MinMax } else { vi };
    let right_degrees = if which == Structure::LeftModule { Vec::new() } else { ctx.nonzero_degrees(n, vo) };
    let left_degrees = if which == Structure::RightModule { Vec::new() } else { ctx.nonzero_degrees(n, vi) };
    for d in right_degrees {
        for u in ctx.basis_classes(n, vo, d) {
            report.checked += 1;
            let units = vec![ctx.unit(vi); n];
            let r = ctx.compose_full(&Partition::discrete(n), &u, &units)?;
            if r != u {
                report.fail("right unitality".into(), vec![lab(&u), lab(&r)]);
            }
        }
    }
    for d in left_degrees {
        for v in ctx.basis_classes(n, vi, d) {
            report.checked += 1;
            let r = ctx.compose_full(&Partition::one_block(n), &ctx.unit(vo), std::slice::from_ref(&v))?;
            if r != v {
                report.fail("left unitality".into(), vec![lab(&v), lab(&r)]);
            }
        }
    }
    Ok(())
}

/// `compose_full` with unit insertions agrees with `compose_partial`.
pub fn check_partial_agrees(ctx: &SpeciesCohomology, n: usize, report: &mut Report) -> Result<()> {
    let mm = ChainVariant::MinMax;
    for pi in Partition::all(n) {
        let sizes = pi.block_sizes();
        let big: Vec<usize> = (0..sizes.len()).filter(|&b| sizes[b] > 1).collect();
        if big.len() != 1 || pi.num_blocks() == 1 {
            continue;
        }
        let b = big[0];
        let block = pi.blocks()[b].clone();
        for tuple in basis_tuples(ctx, &[pi.num_blocks(), block.len()], &[mm, mm]) {
            report.checked += 1;
            let mut vs: Vec<Class> = vec![ctx.unit(mm); pi.num_blocks()];
            vs[b] = tuple[1].clone();
            let full = ctx.compose_full(&pi, &tuple[0], &vs)?;
            let partial = ctx.compose_partial(&tuple[0], &tuple[1], &block)?;
            if full != partial {
                report.fail(format!("full and partial compositions differ at {pi}"), vec![lab(&full), lab(&partial)]);
            }
        }
    }
    Ok(())
}

/// Associativity, equivariance and unitality of the operad and both modules
/// for arities up to `max_arity`.
pub fn verify_operad_axioms(ctx: &SpeciesCohomology, max_arity: usize) -> Result<Report> {
    let mut r = Report::new("operad", ctx.name(), max_arity);
    for n in 1..=max_arity {
        for which in [Structure::Operad, Structure::LeftModule, Structure::RightModule] {
            check_unitality(ctx, n, which, &mut r)?;
            check_associativity(ctx, n, which, &mut r)?;
        }
        check_equivariance(ctx, n, Structure::Operad, &mut r)?;
        check_partial_agrees(ctx, n, &mut r)?;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_composition() {
        let pi = context("pi").unwrap();
        let mm = ChainVariant::MinMax;
        let u = pi.class_of_chains(2, mm, &[(1, &["12", "1|2"])]).unwrap();
        let v = u.clone();
        let expected = pi.class_of_chains(3, mm, &[(1, &["123", "1|23", "1|2|3"])]).unwrap();
        assert_eq!(pi.compose_partial(&u, &v, &[1, 2]).unwrap(), expected);
        let full = pi
            .compose_full(&Partition::from_blocks(3, &[vec![0], vec![1, 2]]).unwrap(), &u, &[pi.unit(mm), v])
            .unwrap();
        assert_eq!(full, expected);
        let w = lie_class(&pi, &Word::parse("[1,[2,3]]").unwrap()).unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn jacobi() {
        let pi = context("pi").unwrap();
        let ws: Vec<Class> = ["[1,[2,3]]", "[2,[3,1]]", "[3,[1,2]]"]
            .iter()
            .map(|s| lie_class(&pi, &Word::parse(s).unwrap()).unwrap())
            .collect();
        assert!(ws.iter().all(|w| !w.is_zero()));
        assert!(check_relation_zero(&[(1, ws[0].clone()), (1, ws[1].clone()), (1, ws[2].clone())]).unwrap());
    }

    #[test]
    fn words() {
        assert!(Word::parse("[1,[2,3]]").is_ok());
        assert!(Word::parse("[1,[2,2]]").is_err());
        assert!(Word::parse("[1,2").is_err());
        assert!(Word::parse("[1,3]").is_err());
        assert_eq!(comb_words(4).len(), 6);
    }

    #[test]
    fn koszul() {
        assert_eq!(koszul_sign(&[(0, 1), (1, 1)]), 1);
        assert_eq!(koszul_sign(&[(1, 1), (0, 1)]), -1);
        assert_eq!(koszul_sign(&[(1, 2), (0, 1)]), 1);
    }

    #[test]
    fn pi_axioms() {
        let pi = context("pi").unwrap();
        let r = verify_operad_axioms(&pi, 4).unwrap();
        assert!(r.checked > 100);
        assert!(r.passed(), "{:#?}", r.failures);
    }

    fn words_of(ctx: &SpeciesCohomology, gen: &Class, ws: &[&str]) -> Vec<Class> {
        ws.iter().map(|w| word_class(ctx, gen, &Word::parse(w).unwrap()).unwrap().class).collect()
    }

    #[test]
    fn prelie_relation() {
        let nc2 = context("nc2").unwrap();
        let prec = prec_generator().unwrap();
        let t = words_of(&nc2, &prec, &["[[1,2],3]", "[1,[2,3]]", "[[1,3],2]", "[1,[3,2]]"]);
        assert!(t.iter().all(|c| !c.is_zero()));
        let terms: Vec<(i64, Class)> = t.into_iter().map(|c| (1, c)).collect();
        assert!(check_relation_zero(&terms).unwrap());
        // a*(lie generator) = 1≺2 + 2≺1
        let a = nc2.pullback_from_pi(&lie_generator().unwrap()).unwrap();
        let p = words_of(&nc2, &prec, &["[1,2]", "[2,1]"]);
        assert_eq!(a, p[0].add(&p[1]).unwrap());
    }

    #[test]
    fn metabelian() {
        let ns = context("ns").unwrap();
        let c = lie_class(&ns, &Word::parse("[[1,2],[3,4]]").unwrap()).unwrap();
        assert_eq!(c.degree, 3);
        assert!(c.is_zero());
        let pi = context("pi").unwrap();
        assert!(!lie_class(&pi, &Word::parse("[[1,2],[3,4]]").unwrap()).unwrap().is_zero());
        for n in 2..=4 {
            let cs: Vec<Class> = comb_words(n).iter().map(|w| lie_class(&ns, w).unwrap()).collect();
            assert_eq!(span_rank(&cs), n - 1);
            let cs: Vec<Class> = comb_words(n).iter().map(|w| lie_class(&pi, w).unwrap()).collect();
            assert_eq!(span_rank(&cs), (1..n).product::<usize>());
            assert_eq!(ns.rank(n, ChainVariant::MinMax, n - 1), n - 1);
        }
    }

    #[test]
    fn tree_composition() {
        let mlt = context("mlt").unwrap();
        let mm = ChainVariant::MinMax;
        let g = mlt.class_of_chains(2, mm, &[(1, &["12", "1-2"])]).unwrap();
        let u = Labeled { labels: vec![1, SLOT_X], class: g.clone() };
        let v = Labeled { labels: vec![2, 3], class: g.clone() };
        let r = compose_labeled(&mlt, &u, SLOT_X, &v).unwrap();
        let expected = mlt
            .class_of_chains(3, mm, &[(1, &["123", "1-23", "1-2,2-3"]), (1, &["123", "1-23", "1-3,2-3"])])
            .unwrap();
        assert_eq!(r.class, expected);
        // arity-2 compositions span a proper subspace of h²(MLT(3))
        let mut gens = Vec::new();
        for sigma in permutations(3) {
            for block in [vec![0, 1], vec![1, 2], vec![0, 2]] {
                let c = mlt.compose_partial(&g, &g, &block).unwrap();
                gens.push(mlt.relabel(&sigma, &c).unwrap());
            }
        }
        assert_eq!(mlt.rank(3, mm, 2), 3);
        assert_eq!(span_rank(&gens), 2);
    }

    #[test]
    fn forgetting_roots() {
        let m = catalog::forget_root(3).unwrap();
        let mlt = context_for(&m.target);
        let mlrt = context_for(&m.source);
        let mm = ChainVariant::MinMax;
        for (tree, under) in [("1-2,2-3", "1-23"), ("1-2,1-3", "12-3"), ("1-3,2-3", "13-2")] {
            let c = mlt.class_of_chains(3, mm, &[(1, &["123", under, tree])]).unwrap();
            let pulled = pullback_operad_morphism(&m, &c).unwrap();
            let mut sum: Option<Class> = None;
            let lvl = mlrt.level(3, mm);
            for r in 1..=3 {
                let top = format!("{tree}@{r}");
                let t = lvl.poset.poset.index_of(&top).unwrap();
                // any maximal chain ending at the rooted tree
                let mid = *lvl
                    .poset
                    .poset
                    .lower_covers(t)
                    .iter()
                    .find(|&&m| lvl.poset.poset.label(m as usize).starts_with(&format!("{under}@")))
                    .unwrap() as usize;
                let bot = lvl.poset.poset.lower_covers(mid)[0] as usize;
                let chain = [lvl.poset.poset.label(bot), lvl.poset.poset.label(mid), top.as_str()];
                let k = mlrt.class_of_chains(3, mm, &[(1, &chain)]).unwrap();
                sum = Some(match sum { None => k, Some(s) => s.add(&k).unwrap() });
            }
            assert_eq!(pulled, sum.unwrap(), "{tree}");
        }
    }

    #[test]
    fn catalog_axioms() {
        for name in ["left:as", "right:as", "right:perm", "ns", "nc2", "mlt", "mlrt"] {
            let ctx = context(name).unwrap();
            let r = verify_operad_axioms(&ctx, 4).unwrap();
            assert!(r.passed(), "{name}: {:#?}", r.failures);
        }
    }

    #[test]
    fn negative_control() {
        let inner = catalog::parse_and_build("pi").unwrap();
        let bad = crate::species::Mutant::wrap(inner, crate::species::Mutation::BrokenPsi);
        let ctx = SpeciesCohomology::new(bad);
        let r = verify_operad_axioms(&ctx, 3).unwrap();
        assert!(!r.passed());
    }
}
