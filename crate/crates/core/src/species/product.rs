use super::{Level, OperadicSpecies, Report, SpeciesRef};
use crate::partition::{permutations, Partition};
use crate::poset::Poset;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

struct PairLevel {
    level: Arc<Level>,
    pairs: Vec<(u32, u32)>,
    index: HashMap<(u32, u32), u32>,
}

/// Pairs of elements with equal underlying partitions, ordered componentwise.
pub struct FiberProduct {
    a: SpeciesRef,
    b: SpeciesRef,
    levels: Mutex<HashMap<usize, Arc<OnceLock<Arc<PairLevel>>>>>,
}

pub fn fiber_product(a: SpeciesRef, b: SpeciesRef) -> SpeciesRef {
    Arc::new(FiberProduct { a, b, levels: Mutex::new(HashMap::new()) })
}

impl FiberProduct {
    fn pair_level(&self, n: usize) -> Arc<PairLevel> {
        let slot = self.levels.lock().unwrap().entry(n).or_default().clone();
        slot.get_or_init(|| Arc::new(self.build(n))).clone()
    }

    fn build(&self, n: usize) -> PairLevel {
        let (la, lb) = (self.a.level(n), self.b.level(n));
        let mut by_under: HashMap<&Partition, Vec<u32>> = HashMap::new();
        for j in 0..lb.len() {
            by_under.entry(&lb.under[j]).or_default().push(j as u32);
        }
        let mut pairs = Vec::new();
        for i in 0..la.len() {
            for &j in by_under.get(&la.under[i]).map(Vec::as_slice).unwrap_or(&[]) {
                pairs.push((i as u32, j));
            }
        }
        let index: HashMap<(u32, u32), u32> = pairs.iter().enumerate().map(|(k, &p)| (p, k as u32)).collect();
        let mut rel = Vec::new();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            for &i2 in la.poset.above(i as usize) {
                for &j2 in lb.poset.above(j as usize) {
                    if let Some(&k2) = index.get(&(i2, j2)) {
                        rel.push((k, k2 as usize));
                    }
                }
            }
        }
        let labels: Vec<String> = pairs
            .iter()
            .map(|&(i, j)| format!("[{} ; {}]", la.poset.label(i as usize), lb.poset.label(j as usize)))
            .collect();
        let poset = Poset::from_covers(labels, &rel).expect("fiber product of posets");
        let under = pairs.iter().map(|&(i, _)| la.under[i as usize].clone()).collect();
        PairLevel { level: Arc::new(Level { n, poset, under }), pairs, index }
    }
}

impl OperadicSpecies for FiberProduct {
    fn name(&self) -> String {
        format!("{}×{}", self.a.name(), self.b.name())
    }

    fn level(&self, n: usize) -> Arc<Level> {
        self.pair_level(n).level.clone()
    }

    fn relabel(&self, n: usize, sigma: &[usize]) -> Vec<u32> {
        let pl = self.pair_level(n);
        let (ra, rb) = (self.a.relabel(n, sigma), self.b.relabel(n, sigma));
        pl.pairs.iter().map(|&(i, j)| pl.index[&(ra[i as usize], rb[j as usize])]).collect()
    }

    fn phi(&self, n: usize, x: usize, y: usize) -> usize {
        let pl = self.pair_level(n);
        let ((xa, xb), (ya, yb)) = (pl.pairs[x], pl.pairs[y]);
        let k = pl.level.under[x].num_blocks();
        let p = (self.a.phi(n, xa as usize, ya as usize) as u32, self.b.phi(n, xb as usize, yb as usize) as u32);
        self.pair_level(k).index[&p] as usize
    }

    fn psi(&self, n: usize, x: usize, y: usize) -> Vec<usize> {
        let pl = self.pair_level(n);
        let ((xa, xb), (ya, yb)) = (pl.pairs[x], pl.pairs[y]);
        let pa = self.a.psi(n, xa as usize, ya as usize);
        let pb = self.b.psi(n, xb as usize, yb as usize);
        let sizes = pl.level.under[x].block_sizes();
        pa.iter()
            .zip(&pb)
            .zip(sizes)
            .map(|((&u, &v), k)| self.pair_level(k).index[&(u as u32, v as u32)] as usize)
            .collect()
    }
}

/// Deliberate corruptions used as negative controls for the verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// `φ_x` sends everything to the first element of its target.
    ConstantPhi,
    /// every component of `ψ_x` is the first element of its target.
    BrokenPsi,
}

pub struct Mutant {
    pub inner: SpeciesRef,
    pub mutation: Mutation,
}

impl Mutant {
    pub fn wrap(inner: SpeciesRef, mutation: Mutation) -> SpeciesRef {
        Arc::new(Mutant { inner, mutation })
    }
}

impl OperadicSpecies for Mutant {
    fn name(&self) -> String {
        format!("{}[{:?}]", self.inner.name(), self.mutation)
    }

    fn level(&self, n: usize) -> Arc<Level> {
        self.inner.level(n)
    }

    fn relabel(&self, n: usize, sigma: &[usize]) -> Vec<u32> {
        self.inner.relabel(n, sigma)
    }

    fn phi(&self, n: usize, x: usize, y: usize) -> usize {
        match self.mutation {
            Mutation::ConstantPhi => 0,
            Mutation::BrokenPsi => self.inner.phi(n, x, y),
        }
    }

    fn psi(&self, n: usize, x: usize, y: usize) -> Vec<usize> {
        match self.mutation {
            Mutation::BrokenPsi => vec![0; self.inner.psi(n, x, y).len()],
            Mutation::ConstantPhi => self.inner.psi(n, x, y),
        }
    }
}

/// A checked morphism of operadic poset species, given levelwise.
pub struct SpeciesMorphism {
    pub source: SpeciesRef,
    pub target: SpeciesRef,
    maps: Vec<Vec<u32>>,
}

impl SpeciesMorphism {
    /// The map on `P(n)`; `n` must be within the checked range.
    pub fn map(&self, n: usize) -> &[u32] {
        &self.maps[n]
    }

    pub fn max_n(&self) -> usize {
        self.maps.len() - 1
    }
}

/// Validates levelwise maps `f_n : P(n) → Q(n)` against `a`, `φ`, `ψ`, the
/// order and relabelings for all `n ≤ max_n`.
pub fn species_morphism(
    source: SpeciesRef,
    target: SpeciesRef,
    f: impl Fn(usize) -> Vec<u32>,
    max_n: usize,
) -> Result<SpeciesMorphism, Report> {
    let mut report = Report::new("morphism", &format!("{}→{}", source.name(), target.name()), max_n);
    let maps: Vec<Vec<u32>> = (0..=max_n).map(|n| if n == 0 { Vec::new() } else { f(n) }).collect();
    for n in 1..=max_n {
        let (ls, lt) = (source.level(n), target.level(n));
        let m = &maps[n];
        if m.len() != ls.len() {
            report.fail(format!("level {n}: map has wrong length"), vec![]);
            continue;
        }
        for x in 0..ls.len() {
            report.checked += 1;
            let fx = m[x] as usize;
            if ls.under[x] != lt.under[fx] {
                report.fail("a is not preserved".into(), vec![ls.poset.label(x).into()]);
            }
            for &y in ls.poset.upper_covers(x) {
                if !lt.poset.le(fx, m[y as usize] as usize) {
                    report.fail("not monotone".into(), vec![ls.poset.label(x).into(), ls.poset.label(y as usize).into()]);
                }
            }
            let k = ls.under[x].num_blocks();
            let mut below: Vec<u32> = ls.poset.below(x).to_vec();
            below.push(x as u32);
            for &y in &below {
                let lhs = maps[k][source.phi(n, x, y as usize)];
                let rhs = target.phi(n, fx, m[y as usize] as usize) as u32;
                if lhs != rhs {
                    report.fail("φ does not commute".into(), vec![ls.poset.label(x).into(), ls.poset.label(y as usize).into()]);
                }
            }
            let sizes = ls.under[x].block_sizes();
            let mut above: Vec<u32> = ls.poset.above(x).to_vec();
            above.push(x as u32);
            for &y in &above {
                let ps = source.psi(n, x, y as usize);
                let pt = target.psi(n, fx, m[y as usize] as usize);
                for (b, &k) in sizes.iter().enumerate() {
                    if maps[k][ps[b]] as usize != pt[b] {
                        report.fail("ψ does not commute".into(), vec![ls.poset.label(x).into(), ls.poset.label(y as usize).into()]);
                    }
                }
            }
        }
        let sigmas = if n <= 4 { permutations(n) } else { transpositions(n) };
        for sigma in sigmas {
            let (rs, rt) = (source.relabel(n, &sigma), target.relabel(n, &sigma));
            for x in 0..ls.len() {
                if m[rs[x] as usize] != rt[m[x] as usize] {
                    report.fail("not equivariant".into(), vec![ls.poset.label(x).into(), format!("{sigma:?}")]);
                }
            }
        }
    }
    if report.passed() {
        Ok(SpeciesMorphism { source, target, maps })
    } else {
        Err(report)
    }
}

pub(crate) fn transpositions(n: usize) -> Vec<Vec<usize>> {
    (0..n.saturating_sub(1))
        .map(|i| {
            let mut s: Vec<usize> = (0..n).collect();
            s.swap(i, i + 1);
            s
        })
        .collect()
}

/// The terminal morphism `a : P → Π` for `n ≤ max_n`.
pub fn forgetful_to_pi(p: SpeciesRef, pi: SpeciesRef, max_n: usize) -> Result<SpeciesMorphism, Report> {
    let src = p.clone();
    let tgt = pi.clone();
    species_morphism(
        p,
        pi,
        move |n| {
            let (ls, lt) = (src.level(n), tgt.level(n));
            let index: HashMap<&Partition, u32> =
                lt.under.iter().enumerate().map(|(i, u)| (u, i as u32)).collect();
            ls.under.iter().map(|u| index[u]).collect()
        },
        max_n,
    )
}
