use super::product::transpositions;
use super::{OperadicSpecies, SpeciesRef};
use crate::partition::{permutations, restrict_perm};
use serde::Serialize;

/// A failing instance, with the labels of the elements involved.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Witness {
    pub what: String,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub species: String,
    pub max_n: usize,
    pub checked: usize,
    pub failures: Vec<Witness>,
}

const MAX_WITNESSES: usize = 20;

impl Report {
    pub fn new(check: &str, species: &str, max_n: usize) -> Report {
        Report { check: check.into(), species: species.into(), max_n, checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn fail(&mut self, what: String, elements: Vec<String>) {
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(Witness { what, elements });
        }
    }

    pub(crate) fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        for w in other.failures {
            self.fail(w.what, w.elements);
        }
    }
}

fn lab(s: &dyn OperadicSpecies, n: usize, x: usize) -> String {
    format!("{}@{}", s.element_label(n, x), n)
}

/// Extremal elements, strictness of `a`, and compatibility of `φ`, `ψ` with
/// `a` and the order.
pub fn verify_base(s: &dyn OperadicSpecies, max_n: usize) -> Report {
    let mut r = Report::new("base", &s.name(), max_n);
    for n in 1..=max_n {
        let l = s.level(n);
        for x in 0..l.len() {
            r.checked += 1;
            let u = &l.under[x];
            if l.poset.is_min(x) != u.is_one_block() {
                r.fail("minimal elements must lie over the one-block partition".into(), vec![lab(s, n, x)]);
            }
            if l.poset.is_max(x) != u.is_discrete() {
                r.fail("maximal elements must lie over the discrete partition".into(), vec![lab(s, n, x)]);
            }
            for &y in l.poset.upper_covers(x) {
                let y = y as usize;
                if !(u.le(&l.under[y]) && u != &l.under[y]) {
                    r.fail("a is not strictly monotone".into(), vec![lab(s, n, x), lab(s, n, y)]);
                }
            }
            let k = u.num_blocks();
            let lk = s.level(k);
            let mut below: Vec<usize> = l.poset.below(x).iter().map(|&y| y as usize).collect();
            below.push(x);
            for &y in &below {
                let img = s.phi(n, x, y);
                if lk.under[img] != l.under[y].quotient(u) {
                    r.fail("a∘φ differs from the quotient".into(), vec![lab(s, n, x), lab(s, n, y)]);
                }
                for &z in &below {
                    if l.poset.le(y, z) && !lk.poset.le(img, s.phi(n, x, z)) {
                        r.fail("φ is not monotone".into(), vec![lab(s, n, x), lab(s, n, y), lab(s, n, z)]);
                    }
                }
            }
            if !lk.poset.is_max(s.phi(n, x, x)) {
                r.fail("φ_x(x) is not maximal".into(), vec![lab(s, n, x)]);
            }
            let blocks = u.blocks();
            let mut above: Vec<usize> = l.poset.above(x).iter().map(|&y| y as usize).collect();
            above.push(x);
            let psis: Vec<Vec<usize>> = above.iter().map(|&y| s.psi(n, x, y)).collect();
            for (ai, &y) in above.iter().enumerate() {
                let ps = &psis[ai];
                if ps.len() != blocks.len() {
                    r.fail("ψ has the wrong number of components".into(), vec![lab(s, n, x), lab(s, n, y)]);
                    continue;
                }
                for (b, t) in blocks.iter().enumerate() {
                    let lt = s.level(t.len());
                    if lt.under[ps[b]] != l.under[y].restrict(t) {
                        r.fail("a∘ψ differs from the restriction".into(), vec![lab(s, n, x), lab(s, n, y)]);
                    }
                    if y == x && !lt.poset.is_min(ps[b]) {
                        r.fail("ψ_x(x) is not minimal".into(), vec![lab(s, n, x)]);
                    }
                }
                for (aj, &z) in above.iter().enumerate() {
                    if l.poset.le(y, z) {
                        for (b, t) in blocks.iter().enumerate() {
                            if !s.level(t.len()).poset.le(ps[b], psis[aj][b]) {
                                r.fail("ψ is not monotone".into(), vec![lab(s, n, x), lab(s, n, y), lab(s, n, z)]);
                            }
                        }
                    }
                }
            }
        }
    }
    r
}

/// Relabelings are automorphisms and `φ`, `ψ` commute with them.
pub fn verify_equivariance(s: &dyn OperadicSpecies, max_n: usize) -> Report {
    let mut r = Report::new("equivariance", &s.name(), max_n);
    for n in 1..=max_n {
        let l = s.level(n);
        let sigmas = if n <= 4 { permutations(n) } else { transpositions(n) };
        for sigma in sigmas {
            let act = s.relabel(n, &sigma);
            let mut seen = vec![false; l.len()];
            for (x, &gx) in act.iter().enumerate() {
                let gx = gx as usize;
                seen[gx] = true;
                if l.under[gx] != l.under[x].relabel(&sigma) {
                    r.fail("relabeling does not cover the partition action".into(), vec![lab(s, n, x)]);
                }
                for &y in l.poset.upper_covers(x) {
                    if !l.poset.lt(gx, act[y as usize] as usize) {
                        r.fail("relabeling is not monotone".into(), vec![lab(s, n, x), lab(s, n, y as usize)]);
                    }
                }
            }
            if seen.iter().any(|b| !b) {
                r.fail(format!("relabeling by {sigma:?} is not a bijection"), vec![]);
                continue;
            }
            for x in 0..l.len() {
                r.checked += 1;
                let gx = act[x] as usize;
                let u = &l.under[x];
                let bmap = u.block_map(&sigma);
                let act_k = s.relabel(u.num_blocks(), &bmap);
                for &y in l.poset.below(x).iter().chain(std::iter::once(&(x as u32))) {
                    let y = y as usize;
                    let lhs = act_k[s.phi(n, x, y)] as usize;
                    let rhs = s.phi(n, gx, act[y] as usize);
                    if lhs != rhs {
                        r.fail("φ is not equivariant".into(), vec![lab(s, n, x), lab(s, n, y), format!("{sigma:?}")]);
                    }
                }
                let blocks = u.blocks();
                let local: Vec<Vec<u32>> = blocks
                    .iter()
                    .map(|t| s.relabel(t.len(), &restrict_perm(&sigma, t)))
                    .collect();
                for &y in l.poset.above(x).iter().chain(std::iter::once(&(x as u32))) {
                    let y = y as usize;
                    let ps = s.psi(n, x, y);
                    let pg = s.psi(n, gx, act[y] as usize);
                    for b in 0..blocks.len() {
                        if local[b][ps[b]] as usize != pg[bmap[b]] {
                            r.fail("ψ is not equivariant".into(), vec![lab(s, n, x), lab(s, n, y), format!("{sigma:?}")]);
                        }
                    }
                }
            }
        }
    }
    r
}

/// `φ∘φ`, `ψ∘ψ` and the mixed square.
pub fn verify_associativity(s: &dyn OperadicSpecies, max_n: usize) -> Report {
    let mut r = Report::new("associativity", &s.name(), max_n);
    for n in 1..=max_n {
        let l = s.level(n);
        for x in 0..l.len() {
            let ux = &l.under[x];
            let kx = ux.num_blocks();
            let below: Vec<usize> = l.poset.below(x).iter().map(|&y| y as usize).chain([x]).collect();
            // φ_{φ_x(y)} ∘ φ_x = φ_y on P_{≤y}, for y ≤ x
            for &y in &below {
                let py = s.phi(n, x, y);
                for &z in &below {
                    if !l.poset.le(z, y) {
                        continue;
                    }
                    r.checked += 1;
                    let lhs = s.phi(kx, py, s.phi(n, x, z));
                    let rhs = s.phi(n, y, z);
                    if lhs != rhs {
                        r.fail("φ∘φ ≠ φ".into(), vec![lab(s, n, x), lab(s, n, y), lab(s, n, z)]);
                    }
                }
            }
            // ψ_{ψ_x(y)} ∘ ψ_x = ψ_y for y ≥ x, flattened over the blocks of a(y)
            let above: Vec<usize> = l.poset.above(x).iter().map(|&y| y as usize).chain([x]).collect();
            let xblocks = ux.blocks();
            for &y in &above {
                let py = s.psi(n, x, y);
                let uy = &l.under[y];
                let yblocks = uy.blocks();
                for &z in &above {
                    if !l.poset.le(y, z) {
                        continue;
                    }
                    r.checked += 1;
                    let pz = s.psi(n, x, z);
                    let direct = s.psi(n, y, z);
                    for (b, t) in xblocks.iter().enumerate() {
                        let inner = s.psi(t.len(), py[b], pz[b]);
                        let sub = uy.restrict(t).blocks();
                        for (c, sb) in sub.iter().enumerate() {
                            let global: Vec<usize> = sb.iter().map(|&i| t[i]).collect();
                            let idx = yblocks.iter().position(|yb| *yb == global).unwrap();
                            if inner[c] != direct[idx] {
                                r.fail("ψ∘ψ ≠ ψ".into(), vec![lab(s, n, x), lab(s, n, y), lab(s, n, z)]);
                            }
                        }
                    }
                }
            }
            // mixed square on z ≤ y ≤ x: ψ_{φ_x(z)} ∘ φ_x = φ_{ψ_z(x)} ∘ ψ_z
            let bx = l.poset.below(x).iter().map(|&y| y as usize).chain([x]).collect::<Vec<_>>();
            for &z in &bx {
                let pz = s.phi(n, x, z);
                let uz = &l.under[z];
                let zblocks = uz.blocks();
                for &y in &bx {
                    if !l.poset.le(z, y) {
                        continue;
                    }
                    r.checked += 1;
                    let lhs = s.psi(kx, pz, s.phi(n, x, y));
                    let ps = s.psi(n, z, y);
                    let psx = s.psi(n, z, x);
                    for (b, t) in zblocks.iter().enumerate() {
                        let rhs = s.phi(t.len(), psx[b], ps[b]);
                        if lhs[b] != rhs {
                            r.fail("ψ∘φ ≠ φ∘ψ".into(), vec![lab(s, n, x), lab(s, n, y), lab(s, n, z)]);
                        }
                    }
                }
            }
        }
    }
    r
}

/// `P(1)` is a single element.
pub fn verify_unitality(s: &dyn OperadicSpecies) -> Report {
    let mut r = Report::new("unitality", &s.name(), 1);
    r.checked = 1;
    let len = s.level(1).len();
    if len != 1 {
        r.fail(format!("P(1) has {len} elements"), vec![]);
    }
    r
}

pub fn verify_all(s: &SpeciesRef, max_n: usize) -> Report {
    let mut r = Report::new("all", &s.name(), max_n);
    r.merge(verify_unitality(s.as_ref()));
    r.merge(verify_base(s.as_ref(), max_n));
    r.merge(verify_equivariance(s.as_ref(), max_n));
    r.merge(verify_associativity(s.as_ref(), max_n));
    r
}
