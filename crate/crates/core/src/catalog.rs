//! Concrete operadic poset species and their stable names.

use crate::error::{Error, Result};
use crate::partition::{binomial, factorial, restrict_perm, Partition};
use crate::set_operads::{self, OperadVisitor, SetOperad};
use crate::species::{
    build, fiber_product, species_morphism, Built, PartitionSpecies, PosetSpecies, SpeciesMorphism,
    SpeciesRef,
};
use crate::species::Report;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Arity budget used when certifying that an operad is left- or right-basic.
pub const BASIC_CHECK_ARITY: usize = 4;

/// Stable species identifiers: `pi`, `left:<op>`, `right:<op>`, `bi:<op>:<op>`,
/// `ns`, `nc2`, `mlt`, `mlrt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpeciesName {
    Pi,
    Left(String),
    Right(String),
    Bi(String, String),
    Ns,
    Nc2,
    Mlt,
    Mlrt,
}

pub const FAMILY_NAMES: &str = "pi, left:<op>, right:<op>, bi:<op>:<op>, ns, nc2, mlt, mlrt (op: com, as, perm, nac2, up)";

impl SpeciesName {
    pub fn parse(s: &str) -> Result<SpeciesName> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let op = |o: &str| -> Result<String> {
            let o = o.to_ascii_lowercase();
            if set_operads::OPERAD_NAMES.contains(&o.as_str()) {
                Ok(o)
            } else {
                Err(Error::UnknownName(format!("{o} (operads: {})", set_operads::OPERAD_NAMES.join(", "))))
            }
        };
        Ok(match parts.as_slice() {
            ["pi"] => SpeciesName::Pi,
            ["ns"] => SpeciesName::Ns,
            ["nc2"] => SpeciesName::Nc2,
            ["mlt"] => SpeciesName::Mlt,
            ["mlrt"] => SpeciesName::Mlrt,
            ["left", o] => SpeciesName::Left(op(o)?),
            ["right", o] => SpeciesName::Right(op(o)?),
            ["bi", a, b] => SpeciesName::Bi(op(a)?, op(b)?),
            _ => return Err(Error::UnknownName(format!("{s} (families: {FAMILY_NAMES})"))),
        })
    }

    /// Whether the family is built from decorated partitions.
    pub fn is_decorated(&self) -> bool {
        matches!(self, SpeciesName::Left(_) | SpeciesName::Right(_) | SpeciesName::Bi(..))
    }

    /// Largest `n` served without an explicit override: for enumeration and
    /// Möbius numbers when `cohomology` is false, for cochain complexes otherwise.
    pub fn size_budget(&self, cohomology: bool) -> usize {
        use SpeciesName::*;
        match (self, cohomology) {
            (Pi | Ns, false) => 7,
            (Pi | Ns, true) => 6,
            (Nc2, false) => 5,
            (Nc2, true) => 4,
            (Mlt | Mlrt | Left(_) | Right(_) | Bi(..), _) => 5,
        }
    }
}

impl fmt::Display for SpeciesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpeciesName::Pi => write!(f, "pi"),
            SpeciesName::Left(o) => write!(f, "left:{o}"),
            SpeciesName::Right(o) => write!(f, "right:{o}"),
            SpeciesName::Bi(a, b) => write!(f, "bi:{a}:{b}"),
            SpeciesName::Ns => write!(f, "ns"),
            SpeciesName::Nc2 => write!(f, "nc2"),
            SpeciesName::Mlt => write!(f, "mlt"),
            SpeciesName::Mlrt => write!(f, "mlrt"),
        }
    }
}

fn registry() -> &'static Mutex<HashMap<SpeciesName, SpeciesRef>> {
    static REG: OnceLock<Mutex<HashMap<SpeciesName, SpeciesRef>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The shared, cached species for `name`; decorated families are refused
/// when the operad lacks the needed basicness.
pub fn by_name(name: &SpeciesName) -> Result<SpeciesRef> {
    if let Some(s) = registry().lock().unwrap().get(name) {
        return Ok(s.clone());
    }
    let s: SpeciesRef = match name {
        SpeciesName::Pi => build(PartitionSpecies),
        SpeciesName::Ns => build(NonSingleton),
        SpeciesName::Nc2 => build(NonCrossing2),
        SpeciesName::Mlt => build(Multilabeled { rooted: false }),
        SpeciesName::Mlrt => build(Multilabeled { rooted: true }),
        SpeciesName::Left(o) => set_operads::with_operad(o, LeftVisitor).ok_or_else(|| Error::UnknownName(o.clone()))??,
        SpeciesName::Right(o) => {
            set_operads::with_operad(o, RightVisitor).ok_or_else(|| Error::UnknownName(o.clone()))??
        }
        SpeciesName::Bi(a, b) => {
            let l = by_name(&SpeciesName::Left(a.clone()))?;
            let r = by_name(&SpeciesName::Right(b.clone()))?;
            fiber_product(l, r)
        }
    };
    Ok(registry().lock().unwrap().entry(name.clone()).or_insert(s).clone())
}

pub fn parse_and_build(name: &str) -> Result<SpeciesRef> {
    by_name(&SpeciesName::parse(name)?)
}

struct LeftVisitor;

impl OperadVisitor for LeftVisitor {
    type Output = Result<SpeciesRef>;
    fn visit<O: SetOperad>(self, op: &O) -> Self::Output {
        Ok(build(LeftDecorated::new(op.clone())?))
    }
}

struct RightVisitor;

impl OperadVisitor for RightVisitor {
    type Output = Result<SpeciesRef>;
    fn visit<O: SetOperad>(self, op: &O) -> Self::Output {
        Ok(build(RightDecorated::new(op.clone())?))
    }
}

// ---------------------------------------------------------------------------
// decorated partitions

/// Left-decorated partitions `(π, ξ)`, `ξ ∈ O(blocks of π)`.
pub struct LeftDecorated<O: SetOperad> {
    op: O,
}

impl<O: SetOperad> LeftDecorated<O> {
    pub fn new(op: O) -> Result<Self> {
        if !set_operads::is_left_basic(&op, BASIC_CHECK_ARITY) {
            return Err(Error::NotBasic(op.name().into(), "left-basic"));
        }
        Ok(LeftDecorated { op })
    }
}

impl<O: SetOperad> PosetSpecies for LeftDecorated<O> {
    type Elem = (Partition, O::Elem);

    fn name(&self) -> String {
        format!("left:{}", self.op.name())
    }

    fn elements(&self, n: usize) -> Vec<Self::Elem> {
        let mut out = Vec::new();
        for pi in Partition::all(n) {
            for xi in self.op.elements(pi.num_blocks()) {
                out.push((pi.clone(), xi));
            }
        }
        out
    }

    fn le(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        let ((a, xi), (b, eta)) = (x, y);
        a.le(b) && self.op.left_divide(&a.quotient(b), xi, eta).is_some()
    }

    fn upper_generators(&self, x: &Self::Elem) -> Option<Vec<Self::Elem>> {
        let (a, xi) = x;
        let k = a.num_blocks();
        let binary = self.op.elements(2);
        let unit = self.op.unit();
        let mut out = Vec::new();
        for (t, block) in a.blocks().iter().enumerate() {
            for (_, right) in Partition::splits_in_two(block) {
                let mut lab: Vec<usize> = (0..a.n()).map(|i| a.block_of(i)).collect();
                for &i in &right {
                    lab[i] = k;
                }
                let b = Partition::from_labels(&lab);
                let grouping = a.quotient(&b);
                for m in &binary {
                    let mu: Vec<O::Elem> =
                        (0..k).map(|s| if s == t { m.clone() } else { unit.clone() }).collect();
                    out.push((b.clone(), self.op.compose(&grouping, xi, &mu)));
                }
            }
        }
        Some(out)
    }

    fn underlying(&self, x: &Self::Elem) -> Partition {
        x.0.clone()
    }

    fn relabel(&self, sigma: &[usize], x: &Self::Elem) -> Self::Elem {
        (x.0.relabel(sigma), self.op.relabel(&x.1, &x.0.block_map(sigma)))
    }

    fn phi(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (y.0.quotient(&x.0), y.1.clone())
    }

    fn psi(&self, x: &Self::Elem, y: &Self::Elem) -> Vec<Self::Elem> {
        let ((pi, xi), (beta, eta)) = (x, y);
        let mu = self
            .op
            .left_divide(&pi.quotient(beta), xi, eta)
            .expect("ψ is only defined above x");
        pi.blocks().iter().zip(mu).map(|(t, m)| (beta.restrict(t), m)).collect()
    }

    fn label(&self, x: &Self::Elem) -> String {
        format!("{}[{}]", x.0, self.op.label(&x.1))
    }
}

/// Right-decorated partitions `(π, (ξ_T))`, one `ξ_T ∈ O(T)` per block.
pub struct RightDecorated<O: SetOperad> {
    op: O,
}

impl<O: SetOperad> RightDecorated<O> {
    pub fn new(op: O) -> Result<Self> {
        if !set_operads::is_right_basic(&op, BASIC_CHECK_ARITY) {
            return Err(Error::NotBasic(op.name().into(), "right-basic"));
        }
        Ok(RightDecorated { op })
    }

    /// The decorations of the blocks of `fine` inside `a`, given as a sorted subset.
    fn inner_decorations(fine: &Partition, xi: &[O::Elem], a: &[usize]) -> Vec<O::Elem> {
        let mut seen = Vec::new();
        for &i in a {
            let b = fine.block_of(i);
            if !seen.contains(&b) {
                seen.push(b);
            }
        }
        seen.into_iter().map(|b| xi[b].clone()).collect()
    }
}

impl<O: SetOperad> PosetSpecies for RightDecorated<O> {
    type Elem = (Partition, Vec<O::Elem>);

    fn name(&self) -> String {
        format!("right:{}", self.op.name())
    }

    fn elements(&self, n: usize) -> Vec<Self::Elem> {
        let mut out = Vec::new();
        for pi in Partition::all(n) {
            let choices: Vec<Vec<O::Elem>> = pi.block_sizes().iter().map(|&s| self.op.elements(s)).collect();
            for xi in set_operads::tuples(&choices) {
                out.push((pi.clone(), xi));
            }
        }
        out
    }

    fn le(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        let ((a, eta), (b, xi)) = (x, y);
        a.le(b)
            && a.blocks().iter().zip(eta).all(|(block, e)| {
                let inner = Self::inner_decorations(b, xi, block);
                self.op.right_divide(&b.restrict(block), &inner, e).is_some()
            })
    }

    fn lower_generators(&self, y: &Self::Elem) -> Option<Vec<Self::Elem>> {
        let (b, xi) = y;
        let blocks = b.blocks();
        let binary = self.op.elements(2);
        let mut out = Vec::new();
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                let lab: Vec<usize> = (0..b.n()).map(|e| if b.block_of(e) == j { i } else { b.block_of(e) }).collect();
                let a = Partition::from_labels(&lab);
                let mut merged: Vec<usize> = blocks[i].iter().chain(&blocks[j]).copied().collect();
                merged.sort_unstable();
                let grouping = b.restrict(&merged);
                for m in &binary {
                    let dec = self.op.compose(&grouping, m, &[xi[i].clone(), xi[j].clone()]);
                    let eta: Vec<O::Elem> = a
                        .blocks()
                        .iter()
                        .map(|blk| if blk[0] == blocks[i][0] { dec.clone() } else { xi[b.block_of(blk[0])].clone() })
                        .collect();
                    out.push((a.clone(), eta));
                }
            }
        }
        Some(out)
    }

    fn underlying(&self, x: &Self::Elem) -> Partition {
        x.0.clone()
    }

    fn relabel(&self, sigma: &[usize], x: &Self::Elem) -> Self::Elem {
        let (pi, xi) = x;
        let bm = pi.block_map(sigma);
        let mut out = xi.clone();
        for (b, block) in pi.blocks().iter().enumerate() {
            out[bm[b]] = self.op.relabel(&xi[b], &restrict_perm(sigma, block));
        }
        (pi.relabel(sigma), out)
    }

    fn phi(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let ((pi, xi), (alpha, eta)) = (x, y);
        let nu = alpha
            .blocks()
            .iter()
            .zip(eta)
            .map(|(a, e)| {
                let inner = Self::inner_decorations(pi, xi, a);
                self.op.right_divide(&pi.restrict(a), &inner, e).expect("φ is only defined below x")
            })
            .collect();
        (alpha.quotient(pi), nu)
    }

    fn psi(&self, x: &Self::Elem, y: &Self::Elem) -> Vec<Self::Elem> {
        let ((pi, _), (beta, zeta)) = (x, y);
        pi.blocks()
            .iter()
            .map(|t| (beta.restrict(t), Self::inner_decorations(beta, zeta, t)))
            .collect()
    }

    fn label(&self, x: &Self::Elem) -> String {
        let (pi, xi) = x;
        pi.blocks()
            .iter()
            .zip(xi)
            .map(|(b, d)| {
                let lab = self.op.label(d);
                let names: String = b.iter().map(|i| (i + 1).to_string()).collect();
                format!("{names}:{lab}")
            })
            .collect::<Vec<_>>()
            .join("|")
    }
}

// ---------------------------------------------------------------------------
// non-singleton partitions

/// Partitions with at most one block of size at least two.
#[derive(Clone, Copy, Debug, Default)]
pub struct NonSingleton;

fn is_ns(p: &Partition) -> bool {
    p.block_sizes().iter().filter(|&&s| s > 1).count() <= 1
}

impl PosetSpecies for NonSingleton {
    type Elem = Partition;

    fn name(&self) -> String {
        "ns".into()
    }

    fn elements(&self, n: usize) -> Vec<Partition> {
        Partition::all(n).into_iter().filter(is_ns).collect()
    }

    fn le(&self, x: &Partition, y: &Partition) -> bool {
        x.le(y)
    }

    fn upper_generators(&self, x: &Partition) -> Option<Vec<Partition>> {
        Some(crate::species::split_block_covers(x).into_iter().filter(is_ns).collect())
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

// ---------------------------------------------------------------------------
// non-crossing 2-partitions

/// `(π, ρ, f)`: `ρ` non-crossing on positions, `f` sends blocks of `π` to
/// blocks of `ρ` of the same size (both indexed by minimum).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nc2Elem {
    pub pi: Partition,
    pub rho: Partition,
    pub f: Vec<u8>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NonCrossing2;

/// Bijections `blocks(a) → blocks(b)` preserving block sizes.
fn size_bijections(a: &[usize], b: &[usize]) -> Vec<Vec<u8>> {
    fn rec(i: usize, a: &[usize], b: &[usize], used: &mut Vec<bool>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == a.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..b.len() {
            if !used[j] && b[j] == a[i] {
                used[j] = true;
                cur.push(j as u8);
                rec(i + 1, a, b, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, a, b, &mut vec![false; b.len()], &mut Vec::new(), &mut out);
    out
}

fn sorted_sizes(p: &Partition) -> Vec<usize> {
    let mut s = p.block_sizes();
    s.sort_unstable();
    s
}

impl PosetSpecies for NonCrossing2 {
    type Elem = Nc2Elem;

    fn name(&self) -> String {
        "nc2".into()
    }

    fn elements(&self, n: usize) -> Vec<Nc2Elem> {
        let all = Partition::all(n);
        let nc: Vec<&Partition> = all.iter().filter(|p| p.is_noncrossing()).collect();
        let mut out = Vec::new();
        for pi in &all {
            let ps = sorted_sizes(pi);
            for rho in nc.iter().filter(|r| sorted_sizes(r) == ps) {
                for f in size_bijections(&pi.block_sizes(), &rho.block_sizes()) {
                    out.push(Nc2Elem { pi: pi.clone(), rho: (*rho).clone(), f });
                }
            }
        }
        out
    }

    fn le(&self, x: &Nc2Elem, y: &Nc2Elem) -> bool {
        if !(x.pi.le(&y.pi) && x.rho.le(&y.rho)) {
            return false;
        }
        let ymins: Vec<usize> = y.rho.blocks().iter().map(|b| b[0]).collect();
        y.pi.blocks().iter().enumerate().all(|(i, b)| {
            let t = x.pi.block_of(b[0]);
            x.rho.block_of(ymins[y.f[i] as usize]) == x.f[t] as usize
        })
    }

    fn underlying(&self, x: &Nc2Elem) -> Partition {
        x.pi.clone()
    }

    fn relabel(&self, sigma: &[usize], x: &Nc2Elem) -> Nc2Elem {
        let bm = x.pi.block_map(sigma);
        let mut f = x.f.clone();
        for (b, &c) in bm.iter().enumerate() {
            f[c] = x.f[b];
        }
        Nc2Elem { pi: x.pi.relabel(sigma), rho: x.rho.clone(), f }
    }

    fn phi(&self, x: &Nc2Elem, y: &Nc2Elem) -> Nc2Elem {
        Nc2Elem { pi: y.pi.quotient(&x.pi), rho: y.rho.quotient(&x.rho), f: y.f.clone() }
    }

    fn psi(&self, x: &Nc2Elem, y: &Nc2Elem) -> Vec<Nc2Elem> {
        let rblocks = x.rho.blocks();
        let ybl = y.pi.blocks();
        let yrb = y.rho.blocks();
        x.pi.blocks()
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let target = &rblocks[x.f[i] as usize];
                // blocks of y.pi inside t and of y.rho inside target, in order
                let inner_pi: Vec<usize> = (0..ybl.len()).filter(|&b| x.pi.block_of(ybl[b][0]) == i).collect();
                let inner_rho: Vec<usize> =
                    (0..yrb.len()).filter(|&b| x.rho.block_of(yrb[b][0]) == x.f[i] as usize).collect();
                let f = inner_pi
                    .iter()
                    .map(|&b| inner_rho.iter().position(|&r| r == y.f[b] as usize).unwrap() as u8)
                    .collect();
                Nc2Elem { pi: y.pi.restrict(t), rho: y.rho.restrict(target), f }
            })
            .collect()
    }

    fn label(&self, x: &Nc2Elem) -> String {
        let rb = x.rho.blocks();
        let parts: Vec<String> = x
            .pi
            .blocks()
            .iter()
            .zip(&x.f)
            .map(|(b, &j)| {
                let s: String = b.iter().map(|i| (i + 1).to_string()).collect();
                let t: String = rb[j as usize].iter().map(|i| (i + 1).to_string()).collect();
                format!("{s}>{t}")
            })
            .collect();
        parts.join("|")
    }
}

// ---------------------------------------------------------------------------
// multilabeled trees

/// A tree whose nodes are the blocks of a partition (indexed by minimum);
/// edges `(u, v)` with `u < v`, sorted. `root` is 0 in the unrooted case.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeElem {
    pub pi: Partition,
    pub edges: Vec<(u8, u8)>,
    pub root: u8,
}

#[derive(Clone, Copy, Debug)]
pub struct Multilabeled {
    pub rooted: bool,
}

/// All labeled trees on `{0..k-1}` via Prüfer codes.
pub fn labeled_trees(k: usize) -> Vec<Vec<(u8, u8)>> {
    match k {
        0 => return Vec::new(),
        1 => return vec![Vec::new()],
        2 => return vec![vec![(0, 1)]],
        _ => {}
    }
    let total = k.pow(k as u32 - 2);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut seq = vec![0usize; k - 2];
        for s in seq.iter_mut().rev() {
            *s = code % k;
            code /= k;
        }
        let mut degree = vec![1usize; k];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(k - 1);
        for &s in &seq {
            let leaf = (0..k).find(|&v| degree[v] == 1).unwrap();
            edges.push(norm(leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
        edges.push(norm(rest[0], rest[1]));
        edges.sort_unstable();
        out.push(edges);
    }
    out
}

fn norm(a: usize, b: usize) -> (u8, u8) {
    (a.min(b) as u8, a.max(b) as u8)
}

fn sorted_edges(mut e: Vec<(u8, u8)>) -> Vec<(u8, u8)> {
    for x in e.iter_mut() {
        *x = norm(x.0 as usize, x.1 as usize);
    }
    e.sort_unstable();
    e
}

/// Distance of every node from `root`.
fn depths(k: usize, edges: &[(u8, u8)], root: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in edges {
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    let mut d = vec![usize::MAX; k];
    d[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if d[w] == usize::MAX {
                d[w] = d[v] + 1;
                queue.push_back(w);
            }
        }
    }
    d
}

impl PosetSpecies for Multilabeled {
    type Elem = TreeElem;

    fn name(&self) -> String {
        if self.rooted { "mlrt" } else { "mlt" }.into()
    }

    fn elements(&self, n: usize) -> Vec<TreeElem> {
        let mut out = Vec::new();
        for pi in Partition::all(n) {
            let k = pi.num_blocks();
            for edges in labeled_trees(k) {
                let roots = if self.rooted { k } else { 1 };
                for root in 0..roots {
                    out.push(TreeElem { pi: pi.clone(), edges: edges.clone(), root: root as u8 });
                }
            }
        }
        out
    }

    /// `x ≤ y` when `x` is obtained from `y` by contracting connected groups of nodes.
    fn le(&self, x: &TreeElem, y: &TreeElem) -> bool {
        if !x.pi.le(&y.pi) {
            return false;
        }
        let group: Vec<usize> = y.pi.blocks().iter().map(|b| x.pi.block_of(b[0])).collect();
        let mut internal = vec![0usize; x.pi.num_blocks()];
        let mut quotient = Vec::new();
        for &(a, b) in &y.edges {
            let (ga, gb) = (group[a as usize], group[b as usize]);
            if ga == gb {
                internal[ga] += 1;
            } else {
                quotient.push(norm(ga, gb));
            }
        }
        let mut sizes = vec![0usize; x.pi.num_blocks()];
        for &g in &group {
            sizes[g] += 1;
        }
        quotient.sort_unstable();
        quotient == x.edges
            && internal.iter().zip(&sizes).all(|(&i, &s)| i + 1 == s)
            && (!self.rooted || group[y.root as usize] == x.root as usize)
    }

    fn underlying(&self, x: &TreeElem) -> Partition {
        x.pi.clone()
    }

    fn relabel(&self, sigma: &[usize], x: &TreeElem) -> TreeElem {
        let bm = x.pi.block_map(sigma);
        let edges = sorted_edges(x.edges.iter().map(|&(a, b)| (bm[a as usize] as u8, bm[b as usize] as u8)).collect());
        let root = if self.rooted { bm[x.root as usize] as u8 } else { 0 };
        TreeElem { pi: x.pi.relabel(sigma), edges, root }
    }

    fn phi(&self, x: &TreeElem, y: &TreeElem) -> TreeElem {
        TreeElem { pi: y.pi.quotient(&x.pi), edges: y.edges.clone(), root: y.root }
    }

    fn psi(&self, x: &TreeElem, y: &TreeElem) -> Vec<TreeElem> {
        let yblocks = y.pi.blocks();
        let k = yblocks.len();
        let d = depths(k, &y.edges, y.root as usize);
        x.pi.blocks()
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let nodes: Vec<usize> = (0..k).filter(|&b| x.pi.block_of(yblocks[b][0]) == i).collect();
                let local = |v: u8| nodes.binary_search(&(v as usize)).ok();
                let edges = sorted_edges(
                    y.edges
                        .iter()
                        .filter_map(|&(a, b)| Some((local(a)? as u8, local(b)? as u8)))
                        .collect(),
                );
                let root = if self.rooted {
                    (0..nodes.len()).min_by_key(|&j| d[nodes[j]]).unwrap() as u8
                } else {
                    0
                };
                TreeElem { pi: y.pi.restrict(t), edges, root }
            })
            .collect()
    }

    fn label(&self, x: &TreeElem) -> String {
        let names: Vec<String> =
            x.pi.blocks().iter().map(|b| b.iter().map(|i| (i + 1).to_string()).collect()).collect();
        let mut s = if x.edges.is_empty() {
            names[0].clone()
        } else {
            x.edges
                .iter()
                .map(|&(a, b)| format!("{}-{}", names[a as usize], names[b as usize]))
                .collect::<Vec<_>>()
                .join(",")
        };
        if self.rooted {
            s = format!("{s}@{}", names[x.root as usize]);
        }
        s
    }
}

/// Forgetting the root, `MLRT → MLT`, validated up to `max_n`.
pub fn forget_root(max_n: usize) -> std::result::Result<SpeciesMorphism, Report> {
    let src = Arc::new(Built::new(Multilabeled { rooted: true }));
    let tgt = Arc::new(Built::new(Multilabeled { rooted: false }));
    let (s2, t2) = (src.clone(), tgt.clone());
    species_morphism(
        src,
        tgt,
        move |n| {
            let ts = s2.typed(n);
            ts.elems
                .iter()
                .map(|e| t2.index_of(n, &TreeElem { root: 0, ..e.clone() }) as u32)
                .collect()
        },
        max_n,
    )
}

// ---------------------------------------------------------------------------
// enumerative helpers

/// Partitions of `{1..n}` into `k` lists: `C(n,k)·(n−1)!/(k−1)!`.
pub fn lists_count(n: usize, k: usize) -> Result<u128> {
    if k == 0 || k > n {
        return Err(Error::Malformed(format!("lists_count needs 1 ≤ k ≤ n, got n={n}, k={k}")));
    }
    Ok(binomial(n as u64, k as u64) * factorial(n as u64 - 1) / factorial(k as u64 - 1))
}

/// The same numbers from `f(n,k) = f(n−1,k−1) + (n+k−1)·f(n−1,k)`.
pub fn lists_count_recurrence(n: usize) -> Vec<Vec<u128>> {
    let mut f = vec![vec![0u128; n + 1]; n + 1];
    if n >= 1 {
        f[1][1] = 1;
    }
    for m in 2..=n {
        for k in 1..=m {
            f[m][k] = f[m - 1][k - 1] + (m + k - 1) as u128 * f[m - 1][k];
        }
    }
    f
}

/// For `^{As}Π(n)`: the maximal elements listed in Steinhaus–Johnson–Trotter
/// order of their permutations.
pub fn sjt_atoms_left_as(n: usize) -> Vec<usize> {
    let built = Built::new(LeftDecorated { op: set_operads::As });
    let disc = Partition::discrete(n);
    crate::poset::sjt_order(n)
        .into_iter()
        .map(|w| built.index_of(n, &(disc.clone(), w.iter().map(|c| c - 1).collect())))
        .collect()
}

/// `n^{n-2}`, the number of labeled trees on `n` vertices.
pub fn cayley(n: u32) -> u128 {
    if n <= 1 {
        1
    } else {
        (n as u128).pow(n - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::{brute_force_level, verify_all, PartitionSpecies};

    fn same_order<S: PosetSpecies>(s: S, max_n: usize) {
        for n in 1..=max_n {
            let fast = crate::species::build_level(&s, n);
            let slow = brute_force_level(&s, n);
            assert_eq!(fast.level.poset.covers(), slow.covers(), "{} n={n}", s.name());
        }
    }

    #[test]
    fn generated_orders_match_definitions() {
        same_order(PartitionSpecies, 4);
        same_order(NonSingleton, 4);
        same_order(LeftDecorated::new(set_operads::As).unwrap(), 4);
        same_order(LeftDecorated::new(set_operads::Nac2).unwrap(), 4);
        same_order(LeftDecorated::new(set_operads::Com).unwrap(), 4);
        same_order(RightDecorated::new(set_operads::As).unwrap(), 4);
        same_order(RightDecorated::new(set_operads::Perm).unwrap(), 4);
        same_order(NonCrossing2, 4);
        same_order(Multilabeled { rooted: false }, 4);
        same_order(Multilabeled { rooted: true }, 4);
    }

    fn count(name: &str, n: usize) -> usize {
        parse_and_build(name).unwrap().level(n).len()
    }

    #[test]
    fn element_counts() {
        assert_eq!(count("left:as", 3), 13);
        assert_eq!(count("right:as", 3), 13);
        assert_eq!(count("right:perm", 3), 10);
        assert_eq!(count("ns", 4), 12);
        assert_eq!(count("ns", 3), 5);
        // Σ_π |As(#blocks)| · ∏_T |As(|T|)|
        for n in 1..=4 {
            let expected: u128 = Partition::all(n)
                .iter()
                .map(|p| factorial(p.num_blocks() as u64) * p.block_sizes().iter().map(|&s| factorial(s as u64)).product::<u128>())
                .sum();
            assert_eq!(count("bi:as:as", n) as u128, expected);
        }
        assert_eq!(count("bi:as:as", 2), 4);
        assert_eq!(count("mlt", 3), 7);
        assert_eq!(count("mlrt", 3), 16);
        for n in 1..=4 {
            assert_eq!(count("nc2", n), (n + 1).pow(n as u32 - 1));
        }
        let l = parse_and_build("left:com").unwrap().level(4);
        assert_eq!(l.len(), 15);
        let mlt = parse_and_build("mlt").unwrap();
        assert_eq!(mlt.level(4).poset.maximal().len(), 16);
        let nc2 = parse_and_build("nc2").unwrap().level(3);
        assert_eq!((nc2.poset.maximal().len(), nc2.poset.minimal().len()), (6, 1));
    }

    #[test]
    fn refusals() {
        assert!(matches!(parse_and_build("left:perm"), Err(Error::NotBasic(..))));
        assert!(matches!(parse_and_build("right:nac2"), Err(Error::NotBasic(..))));
        assert!(matches!(parse_and_build("right:up"), Err(Error::NotBasic(..))));
        assert!(matches!(SpeciesName::parse("hypertrees"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn species_axioms() {
        for name in ["pi", "ns", "left:as", "right:as", "right:perm", "left:nac2", "nc2", "mlt", "mlrt", "bi:as:as"] {
            let s = parse_and_build(name).unwrap();
            let r = verify_all(&s, 4);
            assert!(r.passed(), "{name}: {:?}", r.failures);
        }
    }

    #[test]
    fn extremal_elements_are_operations() {
        let l = parse_and_build("left:as").unwrap().level(4);
        assert_eq!(l.poset.maximal().len(), 24);
        let r = parse_and_build("right:perm").unwrap().level(4);
        assert_eq!(r.poset.minimal().len(), 4);
    }

    #[test]
    fn lists() {
        let rec = lists_count_recurrence(8);
        for n in 1..=8 {
            for k in 1..=n {
                assert_eq!(lists_count(n, k).unwrap(), rec[n][k]);
            }
            assert_eq!(lists_count(n, n).unwrap(), 1);
        }
        assert_eq!(lists_count(3, 2).unwrap(), 6);
        assert_eq!(lists_count(4, 2).unwrap(), 36);
        assert!(lists_count(2, 3).is_err());
    }

    #[test]
    fn root_forgetting_is_a_morphism() {
        let m = forget_root(4).unwrap_or_else(|r| panic!("{:?}", r.failures));
        assert_eq!(m.map(3).len(), 16);
    }
}
