//! Finite set operads: Com, As, Perm, NAC₂ and UP.
//!
//! Elements of arity `n` live on the canonical set `{0..n-1}`. A composition
//! is indexed by a partition of `{0..n-1}`: the outer element acts on the
//! blocks (ordered by minimum) and the inner element of block `B` acts on
//! `B`, identified order-preservingly with `{0..|B|-1}`.

use crate::partition::{permutations, restrict_perm, Partition};
use std::collections::{BTreeSet, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

pub trait SetOperad: Clone + Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn name(&self) -> &'static str;

    /// All elements of arity `n` in canonical order.
    fn elements(&self, n: usize) -> Vec<Self::Elem>;

    fn arity(&self, x: &Self::Elem) -> usize;

    /// Image under the bijection `i ↦ sigma[i]`.
    fn relabel(&self, x: &Self::Elem, sigma: &[usize]) -> Self::Elem;

    fn compose(&self, grouping: &Partition, outer: &Self::Elem, inner: &[Self::Elem]) -> Self::Elem;

    fn label(&self, x: &Self::Elem) -> String;

    fn unit(&self) -> Self::Elem {
        self.elements(1).swap_remove(0)
    }

    fn count(&self, n: usize) -> usize {
        self.elements(n).len()
    }

    /// Inner elements `μ` with `outer ∘ μ = target`, if they exist (first found).
    fn left_divide(&self, grouping: &Partition, outer: &Self::Elem, target: &Self::Elem) -> Option<Vec<Self::Elem>> {
        let choices: Vec<Vec<Self::Elem>> = grouping.block_sizes().iter().map(|&s| self.elements(s)).collect();
        let found = tuples(&choices).find(|mu| &self.compose(grouping, outer, mu) == target);
        found
    }

    /// The outer element `ν` with `ν ∘ inner = target`, if it exists (first found).
    fn right_divide(&self, grouping: &Partition, inner: &[Self::Elem], target: &Self::Elem) -> Option<Self::Elem> {
        self.elements(grouping.num_blocks())
            .into_iter()
            .find(|nu| &self.compose(grouping, nu, inner) == target)
    }
}

/// Cartesian product of choice lists, in lexicographic order.
pub(crate) fn tuples<T: Clone>(choices: &[Vec<T>]) -> impl Iterator<Item = Vec<T>> + '_ {
    let total: usize = choices.iter().map(Vec::len).product();
    (0..total).map(move |mut code| {
        let mut out = Vec::with_capacity(choices.len());
        let mut digits = Vec::with_capacity(choices.len());
        for c in choices.iter().rev() {
            digits.push(code % c.len());
            code /= c.len();
        }
        for (c, d) in choices.iter().zip(digits.iter().rev()) {
            out.push(c[*d].clone());
        }
        out
    })
}

/// For every partition `π` of `m ≤ n` and outer `ξ`, `μ ↦ ξ ∘ μ` is injective.
pub fn is_left_basic<O: SetOperad>(op: &O, n: usize) -> bool {
    first_left_basic_failure(op, n).is_none()
}

pub fn first_left_basic_failure<O: SetOperad>(op: &O, n: usize) -> Option<(Partition, O::Elem)> {
    for m in 1..=n {
        for pi in Partition::all(m) {
            let choices: Vec<Vec<O::Elem>> = pi.block_sizes().iter().map(|&s| op.elements(s)).collect();
            for xi in op.elements(pi.num_blocks()) {
                let mut seen = HashSet::new();
                for mu in tuples(&choices) {
                    if !seen.insert(op.compose(&pi, &xi, &mu)) {
                        return Some((pi, xi));
                    }
                }
            }
        }
    }
    None
}

/// For every partition and inner family `(ξ_T)`, `ν ↦ ν ∘ (ξ_T)` is injective.
pub fn is_right_basic<O: SetOperad>(op: &O, n: usize) -> bool {
    first_right_basic_failure(op, n).is_none()
}

pub fn first_right_basic_failure<O: SetOperad>(op: &O, n: usize) -> Option<(Partition, Vec<O::Elem>)> {
    for m in 1..=n {
        for pi in Partition::all(m) {
            let choices: Vec<Vec<O::Elem>> = pi.block_sizes().iter().map(|&s| op.elements(s)).collect();
            let outers = op.elements(pi.num_blocks());
            for inner in tuples(&choices) {
                let mut seen = HashSet::new();
                for nu in &outers {
                    if !seen.insert(op.compose(&pi, nu, &inner)) {
                        return Some((pi, inner));
                    }
                }
            }
        }
    }
    None
}

/// Exhaustive unit, associativity and equivariance checks up to arity `n`.
pub fn check_operad_axioms<O: SetOperad>(op: &O, n: usize) -> Result<(), String> {
    let unit = op.unit();
    for m in 1..=n {
        for x in op.elements(m) {
            let right = op.compose(&Partition::discrete(m), &x, &vec![unit.clone(); m]);
            let left = op.compose(&Partition::one_block(m), &unit, std::slice::from_ref(&x));
            if right != x || left != x {
                return Err(format!("unit fails on {}", op.label(&x)));
            }
        }
        let parts = Partition::all(m);
        for alpha in &parts {
            for beta in parts.iter().filter(|b| alpha.le(b)) {
                check_assoc(op, alpha, beta)?;
            }
        }
        for sigma in permutations(m) {
            for pi in &parts {
                check_equivariance(op, pi, &sigma)?;
            }
        }
    }
    Ok(())
}

fn check_assoc<O: SetOperad>(op: &O, alpha: &Partition, beta: &Partition) -> Result<(), String> {
    // (ξ ∘_α μ) ∘_β ν  =  ξ ∘_α (μ_A ∘_{β|A} ν|A)
    let group = alpha.quotient(beta);
    let ablocks = alpha.blocks();
    let mu_choices: Vec<Vec<O::Elem>> = group.block_sizes().iter().map(|&s| op.elements(s)).collect();
    let nu_choices: Vec<Vec<O::Elem>> = beta.block_sizes().iter().map(|&s| op.elements(s)).collect();
    for xi in op.elements(alpha.num_blocks()) {
        for mu in tuples(&mu_choices) {
            let mid = op.compose(&group, &xi, &mu);
            for nu in tuples(&nu_choices) {
                let lhs = op.compose(beta, &mid, &nu);
                let inner: Vec<O::Elem> = ablocks
                    .iter()
                    .enumerate()
                    .map(|(ai, a)| {
                        let sub = beta.restrict(a);
                        let nus: Vec<O::Elem> = group.blocks()[ai].iter().map(|&b| nu[b].clone()).collect();
                        op.compose(&sub, &mu[ai], &nus)
                    })
                    .collect();
                let rhs = op.compose(alpha, &xi, &inner);
                if lhs != rhs {
                    return Err(format!(
                        "associativity fails for {alpha} ≤ {beta}: {} vs {}",
                        op.label(&lhs),
                        op.label(&rhs)
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_equivariance<O: SetOperad>(op: &O, pi: &Partition, sigma: &[usize]) -> Result<(), String> {
    let blocks = pi.blocks();
    let image = pi.relabel(sigma);
    let bmap = pi.block_map(sigma);
    let choices: Vec<Vec<O::Elem>> = pi.block_sizes().iter().map(|&s| op.elements(s)).collect();
    for xi in op.elements(pi.num_blocks()) {
        for mu in tuples(&choices) {
            let lhs = op.relabel(&op.compose(pi, &xi, &mu), sigma);
            let mut inner = vec![None; mu.len()];
            for (b, block) in blocks.iter().enumerate() {
                inner[bmap[b]] = Some(op.relabel(&mu[b], &restrict_perm(sigma, block)));
            }
            let inner: Vec<O::Elem> = inner.into_iter().map(Option::unwrap).collect();
            let rhs = op.compose(&image, &op.relabel(&xi, &bmap), &inner);
            if lhs != rhs {
                return Err(format!("equivariance fails for {pi} under {sigma:?}"));
            }
        }
    }
    Ok(())
}

/// Maps canonical indices of each block back to the ground set.
fn lift(grouping: &Partition) -> Vec<Vec<usize>> {
    grouping.blocks()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Com;

impl SetOperad for Com {
    type Elem = u8;

    fn name(&self) -> &'static str {
        "com"
    }

    fn elements(&self, n: usize) -> Vec<u8> {
        if n == 0 {
            Vec::new()
        } else {
            vec![n as u8]
        }
    }

    fn arity(&self, x: &u8) -> usize {
        *x as usize
    }

    fn relabel(&self, x: &u8, _sigma: &[usize]) -> u8 {
        *x
    }

    fn compose(&self, grouping: &Partition, _outer: &u8, _inner: &[u8]) -> u8 {
        grouping.n() as u8
    }

    fn label(&self, _x: &u8) -> String {
        "*".into()
    }

    fn left_divide(&self, grouping: &Partition, _outer: &u8, _target: &u8) -> Option<Vec<u8>> {
        Some(grouping.block_sizes().iter().map(|&s| s as u8).collect())
    }

    fn right_divide(&self, grouping: &Partition, _inner: &[u8], _target: &u8) -> Option<u8> {
        Some(grouping.num_blocks() as u8)
    }
}

/// Linear orders, stored as the word listing the elements from first to last.
#[derive(Clone, Copy, Debug, Default)]
pub struct As;

impl SetOperad for As {
    type Elem = Vec<u8>;

    fn name(&self) -> &'static str {
        "as"
    }

    fn elements(&self, n: usize) -> Vec<Vec<u8>> {
        if n == 0 {
            return Vec::new();
        }
        permutations(n).into_iter().map(|p| p.into_iter().map(|i| i as u8).collect()).collect()
    }

    fn arity(&self, x: &Vec<u8>) -> usize {
        x.len()
    }

    fn relabel(&self, x: &Vec<u8>, sigma: &[usize]) -> Vec<u8> {
        x.iter().map(|&i| sigma[i as usize] as u8).collect()
    }

    fn compose(&self, grouping: &Partition, outer: &Vec<u8>, inner: &[Vec<u8>]) -> Vec<u8> {
        let blocks = lift(grouping);
        let mut out = Vec::with_capacity(grouping.n());
        for &b in outer {
            let b = b as usize;
            out.extend(inner[b].iter().map(|&i| blocks[b][i as usize] as u8));
        }
        out
    }

    fn label(&self, x: &Vec<u8>) -> String {
        x.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("<")
    }

    fn left_divide(&self, grouping: &Partition, outer: &Vec<u8>, target: &Vec<u8>) -> Option<Vec<Vec<u8>>> {
        let blocks = lift(grouping);
        let mu: Vec<Vec<u8>> = blocks
            .iter()
            .map(|b| {
                target
                    .iter()
                    .filter_map(|&e| b.binary_search(&(e as usize)).ok().map(|p| p as u8))
                    .collect()
            })
            .collect();
        (&self.compose(grouping, outer, &mu) == target).then_some(mu)
    }

    fn right_divide(&self, grouping: &Partition, inner: &[Vec<u8>], target: &Vec<u8>) -> Option<Vec<u8>> {
        let mut nu: Vec<u8> = Vec::new();
        for &e in target {
            let b = grouping.block_of(e as usize) as u8;
            if nu.last() != Some(&b) {
                nu.push(b);
            }
        }
        if nu.len() != grouping.num_blocks() {
            return None;
        }
        (&self.compose(grouping, &nu, inner) == target).then_some(nu)
    }
}

/// Pointed sets: `(n, p)` is the operation whose leftmost variable is `p`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Perm;

impl SetOperad for Perm {
    type Elem = (u8, u8);

    fn name(&self) -> &'static str {
        "perm"
    }

    fn elements(&self, n: usize) -> Vec<(u8, u8)> {
        (0..n as u8).map(|p| (n as u8, p)).collect()
    }

    fn arity(&self, x: &(u8, u8)) -> usize {
        x.0 as usize
    }

    fn relabel(&self, x: &(u8, u8), sigma: &[usize]) -> (u8, u8) {
        (x.0, sigma[x.1 as usize] as u8)
    }

    fn compose(&self, grouping: &Partition, outer: &(u8, u8), inner: &[(u8, u8)]) -> (u8, u8) {
        let b = outer.1 as usize;
        let block = &grouping.blocks()[b];
        (grouping.n() as u8, block[inner[b].1 as usize] as u8)
    }

    fn label(&self, x: &(u8, u8)) -> String {
        format!("•{}", x.1 + 1)
    }

    fn right_divide(&self, grouping: &Partition, inner: &[(u8, u8)], target: &(u8, u8)) -> Option<(u8, u8)> {
        let nu = (grouping.num_blocks() as u8, grouping.block_of(target.1 as usize) as u8);
        (&self.compose(grouping, &nu, inner) == target).then_some(nu)
    }
}

/// Decoration of a binary node; only highest nodes of UP trees carry one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    None,
    /// `a ⊣ b`
    Left,
    /// `a ⊢ b`
    Right,
}

/// Planar binary tree with labeled leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(u8),
    Node(Box<Tree>, Box<Tree>, Sym),
}

impl Tree {
    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(l, r, _) => l.leaves() + r.leaves(),
        }
    }

    pub fn min_leaf(&self) -> u8 {
        match self {
            Tree::Leaf(i) => *i,
            Tree::Node(l, r, _) => l.min_leaf().min(r.min_leaf()),
        }
    }

    fn leaf_set(&self, out: &mut Vec<u8>) {
        match self {
            Tree::Leaf(i) => out.push(*i),
            Tree::Node(l, r, _) => {
                l.leaf_set(out);
                r.leaf_set(out);
            }
        }
    }

    fn map_leaves(&self, f: &impl Fn(u8) -> u8) -> Tree {
        match self {
            Tree::Leaf(i) => Tree::Leaf(f(*i)),
            Tree::Node(l, r, s) => Tree::Node(Box::new(l.map_leaves(f)), Box::new(r.map_leaves(f)), *s),
        }
    }

    fn substitute(&self, subs: &[Tree]) -> Tree {
        match self {
            Tree::Leaf(i) => subs[*i as usize].clone(),
            Tree::Node(l, r, s) => Tree::Node(Box::new(l.substitute(subs)), Box::new(r.substitute(subs)), *s),
        }
    }

    /// The subtree whose leaf set is exactly `set` (sorted), if any.
    fn clade(&self, set: &[u8]) -> Option<&Tree> {
        let mut mine = Vec::new();
        self.leaf_set(&mut mine);
        mine.sort_unstable();
        if mine == set {
            return Some(self);
        }
        match self {
            Tree::Leaf(_) => None,
            Tree::Node(l, r, _) => {
                if l.contains_any(set) {
                    l.clade(set)
                } else {
                    r.clade(set)
                }
            }
        }
    }

    fn contains_any(&self, set: &[u8]) -> bool {
        match self {
            Tree::Leaf(i) => set.binary_search(i).is_ok(),
            Tree::Node(l, r, _) => l.contains_any(set) || r.contains_any(set),
        }
    }

    fn fmt_into(&self, out: &mut String) {
        match self {
            Tree::Leaf(i) => out.push_str(&(i + 1).to_string()),
            Tree::Node(l, r, s) => {
                out.push('(');
                l.fmt_into(out);
                out.push_str(match s {
                    Sym::None => " ",
                    Sym::Left => " ⊣ ",
                    Sym::Right => " ⊢ ",
                });
                r.fmt_into(out);
                out.push(')');
            }
        }
    }
}

/// All planar binary trees with leaves labeled by `set`, every node carrying `sym`.
fn planar_trees(set: &[u8], syms: &[Sym]) -> Vec<Tree> {
    if set.len() == 1 {
        return vec![Tree::Leaf(set[0])];
    }
    let mut out = Vec::new();
    let k = set.len();
    for mask in 1..(1u32 << k) - 1 {
        let left: Vec<u8> = (0..k).filter(|&j| mask >> j & 1 == 1).map(|j| set[j]).collect();
        let right: Vec<u8> = (0..k).filter(|&j| mask >> j & 1 == 0).map(|j| set[j]).collect();
        let lt = planar_trees(&left, syms);
        let rt = planar_trees(&right, syms);
        for l in &lt {
            for r in &rt {
                for &s in syms {
                    out.push(Tree::Node(Box::new(l.clone()), Box::new(r.clone()), s));
                }
            }
        }
    }
    out
}

trait TreeOperad {
    fn canonical(t: Tree) -> Tree;
    fn syms() -> &'static [Sym];
}

fn tree_elements<T: TreeOperad>(n: usize) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    let set: Vec<u8> = (0..n as u8).collect();
    let all: BTreeSet<Tree> = planar_trees(&set, T::syms()).into_iter().map(T::canonical).collect();
    all.into_iter().collect()
}

fn tree_compose<T: TreeOperad>(grouping: &Partition, outer: &Tree, inner: &[Tree]) -> Tree {
    let blocks = lift(grouping);
    let subs: Vec<Tree> = inner
        .iter()
        .enumerate()
        .map(|(b, t)| t.map_leaves(&|i| blocks[b][i as usize] as u8))
        .collect();
    T::canonical(outer.substitute(&subs))
}

/// Clade extraction: each inner tree is the subtree spanned by its block.
fn tree_left_divide<T: TreeOperad>(grouping: &Partition, outer: &Tree, target: &Tree) -> Option<Vec<Tree>> {
    let mut mu = Vec::new();
    for block in lift(grouping) {
        let set: Vec<u8> = block.iter().map(|&i| i as u8).collect();
        let sub = target.clade(&set)?;
        let local = sub.map_leaves(&|i| block.binary_search(&(i as usize)).unwrap() as u8);
        mu.push(T::canonical(local));
    }
    (&tree_compose::<T>(grouping, outer, &mu) == target).then_some(mu)
}

/// Non-associative algebras with `x(yz)` and `(xy)z` symmetric up to the
/// highest level: binary trees modulo swapping children of non-highest nodes.
#[derive(Clone, Copy, Debug, Default)]
pub struct Nac2;

impl TreeOperad for Nac2 {
    fn canonical(t: Tree) -> Tree {
        match t {
            Tree::Leaf(_) => t,
            Tree::Node(l, r, _) => {
                let l = Self::canonical(*l);
                let r = Self::canonical(*r);
                let highest = matches!(l, Tree::Leaf(_)) && matches!(r, Tree::Leaf(_));
                if !highest && r.min_leaf() < l.min_leaf() {
                    Tree::Node(Box::new(r), Box::new(l), Sym::None)
                } else {
                    Tree::Node(Box::new(l), Box::new(r), Sym::None)
                }
            }
        }
    }

    fn syms() -> &'static [Sym] {
        &[Sym::None]
    }
}

/// Umbrella pines: planar binary trees whose highest nodes carry `⊣` or `⊢`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Up;

impl TreeOperad for Up {
    fn canonical(t: Tree) -> Tree {
        match t {
            Tree::Leaf(_) => t,
            Tree::Node(l, r, s) => {
                let l = Self::canonical(*l);
                let r = Self::canonical(*r);
                let highest = matches!(l, Tree::Leaf(_)) && matches!(r, Tree::Leaf(_));
                let s = if highest { s } else { Sym::None };
                Tree::Node(Box::new(l), Box::new(r), s)
            }
        }
    }

    fn syms() -> &'static [Sym] {
        &[Sym::Left, Sym::Right]
    }
}

macro_rules! tree_operad {
    ($t:ty, $name:literal) => {
        impl SetOperad for $t {
            type Elem = Tree;

            fn name(&self) -> &'static str {
                $name
            }

            fn elements(&self, n: usize) -> Vec<Tree> {
                tree_elements::<$t>(n)
            }

            fn arity(&self, x: &Tree) -> usize {
                x.leaves()
            }

            fn relabel(&self, x: &Tree, sigma: &[usize]) -> Tree {
                <$t>::canonical(x.map_leaves(&|i| sigma[i as usize] as u8))
            }

            fn compose(&self, grouping: &Partition, outer: &Tree, inner: &[Tree]) -> Tree {
                tree_compose::<$t>(grouping, outer, inner)
            }

            fn label(&self, x: &Tree) -> String {
                let mut s = String::new();
                x.fmt_into(&mut s);
                s
            }

            fn left_divide(&self, grouping: &Partition, outer: &Tree, target: &Tree) -> Option<Vec<Tree>> {
                tree_left_divide::<$t>(grouping, outer, target)
            }
        }
    };
}

tree_operad!(Nac2, "nac2");
tree_operad!(Up, "up");

/// `u_1 = 1, u_2 = 2, u_n = ½ Σ_{k=1}^{n-1} C(n,k) u_k u_{n-k}`.
pub fn nac2_recurrence(n: usize) -> Vec<u128> {
    let mut u = vec![0u128; n + 1];
    for m in 1..=n {
        u[m] = match m {
            1 => 1,
            2 => 2,
            _ => (1..m).map(|k| crate::partition::binomial(m as u64, k as u64) * u[k] * u[m - k]).sum::<u128>() / 2,
        };
    }
    u
}

/// Names accepted by [`with_operad`].
pub const OPERAD_NAMES: [&str; 5] = ["com", "as", "perm", "nac2", "up"];

/// Runs `f` on the operad called `name`.
pub fn with_operad<R>(name: &str, f: impl OperadVisitor<Output = R>) -> Option<R> {
    Some(match name {
        "com" => f.visit(&Com),
        "as" => f.visit(&As),
        "perm" => f.visit(&Perm),
        "nac2" => f.visit(&Nac2),
        "up" => f.visit(&Up),
        _ => return None,
    })
}

/// Generic callback over the concrete operads.
pub trait OperadVisitor {
    type Output;
    fn visit<O: SetOperad>(self, op: &O) -> Self::Output;
}
