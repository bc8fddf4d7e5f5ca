use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Column-sparse integer matrix; column `j` lists `(row, value)` sorted by row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, cols: vec![Vec::new(); ncols] }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// `self * other` with exact integer entries.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = SparseMatrix::zeros(self.nrows, other.ncols);
        for (j, col) in other.cols.iter().enumerate() {
            let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
            for &(k, b) in col {
                for &(i, a) in &self.cols[k as usize] {
                    *acc.entry(i).or_insert(0) += a * b;
                }
            }
            out.cols[j] = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.ncols]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                d[i as usize][j] = v;
            }
        }
        d
    }
}

/// Nonzero Smith invariants of `m`, as a divisibility chain (units included).
///
/// Unit pivots are eliminated sparsely first, choosing short vectors and
/// rarely used coordinates; the remainder is reduced densely with
/// arbitrary-precision integers.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut vecs: Vec<Option<Vec<(u32, i64)>>> =
        m.cols.iter().map(|c| if c.is_empty() { None } else { Some(c.clone()) }).collect();
    let mut occ: Vec<Vec<u32>> = vec![Vec::new(); m.nrows];
    for (id, v) in vecs.iter().enumerate() {
        if let Some(v) = v {
            for &(c, _) in v {
                occ[c as usize].push(id as u32);
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = vecs
        .iter()
        .enumerate()
        .filter_map(|(id, v)| v.as_ref().map(|v| Reverse((v.len(), id as u32))))
        .collect();
    let mut units = 0usize;
    while let Some(Reverse((len, id))) = heap.pop() {
        let Some(v) = vecs[id as usize].as_ref() else { continue };
        if v.len() != len {
            continue;
        }
        let pivot = v
            .iter()
            .filter(|(_, a)| a.abs() == 1)
            .min_by_key(|(c, _)| occ[*c as usize].len())
            .copied();
        let Some((pc, ps)) = pivot else { continue };
        let pv = v.clone();
        let mut others: Vec<u32> = occ[pc as usize].clone();
        others.sort_unstable();
        others.dedup();
        let mut updates = Vec::new();
        let mut overflow = false;
        for &o in &others {
            if o == id {
                continue;
            }
            let Some(w) = vecs[o as usize].as_ref() else { continue };
            let Ok(k) = w.binary_search_by_key(&pc, |e| e.0) else { continue };
            let factor = w[k].1 * ps;
            match axpy(w, &pv, factor) {
                Some(nw) => updates.push((o, nw)),
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        if overflow {
            break;
        }
        for (o, nw) in updates {
            for &(c, _) in &nw {
                occ[c as usize].push(o);
            }
            if nw.is_empty() {
                vecs[o as usize] = None;
            } else {
                heap.push(Reverse((nw.len(), o)));
                vecs[o as usize] = Some(nw);
            }
        }
        occ[pc as usize].clear();
        vecs[id as usize] = None;
        units += 1;
    }
    let rest: Vec<&Vec<(u32, i64)>> = vecs.iter().flatten().collect();
    let mut out = vec![BigInt::one(); units];
    if !rest.is_empty() {
        let mut coords: Vec<u32> = rest.iter().flat_map(|v| v.iter().map(|e| e.0)).collect();
        coords.sort_unstable();
        coords.dedup();
        let dense: Vec<Vec<BigInt>> = rest
            .iter()
            .map(|v| {
                let mut row = vec![BigInt::zero(); coords.len()];
                for &(c, a) in v.iter() {
                    row[coords.binary_search(&c).unwrap()] = BigInt::from(a);
                }
                row
            })
            .collect();
        out.extend(dense_invariants(dense));
    }
    normalize_chain(out)
}

/// `w - factor * v` on sorted sparse vectors, `None` on overflow.
fn axpy(w: &[(u32, i64)], v: &[(u32, i64)], factor: i64) -> Option<Vec<(u32, i64)>> {
    let mut out = Vec::with_capacity(w.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() || j < v.len() {
        let take_w = j >= v.len() || (i < w.len() && w[i].0 < v[j].0);
        let take_v = i >= w.len() || (j < v.len() && v[j].0 < w[i].0);
        if take_w {
            out.push(w[i]);
            i += 1;
        } else if take_v {
            out.push((v[j].0, v[j].1.checked_mul(factor)?.checked_neg()?));
            j += 1;
        } else {
            let val = w[i].1.checked_sub(v[j].1.checked_mul(factor)?)?;
            if val != 0 {
                out.push((w[i].0, val));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Diagonalises a dense matrix by unimodular operations, pivoting on the
/// entry of least absolute value; returns the nonzero diagonal.
pub fn dense_invariants(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Turns any nonzero diagonal into the Smith divisibility chain.
fn normalize_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for x in d.iter_mut() {
        *x = x.abs();
    }
    d.retain(|x| !x.is_zero());
    d.sort();
    let k = d.len();
    for i in 0..k {
        for j in i + 1..k {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d.sort();
    d
}
