use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse rational vector, sorted by index, no explicit zeros.
pub type QVec = Vec<(u32, BigRational)>;

/// Row-echelon family: every row has a distinct pivot (its first index),
/// where its coefficient is 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<QVec>,
    pivot_of: BTreeMap<u32, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[QVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.pivot_of.iter().map(|(&p, &r)| (p, r))
    }

    /// Reduces `v` against the family; returns the remainder and the
    /// coefficient of every row used (`v = Σ c_r row_r + remainder`).
    pub fn reduce(&self, v: &QVec) -> (QVec, Vec<(usize, BigRational)>) {
        let mut w: BTreeMap<u32, BigRational> = v.iter().cloned().collect();
        let mut coeffs = Vec::new();
        let mut cursor = 0u32;
        loop {
            let next = w.range(cursor..).next().map(|(&k, c)| (k, c.clone()));
            let Some((k, c)) = next else { break };
            if let Some(&r) = self.pivot_of.get(&k) {
                for (i, a) in &self.rows[r] {
                    let e = w.entry(*i).or_insert_with(BigRational::zero);
                    *e -= &c * a;
                    if e.is_zero() {
                        w.remove(i);
                    }
                }
                coeffs.push((r, c));
            }
            cursor = k + 1;
        }
        (w.into_iter().collect(), coeffs)
    }

    pub fn contains(&self, v: &QVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Adds `v` if it is independent; returns the new row index.
    pub fn insert(&mut self, v: &QVec) -> Option<usize> {
        let (rem, _) = self.reduce(v);
        self.push_reduced(rem)
    }

    fn push_reduced(&mut self, rem: QVec) -> Option<usize> {
        let (p, lead) = rem.first().cloned()?;
        let inv = BigRational::one() / lead;
        let row: QVec = rem.into_iter().map(|(i, a)| (i, a * &inv)).collect();
        self.rows.push(row);
        self.pivot_of.insert(p, self.rows.len() - 1);
        Some(self.rows.len() - 1)
    }

    /// Rewrites rows into reduced row-echelon form (zero above and below pivots).
    pub fn make_reduced(&mut self) {
        let order: Vec<(u32, usize)> = self.pivot_of.iter().rev().map(|(&p, &r)| (p, r)).collect();
        for &(p, r) in &order {
            let row = std::mem::take(&mut self.rows[r]);
            let mut w: BTreeMap<u32, BigRational> = row.into_iter().collect();
            let keys: Vec<u32> = w.keys().copied().filter(|&k| k > p).collect();
            for k in keys {
                let Some(&r2) = self.pivot_of.get(&k) else { continue };
                let Some(c) = w.get(&k).cloned() else { continue };
                for (i, a) in &self.rows[r2] {
                    let e = w.entry(*i).or_insert_with(BigRational::zero);
                    *e -= &c * a;
                    if e.is_zero() {
                        w.remove(i);
                    }
                }
            }
            self.rows[r] = w.into_iter().collect();
        }
    }
}

/// Basis of `{z : A z = 0}` for `A` given by its rows over `ncols` unknowns.
pub fn kernel_basis(ncols: usize, rows: &[QVec]) -> Vec<QVec> {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    ech.make_reduced();
    let pivots: BTreeMap<u32, usize> = ech.pivot_of.clone();
    // column f → list of (pivot column, coefficient) from rows containing f
    let mut by_col: BTreeMap<u32, Vec<(u32, BigRational)>> = BTreeMap::new();
    for (&p, &r) in &pivots {
        for (i, a) in &ech.rows[r] {
            if *i != p {
                by_col.entry(*i).or_default().push((p, a.clone()));
            }
        }
    }
    let mut out = Vec::new();
    for f in 0..ncols as u32 {
        if pivots.contains_key(&f) {
            continue;
        }
        let mut v: BTreeMap<u32, BigRational> = BTreeMap::new();
        v.insert(f, BigRational::one());
        if let Some(list) = by_col.get(&f) {
            for (p, a) in list {
                v.insert(*p, -a.clone());
            }
        }
        out.push(v.into_iter().collect());
    }
    out
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}
