use super::{CochainComplex, CochainVector};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Echelon, QVec};
use crate::poset::Poset;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Cocycle representatives of one cohomology degree over ℚ, together with an
/// echelon form of coboundaries-plus-representatives used for solving.
#[derive(Clone, Debug)]
pub struct ClassBasis {
    degree: usize,
    reps: Vec<CochainVector>,
    ech: Echelon,
    rep_of_row: HashMap<usize, usize>,
}

/// Class basis of `H^k` of the complex.
pub fn class_basis(c: &CochainComplex, k: usize) -> ClassBasis {
    let dim = c.dim(k);
    let mut ech = Echelon::new();
    if k > 0 {
        if let Some(m) = c.diff_ref(k - 1) {
            for col in &m.cols {
                if !col.is_empty() {
                    let v: QVec = col.iter().map(|&(i, s)| (i, BigRational::from_integer(s.into()))).collect();
                    ech.insert(&v);
                }
            }
        }
    }
    let mut reps = Vec::new();
    let mut rep_of_row = HashMap::new();
    let mut add = |ech: &mut Echelon, z: &QVec| {
        if let Some(r) = ech.insert(z) {
            let row = &ech.rows()[r];
            let mut v = CochainVector::zero(k);
            for (i, a) in row {
                v.coeffs.insert(*i, a.clone());
            }
            rep_of_row.insert(r, reps.len());
            reps.push(v);
        }
    };
    match c.diff_ref(k).filter(|m| !m.is_zero()) {
        None => {
            for i in 0..dim as u32 {
                if ech.len() == dim {
                    break;
                }
                add(&mut ech, &vec![(i, BigRational::one())]);
            }
        }
        Some(m) => {
            let mut rows: Vec<QVec> = vec![Vec::new(); m.nrows];
            for (j, col) in m.cols.iter().enumerate() {
                for &(i, s) in col {
                    rows[i as usize].push((j as u32, BigRational::from_integer(s.into())));
                }
            }
            for z in kernel_basis(dim, &rows) {
                add(&mut ech, &z);
            }
        }
    }
    ClassBasis { degree: k, reps, ech, rep_of_row }
}

/// Ranks and class bases for every degree.
pub fn cohomology_q(c: &CochainComplex) -> (Vec<usize>, Vec<ClassBasis>) {
    let bases: Vec<ClassBasis> = (0..c.num_degrees()).map(|k| class_basis(c, k)).collect();
    (bases.iter().map(ClassBasis::rank).collect(), bases)
}

impl ClassBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[CochainVector] {
        &self.reps
    }

    fn check_cocycle(&self, c: &CochainComplex, z: &CochainVector) -> Result<()> {
        if z.degree != self.degree {
            return Err(Error::Mismatch(format!("degree {} vs {}", z.degree, self.degree)));
        }
        if !c.d(z).is_zero() {
            return Err(Error::NotCocycle);
        }
        Ok(())
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn coordinates(&self, c: &CochainComplex, z: &CochainVector) -> Result<Vec<BigRational>> {
        self.check_cocycle(c, z)?;
        Ok(self.coords_unchecked(z))
    }

    pub(crate) fn coords_unchecked(&self, z: &CochainVector) -> Vec<BigRational> {
        let (rem, used) = self.ech.reduce(&z.to_qvec());
        assert!(rem.is_empty(), "cocycle outside the span of coboundaries and representatives");
        let mut out = vec![BigRational::zero(); self.reps.len()];
        for (r, a) in used {
            if let Some(&i) = self.rep_of_row.get(&r) {
                out[i] = a;
            }
        }
        out
    }

    pub fn is_coboundary(&self, c: &CochainComplex, z: &CochainVector) -> Result<bool> {
        Ok(self.coordinates(c, z)?.iter().all(Zero::is_zero))
    }

    pub fn classes_equal(&self, c: &CochainComplex, z1: &CochainVector, z2: &CochainVector) -> Result<bool> {
        self.is_coboundary(c, &z1.minus(z2))
    }

    /// The cocycle `Σ coords[i] · rep_i`.
    pub fn representative(&self, coords: &[BigRational]) -> CochainVector {
        let mut v = CochainVector::zero(self.degree);
        for (a, r) in coords.iter().zip(&self.reps) {
            v.add_scaled(r, a);
        }
        v
    }
}

/// Image of a cochain under the chain relabeling `γ ↦ g(γ)` (g an automorphism).
pub fn push_forward(c: &CochainComplex, g: &[u32], v: &CochainVector) -> CochainVector {
    let mut out = CochainVector::zero(v.degree);
    for (&i, a) in &v.coeffs {
        let chain: Vec<u32> = c.basis(v.degree)[i as usize].iter().map(|&x| g[x as usize]).collect();
        let j = c.chain_index(&chain).expect("automorphisms preserve the chain basis");
        out.add_at(j as u32, a);
    }
    out
}

/// Matrix of `g` on the class basis: column `j` holds the coordinates of `g · rep_j`.
pub fn induced_automorphism_action(
    p: &Poset,
    c: &CochainComplex,
    basis: &ClassBasis,
    g: &[u32],
) -> Result<Vec<Vec<BigRational>>> {
    p.check_automorphism(g)?;
    let r = basis.rank();
    let mut m = vec![vec![BigRational::zero(); r]; r];
    for (j, rep) in basis.reps.iter().enumerate() {
        let img = push_forward(c, g, rep);
        for (i, a) in basis.coords_unchecked(&img).into_iter().enumerate() {
            m[i][j] = a;
        }
    }
    Ok(m)
}
