use super::{CochainComplex, CochainVector};
use crate::error::{Error, Result};
use crate::poset::{ChainVariant, Compat, Poset, PosetMap};

/// A lower or upper interval with its index translation back to the ambient poset.
#[derive(Clone, Debug)]
pub struct Interval {
    pub poset: Poset,
    pub trans: Vec<u32>,
}

impl Interval {
    /// `P_{≤x}`.
    pub fn below(p: &Poset, x: usize) -> Result<Interval> {
        let (poset, trans) = p.interval(None, Some(x))?;
        Ok(Interval { poset, trans })
    }

    /// `P_{≥x}`.
    pub fn above(p: &Poset, x: usize) -> Result<Interval> {
        let (poset, trans) = p.interval(Some(x), None)?;
        Ok(Interval { poset, trans })
    }

    pub fn local(&self, ambient: usize) -> Option<usize> {
        self.trans.binary_search(&(ambient as u32)).ok()
    }
}

fn compat_for(variant: ChainVariant) -> Option<Compat> {
    match variant {
        ChainVariant::Full => None,
        ChainVariant::MinMax => Some(Compat::MinMax),
        ChainVariant::Min => Some(Compat::Min),
        ChainVariant::Max => Some(Compat::Max),
    }
}

/// `f^* v` for `f : P → Q`, `v` a cochain of `Q`; refuses maps that are not
/// compatible with the variant.
pub fn pullback(
    f: &PosetMap<'_>,
    source: &CochainComplex,
    target: &CochainComplex,
    v: &CochainVector,
) -> Result<CochainVector> {
    if source.variant() != target.variant() {
        return Err(Error::Mismatch("pullback between different variants".into()));
    }
    if let Some(mode) = compat_for(source.variant()) {
        if !f.check_compatibility(mode) {
            return Err(Error::Incompatible(source.variant().name()));
        }
    }
    Ok(pullback_unchecked(&f.assignment, source, target, v))
}

/// Pullback along an assignment already known to be admissible.
pub fn pullback_unchecked(
    assignment: &[u32],
    source: &CochainComplex,
    target: &CochainComplex,
    v: &CochainVector,
) -> CochainVector {
    let k = v.degree;
    let mut out = CochainVector::zero(k);
    if v.is_zero() {
        return out;
    }
    let mut img = Vec::with_capacity(k + 1);
    for (i, chain) in source.basis(k).iter().enumerate() {
        img.clear();
        img.extend(chain.iter().map(|&x| assignment[x as usize]));
        if img.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        if let Some(j) = target.chain_index(&img) {
            if let Some(a) = v.coeffs.get(&(j as u32)) {
                out.add_at(i as u32, a);
            }
        }
    }
    out
}

/// The staircase chain `(x₀,y₀) < ⋯ < (x_m,y₀) < (x_m,y₁) < ⋯ < (x_m,y_n)` in `P × Q`.
pub fn kunneth_chain(c: &[u32], c2: &[u32], q_len: usize) -> Vec<u32> {
    let q = q_len as u32;
    let mut out: Vec<u32> = c.iter().map(|&x| x * q + c2[0]).collect();
    let last = *c.last().unwrap();
    out.extend(c2[1..].iter().map(|&y| last * q + y));
    out
}

/// The Künneth cross product `u × v` on `P × Q` (indexed `i·|Q| + j`): the
/// value on a chain `c` is `u(p(c₀..c_a)) · v(q(c_a..))` with `a = deg u`.
/// On min-max chains only staircase chains contribute, which is used as a
/// fast path.
pub fn kunneth(
    product: &CochainComplex,
    p: &CochainComplex,
    q: &CochainComplex,
    u: &CochainVector,
    v: &CochainVector,
) -> Result<CochainVector> {
    let mut out = CochainVector::zero(u.degree + v.degree);
    if u.is_zero() || v.is_zero() {
        return Ok(out);
    }
    let all_minmax = [product.variant(), p.variant(), q.variant()].iter().all(|&v| v == ChainVariant::MinMax);
    if all_minmax {
        for (&i, a) in &u.coeffs {
            for (&j, b) in &v.coeffs {
                let chain = kunneth_chain(&p.basis(u.degree)[i as usize], &q.basis(v.degree)[j as usize], q.poset_len());
                let k = product
                    .chain_index(&chain)
                    .ok_or_else(|| Error::Mismatch("product chain outside the product complex".into()))?;
                out.add_at(k as u32, &(a * b));
            }
        }
        return Ok(out);
    }
    let ql = q.poset_len() as u32;
    let a = u.degree;
    let mut px = Vec::with_capacity(a + 1);
    let mut qy = Vec::with_capacity(v.degree + 1);
    for (k, chain) in product.basis(a + v.degree).iter().enumerate() {
        px.clear();
        px.extend(chain[..=a].iter().map(|&e| e / ql));
        qy.clear();
        qy.extend(chain[a..].iter().map(|&e| e % ql));
        if px.windows(2).any(|w| w[0] == w[1]) || qy.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let (Some(i), Some(j)) = (p.chain_index(&px), q.chain_index(&qy)) else {
            continue;
        };
        if let (Some(x), Some(y)) = (u.coeffs.get(&(i as u32)), v.coeffs.get(&(j as u32))) {
            out.add_at(k as u32, &(x * y));
        }
    }
    Ok(out)
}

/// The concatenation morphism at `x`: splices chains of `P_{≤x}` ending at
/// `x` with chains of `P_{≥x}` starting at `x`.
pub fn concat(
    ambient: &CochainComplex,
    x: usize,
    low: (&Interval, &CochainComplex, &CochainVector),
    high: (&Interval, &CochainComplex, &CochainVector),
) -> Result<CochainVector> {
    let (li, lc, lv) = low;
    let (hi, hc, hv) = high;
    if x >= ambient.poset_len() {
        return Err(Error::InvalidIndex(x));
    }
    let mut out = CochainVector::zero(lv.degree + hv.degree);
    for (&i, a) in &lv.coeffs {
        let lch = &lc.basis(lv.degree)[i as usize];
        if li.trans[*lch.last().unwrap() as usize] as usize != x {
            continue;
        }
        for (&j, b) in &hv.coeffs {
            let hch = &hc.basis(hv.degree)[j as usize];
            if hi.trans[hch[0] as usize] as usize != x {
                continue;
            }
            let mut chain: Vec<u32> = lch.iter().map(|&e| li.trans[e as usize]).collect();
            chain.extend(hch[1..].iter().map(|&e| hi.trans[e as usize]));
            let k = ambient
                .chain_index(&chain)
                .ok_or_else(|| Error::Mismatch("spliced chain outside the ambient complex".into()))?;
            out.add_at(k as u32, &(a * b));
        }
    }
    Ok(out)
}
