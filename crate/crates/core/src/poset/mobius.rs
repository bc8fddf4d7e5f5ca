use super::{longest_chain, ChainSpec, ChainVariant, Poset};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `Σ_k (−1)^k · #(degree-k chains of the variant)`.
pub fn mobius_number(p: &Poset, variant: ChainVariant) -> BigInt {
    // s[y] = signed count of valid-start chains ending at y
    let mut s = vec![BigInt::zero(); p.len()];
    for &y in p.topological_order() {
        let y = y as usize;
        let mut acc = if variant.valid_start(p, y) { BigInt::one() } else { BigInt::zero() };
        for &x in p.below(y) {
            acc -= &s[x as usize];
        }
        s[y] = acc;
    }
    (0..p.len()).filter(|&y| variant.valid_end(p, y)).map(|y| &s[y]).sum()
}

/// The Möbius function `μ(x, y)`.
pub fn mobius_function(p: &Poset, x: usize, y: usize) -> Result<BigInt> {
    if x >= p.len() || y >= p.len() {
        return Err(Error::InvalidIndex(x.max(y)));
    }
    if !p.le(x, y) {
        return Err(Error::NotComparable(x, y));
    }
    let mut mu = std::collections::HashMap::new();
    mu.insert(x, BigInt::one());
    let mut inside: Vec<u32> = p.open_interval(x, y);
    if x != y {
        inside.push(y as u32);
    }
    let order: Vec<usize> = p
        .topological_order()
        .iter()
        .map(|&z| z as usize)
        .filter(|z| inside.binary_search(&(*z as u32)).is_ok())
        .collect();
    for z in order {
        let mut acc = BigInt::zero();
        for (w, v) in mu.iter() {
            if p.lt(*w, z) {
                acc -= v;
            }
        }
        mu.insert(z, acc);
    }
    Ok(mu.remove(&y).unwrap())
}

/// Number of multichains `x₀ ≤ ⋯ ≤ x_t` satisfying the variant for `t ≥ 0`,
/// and the value of the interpolating polynomial for `t < 0`.
pub fn zeta_eval(p: &Poset, variant: ChainVariant, t: i64) -> BigInt {
    if t >= 0 {
        return multichains(p, variant, t as usize);
    }
    let Some(bound) = longest_chain(p, variant) else { return BigInt::zero() };
    let samples: Vec<BigInt> = (0..=bound).map(|s| multichains(p, variant, s)).collect();
    lagrange_at(&samples, t)
}

fn multichains(p: &Poset, variant: ChainVariant, t: usize) -> BigInt {
    let m = p.len();
    let mut w: Vec<BigInt> =
        (0..m).map(|y| if variant.valid_start(p, y) { BigInt::one() } else { BigInt::zero() }).collect();
    for _ in 0..t {
        let mut next = vec![BigInt::zero(); m];
        for y in 0..m {
            let mut s = w[y].clone();
            for &x in p.below(y) {
                s += &w[x as usize];
            }
            next[y] = s;
        }
        w = next;
    }
    (0..m).filter(|&y| variant.valid_end(p, y)).map(|y| &w[y]).sum()
}

/// Value at `t` of the polynomial through `(k, samples[k])`, `k = 0..`.
fn lagrange_at(samples: &[BigInt], t: i64) -> BigInt {
    let n = samples.len();
    let mut acc = BigRational::zero();
    for (k, yk) in samples.iter().enumerate() {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for j in 0..n {
            if j != k {
                num *= BigInt::from(t - j as i64);
                den *= BigInt::from(k as i64 - j as i64);
            }
        }
        acc += BigRational::new(num * yk, den);
    }
    assert!(acc.is_integer(), "interpolated multichain count is an integer");
    acc.to_integer()
}

/// Number of chains of the given shape whose elements are all fixed by `g`.
/// Endpoint constraints refer to `p`, not to the fixed subposet.
pub fn fixed_chain_trace(p: &Poset, g: &[u32], spec: ChainSpec) -> Result<BigInt> {
    Ok(fixed_counts(p, g, spec.variant)?.get(spec.degree).cloned().unwrap_or_default())
}

/// `Σ_k (−1)^k fixed_chain_trace(p, g, (variant, k))`.
pub fn signed_fixed_trace(p: &Poset, g: &[u32], variant: ChainVariant) -> Result<BigInt> {
    let counts = fixed_counts(p, g, variant)?;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c.clone() })
        .sum())
}

fn fixed_counts(p: &Poset, g: &[u32], variant: ChainVariant) -> Result<Vec<BigInt>> {
    p.check_automorphism(g)?;
    let fixed: Vec<bool> = (0..p.len()).map(|i| g[i] as usize == i).collect();
    let m = p.len();
    let mut cur: Vec<BigInt> = (0..m)
        .map(|y| if fixed[y] && variant.valid_start(p, y) { BigInt::one() } else { BigInt::zero() })
        .collect();
    let mut out = Vec::new();
    while cur.iter().any(|c| !c.is_zero()) {
        out.push((0..m).filter(|&y| variant.valid_end(p, y)).map(|y| &cur[y]).sum());
        let mut next = vec![BigInt::zero(); m];
        for y in (0..m).filter(|&y| fixed[y]) {
            let mut s = BigInt::zero();
            for &x in p.below(y) {
                s += &cur[x as usize];
            }
            next[y] = s;
        }
        cur = next;
    }
    Ok(out)
}
