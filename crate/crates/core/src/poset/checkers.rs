use super::{intersect_sorted, Poset};
use crate::error::{Error, Result};

/// Bounded, and any two elements covering `x` inside `[x, y]` have a common
/// cover inside `[x, y]`.
pub fn is_totally_semimodular(p: &Poset) -> bool {
    if !p.is_bounded() {
        return false;
    }
    for x in 0..p.len() {
        let ups = p.upper_covers(x);
        for (a, &u) in ups.iter().enumerate() {
            for &v in &ups[a + 1..] {
                if !pair_has_covers(p, u as usize, v as usize) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every common upper bound of `u` and `v` lies above some common cover.
fn pair_has_covers(p: &Poset, u: usize, v: usize) -> bool {
    let common_covers = intersect_sorted(p.upper_covers(u), p.upper_covers(v));
    let bounds = intersect_sorted(p.above(u), p.above(v));
    bounds
        .iter()
        .all(|&y| common_covers.iter().any(|&z| p.le(z as usize, y as usize)))
}

/// Condition (2) of a recursive atom ordering, with total semimodularity of
/// every upper interval `[a_j, 1̂]` standing in for the recursive condition.
pub fn check_recursive_atom_condition(p: &Poset, atom_order: &[usize]) -> Result<bool> {
    let (bot, top) = match (p.bottom(), p.top()) {
        (Some(b), Some(t)) => (b, t),
        _ => return Err(Error::NotBounded),
    };
    let mut atoms: Vec<usize> = p.upper_covers(bot).iter().map(|&a| a as usize).collect();
    if atoms.is_empty() {
        // a one-element poset has no atoms
        return Ok(atom_order.is_empty());
    }
    let mut given = atom_order.to_vec();
    atoms.sort_unstable();
    given.sort_unstable();
    if atoms != given {
        return Err(Error::Mismatch("atom order is not a permutation of the atoms".into()));
    }
    for j in 0..atom_order.len() {
        let aj = atom_order[j];
        for i in 0..j {
            let ai = atom_order[i];
            for y in intersect_sorted(p.above(ai), p.above(aj)) {
                let ok = (0..j).any(|k| {
                    let ak = atom_order[k];
                    intersect_sorted(p.upper_covers(ak), p.upper_covers(aj))
                        .iter()
                        .any(|&z| p.le(z as usize, y as usize))
                });
                if !ok {
                    return Ok(false);
                }
            }
        }
        let (upper, _) = p.interval(Some(aj), Some(top))?;
        if !is_totally_semimodular(&upper) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Steinhaus–Johnson–Trotter order on permutations of `1..=n`, as words.
///
/// Built recursively: the new letter is inserted into the `i`-th word of the
/// previous list from right to left when `i` is odd (1-based) and from left
/// to right when `i` is even.
pub fn sjt_order(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<Vec<u8>> = vec![vec![1]];
    for m in 2..=n {
        let mut next = Vec::with_capacity(cur.len() * m);
        for (i, w) in cur.iter().enumerate() {
            let positions: Vec<usize> =
                if i % 2 == 0 { (0..m).rev().collect() } else { (0..m).collect() };
            for pos in positions {
                let mut v = w.clone();
                v.insert(pos, m as u8);
                next.push(v);
            }
        }
        cur = next;
    }
    if n == 0 {
        Vec::new()
    } else {
        cur
    }
}

/// Heredity: deleting the letters `> k` maps the order for `n` monotonically
/// onto the order for `k`.
pub fn sjt_heredity_holds(n: usize, k: usize) -> bool {
    let big = sjt_order(n);
    let small = sjt_order(k);
    let pos = |w: &Vec<u8>| small.iter().position(|s| s == w).unwrap();
    let mut last = 0;
    for w in &big {
        let r: Vec<u8> = w.iter().copied().filter(|&c| c as usize <= k).collect();
        let p = pos(&r);
        if p < last {
            return false;
        }
        last = p;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sjt_small() {
        let w: Vec<String> = sjt_order(3)
            .iter()
            .map(|v| v.iter().map(|c| c.to_string()).collect())
            .collect();
        assert_eq!(w, ["123", "132", "312", "321", "231", "213"]);
        assert_eq!(sjt_order(1), vec![vec![1]]);
        for n in 2..=5 {
            for k in 1..n {
                assert!(sjt_heredity_holds(n, k));
            }
        }
    }

    #[test]
    fn semimodular_examples() {
        let b3 = {
            let labels: Vec<String> = (0..8).map(|i| format!("{i:03b}")).collect();
            let mut pairs = Vec::new();
            for i in 0..8usize {
                for b in 0..3 {
                    if i & (1 << b) == 0 {
                        pairs.push((i, i | (1 << b)));
                    }
                }
            }
            Poset::from_covers(labels, &pairs).unwrap()
        };
        assert!(is_totally_semimodular(&b3));
        let bad = Poset::from_covers(
            ["0", "a", "b", "c", "1"],
            &[(0, 1), (0, 2), (1, 4), (2, 3), (3, 4)],
        )
        .unwrap();
        assert!(!is_totally_semimodular(&bad));
        let chain = Poset::from_covers(["0", "1"], &[(0, 1)]).unwrap();
        assert!(check_recursive_atom_condition(&chain, &[1]).unwrap());
    }
}
