//! Property suites: cochain-level identities on random and catalog posets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use posetcohom::catalog;
use posetcohom::cohomology::{
    build_complex, class_basis, concat, kunneth, pullback, pullback_unchecked, CochainComplex, CochainVector, Interval,
};
use posetcohom::poset::{mobius_function, mobius_number, zeta_eval, ChainVariant, Compat, Poset, PosetMap};
use posetcohom::species::{forgetful_to_pi, SpeciesRef};
use proptest::prelude::*;

const VARIANTS: [ChainVariant; 4] = [ChainVariant::Full, ChainVariant::MinMax, ChainVariant::Min, ChainVariant::Max];

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sign(k: usize) -> BigRational {
    if k % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// A poset on `m` elements with `i < j` for the chosen pairs `i < j`.
fn poset_from_bits(m: usize, bits: &[bool]) -> Poset {
    let mut pairs = Vec::new();
    let mut b = 0;
    for i in 0..m {
        for j in i + 1..m {
            if bits[b % bits.len()] {
                pairs.push((i, j));
            }
            b += 1;
        }
    }
    Poset::from_covers((0..m).map(|i| format!("p{i}")), &pairs).unwrap()
}

fn arb_poset(max: usize) -> impl Strategy<Value = Poset> {
    (1..=max, prop::collection::vec(prop::bool::weighted(0.45), 1..32))
        .prop_map(|(m, bits)| poset_from_bits(m, &bits))
}

/// Cochain with coefficients drawn cyclically from `seed`.
fn cochain(c: &CochainComplex, k: usize, seed: &[i8]) -> CochainVector {
    let mut v = CochainVector::zero(k);
    for i in 0..c.dim(k) {
        let a = seed[(i * 7 + k) % seed.len()];
        v.add_at(i as u32, &q(a as i64));
    }
    v
}

fn seeds() -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(-2i8..=2, 1..24)
}

/// Independent Möbius oracle: signed count of chains from x to y.
fn signed_chain_count(p: &Poset, x: usize, y: usize) -> BigInt {
    // f[z] = Σ over chains x = z₀ < ⋯ < z_k = z of (−1)^k
    let mut f = vec![BigInt::zero(); p.len()];
    f[x] = BigInt::one();
    for &z in p.topological_order() {
        let z = z as usize;
        if z == x || !p.lt(x, z) || !p.le(z, y) {
            continue;
        }
        let mut acc = BigInt::zero();
        for w in 0..p.len() {
            if p.le(x, w) && p.lt(w, z) {
                acc -= &f[w];
            }
        }
        f[z] = acc;
    }
    f[y].clone()
}

fn catalog_small() -> Vec<(String, SpeciesRef, usize)> {
    let mut out = Vec::new();
    for name in ["pi", "left:as", "right:as", "right:perm", "left:nac2", "ns", "nc2", "mlt", "mlrt", "left:com"] {
        let s = catalog::parse_and_build(name).unwrap();
        for n in 1..=5 {
            if s.level(n).len() <= 40 {
                out.push((name.to_string(), s.clone(), n));
            }
        }
    }
    out
}

fn check_d_squared(p: &Poset) -> Result<(), TestCaseError> {
    for v in VARIANTS {
        let c = build_complex(p, v);
        for k in 0..c.num_degrees() {
            let d1 = c.differential(k);
            let d2 = c.differential(k + 1);
            prop_assert!(d2.mul(&d1).is_zero(), "d∘d ≠ 0 in degree {k}, variant {v:?}");
        }
    }
    Ok(())
}

/// Low/high complex variants for `μ`, `μ̌`, `μ̂`.
fn split_variants(v: ChainVariant) -> (ChainVariant, ChainVariant) {
    match v {
        ChainVariant::MinMax => (ChainVariant::MinMax, ChainVariant::MinMax),
        ChainVariant::Min => (ChainVariant::MinMax, ChainVariant::Min),
        ChainVariant::Max => (ChainVariant::Max, ChainVariant::MinMax),
        ChainVariant::Full => unreachable!("no full-variant concatenation"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, .. ProptestConfig::default() })]

    #[test]
    fn d_squared_vanishes(p in arb_poset(7)) {
        check_d_squared(&p)?;
    }

    #[test]
    fn kunneth_is_a_chain_map(p in arb_poset(4), r in arb_poset(4), s in seeds()) {
        for v in VARIANTS {
            let (cp, cq) = (build_complex(&p, v), build_complex(&r, v));
            let prod = build_complex(&p.direct_product(&r), v);
            for a in 0..cp.num_degrees() {
                for b in 0..cq.num_degrees() {
                    let u = cochain(&cp, a, &s);
                    let w = cochain(&cq, b, &s[1..].iter().chain(&s[..1]).copied().collect::<Vec<_>>());
                    let lhs = prod.d(&kunneth(&prod, &cp, &cq, &u, &w).unwrap());
                    let mut rhs = kunneth(&prod, &cp, &cq, &cp.d(&u), &w).unwrap();
                    rhs.add_scaled(&kunneth(&prod, &cp, &cq, &u, &cq.d(&w)).unwrap(), &sign(a));
                    prop_assert_eq!(lhs, rhs, "variant {:?}, degrees {} {}", v, a, b);
                }
            }
        }
    }

    #[test]
    fn staircase_matches_alexander_whitney(p in arb_poset(4), r in arb_poset(4), s in seeds()) {
        let v = ChainVariant::MinMax;
        let (cp, cq) = (build_complex(&p, v), build_complex(&r, v));
        let prod = build_complex(&p.direct_product(&r), v);
        let ql = r.len() as u32;
        for a in 0..cp.num_degrees() {
            for b in 0..cq.num_degrees() {
                let u = cochain(&cp, a, &s);
                let w = cochain(&cq, b, &s);
                // front face / back face evaluation on every product chain
                let mut aw = CochainVector::zero(a + b);
                for (k, ch) in prod.basis(a + b).iter().enumerate() {
                    let front: Vec<u32> = ch[..=a].iter().map(|e| e / ql).collect();
                    let back: Vec<u32> = ch[a..].iter().map(|e| e % ql).collect();
                    if let (Some(i), Some(j)) = (cp.chain_index(&front), cq.chain_index(&back)) {
                        aw.add_at(k as u32, &(u.get(i as u32) * w.get(j as u32)));
                    }
                }
                prop_assert_eq!(kunneth(&prod, &cp, &cq, &u, &w).unwrap(), aw);
            }
        }
    }

    #[test]
    fn pullback_along_refinement_is_a_chain_map(p in arb_poset(6), s in seeds()) {
        // the identity onto a linear extension is order preserving
        let order = p.topological_order().to_vec();
        let m = p.len();
        let pairs: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0] as usize, w[1] as usize)).collect();
        let line = Poset::from_covers((0..m).map(|i| format!("p{i}")), &pairs).unwrap();
        let f = PosetMap::new(&p, &line, (0..m as u32).collect()).unwrap();
        let (cs, ct) = (build_complex(&p, ChainVariant::Full), build_complex(&line, ChainVariant::Full));
        for k in 0..ct.num_degrees() {
            let v = cochain(&ct, k, &s);
            let lhs = cs.d(&pullback(&f, &cs, &ct, &v).unwrap());
            let rhs = pullback(&f, &cs, &ct, &ct.d(&v)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn projection_pullback_is_a_chain_map(p in arb_poset(4), r in arb_poset(3), s in seeds()) {
        let prod = p.direct_product(&r);
        let proj: Vec<u32> = (0..prod.len() as u32).map(|e| e / r.len() as u32).collect();
        let f = PosetMap::new(&prod, &p, proj).unwrap();
        for v in VARIANTS {
            let mode = match v {
                ChainVariant::Full => None,
                ChainVariant::MinMax => Some(Compat::MinMax),
                ChainVariant::Min => Some(Compat::Min),
                ChainVariant::Max => Some(Compat::Max),
            };
            let (cs, ct) = (build_complex(&prod, v), build_complex(&p, v));
            if mode.is_some_and(|m| !f.check_compatibility(m)) {
                prop_assert!(pullback(&f, &cs, &ct, &CochainVector::zero(0)).is_err());
                continue;
            }
            for k in 0..ct.num_degrees() {
                let w = cochain(&ct, k, &s);
                let lhs = cs.d(&pullback(&f, &cs, &ct, &w).unwrap());
                let rhs = pullback(&f, &cs, &ct, &ct.d(&w)).unwrap();
                prop_assert_eq!(lhs, rhs, "variant {:?}", v);
            }
        }
    }

    #[test]
    fn concatenation_is_a_chain_map(p in arb_poset(6), x in 0usize..6, s in seeds()) {
        let x = x % p.len();
        let (below, above) = (Interval::below(&p, x).unwrap(), Interval::above(&p, x).unwrap());
        for v in [ChainVariant::MinMax, ChainVariant::Min, ChainVariant::Max] {
            let (lv, hv) = split_variants(v);
            let amb = build_complex(&p, v);
            let (lc, hc) = (build_complex(&below.poset, lv), build_complex(&above.poset, hv));
            for a in 0..lc.num_degrees() {
                for b in 0..hc.num_degrees() {
                    let (lo, hi) = (cochain(&lc, a, &s), cochain(&hc, b, &s));
                    let lhs = amb.d(&concat(&amb, x, (&below, &lc, &lo), (&above, &hc, &hi)).unwrap());
                    let mut rhs = concat(&amb, x, (&below, &lc, &lc.d(&lo)), (&above, &hc, &hi)).unwrap();
                    rhs.add_scaled(&concat(&amb, x, (&below, &lc, &lo), (&above, &hc, &hc.d(&hi))).unwrap(), &sign(a));
                    prop_assert_eq!(lhs, rhs, "variant {:?}, x {}", v, x);
                }
            }
        }
    }

    #[test]
    fn concatenation_is_associative(p in arb_poset(6), x in 0usize..6, y in 0usize..6, s in seeds()) {
        let (x, y) = (x % p.len(), y % p.len());
        prop_assume!(p.le(x, y));
        check_double_concat(&p, x, y, &s)?;
    }

    #[test]
    fn philip_hall(p in arb_poset(7)) {
        for x in 0..p.len() {
            for y in 0..p.len() {
                if p.le(x, y) {
                    prop_assert_eq!(mobius_function(&p, x, y).unwrap(), signed_chain_count(&p, x, y));
                }
            }
        }
        for v in VARIANTS {
            prop_assert_eq!(zeta_eval(&p, v, -1), mobius_number(&p, v));
        }
    }
}

/// `μ_{x'}∘(μ_x⊗id) = μ_x∘(id⊗μ_{x'})` on min-max cochains.
fn check_double_concat(p: &Poset, x: usize, y: usize, s: &[i8]) -> Result<(), TestCaseError> {
    let v = ChainVariant::MinMax;
    let amb = build_complex(p, v);
    // left route: splice inside P_{≤y} first
    let le_y = Interval::below(p, y).unwrap();
    let xl = le_y.local(x).unwrap();
    let le_y_c = build_complex(&le_y.poset, v);
    let (low_a, mid_a) = (Interval::below(&le_y.poset, xl).unwrap(), Interval::above(&le_y.poset, xl).unwrap());
    let ge_y = Interval::above(p, y).unwrap();
    // right route: splice inside P_{≥x} first
    let ge_x = Interval::above(p, x).unwrap();
    let yl = ge_x.local(y).unwrap();
    let ge_x_c = build_complex(&ge_x.poset, v);
    let (mid_b, high_b) = (Interval::below(&ge_x.poset, yl).unwrap(), Interval::above(&ge_x.poset, yl).unwrap());
    let low_b = Interval::below(p, x).unwrap();
    prop_assert_eq!(low_a.poset.labels(), low_b.poset.labels());
    prop_assert_eq!(mid_a.poset.labels(), mid_b.poset.labels());
    prop_assert_eq!(ge_y.poset.labels(), high_b.poset.labels());
    let (lc, mc, hc) = (build_complex(&low_a.poset, v), build_complex(&mid_a.poset, v), build_complex(&ge_y.poset, v));
    let ge_y_c = build_complex(&ge_y.poset, v);
    for a in 0..lc.num_degrees() {
        for b in 0..mc.num_degrees() {
            for c in 0..hc.num_degrees() {
                let (va, vb, vc) = (cochain(&lc, a, s), cochain(&mc, b, s), cochain(&hc, c, &s[1..].to_vec().into_iter().chain([1]).collect::<Vec<_>>()));
                let inner = concat(&le_y_c, xl, (&low_a, &lc, &va), (&mid_a, &mc, &vb)).unwrap();
                let left = concat(&amb, y, (&le_y, &le_y_c, &inner), (&ge_y, &ge_y_c, &vc)).unwrap();
                let inner = concat(&ge_x_c, yl, (&mid_b, &mc, &vb), (&high_b, &hc, &vc)).unwrap();
                let right = concat(&amb, x, (&low_b, &lc, &va), (&ge_x, &ge_x_c, &inner)).unwrap();
                prop_assert_eq!(left, right);
            }
        }
    }
    Ok(())
}

#[test]
fn d_squared_on_catalog() {
    for (name, s, n) in catalog_small() {
        check_d_squared(&s.level(n).poset).unwrap_or_else(|e| panic!("{name}({n}): {e}"));
    }
}

#[test]
fn philip_hall_on_catalog() {
    for (name, s, n) in catalog_small() {
        let p = &s.level(n).poset;
        for x in 0..p.len() {
            for y in p.above(x).iter().map(|&y| y as usize).chain([x]) {
                assert_eq!(mobius_function(p, x, y).unwrap(), signed_chain_count(p, x, y), "{name}({n})");
            }
        }
        for v in VARIANTS {
            assert_eq!(zeta_eval(p, v, -1), mobius_number(p, v), "{name}({n}) {v:?}");
        }
    }
}

#[test]
fn double_concatenation_in_pi4() {
    let pi = catalog::parse_and_build("pi").unwrap();
    let l = pi.level(4);
    let x = l.poset.index_of("12|34").unwrap();
    let y = l.poset.index_of("1|2|34").unwrap();
    check_double_concat(&l.poset, x, y, &[1, -1, 2, 0, 1]).unwrap();
}

/// `f^*∘μ_y = Σ_{x ∈ f⁻¹(y)} μ_x∘(f_{≤x}^* ⊗ f_{≥x}^*)` for the forgetful maps to Π.
#[test]
fn concatenation_commutes_with_pullback() {
    let pi = catalog::parse_and_build("pi").unwrap();
    let v = ChainVariant::MinMax;
    let seed = [1i8, -2, 1, 0, 2, -1, 1];
    let mut compatible = 0;
    for (name, n) in [("ns", 4), ("left:as", 3), ("right:as", 3), ("right:perm", 3), ("nc2", 3)] {
        let s = catalog::parse_and_build(name).unwrap();
        let a = forgetful_to_pi(s.clone(), pi.clone(), n).unwrap();
        let (src, tgt) = (s.level(n), pi.level(n));
        let f = PosetMap::new(&src.poset, &tgt.poset, a.map(n).to_vec()).unwrap();
        if !f.check_compatibility(Compat::MinMax) {
            continue;
        }
        compatible += 1;
        let (cs, ct) = (build_complex(&src.poset, v), build_complex(&tgt.poset, v));
        for y in 0..tgt.len() {
            let (qb, qa) = (Interval::below(&tgt.poset, y).unwrap(), Interval::above(&tgt.poset, y).unwrap());
            let (qbc, qac) = (build_complex(&qb.poset, v), build_complex(&qa.poset, v));
            let fibre: Vec<usize> = (0..src.len()).filter(|&x| f.apply(x) == y).collect();
            // restrictions f_{≤x}, f_{≥x} must be min-max compatible too
            let mut pieces = Vec::new();
            for &x in &fibre {
                let (pb, pa) = (Interval::below(&src.poset, x).unwrap(), Interval::above(&src.poset, x).unwrap());
                let fb: Vec<u32> = pb.trans.iter().map(|&e| qb.local(f.apply(e as usize)).unwrap() as u32).collect();
                let fa: Vec<u32> = pa.trans.iter().map(|&e| qa.local(f.apply(e as usize)).unwrap() as u32).collect();
                let ok_b = PosetMap::new(&pb.poset, &qb.poset, fb.clone()).unwrap().check_compatibility(Compat::MinMax);
                let ok_a = PosetMap::new(&pa.poset, &qa.poset, fa.clone()).unwrap().check_compatibility(Compat::MinMax);
                assert!(ok_b && ok_a, "{name}: restriction at {x} is not min-max compatible");
                pieces.push((x, pb, pa, fb, fa));
            }
            for a in 0..qbc.num_degrees() {
                for b in 0..qac.num_degrees() {
                    let (lo, hi) = (cochain(&qbc, a, &seed), cochain(&qac, b, &seed[2..]));
                    let lhs = pullback(&f, &cs, &ct, &concat(&ct, y, (&qb, &qbc, &lo), (&qa, &qac, &hi)).unwrap()).unwrap();
                    let mut rhs = CochainVector::zero(a + b);
                    for (x, pb, pa, fb, fa) in &pieces {
                        let (pbc, pac) = (build_complex(&pb.poset, v), build_complex(&pa.poset, v));
                        let lo_x = pullback_unchecked(fb, &pbc, &qbc, &lo);
                        let hi_x = pullback_unchecked(fa, &pac, &qac, &hi);
                        rhs = rhs.plus(&concat(&cs, *x, (pb, &pbc, &lo_x), (pa, &pac, &hi_x)).unwrap());
                    }
                    assert_eq!(lhs, rhs, "{name}({n}) at y = {}", tgt.poset.label(y));
                }
            }
        }
    }
    assert!(compatible >= 2, "only {compatible} forgetful maps were min-max compatible");
}

/// Künneth of concatenations equals the concatenation at `(x, y)` of the
/// Künneth products, up to the Koszul sign of the middle swap, in cohomology.
#[test]
fn concatenation_commutes_with_kunneth() {
    let pi = catalog::parse_and_build("pi").unwrap();
    let v = ChainVariant::MinMax;
    for (n1, n2) in [(3, 3), (3, 4)] {
        let (p, r) = (pi.level(n1).poset.clone(), pi.level(n2).poset.clone());
        let prod = p.direct_product(&r);
        let (cp, cr, cprod) = (build_complex(&p, v), build_complex(&r, v), build_complex(&prod, v));
        let top = cprod.num_degrees() - 1;
        let classes = class_basis(&cprod, top);
        let mut checked = 0;
        for x in 0..p.len() {
            for y in 0..r.len() {
                let (pb, pa) = (Interval::below(&p, x).unwrap(), Interval::above(&p, x).unwrap());
                let (rb, ra) = (Interval::below(&r, y).unwrap(), Interval::above(&r, y).unwrap());
                let xy = x * r.len() + y;
                let (sb, sa) = (Interval::below(&prod, xy).unwrap(), Interval::above(&prod, xy).unwrap());
                let c = |i: &Interval| build_complex(&i.poset, v);
                let (pbc, pac, rbc, rac, sbc, sac) = (c(&pb), c(&pa), c(&rb), c(&ra), c(&sb), c(&sa));
                let tops = |cc: &CochainComplex| -> Vec<CochainVector> {
                    let k = cc.num_degrees() - 1;
                    class_basis(cc, k).reps().to_vec()
                };
                for a in tops(&pbc) {
                    for b in tops(&pac) {
                        for c1 in tops(&rbc) {
                            for d in tops(&rac) {
                                let left = kunneth(
                                    &cprod,
                                    &cp,
                                    &cr,
                                    &concat(&cp, x, (&pb, &pbc, &a), (&pa, &pac, &b)).unwrap(),
                                    &concat(&cr, y, (&rb, &rbc, &c1), (&ra, &rac, &d)).unwrap(),
                                )
                                .unwrap();
                                let low = kunneth(&sbc, &pbc, &rbc, &a, &c1).unwrap();
                                let high = kunneth(&sac, &pac, &rac, &b, &d).unwrap();
                                let right = concat(&cprod, xy, (&sb, &sbc, &low), (&sa, &sac, &high))
                                    .unwrap()
                                    .scaled(&sign(b.degree * c1.degree));
                                assert_eq!(left.degree, top);
                                assert!(
                                    classes.is_coboundary(&cprod, &left.minus(&right)).unwrap(),
                                    "Π({n1})×Π({n2}) at ({}, {})",
                                    p.label(x),
                                    r.label(y)
                                );
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}

/// Every suite of this file, for running outside the test harness.
pub fn all_suites() -> Vec<(&'static str, fn())> {
    vec![
        ("d²=0 random", d_squared_vanishes),
        ("d²=0 catalog", d_squared_on_catalog),
        ("künneth chain map", kunneth_is_a_chain_map),
        ("staircase = AW", staircase_matches_alexander_whitney),
        ("pullback chain map", pullback_along_refinement_is_a_chain_map),
        ("projection pullback", projection_pullback_is_a_chain_map),
        ("concat chain map", concatenation_is_a_chain_map),
        ("concat associativity", concatenation_is_associative),
        ("double concat Π(4)", double_concatenation_in_pi4),
        ("concat vs pullback", concatenation_commutes_with_pullback),
        ("concat vs künneth", concatenation_commutes_with_kunneth),
        ("philip hall random", philip_hall),
        ("philip hall catalog", philip_hall_on_catalog),
    ]
}
