//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Every check is exact; the only tolerances are the wall-clock budgets below.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use posetcohom::catalog;
use posetcohom::cohomology::{build_complex, cohomology_z};
use posetcohom::operad::{self, Class, Word};
use posetcohom::partition::{factorial, permutations, Partition};
use posetcohom::poset::{check_recursive_atom_condition, is_totally_semimodular, mobius_number, zeta_eval, ChainVariant};
use posetcohom::series::{self, cycle_type, integer_partitions, permutation_of_type, SymFunc};
use posetcohom::set_operads::{nac2_recurrence, Nac2, SetOperad};
use posetcohom::species::SpeciesRef;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

#[path = "properties.rs"]
#[allow(dead_code)]
mod properties;

const MM: ChainVariant = ChainVariant::MinMax;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn sp(name: &str) -> SpeciesRef {
    catalog::parse_and_build(name).unwrap()
}

fn fact(n: usize) -> usize {
    (1..=n).product()
}

/// Betti numbers of one level, checked torsion-free.
fn betti(s: &SpeciesRef, n: usize, v: ChainVariant) -> Result<Vec<usize>, String> {
    let z = cohomology_z(&build_complex(&s.level(n).poset, v));
    ensure!(z.torsion.iter().all(Vec::is_empty), "{}({n}) {v:?} has torsion {:?}", s.name(), z.torsion);
    Ok(z.betti)
}

/// Asserts cohomology concentrated in degree `deg` with rank `rank`.
fn concentrated(s: &SpeciesRef, n: usize, v: ChainVariant, deg: usize, rank: usize) -> Result<(), String> {
    let b = betti(s, n, v)?;
    for (k, &r) in b.iter().enumerate() {
        let want = if k == deg { rank } else { 0 };
        ensure!(r == want, "{}({n}) {v:?}: rank {r} in degree {k}, expected {want}", s.name());
    }
    ensure!(deg < b.len() || rank == 0, "{}({n}) {v:?}: no degree {deg}", s.name());
    Ok(())
}

fn class(ctx: &operad::SpeciesCohomology, n: usize, chains: &[(i64, &[&str])]) -> Class {
    ctx.class_of_chains(n, MM, chains).unwrap()
}

fn lie(ctx: &operad::SpeciesCohomology, w: &str) -> Class {
    operad::lie_class(ctx, &Word::parse(w).unwrap()).unwrap()
}

// ---------------------------------------------------------------------------

fn c1_partition_posets() -> Outcome {
    let pi = sp("pi");
    for n in 2..=6 {
        concentrated(&pi, n, MM, n - 1, fact(n - 1))?;
    }
    Ok("h^{n-1}(Π(n)) = Z^{(n-1)!}, n = 2..6".into())
}

fn c2_jacobi() -> Outcome {
    let pi = operad::context("pi").unwrap();
    let ws: Vec<Class> = ["[1,[2,3]]", "[2,[3,1]]", "[3,[1,2]]"].iter().map(|w| lie(&pi, w)).collect();
    ensure!(ws.iter().all(|w| !w.is_zero()), "a Jacobi term vanishes");
    let sum = operad::linear_combination(&ws.iter().cloned().map(|w| (1, w)).collect::<Vec<_>>()).unwrap();
    ensure!(sum.degree == 2 && sum.is_zero(), "Jacobi sum is nonzero: {:?}", sum.coords);
    let g = class(&pi, 2, &[(1, &["12", "1|2"])]);
    let composed = pi.compose_partial(&g, &g, &[1, 2]).unwrap();
    let expected = class(&pi, 3, &[(1, &["123", "1|23", "1|2|3"])]);
    ensure!(composed == expected, "[1*<1|*] ∘ [23<2|3] = {:?}", composed.coords);
    Ok("Jacobi sum zero in h²(Π(3)); composition matches [123<1|23<1|2|3]".into())
}

fn c3_operad_axioms() -> Outcome {
    let mut total = 0;
    for name in ["pi", "left:as", "right:as", "right:perm", "ns", "nc2", "mlt", "mlrt"] {
        let ctx = operad::context(name).unwrap();
        let r = operad::verify_operad_axioms(&ctx, 4).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.passed(), "{name}: {:?}", r.failures.first());
        total += r.checked;
    }
    Ok(format!("{total} axiom instances checked at arity ≤ 4"))
}

fn c4_table3() -> Outcome {
    // (degree, rank) of the nonzero groups and μ̂ for n = 1..5
    let expected: [(&[(usize, usize)], i64); 5] = [
        (&[(0, 1)], 1),
        (&[(1, 1)], -1),
        (&[(1, 1), (2, 2)], 1),
        (&[(2, 7), (3, 6)], 1),
        (&[(3, 43), (4, 24)], -19),
    ];
    let s = sp("right:as");
    for (n, (groups, mu)) in (1..=5).zip(expected) {
        let b = betti(&s, n, ChainVariant::Max)?;
        let got: Vec<(usize, usize)> = b.iter().enumerate().filter(|(_, &r)| r > 0).map(|(k, &r)| (k, r)).collect();
        ensure!(got == groups, "ĥ(Π^As({n})) = {got:?}, expected {groups:?}");
        let m = mobius_number(&s.level(n).poset, ChainVariant::Max);
        ensure!(m == BigInt::from(mu), "μ̂(Π^As({n})) = {m}, expected {mu}");
    }
    Ok("ĥ groups and μ̂ for n = 1..5 match".into())
}

fn c5_left_as_mobius() -> Outcome {
    let s = sp("left:as");
    let egf = series::mobius_left_egf(&series::lookup("As").unwrap().c_dual(7).unwrap()).unwrap();
    // 1 − exp(−x) has n!·[xⁿ] = (−1)^{n−1}
    for n in 1..=7 {
        let want = if n % 2 == 1 { 1 } else { -1 };
        let direct = mobius_number(&s.level(n).poset, ChainVariant::Min);
        ensure!(direct == BigInt::from(want), "μ̌(^AsΠ({n})) = {direct}");
        ensure!(egf.egf_coeff(n) == BigRational::from_integer(want.into()), "egf coefficient {n}");
    }
    Ok("μ̌ = (−1)^{n−1} for n ≤ 7, equal to the egf".into())
}

fn c6_nac2() -> Outcome {
    let rec = nac2_recurrence(6);
    for n in 1..=6 {
        ensure!(Nac2.count(n) as u128 == rec[n], "|NAC2({n})| = {} vs recurrence {}", Nac2.count(n), rec[n]);
    }
    let row = series::lookup("NAC2").unwrap();
    let egf = series::mobius_left_egf(&row.c_dual(5).unwrap()).unwrap();
    let printed = row.printed(series::TableId::Tab2).unwrap();
    let s = sp("left:nac2");
    for n in 1..=5 {
        let direct = mobius_number(&s.level(n).poset, ChainVariant::Min);
        ensure!(BigRational::from_integer(direct.clone()) == egf.egf_coeff(n), "n = {n}: direct {direct}, egf {}", egf.egf_coeff(n));
        ensure!(direct == BigInt::from(printed[n - 1]), "n = {n}: direct {direct}, printed {}", printed[n - 1]);
    }
    Ok(format!("counts {:?}; μ̌ = 1, −1, 1, −13, 61", &rec[1..]))
}

fn c7_right_perm() -> Outcome {
    let s = sp("right:perm");
    for n in 1..=5 {
        concentrated(&s, n, ChainVariant::Max, n - 1, (n - 1).pow(n as u32 - 1))?;
    }
    for n in 1..=4 {
        let p = s.level(n).poset.clone();
        let aug = if p.minimal().len() > 1 { p.adjoin_bottom() } else { p };
        let aug = if aug.maximal().len() > 1 { aug.adjoin_top() } else { aug };
        ensure!(is_totally_semimodular(&aug.dual()), "dual augmented Π^Perm({n}) is not totally semimodular");
        concentrated(&s, n, MM, n - 1, n.pow(n as u32 - 1))?;
    }
    Ok("ĥ^{n−1} = Z^{(n−1)^{n−1}} (n ≤ 5); semimodular and h^{n−1} = Z^{n^{n−1}} (n ≤ 4)".into())
}

fn c8_ns() -> Outcome {
    let s = sp("ns");
    for n in 2..=6 {
        concentrated(&s, n, MM, n - 1, n - 1)?;
    }
    let ctx = operad::context("ns").unwrap();
    let m = lie(&ctx, "[[1,2],[3,4]]");
    ensure!(m.degree == 3 && m.is_zero(), "metabelian class is nonzero");
    for n in 2..=5 {
        let cs: Vec<Class> = operad::comb_words(n).iter().map(|w| operad::lie_class(&ctx, w).unwrap()).collect();
        let r = operad::span_rank(&cs);
        ensure!(r == ctx.rank(n, MM, n - 1), "bracket words span rank {r} in h^{}(NS({n}))", n - 1);
    }
    Ok("h^{n−1}(NS(n)) = Z^{n−1} (n ≤ 6); [[1,2],[3,4]] = 0; bracket words span (n ≤ 5)".into())
}

fn c9_left_as_checkers() -> Outcome {
    let s = sp("left:as");
    for n in 1..=4 {
        let d = s.level(n).poset.adjoin_top().dual();
        let ok = check_recursive_atom_condition(&d, &catalog::sjt_atoms_left_as(n)).map_err(|e| e.to_string())?;
        ensure!(ok, "SJT atom order fails at n = {n}");
        concentrated(&s, n, ChainVariant::Min, n - 1, 1)?;
    }
    Ok("SJT atom condition holds and ȟ^{n−1} = Z (n ≤ 4)".into())
}

fn catalan(n: usize) -> u128 {
    posetcohom::partition::binomial(2 * n as u64, n as u64) / (n as u128 + 1)
}

fn c10_nc2() -> Outcome {
    let s = sp("nc2");
    let mut ranks = Vec::new();
    for n in 2..=4 {
        concentrated(&s, n, ChainVariant::Min, n - 1, (n - 1).pow(n as u32 - 1))?;
        let b = betti(&s, n, MM)?;
        ensure!(b.iter().enumerate().all(|(k, &r)| k == n - 1 || r == 0), "h(Π₂({n})) not concentrated: {b:?}");
        ranks.push(format!(
            "n={n}: rank {} (n!·Cat(n) = {}, n!·Cat(n−1) = {})",
            b[n - 1],
            factorial(n as u64) * catalan(n),
            factorial(n as u64) * catalan(n - 1)
        ));
    }
    for n in [3, 4] {
        // the top group carries the whole Euler characteristic
        let e = series::equivariant_euler(&s, n, ChainVariant::Min, n).map_err(|e| e.to_string())?;
        let sign = if n % 2 == 1 { 1 } else { -1 };
        for lambda in integer_partitions(n) {
            let z = lambda.len() as u32;
            let want = (if (n as u32 - z) % 2 == 0 { 1i64 } else { -1 }) * (n as i64 - 1).pow(z - 1);
            let got = e.character(&lambda) * BigRational::from_integer(sign.into());
            ensure!(got == BigRational::from_integer(want.into()), "Π₂({n}) character at {lambda:?}: {got} vs {want}");
            assert_eq!(cycle_type(&permutation_of_type(&lambda)), lambda);
        }
    }
    let ctx = operad::context("nc2").unwrap();
    let g = operad::prec_generator().unwrap();
    let terms: Vec<(i64, Class)> = ["[[1,2],3]", "[1,[2,3]]", "[[1,3],2]", "[1,[3,2]]"]
        .iter()
        .map(|w| (1, operad::word_class(&ctx, &g, &Word::parse(w).unwrap()).unwrap().class))
        .collect();
    ensure!(terms.iter().all(|(_, c)| !c.is_zero()), "a pre-Lie term vanishes");
    ensure!(operad::check_relation_zero(&terms).unwrap(), "pre-Lie relation is nonzero in h²(Π₂(3))");
    Ok(ranks.join("; "))
}

fn c11_trees() -> Outcome {
    let (mlt, mlrt) = (sp("mlt"), sp("mlrt"));
    for n in 2..=5 {
        concentrated(&mlt, n, MM, n - 1, catalog::cayley(n as u32) as usize)?;
        concentrated(&mlrt, n, MM, n - 1, n.pow(n as u32 - 1))?;
    }
    let ctx = operad::context("mlt").unwrap();
    let g = class(&ctx, 2, &[(1, &["12", "1-2"])]);
    let r = ctx.compose_partial(&g, &g, &[1, 2]).unwrap();
    let expected = class(&ctx, 3, &[(1, &["123", "1-23", "1-2,2-3"]), (1, &["123", "1-23", "1-3,2-3"])]);
    ensure!(r == expected, "tree composition gives {:?}", r.coords);
    let mut gens = Vec::new();
    for sigma in permutations(3) {
        for block in [[0, 1], [1, 2], [0, 2]] {
            gens.push(ctx.relabel(&sigma, &ctx.compose_partial(&g, &g, &block).unwrap()).unwrap());
        }
    }
    ensure!(operad::span_rank(&gens) == 2, "arity-2 generated rank {}", operad::span_rank(&gens));
    let m = catalog::forget_root(3).map_err(|r| format!("{:?}", r.failures))?;
    let rooted = operad::context_for(&m.source);
    let lvl = rooted.level(3, MM);
    let p = &lvl.poset.poset;
    for (tree, under) in [("1-2,2-3", "1-23"), ("1-2,1-3", "12-3"), ("1-3,2-3", "13-2")] {
        let pulled = operad::pullback_operad_morphism(&m, &class(&ctx, 3, &[(1, &["123", under, tree])])).unwrap();
        let mut sum = Class { coords: vec![BigRational::zero(); pulled.coords.len()], ..pulled.clone() };
        for root in 1..=3 {
            let top = format!("{tree}@{root}");
            let t = p.index_of(&top).unwrap();
            let mid = p
                .lower_covers(t)
                .iter()
                .map(|&m| m as usize)
                .find(|&m| p.label(m).starts_with(&format!("{under}@")))
                .unwrap();
            let bot = p.lower_covers(mid)[0] as usize;
            let chain = [p.label(bot), p.label(mid), top.as_str()];
            sum = sum.add(&rooted.class_of_chains(3, MM, &[(1, &chain)]).unwrap()).unwrap();
        }
        ensure!(pulled == sum, "root forgetting at {tree}");
    }
    Ok("ranks n^{n−2}, n^{n−1} (n ≤ 5); composition, rootings and rank-2 span reproduced".into())
}

fn c12_series() -> Outcome {
    let order = 12;
    for (m, n) in [(1, 1), (1, 5), (2, 3), (3, 2), (2, 2), (4, 3), (2, 6)] {
        let lhs = SymFunc::p(m, order).plethysm(&SymFunc::p(n, order)).unwrap();
        ensure!(lhs == SymFunc::p(m * n, order), "p{m}∘p{n} ≠ p{}", m * n);
    }
    let mut posets = 0;
    for name in ["pi", "left:as", "right:as", "right:perm", "left:nac2", "left:com", "right:com", "ns", "nc2", "mlt", "mlrt"] {
        let s = sp(name);
        for n in 1..=6 {
            let l = s.level(n);
            if l.len() > 40 {
                break;
            }
            for v in [ChainVariant::Full, MM, ChainVariant::Min, ChainVariant::Max] {
                ensure!(zeta_eval(&l.poset, v, -1) == mobius_number(&l.poset, v), "{name}({n}) {v:?}");
            }
            posets += 1;
        }
    }
    let rec = catalog::lists_count_recurrence(8);
    let right_as = sp("right:as");
    for n in 1..=8 {
        let mut direct = vec![0u128; n + 1];
        for p in Partition::all(n) {
            direct[p.num_blocks()] += p.block_sizes().iter().map(|&b| factorial(b as u64)).product::<u128>();
        }
        if n <= 5 {
            // counted again on the built poset
            let l = right_as.level(n);
            let mut built = vec![0u128; n + 1];
            for u in &l.under {
                built[u.num_blocks()] += 1;
            }
            ensure!(built == direct, "Π^As({n}) element counts by rank");
        }
        for k in 1..=n {
            let f = catalog::lists_count(n, k).unwrap();
            ensure!(f == rec[n][k] && f == direct[k], "f({n},{k}): formula {f}, recurrence {}, direct {}", rec[n][k], direct[k]);
        }
    }
    Ok(format!("plethysm spot checks; zeta(−1) = μ on {posets} posets; f(n,k) for n ≤ 8"))
}

fn c13_properties() -> Outcome {
    let suites = properties::all_suites();
    for &(name, f) in &suites {
        catch_unwind(f).map_err(|_| format!("{name} failed"))?;
    }
    Ok(format!("{} suites green", suites.len()))
}

const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, title: "partition posets", budget: secs(120), run: c1_partition_posets },
    Criterion { id: 2, title: "Jacobi and composition", budget: secs(60), run: c2_jacobi },
    Criterion { id: 3, title: "operad axiom suites", budget: secs(600), run: c3_operad_axioms },
    Criterion { id: 4, title: "right-As max cohomology table", budget: secs(300), run: c4_table3 },
    Criterion { id: 5, title: "left-As Möbius numbers", budget: secs(120), run: c5_left_as_mobius },
    Criterion { id: 6, title: "NAC2 consistency", budget: secs(120), run: c6_nac2 },
    Criterion { id: 7, title: "right-Perm", budget: secs(300), run: c7_right_perm },
    Criterion { id: 8, title: "non-singleton partitions", budget: secs(300), run: c8_ns },
    Criterion { id: 9, title: "left-As checkers", budget: secs(120), run: c9_left_as_checkers },
    Criterion { id: 10, title: "non-crossing 2-partitions", budget: secs(300), run: c10_nc2 },
    Criterion { id: 11, title: "multilabeled trees", budget: secs(600), run: c11_trees },
    Criterion { id: 12, title: "series engine", budget: secs(60), run: c12_series },
    Criterion { id: 13, title: "property suites", budget: secs(300), run: c13_properties },
];

#[test]
fn acceptance() {
    // written straight to the handle so the lines survive output capture
    let mut err = std::io::stderr();
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > c.budget => Err(format!("{d}; took {took:.1?} > {:?}", c.budget)),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        let _ = writeln!(err, "{tag} criterion {:>2} {:<30} {:>8.2?}  {detail}", c.id, c.title, took);
        if outcome.is_err() {
            failed.push(c.id);
        }
    }
    let _ = err.flush();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
