//! Acceptance gate. One test per criterion; each prints a single
//! `criterion NN [PASS|FAIL] name (elapsed of budget)` line and fails the
//! build if the check or its wall-clock budget is violated.
//!
//! The stretch runs (large searches that may legitimately exhaust their
//! budgets) are behind `#[ignore]`; run them with
//! `cargo test --test acceptance -- --ignored --nocapture`. A `TIMEOUT`
//! line from those is an acceptable, distinctly reported outcome.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use apnforge::family::{
    build_family, family_automorphism, family_code, gold_comparison, subgroup_u,
    verify_c_independence, FamilyAut, FamilyParams, Verdict,
};
use apnforge::funcspace::{builtin_function, random_quadratic, Builtin};
use apnforge::gf2n::{make_field, FieldSpec};
use apnforge::lincode::{build_code, ea_witness, DualDistance};
use apnforge::permgrp::{
    frobenius_perm, full_automorphism_group, group_order, is_automorphism, mult_perm,
    translation_perm, PermGroup, Permutation,
};
use apnforge::Error;

fn check(idx: u32, name: &str, budget_secs: u64, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed().as_secs_f64();
    let within = elapsed <= budget_secs as f64;
    let status = if outcome.is_ok() && within {
        "PASS"
    } else {
        "FAIL"
    };
    println!("criterion {idx:02} [{status}] {name} ({elapsed:.2}s of {budget_secs}s)");
    if let Err(msg) = outcome {
        panic!("criterion {idx:02} {name}: {msg}");
    }
    assert!(within, "criterion {idx:02} {name}: wall budget exceeded");
}

fn lib<T>(r: apnforge::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gold_table(field: FieldSpec, r: u32) -> Result<apnforge::funcspace::FunctionTable, String> {
    Ok(lib(builtin_function(field, &Builtin::Gold { r }))?.evaluate())
}

/// Translations, multiplication by a primitive element, and Frobenius:
/// the canonical automorphisms of a power-function code.
fn semilinear_group(field: FieldSpec) -> Result<PermGroup, String> {
    let mut gens: Vec<Permutation> = (1..=field.n())
        .map(|i| translation_perm(field.basis(i)))
        .collect();
    gens.push(lib(mult_perm(field.first_primitive()))?);
    gens.push(frobenius_perm(field, 1));
    lib(group_order(&gens))
}

fn translation_group(field: FieldSpec) -> Result<PermGroup, String> {
    let gens: Vec<Permutation> = (1..=field.n())
        .map(|i| translation_perm(field.basis(i)))
        .collect();
    lib(group_order(&gens))
}

fn k3_params(s: u32) -> Result<FamilyParams, String> {
    let field = lib(make_field(6, None))?;
    lib(FamilyParams::new(field, 3, s, None, None))
}

#[test]
fn criterion_01_gold_functions_are_apn() {
    check(1, "gold sweep n=3..8 is APN", 10, || {
        for n in 3..=8u32 {
            let field = lib(make_field(n, None))?;
            for r in 1..n {
                if gcd(r, n) != 1 {
                    continue;
                }
                let f = gold_table(field, r)?;
                ensure(
                    f.differential_uniformity() == 2,
                    format!("x^(2^{r}+1) on gf2e{n} is not APN"),
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_02_apn_iff_dual_distance_six() {
    check(2, "APN <=> dual distance 6 at n=4,5", 30, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0002);
        for n in [4u32, 5] {
            let field = lib(make_field(n, None))?;
            let mut tables = Vec::new();
            for r in 1..n {
                if gcd(r, n) == 1 {
                    tables.push(gold_table(field, r)?);
                }
            }
            for _ in 0..20 {
                tables.push(random_quadratic(field, &mut rng).evaluate());
            }
            for f in &tables {
                let apn = f.is_apn();
                let dist = lib(build_code(f).dual_min_distance(8))?;
                match (apn, dist) {
                    (true, DualDistance::Exact(6)) => {}
                    (false, DualDistance::Exact(w)) if w <= 4 => {}
                    (apn, dist) => {
                        return Err(format!("apn = {apn} but dual distance {dist:?} at n = {n}"))
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_family_code_dimension() {
    check(3, "family code has dimension 13 at k=3", 1, || {
        for s in [1u32, 5] {
            let p = k3_params(s)?;
            let dim = family_code(&p).dimension();
            ensure(dim == 13, format!("dim = {dim} for s = {s}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_04_translations_fix_quadratic_codes() {
    check(
        4,
        "translations are automorphisms for quadratics at n=6",
        30,
        || {
            let field = lib(make_field(6, None))?;
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0004);
            for _ in 0..10 {
                let f = random_quadratic(field, &mut rng).evaluate();
                let c = build_code(&f);
                for k in field.elements() {
                    ensure(
                        lib(is_automorphism(&c, &translation_perm(k)))?,
                        format!("translation by 0x{:x} fails", k.bits()),
                    )?;
                }
            }
            Ok(())
        },
    );
}

// The expected orders: the translations : multiplications : Galois group
// of order 2^n (2^n-1) n is always contained, and at n = 5 and n = 6 it is
// the whole group (4960, 24192). At n = 4 the code has extra GF(4)-linear
// symmetry and the full group is 2^4 : GammaL(2,4) of order 5760, strictly
// above the generic 960; this was cross-checked against a from-scratch
// codeword-set closure independent of the search.
#[test]
fn criterion_05_gold_full_automorphism_groups() {
    check(
        5,
        "full aut of gold codes: 5760 at n=4 (>960), 4960 at n=5, 24192 at n=6",
        960,
        || {
            let f4 = lib(make_field(4, None))?;
            let start = Instant::now();
            let g4 = lib(full_automorphism_group(
                &build_code(&gold_table(f4, 1)?),
                None,
                Some(Duration::from_secs(60)),
            ))?;
            ensure(g4.order() == 5760, format!("n=4 order = {}", g4.order()))?;
            ensure(
                g4.contains_group(&semilinear_group(f4)?),
                "n=4 group must contain the order-960 semilinear group",
            )?;
            ensure(
                start.elapsed() <= Duration::from_secs(60),
                "n=4 search exceeded 60s",
            )?;

            let f5 = lib(make_field(5, None))?;
            let g5 = lib(full_automorphism_group(
                &build_code(&gold_table(f5, 1)?),
                None,
                Some(Duration::from_secs(60)),
            ))?;
            ensure(g5.order() == 4960, format!("n=5 order = {}", g5.order()))?;

            let f6 = lib(make_field(6, None))?;
            let seed = semilinear_group(f6)?;
            let g6 = lib(full_automorphism_group(
                &build_code(&gold_table(f6, 1)?),
                Some(&seed),
                Some(Duration::from_secs(900)),
            ))?;
            ensure(g6.order() == 24192, format!("n=6 order = {}", g6.order()))
        },
    );
}

#[test]
fn criterion_06_sporadic_aut_orders() {
    check(
        6,
        "full aut order 320 for the two n=6 sporadics",
        1800,
        || {
            let field = lib(make_field(6, None))?;
            let seed = translation_group(field)?;
            for builtin in [Builtin::DillonH1, Builtin::DillonH2] {
                let f = lib(builtin_function(field, &builtin))?.evaluate();
                ensure(f.is_apn(), "sporadic representative is not APN")?;
                let g = lib(full_automorphism_group(
                    &build_code(&f),
                    Some(&seed),
                    Some(Duration::from_secs(900)),
                ))?;
                ensure(
                    g.order() == 320,
                    format!("order = {} for {builtin:?}", g.order()),
                )?;
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_07_subgroup_u_order_and_membership() {
    check(
        7,
        "U has order 1344 and consists of automorphisms",
        60,
        || {
            let p = k3_params(1)?;
            let u = lib(subgroup_u(&p))?;
            ensure(
                u.group.order() == 1344,
                format!("order = {}", u.group.order()),
            )?;
            let c = family_code(&p);
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0007);
            for _ in 0..20 {
                let g = u.group.random_element(&mut rng);
                ensure(lib(is_automorphism(&c, &g))?, "sampled element fails")?;
            }
            let (a, b) = &u.noncommuting;
            ensure(a.compose(b) != b.compose(a), "U looks abelian")?;
            Ok(())
        },
    );
}

#[test]
fn criterion_08_delta_order_and_cube() {
    check(8, "delta has order 9 and cube mult-by-omega", 5, || {
        let p = k3_params(1)?;
        let d = lib(family_automorphism(&p, &FamilyAut::Delta))?;
        ensure(
            d.element_order() == 9,
            format!("order = {}", d.element_order()),
        )?;
        let omega = lib(mult_perm(p.omega()))?;
        ensure(d.pow(3) == omega, "delta^3 is not multiplication by omega")?;
        Ok(())
    });
}

#[test]
fn criterion_09_family_full_automorphism_group() {
    check(
        9,
        "full aut of the s=1 family code has order 4032",
        900,
        || {
            let p = k3_params(1)?;
            let u = lib(subgroup_u(&p))?;
            let g = lib(full_automorphism_group(
                &family_code(&p),
                Some(&u.group),
                Some(Duration::from_secs(900)),
            ))?;
            ensure(g.order() == 4032, format!("order = {}", g.order()))
        },
    );
}

#[test]
fn criterion_10_code_independent_of_c() {
    check(10, "code does not depend on the choice of c", 30, || {
        for s in [1u32, 5] {
            let p = k3_params(s)?;
            let sub = p.subfield();
            let mut checked = 0;
            for d in p.field().elements() {
                if checked == 5 {
                    break;
                }
                if d.is_zero() || d == p.c() || lib(d.in_subfield(sub))? {
                    continue;
                }
                ensure(
                    lib(verify_c_independence(&p, d))?,
                    format!("code moved at c = 0x{:x}, s = {s}", d.bits()),
                )?;
                checked += 1;
            }
            ensure(checked == 5, "fewer than 5 admissible c values")?;
        }
        Ok(())
    });
}

#[test]
fn criterion_11_family_vs_gold_verdicts() {
    check(
        11,
        "family is CCZ-inequivalent to every admissible gold",
        60,
        || {
            for s in [1u32, 5] {
                let p = k3_params(s)?;
                for r in [1u32, 5, 7, 11] {
                    let cert = lib(gold_comparison(&p, r))?;
                    ensure(
                        cert.verdict == Verdict::NotCczEquivalent,
                        format!("verdict {} at s = {s}, r = {r}", cert.verdict),
                    )?;
                    ensure(
                        cert.quadratic_flags == (true, true) && !cert.codes_equal,
                        "certificate internals are inconsistent",
                    )?;
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_12_unique_regular_subgroup_for_gold() {
    check(
        12,
        "translations are the unique regular subgroup at n=4",
        120,
        || {
            let field = lib(make_field(4, None))?;
            let g = lib(full_automorphism_group(
                &build_code(&gold_table(field, 1)?),
                None,
                Some(Duration::from_secs(60)),
            ))?;
            let subs = lib(apnforge::permgrp::regular_elem_abelian_subgroups(&g))?;
            ensure(subs.len() == 1, format!("{} regular subgroups", subs.len()))?;
            ensure(subs[0].order() == 16, "wrong subgroup order")?;
            for k in field.elements() {
                ensure(
                    subs[0].contains(&translation_perm(k)),
                    "subgroup is not the translation group",
                )?;
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_13_regular_subgroups_all_conjugate() {
    check(
        13,
        "regular subgroups of the h1 aut group are conjugate",
        1800,
        || {
            let field = lib(make_field(6, None))?;
            let f = lib(builtin_function(field, &Builtin::DillonH1))?.evaluate();
            let c = build_code(&f);
            let seed = translation_group(field)?;
            let g = lib(full_automorphism_group(
                &c,
                Some(&seed),
                Some(Duration::from_secs(900)),
            ))?;
            let subs = lib(apnforge::permgrp::regular_elem_abelian_subgroups(&g))?;
            ensure(!subs.is_empty(), "no regular subgroups found")?;
            println!(
                "  ({} regular subgroups of a group of order {})",
                subs.len(),
                g.order()
            );
            for i in 0..subs.len() {
                for j in (i + 1)..subs.len() {
                    let h = lib(apnforge::permgrp::conjugating_element(
                        &g, &subs[i], &subs[j],
                    ))?;
                    ensure(h.is_some(), format!("subgroups {i} and {j} not conjugate"))?;
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_14_recovery_and_witness_roundtrip() {
    check(
        14,
        "function recovery and affine witness round-trip",
        60,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0014);
            let mut done = 0;
            'outer: loop {
                for n in [4u32, 5, 6] {
                    if done == 20 {
                        break 'outer;
                    }
                    let field = lib(make_field(n, None))?;
                    let f = random_quadratic(field, &mut rng).evaluate();
                    let c = build_code(&f);
                    let g = lib(c.function_from_code())?;
                    let cg = build_code(&g);
                    ensure(
                        lib(cg.code_equal(&c))?,
                        format!("round-trip moved the code at n = {n}"),
                    )?;
                    let w = lib(ea_witness(&c, &cg))?;
                    ensure(
                        w.verify(&c, &cg),
                        format!("witness fails verification at n = {n}"),
                    )?;
                    done += 1;
                }
            }
            Ok(())
        },
    );
}

/// Stretch run: the n = 8 sporadic. Kept out of the default gate for its
/// size, not its runtime; if a slow machine does exhaust the budget, the
/// TIMEOUT line is the honest report of that outcome.
#[test]
#[ignore]
fn stretch_h3_full_automorphism_group() {
    let start = Instant::now();
    let field = make_field(8, None).unwrap();
    let f = builtin_function(field, &Builtin::DillonH3)
        .unwrap()
        .evaluate();
    assert!(f.is_apn());
    let seed = translation_group(field).map_err(|e| e.to_string()).unwrap();
    match full_automorphism_group(
        &build_code(&f),
        Some(&seed),
        Some(Duration::from_secs(7200)),
    ) {
        Ok(g) => {
            let pass = g.order() == 46080;
            println!(
                "stretch h3 [{}] full aut order {} ({:.0}s of 7200s)",
                if pass { "PASS" } else { "FAIL" },
                g.order(),
                start.elapsed().as_secs_f64()
            );
            assert!(pass, "expected order 46080, found {}", g.order());
        }
        Err(Error::Timeout(s)) => {
            println!("stretch h3 [TIMEOUT] budget of {s}s exhausted");
        }
        Err(e) => panic!("stretch h3 failed: {e}"),
    }
}

/// Stretch run: the k = 5 member on gf2e10. The certificate itself is
/// cheap; it is kept out of the default gate because n = 10 objects are.
#[test]
#[ignore]
fn stretch_k5_gold_comparison() {
    let field = make_field(10, None).unwrap();
    let p = FamilyParams::new(field, 5, 1, None, None).unwrap();
    assert!(build_family(&p).is_apn());
    assert_eq!(family_code(&p).dimension(), 21);
    for r in [1u32, 3, 7, 9] {
        let cert = gold_comparison(&p, r).unwrap();
        assert_eq!(
            cert.verdict,
            Verdict::NotCczEquivalent,
            "verdict {} at r = {r}",
            cert.verdict
        );
    }
    println!("stretch k5 [PASS] gold comparisons on gf2e10");
}

/// Stretch run: full automorphism search at n = 10 under a 15-minute
/// budget. Completes in well under a minute here (order 476160, five times
/// the order of U, matching the k = 3 pattern); the TIMEOUT branch is the
/// distinctly reported outcome if a machine cannot finish in time.
#[test]
#[ignore]
fn stretch_k5_full_automorphism_group() {
    let start = Instant::now();
    let field = make_field(10, None).unwrap();
    let p = FamilyParams::new(field, 5, 1, None, None).unwrap();
    let u = subgroup_u(&p).unwrap();
    match full_automorphism_group(
        &family_code(&p),
        Some(&u.group),
        Some(Duration::from_secs(900)),
    ) {
        Ok(g) => println!(
            "stretch k5 aut [DONE] order {} ({:.0}s of 900s)",
            g.order(),
            start.elapsed().as_secs_f64()
        ),
        Err(Error::Timeout(s)) => println!("stretch k5 aut [TIMEOUT] budget of {s}s exhausted"),
        Err(e) => panic!("stretch k5 aut failed: {e}"),
    }
}
