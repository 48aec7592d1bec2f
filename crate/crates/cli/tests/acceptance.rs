//! End-to-end acceptance criteria. Runs without the libtest harness and
//! prints one `[PASS]` or `[FAIL]` line per criterion.

use std::path::{Path, PathBuf};
use std::process::{exit, Command};
use std::time::Instant;

use f1kit_core::counting::{
    brute_count, gauss_binomial, gauss_factorial, gauss_number, torification_poly, vanishing_order_and_limit,
    BruteKind, IntPolynomial,
};
use f1kit_core::group::{
    check_action, check_group_axioms, f1_points_group, sigma_check, torus_group, z_rank_group, FiniteGroupTable,
    GroupModelFile, ModelKind,
};
use f1kit_core::matrix::IntMatrix;
use f1kit_core::monoid::{FgAbelianGroup, GroupHom, PointedMonoid};
use f1kit_core::reductive::{check_quotient, gl_model, grassmannian_model, parabolic_model, ParabolicType};
use f1kit_core::scheme::{
    affine_toric, check_strong, check_weak, f1_points, from_torification, rank_part, Component, RankScheme,
    StrongMorphismRk, Torification,
};
use f1kit_core::spectrum::{point_count_poly, spec, SpecSummary};
use f1kit_core::{BigInt, Label};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `Π_{i=0}^{n-1} (q^n - q^i)`.
fn gl_product(n: usize) -> IntPolynomial {
    (0..n).map(|i| &IntPolynomial::monomial(n) - &IntPolynomial::monomial(i)).product()
}

fn ac1() -> Outcome {
    let g = gauss_binomial(4, 2).map_err(|e| e.to_string())?;
    ensure!(g.eval_i64(2) == 35.into() && g.eval_i64(3) == 130.into(), "[4 2]_q at 2, 3 = {}, {}", g.eval_i64(2), g.eval_i64(3));
    for q in [2u64, 3] {
        let brute = brute_count(&BruteKind::Subspaces { k: 2, n: 4 }, q).map_err(|e| e.to_string())?;
        ensure!(BigInt::from(brute) == g.eval_i64(q as i64), "subspace oracle at q = {q} gave {brute}");
    }
    for n in 0..=8 {
        let lhs = &gauss_number(n) * &IntPolynomial::q_minus_one();
        ensure!(lhs == &IntPolynomial::monomial(n) - &IntPolynomial::one(), "[{n}]_q (q - 1) != q^{n} - 1");
        let fact: IntPolynomial = (1..=n).map(gauss_number).product();
        ensure!(gauss_factorial(n) == fact, "[{n}]_q! is not the product of Gauss numbers");
        for k in 0..=n {
            let b = gauss_binomial(n, k).map_err(|e| e.to_string())?;
            ensure!(
                &(&b * &gauss_factorial(k)) * &gauss_factorial(n - k) == gauss_factorial(n),
                "[{n} {k}]_q [{k}]_q! [{}]_q! != [{n}]_q!",
                n - k
            );
        }
    }
    Ok(())
}

fn ac2() -> Outcome {
    for n in 1..=5 {
        let p = torification_poly(&gl_model(n).map_err(|e| e.to_string())?.cells);
        ensure!(p == gl_product(n), "GL({n}) cell sum {p} differs from the product formula");
    }
    let p = torification_poly(&gl_model(2).map_err(|e| e.to_string())?.cells);
    for (q, expected) in [(2u64, 6u64), (3, 48)] {
        let brute = brute_count(&BruteKind::Gl { n: 2 }, q).map_err(|e| e.to_string())?;
        ensure!(brute == expected, "GL(2, F_{q}) oracle gave {brute}");
        ensure!(p.eval_i64(q as i64) == expected.into(), "N_GL(2)({q}) = {}", p.eval_i64(q as i64));
    }
    Ok(())
}

fn ac3() -> Outcome {
    for n in 1..=5 {
        let p = torification_poly(&gl_model(n).map_err(|e| e.to_string())?.cells);
        let l = vanishing_order_and_limit(&p).map_err(|e| e.to_string())?;
        ensure!(l.rho == n && l.limit == factorial(n), "GL({n}) limit ({}, {})", l.rho, l.limit);
    }
    for n in 1..=8 {
        for k in 0..=n {
            let p = torification_poly(&grassmannian_model(k, n).map_err(|e| e.to_string())?.cells);
            let l = vanishing_order_and_limit(&p).map_err(|e| e.to_string())?;
            ensure!(l.rho == 0 && l.limit == binomial(n, k), "Gr({k},{n}) limit ({}, {})", l.rho, l.limit);
        }
    }
    Ok(())
}

fn ac4() -> Outcome {
    for n in 0..=6 {
        let a = f1_points(&from_torification(Torification::affine_space(n))).len();
        ensure!(a == 1, "A^{n} has {a} F1-points");
        let t = f1_points(&from_torification(torus_group(n).cells)).len();
        ensure!(t == 1, "torus of rank {n} has {t} F1-points");
        if n >= 1 {
            let g = f1_points(&from_torification(gl_model(n).map_err(|e| e.to_string())?.cells)).len();
            ensure!(BigInt::from(g) == factorial(n), "GL({n}) has {g} F1-points");
        }
        for k in 0..=n {
            let c = f1_points(&grassmannian_model(k, n).map_err(|e| e.to_string())?).len();
            ensure!(BigInt::from(c) == binomial(n, k), "Gr({k},{n}) has {c} F1-points");
        }
    }
    Ok(())
}

fn ac5() -> Outcome {
    for n in 1..=4 {
        let g = gl_model(n).map_err(|e| e.to_string())?;
        let axioms = check_group_axioms(&g);
        ensure!(axioms.pass, "GL({n}) axioms fail: {:?}", axioms.witness);
        let pts = f1_points_group(&g).map_err(|e| e.to_string())?;
        ensure!(pts.isomorphic_via(&FiniteGroupTable::symmetric(n), Label::clone), "GL({n})(F1) is not S_{n}");
        let s = sigma_check(&g).map_err(|e| e.to_string())?;
        ensure!(s.pass && s.homomorphism && s.section && s.cosets, "σ fails for GL({n}): {:?}", s.witness);
    }
    Ok(())
}

/// Monomial matrices in `SL_2(Z)`.
fn monomial_sl2() -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for e in 0..81 {
        let v: Vec<i64> = (0..4).map(|i| (e / 3i64.pow(i)) % 3 - 1).collect();
        let m = IntMatrix::from_fn(2, 2, |i, j| v[2 * i + j]);
        let monomial = (0..2).all(|i| (0..2).filter(|&j| m[(i, j)] != 0).count() == 1)
            && (0..2).all(|j| (0..2).filter(|&i| m[(i, j)] != 0).count() == 1);
        if monomial && m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] == 1 {
            out.push(m);
        }
    }
    out
}

fn ac6() -> Outcome {
    let text = std::fs::read_to_string(fixtures().join("sl2.json")).map_err(|e| e.to_string())?;
    let file: GroupModelFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let g = file.into_model().map_err(|e| e.to_string())?;
    ensure!(g.kind == ModelKind::Weak, "SL(2) data gave a strong model");
    let axioms = check_group_axioms(&g);
    ensure!(axioms.pass, "SL(2) axioms fail: {:?}", axioms.witness);

    let z = z_rank_group(&g).map_err(|e| e.to_string())?;
    let oracle = monomial_sl2();
    ensure!(z.order() == 4 && oracle.len() == 4, "orders {} and {}", z.order(), oracle.len());
    // t ↦ diag(t, t), (t, s) ↦ t [[0, -1], [1, 0]]
    let rot = IntMatrix::from_fn(2, 2, |i, j| [[0, -1], [1, 0]][i][j]);
    let image = |i: usize| -> IntMatrix {
        let Label::Tuple(parts) = z.label(i) else { unreachable!() };
        let Label::Seq(t) = &parts[0] else { unreachable!() };
        let base = if parts[1] == Label::name("s") { rot.clone() } else { IntMatrix::identity(2) };
        IntMatrix::from_fn(2, 2, |a, b| t[0] * base[(a, b)])
    };
    let map: Vec<usize> = (0..4).filter_map(|i| oracle.iter().position(|m| *m == image(i))).collect();
    let mut sorted = map.clone();
    sorted.sort();
    ensure!(sorted == [0, 1, 2, 3], "rank points do not land bijectively on SL_2(Z) monomials");
    for a in 0..4 {
        for b in 0..4 {
            ensure!(&image(a) * &image(b) == image(z.mul(a, b)), "not a homomorphism at ({a}, {b})");
        }
    }
    ensure!((0..4).any(|i| z.element_order(i) == 4), "rank points are not cyclic");

    let s = sigma_check(&g).map_err(|e| e.to_string())?;
    ensure!(!s.homomorphism && s.section && s.cosets, "σ report {:?}", s);
    ensure!(s.witness == Some(json!({"pair": ["s", "s"], "cocycle": [-1]})), "witness {:?}", s.witness);
    Ok(())
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Restricts a block-preserving permutation to its blocks, labeled as in
/// the left-nested direct product of symmetric groups.
fn block_label(parts: &[usize], label: &Label) -> Label {
    let Label::Seq(w) = label else { return label.clone() };
    let mut offset = 0;
    let mut acc: Option<Label> = None;
    for &k in parts {
        let block = Label::Seq(w[offset..offset + k].iter().map(|&x| x - offset as i64).collect());
        acc = Some(match acc {
            None => block,
            Some(a) => Label::pair(a, block),
        });
        offset += k;
    }
    acc.unwrap()
}

fn ac7() -> Outcome {
    for n in 1..=4 {
        for parts in compositions(n) {
            let t = ParabolicType::new(parts.clone()).map_err(|e| e.to_string())?;
            let p = parabolic_model(&t).map_err(|e| e.to_string())?;
            let levi = parts[1..]
                .iter()
                .fold(FiniteGroupTable::symmetric(parts[0]), |acc, &k| acc.direct_product(&FiniteGroupTable::symmetric(k)));
            let pts = f1_points_group(&p).map_err(|e| e.to_string())?;
            ensure!(pts.isomorphic_via(&levi, |l| block_label(&parts, l)), "P{parts:?}(F1) is not the Levi Weyl group");
            let poly = torification_poly(&p.cells);
            let oracle: IntPolynomial = parts.iter().map(|&k| gl_product(k)).product();
            let oracle = &IntPolynomial::monomial(t.dim_u()) * &oracle;
            ensure!(poly == oracle, "P{parts:?} count {poly} != {oracle}");
            let l = vanishing_order_and_limit(&poly).map_err(|e| e.to_string())?;
            let lim: BigInt = parts.iter().map(|&k| factorial(k)).product();
            ensure!(l.rho == n && l.limit == lim, "P{parts:?} limit ({}, {})", l.rho, l.limit);
        }
    }
    Ok(())
}

fn ac8() -> Outcome {
    for (k, n) in [(1, 2), (1, 3), (2, 4)] {
        let r = check_quotient(k, n).map_err(|e| e.to_string())?;
        let wp = factorial(k) * factorial(n - k);
        let w = factorial(n);
        ensure!(r.square.pass && BigInt::from(r.square.checks) == &wp * &w, "({k},{n}) square {:?}", r.square);
        ensure!(r.bijection.pass, "({k},{n}) bijection {:?}", r.bijection.witness);
        ensure!(
            r.tau.pass && BigInt::from(r.tau.equivariance.checks) == &w * binomial(n, k),
            "({k},{n}) tau {} checks",
            r.tau.equivariance.checks
        );
        ensure!(r.lambda_action.pass && r.lambda_strong.pass, "({k},{n}) λ fails");
        ensure!(r.pass, "({k},{n}) quotient suite fails");
    }
    Ok(())
}

fn ac9() -> Outcome {
    for d in 0..=4usize {
        let s = spec(&PointedMonoid::orthant(d)).map_err(|e| e.to_string())?;
        ensure!(s.point_count() == 1 << d, "Spec N^{d} has {} points", s.point_count());
        let summary = SpecSummary::of(&s);
        let faces: Vec<&Vec<usize>> = summary.points.iter().map(|p| &p.face).collect();
        let mut expected = Vec::new();
        for (i, a) in faces.iter().enumerate() {
            for (j, b) in faces.iter().enumerate() {
                if a.len() > b.len() && b.iter().all(|x| a.contains(x)) {
                    expected.push([i, j]);
                }
            }
        }
        let mut got = summary.specialization.clone();
        got.sort();
        expected.sort();
        ensure!(got == expected, "Spec N^{d} specialization order");
        let p = point_count_poly(&PointedMonoid::orthant(d)).map_err(|e| e.to_string())?;
        ensure!(p == IntPolynomial::monomial(d), "N^{d} counts {p}");
    }
    let mut corpus: Vec<_> = std::fs::read_dir(fixtures().join("monoids"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    corpus.sort();
    ensure!(!corpus.is_empty(), "empty monoid corpus");
    for path in corpus {
        let m: PointedMonoid =
            serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let p = point_count_poly(&m).map_err(|e| e.to_string())?;
        for q in [2u64, 3] {
            let brute = brute_count(&BruteKind::MonoidHoms(m.clone()), q).map_err(|e| e.to_string())?;
            ensure!(p.eval_i64(q as i64) == brute.into(), "{} at q = {q}: {} vs {brute}", path.display(), p.eval_i64(q as i64));
        }
    }
    Ok(())
}

fn random_scheme(rng: &mut StdRng, r: usize) -> RankScheme {
    let len = rng.gen_range(1..=3);
    RankScheme::new(
        (0..len)
            .map(|i| {
                let torsion: Vec<u64> = if rng.gen_bool(0.3) { vec![rng.gen_range(2..5)] } else { Vec::new() };
                Component { label: Label::name(format!("x{i}")), stalk: FgAbelianGroup::from_cyclic_factors(r, &torsion) }
            })
            .collect(),
    )
    .unwrap()
}

/// A comap `target -> source` respecting torsion orders.
fn random_comap(rng: &mut StdRng, target: &FgAbelianGroup, source: &FgAbelianGroup) -> GroupHom {
    let cols = target.num_generators();
    let seed: Vec<i64> = (0..source.num_generators() * cols).map(|_| rng.gen_range(-3..4)).collect();
    let images = IntMatrix::from_fn(source.num_generators(), cols, |i, j| {
        let x = seed[i * cols + j];
        match (i < source.rank(), j < target.rank()) {
            (true, true) => x,
            (true, false) => 0,
            (false, free) => {
                let t = source.torsion()[i - source.rank()] as i64;
                if free {
                    x.rem_euclid(t)
                } else {
                    let m = target.torsion()[j - target.rank()] as i64;
                    let g = gcd(t, m);
                    (x * (t / g)).rem_euclid(t)
                }
            }
        }
    });
    GroupHom::new(target.clone(), source.clone(), images)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_morphism(rng: &mut StdRng, source: &RankScheme, target: &RankScheme) -> StrongMorphismRk {
    let map: Vec<usize> = (0..source.len()).map(|_| rng.gen_range(0..target.len())).collect();
    let comaps = map.iter().enumerate().map(|(x, &y)| random_comap(rng, target.stalk(y), source.stalk(x))).collect();
    StrongMorphismRk { source: source.clone(), target: target.clone(), component_map: map, comaps }
}

fn ac10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..100 {
        let ranks: Vec<usize> = (0..3).map(|_| rng.gen_range(0..3)).collect();
        let (x, y, z) = (random_scheme(&mut rng, ranks[0]), random_scheme(&mut rng, ranks[1]), random_scheme(&mut rng, ranks[2]));
        let f = random_morphism(&mut rng, &x, &y);
        let g = random_morphism(&mut rng, &y, &z);
        ensure!(check_strong(&f).map_err(|e| e.to_string())?.pass, "case {case}: generated morphism is not strong");
        let w = check_weak(&f.to_weak()).map_err(|e| e.to_string())?;
        ensure!(w.weak.pass && w.strong, "case {case}: strong morphism is not weak");
        let fg = f.then(&g).map_err(|e| e.to_string())?;
        ensure!(check_strong(&fg).map_err(|e| e.to_string())?.pass, "case {case}: composite is not strong");
        let composed = f.to_weak().then(&g.to_weak()).map_err(|e| e.to_string())?;
        ensure!(check_weak(&composed).map_err(|e| e.to_string())?.weak.pass, "case {case}: weak composite fails");
        ensure!(composed.mo_part() == fg.to_weak().mo_part(), "case {case}: composites disagree");
    }
    for d in 0..=4 {
        let toric = rank_part(&affine_toric(&PointedMonoid::orthant(d)).map_err(|e| e.to_string())?);
        let cells = rank_part(&from_torification(Torification::affine_space(d)));
        ensure!(toric.isomorphic_up_to_labels(&cells), "rank parts of A^{d} differ");
    }
    let g = gl_model(3).map_err(|e| e.to_string())?;
    ensure!(check_action(&g, &g.rank_scheme, &g.mu()).map_err(|e| e.to_string())?.pass, "μ is not an action");
    Ok(())
}

fn cli_suite() -> Result<Vec<u8>, String> {
    let fx = fixtures();
    let sl2 = format!("ext:{}", fx.join("sl2.json").display());
    let s3 = format!("const:{}", fx.join("s3.json").display());
    let plane = format!("monoid:{}", fx.join("monoids/a1_cone.json").display());
    let runs: Vec<Vec<&str>> = vec![
        vec!["count", "--model", "gl:3", "--eval", "2,3", "--limit"],
        vec!["count", "--model", "gr:2,4", "--eval", "2,3", "--limit"],
        vec!["count", "--model", "parabolic:4:2+2", "--limit"],
        vec!["points", "--model", "gr:2,4", "--over", "f1"],
        vec!["points", "--model", "torus:2", "--over", "h:2,3"],
        vec!["check", "--model", "gl:3", "--suite", "group,sigma,action,strongweak"],
        vec!["check", "--model", "gl:4", "--suite", "quotient:2"],
        vec!["check", "--model", &sl2, "--suite", "group,sigma"],
        vec!["check", "--model", &s3, "--suite", "group"],
        vec!["oracle", "--model", "gl:2", "--q", "2,3"],
        vec!["oracle", "--model", "gr:2,4", "--q", "2"],
        vec!["spec", "--model", &plane],
        vec!["count", "--model", &plane, "--eval", "2,3"],
    ];
    let mut out = Vec::new();
    for args in runs {
        let o = Command::new(env!("CARGO_BIN_EXE_f1kit")).args(&args).output().map_err(|e| e.to_string())?;
        // the SL(2) sigma suite fails by design
        let expected = if args.contains(&sl2.as_str()) { 1 } else { 0 };
        ensure!(o.status.code() == Some(expected), "{args:?} exited with {:?}", o.status.code());
        out.extend_from_slice(&o.stdout);
    }
    Ok(out)
}

fn ac11() -> Outcome {
    let a = cli_suite()?;
    let b = cli_suite()?;
    ensure!(!a.is_empty(), "empty CLI output");
    ensure!(a == b, "CLI outputs differ between runs");
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("AC1 Gauss identities and subspace oracle", ac1),
        ("AC2 GL cell sum equals the product formula", ac2),
        ("AC3 Weyl limits of GL(n) and Gr(k,n)", ac3),
        ("AC4 F1-point counts", ac4),
        ("AC5 GL(n) group object and Weyl splitting", ac5),
        ("AC6 SL(2) cocycle obstruction", ac6),
        ("AC7 parabolic models", ac7),
        ("AC8 Grassmannian quotients", ac8),
        ("AC9 monoid spectra and point counts", ac9),
        ("AC10 morphism calculus", ac10),
        ("AC11 deterministic CLI output", ac11),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("[PASS] {name} ({ms} ms)"),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {name} ({ms} ms): {e}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        exit(1);
    }
}
