use f1kit_core::group::{
    additive_chain_model, check_action, check_group_axioms, constant_group, extension_model, f1_points_group,
    product_model, sigma_check, torus_group, z_rank_group, ExtensionLaw, FiniteGroupTable, GroupModel, ModelKind,
    ThetaRep,
};
use f1kit_core::matrix::IntMatrix;
use f1kit_core::reductive::gl_model;
use f1kit_core::Label;
use proptest::prelude::*;

/// `(W, θ)` pairs with θ a genuine representation.
fn base(choice: usize, r: usize) -> (FiniteGroupTable, ThetaRep) {
    match choice % 5 {
        0 => {
            let w = FiniteGroupTable::cyclic(2);
            // θ_s = -1 on the first coordinate, swap on the next two if present
            let s = IntMatrix::from_fn(r, r, |i, j| match (i, j) {
                (0, 0) => -1,
                (1, 2) | (2, 1) => 1,
                (i, j) if i == j && i > 2 => 1,
                _ => 0,
            });
            let s = if r >= 3 { s } else { IntMatrix::identity(r).neg() };
            (w.clone(), ThetaRep { r, matrices: vec![IntMatrix::identity(r), s] })
        }
        1 => {
            let w = FiniteGroupTable::cyclic(3);
            (w.clone(), ThetaRep::trivial(&w, r))
        }
        2 => {
            let w = FiniteGroupTable::symmetric(3);
            let theta = if r == 3 { ThetaRep::permutation(&w, 3).unwrap() } else { ThetaRep::trivial(&w, r) };
            (w, theta)
        }
        3 => {
            let w = FiniteGroupTable::cyclic(2).direct_product(&FiniteGroupTable::cyclic(2));
            (w.clone(), ThetaRep::trivial(&w, r))
        }
        _ => {
            let w = FiniteGroupTable::cyclic(4);
            (w.clone(), ThetaRep::trivial(&w, r))
        }
    }
}

/// `θ_a` acting on a sign vector.
fn act(theta: &ThetaRep, a: usize, x: &[i8]) -> Vec<i8> {
    let m = &theta.matrices[a];
    (0..theta.r)
        .map(|j| (0..theta.r).filter(|&k| x[k] < 0 && m[(j, k)].rem_euclid(2) == 1).count())
        .map(|odd| if odd % 2 == 1 { -1 } else { 1 })
        .collect()
}

fn times(a: &[i8], b: &[i8]) -> Vec<i8> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Coboundary `(δf)(a, b) = θ_a(f(b)) · f(ab) · f(a)` of a normalized
/// `f: W -> {±1}^r`, times the extra cocycle `z` when one is supplied.
fn cocycle(w: &FiniteGroupTable, theta: &ThetaRep, f: &[Vec<i8>], z: Option<&dyn Fn(usize, usize) -> Vec<i8>>) -> Vec<Vec<i8>> {
    let n = w.order();
    (0..n * n)
        .map(|k| {
            let (a, b) = (k / n, k % n);
            let d = times(&times(&act(theta, a, &f[b]), &f[w.mul(a, b)]), &f[a]);
            match z {
                Some(z) => times(&d, &z(a, b)),
                None => d,
            }
        })
        .collect()
}

fn law() -> impl Strategy<Value = ExtensionLaw> {
    (0usize..5, 0usize..4, prop::collection::vec(any::<bool>(), 24), any::<bool>()).prop_map(|(choice, r, bits, twist)| {
        let (w, theta) = base(choice, r);
        let n = w.order();
        let e = w.identity();
        let f: Vec<Vec<i8>> = (0..n)
            .map(|a| (0..r).map(|k| if a != e && bits[(a * 3 + k) % 24] { -1 } else { 1 }).collect())
            .collect();
        // for Z/2 with θ_s = -1 on the first coordinate, c(s, s) = -1 there is a
        // cocycle that is not a coboundary
        let sl2 = move |a: usize, b: usize| -> Vec<i8> {
            (0..r).map(|k| if k == 0 && a == 1 && b == 1 { -1 } else { 1 }).collect()
        };
        let z: Option<&dyn Fn(usize, usize) -> Vec<i8>> = if twist && choice % 5 == 0 && r > 0 { Some(&sl2) } else { None };
        let c = cocycle(&w, &theta, &f, z);
        ExtensionLaw::new(w, theta, c).expect("valid law")
    })
}

fn model(law: ExtensionLaw) -> GroupModel {
    let dims: Vec<usize> = (0..law.w.order()).map(|i| i % 3).collect();
    extension_model(law, &dims).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn valid_laws_satisfy_the_axioms(law in law()) {
        let g = model(law);
        let rep = check_group_axioms(&g);
        prop_assert!(rep.pass, "{:?}", rep.witness);
        prop_assert!(check_action(&g, &g.rank_scheme, &g.mu()).unwrap().pass);
    }

    #[test]
    fn f1_points_are_the_weyl_group(law in law()) {
        let w = law.w.clone();
        let pts = f1_points_group(&model(law)).unwrap();
        prop_assert!(pts.isomorphic_via(&w, |l| l.clone()));
    }

    #[test]
    fn rank_points_extend_w_by_signs(law in law()) {
        let r = law.r();
        let w = law.w.clone();
        let z = z_rank_group(&model(law)).unwrap();
        prop_assert_eq!(z.order(), (1 << r) * w.order());
        let proj = |i: usize| match z.label(i) {
            Label::Tuple(parts) => w.index_of(&parts[1]).unwrap(),
            _ => unreachable!(),
        };
        for a in 0..z.order() {
            for b in 0..z.order() {
                prop_assert_eq!(proj(z.mul(a, b)), w.mul(proj(a), proj(b)));
            }
        }
        let kernel = (0..z.order()).filter(|&i| proj(i) == w.identity()).count();
        prop_assert_eq!(kernel, 1 << r);
        prop_assert!(z.is_associative());
    }

    #[test]
    fn splitting_iff_trivial_cocycle(law in law()) {
        let trivial = law.cocycle_is_trivial();
        let g = model(law);
        prop_assert_eq!(g.kind == ModelKind::Strong, trivial);
        let s = sigma_check(&g).unwrap();
        prop_assert_eq!(s.homomorphism, trivial);
        prop_assert!(s.section && s.cosets);
        prop_assert_eq!(s.cocycle_trivial, trivial);
    }

    #[test]
    fn products_of_models(a in law(), b in law()) {
        prop_assume!(a.w.order() * b.w.order() <= 12);
        let (wa, wb) = (a.w.clone(), b.w.clone());
        let p = product_model(&model(a), &model(b));
        prop_assert!(check_group_axioms(&p).pass);
        prop_assert!(f1_points_group(&p).unwrap().isomorphic_via(&wa.direct_product(&wb), |l| l.clone()));
    }
}

#[test]
fn catalogue_models_pass() {
    let models = [
        torus_group(0),
        torus_group(3),
        constant_group(FiniteGroupTable::trivial()),
        constant_group(FiniteGroupTable::symmetric(3)),
        additive_chain_model(0),
        additive_chain_model(3),
        gl_model(1).unwrap(),
        gl_model(3).unwrap(),
    ];
    for g in &models {
        assert!(check_group_axioms(g).pass);
        assert!(sigma_check(g).unwrap().pass);
    }
    assert_eq!(f1_points_group(&additive_chain_model(1)).unwrap().order(), 1);
    assert_eq!(z_rank_group(&torus_group(1)).unwrap().order(), 2);
}

/// Signed permutation matrices `diag(s) · P_w`.
fn signed_permutation(signs: &[i64], w: &[usize]) -> IntMatrix {
    let n = w.len();
    IntMatrix::from_fn(n, n, |i, j| if w[j] == i { signs[i] } else { 0 })
}

#[test]
fn gl_rank_points_are_signed_permutations() {
    for n in 1..=3 {
        let z = z_rank_group(&gl_model(n).unwrap()).unwrap();
        assert_eq!(z.order(), (1 << n) * (1..=n).product::<usize>());
        let matrix = |i: usize| match z.label(i) {
            Label::Tuple(parts) => match (&parts[0], &parts[1]) {
                (Label::Seq(s), Label::Seq(w)) => {
                    signed_permutation(s, &w.iter().map(|&x| x as usize - 1).collect::<Vec<_>>())
                }
                _ => unreachable!(),
            },
            _ => unreachable!(),
        };
        for a in 0..z.order() {
            for b in 0..z.order() {
                assert_eq!(&matrix(a) * &matrix(b), matrix(z.mul(a, b)));
            }
        }
    }
}
