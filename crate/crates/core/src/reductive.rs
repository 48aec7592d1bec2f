//! Type A catalogue: `GL(n)`, its parabolic subgroups, Grassmannians with
//! their Schubert cells, the left action of a maximal parabolic on `GL(n)`
//! and the quotient identifying right cosets with `k`-subsets.

use serde::Serialize;
use serde_json::json;

use crate::counting::IntPolynomial;
use crate::error::{Error, Result};
use crate::group::{
    check_action, constant_group, ExtensionLaw, FiniteGroupTable, GroupModel, ModelKind, ThetaRep,
};
use crate::label::Label;
use crate::matrix::IntMatrix;
use crate::monoid::{FgAbelianGroup, GroupHom};
use crate::perm;
use crate::report::CheckReport;
use crate::scale;
use crate::scheme::{
    check_strong, check_weak, from_torification, rank_part, Cell, F1Scheme, MonomialMap, RankScheme, Torification,
    WeakMorphism,
};

pub const MAX_GL: usize = 6;
pub const MAX_GRASSMANNIAN: usize = 8;
/// Largest `n` for which the τ action diagrams are checked exhaustively.
pub const MAX_TAU_ACTION: usize = 5;

/// `S_n` with Coxeter lengths, elements in lexicographic one-line order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylSn {
    n: usize,
    elements: Vec<Vec<usize>>,
    lengths: Vec<usize>,
}

impl WeylSn {
    pub fn new(n: usize) -> Self {
        let elements = perm::all_perms(n);
        let lengths = elements.iter().map(|w| perm::length(w)).collect();
        WeylSn { n, elements, lengths }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    /// `Σ_w q^{ℓ(w)}`.
    pub fn length_poly(&self) -> IntPolynomial {
        self.lengths.iter().map(|&l| IntPolynomial::monomial(l)).sum()
    }
}

/// Composition `(k_1, ..., k_r)` of `n`; the parabolic is block upper
/// triangular with diagonal blocks of these sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ParabolicType {
    composition: Vec<usize>,
}

impl ParabolicType {
    pub fn new(composition: Vec<usize>) -> Result<Self> {
        if composition.is_empty() || composition.contains(&0) {
            return Err(Error::InvalidComposition(format!("{composition:?} must consist of positive parts")));
        }
        Ok(ParabolicType { composition })
    }

    /// `(k, n - k)`.
    pub fn maximal(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidComposition(format!("need 0 < k < n, got k={k}, n={n}")));
        }
        Self::new(vec![k, n - k])
    }

    pub fn composition(&self) -> &[usize] {
        &self.composition
    }

    pub fn n(&self) -> usize {
        self.composition.iter().sum()
    }

    /// Dimension of the unipotent radical, `(n² - Σ k_i²) / 2`.
    pub fn dim_u(&self) -> usize {
        let n = self.n();
        (n * n - self.composition.iter().map(|k| k * k).sum::<usize>()) / 2
    }

    /// Block index of each letter.
    fn blocks(&self) -> Vec<usize> {
        self.composition.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat_n(b, k)).collect()
    }

    /// Whether `w` preserves every block.
    pub fn contains(&self, w: &[usize]) -> bool {
        let blocks = self.blocks();
        w.len() == blocks.len() && w.iter().enumerate().all(|(i, &wi)| blocks[i] == blocks[wi])
    }

    /// `W_P = Π S_{k_i}` inside `S_n`, lexicographic.
    pub fn weyl_elements(&self) -> Vec<Vec<usize>> {
        perm::all_perms(self.n()).into_iter().filter(|w| self.contains(w)).collect()
    }

    /// `k` for a maximal type `(k, n - k)`.
    pub fn maximal_k(&self) -> Result<usize> {
        match self.composition[..] {
            [k, _] => Ok(k),
            _ => Err(Error::TypeNotMaximal(self.composition.clone())),
        }
    }
}

/// A Schubert cell of `Gr(k, n)`: a 1-based sorted subset with
/// `dim = Σ_i (a_i - i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SchubertIndex {
    pub subset: Vec<usize>,
    pub dim: usize,
}

impl SchubertIndex {
    pub fn new(subset: Vec<usize>) -> Self {
        let dim = subset.iter().enumerate().map(|(i, &a)| a - (i + 1)).sum();
        SchubertIndex { subset, dim }
    }

    /// All `k`-subsets of `{1, ..., n}` in lexicographic order.
    pub fn all(k: usize, n: usize) -> Vec<SchubertIndex> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=k).collect();
        if k > n {
            return out;
        }
        loop {
            out.push(SchubertIndex::new(cur.clone()));
            let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i + 1) else {
                return out;
            };
            cur[i] += 1;
            for j in i + 1..k {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }

    pub fn label(&self) -> Label {
        Label::seq(self.subset.iter().copied())
    }
}

/// Model over a permutation group on `n` letters with `θ` the permutation
/// matrices and Bruhat cells `G_m^n × A^{n(n-1)/2 + ℓ(w)}`.
fn weyl_model(perms: Vec<Vec<usize>>, n: usize) -> Result<GroupModel> {
    let base = n * n.saturating_sub(1) / 2;
    let cells = perms
        .iter()
        .map(|w| Cell { dim: n, affine: base + perm::length(w), label: perm::label(w) })
        .collect();
    let w = FiniteGroupTable::permutation_group(perms);
    let theta = ThetaRep::permutation(&w, n)?;
    let law = ExtensionLaw::split_unchecked(w, theta);
    Ok(GroupModel::assemble(law, Torification::new(cells)?, ModelKind::Strong))
}

/// `GL(n)` with Weyl group `S_n` and split torus `G_m^n`.
pub fn gl_model(n: usize) -> Result<GroupModel> {
    scale::check("gl_model n", n as u64, MAX_GL as u64)?;
    weyl_model(perm::all_perms(n), n)
}

/// Parabolic subgroup of type `t`, with Weyl group `Π S_{k_i}`.
pub fn parabolic_model(t: &ParabolicType) -> Result<GroupModel> {
    scale::check("parabolic_model n", t.n() as u64, MAX_GL as u64)?;
    weyl_model(t.weyl_elements(), t.n())
}

/// `Gr(k, n)` with its Schubert cells `A^{dim}` refined into subset tori.
pub fn grassmannian_model(k: usize, n: usize) -> Result<F1Scheme> {
    scale::check("grassmannian_model n", n as u64, MAX_GRASSMANNIAN as u64)?;
    if k > n {
        return Err(Error::InvalidComposition(format!("k={k} exceeds n={n}")));
    }
    let cells = SchubertIndex::all(k, n).into_iter().map(|s| Cell { dim: 0, affine: s.dim, label: s.label() }).collect();
    Ok(from_torification(Torification::new(cells)?))
}

/// Indices in `g`'s Weyl table of the components of `p`, checking that `p`
/// sits inside `g` as a subgroup with the same torus.
fn embed(p: &GroupModel, g: &GroupModel) -> Result<Vec<usize>> {
    if p.r() != g.r() {
        return Err(Error::NotASubgroup);
    }
    let idx: Vec<usize> = p.w().elements().iter().map(|l| g.w().index_of(l)).collect::<Option<_>>().ok_or(Error::NotASubgroup)?;
    let n = p.w().order();
    for a in 0..n {
        if p.law.theta.matrices[a] != g.law.theta.matrices[idx[a]] {
            return Err(Error::NotASubgroup);
        }
        for b in 0..n {
            if idx[p.w().mul(a, b)] != g.w().mul(idx[a], idx[b]) {
                return Err(Error::NotASubgroup);
            }
        }
    }
    Ok(idx)
}

/// `λ: P × G -> G`, left multiplication.
pub fn lambda_action(p: &GroupModel, g: &GroupModel) -> Result<WeakMorphism> {
    let idx = embed(p, g)?;
    Ok(g.mu_on(&p.rank_scheme, &idx))
}

/// Recovers the type of a parabolic model from the orbits of its Weyl
/// group on letters.
pub fn parabolic_type_of(p: &GroupModel) -> Result<ParabolicType> {
    let perms: Vec<Vec<usize>> =
        p.w().elements().iter().map(perm::from_label).collect::<Option<_>>().ok_or(Error::NotASubgroup)?;
    let n = p.r();
    if perms.iter().any(|w| w.len() != n) {
        return Err(Error::NotASubgroup);
    }
    let mut composition = Vec::new();
    let mut start = 0;
    while start < n {
        // smallest interval closed under all permutations
        let mut end = start + 1;
        while let Some(e) = perms.iter().flat_map(|w| w[start..end].iter()).map(|&x| x + 1).max().filter(|&e| e > end) {
            end = e;
        }
        composition.push(end - start);
        start = end;
    }
    let t = ParabolicType::new(composition)?;
    let expected: usize = t.composition.iter().map(|&k| (1..=k).product::<usize>()).product();
    if perms.len() != expected || !perms.iter().all(|w| t.contains(w)) {
        return Err(Error::NotASubgroup);
    }
    Ok(t)
}

/// `W_P w ↦ w⁻¹({1, ..., k})` on `S_n`, with its verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetBijection {
    pub k: usize,
    pub n: usize,
    /// Targets in lexicographic order.
    pub subsets: Vec<SchubertIndex>,
    /// For each element of `S_n` (lexicographic), the index of its subset.
    pub image: Vec<usize>,
    pub report: CheckReport,
}

fn base_subset(w: &[usize], k: usize) -> Vec<usize> {
    let inv = perm::inverse(w);
    perm::image(&inv, &(0..k).collect::<Vec<_>>()).into_iter().map(|x| x + 1).collect()
}

pub fn coset_subset_bijection(k: usize, n: usize) -> Result<CosetBijection> {
    scale::check("coset_subset_bijection n", n as u64, MAX_GRASSMANNIAN as u64)?;
    if k > n {
        return Err(Error::InvalidComposition(format!("k={k} exceeds n={n}")));
    }
    let subsets = SchubertIndex::all(k, n);
    let pos = |s: &[usize]| subsets.iter().position(|x| x.subset == s).expect("k-subset");
    let perms = perm::all_perms(n);
    let image: Vec<usize> = perms.iter().map(|w| pos(&base_subset(w, k))).collect();
    let wp: Vec<Vec<usize>> = perms.iter().filter(|w| w[..k].iter().all(|&x| x < k)).cloned().collect();
    let index = |w: &[usize]| perms.binary_search_by(|x| x.as_slice().cmp(w)).expect("permutation");

    let mut report = CheckReport::new("coset_bijection");
    // well defined on right cosets
    for (i, w) in perms.iter().enumerate() {
        for p in &wp {
            let j = index(&perm::compose(p, w));
            report.record(image[j] == image[i], || {
                json!({"element": perm::label(w), "coset_rep": perm::label(&perms[j]), "error": "not constant on coset"})
            });
        }
    }
    // every fiber is exactly one coset
    for (s, subset) in subsets.iter().enumerate() {
        let fiber: Vec<usize> = (0..perms.len()).filter(|&i| image[i] == s).collect();
        let ok = match fiber.first() {
            None => false,
            Some(&rep) => {
                let mut coset: Vec<usize> = wp.iter().map(|p| index(&perm::compose(p, &perms[rep]))).collect();
                coset.sort_unstable();
                coset == fiber
            }
        };
        report.record(ok, || json!({"subset": subset.label(), "fiber_size": fiber.len(), "error": "fiber is not a coset"}));
    }
    Ok(CosetBijection { k, n, subsets, image, report })
}

/// Equivariance table of `τ` and, for small `n`, its action diagrams.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauReport {
    pub pass: bool,
    pub equivariance: CheckReport,
    /// `None` when `n` exceeds [`MAX_TAU_ACTION`].
    pub action: Option<CheckReport>,
}

/// For all `σ ∈ S_n` and all cosets `W_P w`, the coset `W_P w σ⁻¹` is sent
/// to `σ(A)` where `A` is the subset of `W_P w`.
pub fn tau_check(k: usize, n: usize) -> Result<TauReport> {
    let bij = coset_subset_bijection(k, n)?;
    let perms = perm::all_perms(n);
    let reps: Vec<usize> = (0..bij.subsets.len()).map(|s| bij.image.iter().position(|&x| x == s).expect("surjective")).collect();
    let mut equivariance = CheckReport::new("tau");
    for sigma in &perms {
        let sigma_inv = perm::inverse(sigma);
        for (s, &rep) in reps.iter().enumerate() {
            let moved = base_subset(&perm::compose(&perms[rep], &sigma_inv), k);
            let a: Vec<usize> = bij.subsets[s].subset.iter().map(|&x| x - 1).collect();
            let direct: Vec<usize> = perm::image(sigma, &a).into_iter().map(|x| x + 1).collect();
            equivariance.record(moved == direct, || {
                json!({"sigma": perm::label(sigma), "subset": bij.subsets[s].label(), "coset_image": moved, "direct_image": direct})
            });
        }
    }
    let action = if n <= MAX_TAU_ACTION {
        let g = constant_group(FiniteGroupTable::symmetric(n));
        let y = RankScheme::discrete(bij.subsets.iter().map(SchubertIndex::label));
        let mut map = Vec::with_capacity(perms.len() * reps.len());
        for sigma in &perms {
            for s in &bij.subsets {
                let a: Vec<usize> = s.subset.iter().map(|&x| x - 1).collect();
                let img: Vec<usize> = perm::image(sigma, &a).into_iter().map(|x| x + 1).collect();
                map.push(bij.subsets.iter().position(|x| x.subset == img).expect("k-subset"));
            }
        }
        Some(check_action(&g, &y, &zero_stalk_morphism(g.rank_scheme.product(&y), y.clone(), map))?)
    } else {
        None
    };
    let pass = equivariance.pass && action.as_ref().is_none_or(|a| a.pass);
    Ok(TauReport { pass, equivariance, action })
}

/// The morphism with the given component map and all stalk data zero.
fn zero_stalk_morphism(source: RankScheme, target: RankScheme, map: Vec<usize>) -> WeakMorphism {
    let comaps = source
        .components()
        .iter()
        .zip(&map)
        .map(|(c, &y)| GroupHom::zero(target.stalk(y), &c.stalk))
        .collect::<Vec<_>>();
    let exponents = comaps.iter().map(|h| h.images().clone()).collect();
    let signs = comaps.iter().map(|h| vec![1; h.images().cols()]).collect();
    WeakMorphism {
        z: MonomialMap { component_map: map.clone(), exponents, signs },
        source,
        target,
        mo_component_map: map,
        mo_comaps: comaps,
    }
}

/// `Q = Gr(k, n)` with the projection `G -> Q` on rank parts.
#[derive(Debug, Clone)]
pub struct QuotientModel {
    pub parabolic: ParabolicType,
    pub scheme: F1Scheme,
    pub proj: WeakMorphism,
    pub bijection: CosetBijection,
}

/// Builds the quotient of `λ: P × G -> G` for a maximal parabolic `P`.
pub fn quotient_model(p: &GroupModel, g: &GroupModel) -> Result<QuotientModel> {
    let t = parabolic_type_of(p)?;
    embed(p, g)?;
    if g.w().order() != (1..=t.n()).product::<usize>() {
        return Err(Error::NotASubgroup);
    }
    let k = t.maximal_k()?;
    let n = t.n();
    let scheme = grassmannian_model(k, n)?;
    let bijection = coset_subset_bijection(k, n)?;
    let target = rank_part(&scheme);
    let map = g
        .w()
        .elements()
        .iter()
        .map(|l| {
            let w = perm::from_label(l).expect("permutation label");
            let idx = perm::all_perms_index(&w);
            target.position(&bijection.subsets[bijection.image[idx]].label()).expect("subset component")
        })
        .collect();
    let proj = zero_stalk_morphism(g.rank_scheme.clone(), target, map);
    Ok(QuotientModel { parabolic: t, scheme, proj, bijection })
}

fn agree_at(a: &WeakMorphism, b: &WeakMorphism, i: usize) -> bool {
    a.mo_component_map[i] == b.mo_component_map[i]
        && a.mo_comaps[i] == b.mo_comaps[i]
        && a.z.component_map[i] == b.z.component_map[i]
        && a.z.exponents[i] == b.z.exponents[i]
        && a.z.signs[i] == b.z.signs[i]
}

/// Whether `f∘λ = f∘pr₂`, one check per component of `P × G`.
fn invariance(f: &WeakMorphism, lambda: &WeakMorphism, pr2: &WeakMorphism, rep: &mut CheckReport, suite_label: &str) -> Result<bool> {
    let a = lambda.then(f)?;
    let b = pr2.then(f)?;
    let mut all = true;
    for i in 0..a.source.len() {
        let ok = agree_at(&a, &b, i);
        all &= ok;
        rep.record(ok, || json!({"diagram": suite_label, "component": a.source.components()[i].label}));
    }
    Ok(all)
}

/// Results of the quotient suite for `(k, n - k)` inside `GL(n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientReport {
    pub k: usize,
    pub n: usize,
    pub pass: bool,
    pub components: usize,
    pub lambda_action: CheckReport,
    pub lambda_strong: CheckReport,
    pub square: CheckReport,
    pub bijection: CheckReport,
    pub universality: CheckReport,
    pub tau: TauReport,
}

/// Test targets for the universal property: constant schemes and rank
/// schemes with stalks `Z^m`, `m ≤ n`.
fn test_targets(n: usize) -> Vec<RankScheme> {
    let names = |s: usize| (0..s).map(|i| Label::name(format!("y{i}"))).collect::<Vec<_>>();
    let mut out: Vec<RankScheme> = (1..=3).map(|s| RankScheme::discrete(names(s))).collect();
    out.extend((0..=n).map(|m| RankScheme::free(names(2), m)));
    out
}

/// Component maps `W -> Y` to test: maps through the subsets (invariant)
/// and maps that ignore the coset structure.
fn test_component_maps(g: &GroupModel, q: &QuotientModel, y: usize) -> Vec<Vec<usize>> {
    let sub = &q.proj.mo_component_map;
    let nq = q.bijection.subsets.len();
    let mut out = Vec::new();
    if y.checked_pow(nq as u32).is_some_and(|c| c <= 64) {
        for code in 0..y.pow(nq as u32) {
            let h: Vec<usize> = (0..nq).map(|s| code / y.pow(s as u32) % y).collect();
            out.push(sub.iter().map(|&s| h[s]).collect());
        }
    } else {
        for shift in 0..y {
            out.push(sub.iter().map(|&s| (s + shift) % y).collect());
        }
    }
    let perms: Vec<Vec<usize>> = g.w().elements().iter().map(|l| perm::from_label(l).expect("permutation")).collect();
    out.push((0..perms.len()).map(|i| i % y).collect());
    out.push(perms.iter().map(|w| perm::length(w) % y).collect());
    out.push(perms.iter().map(|w| w.last().map_or(0, |&x| x % y)).collect());
    out
}

/// Stalk comaps `Z^m -> Z^n`: zero and the coordinate inclusion.
fn test_comaps(m: usize, n: usize) -> Vec<IntMatrix> {
    let mut out = vec![IntMatrix::zeros(n, m)];
    if m > 0 {
        out.push(IntMatrix::from_fn(n, m, |i, j| i64::from(i == j)));
    }
    out
}

fn check_universality(g: &GroupModel, q: &QuotientModel, lambda: &WeakMorphism, pr2: &WeakMorphism) -> Result<CheckReport> {
    let mut rep = CheckReport::new("universality");
    let n = g.r();
    let qrk = q.proj.target.clone();
    for y in test_targets(n) {
        let m = y.stalk(0).num_generators();
        for map in test_component_maps(g, q, y.len()) {
            for e in test_comaps(m, n) {
                let f = WeakMorphism {
                    source: g.rank_scheme.clone(),
                    target: y.clone(),
                    mo_component_map: map.clone(),
                    mo_comaps: map.iter().map(|&j| GroupHom::new(y.stalk(j).clone(), FgAbelianGroup::free(n), e.clone())).collect(),
                    z: MonomialMap {
                        component_map: map.clone(),
                        exponents: vec![e.clone(); map.len()],
                        signs: vec![vec![1; m]; map.len()],
                    },
                };
                let mut scratch = CheckReport::new("invariance");
                let invariant = invariance(&f, lambda, pr2, &mut scratch, "invariance")?;
                // the factorization through Q is forced on components; stalks of Q are trivial
                let mut qmap = vec![None; qrk.len()];
                let mut consistent = true;
                for (w, &s) in q.proj.mo_component_map.iter().enumerate() {
                    match qmap[s] {
                        None => qmap[s] = Some(map[w]),
                        Some(prev) => consistent &= prev == map[w],
                    }
                }
                let factors = consistent && qmap.iter().all(Option::is_some) && {
                    let h = zero_stalk_morphism(qrk.clone(), y.clone(), qmap.iter().map(|x| x.expect("filled")).collect());
                    let comp = q.proj.then(&h)?;
                    (0..f.source.len()).all(|i| agree_at(&comp, &f, i))
                };
                rep.record(invariant == factors, || {
                    json!({"target": y.labels(), "stalk_rank": m, "component_map": map, "invariant": invariant, "factors": factors})
                });
            }
        }
    }
    Ok(rep)
}

/// Runs the full quotient suite: λ as a strong action, the quotient square
/// on all `|W_P|·|W|` pairs, the coset bijection, universality against the
/// generated target family, and the τ checks.
pub fn check_quotient(k: usize, n: usize) -> Result<QuotientReport> {
    let t = ParabolicType::maximal(k, n)?;
    let p = parabolic_model(&t)?;
    let g = gl_model(n)?;
    let lambda = lambda_action(&p, &g)?;
    let lambda_action = check_action(&p, &g.rank_scheme, &lambda)?;
    let mut lambda_strong = check_strong(&lambda.mo_part())?;
    let weak = check_weak(&lambda)?;
    lambda_strong.record(weak.weak.pass && weak.strong, || json!({"error": "λ is not the base extension of its Mo side"}));

    let q = quotient_model(&p, &g)?;
    let pr2 = p.projection_action(&g.rank_scheme);
    let mut square = CheckReport::new("quotient_square");
    invariance(&q.proj, &lambda, &pr2, &mut square, "quotient_square")?;
    let universality = check_universality(&g, &q, &lambda, &pr2)?;
    let tau = tau_check(k, n)?;
    let bijection = q.bijection.report.clone();
    let pass = lambda_action.pass && lambda_strong.pass && square.pass && bijection.pass && universality.pass && tau.pass;
    Ok(QuotientReport {
        k,
        n,
        pass,
        components: q.bijection.subsets.len(),
        lambda_action,
        lambda_strong,
        square,
        bijection,
        universality,
        tau,
    })
}
