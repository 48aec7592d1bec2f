//! Group objects in the category of pure-rank F₁-schemes.
//!
//! A model is described by an extension law: a finite group `W` of
//! components, a torus rank `r`, a representation `θ: W -> GL_r(Z)` and a
//! `{±1}^r`-valued 2-cocycle `c`. On rank parts the Z-side multiplication is
//!
//! ```text
//! (t, w) · (t', w') = (t · θ_w(t') · c(w, w'), w w')
//! ```
//!
//! and the Mo side carries the same formula without the cocycle when `c` is
//! trivial (strong model) or the plain product law otherwise (weak model).
//! All checkers evaluate laws on generic points: a point of component `w` is
//! a monomial map from a free torus of test variables, so two composites
//! agree as morphisms exactly when their exponent matrices and signs agree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::matrix::IntMatrix;
use crate::monoid::{FgAbelianGroup, GroupHom};
use crate::perm;
use crate::report::CheckReport;
use crate::scheme::{Cell, MonomialMap, RankScheme, Torification, WeakMorphism};

/// Multiplication table of a finite group on canonical labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TableFile", into = "TableFile")]
pub struct FiniteGroupTable {
    elements: Vec<Label>,
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    elements: Vec<Label>,
    mult: Vec<Vec<usize>>,
}

impl TryFrom<TableFile> for FiniteGroupTable {
    type Error = Error;

    fn try_from(f: TableFile) -> Result<Self> {
        FiniteGroupTable::new(f.elements, f.mult)
    }
}

impl From<FiniteGroupTable> for TableFile {
    fn from(t: FiniteGroupTable) -> Self {
        TableFile { elements: t.elements, mult: t.mult }
    }
}

impl FiniteGroupTable {
    /// Validates closure, identity, inverses and associativity exhaustively.
    pub fn new(elements: Vec<Label>, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty group".into()));
        }
        for i in 0..n {
            if elements[..i].contains(&elements[i]) {
                return Err(Error::InvalidTable(format!("duplicate element {}", elements[i])));
            }
        }
        if mult.len() != n || mult.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidTable(format!("multiplication table must be {n}x{n} with entries < {n}")));
        }
        let table = Self::from_table(elements, mult)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table.mul(table.mul(a, b), c) != table.mul(a, table.mul(b, c)) {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({}, {}, {})",
                            table.elements[a], table.elements[b], table.elements[c]
                        )));
                    }
                }
            }
        }
        Ok(table)
    }

    /// Finds identity and inverses but trusts associativity; used for
    /// tables built from an associative operation.
    fn from_table(elements: Vec<Label>, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e][x] == x && mult[x][e] == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| mult[a][b] == identity && mult[b][a] == identity)
                    .ok_or_else(|| Error::InvalidTable(format!("{} has no inverse", elements[a])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroupTable { elements, mult, identity, inverses })
    }

    fn from_op(elements: Vec<Label>, op: impl Fn(usize, usize) -> usize) -> Self {
        let n = elements.len();
        let mult = (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect();
        Self::from_table(elements, mult).expect("operation defines a group")
    }

    pub fn trivial() -> Self {
        Self::trivial_labeled(Label::name("e"))
    }

    pub fn trivial_labeled(label: Label) -> Self {
        FiniteGroupTable { elements: vec![label], mult: vec![vec![0]], identity: 0, inverses: vec![0] }
    }

    /// `Z/n` with elements labeled `0, ..., n-1`.
    pub fn cyclic(n: usize) -> Self {
        Self::from_op((0..n).map(|i| Label::name(i.to_string())).collect(), |a, b| (a + b) % n)
    }

    /// `S_n` on one-line labels, lexicographic order, `(w·v)(i) = w(v(i))`.
    pub fn symmetric(n: usize) -> Self {
        Self::permutation_group(perm::all_perms(n))
    }

    /// Group of the given permutations, which must be closed under
    /// composition.
    pub fn permutation_group(perms: Vec<Vec<usize>>) -> Self {
        let index: BTreeMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let labels = perms.iter().map(|p| perm::label(p)).collect();
        Self::from_op(labels, |a, b| index[&perm::compose(&perms[a], &perms[b])])
    }

    pub fn direct_product(&self, other: &Self) -> Self {
        let m = other.order();
        let labels = self
            .elements
            .iter()
            .flat_map(|a| other.elements.iter().map(move |b| Label::pair(a.clone(), b.clone())))
            .collect();
        Self::from_op(labels, |x, y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Label] {
        &self.elements
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.elements[i]
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.elements.iter().position(|x| x == l)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Whether `relabel` maps `self` onto `other` as a group isomorphism.
    pub fn isomorphic_via(&self, other: &Self, relabel: impl Fn(&Label) -> Label) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let map: Option<Vec<usize>> = self.elements.iter().map(|l| other.index_of(&relabel(l))).collect();
        let Some(map) = map else {
            return false;
        };
        let mut hit = vec![false; other.order()];
        for &j in &map {
            if std::mem::replace(&mut hit[j], true) {
                return false;
            }
        }
        (0..self.order()).all(|a| (0..self.order()).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }

    /// Order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exhaustive associativity test (cubic in the order).
    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }
}

/// `θ: W -> GL_r(Z)`, one matrix per element of `W` in table order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThetaRep {
    pub r: usize,
    pub matrices: Vec<IntMatrix>,
}

impl ThetaRep {
    pub fn trivial(w: &FiniteGroupTable, r: usize) -> Self {
        ThetaRep { r, matrices: vec![IntMatrix::identity(r); w.order()] }
    }

    /// Permutation matrices of a permutation group on `r` letters.
    pub fn permutation(w: &FiniteGroupTable, r: usize) -> Result<Self> {
        let matrices = w
            .elements()
            .iter()
            .map(|l| {
                perm::from_label(l)
                    .filter(|p| p.len() == r)
                    .map(|p| IntMatrix::permutation(&p))
                    .ok_or_else(|| Error::InvalidTable(format!("{l} is not a permutation of {r} letters")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ThetaRep { r, matrices })
    }

    /// `θ_w` applied to a sign vector in additive form (`1` means `-1`).
    fn act_on_signs(&self, w: usize, x: &[u8]) -> Vec<u8> {
        let m = &self.matrices[w];
        (0..self.r)
            .map(|j| ((0..self.r).map(|k| m[(j, k)].rem_euclid(2) as u8 * x[k]).sum::<u8>()) % 2)
            .collect()
    }
}

/// Extension data `1 -> T(Z) -> N(Z) -> W -> 1` with `T(Z) = {±1}^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtensionLaw {
    pub w: FiniteGroupTable,
    pub theta: ThetaRep,
    /// `c(a, b)` at offset `(a * |W| + b) * r`, in additive form (`1` means
    /// `-1`).
    cocycle: Vec<u8>,
}

fn to_bits(signs: &[i8]) -> Result<Vec<u8>> {
    signs
        .iter()
        .map(|&s| match s {
            1 => Ok(0),
            -1 => Ok(1),
            _ => Err(Error::CocycleInvalid(format!("cocycle entry {s} is not ±1"))),
        })
        .collect()
}

fn to_signs(bits: &[u8]) -> Vec<i8> {
    bits.iter().map(|&b| if b == 0 { 1 } else { -1 }).collect()
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

impl ExtensionLaw {
    /// Validates θ (shape, unimodularity, homomorphism) and the normalized
    /// 2-cocycle identity
    /// `θ_a(c(b, c)) · c(a, bc) = c(a, b) · c(ab, c)`.
    pub fn new(w: FiniteGroupTable, theta: ThetaRep, cocycle: Vec<Vec<i8>>) -> Result<Self> {
        let law = Self::unchecked(w, theta, cocycle)?;
        law.validate()?;
        Ok(law)
    }

    /// Split extension with trivial cocycle.
    pub fn split(w: FiniteGroupTable, theta: ThetaRep) -> Result<Self> {
        let law = Self::split_unchecked(w, theta);
        law.validate()?;
        Ok(law)
    }

    /// Split extension for a θ known to be a representation.
    pub(crate) fn split_unchecked(w: FiniteGroupTable, theta: ThetaRep) -> Self {
        let n = w.order();
        let cocycle = vec![0; n * n * theta.r];
        ExtensionLaw { w, theta, cocycle }
    }

    /// Only checks shapes; θ and the cocycle identity are left to the
    /// axiom checker.
    pub fn unchecked(w: FiniteGroupTable, theta: ThetaRep, cocycle: Vec<Vec<i8>>) -> Result<Self> {
        let n = w.order();
        let r = theta.r;
        if theta.matrices.len() != n || theta.matrices.iter().any(|m| m.shape() != (r, r)) {
            return Err(Error::ShapeMismatch(format!("θ needs {n} matrices of shape {r}x{r}")));
        }
        if cocycle.len() != n * n || cocycle.iter().any(|c| c.len() != r) {
            return Err(Error::ShapeMismatch(format!("cocycle needs {} sign vectors of length {r}", n * n)));
        }
        let cocycle = cocycle.iter().map(|c| to_bits(c)).collect::<Result<Vec<_>>>()?.concat();
        Ok(ExtensionLaw { w, theta, cocycle })
    }

    fn validate(&self) -> Result<()> {
        let w = &self.w;
        let n = w.order();
        for (a, m) in self.theta.matrices.iter().enumerate() {
            if m.det().abs() != 1 {
                return Err(Error::ThetaNotHomomorphism(w.label(a).to_string(), "det ≠ ±1".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if &self.theta.matrices[a] * &self.theta.matrices[b] != self.theta.matrices[w.mul(a, b)] {
                    return Err(Error::ThetaNotHomomorphism(w.label(a).to_string(), w.label(b).to_string()));
                }
            }
        }
        let e = w.identity();
        for a in 0..n {
            if self.c(e, a).iter().any(|&x| x != 0) || self.c(a, e).iter().any(|&x| x != 0) {
                return Err(Error::CocycleInvalid(format!("c is not normalized at {}", w.label(a))));
            }
        }
        if self.cocycle_is_trivial() {
            return Ok(());
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = xor(&self.theta.act_on_signs(a, self.c(b, c)), self.c(a, w.mul(b, c)));
                    let rhs = xor(self.c(a, b), self.c(w.mul(a, b), c));
                    if lhs != rhs {
                        return Err(Error::CocycleInvalid(format!(
                            "2-cocycle identity fails at ({}, {}, {})",
                            w.label(a),
                            w.label(b),
                            w.label(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.theta.r
    }

    fn c(&self, a: usize, b: usize) -> &[u8] {
        let r = self.r();
        &self.cocycle[(a * self.w.order() + b) * r..][..r]
    }

    /// `c(a, b)` as a `±1` vector.
    pub fn cocycle(&self, a: usize, b: usize) -> Vec<i8> {
        to_signs(self.c(a, b))
    }

    pub fn cocycle_is_trivial(&self) -> bool {
        self.cocycle.iter().all(|&x| x == 0)
    }

    /// Componentwise product law on `W × W'` and `T × T'`.
    pub fn product(&self, other: &Self) -> Self {
        let w = self.w.direct_product(&other.w);
        let m = other.w.order();
        let matrices = (0..w.order())
            .map(|i| self.theta.matrices[i / m].block_diag(&other.theta.matrices[i % m]))
            .collect();
        let n = w.order();
        let cocycle = (0..n * n)
            .flat_map(|k| {
                let (x, y) = (k / n, k % n);
                let mut c = self.c(x / m, y / m).to_vec();
                c.extend_from_slice(other.c(x % m, y % m));
                c
            })
            .collect();
        ExtensionLaw { w, theta: ThetaRep { r: self.r() + other.r(), matrices }, cocycle }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Strong,
    Weak,
}

/// Stalk data of one morphism component: `y_j = s_j Π_k t_k^{E_kj}` with
/// the input coordinates of all factors stacked in `E`'s rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LawBlock {
    pub exponents: IntMatrix,
    /// Additive signs, `1` means `-1`.
    pub signs: Vec<u8>,
}

impl LawBlock {
    fn unsigned(exponents: IntMatrix) -> Self {
        let signs = vec![0; exponents.cols()];
        LawBlock { exponents, signs }
    }
}

/// Multiplication and inversion on one side (Mo or Z) of a model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SideLaw {
    /// Exponents of `μ` on components `(a, b)`, indexed by `a` (they do not
    /// depend on `b`).
    pub mult: Vec<IntMatrix>,
    /// Whether `μ` carries the cocycle signs `c(a, b)`.
    pub signed: bool,
    /// Block for `ι` on component `a`.
    pub inverse: Vec<LawBlock>,
}

/// A group object on a pure-rank scheme `(W, Z^r)` together with the
/// torification of the full model (used for counting).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupModel {
    pub law: ExtensionLaw,
    pub rank_scheme: RankScheme,
    pub mo_law: SideLaw,
    pub z_law: SideLaw,
    pub cells: Torification,
    pub kind: ModelKind,
}

/// A point of component `comp` given as a monomial map from a torus of test
/// variables: `t_k = (-1)^{signs_k} Π_v u_v^{exps_vk}`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Point {
    comp: usize,
    exps: IntMatrix,
    signs: Vec<u8>,
}

impl Point {
    /// Coordinates `offset..offset+dim` of `vars` test variables.
    fn generic(comp: usize, vars: usize, offset: usize, dim: usize) -> Self {
        Point {
            comp,
            exps: IntMatrix::from_fn(vars, dim, |v, k| i64::from(v == offset + k)),
            signs: vec![0; dim],
        }
    }

    fn constant(comp: usize, vars: usize, dim: usize) -> Self {
        Point { comp, exps: IntMatrix::zeros(vars, dim), signs: vec![0; dim] }
    }

    fn to_json(&self, labels: &dyn Fn(usize) -> Label) -> Value {
        json!({"component": labels(self.comp), "exponents": self.exps.to_rows(), "signs": to_signs(&self.signs)})
    }
}

/// Applies exponents and signs to the stacked inputs, landing in component
/// `comp`. Without signs, the sign parts of the inputs are ignored as well.
fn apply(exponents: &IntMatrix, signs: Option<&[u8]>, comp: usize, inputs: &[&Point]) -> Point {
    let vars = inputs[0].exps.rows();
    let out = exponents.cols();
    let ignore_signs = signs.is_none();
    let mut exps = IntMatrix::zeros(vars, out);
    let mut signs = signs.map_or_else(|| vec![0; out], <[u8]>::to_vec);
    let mut row = 0;
    for p in inputs {
        let dim = p.exps.cols();
        let a = exponents.row_block(row, row + dim);
        let prod = &p.exps * &a;
        for v in 0..vars {
            for j in 0..out {
                exps[(v, j)] += prod[(v, j)];
            }
        }
        if !ignore_signs {
            for k in 0..dim {
                if p.signs[k] == 1 {
                    for (j, s) in signs.iter_mut().enumerate() {
                        *s ^= a[(k, j)].rem_euclid(2) as u8;
                    }
                }
            }
        }
        row += dim;
    }
    Point { comp, exps, signs }
}

#[derive(Clone, Copy)]
enum Side {
    Mo,
    Z,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Mo => "mo",
            Side::Z => "z",
        }
    }
}

impl GroupModel {
    /// Builds the rank scheme and both side laws from `law` without
    /// validating it. `kind` selects the Mo-side law: θ-twisted (strong) or
    /// plain product (weak).
    pub fn assemble(law: ExtensionLaw, cells: Torification, kind: ModelKind) -> Self {
        let w = &law.w;
        let n = w.order();
        let r = law.r();
        let id = IntMatrix::identity(r);
        let z_mult: Vec<IntMatrix> = (0..n).map(|a| id.vstack(&law.theta.matrices[a].transpose())).collect();
        let mo_mult = match kind {
            ModelKind::Strong => z_mult.clone(),
            ModelKind::Weak => vec![id.vstack(&id); n],
        };
        let mut z_inv = Vec::with_capacity(n);
        let mut mo_inv = Vec::with_capacity(n);
        for a in 0..n {
            let ai = w.inverse(a);
            let m_inv = &law.theta.matrices[ai];
            let exps = m_inv.transpose().neg();
            z_inv.push(LawBlock { exponents: exps.clone(), signs: law.theta.act_on_signs(ai, law.c(a, ai)) });
            mo_inv.push(LawBlock::unsigned(match kind {
                ModelKind::Strong => exps,
                ModelKind::Weak => id.neg(),
            }));
        }
        GroupModel {
            rank_scheme: RankScheme::free(w.elements().iter().cloned(), r),
            mo_law: SideLaw { mult: mo_mult, signed: false, inverse: mo_inv },
            z_law: SideLaw { mult: z_mult, signed: true, inverse: z_inv },
            law,
            cells,
            kind,
        }
    }

    pub fn w(&self) -> &FiniteGroupTable {
        &self.law.w
    }

    pub fn r(&self) -> usize {
        self.law.r()
    }

    fn side(&self, side: Side) -> &SideLaw {
        match side {
            Side::Mo => &self.mo_law,
            Side::Z => &self.z_law,
        }
    }

    fn mul_point(&self, side: Side, a: &Point, b: &Point) -> Point {
        let law = self.side(side);
        let signs = law.signed.then(|| self.law.c(a.comp, b.comp));
        apply(&law.mult[a.comp], signs, self.w().mul(a.comp, b.comp), &[a, b])
    }

    fn inv_point(&self, side: Side, a: &Point) -> Point {
        let block = &self.side(side).inverse[a.comp];
        let signs = self.side(side).signed.then_some(&block.signs[..]);
        apply(&block.exponents, signs, self.w().inverse(a.comp), &[a])
    }

    /// `μ: G × G -> G` on rank parts.
    pub fn mu(&self) -> WeakMorphism {
        let all: Vec<usize> = (0..self.w().order()).collect();
        self.mu_on(&self.rank_scheme, &all)
    }

    /// `μ` restricted to `S × G -> G`, where component `i` of `s` is the
    /// component `left[i]` of `G` with the same stalk.
    pub fn mu_on(&self, s: &RankScheme, left: &[usize]) -> WeakMorphism {
        let n = self.w().order();
        let r = self.r();
        let zr = FgAbelianGroup::free(r);
        let z2r = FgAbelianGroup::free(2 * r);
        let pairs = || left.iter().flat_map(|&a| (0..n).map(move |b| (a, b)));
        let map: Vec<usize> = pairs().map(|(a, b)| self.w().mul(a, b)).collect();
        WeakMorphism {
            source: s.product(&self.rank_scheme),
            target: self.rank_scheme.clone(),
            mo_comaps: pairs()
                .map(|(a, _)| GroupHom::new(zr.clone(), z2r.clone(), self.mo_law.mult[a].clone()))
                .collect(),
            z: MonomialMap {
                component_map: map.clone(),
                exponents: pairs().map(|(a, _)| self.z_law.mult[a].clone()).collect(),
                signs: pairs().map(|(a, b)| to_signs(self.law.c(a, b))).collect(),
            },
            mo_component_map: map,
        }
    }

    /// Projection `G × Y -> Y` as an action on `y` (free stalks).
    pub fn projection_action(&self, y: &RankScheme) -> WeakMorphism {
        let n = self.w().order();
        let r = self.r();
        let source = self.rank_scheme.product(y);
        let mut comaps = Vec::new();
        let mut exps = Vec::new();
        let mut map = Vec::new();
        for _ in 0..n {
            for (j, c) in y.components().iter().enumerate() {
                let d = c.stalk.num_generators();
                let e = IntMatrix::zeros(r, d).vstack(&IntMatrix::identity(d));
                comaps.push(GroupHom::new(c.stalk.clone(), FgAbelianGroup::free(r).direct_sum(&c.stalk), e.clone()));
                exps.push(e);
                map.push(j);
            }
        }
        WeakMorphism {
            source,
            target: y.clone(),
            mo_component_map: map.clone(),
            mo_comaps: comaps,
            z: MonomialMap {
                component_map: map,
                signs: exps.iter().map(|e| vec![1; e.cols()]).collect(),
                exponents: exps,
            },
        }
    }

    fn labels(&self) -> impl Fn(usize) -> Label + '_ {
        move |i| self.w().label(i).clone()
    }
}

/// The constant group object `W_F1 = ⊔_W ∗`.
pub fn constant_group(w: FiniteGroupTable) -> GroupModel {
    let cells = w.elements().iter().map(|l| Cell::torus(0, l.clone())).collect();
    let theta = ThetaRep::trivial(&w, 0);
    let law = ExtensionLaw::split(w, theta).expect("trivial θ and cocycle are valid");
    GroupModel::assemble(law, Torification::new(cells).expect("labels are distinct"), ModelKind::Strong)
}

/// The split torus `G_m^r` with its diagonal comultiplication.
pub fn torus_group(r: usize) -> GroupModel {
    let w = FiniteGroupTable::trivial();
    let theta = ThetaRep::trivial(&w, r);
    let cells = Torification::new(vec![Cell::torus(r, w.label(0).clone())]).expect("one cell");
    let law = ExtensionLaw::split(w, theta).expect("trivial law is valid");
    GroupModel::assemble(law, cells, ModelKind::Strong)
}

/// Model with rank part `(W, Z^r)` for a validated extension law. Each
/// component `w` contributes the cell `G_m^r × A^{d_w}` with its subset
/// refinement, so the `W`-indexed rank-`r` tori are the minimal cells.
pub fn extension_model(law: ExtensionLaw, cell_dims: &[usize]) -> Result<GroupModel> {
    law.validate()?;
    if cell_dims.len() != law.w.order() {
        return Err(Error::ShapeMismatch(format!(
            "{} cell dimensions for {} components",
            cell_dims.len(),
            law.w.order()
        )));
    }
    let r = law.r();
    let cells = law
        .w
        .elements()
        .iter()
        .zip(cell_dims)
        .map(|(l, &d)| Cell { dim: r, affine: d, label: l.clone() })
        .collect();
    let kind = if law.cocycle_is_trivial() { ModelKind::Strong } else { ModelKind::Weak };
    Ok(GroupModel::assemble(law, Torification::new(cells)?, kind))
}

/// A successive extension of additive groups of dimension `n`: one trivial
/// rank component (the unit) and the `2^n` coordinate tori of `A^n`.
pub fn additive_chain_model(n: usize) -> GroupModel {
    let w = FiniteGroupTable::trivial_labeled(Label::unit());
    let law = ExtensionLaw::split(w.clone(), ThetaRep::trivial(&w, 0)).expect("trivial law");
    GroupModel::assemble(law, Torification::affine_space(n), ModelKind::Strong)
}

/// Direct product of two models.
pub fn product_model(a: &GroupModel, b: &GroupModel) -> GroupModel {
    let kind = if a.kind == ModelKind::Strong && b.kind == ModelKind::Strong {
        ModelKind::Strong
    } else {
        ModelKind::Weak
    };
    GroupModel::assemble(a.law.product(&b.law), a.cells.product(&b.cells), kind)
}

/// Exhaustively checks associativity, left/right unit and left/right
/// inverse on both sides of the model.
pub fn check_group_axioms(g: &GroupModel) -> CheckReport {
    let mut report = CheckReport::new("group");
    for side in [Side::Mo, Side::Z] {
        report.absorb(check_side(g, side));
    }
    report
}

fn check_side(g: &GroupModel, side: Side) -> CheckReport {
    let mut rep = CheckReport::new("group");
    let w = g.w();
    let n = w.order();
    let r = g.r();
    let e = w.identity();
    let labels = g.labels();
    let mul = |a: &Point, b: &Point| g.mul_point(side, a, b);
    let inv = |a: &Point| g.inv_point(side, a);
    let witness = |diagram: &str, comps: &[usize], lhs: &Point, rhs: &Point| {
        json!({
            "side": side.name(),
            "diagram": diagram,
            "components": comps.iter().map(|&i| labels(i)).collect::<Vec<_>>(),
            "lhs": lhs.to_json(&labels),
            "rhs": rhs.to_json(&labels),
        })
    };

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let pa = Point::generic(a, 3 * r, 0, r);
                let pb = Point::generic(b, 3 * r, r, r);
                let pc = Point::generic(c, 3 * r, 2 * r, r);
                let lhs = mul(&mul(&pa, &pb), &pc);
                let rhs = mul(&pa, &mul(&pb, &pc));
                rep.record(lhs == rhs, || witness("associativity", &[a, b, c], &lhs, &rhs));
            }
        }
    }
    for a in 0..n {
        let x = Point::generic(a, r, 0, r);
        let unit = Point::constant(e, r, r);
        let lu = mul(&unit, &x);
        rep.record(lu == x, || witness("left_unit", &[a], &lu, &x));
        let ru = mul(&x, &unit);
        rep.record(ru == x, || witness("right_unit", &[a], &ru, &x));
        let li = mul(&inv(&x), &x);
        rep.record(li == unit, || witness("left_inverse", &[a], &li, &unit));
        let ri = mul(&x, &inv(&x));
        rep.record(ri == unit, || witness("right_inverse", &[a], &ri, &unit));
    }
    rep
}

fn require_axioms(g: &GroupModel) -> Result<()> {
    let rep = check_group_axioms(g);
    if rep.pass {
        Ok(())
    } else {
        Err(Error::AxiomsFailed(rep.witness.map(|w| w.to_string()).unwrap_or_default()))
    }
}

/// `G(F_1)`: the component labels with the product induced by `μ` on maps
/// from the terminal object. Stalks play no role since every map out of the
/// trivial group is unique.
pub fn f1_points_group(g: &GroupModel) -> Result<FiniteGroupTable> {
    require_axioms(g)?;
    let mu = g.mu();
    let n = g.rank_scheme.len();
    FiniteGroupTable::from_table(
        g.rank_scheme.labels(),
        (0..n).map(|a| (0..n).map(|b| mu.z.component_map[a * n + b]).collect()).collect(),
    )
}

fn sign_label(bits: &[u8]) -> Label {
    Label::Seq(to_signs(bits).into_iter().map(i64::from).collect())
}

/// Enumerates `T(Z) × W = {±1}^r × W` in component-major order.
fn rank_points(g: &GroupModel) -> Vec<(Vec<u8>, usize)> {
    let r = g.r();
    (0..g.w().order())
        .flat_map(|w| (0u64..1 << r).map(move |m| ((0..r).map(|k| (m >> k & 1) as u8).collect(), w)))
        .collect()
}

/// Z-points of the rank part, `G^rk(Z)`, with the group law obtained by
/// evaluating the Z-side multiplication on sign vectors.
pub fn z_rank_group(g: &GroupModel) -> Result<FiniteGroupTable> {
    require_axioms(g)?;
    let r = g.r();
    let pts = rank_points(g);
    let index: BTreeMap<(Vec<u8>, usize), usize> = pts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let as_point = |(x, w): &(Vec<u8>, usize)| Point { comp: *w, exps: IntMatrix::zeros(0, r), signs: x.clone() };
    let labels = pts.iter().map(|(x, w)| Label::pair(sign_label(x), g.w().label(*w).clone())).collect();
    let mult = pts
        .iter()
        .map(|a| {
            pts.iter()
                .map(|b| {
                    let p = g.mul_point(Side::Z, &as_point(a), &as_point(b));
                    index[&(p.signs, p.comp)]
                })
                .collect()
        })
        .collect();
    FiniteGroupTable::from_table(labels, mult)
}

/// Result of the σ-splitting analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaReport {
    pub suite: String,
    pub pass: bool,
    pub checks: usize,
    pub homomorphism: bool,
    pub section: bool,
    pub cosets: bool,
    pub cocycle_trivial: bool,
    pub witness: Option<Value>,
}

impl SigmaReport {
    pub fn to_check_report(&self) -> CheckReport {
        CheckReport { suite: self.suite.clone(), pass: self.pass, checks: self.checks, witness: self.witness.clone() }
    }
}

/// Checks `σ: W -> G^rk(Z)`, `w ↦ (+1, w)`: whether it is a homomorphism,
/// whether it is a section of the projection, and whether `σ(w)` lies in the
/// `T(Z)`-coset of component `w`.
pub fn sigma_check(g: &GroupModel) -> Result<SigmaReport> {
    let w_table = f1_points_group(g)?;
    let z = z_rank_group(g)?;
    let r = g.r();
    let n = w_table.order();
    let plus = vec![0u8; r];
    let sigma: Vec<usize> = (0..n)
        .map(|w| z.index_of(&Label::pair(sign_label(&plus), w_table.label(w).clone())).expect("σ(w) exists"))
        .collect();
    let project = |i: usize| -> usize {
        match z.label(i) {
            Label::Tuple(parts) => w_table.index_of(&parts[1]).expect("component label"),
            _ => unreachable!("rank points are labeled by pairs"),
        }
    };
    let mut hom = CheckReport::new("sigma");
    for a in 0..n {
        for b in 0..n {
            let prod = z.mul(sigma[a], sigma[b]);
            hom.record(prod == sigma[w_table.mul(a, b)], || {
                let cocycle = match z.label(prod) {
                    Label::Tuple(parts) => parts[0].clone(),
                    _ => unreachable!(),
                };
                json!({"pair": [w_table.label(a), w_table.label(b)], "cocycle": cocycle})
            });
        }
    }
    let mut section = CheckReport::new("sigma");
    let mut cosets = CheckReport::new("sigma");
    for (w, &s) in sigma.iter().enumerate() {
        section.record(project(s) == w, || json!({"section": w_table.label(w)}));
        let comp = &g.rank_scheme.components()[project(s)].label;
        cosets.record(comp == w_table.label(w), || json!({"coset": w_table.label(w), "component": comp}));
    }
    let homomorphism = hom.pass;
    let (sec, cos) = (section.pass, cosets.pass);
    let mut all = hom;
    all.absorb(section);
    all.absorb(cosets);
    Ok(SigmaReport {
        suite: "sigma".into(),
        pass: all.pass,
        checks: all.checks,
        homomorphism,
        section: sec,
        cosets: cos,
        cocycle_trivial: g.law.cocycle_is_trivial(),
        witness: all.witness,
    })
}

/// Checks that `act: G × Y -> Y` is a group action: compatibility with `μ`
/// and with the unit, on both sides, over all component triples.
pub fn check_action(g: &GroupModel, y: &RankScheme, act: &WeakMorphism) -> Result<CheckReport> {
    let expected_source = g.rank_scheme.product(y);
    if act.source != expected_source || act.target != *y {
        return Err(Error::ShapeMismatch("action must be a morphism G × Y -> Y".into()));
    }
    if y.components().iter().any(|c| !c.stalk.torsion().is_empty()) {
        return Err(Error::ShapeMismatch("action targets need free stalks".into()));
    }
    let ny = y.len();
    let n = g.w().order();
    let r = g.r();
    if act.mo_comaps.len() != n * ny || act.z.exponents.len() != n * ny {
        return Err(Error::ShapeMismatch("one action block per component pair".into()));
    }
    let mut rep = CheckReport::new("action");
    let mo_blocks: Vec<LawBlock> = act.mo_comaps.iter().map(|h| LawBlock::unsigned(h.images().clone())).collect();
    let z_blocks: Vec<LawBlock> = act
        .z
        .exponents
        .iter()
        .zip(&act.z.signs)
        .map(|(e, s)| Ok(LawBlock { exponents: e.clone(), signs: to_bits(s).map_err(|_| Error::ShapeMismatch("signs must be ±1".into()))? }))
        .collect::<Result<_>>()?;
    for side in [Side::Mo, Side::Z] {
        let (blocks, map) = match side {
            Side::Mo => (&mo_blocks, &act.mo_component_map),
            Side::Z => (&z_blocks, &act.z.component_map),
        };
        for (k, b) in blocks.iter().enumerate() {
            let d = y.stalk(map[k]).num_generators();
            if b.exponents.shape() != (r + y.stalk(k % ny).num_generators(), d) {
                return Err(Error::ShapeMismatch(format!("action block {k} has shape {:?}", b.exponents.shape())));
            }
        }
        let signed = matches!(side, Side::Z);
        let act_on = |a: &Point, p: &Point| {
            let b = &blocks[a.comp * ny + p.comp];
            apply(&b.exponents, signed.then_some(&b.signs[..]), map[a.comp * ny + p.comp], &[a, p])
        };
        let mul = |a: &Point, b: &Point| g.mul_point(side, a, b);
        let witness = |diagram: &str, comps: Value| json!({"side": side.name(), "diagram": diagram, "triple": comps});
        for yi in 0..ny {
            let d = y.stalk(yi).num_generators();
            let p = Point::generic(yi, r + d, r, d);
            let unit = Point::constant(g.w().identity(), r + d, r);
            let res = act_on(&unit, &p);
            rep.record(res == p, || witness("unit", json!([g.w().label(g.w().identity()), y.components()[yi].label])));
            for a in 0..n {
                for b in 0..n {
                    let vars = 2 * r + d;
                    let pa = Point::generic(a, vars, 0, r);
                    let pb = Point::generic(b, vars, r, r);
                    let py = Point::generic(yi, vars, 2 * r, d);
                    let lhs = act_on(&mul(&pa, &pb), &py);
                    let rhs = act_on(&pa, &act_on(&pb, &py));
                    rep.record(lhs == rhs, || {
                        witness("compatibility", json!([g.w().label(a), g.w().label(b), y.components()[yi].label]))
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// Group model file: `{"w": {...}, "r": r, "theta": {"<w>": [[...]]},
/// "cocycle": {"(<a>,<b>)": [±1, ...]}, "cells": {"<w>": d_w}}`. Missing
/// θ entries default to the identity, missing cocycle entries to `+1`,
/// missing cell dimensions to 0.
#[derive(Debug, Clone, Deserialize)]
pub struct GroupModelFile {
    pub w: FiniteGroupTable,
    #[serde(default)]
    pub r: usize,
    #[serde(default)]
    pub theta: BTreeMap<String, IntMatrix>,
    #[serde(default)]
    pub cocycle: BTreeMap<String, Vec<i8>>,
    #[serde(default)]
    pub cells: BTreeMap<String, usize>,
}

impl GroupModelFile {
    fn check_keys<'a>(&self, keys: impl Iterator<Item = &'a String>, valid: &[String], what: &str) -> Result<()> {
        for k in keys {
            if !valid.contains(k) {
                return Err(Error::Parse(format!("unknown {what} key {k:?}")));
            }
        }
        Ok(())
    }

    pub fn into_model(self) -> Result<GroupModel> {
        let names: Vec<String> = self.w.elements().iter().map(Label::to_string).collect();
        let n = names.len();
        let r = self.r;
        self.check_keys(self.theta.keys(), &names, "theta")?;
        self.check_keys(self.cells.keys(), &names, "cells")?;
        let pairs: Vec<String> = (0..n * n).map(|k| format!("({},{})", names[k / n], names[k % n])).collect();
        self.check_keys(self.cocycle.keys(), &pairs, "cocycle")?;
        let matrices = names.iter().map(|k| self.theta.get(k).cloned().unwrap_or_else(|| IntMatrix::identity(r))).collect();
        let cocycle = pairs.iter().map(|k| self.cocycle.get(k).cloned().unwrap_or_else(|| vec![1; r])).collect();
        let dims: Vec<usize> = names.iter().map(|k| self.cells.get(k).copied().unwrap_or(0)).collect();
        let law = ExtensionLaw::new(self.w, ThetaRep { r, matrices }, cocycle)?;
        extension_model(law, &dims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2_law() -> ExtensionLaw {
        let w = FiniteGroupTable::cyclic(2);
        let theta = ThetaRep { r: 1, matrices: vec![IntMatrix::identity(1), IntMatrix::identity(1).neg()] };
        ExtensionLaw::new(w, theta, vec![vec![1], vec![1], vec![1], vec![-1]]).unwrap()
    }

    #[test]
    fn tables() {
        let s3 = FiniteGroupTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(s3.is_associative());
        assert_eq!(s3.label(s3.identity()), &Label::seq([1, 2, 3]));
        let z4 = FiniteGroupTable::cyclic(4);
        assert_eq!(z4.element_order(1), 4);
        let bad = FiniteGroupTable::new(
            vec![Label::name("a"), Label::name("b")],
            vec![vec![0, 0], vec![0, 1]],
        );
        assert!(bad.is_err());
        let json = serde_json::to_string(&FiniteGroupTable::cyclic(2)).unwrap();
        assert_eq!(json, r#"{"elements":["0","1"],"mult":[[0,1],[1,0]]}"#);
        let back: FiniteGroupTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, FiniteGroupTable::cyclic(2));
    }

    #[test]
    fn torus_and_constant_groups_pass() {
        for g in [torus_group(0), torus_group(1), torus_group(3), constant_group(FiniteGroupTable::symmetric(3))] {
            let rep = check_group_axioms(&g);
            assert!(rep.pass, "{:?}", rep.witness);
            assert_eq!(g.kind, ModelKind::Strong);
        }
        assert_eq!(f1_points_group(&torus_group(1)).unwrap().order(), 1);
        let z2 = constant_group(FiniteGroupTable::cyclic(2));
        let pts = f1_points_group(&z2).unwrap();
        assert_eq!(pts.mul(1, 1), 0);
    }

    #[test]
    fn torus_rank_points() {
        let z = z_rank_group(&torus_group(1)).unwrap();
        assert_eq!(z.order(), 2);
        assert_eq!(z.element_order(1), 2);
    }

    #[test]
    fn sl2_is_weak_with_cyclic_rank_points() {
        let g = extension_model(sl2_law(), &[1, 2]).unwrap();
        assert_eq!(g.kind, ModelKind::Weak);
        let rep = check_group_axioms(&g);
        assert!(rep.pass, "{:?}", rep.witness);
        let z = z_rank_group(&g).unwrap();
        assert_eq!(z.order(), 4);
        assert!((0..4).any(|i| z.element_order(i) == 4));
        let s = sigma_check(&g).unwrap();
        assert!(!s.pass && !s.homomorphism && s.section && s.cosets);
        assert_eq!(s.witness.unwrap(), json!({"pair": ["1", "1"], "cocycle": [-1]}));
    }

    #[test]
    fn non_homomorphic_theta_fails_associativity() {
        // θ_s = diag(1, -1)·swap has order 4, so θ_s² ≠ θ_e
        let w = FiniteGroupTable::cyclic(2);
        let s = IntMatrix::from_rows(vec![vec![0, 1], vec![-1, 0]], 2).unwrap();
        let theta = ThetaRep { r: 2, matrices: vec![IntMatrix::identity(2), s.clone()] };
        assert!(matches!(
            ExtensionLaw::new(w.clone(), theta.clone(), vec![vec![1, 1]; 4]),
            Err(Error::ThetaNotHomomorphism(..))
        ));
        let law = ExtensionLaw::unchecked(w, theta, vec![vec![1, 1]; 4]).unwrap();
        let cells = Torification::new(vec![Cell::torus(2, Label::name("0")), Cell::torus(2, Label::name("1"))]).unwrap();
        let g = GroupModel::assemble(law, cells, ModelKind::Strong);
        let rep = check_group_axioms(&g);
        assert!(!rep.pass);
        assert!(matches!(f1_points_group(&g), Err(Error::AxiomsFailed(_))));
        let wit = rep.witness.unwrap();
        assert_eq!(wit["diagram"], "associativity");
    }

    #[test]
    fn invalid_cocycle_rejected() {
        let w = FiniteGroupTable::cyclic(2);
        let theta = ThetaRep::trivial(&w, 1);
        // not normalized
        assert!(matches!(
            ExtensionLaw::new(w, theta, vec![vec![-1], vec![1], vec![1], vec![1]]),
            Err(Error::CocycleInvalid(_))
        ));
    }

    #[test]
    fn actions() {
        let g = extension_model(
            ExtensionLaw::split(FiniteGroupTable::symmetric(2), ThetaRep::permutation(&FiniteGroupTable::symmetric(2), 2).unwrap()).unwrap(),
            &[1, 2],
        )
        .unwrap();
        let rep = check_action(&g, &g.rank_scheme, &g.mu()).unwrap();
        assert!(rep.pass, "{:?}", rep.witness);
        let y = RankScheme::free([Label::name("y0"), Label::name("y1")], 3);
        assert!(check_action(&g, &y, &g.projection_action(&y)).unwrap().pass);

        // twist the action on stalks by a non-homomorphic matrix
        let mut bad = g.projection_action(&y);
        let twist = IntMatrix::from_rows(vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]], 3).unwrap();
        for k in 2..4 {
            let e = IntMatrix::zeros(2, 3).vstack(&twist);
            bad.z.exponents[k] = e;
        }
        let rep = check_action(&g, &y, &bad).unwrap();
        assert!(!rep.pass);
        assert!(rep.witness.unwrap()["triple"].is_array());
        assert!(matches!(check_action(&g, &g.rank_scheme, &bad), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn products() {
        let a = constant_group(FiniteGroupTable::cyclic(2));
        let b = extension_model(sl2_law(), &[1, 2]).unwrap();
        let p = product_model(&a, &b);
        assert!(check_group_axioms(&p).pass);
        assert_eq!(p.kind, ModelKind::Weak);
        let pts = f1_points_group(&p).unwrap();
        let want = FiniteGroupTable::cyclic(2).direct_product(&FiniteGroupTable::cyclic(2));
        assert!(pts.isomorphic_via(&want, |l| l.clone()));
        assert_eq!(z_rank_group(&p).unwrap().order(), 2 * 2 * 2);
    }

    #[test]
    fn additive_chain() {
        let g = additive_chain_model(2);
        assert!(check_group_axioms(&g).pass);
        assert_eq!(f1_points_group(&g).unwrap().order(), 1);
        assert_eq!(g.cells.cells().len(), 4);
    }

    #[test]
    fn model_file() {
        let src = r#"{
            "w": {"elements": ["e", "s"], "mult": [[0, 1], [1, 0]]},
            "r": 1,
            "theta": {"s": [[-1]]},
            "cocycle": {"(s,s)": [-1]},
            "cells": {"e": 1, "s": 2}
        }"#;
        let f: GroupModelFile = serde_json::from_str(src).unwrap();
        let g = f.into_model().unwrap();
        assert_eq!(g.kind, ModelKind::Weak);
        assert_eq!(sigma_check(&g).unwrap().witness.unwrap(), json!({"pair": ["s", "s"], "cocycle": [-1]}));
        let bad: GroupModelFile = serde_json::from_str(r#"{"w": {"elements": ["e"], "mult": [[0]]}, "cells": {"x": 1}}"#).unwrap();
        assert!(matches!(bad.into_model(), Err(Error::Parse(_))));
    }
}
