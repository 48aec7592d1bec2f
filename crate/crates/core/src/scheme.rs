//! F₁-schemes as triples `(X̃, X, e_X)`: a Mo-side space, the torification
//! cells that carry the Z-side scheme, and the pairing between points and
//! tori. Morphisms live on rank parts, where both strong and weak morphisms
//! are defined.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::matrix::IntMatrix;
use crate::monoid::{hom_count, validate_hom, FgAbelianGroup, GroupHom, PointedMonoid};
use crate::report::CheckReport;
use crate::spectrum::{spec, MoPoint, MoSpace, Patch};

/// A torified piece `G_m^dim × A^affine`, refined into the `2^affine` tori
/// `G_m^{dim + |J|}` for `J ⊆ {1, ..., affine}`. With `affine = 0` this is a
/// single torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub affine: usize,
    pub label: Label,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl Cell {
    pub fn torus(dim: usize, label: Label) -> Self {
        Cell { dim, affine: 0, label }
    }

    pub fn torus_count(&self) -> u128 {
        1u128 << self.affine
    }

    /// Label of the refinement torus for the 1-based subset `j`. The
    /// minimal torus (`j` empty) carries the cell's own label.
    pub fn torus_label(&self, j: &[usize]) -> Label {
        if j.is_empty() {
            self.label.clone()
        } else {
            Label::pair(self.label.clone(), Label::seq(j.iter().copied()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TorificationFile")]
pub struct Torification {
    cells: Vec<Cell>,
}

#[derive(Deserialize)]
struct TorificationFile {
    cells: Vec<Cell>,
}

impl TryFrom<TorificationFile> for Torification {
    type Error = Error;

    fn try_from(f: TorificationFile) -> Result<Self> {
        Torification::new(f.cells)
    }
}

impl Torification {
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::ShapeMismatch("a torification needs at least one cell".into()));
        }
        let mut seen = HashSet::new();
        for c in &cells {
            if !seen.insert(&c.label) {
                return Err(Error::ShapeMismatch(format!("duplicate cell label {}", c.label)));
            }
        }
        Ok(Torification { cells })
    }

    /// The `2^d` coordinate-subset tori of `A^d`, labeled by sorted subsets.
    pub fn affine_space(d: usize) -> Self {
        let mut subsets: Vec<Vec<usize>> =
            (0u64..1 << d).map(|m| (0..d).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect()).collect();
        subsets.sort();
        Torification {
            cells: subsets.into_iter().map(|s| Cell::torus(s.len(), Label::seq(s))).collect(),
        }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn torus_count(&self) -> u128 {
        self.cells.iter().map(Cell::torus_count).sum()
    }

    pub fn min_dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).min().expect("nonempty")
    }

    /// Cartesian product; labels become pairs and dimensions add.
    pub fn product(&self, other: &Self) -> Self {
        let cells = self
            .cells
            .iter()
            .flat_map(|a| {
                other.cells.iter().map(move |b| Cell {
                    dim: a.dim + b.dim,
                    affine: a.affine + b.affine,
                    label: Label::pair(a.label.clone(), b.label.clone()),
                })
            })
            .collect();
        Torification { cells }
    }
}

/// One component of a pure-rank scheme.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    pub label: Label,
    pub stalk: FgAbelianGroup,
}

/// `X^rk`: a finite disjoint union of `Spec({0} ∪ H_i)` with all `H_i` of
/// equal rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RankScheme {
    components: Vec<Component>,
}

impl RankScheme {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if let Some(first) = components.first() {
            if let Some(c) = components.iter().find(|c| c.stalk.rank() != first.stalk.rank()) {
                return Err(Error::ShapeMismatch(format!(
                    "component {} has rank {}, expected pure rank {}",
                    c.label,
                    c.stalk.rank(),
                    first.stalk.rank()
                )));
            }
        }
        Ok(RankScheme { components })
    }

    /// `Σ_labels ∗`, every stalk trivial.
    pub fn discrete(labels: impl IntoIterator<Item = Label>) -> Self {
        RankScheme {
            components: labels.into_iter().map(|label| Component { label, stalk: FgAbelianGroup::trivial() }).collect(),
        }
    }

    /// Every component with stalk `Z^r`.
    pub fn free(labels: impl IntoIterator<Item = Label>, r: usize) -> Self {
        RankScheme {
            components: labels.into_iter().map(|label| Component { label, stalk: FgAbelianGroup::free(r) }).collect(),
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.components.iter().map(|c| c.label.clone()).collect()
    }

    pub fn rank(&self) -> Option<usize> {
        self.components.first().map(|c| c.stalk.rank())
    }

    pub fn stalk(&self, i: usize) -> &FgAbelianGroup {
        &self.components[i].stalk
    }

    pub fn position(&self, label: &Label) -> Option<usize> {
        self.components.iter().position(|c| &c.label == label)
    }

    /// Product scheme, components in row-major order `(a_i, b_j)`. Stalk
    /// coordinates concatenate (exact for free stalks).
    pub fn product(&self, other: &Self) -> Self {
        let components = self
            .components
            .iter()
            .flat_map(|a| {
                other.components.iter().map(move |b| Component {
                    label: Label::pair(a.label.clone(), b.label.clone()),
                    stalk: a.stalk.direct_sum(&b.stalk),
                })
            })
            .collect();
        RankScheme { components }
    }

    /// Whether the two schemes agree after renaming labels, i.e. have the
    /// same multiset of stalks.
    pub fn isomorphic_up_to_labels(&self, other: &Self) -> bool {
        let count = |s: &Self| {
            let mut m: BTreeMap<FgAbelianGroup, usize> = BTreeMap::new();
            for c in &s.components {
                *m.entry(c.stalk.clone()).or_default() += 1;
            }
            m
        };
        count(self) == count(other)
    }
}

/// Where the points of a Mo-side patch go among the cells.
#[derive(Debug, Clone, PartialEq, Eq)]
enum PatchEval {
    /// Point `J` of a torus family goes to torus `J` of this cell.
    Refined(usize),
    /// Point `i` of a spectrum goes to cell `start + i`.
    Faces(usize),
}

/// The triple `(X̃, X, e_X)`, with `X` carried by its torification cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F1Scheme {
    pub mo: MoSpace,
    pub cells: Torification,
    eval: Vec<PatchEval>,
}

impl F1Scheme {
    /// Cell index and 1-based refinement subset paired with a point.
    pub fn eval(&self, p: &MoPoint) -> (usize, Vec<usize>) {
        match self.eval[p.patch] {
            PatchEval::Refined(c) => (c, p.face.iter().map(|i| i + 1).collect()),
            PatchEval::Faces(start) => (start + p.index as usize, Vec::new()),
        }
    }

    pub fn eval_label(&self, p: &MoPoint) -> Label {
        let (c, j) = self.eval(p);
        self.cells.cells[c].torus_label(&j)
    }

    /// Checks `rk x = dim e_X(x)` at every point; expands torus families, so
    /// only for schemes with at most `limit` points.
    pub fn check_dimensions(&self, limit: u128) -> CheckReport {
        let mut r = CheckReport::new("dimensions");
        if self.mo.point_count() > limit {
            r.fail(json!({"too_many_points": self.mo.point_count().to_string()}));
            return r;
        }
        for p in self.mo.points() {
            let (c, j) = self.eval(&p);
            let dim = self.cells.cells[c].dim + j.len();
            r.record(p.rank() == dim, || json!({"point": self.eval_label(&p), "rank": p.rank(), "dim": dim}));
        }
        r
    }
}

/// `⊔_i Spec({0} ∪ Z^{d_i})` over the tori of `cells`, paired canonically.
pub fn from_torification(cells: Torification) -> F1Scheme {
    let patches = cells.cells.iter().map(|c| Patch::TorusFamily { rank: c.dim, affine: c.affine }).collect();
    let eval = (0..cells.cells.len()).map(PatchEval::Refined).collect();
    F1Scheme { mo: MoSpace { patches }, cells, eval }
}

/// The affine toric scheme of `m`: Mo side `Spec m`, one cell per face
/// (torus orbit) of dimension equal to the face rank.
pub fn affine_toric(m: &PointedMonoid) -> Result<F1Scheme> {
    if !m.is_affine() {
        return Err(Error::NotAffine);
    }
    from_monoid(m)
}

/// Like [`affine_toric`] but also accepts groups with zero (one cell).
pub fn from_monoid(m: &PointedMonoid) -> Result<F1Scheme> {
    let mo = spec(m)?;
    let cells = mo
        .points()
        .map(|p| {
            let label = match m {
                PointedMonoid::Affine { .. } => Label::seq(p.face.iter().map(|i| i + 1)),
                PointedMonoid::GroupWithZero { .. } => Label::unit(),
            };
            Cell::torus(p.rank(), label)
        })
        .collect();
    Ok(F1Scheme { mo, cells: Torification::new(cells)?, eval: vec![PatchEval::Faces(0)] })
}

/// `X^rk`: minimal-rank points with their stalk unit groups.
pub fn rank_part(x: &F1Scheme) -> RankScheme {
    RankScheme {
        components: x
            .mo
            .min_rank_points()
            .into_iter()
            .map(|p| Component { label: x.eval_label(&p), stalk: p.unit_group })
            .collect(),
    }
}

/// `X(F_1)`, the points of `X̃^rk`.
pub fn f1_points(x: &F1Scheme) -> Vec<Label> {
    rank_part(x).labels()
}

/// `#X(H) = Σ_components |Hom(stalk, H)|`.
pub fn h_points_count(x: &F1Scheme, h: &FgAbelianGroup) -> Result<BigUint> {
    rank_points_count(&rank_part(x), h)
}

pub fn rank_points_count(x: &RankScheme, h: &FgAbelianGroup) -> Result<BigUint> {
    x.components.iter().try_fold(BigUint::zero(), |acc, c| Ok(acc + hom_count(&c.stalk, h)?))
}

/// Z-side rank morphism: on source component `i`, the map
/// `t ↦ (s_j · Π_k t_k^{E_kj})_j` into target component `component_map[i]`.
/// `E` has one row per source stalk generator and one column per target
/// stalk generator, the same orientation as a stalk comap.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialMap {
    pub component_map: Vec<usize>,
    pub exponents: Vec<IntMatrix>,
    pub signs: Vec<Vec<i8>>,
}

impl MonomialMap {
    /// `other ∘ self`.
    pub fn then(&self, other: &MonomialMap) -> MonomialMap {
        let mut exponents = Vec::with_capacity(self.component_map.len());
        let mut signs = Vec::with_capacity(self.component_map.len());
        for (i, &y) in self.component_map.iter().enumerate() {
            let a = &self.exponents[i];
            let b = &other.exponents[y];
            exponents.push(a * b);
            let s = &self.signs[i];
            signs.push(
                other.signs[y]
                    .iter()
                    .enumerate()
                    .map(|(l, &sl)| {
                        let odd = (0..b.rows()).filter(|&j| s[j] < 0 && b[(j, l)].rem_euclid(2) == 1).count();
                        if odd % 2 == 1 {
                            -sl
                        } else {
                            sl
                        }
                    })
                    .collect(),
            );
        }
        MonomialMap {
            component_map: self.component_map.iter().map(|&y| other.component_map[y]).collect(),
            exponents,
            signs,
        }
    }
}

/// Morphism of rank parts in the strong sense: a component map together with
/// stalk comaps `O_{Y,f(x)}^× -> O_{X,x}^×`. Its Z side is the base extension
/// of the same data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrongMorphismRk {
    pub source: RankScheme,
    pub target: RankScheme,
    pub component_map: Vec<usize>,
    pub comaps: Vec<GroupHom>,
}

/// A pair of a Mo-side rank morphism and a Z-side monomial map whose
/// component maps coincide; stalk data may differ between the two sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakMorphism {
    pub source: RankScheme,
    pub target: RankScheme,
    pub mo_component_map: Vec<usize>,
    pub mo_comaps: Vec<GroupHom>,
    pub z: MonomialMap,
}

impl StrongMorphismRk {
    pub fn identity(x: &RankScheme) -> Self {
        StrongMorphismRk {
            source: x.clone(),
            target: x.clone(),
            component_map: (0..x.len()).collect(),
            comaps: x.components.iter().map(|c| GroupHom::identity(&c.stalk)).collect(),
        }
    }

    /// Base extension: the Z side uses the comap matrices with all signs `+1`.
    pub fn to_weak(&self) -> WeakMorphism {
        WeakMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            mo_component_map: self.component_map.clone(),
            mo_comaps: self.comaps.clone(),
            z: MonomialMap {
                component_map: self.component_map.clone(),
                exponents: self.comaps.iter().map(|h| h.images().clone()).collect(),
                signs: self.comaps.iter().map(|h| vec![1; h.images().cols()]).collect(),
            },
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &StrongMorphismRk) -> Result<StrongMorphismRk> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch("composable morphisms need matching rank schemes".into()));
        }
        let comaps = self
            .component_map
            .iter()
            .enumerate()
            .map(|(x, &y)| other.comaps[y].then(&self.comaps[x]))
            .collect::<Result<Vec<_>>>()?;
        Ok(StrongMorphismRk {
            source: self.source.clone(),
            target: other.target.clone(),
            component_map: self.component_map.iter().map(|&y| other.component_map[y]).collect(),
            comaps,
        })
    }
}

impl WeakMorphism {
    /// `other ∘ self`.
    pub fn then(&self, other: &WeakMorphism) -> Result<WeakMorphism> {
        let mo = self.mo_part().then(&other.mo_part())?;
        Ok(WeakMorphism {
            source: mo.source,
            target: mo.target,
            mo_component_map: mo.component_map,
            mo_comaps: mo.comaps,
            z: self.z.then(&other.z),
        })
    }

    pub fn mo_part(&self) -> StrongMorphismRk {
        StrongMorphismRk {
            source: self.source.clone(),
            target: self.target.clone(),
            component_map: self.mo_component_map.clone(),
            comaps: self.mo_comaps.clone(),
        }
    }
}

fn check_component_map(map: &[usize], source: &RankScheme, target: &RankScheme) -> Result<()> {
    if map.len() != source.len() {
        return Err(Error::ShapeMismatch(format!(
            "component map has {} entries for {} source components",
            map.len(),
            source.len()
        )));
    }
    if let Some(&y) = map.iter().find(|&&y| y >= target.len()) {
        return Err(Error::ShapeMismatch(format!("component {y} out of range")));
    }
    Ok(())
}

/// Validates every stalk comap of a strong rank morphism.
pub fn check_strong(f: &StrongMorphismRk) -> Result<CheckReport> {
    check_component_map(&f.component_map, &f.source, &f.target)?;
    if f.comaps.len() != f.source.len() {
        return Err(Error::ShapeMismatch("one stalk comap per source component is required".into()));
    }
    let mut r = CheckReport::new("strong");
    for (x, &y) in f.component_map.iter().enumerate() {
        let h = &f.comaps[x];
        let label = &f.source.components[x].label;
        let groups_ok = h.source == *f.target.stalk(y) && h.target == *f.source.stalk(x);
        if !r.record(groups_ok, || json!({"component": label, "error": "comap groups do not match stalks"})) {
            continue;
        }
        let v = validate_hom(h);
        r.record(v.valid, || json!({"component": label, "generator": v.failing_generator, "error": v.reason}));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakReport {
    pub weak: CheckReport,
    /// Whether the weak morphism is the base extension of its Mo side.
    pub strong: bool,
}

/// Validates a weak morphism: the Mo side as a rank morphism, the Z-side
/// shapes, and agreement of the component maps.
pub fn check_weak(f: &WeakMorphism) -> Result<WeakReport> {
    let mut r = check_strong(&f.mo_part())?;
    r.suite = "weak".into();
    check_component_map(&f.z.component_map, &f.source, &f.target)?;
    if f.z.exponents.len() != f.source.len() || f.z.signs.len() != f.source.len() {
        return Err(Error::ShapeMismatch("one exponent matrix and sign vector per source component".into()));
    }
    for x in 0..f.source.len() {
        let label = &f.source.components[x].label;
        let y = f.z.component_map[x];
        r.record(f.mo_component_map[x] == y, || {
            json!({"component": label, "error": "Mo and Z component maps differ", "mo": f.mo_component_map[x], "z": y})
        });
        let want = (f.source.stalk(x).num_generators(), f.target.stalk(y).num_generators());
        if f.z.exponents[x].shape() != want || f.z.signs[x].len() != want.1 {
            return Err(Error::ShapeMismatch(format!(
                "Z-side data at component {label} has shape {:?}, expected {want:?}",
                f.z.exponents[x].shape()
            )));
        }
        r.record(f.z.signs[x].iter().all(|&s| s == 1 || s == -1), || {
            json!({"component": label, "error": "signs must be ±1"})
        });
    }
    let strong = r.pass
        && f.mo_comaps.iter().zip(&f.z.exponents).all(|(h, e)| h.images() == e)
        && f.z.signs.iter().flatten().all(|&s| s == 1);
    Ok(WeakReport { weak: r, strong })
}
