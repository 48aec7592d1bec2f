//! Prime spectra of pointed monoids.
//!
//! A prime ideal of an affine monoid is the complement of a face of its
//! generator cone, so points are enumerated as faces: subsets `S` of the
//! generators for which some rational functional vanishes on `S` and is
//! positive on every other generator. Disjoint unions are first-class; no
//! gluing data is stored.

use serde::Serialize;

use crate::counting::IntPolynomial;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg;
use crate::monoid::{FgAbelianGroup, PointedMonoid};

/// Largest generator count accepted by face enumeration.
pub const MAX_SPEC_GENERATORS: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    /// Sorted 0-based generator indices.
    pub generators: Vec<usize>,
    pub unit_group: FgAbelianGroup,
}

impl Face {
    /// 1-based subset label.
    pub fn label(&self) -> Label {
        Label::seq(self.generators.iter().map(|&i| i + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Patch {
    /// `Spec m` with its faces in lexicographic order and the specialization
    /// pairs `(i, j)` meaning `p_i ⊊ p_j`.
    Spectrum { monoid: PointedMonoid, faces: Vec<Face>, specialization: Vec<(usize, usize)> },
    /// `⊔_{J ⊆ {1..affine}} Spec({0} ∪ Z^{rank + |J|})`, the tori of the
    /// subset refinement of `G_m^rank × A^affine`, listed without
    /// materializing all `2^affine` points.
    TorusFamily { rank: usize, affine: usize },
}

impl Patch {
    pub fn point_count(&self) -> u128 {
        match self {
            Patch::Spectrum { faces, .. } => faces.len() as u128,
            Patch::TorusFamily { affine, .. } => 1u128 << affine,
        }
    }

    fn min_rank(&self) -> usize {
        match self {
            Patch::Spectrum { faces, .. } => faces.iter().map(|f| f.unit_group.rank()).min().unwrap_or(usize::MAX),
            Patch::TorusFamily { rank, .. } => *rank,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoPoint {
    pub patch: usize,
    /// Index within the patch.
    pub index: u64,
    /// Face generators (Spectrum patches) or the refinement subset `J`
    /// (torus families); 0-based.
    pub face: Vec<usize>,
    pub unit_group: FgAbelianGroup,
}

impl MoPoint {
    pub fn rank(&self) -> usize {
        self.unit_group.rank()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MoSpace {
    pub patches: Vec<Patch>,
}

fn subset_of_rank(affine: usize, index: u64) -> Vec<usize> {
    (0..affine).filter(|&i| index >> i & 1 == 1).collect()
}

impl MoSpace {
    pub fn disjoint_union(spaces: impl IntoIterator<Item = MoSpace>) -> MoSpace {
        MoSpace { patches: spaces.into_iter().flat_map(|s| s.patches).collect() }
    }

    pub fn point_count(&self) -> u128 {
        self.patches.iter().map(Patch::point_count).sum()
    }

    /// All points, patch by patch. Torus-family points are produced lazily.
    pub fn points(&self) -> impl Iterator<Item = MoPoint> + '_ {
        self.patches.iter().enumerate().flat_map(|(p, patch)| -> Box<dyn Iterator<Item = MoPoint>> {
            match patch {
                Patch::Spectrum { faces, .. } => Box::new(faces.iter().enumerate().map(move |(i, f)| MoPoint {
                    patch: p,
                    index: i as u64,
                    face: f.generators.clone(),
                    unit_group: f.unit_group.clone(),
                })),
                &Patch::TorusFamily { rank, affine } => Box::new((0..1u64 << affine).map(move |i| {
                    let j = subset_of_rank(affine, i);
                    let unit_group = FgAbelianGroup::free(rank + j.len());
                    MoPoint { patch: p, index: i, face: j, unit_group }
                })),
            }
        })
    }

    pub fn contains(&self, p: &MoPoint) -> bool {
        match self.patches.get(p.patch) {
            Some(Patch::Spectrum { faces, .. }) => faces
                .get(p.index as usize)
                .is_some_and(|f| f.generators == p.face && f.unit_group == p.unit_group),
            Some(&Patch::TorusFamily { rank, affine }) => {
                p.index < 1u64 << affine
                    && subset_of_rank(affine, p.index) == p.face
                    && p.unit_group == FgAbelianGroup::free(rank + p.face.len())
            }
            None => false,
        }
    }

    /// `rk X̃`, the minimal point rank; `None` for the empty space.
    pub fn min_rank(&self) -> Option<usize> {
        self.patches.iter().map(Patch::min_rank).min()
    }

    /// Points of minimal rank, in patch order.
    pub fn min_rank_points(&self) -> Vec<MoPoint> {
        let Some(rho) = self.min_rank() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (p, patch) in self.patches.iter().enumerate() {
            match patch {
                Patch::Spectrum { faces, .. } => {
                    for (i, f) in faces.iter().enumerate() {
                        if f.unit_group.rank() == rho {
                            out.push(MoPoint {
                                patch: p,
                                index: i as u64,
                                face: f.generators.clone(),
                                unit_group: f.unit_group.clone(),
                            });
                        }
                    }
                }
                &Patch::TorusFamily { rank, .. } => {
                    if rank == rho {
                        out.push(MoPoint { patch: p, index: 0, face: Vec::new(), unit_group: FgAbelianGroup::free(rank) });
                    }
                }
            }
        }
        out
    }

    /// Specialization pairs as global point indices. Only Spectrum patches
    /// carry nontrivial order; the space must be small enough to index.
    pub fn specialization(&self) -> Vec<(usize, usize)> {
        let mut offset = 0usize;
        let mut out = Vec::new();
        for patch in &self.patches {
            if let Patch::Spectrum { specialization, .. } = patch {
                out.extend(specialization.iter().map(|&(i, j)| (i + offset, j + offset)));
            }
            offset += patch.point_count() as usize;
        }
        out
    }
}

/// Faces of the cone spanned by `generators`, sorted lexicographically.
fn faces_of(ambient_dim: usize, generators: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = generators.len();
    let mut faces = Vec::new();
    for mask in 0u32..1 << n {
        let (inside, outside): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| mask >> i & 1 == 1);
        let zero: Vec<Vec<i64>> = inside.iter().map(|&i| generators[i].clone()).collect();
        let pos: Vec<Vec<i64>> = outside.iter().map(|&i| generators[i].clone()).collect();
        if linalg::separating_functional_exists(&zero, &pos, ambient_dim) {
            faces.push(inside);
        }
    }
    faces.sort();
    faces
}

/// `Spec_Mo m`: one point per face, with its stalk unit group.
pub fn spec(m: &PointedMonoid) -> Result<MoSpace> {
    let (faces, specialization) = match m {
        PointedMonoid::GroupWithZero { group } => {
            (vec![Face { generators: Vec::new(), unit_group: group.clone() }], Vec::new())
        }
        PointedMonoid::Affine { ambient_dim, generators } => {
            if generators.len() > MAX_SPEC_GENERATORS {
                return Err(Error::TooManyGenerators { count: generators.len(), max: MAX_SPEC_GENERATORS });
            }
            let faces: Vec<Face> = faces_of(*ambient_dim, generators)
                .into_iter()
                .map(|s| {
                    let vecs: Vec<Vec<i64>> = s.iter().map(|&i| generators[i].clone()).collect();
                    Face { unit_group: FgAbelianGroup::free(linalg::rank(&vecs)), generators: s }
                })
                .collect();
            let mut order = Vec::new();
            for (i, a) in faces.iter().enumerate() {
                for (j, b) in faces.iter().enumerate() {
                    // p_i ⊆ p_j  iff  face_i ⊇ face_j
                    if i != j && b.generators.iter().all(|g| a.generators.contains(g)) {
                        order.push((i, j));
                    }
                }
            }
            (faces, order)
        }
    };
    Ok(MoSpace { patches: vec![Patch::Spectrum { monoid: m.clone(), faces, specialization }] })
}

/// `rk x`
pub fn rank_of_point(s: &MoSpace, p: &MoPoint) -> Result<usize> {
    if !s.contains(p) {
        return Err(Error::ShapeMismatch(format!("point {}:{} is not in the space", p.patch, p.index)));
    }
    Ok(p.rank())
}

/// `X̃^rk`: one `{0} ∪ O_x^×` patch per point of minimal rank.
pub fn rank_subspace(s: &MoSpace) -> MoSpace {
    MoSpace::disjoint_union(s.min_rank_points().into_iter().map(|p| {
        spec(&PointedMonoid::group_with_zero(p.unit_group)).expect("groups with zero have one point")
    }))
}

/// Number of monoid homomorphisms `m -> (F_q, ·)` as a polynomial in `q`:
/// `Σ_faces (q-1)^{rank}`.
pub fn point_count_poly(m: &PointedMonoid) -> Result<IntPolynomial> {
    if let PointedMonoid::GroupWithZero { group } = m {
        if !group.torsion().is_empty() {
            return Err(Error::TorsionNotPolynomial(group.torsion().to_vec()));
        }
    }
    let s = spec(m)?;
    let qm1 = IntPolynomial::q_minus_one();
    Ok(s.points().map(|p| qm1.pow(p.rank() as u32)).sum())
}

/// JSON shape of the `spec` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct SpecSummary {
    pub points: Vec<PointSummary>,
    pub specialization: Vec<[usize; 2]>,
    pub min_rank: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointSummary {
    pub face: Vec<usize>,
    pub rank: usize,
}

impl SpecSummary {
    pub fn of(s: &MoSpace) -> Self {
        SpecSummary {
            points: s
                .points()
                .map(|p| PointSummary { face: p.face.iter().map(|i| i + 1).collect(), rank: p.rank() })
                .collect(),
            specialization: s.specialization().into_iter().map(|(i, j)| [i, j]).collect(),
            min_rank: s.min_rank(),
        }
    }
}
