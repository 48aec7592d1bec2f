//! Finitely generated pointed commutative monoids and finitely generated
//! abelian groups.
//!
//! Two families of monoids are represented: affine lattice monoids
//! `<g_1, ..., g_n> ∪ {0}` inside `Z^d`, and groups with an absorbing zero
//! adjoined, `{0} ∪ H`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::IntMatrix;

/// `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` with `t_1 | t_2 | ... | t_k` and `t_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<u64>,
}

#[derive(Deserialize)]
struct RawGroup {
    rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

impl TryFrom<RawGroup> for FgAbelianGroup {
    type Error = Error;

    fn try_from(raw: RawGroup) -> Result<Self> {
        FgAbelianGroup::new(raw.rank, raw.torsion)
    }
}

fn prime_power_factors(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

impl FgAbelianGroup {
    /// Validates the divisibility-chain normal form.
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(&t) = torsion.iter().find(|&&t| t < 2) {
            return Err(Error::InvalidGroup(format!("torsion order {t} < 2")));
        }
        if let Some(w) = torsion.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z/m`
    pub fn cyclic(m: u64) -> Self {
        Self::from_cyclic_factors(0, &[m])
    }

    /// Normalizes `Z^rank ⊕ ⊕ Z/m_i` (any orders, 0 and 1 allowed) into
    /// invariant-factor form.
    pub fn from_cyclic_factors(rank: usize, orders: &[u64]) -> Self {
        let mut rank = rank;
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &m in orders {
            match m {
                0 => rank += 1,
                1 => {}
                _ => {
                    for (p, e) in prime_power_factors(m) {
                        by_prime.entry(p).or_default().push(e);
                    }
                }
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (j, e) in exps.into_iter().enumerate() {
                torsion[len - 1 - j] *= p.pow(e);
            }
        }
        FgAbelianGroup { rank, torsion }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of generators: free ones first, then one per torsion factor.
    pub fn num_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Size of the `m`-torsion subgroup `{x : m x = 0}` for `m >= 1`.
    /// Infinite groups still have a finite `m`-torsion subgroup.
    pub fn torsion_subgroup_size(&self, m: u64) -> u64 {
        self.torsion.iter().map(|&t| t.gcd(&m)).product()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let orders: Vec<u64> = self.torsion.iter().chain(&other.torsion).copied().collect();
        Self::from_cyclic_factors(self.rank + other.rank, &orders)
    }

    /// All elements of a finite group as residue vectors.
    pub fn elements(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for &t in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..t as i64).map(move |x| {
                        let mut v = e.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        Some(out)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homomorphism between finitely generated abelian groups, given by the
/// images of the source generators (columns) in target coordinates (rows).
/// Target torsion coordinates are kept reduced modulo their orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupHom {
    pub source: FgAbelianGroup,
    pub target: FgAbelianGroup,
    images: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomReport {
    pub valid: bool,
    pub failing_generator: Option<usize>,
    pub reason: Option<String>,
}

impl HomReport {
    fn ok() -> Self {
        HomReport { valid: true, failing_generator: None, reason: None }
    }

    fn fail(generator: Option<usize>, reason: String) -> Self {
        HomReport { valid: false, failing_generator: generator, reason: Some(reason) }
    }
}

impl GroupHom {
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, images: IntMatrix) -> Self {
        let mut images = images;
        if images.rows() == target.num_generators() {
            for (k, &t) in target.torsion.iter().enumerate() {
                let row = target.rank + k;
                for j in 0..images.cols() {
                    images[(row, j)] = images[(row, j)].rem_euclid(t as i64);
                }
            }
        }
        GroupHom { source, target, images }
    }

    pub fn identity(g: &FgAbelianGroup) -> Self {
        GroupHom::new(g.clone(), g.clone(), IntMatrix::identity(g.num_generators()))
    }

    pub fn zero(source: &FgAbelianGroup, target: &FgAbelianGroup) -> Self {
        GroupHom::new(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.num_generators(), source.num_generators()),
        )
    }

    pub fn images(&self) -> &IntMatrix {
        &self.images
    }

    /// Block sending free source generators to free target coordinates.
    pub fn free_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.target.rank, self.source.rank, |i, j| self.images[(i, j)])
    }

    /// Rows for the target torsion coordinates (all source generators).
    pub fn torsion_block(&self) -> IntMatrix {
        let t = self.target.rank;
        IntMatrix::from_fn(self.target.torsion.len(), self.images.cols(), |i, j| self.images[(t + i, j)])
    }

    pub fn validate(&self) -> HomReport {
        validate_hom(self)
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.source || self.images.rows() != other.images.cols() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(GroupHom::new(self.source.clone(), other.target.clone(), &other.images * &self.images))
    }
}

/// Checks matrix shape and that every torsion generator of order `m` maps
/// to an element killed by `m`.
pub fn validate_hom(f: &GroupHom) -> HomReport {
    let want = (f.target.num_generators(), f.source.num_generators());
    if f.images.shape() != want {
        return HomReport::fail(
            None,
            format!("image matrix is {:?}, expected {:?}", f.images.shape(), want),
        );
    }
    for (k, &m) in f.source.torsion.iter().enumerate() {
        let j = f.source.rank + k;
        for i in 0..f.target.rank {
            if f.images[(i, j)] != 0 {
                return HomReport::fail(
                    Some(j),
                    format!("generator of order {m} has nonzero free image coordinate {i}"),
                );
            }
        }
        for (l, &t) in f.target.torsion.iter().enumerate() {
            let x = f.images[(f.target.rank + l, j)];
            if (x * m as i64).rem_euclid(t as i64) != 0 {
                return HomReport::fail(
                    Some(j),
                    format!("{m} * {x} is nonzero modulo {t}"),
                );
            }
        }
    }
    HomReport::ok()
}

/// `|Hom(a, h)|`. Requires finiteness: errors when `a` has free rank and `h`
/// is infinite.
pub fn hom_count(a: &FgAbelianGroup, h: &FgAbelianGroup) -> Result<BigUint> {
    if a.rank > 0 && !h.is_finite() {
        return Err(Error::InfiniteHomSet { source_rank: a.rank, target_rank: h.rank });
    }
    let mut count = BigUint::one();
    if a.rank > 0 {
        count = BigUint::from(h.order().expect("finite")).pow(a.rank as u32);
    }
    for &m in &a.torsion {
        count *= BigUint::from(h.torsion_subgroup_size(m));
    }
    Ok(count)
}

/// A finitely generated pointed commutative monoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MonoidFile", into = "MonoidFile")]
pub enum PointedMonoid {
    /// `<generators> ∪ {0}` inside `Z^ambient_dim`.
    Affine { ambient_dim: usize, generators: Vec<Vec<i64>> },
    /// `{0} ∪ H`.
    GroupWithZero { group: FgAbelianGroup },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum MonoidFile {
    Affine { ambient_dim: usize, generators: Vec<Vec<i64>> },
    GroupWithZero { rank: usize, #[serde(default)] torsion: Vec<u64> },
}

impl TryFrom<MonoidFile> for PointedMonoid {
    type Error = Error;

    fn try_from(f: MonoidFile) -> Result<Self> {
        match f {
            MonoidFile::Affine { ambient_dim, generators } => PointedMonoid::affine(ambient_dim, generators),
            MonoidFile::GroupWithZero { rank, torsion } => {
                Ok(PointedMonoid::GroupWithZero { group: FgAbelianGroup::new(rank, torsion)? })
            }
        }
    }
}

impl From<PointedMonoid> for MonoidFile {
    fn from(m: PointedMonoid) -> Self {
        match m {
            PointedMonoid::Affine { ambient_dim, generators } => MonoidFile::Affine { ambient_dim, generators },
            PointedMonoid::GroupWithZero { group } => {
                MonoidFile::GroupWithZero { rank: group.rank, torsion: group.torsion }
            }
        }
    }
}

impl PointedMonoid {
    pub fn affine(ambient_dim: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.len() != ambient_dim {
                return Err(Error::InvalidMonoid(format!(
                    "generator {i} has length {}, expected {ambient_dim}",
                    g.len()
                )));
            }
            if g.iter().all(|&x| x == 0) {
                return Err(Error::InvalidMonoid(format!("generator {i} is zero")));
            }
            if generators[..i].contains(g) {
                return Err(Error::InvalidMonoid(format!("generator {i} is repeated")));
            }
        }
        Ok(PointedMonoid::Affine { ambient_dim, generators })
    }

    pub fn group_with_zero(group: FgAbelianGroup) -> Self {
        PointedMonoid::GroupWithZero { group }
    }

    /// `N^d` with its standard basis, i.e. the monoid of the affine space.
    pub fn orthant(d: usize) -> Self {
        let gens = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        PointedMonoid::Affine { ambient_dim: d, generators: gens }
    }

    /// `{0, 1}`
    pub fn boolean() -> Self {
        PointedMonoid::Affine { ambient_dim: 0, generators: Vec::new() }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, PointedMonoid::Affine { .. })
    }

    /// Affine form of a torsion-free group with zero: generators `±e_i`.
    fn as_affine(&self) -> Result<(usize, Vec<Vec<i64>>)> {
        match self {
            PointedMonoid::Affine { ambient_dim, generators } => Ok((*ambient_dim, generators.clone())),
            PointedMonoid::GroupWithZero { group } => {
                if !group.torsion.is_empty() {
                    return Err(Error::TorsionInAffine);
                }
                let r = group.rank;
                let mut gens = Vec::with_capacity(2 * r);
                for i in 0..r {
                    for s in [1, -1] {
                        gens.push((0..r).map(|j| if i == j { s } else { 0 }).collect());
                    }
                }
                Ok((r, gens))
            }
        }
    }
}

/// Smash product `a ∧ b` with respect to the zero base point.
pub fn smash_product(a: &PointedMonoid, b: &PointedMonoid) -> Result<PointedMonoid> {
    if let (PointedMonoid::GroupWithZero { group: g }, PointedMonoid::GroupWithZero { group: h }) = (a, b) {
        return Ok(PointedMonoid::GroupWithZero { group: g.direct_sum(h) });
    }
    let (da, ga) = a.as_affine()?;
    let (db, gb) = b.as_affine()?;
    let mut gens = Vec::with_capacity(ga.len() + gb.len());
    for g in ga {
        let mut v = g;
        v.resize(da + db, 0);
        gens.push(v);
    }
    for g in gb {
        let mut v = vec![0; da];
        v.extend(g);
        gens.push(v);
    }
    Ok(PointedMonoid::Affine { ambient_dim: da + db, generators: gens })
}

/// Cap on search nodes in the integer certificate search for invertibility.
const CERTIFICATE_NODE_BUDGET: u64 = 2_000_000;

/// Indices of the invertible generators of an affine monoid.
///
/// Non-invertibility is certified exactly by a rational functional that is
/// nonnegative on the generators and positive on the candidate. Invertibility
/// is certified by an explicit nonnegative integer combination equal to the
/// negated generator, found by exhaustive search with each coefficient at
/// most `10 · max|coordinate| · #generators`.
pub fn unit_generators(m: &PointedMonoid) -> Result<Vec<usize>> {
    let PointedMonoid::Affine { generators, .. } = m else {
        return Err(Error::NotAffine);
    };
    let candidates: Vec<usize> =
        (0..generators.len()).filter(|&i| !linalg::weakly_separable(generators, &generators[i])).collect();
    let max_abs = generators.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let bound = 10 * max_abs * generators.len() as u64;
    let pool: Vec<&[i64]> = candidates.iter().map(|&i| generators[i].as_slice()).collect();
    for &i in &candidates {
        let target: Vec<i64> = generators[i].iter().map(|x| -x).collect();
        if !find_certificate(&pool, &target, bound)? {
            return Err(Error::MembershipUndecidedWithinBound { generator: i, bound });
        }
    }
    Ok(candidates)
}

/// Searches nonnegative integer `c` with `Σ c_j pool_j = target` and
/// `Σ c_j <= bound`, by iterative deepening on the coefficient sum.
fn find_certificate(pool: &[&[i64]], target: &[i64], bound: u64) -> Result<bool> {
    fn dfs(pool: &[&[i64]], rest: &mut Vec<i64>, left: u64, nodes: &mut u64) -> Option<bool> {
        *nodes += 1;
        if *nodes > CERTIFICATE_NODE_BUDGET {
            return None;
        }
        if left == 0 {
            return Some(rest.iter().all(|&x| x == 0));
        }
        let Some((first, tail)) = pool.split_first() else {
            return Some(false);
        };
        for c in (0..=left).rev() {
            for (r, g) in rest.iter_mut().zip(first.iter()) {
                *r -= g * c as i64;
            }
            let found = if tail.is_empty() {
                Some(c == left && rest.iter().all(|&x| x == 0))
            } else {
                dfs(tail, rest, left - c, nodes)
            };
            for (r, g) in rest.iter_mut().zip(first.iter()) {
                *r += g * c as i64;
            }
            match found {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
        }
        Some(false)
    }
    if target.iter().all(|&x| x == 0) {
        return Ok(true);
    }
    let mut nodes = 0;
    for total in 1..=bound {
        let mut rest = target.to_vec();
        match dfs(pool, &mut rest, total, &mut nodes) {
            Some(true) => return Ok(true),
            Some(false) => {}
            None => return Ok(false),
        }
    }
    Ok(false)
}

/// Group of invertible elements of `m`.
pub fn units_of(m: &PointedMonoid) -> Result<FgAbelianGroup> {
    match m {
        PointedMonoid::GroupWithZero { group } => Ok(group.clone()),
        PointedMonoid::Affine { generators, .. } => {
            let units = unit_generators(m)?;
            let vecs: Vec<Vec<i64>> = units.iter().map(|&i| generators[i].clone()).collect();
            Ok(FgAbelianGroup::free(linalg::rank(&vecs)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aff(d: usize, g: &[&[i64]]) -> PointedMonoid {
        PointedMonoid::affine(d, g.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn normal_form() {
        let g = FgAbelianGroup::from_cyclic_factors(1, &[2, 3, 4, 1, 0]);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.torsion(), &[2, 12]);
        assert!(FgAbelianGroup::new(0, vec![4, 2]).is_err());
        assert!(FgAbelianGroup::new(0, vec![1]).is_err());
        assert_eq!(FgAbelianGroup::cyclic(6).torsion(), &[6]);
    }

    #[test]
    fn smash_examples() {
        let n = aff(1, &[&[1]]);
        assert_eq!(smash_product(&n, &n).unwrap(), aff(2, &[&[1, 0], &[0, 1]]));
        let z1 = PointedMonoid::group_with_zero(FgAbelianGroup::free(1));
        let z2 = PointedMonoid::group_with_zero(FgAbelianGroup::free(2));
        assert_eq!(
            smash_product(&z1, &z2).unwrap(),
            PointedMonoid::group_with_zero(FgAbelianGroup::free(3))
        );
        assert_eq!(smash_product(&n, &z1).unwrap(), aff(2, &[&[1, 0], &[0, 1], &[0, -1]]));
        let tors = PointedMonoid::group_with_zero(FgAbelianGroup::cyclic(2));
        assert_eq!(smash_product(&n, &tors), Err(Error::TorsionInAffine));
        assert_eq!(smash_product(&PointedMonoid::boolean(), &n).unwrap(), n);
    }

    #[test]
    fn units_examples() {
        assert_eq!(units_of(&PointedMonoid::orthant(2)).unwrap(), FgAbelianGroup::trivial());
        let z3 = PointedMonoid::group_with_zero(FgAbelianGroup::free(3));
        assert_eq!(units_of(&z3).unwrap(), FgAbelianGroup::free(3));
        let m = aff(2, &[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(unit_generators(&m).unwrap(), vec![0, 1]);
        assert_eq!(units_of(&m).unwrap(), FgAbelianGroup::free(1));
        // (2,0), (-3,0) generate the whole line's worth of units
        let m = aff(2, &[&[2, 0], &[-3, 0], &[1, 1]]);
        assert_eq!(unit_generators(&m).unwrap(), vec![0, 1]);
    }

    #[test]
    fn hom_counts() {
        let z2 = FgAbelianGroup::cyclic(2);
        assert_eq!(hom_count(&FgAbelianGroup::free(2), &z2).unwrap(), BigUint::from(4u32));
        assert_eq!(hom_count(&z2, &FgAbelianGroup::cyclic(4)).unwrap(), BigUint::from(2u32));
        assert_eq!(hom_count(&FgAbelianGroup::cyclic(3), &z2).unwrap(), BigUint::from(1u32));
        assert!(matches!(
            hom_count(&FgAbelianGroup::free(1), &FgAbelianGroup::free(1)),
            Err(Error::InfiniteHomSet { .. })
        ));
        assert_eq!(hom_count(&FgAbelianGroup::trivial(), &FgAbelianGroup::free(2)).unwrap(), BigUint::one());
    }

    #[test]
    fn hom_validation() {
        let z2 = FgAbelianGroup::free(2);
        assert!(validate_hom(&GroupHom::identity(&z2)).valid);
        let bad = GroupHom::new(
            FgAbelianGroup::cyclic(2),
            FgAbelianGroup::free(1),
            IntMatrix::from_rows(vec![vec![1]], 1).unwrap(),
        );
        let r = validate_hom(&bad);
        assert!(!r.valid);
        assert_eq!(r.failing_generator, Some(0));
        let good = GroupHom::new(
            FgAbelianGroup::cyclic(2),
            FgAbelianGroup::cyclic(4),
            IntMatrix::from_rows(vec![vec![2]], 1).unwrap(),
        );
        assert!(validate_hom(&good).valid);
        let shape = GroupHom::new(z2.clone(), z2, IntMatrix::identity(3));
        assert!(!validate_hom(&shape).valid);
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        for s in [
            r#"{"kind":"affine","ambient_dim":2,"generators":[[1,0],[0,1]]}"#,
            r#"{"kind":"group_with_zero","rank":1,"torsion":[2,4]}"#,
        ] {
            let m: PointedMonoid = serde_json::from_str(s).unwrap();
            assert_eq!(serde_json::to_string(&m).unwrap(), s);
        }
        assert!(serde_json::from_str::<PointedMonoid>(r#"{"kind":"affine","ambient_dim":1,"generators":[[0]]}"#).is_err());
    }
}
