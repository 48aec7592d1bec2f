//! Independent enumeration oracles over prime fields `F_q`.

use std::collections::HashSet;

use num_bigint::BigInt;
use serde::Serialize;

use super::poly::{serialize_bigint, IntPolynomial};
use crate::error::{Error, Result};
use crate::monoid::PointedMonoid;
use crate::scale;

/// Largest number of candidate objects a single oracle run may enumerate.
const ENUMERATION_CAP: u64 = 1 << 22;

/// Coordinate bound for relation vectors among monoid generators.
const RELATION_BOX: i64 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteKind {
    /// `k`-dimensional subspaces of `F_q^n`.
    Subspaces { k: usize, n: usize },
    /// Invertible `n × n` matrices.
    Gl { n: usize },
    /// Invertible block upper triangular matrices with the given block sizes.
    BlockTriangular { composition: Vec<usize> },
    /// Monoid homomorphisms `M -> (F_q, ·)`.
    MonoidHoms(PointedMonoid),
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn check_size(what: &str, q: u64, exponent: usize) -> Result<()> {
    let total = (q as u128).checked_pow(exponent as u32).unwrap_or(u128::MAX);
    if total > ENUMERATION_CAP as u128 {
        return Err(Error::OutOfScale {
            what: format!("{what} enumeration size"),
            value: total.min(u64::MAX as u128) as u64,
            max: ENUMERATION_CAP,
        });
    }
    Ok(())
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// Calls `f` on every vector in `{0..q}^len`.
fn for_each_vector(len: usize, q: u64, mut f: impl FnMut(&[u64])) {
    let mut v = vec![0u64; len];
    loop {
        f(&v);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            v[i] += 1;
            if v[i] < q {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Row-reduces a `rows × cols` matrix over `F_q` in place; returns the rank.
fn rref_mod(m: &mut [u64], rows: usize, cols: usize, q: u64) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            m.swap(r * cols + j, p * cols + j);
        }
        let inv = inv_mod(m[r * cols + c], q);
        for j in 0..cols {
            m[r * cols + j] = m[r * cols + j] * inv % q;
        }
        for i in 0..rows {
            let f = m[i * cols + c];
            if i != r && f != 0 {
                for j in 0..cols {
                    m[i * cols + j] = (m[i * cols + j] + q * q - f * m[r * cols + j] % q) % q;
                }
            }
        }
        r += 1;
    }
    r
}

fn count_subspaces(k: usize, n: usize, q: u64) -> Result<u64> {
    scale::check("subspace ambient dimension", n as u64, 5)?;
    if k > n {
        return Ok(0);
    }
    check_size("subspace", q, k * n)?;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for_each_vector(k * n, q, |v| {
        let mut m = v.to_vec();
        if rref_mod(&mut m, k, n, q) == k {
            seen.insert(m);
        }
    });
    Ok(seen.len() as u64)
}

fn count_invertible(n: usize, q: u64, allowed: impl Fn(usize, usize) -> bool) -> Result<u64> {
    let free: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| allowed(i, j)).collect();
    check_size("matrix", q, free.len())?;
    let mut count = 0;
    let mut m = vec![0u64; n * n];
    for_each_vector(free.len(), q, |v| {
        m.iter_mut().for_each(|x| *x = 0);
        for (&(i, j), &x) in free.iter().zip(v) {
            m[i * n + j] = x;
        }
        if rref_mod(&mut m, n, n, q) == n {
            count += 1;
        }
    });
    Ok(count)
}

/// Integer relations `c` (nonzero, coordinates in `[-B, B]`) with
/// `Σ c_i g_i = 0`.
fn generator_relations(generators: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let n = generators.len();
    let mut out = Vec::new();
    let mut c = vec![-RELATION_BOX; n];
    if n == 0 {
        return out;
    }
    loop {
        if c.iter().any(|&x| x != 0)
            && (0..dim).all(|d| c.iter().zip(generators).map(|(ci, g)| ci * g[d]).sum::<i64>() == 0)
        {
            out.push(c.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            c[i] += 1;
            if c[i] <= RELATION_BOX {
                break;
            }
            c[i] = -RELATION_BOX;
            i += 1;
        }
    }
}

fn count_monoid_homs(m: &PointedMonoid, q: u64) -> Result<u64> {
    match m {
        PointedMonoid::Affine { ambient_dim, generators } => {
            scale::check("monoid oracle generator count", generators.len() as u64, 5)?;
            check_size("monoid hom", q, generators.len())?;
            let relations = generator_relations(generators, *ambient_dim);
            let mut count = 0;
            for_each_vector(generators.len(), q, |x| {
                let ok = relations.iter().all(|c| {
                    let side = |sign: i64| {
                        c.iter().zip(x).fold(1 % q, |acc, (&ci, &xi)| {
                            if ci * sign > 0 {
                                acc * pow_mod(xi, (ci * sign) as u64, q) % q
                            } else {
                                acc
                            }
                        })
                    };
                    side(1) == side(-1)
                });
                if ok {
                    count += 1;
                }
            });
            Ok(count)
        }
        PointedMonoid::GroupWithZero { group } => {
            let gens = group.num_generators();
            check_size("group hom", q, gens)?;
            let orders: Vec<Option<u64>> =
                (0..group.rank()).map(|_| None).chain(group.torsion().iter().map(|&t| Some(t))).collect();
            let mut count = 0;
            for_each_vector(gens, q - 1, |v| {
                // images are the nonzero residues v_i + 1
                if orders.iter().zip(v).all(|(o, &x)| o.is_none_or(|t| pow_mod(x + 1, t, q) == 1)) {
                    count += 1;
                }
            });
            Ok(count)
        }
    }
}

/// Counts objects over `F_q` by direct enumeration.
pub fn brute_count(kind: &BruteKind, q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    scale::check("oracle field size q", q, 5)?;
    match kind {
        &BruteKind::Subspaces { k, n } => count_subspaces(k, n, q),
        &BruteKind::Gl { n } => {
            scale::check("matrix size", n as u64, 4)?;
            count_invertible(n, q, |_, _| true)
        }
        BruteKind::BlockTriangular { composition } => {
            let n: usize = composition.iter().sum();
            scale::check("matrix size", n as u64, 4)?;
            let block: Vec<usize> =
                composition.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat_n(b, k)).collect();
            count_invertible(n, q, |i, j| block[i] <= block[j])
        }
        BruteKind::MonoidHoms(m) => count_monoid_homs(m, q),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareRow {
    pub q: u64,
    #[serde(serialize_with = "serialize_bigint")]
    pub polynomial: BigInt,
    pub oracle: u64,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub pass: bool,
    pub rows: Vec<CompareRow>,
}

/// Evaluates `poly` at each `q` and compares with the enumeration oracle.
pub fn compare_counts(poly: &IntPolynomial, kind: &BruteKind, qs: &[u64]) -> Result<CompareReport> {
    let rows = qs
        .iter()
        .map(|&q| {
            let oracle = brute_count(kind, q)?;
            let polynomial = poly.eval(&BigInt::from(q));
            Ok(CompareRow { q, equal: polynomial == BigInt::from(oracle), polynomial, oracle })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompareReport { pass: rows.iter().all(|r| r.equal), rows })
}
