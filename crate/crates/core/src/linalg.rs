//! Exact rational linear algebra: rank, kernels and Fourier–Motzkin
//! feasibility for systems `a·y >= b`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn to_rational(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= p * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over Q of the given integer vectors.
pub fn rank(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m = to_rational(vectors);
    rref(&mut m).len()
}

/// Integer basis (as columns, each a vector of length `dim`) of the rational
/// kernel `{ y : v·y = 0 for all v in rows }`.
pub fn integer_kernel(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
    }
    let mut m = to_rational(rows);
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); dim];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// One inequality `coeffs · y >= rhs` with integer data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Inequality {
    pub coeffs: Vec<BigInt>,
    pub rhs: BigInt,
}

impl Inequality {
    fn normalized(mut self) -> Self {
        let g = self.coeffs.iter().chain(std::iter::once(&self.rhs)).fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &g;
            }
            self.rhs = &self.rhs / &g;
        }
        self
    }
}

/// Decides whether `{ y in Q^n : a·y >= b for all rows }` is nonempty by
/// Fourier–Motzkin elimination.
pub fn fm_feasible(system: Vec<Inequality>) -> bool {
    let Some(n) = system.first().map(|r| r.coeffs.len()) else {
        return true;
    };
    let mut rows: BTreeSet<Inequality> = system.into_iter().map(Inequality::normalized).collect();
    for k in 0..n {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = BTreeSet::new();
        for row in rows {
            if row.coeffs[k].is_positive() {
                pos.push(row);
            } else if row.coeffs[k].is_negative() {
                neg.push(row);
            } else {
                next.insert(row);
            }
        }
        for p in &pos {
            for q in &neg {
                let a = &p.coeffs[k];
                let b = -&q.coeffs[k];
                let coeffs = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| x * &b + y * a).collect();
                let rhs = &p.rhs * &b + &q.rhs * a;
                next.insert(Inequality { coeffs, rhs }.normalized());
            }
        }
        rows = next;
        if rows.iter().any(|r| r.coeffs.iter().all(Zero::is_zero) && r.rhs.is_positive()) {
            return false;
        }
    }
    !rows.iter().any(|r| r.rhs.is_positive())
}

/// Whether some rational functional `phi` satisfies `phi·g = 0` for `g` in
/// `zero` and `phi·g >= 1` for `g` in `positive`.
pub fn separating_functional_exists(zero: &[Vec<i64>], positive: &[Vec<i64>], dim: usize) -> bool {
    if positive.is_empty() {
        return true;
    }
    let basis = integer_kernel(zero, dim);
    if basis.is_empty() {
        return false;
    }
    let system = positive
        .iter()
        .map(|g| Inequality {
            coeffs: basis
                .iter()
                .map(|b| b.iter().zip(g).map(|(x, &y)| x * BigInt::from(y)).sum())
                .collect(),
            rhs: BigInt::one(),
        })
        .collect();
    fm_feasible(system)
}

/// Whether some functional is `>= 0` on every vector of `nonneg` and `>= 1`
/// on `target`. By Farkas this fails exactly when `-target` lies in the
/// rational cone spanned by `nonneg`.
pub fn weakly_separable(nonneg: &[Vec<i64>], target: &[i64]) -> bool {
    let row = |g: &[i64], rhs: i64| Inequality {
        coeffs: g.iter().map(|&x| BigInt::from(x)).collect(),
        rhs: BigInt::from(rhs),
    };
    let mut system: Vec<Inequality> = nonneg.iter().map(|g| row(g, 0)).collect();
    system.push(row(target, 1));
    fm_feasible(system)
}
