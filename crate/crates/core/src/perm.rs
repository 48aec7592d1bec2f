//! Permutations of `{0, ..., n-1}` in one-line notation.

use crate::label::Label;

/// All permutations of `n` letters in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// `(a ∘ b)(i) = a(b(i))`
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &ai) in a.iter().enumerate() {
        inv[ai] = i;
    }
    inv
}

/// Coxeter length in type A: the number of inversions.
pub fn length(a: &[usize]) -> usize {
    (0..a.len()).flat_map(|i| (i + 1..a.len()).map(move |j| (i, j))).filter(|&(i, j)| a[i] > a[j]).count()
}

/// Sorted image of a subset.
pub fn image(a: &[usize], subset: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = subset.iter().map(|&i| a[i]).collect();
    v.sort_unstable();
    v
}

/// Position of `a` in [`all_perms`] order.
pub fn all_perms_index(a: &[usize]) -> usize {
    let n = a.len();
    let mut idx = 0;
    for i in 0..n {
        let smaller = a[i + 1..].iter().filter(|&&x| x < a[i]).count();
        idx = idx * (n - i) + smaller;
    }
    idx
}

/// 1-based one-line label.
pub fn label(a: &[usize]) -> Label {
    Label::seq(a.iter().map(|&i| i + 1))
}

/// Inverse of [`label`].
pub fn from_label(l: &Label) -> Option<Vec<usize>> {
    match l {
        Label::Seq(v) => {
            let p: Vec<usize> = v.iter().map(|&x| usize::try_from(x - 1).ok()).collect::<Option<_>>()?;
            let mut seen = vec![false; p.len()];
            for &x in &p {
                if x >= p.len() || std::mem::replace(&mut seen[x], true) {
                    return None;
                }
            }
            Some(p)
        }
        _ => None,
    }
}
