//! Brute-force reference implementations, deliberately naive.

use std::collections::{BTreeMap, BTreeSet};

use hyperjet::curve::CurveJet;
use hyperjet::{GaussianRational, HermitianJet};
use num_traits::Zero;

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Integer kernel vector of an `(n-1) × n` matrix of full rank, via signed
/// maximal minors; `None` if the rows are dependent.
fn kernel(rows: &[Vec<i128>], n: usize) -> Option<Vec<i128>> {
    let mut a = vec![0i128; n];
    for (j, aj) in a.iter_mut().enumerate() {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        *aj = sign * det(minor);
    }
    a.iter().any(|&x| x != 0).then_some(a)
}

fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    // Bareiss fraction-free elimination
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0, |g, &x| gcd(g, x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn subsets(items: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..items {
        cur.push(i);
        subsets(items, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Facets `(normal, level)` and vertices of `conv(S) + ℝ₊ⁿ`: every hyperplane
/// through a support point spanned by `n − 1` independent directions from
/// point differences and unit vectors, kept when it supports the set.
pub fn hull(n: usize, points: &[Vec<u32>]) -> (BTreeSet<(Vec<i64>, i64)>, BTreeSet<Vec<u32>>) {
    let pts: Vec<Vec<i128>> = points.iter().map(|p| p.iter().map(|&x| x as i128).collect()).collect();
    let mut facets: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
    for p0 in &pts {
        let mut dirs: Vec<Vec<i128>> = pts
            .iter()
            .filter(|p| *p != p0)
            .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
            .collect();
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            dirs.push(e);
        }
        let mut choices = Vec::new();
        subsets(dirs.len(), n - 1, 0, &mut Vec::new(), &mut choices);
        for ch in choices {
            let rows: Vec<Vec<i128>> = ch.iter().map(|&i| dirs[i].clone()).collect();
            let a = if n == 1 { Some(vec![1]) } else { kernel(&rows, n) };
            let Some(mut a) = a else { continue };
            if a.iter().all(|&x| x <= 0) {
                a.iter_mut().for_each(|x| *x = -*x);
            }
            if a.iter().any(|&x| x < 0) {
                continue;
            }
            let g = a.iter().fold(0, |g, &x| gcd(g, x));
            a.iter_mut().for_each(|x| *x /= g);
            let level: i128 = a.iter().zip(p0).map(|(x, y)| x * y).sum();
            let supports = pts.iter().all(|p| a.iter().zip(p).map(|(x, y)| x * y).sum::<i128>() >= level);
            if supports {
                facets.insert((a.iter().map(|&x| x as i64).collect(), level as i64));
            }
        }
    }
    let vertices = points
        .iter()
        .zip(&pts)
        .filter(|(_, p)| {
            let tight: Vec<Vec<i128>> = facets
                .iter()
                .filter(|(a, l)| a.iter().zip(p.iter()).map(|(x, y)| *x as i128 * y).sum::<i128>() == *l as i128)
                .map(|(a, _)| a.iter().map(|&x| x as i128).collect())
                .collect();
            !tight.is_empty() && rank(&tight) == n
        })
        .map(|(p, _)| p.clone())
        .collect();
    (facets, vertices)
}

type Dense = BTreeMap<u32, GaussianRational>;

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (i, x) in a {
        for (j, y) in b {
            let e = out.entry(i + j).or_insert_with(GaussianRational::zero);
            *e += &(x * y);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `r(γ, γ̄)` by full expansion of every monomial, with no truncation;
/// keys are `(p, q)` for `tᵖ t̄^q`.
pub fn compose(r: &HermitianJet, gamma: &CurveJet) -> BTreeMap<(u32, u32), GaussianRational> {
    let comps: Vec<Dense> = gamma
        .components
        .iter()
        .map(|c| c.terms().map(|(k, v)| (k, v.clone())).collect())
        .collect();
    let one: Dense = [(0, GaussianRational::from_int(1))].into_iter().collect();
    let mut out: BTreeMap<(u32, u32), GaussianRational> = BTreeMap::new();
    for (e, c) in r.terms() {
        let mut h = one.clone();
        let mut a = one.clone();
        for (j, comp) in comps.iter().enumerate() {
            for _ in 0..e.alpha[j] {
                h = dense_mul(&h, comp);
            }
            for _ in 0..e.beta[j] {
                a = dense_mul(&a, comp);
            }
        }
        for (p, x) in &h {
            for (q, y) in &a {
                let v = out.entry((*p, *q)).or_insert_with(GaussianRational::zero);
                *v += &(&(c * x) * &y.conj());
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}
