//! Facets of `conv(S) + ℝ₊ⁿ` by the double description method.
//!
//! The polyhedron is homogenized into the cone generated by `(1, p)` for
//! `p ∈ S` and `(0, e_j)`. Its facets are the extreme rays of the dual cone
//! `{y : y·g ≥ 0 for every generator g}`, which is built one constraint at a
//! time starting from a simplicial cone.

use crate::linalg::gcd_i64;

/// An inequality `normal · ξ ≥ level` with a primitive nonnegative normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub level: i64,
}

impl Facet {
    pub fn eval(&self, p: &[u32]) -> i64 {
        self.normal.iter().zip(p).map(|(&a, &x)| a * x as i64).sum()
    }

    pub fn is_tight(&self, p: &[u32]) -> bool {
        self.eval(p) == self.level
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        self.eval(p) >= self.level
    }
}

#[derive(Clone, Debug)]
struct Ray {
    y: Vec<i128>,
    zero: Vec<bool>,
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_mul(*y).expect("hull arithmetic overflow"))
        .fold(0i128, |s, v| s.checked_add(v).expect("hull arithmetic overflow"))
}

fn normalize(y: &mut [i128]) {
    let mut g = 0i128;
    for &x in y.iter() {
        let (mut a, mut b) = (g, x.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        g = a;
    }
    if g > 1 {
        for x in y.iter_mut() {
            *x /= g;
        }
    }
}

/// Facets of the Newton polyhedron of `points` (all of dimension `n`).
///
/// `points` must be nonempty. Coordinate facets `ξ_j ≥ 0` are included when
/// they are genuine facets.
pub fn facets(points: &[Vec<u32>], n: usize) -> Vec<Facet> {
    assert!(!points.is_empty(), "hull of an empty support");
    let d = n + 1;
    // constraint rows: rays first, then points
    let mut rows: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut r = vec![0i128; d];
            r[j + 1] = 1;
            r
        })
        .collect();
    for p in points {
        let mut r = vec![1i128];
        r.extend(p.iter().map(|&x| x as i128));
        rows.push(r);
    }
    let nrows = rows.len();
    let p0 = &points[0];

    // simplicial start from the n ray rows and the first point row
    let mut rays: Vec<Ray> = Vec::new();
    {
        let mut y = vec![0i128; d];
        y[0] = 1;
        rays.push(Ray {
            y,
            zero: vec![false; nrows],
        });
        for j in 0..n {
            let mut y = vec![0i128; d];
            y[0] = -(p0[j] as i128);
            y[j + 1] = 1;
            rays.push(Ray {
                y,
                zero: vec![false; nrows],
            });
        }
    }
    let mut processed: Vec<usize> = (0..=n).collect();
    for r in rays.iter_mut() {
        for &i in &processed {
            r.zero[i] = dot(&r.y, &rows[i]) == 0;
        }
    }

    for h in (n + 1)..nrows {
        let row = &rows[h];
        let vals: Vec<i128> = rays.iter().map(|r| dot(&r.y, row)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                r.zero[h] = vals[i] == 0;
            }
            processed.push(h);
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if vals[i] >= 0 {
                let mut r = r.clone();
                r.zero[h] = vals[i] == 0;
                next.push(r);
            }
        }
        for &ip in &pos {
            for &ineg in &neg {
                let common: Vec<usize> = processed
                    .iter()
                    .copied()
                    .filter(|&k| rays[ip].zero[k] && rays[ineg].zero[k])
                    .collect();
                if common.len() + 2 < d {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(k, r)| {
                    k == ip || k == ineg || !common.iter().all(|&c| r.zero[c])
                });
                if !adjacent {
                    continue;
                }
                let (a, b) = (vals[ip], vals[ineg]);
                let mut y: Vec<i128> = rays[ineg]
                    .y
                    .iter()
                    .zip(&rays[ip].y)
                    .map(|(&yn, &yp)| a * yn - b * yp)
                    .collect();
                normalize(&mut y);
                let mut zero = vec![false; nrows];
                for &c in &common {
                    zero[c] = true;
                }
                zero[h] = true;
                next.push(Ray { y, zero });
            }
        }
        rays = next;
        processed.push(h);
    }

    let mut out: Vec<Facet> = rays
        .into_iter()
        .filter(|r| r.y[1..].iter().any(|&x| x != 0))
        .map(|r| {
            let mut normal: Vec<i64> = r.y[1..].iter().map(|&x| x as i64).collect();
            let mut level = -(r.y[0] as i64);
            let g = normal.iter().fold(0, |g, &x| gcd_i64(g, x));
            if g > 1 {
                normal.iter_mut().for_each(|x| *x /= g);
                level /= g;
            }
            Facet { normal, level }
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_facet() {
        let f = facets(&[vec![6, 0], vec![3, 2], vec![0, 4]], 2);
        assert!(f.contains(&Facet {
            normal: vec![2, 3],
            level: 12
        }));
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn half_line() {
        let f = facets(&[vec![2]], 1);
        assert_eq!(
            f,
            vec![Facet {
                normal: vec![1],
                level: 2
            }]
        );
    }

    #[test]
    fn slab() {
        let f = facets(&[vec![0, 1], vec![1, 2]], 2);
        assert_eq!(
            f,
            vec![
                Facet {
                    normal: vec![0, 1],
                    level: 1
                },
                Facet {
                    normal: vec![1, 0],
                    level: 0
                }
            ]
        );
    }
}
