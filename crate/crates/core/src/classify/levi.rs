//! Floating-point spot check of the Levi form at random points of `M` near
//! the origin. Evidence only: it never settles condition 8.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::DefiningFunction;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeviSample {
    pub point: Vec<(f64, f64)>,
    /// `r` at the projected point.
    pub residual: f64,
    /// Eigenvalues of the Levi form on the complex tangent space.
    pub eigenvalues: Vec<f64>,
}

impl LeviSample {
    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn eval(p: &Poly, z: &[Complex64]) -> Complex64 {
    let zb: Vec<Complex64> = z.iter().map(|v| v.conj()).collect();
    p.terms()
        .map(|(e, c)| {
            let (re, im) = c.to_f64_pair();
            let mut t = Complex64::new(re, im);
            for j in 0..z.len() {
                t *= z[j].powu(e.alpha[j]) * zb[j].powu(e.beta[j]);
            }
            t
        })
        .sum()
}

struct Derivs {
    dz: Vec<Poly>,
    dzb: Vec<Poly>,
    hess: Vec<Vec<Poly>>,
}

impl Derivs {
    fn new(r: &Poly) -> Self {
        let n = r.nvars();
        let dz: Vec<Poly> = (0..n).map(|j| r.diff_z(j)).collect();
        let dzb = (0..n).map(|j| r.diff_zbar(j)).collect();
        let hess = dz.iter().map(|d| (0..n).map(|k| d.diff_zbar(k)).collect()).collect();
        Self { dz, dzb, hess }
    }
}

/// Moves `z` onto `{r = 0}` by Newton steps along the real gradient.
fn project(r: &Poly, d: &Derivs, z: &mut [Complex64]) -> Result<f64> {
    for _ in 0..50 {
        let v = eval(r, z).re;
        if v.abs() < 1e-14 {
            return Ok(v);
        }
        let g: Vec<Complex64> = d.dzb.iter().map(|p| eval(p, z)).collect();
        let norm: f64 = g.iter().map(|c| c.norm_sqr()).sum();
        if norm < 1e-24 {
            return Err(Error::SingularPoint);
        }
        for (zj, gj) in z.iter_mut().zip(&g) {
            *zj -= gj * (v / (2.0 * norm));
        }
    }
    Ok(eval(r, z).re)
}

fn levi_eigenvalues(d: &Derivs, z: &[Complex64]) -> Result<Vec<f64>> {
    let n = z.len();
    let a: Vec<Complex64> = d.dz.iter().map(|p| eval(p, z)).collect();
    let norm: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    if norm < 1e-24 {
        return Err(Error::SingularPoint);
    }
    // tangent vectors v satisfy Σ a_j v_j = 0, i.e. v ⟂ ā
    let proj = DMatrix::from_fn(n, n, |j, k| {
        let id = if j == k { 1.0 } else { 0.0 };
        Complex64::new(id, 0.0) - a[j].conj() * a[k] / norm
    });
    let pe = SymmetricEigen::new(proj);
    let cols: Vec<usize> = (0..n).filter(|&i| pe.eigenvalues[i] > 0.5).collect();
    let basis = DMatrix::from_fn(n, cols.len(), |j, c| pe.eigenvectors[(j, cols[c])]);
    let h = DMatrix::from_fn(n, n, |j, k| eval(&d.hess[j][k], z));
    let restricted = basis.adjoint() * h * &basis;
    let restricted = (&restricted + restricted.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(restricted).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    Ok(ev)
}

/// Samples `count` points of `M` within `radius` of the origin, using the
/// stored part of the jet.
pub fn levi_spot_check(df: &DefiningFunction, count: usize, radius: f64, seed: u64) -> Result<Vec<LeviSample>> {
    let r = df.jet.poly();
    let d = Derivs::new(r);
    let n = r.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut z: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius)))
            .collect();
        let residual = project(r, &d, &mut z)?;
        let eigenvalues = levi_eigenvalues(&d, &z)?;
        out.push(LeviSample {
            point: z.iter().map(|c| (c.re, c.im)).collect(),
            residual,
            eigenvalues,
        });
    }
    Ok(out)
}
