//! Search for common torus zeros of a grouped system.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GroupedSystem;
use crate::gaussian::{rat, GaussianRational, Rational};
use crate::poly::Poly;

/// Limits for the witness search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub grid_limit: usize,
    pub random_samples: usize,
    pub newton_starts: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            grid_limit: 20_000,
            random_samples: 2_000,
            newton_starts: 64,
            seed: 0,
        }
    }
}

impl SearchBudget {
    /// Budget scaled by a single integer knob (the CLI `--budget`).
    pub fn with_level(level: usize, seed: u64) -> Self {
        Self {
            grid_limit: 20_000,
            random_samples: level.saturating_mul(20),
            newton_starts: level.max(1),
            seed,
        }
    }
}

pub enum SearchOutcome {
    Exact(Vec<GaussianRational>),
    /// Numerically converged point that did not rationalize exactly.
    Candidate(Vec<(f64, f64)>),
    Nothing,
}

fn grid_values() -> Vec<GaussianRational> {
    let g = |re: Rational, im: Rational| GaussianRational::new(re, im);
    let z = Rational::zero;
    vec![
        g(rat(1, 1), z()),
        g(rat(-1, 1), z()),
        g(rat(2, 1), z()),
        g(rat(-2, 1), z()),
        g(rat(1, 2), z()),
        g(rat(-1, 2), z()),
        g(z(), rat(1, 1)),
        g(z(), rat(-1, 1)),
        g(rat(1, 1), rat(1, 1)),
        g(rat(1, 1), rat(-1, 1)),
        g(rat(-1, 1), rat(1, 1)),
        g(rat(-1, 1), rat(-1, 1)),
    ]
}

fn is_common_zero(sys: &GroupedSystem, c: &[GaussianRational]) -> bool {
    sys.groups.values().all(|g| g.eval(c).is_zero())
}

fn eval_c64(p: &Poly, c: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::zero();
    for (e, k) in p.terms() {
        let mut t = k.to_complex();
        for (j, cj) in c.iter().enumerate() {
            if e.alpha[j] > 0 {
                t *= cj.powu(e.alpha[j]);
            }
            if e.beta[j] > 0 {
                t *= cj.conj().powu(e.beta[j]);
            }
        }
        acc += t;
    }
    acc
}

/// Best rational approximation with denominator at most `max_den`.
pub fn approx_rational(x: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    (k1 != 0).then(|| rat(h1, k1))
}

struct Numeric<'a> {
    sys: &'a GroupedSystem,
    active: &'a [usize],
    eqs: Vec<(&'a Poly, bool)>,
    dz: Vec<Vec<Poly>>,
    dzb: Vec<Vec<Poly>>,
}

impl<'a> Numeric<'a> {
    fn new(sys: &'a GroupedSystem, active: &'a [usize]) -> Self {
        // groups come in conjugate pairs; keep p ≥ q
        let eqs: Vec<(&Poly, bool)> = sys
            .groups
            .iter()
            .filter(|((p, q), _)| p >= q)
            .map(|((p, q), g)| (g, p == q))
            .collect();
        let dz = eqs
            .iter()
            .map(|(g, _)| active.iter().map(|&j| g.diff_z(j)).collect())
            .collect();
        let dzb = eqs
            .iter()
            .map(|(g, _)| active.iter().map(|&j| g.diff_zbar(j)).collect())
            .collect();
        Self {
            sys,
            active,
            eqs,
            dz,
            dzb,
        }
    }

    fn point(&self, x: &DVector<f64>) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(1.0, 0.0); self.sys.nvars];
        for (i, &j) in self.active.iter().enumerate() {
            c[j] = Complex64::new(x[2 * i], x[2 * i + 1]);
        }
        c
    }

    fn residual(&self, c: &[Complex64]) -> DVector<f64> {
        let mut r = Vec::new();
        for (g, real) in &self.eqs {
            let v = eval_c64(g, c);
            r.push(v.re);
            if !real {
                r.push(v.im);
            }
        }
        DVector::from_vec(r)
    }

    fn jacobian(&self, c: &[Complex64]) -> DMatrix<f64> {
        let nrows: usize = self.eqs.iter().map(|(_, real)| if *real { 1 } else { 2 }).sum();
        let mut m = DMatrix::zeros(nrows, 2 * self.active.len());
        let mut row = 0;
        for (k, (_, real)) in self.eqs.iter().enumerate() {
            for i in 0..self.active.len() {
                let a = eval_c64(&self.dz[k][i], c);
                let b = eval_c64(&self.dzb[k][i], c);
                let dx = a + b;
                let dy = Complex64::i() * (a - b);
                m[(row, 2 * i)] = dx.re;
                m[(row, 2 * i + 1)] = dy.re;
                if !real {
                    m[(row + 1, 2 * i)] = dx.im;
                    m[(row + 1, 2 * i + 1)] = dy.im;
                }
            }
            row += if *real { 1 } else { 2 };
        }
        m
    }

    /// Damped Gauss-Newton from `x`; returns a converged torus point.
    fn solve(&self, mut x: DVector<f64>) -> Option<DVector<f64>> {
        let mut r = self.residual(&self.point(&x));
        for _ in 0..200 {
            let norm = r.norm();
            if norm < 1e-13 {
                break;
            }
            let j = self.jacobian(&self.point(&x));
            let step = j.svd(true, true).solve(&(-&r), 1e-12).ok()?;
            let mut lambda = 1.0;
            let mut improved = false;
            for _ in 0..30 {
                let trial = &x + &step * lambda;
                let rt = self.residual(&self.point(&trial));
                if rt.norm() < norm {
                    x = trial;
                    r = rt;
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !improved {
                break;
            }
        }
        let c = self.point(&x);
        let scale = c.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let tiny = c.iter().any(|z| z.norm() < 1e-6 * scale);
        (r.norm() < 1e-10 && !tiny).then_some(x)
    }
}

fn rationalize(x: &DVector<f64>, active: &[usize], n: usize) -> Option<Vec<GaussianRational>> {
    let mut c = vec![GaussianRational::from_int(1); n];
    for (i, &j) in active.iter().enumerate() {
        c[j] = GaussianRational::new(
            approx_rational(x[2 * i], 1000)?,
            approx_rational(x[2 * i + 1], 1000)?,
        );
        if c[j].is_zero() {
            return None;
        }
    }
    Some(c)
}

fn random_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    loop {
        let re = rat(rng.gen_range(-4..=4), rng.gen_range(1..=4));
        let im = rat(rng.gen_range(-4..=4), rng.gen_range(1..=4));
        let g = GaussianRational::new(re, im);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Looks for `c ∈ (ℂ*)ⁿ` with every group vanishing. Coordinates outside
/// `active` are fixed to 1.
pub fn find_zero(sys: &GroupedSystem, active: &[usize], budget: &SearchBudget) -> SearchOutcome {
    let n = sys.nvars;
    let values = grid_values();
    let mut c = vec![GaussianRational::from_int(1); n];
    if active.is_empty() {
        return if is_common_zero(sys, &c) {
            SearchOutcome::Exact(c)
        } else {
            SearchOutcome::Nothing
        };
    }

    // rational grid, odometer order starting from all ones
    let mut idx = vec![0usize; active.len()];
    let mut visited = 0;
    loop {
        for (i, &j) in active.iter().enumerate() {
            c[j] = values[idx[i]].clone();
        }
        if is_common_zero(sys, &c) {
            return SearchOutcome::Exact(c);
        }
        visited += 1;
        if visited >= budget.grid_limit {
            break;
        }
        let mut pos = 0;
        while pos < idx.len() {
            idx[pos] += 1;
            if idx[pos] < values.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == idx.len() {
            break;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.random_samples {
        for &j in active {
            c[j] = random_gaussian(&mut rng);
        }
        if is_common_zero(sys, &c) {
            return SearchOutcome::Exact(c);
        }
    }

    let numeric = Numeric::new(sys, active);
    let mut candidate = None;
    for _ in 0..budget.newton_starts {
        let x0 = DVector::from_fn(2 * active.len(), |_, _| rng.gen_range(-2.0..2.0));
        let Some(x) = numeric.solve(x0) else {
            continue;
        };
        if let Some(c) = rationalize(&x, active, n) {
            if is_common_zero(sys, &c) {
                return SearchOutcome::Exact(c);
            }
        }
        if candidate.is_none() {
            let pt = numeric.point(&x);
            candidate = Some(pt.iter().map(|z| (z.re, z.im)).collect());
        }
    }
    match candidate {
        Some(c) => SearchOutcome::Candidate(c),
        None => SearchOutcome::Nothing,
    }
}
