//! Sparse polynomials in `z` and `z̄` with Gaussian rational coefficients.
//!
//! [`Poly`] is the general (not necessarily real) ring used while parsing and
//! while grouping face parts; [`crate::jet::HermitianJet`] wraps it with the
//! reality invariant and a truncation order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianRational, Rational};

/// Exponents of `z^α z̄^β`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExponentPair {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl ExponentPair {
    pub fn new(alpha: Vec<u32>, beta: Vec<u32>) -> Self {
        Self { alpha, beta }
    }

    pub fn constant(n: usize) -> Self {
        Self::new(vec![0; n], vec![0; n])
    }

    pub fn holomorphic(alpha: Vec<u32>) -> Self {
        let n = alpha.len();
        Self::new(alpha, vec![0; n])
    }

    pub fn nvars(&self) -> usize {
        self.alpha.len()
    }

    pub fn degree(&self) -> u32 {
        self.alpha.iter().chain(&self.beta).sum()
    }

    /// `α + β`, the point of the Newton support.
    pub fn support_point(&self) -> Vec<u32> {
        self.alpha.iter().zip(&self.beta).map(|(a, b)| a + b).collect()
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.beta.clone(), self.alpha.clone())
    }

    /// Pure: `α = 0` or `β = 0`.
    pub fn is_pure(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0) || self.beta.iter().all(|&b| b == 0)
    }

    pub fn is_holomorphic(&self) -> bool {
        self.beta.iter().all(|&b| b == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect(),
            self.beta.iter().zip(&other.beta).map(|(a, b)| a + b).collect(),
        )
    }

    /// Total `z`-degree and `z̄`-degree after substituting `z_j = c_j t^{a_j}`.
    pub fn weighted_degrees(&self, weight: &[i64]) -> (i64, i64) {
        let p = self.alpha.iter().zip(weight).map(|(&e, &w)| e as i64 * w).sum();
        let q = self.beta.iter().zip(weight).map(|(&e, &w)| e as i64 * w).sum();
        (p, q)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<ExponentPair, GaussianRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ExponentPair::constant(nvars), c);
        p
    }

    /// The coordinate `z_j` (0-based).
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut alpha = vec![0; nvars];
        alpha[j] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(ExponentPair::holomorphic(alpha), GaussianRational::one());
        p
    }

    pub fn monomial(exp: ExponentPair, c: GaussianRational) -> Self {
        let mut p = Self::zero(exp.nvars());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (ExponentPair, GaussianRational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.alpha.len() != nvars || e.beta.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.alpha.len().max(e.beta.len()),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentPair, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentPair) -> GaussianRational {
        self.terms.get(e).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn add_term(&mut self, e: ExponentPair, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        self.map_coeffs(|c| c * s)
    }

    fn map_coeffs(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_bounded(other, None)
    }

    /// Product keeping only terms of total degree `<= bound`.
    pub fn mul_bounded(&self, other: &Self, bound: Option<u32>) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                if let Some(b) = bound {
                    if e1.degree() + e2.degree() > b {
                        continue;
                    }
                }
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, GaussianRational::one());
        for _ in 0..k {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    /// Complex conjugate: swaps `α`/`β` and conjugates coefficients.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.swapped(), c.conj());
        }
        out
    }

    /// `Re(p) = (p + p̄) / 2`.
    pub fn real_part(&self) -> Self {
        let half = GaussianRational::from_rational(crate::gaussian::rat(1, 2));
        self.add(&self.conj()).expect("same dimension").scale(&half)
    }

    /// `Im(p) = (p - p̄) / (2i)`.
    pub fn imag_part(&self) -> Self {
        let s = GaussianRational::new(Rational::zero(), crate::gaussian::rat(-1, 2));
        self.sub(&self.conj()).expect("same dimension").scale(&s)
    }

    /// First term violating `C_{βα} = conj(C_{αβ})`, if any.
    pub fn hermitian_violation(&self) -> Option<ExponentPair> {
        self.terms
            .iter()
            .find(|(e, c)| self.coeff(&e.swapped()) != c.conj())
            .map(|(e, _)| e.clone())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_violation().is_none()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentPair::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentPair::degree).min()
    }

    pub fn truncated(&self, bound: u32) -> Self {
        self.filtered(|e| e.degree() <= bound)
    }

    pub fn filtered(&self, keep: impl Fn(&ExponentPair) -> bool) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if keep(e) {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn eval(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars, "evaluation point dimension");
        let conj: Vec<GaussianRational> = point.iter().map(GaussianRational::conj).collect();
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for j in 0..self.nvars {
                if e.alpha[j] > 0 {
                    term = &term * &point[j].pow(e.alpha[j]);
                }
                if e.beta[j] > 0 {
                    term = &term * &conj[j].pow(e.beta[j]);
                }
            }
            acc += &term;
        }
        acc
    }

    /// `∂/∂z_j`.
    pub fn diff_z(&self, j: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.alpha[j] > 0 {
                let mut d = e.clone();
                d.alpha[j] -= 1;
                out.add_term(d, c.scale(&crate::gaussian::rat_int(e.alpha[j] as i64)));
            }
        }
        out
    }

    /// `∂/∂z̄_j`.
    pub fn diff_zbar(&self, j: usize) -> Self {
        self.conj().diff_z(j).conj()
    }

    /// Drops variable `j` by restricting to `z_j = 0`.
    pub fn restrict_zero(&self, j: usize) -> Self {
        self.filtered(|e| e.alpha[j] == 0 && e.beta[j] == 0)
    }

    /// Keeps the first `k` variables only; every term must avoid the rest.
    pub fn project_vars(&self, k: usize) -> Self {
        let mut out = Self::zero(k);
        for (e, c) in &self.terms {
            debug_assert!(e.alpha[k..].iter().chain(&e.beta[k..]).all(|&x| x == 0));
            out.add_term(
                ExponentPair::new(e.alpha[..k].to_vec(), e.beta[..k].to_vec()),
                c.clone(),
            );
        }
        out
    }

    /// Embeds into `nvars` variables by appending unused ones.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut a = e.alpha.clone();
            let mut b = e.beta.clone();
            a.resize(nvars, 0);
            b.resize(nvars, 0);
            out.add_term(ExponentPair::new(a, b), c.clone());
        }
        out
    }

    /// Formats with variable names; `conj(x)` denotes `x̄`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let mut factors = Vec::new();
            for (j, name) in names.iter().enumerate().take(self.nvars) {
                push_power(&mut factors, name, e.alpha[j]);
                push_power(&mut factors, &format!("conj({name})"), e.beta[j]);
            }
            let coeff = c.to_string();
            let coeff = if c.re.is_zero() || c.im.is_zero() {
                // keep a leading minus parseable as a unary sign on its own term
                if coeff.starts_with('-') {
                    format!("({coeff})")
                } else {
                    coeff
                }
            } else {
                coeff
            };
            if factors.is_empty() {
                out.push_str(&coeff);
            } else if c.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

fn push_power(factors: &mut Vec<String>, name: &str, e: u32) {
    match e {
        0 => {}
        1 => factors.push(name.to_string()),
        _ => factors.push(format!("{name}^{e}")),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|j| format!("z{j}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

/// A polynomial in `z` only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HoloPoly {
    poly: Poly,
    pub truncation: Option<u32>,
}

impl HoloPoly {
    pub fn new(poly: Poly, truncation: Option<u32>) -> Result<Self> {
        if let Some((e, _)) = poly.terms().find(|(e, _)| !e.is_holomorphic()) {
            return Err(Error::NonRealInput {
                slot: format!("{:?}", e),
            });
        }
        Ok(Self { poly, truncation })
    }

    pub fn from_coeffs(
        nvars: usize,
        coeffs: impl IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    ) -> Result<Self> {
        let poly = Poly::from_terms(
            nvars,
            coeffs.into_iter().map(|(a, c)| (ExponentPair::holomorphic(a), c)),
        )?;
        Self::new(poly, None)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussianRational)> {
        self.poly.terms().map(|(e, c)| (&e.alpha, c))
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}
