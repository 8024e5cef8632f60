//! Newton polyhedra `𝒩₊(F) = conv(⋃ (α+β) + ℝ₊ⁿ)` and their compact faces.

mod hull;

use std::collections::{BTreeSet, HashSet};

pub use hull::{facets, Facet};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{HermitianJet, Tail};
use crate::linalg::{gcd_i64, rank};

/// The points `α + β` of the nonzero Taylor coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    pub nvars: usize,
    pub points: BTreeSet<Vec<u32>>,
}

impl SupportSet {
    pub fn new(nvars: usize, points: impl IntoIterator<Item = Vec<u32>>) -> Self {
        Self {
            nvars,
            points: points.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn support(f: &HermitianJet) -> SupportSet {
    SupportSet::new(f.nvars(), f.terms().map(|(e, _)| e.support_point()))
}

/// A compact face of a Newton polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: String,
    pub dim: usize,
    pub vertices: Vec<Vec<u32>>,
    /// All support points lying on the face, sorted.
    pub support_points: Vec<Vec<u32>>,
    /// Facets containing the face; their normals generate the weights that
    /// determine it (strictly positive combinations).
    pub generators: Vec<Facet>,
    /// Canonical determining weight: the sum of the generator normals,
    /// reduced to a primitive vector. Every entry is at least one.
    pub weight: Vec<i64>,
    /// `weight · ξ` on the face.
    pub level: i64,
}

impl Face {
    pub fn contains_point(&self, p: &[u32]) -> bool {
        self.generators.iter().all(|f| f.is_tight(p))
    }

    /// Some strictly positive integer combinations of the generators, used to
    /// exercise representative independence.
    pub fn sample_weights(&self) -> Vec<Vec<i64>> {
        let mut out = vec![self.weight.clone()];
        for g in &self.generators {
            let w: Vec<i64> = self
                .weight
                .iter()
                .zip(&g.normal)
                .map(|(a, b)| a + b)
                .collect();
            out.push(w);
        }
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolyhedron {
    pub nvars: usize,
    pub points: Vec<Vec<u32>>,
    pub vertices: Vec<Vec<u32>>,
    pub facets: Vec<Facet>,
    pub compact_faces: Vec<Face>,
}

impl NewtonPolyhedron {
    pub fn face(&self, id: &str) -> Option<&Face> {
        self.compact_faces.iter().find(|f| f.id == id)
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        self.facets.iter().all(|f| f.contains(p))
    }

    /// Compact facets, i.e. compact faces of dimension `n - 1`.
    pub fn compact_facets(&self) -> impl Iterator<Item = &Face> {
        self.compact_faces.iter().filter(move |f| f.dim + 1 == self.nvars)
    }

    /// Does `weight` determine `face`: all entries `≥ 1` and the minimum of
    /// `weight · ξ` over the polyhedron is attained exactly on the face?
    pub fn determines(&self, weight: &[i64], face: &Face) -> bool {
        if weight.len() != self.nvars || weight.iter().any(|&a| a < 1) {
            return false;
        }
        let val = |p: &[u32]| -> i64 { weight.iter().zip(p).map(|(&a, &x)| a * x as i64).sum() };
        let min = self.vertices.iter().map(|v| val(v)).min().expect("nonempty");
        let argmin: BTreeSet<&Vec<u32>> =
            self.vertices.iter().filter(|v| val(v) == min).collect();
        argmin == face.vertices.iter().collect()
    }
}

/// Builds `𝒩₊` of a support set. Errors on an empty support (flat jet).
pub fn hull(s: &SupportSet) -> Result<NewtonPolyhedron> {
    if s.is_empty() {
        return Err(Error::EmptySupport);
    }
    let n = s.nvars;
    let points: Vec<Vec<u32>> = s.points.iter().cloned().collect();
    let facets = facets(&points, n);

    let tight_normals = |p: &[u32]| -> Vec<Vec<i64>> {
        facets
            .iter()
            .filter(|f| f.is_tight(p))
            .map(|f| f.normal.clone())
            .collect()
    };
    let vertices: Vec<Vec<u32>> = points
        .iter()
        .filter(|p| rank(&tight_normals(p)) == n)
        .cloned()
        .collect();

    // incidence sets over points and rays; ray j is tight iff normal_j = 0
    let incidence = |f: &Facet| -> (BTreeSet<usize>, bool) {
        let pts = (0..points.len())
            .filter(|&i| f.is_tight(&points[i]))
            .collect();
        let has_ray = f.normal.contains(&0);
        (pts, has_ray)
    };
    // a face = intersection of facet sets; represent by the set of facet indices
    // tight on all its points, closing under pairwise intersection
    let mut faces: HashSet<BTreeSet<usize>> = HashSet::new();
    let mut frontier: Vec<BTreeSet<usize>> = Vec::new();
    let facet_pts: Vec<BTreeSet<usize>> = facets.iter().map(|f| incidence(f).0).collect();
    for fp in &facet_pts {
        if !fp.is_empty() && faces.insert(fp.clone()) {
            frontier.push(fp.clone());
        }
    }
    while let Some(cur) = frontier.pop() {
        for fp in &facet_pts {
            let inter: BTreeSet<usize> = cur.intersection(fp).copied().collect();
            if !inter.is_empty() && faces.insert(inter.clone()) {
                frontier.push(inter);
            }
        }
    }

    let mut compact: Vec<Face> = Vec::new();
    for pts in faces {
        let gens: Vec<Facet> = facets
            .iter()
            .filter(|f| pts.iter().all(|&i| f.is_tight(&points[i])))
            .cloned()
            .collect();
        // compact iff every coordinate direction is blocked by some generator
        let bounded = (0..n).all(|j| gens.iter().any(|g| g.normal[j] > 0));
        if !bounded {
            continue;
        }
        let support_points: Vec<Vec<u32>> = pts.iter().map(|&i| points[i].clone()).collect();
        let face_vertices: Vec<Vec<u32>> = support_points
            .iter()
            .filter(|p| vertices.contains(p))
            .cloned()
            .collect();
        let diffs: Vec<Vec<i64>> = face_vertices
            .iter()
            .skip(1)
            .map(|v| {
                v.iter()
                    .zip(&face_vertices[0])
                    .map(|(&a, &b)| a as i64 - b as i64)
                    .collect()
            })
            .collect();
        let dim = rank(&diffs);
        let mut weight = vec![0i64; n];
        for g in &gens {
            for (w, a) in weight.iter_mut().zip(&g.normal) {
                *w += a;
            }
        }
        let gw = weight.iter().fold(0, |g, &x| gcd_i64(g, x));
        if gw > 1 {
            weight.iter_mut().for_each(|x| *x /= gw);
        }
        let level = weight
            .iter()
            .zip(&face_vertices[0])
            .map(|(&a, &x)| a * x as i64)
            .sum();
        compact.push(Face {
            id: String::new(),
            dim,
            vertices: face_vertices,
            support_points,
            generators: gens,
            weight,
            level,
        });
    }
    compact.sort_by(|a, b| (a.dim, &a.support_points).cmp(&(b.dim, &b.support_points)));
    for (i, f) in compact.iter_mut().enumerate() {
        f.id = format!("F{i}");
    }
    Ok(NewtonPolyhedron {
        nvars: n,
        points,
        vertices,
        facets,
        compact_faces: compact,
    })
}

pub fn newton_polyhedron(f: &HermitianJet) -> Result<NewtonPolyhedron> {
    hull(&support(f))
}

/// Intercept of the diagram with the `ξ_k` axis, if the support meets it.
fn axis_intercept(s: &SupportSet, k: usize) -> Option<u32> {
    s.points
        .iter()
        .filter(|p| p.iter().enumerate().all(|(j, &x)| j == k || x == 0))
        .map(|p| p[k])
        .min()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convenience {
    pub convenient: bool,
    /// 1-based axes the polyhedron misses.
    pub missing_axes: Vec<usize>,
}

pub fn is_convenient(f: &HermitianJet) -> Convenience {
    let s = support(f);
    let missing_axes: Vec<usize> = (0..f.nvars())
        .filter(|&k| axis_intercept(&s, k).is_none())
        .map(|k| k + 1)
        .collect();
    Convenience {
        convenient: missing_axes.is_empty(),
        missing_axes,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rho1 {
    Finite(u32),
    Infinite { flat: bool },
}

impl Rho1 {
    pub fn finite(self) -> Option<u32> {
        match self {
            Rho1::Finite(v) => Some(v),
            Rho1::Infinite { .. } => None,
        }
    }
}

/// Axis intercepts `ρ_j` (1-based order), `None` where the axis is missed.
pub fn intercepts(f: &HermitianJet) -> Vec<Option<u32>> {
    let s = support(f);
    (0..f.nvars()).map(|k| axis_intercept(&s, k)).collect()
}

pub fn rho1(f: &HermitianJet) -> Rho1 {
    if f.is_zero() {
        return Rho1::Infinite { flat: true };
    }
    let ic = intercepts(f);
    if ic.iter().any(Option::is_none) {
        return Rho1::Infinite { flat: false };
    }
    Rho1::Finite(ic.into_iter().flatten().max().unwrap_or(0))
}

/// Axis `k` (0-based) with `𝒩₊(F) = {ξ_k ≥ 1}`, if any.
pub fn slab_axis(f: &HermitianJet) -> Option<usize> {
    let s = support(f);
    (0..f.nvars()).find(|&k| {
        let mut unit = vec![0u32; f.nvars()];
        unit[k] = 1;
        s.points.contains(&unit) && s.points.iter().all(|p| p[k] >= 1)
    })
}

pub fn is_slab_form(f: &HermitianJet) -> bool {
    slab_axis(f).is_some()
}

/// Is `𝒩₊` of the germ already fixed by the stored jet? True for determined
/// tails whose unseen terms cannot leave the polyhedron, and for unknown
/// tails when every axis intercept is at most the truncation order.
pub fn determined_by_jet(f: &HermitianJet) -> bool {
    let ic = intercepts(f);
    match f.tail() {
        Tail::Exact => true,
        Tail::Rules(rs) => rs.iter().all(|r| ic[r.var].is_some()),
        Tail::Unknown => ic
            .iter()
            .all(|c| matches!(c, Some(v) if *v <= f.truncation())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn jet(s: &str) -> HermitianJet {
        parse(s).unwrap().jet
    }

    #[test]
    fn support_examples() {
        let s = support(&jet("|z1^3 - z2^2|^2"));
        assert_eq!(
            s.points.into_iter().collect::<Vec<_>>(),
            vec![vec![0, 4], vec![3, 2], vec![6, 0]]
        );
        let s = support(&jet("2*Re(w) + |z1|^6"));
        assert_eq!(s.points.len(), 2);
        assert!(support(&jet("|z1|^2 - |z1|^2")).is_empty());
        assert!(matches!(
            hull(&support(&jet("|z1|^2 - |z1|^2"))),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn cusp_polyhedron() {
        let p = newton_polyhedron(&jet("|z1^3 - z2^2|^2")).unwrap();
        assert_eq!(p.vertices, vec![vec![0, 4], vec![6, 0]]);
        let compact: Vec<_> = p.compact_facets().collect();
        assert_eq!(compact.len(), 1);
        assert_eq!(compact[0].weight, vec![2, 3]);
        assert_eq!(compact[0].level, 12);
        assert!(compact[0].support_points.contains(&vec![3, 2]));
    }

    #[test]
    fn sextic_model_faces() {
        let p = newton_polyhedron(&jet("2*Re(w) + |z1|^6")).unwrap();
        assert_eq!(p.compact_faces.len(), 3);
        let seg = &p.compact_faces[2];
        assert_eq!(seg.dim, 1);
        assert_eq!(seg.weight, vec![1, 6]);
        for f in &p.compact_faces {
            for w in f.sample_weights() {
                assert!(p.determines(&w, f), "{w:?} {f:?}");
            }
        }
    }

    #[test]
    fn slab_has_only_its_corner() {
        let p = newton_polyhedron(&jet("2*Re(w) + 2*Re(w^2*z1)")).unwrap();
        assert_eq!(p.compact_faces.len(), 1);
        assert_eq!(p.compact_faces[0].vertices, vec![vec![0, 1]]);
        assert!(is_slab_form(&jet("2*Re(w) + 2*Re(w^2*z1)")));
        assert!(is_slab_form(&jet("2*Re(w)")));
        assert!(!is_slab_form(&jet("2*Re(w) + |z1|^2")));
    }

    #[test]
    fn convenience_and_rho1() {
        let c = is_convenient(&jet("|z1*z2|^2"));
        assert_eq!(c.missing_axes, vec![1, 2]);
        assert!(is_convenient(&jet("|z1|^2 + |z2|^2")).convenient);
        assert_eq!(rho1(&jet("2*Re(w) + |z1|^6")), Rho1::Finite(6));
        assert_eq!(rho1(&jet("2*Re(w) + |z1|^4 + |z2|^6")), Rho1::Finite(6));
        assert_eq!(rho1(&jet("|z1*z2|^2")), Rho1::Infinite { flat: false });
        assert_eq!(rho1(&jet("|z1|^2 - |z1|^2")), Rho1::Infinite { flat: true });
    }
}
