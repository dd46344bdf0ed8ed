//! Finite abstract simplicial complexes on `[m]`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face_set::{FaceSet, MAX_VERTICES};

/// All faces of a complex, grouped by dimension.
#[derive(Debug)]
pub struct FaceIndex {
    /// `by_dim[d + 1]` lists the `d`-faces in lexicographic order.
    pub by_dim: Vec<Vec<FaceSet>>,
    pub set: HashSet<FaceSet>,
}

/// A simplicial complex on vertices `0..m`, stored by its facets.
///
/// Every vertex of `0..m` is a vertex of the complex. The complex with
/// `m = 0` is `{∅}`.
#[derive(Clone)]
pub struct Complex {
    m: usize,
    facets: Vec<FaceSet>,
    faces: OnceLock<Arc<FaceIndex>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.facets == other.facets
    }
}

impl Eq for Complex {}

impl std::hash::Hash for Complex {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.m.hash(state);
        self.facets.hash(state);
    }
}

/// Wire format: vertices are 1-based.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub m: usize,
    pub facets: Vec<Vec<usize>>,
}

impl Complex {
    /// Build from generating sets. Non-maximal sets are dropped.
    pub fn new(m: usize, sets: Vec<FaceSet>) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::InvalidComplex(format!("{m} vertices exceeds the limit of {MAX_VERTICES}")));
        }
        let all = FaceSet::full(m);
        let mut cover = FaceSet::EMPTY;
        for s in &sets {
            if !s.is_subset(all) {
                return Err(Error::VertexOutOfRange(s.last().unwrap_or(0) + 1));
            }
            cover = cover.union(*s);
        }
        if cover != all {
            let v = all.difference(cover).first().unwrap();
            return Err(Error::InvalidComplex(format!("vertex {} lies in no face", v + 1)));
        }
        Ok(Self::from_maximal_candidates(m, sets))
    }

    fn from_maximal_candidates(m: usize, mut sets: Vec<FaceSet>) -> Self {
        sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        sets.dedup();
        let mut facets: Vec<FaceSet> = Vec::new();
        for s in sets {
            if !facets.iter().any(|f| s.is_subset(*f)) {
                facets.push(s);
            }
        }
        if facets.is_empty() {
            facets.push(FaceSet::EMPTY);
        }
        facets.sort();
        Complex { m, facets, faces: OnceLock::new() }
    }

    /// Build from 0-based vertex lists.
    pub fn from_lists(m: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let mut sets = Vec::with_capacity(lists.len());
        for l in lists {
            let mut s = FaceSet::EMPTY;
            for &v in l {
                if v >= m {
                    return Err(Error::VertexOutOfRange(v + 1));
                }
                s.insert(v);
            }
            sets.push(s);
        }
        Self::new(m, sets)
    }

    /// The complex `{∅}`.
    pub fn empty() -> Self {
        Complex { m: 0, facets: vec![FaceSet::EMPTY], faces: OnceLock::new() }
    }

    /// The full simplex on `n` vertices.
    pub fn simplex(n: usize) -> Self {
        Complex { m: n, facets: vec![FaceSet::full(n)], faces: OnceLock::new() }
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self> {
        let mut sets = Vec::with_capacity(j.facets.len());
        for f in &j.facets {
            let mut s = FaceSet::EMPTY;
            for &v in f {
                if v == 0 || v > j.m {
                    return Err(Error::VertexOutOfRange(v));
                }
                if s.contains(v - 1) {
                    return Err(Error::InvalidComplex(format!("repeated vertex {v} in a facet")));
                }
                s.insert(v - 1);
            }
            sets.push(s);
        }
        Self::new(j.m, sets)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            m: self.m,
            facets: self.facets.iter().map(|f| f.iter().map(|v| v + 1).collect()).collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serialisable")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_set(&self) -> FaceSet {
        FaceSet::full(self.m)
    }

    pub fn facets(&self) -> &[FaceSet] {
        &self.facets
    }

    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize).max().unwrap_or(0) - 1
    }

    pub fn is_pure(&self) -> bool {
        let d = self.facets[0].len();
        self.facets.iter().all(|f| f.len() == d)
    }

    pub fn face_index(&self) -> &FaceIndex {
        self.faces.get_or_init(|| Arc::new(self.build_faces()))
    }

    fn build_faces(&self) -> FaceIndex {
        let mut set: HashSet<FaceSet> = HashSet::new();
        for f in &self.facets {
            for s in f.subsets() {
                set.insert(s);
            }
        }
        let top = self.facets.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top + 1];
        for s in &set {
            by_dim[s.len()].push(*s);
        }
        for v in &mut by_dim {
            v.sort();
        }
        FaceIndex { by_dim, set }
    }

    pub fn contains_face(&self, s: FaceSet) -> bool {
        self.facets.iter().any(|f| s.is_subset(*f))
    }

    /// Faces of dimension `d` (`d >= -1`) in lexicographic order.
    pub fn faces_of_dim(&self, d: isize) -> &[FaceSet] {
        let idx = self.face_index();
        let k = (d + 1) as usize;
        if d < -1 || k >= idx.by_dim.len() {
            &[]
        } else {
            &idx.by_dim[k]
        }
    }

    pub fn num_faces(&self) -> usize {
        self.face_index().set.len()
    }

    /// `(f_0, .., f_dim)`.
    pub fn f_vector(&self) -> Vec<usize> {
        let idx = self.face_index();
        idx.by_dim[1..].iter().map(|v| v.len()).collect()
    }

    /// Minimal non-faces, ordered by size and then lexicographically.
    pub fn missing_faces(&self) -> Vec<FaceSet> {
        let idx = self.face_index();
        let mut out = Vec::new();
        for layer in &idx.by_dim {
            for &s in layer {
                let start = s.last().map_or(0, |x| x + 1);
                for v in start..self.m {
                    let w = s.with(v);
                    if idx.set.contains(&w) {
                        continue;
                    }
                    if s.iter().all(|u| idx.set.contains(&w.without(u))) {
                        out.push(w);
                    }
                }
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    /// Full subcomplex on `j`, re-indexed to `0..|j|`, with the map back to
    /// original labels.
    pub fn full_subcomplex(&self, j: FaceSet) -> (Complex, Vec<usize>) {
        let j = j.intersection(self.vertex_set());
        let map = j.to_vec();
        let mut inv = vec![usize::MAX; self.m];
        for (i, &v) in map.iter().enumerate() {
            inv[v] = i;
        }
        let sets: Vec<FaceSet> = self.facets.iter().map(|f| f.intersection(j).map(&inv)).collect();
        (Complex::from_maximal_candidates(map.len(), sets), map)
    }

    /// Facets of `K_J` in original labels.
    pub fn full_subcomplex_facets(&self, j: FaceSet) -> Vec<FaceSet> {
        let sets: Vec<FaceSet> = self.facets.iter().map(|f| f.intersection(j)).collect();
        Complex::from_maximal_candidates(self.m, sets).facets
    }

    /// Facets of `lk σ` in original labels; empty if `σ` is not a face.
    pub fn link_facets(&self, s: FaceSet) -> Vec<FaceSet> {
        let sets: Vec<FaceSet> =
            self.facets.iter().filter(|f| s.is_subset(**f)).map(|f| f.difference(s)).collect();
        if sets.is_empty() {
            return Vec::new();
        }
        Complex::from_maximal_candidates(self.m, sets).facets
    }

    /// Facets of `st σ` in original labels.
    pub fn star_facets(&self, s: FaceSet) -> Vec<FaceSet> {
        self.facets.iter().filter(|f| s.is_subset(**f)).copied().collect()
    }

    fn reindex(&self, facets: Vec<FaceSet>) -> (Complex, Vec<usize>) {
        let verts = facets.iter().fold(FaceSet::EMPTY, |a, f| a.union(*f));
        let map = verts.to_vec();
        let mut inv = vec![usize::MAX; self.m];
        for (i, &v) in map.iter().enumerate() {
            inv[v] = i;
        }
        let sets = facets.iter().map(|f| f.map(&inv)).collect();
        (Complex::from_maximal_candidates(map.len(), sets), map)
    }

    /// `lk σ = {τ : σ ∪ τ ∈ K, σ ∩ τ = ∅}`, re-indexed on its vertices.
    pub fn link(&self, s: FaceSet) -> Result<(Complex, Vec<usize>)> {
        if !self.contains_face(s) {
            return Err(Error::NotAFace(format!("{s}")));
        }
        Ok(self.reindex(self.link_facets(s)))
    }

    /// `st σ`, re-indexed on its vertices.
    pub fn star(&self, s: FaceSet) -> Result<(Complex, Vec<usize>)> {
        if !self.contains_face(s) {
            return Err(Error::NotAFace(format!("{s}")));
        }
        Ok(self.reindex(self.star_facets(s)))
    }

    /// Vertices lying in every facet (the simplex factor).
    pub fn cone_vertices(&self) -> FaceSet {
        if self.m == 0 {
            return FaceSet::EMPTY;
        }
        self.facets.iter().fold(self.vertex_set(), |a, f| a.intersection(*f))
    }

    /// `core K` with its label map and the vertex set of the simplex factor.
    pub fn core(&self) -> (Complex, Vec<usize>, FaceSet) {
        let cone = self.cone_vertices();
        let (c, map) = self.full_subcomplex(self.vertex_set().difference(cone));
        (c, map, cone)
    }

    pub fn is_core(&self) -> bool {
        self.cone_vertices().is_empty()
    }

    /// `K * L`, with the vertices of `L` shifted by `m(K)`.
    pub fn join(&self, other: &Complex) -> Result<Complex> {
        let m = self.m + other.m;
        if m > MAX_VERTICES {
            return Err(Error::InvalidComplex(format!("join has {m} vertices")));
        }
        let mut sets = Vec::new();
        for a in &self.facets {
            for b in &other.facets {
                sets.push(a.union(FaceSet::from_bits(b.bits() << self.m)));
            }
        }
        Ok(Complex::from_maximal_candidates(m, sets))
    }

    /// Apply a vertex permutation `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Complex {
        assert_eq!(perm.len(), self.m);
        let sets = self.facets.iter().map(|f| f.map(perm)).collect();
        Complex::from_maximal_candidates(self.m, sets)
    }

    /// Neighbour sets of the 1-skeleton.
    pub fn adjacency(&self) -> Vec<FaceSet> {
        let mut adj = vec![FaceSet::EMPTY; self.m];
        for f in &self.facets {
            for v in f.iter() {
                adj[v] = adj[v].union(f.without(v));
            }
        }
        adj
    }

    pub fn edges(&self) -> Vec<FaceSet> {
        self.faces_of_dim(1).to_vec()
    }

    /// Number of connected components of `K_J`.
    pub fn components_within(adj: &[FaceSet], j: FaceSet) -> usize {
        let mut seen = FaceSet::EMPTY;
        let mut count = 0;
        for v in j.iter() {
            if seen.contains(v) {
                continue;
            }
            count += 1;
            let mut frontier = FaceSet::singleton(v);
            seen.insert(v);
            while let Some(x) = frontier.first() {
                frontier.remove(x);
                let new = adj[x].intersection(j).difference(seen);
                seen = seen.union(new);
                frontier = frontier.union(new);
            }
        }
        count
    }

    /// Facet list in original labels, as a map for fast membership tests.
    pub fn facet_lookup(&self) -> HashMap<FaceSet, usize> {
        self.facets.iter().enumerate().map(|(i, f)| (*f, i)).collect()
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex(m={}, facets=[", self.m)?;
        for (i, s) in self.facets.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "])")
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Complex {
        Complex::from_lists(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap()
    }

    #[test]
    fn missing_faces_of_square() {
        let mf = square().missing_faces();
        assert_eq!(mf, vec![[0, 2].into_iter().collect(), [1, 3].into_iter().collect()]);
    }

    #[test]
    fn boundary_of_simplex_has_one_missing_face() {
        let k = Complex::new(4, FaceSet::full(4).iter().map(|v| FaceSet::full(4).without(v)).collect()).unwrap();
        assert_eq!(k.missing_faces(), vec![FaceSet::full(4)]);
        assert_eq!(k.f_vector(), vec![4, 6, 4]);
    }

    #[test]
    fn ghost_vertex_rejected() {
        assert!(Complex::from_lists(3, &[vec![0, 1]]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let k = square();
        let j = k.to_json_string();
        assert_eq!(Complex::from_json_str(&j).unwrap(), k);
        let e = Complex::from_json_str(r#"{"m":0,"facets":[]}"#).unwrap();
        assert_eq!(e, Complex::empty());
    }

    #[test]
    fn link_and_core() {
        let k = square();
        let (l, map) = k.link(FaceSet::singleton(0)).unwrap();
        assert_eq!(map, vec![1, 3]);
        assert_eq!(l.facets().len(), 2);
        let cone = Complex::from_lists(3, &[vec![0, 1, 2]]).unwrap();
        let (c, _, s) = cone.core();
        assert_eq!(c, Complex::empty());
        assert_eq!(s.len(), 3);
    }
}
