//! Reduced simplicial cohomology of full subcomplexes, with explicit
//! cocycle representatives.
//!
//! Cochains of degree `d` are indexed by the `d`-faces in lexicographic
//! order; degree `-1` is spanned by the empty face, so `H̃^{-1}({∅}) = k`.

use std::collections::HashMap;

use crate::complex::Complex;
use crate::error::Result;
use crate::face_set::FaceSet;
use crate::field::{Field, FieldKind, Fp};
use crate::linalg::{self, Matrix, Subquotient};
use crate::with_field;

/// Faces of `K_J` by degree: entry `d + 1` holds the `d`-faces.
pub fn faces_within(k: &Complex, j: FaceSet) -> Vec<Vec<FaceSet>> {
    let idx = k.face_index();
    let mut out: Vec<Vec<FaceSet>> = idx
        .by_dim
        .iter()
        .map(|layer| layer.iter().copied().filter(|s| s.is_subset(j)).collect())
        .collect();
    while out.len() > 1 && out.last().is_some_and(|v| v.is_empty()) {
        out.pop();
    }
    out
}

/// Coboundary `C^d -> C^{d+1}` as a matrix with rows indexed by `upper`.
pub fn coboundary<F: Field>(f: &F, lower: &[FaceSet], upper: &[FaceSet]) -> Matrix<F::Elem> {
    let pos: HashMap<FaceSet, usize> = lower.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut m = Matrix::zeros(f, upper.len(), lower.len());
    for (r, t) in upper.iter().enumerate() {
        for (k, v) in t.iter().enumerate() {
            if let Some(&c) = pos.get(&t.without(v)) {
                m.set(r, c, f.sign(k % 2 == 1));
            }
        }
    }
    m
}

/// `H̃^d(K_J)` with a basis of cocycle representatives.
#[derive(Clone, Debug)]
pub struct DegreeCohomology<F: Field> {
    pub degree: isize,
    pub faces: Vec<FaceSet>,
    pub face_pos: HashMap<FaceSet, usize>,
    pub sq: Subquotient<F>,
}

impl<F: Field> DegreeCohomology<F> {
    pub fn rank(&self) -> usize {
        self.sq.rank()
    }

    pub fn reps(&self) -> &[Vec<F::Elem>] {
        &self.sq.reps
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn coords(&self, f: &F, cocycle: &[F::Elem]) -> Vec<F::Elem> {
        self.sq.coords(f, cocycle)
    }

    /// The cocycle `Σ c_i rep_i`.
    pub fn cocycle(&self, f: &F, coords: &[F::Elem]) -> Vec<F::Elem> {
        self.sq.combine(f, coords, self.faces.len())
    }
}

/// Reduced cohomology of `K_J` in all degrees.
#[derive(Clone, Debug)]
pub struct Cohomology<F: Field> {
    pub subset: FaceSet,
    /// Entry `d + 1` is degree `d`.
    pub degrees: Vec<DegreeCohomology<F>>,
}

impl<F: Field> Cohomology<F> {
    pub fn degree(&self, d: isize) -> Option<&DegreeCohomology<F>> {
        if d < -1 {
            return None;
        }
        self.degrees.get((d + 1) as usize)
    }

    pub fn rank(&self, d: isize) -> usize {
        self.degree(d).map_or(0, |c| c.rank())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|c| c.rank()).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.degrees.iter().map(|c| c.rank()).sum()
    }
}

/// Reduced cohomology of `K_J` with representatives.
pub fn cohomology_of_subset<F: Field>(f: &F, k: &Complex, j: FaceSet) -> Cohomology<F> {
    let faces = faces_within(k, j);
    let n = faces.len();
    let deltas: Vec<Matrix<F::Elem>> = (0..n.saturating_sub(1)).map(|i| coboundary(f, &faces[i], &faces[i + 1])).collect();
    let mut degrees = Vec::with_capacity(n);
    for i in 0..n {
        let incoming = if i == 0 { None } else { Some(&deltas[i - 1]) };
        let outgoing = deltas.get(i);
        let sq = Subquotient::compute(f, faces[i].len(), incoming, outgoing);
        let face_pos = faces[i].iter().enumerate().map(|(p, s)| (*s, p)).collect();
        degrees.push(DegreeCohomology { degree: i as isize - 1, faces: faces[i].clone(), face_pos, sq });
    }
    Cohomology { subset: j, degrees }
}

pub fn reduced_cohomology<F: Field>(f: &F, k: &Complex) -> Cohomology<F> {
    cohomology_of_subset(f, k, k.vertex_set())
}

/// Precomputed boundary incidences for fast rank-only sweeps over subsets.
pub struct RankContext {
    faces: Vec<Vec<FaceSet>>,
    /// `bnd[i][t]` lists, for the `t`-th face in layer `i`, the layer
    /// `i - 1` indices of its codimension-one faces with their position.
    bnd: Vec<Vec<Vec<(usize, usize)>>>,
}

impl RankContext {
    pub fn new(k: &Complex) -> Self {
        let faces = k.face_index().by_dim.clone();
        let mut bnd = vec![Vec::new()];
        for i in 1..faces.len() {
            let pos: HashMap<FaceSet, usize> = faces[i - 1].iter().enumerate().map(|(p, s)| (*s, p)).collect();
            let layer = faces[i]
                .iter()
                .map(|t| t.iter().enumerate().map(|(k, v)| (pos[&t.without(v)], k)).collect())
                .collect();
            bnd.push(layer);
        }
        RankContext { faces, bnd }
    }

    /// `dim H̃^d(K_J)` for `d = -1, 0, ..` over GF(2).
    pub fn gf2_ranks(&self, j: FaceSet) -> Vec<usize> {
        let n = self.faces.len();
        let mut local: Vec<Vec<usize>> = Vec::with_capacity(n);
        let mut counts = Vec::with_capacity(n);
        for layer in &self.faces {
            let mut c = 0;
            let l: Vec<usize> = layer
                .iter()
                .map(|s| {
                    if s.is_subset(j) {
                        c += 1;
                        c - 1
                    } else {
                        usize::MAX
                    }
                })
                .collect();
            local.push(l);
            counts.push(c);
        }
        while counts.len() > 1 && *counts.last().unwrap() == 0 {
            counts.pop();
        }
        let top = counts.len();
        // rk[i] = rank of the coboundary from layer i to layer i + 1.
        let mut rk = vec![0usize; top];
        for i in 0..top.saturating_sub(1) {
            let words = counts[i].div_ceil(64).max(1);
            let mut rows: Vec<Vec<u64>> = Vec::with_capacity(counts[i + 1]);
            for (t, inc) in self.bnd[i + 1].iter().enumerate() {
                if local[i + 1][t] == usize::MAX {
                    continue;
                }
                let mut row = vec![0u64; words];
                for &(s, _) in inc {
                    let c = local[i][s];
                    row[c / 64] |= 1 << (c % 64);
                }
                rows.push(row);
            }
            rk[i] = linalg::gf2_rank(&mut rows);
        }
        (0..top).map(|i| counts[i] - rk[i] - if i > 0 { rk[i - 1] } else { 0 }).collect()
    }

    /// `dim H̃^d(K_J)` over an arbitrary field.
    pub fn ranks<F: Field>(&self, f: &F, j: FaceSet) -> Vec<usize> {
        if f.kind() == FieldKind::Prime(2) {
            return self.gf2_ranks(j);
        }
        let n = self.faces.len();
        let mut local: Vec<Vec<usize>> = Vec::with_capacity(n);
        let mut counts = Vec::with_capacity(n);
        for layer in &self.faces {
            let mut c = 0;
            local.push(
                layer
                    .iter()
                    .map(|s| {
                        if s.is_subset(j) {
                            c += 1;
                            c - 1
                        } else {
                            usize::MAX
                        }
                    })
                    .collect(),
            );
            counts.push(c);
        }
        while counts.len() > 1 && *counts.last().unwrap() == 0 {
            counts.pop();
        }
        let top = counts.len();
        let mut rk = vec![0usize; top];
        for i in 0..top.saturating_sub(1) {
            let mut m = Matrix::zeros(f, counts[i + 1], counts[i]);
            for (t, inc) in self.bnd[i + 1].iter().enumerate() {
                let r = local[i + 1][t];
                if r == usize::MAX {
                    continue;
                }
                for &(s, k) in inc {
                    m.set(r, local[i][s], f.sign(k % 2 == 1));
                }
            }
            rk[i] = linalg::rank(f, &m);
        }
        (0..top).map(|i| counts[i] - rk[i] - if i > 0 { rk[i - 1] } else { 0 }).collect()
    }
}

/// Reduced Betti numbers `dim H̃^d(K)`, entry `d + 1` for degree `d`.
pub fn reduced_betti(k: &Complex, field: FieldKind) -> Result<Vec<usize>> {
    let ctx = RankContext::new(k);
    Ok(with_field!(field, |f| ctx.ranks(&f, k.vertex_set())))
}

/// Reduced Betti numbers of a complex over GF(2).
pub fn reduced_betti_gf2(k: &Complex) -> Vec<usize> {
    RankContext::new(k).gf2_ranks(k.vertex_set())
}

fn has_sphere_cohomology(ranks: &[usize], dim: isize) -> bool {
    ranks.iter().enumerate().all(|(i, &r)| r == usize::from(i as isize - 1 == dim))
}

/// `K` is a generalised homology sphere over the field: every link of a
/// face `σ` (including `σ = ∅`) has the cohomology of `S^{dim K - |σ|}`.
pub fn is_homology_sphere(k: &Complex, field: FieldKind) -> Result<bool> {
    let n = k.dim();
    if !k.is_pure() {
        return Ok(false);
    }
    with_field!(field, |f| {
        for layer in &k.face_index().by_dim {
            for &s in layer {
                let (lk, _) = k.link(s)?;
                let ranks = RankContext::new(&lk).ranks(&f, lk.vertex_set());
                if !has_sphere_cohomology(&ranks, n - s.len() as isize) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })
}

/// Gorenstein* over the field: a homology sphere equal to its core.
pub fn is_gorenstein_star(k: &Complex, field: FieldKind) -> Result<bool> {
    Ok(k.is_core() && is_homology_sphere(k, field)?)
}

/// Convenience for GF(2) callers that cannot fail.
pub fn is_homology_sphere_gf2(k: &Complex) -> bool {
    let f = Fp::new(2).expect("prime");
    let n = k.dim();
    k.is_pure()
        && k.face_index().by_dim.iter().flatten().all(|&s| {
            let (lk, _) = k.link(s).expect("face");
            has_sphere_cohomology(&RankContext::new(&lk).ranks(&f, lk.vertex_set()), n - s.len() as isize)
        })
}

pub fn euler_characteristic(k: &Complex) -> i64 {
    k.f_vector().iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn circle(n: usize) -> Complex {
        Complex::from_lists(n, &(0..n).map(|i| vec![i, (i + 1) % n]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn circle_and_empty() {
        assert_eq!(reduced_betti(&circle(5), FieldKind::Prime(2)).unwrap(), vec![0, 0, 1]);
        assert_eq!(reduced_betti(&Complex::empty(), FieldKind::Prime(3)).unwrap(), vec![1]);
        assert_eq!(reduced_betti(&circle(4), FieldKind::Rational).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn projective_plane_depends_on_field() {
        let rp2 = Complex::from_lists(
            6,
            &[
                vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 5], vec![0, 1, 5],
                vec![1, 2, 4], vec![2, 3, 5], vec![1, 3, 4], vec![2, 4, 5], vec![1, 3, 5],
            ],
        )
        .unwrap();
        assert_eq!(reduced_betti(&rp2, FieldKind::Prime(2)).unwrap(), vec![0, 0, 1, 1]);
        assert_eq!(reduced_betti(&rp2, FieldKind::Prime(3)).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(reduced_betti(&rp2, FieldKind::Rational).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn representatives_project_to_unit_vectors() {
        let f = Rationals;
        let k = circle(6);
        let c = reduced_cohomology(&f, &k);
        let h1 = c.degree(1).unwrap();
        assert_eq!(h1.rank(), 1);
        assert_eq!(h1.coords(&f, &h1.reps()[0]), vec![f.one()]);
        let d0 = coboundary(&f, &k.faces_of_dim(0).to_vec(), &k.faces_of_dim(1).to_vec());
        let mut x = vec![f.zero(); 6];
        x[2] = f.from_i64(5);
        let b = linalg::mat_vec(&f, &d0, &x);
        assert_eq!(h1.coords(&f, &b), vec![f.zero()]);
    }

    #[test]
    fn circle_is_homology_sphere() {
        assert!(is_homology_sphere(&circle(5), FieldKind::Prime(2)).unwrap());
        let path = Complex::from_lists(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        assert!(!is_homology_sphere(&path, FieldKind::Prime(2)).unwrap());
    }
}
