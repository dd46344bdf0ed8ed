//! The cohomology ring `H*(Z_K) = ⊕_J H̃*(K_J)` with the product of
//! full-subcomplex cohomology classes on disjoint vertex sets.
//!
//! A class in `H̃^d(K_J)` has total degree `|J| + d + 1`. For disjoint `I`,
//! `J` the product of cocycles `α` on `K_I` and `β` on `K_J` is the cochain
//! on `K_{I∪J}` with value `s · α(ρ∩I) β(ρ∩J)` on each face `ρ`. The sign
//! `s = ε(σ,I) ε(τ,J) ε(σ∪τ,I∪J) (-1)^{inv(I∖σ, J∖τ)}` comes from the
//! monomial basis `u_{J∖L} v_L` of the Koszul algebra, where
//! `ε(L,J) = Π_{j∈L} (-1)^{pos_J(j)}`; it is trivial in characteristic 2.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::algebra::{self, Element, Key, PieceAlgebra};
use crate::complex::Complex;
use crate::error::{cap_check, Error, Result};
use crate::face_set::FaceSet;
use crate::field::Field;
use crate::homology::{cohomology_of_subset, Cohomology, RankContext};
use crate::taylor::fresh_id;

/// Default largest vertex count for computations that visit every piece.
pub const DEFAULT_RING_CAP: usize = 16;

pub struct BhrRing<F: Field> {
    id: u64,
    f: F,
    k: Complex,
    ranks: RankContext,
    cache: RwLock<HashMap<FaceSet, Arc<Cohomology<F>>>>,
    exhaustive_cap: usize,
}

fn epsilon(l: FaceSet, j: FaceSet) -> bool {
    l.iter().map(|v| j.rank_of(v)).sum::<usize>() % 2 == 1
}

impl<F: Field> BhrRing<F> {
    pub fn new(f: F, k: Complex) -> Self {
        let ranks = RankContext::new(&k);
        BhrRing { id: fresh_id(), f, k, ranks, cache: RwLock::new(HashMap::new()), exhaustive_cap: DEFAULT_RING_CAP }
    }

    pub fn with_exhaustive_cap(mut self, cap: usize) -> Self {
        self.exhaustive_cap = cap;
        self
    }

    pub fn complex(&self) -> &Complex {
        &self.k
    }

    pub fn exhaustive_cap(&self) -> usize {
        self.exhaustive_cap
    }

    /// Cohomology of `K_J` with representatives, computed once.
    pub fn cohomology(&self, j: FaceSet) -> Arc<Cohomology<F>> {
        if let Some(c) = self.cache.read().expect("cache lock").get(&j) {
            return c.clone();
        }
        let c = Arc::new(cohomology_of_subset(&self.f, &self.k, j));
        self.cache.write().expect("cache lock").entry(j).or_insert(c).clone()
    }

    fn rank_of(&self, j: FaceSet, d: i32) -> usize {
        if d < -1 {
            return 0;
        }
        self.cohomology(j).rank(d as isize)
    }

    fn check_subset(&self, j: FaceSet) -> Result<()> {
        if !j.is_subset(self.k.vertex_set()) {
            return Err(Error::VertexOutOfRange(j.last().unwrap_or(0) + 1));
        }
        Ok(())
    }

    /// The `idx`-th basis class of `H̃^d(K_J)`.
    pub fn basis_element(&self, j: FaceSet, d: i32, idx: usize) -> Result<Element<F::Elem>> {
        self.check_subset(j)?;
        let n = self.rank_of(j, d);
        if idx >= n {
            return Err(Error::Precondition(format!("H̃^{d}(K_{j}) has dimension {n}, no basis class {idx}")));
        }
        let mut v = vec![self.f.zero(); n];
        v[idx] = self.f.one();
        Ok(Element::from_piece(self.id, (j, d), v))
    }

    /// An element of `H̃^d(K_J)` from coordinates.
    pub fn element(&self, j: FaceSet, d: i32, coords: Vec<F::Elem>) -> Result<Element<F::Elem>> {
        self.check_subset(j)?;
        let n = self.rank_of(j, d);
        if coords.len() != n {
            return Err(Error::Precondition(format!("H̃^{d}(K_{j}) has dimension {n}, got {} coordinates", coords.len())));
        }
        Ok(Element::from_piece(self.id, (j, d), coords))
    }

    pub fn unit(&self) -> Element<F::Elem> {
        Element::from_piece(self.id, (FaceSet::EMPTY, -1), vec![self.f.one()])
    }

    /// The generator `ω̃` of `H̃^{|ω|-2}(K_ω)` for a missing face `ω`.
    pub fn missing_face_class(&self, w: FaceSet) -> Result<Element<F::Elem>> {
        self.check_subset(w)?;
        if self.k.contains_face(w) || w.iter().any(|v| !self.k.contains_face(w.without(v))) {
            return Err(Error::Precondition(format!("{w} is not a missing face")));
        }
        self.basis_element(w, w.len() as i32 - 2, 0)
    }

    /// The generator of `H̃^{dim K}(K)` when it is one-dimensional.
    pub fn top_class(&self) -> Result<Element<F::Elem>> {
        let d = self.k.dim() as i32;
        let all = self.k.vertex_set();
        if self.rank_of(all, d) != 1 {
            return Err(Error::Precondition("top cohomology of K is not one-dimensional".into()));
        }
        self.basis_element(all, d, 0)
    }

    /// Cochain-level product of a `p`-cochain on `K_I` and a `q`-cochain on
    /// `K_J` (`I`, `J` disjoint), on the `(p+q+1)`-faces of `K_{I∪J}` in the
    /// order of [`DegreeCohomology::faces`](crate::homology::DegreeCohomology).
    pub fn cochain_product(&self, a: Key, alpha: &[F::Elem], b: Key, beta: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.f;
        let ((i, p), (j, q)) = (a, b);
        let u = i.union(j);
        let ci = self.cohomology(i);
        let cj = self.cohomology(j);
        let cu = self.cohomology(u);
        let (Some(hi), Some(hj), Some(hu)) = (ci.degree(p as isize), cj.degree(q as isize), cu.degree((p + q + 1) as isize))
        else {
            return Vec::new();
        };
        let odd = f.kind().characteristic() != 2;
        let mut chain = vec![f.zero(); hu.faces.len()];
        for (s_idx, s) in hi.faces.iter().enumerate() {
            if f.is_zero(&alpha[s_idx]) {
                continue;
            }
            for (t_idx, t) in hj.faces.iter().enumerate() {
                if f.is_zero(&beta[t_idx]) {
                    continue;
                }
                let rho = s.union(*t);
                let Some(&r) = hu.face_pos.get(&rho) else {
                    continue;
                };
                let mut coef = f.mul(&alpha[s_idx], &beta[t_idx]);
                if odd {
                    let neg = epsilon(*s, i)
                        ^ epsilon(*t, j)
                        ^ epsilon(rho, u)
                        ^ (i.difference(*s).inversions_with(j.difference(*t)) % 2 == 1);
                    if neg {
                        coef = f.neg(&coef);
                    }
                }
                chain[r] = f.add(&chain[r], &coef);
            }
        }
        chain
    }

    pub fn mul(&self, x: &Element<F::Elem>, y: &Element<F::Elem>) -> Result<Element<F::Elem>> {
        algebra::mul(self, x, y)
    }

    /// Pull back along `K_{J'} ⊆ K_J` for each term of `x`, `J' = J ∩ keep`.
    pub fn restrict(&self, x: &Element<F::Elem>, keep: FaceSet) -> Result<Element<F::Elem>> {
        if x.ring_id != self.id {
            return Err(Error::Mismatch("element does not belong to this ring".into()));
        }
        let f = &self.f;
        let mut out = Element::zero(self.id);
        for (&(j, d), v) in &x.terms {
            let j2 = j.intersection(keep);
            let src = self.cohomology(j);
            let dst = self.cohomology(j2);
            let (Some(sd), Some(dd)) = (src.degree(d as isize), dst.degree(d as isize)) else {
                continue;
            };
            if dd.rank() == 0 {
                continue;
            }
            let cocycle = sd.cocycle(f, v);
            let restricted: Vec<F::Elem> = dd.faces.iter().map(|s| cocycle[sd.face_pos[s]].clone()).collect();
            algebra::add_into(f, &mut out.terms, (j2, d), &dd.coords(f, &restricted));
        }
        algebra::prune(f, &mut out);
        Ok(out)
    }

    /// `α ⋆ β = α · (β restricted to J ∖ (I ∩ J))`, termwise.
    pub fn star(&self, x: &Element<F::Elem>, y: &Element<F::Elem>) -> Result<Element<F::Elem>> {
        if x.ring_id != self.id || y.ring_id != self.id {
            return Err(Error::Mismatch("element does not belong to this ring".into()));
        }
        let f = &self.f;
        let mut out = Element::zero(self.id);
        for (&a, u) in &x.terms {
            let xa = Element::from_piece(self.id, a, u.clone());
            for (&b, v) in &y.terms {
                let yb = Element::from_piece(self.id, b, v.clone());
                let r = self.restrict(&yb, b.0.difference(a.0))?;
                let p = self.mul(&xa, &r)?;
                for (k, w) in p.terms {
                    algebra::add_into(f, &mut out.terms, k, &w);
                }
            }
        }
        algebra::prune(f, &mut out);
        Ok(out)
    }

    /// Dimensions of `(R^+)^{*k}` by total degree for `k = 1, 2, ..`,
    /// checking that a nonzero part in `H̃^d(K_J)` has `d ≥ k - 1`.
    pub fn graded_power_dims(&self) -> Result<Vec<std::collections::BTreeMap<usize, usize>>> {
        let pieces = algebra::power_pieces(self)?;
        for (k, p) in pieces.iter().enumerate() {
            for (&(j, d), &n) in p {
                if n > 0 && (d as i64) < k as i64 {
                    return Err(Error::Invariant(format!(
                        "product of {} positive classes has a nonzero part in H̃^{d}(K_{j})",
                        k + 1
                    )));
                }
            }
        }
        Ok(algebra::power_dims(self, &pieces))
    }

    pub fn nilpotence_length(&self) -> Result<usize> {
        Ok(self.graded_power_dims()?.len())
    }

    pub fn socle_dim(&self) -> Result<usize> {
        algebra::socle_dim(self)
    }

    pub fn annihilator_dim(&self, x: &Element<F::Elem>, k: usize) -> Result<usize> {
        algebra::annihilator_dim(self, x, k)
    }

    pub fn annihilator_dim_total(&self, x: &Element<F::Elem>) -> Result<usize> {
        algebra::annihilator_dim_total(self, x)
    }

    pub fn factor_index(
        &self,
        x: &Element<F::Elem>,
        k: usize,
        limits: algebra::FactorIndexLimits,
    ) -> Result<algebra::FactorIndexReport> {
        algebra::factor_index(self, x, k, limits)
    }

    /// Basis keys of `R^deg` with their dimensions.
    pub fn homogeneous_basis(&self, deg: usize) -> Result<Vec<(Key, usize)>> {
        Ok(self.keys_of_degree(deg)?.into_iter().map(|k| (k, self.piece_dim(k))).collect())
    }
}

impl<F: Field> PieceAlgebra for BhrRing<F> {
    type F = F;

    fn field(&self) -> &F {
        &self.f
    }

    fn ring_id(&self) -> u64 {
        self.id
    }

    fn total_degree(&self, key: Key) -> usize {
        (key.0.len() as i64 + key.1 as i64 + 1) as usize
    }

    fn piece_dim(&self, key: Key) -> usize {
        self.rank_of(key.0, key.1)
    }

    fn keys_of_degree(&self, deg: usize) -> Result<Vec<Key>> {
        let m = self.k.m();
        let mut out = Vec::new();
        for d in -1..=self.k.dim().max(-1) as i32 {
            let s = deg as i64 - d as i64 - 1;
            if s < 0 || s > m as i64 {
                continue;
            }
            for j in subsets_of_size(m, s as usize) {
                let r = self.ranks.ranks(&self.f, j);
                if r.get((d + 1) as usize).copied().unwrap_or(0) > 0 {
                    out.push((j, d));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn all_keys(&self) -> Result<Vec<Key>> {
        let m = self.k.m();
        cap_check("vertex count for whole-ring computations", m as u64, self.exhaustive_cap as u64)?;
        let mut out = Vec::new();
        for bits in 0..(1u128 << m) {
            let j = FaceSet::from_bits(bits);
            for (i, &r) in self.ranks.ranks(&self.f, j).iter().enumerate() {
                if r > 0 {
                    out.push((j, i as i32 - 1));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn mul_vec(&self, a: Key, x: &[F::Elem], b: Key, y: &[F::Elem]) -> Option<(Key, Vec<F::Elem>)> {
        let (i, p) = a;
        let (j, q) = b;
        if !i.is_disjoint(j) {
            return None;
        }
        let f = &self.f;
        let u = i.union(j);
        let c = (u, p + q + 1);
        let ci = self.cohomology(i);
        let cj = self.cohomology(j);
        let cu = self.cohomology(u);
        let (Some(hi), Some(hj)) = (ci.degree(p as isize), cj.degree(q as isize)) else {
            return Some((c, Vec::new()));
        };
        let Some(hu) = cu.degree(c.1 as isize) else {
            return Some((c, Vec::new()));
        };
        if hu.rank() == 0 {
            return Some((c, Vec::new()));
        }
        let chain = self.cochain_product((i, p), &hi.cocycle(f, x), (j, q), &hj.cocycle(f, y));
        Some((c, hu.coords(f, &chain)))
    }
}

/// All subsets of `0..m` with `s` elements, in increasing bit order.
pub fn subsets_of_size(m: usize, s: usize) -> impl Iterator<Item = FaceSet> {
    let first: Option<u128> = if s > m {
        None
    } else if s == 0 {
        Some(0)
    } else {
        Some((1u128 << s) - 1)
    };
    let limit: u128 = if m >= 128 { u128::MAX } else { 1u128 << m };
    std::iter::successors(first, move |&x| {
        if x == 0 {
            return None;
        }
        // Gosper's hack.
        let c = x & x.wrapping_neg();
        let r = x + c;
        let next = (((r ^ x) >> 2) / c) | r;
        (next < limit && next != 0).then_some(next)
    })
    .filter(move |&x| m >= 128 || x < limit)
    .map(FaceSet::from_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    fn polygon(n: usize) -> Complex {
        Complex::from_lists(n, &(0..n).map(|i| vec![i, (i + 1) % n]).collect::<Vec<_>>()).unwrap()
    }

    fn set(v: &[usize]) -> FaceSet {
        v.iter().copied().collect()
    }

    #[test]
    fn square_diagonals_multiply_to_top() {
        let r = BhrRing::new(Fp::new(2).unwrap(), polygon(4));
        let a = r.missing_face_class(set(&[0, 2])).unwrap();
        let b = r.missing_face_class(set(&[1, 3])).unwrap();
        let p = r.mul(&a, &b).unwrap();
        assert_eq!(p, r.top_class().unwrap());
        assert!(algebra::is_zero(&Fp::new(2).unwrap(), &r.mul(&a, &a).unwrap()));
    }

    #[test]
    fn subsets_of_size_counts() {
        assert_eq!(subsets_of_size(6, 3).count(), 20);
        assert_eq!(subsets_of_size(4, 0).count(), 1);
        assert_eq!(subsets_of_size(4, 4).count(), 1);
        assert_eq!(subsets_of_size(3, 4).count(), 0);
    }

    #[test]
    fn unit_is_neutral() {
        let r = BhrRing::new(Fp::new(3).unwrap(), polygon(5));
        let a = r.missing_face_class(set(&[0, 2])).unwrap();
        assert_eq!(r.mul(&r.unit(), &a).unwrap(), a);
        assert_eq!(r.mul(&a, &r.unit()).unwrap(), a);
    }
}
