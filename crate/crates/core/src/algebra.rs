//! Multigraded algebras split into finite-dimensional pieces keyed by a
//! support set and an internal degree, and the invariants computed on top.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::error::{cap_check, Error, Result};
use crate::face_set::FaceSet;
use crate::field::Field;
use crate::linalg::{self, Matrix};

/// A piece: support set and internal degree.
pub type Key = (FaceSet, i32);

/// An algebra with a basis split into pieces; the product of two pieces
/// lands in at most one piece.
pub trait PieceAlgebra: Sync {
    type F: Field;

    fn field(&self) -> &Self::F;
    fn ring_id(&self) -> u64;
    fn total_degree(&self, key: Key) -> usize;
    fn piece_dim(&self, key: Key) -> usize;
    /// Nonzero pieces of a total degree.
    fn keys_of_degree(&self, deg: usize) -> Result<Vec<Key>>;
    /// Every nonzero piece.
    fn all_keys(&self) -> Result<Vec<Key>>;
    /// Product of two coordinate vectors; `None` when it vanishes for
    /// support reasons.
    fn mul_vec(
        &self,
        a: Key,
        x: &[<Self::F as Field>::Elem],
        b: Key,
        y: &[<Self::F as Field>::Elem],
    ) -> Option<(Key, Vec<<Self::F as Field>::Elem>)>;
}

/// An element as coordinate vectors per piece.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<E> {
    pub ring_id: u64,
    pub terms: BTreeMap<Key, Vec<E>>,
}

impl<E: Clone> Element<E> {
    pub fn zero(ring_id: u64) -> Self {
        Element { ring_id, terms: BTreeMap::new() }
    }

    pub fn from_piece(ring_id: u64, key: Key, coords: Vec<E>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(key, coords);
        Element { ring_id, terms }
    }
}

pub fn add_into<F: Field>(f: &F, acc: &mut BTreeMap<Key, Vec<F::Elem>>, key: Key, v: &[F::Elem]) {
    match acc.get_mut(&key) {
        Some(t) => {
            for (a, b) in t.iter_mut().zip(v) {
                *a = f.add(a, b);
            }
        }
        None => {
            acc.insert(key, v.to_vec());
        }
    }
}

pub fn prune<F: Field>(f: &F, e: &mut Element<F::Elem>) {
    e.terms.retain(|_, v| !linalg::is_zero_vec(f, v));
}

pub fn is_zero<F: Field>(f: &F, e: &Element<F::Elem>) -> bool {
    e.terms.values().all(|v| linalg::is_zero_vec(f, v))
}

pub fn add<F: Field>(f: &F, a: &Element<F::Elem>, b: &Element<F::Elem>) -> Result<Element<F::Elem>> {
    if a.ring_id != b.ring_id {
        return Err(Error::Mismatch("elements of different rings".into()));
    }
    let mut out = a.clone();
    for (k, v) in &b.terms {
        add_into(f, &mut out.terms, *k, v);
    }
    prune(f, &mut out);
    Ok(out)
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &Element<F::Elem>) -> Element<F::Elem> {
    let mut out = a.clone();
    for v in out.terms.values_mut() {
        for x in v.iter_mut() {
            *x = f.mul(c, x);
        }
    }
    prune(f, &mut out);
    out
}

/// Total degree if homogeneous and nonzero.
pub fn homogeneous_degree<A: PieceAlgebra>(alg: &A, e: &Element<<A::F as Field>::Elem>) -> Option<usize> {
    let f = alg.field();
    let degs: BTreeSet<usize> =
        e.terms.iter().filter(|(_, v)| !linalg::is_zero_vec(f, v)).map(|(k, _)| alg.total_degree(*k)).collect();
    (degs.len() == 1).then(|| *degs.iter().next().unwrap())
}

pub fn mul<A: PieceAlgebra>(
    alg: &A,
    x: &Element<<A::F as Field>::Elem>,
    y: &Element<<A::F as Field>::Elem>,
) -> Result<Element<<A::F as Field>::Elem>> {
    let id = alg.ring_id();
    if x.ring_id != id || y.ring_id != id {
        return Err(Error::Mismatch("element does not belong to this ring".into()));
    }
    let f = alg.field();
    let mut out = Element::zero(id);
    for (a, u) in &x.terms {
        if linalg::is_zero_vec(f, u) {
            continue;
        }
        for (b, v) in &y.terms {
            if linalg::is_zero_vec(f, v) {
                continue;
            }
            if let Some((c, w)) = alg.mul_vec(*a, u, *b, v) {
                add_into(f, &mut out.terms, c, &w);
            }
        }
    }
    prune(f, &mut out);
    Ok(out)
}

fn unit<F: Field>(f: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

/// Incremental row-echelon basis for rank computations.
struct Echelon<F: Field> {
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> Echelon<F> {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Insert a vector; returns true if it increased the rank.
    fn insert(&mut self, f: &F, mut v: Vec<F::Elem>) -> bool {
        for (p, r) in &self.rows {
            if !f.is_zero(&v[*p]) {
                let c = f.neg(&v[*p]);
                for (a, b) in v.iter_mut().zip(r) {
                    if !f.is_zero(b) {
                        *a = f.axpy(a, &c, b);
                    }
                }
            }
        }
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]);
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for (_, r) in self.rows.iter_mut() {
            if !f.is_zero(&r[p]) {
                let c = f.neg(&r[p]);
                for (a, b) in r.iter_mut().zip(&v) {
                    if !f.is_zero(b) {
                        *a = f.axpy(a, &c, b);
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn basis(self) -> Vec<Vec<F::Elem>> {
        self.rows.into_iter().map(|(_, v)| v).collect()
    }
}

/// Concatenate per-key vectors into one vector using an offset table that
/// grows as new keys appear.
struct Layout {
    offsets: HashMap<Key, usize>,
    order: Vec<Key>,
    len: usize,
}

impl Layout {
    fn new() -> Self {
        Layout { offsets: HashMap::new(), order: Vec::new(), len: 0 }
    }

    fn offset<A: PieceAlgebra>(&mut self, alg: &A, key: Key) -> usize {
        if let Some(&o) = self.offsets.get(&key) {
            return o;
        }
        let o = self.len;
        self.offsets.insert(key, o);
        self.order.push(key);
        self.len += alg.piece_dim(key);
        o
    }
}

/// Rank of the linear map `R^{src} -> R`, `v -> x v`.
fn left_mult_rank<A: PieceAlgebra>(alg: &A, x: &Element<<A::F as Field>::Elem>, src: &[Key]) -> usize {
    let f = alg.field();
    let mut layout = Layout::new();
    let mut images: Vec<Vec<(usize, <A::F as Field>::Elem)>> = Vec::new();
    for &b in src {
        let n = alg.piece_dim(b);
        for t in 0..n {
            let e = unit(f, n, t);
            let mut img = Vec::new();
            for (a, u) in &x.terms {
                if let Some((c, w)) = alg.mul_vec(*a, u, b, &e) {
                    let o = layout.offset(alg, c);
                    for (i, val) in w.into_iter().enumerate() {
                        if !f.is_zero(&val) {
                            img.push((o + i, val));
                        }
                    }
                }
            }
            images.push(img);
        }
    }
    let mut ech = Echelon::<A::F>::new();
    for img in images {
        let mut v = vec![f.zero(); layout.len];
        for (i, val) in img {
            v[i] = f.add(&v[i], &val);
        }
        ech.insert(f, v);
    }
    ech.rank()
}

/// `dim ann_k(x) = dim {v ∈ R^k : x v = 0}`.
pub fn annihilator_dim<A: PieceAlgebra>(alg: &A, x: &Element<<A::F as Field>::Elem>, k: usize) -> Result<usize> {
    let src = alg.keys_of_degree(k)?;
    let total: usize = src.iter().map(|&b| alg.piece_dim(b)).sum();
    Ok(total - left_mult_rank(alg, x, &src))
}

/// `dim ann(x)` summed over all degrees.
pub fn annihilator_dim_total<A: PieceAlgebra>(alg: &A, x: &Element<<A::F as Field>::Elem>) -> Result<usize> {
    let keys = alg.all_keys()?;
    let mut by_deg: BTreeMap<usize, Vec<Key>> = BTreeMap::new();
    for k in keys {
        by_deg.entry(alg.total_degree(k)).or_default().push(k);
    }
    let mut out = 0;
    for src in by_deg.values() {
        let total: usize = src.iter().map(|&b| alg.piece_dim(b)).sum();
        out += total - left_mult_rank(alg, x, src);
    }
    Ok(out)
}

/// Dimensions of `(R^+)^{*k}` by piece, for `k = 1, 2, ..` until zero.
pub fn power_pieces<A: PieceAlgebra>(alg: &A) -> Result<Vec<BTreeMap<Key, usize>>> {
    let f = alg.field();
    let positive: Vec<Key> = alg.all_keys()?.into_iter().filter(|&k| alg.total_degree(k) > 0).collect();
    let mut current: BTreeMap<Key, Vec<Vec<<A::F as Field>::Elem>>> = positive
        .iter()
        .map(|&k| {
            let n = alg.piece_dim(k);
            (k, (0..n).map(|i| unit(f, n, i)).collect())
        })
        .collect();
    let mut out = Vec::new();
    while !current.is_empty() {
        out.push(current.iter().map(|(k, v)| (*k, v.len())).collect());
        let mut next: BTreeMap<Key, Echelon<A::F>> = BTreeMap::new();
        for &a in &positive {
            let n = alg.piece_dim(a);
            for (&b, vecs) in &current {
                if !a.0.is_disjoint(b.0) {
                    continue;
                }
                for i in 0..n {
                    let e = unit(f, n, i);
                    for v in vecs {
                        if let Some((c, w)) = alg.mul_vec(a, &e, b, v) {
                            if linalg::is_zero_vec(f, &w) {
                                continue;
                            }
                            let ech = next.entry(c).or_insert_with(Echelon::new);
                            if ech.rank() < alg.piece_dim(c) {
                                ech.insert(f, w);
                            }
                        }
                    }
                }
            }
        }
        current = next.into_iter().filter(|(_, e)| e.rank() > 0).map(|(k, e)| (k, e.basis())).collect();
    }
    Ok(out)
}

/// Graded dimensions of `(R^+)^{*k}` from [`power_pieces`].
pub fn power_dims<A: PieceAlgebra>(alg: &A, pieces: &[BTreeMap<Key, usize>]) -> Vec<BTreeMap<usize, usize>> {
    pieces
        .iter()
        .map(|p| {
            let mut m = BTreeMap::new();
            for (&k, &d) in p {
                *m.entry(alg.total_degree(k)).or_insert(0) += d;
            }
            m
        })
        .collect()
}

/// Largest `k` with `(R^+)^{*k} ≠ 0`.
pub fn nilpotence_length<A: PieceAlgebra>(alg: &A) -> Result<usize> {
    Ok(power_pieces(alg)?.len())
}

/// `dim {y : R^+ y = 0}`; the socle splits over pieces.
pub fn socle_dim<A: PieceAlgebra>(alg: &A) -> Result<usize> {
    let f = alg.field();
    let keys = alg.all_keys()?;
    let positive: Vec<Key> = keys.iter().copied().filter(|&k| alg.total_degree(k) > 0).collect();
    let mut total = 0;
    for &y in &keys {
        let ny = alg.piece_dim(y);
        // Rank of v -> (b v)_b over all positive basis elements b.
        let mut blocks: BTreeMap<Key, Echelon<A::F>> = BTreeMap::new();
        let mut rank_rows: Vec<Vec<<A::F as Field>::Elem>> = Vec::new();
        let mut ech = Echelon::<A::F>::new();
        for &b in &positive {
            if !b.0.is_disjoint(y.0) {
                continue;
            }
            let nb = alg.piece_dim(b);
            for i in 0..nb {
                let e = unit(f, nb, i);
                // Matrix of v -> e v as rows indexed by target coordinates.
                let mut cols: Vec<Vec<<A::F as Field>::Elem>> = Vec::with_capacity(ny);
                let mut target = None;
                for t in 0..ny {
                    match alg.mul_vec(b, &e, y, &unit(f, ny, t)) {
                        Some((c, w)) => {
                            target = Some(c);
                            cols.push(w);
                        }
                        None => break,
                    }
                }
                if target.is_none() || cols.len() < ny {
                    continue;
                }
                let rows = cols[0].len();
                for r in 0..rows {
                    let row: Vec<_> = cols.iter().map(|c| c[r].clone()).collect();
                    if !linalg::is_zero_vec(f, &row) {
                        rank_rows.push(row.clone());
                        ech.insert(f, row);
                    }
                }
                if ech.rank() == ny {
                    break;
                }
            }
            if ech.rank() == ny {
                break;
            }
        }
        blocks.clear();
        total += ny - ech.rank();
    }
    Ok(total)
}

/// Dimensions of all pieces by total degree.
pub fn graded_dims<A: PieceAlgebra>(alg: &A) -> Result<BTreeMap<usize, usize>> {
    let mut out = BTreeMap::new();
    for k in alg.all_keys()? {
        *out.entry(alg.total_degree(k)).or_insert(0) += alg.piece_dim(k);
    }
    Ok(out)
}

/// Limits for [`factor_index`].
#[derive(Clone, Copy, Debug)]
pub struct FactorIndexLimits {
    /// Largest number of vectors of `R^k` to enumerate.
    pub enumeration_cap: u64,
    /// Largest number of search nodes for the maximal-subspace search.
    pub search_cap: u64,
    /// Use the rank shortcut when the target degree is one-dimensional.
    pub allow_pairing: bool,
}

impl Default for FactorIndexLimits {
    fn default() -> Self {
        FactorIndexLimits { enumeration_cap: 1 << 20, search_cap: 5_000_000, allow_pairing: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorIndexReport {
    pub value: usize,
    pub method: &'static str,
    /// `dim R^k`.
    pub source_dim: usize,
    /// Number of nonzero divisors found, when enumerated.
    pub divisors: Option<u64>,
    /// `dim span(D)`, an upper bound for the index.
    pub span_dim: Option<usize>,
}

/// `ind_k(x)`: largest `dim V`, `V ⊆ R^k`, with every nonzero `v ∈ V`
/// dividing `x`.
pub fn factor_index<A: PieceAlgebra>(
    alg: &A,
    x: &Element<<A::F as Field>::Elem>,
    k: usize,
    limits: FactorIndexLimits,
) -> Result<FactorIndexReport> {
    let f = alg.field();
    if x.ring_id != alg.ring_id() {
        return Err(Error::Mismatch("element does not belong to this ring".into()));
    }
    let src_keys = alg.keys_of_degree(k)?;
    let n: usize = src_keys.iter().map(|&b| alg.piece_dim(b)).sum();
    if is_zero(f, x) {
        return Ok(FactorIndexReport { value: n, method: "zero", source_dim: n, divisors: None, span_dim: Some(n) });
    }
    let deg = homogeneous_degree(alg, x).ok_or_else(|| Error::Precondition("factor index needs a homogeneous element".into()))?;
    if k > deg || n == 0 {
        return Ok(FactorIndexReport { value: 0, method: "degree", source_dim: n, divisors: Some(0), span_dim: Some(0) });
    }
    let co_keys = alg.keys_of_degree(deg - k)?;
    let cn: usize = co_keys.iter().map(|&b| alg.piece_dim(b)).sum();
    // M_i: R^{deg-k} -> R^{deg}, multiplication by the i-th basis vector.
    let mut layout = Layout::new();
    for key in x.terms.keys() {
        layout.offset(alg, *key);
    }
    let mut mats: Vec<Vec<Vec<(usize, <A::F as Field>::Elem)>>> = Vec::with_capacity(n);
    for &b in &src_keys {
        let nb = alg.piece_dim(b);
        for i in 0..nb {
            let e = unit(f, nb, i);
            let mut cols = Vec::with_capacity(cn);
            for &c in &co_keys {
                let nc = alg.piece_dim(c);
                for j in 0..nc {
                    let mut col = Vec::new();
                    if let Some((t, w)) = alg.mul_vec(b, &e, c, &unit(f, nc, j)) {
                        let o = layout.offset(alg, t);
                        for (r, val) in w.into_iter().enumerate() {
                            if !f.is_zero(&val) {
                                col.push((o + r, val));
                            }
                        }
                    }
                    cols.push(col);
                }
            }
            mats.push(cols);
        }
    }
    // No divisors at all unless x lies in R^k · R^{deg-k}.
    {
        let rows = layout.len;
        let mut all = Matrix::zeros(f, rows, (n * cn).max(1));
        for (i, cols) in mats.iter().enumerate() {
            for (j, col) in cols.iter().enumerate() {
                for (r, val) in col {
                    let cur = all.get(*r, i * cn + j).clone();
                    all.set(*r, i * cn + j, f.add(&cur, val));
                }
            }
        }
        let mut xv = vec![f.zero(); rows];
        for (key, v) in &x.terms {
            let o = layout.offsets[key];
            for (i, val) in v.iter().enumerate() {
                xv[o + i] = val.clone();
            }
        }
        if !divides(f, &all, &xv) {
            return Ok(FactorIndexReport {
                value: 0,
                method: "indecomposable",
                source_dim: n,
                divisors: Some(0),
                span_dim: Some(0),
            });
        }
    }
    let target_dim: usize = alg.keys_of_degree(deg)?.iter().map(|&t| alg.piece_dim(t)).sum();
    if target_dim == 1 && limits.allow_pairing {
        // Every product lands on multiples of x; v divides x iff v pairs
        // nontrivially with R^{deg-k}.
        let mut m = Matrix::zeros(f, n, cn);
        for (i, cols) in mats.iter().enumerate() {
            for (j, col) in cols.iter().enumerate() {
                for (_, val) in col {
                    let cur = m.get(i, j).clone();
                    m.set(i, j, f.add(&cur, val));
                }
            }
        }
        let r = linalg::rank(f, &m);
        return Ok(FactorIndexReport { value: r, method: "pairing", source_dim: n, divisors: None, span_dim: Some(r) });
    }
    let p = f.order().ok_or_else(|| Error::Unsupported("factor index by enumeration needs a finite field".into()))?;
    let count = (p as f64).powi(n as i32);
    cap_check("vectors to enumerate for factor index", count.min(u64::MAX as f64) as u64, limits.enumeration_cap)?;
    let count = p.pow(n as u32);
    let rows = layout.len;
    let mut xv = vec![f.zero(); rows];
    for (key, v) in &x.terms {
        let o = layout.offsets[key];
        for (i, val) in v.iter().enumerate() {
            xv[o + i] = val.clone();
        }
    }
    let dense: Vec<Matrix<<A::F as Field>::Elem>> = mats
        .iter()
        .map(|cols| {
            let mut m = Matrix::zeros(f, rows, cn);
            for (j, col) in cols.iter().enumerate() {
                for (r, val) in col {
                    let cur = m.get(*r, j).clone();
                    m.set(*r, j, f.add(&cur, val));
                }
            }
            m
        })
        .collect();
    let mut digits = vec![0u64; n];
    let mut acc = Matrix::zeros(f, rows, cn);
    let mut divisors: Vec<u64> = Vec::new();
    for code in 1..count {
        // Odometer step: every digit that changes increases by one mod p.
        let mut i = 0;
        loop {
            digits[i] = (digits[i] + 1) % p;
            for (a, b) in acc.data.iter_mut().zip(&dense[i].data) {
                if !f.is_zero(b) {
                    *a = f.add(a, b);
                }
            }
            if digits[i] != 0 {
                break;
            }
            i += 1;
        }
        if divides(f, &acc, &xv) {
            divisors.push(code);
        }
    }
    let report = max_subspace(f, p, n, &divisors, limits.search_cap)?;
    Ok(FactorIndexReport {
        value: report.0,
        method: report.1,
        source_dim: n,
        divisors: Some(divisors.len() as u64),
        span_dim: Some(report.2),
    })
}

fn divides<F: Field>(f: &F, m: &Matrix<F::Elem>, x: &[F::Elem]) -> bool {
    linalg::solve(f, m, x).is_some()
}

fn decode(code: u64, p: u64, n: usize) -> Vec<u64> {
    let mut c = code;
    (0..n)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn encode(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn add_codes(a: u64, b: u64, p: u64, n: usize) -> u64 {
    if p == 2 {
        return a ^ b;
    }
    let (x, y) = (decode(a, p, n), decode(b, p, n));
    encode(&x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect::<Vec<_>>(), p)
}

/// Largest subspace inside `D ∪ {0}`: `(dim, method, dim span D)`.
fn max_subspace<F: Field>(f: &F, p: u64, n: usize, d: &[u64], node_cap: u64) -> Result<(usize, &'static str, usize)> {
    if d.is_empty() {
        return Ok((0, "enumeration", 0));
    }
    let mut ech = Echelon::<F>::new();
    for &c in d {
        let v: Vec<F::Elem> = decode(c, p, n).into_iter().map(|x| f.element(x)).collect();
        ech.insert(f, v);
        if ech.rank() == n {
            break;
        }
    }
    let s = ech.rank();
    if (d.len() as u64 + 1) == p.pow(s as u32) {
        return Ok((s, "enumeration", s));
    }
    let set: HashSet<u64> = d.iter().copied().collect();
    let in_d = |c: u64| c == 0 || set.contains(&c);
    // Representatives of lines only: first nonzero digit equal to 1.
    let lines: Vec<u64> = d
        .iter()
        .copied()
        .filter(|&c| decode(c, p, n).into_iter().find(|&x| x != 0) == Some(1))
        .collect();
    let mut best = 1usize;
    let mut nodes = 0u64;
    let mut stack: Vec<(Vec<u64>, Vec<usize>, usize)> = vec![(vec![0], (0..lines.len()).collect(), 0)];
    while let Some((space, cands, dim)) = stack.pop() {
        nodes += 1;
        if nodes > node_cap {
            return Err(Error::CapExceeded { what: "factor index search nodes", value: nodes, cap: node_cap });
        }
        best = best.max(dim);
        let pd = p.pow(dim as u32);
        // Every extra dimension needs (p-1) p^dim new lines' worth of vectors.
        let bound = {
            let mut t = dim;
            let mut room = cands.len() as u64 * (p - 1);
            while t < s && room >= (p.pow(t as u32 + 1) - p.pow(t as u32)) {
                room -= p.pow(t as u32 + 1) - p.pow(t as u32);
                t += 1;
            }
            t
        };
        if bound <= best {
            continue;
        }
        for (pos, &ci) in cands.iter().enumerate() {
            let v = lines[ci];
            let mut new_space = space.clone();
            let mut ok = true;
            'outer: for a in 1..p {
                let av = if a == 1 { v } else { encode(&decode(v, p, n).iter().map(|x| x * a % p).collect::<Vec<_>>(), p) };
                for &w in &space {
                    let s2 = add_codes(av, w, p, n);
                    if !in_d(s2) {
                        ok = false;
                        break 'outer;
                    }
                    new_space.push(s2);
                }
            }
            if !ok {
                continue;
            }
            debug_assert_eq!(new_space.len() as u64, pd * p);
            let members: HashSet<u64> = new_space.iter().copied().collect();
            let next: Vec<usize> = cands[pos + 1..]
                .iter()
                .copied()
                .filter(|&cj| {
                    let u = lines[cj];
                    !members.contains(&u) && new_space.iter().all(|&w| in_d(add_codes(u, w, p, n)))
                })
                .collect();
            stack.push((new_space, next, dim + 1));
        }
    }
    Ok((best, "search", s))
}
