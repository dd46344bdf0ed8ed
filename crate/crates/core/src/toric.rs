//! Characteristic matrices over simplicial spheres: validation, cohomology
//! ranks of the associated manifold and weak equivalence.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::face_set::FaceSet;
use crate::field::Rationals;
use crate::iso;
use crate::linalg::{self, Matrix};

/// An `n × m` integer matrix stored by columns, column `i` for vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharMatrix {
    pub n: usize,
    pub m: usize,
    pub columns: Vec<Vec<i64>>,
}

impl CharMatrix {
    pub fn new(n: usize, columns: Vec<Vec<i64>>) -> Result<Self> {
        let c = CharMatrix { n, m: columns.len(), columns };
        c.check_shape()?;
        Ok(c)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidCharMatrix("ragged rows".into()));
        }
        CharMatrix::new(n, (0..m).map(|j| rows.iter().map(|r| r[j]).collect()).collect())
    }

    fn check_shape(&self) -> Result<()> {
        if self.columns.len() != self.m || self.columns.iter().any(|c| c.len() != self.n) {
            return Err(Error::InvalidCharMatrix(format!("expected {} columns of length {}", self.m, self.n)));
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: CharMatrix = serde_json::from_str(s)?;
        c.check_shape()?;
        Ok(c)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    fn select(&self, s: FaceSet) -> Vec<Vec<i64>> {
        s.iter().map(|v| self.columns[v].clone()).collect()
    }

    /// `A · Λ · B` with `B = diag(signs)`.
    pub fn transform(&self, a: &[Vec<i64>], signs: &[i64]) -> CharMatrix {
        let columns = self
            .columns
            .iter()
            .zip(signs)
            .map(|(c, s)| (0..self.n).map(|i| s * (0..self.n).map(|k| a[i][k] * c[k]).sum::<i64>()).collect())
            .collect();
        CharMatrix { n: self.n, m: self.m, columns }
    }

    /// Columns permuted by a vertex map: column `j` becomes column `g[j]`
    /// of `self`.
    pub fn permuted(&self, g: &[usize]) -> CharMatrix {
        CharMatrix { n: self.n, m: self.m, columns: g.iter().map(|&v| self.columns[v].clone()).collect() }
    }
}

/// Determinant of a square integer matrix given by columns (Bareiss).
pub fn determinant(cols: &[Vec<i64>]) -> BigInt {
    let n = cols.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(cols[j][i])).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// gcd of the maximal minors of an `n × k` matrix (`k ≤ n`), given by
/// columns; 1 iff the columns span a unimodular sublattice.
pub fn minor_gcd(cols: &[Vec<i64>], n: usize) -> BigInt {
    let k = cols.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut g = BigInt::zero();
    for rows in FaceSet::full(n).subsets().filter(|r| r.len() == k) {
        let sub: Vec<Vec<i64>> = cols.iter().map(|c| rows.iter().map(|r| c[r]).collect()).collect();
        g = g.gcd(&determinant(&sub));
        if g.is_one() {
            break;
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub valid: bool,
    /// First failing face, 0-based.
    pub failing_face: Option<Vec<usize>>,
    pub determinant: Option<String>,
}

fn check_pair(k: &Complex, lam: &CharMatrix) -> Result<()> {
    if lam.m != k.m() {
        return Err(Error::Mismatch(format!("matrix has {} columns, complex has {} vertices", lam.m, k.m())));
    }
    if lam.n as isize != k.dim() + 1 {
        return Err(Error::Mismatch(format!("matrix has {} rows, expected dim K + 1 = {}", lam.n, k.dim() + 1)));
    }
    if !k.is_pure() {
        return Err(Error::Precondition("complex must be pure".into()));
    }
    Ok(())
}

/// `det(λ_{i₁},…,λ_{iₙ}) = ±1` on every facet; `strict` additionally asks
/// every face to span a unimodular sublattice.
pub fn validate_characteristic(k: &Complex, lam: &CharMatrix, strict: bool) -> Result<Validation> {
    check_pair(k, lam)?;
    for &f in k.facets() {
        let d = determinant(&lam.select(f));
        if d.abs() != BigInt::one() {
            return Ok(Validation { valid: false, failing_face: Some(f.to_vec()), determinant: Some(d.to_string()) });
        }
    }
    if strict {
        for layer in k.face_index().by_dim.iter().skip(1) {
            for &s in layer {
                if !minor_gcd(&lam.select(s), lam.n).is_one() {
                    return Ok(Validation { valid: false, failing_face: Some(s.to_vec()), determinant: None });
                }
            }
        }
    }
    Ok(Validation { valid: true, failing_face: None, determinant: None })
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// h-vector of a pure complex from its f-vector.
pub fn h_vector(k: &Complex) -> Result<Vec<i64>> {
    if !k.is_pure() {
        return Err(Error::Precondition("h-vector needs a pure complex".into()));
    }
    let d = (k.dim() + 1) as i64;
    let mut f = vec![1i64];
    f.extend(k.f_vector().iter().map(|&x| x as i64));
    Ok((0..=d)
        .map(|i| (0..=i).map(|j| (if (i - j) % 2 == 0 { 1 } else { -1 }) * binom(d - j, i - j) * f[j as usize]).sum())
        .collect())
}

/// Face-supported monomials of degree `deg` as sorted vertex multisets.
fn monomials(k: &Complex, deg: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(deg);
    fn rec(k: &Complex, deg: usize, start: usize, support: FaceSet, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == deg {
            out.push(cur.clone());
            return;
        }
        for v in start..k.m() {
            let s = support.with(v);
            if k.contains_face(s) {
                cur.push(v);
                rec(k, deg, v, s, cur, out);
                cur.pop();
            }
        }
    }
    rec(k, deg, 0, FaceSet::EMPTY, &mut cur, &mut out);
    out
}

/// `dim_ℚ (ℚ[K]/(θ₁,…,θₙ))_{2i}` for `i = 0..=n`, with `θ_r = Σ_j λ_{rj} x_j`.
pub fn quotient_ring_ranks(k: &Complex, lam: &CharMatrix) -> Result<Vec<usize>> {
    let v = validate_characteristic(k, lam, false)?;
    if !v.valid {
        return Err(Error::InvalidCharMatrix(format!("fails on face {:?}", v.failing_face)));
    }
    let f = Rationals;
    let mut out = Vec::with_capacity(lam.n + 1);
    let mut lower = monomials(k, 0);
    for deg in 0..=lam.n {
        let basis = if deg == 0 { lower.clone() } else { monomials(k, deg) };
        if deg == 0 {
            out.push(basis.len());
            continue;
        }
        let pos: HashMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for mono in &lower {
            for r in 0..lam.n {
                let mut row = vec![BigRational::zero(); basis.len()];
                for (j, col) in lam.columns.iter().enumerate() {
                    if col[r] == 0 {
                        continue;
                    }
                    let mut prod = mono.clone();
                    let at = prod.partition_point(|&x| x <= j);
                    prod.insert(at, j);
                    if let Some(&p) = pos.get(&prod) {
                        row[p] += BigRational::from_integer(col[r].into());
                    }
                }
                rows.push(row);
            }
        }
        let rank = if rows.is_empty() { 0 } else { linalg::rank(&f, &Matrix::from_rows(basis.len(), &rows)) };
        out.push(basis.len() - rank);
        lower = basis;
    }
    Ok(out)
}

/// A characteristic matrix from a proper `(n+1)`-colouring of the
/// 1-skeleton: colours map to `e₁,…,eₙ, e₁+⋯+eₙ`.
pub fn characteristic_from_coloring(k: &Complex) -> Result<CharMatrix> {
    let n = (k.dim() + 1) as usize;
    let adj = k.adjacency();
    let mut colour = vec![usize::MAX; k.m()];
    let mut order: Vec<usize> = (0..k.m()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    fn rec(i: usize, order: &[usize], adj: &[FaceSet], colour: &mut [usize], c: usize) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for col in 0..c {
            if adj[v].iter().all(|u| colour[u] != col) {
                colour[v] = col;
                if rec(i + 1, order, adj, colour, c) {
                    return true;
                }
            }
        }
        colour[v] = usize::MAX;
        false
    }
    if !rec(0, &order, &adj, &mut colour, n + 1) {
        return Err(Error::Unsupported(format!("1-skeleton is not {}-colourable", n + 1)));
    }
    let columns = colour
        .iter()
        .map(|&c| (0..n).map(|i| if c == n || c == i { 1 } else { 0 }).collect())
        .collect();
    CharMatrix::new(n, columns)
}

/// Columns `F₁,F₂,F₃,F₁',F₂',F₃'` over the octahedron with missing pairs
/// `{1,4}, {2,5}, {3,6}`.
pub fn cube_family(k: i64) -> CharMatrix {
    CharMatrix::from_rows(&[vec![1, 0, 0, 1, 0, 0], vec![0, 1, 0, 0, -1, k], vec![0, 0, 1, 0, 0, -1]]).expect("fixed shape")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    /// `A` as rows.
    pub a: Vec<Vec<i64>>,
    /// Diagonal of `B`.
    pub signs: Vec<i64>,
    /// Vertex map applied to `Λ'` first, when automorphisms are allowed.
    pub automorphism: Option<Vec<usize>>,
}

fn to_rational_cols(cols: &[Vec<i64>], n: usize) -> Matrix<BigRational> {
    let c: Vec<Vec<BigRational>> =
        cols.iter().map(|c| c.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    Matrix::from_columns(n, &c, BigRational::zero())
}

/// Solve `Λ = A · Λ' · B` for fixed column order.
fn equivalence_fixed(lam: &CharMatrix, lam2: &CharMatrix, base: FaceSet) -> Option<(Vec<Vec<i64>>, Vec<i64>)> {
    let f = Rationals;
    let n = lam.n;
    let idx = base.to_vec();
    let target = to_rational_cols(&lam.select(base), n);
    for mask in 0u32..(1 << n) {
        let signs_b: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let src: Vec<Vec<i64>> =
            idx.iter().zip(&signs_b).map(|(&v, &s)| lam2.columns[v].iter().map(|x| x * s).collect()).collect();
        let inv = linalg::inverse(&f, &to_rational_cols(&src, n))?;
        // A = target · inv
        let mut a = vec![vec![0i64; n]; n];
        let mut integral = true;
        for (i, row) in a.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut s = BigRational::zero();
                for t in 0..n {
                    s += target.get(i, t) * inv.get(t, j);
                }
                if !s.is_integer() {
                    integral = false;
                }
                *cell = s.to_integer().to_i64().unwrap_or(i64::MAX);
            }
        }
        if !integral {
            continue;
        }
        let a_cols: Vec<Vec<i64>> = (0..n).map(|j| a.iter().map(|r| r[j]).collect()).collect();
        if determinant(&a_cols).abs() != BigInt::one() {
            continue;
        }
        let mut signs = vec![0i64; lam.m];
        let mut ok = true;
        for j in 0..lam.m {
            let img: Vec<i64> = (0..n).map(|i| (0..n).map(|t| a[i][t] * lam2.columns[j][t]).sum()).collect();
            if img == lam.columns[j] {
                signs[j] = 1;
            } else if img.iter().zip(&lam.columns[j]).all(|(x, y)| -x == *y) {
                signs[j] = -1;
            } else {
                ok = false;
                break;
            }
        }
        if ok {
            return Some((a, signs));
        }
    }
    None
}

/// Search for `Λ = A · Λ' · B`, `A ∈ GL(n,ℤ)`, `B = diag(±1)`. The signs on
/// one facet are enumerated; they determine `A` and force the rest. With
/// `use_automorphisms`, `Λ'` may first be relabelled by an automorphism of
/// `K`.
pub fn weak_equivalence(
    k: &Complex,
    lam: &CharMatrix,
    lam2: &CharMatrix,
    use_automorphisms: bool,
) -> Result<Option<EquivalenceWitness>> {
    check_pair(k, lam)?;
    check_pair(k, lam2)?;
    for l in [lam, lam2] {
        if !validate_characteristic(k, l, false)?.valid {
            return Err(Error::InvalidCharMatrix("both matrices must be characteristic".into()));
        }
    }
    let base = k.facets()[0];
    if !use_automorphisms {
        return Ok(equivalence_fixed(lam, lam2, base).map(|(a, signs)| EquivalenceWitness { a, signs, automorphism: None }));
    }
    let autos = iso::automorphisms(k, 100_000);
    Ok(autos.par_iter().find_map_first(|g| {
        equivalence_fixed(lam, &lam2.permuted(g), base).map(|(a, signs)| EquivalenceWitness {
            a,
            signs,
            automorphism: Some(g.clone()),
        })
    }))
}

/// Check `Λ = A · Λ'_g · B` directly.
pub fn verify_equivalence(lam: &CharMatrix, lam2: &CharMatrix, w: &EquivalenceWitness) -> bool {
    let src = match &w.automorphism {
        Some(g) => lam2.permuted(g),
        None => lam2.clone(),
    };
    let a_cols: Vec<Vec<i64>> = (0..lam.n).map(|j| w.a.iter().map(|r| r[j]).collect()).collect();
    determinant(&a_cols).abs() == BigInt::one()
        && w.signs.iter().all(|s| s.abs() == 1)
        && src.transform(&w.a, &w.signs) == *lam
}
