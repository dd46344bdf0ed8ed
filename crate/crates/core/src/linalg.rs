//! Dense exact linear algebra over a [`Field`].

use crate::field::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Matrix { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, f.zero())
    }

    pub fn from_rows(cols: usize, rows: &[Vec<E>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<E>], zero: E) -> Self {
        let mut m = Self::filled(rows, cols.len(), zero);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

/// Reduce to reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = f.inv(m.get(r, c));
        for j in c..m.cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = f.neg(m.get(i, c));
            for j in c..m.cols {
                if f.is_zero(m.get(r, j)) {
                    continue;
                }
                let v = f.axpy(m.get(i, j), &factor, m.get(r, j));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank by forward elimination.
pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut m = m.clone();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = f.inv(m.get(r, c));
        for i in r + 1..m.rows {
            if f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = f.neg(&f.mul(m.get(i, c), &inv));
            for j in c..m.cols {
                if f.is_zero(m.get(r, j)) {
                    continue;
                }
                let v = f.axpy(m.get(i, j), &factor, m.get(r, j));
                m.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}

/// Basis of the null space `{x : m x = 0}`, one vector per free column.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut red = m.clone();
    let pivots = rref(f, &mut red);
    let mut is_pivot = vec![None; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in 0..m.cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = f.neg(red.get(r, free));
        }
        out.push(v);
    }
    out
}

/// Indices of a maximal set of independent columns, chosen leftmost first.
pub fn pivot_columns<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<usize> {
    let mut red = m.clone();
    rref(f, &mut red)
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut aug = Matrix::zeros(f, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, f.one());
    }
    let piv = rref(f, &mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    let mut out = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Some(out)
}

/// Some solution of `m x = b`, or `None` if inconsistent.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(b.len(), m.rows);
    let mut aug = Matrix::zeros(f, m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, b[i].clone());
    }
    let piv = rref(f, &mut aug);
    if piv.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![f.zero(); m.cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug.get(r, m.cols).clone();
    }
    Some(x)
}

pub fn mat_vec<F: Field>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(v.len(), m.cols);
    (0..m.rows)
        .map(|i| {
            let mut acc = f.zero();
            for (a, b) in m.row(i).iter().zip(v) {
                if !f.is_zero(a) && !f.is_zero(b) {
                    acc = f.axpy(&acc, a, b);
                }
            }
            acc
        })
        .collect()
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

/// `ker(outgoing) / im(incoming)` inside a space of dimension `dim`, with
/// chosen representatives and a projector onto their coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient<F: Field> {
    pub reps: Vec<Vec<F::Elem>>,
    rows: Vec<usize>,
    proj: Matrix<F::Elem>,
}

impl<F: Field> Subquotient<F> {
    /// `incoming` maps into the space (its columns span the boundaries);
    /// `outgoing` maps out of it (its kernel is the cycles).
    pub fn compute(f: &F, dim: usize, incoming: Option<&Matrix<F::Elem>>, outgoing: Option<&Matrix<F::Elem>>) -> Self {
        let b_basis: Vec<Vec<F::Elem>> = match incoming {
            Some(d) if d.cols > 0 => pivot_columns(f, d).into_iter().map(|c| d.column(c)).collect(),
            _ => Vec::new(),
        };
        let z_basis: Vec<Vec<F::Elem>> = match outgoing {
            Some(d) if d.rows > 0 => kernel(f, d),
            _ => (0..dim)
                .map(|c| {
                    let mut v = vec![f.zero(); dim];
                    v[c] = f.one();
                    v
                })
                .collect(),
        };
        let mut cols = b_basis.clone();
        cols.extend(z_basis.iter().cloned());
        let m = Matrix::from_columns(dim, &cols, f.zero());
        let piv = pivot_columns(f, &m);
        let nb = b_basis.len();
        let reps: Vec<Vec<F::Elem>> = piv.iter().filter(|&&c| c >= nb).map(|&c| z_basis[c - nb].clone()).collect();
        if reps.is_empty() {
            return Subquotient { reps, rows: Vec::new(), proj: Matrix::zeros(f, 0, 0) };
        }
        let mut all = b_basis;
        all.extend(reps.iter().cloned());
        let w = Matrix::from_columns(dim, &all, f.zero());
        let rows = pivot_columns(f, &w.transpose());
        let inv = inverse(f, &w.select_rows(&rows)).expect("independent rows");
        let r = reps.len();
        let mut proj = Matrix::zeros(f, r, rows.len());
        for a in 0..r {
            for c in 0..rows.len() {
                proj.set(a, c, inv.get(nb + a, c).clone());
            }
        }
        Subquotient { reps, rows, proj }
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of a cycle in the representative basis.
    pub fn coords(&self, f: &F, cycle: &[F::Elem]) -> Vec<F::Elem> {
        if self.reps.is_empty() {
            return Vec::new();
        }
        let sub: Vec<F::Elem> = self.rows.iter().map(|&i| cycle[i].clone()).collect();
        mat_vec(f, &self.proj, &sub)
    }

    /// The cycle `Σ c_i rep_i`.
    pub fn combine(&self, f: &F, coords: &[F::Elem], dim: usize) -> Vec<F::Elem> {
        let mut out = vec![f.zero(); dim];
        for (c, rep) in coords.iter().zip(&self.reps) {
            if f.is_zero(c) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(rep) {
                if !f.is_zero(x) {
                    *o = f.axpy(o, c, x);
                }
            }
        }
        out
    }
}

/// Rank over GF(2) of bit-packed rows; rows are destroyed.
pub fn gf2_rank(rows: &mut [Vec<u64>]) -> usize {
    let n = rows.len();
    if n == 0 {
        return 0;
    }
    let words = rows[0].len();
    let mut r = 0;
    for w in 0..words {
        for b in 0..64 {
            if r == n {
                return r;
            }
            let bit = 1u64 << b;
            let Some(p) = (r..n).find(|&i| rows[i][w] & bit != 0) else {
                continue;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot = &head[r];
            for row in tail.iter_mut() {
                if row[w] & bit != 0 {
                    for k in w..words {
                        row[k] ^= pivot[k];
                    }
                }
            }
            r += 1;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};

    #[test]
    fn kernel_is_annihilated() {
        let f = Rationals;
        let rows: Vec<Vec<_>> = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect();
        let m = Matrix::from_rows(4, &rows);
        let k = kernel(&f, &m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&f, &mat_vec(&f, &m, v)));
        }
        assert_eq!(rank(&f, &m), 2);
    }

    #[test]
    fn inverse_roundtrip_mod_3() {
        let f = Fp::new(3).unwrap();
        let m = Matrix::from_rows(2, &[vec![1, 2], vec![0, 1]]);
        let inv = inverse(&f, &m).unwrap();
        let prod = mat_vec(&f, &m, &mat_vec(&f, &inv, &[1, 0]));
        assert_eq!(prod, vec![1, 0]);
    }

    #[test]
    fn gf2_rank_matches_generic() {
        let f = Fp::new(2).unwrap();
        let rows = vec![vec![1u32, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        let m = Matrix::from_rows(3, &rows);
        let mut packed: Vec<Vec<u64>> = vec![vec![0b011], vec![0b110], vec![0b101]];
        assert_eq!(rank(&f, &m), 2);
        assert_eq!(gf2_rank(&mut packed), 2);
    }
}
