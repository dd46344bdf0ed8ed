//! The Taylor resolution of the Stanley–Reisner ideal, tensored with the
//! field, as an independent route to `Tor` and its product.
//!
//! A cell is a set `u` of missing faces; its support `S_u` is their union
//! and its multidegree is `(-|u|, 2 S_u)`. The differential is
//! `d(u) = Σ_i (-1)^i ε_i ∂_i u`, where `i` counts positions in `u` from 0
//! and `ε_i = 1` exactly when dropping the `i`-th face keeps the support.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::algebra::{Key, PieceAlgebra};
use crate::complex::Complex;
use crate::error::{cap_check, Error, Result};
use crate::face_set::FaceSet;
use crate::field::{Field, FieldKind};
use crate::hochster::BettiTable;
use crate::linalg::{self, Matrix, Subquotient};
use crate::with_field;

pub const DEFAULT_TAYLOR_CAP: usize = 16;
pub const DEFAULT_LYUBEZNIK_CELL_CAP: u64 = 4_000_000;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

pub(crate) fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

/// Which cells to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaylorMode {
    /// Every subset of the missing faces.
    Full,
    /// The Lyubeznik subcomplex for the fixed order of missing faces; it is
    /// closed under the differential and is itself a resolution.
    Lyubeznik,
}

#[derive(Clone, Copy, Debug)]
pub struct TaylorOptions {
    /// Largest number of missing faces for the full complex.
    pub mf_cap: usize,
    /// Largest number of cells for the Lyubeznik subcomplex.
    pub cell_cap: u64,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        TaylorOptions { mf_cap: DEFAULT_TAYLOR_CAP, cell_cap: DEFAULT_LYUBEZNIK_CELL_CAP }
    }
}

/// Cells of one support, grouped by size.
#[derive(Clone, Debug)]
struct Group {
    cells: Vec<Vec<u64>>,
    pos: Vec<HashMap<u64, usize>>,
}

fn support_of(mf: &[FaceSet], u: u64) -> FaceSet {
    let mut s = FaceSet::EMPTY;
    let mut b = u;
    while b != 0 {
        s = s.union(mf[b.trailing_zeros() as usize]);
        b &= b - 1;
    }
    s
}

/// Cells of the Taylor complex split by support.
#[derive(Clone, Debug)]
pub struct TaylorCells {
    pub mode: TaylorMode,
    pub missing_faces: Vec<FaceSet>,
    groups: BTreeMap<FaceSet, Group>,
}

impl TaylorCells {
    pub fn build(k: &Complex, mode: TaylorMode, opts: TaylorOptions) -> Result<Self> {
        let mf = k.missing_faces();
        if mf.len() > 64 {
            return Err(Error::CapExceeded { what: "missing faces", value: mf.len() as u64, cap: 64 });
        }
        let mut by_support: BTreeMap<FaceSet, Vec<u64>> = BTreeMap::new();
        match mode {
            TaylorMode::Full => {
                cap_check("missing faces for the Taylor complex", mf.len() as u64, opts.mf_cap as u64)?;
                for u in 0..(1u64 << mf.len()) {
                    by_support.entry(support_of(&mf, u)).or_default().push(u);
                }
            }
            TaylorMode::Lyubeznik => {
                let cells = lyubeznik_cells(&mf, opts.cell_cap)?;
                for u in cells {
                    by_support.entry(support_of(&mf, u)).or_default().push(u);
                }
            }
        }
        let groups = by_support
            .into_iter()
            .map(|(s, us)| {
                let top = us.iter().map(|u| u.count_ones() as usize).max().unwrap_or(0);
                let mut cells = vec![Vec::new(); top + 1];
                for u in us {
                    cells[u.count_ones() as usize].push(u);
                }
                for c in &mut cells {
                    c.sort();
                }
                let pos = cells.iter().map(|c| c.iter().enumerate().map(|(i, u)| (*u, i)).collect()).collect();
                (s, Group { cells, pos })
            })
            .collect();
        Ok(TaylorCells { mode, missing_faces: mf, groups })
    }

    pub fn num_cells(&self) -> usize {
        self.groups.values().map(|g| g.cells.iter().map(|c| c.len()).sum::<usize>()).sum()
    }

    pub fn supports(&self) -> impl Iterator<Item = &FaceSet> {
        self.groups.keys()
    }

    /// `d: C_k -> C_{k-1}` inside the group of support `s`.
    fn differential<F: Field>(&self, f: &F, s: FaceSet, k: usize) -> Matrix<F::Elem> {
        let g = &self.groups[&s];
        let rows = if k == 0 { 0 } else { g.cells.get(k - 1).map_or(0, |c| c.len()) };
        let src = g.cells.get(k).map_or(&[][..], |c| &c[..]);
        let mut m = Matrix::zeros(f, rows, src.len());
        if k == 0 {
            return m;
        }
        for (c, &u) in src.iter().enumerate() {
            let mut b = u;
            let mut i = 0;
            while b != 0 {
                let g_idx = b.trailing_zeros();
                let v = u & !(1u64 << g_idx);
                if support_of(&self.missing_faces, v) == s {
                    let r = g.pos[k - 1][&v];
                    m.set(r, c, f.sign(i % 2 == 1));
                }
                b &= b - 1;
                i += 1;
            }
        }
        m
    }

    fn gf2_rank_of_differential(&self, s: FaceSet, k: usize) -> usize {
        let g = &self.groups[&s];
        if k == 0 || k >= g.cells.len() {
            return 0;
        }
        let lower = &g.pos[k - 1];
        let words = lower.len().div_ceil(64).max(1);
        let mut rows: Vec<Vec<u64>> = g.cells[k]
            .iter()
            .map(|&u| {
                let mut row = vec![0u64; words];
                let mut b = u;
                while b != 0 {
                    let v = u & !(1u64 << b.trailing_zeros());
                    if let Some(&r) = lower.get(&v) {
                        row[r / 64] |= 1 << (r % 64);
                    }
                    b &= b - 1;
                }
                row
            })
            .collect();
        linalg::gf2_rank(&mut rows)
    }

    /// `dim H_k` of the group of support `s`, for all `k`.
    pub fn group_ranks<F: Field>(&self, f: &F, s: FaceSet) -> Vec<usize> {
        let g = &self.groups[&s];
        let top = g.cells.len();
        let rk: Vec<usize> = (0..=top)
            .map(|k| {
                if f.kind() == FieldKind::Prime(2) {
                    self.gf2_rank_of_differential(s, k)
                } else if k == 0 || k >= top {
                    0
                } else {
                    linalg::rank(f, &self.differential(f, s, k))
                }
            })
            .collect();
        (0..top).map(|k| g.cells[k].len() - rk[k] - rk[k + 1]).collect()
    }
}

/// Cells `{i_1 < .. < i_q}` such that no earlier missing face `ω_j`,
/// `j < i_t`, lies in the support of any tail `{i_t, .., i_q}` with `t < q`.
fn lyubeznik_cells(mf: &[FaceSet], cap: u64) -> Result<Vec<u64>> {
    let n = mf.len();
    let first_inside = |s: FaceSet| mf.iter().position(|w| w.is_subset(s)).unwrap_or(n);
    let mut out: Vec<u64> = vec![0];
    // Stack of tails: (cell, support, smallest index).
    let mut stack: Vec<(u64, FaceSet, usize)> = Vec::new();
    for i in 0..n {
        out.push(1u64 << i);
        stack.push((1u64 << i, mf[i], i));
    }
    while let Some((u, s, lo)) = stack.pop() {
        for i in 0..lo {
            let s2 = s.union(mf[i]);
            if first_inside(s2) < i {
                continue;
            }
            let u2 = u | 1u64 << i;
            out.push(u2);
            if out.len() as u64 > cap {
                return Err(Error::CapExceeded { what: "Lyubeznik cells", value: out.len() as u64, cap });
            }
            stack.push((u2, s2, i));
        }
    }
    Ok(out)
}

/// Bigraded Betti numbers from the Taylor complex. Uses the full complex
/// when the number of missing faces is within `opts.mf_cap`, otherwise its
/// Lyubeznik subcomplex.
pub fn tor_dims_via_taylor(k: &Complex, field: FieldKind, opts: TaylorOptions, multigraded: bool) -> Result<BettiTable> {
    let n_mf = k.missing_faces().len();
    let mode = if n_mf <= opts.mf_cap { TaylorMode::Full } else { TaylorMode::Lyubeznik };
    tor_dims_with_mode(k, field, mode, opts, multigraded)
}

pub fn tor_dims_with_mode(
    k: &Complex,
    field: FieldKind,
    mode: TaylorMode,
    opts: TaylorOptions,
    multigraded: bool,
) -> Result<BettiTable> {
    let cells = TaylorCells::build(k, mode, opts)?;
    let per_support: Vec<(FaceSet, Vec<usize>)> = with_field!(field, |f| {
        cells.supports().map(|&s| (s, cells.group_ranks(&f, s))).collect()
    });
    let mut ranks = BTreeMap::new();
    let mut mg = multigraded.then(BTreeMap::new);
    for (s, r) in per_support {
        for (i, &x) in r.iter().enumerate() {
            if x == 0 {
                continue;
            }
            *ranks.entry((i, s.len())).or_insert(0) += x;
            if let Some(mg) = mg.as_mut() {
                mg.insert((i, s), x);
            }
        }
    }
    Ok(BettiTable { field, ranks, multigraded: mg })
}

/// `Tor` with the product induced by concatenating cells, on the full
/// Taylor complex.
pub struct TaylorRing<F: Field> {
    id: u64,
    f: F,
    cells: TaylorCells,
    /// Homology by `(support, k)`.
    homology: BTreeMap<Key, Subquotient<F>>,
}

impl<F: Field> TaylorRing<F> {
    pub fn new(f: F, k: &Complex, mf_cap: usize) -> Result<Self> {
        let opts = TaylorOptions { mf_cap, ..Default::default() };
        let cells = TaylorCells::build(k, TaylorMode::Full, opts)?;
        let mut homology = BTreeMap::new();
        for (&s, g) in &cells.groups {
            let top = g.cells.len();
            let diffs: Vec<Matrix<F::Elem>> = (0..=top).map(|q| cells.differential(&f, s, q)).collect();
            for q in 0..top {
                let incoming = diffs.get(q + 1).filter(|d| d.cols > 0);
                let outgoing = Some(&diffs[q]).filter(|d| d.rows > 0);
                let sq = Subquotient::compute(&f, g.cells[q].len(), incoming, outgoing);
                if sq.rank() > 0 {
                    homology.insert((s, q as i32), sq);
                }
            }
        }
        Ok(TaylorRing { id: fresh_id(), f, cells, homology })
    }

    pub fn missing_faces(&self) -> &[FaceSet] {
        &self.cells.missing_faces
    }

    pub fn keys(&self) -> Vec<Key> {
        self.homology.keys().copied().collect()
    }
}

impl<F: Field> PieceAlgebra for TaylorRing<F> {
    type F = F;

    fn field(&self) -> &F {
        &self.f
    }

    fn ring_id(&self) -> u64 {
        self.id
    }

    fn total_degree(&self, key: Key) -> usize {
        2 * key.0.len() - key.1 as usize
    }

    fn piece_dim(&self, key: Key) -> usize {
        self.homology.get(&key).map_or(0, |h| h.rank())
    }

    fn keys_of_degree(&self, deg: usize) -> Result<Vec<Key>> {
        Ok(self.homology.keys().copied().filter(|&k| self.total_degree(k) == deg).collect())
    }

    fn all_keys(&self) -> Result<Vec<Key>> {
        Ok(self.keys())
    }

    fn mul_vec(&self, a: Key, x: &[F::Elem], b: Key, y: &[F::Elem]) -> Option<(Key, Vec<F::Elem>)> {
        if !a.0.is_disjoint(b.0) {
            return None;
        }
        let f = &self.f;
        let c = (a.0.union(b.0), a.1 + b.1);
        let (ha, hb) = (self.homology.get(&a)?, self.homology.get(&b)?);
        let Some(hc) = self.homology.get(&c) else {
            return Some((c, Vec::new()));
        };
        let ga = &self.cells.groups[&a.0];
        let gb = &self.cells.groups[&b.0];
        let gc = &self.cells.groups[&c.0];
        let cx = ha.combine(f, x, ga.cells[a.1 as usize].len());
        let cy = hb.combine(f, y, gb.cells[b.1 as usize].len());
        let mut chain = vec![f.zero(); gc.cells[c.1 as usize].len()];
        for (i, u) in ga.cells[a.1 as usize].iter().enumerate() {
            if f.is_zero(&cx[i]) {
                continue;
            }
            for (j, v) in gb.cells[b.1 as usize].iter().enumerate() {
                if f.is_zero(&cy[j]) {
                    continue;
                }
                let inv = FaceSet::from_bits(*u as u128).inversions_with(FaceSet::from_bits(*v as u128));
                let coef = f.mul(&f.mul(&cx[i], &cy[j]), &f.sign(inv % 2 == 1));
                let r = gc.pos[c.1 as usize][&(u | v)];
                chain[r] = f.add(&chain[r], &coef);
            }
        }
        Some((c, hc.coords(f, &chain)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochster::{bigraded_betti, SweepOptions};

    fn polygon(n: usize) -> Complex {
        Complex::from_lists(n, &(0..n).map(|i| vec![i, (i + 1) % n]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn square_matches_hochster() {
        let k = polygon(4);
        let t = tor_dims_via_taylor(&k, FieldKind::Prime(2), TaylorOptions::default(), true).unwrap();
        let h = bigraded_betti(&k, FieldKind::Prime(2), SweepOptions { multigraded: true, ..Default::default() }).unwrap();
        assert_eq!(t, h);
    }

    #[test]
    fn lyubeznik_agrees_with_full() {
        for n in 4..8 {
            let k = polygon(n);
            let opts = TaylorOptions::default();
            let full = tor_dims_with_mode(&k, FieldKind::Prime(3), TaylorMode::Full, opts, true).unwrap();
            let lyu = tor_dims_with_mode(&k, FieldKind::Prime(3), TaylorMode::Lyubeznik, opts, true).unwrap();
            assert_eq!(full, lyu);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let opts = TaylorOptions { mf_cap: 3, ..Default::default() };
        assert!(TaylorCells::build(&polygon(6), TaylorMode::Full, opts).is_err());
    }
}
