//! Bigraded Betti numbers of face rings via full-subcomplex cohomology.
//!
//! `β^{-i,2j} = Σ_{|J| = j} dim H̃^{j-i-1}(K_J)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{cap_check, Result};
use crate::face_set::FaceSet;
use crate::field::FieldKind;
use crate::homology::RankContext;
use crate::with_field;

/// Default largest vertex count for full `2^m` sweeps.
pub const DEFAULT_SWEEP_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub i: usize,
    pub j: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiEntry {
    pub i: usize,
    #[serde(rename = "J")]
    pub subset: Vec<usize>,
    pub rank: usize,
}

/// Nonzero `β^{-i,2j}`, keyed by `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub field: FieldKind,
    pub ranks: BTreeMap<(usize, usize), usize>,
    /// Nonzero `β^{-i,2J}` keyed by `(i, J)` when requested.
    pub multigraded: Option<BTreeMap<(usize, FaceSet), usize>>,
}

#[derive(Serialize, Deserialize)]
struct BettiTableJson {
    field: FieldKind,
    entries: Vec<BettiEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    multigraded: Option<Vec<MultiEntry>>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.ranks.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> Vec<BettiEntry> {
        self.ranks.iter().map(|(&(i, j), &rank)| BettiEntry { i, j, rank }).collect()
    }

    pub fn total(&self) -> usize {
        self.ranks.values().sum()
    }

    /// Dimensions by total degree `2j - i`.
    pub fn by_total_degree(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (&(i, j), &r) in &self.ranks {
            *out.entry(2 * j - i).or_insert(0) += r;
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let multigraded = self.multigraded.as_ref().map(|mg| {
            mg.iter()
                .map(|(&(i, s), &rank)| MultiEntry { i, subset: s.iter().map(|v| v + 1).collect(), rank })
                .collect()
        });
        serde_json::to_value(BettiTableJson { field: self.field, entries: self.entries(), multigraded })
            .expect("serialisable")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let t: BettiTableJson = serde_json::from_value(v.clone())?;
        let ranks = t.entries.iter().filter(|e| e.rank > 0).map(|e| ((e.i, e.j), e.rank)).collect();
        let multigraded = t.multigraded.map(|mg| {
            mg.iter().map(|e| ((e.i, e.subset.iter().map(|v| v - 1).collect()), e.rank)).collect()
        });
        Ok(BettiTable { field: t.field, ranks, multigraded })
    }

    /// Aligned text table: rows `i`, columns `j`, zeros shown as `.`.
    pub fn to_text(&self) -> String {
        let max_i = self.ranks.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.ranks.keys().map(|k| k.1).max().unwrap_or(0);
        let width = self.ranks.values().map(|r| r.to_string().len()).max().unwrap_or(1).max(max_j.to_string().len());
        let mut s = String::new();
        let _ = write!(s, "{:>4} |", "i\\j");
        for j in 0..=max_j {
            let _ = write!(s, " {:>width$}", j);
        }
        s.push('\n');
        for i in 0..=max_i {
            let _ = write!(s, "{:>4} |", i);
            for j in 0..=max_j {
                let r = self.get(i, j);
                if r == 0 {
                    let _ = write!(s, " {:>width$}", ".");
                } else {
                    let _ = write!(s, " {:>width$}", r);
                }
            }
            s.push('\n');
        }
        let _ = writeln!(s, "field: {}", self.field);
        s
    }

    /// `β^{-i,2j} = β^{-(m-d-i), 2(m-j)}` for all `(i, j)`, `d = dim K + 1`.
    pub fn is_poincare_symmetric(&self, m: usize, d: usize) -> bool {
        self.ranks.iter().all(|(&(i, j), &r)| {
            m >= d + i && m >= j && self.get(m - d - i, m - j) == r
        })
    }
}

/// Options for the subset sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub cap: usize,
    pub multigraded: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { cap: DEFAULT_SWEEP_CAP, multigraded: false }
    }
}

/// `(J, [dim H̃^d(K_J) for d = -1, 0, ..])` for every `J` with nonzero
/// reduced cohomology.
pub fn nonzero_subset_ranks(k: &Complex, field: FieldKind, cap: usize) -> Result<Vec<(FaceSet, Vec<usize>)>> {
    cap_check("vertex count for subset sweep", k.m() as u64, cap as u64)?;
    let ctx = RankContext::new(k);
    let n = 1u64 << k.m();
    let out: Vec<(FaceSet, Vec<usize>)> = with_field!(field, |f| {
        (0..n)
            .into_par_iter()
            .filter_map(|bits| {
                let j = FaceSet::from_bits(bits as u128);
                let r = ctx.ranks(&f, j);
                r.iter().any(|&x| x > 0).then_some((j, r))
            })
            .collect()
    });
    Ok(out)
}

/// Bigraded Betti numbers of `k[K]` over the field.
pub fn bigraded_betti(k: &Complex, field: FieldKind, opts: SweepOptions) -> Result<BettiTable> {
    let subs = nonzero_subset_ranks(k, field, opts.cap)?;
    let mut ranks = BTreeMap::new();
    let mut mg = opts.multigraded.then(BTreeMap::new);
    for (j, r) in subs {
        for (di, &x) in r.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let i = j.len() - di;
            *ranks.entry((i, j.len())).or_insert(0) += x;
            if let Some(mg) = mg.as_mut() {
                mg.insert((i, j), x);
            }
        }
    }
    Ok(BettiTable { field, ranks, multigraded: mg })
}

/// `dim H^p(Z_K)` for `p = 0 ..= m + dim K + 1`.
pub fn ma_cohomology_dims(k: &Complex, field: FieldKind, cap: usize) -> Result<Vec<usize>> {
    let subs = nonzero_subset_ranks(k, field, cap)?;
    let top = (k.m() as isize + k.dim() + 1).max(0) as usize;
    let mut out = vec![0; top + 1];
    for (j, r) in subs {
        for (di, &x) in r.iter().enumerate() {
            out[j.len() + di] += x;
        }
    }
    Ok(out)
}

/// `dim H^p(RZ_K) = Σ_J dim H̃^{p-1}(K_J)` for `p = 0 ..= dim K + 1`.
pub fn real_ma_cohomology_dims(k: &Complex, field: FieldKind, cap: usize) -> Result<Vec<usize>> {
    let subs = nonzero_subset_ranks(k, field, cap)?;
    let top = (k.dim() + 1).max(0) as usize;
    let mut out = vec![0; top + 1];
    for (_, r) in subs {
        for (di, &x) in r.iter().enumerate() {
            out[di] += x;
        }
    }
    Ok(out)
}

/// Comparison of `β^{-1,2j}` with the number of missing faces of size `j`.
#[derive(Clone, Debug, Serialize)]
pub struct MissingFaceCheck {
    pub ok: bool,
    /// `(j, β^{-1,2j}, #missing faces with j vertices)`.
    pub rows: Vec<(usize, usize, usize)>,
}

pub fn missing_face_count_check(k: &Complex, table: &BettiTable) -> MissingFaceCheck {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for w in k.missing_faces() {
        *counts.entry(w.len()).or_insert(0) += 1;
    }
    let mut js: Vec<usize> = counts.keys().copied().collect();
    js.extend(table.ranks.keys().filter(|k| k.0 == 1).map(|k| k.1));
    js.sort();
    js.dedup();
    let rows: Vec<(usize, usize, usize)> =
        js.into_iter().map(|j| (j, table.get(1, j), counts.get(&j).copied().unwrap_or(0))).collect();
    MissingFaceCheck { ok: rows.iter().all(|r| r.1 == r.2), rows }
}
