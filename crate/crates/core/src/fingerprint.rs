//! Isomorphism invariants of the bigraded ring `H*(Z_K)`, comparable
//! across complexes.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::FactorIndexLimits;
use crate::bhr::{BhrRing, DEFAULT_RING_CAP};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::field::{Field, FieldKind};
use crate::hochster::{bigraded_betti, SweepOptions, DEFAULT_SWEEP_CAP};
use crate::homology::is_gorenstein_star;
use crate::with_field;

#[derive(Clone, Copy, Debug)]
pub struct FingerprintOptions {
    /// Vertex cap for the Betti sweep.
    pub sweep_cap: usize,
    /// Vertex cap for invariants that visit the whole ring (nil, socle).
    pub ring_cap: usize,
}

impl Default for FingerprintOptions {
    fn default() -> Self {
        FingerprintOptions { sweep_cap: DEFAULT_SWEEP_CAP, ring_cap: DEFAULT_RING_CAP }
    }
}

/// Components left as `None` were skipped because `m` exceeds the ring cap
/// or the hypothesis (Gorenstein*) fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingFingerprint {
    pub field: String,
    pub m: usize,
    /// `β^{-i,2j}` keyed by `(i, j)`.
    pub betti: BTreeMap<(usize, usize), usize>,
    /// `dim H^p(Z_K)` keyed by `p`.
    pub graded_betti: BTreeMap<usize, usize>,
    pub nil: Option<usize>,
    /// Sorted `dim ann₃(ω̃)` over two-vertex missing faces `ω`.
    pub ann3: Vec<usize>,
    pub socle: Option<usize>,
    pub ind3_top: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Difference {
    pub component: String,
    pub a: Value,
    pub b: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub equal: bool,
    pub first_difference: Option<Difference>,
}

fn opt(v: Option<usize>) -> Value {
    v.map_or(Value::Null, Value::from)
}

impl RingFingerprint {
    pub fn to_json_value(&self) -> Value {
        let betti: Vec<Value> =
            self.betti.iter().map(|(&(i, j), &r)| json!({"i": i, "j": j, "rank": r})).collect();
        let graded: Vec<Value> = self.graded_betti.iter().map(|(&p, &r)| json!({"p": p, "rank": r})).collect();
        json!({
            "field": self.field,
            "m": self.m,
            "betti": betti,
            "graded_betti": graded,
            "nil": opt(self.nil),
            "ann3": self.ann3,
            "socle": opt(self.socle),
            "ind3_top": opt(self.ind3_top),
        })
    }

    fn scalar_parts(&self, graded: bool) -> Vec<(&'static str, Value)> {
        let mut v = vec![("nil", opt(self.nil))];
        if !graded {
            v.push(("ann3", json!(self.ann3)));
        }
        v.push(("socle", opt(self.socle)));
        v.push(("ind3_top", opt(self.ind3_top)));
        v
    }
}

pub fn fingerprint(k: &Complex, field: FieldKind, opts: FingerprintOptions) -> Result<RingFingerprint> {
    let table = bigraded_betti(k, field, SweepOptions { cap: opts.sweep_cap, multigraded: false })?;
    let gorenstein = is_gorenstein_star(k, field)?;
    let whole = k.m() <= opts.ring_cap;
    with_field!(field, |f| {
        let ring = BhrRing::new(f, k.clone()).with_exhaustive_cap(opts.ring_cap);
        ring_parts(&ring, field, table.ranks.clone(), table.by_total_degree(), gorenstein, whole)
    })
}

fn ring_parts<F: Field>(
    ring: &BhrRing<F>,
    field: FieldKind,
    betti: BTreeMap<(usize, usize), usize>,
    graded_betti: BTreeMap<usize, usize>,
    gorenstein: bool,
    whole: bool,
) -> Result<RingFingerprint> {
    let k = ring.complex();
    let mut ann3 = Vec::new();
    for w in k.missing_faces().into_iter().filter(|w| w.len() == 2) {
        let x = ring.missing_face_class(w)?;
        ann3.push(ring.annihilator_dim(&x, 3)?);
    }
    ann3.sort_unstable();
    let (nil, socle) = if whole { (Some(ring.nilpotence_length()?), Some(ring.socle_dim()?)) } else { (None, None) };
    let ind3_top = if gorenstein {
        let top = ring.top_class()?;
        Some(ring.factor_index(&top, 3, FactorIndexLimits::default())?.value)
    } else {
        None
    };
    Ok(RingFingerprint { field: field.to_string(), m: k.m(), betti, graded_betti, nil, ann3, socle, ind3_top })
}

fn first_map_difference<K: Ord + Copy>(
    a: &BTreeMap<K, usize>,
    b: &BTreeMap<K, usize>,
    name: impl Fn(K) -> String,
) -> Option<Difference> {
    let keys: std::collections::BTreeSet<K> = a.keys().chain(b.keys()).copied().collect();
    keys.into_iter().find_map(|key| {
        let (x, y) = (a.get(&key).copied().unwrap_or(0), b.get(&key).copied().unwrap_or(0));
        (x != y).then(|| Difference { component: name(key), a: x.into(), b: y.into() })
    })
}

/// Compare component by component. With `graded`, only invariants of the
/// singly graded ring are used.
pub fn compare_fingerprints(a: &RingFingerprint, b: &RingFingerprint, graded: bool) -> Result<Comparison> {
    if a.field != b.field {
        return Err(Error::Mismatch(format!("fingerprints over {} and {}", a.field, b.field)));
    }
    let diff = if graded {
        first_map_difference(&a.graded_betti, &b.graded_betti, |p| format!("H^{p}"))
    } else {
        first_map_difference(&a.betti, &b.betti, |(i, j)| format!("beta^(-{i},{})", 2 * j))
    };
    let diff = diff.or_else(|| {
        a.scalar_parts(graded)
            .into_iter()
            .zip(b.scalar_parts(graded))
            .find(|(x, y)| x.1 != y.1)
            .map(|(x, y)| Difference { component: x.0.to_string(), a: x.1, b: y.1 })
    });
    Ok(Comparison { equal: diff.is_none(), first_difference: diff })
}
