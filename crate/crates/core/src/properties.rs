//! Combinatorial predicates on complexes: flagness, squares, suspensions,
//! the no-suspension and separable circuit conditions, class Q and belts.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::Complex;
use crate::error::{cap_check, Error, Result};
use crate::face_set::FaceSet;
use crate::field::{Field, FieldKind};
use crate::homology::{is_gorenstein_star, is_homology_sphere, RankContext};
use crate::with_field;

/// Default number of path extensions allowed per SCC triple.
pub const DEFAULT_SCC_CAP: u64 = 1_000_000;
/// Largest common neighbourhood swept by the NSC check.
pub const NSC_NEIGHBOURHOOD_CAP: usize = 24;

pub fn is_flag(k: &Complex) -> bool {
    k.missing_faces().iter().all(|w| w.len() <= 2)
}

/// Vertex sets of the chordless cycles of length `len` in the 1-skeleton,
/// restricted to `within`.
pub fn induced_cycles(adj: &[FaceSet], len: usize, within: FaceSet) -> Vec<FaceSet> {
    let mut out = Vec::new();
    if len < 3 {
        return out;
    }
    for s in within.iter() {
        // Cycles whose least vertex is `s`.
        let allowed = FaceSet::from_bits(within.bits() & !((1u128 << s) | ((1u128 << s) - 1)));
        let mut path = vec![s];
        cycle_dfs(adj, len, allowed, &mut path, FaceSet::EMPTY, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn cycle_dfs(adj: &[FaceSet], len: usize, allowed: FaceSet, path: &mut Vec<usize>, blocked: FaceSet, out: &mut Vec<FaceSet>) {
    let s = path[0];
    let last = *path.last().unwrap();
    let set: FaceSet = path.iter().copied().collect();
    let cands = adj[last].intersection(allowed).difference(set).difference(blocked);
    for w in cands.iter() {
        let closes = adj[w].contains(s);
        if path.len() == 1 {
            path.push(w);
            cycle_dfs(adj, len, allowed, path, FaceSet::EMPTY, out);
            path.pop();
            continue;
        }
        if path.len() + 1 == len {
            if closes && path[1] < w {
                out.push(set.with(w));
            }
            continue;
        }
        if closes {
            continue;
        }
        path.push(w);
        cycle_dfs(adj, len, allowed, path, blocked.union(adj[last]), out);
        path.pop();
    }
}

/// Induced 4-circuits as vertex sets.
pub fn induced_four_circuits(k: &Complex) -> Vec<FaceSet> {
    let adj = k.adjacency();
    induced_cycles(&adj, 4, k.vertex_set())
        .into_iter()
        .filter(|c| k.full_subcomplex_facets(*c).iter().all(|f| f.len() <= 2))
        .collect()
}

/// No full subcomplex is a 4-circuit.
pub fn has_no_square(k: &Complex) -> bool {
    induced_four_circuits(k).is_empty()
}

/// A decomposition `K = K_{a,b} * K_rest`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Suspension {
    pub pair: [usize; 2],
    pub rest: Vec<usize>,
}

pub fn suspension_pair(k: &Complex) -> Option<Suspension> {
    let all = k.vertex_set();
    for w in k.missing_faces().into_iter().filter(|w| w.len() == 2) {
        let (a, b) = (w.first().unwrap(), w.last().unwrap());
        let rest = all.difference(w);
        let base = k.full_subcomplex_facets(rest);
        let mut expect: Vec<FaceSet> = base.iter().flat_map(|g| [g.with(a), g.with(b)]).collect();
        expect.sort();
        if expect == k.facets() {
            return Some(Suspension { pair: [a, b], rest: rest.to_vec() });
        }
    }
    None
}

pub fn is_suspension(k: &Complex) -> bool {
    suspension_pair(k).is_some()
}

/// A full subcomplex `K_{ω∪J} = K_ω * K_J` with `H̃^{n-1} ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NscWitness {
    pub pair: [usize; 2],
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NscReport {
    pub holds: bool,
    pub witness: Option<NscWitness>,
}

/// The no-suspension-of-codimension-one condition for a Gorenstein* `K`.
pub fn satisfies_nsc(k: &Complex, field: FieldKind) -> Result<NscReport> {
    if !is_gorenstein_star(k, field)? {
        return Err(Error::Precondition("NSC is defined for Gorenstein* complexes".into()));
    }
    let n = k.dim();
    with_field!(field, |f| nsc_search(&f, k, n))
}

fn nsc_search<F: Field>(f: &F, k: &Complex, n: isize) -> Result<NscReport> {
    let adj = k.adjacency();
    let target = (n - 1) as usize; // index of degree n - 2
    for w in k.missing_faces().into_iter().filter(|w| w.len() == 2) {
        let (a, b) = (w.first().unwrap(), w.last().unwrap());
        let common = adj[a].intersection(adj[b]);
        cap_check("common neighbourhood size", common.len() as u64, NSC_NEIGHBOURHOOD_CAP as u64)?;
        let (kw, map) = k.full_subcomplex(common);
        // Faces of K_W that fail to lie in lk a ∩ lk b; J must avoid them.
        let mut bad: Vec<FaceSet> = Vec::new();
        for layer in &kw.face_index().by_dim {
            for &s in layer {
                let orig = FaceSet::from_iter(s.iter().map(|i| map[i]));
                if (!k.contains_face(orig.with(a)) || !k.contains_face(orig.with(b)))
                    && !bad.iter().any(|x| x.is_subset(s))
                {
                    bad.push(s);
                }
            }
        }
        let rc = RankContext::new(&kw);
        for j in kw.vertex_set().subsets() {
            if bad.iter().any(|x| x.is_subset(j)) {
                continue;
            }
            let r = rc.ranks(f, j);
            if r.get(target).copied().unwrap_or(0) > 0 {
                let subset = j.iter().map(|i| map[i]).collect();
                return Ok(NscReport { holds: false, witness: Some(NscWitness { pair: [a, b], subset }) });
            }
        }
    }
    Ok(NscReport { holds: true, witness: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TripleStatus {
    Witness(FaceSet),
    NoWitness,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct TripleReport {
    pub pair: [usize; 2],
    pub excluded: usize,
    pub status: TripleStatus,
    pub extensions: u64,
}

#[derive(Clone, Debug)]
pub struct SccReport {
    pub verdict: Verdict,
    pub cap: u64,
    pub triples: Vec<TripleReport>,
}

impl SccReport {
    pub fn failures(&self) -> impl Iterator<Item = &TripleReport> {
        self.triples.iter().filter(|t| !matches!(t.status, TripleStatus::Witness(_)))
    }

    pub fn capped(&self) -> bool {
        self.triples.iter().any(|t| t.status == TripleStatus::Unknown)
    }

    /// JSON with 1-based labels.
    pub fn to_json_value(&self) -> serde_json::Value {
        let failures: Vec<serde_json::Value> = self
            .failures()
            .map(|t| {
                serde_json::json!({
                    "pair": [t.pair[0] + 1, t.pair[1] + 1],
                    "excluded": t.excluded + 1,
                    "status": if t.status == TripleStatus::Unknown { "unknown" } else { "no_witness" },
                })
            })
            .collect();
        serde_json::json!({
            "verdict": self.verdict,
            "cap": self.cap,
            "triples": self.triples.len(),
            "failures": failures,
        })
    }
}

fn scc_preconditions(k: &Complex) -> Result<()> {
    if k.m() < 3 {
        return Err(Error::Precondition("SCC needs at least 3 vertices".into()));
    }
    if !k.is_core() {
        return Err(Error::Precondition("SCC is defined only when K = core K".into()));
    }
    if !is_flag(k) {
        return Err(Error::Precondition("SCC is defined for flag complexes".into()));
    }
    Ok(())
}

/// All triples `({i1,i2}, ik)` of the condition.
pub fn scc_triples(k: &Complex) -> Vec<(FaceSet, usize)> {
    let mut out = Vec::new();
    for w in k.missing_faces().into_iter().filter(|w| w.len() == 2) {
        for x in k.vertex_set().difference(w).iter() {
            out.push((w, x));
        }
    }
    out
}

/// The separable circuit condition over every triple.
pub fn satisfies_scc(k: &Complex, cap: u64) -> Result<SccReport> {
    let triples = scc_triples(k);
    satisfies_scc_on(k, &triples, cap)
}

/// The separable circuit condition restricted to the given triples.
pub fn satisfies_scc_on(k: &Complex, triples: &[(FaceSet, usize)], cap: u64) -> Result<SccReport> {
    scc_preconditions(k)?;
    let adj = k.adjacency();
    for &(w, x) in triples {
        if w.len() != 2 || k.contains_face(w) || w.contains(x) || x >= k.m() {
            return Err(Error::Precondition(format!("({w}, {}) is not an SCC triple", x + 1)));
        }
    }
    let reports: Vec<TripleReport> = triples
        .par_iter()
        .map(|&(w, x)| {
            let (status, extensions) = search_circuit(&adj, k.vertex_set(), w, x, cap);
            TripleReport { pair: [w.first().unwrap(), w.last().unwrap()], excluded: x, status, extensions }
        })
        .collect();
    let verdict = if reports.iter().any(|t| t.status == TripleStatus::NoWitness) {
        Verdict::Fails
    } else if reports.iter().any(|t| t.status == TripleStatus::Unknown) {
        Verdict::Unknown
    } else {
        Verdict::Holds
    };
    Ok(SccReport { verdict, cap, triples: reports })
}

fn bfs_dist(adj: &[FaceSet], within: FaceSet, src: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[src] = 0;
    let mut frontier = FaceSet::singleton(src);
    let mut seen = frontier;
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = FaceSet::EMPTY;
        for v in frontier.iter() {
            next = next.union(adj[v].intersection(within));
        }
        next = next.difference(seen);
        for v in next.iter() {
            dist[v] = d;
        }
        seen = seen.union(next);
        frontier = next;
    }
    dist
}

struct CircuitSearch<'a> {
    adj: &'a [FaceSet],
    within: FaceSet,
    a: usize,
    b: usize,
    x: usize,
    dist_b: Vec<usize>,
    dist_a: Vec<usize>,
    limit: usize,
    steps: u64,
    cap: u64,
    truncated: bool,
}

enum Flow {
    Found(FaceSet),
    Continue,
    Cap,
}

impl CircuitSearch<'_> {
    fn witness_ok(&self, cycle: FaceSet) -> bool {
        let j = cycle.difference(FaceSet::singleton(self.a).with(self.b)).with(self.x);
        Complex::components_within(self.adj, j) >= 2
    }

    /// `path` starts at `a`; `blocked` holds neighbours of all path
    /// vertices except the first and the last.
    fn dfs(&mut self, path: &mut Vec<usize>, set: FaceSet, blocked: FaceSet) -> Flow {
        let last = *path.last().unwrap();
        let has_b = set.contains(self.b);
        let cands = self.adj[last].intersection(self.within).difference(set).difference(blocked);
        for w in cands.iter() {
            self.steps += 1;
            if self.steps > self.cap {
                return Flow::Cap;
            }
            let closes = path.len() >= 2 && self.adj[w].contains(self.a);
            let now_b = has_b || w == self.b;
            if closes {
                if now_b && path.len() + 1 >= 4 && self.witness_ok(set.with(w)) {
                    return Flow::Found(set.with(w));
                }
                continue;
            }
            // Length lower bound: current + to b (if needed) + back to a.
            let rest = if now_b {
                self.dist_a[w].saturating_sub(1)
            } else {
                self.dist_b[w].saturating_add(self.dist_a[self.b].saturating_sub(1))
            };
            let need = (path.len() + 1).saturating_add(rest).max(4);
            if need > self.limit {
                if need <= self.within.len() + 1 {
                    self.truncated = true;
                }
                continue;
            }
            let nb = if path.len() >= 2 { blocked.union(self.adj[last]) } else { blocked };
            path.push(w);
            let r = self.dfs(path, set.with(w), nb);
            path.pop();
            match r {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }
}

/// Search for an induced cycle through `ω` avoiding `x` whose remainder
/// with `x` is disconnected, shortest cycles first.
pub fn search_circuit(adj: &[FaceSet], vertices: FaceSet, w: FaceSet, x: usize, cap: u64) -> (TripleStatus, u64) {
    let (a, b) = (w.first().unwrap(), w.last().unwrap());
    let within = vertices.without(x);
    let dist_b = bfs_dist(adj, within, b);
    let dist_a = bfs_dist(adj, within, a);
    if dist_b[a] == usize::MAX {
        return (TripleStatus::NoWitness, 0);
    }
    let mut s = CircuitSearch {
        adj,
        within: within.without(a),
        a,
        b,
        x,
        dist_b,
        dist_a,
        limit: 4,
        steps: 0,
        cap,
        truncated: false,
    };
    loop {
        s.truncated = false;
        let mut path = vec![a];
        match s.dfs(&mut path, FaceSet::singleton(a), FaceSet::EMPTY) {
            Flow::Found(i) => return (TripleStatus::Witness(i), s.steps),
            Flow::Cap => return (TripleStatus::Unknown, s.steps),
            Flow::Continue => {}
        }
        if !s.truncated || s.limit >= within.len() {
            return (TripleStatus::NoWitness, s.steps);
        }
        s.limit += 1;
    }
}

/// Independent check of the four witness conditions.
pub fn verify_scc_witness(k: &Complex, w: FaceSet, x: usize, i: FaceSet) -> bool {
    if !w.is_subset(i) || i.contains(x) || i.len() < 4 {
        return false;
    }
    let facets = k.full_subcomplex_facets(i);
    if facets.iter().any(|f| f.len() != 2) {
        return false;
    }
    let adj = k.adjacency();
    if i.iter().any(|v| adj[v].intersection(i).len() != 2) || Complex::components_within(&adj, i) != 1 {
        return false;
    }
    let j = i.difference(w).with(x);
    Complex::components_within(&adj, j) >= 2
}

/// Generalized homology sphere over every listed field.
pub fn is_generalized_homology_sphere(k: &Complex, fields: &[FieldKind]) -> Result<bool> {
    for &f in fields {
        if !is_homology_sphere(k, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_two_sphere(k: &Complex) -> Result<()> {
    if k.dim() != 2 || !is_homology_sphere(k, FieldKind::Prime(2))? {
        return Err(Error::Precondition("expected a simplicial 2-sphere".into()));
    }
    Ok(())
}

/// A flag 2-sphere whose induced 4-circuits are all vertex links.
pub fn class_q_membership(k: &Complex) -> Result<bool> {
    require_two_sphere(k)?;
    if !is_flag(k) {
        return Ok(false);
    }
    let adj = k.adjacency();
    Ok(induced_four_circuits(k).iter().all(|c| is_simple_circuit(&adj, *c)))
}

fn is_simple_circuit(adj: &[FaceSet], c: FaceSet) -> bool {
    (0..adj.len()).any(|v| adj[v] == c)
}

/// `k`-belts of the dual simple polytope: induced `k`-circuits, and for
/// `k = 3` the 3-cycles that are not faces.
pub fn belts(k: &Complex, len: usize) -> Result<Vec<FaceSet>> {
    require_two_sphere(k)?;
    let adj = k.adjacency();
    let cycles = induced_cycles(&adj, len, k.vertex_set());
    Ok(if len == 3 {
        cycles.into_iter().filter(|c| !k.contains_face(*c)).collect()
    } else {
        cycles
    })
}

/// A separating circuit `I` for `(ω, i_s)` on a sphere in class Q whose
/// links at `ω ∩ lk i_s` are not 4-circuits.
pub fn separating_circuit_witness(k: &Complex, w: FaceSet, is: usize) -> Result<FaceSet> {
    if !class_q_membership(k)? {
        return Err(Error::Precondition("complex is not in class Q".into()));
    }
    if w.len() != 2 || k.contains_face(w) {
        return Err(Error::Precondition(format!("{w} is not a missing pair")));
    }
    if is >= k.m() || w.contains(is) {
        return Err(Error::Precondition("i_s must be a vertex outside ω".into()));
    }
    let adj = k.adjacency();
    for i in adj[is].intersection(w).iter() {
        if adj[i].len() == 4 {
            return Err(Error::Precondition(format!("link of vertex {} is a 4-circuit", i + 1)));
        }
    }
    match search_circuit(&adj, k.vertex_set(), w, is, u64::MAX) {
        (TripleStatus::Witness(i), _) => Ok(i),
        _ => Err(Error::WitnessNotFound(format!("no separating circuit for ({w}, {})", is + 1))),
    }
}

/// Hypothesis of the separating-circuit result for `(ω, i_s)`.
pub fn separating_circuit_hypothesis(k: &Complex, w: FaceSet, is: usize) -> bool {
    let adj = k.adjacency();
    w.len() == 2
        && !k.contains_face(w)
        && !w.contains(is)
        && adj[is].intersection(w).iter().all(|i| adj[i].len() != 4)
}

#[derive(Clone, Debug, Serialize)]
pub struct PropsReport {
    pub flag: bool,
    pub no_square: bool,
    pub suspension: bool,
    pub gorenstein_star: bool,
    pub nsc: Option<bool>,
    pub scc: serde_json::Value,
    pub class_q: Option<bool>,
}

/// Every predicate at once; inapplicable ones are reported as `null` or
/// with a reason. SCC runs on `triples` when given, else on all of them.
pub fn props_report(
    k: &Complex,
    field: FieldKind,
    scc_cap: u64,
    triples: Option<&[(FaceSet, usize)]>,
) -> Result<PropsReport> {
    let gorenstein_star = is_gorenstein_star(k, field)?;
    let nsc = if gorenstein_star { Some(satisfies_nsc(k, field)?.holds) } else { None };
    let scc = match scc_preconditions(k) {
        Ok(()) => match triples {
            Some(t) => satisfies_scc_on(k, t, scc_cap)?.to_json_value(),
            None => satisfies_scc(k, scc_cap)?.to_json_value(),
        },
        Err(e) => serde_json::json!({ "verdict": "not_applicable", "reason": e.to_string() }),
    };
    let class_q = if k.dim() == 2 && is_homology_sphere(k, FieldKind::Prime(2))? { Some(class_q_membership(k)?) } else { None };
    Ok(PropsReport {
        flag: is_flag(k),
        no_square: has_no_square(k),
        suspension: is_suspension(k),
        gorenstein_star,
        nsc,
        scc,
        class_q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygon(n: usize) -> Complex {
        Complex::from_lists(n, &(0..n).map(|i| vec![i, (i + 1) % n]).collect::<Vec<_>>()).unwrap()
    }

    fn octahedron() -> Complex {
        let s0 = Complex::from_lists(2, &[vec![0], vec![1]]).unwrap();
        s0.join(&s0).unwrap().join(&s0).unwrap()
    }

    #[test]
    fn cycles_in_polygons() {
        for n in 4..9 {
            let k = polygon(n);
            let adj = k.adjacency();
            assert_eq!(induced_cycles(&adj, n, k.vertex_set()).len(), 1);
            assert!(induced_cycles(&adj, n - 1, k.vertex_set()).is_empty());
        }
    }

    #[test]
    fn octahedron_predicates() {
        let k = octahedron();
        assert!(is_flag(&k));
        assert!(is_suspension(&k));
        assert_eq!(induced_four_circuits(&k).len(), 3);
        assert!(!satisfies_nsc(&k, FieldKind::Prime(2)).unwrap().holds);
        assert_eq!(satisfies_scc(&k, DEFAULT_SCC_CAP).unwrap().verdict, Verdict::Fails);
        assert!(class_q_membership(&k).unwrap());
    }

    #[test]
    fn square_fails_scc() {
        assert_eq!(satisfies_scc(&polygon(4), DEFAULT_SCC_CAP).unwrap().verdict, Verdict::Fails);
        assert!(!satisfies_nsc(&polygon(5), FieldKind::Prime(2)).unwrap().holds);
    }

    #[test]
    fn scc_rejects_cones() {
        let cone = Complex::from_lists(5, &[vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]]).unwrap();
        assert!(matches!(satisfies_scc(&cone, 10), Err(Error::Precondition(_))));
    }
}
