//! Example factory: catalog spheres, polytope face lattices, subdivisions,
//! the `ξ` operations, the construction `E_P`, puzzle-moves and
//! connected sums.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::face_set::{FaceSet, MAX_VERTICES};
use crate::iso;

fn lists(m: usize, l: &[&[usize]]) -> Complex {
    Complex::from_lists(m, &l.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).expect("catalog entry")
}

/// `∂Δ^k` on `k + 1` vertices.
pub fn simplex_boundary(k: usize) -> Result<Complex> {
    if k == 0 || k + 1 > MAX_VERTICES {
        return Err(Error::Precondition(format!("simplex_boundary({k}) needs 1 <= k < {MAX_VERTICES}")));
    }
    let all = FaceSet::full(k + 1);
    Complex::new(k + 1, all.iter().map(|v| all.without(v)).collect())
}

pub fn polygon(n: usize) -> Result<Complex> {
    if !(3..=MAX_VERTICES).contains(&n) {
        return Err(Error::Precondition(format!("polygon({n}) needs at least 3 vertices")));
    }
    Complex::from_lists(n, &(0..n).map(|i| vec![i, (i + 1) % n]).collect::<Vec<_>>())
}

/// Path with `n` vertices.
pub fn path(n: usize) -> Result<Complex> {
    match n {
        0 => Err(Error::Precondition("path(0) has no vertices".into())),
        1 => Ok(Complex::simplex(1)),
        _ => Complex::from_lists(n, &(0..n - 1).map(|i| vec![i, i + 1]).collect::<Vec<_>>()),
    }
}

pub fn tetrahedron() -> Complex {
    simplex_boundary(3).expect("catalog entry")
}

/// `∂Δ¹ * ∂Δ¹ * ∂Δ¹` with missing pairs `{1,4}, {2,5}, {3,6}`.
pub fn octahedron() -> Complex {
    lists(
        6,
        &[&[0, 1, 2], &[0, 1, 5], &[0, 4, 2], &[0, 4, 5], &[3, 1, 2], &[3, 1, 5], &[3, 4, 2], &[3, 4, 5]],
    )
}

/// Icosahedron: apex 1, upper ring 2..6, lower ring 7..11, apex 12.
pub fn icosahedron() -> Complex {
    let mut f = Vec::new();
    for i in 0..5 {
        let (u, u1) = (1 + i, 1 + (i + 1) % 5);
        let (l, l1) = (6 + i, 6 + (i + 1) % 5);
        f.push(vec![0, u, u1]);
        f.push(vec![11, l, l1]);
        f.push(vec![u, u1, l]);
        f.push(vec![u1, l, l1]);
    }
    Complex::from_lists(12, &f).expect("catalog entry")
}

/// `B_n`: suspension of the `(n-2)`-gon; apexes are the last two vertices.
pub fn bipyramid(n: usize) -> Result<Complex> {
    if n < 5 {
        return Err(Error::Precondition(format!("B({n}) needs n >= 5")));
    }
    let k = n - 2;
    let mut f = Vec::new();
    for i in 0..k {
        f.push(vec![i, (i + 1) % k, k]);
        f.push(vec![i, (i + 1) % k, k + 1]);
    }
    Complex::from_lists(n, &f)
}

fn parse_call(name: &str) -> Option<(&str, usize)> {
    let open = name.find('(')?;
    let inner = name[open + 1..].strip_suffix(')')?;
    Some((&name[..open], inner.trim().parse().ok()?))
}

/// Named complexes: `T4`, `O6`, `I12`, `B(n)`, `polygon(n)`,
/// `simplex_boundary(k)`, `simplex(n)`, `path(n)`.
pub fn catalog(name: &str) -> Result<Complex> {
    let lower = name.trim().to_ascii_lowercase();
    match lower.as_str() {
        "t4" | "tetrahedron" => return Ok(tetrahedron()),
        "o6" | "octahedron" => return Ok(octahedron()),
        "i12" | "icosahedron" => return Ok(icosahedron()),
        _ => {}
    }
    match parse_call(&lower) {
        Some(("b", n)) => bipyramid(n),
        Some(("polygon", n)) | Some(("c", n)) => polygon(n),
        Some(("simplex_boundary", k)) => simplex_boundary(k),
        Some(("simplex", n)) if (1..=MAX_VERTICES).contains(&n) => Ok(Complex::simplex(n)),
        Some(("path", n)) => path(n),
        _ => Err(Error::Precondition(format!("unknown catalog name `{name}`"))),
    }
}

/// Names whose checksums identify the catalog build.
pub const CATALOG_FINGERPRINT_NAMES: &[&str] =
    &["T4", "O6", "I12", "B(6)", "B(7)", "B(8)", "B(9)", "polygon(5)", "simplex_boundary(4)"];

/// Boundary of a 3-polytope as a face lattice: faces are vertex cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeBoundary {
    pub vertices: usize,
    pub faces: Vec<Vec<usize>>,
}

impl PolytopeBoundary {
    pub fn new(vertices: usize, faces: Vec<Vec<usize>>) -> Result<Self> {
        let p = PolytopeBoundary { vertices, faces };
        p.validate()?;
        Ok(p)
    }

    /// Edges with the faces containing them.
    pub fn edges(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut e: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                e.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        e
    }

    fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::Precondition(format!("invalid face lattice: {s}")));
        for f in &self.faces {
            let distinct: BTreeSet<usize> = f.iter().copied().collect();
            if f.len() < 3 || distinct.len() != f.len() || f.iter().any(|&v| v >= self.vertices) {
                return bad(format!("face {f:?} is not a cycle on the vertex set"));
            }
        }
        let edges = self.edges();
        if let Some((e, fs)) = edges.iter().find(|(_, fs)| fs.len() != 2) {
            return bad(format!("edge {e:?} lies in {} faces", fs.len()));
        }
        let covered: BTreeSet<usize> = self.faces.iter().flatten().copied().collect();
        if covered.len() != self.vertices {
            return bad("some vertex lies in no face".into());
        }
        let chi = self.vertices as i64 - edges.len() as i64 + self.faces.len() as i64;
        if chi != 2 {
            return bad(format!("V - E + F = {chi}"));
        }
        Ok(())
    }

    /// The dual lattice of a simplicial 2-sphere: one vertex per triangle,
    /// one face per vertex of `k`, ordered around its link.
    pub fn dual_of_sphere(k: &Complex) -> Result<Self> {
        if k.dim() != 2 || !k.is_pure() {
            return Err(Error::Precondition("dual lattice needs a pure 2-dimensional complex".into()));
        }
        let idx = k.facet_lookup();
        let mut faces = Vec::with_capacity(k.m());
        for v in 0..k.m() {
            let link = k.link_facets(FaceSet::singleton(v));
            let cyc = cycle_order(&link).ok_or_else(|| Error::Precondition(format!("link of {} is not a cycle", v + 1)))?;
            let n = cyc.len();
            faces.push((0..n).map(|i| idx[&FaceSet::from_iter([v, cyc[i], cyc[(i + 1) % n]])]).collect());
        }
        PolytopeBoundary::new(k.facets().len(), faces)
    }

    /// Boundary of a simplicial 3-polytope as a simplicial complex, when
    /// every face is a triangle.
    pub fn to_simplicial(&self) -> Result<Complex> {
        if self.faces.iter().any(|f| f.len() != 3) {
            return Err(Error::Precondition("not every face is a triangle".into()));
        }
        Complex::from_lists(self.vertices, &self.faces)
    }
}

/// Vertex order around a 1-dimensional cycle given by its edges.
fn cycle_order(edges: &[FaceSet]) -> Option<Vec<usize>> {
    let mut nb: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in edges {
        if e.len() != 2 {
            return None;
        }
        let (a, b) = (e.first()?, e.last()?);
        nb.entry(a).or_default().push(b);
        nb.entry(b).or_default().push(a);
    }
    if nb.values().any(|x| x.len() != 2) {
        return None;
    }
    let start = *nb.keys().next()?;
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = nb[&start][0];
    while cur != start {
        order.push(cur);
        let next = if nb[&cur][0] == prev { nb[&cur][1] } else { nb[&cur][0] };
        prev = cur;
        cur = next;
    }
    (order.len() == nb.len()).then_some(order)
}

/// Face lattices: `c8`/`cube`, `d20`/`dodecahedron`, and the polytopes
/// whose boundaries are catalog spheres.
pub fn lattice(name: &str) -> Result<PolytopeBoundary> {
    match name.trim().to_ascii_lowercase().as_str() {
        "c8" | "cube" => PolytopeBoundary::dual_of_sphere(&octahedron()),
        "d20" | "dodecahedron" => PolytopeBoundary::dual_of_sphere(&icosahedron()),
        other => {
            let k = catalog(other)?;
            if k.dim() != 2 {
                return Err(Error::Precondition(format!("`{name}` is not a 2-sphere")));
            }
            PolytopeBoundary::new(k.m(), k.facets().iter().map(|f| f.to_vec()).collect())
        }
    }
}

/// Cone every face over its boundary: vertices of `Γ`, then face centres.
pub fn xi1(g: &PolytopeBoundary) -> Result<Complex> {
    g.validate()?;
    let n = g.vertices + g.faces.len();
    check_size(n)?;
    let mut f = Vec::new();
    for (fi, face) in g.faces.iter().enumerate() {
        let c = g.vertices + fi;
        for i in 0..face.len() {
            f.push(vec![c, face[i], face[(i + 1) % face.len()]]);
        }
    }
    Complex::from_lists(n, &f)
}

/// `ξ₁` followed by stellar subdivision of every original edge; edge
/// vertices come last, in edge order.
pub fn xi2(g: &PolytopeBoundary) -> Result<Complex> {
    let mut k = xi1(g)?;
    for (a, b) in g.edges().keys() {
        k = stellar_subdivision(&k, FaceSet::from_iter([*a, *b]))?;
    }
    Ok(k)
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::Precondition(format!("result would have {n} vertices (max {MAX_VERTICES})")));
    }
    Ok(())
}

/// Stellar subdivision at a face `σ`, adding vertex `m`.
pub fn stellar_subdivision(k: &Complex, s: FaceSet) -> Result<Complex> {
    if s.is_empty() || !k.contains_face(s) {
        return Err(Error::NotAFace(format!("{s}")));
    }
    check_size(k.m() + 1)?;
    let x = k.m();
    let mut sets = Vec::new();
    for &f in k.facets() {
        if s.is_subset(f) {
            sets.extend(s.iter().map(|v| f.without(v).with(x)));
        } else {
            sets.push(f);
        }
    }
    Complex::new(k.m() + 1, sets)
}

/// Barycentric subdivision with the face labelling each new vertex.
pub fn barycentric_subdivision(k: &Complex) -> Result<(Complex, Vec<FaceSet>)> {
    let labels: Vec<FaceSet> = k.face_index().by_dim.iter().skip(1).flatten().copied().collect();
    check_size(labels.len())?;
    let pos: HashMap<FaceSet, usize> = labels.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut sets = Vec::new();
    for &f in k.facets() {
        if f.is_empty() {
            continue;
        }
        // Maximal chains in the face poset of `f`: one per vertex order.
        let verts = f.to_vec();
        let mut perm: Vec<usize> = (0..verts.len()).collect();
        loop {
            let mut cur = FaceSet::EMPTY;
            let mut chain = FaceSet::EMPTY;
            for &i in &perm {
                cur.insert(verts[i]);
                chain.insert(pos[&cur]);
            }
            sets.push(chain);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    if sets.is_empty() {
        return Ok((Complex::empty(), labels));
    }
    Ok((Complex::new(labels.len(), sets)?, labels))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Dual graph of a pure complex: facets sharing a ridge are adjacent.
pub fn dual_graph(k: &Complex) -> Result<Complex> {
    let facets = k.facets();
    let mut edges = Vec::new();
    for i in 0..facets.len() {
        for j in i + 1..facets.len() {
            if facets[i].intersection(facets[j]).len() + 1 == facets[i].len() {
                edges.push(vec![i, j]);
            }
        }
    }
    for i in 0..facets.len() {
        edges.push(vec![i]);
    }
    Complex::from_lists(facets.len(), &edges)
}

/// Vertex layout of `E_P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpLayout {
    /// Copy `K` uses vertices `0..m`, copy `K'` uses `m..2m`.
    pub m: usize,
    /// Vertices `2m..2m + t` are the vertices of `T` (facets of `∂P`).
    pub t: usize,
    pub u: usize,
    pub u_prime: usize,
}

/// `E_P = ({u} * K) ∪ L ∪ ({u'} * K')` for a simplicial sphere `∂P`.
///
/// `T` lives on the facets of `∂P` (in facet order); when `None` it is the
/// dual graph, which is only allowed for 2-spheres. `L_σ` is the full
/// subcomplex of `T` on the facets containing `σ`.
pub fn construct_ep(boundary: &Complex, t: Option<&Complex>) -> Result<(Complex, EpLayout)> {
    let m = boundary.m();
    let n = boundary.dim() + 1;
    if !boundary.is_pure() || !crate::homology::is_homology_sphere_gf2(boundary) {
        return Err(Error::Precondition("boundary must be a simplicial sphere".into()));
    }
    let nf = boundary.facets().len();
    let auto;
    let t = match t {
        Some(t) => {
            if t.m() != nf {
                return Err(Error::Precondition(format!("T has {} vertices, expected {nf}", t.m())));
            }
            t
        }
        None if n == 3 => {
            auto = dual_graph(boundary)?;
            &auto
        }
        None => return Err(Error::Precondition("T must be supplied when dim ∂P > 2".into())),
    };
    let total = 2 * m + nf + 2;
    check_size(total)?;
    let layout = EpLayout { m, t: nf, u: 2 * m + nf, u_prime: 2 * m + nf + 1 };
    let shift_t = |s: FaceSet| FaceSet::from_bits(s.bits() << (2 * m));
    let prime = |s: FaceSet| FaceSet::from_bits(s.bits() << m);
    let facets_containing = |s: FaceSet| -> FaceSet {
        boundary.facets().iter().enumerate().filter(|(_, f)| s.is_subset(**f)).map(|(i, _)| i).collect()
    };
    let mut sets = Vec::new();
    for &f in boundary.facets() {
        sets.push(f.with(layout.u));
        sets.push(prime(f).with(layout.u_prime));
    }
    for layer in boundary.face_index().by_dim.iter().skip(1) {
        for &s in layer {
            let l = t.full_subcomplex_facets(facets_containing(s));
            for &tau in &l {
                let tau = shift_t(tau);
                sets.push(s.union(tau));
                sets.push(prime(s).union(tau));
                if s.len() == 1 {
                    sets.push(s.union(prime(s)).union(tau));
                }
            }
        }
    }
    Ok((Complex::new(total, sets)?, layout))
}

/// Input to a puzzle-move: `L = ∂Δ^k * Γ` with `∂Δ^k` on `pair` and `Γ`
/// the full subcomplex on `gamma`; `phi` permutes `pair`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzleMoveSpec {
    pub pair: Vec<usize>,
    pub gamma: Vec<usize>,
    /// `phi[i]` is the image of `pair[i]`.
    pub phi: Vec<usize>,
}

/// The two sides of `K` cut along `L`, as facet lists.
pub fn split_along(k: &Complex, l_facets: &[FaceSet]) -> Result<(Vec<FaceSet>, Vec<FaceSet>)> {
    let l: BTreeSet<FaceSet> = l_facets.iter().copied().collect();
    let facets = k.facets();
    let mut ridge_owner: HashMap<FaceSet, Vec<usize>> = HashMap::new();
    for (i, f) in facets.iter().enumerate() {
        for v in f.iter() {
            let r = f.without(v);
            if !l.contains(&r) {
                ridge_owner.entry(r).or_default().push(i);
            }
        }
    }
    let mut comp = vec![usize::MAX; facets.len()];
    let mut ncomp = 0;
    for s in 0..facets.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = ncomp;
        while let Some(i) = stack.pop() {
            for v in facets[i].iter() {
                if let Some(owners) = ridge_owner.get(&facets[i].without(v)) {
                    for &j in owners {
                        if comp[j] == usize::MAX {
                            comp[j] = ncomp;
                            stack.push(j);
                        }
                    }
                }
            }
        }
        ncomp += 1;
    }
    if ncomp != 2 {
        return Err(Error::Precondition(format!("L cuts K into {ncomp} pieces, expected 2")));
    }
    let plus = (0..facets.len()).filter(|&i| comp[i] == 0).map(|i| facets[i]).collect();
    let minus = (0..facets.len()).filter(|&i| comp[i] == 1).map(|i| facets[i]).collect();
    Ok((plus, minus))
}

/// `K_{L,φ}`: cut along `L` and reglue the side holding the first facet
/// through `φ`.
pub fn puzzle_move(k: &Complex, spec: &PuzzleMoveSpec) -> Result<Complex> {
    let pair: FaceSet = spec.pair.iter().copied().collect();
    let gamma: FaceSet = spec.gamma.iter().copied().collect();
    if pair.len() != spec.pair.len() || pair.len() < 2 || !pair.is_disjoint(gamma) {
        return Err(Error::Precondition("pair must be at least two vertices disjoint from Γ".into()));
    }
    if spec.phi.len() != spec.pair.len() || spec.phi.iter().copied().collect::<FaceSet>() != pair {
        return Err(Error::Precondition("φ must permute the ∂Δ^k vertices".into()));
    }
    if !pair.union(gamma).is_subset(k.vertex_set()) {
        return Err(Error::VertexOutOfRange(pair.union(gamma).last().unwrap_or(0) + 1));
    }
    let gamma_facets = if gamma.is_empty() { vec![FaceSet::EMPTY] } else { k.full_subcomplex_facets(gamma) };
    let mut l_facets = Vec::new();
    for v in pair.iter() {
        for g in &gamma_facets {
            l_facets.push(pair.without(v).union(*g));
        }
    }
    if let Some(bad) = l_facets.iter().find(|f| !k.contains_face(**f)) {
        return Err(Error::Precondition(format!("L is not a subcomplex of K: {bad} is missing")));
    }
    if l_facets.iter().any(|f| f.len() as isize != k.dim()) {
        return Err(Error::Precondition("L must have codimension one".into()));
    }
    let (plus, minus) = split_along(k, &l_facets)?;
    let mut perm: Vec<usize> = (0..k.m()).collect();
    for (a, b) in spec.pair.iter().zip(&spec.phi) {
        perm[*a] = *b;
    }
    let mut sets: Vec<FaceSet> = plus.iter().map(|f| f.map(&perm)).collect();
    sets.extend(minus);
    Complex::new(k.m(), sets)
}

/// Nontrivial-candidate puzzle-moves of a flag 2-sphere: for each induced
/// 4-circuit, the two swaps of a diagonal fixing the other.
pub fn four_circuit_moves(k: &Complex) -> Vec<PuzzleMoveSpec> {
    let mut out = Vec::new();
    let adj = k.adjacency();
    for c in crate::properties::induced_four_circuits(k) {
        let v = c.to_vec();
        let a = v[0];
        let opp = c.without(a).difference(adj[a]).first().expect("4-circuit diagonal");
        let d1 = [a, opp];
        let other: Vec<usize> = c.without(a).without(opp).to_vec();
        let d2 = [other[0], other[1]];
        out.push(PuzzleMoveSpec { pair: d1.to_vec(), gamma: d2.to_vec(), phi: vec![d1[1], d1[0]] });
        out.push(PuzzleMoveSpec { pair: d2.to_vec(), gamma: d1.to_vec(), phi: vec![d2[1], d2[0]] });
    }
    out
}

/// Remove `v1` from `k1` and `v2` from `k2` and identify their links
/// through `map` (link vertex of `k1` to link vertex of `k2`). Vertices of
/// `k1` keep their order; remaining vertices of `k2` follow.
pub fn glue_along_vertex_links(k1: &Complex, v1: usize, k2: &Complex, v2: usize, map: &[(usize, usize)]) -> Result<Complex> {
    let (l1, l2) = (k1.link_facets(FaceSet::singleton(v1)), k2.link_facets(FaceSet::singleton(v2)));
    let lv1: FaceSet = l1.iter().fold(FaceSet::EMPTY, |a, f| a.union(*f));
    let lv2: FaceSet = l2.iter().fold(FaceSet::EMPTY, |a, f| a.union(*f));
    let dom: FaceSet = map.iter().map(|p| p.0).collect();
    let cod: FaceSet = map.iter().map(|p| p.1).collect();
    if dom != lv1 || cod != lv2 || map.len() != lv1.len() {
        return Err(Error::Precondition("map must be a bijection between the two links".into()));
    }
    let mut to1 = vec![usize::MAX; k2.m()];
    for &(a, b) in map {
        to1[b] = a;
    }
    let mapped: BTreeSet<FaceSet> = l2.iter().map(|f| FaceSet::from_iter(f.iter().map(|x| to1[x]))).collect();
    if mapped != l1.iter().copied().collect() {
        return Err(Error::Precondition("map is not an isomorphism of links".into()));
    }
    let mut new1 = vec![usize::MAX; k1.m()];
    let mut next = 0;
    for (v, slot) in new1.iter_mut().enumerate() {
        if v != v1 {
            *slot = next;
            next += 1;
        }
    }
    let mut new2 = vec![usize::MAX; k2.m()];
    for (v, slot) in new2.iter_mut().enumerate() {
        if v == v2 {
            continue;
        }
        if lv2.contains(v) {
            *slot = new1[to1[v]];
        } else {
            *slot = next;
            next += 1;
        }
    }
    check_size(next)?;
    let mut sets: Vec<FaceSet> = k1.facets().iter().filter(|f| !f.contains(v1)).map(|f| f.map(&new1)).collect();
    sets.extend(k2.facets().iter().filter(|f| !f.contains(v2)).map(|f| f.map(&new2)));
    Complex::new(next, sets)
}

/// Connected sum removing facet `s1` of `k1` and `s2` of `k2`, with
/// `bij[i]` the vertex of `s2` glued to the `i`-th vertex of `s1`.
pub fn connected_sum(k1: &Complex, s1: FaceSet, k2: &Complex, s2: FaceSet, bij: &[usize]) -> Result<Complex> {
    if !k1.facets().contains(&s1) || !k2.facets().contains(&s2) || s1.len() != s2.len() || bij.len() != s1.len() {
        return Err(Error::Precondition("connected sum needs two facets of equal size and a bijection".into()));
    }
    let m = k1.m() + k2.m() - s1.len();
    check_size(m)?;
    let mut relabel = vec![usize::MAX; k2.m()];
    for (a, &b) in s1.iter().zip(bij) {
        if !s2.contains(b) || relabel[b] != usize::MAX {
            return Err(Error::Precondition("bijection does not map onto the second facet".into()));
        }
        relabel[b] = a;
    }
    let mut next = k1.m();
    for (v, slot) in relabel.iter_mut().enumerate() {
        if !s2.contains(v) {
            *slot = next;
            next += 1;
        }
    }
    let mut sets: Vec<FaceSet> = k1.facets().iter().filter(|f| **f != s1).copied().collect();
    sets.extend(k2.facets().iter().filter(|f| **f != s2).map(|f| f.map(&relabel)));
    Complex::new(m, sets)
}

/// Isomorphism classes of `K # K'` over all facet pairs and bijections.
pub fn connected_sum_enumerate(k1: &Complex, k2: &Complex) -> Result<Vec<Complex>> {
    if !k1.is_pure() || !k2.is_pure() {
        return Err(Error::Precondition("connected sum needs pure complexes".into()));
    }
    if k1.dim() != k2.dim() {
        return Err(Error::Precondition("connected sum needs equal dimensions".into()));
    }
    // Facets of k1 up to automorphism suffice.
    let autos = iso::automorphisms(k1, 10_000);
    let mut reps: Vec<FaceSet> = Vec::new();
    let mut seen: BTreeSet<FaceSet> = BTreeSet::new();
    for &f in k1.facets() {
        if seen.contains(&f) {
            continue;
        }
        reps.push(f);
        for g in &autos {
            seen.insert(f.map(g));
        }
    }
    let mut classes: Vec<(Vec<usize>, Complex)> = Vec::new();
    for &s1 in &reps {
        for &s2 in k2.facets() {
            let verts = s2.to_vec();
            let mut perm: Vec<usize> = (0..verts.len()).collect();
            loop {
                let bij: Vec<usize> = perm.iter().map(|&i| verts[i]).collect();
                let c = connected_sum(k1, s1, k2, s2, &bij)?;
                let inv = degree_signature(&c);
                if !classes.iter().any(|(s, d)| *s == inv && iso::are_isomorphic(d, &c)) {
                    classes.push((inv, c));
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
    }
    Ok(classes.into_iter().map(|(_, c)| c).collect())
}

fn degree_signature(k: &Complex) -> Vec<usize> {
    let mut d: Vec<usize> = k.adjacency().iter().map(|a| a.len()).collect();
    d.sort_unstable();
    d.extend(k.f_vector());
    d
}
