//! Combinatorial isomorphism of simplicial complexes.

use std::collections::{BTreeMap, HashSet};

use crate::complex::Complex;
use crate::face_set::FaceSet;

/// Vertex colours refined jointly over several complexes so that colours
/// are comparable between them.
fn refine_colors(ks: &[&Complex]) -> Vec<Vec<usize>> {
    let adjs: Vec<Vec<FaceSet>> = ks.iter().map(|k| k.adjacency()).collect();
    let mut colors: Vec<Vec<usize>> = Vec::new();
    let mut table: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for k in ks {
        let mut c = Vec::with_capacity(k.m());
        for v in 0..k.m() {
            let mut sig: Vec<usize> = vec![usize::MAX];
            let mut sizes: Vec<usize> = k.facets().iter().filter(|f| f.contains(v)).map(|f| f.len()).collect();
            sizes.sort();
            sig.extend(sizes);
            let n = table.len();
            c.push(*table.entry(sig).or_insert(n));
        }
        colors.push(c);
    }
    loop {
        let before: usize = table.len();
        let mut table2: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut next = Vec::new();
        for (ki, k) in ks.iter().enumerate() {
            let mut c = Vec::with_capacity(k.m());
            for v in 0..k.m() {
                let mut nb: Vec<usize> = adjs[ki][v].iter().map(|u| colors[ki][u]).collect();
                nb.sort();
                let mut sig = vec![colors[ki][v]];
                sig.extend(nb);
                let n = table2.len();
                c.push(*table2.entry(sig).or_insert(n));
            }
            next.push(c);
        }
        colors = next;
        let after = table2.len();
        table = table2;
        if after == before {
            break;
        }
    }
    colors
}

struct Search<'a> {
    a_adj: Vec<FaceSet>,
    b_adj: Vec<FaceSet>,
    a_col: &'a [usize],
    b_col: &'a [usize],
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    a: &'a Complex,
    b_facets: HashSet<FaceSet>,
    limit: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> bool {
        if self.found.len() >= self.limit {
            return true;
        }
        if depth == self.order.len() {
            let ok = self.a.facets().iter().all(|f| self.b_facets.contains(&f.map(&self.map)));
            if ok {
                self.found.push(self.map.clone());
            }
            return self.found.len() >= self.limit;
        }
        let v = self.order[depth];
        for w in 0..self.b_adj.len() {
            if self.used[w] || self.a_col[v] != self.b_col[w] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&u| {
                self.a_adj[v].contains(u) == self.b_adj[w].contains(self.map[u])
            });
            if !consistent {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            let stop = self.run(depth + 1);
            self.used[w] = false;
            self.map[v] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }
}

fn search(a: &Complex, b: &Complex, limit: usize) -> Vec<Vec<usize>> {
    if a.m() != b.m() || a.facets().len() != b.facets().len() || a.f_vector() != b.f_vector() {
        return Vec::new();
    }
    let cols = refine_colors(&[a, b]);
    let mut ca = cols[0].clone();
    let mut cb = cols[1].clone();
    ca.sort();
    cb.sort();
    if ca != cb {
        return Vec::new();
    }
    let a_adj = a.adjacency();
    let m = a.m();
    let mut class_size = vec![0usize; m.max(1) * 2 + 1];
    for &c in &cols[0] {
        if c >= class_size.len() {
            class_size.resize(c + 1, 0);
        }
        class_size[c] += 1;
    }
    // Order vertices: start from the rarest colour, then grow by adjacency.
    let mut order = Vec::with_capacity(m);
    let mut placed = FaceSet::EMPTY;
    while order.len() < m {
        let pick = (0..m)
            .filter(|&v| !placed.contains(v))
            .max_by_key(|&v| {
                let links = a_adj[v].intersection(placed).len();
                (links, usize::MAX - class_size[cols[0][v]], usize::MAX - v)
            })
            .unwrap();
        order.push(pick);
        placed.insert(pick);
    }
    let mut s = Search {
        a_adj,
        b_adj: b.adjacency(),
        a_col: &cols[0],
        b_col: &cols[1],
        order,
        map: vec![usize::MAX; m],
        used: vec![false; m],
        a,
        b_facets: b.facets().iter().copied().collect(),
        limit,
        found: Vec::new(),
    };
    s.run(0);
    s.found
}

/// A vertex bijection `π` with `π(a) = b`, if one exists.
pub fn find_isomorphism(a: &Complex, b: &Complex) -> Option<Vec<usize>> {
    search(a, b, 1).pop()
}

pub fn are_isomorphic(a: &Complex, b: &Complex) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Up to `limit` automorphisms of `k`, identity first.
pub fn automorphisms(k: &Complex, limit: usize) -> Vec<Vec<usize>> {
    let mut out = search(k, k, limit);
    out.sort();
    out
}
