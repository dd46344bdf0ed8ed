//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use macx::algebra::{self, Element, FactorIndexLimits, PieceAlgebra};
use macx::bhr::BhrRing;
use macx::constructions::{
    self, barycentric_subdivision, stellar_subdivision, bipyramid, catalog, construct_ep, four_circuit_moves, glue_along_vertex_links,
    icosahedron, lattice, octahedron, polygon, puzzle_move, simplex_boundary, tetrahedron, xi1, xi2,
};
use macx::fingerprint::{compare_fingerprints, fingerprint, FingerprintOptions};
use macx::hochster::{bigraded_betti, missing_face_count_check, real_ma_cohomology_dims, SweepOptions, DEFAULT_SWEEP_CAP};
use macx::homology::is_gorenstein_star;
use macx::properties::{
    self, class_q_membership, is_flag, is_generalized_homology_sphere, is_suspension, satisfies_nsc, satisfies_scc,
    satisfies_scc_on, scc_triples, separating_circuit_hypothesis, separating_circuit_witness, Verdict,
    DEFAULT_SCC_CAP,
};
use macx::taylor::{tor_dims_via_taylor, TaylorOptions};
use macx::toric::{self, cube_family, h_vector, quotient_ring_ranks, validate_characteristic, weak_equivalence, CharMatrix};
use macx::{Complex, FaceSet, Field, FieldKind, Fp};

const SEED: u64 = 0x6d61_6378;
const RANDOM_COMPLEXES: usize = 50;
const RANDOM_MAX_VERTICES: usize = 8;
const IND3_SAMPLES: usize = 200;
const EP_SCC_TRIPLES: usize = 50;
const RESTRICTION_CONFIGS: usize = 20;
const PUZZLE_MOVES: usize = 10;
const FIELDS: [FieldKind; 2] = [FieldKind::Prime(2), FieldKind::Prime(3)];

const BUDGET_ORACLES: Duration = Duration::from_secs(60);
const BUDGET_NIL: Duration = Duration::from_secs(120);
const BUDGET_SCC: Duration = Duration::from_secs(120);
const BUDGET_EP: Duration = Duration::from_secs(600);
const BUDGET_TORIC: Duration = Duration::from_secs(60);

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn named(name: &str) -> Complex {
    catalog(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn tree() -> Complex {
    Complex::from_lists(7, &[vec![0, 1], vec![0, 2], vec![0, 3], vec![3, 4], vec![3, 5], vec![5, 6]]).unwrap()
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex {
    let m = rng.gen_range(3..=RANDOM_MAX_VERTICES);
    let mut sets: Vec<FaceSet> = (0..m).map(FaceSet::singleton).collect();
    for _ in 0..rng.gen_range(1..=2 * m) {
        let size = rng.gen_range(2..=m.min(4));
        let mut verts: Vec<usize> = (0..m).collect();
        verts.shuffle(rng);
        sets.push(verts[..size].iter().copied().collect());
    }
    Complex::new(m, sets).unwrap()
}

fn corpus(rng: &mut ChaCha8Rng) -> Vec<(String, Complex)> {
    let mut out = Vec::new();
    for k in 1..=5 {
        out.push((format!("simplex_boundary({k})"), simplex_boundary(k).unwrap()));
    }
    for n in 4..=8 {
        out.push((format!("C{n}"), polygon(n).unwrap()));
    }
    out.push(("O6".into(), octahedron()));
    out.push(("T4".into(), tetrahedron()));
    out.push(("I12".into(), icosahedron()));
    for n in 6..=9 {
        out.push((format!("B{n}"), bipyramid(n).unwrap()));
    }
    for n in 3..=6 {
        out.push((format!("path({n})"), named(&format!("path({n})"))));
    }
    out.push(("tree7".into(), tree()));
    for i in 0..RANDOM_COMPLEXES {
        out.push((format!("random#{i}"), random_complex(rng)));
    }
    out
}

/// Minimal non-faces, straight from the facet list.
fn brute_missing_faces(k: &Complex) -> Vec<FaceSet> {
    let facets = k.facets();
    let is_face = |s: FaceSet| facets.iter().any(|f| s.is_subset(*f));
    (1u128..(1u128 << k.m()))
        .map(FaceSet::from_bits)
        .filter(|&s| !is_face(s) && s.iter().all(|v| is_face(s.without(v))))
        .collect()
}

/// `K = {a, b} * K'`: every facet holds exactly one of `a`, `b`, and the
/// two stars agree off `{a, b}`.
fn brute_is_suspension(k: &Complex) -> bool {
    let m = k.m();
    for a in 0..m {
        for b in a + 1..m {
            let facets = k.facets();
            if facets.iter().any(|f| f.contains(a) == f.contains(b)) {
                continue;
            }
            let sa: BTreeSet<FaceSet> = facets.iter().filter(|f| f.contains(a)).map(|f| f.without(a)).collect();
            let sb: BTreeSet<FaceSet> = facets.iter().filter(|f| f.contains(b)).map(|f| f.without(b)).collect();
            if sa == sb {
                return true;
            }
        }
    }
    false
}

fn edges_of(k: &Complex) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; k.m()]; k.m()];
    for f in k.facets() {
        for u in f.iter() {
            for v in f.iter() {
                if u != v {
                    adj[u][v] = true;
                }
            }
        }
    }
    adj
}

fn components(adj: &[Vec<bool>], verts: &[usize]) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    for &s in verts {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &v in verts {
                if adj[u][v] && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

/// Induced cycle: connected and every vertex has two neighbours inside.
fn is_induced_cycle(adj: &[Vec<bool>], verts: &[usize]) -> bool {
    verts.len() >= 4
        && components(adj, verts) == 1
        && verts.iter().all(|&u| verts.iter().filter(|&&v| adj[u][v]).count() == 2)
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| (0..n).filter(|&j| j != c).map(|j| r[j]).collect()).collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * int_det(&minor)
        })
        .sum()
}

/// Every sign vector `B`; `A` is forced on the first facet by unimodularity.
fn brute_weakly_equivalent(k: &Complex, lam: &CharMatrix, lam2: &CharMatrix) -> bool {
    let n = lam.n;
    let sigma = k.facets()[0].to_vec();
    for signs in 0u32..(1 << lam.m) {
        let s = |j: usize| if signs >> j & 1 == 1 { -1 } else { 1 };
        // rows of M = Λ'_σ B_σ, rows of T = Λ_σ
        let mm: Vec<Vec<i64>> = (0..n).map(|r| sigma.iter().map(|&j| s(j) * lam2.columns[j][r]).collect()).collect();
        let t: Vec<Vec<i64>> = (0..n).map(|r| sigma.iter().map(|&j| lam.columns[j][r]).collect()).collect();
        let d = int_det(&mm);
        let adj: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let minor: Vec<Vec<i64>> = (0..n)
                            .filter(|&r| r != j)
                            .map(|r| (0..n).filter(|&c| c != i).map(|c| mm[r][c]).collect())
                            .collect();
                        let sg = if (i + j) % 2 == 0 { 1 } else { -1 };
                        sg * if n == 1 { 1 } else { int_det(&minor) }
                    })
                    .collect()
            })
            .collect();
        // A = T M^{-1} = T adj(M) / d with d = ±1
        let a: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| d * (0..n).map(|l| t[i][l] * adj[l][j]).sum::<i64>()).collect()).collect();
        if int_det(&a).abs() != 1 {
            continue;
        }
        let ok = (0..lam.m).all(|j| {
            (0..n).all(|r| (0..n).map(|l| a[r][l] * lam2.columns[j][l]).sum::<i64>() * s(j) == lam.columns[j][r])
        });
        if ok {
            return true;
        }
    }
    false
}

fn c1_oracles_agree() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let items = corpus(&mut rng);
    let mut n = 0;
    for (name, k) in &items {
        for f in FIELDS {
            let h = bigraded_betti(k, f, SweepOptions::default()).map_err(|e| format!("{name}: {e}"))?;
            let t = tor_dims_via_taylor(k, f, TaylorOptions::default(), false).map_err(|e| format!("{name}: {e}"))?;
            ensure(h.ranks == t.ranks, || format!("{name} over {f}: hochster {:?} vs taylor {:?}", h.ranks, t.ranks))?;
            n += 1;
        }
    }
    Ok(format!("{} complexes x {} fields, {n} table pairs equal", items.len(), FIELDS.len()))
}

fn c2_missing_faces() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let items = corpus(&mut rng);
    for (name, k) in &items {
        let mf = brute_missing_faces(k);
        for f in FIELDS {
            let t = bigraded_betti(k, f, SweepOptions::default()).map_err(|e| e.to_string())?;
            for j in 0..=k.m() {
                let expected = mf.iter().filter(|s| s.len() == j).count();
                ensure(t.get(1, j) == expected, || {
                    format!("{name} over {f}: beta^(-1,{}) = {} but {expected} missing faces", 2 * j, t.get(1, j))
                })?;
            }
            ensure(missing_face_count_check(k, &t).ok, || format!("{name}: library check disagrees"))?;
        }
    }
    Ok(format!("{} complexes", items.len()))
}

fn c3_duality() -> Check {
    let list = [
        ("C4", polygon(4).unwrap()),
        ("C5", polygon(5).unwrap()),
        ("O6", octahedron()),
        ("I12", icosahedron()),
        ("simplex_boundary(4)", simplex_boundary(4).unwrap()),
        ("B7", bipyramid(7).unwrap()),
    ];
    for (name, k) in &list {
        for f in FIELDS {
            ensure(is_gorenstein_star(k, f).map_err(|e| e.to_string())?, || format!("{name} is not Gorenstein*"))?;
            let t = bigraded_betti(k, f, SweepOptions::default()).map_err(|e| e.to_string())?;
            let (m, d) = (k.m(), (k.dim() + 1) as usize);
            for (&(i, j), &r) in &t.ranks {
                ensure(m >= d + i && m >= j && t.get(m - d - i, m - j) == r, || {
                    format!("{name} over {f}: beta^(-{i},{}) = {r} has no dual partner", 2 * j)
                })?;
            }
        }
    }
    Ok(format!("{} Gorenstein* complexes", list.len()))
}

fn nil_of(k: &Complex) -> Result<usize, String> {
    BhrRing::new(Fp::new(2).unwrap(), k.clone()).nilpotence_length().map_err(|e| e.to_string())
}

fn c4_nilpotence() -> Check {
    let c5 = polygon(5).unwrap();
    let list = [
        ("C4", polygon(4).unwrap(), 2),
        ("C5", c5.clone(), 2),
        ("C6", polygon(6).unwrap(), 2),
        ("O6", octahedron(), 3),
        ("I12", icosahedron(), 3),
        ("B7", bipyramid(7).unwrap(), 3),
        ("C5*C5", c5.join(&c5).unwrap(), 4),
    ];
    let mut got = Vec::new();
    for (name, k, want) in &list {
        let n = nil_of(k)?;
        ensure(n == *want, || format!("nil({name}) = {n}, expected {want}"))?;
        got.push(format!("{name}:{n}"));
    }
    Ok(got.join(" "))
}

fn has_ann3_one(k: &Complex) -> Result<bool, String> {
    let r = BhrRing::new(Fp::new(2).unwrap(), k.clone());
    for w in k.missing_faces().into_iter().filter(|w| w.len() == 2) {
        let x = r.missing_face_class(w).map_err(|e| e.to_string())?;
        if r.annihilator_dim(&x, 3).map_err(|e| e.to_string())? == 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

fn c5_suspension_criterion() -> Check {
    let c8 = lattice("c8").unwrap();
    let list = [
        ("O6", octahedron(), true),
        ("B7", bipyramid(7).unwrap(), true),
        ("B8", bipyramid(8).unwrap(), true),
        ("I12", icosahedron(), false),
        ("xi1(C8)", xi1(&c8).unwrap(), false),
        ("barycentric(T4)", barycentric_subdivision(&tetrahedron()).unwrap().0, false),
    ];
    for (name, k, susp) in &list {
        ensure(is_flag(k), || format!("{name} is not flag"))?;
        ensure(brute_is_suspension(k) == *susp, || format!("{name}: suspension oracle says {}", !susp))?;
        ensure(is_suspension(k) == *susp, || format!("{name}: is_suspension disagrees"))?;
        let a = has_ann3_one(k)?;
        ensure(a == *susp, || format!("{name}: some ann3 = 1 is {a}, suspension is {susp}"))?;
    }
    Ok("3 suspensions with ann3 = 1, 3 non-suspensions without".into())
}

fn random_homogeneous<F: Field>(r: &BhrRing<F>, deg: usize, rng: &mut ChaCha8Rng) -> Option<Element<F::Elem>> {
    let f = r.field().clone();
    let p = f.order().unwrap();
    let basis = r.homogeneous_basis(deg).ok()?;
    if basis.is_empty() {
        return None;
    }
    loop {
        let mut x = Element::zero(r.ring_id());
        for (key, n) in &basis {
            let v: Vec<F::Elem> = (0..*n).map(|_| f.element(rng.gen_range(0..p))).collect();
            algebra::add_into(&f, &mut x.terms, *key, &v);
        }
        algebra::prune(&f, &mut x);
        if !algebra::is_zero(&f, &x) {
            return Some(x);
        }
    }
}

fn c6_factor_index() -> Check {
    let limits = FactorIndexLimits::default();
    for m in 5..=7 {
        let r = BhrRing::new(Fp::new(2).unwrap(), polygon(m).unwrap());
        let top = r.top_class().map_err(|e| e.to_string())?;
        let ind = r.factor_index(&top, 3, limits).map_err(|e| e.to_string())?.value;
        let want = m * (m - 1) / 2 - m;
        ensure(ind == want, || format!("ind3(top of C{m}) = {ind}, expected {want}"))?;
    }
    let mut pool: Vec<(String, Complex)> = Vec::new();
    for n in 4..=8 {
        pool.push((format!("C{n}"), polygon(n).unwrap()));
    }
    for name in ["O6", "B(7)", "B(8)", "path(5)", "path(6)", "simplex_boundary(3)"] {
        pool.push((name.into(), named(name)));
    }
    pool.push(("tree7".into(), tree()));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let rings: Vec<(String, BhrRing<Fp>, Vec<usize>)> = pool
        .into_iter()
        .map(|(name, k)| {
            let r = BhrRing::new(Fp::new(2).unwrap(), k.clone());
            let degs = (4..=k.m() + (k.dim() + 1).max(0) as usize)
                .filter(|&d| r.homogeneous_basis(d).map(|b| !b.is_empty()).unwrap_or(false))
                .collect();
            (name, r, degs)
        })
        .collect();
    let mut worst = 0usize;
    let mut nonzero = 0;
    for _ in 0..IND3_SAMPLES {
        let (name, r, degs) = rings.choose(&mut rng).unwrap();
        let deg = *degs.choose(&mut rng).ok_or_else(|| format!("{name} has nothing in degree >= 4"))?;
        let x = random_homogeneous(r, deg, &mut rng).unwrap();
        let m = r.complex().m();
        let ind = r.factor_index(&x, 3, limits).map_err(|e| format!("{name}: {e}"))?.value;
        let bound = m * (m - 1) / 2 - m;
        ensure(ind <= bound, || format!("{name}: ind3 = {ind} > {bound} in degree {deg}"))?;
        worst = worst.max(ind);
        nonzero += (ind > 0) as usize;
    }
    Ok(format!("polygons 5..7 exact; {IND3_SAMPLES} samples within bound ({nonzero} with ind3 > 0, max {worst})"))
}

fn c7_scc_pipeline() -> Check {
    let i12 = satisfies_scc(&icosahedron(), DEFAULT_SCC_CAP).map_err(|e| e.to_string())?;
    ensure(i12.verdict == Verdict::Holds && !i12.capped(), || format!("SCC(I12) = {:?}", i12.verdict))?;
    let o6 = satisfies_scc(&octahedron(), DEFAULT_SCC_CAP).map_err(|e| e.to_string())?;
    ensure(o6.verdict == Verdict::Fails, || format!("SCC(O6) = {:?}", o6.verdict))?;
    let c8 = lattice("c8").unwrap();
    let mut list: Vec<(String, Complex)> = vec![("O6".into(), octahedron()), ("I12".into(), icosahedron())];
    for n in 4..=8 {
        list.push((format!("C{n}"), polygon(n).unwrap()));
    }
    for n in 6..=9 {
        list.push((format!("B{n}"), bipyramid(n).unwrap()));
    }
    list.push(("xi1(C8)".into(), xi1(&c8).unwrap()));
    list.push(("xi2(C8)".into(), xi2(&c8).unwrap()));
    list.push(("barycentric(T4)".into(), barycentric_subdivision(&tetrahedron()).unwrap().0));
    let mut holds = Vec::new();
    for (name, k) in &list {
        let r = satisfies_scc(k, DEFAULT_SCC_CAP).map_err(|e| format!("{name}: {e}"))?;
        ensure(!r.capped(), || format!("{name}: SCC search hit the cap"))?;
        if r.verdict == Verdict::Holds {
            let nsc = satisfies_nsc(k, FieldKind::Prime(2)).map_err(|e| e.to_string())?.holds;
            ensure(nsc, || format!("{name}: SCC holds but NSC fails"))?;
            ensure(!brute_is_suspension(k), || format!("{name}: SCC holds on a suspension"))?;
            holds.push(name.clone());
        }
    }
    Ok(format!("I12 holds, O6 fails; SCC holds on [{}] and each is NSC, non-suspension", holds.join(", ")))
}

fn c8_class_q() -> Check {
    let c8 = lattice("c8").unwrap();
    let d20 = lattice("d20").unwrap();
    let list = [
        ("barycentric(T4)", barycentric_subdivision(&tetrahedron()).unwrap().0, true),
        ("barycentric(I12)", barycentric_subdivision(&icosahedron()).unwrap().0, true),
        ("xi1(C8)", xi1(&c8).unwrap(), true),
        ("xi2(C8)", xi2(&c8).unwrap(), true),
        ("xi2(D20)", xi2(&d20).unwrap(), true),
        ("B9", bipyramid(9).unwrap(), false),
        ("B6", bipyramid(6).unwrap(), true),
        ("B7", bipyramid(7).unwrap(), true),
    ];
    for (name, k, want) in &list {
        let got = class_q_membership(k).map_err(|e| format!("{name}: {e}"))?;
        ensure(got == *want, || format!("{name}: class Q = {got}, expected {want}"))?;
    }
    Ok(format!("{} memberships as expected", list.len()))
}

fn four_circuit_glued_sphere() -> Complex {
    // Two copies of B7 with the edge {3,6} subdivided, glued at ring vertex 1
    // with the link 4-circuit 2-6-5-7 turned by a half rotation.
    let half = stellar_subdivision(&bipyramid(7).unwrap(), FaceSet::from_iter([2usize, 5])).unwrap();
    let cycle = [1usize, 5, 4, 6];
    let map: Vec<(usize, usize)> = (0..4).map(|i| (cycle[i], cycle[(i + 2) % 4])).collect();
    glue_along_vertex_links(&half, 0, &half, 0, &map).unwrap()
}

fn c9_puzzle_invariance() -> Check {
    let opts = FingerprintOptions::default();
    let f2 = FieldKind::Prime(2);
    let glued = four_circuit_glued_sphere();
    ensure(is_flag(&glued), || "glued sphere is not flag".into())?;
    ensure(is_generalized_homology_sphere(&glued, &[f2]).map_err(|e| e.to_string())?, || "glued complex is not a sphere".into())?;
    ensure(!properties::induced_four_circuits(&glued).is_empty(), || "glued sphere has no 4-circuit".into())?;
    let mut report = Vec::new();
    for (name, k) in [("B8", bipyramid(8).unwrap()), ("glued", glued)] {
        let base = fingerprint(&k, f2, opts).map_err(|e| e.to_string())?;
        let mut moved = Vec::new();
        for mv in four_circuit_moves(&k) {
            let k2 = puzzle_move(&k, &mv).map_err(|e| format!("{name}: {e}"))?;
            moved.push((macx::iso::are_isomorphic(&k, &k2), mv, k2));
        }
        ensure(moved.len() >= PUZZLE_MOVES, || format!("{name}: only {} moves", moved.len()))?;
        // moves that change the isomorphism type first
        moved.sort_by_key(|m| m.0);
        let mut new_types = 0;
        for (iso, mv, k2) in moved.iter().take(PUZZLE_MOVES) {
            ensure(is_generalized_homology_sphere(&k2, &[f2]).unwrap_or(false), || format!("{name}: move broke the sphere"))?;
            let fp = fingerprint(&k2, f2, opts).map_err(|e| e.to_string())?;
            let c = compare_fingerprints(&base, &fp, false).map_err(|e| e.to_string())?;
            ensure(c.equal, || format!("{name} {mv:?}: differs at {:?}", c.first_difference))?;
            new_types += !iso as usize;
        }
        report.push(format!("{name}: {PUZZLE_MOVES} moves equal ({new_types} non-isomorphic results)"));
    }
    let i12 = icosahedron();
    let sums = constructions::connected_sum_enumerate(&i12, &i12).map_err(|e| e.to_string())?;
    let fps: Vec<_> = sums.iter().map(|k| fingerprint(k, f2, opts)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for fp in &fps[1..] {
        let c = compare_fingerprints(&fps[0], fp, false).map_err(|e| e.to_string())?;
        ensure(c.equal, || format!("I12#I12 members differ at {:?}", c.first_difference))?;
    }
    report.push(format!("I12#I12: {} type(s), one fingerprint", sums.len()));
    Ok(report.join("; "))
}

fn c10_ep() -> Check {
    let (e, _) = construct_ep(&icosahedron(), None).map_err(|e| e.to_string())?;
    ensure(e.m() == 46, || format!("E_P has {} vertices", e.m()))?;
    let f2 = FieldKind::Prime(2);
    ensure(e.dim() == 3, || format!("E_P has dimension {}", e.dim()))?;
    ensure(is_generalized_homology_sphere(&e, &[f2]).map_err(|e| e.to_string())?, || "not a GF(2) homology sphere".into())?;
    ensure(is_flag(&e), || "not flag".into())?;
    ensure(satisfies_nsc(&e, f2).map_err(|e| e.to_string())?.holds, || "NSC fails".into())?;
    let mut triples = scc_triples(&e);
    let total = triples.len();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    triples.shuffle(&mut rng);
    triples.truncate(EP_SCC_TRIPLES);
    let r = satisfies_scc_on(&e, &triples, DEFAULT_SCC_CAP).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Holds, || format!("SCC sample verdict {:?}", r.verdict))?;
    Ok(format!("46 vertices, sphere, flag, NSC; SCC on {EP_SCC_TRIPLES} of {total} triples"))
}

fn c11_separating_circuits() -> Check {
    let list = [
        ("xi1(C8)", xi1(&lattice("c8").unwrap()).unwrap()),
        ("barycentric(T4)", barycentric_subdivision(&tetrahedron()).unwrap().0),
    ];
    let mut checked = 0;
    for (name, k) in &list {
        let adj = edges_of(k);
        for w in k.missing_faces().into_iter().filter(|w| w.len() == 2) {
            for is in k.vertex_set().difference(w).iter() {
                if !separating_circuit_hypothesis(k, w, is) {
                    continue;
                }
                let i = separating_circuit_witness(k, w, is).map_err(|e| format!("{name} ({w}, {}): {e}", is + 1))?;
                let iv = i.to_vec();
                ensure(w.is_subset(i) && !i.contains(is) && is_induced_cycle(&adj, &iv), || {
                    format!("{name}: {i} is not an induced circuit through {w} avoiding {}", is + 1)
                })?;
                let j: Vec<usize> = i.difference(w).with(is).to_vec();
                ensure(components(&adj, &j) >= 2, || format!("{name}: K_J connected for I = {i}"))?;
                checked += 1;
            }
        }
    }
    ensure(checked > 0, || "no pair satisfied the hypothesis".into())?;
    Ok(format!("{checked} hypothesis-satisfying pairs, zero failures"))
}

fn c12_toric() -> Check {
    let o6 = octahedron();
    for t in -3..=3 {
        let v = validate_characteristic(&o6, &cube_family(t), false).map_err(|e| e.to_string())?;
        ensure(v.valid, || format!("k = {t}: fails on {:?}", v.failing_face))?;
    }
    let cases: [(&str, Complex, Vec<i64>); 4] = [
        ("O6", o6.clone(), vec![1, 3, 3, 1]),
        ("C5", polygon(5).unwrap(), vec![1, 3, 1]),
        ("simplex_boundary(3)", simplex_boundary(3).unwrap(), vec![1, 1, 1, 1]),
        ("I12", icosahedron(), vec![1, 9, 9, 1]),
    ];
    for (name, k, want) in &cases {
        let lam = if *name == "O6" { cube_family(1) } else { toric::characteristic_from_coloring(k).map_err(|e| e.to_string())? };
        let ranks: Vec<i64> = quotient_ring_ranks(k, &lam).map_err(|e| e.to_string())?.into_iter().map(|r| r as i64).collect();
        let h = h_vector(k).map_err(|e| e.to_string())?;
        ensure(&ranks == want && &h == want, || format!("{name}: ranks {ranks:?}, h {h:?}, expected {want:?}"))?;
    }
    for t in 1..=3 {
        let (a, b) = (cube_family(t), cube_family(-t));
        let w = weak_equivalence(&o6, &a, &b, false).map_err(|e| e.to_string())?;
        let w = w.ok_or_else(|| format!("k = {t} and {} not equivalent", -t))?;
        ensure(toric::verify_equivalence(&a, &b, &w), || format!("bad witness for k = {t}"))?;
        ensure(brute_weakly_equivalent(&o6, &a, &b), || format!("sign enumeration finds no witness for k = {t}"))?;
    }
    let (z, one) = (cube_family(0), cube_family(1));
    let w = weak_equivalence(&o6, &z, &one, false).map_err(|e| e.to_string())?;
    ensure(w.is_none(), || "k = 0 and k = 1 reported equivalent".into())?;
    ensure(!brute_weakly_equivalent(&o6, &z, &one), || "sign enumeration finds a witness for 0 vs 1".into())?;
    for s in -3..=3 {
        for t in -3..=3 {
            let lib = weak_equivalence(&o6, &cube_family(s), &cube_family(t), false).map_err(|e| e.to_string())?.is_some();
            ensure(lib == brute_weakly_equivalent(&o6, &cube_family(s), &cube_family(t)), || {
                format!("k = {s} vs {t}: library says {lib}")
            })?;
        }
    }
    Ok("k in -3..3 valid; ranks = h on 4 spheres; k ~ -k with witness; 0 !~ 1 over all 2^6 signs".into())
}

fn random_class<F: Field>(r: &BhrRing<F>, j: FaceSet, rng: &mut ChaCha8Rng) -> Option<Element<F::Elem>> {
    let f = r.field().clone();
    let p = f.order().unwrap();
    let ranks: Vec<(i32, usize)> = r.cohomology(j).ranks().iter().enumerate().filter(|(_, &n)| n > 0).map(|(d, &n)| (d as i32 - 1, n)).collect();
    let &(d, n) = ranks.choose(rng)?;
    loop {
        let v: Vec<F::Elem> = (0..n).map(|_| f.element(rng.gen_range(0..p))).collect();
        if v.iter().any(|x| !f.is_zero(x)) {
            return r.element(j, d, v).ok();
        }
    }
}

fn random_subset(within: FaceSet, rng: &mut ChaCha8Rng) -> FaceSet {
    within.iter().filter(|_| rng.gen_bool(0.5)).collect()
}

fn restriction_identity<F: Field>(f: F, k: &Complex, rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let r = BhrRing::new(f.clone(), k.clone());
    for _ in 0..10_000 {
        let i_big = random_subset(k.vertex_set(), rng);
        let Some(a_big) = random_class(&r, i_big, rng) else { continue };
        let i = random_subset(i_big, rng);
        let a = r.restrict(&a_big, i).map_err(|e| e.to_string())?;
        if algebra::is_zero(&f, &a) {
            continue;
        }
        // I' must lie inside I ∪ J for both products to land in K_{I ∪ J}
        let j = i_big.difference(i).union(random_subset(k.vertex_set().difference(i_big), rng));
        let Some(b) = random_class(&r, j, rng) else { continue };
        let b_small = r.restrict(&b, j.difference(i_big)).map_err(|e| e.to_string())?;
        let lhs = r.mul(&a, &b).map_err(|e| e.to_string())?;
        let rhs = r.mul(&a_big, &b_small).map_err(|e| e.to_string())?;
        // exact in characteristic 2; the product is only defined up to sign otherwise
        let minus = algebra::scale(&f, &f.neg(&f.one()), &rhs);
        if lhs != rhs && (f.kind().characteristic() == 2 || lhs != minus) {
            return Err(format!("I' = {i_big}, I = {i}, J = {j}: {lhs:?} vs {rhs:?}"));
        }
        return Ok(!algebra::is_zero(&f, &lhs));
    }
    Err("no configuration found".into())
}

fn c13_real_ring() -> Check {
    let c4 = polygon(4).unwrap();
    let dims = real_ma_cohomology_dims(&c4, FieldKind::Prime(2), DEFAULT_SWEEP_CAP).map_err(|e| e.to_string())?;
    ensure(dims == vec![1, 2, 1], || format!("H*(RZ_C4) = {dims:?}"))?;
    let r = BhrRing::new(Fp::new(2).unwrap(), c4.clone());
    let d1 = r.missing_face_class(FaceSet::from_iter([0, 2])).map_err(|e| e.to_string())?;
    let d2 = r.missing_face_class(FaceSet::from_iter([1, 3])).map_err(|e| e.to_string())?;
    let p = r.star(&d1, &d2).map_err(|e| e.to_string())?;
    let top = (c4.vertex_set(), 1);
    ensure(p.terms.keys().eq([&top]), || format!("star product {p:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 13);
    let (c5, c6) = (polygon(5).unwrap(), polygon(6).unwrap());
    let mut nonzero = 0;
    for n in 0..RESTRICTION_CONFIGS {
        let k = if n % 2 == 0 { &c5 } else { &c6 };
        nonzero += restriction_identity(Fp::new(2).unwrap(), k, &mut rng)? as usize;
        nonzero += restriction_identity(Fp::new(3).unwrap(), k, &mut rng)? as usize;
    }
    Ok(format!("(1,2,1); star product hits H^2; {RESTRICTION_CONFIGS} configurations, exact over GF(2), up to sign over GF(3) ({nonzero} nonzero products)"))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 13] = [
        ("oracle equivalence", c1_oracles_agree, Some(BUDGET_ORACLES)),
        ("missing faces in beta^(-1,2j)", c2_missing_faces, None),
        ("Poincare duality of tables", c3_duality, None),
        ("nilpotence length of flag spheres", c4_nilpotence, Some(BUDGET_NIL)),
        ("suspension iff ann3 = 1", c5_suspension_criterion, None),
        ("factor index bound", c6_factor_index, None),
        ("SCC pipeline", c7_scc_pipeline, Some(BUDGET_SCC)),
        ("class Q membership", c8_class_q, None),
        ("puzzle-move invariance", c9_puzzle_invariance, None),
        ("E_P over the icosahedron", c10_ep, Some(BUDGET_EP)),
        ("separating circuits", c11_separating_circuits, None),
        ("characteristic matrices", c12_toric, Some(BUDGET_TORIC)),
        ("real moment-angle ring", c13_real_ring, None),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = t.elapsed();
        let res = match (res, budget) {
            (Ok(_), Some(b)) if elapsed > *b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
            (r, _) => r,
        };
        match res {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
