//! Oracles and fixtures shared by the integration tests.
//!
//! The oracles deliberately avoid the library's linear algebra: they read
//! matrices entry by entry and do their own elimination.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use css_surgery::chain::{ChainComplex, ChainMap};
use css_surgery::cubical::{self, CubicalMorphism, OpenCubicalComplex};
use css_surgery::{BitVec, CssCode, F2Matrix};
use rand::Rng;

pub fn bits(s: &str) -> BitVec {
    s.parse().unwrap()
}

pub fn mat(cols: usize, rows: &[&str]) -> F2Matrix {
    F2Matrix::from_strs(cols, rows)
}

// ---------------------------------------------------------------------------
// Independent GF(2) elimination on multiword rows.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rows {
    pub cols: usize,
    pub rows: Vec<Vec<u64>>,
}

impl Rows {
    pub fn from_matrix(m: &F2Matrix) -> Rows {
        let (r, c) = m.shape();
        let words = c.div_ceil(64).max(1);
        let rows = (0..r)
            .map(|i| {
                let mut w = vec![0u64; words];
                for j in 0..c {
                    if m.get(i, j) {
                        w[j / 64] |= 1 << (j % 64);
                    }
                }
                w
            })
            .collect();
        Rows { cols: c, rows }
    }

    pub fn from_vectors(cols: usize, vs: &[BitVec]) -> Rows {
        let words = cols.div_ceil(64).max(1);
        let rows = vs
            .iter()
            .map(|v| {
                let mut w = vec![0u64; words];
                for j in 0..cols {
                    if v.get(j) {
                        w[j / 64] |= 1 << (j % 64);
                    }
                }
                w
            })
            .collect();
        Rows { cols, rows }
    }

    fn bit(row: &[u64], j: usize) -> bool {
        row[j / 64] >> (j % 64) & 1 == 1
    }

    /// Reduced echelon rows and their pivot columns.
    pub fn echelon(&self) -> (Vec<Vec<u64>>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| Self::bit(&rows[i], j)) else { continue };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && Self::bit(row, j) {
                    row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(j);
            r += 1;
        }
        rows.truncate(r);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        let (rows, pivots) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![false; self.cols];
                v[f] = true;
                for (row, &p) in rows.iter().zip(&pivots) {
                    if Self::bit(row, f) {
                        v[p] = true;
                    }
                }
                BitVec::from_bools(&v)
            })
            .collect()
    }

    pub fn spans(&self, v: &BitVec) -> bool {
        let mut ext = self.clone();
        ext.rows.extend(Rows::from_vectors(self.cols, std::slice::from_ref(v)).rows);
        ext.rank() == self.rank()
    }
}

pub fn rank(m: &F2Matrix) -> usize {
    Rows::from_matrix(m).rank()
}

/// `dim ker ∂_{n−1} − rank ∂_n`, computed by the oracle.
pub fn homology_dim(c: &ChainComplex, n: i32) -> usize {
    let out = c.diff(n - 1);
    let cycles = c.dim(n) - if out.nrows() == 0 || out.ncols() == 0 { 0 } else { rank(&out) };
    let inn = c.diff(n);
    cycles - if inn.nrows() == 0 || inn.ncols() == 0 { 0 } else { rank(&inn) }
}

pub fn oracle_mul(a: &F2Matrix, b: &F2Matrix) -> F2Matrix {
    let (r, k) = a.shape();
    let c = b.ncols();
    assert_eq!(k, b.nrows());
    let mut out = F2Matrix::zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            let mut s = false;
            for l in 0..k {
                s ^= a.get(i, l) && b.get(l, j);
            }
            out.set(i, j, s);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Brute-force distance.

/// Minimum weight of a vector in `ker P_X` outside the row space of `P_Z`,
/// by enumerating supports in order of weight. `None` when `k = 0`.
pub fn brute_force_distance_z(p_x: &F2Matrix, p_z: &F2Matrix, limit: usize) -> Option<usize> {
    let n = p_x.ncols();
    assert!(p_x.nrows() <= 128, "oracle handles at most 128 checks");
    let cols: Vec<u128> = (0..n)
        .map(|j| (0..p_x.nrows()).filter(|&i| p_x.get(i, j)).fold(0u128, |acc, i| acc | 1 << i))
        .collect();
    let stab = Rows::from_matrix(p_z);
    for w in 1..=limit.min(n) {
        let mut idx: Vec<usize> = (0..w).collect();
        loop {
            let syn = idx.iter().fold(0u128, |acc, &j| acc ^ cols[j]);
            if syn == 0 {
                let v = BitVec::from_indices(n, &idx);
                if !stab.spans(&v) {
                    return Some(w);
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    None
}

/// Advances `idx` to the next `w`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let w = idx.len();
    for i in (0..w).rev() {
        if idx[i] < n - w + i {
            idx[i] += 1;
            for t in i + 1..w {
                idx[t] = idx[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn brute_force_distances(code: &CssCode) -> (Option<usize>, Option<usize>) {
    let (px, pz) = (code.p_x(), code.p_z());
    (brute_force_distance_z(&px, &pz, code.n()), brute_force_distance_z(&pz, &px, code.n()))
}

// ---------------------------------------------------------------------------
// Isomorphism of complexes (and of maps out of a fixed source) up to a
// permutation of each basis, by colour refinement with individualization.

struct Graph {
    colour: Vec<usize>,
    adj: Vec<Vec<(usize, u8)>>,
    /// `(degree, index)` of every node belonging to the complex.
    node_of: Vec<Option<(i32, usize)>>,
}

impl Graph {
    fn new() -> Graph {
        Graph { colour: Vec::new(), adj: Vec::new(), node_of: Vec::new() }
    }

    fn add(&mut self, colour: usize, tag: Option<(i32, usize)>) -> usize {
        self.colour.push(colour);
        self.adj.push(Vec::new());
        self.node_of.push(tag);
        self.colour.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize, tag: u8) {
        self.adj[a].push((b, 2 * tag));
        self.adj[b].push((a, 2 * tag + 1));
    }
}

fn degree_colour(n: i32) -> usize {
    (n + 1000) as usize
}

/// Adds a complex; returns the node index of each `(degree, basis index)`.
fn add_complex(g: &mut Graph, c: &ChainComplex) -> HashMap<(i32, usize), usize> {
    let mut ids = HashMap::new();
    for n in c.degrees() {
        for i in 0..c.dim(n) {
            ids.insert((n, i), g.add(degree_colour(n), Some((n, i))));
        }
    }
    for n in c.degrees() {
        let d = c.diff(n);
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                if d.get(i, j) {
                    g.edge(ids[&(n + 1, j)], ids[&(n, i)], 0);
                }
            }
        }
    }
    ids
}

/// Adds a map into the complex from an anchored source whose basis
/// element `(n, j)` gets a colour unique to it.
fn add_anchored_map(g: &mut Graph, ids: &HashMap<(i32, usize), usize>, m: &ChainMap) {
    for (&n, comp) in m.components() {
        let anchors: Vec<usize> = (0..comp.ncols()).map(|j| g.add(1_000_000 + 1000 * (n + 100) as usize + j, None)).collect();
        for i in 0..comp.nrows() {
            for (j, &a) in anchors.iter().enumerate() {
                if comp.get(i, j) {
                    g.edge(a, ids[&(n, i)], 1);
                }
            }
        }
    }
}

fn refine(colours: &mut [usize], adj: &[Vec<(usize, u8)>]) {
    loop {
        let before = colours.iter().collect::<std::collections::HashSet<_>>().len();
        let sigs: Vec<(usize, Vec<(u8, usize)>)> = (0..colours.len())
            .map(|v| {
                let mut s: Vec<(u8, usize)> = adj[v].iter().map(|&(u, t)| (t, colours[u])).collect();
                s.sort_unstable();
                (colours[v], s)
            })
            .collect();
        let mut table: BTreeMap<&(usize, Vec<(u8, usize)>), usize> = BTreeMap::new();
        for s in &sigs {
            let next = table.len();
            table.entry(s).or_insert(next);
        }
        for (v, s) in sigs.iter().enumerate() {
            colours[v] = table[s];
        }
        if table.len() == before {
            return;
        }
    }
}

fn search(a: &Graph, b: &Graph, mut colours: Vec<usize>, fresh: usize) -> Option<Vec<usize>> {
    let na = a.colour.len();
    let mut adj: Vec<Vec<(usize, u8)>> = a.adj.clone();
    adj.extend(b.adj.iter().map(|l| l.iter().map(|&(u, t)| (u + na, t)).collect()));
    refine(&mut colours, &adj);
    let mut classes: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (v, &c) in colours.iter().enumerate() {
        let e = classes.entry(c).or_default();
        if v < na {
            e.0.push(v);
        } else {
            e.1.push(v - na);
        }
    }
    if classes.values().any(|(x, y)| x.len() != y.len()) {
        return None;
    }
    match classes.values().filter(|(x, _)| x.len() > 1).min_by_key(|(x, _)| x.len()) {
        None => {
            let mut map = vec![0; na];
            for (x, y) in classes.values() {
                map[x[0]] = y[0];
            }
            let mut eb: Vec<(usize, usize, u8)> =
                (0..b.adj.len()).flat_map(|v| b.adj[v].iter().map(move |&(u, t)| (v, u, t))).collect();
            let mut ea: Vec<(usize, usize, u8)> = (0..na)
                .flat_map(|v| a.adj[v].iter().map(|&(u, t)| (map[v], map[u], t)).collect::<Vec<_>>())
                .collect();
            ea.sort_unstable();
            eb.sort_unstable();
            (ea == eb).then_some(map)
        }
        Some((x, y)) => {
            let pick = x[0];
            for &cand in y {
                let mut c = colours.clone();
                c[pick] = fresh;
                c[cand + na] = fresh;
                if let Some(m) = search(a, b, c, fresh + 1) {
                    return Some(m);
                }
            }
            None
        }
    }
}

fn match_graphs(a: &Graph, b: &Graph) -> Option<BTreeMap<i32, Vec<usize>>> {
    if a.colour.len() != b.colour.len() {
        return None;
    }
    let colours: Vec<usize> = a.colour.iter().chain(&b.colour).copied().collect();
    let map = search(a, b, colours, 10_000_000)?;
    let mut perms: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (v, &w) in map.iter().enumerate() {
        if let (Some((n, i)), Some((m, j))) = (a.node_of[v], b.node_of[w]) {
            assert_eq!(n, m);
            let p = perms.entry(n).or_default();
            if p.len() <= i {
                p.resize(i + 1, usize::MAX);
            }
            p[i] = j;
        }
    }
    Some(perms)
}

/// Permutations `perm[n][old] = new` carrying `a` onto `b`, if any.
pub fn complex_isomorphism(a: &ChainComplex, b: &ChainComplex) -> Option<BTreeMap<i32, Vec<usize>>> {
    let degs: Vec<i32> = a.degrees().into_iter().filter(|&n| a.dim(n) > 0).collect();
    let degs_b: Vec<i32> = b.degrees().into_iter().filter(|&n| b.dim(n) > 0).collect();
    if degs != degs_b || degs.iter().any(|&n| a.dim(n) != b.dim(n)) {
        return None;
    }
    let (mut ga, mut gb) = (Graph::new(), Graph::new());
    add_complex(&mut ga, a);
    add_complex(&mut gb, b);
    let perms = match_graphs(&ga, &gb)?;
    assert_eq!(a.permute(&perms), *b, "oracle produced a non-isomorphism");
    Some(perms)
}

/// Like [`complex_isomorphism`], but the permutation must also carry the
/// map `ma` (into `a`) onto `mb` (into `b`), both from the same source.
pub fn map_isomorphism(ma: &ChainMap, mb: &ChainMap) -> Option<BTreeMap<i32, Vec<usize>>> {
    let (a, b) = (ma.target(), mb.target());
    let (mut ga, mut gb) = (Graph::new(), Graph::new());
    let ia = add_complex(&mut ga, a);
    let ib = add_complex(&mut gb, b);
    add_anchored_map(&mut ga, &ia, ma);
    add_anchored_map(&mut gb, &ib, mb);
    let perms = match_graphs(&ga, &gb)?;
    assert_eq!(a.permute(&perms), *b);
    for (&n, comp) in ma.components() {
        let p = &perms[&n];
        let target = mb.component(n);
        for i in 0..comp.nrows() {
            for j in 0..comp.ncols() {
                assert_eq!(comp.get(i, j), target.get(p[i], j));
            }
        }
    }
    Some(perms)
}

// ---------------------------------------------------------------------------
// Random data.

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, density: f64) -> F2Matrix {
    let mut m = F2Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.random_bool(density));
        }
    }
    m
}

fn random_combination(rng: &mut impl Rng, len: usize, basis: &[BitVec]) -> BitVec {
    let mut v = BitVec::zeros(len);
    for b in basis {
        if rng.random_bool(0.5) {
            v.xor_assign(b);
        }
    }
    v
}

/// A random complex on consecutive degrees `low..low+dims.len()`, with
/// `dims[0]` the dimension of the lowest degree.
pub fn random_complex(rng: &mut impl Rng, low: i32, dims: &[usize]) -> ChainComplex {
    let mut diffs: Vec<(i32, F2Matrix)> = Vec::new();
    for k in 1..dims.len() {
        let n = low + k as i32 - 1;
        let (rows, cols) = (dims[k - 1], dims[k]);
        let m = if k == 1 {
            random_matrix(rng, rows, cols, 0.5)
        } else {
            // Columns must lie in the kernel of the differential below.
            let below = &diffs.last().unwrap().1;
            let ker = Rows::from_matrix(below).kernel();
            let columns: Vec<BitVec> = (0..cols).map(|_| random_combination(rng, rows, &ker)).collect();
            F2Matrix::from_columns(rows, &columns)
        };
        diffs.push((n, m));
    }
    if dims.len() == 1 {
        return ChainComplex::concentrated(low, dims[0], "e");
    }
    ChainComplex::from_differentials(&diffs, &[]).unwrap()
}

/// A random CSS code with `n` qubits: `P_X` random, `P_Z` rows drawn from
/// the kernel of `P_X`.
pub fn random_code(rng: &mut impl Rng, n: usize, rx: usize, rz: usize, density: f64) -> CssCode {
    let px = random_matrix(rng, rx, n, density);
    let ker = Rows::from_matrix(&px).kernel();
    let rows: Vec<BitVec> = (0..rz).map(|_| sparse_combination(rng, n, &ker)).collect();
    let pz = F2Matrix::from_rows(n, rows);
    CssCode::from_parity_checks(&px, &pz).unwrap()
}

fn sparse_combination(rng: &mut impl Rng, len: usize, basis: &[BitVec]) -> BitVec {
    if basis.is_empty() {
        return BitVec::zeros(len);
    }
    let mut v = BitVec::zeros(len);
    let picks = rng.random_range(1..=2.min(basis.len()));
    for _ in 0..picks {
        v.xor_assign(&basis[rng.random_range(0..basis.len())]);
    }
    v
}

/// A uniformly random chain map between complexes supported on degrees
/// 1, 0, −1, drawn from the solution space of the commutation equations.
pub fn random_chain_map(rng: &mut impl Rng, c: &ChainComplex, d: &ChainComplex) -> ChainMap {
    let degrees = [1, 0, -1];
    let mut offset = BTreeMap::new();
    let mut total = 0;
    for &n in &degrees {
        offset.insert(n, total);
        total += d.dim(n) * c.dim(n);
    }
    let var = |n: i32, i: usize, j: usize| offset[&n] + i * c.dim(n) + j;
    let mut eqs: Vec<BitVec> = Vec::new();
    // ∂^D_n f_{n+1} = f_n ∂^C_n for n = 0, −1.
    for n in [0, -1] {
        let (dd, dc) = (d.diff(n), c.diff(n));
        for i in 0..d.dim(n) {
            for j in 0..c.dim(n + 1) {
                let mut e = BitVec::zeros(total);
                for k in 0..d.dim(n + 1) {
                    if dd.get(i, k) {
                        e.flip(var(n + 1, k, j));
                    }
                }
                for k in 0..c.dim(n) {
                    if dc.get(k, j) {
                        e.flip(var(n, i, k));
                    }
                }
                eqs.push(e);
            }
        }
    }
    let sol = if eqs.is_empty() {
        random_combination(rng, total, &(0..total).map(|i| BitVec::unit(total, i)).collect::<Vec<_>>())
    } else {
        random_combination(rng, total, &Rows::from_vectors(total, &eqs).kernel())
    };
    let mut comps = BTreeMap::new();
    for &n in &degrees {
        let mut m = F2Matrix::zeros(d.dim(n), c.dim(n));
        for i in 0..d.dim(n) {
            for j in 0..c.dim(n) {
                m.set(i, j, sol.get(var(n, i, j)));
            }
        }
        comps.insert(n, m);
    }
    ChainMap::new(c.clone(), d.clone(), comps).unwrap()
}

// ---------------------------------------------------------------------------
// Fixtures.

pub fn shor() -> CssCode {
    let px = mat(9, &["111111000", "111000111"]);
    let pz = mat(9, &["110000000", "101000000", "000110000", "000101000", "000000110", "000000101"]);
    CssCode::from_parity_checks(&px, &pz).unwrap()
}

/// The two squares and connecting edge of the small pushout example, as
/// open cubical complexes: `C` is the square 0-1-2-3 with 0 and 3 on the
/// boundary, `D` the square 0-2-3-1 with 0 and 1 on the boundary, and the
/// apex an edge sent to C's 1-2 and D's 2-3.
pub fn small_pushout_span() -> (CubicalMorphism, CubicalMorphism) {
    let apex = cubical::path_graph(1).unwrap();
    let c = OpenCubicalComplex::from_cells(4, &[0, 3], &[], &[[0, 1, 2, 3]]).unwrap();
    let d = OpenCubicalComplex::from_cells(4, &[0, 1], &[], &[[0, 2, 3, 1]]).unwrap();
    let f = CubicalMorphism::new(apex.clone(), c, vec![1, 2]).unwrap();
    let g = CubicalMorphism::new(apex, d, vec![2, 3]).unwrap();
    (f, g)
}

/// The same span written directly with the printed matrices.
pub fn small_pushout_chain_span() -> (ChainMap, ChainMap) {
    let a = ChainComplex::from_differentials(&[(-1, mat(1, &["1", "1"]))], &[]).unwrap();
    let c = ChainComplex::from_differentials(&[(0, mat(1, &["1", "1", "1"])), (-1, mat(3, &["110", "011"]))], &[])
        .unwrap();
    let d = ChainComplex::from_differentials(&[(0, mat(1, &["1", "1", "1"])), (-1, mat(3, &["101", "011"]))], &[])
        .unwrap();
    let map = |target: &ChainComplex, edge: &str| {
        let mut comps = BTreeMap::new();
        comps.insert(0, mat(1, &edge.chars().map(|ch| if ch == '1' { "1" } else { "0" }).collect::<Vec<_>>()));
        comps.insert(-1, F2Matrix::identity(2));
        ChainMap::new(a.clone(), target.clone(), comps).unwrap()
    };
    (map(&c, "010"), map(&d, "001"))
}

pub fn small_pushout_q() -> ChainComplex {
    ChainComplex::from_differentials(
        &[(0, mat(2, &["10", "11", "10", "01", "01"])), (-1, mat(5, &["11010", "01101"]))],
        &[],
    )
    .unwrap()
}

pub fn small_pushout_coeq() -> (F2Matrix, F2Matrix) {
    (
        mat(6, &["100000", "010001", "001000", "000100", "000010"]),
        mat(4, &["1010", "0101"]),
    )
}

/// Two 3×3 patches glued along the right column of the first and the left
/// column of the second.
pub fn lattice_surgery_span() -> (CubicalMorphism, CubicalMorphism) {
    let apex = cubical::open_path(3).unwrap();
    let p = cubical::patch(3, 3).unwrap();
    let f = CubicalMorphism::new(apex.clone(), p.clone(), (0..4).map(|v| 8 + v).collect()).unwrap();
    let g = CubicalMorphism::new(apex, p, (0..4).collect()).unwrap();
    (f, g)
}

/// Qubit index of the vertical edge `(u, v)–(u, v+1)` of `patch(w, h)`.
pub fn patch_vertical_edge(p: &OpenCubicalComplex, h: usize, u: usize, v: usize) -> usize {
    let a = u * (h + 1) + v;
    edge_index(p, a, a + 1)
}

/// Qubit index of the edge `a–b` in the chain complex of `p`.
pub fn edge_index(p: &OpenCubicalComplex, a: usize, b: usize) -> usize {
    let key = vec![a.min(b), a.max(b)];
    p.retained_faces(1).iter().position(|f| **f == key).expect("edge exists and is retained")
}

/// Column `u` of `patch(w, h)` as a Z operator.
pub fn patch_column(p: &OpenCubicalComplex, h: usize, u: usize) -> BitVec {
    let n = p.retained_faces(1).len();
    BitVec::from_indices(n, &(0..h).map(|v| patch_vertical_edge(p, h, u, v)).collect::<Vec<_>>())
}

/// Star graph pushout: `m` isolated internal vertices sent to the left
/// ends of `m` disjoint edges, and all to a single end of `m` other
/// disjoint edges.
pub fn star_span(m: usize) -> (CubicalMorphism, CubicalMorphism) {
    let apex = OpenCubicalComplex::new(m, &[], Vec::<Vec<usize>>::new()).unwrap();
    let edges = OpenCubicalComplex::new(2 * m, &[], (0..m).map(|i| vec![2 * i, 2 * i + 1])).unwrap();
    let f = CubicalMorphism::new(apex.clone(), edges.clone(), (0..m).map(|i| 2 * i).collect()).unwrap();
    let g = CubicalMorphism::new(apex, edges, vec![0; m]).unwrap();
    (f, g)
}

/// Octagonal patch: internal vertices on the grid `1..=5 × 1..=5`, rough
/// boundary vertices at positions 2..=4 along each of the four sides, and
/// smooth cut corners. Returns the complex and a lookup from grid points to
/// vertex indices.
pub fn octagon() -> (OpenCubicalComplex, HashMap<(i32, i32), usize>) {
    let mut index = HashMap::new();
    let mut boundary = Vec::new();
    let mut next = 0;
    for x in 0..=6 {
        for y in 0..=6 {
            let internal = (1..=5).contains(&x) && (1..=5).contains(&y);
            let side = ((x == 0 || x == 6) && (2..=4).contains(&y)) || ((y == 0 || y == 6) && (2..=4).contains(&x));
            if internal || side {
                index.insert((x, y), next);
                if side {
                    boundary.push(next);
                }
                next += 1;
            }
        }
    }
    let mut edges = Vec::new();
    let mut squares = Vec::new();
    for (&(x, y), &a) in &index {
        if let Some(&b) = index.get(&(x + 1, y)) {
            edges.push([a, b]);
        }
        if let Some(&b) = index.get(&(x, y + 1)) {
            edges.push([a, b]);
        }
        if let (Some(&b), Some(&c), Some(&d)) = (index.get(&(x + 1, y)), index.get(&(x + 1, y + 1)), index.get(&(x, y + 1))) {
            squares.push([a, b, c, d]);
        }
    }
    let cx = OpenCubicalComplex::from_cells(next, &boundary, &edges, &squares).unwrap();
    (cx, index)
}

/// Z operator along a path of grid points.
pub fn grid_path(cx: &OpenCubicalComplex, index: &HashMap<(i32, i32), usize>, path: &[(i32, i32)]) -> BitVec {
    let n = cx.retained_faces(1).len();
    let mut v = BitVec::zeros(n);
    for w in path.windows(2) {
        v.flip(edge_index(cx, index[&w[0]], index[&w[1]]));
    }
    v
}

/// A patch of width 4 and height 8 with a single-vertex rough hole in row 4
/// next to column `hole_column`.
pub fn holed_patch(hole_column: usize) -> OpenCubicalComplex {
    let (w, h) = (4, 8);
    let p = cubical::patch(w, h).unwrap();
    let mut boundary = p.boundary_vertices();
    boundary.push(hole_column * (h + 1) + 4);
    let faces: Vec<Vec<usize>> = (1..=p.dimension()).flat_map(|d| p.faces(d).to_vec()).collect();
    OpenCubicalComplex::new(p.num_vertices(), &boundary, faces).unwrap()
}

pub fn code_of(cx: &OpenCubicalComplex) -> CssCode {
    CssCode::from_z_complex(cx.to_chain_complex()).unwrap()
}

pub fn shor_sandwich_w() -> ChainComplex {
    ChainComplex::from_differentials(
        &[
            (0, mat(3, &["100", "010", "001", "100", "010", "001", "110", "101"])),
            (-1, mat(8, &["11000010", "10100001", "00011010", "00010101"])),
        ],
        &[],
    )
    .unwrap()
}

pub fn shor_sandwich_r() -> ChainComplex {
    ChainComplex::from_differentials(
        &[
            (
                0,
                mat(
                    9,
                    &[
                        "100000000", "010000000", "001000000", "110000000", "101000000", "100110000", "000100000",
                        "000010000", "010001100", "000001000", "000000100", "001000011", "000000010", "000000001",
                    ],
                ),
            ),
            (-1, mat(14, &["00010111111000", "00001111000111", "11010000000000", "10101000000000"])),
        ],
        &[],
    )
    .unwrap()
}

pub fn shor_sandwich_t() -> ChainComplex {
    ChainComplex::from_differentials(
        &[
            (
                0,
                mat(
                    15,
                    &[
                        "110000000000000", "101000000000000", "100110000000000", "000100000000000", "000010000000000",
                        "010001100000000", "000001000000000", "000000100000000", "001000011000000", "000000010000000",
                        "000000001000000", "100000000110000", "000000000100000", "000000000010000", "010000000001100",
                        "000000000001000", "000000000000100", "001000000000011", "000000000000010", "000000000000001",
                    ],
                ),
            ),
            (
                -1,
                mat(20, &["10111111000000000000", "01111000111000000000", "10000000000111111000", "01000000000111000111"]),
            ),
        ],
        &[],
    )
    .unwrap()
}
