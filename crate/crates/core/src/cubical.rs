//! Open cubical complexes and their incidence chain complexes.
//!
//! A face is a sorted set of vertex indices; a `d`-face has `2^d` vertices.
//! Vertices are split into internal and boundary ones. The incidence complex
//! puts `d`-faces at degree `d − 1` and drops every face made only of
//! boundary vertices.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainComplex, ChainError, ChainMap, Component};
use crate::colimit::{self, ColimitError};
use crate::f2linalg::F2Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicalError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("invalid cubical complex: {0}")]
    InvalidComplex(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("no cocone: {0}")]
    NoCocone(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CubicalRepr", into = "CubicalRepr")]
pub struct OpenCubicalComplex {
    boundary: Vec<bool>,
    /// `faces[d]` holds the `d`-faces in lexicographic order.
    faces: Vec<Vec<Vec<usize>>>,
}

/// JSON form: vertex count, boundary vertices and the faces of dimension ≥ 1.
#[derive(Serialize, Deserialize)]
struct CubicalRepr {
    vertices: usize,
    boundary: Vec<usize>,
    faces: Vec<Vec<usize>>,
}

impl TryFrom<CubicalRepr> for OpenCubicalComplex {
    type Error = CubicalError;
    fn try_from(r: CubicalRepr) -> Result<Self, Self::Error> {
        OpenCubicalComplex::new(r.vertices, &r.boundary, r.faces)
    }
}

impl From<OpenCubicalComplex> for CubicalRepr {
    fn from(c: OpenCubicalComplex) -> Self {
        CubicalRepr {
            vertices: c.num_vertices(),
            boundary: c.boundary_vertices(),
            faces: c.faces.iter().skip(1).flatten().cloned().collect(),
        }
    }
}

fn face_dim(size: usize) -> Option<usize> {
    size.is_power_of_two().then(|| size.trailing_zeros() as usize)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

fn face_label(face: &[usize]) -> String {
    face.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
}

impl OpenCubicalComplex {
    /// Builds and validates a complex. Every vertex is a 0-face; `faces` lists
    /// the higher faces (singletons are accepted and ignored).
    pub fn new(
        n_vertices: usize,
        boundary: &[usize],
        faces: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self, CubicalError> {
        let mut flags = vec![false; n_vertices];
        for &b in boundary {
            if b >= n_vertices {
                return Err(CubicalError::InvalidComplex(format!("boundary vertex {b} out of range")));
            }
            flags[b] = true;
        }
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![(0..n_vertices).map(|v| vec![v]).collect()];
        for mut f in faces {
            f.sort_unstable();
            f.dedup();
            if let Some(&v) = f.iter().find(|&&v| v >= n_vertices) {
                return Err(CubicalError::InvalidComplex(format!("vertex {v} out of range")));
            }
            let d = face_dim(f.len())
                .ok_or_else(|| CubicalError::InvalidComplex(format!("face {f:?} has {} vertices", f.len())))?;
            if d == 0 {
                continue;
            }
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(f);
        }
        for fs in &mut by_dim {
            fs.sort();
            fs.dedup();
        }
        while by_dim.len() > 1 && by_dim.last().is_some_and(|l| l.is_empty()) {
            by_dim.pop();
        }
        let c = OpenCubicalComplex { boundary: flags, faces: by_dim };
        c.validate()?;
        Ok(c)
    }

    /// Builds a complex from edges and squares; a square `[a, b, c, d]` is
    /// given in cyclic order and contributes its four edges.
    pub fn from_cells(
        n_vertices: usize,
        boundary: &[usize],
        edges: &[[usize; 2]],
        squares: &[[usize; 4]],
    ) -> Result<Self, CubicalError> {
        let mut faces: Vec<Vec<usize>> = edges.iter().map(|e| e.to_vec()).collect();
        for s in squares {
            for i in 0..4 {
                faces.push(vec![s[i], s[(i + 1) % 4]]);
            }
            faces.push(s.to_vec());
        }
        Self::new(n_vertices, boundary, faces)
    }

    /// Checks the cubical axioms: each `d`-face carries the sub-faces of a
    /// `d`-cube and its edges form a `d`-regular graph, and faces meet in a
    /// face or not at all.
    pub fn validate(&self) -> Result<(), CubicalError> {
        let all: HashSet<&Vec<usize>> = self.faces.iter().flatten().collect();
        let mut incident: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); self.num_vertices()];
        for f in self.faces.iter().flatten() {
            for &v in f {
                incident[v].push(f);
            }
        }
        for (d, fs) in self.faces.iter().enumerate().skip(1) {
            for f in fs {
                let mut counts = vec![0usize; d];
                let mut degree: HashMap<usize, usize> = HashMap::new();
                let mut seen: HashSet<&Vec<usize>> = HashSet::new();
                for &v in f {
                    for &g in &incident[v] {
                        if g.len() < f.len() && seen.insert(g) && is_subset(g, f) {
                            let e = g.len().trailing_zeros() as usize;
                            counts[e] += 1;
                            if e == 1 {
                                *degree.entry(g[0]).or_default() += 1;
                                *degree.entry(g[1]).or_default() += 1;
                            }
                        }
                    }
                }
                for (e, &c) in counts.iter().enumerate() {
                    if c != binomial(d, e) << (d - e) {
                        return Err(CubicalError::InvalidComplex(format!(
                            "face {f:?} has {c} sub-faces of dimension {e}"
                        )));
                    }
                }
                if d >= 2 && f.iter().any(|v| degree.get(v).copied().unwrap_or(0) != d) {
                    return Err(CubicalError::InvalidComplex(format!("edges of face {f:?} do not form a cube")));
                }
            }
        }
        for v in 0..self.num_vertices() {
            for (i, a) in incident[v].iter().enumerate() {
                for b in &incident[v][i + 1..] {
                    let meet: Vec<usize> = a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect();
                    if !all.contains(&meet) {
                        return Err(CubicalError::InvalidComplex(format!("faces {a:?} and {b:?} meet in {meet:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&v| self.boundary[v]).collect()
    }

    pub fn internal_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&v| !self.boundary[v]).collect()
    }

    pub fn dimension(&self) -> usize {
        self.faces.len() - 1
    }

    /// The `d`-faces in lexicographic order.
    pub fn faces(&self, d: usize) -> &[Vec<usize>] {
        self.faces.get(d).map_or(&[], |f| f.as_slice())
    }

    pub fn num_faces(&self, d: usize) -> usize {
        self.faces(d).len()
    }

    /// The `d`-faces that survive into the incidence complex.
    pub fn retained_faces(&self, d: usize) -> Vec<&Vec<usize>> {
        self.faces(d).iter().filter(|f| f.iter().any(|&v| !self.boundary[v])).collect()
    }

    /// `(Υ □ Ω)`: vertex `(u, v)` has index `u·|V(Ω)| + v`.
    pub fn box_product(&self, other: &OpenCubicalComplex) -> OpenCubicalComplex {
        let m = other.num_vertices();
        let n = self.num_vertices() * m;
        let boundary = (0..n).map(|i| self.boundary[i / m] || other.boundary[i % m]).collect();
        let mut faces = vec![Vec::new(); self.dimension() + other.dimension() + 1];
        for (i, xs) in self.faces.iter().enumerate() {
            for (j, ys) in other.faces.iter().enumerate() {
                for x in xs {
                    for y in ys {
                        let mut f: Vec<usize> = x.iter().flat_map(|&u| y.iter().map(move |&v| u * m + v)).collect();
                        f.sort_unstable();
                        faces[i + j].push(f);
                    }
                }
            }
        }
        for fs in &mut faces {
            fs.sort();
        }
        OpenCubicalComplex { boundary, faces }
    }

    /// Index of each retained `d`-face within the retained list.
    fn retained_index(&self, d: usize) -> HashMap<&Vec<usize>, usize> {
        self.retained_faces(d).into_iter().enumerate().map(|(i, f)| (f, i)).collect()
    }

    /// The incidence chain complex: retained `d`-faces at degree `d − 1`,
    /// differentials given by containment. Degrees `−1, 0, 1` are always
    /// present.
    pub fn to_chain_complex(&self) -> ChainComplex {
        let top = self.dimension().max(2);
        let mut components = BTreeMap::new();
        for d in 0..=top {
            let faces = self.retained_faces(d);
            components.insert(
                d as i32 - 1,
                Component { dim: faces.len(), labels: faces.iter().map(|f| face_label(f)).collect() },
            );
        }
        let mut differentials = BTreeMap::new();
        for d in 1..=top {
            let lower = self.retained_faces(d - 1);
            let upper = self.retained_index(d);
            let mut m = F2Matrix::zeros(lower.len(), upper.len());
            if !upper.is_empty() {
                let mut by_vertex: HashMap<usize, Vec<(&Vec<usize>, usize)>> = HashMap::new();
                for (&f, &j) in &upper {
                    by_vertex.entry(f[0]).or_default().push((f, j));
                    for &v in &f[1..] {
                        by_vertex.entry(v).or_default().push((f, j));
                    }
                }
                for (i, g) in lower.iter().enumerate() {
                    for &(f, j) in by_vertex.get(&g[0]).into_iter().flatten() {
                        if is_subset(g, f) {
                            m.set(i, j, true);
                        }
                    }
                }
            }
            differentials.insert(d as i32 - 2, m);
        }
        ChainComplex::from_parts_unchecked(components, differentials)
    }
}

/// The cycle graph with `n ≥ 3` vertices, all internal.
pub fn cycle_graph(n: usize) -> Result<OpenCubicalComplex, CubicalError> {
    if n < 3 {
        return Err(CubicalError::Parameter(format!("cycle graph needs n ≥ 3, got {n}")));
    }
    OpenCubicalComplex::new(n, &[], (0..n).map(|i| vec![i, (i + 1) % n]))
}

/// The path with `n ≥ 1` edges and `n + 1` internal vertices.
pub fn path_graph(n: usize) -> Result<OpenCubicalComplex, CubicalError> {
    if n < 1 {
        return Err(CubicalError::Parameter(format!("path graph needs n ≥ 1, got {n}")));
    }
    OpenCubicalComplex::new(n + 1, &[], (0..n).map(|i| vec![i, i + 1]))
}

/// The path with `n ≥ 1` edges whose two end vertices are boundary vertices.
pub fn open_path(n: usize) -> Result<OpenCubicalComplex, CubicalError> {
    if n < 1 {
        return Err(CubicalError::Parameter(format!("open path needs n ≥ 1, got {n}")));
    }
    OpenCubicalComplex::new(n + 1, &[0, n], (0..n).map(|i| vec![i, i + 1]))
}

/// `C_m □ C_n`.
pub fn toric(m: usize, n: usize) -> Result<OpenCubicalComplex, CubicalError> {
    Ok(cycle_graph(m)?.box_product(&cycle_graph(n)?))
}

/// A planar patch `P_{w−1} □ G_h` with two rough and two smooth sides. Its
/// code has distances `d_Z = h` and `d_X = w`; vertex `(u, v)` has index
/// `u·(h+1) + v` and the rough sides are `v = 0` and `v = h`.
pub fn patch(w: usize, h: usize) -> Result<OpenCubicalComplex, CubicalError> {
    if w < 2 || h < 1 {
        return Err(CubicalError::Parameter(format!("patch needs w ≥ 2 and h ≥ 1, got {w}×{h}")));
    }
    Ok(path_graph(w - 1)?.box_product(&open_path(h)?))
}

/// A vertex map that sends faces to faces of equal dimension and preserves
/// the internal/boundary split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalMorphism {
    source: OpenCubicalComplex,
    target: OpenCubicalComplex,
    vertex_map: Vec<usize>,
}

impl CubicalMorphism {
    pub fn new(
        source: OpenCubicalComplex,
        target: OpenCubicalComplex,
        vertex_map: Vec<usize>,
    ) -> Result<Self, CubicalError> {
        if vertex_map.len() != source.num_vertices() {
            return Err(CubicalError::InvalidMorphism(format!(
                "vertex map has {} entries for {} vertices",
                vertex_map.len(),
                source.num_vertices()
            )));
        }
        for (v, &w) in vertex_map.iter().enumerate() {
            if w >= target.num_vertices() {
                return Err(CubicalError::InvalidMorphism(format!("vertex {v} maps out of range")));
            }
            if source.is_boundary(v) != target.is_boundary(w) {
                return Err(CubicalError::InvalidMorphism(format!("vertex {v} changes boundary status")));
            }
        }
        let f = CubicalMorphism { source, target, vertex_map };
        for d in 1..=f.source.dimension() {
            let targets: HashSet<&Vec<usize>> = f.target.faces(d).iter().collect();
            for face in f.source.faces(d) {
                let img = f.image(face);
                if img.len() != face.len() || !targets.contains(&img) {
                    return Err(CubicalError::InvalidMorphism(format!("face {face:?} does not map to a face")));
                }
            }
        }
        Ok(f)
    }

    pub fn source(&self) -> &OpenCubicalComplex {
        &self.source
    }

    pub fn target(&self) -> &OpenCubicalComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// The sorted, deduplicated image of a vertex set.
    pub fn image(&self, face: &[usize]) -> Vec<usize> {
        let mut img: Vec<usize> = face.iter().map(|&v| self.vertex_map[v]).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &CubicalMorphism) -> Result<CubicalMorphism, CubicalError> {
        if first.target != self.source {
            return Err(CubicalError::InvalidMorphism("composing morphisms that do not meet".into()));
        }
        let map = first.vertex_map.iter().map(|&v| self.vertex_map[v]).collect();
        CubicalMorphism::new(first.source.clone(), self.target.clone(), map)
    }

    /// The induced chain map between incidence complexes.
    pub fn to_chain_map(&self) -> Result<ChainMap, CubicalError> {
        let (s, t) = (self.source.to_chain_complex(), self.target.to_chain_complex());
        let top = self.source.dimension().max(self.target.dimension()).max(2);
        let mut comps = BTreeMap::new();
        for d in 0..=top {
            let idx = self.target.retained_index(d);
            let src = self.source.retained_faces(d);
            let mut m = F2Matrix::zeros(idx.len(), src.len());
            for (j, f) in src.iter().enumerate() {
                let img = self.image(f);
                let i = idx.get(&img).ok_or_else(|| {
                    CubicalError::InvalidMorphism(format!("retained face {f:?} maps to a dropped face"))
                })?;
                m.set(*i, j, true);
            }
            comps.insert(d as i32 - 1, m);
        }
        Ok(ChainMap::new(s, t, comps)?)
    }
}

/// A pushout of open cubical complexes with its two legs.
#[derive(Clone, Debug)]
pub struct CubicalPushout {
    pub complex: OpenCubicalComplex,
    pub k: CubicalMorphism,
    pub l: CubicalMorphism,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Glues the targets of a span `Ω ← Ξ → Υ` along the images of `Ξ`. Fails
/// with [`CubicalError::NoCocone`] when a face would lose vertices or the
/// quotient is not a valid complex.
pub fn pushout_acc(f: &CubicalMorphism, g: &CubicalMorphism) -> Result<CubicalPushout, CubicalError> {
    if f.source != g.source {
        return Err(CubicalError::InvalidMorphism("span legs have different sources".into()));
    }
    let n1 = f.target.num_vertices();
    let n = n1 + g.target.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    for v in 0..f.source.num_vertices() {
        let (a, b) = (find(&mut parent, f.vertex_map[v]), find(&mut parent, n1 + g.vertex_map[v]));
        parent[a.max(b)] = a.min(b);
    }
    let mut class_of = vec![usize::MAX; n];
    let mut next = 0;
    let mut boundary = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        if class_of[r] == usize::MAX {
            class_of[r] = next;
            next += 1;
            boundary.push(if v < n1 { f.target.is_boundary(v) } else { g.target.is_boundary(v - n1) });
        }
        class_of[v] = class_of[r];
    }
    let mut faces = Vec::new();
    for (offset, c) in [(0, &f.target), (n1, &g.target)] {
        for face in c.faces.iter().skip(1).flatten() {
            let mut img: Vec<usize> = face.iter().map(|&v| class_of[offset + v]).collect();
            img.sort_unstable();
            img.dedup();
            if img.len() != face.len() {
                return Err(CubicalError::NoCocone(format!("face {face:?} collapses")));
            }
            faces.push(img);
        }
    }
    let bnd: Vec<usize> = (0..next).filter(|&v| boundary[v]).collect();
    let complex = OpenCubicalComplex::new(next, &bnd, faces).map_err(|e| match e {
        CubicalError::InvalidComplex(msg) => CubicalError::NoCocone(msg),
        other => other,
    })?;
    let k = CubicalMorphism::new(f.target.clone(), complex.clone(), class_of[..n1].to_vec())?;
    let l = CubicalMorphism::new(g.target.clone(), complex.clone(), class_of[n1..].to_vec())?;
    Ok(CubicalPushout { complex, k, l })
}

/// Checks that the incidence functor carries the cubical pushout of the span
/// to the chain-complex pushout of the incidence span: the two agree after
/// matching each glued face with the pushout basis vector it projects to.
pub fn verify_cocontinuity(f: &CubicalMorphism, g: &CubicalMorphism) -> Result<bool, CubicalError> {
    let po = pushout_acc(f, g)?;
    let chain_po = colimit::pushout(&f.to_chain_map()?, &g.to_chain_map()?)?;
    let chi = po.complex.to_chain_complex();
    let q = &chain_po.apex;
    let mut perms = BTreeMap::new();
    for d in 0..=po.complex.dimension().max(2) {
        let n = d as i32 - 1;
        if q.dim(n) != chi.dim(n) {
            return Ok(false);
        }
        let coeq = chain_po.coeq.component(n);
        let offset = f.target.retained_faces(d).len();
        let mut perm = vec![usize::MAX; q.dim(n)];
        for (j, face) in po.complex.retained_faces(d).into_iter().enumerate() {
            let pre = f
                .target
                .retained_faces(d)
                .into_iter()
                .position(|x| &po.k.image(x) == face)
                .or_else(|| {
                    g.target.retained_faces(d).into_iter().position(|x| &po.l.image(x) == face).map(|i| i + offset)
                });
            let Some(src) = pre else { return Ok(false) };
            let col = coeq.column(src);
            if col.weight() != 1 {
                return Ok(false);
            }
            let i = col.first_one().unwrap_or(0);
            if perm[i] != usize::MAX {
                return Ok(false);
            }
            perm[i] = j;
        }
        perms.insert(n, perm);
    }
    Ok(q.permute(&perms) == chi)
}
