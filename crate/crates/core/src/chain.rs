//! Bounded chain complexes of based F2 spaces and chain maps between them.
//!
//! Convention: `∂_n : C_{n+1} → C_n`, stored as a `dim C_n × dim C_{n+1}`
//! matrix. Missing components are zero spaces and missing differentials
//! are zero maps.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2linalg::{BitVec, F2Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("differential at degree {degree} has shape {found:?}, expected {expected:?}")]
    DifferentialShape { degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("component at degree {degree} has {labels} labels for dimension {dim}")]
    LabelCount { degree: i32, dim: usize, labels: usize },
    #[error("∂_{degree}∘∂_{} is nonzero at entry ({row}, {col})", degree + 1)]
    NotAComplex { degree: i32, row: usize, col: usize },
    #[error("chain map component at degree {degree} has shape {found:?}, expected {expected:?}")]
    MapShape { degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("square at degree {degree} does not commute (entry ({row}, {col}))")]
    NotAChainMap { degree: i32, row: usize, col: usize },
    #[error("chain maps do not compose: {0}")]
    Incompatible(String),
    #[error("vector is not a cycle at degree {degree}")]
    NotACycle { degree: i32 },
}

/// One graded piece: its dimension and basis labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub dim: usize,
    pub labels: Vec<String>,
}

impl Component {
    pub fn with_prefix(dim: usize, prefix: &str) -> Self {
        Component { dim, labels: (0..dim).map(|i| format!("{prefix}{i}")).collect() }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ChainComplex {
    components: BTreeMap<i32, Component>,
    differentials: BTreeMap<i32, F2Matrix>,
}

impl PartialEq for ChainComplex {
    /// Dimensions and matrices are compared; labels are ignored.
    fn eq(&self, other: &Self) -> bool {
        let degrees: BTreeSet<i32> = self.degrees().into_iter().chain(other.degrees()).collect();
        degrees.iter().all(|&n| self.dim(n) == other.dim(n))
            && degrees.iter().all(|&n| self.diff(n) == other.diff(n))
    }
}

impl Eq for ChainComplex {}

/// Representatives of a homology space together with a basis of the
/// boundaries they are taken modulo.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: i32,
    pub reps: Vec<BitVec>,
    pub boundaries: F2Matrix,
}

impl HomologyBasis {
    /// Coordinates of the class of the cycle `v` in the representative basis.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let n = self.boundaries.nrows();
        let r = F2Matrix::from_columns(n, &self.reps);
        let y = self.boundaries.hstack(&r).solve(v).ok()??;
        let b = self.boundaries.ncols();
        Some(y.slice(b, b + self.reps.len()))
    }
}

impl ChainComplex {
    /// The zero complex.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds and validates a complex.
    pub fn new(
        components: BTreeMap<i32, Component>,
        differentials: BTreeMap<i32, F2Matrix>,
    ) -> Result<Self, ChainError> {
        let c = Self::from_parts_unchecked(components, differentials);
        c.validate()?;
        Ok(c)
    }

    /// Builds without validation; pair with [`Self::validate`].
    pub fn from_parts_unchecked(
        components: BTreeMap<i32, Component>,
        differentials: BTreeMap<i32, F2Matrix>,
    ) -> Self {
        ChainComplex { components, differentials }
    }

    /// Builds a complex from `(degree, ∂_degree)` pairs, inferring dimensions
    /// and using labels `{prefix}{i}` where `prefix` is looked up per degree
    /// (falling back to `e`).
    pub fn from_differentials(
        diffs: &[(i32, F2Matrix)],
        prefixes: &[(i32, &str)],
    ) -> Result<Self, ChainError> {
        let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
        for (n, m) in diffs {
            for (deg, d) in [(*n, m.nrows()), (*n + 1, m.ncols())] {
                if let Some(&old) = dims.get(&deg) {
                    if old != d {
                        return Err(ChainError::DifferentialShape {
                            degree: *n,
                            expected: (dims.get(n).copied().unwrap_or(0), dims.get(&(n + 1)).copied().unwrap_or(0)),
                            found: m.shape(),
                        });
                    }
                }
                dims.insert(deg, d);
            }
        }
        let prefix = |deg: i32| prefixes.iter().find(|(d, _)| *d == deg).map(|(_, p)| *p).unwrap_or("e");
        let components =
            dims.iter().map(|(&deg, &d)| (deg, Component::with_prefix(d, prefix(deg)))).collect();
        let differentials = diffs.iter().cloned().collect();
        Self::new(components, differentials)
    }

    /// A single space `F2^dim` at `degree`.
    pub fn concentrated(degree: i32, dim: usize, prefix: &str) -> Self {
        let mut components = BTreeMap::new();
        components.insert(degree, Component::with_prefix(dim, prefix));
        ChainComplex { components, differentials: BTreeMap::new() }
    }

    /// The tensor unit: F2 in degree 0.
    pub fn unit() -> Self {
        Self::concentrated(0, 1, "1")
    }

    pub fn dim(&self, n: i32) -> usize {
        self.components.get(&n).map_or(0, |c| c.dim)
    }

    pub fn labels(&self, n: i32) -> Vec<String> {
        self.components.get(&n).map(|c| c.labels.clone()).unwrap_or_default()
    }

    pub fn components(&self) -> &BTreeMap<i32, Component> {
        &self.components
    }

    pub fn differentials(&self) -> &BTreeMap<i32, F2Matrix> {
        &self.differentials
    }

    /// `∂_n : C_{n+1} → C_n`.
    pub fn diff(&self, n: i32) -> F2Matrix {
        self.differentials
            .get(&n)
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.dim(n), self.dim(n + 1)))
    }

    /// Degrees with nonzero components, ascending.
    pub fn degrees(&self) -> Vec<i32> {
        self.components.iter().filter(|(_, c)| c.dim > 0).map(|(&n, _)| n).collect()
    }

    /// Smallest and largest degree with a nonzero component.
    pub fn range(&self) -> Option<(i32, i32)> {
        let d = self.degrees();
        Some((*d.first()?, *d.last()?))
    }

    pub fn set_labels(&mut self, n: i32, labels: Vec<String>) {
        let dim = self.dim(n);
        assert_eq!(labels.len(), dim, "label count mismatch at degree {n}");
        self.components.insert(n, Component { dim, labels });
    }

    /// Checks shapes, label counts and `∂_n ∘ ∂_{n+1} = 0`; the error names
    /// the first offending degree.
    pub fn validate(&self) -> Result<(), ChainError> {
        for (&n, c) in &self.components {
            if c.labels.len() != c.dim {
                return Err(ChainError::LabelCount { degree: n, dim: c.dim, labels: c.labels.len() });
            }
        }
        for (&n, m) in &self.differentials {
            let expected = (self.dim(n), self.dim(n + 1));
            if m.shape() != expected {
                return Err(ChainError::DifferentialShape { degree: n, expected, found: m.shape() });
            }
        }
        for (&n, m) in &self.differentials {
            if let Some(next) = self.differentials.get(&(n + 1)) {
                let prod = m.mul(next);
                if let Some(row) = prod.nonzero_rows().first() {
                    let col = prod.row(*row).first_one().unwrap();
                    return Err(ChainError::NotAComplex { degree: n, row: *row, col });
                }
            }
        }
        Ok(())
    }

    /// `dim ker ∂_{n−1} − rank ∂_n`.
    pub fn homology_dim(&self, n: i32) -> usize {
        self.dim(n) - self.diff(n - 1).rank() - self.diff(n).rank()
    }

    /// Deterministic homology representatives: the image basis of `∂_n`
    /// extended to a basis of `ker ∂_{n−1}`, taking the added kernel vectors
    /// in ascending free-column order.
    pub fn homology_basis(&self, n: i32) -> HomologyBasis {
        let boundaries = self.diff(n).image_basis();
        let kernel = self.diff(n - 1).kernel_basis();
        let combined = boundaries.hstack(&kernel);
        let b = boundaries.ncols();
        let reps = combined
            .rref()
            .pivots
            .into_iter()
            .filter(|&p| p >= b)
            .map(|p| combined.column(p))
            .collect();
        HomologyBasis { degree: n, reps, boundaries }
    }

    /// `(C*)_n = C_{−n}`, `∂^{C*}_n = (∂^C_{−n−1})ᵀ`. Labels are reused.
    pub fn dual(&self) -> ChainComplex {
        let components = self.components.iter().map(|(&n, c)| (-n, c.clone())).collect();
        let differentials =
            self.differentials.iter().map(|(&n, m)| (-n - 1, m.transpose())).collect();
        ChainComplex { components, differentials }
    }

    /// `C ⊕ D` with labels prefixed `L.` and `R.`.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        self.direct_sum_labeled(other, "L.", "R.")
    }

    pub fn direct_sum_labeled(&self, other: &ChainComplex, left: &str, right: &str) -> ChainComplex {
        let degrees: BTreeSet<i32> =
            self.components.keys().chain(other.components.keys()).copied().collect();
        let mut components = BTreeMap::new();
        for &n in &degrees {
            let mut labels: Vec<String> = self.labels(n).iter().map(|l| format!("{left}{l}")).collect();
            labels.extend(other.labels(n).iter().map(|l| format!("{right}{l}")));
            components.insert(n, Component { dim: self.dim(n) + other.dim(n), labels });
        }
        let mut differentials = BTreeMap::new();
        let ddeg: BTreeSet<i32> =
            self.differentials.keys().chain(other.differentials.keys()).copied().collect();
        for n in ddeg {
            differentials.insert(n, self.diff(n).block_diag(&other.diff(n)));
        }
        ChainComplex { components, differentials }
    }

    /// Summands `(i, j)` of `(C ⊗ D)_n` with both factors nonzero, ascending `i`.
    fn tensor_summands(&self, other: &ChainComplex, n: i32) -> Vec<(i32, i32)> {
        self.degrees()
            .into_iter()
            .filter(|&i| other.dim(n - i) > 0)
            .map(|i| (i, n - i))
            .collect()
    }

    /// Tensor product; summands ordered by ascending left degree, bases by
    /// row-major Kronecker order.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        let (Some((clo, chi)), Some((dlo, dhi))) = (self.range(), other.range()) else {
            return ChainComplex::zero();
        };
        let mut components = BTreeMap::new();
        let mut offsets: BTreeMap<i32, Vec<(i32, i32, usize)>> = BTreeMap::new();
        for n in (clo + dlo)..=(chi + dhi) {
            let mut labels = Vec::new();
            let mut offs = Vec::new();
            for (i, j) in self.tensor_summands(other, n) {
                offs.push((i, j, labels.len()));
                for a in self.labels(i) {
                    for b in other.labels(j) {
                        labels.push(format!("{a}⊗{b}"));
                    }
                }
            }
            components.insert(n, Component { dim: labels.len(), labels });
            offsets.insert(n, offs);
        }
        let mut differentials = BTreeMap::new();
        for n in (clo + dlo)..(chi + dhi) {
            let rows = components[&n].dim;
            let cols = components[&(n + 1)].dim;
            let mut m = F2Matrix::zeros(rows, cols);
            let target = &offsets[&n];
            for &(i, j, col_off) in &offsets[&(n + 1)] {
                for &(ti, tj, row_off) in target {
                    let block = if ti == i && tj == j - 1 {
                        F2Matrix::identity(self.dim(i)).kron(&other.diff(j - 1))
                    } else if ti == i - 1 && tj == j {
                        self.diff(i - 1).kron(&F2Matrix::identity(other.dim(j)))
                    } else {
                        continue;
                    };
                    for r in 0..block.nrows() {
                        for c in block.row(r).iter_ones() {
                            m.set(row_off + r, col_off + c, true);
                        }
                    }
                }
            }
            differentials.insert(n, m);
        }
        ChainComplex { components, differentials }
    }

    /// `C[p]_n = C_{n+p}`: a component at degree `d` moves to `d − p`.
    pub fn translate(&self, p: i32) -> ChainComplex {
        let components = self.components.iter().map(|(&n, c)| (n - p, c.clone())).collect();
        let differentials = self.differentials.iter().map(|(&n, m)| (n - p, m.clone())).collect();
        ChainComplex { components, differentials }
    }

    /// Reorders bases: `perms[n][old] = new` at each listed degree.
    pub fn permute(&self, perms: &BTreeMap<i32, Vec<usize>>) -> ChainComplex {
        let id = |n: i32| -> Vec<usize> { (0..self.dim(n)).collect() };
        let perm = |n: i32| perms.get(&n).cloned().unwrap_or_else(|| id(n));
        let mut components = BTreeMap::new();
        for (&n, c) in &self.components {
            let p = perm(n);
            let mut labels = vec![String::new(); c.dim];
            for (old, l) in c.labels.iter().enumerate() {
                labels[p[old]] = l.clone();
            }
            components.insert(n, Component { dim: c.dim, labels });
        }
        let mut differentials = BTreeMap::new();
        for (&n, m) in &self.differentials {
            let (pr, pc) = (perm(n), perm(n + 1));
            let mut out = F2Matrix::zeros(m.nrows(), m.ncols());
            for i in 0..m.nrows() {
                for j in m.row(i).iter_ones() {
                    out.set(pr[i], pc[j], true);
                }
            }
            differentials.insert(n, out);
        }
        ChainComplex { components, differentials }
    }
}

/// A degree-wise family of matrices `f_n : C_n → D_n`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: BTreeMap<i32, F2Matrix>,
}

impl PartialEq for ChainMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.all_degrees().into_iter().chain(other.all_degrees()).all(|n| self.component(n) == other.component(n))
    }
}

impl ChainMap {
    /// Builds and validates a chain map.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: BTreeMap<i32, F2Matrix>,
    ) -> Result<Self, ChainError> {
        let f = Self::from_parts_unchecked(source, target, components);
        f.validate()?;
        Ok(f)
    }

    pub fn from_parts_unchecked(
        source: ChainComplex,
        target: ChainComplex,
        components: BTreeMap<i32, F2Matrix>,
    ) -> Self {
        ChainMap { source, target, components }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let components = c.degrees().into_iter().map(|n| (n, F2Matrix::identity(c.dim(n)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// `f_n`, a zero matrix when absent.
    pub fn component(&self, n: i32) -> F2Matrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.target.dim(n), self.source.dim(n)))
    }

    pub fn components(&self) -> &BTreeMap<i32, F2Matrix> {
        &self.components
    }

    fn all_degrees(&self) -> BTreeSet<i32> {
        self.source.degrees().into_iter().chain(self.target.degrees()).chain(self.components.keys().copied()).collect()
    }

    /// Checks component shapes and that `f_n ∘ ∂^C_n = ∂^D_n ∘ f_{n+1}`.
    pub fn validate(&self) -> Result<(), ChainError> {
        for (&n, m) in &self.components {
            let expected = (self.target.dim(n), self.source.dim(n));
            if m.shape() != expected {
                return Err(ChainError::MapShape { degree: n, expected, found: m.shape() });
            }
        }
        for n in self.all_degrees() {
            let lhs = self.component(n).mul(&self.source.diff(n));
            let rhs = self.target.diff(n).mul(&self.component(n + 1));
            let d = lhs.add(&rhs);
            if let Some(&row) = d.nonzero_rows().first() {
                let col = d.row(row).first_one().unwrap();
                return Err(ChainError::NotAChainMap { degree: n, row, col });
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap, ChainError> {
        if first.target != self.source {
            return Err(ChainError::Incompatible("target of the first map is not the source of the second".into()));
        }
        let degrees: BTreeSet<i32> = first.source.degrees().into_iter().chain(self.target.degrees()).collect();
        let components = degrees
            .into_iter()
            .map(|n| (n, self.component(n).mul(&first.component(n))))
            .collect();
        Ok(ChainMap { source: first.source.clone(), target: self.target.clone(), components })
    }

    /// Degree-wise sum `self + other`.
    pub fn add(&self, other: &ChainMap) -> Result<ChainMap, ChainError> {
        if self.source != other.source || self.target != other.target {
            return Err(ChainError::Incompatible("sum of maps with different endpoints".into()));
        }
        let components =
            self.all_degrees().into_iter().map(|n| (n, self.component(n).add(&other.component(n)))).collect();
        Ok(ChainMap { source: self.source.clone(), target: self.target.clone(), components })
    }

    /// `f* : D* → C*` with `(f*)_i = (f_{−i})ᵀ`.
    pub fn dual(&self) -> ChainMap {
        let components = self.components.iter().map(|(&n, m)| (-n, m.transpose())).collect();
        ChainMap { source: self.target.dual(), target: self.source.dual(), components }
    }

    /// Same matrices between relabelled or reordered endpoints of equal shape.
    pub fn with_endpoints(&self, source: ChainComplex, target: ChainComplex) -> Result<ChainMap, ChainError> {
        ChainMap::new(source, target, self.components.clone())
    }

    /// `H_n(f)` in the deterministic homology bases of source and target.
    pub fn induced_homology_map(&self, n: i32) -> Result<F2Matrix, ChainError> {
        let src = self.source.homology_basis(n);
        let tgt = self.target.homology_basis(n);
        let fnm = self.component(n);
        let mut cols = Vec::with_capacity(src.reps.len());
        for r in &src.reps {
            let image = fnm.mul_vec(r);
            let coords = tgt.coordinates(&image).ok_or(ChainError::NotACycle { degree: n })?;
            cols.push(coords);
        }
        Ok(F2Matrix::from_columns(tgt.reps.len(), &cols))
    }
}

/// `C ⊕ D` together with the two canonical inclusions.
pub fn direct_sum_with_inclusions(c: &ChainComplex, d: &ChainComplex) -> (ChainComplex, ChainMap, ChainMap) {
    let s = c.direct_sum(d);
    let degrees: BTreeSet<i32> = c.degrees().into_iter().chain(d.degrees()).collect();
    let mut ic = BTreeMap::new();
    let mut id = BTreeMap::new();
    for n in degrees {
        let (a, b) = (c.dim(n), d.dim(n));
        ic.insert(n, F2Matrix::identity(a).vstack(&F2Matrix::zeros(b, a)));
        id.insert(n, F2Matrix::zeros(a, b).vstack(&F2Matrix::identity(b)));
    }
    let ic = ChainMap::from_parts_unchecked(c.clone(), s.clone(), ic);
    let id = ChainMap::from_parts_unchecked(d.clone(), s.clone(), id);
    (s, ic, id)
}
