//! CSS codes as a length-2 complex `C_1 → C_0 → C_{-1}` and its dual.
//!
//! `∂_0 = P_Zᵀ` (Z checks to qubits) and `∂_{-1} = P_X` (qubits to X checks).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainComplex, ChainError, Component};
use crate::f2linalg::{BitVec, F2Matrix, Span};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("P_X P_Zᵀ ≠ 0: X check {x_check} anticommutes with Z check {z_check}")]
    Commutation { x_check: usize, z_check: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("complex is not concentrated in degrees 1, 0, -1")]
    NotLengthTwo,
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
    #[error("invalid logical basis: {0}")]
    InvalidBasis(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Z,
    X,
}

impl Kind {
    pub fn opposite(self) -> Kind {
        match self {
            Kind::Z => Kind::X,
            Kind::X => Kind::Z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorClass {
    Logical,
    Stabilizer,
    Detectable,
}

/// Logical representatives with `z_reps[i] · x_reps[j] = δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalBasis {
    pub z_reps: Vec<BitVec>,
    pub x_reps: Vec<BitVec>,
}

impl LogicalBasis {
    pub fn swapped(&self) -> LogicalBasis {
        LogicalBasis { z_reps: self.x_reps.clone(), x_reps: self.z_reps.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeMetrics {
    pub n: usize,
    pub k: usize,
    /// `None` when `k = 0`.
    pub d_z: Option<usize>,
    pub d_x: Option<usize>,
    pub d: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub w_z: usize,
    pub w_x: usize,
    pub q_z: usize,
    pub q_x: usize,
}

/// Limits for the exponential searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Largest kernel dimension enumerated exhaustively.
    pub max_kernel_dim: usize,
    /// Largest number of candidate supports tried by the weight-ordered search.
    pub max_weight_candidates: u64,
    /// Largest operator support enumerated by the separation check.
    pub max_support: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_kernel_dim: 28, max_weight_candidates: 1 << 28, max_support: 22 }
    }
}

#[derive(Clone, Debug)]
pub struct CssCode {
    z_complex: ChainComplex,
    x_complex: ChainComplex,
    logical_basis: Option<LogicalBasis>,
}

impl PartialEq for CssCode {
    fn eq(&self, other: &Self) -> bool {
        self.z_complex == other.z_complex && self.logical_basis == other.logical_basis
    }
}

impl CssCode {
    pub fn from_parity_checks(p_x: &F2Matrix, p_z: &F2Matrix) -> Result<CssCode, CodeError> {
        let labels = (0..p_x.ncols()).map(|i| format!("q{i}")).collect();
        Self::from_parity_checks_labeled(p_x, p_z, labels)
    }

    pub fn from_parity_checks_labeled(
        p_x: &F2Matrix,
        p_z: &F2Matrix,
        labels: Vec<String>,
    ) -> Result<CssCode, CodeError> {
        if p_x.ncols() != p_z.ncols() {
            return Err(CodeError::Shape(format!(
                "P_X has {} columns but P_Z has {}",
                p_x.ncols(),
                p_z.ncols()
            )));
        }
        let n = p_x.ncols();
        if labels.len() != n {
            return Err(CodeError::Shape(format!("{} labels for {n} qubits", labels.len())));
        }
        let prod = p_x.mul(&p_z.transpose());
        if let Some(&x_check) = prod.nonzero_rows().first() {
            let z_check = prod.row(x_check).first_one().unwrap();
            return Err(CodeError::Commutation { x_check, z_check });
        }
        let mut components = BTreeMap::new();
        components.insert(1, Component::with_prefix(p_z.nrows(), "z"));
        components.insert(0, Component { dim: n, labels });
        components.insert(-1, Component::with_prefix(p_x.nrows(), "x"));
        let mut differentials = BTreeMap::new();
        differentials.insert(0, p_z.transpose());
        differentials.insert(-1, p_x.clone());
        let z_complex = ChainComplex::new(components, differentials)?;
        Ok(Self::from_valid_complex(z_complex))
    }

    /// Reads a code off a complex concentrated in degrees 1, 0, -1.
    pub fn from_z_complex(c: ChainComplex) -> Result<CssCode, CodeError> {
        if c.degrees().iter().any(|n| !(-1..=1).contains(n)) {
            return Err(CodeError::NotLengthTwo);
        }
        c.validate()?;
        let mut components = BTreeMap::new();
        for n in [1, 0, -1] {
            components.insert(n, Component { dim: c.dim(n), labels: c.labels(n) });
        }
        let mut differentials = BTreeMap::new();
        differentials.insert(0, c.diff(0));
        differentials.insert(-1, c.diff(-1));
        Ok(Self::from_valid_complex(ChainComplex::from_parts_unchecked(components, differentials)))
    }

    fn from_valid_complex(z_complex: ChainComplex) -> CssCode {
        let x_complex = z_complex.dual();
        CssCode { z_complex, x_complex, logical_basis: None }
    }

    pub fn z_complex(&self) -> &ChainComplex {
        &self.z_complex
    }

    pub fn x_complex(&self) -> &ChainComplex {
        &self.x_complex
    }

    pub fn p_x(&self) -> F2Matrix {
        self.z_complex.diff(-1)
    }

    pub fn p_z(&self) -> F2Matrix {
        self.z_complex.diff(0).transpose()
    }

    /// Parity matrix whose kernel contains the operators of `kind`
    /// (`P_X` for Z operators).
    pub fn detector(&self, kind: Kind) -> F2Matrix {
        match kind {
            Kind::Z => self.p_x(),
            Kind::X => self.p_z(),
        }
    }

    /// Stabilizer generators of `kind`, one per row.
    pub fn stabilizers(&self, kind: Kind) -> F2Matrix {
        match kind {
            Kind::Z => self.p_z(),
            Kind::X => self.p_x(),
        }
    }

    pub fn n(&self) -> usize {
        self.z_complex.dim(0)
    }

    pub fn k(&self) -> usize {
        self.z_complex.homology_dim(0)
    }

    pub fn num_z_checks(&self) -> usize {
        self.z_complex.dim(1)
    }

    pub fn num_x_checks(&self) -> usize {
        self.z_complex.dim(-1)
    }

    pub fn qubit_labels(&self) -> Vec<String> {
        self.z_complex.labels(0)
    }

    pub fn logical_basis(&self) -> Option<&LogicalBasis> {
        self.logical_basis.as_ref()
    }

    pub fn is_based(&self) -> bool {
        self.logical_basis.is_some()
    }

    pub fn without_basis(&self) -> CssCode {
        CssCode { logical_basis: None, ..self.clone() }
    }

    /// The code on the dual complex, with Z and X exchanged.
    pub fn swap_zx(&self) -> CssCode {
        CssCode {
            z_complex: self.x_complex.clone(),
            x_complex: self.z_complex.clone(),
            logical_basis: self.logical_basis.as_ref().map(LogicalBasis::swapped),
        }
    }

    /// Operator view for `kind`: the code itself for Z, the swapped code for X.
    pub fn oriented(&self, kind: Kind) -> CssCode {
        match kind {
            Kind::Z => self.clone(),
            Kind::X => self.swap_zx(),
        }
    }

    pub fn weight_profile(&self) -> WeightProfile {
        let (px, pz) = (self.p_x(), self.p_z());
        WeightProfile {
            w_z: pz.max_row_weight(),
            w_x: px.max_row_weight(),
            q_z: pz.max_col_weight(),
            q_x: px.max_col_weight(),
        }
    }

    pub fn classify(&self, v: &BitVec, kind: Kind) -> OperatorClass {
        assert_eq!(v.len(), self.n(), "operator length must equal n");
        if !self.detector(kind).mul_vec(v).is_zero() {
            return OperatorClass::Detectable;
        }
        let stabs = Span::of_vectors(self.n(), self.stabilizers(kind).rows().iter().cloned());
        if stabs.contains(v) {
            OperatorClass::Stabilizer
        } else {
            OperatorClass::Logical
        }
    }

    pub fn is_operator_logical(&self, v: &BitVec, kind: Kind) -> OperatorClass {
        self.classify(v, kind)
    }

    /// The deterministic basis: Z representatives from the homology basis,
    /// X representatives solved to make the pairing the identity.
    pub fn choose_logical_basis(&self) -> CssCode {
        let z_reps = self.z_complex.homology_basis(0).reps;
        self.with_logical_z_basis(z_reps).expect("homology representatives form a basis")
    }

    /// Returns the code itself if already based, otherwise the deterministic basis.
    pub fn based(&self) -> CssCode {
        if self.is_based() {
            self.clone()
        } else {
            self.choose_logical_basis()
        }
    }

    /// Installs the given Z representatives and solves for the dual X ones.
    pub fn with_logical_z_basis(&self, z_reps: Vec<BitVec>) -> Result<CssCode, CodeError> {
        let k = self.k();
        if z_reps.len() != k {
            return Err(CodeError::InvalidBasis(format!("{} representatives for k = {k}", z_reps.len())));
        }
        let px = self.p_x();
        for (i, z) in z_reps.iter().enumerate() {
            if z.len() != self.n() || !px.mul_vec(z).is_zero() {
                return Err(CodeError::InvalidBasis(format!("representative {i} is not a Z cycle")));
            }
        }
        let w = self.x_complex.homology_basis(0).reps;
        let gram = F2Matrix::from_rows(k, z_reps.iter().map(|z| BitVec::from_bools(&w.iter().map(|x| z.dot(x)).collect::<Vec<_>>())).collect());
        let mut x_reps = Vec::with_capacity(k);
        for j in 0..k {
            let a = gram
                .solve(&BitVec::unit(k, j))
                .expect("square system")
                .ok_or_else(|| CodeError::InvalidBasis("representatives are dependent modulo stabilizers".into()))?;
            let mut x = BitVec::zeros(self.n());
            for i in a.iter_ones() {
                x.xor_assign(&w[i]);
            }
            x_reps.push(x);
        }
        Ok(CssCode { logical_basis: Some(LogicalBasis { z_reps, x_reps }), ..self.clone() })
    }

    /// Installs a full basis after checking it.
    pub fn with_logical_basis(&self, basis: LogicalBasis) -> Result<CssCode, CodeError> {
        let code = CssCode { logical_basis: Some(basis), ..self.clone() };
        code.check_logical_basis()?;
        Ok(code)
    }

    /// Checks membership of every representative and the identity pairing.
    pub fn check_logical_basis(&self) -> Result<(), CodeError> {
        let Some(b) = &self.logical_basis else { return Ok(()) };
        let k = self.k();
        if b.z_reps.len() != k || b.x_reps.len() != k {
            return Err(CodeError::InvalidBasis(format!("basis size differs from k = {k}")));
        }
        for (reps, kind) in [(&b.z_reps, Kind::Z), (&b.x_reps, Kind::X)] {
            for (i, v) in reps.iter().enumerate() {
                if v.len() != self.n() || !self.detector(kind).mul_vec(v).is_zero() {
                    return Err(CodeError::InvalidBasis(format!("{kind:?} representative {i} is detectable")));
                }
            }
        }
        for (i, z) in b.z_reps.iter().enumerate() {
            for (j, x) in b.x_reps.iter().enumerate() {
                if z.dot(x) != (i == j) {
                    return Err(CodeError::InvalidBasis(format!("pairing entry ({i}, {j}) is wrong")));
                }
            }
        }
        Ok(())
    }

    /// Coordinates of the logical class of a Z cycle in the chosen basis,
    /// read off through the pairing with the X representatives.
    pub fn z_coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let b = self.logical_basis.as_ref()?;
        Some(BitVec::from_bools(&b.x_reps.iter().map(|x| v.dot(x)).collect::<Vec<_>>()))
    }

    pub fn x_coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let b = self.logical_basis.as_ref()?;
        Some(BitVec::from_bools(&b.z_reps.iter().map(|z| v.dot(z)).collect::<Vec<_>>()))
    }

    /// Minimum weight of a logical operator of `kind`; `None` if `k = 0`.
    pub fn distance(&self, kind: Kind, budget: &SearchBudget) -> Result<Option<usize>, CodeError> {
        let c = self.oriented(kind);
        min_logical_weight(&c, budget)
    }

    pub fn metrics(&self) -> Result<CodeMetrics, CodeError> {
        self.metrics_with(&SearchBudget::default())
    }

    pub fn metrics_with(&self, budget: &SearchBudget) -> Result<CodeMetrics, CodeError> {
        let d_z = self.distance(Kind::Z, budget)?;
        let d_x = self.distance(Kind::X, budget)?;
        let d = match (d_z, d_x) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
        Ok(CodeMetrics { n: self.n(), k: self.k(), d_z, d_x, d })
    }

    /// True if some Z logical has weight below `bound`.
    pub fn has_z_logical_below(&self, bound: usize, budget: &SearchBudget) -> Result<bool, CodeError> {
        if self.k() == 0 || bound <= 1 {
            return Ok(false);
        }
        let search = LogicalSearch::new(self);
        let kdim = search.kernel_dim();
        let weight_cost = combinations_up_to(self.n(), bound - 1);
        let kernel_ok = kdim <= budget.max_kernel_dim;
        let weight_ok = weight_cost <= budget.max_weight_candidates;
        if kernel_ok && (!weight_ok || (1u128 << kdim) <= weight_cost as u128) {
            return Ok(search.by_kernel().is_some_and(|d| d < bound));
        }
        if weight_ok {
            return Ok(search.by_weight(bound - 1).is_some());
        }
        Err(CodeError::SearchBudgetExceeded(format!(
            "kernel dimension {kdim} and {weight_cost} weight candidates exceed the budget"
        )))
    }
}

/// `Σ_{w=1}^{max_w} C(n, w)`, saturating.
fn combinations_up_to(n: usize, max_w: usize) -> u64 {
    let mut total: u64 = 0;
    let mut c: u128 = 1;
    for w in 1..=max_w.min(n) {
        c = c * (n - w + 1) as u128 / w as u128;
        total = total.saturating_add(c.min(u64::MAX as u128) as u64);
    }
    total
}

/// Minimum Z-logical weight. Supports are tried in order of increasing
/// weight while that is cheaper than walking the whole kernel; the kernel
/// walk takes over once it is the cheaper way to finish.
fn min_logical_weight(code: &CssCode, budget: &SearchBudget) -> Result<Option<usize>, CodeError> {
    if code.k() == 0 {
        return Ok(None);
    }
    let search = LogicalSearch::new(code);
    let kdim = search.kernel_dim();
    let kernel_cost = (kdim <= budget.max_kernel_dim).then(|| 1u128 << kdim);
    let n = code.n();
    let mut spent: u128 = 0;
    for w in 1..=n {
        let c = (combinations_up_to(n, w) - combinations_up_to(n, w - 1)) as u128;
        if let Some(kc) = kernel_cost {
            if spent + c > kc {
                return Ok(search.by_kernel());
            }
        }
        spent += c;
        if spent > budget.max_weight_candidates as u128 {
            break;
        }
        if search.by_weight_exact(w) {
            return Ok(Some(w));
        }
    }
    if kernel_cost.is_some() {
        return Ok(search.by_kernel());
    }
    Err(CodeError::SearchBudgetExceeded(format!(
        "kernel dimension {kdim} exceeds {} and the weight-ordered search ran past {} candidates",
        budget.max_kernel_dim, budget.max_weight_candidates
    )))
}

/// Precomputed data for enumerating Z logicals of a code.
struct LogicalSearch {
    n: usize,
    words: usize,
    boundaries: Vec<Vec<u64>>,
    reps: Vec<Vec<u64>>,
    /// Column `i` of `P_X`, packed.
    syndrome_cols: Vec<Vec<u64>>,
    /// `e_i` reduced modulo the stabilizer span, packed.
    reduced_units: Vec<Vec<u64>>,
}

fn pack(v: &BitVec) -> Vec<u64> {
    v.words().to_vec()
}

fn xor_into(acc: &mut [u64], v: &[u64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a ^= b;
    }
}

fn popcount(v: &[u64]) -> usize {
    v.iter().map(|w| w.count_ones() as usize).sum()
}

impl LogicalSearch {
    fn new(code: &CssCode) -> Self {
        let n = code.n();
        let hb = code.z_complex().homology_basis(0);
        let boundaries = hb.boundaries.columns().iter().map(pack).collect();
        let reps = hb.reps.iter().map(pack).collect();
        let px = code.p_x();
        let syndrome_cols = px.columns().iter().map(pack).collect();
        let stabs = Span::of_columns(&hb.boundaries);
        let reduced_units = (0..n).map(|i| pack(&stabs.reduce(&BitVec::unit(n, i)))).collect();
        LogicalSearch { n, words: n.div_ceil(64), boundaries, reps, syndrome_cols, reduced_units }
    }

    fn kernel_dim(&self) -> usize {
        self.boundaries.len() + self.reps.len()
    }

    /// Gray-code walk over `ker P_X = B ⊕ span(reps)`, skipping boundaries.
    fn by_kernel(&self) -> Option<usize> {
        let gens: Vec<&Vec<u64>> = self.reps.iter().chain(&self.boundaries).collect();
        let k = self.reps.len();
        if k == 0 {
            return None;
        }
        let total = gens.len();
        let rep_mask: u64 = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
        let mut acc = vec![0u64; self.words];
        let mut state: u64 = 0;
        let mut best = usize::MAX;
        for step in 1u64..(1u64 << total) {
            let bit = step.trailing_zeros() as usize;
            xor_into(&mut acc, gens[bit]);
            state ^= 1 << bit;
            if state & rep_mask != 0 {
                best = best.min(popcount(&acc));
            }
        }
        Some(best)
    }

    /// Whether some logical of weight exactly `w` exists.
    fn by_weight_exact(&self, w: usize) -> bool {
        let mut syn = vec![0u64; self.syndrome_cols.first().map_or(0, Vec::len)];
        let mut red = vec![0u64; self.words];
        self.dfs(0, w, &mut syn, &mut red)
    }

    /// Whether some logical of weight at most `max_w` exists.
    fn by_weight(&self, max_w: usize) -> Option<usize> {
        (1..=max_w.min(self.n)).find(|&w| self.by_weight_exact(w))
    }

    fn dfs(&self, start: usize, remaining: usize, syn: &mut [u64], red: &mut [u64]) -> bool {
        if remaining == 0 {
            return syn.iter().all(|&x| x == 0) && red.iter().any(|&x| x != 0);
        }
        for i in start..=(self.n - remaining) {
            xor_into(syn, &self.syndrome_cols[i]);
            xor_into(red, &self.reduced_units[i]);
            let found = self.dfs(i + 1, remaining - 1, syn, red);
            xor_into(syn, &self.syndrome_cols[i]);
            xor_into(red, &self.reduced_units[i]);
            if found {
                return true;
            }
        }
        false
    }
}
