//! Surgery along logical operators.
//!
//! A logical Z operator `v` of a code carries a length-1 subcomplex
//! `V_0 → V_{-1}`: the qubits in `supp v` and the X checks touching them.
//! Gluing two codes along matching subcomplexes is a pushout of chain
//! complexes. X-type surgery is the same construction on the dual complexes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainComplex, ChainError, ChainMap, Component};
use crate::codemap::{CodeMap, CodeMapError, Direction};
use crate::colimit::{self, ColimitError, Pushout};
use crate::csscode::{CodeError, CssCode, Kind, LogicalBasis, OperatorClass, SearchBudget, WeightProfile};
use crate::f2linalg::{BitVec, F2Matrix, Span};

/// Which of the two input codes a finding refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    C,
    D,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum SeparationViolation {
    /// A logical supported inside the glued support that is not equivalent
    /// to the glued operator.
    InequivalentLogical { side: Side, operator: BitVec },
    /// A vector of `V_0` that is logical on one side only.
    LogicalMismatch { operator_c: BitVec, operator_d: BitVec, logical_in_c: bool },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurgeryError {
    #[error("operator on side {side:?} is not logical (classified {class:?})")]
    NotLogical { side: Side, class: OperatorClass },
    #[error("operator subcomplexes differ: {0}")]
    StructureMismatch(String),
    #[error("merge is not separated: {0:?}")]
    NotSeparated(SeparationViolation),
    #[error("operator on side {side:?} is not gauge fixable at qubit {qubit}")]
    NotGaugeFixable { side: Side, qubit: usize },
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
    #[error("construction check failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Code(CodeError),
    #[error(transparent)]
    CodeMap(#[from] CodeMapError),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

impl From<CodeError> for SurgeryError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::SearchBudgetExceeded(m) => SurgeryError::SearchBudgetExceeded(m),
            other => SurgeryError::Code(other),
        }
    }
}

/// The subcomplex carried by a logical operator, with its inclusion into
/// the host's complex for the operator's kind.
#[derive(Clone, Debug)]
pub struct OperatorSubcomplex {
    pub kind: Kind,
    pub complex: ChainComplex,
    /// Host qubits in `supp v`, ascending.
    pub support: Vec<usize>,
    /// Host checks touching the support, ascending.
    pub checks: Vec<usize>,
    pub host_inclusion: ChainMap,
}

impl OperatorSubcomplex {
    pub fn num_qubits(&self) -> usize {
        self.support.len()
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    /// `∂_{-1}` of the subcomplex.
    pub fn differential(&self) -> F2Matrix {
        self.complex.diff(-1)
    }
}

/// Coordinate inclusion `F2^{idx.len()} → F2^len`.
fn inclusion_matrix(len: usize, idx: &[usize]) -> F2Matrix {
    let mut m = F2Matrix::zeros(len, idx.len());
    for (j, &i) in idx.iter().enumerate() {
        m.set(i, j, true);
    }
    m
}

fn subcomplex_on(
    host: &ChainComplex,
    kind: Kind,
    support: Vec<usize>,
    checks: Vec<usize>,
    diff: F2Matrix,
) -> Result<OperatorSubcomplex, SurgeryError> {
    let (ql, cl) = (host.labels(0), host.labels(-1));
    let mut components = BTreeMap::new();
    components.insert(0, Component { dim: support.len(), labels: support.iter().map(|&i| ql[i].clone()).collect() });
    components.insert(-1, Component { dim: checks.len(), labels: checks.iter().map(|&i| cl[i].clone()).collect() });
    let mut diffs = BTreeMap::new();
    diffs.insert(-1, diff);
    let complex = ChainComplex::new(components, diffs)?;
    let mut comps = BTreeMap::new();
    comps.insert(0, inclusion_matrix(host.dim(0), &support));
    comps.insert(-1, inclusion_matrix(host.dim(-1), &checks));
    let host_inclusion = ChainMap::new(complex.clone(), host.clone(), comps)?;
    Ok(OperatorSubcomplex { kind, complex, support, checks, host_inclusion })
}

/// The operator subcomplex of `v`. For `Kind::X` the host is the dual
/// complex, so the checks are Z checks.
pub fn operator_subcomplex(code: &CssCode, v: &BitVec, kind: Kind) -> Result<OperatorSubcomplex, SurgeryError> {
    operator_subcomplex_on(code, v, kind, Side::C)
}

fn operator_subcomplex_on(code: &CssCode, v: &BitVec, kind: Kind, side: Side) -> Result<OperatorSubcomplex, SurgeryError> {
    if v.len() != code.n() {
        return Err(SurgeryError::Code(CodeError::Shape(format!("operator has length {}, code has n = {}", v.len(), code.n()))));
    }
    let class = code.classify(v, kind);
    if class != OperatorClass::Logical {
        return Err(SurgeryError::NotLogical { side, class });
    }
    let c = code.oriented(kind);
    let support = v.support();
    let restricted = c.p_x().select_columns(&support);
    let checks = restricted.nonzero_rows();
    let diff = restricted.select_rows(&checks);
    subcomplex_on(c.z_complex(), kind, support, checks, diff)
}

/// Two operators with matching subcomplexes: the span `C ← V → D` on the
/// complexes of the operators' kind.
#[derive(Clone, Debug)]
pub struct MatchedSpan {
    pub kind: Kind,
    /// Built from the C side.
    pub v: OperatorSubcomplex,
    /// D qubits matched to `v.support`, in the same order.
    pub support_d: Vec<usize>,
    /// D checks matched to `v.checks`, in the same order.
    pub checks_d: Vec<usize>,
    pub f: ChainMap,
    pub g: ChainMap,
}

/// Matches the subcomplexes of `vc` and `vd`. `pairing[i]` is the D qubit
/// glued to the `i`-th support qubit of `vc`; by default supports are
/// aligned in ascending order. D checks are matched to C checks with equal
/// restricted rows, first unused match first.
pub fn matched_span(
    code_c: &CssCode,
    code_d: &CssCode,
    vc: &BitVec,
    vd: &BitVec,
    kind: Kind,
    pairing: Option<&[usize]>,
) -> Result<MatchedSpan, SurgeryError> {
    let v = operator_subcomplex_on(code_c, vc, kind, Side::C)?;
    let vdsub = operator_subcomplex_on(code_d, vd, kind, Side::D)?;
    let m = v.num_qubits();
    if vdsub.num_qubits() != m {
        return Err(SurgeryError::StructureMismatch(format!(
            "supports have sizes {m} and {}",
            vdsub.num_qubits()
        )));
    }
    let support_d: Vec<usize> = match pairing {
        Some(p) => {
            let mut sorted = p.to_vec();
            sorted.sort_unstable();
            if sorted != vdsub.support {
                return Err(SurgeryError::StructureMismatch("pairing is not a bijection onto supp(v_D)".into()));
            }
            p.to_vec()
        }
        None => vdsub.support.clone(),
    };
    let d = code_d.oriented(kind);
    let rows_d = d.p_x().select_columns(&support_d);
    let mut used = vec![false; rows_d.nrows()];
    let mut checks_d = Vec::with_capacity(v.num_checks());
    let dv = v.differential();
    for (j, row) in dv.rows().iter().enumerate() {
        let hit = (0..rows_d.nrows()).find(|&i| !used[i] && rows_d.row(i) == row);
        let Some(i) = hit else {
            return Err(SurgeryError::StructureMismatch(format!("check {} of C has no matching check in D", v.checks[j])));
        };
        used[i] = true;
        checks_d.push(i);
    }
    if vdsub.num_checks() != v.num_checks() {
        return Err(SurgeryError::StructureMismatch(format!(
            "{} checks touch supp(v_C) but {} touch supp(v_D)",
            v.num_checks(),
            vdsub.num_checks()
        )));
    }
    let f = v.host_inclusion.clone();
    let mut comps = BTreeMap::new();
    comps.insert(0, inclusion_matrix(d.n(), &support_d));
    comps.insert(-1, inclusion_matrix(d.num_x_checks(), &checks_d));
    let g = ChainMap::new(v.complex.clone(), d.z_complex().clone(), comps)?;
    Ok(MatchedSpan { kind, v, support_d, checks_d, f, g })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationVerdict {
    pub violation: Option<SeparationViolation>,
    /// Number of vectors of `V_0` examined.
    pub checked: u64,
}

impl SeparationVerdict {
    pub fn is_separated(&self) -> bool {
        self.violation.is_none()
    }
}

/// Enumerates all of `V_0` by Gray code. Checks that every logical
/// supported in `supp v_C` is equivalent to `v_C` (likewise for D), and that
/// each vector is logical on the C side exactly when it is on the D side.
pub fn check_separation(
    code_c: &CssCode,
    code_d: &CssCode,
    vc: &BitVec,
    vd: &BitVec,
    kind: Kind,
    pairing: Option<&[usize]>,
    budget: &SearchBudget,
) -> Result<SeparationVerdict, SurgeryError> {
    let span = matched_span(code_c, code_d, vc, vd, kind, pairing)?;
    separation_of_span(&span, code_c, code_d, budget)
}

fn separation_of_span(
    span: &MatchedSpan,
    code_c: &CssCode,
    code_d: &CssCode,
    budget: &SearchBudget,
) -> Result<SeparationVerdict, SurgeryError> {
    let m = span.v.num_qubits();
    if m > budget.max_support || m >= 63 {
        return Err(SurgeryError::SearchBudgetExceeded(format!(
            "support of size {m} exceeds the separation budget {}",
            budget.max_support
        )));
    }
    let (c, d) = (code_c.oriented(span.kind), code_d.oriented(span.kind));
    let stabs_c = Span::of_vectors(c.n(), c.p_z().rows().iter().cloned());
    let stabs_d = Span::of_vectors(d.n(), d.p_z().rows().iter().cloned());
    let units_c: Vec<BitVec> = span.v.support.iter().map(|&i| stabs_c.reduce(&BitVec::unit(c.n(), i))).collect();
    let units_d: Vec<BitVec> = span.support_d.iter().map(|&i| stabs_d.reduce(&BitVec::unit(d.n(), i))).collect();
    let syn_cols = span.v.differential().columns();
    let red_u_c = units_c.iter().fold(BitVec::zeros(c.n()), |a, b| a.xor(b));
    let red_u_d = units_d.iter().fold(BitVec::zeros(d.n()), |a, b| a.xor(b));
    let mut syn = BitVec::zeros(span.v.num_checks());
    let mut red_c = BitVec::zeros(c.n());
    let mut red_d = BitVec::zeros(d.n());
    let mut state: u64 = 0;
    let total = 1u64 << m;
    let vector = |state: u64| BitVec::from_bools(&(0..m).map(|i| state >> i & 1 == 1).collect::<Vec<_>>());
    for step in 1..total {
        let bit = step.trailing_zeros() as usize;
        state ^= 1 << bit;
        syn.xor_assign(&syn_cols[bit]);
        red_c.xor_assign(&units_c[bit]);
        red_d.xor_assign(&units_d[bit]);
        if !syn.is_zero() {
            continue;
        }
        let (lc, ld) = (!red_c.is_zero(), !red_d.is_zero());
        let s = vector(state);
        if lc && red_c != red_u_c {
            let operator = s.embed(c.n(), &span.v.support);
            return Ok(SeparationVerdict { violation: Some(SeparationViolation::InequivalentLogical { side: Side::C, operator }), checked: step });
        }
        if ld && red_d != red_u_d {
            let operator = s.embed(d.n(), &span.support_d);
            return Ok(SeparationVerdict { violation: Some(SeparationViolation::InequivalentLogical { side: Side::D, operator }), checked: step });
        }
        if lc != ld {
            return Ok(SeparationVerdict {
                violation: Some(SeparationViolation::LogicalMismatch {
                    operator_c: s.embed(c.n(), &span.v.support),
                    operator_d: s.embed(d.n(), &span.support_d),
                    logical_in_c: lc,
                }),
                checked: step,
            });
        }
    }
    Ok(SeparationVerdict { violation: None, checked: total - 1 })
}

/// Z logical representatives of `code` starting with `v`, completed from
/// the deterministic homology basis, with the dual X representatives.
pub fn basis_starting_with(code: &CssCode, v: &BitVec) -> Result<CssCode, SurgeryError> {
    let mut span = Span::of_vectors(code.n(), code.p_z().rows().iter().cloned());
    let mut reps = Vec::new();
    for r in std::iter::once(v.clone()).chain(code.z_complex().homology_basis(0).reps) {
        if span.insert(r.clone()) {
            reps.push(r);
        }
    }
    Ok(code.with_logical_z_basis(reps)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MergeOptions<'a> {
    /// Skip the separation check.
    pub force: bool,
    pub pairing: Option<&'a [usize]>,
    pub budget: SearchBudget,
}

/// A glued pair of basis elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identification {
    pub left: usize,
    pub right: usize,
    pub merged: usize,
}

#[derive(Clone, Debug)]
pub struct MergeResult {
    pub kind: Kind,
    /// `C ⊕ D`, based with the glued operators first on each side.
    pub sum: CssCode,
    pub merged: CssCode,
    /// Z̄-preserving `C ⊕ D → Q` for Z merges, X̄-preserving `Q → C ⊕ D`
    /// (as a map of Z complexes) for X merges.
    pub merge_map: CodeMap,
    pub qubit_identifications: Vec<Identification>,
    /// Glued checks: X checks for a Z merge, Z checks for an X merge.
    pub check_identifications: Vec<Identification>,
    /// Merged index of every qubit of C, then of D.
    pub qubit_map_c: Vec<usize>,
    pub qubit_map_d: Vec<usize>,
    /// `|supp v|`.
    pub glued_qubits: usize,
    /// `None` when the check was skipped with `force`.
    pub separation: Option<SeparationVerdict>,
}

impl MergeResult {
    /// Qubit and logical counts of the inputs and the result.
    pub fn counts(&self) -> MergeCounts {
        let k_sum = self.sum.k();
        MergeCounts {
            n_sum: self.sum.n(),
            n_v: self.glued_qubits,
            n_q: self.merged.n(),
            k_sum,
            k_q: self.merged.k(),
            consistent: self.merged.n() + self.glued_qubits == self.sum.n() && self.merged.k() + 1 == k_sum,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeCounts {
    pub n_sum: usize,
    pub n_v: usize,
    pub n_q: usize,
    pub k_sum: usize,
    pub k_q: usize,
    /// `n_Q = n_C + n_D − n_V` and `k_Q = k_C + k_D − 1`.
    pub consistent: bool,
}

/// For each degree, where each basis vector of the left and right summands
/// lands in the quotient. Fails when a vector does not land on a basis vector.
fn landing(coeq: &F2Matrix, n_left: usize) -> Result<(Vec<usize>, Vec<usize>), SurgeryError> {
    let mut left = Vec::with_capacity(n_left);
    let mut right = Vec::with_capacity(coeq.ncols() - n_left);
    for j in 0..coeq.ncols() {
        let col = coeq.column(j);
        if col.weight() != 1 {
            return Err(SurgeryError::Invariant(format!("basis vector {j} does not project to a basis vector")));
        }
        let i = col.first_one().unwrap_or(0);
        if j < n_left {
            left.push(i);
        } else {
            right.push(i);
        }
    }
    Ok((left, right))
}

fn identifications(left: &[usize], right: &[usize]) -> Vec<Identification> {
    let mut owner = BTreeMap::new();
    for (i, &q) in left.iter().enumerate() {
        owner.insert(q, i);
    }
    let mut out: Vec<Identification> = right
        .iter()
        .enumerate()
        .filter_map(|(j, q)| owner.get(q).map(|&i| Identification { left: i, right: j, merged: *q }))
        .collect();
    out.sort_by_key(|id| id.merged);
    out
}

fn based_sum(c: &CssCode, d: &CssCode) -> Result<CssCode, SurgeryError> {
    let (cb, db) = (c.logical_basis().expect("based"), d.logical_basis().expect("based"));
    let sum = CssCode::from_z_complex(c.z_complex().direct_sum_labeled(d.z_complex(), "C.", "D."))?;
    let (nc, nd) = (c.n(), d.n());
    let left = |v: &BitVec| v.concat(&BitVec::zeros(nd));
    let right = |v: &BitVec| BitVec::zeros(nc).concat(v);
    let basis = LogicalBasis {
        z_reps: cb.z_reps.iter().map(left).chain(db.z_reps.iter().map(right)).collect(),
        x_reps: cb.x_reps.iter().map(left).chain(db.x_reps.iter().map(right)).collect(),
    };
    Ok(sum.with_logical_basis(basis)?)
}

/// Z̄-merge: the pushout of `C ← V → D` along matched Z logicals.
pub fn z_merge(
    code_c: &CssCode,
    code_d: &CssCode,
    vc: &BitVec,
    vd: &BitVec,
    opts: &MergeOptions,
) -> Result<MergeResult, SurgeryError> {
    let span = matched_span(code_c, code_d, vc, vd, Kind::Z, opts.pairing)?;
    let separation = if opts.force {
        None
    } else {
        let verdict = separation_of_span(&span, code_c, code_d, &opts.budget)?;
        if let Some(v) = verdict.violation {
            return Err(SurgeryError::NotSeparated(v));
        }
        Some(verdict)
    };
    let po = colimit::pushout(&span.f, &span.g)?;
    let c = basis_starting_with(code_c, vc)?;
    let d = basis_starting_with(code_d, vd)?;
    let sum = based_sum(&c, &d)?;
    let plain = CssCode::from_z_complex(po.apex.clone())?;
    let (qc, qd) = landing(&po.coeq.component(0), c.n())?;
    let (xc, xd) = landing(&po.coeq.component(-1), c.num_x_checks())?;
    let merged = merged_basis(&plain, &po, &c, &d).unwrap_or_else(|| plain.choose_logical_basis());
    let merge_map = CodeMap::from_chain_map(&sum, &merged, &po.coeq, Direction::ZPreserving)?;
    Ok(MergeResult {
        kind: Kind::Z,
        sum,
        merged,
        merge_map,
        qubit_identifications: identifications(&qc, &qd),
        check_identifications: identifications(&xc, &xd),
        qubit_map_c: qc,
        qubit_map_d: qd,
        glued_qubits: span.v.num_qubits(),
        separation,
    })
}

/// The merged basis: the glued class, then the other classes of C, then D.
fn merged_basis(plain: &CssCode, po: &Pushout, c: &CssCode, d: &CssCode) -> Option<CssCode> {
    let (cb, db) = (c.logical_basis()?, d.logical_basis()?);
    let (k0, l0) = (po.k.component(0), po.l.component(0));
    let reps: Vec<BitVec> = std::iter::once(k0.mul_vec(&cb.z_reps[0]))
        .chain(cb.z_reps[1..].iter().map(|z| k0.mul_vec(z)))
        .chain(db.z_reps[1..].iter().map(|z| l0.mul_vec(z)))
        .collect();
    plain.with_logical_z_basis(reps).ok()
}

/// X̄-merge: the Z̄-merge of the swapped codes, swapped back. The merge map
/// is the dual of the coequaliser, an X̄-preserving map.
pub fn x_merge(
    code_c: &CssCode,
    code_d: &CssCode,
    vc: &BitVec,
    vd: &BitVec,
    opts: &MergeOptions,
) -> Result<MergeResult, SurgeryError> {
    let z = z_merge(&code_c.swap_zx(), &code_d.swap_zx(), vc, vd, opts)?;
    let sum = z.sum.swap_zx();
    let merged = z.merged.swap_zx();
    let dual = z.merge_map.forward().dual();
    let merge_map = CodeMap::from_chain_map(&merged, &sum, &dual, Direction::XPreserving)?;
    Ok(MergeResult { kind: Kind::X, sum, merged, merge_map, ..z })
}

/// Merge along `kind`.
pub fn merge(
    code_c: &CssCode,
    code_d: &CssCode,
    vc: &BitVec,
    vd: &BitVec,
    kind: Kind,
    opts: &MergeOptions,
) -> Result<MergeResult, SurgeryError> {
    match kind {
        Kind::Z => z_merge(code_c, code_d, vc, vd, opts),
        Kind::X => x_merge(code_c, code_d, vc, vd, opts),
    }
}

/// The split map: the merge map read in the opposite direction.
pub fn split_map(m: &MergeResult) -> CodeMap {
    m.merge_map.opposite()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub name: String,
    pub measured: usize,
    pub limit: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdpcReport {
    pub c: WeightProfile,
    pub d: WeightProfile,
    pub merged: WeightProfile,
    pub bounds: Vec<Bound>,
}

impl LdpcReport {
    pub fn holds(&self) -> bool {
        self.bounds.iter().all(|b| b.holds)
    }
}

fn bound_eq(name: &str, measured: usize, limit: usize) -> Bound {
    Bound { name: format!("{name} = {limit}"), measured, limit, holds: measured == limit }
}

fn bound_lt(name: &str, measured: usize, limit: usize) -> Bound {
    Bound { name: format!("{name} < {limit}"), measured, limit, holds: measured < limit }
}

fn bound_le(name: &str, measured: usize, limit: usize) -> Bound {
    Bound { name: format!("{name} <= {limit}"), measured, limit, holds: measured <= limit }
}

/// Weight bounds of a separated merge. For a Z merge: `w_Z` and `q_X` are
/// the maxima of the inputs, `w_X` is below the sum and `q_Z` at most the
/// sum. An X merge satisfies the transposed statements.
pub fn ldpc_bounds_check(m: &MergeResult, c: &WeightProfile, d: &WeightProfile) -> LdpcReport {
    let q = m.merged.weight_profile();
    let bounds = match m.kind {
        Kind::Z => vec![
            bound_eq("w_Z", q.w_z, c.w_z.max(d.w_z)),
            bound_lt("w_X", q.w_x, c.w_x + d.w_x),
            bound_le("q_Z", q.q_z, c.q_z + d.q_z),
            bound_eq("q_X", q.q_x, c.q_x.max(d.q_x)),
        ],
        Kind::X => vec![
            bound_eq("w_X", q.w_x, c.w_x.max(d.w_x)),
            bound_lt("w_Z", q.w_z, c.w_z + d.w_z),
            bound_le("q_X", q.q_x, c.q_x + d.q_x),
            bound_eq("q_Z", q.q_z, c.q_z.max(d.q_z)),
        ],
    };
    LdpcReport { c: *c, d: *d, merged: q, bounds }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum GaugeFix {
    /// One fixing operator per support qubit, in ascending qubit order.
    Fixable { operators: Vec<BitVec> },
    NotFixable { qubit: usize },
}

impl GaugeFix {
    pub fn is_fixable(&self) -> bool {
        matches!(self, GaugeFix::Fixable { .. })
    }
}

/// For each qubit `x` of `supp v`, looks for an opposite-type
/// representative `x_rep + stabilizers` of the class paired with `[v]` that
/// meets `supp v` in `x` alone.
pub fn check_gauge_fixable(code: &CssCode, v: &BitVec, kind: Kind) -> Result<GaugeFix, SurgeryError> {
    let class = code.classify(v, kind);
    if class != OperatorClass::Logical {
        return Err(SurgeryError::NotLogical { side: Side::C, class });
    }
    let c = basis_starting_with(&code.oriented(kind), v)?;
    let x_rep = c.logical_basis().expect("based").x_reps[0].clone();
    let support = v.support();
    let stabs_t = c.p_x().transpose();
    let a = stabs_t.select_rows(&support);
    let base = x_rep.restrict(&support);
    let mut operators = Vec::with_capacity(support.len());
    for (i, &q) in support.iter().enumerate() {
        let mut target = base.clone();
        target.flip(i);
        match a.solve(&target).expect("shapes agree") {
            Some(t) => operators.push(x_rep.xor(&stabs_t.mul_vec(&t))),
            None => return Ok(GaugeFix::NotFixable { qubit: q }),
        }
    }
    Ok(GaugeFix::Fixable { operators })
}

/// `W = P ⊗ V` for `P = (F2 → F2²)` with differential `(1 1)ᵀ`. In `W_0`
/// the two copies of `V_0` come first, then the `V_{-1}` block of fresh
/// qubits; `W_{-1}` is two copies of `V_{-1}`.
pub fn sandwich_complex(v: &OperatorSubcomplex) -> ChainComplex {
    let p = ChainComplex::from_differentials(&[(0, F2Matrix::from_strs(1, &["1", "1"]))], &[(1, "p"), (0, "p")])
        .expect("valid complex");
    p.tensor(&v.complex)
}

/// Inclusion of `V` into copy `copy ∈ {0, 1}` of `W`.
fn sandwich_inclusion(v: &OperatorSubcomplex, w: &ChainComplex, copy: usize) -> Result<ChainMap, SurgeryError> {
    let (m, r) = (v.num_qubits(), v.num_checks());
    let mut comps = BTreeMap::new();
    comps.insert(0, inclusion_matrix(w.dim(0), &(copy * m..(copy + 1) * m).collect::<Vec<_>>()));
    comps.insert(-1, inclusion_matrix(w.dim(-1), &(copy * r..(copy + 1) * r).collect::<Vec<_>>()));
    Ok(ChainMap::new(v.complex.clone(), w.clone(), comps)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub n_c: usize,
    pub n_d: usize,
    pub k_c: usize,
    pub k_d: usize,
    pub n_t: usize,
    pub k_t: usize,
    pub d_c: Option<usize>,
    pub d_d: Option<usize>,
    pub weights_c: WeightProfile,
    pub weights_d: WeightProfile,
    pub weights_v: WeightProfile,
    pub weights_w: WeightProfile,
    pub weights_t: WeightProfile,
    /// Weights of `W` against those of `V`.
    pub intermediate_bounds: Vec<Bound>,
    /// Weights of `T` against those of `C ⊕ D`.
    pub sandwich_bounds: Vec<Bound>,
}

impl SandwichReport {
    pub fn bounds_hold(&self) -> bool {
        self.intermediate_bounds.iter().chain(&self.sandwich_bounds).all(|b| b.holds)
    }
}

#[derive(Clone, Debug)]
pub struct SandwichPlan {
    pub code_c: CssCode,
    pub code_d: CssCode,
    pub op_c: BitVec,
    pub op_d: BitVec,
    pub support_c: Vec<usize>,
    pub support_d: Vec<usize>,
    /// `T`, with qubits ordered as C, D, fresh; Z checks as C, D, new; X
    /// checks as C, D. Its first logical is the glued class.
    pub sandwiched: CssCode,
    /// The first pushout `R` (C glued to `W`).
    pub half: ChainComplex,
    pub intermediate: ChainComplex,
    pub fresh_qubits: usize,
    pub new_z_checks: usize,
    pub rounds: usize,
    /// One X operator on the qubits of `T` per new Z check, supported on C.
    pub gauge_fix_operators: Vec<BitVec>,
    pub report: SandwichReport,
}

impl SandwichPlan {
    /// Index in `T` of the first fresh qubit.
    pub fn fresh_offset(&self) -> usize {
        self.code_c.n() + self.code_d.n()
    }

    /// Row of `P_Z(T)` of the first new Z check.
    pub fn new_check_offset(&self) -> usize {
        self.code_c.num_z_checks() + self.code_d.num_z_checks()
    }
}

fn weights_of_complex(c: &ChainComplex) -> WeightProfile {
    let (d0, dm1) = (c.diff(0), c.diff(-1));
    WeightProfile { w_z: d0.max_col_weight(), w_x: dm1.max_row_weight(), q_z: d0.max_row_weight(), q_x: dm1.max_col_weight() }
}

fn max_profile(a: &WeightProfile, b: &WeightProfile) -> WeightProfile {
    WeightProfile { w_z: a.w_z.max(b.w_z), w_x: a.w_x.max(b.w_x), q_z: a.q_z.max(b.q_z), q_x: a.q_x.max(b.q_x) }
}

/// Where each basis vector of `C`, `D` and the fresh part of `W` lands in
/// a degree of `T`, concatenated in that order.
fn sandwich_order(
    coeq_c: &F2Matrix,
    coeq_d: &F2Matrix,
    coeq_w: &F2Matrix,
    fresh: &[usize],
) -> Result<Vec<usize>, SurgeryError> {
    let mut perm_inv = Vec::new();
    for (m, cols) in [(coeq_c, (0..coeq_c.ncols()).collect::<Vec<_>>()), (coeq_d, (0..coeq_d.ncols()).collect()), (coeq_w, fresh.to_vec())] {
        for j in cols {
            let col = m.column(j);
            if col.weight() != 1 {
                return Err(SurgeryError::Invariant("sandwich legs are not coordinate maps".into()));
            }
            perm_inv.push(col.first_one().unwrap_or(0));
        }
    }
    let n = coeq_c.nrows();
    if perm_inv.len() != n {
        return Err(SurgeryError::Invariant(format!("sandwich degree has {n} elements, expected {}", perm_inv.len())));
    }
    let mut perm = vec![usize::MAX; n];
    for (new, &old) in perm_inv.iter().enumerate() {
        if perm[old] != usize::MAX {
            return Err(SurgeryError::Invariant("sandwich legs overlap".into()));
        }
        perm[old] = new;
    }
    Ok(perm)
}

/// Builds the sandwiched code for a Z̄ ⊗ Z̄ measurement: matches the
/// operators, checks separation and gauge fixability on both sides, glues
/// `W = P ⊗ V` to C and then to D, and verifies the resulting counts.
pub fn build_sandwich(
    code_c: &CssCode,
    code_d: &CssCode,
    vc: &BitVec,
    vd: &BitVec,
    opts: &MergeOptions,
) -> Result<SandwichPlan, SurgeryError> {
    let span = matched_span(code_c, code_d, vc, vd, Kind::Z, opts.pairing)?;
    if !opts.force {
        if let Some(v) = separation_of_span(&span, code_c, code_d, &opts.budget)?.violation {
            return Err(SurgeryError::NotSeparated(v));
        }
    }
    let fixes = match check_gauge_fixable(code_c, vc, Kind::Z)? {
        GaugeFix::Fixable { operators } => operators,
        GaugeFix::NotFixable { qubit } => return Err(SurgeryError::NotGaugeFixable { side: Side::C, qubit }),
    };
    if let GaugeFix::NotFixable { qubit } = check_gauge_fixable(code_d, vd, Kind::Z)? {
        return Err(SurgeryError::NotGaugeFixable { side: Side::D, qubit });
    }

    let v = &span.v;
    let (m, r) = (v.num_qubits(), v.num_checks());
    let w = sandwich_complex(v);
    let i1 = sandwich_inclusion(v, &w, 0)?;
    let i2 = sandwich_inclusion(v, &w, 1)?;
    let first = colimit::pushout(&span.f, &i1)?;
    let into_r = first.l.compose(&i2)?;
    let second = colimit::pushout(&into_r, &span.g)?;
    let c_to_t = second.k.compose(&first.k)?;
    let w_to_t = second.k.compose(&first.l)?;
    let d_to_t = &second.l;

    let mut perms = BTreeMap::new();
    let fresh: Vec<usize> = (2 * m..2 * m + r).collect();
    let new_checks: Vec<usize> = (0..m).collect();
    perms.insert(0, sandwich_order(&c_to_t.component(0), &d_to_t.component(0), &w_to_t.component(0), &fresh)?);
    perms.insert(1, sandwich_order(&c_to_t.component(1), &d_to_t.component(1), &w_to_t.component(1), &new_checks)?);
    perms.insert(-1, sandwich_order(&c_to_t.component(-1), &d_to_t.component(-1), &w_to_t.component(-1), &[])?);
    let t_complex = second.apex.permute(&perms);
    let plain = CssCode::from_z_complex(t_complex)?;

    let (nc, nd) = (code_c.n(), code_d.n());
    let n_t = plain.n();
    let cb = basis_starting_with(code_c, vc)?;
    let db = basis_starting_with(code_d, vd)?;
    let (czs, dzs) = (&cb.logical_basis().expect("based").z_reps, &db.logical_basis().expect("based").z_reps);
    let from_c = |z: &BitVec| z.embed(n_t, &(0..nc).collect::<Vec<_>>());
    let from_d = |z: &BitVec| z.embed(n_t, &(nc..nc + nd).collect::<Vec<_>>());
    let reps: Vec<BitVec> = czs.iter().map(from_c).chain(dzs[1..].iter().map(from_d)).collect();
    let k_t = plain.k();
    let expected_k = code_c.k() + code_d.k() - 1;
    if n_t != nc + nd + r || k_t != expected_k {
        return Err(SurgeryError::Invariant(format!(
            "sandwich has n = {n_t}, k = {k_t}; expected n = {}, k = {expected_k}",
            nc + nd + r
        )));
    }
    let sandwiched = plain.with_logical_z_basis(reps)?;

    let metrics_c = code_c.metrics_with(&opts.budget)?;
    let metrics_d = code_d.metrics_with(&opts.budget)?;
    let rounds = metrics_c.d.unwrap_or(0).min(metrics_d.d.unwrap_or(0));

    let (pc, pd) = (code_c.weight_profile(), code_d.weight_profile());
    let pv = weights_of_complex(&v.complex);
    let pw = weights_of_complex(&w);
    let pt = sandwiched.weight_profile();
    let ps = max_profile(&pc, &pd);
    let intermediate_bounds = vec![
        bound_eq("w_X(W)", pw.w_x, pv.w_x + 1),
        bound_eq("w_Z(W)", pw.w_z, pv.q_x + 2),
        bound_eq("q_X(W)", pw.q_x, pv.q_x.max(2)),
        bound_eq("q_Z(W)", pw.q_z, pv.w_x.max(1)),
        bound_le("w_X(W)", pw.w_x, pc.w_x + 1),
        bound_le("w_Z(W)", pw.w_z, pc.q_x + 2),
    ];
    let sandwich_bounds = vec![
        bound_le("w_X(T)", pt.w_x, ps.w_x + 1),
        bound_le("w_Z(T)", pt.w_z, ps.w_z.max(ps.q_x + 2)),
        bound_le("q_Z(T)", pt.q_z, ps.q_z + ps.w_x),
        bound_eq("q_X(T)", pt.q_x, ps.q_x.max(2)),
    ];
    let report = SandwichReport {
        n_c: nc,
        n_d: nd,
        k_c: code_c.k(),
        k_d: code_d.k(),
        n_t,
        k_t,
        d_c: metrics_c.d,
        d_d: metrics_d.d,
        weights_c: pc,
        weights_d: pd,
        weights_v: pv,
        weights_w: pw,
        weights_t: pt,
        intermediate_bounds,
        sandwich_bounds,
    };
    let gauge_fix_operators = fixes.iter().map(from_c).collect();
    Ok(SandwichPlan {
        code_c: code_c.clone(),
        code_d: code_d.clone(),
        op_c: vc.clone(),
        op_d: vd.clone(),
        support_c: v.support.clone(),
        support_d: span.support_d.clone(),
        sandwiched,
        half: first.apex,
        intermediate: w,
        fresh_qubits: r,
        new_z_checks: m,
        rounds,
        gauge_fix_operators,
        report,
    })
}

/// True when `T` has no Z logical of weight below `d_before`.
pub fn check_distance_bounded_below(
    plan: &SandwichPlan,
    d_before: usize,
    budget: &SearchBudget,
) -> Result<bool, SurgeryError> {
    Ok(!plan.sandwiched.has_z_logical_below(d_before, budget)?)
}
