//! Code maps between CSS codes and their CNOT-circuit presentations.
//!
//! A Z̄-preserving code map from `C` to `D` is a chain map `f: C → D` of the
//! Z-type complexes. Its physical map `M` acts on X-basis states by
//! `M|x⟩_X = |f_0 x⟩_X`. An X̄-preserving map is the same data read in the
//! opposite direction, `L = Mᵀ`, which acts on Z-basis labels by `f_0ᵀ`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainError, ChainMap};
use crate::csscode::CssCode;
use crate::f2linalg::F2Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Square {
    /// `f_0 ∘ ∂_0 = ∂_0 ∘ f_1`
    I,
    /// `f_{-1} ∘ ∂_{-1} = ∂_{-1} ∘ f_0`
    II,
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Square::I => "I",
            Square::II => "II",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeMapError {
    #[error("square {square} does not commute")]
    CommutingSquare { square: Square },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("logical action needs both codes to carry a logical basis")]
    NotBased,
    #[error("code maps do not compose: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    ZPreserving,
    XPreserving,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::ZPreserving => Direction::XPreserving,
            Direction::XPreserving => Direction::ZPreserving,
        }
    }
}

/// A dual pair of chain maps between the Z-type complexes of two codes.
///
/// `source` and `target` are the endpoints of `forward`. For an
/// X̄-preserving map the physical map runs from `target` to `source`.
#[derive(Clone, Debug)]
pub struct CodeMap {
    pub direction: Direction,
    source: CssCode,
    target: CssCode,
    forward: ChainMap,
    dual: ChainMap,
}

impl PartialEq for CodeMap {
    fn eq(&self, other: &Self) -> bool {
        self.direction == other.direction && self.forward == other.forward
    }
}

/// Logical action in the chosen bases of the interpreted source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalAction {
    pub z_action: F2Matrix,
    pub x_action: F2Matrix,
}

impl CodeMap {
    pub fn new(
        source: &CssCode,
        target: &CssCode,
        f1: F2Matrix,
        f0: F2Matrix,
        fm1: F2Matrix,
        direction: Direction,
    ) -> Result<CodeMap, CodeMapError> {
        let shapes = [
            (1, &f1, target.num_z_checks(), source.num_z_checks()),
            (0, &f0, target.n(), source.n()),
            (-1, &fm1, target.num_x_checks(), source.num_x_checks()),
        ];
        for (deg, m, r, c) in shapes {
            if m.shape() != (r, c) {
                return Err(CodeMapError::Shape(format!(
                    "f_{deg} is {}x{}, expected {r}x{c}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        let (sz, tz) = (source.z_complex(), target.z_complex());
        if f0.mul(&sz.diff(0)) != tz.diff(0).mul(&f1) {
            return Err(CodeMapError::CommutingSquare { square: Square::I });
        }
        if fm1.mul(&sz.diff(-1)) != tz.diff(-1).mul(&f0) {
            return Err(CodeMapError::CommutingSquare { square: Square::II });
        }
        let comps: BTreeMap<i32, F2Matrix> = [(1, f1), (0, f0), (-1, fm1)].into_iter().collect();
        let forward = ChainMap::new(sz.clone(), tz.clone(), comps)?;
        let dual = forward.dual();
        Ok(CodeMap { direction, source: source.clone(), target: target.clone(), forward, dual })
    }

    /// Wraps a chain map whose endpoints are the Z complexes of the codes.
    pub fn from_chain_map(
        source: &CssCode,
        target: &CssCode,
        f: &ChainMap,
        direction: Direction,
    ) -> Result<CodeMap, CodeMapError> {
        Self::new(source, target, f.component(1), f.component(0), f.component(-1), direction)
    }

    pub fn identity(code: &CssCode) -> CodeMap {
        let f = ChainMap::identity(code.z_complex());
        Self::from_chain_map(code, code, &f, Direction::ZPreserving).expect("identity is a code map")
    }

    pub fn source(&self) -> &CssCode {
        &self.source
    }

    pub fn target(&self) -> &CssCode {
        &self.target
    }

    pub fn forward(&self) -> &ChainMap {
        &self.forward
    }

    pub fn dual(&self) -> &ChainMap {
        &self.dual
    }

    pub fn f0(&self) -> F2Matrix {
        self.forward.component(0)
    }

    /// Same data, direction flipped.
    pub fn opposite(&self) -> CodeMap {
        CodeMap { direction: self.direction.flipped(), ..self.clone() }
    }

    /// Replaces the codes (for example with based versions) keeping the matrices.
    pub fn with_codes(&self, source: &CssCode, target: &CssCode) -> Result<CodeMap, CodeMapError> {
        Self::from_chain_map(source, target, &self.forward, self.direction)
    }

    /// `self ∘ first` on the forward chain maps.
    pub fn compose(&self, first: &CodeMap) -> Result<CodeMap, CodeMapError> {
        if self.direction != first.direction {
            return Err(CodeMapError::Incompatible("directions differ".into()));
        }
        let f = self.forward.compose(&first.forward).map_err(|e| CodeMapError::Incompatible(e.to_string()))?;
        Self::from_chain_map(&first.source, &self.target, &f, self.direction)
    }

    /// `H_0(f)` and `H_0(f*)` in the codes' logical bases, read off through
    /// the duality pairing. X̄-preserving maps report the transposes.
    pub fn logical_action(&self) -> Result<LogicalAction, CodeMapError> {
        let (sb, tb) = match (self.source.logical_basis(), self.target.logical_basis()) {
            (Some(s), Some(t)) => (s, t),
            _ => return Err(CodeMapError::NotBased),
        };
        let f0 = self.f0();
        let ks = sb.z_reps.len();
        let kt = tb.z_reps.len();
        let z_cols: Vec<_> =
            sb.z_reps.iter().map(|z| self.target.z_coordinates(&f0.mul_vec(z)).unwrap()).collect();
        let z_action = F2Matrix::from_columns(kt, &z_cols);
        let f0t = f0.transpose();
        let x_cols: Vec<_> =
            tb.x_reps.iter().map(|x| self.source.x_coordinates(&f0t.mul_vec(x)).unwrap()).collect();
        let x_action = F2Matrix::from_columns(ks, &x_cols);
        Ok(match self.direction {
            Direction::ZPreserving => LogicalAction { z_action, x_action },
            Direction::XPreserving => {
                LogicalAction { z_action: z_action.transpose(), x_action: x_action.transpose() }
            }
        })
    }
}

/// A gate of a CNOT circuit. Indices refer to positions in the current
/// register, which changes length as qubits are prepared or projected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    /// Insert a fresh `|+⟩` at this position.
    PrepPlus(usize),
    /// Apply `⟨0|` to the qubit at this position and drop it.
    ProjZero(usize),
    /// Move the qubit at position `i` to position `map[i]`.
    Permute(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnotCircuit {
    pub n_in: usize,
    pub n_out: usize,
    pub ops: Vec<Gate>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("op {index}: {msg}")]
    BadOp { index: usize, msg: String },
    #[error("circuit ends with {found} qubits, declared {declared}")]
    Arity { declared: usize, found: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl CnotCircuit {
    /// Checks every index against the running register length.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut len = self.n_in;
        for (index, op) in self.ops.iter().enumerate() {
            let bad = |msg: String| Err(CircuitError::BadOp { index, msg });
            match op {
                Gate::Cnot { control, target } => {
                    if control == target || *control >= len || *target >= len {
                        return bad(format!("CNOT {control} {target} on {len} qubits"));
                    }
                }
                Gate::PrepPlus(q) => {
                    if *q > len {
                        return bad(format!("PREP+ at {q} on {len} qubits"));
                    }
                    len += 1;
                }
                Gate::ProjZero(q) => {
                    if *q >= len {
                        return bad(format!("PROJ0 at {q} on {len} qubits"));
                    }
                    len -= 1;
                }
                Gate::Permute(map) => {
                    let mut seen = vec![false; len];
                    if map.len() != len || map.iter().any(|&j| j >= len || std::mem::replace(&mut seen[j], true)) {
                        return bad(format!("PERM is not a permutation of {len} qubits"));
                    }
                }
            }
        }
        if len != self.n_out {
            return Err(CircuitError::Arity { declared: self.n_out, found: len });
        }
        Ok(())
    }

    pub fn cnot_count(&self) -> usize {
        self.ops.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }
}

/// Builds a circuit whose action on X-basis labels is `f0`.
///
/// Row reduction gives `E f0 = R`; clearing the non-pivot entries of the
/// pivot rows by column additions leaves `R G = [I_r 0; 0 0]`-like form
/// `D`, so `f0 = E⁻¹ D G⁻¹`. Gates are listed in time order: column-side
/// CNOTs, projections of unused inputs, preparations of empty outputs, then
/// row-side CNOTs in reverse.
pub fn synthesize_circuit(f0: &F2Matrix) -> CnotCircuit {
    let (m, n) = f0.shape();
    let rref = f0.rref();
    let mut ops = Vec::new();
    let mut is_pivot = vec![false; n];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    // x_p ^= x_j for each clearing column operation col_j += col_p.
    for (i, &p) in rref.pivots.iter().enumerate() {
        for j in rref.matrix.row(i).iter_ones() {
            if j != p {
                ops.push(Gate::Cnot { control: p, target: j });
            }
        }
    }
    for j in (0..n).rev() {
        if !is_pivot[j] {
            ops.push(Gate::ProjZero(j));
        }
    }
    let r = rref.pivots.len();
    for q in r..m {
        ops.push(Gate::PrepPlus(q));
    }
    for &(t, s) in rref.row_ops.iter().rev() {
        ops.push(Gate::Cnot { control: t, target: s });
    }
    CnotCircuit { n_in: n, n_out: m, ops }
}

/// Replays a circuit on X-basis labels: the row of each wire records which
/// input labels it carries. `CNOT(c, t)` sets `x_c ← x_c + x_t`.
pub fn circuit_f2_action(c: &CnotCircuit) -> Result<F2Matrix, CircuitError> {
    c.validate()?;
    let mut rows: Vec<_> = F2Matrix::identity(c.n_in).rows().to_vec();
    for op in &c.ops {
        match op {
            Gate::Cnot { control, target } => {
                let t = rows[*target].clone();
                rows[*control].xor_assign(&t);
            }
            Gate::PrepPlus(q) => rows.insert(*q, crate::f2linalg::BitVec::zeros(c.n_in)),
            Gate::ProjZero(q) => {
                rows.remove(*q);
            }
            Gate::Permute(map) => {
                let mut next = rows.clone();
                for (i, r) in rows.into_iter().enumerate() {
                    next[map[i]] = r;
                }
                rows = next;
            }
        }
    }
    Ok(F2Matrix::from_rows(c.n_in, rows))
}

impl fmt::Display for CnotCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# in={} out={}", self.n_in, self.n_out)?;
        for op in &self.ops {
            match op {
                Gate::Cnot { control, target } => writeln!(f, "CNOT {control} {target}")?,
                Gate::PrepPlus(q) => writeln!(f, "PREP+ {q}")?,
                Gate::ProjZero(q) => writeln!(f, "PROJ0 {q}")?,
                Gate::Permute(map) => {
                    let parts: Vec<String> = map.iter().enumerate().map(|(i, j)| format!("{i}→{j}")).collect();
                    writeln!(f, "PERM {}", parts.join(","))?
                }
            }
        }
        Ok(())
    }
}

impl FromStr for CnotCircuit {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut arity = None;
        let mut ops = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: &str| CircuitError::Parse { line: i + 1, msg: msg.to_string() };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut n_in = None;
                let mut n_out = None;
                for tok in rest.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("in=") {
                        n_in = v.parse::<usize>().ok();
                    } else if let Some(v) = tok.strip_prefix("out=") {
                        n_out = v.parse::<usize>().ok();
                    }
                }
                if let (Some(a), Some(b)) = (n_in, n_out) {
                    arity = Some((a, b));
                }
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| t.parse::<usize>().map_err(|_| err(&format!("bad index {t:?}")));
            let op = match toks.as_slice() {
                ["CNOT", c, t] => Gate::Cnot { control: num(c)?, target: num(t)? },
                ["PREP+", q] => Gate::PrepPlus(num(q)?),
                ["PROJ0", q] => Gate::ProjZero(num(q)?),
                ["PERM"] => Gate::Permute(Vec::new()),
                ["PERM", spec] => {
                    let mut pairs = Vec::new();
                    for part in spec.split(',') {
                        let (a, b) = part
                            .split_once('→')
                            .or_else(|| part.split_once("->"))
                            .ok_or_else(|| err("PERM entries look like i→j"))?;
                        pairs.push((num(a)?, num(b)?));
                    }
                    let mut map = vec![usize::MAX; pairs.len()];
                    for (a, b) in pairs {
                        if a >= map.len() {
                            return Err(err("PERM source out of range"));
                        }
                        map[a] = b;
                    }
                    Gate::Permute(map)
                }
                _ => return Err(err("unknown op")),
            };
            ops.push(op);
        }
        let (n_in, n_out) = arity.ok_or(CircuitError::Parse { line: 1, msg: "missing \"# in=N out=M\" header".into() })?;
        let c = CnotCircuit { n_in, n_out, ops };
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gives_empty_circuit() {
        let c = synthesize_circuit(&F2Matrix::identity(4));
        assert!(c.ops.is_empty());
        assert_eq!(circuit_f2_action(&c).unwrap(), F2Matrix::identity(4));
    }

    #[test]
    fn single_cnot_action() {
        let c = CnotCircuit { n_in: 2, n_out: 2, ops: vec![Gate::Cnot { control: 1, target: 0 }] };
        assert_eq!(circuit_f2_action(&c).unwrap(), F2Matrix::from_strs(2, &["10", "11"]));
    }

    #[test]
    fn prop_example_round_trip() {
        let m = F2Matrix::from_strs(3, &["101", "111"]);
        let c = synthesize_circuit(&m);
        assert_eq!(circuit_f2_action(&c).unwrap(), m);
    }

    #[test]
    fn empty_shapes() {
        let c = synthesize_circuit(&F2Matrix::zeros(0, 3));
        assert!(c.ops.iter().all(|g| matches!(g, Gate::ProjZero(_))));
        assert_eq!(c.ops.len(), 3);
        let c = synthesize_circuit(&F2Matrix::zeros(3, 0));
        assert!(c.ops.iter().all(|g| matches!(g, Gate::PrepPlus(_))));
        assert_eq!(circuit_f2_action(&c).unwrap(), F2Matrix::zeros(3, 0));
    }

    #[test]
    fn text_round_trip() {
        let c = CnotCircuit {
            n_in: 3,
            n_out: 3,
            ops: vec![
                Gate::Cnot { control: 0, target: 2 },
                Gate::ProjZero(1),
                Gate::PrepPlus(0),
                Gate::Permute(vec![2, 0, 1]),
            ],
        };
        let text = c.to_string();
        assert!(text.contains("PERM 0→2,1→0,2→1"));
        assert_eq!(text.parse::<CnotCircuit>().unwrap(), c);
    }
}
