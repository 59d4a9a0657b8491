//! Pushouts, coequalisers, kernels, cokernels and pullbacks of chain complexes.
//!
//! Quotients use the basis rule of [`F2Matrix::cokernel_projection`]: the
//! surviving basis vectors are the standard ones that are not pivots of the
//! relation space in echelon form.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::chain::{direct_sum_with_inclusions, ChainComplex, ChainError, ChainMap, Component};
use crate::f2linalg::F2Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColimitError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A quotient `D → D / R` with the kept basis indices at each degree.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: ChainComplex,
    pub projection: ChainMap,
    /// Indices of `D_n` whose basis vectors survive, in order. They span a
    /// section of the projection.
    pub kept: BTreeMap<i32, Vec<usize>>,
}

/// Quotient of `target` by the column spaces of `relations` (which must form
/// a subcomplex).
fn quotient_by(target: &ChainComplex, relations: &BTreeMap<i32, F2Matrix>) -> Result<Quotient, ColimitError> {
    let mut projs = BTreeMap::new();
    let mut kept = BTreeMap::new();
    let mut components = BTreeMap::new();
    let degrees: BTreeSet<i32> = target.components().keys().copied().collect();
    for &n in &degrees {
        let rel = relations.get(&n).cloned().unwrap_or_else(|| F2Matrix::zeros(target.dim(n), 0));
        let (p, k) = rel.cokernel_with_section();
        let labels = target.labels(n);
        components.insert(n, Component { dim: k.len(), labels: k.iter().map(|&i| labels[i].clone()).collect() });
        projs.insert(n, p);
        kept.insert(n, k);
    }
    let mut differentials = BTreeMap::new();
    for &n in target.differentials().keys() {
        let (Some(p), Some(k)) = (projs.get(&n), kept.get(&(n + 1))) else { continue };
        differentials.insert(n, p.mul(&target.diff(n)).select_columns(k));
    }
    let complex = ChainComplex::new(components, differentials)?;
    let projection = ChainMap::new(target.clone(), complex.clone(), projs)?;
    Ok(Quotient { complex, projection, kept })
}

/// `coeq(f, g) = coker(f − g)`.
pub fn coequaliser(f: &ChainMap, g: &ChainMap) -> Result<Quotient, ColimitError> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(ColimitError::ShapeMismatch("coequaliser of maps with different endpoints".into()));
    }
    let diff = f.add(g)?;
    let rel = f.target().degrees().into_iter().map(|n| (n, diff.component(n))).collect();
    quotient_by(f.target(), &rel)
}

/// `target / im f`.
pub fn cokernel(f: &ChainMap) -> Result<Quotient, ColimitError> {
    let rel = f.target().degrees().into_iter().map(|n| (n, f.component(n))).collect();
    quotient_by(f.target(), &rel)
}

/// The pushout of a span `C ← A → D`, computed as a coequaliser into `C ⊕ D`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub f: ChainMap,
    pub g: ChainMap,
    /// `C ⊕ D`.
    pub sum: ChainComplex,
    pub apex: ChainComplex,
    /// `C ⊕ D → Q`.
    pub coeq: ChainMap,
    pub k: ChainMap,
    pub l: ChainMap,
    pub kept: BTreeMap<i32, Vec<usize>>,
}

pub fn pushout(f: &ChainMap, g: &ChainMap) -> Result<Pushout, ColimitError> {
    if f.source() != g.source() {
        return Err(ColimitError::ShapeMismatch("span maps have different sources".into()));
    }
    let (sum, ic, id) = direct_sum_with_inclusions(f.target(), g.target());
    let a = ic.compose(f)?;
    let b = id.compose(g)?;
    let q = coequaliser(&a, &b)?;
    let k = q.projection.compose(&ic)?;
    let l = q.projection.compose(&id)?;
    Ok(Pushout {
        f: f.clone(),
        g: g.clone(),
        sum,
        apex: q.complex,
        coeq: q.projection,
        k,
        l,
        kept: q.kept,
    })
}

/// Given a candidate cocone `(k', l')` on the span of `p`, returns the unique
/// mediating map `u` with `u∘k = k'` and `u∘l = l'`, or `None` when the
/// cocone does not commute.
pub fn verify_universal_square(p: &Pushout, k2: &ChainMap, l2: &ChainMap) -> Option<ChainMap> {
    if k2.source() != p.f.target() || l2.source() != p.g.target() || k2.target() != l2.target() {
        return None;
    }
    let lhs = k2.compose(&p.f).ok()?;
    let rhs = l2.compose(&p.g).ok()?;
    if lhs != rhs {
        return None;
    }
    let y = k2.target().clone();
    let mut comps = BTreeMap::new();
    for (&n, kept) in &p.kept {
        let h = k2.component(n).hstack(&l2.component(n));
        let u = h.select_columns(kept);
        if u.mul(&p.coeq.component(n)) != h {
            return None;
        }
        comps.insert(n, u);
    }
    ChainMap::new(p.apex.clone(), y, comps).ok()
}

/// Subcomplex of `ambient` spanned at each degree by the (independent)
/// columns of `bases`, with the induced differentials.
fn subcomplex(ambient: &ChainComplex, bases: &BTreeMap<i32, F2Matrix>) -> Result<ChainComplex, ColimitError> {
    let mut components = BTreeMap::new();
    for (&n, b) in bases {
        components.insert(n, Component::with_prefix(b.ncols(), "k"));
    }
    let mut differentials = BTreeMap::new();
    for (&n, b) in bases {
        let Some(upper) = bases.get(&(n + 1)) else { continue };
        let image = ambient.diff(n).mul(upper);
        let mut cols = Vec::with_capacity(upper.ncols());
        for c in image.columns() {
            let x = b
                .solve(&c)
                .map_err(|e| ColimitError::ShapeMismatch(e.to_string()))?
                .ok_or_else(|| ColimitError::ShapeMismatch(format!("image escapes the subspace at degree {n}")))?;
            cols.push(x);
        }
        differentials.insert(n, F2Matrix::from_columns(b.ncols(), &cols));
    }
    Ok(ChainComplex::new(components, differentials)?)
}

/// `ker f` with its inclusion into the source.
pub fn kernel(f: &ChainMap) -> Result<(ChainComplex, ChainMap), ColimitError> {
    let bases: BTreeMap<i32, F2Matrix> =
        f.source().degrees().into_iter().map(|n| (n, f.component(n).kernel_basis())).collect();
    let k = subcomplex(f.source(), &bases)?;
    let incl = ChainMap::new(k.clone(), f.source().clone(), bases)?;
    Ok((k, incl))
}

/// The pullback of a cospan `X → Z ← Y`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub apex: ChainComplex,
    pub v: ChainMap,
    pub w: ChainMap,
}

pub fn pullback(f: &ChainMap, g: &ChainMap) -> Result<Pullback, ColimitError> {
    if f.target() != g.target() {
        return Err(ColimitError::ShapeMismatch("cospan maps have different targets".into()));
    }
    let (x, y) = (f.source(), g.source());
    let sum = x.direct_sum(y);
    let degrees: BTreeSet<i32> = x.degrees().into_iter().chain(y.degrees()).collect();
    let mut bases = BTreeMap::new();
    for &n in &degrees {
        let m = f.component(n).hstack(&g.component(n));
        bases.insert(n, m.kernel_basis());
    }
    let apex = subcomplex(&sum, &bases)?;
    let mut vs = BTreeMap::new();
    let mut ws = BTreeMap::new();
    for (&n, b) in &bases {
        let top: Vec<usize> = (0..x.dim(n)).collect();
        let bottom: Vec<usize> = (x.dim(n)..x.dim(n) + y.dim(n)).collect();
        vs.insert(n, b.select_rows(&top));
        ws.insert(n, b.select_rows(&bottom));
    }
    let v = ChainMap::new(apex.clone(), x.clone(), vs)?;
    let w = ChainMap::new(apex.clone(), y.clone(), ws)?;
    Ok(Pullback { apex, v, w })
}
