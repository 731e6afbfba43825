//! The Temperley-Lieb algebra of Coxeter type B, realized on decorated
//! planar diagrams (the blob-algebra basis).
//!
//! A basis diagram on `n` strands is a non-crossing perfect matching of the
//! `2n` boundary points of a rectangle, with an optional blob on each arc
//! that can reach the west wall. The blob marks contact of the arc with the
//! wall (the 0-strand in the cylinder picture). Multiplication stacks
//! diagrams and resolves loops by the weight table
//!
//!   plain internal loop        -> d
//!   blobbed internal loop      -> c'
//!   k blobs merging onto one arc or loop -> c^(k-1), one blob survives
//!
//! which is forced by the defining relations e_i^2 = d e_i, e_0^2 = c e_0
//! and e_1 e_0 e_1 = c' e_1. The Markov trace closes a diagram around the
//! east side with nested arcs; a blobbed closure loop counts c when it
//! returns through the outermost closure arc (the one hugging the wall
//! gap), and c' when it closes further in. That split is what makes the
//! trace obey its defining recursion tr(a e_n b) = d^{-1} tr(a b): peeling
//! the outermost strand splices without touching any other loop, so the
//! only loop that can ever see the wall region is the one through the
//! outermost arc. tr(e_0) = c d^{-1} pins its value.

use crate::qf::{CoeffError, QfScalar};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("strand mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// The loop-weight parameters (d, c, c') of the algebra, all in one ring.
/// `d` must be invertible because the trace normalizes by d^{-n}.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopWeights {
    d: QfScalar,
    c: QfScalar,
    c_prime: QfScalar,
    d_inv: QfScalar,
}

impl LoopWeights {
    pub fn new(d: QfScalar, c: QfScalar, c_prime: QfScalar) -> Result<Self, AlgebraError> {
        if d.f() != c.f() || d.f() != c_prime.f() {
            return Err(AlgebraError::Coeff(CoeffError::RingMismatch {
                left: d.f(),
                right: if d.f() != c.f() { c.f() } else { c_prime.f() },
            }));
        }
        let d_inv = d.checked_inv()?;
        Ok(LoopWeights { d, c, c_prime, d_inv })
    }

    pub fn f(&self) -> u64 {
        self.d.f()
    }

    pub fn d(&self) -> &QfScalar {
        &self.d
    }

    pub fn c(&self) -> &QfScalar {
        &self.c
    }

    pub fn c_prime(&self) -> &QfScalar {
        &self.c_prime
    }
}

/// One arc of a diagram; `lo < hi` are point positions, see [`BlobDiagram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub lo: usize,
    pub hi: usize,
    pub blob: bool,
}

/// A basis diagram of the algebra on `n` strands.
///
/// The `2n` boundary points are numbered in the circular order starting at
/// the south-west corner: bottom points b1..bn are positions 0..n, then the
/// top points follow from east to west, so t_k sits at position `2n - k`.
/// Arcs are stored sorted by lower endpoint; a blob is allowed only on a
/// west-exposed arc (one not enclosed by any other arc).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlobDiagram {
    strands: usize,
    arcs: Vec<Arc>,
}

impl BlobDiagram {
    pub fn new(
        strands: usize,
        arcs: impl IntoIterator<Item = (usize, usize, bool)>,
    ) -> Result<Self, AlgebraError> {
        let mut list: Vec<Arc> = arcs
            .into_iter()
            .map(|(p, q, blob)| Arc {
                lo: p.min(q),
                hi: p.max(q),
                blob,
            })
            .collect();
        list.sort();
        let d = BlobDiagram { strands, arcs: list };
        d.check()?;
        Ok(d)
    }

    fn check(&self) -> Result<(), AlgebraError> {
        let n = self.strands;
        if n == 0 {
            return Err(AlgebraError::InvalidDiagram("zero strands".into()));
        }
        let mut seen = vec![false; 2 * n];
        for a in &self.arcs {
            if a.lo == a.hi || a.hi >= 2 * n {
                return Err(AlgebraError::InvalidDiagram(format!(
                    "arc ({}, {}) out of range",
                    a.lo, a.hi
                )));
            }
            for p in [a.lo, a.hi] {
                if seen[p] {
                    return Err(AlgebraError::InvalidDiagram(format!(
                        "point {p} matched twice"
                    )));
                }
                seen[p] = true;
            }
        }
        if self.arcs.len() != n {
            return Err(AlgebraError::InvalidDiagram(format!(
                "expected {} arcs, got {}",
                n,
                self.arcs.len()
            )));
        }
        if !self.is_planar() {
            return Err(AlgebraError::InvalidDiagram("arcs cross".into()));
        }
        for a in &self.arcs {
            if a.blob && !self.is_west_exposed(a) {
                return Err(AlgebraError::InvalidDiagram(format!(
                    "blob on enclosed arc ({}, {})",
                    a.lo, a.hi
                )));
            }
        }
        Ok(())
    }

    fn is_planar(&self) -> bool {
        for (i, a) in self.arcs.iter().enumerate() {
            for b in &self.arcs[i + 1..] {
                let crossing = a.lo < b.lo && b.lo < a.hi && a.hi < b.hi;
                if crossing {
                    return false;
                }
            }
        }
        true
    }

    fn is_west_exposed(&self, arc: &Arc) -> bool {
        !self
            .arcs
            .iter()
            .any(|other| other.lo < arc.lo && arc.hi < other.hi)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    fn bottom_point(_n: usize, strand: usize) -> usize {
        strand
    }

    fn top_point(n: usize, strand: usize) -> usize {
        2 * n - 1 - strand
    }

    /// The unit diagram: every strand runs straight through, no blobs.
    pub fn identity(strands: usize) -> Self {
        assert!(strands >= 1);
        let arcs = (0..strands)
            .map(|s| {
                (
                    Self::bottom_point(strands, s),
                    Self::top_point(strands, s),
                    false,
                )
            })
            .collect::<Vec<_>>();
        Self::new(strands, arcs).expect("identity diagram is valid")
    }

    /// The diagram of generator e_i: for i = 0 the identity with a blob on
    /// strand 1, for i >= 1 a cup joining b_i, b_(i+1) and a cap joining
    /// t_i, t_(i+1) (1-based strand labels).
    pub fn generator(strands: usize, index: usize) -> Result<Self, AlgebraError> {
        let n = strands;
        if index >= n.max(1) || n == 0 {
            return Err(AlgebraError::IndexOutOfRange { index, strands: n });
        }
        if index == 0 {
            let mut arcs: Vec<(usize, usize, bool)> = (0..n)
                .map(|s| (Self::bottom_point(n, s), Self::top_point(n, s), false))
                .collect();
            arcs[0].2 = true;
            return Self::new(n, arcs);
        }
        let (a, b) = (index - 1, index); // 0-based strands of the cup
        let mut arcs = Vec::with_capacity(n);
        arcs.push((Self::bottom_point(n, a), Self::bottom_point(n, b), false));
        arcs.push((Self::top_point(n, a), Self::top_point(n, b), false));
        for s in (0..n).filter(|s| *s != a && *s != b) {
            arcs.push((Self::bottom_point(n, s), Self::top_point(n, s), false));
        }
        Self::new(n, arcs)
    }

    fn label(&self, p: usize) -> String {
        let n = self.strands;
        if p < n {
            format!("b{}", p + 1)
        } else {
            format!("t{}", 2 * n - p)
        }
    }
}

impl fmt::Display for BlobDiagram {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.arcs {
            if !first {
                out.write_str(" ")?;
            }
            first = false;
            // print bottom labels before top, each group ascending
            let n = self.strands;
            let (x, y) = if a.lo >= n {
                (a.hi, a.lo) // both top: higher position = lower t-index
            } else {
                (a.lo, a.hi)
            };
            write!(
                out,
                "{}-{}{}",
                self.label(x),
                self.label(y),
                if a.blob { "*" } else { "" }
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
struct LoopCounts {
    plain_loops: usize,
    /// Blobbed loops away from the wall gap; weight c'.
    inner_blob_loops: usize,
    /// Blobbed loops through the outermost closure arc; weight c.
    outer_blob_loops: usize,
    merges: usize,
}

impl LoopCounts {
    fn record_loop(&mut self, blobs: usize, outer: bool) {
        if blobs == 0 {
            self.plain_loops += 1;
        } else {
            self.merges += blobs - 1;
            if outer {
                self.outer_blob_loops += 1;
            } else {
                self.inner_blob_loops += 1;
            }
        }
    }

    /// d^plain * c^(merges + outer blob loops) * c'^(inner blob loops)
    fn weight(&self, w: &LoopWeights) -> QfScalar {
        let mut out = w.d.pow(self.plain_loops as u64);
        out = &out * &w.c.pow((self.merges + self.outer_blob_loops) as u64);
        &out * &w.c_prime.pow(self.inner_blob_loops as u64)
    }
}

/// Walks the multigraph formed by `edges`, following paths that start at
/// degree-1 nodes and then the remaining cycles. Returns the open paths as
/// `(start, end, blobs)` and, per closed loop, its blob count and whether
/// it ran through the marked edge.
fn trace_components(
    node_count: usize,
    edges: &[(usize, usize, bool)],
    marked_edge: Option<usize>,
) -> (Vec<(usize, usize, usize)>, Vec<(usize, bool)>) {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (i, &(u, v, _)) in edges.iter().enumerate() {
        incident[u].push(i);
        incident[v].push(i);
    }
    let mut used = vec![false; edges.len()];
    let walk =
        |start: usize, first_edge: usize, used: &mut Vec<bool>| -> (usize, usize, bool) {
            let mut cur = start;
            let mut edge = first_edge;
            let mut blobs = 0;
            let mut marked = false;
            loop {
                used[edge] = true;
                if Some(edge) == marked_edge {
                    marked = true;
                }
                let (u, v, blob) = edges[edge];
                if blob {
                    blobs += 1;
                }
                cur = if u == cur { v } else { u };
                match incident[cur].iter().copied().find(|&e| !used[e]) {
                    Some(next) => edge = next,
                    None => return (cur, blobs, marked),
                }
            }
        };
    let mut paths = Vec::new();
    for start in 0..node_count {
        if incident[start].len() != 1 {
            continue;
        }
        let e = incident[start][0];
        if used[e] {
            continue;
        }
        let (end, blobs, _) = walk(start, e, &mut used);
        paths.push((start, end, blobs));
    }
    let mut cycles = Vec::new();
    for e in 0..edges.len() {
        if used[e] {
            continue;
        }
        let (_, blobs, marked) = walk(edges[e].0, e, &mut used);
        cycles.push((blobs, marked));
    }
    (paths, cycles)
}

/// Stacks `x` below `y`, merging arcs through the interface. Returns the
/// loop/merge counts and the resulting canonical diagram.
fn stack(x: &BlobDiagram, y: &BlobDiagram) -> Result<(LoopCounts, BlobDiagram), AlgebraError> {
    if x.strands != y.strands {
        return Err(AlgebraError::StrandMismatch {
            left: x.strands,
            right: y.strands,
        });
    }
    let n = x.strands;
    // node ids: 0..n product bottom, n..2n interface strands, 2n..3n product top
    let map_x = |p: usize| if p < n { p } else { n + (2 * n - 1 - p) };
    let map_y = |p: usize| if p < n { n + p } else { 2 * n + (2 * n - 1 - p) };
    let mut edges: Vec<(usize, usize, bool)> = Vec::with_capacity(2 * n);
    for a in &x.arcs {
        edges.push((map_x(a.lo), map_x(a.hi), a.blob));
    }
    for a in &y.arcs {
        edges.push((map_y(a.lo), map_y(a.hi), a.blob));
    }
    let to_position = |node: usize| -> usize {
        if node < n {
            node // product bottom point
        } else {
            2 * n - 1 - (node - 2 * n) // product top point of strand node-2n
        }
    };
    let mut counts = LoopCounts::default();
    let (paths, cycles) = trace_components(3 * n, &edges, None);
    let mut arcs: Vec<(usize, usize, bool)> = Vec::with_capacity(n);
    for (start, end, blobs) in paths {
        if blobs > 1 {
            counts.merges += blobs - 1;
        }
        arcs.push((to_position(start), to_position(end), blobs > 0));
    }
    for (blobs, _) in cycles {
        counts.record_loop(blobs, false);
    }
    let diagram = BlobDiagram::new(n, arcs)?;
    debug_assert!(diagram.check().is_ok());
    Ok((counts, diagram))
}

/// Multiplies two basis diagrams, returning the scalar collected from loop
/// resolution together with the resulting diagram.
pub fn multiply_diagrams(
    w: &LoopWeights,
    x: &BlobDiagram,
    y: &BlobDiagram,
) -> Result<(QfScalar, BlobDiagram), AlgebraError> {
    let (counts, diagram) = stack(x, y)?;
    Ok((counts.weight(w), diagram))
}

fn closure_counts(x: &BlobDiagram) -> LoopCounts {
    let n = x.strands;
    let mut edges: Vec<(usize, usize, bool)> =
        x.arcs.iter().map(|a| (a.lo, a.hi, a.blob)).collect();
    let outermost = edges.len(); // closure arc of strand 1, pushed first
    for s in 0..n {
        edges.push((s, 2 * n - 1 - s, false)); // east closure, nested on the right
    }
    let mut counts = LoopCounts::default();
    let (paths, cycles) = trace_components(2 * n, &edges, Some(outermost));
    debug_assert!(paths.is_empty(), "closure leaves no open strands");
    for (blobs, through_outermost) in cycles {
        counts.record_loop(blobs, through_outermost);
    }
    counts
}

/// A finite linear combination of basis diagrams with Q(sqrt f) coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    strands: usize,
    terms: BTreeMap<BlobDiagram, QfScalar>,
}

impl AlgebraElement {
    pub fn zero(strands: usize) -> Self {
        AlgebraElement {
            strands,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(strands: usize, f: u64) -> Self {
        Self::from_term(BlobDiagram::identity(strands), QfScalar::one(f))
    }

    /// The generator e_index as an element with coefficient 1.
    pub fn generator(strands: usize, index: usize, f: u64) -> Result<Self, AlgebraError> {
        Ok(Self::from_term(
            BlobDiagram::generator(strands, index)?,
            QfScalar::one(f),
        ))
    }

    pub fn from_term(diagram: BlobDiagram, coeff: QfScalar) -> Self {
        let strands = diagram.strands;
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(diagram, coeff);
        }
        AlgebraElement { strands, terms }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BlobDiagram, &QfScalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &BlobDiagram) -> Option<&QfScalar> {
        self.terms.get(d)
    }

    fn check_strands(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.strands == other.strands {
            Ok(())
        } else {
            Err(AlgebraError::StrandMismatch {
                left: self.strands,
                right: other.strands,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_strands(other)?;
        let mut terms = self.terms.clone();
        for (d, coeff) in &other.terms {
            match terms.get_mut(d) {
                Some(existing) => {
                    *existing = existing.checked_add(coeff)?;
                    if existing.is_zero() {
                        terms.remove(d);
                    }
                }
                None => {
                    terms.insert(d.clone(), coeff.clone());
                }
            }
        }
        Ok(AlgebraElement {
            strands: self.strands,
            terms,
        })
    }

    pub fn scale(&self, k: &QfScalar) -> Result<Self, AlgebraError> {
        let mut terms = BTreeMap::new();
        for (d, coeff) in &self.terms {
            let scaled = coeff.checked_mul(k)?;
            if !scaled.is_zero() {
                terms.insert(d.clone(), scaled);
            }
        }
        Ok(AlgebraElement {
            strands: self.strands,
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        let f = other
            .terms
            .values()
            .next()
            .map(|c| c.f())
            .or_else(|| self.terms.values().next().map(|c| c.f()));
        match f {
            Some(f) => self.add(&other.scale(&QfScalar::from_integer(-1, f))?),
            None => Ok(self.clone()),
        }
    }

    /// Bilinear extension of diagram multiplication; `self` is the bottom
    /// factor of the stack.
    pub fn mul(&self, other: &Self, w: &LoopWeights) -> Result<Self, AlgebraError> {
        self.check_strands(other)?;
        let mut terms: BTreeMap<BlobDiagram, QfScalar> = BTreeMap::new();
        for (dx, cx) in &self.terms {
            for (dy, cy) in &other.terms {
                let (scalar, diagram) = multiply_diagrams(w, dx, dy)?;
                let coeff = cx.checked_mul(cy)?.checked_mul(&scalar)?;
                match terms.get_mut(&diagram) {
                    Some(existing) => *existing = existing.checked_add(&coeff)?,
                    None => {
                        terms.insert(diagram, coeff);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement {
            strands: self.strands,
            terms,
        })
    }

    /// The Markov trace: close every strand around the east side with
    /// nested arcs, weight each closure loop (d plain; after c-merging, c
    /// for the blobbed loop through the outermost arc, c' for blobbed loops
    /// closing further in), normalize by d^{-n}, and extend linearly.
    pub fn markov_trace(&self, w: &LoopWeights) -> Result<QfScalar, AlgebraError> {
        let f = w.f();
        let mut total = QfScalar::zero(f);
        for (diagram, coeff) in &self.terms {
            let counts = closure_counts(diagram);
            let weight = counts.weight(w);
            total = total.checked_add(&coeff.checked_mul(&weight)?)?;
        }
        let norm = w.d_inv.pow(self.strands as u64);
        Ok(&total * &norm)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return out.write_str("0");
        }
        let mut first = true;
        for (d, c) in &self.terms {
            if !first {
                out.write_str(" + ")?;
            }
            first = false;
            write!(out, "({c})[{d}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Generic weights with d = sqrt(2), c = 3, c' = 5/2 so the three loop
    /// factors are pairwise distinct.
    fn weights() -> LoopWeights {
        LoopWeights::new(
            QfScalar::sqrt_f(2),
            QfScalar::from_integer(3, 2),
            QfScalar::from_rational(rat(5, 2), 2),
        )
        .unwrap()
    }

    fn gen(n: usize, i: usize) -> AlgebraElement {
        AlgebraElement::generator(n, i, 2).unwrap()
    }

    #[test]
    fn identity_shapes() {
        let one = BlobDiagram::identity(1);
        assert_eq!(one.arcs(), &[Arc { lo: 0, hi: 1, blob: false }]);
        let two = BlobDiagram::identity(2);
        assert_eq!(two.arcs().len(), 2);
        assert_eq!(two.to_string(), "b1-t1 b2-t2");
    }

    #[test]
    fn identity_is_neutral() {
        let w = weights();
        let id = AlgebraElement::identity(3, 2);
        for i in 0..3 {
            let e = gen(3, i);
            assert_eq!(id.mul(&e, &w).unwrap(), e);
            assert_eq!(e.mul(&id, &w).unwrap(), e);
        }
    }

    #[test]
    fn generator_shapes() {
        let e0 = BlobDiagram::generator(1, 0).unwrap();
        assert_eq!(e0.to_string(), "b1-t1*");
        let e1 = BlobDiagram::generator(2, 1).unwrap();
        assert_eq!(e1.to_string(), "b1-b2 t1-t2");
        assert!(matches!(
            BlobDiagram::generator(2, 2),
            Err(AlgebraError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn square_relations() {
        let w = weights();
        // e_i^2 = d e_i
        let e1 = gen(2, 1);
        assert_eq!(
            e1.mul(&e1, &w).unwrap(),
            e1.scale(w.d()).unwrap()
        );
        // e_0^2 = c e_0
        let e0 = gen(2, 0);
        assert_eq!(e0.mul(&e0, &w).unwrap(), e0.scale(w.c()).unwrap());
    }

    #[test]
    fn sandwich_relations() {
        let w = weights();
        // e_1 e_0 e_1 = c' e_1
        let e0 = gen(2, 0);
        let e1 = gen(2, 1);
        let lhs = e1.mul(&e0, &w).unwrap().mul(&e1, &w).unwrap();
        assert_eq!(lhs, e1.scale(w.c_prime()).unwrap());
        // e_i e_j e_i = e_i for |i-j| = 1, i,j >= 1
        let e1 = gen(3, 1);
        let e2 = gen(3, 2);
        assert_eq!(e1.mul(&e2, &w).unwrap().mul(&e1, &w).unwrap(), e1);
        assert_eq!(e2.mul(&e1, &w).unwrap().mul(&e2, &w).unwrap(), e2);
    }

    #[test]
    fn distant_generators_commute() {
        let w = weights();
        let e1 = gen(4, 1);
        let e3 = gen(4, 3);
        assert_eq!(e1.mul(&e3, &w).unwrap(), e3.mul(&e1, &w).unwrap());
        let e0 = gen(4, 0);
        let e2 = gen(4, 2);
        assert_eq!(e0.mul(&e2, &w).unwrap(), e2.mul(&e0, &w).unwrap());
    }

    #[test]
    fn bilinear_expansion() {
        // (e1 + 1)(e1 - 1) = d e1 - 1
        let w = weights();
        let one = AlgebraElement::identity(2, 2);
        let e1 = gen(2, 1);
        let lhs = e1
            .add(&one)
            .unwrap()
            .mul(&e1.sub(&one).unwrap(), &w)
            .unwrap();
        let rhs = e1.scale(w.d()).unwrap().sub(&one).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scale_by_zero_empties() {
        let e1 = gen(2, 1);
        assert!(e1.scale(&QfScalar::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn strand_mismatch_rejected() {
        let w = weights();
        let a = gen(2, 1);
        let b = gen(3, 1);
        assert!(matches!(
            a.mul(&b, &w),
            Err(AlgebraError::StrandMismatch { .. })
        ));
    }

    #[test]
    fn trace_anchors() {
        let w = weights();
        for n in 1..=5 {
            let one = AlgebraElement::identity(n, 2);
            assert!(one.markov_trace(&w).unwrap().is_one(), "tr(1) at n={n}");
            let e0 = gen(n, 0);
            assert_eq!(
                e0.markov_trace(&w).unwrap(),
                w.c() * &w.d().inv(),
                "tr(e0) at n={n}"
            );
        }
    }

    #[test]
    fn trace_derived_values() {
        let w = weights();
        // tr(e1) = d^{-1}
        let e1 = gen(2, 1);
        assert_eq!(e1.markov_trace(&w).unwrap(), w.d().inv());
        // tr(e0 e1) = c d^{-2}
        let prod = gen(2, 0).mul(&e1, &w).unwrap();
        assert_eq!(
            prod.markov_trace(&w).unwrap(),
            w.c() * &w.d().inv().pow(2)
        );
    }

    #[test]
    fn markov_property_small() {
        // tr(a e_{n-1} b) = d^{-1} tr(a b) for a, b words in e_0..e_{n-2}
        let w = weights();
        for n in 2..=4 {
            let words: Vec<Vec<usize>> = vec![
                vec![],
                vec![0],
                vec![n - 2],
                vec![0, n - 2],
                vec![n - 2, 0, n - 2],
            ];
            for wa in &words {
                for wb in &words {
                    let mk = |letters: &Vec<usize>| {
                        letters.iter().fold(
                            AlgebraElement::identity(n, 2),
                            |acc, &i| acc.mul(&gen(n, i), &w).unwrap(),
                        )
                    };
                    let a = mk(wa);
                    let b = mk(wb);
                    let top = gen(n, n - 1);
                    let lhs = a.mul(&top, &w).unwrap().mul(&b, &w).unwrap();
                    let ab = a.mul(&b, &w).unwrap();
                    assert_eq!(
                        lhs.markov_trace(&w).unwrap(),
                        &ab.markov_trace(&w).unwrap() * &w.d().inv(),
                        "n={n} a={wa:?} b={wb:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn blobbed_arcs_stay_west_exposed() {
        // exhaustive products of generator pairs and triples at small n
        let w = weights();
        for n in 1..=4 {
            let gens: Vec<_> = (0..n).map(|i| gen(n, i)).collect();
            for a in &gens {
                for b in &gens {
                    let ab = a.mul(b, &w).unwrap();
                    for (d, _) in ab.terms() {
                        assert!(d.check().is_ok(), "{d}");
                    }
                    for c in &gens {
                        let abc = ab.mul(c, &w).unwrap();
                        for (d, _) in abc.terms() {
                            assert!(d.check().is_ok(), "{d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trace_cyclicity_depends_on_parameters() {
        // With c = c' the trace is cyclic on these probes; with the weights
        // kept independent the pair (e1, e0 e1) separates tr(xy) and tr(yx):
        // e1 e0 e1 = c' e1 while e0 e1 e1 = d e0 e1, giving c'/d vs c/d.
        let w = weights();
        let e0 = gen(2, 0);
        let e1 = gen(2, 1);
        let x = e1.clone();
        let y = e0.mul(&e1, &w).unwrap();
        let xy = x.mul(&y, &w).unwrap().markov_trace(&w).unwrap();
        let yx = y.mul(&x, &w).unwrap().markov_trace(&w).unwrap();
        assert_eq!(xy, w.c_prime() * &w.d().inv());
        assert_eq!(yx, w.c() * &w.d().inv());
        assert_ne!(xy, yx);

        let equal = LoopWeights::new(
            QfScalar::sqrt_f(2),
            QfScalar::from_integer(3, 2),
            QfScalar::from_integer(3, 2),
        )
        .unwrap();
        let probes: Vec<AlgebraElement> = vec![
            gen(3, 0),
            gen(3, 1),
            gen(3, 2),
            gen(3, 0).mul(&gen(3, 1), &equal).unwrap(),
            gen(3, 1).mul(&gen(3, 0), &equal).unwrap().mul(&gen(3, 2), &equal).unwrap(),
        ];
        for x in &probes {
            for y in &probes {
                let xy = x.mul(y, &equal).unwrap().markov_trace(&equal).unwrap();
                let yx = y.mul(x, &equal).unwrap().markov_trace(&equal).unwrap();
                assert_eq!(xy, yx, "cyclicity at c = c' for {x} and {y}");
            }
        }
    }

    #[test]
    fn diagram_rendering() {
        let d = BlobDiagram::new(3, [(0, 5, true), (1, 2, false), (3, 4, false)]).unwrap();
        assert_eq!(d.to_string(), "b1-t1* b2-b3 t2-t3");
    }

    #[test]
    fn invalid_diagrams_rejected() {
        // crossing arcs
        assert!(BlobDiagram::new(2, [(0, 2, false), (1, 3, false)]).is_err());
        // blob on an enclosed arc
        assert!(BlobDiagram::new(2, [(0, 3, false), (1, 2, true)]).is_err());
        // not a perfect matching
        assert!(BlobDiagram::new(2, [(0, 1, false), (1, 2, false)]).is_err());
    }
}
