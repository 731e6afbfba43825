//! Extended braid words, the skein map into the diagram algebra, the
//! rectangular-lattice words, and the closed partition-function formula.
//!
//! A crossing letter maps to a two-term skein combination: sigma_i goes to
//! beta e_i + alpha, its primed partner swaps the coefficients, and the
//! index-0 letters use (alpha0, beta0) with the blob generator e_0. Plain
//! e-letters embed generators directly. Words evaluate as stacked products,
//! leftmost letter at the bottom.
//!
//! For an n-row, m-column lattice against the wall the evaluation strand
//! count is 2m. Each row of sites contributes one even-index crossing row
//! (its boundary bond as sigma_0 plus the row's horizontal bonds), each gap
//! between consecutive rows contributes one odd-index primed row (the
//! vertical bonds), and cup rows close the weave at both ends. One letter
//! per bond; the bracket and the C^n f^(nm/2) prefactor then reproduce the
//! partition function exactly.

use crate::graph::BoundaryGraph;
use crate::model::ModelParams;
use crate::qf::QfScalar;
use crate::tlb::{AlgebraElement, AlgebraError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("letter index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("lattice dimensions must be at least 1 (got {rows} x {cols})")]
    InvalidDimensions { rows: usize, cols: usize },
    #[error("{strands} strands exceed the evaluation budget of {max}")]
    StrandBudget { strands: usize, max: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangleLetter {
    /// Crossing sigma_i (i = 0 wraps the wall strand).
    Sigma(usize),
    /// The inverse-type crossing sigma'_i.
    SigmaPrime(usize),
    /// Direct insertion of the generator e_i.
    E(usize),
}

impl TangleLetter {
    pub fn index(&self) -> usize {
        match *self {
            TangleLetter::Sigma(i) | TangleLetter::SigmaPrime(i) | TangleLetter::E(i) => i,
        }
    }
}

/// A word over the tangle letters with a declared strand count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleWord {
    strands: usize,
    letters: Vec<TangleLetter>,
}

impl TangleWord {
    pub fn new(
        strands: usize,
        letters: impl IntoIterator<Item = TangleLetter>,
    ) -> Result<Self, BraidError> {
        let letters: Vec<_> = letters.into_iter().collect();
        for l in &letters {
            if l.index() >= strands {
                return Err(BraidError::IndexOutOfRange {
                    index: l.index(),
                    strands,
                });
            }
        }
        Ok(TangleWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[TangleLetter] {
        &self.letters
    }

    pub fn concat(&self, other: &TangleWord) -> Result<Self, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::Algebra(AlgebraError::StrandMismatch {
                left: self.strands,
                right: other.strands,
            }));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(TangleWord {
            strands: self.strands,
            letters,
        })
    }
}

/// Image of a single letter under the skein map.
pub fn phi_letter(
    letter: TangleLetter,
    m: &ModelParams,
    strands: usize,
) -> Result<AlgebraElement, BraidError> {
    let i = letter.index();
    if i >= strands {
        return Err(BraidError::IndexOutOfRange { index: i, strands });
    }
    let f = m.f();
    let e = AlgebraElement::generator(strands, i, f)?;
    let one = AlgebraElement::identity(strands, f);
    let (on_e, on_one) = match letter {
        TangleLetter::E(_) => return Ok(e),
        TangleLetter::Sigma(0) => (m.beta0(), m.alpha0()),
        TangleLetter::SigmaPrime(0) => (m.alpha0(), m.beta0()),
        TangleLetter::Sigma(_) => (m.beta(), m.alpha()),
        TangleLetter::SigmaPrime(_) => (m.alpha(), m.beta()),
    };
    Ok(e.scale(on_e)?.add(&one.scale(on_one)?)?)
}

/// Evaluates a word as the ordered product of its letter images, leftmost
/// letter at the bottom of the stack.
pub fn evaluate_word(word: &TangleWord, m: &ModelParams) -> Result<AlgebraElement, BraidError> {
    let w = m.loop_weights();
    let mut acc = AlgebraElement::identity(word.strands, m.f());
    for &letter in &word.letters {
        let img = phi_letter(letter, m, word.strands)?;
        acc = acc.mul(&img, w)?;
    }
    Ok(acc)
}

fn sigma_row(m_cols: usize) -> Vec<TangleLetter> {
    (0..m_cols).map(|k| TangleLetter::Sigma(2 * k)).collect()
}

fn sigma_prime_row(m_cols: usize) -> Vec<TangleLetter> {
    (0..m_cols)
        .map(|k| TangleLetter::SigmaPrime(2 * k + 1))
        .collect()
}

/// The word tau' (tau'' tau')^n on 2m strands, where tau' is the even
/// crossing row sigma_0 sigma_2 .. sigma_(2m-2) and tau'' the odd primed
/// row sigma'_1 sigma'_3 .. sigma'_(2m-1).
pub fn tau_word(n: usize, m_cols: usize) -> Result<TangleWord, BraidError> {
    if n < 1 || m_cols < 1 {
        return Err(BraidError::InvalidDimensions { rows: n, cols: m_cols });
    }
    Ok(lattice_word(n + 1, m_cols))
}

/// The weave word of an n-row lattice: n even crossing rows interleaved
/// with n-1 odd primed rows.
fn lattice_word(rows: usize, m_cols: usize) -> TangleWord {
    let mut letters = sigma_row(m_cols);
    for _ in 1..rows {
        letters.extend(sigma_prime_row(m_cols));
        letters.extend(sigma_row(m_cols));
    }
    TangleWord {
        strands: 2 * m_cols,
        letters,
    }
}

/// The cup row E_m = e_1 e_3 .. e_(2m-1) on 2m strands.
pub fn e_block(m_cols: usize) -> Result<TangleWord, BraidError> {
    if m_cols < 1 {
        return Err(BraidError::InvalidDimensions {
            rows: 1,
            cols: m_cols,
        });
    }
    Ok(TangleWord {
        strands: 2 * m_cols,
        letters: (0..m_cols).map(|k| TangleLetter::E(2 * k + 1)).collect(),
    })
}

/// Evaluation budgets for the trace route.
#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    /// Upper bound on the strand count 2m; the diagram support grows
    /// binomially with it.
    pub max_strands: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { max_strands: 8 }
    }
}

fn lattice_sandwich(
    rows: usize,
    cols: usize,
    m: &ModelParams,
) -> Result<AlgebraElement, BraidError> {
    let cups = e_block(cols)?;
    let word = cups
        .concat(&lattice_word(rows, cols))?
        .concat(&cups)?;
    evaluate_word(&word, m)
}

/// The bracket invariant of the lattice weave: d^m times the Markov trace
/// of the cup-row sandwich. Independent of the gauge choice.
pub fn potts_bracket_lattice(
    rows: usize,
    cols: usize,
    m: &ModelParams,
) -> Result<QfScalar, BraidError> {
    if rows < 1 || cols < 1 {
        return Err(BraidError::InvalidDimensions { rows, cols });
    }
    let element = lattice_sandwich(rows, cols, m)?;
    let trace = element.markov_trace(m.loop_weights())?;
    Ok(&m.d().pow(cols as u64) * &trace)
}

/// The lattice partition function through the trace route:
/// C^n f^(nm/2) d^m tr(E_m phi(word) E_m), evaluated exactly.
pub fn lattice_z(rows: usize, cols: usize, m: &ModelParams) -> Result<QfScalar, BraidError> {
    lattice_z_opts(rows, cols, m, &TraceOptions::default())
}

pub fn lattice_z_opts(
    rows: usize,
    cols: usize,
    m: &ModelParams,
    opts: &TraceOptions,
) -> Result<QfScalar, BraidError> {
    if rows < 1 || cols < 1 {
        return Err(BraidError::InvalidDimensions { rows, cols });
    }
    if 2 * cols > opts.max_strands {
        return Err(BraidError::StrandBudget {
            strands: 2 * cols,
            max: opts.max_strands,
        });
    }
    let bracket = potts_bracket_lattice(rows, cols, m)?;
    // C^n * f^(nm/2) = C^n * d^(nm)
    let prefactor = &m.c().pow(rows as u64) * &m.d().pow((rows * cols) as u64);
    Ok(&prefactor * &bracket)
}

/// The n-row, m-column grid with one boundary bond on the leftmost vertex
/// of each row and no wall vertices.
pub fn lattice_graph(rows: usize, cols: usize) -> Result<BoundaryGraph, BraidError> {
    if rows < 1 || cols < 1 {
        return Err(BraidError::InvalidDimensions { rows, cols });
    }
    let id = |r: usize, c: usize| format!("r{r}c{c}");
    let mut g = BoundaryGraph::new();
    for r in 1..=rows {
        for c in 1..=cols {
            g.add_vertex(id(r, c));
        }
    }
    for r in 1..=rows {
        for c in 1..=cols {
            if c < cols {
                g.add_inner_bond(id(r, c), id(r, c + 1)).expect("endpoints exist");
            }
            if r < rows {
                g.add_inner_bond(id(r, c), id(r + 1, c)).expect("endpoints exist");
            }
        }
        g.add_boundary_bond(id(r, 1)).expect("vertex exists");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_model;
    use crate::qf::QfScalar;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::One;
    use TangleLetter::{Sigma, SigmaPrime, E};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// f=2, B=-1/2, C=1/3, gauge 1.
    fn standard_model() -> ModelParams {
        make_model(2, rat(-1, 2), rat(1, 3), BigRational::one()).unwrap()
    }

    #[test]
    fn phi_images() {
        let m = standard_model();
        // phi(sigma_1) = beta e_1 + alpha
        let img = phi_letter(Sigma(1), &m, 2).unwrap();
        let expect = AlgebraElement::generator(2, 1, 2)
            .unwrap()
            .scale(m.beta())
            .unwrap()
            .add(&AlgebraElement::identity(2, 2).scale(m.alpha()).unwrap())
            .unwrap();
        assert_eq!(img, expect);
        // phi(sigma'_0) = alpha0 e_0 + beta0
        let img = phi_letter(SigmaPrime(0), &m, 2).unwrap();
        let expect = AlgebraElement::generator(2, 0, 2)
            .unwrap()
            .scale(m.alpha0())
            .unwrap()
            .add(&AlgebraElement::identity(2, 2).scale(m.beta0()).unwrap())
            .unwrap();
        assert_eq!(img, expect);
        // phi(sigma'_3) = alpha e_3 + beta
        let img = phi_letter(SigmaPrime(3), &m, 4).unwrap();
        let expect = AlgebraElement::generator(4, 3, 2)
            .unwrap()
            .scale(m.alpha())
            .unwrap()
            .add(&AlgebraElement::identity(4, 2).scale(m.beta()).unwrap())
            .unwrap();
        assert_eq!(img, expect);
        assert!(phi_letter(Sigma(4), &m, 4).is_err());
    }

    #[test]
    fn empty_word_is_identity() {
        let m = standard_model();
        let word = TangleWord::new(3, []).unwrap();
        assert_eq!(
            evaluate_word(&word, &m).unwrap(),
            AlgebraElement::identity(3, 2)
        );
    }

    #[test]
    fn repeated_e_letter_collects_d() {
        let m = standard_model();
        let word = TangleWord::new(2, [E(1), E(1)]).unwrap();
        let expect = AlgebraElement::generator(2, 1, 2)
            .unwrap()
            .scale(m.d())
            .unwrap();
        assert_eq!(evaluate_word(&word, &m).unwrap(), expect);
    }

    #[test]
    fn distant_crossings_commute() {
        let m = standard_model();
        let ab = TangleWord::new(4, [Sigma(1), Sigma(3)]).unwrap();
        let ba = TangleWord::new(4, [Sigma(3), Sigma(1)]).unwrap();
        assert_eq!(
            evaluate_word(&ab, &m).unwrap(),
            evaluate_word(&ba, &m).unwrap()
        );
    }

    #[test]
    fn tau_words_match_definitions() {
        assert_eq!(
            tau_word(1, 1).unwrap().letters(),
            &[Sigma(0), SigmaPrime(1), Sigma(0)]
        );
        assert_eq!(
            tau_word(1, 2).unwrap().letters(),
            &[
                Sigma(0),
                Sigma(2),
                SigmaPrime(1),
                SigmaPrime(3),
                Sigma(0),
                Sigma(2)
            ]
        );
        assert_eq!(
            tau_word(2, 1).unwrap().letters(),
            &[
                Sigma(0),
                SigmaPrime(1),
                Sigma(0),
                SigmaPrime(1),
                Sigma(0)
            ]
        );
        assert_eq!(tau_word(1, 2).unwrap().strands(), 4);
        assert!(tau_word(0, 1).is_err());
    }

    #[test]
    fn e_blocks() {
        assert_eq!(e_block(1).unwrap().letters(), &[E(1)]);
        assert_eq!(e_block(2).unwrap().letters(), &[E(1), E(3)]);
        assert_eq!(e_block(3).unwrap().letters(), &[E(1), E(3), E(5)]);
        assert!(e_block(0).is_err());
    }

    #[test]
    fn unit_lattice_bracket() {
        // C^1 f^(1/2) W = 4/3 pins W = 2 sqrt(2) at the standard point.
        let m = standard_model();
        let w = potts_bracket_lattice(1, 1, &m).unwrap();
        assert_eq!(
            w,
            QfScalar::new(rat(0, 1), rat(2, 1), 2),
            "bracket was {w}"
        );
        let z = &(m.c() * m.d()) * &w;
        assert_eq!(z, QfScalar::from_rational(rat(4, 3), 2));
    }

    #[test]
    fn bracket_is_gauge_independent() {
        for (rows, cols) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let mut seen = Vec::new();
            for gauge in [rat(1, 1), rat(2, 1), rat(5, 1)] {
                let m = make_model(2, rat(-1, 2), rat(1, 3), gauge).unwrap();
                seen.push(potts_bracket_lattice(rows, cols, &m).unwrap());
            }
            assert_eq!(seen[0], seen[1]);
            assert_eq!(seen[0], seen[2]);
        }
    }

    #[test]
    fn unit_lattice_z() {
        // brute enumeration of the 1-site graph gives 1 + (f-1) C = 4/3
        let m = standard_model();
        let z = lattice_z(1, 1, &m).unwrap();
        assert_eq!(z, QfScalar::from_rational(rat(4, 3), 2));
    }

    #[test]
    fn one_row_two_cols_z() {
        // 4-state enumeration: 1/2 + 1 + 1/3 + 1/6 = 2
        let m = standard_model();
        let z = lattice_z(1, 2, &m).unwrap();
        assert_eq!(z, QfScalar::from_integer(2, 2));
    }

    #[test]
    fn two_rows_one_col_z() {
        // 4-state enumeration: 1/2 + 1/3 + 1/3 + 1/18 = 11/9
        let m = standard_model();
        let z = lattice_z(2, 1, &m).unwrap();
        assert_eq!(z, QfScalar::from_rational(rat(11, 9), 2));
    }

    #[test]
    fn strand_budget_guard() {
        let m = standard_model();
        assert!(matches!(
            lattice_z_opts(1, 5, &m, &TraceOptions::default()),
            Err(BraidError::StrandBudget { strands: 10, .. })
        ));
    }

    #[test]
    fn lattice_graph_counts() {
        let g = lattice_graph(1, 1).unwrap();
        assert_eq!(g.vertices().len(), 1);
        assert!(g.inner_bonds().is_empty());
        assert_eq!(g.boundary_bonds().len(), 1);

        let g = lattice_graph(2, 2).unwrap();
        assert_eq!(g.vertices().len(), 4);
        assert_eq!(g.inner_bonds().len(), 4);
        assert_eq!(g.boundary_bonds().len(), 2);

        let (n, m) = (3, 4);
        let g = lattice_graph(n, m).unwrap();
        assert_eq!(g.vertices().len(), n * m);
        assert_eq!(g.inner_bonds().len(), n * (m - 1) + m * (n - 1));
        assert_eq!(g.boundary_bonds().len(), n);
        assert!(g.wall_vertices().is_empty());
    }
}
