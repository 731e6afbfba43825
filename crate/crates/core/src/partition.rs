//! Partition functions on boundary graphs by the two reference routes:
//! direct enumeration over all spin states, and the deletion-contraction
//! recursion. Both are exact over Q(sqrt f) and must agree bit for bit.

use crate::graph::{BoundaryGraph, GraphError, SpinState, VertexId};
use crate::model::ModelParams;
use crate::qf::QfScalar;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("enumeration requires {required} states, exceeding the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("spin state is missing vertex {0}")]
    MissingVertex(VertexId),
    #[error("wall vertex {0} must carry spin 0")]
    WallSpinNonzero(VertexId),
    #[error("spin {spin} on vertex {vertex} out of range for f = {f}")]
    SpinOutOfRange { vertex: VertexId, spin: u64, f: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Boltzmann weight of one spin configuration: the product over inner bonds
/// of 1 + delta(S_i, S_j) B times the product over boundary bonds of
/// C + delta(0, S_i) D.
pub fn state_weight(
    g: &BoundaryGraph,
    m: &ModelParams,
    s: &SpinState,
) -> Result<QfScalar, PartitionError> {
    let f = m.f();
    let spin = |v: &VertexId| -> Result<u64, PartitionError> {
        let value = s
            .get(v)
            .ok_or_else(|| PartitionError::MissingVertex(v.clone()))?;
        if value >= f {
            return Err(PartitionError::SpinOutOfRange {
                vertex: v.clone(),
                spin: value,
                f,
            });
        }
        if g.is_wall(v) && value != 0 {
            return Err(PartitionError::WallSpinNonzero(v.clone()));
        }
        Ok(value)
    };
    for v in g.vertices() {
        spin(v)?;
    }
    let mut equal_inner = 0u64;
    for (u, v) in g.inner_bonds() {
        if spin(u)? == spin(v)? {
            equal_inner += 1;
        }
    }
    let mut excited_boundary = 0u64;
    for v in g.boundary_bonds() {
        if spin(v)? != 0 {
            excited_boundary += 1;
        }
    }
    // delta = 0 branches contribute 1 for inner bonds and C + D = 1 would be
    // wrong here: the boundary factor is C when the spin is excited.
    let weight = &m.one_plus_b().pow(equal_inner) * &m.c().pow(excited_boundary);
    Ok(weight)
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    /// Maximum number of spin states enumerated before refusing.
    pub budget: u64,
    /// Number of enumeration workers; the exact sum is identical for any
    /// worker count because addition in Q(sqrt f) is associative.
    pub workers: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            budget: 2_000_000,
            workers: 1,
        }
    }
}

enum Slot {
    Wall,
    Free(usize),
}

/// Bonds resolved to spin-slot indices plus weight tables, shared by all
/// enumeration workers.
struct EnumContext {
    free_count: usize,
    inner: Vec<(Slot, Slot)>,
    boundary: Vec<Slot>,
    pow_one_plus_b: Vec<BigRational>,
    pow_c: Vec<BigRational>,
}

impl EnumContext {
    fn new(g: &BoundaryGraph, m: &ModelParams) -> Self {
        let mut slot_of: HashMap<&VertexId, Slot> = HashMap::new();
        let mut free_count = 0;
        for v in g.vertices() {
            if g.is_wall(v) {
                slot_of.insert(v, Slot::Wall);
            } else {
                slot_of.insert(v, Slot::Free(free_count));
                free_count += 1;
            }
        }
        let copy = |s: &Slot| match s {
            Slot::Wall => Slot::Wall,
            Slot::Free(i) => Slot::Free(*i),
        };
        let inner: Vec<_> = g
            .inner_bonds()
            .iter()
            .map(|(u, v)| (copy(&slot_of[u]), copy(&slot_of[v])))
            .collect();
        let boundary: Vec<_> = g
            .boundary_bonds()
            .iter()
            .map(|v| copy(&slot_of[v]))
            .collect();
        let table = |base: &QfScalar, len: usize| -> Vec<BigRational> {
            let base = base.rational_part().clone();
            let mut out = Vec::with_capacity(len + 1);
            out.push(BigRational::one());
            for _ in 0..len {
                out.push(out.last().unwrap() * &base);
            }
            out
        };
        EnumContext {
            free_count,
            pow_one_plus_b: table(&m.one_plus_b(), inner.len()),
            pow_c: table(m.c(), boundary.len()),
            inner,
            boundary,
        }
    }

    fn weight_counts(&self, spins: &[u64]) -> (usize, usize) {
        let value = |s: &Slot| match s {
            Slot::Wall => 0,
            Slot::Free(i) => spins[*i],
        };
        let equal = self
            .inner
            .iter()
            .filter(|(u, v)| value(u) == value(v))
            .count();
        let excited = self.boundary.iter().filter(|v| value(v) != 0).count();
        (equal, excited)
    }

    fn decode(&self, mut index: u64, f: u64, spins: &mut [u64]) {
        for s in spins.iter_mut() {
            *s = index % f;
            index /= f;
        }
    }

    fn sum_range(&self, f: u64, range: std::ops::Range<u64>) -> BigRational {
        let mut spins = vec![0u64; self.free_count];
        if range.is_empty() {
            return BigRational::zero();
        }
        self.decode(range.start, f, &mut spins);
        let mut total = BigRational::zero();
        for _ in range {
            let (equal, excited) = self.weight_counts(&spins);
            total += &self.pow_one_plus_b[equal] * &self.pow_c[excited];
            // increment the base-f counter for the next state
            for s in spins.iter_mut() {
                *s += 1;
                if *s < f {
                    break;
                }
                *s = 0;
            }
        }
        total
    }
}

/// Z by direct summation over all f^(free spins) states, with the default
/// budget and a single worker.
pub fn brute_force_z(g: &BoundaryGraph, m: &ModelParams) -> Result<QfScalar, PartitionError> {
    brute_force_z_opts(g, m, &EnumerationOptions::default())
}

pub fn brute_force_z_opts(
    g: &BoundaryGraph,
    m: &ModelParams,
    opts: &EnumerationOptions,
) -> Result<QfScalar, PartitionError> {
    let f = m.f();
    let k = g.spin_count() as u32;
    let required = (f as u128)
        .checked_pow(k)
        .unwrap_or(u128::MAX);
    if required > opts.budget as u128 {
        return Err(PartitionError::BudgetExceeded {
            required,
            budget: opts.budget,
        });
    }
    let states = required as u64;
    let ctx = EnumContext::new(g, m);
    let workers = opts.workers.max(1).min(states.max(1) as usize);
    let total = if workers == 1 {
        ctx.sum_range(f, 0..states)
    } else {
        let chunk = states.div_ceil(workers as u64);
        let partials = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|t| {
                    let ctx = &ctx;
                    let start = t * chunk;
                    let end = ((t + 1) * chunk).min(states);
                    scope.spawn(move || ctx.sum_range(f, start..end))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("enumeration worker panicked"))
                .collect::<Vec<_>>()
        });
        // reduce in worker order; the value is order-independent anyway
        partials
            .into_iter()
            .fold(BigRational::zero(), |acc, p| acc + p)
    };
    Ok(QfScalar::from_rational(total, f))
}

/// How the deletion-contraction recursion picks the next bond.
#[derive(Debug, Clone, Copy, Default)]
pub enum BondSelection {
    /// Boundary bonds first, then the inner bond on the smallest vertex id.
    #[default]
    Deterministic,
    /// Uniformly random choice; the result is provably the same, this
    /// exists to test order independence.
    Seeded(u64),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DcOptions {
    /// Cache intermediate graphs by canonical form. Off by default; the
    /// recursion is exponential either way, this only shares subtrees.
    pub memoize: bool,
    pub selection: BondSelection,
}

/// Z by the deletion-contraction recursion. Agrees exactly with
/// `brute_force_z` on every graph.
pub fn deletion_contraction_z(g: &BoundaryGraph, m: &ModelParams) -> QfScalar {
    deletion_contraction_z_opts(g, m, &DcOptions::default())
}

pub fn deletion_contraction_z_opts(
    g: &BoundaryGraph,
    m: &ModelParams,
    opts: &DcOptions,
) -> QfScalar {
    let mut eval = DcEvaluator {
        m,
        memo: opts.memoize.then(HashMap::new),
        rng: match opts.selection {
            BondSelection::Deterministic => None,
            BondSelection::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        },
    };
    eval.z(g.clone())
}

enum BondChoice {
    Boundary(VertexId),
    Inner(VertexId, VertexId),
}

struct DcEvaluator<'a> {
    m: &'a ModelParams,
    memo: Option<HashMap<BoundaryGraph, QfScalar>>,
    rng: Option<ChaCha8Rng>,
}

impl DcEvaluator<'_> {
    fn z(&mut self, g: BoundaryGraph) -> QfScalar {
        let f = self.m.f();
        let mut factor = QfScalar::one(f);
        let mut g = g;
        // pull out everything with a forced weight before branching
        loop {
            let mut changed = false;
            let (stripped, free, _wall) = g.strip_isolated();
            if free > 0 || stripped.vertices().len() != g.vertices().len() {
                factor = &factor * &self.m.f_scalar().pow(free as u64);
                g = stripped;
                changed = true;
            }
            if let Some((u, v)) = g
                .inner_bonds()
                .iter()
                .find(|(u, v)| u == v)
                .cloned()
            {
                g = g.delete_inner(&u, &v).expect("self-loop present");
                factor = &factor * &self.m.one_plus_b();
                changed = true;
            }
            if let Some(v) = g
                .boundary_bonds()
                .iter()
                .find(|v| g.is_wall(v))
                .cloned()
            {
                g = g.delete_boundary(&v).expect("bond present");
                // delta(0,0) branch: C + D, which is exactly 1
                factor = &factor * &(self.m.c() + self.m.one_minus_c());
                changed = true;
            }
            if !changed {
                break;
            }
        }
        if g.is_empty() {
            return factor; // the empty graph has the single empty state
        }
        if let Some(memo) = &self.memo {
            if let Some(hit) = memo.get(&g) {
                return &factor * hit;
            }
        }
        let choice = self.pick_bond(&g);
        let core = match choice {
            BondChoice::Boundary(v) => {
                let deleted = self.z(g.delete_boundary(&v).expect("bond present"));
                let contracted = self.z(g.contract_boundary(&v).expect("bond present"));
                &(self.m.c() * &deleted) + &(self.m.one_minus_c() * &contracted)
            }
            BondChoice::Inner(u, v) => {
                let deleted = self.z(g.delete_inner(&u, &v).expect("bond present"));
                let contracted = self.z(g.contract_inner(&u, &v).expect("bond present"));
                &deleted + &(self.m.b() * &contracted)
            }
        };
        if let Some(memo) = &mut self.memo {
            memo.insert(g, core.clone());
        }
        &factor * &core
    }

    fn pick_bond(&mut self, g: &BoundaryGraph) -> BondChoice {
        match &mut self.rng {
            None => {
                if let Some(v) = g.boundary_bonds().first() {
                    BondChoice::Boundary(v.clone())
                } else {
                    let (u, v) = g.inner_bonds()[0].clone();
                    BondChoice::Inner(u, v)
                }
            }
            Some(rng) => {
                let mut all: Vec<BondChoice> = g
                    .boundary_bonds()
                    .iter()
                    .map(|v| BondChoice::Boundary(v.clone()))
                    .chain(
                        g.inner_bonds()
                            .iter()
                            .map(|(u, v)| BondChoice::Inner(u.clone(), v.clone())),
                    )
                    .collect();
                all.shuffle(rng);
                all.into_iter().next().expect("graph has bonds")
            }
        }
    }
}
