//! Property tests: ring axioms for the coefficient field, canonical-form
//! uniqueness, and the cross-method equalities on randomized graphs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use pottsb::graph::BoundaryGraph;
use pottsb::model::make_model;
use pottsb::partition::{
    brute_force_z, brute_force_z_opts, deletion_contraction_z, deletion_contraction_z_opts,
    BondSelection, DcOptions, EnumerationOptions,
};
use pottsb::qf::QfScalar;
use pottsb::tlb::{AlgebraElement, BlobDiagram, LoopWeights};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn arb_scalar(f: u64) -> impl Strategy<Value = QfScalar> {
    (arb_rational(), arb_rational()).prop_map(move |(a, b)| QfScalar::new(a, b, f))
}

proptest! {
    #[test]
    fn ring_axioms(
        (x, y, z) in (arb_scalar(3), arb_scalar(3), arb_scalar(3))
    ) {
        // associativity
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        // commutativity
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        // distributivity
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn inverses_multiply_to_one(x in arb_scalar(5)) {
        prop_assume!(!x.is_zero());
        prop_assert!((&x * &x.inv()).is_one());
    }

    #[test]
    fn canonical_form_is_unique(a in arb_rational(), b in arb_rational()) {
        // build the same value along two different arithmetic routes
        let direct = QfScalar::new(a.clone(), b.clone(), 2);
        let split = &QfScalar::from_rational(a, 2)
            + &(&QfScalar::from_rational(b, 2) * &QfScalar::sqrt_f(2));
        prop_assert_eq!(direct, split);
    }

    #[test]
    fn perfect_square_fold(a in arb_rational(), b in arb_rational()) {
        let s = QfScalar::new(a, b, 9);
        prop_assert!(s.radical_part().is_zero());
    }

    #[test]
    fn render_parse_round_trip(x in arb_scalar(7)) {
        let rendered = x.to_string();
        prop_assert_eq!(QfScalar::parse(&rendered, 7).unwrap(), x);
    }

    #[test]
    fn float_agrees_with_exact(a in arb_rational(), b in arb_rational()) {
        let s = QfScalar::new(a.clone(), b.clone(), 2);
        let direct = s.to_f64();
        let parts = QfScalar::from_rational(a, 2).to_f64()
            + QfScalar::from_rational(b, 2).to_f64() * 2f64.sqrt();
        prop_assert!((direct - parts).abs() <= 1e-9 * (1.0 + direct.abs()));
    }
}

/// A random small boundary graph described by plain data, so proptest can
/// shrink it.
#[derive(Debug, Clone)]
struct GraphSpec {
    vertices: usize,
    wall_mask: u8,
    bonds: Vec<(usize, usize)>,
    boundary: Vec<usize>,
}

fn arb_graph() -> impl Strategy<Value = GraphSpec> {
    (1usize..=4)
        .prop_flat_map(|vertices| {
            (
                Just(vertices),
                any::<u8>(),
                proptest::collection::vec((0..vertices, 0..vertices), 0..=6),
                proptest::collection::vec(0..vertices, 0..=3),
            )
        })
        .prop_map(|(vertices, wall_mask, bonds, boundary)| GraphSpec {
            vertices,
            wall_mask,
            bonds,
            boundary,
        })
}

fn build_graph(spec: &GraphSpec) -> BoundaryGraph {
    let mut g = BoundaryGraph::new();
    let name = |i: usize| format!("v{i}");
    for i in 0..spec.vertices {
        if spec.wall_mask & (1 << i) != 0 {
            g.add_wall_vertex(name(i));
        } else {
            g.add_vertex(name(i));
        }
    }
    for (u, v) in &spec.bonds {
        g.add_inner_bond(name(*u), name(*v)).unwrap();
    }
    for v in &spec.boundary {
        g.add_boundary_bond(name(*v)).unwrap();
    }
    g
}

fn arb_model_params() -> impl Strategy<Value = (u64, BigRational, BigRational)> {
    (
        1u64..=4,
        arb_rational(),
        arb_rational().prop_filter("C must be nonzero", |c| !c.is_zero()),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deletion_contraction_matches_enumeration(
        spec in arb_graph(),
        (f, b, c) in arb_model_params()
    ) {
        let g = build_graph(&spec);
        let m = make_model(f, b, c, rat(1, 1)).unwrap();
        let brute = brute_force_z(&g, &m).unwrap();
        prop_assert_eq!(brute, deletion_contraction_z(&g, &m));
    }

    #[test]
    fn recursion_order_is_irrelevant(
        spec in arb_graph(),
        (f, b, c) in arb_model_params(),
        seed in any::<u64>()
    ) {
        let g = build_graph(&spec);
        let m = make_model(f, b, c, rat(1, 1)).unwrap();
        let base = deletion_contraction_z(&g, &m);
        let shuffled = deletion_contraction_z_opts(
            &g,
            &m,
            &DcOptions { memoize: false, selection: BondSelection::Seeded(seed) },
        );
        let memoized = deletion_contraction_z_opts(
            &g,
            &m,
            &DcOptions { memoize: true, selection: BondSelection::Deterministic },
        );
        prop_assert_eq!(&base, &shuffled);
        prop_assert_eq!(&base, &memoized);
    }

    #[test]
    fn worker_count_never_changes_the_sum(
        spec in arb_graph(),
        workers in 1usize..=6
    ) {
        let g = build_graph(&spec);
        let m = make_model(3, rat(-1, 2), rat(1, 3), rat(1, 1)).unwrap();
        let single = brute_force_z(&g, &m).unwrap();
        let multi = brute_force_z_opts(
            &g,
            &m,
            &EnumerationOptions { budget: 2_000_000, workers },
        )
        .unwrap();
        prop_assert_eq!(single, multi);
    }

    #[test]
    fn physical_parameters_give_positive_z(
        spec in arb_graph(),
        bn in 1i64..=19,
        cn in 1i64..=19
    ) {
        // B in (-1, 0) and C in (0, 1): every Boltzmann weight is positive
        let g = build_graph(&spec);
        let m = make_model(2, rat(-bn, 20), rat(cn, 20), rat(1, 1)).unwrap();
        let z = brute_force_z(&g, &m).unwrap();
        prop_assert!(z.is_positive());
    }
}

fn arb_generator_word() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..4, 1..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diagram_multiplication_is_associative(
        wa in arb_generator_word(),
        wb in arb_generator_word(),
        wc in arb_generator_word()
    ) {
        let n = 4;
        let f = 2;
        let w = LoopWeights::new(
            QfScalar::sqrt_f(f),
            QfScalar::new(rat(3, 1), rat(1, 2), f),
            QfScalar::new(rat(-1, 2), rat(2, 3), f),
        )
        .unwrap();
        let element = |word: &[usize]| {
            word.iter().fold(AlgebraElement::identity(n, f), |acc, &i| {
                acc.mul(&AlgebraElement::generator(n, i, f).unwrap(), &w).unwrap()
            })
        };
        let (a, b, c) = (element(&wa), element(&wb), element(&wc));
        let left = a.mul(&b, &w).unwrap().mul(&c, &w).unwrap();
        let right = a.mul(&b.mul(&c, &w).unwrap(), &w).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn products_stay_canonical(wa in arb_generator_word(), wb in arb_generator_word()) {
        // every diagram in a product of generators is planar with blobs
        // only on west-exposed arcs; BlobDiagram::new revalidates
        let n = 4;
        let f = 2;
        let w = LoopWeights::new(
            QfScalar::sqrt_f(f),
            QfScalar::from_integer(3, f),
            QfScalar::from_integer(5, f),
        )
        .unwrap();
        let element = |word: &[usize]| {
            word.iter().fold(AlgebraElement::identity(n, f), |acc, &i| {
                acc.mul(&AlgebraElement::generator(n, i, f).unwrap(), &w).unwrap()
            })
        };
        let product = element(&wa).mul(&element(&wb), &w).unwrap();
        for (diagram, _) in product.terms() {
            let rebuilt = BlobDiagram::new(
                diagram.strands(),
                diagram.arcs().iter().map(|a| (a.lo, a.hi, a.blob)),
            );
            prop_assert!(rebuilt.is_ok());
        }
    }
}
