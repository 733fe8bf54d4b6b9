//! Randomized properties shared by the acceptance runner and `properties.rs`.

use bncurve::bn_curve::{build_bn_curve, export_graph};
use bncurve::chain_model::{component_ids, trajectory, ChainSpec};
use bncurve::combinatorics::catalan;
use bncurve::gonality5::{lin_equiv, Divisor, MarkedPoint};
use bncurve::Count;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn report<T: std::fmt::Debug>(
    r: Result<(), proptest::test_runner::TestError<T>>,
) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// `c_{n+1} = sum_k c_k c_{n-k}`.
pub fn catalan_recursion() -> Result<(), String> {
    report(runner(64).run(&(0u32..60), |n| {
        let rhs: Count = (0..=n).map(|k| catalan(k) * catalan(n - k)).sum();
        prop_assert_eq!(catalan(n + 1), rhs);
        Ok(())
    }))
}

/// Distinct components of `W^1_{a+2}` have distinct bundle tuples.
pub fn injectivity() -> Result<(), String> {
    let tuples: Vec<Vec<_>> = (1..=5)
        .map(|a| {
            let c = ChainSpec::rho_one(a).unwrap();
            component_ids(&c)
                .unwrap()
                .iter()
                .map(|id| {
                    (
                        id.to_string(),
                        trajectory(&c, &id.choices()).unwrap().bundles,
                    )
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = tuples.iter().map(Vec::len).collect();
    let strategy = (0..sizes.len()).prop_flat_map(move |k| (Just(k), 0..sizes[k], 0..sizes[k]));
    report(runner(512).run(&strategy, |(k, i, j)| {
        prop_assume!(i != j);
        let (ref ni, ref ti) = tuples[k][i];
        let (ref nj, ref tj) = tuples[k][j];
        prop_assert_ne!(ti, tj, "{} and {}", ni, nj);
        Ok(())
    }))
}

fn point_strategy() -> impl Strategy<Value = MarkedPoint> {
    prop_oneof![
        Just(MarkedPoint::y("E")),
        Just(MarkedPoint::z("E")),
        (0u32..6, 0u32..6, 0u32..6)
            .prop_filter("Y and Z distinct", |(_, y, z)| y != z)
            .prop_map(|(u, y, z)| MarkedPoint::from_offset("E", &format!("X{u}{y}{z}"), u, y, z)),
    ]
}

fn divisor_strategy() -> impl Strategy<Value = Divisor> {
    prop::collection::vec((point_strategy(), 1u32..3), 1..4).prop_map(|terms| {
        terms
            .iter()
            .fold(Divisor::new("E"), |d, (p, m)| d.plus(p, *m))
    })
}

/// Reflexivity, symmetry and transitivity of the oracle on fully marked
/// divisors.
pub fn oracle_laws() -> Result<(), String> {
    let strategy = (divisor_strategy(), divisor_strategy(), divisor_strategy());
    report(runner(1024).run(&strategy, |(p, q, s)| {
        let eq = |a: &Divisor, b: &Divisor| {
            lin_equiv(a, b).map_err(|e| TestCaseError::fail(e.to_string()))
        };
        prop_assert!(eq(&p, &p)?);
        prop_assert_eq!(eq(&p, &q)?, eq(&q, &p)?);
        if eq(&p, &q)? && eq(&q, &s)? {
            prop_assert!(eq(&p, &s)?);
        }
        // equivalence depends only on the class
        if p.degree() == q.degree() {
            prop_assert_eq!(eq(&p, &q)?, p.class() == q.class());
        }
        Ok(())
    }))
}

/// Rebuilding and exporting the same curve gives identical bytes.
pub fn export_determinism() -> Result<(), String> {
    let strategy = (1u32..=4, prop_oneof![Just("json"), Just("dot")]);
    report(runner(16).run(&strategy, |(a, format)| {
        let once = export_graph(&build_bn_curve(a, false).unwrap(), format).unwrap();
        let twice = export_graph(&build_bn_curve(a, false).unwrap(), format).unwrap();
        prop_assert_eq!(&once, &twice);
        Ok(())
    }))
}
