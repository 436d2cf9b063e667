//! Benchmark fixtures shared by the criterion targets.

use fracml::dynamics::{InitialCondition, MapTriple, SystemSpec};
use fracml::{CirculantSpec, DenseMatrix, FractionalOrder};

pub fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).expect("valid order")
}

pub fn linear_system(n: usize, horizon: usize) -> SystemSpec {
    SystemSpec::linear(
        order(0.7),
        CirculantSpec::new(0.2, -0.3, 0.1, n).expect("non-empty"),
        InitialCondition::around(0.0),
        horizon,
    )
}

pub fn nonlinear_system(n: usize, horizon: usize) -> SystemSpec {
    SystemSpec::nonlinear(
        order(0.8),
        n,
        MapTriple::logistic_circle(0.6, -0.8),
        InitialCondition::around(0.0),
        horizon,
    )
}

/// Deterministic dense test matrix with a spread of complex eigenvalues.
pub fn pseudo_random_matrix(n: usize) -> DenseMatrix {
    let mut state = 0x2545_F491_4F6C_DD1Du64;
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                })
                .collect()
        })
        .collect();
    DenseMatrix::from_rows(rows).expect("square")
}
