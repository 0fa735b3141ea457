//! Cross-checks the least-squares estimators against independent oracles:
//! the normal equations solved by Cholesky factorization, and the within
//! transformation for two-way fixed effects.

use epi_econ::{
    did_estimate, ols, within_delta, DidOutcome, DidSpec, PanelDataset, PanelRow,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Deterministic pseudo-random doubles in [lo, hi) from a xorshift stream.
struct TestStream(u64);

impl TestStream {
    fn next_f64(&mut self, lo: f64, hi: f64) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        lo + (hi - lo) * (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[test]
fn qr_solution_matches_the_normal_equations() {
    let mut stream = TestStream(0x9e3779b97f4a7c15);
    let rows = 100;
    let cols = 5;
    let design = DMatrix::from_fn(rows, cols, |r, c| {
        if c == 0 {
            1.0
        } else {
            stream.next_f64(-3.0, 3.0) + 0.1 * r as f64 * (c as f64).sqrt()
        }
    });
    let response = DVector::from_fn(rows, |r, _| stream.next_f64(-10.0, 10.0) + r as f64);

    let names: Vec<String> = (0..cols).map(|c| format!("x{c}")).collect();
    let fit = ols(names, design.clone(), response.clone()).unwrap();

    // Oracle: (X'X) b = X'y solved by Cholesky factorization.
    let xtx = design.transpose() * &design;
    let xty = design.transpose() * &response;
    let oracle = xtx.cholesky().expect("X'X is positive definite").solve(&xty);

    for c in 0..cols {
        assert!(
            (fit.coefficients[c] - oracle[c]).abs() < 1e-8,
            "column {c}: qr {} vs normal equations {}",
            fit.coefficients[c],
            oracle[c]
        );
    }
}

/// Balanced panel with a noisy outcome, so estimator agreement checks the
/// algebra rather than both landing on an exact constant.
fn noisy_panel() -> PanelDataset {
    let mut stream = TestStream(0x51a7b2c93d4e5f60);
    let mut rows = Vec::new();
    for city in 0..8u32 {
        let treated_from = if city < 4 { Some(8 + 4 * city) } else { None };
        for day in 0..40u32 {
            let treated = treated_from.is_some_and(|t0| day >= t0);
            let y = stream.next_f64(-1.0, 1.0)
                + 0.3 * city as f64
                + 0.05 * day as f64
                - 0.4 * f64::from(treated);
            rows.push(PanelRow {
                city_id: city,
                day,
                density: 0.4 + 0.15 * city as f64,
                n: 26_600,
                treated,
                i_count: 50,
                s_count: 26_500,
                r_count: 50,
                i_frac: y,
                s_frac: 0.99,
                growth: Some(y * 0.1),
                contacts: 1.0 - 0.2 * f64::from(treated) + stream.next_f64(-0.01, 0.01),
            });
        }
    }
    PanelDataset { rows }
}

#[test]
fn dummy_encoding_matches_the_within_transformation() {
    let panel = noisy_panel();
    for outcome in [DidOutcome::InfectedFrac, DidOutcome::Contacts, DidOutcome::Growth] {
        for spec in [
            DidSpec::two_way(outcome),
            DidSpec::with_density_interaction(outcome),
        ] {
            let dummy =
                did_estimate(&panel, &spec).unwrap().coefficient("treated").unwrap();
            let within = within_delta(&panel, &spec).unwrap();
            assert!(
                (dummy - within).abs() < 1e-8,
                "dummy {dummy} vs within {within} for {spec:?}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Least-squares residuals are orthogonal to every regressor column.
    #[test]
    fn residuals_are_orthogonal_to_every_column(
        seed in 1u64..u64::MAX,
        rows in 8usize..40,
        cols in 2usize..5,
    ) {
        let mut stream = TestStream(seed);
        let design = DMatrix::from_fn(rows, cols, |_, c| {
            if c == 0 { 1.0 } else { stream.next_f64(-4.0, 4.0) }
        });
        let response = DVector::from_fn(rows, |_, _| stream.next_f64(-4.0, 4.0));
        let names: Vec<String> = (0..cols).map(|c| format!("x{c}")).collect();
        let Ok(fit) = ols(names, design.clone(), response) else {
            // Randomly collinear draws are legal inputs but prove nothing.
            return Ok(());
        };
        let resid = DVector::from_vec(fit.residuals.clone());
        for c in 0..cols {
            let col = design.column(c);
            let inner = resid.dot(&col);
            prop_assert!(inner.abs() <= 1e-8 * resid.norm().max(1.0) * col.norm());
        }
    }
}
