//! The cell grid must agree with the quadratic all-pairs scan exactly.
//!
//! Both sides use the same squared-distance predicate, so agreement is
//! set-equality, not approximate.

use epi_engine::{CellGrid, KeyedRng, Stream};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn brute_force_pairs(x: &[f64], y: &[f64], radius: f64) -> BTreeSet<(u32, u32)> {
    let mut pairs = BTreeSet::new();
    for a in 0..x.len() {
        for b in a + 1..x.len() {
            let dx = x[a] - x[b];
            let dy = y[a] - y[b];
            // Contact requires strictly less than the radius.
            if dx * dx + dy * dy < radius * radius {
                pairs.insert((a as u32, b as u32));
            }
        }
    }
    pairs
}

fn grid_pairs(x: &[f64], y: &[f64], side: f64, radius: f64) -> BTreeSet<(u32, u32)> {
    let mut grid = CellGrid::new(x.len(), side, radius);
    grid.rebuild(x, y);
    let mut pairs = BTreeSet::new();
    grid.for_each_pair(x, y, radius, |a, b| {
        let inserted = pairs.insert((a.min(b), a.max(b)));
        assert!(inserted, "pair ({}, {}) visited twice", a, b);
    });
    pairs
}

fn random_positions(n: usize, side: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let rng = KeyedRng::new(seed);
    let x = (0..n).map(|a| side * rng.unit(Stream::Placement, a as u64, 0, 0)).collect();
    let y = (0..n).map(|a| side * rng.unit(Stream::Placement, a as u64, 0, 1)).collect();
    (x, y)
}

#[test]
fn pair_enumeration_agrees_across_sizes_and_radii() {
    for &(n, side, radius) in &[
        (1usize, 1.0, 0.013),
        (2, 1.0, 0.9),
        (57, 1.0, 0.013),
        (239, 0.5, 0.05),
        (500, 2.0, 0.013),
        (500, 1.0, 0.3),
        (400, 1.0, 0.11),
    ] {
        for seed in [1, 2, 3] {
            let (x, y) = random_positions(n, side, seed);
            assert_eq!(
                grid_pairs(&x, &y, side, radius),
                brute_force_pairs(&x, &y, radius),
                "n={} side={} radius={} seed={}",
                n,
                side,
                radius,
                seed
            );
        }
    }
}

#[test]
fn agents_on_the_boundary_are_indexed() {
    // Corners and edges exercise the fold of coordinate side into the last
    // cell row.
    let x = vec![0.0, 1.0, 1.0, 0.0, 0.9999, 0.5];
    let y = vec![0.0, 0.0, 1.0, 1.0, 1.0, 0.5];
    assert_eq!(grid_pairs(&x, &y, 1.0, 0.013), brute_force_pairs(&x, &y, 0.013));
    assert_eq!(grid_pairs(&x, &y, 1.0, 0.77), brute_force_pairs(&x, &y, 0.77));
}

#[test]
fn neighbor_query_agrees_with_brute_force() {
    let (x, y) = random_positions(300, 1.0, 9);
    let radius = 0.05;
    let mut grid = CellGrid::new(300, 1.0, radius);
    grid.rebuild(&x, &y);
    for anchor in 0..300u32 {
        let mut from_grid = Vec::new();
        grid.for_each_neighbor(&x, &y, radius, x[anchor as usize], y[anchor as usize], anchor, |b| {
            from_grid.push(b)
        });
        from_grid.sort_unstable();
        let mut expected = Vec::new();
        for b in 0..300u32 {
            if b == anchor {
                continue;
            }
            let dx = x[b as usize] - x[anchor as usize];
            let dy = y[b as usize] - y[anchor as usize];
            if dx * dx + dy * dy < radius * radius {
                expected.push(b);
            }
        }
        assert_eq!(from_grid, expected, "anchor {}", anchor);
    }
}

proptest! {
    #[test]
    fn pair_enumeration_matches_on_arbitrary_configurations(
        positions in prop::collection::vec((0.0..=1.0f64, 0.0..=1.0f64), 1..120),
        radius in 0.011..0.45f64,
    ) {
        let x: Vec<f64> = positions.iter().map(|p| p.0).collect();
        let y: Vec<f64> = positions.iter().map(|p| p.1).collect();
        prop_assert_eq!(grid_pairs(&x, &y, 1.0, radius), brute_force_pairs(&x, &y, radius));
    }
}
