//! Uniform cell grid for radius-bounded neighbor search.
//!
//! Agents are bucketed into square cells at least one contact radius wide, so
//! every pair within the radius lies in the same or an adjacent cell. The
//! bucket layout is a counting-sort CSR: one pass counts occupancy, a prefix
//! sum lays out ranges, a second pass scatters agent ids. Rebuilding reuses
//! all buffers, so the per-day cost is two linear passes.

/// Cell-bucketed spatial index over agent positions.
pub struct CellGrid {
    side: f64,
    cells_per_axis: usize,
    inv_cell: f64,
    starts: Vec<u32>,
    order: Vec<u32>,
    cell_of: Vec<u32>,
    cursor: Vec<u32>,
}

impl CellGrid {
    /// Lays out a grid for `n` agents on a `side` × `side` city where
    /// neighbor queries never exceed `radius`. Requires 0 < radius < side.
    pub fn new(n: usize, side: f64, radius: f64) -> Self {
        assert!(radius > 0.0 && radius < side, "radius must lie in (0, side)");
        // More cells than agents only adds empty buckets, so the axis count
        // is capped near sqrt(n). Capping widens cells past the radius,
        // which keeps the same-or-adjacent-cell invariant intact.
        let cap = 2 * ((n as f64).sqrt().ceil() as usize).max(1);
        let cells_per_axis = ((side / radius).floor() as usize).clamp(1, cap);
        let cells = cells_per_axis * cells_per_axis;
        Self {
            side,
            cells_per_axis,
            inv_cell: cells_per_axis as f64 / side,
            starts: vec![0; cells + 1],
            order: vec![0; n],
            cell_of: vec![0; n],
            cursor: vec![0; cells],
        }
    }

    #[inline]
    fn axis_cell(&self, coord: f64) -> usize {
        // Positions sit in [0, side]; the top edge folds into the last cell.
        ((coord * self.inv_cell) as usize).min(self.cells_per_axis - 1)
    }

    /// Rebuilds the buckets from current positions.
    pub fn rebuild(&mut self, x: &[f64], y: &[f64]) {
        assert_eq!(x.len(), self.order.len());
        assert_eq!(y.len(), self.order.len());
        let m = self.cells_per_axis;
        self.starts.fill(0);
        for a in 0..x.len() {
            let cell = (self.axis_cell(y[a]) * m + self.axis_cell(x[a])) as u32;
            self.cell_of[a] = cell;
            self.starts[cell as usize + 1] += 1;
        }
        for c in 0..m * m {
            self.starts[c + 1] += self.starts[c];
            self.cursor[c] = self.starts[c];
        }
        for a in 0..x.len() {
            let cell = self.cell_of[a] as usize;
            self.order[self.cursor[cell] as usize] = a as u32;
            self.cursor[cell] += 1;
        }
    }

    #[inline]
    fn cell_agents(&self, cx: usize, cy: usize) -> &[u32] {
        let c = cy * self.cells_per_axis + cx;
        &self.order[self.starts[c] as usize..self.starts[c + 1] as usize]
    }

    /// Visits every unordered agent pair within `radius` exactly once.
    ///
    /// Within-cell pairs follow bucket order; cross-cell pairs come from the
    /// forward stencil (east, south-west, south, south-east), which covers
    /// each adjacent cell pair from exactly one side.
    pub fn for_each_pair<F: FnMut(u32, u32)>(&self, x: &[f64], y: &[f64], radius: f64, mut f: F) {
        let m = self.cells_per_axis;
        let r2 = radius * radius;
        // Contact requires strictly less than the radius.
        let close = |a: u32, b: u32| {
            let dx = x[a as usize] - x[b as usize];
            let dy = y[a as usize] - y[b as usize];
            dx * dx + dy * dy < r2
        };
        for cy in 0..m {
            for cx in 0..m {
                let here = self.cell_agents(cx, cy);
                for (k, &a) in here.iter().enumerate() {
                    for &b in &here[k + 1..] {
                        if close(a, b) {
                            f(a, b);
                        }
                    }
                }
                let mut visit = |nx: usize, ny: usize| {
                    for &a in here {
                        for &b in self.cell_agents(nx, ny) {
                            if close(a, b) {
                                f(a, b);
                            }
                        }
                    }
                };
                if cx + 1 < m {
                    visit(cx + 1, cy);
                }
                if cy + 1 < m {
                    if cx > 0 {
                        visit(cx - 1, cy + 1);
                    }
                    visit(cx, cy + 1);
                    if cx + 1 < m {
                        visit(cx + 1, cy + 1);
                    }
                }
            }
        }
    }

    /// Visits every agent within `radius` of the point, except `exclude`.
    pub fn for_each_neighbor<F: FnMut(u32)>(
        &self,
        x: &[f64],
        y: &[f64],
        radius: f64,
        px: f64,
        py: f64,
        exclude: u32,
        mut f: F,
    ) {
        let m = self.cells_per_axis;
        let r2 = radius * radius;
        let cx = self.axis_cell(px.clamp(0.0, self.side));
        let cy = self.axis_cell(py.clamp(0.0, self.side));
        for ny in cy.saturating_sub(1)..=(cy + 1).min(m - 1) {
            for nx in cx.saturating_sub(1)..=(cx + 1).min(m - 1) {
                for &b in self.cell_agents(nx, ny) {
                    if b == exclude {
                        continue;
                    }
                    let dx = x[b as usize] - px;
                    let dy = y[b as usize] - py;
                    if dx * dx + dy * dy < r2 {
                        f(b);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_grid_enumerates_all_pairs() {
        // radius barely below side forces a 1x1 grid.
        let x = [0.1, 0.2, 0.8];
        let y = [0.1, 0.2, 0.8];
        let mut grid = CellGrid::new(3, 1.0, 0.9);
        grid.rebuild(&x, &y);
        let mut pairs = Vec::new();
        grid.for_each_pair(&x, &y, 0.9, |a, b| pairs.push((a.min(b), a.max(b))));
        pairs.sort_unstable();
        // Agents 0 and 2 sit 0.7 * sqrt(2) apart, just beyond the radius.
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn boundary_positions_fold_into_edge_cells() {
        let x = [0.0, 1.0, 0.9999];
        let y = [0.0, 1.0, 1.0];
        let mut grid = CellGrid::new(3, 1.0, 0.013);
        grid.rebuild(&x, &y);
        let mut seen = Vec::new();
        grid.for_each_pair(&x, &y, 0.013, |a, b| seen.push((a.min(b), a.max(b))));
        assert_eq!(seen, vec![(1, 2)]);
    }

    #[test]
    fn contact_threshold_is_strict() {
        let radius = 0.013f64;
        let x = [0.5, 0.5 + radius, 0.5 + radius - 1e-9];
        let y = [0.5, 0.5, 0.5];
        let mut grid = CellGrid::new(3, 1.0, radius);
        grid.rebuild(&x, &y);
        let mut pairs = Vec::new();
        grid.for_each_pair(&x, &y, radius, |a, b| pairs.push((a.min(b), a.max(b))));
        pairs.sort_unstable();
        // Exactly at the radius is not a contact; just inside is.
        assert_eq!(pairs, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn microscopic_radius_keeps_the_grid_small_and_correct() {
        let x = [0.5, 0.5 + 5e-10, 0.9];
        let y = [0.5, 0.5, 0.9];
        let mut grid = CellGrid::new(3, 1.0, 1e-9);
        grid.rebuild(&x, &y);
        let mut pairs = Vec::new();
        grid.for_each_pair(&x, &y, 1e-9, |a, b| pairs.push((a.min(b), a.max(b))));
        assert_eq!(pairs, vec![(0, 1)]);
    }

    #[test]
    fn neighbor_query_excludes_the_anchor_agent() {
        let x = [0.5, 0.505, 0.6];
        let y = [0.5, 0.5, 0.5];
        let mut grid = CellGrid::new(3, 1.0, 0.013);
        grid.rebuild(&x, &y);
        let mut hits = Vec::new();
        grid.for_each_neighbor(&x, &y, 0.013, x[0], y[0], 0, |b| hits.push(b));
        assert_eq!(hits, vec![1]);
    }
}
