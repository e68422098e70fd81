//! Total power over a shared (k, d) plane for a fixed set of positions.

use std::io::Write;

use rayon::prelude::*;

use crate::farm::{FarmLayout, FarmObjective, Objective, Pto, DEFAULT_PTO};

/// `lo, lo + step, lo + 2·step, …` up to and including `hi`.
pub fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "axis step must be positive");
    let count = ((hi - lo) / step).floor() as usize + 1;
    (0..count).map(|i| lo + i as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeCell {
    pub k: f64,
    pub d: f64,
    /// Farm power (W); `-∞` when the model rejected the cell.
    pub power: f64,
    /// Power minus the distance penalty of the fixed positions.
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    pub k_axis: Vec<f64>,
    pub d_axis: Vec<f64>,
    /// Row-major with `k` outer: cell `(i, j)` sits at `i * d_axis.len() + j`.
    pub cells: Vec<LandscapeCell>,
    /// The same layout at the default PTO setting, which is off the lattice.
    pub default_cell: LandscapeCell,
}

impl Landscape {
    /// Highest-fitness cell; ties go to the first in row-major order.
    pub fn argmax(&self) -> &LandscapeCell {
        let mut best = &self.cells[0];
        for c in &self.cells[1..] {
            if c.fitness > best.fitness {
                best = c;
            }
        }
        best
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,d,power")?;
        for c in &self.cells {
            writeln!(w, "{},{},{}", c.k, c.d, c.power)?;
        }
        Ok(())
    }
}

fn cell(objective: &FarmObjective, layout: &FarmLayout, pto: Pto) -> LandscapeCell {
    let s = objective.score(&layout.with_uniform_pto(pto, &objective.bounds));
    LandscapeCell {
        k: pto.k,
        d: pto.d,
        power: s.outcome.map_or(f64::NEG_INFINITY, |r| r.total_power),
        fitness: s.fitness,
    }
}

/// Scores `layout` with every buoy set to each lattice `(k, d)` in turn.
/// Cells are evaluated in parallel on the current rayon pool; the result
/// does not depend on the pool size.
pub fn landscape(objective: &FarmObjective, layout: &FarmLayout, step: f64) -> Landscape {
    let b = &objective.bounds;
    let k_axis = axis(b.spring.0, b.spring.1, step);
    let d_axis = axis(b.damper.0, b.damper.1, step);
    let grid: Vec<Pto> = k_axis
        .iter()
        .flat_map(|&k| d_axis.iter().map(move |&d| Pto::new(k, d)))
        .collect();
    let cells = grid.par_iter().map(|&p| cell(objective, layout, p)).collect();
    Landscape {
        k_axis,
        d_axis,
        cells,
        default_cell: cell(objective, layout, DEFAULT_PTO),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farm::{FarmBounds, Position};
    use crate::hydro::HydroModel;
    use crate::scenario::bundled;

    #[test]
    fn ten_thousand_step_gives_forced_lattice() {
        let b = FarmBounds::for_buoys(4);
        let k = axis(b.spring.0, b.spring.1, 10_000.0);
        let d = axis(b.damper.0, b.damper.1, 10_000.0);
        assert_eq!(k.len(), 55);
        assert_eq!((k[0], k[1], k[54]), (1.0, 10_001.0, 540_001.0));
        assert_eq!(d.len(), 36);
        assert_eq!((d[0], d[35]), (50_000.0, 400_000.0));
    }

    #[test]
    fn coarse_grid_is_k_outer_and_finite() {
        let b = FarmBounds::for_buoys(2);
        let obj = FarmObjective::new(HydroModel::default(), bundled::monochromatic(), b);
        let l = FarmLayout::new(
            vec![Position::new(20.0, 20.0), Position::new(150.0, 90.0)],
            vec![crate::farm::DEFAULT_PTO; 2],
            &b,
        )
        .unwrap();
        let g = landscape(&obj, &l, 100_000.0);
        assert_eq!(g.cells.len(), g.k_axis.len() * g.d_axis.len());
        assert_eq!(g.cells[1].k, g.k_axis[0]);
        assert_eq!(g.cells[1].d, g.d_axis[1]);
        assert!(g.cells.iter().all(|c| c.power.is_finite() && c.power == c.fitness));
        assert!(g.argmax().fitness >= g.cells[0].fitness);
        let mut csv = Vec::new();
        g.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), g.cells.len() + 1);
        assert!(text.starts_with("k,d,power\n1,50000,"));
    }
}
