//! Comparison metrics between runs, conservation and symmetry checks, and
//! resolution studies.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpinorField;
use crate::grid::GridSpec;
use crate::hydro::{madelung_fields, shock_initial_condition, HydroFields, ShockParams, VACUUM_THRESHOLD};
use crate::walk::{evolve_spectral, WalkParams};

/// Pointwise errors of a field `q` against a reference `c`, in order of
/// increasing `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub x: Vec<f64>,
    /// `100 |q - c| / |c|`; `None` where the reference is vacuum.
    pub e1: Vec<Option<f64>>,
    /// `|q - c|`.
    pub e2: Vec<f64>,
    pub e1_mean: f64,
    pub e1_max: f64,
    /// Mean of `e1` weighted by the reference charge density.
    pub e1_weighted_mean: f64,
    pub e2_mean: f64,
    pub e2_max: f64,
    /// Points excluded from the `e1` aggregates.
    pub masked: usize,
    pub metadata: BTreeMap<String, String>,
}

impl ErrorReport {
    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    /// CSV with header `x,e1,e2`; masked `e1` entries are left empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,e1,e2")?;
        for i in 0..self.x.len() {
            let e1 = self.e1[i].map(|v| format!("{v:.16e}")).unwrap_or_default();
            writeln!(w, "{:.16e},{},{:.16e}", self.x[i], e1, self.e2[i])?;
        }
        Ok(())
    }
}

/// Relative (`e1`, percent) and absolute (`e2`) pointwise errors.
pub fn error_metrics(q: &SpinorField, c: &SpinorField) -> Result<ErrorReport> {
    if q.grid() != c.grid() {
        return Err(Error::GridMismatch(q.grid().len(), c.grid().len()));
    }
    let grid = *c.grid();
    let (qv, cv) = (q.physical(), c.physical());
    let dens_max = cv.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let cut = VACUUM_THRESHOLD * dens_max;

    let mut x = Vec::with_capacity(grid.len());
    let mut e1 = Vec::with_capacity(grid.len());
    let mut e2 = Vec::with_capacity(grid.len());
    let (mut sum1, mut max1, mut wsum, mut wnorm, mut count) = (0.0, 0.0f64, 0.0, 0.0, 0usize);
    for i in grid.ordered_slots() {
        let diff = qv[i].dist(&cv[i]);
        let dens = cv[i].norm_sqr();
        x.push(grid.position(i));
        e2.push(diff);
        if dens > cut && dens > 0.0 {
            let rel = 100.0 * diff / dens.sqrt();
            e1.push(Some(rel));
            sum1 += rel;
            max1 = max1.max(rel);
            wsum += dens * rel;
            wnorm += dens;
            count += 1;
        } else {
            e1.push(None);
        }
    }
    let len = grid.len() as f64;
    let mean_or_zero = |s: f64, n: f64| if n > 0.0 { s / n } else { 0.0 };
    Ok(ErrorReport {
        e1_mean: mean_or_zero(sum1, count as f64),
        e1_max: max1,
        e1_weighted_mean: mean_or_zero(wsum, wnorm),
        e2_mean: e2.iter().sum::<f64>() / len,
        e2_max: e2.iter().copied().fold(0.0, f64::max),
        masked: grid.len() - count,
        x,
        e1,
        e2,
        metadata: BTreeMap::new(),
    })
}

/// `sum_p |L_p|^2 + |R_p|^2` of the stored amplitudes.
pub fn charge_total(field: &SpinorField) -> f64 {
    field.norm_sqr()
}

/// `max_p |n(x_p) - n(-x_p)|` with periodic reflection.
pub fn symmetry_defect(h: &HydroFields) -> f64 {
    (0..h.len())
        .map(|i| (h.n[i] - h.n[h.grid.mirror(i)]).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub coarse: usize,
    pub fine: usize,
    /// Max-abs density difference on the coarse points.
    pub difference: f64,
    /// Realized times `T eps` of the two runs.
    pub times: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// `log2(d_i / d_{i+1})` for successive rows; `None` when undefined.
    pub orders: Vec<Option<f64>>,
}

impl ConvergenceTable {
    /// Order from the last two differences.
    pub fn final_order(&self) -> Option<f64> {
        self.orders.last().copied().flatten()
    }
}

/// Shock density at time `t` for each grid exponent in `n_exps`, compared
/// pairwise on the shared grid points.
pub fn convergence_study(
    params: &WalkParams,
    sp: &ShockParams,
    t: f64,
    n_exps: &[u32],
) -> Result<ConvergenceTable> {
    if n_exps.len() < 3 {
        return Err(Error::Usage(format!(
            "convergence study needs at least 3 resolutions, got {}",
            n_exps.len()
        )));
    }
    for w in n_exps.windows(2) {
        if w[1] != w[0] && w[1] != w[0] + 1 {
            return Err(Error::Usage(format!(
                "resolutions must double (or repeat): 2^{} then 2^{}",
                w[0], w[1]
            )));
        }
    }
    let mut densities = Vec::with_capacity(n_exps.len());
    for &e in n_exps {
        let grid = GridSpec::new(e)?;
        let steps = grid.steps_for_time(t)?;
        let f0 = shock_initial_condition(&grid, sp)?;
        let h = madelung_fields(&evolve_spectral(&f0, steps, params), params.mass);
        densities.push((grid, grid.time_for_steps(steps), h.n));
    }
    let rows: Vec<ConvergenceRow> = densities
        .windows(2)
        .map(|w| {
            let (gc, tc, nc) = &w[0];
            let (gf, tf, nf) = &w[1];
            let ratio = (gf.len() / gc.len()) as i64;
            let difference = (0..gc.len())
                .map(|i| {
                    let fine = gf.slot(gc.label(i) * ratio).expect("nested grid");
                    (nc[i] - nf[fine]).abs()
                })
                .fold(0.0, f64::max);
            ConvergenceRow {
                coarse: gc.len(),
                fine: gf.len(),
                difference,
                times: (*tc, *tf),
            }
        })
        .collect();
    let orders = rows
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].difference, w[1].difference);
            (a > 0.0 && b > 0.0).then(|| (a / b).log2())
        })
        .collect();
    Ok(ConvergenceTable { rows, orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Spinor;
    use crate::grid::make_grid;
    use num_complex::Complex64;

    fn wave(grid: GridSpec) -> SpinorField {
        SpinorField::from_fn(grid, |p| {
            let x = p as f64 * grid.eps();
            Spinor::new(
                Complex64::new(1.0 + 0.3 * x.cos(), 0.2 * x.sin()),
                Complex64::new(0.5, -0.1 * (2.0 * x).cos()),
            )
        })
    }

    #[test]
    fn identical_fields_have_zero_error() {
        let f = wave(make_grid(5).unwrap());
        let r = error_metrics(&f, &f).unwrap();
        assert!(r.e1.iter().all(|v| *v == Some(0.0)));
        assert!(r.e2.iter().all(|v| *v == 0.0));
        assert_eq!((r.e1_mean, r.e1_max, r.masked), (0.0, 0.0, 0));
    }

    #[test]
    fn uniform_scaling_gives_constant_e1() {
        let g = make_grid(5).unwrap();
        let c = wave(g);
        let values: Vec<Spinor> = c.values().iter().map(|v| v.scale(1.03)).collect();
        let q = SpinorField::new(g, values).unwrap();
        let r = error_metrics(&q, &c).unwrap();
        assert!(r.e1.iter().all(|v| (v.unwrap() - 3.0).abs() < 1e-12));
        assert!((r.e1_weighted_mean - 3.0).abs() < 1e-12);
    }

    #[test]
    fn vacuum_reference_points_are_masked() {
        let g = make_grid(3).unwrap();
        let c = SpinorField::from_fn(g, |p| {
            if p == 1 { Spinor::ZERO } else { Spinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)) }
        });
        let q = SpinorField::from_fn(g, |_| Spinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        let r = error_metrics(&q, &c).unwrap();
        assert_eq!(r.masked, 1);
        let at = r.x.iter().position(|&x| (x - g.eps()).abs() < 1e-15).unwrap();
        assert!(r.e1[at].is_none());
        assert!((r.e2[at] - 1.0).abs() < 1e-15);
        assert_eq!(r.e1_max, 0.0);
        assert!(r.x.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn grid_mismatch() {
        let a = wave(make_grid(3).unwrap());
        let b = wave(make_grid(4).unwrap());
        assert!(matches!(error_metrics(&a, &b), Err(Error::GridMismatch(8, 16))));
    }

    #[test]
    fn csv_layout() {
        let g = make_grid(2).unwrap();
        let f = wave(g);
        let mut buf = Vec::new();
        error_metrics(&f, &f).unwrap().write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "x,e1,e2");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1].split(',').count(), 3);
    }

    #[test]
    fn charge_examples() {
        let g = make_grid(4).unwrap();
        let mut f = wave(g);
        f.normalize().unwrap();
        assert!((charge_total(&f) - 1.0).abs() < 1e-14);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let d = SpinorField::from_fn(g, |p| {
            Spinor::new(if p == 0 { one } else { zero }, if p == 5 { one } else { zero })
        });
        assert_eq!(charge_total(&d), 2.0);
    }

    #[test]
    fn symmetric_density_has_no_defect() {
        let g = make_grid(6).unwrap();
        let f = SpinorField::from_fn(g, |p| {
            let x = p as f64 * g.eps();
            let a = Complex64::new((1.0 + 0.5 * x.cos()).sqrt(), 0.0);
            Spinor::new(a, a)
        });
        let h = madelung_fields(&f, 1.0);
        assert!(symmetry_defect(&h) < 1e-15);
    }

    #[test]
    fn study_validates_resolutions() {
        let p = WalkParams::free(1.0);
        let sp = ShockParams::new(0.1, 1.0).unwrap();
        assert!(matches!(convergence_study(&p, &sp, 0.1, &[5, 6]), Err(Error::Usage(_))));
        assert!(matches!(convergence_study(&p, &sp, 0.1, &[5, 7, 8]), Err(Error::Usage(_))));
    }

    #[test]
    fn repeated_resolution_has_zero_difference() {
        let p = WalkParams::new(2.0, -1.0, 1.0).unwrap();
        let sp = ShockParams::new(0.3, 2.0).unwrap();
        let t = convergence_study(&p, &sp, 0.5, &[6, 6, 6]).unwrap();
        assert!(t.rows.iter().all(|r| r.difference == 0.0));
        assert_eq!(t.orders, vec![None]);
    }

    #[test]
    fn massless_differences_decrease() {
        let p = WalkParams::free(0.0);
        let sp = ShockParams::new(0.3, 0.0).unwrap();
        let t = convergence_study(&p, &sp, 0.7, &[8, 9, 10]).unwrap();
        assert!(t.rows[1].difference <= t.rows[0].difference, "{t:?}");
    }
}
