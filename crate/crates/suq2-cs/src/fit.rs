//! Least-squares extraction of shell-trace asymptotics.
//!
//! Shell traces of the operators we meet behave like
//!
//!   t(m) ~ sum_p c_p m^p  (+ c_{p,L} m^p ln^L m)  + amp * r^m,   |r| < 1,
//!
//! for integer powers p. The Laurent coefficients carry the pole data of
//! the zeta functions `Trace(T |D|^(-s))`: the residue at `s = p + 1` is
//! exactly `c_p`, log powers feed higher-order poles. One geometric term
//! absorbs the trace-class tails that appear for q > 0.

use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ops::C64;
use crate::shell::ShellSeries;

/// Basis selection for a fit.
#[derive(Debug, Clone)]
pub struct FitModel {
    /// Integer powers of m, e.g. `[2, 1, 0, -1, -2]`.
    pub powers: Vec<i32>,
    /// Highest log power; `0` disables logarithmic terms, `k` adds
    /// `m^p ln^L m` for every power and `1 <= L <= k`.
    pub log_order: u8,
    /// Candidate ratios for a single geometric term `amp * r^m`; the best
    /// one by residual is kept, or none when the list is empty.
    pub geometric: Vec<f64>,
    /// Fit window `[m_lo, m_hi]`; `None` uses `[clean/2, clean]`.
    pub window: Option<(u32, u32)>,
}

impl FitModel {
    pub fn polynomial(max_pow: i32) -> Self {
        Self {
            powers: (0..=max_pow).rev().collect(),
            log_order: 0,
            geometric: Vec::new(),
            window: None,
        }
    }

    /// Default residue model: quadratic-through-inverse-square Laurent part
    /// plus a geometric tail seeded from q.
    pub fn residue_default(q: f64) -> Self {
        Self {
            powers: vec![2, 1, 0, -1, -2],
            log_order: 0,
            geometric: geometric_candidates(q),
            window: None,
        }
    }

    /// Model for operators of differential order `ord >= 0`: shell traces
    /// grow like `m^(2+ord)`.
    pub fn for_order(ord: u32, q: f64) -> Self {
        Self {
            powers: (-2..=(2 + ord as i32)).rev().collect(),
            log_order: 0,
            geometric: geometric_candidates(q),
            window: None,
        }
    }

    pub fn with_logs(mut self, order: u8) -> Self {
        self.log_order = order;
        self
    }

    pub fn with_window(mut self, lo: u32, hi: u32) -> Self {
        self.window = Some((lo, hi));
        self
    }

    fn n_coeffs(&self) -> usize {
        self.powers.len() * (1 + self.log_order as usize)
    }
}

pub fn geometric_candidates(q: f64) -> Vec<f64> {
    if q == 0.0 {
        Vec::new()
    } else {
        vec![q, q * q, q.powi(3), q.powi(4)]
    }
}

/// Fitted asymptotic coefficients. `coeffs[(p, L)]` multiplies `m^p ln^L m`.
#[derive(Debug, Clone)]
pub struct PoleFit {
    pub coeffs: BTreeMap<(i32, u8), C64>,
    pub geo: Option<(C64, f64)>,
    pub window: (u32, u32),
    pub rms: f64,
    pub cond: f64,
}

impl PoleFit {
    pub fn coeff(&self, p: i32, log_pow: u8) -> C64 {
        self.coeffs.get(&(p, log_pow)).copied().unwrap_or(C64::ZERO)
    }

    pub fn c2(&self) -> C64 {
        self.coeff(2, 0)
    }

    pub fn c1(&self) -> C64 {
        self.coeff(1, 0)
    }

    pub fn c0(&self) -> C64 {
        self.coeff(0, 0)
    }

    /// Model value at shell m.
    pub fn eval(&self, m: u32) -> C64 {
        let x = m as f64;
        let mut v = C64::ZERO;
        for (&(p, l), &c) in &self.coeffs {
            v += c * x.powi(p) * x.ln().powi(l as i32);
        }
        if let Some((amp, r)) = self.geo {
            v += amp * r.powi(m as i32);
        }
        v
    }
}

/// Least squares over the unflagged shells of the window. Errors when the
/// window is too small or the design matrix is numerically rank-deficient.
pub fn fit_poles(series: &ShellSeries, model: &FitModel) -> Result<PoleFit> {
    let clean = series.clean_max;
    let (lo, hi) = model.window.unwrap_or((clean / 2, clean));
    let hi = hi.min(clean);
    let lo = lo.max(1);
    let shells: Vec<u32> = (lo..=hi).collect();
    let need = model.n_coeffs();
    if shells.len() < 2 * (need + model.geometric.is_empty() as usize) {
        return Err(Error::WindowTooSmall {
            have: shells.len(),
            need,
        });
    }

    let attempt = |geo: Option<f64>| -> Result<PoleFit> {
        let ncols = need + geo.is_some() as usize;
        let mut basis = DMatrix::<f64>::zeros(shells.len(), ncols);
        let mut col = 0usize;
        let mut keys: Vec<(i32, u8)> = Vec::new();
        for &p in &model.powers {
            for l in 0..=model.log_order {
                for (row, &m) in shells.iter().enumerate() {
                    let x = m as f64;
                    basis[(row, col)] = x.powi(p) * x.ln().powi(l as i32);
                }
                keys.push((p, l));
                col += 1;
            }
        }
        if let Some(r) = geo {
            for (row, &m) in shells.iter().enumerate() {
                basis[(row, col)] = r.powi(m as i32);
            }
        }
        // Column normalization keeps the SVD honest across scales.
        let mut scales = vec![0.0f64; ncols];
        for c in 0..ncols {
            let n = basis.column(c).norm();
            scales[c] = if n == 0.0 { 1.0 } else { n };
            for r in 0..shells.len() {
                basis[(r, c)] /= scales[c];
            }
        }
        let svd = basis.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd
            .singular_values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if cond > 1e13 {
            return Err(Error::IllConditionedFit { cond });
        }
        let solve = |data: &[f64]| -> DVector<f64> {
            let b = DVector::from_iterator(shells.len(), data.iter().cloned());
            svd.solve(&b, 1e-13 * smax).expect("svd solve")
        };
        let re: Vec<f64> = shells
            .iter()
            .map(|&m| series.t[m as usize].re)
            .collect();
        let im: Vec<f64> = shells
            .iter()
            .map(|&m| series.t[m as usize].im)
            .collect();
        let xre = solve(&re);
        let xim = solve(&im);
        let mut coeffs = BTreeMap::new();
        for (k, key) in keys.iter().enumerate() {
            let c = C64::new(xre[k] / scales[k], xim[k] / scales[k]);
            coeffs.insert(*key, c);
        }
        let geo_term = geo.map(|r| {
            let k = ncols - 1;
            (C64::new(xre[k] / scales[k], xim[k] / scales[k]), r)
        });
        let fit = PoleFit {
            coeffs,
            geo: geo_term,
            window: (lo, hi),
            rms: 0.0,
            cond,
        };
        let mut sq = 0.0;
        for &m in &shells {
            sq += (series.t[m as usize] - fit.eval(m)).norm_sqr();
        }
        Ok(PoleFit {
            rms: (sq / shells.len() as f64).sqrt(),
            ..fit
        })
    };

    let mut best = attempt(None)?;
    let data_scale = shells
        .iter()
        .map(|&m| series.t[m as usize].norm())
        .fold(1.0, f64::max);
    for &r in &model.geometric {
        // a tail that has already decayed below rounding on the window is
        // a numerically zero column; unscaling its coefficient would
        // manufacture a huge spurious amplitude
        if r.powi(lo as i32) < 1e-13 {
            continue;
        }
        if let Ok(f) = attempt(Some(r)) {
            let sane = f
                .geo
                .map(|(amp, rr)| amp.norm() * rr.powi(lo as i32) < 1e3 * data_scale)
                .unwrap_or(true);
            if sane && f.rms < best.rms {
                best = f;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Truncation;

    fn series_from(trunc: Truncation, f: impl Fn(f64) -> f64) -> ShellSeries {
        let mut s = ShellSeries::zeros(trunc);
        for m in 0..=trunc.m_max {
            s.t[m as usize] = C64::new(f(m as f64), 0.0);
        }
        s
    }

    #[test]
    fn exact_polynomial_recovered() {
        let tr = Truncation::new(60, 0).unwrap();
        let s = series_from(tr, |m| (m + 1.0) * (m + 1.0));
        let fit = fit_poles(&s, &FitModel::residue_default(0.0)).unwrap();
        assert!((fit.c2() - C64::new(1.0, 0.0)).norm() < 1e-9);
        assert!((fit.c1() - C64::new(2.0, 0.0)).norm() < 1e-8);
        assert!((fit.c0() - C64::new(1.0, 0.0)).norm() < 1e-7);
        assert!(fit.rms < 1e-9);
    }

    #[test]
    fn linear_count_recovered() {
        let tr = Truncation::new(60, 0).unwrap();
        let s = series_from(tr, |m| 2.0 * m + 1.0);
        let fit = fit_poles(&s, &FitModel::residue_default(0.0)).unwrap();
        assert!(fit.c2().norm() < 1e-9);
        assert!((fit.c1() - C64::new(2.0, 0.0)).norm() < 1e-9);
        assert!((fit.c0() - C64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn geometric_tail_separated() {
        let tr = Truncation::new(80, 0).unwrap();
        let q: f64 = 0.8;
        let s = series_from(tr, |m| 3.0 * m + 0.5 + 2.0 * q.powf(2.0 * m));
        let fit = fit_poles(&s, &FitModel::residue_default(q)).unwrap();
        assert!(fit.c2().norm() < 1e-6);
        assert!((fit.c1() - C64::new(3.0, 0.0)).norm() < 1e-7);
        assert!((fit.c0() - C64::new(0.5, 0.0)).norm() < 1e-6);
        let (amp, r) = fit.geo.unwrap();
        assert!((r - q * q).abs() < 1e-12);
        assert!((amp - C64::new(2.0, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn pure_decay_has_no_pole_coefficients() {
        let tr = Truncation::new(80, 0).unwrap();
        let q: f64 = 0.5;
        let s = series_from(tr, |m| q.powf(m));
        let fit = fit_poles(&s, &FitModel::residue_default(q)).unwrap();
        for &(p, _) in fit.coeffs.keys() {
            assert!(fit.coeff(p, 0).norm() < 1e-10, "p={p}");
        }
    }

    #[test]
    fn window_too_small_rejected() {
        let tr = Truncation::new(14, 0).unwrap();
        let s = series_from(tr, |m| m);
        let model = FitModel::residue_default(0.0).with_window(10, 14);
        assert!(matches!(
            fit_poles(&s, &model),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn log_terms_measure_double_poles() {
        let tr = Truncation::new(80, 0).unwrap();
        let s = series_from(tr, |m| m * m * (2.0 + 0.25 * m.ln()));
        let fit = fit_poles(
            &s,
            &FitModel {
                powers: vec![2, 1, 0],
                log_order: 1,
                geometric: Vec::new(),
                window: None,
            },
        )
        .unwrap();
        assert!((fit.coeff(2, 1) - C64::new(0.25, 0.0)).norm() < 1e-7);
        assert!((fit.c2() - C64::new(2.0, 0.0)).norm() < 1e-6);
    }
}
