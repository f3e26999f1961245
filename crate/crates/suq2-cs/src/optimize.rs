//! Stationary points of the shifted action over the coefficient field.
//!
//! The closed-form action is a holomorphic polynomial of total degree three
//! in the complex cells `Re_kl`, `Im_kl`; the objective is its real part.
//! For a holomorphic `S` the real gradient of `Re S` vanishes exactly at
//! the complex critical points `dS/dz = 0`, so gradients and Hessians are
//! assembled from complex term lists and mapped to real coordinates.
//! Stationary means gradient-zero: the cubic is indefinite and the
//! curvature summary classifies what was found.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::action::Q0Bound;
use crate::cocycles::Normalization;
use crate::error::{Error, Result};
use crate::ops::C64;
use crate::rep::Rep;
use crate::residues::{f_series, h_series};
use crate::symbols::ActionCoefficients;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellKind {
    Re,
    Im,
}

pub type Cell = (CellKind, i32, i32);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StationaryProblem {
    pub q: f64,
    pub k_level: i64,
    pub k_cut: u32,
    pub phi1_norm: Normalization,
    pub q0_bound: Q0Bound,
    /// Quadratic + cubic part (the volume cochain).
    pub with_phi3: bool,
    /// Cubic term only; disabling it leaves a solvable linear-quadratic toy.
    pub with_cubic: bool,
    /// The linear shift.
    pub with_phi1: bool,
    pub f_series: Vec<f64>,
    pub h_series: Vec<(f64, f64)>,
    /// Restriction to a subset of cells; `None` activates all
    /// `2 (2K+1)^2` complex cells.
    pub active: Option<Vec<Cell>>,
}

impl StationaryProblem {
    pub fn new(rep: &Rep, k_cut: u32, k_level: i64, norm: Normalization) -> Result<Self> {
        let mut f = Vec::new();
        let mut h = Vec::new();
        for k in 0..=k_cut {
            f.push(f_series(k, rep.q));
            let hv = h_series(rep, k)?;
            h.push(hv.regularized);
        }
        Ok(Self {
            q: rep.q,
            k_level,
            k_cut,
            phi1_norm: norm,
            q0_bound: Q0Bound::SymmetrizedAbs,
            with_phi3: true,
            with_cubic: true,
            with_phi1: true,
            f_series: f,
            h_series: h,
            active: None,
        })
    }

    pub fn cells(&self) -> Vec<Cell> {
        if let Some(a) = &self.active {
            return a.clone();
        }
        let k = self.k_cut as i32;
        let mut out = Vec::new();
        for kind in [CellKind::Re, CellKind::Im] {
            for k1 in -k..=k {
                for k2 in -k..=k {
                    out.push((kind, k1, k2));
                }
            }
        }
        out
    }

    /// Number of real variables.
    pub fn dim(&self) -> usize {
        2 * self.cells().len()
    }
}

/// Complex polynomial in the cells: linear, quadratic and cubic term lists
/// over cell indices.
pub struct CellPoly {
    pub cells: Vec<Cell>,
    pub linear: Vec<(usize, C64)>,
    pub quad: Vec<(usize, usize, C64)>,
    pub cubic: Vec<(usize, usize, usize, C64)>,
}

impl CellPoly {
    pub fn build(p: &StationaryProblem) -> CellPoly {
        let cells = p.cells();
        let pos = |kind: CellKind, k: i32, l: i32| -> Option<usize> {
            cells.iter().position(|c| *c == (kind, k, l))
        };
        let kk = p.k_cut as i32;
        let level = p.k_level as f64;
        let mut linear = Vec::new();
        let mut quad = Vec::new();
        let mut cubic = Vec::new();
        if p.with_phi3 {
            // -(1/12) k2 k3 k4 Im_(k1 k2) Re_(k3 k4) on k2-k1+k4-k3 = 0
            for k1 in -kk..=kk {
                for k2 in -kk..=kk {
                    for k3 in -kk..=kk {
                        let k4 = k3 - k2 + k1;
                        if k4.abs() > kk {
                            continue;
                        }
                        let w = (k2 * k3 * k4) as f64;
                        if w == 0.0 {
                            continue;
                        }
                        if let (Some(i), Some(j)) =
                            (pos(CellKind::Im, k1, k2), pos(CellKind::Re, k3, k4))
                        {
                            quad.push((i, j, C64::new(6.0 * PI * level * (-w / 12.0), 0.0)));
                        }
                    }
                }
            }
            if p.with_cubic {
                // (1/18) k2 k4 k6 Im Im Im on k2-k1+k4-k3+k6-k5 = 0
                for k1 in -kk..=kk {
                    for k2 in -kk..=kk {
                        if k2 == 0 {
                            continue;
                        }
                        for k3 in -kk..=kk {
                            for k4 in -kk..=kk {
                                if k4 == 0 {
                                    continue;
                                }
                                for k5 in -kk..=kk {
                                    let k6 = k5 - k4 + k3 - k2 + k1;
                                    if k6.abs() > kk || k6 == 0 {
                                        continue;
                                    }
                                    let w = (k2 * k4 * k6) as f64;
                                    if let (Some(i), Some(j), Some(l)) = (
                                        pos(CellKind::Im, k1, k2),
                                        pos(CellKind::Im, k3, k4),
                                        pos(CellKind::Im, k5, k6),
                                    ) {
                                        cubic.push((
                                            i,
                                            j,
                                            l,
                                            C64::new(6.0 * PI * level * (w / 18.0), 0.0),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        if p.with_phi1 {
            // -2 pi k times the closed-form linear cochain coefficients
            for k in -kk..=kk {
                if k == 0 {
                    continue;
                }
                let kf = k as f64;
                let ka = k.unsigned_abs() as usize;
                let sgn = kf.signum();
                let mut c_im = C64::ZERO;
                if p.q == 0.0 {
                    let from = match p.phi1_norm {
                        Normalization::Consistent => 0i64,
                        Normalization::Printed => 1,
                    };
                    let to = match (p.phi1_norm, p.q0_bound) {
                        (Normalization::Printed, Q0Bound::Literal) => (k as i64 - 1).abs(),
                        _ => k.unsigned_abs() as i64 - 1,
                    };
                    let s: f64 = (from..=to).map(crate::residues::rho).sum();
                    c_im += C64::new(-2.0 * sgn * s - kf * kf * kf / 12.0, 0.0);
                } else {
                    let f = p.f_series[ka];
                    let h = C64::new(p.h_series[ka].0, p.h_series[ka].1);
                    let fk = match p.phi1_norm {
                        Normalization::Consistent => f + 1.0,
                        Normalization::Printed => f,
                    };
                    c_im += C64::new(-2.0 * kf * fk + sgn * kf * kf - kf * kf * kf / 12.0, 0.0);
                    c_im += h * (-2.0 * sgn);
                }
                if let Some(i) = pos(CellKind::Im, k, k) {
                    linear.push((i, c_im * (-2.0 * PI * level)));
                }
                if p.q > 0.0 && p.phi1_norm == Normalization::Printed {
                    if let Some(i) = pos(CellKind::Re, k, k) {
                        let c_re = C64::new(1.0, 1.0) * (kf * kf);
                        linear.push((i, c_re * (-2.0 * PI * level)));
                    }
                }
            }
        }
        CellPoly {
            cells,
            linear,
            quad,
            cubic,
        }
    }

    fn value(&self, z: &[C64]) -> C64 {
        let mut s = C64::ZERO;
        for &(i, c) in &self.linear {
            s += c * z[i];
        }
        for &(i, j, c) in &self.quad {
            s += c * z[i] * z[j];
        }
        for &(i, j, k, c) in &self.cubic {
            s += c * z[i] * z[j] * z[k];
        }
        s
    }

    /// Complex gradient `dS/dz`.
    fn grad(&self, z: &[C64]) -> Vec<C64> {
        let mut g = vec![C64::ZERO; z.len()];
        for &(i, c) in &self.linear {
            g[i] += c;
        }
        for &(i, j, c) in &self.quad {
            g[i] += c * z[j];
            g[j] += c * z[i];
        }
        for &(i, j, k, c) in &self.cubic {
            g[i] += c * z[j] * z[k];
            g[j] += c * z[i] * z[k];
            g[k] += c * z[i] * z[j];
        }
        g
    }

    /// Complex Hessian `d^2 S / dz_i dz_j`.
    fn hess(&self, z: &[C64]) -> DMatrix<C64> {
        let n = z.len();
        let mut h = DMatrix::<C64>::zeros(n, n);
        for &(i, j, c) in &self.quad {
            h[(i, j)] += c;
            h[(j, i)] += c;
        }
        for &(i, j, k, c) in &self.cubic {
            h[(i, j)] += c * z[k];
            h[(j, i)] += c * z[k];
            h[(i, k)] += c * z[j];
            h[(k, i)] += c * z[j];
            h[(j, k)] += c * z[i];
            h[(k, j)] += c * z[i];
        }
        h
    }
}

fn to_complex(x: &[f64]) -> Vec<C64> {
    x.chunks(2).map(|p| C64::new(p[0], p[1])).collect()
}

/// Objective `Re S`, real gradient, and the real value of `S` for reports.
pub fn eval_and_grad(poly: &CellPoly, x: &[f64]) -> (f64, Vec<f64>, C64) {
    let z = to_complex(x);
    let s = poly.value(&z);
    let g = poly.grad(&z);
    let mut gr = Vec::with_capacity(x.len());
    for gj in &g {
        gr.push(gj.re);
        gr.push(-gj.im);
    }
    (s.re, gr, s)
}

/// Real symmetric Hessian of `Re S`.
pub fn real_hessian(poly: &CellPoly, x: &[f64]) -> DMatrix<f64> {
    let z = to_complex(x);
    let hc = poly.hess(&z);
    let n = z.len();
    let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let c = hc[(i, j)];
            h[(2 * i, 2 * j)] = c.re;
            h[(2 * i, 2 * j + 1)] = -c.im;
            h[(2 * i + 1, 2 * j)] = -c.im;
            h[(2 * i + 1, 2 * j + 1)] = -c.re;
        }
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Levenberg-damped Newton steps on the gradient system.
    DampedNewton,
    /// Backtracking gradient descent on the squared gradient norm.
    GradientDescent,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StationaryReport {
    pub method: Method,
    pub converged: bool,
    pub iterations: u32,
    pub grad_norm: f64,
    pub value: (f64, f64),
    pub solution: Vec<f64>,
    pub curvature: (f64, f64),
    pub is_saddle: bool,
    pub route_note: String,
    pub trajectory: Vec<(u32, f64, f64)>,
}

pub fn find_stationary(
    problem: &StationaryProblem,
    init: &[f64],
    method: Method,
    tol: f64,
    max_iter: u32,
) -> Result<StationaryReport> {
    let poly = CellPoly::build(problem);
    let dim = problem.dim();
    if init.len() != dim {
        return Err(Error::Config(format!(
            "init has {} entries, problem has {dim} variables",
            init.len()
        )));
    }
    if init.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("non-finite initial point".into()));
    }
    let mut x = init.to_vec();
    let mut traj = Vec::new();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let inf_norm = |g: &[f64]| g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for it in 0..max_iter {
        iterations = it + 1;
        let (fval, g, _) = eval_and_grad(&poly, &x);
        let gn = inf_norm(&g);
        traj.push((it, fval, gn));
        if gn <= tol {
            iterations = it;
            break;
        }
        match method {
            Method::DampedNewton => {
                // Levenberg damping on the gradient system: solve
                // (H^2 + lambda I) s = H g, which interpolates between the
                // Newton step and steepest descent for |grad f|^2.
                let h = real_hessian(&poly, &x);
                let gvec = DVector::from_column_slice(&g);
                let hg = &h * &gvec;
                let h2 = &h * &h;
                let mut stepped = false;
                for _ in 0..60 {
                    let mut hl = h2.clone();
                    for d in 0..dim {
                        hl[(d, d)] += lambda;
                    }
                    if let Some(step) = hl.lu().solve(&hg) {
                        let cand: Vec<f64> =
                            x.iter().zip(step.iter()).map(|(xi, si)| xi - si).collect();
                        let (_, gc, _) = eval_and_grad(&poly, &cand);
                        if inf_norm(&gc) < gn {
                            x = cand;
                            lambda = (lambda * 0.3).max(1e-12);
                            stepped = true;
                            break;
                        }
                    }
                    lambda *= 8.0;
                }
                if !stepped {
                    break;
                }
            }
            Method::GradientDescent => {
                // descend g(x) = 1/2 |grad f|^2; its gradient is H grad f
                let h = real_hessian(&poly, &x);
                let gvec = DVector::from_column_slice(&g);
                let dg = &h * &gvec;
                let g2 = 0.5 * gvec.norm_squared();
                let slope = dg.norm_squared();
                if slope == 0.0 {
                    break;
                }
                let mut step = 1.0 / (1.0 + dg.norm());
                let mut ok = false;
                for _ in 0..60 {
                    let cand: Vec<f64> = x
                        .iter()
                        .zip(dg.iter())
                        .map(|(xi, di)| xi - step * di)
                        .collect();
                    let (_, gc, _) = eval_and_grad(&poly, &cand);
                    let gc2 = 0.5 * gc.iter().map(|v| v * v).sum::<f64>();
                    if gc2 <= g2 - 1e-4 * step * slope {
                        x = cand;
                        ok = true;
                        break;
                    }
                    step *= 0.5;
                }
                if !ok {
                    break;
                }
            }
        }
    }
    let (_, g, sval) = eval_and_grad(&poly, &x);
    let gn = inf_norm(&g);
    let h = real_hessian(&poly, &x);
    let eigs = h.symmetric_eigenvalues();
    let (emin, emax) = (
        eigs.iter().cloned().fold(f64::INFINITY, f64::min),
        eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    Ok(StationaryReport {
        method,
        converged: gn <= tol,
        iterations,
        grad_norm: gn,
        value: (sval.re, sval.im),
        solution: x,
        curvature: (emin, emax),
        is_saddle: emin < -tol && emax > tol,
        route_note: format!(
            "linear term from the closed-form cochain, normalization {:?}",
            problem.phi1_norm
        ),
        trajectory: traj,
    })
}

/// Pack a coefficient field into the flat coordinate vector of a problem.
pub fn coords_from_coefficients(p: &StationaryProblem, c: &ActionCoefficients) -> Vec<f64> {
    let mut out = Vec::with_capacity(p.dim());
    for (kind, k, l) in p.cells() {
        let v = match kind {
            CellKind::Re => c.re_at(k, l),
            CellKind::Im => c.im_at(k, l),
        };
        out.push(v.re);
        out.push(v.im);
    }
    out
}

pub fn coefficients_from_coords(p: &StationaryProblem, x: &[f64]) -> ActionCoefficients {
    let mut c = ActionCoefficients::default();
    for ((kind, k, l), pair) in p.cells().into_iter().zip(x.chunks(2)) {
        let v = C64::new(pair[0], pair[1]);
        match kind {
            CellKind::Re => c.set_re(k, l, v),
            CellKind::Im => c.set_im(k, l, v),
        }
    }
    c.k_cut = p.k_cut;
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Truncation;
    use crate::random::rng;
    use rand::Rng;

    fn problem(q: f64, k_cut: u32) -> StationaryProblem {
        let rep = Rep::new(q, Truncation::new(40, 4).unwrap()).unwrap();
        StationaryProblem::new(&rep, k_cut, 1, Normalization::Consistent).unwrap()
    }

    #[test]
    fn closed_form_value_matches_action_module() {
        // CellPoly agrees with the direct closed-form evaluator on random fields
        let p = problem(0.5, 2);
        let poly = CellPoly::build(&p);
        let mut g = rng(5);
        for _ in 0..10 {
            let x: Vec<f64> = (0..p.dim()).map(|_| g.random_range(-1.0..1.0)).collect();
            let c = coefficients_from_coords(&p, &x);
            let table = crate::action::SeriesTable {
                q: p.q,
                f: p.f_series.clone(),
                h_reg: p.h_series.iter().map(|&(a, b)| C64::new(a, b)).collect(),
                h_explicit_q0: vec![0.0; p.k_cut as usize + 1],
            };
            let direct = crate::action::action_closed_form(
                &c,
                &table,
                p.k_level,
                Normalization::Consistent,
                Q0Bound::SymmetrizedAbs,
            );
            let (_, _, s) = eval_and_grad(&poly, &x);
            let d = (s - C64::new(direct.total.0, direct.total.1)).norm();
            assert!(d < 1e-9 * (1.0 + s.norm()), "defect {d}");
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let p = problem(0.4, 2);
        let poly = CellPoly::build(&p);
        let mut g = rng(17);
        for _ in 0..50 {
            let x: Vec<f64> = (0..p.dim()).map(|_| g.random_range(-1.0..1.0)).collect();
            let (_, grad, _) = eval_and_grad(&poly, &x);
            let gn = grad.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-9);
            let h = 1e-5;
            for j in (0..p.dim()).step_by(7) {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let (fp, _, _) = eval_and_grad(&poly, &xp);
                let (fm, _, _) = eval_and_grad(&poly, &xm);
                let fd = (fp - fm) / (2.0 * h);
                assert!(
                    (fd - grad[j]).abs() <= 1e-6 * gn.max(fd.abs()),
                    "var {j}: analytic {} vs fd {fd}",
                    grad[j]
                );
            }
        }
    }

    #[test]
    fn quadratic_toy_matches_linear_solve() {
        let mut p = problem(0.5, 1);
        p.with_cubic = false;
        let poly = CellPoly::build(&p);
        // stationary points of a quadratic-plus-linear: H x = -g(0)
        let zero = vec![0.0; p.dim()];
        let (_, g0, _) = eval_and_grad(&poly, &zero);
        let h = real_hessian(&poly, &zero);
        let sol = h
            .clone()
            .svd(true, true)
            .solve(&DVector::from_column_slice(&g0), 1e-12)
            .unwrap()
            .map(|v| -v);
        // project the solve into the Hessian's range: compare gradients instead
        let xs: Vec<f64> = sol.iter().cloned().collect();
        let (_, gs, _) = eval_and_grad(&poly, &xs);
        let direct_gn = gs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(direct_gn < 1e-9, "direct solve leaves gradient {direct_gn}");
        let report =
            find_stationary(&p, &zero, Method::DampedNewton, 1e-10, 200).unwrap();
        assert!(report.converged);
        let (_, gr, _) = eval_and_grad(&poly, &report.solution);
        assert!(gr.iter().all(|v| v.abs() < 1e-8));
    }

    #[test]
    fn single_mode_matches_univariate_roots() {
        // only Im_(1,1) active: S(z) = a z^3 + b z, critical at z^2 = -b/(3a)
        let mut p = problem(0.5, 1);
        p.active = Some(vec![(CellKind::Im, 1, 1)]);
        let poly = CellPoly::build(&p);
        assert_eq!(poly.cubic.len(), 1);
        assert_eq!(poly.linear.len(), 1);
        let a = poly.cubic[0].3;
        let b = poly.linear[0].1;
        let root = (-b / (a * 3.0)).sqrt();
        for init in [[0.4, 0.1], [-0.5, -0.2]] {
            let r = find_stationary(&p, &init, Method::DampedNewton, 1e-11, 300).unwrap();
            assert!(r.converged, "from {init:?}");
            let z = C64::new(r.solution[0], r.solution[1]);
            let d = (z - root).norm().min((z + root).norm());
            assert!(d < 1e-7, "found {z}, expected +-{root}");
        }
    }

    #[test]
    fn zero_action_is_everywhere_stationary() {
        let mut p = problem(0.3, 1);
        p.with_phi3 = false;
        p.with_phi1 = false;
        p.with_cubic = false;
        let init: Vec<f64> = (0..p.dim()).map(|i| 0.1 * i as f64).collect();
        let r = find_stationary(&p, &init, Method::GradientDescent, 1e-12, 50).unwrap();
        assert!(r.converged);
        assert_eq!(r.solution, init);
        assert_eq!(r.grad_norm, 0.0);
    }

    #[test]
    fn gradient_descent_surrogate_converges() {
        let mut p = problem(0.5, 1);
        p.with_cubic = false;
        let init = vec![0.05; p.dim()];
        let r = find_stationary(&p, &init, Method::GradientDescent, 1e-7, 4000).unwrap();
        assert!(r.converged, "grad norm {}", r.grad_norm);
    }

    #[test]
    fn deterministic_reports() {
        let p = problem(0.4, 1);
        let init = vec![0.2; p.dim()];
        let r1 = find_stationary(&p, &init, Method::DampedNewton, 1e-9, 150).unwrap();
        let r2 = find_stationary(&p, &init, Method::DampedNewton, 1e-9, 150).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }
}
