//! Shell traces: diagonal sums grouped by the `|D|` eigenvalue `m`.

use crate::basis::Truncation;
use crate::ops::{C64, ShiftOp};

/// Partial trace data `t(m) = sum over shell-m basis vectors of <e, T e>`,
/// `m = 0..=m_max`, with shells above `clean_max` flagged as boundary.
#[derive(Debug, Clone)]
pub struct ShellSeries {
    pub trunc: Truncation,
    pub t: Vec<C64>,
    /// Shells `m > clean_max` carry truncation error and are never fitted.
    pub clean_max: u32,
}

impl ShellSeries {
    pub fn zeros(trunc: Truncation) -> Self {
        Self {
            trunc,
            t: vec![C64::ZERO; trunc.m_max as usize + 1],
            clean_max: trunc.m_max,
        }
    }

    pub fn is_flagged(&self, m: u32) -> bool {
        m > self.clean_max
    }

    pub fn flagged_shells(&self) -> Vec<u32> {
        ((self.clean_max + 1)..=self.trunc.m_max).collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.trunc, rhs.trunc);
        Self {
            trunc: self.trunc,
            t: self
                .t
                .iter()
                .zip(&rhs.t)
                .map(|(a, b)| a + b)
                .collect(),
            clean_max: self.clean_max.min(rhs.clean_max),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            trunc: self.trunc,
            t: self.t.iter().map(|v| v * c).collect(),
            clean_max: self.clean_max,
        }
    }

    /// Plain truncated trace `sum_{m=1..=clean_max} t(m) m^(-s)`; the kernel
    /// shell `m = 0` is excluded by the `|D|^(-s) = 0 on ker D` convention.
    pub fn partial_trace(&self, s: f64) -> C64 {
        let mut acc = C64::ZERO;
        for m in 1..=self.clean_max {
            acc += self.t[m as usize] * (m as f64).powf(-s);
        }
        acc
    }

    /// CSV rows `(m, re t, im t, flagged)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,re,im,flagged\n");
        for m in 0..=self.trunc.m_max {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{}\n",
                m,
                self.t[m as usize].re,
                self.t[m as usize].im,
                self.is_flagged(m) as u8
            ));
        }
        out
    }
}

/// Exact diagonal sums of a stored operator, grouped by shell.
pub fn shell_traces(op: &ShiftOp) -> ShellSeries {
    let mut s = ShellSeries::zeros(op.trunc);
    s.clean_max = op.clean_max;
    for m in 0..=op.trunc.m_max {
        let mut acc = C64::ZERO;
        for idx in op.trunc.shell_iter(m) {
            acc += op.diag_entry(idx);
        }
        s.t[m as usize] = acc;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Truncation;
    use crate::ncpoly::{Gen, Letter};
    use crate::rep::Rep;

    #[test]
    fn identity_counts_squares() {
        let tr = Truncation::new(10, 2).unwrap();
        let s = shell_traces(&ShiftOp::identity(tr));
        for m in 0..=10u32 {
            assert_eq!(s.t[m as usize], C64::new(((m + 1) * (m + 1)) as f64, 0.0));
        }
    }

    #[test]
    fn q0_projection_counts_boundary_states() {
        // e = beta beta* at q = 0 projects onto {i = -n or j = -n}: 2m+1 states.
        let r = Rep::new(0.0, Truncation::new(12, 2).unwrap()).unwrap();
        let b = r.letter_op(Letter::plain(Gen::Beta));
        let e = b.compose(&b.adjoint());
        let s = shell_traces(&e);
        for m in 0..=s.clean_max {
            assert!((s.t[m as usize] - C64::new((2 * m + 1) as f64, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn shift_has_zero_shell_trace() {
        let r = Rep::new(0.5, Truncation::new(10, 2).unwrap()).unwrap();
        let a = r.letter_op(Letter::plain(Gen::Alpha));
        let s = shell_traces(a);
        assert!(s.t.iter().all(|v| *v == C64::ZERO));
    }
}
