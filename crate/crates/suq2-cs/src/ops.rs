//! Sparse weighted-shift operators on the truncated basis.
//!
//! Operators are stored column-wise: `cols[linear(src)]` lists the
//! `(linear(tgt), amplitude)` pairs of the image of that basis vector.
//! Generator words move a vector to at most one target, so columns stay tiny.
//!
//! Truncation bookkeeping: `reach` bounds the shell displacement and
//! `clean_max` is the largest source shell whose column is exact (no
//! amplitude was dropped at the `m_max` boundary). Compositions shrink
//! `clean_max` accordingly; traces and residues must only consume shells
//! `<= clean_max`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisIndex, Truncation};

pub type C64 = Complex64;

#[derive(Debug, Clone)]
pub struct ShiftOp {
    pub trunc: Truncation,
    pub reach: u32,
    /// Largest source shell with an exact column.
    pub clean_max: u32,
    cols: Vec<Vec<(u32, C64)>>,
}

impl ShiftOp {
    pub fn zero(trunc: Truncation) -> Self {
        Self {
            trunc,
            reach: 0,
            clean_max: trunc.m_max,
            cols: vec![Vec::new(); trunc.dim()],
        }
    }

    pub fn identity(trunc: Truncation) -> Self {
        Self::diagonal(trunc, |_| C64::new(1.0, 0.0))
    }

    pub fn diagonal(trunc: Truncation, f: impl Fn(BasisIndex) -> C64) -> Self {
        let mut op = Self::zero(trunc);
        for m in 0..=trunc.m_max {
            for idx in trunc.shell_iter(m) {
                let v = f(idx);
                if v != C64::ZERO {
                    let lin = trunc.linear(idx) as u32;
                    op.cols[lin as usize].push((lin, v));
                }
            }
        }
        op
    }

    /// Build from a per-basis-vector image map. Targets outside the
    /// truncation are dropped; `clean_max` already accounts for `reach`.
    pub fn from_images(
        trunc: Truncation,
        reach: u32,
        f: impl Fn(BasisIndex) -> Vec<(BasisIndex, C64)>,
    ) -> Self {
        let mut cols = vec![Vec::new(); trunc.dim()];
        for m in 0..=trunc.m_max {
            for idx in trunc.shell_iter(m) {
                let mut col: Vec<(u32, C64)> = f(idx)
                    .into_iter()
                    .filter(|(t, v)| t.m <= trunc.m_max && *v != C64::ZERO)
                    .map(|(t, v)| (trunc.linear(t) as u32, v))
                    .collect();
                col.sort_unstable_by_key(|e| e.0);
                cols[trunc.linear(idx)] = col;
            }
        }
        Self {
            trunc,
            reach,
            clean_max: trunc.m_max.saturating_sub(reach),
            cols,
        }
    }

    pub fn column(&self, src: BasisIndex) -> &[(u32, C64)] {
        &self.cols[self.trunc.linear(src)]
    }

    pub fn column_lin(&self, src: usize) -> &[(u32, C64)] {
        &self.cols[src]
    }

    pub fn entry(&self, src: BasisIndex, tgt: BasisIndex) -> C64 {
        let t = self.trunc.linear(tgt) as u32;
        self.cols[self.trunc.linear(src)]
            .iter()
            .find(|(i, _)| *i == t)
            .map(|(_, v)| *v)
            .unwrap_or(C64::ZERO)
    }

    pub fn diag_entry(&self, idx: BasisIndex) -> C64 {
        self.entry(idx, idx)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// `self ∘ rhs`, i.e. apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.trunc, rhs.trunc);
        let mut cols = vec![Vec::new(); self.trunc.dim()];
        let mut acc: Vec<(u32, C64)> = Vec::new();
        for (src, rcol) in rhs.cols.iter().enumerate() {
            acc.clear();
            for &(mid, a) in rcol {
                for &(tgt, b) in &self.cols[mid as usize] {
                    acc.push((tgt, a * b));
                }
            }
            cols[src] = merge_col(&mut acc);
        }
        Self {
            trunc: self.trunc,
            reach: self.reach + rhs.reach,
            clean_max: rhs
                .clean_max
                .min(self.clean_max.saturating_sub(rhs.reach)),
            cols,
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut cols = vec![Vec::new(); self.trunc.dim()];
        for (src, col) in self.cols.iter().enumerate() {
            for &(tgt, v) in col {
                cols[tgt as usize].push((src as u32, v.conj()));
            }
        }
        for col in &mut cols {
            col.sort_unstable_by_key(|e| e.0);
        }
        Self {
            trunc: self.trunc,
            reach: self.reach,
            clean_max: self.clean_max.saturating_sub(self.reach),
            cols,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        if c == C64::ZERO {
            for col in &mut out.cols {
                col.clear();
            }
            return out;
        }
        for col in &mut out.cols {
            for e in col.iter_mut() {
                e.1 *= c;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.trunc, rhs.trunc);
        let mut cols = vec![Vec::new(); self.trunc.dim()];
        let mut acc = Vec::new();
        for src in 0..self.cols.len() {
            acc.clear();
            acc.extend_from_slice(&self.cols[src]);
            acc.extend_from_slice(&rhs.cols[src]);
            cols[src] = merge_col(&mut acc);
        }
        Self {
            trunc: self.trunc,
            reach: self.reach.max(rhs.reach),
            clean_max: self.clean_max.min(rhs.clean_max),
            cols,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(C64::new(-1.0, 0.0)))
    }

    /// Entrywise rescaling by a function of (source, target); exact, keeps
    /// sparsity. This is how the derivations `[D, .]`, `[|D|, .]`, `[D^2, .]`
    /// are computed from diagonal eigenvalue differences.
    pub fn entrywise(&self, f: impl Fn(BasisIndex, BasisIndex) -> f64) -> Self {
        let mut out = self.clone();
        for (src, col) in out.cols.iter_mut().enumerate() {
            let s = self.trunc.unlinear(src);
            col.retain_mut(|(tgt, v)| {
                let t = self.trunc.unlinear(*tgt as usize);
                *v *= f(s, t);
                *v != C64::ZERO
            });
        }
        out
    }

    /// Largest entry magnitude over columns with source shell `m <= m_cut`.
    pub fn sup_entry_interior(&self, m_cut: u32) -> f64 {
        let lim = crate::basis::shell_offset(m_cut + 1).min(self.cols.len());
        self.cols[..lim]
            .iter()
            .flat_map(|col| col.iter().map(|(_, v)| v.norm()))
            .fold(0.0, f64::max)
    }

    /// Serialization form: one `(source, target, re, im)` row per entry.
    pub fn to_triples(&self) -> Vec<(BasisIndex, BasisIndex, f64, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (src, col) in self.cols.iter().enumerate() {
            let s = self.trunc.unlinear(src);
            for &(tgt, v) in col {
                out.push((s, self.trunc.unlinear(tgt as usize), v.re, v.im));
            }
        }
        out
    }

    pub fn from_triples(
        trunc: Truncation,
        reach: u32,
        triples: &[(BasisIndex, BasisIndex, f64, f64)],
    ) -> Self {
        let mut cols = vec![Vec::new(); trunc.dim()];
        for &(s, t, re, im) in triples {
            cols[trunc.linear(s)].push((trunc.linear(t) as u32, C64::new(re, im)));
        }
        for col in &mut cols {
            col.sort_unstable_by_key(|e| e.0);
        }
        Self {
            trunc,
            reach,
            clean_max: trunc.m_max.saturating_sub(reach),
            cols,
        }
    }
}

/// Sort-merge duplicate targets, dropping exact zeros.
fn merge_col(acc: &mut Vec<(u32, C64)>) -> Vec<(u32, C64)> {
    acc.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u32, C64)> = Vec::with_capacity(acc.len());
    for &(t, v) in acc.iter() {
        match out.last_mut() {
            Some(last) if last.0 == t => last.1 += v,
            _ => out.push((t, v)),
        }
    }
    out.retain(|(_, v)| *v != C64::ZERO);
    out
}

/// JSON wrapper for `ShiftOp` fixtures.
#[derive(Debug, Serialize, Deserialize)]
pub struct ShiftOpJson {
    pub m_max: u32,
    pub guard: u32,
    pub reach: u32,
    pub entries: Vec<([u32; 3], [u32; 3], f64, f64)>,
}

impl ShiftOpJson {
    pub fn encode(op: &ShiftOp) -> Self {
        let pack = |b: BasisIndex| [b.m, (b.i2 + b.m as i32) as u32 / 2, (b.j2 + b.m as i32) as u32 / 2];
        Self {
            m_max: op.trunc.m_max,
            guard: op.trunc.guard,
            reach: op.reach,
            entries: op
                .to_triples()
                .into_iter()
                .map(|(s, t, re, im)| (pack(s), pack(t), re, im))
                .collect(),
        }
    }

    pub fn decode(&self) -> crate::error::Result<ShiftOp> {
        let trunc = Truncation::new(self.m_max, self.guard)?;
        let unpack = |a: [u32; 3]| BasisIndex {
            m: a[0],
            i2: 2 * a[1] as i32 - a[0] as i32,
            j2: 2 * a[2] as i32 - a[0] as i32,
        };
        let triples: Vec<_> = self
            .entries
            .iter()
            .map(|&(s, t, re, im)| (unpack(s), unpack(t), re, im))
            .collect();
        Ok(ShiftOp::from_triples(trunc, self.reach, &triples))
    }
}

/// Operators on the truncated one-sided sequence space `l^2(N)`,
/// `x = 0..=x_max`. Used for the auxiliary disk representations.
#[derive(Debug, Clone)]
pub struct SeqOp {
    pub x_max: u32,
    pub cols: Vec<Vec<(u32, C64)>>,
}

impl SeqOp {
    pub fn zero(x_max: u32) -> Self {
        Self {
            x_max,
            cols: vec![Vec::new(); x_max as usize + 1],
        }
    }

    pub fn identity(x_max: u32) -> Self {
        let mut op = Self::zero(x_max);
        for x in 0..=x_max {
            op.cols[x as usize].push((x, C64::new(1.0, 0.0)));
        }
        op
    }

    pub fn from_images(x_max: u32, f: impl Fn(u32) -> Vec<(u32, C64)>) -> Self {
        let mut op = Self::zero(x_max);
        for x in 0..=x_max {
            let mut col: Vec<_> = f(x)
                .into_iter()
                .filter(|(t, v)| *t <= x_max && *v != C64::ZERO)
                .collect();
            col.sort_unstable_by_key(|e| e.0);
            op.cols[x as usize] = col;
        }
        op
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.x_max, rhs.x_max);
        let mut out = Self::zero(self.x_max);
        let mut acc = Vec::new();
        for (src, rcol) in rhs.cols.iter().enumerate() {
            acc.clear();
            for &(mid, a) in rcol {
                for &(tgt, b) in &self.cols[mid as usize] {
                    acc.push((tgt, a * b));
                }
            }
            out.cols[src] = merge_col(&mut acc);
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.x_max);
        for (src, col) in self.cols.iter().enumerate() {
            for &(tgt, v) in col {
                out.cols[tgt as usize].push((src as u32, v.conj()));
            }
        }
        for col in &mut out.cols {
            col.sort_unstable_by_key(|e| e.0);
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.x_max, rhs.x_max);
        let mut out = Self::zero(self.x_max);
        let mut acc = Vec::new();
        for src in 0..self.cols.len() {
            acc.clear();
            acc.extend_from_slice(&self.cols[src]);
            acc.extend_from_slice(&rhs.cols[src]);
            out.cols[src] = merge_col(&mut acc);
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for col in &mut out.cols {
            for e in col.iter_mut() {
                e.1 *= c;
            }
            col.retain(|(_, v)| *v != C64::ZERO);
        }
        out
    }

    pub fn diag_entry(&self, x: u32) -> C64 {
        self.cols[x as usize]
            .iter()
            .find(|(t, _)| *t == x)
            .map(|(_, v)| *v)
            .unwrap_or(C64::ZERO)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr() -> Truncation {
        Truncation::new(6, 2).unwrap()
    }

    #[test]
    fn adjoint_involution_exact() {
        let op = ShiftOp::from_images(tr(), 1, |idx| {
            if idx.m + 1 <= 6 && idx.i2 + 1 <= (idx.m + 1) as i32 {
                vec![(
                    BasisIndex {
                        m: idx.m + 1,
                        i2: idx.i2 + 1,
                        j2: idx.j2 - 1,
                    },
                    C64::new(0.5 + idx.m as f64, -1.25),
                )]
            } else {
                Vec::new()
            }
        });
        let back = op.adjoint().adjoint();
        for src in 0..op.cols.len() {
            assert_eq!(op.column_lin(src), back.column_lin(src));
        }
    }

    #[test]
    fn compose_matches_matrix_product_on_interior() {
        let d = ShiftOp::diagonal(tr(), |idx| C64::new(idx.m as f64, 0.0));
        let s = ShiftOp::from_images(tr(), 1, |idx| {
            if idx.m >= 1 && idx.i2.abs() <= (idx.m - 1) as i32 && idx.j2.abs() <= (idx.m - 1) as i32
            {
                vec![(
                    BasisIndex {
                        m: idx.m - 1,
                        i2: idx.i2,
                        j2: idx.j2,
                    },
                    C64::new(1.0, 0.0),
                )]
            } else {
                Vec::new()
            }
        });
        let ds = d.compose(&s);
        // (D S) e = (m-1) S e on shells where S lands.
        for idx in tr().shell_iter(3) {
            let col = ds.column(idx);
            if !col.is_empty() {
                assert_eq!(col[0].1, C64::new(2.0, 0.0));
            }
        }
        assert_eq!(ds.clean_max, 5); // min(clean_s=5, clean_d - reach_s = 6-1)
    }

    #[test]
    fn triples_roundtrip() {
        let op = ShiftOp::diagonal(tr(), |idx| C64::new(idx.i2 as f64, idx.j2 as f64));
        let js = ShiftOpJson::encode(&op);
        let back = js.decode().unwrap();
        for src in 0..op.cols.len() {
            assert_eq!(op.column_lin(src), back.column_lin(src));
        }
    }
}
