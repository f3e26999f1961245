//! Numeric Fredholm index of compressed unitaries and the cochain pairing.
//!
//! `Index(P pi(u) P) = dim ker P pi(u) P - dim ker P pi(u)* P` on the
//! upper spectral subspace `{i = n}`. Kernels are read off rectangular
//! guarded compressions: domain shells `m <= m_max - guard`, range shells
//! one step further, so no amplitude escapes the window and the kernel
//! count carries no edge artifacts. The compression splits into connected
//! components of its sparsity graph, which stay small for shift-type
//! unitaries; each block gets a dense singular-value decomposition.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::basis::BasisIndex;
use crate::error::Result;
use crate::forms::{MatForm, PolyMat};
use crate::cocycles::{Normalization, Phi1Route, phi1, phi3, phi3_cm};
use crate::ops::C64;
use crate::rep::Rep;
use crate::represent::{BlockOp, ensure_unitary, represent_matrix};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexResult {
    pub numeric_index: i64,
    pub kernel_dims: (usize, usize),
    pub m_max: u32,
    pub guard: u32,
    pub threshold: f64,
    /// Smallest kept and largest dropped singular values across blocks.
    pub sigma_gap: (f64, f64),
    pub indeterminate: bool,
}

/// Upper-subspace states of one shell: `(m, j2)` pairs tensored with the
/// matrix component.
fn p_states(n: u8, m_hi: u32) -> Vec<(u8, BasisIndex)> {
    let mut out = Vec::new();
    for c in 0..n {
        for m in 0..=m_hi {
            let mi = m as i32;
            for j2 in (-mi..=mi).step_by(2) {
                out.push((c, BasisIndex { m, i2: mi, j2 }));
            }
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Kernel dimension of the rectangular compression of `P op P`.
fn kernel_dim(op: &BlockOp, rep: &Rep, threshold: f64) -> (usize, f64, f64, bool) {
    let n = op.n;
    let m_dom = rep.trunc.interior_max();
    let m_ran = (m_dom + 1).min(rep.trunc.m_max);
    let dom = p_states(n, m_dom);
    let ran = p_states(n, m_ran);
    let ran_pos: BTreeMap<(u8, BasisIndex), usize> = ran
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect();

    // sparse columns of the compression
    let mut cols: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dom.len()];
    for (ci, (comp, idx)) in dom.iter().enumerate() {
        for r in 0..n {
            if let Some(block) = op.block(r, *comp) {
                for &(tgt, amp) in block.column(*idx) {
                    let t = rep.trunc.unlinear(tgt as usize);
                    if t.is_upper() && t.m <= m_ran {
                        if let Some(&ri) = ran_pos.get(&(r, t)) {
                            cols[ci].push((ri, amp));
                        }
                    }
                }
            }
        }
    }

    // connected components over column and row nodes
    let nc = dom.len();
    let nr = ran.len();
    let mut uf = UnionFind::new(nc + nr);
    for (ci, col) in cols.iter().enumerate() {
        for &(ri, _) in col {
            uf.union(ci, nc + ri);
        }
    }
    let mut comps: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for ci in 0..nc {
        let root = uf.find(ci);
        comps.entry(root).or_default().0.push(ci);
    }
    for ri in 0..nr {
        let root = uf.find(nc + ri);
        comps.entry(root).or_default().1.push(ri);
    }

    let mut kernel = 0usize;
    let mut min_kept = f64::INFINITY;
    let mut max_dropped = 0.0f64;
    let mut borderline = false;
    for (cols_c, rows_c) in comps.values() {
        if cols_c.is_empty() {
            continue;
        }
        if rows_c.is_empty() {
            kernel += cols_c.len();
            continue;
        }
        let rmap: BTreeMap<usize, usize> = rows_c.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let mut mat = DMatrix::<C64>::zeros(rows_c.len(), cols_c.len());
        for (k, &ci) in cols_c.iter().enumerate() {
            for &(ri, amp) in &cols[ci] {
                mat[(rmap[&ri], k)] = amp;
            }
        }
        let svals = mat.singular_values();
        let mut rank = 0usize;
        for s in svals.iter() {
            if *s >= threshold {
                rank += 1;
                min_kept = min_kept.min(*s);
            } else {
                max_dropped = max_dropped.max(*s);
            }
            if *s >= threshold && *s < 10.0 * threshold {
                borderline = true;
            }
        }
        kernel += cols_c.len() - rank;
    }
    (kernel, min_kept, max_dropped, borderline)
}

/// The numeric index of `P pi(u) P` for a unitary matrix of polynomials.
pub fn index_pairing(u: &PolyMat, rep: &Rep) -> Result<IndexResult> {
    ensure_unitary(u, rep)?;
    let pu = represent_matrix(u, rep);
    let pus = represent_matrix(&u.adjoint(), rep);
    let norm_est: f64 = 1.0; // unitary by the gate above
    let threshold = 1e-8 * norm_est;
    let (k_u, kept_u, drop_u, b_u) = kernel_dim(&pu, rep, threshold);
    let (k_us, kept_us, drop_us, b_us) = kernel_dim(&pus, rep, threshold);
    Ok(IndexResult {
        numeric_index: k_u as i64 - k_us as i64,
        kernel_dims: (k_u, k_us),
        m_max: rep.trunc.m_max,
        guard: rep.trunc.guard,
        threshold,
        sigma_gap: (kept_u.min(kept_us), drop_u.max(drop_us)),
        indeterminate: b_u || b_us,
    })
}

/// `u* du` and `u* du du* du` as forms.
pub fn winding_forms(u: &PolyMat) -> (MatForm, MatForm) {
    let ustar = u.adjoint();
    let w1 = MatForm::from_matrices(&[ustar.clone(), u.clone()]);
    let du = MatForm::from_matrix(u).d();
    let dustar = MatForm::from_matrix(&ustar).d();
    let w3 = w1.product(&dustar).product(&du);
    (w1, w3)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairingReport {
    pub route: Phi1Route,
    pub phi1_value: (f64, f64),
    pub phi3_value: (f64, f64),
    /// `phi_1(u* du) - phi_3(u* du du* du)`.
    pub cocycle_value: (f64, f64),
}

/// Cochain side of the index theorem along one route: the residue routes
/// pair `phi_1` with the residue `phi_3`, the symbolic route with the exact
/// one.
pub fn cocycle_pairing(
    u: &PolyMat,
    rep: &Rep,
    route: Phi1Route,
    norm: Normalization,
) -> Result<PairingReport> {
    let (w1, w3) = winding_forms(u);
    let p1 = phi1(&w1, rep, route, norm)?;
    let p3 = match route {
        Phi1Route::Symbolic => phi3(&w3),
        _ => phi3_cm(&w3, rep)?,
    };
    let v = p1 - p3;
    Ok(PairingReport {
        route,
        phi1_value: (p1.re, p1.im),
        phi3_value: (p3.re, p3.im),
        cocycle_value: (v.re, v.im),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Truncation;
    use crate::ncpoly::NCPoly;
    use crate::rep::fundamental_unitary;

    fn rep(q: f64, m_max: u32) -> Rep {
        Rep::new(q, Truncation::new(m_max, 4).unwrap()).unwrap()
    }

    fn fund(q: f64) -> PolyMat {
        PolyMat::new(2, fundamental_unitary(q).into_iter().flatten().collect())
    }

    #[test]
    fn identity_and_phase_have_index_zero() {
        let r = rep(0.5, 20);
        let one = PolyMat::identity(1);
        let res = index_pairing(&one, &r).unwrap();
        assert_eq!(res.numeric_index, 0);
        let phase = PolyMat::new(1, vec![NCPoly::scalar(C64::new(0.6, 0.8))]);
        let res = index_pairing(&phase, &r).unwrap();
        assert_eq!(res.numeric_index, 0);
        assert!(!res.indeterminate);
    }

    #[test]
    fn fundamental_unitary_index_is_minus_one() {
        for q in [0.0, 0.5] {
            for m_max in [20, 30] {
                let r = rep(q, m_max);
                let res = index_pairing(&fund(q), &r).unwrap();
                assert_eq!(res.numeric_index, -1, "q={q} m_max={m_max}");
                assert_eq!(res.kernel_dims, (0, 1));
                assert!(!res.indeterminate);
            }
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let r = rep(0.3, 16);
        let bad = PolyMat::new(1, vec![NCPoly::alpha_power(1)]); // isometry, not unitary
        assert!(index_pairing(&bad, &r).is_err());
    }
}
