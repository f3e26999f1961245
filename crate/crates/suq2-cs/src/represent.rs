//! Forms as operators on the truncated space tensored with matrix factors.
//!
//! An elementary term `c (E_0 ⊗ w_0) d(E_1 ⊗ w_1) ... d(E_n ⊗ w_n)`
//! represents as `c (E_0 E_1 ... E_n) ⊗ pi(w_0) [D, pi(w_1)] ... [D, pi(w_n)]`,
//! since the Dirac operator acts as `D ⊗ I`.

use crate::error::{Error, Result};
use crate::forms::{MatForm, PolyMat};
use crate::ops::{C64, ShiftOp};
use crate::rep::{Rep, commutator_d, nabla};
use crate::shell::{ShellSeries, shell_traces};

/// An `N x N` matrix of shift operators.
#[derive(Debug, Clone)]
pub struct BlockOp {
    pub n: u8,
    pub blocks: Vec<Option<ShiftOp>>,
}

impl BlockOp {
    pub fn zero(n: u8) -> Self {
        Self {
            n,
            blocks: vec![None; (n as usize) * (n as usize)],
        }
    }

    pub fn identity(n: u8, rep: &Rep) -> Self {
        let mut out = Self::zero(n);
        for k in 0..n {
            out.set(k, k, ShiftOp::identity(rep.trunc));
        }
        out
    }

    pub fn block(&self, r: u8, c: u8) -> Option<&ShiftOp> {
        self.blocks[r as usize * self.n as usize + c as usize].as_ref()
    }

    pub fn set(&mut self, r: u8, c: u8, op: ShiftOp) {
        self.blocks[r as usize * self.n as usize + c as usize] = Some(op);
    }

    pub fn accumulate(&mut self, r: u8, c: u8, op: &ShiftOp) {
        let slot = &mut self.blocks[r as usize * self.n as usize + c as usize];
        *slot = Some(match slot.take() {
            Some(prev) => prev.add(op),
            None => op.clone(),
        });
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                if let Some(b) = self.block(r, c) {
                    out.set(c, r, b.adjoint());
                }
            }
        }
        out
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let mut out = Self::zero(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                for k in 0..self.n {
                    if let (Some(a), Some(b)) = (self.block(r, k), rhs.block(k, c)) {
                        out.accumulate(r, c, &a.compose(b));
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for r in 0..self.n {
            for c in 0..self.n {
                if let Some(b) = rhs.block(r, c) {
                    out.accumulate(r, c, &b.scale(C64::new(-1.0, 0.0)));
                }
            }
        }
        out
    }

    pub fn sup_entry_interior(&self, m_cut: u32) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .map(|b| b.sup_entry_interior(m_cut))
            .fold(0.0, f64::max)
    }

    /// Block-diagonal shell traces (the matrix trace folded in).
    pub fn shell_traces(&self, rep: &Rep) -> ShellSeries {
        let mut acc = ShellSeries::zeros(rep.trunc);
        for k in 0..self.n {
            if let Some(b) = self.block(k, k) {
                acc = acc.add(&shell_traces(b));
            }
        }
        acc
    }
}

/// `pi(M)` for a matrix of polynomials.
pub fn represent_matrix(m: &PolyMat, rep: &Rep) -> BlockOp {
    let mut out = BlockOp::zero(m.n);
    for r in 0..m.n {
        for c in 0..m.n {
            let p = m.entry(r, c);
            if !p.is_zero() {
                out.set(r, c, rep.poly_op(p));
            }
        }
    }
    out
}

/// `pi(A^0) prod_i nabla^ord([D, pi(A^i)])` for an elementary form; `ord = 0`
/// is the plain local-index integrand. The guard must cover the total word
/// length of each term.
pub fn represent_nabla(form: &MatForm, rep: &Rep, ord: u32) -> Result<BlockOp> {
    let need = form.degree as u32 + form.max_word_len() as u32;
    if rep.trunc.guard < need {
        return Err(Error::GuardViolation {
            need,
            have: rep.trunc.guard,
        });
    }
    if form.degree == 0 {
        // group words per matrix entry so duplicates build only once
        let n = form.n as usize;
        let mut entries = vec![crate::ncpoly::NCPoly::zero(); n * n];
        for (t, c) in form.terms() {
            entries[t[0].row as usize * n + t[0].col as usize]
                .add_term(t[0].word.clone(), *c);
        }
        return Ok(represent_matrix(&PolyMat::new(form.n, entries), rep));
    }
    let mut out = BlockOp::zero(form.n);
    // tuples of one form repeat slot words heavily; build each word once
    let mut plain: std::collections::BTreeMap<&crate::ncpoly::Word, ShiftOp> =
        std::collections::BTreeMap::new();
    let mut derived: std::collections::BTreeMap<&crate::ncpoly::Word, ShiftOp> =
        std::collections::BTreeMap::new();
    for (t, c) in form.terms() {
        // matrix factor: product of matrix units
        let mut ok = true;
        for i in 0..form.degree {
            if t[i].col != t[i + 1].row {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let row = t[0].row;
        let col = t[form.degree].col;
        let head = plain
            .entry(&t[0].word)
            .or_insert_with(|| rep.word_op(&t[0].word));
        let mut op = head.scale(*c);
        for s in t[1..].iter() {
            let d = derived.entry(&s.word).or_insert_with(|| {
                let mut d = commutator_d(&rep.word_op(&s.word));
                for _ in 0..ord {
                    d = nabla(&d);
                }
                d
            });
            op = op.compose(d);
        }
        out.accumulate(row, col, &op);
    }
    Ok(out)
}

pub fn represent(form: &MatForm, rep: &Rep) -> Result<BlockOp> {
    represent_nabla(form, rep, 0)
}

/// Residual of `u* u = u u* = 1` on the interior; the unitarity gate for
/// gauge maps.
pub fn unitarity_residual(u: &PolyMat, rep: &Rep) -> f64 {
    let pu = represent_matrix(u, rep);
    let pus = represent_matrix(&u.adjoint(), rep);
    let one = BlockOp::identity(u.n, rep);
    let cut = rep.trunc.interior_max().min(rep.trunc.m_max.saturating_sub(2));
    let r1 = pus.compose(&pu).sub(&one).sup_entry_interior(cut);
    let r2 = pu.compose(&pus).sub(&one).sup_entry_interior(cut);
    r1.max(r2)
}

pub fn ensure_unitary(u: &PolyMat, rep: &Rep) -> Result<()> {
    let residual = unitarity_residual(u, rep);
    if residual > 1e-12 {
        Err(Error::NotUnitary { residual })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Truncation;
    use crate::forms::MatForm;
    use crate::ncpoly::{NCPoly, word_from_str};
    use crate::rep::{delta, fundamental_unitary};

    fn rep(q: f64) -> Rep {
        Rep::new(q, Truncation::new(16, 6).unwrap()).unwrap()
    }

    #[test]
    fn represent_zero_form_is_pi() {
        let r = rep(0.4);
        let p = NCPoly::word(word_from_str("a b*").unwrap());
        let f = MatForm::from_matrix(&PolyMat::new(1, vec![p.clone()]));
        let op = represent(&f, &r).unwrap();
        let direct = r.poly_op(&p);
        let diff = op.block(0, 0).unwrap().sub(&direct);
        assert_eq!(diff.sup_entry_interior(10), 0.0);
    }

    #[test]
    fn represent_d_of_homogeneous_letter() {
        // d(alpha-) represents as [D, alpha-]; on the lower sector the
        // commutator equals |D|-degree shifts up to the sign pattern of D.
        let r = rep(0.5);
        let am = NCPoly::word(word_from_str("a-").unwrap());
        let f = MatForm::from_matrix(&PolyMat::new(1, vec![am.clone()])).d();
        let op = represent(&f, &r).unwrap();
        let direct = commutator_d(&r.word_op(&word_from_str("a-").unwrap()));
        let diff = op.block(0, 0).unwrap().sub(&direct);
        assert_eq!(diff.sup_entry_interior(12), 0.0);
        // and delta(alpha-) = -alpha- exactly
        let d = delta(&r.word_op(&word_from_str("a-").unwrap()));
        let expect = r.word_op(&word_from_str("a-").unwrap()).scale(C64::new(-1.0, 0.0));
        assert_eq!(d.sub(&expect).sup_entry_interior(14), 0.0);
    }

    #[test]
    fn represent_is_multiplicative_on_products() {
        let r = rep(0.3);
        let f = MatForm::from_matrices(&[
            PolyMat::new(1, vec![NCPoly::word(word_from_str("a").unwrap())]),
            PolyMat::new(1, vec![NCPoly::word(word_from_str("b").unwrap())]),
        ]);
        let g = MatForm::from_matrices(&[
            PolyMat::new(1, vec![NCPoly::word(word_from_str("a*").unwrap())]),
            PolyMat::new(1, vec![NCPoly::word(word_from_str("b*").unwrap())]),
        ]);
        let prod = represent(&f.product(&g), &r).unwrap();
        let sep = represent(&f, &r).unwrap().compose(&represent(&g, &r).unwrap());
        let diff = prod.sub(&sep);
        assert!(diff.sup_entry_interior(8) < 1e-12);
    }

    #[test]
    fn fundamental_unitary_is_unitary() {
        for q in [0.0, 0.2, 0.5, 0.9] {
            let r = rep(q);
            let u = PolyMat::new(2, fundamental_unitary(q).into_iter().flatten().collect());
            assert!(unitarity_residual(&u, &r) < 1e-12, "q = {q}");
        }
    }
}
