//! The truncated representation of the quantum-sphere coordinate algebra.
//!
//! Generators act as weighted shifts on `e^(n)_{ij}`:
//!
//!   alpha e^(n)_{ij} = a_+(n,i,j) e^(n+1/2)_{i-1/2,j-1/2} + a_-(n,i,j) e^(n-1/2)_{i-1/2,j-1/2}
//!   beta  e^(n)_{ij} = b_+(n,i,j) e^(n+1/2)_{i+1/2,j-1/2} + b_-(n,i,j) e^(n-1/2)_{i+1/2,j-1/2}
//!
//! with the closed-form ladder coefficients below. The Dirac operator is
//! diagonal, `D e^(n)_{ij} = (2 delta_0(n-i) - 1) 2n e^(n)_{ij}`, so `|D| = m`
//! on shell `m = 2n` and the sign is `+1` exactly on `{i = n}`.


use crate::basis::{BasisIndex, Truncation};
use crate::error::{Error, Result};
use crate::ncpoly::{Gen, Letter, NCPoly, Word};
use crate::ops::{C64, SeqOp, ShiftOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    APlus,
    AMinus,
    BPlus,
    BMinus,
}

/// `1 - q^k` with the `q^0 = 1` convention kept exact at `q = 0`.
fn one_minus_q_pow(q: f64, k: i64) -> f64 {
    debug_assert!(k >= 0);
    if k == 0 {
        0.0
    } else {
        1.0 - q.powi(k as i32)
    }
}

/// Closed-form ladder coefficient; arguments are doubled half-integers,
/// so `(n2, i2, j2)` stands for `(n, i, j) = (n2/2, i2/2, j2/2)`.
pub fn ladder_coeff(kind: LadderKind, n2: u32, i2: i32, j2: i32, q: f64) -> Result<f64> {
    let n = n2 as i64;
    let (i, j) = (i2 as i64, j2 as i64);
    if i.abs() > n || j.abs() > n || (i - n).rem_euclid(2) != 0 || (j - n).rem_euclid(2) != 0 {
        return Err(Error::InvalidTriple { n2, i2, j2 });
    }
    // Exponents written for doubled arguments: 2n+2j -> n+j etc.
    let v = match kind {
        LadderKind::APlus => {
            // q^(2n+i+j+1) sqrt[(1-q^(2n-2j+2))(1-q^(2n-2i+2))] / sqrt[(1-q^(4n+2))(1-q^(4n+4))]
            let e = n + (i + j) / 2 + 1;
            let num = one_minus_q_pow(q, n - j + 2) * one_minus_q_pow(q, n - i + 2);
            let den = one_minus_q_pow(q, 2 * n + 2) * one_minus_q_pow(q, 2 * n + 4);
            pow_q(q, e) * (num / den).sqrt()
        }
        LadderKind::AMinus => {
            if i == -n || j == -n {
                return Ok(0.0);
            }
            let num = one_minus_q_pow(q, n + j) * one_minus_q_pow(q, n + i);
            let den = one_minus_q_pow(q, 2 * n) * one_minus_q_pow(q, 2 * n + 2);
            (num / den).sqrt()
        }
        LadderKind::BPlus => {
            let e = (n + j) / 2;
            let num = one_minus_q_pow(q, n - j + 2) * one_minus_q_pow(q, n + i + 2);
            let den = one_minus_q_pow(q, 2 * n + 2) * one_minus_q_pow(q, 2 * n + 4);
            -pow_q(q, e) * (num / den).sqrt()
        }
        LadderKind::BMinus => {
            if j == -n || i == n {
                return Ok(0.0);
            }
            let e = (n + i) / 2;
            let num = one_minus_q_pow(q, n + j) * one_minus_q_pow(q, n - i);
            let den = one_minus_q_pow(q, 2 * n) * one_minus_q_pow(q, 2 * n + 2);
            pow_q(q, e) * (num / den).sqrt()
        }
    };
    Ok(v)
}

fn pow_q(q: f64, e: i64) -> f64 {
    if e == 0 {
        1.0
    } else {
        q.powi(e as i32)
    }
}

fn shift_target(idx: BasisIndex, dm: i32, di: i32, dj: i32) -> Option<BasisIndex> {
    let m = idx.m as i32 + dm;
    if m < 0 {
        return None;
    }
    let t = BasisIndex {
        m: m as u32,
        i2: idx.i2 + di,
        j2: idx.j2 + dj,
    };
    t.is_valid().then_some(t)
}

/// One generator letter as a shift operator. Homogeneous letters move a
/// basis vector to at most one target; `alpha`/`beta` are the two-part sums.
/// Adjoint entries are read off the forward action: `<f, x* e> = conj <x f, e>`.
pub fn build_letter(letter: Letter, q: f64, trunc: Truncation) -> ShiftOp {
    ShiftOp::from_images(trunc, 1, |idx| letter_images(letter, q, idx))
}

fn letter_images(letter: Letter, q: f64, idx: BasisIndex) -> Vec<(BasisIndex, C64)> {
    let part = |kind: LadderKind, dm: i32, di: i32, dj: i32, adj: bool| {
        shift_target(idx, dm, di, dj).and_then(|t| {
            let c = if adj {
                // coefficient evaluated at the source of the forward arrow
                ladder_coeff(kind, t.m, t.i2, t.j2, q).unwrap()
            } else {
                ladder_coeff(kind, idx.m, idx.i2, idx.j2, q).unwrap()
            };
            (c != 0.0).then_some((t, C64::new(c, 0.0)))
        })
    };
    let leaf = |gen: Gen, star: bool| -> Option<(BasisIndex, C64)> {
        match (gen, star) {
            (Gen::AlphaPlus, false) => part(LadderKind::APlus, 1, -1, -1, false),
            (Gen::AlphaMinus, false) => part(LadderKind::AMinus, -1, -1, -1, false),
            (Gen::BetaPlus, false) => part(LadderKind::BPlus, 1, 1, -1, false),
            (Gen::BetaMinus, false) => part(LadderKind::BMinus, -1, 1, -1, false),
            (Gen::AlphaPlus, true) => part(LadderKind::APlus, -1, 1, 1, true),
            (Gen::AlphaMinus, true) => part(LadderKind::AMinus, 1, 1, 1, true),
            (Gen::BetaPlus, true) => part(LadderKind::BPlus, -1, -1, 1, true),
            (Gen::BetaMinus, true) => part(LadderKind::BMinus, 1, -1, 1, true),
            _ => unreachable!(),
        }
    };
    match letter.gen {
        Gen::Alpha => leaf(Gen::AlphaPlus, letter.star)
            .into_iter()
            .chain(leaf(Gen::AlphaMinus, letter.star))
            .collect(),
        Gen::Beta => leaf(Gen::BetaPlus, letter.star)
            .into_iter()
            .chain(leaf(Gen::BetaMinus, letter.star))
            .collect(),
        g => leaf(g, letter.star).into_iter().collect(),
    }
}

/// Dirac data on a truncation.
#[derive(Debug, Clone)]
pub struct DiracOps {
    pub trunc: Truncation,
}

impl DiracOps {
    pub fn new(trunc: Truncation) -> Self {
        Self { trunc }
    }

    /// Signed eigenvalue of `D`.
    pub fn d_eig(idx: BasisIndex) -> f64 {
        if idx.is_upper() {
            idx.m as f64
        } else {
            -(idx.m as f64)
        }
    }

    /// Eigenvalue of `|D|`.
    pub fn absd_eig(idx: BasisIndex) -> f64 {
        idx.m as f64
    }

    pub fn d(&self) -> ShiftOp {
        ShiftOp::diagonal(self.trunc, |i| C64::new(Self::d_eig(i), 0.0))
    }

    pub fn abs_d(&self) -> ShiftOp {
        ShiftOp::diagonal(self.trunc, |i| C64::new(Self::absd_eig(i), 0.0))
    }

    /// `F = sgn D`, equal to `+1` exactly on `{i = n}` (the kernel shell
    /// `m = 0` has `i = n` and is assigned `+1`).
    pub fn f_sign(&self) -> ShiftOp {
        ShiftOp::diagonal(self.trunc, |i| {
            C64::new(if i.is_upper() { 1.0 } else { -1.0 }, 0.0)
        })
    }

    pub fn p_proj(&self) -> ShiftOp {
        ShiftOp::diagonal(self.trunc, |i| {
            C64::new(if i.is_upper() { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// `|D|^y` with the convention that it vanishes on `ker D` (shell 0).
    pub fn absd_pow(&self, y: f64) -> ShiftOp {
        ShiftOp::diagonal(self.trunc, |i| {
            if i.m == 0 {
                C64::ZERO
            } else {
                C64::new((i.m as f64).powf(y), 0.0)
            }
        })
    }
}

/// `[|D|, T]`, exact on every stored entry.
pub fn delta(t: &ShiftOp) -> ShiftOp {
    t.entrywise(|s, tg| DiracOps::absd_eig(tg) - DiracOps::absd_eig(s))
}

/// `[D^2, T]`.
pub fn nabla(t: &ShiftOp) -> ShiftOp {
    t.entrywise(|s, tg| {
        let (a, b) = (DiracOps::absd_eig(tg), DiracOps::absd_eig(s));
        a * a - b * b
    })
}

/// `[D, T]`.
pub fn commutator_d(t: &ShiftOp) -> ShiftOp {
    t.entrywise(|s, tg| DiracOps::d_eig(tg) - DiracOps::d_eig(s))
}

/// A deformation parameter plus truncation, with the twelve letter operators
/// cached. Everything downstream (represented forms, shell traces, index
/// compressions) works through this.
#[derive(Debug, Clone)]
pub struct Rep {
    pub q: f64,
    pub trunc: Truncation,
    letters: Vec<(Letter, ShiftOp)>,
}

impl Rep {
    pub fn new(q: f64, trunc: Truncation) -> Result<Self> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::Config(format!("q = {q} outside [0, 1)")));
        }
        let mut letters = Vec::new();
        for gen in [
            Gen::Alpha,
            Gen::Beta,
            Gen::AlphaPlus,
            Gen::AlphaMinus,
            Gen::BetaPlus,
            Gen::BetaMinus,
        ] {
            for star in [false, true] {
                let l = Letter { gen, star };
                letters.push((l, build_letter(l, q, trunc)));
            }
        }
        Ok(Self { q, trunc, letters })
    }

    pub fn letter_op(&self, l: Letter) -> &ShiftOp {
        &self
            .letters
            .iter()
            .find(|(k, _)| *k == l)
            .expect("letter cached")
            .1
    }

    pub fn word_op(&self, w: &Word) -> ShiftOp {
        let mut out = ShiftOp::identity(self.trunc);
        // rightmost letter acts first
        for l in w.letters.iter().rev() {
            out = self.letter_op(*l).compose(&out);
        }
        out
    }

    pub fn poly_op(&self, p: &NCPoly) -> ShiftOp {
        let mut out = ShiftOp::zero(self.trunc);
        for (w, c) in p.terms() {
            out = out.add(&self.word_op(w).scale(*c));
        }
        out
    }

    pub fn dirac(&self) -> DiracOps {
        DiracOps::new(self.trunc)
    }

    /// Residuals of the five presentation relations, sup over entries of
    /// columns with source shell `m <= interior`.
    pub fn relation_residuals(&self) -> Vec<(&'static str, f64)> {
        let a = self.letter_op(Letter::plain(Gen::Alpha));
        let ad = self.letter_op(Letter::starred(Gen::Alpha));
        let b = self.letter_op(Letter::plain(Gen::Beta));
        let bd = self.letter_op(Letter::starred(Gen::Beta));
        let one = ShiftOp::identity(self.trunc);
        let q2 = C64::new(self.q * self.q, 0.0);
        let qc = C64::new(self.q, 0.0);
        let cut = self.trunc.interior_max().min(self.trunc.m_max - 2);
        let sup = |op: ShiftOp| op.sup_entry_interior(cut);
        vec![
            ("a* a + b* b - 1", sup(ad.compose(a).add(&bd.compose(b)).sub(&one))),
            (
                "a a* + q^2 b b* - 1",
                sup(a.compose(ad).add(&b.compose(bd).scale(q2)).sub(&one)),
            ),
            ("a b - q b a", sup(a.compose(b).sub(&b.compose(a).scale(qc)))),
            (
                "a b* - q b* a",
                sup(a.compose(bd).sub(&bd.compose(a).scale(qc))),
            ),
            ("b b* - b* b", sup(b.compose(bd).sub(&bd.compose(b)))),
        ]
    }
}

/// Disk-representation side: `pi_(+/-)(alpha) e_x = (1-q^(2x))^(1/2) e_(x-1)`,
/// `pi_(+/-)(beta) e_x = (+/-) q^x e_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiSign {
    Plus,
    Minus,
}

pub fn pi_letter(sign: PiSign, letter: Letter, q: f64, x_max: u32) -> Result<SeqOp> {
    let s = match sign {
        PiSign::Plus => 1.0,
        PiSign::Minus => -1.0,
    };
    let gen = letter.gen;
    if !matches!(gen, Gen::Alpha | Gen::Beta) {
        return Err(Error::AlphabetMismatch(
            "disk representations act on words in alpha, beta and adjoints".into(),
        ));
    }
    let op = match (gen, letter.star) {
        (Gen::Alpha, false) => SeqOp::from_images(x_max, |x| {
            if x == 0 {
                Vec::new()
            } else {
                vec![(x - 1, C64::new(one_minus_q_pow(q, 2 * x as i64).sqrt(), 0.0))]
            }
        }),
        (Gen::Alpha, true) => SeqOp::from_images(x_max, |x| {
            vec![(
                x + 1,
                C64::new(one_minus_q_pow(q, 2 * (x as i64 + 1)).sqrt(), 0.0),
            )]
        }),
        // beta acts as a real diagonal, so it is self-adjoint in both signs
        (Gen::Beta, _) => SeqOp::from_images(x_max, |x| {
            vec![(x, C64::new(s * pow_q(q, x as i64), 0.0))]
        }),
        _ => unreachable!(),
    };
    Ok(op)
}

pub fn pi_word(sign: PiSign, w: &Word, q: f64, x_max: u32) -> Result<SeqOp> {
    let mut out = SeqOp::identity(x_max);
    for l in w.letters.iter().rev() {
        out = pi_letter(sign, *l, q, x_max)?.compose(&out);
    }
    Ok(out)
}

pub fn pi_poly(sign: PiSign, p: &NCPoly, q: f64, x_max: u32) -> Result<SeqOp> {
    let mut out = SeqOp::zero(x_max);
    for (w, c) in p.terms() {
        out = out.add(&pi_word(sign, w, q, x_max)?.scale(*c));
    }
    Ok(out)
}

/// The defining 2x2 unitary `[[alpha, -q beta*], [beta, alpha*]]` as a
/// matrix of polynomials.
pub fn fundamental_unitary(q: f64) -> Vec<Vec<NCPoly>> {
    let a = NCPoly::letter(Letter::plain(Gen::Alpha));
    let ad = NCPoly::letter(Letter::starred(Gen::Alpha));
    let b = NCPoly::letter(Letter::plain(Gen::Beta));
    let bd = NCPoly::letter(Letter::starred(Gen::Beta)).scale(C64::new(-q, 0.0));
    vec![vec![a, bd], vec![b, ad]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::word_from_str;

    fn rep(q: f64) -> Rep {
        Rep::new(q, Truncation::new(12, 3).unwrap()).unwrap()
    }

    #[test]
    fn ladder_edge_cases() {
        // a_- vanishes on i = -n and at q = 0 equals 1 elsewhere
        assert_eq!(ladder_coeff(LadderKind::AMinus, 4, -4, 0, 0.3).unwrap(), 0.0);
        assert_eq!(ladder_coeff(LadderKind::AMinus, 4, 0, 2, 0.0).unwrap(), 1.0);
        // closed formula at n = i = j = 1/2, q = 0.5, evaluated independently:
        // prefactor q^(2n+i+j+1) = q^3, radicals (1-q^2) over (1-q^4)(1-q^6)
        let q: f64 = 0.5;
        let expect = q.powi(3) * ((1.0 - q.powi(2)) as f64).sqrt() * (1.0 - q.powi(2)).sqrt()
            / ((1.0 - q.powi(4)).sqrt() * (1.0 - q.powi(6)).sqrt());
        let got = ladder_coeff(LadderKind::APlus, 1, 1, 1, q).unwrap();
        assert!((got - expect).abs() < 1e-15, "{got} vs {expect}");
    }

    #[test]
    fn ladder_rejects_bad_triple() {
        assert!(ladder_coeff(LadderKind::APlus, 2, 3, 0, 0.1).is_err());
        assert!(ladder_coeff(LadderKind::APlus, 2, 1, 0, 0.1).is_err());
    }

    #[test]
    fn q0_alpha_beta_table() {
        let r = rep(0.0);
        let a = r.letter_op(Letter::plain(Gen::Alpha));
        // alpha e^(n)_{ij} = e^(n-1/2)_{i-1/2,j-1/2} when i > -n, j > -n
        let src = BasisIndex::new(4, 2, 0).unwrap();
        let tgt = BasisIndex::new(3, 1, -1).unwrap();
        assert_eq!(a.entry(src, tgt), C64::new(1.0, 0.0));
        assert!(a.column(BasisIndex::new(4, -4, 0).unwrap()).is_empty());
        // beta e^(n)_{i,-n} = -e^(n+1/2)_{i+1/2,-(n+1/2)}
        let b = r.letter_op(Letter::plain(Gen::Beta));
        let src = BasisIndex::new(4, 0, -4).unwrap();
        let tgt = BasisIndex::new(5, 1, -5).unwrap();
        assert_eq!(b.entry(src, tgt), C64::new(-1.0, 0.0));
        // alpha alpha* = 1 exactly at q = 0
        let ad = r.letter_op(Letter::starred(Gen::Alpha));
        let diff = a.compose(ad).sub(&ShiftOp::identity(r.trunc));
        assert_eq!(diff.sup_entry_interior(10), 0.0);
    }

    #[test]
    fn generic_beta_minus_matches_ladder() {
        let r = rep(0.37);
        let bm = r.letter_op(Letter::plain(Gen::BetaMinus));
        for idx in r.trunc.shell_iter(6) {
            let c = ladder_coeff(LadderKind::BMinus, idx.m, idx.i2, idx.j2, 0.37).unwrap();
            let col = bm.column(idx);
            if c == 0.0 {
                assert!(col.is_empty());
            } else {
                assert_eq!(col.len(), 1);
                assert!((col[0].1.re - c).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn alpha_is_sum_of_homogeneous_parts() {
        let r = rep(0.6);
        let a = r.letter_op(Letter::plain(Gen::Alpha));
        let sum = r
            .letter_op(Letter::plain(Gen::AlphaPlus))
            .add(r.letter_op(Letter::plain(Gen::AlphaMinus)));
        let diff = a.sub(&sum);
        assert_eq!(diff.sup_entry_interior(12), 0.0);
    }

    #[test]
    fn dirac_signs_and_kernel() {
        let d = DiracOps::new(Truncation::new(6, 1).unwrap());
        assert_eq!(DiracOps::d_eig(BasisIndex::new(4, 4, 2).unwrap()), 4.0);
        assert_eq!(DiracOps::d_eig(BasisIndex::new(4, 2, 2).unwrap()), -4.0);
        assert_eq!(DiracOps::d_eig(BasisIndex::new(0, 0, 0).unwrap()), 0.0);
        let inv = d.absd_pow(-1.0);
        assert_eq!(inv.diag_entry(BasisIndex::new(0, 0, 0).unwrap()), C64::ZERO);
        // the kernel is exactly the one-dimensional shell m = 0
        let mut kernel_dim = 0;
        for m in 0..=6 {
            for idx in d.trunc.shell_iter(m) {
                if DiracOps::d_eig(idx) == 0.0 {
                    kernel_dim += 1;
                    assert_eq!(idx, BasisIndex::new(0, 0, 0).unwrap());
                }
            }
        }
        assert_eq!(kernel_dim, 1);
    }

    #[test]
    fn delta_eigenvalues_on_homogeneous_letters() {
        let r = rep(0.45);
        for (gen, sign) in [
            (Gen::AlphaPlus, 1.0),
            (Gen::AlphaMinus, -1.0),
            (Gen::BetaPlus, 1.0),
            (Gen::BetaMinus, -1.0),
        ] {
            let op = r.letter_op(Letter::plain(gen));
            let diff = delta(op).sub(&op.scale(C64::new(sign, 0.0)));
            assert_eq!(diff.sup_entry_interior(11), 0.0, "{gen:?}");
        }
        // nabla of a diagonal operator vanishes
        let diag = ShiftOp::diagonal(r.trunc, |i| C64::new(1.0 / (1.0 + i.m as f64), 0.0));
        assert_eq!(nabla(&diag).nnz(), 0);
    }

    #[test]
    fn word_homogeneity_on_interior() {
        let r = rep(0.5);
        let w = word_from_str("a+ b- a-* b+").unwrap();
        let op = r.word_op(&w);
        let deg = w.gamma_degree().unwrap() as f64;
        let diff = delta(&op).sub(&op.scale(C64::new(deg, 0.0)));
        assert_eq!(diff.sup_entry_interior(r.trunc.interior_max()), 0.0);
    }

    #[test]
    fn pi_minus_values() {
        let q = 0.7;
        let b = word_from_str("b").unwrap();
        let op = pi_word(PiSign::Minus, &b, q, 40).unwrap();
        assert!((op.diag_entry(3) - C64::new(-q.powi(3), 0.0)).norm() < 1e-15);
        let a = word_from_str("a").unwrap();
        let op = pi_word(PiSign::Minus, &a, q, 40).unwrap();
        assert!(op.cols[0].is_empty()); // (1-q^0)^(1/2) = 0
        // pi_-(a* a) e_x = (1 - q^(2x)) e_x
        let w = word_from_str("a* a").unwrap();
        let op = pi_word(PiSign::Minus, &w, q, 40).unwrap();
        assert!((op.diag_entry(5) - C64::new(1.0 - q.powi(10), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn relations_hold_on_interior() {
        for q in [0.0, 0.2, 0.9] {
            let r = rep(q);
            for (name, res) in r.relation_residuals() {
                assert!(res < 1e-12, "q={q} relation {name}: {res}");
            }
        }
    }

    #[test]
    fn generator_sparsity() {
        let r = rep(0.5);
        for gen in [Gen::Alpha, Gen::Beta] {
            for star in [false, true] {
                let op = r.letter_op(Letter { gen, star });
                for m in 0..=r.trunc.m_max {
                    for idx in r.trunc.shell_iter(m) {
                        assert!(op.column(idx).len() <= 2);
                    }
                }
            }
        }
        // homogeneous letters have at most one target
        let op = r.letter_op(Letter::plain(Gen::AlphaMinus));
        for m in 0..=r.trunc.m_max {
            for idx in r.trunc.shell_iter(m) {
                assert!(op.column(idx).len() <= 1);
            }
        }
    }
}
