//! Circle symbols, gradings, the symbol-lift split of 1-forms, and the
//! q = 0 canonical form.
//!
//! The symbol map is the *-homomorphism onto smooth circle functions that
//! sends `alpha` (and its lowering part) to the unitary generator `u` and
//! kills `beta`, the raising part, and their adjoints. Words map to
//! monomials, polynomials to Fourier polynomials, and the grading
//! derivation turns into `i d/d(theta)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{MatForm, Slot, Tuple};
use crate::ncpoly::{Gen, NCPoly, Word};
use crate::ops::C64;

/// Finitely supported `sum_k f_k u^k` on the circle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierPoly {
    coeffs: BTreeMap<i32, C64>,
}

impl FourierPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, C64::new(1.0, 0.0))
    }

    pub fn monomial(k: i32, c: C64) -> Self {
        let mut f = Self::default();
        f.add_term(k, c);
        f
    }

    pub fn add_term(&mut self, k: i32, c: C64) {
        if c == C64::ZERO {
            return;
        }
        let e = self.coeffs.entry(k).or_insert(C64::ZERO);
        *e += c;
        if *e == C64::ZERO {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i32) -> C64 {
        self.coeffs.get(&k).copied().unwrap_or(C64::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &C64)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &c) in rhs.terms() {
            out.add_term(k, c);
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::ZERO {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, v * c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (&k, &a) in self.terms() {
            for (&l, &b) in rhs.terms() {
                out.add_term(k + l, a * b);
            }
        }
        out
    }

    /// `(f*)_k = conj(f_(-k))`.
    pub fn star(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, &v)| (-k, v.conj()))
                .collect(),
        }
    }

    /// `d/d(theta)`: `u^k -> i k u^k`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&k, &v) in self.terms() {
            out.add_term(k, v * C64::new(0.0, k as f64));
        }
        out
    }

    pub fn derivative_n(&self, n: u32) -> Self {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.derivative();
        }
        f
    }

    /// `(1/2pi) integral f dtheta`.
    pub fn mean(&self) -> C64 {
        self.coeff(0)
    }
}

/// Symbol of a polynomial; always defined, zero on kernel words.
pub fn sigma_poly(p: &NCPoly) -> FourierPoly {
    let mut f = FourierPoly::zero();
    for (w, c) in p.terms() {
        if let Some(k) = w.symbol_winding() {
            f.add_term(k, *c);
        }
    }
    f
}

pub fn sigma_word(w: &Word) -> FourierPoly {
    match w.symbol_winding() {
        Some(k) => FourierPoly::monomial(k, C64::new(1.0, 0.0)),
        None => FourierPoly::zero(),
    }
}

/// Matrix of Fourier polynomials; the symbol of a `PolyMat`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatFourier {
    pub n: u8,
    pub entries: Vec<FourierPoly>,
}

impl MatFourier {
    pub fn zero(n: u8) -> Self {
        Self {
            n,
            entries: vec![FourierPoly::zero(); (n as usize) * (n as usize)],
        }
    }

    pub fn from_slot(n: u8, s: &Slot) -> Self {
        let mut m = Self::zero(n);
        m.entries[s.row as usize * n as usize + s.col as usize] = sigma_word(&s.word);
        m
    }

    pub fn entry(&self, r: u8, c: u8) -> &FourierPoly {
        &self.entries[r as usize * self.n as usize + c as usize]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.n as usize;
        let mut out = Self::zero(self.n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = FourierPoly::zero();
                for k in 0..n {
                    acc = acc.add(&self.entries[r * n + k].mul(&rhs.entries[k * n + c]));
                }
                out.entries[r * n + c] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> FourierPoly {
        let n = self.n as usize;
        let mut acc = FourierPoly::zero();
        for k in 0..n {
            acc = acc.add(&self.entries[k * n + k]);
        }
        acc
    }

    pub fn derivative_n(&self, d: u32) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|f| f.derivative_n(d)).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|f| f.scale(c)).collect(),
        }
    }
}

/// The degree-zero component of a polynomial under the gamma grading
/// (expand to the homogeneous alphabet first when needed).
pub fn degree0_gamma(p: &NCPoly) -> NCPoly {
    let g = if p.is_graded() {
        p.clone()
    } else {
        p.expand_graded()
    };
    g.graded_component(0, |w| w.gamma_degree())
}

/// Degree-zero component under the `∂`-grading (word-wise on any alphabet).
pub fn degree0_del(p: &NCPoly) -> NCPoly {
    p.graded_component(0, |w| Some(w.del_degree()))
}

/// `lift(u^k) = alpha^k` for `k >= 0`, `alpha*^(-k)` for `k < 0`.
pub fn lift(f: &FourierPoly) -> NCPoly {
    let mut p = NCPoly::zero();
    for (&k, &c) in f.terms() {
        p.add_term(Word::alpha_power(k), c);
    }
    p
}

/// Split of a 1-form into its symbol-visible part and the remainder:
/// each elementary pair `(a, b)` contributes `lift(sigma a) d lift(sigma b)`
/// to `A_1`, and `A_2 = A - A_1` collects everything the symbol map kills.
pub fn decompose(a: &MatForm) -> (MatForm, MatForm) {
    assert_eq!(a.degree, 1);
    let mut a1 = MatForm::zero(a.n, 1);
    for (t, c) in a.terms() {
        let (w0, w1) = (t[0].word.symbol_winding(), t[1].word.symbol_winding());
        if let (Some(k0), Some(k1)) = (w0, w1) {
            let t2: Tuple = vec![
                Slot {
                    row: t[0].row,
                    col: t[0].col,
                    word: Word::alpha_power(k0),
                },
                Slot {
                    row: t[1].row,
                    col: t[1].col,
                    word: Word::alpha_power(k1),
                },
            ];
            a1.add_tuple(t2, *c);
        }
    }
    let a2 = a.sub(&a1);
    (a1, a2)
}

/// Symbol image of a form: every slot word replaced by its winding
/// monomial; used to verify that the split preserves symbols exactly.
pub fn symbol_form(a: &MatForm) -> MatForm {
    let mut out = MatForm::zero(a.n, a.degree);
    for (t, c) in a.terms() {
        let mapped: Option<Tuple> = t
            .iter()
            .map(|s| {
                s.word.symbol_winding().map(|k| Slot {
                    row: s.row,
                    col: s.col,
                    word: Word::alpha_power(k),
                })
            })
            .collect();
        if let Some(t2) = mapped {
            out.add_tuple(t2, *c);
        }
    }
    out
}

/// The coefficient field of the closed-form action: bilinear traces of the
/// alpha-power coefficients of an `A = sum_i a_i d b_i` in lifted normal
/// form,
///
///   Re_kl = 1/2 sum_i Trace(lam^i_(-k) mu^i_l + mu^(i*)_(-l) lam^(i*)_k)
///   Im_kl = 1/2 sum_i Trace(lam^i_(-k) mu^i_l - mu^(i*)_(-l) lam^(i*)_k).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ActionCoefficients {
    pub k_cut: u32,
    pub re: BTreeMap<(i32, i32), C64>,
    pub im: BTreeMap<(i32, i32), C64>,
}

impl ActionCoefficients {
    pub fn re_at(&self, k: i32, l: i32) -> C64 {
        self.re.get(&(k, l)).copied().unwrap_or(C64::ZERO)
    }

    pub fn im_at(&self, k: i32, l: i32) -> C64 {
        self.im.get(&(k, l)).copied().unwrap_or(C64::ZERO)
    }

    pub fn set_re(&mut self, k: i32, l: i32, v: C64) {
        if v == C64::ZERO {
            self.re.remove(&(k, l));
        } else {
            self.re.insert((k, l), v);
        }
        self.k_cut = self.k_cut.max(k.unsigned_abs()).max(l.unsigned_abs());
    }

    pub fn set_im(&mut self, k: i32, l: i32, v: C64) {
        if v == C64::ZERO {
            self.im.remove(&(k, l));
        } else {
            self.im.insert((k, l), v);
        }
        self.k_cut = self.k_cut.max(k.unsigned_abs()).max(l.unsigned_abs());
    }
}

pub fn extract_coeffs(a1: &MatForm) -> Result<ActionCoefficients> {
    assert_eq!(a1.degree, 1);
    let mut out = ActionCoefficients::default();
    let mut add = |map_re: bool, k: i32, l: i32, v: C64| {
        let map = if map_re { &mut out.re } else { &mut out.im };
        let e = map.entry((k, l)).or_insert(C64::ZERO);
        *e += v;
        if *e == C64::ZERO {
            map.remove(&(k, l));
        }
        out.k_cut = out.k_cut.max(k.unsigned_abs()).max(l.unsigned_abs());
    };
    for (t, c) in a1.terms() {
        let p0 = t[0].word.as_alpha_power().ok_or_else(|| {
            Error::Domain(format!("not in lifted normal form: slot word `{}`", t[0].word))
        })?;
        let p1 = t[1].word.as_alpha_power().ok_or_else(|| {
            Error::Domain(format!("not in lifted normal form: slot word `{}`", t[1].word))
        })?;
        // Trace(E_(r0,c0) E_(r1,c1)) = [c0 = r1][c1 = r0]
        if t[0].col != t[1].row || t[1].col != t[0].row {
            continue;
        }
        let half = C64::new(0.5, 0.0);
        // first trace: lam_(-k) mu_l with -k = p0, l = p1
        add(true, -p0, p1, half * c);
        add(false, -p0, p1, half * c);
        // second trace: mu*_(-l) lam*_k with -l = p1, k = p0
        add(true, p0, -p1, half * c.conj());
        add(false, p0, -p1, -half * c.conj());
    }
    Ok(out)
}

/// JSON schema: `{"K": int, "re": [[k, l, re, im] ...], "im": [...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ActionCoefficientsJson {
    #[serde(rename = "K")]
    pub k: u32,
    pub re: Vec<(i32, i32, f64, f64)>,
    pub im: Vec<(i32, i32, f64, f64)>,
}

impl ActionCoefficientsJson {
    pub fn encode(c: &ActionCoefficients) -> Self {
        let pack = |m: &BTreeMap<(i32, i32), C64>| {
            m.iter().map(|(&(k, l), v)| (k, l, v.re, v.im)).collect()
        };
        Self {
            k: c.k_cut,
            re: pack(&c.re),
            im: pack(&c.im),
        }
    }

    pub fn decode(&self) -> ActionCoefficients {
        let mut out = ActionCoefficients {
            k_cut: self.k,
            ..Default::default()
        };
        for &(k, l, re, im) in &self.re {
            out.set_re(k, l, C64::new(re, im));
        }
        for &(k, l, re, im) in &self.im {
            out.set_im(k, l, C64::new(re, im));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// q = 0 canonical form
// ---------------------------------------------------------------------------

/// Canonical shape of an element of the q = 0 coordinate algebra:
/// a combination of pure powers `alpha^l` and sandwiches
/// `alpha*^k f(beta) alpha^l`, where `f` is a circle function acting
/// through `beta^n`, `beta*^n` and the boundary projection `e` for the
/// constant term.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CanonElem {
    pub pure: BTreeMap<i32, C64>,
    pub sand: BTreeMap<(u32, u32), FourierPoly>,
}

impl CanonElem {
    pub fn one() -> Self {
        let mut c = Self::default();
        c.pure.insert(0, C64::new(1.0, 0.0));
        c
    }

    pub fn is_zero(&self) -> bool {
        self.pure.is_empty() && self.sand.iter().all(|(_, f)| f.is_zero())
    }

    fn add_pure(&mut self, l: i32, c: C64) {
        if c == C64::ZERO {
            return;
        }
        let e = self.pure.entry(l).or_insert(C64::ZERO);
        *e += c;
        if *e == C64::ZERO {
            self.pure.remove(&l);
        }
    }

    fn add_sand(&mut self, k: u32, l: u32, f: &FourierPoly, c: C64) {
        if f.is_zero() || c == C64::ZERO {
            return;
        }
        let e = self.sand.entry((k, l)).or_insert_with(FourierPoly::zero);
        *e = e.add(&f.scale(c));
        if e.is_zero() {
            self.sand.remove(&(k, l));
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&l, &c) in &rhs.pure {
            out.add_pure(l, c);
        }
        for (&(k, l), f) in &rhs.sand {
            out.add_sand(k, l, f, C64::new(1.0, 0.0));
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::default();
        for (&l, &v) in &self.pure {
            out.add_pure(l, v * c);
        }
        for (&(k, l), f) in &self.sand {
            out.add_sand(k, l, f, c);
        }
        out
    }

    /// Right multiplication by one smooth generator letter, using the q = 0
    /// rewriting rules `alpha alpha* -> 1`, `alpha* alpha -> 1 - e`,
    /// `alpha beta^(*) -> 0`, `f(beta) beta^(*) -> (f u^(+/-1))(beta)`.
    fn mul_letter(&self, letter: crate::ncpoly::Letter) -> Self {
        use crate::ncpoly::Gen::*;
        let mut out = Self::default();
        let u1 = FourierPoly::monomial(1, C64::new(1.0, 0.0));
        let um1 = FourierPoly::monomial(-1, C64::new(1.0, 0.0));
        match (letter.gen, letter.star) {
            (Alpha, false) => {
                for (&l, &c) in &self.pure {
                    if l >= 0 {
                        out.add_pure(l + 1, c);
                    } else {
                        out.add_pure(l + 1, c);
                        // alpha*^m alpha = alpha*^(m-1) (1 - e)
                        out.add_sand((-l - 1) as u32, 0, &FourierPoly::one(), -c);
                    }
                }
                for (&(k, l), f) in &self.sand {
                    out.add_sand(k, l + 1, f, C64::new(1.0, 0.0));
                }
            }
            (Alpha, true) => {
                for (&l, &c) in &self.pure {
                    out.add_pure(l - 1, c);
                }
                for (&(k, l), f) in &self.sand {
                    if l >= 1 {
                        out.add_sand(k, l - 1, f, C64::new(1.0, 0.0));
                    }
                    // l = 0: f(beta) alpha* = 0
                }
            }
            (Beta, st) => {
                let shift = if st { &um1 } else { &u1 };
                for (&l, &c) in &self.pure {
                    if l <= 0 {
                        out.add_sand((-l) as u32, 0, shift, c);
                    }
                    // l >= 1: alpha^l beta^(*) = 0
                }
                for (&(k, l), f) in &self.sand {
                    if l == 0 {
                        out.add_sand(k, 0, &f.mul(shift), C64::new(1.0, 0.0));
                    }
                }
            }
            _ => panic!("canonical form is for the smooth alphabet"),
        }
        out
    }

    /// Expand back into the word algebra (`e` stands for `beta beta*`).
    pub fn to_poly(&self) -> NCPoly {
        let mut p = NCPoly::zero();
        for (&l, &c) in &self.pure {
            p.add_term(Word::alpha_power(l), c);
        }
        for (&(k, l), f) in &self.sand {
            let head = NCPoly::alpha_power(-(k as i32));
            let tail = NCPoly::alpha_power(l as i32);
            for (&n, &c) in f.terms() {
                let mid = if n == 0 {
                    NCPoly::word(crate::ncpoly::word_from_str("b b*").unwrap())
                } else if n > 0 {
                    let mut w = Word::empty();
                    for _ in 0..n {
                        w.letters.push(crate::ncpoly::Letter::plain(Gen::Beta));
                    }
                    NCPoly::word(w)
                } else {
                    let mut w = Word::empty();
                    for _ in 0..(-n) {
                        w.letters.push(crate::ncpoly::Letter::starred(Gen::Beta));
                    }
                    NCPoly::word(w)
                };
                p = p.add(&head.mul(&mid).mul(&tail).scale(c));
            }
        }
        p
    }
}

/// Canonical form of a smooth word at q = 0.
pub fn canon0_word(w: &Word) -> Result<CanonElem> {
    if !w.is_smooth() {
        return Err(Error::AlphabetMismatch(
            "q=0 canonical form needs words in alpha, beta and adjoints".into(),
        ));
    }
    let mut acc = CanonElem::one();
    for l in &w.letters {
        acc = acc.mul_letter(*l);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

pub fn canon0(p: &NCPoly) -> Result<CanonElem> {
    let mut acc = CanonElem::default();
    for (w, c) in p.terms() {
        acc = acc.add(&canon0_word(w)?.scale(*c));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Truncation;
    use crate::ncpoly::word_from_str;
    use crate::random::{random_form, random_word, rng};
    use crate::rep::Rep;

    #[test]
    fn sigma_is_multiplicative_and_star_preserving() {
        let mut r = rng(7);
        for _ in 0..200 {
            let w1 = random_word(&mut r, 3, false);
            let w2 = random_word(&mut r, 3, false);
            let p1 = NCPoly::word(w1.clone());
            let p2 = NCPoly::word(w2.clone());
            let lhs = sigma_poly(&p1.mul(&p2));
            let rhs = sigma_poly(&p1).mul(&sigma_poly(&p2));
            assert_eq!(lhs, rhs);
            assert_eq!(sigma_poly(&p1.star()), sigma_poly(&p1).star());
        }
    }

    #[test]
    fn sigma_intertwines_delta_with_derivative() {
        // sigma(delta(b)) = i sigma(b)' on graded words
        let mut r = rng(11);
        for _ in 0..100 {
            let w = random_word(&mut r, 4, true);
            let p = NCPoly::word(w);
            let lhs = sigma_poly(&p.delta_derivative().unwrap());
            let rhs = sigma_poly(&p).derivative().scale(C64::new(0.0, 1.0));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degree_zero_filters() {
        let p = NCPoly::word(word_from_str("a+ a-").unwrap());
        assert_eq!(degree0_gamma(&p), p);
        let p2 = NCPoly::word(word_from_str("a-").unwrap());
        assert!(degree0_gamma(&p2).is_zero());
        // del grading: del(alpha) = -alpha
        let a = NCPoly::word(word_from_str("a").unwrap());
        assert_eq!(a.del_derivative(), a.scale(C64::new(-1.0, 0.0)));
        let b = NCPoly::word(word_from_str("b").unwrap());
        assert_eq!(b.del_derivative(), b);
    }

    #[test]
    fn lift_of_symbol_is_identity_on_alpha_powers() {
        let f = FourierPoly::monomial(3, C64::new(2.0, -1.0))
            .add(&FourierPoly::monomial(-2, C64::new(0.0, 1.0)));
        assert_eq!(sigma_poly(&lift(&f)), f);
    }

    #[test]
    fn decompose_splits_and_is_idempotent() {
        let mut r = rng(23);
        for _ in 0..40 {
            let a = random_form(&mut r, 2, 1, 2);
            let (a1, a2) = decompose(&a);
            assert_eq!(a1.add(&a2), a);
            // symbols agree: the split loses nothing visible
            assert_eq!(symbol_form(&a1), symbol_form(&a));
            // idempotent
            let (a11, a12) = decompose(&a1);
            assert_eq!(a11, a1);
            assert!(a12.is_zero());
        }
    }

    #[test]
    fn extract_single_pair() {
        // a = alpha, b = alpha: the definition puts half in (-1, 1) and half in (1, -1)
        let a = MatForm::from_matrices(&[
            crate::forms::PolyMat::new(1, vec![NCPoly::alpha_power(1)]),
            crate::forms::PolyMat::new(1, vec![NCPoly::alpha_power(1)]),
        ]);
        let c = extract_coeffs(&a).unwrap();
        let half = C64::new(0.5, 0.0);
        assert_eq!(c.re_at(-1, 1), half);
        assert_eq!(c.re_at(1, -1), half);
        assert_eq!(c.im_at(-1, 1), half);
        assert_eq!(c.im_at(1, -1), -half);
        assert_eq!(c.re.len(), 2);
        assert_eq!(c.im.len(), 2);
    }

    #[test]
    fn extract_rejects_unlifted() {
        let a = MatForm::from_matrices(&[
            crate::forms::PolyMat::new(1, vec![NCPoly::word(word_from_str("b").unwrap())]),
            crate::forms::PolyMat::new(1, vec![NCPoly::alpha_power(1)]),
        ]);
        assert!(extract_coeffs(&a).is_err());
    }

    #[test]
    fn coefficients_json_roundtrip() {
        let mut c = ActionCoefficients::default();
        c.set_re(1, -1, C64::new(0.5, 0.25));
        c.set_im(0, 2, C64::new(-1.0, 0.0));
        let js = ActionCoefficientsJson::encode(&c);
        let text = serde_json::to_string(&js).unwrap();
        // pinned wire schema: {"K": int, "re": [[k,l,re,im]...], "im": [...]}
        assert_eq!(
            text,
            r#"{"K":2,"re":[[1,-1,0.5,0.25]],"im":[[0,2,-1.0,0.0]]}"#
        );
        let back: ActionCoefficientsJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.decode(), c);
    }

    #[test]
    fn canon0_basic_rewrites() {
        // alpha* alpha = 1 - e
        let c = canon0(&NCPoly::word(word_from_str("a* a").unwrap())).unwrap();
        assert_eq!(c.pure.get(&0), Some(&C64::new(1.0, 0.0)));
        assert_eq!(
            c.sand.get(&(0, 0)).unwrap().coeff(0),
            C64::new(-1.0, 0.0)
        );
        // alpha beta = 0
        let c = canon0(&NCPoly::word(word_from_str("a b").unwrap())).unwrap();
        assert!(c.is_zero());
        // beta alpha stays as a sandwich with l = 1
        let c = canon0(&NCPoly::word(word_from_str("b a").unwrap())).unwrap();
        assert_eq!(c.sand.get(&(0, 1)).unwrap().coeff(1), C64::new(1.0, 0.0));
    }

    #[test]
    fn canon0_matches_representation() {
        // the canonical expansion must act identically on the truncated space
        let rep = Rep::new(0.0, Truncation::new(14, 4).unwrap()).unwrap();
        let mut r = rng(31);
        for trial in 0..60 {
            let w = random_word(&mut r, 5, false);
            let canon = canon0_word(&w).unwrap();
            let direct = rep.poly_op(&NCPoly::word(w.clone()));
            let rebuilt = rep.poly_op(&canon.to_poly());
            let diff = direct.sub(&rebuilt);
            let cut = rep.trunc.interior_max();
            assert!(
                diff.sup_entry_interior(cut) < 1e-12,
                "trial {trial}, word {w}"
            );
        }
    }

    #[test]
    fn canon0_sigma_consistency() {
        // the pure part reproduces the letterwise symbol
        let mut r = rng(41);
        for _ in 0..80 {
            let w = random_word(&mut r, 5, false);
            let canon = canon0_word(&w).unwrap();
            let mut f = FourierPoly::zero();
            for (&l, &c) in &canon.pure {
                f.add_term(l, c);
            }
            assert_eq!(f, sigma_word(&w));
        }
    }
}
