//! Universal differential forms with matrix coefficients.
//!
//! A degree-n form is a sum of elementary tensors
//! `A^0 dA^1 ... dA^n`, each slot an `N x N` matrix over the word algebra.
//! Storage keeps every term fully expanded: a slot is a single
//! `(row, col, word)` matrix unit, a term is a `(n+1)`-tuple of slots with
//! one complex coefficient. Differential slots (index >= 1) live in the
//! quotient by the scalars, so the diagonal empty-word unit of highest
//! index is rewritten into the complement basis; with that convention two
//! forms are equal iff their term maps are equal, and all the identities
//! (`d^2 = b^2 = B^2 = bB + Bb = 0`, Leibniz, star involution) hold as
//! exact cancellations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ncpoly::{NCPoly, Word};
use crate::ops::C64;

/// One matrix-unit-times-word factor `E_(row,col) ⊗ w`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Slot {
    pub row: u8,
    pub col: u8,
    pub word: Word,
}

impl Slot {
    pub fn adjoint(&self) -> Slot {
        Slot {
            row: self.col,
            col: self.row,
            word: self.word.adjoint(),
        }
    }

    fn mul(&self, rhs: &Slot) -> Option<Slot> {
        (self.col == rhs.row).then(|| Slot {
            row: self.row,
            col: rhs.col,
            word: self.word.concat(&rhs.word),
        })
    }

    fn is_unit_candidate(&self, n: u8) -> bool {
        self.row == n - 1 && self.col == n - 1 && self.word.is_empty()
    }
}

pub type Tuple = Vec<Slot>;

/// A matrix of polynomials, the input shape for gauge potentials and
/// unitaries before expansion into elementary terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMat {
    pub n: u8,
    pub entries: Vec<NCPoly>,
}

impl PolyMat {
    pub fn new(n: u8, entries: Vec<NCPoly>) -> Self {
        assert_eq!(entries.len(), (n as usize) * (n as usize));
        Self { n, entries }
    }

    pub fn scalar(n: u8, c: C64) -> Self {
        let mut entries = vec![NCPoly::zero(); (n as usize) * (n as usize)];
        for k in 0..n as usize {
            entries[k * n as usize + k] = NCPoly::scalar(c);
        }
        Self { n, entries }
    }

    pub fn identity(n: u8) -> Self {
        Self::scalar(n, C64::new(1.0, 0.0))
    }

    pub fn entry(&self, r: u8, c: u8) -> &NCPoly {
        &self.entries[r as usize * self.n as usize + c as usize]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n as usize;
        let mut entries = vec![NCPoly::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.entries[r * n + c].star();
            }
        }
        Self { n: self.n, entries }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n as usize;
        let mut entries = vec![NCPoly::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc = NCPoly::zero();
                for k in 0..n {
                    acc = acc.add(&self.entries[r * n + k].mul(&rhs.entries[k * n + c]));
                }
                entries[r * n + c] = acc;
            }
        }
        Self { n: self.n, entries }
    }

    fn elements(&self) -> Vec<(Slot, C64)> {
        let mut out = Vec::new();
        for r in 0..self.n {
            for c in 0..self.n {
                for (w, v) in self.entry(r, c).terms() {
                    out.push((
                        Slot {
                            row: r,
                            col: c,
                            word: w.clone(),
                        },
                        *v,
                    ));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatForm {
    pub n: u8,
    pub degree: usize,
    terms: BTreeMap<Tuple, C64>,
}

impl MatForm {
    pub fn zero(n: u8, degree: usize) -> Self {
        Self {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple, &C64)> {
        self.terms.iter()
    }

    /// Insert an elementary term, rewriting differential slots into the
    /// scalar-quotient basis. The last diagonal empty-word unit expands as
    /// minus the sum of the lower ones (it equals `1 - sum_{k<N-1} E_kk`
    /// and `d1 = 0`); in particular it vanishes for `N = 1`.
    pub fn add_tuple(&mut self, tuple: Tuple, coeff: C64) {
        debug_assert_eq!(tuple.len(), self.degree + 1);
        if coeff == C64::ZERO {
            return;
        }
        for i in 1..tuple.len() {
            if tuple[i].is_unit_candidate(self.n) {
                if self.n == 1 {
                    return;
                }
                for k in 0..self.n - 1 {
                    let mut t = tuple.clone();
                    t[i] = Slot {
                        row: k,
                        col: k,
                        word: Word::empty(),
                    };
                    self.add_tuple(t, -coeff);
                }
                return;
            }
        }
        match self.terms.entry(tuple) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + coeff;
                if v == C64::ZERO {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// Build `M^0 dM^1 ... dM^n` from matrices of polynomials.
    pub fn from_matrices(mats: &[PolyMat]) -> Self {
        assert!(!mats.is_empty());
        let n = mats[0].n;
        let degree = mats.len() - 1;
        let mut out = Self::zero(n, degree);
        let slot_lists: Vec<Vec<(Slot, C64)>> = mats.iter().map(PolyMat::elements).collect();
        let mut stack: Vec<(Tuple, C64)> = vec![(Vec::new(), C64::new(1.0, 0.0))];
        for list in &slot_lists {
            let mut next = Vec::with_capacity(stack.len() * list.len());
            for (t, c) in &stack {
                for (s, v) in list {
                    let mut t2 = t.clone();
                    t2.push(s.clone());
                    next.push((t2, c * v));
                }
            }
            stack = next;
        }
        for (t, c) in stack {
            out.add_tuple(t, c);
        }
        out
    }

    /// Degree-zero form from a matrix.
    pub fn from_matrix(m: &PolyMat) -> Self {
        Self::from_matrices(std::slice::from_ref(m))
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        assert_eq!(self.degree, rhs.degree);
        assert_eq!(self.n, rhs.n);
        for (t, c) in rhs.terms() {
            self.add_tuple(t.clone(), *c);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::ZERO {
            return Self::zero(self.n, self.degree);
        }
        Self {
            n: self.n,
            degree: self.degree,
            terms: self.terms.iter().map(|(t, v)| (t.clone(), v * c)).collect(),
        }
    }

    /// `d(a^0 da^1 ...) = da^0 da^1 ...`; terms whose leading slot reduces
    /// to a scalar die through the quotient rewriting.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.n, self.degree + 1);
        for (t, c) in self.terms() {
            for k in 0..self.n {
                let mut t2 = Vec::with_capacity(t.len() + 1);
                t2.push(Slot {
                    row: k,
                    col: k,
                    word: Word::empty(),
                });
                t2.extend(t.iter().cloned());
                out.add_tuple(t2, *c);
            }
        }
        out
    }

    /// Right module action by one elementary factor.
    fn right_mul_elem(&self, s: &Slot, coeff: C64) -> Self {
        let n = self.degree;
        let mut out = Self::zero(self.n, n);
        for (t, c) in self.terms() {
            let c = *c * coeff;
            if n == 0 {
                if let Some(p) = t[0].mul(s) {
                    out.add_tuple(vec![p], c);
                }
                continue;
            }
            // a^0 da^1 ... d(a^n s)
            if let Some(p) = t[n].mul(s) {
                let mut t2 = t.clone();
                t2[n] = p;
                out.add_tuple(t2, c);
            }
            // sum_j (-1)^(n-j) a^0 ... d(a^j a^(j+1)) ... da^n ds
            for j in 1..n {
                if let Some(p) = t[j].mul(&t[j + 1]) {
                    let mut t2 = Vec::with_capacity(n + 1);
                    t2.extend(t[..j].iter().cloned());
                    t2.push(p);
                    t2.extend(t[j + 2..].iter().cloned());
                    t2.push(s.clone());
                    let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
                    out.add_tuple(t2, c * sign);
                }
            }
            // (-1)^n a^0 a^1 da^2 ... da^n ds
            if let Some(p) = t[0].mul(&t[1]) {
                let mut t2 = Vec::with_capacity(n + 1);
                t2.push(p);
                t2.extend(t[2..].iter().cloned());
                t2.push(s.clone());
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                out.add_tuple(t2, c * sign);
            }
        }
        out
    }

    fn left_mul_elem(&self, s: &Slot, coeff: C64) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (t, c) in self.terms() {
            if let Some(p) = s.mul(&t[0]) {
                let mut t2 = t.clone();
                t2[0] = p;
                out.add_tuple(t2, *c * coeff);
            }
        }
        out
    }

    pub fn left_mul(&self, m: &PolyMat) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (s, v) in m.elements() {
            out.add_assign(&self.left_mul_elem(&s, v));
        }
        out
    }

    pub fn right_mul(&self, m: &PolyMat) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (s, v) in m.elements() {
            out.add_assign(&self.right_mul_elem(&s, v));
        }
        out
    }

    /// Graded product of forms.
    pub fn product(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let mut out = Self::zero(self.n, self.degree + rhs.degree);
        for (t, c) in rhs.terms() {
            let moved = self.right_mul_elem(&t[0], *c);
            for (t1, c1) in moved.terms() {
                let mut t2 = t1.clone();
                t2.extend(t[1..].iter().cloned());
                out.add_tuple(t2, *c1);
            }
        }
        out
    }

    /// Hochschild boundary; zero on degree 0.
    pub fn b(&self) -> Self {
        let n = self.degree;
        if n == 0 {
            return Self::zero(self.n, 0);
        }
        let head = Self {
            n: self.n,
            degree: n - 1,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t[..n].to_vec(), *c))
                .collect(),
        };
        // (-1)^(n-1) [head, a^n] termwise
        let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let mut out = Self::zero(self.n, n - 1);
        for (t, c) in self.terms() {
            let last = &t[n];
            let single = Self {
                n: self.n,
                degree: n - 1,
                terms: BTreeMap::from([(t[..n].to_vec(), *c)]),
            };
            let r = single.right_mul_elem(last, C64::new(sign, 0.0));
            let l = single.left_mul_elem(last, C64::new(-sign, 0.0));
            out.add_assign(&r);
            out.add_assign(&l);
        }
        debug_assert_eq!(head.degree, out.degree);
        out
    }

    /// Connes boundary `B(a^0 da^1 ... da^n) =
    /// sum_i (-1)^(n i) d a^(n+1-i) ... da^n da^0 ... da^(n-i)`.
    pub fn b_conn(&self) -> Self {
        let n = self.degree;
        let mut out = Self::zero(self.n, n + 1);
        for (t, c) in self.terms() {
            for i in 0..=n {
                let sign = if (n * i) % 2 == 0 { 1.0 } else { -1.0 };
                for k in 0..self.n {
                    let mut t2 = Vec::with_capacity(n + 2);
                    t2.push(Slot {
                        row: k,
                        col: k,
                        word: Word::empty(),
                    });
                    // rotation: start at position n+1-i
                    for p in 0..=n {
                        t2.push(t[(n + 1 - i + p) % (n + 1)].clone());
                    }
                    out.add_tuple(t2, *c * sign);
                }
            }
        }
        out
    }

    /// `(a^0 da^1 ... da^n)* = (-1)^n da^(n*) ... da^(1*) a^(0*)`.
    pub fn star(&self) -> Self {
        let n = self.degree;
        let mut out = Self::zero(self.n, n);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for (t, c) in self.terms() {
            let coeff = C64::new(sign, 0.0) * c.conj();
            if n == 0 {
                out.add_tuple(vec![t[0].adjoint()], coeff);
                continue;
            }
            let mut rev = Self::zero(self.n, n);
            for k in 0..self.n {
                let mut t2 = Vec::with_capacity(n + 1);
                t2.push(Slot {
                    row: k,
                    col: k,
                    word: Word::empty(),
                });
                for p in (1..=n).rev() {
                    t2.push(t[p].adjoint());
                }
                rev.add_tuple(t2, coeff);
            }
            out.add_assign(&rev.right_mul_elem(&t[0].adjoint(), C64::new(1.0, 0.0)));
        }
        out
    }

    pub fn hermitize(&self) -> Self {
        self.add(&self.star()).scale(C64::new(0.5, 0.0))
    }

    /// Curvature `dA + A^2` of a 1-form.
    pub fn curvature(&self) -> Self {
        assert_eq!(self.degree, 1);
        self.d().add(&self.product(self))
    }

    pub fn max_word_len(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|t| t.iter().map(|s| s.word.len()))
            .max()
            .unwrap_or(0)
    }
}

/// Gauge transform `A -> u A u* + u du*` of a 1-form by a unitary matrix of
/// polynomials. Unitarity is the caller's responsibility at the symbolic
/// level; `represent`-based checks live with the index machinery.
pub fn gauge(a: &MatForm, u: &PolyMat) -> MatForm {
    assert_eq!(a.degree, 1);
    let ustar = u.adjoint();
    let conj = a.left_mul(u).right_mul(&ustar);
    let udu = MatForm::from_matrices(&[u.clone(), ustar]);
    conj.add(&udu)
}

/// JSON fixture form: terms as `(coeff, [[row, col, "word"], ...])`.
#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct MatFormJson {
    pub n: u8,
    pub degree: usize,
    pub terms: Vec<((f64, f64), Vec<(u8, u8, String)>)>,
}

impl MatFormJson {
    pub fn encode(f: &MatForm) -> Self {
        Self {
            n: f.n,
            degree: f.degree,
            terms: f
                .terms()
                .map(|(t, c)| {
                    (
                        (c.re, c.im),
                        t.iter()
                            .map(|s| (s.row, s.col, s.word.to_string()))
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<MatForm> {
        let mut out = MatForm::zero(self.n, self.degree);
        for ((re, im), slots) in &self.terms {
            if slots.len() != self.degree + 1 {
                return Err(Error::Domain(format!(
                    "tuple of length {} in a degree-{} form",
                    slots.len(),
                    self.degree
                )));
            }
            let tuple: Result<Tuple> = slots
                .iter()
                .map(|(r, c, w)| {
                    Ok(Slot {
                        row: *r,
                        col: *c,
                        word: crate::ncpoly::word_from_str(w)?,
                    })
                })
                .collect();
            out.add_tuple(tuple?, C64::new(*re, *im));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{Gen, Letter};

    fn poly(s: &str) -> NCPoly {
        NCPoly::word(crate::ncpoly::word_from_str(s).unwrap())
    }

    fn mat1(s: &str) -> PolyMat {
        PolyMat::new(1, vec![poly(s)])
    }

    #[test]
    fn d_of_scalar_slot_vanishes() {
        let f = MatForm::from_matrices(&[mat1("a"), PolyMat::identity(1)]);
        assert!(f.is_zero());
        let f = MatForm::from_matrices(&[mat1("a"), mat1("b")]);
        assert_eq!(f.num_terms(), 1);
    }

    #[test]
    fn d_squared_zero() {
        let f = MatForm::from_matrices(&[mat1("a"), mat1("b a*")]);
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn b_on_one_form_is_commutator() {
        let f = MatForm::from_matrices(&[mat1("a"), mat1("b")]);
        let b = f.b();
        // a b - b a
        let mut expect = MatForm::zero(1, 0);
        expect.add_tuple(
            vec![Slot { row: 0, col: 0, word: crate::ncpoly::word_from_str("a b").unwrap() }],
            C64::new(1.0, 0.0),
        );
        expect.add_tuple(
            vec![Slot { row: 0, col: 0, word: crate::ncpoly::word_from_str("b a").unwrap() }],
            C64::new(-1.0, 0.0),
        );
        assert_eq!(b, expect);
    }

    #[test]
    fn b_of_zero_form_is_zero() {
        let f = MatForm::from_matrix(&mat1("a b"));
        assert!(f.b().is_zero());
    }

    #[test]
    fn connes_b_on_zero_form_is_d() {
        let f = MatForm::from_matrix(&mat1("a b*"));
        assert_eq!(f.b_conn(), f.d());
    }

    #[test]
    fn star_of_one_form_matches_leibniz_expansion() {
        // (a^0 da^1)* = -da^(1*) a^(0*) = a^(1*) d a^(0*) - d(a^(1*) a^(0*))
        let f = MatForm::from_matrices(&[mat1("a"), mat1("b")]);
        let star = f.star();
        let direct = MatForm::from_matrices(&[mat1("b*"), mat1("a*")]).sub(
            &MatForm::from_matrix(&mat1("b* a*")).d(),
        );
        assert_eq!(star, direct);
    }

    #[test]
    fn two_by_two_star_transposes() {
        let u = PolyMat::new(
            2,
            vec![poly("a"), NCPoly::zero(), poly("b"), poly("a*")],
        );
        let f = MatForm::from_matrices(&[u.clone(), u.clone()]);
        let ss = f.star().star();
        assert_eq!(ss, f);
    }

    #[test]
    fn hermitize_fixed_point() {
        let f = MatForm::from_matrices(&[mat1("a"), mat1("a")]);
        let h = f.hermitize();
        assert_eq!(h.star(), h);
    }

    #[test]
    fn gauge_by_identity_is_identity() {
        let a = MatForm::from_matrices(&[mat1("a"), mat1("b")]).hermitize();
        let g = gauge(&a, &PolyMat::identity(1));
        assert_eq!(g, a);
    }

    #[test]
    fn product_degree_and_leading_slot() {
        let a = MatForm::from_matrices(&[mat1("a"), mat1("b")]);
        let p = a.product(&a);
        assert_eq!(p.degree, 2);
        assert!(!p.is_zero());
    }

    #[test]
    fn right_module_bimodule_law() {
        // (a^0 da^1 da^2) x expands with the printed three-term rule.
        let f = MatForm::from_matrices(&[mat1("a"), mat1("b"), mat1("a*")]);
        let x = mat1("b*");
        let moved = f.right_mul(&x);
        let mut expect = MatForm::zero(1, 2);
        let w = |s: &str| crate::ncpoly::word_from_str(s).unwrap();
        let sl = |s: &str| Slot { row: 0, col: 0, word: w(s) };
        expect.add_tuple(vec![sl("a"), sl("b"), sl("a* b*")], C64::new(1.0, 0.0));
        expect.add_tuple(vec![sl("a"), sl("b a*"), sl("b*")], C64::new(-1.0, 0.0));
        expect.add_tuple(vec![sl("a b"), sl("a*"), sl("b*")], C64::new(1.0, 0.0));
        assert_eq!(moved, expect);
    }

    #[test]
    fn json_roundtrip() {
        let f = MatForm::from_matrices(&[mat1("a"), mat1("b a-")]).hermitize();
        let js = MatFormJson::encode(&f);
        let text = serde_json::to_string(&js).unwrap();
        let back: MatFormJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.decode().unwrap(), f);
    }

    #[test]
    fn quotient_rewrites_unit_slot() {
        // In a 2x2 form, d-slot E_11 (empty word) becomes -E_00.
        let mut f = MatForm::zero(2, 1);
        f.add_tuple(
            vec![
                Slot { row: 0, col: 0, word: Word::one(Letter::plain(Gen::Alpha)) },
                Slot { row: 1, col: 1, word: Word::empty() },
            ],
            C64::new(1.0, 0.0),
        );
        let (t, c) = f.terms().next().unwrap();
        assert_eq!(t[1].row, 0);
        assert_eq!(*c, C64::new(-1.0, 0.0));
    }
}
