//! Noncommutative polynomials over the generator alphabets.
//!
//! Two alphabets are in play: the coordinate algebra generated by
//! `alpha, beta` and adjoints (the "smooth" alphabet), and the graded
//! algebra generated by the homogeneous pieces `alpha±, beta±` and
//! adjoints. A polynomial never mixes the two; `expand` maps the first
//! into the second via `alpha = alpha+ + alpha-`, `beta = beta+ + beta-`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Alpha,
    Beta,
    AlphaPlus,
    AlphaMinus,
    BetaPlus,
    BetaMinus,
}

impl Gen {
    pub fn is_graded(self) -> bool {
        !matches!(self, Gen::Alpha | Gen::Beta)
    }

    fn token(self) -> &'static str {
        match self {
            Gen::Alpha => "a",
            Gen::Beta => "b",
            Gen::AlphaPlus => "a+",
            Gen::AlphaMinus => "a-",
            Gen::BetaPlus => "b+",
            Gen::BetaMinus => "b-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub star: bool,
}

impl Letter {
    pub fn plain(gen: Gen) -> Self {
        Self { gen, star: false }
    }

    pub fn starred(gen: Gen) -> Self {
        Self { gen, star: true }
    }

    pub fn adjoint(self) -> Self {
        Self {
            gen: self.gen,
            star: !self.star,
        }
    }

    /// Eigenvalue of the grading derivation `[|D|, .]`; defined only for
    /// homogeneous letters.
    pub fn gamma_degree(self) -> Option<i32> {
        let d = match self.gen {
            Gen::AlphaPlus | Gen::BetaPlus => 1,
            Gen::AlphaMinus | Gen::BetaMinus => -1,
            _ => return None,
        };
        Some(if self.star { -d } else { d })
    }

    /// Degree under `∂ = ∂_beta - ∂_alpha`, with `∂_alpha(alpha) = alpha`:
    /// alpha-type letters count -1, beta-type +1, adjoints flip.
    pub fn del_degree(self) -> i32 {
        let d = match self.gen {
            Gen::Alpha | Gen::AlphaPlus | Gen::AlphaMinus => -1,
            Gen::Beta | Gen::BetaPlus | Gen::BetaMinus => 1,
        };
        if self.star {
            -d
        } else {
            d
        }
    }

    /// Winding of the circle symbol: the symbol map sends `alpha` (and its
    /// lowering part) to the unitary generator, everything else to zero.
    pub fn symbol_winding(self) -> Option<i32> {
        match self.gen {
            Gen::Alpha | Gen::AlphaMinus => Some(if self.star { -1 } else { 1 }),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.gen.token(), if self.star { "*" } else { "" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn one(letter: Letter) -> Self {
        Self {
            letters: vec![letter],
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        Word { letters }
    }

    pub fn adjoint(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.adjoint()).collect(),
        }
    }

    pub fn is_graded(&self) -> bool {
        self.letters.iter().all(|l| l.gen.is_graded())
    }

    pub fn is_smooth(&self) -> bool {
        self.letters.iter().all(|l| !l.gen.is_graded())
    }

    pub fn gamma_degree(&self) -> Option<i32> {
        self.letters.iter().map(|l| l.gamma_degree()).sum()
    }

    pub fn del_degree(&self) -> i32 {
        self.letters.iter().map(|l| l.del_degree()).sum()
    }

    /// Winding of the circle symbol, `None` when the symbol vanishes.
    pub fn symbol_winding(&self) -> Option<i32> {
        self.letters.iter().map(|l| l.symbol_winding()).sum()
    }

    /// Pure power of `alpha`: exponent `k >= 0` is `alpha^k`, `k < 0` is
    /// `alpha*^(-k)`; the empty word is `k = 0`.
    pub fn alpha_power(k: i32) -> Word {
        let l = if k >= 0 {
            Letter::plain(Gen::Alpha)
        } else {
            Letter::starred(Gen::Alpha)
        };
        Word {
            letters: vec![l; k.unsigned_abs() as usize],
        }
    }

    /// Exponent when the word is a pure alpha power, else `None`.
    pub fn as_alpha_power(&self) -> Option<i32> {
        let mut k = 0i32;
        for l in &self.letters {
            if l.gen != Gen::Alpha {
                return None;
            }
            let s = if l.star { -1 } else { 1 };
            if k != 0 && k.signum() != s {
                return None;
            }
            k += s;
        }
        Some(k)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let toks: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// Parse a whitespace-separated list of letter tokens (`a`, `a*`, `b+`,
/// `b-*`, ...); `1` denotes the empty word.
pub fn word_from_str(s: &str) -> Result<Word> {
    let mut letters = Vec::new();
    for tok in s.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (body, star) = match tok.strip_suffix('*') {
            Some(b) => (b, true),
            None => (tok, false),
        };
        let gen = match body {
            "a" => Gen::Alpha,
            "b" => Gen::Beta,
            "a+" => Gen::AlphaPlus,
            "a-" => Gen::AlphaMinus,
            "b+" => Gen::BetaPlus,
            "b-" => Gen::BetaMinus,
            _ => {
                return Err(Error::AlphabetMismatch(format!(
                    "unknown generator token `{tok}`"
                )))
            }
        };
        letters.push(Letter { gen, star });
    }
    Ok(Word { letters })
}

/// Finitely supported complex combination of words.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, C64>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(C64::new(1.0, 0.0))
    }

    pub fn scalar(c: C64) -> Self {
        let mut p = Self::default();
        p.add_term(Word::empty(), c);
        p
    }

    pub fn letter(l: Letter) -> Self {
        let mut p = Self::default();
        p.add_term(Word::one(l), C64::new(1.0, 0.0));
        p
    }

    pub fn word(w: Word) -> Self {
        let mut p = Self::default();
        p.add_term(w, C64::new(1.0, 0.0));
        p
    }

    pub fn alpha_power(k: i32) -> Self {
        Self::word(Word::alpha_power(k))
    }

    pub fn add_term(&mut self, w: Word, c: C64) {
        if c == C64::ZERO {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v == C64::ZERO {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> C64 {
        self.terms.get(w).copied().unwrap_or(C64::ZERO)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), *c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::ZERO {
            return Self::zero();
        }
        let mut out = Self::default();
        for (w, v) in self.terms() {
            out.terms.insert(w.clone(), *v * c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::default();
        for (w1, c1) in self.terms() {
            for (w2, c2) in rhs.terms() {
                out.add_term(w1.concat(w2), *c1 * *c2);
            }
        }
        out
    }

    pub fn star(&self) -> Self {
        let mut out = Self::default();
        for (w, c) in self.terms() {
            out.add_term(w.adjoint(), c.conj());
        }
        out
    }

    pub fn is_smooth(&self) -> bool {
        self.terms.keys().all(Word::is_smooth)
    }

    pub fn is_graded(&self) -> bool {
        self.terms.keys().all(Word::is_graded)
    }

    /// Substitute `alpha -> alpha+ + alpha-`, `beta -> beta+ + beta-`.
    pub fn expand_graded(&self) -> Self {
        let mut out = Self::default();
        for (w, c) in self.terms() {
            let mut words: Vec<Word> = vec![Word::empty()];
            for l in &w.letters {
                let choices: Vec<Letter> = match l.gen {
                    Gen::Alpha => vec![
                        Letter { gen: Gen::AlphaPlus, star: l.star },
                        Letter { gen: Gen::AlphaMinus, star: l.star },
                    ],
                    Gen::Beta => vec![
                        Letter { gen: Gen::BetaPlus, star: l.star },
                        Letter { gen: Gen::BetaMinus, star: l.star },
                    ],
                    _ => vec![*l],
                };
                let mut next = Vec::with_capacity(words.len() * choices.len());
                for w0 in &words {
                    for ch in &choices {
                        let mut w1 = w0.clone();
                        w1.letters.push(*ch);
                        next.push(w1);
                    }
                }
                words = next;
            }
            for w1 in words {
                out.add_term(w1, *c);
            }
        }
        out
    }

    /// Component of homogeneous degree `deg` under the grading `f`.
    pub fn graded_component(&self, deg: i32, f: impl Fn(&Word) -> Option<i32>) -> Self {
        let mut out = Self::default();
        for (w, c) in self.terms() {
            if f(w) == Some(deg) {
                out.add_term(w.clone(), *c);
            }
        }
        out
    }

    /// `∂`-image: each word is scaled by its `∂`-degree.
    pub fn del_derivative(&self) -> Self {
        let mut out = Self::default();
        for (w, c) in self.terms() {
            out.add_term(w.clone(), *c * C64::new(w.del_degree() as f64, 0.0));
        }
        out
    }

    /// Grading derivation `[|D|, .]` at the symbol level: requires a graded
    /// polynomial (expand first).
    pub fn delta_derivative(&self) -> Result<Self> {
        let mut out = Self::default();
        for (w, c) in self.terms() {
            let d = w.gamma_degree().ok_or_else(|| {
                Error::AlphabetMismatch("delta acts on graded words; call expand_graded".into())
            })?;
            out.add_term(w.clone(), *c * C64::new(d as f64, 0.0));
        }
        Ok(out)
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(w, c)| format!("({:.6}{:+.6}i) {}", c.re, c.im, w))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_reverses_and_flips() {
        let w = word_from_str("a b* a-").unwrap();
        assert_eq!(w.adjoint().to_string(), "a-* b a*");
        assert_eq!(w.adjoint().adjoint(), w);
    }

    #[test]
    fn degrees() {
        let w = word_from_str("a+ b-* a-").unwrap();
        assert_eq!(w.gamma_degree(), Some(1 + 1 - 1));
        // del: a+ -> -1, b-* -> -1, a- -> -1
        assert_eq!(w.del_degree(), -3);
        let smooth = word_from_str("a a b*").unwrap();
        assert_eq!(smooth.gamma_degree(), None);
        assert_eq!(smooth.del_degree(), -2 - 1);
    }

    #[test]
    fn expand_counts() {
        let p = NCPoly::word(word_from_str("a b").unwrap());
        let e = p.expand_graded();
        assert_eq!(e.num_terms(), 4);
        assert!(e.is_graded());
    }

    #[test]
    fn alpha_power_roundtrip() {
        assert_eq!(Word::alpha_power(3).as_alpha_power(), Some(3));
        assert_eq!(Word::alpha_power(-2).as_alpha_power(), Some(-2));
        assert_eq!(Word::empty().as_alpha_power(), Some(0));
        assert_eq!(word_from_str("a a*").unwrap().as_alpha_power(), None);
    }

    #[test]
    fn poly_cancellation() {
        let p = NCPoly::letter(Letter::plain(Gen::Alpha));
        let d = p.sub(&p);
        assert!(d.is_zero());
    }
}
