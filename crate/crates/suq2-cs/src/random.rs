//! Seeded random words, polynomials and forms for property suites and the
//! gauge-check command. Coefficients are Gaussian integers by default so
//! that the exact-identity tests cancel in floating point without rounding.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::forms::{MatForm, PolyMat};
use crate::ncpoly::{Gen, Letter, NCPoly, Word};
use crate::ops::C64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform coordinates in `[-scale, scale)`, for optimizer starts.
pub fn random_coords(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-scale..scale)).collect()
}

const SMOOTH: [Gen; 2] = [Gen::Alpha, Gen::Beta];
const GRADED: [Gen; 4] = [Gen::AlphaPlus, Gen::AlphaMinus, Gen::BetaPlus, Gen::BetaMinus];

pub fn random_word(rng: &mut ChaCha8Rng, max_len: usize, graded: bool) -> Word {
    let len = rng.random_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let gen = if graded {
                GRADED[rng.random_range(0..GRADED.len())]
            } else {
                SMOOTH[rng.random_range(0..SMOOTH.len())]
            };
            Letter {
                gen,
                star: rng.random_bool(0.5),
            }
        })
        .collect();
    Word { letters }
}

pub fn gaussian_int(rng: &mut ChaCha8Rng, bound: i32) -> C64 {
    C64::new(
        rng.random_range(-bound..=bound) as f64,
        rng.random_range(-bound..=bound) as f64,
    )
}

pub fn random_poly(rng: &mut ChaCha8Rng, terms: usize, max_len: usize, graded: bool) -> NCPoly {
    let mut p = NCPoly::zero();
    for _ in 0..terms {
        p.add_term(random_word(rng, max_len, graded), gaussian_int(rng, 3));
    }
    p
}

pub fn random_polymat(rng: &mut ChaCha8Rng, n: u8, max_len: usize) -> PolyMat {
    let entries = (0..(n as usize * n as usize))
        .map(|_| random_poly(rng, 1, max_len, false))
        .collect();
    PolyMat::new(n, entries)
}

/// A random form of the given degree, sum of a couple of elementary
/// matrix tuples.
pub fn random_form(rng: &mut ChaCha8Rng, n: u8, degree: usize, max_len: usize) -> MatForm {
    let mut f = MatForm::zero(n, degree);
    for _ in 0..2 {
        let mats: Vec<PolyMat> = (0..=degree).map(|_| random_polymat(rng, n, max_len)).collect();
        f = f.add(&MatForm::from_matrices(&mats));
    }
    f
}

/// Random 1-form `sum_i a_i d b_i` whose coefficients are polynomials in
/// alpha-powers only (the shape of the closed-form action ansatz),
/// not yet hermitized.
pub fn random_lifted_pairs(
    rng: &mut ChaCha8Rng,
    n: u8,
    k_cut: i32,
    pairs: usize,
    scale: f64,
) -> MatForm {
    random_lifted_pairs_sized(rng, n, k_cut, pairs, scale, 2)
}

/// As `random_lifted_pairs` with an explicit Fourier-term count per matrix
/// entry; matrix tests keep this at one to tame the tuple growth of cubes.
pub fn random_lifted_pairs_sized(
    rng: &mut ChaCha8Rng,
    n: u8,
    k_cut: i32,
    pairs: usize,
    scale: f64,
    terms: usize,
) -> MatForm {
    let mut f = MatForm::zero(n, 1);
    for _ in 0..pairs {
        let mut mk = || {
            let entries = (0..(n as usize * n as usize))
                .map(|_| {
                    let mut p = NCPoly::zero();
                    for _ in 0..terms {
                        let k = rng.random_range(-k_cut..=k_cut);
                        let c = C64::new(
                            scale * (rng.random_range(-8..=8) as f64) / 8.0,
                            scale * (rng.random_range(-8..=8) as f64) / 8.0,
                        );
                        p.add_term(Word::alpha_power(k), c);
                    }
                    p
                })
                .collect();
            PolyMat::new(n, entries)
        };
        let a = mk();
        let b = mk();
        f = f.add(&MatForm::from_matrices(&[a, b]));
    }
    f
}

/// Hermitized version of `random_lifted_pairs`.
pub fn random_lifted_pair_form(
    rng: &mut ChaCha8Rng,
    n: u8,
    k_cut: i32,
    pairs: usize,
    scale: f64,
) -> MatForm {
    random_lifted_pairs(rng, n, k_cut, pairs, scale).hermitize()
}

/// Sparse matrix 1-form for the gauge suite: each of `a` and `b` carries a
/// single alpha-power monomial in one random matrix entry, keeping the
/// tuple count of gauge transforms and cubes small.
pub fn random_sparse_lifted(rng: &mut ChaCha8Rng, n: u8, k_cut: i32, scale: f64) -> MatForm {
    let mk = |rng: &mut ChaCha8Rng| {
        let mut entries = vec![NCPoly::zero(); (n as usize) * (n as usize)];
        let slot = rng.random_range(0..entries.len());
        let k = rng.random_range(-k_cut..=k_cut);
        let c = C64::new(
            scale * (rng.random_range(-8..=8) as f64) / 8.0,
            scale * (rng.random_range(-8..=8) as f64) / 8.0,
        );
        entries[slot] = {
            let mut p = NCPoly::zero();
            p.add_term(Word::alpha_power(k), c);
            p
        };
        PolyMat::new(n, entries)
    };
    let a = mk(rng);
    let b = mk(rng);
    MatForm::from_matrices(&[a, b]).hermitize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_identities_on_random_forms() {
        let mut rng = rng(0x5eed);
        for trial in 0..60 {
            let n = if trial % 2 == 0 { 1 } else { 2 };
            let deg = trial % 3;
            let f = random_form(&mut rng, n, deg, 2);
            assert!(f.d().d().is_zero(), "d^2 trial {trial}");
            assert!(f.b_conn().b_conn().is_zero(), "B^2 trial {trial}");
            if deg >= 2 {
                assert!(f.b().b().is_zero(), "b^2 trial {trial}");
            }
            if deg == 0 {
                // on degree zero the relation degenerates to b(B(a)) = 0
                assert!(f.b_conn().b().is_zero(), "bB trial {trial}");
            } else {
                let anti = f.b_conn().b().add(&f.b().b_conn());
                assert!(anti.is_zero(), "bB + Bb trial {trial}");
            }
            assert_eq!(f.star().star(), f, "star involution trial {trial}");
        }
    }

    #[test]
    fn graded_leibniz_on_random_forms() {
        let mut rng = rng(0xfeed);
        for trial in 0..40 {
            let n = if trial % 2 == 0 { 1 } else { 2 };
            let p = trial % 2;
            let q = (trial / 2) % 2;
            let f = random_form(&mut rng, n, p, 2);
            let g = random_form(&mut rng, n, q, 2);
            let lhs = f.product(&g).d();
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = f
                .d()
                .product(&g)
                .add(&f.product(&g.d()).scale(C64::new(sign, 0.0)));
            assert_eq!(lhs, rhs, "Leibniz trial {trial} (p={p}, q={q})");
        }
    }

    #[test]
    fn product_star_antihomomorphism() {
        // (fg)* = g* f*; the sign in (dx)* = -d(x*) already carries the grading
        let mut rng = rng(0xabcd);
        for trial in 0..20 {
            let p = trial % 2;
            let q = (trial / 2) % 2;
            let f = random_form(&mut rng, 1, p, 2);
            let g = random_form(&mut rng, 1, q, 2);
            let lhs = f.product(&g).star();
            let rhs = g.star().product(&f.star());
            assert_eq!(lhs, rhs, "trial {trial} p={p} q={q}");
        }
    }
}
