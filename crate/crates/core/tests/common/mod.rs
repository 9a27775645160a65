#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starq_core::cochain::Slots;
use starq_core::opo::{ordered_terms, AbstractTerm, Arrangement};
use starq_core::rational::rat;
use starq_core::{Cochain, Coefficient, JetPolynomial, JetVariable, MultiIndex, Polynomial, Rational};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Seed from `STARQ_SEED`, else a fixed default.
pub fn seed() -> u64 {
    std::env::var("STARQ_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-6i64..=6);
    }
    rat(n, rng.gen_range(1i64..=4))
}

pub fn multi_index(rng: &mut impl Rng, min_len: usize, max_len: usize) -> MultiIndex {
    let len = rng.gen_range(min_len..=max_len);
    let mut counts = [0u8; 3];
    for _ in 0..len {
        counts[rng.gen_range(0..3)] += 1;
    }
    MultiIndex::from_counts(counts)
}

pub fn polynomial(rng: &mut impl Rng, max_degree: usize, terms: usize) -> Polynomial {
    let mut p = Polynomial::zero();
    for _ in 0..terms {
        let c = multi_index(rng, 0, max_degree).counts();
        p = &p + &Polynomial::monomial([c[0] as u32, c[1] as u32, c[2] as u32], nonzero_rational(rng));
    }
    p
}

pub fn jet_variable(rng: &mut impl Rng) -> JetVariable {
    if rng.gen_bool(0.7) {
        JetVariable::phi(multi_index(rng, 1, 3)).expect("nonempty index")
    } else {
        JetVariable::psi(multi_index(rng, 0, 2))
    }
}

/// Sum of `terms` monomials, each a product of at most `max_factors` jets.
pub fn jet_polynomial(rng: &mut impl Rng, max_factors: usize, terms: usize) -> JetPolynomial {
    let mut p = JetPolynomial::zero();
    for _ in 0..terms {
        let mut m = JetPolynomial::constant(nonzero_rational(rng));
        for _ in 0..rng.gen_range(0..=max_factors) {
            m = m.mul_ref(&JetPolynomial::var(jet_variable(rng)));
        }
        p.add_assign_ref(&m);
    }
    p
}

pub fn slots(rng: &mut impl Rng, arity: usize, max_len: usize) -> Slots {
    (0..arity).map(|_| multi_index(rng, 0, max_len)).collect()
}

pub fn cochain_with<C: Coefficient>(
    rng: &mut ChaCha8Rng,
    arity: usize,
    slot_degree: usize,
    terms: usize,
    mut coeff: impl FnMut(&mut ChaCha8Rng) -> C,
) -> Cochain<C> {
    let mut c = Cochain::zero(arity);
    for _ in 0..terms {
        let s = slots(rng, arity, slot_degree);
        let k = coeff(rng);
        c.add_term(s, &k);
    }
    c
}

pub fn jet_cochain(rng: &mut ChaCha8Rng, arity: usize, slot_degree: usize, terms: usize) -> Cochain<JetPolynomial> {
    cochain_with(rng, arity, slot_degree, terms, |r| jet_polynomial(r, 2, 2))
}

pub fn poly_cochain(rng: &mut ChaCha8Rng, arity: usize, slot_degree: usize, terms: usize) -> Cochain<Polynomial> {
    cochain_with(rng, arity, slot_degree, terms, |r| polynomial(r, 2, 2))
}

/// Ordered terms with `1..=3` factors and arity `1..=3`, indexed `[p-1][arity-1]`.
pub struct OrderedPool(Vec<Vec<Vec<AbstractTerm>>>);

impl OrderedPool {
    pub fn new() -> Self {
        OrderedPool(
            (1..=3)
                .map(|p| (1..=3).map(|a| ordered_terms(p, a)).collect())
                .collect(),
        )
    }

    /// A random ordered term, written with its factors shuffled and a random
    /// coefficient.
    pub fn sample(&self, rng: &mut impl Rng, max_factors: usize, max_arity: usize) -> AbstractTerm {
        loop {
            let p = rng.gen_range(1..=max_factors);
            let a = rng.gen_range(1..=max_arity);
            if let Some(t) = self.0[p - 1][a - 1].choose(rng) {
                let mut order: Vec<usize> = (0..p).collect();
                order.shuffle(rng);
                return t.arranged(&Arrangement(order)).scaled(&nonzero_rational(rng));
            }
        }
    }
}

/// `(x^a, x^b, x^c)` with `|a| + |b| + |c| ≤ max`.
pub fn monomial_triples(max: u32) -> Vec<[Polynomial; 3]> {
    let ms: Vec<(u32, Polynomial)> = Polynomial::monomials_up_to(max)
        .into_iter()
        .map(|m| (m.degree().unwrap_or(0), m))
        .collect();
    let mut out = Vec::new();
    for (da, a) in &ms {
        for (db, b) in &ms {
            for (dc, c) in &ms {
                if da + db + dc <= max {
                    out.push([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    }
    out
}

pub fn coordinates() -> [Polynomial; 3] {
    [Polynomial::coordinate(1), Polynomial::coordinate(2), Polynomial::coordinate(3)]
}

pub fn poly(src: &str) -> Polynomial {
    Polynomial::parse(src).expect("fixture polynomial parses")
}
