//! Seeded random elements for property checks.
//!
//! The verification engine samples triples when checking pairing
//! associativity, and the test suites lean on the same generators; keeping
//! them here (rather than in test code) lets report runs stay deterministic
//! under an explicit seed.

use crate::exterior::{Blade, BlockShape, EElement};
use crate::scalar::{Field, FieldElem};
use crate::squarefree::{AElement, SqfMonomial};
use rand::Rng;

pub fn random_scalar<R: Rng>(rng: &mut R, field: Field) -> FieldElem {
    if field.is_rational() {
        let numer = rng.gen_range(-9..=9i64);
        let denom = rng.gen_range(1..=9i64);
        field.from_ratio(numer, denom).unwrap()
    } else {
        field.from_i64(rng.gen_range(0..field.characteristic()) as i64)
    }
}

/// A sparse random ring element with at most `max_terms` terms.
pub fn random_a_element<R: Rng>(rng: &mut R, field: Field, s: u32, max_terms: usize) -> AElement {
    let dim = 1u64 << s;
    let mut out = AElement::zero(field, s);
    for _ in 0..rng.gen_range(0..=max_terms) {
        let mask = rng.gen_range(0..dim) as u32;
        let term = AElement::monomial_scaled(
            field,
            s,
            SqfMonomial::new(mask),
            random_scalar(rng, field),
        );
        out = out.add(&term).expect("same context by construction");
    }
    out
}

/// A sparse random multivector with at most `max_terms` terms.
pub fn random_e_element<R: Rng>(
    rng: &mut R,
    field: Field,
    shape: &BlockShape,
    max_terms: usize,
) -> EElement {
    let dim = 1u64 << shape.n();
    let mut out = EElement::zero(field, shape);
    for _ in 0..rng.gen_range(0..=max_terms) {
        let mask = rng.gen_range(0..dim);
        let term =
            EElement::blade_scaled(field, shape, Blade::new(mask), random_scalar(rng, field));
        out = out.add(&term).expect("same context by construction");
    }
    out
}
