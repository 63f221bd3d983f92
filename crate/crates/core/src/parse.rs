//! Textual element syntax, shared by the CLI, reports, and tests.
//!
//! Ring elements look like `3*x1*x2 - x3 + 1`; coefficients are integers or
//! fractions `a/b`, variables are `x1..xs`. Exterior elements use
//! block-indexed basis vectors: `x1_2` is basis vector 2 of block 1, and a
//! term multiplies its factors left to right with wedge signs. Repeated
//! variables in a term are not a syntax error; the term simply reduces to
//! zero.

use crate::exterior::{BlockShape, EElement};
use crate::scalar::{is_display_negative, Field, FieldElem};
use crate::squarefree::AElement;
use num_bigint::BigInt;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("variable index {index} outside 1..={max}")]
    VariableOutOfRange { index: u32, max: u32 },
    #[error("variable x{block}_{index}: block has no basis vector {index}")]
    BasisIndexOutOfRange { block: u32, index: u32 },
    #[error("ring elements use plain variables like x2, not x2_1")]
    BlockIndexInRingElement,
    #[error("exterior elements need block-indexed variables like x2_1")]
    MissingBlockIndex,
    #[error("coefficient denominator is zero")]
    ZeroDenominator,
}

/// A raw parsed term: sign, optional coefficient, and variable references
/// `(primary index, optional block-local index)` in written order.
struct RawTerm {
    negative: bool,
    numer: BigInt,
    denom: BigInt,
    vars: Vec<(u32, Option<u32>)>,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Cursor<'a> {
        Cursor {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn unexpected(&mut self) -> ParseError {
        match self.peek() {
            Some(b) => ParseError::UnexpectedChar(b as char, self.pos),
            None => ParseError::UnexpectedEnd,
        }
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.unexpected());
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .to_string())
    }

    /// Digits not followed by whitespace-separated continuation: variable
    /// indices bind tightly, so no interior whitespace handling is needed.
    fn index(&mut self) -> Result<u32, ParseError> {
        let text = self.digits()?;
        text.parse::<u32>()
            .map_err(|_| ParseError::UnexpectedChar('0', self.pos))
    }

    fn var(&mut self) -> Result<(u32, Option<u32>), ParseError> {
        match self.bump() {
            Some(b'x') => {}
            _ => return Err(self.unexpected()),
        }
        let first = self.index()?;
        // An underscore directly after the index selects a block-local
        // basis vector.
        if self.bytes.get(self.pos) == Some(&b'_') {
            self.pos += 1;
            let second = self.index()?;
            Ok((first, Some(second)))
        } else {
            Ok((first, None))
        }
    }

    fn term(&mut self, negative: bool) -> Result<RawTerm, ParseError> {
        let mut numer = BigInt::from(1);
        let mut denom = BigInt::from(1);
        let mut vars = Vec::new();
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                numer = BigInt::parse_bytes(self.digits()?.as_bytes(), 10).unwrap();
                if self.peek() == Some(b'/') {
                    self.bump();
                    denom = BigInt::parse_bytes(self.digits()?.as_bytes(), 10).unwrap();
                }
                while self.peek() == Some(b'*') {
                    self.bump();
                    vars.push(self.var()?);
                }
            }
            Some(b'x') => {
                vars.push(self.var()?);
                while self.peek() == Some(b'*') {
                    self.bump();
                    vars.push(self.var()?);
                }
            }
            _ => return Err(self.unexpected()),
        }
        Ok(RawTerm {
            negative,
            numer,
            denom,
            vars,
        })
    }

    fn element(&mut self) -> Result<Vec<RawTerm>, ParseError> {
        let mut terms = Vec::new();
        let negative = match self.peek() {
            Some(b'-') => {
                self.bump();
                true
            }
            Some(b'+') => {
                self.bump();
                false
            }
            _ => false,
        };
        terms.push(self.term(negative)?);
        loop {
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.bump();
                    terms.push(self.term(false)?);
                }
                Some(b'-') => {
                    self.bump();
                    terms.push(self.term(true)?);
                }
                Some(_) => return Err(self.unexpected()),
            }
        }
        Ok(terms)
    }
}

fn term_coefficient(field: Field, term: &RawTerm) -> Result<FieldElem, ParseError> {
    let coeff = field
        .from_big_ratio(&term.numer, &term.denom)
        .map_err(|_| ParseError::ZeroDenominator)?;
    Ok(if term.negative { coeff.neg() } else { coeff })
}

/// Parses a ring element over `s` variables.
pub fn parse_a_element(field: Field, s: u32, input: &str) -> Result<AElement, ParseError> {
    let mut cursor = Cursor::new(input);
    let terms = cursor.element()?;
    let mut out = AElement::zero(field, s);
    for term in terms {
        let mut acc = AElement::scalar(field, s, term_coefficient(field, &term)?);
        for &(index, block_index) in &term.vars {
            if block_index.is_some() {
                return Err(ParseError::BlockIndexInRingElement);
            }
            if index < 1 || index > s {
                return Err(ParseError::VariableOutOfRange { index, max: s });
            }
            acc = acc
                .mul(&AElement::variable(field, s, index))
                .expect("same context by construction");
        }
        out = out.add(&acc).expect("same context by construction");
    }
    Ok(out)
}

/// Parses an exterior element over a block shape.
pub fn parse_e_element(
    field: Field,
    shape: &BlockShape,
    input: &str,
) -> Result<EElement, ParseError> {
    let mut cursor = Cursor::new(input);
    let terms = cursor.element()?;
    let mut out = EElement::zero(field, shape);
    for term in terms {
        let coeff = term_coefficient(field, &term)?;
        let mut acc = EElement::blade_scaled(field, shape, crate::exterior::Blade::ONE, coeff);
        for &(block, block_index) in &term.vars {
            let index = block_index.ok_or(ParseError::MissingBlockIndex)?;
            if block < 1 || block > shape.s() {
                return Err(ParseError::VariableOutOfRange {
                    index: block,
                    max: shape.s(),
                });
            }
            let v = EElement::basis_vector(field, shape, block, index)
                .map_err(|_| ParseError::BasisIndexOutOfRange { block, index })?;
            acc = acc.wedge(&v).expect("same context by construction");
        }
        out = out.add(&acc).expect("same context by construction");
    }
    Ok(out)
}

/// Shared term formatter behind the `Display` impls of both element types.
/// Terms arrive in canonical (increasing mask) order.
pub(crate) fn format_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (Vec<String>, FieldElem)>,
) -> fmt::Result {
    let mut any = false;
    for (vars, coeff) in terms {
        let negative = is_display_negative(&coeff);
        let magnitude = if negative { coeff.neg() } else { coeff };
        if !any {
            if negative {
                write!(f, "-")?;
            }
        } else if negative {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        any = true;
        if vars.is_empty() {
            write!(f, "{magnitude}")?;
        } else if magnitude.is_one() {
            write!(f, "{}", vars.join("*"))?;
        } else {
            write!(f, "{}*{}", magnitude, vars.join("*"))?;
        }
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Blade;
    use crate::sample::{random_a_element, random_e_element};
    use crate::squarefree::SqfMonomial;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn parses_the_documented_example() {
        let e = parse_a_element(q(), 3, "3*x1*x2 - x3 + 1").unwrap();
        assert_eq!(e.coeff(SqfMonomial::new(0b011)), q().from_i64(3));
        assert_eq!(e.coeff(SqfMonomial::new(0b100)), q().from_i64(-1));
        assert_eq!(e.constant_term(), q().one());
        assert_eq!(e.num_terms(), 3);
    }

    #[test]
    fn repeated_variables_reduce_to_zero() {
        assert!(parse_a_element(q(), 2, "x1*x1").unwrap().is_zero());
        let shape = BlockShape::new(&[2, 2]).unwrap();
        assert!(parse_e_element(q(), &shape, "x1_1*x1_1").unwrap().is_zero());
    }

    #[test]
    fn fractional_coefficients_and_signs() {
        let e = parse_a_element(q(), 2, "-1/2*x1 + 2/4").unwrap();
        assert_eq!(e.coeff(SqfMonomial::variable(1)), q().from_ratio(-1, 2).unwrap());
        assert_eq!(e.constant_term(), q().from_ratio(1, 2).unwrap());
    }

    #[test]
    fn exterior_factors_multiply_in_written_order() {
        let shape = BlockShape::new(&[2, 2]).unwrap();
        let forward = parse_e_element(q(), &shape, "x1_1*x1_2").unwrap();
        let backward = parse_e_element(q(), &shape, "x1_2*x1_1").unwrap();
        assert_eq!(forward, backward.neg());
        assert_eq!(forward.coeff(Blade::new(0b11)), q().one());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_a_element(q(), 2, "x9").unwrap_err(),
            ParseError::VariableOutOfRange { index: 9, max: 2 }
        );
        assert_eq!(
            parse_a_element(q(), 2, "x1_1").unwrap_err(),
            ParseError::BlockIndexInRingElement
        );
        let shape = BlockShape::new(&[2, 2]).unwrap();
        assert_eq!(
            parse_e_element(q(), &shape, "x1").unwrap_err(),
            ParseError::MissingBlockIndex
        );
        assert_eq!(
            parse_e_element(q(), &shape, "x1_3").unwrap_err(),
            ParseError::BasisIndexOutOfRange { block: 1, index: 3 }
        );
        assert!(matches!(
            parse_a_element(q(), 2, "x1 + + x2"),
            Err(ParseError::UnexpectedChar('+', _))
        ));
        assert!(matches!(
            parse_a_element(q(), 2, ""),
            Err(ParseError::UnexpectedEnd)
        ));
        assert_eq!(
            parse_a_element(q(), 2, "1/0").unwrap_err(),
            ParseError::ZeroDenominator
        );
    }

    #[test]
    fn zero_displays_and_parses() {
        let zero = AElement::zero(q(), 2);
        assert_eq!(zero.to_string(), "0");
        assert_eq!(parse_a_element(q(), 2, "0").unwrap(), zero);
    }

    fn arb_field() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![0u64, 2, 5, 13])
    }

    proptest! {
        #[test]
        fn ring_display_round_trips(ch in arb_field(), s in 1u32..=6, seed in any::<u64>()) {
            let field = Field::new(ch).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = random_a_element(&mut rng, field, s, 8);
            let text = e.to_string();
            prop_assert_eq!(parse_a_element(field, s, &text).unwrap(), e);
        }

        #[test]
        fn exterior_display_round_trips(ch in arb_field(), seed in any::<u64>()) {
            let field = Field::new(ch).unwrap();
            let shape = BlockShape::new(&[2, 4]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = random_e_element(&mut rng, field, &shape, 8);
            let text = e.to_string();
            prop_assert_eq!(parse_e_element(field, &shape, &text).unwrap(), e);
        }
    }
}
