//! The squarefree quotient algebra `A = F[x1..xs] / (x1^2, .., xs^2)`.
//!
//! Monomials are squarefree, so they are exactly the subsets of `{1..s}`,
//! stored as bit masks. The product of two monomials is the union of their
//! masks when disjoint and zero otherwise; there are no signs. `A` is a
//! symmetric algebra: the pairing `B(a, b)`, the coefficient of the full
//! monomial in `ab`, has a permutation matrix as its Gram matrix.

use crate::scalar::{Field, FieldElem};
use std::collections::BTreeMap;
use std::fmt;

/// Errors shared by the two algebra layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operands live in different algebras (field or variable count differs)")]
    MixedContext,
}

/// A squarefree monomial over `s` variables: a subset of `{1..s}` as a mask.
/// Bit `i-1` set means variable `x_i` occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SqfMonomial(u32);

impl SqfMonomial {
    pub const ONE: SqfMonomial = SqfMonomial(0);

    pub fn new(mask: u32) -> SqfMonomial {
        SqfMonomial(mask)
    }

    /// The single variable `x_i` (1-based).
    pub fn variable(i: u32) -> SqfMonomial {
        assert!(i >= 1, "variables are 1-based");
        SqfMonomial(1 << (i - 1))
    }

    /// The full monomial `x1*..*xs`.
    pub fn full(s: u32) -> SqfMonomial {
        SqfMonomial(mask_for(s))
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    /// Union if disjoint, `None` if a square would appear.
    pub fn mul(&self, other: &SqfMonomial) -> Option<SqfMonomial> {
        if self.0 & other.0 != 0 {
            None
        } else {
            Some(SqfMonomial(self.0 | other.0))
        }
    }

    /// Variables of the monomial in increasing order (1-based).
    pub fn variables(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=32).filter(move |i| self.contains(*i))
    }
}

pub(crate) fn mask_for(s: u32) -> u32 {
    assert!(s <= 31, "variable count out of range");
    (1u32 << s) - 1
}

/// An element of `A`: a sparse map from squarefree monomials to nonzero
/// coefficients, keyed in increasing mask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AElement {
    field: Field,
    s: u32,
    coeffs: BTreeMap<SqfMonomial, FieldElem>,
}

impl AElement {
    pub fn zero(field: Field, s: u32) -> AElement {
        mask_for(s);
        AElement {
            field,
            s,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(field: Field, s: u32) -> AElement {
        AElement::scalar(field, s, field.one())
    }

    pub fn scalar(field: Field, s: u32, c: FieldElem) -> AElement {
        AElement::monomial_scaled(field, s, SqfMonomial::ONE, c)
    }

    /// The basis monomial with coefficient one.
    pub fn monomial(field: Field, s: u32, m: SqfMonomial) -> AElement {
        AElement::monomial_scaled(field, s, m, field.one())
    }

    pub fn monomial_scaled(field: Field, s: u32, m: SqfMonomial, c: FieldElem) -> AElement {
        assert!(m.mask() <= mask_for(s), "monomial outside variable range");
        assert_eq!(c.field(), field, "coefficient from the wrong field");
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(m, c);
        }
        AElement { field, s, coeffs }
    }

    /// The generator `x_i` (1-based).
    pub fn variable(field: Field, s: u32, i: u32) -> AElement {
        assert!(i >= 1 && i <= s, "variable index {i} outside 1..={s}");
        AElement::monomial(field, s, SqfMonomial::variable(i))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_vars(&self) -> u32 {
        self.s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: SqfMonomial) -> FieldElem {
        self.coeffs
            .get(&m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SqfMonomial, &FieldElem)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn check_context(&self, other: &AElement) -> Result<(), AlgebraError> {
        if self.field != other.field || self.s != other.s {
            return Err(AlgebraError::MixedContext);
        }
        Ok(())
    }

    fn add_term(&mut self, m: SqfMonomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn add(&self, other: &AElement) -> Result<AElement, AlgebraError> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AElement) -> Result<AElement, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AElement {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, k: &FieldElem) -> AElement {
        assert_eq!(k.field(), self.field, "scalar from the wrong field");
        let mut out = AElement::zero(self.field, self.s);
        for (m, c) in &self.coeffs {
            out.add_term(*m, c.mul(k));
        }
        out
    }

    /// The commutative product; squares of variables vanish.
    pub fn mul(&self, other: &AElement) -> Result<AElement, AlgebraError> {
        self.check_context(other)?;
        let mut out = AElement::zero(self.field, self.s);
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                if let Some(m) = m1.mul(m2) {
                    out.add_term(m, c1.mul(c2));
                }
            }
        }
        Ok(out)
    }

    /// Restriction to the degree-`k` homogeneous component.
    pub fn homogeneous_part(&self, k: u32) -> AElement {
        let mut out = AElement::zero(self.field, self.s);
        for (m, c) in &self.coeffs {
            if m.degree() == k {
                out.coeffs.insert(*m, c.clone());
            }
        }
        out
    }

    /// Coefficient of the full monomial `x1*..*xs`.
    pub fn leading_coefficient(&self) -> FieldElem {
        self.coeff(SqfMonomial::full(self.s))
    }

    /// The symmetric pairing `B(a, b)`: the full-monomial coefficient of `ab`.
    /// Only complementary monomial pairs contribute.
    pub fn pairing(&self, other: &AElement) -> Result<FieldElem, AlgebraError> {
        self.check_context(other)?;
        let full = mask_for(self.s);
        let mut acc = self.field.zero();
        for (m, c) in &self.coeffs {
            let complement = SqfMonomial::new(full & !m.mask());
            if let Some(c2) = other.coeffs.get(&complement) {
                acc = acc.add(&c.mul(c2));
            }
        }
        Ok(acc)
    }

    /// Largest degree present, or `None` for the zero element.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| m.degree()).max()
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(SqfMonomial::ONE)
    }

    /// Coordinates on the monomial basis in increasing mask order.
    pub fn to_coords(&self) -> Vec<FieldElem> {
        let dim = 1usize << self.s;
        let mut v = vec![self.field.zero(); dim];
        for (m, c) in &self.coeffs {
            v[m.mask() as usize] = c.clone();
        }
        v
    }

    pub fn from_coords(field: Field, s: u32, coords: &[FieldElem]) -> AElement {
        assert_eq!(coords.len(), 1usize << s, "coordinate length mismatch");
        let mut out = AElement::zero(field, s);
        for (mask, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out.coeffs.insert(SqfMonomial::new(mask as u32), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for AElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::parse::format_terms(
            f,
            self.coeffs.iter().map(|(m, c)| {
                let vars: Vec<String> = m.variables().map(|i| format!("x{i}")).collect();
                (vars, c.clone())
            }),
        )
    }
}
