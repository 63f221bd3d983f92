//! The exterior algebra `E(V)` on a block-decomposed space.
//!
//! `V = V1 + .. + Vs` with `dim Vk = nk` even; basis vectors are bits in
//! block-major order, so blades are `n`-bit masks and the blade of block `k`
//! occupies a contiguous bit range. The full product of block `k`'s basis is
//! `xi_k`; these blades are even, hence central, and generate a copy of the
//! squarefree quotient algebra inside `E`.

use crate::scalar::{Field, FieldElem};
use crate::squarefree::{AElement, AlgebraError};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExteriorError {
    #[error("block index {index} outside 1..={s}")]
    IndexOutOfRange { index: u32, s: u32 },
    #[error("block {index} has size {size}; block sizes must be even and at least 2")]
    InvalidBlockSize { index: usize, size: u32 },
    #[error("total dimension {n} exceeds the 63-bit blade mask")]
    TooManyBasisVectors { n: u32 },
}

/// The decomposition `V = V1 + .. + Vs` with even block sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockShape {
    block_sizes: Vec<u32>,
    starts: Vec<u32>,
}

impl BlockShape {
    pub fn new(sizes: &[u32]) -> Result<BlockShape, ExteriorError> {
        if sizes.is_empty() {
            return Err(ExteriorError::InvalidBlockSize { index: 0, size: 0 });
        }
        for (i, &sz) in sizes.iter().enumerate() {
            if sz < 2 || sz % 2 != 0 {
                return Err(ExteriorError::InvalidBlockSize { index: i, size: sz });
            }
        }
        let n: u32 = sizes.iter().sum();
        if n > 63 {
            return Err(ExteriorError::TooManyBasisVectors { n });
        }
        let mut starts = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &sz in sizes {
            starts.push(acc);
            acc += sz;
        }
        Ok(BlockShape {
            block_sizes: sizes.to_vec(),
            starts,
        })
    }

    pub fn s(&self) -> u32 {
        self.block_sizes.len() as u32
    }

    pub fn n(&self) -> u32 {
        self.starts.last().unwrap() + self.block_sizes.last().unwrap()
    }

    pub fn block_sizes(&self) -> &[u32] {
        &self.block_sizes
    }

    fn check_block(&self, k: u32) -> Result<(), ExteriorError> {
        if k < 1 || k > self.s() {
            return Err(ExteriorError::IndexOutOfRange {
                index: k,
                s: self.s(),
            });
        }
        Ok(())
    }

    /// Size of block `k` (1-based).
    pub fn block_size(&self, k: u32) -> u32 {
        self.block_sizes[(k - 1) as usize]
    }

    /// First bit position of block `k` (1-based).
    pub fn block_start(&self, k: u32) -> u32 {
        self.starts[(k - 1) as usize]
    }

    /// Mask of all basis vectors of block `k`.
    pub fn block_mask(&self, k: u32) -> u64 {
        ((1u64 << self.block_size(k)) - 1) << self.block_start(k)
    }

    /// Bit position of basis vector `j` of block `k` (both 1-based).
    pub fn bit_for(&self, k: u32, j: u32) -> Result<u32, ExteriorError> {
        self.check_block(k)?;
        if j < 1 || j > self.block_size(k) {
            return Err(ExteriorError::IndexOutOfRange {
                index: j,
                s: self.block_size(k),
            });
        }
        Ok(self.block_start(k) + j - 1)
    }

    /// (block, index) of a bit position, both 1-based.
    pub fn position_of(&self, bit: u32) -> (u32, u32) {
        for k in 1..=self.s() {
            if bit < self.block_start(k) + self.block_size(k) {
                return (k, bit - self.block_start(k) + 1);
            }
        }
        panic!("bit {bit} outside the basis");
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.block_sizes.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A basis blade: a subset of the `n` basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(u64);

impl Blade {
    pub const ONE: Blade = Blade(0);

    pub fn new(mask: u64) -> Blade {
        Blade(mask)
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }
}

/// Parity of the wedge reordering: the number of pairs `(i, j)` with `i` in
/// `a`, `j` in `b`, and `i > j`.
fn reorder_is_odd(a: u64, b: u64) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        let pos = low.trailing_zeros();
        if pos < 63 {
            swaps += (a >> (pos + 1)).count_ones();
        }
        rest ^= low;
    }
    swaps % 2 == 1
}

/// A multivector: a sparse map from blades to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EElement {
    field: Field,
    shape: BlockShape,
    coeffs: BTreeMap<Blade, FieldElem>,
}

impl EElement {
    pub fn zero(field: Field, shape: &BlockShape) -> EElement {
        EElement {
            field,
            shape: shape.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(field: Field, shape: &BlockShape) -> EElement {
        EElement::blade_scaled(field, shape, Blade::ONE, field.one())
    }

    pub fn blade(field: Field, shape: &BlockShape, b: Blade) -> EElement {
        EElement::blade_scaled(field, shape, b, field.one())
    }

    pub fn blade_scaled(field: Field, shape: &BlockShape, b: Blade, c: FieldElem) -> EElement {
        assert!(b.mask() < 1u64 << shape.n(), "blade outside the basis");
        assert_eq!(c.field(), field, "coefficient from the wrong field");
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(b, c);
        }
        EElement {
            field,
            shape: shape.clone(),
            coeffs,
        }
    }

    /// The basis vector `x_{k,j}` as a 1-blade.
    pub fn basis_vector(
        field: Field,
        shape: &BlockShape,
        k: u32,
        j: u32,
    ) -> Result<EElement, ExteriorError> {
        let bit = shape.bit_for(k, j)?;
        Ok(EElement::blade(field, shape, Blade::new(1 << bit)))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every blade has even degree; even elements are central.
    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|b| b.degree() % 2 == 0)
    }

    pub fn coeff(&self, b: Blade) -> FieldElem {
        self.coeffs
            .get(&b)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &FieldElem)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn check_context(&self, other: &EElement) -> Result<(), AlgebraError> {
        if self.field != other.field || self.shape != other.shape {
            return Err(AlgebraError::MixedContext);
        }
        Ok(())
    }

    fn add_term(&mut self, b: Blade, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(b) {
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

    pub fn add(&self, other: &EElement) -> Result<EElement, AlgebraError> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (b, c) in &other.coeffs {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &EElement) -> Result<EElement, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> EElement {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, k: &FieldElem) -> EElement {
        assert_eq!(k.field(), self.field, "scalar from the wrong field");
        let mut out = EElement::zero(self.field, &self.shape);
        for (b, c) in &self.coeffs {
            out.add_term(*b, c.mul(k));
        }
        out
    }

    /// The wedge product. Intersecting blades vanish; disjoint blades merge
    /// with the reordering sign.
    pub fn wedge(&self, other: &EElement) -> Result<EElement, AlgebraError> {
        self.check_context(other)?;
        let mut out = EElement::zero(self.field, &self.shape);
        for (b1, c1) in &self.coeffs {
            for (b2, c2) in &other.coeffs {
                if b1.mask() & b2.mask() != 0 {
                    continue;
                }
                let c = c1.mul(c2);
                let signed = if reorder_is_odd(b1.mask(), b2.mask()) {
                    c.neg()
                } else {
                    c
                };
                out.add_term(Blade::new(b1.mask() | b2.mask()), signed);
            }
        }
        Ok(out)
    }

    /// Restriction to blades of degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> EElement {
        let mut out = EElement::zero(self.field, &self.shape);
        for (b, c) in &self.coeffs {
            if b.degree() == k {
                out.coeffs.insert(*b, c.clone());
            }
        }
        out
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(Blade::ONE)
    }

    /// Coordinates on the blade basis in increasing mask order.
    pub fn to_coords(&self) -> Vec<FieldElem> {
        let dim = 1usize << self.shape.n();
        let mut v = vec![self.field.zero(); dim];
        for (b, c) in &self.coeffs {
            v[b.mask() as usize] = c.clone();
        }
        v
    }

    pub fn from_coords(field: Field, shape: &BlockShape, coords: &[FieldElem]) -> EElement {
        assert_eq!(coords.len(), 1usize << shape.n(), "coordinate length mismatch");
        let mut out = EElement::zero(field, shape);
        for (mask, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out.coeffs.insert(Blade::new(mask as u64), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for EElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::parse::format_terms(
            f,
            self.coeffs.iter().map(|(b, c)| {
                let vars: Vec<String> = (0..self.shape.n())
                    .filter(|bit| b.mask() & (1 << bit) != 0)
                    .map(|bit| {
                        let (k, j) = self.shape.position_of(bit);
                        format!("x{k}_{j}")
                    })
                    .collect();
                (vars, c.clone())
            }),
        )
    }
}

/// The full blade of block `k`: the product of all of its basis vectors.
pub fn xi_block(field: Field, shape: &BlockShape, k: u32) -> Result<EElement, ExteriorError> {
    shape.check_block(k)?;
    Ok(EElement::blade(field, shape, Blade::new(shape.block_mask(k))))
}

/// All products of basis vectors of block `k` other than `1` and the full
/// blade: one blade per nonempty proper subset, in increasing mask order.
pub fn partial_products(
    field: Field,
    shape: &BlockShape,
    k: u32,
) -> Result<Vec<EElement>, ExteriorError> {
    shape.check_block(k)?;
    let size = shape.block_size(k);
    let start = shape.block_start(k);
    let count = (1u64 << size) - 1;
    Ok((1..count)
        .map(|sub| EElement::blade(field, shape, Blade::new(sub << start)))
        .collect())
}

/// Embeds the squarefree quotient algebra into `E`, sending each variable to
/// its block blade. Block blades are even, so no signs appear and the map is
/// an algebra homomorphism.
pub fn embed(shape: &BlockShape, a: &AElement) -> Result<EElement, AlgebraError> {
    if a.num_vars() != shape.s() {
        return Err(AlgebraError::MixedContext);
    }
    let mut out = EElement::zero(a.field(), shape);
    for (m, c) in a.terms() {
        let mut mask = 0u64;
        for i in m.variables() {
            mask |= shape.block_mask(i);
        }
        out.add_term(Blade::new(mask), c.clone());
    }
    Ok(out)
}
