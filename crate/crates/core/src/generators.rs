//! Generator families for annihilators of the neat element.
//!
//! Over `A` these are the difference products `M_K * (x_i1 - x_j1) .. ` built
//! from pairing schemes whose indices partition `{1..s}`, and the
//! stack-sortable polynomials indexed by 231-avoiding permutations. Over `E`
//! each scheme additionally chooses one basis vector per unpaired block. The
//! dimension ledger expands the product `(2 + z_1) .. (2 + z_s)` with
//! `z_l = 2^{n_l} - 2` through elementary symmetric polynomials.

use crate::exterior::{embed, BlockShape, EElement};
use crate::scalar::Field;
use crate::squarefree::{AElement, SqfMonomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("pairing scheme has overlapping or out-of-range indices")]
    InvalidScheme,
    #[error("permutation length {0} exceeds the enumeration guard {MAX_PERM_LEN}")]
    TooLarge(u32),
}

/// Guard on factorial-flavoured enumeration.
pub const MAX_PERM_LEN: u32 = 12;

/// `ceil(s/2)`: the number of factors in a stack-sortable polynomial and the
/// lowest degree in which the annihilator of `mu` can be nonzero.
pub fn ceil_half(s: u32) -> u32 {
    s.div_ceil(2)
}

/// A set of disjoint index pairs plus a set `K` of leftover singles, all
/// within `{1..s}`. Canonical form: `i < j` inside each pair and pairs sorted
/// by first element; construction canonicalizes orientation and order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingScheme {
    s: u32,
    pairs: Vec<(u32, u32)>,
    singles_mask: u32,
}

impl PairingScheme {
    pub fn new(s: u32, pairs: &[(u32, u32)], singles: &[u32]) -> Result<Self, GeneratorError> {
        let mut used = 0u32;
        let mut claim = |i: u32| -> Result<(), GeneratorError> {
            if i < 1 || i > s {
                return Err(GeneratorError::InvalidScheme);
            }
            let bit = 1u32 << (i - 1);
            if used & bit != 0 {
                return Err(GeneratorError::InvalidScheme);
            }
            used |= bit;
            Ok(())
        };
        let mut canonical: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for &(i, j) in pairs {
            claim(i)?;
            claim(j)?;
            if i == j {
                return Err(GeneratorError::InvalidScheme);
            }
            canonical.push((i.min(j), i.max(j)));
        }
        canonical.sort_unstable();
        let mut singles_mask = 0u32;
        for &k in singles {
            claim(k)?;
            singles_mask |= 1 << (k - 1);
        }
        Ok(PairingScheme {
            s,
            pairs: canonical,
            singles_mask,
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// The singles `K` in increasing order.
    pub fn singles(&self) -> Vec<u32> {
        (1..=self.s)
            .filter(|k| self.singles_mask & (1 << (k - 1)) != 0)
            .collect()
    }

    pub fn singles_mask(&self) -> u32 {
        self.singles_mask
    }

    /// True when pairs and singles together exhaust `{1..s}`.
    pub fn is_complete(&self) -> bool {
        2 * self.pairs.len() as u32 + self.singles_mask.count_ones() == self.s
    }
}

/// The neat element `mu = x1 + .. + xs`.
pub fn mu_element(field: Field, s: u32) -> AElement {
    assert!(s >= 1, "mu needs at least one variable");
    let mut acc = AElement::zero(field, s);
    for i in 1..=s {
        acc = acc
            .add(&AElement::variable(field, s, i))
            .expect("same context by construction");
    }
    acc
}

/// The expanded product `M_K * (x_i1 - x_j1) .. (x_ir - x_jr)`.
pub fn gamma_product(field: Field, scheme: &PairingScheme) -> AElement {
    let s = scheme.s;
    let mut acc = AElement::monomial(field, s, SqfMonomial::new(scheme.singles_mask));
    for &(i, j) in &scheme.pairs {
        let factor = AElement::variable(field, s, i)
            .sub(&AElement::variable(field, s, j))
            .expect("same context by construction");
        acc = acc.mul(&factor).expect("same context by construction");
    }
    acc
}

/// All canonical complete pairing schemes on `{1..s}`: the lowest unassigned
/// index either joins `K` or pairs with a larger unassigned index. The count
/// is the number of involutions of an `s`-element set.
pub fn enumerate_schemes(s: u32) -> Vec<PairingScheme> {
    fn recurse(
        s: u32,
        used: u32,
        pairs: &mut Vec<(u32, u32)>,
        singles_mask: u32,
        out: &mut Vec<PairingScheme>,
    ) {
        let Some(i) = (1..=s).find(|i| used & (1 << (i - 1)) == 0) else {
            out.push(PairingScheme {
                s,
                pairs: pairs.clone(),
                singles_mask,
            });
            return;
        };
        let bit = 1u32 << (i - 1);
        recurse(s, used | bit, pairs, singles_mask | bit, out);
        for j in i + 1..=s {
            let jbit = 1u32 << (j - 1);
            if used & jbit == 0 {
                pairs.push((i, j));
                recurse(s, used | bit | jbit, pairs, singles_mask, out);
                pairs.pop();
            }
        }
    }
    let mut out = Vec::new();
    recurse(s, 0, &mut Vec::new(), 0, &mut out);
    out
}

/// The family `G_S`: one expanded product per canonical complete scheme,
/// in scheme enumeration order.
pub fn enumerate_gs(field: Field, s: u32) -> Vec<AElement> {
    enumerate_schemes(s)
        .iter()
        .map(|scheme| gamma_product(field, scheme))
        .collect()
}

/// Which classical pattern the permutation family avoids. Both choices are
/// Catalan-counted; 231 is the single-stack-sortable convention and the
/// default, 312 is offered for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StackConvention {
    #[default]
    Avoid231,
    Avoid312,
}

impl StackConvention {
    pub fn label(&self) -> &'static str {
        match self {
            StackConvention::Avoid231 => "231",
            StackConvention::Avoid312 => "312",
        }
    }
}

/// All stack-sortable (231-avoiding) permutations of `{1..d}` in
/// lexicographic order.
pub fn stack_sortable_perms(d: u32) -> Result<Vec<Vec<u32>>, GeneratorError> {
    pattern_avoiding_perms(d, StackConvention::Avoid231)
}

/// Pattern-avoiding permutations under either convention, lexicographic.
pub fn pattern_avoiding_perms(
    d: u32,
    convention: StackConvention,
) -> Result<Vec<Vec<u32>>, GeneratorError> {
    if !(1..=MAX_PERM_LEN).contains(&d) {
        return Err(GeneratorError::TooLarge(d));
    }
    let values: Vec<u32> = (1..=d).collect();
    let mut perms = generate_231_avoiding(&values);
    if convention == StackConvention::Avoid312 {
        // Inversion carries pattern 231 to pattern 312 bijectively.
        perms = perms
            .into_iter()
            .map(|p| {
                let mut inv = vec![0u32; p.len()];
                for (pos, &v) in p.iter().enumerate() {
                    inv[(v - 1) as usize] = pos as u32 + 1;
                }
                inv
            })
            .collect();
    }
    perms.sort_unstable();
    Ok(perms)
}

/// A permutation avoids 231 iff it splits as `L, max, R` with every value of
/// `L` below every value of `R` and both parts avoiding 231; the split is
/// unique, so each permutation is produced exactly once.
fn generate_231_avoiding(values: &[u32]) -> Vec<Vec<u32>> {
    if values.is_empty() {
        return vec![Vec::new()];
    }
    let max = *values.last().unwrap();
    let mut out = Vec::new();
    for left_len in 0..values.len() {
        let lefts = generate_231_avoiding(&values[..left_len]);
        let rights = generate_231_avoiding(&values[left_len..values.len() - 1]);
        for left in &lefts {
            for right in &rights {
                let mut perm = Vec::with_capacity(values.len());
                perm.extend_from_slice(left);
                perm.push(max);
                perm.extend_from_slice(right);
                out.push(perm);
            }
        }
    }
    out
}

/// The stack-sortable polynomials `P_S`: for each admissible permutation
/// `sigma` of length `d = ceil(s/2)`, the expanded product of the factors
/// `zeta_{sigma(k)} - eta_k` with `zeta_m = x_{2m-1}`, `eta_k = x_{2k}`, and
/// `eta_d = 0` when `s` is odd.
pub fn enumerate_ps(field: Field, s: u32, convention: StackConvention) -> Vec<AElement> {
    let d = ceil_half(s);
    let perms = pattern_avoiding_perms(d, convention)
        .expect("ceil(s/2) is within the enumeration guard for supported s");
    perms
        .iter()
        .map(|sigma| {
            let mut acc = AElement::one(field, s);
            for (k, &sk) in sigma.iter().enumerate() {
                let zeta = AElement::variable(field, s, 2 * sk - 1);
                let eta_index = 2 * (k as u32 + 1);
                let factor = if eta_index <= s {
                    zeta.sub(&AElement::variable(field, s, eta_index))
                        .expect("same context by construction")
                } else {
                    zeta
                };
                acc = acc.mul(&factor).expect("same context by construction");
            }
            acc
        })
        .collect()
}

/// The exterior generator family: for each complete scheme, the embedded
/// difference product wedged with every choice of one basis vector per
/// unpaired block. Choices run in lexicographic order, last block fastest.
pub fn enumerate_exterior_generators(field: Field, shape: &BlockShape) -> Vec<EElement> {
    let s = shape.s();
    let mut out = Vec::new();
    for scheme in enumerate_schemes(s) {
        let gamma = AElement::from_scheme_pairs(field, &scheme);
        let gamma_e = embed(shape, &gamma).expect("scheme and shape share s");
        let singles = scheme.singles();
        let sizes: Vec<u32> = singles.iter().map(|&k| shape.block_size(k)).collect();
        for choice in index_tuples(&sizes) {
            let mut gen = gamma_e.clone();
            for (idx, &k) in singles.iter().enumerate() {
                let u = EElement::basis_vector(field, shape, k, choice[idx])
                    .expect("choice indices stay in range");
                gen = gen.wedge(&u).expect("same context by construction");
            }
            out.push(gen);
        }
    }
    out
}

/// All tuples with entry `i` in `1..=sizes[i]`, lexicographic.
fn index_tuples(sizes: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &size in sizes {
        let mut next = Vec::with_capacity(out.len() * size as usize);
        for prefix in &out {
            for j in 1..=size {
                let mut tuple = prefix.clone();
                tuple.push(j);
                next.push(tuple);
            }
        }
        out = next;
    }
    out
}

impl AElement {
    /// The bare difference product of a scheme, ignoring its singles.
    fn from_scheme_pairs(field: Field, scheme: &PairingScheme) -> AElement {
        let mut acc = AElement::one(field, scheme.s());
        for &(i, j) in scheme.pairs() {
            let factor = AElement::variable(field, scheme.s(), i)
                .sub(&AElement::variable(field, scheme.s(), j))
                .expect("same context by construction");
            acc = acc.mul(&factor).expect("same context by construction");
        }
        acc
    }
}

/// The per-block contributions `z_l = 2^{n_l} - 2`, their elementary
/// symmetric values, and the weighted total `sum_k 2^(s-k) s_k`, which
/// telescopes to `(2 + z_1) .. (2 + z_s) = 2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionLedger {
    pub z: Vec<u64>,
    pub elementary: Vec<u128>,
    pub total: u128,
}

pub fn dimension_ledger(shape: &BlockShape) -> DimensionLedger {
    let z: Vec<u64> = shape
        .block_sizes()
        .iter()
        .map(|&n| (1u64 << n) - 2)
        .collect();
    let mut elementary: Vec<u128> = vec![1];
    for &zl in &z {
        let mut next = vec![0u128; elementary.len() + 1];
        for (k, &e) in elementary.iter().enumerate() {
            next[k] += e;
            next[k + 1] += e * zl as u128;
        }
        elementary = next;
    }
    let s = z.len() as u32;
    let total = elementary
        .iter()
        .enumerate()
        .map(|(k, &e)| e << (s - k as u32))
        .sum();
    DimensionLedger {
        z,
        elementary,
        total,
    }
}

/// Catalan number, exact for the guarded range.
pub fn catalan(d: u32) -> u64 {
    (binomial(2 * d as u64, d as u64) / (d as u128 + 1)) as u64
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn xi(s: u32, i: u32) -> AElement {
        AElement::variable(q(), s, i)
    }

    #[test]
    fn mu_is_the_sum_of_variables() {
        assert_eq!(mu_element(q(), 1), xi(1, 1));
        assert_eq!(mu_element(q(), 2), xi(2, 1).add(&xi(2, 2)).unwrap());
    }

    #[test]
    fn mu_squares_to_zero_in_characteristic_two() {
        let gf2 = Field::new(2).unwrap();
        let mu = mu_element(gf2, 3);
        assert!(mu.mul(&mu).unwrap().is_zero());
    }

    #[test]
    fn gamma_product_expands_difference_products() {
        let scheme = PairingScheme::new(2, &[(1, 2)], &[]).unwrap();
        assert_eq!(gamma_product(q(), &scheme), xi(2, 1).sub(&xi(2, 2)).unwrap());

        let scheme = PairingScheme::new(4, &[(1, 2), (3, 4)], &[]).unwrap();
        let expected =
            crate::parse::parse_a_element(q(), 4, "x1*x3 - x1*x4 - x2*x3 + x2*x4").unwrap();
        assert_eq!(gamma_product(q(), &scheme), expected);

        let scheme = PairingScheme::new(3, &[(1, 2)], &[3]).unwrap();
        let eta = gamma_product(q(), &scheme);
        assert!(mu_element(q(), 3).mul(&eta).unwrap().is_zero());
    }

    #[test]
    fn invalid_schemes_are_rejected() {
        assert_eq!(
            PairingScheme::new(3, &[(1, 2)], &[2]).unwrap_err(),
            GeneratorError::InvalidScheme
        );
        assert_eq!(
            PairingScheme::new(3, &[(1, 1)], &[]).unwrap_err(),
            GeneratorError::InvalidScheme
        );
        assert_eq!(
            PairingScheme::new(3, &[(1, 4)], &[]).unwrap_err(),
            GeneratorError::InvalidScheme
        );
        // Reversed orientation canonicalizes rather than erroring.
        let scheme = PairingScheme::new(2, &[(2, 1)], &[]).unwrap();
        assert_eq!(scheme.pairs(), &[(1, 2)]);
    }

    #[test]
    fn gs_family_matches_the_small_cases() {
        let gs2 = enumerate_gs(q(), 2);
        assert_eq!(gs2.len(), 2);
        let expected2 = [
            crate::parse::parse_a_element(q(), 2, "x1*x2").unwrap(),
            crate::parse::parse_a_element(q(), 2, "x1 - x2").unwrap(),
        ];
        for e in &expected2 {
            assert!(gs2.contains(e));
        }

        let gs3 = enumerate_gs(q(), 3);
        assert_eq!(gs3.len(), 4);
        for text in [
            "x1*x2*x3",
            "x1*x3 - x2*x3",
            "x1*x2 - x2*x3",
            "x1*x2 - x1*x3",
        ] {
            let e = crate::parse::parse_a_element(q(), 3, text).unwrap();
            assert!(gs3.contains(&e), "missing {text}");
        }

        assert_eq!(enumerate_gs(q(), 4).len(), 10);
    }

    #[test]
    fn scheme_counts_are_involution_numbers() {
        // Independent route: sum over r of C(s, 2r) * (2r-1)!!.
        for s in 1..=8u32 {
            let mut expect: u128 = 0;
            for r in 0..=(s / 2) as u64 {
                let double_fact: u128 = (1..=r).map(|m| 2 * m as u128 - 1).product();
                expect += binomial(s as u64, 2 * r) * double_fact;
            }
            assert_eq!(enumerate_schemes(s).len() as u128, expect, "s={s}");
        }
    }

    #[test]
    fn every_gs_element_annihilates_mu_in_small_cases() {
        for s in 1..=6u32 {
            for ch in [0u64, 2, 3, 5] {
                let field = Field::new(ch).unwrap();
                let mu = mu_element(field, s);
                for eta in enumerate_gs(field, s) {
                    assert!(mu.mul(&eta).unwrap().is_zero(), "s={s} ch={ch}");
                }
            }
        }
    }

    #[test]
    fn stack_sortable_base_cases() {
        assert_eq!(stack_sortable_perms(1).unwrap(), vec![vec![1]]);

        let d3 = stack_sortable_perms(3).unwrap();
        assert_eq!(d3.len(), 5);
        assert!(!d3.contains(&vec![2, 3, 1]));

        assert_eq!(stack_sortable_perms(4).unwrap().len(), 14);
        assert_eq!(
            stack_sortable_perms(13).unwrap_err(),
            GeneratorError::TooLarge(13)
        );
    }

    fn naive_avoiders(d: u32, convention: StackConvention) -> Vec<Vec<u32>> {
        fn avoids(p: &[u32], convention: StackConvention) -> bool {
            let n = p.len();
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let hit = match convention {
                            StackConvention::Avoid231 => p[k] < p[i] && p[i] < p[j],
                            StackConvention::Avoid312 => p[j] < p[k] && p[k] < p[i],
                        };
                        if hit {
                            return false;
                        }
                    }
                }
            }
            true
        }
        // All permutations by repeated next-permutation, starting sorted.
        let mut current: Vec<u32> = (1..=d).collect();
        let mut out = Vec::new();
        loop {
            if avoids(&current, convention) {
                out.push(current.clone());
            }
            // next lexicographic permutation
            let Some(i) = (0..current.len().saturating_sub(1))
                .rev()
                .find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..current.len())
                .rev()
                .find(|&j| current[j] > current[i])
                .unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    #[test]
    fn pattern_avoiders_match_the_naive_filter() {
        for d in 1..=6u32 {
            for convention in [StackConvention::Avoid231, StackConvention::Avoid312] {
                assert_eq!(
                    pattern_avoiding_perms(d, convention).unwrap(),
                    naive_avoiders(d, convention),
                    "d={d} {:?}",
                    convention
                );
            }
        }
    }

    #[test]
    fn pattern_avoider_counts_are_catalan() {
        for d in 1..=10u32 {
            let expect = catalan(d) as usize;
            assert_eq!(stack_sortable_perms(d).unwrap().len(), expect);
            assert_eq!(
                pattern_avoiding_perms(d, StackConvention::Avoid312)
                    .unwrap()
                    .len(),
                expect
            );
        }
    }

    #[test]
    fn ps_family_small_cases() {
        let ps2 = enumerate_ps(q(), 2, StackConvention::Avoid231);
        assert_eq!(ps2, vec![xi(2, 1).sub(&xi(2, 2)).unwrap()]);

        let ps3 = enumerate_ps(q(), 3, StackConvention::Avoid231);
        assert_eq!(ps3.len(), 2);
        for text in ["x1*x3 - x2*x3", "x1*x3 - x1*x2"] {
            let e = crate::parse::parse_a_element(q(), 3, text).unwrap();
            assert!(ps3.contains(&e), "missing {text}");
        }

        let ps4 = enumerate_ps(q(), 4, StackConvention::Avoid231);
        assert_eq!(ps4.len(), 2);
        for text in [
            "x1*x3 - x1*x4 - x2*x3 + x2*x4",
            "x1*x3 - x3*x4 - x1*x2 + x2*x4",
        ] {
            let e = crate::parse::parse_a_element(q(), 4, text).unwrap();
            assert!(ps4.contains(&e), "missing {text}");
        }
    }

    #[test]
    fn ps_family_size_is_catalan() {
        for s in 1..=8u32 {
            let expect = catalan(ceil_half(s)) as usize;
            for convention in [StackConvention::Avoid231, StackConvention::Avoid312] {
                assert_eq!(enumerate_ps(q(), s, convention).len(), expect, "s={s}");
            }
        }
    }

    #[test]
    fn exterior_generator_counts() {
        let field = q();
        let shape22 = BlockShape::new(&[2, 2]).unwrap();
        assert_eq!(enumerate_exterior_generators(field, &shape22).len(), 5);

        let shape222 = BlockShape::new(&[2, 2, 2]).unwrap();
        assert_eq!(enumerate_exterior_generators(field, &shape222).len(), 14);

        let shape24 = BlockShape::new(&[2, 4]).unwrap();
        assert_eq!(enumerate_exterior_generators(field, &shape24).len(), 9);
    }

    #[test]
    fn exterior_generators_annihilate_the_embedded_mu() {
        for sizes in [vec![2u32, 2], vec![2, 4], vec![2, 2, 2]] {
            for ch in [0u64, 3, 5] {
                let field = Field::new(ch).unwrap();
                let shape = BlockShape::new(&sizes).unwrap();
                let mu_e = embed(&shape, &mu_element(field, shape.s())).unwrap();
                for gen in enumerate_exterior_generators(field, &shape) {
                    assert!(mu_e.wedge(&gen).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn ledger_examples() {
        let l22 = dimension_ledger(&BlockShape::new(&[2, 2]).unwrap());
        assert_eq!(l22.z, vec![2, 2]);
        assert_eq!(l22.total, 16);

        assert_eq!(dimension_ledger(&BlockShape::new(&[2, 4]).unwrap()).total, 64);
        assert_eq!(dimension_ledger(&BlockShape::new(&[4, 4]).unwrap()).total, 256);
    }

    #[test]
    fn ledger_total_is_the_full_dimension_for_all_small_shapes() {
        // Every composition of even parts >= 2 with n <= 20.
        fn extend(prefix: &mut Vec<u32>, remaining: u32, out: &mut Vec<Vec<u32>>) {
            if !prefix.is_empty() {
                out.push(prefix.clone());
            }
            let mut part = 2;
            while part <= remaining {
                prefix.push(part);
                extend(prefix, remaining - part, out);
                prefix.pop();
                part += 2;
            }
        }
        let mut shapes = Vec::new();
        extend(&mut Vec::new(), 20, &mut shapes);
        assert!(shapes.len() > 100);
        for sizes in shapes {
            let shape = BlockShape::new(&sizes).unwrap();
            let ledger = dimension_ledger(&shape);
            assert_eq!(ledger.total, 1u128 << shape.n(), "shape {sizes:?}");
            let product: u128 = ledger.z.iter().map(|&z| z as u128 + 2).product();
            assert_eq!(ledger.total, product);
        }
    }

}
