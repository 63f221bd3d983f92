//! Whole-statement verifiers: each one runs a bundle of exact computations
//! for a single configuration and assembles a [`VerificationReport`].
//!
//! The engine never hard-codes where an equality is supposed to hold; it
//! computes both sides and reports what exact linear algebra yields,
//! together with a re-verified witness whenever an inclusion is strict.

use super::{
    annihilator, annihilator_of_set, certify_minimal_generators, ideal_span, minimal_generators,
    Ambient, EngineError, ExteriorSpace, MuFactorizer, RingSpace,
};
use crate::exterior::BlockShape;
use crate::generators::{
    binomial, catalan, ceil_half, dimension_ledger, enumerate_exterior_generators, enumerate_gs,
    enumerate_ps, StackConvention,
};
use crate::linalg::{kernel, rref, ScalarMatrix, SubspaceBasis};
use crate::report::{
    LedgerReport, MinimalReport, ReportConfig, ReportDims, VerificationReport, WitnessReport,
};
use crate::sample::random_a_element;
use crate::scalar::Field;
use crate::squarefree::{AElement, SqfMonomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;

pub const EQ_GRAM_PERMUTATION: &str = "gram_is_permutation";
pub const EQ_GRAM_RANK: &str = "gram_rank_full";
pub const EQ_PAIRING_ASSOCIATIVE: &str = "pairing_associative";
pub const EQ_PAIRING_SYMMETRIC: &str = "pairing_symmetric";
pub const EQ_MU_ANNIHILATES_GENERATORS: &str = "mu_annihilates_generators";
pub const EQ_GENERATED_IN_ANNIHILATOR: &str = "generated_ideal_in_annihilator";
pub const EQ_ANN_EQUALS_GENERATED: &str = "ann_equals_generated_ideal";
pub const EQ_ANN_EQUALS_PS: &str = "ann_equals_ps_ideal";
pub const EQ_ANN_OF_GENERATORS_EQUALS_MU_IDEAL: &str = "ann_of_generators_equals_mu_ideal";
pub const EQ_DIM_SUM_IS_AMBIENT: &str = "dim_sum_is_ambient";
pub const EQ_DIM_MATCHES_BINOMIAL: &str = "dim_matches_binomial";
pub const EQ_GRADED_ZERO_BELOW_MIN: &str = "graded_zero_below_min_degree";
pub const EQ_GRADED_SUM_MATCHES: &str = "graded_sum_matches";
pub const EQ_LEDGER_MATCHES: &str = "ledger_matches_ambient";
pub const EQ_DECOMPOSITION_MATCHES: &str = "decomposition_matches_mu_ideal";
pub const EQ_MINIMAL_CERTIFIED: &str = "minimal_certified";
pub const EQ_MONOMIALS_FACTOR: &str = "monomials_factor_through_mu";

/// The named checks a run can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Frobenius,
    Theorem6,
    Main,
    Minimal,
    Lemma2,
}

impl Check {
    pub fn label(&self) -> &'static str {
        match self {
            Check::Frobenius => "frobenius",
            Check::Theorem6 => "theorem6",
            Check::Main => "main",
            Check::Minimal => "minimal",
            Check::Lemma2 => "lemma2",
        }
    }

    pub fn parse(text: &str) -> Option<Check> {
        match text {
            "frobenius" => Some(Check::Frobenius),
            "theorem6" => Some(Check::Theorem6),
            "main" => Some(Check::Main),
            "minimal" => Some(Check::Minimal),
            "lemma2" => Some(Check::Lemma2),
            _ => None,
        }
    }

    /// Checks that make sense in ring mode.
    pub fn ring_checks() -> Vec<Check> {
        vec![Check::Frobenius, Check::Theorem6, Check::Minimal, Check::Lemma2]
    }

    /// Checks that make sense in exterior mode.
    pub fn exterior_checks() -> Vec<Check> {
        vec![Check::Main, Check::Minimal]
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub checks: Vec<Check>,
    pub convention: StackConvention,
    pub max_ambient_dim: usize,
    /// Random triples sampled per configuration by the pairing check.
    pub pairing_triples: usize,
}

impl VerifyOptions {
    pub fn ring_default() -> VerifyOptions {
        VerifyOptions {
            checks: Check::ring_checks(),
            convention: StackConvention::Avoid231,
            max_ambient_dim: super::DEFAULT_MAX_AMBIENT_DIM,
            pairing_triples: 1000,
        }
    }

    pub fn exterior_default() -> VerifyOptions {
        VerifyOptions {
            checks: Check::exterior_checks(),
            ..VerifyOptions::ring_default()
        }
    }

    pub fn with_checks(mut self, checks: Vec<Check>) -> VerifyOptions {
        self.checks = checks;
        self
    }

    fn has(&self, check: Check) -> bool {
        self.checks.contains(&check)
    }

    fn labels(&self) -> Vec<String> {
        let mut sorted = self.checks.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.iter().map(|c| c.label().to_string()).collect()
    }
}

/// Verifies the ring-side statements for one `(s, field)` configuration.
pub fn verify_ring(
    field: Field,
    s: u32,
    options: &VerifyOptions,
) -> Result<VerificationReport, EngineError> {
    let started = Instant::now();
    let dim = 1usize << s;
    if dim > options.max_ambient_dim {
        return Err(EngineError::AmbientTooLarge {
            dim,
            cap: options.max_ambient_dim,
        });
    }
    let space = RingSpace::new(field, s);
    let mut equalities = BTreeMap::new();
    let mut witnesses = Vec::new();
    let mut dims = ReportDims {
        ambient: dim as u64,
        ..ReportDims::default()
    };
    let mut minimal = None;

    if options.has(Check::Frobenius) {
        let outcome = pairing_check(field, s, options.pairing_triples);
        equalities.insert(EQ_GRAM_PERMUTATION.into(), outcome.gram_is_permutation);
        equalities.insert(EQ_GRAM_RANK.into(), outcome.gram_rank_full);
        equalities.insert(EQ_PAIRING_ASSOCIATIVE.into(), outcome.associative);
        equalities.insert(EQ_PAIRING_SYMMETRIC.into(), outcome.symmetric);
    }

    if options.has(Check::Theorem6) || options.has(Check::Minimal) {
        let mu = space.mu();
        let generators = enumerate_gs(field, s);
        let mu_ideal = ideal_span(&space, std::slice::from_ref(&mu))?;
        let ann = annihilator(&space, &mu)?;
        dims.mu_ideal = Some(mu_ideal.dim() as u64);
        dims.annihilator = Some(ann.dim() as u64);

        if options.has(Check::Theorem6) {
            let mu_kills = generators
                .iter()
                .all(|g| mu.mul(g).expect("same context").is_zero());
            equalities.insert(EQ_MU_ANNIHILATES_GENERATORS.into(), mu_kills);

            let generated = ideal_span(&space, &generators)?;
            dims.generated_ideal = Some(generated.dim() as u64);

            let ps = enumerate_ps(field, s, options.convention);
            let ps_span = ideal_span(&space, &ps)?;
            dims.ps_ideal = Some(ps_span.dim() as u64);

            let joint = annihilator_of_set(&space, &generators)?;

            equalities.insert(
                EQ_GENERATED_IN_ANNIHILATOR.into(),
                ann.contains_subspace(&generated)?,
            );
            let ann_eq_generated = ann.equals(&generated)?;
            equalities.insert(EQ_ANN_EQUALS_GENERATED.into(), ann_eq_generated);
            let ann_eq_ps = ann.equals(&ps_span)?;
            equalities.insert(EQ_ANN_EQUALS_PS.into(), ann_eq_ps);
            equalities.insert(
                EQ_ANN_OF_GENERATORS_EQUALS_MU_IDEAL.into(),
                joint.equals(&mu_ideal)?,
            );
            equalities.insert(
                EQ_DIM_SUM_IS_AMBIENT.into(),
                generated.dim() + mu_ideal.dim() == dim,
            );
            let d = ceil_half(s);
            equalities.insert(
                EQ_DIM_MATCHES_BINOMIAL.into(),
                ann.dim() as u128 == binomial(s as u64, (s - d) as u64),
            );

            let graded = graded_annihilator_dims(field, s);
            equalities.insert(
                EQ_GRADED_ZERO_BELOW_MIN.into(),
                graded.iter().take(d as usize).all(|&g| g == 0),
            );
            equalities.insert(
                EQ_GRADED_SUM_MATCHES.into(),
                graded.iter().sum::<u64>() == ann.dim() as u64,
            );
            dims.graded = Some(graded);

            if !ann_eq_generated {
                witnesses.extend(separating_witness(
                    &space,
                    &mu,
                    &ann,
                    &generated,
                    EQ_ANN_EQUALS_GENERATED,
                ));
            }
            if !ann_eq_ps {
                witnesses.extend(separating_witness(
                    &space,
                    &mu,
                    &ann,
                    &ps_span,
                    EQ_ANN_EQUALS_PS,
                ));
            }
        }

        if options.has(Check::Minimal) {
            let picked = minimal_generators(&space, &generators)?;
            let certified = certify_minimal_generators(&space, &generators, &picked)?;
            equalities.insert(EQ_MINIMAL_CERTIFIED.into(), certified);
            minimal = Some(MinimalReport {
                count: picked.len() as u64,
                indices: picked.iter().map(|&i| i as u64).collect(),
                certified,
                family_size: generators.len() as u64,
                catalan_reference: catalan(ceil_half(s)),
            });
        }
    }

    if options.has(Check::Lemma2) {
        equalities.insert(
            EQ_MONOMIALS_FACTOR.into(),
            monomials_factor_through_mu(field, s),
        );
    }

    Ok(VerificationReport {
        config: ReportConfig {
            mode: "ring".into(),
            s,
            blocks: None,
            characteristic: field.characteristic(),
            checks: options.labels(),
            stack_convention: options.convention.label().into(),
        },
        dims,
        equalities,
        minimal,
        witnesses,
        ledger: None,
        runtime_ms: started.elapsed().as_millis() as u64,
        error: None,
    })
}

/// Verifies the exterior-side statements for one `(shape, field)`
/// configuration.
pub fn verify_exterior(
    field: Field,
    shape: &BlockShape,
    options: &VerifyOptions,
) -> Result<VerificationReport, EngineError> {
    let started = Instant::now();
    let dim = 1usize << shape.n();
    if dim > options.max_ambient_dim {
        return Err(EngineError::AmbientTooLarge {
            dim,
            cap: options.max_ambient_dim,
        });
    }
    let space = ExteriorSpace::new(field, shape.clone());
    let mut equalities = BTreeMap::new();
    let mut witnesses = Vec::new();
    let mut dims = ReportDims {
        ambient: dim as u64,
        ..ReportDims::default()
    };
    let mut minimal = None;

    let ledger = dimension_ledger(shape);
    let ledger_report = LedgerReport {
        z: ledger.z.clone(),
        elementary: ledger.elementary.clone(),
        total: ledger.total,
    };

    let mu = space.mu();
    let generators = enumerate_exterior_generators(field, shape);
    let mu_ideal = ideal_span(&space, std::slice::from_ref(&mu))?;
    let ann = annihilator(&space, &mu)?;
    dims.mu_ideal = Some(mu_ideal.dim() as u64);
    dims.annihilator = Some(ann.dim() as u64);

    if options.has(Check::Main) {
        let mu_kills = generators
            .iter()
            .all(|g| mu.wedge(g).expect("same context").is_zero());
        equalities.insert(EQ_MU_ANNIHILATES_GENERATORS.into(), mu_kills);

        let generated = ideal_span(&space, &generators)?;
        dims.generated_ideal = Some(generated.dim() as u64);

        equalities.insert(
            EQ_GENERATED_IN_ANNIHILATOR.into(),
            ann.contains_subspace(&generated)?,
        );
        let ann_eq_generated = ann.equals(&generated)?;
        equalities.insert(EQ_ANN_EQUALS_GENERATED.into(), ann_eq_generated);
        equalities.insert(
            EQ_DIM_SUM_IS_AMBIENT.into(),
            generated.dim() + mu_ideal.dim() == dim,
        );
        equalities.insert(EQ_LEDGER_MATCHES.into(), ledger.total == dim as u128);
        equalities.insert(
            EQ_DECOMPOSITION_MATCHES.into(),
            block_decomposition_sum(field, shape)? == mu_ideal.dim() as u128,
        );

        if !ann_eq_generated {
            if let Some(row) = ann
                .rows()
                .iter()
                .find(|row| !generated.contains(row).expect("same ambient"))
            {
                let witness = space.elem_from_coords(row);
                assert!(
                    mu.wedge(&witness).expect("same context").is_zero(),
                    "witness must annihilate mu"
                );
                witnesses.push(WitnessReport {
                    equality: EQ_ANN_EQUALS_GENERATED.into(),
                    element: witness.to_string(),
                });
            }
        }
    }

    if options.has(Check::Minimal) {
        let picked = minimal_generators(&space, &generators)?;
        let certified = certify_minimal_generators(&space, &generators, &picked)?;
        equalities.insert(EQ_MINIMAL_CERTIFIED.into(), certified);
        minimal = Some(MinimalReport {
            count: picked.len() as u64,
            indices: picked.iter().map(|&i| i as u64).collect(),
            certified,
            family_size: generators.len() as u64,
            catalan_reference: catalan(ceil_half(shape.s())),
        });
    }

    Ok(VerificationReport {
        config: ReportConfig {
            mode: "exterior".into(),
            s: shape.s(),
            blocks: Some(shape.block_sizes().to_vec()),
            characteristic: field.characteristic(),
            checks: options.labels(),
            stack_convention: options.convention.label().into(),
        },
        dims,
        equalities,
        minimal,
        witnesses,
        ledger: Some(ledger_report),
        runtime_ms: started.elapsed().as_millis() as u64,
        error: None,
    })
}

/// Pulls a witness separating the annihilator from a strictly smaller span;
/// the witness is re-verified before being reported.
fn separating_witness(
    space: &RingSpace,
    mu: &AElement,
    ann: &SubspaceBasis,
    span: &SubspaceBasis,
    equality: &str,
) -> Option<WitnessReport> {
    let row = ann
        .rows()
        .iter()
        .find(|row| !span.contains(row).expect("same ambient"))?;
    let witness = space.elem_from_coords(row);
    assert!(
        mu.mul(&witness).expect("same context").is_zero(),
        "witness must annihilate mu"
    );
    assert!(
        !span.contains(row).expect("same ambient"),
        "witness must avoid the span"
    );
    Some(WitnessReport {
        equality: equality.into(),
        element: witness.to_string(),
    })
}

struct PairingOutcome {
    gram_is_permutation: bool,
    gram_rank_full: bool,
    associative: bool,
    symmetric: bool,
}

/// Entrywise Gram-matrix check plus sampled associativity/symmetry of the
/// pairing. The sample seed is a fixed function of the configuration so
/// reports stay byte-reproducible.
fn pairing_check(field: Field, s: u32, triples: usize) -> PairingOutcome {
    let dim = 1u32 << s;
    let full = dim - 1;
    let mut gram_is_permutation = true;
    let mut gram = ScalarMatrix::zero(field, dim as usize, dim as usize);
    for i in 0..dim {
        for j in 0..dim {
            let a = AElement::monomial(field, s, SqfMonomial::new(i));
            let b = AElement::monomial(field, s, SqfMonomial::new(j));
            let value = a.pairing(&b).expect("same context");
            let expected_one = i & j == 0 && i | j == full;
            if expected_one {
                if !value.is_one() {
                    gram_is_permutation = false;
                }
            } else if !value.is_zero() {
                gram_is_permutation = false;
            }
            gram.set(i as usize, j as usize, value);
        }
    }
    let gram_rank_full = rref(&gram).dim() == dim as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(pairing_seed(field, s));
    let mut associative = true;
    let mut symmetric = true;
    for _ in 0..triples {
        let a = random_a_element(&mut rng, field, s, 6);
        let b = random_a_element(&mut rng, field, s, 6);
        let c = random_a_element(&mut rng, field, s, 6);
        let left = a.mul(&b).and_then(|ab| ab.pairing(&c)).expect("same context");
        let right = b.mul(&c).and_then(|bc| a.pairing(&bc)).expect("same context");
        if left != right {
            associative = false;
        }
        if a.pairing(&b) != b.pairing(&a) {
            symmetric = false;
        }
    }
    PairingOutcome {
        gram_is_permutation,
        gram_rank_full,
        associative,
        symmetric,
    }
}

fn pairing_seed(field: Field, s: u32) -> u64 {
    0x6e65_6174u64 ^ ((s as u64) << 32) ^ field.characteristic()
}

/// Per-degree dimensions of the annihilator of `mu`: multiplication by `mu`
/// is homogeneous of degree one, so the kernel splits degree by degree. An
/// independent route to the graded structure (the flat kernel never sees
/// degrees).
pub fn graded_annihilator_dims(field: Field, s: u32) -> Vec<u64> {
    let mut masks_by_degree: Vec<Vec<u32>> = vec![Vec::new(); s as usize + 2];
    for mask in 0..(1u32 << s) {
        masks_by_degree[mask.count_ones() as usize].push(mask);
    }
    let mut index_in_degree = vec![0usize; 1 << s];
    for masks in &masks_by_degree {
        for (i, &m) in masks.iter().enumerate() {
            index_in_degree[m as usize] = i;
        }
    }
    (0..=s)
        .map(|k| {
            let sources = &masks_by_degree[k as usize];
            let targets = &masks_by_degree[k as usize + 1];
            let matrix = ScalarMatrix::from_columns(field, targets.len(), sources.len(), |j| {
                let mut column = vec![field.zero(); targets.len()];
                let source = sources[j];
                for i in 0..s {
                    let bit = 1u32 << i;
                    if source & bit == 0 {
                        column[index_in_degree[(source | bit) as usize]] = field.one();
                    }
                }
                column
            });
            kernel(&matrix).dim() as u64
        })
        .collect()
}

/// Exhaustive constructive divisibility: every monomial of each applicable
/// degree must factor through `mu`, with the witness reproducing the
/// monomial exactly. Applicable degrees are `s/2 < k <= s` with `k` below
/// the characteristic (no bound over the rationals). Vacuously true when no
/// degree applies.
pub fn monomials_factor_through_mu(field: Field, s: u32) -> bool {
    let factorizer = MuFactorizer::new(field, s);
    let mu = crate::generators::mu_element(field, s);
    for k in (s / 2 + 1)..=s {
        let p = field.characteristic();
        if p != 0 && k as u64 >= p {
            continue;
        }
        for mask in 0..(1u32 << s) {
            if mask.count_ones() != k {
                continue;
            }
            let monomial = AElement::monomial(field, s, SqfMonomial::new(mask));
            match factorizer.factor(&monomial) {
                Some(witness) => {
                    if witness.mul(&mu).expect("same context") != monomial {
                        return false;
                    }
                }
                None => return false,
            }
        }
    }
    true
}

/// The block-decomposition count of `dim(E mu)`: over each subset `L` of
/// blocks, the rank of the mu-ideal on the complementary variables times the
/// number of strictly partial products on `L`.
pub fn block_decomposition_sum(field: Field, shape: &BlockShape) -> Result<u128, EngineError> {
    let s = shape.s();
    let mut mu_ideal_dim_by_vars: Vec<u128> = vec![0];
    for vars in 1..=s {
        let space = RingSpace::new(field, vars);
        let dim = ideal_span(&space, &[space.mu()])?.dim();
        mu_ideal_dim_by_vars.push(dim as u128);
    }
    let z: Vec<u128> = shape
        .block_sizes()
        .iter()
        .map(|&n| (1u128 << n) - 2)
        .collect();
    let mut total = 0u128;
    for subset in 0..(1u32 << s) {
        let mut partials = 1u128;
        for l in 0..s {
            if subset & (1 << l) != 0 {
                partials *= z[l as usize];
            }
        }
        let complement_vars = s - subset.count_ones();
        total += mu_ideal_dim_by_vars[complement_vars as usize] * partials;
    }
    Ok(total)
}
