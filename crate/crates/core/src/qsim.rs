//! Exact simulation of EPR pairs measured in the Z or X basis.
//!
//! The workhorse is a lazy-collapse sampler: a pair carries no amplitudes,
//! only a record of which halves have been measured and how. For Bell pairs
//! under Z/X measurements this is exact — measuring both halves in the same
//! basis always agrees, and any other combination is an independent fair
//! coin — which the [`StateVector2Q`] oracle verifies against the Born rule.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use num_complex::Complex64;
use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, SessionRng};

/// Measurement basis for a single qubit.
///
/// `Z` is the computational basis {|0>,|1>}; `X` is the Hadamard basis
/// {|+>,|->}. The bit encoding Z=0, X=1 is fixed globally; it is the
/// encoding used whenever a basis string enters an oracle query.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub fn as_bit(self) -> bool {
        matches!(self, Basis::X)
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Basis::X
        } else {
            Basis::Z
        }
    }

    pub fn other(self) -> Self {
        match self {
            Basis::Z => Basis::X,
            Basis::X => Basis::Z,
        }
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        Basis::from_bit(rng.gen())
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Z => write!(f, "Z"),
            Basis::X => write!(f, "X"),
        }
    }
}

/// A string of per-pair measurement bases.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BasisString(Vec<Basis>);

impl BasisString {
    pub fn from_bases(bases: Vec<Basis>) -> Self {
        BasisString(bases)
    }

    pub fn random(len: usize, rng: &mut impl Rng) -> Self {
        BasisString((0..len).map(|_| Basis::random(rng)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn basis(&self, index: usize) -> Basis {
        self.0[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = Basis> + '_ {
        self.0.iter().copied()
    }

    /// Serializes to the fixed Z=0/X=1 bit encoding.
    pub fn encode(&self) -> BitString {
        self.0.iter().map(|b| b.as_bit()).collect()
    }

    pub fn decode(bits: &BitString) -> Self {
        BasisString(bits.iter().map(Basis::from_bit).collect())
    }

    /// Copy of `self` with the bases at `positions` toggled.
    pub fn with_flips(&self, positions: &[usize]) -> Self {
        let mut bases = self.0.clone();
        for &p in positions {
            bases[p] = bases[p].other();
        }
        BasisString(bases)
    }
}

/// Which half of a pair a party holds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Collapse record of one EPR pair. States only ever progress
/// `Unmeasured → HalfMeasured → FullyMeasured`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairState {
    Unmeasured,
    HalfMeasured {
        side: Side,
        basis: Basis,
        outcome: bool,
    },
    FullyMeasured {
        basis_a: Basis,
        outcome_a: bool,
        basis_b: Basis,
        outcome_b: bool,
    },
}

/// A measurement outcome string `O`, one bit per pair.
pub type OutcomeString = BitString;

/// `n` Bell pairs shared between sides A and B, sampled lazily.
///
/// All randomness comes from one seeded generator; fresh bits are drawn in
/// measurement order, so a fixed seed reproduces the full collapse history.
pub struct EprRegister {
    pairs: Vec<PairState>,
    rng: SessionRng,
}

impl EprRegister {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("register needs at least one pair"));
        }
        Ok(EprRegister {
            pairs: vec![PairState::Unmeasured; n],
            rng: rng_from_seed(seed),
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair_state(&self, index: usize) -> Result<PairState> {
        self.pairs
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                len: self.pairs.len(),
            })
    }

    pub fn unmeasured_count(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| matches!(p, PairState::Unmeasured))
            .count()
    }

    /// Measures one half of pair `index` in `basis`.
    ///
    /// If the partner half is already measured in the same basis the
    /// outcome is the partner's; in the other basis it is a fresh fair
    /// coin; on a fresh pair it is a fair coin. Re-measuring a half is a
    /// protocol violation.
    pub fn measure_half(&mut self, side: Side, index: usize, basis: Basis) -> Result<bool> {
        let len = self.pairs.len();
        let state = self
            .pairs
            .get_mut(index)
            .ok_or(Error::IndexOutOfRange { index, len })?;
        match *state {
            PairState::Unmeasured => {
                let outcome = self.rng.gen::<bool>();
                *state = PairState::HalfMeasured {
                    side,
                    basis,
                    outcome,
                };
                Ok(outcome)
            }
            PairState::HalfMeasured {
                side: first_side,
                basis: first_basis,
                outcome: first_outcome,
            } => {
                if first_side == side {
                    return Err(Error::violation(format!(
                        "half {side:?} of pair {index} measured twice"
                    )));
                }
                let outcome = if basis == first_basis {
                    first_outcome
                } else {
                    self.rng.gen::<bool>()
                };
                let (a, b) = match side {
                    Side::A => ((basis, outcome), (first_basis, first_outcome)),
                    Side::B => ((first_basis, first_outcome), (basis, outcome)),
                };
                *state = PairState::FullyMeasured {
                    basis_a: a.0,
                    outcome_a: a.1,
                    basis_b: b.0,
                    outcome_b: b.1,
                };
                Ok(outcome)
            }
            PairState::FullyMeasured { .. } => Err(Error::violation(format!(
                "half {side:?} of pair {index} measured twice"
            ))),
        }
    }

    /// Consumes the first `k` untouched pairs to estimate the disagreement
    /// rate: each sacrificed pair is measured on both sides in a shared
    /// random basis (basis drawn, then side A, then side B). An ideal
    /// source yields exactly 0.0.
    pub fn estimate_correlation(&mut self, k: usize) -> Result<f64> {
        if k == 0 {
            return Ok(0.0);
        }
        let candidates: Vec<usize> = self
            .pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, PairState::Unmeasured))
            .map(|(i, _)| i)
            .take(k)
            .collect();
        if candidates.len() < k {
            return Err(Error::invalid(format!(
                "correlation estimate needs {k} unmeasured pairs, have {}",
                candidates.len()
            )));
        }
        let mut disagreements = 0usize;
        for index in candidates {
            let basis = Basis::random(&mut self.rng);
            let a = self.measure_half(Side::A, index, basis)?;
            let b = self.measure_half(Side::B, index, basis)?;
            if a != b {
                disagreements += 1;
            }
        }
        Ok(disagreements as f64 / k as f64)
    }

    /// Splits the register into per-side handles sharing the same state.
    pub fn into_handles(self) -> (EprHandle, EprHandle) {
        let shared = Rc::new(RefCell::new(self));
        (
            EprHandle {
                register: Rc::clone(&shared),
                side: Side::A,
            },
            EprHandle {
                register: shared,
                side: Side::B,
            },
        )
    }
}

/// One party's view of a shared register: it can only measure its own side.
///
/// Registers are session-confined, so single-threaded shared ownership is
/// all that is needed; sessions parallelize across, not within, registers.
#[derive(Clone)]
pub struct EprHandle {
    register: Rc<RefCell<EprRegister>>,
    side: Side,
}

impl EprHandle {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.register.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn measure(&self, index: usize, basis: Basis) -> Result<bool> {
        self.register.borrow_mut().measure_half(self.side, index, basis)
    }

    /// Measures every pair per the basis string, in index order.
    pub fn measure_all(&self, bases: &BasisString) -> Result<OutcomeString> {
        if bases.len() != self.len() {
            return Err(Error::invalid(format!(
                "basis string length {} does not match register size {}",
                bases.len(),
                self.len()
            )));
        }
        (0..bases.len())
            .map(|i| self.measure(i, bases.basis(i)))
            .collect()
    }

    /// Read access to the underlying pair record, for audits and tests.
    pub fn pair_state(&self, index: usize) -> Result<PairState> {
        self.register.borrow().pair_state(index)
    }
}

/// Sacrifices pairs `0..k` across two half-handles to estimate their
/// disagreement rate under shared random bases. Unlike
/// [`EprRegister::estimate_correlation`] the two handles need not belong to
/// the same register, which is exactly what exposes a substituted source.
pub fn estimate_correlation_between(
    a: &EprHandle,
    b: &EprHandle,
    k: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    if k == 0 {
        return Ok(0.0);
    }
    if k > a.len() || k > b.len() {
        return Err(Error::invalid(format!(
            "correlation estimate needs {k} pairs, handles have {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut disagreements = 0usize;
    for index in 0..k {
        let basis = Basis::random(rng);
        let oa = a.measure(index, basis)?;
        let ob = b.measure(index, basis)?;
        if oa != ob {
            disagreements += 1;
        }
    }
    Ok(disagreements as f64 / k as f64)
}

/// Exact Born-rule probabilities over joint outcomes `(bit_a, bit_b)`.
#[derive(Clone, Copy, Debug)]
pub struct JointDistribution {
    probs: [[f64; 2]; 2],
}

impl JointDistribution {
    pub fn prob(&self, bit_a: bool, bit_b: bool) -> f64 {
        self.probs[bit_a as usize][bit_b as usize]
    }

    /// Probabilities in outcome order (0,0), (0,1), (1,0), (1,1).
    pub fn flatten(&self) -> [f64; 4] {
        [
            self.probs[0][0],
            self.probs[0][1],
            self.probs[1][0],
            self.probs[1][1],
        ]
    }

    pub fn total(&self) -> f64 {
        self.flatten().iter().sum()
    }

    /// Probability that both bits agree.
    pub fn agreement(&self) -> f64 {
        self.probs[0][0] + self.probs[1][1]
    }
}

const NORM_TOLERANCE: f64 = 1e-12;

/// A two-qubit pure state over |00>, |01>, |10>, |11>, used as the test
/// oracle for the lazy sampler.
#[derive(Clone, Debug)]
pub struct StateVector2Q {
    amplitudes: [Complex64; 4],
}

impl StateVector2Q {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::invalid(format!(
                "state vector norm² = {norm}, expected 1"
            )));
        }
        Ok(StateVector2Q { amplitudes })
    }

    /// The Bell state (|00> + |11>)/√2.
    pub fn bell_psi00() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        StateVector2Q {
            amplitudes: [h, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), h],
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    /// Born-rule joint distribution for measuring qubit A in `basis_a` and
    /// qubit B in `basis_b`, by projecting onto the product basis vectors.
    pub fn joint_distribution(&self, basis_a: Basis, basis_b: Basis) -> JointDistribution {
        let mut probs = [[0.0; 2]; 2];
        for (bit_a, row) in probs.iter_mut().enumerate() {
            for (bit_b, p) in row.iter_mut().enumerate() {
                let va = basis_vector(basis_a, bit_a == 1);
                let vb = basis_vector(basis_b, bit_b == 1);
                let mut amp = Complex64::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        amp += va[i].conj() * vb[j].conj() * self.amplitudes[2 * i + j];
                    }
                }
                *p = amp.norm_sqr();
            }
        }
        JointDistribution { probs }
    }
}

fn basis_vector(basis: Basis, bit: bool) -> [Complex64; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match (basis, bit) {
        (Basis::Z, false) => [one, zero],
        (Basis::Z, true) => [zero, one],
        (Basis::X, false) => [h, h],
        (Basis::X, true) => [h, -h],
    }
}

/// Exact joint outcome distribution for a Bell pair measured in the given
/// bases — the reference the lazy sampler is checked against.
pub fn bell_joint_distribution(basis_a: Basis, basis_b: Basis) -> JointDistribution {
    StateVector2Q::bell_psi00().joint_distribution(basis_a, basis_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn register_construction() {
        let reg = EprRegister::new(4, 7).unwrap();
        assert_eq!(reg.len(), 4);
        for i in 0..4 {
            assert_eq!(reg.pair_state(i).unwrap(), PairState::Unmeasured);
        }
        assert!(matches!(
            EprRegister::new(0, 7),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn same_basis_both_sides_always_agree() {
        for seed in 0..16u64 {
            let mut reg = EprRegister::new(1, seed).unwrap();
            let basis = if seed % 2 == 0 { Basis::Z } else { Basis::X };
            let a = reg.measure_half(Side::A, 0, basis).unwrap();
            let b = reg.measure_half(Side::B, 0, basis).unwrap();
            assert_eq!(a, b, "seed {seed}");
        }
    }

    #[test]
    fn double_measurement_is_a_violation() {
        let mut reg = EprRegister::new(2, 1).unwrap();
        reg.measure_half(Side::A, 0, Basis::Z).unwrap();
        assert!(matches!(
            reg.measure_half(Side::A, 0, Basis::Z),
            Err(Error::ProtocolViolation(_))
        ));
        reg.measure_half(Side::B, 0, Basis::Z).unwrap();
        assert!(matches!(
            reg.measure_half(Side::B, 0, Basis::X),
            Err(Error::ProtocolViolation(_))
        ));
    }

    #[test]
    fn out_of_range_index_rejected() {
        let mut reg = EprRegister::new(2, 1).unwrap();
        assert!(matches!(
            reg.measure_half(Side::A, 2, Basis::Z),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn state_progression_is_monotone() {
        let mut reg = EprRegister::new(1, 9).unwrap();
        reg.measure_half(Side::B, 0, Basis::X).unwrap();
        assert!(matches!(
            reg.pair_state(0).unwrap(),
            PairState::HalfMeasured { side: Side::B, .. }
        ));
        reg.measure_half(Side::A, 0, Basis::Z).unwrap();
        assert!(matches!(
            reg.pair_state(0).unwrap(),
            PairState::FullyMeasured { .. }
        ));
    }

    #[test]
    fn identical_seeds_identical_sequences() {
        let run = |seed: u64| -> Vec<bool> {
            let mut reg = EprRegister::new(8, seed).unwrap();
            (0..8)
                .map(|i| {
                    let basis = if i % 3 == 0 { Basis::X } else { Basis::Z };
                    reg.measure_half(Side::A, i, basis).unwrap()
                })
                .collect()
        };
        assert_eq!(run(1234), run(1234));
    }

    #[test]
    fn bell_table_matching_bases() {
        // The Bell state collapses to correlated outcomes in either shared
        // basis: half weight on 00, half on 11, none on mismatches.
        for basis in [Basis::Z, Basis::X] {
            let d = bell_joint_distribution(basis, basis);
            assert!((d.prob(false, false) - 0.5).abs() < 1e-12);
            assert!((d.prob(true, true) - 0.5).abs() < 1e-12);
            assert!(d.prob(false, true).abs() < 1e-12);
            assert!(d.prob(true, false).abs() < 1e-12);
            assert!((d.total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_table_mixed_bases_is_uniform() {
        // Expanding (|00>+|11>)/√2 in a mixed Z/X product basis puts weight
        // 1/4 on every outcome; both mixed orders must match.
        for (ba, bb) in [(Basis::Z, Basis::X), (Basis::X, Basis::Z)] {
            let d = bell_joint_distribution(ba, bb);
            for p in d.flatten() {
                assert!((p - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn statevector_rejects_unnormalized_input() {
        let bad = [
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(StateVector2Q::new(bad).is_err());
    }

    #[test]
    fn correlation_estimate_ideal_source_is_zero() {
        let mut reg = EprRegister::new(128, 5).unwrap();
        let rate = reg.estimate_correlation(100).unwrap();
        assert_eq!(rate, 0.0);
        assert_eq!(reg.unmeasured_count(), 28);
    }

    #[test]
    fn correlation_estimate_empty_sample() {
        let mut reg = EprRegister::new(4, 5).unwrap();
        assert_eq!(reg.estimate_correlation(0).unwrap(), 0.0);
        assert_eq!(reg.unmeasured_count(), 4);
    }

    #[test]
    fn correlation_estimate_insufficient_pairs() {
        let mut reg = EprRegister::new(4, 5).unwrap();
        assert!(matches!(
            reg.estimate_correlation(5),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn handles_share_one_register() {
        let (a, b) = EprRegister::new(3, 11).unwrap().into_handles();
        assert_eq!(a.side(), Side::A);
        assert_eq!(b.side(), Side::B);
        let oa = a.measure(1, Basis::Z).unwrap();
        let ob = b.measure(1, Basis::Z).unwrap();
        assert_eq!(oa, ob);
    }

    #[test]
    fn measure_all_respects_basis_string() {
        let (a, b) = EprRegister::new(4, 13).unwrap().into_handles();
        let mut rng = rng_from_seed(99);
        let bases = BasisString::random(4, &mut rng);
        let oa = a.measure_all(&bases).unwrap();
        let ob = b.measure_all(&bases).unwrap();
        assert_eq!(oa, ob);
    }

    #[test]
    fn basis_encoding_round_trip() {
        let bases = BasisString::from_bases(vec![Basis::Z, Basis::X, Basis::X, Basis::Z]);
        let bits = bases.encode();
        assert_eq!(bits.to_string(), "0110");
        assert_eq!(BasisString::decode(&bits), bases);
    }

    #[test]
    fn with_flips_toggles_exactly_the_given_positions() {
        let bases = BasisString::from_bases(vec![Basis::Z; 5]);
        let flipped = bases.with_flips(&[1, 3]);
        let dist = bases.encode().hamming_distance(&flipped.encode());
        assert_eq!(dist, 2);
        assert_eq!(flipped.basis(1), Basis::X);
        assert_eq!(flipped.basis(3), Basis::X);
    }
}
