//! Sparse multimode Fock states with complex amplitudes.
//!
//! A state is a map from occupation vectors (photon counts per mode) to
//! amplitudes, truncated at a global cutoff on the *total* photon number.
//! States are allowed to be unnormalized: heralded outputs are naturally
//! sub-normalized and their squared norm carries the success probability, so
//! nothing here normalizes behind the caller's back.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::EPS_PRUNE;

/// Complex amplitude type used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;

/// Photon counts per mode, in fixed mode order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    /// Wraps a vector of per-mode photon counts.
    pub fn new(counts: Vec<u32>) -> Self {
        Occupation(counts)
    }

    /// Number of modes covered by this occupation.
    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    /// Total photon number summed over all modes.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Photon count in one mode.
    pub fn count(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    /// The raw per-mode counts.
    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Copy of this occupation with the given modes deleted.
    ///
    /// `modes` must be sorted ascending and in range; remaining modes keep
    /// their relative order.
    pub(crate) fn without_modes(&self, modes: &[usize]) -> Occupation {
        let mut kept = Vec::with_capacity(self.0.len() - modes.len());
        let mut drop_iter = modes.iter().peekable();
        for (i, &n) in self.0.iter().enumerate() {
            if drop_iter.peek() == Some(&&i) {
                drop_iter.next();
            } else {
                kept.push(n);
            }
        }
        Occupation(kept)
    }
}

impl From<&[u32]> for Occupation {
    fn from(counts: &[u32]) -> Self {
        Occupation(counts.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for Occupation {
    fn from(counts: [u32; N]) -> Self {
        Occupation(counts.to_vec())
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Sparse, possibly unnormalized superposition of Fock occupations.
///
/// Invariants: every stored occupation has exactly `mode_count` entries and a
/// total photon number of at most `cutoff`, and no stored amplitude has
/// magnitude at or below [`EPS_PRUNE`].
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    mode_count: usize,
    cutoff: u32,
    amplitudes: BTreeMap<Occupation, Complex64>,
}

impl PureState {
    /// The vacuum state on `mode_count` modes.
    pub fn vacuum(mode_count: usize, cutoff: u32) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(Occupation(vec![0; mode_count]), Complex64::new(1.0, 0.0));
        PureState {
            mode_count,
            cutoff,
            amplitudes,
        }
    }

    /// A single Fock basis state |n₁,…,n_m⟩ with unit amplitude.
    pub fn basis(occupation: impl Into<Occupation>, cutoff: u32) -> Result<Self> {
        let occupation = occupation.into();
        if occupation.total() > cutoff {
            return Err(Error::CutoffExceeded {
                total: occupation.total(),
                cutoff,
            });
        }
        let mode_count = occupation.mode_count();
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(occupation, Complex64::new(1.0, 0.0));
        Ok(PureState {
            mode_count,
            cutoff,
            amplitudes,
        })
    }

    /// Unnormalized single-mode coherent-state expansion truncated at `cutoff`.
    ///
    /// The amplitude on |n⟩ is χⁿ/√(n!), so the n = 0 term is exactly 1 and
    /// the squared norm approaches exp(χ²) as the cutoff grows. Callers that
    /// need a physical (unit-norm) state should call [`PureState::normalized`]
    /// on the result.
    pub fn coherent(chi: f64, cutoff: u32) -> Self {
        let mut amplitudes = BTreeMap::new();
        let mut amp = 1.0;
        for n in 0..=cutoff {
            if n > 0 {
                amp *= chi / (n as f64).sqrt();
            }
            if amp.abs() > EPS_PRUNE {
                amplitudes.insert(Occupation(vec![n]), Complex64::new(amp, 0.0));
            }
        }
        PureState {
            mode_count: 1,
            cutoff,
            amplitudes,
        }
    }

    /// Builds a state from explicit (occupation, amplitude) pairs.
    ///
    /// Amplitudes on the same occupation accumulate; entries below the pruning
    /// threshold are dropped at the end.
    pub fn from_amplitudes<I, O>(mode_count: usize, cutoff: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (O, Complex64)>,
        O: Into<Occupation>,
    {
        let mut acc = Accumulator::new(mode_count, cutoff);
        for (occupation, amplitude) in entries {
            let occupation = occupation.into();
            if occupation.mode_count() != mode_count {
                return Err(Error::ModeMismatch {
                    expected: mode_count,
                    found: occupation.mode_count(),
                });
            }
            if occupation.total() > cutoff {
                return Err(Error::CutoffExceeded {
                    total: occupation.total(),
                    cutoff,
                });
            }
            acc.add(occupation, amplitude);
        }
        Ok(acc.into_state())
    }

    /// Number of modes the state lives on.
    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    /// Maximum total photon number retained by this state.
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn term_count(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitude on the given occupation (zero if absent).
    pub fn amplitude(&self, occupation: impl Into<Occupation>) -> Complex64 {
        self.amplitudes
            .get(&occupation.into())
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Iterates over stored (occupation, amplitude) pairs in occupation order.
    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Largest total photon number among the stored occupations (0 if empty).
    pub fn max_total(&self) -> u32 {
        self.amplitudes.keys().map(Occupation::total).max().unwrap_or(0)
    }

    /// Sum of squared amplitude magnitudes.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Unit-norm copy of this state.
    pub fn normalized(&self) -> Result<Self> {
        let norm_sq = self.norm_squared();
        if norm_sq <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm_sq.sqrt(), 0.0)))
    }

    /// Copy of this state with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut acc = Accumulator::new(self.mode_count, self.cutoff);
        for (occupation, amplitude) in &self.amplitudes {
            acc.add(occupation.clone(), amplitude * factor);
        }
        acc.into_state()
    }

    /// Linear combination Σ cᵢ·ψᵢ of states on the same modes.
    ///
    /// The result keeps the largest cutoff among the inputs.
    pub fn superposition(terms: &[(Complex64, &PureState)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or(Error::ZeroNorm)?;
        let mode_count = first.mode_count;
        let cutoff = terms.iter().map(|(_, s)| s.cutoff).max().unwrap();
        let mut acc = Accumulator::new(mode_count, cutoff);
        for (coefficient, state) in terms {
            if state.mode_count != mode_count {
                return Err(Error::ModeMismatch {
                    expected: mode_count,
                    found: state.mode_count,
                });
            }
            for (occupation, amplitude) in &state.amplitudes {
                acc.add(occupation.clone(), coefficient * amplitude);
            }
        }
        Ok(acc.into_state())
    }

    /// Hermitian inner product ⟨self|other⟩ (self's amplitudes conjugated).
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64> {
        if self.mode_count != other.mode_count {
            return Err(Error::ModeMismatch {
                expected: self.mode_count,
                found: other.mode_count,
            });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        // Iterate the sparser state and look up in the other.
        let (small, large, conj_small) = if self.amplitudes.len() <= other.amplitudes.len() {
            (&self.amplitudes, &other.amplitudes, true)
        } else {
            (&other.amplitudes, &self.amplitudes, false)
        };
        for (occupation, amplitude) in small {
            if let Some(matching) = large.get(occupation) {
                sum += if conj_small {
                    amplitude.conj() * matching
                } else {
                    matching.conj() * amplitude
                };
            }
        }
        Ok(sum)
    }

    /// Overlap fidelity |⟨a|b⟩|² / (‖a‖²·‖b‖²), insensitive to scale and
    /// global phase.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        let overlap = self.inner_product(other)?;
        let denom = self.norm_squared() * other.norm_squared();
        if denom <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(overlap.norm_sqr() / denom)
    }

    /// Tensor product, keeping the larger cutoff of the two inputs.
    ///
    /// Product occupations whose total photon number exceeds the resulting
    /// cutoff are dropped; see [`PureState::tensor_reporting`] to learn how
    /// much squared norm the truncation removed.
    pub fn tensor(&self, other: &PureState) -> Self {
        self.tensor_reporting(other).0
    }

    /// Tensor product plus the squared norm lost to cutoff truncation.
    pub fn tensor_reporting(&self, other: &PureState) -> (Self, f64) {
        let cutoff = self.cutoff.max(other.cutoff);
        let mode_count = self.mode_count + other.mode_count;
        let mut acc = Accumulator::new(mode_count, cutoff);
        let mut truncated_weight = 0.0;
        for (left_occ, left_amp) in &self.amplitudes {
            for (right_occ, right_amp) in &other.amplitudes {
                let amplitude = left_amp * right_amp;
                if left_occ.total() + right_occ.total() > cutoff {
                    truncated_weight += amplitude.norm_sqr();
                    continue;
                }
                let mut counts = Vec::with_capacity(mode_count);
                counts.extend_from_slice(left_occ.counts());
                counts.extend_from_slice(right_occ.counts());
                acc.add(Occupation(counts), amplitude);
            }
        }
        (acc.into_state(), truncated_weight)
    }

    /// Drops stored amplitudes with magnitude at or below [`EPS_PRUNE`].
    pub fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.norm() > EPS_PRUNE);
    }
}

/// Mutable amplitude map that bakes the state invariants in on `into_state`.
pub(crate) struct Accumulator {
    mode_count: usize,
    cutoff: u32,
    map: BTreeMap<Occupation, Complex64>,
}

impl Accumulator {
    pub(crate) fn new(mode_count: usize, cutoff: u32) -> Self {
        Accumulator {
            mode_count,
            cutoff,
            map: BTreeMap::new(),
        }
    }

    /// Adds `amplitude` onto the entry for `occupation`.
    pub(crate) fn add(&mut self, occupation: Occupation, amplitude: Complex64) {
        debug_assert_eq!(occupation.mode_count(), self.mode_count);
        debug_assert!(occupation.total() <= self.cutoff);
        *self
            .map
            .entry(occupation)
            .or_insert_with(|| Complex64::new(0.0, 0.0)) += amplitude;
    }

    pub(crate) fn into_state(self) -> PureState {
        let mut state = PureState {
            mode_count: self.mode_count,
            cutoff: self.cutoff,
            amplitudes: self.map,
        };
        state.prune();
        state
    }
}

/// n! as a double; exact for every n where the product fits the mantissa and
/// correctly rounded well past the photon numbers this crate works with.
pub(crate) fn factorial(n: u32) -> f64 {
    let mut product = 1.0;
    for k in 2..=n {
        product *= k as f64;
    }
    product
}

/// √(n!) as a double.
pub(crate) fn sqrt_factorial(n: u32) -> f64 {
    factorial(n).sqrt()
}

/// Binomial coefficient C(n, k) as a double; exact for the photon numbers in
/// range here.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}
