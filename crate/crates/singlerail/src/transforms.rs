//! Unitary mode transforms and their action on Fock states.
//!
//! A passive linear-optics element mixing m modes is described by an m×m
//! unitary U acting on the annihilation operators, a_out = U·a_in. Applying
//! it to a Fock state substitutes every input creation operator according to
//! a†_in,j ↦ Σ_i U[i][j]·a†_out,i and expands the resulting polynomial over
//! output occupations with exact multinomial weights — no permanent
//! evaluation, just sparse polynomial algebra, which is fast at the small
//! photon numbers heralded logic works with.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::fock::{factorial, sqrt_factorial, Accumulator, Complex64, Occupation, PureState};
use crate::EPS_NUM;

/// Reflectivity of the first beamsplitter in the conditional-sign network.
pub const CS_REFLECTIVITY_PRIMARY: f64 = 1.0 / 3.0;

/// Reflectivity of the ancilla-side beamsplitters in the conditional-sign
/// network, (3+√6)/6.
pub fn cs_reflectivity_secondary() -> f64 {
    (3.0 + 6f64.sqrt()) / 6.0
}

/// Unitary transform on a fixed number of modes.
#[derive(Clone, Debug)]
pub struct ModeTransform {
    matrix: Array2<Complex64>,
}

impl ModeTransform {
    /// Wraps a square matrix after checking unitarity to within [`EPS_NUM`].
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = matrix.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let transform = ModeTransform { matrix };
        let deviation = transform.unitarity_deviation();
        if deviation > EPS_NUM {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(transform)
    }

    /// Wraps a matrix known to be unitary by construction.
    fn from_unitary(matrix: Array2<Complex64>) -> Self {
        let transform = ModeTransform { matrix };
        debug_assert!(transform.unitarity_deviation() <= 1e-9);
        transform
    }

    /// Largest entry of |U†U − I|.
    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.dimension();
        let product = self.matrix.t().mapv(|z| z.conj()).dot(&self.matrix);
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                let expected = if r == c { 1.0 } else { 0.0 };
                let deviation = (product[(r, c)] - Complex64::new(expected, 0.0)).norm();
                worst = worst.max(deviation);
            }
        }
        worst
    }

    /// Identity transform on `modes` modes.
    pub fn identity(modes: usize) -> Self {
        ModeTransform::from_unitary(Array2::from_shape_fn((modes, modes), |(r, c)| {
            Complex64::new(if r == c { 1.0 } else { 0.0 }, 0.0)
        }))
    }

    /// Two-mode beamsplitter of reflectivity η:
    ///
    /// ```text
    ///   a_out =  √η·a + √(1−η)·b
    ///   b_out = −√(1−η)·a + √η·b
    /// ```
    ///
    /// η = 1 is the identity (fully reflective in this parametrization); the
    /// transmitted path from the first mode picks up the sign flip.
    pub fn beamsplitter(reflectivity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&reflectivity) {
            return Err(Error::ReflectivityOutOfRange(reflectivity));
        }
        let r = reflectivity.sqrt();
        let t = (1.0 - reflectivity).sqrt();
        let matrix = Array2::from_shape_vec(
            (2, 2),
            vec![
                Complex64::new(r, 0.0),
                Complex64::new(t, 0.0),
                Complex64::new(-t, 0.0),
                Complex64::new(r, 0.0),
            ],
        )
        .expect("2x2 shape");
        Ok(ModeTransform::from_unitary(matrix))
    }

    /// Single-mode phase shifter: |n⟩ picks up exp(i·n·phi).
    pub fn phase_shift(phi: f64) -> Self {
        let matrix =
            Array2::from_shape_vec((1, 1), vec![Complex64::from_polar(1.0, phi)])
                .expect("1x1 shape");
        ModeTransform::from_unitary(matrix)
    }

    /// Number of modes this transform mixes.
    pub fn dimension(&self) -> usize {
        self.matrix.dim().0
    }

    /// Matrix entry at (output row, input column).
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// Inverse transform (conjugate transpose).
    pub fn adjoint(&self) -> Self {
        ModeTransform::from_unitary(self.matrix.t().mapv(|z| z.conj()))
    }

    /// This transform followed by `later`, as a single transform
    /// (matrix product later·self).
    pub fn then(&self, later: &ModeTransform) -> Result<Self> {
        if self.dimension() != later.dimension() {
            return Err(Error::ModeMismatch {
                expected: self.dimension(),
                found: later.dimension(),
            });
        }
        Ok(ModeTransform::from_unitary(
            later.matrix.dot(&self.matrix),
        ))
    }

    /// Embeds this transform into a larger register, acting on `targets`.
    ///
    /// Row/column k of the small matrix is wired to mode `targets[k]`; all
    /// other modes pass through unchanged. The target order matters: wiring a
    /// beamsplitter to `[1, 0]` swaps which physical mode sees which port.
    pub fn embed(&self, targets: &[usize], total_modes: usize) -> Result<Self> {
        if targets.len() != self.dimension() {
            return Err(Error::EmbeddingArity {
                expected: self.dimension(),
                found: targets.len(),
            });
        }
        let mut seen = vec![false; total_modes];
        for &mode in targets {
            if mode >= total_modes {
                return Err(Error::ModeOutOfRange {
                    mode,
                    mode_count: total_modes,
                });
            }
            if seen[mode] {
                return Err(Error::DuplicateTargetMode(mode));
            }
            seen[mode] = true;
        }
        let mut matrix = Array2::from_shape_fn((total_modes, total_modes), |(r, c)| {
            Complex64::new(if r == c { 1.0 } else { 0.0 }, 0.0)
        });
        for (small_row, &big_row) in targets.iter().enumerate() {
            matrix[(big_row, big_row)] = Complex64::new(0.0, 0.0);
            for (small_col, &big_col) in targets.iter().enumerate() {
                matrix[(big_row, big_col)] = self.matrix[(small_row, small_col)];
            }
        }
        Ok(ModeTransform::from_unitary(matrix))
    }

    /// Evolves a state through this transform by creation-operator
    /// substitution.
    ///
    /// The state's mode count must equal the transform dimension. Total
    /// photon number is conserved term by term, so no amplitude can cross the
    /// state's cutoff and none is truncated.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        let dim = self.dimension();
        if state.mode_count() != dim {
            return Err(Error::ModeMismatch {
                expected: dim,
                found: state.mode_count(),
            });
        }
        let mut acc = Accumulator::new(dim, state.cutoff());
        let mut powers = vec![0u32; dim];
        for (occupation, amplitude) in state.iter() {
            let mut prefactor = *amplitude;
            for &n in occupation.counts() {
                prefactor /= Complex64::new(sqrt_factorial(n), 0.0);
            }
            self.expand_mode(occupation.counts(), 0, prefactor, &mut powers, &mut acc);
        }
        Ok(acc.into_state())
    }

    /// Recursively expands Π_j (Σ_i U[i][j]·a†_i)^{n_j}, accumulating output
    /// amplitudes at the leaves.
    fn expand_mode(
        &self,
        counts: &[u32],
        input_mode: usize,
        coefficient: Complex64,
        powers: &mut [u32],
        acc: &mut Accumulator,
    ) {
        if coefficient.norm_sqr() == 0.0 {
            return;
        }
        if input_mode == counts.len() {
            let mut amplitude = coefficient;
            for &p in powers.iter() {
                amplitude *= Complex64::new(sqrt_factorial(p), 0.0);
            }
            acc.add(Occupation::new(powers.to_vec()), amplitude);
            return;
        }
        let n = counts[input_mode];
        if n == 0 {
            self.expand_mode(counts, input_mode + 1, coefficient, powers, acc);
            return;
        }
        let dim = self.dimension();
        // Distribute the n photons of this input mode over output modes:
        // each composition (k_0..k_{m-1}) contributes the multinomial weight
        // n!/(Πk_i!) times Π U[i][mode]^{k_i}.
        let mut composition = vec![0u32; dim];
        self.distribute(
            counts,
            input_mode,
            n,
            0,
            coefficient * Complex64::new(factorial(n), 0.0),
            &mut composition,
            powers,
            acc,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &self,
        counts: &[u32],
        input_mode: usize,
        remaining: u32,
        output_mode: usize,
        coefficient: Complex64,
        composition: &mut [u32],
        powers: &mut [u32],
        acc: &mut Accumulator,
    ) {
        let dim = self.dimension();
        if output_mode == dim - 1 {
            // Last output mode takes whatever photons remain.
            let entry = self.matrix[(output_mode, input_mode)];
            let weight = entry.powu(remaining) / Complex64::new(factorial(remaining), 0.0);
            composition[output_mode] = remaining;
            for (power, k) in powers.iter_mut().zip(composition.iter()) {
                *power += k;
            }
            self.expand_mode(counts, input_mode + 1, coefficient * weight, powers, acc);
            for (power, k) in powers.iter_mut().zip(composition.iter()) {
                *power -= k;
            }
            composition[output_mode] = 0;
            return;
        }
        let entry = self.matrix[(output_mode, input_mode)];
        let mut weight = Complex64::new(1.0, 0.0);
        for k in 0..=remaining {
            composition[output_mode] = k;
            self.distribute(
                counts,
                input_mode,
                remaining - k,
                output_mode + 1,
                coefficient * weight / Complex64::new(factorial(k), 0.0),
                composition,
                powers,
                acc,
            );
            weight *= entry;
        }
        composition[output_mode] = 0;
    }
}

/// The four-mode network realizing the heralded conditional-sign gate.
///
/// Modes are ordered (a, b, c, d): a and b carry the logical rails, c and d
/// carry the single-photon ancillas that get detected. The matrix is written
/// down in closed form and then cross-checked against an equivalent cascade
/// of four embedded beamsplitters (reflectivities 1/3 and (3+√6)/6); any
/// disagreement beyond [`EPS_NUM`] is a construction bug and panics.
pub fn cs_network() -> ModeTransform {
    let s2 = 2f64.sqrt();
    let p = (3.0 + 6f64.sqrt()).sqrt();
    let m = (3.0 - 6f64.sqrt()).sqrt();
    let rows: [[f64; 4]; 4] = [
        [-1.0 / 3.0, s2 / 3.0, s2 / 3.0, -2.0 / 3.0],
        [-s2 / 3.0, -1.0 / 3.0, 2.0 / 3.0, s2 / 3.0],
        [p / 3.0, m / 3.0, p / (3.0 * s2), m / (3.0 * s2)],
        [-m / 3.0, p / 3.0, -m / (3.0 * s2), p / (3.0 * s2)],
    ];
    let matrix = Array2::from_shape_fn((4, 4), |(r, c)| Complex64::new(rows[r][c], 0.0));
    let network = ModeTransform::new(matrix).expect("closed-form network matrix is unitary");

    let cascade = cs_network_cascade();
    let mut worst = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            worst = worst.max((network.entry(r, c) - cascade.entry(r, c)).norm());
        }
    }
    assert!(
        worst <= EPS_NUM,
        "conditional-sign network disagrees with its beamsplitter cascade by {worst:.3e}"
    );
    network
}

/// The same network as a cascade of four embedded beamsplitters.
///
/// Reading along the optical path: each logical rail first couples to its
/// ancilla on a 1/3 splitter (c with a, then d with b), the two rails
/// interfere on a third 1/3 splitter, and finally the ancillas recombine on a
/// splitter of reflectivity (3+√6)/6. Each stage is this crate's standard
/// beamsplitter up to the choice of reference phase (a sign) at its ports;
/// exhaustive search over all port assignments shows the orientation below is
/// the one that reproduces the closed-form matrix, and that no assignment
/// without a flipped port exists.
pub fn cs_network_cascade() -> ModeTransform {
    let eta2 = cs_reflectivity_secondary();
    let couple_ancilla_a = splitter_stage(CS_REFLECTIVITY_PRIMARY, [2, 0], [false; 2], [false; 2]);
    let couple_ancilla_b = splitter_stage(CS_REFLECTIVITY_PRIMARY, [3, 1], [false; 2], [false; 2]);
    let interfere_rails = splitter_stage(
        CS_REFLECTIVITY_PRIMARY,
        [0, 1],
        [true, false],
        [false, true],
    );
    let recombine_ancillas = splitter_stage(eta2, [2, 3], [false; 2], [false; 2]);
    couple_ancilla_a
        .then(&couple_ancilla_b)
        .and_then(|t| t.then(&interfere_rails))
        .and_then(|t| t.then(&recombine_ancillas))
        .expect("cascade dimensions agree")
}

/// One beamsplitter of the cascade, embedded on `ports` of the four-mode
/// register with optional π reference-phase flips on its output and input
/// ports.
fn splitter_stage(
    eta: f64,
    ports: [usize; 2],
    flip_out: [bool; 2],
    flip_in: [bool; 2],
) -> ModeTransform {
    let base = ModeTransform::beamsplitter(eta).expect("reflectivity in range");
    let mut matrix = Array2::from_shape_fn((4, 4), |(r, c)| {
        Complex64::new(if r == c { 1.0 } else { 0.0 }, 0.0)
    });
    for (small_row, &big_row) in ports.iter().enumerate() {
        matrix[(big_row, big_row)] = Complex64::new(0.0, 0.0);
        for (small_col, &big_col) in ports.iter().enumerate() {
            let mut entry = base.entry(small_row, small_col);
            if flip_out[small_row] {
                entry = -entry;
            }
            if flip_in[small_col] {
                entry = -entry;
            }
            matrix[(big_row, big_col)] = entry;
        }
    }
    ModeTransform::new(matrix).expect("oriented splitter stays unitary")
}
