//! Periodic sampling grids, forward/inverse discrete Fourier transforms,
//! diagonal multiplier application, and discrete Sobolev norms.
//!
//! The transform convention matches classic FFT packages: the forward sum is
//! unnormalized, `u_hat(m) = sum_j u(x_j) exp(-2 pi i m j / N)`, and the
//! inverse carries the `1/N` factor. Coefficients are stored in the order
//! `[0, 1, ..., N/2, -N/2+1, ..., -1]`, so the unpaired Nyquist mode `+N/2`
//! sits at index `N/2`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Errors from grid construction, transforms, and norm evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    /// Grid size must be even and at least 4.
    InvalidGridSize { n_points: usize },
    /// Grid period must be finite and strictly positive.
    InvalidPeriod { period: f64 },
    /// An operand's length does not match the grid resolution.
    LengthMismatch { expected: usize, found: usize },
    /// Component counts of two operands differ.
    ComponentMismatch { expected: usize, found: usize },
    /// A state must have at least one component.
    EmptyState,
    /// Sobolev exponent must be nonnegative.
    NegativeExponent { exponent: f64 },
    /// Band-limit cutoff exceeds N/2.
    CutoffOutOfRange { cutoff: usize, max: usize },
}

impl core::fmt::Display for SpectralError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SpectralError::InvalidGridSize { n_points } => {
                write!(f, "grid size {n_points} must be even and at least 4")
            }
            SpectralError::InvalidPeriod { period } => {
                write!(f, "grid period {period} must be finite and positive")
            }
            SpectralError::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected} samples, found {found}")
            }
            SpectralError::ComponentMismatch { expected, found } => {
                write!(f, "component mismatch: expected {expected}, found {found}")
            }
            SpectralError::EmptyState => write!(f, "state has no components"),
            SpectralError::NegativeExponent { exponent } => {
                write!(f, "Sobolev exponent {exponent} must be nonnegative")
            }
            SpectralError::CutoffOutOfRange { cutoff, max } => {
                write!(f, "band-limit cutoff {cutoff} exceeds N/2 = {max}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SpectralError {}

/// Treatment of the unpaired `+N/2` mode in derivative and filter diagonals.
///
/// The mode set `{-N/2+1, ..., N/2}` is asymmetric: `+N/2` has no conjugate
/// partner, so odd-order multipliers applied to real data leak a spurious
/// imaginary part through it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NyquistPolicy {
    /// Keep the full asymmetric mode set; the Nyquist entry uses
    /// `kappa = (2 pi / P)(N / 2)` like every other mode.
    #[default]
    Paper,
    /// Zero the Nyquist entry of odd-derivative diagonals and of the filter
    /// multiplier, preserving reality of real-valued solutions.
    Zero,
}

/// Uniform periodic sampling of `[-P/2, P/2)` with its integer-mode
/// wavenumbers.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    n_points: usize,
    period: f64,
    sample_points: Vec<f64>,
    modes: Vec<i64>,
    wavenumbers: Vec<f64>,
}

impl SpectralGrid {
    /// Builds a grid of `n_points` samples `x_j = -P/2 + j P / N` with modes
    /// ordered `[0, 1, ..., N/2, -N/2+1, ..., -1]`.
    pub fn new(n_points: usize, period: f64) -> Result<Self, SpectralError> {
        if n_points < 4 || n_points % 2 != 0 {
            return Err(SpectralError::InvalidGridSize { n_points });
        }
        if !period.is_finite() || period <= 0.0 {
            return Err(SpectralError::InvalidPeriod { period });
        }
        let spacing = period / n_points as f64;
        let sample_points = (0..n_points)
            .map(|j| -0.5 * period + j as f64 * spacing)
            .collect();
        let half = (n_points / 2) as i64;
        let modes: Vec<i64> = (0..n_points as i64)
            .map(|j| if j <= half { j } else { j - n_points as i64 })
            .collect();
        let scale = 2.0 * PI / period;
        let wavenumbers = modes.iter().map(|&m| scale * m as f64).collect();
        Ok(Self {
            n_points,
            period,
            sample_points,
            modes,
            wavenumbers,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Sample spacing `P / N`.
    pub fn spacing(&self) -> f64 {
        self.period / self.n_points as f64
    }

    pub fn sample_points(&self) -> &[f64] {
        &self.sample_points
    }

    /// Integer modes in storage order.
    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    /// Physical wavenumbers `kappa_j = (2 pi / P) m_j` in storage order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Storage index of the unpaired `+N/2` mode.
    pub fn nyquist_index(&self) -> usize {
        self.n_points / 2
    }

    /// Largest wavenumber magnitude on the grid.
    pub fn max_wavenumber(&self) -> f64 {
        2.0 * PI / self.period * (self.n_points / 2) as f64
    }
}

/// Physical-space samples of an n-component state.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    components: Vec<Vec<Complex64>>,
}

/// Fourier coefficients of an n-component state, stored in mode order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    components: Vec<Vec<Complex64>>,
}

macro_rules! state_impl {
    ($name:ident) => {
        impl $name {
            /// Wraps raw component data; all components must be nonempty and
            /// of equal length.
            pub fn new(components: Vec<Vec<Complex64>>) -> Result<Self, SpectralError> {
                let first = components.first().ok_or(SpectralError::EmptyState)?.len();
                for c in &components {
                    if c.len() != first {
                        return Err(SpectralError::LengthMismatch {
                            expected: first,
                            found: c.len(),
                        });
                    }
                }
                Ok(Self { components })
            }

            /// Single-component state.
            pub fn scalar(samples: Vec<Complex64>) -> Self {
                Self {
                    components: vec![samples],
                }
            }

            pub fn zeros(n_components: usize, n_points: usize) -> Self {
                Self {
                    components: vec![vec![ZERO; n_points]; n_components],
                }
            }

            pub fn n_components(&self) -> usize {
                self.components.len()
            }

            pub fn n_points(&self) -> usize {
                self.components[0].len()
            }

            pub fn component(&self, i: usize) -> &[Complex64] {
                &self.components[i]
            }

            pub fn component_mut(&mut self, i: usize) -> &mut [Complex64] {
                &mut self.components[i]
            }

            pub fn components(&self) -> &[Vec<Complex64>] {
                &self.components
            }

            pub fn is_finite(&self) -> bool {
                self.components
                    .iter()
                    .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
            }

            pub fn max_abs(&self) -> f64 {
                let mut best = 0.0_f64;
                for c in &self.components {
                    for z in c {
                        let a = z.norm();
                        if a > best {
                            best = a;
                        }
                    }
                }
                best
            }
        }
    };
}

state_impl!(Field);
state_impl!(Spectrum);

/// Forward transform: `u_hat(m) = sum_j u(x_j) exp(-2 pi i m j / N)`,
/// unnormalized.
pub fn dft_forward(field: &Field, grid: &SpectralGrid) -> Result<Spectrum, SpectralError> {
    check_grid_len(field.n_points(), grid)?;
    Ok(Spectrum {
        components: field
            .components
            .iter()
            .map(|c| transform(c, -1.0))
            .collect(),
    })
}

/// Inverse transform: `u(x_j) = (1/N) sum_m u_hat(m) exp(+2 pi i m j / N)`.
pub fn dft_inverse(spectrum: &Spectrum, grid: &SpectralGrid) -> Result<Field, SpectralError> {
    check_grid_len(spectrum.n_points(), grid)?;
    let scale = 1.0 / grid.n_points() as f64;
    Ok(Field {
        components: spectrum
            .components
            .iter()
            .map(|c| {
                let mut out = transform(c, 1.0);
                for z in &mut out {
                    *z *= scale;
                }
                out
            })
            .collect(),
    })
}

/// Elementwise product with per-component, per-mode diagonal factors.
pub fn apply_multiplier(
    spectrum: &Spectrum,
    diag: &[Vec<Complex64>],
) -> Result<Spectrum, SpectralError> {
    if diag.len() != spectrum.n_components() {
        return Err(SpectralError::ComponentMismatch {
            expected: spectrum.n_components(),
            found: diag.len(),
        });
    }
    let n = spectrum.n_points();
    let mut components = Vec::with_capacity(diag.len());
    for (c, d) in spectrum.components.iter().zip(diag) {
        if d.len() != n {
            return Err(SpectralError::LengthMismatch {
                expected: n,
                found: d.len(),
            });
        }
        components.push(c.iter().zip(d).map(|(&z, &m)| z * m).collect());
    }
    Ok(Spectrum { components })
}

/// Diagonal factors `(i kappa)^order` of the spectral derivative `D^order`.
///
/// Under [`NyquistPolicy::Zero`] the Nyquist entry of odd-order diagonals is
/// zeroed.
pub fn derivative_diagonal(
    grid: &SpectralGrid,
    order: u32,
    policy: NyquistPolicy,
) -> Vec<Complex64> {
    let mut diag: Vec<Complex64> = grid
        .wavenumbers()
        .iter()
        .map(|&k| Complex64::new(0.0, k).powu(order))
        .collect();
    if policy == NyquistPolicy::Zero && order % 2 == 1 {
        diag[grid.nyquist_index()] = ZERO;
    }
    diag
}

/// Discrete Sobolev norm `sqrt(sum_k (1 + k^2)^(m/2) |u_hat(k)/N|^2)` over
/// all components, with `k` the integer mode.
///
/// With `m = 0` this is the discrete L2 norm. The exponent is `m/2`, not the
/// conventional `m`.
pub fn sobolev_norm(spectrum: &Spectrum, m: f64, grid: &SpectralGrid) -> Result<f64, SpectralError> {
    if !(m >= 0.0) {
        return Err(SpectralError::NegativeExponent { exponent: m });
    }
    check_grid_len(spectrum.n_points(), grid)?;
    let n = grid.n_points() as f64;
    let mut sum = 0.0;
    for c in spectrum.components() {
        for (z, &mode) in c.iter().zip(grid.modes()) {
            let k = mode as f64;
            let weight = libm::pow(1.0 + k * k, 0.5 * m);
            sum += weight * z.norm_sqr() / (n * n);
        }
    }
    Ok(libm::sqrt(sum))
}

/// Zeroes every coefficient with `|mode| > cutoff`; requires `cutoff <= N/2`.
pub fn band_limit_project(spectrum: &Spectrum, cutoff: usize) -> Result<Spectrum, SpectralError> {
    let n = spectrum.n_points();
    if cutoff > n / 2 {
        return Err(SpectralError::CutoffOutOfRange { cutoff, max: n / 2 });
    }
    let half = (n / 2) as i64;
    let components = spectrum
        .components
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .map(|(j, &z)| {
                    let mode = if j as i64 <= half {
                        j as i64
                    } else {
                        j as i64 - n as i64
                    };
                    if mode.unsigned_abs() as usize > cutoff {
                        ZERO
                    } else {
                        z
                    }
                })
                .collect()
        })
        .collect();
    Ok(Spectrum { components })
}

/// Discrete L2 norm `sqrt(sum_j |u_j|^2 / N)` summed over components;
/// equals the `m = 0` Sobolev norm by Parseval.
pub fn discrete_l2(field: &Field) -> f64 {
    let n = field.n_points() as f64;
    let mut sum = 0.0;
    for c in field.components() {
        for z in c {
            sum += z.norm_sqr();
        }
    }
    libm::sqrt(sum / n)
}

/// Discrete L2 distance between two states of identical shape.
pub fn discrete_l2_distance(a: &Field, b: &Field) -> Result<f64, SpectralError> {
    if a.n_components() != b.n_components() {
        return Err(SpectralError::ComponentMismatch {
            expected: a.n_components(),
            found: b.n_components(),
        });
    }
    if a.n_points() != b.n_points() {
        return Err(SpectralError::LengthMismatch {
            expected: a.n_points(),
            found: b.n_points(),
        });
    }
    let n = a.n_points() as f64;
    let mut sum = 0.0;
    for (ca, cb) in a.components().iter().zip(b.components()) {
        for (za, zb) in ca.iter().zip(cb) {
            sum += (za - zb).norm_sqr();
        }
    }
    Ok(libm::sqrt(sum / n))
}

fn check_grid_len(found: usize, grid: &SpectralGrid) -> Result<(), SpectralError> {
    if found != grid.n_points() {
        return Err(SpectralError::LengthMismatch {
            expected: grid.n_points(),
            found,
        });
    }
    Ok(())
}

fn transform(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    if input.len().is_power_of_two() {
        let mut data = input.to_vec();
        fft_radix2(&mut data, sign);
        data
    } else {
        dft_direct(input, sign)
    }
}

/// Iterative radix-2 decimation-in-time transform. `sign` is the exponent
/// sign: -1 forward, +1 inverse (unscaled).
fn fft_radix2(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }

    let mut twiddles: Vec<Complex64> = Vec::with_capacity(n / 2);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = sign * 2.0 * PI / len as f64;
        twiddles.clear();
        twiddles.extend((0..half).map(|k| {
            let angle = step * k as f64;
            Complex64::new(libm::cos(angle), libm::sin(angle))
        }));
        let mut start = 0;
        while start < n {
            for k in 0..half {
                let a = data[start + k];
                let b = data[start + k + half] * twiddles[k];
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
            start += len;
        }
        len <<= 1;
    }
}

/// Direct summation fallback for even, non-power-of-two lengths.
fn dft_direct(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = input.len();
    let base = sign * 2.0 * PI / n as f64;
    (0..n)
        .map(|m| {
            let mut acc = ZERO;
            for (j, &v) in input.iter().enumerate() {
                let angle = base * ((m * j) % n) as f64;
                acc += v * Complex64::new(libm::cos(angle), libm::sin(angle));
            }
            acc
        })
        .collect()
}
