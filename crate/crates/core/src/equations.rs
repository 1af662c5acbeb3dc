//! Symbol polynomials, weakly nonlinear wave systems with validation,
//! built-in KdV/NLS/Sine-Gordon definitions, initial conditions, and
//! closed-form reference solutions.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::spectral::{Field, SpectralGrid};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Validation and evaluation errors for equation systems.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemError {
    /// A system needs at least one component.
    EmptySystem,
    /// The linear and nonlinear symbol lists have different lengths.
    SymbolCountMismatch { linear: usize, nonlinear: usize },
    /// A linear symbol fails the parity test: coefficients must be real for
    /// odd powers, imaginary for even powers, with zero constant term.
    NotSkewAdjoint { component: usize },
    /// The linear symbols do not share a common degree.
    MixedLinearDegrees {
        component: usize,
        expected: usize,
        found: usize,
    },
    /// A nonlinear symbol has degree >= the common linear degree.
    NonlinearDegreeTooHigh {
        component: usize,
        linear_degree: usize,
        nonlinear_degree: usize,
    },
    /// The pointwise nonlinearity does not vanish at the origin.
    OriginNotFixed { component: usize },
    /// A parameter is outside its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
    /// Operand shapes disagree.
    ComponentMismatch { expected: usize, found: usize },
    /// Sample sequences have different lengths.
    LengthMismatch { expected: usize, found: usize },
}

impl core::fmt::Display for SystemError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SystemError::EmptySystem => write!(f, "system has no components"),
            SystemError::SymbolCountMismatch { linear, nonlinear } => write!(
                f,
                "symbol count mismatch: {linear} linear vs {nonlinear} nonlinear"
            ),
            SystemError::NotSkewAdjoint { component } => write!(
                f,
                "linear symbol of component {component} is not formally skew-adjoint"
            ),
            SystemError::MixedLinearDegrees {
                component,
                expected,
                found,
            } => write!(
                f,
                "linear symbol of component {component} has degree {found}, expected {expected}"
            ),
            SystemError::NonlinearDegreeTooHigh {
                component,
                linear_degree,
                nonlinear_degree,
            } => write!(
                f,
                "nonlinear symbol of component {component} has degree {nonlinear_degree}, \
                 which must be below the linear degree {linear_degree}"
            ),
            SystemError::OriginNotFixed { component } => write!(
                f,
                "nonlinearity component {component} does not vanish at the origin"
            ),
            SystemError::InvalidParameter { name, value } => {
                write!(f, "parameter {name} = {value} is out of range")
            }
            SystemError::ComponentMismatch { expected, found } => {
                write!(f, "component mismatch: expected {expected}, found {found}")
            }
            SystemError::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SystemError {}

/// Constant-coefficient polynomial `p(X) = sum_m a_m X^m` defining the
/// differential operator `p(D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPolynomial {
    coeffs: Vec<Complex64>,
}

impl SymbolPolynomial {
    /// Trailing zero coefficients are trimmed, so the leading stored
    /// coefficient is nonzero unless the polynomial is identically zero.
    pub fn new(mut coefficients: Vec<Complex64>) -> Self {
        while coefficients.len() > 1 {
            let last = coefficients[coefficients.len() - 1];
            if last.re == 0.0 && last.im == 0.0 {
                coefficients.pop();
            } else {
                break;
            }
        }
        if coefficients.is_empty() {
            coefficients.push(ZERO);
        }
        Self {
            coeffs: coefficients,
        }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![ZERO] }
    }

    pub fn constant(value: Complex64) -> Self {
        Self::new(vec![value])
    }

    /// `coefficient * X^degree`.
    pub fn monomial(degree: usize, coefficient: Complex64) -> Self {
        let mut coeffs = vec![ZERO; degree + 1];
        coeffs[degree] = coefficient;
        Self::new(coeffs)
    }

    pub fn from_real(coefficients: &[f64]) -> Self {
        Self::new(
            coefficients
                .iter()
                .map(|&a| Complex64::new(a, 0.0))
                .collect(),
        )
    }

    /// Degree of the polynomial; constants and the zero polynomial report 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.re == 0.0 && a.im == 0.0)
    }

    /// True when only odd powers carry nonzero coefficients.
    pub fn is_odd(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, a)| m % 2 == 1 || (a.re == 0.0 && a.im == 0.0))
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for &a in self.coeffs.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Evaluates the Fourier symbol `p(i kappa)`.
    pub fn eval_at_i_kappa(&self, kappa: f64) -> Complex64 {
        self.eval(Complex64::new(0.0, kappa))
    }

    /// Exact coefficient parity test: zero constant term, real coefficients
    /// on odd powers, imaginary coefficients on even powers. Equivalently,
    /// `p(i kappa)` is purely imaginary for every real `kappa`.
    pub fn is_formally_skew_adjoint(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(m, a)| {
            if m == 0 {
                a.re == 0.0 && a.im == 0.0
            } else if m % 2 == 1 {
                a.im == 0.0
            } else {
                a.re == 0.0
            }
        })
    }
}

/// Pointwise map from n component values to n component values.
pub type PointwiseMap = dyn Fn(&[Complex64], &mut [Complex64]) + Send + Sync;

/// An n-component weakly nonlinear wave system
/// `d/dt u_i = L_i(D) u_i + M_i(D) G_i(u)`.
///
/// Construction validates the defining conditions, so every value of this
/// type is a well-formed system:
/// - each linear symbol is formally skew-adjoint,
/// - all linear symbols share one degree,
/// - every nonlinear symbol has strictly smaller degree,
/// - the pointwise nonlinearity fixes the origin.
pub struct EquationSystem {
    name: String,
    linear: Vec<SymbolPolynomial>,
    nonlinear: Vec<SymbolPolynomial>,
    nonlinearity: Box<PointwiseMap>,
    linear_degree: usize,
    degree_gap: usize,
    params: Vec<(String, f64)>,
}

impl core::fmt::Debug for EquationSystem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("EquationSystem")
            .field("name", &self.name)
            .field("n_components", &self.n_components())
            .field("linear_degree", &self.linear_degree)
            .field("degree_gap", &self.degree_gap)
            .finish()
    }
}

impl EquationSystem {
    pub fn new(
        name: impl Into<String>,
        linear: Vec<SymbolPolynomial>,
        nonlinear: Vec<SymbolPolynomial>,
        nonlinearity: Box<PointwiseMap>,
        params: Vec<(String, f64)>,
    ) -> Result<Self, SystemError> {
        if linear.is_empty() {
            return Err(SystemError::EmptySystem);
        }
        if linear.len() != nonlinear.len() {
            return Err(SystemError::SymbolCountMismatch {
                linear: linear.len(),
                nonlinear: nonlinear.len(),
            });
        }
        for (i, l) in linear.iter().enumerate() {
            if !l.is_formally_skew_adjoint() {
                return Err(SystemError::NotSkewAdjoint { component: i });
            }
        }
        let linear_degree = linear[0].degree();
        for (i, l) in linear.iter().enumerate() {
            if l.degree() != linear_degree {
                return Err(SystemError::MixedLinearDegrees {
                    component: i,
                    expected: linear_degree,
                    found: l.degree(),
                });
            }
        }
        let mut degree_gap = usize::MAX;
        for (i, m) in nonlinear.iter().enumerate() {
            if m.degree() >= linear_degree {
                return Err(SystemError::NonlinearDegreeTooHigh {
                    component: i,
                    linear_degree,
                    nonlinear_degree: m.degree(),
                });
            }
            degree_gap = degree_gap.min(linear_degree - m.degree());
        }
        // G(0) = 0, checked by evaluating at the origin.
        let n = linear.len();
        let origin = vec![ZERO; n];
        let mut image = vec![ZERO; n];
        nonlinearity(&origin, &mut image);
        for (i, z) in image.iter().enumerate() {
            if z.re != 0.0 || z.im != 0.0 {
                return Err(SystemError::OriginNotFixed { component: i });
            }
        }
        Ok(Self {
            name: name.into(),
            linear,
            nonlinear,
            nonlinearity,
            linear_degree,
            degree_gap,
            params,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_components(&self) -> usize {
        self.linear.len()
    }

    /// Common degree of the linear symbols.
    pub fn linear_degree(&self) -> usize {
        self.linear_degree
    }

    /// Minimum over components of (linear degree - nonlinear degree);
    /// always >= 1. The filter norm scales like `dt^(gap/degree)`.
    pub fn degree_gap(&self) -> usize {
        self.degree_gap
    }

    pub fn linear_symbol(&self, component: usize) -> &SymbolPolynomial {
        &self.linear[component]
    }

    pub fn nonlinear_symbol(&self, component: usize) -> &SymbolPolynomial {
        &self.nonlinear[component]
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    /// Evaluates the pointwise nonlinearity at a single sample.
    pub fn eval_pointwise(&self, input: &[Complex64], output: &mut [Complex64]) {
        (self.nonlinearity)(input, output)
    }

    /// Applies the pointwise nonlinearity sample by sample.
    pub fn eval_nonlinearity(&self, field: &Field) -> Result<Field, SystemError> {
        let n = self.n_components();
        if field.n_components() != n {
            return Err(SystemError::ComponentMismatch {
                expected: n,
                found: field.n_components(),
            });
        }
        let len = field.n_points();
        let mut out = vec![vec![ZERO; len]; n];
        let mut input = vec![ZERO; n];
        let mut output = vec![ZERO; n];
        for j in 0..len {
            for i in 0..n {
                input[i] = field.component(i)[j];
            }
            (self.nonlinearity)(&input, &mut output);
            for i in 0..n {
                out[i][j] = output[i];
            }
        }
        Ok(Field::new(out).expect("components have uniform length"))
    }
}

/// Generalized KdV `u_t = -eps u_xxx - beta u u_x`:
/// linear symbol `-eps X^3`, nonlinear symbol `-(beta/2) X`, `G(u) = u^2`.
///
/// `(1, 1)` is the classical normalization.
pub fn kdv_system(dispersion: f64, nonlin_coeff: f64) -> Result<EquationSystem, SystemError> {
    if !(dispersion > 0.0) || !dispersion.is_finite() {
        return Err(SystemError::InvalidParameter {
            name: "dispersion",
            value: dispersion,
        });
    }
    if !nonlin_coeff.is_finite() {
        return Err(SystemError::InvalidParameter {
            name: "nonlin_coeff",
            value: nonlin_coeff,
        });
    }
    EquationSystem::new(
        "kdv",
        vec![SymbolPolynomial::monomial(
            3,
            Complex64::new(-dispersion, 0.0),
        )],
        vec![SymbolPolynomial::monomial(
            1,
            Complex64::new(-0.5 * nonlin_coeff, 0.0),
        )],
        Box::new(|u, out| out[0] = u[0] * u[0]),
        vec![
            (String::from("epsilon"), dispersion),
            (String::from("beta"), nonlin_coeff),
        ],
    )
}

/// Generalized NLS `u_t = i mu u_xx + i nu |u|^2 u`:
/// linear symbol `i mu X^2`, nonlinear symbol `i nu`, `G(u) = |u|^2 u`.
///
/// `(1, 1)` is the classical normalization.
pub fn nls_system(mu: f64, nu: f64) -> Result<EquationSystem, SystemError> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(SystemError::InvalidParameter {
            name: "mu",
            value: mu,
        });
    }
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(SystemError::InvalidParameter {
            name: "nu",
            value: nu,
        });
    }
    EquationSystem::new(
        "nls",
        vec![SymbolPolynomial::monomial(2, Complex64::new(0.0, mu))],
        vec![SymbolPolynomial::constant(Complex64::new(0.0, nu))],
        Box::new(|u, out| out[0] = u[0] * u[0].norm_sqr()),
        vec![(String::from("mu"), mu), (String::from("nu"), nu)],
    )
}

/// Sine-Gordon `u_tt = u_xx + sin u` as a two-component first-order system
/// in characteristic variables:
///
/// ```text
/// d/dt u1 = +d/dx u1 + 2 sin((u1 - u2)/2)
/// d/dt u2 = -d/dx u2 + 2 sin((u1 + u2)/2)
/// ```
///
/// The scalar solution is recovered as `u = (u1 + u2)/2`; see
/// [`sge_reconstruct`].
pub fn sge_system() -> EquationSystem {
    EquationSystem::new(
        "sge",
        vec![
            SymbolPolynomial::monomial(1, Complex64::new(1.0, 0.0)),
            SymbolPolynomial::monomial(1, Complex64::new(-1.0, 0.0)),
        ],
        vec![
            SymbolPolynomial::constant(Complex64::new(1.0, 0.0)),
            SymbolPolynomial::constant(Complex64::new(1.0, 0.0)),
        ],
        Box::new(|u, out| {
            let half_diff = 0.5 * (u[0] - u[1]);
            let half_sum = 0.5 * (u[0] + u[1]);
            out[0] = 2.0 * half_diff.sin();
            out[1] = 2.0 * half_sum.sin();
        }),
        Vec::new(),
    )
    .expect("sine-Gordon system data is valid")
}

/// Recovers the scalar wave `u = (u1 + u2)/2` from the characteristic
/// components of the Sine-Gordon system.
pub fn sge_reconstruct(
    u1: &[Complex64],
    u2: &[Complex64],
) -> Result<Vec<Complex64>, SystemError> {
    if u1.len() != u2.len() {
        return Err(SystemError::LengthMismatch {
            expected: u1.len(),
            found: u2.len(),
        });
    }
    Ok(u1.iter().zip(u2).map(|(&a, &b)| 0.5 * (a + b)).collect())
}

/// Envelope soliton of `i u_t + mu u_xx + nu |u|^2 u = 0` for `mu, nu > 0`:
///
/// ```text
/// u(x, t) = sqrt(2/nu) a sech(a (x - v t) / sqrt(mu))
///           * exp(i [ (v / 2 mu) x + (a^2 - v^2 / 4 mu) t ])
/// ```
///
/// At `v = 0` this is the stationary soliton
/// `sqrt(2/nu) a sech(a x / sqrt(mu)) exp(i a^2 t)`.
pub fn nls_envelope_soliton(a: f64, v: f64, mu: f64, nu: f64, x: f64, t: f64) -> Complex64 {
    let width = a / libm::sqrt(mu);
    let amplitude = libm::sqrt(2.0 / nu) * a * sech(width * (x - v * t));
    let phase = 0.5 * v / mu * x + (a * a - 0.25 * v * v / mu) * t;
    amplitude * Complex64::new(libm::cos(phase), libm::sin(phase))
}

/// Parameter map induced by the rescaling `v(x, t) = alpha u(beta x, gamma t)`
/// on `i u_t + mu u_xx + nu |u|^2 u = 0`: returns
/// `(mu' , nu') = ((gamma / beta^2) mu, (gamma / alpha^2) nu)`.
pub fn rescale_nls_params(
    mu: f64,
    nu: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<(f64, f64), SystemError> {
    for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
        if value == 0.0 || !value.is_finite() {
            return Err(SystemError::InvalidParameter { name, value });
        }
    }
    Ok((gamma / (beta * beta) * mu, gamma / (alpha * alpha) * nu))
}

/// One row of a tabulated initial condition: abscissa plus the component
/// values at that point.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub x: f64,
    pub values: Vec<Complex64>,
}

/// A named evaluator producing the n component values at a physical point.
pub struct InitialCondition {
    name: String,
    n_components: usize,
    evaluator: Box<dyn Fn(f64, &mut [Complex64]) + Send + Sync>,
    params: Vec<(String, f64)>,
}

impl core::fmt::Debug for InitialCondition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("InitialCondition")
            .field("name", &self.name)
            .field("n_components", &self.n_components)
            .finish()
    }
}

impl InitialCondition {
    /// `sqrt(2/nu) b sech(b x)`, the stationary soliton profile.
    pub fn nls_sech(b: f64, nu: f64) -> Result<Self, SystemError> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(SystemError::InvalidParameter {
                name: "nu",
                value: nu,
            });
        }
        if !b.is_finite() {
            return Err(SystemError::InvalidParameter { name: "b", value: b });
        }
        let scale = libm::sqrt(2.0 / nu) * b;
        Ok(Self {
            name: String::from("nls_sech"),
            n_components: 1,
            evaluator: Box::new(move |x, out| {
                out[0] = Complex64::new(scale * sech(b * x), 0.0);
            }),
            params: vec![(String::from("b"), b), (String::from("nu"), nu)],
        })
    }

    /// `c2 exp(-c1 x^2)`, a smooth real bump.
    pub fn kdv_gaussian(c1: f64, c2: f64) -> Result<Self, SystemError> {
        if !(c1 >= 0.0) || !c1.is_finite() {
            return Err(SystemError::InvalidParameter {
                name: "c1",
                value: c1,
            });
        }
        if !c2.is_finite() {
            return Err(SystemError::InvalidParameter {
                name: "c2",
                value: c2,
            });
        }
        Ok(Self {
            name: String::from("kdv_gaussian"),
            n_components: 1,
            evaluator: Box::new(move |x, out| {
                out[0] = Complex64::new(c2 * libm::exp(-c1 * x * x), 0.0);
            }),
            params: vec![(String::from("c1"), c1), (String::from("c2"), c2)],
        })
    }

    /// Both Sine-Gordon components identically zero.
    pub fn sge_zero() -> Self {
        Self {
            name: String::from("sge_zero"),
            n_components: 2,
            evaluator: Box::new(|_, out| {
                out[0] = ZERO;
                out[1] = ZERO;
            }),
            params: Vec::new(),
        }
    }

    /// Wraps an arbitrary evaluator.
    pub fn from_fn(
        name: impl Into<String>,
        n_components: usize,
        evaluator: impl Fn(f64, &mut [Complex64]) + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            n_components,
            evaluator: Box::new(evaluator),
            params: Vec::new(),
        }
    }

    /// Piecewise-linear interpolant through tabulated rows; abscissas must be
    /// strictly increasing and values are clamped outside the table range.
    pub fn from_table(rows: Vec<TableRow>) -> Result<Self, SystemError> {
        let first = rows.first().ok_or(SystemError::EmptySystem)?;
        let n_components = first.values.len();
        if n_components == 0 {
            return Err(SystemError::EmptySystem);
        }
        for row in &rows {
            if row.values.len() != n_components {
                return Err(SystemError::ComponentMismatch {
                    expected: n_components,
                    found: row.values.len(),
                });
            }
            if !row.x.is_finite()
                || row
                    .values
                    .iter()
                    .any(|z| !z.re.is_finite() || !z.im.is_finite())
            {
                return Err(SystemError::InvalidParameter {
                    name: "table entry",
                    value: row.x,
                });
            }
        }
        for pair in rows.windows(2) {
            if pair[1].x <= pair[0].x {
                return Err(SystemError::InvalidParameter {
                    name: "table abscissa (must be strictly increasing)",
                    value: pair[1].x,
                });
            }
        }
        Ok(Self {
            name: String::from("custom"),
            n_components,
            evaluator: Box::new(move |x, out| {
                let idx = rows.partition_point(|row| row.x < x);
                if idx == 0 {
                    out.copy_from_slice(&rows[0].values);
                } else if idx == rows.len() {
                    out.copy_from_slice(&rows[rows.len() - 1].values);
                } else {
                    let lo = &rows[idx - 1];
                    let hi = &rows[idx];
                    let w = (x - lo.x) / (hi.x - lo.x);
                    for (o, (a, b)) in out.iter_mut().zip(lo.values.iter().zip(&hi.values)) {
                        *o = a + (b - a) * w;
                    }
                }
            }),
            params: Vec::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn evaluate(&self, x: f64, out: &mut [Complex64]) {
        (self.evaluator)(x, out)
    }

    /// Samples the evaluator at every grid point.
    pub fn sample(&self, grid: &SpectralGrid) -> Field {
        let n = self.n_components;
        let len = grid.n_points();
        let mut components = vec![vec![ZERO; len]; n];
        let mut buf = vec![ZERO; n];
        for (j, &x) in grid.sample_points().iter().enumerate() {
            (self.evaluator)(x, &mut buf);
            for i in 0..n {
                components[i][j] = buf[i];
            }
        }
        Field::new(components).expect("components have uniform length")
    }
}

fn sech(x: f64) -> f64 {
    1.0 / libm::cosh(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn skew_adjoint_parity() {
        // -X^3 (KdV) and iX^2 (NLS) pass, X^2 fails.
        assert!(SymbolPolynomial::monomial(3, c(-1.0, 0.0)).is_formally_skew_adjoint());
        assert!(SymbolPolynomial::monomial(2, c(0.0, 1.0)).is_formally_skew_adjoint());
        assert!(!SymbolPolynomial::monomial(2, c(1.0, 0.0)).is_formally_skew_adjoint());
        // Imaginary odd power and nonzero constant both fail.
        assert!(!SymbolPolynomial::monomial(1, c(0.0, 1.0)).is_formally_skew_adjoint());
        assert!(!SymbolPolynomial::constant(c(1.0, 0.0)).is_formally_skew_adjoint());
        assert!(SymbolPolynomial::zero().is_formally_skew_adjoint());
    }

    #[test]
    fn builtin_degrees() {
        let kdv = kdv_system(1.0, 1.0).unwrap();
        assert_eq!((kdv.linear_degree(), kdv.degree_gap()), (3, 2));
        let nls = nls_system(1.0, 1.0).unwrap();
        assert_eq!((nls.linear_degree(), nls.degree_gap()), (2, 2));
        let sge = sge_system();
        assert_eq!((sge.linear_degree(), sge.degree_gap()), (1, 1));
    }

    #[test]
    fn kdv_symbol_data() {
        let kdv = kdv_system(1.0, 1.0).unwrap();
        assert_eq!(kdv.linear_symbol(0).coefficients()[3], c(-1.0, 0.0));
        assert_eq!(kdv.nonlinear_symbol(0).coefficients()[1], c(-0.5, 0.0));
        let appendix = kdv_system(0.05, 1.0).unwrap();
        assert_eq!(appendix.linear_symbol(0).coefficients()[3], c(-0.05, 0.0));
    }

    #[test]
    fn nls_symbol_data() {
        let nls = nls_system(1.0, 1.0).unwrap();
        assert_eq!(nls.linear_symbol(0).coefficients()[2], c(0.0, 1.0));
        assert_eq!(nls.nonlinear_symbol(0).coefficients()[0], c(0.0, 1.0));
        let two = nls_system(1.0, 2.0).unwrap();
        assert_eq!(two.nonlinear_symbol(0).coefficients()[0], c(0.0, 2.0));
    }

    #[test]
    fn builtin_param_validation() {
        assert!(matches!(
            kdv_system(0.0, 1.0),
            Err(SystemError::InvalidParameter { name: "dispersion", .. })
        ));
        assert!(matches!(
            nls_system(1.0, 0.0),
            Err(SystemError::InvalidParameter { name: "nu", .. })
        ));
        assert!(matches!(
            nls_system(-1.0, 1.0),
            Err(SystemError::InvalidParameter { name: "mu", .. })
        ));
    }

    #[test]
    fn validation_rejects_parity_violation() {
        let err = EquationSystem::new(
            "bad",
            vec![SymbolPolynomial::monomial(2, c(1.0, 0.0))],
            vec![SymbolPolynomial::constant(c(0.0, 1.0))],
            Box::new(|u, out| out[0] = u[0] * u[0]),
            Vec::new(),
        )
        .unwrap_err();
        assert_eq!(err, SystemError::NotSkewAdjoint { component: 0 });
    }

    #[test]
    fn validation_rejects_high_nonlinear_degree() {
        let err = EquationSystem::new(
            "bad",
            vec![SymbolPolynomial::monomial(3, c(-1.0, 0.0))],
            vec![SymbolPolynomial::monomial(3, c(1.0, 0.0))],
            Box::new(|u, out| out[0] = u[0] * u[0]),
            Vec::new(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            SystemError::NonlinearDegreeTooHigh {
                component: 0,
                linear_degree: 3,
                nonlinear_degree: 3,
            }
        );
    }

    #[test]
    fn validation_rejects_origin_shift() {
        let err = EquationSystem::new(
            "bad",
            vec![SymbolPolynomial::monomial(3, c(-1.0, 0.0))],
            vec![SymbolPolynomial::monomial(1, c(-0.5, 0.0))],
            Box::new(|u, out| out[0] = u[0] * u[0] + c(1.0, 0.0)),
            Vec::new(),
        )
        .unwrap_err();
        assert_eq!(err, SystemError::OriginNotFixed { component: 0 });
    }

    #[test]
    fn validation_rejects_mixed_degrees() {
        let err = EquationSystem::new(
            "bad",
            vec![
                SymbolPolynomial::monomial(1, c(1.0, 0.0)),
                SymbolPolynomial::monomial(3, c(1.0, 0.0)),
            ],
            vec![
                SymbolPolynomial::constant(c(1.0, 0.0)),
                SymbolPolynomial::constant(c(1.0, 0.0)),
            ],
            Box::new(|_, out| {
                out[0] = ZERO;
                out[1] = ZERO;
            }),
            Vec::new(),
        )
        .unwrap_err();
        assert!(matches!(err, SystemError::MixedLinearDegrees { component: 1, .. }));
    }

    #[test]
    fn sge_nonlinearity_values() {
        let sge = sge_system();
        let mut out = [ZERO; 2];
        sge.eval_pointwise(&[ZERO, ZERO], &mut out);
        assert_eq!(out, [ZERO, ZERO]);
        sge.eval_pointwise(&[c(PI, 0.0), ZERO], &mut out);
        assert!((out[0] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((out[1] - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn nonlinearity_pointwise_values() {
        let g = SpectralGrid::new(8, 2.0 * PI).unwrap();
        let kdv = kdv_system(1.0, 1.0).unwrap();
        let f = Field::scalar(vec![c(2.0, 0.0); 8]);
        let out = kdv.eval_nonlinearity(&f).unwrap();
        assert!(out.component(0).iter().all(|z| (z - c(4.0, 0.0)).norm() == 0.0));

        let nls = nls_system(1.0, 1.0).unwrap();
        let f = Field::scalar(vec![c(1.0, 1.0); 8]);
        let out = nls.eval_nonlinearity(&f).unwrap();
        assert!(out.component(0).iter().all(|z| (z - c(2.0, 2.0)).norm() < 1e-15));

        let zero = Field::zeros(1, g.n_points());
        let out = nls.eval_nonlinearity(&zero).unwrap();
        assert!(out.component(0).iter().all(|z| z.re == 0.0 && z.im == 0.0));

        assert!(matches!(
            nls.eval_nonlinearity(&Field::zeros(2, 8)),
            Err(SystemError::ComponentMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn soliton_normalization_and_phase() {
        let u0 = nls_envelope_soliton(1.0, 0.0, 1.0, 2.0, 0.0, 0.0);
        assert!((u0 - c(1.0, 0.0)).norm() < 1e-15);
        let upi = nls_envelope_soliton(1.0, 0.0, 1.0, 2.0, 0.0, PI);
        assert!((upi - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn soliton_modulus_time_independent_at_rest() {
        for &t in &[0.0, 0.3, 1.7, 9.2] {
            let m0 = nls_envelope_soliton(1.3, 0.0, 0.7, 2.0, 0.4, 0.0).norm();
            let mt = nls_envelope_soliton(1.3, 0.0, 0.7, 2.0, 0.4, t).norm();
            assert!((m0 - mt).abs() < 1e-14, "t = {t}: {m0} vs {mt}");
        }
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(rescale_nls_params(3.0, 5.0, 1.0, 1.0, 1.0).unwrap(), (3.0, 5.0));
        assert_eq!(rescale_nls_params(1.0, 1.0, 1.0, 2.0, 4.0).unwrap(), (1.0, 4.0));
        // Group property: inverting the scales recovers the parameters.
        let (m1, n1) = rescale_nls_params(1.0, 1.0, 2.0, 4.0, 8.0).unwrap();
        let (m2, n2) = rescale_nls_params(m1, n1, 0.5, 0.25, 0.125).unwrap();
        assert!((m2 - 1.0).abs() < 1e-15 && (n2 - 1.0).abs() < 1e-15);
        assert!(matches!(
            rescale_nls_params(1.0, 1.0, 0.0, 1.0, 1.0),
            Err(SystemError::InvalidParameter { name: "alpha", .. })
        ));
    }

    #[test]
    fn initial_condition_values() {
        let ic = InitialCondition::nls_sech(3.0, 2.0).unwrap();
        let mut out = [ZERO];
        ic.evaluate(0.0, &mut out);
        assert!((out[0] - c(3.0, 0.0)).norm() < 1e-15);
        // Periodic extension error at the domain edge is negligible.
        ic.evaluate(PI, &mut out);
        assert!(out[0].norm() < 1e-3);

        let zero = InitialCondition::sge_zero();
        let mut out2 = [c(9.0, 9.0); 2];
        zero.evaluate(1.234, &mut out2);
        assert_eq!(out2, [ZERO, ZERO]);

        let bump = InitialCondition::kdv_gaussian(2.0, 0.5).unwrap();
        bump.evaluate(0.0, &mut out);
        assert_eq!(out[0], c(0.5, 0.0));
    }

    #[test]
    fn initial_condition_sampling() {
        let g = SpectralGrid::new(16, 2.0 * PI).unwrap();
        let ic = InitialCondition::nls_sech(1.0, 2.0).unwrap();
        let f = ic.sample(&g);
        assert_eq!(f.n_components(), 1);
        assert_eq!(f.n_points(), 16);
        // Peak at x = 0 (grid index N/2).
        assert!((f.component(0)[8] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn table_interpolation() {
        let rows = vec![
            TableRow { x: 0.0, values: vec![c(0.0, 0.0)] },
            TableRow { x: 1.0, values: vec![c(2.0, -2.0)] },
            TableRow { x: 3.0, values: vec![c(2.0, 4.0)] },
        ];
        let ic = InitialCondition::from_table(rows).unwrap();
        let mut out = [ZERO];
        ic.evaluate(0.5, &mut out);
        assert!((out[0] - c(1.0, -1.0)).norm() < 1e-15);
        ic.evaluate(2.0, &mut out);
        assert!((out[0] - c(2.0, 1.0)).norm() < 1e-15);
        // Clamped outside the table.
        ic.evaluate(-5.0, &mut out);
        assert_eq!(out[0], c(0.0, 0.0));
        ic.evaluate(7.0, &mut out);
        assert_eq!(out[0], c(2.0, 4.0));
        // Exact abscissa hits.
        ic.evaluate(1.0, &mut out);
        assert_eq!(out[0], c(2.0, -2.0));
    }

    #[test]
    fn table_validation() {
        assert!(InitialCondition::from_table(Vec::new()).is_err());
        let unsorted = vec![
            TableRow { x: 1.0, values: vec![ZERO] },
            TableRow { x: 0.0, values: vec![ZERO] },
        ];
        assert!(InitialCondition::from_table(unsorted).is_err());
        let ragged = vec![
            TableRow { x: 0.0, values: vec![ZERO] },
            TableRow { x: 1.0, values: vec![ZERO, ZERO] },
        ];
        assert!(InitialCondition::from_table(ragged).is_err());
    }

    #[test]
    fn sge_reconstruct_cases() {
        let f = [c(1.0, 0.5), c(-2.0, 0.0)];
        let doubled: Vec<Complex64> = f.iter().map(|z| 2.0 * z).collect();
        let zeros = [ZERO, ZERO];
        assert_eq!(sge_reconstruct(&zeros, &zeros).unwrap(), vec![ZERO, ZERO]);
        assert_eq!(sge_reconstruct(&f, &f).unwrap(), f.to_vec());
        assert_eq!(sge_reconstruct(&doubled, &zeros).unwrap(), f.to_vec());
        assert!(sge_reconstruct(&f, &zeros[..1]).is_err());
    }

    #[test]
    fn builtin_symbols_purely_imaginary_on_grid() {
        let grids = [
            SpectralGrid::new(64, 2.0 * PI).unwrap(),
            SpectralGrid::new(128, 20.0).unwrap(),
        ];
        let systems = [kdv_system(0.05, 1.0).unwrap(), nls_system(1.0, 2.0).unwrap(), sge_system()];
        for sys in &systems {
            for g in &grids {
                for i in 0..sys.n_components() {
                    for &k in g.wavenumbers() {
                        let z = sys.linear_symbol(i).eval_at_i_kappa(k);
                        let bound = (1e-15 * z.norm()).max(1e-300);
                        assert!(
                            z.re.abs() <= bound,
                            "{} component {i} at kappa {k}: re = {}",
                            sys.name(),
                            z.re
                        );
                    }
                }
            }
        }
    }
}
