//! Continuous problem data: beam coefficient fields, boundary controls,
//! initial conditions, and the admissibility validation they must satisfy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

/// Relative tolerance for the `mu = gamma * m` proportionality check.
const PROPORTIONALITY_RTOL: f64 = 1e-12;

/// A spatial coefficient on `[0, length]`.
///
/// Piecewise fields are right-continuous at their breakpoints; sampled
/// fields live on a uniform grid and interpolate linearly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CoefficientField {
    Constant(f64),
    Piecewise {
        /// Strictly increasing interior breakpoints in `(0, length)`.
        breakpoints: Vec<f64>,
        /// One value per piece: `breakpoints.len() + 1` entries.
        values: Vec<f64>,
    },
    Sampled {
        /// Values on the uniform grid covering `[0, length]`, at least two.
        values: Vec<f64>,
    },
}

impl CoefficientField {
    /// Structural validity on `[0, length]`.
    pub fn validate(&self, length: f64) -> Result<()> {
        match self {
            CoefficientField::Constant(v) => {
                if !v.is_finite() {
                    return Err(Error::Domain("constant coefficient is not finite".into()));
                }
            }
            CoefficientField::Piecewise {
                breakpoints,
                values,
            } => {
                if values.len() != breakpoints.len() + 1 {
                    return Err(Error::Domain(format!(
                        "piecewise field needs {} values, got {}",
                        breakpoints.len() + 1,
                        values.len()
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Domain("piecewise value is not finite".into()));
                }
                let mut prev = 0.0;
                for &b in breakpoints {
                    if !(b > prev && b < length) {
                        return Err(Error::Domain(format!(
                            "breakpoint {b} is not strictly increasing inside (0, {length})"
                        )));
                    }
                    prev = b;
                }
            }
            CoefficientField::Sampled { values } => {
                if values.len() < 2 {
                    return Err(Error::Domain("sampled field needs at least two samples".into()));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Domain("sample is not finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Point evaluation; `x` is clamped to `[0, length]`.
    pub fn eval(&self, x: f64, length: f64) -> f64 {
        let x = x.clamp(0.0, length);
        match self {
            CoefficientField::Constant(v) => *v,
            CoefficientField::Piecewise {
                breakpoints,
                values,
            } => {
                // right-continuous: piece i covers [b_{i-1}, b_i)
                let mut idx = 0;
                for &b in breakpoints {
                    if x >= b {
                        idx += 1;
                    } else {
                        break;
                    }
                }
                values[idx]
            }
            CoefficientField::Sampled { values } => {
                let n = values.len();
                let h = length / (n - 1) as f64;
                let s = (x / h).floor() as usize;
                let i = s.min(n - 2);
                let t = (x - i as f64 * h) / h;
                values[i] * (1.0 - t) + values[i + 1] * t
            }
        }
    }

    /// The constant value, when the field is constant.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            CoefficientField::Constant(v) => Some(*v),
            _ => None,
        }
    }

    /// Field scaled by `s`, preserving the representation kind.
    pub fn scaled(&self, s: f64) -> CoefficientField {
        match self {
            CoefficientField::Constant(v) => CoefficientField::Constant(v * s),
            CoefficientField::Piecewise {
                breakpoints,
                values,
            } => CoefficientField::Piecewise {
                breakpoints: breakpoints.clone(),
                values: values.iter().map(|v| v * s).collect(),
            },
            CoefficientField::Sampled { values } => CoefficientField::Sampled {
                values: values.iter().map(|v| v * s).collect(),
            },
        }
    }
}

/// Exact infimum and supremum of a coefficient field over `[0, length]`.
///
/// Constant and piecewise kinds have extrema at piece values; sampled kinds
/// interpolate linearly so extrema sit at the samples.
pub fn coefficient_bounds(field: &CoefficientField, length: f64) -> Result<(f64, f64)> {
    if !(length > 0.0) {
        return Err(Error::Domain("length must be positive".into()));
    }
    field.validate(length)?;
    let values: &[f64] = match field {
        CoefficientField::Constant(v) => std::slice::from_ref(v),
        CoefficientField::Piecewise { values, .. } => values,
        CoefficientField::Sampled { values } => values,
    };
    let inf = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((inf, sup))
}

/// The beam: geometry, coefficient fields, and the damping proportionality
/// constant `gamma` (with `mu = gamma * m` whenever `gamma > 0`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BeamSpec {
    /// Beam length in meters.
    pub length: f64,
    /// Lineic mass density `m(x)` in kg/m.
    pub mass_density: CoefficientField,
    /// Viscous damping coefficient `mu(x)` in kg/(m s).
    pub damping: CoefficientField,
    /// Flexural rigidity `r(x)` in N m^2.
    pub rigidity: CoefficientField,
    /// Damping constant of proportionality in 1/s, `>= 0`.
    pub gamma: f64,
}

impl BeamSpec {
    /// Uniform beam with `mu = gamma * m`.
    pub fn uniform(length: f64, mass_density: f64, gamma: f64, rigidity: f64) -> Self {
        BeamSpec {
            length,
            mass_density: CoefficientField::Constant(mass_density),
            damping: CoefficientField::Constant(gamma * mass_density),
            rigidity: CoefficientField::Constant(rigidity),
            gamma,
        }
    }

    pub fn mass_bounds(&self) -> Result<(f64, f64)> {
        coefficient_bounds(&self.mass_density, self.length)
    }

    pub fn damping_bounds(&self) -> Result<(f64, f64)> {
        coefficient_bounds(&self.damping, self.length)
    }

    pub fn rigidity_bounds(&self) -> Result<(f64, f64)> {
        coefficient_bounds(&self.rigidity, self.length)
    }

    /// True when all three coefficient fields are constants.
    pub fn is_uniform(&self) -> bool {
        self.mass_density.as_constant().is_some()
            && self.damping.as_constant().is_some()
            && self.rigidity.as_constant().is_some()
    }
}

/// The four nonnegative boundary control stiffnesses: torsional springs
/// `kr` (N m) and torsional dampers `ka` (N m s) at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryControls {
    pub kr_left: f64,
    pub ka_left: f64,
    pub kr_right: f64,
    pub ka_right: f64,
}

impl BoundaryControls {
    pub const fn free() -> Self {
        BoundaryControls {
            kr_left: 0.0,
            ka_left: 0.0,
            kr_right: 0.0,
            ka_right: 0.0,
        }
    }

    pub fn sum(&self) -> f64 {
        self.kr_left + self.ka_left + self.kr_right + self.ka_right
    }

    pub fn damper_sum(&self) -> f64 {
        self.ka_left + self.ka_right
    }

    pub fn any_negative(&self) -> bool {
        self.kr_left < 0.0 || self.ka_left < 0.0 || self.kr_right < 0.0 || self.ka_right < 0.0
    }
}

/// A deflection or velocity profile, as a closed form or as samples on a
/// uniform grid over `[0, length]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    Zero,
    /// `A x^2 (l - x)^2 / l^4`: smooth, vanishes with zero slope at both ends.
    Demo { amplitude: f64 },
    /// `A sin(pi x / l)`: the first hinged mode shape.
    HalfSine { amplitude: f64 },
    Samples(Vec<f64>),
}

impl Profile {
    pub fn value(&self, x: f64, length: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Demo { amplitude } => {
                let l4 = length.powi(4);
                amplitude * x * x * (length - x) * (length - x) / l4
            }
            Profile::HalfSine { amplitude } => {
                // exact zeros at the ends; sin(pi) alone would leave an
                // ulp-sized endpoint value and fail essential compatibility
                if x == 0.0 || x == length {
                    0.0
                } else {
                    amplitude * (std::f64::consts::PI * x / length).sin()
                }
            }
            Profile::Samples(values) => {
                CoefficientField::Sampled {
                    values: values.clone(),
                }
                .eval(x, length)
            }
        }
    }

    /// Spatial slope. Closed forms differentiate exactly; samples use
    /// second-order finite differences.
    pub fn slope(&self, x: f64, length: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Demo { amplitude } => {
                let l4 = length.powi(4);
                2.0 * amplitude * x * (length - x) * (length - 2.0 * x) / l4
            }
            Profile::HalfSine { amplitude } => {
                let k = std::f64::consts::PI / length;
                amplitude * k * (k * x).cos()
            }
            Profile::Samples(values) => {
                let h = length / (values.len() - 1) as f64;
                let deriv = numeric::first_derivative(values, h);
                CoefficientField::Sampled { values: deriv }.eval(x, length)
            }
        }
    }

    /// Number of sample intervals, when the profile is sampled.
    pub fn sample_intervals(&self) -> Option<usize> {
        match self {
            Profile::Samples(values) => Some(values.len().saturating_sub(1)),
            _ => None,
        }
    }

    fn all_finite(&self) -> bool {
        match self {
            Profile::Samples(values) => values.iter().all(|v| v.is_finite()),
            Profile::Demo { amplitude } | Profile::HalfSine { amplitude } => amplitude.is_finite(),
            Profile::Zero => true,
        }
    }

    fn endpoint_values(&self, length: f64) -> (f64, f64) {
        match self {
            Profile::Samples(values) => (values[0], *values.last().unwrap()),
            _ => (self.value(0.0, length), self.value(length, length)),
        }
    }
}

/// Initial deflection and velocity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialConditions {
    pub deflection: Profile,
    pub velocity: Profile,
}

impl InitialConditions {
    /// Default demonstration state: the smooth quartic bump at rest.
    pub fn demo() -> Self {
        InitialConditions {
            deflection: Profile::Demo { amplitude: 0.01 },
            velocity: Profile::Zero,
        }
    }

    pub fn zero() -> Self {
        InitialConditions {
            deflection: Profile::Zero,
            velocity: Profile::Zero,
        }
    }
}

/// A violated admissibility condition. `as_str` yields the stable report
/// identifier the CLI prints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    LengthNotPositive,
    FieldInvalid,
    MassNotPositive,
    DampingNegative,
    RigidityNotPositive,
    GammaNegative,
    MuGammaMismatch,
    BoundaryConstantNegative,
    NoDampingOrSpring,
    IcEndpointNonzero,
    IcNotFinite,
}

impl Condition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::LengthNotPositive => "LENGTH_NOT_POSITIVE",
            Condition::FieldInvalid => "FIELD_INVALID",
            Condition::MassNotPositive => "MASS_NOT_POSITIVE",
            Condition::DampingNegative => "DAMPING_NEGATIVE",
            Condition::RigidityNotPositive => "RIGIDITY_NOT_POSITIVE",
            Condition::GammaNegative => "GAMMA_NEGATIVE",
            Condition::MuGammaMismatch => "MU_GAMMA_MISMATCH",
            Condition::BoundaryConstantNegative => "BOUNDARY_CONSTANT_NEGATIVE",
            Condition::NoDampingOrSpring => "NO_DAMPING_OR_SPRING",
            Condition::IcEndpointNonzero => "IC_ENDPOINT_NONZERO",
            Condition::IcNotFinite => "IC_NOT_FINITE",
        }
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of `validate`. Violations are data, not errors; an empty list
/// means the inputs are admissible. `certificate_eligible` additionally
/// requires `gamma > 0`, the strict condition the decay certificate needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Condition>,
    pub certificate_eligible: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the admissibility conditions on the beam data, boundary controls,
/// and initial state. Pure and idempotent.
pub fn validate(spec: &BeamSpec, bc: &BoundaryControls, ic: &InitialConditions) -> ValidationReport {
    let mut violations = Vec::new();

    if !(spec.length > 0.0) || !spec.length.is_finite() {
        violations.push(Condition::LengthNotPositive);
        return ValidationReport {
            violations,
            certificate_eligible: false,
        };
    }

    let mut fields_ok = true;
    for field in [&spec.mass_density, &spec.damping, &spec.rigidity] {
        if field.validate(spec.length).is_err() {
            fields_ok = false;
        }
    }
    if !fields_ok {
        violations.push(Condition::FieldInvalid);
    }

    if fields_ok {
        let (m0, m1) = coefficient_bounds(&spec.mass_density, spec.length).unwrap();
        let (mu0, _mu1) = coefficient_bounds(&spec.damping, spec.length).unwrap();
        let (r0, r1) = coefficient_bounds(&spec.rigidity, spec.length).unwrap();
        if !(m0 > 0.0) || !m1.is_finite() {
            violations.push(Condition::MassNotPositive);
        }
        if mu0 < 0.0 {
            violations.push(Condition::DampingNegative);
        }
        if !(r0 > 0.0) || !r1.is_finite() {
            violations.push(Condition::RigidityNotPositive);
        }
        if spec.gamma > 0.0 && !proportional(&spec.damping, &spec.mass_density, spec.gamma, spec.length) {
            violations.push(Condition::MuGammaMismatch);
        }
    }

    if spec.gamma < 0.0 || !spec.gamma.is_finite() {
        violations.push(Condition::GammaNegative);
    }

    if bc.any_negative() {
        violations.push(Condition::BoundaryConstantNegative);
    } else if spec.gamma >= 0.0 && spec.gamma + bc.sum() <= 0.0 {
        violations.push(Condition::NoDampingOrSpring);
    }

    if !ic.deflection.all_finite() || !ic.velocity.all_finite() {
        violations.push(Condition::IcNotFinite);
    } else {
        let (u0_left, u0_right) = ic.deflection.endpoint_values(spec.length);
        if u0_left != 0.0 || u0_right != 0.0 {
            violations.push(Condition::IcEndpointNonzero);
        }
    }

    let certificate_eligible = violations.is_empty() && spec.gamma > 0.0;
    ValidationReport {
        violations,
        certificate_eligible,
    }
}

/// Pointwise `mu == gamma * m` up to a relative tolerance, probed at the
/// union of both fields' natural nodes plus a uniform grid.
fn proportional(mu: &CoefficientField, m: &CoefficientField, gamma: f64, length: f64) -> bool {
    let mut probes: Vec<f64> = numeric::linspace(length, 33);
    for field in [mu, m] {
        match field {
            CoefficientField::Piecewise { breakpoints, .. } => {
                for &b in breakpoints {
                    // probe just on both sides of each breakpoint
                    probes.push(b);
                    probes.push((b - 1e-9 * length).max(0.0));
                }
            }
            CoefficientField::Sampled { values } => {
                let h = length / (values.len() - 1) as f64;
                probes.extend((0..values.len()).map(|i| i as f64 * h));
            }
            CoefficientField::Constant(_) => {}
        }
    }
    probes.iter().all(|&x| {
        let expected = gamma * m.eval(x, length);
        let actual = mu.eval(x, length);
        let scale = expected.abs().max(actual.abs()).max(f64::MIN_POSITIVE);
        (actual - expected).abs() <= PROPORTIONALITY_RTOL * scale
    })
}

/// Cross-section constants for a uniform rectangular beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionParams {
    /// Cross-section area `S = b h` in m^2.
    pub area: f64,
    /// Second moment of area `I = b h^3 / 12` in m^4.
    pub second_moment: f64,
    /// Lineic mass `m = rho S` in kg/m.
    pub mass_per_length: f64,
    /// Flexural rigidity `r = E I` in N m^2.
    pub rigidity: f64,
}

/// Derives the uniform-beam constants from material and section data.
pub fn derived_constant_params(rho: f64, young: f64, width: f64, height: f64) -> Result<SectionParams> {
    for (name, v) in [("rho", rho), ("E", young), ("b", width), ("h", height)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    let area = width * height;
    let second_moment = width * height.powi(3) / 12.0;
    Ok(SectionParams {
        area,
        second_moment,
        mass_per_length: rho * area,
        rigidity: young * second_moment,
    })
}

/// The bundled benchmark beam: a slender rectangular strip used by the
/// reference table, the sample configs, and most tests.
pub mod bench {
    use super::*;

    pub const LENGTH: f64 = 0.502;
    pub const WIDTH: f64 = 1.7e-3;
    pub const HEIGHT: f64 = 0.89e-3;
    pub const DENSITY: f64 = 1.42e3;
    pub const YOUNG: f64 = 3.1e9;

    /// Exact derived section constants.
    pub fn section() -> SectionParams {
        derived_constant_params(DENSITY, YOUNG, WIDTH, HEIGHT).unwrap()
    }

    /// The rounded parameter pair `(m, r)` the reference table is defined
    /// against. Each quantity keeps the significant digits of the table's
    /// documented parameter set: `S` to three, `I` to one, `m = rho * S` to
    /// three, `r = E * I` exactly from the rounded `I`.
    pub fn printed_params() -> (f64, f64) {
        let s = numeric::round_sig(WIDTH * HEIGHT, 3);
        let i = numeric::round_sig(WIDTH * HEIGHT.powi(3) / 12.0, 1);
        let m = numeric::round_sig(DENSITY * s, 3);
        let r = YOUNG * i;
        (m, r)
    }

    /// Benchmark beam spec with the exact derived constants.
    pub fn beam(gamma: f64) -> BeamSpec {
        let p = section();
        BeamSpec::uniform(LENGTH, p.mass_per_length, gamma, p.rigidity)
    }
}
