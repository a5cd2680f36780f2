//! Space semi-discretization with value-and-slope cubic beam elements.
//!
//! Each node carries a deflection and a rotation unknown, so the end
//! rotations the boundary controls act on are explicit unknowns and the
//! spring/damper augmentations are exact rank-2 (two rank-1) additions.
//! The essential conditions `u(0) = u(l) = 0` are imposed by eliminating
//! the two end deflection unknowns.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{BeamSpec, BoundaryControls, CoefficientField, InitialConditions};

/// Relative tolerance for snapping piecewise breakpoints to mesh nodes.
const SNAP_RTOL: f64 = 1e-9;

/// Uniform mesh on `[0, length]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub n_elements: usize,
    pub node_positions: Vec<f64>,
}

impl Mesh {
    pub fn uniform(length: f64, n_elements: usize) -> Result<Mesh> {
        if !(length > 0.0) {
            return Err(Error::Domain("length must be positive".into()));
        }
        if n_elements < 2 {
            return Err(Error::Domain("need at least two elements".into()));
        }
        let h = length / n_elements as f64;
        let mut node_positions: Vec<f64> = (0..=n_elements).map(|i| i as f64 * h).collect();
        node_positions[n_elements] = length;
        Ok(Mesh {
            n_elements,
            node_positions,
        })
    }

    pub fn length(&self) -> f64 {
        *self.node_positions.last().unwrap()
    }

    pub fn h(&self) -> f64 {
        self.length() / self.n_elements as f64
    }
}

/// What a retained unknown represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofKind {
    Deflection,
    Rotation,
}

/// Association of an unknown index with its node and kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dof {
    pub node: usize,
    pub kind: DofKind,
}

/// Assembled semi-discrete operators `M qdd + C qd + K q = 0` after
/// constraining the end deflections.
///
/// `stiffness` already contains the boundary-spring energy and `damping`
/// the boundary-damper dissipation, each as a diagonal addition at the end
/// rotation unknowns.
#[derive(Debug, Clone)]
pub struct DiscreteBeam {
    pub mesh: Mesh,
    pub mass: DMatrix<f64>,
    pub damping: DMatrix<f64>,
    pub stiffness: DMatrix<f64>,
    pub dofs: Vec<Dof>,
    pub left_rotation_index: usize,
    pub right_rotation_index: usize,
    pub controls: BoundaryControls,
}

impl DiscreteBeam {
    pub fn n_unknowns(&self) -> usize {
        self.mass.nrows()
    }

    /// Half-bandwidth of every assembled operator.
    pub const HALF_BANDWIDTH: usize = 3;

    /// Writes a matrix in coordinate text format, one `row col value` line
    /// per structurally nonzero entry.
    pub fn write_coordinate(&self, matrix: &DMatrix<f64>, out: &mut impl std::io::Write) -> Result<()> {
        for i in 0..matrix.nrows() {
            for j in 0..matrix.ncols() {
                let v = matrix[(i, j)];
                if v != 0.0 {
                    writeln!(out, "{} {} {}", i, j, crate::numeric::fmt_csv(v))?;
                }
            }
        }
        Ok(())
    }
}

/// Per-element coefficient evaluation strategy.
enum ElementCoefficient {
    /// Constant on the element: exact closed-form integrals apply.
    Constant(f64),
    /// Gauss quadrature against the interpolated field.
    Sampled,
}

fn element_coefficient(
    field: &CoefficientField,
    mesh: &Mesh,
    element: usize,
) -> Result<ElementCoefficient> {
    let length = mesh.length();
    match field {
        CoefficientField::Constant(v) => Ok(ElementCoefficient::Constant(*v)),
        CoefficientField::Piecewise { breakpoints, .. } => {
            let h = mesh.h();
            // every breakpoint must sit on a node, otherwise the element
            // integrals would mix pieces
            for &b in breakpoints {
                let ratio = b / h;
                if (ratio - ratio.round()).abs() > SNAP_RTOL * mesh.n_elements as f64 {
                    return Err(Error::MeshIncompatible(format!(
                        "breakpoint {b} does not lie on a mesh node (h = {h}); refine the mesh"
                    )));
                }
            }
            let mid = (mesh.node_positions[element] + mesh.node_positions[element + 1]) / 2.0;
            Ok(ElementCoefficient::Constant(field.eval(mid, length)))
        }
        CoefficientField::Sampled { .. } => Ok(ElementCoefficient::Sampled),
    }
}

/// Hermite shape values at local coordinate `xi` in `[0, 1]` for element
/// length `h`, ordered `[w1, th1, w2, th2]`.
fn shape_values(xi: f64, h: f64) -> [f64; 4] {
    let xi2 = xi * xi;
    let xi3 = xi2 * xi;
    [
        1.0 - 3.0 * xi2 + 2.0 * xi3,
        h * (xi - 2.0 * xi2 + xi3),
        3.0 * xi2 - 2.0 * xi3,
        h * (xi3 - xi2),
    ]
}

/// Second derivatives of the shape functions with respect to `x`.
fn shape_second_derivs(xi: f64, h: f64) -> [f64; 4] {
    let h2 = h * h;
    [
        (12.0 * xi - 6.0) / h2,
        (6.0 * xi - 4.0) / h,
        (6.0 - 12.0 * xi) / h2,
        (6.0 * xi - 2.0) / h,
    ]
}

/// Closed-form consistent mass-type element matrix for constant coefficient.
fn element_mass(coef: f64, h: f64) -> [[f64; 4]; 4] {
    let c = coef * h / 420.0;
    let h2 = h * h;
    [
        [156.0 * c, 22.0 * h * c, 54.0 * c, -13.0 * h * c],
        [22.0 * h * c, 4.0 * h2 * c, 13.0 * h * c, -3.0 * h2 * c],
        [54.0 * c, 13.0 * h * c, 156.0 * c, -22.0 * h * c],
        [-13.0 * h * c, -3.0 * h2 * c, -22.0 * h * c, 4.0 * h2 * c],
    ]
}

/// Closed-form bending stiffness element matrix for constant coefficient.
fn element_stiffness(coef: f64, h: f64) -> [[f64; 4]; 4] {
    let c = coef / (h * h * h);
    let h2 = h * h;
    [
        [12.0 * c, 6.0 * h * c, -12.0 * c, 6.0 * h * c],
        [6.0 * h * c, 4.0 * h2 * c, -6.0 * h * c, 2.0 * h2 * c],
        [-12.0 * c, -6.0 * h * c, 12.0 * c, -6.0 * h * c],
        [6.0 * h * c, 2.0 * h2 * c, -6.0 * h * c, 4.0 * h2 * c],
    ]
}

/// Three-point Gauss nodes and weights on `[0, 1]`.
const GAUSS3: [(f64, f64); 3] = [
    (0.112701665379258, 0.277777777777778),
    (0.5, 0.444444444444444),
    (0.887298334620742, 0.277777777777778),
];

fn element_mass_quadrature(field: &CoefficientField, mesh: &Mesh, element: usize) -> [[f64; 4]; 4] {
    let h = mesh.h();
    let x0 = mesh.node_positions[element];
    let length = mesh.length();
    let mut m = [[0.0; 4]; 4];
    for (xi, w) in GAUSS3 {
        let coef = field.eval(x0 + xi * h, length);
        let n = shape_values(xi, h);
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += w * h * coef * n[i] * n[j];
            }
        }
    }
    m
}

fn element_stiffness_quadrature(
    field: &CoefficientField,
    mesh: &Mesh,
    element: usize,
) -> [[f64; 4]; 4] {
    let h = mesh.h();
    let x0 = mesh.node_positions[element];
    let length = mesh.length();
    let mut k = [[0.0; 4]; 4];
    for (xi, w) in GAUSS3 {
        let coef = field.eval(x0 + xi * h, length);
        let b = shape_second_derivs(xi, h);
        for i in 0..4 {
            for j in 0..4 {
                k[i][j] += w * h * coef * b[i] * b[j];
            }
        }
    }
    k
}

/// Assembles the semi-discrete operators for a validated beam.
///
/// Element integrals are exact (closed form) for constant and
/// piecewise-constant coefficients; sampled coefficients use three-point
/// Gauss quadrature per element. Piecewise breakpoints must coincide with
/// mesh nodes, otherwise `MESH_INCOMPATIBLE` is returned.
pub fn assemble(spec: &BeamSpec, bc: &BoundaryControls, mesh: &Mesh) -> Result<DiscreteBeam> {
    if (mesh.length() - spec.length).abs() > SNAP_RTOL * spec.length {
        return Err(Error::Domain(format!(
            "mesh covers [0, {}] but the beam has length {}",
            mesh.length(),
            spec.length
        )));
    }
    let n = mesh.n_elements;
    let n_full = 2 * (n + 1);
    let mut mass_full = DMatrix::zeros(n_full, n_full);
    let mut damping_full = DMatrix::zeros(n_full, n_full);
    let mut stiffness_full = DMatrix::zeros(n_full, n_full);

    for e in 0..n {
        let h = mesh.h();
        let me = match element_coefficient(&spec.mass_density, mesh, e)? {
            ElementCoefficient::Constant(v) => element_mass(v, h),
            ElementCoefficient::Sampled => element_mass_quadrature(&spec.mass_density, mesh, e),
        };
        let ce = match element_coefficient(&spec.damping, mesh, e)? {
            ElementCoefficient::Constant(v) => element_mass(v, h),
            ElementCoefficient::Sampled => element_mass_quadrature(&spec.damping, mesh, e),
        };
        let ke = match element_coefficient(&spec.rigidity, mesh, e)? {
            ElementCoefficient::Constant(v) => element_stiffness(v, h),
            ElementCoefficient::Sampled => element_stiffness_quadrature(&spec.rigidity, mesh, e),
        };
        let base = 2 * e;
        for i in 0..4 {
            for j in 0..4 {
                mass_full[(base + i, base + j)] += me[i][j];
                damping_full[(base + i, base + j)] += ce[i][j];
                stiffness_full[(base + i, base + j)] += ke[i][j];
            }
        }
    }

    // essential conditions: drop the end deflection unknowns
    let mut keep = Vec::with_capacity(n_full - 2);
    let mut dofs = Vec::with_capacity(n_full - 2);
    for full in 0..n_full {
        let node = full / 2;
        let kind = if full % 2 == 0 {
            DofKind::Deflection
        } else {
            DofKind::Rotation
        };
        let constrained = kind == DofKind::Deflection && (node == 0 || node == n);
        if !constrained {
            keep.push(full);
            dofs.push(Dof { node, kind });
        }
    }
    let reduce = |m: &DMatrix<f64>| -> DMatrix<f64> {
        DMatrix::from_fn(keep.len(), keep.len(), |i, j| m[(keep[i], keep[j])])
    };
    let mass = reduce(&mass_full);
    let mut damping = reduce(&damping_full);
    let mut stiffness = reduce(&stiffness_full);

    let left_rotation_index = dofs
        .iter()
        .position(|d| d.node == 0 && d.kind == DofKind::Rotation)
        .unwrap();
    let right_rotation_index = dofs
        .iter()
        .position(|d| d.node == n && d.kind == DofKind::Rotation)
        .unwrap();

    // rank-2 boundary augmentations on the end rotations
    stiffness[(left_rotation_index, left_rotation_index)] += bc.kr_left;
    stiffness[(right_rotation_index, right_rotation_index)] += bc.kr_right;
    damping[(left_rotation_index, left_rotation_index)] += bc.ka_left;
    damping[(right_rotation_index, right_rotation_index)] += bc.ka_right;

    Ok(DiscreteBeam {
        mesh: mesh.clone(),
        mass,
        damping,
        stiffness,
        dofs,
        left_rotation_index,
        right_rotation_index,
        controls: *bc,
    })
}

/// Interpolates the initial state onto the mesh: deflection unknowns from
/// point values, rotation unknowns from slopes (exact for closed forms,
/// finite differences for samples). Constrained unknowns are dropped.
pub fn interpolate_initial(
    ic: &InitialConditions,
    mesh: &Mesh,
) -> Result<(DVector<f64>, DVector<f64>)> {
    for profile in [&ic.deflection, &ic.velocity] {
        if let Some(intervals) = profile.sample_intervals() {
            if intervals < mesh.n_elements {
                return Err(Error::Resolution(format!(
                    "profile has {intervals} sample intervals but the mesh has {} elements",
                    mesh.n_elements
                )));
            }
        }
    }
    let n = mesh.n_elements;
    let length = mesh.length();
    let n_red = 2 * n;
    let mut q0 = DVector::zeros(n_red);
    let mut v0 = DVector::zeros(n_red);
    let mut idx = 0;
    for node in 0..=n {
        let x = mesh.node_positions[node];
        if !(node == 0 || node == n) {
            q0[idx] = ic.deflection.value(x, length);
            v0[idx] = ic.velocity.value(x, length);
            idx += 1;
        }
        q0[idx] = ic.deflection.slope(x, length);
        v0[idx] = ic.velocity.slope(x, length);
        idx += 1;
    }
    debug_assert_eq!(idx, n_red);
    Ok((q0, v0))
}

/// Smallest natural frequency of the undamped discrete pair `(K, M)`.
pub fn smallest_natural_frequency(beam: &DiscreteBeam) -> Result<f64> {
    linalg::min_generalized_frequency(&beam.stiffness, &beam.mass)
}

/// Power-iteration estimate of the largest natural frequency, used by the
/// default time-step policy.
pub fn estimate_max_frequency(beam: &DiscreteBeam) -> Result<f64> {
    linalg::max_generalized_frequency(&beam.stiffness, &beam.mass, 60)
}
