//! Lie symmetry analysis of the damped nonlinear Timoshenko beam system
//!
//! ```text
//! rho1 phi_tt - k (phi_x + psi)_x = 0
//! rho2 psi_tt - (chi(psi_x))_x + k (phi_x + psi) + d psi_t = 0
//! ```
//!
//! with numeric oracles for every closed-form claim.

pub mod adjoint;
pub mod algebra;
pub mod chi;
pub mod error;
pub mod field;
pub mod group;
pub mod interp;
pub mod manufactured;
pub mod ode;
pub mod optimal;
pub mod params;
pub mod reduction;
pub mod residual;

pub use adjoint::{adjoint_composed, adjoint_single, AdjointMatrix, EpsilonVector};
pub use algebra::{bracket, killing_form, structure_constants, AlgebraElement, StructureConstants};
pub use chi::ChiSpec;
pub use error::{Error, Result};
pub use field::{Provenance, SolutionField, Window};
pub use group::{scale_solution, transform_point, transform_solution, GeneratorSpec};
pub use optimal::{
    classify, representative, verify_conjugacy, ClassId, ClassificationResult, FreeParams,
};
pub use params::{case_of, CaseKind, CaseParams, Family};
pub use reduction::{
    ansatz, lift, reduced_residual, solve_eta2, solve_reduced, AnsatzSpec, ReducedSolution, RowRef,
};
pub use residual::{
    convergence_study, pde_residual, sample, ConvergenceStudy, GridSolution, ResidualReport,
};
