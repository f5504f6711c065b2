//! Specialized decompositions for the third-order coupling tensor and the
//! fourth-order stiffness tensor, plus Voigt notation.

pub mod coupling;
pub mod stiffness;
pub mod voigt;

pub use coupling::{
    coefficient_diff, coupling_decompose, coupling_decompose_with, coupling_reconstruct,
    CoefficientDiff, CouplingDeviators, CouplingTensor, CouplingVariant,
};
pub use stiffness::{stiffness_decompose, stiffness_reconstruct, StiffnessDeviators, StiffnessTensor};
pub use voigt::{tensor_to_voigt, voigt_to_tensor, VoigtMatrix};
