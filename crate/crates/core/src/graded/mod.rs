//! Monomial ideals, monomial free complexes, box models of fine-graded
//! modules, Ext computations and Matlis duality.

pub mod boxes;
pub mod linear;
pub mod ext;
pub mod monomial;
pub mod presentation;

pub use boxes::{
    box_module_of_ideal, direct_sum, edge_poset_isomorphic, matlis_dual, BoxModule, Edge, ModuleBox,
    Truncation,
};
pub use ext::{cokernel_box_module, curve_ideal, ext1, homological_dimension_at_most_one, CurveIdeal};
pub use monomial::{CurveProfile, Exponent, MonomialIdeal, Weight, VARIABLES};
pub use presentation::{
    ideal_presentation, resolve_ideal, FreeModule, MonomialMatrix, MonomialPresentation, SignedMonomial,
};
