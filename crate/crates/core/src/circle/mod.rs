//! Circle-method layer: exponential sums over smooth numbers, major arcs, characters.

pub mod arcs;
pub mod characters;
pub mod dft;
pub mod sums;

pub use arcs::{major_arcs, minor_arc_probe, Arc, MajorArcs, MinorProbe};
pub use characters::{Character, CharacterTable};
pub use sums::{
    character_identity_check, e, e_phi, l_function_y, m_phi, m_tilde_phi, triple_product,
    triple_product_exact, zeta_y_twisted, IdentityCheck, PsiSource,
};
