//! Quiver geometry: dimension data, chambers, tangent characters at
//! torus-fixed points, attraction/ordering data, and polarizations.

pub mod data;
pub mod polarization;
pub mod rho;
pub mod tangent;

pub use data::{Arrows, Chamber, QuiverData, TSign};
pub use polarization::{index_exponents, polarization};
pub use rho::{attraction_value, order_fixed_points, rho_key, root_key, split_attracting, RhoKey};
pub use tangent::{
    character_weight, hom_character, restrict_map, restriction_data, tangent_space_at,
    tautological_bundle, virtual_tangent_space, Restriction,
};
