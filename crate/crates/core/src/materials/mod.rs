//! Optical response of the surfaces: permittivity models, normal wavevector
//! components with fixed branch, Fresnel coefficients and the
//! glass / metal film / vacuum stack.

mod drude;
mod fresnel;
mod stack;
mod surface;
mod tabulated;

pub use drude::{drude_permittivity, DrudeMetal};
pub use fresnel::{
    fresnel, fresnel_interface_t, interface_coefficients, kappa, kappa_unchecked, Polarization,
};
pub use stack::{glass_vacuum_t, tir_angle, tir_angle_for_index, LayerStack};
pub use surface::{Reflection, Surface};
pub use tabulated::{Interpolation, TabulatedDielectric, DATA_DIR_ENV};
