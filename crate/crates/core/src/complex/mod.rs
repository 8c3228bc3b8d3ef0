//! The chain complex `Ĉ(C, ε)`: elementary maps, type maps and assembly.

mod assemble;
mod elementary;

pub use assemble::{
    allowed_paths, build_diagram_complex, d_config, d_config_type, d_config_type_along, d_k, d_parts, d_total, diagram_complex_on, homotopy,
    representative_path, x_variant, x_variant_configuration, ConfigMap, DiagramComplex, GradedBasis,
};
pub use elementary::{elementary_homotopy, elementary_partial};
