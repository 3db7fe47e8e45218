//! Reference elements on `[-1,1]^n`.

mod coboundary;
mod decompose;
mod element;
pub mod spaces;
mod tabulate;
mod tensor;
mod topology;

pub use decompose::legendre_coords;
pub use element::{build_element, Element, ElementName, ElementSpec, Family, Proxy, ELEMENT_NAMES};
pub use topology::{CellTopology, Entity};
pub use coboundary::{coboundary_fit, reference_gram, CoboundaryFit};
pub use tabulate::{tabulate, tabulate_derivative, tabulate_forms, Tabulation};
