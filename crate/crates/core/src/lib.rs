//! Exact computations with Grassmann graphs over finite fields and isometric
//! embeddings of Johnson graphs into them.

pub mod caps;
pub mod combinatorics;
pub mod dot;
pub mod embeddings;
pub mod error;
pub mod field;
pub mod grassmannian;
pub mod independence;
pub mod io;
pub mod johnson;
pub mod matrix;
pub mod oracle;
pub mod rigidity;
pub mod semilinear;
pub mod subspace;

pub use caps::Caps;
pub use error::{Error, Result};
pub use field::{Elem, Field, FieldAutomorphism, FieldSpec};
pub use matrix::Matrix;
pub use semilinear::SemilinearMap;
pub use subspace::Subspace;
