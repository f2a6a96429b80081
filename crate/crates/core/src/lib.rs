//! Morse, Bott, Maslov and splitting-number invariants of linear symplectic
//! paths, computed from quadratic generating families.
//!
//! Conventions: coordinates are ordered `(x_1..x_d, y_1..y_d)` and the
//! symplectic form is `omega(z, z') = <X, Y'> - <Y, X'>`. A near-identity
//! factor is encoded by the generating function
//! `f(X1, Y0) = 1/2 <A X1, X1> + <B X1, Y0> + 1/2 <C Y0, Y0>` through
//! `X1 - X0 = -(B X1 + C Y0)` and `Y1 - Y0 = A X1 + B^T Y0`.
//!
//! ```
//! use sympindex::family::{DiscretizeOptions, PathSpec};
//! use sympindex::maslov::maslov_of_path;
//! use sympindex::Tolerances;
//!
//! let path = PathSpec::NamedRotation { beta: 5.0 * std::f64::consts::PI };
//! let r = maslov_of_path(&path, &DiscretizeOptions::default(), true, &Tolerances::default()).unwrap();
//! assert_eq!(r.indices.triple(), (-5, 5, 0));
//! ```

pub mod coefficients;
pub mod error;
pub mod family;
pub mod lagrangian;
pub mod linalg;
pub mod maslov;
pub mod symplectic;

pub use error::{Error, ErrorClass, Result};
pub use linalg::{HermitianMatrix, Inertia, Subspace, Tolerances};
