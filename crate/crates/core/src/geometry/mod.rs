//! Model manifolds, model submanifolds and their closed-form geometry.

mod fd;
mod pair;
mod space;

pub use fd::{gradient_fd, gradient_vector_fd, hessian_fd, laplacian_fd};
pub(crate) use pair::norm as norm_of;
pub use pair::{ComparisonConstants, ModelPair, Side, SubmanifoldModel, LOCUS_TOL};
pub use space::{angle_offset, minkowski, wrap_angle, GeometryPoint, SpaceForm, SpaceKind, HYPERBOLOID_TOL};
