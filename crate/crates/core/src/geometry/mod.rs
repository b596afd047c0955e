//! Convex bodies, their support, radial and gauge functions, and sphere grids.

pub mod body;
pub mod ellipsoid;
pub mod polygon;
pub mod polytope;
pub mod sampled;
pub mod sphere;
pub mod angular;

pub use body::{ConvexBody, Polytope};
pub use ellipsoid::Ellipsoid;
pub use polygon::ConvexPolygon;
pub use sampled::SampledBody;
pub use sphere::SphereGrid;
