//! Points of the adele ring `A_P` and of the adelic torus `A_P / Γ_P`.

mod metric;
mod point;
mod prime_set;

pub use metric::{
    ambient_metric, ambient_norm, brute_force_torus_distance, diagonal_elements, reduce,
    torus_distance, torus_distance_reduced, torus_norm,
};
pub use point::{parse_point, AdelePoint, TorusPoint};
pub use prime_set::PrimeSet;
