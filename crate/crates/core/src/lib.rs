pub mod field_tower;
pub mod polynomials;
pub mod linear_algebra;
pub mod sextic_model;
pub mod singularity;
pub mod point_counting;
pub mod fixtures;
pub mod orbit_classification;
pub mod enumeration;
pub mod cli;
