pub mod converge;
pub mod graphgen;
pub mod propagate;
pub mod search;
pub mod sweep;
