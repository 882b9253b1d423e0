pub mod applications;
pub mod cartan;
pub mod catalogue;
pub mod exec;
pub mod foundation;
pub mod liealg;
pub mod moment;
pub mod observables;
pub mod random;
