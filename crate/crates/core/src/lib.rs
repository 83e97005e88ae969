pub mod codec;
pub mod kernel;
pub mod formula;
pub mod primrec;
pub mod representation;
pub mod self_reference;
