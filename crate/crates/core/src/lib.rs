pub mod cert;
pub mod error;
pub mod forms;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod lp;
pub mod rational;
pub mod nf;
pub mod tightness;
pub mod vform;
pub mod vplus;
pub mod enumerate;
pub mod rng;
pub mod sp;
pub mod suite;
