//! Game documents, TUNA corpus readers and the `incrsa` command line, on top
//! of the `no_std` inference core in [`incrsa_core`].

pub mod cli;
pub mod corpus;
pub mod gamefile;
pub mod table;
