//! Exact computation of the module labels and fusion ring of an even
//! positive-definite lattice vertex algebra, together with a symbolic
//! Fock-space engine for truncated operator identities.

pub mod cli;
pub mod cocycle;
pub mod error;
pub mod f2;
pub mod fock;
pub mod fusion;
pub mod gauss;
pub mod group;
pub mod intmat;
pub mod lattice;
pub mod rep;
pub mod report;

pub use error::Error;

pub fn cli_main() -> i32 {
    cli::main_from_args(std::env::args_os())
}
