//! Fixed-magnetization bases and sparse Heisenberg Hamiltonians.

pub mod chain;
pub mod hamiltonian;
pub mod operator;
pub mod sector;

pub use chain::{Bond, ChainSpec};
pub use hamiltonian::{build_bond_hamiltonian, build_chain_hamiltonian, build_transfer_hamiltonian, spin_flip};
pub use operator::SparseOperator;
pub use sector::{enumerate_sector, Sector};
