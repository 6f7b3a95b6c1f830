//! Fock-space construction of the ensemble: two-body GUE draws embedded in
//! the m-boson space, SU(r) blocks from Casimir eigenspaces, an exact Wick
//! oracle for ensemble averages, and a seeded Monte Carlo estimator.

pub mod blocks;
pub mod ensemble;
pub mod exact;
pub mod hamiltonian;
pub mod pairs;
pub mod space;

pub use blocks::{casimir_blocks, Block, BlockSummary};
pub use ensemble::{run_ensemble, BlockEstimate, McEstimate, McRun, PairEstimate};
pub use exact::{exact_moments, ExactMoments};
pub use hamiltonian::{embed_h, pair_matrix, sample_gue, sample_h2, Embedder, Hermitian, TwoBody};
pub use pairs::{PairBasis, PairState};
pub use space::{boson_fock_dim, fock_cap, FockSpace, DEFAULT_FOCK_CAP};
