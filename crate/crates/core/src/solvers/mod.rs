//! Classical reference solvers: exhaustive enumeration as the exactness
//! oracle and simulated annealing as the benchmarked heuristic.

mod anneal;
mod brute;
mod fields;
mod success;

pub use anneal::{acceptance_probability, simulated_annealing, AnnealSchedule, Interpolation, SolverRun};
pub use brute::{brute_force, mask_to_assignment, BruteForceResult, MAX_BRUTE_FORCE_VARS};
pub use fields::LocalFields;
pub use success::{
    estimate_success_probability, success_tolerance, write_batch_csv, RunRecord, SuccessStats,
};
