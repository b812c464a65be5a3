//! Numerical reduction of boundary-driven Lindblad dynamics near the
//! strong-dissipation limit: projected generators on the bulk factor, their
//! oscillation-averaged form, steady-state expansions in inverse coupling,
//! and trace-norm/mixing-time comparisons between the full and reduced
//! semigroups.
//!
//! The building blocks are dense complex operators and superoperators in a
//! fixed column-stacking vectorization (`X -> A X B` has matrix
//! `B^T (x) A`).  Everything is a pure function of its inputs; multistart
//! optimizations are deterministic given a seed.

pub mod davies;
pub mod dynamics;
pub mod error;
pub mod expm;
pub mod lindblad;
pub mod models;
pub mod op;
pub mod optim;
pub mod sop;
pub mod space;
pub mod steady;
pub mod verify;
pub mod zeno;

pub use error::{Error, Result};
pub use lindblad::{
    analyze_spectrum, build_dissipator, choi_matrix, cptp_check, gks_conditional_cp_test,
    CptpReport, GksReport, LindbladSpec, SpectralSummary,
};
pub use op::{Operator, CMat, CVec};
pub use optim::{norm_1to1_witness, tv_sup_witness, OptimCfg};
pub use sop::SuperOperator;
pub use space::{SpaceTag, Subsystem};
pub use zeno::{
    build_composite, build_projectors, extract_dp_lindblad_form, projected_dissipator,
    projected_hamiltonian, second_order_corrector, CompositeModel, CompositeOps, DpLindbladForm,
    Projectors, ZenoObjects,
};
pub use davies::{bohr_decompose, sharp_lindblad_form, sharp_operator, sharp_superop, BohrDecomposition};
pub use steady::{
    boundary_reduced_state_test, build_subspaces, decompose, exact_steady_state, solve_hierarchy,
    BoundaryReducedReport, ExpansionResult, SubspaceBasis,
};
pub use dynamics::{
    mixing_ratio_scan, mixing_time, propagate, theorem_gap_scan, GapSeries, MixingCfg,
    MixingRatioScan, MixingReport, ScanCfg, TheoremTag, TrajectoryGapReport,
};
pub use models::{example_model, example_model_hb_sigma3, example_t, random_model};
