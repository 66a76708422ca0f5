//! Knot determinants, double-branched-cover data and unknotting-number / Alexander-neighbor
//! obstructions computed from DT codes with exact arithmetic.

pub mod codec;
pub mod diagram;
pub mod goeritz;
pub mod laurent;
pub mod numtheory;
pub mod obstruct;

pub use codec::{flip_neighbors, ingest_table, parse_dt, serialize_dt, DtCode, KnotRecord, UnknottingStatus};
pub use diagram::{checkerboard, realize, shadow_with_flip, Checkerboard, PlanarDiagram};
pub use goeritz::{goeritz_matrix, knot_determinant, linking_diagonal, smith_normal_form, GoeritzMatrix};
pub use laurent::{LaurentPoly, NeighborCertificate};
pub use obstruct::{
    obstruct_u1_by_determinant, obstruct_u1_by_lickorish, run_survey, screen_can, Engine, Evidence,
    ObstructionReport, SurveyOptions, SurveyReport, Verdict,
};
