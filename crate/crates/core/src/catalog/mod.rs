//! Named constructions with their hypotheses and predicted uniformities,
//! spot rows of the monomial table, regression fixtures, parameter scans, and a verifier that
//! checks every claim by exhaustive counting.

mod claims;
mod entries;
mod scan;
mod table1;
mod verify;

pub use claims::{all_c, subfield_c, Bound, Claim, Expect};
pub use entries::{
    entry_fixture, entry_lin_trace, entry_table1, entry_thm41, entry_thm42, entry_trace_switch, CatalogEntry,
    GoldFactor, SwitchForm, Thm41, ENTRY_NAMES,
};
pub use scan::{csv_header, grid_points, parse_grid, scan, GridAxis, ScanRow, DEFAULT_GRID_CAP};
pub use table1::{table1_prediction, RowPrediction, SKIPPED_ROWS, TABLE1_ROWS};
pub use verify::{
    parse_manifest, run_item, run_manifest, verify, CRange, CheckOutcome, Counterexample, ManifestItem, MeasuredC,
    Verdict, VerificationReport,
};
