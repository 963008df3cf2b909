//! Bundled no-show counts by SAT-R score (35 levels, 152 students, 26 no-shows).

use crate::io::{parse_table, InputFormat};
use crate::table::ObservationTable;

/// The raw CSV, as `sat_r,total,no_show` rows.
pub const SAT_R_CSV: &str = include_str!("../data/sat_r.csv");

/// The bundled table as 0/1 observations (1 = no-show), ordered by score.
pub fn sat_r() -> ObservationTable {
    parse_table(SAT_R_CSV.as_bytes(), InputFormat::Aggregate).expect("bundled dataset parses")
}
