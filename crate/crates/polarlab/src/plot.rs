//! Plot-ready series derived from earlier run outputs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::table::{fmt_f64, Table, VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    /// Sorted per-index mutual information of a polarize output.
    Staircase,
    /// Exact error and the bounds against `n`, from a decode output.
    Bounds,
}

pub const BOUND_COLUMNS: [&str; 4] = ["p_error", "gao_bound", "sen_bound", "fidelity_bound"];

/// Builds the series from the table at `input`.
pub fn plot_data(series: Series, input: &Path) -> Result<Table> {
    let src = Table::read(input)?;
    if src.rows.is_empty() {
        return Err(LabError::MissingInput(format!(
            "{} has no rows",
            input.display()
        )));
    }
    let comments = vec![
        format!("polarlab {VERSION}"),
        format!("series = {series:?}").to_lowercase(),
        format!("input = {:?}", input.display().to_string()),
    ];
    let mut out = Table::new(comments, &["series", "x", "y"]);
    match series {
        Series::Staircase => {
            let mut ys = src.floats("mutual_information")?;
            ys.sort_by(f64::total_cmp);
            for (x, y) in ys.into_iter().enumerate() {
                out.push(vec!["mutual_information".into(), x.to_string(), fmt_f64(y)]);
            }
        }
        Series::Bounds => {
            let xs = src.floats("n")?;
            for name in BOUND_COLUMNS {
                for (x, y) in xs.iter().zip(src.floats(name)?) {
                    out.push(vec![name.into(), format!("{x}"), fmt_f64(y)]);
                }
            }
        }
    }
    Ok(out)
}
