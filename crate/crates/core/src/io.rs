//! CSV ingestion and report output.
//!
//! Two input layouts are accepted, both comma-delimited UTF-8:
//!
//! * aggregate: `level,total,successes[,order]`, one row per level, expanded
//!   to 0/1 observations;
//! * long: `level,value[,order]`, one row per observation, rows of a level
//!   contiguous.
//!
//! A first row whose numeric column does not parse is taken as a header.
//! Without an order column, levels keep file order; numeric labels must then be
//! strictly increasing.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::monotone_fit::{log_likelihood, MonotoneEstimate};
use crate::simulation::SimulationReport;
use crate::table::{Level, ObservationTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Aggregate,
    Long,
}

struct Row {
    line: usize,
    label: String,
    fields: Vec<String>,
    order: Option<f64>,
}

fn read_rows<R: Read>(input: R, format: InputFormat) -> Result<Vec<Row>> {
    let (value_columns, order_column) = match format {
        InputFormat::Aggregate => (2, 3),
        InputFormat::Long => (1, 2),
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Format {
            line: e.position().map_or(i + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if rows.is_empty() && record.get(1).is_some_and(|f| f.parse::<f64>().is_err()) {
            // header
            continue;
        }
        let width = record.len();
        if width != 1 + value_columns && width != 2 + value_columns {
            return Err(Error::Format {
                line,
                message: format!(
                    "expected {} or {} fields, found {width}",
                    1 + value_columns,
                    2 + value_columns
                ),
            });
        }
        let order =
            match record.get(order_column) {
                Some(f) => Some(f.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(
                    || Error::Format {
                        line,
                        message: format!("order value {f:?} is not a number"),
                    },
                )?),
                None => None,
            };
        rows.push(Row {
            line,
            label: record[0].to_string(),
            fields: record
                .iter()
                .skip(1)
                .take(value_columns)
                .map(str::to_string)
                .collect(),
            order,
        });
    }
    if rows.is_empty() {
        return Err(Error::Structural("input has no data rows".into()));
    }
    if rows.iter().any(|r| r.order.is_some()) && rows.iter().any(|r| r.order.is_none()) {
        let line = rows.iter().find(|r| r.order.is_none()).unwrap().line;
        return Err(Error::Format {
            line,
            message: "order column present on some rows only".into(),
        });
    }
    Ok(rows)
}

fn parse_count(field: &str, line: usize, what: &str) -> Result<usize> {
    field.parse::<usize>().map_err(|_| Error::Validation {
        line,
        message: format!("{what} {field:?} is not a non-negative integer"),
    })
}

/// Orders grouped levels. `groups` holds (first line, label, order, values) in
/// file order of first appearance.
fn order_levels(groups: Vec<(usize, String, Option<f64>, Vec<f64>)>) -> Result<ObservationTable> {
    let explicit = groups.iter().all(|g| g.2.is_some());
    let mut groups = groups;
    if explicit {
        groups.sort_by(|a, b| a.2.unwrap().total_cmp(&b.2.unwrap()));
        for w in groups.windows(2) {
            if w[0].2 == w[1].2 {
                return Err(Error::Format {
                    line: w[1].0,
                    message: format!("levels {:?} and {:?} share an order value", w[0].1, w[1].1),
                });
            }
        }
    } else {
        let numeric: Option<Vec<f64>> = groups.iter().map(|g| g.1.parse::<f64>().ok()).collect();
        if let Some(numeric) = numeric {
            for (i, w) in numeric.windows(2).enumerate() {
                if w[0] >= w[1] {
                    return Err(Error::Format {
                        line: groups[i + 1].0,
                        message: format!(
                            "level {:?} out of order after {:?}",
                            groups[i + 1].1,
                            groups[i].1
                        ),
                    });
                }
            }
        }
    }
    ObservationTable::new(
        groups
            .into_iter()
            .map(|(_, label, _, values)| Level {
                label: Some(label),
                values,
            })
            .collect(),
    )
}

/// Reads an observation table from CSV.
pub fn parse_table<R: Read>(input: R, format: InputFormat) -> Result<ObservationTable> {
    let rows = read_rows(input, format)?;
    let mut groups: Vec<(usize, String, Option<f64>, Vec<f64>)> = Vec::new();
    match format {
        InputFormat::Aggregate => {
            let mut seen = HashMap::new();
            for row in rows {
                let total = parse_count(&row.fields[0], row.line, "total")?;
                let ones = parse_count(&row.fields[1], row.line, "successes")?;
                if total == 0 {
                    return Err(Error::Validation {
                        line: row.line,
                        message: "total must be positive".into(),
                    });
                }
                if ones > total {
                    return Err(Error::Validation {
                        line: row.line,
                        message: format!("successes {ones} exceed total {total}"),
                    });
                }
                if seen.insert(row.label.clone(), row.line).is_some() {
                    return Err(Error::Format {
                        line: row.line,
                        message: format!("duplicate level {:?}", row.label),
                    });
                }
                let mut values = vec![1.0; ones];
                values.resize(total, 0.0);
                groups.push((row.line, row.label, row.order, values));
            }
        }
        InputFormat::Long => {
            let mut index: HashMap<String, usize> = HashMap::new();
            for row in rows {
                let value = row.fields[0]
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Validation {
                        line: row.line,
                        message: format!("value {:?} is not a finite number", row.fields[0]),
                    })?;
                match index.get(&row.label) {
                    Some(&g) => {
                        let contiguous = g + 1 == groups.len();
                        if row.order.is_none() && !contiguous {
                            return Err(Error::Format {
                                line: row.line,
                                message: format!(
                                    "level {:?} reappears after other levels",
                                    row.label
                                ),
                            });
                        }
                        if row.order != groups[g].2 {
                            return Err(Error::Format {
                                line: row.line,
                                message: format!(
                                    "level {:?} has inconsistent order values",
                                    row.label
                                ),
                            });
                        }
                        groups[g].3.push(value);
                    }
                    None => {
                        index.insert(row.label.clone(), groups.len());
                        groups.push((row.line, row.label, row.order, vec![value]));
                    }
                }
            }
        }
    }
    order_levels(groups)
}

/// Writes `label,value` rows, one per observation.
pub fn write_long_csv<W: Write>(table: &ObservationTable, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["level", "value"]).map_err(csv_error)?;
    for (i, level) in table.levels().iter().enumerate() {
        let label = table.label(i);
        for v in &level.values {
            writer
                .write_record([label.as_str(), &v.to_string()])
                .map_err(csv_error)?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Writes `level,total,successes` rows for a 0/1 table.
pub fn write_aggregate_csv<W: Write>(table: &ObservationTable, out: W) -> Result<()> {
    if !table.is_binary() {
        return Err(Error::Structural(
            "aggregate form needs 0/1 observations".into(),
        ));
    }
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record(["level", "total", "successes"])
        .map_err(csv_error)?;
    for (i, level) in table.levels().iter().enumerate() {
        writer
            .write_record([
                table.label(i),
                level.count().to_string(),
                (level.sum() as u64).to_string(),
            ])
            .map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// One fitted block, with 1-based level positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockRow {
    pub first_level: usize,
    pub last_level: usize,
    pub first_label: String,
    pub last_label: String,
    pub total: u64,
    pub sum: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub direction: &'static str,
    pub levels: usize,
    pub blocks: Vec<BlockRow>,
    pub phi: Vec<f64>,
    pub total: usize,
    pub sum: f64,
    pub mean: f64,
    pub family: Option<String>,
    pub loglik: Option<f64>,
}

/// Summarizes `estimate` against the table it was fitted on, with the
/// log-likelihood under `family` when given.
pub fn fit_report(
    estimate: &MonotoneEstimate,
    table: &ObservationTable,
    family: Option<&Family>,
) -> Result<FitReport> {
    estimate.check_matches(table)?;
    let phi = estimate.phi();
    let loglik = match family {
        Some(f) => {
            f.validate_observable(table)?;
            Some(log_likelihood(f, &phi, table)?)
        }
        None => None,
    };
    let blocks = estimate
        .blocks()
        .iter()
        .map(|b| BlockRow {
            first_level: b.start + 1,
            last_level: b.end + 1,
            first_label: table.label(b.start),
            last_label: table.label(b.end),
            total: b.count,
            sum: b.sum,
            tau: b.value,
        })
        .collect();
    Ok(FitReport {
        direction: estimate.direction().as_str(),
        levels: table.len(),
        blocks,
        phi,
        total: table.total_count(),
        sum: table.total_sum(),
        mean: table.total_sum() / table.total_count() as f64,
        family: family.map(|f| f.to_string()),
        loglik,
    })
}

fn exact(v: f64) -> String {
    format!("{v:.16e}")
}

impl FitReport {
    /// Tab-separated, line-oriented text with a fixed field order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "direction\t{}", self.direction);
        let _ = writeln!(s, "levels\t{}", self.levels);
        let _ = writeln!(s, "blocks\t{}", self.blocks.len());
        let _ = writeln!(s, "block\tfirst\tlast\ttotal\tsum\ttau\ttau_approx");
        for (r, b) in self.blocks.iter().enumerate() {
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{:.4}",
                r + 1,
                b.first_label,
                b.last_label,
                b.total,
                b.sum,
                exact(b.tau),
                b.tau
            );
        }
        let first = self.blocks.first().map_or("", |b| &b.first_label);
        let last = self.blocks.last().map_or("", |b| &b.last_label);
        let _ = writeln!(
            s,
            "overall\t{first}\t{last}\t{}\t{}\t{}\t{:.4}",
            self.total,
            self.sum,
            exact(self.mean),
            self.mean
        );
        if let (Some(family), Some(ll)) = (&self.family, self.loglik) {
            let _ = writeln!(s, "loglik\t{family}\t{}\t{ll:.4}", exact(ll));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `label,phi` per level.
pub fn phi_csv(estimate: &MonotoneEstimate, table: &ObservationTable) -> Result<String> {
    estimate.check_matches(table)?;
    let mut s = String::from("level,phi\n");
    for (i, phi) in estimate.phi().iter().enumerate() {
        let _ = writeln!(s, "{},{}", table.label(i), phi);
    }
    Ok(s)
}

/// Two series per level for plotting: observed level mean and fitted value.
pub fn plot_data_csv(estimate: &MonotoneEstimate, table: &ObservationTable) -> Result<String> {
    estimate.check_matches(table)?;
    let mut s = String::from("level,observed_mean,fitted_phi\n");
    for (i, (level, phi)) in table.levels().iter().zip(estimate.phi()).enumerate() {
        let _ = writeln!(s, "{},{},{}", table.label(i), level.mean(), phi);
    }
    Ok(s)
}

/// Summary of a simulation study as tab-separated lines.
pub fn simulation_text(report: &SimulationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "statistic\t{}", report.statistic.as_str());
    let _ = writeln!(s, "family\t{}", report.family);
    let _ = writeln!(s, "replicates\t{}", report.replicate_count);
    let _ = writeln!(s, "seed\t{}", report.master_seed);
    let _ = writeln!(
        s,
        "observed\t{}\t{:.4}",
        exact(report.observed),
        report.observed
    );
    let _ = writeln!(
        s,
        "quantile_rank\t{}\t{:.4}",
        exact(report.quantile_rank),
        report.quantile_rank
    );
    let _ = writeln!(s, "count_below\t{}", report.count_below);
    let _ = writeln!(s, "count_equal\t{}", report.count_equal);
    let _ = writeln!(s, "count_at_or_above\t{}", report.count_at_or_above);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone_fit::fit_nondecreasing;

    fn agg(s: &str) -> Result<ObservationTable> {
        parse_table(s.as_bytes(), InputFormat::Aggregate)
    }

    fn long(s: &str) -> Result<ObservationTable> {
        parse_table(s.as_bytes(), InputFormat::Long)
    }

    #[test]
    fn aggregate_row_expands() {
        let t = agg("540,11,4").unwrap();
        assert_eq!(t.counts(), vec![11]);
        assert_eq!(t.level(0).values.iter().filter(|&&v| v == 1.0).count(), 4);
        assert_eq!(t.label(0), "540");

        let t = agg("x,1,0\n").unwrap();
        assert_eq!(t.level(0).values, vec![0.0]);
    }

    #[test]
    fn long_rows_group_by_level() {
        let t = long("a,0.5\na,1.5\nb,2.0").unwrap();
        assert_eq!(t.counts(), vec![2, 1]);
        assert_eq!(t.level(0).values, vec![0.5, 1.5]);
        assert_eq!(t.label(1), "b");
    }

    #[test]
    fn header_detected() {
        let t = agg("score,total,no_show\n1,2,1\n2,3,0\n").unwrap();
        assert_eq!(t.counts(), vec![2, 3]);
        let t = long("level,value\nlow,1\n").unwrap();
        assert_eq!(t.counts(), vec![1]);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            agg("540,3,4"),
            Err(Error::Validation { line: 1, .. })
        ));
        assert!(matches!(agg("540,0,0"), Err(Error::Validation { .. })));
        assert!(matches!(agg("540,2.5,1"), Err(Error::Validation { .. })));
        assert!(matches!(
            long("a,1\na,x"),
            Err(Error::Validation { line: 2, .. })
        ));
        assert!(matches!(agg(""), Err(Error::Structural(_))));
        assert!(matches!(
            agg("level,total,successes\n"),
            Err(Error::Structural(_))
        ));
        assert!(matches!(agg("1,2"), Err(Error::Format { .. })));
    }

    #[test]
    fn ordering_errors() {
        assert!(matches!(
            agg("a,1,0\nb,1,0\na,1,1"),
            Err(Error::Format { line: 3, .. })
        ));
        assert!(matches!(
            agg("20,1,0\n10,1,0"),
            Err(Error::Format { line: 2, .. })
        ));
        assert!(matches!(
            long("a,1\nb,1\na,2"),
            Err(Error::Format { line: 3, .. })
        ));
        assert!(matches!(long("2,1\n1,1"), Err(Error::Format { .. })));
        // non-numeric labels keep file order
        assert_eq!(agg("b,1,0\na,1,1").unwrap().label(0), "b");
    }

    #[test]
    fn order_column_sorts_levels() {
        let t = agg("hi,2,2,3\nlo,2,0,1\nmid,2,1,2").unwrap();
        assert_eq!(t.label(0), "lo");
        assert_eq!(t.label(2), "hi");
        let t = long("b,1,2\na,5,1\nb,2,2").unwrap();
        assert_eq!(t.label(0), "a");
        assert_eq!(t.level(1).values, vec![1.0, 2.0]);
        assert!(matches!(agg("a,1,0,1\nb,1,0,1"), Err(Error::Format { .. })));
        assert!(matches!(agg("a,1,0,1\nb,1,0"), Err(Error::Format { .. })));
        assert!(matches!(long("a,1,1\na,2,2"), Err(Error::Format { .. })));
    }

    #[test]
    fn long_csv_round_trip() {
        let t = long("a,0.1\na,1e-300\nb,3\nc,-2.5").unwrap();
        let mut buf = Vec::new();
        write_long_csv(&t, &mut buf).unwrap();
        assert_eq!(long(std::str::from_utf8(&buf).unwrap()).unwrap(), t);
    }

    #[test]
    fn aggregate_writer_needs_binary() {
        let t = long("a,0.5").unwrap();
        assert!(write_aggregate_csv(&t, Vec::new()).is_err());
    }

    #[test]
    fn single_level_report() {
        let t = agg("x,3,1").unwrap();
        let fit = fit_nondecreasing(&t).unwrap();
        let r = fit_report(&fit, &t, Some(&Family::Bernoulli)).unwrap();
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.blocks[0].tau, 1.0 / 3.0);
        let text = r.to_text();
        assert!(
            text.contains("1\tx\tx\t3\t1\t3.3333333333333331e-1\t0.3333"),
            "{text}"
        );
        assert!(text.contains("loglik\tbernoulli\t"));
    }

    #[test]
    fn report_rejects_mismatched_table() {
        let t = agg("x,3,1\ny,2,2").unwrap();
        let fit = fit_nondecreasing(&t).unwrap();
        let other = agg("x,3,1").unwrap();
        assert!(fit_report(&fit, &other, None).is_err());
        assert!(plot_data_csv(&fit, &other).is_err());
    }
}
