//! Sweep row format and its CSV round trip.
//!
//! One row per (λ, N) pair. Floats are printed with 17 significant digits
//! so a written file parses back to bit-identical doubles; the derivative
//! column is empty on grid endpoints where the central difference is
//! undefined.

use crate::error::{Error, Result};
use crate::model::Boundary;

/// Column order of the CSV header; `SweepRecord` fields match one to one.
pub const CSV_COLUMNS: [&str; 10] = [
    "lambda",
    "n_sites",
    "boundary",
    "energy",
    "gap",
    "string_order",
    "staggered_corr",
    "geo_ent",
    "geo_ent_per_site",
    "geo_ent_deriv",
];

/// One sweep output row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub lambda: f64,
    pub n_sites: usize,
    pub boundary: Boundary,
    /// Ground energy.
    pub energy: f64,
    /// Gap to the next eigenstate (0 inside a degenerate manifold).
    pub gap: f64,
    /// String order ⟨dressed end-to-end product⟩ on the ground state.
    pub string_order: f64,
    /// Staggered two-point correlator at half-chain separation.
    pub staggered_corr: f64,
    pub geo_ent: f64,
    pub geo_ent_per_site: f64,
    /// Central-difference dε/dλ; `None` at the endpoints of each λ grid.
    pub geo_ent_deriv: Option<f64>,
}

/// 17-significant-digit float formatting; round-trips every finite double.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_float(field: &str, line: usize) -> Result<f64> {
    field.parse::<f64>().map_err(|_| {
        Error::InvalidArgument(format!("line {line}: unreadable float {field:?}"))
    })
}

/// Serializes records to CSV text (header row first, one line per record).
/// λ must be strictly increasing within each chain-size block.
pub fn write_csv(records: &[SweepRecord]) -> Result<String> {
    let mut last: Option<(usize, f64)> = None;
    for r in records {
        if let Some((n, l)) = last {
            if n == r.n_sites && r.lambda <= l {
                return Err(Error::InvalidArgument(format!(
                    "λ must increase within the {n}-site block: {l} then {}",
                    r.lambda
                )));
            }
        }
        last = Some((r.n_sites, r.lambda));
    }
    let mut out = String::new();
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for r in records {
        let deriv = r.geo_ent_deriv.map(format_float).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            format_float(r.lambda),
            r.n_sites,
            r.boundary,
            format_float(r.energy),
            format_float(r.gap),
            format_float(r.string_order),
            format_float(r.staggered_corr),
            format_float(r.geo_ent),
            format_float(r.geo_ent_per_site),
            deriv,
        ));
    }
    Ok(out)
}

/// Parses CSV text produced by [`write_csv`]; the header must match the
/// column list exactly.
pub fn read_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_COLUMNS.join(",") => {}
        Some((_, header)) => {
            return Err(Error::InvalidArgument(format!(
                "unexpected CSV header {header:?}"
            )))
        }
        None => return Err(Error::InvalidArgument("empty CSV input".into())),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != CSV_COLUMNS.len() {
            return Err(Error::InvalidArgument(format!(
                "line {}: expected {} fields, found {}",
                i + 1,
                CSV_COLUMNS.len(),
                fields.len()
            )));
        }
        let boundary = match fields[2] {
            "open" => Boundary::Open,
            "periodic" => Boundary::Periodic,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "line {}: unknown boundary {other:?}",
                    i + 1
                )))
            }
        };
        records.push(SweepRecord {
            lambda: parse_float(fields[0], i + 1)?,
            n_sites: fields[1].parse().map_err(|_| {
                Error::InvalidArgument(format!("line {}: unreadable size {:?}", i + 1, fields[1]))
            })?,
            boundary,
            energy: parse_float(fields[3], i + 1)?,
            gap: parse_float(fields[4], i + 1)?,
            string_order: parse_float(fields[5], i + 1)?,
            staggered_corr: parse_float(fields[6], i + 1)?,
            geo_ent: parse_float(fields[7], i + 1)?,
            geo_ent_per_site: parse_float(fields[8], i + 1)?,
            geo_ent_deriv: if fields[9].is_empty() {
                None
            } else {
                Some(parse_float(fields[9], i + 1)?)
            },
        });
    }
    Ok(records)
}

/// Numeric view of one column; `None` when the value is absent for this
/// record. Unknown names are an error so misspelled plot requests fail
/// loudly.
pub fn column_value(record: &SweepRecord, column: &str) -> Result<Option<f64>> {
    Ok(match column {
        "lambda" => Some(record.lambda),
        "n_sites" => Some(record.n_sites as f64),
        "energy" => Some(record.energy),
        "gap" => Some(record.gap),
        "string_order" => Some(record.string_order),
        "staggered_corr" => Some(record.staggered_corr),
        "geo_ent" => Some(record.geo_ent),
        "geo_ent_per_site" => Some(record.geo_ent_per_site),
        "geo_ent_deriv" => record.geo_ent_deriv,
        other => {
            return Err(Error::InvalidArgument(format!(
                "no column named {other:?}; valid columns: {}",
                CSV_COLUMNS.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<SweepRecord> {
        vec![
            SweepRecord {
                lambda: 0.0,
                n_sites: 8,
                boundary: Boundary::Periodic,
                energy: -8.0,
                gap: 2.0,
                string_order: 1.0,
                staggered_corr: 0.0,
                geo_ent: 4.0,
                geo_ent_per_site: 0.5,
                geo_ent_deriv: None,
            },
            SweepRecord {
                lambda: 1.0 / 3.0,
                n_sites: 8,
                boundary: Boundary::Periodic,
                energy: -8.123456789012345,
                gap: 4.0 / 3.0,
                string_order: 0.987654321098765,
                staggered_corr: -0.111111111111111,
                geo_ent: 3.9,
                geo_ent_per_site: 0.4875,
                geo_ent_deriv: Some(-0.30000000000001),
            },
        ]
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let records = sample();
        let text = write_csv(&records).unwrap();
        let back = read_csv(&text).unwrap();
        assert_eq!(records.len(), back.len());
        for (a, b) in records.iter().zip(&back) {
            assert_eq!(a.lambda.to_bits(), b.lambda.to_bits());
            assert_eq!(a.energy.to_bits(), b.energy.to_bits());
            assert_eq!(a.string_order.to_bits(), b.string_order.to_bits());
            assert_eq!(
                a.geo_ent_deriv.map(f64::to_bits),
                b.geo_ent_deriv.map(f64::to_bits)
            );
            assert_eq!(a.boundary, b.boundary);
        }
        // A second write of the parsed records reproduces the same bytes.
        assert_eq!(text, write_csv(&back).unwrap());
    }

    #[test]
    fn header_and_field_errors_are_caught() {
        assert!(read_csv("").is_err());
        assert!(read_csv("a,b,c\n").is_err());
        let good = write_csv(&sample()).unwrap();
        let mangled = good.replace("periodic", "ring");
        assert!(read_csv(&mangled).is_err());
    }

    #[test]
    fn lambda_order_is_enforced_per_block() {
        let mut records = sample();
        records.swap(0, 1);
        assert!(write_csv(&records).is_err());
        // Different sizes may restart the λ ramp.
        let mut two_blocks = sample();
        two_blocks[1].n_sites = 10;
        two_blocks[1].lambda = 0.0;
        assert!(write_csv(&two_blocks).is_ok());
    }

    #[test]
    fn column_lookup_matches_fields() {
        let r = &sample()[1];
        assert_eq!(column_value(r, "lambda").unwrap(), Some(r.lambda));
        assert_eq!(column_value(r, "geo_ent_deriv").unwrap(), r.geo_ent_deriv);
        assert_eq!(column_value(&sample()[0], "geo_ent_deriv").unwrap(), None);
        assert!(column_value(r, "epsilon").is_err());
    }
}
