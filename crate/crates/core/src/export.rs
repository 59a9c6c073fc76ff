//! Plain-text exports.
//!
//! Grid CSV: header `q,p,w`, one row per node in q-major order, every float
//! written with 17 significant digits so doubles round-trip exactly.

use std::io::{self, Write};

use crate::analysis::{ThetaScanRow, WignerGrid};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_grid_csv<W: Write>(grid: &WignerGrid, mut out: W) -> io::Result<()> {
    writeln!(out, "q,p,w")?;
    for i in 0..grid.grid.nq {
        let q = fmt_f64(grid.grid.q(i));
        for j in 0..grid.grid.np {
            writeln!(
                out,
                "{},{},{}",
                q,
                fmt_f64(grid.grid.p(j)),
                fmt_f64(grid.value(i, j))
            )?;
        }
    }
    Ok(())
}

pub fn write_scan_csv<W: Write>(rows: &[ThetaScanRow], mut out: W) -> io::Result<()> {
    writeln!(out, "theta,w0,negativity_volume")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{}",
            fmt_f64(r.theta),
            fmt_f64(r.w0),
            fmt_f64(r.negativity_volume)
        )?;
    }
    Ok(())
}

/// Parses a grid CSV back into `(q, p, w)` triples.
pub fn read_grid_csv(text: &str) -> Result<Vec<(f64, f64, f64)>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some("q,p,w") => {}
        other => return Err(format!("bad header {other:?}")),
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(format!("bad row {line:?}"));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
            Ok((parse(cols[0])?, parse(cols[1])?, parse(cols[2])?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{sample_grid, GridSpec, Source};
    use crate::{StateFamily, StateSpec, ThermalParams};
    use proptest::prelude::*;

    #[test]
    fn grid_csv_layout() {
        let spec = StateSpec::new(
            StateFamily::PhotonAdded,
            1,
            ThermalParams::from_theta(0.2).unwrap(),
        )
        .unwrap();
        let grid = sample_grid(&spec, GridSpec::square(1.0, 3), Source::ClosedForm).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows = read_grid_csv(&text).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!((rows[0].0, rows[0].1), (-1.0, -1.0));
        assert_eq!((rows[1].0, rows[1].1), (-1.0, 0.0));
        assert_eq!((rows[3].0, rows[3].1), (0.0, -1.0));
        for (k, row) in rows.iter().enumerate() {
            assert_eq!(row.2.to_bits(), grid.values[k].to_bits());
        }
    }

    #[test]
    fn grid_json_round_trips() {
        let spec = StateSpec::new(
            StateFamily::ThermoNumber,
            2,
            ThermalParams::from_temperature(1.0, 0.7).unwrap(),
        )
        .unwrap();
        let grid = sample_grid(&spec, GridSpec::square(2.5, 7), Source::ClosedForm).unwrap();
        let text = serde_json::to_string(&grid).unwrap();
        let back: WignerGrid = serde_json::from_str(&text).unwrap();
        assert_eq!(back, grid);
    }

    proptest! {
        #[test]
        fn float_format_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
