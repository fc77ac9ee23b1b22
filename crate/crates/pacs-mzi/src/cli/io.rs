//! Output plumbing: the 12-significant-digit number format shared by every
//! CSV emitter, table/grid serialization, and the per-run manifest.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::sweep::{SweepRow, SweepTable};
use crate::wigner::WignerGrid;
use crate::Result;

/// Shortest decimal representation with 12 significant digits, `%g`-style:
/// positional notation while the exponent fits, scientific otherwise,
/// trailing zeros trimmed. Implemented as pure string surgery on the
/// exponential rendering so no further float rounding can creep in.
pub fn fmt12(x: f64) -> String {
    debug_assert!(x.is_finite(), "fmt12 expects finite input");
    if x == 0.0 {
        return "0".to_string();
    }
    let neg = x < 0.0;
    let exp_form = format!("{:.11e}", x.abs()); // d.ddddddddddde±k
    let (mantissa, exp_str) = exp_form.split_once('e').expect("LowerExp format");
    let exp: i32 = exp_str.parse().expect("exponent is an integer");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 12);

    let body = if (-4..12).contains(&exp) {
        if exp >= 0 {
            let split = (exp + 1) as usize;
            let int_part = &digits[..split];
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            let frac = format!("{zeros}{digits}");
            format!("0.{}", frac.trim_end_matches('0'))
        }
    } else {
        let trimmed = digits.trim_end_matches('0');
        let (head, tail) = trimmed.split_at(1);
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// CSV cell: finite values through [`fmt12`], non-finite as an empty cell
/// (the row's status column says why).
pub fn fmt_cell(x: f64) -> String {
    if x.is_finite() {
        fmt12(x)
    } else {
        String::new()
    }
}

fn row_cells(row: &SweepRow) -> [String; 7] {
    match row.moments {
        Some(ms) => [
            fmt_cell(ms.mean_nd),
            fmt_cell(ms.var_nd),
            fmt_cell(ms.slope),
            fmt_cell(ms.n_total),
            fmt_cell(ms.delta_phi),
            fmt_cell(ms.s_sql),
            row.status_name().to_string(),
        ],
        None => [
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            row.status_name().to_string(),
        ],
    }
}

/// Single-axis sweep as CSV: axis column, full moment set, status, path.
/// When the sweep runs over the total photon number the realized value is
/// re-stated under `n_total_realized` to keep header names unique.
pub fn curve_csv(table: &SweepTable) -> String {
    let axis = table.axis1.var.name();
    let n_total_col = if axis == "n_total" {
        "n_total_realized"
    } else {
        "n_total"
    };
    let mut out = String::new();
    out.push_str(&format!(
        "{axis},mean_nd,var_nd,slope,{n_total_col},delta_phi,s_sql,status,path\n"
    ));
    for row in &table.rows {
        let cells = row_cells(row);
        out.push_str(&fmt12(row.v1));
        for c in &cells {
            out.push(',');
            out.push_str(c);
        }
        out.push(',');
        out.push_str(row.path.name());
        out.push('\n');
    }
    out
}

/// Single-axis sweep as a JSON array of row objects.
pub fn curve_json(table: &SweepTable) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            json!({
                table.axis1.var.name(): row.v1,
                "moments": row.moments,
                "status": row.status_name(),
                "path": row.path.name(),
                "failure": row.failure,
            })
        })
        .collect();
    json!(rows)
}

/// Two-axis sweep: `s_sql` value matrix (axis 1 rows, axis 2 columns, empty
/// cells for non-finite values) plus the status matrix and axis columns.
pub struct GridFiles {
    pub values: String,
    pub status: String,
    pub axis1: String,
    pub axis2: String,
}

pub fn grid_csv(table: &SweepTable) -> GridFiles {
    let axis2 = table.axis2.expect("grid serialization needs two axes");
    let n2 = axis2.points;
    let mut values = String::new();
    let mut status = String::new();
    for (i, row) in table.rows.iter().enumerate() {
        let sep = if i % n2 == 0 {
            if i > 0 {
                values.push('\n');
                status.push('\n');
            }
            ""
        } else {
            ","
        };
        values.push_str(sep);
        status.push_str(sep);
        values.push_str(&row.moments.map_or(String::new(), |m| fmt_cell(m.s_sql)));
        status.push_str(row.status_name());
    }
    values.push('\n');
    status.push('\n');

    let axis_col = |axis: crate::sweep::Axis| {
        let mut s = format!("{}\n", axis.var.name());
        for v in axis.values() {
            s.push_str(&fmt12(v));
            s.push('\n');
        }
        s
    };
    GridFiles {
        values,
        status,
        axis1: axis_col(table.axis1),
        axis2: axis_col(axis2),
    }
}

pub fn grid_json(table: &SweepTable) -> serde_json::Value {
    let axis2 = table.axis2.expect("grid serialization needs two axes");
    let n2 = axis2.points;
    let s_rows: Vec<Vec<Option<f64>>> = table
        .rows
        .chunks(n2)
        .map(|chunk| {
            chunk
                .iter()
                .map(|r| r.moments.map(|m| m.s_sql).filter(|s| s.is_finite()))
                .collect()
        })
        .collect();
    let status_rows: Vec<Vec<&str>> = table
        .rows
        .chunks(n2)
        .map(|chunk| chunk.iter().map(|r| r.status_name()).collect())
        .collect();
    json!({
        table.axis1.var.name(): table.axis1.values(),
        axis2.var.name(): axis2.values(),
        "s_sql": s_rows,
        "status": status_rows,
        "path": table.path.name(),
    })
}

/// Wigner grid: value matrix (x rows, p columns) and the two axis columns.
pub struct WignerFiles {
    pub values: String,
    pub x_axis: String,
    pub p_axis: String,
}

pub fn wigner_csv(grid: &WignerGrid) -> WignerFiles {
    let np = grid.p_axis().len();
    let mut values = String::new();
    for (ix, _) in grid.x_axis().iter().enumerate() {
        for ip in 0..np {
            if ip > 0 {
                values.push(',');
            }
            values.push_str(&fmt_cell(grid.value_at(ix, ip)));
        }
        values.push('\n');
    }
    let col = |name: &str, axis: &[f64]| {
        let mut s = format!("{name}\n");
        for &v in axis {
            s.push_str(&fmt12(v));
            s.push('\n');
        }
        s
    };
    WignerFiles {
        values,
        x_axis: col("x", grid.x_axis()),
        p_axis: col("p", grid.p_axis()),
    }
}

pub fn wigner_json(grid: &WignerGrid) -> serde_json::Value {
    let np = grid.p_axis().len();
    let rows: Vec<&[f64]> = grid.values().chunks(np).collect();
    json!({
        "x": grid.x_axis(),
        "p": grid.p_axis(),
        "w": rows,
    })
}

/// Record of one CLI invocation, written as `run_manifest.json` next to the
/// data it produced — exactly one per output directory.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub parameters: BTreeMap<String, String>,
    pub tolerances: BTreeMap<String, f64>,
    pub threads: usize,
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
    pub duration_seconds: f64,
    #[serde(skip)]
    started: Instant,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        RunManifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            threads: rayon::current_num_threads(),
            outputs: Vec::new(),
            notes: Vec::new(),
            duration_seconds: 0.0,
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn tolerance(&mut self, key: &str, value: f64) -> &mut Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    /// Writes a data file into the run directory and records it.
    pub fn write_output(&mut self, dir: &Path, name: &str, content: &str) -> Result<()> {
        std::fs::write(dir.join(name), content)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_output_json(
        &mut self,
        dir: &Path,
        name: &str,
        value: &impl Serialize,
    ) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_output(dir, name, &text)
    }

    /// Finalizes the manifest itself (sorted outputs, elapsed time).
    pub fn finish(mut self, dir: &Path) -> Result<()> {
        self.outputs.sort();
        self.duration_seconds = self.started.elapsed().as_secs_f64();
        let mut text = serde_json::to_string_pretty(&self)?;
        text.push('\n');
        std::fs::write(dir.join("run_manifest.json"), text)?;
        Ok(())
    }
}

/// Creates the output directory (and parents) if needed.
pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt12_positional_range() {
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(-0.0), "0");
        assert_eq!(fmt12(2.25), "2.25");
        assert_eq!(fmt12(-3.0), "-3");
        assert_eq!(fmt12(0.1), "0.1");
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(12345.6789), "12345.6789");
        assert_eq!(fmt12(1e11), "100000000000");
        assert_eq!(fmt12(0.0001), "0.0001");
    }

    #[test]
    fn fmt12_scientific_range() {
        assert_eq!(fmt12(1e12), "1e12");
        assert_eq!(fmt12(2.5e-5), "2.5e-5");
        assert_eq!(fmt12(-1.25e-7), "-1.25e-7");
        assert_eq!(fmt12(6.02214076e23), "6.02214076e23");
    }

    #[test]
    fn fmt12_rounds_at_twelve_digits() {
        assert_eq!(fmt12(0.9999999999999), "1");
        assert_eq!(fmt12(3.3), "3.3"); // not 3.30000000000000026…
        assert_eq!(fmt12(1.0000000000004), "1");
        assert_eq!(fmt12(1.00000000001), "1.00000000001");
    }

    #[test]
    fn fmt_cell_blanks_non_finite() {
        assert_eq!(fmt_cell(f64::INFINITY), "");
        assert_eq!(fmt_cell(f64::NAN), "");
        assert_eq!(fmt_cell(1.5), "1.5");
    }

    #[test]
    fn fmt12_roundtrips_parse() {
        for &x in &[
            2.25,
            -3.942307692307692,
            1.371648,
            0.463359,
            9.87e-13,
            4.4e15,
            -7.7e-9,
        ] {
            let s = fmt12(x);
            let back: f64 = s.parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11, "{x} → {s} → {back}");
        }
    }

    #[test]
    fn divergent_rows_serialize_as_blank_cells() {
        use crate::analytic::{InputConfig, VariancePath};
        use crate::specfun::PolynomialOrder;
        use crate::sweep::{run_sweep, Axis, AxisVar, PathSelect, SweepSpec};
        use num_complex::Complex64;

        // Vacuum ⊗ photon-added at φ = 0: zero slope, divergent sensitivity.
        let spec = SweepSpec {
            base: InputConfig::vacuum_pacs(
                Complex64::new(1.5, 0.0),
                PolynomialOrder::new(1).unwrap(),
            )
            .unwrap(),
            phi: 0.0,
            axis1: Axis::new(AxisVar::Phi, -0.1, 0.1, 3).unwrap(),
            axis2: None,
            path: PathSelect::Auto,
            variance: VariancePath::FactorialMoment,
            n_max: 40,
        };
        let csv = curve_csv(&run_sweep(&spec).unwrap());
        let mid = csv.lines().nth(2).unwrap();
        assert!(
            mid.ends_with(",,,divergent,analytic"),
            "expected blank delta_phi and s_sql cells on the divergent row: {mid}"
        );
        let edge = csv.lines().nth(1).unwrap();
        assert!(edge.ends_with(",ok,analytic"), "finite row intact: {edge}");
    }
}
