//! CSV and JSON rendering. Numbers use the shortest representation that
//! parses back to the same `f64` (`inf` for infinity, `NaN` for missing).

use std::io::{self, Write};

use qsl_core::dephasing::DephasingSpec;
use qsl_core::sweep::SweepTable;
use qsl_core::Tolerance;
use serde_json::{json, Value};

pub const SWEEP_HEADER: &str = "var,value,chi,p_tau,qslt_ohmic,qslt_superohmic,flags";

pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn bath_line(name: &str, bath: &DephasingSpec) -> String {
    format!(
        "# {name}: n={} eta={} omega_c={}",
        fmt_num(bath.ohmicity()),
        fmt_num(bath.eta()),
        fmt_num(bath.omega_c())
    )
}

/// Writes the table as CSV: `#` metadata, the header, then each curve's rows
/// introduced by a `# curve i: ...` line.
pub fn write_sweep_csv<W: Write>(table: &SweepTable, mut out: W) -> io::Result<()> {
    let spec = &table.spec;
    let var = spec.variable.name();
    writeln!(out, "# qsl sweep")?;
    if let Some(p) = spec.preset {
        writeln!(out, "# preset: {p}")?;
    }
    writeln!(out, "# var: {var} ({} points)", spec.grid.len())?;
    writeln!(out, "{}", bath_line("ohmic", &spec.ohmic))?;
    writeln!(out, "{}", bath_line("superohmic", &spec.super_ohmic))?;
    writeln!(
        out,
        "# tol: rel={} abs={}",
        fmt_num(spec.tol.rel),
        fmt_num(spec.tol.abs)
    )?;
    writeln!(out, "# p_tau: ohmic bath")?;
    writeln!(out, "{SWEEP_HEADER}")?;
    for (ci, curve) in spec.curves.iter().enumerate() {
        writeln!(out, "# curve {ci}: {}", curve.label())?;
        for row in table.curve_rows(ci) {
            writeln!(
                out,
                "{var},{},{},{},{},{},{}",
                fmt_num(row.value),
                fmt_num(row.chi),
                fmt_num(row.p_tau),
                fmt_num(row.qslt_ohmic),
                fmt_num(row.qslt_superohmic),
                row.flags.render()
            )?;
        }
    }
    Ok(())
}

/// One single-point evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputeRecord {
    pub chi: f64,
    pub p_tau: f64,
    pub p_t: f64,
    pub qslt: f64,
    pub active_bound: &'static str,
    pub tol: Tolerance,
    /// Monte-Carlo chi and its standard error, when requested.
    pub chi_mc: Option<(f64, f64)>,
}

impl ComputeRecord {
    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut f = vec![
            ("chi", fmt_num(self.chi)),
            ("p_tau", fmt_num(self.p_tau)),
            ("p_t", fmt_num(self.p_t)),
            ("qslt", fmt_num(self.qslt)),
            ("active_bound", self.active_bound.to_string()),
            ("tol_rel", fmt_num(self.tol.rel)),
            ("tol_abs", fmt_num(self.tol.abs)),
        ];
        if let Some((v, se)) = self.chi_mc {
            f.push(("chi_mc", fmt_num(v)));
            f.push(("chi_mc_stderr", fmt_num(se)));
        }
        f
    }

    pub fn to_csv(&self) -> String {
        let (names, values): (Vec<_>, Vec<_>) = self.fields().into_iter().unzip();
        format!("{}\n{}\n", names.join(","), values.join(","))
    }

    /// Non-finite numbers become strings so the document stays valid JSON.
    pub fn to_json(&self) -> String {
        let num = |x: f64| -> Value {
            if x.is_finite() {
                json!(x)
            } else {
                json!(fmt_num(x))
            }
        };
        let mut v = json!({
            "chi": num(self.chi),
            "p_tau": num(self.p_tau),
            "p_t": num(self.p_t),
            "qslt": num(self.qslt),
            "active_bound": self.active_bound,
            "tol_rel": num(self.tol.rel),
            "tol_abs": num(self.tol.abs),
        });
        if let Some((c, se)) = self.chi_mc {
            v["chi_mc"] = num(c);
            v["chi_mc_stderr"] = num(se);
        }
        format!("{v}\n")
    }
}
