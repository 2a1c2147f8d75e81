//! Parameter sweeps and tabular output (CSV / JSON) for the command line.
//!
//! Floats are written with 12 significant digits in the shortest form that
//! round-trips that rounded value, so output is byte-stable across runs and
//! independent of locale.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::bell::{bell_factor, BellBreakdown, Frontier, Scheme, Threshold};
use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::homodyne::{chi, qubit_quadrature_density, QuadratureBin};
use crate::measurement::EfficiencyAssignment;

const GRID_TOL: f64 = 1e-12;
const MAX_GRID_POINTS: usize = 1_000_000;

pub const SWEEP_COLUMNS: [&str; 9] = [
    "scheme", "N", "eta_z2", "eta_x2", "P1", "P2", "P3_plus", "P3_minus", "omega",
];
pub const FRONTIER_COLUMNS: [&str; 3] = ["solve_for", "N", "threshold"];

/// Rounds to 12 significant digits and prints without exponent.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

/// A fixed value or an inclusive `start:stop:step` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    Fixed(f64),
    Range { start: f64, stop: f64, step: f64 },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::Fixed(v) => vec![v],
            Grid::Range { start, stop, step } => {
                let mut out = Vec::new();
                let mut k = 0usize;
                loop {
                    let v = start + k as f64 * step;
                    if v > stop + GRID_TOL {
                        break;
                    }
                    out.push(if (v - stop).abs() <= GRID_TOL { stop } else { v });
                    k += 1;
                }
                out
            }
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| -> Result<f64> {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| Error::InvalidGrid(format!("`{t}` is not a number")))?;
            if !v.is_finite() {
                return Err(Error::InvalidGrid(format!("`{t}` is not finite")));
            }
            Ok(v)
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(Grid::Fixed(num(v)?)),
            [a, b, c] => {
                let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
                if step <= 0.0 {
                    return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
                }
                if stop < start {
                    return Err(Error::InvalidGrid(format!("stop {stop} is below start {start}")));
                }
                if (stop - start) / step > MAX_GRID_POINTS as f64 {
                    return Err(Error::InvalidGrid("too many grid points".into()));
                }
                Ok(Grid::Range { start, stop, step })
            }
            _ => Err(Error::InvalidGrid(format!(
                "expected `value` or `start:stop:step`, got `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scheme: Scheme,
    pub n_min: usize,
    pub n_max: usize,
    pub eta_z_sq: Grid,
    pub eta_x_sq: Grid,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 2 || self.n_max < self.n_min {
            return Err(Error::InvalidRange {
                min: self.n_min,
                max: self.n_max,
            });
        }
        for (mode, grid) in [(0, &self.eta_z_sq), (1, &self.eta_x_sq)] {
            if let Some(&value) = grid.values().iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::EfficiencyOutOfRange { mode, value });
            }
        }
        Ok(())
    }

    /// `(N, η_z², η_x²)` points in output order: N ascending, then η_z², then
    /// η_x². The Hadamard scheme has no independent η_x² axis.
    pub fn points(&self) -> Vec<(usize, f64, f64)> {
        let zs = self.eta_z_sq.values();
        let xs = match self.scheme {
            Scheme::Hadamard => vec![f64::NAN],
            _ => self.eta_x_sq.values(),
        };
        let mut out = Vec::with_capacity((self.n_max - self.n_min + 1) * zs.len() * xs.len());
        for n in self.n_min..=self.n_max {
            for &z in &zs {
                for &x in &xs {
                    out.push((n, z, if x.is_nan() { z } else { x }));
                }
            }
        }
        out
    }
}

pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<Vec<BellBreakdown>> {
    spec.validate()?;
    let scheme = spec.scheme;
    map_ordered(spec.points(), exec, |(n, z, x)| {
        bell_factor(n, EfficiencyAssignment::new(z, x)?, scheme)
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(usize),
    Float(f64),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Text(s) => f.write_str(s),
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Float(x) => f.write_str(&format_float(*x)),
        }
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) => {
                let rounded: f64 = format_float(*x).parse().expect("formatted float parses");
                Number::from_f64(rounded).map_or(Value::Null, Value::Number)
            }
        }
    }
}

/// Flat table with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write<W: Write>(&self, format: OutputFormat, out: &mut W) -> io::Result<()> {
        match format {
            OutputFormat::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let line: Vec<String> = row.iter().map(Cell::to_string).collect();
                    writeln!(out, "{}", line.join(","))?;
                }
            }
            OutputFormat::Json => {
                let records: Vec<String> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, cell)| (c.to_string(), cell.to_json()))
                            .collect();
                        Value::Object(map).to_string()
                    })
                    .collect();
                if records.is_empty() {
                    writeln!(out, "[]")?;
                } else {
                    writeln!(out, "[\n  {}\n]", records.join(",\n  "))?;
                }
            }
        }
        Ok(())
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("table output is UTF-8")
    }
}

pub fn breakdown_table(rows: &[BellBreakdown]) -> Table {
    Table {
        columns: SWEEP_COLUMNS.to_vec(),
        rows: rows
            .iter()
            .map(|b| {
                vec![
                    Cell::Text(b.scheme.name().to_string()),
                    Cell::Int(b.n_modes),
                    Cell::Float(b.efficiencies.eta_z_sq()),
                    Cell::Float(b.efficiencies.eta_x_sq()),
                    Cell::Float(b.p_one_z_minus),
                    Cell::Float(b.p_xx_z),
                    Cell::Float(b.p_all_x_plus),
                    Cell::Float(b.p_all_x_minus),
                    Cell::Float(b.omega),
                ]
            })
            .collect(),
    }
}

pub fn frontier_table(frontier: &Frontier) -> Table {
    Table {
        columns: FRONTIER_COLUMNS.to_vec(),
        rows: frontier
            .entries
            .iter()
            .map(|&(n, t)| {
                vec![
                    Cell::Text(frontier.solve_for.name().to_string()),
                    Cell::Int(n),
                    match t {
                        Threshold::Efficiency(v) => Cell::Float(v),
                        Threshold::Infeasible => Cell::Text("infeasible".into()),
                    },
                ]
            })
            .collect(),
    }
}

/// One-line summary of a frontier's global minimum.
pub fn frontier_summary(frontier: &Frontier) -> String {
    match frontier.global_min() {
        Some((n, v)) => format!(
            "global_min={} argmin_N={n} solve_for={}",
            format_float(v),
            frontier.solve_for
        ),
        None => format!("global_min=infeasible solve_for={}", frontier.solve_for),
    }
}

/// Binned-homodyne overlap matrix in long form.
pub fn chi_table(bin: QuadratureBin, cutoff: usize) -> Table {
    let name = match bin {
        QuadratureBin::Positive => "pos",
        QuadratureBin::Negative => "neg",
    };
    let mut rows = Vec::new();
    for n in 0..=cutoff {
        for m in 0..=cutoff {
            rows.push(vec![
                Cell::Text(name.to_string()),
                Cell::Int(n),
                Cell::Int(m),
                Cell::Float(chi(n, m, bin)),
            ]);
        }
    }
    Table {
        columns: vec!["bin", "n", "m", "chi"],
        rows,
    }
}

/// Quadrature density of `cos θ|0⟩ + sin θ|1⟩` sampled on `q_grid`.
pub fn density_table(theta_deg: f64, q_grid: &Grid) -> Table {
    let theta = theta_deg.to_radians();
    Table {
        columns: vec!["theta_deg", "q", "density"],
        rows: q_grid
            .values()
            .into_iter()
            .map(|q| {
                vec![
                    Cell::Float(theta_deg),
                    Cell::Float(q),
                    Cell::Float(qubit_quadrature_density(theta, q)),
                ]
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::omega_closed_form;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(0.980_468_75), "0.98046875");
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(-1.75), "-1.75");
        assert_eq!(format_float(1.234_567_890_123_4e-5), "0.0000123456789012");
    }

    #[test]
    fn grid_parsing() {
        assert_eq!("0.9".parse::<Grid>().unwrap().values(), vec![0.9]);
        let g: Grid = "0.9:1.0:0.1".parse().unwrap();
        assert_eq!(g.values(), vec![0.9, 1.0]);
        let g: Grid = "0.7:1.0:0.05".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 7);
        assert_eq!(*v.last().unwrap(), 1.0);
        let g: Grid = "-4:4:0.01".parse().unwrap();
        assert_eq!(g.values().len(), 801);
        assert!("1:0:0.1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert!("abc".parse::<Grid>().is_err());
        assert!("nan".parse::<Grid>().is_err());
    }

    fn fig2_spec(scheme: Scheme) -> SweepSpec {
        SweepSpec {
            scheme,
            n_min: 2,
            n_max: 10,
            eta_z_sq: "0.9:1:0.1".parse().unwrap(),
            eta_x_sq: "0.9:1:0.1".parse().unwrap(),
        }
    }

    #[test]
    fn sweep_order_and_values() {
        let rows = run_sweep(&fig2_spec(Scheme::Optimal), Execution::default()).unwrap();
        assert_eq!(rows.len(), 9 * 4);
        let keys: Vec<_> = rows
            .iter()
            .map(|b| (b.n_modes, b.efficiencies.eta_z_sq(), b.efficiencies.eta_x_sq()))
            .collect();
        assert_eq!(keys[0], (2, 0.9, 0.9));
        assert_eq!(keys[1], (2, 0.9, 1.0));
        assert_eq!(keys[2], (2, 1.0, 0.9));
        assert_eq!(keys[4].0, 3);
        for b in &rows {
            assert!((b.omega - omega_closed_form(b.scheme, b.n_modes, b.efficiencies)).abs() < 1e-10);
        }
        let n10 = rows.iter().find(|b| b.n_modes == 10 && b.efficiencies == EfficiencyAssignment::ideal());
        assert!((n10.unwrap().omega - (1.0 - 10.0 / 512.0)).abs() < 1e-12);
        let both = rows
            .iter()
            .find(|b| b.n_modes == 3 && b.efficiencies.eta_z_sq() == 0.9 && b.efficiencies.eta_x_sq() == 0.9)
            .unwrap();
        assert!((both.omega - 0.05).abs() < 1e-12);
    }

    #[test]
    fn sequential_and_parallel_render_identically() {
        let spec = fig2_spec(Scheme::Hybrid);
        let a = breakdown_table(&run_sweep(&spec, Execution::Sequential).unwrap());
        let b = breakdown_table(&run_sweep(&spec, Execution::Parallel).unwrap());
        assert_eq!(a.render(OutputFormat::Csv), b.render(OutputFormat::Csv));
        assert_eq!(a.render(OutputFormat::Json), b.render(OutputFormat::Json));
    }

    #[test]
    fn hadamard_sweep_has_no_x_axis() {
        let rows = run_sweep(&fig2_spec(Scheme::Hadamard), Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 9 * 2);
        assert!(rows.iter().all(|b| b.efficiencies.eta_x_sq() == b.efficiencies.eta_z_sq()));
    }

    #[test]
    fn sweep_validation() {
        let mut spec = fig2_spec(Scheme::Optimal);
        spec.n_min = 1;
        assert!(run_sweep(&spec, Execution::Sequential).is_err());
        let mut spec = fig2_spec(Scheme::Optimal);
        spec.eta_x_sq = "0.5:1.5:0.5".parse().unwrap();
        assert!(matches!(spec.validate(), Err(Error::EfficiencyOutOfRange { mode: 1, .. })));
    }

    #[test]
    fn json_mirrors_csv() {
        let rows = run_sweep(
            &SweepSpec {
                scheme: Scheme::Optimal,
                n_min: 3,
                n_max: 4,
                eta_z_sq: Grid::Fixed(1.0),
                eta_x_sq: Grid::Fixed(1.0),
            },
            Execution::Sequential,
        )
        .unwrap();
        let json = breakdown_table(&rows).render(OutputFormat::Json);
        let parsed: Vec<Map<String, Value>> = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.len(), 2);
        let keys: Vec<&String> = parsed[0].keys().collect();
        assert_eq!(keys, SWEEP_COLUMNS.iter().collect::<Vec<_>>());
        assert_eq!(parsed[0]["omega"], Value::from(0.25));
        assert_eq!(parsed[1]["N"], Value::from(4));
    }

    #[test]
    fn chi_and_density_tables() {
        let t = chi_table(QuadratureBin::Positive, 1);
        let csv = t.render(OutputFormat::Csv);
        assert_eq!(
            csv,
            "bin,n,m,chi\npos,0,0,0.5\npos,0,1,0.398942280401\npos,1,0,0.398942280401\npos,1,1,0.5\n"
        );
        let d = density_table(45.0, &"-1:1:0.5".parse().unwrap());
        assert_eq!(d.rows.len(), 5);
    }
}
