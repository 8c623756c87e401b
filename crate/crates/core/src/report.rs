//! Sweeps, figure data, oracle self-checks and CSV/JSON serialization.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical_moments::{
    classical_dispersion_product, classical_moment_closed_form, classical_momentum_density,
};
use crate::eigensolver::{solve, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{Family, PotentialSpec};
use crate::oracles::half_oscillator::{
    even_first_moment_discrepancy, even_first_moment_exact, even_first_moment_quoted, half_oscillator_moment_tabled,
};
use crate::oracles::{
    bouncing_energy, box_moments, half_oscillator_moment, harmonic_energy, harmonic_product_original, MomentMethod,
};
use crate::quantum_moments::{original_variable_product, uncertainty_product, MomentSet, UncertaintyRecord};
use crate::susy::{partner_uncertainty_sweep, solve_partner};

/// Largest exponent a sweep accepts.
pub const MAX_EXPONENT: u32 = 16;
/// Exponents above this are accepted with a warning.
pub const WARN_EXPONENT: u32 = 10;
/// Significant digits written for every number.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub const CSV_HEADER: &str =
    "family,b,n,E,x_max,p_max,q_x_mean,q_x2,q_p2,q_product,c_x_mean,c_x2,c_p2,c_product,abs_gap";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    pub b_values: Vec<u32>,
    pub n_values: Vec<usize>,
    pub solver: SolverConfig,
}

impl SweepConfig {
    /// Checks the ranges and returns warnings for exponents past
    /// [`WARN_EXPONENT`].
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.families.is_empty() || self.n_values.is_empty() {
            return Err(Error::OutOfRange("sweep needs at least one family and one n".into()));
        }
        let needs_b = self.families.iter().any(|f| f.is_power());
        if needs_b && self.b_values.is_empty() {
            return Err(Error::OutOfRange(
                "sweep over a power family needs at least one b".into(),
            ));
        }
        let mut warnings = Vec::new();
        if needs_b {
            for &b in &self.b_values {
                if b == 0 || b > MAX_EXPONENT {
                    return Err(Error::InvalidExponent(b as i64));
                }
                if b > WARN_EXPONENT {
                    warnings.push(format!(
                        "b = {b} is past {WARN_EXPONENT}; the ground state crowds the walls and accuracy drops"
                    ));
                }
            }
        }
        Ok(warnings)
    }

    /// Distinct potentials in `(family, b)` order; box families appear once.
    fn potentials(&self) -> Result<Vec<PotentialSpec>> {
        let mut out = Vec::new();
        for &family in &self.families {
            if family.is_power() {
                for &b in &self.b_values {
                    out.push(PotentialSpec::new(family, b as i64)?);
                }
            } else {
                out.push(PotentialSpec::new(family, 0)?);
            }
        }
        out.sort_by_key(|s| (family_rank(s.family()), s.exponent().unwrap_or(0)));
        out.dedup();
        Ok(out)
    }
}

fn family_rank(f: Family) -> usize {
    Family::ALL.iter().position(|&g| g == f).unwrap_or(usize::MAX)
}

/// One line of a sweep. `b` is 0 for box families; `n` counts from 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub family: String,
    pub b: u32,
    pub n: usize,
    #[serde(rename = "E")]
    pub energy: f64,
    pub x_max: f64,
    pub p_max: f64,
    pub q_x_mean: f64,
    pub q_x2: f64,
    pub q_p2: f64,
    pub q_product: f64,
    pub c_x_mean: f64,
    pub c_x2: f64,
    pub c_p2: f64,
    pub c_product: f64,
    pub abs_gap: f64,
}

impl ReportRow {
    pub fn from_record(family: &str, record: &UncertaintyRecord) -> Result<Self> {
        let q = &record.quantum;
        let c = record
            .classical
            .as_ref()
            .ok_or_else(|| Error::OutOfRange("record has no classical moments".into()))?;
        Ok(Self {
            family: family.to_string(),
            b: record.potential.exponent().unwrap_or(0),
            n: record.n,
            energy: q.frame.energy,
            x_max: q.frame.x_max,
            p_max: q.frame.p_max,
            q_x_mean: q.x_mean,
            q_x2: q.x2,
            q_p2: q.p2,
            q_product: q.product(),
            c_x_mean: c.x_mean,
            c_x2: c.x2,
            c_p2: c.p2,
            c_product: c.product(),
            abs_gap: (q.product() - c.product()).abs(),
        })
    }

    fn csv_line(&self) -> String {
        let nums = [
            self.energy,
            self.x_max,
            self.p_max,
            self.q_x_mean,
            self.q_x2,
            self.q_p2,
            self.q_product,
            self.c_x_mean,
            self.c_x2,
            self.c_p2,
            self.c_product,
            self.abs_gap,
        ];
        let mut line = format!("{},{},{}", self.family, self.b, self.n);
        for v in nums {
            line.push(',');
            line.push_str(&format_number(v));
        }
        line
    }
}

/// Quantum record for state `n` with its classical counterpart at `E_n`.
pub fn paired_record(
    spec: &PotentialSpec,
    spectrum: &crate::eigensolver::Spectrum,
    n: usize,
) -> Result<UncertaintyRecord> {
    let record = uncertainty_product(spec, spectrum, n)?;
    let classical = classical_dispersion_product(spec, record.quantum.frame.energy)?;
    Ok(record.with_classical(classical))
}

/// One row per `(family, b, n)`, in that order. Potentials are solved in
/// parallel; the output does not depend on the schedule.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ReportRow>> {
    config.validate()?;
    let specs = config.potentials()?;
    let n_max = *config.n_values.iter().max().expect("validated non-empty");
    let mut ns = config.n_values.clone();
    ns.sort_unstable();
    ns.dedup();
    let blocks: Vec<Result<Vec<ReportRow>>> = specs
        .par_iter()
        .map(|spec| {
            let context = |e: Error| Error::InPotential {
                label: spec.label(),
                source: Box::new(e),
            };
            let spectrum = solve(spec, n_max, &config.solver).map_err(context)?;
            ns.iter()
                .map(|&n| {
                    let record = paired_record(spec, &spectrum, n).map_err(context)?;
                    ReportRow::from_record(spec.family().name(), &record)
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for block in blocks {
        rows.extend(block?);
    }
    Ok(rows)
}

/// Partner-potential rows for `b_list`, levels `0..levels`.
pub fn run_partner_sweep(b_list: &[u32], levels: usize, solver: &SolverConfig) -> Result<Vec<ReportRow>> {
    let records = partner_uncertainty_sweep(b_list, levels, solver)?;
    records
        .iter()
        .map(|r| ReportRow::from_record("symmetric-power-partner", r))
        .collect()
}

/// `%g`-style formatting with [`SIGNIFICANT_DIGITS`] digits.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let p = SIGNIFICANT_DIGITS as i32;
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (p - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_rows<W: Write>(rows: &[ReportRow], format: OutputFormat, out: &mut W) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in rows {
                writeln!(out, "{}", r.csv_line())?;
            }
        }
        OutputFormat::Json => {
            let values: Vec<serde_json::Value> = rows.iter().map(row_json).collect();
            serde_json::to_writer_pretty(&mut *out, &values)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

// numbers rounded to the same precision as the CSV
fn row_json(r: &ReportRow) -> serde_json::Value {
    let mut v = serde_json::to_value(r).expect("plain struct");
    if let serde_json::Value::Object(map) = &mut v {
        for (_, field) in map.iter_mut() {
            if let Some(x) = field.as_f64().filter(|_| field.is_f64()) {
                *field = serde_json::from_str(&format_number(x)).unwrap_or(serde_json::Value::Null);
            }
        }
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    F1a,
    F1b,
    F1c,
    F1d,
    F2a,
    F2b,
    F2c,
    F2d,
    F3a,
    F3b,
    Supp,
}

impl FigureId {
    pub const ALL: [FigureId; 11] = [
        FigureId::F1a,
        FigureId::F1b,
        FigureId::F1c,
        FigureId::F1d,
        FigureId::F2a,
        FigureId::F2b,
        FigureId::F2c,
        FigureId::F2d,
        FigureId::F3a,
        FigureId::F3b,
        FigureId::Supp,
    ];

    fn product_panel(self) -> Option<(Family, usize)> {
        use FigureId::*;
        let family = match self {
            F1a | F1b | F1c | F1d => Family::SymmetricPower,
            F2a | F2b | F2c | F2d => Family::HalfLinePower,
            _ => return None,
        };
        let n = match self {
            F1a | F2a => 0,
            F1b | F2b => 1,
            F1c | F2c => 2,
            _ => 10,
        };
        Some((family, n))
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FigureId::Supp => "SUPP".to_string(),
            other => format!("{other:?}"),
        };
        f.write_str(&s)
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::OutOfRange(format!("unknown figure id {s:?}")))
    }
}

/// One abscissa of a figure: classical and quantum ordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigurePoint {
    pub x: f64,
    /// Partner level, for the supplementary figure only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub classical: f64,
    pub quantum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureData {
    pub id: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<FigurePoint>,
}

impl FigureData {
    pub fn write<W: Write>(&self, format: OutputFormat, out: &mut W) -> io::Result<()> {
        match format {
            OutputFormat::Csv => {
                let with_level = self.points.iter().any(|p| p.level.is_some());
                if with_level {
                    writeln!(out, "{},level,classical,quantum", self.x_label)?;
                } else {
                    writeln!(out, "{},classical,quantum", self.x_label)?;
                }
                for p in &self.points {
                    let level = p.level.map(|l| format!("{l},")).unwrap_or_default();
                    writeln!(
                        out,
                        "{},{level}{},{}",
                        format_number(p.x),
                        format_number(p.classical),
                        format_number(p.quantum)
                    )?;
                }
            }
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Data behind one figure panel, as classical and quantum series.
pub fn emit_figure_data(id: FigureId, solver: &SolverConfig) -> Result<FigureData> {
    let (x_label, y_label, points) = if let Some((family, n)) = id.product_panel() {
        let config = SweepConfig {
            families: vec![family],
            b_values: (1..=10).collect(),
            n_values: vec![n],
            solver: *solver,
        };
        let points = run_sweep(&config)?
            .iter()
            .map(|r| FigurePoint {
                x: r.b as f64,
                level: None,
                classical: r.c_product,
                quantum: r.q_product,
            })
            .collect();
        ("b", "product", points)
    } else if id == FigureId::Supp {
        let points = run_partner_sweep(&[1, 2, 3, 4], 3, solver)?
            .iter()
            .map(|r| FigurePoint {
                x: r.b as f64,
                level: Some(r.n),
                classical: r.c_product,
                quantum: r.q_product,
            })
            .collect();
        ("b", "product", points)
    } else {
        // <X²> against n for the symmetric linear potential; the second
        // panel drops the ground state so the rest can be seen
        let spec = PotentialSpec::symmetric_power(1)?;
        let spectrum = solve(&spec, 25, solver)?;
        let start = if id == FigureId::F3a { 0 } else { 1 };
        let points = (start..=25)
            .map(|n| {
                let r = paired_record(&spec, &spectrum, n)?;
                Ok(FigurePoint {
                    x: n as f64,
                    level: None,
                    classical: r.classical.map(|c| c.x2).unwrap_or(f64::NAN),
                    quantum: r.quantum.x2,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ("n", "x2", points)
    };
    Ok(FigureData {
        id: id.to_string(),
        x_label: x_label.into(),
        y_label: y_label.into(),
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Set when the computation itself failed.
    pub error: Option<String>,
}

impl OracleCheck {
    fn new(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            actual,
            tolerance,
            passed: (actual - expected).abs() <= tolerance,
            error: None,
        }
    }

    fn relative(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        let mut c = Self::new(name, expected, actual, tolerance * expected.abs());
        c.tolerance = tolerance;
        c
    }

    fn failed(name: impl Into<String>, err: Error) -> Self {
        Self {
            name: name.into(),
            expected: f64::NAN,
            actual: f64::NAN,
            tolerance: 0.0,
            passed: false,
            error: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
    pub notes: Vec<String>,
}

impl OracleReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn write_table<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(
            out,
            "{:<6} {:<52} {:>18} {:>18} {:>10}",
            "status", "check", "expected", "actual", "tol"
        )?;
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            match &c.error {
                Some(e) => writeln!(out, "{status:<6} {:<52} error: {e}", c.name)?,
                None => writeln!(
                    out,
                    "{status:<6} {:<52} {:>18} {:>18} {:>10.1e}",
                    c.name,
                    format_number(c.expected),
                    format_number(c.actual),
                    c.tolerance
                )?,
            }
        }
        for note in &self.notes {
            writeln!(out, "note: {note}")?;
        }
        writeln!(out, "{} of {} checks failed", self.failures(), self.checks.len())
    }
}

/// Solves up to `n_max`, or as far as the grid resolves; levels that could
/// not be resolved become failed checks.
fn solve_levels(
    spec: &PotentialSpec,
    n_max: usize,
    solver: &SolverConfig,
    label: &str,
    out: &mut Vec<OracleCheck>,
) -> Result<crate::eigensolver::Spectrum> {
    match solve(spec, n_max, solver) {
        Err(Error::TooManyStates { requested, allowed }) if allowed > 0 => {
            for n in allowed..requested {
                out.push(OracleCheck::failed(
                    format!("{label}{n}"),
                    Error::TooManyStates { requested, allowed },
                ));
            }
            solve(spec, allowed - 1, solver)
        }
        other => other,
    }
}

fn push_all(checks: &mut Vec<OracleCheck>, name: &str, result: Result<Vec<OracleCheck>>) {
    match result {
        Ok(list) => checks.extend(list),
        Err(e) => checks.push(OracleCheck::failed(name, e)),
    }
}

/// Analytic-versus-numeric cross checks. Solver-dependent checks use
/// `solver`, so a coarse grid shows up as failures.
pub fn oracle_check(solver: &SolverConfig) -> OracleReport {
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    // Beta-function moments against quadrature
    push_all(
        &mut checks,
        "classical moments",
        (|| {
            let mut out = Vec::new();
            for b in [1u32, 2, 3, 5, 10] {
                for family in [Family::SymmetricPower, Family::HalfLinePower] {
                    let spec = PotentialSpec::new(family, b as i64)?;
                    let m = classical_dispersion_product(&spec, 1.0)?;
                    for (k, got) in [(1, m.x_mean), (2, m.x2), (4, m.x4.unwrap_or(f64::NAN))] {
                        let want = classical_moment_closed_form(b, family, k)?;
                        out.push(OracleCheck::new(
                            format!("classical <X^{k}> {family} b={b}"),
                            want,
                            got,
                            1e-8,
                        ));
                    }
                    let p2 = b as f64 / (b as f64 + 2.0);
                    out.push(OracleCheck::new(
                        format!("classical <P^2> {family} b={b}"),
                        p2,
                        m.p2,
                        1e-8,
                    ));
                }
                let spec = PotentialSpec::symmetric_power(b)?;
                let md = classical_momentum_density(&spec, 1.0)?;
                out.push(OracleCheck::relative(
                    format!("momentum density norm b={b}"),
                    md.closed_form_normalization(),
                    md.normalization(),
                    1e-8,
                ));
            }
            Ok(out)
        })(),
    );

    // eigenvalues against Airy zeros and the oscillator ladder
    push_all(
        &mut checks,
        "bouncing-ball spectrum",
        (|| {
            let spec = PotentialSpec::half_line_power(1)?;
            let mut out = Vec::new();
            let sp = solve_levels(&spec, 10, solver, "bouncing E_", &mut out)?;
            for n in 0..sp.len() {
                out.push(OracleCheck::relative(
                    format!("bouncing E_{n}"),
                    bouncing_energy(n),
                    sp.energies()[n],
                    1e-3,
                ));
            }
            Ok(out)
        })(),
    );
    push_all(
        &mut checks,
        "oscillator spectrum",
        (|| {
            let spec = PotentialSpec::symmetric_power(2)?;
            let mut out = Vec::new();
            let sp = solve_levels(&spec, 10, solver, "oscillator E_", &mut out)?;
            for n in 0..sp.len() {
                out.push(OracleCheck::relative(
                    format!("oscillator E_{n}"),
                    harmonic_energy(n),
                    sp.energies()[n],
                    1e-4,
                ));
            }
            for n in 0..sp.len().min(6) {
                out.push(OracleCheck::new(
                    format!("oscillator (dx)^2(dp)^2 n={n}"),
                    harmonic_product_original(n),
                    original_variable_product(&spec, &sp, n)?,
                    1e-3,
                ));
            }
            Ok(out)
        })(),
    );

    // box closed forms against box solves
    push_all(
        &mut checks,
        "box products",
        (|| {
            let mut out = Vec::new();
            for family in [Family::SymmetricBox, Family::HalfLineBox] {
                let spec = PotentialSpec::new(family, 0)?;
                let sp = solve_levels(&spec, 9, solver, &format!("{family} product, index "), &mut out)?;
                for level in 1..=sp.len() {
                    let want = box_moments(level, family)?.product();
                    let got = uncertainty_product(&spec, &sp, level - 1)?.product_qm();
                    out.push(OracleCheck::new(format!("{family} product N={level}"), want, got, 5e-4));
                }
            }
            Ok(out)
        })(),
    );

    // half-wave-function moments
    push_all(
        &mut checks,
        "half-oscillator moments",
        (|| {
            let mut out = Vec::new();
            for n in 0..=10u32 {
                let q4 = half_oscillator_moment(n, 4, MomentMethod::Quadrature)?.value;
                let c4 = half_oscillator_moment(n, 4, MomentMethod::ClosedForm)?.value;
                out.push(OracleCheck::new(format!("half-oscillator <X^4> n={n}"), c4, q4, 1e-10));
                let q1 = half_oscillator_moment(n, 1, MomentMethod::Quadrature)?.value;
                if n % 2 == 1 {
                    let c1 = half_oscillator_moment(n, 1, MomentMethod::ClosedForm)?.value;
                    out.push(OracleCheck::new(format!("half-oscillator <X> n={n}"), c1, q1, 1e-10));
                } else {
                    out.push(OracleCheck::new(
                        format!("half-oscillator <X> n={n} (corrected form)"),
                        even_first_moment_exact(n / 2),
                        q1,
                        1e-10,
                    ));
                }
                if n <= 6 {
                    out.push(OracleCheck::new(
                        format!("half-oscillator <X^2> n={n} tabled integrals"),
                        0.5,
                        half_oscillator_moment_tabled(n, 2)?,
                        1e-9,
                    ));
                }
            }
            let q = half_oscillator_moment(0, 1, MomentMethod::Quadrature)?.value;
            out.push(OracleCheck::new(
                "even <X> printed/quadrature ratio n=0",
                even_first_moment_discrepancy(0),
                even_first_moment_quoted(0) / q,
                1e-6,
            ));
            Ok(out)
        })(),
    );
    notes.push(format!(
        "the usual even-state <X> closed form exceeds quadrature by 2(2m+1)/(4m+1); ratio at n=0 is {}",
        format_number(even_first_moment_discrepancy(0))
    ));

    // partner isospectrality
    push_all(
        &mut checks,
        "partner spectra",
        (|| {
            let mut out = Vec::new();
            for b in 1..=4u32 {
                let s = match solve_partner(&PotentialSpec::symmetric_power(b)?, 4, solver) {
                    Ok(s) => s,
                    Err(e) => {
                        out.push(OracleCheck::failed(format!("partner isospectrality b={b}"), e));
                        continue;
                    }
                };
                out.push(OracleCheck::new(
                    format!("partner isospectrality b={b} n<=3"),
                    0.0,
                    s.isospectral_deviation(3),
                    1e-3,
                ));
            }
            Ok(out)
        })(),
    );

    OracleReport { checks, notes }
}

/// Moment set with the classical columns for quick printing.
pub fn describe(m: &MomentSet) -> String {
    format!(
        "E={} x_max={} p_max={} <X>={} <X^2>={} <P^2>={} product={}",
        format_number(m.frame.energy),
        format_number(m.frame.x_max),
        format_number(m.frame.p_max),
        format_number(m.x_mean),
        format_number(m.x2),
        format_number(m.p2),
        format_number(m.product())
    )
}
