//! Sweeps of the bilinear sum over the configured families.

use std::path::Path;

use charsum_core::{char_sum, make_character, FpSet, PrimeField};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{cell_rng, ExperimentConfig, Skip};
use crate::error::{LabError, Result};
use crate::output::{fmt_float, write_csv};

/// One `(p, family-A, family-B)` cell of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub p: u64,
    pub d: u32,
    pub family_a: String,
    pub family_b: String,
    pub a_size: usize,
    pub b_size: usize,
    /// `|A+A| / |A|`.
    pub k: f64,
    /// `|B+B| / |B|`.
    pub l: f64,
    /// `log_p |A| - 1/3`.
    pub delta: f64,
    pub sum_abs: f64,
    /// `|S| / (|A||B|)`.
    pub ratio: f64,
    /// `-log_p ratio`; infinite when the sum vanishes.
    pub tau_emp: f64,
    /// `delta^2 / (100 C(K))`.
    pub tau_formula: f64,
    /// `C(K)^2 / delta^2`.
    pub cond_c2_over_delta2: f64,
    /// `C(K) log(1/delta) / delta^2`.
    pub cond_c_log_over_delta2: f64,
    /// `C(K) log L / delta`.
    pub cond_c_logl_over_delta: f64,
    pub log_p: f64,
    /// `;`-separated: `delta<=0`, `A>=sqrt(p)`, `B>=sqrt(p)`.
    pub flags: String,
}

/// Column names, in output order.
pub const COLUMNS: [&str; 18] = [
    "p",
    "d",
    "family_A",
    "family_B",
    "A_size",
    "B_size",
    "K",
    "L",
    "delta",
    "S_abs",
    "ratio",
    "tau_emp",
    "tau_formula",
    "cond_C2_over_delta2",
    "cond_C_log_inv_delta_over_delta2",
    "cond_C_logL_over_delta",
    "log_p",
    "flags",
];

impl ReportRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.d.to_string(),
            self.family_a.clone(),
            self.family_b.clone(),
            self.a_size.to_string(),
            self.b_size.to_string(),
            fmt_float(self.k),
            fmt_float(self.l),
            fmt_float(self.delta),
            fmt_float(self.sum_abs),
            fmt_float(self.ratio),
            fmt_float(self.tau_emp),
            fmt_float(self.tau_formula),
            fmt_float(self.cond_c2_over_delta2),
            fmt_float(self.cond_c_log_over_delta2),
            fmt_float(self.cond_c_logl_over_delta),
            fmt_float(self.log_p),
            self.flags.clone(),
        ]
    }
}

/// A cell that produced no row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedRow {
    pub p: u64,
    pub family_a: String,
    pub family_b: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ExperimentOutcome {
    pub rows: Vec<ReportRow>,
    pub skipped: Vec<SkippedRow>,
}

struct Cell {
    p: u64,
    ia: usize,
    ib: usize,
}

/// Runs every cell, `workers` at a time (0 for one per core). Row order is
/// prime-major, then family-A, then family-B, independent of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let cells: Vec<Cell> = cfg
        .primes
        .iter()
        .flat_map(|&p| {
            (0..cfg.family_a.len())
                .flat_map(move |ia| (0..cfg.family_b.len()).map(move |ib| Cell { p, ia, ib }))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<std::result::Result<ReportRow, SkippedRow>>> =
        pool.install(|| cells.par_iter().map(|c| run_cell(cfg, c)).collect());
    let mut out = ExperimentOutcome::default();
    for r in results {
        match r? {
            Ok(row) => out.rows.push(row),
            Err(skip) => out.skipped.push(skip),
        }
    }
    Ok(out)
}

fn run_cell(
    cfg: &ExperimentConfig,
    cell: &Cell,
) -> Result<std::result::Result<ReportRow, SkippedRow>> {
    let fa = &cfg.family_a[cell.ia];
    let fb = &cfg.family_b[cell.ib];
    let skip = |reason: String| {
        Ok(Err(SkippedRow {
            p: cell.p,
            family_a: fa.to_string(),
            family_b: fb.to_string(),
            reason,
        }))
    };
    if !(cell.p - 1).is_multiple_of(cfg.d as u64) {
        return skip(format!("d = {} does not divide p - 1", cfg.d));
    }
    let field = PrimeField::new(cell.p)?;
    let a = match fa.build(&field, &mut cell_rng(cfg.seed, cell.p, cell.ia, 0))? {
        Ok(a) => a,
        Err(Skip(r)) => return skip(r),
    };
    let b = match fb.build(&field, &mut cell_rng(cfg.seed, cell.p, cell.ib, 1))? {
        Ok(b) => b,
        Err(Skip(r)) => return skip(r),
    };
    Ok(Ok(report_row(
        &field,
        cfg.d,
        &a,
        &b,
        cfg.c_of_k,
        fa.to_string(),
        fb.to_string(),
    )?))
}

fn doubling(s: &FpSet) -> Result<f64> {
    let r = s.doubling_constant()?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

/// Computes one row for explicit sets.
pub fn report_row(
    field: &PrimeField,
    d: u32,
    a: &FpSet,
    b: &FpSet,
    c_of_k: f64,
    family_a: String,
    family_b: String,
) -> Result<ReportRow> {
    let chi = make_character(field, d)?;
    let s = char_sum(&chi, a, b)?;
    let p = field.p() as u64;
    let log_p = (p as f64).ln();
    let (na, nb) = (a.len(), b.len());
    let l = doubling(b)?;
    let delta = (na as f64).ln() / log_p - 1.0 / 3.0;
    let sum_abs = match s.exact() {
        Some(v) => v.unsigned_abs() as f64,
        None => s.abs(),
    };
    let ratio = (sum_abs / (na as f64 * nb as f64)).min(1.0);
    let mut flags = Vec::new();
    if delta <= 0.0 {
        flags.push("delta<=0");
    }
    if (na as u64) * (na as u64) >= p {
        flags.push("A>=sqrt(p)");
    }
    if (nb as u64) * (nb as u64) >= p {
        flags.push("B>=sqrt(p)");
    }
    Ok(ReportRow {
        p,
        d,
        family_a,
        family_b,
        a_size: na,
        b_size: nb,
        k: doubling(a)?,
        l,
        delta,
        sum_abs,
        ratio,
        tau_emp: if ratio == 0.0 {
            f64::INFINITY
        } else {
            (-ratio.ln() / log_p).max(0.0)
        },
        tau_formula: delta * delta / (100.0 * c_of_k),
        cond_c2_over_delta2: c_of_k * c_of_k / (delta * delta),
        cond_c_log_over_delta2: c_of_k * (1.0 / delta).ln() / (delta * delta),
        cond_c_logl_over_delta: c_of_k * l.ln() / delta,
        log_p,
        flags: flags.join(";"),
    })
}

/// Runs `cfg` and writes its rows as CSV to `path`.
pub fn sweep_and_emit(
    cfg: &ExperimentConfig,
    workers: usize,
    path: &Path,
) -> Result<ExperimentOutcome> {
    let outcome = run_experiment(cfg, workers)?;
    write_csv(path, &COLUMNS, outcome.rows.iter().map(ReportRow::record))?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{FamilySpec, Size};

    fn interval(len: u64) -> FamilySpec {
        FamilySpec::Interval {
            start: 1,
            size: Size::Len(len),
        }
    }

    fn cfg(primes: Vec<u64>, a: Vec<FamilySpec>, b: Vec<FamilySpec>) -> ExperimentConfig {
        ExperimentConfig {
            primes,
            d: 2,
            family_a: a,
            family_b: b,
            c_of_k: 1.0,
            seed: 3,
        }
    }

    #[test]
    fn single_row_ratio() {
        let out =
            run_experiment(&cfg(vec![101], vec![interval(10)], vec![interval(10)]), 1).unwrap();
        assert_eq!(out.rows.len(), 1);
        let row = &out.rows[0];
        let f = PrimeField::new(101).unwrap();
        let chi = make_character(&f, 2).unwrap();
        let i = FpSet::interval(&f, 1, 10);
        let s = char_sum(&chi, &i, &i).unwrap().exact().unwrap();
        assert_eq!(row.sum_abs, s.unsigned_abs() as f64);
        assert_eq!(row.ratio, s.unsigned_abs() as f64 / 100.0);
        assert_eq!((row.a_size, row.b_size), (10, 10));
        assert!(row.delta > 0.0 && row.flags.is_empty());
    }

    #[test]
    fn full_field_cancels() {
        let out = run_experiment(
            &cfg(vec![101], vec![FamilySpec::Full], vec![interval(3)]),
            1,
        )
        .unwrap();
        assert_eq!(out.rows[0].ratio, 0.0);
        assert!(out.rows[0].tau_emp.is_infinite());
        assert_eq!(out.rows[0].flags, "A>=sqrt(p)");
    }

    #[test]
    fn singleton_ratio_is_one_and_small_sets_flag() {
        let out = run_experiment(&cfg(vec![101], vec![interval(1)], vec![interval(1)]), 1).unwrap();
        let row = &out.rows[0];
        assert_eq!(row.ratio, 1.0);
        assert_eq!(row.tau_emp, 0.0);
        assert!(row.flags.contains("delta<=0"));
    }

    #[test]
    fn skips_and_ordering() {
        let mut c = cfg(
            vec![101, 103, 107],
            vec![interval(5), interval(7)],
            vec![interval(4)],
        );
        c.d = 5;
        let out = run_experiment(&c, 4).unwrap();
        assert_eq!(out.rows.len(), 2);
        assert_eq!(out.skipped.len(), 4);
        assert_eq!(out.rows[0].a_size, 5);
        assert_eq!(out.rows[1].a_size, 7);
        c.d = 2;
        let par = run_experiment(&c, 4).unwrap();
        let seq = run_experiment(&c, 1).unwrap();
        assert_eq!(par, seq);
        let ps: Vec<u64> = par.rows.iter().map(|r| r.p).collect();
        assert_eq!(ps, vec![101, 101, 103, 103, 107, 107]);
    }

    #[test]
    fn rows_respect_ratio_invariants() {
        let c = cfg(
            vec![101, 1009],
            vec![
                interval(20),
                FamilySpec::RandomSubsetOfGap {
                    a0: 0,
                    gens: vec![1, 37],
                    bounds: vec![8, 8],
                    density: 0.5,
                },
            ],
            vec![FamilySpec::MultiplicativeSubgroup { order: 4 }, interval(9)],
        );
        for row in run_experiment(&c, 2).unwrap().rows {
            assert!((0.0..=1.0).contains(&row.ratio));
            assert!(row.tau_emp >= 0.0);
        }
    }
}
