//! The CLI subcommands as plain functions returning serializable reports.

use charsum_core::{
    char_sum, clique_growth_report, davenport_check, e3_bound_report, e3_mult, holder_chain_check,
    make_character, proof_trace, system_count_with_zeros, FpSet, PrimeField, ProofTrace,
};
use serde::Serialize;

use crate::error::Result;
use crate::output::{fmt_float, Table};
use crate::setspec::SetSpec;

/// A report that can be rendered as JSON or as a CSV table.
pub trait Report: Serialize {
    fn table(&self) -> Table;
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumReport {
    pub p: u64,
    pub d: u32,
    pub value_re: f64,
    pub value_im: f64,
    pub abs: f64,
    /// `|A||B|`.
    pub trivial_bound: u64,
    /// Summands with `a + b != 0`.
    pub terms: u64,
    /// Integer value when `d <= 2`.
    pub exact: Option<i64>,
}

pub fn sum(p: u64, d: u32, a: &SetSpec, b: &SetSpec) -> Result<SumReport> {
    let field = PrimeField::new(p)?;
    let (a, b) = (a.to_set(&field)?, b.to_set(&field)?);
    let chi = make_character(&field, d)?;
    let s = char_sum(&chi, &a, &b)?;
    let v = s.value();
    Ok(SumReport {
        p,
        d,
        value_re: s.exact().map_or(v.re, |x| x as f64),
        value_im: if s.exact().is_some() { 0.0 } else { v.im },
        abs: s.exact().map_or(s.abs(), |x| x.unsigned_abs() as f64),
        trivial_bound: (a.len() * b.len()) as u64,
        terms: s.terms(),
        exact: s.exact(),
    })
}

impl Report for SumReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "p",
            "d",
            "value_re",
            "value_im",
            "abs",
            "trivial_bound",
            "terms",
        ]);
        t.push(vec![
            self.p.to_string(),
            self.d.to_string(),
            fmt_float(self.value_re),
            fmt_float(self.value_im),
            fmt_float(self.abs),
            self.trivial_bound.to_string(),
            self.terms.to_string(),
        ]);
        t
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DavenportOut {
    pub p: u64,
    pub d: u32,
    pub interval: u64,
    pub r: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
    pub exact: bool,
}

/// The moment check for `I = [1, n]`.
pub fn davenport(p: u64, d: u32, n: u64, r: u32) -> Result<DavenportOut> {
    let field = PrimeField::new(p)?;
    let chi = make_character(&field, d)?;
    let i = FpSet::interval(&field, 1, n as i64);
    let rep = davenport_check(&chi, &i, r)?;
    Ok(DavenportOut {
        p,
        d,
        interval: n,
        r,
        lhs: rep.lhs,
        rhs: rep.rhs,
        ok: rep.ok,
        exact: rep.exact,
    })
}

impl Report for DavenportOut {
    fn table(&self) -> Table {
        let mut t = Table::new(&["p", "d", "interval", "r", "lhs", "rhs", "ok"]);
        t.push(vec![
            self.p.to_string(),
            self.d.to_string(),
            self.interval.to_string(),
            self.r.to_string(),
            fmt_float(self.lhs),
            fmt_float(self.rhs),
            self.ok.to_string(),
        ]);
        t
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystemOut {
    pub b_size: usize,
    pub nonzero: u128,
    pub zero_terms: u128,
    pub total: u128,
    pub zero_in_b: bool,
    pub bookkeeping_ok: bool,
    pub holder_lhs: u128,
    pub holder_rhs: f64,
    pub holder_ok: bool,
    pub holder_equality: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct E3BoundOut {
    pub sumset_size: usize,
    pub bound_body: f64,
    pub ratio: f64,
    pub precondition_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub p: u64,
    pub a_size: usize,
    /// Whether 0 was dropped from `A` before taking ratios.
    pub a_zero_excluded: bool,
    pub e3: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e3_bound: Option<E3BoundOut>,
}

/// `E3(A)`, and with `B` the system count and the Hölder step. Zero is
/// removed from `A`; with `with_zeros` the solutions through `0 in B` are
/// added back, otherwise 0 is removed from `B` as well.
pub fn energy(
    p: u64,
    a: &SetSpec,
    b: Option<&SetSpec>,
    with_zeros: bool,
    e3_bound: bool,
) -> Result<EnergyReport> {
    let field = PrimeField::new(p)?;
    let (a, a_zero_excluded) = a.to_set(&field)?.without_zero();
    let system = match b {
        None => None,
        Some(b) => {
            let b = b.to_set(&field)?;
            let b = if with_zeros { b } else { b.without_zero().0 };
            let sc = system_count_with_zeros(&a, &b)?;
            let h = holder_chain_check(&a, &b.without_zero().0)?;
            Some(SystemOut {
                b_size: b.len(),
                nonzero: sc.nonzero,
                zero_terms: sc.zero_terms,
                total: sc.total,
                zero_in_b: sc.zero_in_b,
                bookkeeping_ok: sc.bookkeeping_ok,
                holder_lhs: h.lhs,
                holder_rhs: h.rhs,
                holder_ok: h.ok,
                holder_equality: h.equality,
            })
        }
    };
    let e3_bound = if e3_bound {
        let r = e3_bound_report(&a)?;
        Some(E3BoundOut {
            sumset_size: r.sumset_size,
            bound_body: r.bound_body,
            ratio: r.ratio,
            precondition_ok: r.precondition_ok,
        })
    } else {
        None
    };
    Ok(EnergyReport {
        p,
        a_size: a.len(),
        a_zero_excluded,
        e3: e3_mult(&a)?,
        system,
        e3_bound,
    })
}

impl Report for EnergyReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["quantity", "value"]);
        let mut kv = |k: &str, v: String| t.push(vec![k.to_owned(), v]);
        kv("p", self.p.to_string());
        kv("A_size", self.a_size.to_string());
        kv("A_zero_excluded", self.a_zero_excluded.to_string());
        kv("E3", self.e3.to_string());
        if let Some(s) = &self.system {
            kv("B_size", s.b_size.to_string());
            kv("system_nonzero", s.nonzero.to_string());
            kv("system_zero_terms", s.zero_terms.to_string());
            kv("system_total", s.total.to_string());
            kv("bookkeeping_ok", s.bookkeeping_ok.to_string());
            kv("holder_lhs", s.holder_lhs.to_string());
            kv("holder_rhs", fmt_float(s.holder_rhs));
            kv("holder_ok", s.holder_ok.to_string());
            kv("holder_equality", s.holder_equality.to_string());
        }
        if let Some(e) = &self.e3_bound {
            kv("sumset_size", e.sumset_size.to_string());
            kv("e3_bound_body", fmt_float(e.bound_body));
            kv("e3_ratio", fmt_float(e.ratio));
            kv("e3_precondition_ok", e.precondition_ok.to_string());
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PaleyRow {
    pub p: u32,
    pub omega: usize,
    pub alpha: usize,
    pub omega_over_log2p: f64,
    pub omega_over_sqrtp: f64,
    pub witness: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PaleyReport {
    pub rows: Vec<PaleyRow>,
    pub sqrt_ratio_decreasing: bool,
}

pub fn paley(primes: &[u64]) -> Result<PaleyReport> {
    let rep = clique_growth_report(primes)?;
    Ok(PaleyReport {
        rows: rep
            .rows
            .into_iter()
            .map(|r| PaleyRow {
                p: r.p,
                omega: r.omega,
                alpha: r.alpha,
                omega_over_log2p: r.omega_over_log2p,
                omega_over_sqrtp: r.omega_over_sqrtp,
                witness: r.witness,
            })
            .collect(),
        sqrt_ratio_decreasing: rep.sqrt_ratio_decreasing,
    })
}

impl Report for PaleyReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "p",
            "omega",
            "alpha",
            "omega_over_log2p",
            "omega_over_sqrtp",
            "witness",
        ]);
        for r in &self.rows {
            let witness: Vec<String> = r.witness.iter().map(u32::to_string).collect();
            t.push(vec![
                r.p.to_string(),
                r.omega.to_string(),
                r.alpha.to_string(),
                fmt_float(r.omega_over_log2p),
                fmt_float(r.omega_over_sqrtp),
                witness.join(" "),
            ]);
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictOut {
    pub id: &'static str,
    pub claim: &'static str,
    pub status: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    pub p: u32,
    pub order: u32,
    pub a_size: usize,
    pub b_size: usize,
    pub k: f64,
    pub l: f64,
    pub dim: usize,
    pub p_size: usize,
    pub delta: f64,
    pub alpha: f64,
    pub r: u32,
    pub interval_len: u32,
    pub a0_bounds: Vec<u64>,
    pub a0_size: usize,
    pub a0_proper: bool,
    pub hull_size: usize,
    pub shift: u32,
    pub a0_zero_excluded: bool,
    pub sum_abs: f64,
    pub verdicts: Vec<VerdictOut>,
    pub nu_second_moment_ratio: f64,
    pub shifted_row_mass_ratio: f64,
    pub final_bound_ratio: f64,
    pub tau_choice: f64,
    pub tau_empirical: f64,
}

impl From<ProofTrace> for TraceReport {
    fn from(t: ProofTrace) -> Self {
        TraceReport {
            p: t.p,
            order: t.order,
            a_size: t.a_size,
            b_size: t.b_size,
            k: t.k,
            l: t.l,
            dim: t.dim,
            p_size: t.p_size,
            delta: t.delta,
            alpha: t.alpha,
            r: t.r,
            interval_len: t.interval_len,
            a0_bounds: t.a0_bounds,
            a0_size: t.a0_size,
            a0_proper: t.a0_proper,
            hull_size: t.hull_size,
            shift: t.shift,
            a0_zero_excluded: t.a0_zero_excluded,
            sum_abs: t.sum_abs,
            verdicts: t
                .verdicts
                .into_iter()
                .map(|v| VerdictOut {
                    id: v.id,
                    claim: v.claim,
                    status: v.status.as_str(),
                    lhs: v.lhs,
                    rhs: v.rhs,
                    note: v.note,
                })
                .collect(),
            nu_second_moment_ratio: t.ratios.nu_second_moment,
            shifted_row_mass_ratio: t.ratios.shifted_row_mass,
            final_bound_ratio: t.ratios.final_bound,
            tau_choice: t.ratios.tau_choice,
            tau_empirical: t.ratios.tau_empirical,
        }
    }
}

/// Runs the proof trace; `P` must be given as a progression and `A`
/// defaults to all of `P`.
pub fn trace(
    p_spec: &SetSpec,
    a: Option<&SetSpec>,
    b: &SetSpec,
    d: u32,
    c_of_k: f64,
) -> Result<TraceReport> {
    let field = PrimeField::new(p_spec.p)?;
    let gap = match &p_spec.gap {
        Some(g) => g.build(&field)?,
        None => {
            return Err(crate::error::LabError::Config(
                "the containing progression must be given as \"gap\"".into(),
            ))
        }
    };
    let a = match a {
        Some(a) => a.to_set(&field)?,
        None => gap.enumerate()?.set,
    };
    let b = b.to_set(&field)?;
    Ok(proof_trace(&gap, &a, &b, d, c_of_k)?.into())
}

impl Report for TraceReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["id", "status", "lhs", "rhs", "note", "claim"]);
        for v in &self.verdicts {
            t.push(vec![
                v.id.to_owned(),
                v.status.to_owned(),
                fmt_float(v.lhs),
                fmt_float(v.rhs),
                v.note.to_owned(),
                v.claim.to_owned(),
            ]);
        }
        t
    }
}
