use std::io::Write;
use std::time::Instant;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qec_core::cheb_poly::{partial_chebyshev, phi, r_poly};
use qec_core::graphs::{parse_expr, FamilyKind, GraphExpr};
use qec_core::{compute_lambda_sets, fan, qec_join_empty, qec_oracle, QecError, Result};

use crate::record::{Method, OutputRecord, TableRow};
use crate::with_pool;

/// `(m, G)` when the expression is `join(empty:m, G)` or `join(G, empty:m)`.
pub fn empty_join_shape(e: &GraphExpr) -> Option<(usize, &GraphExpr)> {
    match e {
        GraphExpr::Join(a, b) => a
            .as_empty()
            .map(|m| (m, b.as_ref()))
            .or_else(|| b.as_empty().map(|m| (m, a.as_ref()))),
        _ => None,
    }
}

/// `n` when the expression is a fan `K1 + P_n`.
pub fn fan_shape(e: &GraphExpr) -> Option<usize> {
    match empty_join_shape(e)? {
        (1, GraphExpr::Family(FamilyKind::Path, n)) => Some(*n),
        _ => None,
    }
}

/// The solver `auto` resolves to for an expression.
pub fn resolve_method(e: &GraphExpr) -> Result<Method> {
    if fan_shape(e).is_some() {
        return Ok(Method::Fan);
    }
    if let Some((m, g)) = empty_join_shape(e) {
        if m >= 1 && !(m == 1 && g.build()?.is_complete()) {
            return Ok(Method::Join);
        }
    }
    Ok(Method::Oracle)
}

/// Parses and solves one expression.
pub fn cmd_qec(text: &str, method: Method) -> Result<OutputRecord> {
    let expr = parse_expr(text)?;
    let method = match method {
        Method::Auto => resolve_method(&expr)?,
        m => m,
    };
    let start = Instant::now();
    let (result, sets) = match method {
        Method::Oracle => (qec_oracle(&expr.build()?)?, None),
        Method::Join => {
            let (m, g) = empty_join_shape(&expr).ok_or_else(|| {
                QecError::InvalidArgument(format!("`{expr}` is not of the form join(empty:m, G)"))
            })?;
            let g = g.build()?;
            (qec_join_empty(m, &g)?, Some(compute_lambda_sets(m, &g)?))
        }
        Method::Fan => {
            let n = fan_shape(&expr).ok_or_else(|| {
                QecError::InvalidArgument(format!("`{expr}` is not of the form join(empty:1, path:n)"))
            })?;
            let sets = if n >= 3 { Some(fan::fan_lambda_sets(n)?) } else { None };
            (fan::qec_fan(n)?, sets)
        }
        Method::Auto => unreachable!("auto is resolved above"),
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(OutputRecord::new(
        expr.to_string(),
        method,
        result.value,
        result.alpha,
        result.source,
        sets.as_ref(),
        ms,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    FanQec,
    Phi,
    Rn,
    PartialCheb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn table_row(kind: TableKind, n: usize) -> Result<TableRow> {
    Ok(match kind {
        TableKind::FanQec => {
            let r = fan::qec_fan(n)?;
            TableRow::fan(n, r.value, r.alpha, r.source)
        }
        TableKind::Phi => TableRow::poly(n, phi(n)?),
        TableKind::Rn => TableRow::poly(n, r_poly(n)?),
        TableKind::PartialCheb => {
            let (ue, uo) = partial_chebyshev(n);
            TableRow::Partial { n, ue, uo }
        }
    })
}

/// Rows `1..=n_max`, computed in parallel and returned in order.
pub fn table_rows(kind: TableKind, n_max: usize) -> Result<Vec<TableRow>> {
    if n_max == 0 {
        return Err(QecError::InvalidArgument("n_max must be at least 1".into()));
    }
    with_pool(|| {
        (1..=n_max)
            .into_par_iter()
            .map(|n| table_row(kind, n))
            .collect()
    })
}

pub fn write_table(rows: &[TableRow], format: Format, out: impl Write) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if let Some(first) = rows.first() {
                w.write_record(first.header())?;
            }
            for row in rows {
                w.write_record(row.csv_fields())?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
