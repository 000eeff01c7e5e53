//! Tables of closed-form bounds.

use std::io::Write;

use serde::Serialize;

use crate::category::{category_ratio_bound, partial_sum_bound};
use crate::error::{Error, Result};
use crate::lowerbounds::advice_lb_per_request;

#[derive(Debug, Clone, PartialEq)]
pub enum BoundKind {
    /// `k` from `k_min` to `k_max`.
    CategoryRatio { k_min: u32, k_max: u32 },
    /// `steps + 1` evenly spaced `ρ` from the smallest valid value up to
    /// `rho_max`.
    AdviceLb { c: usize, rho_max: f64, steps: usize },
    /// `S_1 .. S_{2^k}`.
    PartialSums { k: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub columns: Vec<(String, f64)>,
}

impl BoundRow {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

fn row(cols: &[(&str, f64)]) -> BoundRow {
    BoundRow { columns: cols.iter().map(|&(n, v)| (n.to_string(), v)).collect() }
}

pub fn bound_table(kind: &BoundKind) -> Result<Vec<BoundRow>> {
    match *kind {
        BoundKind::CategoryRatio { k_min, k_max } => {
            if k_min == 0 || k_min > k_max || k_max > 30 {
                return Err(Error::InvalidParameter(format!("bad k range {k_min}..={k_max}")));
            }
            let limit = 1.0 - (-1f64).exp();
            Ok((k_min..=k_max)
                .map(|k| {
                    let b = category_ratio_bound(k);
                    row(&[("k", k.into()), ("bound", b), ("gap_to_limit", limit - b)])
                })
                .collect())
        }
        BoundKind::AdviceLb { c, rho_max, steps } => {
            let q: f64 = (1..=c as u64).product::<u64>() as f64;
            let low = 1.0 - 1.0 / c as f64 + 1.0 / q;
            if steps == 0 || !(rho_max > low && rho_max < 1.0) {
                return Err(Error::InvalidParameter(format!("need steps >= 1 and rho_max in ({low}, 1)")));
            }
            (0..=steps)
                .map(|s| {
                    let rho = low + (rho_max - low) * s as f64 / steps as f64;
                    let bits = advice_lb_per_request(c, rho)?;
                    Ok(row(&[
                        ("c", c as f64),
                        ("rho", rho),
                        ("alpha", 1.0 - (1.0 - rho) * c as f64),
                        ("bits_per_request", bits),
                    ]))
                })
                .collect()
        }
        BoundKind::PartialSums { k } => {
            if k == 0 || k > 20 {
                return Err(Error::InvalidParameter(format!("k must be in 1..=20, got {k}")));
            }
            let q = (1u64 << k) as f64;
            let r = q / (q + 1.0);
            Ok((1..=1u32 << k)
                .map(|i| {
                    let s = partial_sum_bound(k, i);
                    let prev = if i == 1 { 0.0 } else { partial_sum_bound(k, i - 1) };
                    // S_i = r·(S_{i-1} + 1): x_i at its smallest given 1 − x_i ≤ S_i / 2^k
                    row(&[("k", k.into()), ("i", i.into()), ("s_i", s), ("residual", s - r * (prev + 1.0))])
                })
                .collect())
        }
    }
}

pub fn write_bound_csv<W: Write>(rows: &[BoundRow], w: W) -> Result<()> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut out = csv::Writer::from_writer(w);
    if let Some(first) = rows.first() {
        out.write_record(first.columns.iter().map(|(n, _)| n.as_str())).map_err(io)?;
    }
    for r in rows {
        out.write_record(r.columns.iter().map(|(_, v)| v.to_string())).map_err(io)?;
    }
    out.flush().map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn category_table_approaches_the_limit() {
        let rows = bound_table(&BoundKind::CategoryRatio { k_min: 1, k_max: 10 }).unwrap();
        assert_eq!(rows.len(), 10);
        assert!((rows[0].get("bound").unwrap() - 5.0 / 9.0).abs() < 1e-15);
        assert!(rows[9].get("gap_to_limit").unwrap() < 2e-4);
    }

    #[test]
    fn advice_table_is_monotone() {
        let rows = bound_table(&BoundKind::AdviceLb { c: 3, rho_max: 0.999, steps: 50 }).unwrap();
        let col: Vec<f64> = rows.iter().map(|r| r.get("bits_per_request").unwrap()).collect();
        assert!(col.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }

    #[test]
    fn partial_sum_residuals_vanish() {
        for r in bound_table(&BoundKind::PartialSums { k: 2 }).unwrap() {
            assert!(r.get("residual").unwrap().abs() < 1e-12);
        }
        let mut out = Vec::new();
        write_bound_csv(&bound_table(&BoundKind::PartialSums { k: 1 }).unwrap(), &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("k,i,s_i,residual\n1,1,"));
    }
}
