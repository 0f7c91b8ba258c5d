use std::io::Write;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::spectral_polynomial_in_c;
use crate::error::{Error, Result};
use crate::exactnum::{dyadic_from_f64, int, real_roots, to_f64, CharPoly, Rational, Var};
use crate::report::fmt_sig;

/// Isolation width for roots of `q(u)`, `p(λ) = q(λ²)`; tight because
/// `|E| = √u` amplifies errors near `u = 0`.
const U_TOL: f64 = 1e-18;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: f64,
    /// All `2n` energies, ascending.
    pub energies: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub n: u32,
    pub rows: Vec<SweepRow>,
}

/// Roots `u` of `q` with `p(λ) = q(λ²)`, ascending and repeated by
/// multiplicity.
fn squared_levels(poly: &CharPoly, c: &Rational) -> Result<Vec<f64>> {
    let p = poly.at(c);
    let q = p.even_part_in(Var::U);
    let mut out = Vec::with_capacity(q.degree().unwrap_or(0));
    for r in real_roots(&q, U_TOL)? {
        let u = match &r.exact {
            Some(e) if e.is_zero() => 0.0,
            Some(e) if e.is_negative() => return Err(complex_level(c)),
            _ if r.value < -1e-12 => return Err(complex_level(c)),
            _ => r.value.max(0.0),
        };
        out.extend(std::iter::repeat_n(u, r.multiplicity));
    }
    if out.len() != q.degree().unwrap_or(0) {
        return Err(complex_level(c));
    }
    Ok(out)
}

fn complex_level(c: &Rational) -> Error {
    Error::InvalidParams(format!("non-real level at c = {}", crate::exactnum::fmt_rational(c)))
}

fn energies_from(us: &[f64]) -> Vec<f64> {
    let mut e: Vec<f64> = us.iter().flat_map(|u| [-u.sqrt(), u.sqrt()]).collect();
    e.sort_by(f64::total_cmp);
    e
}

/// `|E|` branches, ascending: one per root of `q`.
pub fn modulus_branches(row: &SweepRow) -> Vec<f64> {
    let half = row.energies.len() / 2;
    let mut m: Vec<f64> = row.energies[half..].to_vec();
    m.sort_by(f64::total_cmp);
    m
}

/// `steps` equally spaced couplings from `c_min` to `c_max` inclusive
/// (exact rational grid), each with its `2n` ascending energies.
pub fn sweep(n: u32, c_min: &Rational, c_max: &Rational, steps: usize) -> Result<SweepTable> {
    if steps < 2 {
        return Err(Error::InvalidParams(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    if c_min >= c_max {
        return Err(Error::InvalidInterval {
            lo: crate::exactnum::fmt_rational(c_min),
            hi: crate::exactnum::fmt_rational(c_max),
        });
    }
    let poly = spectral_polynomial_in_c(n)?;
    let step = (c_max - c_min) / int(steps as i64 - 1);
    let rows = (0..steps)
        .into_par_iter()
        .map(|i| {
            let c = c_min + &step * int(i as i64);
            Ok(SweepRow {
                c: to_f64(&c),
                energies: energies_from(&squared_levels(&poly, &c)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { n, rows })
}

/// CSV with header `c,E_1,...,E_{2n}`, or `c,absE_1,...,absE_n` when
/// `modulus` is set; 12 significant digits, LF line endings.
pub fn write_csv<W: Write>(table: &SweepTable, mut w: W, modulus: bool) -> std::io::Result<()> {
    let n = table.n as usize;
    let header: Vec<String> = if modulus {
        (1..=n).map(|i| format!("absE_{i}")).collect()
    } else {
        (1..=2 * n).map(|i| format!("E_{i}")).collect()
    };
    write!(w, "c,{}\n", header.join(","))?;
    for row in &table.rows {
        let values = if modulus { modulus_branches(row) } else { row.energies.clone() };
        let cells: Vec<String> = values.iter().map(|v| fmt_sig(*v, 12)).collect();
        write!(w, "{},{}\n", fmt_sig(row.c, 12), cells.join(","))?;
    }
    Ok(())
}

/// Smallest distance between neighbouring levels at `c`, with their
/// 1-based indices in the ascending list of all `2n` energies. The pair
/// `(n, n+1)` is `±E` of the lowest `|E|` branch, which collide when that
/// branch touches zero.
pub fn level_gap(poly: &CharPoly, c: f64) -> Result<(f64, (usize, usize))> {
    let e = energies_from(&squared_levels(poly, &dyadic_from_f64(c, 40))?);
    let mut best = (f64::INFINITY, (0, 0));
    for i in 1..e.len() {
        let g = e[i] - e[i - 1];
        if g < best.0 {
            best = (g, (i, i + 1));
        }
    }
    Ok(best)
}

/// Where two levels come closest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Degeneracy {
    pub n: u32,
    pub c_star: f64,
    pub gap: f64,
    /// 1-based indices of the colliding levels in ascending energy order.
    pub levels: (usize, usize),
}

const GRID: usize = 201;

/// Grid search over `[c_min, c_max]` for the minimum of [`level_gap`],
/// refined by golden-section search. A minimum on the bracket's edge is
/// reported as [`Error::NoInteriorMinimum`].
pub fn find_degeneracy(n: u32, c_min: f64, c_max: f64) -> Result<Degeneracy> {
    if !(c_min < c_max) || !c_min.is_finite() || !c_max.is_finite() {
        return Err(Error::InvalidInterval {
            lo: c_min.to_string(),
            hi: c_max.to_string(),
        });
    }
    let poly = spectral_polynomial_in_c(n)?;
    let h = (c_max - c_min) / (GRID - 1) as f64;
    let gaps = (0..GRID)
        .into_par_iter()
        .map(|i| level_gap(&poly, c_min + h * i as f64).map(|g| g.0))
        .collect::<Result<Vec<_>>>()?;
    let (imin, _) = gaps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    if imin == 0 || imin == GRID - 1 {
        return Err(Error::NoInteriorMinimum { lo: c_min, hi: c_max });
    }
    let f = |c: f64| level_gap(&poly, c).map(|g| g.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (c_min + h * (imin - 1) as f64, c_min + h * (imin + 1) as f64);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > 1e-10 {
        if f1 <= f2 {
            b = x2;
            (x2, f2) = (x1, f1);
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            (x1, f1) = (x2, f2);
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
    }
    let c_star = (a + b) / 2.0;
    let (gap, levels) = level_gap(&poly, c_star)?;
    Ok(Degeneracy { n, c_star, gap, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn closed_form_n2(c: f64) -> [f64; 2] {
        let s = 4.0 * (64.0 + 2.0 * c * c).sqrt();
        [(32.0 + c * c - s).sqrt(), (32.0 + c * c + s).sqrt()]
    }

    #[test]
    fn sweep_endpoints_match_closed_form() {
        let t = sweep(2, &int(0), &int(3), 7).unwrap();
        assert_eq!(t.rows.len(), 7);
        for row in [&t.rows[0], &t.rows[3], &t.rows[6]] {
            let [lo, hi] = closed_form_n2(row.c);
            let want = [-hi, -lo, lo, hi];
            for (g, w) in row.energies.iter().zip(want) {
                assert!((g - w).abs() < 1e-10, "{row:?}");
            }
        }
        assert_eq!(t.rows[0].energies, vec![-8.0, 0.0, 0.0, 8.0]);
        // the double level at zero splits once c > 0
        assert!(t.rows[1].energies[2] - t.rows[1].energies[1] > 0.1);
    }

    #[test]
    fn csv_layout() {
        let t = sweep(2, &int(0), &rat(1, 2), 2).unwrap();
        let mut buf = Vec::new();
        write_csv(&t, &mut buf, false).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.split('\n').collect();
        assert_eq!(lines[0], "c,E_1,E_2,E_3,E_4");
        assert_eq!(lines[1], "0,-8,0,0,8");
        assert_eq!(lines.len(), 4);
        assert!(!s.contains('\r'));
        let mut buf = Vec::new();
        write_csv(&t, &mut buf, true).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("c,absE_1,absE_2\n0,0,8\n"));
    }

    #[test]
    fn n2_has_no_interior_gap_minimum() {
        assert!(matches!(find_degeneracy(2, 0.5, 10.0), Err(Error::NoInteriorMinimum { .. })));
    }

    #[test]
    fn n3_levels_collide_at_zero() {
        let d = find_degeneracy(3, 0.0, 10.0).unwrap();
        assert!((4.0..=6.0).contains(&d.c_star), "{d:?}");
        assert!(d.gap < 1e-6, "{d:?}");
        assert_eq!(d.levels, (3, 4));
        // c*² is a root of the constant coefficient u³ - 8u² - 1344u + 23040
        let u = d.c_star * d.c_star;
        assert!((u * u * u - 8.0 * u * u - 1344.0 * u + 23040.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(sweep(2, &int(0), &int(1), 1).is_err());
        assert!(sweep(2, &int(1), &int(0), 5).is_err());
        assert!(find_degeneracy(3, 2.0, 1.0).is_err());
    }
}
