//! CSV writers with a header row and 17 significant digits, so a value read
//! back parses to the same f64.

use std::io::Write;

use crate::analytic::{DensityCurve, GapCurve};
use crate::moments::MomentTable;
use crate::spectral::{ComplexSpectrum, FormFactorSeries};
use crate::Result;

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn row<W: Write>(w: &mut W, cells: &[String]) -> Result<()> {
    writeln!(w, "{}", cells.join(","))?;
    Ok(())
}

/// `re,im`
pub fn write_spectrum<W: Write>(w: &mut W, spec: &ComplexSpectrum) -> Result<()> {
    writeln!(w, "re,im")?;
    for z in &spec.values {
        row(w, &[fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    Ok(())
}

/// `t,value,stderr,n`
pub fn write_series<W: Write>(w: &mut W, s: &FormFactorSeries) -> Result<()> {
    writeln!(w, "t,value,stderr,n")?;
    for k in 0..s.times.len() {
        row(w, &[fmt_f64(s.times[k]), fmt_f64(s.values[k]), fmt_f64(s.stderr[k]), s.n_samples.to_string()])?;
    }
    Ok(())
}

/// `n,value,stderr,samples`, using the ⟨tr Sⁿ⟩/N² normalization.
pub fn write_moments<W: Write>(w: &mut W, m: &MomentTable) -> Result<()> {
    writeln!(w, "n,value,stderr,samples")?;
    for k in 0..m.orders.len() {
        row(w, &[m.orders[k].to_string(), fmt_f64(m.per_n2[k]), fmt_f64(m.per_n2_stderr[k]), m.samples.to_string()])?;
    }
    Ok(())
}

/// `x,value`
pub fn write_curve<W: Write>(w: &mut W, xs: &[f64], values: &[f64]) -> Result<()> {
    writeln!(w, "x,value")?;
    for (x, y) in xs.iter().zip(values) {
        row(w, &[fmt_f64(*x), fmt_f64(*y)])?;
    }
    Ok(())
}

pub fn write_density<W: Write>(w: &mut W, d: &DensityCurve) -> Result<()> {
    write_curve(w, &d.grid, &d.values)
}

pub fn write_gap_curve<W: Write>(w: &mut W, g: &GapCurve) -> Result<()> {
    write_curve(w, &g.gammas, &g.x_min)
}

/// Arbitrary named columns of equal length.
pub fn write_columns<W: Write>(w: &mut W, names: &[&str], cols: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "{}", names.join(","))?;
    let len = cols.iter().map(Vec::len).min().unwrap_or(0);
    for k in 0..len {
        row(w, &cols.iter().map(|c| fmt_f64(c[k])).collect::<Vec<_>>())?;
    }
    Ok(())
}

/// `param,estimate,stderr`
pub fn write_fit<W: Write>(w: &mut W, params: &[(&str, f64, f64)]) -> Result<()> {
    writeln!(w, "param,estimate,stderr")?;
    for (name, est, se) in params {
        row(w, &[name.to_string(), fmt_f64(*est), fmt_f64(*se)])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn values_round_trip() {
        for &x in &[0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn spectrum_layout() {
        let s = ComplexSpectrum::new(1, vec![C64::new(-1.0, 0.5)]);
        let mut buf = Vec::new();
        write_spectrum(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "re,im\n-1.0000000000000000e0,5.0000000000000000e-1\n");
    }
}
