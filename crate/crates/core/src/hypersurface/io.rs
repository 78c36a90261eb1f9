//! Structured-text model files.
//!
//! ```text
//! # umbilic coefficient
//! A_re = 1.0
//! A_im = 0.5
//! [h]
//! a,b,m,re,im
//! 3,3,0,0.7,0
//! [g]
//! 4,3,0,0.1,0
//! 3,4,0,0.1,0
//! ```
//!
//! Rows are coefficients of `z^a z̄^b s^m`. Both members of every conjugate
//! pair must be listed (`(a,b,m)` with `(b,a,m)` carrying the conjugate).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::PreparedDefiningFunction;
use crate::error::{Error, Result};
use crate::series::HermitianSeries;

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    H,
    G,
}

type Rows = BTreeMap<(u32, u32, u32), (usize, Complex64)>;

pub fn parse_model(text: &str) -> Result<PreparedDefiningFunction> {
    let mut section = Section::Header;
    let mut a_re = None;
    let mut a_im = None;
    let mut h_rows = Rows::new();
    let mut g_rows = Rows::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        last_line = no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.eq_ignore_ascii_case("a,b,m,re,im") {
            continue;
        }
        match line {
            "[h]" => {
                section = Section::H;
                continue;
            }
            "[g]" => {
                section = Section::G;
                continue;
            }
            _ if line.starts_with('[') => {
                return Err(Error::parse(no, format!("unknown section `{line}`")));
            }
            _ => {}
        }
        if section == Section::Header {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(no, format!("expected `key = value`, got `{line}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(no, format!("`{}` is not a number", value.trim())))?;
            match key.trim() {
                "A_re" => a_re = Some(value),
                "A_im" => a_im = Some(value),
                other => return Err(Error::parse(no, format!("unknown key `{other}`"))),
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(Error::parse(no, "expected 5 fields a,b,m,re,im"));
        }
        let int = |s: &str| {
            s.parse::<u32>()
                .map_err(|_| Error::parse(no, format!("`{s}` is not a nonnegative integer")))
        };
        let float = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::parse(no, format!("`{s}` is not a number")))
        };
        let (a, b, m) = (int(fields[0])?, int(fields[1])?, int(fields[2])?);
        let c = Complex64::new(float(fields[3])?, float(fields[4])?);
        let rows = if section == Section::H {
            if m == 0 && a + b < 6 {
                return Err(Error::parse(
                    no,
                    format!("h(z, zbar, 0) must be O(|z|^6); got z^{a} zbar^{b}"),
                ));
            }
            &mut h_rows
        } else {
            if m != 0 {
                return Err(Error::parse(no, "g does not depend on Im w (m must be 0)"));
            }
            if a + b < 7 {
                return Err(Error::parse(
                    no,
                    format!("g must be O(|z|^7); got z^{a} zbar^{b}"),
                ));
            }
            &mut g_rows
        };
        if rows.insert((a, b, m), (no, c)).is_some() {
            return Err(Error::parse(
                no,
                format!("duplicate coefficient ({a},{b},{m})"),
            ));
        }
    }

    let a_re = a_re.ok_or_else(|| Error::parse(last_line + 1, "missing A_re"))?;
    let a_im = a_im.ok_or_else(|| Error::parse(last_line + 1, "missing A_im"))?;
    let h = build_series(&h_rows, 6)?;
    let g = build_series(&g_rows, 7)?;
    PreparedDefiningFunction::new(Complex64::new(a_re, a_im), h, g)
}

fn build_series(rows: &Rows, min_degree: u32) -> Result<HermitianSeries> {
    let mut s = HermitianSeries::new(min_degree);
    for (&(a, b, m), &(no, c)) in rows {
        match rows.get(&(b, a, m)) {
            Some(&(_, partner)) if (partner - c.conj()).norm() <= 1e-12 * (1.0 + c.norm()) => {}
            Some(_) => {
                return Err(Error::parse(
                    no,
                    format!("({a},{b},{m}) and ({b},{a},{m}) are not conjugate"),
                ));
            }
            None => {
                return Err(Error::parse(
                    no,
                    format!("missing conjugate partner ({b},{a},{m})"),
                ));
            }
        }
        s.add_term(a, b, m, c);
    }
    Ok(s)
}

/// Serialises a model in the format read by [`parse_model`].
pub fn write_model(f: &PreparedDefiningFunction) -> String {
    let mut out = String::new();
    let a = f.umbilic();
    writeln!(out, "A_re = {:e}\nA_im = {:e}", a.re, a.im).expect("write to string");
    for (name, s) in [("h", f.h()), ("g", f.g())] {
        writeln!(out, "[{name}]\na,b,m,re,im").expect("write to string");
        for ((a, b, m), c) in s.terms() {
            writeln!(out, "{a},{b},{m},{:e},{:e}", c.re, c.im).expect("write to string");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODEL: &str = "\
# test model
A_re = 1.0
A_im = 0.5
[h]
a,b,m,re,im
3,3,0,0.7,0
1,0,1,0.2,0.1
0,1,1,0.2,-0.1
[g]
4,3,0,0.1,0.05
3,4,0,0.1,-0.05
";

    #[test]
    fn parses_and_roundtrips() {
        let f = parse_model(MODEL).unwrap();
        assert_eq!(f.umbilic(), Complex64::new(1.0, 0.5));
        assert_eq!(f.h().get(1, 0, 1), Complex64::new(0.2, 0.1));
        assert_eq!(f.g().get(3, 4, 0), Complex64::new(0.1, -0.05));
        assert_eq!(parse_model(&write_model(&f)).unwrap(), f);
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn rejects_low_order_g_with_line() {
        let bad = MODEL.replace("4,3,0,0.1,0.05\n3,4,0,0.1,-0.05", "3,3,0,1,0");
        assert_eq!(line_of(parse_model(&bad).unwrap_err()), 10);
    }

    #[test]
    fn rejects_low_order_h_with_line() {
        let bad = MODEL.replace("3,3,0,0.7,0", "2,2,0,0.7,0");
        assert_eq!(line_of(parse_model(&bad).unwrap_err()), 6);
    }

    #[test]
    fn rejects_missing_partner_and_garbage() {
        let bad = MODEL.replace("3,4,0,0.1,-0.05\n", "");
        assert_eq!(line_of(parse_model(&bad).unwrap_err()), 10);
        let bad = MODEL.replace("A_im = 0.5", "A_im = half");
        assert_eq!(line_of(parse_model(&bad).unwrap_err()), 3);
        assert!(matches!(
            parse_model("A_re = 1\n"),
            Err(Error::Parse { .. })
        ));
    }
}
