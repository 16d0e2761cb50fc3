//! Fixed-precision rendering of floats and complex matrices.
//!
//! Complex matrices are printed in the system grammar (`[[0.5-2*i,1]]`), so
//! anything the tool prints can be fed back in as a constant system.

use num_complex::Complex64;
use pvd_core::linalg::CMatrix;

pub const SIGNIFICANT_DIGITS: usize = 15;

/// `x` with 15 significant digits, trailing zeros removed.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if x < 0.0 { "-" } else { "" };
    let all: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let digits = all.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if !(-6..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
    if exp < 0 {
        return format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize));
    }
    let int_len = exp as usize + 1;
    if digits.len() <= int_len {
        format!("{sign}{digits}{}", "0".repeat(int_len - digits.len()))
    } else {
        format!("{sign}{}.{}", &digits[..int_len], &digits[int_len..])
    }
}

pub fn complex(z: Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => real(z.re),
        (true, false) => imaginary(z.im),
        (false, false) => {
            let im = imaginary(z.im);
            if im.starts_with('-') {
                format!("{}{im}", real(z.re))
            } else {
                format!("{}+{im}", real(z.re))
            }
        }
    }
}

fn imaginary(y: f64) -> String {
    match y {
        1.0 => "i".into(),
        -1.0 => "-i".into(),
        _ => format!("{}*i", real(y)),
    }
}

pub fn matrix(m: &CMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| format!("[{}]", m.row(r).iter().map(|z| complex(*z)).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

/// Residuals and error estimates.
pub fn norm(x: f64) -> String {
    format!("{x:.3e}")
}
