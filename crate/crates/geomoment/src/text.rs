//! Plain-text rendering in the compact notation `η200`, `a011^2`.

use std::fmt::Write;

use geomoment_core::{Polynomial, Variable};
use num_traits::{One, Signed};

fn compact_index(j: u32, k: u32, l: u32) -> String {
    if j < 10 && k < 10 && l < 10 {
        format!("{j}{k}{l}")
    } else {
        format!("_{{{j},{k},{l}}}")
    }
}

pub fn variable(v: &Variable) -> String {
    match v {
        Variable::Moment(m) => format!("a{}", compact_index(m.j, m.k, m.l)),
        Variable::Eta(m) => format!("η{}", compact_index(m.j, m.k, m.l)),
        Variable::Template(..) => v.to_string(),
    }
}

/// Terms in canonical order, leading term first.
pub fn polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (m, c)) in p.terms().enumerate() {
        let negative = c.is_real() && c.re().is_negative();
        let shown = if negative { -c } else { c.clone() };
        out.push_str(match (n, negative) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let factors: Vec<String> = m
            .factors()
            .iter()
            .map(|(v, e)| if *e == 1 { variable(v) } else { format!("{}^{e}", variable(v)) })
            .collect();
        if factors.is_empty() {
            write!(out, "{shown}").expect("string write");
        } else if shown.is_one() {
            out.push_str(&factors.join(" "));
        } else {
            write!(out, "{shown} {}", factors.join(" ")).expect("string write");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use geomoment_core::parse::parse_polynomial;

    #[test]
    fn compact_names() {
        let p = parse_polynomial("eta_2_0_0^2 - 3*eta_0_1_1*eta_1_0_1 + 1/2*a_10_0_0 - 1").unwrap();
        assert_eq!(polynomial(&p), "-3 η011 η101 + η200^2 + 1/2 a_{10,0,0} - 1");
    }
}
