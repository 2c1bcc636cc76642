//! Line-oriented LP text format.
//!
//! ```text
//! # comment
//! variables: a b0p b0pp
//! minimize: 9 a - 47 b0p + 1/2
//! xi: 10 a - 56 b0p = 0
//! pos: a >= 0
//! ```
//!
//! Coefficients are integers or `p/q`; `3*a` and `3 a` are both accepted.
//! Every constraint has a name and exactly one relation.

use num_traits::{One, Signed, Zero};

use super::{Constraint, ExactLP, Sense};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Splits an expression into signed terms, keeping `p/q` intact.
fn tokens(expr: &str) -> Vec<String> {
    let spaced = expr.replace('*', " ").replace('+', " + ").replace('-', " - ");
    spaced.split_whitespace().map(str::to_string).collect()
}

fn is_number(t: &str) -> bool {
    t.chars().next().is_some_and(|c| c.is_ascii_digit())
}

/// Parses `expr` into a coefficient vector and a constant.
fn linear(lp: &ExactLP, expr: &str, line: usize) -> Result<(Vec<Q>, Q)> {
    let mut coeffs = vec![Q::zero(); lp.num_vars()];
    let mut constant = Q::zero();
    let toks = tokens(expr);
    if toks.is_empty() {
        return Err(perr(line, "empty expression"));
    }
    let mut i = 0;
    let mut first = true;
    while i < toks.len() {
        let mut sign = Q::one();
        let mut saw_sign = false;
        while i < toks.len() && (toks[i] == "+" || toks[i] == "-") {
            if toks[i] == "-" {
                sign = -sign;
            }
            saw_sign = true;
            i += 1;
        }
        if !first && !saw_sign {
            return Err(perr(line, format!("missing operator before `{}`", toks[i])));
        }
        first = false;
        let Some(t) = toks.get(i) else {
            return Err(perr(line, "dangling sign"));
        };
        let mut coef = sign;
        if is_number(t) {
            coef *= parse_q(t).map_err(|e| perr(line, e.to_string()))?;
            i += 1;
            match toks.get(i) {
                Some(v) if !is_number(v) && v != "+" && v != "-" => {}
                _ => {
                    constant += coef;
                    continue;
                }
            }
        }
        let name = &toks[i];
        let k = lp
            .var_index(name)
            .map_err(|_| perr(line, format!("undeclared variable `{name}`")))?;
        coeffs[k] += coef;
        i += 1;
    }
    Ok((coeffs, constant))
}

fn split_relation(body: &str) -> Option<(&str, Sense, &str)> {
    for (sym, sense) in [(">=", Sense::Ge), ("<=", Sense::Le), ("=", Sense::Eq)] {
        if let Some(pos) = body.find(sym) {
            return Some((&body[..pos], sense, &body[pos + sym.len()..]));
        }
    }
    None
}

/// Parses the text format. Constants may appear on either side of a row.
pub fn parse_lp(text: &str) -> Result<ExactLP> {
    let mut lp: Option<ExactLP> = None;
    let mut objective_seen = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (head, body) = content
            .split_once(':')
            .ok_or_else(|| perr(line, "expected `name: ...`"))?;
        let head = head.trim();
        let body = body.trim();
        match (head, lp.as_mut()) {
            ("variables", None) => {
                let vars: Vec<&str> = body.split_whitespace().collect();
                if vars.is_empty() {
                    return Err(perr(line, "no variables declared"));
                }
                let new = ExactLP::new(&vars);
                new.validate().map_err(|e| perr(line, e.to_string()))?;
                lp = Some(new);
            }
            ("variables", Some(_)) => return Err(perr(line, "variables declared twice")),
            (_, None) => return Err(perr(line, "`variables:` must come first")),
            ("minimize", Some(p)) => {
                if objective_seen {
                    return Err(perr(line, "objective declared twice"));
                }
                let (c, c0) = linear(p, body, line)?;
                p.objective = c;
                p.objective_constant = c0;
                objective_seen = true;
            }
            (name, Some(p)) => {
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(perr(line, format!("invalid constraint name `{name}`")));
                }
                let (lhs, sense, rhs) =
                    split_relation(body).ok_or_else(|| perr(line, "missing relation"))?;
                let (a, a0) = linear(p, lhs, line)?;
                let (b, b0) = linear(p, rhs, line)?;
                let coeffs = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                p.push_constraint(Constraint {
                    name: name.to_string(),
                    coeffs,
                    sense,
                    rhs: b0 - a0,
                })
                .map_err(|e| perr(line, e.to_string()))?;
            }
        }
    }
    lp.ok_or_else(|| perr(0, "no `variables:` line"))
}

fn write_expr(variables: &[String], coeffs: &[Q], constant: &Q) -> String {
    let mut out = String::new();
    let terms = coeffs
        .iter()
        .zip(variables)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, v)| (c.clone(), Some(v.as_str())))
        .chain((!constant.is_zero()).then(|| (constant.clone(), None)));
    for (c, v) in terms {
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push_str("- ");
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        match v {
            Some(v) if c.abs().is_one() => out.push_str(v),
            Some(v) => out.push_str(&format!("{} {v}", fmt_q(&c.abs()))),
            None => out.push_str(&fmt_q(&c.abs())),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Serializes `lp` so that [`parse_lp`] reproduces it exactly.
pub fn write_lp(lp: &ExactLP) -> String {
    let mut out = format!("variables: {}\n", lp.variables.join(" "));
    out.push_str(&format!(
        "minimize: {}\n",
        write_expr(&lp.variables, &lp.objective, &lp.objective_constant)
    ));
    for c in &lp.constraints {
        out.push_str(&format!(
            "{}: {} {} {}\n",
            c.name,
            write_expr(&lp.variables, &c.coeffs, &Q::zero()),
            c.sense.symbol(),
            fmt_q(&c.rhs)
        ));
    }
    out
}
