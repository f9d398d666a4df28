//! Plain-text formats for quivers, series and quivers with potential.
//!
//! ```text
//! vertices: 1 2 3
//! a: 1 -> 2
//! b: 2 -> 3
//! c: 3 -> 1
//! potential: 1 * c.b.a - 1/2 * c.b.a.c.b.a
//! ```
//!
//! Series terms are `coeff * a1.a2.a3`, leftmost arrow first, joined by
//! ` + ` or ` - `. The idempotent at `v` is `e{v}` and zero is `0`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quiver::{Arrow, Quiver, Vertex};
use crate::series::{Path, Series};

pub fn format_path(q: &Quiver, p: &Path) -> String {
    if p.is_idempotent() {
        return format!("e{{{}}}", p.head());
    }
    p.arrows()
        .iter()
        .map(|&a| q.name(a))
        .collect::<Vec<_>>()
        .join(".")
}

/// Splits at `.` outside brackets.
fn split_names(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '.' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced brackets in `{s}`")));
        }
    }
    out.push(&s[start..]);
    if out.iter().any(|n| n.is_empty()) {
        return Err(Error::Parse(format!("empty arrow name in `{s}`")));
    }
    Ok(out)
}

pub fn parse_path(q: &Quiver, s: &str) -> Result<Path> {
    if let Some(v) = s.strip_prefix("e{").and_then(|r| r.strip_suffix('}')) {
        let v: Vertex = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad idempotent `{s}`")))?;
        if !q.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        return Ok(Path::idempotent(v));
    }
    let ids = split_names(s)?
        .into_iter()
        .map(|n| q.arrow_id(n))
        .collect::<Result<Vec<_>>>()?;
    Path::new(q, ids)
}

pub fn format_series<F: Field>(x: &Series<F>) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let q = x.quiver();
    let mut out = String::new();
    for (i, (p, c)) in x.iter().enumerate() {
        let neg = c.neg();
        // A coefficient printed with a leading '-' is written as a subtraction.
        let (sign, mag) = if c.to_string().starts_with('-') {
            ("-", neg)
        } else {
            ("+", c.clone())
        };
        if i == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push(' ');
            out.push_str(sign);
            out.push(' ');
        }
        out.push_str(&format!("{} * {}", mag, format_path(q, p)));
    }
    out
}

/// Parses the series format; accepts terms without a coefficient (`c.b.a`)
/// and glued signs (`-2 * a`, `-a`).
pub fn parse_series<F: Field>(q: &Arc<Quiver>, trunc: usize, s: &str) -> Result<Series<F>> {
    let mut out = Series::zero(q, trunc);
    let tokens: Vec<&str> = s.split_whitespace().collect();
    if tokens == ["0"] || tokens.is_empty() {
        return Ok(out);
    }
    let mut i = 0;
    let mut sign = F::one();
    let mut expect_term = true;
    while i < tokens.len() {
        let t = tokens[i];
        if t == "+" || t == "-" {
            if t == "-" {
                sign = sign.neg();
            }
            expect_term = true;
            i += 1;
            continue;
        }
        if !expect_term {
            return Err(Error::Parse(format!("expected `+` or `-` before `{t}`")));
        }
        let (coeff, path_tok) = if tokens.get(i + 1) == Some(&"*") {
            let c = F::parse(t)?;
            let p = tokens
                .get(i + 2)
                .ok_or_else(|| Error::Parse(format!("missing path after `{t} *`")))?;
            i += 3;
            (c, *p)
        } else {
            i += 1;
            (F::one(), t)
        };
        let (coeff, path_tok) = match path_tok.strip_prefix('-') {
            Some(rest) => (coeff.neg(), rest),
            None => (coeff, path_tok),
        };
        let path = parse_path(q, path_tok)?;
        if path.degree() > trunc {
            return Err(Error::Parse(format!(
                "term `{path_tok}` exceeds truncation degree {trunc}"
            )));
        }
        out.add_term(path, sign.mul(&coeff));
        sign = F::one();
        expect_term = false;
    }
    if expect_term {
        return Err(Error::Parse("dangling sign".into()));
    }
    Ok(out)
}

/// Parsed quiver-with-potential file, before validation as a QP.
pub struct QpText<F> {
    pub quiver: Arc<Quiver>,
    pub potential: Series<F>,
    pub trunc: Option<usize>,
}

/// Reads the QP text format. `default_trunc` applies when the file has no
/// `trunc:` line; an explicit `override_trunc` wins over both.
pub fn parse_qp_text<F: Field>(
    s: &str,
    default_trunc: usize,
    override_trunc: Option<usize>,
) -> Result<QpText<F>> {
    let mut vertices: Option<Vec<Vertex>> = None;
    let mut arrows = Vec::new();
    let mut potential_src: Option<String> = None;
    let mut file_trunc = None;
    for (lineno, raw) in s.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |m: &str| Error::Parse(format!("line {}: {m}", lineno + 1));
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| bad("expected `key: value`"))?;
        let key = key.trim();
        let rest = rest.trim();
        match key {
            "vertices" => {
                let vs = rest
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<Vertex>().map_err(|_| bad("bad vertex")))
                    .collect::<Result<Vec<_>>>()?;
                vertices = Some(vs);
            }
            "potential" => {
                let cur = potential_src.get_or_insert_with(String::new);
                if !cur.is_empty() {
                    cur.push_str(" + ");
                }
                cur.push_str(rest);
            }
            "trunc" => {
                file_trunc = Some(
                    rest.parse::<usize>()
                        .map_err(|_| bad("bad truncation degree"))?,
                );
            }
            name => {
                let (t, h) = rest
                    .split_once("->")
                    .ok_or_else(|| bad("expected `tail -> head`"))?;
                let t: Vertex = t.trim().parse().map_err(|_| bad("bad tail vertex"))?;
                let h: Vertex = h.trim().parse().map_err(|_| bad("bad head vertex"))?;
                arrows.push(Arrow::new(name, t, h));
            }
        }
    }
    let vertices = vertices.unwrap_or_else(|| {
        let mut vs: Vec<Vertex> = arrows
            .iter()
            .flat_map(|a: &Arrow| [a.tail, a.head])
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    });
    let quiver = Arc::new(Quiver::new(vertices, arrows)?);
    let trunc = override_trunc.or(file_trunc).unwrap_or(default_trunc);
    let potential = match potential_src {
        Some(src) => parse_series(&quiver, trunc, &src)?,
        None => Series::zero(&quiver, trunc),
    };
    Ok(QpText {
        quiver,
        potential,
        trunc: file_trunc,
    })
}

pub fn format_quiver(q: &Quiver) -> String {
    let mut out = String::new();
    out.push_str("vertices: ");
    out.push_str(
        &q.vertices()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    out.push('\n');
    for a in q.arrows() {
        out.push_str(&format!("{}: {} -> {}\n", a.name, a.tail, a.head));
    }
    out
}

/// Full QP file text, including the truncation degree.
pub fn format_qp_text<F: Field>(q: &Quiver, potential: &Series<F>) -> String {
    format!(
        "{}potential: {}\ntrunc: {}\n",
        format_quiver(q),
        format_series(potential),
        potential.trunc()
    )
}
