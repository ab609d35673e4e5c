//! Line-oriented text format for states and relabelings.
//!
//! ```text
//! # comment
//! [u]
//! -1.0000000000000000e0 1.0000000000000000e0
//! 0.0000000000000000e0 0.0000000000000000e0
//! [rho]
//! -1.0000000000000000e0 0.0000000000000000e0 1.0000000000000000e0
//! [mu.density]
//! ...
//! [mu.atoms]
//! 0.0000000000000000e0 5.0000000000000000e-1
//! ```
//!
//! Eulerian states use `[u] [rho] [mu.density] [mu.atoms]`, Lagrangian states
//! `[y] [U] [H] [r]` and relabelings `[f]`. Piecewise-linear sections list
//! `x value` nodes, piecewise-constant sections list `x_left x_right value` cells
//! (gaps are zero) and `[mu.atoms]` lists `x mass`. Piecewise-linear sections
//! extend with their natural slopes (1 for `y` and `f`, 0 otherwise); an
//! `extension left right` line overrides them. A `tails left right` line gives
//! nonzero tails to a piecewise-constant section. Numbers are printed with 17
//! significant digits, so printing and parsing reproduces a state exactly.

use std::fmt::Write;

use hs2_core::{
    EulerianState64, LagrangianState64, PiecewiseConstant64, PiecewiseLinear64, RadonMeasure64,
    Relabeling64,
};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum StateFile {
    Eulerian(EulerianState64),
    Lagrangian(LagrangianState64),
    Relabeling(Relabeling64),
}

impl StateFile {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Eulerian(_) => "eulerian",
            Self::Lagrangian(_) => "lagrangian",
            Self::Relabeling(_) => "relabeling",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    /// The text cannot be read as a state.
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    /// Well-formed, but the relabeling is not a homeomorphism.
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

impl FormatError {
    pub fn line(&self) -> usize {
        match self {
            Self::Syntax { line, .. } | Self::Invalid { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Linear,
    Constant,
    Atoms,
}

const SECTIONS: [(&str, Shape); 9] = [
    ("u", Shape::Linear),
    ("rho", Shape::Constant),
    ("mu.density", Shape::Constant),
    ("mu.atoms", Shape::Atoms),
    ("y", Shape::Linear),
    ("U", Shape::Linear),
    ("H", Shape::Linear),
    ("r", Shape::Constant),
    ("f", Shape::Linear),
];

const EULERIAN: [&str; 4] = ["u", "rho", "mu.density", "mu.atoms"];
const LAGRANGIAN: [&str; 4] = ["y", "U", "H", "r"];

fn natural_slope(name: &str) -> f64 {
    if name == "y" || name == "f" {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug)]
struct Section {
    name: &'static str,
    shape: Shape,
    header: usize,
    rows: Vec<(usize, Vec<f64>)>,
    /// `extension` or `tails` override.
    ends: Option<(f64, f64)>,
}

impl Section {
    fn linear(&self) -> Result<PiecewiseLinear64, FormatError> {
        if self.rows.len() < 2 {
            return Err(syntax(self.header, format!("[{}] needs at least two nodes", self.name)));
        }
        for w in self.rows.windows(2) {
            if !(w[1].1[0] > w[0].1[0]) {
                return Err(syntax(w[1].0, format!("[{}] nodes must strictly increase", self.name)));
            }
        }
        let s = natural_slope(self.name);
        let (l, r) = self.ends.unwrap_or((s, s));
        let xs = self.rows.iter().map(|(_, v)| v[0]).collect();
        let ys = self.rows.iter().map(|(_, v)| v[1]).collect();
        PiecewiseLinear64::new(xs, ys, l, r).map_err(|e| syntax(self.header, e.to_string()))
    }

    fn constant(&self) -> Result<PiecewiseConstant64, FormatError> {
        let mut breaks: Vec<f64> = Vec::with_capacity(self.rows.len() + 1);
        let mut values = Vec::with_capacity(self.rows.len());
        for (line, v) in &self.rows {
            let (a, b, value) = (v[0], v[1], v[2]);
            if !(b > a) {
                return Err(syntax(*line, format!("[{}] cell [{a}, {b}] is empty", self.name)));
            }
            match breaks.last() {
                None => breaks.push(a),
                Some(&last) if last == a => {}
                Some(&last) if last < a => {
                    values.push(0.0);
                    breaks.push(a);
                }
                Some(&last) => {
                    return Err(syntax(
                        *line,
                        format!("[{}] cell starting at {a} overlaps the one ending at {last}", self.name),
                    ))
                }
            }
            values.push(value);
            breaks.push(b);
        }
        let (l, r) = self.ends.unwrap_or((0.0, 0.0));
        PiecewiseConstant64::with_tails(breaks, values, l, r)
            .map_err(|e| syntax(self.header, e.to_string()))
    }

    fn atoms(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|(_, v)| (v[0], v[1])).collect()
    }
}

/// Reads a state or relabeling.
pub fn parse(text: &str) -> Result<StateFile, FormatError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(inner) = content.strip_prefix('[') {
            let name = inner
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, format!("malformed section header `{content}`")))?
                .trim();
            let &(name, shape) = SECTIONS
                .iter()
                .find(|(n, _)| *n == name)
                .ok_or_else(|| syntax(line, format!("unknown section [{name}]")))?;
            if sections.iter().any(|s| s.name == name) {
                return Err(syntax(line, format!("section [{name}] appears twice")));
            }
            sections.push(Section { name, shape, header: line, rows: Vec::new(), ends: None });
            continue;
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| syntax(line, "data before the first section header"))?;
        let mut tokens: Vec<&str> = content.split_whitespace().collect();
        let keyword = match (section.shape, tokens[0]) {
            (Shape::Linear, "extension") | (Shape::Constant, "tails") => Some(tokens.remove(0)),
            _ => None,
        };
        let values = tokens
            .iter()
            .map(|t| match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(syntax(line, format!("`{t}` is not a finite number"))),
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(keyword) = keyword {
            if values.len() != 2 {
                return Err(syntax(line, format!("`{keyword}` takes two numbers")));
            }
            if section.ends.is_some() {
                return Err(syntax(line, format!("`{keyword}` given twice in [{}]", section.name)));
            }
            section.ends = Some((values[0], values[1]));
            continue;
        }
        let arity = match section.shape {
            Shape::Linear | Shape::Atoms => 2,
            Shape::Constant => 3,
        };
        if values.len() != arity {
            return Err(syntax(
                line,
                format!("[{}] rows take {arity} numbers, found {}", section.name, values.len()),
            ));
        }
        section.rows.push((line, values));
    }
    assemble(&sections)
}

fn assemble(sections: &[Section]) -> Result<StateFile, FormatError> {
    let first = sections.first().ok_or_else(|| syntax(1, "no sections"))?;
    let family: &[&str] = if EULERIAN.contains(&first.name) {
        &EULERIAN
    } else if LAGRANGIAN.contains(&first.name) {
        &LAGRANGIAN
    } else {
        &["f"]
    };
    if let Some(s) = sections.iter().find(|s| !family.contains(&s.name)) {
        return Err(syntax(s.header, format!("section [{}] cannot follow [{}]", s.name, first.name)));
    }
    let get = |name: &str| sections.iter().find(|s| s.name == name);
    let required = |name: &str| {
        get(name).ok_or_else(|| syntax(first.header, format!("missing section [{name}]")))
    };
    let constant = |name: &str| get(name).map_or(Ok(PiecewiseConstant64::zero()), Section::constant);
    match first.name {
        "f" => {
            let f = required("f")?;
            Relabeling64::new(f.linear()?)
                .map(StateFile::Relabeling)
                .map_err(|e| FormatError::Invalid { line: f.header, message: e.to_string() })
        }
        n if EULERIAN.contains(&n) => {
            let u = required("u")?.linear()?;
            let atoms = get("mu.atoms").map(Section::atoms).unwrap_or_default();
            let mu = RadonMeasure64::new_unchecked(constant("mu.density")?, atoms);
            Ok(StateFile::Eulerian(EulerianState64::new(u, constant("rho")?, mu)))
        }
        _ => Ok(StateFile::Lagrangian(LagrangianState64::new(
            required("y")?.linear()?,
            required("U")?.linear()?,
            required("H")?.linear()?,
            constant("r")?,
        ))),
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn print_linear(out: &mut String, name: &str, f: &PiecewiseLinear64) {
    let _ = writeln!(out, "[{name}]");
    let s = natural_slope(name);
    if f.left_slope() != s || f.right_slope() != s {
        let _ = writeln!(out, "extension {} {}", num(f.left_slope()), num(f.right_slope()));
    }
    for (x, y) in f.xs().iter().zip(f.ys()) {
        let _ = writeln!(out, "{} {}", num(*x), num(*y));
    }
}

fn print_constant(out: &mut String, name: &str, f: &PiecewiseConstant64) {
    let _ = writeln!(out, "[{name}]");
    let (l, r) = f.tails();
    if l != 0.0 || r != 0.0 {
        let _ = writeln!(out, "tails {} {}", num(l), num(r));
    }
    for (a, b, v) in f.cells() {
        let _ = writeln!(out, "{} {} {}", num(a), num(b), num(v));
    }
}

/// Canonical text of a state; [`parse`] inverts it exactly.
pub fn print(state: &StateFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# hs2 {} state", state.kind());
    match state {
        StateFile::Eulerian(s) => {
            print_linear(&mut out, "u", &s.u);
            print_constant(&mut out, "rho", &s.rho);
            print_constant(&mut out, "mu.density", s.mu.density());
            let _ = writeln!(out, "[mu.atoms]");
            for &(x, m) in s.mu.atoms() {
                let _ = writeln!(out, "{} {}", num(x), num(m));
            }
        }
        StateFile::Lagrangian(x) => {
            print_linear(&mut out, "y", x.y());
            print_linear(&mut out, "U", x.u());
            print_linear(&mut out, "H", x.h());
            print_constant(&mut out, "r", x.r());
        }
        StateFile::Relabeling(f) => print_linear(&mut out, "f", f.as_linear()),
    }
    out
}
