//! The work behind each subcommand, separated from argument parsing and output.

use std::fmt::Write;
use std::path::Path;
use std::str::FromStr;

use hs2_core::evolution::uniform_nodes;
use hs2_core::oracle::{example as oracle_example, Example, ExampleValue};
use hs2_core::{
    breaking_times, evolve as evolve_lagrangian, evolve_eulerian, j_upper,
    lipschitz_sweep, to_eulerian, to_lagrangian, EulerianState64, JOptions, LagrangianState64,
    TestFunction, Trajectory,
};

use crate::format::{parse, StateFile};
use crate::CliError;

/// Reads and parses a state file.
pub fn load(path: &Path) -> Result<StateFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.to_owned(), source })?;
    parse(&text).map_err(|error| CliError::Format { path: path.to_owned(), error })
}

/// Violated invariants of a parsed state, one line each.
pub fn violations(state: &StateFile, tol: f64) -> Vec<String> {
    let found = match state {
        StateFile::Eulerian(s) => s.validate(tol),
        StateFile::Lagrangian(x) => x.validate(tol).violations,
        StateFile::Relabeling(_) => Vec::new(),
    };
    found.iter().map(ToString::to_string).collect()
}

/// [`load`] followed by validation at tolerance `tol`.
pub fn load_valid(path: &Path, tol: f64) -> Result<StateFile, CliError> {
    let state = load(path)?;
    let violations = violations(&state, tol);
    if violations.is_empty() {
        Ok(state)
    } else {
        Err(CliError::Invalid { path: path.to_owned(), kind: state.kind(), violations })
    }
}

fn state_only(state: &StateFile) -> Result<(), CliError> {
    match state {
        StateFile::Relabeling(_) => {
            Err(CliError::Usage("expected a state, found a relabeling".into()))
        }
        _ => Ok(()),
    }
}

fn time(t: f64) -> Result<f64, CliError> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(CliError::Usage(format!("time must be a non-negative number, got {t}")))
    }
}

/// `T_t` for Eulerian states, `S_t` for Lagrangian ones.
pub fn evolve(state: &StateFile, t: f64) -> Result<StateFile, CliError> {
    state_only(state)?;
    let t = time(t)?;
    Ok(match state {
        StateFile::Eulerian(s) => StateFile::Eulerian(evolve_eulerian(s, t)?),
        StateFile::Lagrangian(x) => StateFile::Lagrangian(evolve_lagrangian(x, t)?),
        StateFile::Relabeling(_) => unreachable!("rejected above"),
    })
}

/// The Eulerian picture of a state: itself, or `M(Pi X)` for a Lagrangian one.
pub fn eulerian_view(state: &StateFile) -> Result<EulerianState64, CliError> {
    state_only(state)?;
    Ok(match state {
        StateFile::Eulerian(s) => s.clone(),
        StateFile::Lagrangian(x) => to_eulerian(&x.project_f0()?)?,
        StateFile::Relabeling(_) => unreachable!("rejected above"),
    })
}

fn lagrangian_view(state: &StateFile) -> Result<LagrangianState64, CliError> {
    state_only(state)?;
    Ok(match state {
        StateFile::Eulerian(s) => to_lagrangian(s)?,
        StateFile::Lagrangian(x) => x.clone(),
        StateFile::Relabeling(_) => unreachable!("rejected above"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Eulerian,
    Lagrangian,
}

/// `L` or `M`; a state already in the target coordinates is returned as is.
pub fn transform(state: &StateFile, to: Target) -> Result<StateFile, CliError> {
    state_only(state)?;
    Ok(match (state, to) {
        (StateFile::Eulerian(s), Target::Lagrangian) => StateFile::Lagrangian(to_lagrangian(s)?),
        (StateFile::Lagrangian(x), Target::Eulerian) => StateFile::Eulerian(to_eulerian(x)?),
        _ => state.clone(),
    })
}

/// Sampling grid `a,b,n` for plot export.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || format!("grid must be `a,b,n` with a < b and n >= 2, got `{s}`");
        let [a, b, n] = parts[..] else { return Err(bad()) };
        let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
        let n: usize = n.parse().map_err(|_| bad())?;
        if a.is_finite() && b.is_finite() && a < b && n >= 2 {
            Ok(Self { a, b, n })
        } else {
            Err(bad())
        }
    }
}

impl Grid {
    /// The breakpoint span of `s` widened by one on each side, 401 points.
    pub fn around(s: &EulerianState64) -> Self {
        let (lo, hi) = span(s);
        Self { a: lo - 1.0, b: hi + 1.0, n: 401 }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let last = (self.n - 1) as f64;
        (0..self.n).map(move |k| self.a + (self.b - self.a) * k as f64 / last)
    }
}

fn span(s: &EulerianState64) -> (f64, f64) {
    s.u.xs()
        .iter()
        .chain(s.rho.breaks())
        .chain(s.mu.density().breaks())
        .chain(s.mu.atoms().iter().map(|a| &a.0))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// CSV rows `t,x,u,rho,cdf` with the right-continuous distribution function of `mu`.
pub fn plot_csv(t: f64, s: &EulerianState64, grid: &Grid) -> String {
    let mut out = String::from("t,x,u,rho,cdf\n");
    for x in grid.points() {
        let _ = writeln!(out, "{t},{x},{},{},{}", s.u.eval(x), s.rho.eval(x), s.mu.cdf_right(x));
    }
    out
}

/// Earliest breaking time and the per-cell roots of `y_xi(t)`.
pub fn breaking(state: &StateFile) -> Result<String, CliError> {
    let report = breaking_times(&lagrangian_view(state)?);
    let mut out = String::new();
    match report.first {
        Some((t, x)) => {
            let _ = writeln!(out, "first_breaking t={t} x={x}");
        }
        None => out.push_str("first_breaking none\n"),
    }
    out.push_str("left right roots\n");
    for c in &report.cells {
        let roots: Vec<String> = c.roots.iter().map(|r| (r + 0.0).to_string()).collect();
        let _ = writeln!(out, "{} {} {}", c.left, c.right, roots.join(","));
    }
    Ok(out)
}

/// One row of the stability table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricRow {
    pub t: f64,
    /// `d_lower(Pi S_t X, Pi S_t Xb)`.
    pub lower: f64,
    /// `j_upper(Pi S_t X, Pi S_t Xb)`.
    pub upper: f64,
    /// `e^{t/2} (t^2/2 + t + 1) j_upper(X, Xb)`.
    pub bound: f64,
    pub satisfied: bool,
}

/// Metric bracket at each time and the check `lower <= bound`. States outside
/// `F_0` are replaced by their projection; the returned notes say so.
pub fn metric(
    a: &StateFile,
    b: &StateFile,
    times: &[f64],
    opts: &JOptions,
) -> Result<(Vec<MetricRow>, Vec<String>), CliError> {
    let mut notes = Vec::new();
    let mut normalized = |state: &StateFile, label: &str| -> Result<LagrangianState64, CliError> {
        let x = lagrangian_view(state)?;
        if x.is_normalized() {
            Ok(x)
        } else {
            notes.push(format!("{label} is not normalized; using its projection"));
            Ok(x.project_f0()?)
        }
    };
    let (x, xb) = (normalized(a, "first state")?, normalized(b, "second state")?);
    let times = times.iter().map(|&t| time(t)).collect::<Result<Vec<_>, _>>()?;
    let reports = lipschitz_sweep(&x, &xb, &times, opts)?;
    let rows = reports
        .iter()
        .map(|r| {
            let xt = evolve_lagrangian(&x, r.t)?.project_f0()?;
            let xbt = evolve_lagrangian(&xb, r.t)?.project_f0()?;
            Ok(MetricRow {
                t: r.t,
                lower: r.lhs,
                upper: j_upper(&xt, &xbt, opts).value,
                bound: r.rhs,
                satisfied: r.satisfied,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((rows, notes))
}

pub fn metric_table(rows: &[MetricRow]) -> String {
    let mut out = format!("{:>10} {:>24} {:>24} {:>24} {:>9}\n", "t", "lower", "upper", "bound", "satisfied");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>10} {:>24.16e} {:>24.16e} {:>24.16e} {:>9}",
            r.t, r.lower, r.upper, r.bound, r.satisfied
        );
    }
    out
}

/// A closed-form example at `t` (`eps` for `ex47`).
pub fn example(name: &str, t: f64) -> Result<StateFile, CliError> {
    let which: Example = name.parse().map_err(CliError::Usage)?;
    let value = oracle_example(which, t).map_err(|e| match e {
        hs2_core::Error::OutOfRange(_) => CliError::Usage(format!("{which}: {e}")),
        e => CliError::Core(e),
    })?;
    Ok(match value {
        ExampleValue::Eulerian(s) => StateFile::Eulerian(s),
        ExampleValue::Lagrangian(x) => StateFile::Lagrangian(x),
        ExampleValue::Relabeling(f) => StateFile::Relabeling(f),
    })
}

/// Summary of a state that passed validation.
pub fn summary(state: &StateFile, tol: f64) -> String {
    match state {
        StateFile::Eulerian(s) => format!(
            "valid eulerian state: {} velocity nodes, {} density cells, {} atoms, total energy {}\n",
            s.u.len(),
            s.rho.num_cells(),
            s.mu.atoms().len(),
            s.mu.total_mass()
        ),
        StateFile::Lagrangian(x) => {
            let report = x.validate(tol);
            format!(
                "valid lagrangian state: in_f0={}, min(y' + H')={}, H_inf={}\n",
                report.in_f0,
                report.witness,
                x.h_inf()
            )
        }
        StateFile::Relabeling(f) => format!(
            "valid relabeling: slopes in [{}, {}]\n",
            f.min_slope(),
            f.max_slope()
        ),
    }
}

/// Placement of the spatial test functions for [`residual`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub center: f64,
    pub radius: f64,
}

impl Window {
    /// Centered on the breakpoint span of `s`, reaching one unit beyond it.
    pub fn around(s: &EulerianState64) -> Self {
        let (lo, hi) = span(s);
        Self { center: 0.5 * (lo + hi), radius: 0.5 * (hi - lo) + 1.0 }
    }
}

/// Weak-form residuals of `T_t(s_0)` on `nodes` equispaced times in `[0, t_max]`
/// for a bump, a tent and a truncated Gaussian.
pub fn residual(
    state: &StateFile,
    t_max: f64,
    nodes: usize,
    window: Option<Window>,
) -> Result<String, CliError> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(CliError::Usage(format!("t-max must be positive, got {t_max}")));
    }
    if nodes < 2 {
        return Err(CliError::Usage(format!("at least two time nodes are needed, got {nodes}")));
    }
    let s0 = eulerian_view(state)?;
    let Window { center, radius } = window.unwrap_or_else(|| Window::around(&s0));
    if !(radius.is_finite() && radius > 0.0 && center.is_finite()) {
        return Err(CliError::Usage(format!("test functions need a positive radius, got {radius}")));
    }
    let trajectory = Trajectory::new(&s0, &uniform_nodes(t_max, nodes - 1))?;
    let tests = [
        ("bump", TestFunction::bump(center, radius)),
        ("tent", TestFunction::tent(center, radius)),
        ("gaussian", TestFunction::truncated_gaussian(center, radius)),
    ];
    let mut out = format!("# t_max={t_max} nodes={nodes} center={center} radius={radius}\n");
    let _ = writeln!(out, "{:>8} {:>24} {:>24} {:>24}", "test", "velocity", "density", "energy");
    let mut defect = 0.0f64;
    for (name, phi) in &tests {
        let r = trajectory.residual(phi);
        defect = defect.max(r.mass_defect);
        let _ = writeln!(
            out,
            "{name:>8} {:>24.16e} {:>24.16e} {:>24.16e}",
            r.velocity, r.density, r.energy
        );
    }
    let _ = writeln!(out, "mass_defect {defect:.16e}");
    Ok(out)
}
