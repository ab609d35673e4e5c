//! Distances between Lagrangian states: the `B`-norm distance, a certified
//! bracket `[lower, upper]` on the relabeling-invariant metric `d`, and the
//! stability check `d(Pi S_t X, Pi S_t Xb) <= e^{t/2} (t^2/2 + t + 1) d(X, Xb)`.

use crate::error::{Error, Result};
use crate::eulerian::EulerianState;
use crate::func::{merge_nodes, norm_b, PiecewiseLinear};
use crate::lagrangian::{LagrangianState, Relabeling};
use crate::scalar::{diag, Scalar};
use crate::transform::to_lagrangian;
use crate::evolution::evolve;

/// `||X - Xb||_B` on the merged breakpoint grid.
pub fn b_distance<T: Scalar>(x: &LagrangianState<T>, xb: &LagrangianState<T>) -> T {
    norm_b(
        &(x.y() - xb.y()),
        &(x.u() - xb.u()),
        &(x.h() - xb.h()),
        &x.r().zip_with(xb.r(), |a, b| a - b),
    )
}

/// `(||y - yb||_inf + ||U - Ub||_inf + ||H - Hb||_inf) / 2`, a lower bound on `d`
/// for states in `F_0`.
pub fn d_lower<T: Scalar>(x: &LagrangianState<T>, xb: &LagrangianState<T>) -> Result<T> {
    for s in [x, xb] {
        if !s.is_normalized() {
            return Err(Error::NotNormalized(diag(s.normalization_defect())));
        }
    }
    let sum = x.y().max_abs_diff(xb.y()) + x.u().max_abs_diff(xb.u()) + x.h().max_abs_diff(xb.h());
    Ok(sum / T::lit(2.0))
}

/// Tuning of the relabeling search behind [`j_upper`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JOptions {
    /// Run coordinate descent on the best candidate.
    pub refine: bool,
    pub max_sweeps: usize,
    pub golden_iterations: usize,
    /// Smallest admissible increase of the relabeling between adjacent nodes.
    pub gap: f64,
    /// A sweep improving the objective by less than `tol * (1 + value)` stops the search.
    pub tol: f64,
}

impl Default for JOptions {
    fn default() -> Self {
        Self { refine: true, max_sweeps: 200, golden_iterations: 32, gap: 1e-8, tol: 1e-9 }
    }
}

/// Upper bound on `J(X, Xb) = inf_{f,g} ||X.f - Xb||_B + ||X - Xb.g||_B` with the
/// relabelings that achieve it.
#[derive(Clone, Debug, PartialEq)]
pub struct JUpper<T> {
    pub value: T,
    pub f: Relabeling<T>,
    pub g: Relabeling<T>,
}

/// Bracket `lower <= d(X, Xb) <= upper` with the witnesses of the upper bound.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricBracket<T> {
    pub lower: T,
    pub upper: T,
    pub f: Relabeling<T>,
    pub g: Relabeling<T>,
}

/// One time of [`lipschitz_sweep`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzReport<T> {
    pub t: T,
    /// `d_lower(Pi S_t X, Pi S_t Xb)`.
    pub lhs: T,
    /// `e^{t/2} (t^2/2 + t + 1) j_upper(X, Xb)`.
    pub rhs: T,
    pub satisfied: bool,
}

/// `e^{t/2} (t^2/2 + t + 1)`.
pub fn stability_factor<T: Scalar>(t: T) -> T {
    let half = T::lit(0.5);
    (half * t).exp() * (half * t * t + t + T::one())
}

/// `||X.f - Xb||_B`.
pub fn relabeled_distance<T: Scalar>(
    x: &LagrangianState<T>,
    xb: &LagrangianState<T>,
    f: &Relabeling<T>,
) -> Result<T> {
    Ok(b_distance(&x.relabel(f)?, xb))
}

fn objective<T: Scalar>(x: &LagrangianState<T>, xb: &LagrangianState<T>, f: &PiecewiseLinear<T>) -> T {
    let dist = || -> Result<T> {
        let y = x.y().compose(f)?;
        let u = x.u().compose(f)?;
        let h = x.h().compose(f)?;
        let r = x.r().pullback(f)?;
        Ok(norm_b(&(&y - xb.y()), &(&u - xb.u()), &(&h - xb.h()), &r.zip_with(xb.r(), |a, b| a - b)))
    };
    dist().unwrap_or_else(|_| T::infinity())
}

/// Candidates `id`, `(y + H)^{-1} o (yb + Hb)` and `(yb + Hb)^{-1} o (y + H)` for
/// `min_f ||X.f - Xb||_B`.
fn candidates<T: Scalar>(x: &LagrangianState<T>, xb: &LagrangianState<T>) -> Vec<Relabeling<T>> {
    let mut out = vec![Relabeling::identity()];
    let (p, q) = (x.y_plus_h(), xb.y_plus_h());
    let (Ok(p), Ok(q)) = (Relabeling::new(p), Relabeling::new(q)) else {
        return out;
    };
    if let (Ok(pi), Ok(qi)) = (p.inverse(), q.inverse()) {
        out.extend(pi.compose(&q));
        out.extend(qi.compose(&p));
    }
    out
}

/// Upper bound on `min_f ||X.f - Xb||_B` and its witness.
pub fn one_sided<T: Scalar>(
    x: &LagrangianState<T>,
    xb: &LagrangianState<T>,
    opts: &JOptions,
) -> (T, Relabeling<T>) {
    let (mut best, mut best_f) = (T::infinity(), Relabeling::identity());
    for f in candidates(x, xb) {
        let v = objective(x, xb, f.as_linear());
        if v < best {
            best = v;
            best_f = f;
        }
    }
    if opts.refine && best > T::zero() {
        let (v, f) = refine(x, xb, &best_f, best, opts);
        if v < best {
            return (v, f);
        }
    }
    (best, best_f)
}

/// Contribution of one linear piece of `f` to `||X.f - Xb||_B`: sups of `|dy|`,
/// `|dU|`, `|dH|` and squared L2 norms of `dy'`, `dU'`, `dH'`, `dr`.
#[derive(Clone, Copy, Debug)]
struct Piece<T> {
    sup: [T; 3],
    sq: [T; 4],
}

impl<T: Scalar> Piece<T> {
    fn total(pieces: &[Self]) -> T {
        let mut sup = [T::zero(); 3];
        let mut sq = [T::zero(); 4];
        for p in pieces {
            for (acc, v) in sup.iter_mut().zip(p.sup) {
                *acc = acc.max(v);
            }
            for (acc, v) in sq.iter_mut().zip(p.sq) {
                *acc = *acc + v;
            }
        }
        (0..3).fold(sq[3].sqrt(), |acc, k| acc + sup[k] + sq[k].sqrt())
    }
}

/// `||X.f - Xb||_B` split over the linear pieces of `f`, so that moving one node
/// of `f` only re-evaluates its two neighbouring pieces.
struct Segmented<'a, T> {
    x: &'a LagrangianState<T>,
    xb: &'a LagrangianState<T>,
    nodes: Vec<T>,
    nodes_b: Vec<T>,
}

impl<'a, T: Scalar> Segmented<'a, T> {
    fn new(x: &'a LagrangianState<T>, xb: &'a LagrangianState<T>) -> Self {
        let collect = |s: &LagrangianState<T>| {
            let mut v: Vec<T> = s.y().xs().to_vec();
            v.extend_from_slice(s.u().xs());
            v.extend_from_slice(s.h().xs());
            v.extend_from_slice(s.r().breaks());
            merge_nodes(v)
        };
        Self { x, xb, nodes: collect(x), nodes_b: collect(xb) }
    }

    /// Piece on `[a, b]` where `f(xi) = fa + slope (xi - a)`.
    fn piece(&self, a: T, b: T, fa: T, slope: T) -> Piece<T> {
        let fb = fa + slope * (b - a);
        let mut pts = vec![a, b];
        pts.extend(self.nodes_b.iter().copied().filter(|&p| p > a && p < b));
        pts.extend(
            self.nodes
                .iter()
                .filter(|&&e| e > fa && e < fb)
                .map(|&e| a + (e - fa) / slope),
        );
        let pts = merge_nodes(pts);
        let (x, xb) = (self.x, self.xb);
        let diff = |p: T| {
            let q = fa + slope * (p - a);
            [
                x.y().eval(q) - xb.y().eval(p),
                x.u().eval(q) - xb.u().eval(p),
                x.h().eval(q) - xb.h().eval(p),
            ]
        };
        let mut piece = Piece { sup: [T::zero(); 3], sq: [T::zero(); 4] };
        let mut prev = diff(pts[0]);
        piece.sup = prev.map(|v| v.abs());
        for w in pts.windows(2) {
            let len = w[1] - w[0];
            let cur = diff(w[1]);
            for k in 0..3 {
                piece.sup[k] = piece.sup[k].max(cur[k].abs());
                let d = cur[k] - prev[k];
                piece.sq[k] = piece.sq[k] + d * d / len;
            }
            let m = (w[0] + w[1]) / T::lit(2.0);
            let dr = x.r().eval(fa + slope * (m - a)) * slope - xb.r().eval(m);
            piece.sq[3] = piece.sq[3] + dr * dr * len;
            prev = cur;
        }
        piece
    }

    /// Piece `k` of `f` through `(xs, ys)`: 0 is the left tail, `xs.len()` the right tail.
    fn piece_at(&self, xs: &[T], ys: &[T], k: usize) -> Piece<T> {
        let n = xs.len();
        let first = |v: &[T], d: T| v.first().copied().unwrap_or(d);
        let last = |v: &[T], d: T| v.last().copied().unwrap_or(d);
        if k == 0 {
            let lo = xs[0]
                .min(first(&self.nodes_b, xs[0]))
                .min(xs[0] + first(&self.nodes, ys[0]) - ys[0])
                - T::one();
            self.piece(lo, xs[0], ys[0] - (xs[0] - lo), T::one())
        } else if k == n {
            let hi = xs[n - 1]
                .max(last(&self.nodes_b, xs[n - 1]))
                .max(xs[n - 1] + last(&self.nodes, ys[n - 1]) - ys[n - 1])
                + T::one();
            self.piece(xs[n - 1], hi, ys[n - 1], T::one())
        } else {
            let slope = (ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]);
            self.piece(xs[k - 1], xs[k], ys[k - 1], slope)
        }
    }
}

/// Coordinate descent on the node ordinates of `f0` with a golden-section line
/// search per node, keeping `f` strictly increasing.
fn refine<T: Scalar>(
    x: &LagrangianState<T>,
    xb: &LagrangianState<T>,
    f0: &Relabeling<T>,
    value: T,
    opts: &JOptions,
) -> (T, Relabeling<T>) {
    let xs = f0.as_linear().xs().to_vec();
    let mut ys = f0.as_linear().ys().to_vec();
    let n = xs.len();
    if n < 2 {
        return (value, f0.clone());
    }
    let gap = T::lit(opts.gap);
    let seg = Segmented::new(x, xb);
    let mut pieces: Vec<Piece<T>> = (0..=n).map(|k| seg.piece_at(&xs, &ys, k)).collect();
    let mut best = Piece::total(&pieces);
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);

    for _ in 0..opts.max_sweeps {
        let start = best;
        for i in 0..n {
            let lo = if i == 0 { ys[0] - (xs[1] - xs[0]) } else { ys[i - 1] + gap };
            let hi = if i + 1 == n { ys[n - 1] + (xs[n - 1] - xs[n - 2]) } else { ys[i + 1] - gap };
            if !(hi > lo) {
                continue;
            }
            let mut trial = ys.clone();
            let mut scratch = pieces.clone();
            let mut eval = |v: T| {
                trial[i] = v;
                scratch[i] = seg.piece_at(&xs, &trial, i);
                scratch[i + 1] = seg.piece_at(&xs, &trial, i + 1);
                Piece::total(&scratch)
            };
            let (mut a, mut b) = (lo, hi);
            let mut c = b - inv_phi * (b - a);
            let mut d = a + inv_phi * (b - a);
            let (mut fc, mut fd) = (eval(c), eval(d));
            for _ in 0..opts.golden_iterations {
                if fc < fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    fc = eval(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    fd = eval(d);
                }
            }
            let (v, fv) = if fc < fd { (c, fc) } else { (d, fd) };
            if fv < best {
                best = fv;
                ys[i] = v;
                pieces[i] = seg.piece_at(&xs, &ys, i);
                pieces[i + 1] = seg.piece_at(&xs, &ys, i + 1);
            }
        }
        if !(start - best > T::lit(opts.tol) * (T::one() + best)) {
            break;
        }
    }
    let refined = PiecewiseLinear::new(xs, ys, T::one(), T::one()).and_then(Relabeling::new);
    match refined {
        Ok(f) => {
            let exact = objective(x, xb, f.as_linear());
            if exact < value {
                (exact, f)
            } else {
                (value, f0.clone())
            }
        }
        Err(_) => (value, f0.clone()),
    }
}

/// Upper bound on `J(X, Xb)`; symmetric in its arguments by construction.
pub fn j_upper<T: Scalar>(
    x: &LagrangianState<T>,
    xb: &LagrangianState<T>,
    opts: &JOptions,
) -> JUpper<T> {
    let (a, f) = one_sided(x, xb, opts);
    let (b, g) = one_sided(xb, x, opts);
    JUpper { value: a + b, f, g }
}

/// Certified bracket on `d` for two states in `F_0`.
pub fn bracket<T: Scalar>(
    x: &LagrangianState<T>,
    xb: &LagrangianState<T>,
    opts: &JOptions,
) -> Result<MetricBracket<T>> {
    let lower = d_lower(x, xb)?;
    let j = j_upper(x, xb, opts);
    Ok(MetricBracket { lower, upper: j.value, f: j.f, g: j.g })
}

/// Bracket on the pulled-back metric `d_D(s, sb) = d(L s, L sb)`.
pub fn bracket_eulerian<T: Scalar>(
    s: &EulerianState<T>,
    sb: &EulerianState<T>,
    opts: &JOptions,
) -> Result<MetricBracket<T>> {
    bracket(&to_lagrangian(s)?, &to_lagrangian(sb)?, opts)
}

/// Checks `d_lower(Pi S_t X, Pi S_t Xb) <= e^{t/2}(t^2/2 + t + 1) j_upper(X, Xb)`,
/// a consequence of the stability estimate that only uses computable bounds.
pub fn lipschitz_check<T: Scalar>(
    x: &LagrangianState<T>,
    xb: &LagrangianState<T>,
    t: T,
    opts: &JOptions,
) -> Result<LipschitzReport<T>> {
    Ok(lipschitz_sweep(x, xb, &[t], opts)?.remove(0))
}

/// [`lipschitz_check`] at several times, computing `j_upper(X, Xb)` once.
pub fn lipschitz_sweep<T: Scalar>(
    x: &LagrangianState<T>,
    xb: &LagrangianState<T>,
    times: &[T],
    opts: &JOptions,
) -> Result<Vec<LipschitzReport<T>>> {
    d_lower(x, xb)?;
    let j = j_upper(x, xb, opts).value;
    times
        .iter()
        .map(|&t| {
            let lhs = d_lower(&evolve(x, t)?.project_f0()?, &evolve(xb, t)?.project_f0()?)?;
            let rhs = stability_factor(t) * j;
            let slack = T::lit(1e-12) * rhs.max(T::one());
            Ok(LipschitzReport { t, lhs, rhs, satisfied: lhs <= rhs + slack })
        })
        .collect()
}
