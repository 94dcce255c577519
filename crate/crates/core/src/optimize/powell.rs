//! Powell's conjugate-direction method with Brent line searches.

/// Stopping rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowellOptions {
    /// Stop when 2(f_old − f) ≤ ftol(|f_old| + |f|) over one sweep.
    pub ftol: f64,
    /// Relative tolerance of each line minimisation.
    pub xtol: f64,
    pub max_sweeps: usize,
    pub max_evals: usize,
}

impl Default for PowellOptions {
    fn default() -> Self {
        PowellOptions {
            ftol: 1e-8,
            xtol: 1e-4,
            max_sweeps: 100,
            max_evals: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowellResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub sweeps: usize,
    pub evals: usize,
    /// False when a sweep or evaluation cap ended the search.
    pub converged: bool,
    /// Objective after every line minimisation (nonincreasing).
    pub history: Vec<f64>,
}

struct Counted<F> {
    f: F,
    evals: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn call(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

const GOLD: f64 = 1.618_033_988_749_895;
const CGOLD: f64 = 0.381_966_011_250_105;
const GLIMIT: f64 = 110.0;
const TINY: f64 = 1e-21;

/// Bracket a minimum of φ starting from (0, 1): returns (a, b, c) with
/// φ(b) ≤ φ(a), φ(c) and the value at b. Steps are clipped into [lo, hi].
fn bracket<P: FnMut(f64) -> f64>(phi: &mut P, f0: f64, lo: f64, hi: f64) -> (f64, f64, f64, f64) {
    let mut a = 0.0;
    let mut fa = f0;
    let mut b = 1.0f64.clamp(lo, hi);
    if b == a {
        b = (-1.0f64).clamp(lo, hi);
    }
    let mut fb = phi(b);
    if fb > fa {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = (b + GOLD * (b - a)).clamp(lo, hi);
    let mut fc = phi(c);
    let mut guard = 0;
    while fb > fc && guard < 200 {
        guard += 1;
        if c == lo || c == hi {
            // hit the box: the minimum on this segment is at or near the edge
            return (a, c, c, fc);
        }
        let r = (b - a) * (fb - fc);
        let q = (b - c) * (fb - fa);
        let denom = 2.0 * (q - r).abs().max(TINY).copysign(q - r);
        let mut u = b - ((b - c) * q - (b - a) * r) / denom;
        let ulim = b + GLIMIT * (c - b);
        let mut fu;
        if (b - u) * (u - c) > 0.0 {
            fu = phi(u);
            if fu < fc {
                return (b, u, c, fu);
            } else if fu > fb {
                return (a, b, u, fb);
            }
            u = c + GOLD * (c - b);
            fu = phi(u.clamp(lo, hi));
            u = u.clamp(lo, hi);
        } else if (c - u) * (u - ulim) > 0.0 {
            u = u.clamp(lo, hi);
            fu = phi(u);
            if fu < fc {
                b = c;
                c = u;
                u = (c + GOLD * (c - b)).clamp(lo, hi);
                fb = fc;
                fc = fu;
                fu = phi(u);
            }
        } else if (u - ulim) * (ulim - c) >= 0.0 {
            u = ulim.clamp(lo, hi);
            fu = phi(u);
        } else {
            u = (c + GOLD * (c - b)).clamp(lo, hi);
            fu = phi(u);
        }
        a = b;
        b = c;
        c = u;
        fa = fb;
        fb = fc;
        fc = fu;
    }
    let _ = fa;
    (a, b, c, fb)
}

/// Brent's parabolic/golden minimisation inside the bracket (a, b, c).
fn brent<P: FnMut(f64) -> f64>(phi: &mut P, a: f64, b: f64, c: f64, fb: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
    let (mut x, mut w, mut v) = (b, b, b);
    let (mut fx, mut fw, mut fv) = (fb, fb, fb);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..500 {
        let xm = 0.5 * (lo + hi);
        let tol1 = tol * x.abs() + 1e-11;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if !(p.abs() >= (0.5 * q * etemp).abs() || p <= q * (lo - x) || p >= q * (hi - x)) {
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { lo - x } else { hi - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = phi(u);
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            w = x;
            x = u;
            fv = fw;
            fw = fx;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                v = w;
                w = u;
                fv = fw;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Step range [lo, hi] keeping x + s·d inside the box.
fn step_range(x: &[f64], d: &[f64], bounds: Option<&[(f64, f64)]>) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    if let Some(b) = bounds {
        for i in 0..x.len() {
            if d[i] == 0.0 {
                continue;
            }
            let s1 = (b[i].0 - x[i]) / d[i];
            let s2 = (b[i].1 - x[i]) / d[i];
            lo = lo.max(s1.min(s2));
            hi = hi.min(s1.max(s2));
        }
    }
    (lo.min(0.0), hi.max(0.0))
}

/// Minimise along d from x; updates x/f in place and returns the step vector.
fn line_search<F: FnMut(&[f64]) -> f64>(
    obj: &mut Counted<F>,
    x: &mut [f64],
    f: &mut f64,
    d: &[f64],
    bounds: Option<&[(f64, f64)]>,
    xtol: f64,
) -> Vec<f64> {
    let n = x.len();
    let (lo, hi) = step_range(x, d, bounds);
    if lo == 0.0 && hi == 0.0 {
        return vec![0.0; n];
    }
    let base = x.to_vec();
    let mut buf = vec![0.0; n];
    let mut phi = |s: f64| {
        for i in 0..n {
            buf[i] = base[i] + s * d[i];
        }
        if let Some(b) = bounds {
            for i in 0..n {
                buf[i] = buf[i].clamp(b[i].0, b[i].1);
            }
        }
        obj.call(&buf)
    };
    let (a, b, c, fb) = bracket(&mut phi, *f, lo, hi);
    let (s, fs) = if a == c || b == c {
        (b, fb)
    } else {
        brent(&mut phi, a, b, c, fb, xtol)
    };
    if fs < *f {
        *f = fs;
        let mut step = vec![0.0; n];
        for i in 0..n {
            let mut xi = base[i] + s * d[i];
            if let Some(bd) = bounds {
                xi = xi.clamp(bd[i].0, bd[i].1);
            }
            step[i] = xi - base[i];
            x[i] = xi;
        }
        step
    } else {
        vec![0.0; n]
    }
}

/// Powell's method from `x0`; the optional box clips every trial point.
pub fn powell_minimize<F: FnMut(&[f64]) -> f64>(
    objective: F,
    x0: &[f64],
    bounds: Option<&[(f64, f64)]>,
    opts: &PowellOptions,
) -> PowellResult {
    let n = x0.len();
    let mut obj = Counted { f: objective, evals: 0 };
    let mut x: Vec<f64> = match bounds {
        Some(b) => x0.iter().zip(b).map(|(v, (lo, hi))| v.clamp(*lo, *hi)).collect(),
        None => x0.to_vec(),
    };
    let mut fval = obj.call(&x);
    let mut history = vec![fval];
    let mut dirs: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut x1 = x.clone();
    let mut sweeps = 0;
    let mut converged = false;

    loop {
        let fx = fval;
        let mut big = 0;
        let mut delta = 0.0;
        for (i, d) in dirs.iter().enumerate() {
            let before = fval;
            line_search(&mut obj, &mut x, &mut fval, d, bounds, opts.xtol);
            history.push(fval);
            if before - fval > delta {
                delta = before - fval;
                big = i;
            }
        }
        sweeps += 1;
        if 2.0 * (fx - fval) <= opts.ftol * (fx.abs() + fval.abs()) + 1e-20 {
            converged = true;
            break;
        }
        if sweeps >= opts.max_sweeps || obj.evals >= opts.max_evals {
            break;
        }
        let dir1: Vec<f64> = x.iter().zip(&x1).map(|(a, b)| a - b).collect();
        let mut x2: Vec<f64> = x.iter().zip(&x1).map(|(a, b)| 2.0 * a - b).collect();
        if let Some(b) = bounds {
            for i in 0..n {
                x2[i] = x2[i].clamp(b[i].0, b[i].1);
            }
        }
        x1 = x.clone();
        let fx2 = obj.call(&x2);
        if fx > fx2 {
            let mut t = 2.0 * (fx + fx2 - 2.0 * fval);
            let tmp = fx - fval - delta;
            t *= tmp * tmp;
            let tmp = fx - fx2;
            t -= delta * tmp * tmp;
            if t < 0.0 {
                let step = line_search(&mut obj, &mut x, &mut fval, &dir1, bounds, opts.xtol);
                history.push(fval);
                if step.iter().any(|&s| s != 0.0) {
                    dirs[big] = dirs[n - 1].clone();
                    dirs[n - 1] = step;
                }
            }
        }
    }
    PowellResult {
        x,
        f: fval,
        sweeps,
        evals: obj.evals,
        converged,
        history,
    }
}
