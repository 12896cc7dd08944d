//! Box-bounded Nelder–Mead simplex minimizer.
//!
//! Trial points are projected onto the box, so every evaluated point is
//! feasible. Expansion/contraction coefficients follow the dimension-adaptive
//! choice of Gao and Han. After the simplex collapses the search is restarted
//! around the best vertex until a restart brings no further improvement.

#[derive(Debug, Clone)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        debug_assert!(lower.iter().zip(&upper).all(|(l, u)| l <= u));
        Bounds { lower, upper }
    }

    pub fn unbounded(dim: usize) -> Self {
        Bounds {
            lower: vec![f64::NEG_INFINITY; dim],
            upper: vec![f64::INFINITY; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn project(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[i], self.upper[i]);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .enumerate()
            .all(|(i, v)| *v >= self.lower[i] && *v <= self.upper[i])
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    /// Initial edge length per coordinate.
    pub initial_step: Vec<f64>,
    pub max_evals: usize,
    /// Absolute spread of function values across the simplex at convergence.
    pub f_tol: f64,
    /// Maximum coordinate distance from the best vertex at convergence.
    pub x_tol: f64,
    /// Upper limit on collapse-and-restart cycles.
    pub max_restarts: usize,
}

impl SimplexOptions {
    pub fn new(initial_step: Vec<f64>) -> Self {
        SimplexOptions {
            initial_step,
            max_evals: 20_000,
            f_tol: 1e-14,
            x_tol: 1e-10,
            max_restarts: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub iterations: usize,
    pub converged: bool,
}

struct Counter<F> {
    f: F,
    evals: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counter<F> {
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

pub fn minimize<F>(f: F, x0: &[f64], bounds: &Bounds, opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(bounds.dim(), n);
    assert_eq!(opts.initial_step.len(), n);
    let mut counter = Counter { f, evals: 0 };

    let mut best = x0.to_vec();
    bounds.project(&mut best);
    let mut best_f = counter.call(&best);
    if n == 0 {
        return SimplexResult {
            x: best,
            f: best_f,
            evals: counter.evals,
            iterations: 0,
            converged: true,
        };
    }

    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..=opts.max_restarts {
        let (x, fx, it, conv) = run_once(&mut counter, &best, best_f, bounds, opts);
        iterations += it;
        let improved = fx < best_f;
        if fx <= best_f {
            best = x;
            best_f = fx;
        }
        converged = conv;
        if !conv || !improved || counter.evals >= opts.max_evals {
            break;
        }
    }
    SimplexResult {
        x: best,
        f: best_f,
        evals: counter.evals,
        iterations,
        converged,
    }
}

fn run_once<F: FnMut(&[f64]) -> f64>(
    counter: &mut Counter<F>,
    start: &[f64],
    start_f: f64,
    bounds: &Bounds,
    opts: &SimplexOptions,
) -> (Vec<f64>, f64, usize, bool) {
    let n = start.len();
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(n + 1);
    verts.push(start.to_vec());
    vals.push(start_f);
    for i in 0..n {
        let mut v = start.to_vec();
        let step = opts.initial_step[i];
        v[i] += step;
        if v[i] > bounds.upper[i] {
            v[i] = start[i] - step;
        }
        bounds.project(&mut v);
        let fv = counter.call(&v);
        verts.push(v);
        vals.push(fv);
    }

    let mut iterations = 0;
    loop {
        // order vertices by value
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        verts = idx.iter().map(|&i| verts[i].clone()).collect();
        vals = idx.iter().map(|&i| vals[i]).collect();

        let spread = vals[n] - vals[0];
        let size = verts[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&verts[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0_f64, f64::max);
        if (spread.is_finite() && spread <= opts.f_tol) || size <= opts.x_tol {
            return (verts[0].clone(), vals[0], iterations, true);
        }
        if counter.evals >= opts.max_evals {
            return (verts[0].clone(), vals[0], iterations, false);
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &verts[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&verts[n])
                .map(|(c, w)| c + t * (c - w))
                .collect();
            bounds.project(&mut p);
            p
        };

        let xr = along(alpha);
        let fr = counter.call(&xr);
        if fr < vals[0] {
            let xe = along(alpha * gamma);
            let fe = counter.call(&xe);
            if fe < fr {
                verts[n] = xe;
                vals[n] = fe;
            } else {
                verts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            verts[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let xc = along(alpha * rho);
            let fc = counter.call(&xc);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = counter.call(&xc);
            (xc, fc)
        };
        if fc < vals[n].min(fr) {
            verts[n] = xc;
            vals[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=n {
            let mut p: Vec<f64> = verts[0]
                .iter()
                .zip(&verts[i])
                .map(|(b, v)| b + sigma * (v - b))
                .collect();
            bounds.project(&mut p);
            vals[i] = counter.call(&p);
            verts[i] = p;
        }
    }
}
