//! Derivative-free minimizers over two angles.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: [f64; 2],
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub initial_step: f64,
    pub max_iterations: usize,
    /// Stop once the simplex diameter falls below this.
    pub x_tol: f64,
    /// ...and the spread of vertex values below this.
    pub f_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            initial_step: 0.2,
            max_iterations: 400,
            x_tol: 1e-8,
            f_tol: 1e-10,
        }
    }
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl NelderMead {
    pub fn minimize<F: FnMut([f64; 2]) -> f64>(&self, mut f: F, start: [f64; 2]) -> Minimum {
        let h = self.initial_step;
        let mut simplex = [start, [start[0] + h, start[1]], [start[0], start[1] + h]];
        let mut values = simplex.map(&mut f);
        let mut evaluations = 3;
        let mut converged = false;

        for _ in 0..self.max_iterations {
            let mut order = [0, 1, 2];
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.map(|i| simplex[i]);
            values = order.map(|i| values[i]);

            let diameter = dist(simplex[0], simplex[1]).max(dist(simplex[0], simplex[2]));
            if diameter < self.x_tol && values[2] - values[0] < self.f_tol {
                converged = true;
                break;
            }

            let centroid = lerp(simplex[0], simplex[1], 0.5);
            let reflected = lerp(centroid, simplex[2], -1.0);
            let fr = f(reflected);
            evaluations += 1;
            if fr < values[0] {
                let expanded = lerp(centroid, simplex[2], -2.0);
                let fe = f(expanded);
                evaluations += 1;
                if fe < fr {
                    simplex[2] = expanded;
                    values[2] = fe;
                } else {
                    simplex[2] = reflected;
                    values[2] = fr;
                }
                continue;
            }
            if fr < values[1] {
                simplex[2] = reflected;
                values[2] = fr;
                continue;
            }
            let (contracted, fc) = if fr < values[2] {
                let c = lerp(centroid, reflected, 0.5);
                (c, f(c))
            } else {
                let c = lerp(centroid, simplex[2], 0.5);
                (c, f(c))
            };
            evaluations += 1;
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
                continue;
            }
            for k in 1..3 {
                simplex[k] = lerp(simplex[0], simplex[k], 0.5);
                values[k] = f(simplex[k]);
            }
            evaluations += 2;
        }

        let best = (0..3)
            .min_by(|&a, &b| values[a].total_cmp(&values[b]))
            .expect("three vertices");
        Minimum {
            x: simplex[best],
            value: values[best],
            evaluations,
            converged,
        }
    }
}

/// Pattern search on the four axis directions, halving the step whenever no
/// direction improves by more than `min_gain`, until the step drops below
/// `resolution`. Only strict improvements are taken, so a starting point
/// that is already minimal is returned unchanged.
pub fn compass_search<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    start: [f64; 2],
    initial_step: f64,
    resolution: f64,
    min_gain: f64,
) -> Minimum {
    let mut x = start;
    let mut fx = f(x);
    let mut evaluations = 1;
    let mut step = initial_step;
    while step >= resolution {
        let mut improved = false;
        for d in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
            let y = [x[0] + step * d[0], x[1] + step * d[1]];
            let fy = f(y);
            evaluations += 1;
            if fy < fx - min_gain {
                x = y;
                fx = fy;
                improved = true;
                break;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Minimum {
        x,
        value: fx,
        evaluations,
        converged: true,
    }
}
