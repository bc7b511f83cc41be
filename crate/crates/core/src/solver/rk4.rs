/// Classical four-stage Runge-Kutta over a list of real arrays.
#[derive(Debug, Clone)]
pub(crate) struct Rk4 {
    k: [Vec<Vec<f64>>; 4],
    stage: Vec<Vec<f64>>,
}

impl Rk4 {
    pub fn new(components: usize, n: usize) -> Self {
        let blank = || vec![vec![0.0; n]; components];
        Rk4 {
            k: [blank(), blank(), blank(), blank()],
            stage: blank(),
        }
    }

    /// Advances `y` by `dt` for the autonomous system `y' = f(y)`.
    pub fn step<F>(&mut self, y: &mut [Vec<f64>], dt: f64, mut f: F)
    where
        F: FnMut(&[Vec<f64>], &mut [Vec<f64>]),
    {
        let [k1, k2, k3, k4] = &mut self.k;
        let stage = &mut self.stage;
        f(y, k1);
        axpy_into(stage, y, 0.5 * dt, k1);
        f(stage, k2);
        axpy_into(stage, y, 0.5 * dt, k2);
        f(stage, k3);
        axpy_into(stage, y, dt, k3);
        f(stage, k4);
        let w = dt / 6.0;
        for c in 0..y.len() {
            let (yc, a, b, cc, d) = (&mut y[c], &k1[c], &k2[c], &k3[c], &k4[c]);
            for i in 0..yc.len() {
                yc[i] += w * (a[i] + 2.0 * (b[i] + cc[i]) + d[i]);
            }
        }
    }
}

fn axpy_into(out: &mut [Vec<f64>], y: &[Vec<f64>], s: f64, k: &[Vec<f64>]) {
    for ((o, y), k) in out.iter_mut().zip(y).zip(k) {
        for ((o, y), k) in o.iter_mut().zip(y).zip(k) {
            *o = y + s * k;
        }
    }
}
