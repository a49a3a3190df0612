//! Dormand–Prince 5(4) integrator with step-size control and the 4th-order
//! continuous extension, for small real systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub dt_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 { rtol: 1e-10, atol: 1e-12, dt_max: f64::INFINITY, max_steps: 50_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for j in 0..N {
            out[j] += h * c * k[j];
        }
    }
    out
}

impl Dopri5 {
    fn scale(&self, a: f64, b: f64) -> f64 {
        self.atol + self.rtol * a.abs().max(b.abs())
    }

    fn initial_step<const N: usize, F>(&self, f: &mut F, t0: f64, y0: &[f64; N], k1: &[f64; N], span: f64) -> f64
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let rms = |v: &[f64; N], y: &[f64; N]| {
            (v.iter().zip(y).map(|(a, b)| (a / self.scale(*b, *b)).powi(2)).sum::<f64>() / N as f64).sqrt()
        };
        let d0 = rms(y0, y0);
        let d1 = rms(k1, y0);
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(self.dt_max).min(span);
        let y1 = axpy(y0, h0, &[(1.0, k1)]);
        let k2 = f(t0 + h0, &y1);
        let diff: [f64; N] = std::array::from_fn(|j| (k2[j] - k1[j]) / h0);
        let d2 = rms(&diff, y0);
        let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
        (100.0 * h0).min(h1).min(self.dt_max).min(span)
    }

    /// Integrates y' = f(t, y) from (t0, y0) and returns the state at each of
    /// the ascending `samples` (all ≥ t0), read off the continuous extension.
    pub fn solve_dense<const N: usize, F>(
        &self,
        mut f: F,
        t0: f64,
        y0: [f64; N],
        samples: &[f64],
    ) -> Result<(Vec<[f64; N]>, StepStats)>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let mut out = Vec::with_capacity(samples.len());
        let mut stats = StepStats::default();
        let Some(&t_end) = samples.last() else {
            return Ok((out, stats));
        };
        let mut next = 0;
        while next < samples.len() && samples[next] <= t0 {
            out.push(y0);
            next += 1;
        }
        if next == samples.len() {
            return Ok((out, stats));
        }

        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        let mut h = self.initial_step(&mut f, t, &y, &k1, t_end - t0);
        let mut last_accepted_err = 1e-4f64;
        while next < samples.len() {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::Stiffness { t });
            }
            let h_cap = self.dt_max.min(t_end - t);
            h = h.min(h_cap);
            if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::Stiffness { t });
            }
            let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(t + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(t + h, &y_new);
            if y_new.iter().chain(&k7).any(|v| !v.is_finite()) {
                return Err(Error::Divergence { t: t + h });
            }

            let mut err = 0.0;
            for j in 0..N {
                let e = h * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j] + E6 * k6[j] + E7 * k7[j]);
                err += (e / self.scale(y[j], y_new[j])).powi(2);
            }
            let err = (err / N as f64).sqrt();

            if err <= 1.0 {
                let t_new = if h == t_end - t { t_end } else { t + h };
                while next < samples.len() && samples[next] <= t_new {
                    let theta = (samples[next] - t) / h;
                    let theta1 = 1.0 - theta;
                    out.push(std::array::from_fn(|j| {
                        let ydiff = y_new[j] - y[j];
                        let bspl = h * k1[j] - ydiff;
                        let r4 = ydiff - h * k7[j] - bspl;
                        let r5 = h
                            * (D1 * k1[j] + D3 * k3[j] + D4 * k4[j] + D5 * k5[j] + D6 * k6[j] + D7 * k7[j]);
                        y[j] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)))
                    }));
                    next += 1;
                }
                stats.accepted += 1;
                // PI step control
                let fac = 0.9 * err.max(1e-10).powf(-0.17) * last_accepted_err.powf(0.04);
                last_accepted_err = err.max(1e-4);
                t = t_new;
                y = y_new;
                k1 = k7;
                h *= fac.clamp(0.2, 10.0);
            } else {
                stats.rejected += 1;
                h *= (0.9 * err.powf(-0.2)).max(0.2);
            }
        }
        Ok((out, stats))
    }
}
