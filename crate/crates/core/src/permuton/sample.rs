use rand::Rng;

use super::Permuton;
use crate::perm::Permutation;
use crate::rational::to_f64;
use crate::rng;

/// A permuton flattened into `f64` tables for fast point sampling.
#[derive(Debug, Clone)]
pub enum PointSampler {
    Segments {
        /// Left x-coordinate of each segment; the tail starts at `total`.
        x0: Vec<f64>,
        y0: Vec<f64>,
        w: Vec<f64>,
        total: f64,
    },
    Blocks {
        start: Vec<f64>,
        w: Vec<f64>,
        children: Vec<PointSampler>,
        total: f64,
    },
    Uniform,
    Identity,
    Reverse,
}

fn pick(starts: &[f64], u: f64) -> usize {
    starts.partition_point(|&s| s <= u) - 1
}

impl PointSampler {
    pub fn new(phi: &Permuton) -> Self {
        match phi {
            Permuton::StepUp(s) => {
                let w: Vec<f64> = s.weights().iter().map(to_f64).collect();
                let mut x0 = Vec::with_capacity(w.len());
                let mut acc = 0.0;
                for &wi in &w {
                    x0.push(acc);
                    acc += wi;
                }
                let sigma = s.sigma().values();
                let mut by_value = vec![0.0; w.len()];
                for (i, &v) in sigma.iter().enumerate() {
                    by_value[v] = w[i];
                }
                let mut below = vec![0.0; w.len()];
                let mut acc_y = 0.0;
                for v in 0..w.len() {
                    below[v] = acc_y;
                    acc_y += by_value[v];
                }
                let y0 = sigma.iter().map(|&v| below[v]).collect();
                PointSampler::Segments { x0, y0, w, total: acc }
            }
            Permuton::DirectSum(d) => {
                let w: Vec<f64> = d.parts().iter().map(|(p, _)| to_f64(p)).collect();
                let mut start = Vec::with_capacity(w.len());
                let mut acc = 0.0;
                for &wi in &w {
                    start.push(acc);
                    acc += wi;
                }
                let children = d.parts().iter().map(|(_, c)| PointSampler::new(c)).collect();
                PointSampler::Blocks { start, w, children, total: acc }
            }
            Permuton::Uniform => PointSampler::Uniform,
            Permuton::Identity => PointSampler::Identity,
            Permuton::Reverse => PointSampler::Reverse,
        }
    }

    pub fn point<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self {
            PointSampler::Segments { x0, y0, w, total } => {
                let u: f64 = rng.random();
                let t: f64 = rng.random();
                if u >= *total || x0.is_empty() {
                    let x = total + t * (1.0 - total);
                    return (x, x);
                }
                let i = pick(x0, u);
                (x0[i] + t * w[i], y0[i] + t * w[i])
            }
            PointSampler::Blocks { start, w, children, total } => {
                let u: f64 = rng.random();
                if u >= *total || start.is_empty() {
                    let t: f64 = rng.random();
                    let x = total + t * (1.0 - total);
                    return (x, x);
                }
                let i = pick(start, u);
                let (x, y) = children[i].point(rng);
                (start[i] + w[i] * x, start[i] + w[i] * y)
            }
            PointSampler::Uniform => (rng.random(), rng.random()),
            PointSampler::Identity => {
                let t: f64 = rng.random();
                (t, t)
            }
            PointSampler::Reverse => {
                let t: f64 = rng.random();
                (t, 1.0 - t)
            }
        }
    }

    /// Pattern of `n` i.i.d. points. Points sharing an x- or y-coordinate
    /// are redrawn, so the law of the result is exactly the permuton's.
    pub fn permutation<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Permutation {
        let mut pts: Vec<(f64, f64)> = (0..n).map(|_| self.point(rng)).collect();
        loop {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut ys: Vec<(f64, usize)> = pts.iter().enumerate().map(|(i, p)| (p.1, i)).collect();
            ys.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut tied = Vec::new();
            for i in 1..n {
                if pts[i].0 == pts[i - 1].0 {
                    tied.push(i);
                }
                if ys[i].0 == ys[i - 1].0 {
                    tied.push(ys[i].1);
                }
            }
            if tied.is_empty() {
                let mut values = vec![0; n];
                for (rank, &(_, i)) in ys.iter().enumerate() {
                    values[i] = rank;
                }
                return Permutation::from_zero_based_unchecked(values);
            }
            for i in tied {
                pts[i] = self.point(rng);
            }
        }
    }
}

/// A Φ-random permutation of order `n`, deterministic in `seed`.
pub fn sample_permutation(phi: &Permuton, n: usize, seed: u64) -> Permutation {
    let mut rng = rng::seeded(seed);
    PointSampler::new(phi).permutation(n.max(1), &mut rng)
}

/// Largest deviation of the x- and y-marginal histograms (`bins` equal
/// bins) from `1/bins`, over `points` sampled points.
pub fn marginal_deviation(phi: &Permuton, points: usize, bins: usize, seed: u64) -> (f64, f64) {
    let sampler = PointSampler::new(phi);
    let mut rng = rng::seeded(seed);
    let mut hx = vec![0usize; bins];
    let mut hy = vec![0usize; bins];
    let bin = |c: f64| ((c * bins as f64) as usize).min(bins - 1);
    for _ in 0..points {
        let (x, y) = sampler.point(&mut rng);
        hx[bin(x)] += 1;
        hy[bin(y)] += 1;
    }
    let dev = |h: &[usize]| {
        h.iter()
            .map(|&c| (c as f64 / points as f64 - 1.0 / bins as f64).abs())
            .fold(0.0, f64::max)
    };
    (dev(&hx), dev(&hy))
}
