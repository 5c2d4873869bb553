use rand::Rng;
use serde::{Deserialize, Serialize};

/// Weights of the policy-mean network: fully connected, ReLU hidden layers and a
/// `scale · tanh` output layer.
///
/// Parameters are stored flat, layer by layer, each layer as a row-major `out × in`
/// weight matrix followed by its `out` biases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyParameters {
    sizes: Vec<usize>,
    scale: f64,
    params: Vec<f64>,
}

/// Per-layer activations retained by a forward pass for backpropagation.
#[derive(Clone, Debug, Default)]
pub struct Activations {
    /// `layers[0]` is the input; `layers[l]` the output of layer `l` (post-ReLU, or tanh
    /// before scaling for the last layer).
    layers: Vec<Vec<f64>>,
    delta: Vec<f64>,
    delta_prev: Vec<f64>,
}

/// Dot product with four independent accumulators.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn param_count(sizes: &[usize]) -> usize {
    sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

impl PolicyParameters {
    /// Uniform `±1/√fan_in` initialisation of weights and biases.
    pub fn new<R: Rng + ?Sized>(sizes: &[usize], scale: f64, rng: &mut R) -> Self {
        assert!(sizes.len() >= 2, "network needs input and output layers");
        let mut params = Vec::with_capacity(param_count(sizes));
        for w in sizes.windows(2) {
            let bound = 1.0 / (w[0] as f64).sqrt();
            for _ in 0..(w[0] * w[1] + w[1]) {
                params.push(rng.random_range(-bound..bound));
            }
        }
        Self { sizes: sizes.to_vec(), scale, params }
    }

    pub fn zeros(sizes: &[usize], scale: f64) -> Self {
        assert!(sizes.len() >= 2, "network needs input and output layers");
        Self { sizes: sizes.to_vec(), scale, params: vec![0.0; param_count(sizes)] }
    }

    pub fn from_parts(sizes: Vec<usize>, scale: f64, params: Vec<f64>) -> Option<Self> {
        (sizes.len() >= 2 && params.len() == param_count(&sizes)).then_some(Self { sizes, scale, params })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.params
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn all_finite(&self) -> bool {
        self.params.iter().all(|v| v.is_finite())
    }

    /// Policy mean `μ_θ(s)`.
    pub fn forward(&self, input: &[f64]) -> Vec<f64> {
        let mut acts = Activations::default();
        self.forward_with(input, &mut acts);
        self.mean_from(&acts)
    }

    fn mean_from(&self, acts: &Activations) -> Vec<f64> {
        acts.layers.last().unwrap().iter().map(|t| self.scale * t).collect()
    }

    /// Forward pass keeping activations; returns the mean.
    pub fn forward_with(&self, input: &[f64], acts: &mut Activations) -> Vec<f64> {
        assert_eq!(input.len(), self.input_dim(), "input dimension mismatch");
        let depth = self.sizes.len() - 1;
        acts.layers.resize_with(depth + 1, Vec::new);
        acts.layers[0].clear();
        acts.layers[0].extend_from_slice(input);
        let mut off = 0;
        for l in 0..depth {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let (w, rest) = self.params[off..].split_at(n_in * n_out);
            let b = &rest[..n_out];
            off += n_in * n_out + n_out;
            let (prev, next) = acts.layers.split_at_mut(l + 1);
            let x = &prev[l];
            let y = &mut next[0];
            y.clear();
            let last = l + 1 == depth;
            for o in 0..n_out {
                let row = &w[o * n_in..(o + 1) * n_in];
                let z = b[o] + dot(row, x);
                y.push(if last { z.tanh() } else { z.max(0.0) });
            }
        }
        self.mean_from(acts)
    }

    /// Accumulates `factor · (∂μ/∂θ)ᵀ upstream` into `grad`, using activations from
    /// [`forward_with`](Self::forward_with).
    pub fn backward_into(&self, acts: &mut Activations, upstream: &[f64], factor: f64, grad: &mut [f64]) {
        assert_eq!(grad.len(), self.params.len());
        let depth = self.sizes.len() - 1;
        let out = &acts.layers[depth];
        acts.delta.clear();
        acts.delta.extend(upstream.iter().zip(out).map(|(u, t)| factor * u * self.scale * (1.0 - t * t)));

        let mut end = self.params.len();
        for l in (0..depth).rev() {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let start = end - (n_in * n_out + n_out);
            let w = &self.params[start..start + n_in * n_out];
            let (gw, gb) = grad[start..end].split_at_mut(n_in * n_out);
            let x = &acts.layers[l];
            acts.delta_prev.clear();
            acts.delta_prev.resize(n_in, 0.0);
            for o in 0..n_out {
                let d = acts.delta[o];
                if d == 0.0 {
                    continue;
                }
                gb[o] += d;
                let row_g = &mut gw[o * n_in..(o + 1) * n_in];
                for (g, xi) in row_g.iter_mut().zip(x) {
                    *g += d * xi;
                }
                if l > 0 {
                    let row_w = &w[o * n_in..(o + 1) * n_in];
                    for (dp, wi) in acts.delta_prev.iter_mut().zip(row_w) {
                        *dp += d * wi;
                    }
                }
            }
            if l > 0 {
                // ReLU mask
                for (dp, xi) in acts.delta_prev.iter_mut().zip(x) {
                    if *xi <= 0.0 {
                        *dp = 0.0;
                    }
                }
                std::mem::swap(&mut acts.delta, &mut acts.delta_prev);
            }
            end = start;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_network_outputs_zero() {
        let net = PolicyParameters::zeros(&[4, 100, 100, 100, 2], 10.0);
        assert_eq!(net.forward(&[0.3, -0.2, 0.9, 0.5]), vec![0.0, 0.0]);
        assert_eq!(net.len(), 4 * 100 + 100 + 2 * (100 * 100 + 100) + 100 * 2 + 2);
    }

    #[test]
    fn output_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut net = PolicyParameters::new(&[2, 8, 1], 10.0, &mut rng);
        for v in net.as_mut_slice() {
            *v *= 50.0;
        }
        for i in 0..50 {
            let mu = net.forward(&[i as f64 * 0.37 - 9.0, 1.0]);
            assert!(mu[0].abs() <= 10.0);
        }
    }

    #[test]
    fn directional_derivative_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let net = PolicyParameters::new(&[3, 16, 16, 2], 10.0, &mut rng);
        let x = [0.4, -0.7, 0.2];
        let dir: Vec<f64> = (0..net.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let upstream = [0.6, -1.3];
        let mut acts = Activations::default();
        net.forward_with(&x, &mut acts);
        let mut grad = vec![0.0; net.len()];
        net.backward_into(&mut acts, &upstream, 1.0, &mut grad);
        let analytic: f64 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum();

        let h = 1e-6;
        let shifted = |s: f64| {
            let mut n = net.clone();
            for (p, d) in n.as_mut_slice().iter_mut().zip(&dir) {
                *p += s * d;
            }
            let mu = n.forward(&x);
            mu[0] * upstream[0] + mu[1] * upstream[1]
        };
        let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        assert!(((fd - analytic) / analytic).abs() < 1e-4, "{fd} vs {analytic}");
    }
}
