//! Frozen contextual encoders. Weights are fixed at construction from a
//! seed; encoding is a pure function of (weights, inputs), so identical
//! seeds and inputs give byte-identical outputs. Both kinds expose exact
//! gradients with respect to their input vectors.

use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::rng::rng_from_seed;

/// How per-layer outputs of the recurrent encoder combine into E(w, S).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerMode {
    AllLayersMean,
    TopLayer,
}

impl LayerMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            LayerMode::AllLayersMean => "all-layers-mean",
            LayerMode::TopLayer => "top-layer",
        }
    }
}

impl FromStr for LayerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-layers-mean" => Ok(LayerMode::AllLayersMean),
            "top-layer" => Ok(LayerMode::TopLayer),
            other => Err(Error::InvalidInput(format!(
                "unknown layer mode {:?} (expected all-layers-mean or top-layer)",
                other
            ))),
        }
    }
}

/// One bidirectional tanh layer: h^f_t = tanh(Wf z_t + Uf h^f_{t-1} + bf),
/// h^b_t = tanh(Wb z_t + Ub h^b_{t+1} + bb), output = proj [h^f_t; h^b_t].
pub(crate) struct RnnLayer {
    pub(crate) wf: Matrix,
    pub(crate) uf: Matrix,
    pub(crate) bf: Vector,
    pub(crate) wb: Matrix,
    pub(crate) ub: Matrix,
    pub(crate) bb: Vector,
    pub(crate) proj: Matrix,
}

enum Kind {
    WindowMean {
        radius: usize,
    },
    BiRnn {
        layers: Vec<RnnLayer>,
        layer_mode: LayerMode,
    },
}

pub struct EncoderModel {
    input_dim: usize,
    output_dim: usize,
    kind: Kind,
}

/// Per-position contextual vectors for one sentence. vectors.len() equals
/// the sentence length and every entry is finite.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextualEncoding {
    vectors: Vec<Vector>,
}

impl ContextualEncoding {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, position: usize) -> &Vector {
        &self.vectors[position]
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }
}

impl EncoderModel {
    /// Sliding-window mean encoder; linear, output dim equals input dim.
    pub fn window_mean(dim: usize, radius: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("encoder dim must be positive".into()));
        }
        Ok(EncoderModel {
            input_dim: dim,
            output_dim: dim,
            kind: Kind::WindowMean { radius },
        })
    }

    /// Stacked bidirectional tanh encoder with seeded frozen weights drawn
    /// uniform in [-0.5/sqrt(h), 0.5/sqrt(h)]. Layer 1 reads k-dim inputs,
    /// later layers read the previous layer's m-dim projected outputs.
    pub fn birnn(
        input_dim: usize,
        output_dim: usize,
        layer_count: usize,
        hidden_dim: usize,
        weight_seed: u64,
        layer_mode: LayerMode,
    ) -> Result<Self> {
        if input_dim == 0 || output_dim == 0 || hidden_dim == 0 {
            return Err(Error::InvalidInput("encoder dims must be positive".into()));
        }
        if layer_count == 0 {
            return Err(Error::InvalidInput("layer count must be positive".into()));
        }
        let mut rng = rng_from_seed(weight_seed);
        let bound = 0.5 / (hidden_dim as f64).sqrt();
        let draw_matrix = |rng: &mut rand_chacha::ChaCha12Rng, rows: usize, cols: usize| {
            let data: Vec<f64> = (0..rows * cols)
                .map(|_| (rng.gen::<f64>() * 2.0 - 1.0) * bound)
                .collect();
            Matrix::new(rows, cols, data).expect("finite by construction")
        };
        let mut layers = Vec::with_capacity(layer_count);
        for layer in 0..layer_count {
            let in_dim = if layer == 0 { input_dim } else { output_dim };
            let wf = draw_matrix(&mut rng, hidden_dim, in_dim);
            let uf = draw_matrix(&mut rng, hidden_dim, hidden_dim);
            let bf = draw_vector(&mut rng, hidden_dim, bound);
            let wb = draw_matrix(&mut rng, hidden_dim, in_dim);
            let ub = draw_matrix(&mut rng, hidden_dim, hidden_dim);
            let bb = draw_vector(&mut rng, hidden_dim, bound);
            let proj = draw_matrix(&mut rng, output_dim, 2 * hidden_dim);
            layers.push(RnnLayer {
                wf,
                uf,
                bf,
                wb,
                ub,
                bb,
                proj,
            });
        }
        Ok(EncoderModel {
            input_dim,
            output_dim,
            kind: Kind::BiRnn { layers, layer_mode },
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    #[cfg(test)]
    pub(crate) fn layers_for_tests(&self) -> &[RnnLayer] {
        match &self.kind {
            Kind::BiRnn { layers, .. } => layers,
            _ => panic!("not a birnn"),
        }
    }

    fn check_inputs(&self, inputs: &[Vector]) -> Result<()> {
        if inputs.is_empty() {
            return Err(Error::EmptySentence);
        }
        for v in inputs {
            if v.dim() != self.input_dim {
                return Err(Error::DimMismatch {
                    expected: self.input_dim,
                    actual: v.dim(),
                    context: "encoder input",
                });
            }
        }
        Ok(())
    }

    pub fn encode(&self, inputs: &[Vector]) -> Result<ContextualEncoding> {
        self.check_inputs(inputs)?;
        let vectors = match &self.kind {
            Kind::WindowMean { radius } => window_mean_encode(inputs, *radius),
            Kind::BiRnn { layers, layer_mode } => {
                let traces = run_layers(layers, inputs);
                assemble_outputs(&traces, *layer_mode)
            }
        };
        Ok(ContextualEncoding { vectors })
    }

    /// d(upstream . E_position)/d(input_j) for every input position j.
    pub fn encode_grad(
        &self,
        inputs: &[Vector],
        position: usize,
        upstream: &Vector,
    ) -> Result<Vec<Vector>> {
        self.check_inputs(inputs)?;
        if position >= inputs.len() {
            return Err(Error::InvalidInput(format!(
                "position {} out of range for sentence of length {}",
                position,
                inputs.len()
            )));
        }
        if upstream.dim() != self.output_dim {
            return Err(Error::DimMismatch {
                expected: self.output_dim,
                actual: upstream.dim(),
                context: "encoder upstream gradient",
            });
        }
        match &self.kind {
            Kind::WindowMean { radius } => {
                Ok(window_mean_grad(inputs.len(), *radius, position, upstream))
            }
            Kind::BiRnn { layers, layer_mode } => Ok(birnn_grad(
                layers,
                inputs,
                position,
                upstream,
                *layer_mode,
                self.input_dim,
                self.output_dim,
            )),
        }
    }
}

fn draw_vector(rng: &mut rand_chacha::ChaCha12Rng, dim: usize, bound: f64) -> Vector {
    Vector::from_raw(
        (0..dim)
            .map(|_| (rng.gen::<f64>() * 2.0 - 1.0) * bound)
            .collect(),
    )
}

fn window_bounds(len: usize, radius: usize, i: usize) -> (usize, usize) {
    (i.saturating_sub(radius), (i + radius).min(len - 1))
}

fn window_mean_encode(inputs: &[Vector], radius: usize) -> Vec<Vector> {
    let len = inputs.len();
    (0..len)
        .map(|i| {
            let (lo, hi) = window_bounds(len, radius, i);
            Vector::mean(&inputs[lo..=hi])
        })
        .collect()
}

fn window_mean_grad(len: usize, radius: usize, position: usize, upstream: &Vector) -> Vec<Vector> {
    let mut grads = vec![Vector::zeros(upstream.dim()); len];
    let (lo, hi) = window_bounds(len, radius, position);
    let scale = 1.0 / (hi - lo + 1) as f64;
    for g in grads.iter_mut().take(hi + 1).skip(lo) {
        g.add_scaled(upstream, scale);
    }
    grads
}

struct LayerTrace {
    hf: Vec<Vector>,
    hb: Vec<Vector>,
    out: Vec<Vector>,
}

fn tanh_vec(v: &Vector) -> Vector {
    Vector::from_raw(v.as_slice().iter().map(|x| x.tanh()).collect())
}

fn concat(a: &Vector, b: &Vector) -> Vector {
    let mut data = Vec::with_capacity(a.dim() + b.dim());
    data.extend_from_slice(a.as_slice());
    data.extend_from_slice(b.as_slice());
    Vector::from_raw(data)
}

fn run_layer(layer: &RnnLayer, z: &[Vector]) -> LayerTrace {
    let len = z.len();
    let h = layer.bf.dim();
    let mut hf = Vec::with_capacity(len);
    let mut prev = Vector::zeros(h);
    for zt in z {
        let mut a = layer.wf.matvec(zt);
        a.add_scaled(&layer.uf.matvec(&prev), 1.0);
        a.add_scaled(&layer.bf, 1.0);
        let ht = tanh_vec(&a);
        hf.push(ht.clone());
        prev = ht;
    }
    let mut hb = vec![Vector::zeros(h); len];
    let mut next = Vector::zeros(h);
    for t in (0..len).rev() {
        let mut a = layer.wb.matvec(&z[t]);
        a.add_scaled(&layer.ub.matvec(&next), 1.0);
        a.add_scaled(&layer.bb, 1.0);
        let ht = tanh_vec(&a);
        hb[t] = ht.clone();
        next = ht;
    }
    let out = (0..len)
        .map(|t| layer.proj.matvec(&concat(&hf[t], &hb[t])))
        .collect();
    LayerTrace { hf, hb, out }
}

fn run_layers(layers: &[RnnLayer], inputs: &[Vector]) -> Vec<LayerTrace> {
    let mut traces: Vec<LayerTrace> = Vec::with_capacity(layers.len());
    for (i, layer) in layers.iter().enumerate() {
        let trace = if i == 0 {
            run_layer(layer, inputs)
        } else {
            run_layer(layer, &traces[i - 1].out)
        };
        traces.push(trace);
    }
    traces
}

fn assemble_outputs(traces: &[LayerTrace], mode: LayerMode) -> Vec<Vector> {
    match mode {
        LayerMode::TopLayer => traces.last().expect("at least one layer").out.clone(),
        LayerMode::AllLayersMean => {
            let len = traces[0].out.len();
            let scale = 1.0 / traces.len() as f64;
            (0..len)
                .map(|t| {
                    let mut acc = Vector::zeros(traces[0].out[t].dim());
                    for trace in traces {
                        acc.add_scaled(&trace.out[t], scale);
                    }
                    acc
                })
                .collect()
        }
    }
}

/// Reverse-mode pass through one layer: given dL/d(out_t) for all t,
/// return dL/d(z_t). delta_t = grad_h_t * (1 - h_t^2) elementwise; the
/// forward direction chains through Uf backward in t, the backward
/// direction through Ub forward in t.
fn backprop_layer(layer: &RnnLayer, trace: &LayerTrace, gout: &[Vector], in_dim: usize) -> Vec<Vector> {
    let len = gout.len();
    let h = layer.bf.dim();
    let split: Vec<(Vector, Vector)> = gout
        .iter()
        .map(|g| {
            let pt = layer.proj.transpose_matvec(g);
            let gf = Vector::from_raw(pt.as_slice()[..h].to_vec());
            let gb = Vector::from_raw(pt.as_slice()[h..].to_vec());
            (gf, gb)
        })
        .collect();
    let mut dz = vec![Vector::zeros(in_dim); len];
    let mut delta_next = Vector::zeros(h);
    for t in (0..len).rev() {
        let mut grad_h = split[t].0.clone();
        grad_h.add_scaled(&layer.uf.transpose_matvec(&delta_next), 1.0);
        let delta = tanh_backward(&grad_h, &trace.hf[t]);
        dz[t].add_scaled(&layer.wf.transpose_matvec(&delta), 1.0);
        delta_next = delta;
    }
    let mut delta_prev = Vector::zeros(h);
    for t in 0..len {
        let mut grad_h = split[t].1.clone();
        grad_h.add_scaled(&layer.ub.transpose_matvec(&delta_prev), 1.0);
        let delta = tanh_backward(&grad_h, &trace.hb[t]);
        dz[t].add_scaled(&layer.wb.transpose_matvec(&delta), 1.0);
        delta_prev = delta;
    }
    dz
}

fn tanh_backward(grad_h: &Vector, h: &Vector) -> Vector {
    Vector::from_raw(
        grad_h
            .as_slice()
            .iter()
            .zip(h.as_slice())
            .map(|(g, y)| g * (1.0 - y * y))
            .collect(),
    )
}

fn birnn_grad(
    layers: &[RnnLayer],
    inputs: &[Vector],
    position: usize,
    upstream: &Vector,
    mode: LayerMode,
    input_dim: usize,
    output_dim: usize,
) -> Vec<Vector> {
    let traces = run_layers(layers, inputs);
    let len = inputs.len();
    let depth = layers.len();
    let mut gout: Vec<Vec<Vector>> = (0..depth)
        .map(|_| vec![Vector::zeros(output_dim); len])
        .collect();
    match mode {
        LayerMode::TopLayer => {
            gout[depth - 1][position] = upstream.clone();
        }
        LayerMode::AllLayersMean => {
            let scale = 1.0 / depth as f64;
            for layer_gout in gout.iter_mut() {
                layer_gout[position] = upstream.scale(scale);
            }
        }
    }
    let mut result = vec![Vector::zeros(input_dim); len];
    for l in (0..depth).rev() {
        let in_dim = if l == 0 { input_dim } else { output_dim };
        let dz = backprop_layer(&layers[l], &traces[l], &gout[l], in_dim);
        if l == 0 {
            for (r, d) in result.iter_mut().zip(&dz) {
                r.add_scaled(d, 1.0);
            }
        } else {
            for (g, d) in gout[l - 1].iter_mut().zip(&dz) {
                g.add_scaled(d, 1.0);
            }
        }
    }
    result
}
