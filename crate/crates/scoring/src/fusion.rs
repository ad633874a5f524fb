//! Pure-math reference of the gated cross-attention fusion step: one head,
//! explicit weights, row-wise layer norm. Serves as a numeric oracle for
//! any tensor-library implementation of the same update.

use crate::ScoringError;

/// Gate bias at which σ(g) ≈ 0.1, the low-influence starting point for
/// blending textual priors into the hidden states.
pub const GATE_INIT: f64 = -2.197;

/// Layer-norm stabilizer.
pub const LN_EPSILON: f64 = 1e-5;

/// All operands of one fusion step. `hidden` is n×D, `prior` is M×D, the
/// attention weights are D×D, and the remaining vectors have length D.
#[derive(Debug, Clone)]
pub struct FusionInputs {
    pub hidden: Vec<Vec<f64>>,
    pub prior: Vec<Vec<f64>>,
    pub gate: Vec<f64>,
    pub w_q: Vec<Vec<f64>>,
    pub w_k: Vec<Vec<f64>>,
    pub w_v: Vec<Vec<f64>>,
    pub ln_gain: Vec<f64>,
    pub ln_bias: Vec<f64>,
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn check_matrix(name: &str, matrix: &[Vec<f64>], rows: usize, cols: usize) -> Result<(), ScoringError> {
    if matrix.len() != rows {
        return Err(ScoringError::Shape(format!(
            "{name} has {} rows, expected {rows}",
            matrix.len()
        )));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != cols {
            return Err(ScoringError::Shape(format!(
                "{name} row {i} has {} columns, expected {cols}",
                row.len()
            )));
        }
    }
    Ok(())
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            let mut out = vec![0.0; cols];
            for (k, &a_ik) in row.iter().enumerate() {
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot += a_ik * b[k][j];
                }
            }
            out
        })
        .collect()
}

fn row_softmax(row: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for v in row.iter_mut() {
        *v = (*v - max).exp();
        total += *v;
    }
    for v in row.iter_mut() {
        *v /= total;
    }
}

fn layer_norm_row(row: &[f64], gain: &[f64], bias: &[f64]) -> Vec<f64> {
    let d = row.len() as f64;
    let mean = row.iter().sum::<f64>() / d;
    let var = row.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / d;
    let denom = (var + LN_EPSILON).sqrt();
    row.iter()
        .zip(gain.iter().zip(bias))
        .map(|(&v, (&g, &b))| g * (v - mean) / denom + b)
        .collect()
}

/// LN(H + σ(g) ⊙ CA(H, E_r)) with CA = softmax((H W_q)(E_r W_k)ᵀ/√D)(E_r W_v).
///
/// The gate is applied per feature, broadcast over rows; the softmax runs
/// over prior rows, per hidden row; layer norm runs per output row.
pub fn gated_fusion_forward(inputs: &FusionInputs) -> Result<Vec<Vec<f64>>, ScoringError> {
    let n = inputs.hidden.len();
    let m = inputs.prior.len();
    if n == 0 || m == 0 {
        return Err(ScoringError::Shape("hidden and prior must be non-empty".into()));
    }
    let d = inputs.hidden[0].len();
    if d == 0 {
        return Err(ScoringError::Shape("feature dimension is zero".into()));
    }
    check_matrix("hidden", &inputs.hidden, n, d)?;
    check_matrix("prior", &inputs.prior, m, d)?;
    check_matrix("w_q", &inputs.w_q, d, d)?;
    check_matrix("w_k", &inputs.w_k, d, d)?;
    check_matrix("w_v", &inputs.w_v, d, d)?;
    for (name, vector) in [
        ("gate", &inputs.gate),
        ("ln_gain", &inputs.ln_gain),
        ("ln_bias", &inputs.ln_bias),
    ] {
        if vector.len() != d {
            return Err(ScoringError::Shape(format!(
                "{name} has length {}, expected {d}",
                vector.len()
            )));
        }
    }

    let queries = matmul(&inputs.hidden, &inputs.w_q);
    let keys = matmul(&inputs.prior, &inputs.w_k);
    let values = matmul(&inputs.prior, &inputs.w_v);
    let scale = (d as f64).sqrt();

    let mut output = Vec::with_capacity(n);
    for (hidden_row, query) in inputs.hidden.iter().zip(&queries) {
        let mut scores: Vec<f64> = keys
            .iter()
            .map(|key| query.iter().zip(key).map(|(&q, &k)| q * k).sum::<f64>() / scale)
            .collect();
        row_softmax(&mut scores);

        let fused: Vec<f64> = (0..d)
            .map(|j| {
                let attended: f64 = scores.iter().zip(&values).map(|(&w, v)| w * v[j]).sum();
                hidden_row[j] + sigmoid(inputs.gate[j]) * attended
            })
            .collect();
        output.push(layer_norm_row(&fused, &inputs.ln_gain, &inputs.ln_bias));
    }
    Ok(output)
}
