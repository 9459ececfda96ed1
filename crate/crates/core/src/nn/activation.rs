use super::FeatureTensor;

pub const ELU_ALPHA: f64 = 1.0;

#[inline]
pub fn elu_scalar(x: f64, alpha: f64) -> f64 {
    if x >= 0.0 {
        x
    } else {
        alpha * libm::expm1(x)
    }
}

pub fn elu(input: &FeatureTensor, alpha: f64) -> FeatureTensor {
    FeatureTensor {
        data: input.data.iter().map(|&v| elu_scalar(v, alpha)).collect(),
        ..*input
    }
}

/// `grad_in = grad_out · elu'(x)`, using the cached output for the negative
/// branch (`elu'(x) = elu(x) + alpha` there).
pub fn elu_backward(
    grad_out: &FeatureTensor,
    input: &FeatureTensor,
    output: &FeatureTensor,
    alpha: f64,
) -> FeatureTensor {
    let mut g = grad_out.clone();
    for ((d, &x), &y) in g.data.iter_mut().zip(&input.data).zip(&output.data) {
        if x < 0.0 {
            *d *= y + alpha;
        }
    }
    g
}
