use crate::error::{domain, Error, Result};

/// Null sequence of scales `ε_1 > ε_2 > …` built from contraction factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSequence {
    pub epsilons: Vec<f64>,
    pub alpha: f64,
}

impl ScaleSequence {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.epsilons.windows(2).all(|w| w[1] < w[0])
    }
}

/// `ε_n = (Π_{k≤n} factor_k)^(-1/α)` for every prefix of `factors`.
///
/// Every factor must exceed 1; otherwise the recursion is not expanding in
/// scale space and no regularizing sequence exists.
pub fn scale_regularizing_sequence(factors: &[f64], alpha: f64) -> Result<ScaleSequence> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("alpha must lie in (0, 1], got {alpha}"));
    }
    let mut epsilons = Vec::with_capacity(factors.len());
    let mut log_prod = 0.0;
    for (i, &f) in factors.iter().enumerate() {
        if !(f > 1.0) || !f.is_finite() {
            return Err(Error::Hypothesis(format!(
                "factor {i} is {f}; every derivative factor must exceed 1"
            )));
        }
        log_prod += f.log2();
        epsilons.push((-log_prod / alpha).exp2());
    }
    Ok(ScaleSequence { epsilons, alpha })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_case() {
        let s = scale_regularizing_sequence(&[2.0, 2.0, 2.0], 1.0).unwrap();
        assert_eq!(s.epsilons, vec![0.5, 0.25, 0.125]);
        assert!(s.is_strictly_decreasing());
    }

    #[test]
    fn single_factor_half_order() {
        let s = scale_regularizing_sequence(&[4.0], 0.5).unwrap();
        assert_eq!(s.epsilons, vec![1.0 / 16.0]);
    }

    #[test]
    fn contraction_violates_hypothesis() {
        let e = scale_regularizing_sequence(&[2.0, 0.5, 3.0], 1.0).unwrap_err();
        assert!(matches!(e, Error::Hypothesis(_)));
        assert!(scale_regularizing_sequence(&[2.0, 1.0], 1.0).is_err());
        assert!(scale_regularizing_sequence(&[2.0], 0.0).is_err());
        assert!(scale_regularizing_sequence(&[2.0], 1.5).is_err());
    }
}
