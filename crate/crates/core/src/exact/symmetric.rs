//! Symmetric functions evaluated on an arithmetic progression
//! `X = (x, x + 1, ..., x + N - 1)`.

use serde::{Deserialize, Serialize};

use super::rational::ExactRational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetricEvalContext {
    pub base: ExactRational,
    pub count: usize,
}

impl SymmetricEvalContext {
    pub fn new(base: ExactRational, count: usize) -> Self {
        SymmetricEvalContext { base, count }
    }

    pub fn variables(&self) -> impl Iterator<Item = ExactRational> + '_ {
        (0..self.count).map(move |i| &self.base + ExactRational::from(i))
    }

    /// `p_m(X)`; the empty sum is 0.
    pub fn power_sum(&self, m: u32) -> ExactRational {
        self.variables().map(|v| v.pow(m as i32)).sum()
    }

    /// `sigma_l(X)`, the coefficient of `u^l` in `prod (1 + X_i u)`.
    pub fn elementary_symmetric(&self, l: usize) -> ExactRational {
        if l > self.count {
            return ExactRational::zero();
        }
        let mut coeffs = vec![ExactRational::zero(); l + 1];
        coeffs[0] = ExactRational::one();
        for v in self.variables() {
            for j in (1..=l).rev() {
                let add = &coeffs[j - 1] * &v;
                coeffs[j] += add;
            }
        }
        coeffs.swap_remove(l)
    }

    /// `h_l(X)`, the coefficient of `u^l` in `prod 1 / (1 - X_i u)`.
    pub fn complete_homogeneous(&self, l: usize) -> ExactRational {
        let mut coeffs = vec![ExactRational::zero(); l + 1];
        coeffs[0] = ExactRational::one();
        for v in self.variables() {
            // multiply by 1/(1 - v u): c_j += v * c_{j-1}, ascending
            for j in 1..=l {
                let add = &coeffs[j - 1] * &v;
                coeffs[j] += add;
            }
        }
        coeffs.swap_remove(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn direct_values() {
        let c = SymmetricEvalContext::new(q(0, 1), 3);
        assert_eq!(c.power_sum(1), q(3, 1));
        let c = SymmetricEvalContext::new(q(1, 2), 2);
        assert_eq!(c.power_sum(2), q(5, 2));
        let e = SymmetricEvalContext::new(q(7, 3), 0);
        assert_eq!(e.power_sum(4), q(0, 1));
        assert_eq!(e.elementary_symmetric(0), q(1, 1));
        assert_eq!(e.complete_homogeneous(0), q(1, 1));
        let c = SymmetricEvalContext::new(q(1, 1), 3);
        assert_eq!(c.elementary_symmetric(2), q(11, 1));
        let c = SymmetricEvalContext::new(q(1, 1), 2);
        assert_eq!(c.complete_homogeneous(2), q(7, 1));
    }
}
