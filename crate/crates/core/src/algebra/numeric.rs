//! Flat `f64` copies of exact polynomials for fast repeated evaluation.

use super::SparsePoly;

#[derive(Clone, Debug)]
pub struct NumericPoly {
    nvars: usize,
    maxdeg: usize,
    // exps[t * nvars + i] is the exponent of x_i in term t.
    exps: Vec<u8>,
    coefs: Vec<f64>,
}

impl NumericPoly {
    pub fn from_poly(p: &SparsePoly) -> Self {
        let nvars = p.nvars();
        let mut exps = Vec::with_capacity(p.len() * nvars);
        let mut coefs = Vec::with_capacity(p.len());
        let mut maxdeg = 0;
        for (m, c) in p.terms() {
            for &e in m.exponents() {
                exps.push(u8::try_from(e).expect("exponent fits in u8"));
                maxdeg = maxdeg.max(e as usize);
            }
            coefs.push(c.to_f64());
        }
        NumericPoly { nvars, maxdeg, exps, coefs }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.coefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefs.is_empty()
    }

    /// Table `t[i * (maxdeg + 1) + e] = x_i^e`, shareable across polynomials
    /// whose `maxdeg` does not exceed `maxdeg`.
    pub fn power_table(x: &[f64], maxdeg: usize) -> Vec<f64> {
        let stride = maxdeg + 1;
        let mut t = vec![1.0; x.len() * stride];
        for (i, &xi) in x.iter().enumerate() {
            for e in 1..stride {
                t[i * stride + e] = t[i * stride + e - 1] * xi;
            }
        }
        t
    }

    pub fn max_exponent(&self) -> usize {
        self.maxdeg
    }

    /// Evaluates with a table from [`NumericPoly::power_table`] built with
    /// the given `maxdeg`.
    pub fn eval_with(&self, table: &[f64], maxdeg: usize) -> f64 {
        debug_assert!(self.maxdeg <= maxdeg);
        let stride = maxdeg + 1;
        let mut sum = 0.0;
        for (t, &c) in self.coefs.iter().enumerate() {
            let mut v = c;
            for (i, &e) in self.exps[t * self.nvars..(t + 1) * self.nvars].iter().enumerate() {
                if e != 0 {
                    v *= table[i * stride + e as usize];
                }
            }
            sum += v;
        }
        sum
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars);
        self.eval_with(&Self::power_table(x, self.maxdeg), self.maxdeg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_default;

    #[test]
    fn matches_exact_evaluation() {
        let p = parse_default("3*x1^4 - sqrt5*x1*x2^2 + 1/7*x3 - 2", 3).unwrap();
        let n = NumericPoly::from_poly(&p);
        let x = [0.3, -1.2, 2.5];
        assert!((n.eval(&x) - p.eval_f64(&x)).abs() < 1e-12);
        assert_eq!(n.len(), 4);
        assert_eq!(n.max_exponent(), 4);
    }

    #[test]
    fn zero_polynomial() {
        let n = NumericPoly::from_poly(&SparsePoly::zero(2));
        assert!(n.is_empty());
        assert_eq!(n.eval(&[1.0, 2.0]), 0.0);
    }
}
