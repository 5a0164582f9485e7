//! Truncated Taylor series, used for exact low-order derivatives of the
//! closed-form test functions.

#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn constant(c: f64, order: usize) -> Self {
        let mut v = vec![0.0; order + 1];
        v[0] = c;
        Self(v)
    }

    /// The identity `t ↦ t` expanded at `t0`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut v = vec![0.0; order + 1];
        v[0] = t0;
        if order >= 1 {
            v[1] = 1.0;
        }
        Self(v)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.0.get(k).copied().unwrap_or(0.0) * fact
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| v * c).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn add_const(&self, c: f64) -> Self {
        let mut v = self.0.clone();
        v[0] += c;
        Self(v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.0.len();
        Self(
            (0..n)
                .map(|k| (0..=k).map(|i| self.0[i] * o.0[k - i]).sum())
                .collect(),
        )
    }

    pub fn recip(&self) -> Self {
        let n = self.0.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / self.0[0];
        for k in 1..n {
            let s: f64 = (1..=k).map(|i| self.0[i] * r[k - i]).sum();
            r[k] = -s * r[0];
        }
        Self(r)
    }

    pub fn exp(&self) -> Self {
        // f' = a' f, coefficientwise
        let n = self.0.len();
        let mut e = vec![0.0; n];
        e[0] = self.0[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|i| i as f64 * self.0[i] * e[k - i]).sum();
            e[k] = s / k as f64;
        }
        Self(e)
    }

    /// `cosh` of the jet.
    pub fn cosh(&self) -> Self {
        self.exp().add(&self.scale(-1.0).exp()).scale(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_variable() {
        let j = Jet::variable(0.3, 5).exp();
        for k in 0..=5 {
            assert!((j.derivative(k) - 0.3f64.exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn reciprocal() {
        // 1/(1-t) = Σ t^k at 0
        let j = Jet::variable(0.0, 4).scale(-1.0).add_const(1.0).recip();
        assert_eq!(j.0, vec![1.0; 5]);
    }
}
