//! The Lobachevsky function `𝓛(θ) = −∫₀^θ ln|2 sin x| dx`.
//!
//! After reducing `θ` to `(−π/2, π/2]` (𝓛 is odd and π-periodic), we use
//!
//! ```text
//! 𝓛(θ) = θ − θ ln|2θ| + Σ_{k≥1} a_k θ^{2k+1},
//! a_k = |B_{2k}| 4^k / (2k · (2k)! · (2k+1)) = T_k / ((4^k − 1)(2k)!(2k+1)),
//! ```
//!
//! with `T_k` the tangent numbers, obtained by integrating the expansion of
//! `ln(sin x / x)`. Since `|B_{2k}| = 2(2k)! ζ(2k)/(2π)^{2k}`, the k-th term
//! equals `ζ(2k)|θ| r^k / (k(2k+1))` with `r = (θ/π)² ≤ 1/4`, so the tail
//! after `J` terms is at most
//!
//! ```text
//! ζ(2)|θ| r^{J+1} / ((J+1)(2J+3)(1 − r)) ≤ 1.1 · 4^{-J-1} / J²,
//! ```
//!
//! and `J = ⌈(bits + guard)/2⌉` terms push it below the working precision.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::real::{BigReal, RealContext, GUARD_BITS};

/// Number of series terms used for a given stated precision.
pub fn series_terms(bits: usize) -> usize {
    (bits + GUARD_BITS).div_ceil(2) + 2
}

/// Upper bound on the series tail after `terms` terms at `|θ| ≤ π/2`.
pub fn truncation_bound(terms: usize) -> f64 {
    let j = terms as f64;
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    let r: f64 = 0.25;
    zeta2 * std::f64::consts::FRAC_PI_2 * r.powi(terms as i32 + 1)
        / ((j + 1.0) * (2.0 * j + 3.0) * (1.0 - r))
}

/// Tangent numbers `T_1 = 1, T_2 = 2, T_3 = 16, …` (integer recurrence).
pub fn tangent_numbers(count: usize) -> Vec<BigInt> {
    if count == 0 {
        return Vec::new();
    }
    let mut t = vec![BigInt::zero(); count + 1];
    t[1] = BigInt::one();
    for k in 2..=count {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=count {
        for j in k..=count {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    t.remove(0);
    t
}

/// Evaluator holding the series coefficients for one precision.
#[derive(Debug)]
pub struct Lobachevsky {
    ctx: RealContext,
    coeffs: Vec<BigReal>,
}

impl Lobachevsky {
    pub fn new(ctx: RealContext) -> Self {
        let bits = ctx.precision();
        let terms = series_terms(bits);
        let tan = tangent_numbers(terms);
        let mut fact = BigInt::one(); // (2k)!
        let mut four = BigInt::one(); // 4^k
        let mut coeffs = Vec::with_capacity(terms);
        for (i, tk) in tan.iter().enumerate() {
            let k = i + 1;
            fact *= (2 * k - 1) * (2 * k);
            four *= 4;
            let den = (&four - 1u32) * &fact * (2 * k + 1);
            coeffs.push(&BigReal::from_bigint(tk, bits) / &BigReal::from_bigint(&den, bits));
        }
        Self { ctx, coeffs }
    }

    pub fn context(&mut self) -> &mut RealContext {
        &mut self.ctx
    }

    pub fn precision(&self) -> usize {
        self.ctx.precision()
    }

    /// `𝓛(θ)` for any real `θ`.
    pub fn eval(&mut self, theta: &BigReal) -> BigReal {
        let pi = self.ctx.pi();
        // θ − kπ with k = round(θ/π) lands in [−π/2, π/2]
        let k = (theta / &pi).round_to_i64();
        let t = theta - &(&pi * &self.ctx.int(k));
        if t.is_zero() {
            return self.ctx.int(0);
        }
        let sign_neg = t.is_negative();
        let t = t.abs();
        let two_t = &t * &self.ctx.int(2);
        let log = self.ctx.ln(&two_t).expect("positive");
        let mut sum = &t - &(&t * &log);
        let t2 = &t * &t;
        let mut pow = &t2 * &t; // θ^{2k+1}
        for a in &self.coeffs {
            sum = &sum + &(a * &pow);
            pow = &pow * &t2;
        }
        if sign_neg {
            -sum
        } else {
            sum
        }
    }

    /// `𝓛(πa/b)`.
    pub fn eval_pi_ratio(&mut self, a: i64, b: i64) -> BigReal {
        let theta = self.ctx.pi_ratio(a, b);
        self.eval(&theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_numbers_start_right() {
        let t: Vec<i64> = tangent_numbers(5)
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(t, vec![1, 2, 16, 272, 7936]);
    }

    #[test]
    fn bound_is_below_working_precision() {
        for bits in [32, 64, 128, 256, 512] {
            let b = truncation_bound(series_terms(bits));
            assert!(b < 2f64.powi(-((bits + GUARD_BITS) as i32)), "bits={bits}");
        }
    }

    #[test]
    fn known_values() {
        let mut l = Lobachevsky::new(RealContext::new(256).unwrap());
        assert!(l.eval(&l.ctx.int(0)).is_zero());
        let v = l.eval_pi_ratio(1, 4);
        // Catalan's constant / 2
        let g_half = l.ctx.parse("0.457982797088609507527301757466192055387074687140836067133249").unwrap();
        assert!((&v - &g_half).abs() < l.ctx.ten_pow_neg(45));
        // 𝓛(π/2) = 0
        assert!(l.eval_pi_ratio(1, 2).abs() < l.ctx.ten_pow_neg(70));
    }

    #[test]
    fn odd_and_periodic() {
        let mut l = Lobachevsky::new(RealContext::new(128).unwrap());
        let x = l.ctx.ratio(7, 10);
        let a = l.eval(&x);
        let b = l.eval(&-&x);
        let shifted = &x + &l.ctx.pi();
        let c = l.eval(&shifted);
        let tol = l.ctx.ten_pow_neg(30);
        assert!((&a + &b).abs() < tol);
        assert!((&a - &c).abs() < tol);
    }
}
