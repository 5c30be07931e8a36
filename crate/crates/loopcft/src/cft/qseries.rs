//! Truncated power series in the modular nome with real exponents.
//!
//! Characters and annulus partition functions are sums of terms `c q^e`
//! whose exponents differ by non-integer conformal weights, so the series
//! is kept as a sparse, exponent-sorted term list. Every series carries a
//! cutoff: terms with exponents up to `cutoff` are exact, the rest are
//! dropped, and evaluation reports a certified tail bound.

use crate::scalar::LoopScalar;

const MERGE_EPS: f64 = 1e-9;

/// Sparse q-series with exact coefficients up to the exponent `cutoff`.
#[derive(Clone, Debug)]
pub struct QSeries<T = f64> {
    terms: Vec<(f64, T)>,
    cutoff: f64,
}

impl<T: LoopScalar> QSeries<T> {
    pub fn zero(cutoff: f64) -> Self {
        QSeries {
            terms: Vec::new(),
            cutoff,
        }
    }

    pub fn monomial(exponent: f64, coeff: T, cutoff: f64) -> Self {
        let mut s = Self::zero(cutoff);
        s.push(exponent, coeff);
        s
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn terms(&self) -> &[(f64, T)] {
        &self.terms
    }

    pub fn leading_exponent(&self) -> Option<f64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn push(&mut self, exponent: f64, coeff: T) {
        if exponent > self.cutoff || coeff.is_zero() {
            return;
        }
        let pos = self
            .terms
            .partition_point(|t| t.0 < exponent - MERGE_EPS);
        if pos < self.terms.len() && (self.terms[pos].0 - exponent).abs() <= MERGE_EPS {
            self.terms[pos].1 += coeff;
            if self.terms[pos].1.is_zero() {
                self.terms.remove(pos);
            }
        } else {
            self.terms.insert(pos, (exponent, coeff));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.cutoff.min(other.cutoff));
        for &(e, ref c) in &self.terms {
            out.push(e, c.clone());
        }
        for &(e, ref c) in &other.terms {
            out.push(e, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = Self::zero(self.cutoff);
        for &(e, ref c) in &self.terms {
            out.push(e, c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let la = self.leading_exponent().unwrap_or(0.0);
        let lb = other.leading_exponent().unwrap_or(0.0);
        let cutoff = (self.cutoff + lb).min(other.cutoff + la);
        let mut out = Self::zero(cutoff);
        for &(ea, ref ca) in &self.terms {
            for &(eb, ref cb) in &other.terms {
                let e = ea + eb;
                if e > cutoff {
                    break;
                }
                out.push(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Shift all exponents by `delta` (multiplication by `q^delta`).
    pub fn shifted(&self, delta: f64) -> Self {
        let mut out = Self::zero(self.cutoff + delta);
        for &(e, ref c) in &self.terms {
            out.push(e + delta, c.clone());
        }
        out
    }

    /// Evaluate at nome `q` together with a bound on the dropped tail.
    ///
    /// Coefficients of everything built here are dominated by partition
    /// numbers times the largest retained coefficient, so the tail is
    /// bounded by `A Σ_{k>0} p(k) q^(cutoff+k)` with
    /// `p(k) < exp(π sqrt(2k/3))`.
    pub fn eval_with_tail(&self, q: f64) -> (f64, f64) {
        assert!((0.0..1.0).contains(&q), "nome must be in [0, 1)");
        let value = self
            .terms
            .iter()
            .map(|(e, c)| c.to_f64() * q.powf(*e))
            .sum();
        let amax = self
            .terms
            .iter()
            .map(|(_, c)| c.to_f64().abs())
            .fold(1.0, f64::max);
        let mut tail = 0.0;
        let mut k = 1.0f64;
        loop {
            let t = (std::f64::consts::PI * (2.0 * k / 3.0).sqrt()).exp() * q.powf(self.cutoff + k);
            tail += t;
            if t < 1e-3 * tail * f64::EPSILON || k > 5000.0 {
                break;
            }
            k += 1.0;
        }
        (value, amax * tail)
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.eval_with_tail(q).0
    }
}

/// Partition numbers p(0..=m) by the Euler recurrence.
pub fn partition_numbers(m: usize) -> Vec<u128> {
    let mut p = vec![0u128; m + 1];
    p[0] = 1;
    for k in 1..=m {
        let mut acc: i128 = 0;
        let mut j = 1i64;
        loop {
            let g1 = (j * (3 * j - 1) / 2) as usize;
            let g2 = (j * (3 * j + 1) / 2) as usize;
            if g1 > k {
                break;
            }
            let sign = if j % 2 == 1 { 1i128 } else { -1i128 };
            acc += sign * p[k - g1] as i128;
            if g2 <= k {
                acc += sign * p[k - g2] as i128;
            }
            j += 1;
        }
        p[k] = acc as u128;
    }
    p
}

/// The expansion of `1/P(q) = 1/∏(1-q^k)` to the requested order.
pub fn inverse_euler_product<T: LoopScalar + From<u32>>(order: usize) -> QSeries<T> {
    let p = partition_numbers(order);
    let mut s = QSeries::zero(order as f64);
    for (k, &pk) in p.iter().enumerate() {
        // partition numbers exceed u32 beyond k ~ 127; split the factor
        let mut c = T::zero();
        let mut rem = pk;
        let chunk = u32::MAX as u128;
        while rem > 0 {
            let take = rem.min(chunk) as u32;
            c += T::from(take);
            rem -= take as u128;
        }
        s.push(k as f64, c);
    }
    s
}

/// Euler product `P(q) = ∏(1-q^k)` via the pentagonal number theorem.
pub fn euler_product<T: LoopScalar + From<u32>>(order: usize) -> QSeries<T> {
    let mut s = QSeries::zero(order as f64);
    s.push(0.0, T::one());
    let mut j = 1i64;
    loop {
        let g1 = j * (3 * j - 1) / 2;
        let g2 = j * (3 * j + 1) / 2;
        if g1 as usize > order {
            break;
        }
        let sign = if j % 2 == 1 {
            -T::one()
        } else {
            T::one()
        };
        s.push(g1 as f64, sign.clone());
        if g2 as usize <= order {
            s.push(g2 as f64, sign);
        }
        j += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_number_table() {
        let p = partition_numbers(100);
        assert_eq!(p[5], 7);
        assert_eq!(p[10], 42);
        assert_eq!(p[100], 190_569_292);
    }

    #[test]
    fn euler_product_inverts() {
        let p: QSeries<f64> = euler_product(60);
        let ip: QSeries<f64> = inverse_euler_product(60);
        let prod = p.mul(&ip);
        for &(e, c) in prod.terms() {
            let expect = if e.abs() < 1e-9 { 1.0 } else { 0.0 };
            assert!((c - expect).abs() < 1e-9, "exponent {e}: {c}");
        }
    }

    #[test]
    fn eval_and_tail() {
        let s: QSeries<f64> = inverse_euler_product(200);
        let q: f64 = 0.3;
        let (v, tail) = s.eval_with_tail(q);
        let exact: f64 = (1..400).map(|k| 1.0 / (1.0 - q.powi(k))).product();
        assert!(tail < 1e-20);
        assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
    }

    #[test]
    fn merge_and_ring_ops() {
        let mut a: QSeries<f64> = QSeries::zero(10.0);
        a.push(0.5, 1.0);
        a.push(0.5 + 1e-12, 2.0);
        assert_eq!(a.terms().len(), 1);
        let b = QSeries::monomial(1.0, 3.0, 10.0);
        let c = a.mul(&b);
        assert!((c.leading_exponent().unwrap() - 1.5).abs() < 1e-12);
        assert!((c.eval(0.5) - 9.0 * 0.5f64.powf(1.5)).abs() < 1e-12);
    }
}
