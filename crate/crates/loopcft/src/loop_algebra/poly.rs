//! Exact multivariate bookkeeping for loop weights.
//!
//! Closed loops removed during diagram composition contribute one factor
//! each, keyed by their blob marks. [`WeightPolynomial`] records products
//! and sums of those factors exactly, over the symbol basis
//! `n, n1, n-n1, n2, n-n2, n12`, with rational coefficients. Numeric
//! evaluation happens only at comparison time.

use crate::loop_algebra::pattern::Mark;
use crate::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Symbol slots, in exponent-tuple order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Symbol {
    N,
    N1,
    /// `n - n1`
    M1,
    N2,
    /// `n - n2`
    M2,
    N12,
}

pub const SYMBOL_NAMES: [&str; 6] = ["n", "n1", "(n-n1)", "n2", "(n-n2)", "n12"];

/// Numeric values for the loop-weight symbols.
#[derive(Clone, Copy, Debug)]
pub struct LoopWeights {
    pub n: f64,
    pub n1: f64,
    pub n2: f64,
    pub n12: f64,
}

impl LoopWeights {
    pub fn bulk_only(n: f64) -> Self {
        LoopWeights {
            n,
            n1: f64::NAN,
            n2: f64::NAN,
            n12: f64::NAN,
        }
    }

    fn symbol(&self, s: usize) -> f64 {
        match s {
            0 => self.n,
            1 => self.n1,
            2 => self.n - self.n1,
            3 => self.n2,
            4 => self.n - self.n2,
            5 => self.n12,
            _ => unreachable!(),
        }
    }
}

type Expt = [u8; 6];

/// Polynomial in the loop-weight symbols with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightPolynomial {
    terms: BTreeMap<Expt, Rat>,
}

impl WeightPolynomial {
    pub fn zero() -> Self {
        WeightPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 6], c);
        }
        WeightPolynomial { terms }
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut e = [0u8; 6];
        e[s as usize] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Rat::one());
        WeightPolynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Weight of a closed loop carrying the given marks.
    ///
    /// Pure classes are single symbols; classes mixing a blob with the
    /// opposite boundary's unblob expand by inclusion-exclusion.
    pub fn loop_class(lm: Mark, rm: Mark) -> Self {
        use Mark::*;
        use Symbol::*;
        match (lm, rm) {
            (None, None) => Self::symbol(N),
            (Blob, None) => Self::symbol(N1),
            (Unblob, None) => Self::symbol(M1),
            (None, Blob) => Self::symbol(N2),
            (None, Unblob) => Self::symbol(M2),
            (Blob, Blob) => Self::symbol(N12),
            (Blob, Unblob) => Self::symbol(N1) - Self::symbol(N12),
            (Unblob, Blob) => Self::symbol(N2) - Self::symbol(N12),
            // n - n1 - n2 + n12
            (Unblob, Unblob) => Self::symbol(M1) - Self::symbol(N2) + Self::symbol(N12),
        }
    }

    pub fn eval(&self, w: &LoopWeights) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = crate::scalar::LoopScalar::to_f64(c);
            for (s, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t *= w.symbol(s);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact evaluation at rational parameter values.
    pub fn eval_rat(&self, n: &Rat, n1: &Rat, n2: &Rat, n12: &Rat) -> Rat {
        let vals = [
            n.clone(),
            n1.clone(),
            n - n1,
            n2.clone(),
            n - n2,
            n12.clone(),
        ];
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (s, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t = t * &vals[s];
                }
            }
            acc += t;
        }
        acc
    }

    fn insert(&mut self, e: Expt, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        WeightPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e, v.clone() * c))
                .collect(),
        }
    }

    /// Canonical form with the dependent symbols eliminated:
    /// `n-n1 -> n - n1`, `n-n2 -> n - n2`. Use this before testing
    /// identities for exact zero.
    pub fn normalized(&self) -> Self {
        let n = Self::symbol(Symbol::N);
        let m1 = n.clone() - Self::symbol(Symbol::N1);
        let m2 = n - Self::symbol(Symbol::N2);
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (s, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t = match s {
                        2 => &t * &m1,
                        4 => &t * &m2,
                        _ => {
                            let mut mono = [0u8; 6];
                            mono[s] = 1;
                            &t * &WeightPolynomial {
                                terms: [(mono, Rat::one())].into_iter().collect(),
                            }
                        }
                    };
                }
            }
            out = out + t;
        }
        out
    }

    /// Identically zero after eliminating dependent symbols.
    pub fn is_zero_normalized(&self) -> bool {
        self.normalized().is_zero()
    }
}

impl Add for WeightPolynomial {
    type Output = WeightPolynomial;
    fn add(self, rhs: WeightPolynomial) -> WeightPolynomial {
        let mut out = self;
        for (e, c) in rhs.terms {
            out.insert(e, c);
        }
        out
    }
}

impl Sub for WeightPolynomial {
    type Output = WeightPolynomial;
    fn sub(self, rhs: WeightPolynomial) -> WeightPolynomial {
        self + (-rhs)
    }
}

impl Neg for WeightPolynomial {
    type Output = WeightPolynomial;
    fn neg(self) -> WeightPolynomial {
        WeightPolynomial {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for WeightPolynomial {
    type Output = WeightPolynomial;
    fn mul(self, rhs: WeightPolynomial) -> WeightPolynomial {
        &self * &rhs
    }
}

impl Mul for &WeightPolynomial {
    type Output = WeightPolynomial;
    fn mul(self, rhs: &WeightPolynomial) -> WeightPolynomial {
        let mut out = WeightPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (k, x) in e.iter_mut().enumerate() {
                    *x = x.checked_add(eb[k]).expect("weight exponent overflow");
                }
                out.insert(e, ca.clone() * cb);
            }
        }
        out
    }
}

impl fmt::Display for WeightPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (s, &p) in e.iter().enumerate() {
                if p == 1 {
                    write!(f, " {}", SYMBOL_NAMES[s])?;
                } else if p > 1 {
                    write!(f, " {}^{}", SYMBOL_NAMES[s], p)?;
                }
            }
        }
        Ok(())
    }
}

/// Quantum-dimension flavors appearing in Markov-trace decompositions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DimFlavor {
    /// `D_L = sin (L+1)γ / sin γ`; Chebyshev in n.
    Plain,
    /// `D_L^blob = sin (r1+L)γ / sin r1 γ`; starts 1, n1.
    Blob,
    /// `D_L^unblob = sin (r1-L)γ / sin r1 γ`; starts 1, n-n1.
    Unblob,
    /// Open-boundary modified coefficients: starts 1, 0 (blobbed winding
    /// loops counted with fugacity zero).
    OpenBlob,
    /// Companion of `OpenBlob`: starts 1, n.
    OpenUnblob,
}

/// Exact quantum dimension as a polynomial, via the Chebyshev recurrence
/// `D_{L+1} = n D_L - D_{L-1}`.
pub fn dim_polynomial(l: usize, flavor: DimFlavor) -> WeightPolynomial {
    let n = WeightPolynomial::symbol(Symbol::N);
    let d1 = match flavor {
        DimFlavor::Plain | DimFlavor::OpenUnblob => n.clone(),
        DimFlavor::Blob => WeightPolynomial::symbol(Symbol::N1),
        DimFlavor::Unblob => WeightPolynomial::symbol(Symbol::M1),
        DimFlavor::OpenBlob => WeightPolynomial::zero(),
    };
    let mut prev = WeightPolynomial::one();
    if l == 0 {
        return prev;
    }
    let mut cur = d1;
    for _ in 1..l {
        let next = &n * &cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed-form quantum dimension.
///
/// `gamma` parameterizes `n = 2 cos γ`; `r1` is required for the blob and
/// unblob flavors. Fails on singular `sin r1 γ` (or `sin γ`).
pub fn quantum_dimension(
    l: usize,
    gamma: f64,
    r1: Option<f64>,
    flavor: DimFlavor,
) -> Result<f64, crate::loop_algebra::AlgebraError> {
    let lf = l as f64;
    let (num, den) = match flavor {
        DimFlavor::Plain => ((lf + 1.0) * gamma, gamma),
        DimFlavor::Blob => {
            let r1 = r1.ok_or(crate::loop_algebra::AlgebraError::MissingParameter("r1"))?;
            ((r1 + lf) * gamma, r1 * gamma)
        }
        DimFlavor::Unblob => {
            let r1 = r1.ok_or(crate::loop_algebra::AlgebraError::MissingParameter("r1"))?;
            ((r1 - lf) * gamma, r1 * gamma)
        }
        DimFlavor::OpenBlob => ((1.0 - lf) * gamma, gamma),
        DimFlavor::OpenUnblob => ((1.0 + lf) * gamma, gamma),
    };
    let d = den.sin();
    if d.abs() < 1e-13 {
        return Err(crate::loop_algebra::AlgebraError::SingularParameter {
            what: "sin of the quantum-dimension denominator",
            value: d,
        });
    }
    Ok(num.sin() / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn ring_ops() {
        let n = WeightPolynomial::symbol(Symbol::N);
        let n1 = WeightPolynomial::symbol(Symbol::N1);
        let p = (n.clone() + n1.clone()) * (n.clone() - n1.clone());
        let q = n.clone() * n - n1.clone() * n1;
        assert_eq!(p, q);
        let w = LoopWeights {
            n: 1.5,
            n1: 0.7,
            n2: 0.3,
            n12: 0.2,
        };
        assert!((p.eval(&w) - (1.5 * 1.5 - 0.7 * 0.7)).abs() < 1e-14);
    }

    #[test]
    fn exact_eval_matches_float() {
        let p = WeightPolynomial::loop_class(Mark::Unblob, Mark::Unblob);
        let v = p.eval_rat(&rat(3, 2), &rat(1, 3), &rat(1, 5), &rat(1, 7));
        // n - n1 - n2 + n12 = 3/2 - 1/3 - 1/5 + 1/7
        assert_eq!(v, rat(3, 2) - rat(1, 3) - rat(1, 5) + rat(1, 7));
    }

    #[test]
    fn chebyshev_first_values() {
        // D_0 = 1, D_1 = n, D_2 = n^2 - 1, D_3 = n(n^2 - 2)
        let w = LoopWeights::bulk_only(1.37);
        let n = 1.37f64;
        assert!((dim_polynomial(2, DimFlavor::Plain).eval(&w) - (n * n - 1.0)).abs() < 1e-14);
        assert!(
            (dim_polynomial(3, DimFlavor::Plain).eval(&w) - n * (n * n - 2.0)).abs() < 1e-14
        );
    }

    #[test]
    fn closed_form_matches_polynomial() {
        let gamma = 0.7f64;
        let r1 = 1.3f64;
        let n = 2.0 * gamma.cos();
        let n1 = ((r1 + 1.0) * gamma).sin() / (r1 * gamma).sin();
        let w = LoopWeights {
            n,
            n1,
            n2: 0.0,
            n12: 0.0,
        };
        for l in 0..=12 {
            for flavor in [
                DimFlavor::Plain,
                DimFlavor::Blob,
                DimFlavor::Unblob,
                DimFlavor::OpenBlob,
                DimFlavor::OpenUnblob,
            ] {
                let exact = dim_polynomial(l, flavor).eval(&w);
                let closed = quantum_dimension(l, gamma, Some(r1), flavor).unwrap();
                assert!(
                    (exact - closed).abs() < 1e-10,
                    "flavor {flavor:?} L={l}: {exact} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn spec_values() {
        // plain, L=2 -> n^2 - 1 at n = 2cos γ
        let gamma = 1.1;
        let n = 2.0 * f64::cos(gamma);
        let d2 = quantum_dimension(2, gamma, None, DimFlavor::Plain).unwrap();
        assert!((d2 - (n * n - 1.0)).abs() < 1e-12);
        // plain, L=0 -> 1
        assert!((quantum_dimension(0, gamma, None, DimFlavor::Plain).unwrap() - 1.0) < 1e-15);
        // open-modified blob, L=1 -> 0
        assert!(quantum_dimension(1, gamma, None, DimFlavor::OpenBlob)
            .unwrap()
            .abs()
            < 1e-15);
    }

    #[test]
    fn singular_parameter_reported() {
        // r1 γ = π makes sin r1 γ = 0
        let err = quantum_dimension(1, std::f64::consts::PI / 2.0, Some(2.0), DimFlavor::Blob);
        assert!(err.is_err());
    }
}
