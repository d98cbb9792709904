//! Field-element abstraction with three realizations: exact arbitrary-precision
//! rationals, forward-mode dual numbers over any base field, and `f64`.
//!
//! All of the vector fields and birational maps in this crate are rational
//! functions with small integer coefficients, so they can be written once,
//! generically over [`Scalar`], and evaluated exactly (identity testing),
//! with derivatives (dual numbers), or fast (floats).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact arbitrary-precision rational. Always stored in lowest terms with a
/// positive denominator (the representation `num_rational` canonicalizes to).
pub type Rat = BigRational;

/// A field element.
///
/// Arithmetic is by value, with `value op &value` also available so that
/// formula code can mix owned intermediates and borrowed inputs freely.
/// `&value op ...` combinations are captured by [`ScalarRef`].
pub trait Scalar:
    Sized
    + Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'r> Add<&'r Self, Output = Self>
    + for<'r> Sub<&'r Self, Output = Self>
    + for<'r> Mul<&'r Self, Output = Self>
    + for<'r> Div<&'r Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;

    /// The exact ratio n/d.
    fn ratio(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }

    /// Whether the element is zero, i.e. not invertible. For dual numbers
    /// this looks only at the value part: a dual is invertible iff its value is.
    fn is_zero(&self) -> bool;
}

/// Operations available on `&S`, mirroring [`Scalar`]'s by-value surface.
/// Bound in formula code as `for<'a> &'a S: ScalarRef<S>` so state coordinates
/// can be borrowed once and combined without explicit clones.
pub trait ScalarRef<S>:
    Sized
    + Add<S, Output = S>
    + Sub<S, Output = S>
    + Mul<S, Output = S>
    + Div<S, Output = S>
    + for<'r> Add<&'r S, Output = S>
    + for<'r> Sub<&'r S, Output = S>
    + for<'r> Mul<&'r S, Output = S>
    + for<'r> Div<&'r S, Output = S>
    + Neg<Output = S>
{
}

impl<S, T> ScalarRef<S> for T where
    T: Sized
        + Add<S, Output = S>
        + Sub<S, Output = S>
        + Mul<S, Output = S>
        + Div<S, Output = S>
        + for<'r> Add<&'r S, Output = S>
        + for<'r> Sub<&'r S, Output = S>
        + for<'r> Mul<&'r S, Output = S>
        + for<'r> Div<&'r S, Output = S>
        + Neg<Output = S>
{
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn from_int(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        <Rat as Zero>::is_zero(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

/// The exact ratio n/d as a [`Rat`].
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse an exact rational from its canonical string form: `"p/q"` or an
/// integer `"p"`. This is the inverse of `Display` on [`Rat`].
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| Error::Parse(format!("invalid rational {s:?}: {e}")))
}

/// Convert an exact rational to the nearest `f64`.
pub fn rat_to_f64(x: &Rat) -> f64 {
    // Scale into i128 range first so that huge numerators stay accurate.
    let num = x.numer();
    let den = x.denom();
    match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
        (Ok(n), Ok(d)) if d != 0.0 && n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Fall back to a sign times exp2 estimate for out-of-range parts.
            let bits = num.bits() as i64 - den.bits() as i64;
            let sign = if num.is_negative() { -1.0 } else { 1.0 };
            sign * (bits as f64).exp2()
        }
    }
}

/// Forward-mode dual number over a base field: a value plus a vector of
/// partial derivatives. Arithmetic propagates the partials by the product
/// and quotient rules, exactly when the base field is exact.
///
/// Constants carry an empty partials vector, which behaves as all-zero:
/// binary operations zero-extend the shorter side.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<S> {
    pub val: S,
    pub grad: Vec<S>,
}

impl<S: Scalar> Dual<S> {
    /// A constant: value with no dependence on any seeded variable.
    pub fn constant(val: S) -> Self {
        Dual { val, grad: Vec::new() }
    }

    /// The `index`-th of `arity` seeded variables: unit perturbation in
    /// coordinate `index`.
    pub fn variable(val: S, index: usize, arity: usize) -> Self {
        assert!(index < arity);
        let mut grad = vec![S::zero(); arity];
        grad[index] = S::one();
        Dual { val, grad }
    }

    /// Seed one variable per entry of `values`, in order.
    pub fn seed(values: &[S]) -> Vec<Self> {
        let n = values.len();
        values
            .iter()
            .enumerate()
            .map(|(i, v)| Dual::variable(v.clone(), i, n))
            .collect()
    }

    /// Partial derivative with respect to seeded variable `k` (zero when the
    /// value never touched that variable).
    pub fn partial(&self, k: usize) -> S {
        self.grad.get(k).cloned().unwrap_or_else(S::zero)
    }

    fn zip_grad(a: &[S], b: &[S], f: impl Fn(&S, &S) -> S) -> Vec<S> {
        let n = a.len().max(b.len());
        let zero = S::zero();
        (0..n)
            .map(|i| f(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect()
    }
}

impl<S: Scalar> fmt::Display for Dual<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.val)?;
        if !self.grad.is_empty() {
            write!(f, " + [")?;
            for (i, g) in self.grad.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, "]eps")?;
        }
        Ok(())
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Dual<S>;
    fn add(self, rhs: Self) -> Dual<S> {
        Dual {
            grad: Self::zip_grad(&self.grad, &rhs.grad, |a, b| a.clone() + b),
            val: self.val + rhs.val,
        }
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Dual<S>;
    fn sub(self, rhs: Self) -> Dual<S> {
        Dual {
            grad: Self::zip_grad(&self.grad, &rhs.grad, |a, b| a.clone() - b),
            val: self.val - rhs.val,
        }
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Dual<S>;
    #[allow(clippy::suspicious_arithmetic_impl)] // product rule mixes + and *
    fn mul(self, rhs: Self) -> Dual<S> {
        // (a + a' eps)(b + b' eps) = ab + (a' b + a b') eps
        Dual {
            grad: Self::zip_grad(&self.grad, &rhs.grad, |da, db| {
                da.clone() * &rhs.val + self.val.clone() * db
            }),
            val: self.val.clone() * &rhs.val,
        }
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Dual<S>;
    #[allow(clippy::suspicious_arithmetic_impl)] // quotient rule mixes -, * and /
    fn div(self, rhs: Self) -> Dual<S> {
        // (a/b)' = (a' b - a b') / b^2
        let den_sq = rhs.val.clone() * &rhs.val;
        Dual {
            grad: Self::zip_grad(&self.grad, &rhs.grad, |da, db| {
                (da.clone() * &rhs.val - self.val.clone() * db) / &den_sq
            }),
            val: self.val.clone() / &rhs.val,
        }
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Dual<S>;
    fn neg(self) -> Dual<S> {
        Dual {
            val: -self.val,
            grad: self.grad.into_iter().map(|g| -g).collect(),
        }
    }
}

impl<S: Scalar> Neg for &Dual<S> {
    type Output = Dual<S>;
    fn neg(self) -> Dual<S> {
        -self.clone()
    }
}

macro_rules! dual_ref_binop {
    ($trait:ident, $method:ident) => {
        impl<S: Scalar> $trait<&Dual<S>> for Dual<S> {
            type Output = Dual<S>;
            fn $method(self, rhs: &Dual<S>) -> Dual<S> {
                self.$method(rhs.clone())
            }
        }
        impl<S: Scalar> $trait<Dual<S>> for &Dual<S> {
            type Output = Dual<S>;
            fn $method(self, rhs: Dual<S>) -> Dual<S> {
                self.clone().$method(rhs)
            }
        }
        impl<S: Scalar> $trait<&Dual<S>> for &Dual<S> {
            type Output = Dual<S>;
            fn $method(self, rhs: &Dual<S>) -> Dual<S> {
                self.clone().$method(rhs.clone())
            }
        }
    };
}

dual_ref_binop!(Add, add);
dual_ref_binop!(Sub, sub);
dual_ref_binop!(Mul, mul);
dual_ref_binop!(Div, div);

impl<S: Scalar> Scalar for Dual<S> {
    fn zero() -> Self {
        Dual::constant(S::zero())
    }
    fn one() -> Self {
        Dual::constant(S::one())
    }
    fn from_int(n: i64) -> Self {
        Dual::constant(S::from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.val.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-50i64..=50, 1i64..=50).prop_map(|(n, d)| rat(n, d))
    }

    #[test]
    fn rat_canonical_form() {
        let x = rat(-6, -8);
        assert_eq!(x, rat(3, 4));
        assert!(x.denom() > &BigInt::from(0));
        assert_eq!(x.to_string(), "3/4");
        assert_eq!(rat(10, 2).to_string(), "5");
        assert_eq!(rat(3, -4).to_string(), "-3/4");
    }

    #[test]
    fn rat_parse_roundtrip() {
        for s in ["-3/4", "5", "0", "17/3", "-1000000000000000001/7"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    proptest! {
        #[test]
        fn rat_add_sub_roundtrip(a in arb_rat(), b in arb_rat()) {
            prop_assert_eq!((a.clone() + &b) - &b, a);
        }

        #[test]
        fn rat_mul_div_roundtrip(a in arb_rat(), b in arb_rat()) {
            prop_assume!(!Scalar::is_zero(&b));
            prop_assert_eq!((a.clone() * &b) / &b, a);
        }

        #[test]
        fn dual_product_rule_exact(
            a in arb_rat(), b in arb_rat(), da in arb_rat(), db in arb_rat()
        ) {
            // d(xy) = x dy + y dx, checked exactly over the rationals.
            let x = Dual { val: a.clone(), grad: vec![da.clone()] };
            let y = Dual { val: b.clone(), grad: vec![db.clone()] };
            let xy = x * y;
            prop_assert_eq!(xy.partial(0), a.clone() * &db + b.clone() * &da);
            prop_assert_eq!(xy.val, a * &b);
        }

        #[test]
        fn dual_quotient_rule_exact(
            a in arb_rat(), b in arb_rat(), da in arb_rat(), db in arb_rat()
        ) {
            prop_assume!(!Scalar::is_zero(&b));
            let x = Dual { val: a.clone(), grad: vec![da.clone()] };
            let y = Dual { val: b.clone(), grad: vec![db.clone()] };
            let q = x / y;
            prop_assert_eq!(q.partial(0), (da * &b - a.clone() * &db) / (b.clone() * &b));
            prop_assert_eq!(q.val, a / &b);
        }
    }

    #[test]
    fn dual_constant_vs_padded_grad() {
        let c = Dual::constant(rat(2, 1));
        let x = Dual::variable(rat(3, 1), 0, 2);
        let y = c + x;
        assert_eq!(y.val, rat(5, 1));
        assert_eq!(y.partial(0), rat(1, 1));
        assert_eq!(y.partial(1), rat(0, 1));
        assert_eq!(y.partial(7), rat(0, 1));
    }

    #[test]
    fn dual_seed_identity_gradients() {
        let vars = Dual::seed(&[rat(1, 2), rat(1, 3), rat(1, 5)]);
        for (i, v) in vars.iter().enumerate() {
            for k in 0..3 {
                assert_eq!(v.partial(k), if k == i { rat(1, 1) } else { rat(0, 1) });
            }
        }
    }

    #[test]
    fn rat_to_f64_basic() {
        assert_eq!(rat_to_f64(&rat(1, 4)), 0.25);
        assert_eq!(rat_to_f64(&rat(-3, 2)), -1.5);
    }
}
