//! Reference arithmetic for the integration tests: exact rationals and
//! 256-bit fixed point, sharing no code with the library.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const PREC: u64 = 256;

/// Fixed-point real `value / 2^PREC`.
#[derive(Clone, Debug)]
pub struct Fx(pub BigInt);

impl Fx {
    fn unit() -> BigInt {
        BigInt::one() << PREC
    }

    pub fn int(n: i64) -> Fx {
        Fx(BigInt::from(n) << PREC)
    }

    pub fn big(n: &BigUint) -> Fx {
        Fx(BigInt::from(n.clone()) << PREC)
    }

    pub fn ratio(r: &BigRational) -> Fx {
        Fx((r.numer() << PREC) / r.denom())
    }

    pub fn f64(x: f64) -> Fx {
        Fx::ratio(&exact(x))
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        Fx((&self.0 * &o.0) >> PREC)
    }

    pub fn div(&self, o: &Fx) -> Fx {
        Fx((&self.0 << PREC) / &o.0)
    }

    pub fn sqrt(&self) -> Fx {
        Fx((&self.0 << PREC).sqrt())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `atanh(1/x)` for integer `x > 1`.
    fn atanh_inv(x: i64) -> Fx {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = Fx::unit() / &x;
        let mut sum = BigInt::zero();
        let mut k = 1u32;
        while !power.is_zero() {
            sum += &power / BigInt::from(k);
            power /= &x2;
            k += 2;
        }
        Fx(sum)
    }

    /// `atan(1/x)` for integer `x > 1`.
    fn atan_inv(x: i64) -> Fx {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = Fx::unit() / &x;
        let mut sum = BigInt::zero();
        let mut k = 1u32;
        let mut sign = true;
        while !power.is_zero() {
            let term = &power / BigInt::from(k);
            if sign {
                sum += term;
            } else {
                sum -= term;
            }
            sign = !sign;
            power /= &x2;
            k += 2;
        }
        Fx(sum)
    }

    /// Machin's formula.
    pub fn pi() -> Fx {
        let a = Fx::atan_inv(5);
        let b = Fx::atan_inv(239);
        Fx(a.0 * 16 - b.0 * 4)
    }

    pub fn ln2() -> Fx {
        Fx(Fx::atanh_inv(3).0 * 2)
    }

    /// Natural log of a positive value: scale into `[1, 2)` by a power of
    /// two, then `ln m = 2·atanh((m−1)/(m+1))`.
    pub fn ln(&self) -> Fx {
        assert!(self.0.is_positive(), "ln of non-positive value");
        let k = self.0.bits() as i64 - PREC as i64 - 1;
        let m = if k >= 0 {
            &self.0 >> k as u64
        } else {
            &self.0 << (-k) as u64
        };
        let m = Fx(m);
        let one = Fx::int(1);
        let z = m.sub(&one).div(&m.add(&one));
        let z2 = z.mul(&z);
        let mut power = z.clone();
        let mut sum = BigInt::zero();
        let mut j = 1u32;
        while !power.is_zero() {
            sum += &power.0 / BigInt::from(j);
            power = power.mul(&z2);
            j += 2;
        }
        Fx(sum * 2).add(&Fx(Fx::ln2().0 * k))
    }

    pub fn log2(&self) -> Fx {
        self.ln().div(&Fx::ln2())
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0, &Fx::unit())
    }
}

/// The rational exactly equal to a finite `f64`.
pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

/// Nearest `f64` to `num/den` (to within one ulp), including values far
/// outside the range a direct conversion of numerator and denominator
/// could handle.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let (num, den) = (num.abs(), den.abs());
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 {
        (&num << shift as u64) / &den
    } else {
        &num / (&den << (-shift) as u64)
    };
    let mut v = q.to_f64().expect("64-bit quotient");
    let mut e = -shift;
    while e > 0 {
        let step = e.min(1000);
        v *= 2f64.powi(step as i32);
        e -= step;
    }
    while e < 0 {
        let step = (-e).min(1000);
        v *= 2f64.powi(-(step as i32));
        e += step;
    }
    if negative {
        -v
    } else {
        v
    }
}

/// `C(n, k)` from a row of Pascal's triangle.
pub fn pascal(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    pascal_row(n).swap_remove(k)
}

pub fn pow(r: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// Exact `C(n,k)·p^k·(1−p)^(n−k)`.
pub fn pmf_exact(n: usize, k: usize, p: &BigRational) -> BigRational {
    let q = BigRational::one() - p;
    BigRational::from_integer(pascal(n, k).into()) * pow(p, k) * pow(&q, n - k)
}

/// Exact probability that a route of 1..bound−1 hops forms.
pub fn shorter_exact(n: usize, bound: usize, p: &BigRational) -> BigRational {
    let q = BigRational::one() - p;
    let c = pascal_row(n);
    let mut sum = BigRational::zero();
    for (l, c_l) in c.iter().enumerate().take(bound).skip(1) {
        sum += BigRational::from_integer(c_l.clone().into()) * pow(p, l) * pow(&q, n - l);
    }
    sum
}

pub fn pascal_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::one());
        row = next;
    }
    row
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Rows of a scenario CSV, without the comment line and header.
pub fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn fixed_point_constants() {
    assert!((Fx::pi().to_f64() - std::f64::consts::PI).abs() < 1e-15);
    assert!((Fx::ln2().to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    assert!((Fx::int(1000).log2().to_f64() - 1000f64.log2()).abs() < 1e-13);
    assert!((Fx::f64(0.3).ln().to_f64() - 0.3f64.ln()).abs() < 1e-15);
    assert!((Fx::int(2).sqrt().to_f64() - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(pascal(10, 3), BigUint::from(120u32));
}
