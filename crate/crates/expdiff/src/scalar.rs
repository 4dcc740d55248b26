//! Scalar arithmetic over the real and complex fields.
//!
//! Two backends share one [`Scalar`] type: exact rationals / Gaussian
//! rationals, which drive every yes/no decision (symmetry, rank, zero
//! tests), and `f64`-backed floating values for sampling and for square
//! roots that are irrational. Arithmetic between mixed backends promotes
//! to the floating side, so a result is exact only along all-exact paths.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default relative tolerance for floating comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Selects the scalar field the computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Real,
    Complex,
}

impl FieldTag {
    pub fn is_real(self) -> bool {
        matches!(self, FieldTag::Real)
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Real => f.write_str("real"),
            FieldTag::Complex => f.write_str("complex"),
        }
    }
}

/// A field element, either exact (Gaussian rational) or floating.
///
/// Real values are represented with a zero imaginary part; containers that
/// carry a [`FieldTag::Real`] tag enforce that on construction.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact { re: BigRational, im: BigRational },
    Approx { re: f64, im: f64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    /// Square root of a negative value requested over the real field.
    #[error("square root of a negative scalar over the real field")]
    NegativeRealSqrt,
    /// The exact backend cannot represent the root; callers fall back to
    /// the floating backend.
    #[error("scalar is not an exact square")]
    InexactSqrt,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid scalar literal `{0}`")]
pub struct ScalarParseError(pub String);

impl Scalar {
    pub fn zero() -> Self {
        Scalar::integer(0)
    }

    pub fn one() -> Self {
        Scalar::integer(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::Exact {
            re: BigRational::zero(),
            im: BigRational::from_integer(1.into()),
        }
    }

    pub fn integer(n: i64) -> Self {
        Scalar::Exact {
            re: BigRational::from_integer(n.into()),
            im: BigRational::zero(),
        }
    }

    /// Exact rational `p/q`. Panics if `q == 0`.
    pub fn rational(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Exact {
            re: BigRational::new(p.into(), q.into()),
            im: BigRational::zero(),
        }
    }

    /// Exact Gaussian integer `re + im*i`.
    pub fn complex_int(re: i64, im: i64) -> Self {
        Scalar::Exact {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn exact(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact { re, im }
    }

    pub fn from_f64(re: f64) -> Self {
        Scalar::Approx { re, im: 0.0 }
    }

    pub fn approx_complex(re: f64, im: f64) -> Self {
        Scalar::Approx { re, im }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Scalar::Approx { re: z.re, im: z.im }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact { .. })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Approx { re, im } => *re == 0.0 && *im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        self == &Scalar::one()
            || matches!(self, Scalar::Approx { re, im } if *re == 1.0 && *im == 0.0)
    }

    /// True when the imaginary part is (exactly) zero.
    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact { im, .. } => im.is_zero(),
            Scalar::Approx { im, .. } => *im == 0.0,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact { re, im } => Complex64::new(
                re.to_f64().unwrap_or(f64::NAN),
                im.to_f64().unwrap_or(f64::NAN),
            ),
            Scalar::Approx { re, im } => Complex64::new(*re, *im),
        }
    }

    /// Complex modulus as `f64`; used for tolerance comparisons.
    pub fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    /// `re^2 + im^2` as an exact rational, when exact.
    pub fn exact_norm_sq(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact { re, im } => Some(re * re + im * im),
            Scalar::Approx { .. } => None,
        }
    }

    pub fn exact_parts(&self) -> Option<(&BigRational, &BigRational)> {
        match self {
            Scalar::Exact { re, im } => Some((re, im)),
            Scalar::Approx { .. } => None,
        }
    }

    /// Real part as `f64`.
    pub fn re_f64(&self) -> f64 {
        match self {
            Scalar::Exact { re, .. } => re.to_f64().unwrap_or(f64::NAN),
            Scalar::Approx { re, .. } => *re,
        }
    }

    /// Forgets exactness, converting to the floating backend.
    pub fn to_approx(&self) -> Scalar {
        Scalar::from_c64(self.to_c64())
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact {
                re: re.clone(),
                im: -im,
            },
            Scalar::Approx { re, im } => Scalar::Approx { re: *re, im: -im },
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => Scalar::Exact {
                re: a + c,
                im: b + d,
            },
            _ => Scalar::from_c64(self.to_c64() + rhs.to_c64()),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => Scalar::Exact {
                re: a - c,
                im: b - d,
            },
            _ => Scalar::from_c64(self.to_c64() - rhs.to_c64()),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => Scalar::Exact {
                re: a * c - b * d,
                im: a * d + b * c,
            },
            _ => Scalar::from_c64(self.to_c64() * rhs.to_c64()),
        }
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on exact division by zero.
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => {
                let n = c * c + d * d;
                assert!(!n.is_zero(), "division by zero scalar");
                Scalar::Exact {
                    re: (a * c + b * d) / &n,
                    im: (b * c - a * d) / &n,
                }
            }
            _ => Scalar::from_c64(self.to_c64() / rhs.to_c64()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact { re: -re, im: -im },
            Scalar::Approx { re, im } => Scalar::Approx { re: -re, im: -im },
        }
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Relative comparison: `|a - b| <= tol * (1 + max(|a|, |b|))`.
///
/// On the exact backend with `tol = 0` this is decidable equality.
pub fn approx_eq(a: &Scalar, b: &Scalar, tol: f64) -> bool {
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    if a.is_exact() && b.is_exact() {
        if a == b {
            return true;
        }
        if tol == 0.0 {
            return false;
        }
    }
    let (za, zb) = (a.to_c64(), b.to_c64());
    (za - zb).norm() <= tol * (1.0 + za.norm().max(zb.norm()))
}

/// Principal square root.
///
/// Over the reals a negative input is an error. Over the complex field the
/// principal branch is the root with argument in `(-pi/2, pi/2]`, so the
/// root of a negative real is `+i * sqrt(|s|)`. Exact inputs yield exact
/// roots only when the root is itself a (Gaussian) rational; otherwise
/// [`ScalarError::InexactSqrt`] tells the caller to fall back to the
/// floating backend.
pub fn sqrt_principal(s: &Scalar, tag: FieldTag) -> Result<Scalar, ScalarError> {
    match tag {
        FieldTag::Real => {
            assert!(s.is_real(), "real-field sqrt of a complex scalar");
            match s {
                Scalar::Exact { re, .. } => {
                    if re.is_negative() {
                        Err(ScalarError::NegativeRealSqrt)
                    } else {
                        rational_sqrt(re)
                            .map(|r| Scalar::exact(r, BigRational::zero()))
                            .ok_or(ScalarError::InexactSqrt)
                    }
                }
                Scalar::Approx { re, .. } => {
                    if *re < 0.0 {
                        Err(ScalarError::NegativeRealSqrt)
                    } else {
                        Ok(Scalar::from_f64(re.sqrt()))
                    }
                }
            }
        }
        FieldTag::Complex => match s {
            Scalar::Exact { re, im } => exact_complex_sqrt(re, im).ok_or(ScalarError::InexactSqrt),
            Scalar::Approx { re, im } => {
                // Normalize -0.0 so negative reals land on the +i side of
                // the branch cut.
                let im = if *im == 0.0 { 0.0 } else { *im };
                Ok(Scalar::from_c64(Complex64::new(*re, im).sqrt()))
            }
        },
    }
}

/// Like [`sqrt_principal`] but degrades to the floating backend instead of
/// returning [`ScalarError::InexactSqrt`].
pub fn sqrt_principal_lossy(s: &Scalar, tag: FieldTag) -> Result<Scalar, ScalarError> {
    match sqrt_principal(s, tag) {
        Err(ScalarError::InexactSqrt) => sqrt_principal(&s.to_approx(), tag),
        other => other,
    }
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    debug_assert!(!n.is_negative());
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Exact square root of a nonnegative rational, when one exists.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(r.numer())?;
    let d = int_sqrt_exact(r.denom())?;
    // numer/denom are coprime, so their roots are too.
    Some(BigRational::new_raw(n, d))
}

/// Exact principal square root of `re + im*i`, when Gaussian rational.
///
/// Writes the root as `x + y*i` with `x^2 = (re + r)/2`, `y^2 = (r - re)/2`
/// for `r = |z|`; all three square roots must be rational for the result to
/// be exact.
fn exact_complex_sqrt(re: &BigRational, im: &BigRational) -> Option<Scalar> {
    if im.is_zero() {
        return if re.is_negative() {
            rational_sqrt(&-re).map(|y| Scalar::exact(BigRational::zero(), y))
        } else {
            rational_sqrt(re).map(|x| Scalar::exact(x, BigRational::zero()))
        };
    }
    let r = rational_sqrt(&(re * re + im * im))?;
    let two = BigRational::from_integer(2.into());
    let x = rational_sqrt(&((re + &r) / &two))?;
    let y_abs = rational_sqrt(&((&r - re) / &two))?;
    let y = if im.is_negative() { -y_abs } else { y_abs };
    Some(Scalar::exact(x, y))
}

fn fmt_parts(
    f: &mut fmt::Formatter<'_>,
    re: &dyn fmt::Display,
    im_is_zero: bool,
    im_is_neg: bool,
    im_abs: &dyn fmt::Display,
) -> fmt::Result {
    if im_is_zero {
        write!(f, "{re}")
    } else {
        write!(f, "{re}{}{im_abs}i", if im_is_neg { "-" } else { "+" })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact { re, im } => fmt_parts(f, re, im.is_zero(), im.is_negative(), &im.abs()),
            Scalar::Approx { re, im } => fmt_parts(f, re, *im == 0.0, *im < 0.0, &im.abs()),
        }
    }
}

enum Component {
    Rational(BigRational),
    Float(f64),
}

fn parse_component(s: &str) -> Option<Component> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return None;
    }
    if s.contains(['.', 'e', 'E']) {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Component::Float)
    } else {
        s.parse::<BigRational>().ok().map(Component::Rational)
    }
}

/// Splits `re(+|-)im` at the first sign that is neither leading nor part of
/// a float exponent.
fn split_complex_body(body: &str) -> Option<(&str, &str)> {
    let bytes = body.as_bytes();
    for k in 1..bytes.len() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'e' && bytes[k - 1] != b'E' {
            return Some((&body[..k], &body[k..]));
        }
    }
    None
}

fn parse_scalar_literal(s: &str) -> Option<Scalar> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    let (re_c, im_c) = if let Some(body) = t.strip_suffix('i') {
        match split_complex_body(body) {
            Some((re_s, im_s)) => {
                let im = match im_s {
                    "+" => Component::Rational(BigRational::from_integer(1.into())),
                    "-" => Component::Rational(BigRational::from_integer((-1).into())),
                    _ => parse_component(im_s)?,
                };
                (parse_component(re_s)?, im)
            }
            None => {
                // Pure imaginary: "i", "-i", "2i", "3/4i", "1.5i".
                let im = match body {
                    "" | "+" => Component::Rational(BigRational::from_integer(1.into())),
                    "-" => Component::Rational(BigRational::from_integer((-1).into())),
                    _ => parse_component(body)?,
                };
                (Component::Rational(BigRational::zero()), im)
            }
        }
    } else {
        (
            parse_component(t)?,
            Component::Rational(BigRational::zero()),
        )
    };
    match (re_c, im_c) {
        (Component::Rational(re), Component::Rational(im)) => Some(Scalar::Exact { re, im }),
        (re_c, im_c) => {
            let to_f = |c: Component| match c {
                Component::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
                Component::Float(x) => x,
            };
            Some(Scalar::Approx {
                re: to_f(re_c),
                im: to_f(im_c),
            })
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarParseError;

    /// Accepts exact literals (`"3"`, `"-3/4"`, `"3-4i"`, `"i"`, `"1/2i"`)
    /// and floating literals (`"1.5"`, `"1e-3"`, `"0.5+0.25i"`). A literal
    /// is exact exactly when every component is written as an integer or a
    /// fraction.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar_literal(s).ok_or_else(|| ScalarParseError(s.to_string()))
    }
}

impl Serialize for Scalar {
    /// Exact scalars serialize as strings (`"p/q"`, `"p/q+r/si"`), floating
    /// ones as a JSON number or `{"re": .., "im": ..}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact { .. } => serializer.serialize_str(&self.to_string()),
            Scalar::Approx { re, im } => {
                if *im == 0.0 {
                    serializer.serialize_f64(*re)
                } else {
                    use serde::ser::SerializeStruct;
                    let mut st = serializer.serialize_struct("Scalar", 2)?;
                    st.serialize_field("re", re)?;
                    st.serialize_field("im", im)?;
                    st.end()
                }
            }
        }
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a scalar: string literal, number, or {\"re\", \"im\"} object")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
        parse_scalar_literal(v).ok_or_else(|| E::custom(format!("invalid scalar literal `{v}`")))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
        Ok(Scalar::from_f64(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
        Ok(Scalar::from_f64(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
        Ok(Scalar::from_f64(v as f64))
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Scalar, A::Error> {
        let mut re = None;
        let mut im = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "re" => re = Some(map.next_value::<f64>()?),
                "im" => im = Some(map.next_value::<f64>()?),
                other => return Err(de::Error::unknown_field(other, &["re", "im"])),
            }
        }
        Ok(Scalar::Approx {
            re: re.ok_or_else(|| de::Error::missing_field("re"))?,
            im: im.unwrap_or(0.0),
        })
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Scalar, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: i64) -> Scalar {
        Scalar::integer(v)
    }

    #[test]
    fn scalars_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Scalar>();
        assert_send_sync::<FieldTag>();
    }

    #[test]
    fn sqrt_of_perfect_square_is_exact() {
        assert_eq!(sqrt_principal(&s(4), FieldTag::Real).unwrap(), s(2));
        assert_eq!(
            sqrt_principal(&Scalar::rational(1, 4), FieldTag::Real).unwrap(),
            Scalar::rational(1, 2)
        );
        assert_eq!(
            sqrt_principal(&Scalar::rational(9, 16), FieldTag::Complex).unwrap(),
            Scalar::rational(3, 4)
        );
    }

    #[test]
    fn sqrt_of_minus_one() {
        // Complex: principal root of -1 is i. Real: rejected.
        assert_eq!(
            sqrt_principal(&s(-1), FieldTag::Complex).unwrap(),
            Scalar::i()
        );
        assert_eq!(
            sqrt_principal(&s(-1), FieldTag::Real),
            Err(ScalarError::NegativeRealSqrt)
        );
        assert_eq!(
            sqrt_principal(&Scalar::from_f64(-1.0), FieldTag::Real),
            Err(ScalarError::NegativeRealSqrt)
        );
    }

    #[test]
    fn sqrt_gaussian_exact() {
        // (2 - i)^2 = 3 - 4i, and 2 - i is the principal root.
        let r = sqrt_principal(&Scalar::complex_int(3, -4), FieldTag::Complex).unwrap();
        assert_eq!(r, Scalar::complex_int(2, -1));
        assert_eq!(&r * &r, Scalar::complex_int(3, -4));
        // -4 -> 2i, argument exactly pi/2.
        assert_eq!(
            sqrt_principal(&s(-4), FieldTag::Complex).unwrap(),
            Scalar::complex_int(0, 2)
        );
    }

    #[test]
    fn sqrt_inexact_falls_back() {
        assert_eq!(
            sqrt_principal(&s(2), FieldTag::Real),
            Err(ScalarError::InexactSqrt)
        );
        // sqrt(i) is not Gaussian rational.
        assert_eq!(
            sqrt_principal(&Scalar::i(), FieldTag::Complex),
            Err(ScalarError::InexactSqrt)
        );
        let r = sqrt_principal_lossy(&Scalar::i(), FieldTag::Complex).unwrap();
        assert!(!r.is_exact());
        assert!((r.to_c64() * r.to_c64() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn approx_eq_examples() {
        assert!(approx_eq(&s(1), &s(1), 0.0));
        assert!(approx_eq(
            &Scalar::from_f64(1.0),
            &Scalar::from_f64(1.0 + 1e-12),
            1e-9
        ));
        assert!(!approx_eq(&s(1), &s(2), 1e-9));
    }

    #[test]
    fn gaussian_division() {
        let z = Scalar::complex_int(3, -4);
        let w = Scalar::complex_int(2, -1);
        assert_eq!(&z / &w, &z * &(&Scalar::one() / &w));
        assert_eq!(&(&z / &w) * &w, z);
    }

    #[test]
    fn display_and_parse_forms() {
        for (lit, back) in [
            ("3/4", "3/4"),
            ("-2", "-2"),
            ("3-4i", "3-4i"),
            ("0+1i", "0+1i"),
            ("i", "0+1i"),
            ("-i", "0-1i"),
            ("5/2i", "0+5/2i"),
        ] {
            let v: Scalar = lit.parse().unwrap();
            assert!(v.is_exact(), "{lit} should parse exact");
            assert_eq!(v.to_string(), back);
        }
        let f: Scalar = "1.5".parse().unwrap();
        assert_eq!(f, Scalar::from_f64(1.5));
        let c: Scalar = "0.5-0.25i".parse().unwrap();
        assert_eq!(c, Scalar::approx_complex(0.5, -0.25));
        let e: Scalar = "1e-3+2i".parse().unwrap();
        assert_eq!(e, Scalar::approx_complex(1e-3, 2.0));
        assert!("".parse::<Scalar>().is_err());
        assert!("x+1i".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("nan".parse::<Scalar>().is_err());
        assert!("1e400".parse::<Scalar>().is_err());
    }

    #[test]
    fn serde_forms() {
        let exact: Scalar = serde_json::from_str("\"3-4i\"").unwrap();
        assert_eq!(exact, Scalar::complex_int(3, -4));
        assert_eq!(serde_json::to_string(&exact).unwrap(), "\"3-4i\"");
        let num: Scalar = serde_json::from_str("4").unwrap();
        assert_eq!(num, Scalar::from_f64(4.0));
        assert_eq!(serde_json::to_string(&num).unwrap(), "4.0");
        let obj: Scalar = serde_json::from_str("{\"re\":1.0,\"im\":-2.5}").unwrap();
        assert_eq!(obj, Scalar::approx_complex(1.0, -2.5));
        assert_eq!(
            serde_json::to_string(&obj).unwrap(),
            "{\"re\":1.0,\"im\":-2.5}"
        );
    }

    fn rational_strategy() -> impl Strategy<Value = BigRational> {
        (-40i64..=40, 1i64..=12).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
    }

    fn exact_strategy() -> impl Strategy<Value = Scalar> {
        (rational_strategy(), rational_strategy()).prop_map(|(re, im)| Scalar::exact(re, im))
    }

    proptest! {
        #[test]
        fn exact_square_roundtrip(re in rational_strategy(), im in rational_strategy()) {
            // Squares of Gaussian rationals always have exact principal roots,
            // and the root squares back to the input. For nonzero inputs the
            // two second-order roots r and -r are distinct.
            let z = Scalar::exact(re, im);
            let sq = &z * &z;
            let r = sqrt_principal(&sq, FieldTag::Complex).unwrap();
            prop_assert_eq!(&(&r * &r), &sq);
            if !sq.is_zero() {
                prop_assert_ne!(&r, &(-&r));
            }
        }

        #[test]
        fn principal_branch_argument(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let r = sqrt_principal(&Scalar::approx_complex(re, im), FieldTag::Complex).unwrap();
            let arg = r.to_c64().arg();
            prop_assert!(arg > -std::f64::consts::FRAC_PI_2 - 1e-12);
            prop_assert!(arg <= std::f64::consts::FRAC_PI_2 + 1e-12);
        }

        #[test]
        fn approx_eq_reflexive_symmetric(a in exact_strategy(), b in exact_strategy(), tol in 0.0f64..0.5) {
            prop_assert!(approx_eq(&a, &a, tol));
            prop_assert_eq!(approx_eq(&a, &b, tol), approx_eq(&b, &a, tol));
        }

        #[test]
        fn exact_serde_roundtrip(a in exact_strategy()) {
            let json = serde_json::to_string(&a).unwrap();
            let back: Scalar = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(a, back);
        }

        #[test]
        fn field_axioms_spot_check(a in exact_strategy(), b in exact_strategy()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            if !b.is_zero() {
                prop_assert_eq!(&(&(&a / &b) * &b), &a);
            }
        }
    }
}
